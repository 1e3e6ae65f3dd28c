//! Exact and numerical machinery for Poisson-type summation formulas whose
//! nodes are `±sqrt(n)` and whose weights involve the sum-of-squares
//! function `r_k(n)`, for odd dimensions `k >= 3`.
//!
//! - [`sumsq`]: exact `r_k(n)` tables and a brute-force oracle.
//! - [`coeffs`]: the coefficients `alpha_k`, `beta_{j,k}` and Bessel polynomials, exactly.
//! - [`schwartz`]: polynomial-times-Gaussian test functions with exact
//!   derivatives and Fourier transforms, and a small expression language.
//! - [`atoms`]: finite combs of derivative-delta atoms, the distributions
//!   `sigma_k`, their Fourier transforms and the projection of point measures.
//! - [`formulas`]: both sides of each summation identity with residuals and tail bounds.
//! - [`radial`]: radial Fourier transforms in odd dimensions and the Fourier
//!   transform of the sphere surface measure by four routes.

pub mod atoms;
pub mod coeffs;
pub mod error;
pub mod formulas;
pub mod limits;
pub mod numeric;
pub mod radial;
pub mod schwartz;
pub mod sumsq;

pub use error::{Error, Result};
pub use limits::WorkLimits;
