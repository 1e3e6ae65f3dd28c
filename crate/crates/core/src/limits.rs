//! Work and memory caps for the enumerating operations.

use std::env;

/// Environment variable that overrides every enumeration cap with one value.
pub const WORKCAP_ENV: &str = "GUINAND_WORKCAP";

/// Caps on table sizes and enumeration work. Exceeding a cap is an error,
/// never a silent truncation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkLimits {
    /// Largest `max_n` accepted by `rk_table`.
    pub table_max_n: u64,
    /// Largest `k * (2 floor(sqrt n) + 1)^k` accepted by the brute-force oracle.
    pub oracle_box_points: f64,
    /// Largest estimated lattice point count for shifted-lattice enumeration.
    pub lattice_points: f64,
    /// Largest radius accepted for shifted lattices in dimension 7 and above.
    pub high_dim_radius: f64,
}

impl Default for WorkLimits {
    fn default() -> Self {
        WorkLimits { table_max_n: 1_000_000, oracle_box_points: 1e9, lattice_points: 1e8, high_dim_radius: 6.0 }
    }
}

impl WorkLimits {
    /// Defaults, with the enumeration caps replaced by `GUINAND_WORKCAP`
    /// when it is set to a positive number.
    pub fn from_env() -> Self {
        let mut limits = WorkLimits::default();
        if let Some(cap) = env::var(WORKCAP_ENV).ok().and_then(|v| v.trim().parse::<f64>().ok()) {
            if cap.is_finite() && cap > 0.0 {
                limits.oracle_box_points = cap;
                limits.lattice_points = cap;
                limits.table_max_n = cap.min(u64::MAX as f64) as u64;
            }
        }
        limits
    }
}
