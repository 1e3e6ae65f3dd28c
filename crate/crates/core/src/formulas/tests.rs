use super::*;
use crate::schwartz::parse;
use crate::sumsq::rk_table;

fn f(s: &str) -> GaussPoly {
    parse(s).unwrap().value
}

/// `1 + sum r_3(n) q^n`, summed from the table independently of the library paths.
fn theta3_series(q_exp: f64) -> f64 {
    let table = rk_table(3, 400).unwrap();
    let mut s = 0.0;
    for n in (1..=400u64).rev() {
        s += table.get_f64(n) * (-PI * q_exp * n as f64).exp();
    }
    1.0 + s
}

#[test]
fn pinned_guinand_value() {
    let a = theta3_series(0.5);
    let b = 2.0 * 2f64.sqrt() * theta3_series(2.0);
    assert!((a - 2.860237190695389).abs() < 1e-14);
    assert!((a - b).abs() < 1e-13);
    let lhs = lhs_general(3, &f("t*exp(-pi*t^2/2)"), 400).unwrap();
    assert!((lhs.re - 2.860237190695389).abs() < 1e-13 && lhs.im == 0.0);
}

#[test]
fn lhs_eigenfunction_series() {
    let lhs = lhs_general(3, &f("t*exp(-pi*t^2)"), 400).unwrap();
    assert!((lhs.re - theta3_series(1.0)).abs() < 1e-14);
    assert_eq!(lhs_general(7, &GaussPoly::zero(), 10).unwrap(), Complex64::new(0.0, 0.0));
}

#[test]
fn lhs_rejects_even() {
    assert_eq!(lhs_general(3, &f("exp(-pi*t^2)"), 10), Err(Error::Parity { expected: "odd" }));
}

#[test]
fn rhs_guinand_example() {
    let psi = f("(-2.8284271247461903*i)*t*exp(-2*pi*t^2)");
    let rhs = rhs_general(3, &psi, 50).unwrap();
    assert!((rhs.re - 2.860237190695389).abs() < 1e-10);
}

#[test]
fn rhs_eigenfunction_k5() {
    let phi = f("t*exp(-pi*t^2)");
    let psi = phi.fourier().unwrap();
    let lhs = lhs_general(5, &phi, 400).unwrap();
    let rhs = rhs_general(5, &psi, 400).unwrap();
    assert!(rel_residual(lhs, rhs).1 <= 1e-12, "{lhs} {rhs}");
}

#[test]
fn verify_examples() {
    let r = verify(3, &f("t*exp(-pi*t^2)"), 400, 1e-10).unwrap();
    assert!(r.rel_residual <= 1e-13 && r.passed);
    assert_eq!(r.identity, Identity::Guinand);
    let r = verify(5, &f("t*exp(-pi*t^2/2)"), 400, 1e-10).unwrap();
    assert!(r.rel_residual <= 1e-10, "{r:?}");
    assert!(r.specialized_rel_diff.unwrap() <= SPECIALIZED_TOL);
    let r = verify(7, &f("t^3*exp(-pi*t^2)"), 400, 1e-10).unwrap();
    assert!(r.rel_residual <= 1e-10, "{r:?}");
    let r = verify(9, &f("(t^5 - t)*exp(-pi*t^2)"), 400, 1e-9).unwrap();
    assert!(r.rel_residual <= 1e-9, "{r:?}");
    assert_eq!(r.identity, Identity::GeneralK);
}

#[test]
fn verify_suite() {
    for k in [3, 5, 7, 9, 11] {
        for p in ["t", "t^3", "t^5 - t"] {
            for a in ["1/2", "1", "2"] {
                let phi = f(&format!("({p})*exp(-pi*{a}*t^2)"));
                let r = verify(k, &phi, 400, 1e-9).unwrap();
                assert!(r.rel_residual <= 1e-9, "k={k} {p} a={a}: {r:?}");
            }
        }
    }
}

#[test]
fn guinand_specialized_matches() {
    let phi = f("(t^3 + 2*t)*exp(-pi*t^2/3)");
    let psi = phi.fourier().unwrap();
    let g = rhs_general(3, &psi, 200).unwrap();
    let s = rhs_guinand(&psi, 200).unwrap();
    assert!(rel_residual(g, s).1 <= 1e-15);
    let g5 = rhs_general(5, &psi, 200).unwrap();
    let s5 = rhs_k5(&psi, 200).unwrap();
    assert!(rel_residual(g5, s5).1 <= SPECIALIZED_TOL);
}

#[test]
fn duality_pairings() {
    for k in [3, 5, 7] {
        let phi = f("(t^5 - t)*exp(-pi*t^2/2)");
        let r = duality(k, &phi, 400, 1e-9).unwrap();
        assert!(r.rel_residual <= 1e-9, "{r:?}");
    }
}

#[test]
fn report_json_shape() {
    let r = verify(5, &f("t*exp(-pi*t^2)"), 20, 1e-10).unwrap();
    let v: serde_json::Value = serde_json::to_value(&r).unwrap();
    for key in [
        "identity",
        "k",
        "lhs",
        "rhs",
        "abs_residual",
        "rel_residual",
        "tail_bound_lhs",
        "tail_bound_rhs",
        "terms_used",
        "truncation",
    ] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["identity"], "k5");
    let back: VerificationReport = serde_json::from_value(v).unwrap();
    assert_eq!(back, r);
}

#[test]
fn partial_sums_end_at_totals() {
    let phi = f("t^3*exp(-pi*t^2/2)");
    let rows = shell_partial_sums(5, &phi, 100).unwrap();
    let r = verify(5, &phi, 100, 1e-9).unwrap();
    let last = rows.last().unwrap();
    assert_eq!((last.lhs_partial, last.rhs_partial), (r.lhs, r.rhs));
    let csv = shell_rows_csv(&rows);
    assert_eq!(csv.lines().count(), rows.len() + 1);
    assert!(csv.starts_with("n,lhs_term_re"));
}
