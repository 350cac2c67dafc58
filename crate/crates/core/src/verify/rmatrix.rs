use crate::evalrep::build_evaluation_rep;
use crate::rmatrix::{build_rmatrix, check_initial_condition, check_structure, unitarity_residual, RMatrixEntries};
use crate::ybe::{check_yang_baxter, ybe_numeric_residual};

use super::report::VerificationReport;

/// Structure, `R(1) = P`, Yang-Baxter and the evaluation representation,
/// plus floating Yang-Baxter spot checks at `(q, z, w)` in `spots`.
pub fn verify_rmatrix(spots: &[(f64, f64, f64)], tol: f64) -> VerificationReport {
    let mut r = VerificationReport::new("rmatrix");
    let rm = build_rmatrix();
    r.param("spot_checks", spots.len()).param("tolerance", format!("{tol:.0e}"));
    r.absorb("structure", check_structure(&rm));
    r.absorb("initial condition", check_initial_condition(&rm));
    r.absorb("yang-baxter", check_yang_baxter(&rm));
    for &(q0, z, w) in spots {
        r.numeric(format!("yang-baxter at q = {q0:.4}, z = {z:.4}, w = {w:.4}"), ybe_numeric_residual(&rm, q0, z, w), tol);
    }
    r.absorb("evaluation representation", build_evaluation_rep().check_relations());
    r.diagnostic("unitarity R(z) R21(1/z) - id", unitarity_residual(&rm).unwrap_or_else(|| "0".into()));
    let uncorrected = RMatrixEntries::uncorrected().matrix();
    r.diagnostic(
        "yang-baxter residual with the uncorrected f entries at q = 0.3, z = 1.7, w = 0.4",
        format!("{:.3e}", ybe_numeric_residual(&uncorrected, 0.3, 1.7, 0.4)),
    );
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes() {
        let r = verify_rmatrix(&[(0.45, 0.8, 2.5)], 1e-10);
        assert!(r.fully_passed(), "{}", r.to_text());
        assert!(r.checks.iter().any(|c| c.description.contains("R(1) = P")));
        assert!(r.diagnostics.iter().any(|d| d.name.starts_with("unitarity") && d.value == "0"));
    }
}
