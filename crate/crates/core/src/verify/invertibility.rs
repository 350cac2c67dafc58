use crate::chevalley::qint;
use crate::fields::{normal_ordered_merge, vertex_component, ExpFieldSpec, FieldEngine};
use crate::fock::Half;
use crate::scalar::{Deformation, Numeric, QScalar};

use super::exchange::ElementTable;
use super::report::VerificationReport;

/// `z f_i` with `φ_i(z) φ*_i(z) = f_i`.
pub fn z_f(i: i64) -> QScalar {
    let f1 = QScalar::q_pow(2).sub_ref(&QScalar::from_ratio(1, 1)).mul_ref(&QScalar::q_pow(2)).inv().expect("nonzero");
    match i {
        1 => f1,
        0 => -qint(2).mul_ref(&f1),
        -1 => QScalar::q_pow(-2).mul_ref(&f1),
        _ => panic!("component index must be 1, 0 or -1"),
    }
}

/// Partial sums of `<u|φ_i(z) φ*_i(z)|v>` with `z^-1` factored out, over
/// intermediate states of degree at most `N` for `N = 0, 1, ..., max_mid`.
pub struct PartialSums {
    pub i: i64,
    pub u: usize,
    pub v: usize,
    pub sums: Vec<f64>,
}

/// `φ_i(z) φ*_i(z) = f_i` at numeric `q0` on the states of degree at most
/// `panel_degree`, summed over intermediate states up to `max_mid`; plus the
/// exact identities behind it.
pub fn verify_invertibility(q0: f64, panel_degree: Half, max_mid: i64, tol: f64) -> VerificationReport {
    let mut r = VerificationReport::new("invertibility");
    r.param("q", q0).param("panel_degree", panel_degree).param("max_intermediate_degree", max_mid).param("tolerance", tol);
    let d = Numeric::new(q0).expect("nonzero q");
    let engine = FieldEngine::new(d);
    let fields: Vec<_> = [1, 0, -1].iter().map(|&j| vertex_component(false, j)).collect();
    let mut table = ElementTable::new(&engine, panel_degree, fields);
    let pairs = [(0, 2), (1, 1), (2, 0)];
    table.compute(&pairs, 2 * max_mid);
    let n = table.panel.len();
    let qm2 = d.q_pow(-2);
    let sums = |a: usize, u: usize, v: usize| -> Vec<f64> {
        let dv = table.panel[v].degree2();
        let mut acc = 0.0;
        let mut out = Vec::new();
        let s = table.get(a, 2 - a, u, v);
        for top in 0..=max_mid {
            for d2 in [2 * top - 1, 2 * top] {
                if d2 < 0 {
                    continue;
                }
                if let Some(c) = s.and_then(|s| s.get(&d2)) {
                    let e = (d2 - dv - 1).div_euclid(2);
                    acc += c * qm2.powi(e as i32);
                }
            }
            out.push(acc);
        }
        out
    };
    for (a, i) in [1i64, 0, -1].into_iter().enumerate() {
        let target = z_f(i).eval_f64(q0).expect("regular at q0");
        let floor = 1e4 * f64::EPSILON * target.abs().max(1.0);
        let settled = |a: f64, b: f64| b <= a || b <= floor;
        let mut worst = (0.0f64, 0usize, Vec::new());
        let mut monotone: Option<(String, String)> = None;
        for v in 0..n {
            let s = sums(a, v, v);
            let res: Vec<f64> = s.iter().map(|x| (x - target).abs()).collect();
            let last = *res.last().expect("nonempty");
            if last > worst.0 || worst.2.is_empty() {
                worst = (last, v, res.clone());
            }
            let k = res.len();
            if k >= 4 && !(settled(res[k - 4], res[k - 3]) && settled(res[k - 3], res[k - 2]) && settled(res[k - 2], res[k - 1])) && monotone.is_none() {
                monotone = Some((history(&res), format!("|{}>", table.panel[v])));
            }
        }
        r.numeric(format!("|S_N - z f_{i}| at N = {max_mid} on every state of degree <= {panel_degree}"), worst.0, tol);
        if let Some(c) = r.checks.last_mut() {
            c.witness = Some(format!("worst |{}>, residual history {}", table.panel[worst.1], history(&worst.2)));
        }
        r.exact(format!("residual of z f_{i} non-increasing over the last three increments, down to round-off {floor:.1e}"), monotone);
        let mut off = 0.0f64;
        let mut at = String::new();
        for u in 0..n {
            for v in 0..n {
                if u == v {
                    continue;
                }
                let x = sums(a, u, v).last().copied().unwrap_or(0.0).abs();
                if x > off {
                    off = x;
                    at = format!("<{}| .. |{}>", table.panel[u], table.panel[v]);
                }
            }
        }
        r.numeric(format!("off-diagonal elements of phi_{i} phi*_{i} at N = {max_mid}"), off, tol);
        if !at.is_empty() {
            if let Some(c) = r.checks.last_mut() {
                c.witness = Some(at);
            }
        }
    }
    let q = QScalar::q_pow;
    let merged = normal_ordered_merge(&[
        (ExpFieldSpec::phi_1(), 0, QScalar::from_ratio(1, 1)),
        (ExpFieldSpec::phi_1(), 0, q(-2)),
        (ExpFieldSpec::e_pm(-1), 0, q(4)),
        (ExpFieldSpec::e_pm(-1), 0, q(2)),
    ]);
    r.exact(
        ":phi_1(z) phi_1(zq^-2) E-(zq^4) E-(zq^2): = id",
        (!merged.is_identity()).then(|| (merged.to_string(), "merged spec".to_string())),
    );
    let ratio = |i: i64| z_f(i).checked_div(&z_f(1)).expect("nonzero");
    let want0 = -qint(2);
    r.exact("f_0 / f_1 = -[2]", (ratio(0) != want0).then(|| (ratio(0).to_string(), "f_0 / f_1".into())));
    r.exact("f_-1 / f_1 = q^-2", (ratio(-1) != q(-2)).then(|| (ratio(-1).to_string(), "f_-1 / f_1".into())));
    r.note("the convergence of the partial sums is observed at the sample q, not certified");
    r
}

fn history(res: &[f64]) -> String {
    let parts: Vec<String> = res.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratios_of_f() {
        assert_eq!(z_f(0).checked_div(&z_f(1)).unwrap(), -qint(2));
        assert_eq!(z_f(-1).checked_div(&z_f(1)).unwrap(), QScalar::q_pow(-2));
        assert!((z_f(1).eval_f64(0.2).unwrap() - 1.0 / ((0.04 - 1.0) * 0.04)).abs() < 1e-9);
    }

    #[test]
    fn vacuum_converges() {
        let r = verify_invertibility(0.2, Half::ZERO, 8, 1e-3);
        assert!(r.fully_passed(), "{}", r.to_text());
    }
}
