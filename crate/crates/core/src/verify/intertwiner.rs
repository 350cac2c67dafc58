use crate::chevalley::{qint, Gen};
use crate::fields::{vertex_component, FieldEngine, FieldOperator, FiniteOp};
use crate::fock::{Half, Truncation};
use crate::scalar::{QScalar, Symbolic};

use super::report::VerificationReport;
use super::words::{Atom, OpSum, WordEvaluator};

/// Intertwining relations of the type I and type II vertex operators with
/// `e_1`, `f_1`, `t_1`, mode by mode for half-integer modes `|m| ≤ max_mode`.
pub fn verify_intertwiner(engine: &FieldEngine<Symbolic>, t: &Truncation, max_mode: Half) -> VerificationReport {
    let ev = WordEvaluator::new(engine);
    let mut r = VerificationReport::new("intertwiner");
    r.param("max_degree", t.max_degree).param("max_mode", max_mode);
    let gen = |g: Gen| Atom::Op(engine.op(&FiniteOp::chevalley(g)));
    let (e1, f1, t1) = (gen(Gen::E1), gen(Gen::F1), gen(Gen::T1));
    let q = QScalar::q_pow;
    let modes: Vec<Half> = (-max_mode.doubled()..=max_mode.doubled())
        .filter(|m2| m2.rem_euclid(2) == 1)
        .map(Half::from_doubled)
        .collect();
    for psi in [false, true] {
        let (name, g, g_dual, tsign) = if psi { ("psi", e1, f1, -1) } else { ("phi", f1, e1, 1) };
        let (gs, gds) = if psi { ("e_1", "f_1") } else { ("f_1", "e_1") };
        // type I: phi_1, phi_0, phi_-1 run down by f_1; type II runs up by e_1
        let top = if psi { -1 } else { 1 };
        let comp = |j: i64, m: Half| Atom::Op(engine.op(&vertex_component(psi, j).mode(m)));
        let tpow = if tsign > 0 { t1 } else { gen(Gen::T1Inv) };
        let tname = if tsign > 0 { "t_1" } else { "t_1^-1" };
        for &m in &modes {
            let c = |j: i64| comp(j, m);
            let rels: Vec<(String, OpSum)> = vec![
                (
                    format!("[{name}_{top}, {gds}] = 0 at mode {m}"),
                    OpSum::new().plus(vec![c(top), g_dual]).minus(vec![g_dual, c(top)]),
                ),
                (
                    format!("[{name}_0, {gds}] = [2] {tname} {name}_{top} at mode {m}"),
                    OpSum::new().plus(vec![c(0), g_dual]).minus(vec![g_dual, c(0)]).term(-qint(2), vec![tpow, c(top)]),
                ),
                (
                    format!("[{name}_{}, {gds}] = {tname} {name}_0 at mode {m}", -top),
                    OpSum::new().plus(vec![c(-top), g_dual]).minus(vec![g_dual, c(-top)]).minus(vec![tpow, c(0)]),
                ),
                (
                    format!("[{name}_{}, {gs}]_(q^-2) = 0 at mode {m}", -top),
                    OpSum::new().plus(vec![c(-top), g]).term(-q(-2), vec![g, c(-top)]),
                ),
            ];
            for (n, s) in rels {
                ev.check(&mut r, n, &s, t);
            }
            for j in [1, 0, -1] {
                let s = OpSum::new().plus(vec![t1, c(j)]).term(-q(2 * j), vec![c(j), t1]);
                ev.check(&mut r, format!("t_1 {name}_{j} = q^{} {name}_{j} t_1 at mode {m}", 2 * j), &s, t);
            }
        }
        // the fermion factor of the top component commutes with the matching current
        let sign = if psi { -1 } else { 1 };
        let s = if psi { "-" } else { "+" };
        let cur = |n: i64| Atom::Op(engine.op(&FieldOperator::current(sign).mode(Half::int(n))));
        for &m in modes.iter().filter(|m| m.doubled().abs() <= 3) {
            for n in -1..=1 {
                let sum = OpSum::new().plus(vec![comp(top, m), cur(n)]).minus(vec![cur(n), comp(top, m)]);
                ev.check(&mut r, format!("[{name}_{top} mode {m}, X^{s}_{n}] = 0"), &sum, t);
            }
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_window() {
        let e = FieldEngine::new(Symbolic);
        let r = verify_intertwiner(&e, &Truncation::new(Half::from_doubled(5)), Half::from_doubled(3));
        assert!(r.passed(), "{}", r.to_text());
        assert!(r.counts().pass >= 40, "{}", r.to_text());
    }
}
