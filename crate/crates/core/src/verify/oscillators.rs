use crate::chevalley::qint;
use crate::fields::FieldEngine;
use crate::fock::{Half, MomentumOp, Truncation};
use crate::scalar::{QScalar, Symbolic};

use super::report::VerificationReport;
use super::words::{Atom, OpSum, WordEvaluator};

/// Oscillator (anti)commutators for boson modes `0 < |m| ≤ max_boson` and
/// fermion modes `|r| ≤ max_fermion`.
pub fn verify_oscillators(engine: &FieldEngine<Symbolic>, t: &Truncation, max_boson: i64, max_fermion: Half) -> VerificationReport {
    let ev = WordEvaluator::new(engine);
    let mut r = VerificationReport::new("oscillators");
    r.param("max_degree", t.max_degree).param("boson_modes", max_boson).param("fermion_modes", max_fermion);
    let bosons: Vec<i64> = (-max_boson..=max_boson).filter(|&m| m != 0).collect();
    for &m in &bosons {
        for &n in &bosons {
            let mut sum = OpSum::new().plus(vec![Atom::Boson(m), Atom::Boson(n)]).minus(vec![Atom::Boson(n), Atom::Boson(m)]);
            if m + n == 0 {
                sum = sum.term(-qint(2 * m).mul_ref(&qint(2 * m)).mul_ref(&QScalar::from_ratio(1, m)), vec![]);
            }
            ev.check(&mut r, format!("[a_{m}, a_{n}]"), &sum, t);
        }
    }
    let top = max_fermion.doubled();
    let fermions: Vec<Half> = (-top..=top).filter(|x| x % 2 != 0).map(Half::from_doubled).collect();
    for &a in &fermions {
        for &b in &fermions {
            let mut sum = OpSum::new().plus(vec![Atom::Fermion(a), Atom::Fermion(b)]).plus(vec![Atom::Fermion(b), Atom::Fermion(a)]);
            if a.doubled() + b.doubled() == 0 {
                let r2 = a.doubled().abs();
                let kappa = qint(2 * r2).mul_ref(&qint(r2).mul_ref(&QScalar::from_ratio(2, 1)).inv().expect("nonzero"));
                sum = sum.term(-kappa, vec![]);
            }
            ev.check(&mut r, format!("{{b_{a}, b_{b}}}"), &sum, t);
        }
    }
    for &m in &bosons {
        for &a in fermions.iter().filter(|x| x.doubled().abs() <= 3) {
            let sum = OpSum::new().plus(vec![Atom::Boson(m), Atom::Fermion(a)]).minus(vec![Atom::Fermion(a), Atom::Boson(m)]);
            ev.check(&mut r, format!("[a_{m}, b_{a}]"), &sum, t);
        }
    }
    let p = Atom::Momentum(MomentumOp::P);
    let eq = Atom::Momentum(MomentumOp::ExpQ(1));
    ev.check(&mut r, "[P, e^Q] = e^Q", &OpSum::new().plus(vec![p, eq]).minus(vec![eq, p]).minus(vec![eq]), t);
    ev.check(&mut r, "[P, a_1] = 0", &OpSum::new().plus(vec![p, Atom::Boson(1)]).minus(vec![Atom::Boson(1), p]), t);
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_window() {
        let e = FieldEngine::new(Symbolic);
        let r = verify_oscillators(&e, &Truncation::new(Half::int(3)), 1, Half::from_doubled(3));
        assert!(r.fully_passed(), "{}", r.to_text());
    }
}
