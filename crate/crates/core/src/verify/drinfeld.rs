use crate::chevalley::{check_chevalley, qint, ChevalleyModule, Gen};
use crate::fields::{FieldEngine, FieldOperator, FiniteOp};
use crate::fock::{enumerate_basis, FockState, FockVector, Half, Truncation};
use crate::scalar::{QScalar, Symbolic};

use super::report::VerificationReport;
use super::words::{show_vector, Atom, OpSum, WordEvaluator};

fn q(k: i64) -> QScalar {
    QScalar::q_pow(k)
}

/// Drinfeld relations of the currents for modes `|m|, |n| ≤ range`.
pub fn verify_drinfeld(engine: &FieldEngine<Symbolic>, t: &Truncation, range: i64) -> VerificationReport {
    let ev = WordEvaluator::new(engine);
    let mut r = VerificationReport::new("drinfeld");
    r.param("max_degree", t.max_degree).param("mode_range", range);
    let x = |sign: i64, m: i64| Atom::Op(engine.op(&FieldOperator::current(sign).mode(Half::int(m))));
    let psi = |sign: i64, m: i64| {
        Atom::Op(engine.op(&FieldOperator::Exp(crate::fields::ExpFieldSpec::psi_pm(sign)).mode(Half::int(m))))
    };
    let k = Atom::Op(engine.op(&FiniteOp::KPower(1)));
    let kinv = Atom::Op(engine.op(&FiniteOp::KPower(-1)));
    let modes: Vec<i64> = (-range..=range).collect();
    for sign in [1, -1] {
        let s = if sign > 0 { "+" } else { "-" };
        for &m in &modes {
            let sum = OpSum::new().plus(vec![k, x(sign, m), kinv]).term(-q(2 * sign), vec![x(sign, m)]);
            ev.check(&mut r, format!("K X^{s}_{m} K^-1 = q^{} X^{s}_{m}", 2 * sign), &sum, t);
        }
        for &m in modes.iter().filter(|&&m| m != 0) {
            for &n in &modes {
                let c = qint(2 * m).mul_ref(&QScalar::from_ratio(sign, m)).mul_ref(&q(-sign * m.abs()));
                let sum = OpSum::new()
                    .plus(vec![Atom::Boson(m), x(sign, n)])
                    .minus(vec![x(sign, n), Atom::Boson(m)])
                    .term(-c, vec![x(sign, n + m)]);
                ev.check(&mut r, format!("[a_{m}, X^{s}_{n}] = {}[{}]/{m} q^{} X^{s}_{}", s, 2 * m, -sign * m.abs(), n + m), &sum, t);
            }
        }
    }
    let inv = q(1).sub_ref(&q(-1)).inv().expect("nonzero");
    for &m in &modes {
        for &n in &modes {
            let sum = OpSum::new()
                .plus(vec![x(1, m), x(-1, n)])
                .minus(vec![x(-1, n), x(1, m)])
                .term(-inv.mul_ref(&q(m - n)), vec![psi(1, m + n)])
                .term(inv.mul_ref(&q(n - m)), vec![psi(-1, m + n)]);
            ev.check(&mut r, format!("[X^+_{m}, X^-_{n}] = (q^{} psi^+_{} - q^{} psi^-_{})/(q - q^-1)", m - n, m + n, n - m, m + n), &sum, t);
        }
    }
    for sign in [1, -1] {
        let s = if sign > 0 { "+" } else { "-" };
        let c = q(2 * sign);
        for &m in &modes {
            for &n in &modes {
                let sum = OpSum::new()
                    .plus(vec![x(sign, m + 1), x(sign, n)])
                    .term(-c.clone(), vec![x(sign, m), x(sign, n + 1)])
                    .term(-c.clone(), vec![x(sign, n), x(sign, m + 1)])
                    .plus(vec![x(sign, n + 1), x(sign, m)]);
                ev.check(&mut r, format!("quadratic X^{s} relation at (m, n) = ({m}, {n})"), &sum, t);
            }
        }
    }
    r
}

/// The Fock module as a module over the Chevalley generators.
pub struct FockChevalley<'a> {
    pub engine: &'a FieldEngine<Symbolic>,
    pub states: Vec<FockState>,
}

impl<'a> FockChevalley<'a> {
    /// Test states of degree at most `max_degree - reach`, where `reach`
    /// bounds how far a relation word raises the degree.
    pub fn new(engine: &'a FieldEngine<Symbolic>, t: &Truncation, reach: Half) -> Self {
        let limit = t.max_degree - reach;
        let states = if limit < Half::ZERO {
            Vec::new()
        } else {
            enumerate_basis(&Truncation::with_window(limit, t.p_min, t.p_max))
        };
        FockChevalley { engine, states }
    }
}

impl ChevalleyModule for FockChevalley<'_> {
    type Vector = FockVector<QScalar>;

    fn test_vectors(&self) -> Vec<(String, Self::Vector)> {
        self.states.iter().map(|s| (s.to_string(), FockVector::basis(s.clone()))).collect()
    }

    fn apply(&self, g: Gen, v: &Self::Vector) -> Self::Vector {
        self.engine.apply_op(self.engine.op(&FiniteOp::chevalley(g)), v)
    }

    fn combine(&self, terms: &[(QScalar, Self::Vector)]) -> Self::Vector {
        let mut out = FockVector::zero();
        for (c, v) in terms {
            out.add_scaled(c, v);
        }
        out
    }

    fn is_zero(&self, v: &Self::Vector) -> bool {
        v.is_zero()
    }

    fn show(&self, v: &Self::Vector) -> String {
        show_vector(v)
    }
}

/// Chevalley relations, both Serre relations included, on the Fock module.
pub fn verify_chevalley(engine: &FieldEngine<Symbolic>, t: &Truncation) -> VerificationReport {
    // the Serre words f_0^3 f_1 raise the degree by 3
    let m = FockChevalley::new(engine, t, Half::int(3));
    let mut r = if m.states.is_empty() {
        let mut r = VerificationReport::new("chevalley");
        r.skip("Chevalley relations", format!("max degree {} leaves no room for the Serre words", t.max_degree));
        r
    } else {
        check_chevalley(&m, "chevalley")
    };
    r.param("max_degree", t.max_degree).param("test_states", m.states.len());
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn drinfeld_small_window() {
        let e = FieldEngine::new(Symbolic);
        let r = verify_drinfeld(&e, &Truncation::new(Half::int(2)), 1);
        assert!(r.passed(), "{}", r.to_text());
        assert!(r.counts().pass > 20);
    }

    #[test]
    fn chevalley_small_window() {
        let e = FieldEngine::new(Symbolic);
        let r = verify_chevalley(&e, &Truncation::new(Half::from_doubled(7)));
        assert!(r.fully_passed(), "{}", r.to_text());
    }
}
