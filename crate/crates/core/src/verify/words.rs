use crate::fields::{FieldEngine, OpId};
use crate::fock::{enumerate_basis, FockState, FockVector, Half, MomentumOp, Truncation};
use crate::scalar::{QScalar, Symbolic};

use super::report::VerificationReport;

/// Building block of an operator word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Atom {
    Op(OpId),
    Boson(i64),
    Fermion(Half),
    Momentum(MomentumOp),
    /// `P_±`
    Projector(i64),
}

/// `Σ c · word`, words applied right to left.
#[derive(Clone, Debug, Default)]
pub struct OpSum {
    pub terms: Vec<(QScalar, Vec<Atom>)>,
}

impl OpSum {
    pub fn new() -> Self {
        OpSum::default()
    }

    pub fn term(mut self, c: QScalar, word: Vec<Atom>) -> Self {
        self.terms.push((c, word));
        self
    }

    pub fn plus(self, word: Vec<Atom>) -> Self {
        self.term(QScalar::from_ratio(1, 1), word)
    }

    pub fn minus(self, word: Vec<Atom>) -> Self {
        self.term(QScalar::from_ratio(-1, 1), word)
    }
}

/// Exact evaluation of operator words on the Fock module.
pub struct WordEvaluator<'a> {
    pub engine: &'a FieldEngine<Symbolic>,
    unbounded: Truncation,
}

impl<'a> WordEvaluator<'a> {
    pub fn new(engine: &'a FieldEngine<Symbolic>) -> Self {
        WordEvaluator { engine, unbounded: Truncation::with_window(Half::int(i64::MAX / 8), i64::MIN / 8, i64::MAX / 8) }
    }

    /// Doubled degree change of one atom.
    pub fn shift2(&self, a: Atom) -> i64 {
        match a {
            Atom::Op(o) => self.engine.shift2(o),
            Atom::Boson(m) => -2 * m,
            Atom::Fermion(r) => -r.doubled(),
            Atom::Momentum(_) | Atom::Projector(_) => 0,
        }
    }

    /// Highest doubled degree reached, relative to the start, while applying
    /// `word`; `ExpQ` changes the degree by a momentum-dependent amount and is
    /// bounded from the momentum of the state.
    fn reach2(&self, word: &[Atom], s: &FockState) -> i64 {
        let mut deg = s.degree2();
        let mut p = s.momentum();
        let mut top = deg;
        for a in word.iter().rev() {
            match a {
                Atom::Momentum(MomentumOp::ExpQ(k)) => {
                    deg += (p + k) * (p + k) - p * p;
                    p += k;
                }
                _ => deg += self.shift2(*a),
            }
            top = top.max(deg);
        }
        top - s.degree2()
    }

    pub fn apply_atom(&self, a: Atom, v: &FockVector<QScalar>) -> FockVector<QScalar> {
        let osc = self.engine.oscillators();
        match a {
            Atom::Op(o) => self.engine.apply_op(o, v),
            Atom::Boson(m) => osc.apply_boson(m, v, &self.unbounded),
            Atom::Fermion(r) => osc.apply_fermion(r, v, &self.unbounded),
            Atom::Momentum(op) => osc.apply_momentum(op, v, &self.unbounded),
            Atom::Projector(sign) => osc.project(sign, v),
        }
    }

    pub fn apply_word(&self, word: &[Atom], v: &FockVector<QScalar>) -> FockVector<QScalar> {
        let mut out = v.clone();
        for a in word.iter().rev() {
            if out.is_zero() {
                break;
            }
            out = self.apply_atom(*a, &out);
        }
        out
    }

    pub fn apply(&self, sum: &OpSum, v: &FockVector<QScalar>) -> FockVector<QScalar> {
        let mut out = FockVector::zero();
        for (c, w) in &sum.terms {
            out.add_scaled(c, &self.apply_word(w, v));
        }
        out
    }

    /// States of the truncation on which every word of `sum` stays inside it.
    pub fn safe_states(&self, sum: &OpSum, t: &Truncation) -> (Vec<FockState>, usize) {
        let all = enumerate_basis(t);
        let total = all.len();
        let safe: Vec<FockState> = all
            .into_iter()
            .filter(|s| sum.terms.iter().all(|(_, w)| s.degree2() + self.reach2(w, s) <= t.max_degree.doubled()))
            .collect();
        let skipped = total - safe.len();
        (safe, skipped)
    }

    /// Records `sum = 0` on the safe states of `t` as one exact check.
    pub fn check(&self, report: &mut VerificationReport, name: impl Into<String>, sum: &OpSum, t: &Truncation) {
        let name = name.into();
        let (states, skipped) = self.safe_states(sum, t);
        if states.is_empty() {
            report.skip(name, format!("no state of degree <= {} keeps every word inside the window", t.max_degree));
            return;
        }
        let witness = self.first_nonzero(sum, &states);
        let note = window_note(t, states.len(), skipped);
        report.exact(name, witness);
        if let Some(c) = report.checks.last_mut() {
            c.window = Some(note);
        }
    }

    /// Records `sum = 0` for every `sum` in `sums`, each on its own safe
    /// states, as one exact check.
    pub fn check_all(&self, report: &mut VerificationReport, name: impl Into<String>, sums: &[OpSum], t: &Truncation) {
        let name = name.into();
        let (mut tested, mut skipped) = (0, 0);
        let mut witness = None;
        for sum in sums {
            let (states, sk) = self.safe_states(sum, t);
            tested += states.len();
            skipped += sk;
            if witness.is_none() {
                witness = self.first_nonzero(sum, &states);
            }
        }
        if tested == 0 {
            report.skip(name, format!("no state of degree <= {} keeps every word inside the window", t.max_degree));
            return;
        }
        report.exact(name, witness);
        if let Some(c) = report.checks.last_mut() {
            c.window = Some(window_note(t, tested, skipped));
        }
    }

    /// First state on which `sum` does not vanish, with the residual vector.
    pub fn first_nonzero(&self, sum: &OpSum, states: &[FockState]) -> Option<(String, String)> {
        for s in states {
            let r = self.apply(sum, &FockVector::basis(s.clone()));
            if !r.is_zero() {
                return Some((show_vector(&r), s.to_string()));
            }
        }
        None
    }
}

/// Short rendering of a vector for report witnesses.
pub fn show_vector<S: crate::scalar::Ring + std::fmt::Display>(v: &FockVector<S>) -> String {
    let mut parts: Vec<String> = v.iter().take(4).map(|(s, c)| format!("({c})|{s}>")).collect();
    if v.len() > 4 {
        parts.push(format!("... {} terms", v.len()));
    }
    parts.join(" + ")
}

/// Describes the tested window of an identity.
pub fn window_note(t: &Truncation, tested: usize, skipped: usize) -> String {
    format!("max degree {}, {} states tested, {} outside the safe window", t.max_degree, tested, skipped)
}

