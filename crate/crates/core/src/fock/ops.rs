use num_traits::{One, Zero};

use crate::scalar::{Deformation, Field, Ring};

use super::basis::Truncation;
use super::state::{FockState, Half};
use super::vector::FockVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MomentumOp {
    /// `e^{sQ}`
    ExpQ(i64),
    P,
    /// `K = q^{2P}`
    K,
    /// `exp(-2πi d)`
    Parity,
}

/// Oscillator algebra acting on the rescaled monomial basis, with the
/// structure constants cached for one realization of `q`.
#[derive(Clone, Debug)]
pub struct Oscillators<D: Deformation> {
    d: D,
    q2n: Vec<D::Scalar>,
    q2n_over_n: Vec<D::Scalar>,
    kappa: Vec<D::Scalar>,
}

const CACHED: usize = 64;

impl<D: Deformation> Oscillators<D> {
    pub fn new(d: D) -> Self {
        let q2n = (0..=CACHED).map(|n| d.q_integer(2 * n as i64)).collect::<Vec<_>>();
        let q2n_over_n = (0..=CACHED)
            .map(|n| if n == 0 { D::Scalar::zero() } else { q2n[n].mul_ref(&D::Scalar::from_ratio(1, n as i64)) })
            .collect();
        let half = D::Scalar::from_ratio(1, 2);
        let kappa = (0..=2 * CACHED)
            .map(|r2| d.q_pow(r2 as i64).add_ref(&d.q_pow(-(r2 as i64))).mul_ref(&half))
            .collect();
        Oscillators { d, q2n, q2n_over_n, kappa }
    }

    pub fn deformation(&self) -> &D {
        &self.d
    }

    /// `[2n]`: `a_{-n}` raises the rescaled monomial by this factor.
    pub fn q2n(&self, n: usize) -> D::Scalar {
        self.q2n.get(n).cloned().unwrap_or_else(|| self.d.q_integer(2 * n as i64))
    }

    /// `[2n]/n`: `a_n` lowers the rescaled monomial by `m` times this.
    pub fn q2n_over_n(&self, n: usize) -> D::Scalar {
        self.q2n_over_n
            .get(n)
            .cloned()
            .unwrap_or_else(|| self.d.q_integer(2 * n as i64).mul_ref(&D::Scalar::from_ratio(1, n as i64)))
    }

    /// `{b_r, b_{-r}} = [4r]/(2[2r]) = (q^{2r} + q^{-2r})/2`, indexed by `2r`.
    pub fn kappa(&self, r2: usize) -> D::Scalar {
        self.kappa.get(r2).cloned().unwrap_or_else(|| {
            self.d.q_pow(r2 as i64).add_ref(&self.d.q_pow(-(r2 as i64))).mul_ref(&D::Scalar::from_ratio(1, 2))
        })
    }

    /// Plain-monomial normalization `Π [2n]^{m_n}` of a basis state.
    pub fn plain_norm(&self, s: &FockState) -> D::Scalar {
        let mut acc = D::Scalar::one();
        for (n2, m) in s.plain_norm() {
            for _ in 0..m {
                acc = acc.mul_ref(&self.q2n((n2 / 2) as usize));
            }
        }
        acc
    }

    /// The unscaled monomial `Π a_{-n}^{m_n} b ⋯ e^{pQ}|0>` in the rescaled basis.
    pub fn plain(&self, s: &FockState) -> FockVector<D::Scalar> {
        FockVector::term(s.clone(), self.plain_norm(s))
    }

    /// Coefficient of the unscaled monomial of `s` in `v`.
    pub fn plain_coefficient(&self, v: &FockVector<D::Scalar>, s: &FockState) -> D::Scalar {
        v.coefficient_of(s).try_div(&self.plain_norm(s)).expect("q-integers are invertible")
    }

    pub fn apply_boson(&self, m: i64, v: &FockVector<D::Scalar>, t: &Truncation) -> FockVector<D::Scalar> {
        assert!(m != 0, "a_0 is not part of the oscillator algebra");
        let n = m.unsigned_abs() as usize;
        let mut out = FockVector::zero();
        out.note_dropped(v.dropped());
        let mut dropped = 0;
        for (s, c) in v.iter() {
            let mut s2 = s.clone();
            if m < 0 {
                s2.add_bosons(n, 1);
                if !t.contains(&s2) {
                    dropped += 1;
                    continue;
                }
                out.add_term(s2, c.mul_ref(&self.q2n(n)));
            } else {
                let k = s.multiplicity(n);
                if k == 0 {
                    continue;
                }
                s2.remove_bosons(n, 1);
                let f = self.q2n_over_n(n).mul_ref(&D::Scalar::from_i64(k as i64));
                out.add_term(s2, c.mul_ref(&f));
            }
        }
        out.note_dropped(dropped);
        out
    }

    /// `b_r` for a nonzero half-integer `r`.
    pub fn apply_fermion(&self, r: Half, v: &FockVector<D::Scalar>, t: &Truncation) -> FockVector<D::Scalar> {
        assert!(!r.is_integer(), "fermion modes are half-integers");
        let r2 = r.doubled().unsigned_abs() as u32;
        let mut out = FockVector::zero();
        out.note_dropped(v.dropped());
        let mut dropped = 0;
        for (s, c) in v.iter() {
            let mut s2 = s.clone();
            if r.doubled() < 0 {
                let Some(sign) = s2.insert_fermion(r2) else { continue };
                if !t.contains(&s2) {
                    dropped += 1;
                    continue;
                }
                out.add_term(s2, c.mul_ref(&D::Scalar::from_i64(sign)));
            } else {
                let Some(sign) = s2.remove_fermion(r2) else { continue };
                out.add_term(s2, c.mul_ref(&self.kappa(r2 as usize)).mul_ref(&D::Scalar::from_i64(sign)));
            }
        }
        out.note_dropped(dropped);
        out
    }

    pub fn apply_momentum(&self, op: MomentumOp, v: &FockVector<D::Scalar>, t: &Truncation) -> FockVector<D::Scalar> {
        let mut out = FockVector::zero();
        out.note_dropped(v.dropped());
        let mut dropped = 0;
        for (s, c) in v.iter() {
            match op {
                MomentumOp::ExpQ(k) => {
                    let mut s2 = s.clone();
                    s2.shift_momentum(k);
                    if !t.contains(&s2) {
                        dropped += 1;
                        continue;
                    }
                    out.add_term(s2, c.clone());
                }
                MomentumOp::P => out.add_term(s.clone(), c.mul_ref(&D::Scalar::from_i64(s.momentum()))),
                MomentumOp::K => out.add_term(s.clone(), c.mul_ref(&self.d.q_pow(2 * s.momentum()))),
                MomentumOp::Parity => out.add_term(s.clone(), c.mul_ref(&D::Scalar::from_i64(s.parity()))),
            }
        }
        out.note_dropped(dropped);
        out
    }

    /// `P_± = (1 ± exp(-2πi d))/2`, computed from the exact parity sign.
    pub fn project(&self, sign: i64, v: &FockVector<D::Scalar>) -> FockVector<D::Scalar> {
        v.filter(|s| s.parity() == sign.signum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::qint;
    use crate::scalar::{QScalar, Symbolic};

    fn ctx() -> (Oscillators<Symbolic>, Truncation) {
        (Oscillators::new(Symbolic), Truncation::new(Half::int(6)))
    }

    fn h(s: &str) -> Half {
        s.parse().unwrap()
    }

    #[test]
    fn boson_examples() {
        let (o, t) = ctx();
        let vac = FockVector::basis(FockState::vacuum());
        let v = o.apply_boson(1, &o.apply_boson(-1, &vac, &t), &t);
        assert_eq!(v.coefficient_of(&FockState::vacuum()), qint(2).mul_ref(&qint(2)));
        assert!(o.apply_boson(2, &vac, &t).is_zero());
        let a11 = o.plain(&FockState::new(0, &[1, 1], &[]).unwrap());
        let v = o.apply_boson(1, &a11, &t);
        let a1 = FockState::new(0, &[1], &[]).unwrap();
        let two_q2sq = QScalar::from_ratio(2, 1).mul_ref(&qint(2)).mul_ref(&qint(2));
        assert_eq!(o.plain_coefficient(&v, &a1), two_q2sq);
    }

    #[test]
    fn fermion_examples() {
        let (o, t) = ctx();
        let vac = FockVector::basis(FockState::vacuum());
        let v = o.apply_fermion(h("1/2"), &o.apply_fermion(h("-1/2"), &vac, &t), &t);
        let half_q2 = qint(2).mul_ref(&QScalar::from_ratio(1, 2));
        assert_eq!(v.coefficient_of(&FockState::vacuum()), half_q2);
        assert!(o.apply_fermion(h("-1/2"), &o.apply_fermion(h("-1/2"), &vac, &t), &t).is_zero());
        let v = o.apply_fermion(h("-1/2"), &vac, &t);
        let v = o.apply_fermion(h("-3/2"), &v, &t);
        let v = o.apply_fermion(h("1/2"), &v, &t);
        let b32 = FockState::new(0, &[], &[h("3/2")]).unwrap();
        assert_eq!(v.coefficient_of(&b32), -half_q2);
    }

    #[test]
    fn momentum_examples() {
        let (o, t) = ctx();
        let vac = FockVector::basis(FockState::vacuum());
        assert_eq!(o.apply_momentum(MomentumOp::K, &vac, &t), vac);
        let s = FockVector::basis(FockState::new(1, &[], &[h("1/2")]).unwrap());
        assert_eq!(o.apply_momentum(MomentumOp::Parity, &s, &t), s);
        assert_eq!(o.project(1, &vac), vac);
        assert!(o.project(-1, &vac).is_zero());
    }

    #[test]
    fn truncation_drops_and_counts() {
        let o = Oscillators::new(Symbolic);
        let t = Truncation::new(Half::int(1));
        let v = o.apply_boson(-2, &FockVector::basis(FockState::vacuum()), &t);
        assert!(v.is_zero());
        assert_eq!(v.dropped(), 1);
    }
}
