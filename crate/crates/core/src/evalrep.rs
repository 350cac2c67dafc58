//! The spin-1 evaluation representation `V_z` on the ordered basis
//! `(v_1, v_0, v_-1)`.

use num_traits::One;

use crate::chevalley::{check_chevalley, ChevalleyModule, Gen};
use crate::linalg::Mat;
use crate::scalar::{Poly, QScalar, RatFunc};
use crate::verify::report::VerificationReport;
use crate::ZRatFunc;

/// Spin label of basis position `i`.
pub fn spin(i: usize) -> i64 {
    1 - i as i64
}

/// Basis position of spin label `m`.
pub fn index(m: i64) -> usize {
    (1 - m) as usize
}

pub fn zconst(c: QScalar) -> ZRatFunc {
    RatFunc::constant(c)
}

/// `c · z^k`
pub fn zmono(c: QScalar, k: i64) -> ZRatFunc {
    RatFunc::from_poly(Poly::monomial(c, k))
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalRep {
    pub e1: Mat<ZRatFunc>,
    pub f1: Mat<ZRatFunc>,
    pub t1: Mat<ZRatFunc>,
    pub e0: Mat<ZRatFunc>,
    pub f0: Mat<ZRatFunc>,
    pub t0: Mat<ZRatFunc>,
    pub t1_inv: Mat<ZRatFunc>,
    pub t0_inv: Mat<ZRatFunc>,
}

pub fn build_evaluation_rep() -> EvalRep {
    let qi = crate::chevalley::qint;
    let mut e1 = Mat::zeros(3, 3);
    let mut f1 = Mat::zeros(3, 3);
    for m in -1i64..=1 {
        if m > -1 {
            e1.set(index(m - 1), index(m), zconst(qi(1 + m)));
        }
        if m < 1 {
            f1.set(index(m + 1), index(m), zconst(qi(1 - m)));
        }
    }
    // e_1 lowers the label m, so v_m has t_1-eigenvalue q^(-2m)
    let t1 = Mat::diagonal((0..3).map(|i| zconst(QScalar::q_pow(-2 * spin(i)))).collect());
    let t1_inv = Mat::diagonal((0..3).map(|i| zconst(QScalar::q_pow(2 * spin(i)))).collect());
    let e0 = f1.scale(&zmono(QScalar::one(), 1));
    let f0 = e1.scale(&zmono(QScalar::one(), -1));
    EvalRep { e1, f1, t0: t1_inv.clone(), t0_inv: t1.clone(), t1, e0, f0, t1_inv }
}

impl EvalRep {
    pub fn matrix(&self, g: Gen) -> &Mat<ZRatFunc> {
        match g {
            Gen::E0 => &self.e0,
            Gen::E1 => &self.e1,
            Gen::F0 => &self.f0,
            Gen::F1 => &self.f1,
            Gen::T0 => &self.t0,
            Gen::T1 => &self.t1,
            Gen::T0Inv => &self.t0_inv,
            Gen::T1Inv => &self.t1_inv,
        }
    }

    /// Chevalley relations, both Serre relations included, symbolically in `z`.
    pub fn check_relations(&self) -> VerificationReport {
        check_chevalley(self, "evaluation-rep")
    }
}

impl ChevalleyModule for EvalRep {
    type Vector = Vec<ZRatFunc>;

    fn test_vectors(&self) -> Vec<(String, Vec<ZRatFunc>)> {
        (0..3)
            .map(|i| {
                let v = (0..3).map(|j| if i == j { ZRatFunc::one() } else { ZRatFunc::zero() }).collect();
                (format!("v_{}", spin(i)), v)
            })
            .collect()
    }

    fn apply(&self, g: Gen, v: &Vec<ZRatFunc>) -> Vec<ZRatFunc> {
        self.matrix(g).apply(v)
    }

    fn combine(&self, terms: &[(QScalar, Vec<ZRatFunc>)]) -> Vec<ZRatFunc> {
        let mut acc = vec![ZRatFunc::zero(); 3];
        for (c, v) in terms {
            for (a, x) in acc.iter_mut().zip(v) {
                *a = a.add_ref(&x.scale(c));
            }
        }
        acc
    }

    fn is_zero(&self, v: &Vec<ZRatFunc>) -> bool {
        v.iter().all(|x| x.is_zero())
    }

    fn show(&self, v: &Vec<ZRatFunc>) -> String {
        let parts: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| format!("({x}) v_{}", spin(i)))
            .collect();
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::qint;

    #[test]
    fn generator_actions() {
        let rep = build_evaluation_rep();
        let v1 = rep.test_vectors()[0].1.clone();
        let e1v1 = rep.apply(Gen::E1, &v1);
        assert_eq!(e1v1[index(0)], zconst(qint(2)));
        assert!(e1v1[index(1)].is_zero() && e1v1[index(-1)].is_zero());
        let vm1 = rep.test_vectors()[2].1.clone();
        assert!(rep.is_zero(&rep.apply(Gen::E1, &vm1)));
        let v0 = rep.test_vectors()[1].1.clone();
        let f0v0 = rep.apply(Gen::F0, &v0);
        assert_eq!(f0v0[index(-1)], zmono(QScalar::one(), -1));
        assert_eq!(*rep.t1.get(0, 0), zconst(QScalar::q_pow(-2)));
    }

    #[test]
    fn chevalley_and_serre_hold() {
        let report = build_evaluation_rep().check_relations();
        assert!(report.fully_passed(), "{}", report.to_text());
    }
}
