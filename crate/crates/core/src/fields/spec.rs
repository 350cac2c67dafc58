use std::fmt;

use crate::scalar::QScalar;

/// One summand `amp · base^n`, divided by `[2n]` when `over_q2n` is set, of a
/// coefficient function `n ↦ c_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoeffTerm {
    pub amp: QScalar,
    pub base: QScalar,
    pub over_q2n: bool,
}

impl CoeffTerm {
    pub fn new(amp: QScalar, base: QScalar, over_q2n: bool) -> Self {
        CoeffTerm { amp, base, over_q2n }
    }

    /// `± q^{k n}/[2n]`
    pub fn q_power(sign: i64, k: i64) -> Self {
        CoeffTerm::new(QScalar::from_ratio(sign, 1), QScalar::q_pow(k), true)
    }

    pub fn value(&self, n: i64) -> QScalar {
        let v = self.amp.mul_ref(&self.base.pow(n as i32).expect("nonzero base"));
        if self.over_q2n {
            v.mul_ref(&QScalar::from_ratfunc(crate::RatFuncQ::inv_q_integer(2 * n)))
        } else {
            v
        }
    }
}

/// Sums equal bases and drops vanishing amplitudes.
fn simplify(terms: Vec<CoeffTerm>) -> Vec<CoeffTerm> {
    let mut out: Vec<CoeffTerm> = Vec::new();
    for t in terms {
        match out.iter_mut().find(|o| o.base == t.base && o.over_q2n == t.over_q2n) {
            Some(o) => o.amp = o.amp.add_ref(&t.amp),
            None => out.push(t),
        }
    }
    out.retain(|t| !t.amp.is_zero());
    out
}

/// `K^k · exp(Σ c_n a_{-n} z^n) · exp(Σ d_n a_n z^{-n}) · e^{sQ} · (σμz)^{εP}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExpFieldSpec {
    pub creation: Vec<CoeffTerm>,
    pub annihilation: Vec<CoeffTerm>,
    pub shift: i64,
    pub sigma: i64,
    pub mu: QScalar,
    pub eps: i64,
    pub k_power: i64,
}

impl ExpFieldSpec {
    fn base(creation: Vec<CoeffTerm>, annihilation: Vec<CoeffTerm>, shift: i64, sigma: i64, mu: QScalar, eps: i64) -> Self {
        ExpFieldSpec { creation, annihilation, shift, sigma, mu, eps, k_power: 0 }
    }

    /// `E^±(z)`
    pub fn e_pm(sign: i64) -> Self {
        Self::base(
            vec![CoeffTerm::q_power(sign, -sign)],
            vec![CoeffTerm::q_power(-sign, -sign)],
            sign,
            1,
            QScalar::from_ratio(1, 1),
            sign,
        )
    }

    /// `φ_1(z)`
    pub fn phi_1() -> Self {
        Self::base(vec![CoeffTerm::q_power(1, 5)], vec![CoeffTerm::q_power(-1, -3)], 1, -1, QScalar::q_pow(4), 1)
    }

    /// `ψ_{-1}(z)`
    pub fn psi_m1() -> Self {
        Self::base(vec![CoeffTerm::q_power(-1, 1)], vec![CoeffTerm::q_power(1, -3)], -1, -1, QScalar::q_pow(2), -1)
    }

    /// `ψ^±(z) = K^{±1} exp{±(q - q^-1) Σ a_{±n} z^{∓n}}`
    pub fn psi_pm(sign: i64) -> Self {
        let amp = QScalar::q_pow(1).sub_ref(&QScalar::q_pow(-1)).mul_ref(&QScalar::from_ratio(sign, 1));
        let t = vec![CoeffTerm::new(amp, QScalar::from_ratio(1, 1), false)];
        let (creation, annihilation) = if sign > 0 { (vec![], t) } else { (t, vec![]) };
        let mut s = Self::base(creation, annihilation, 0, 1, QScalar::from_ratio(1, 1), 0);
        s.k_power = sign;
        s
    }

    pub fn identity() -> Self {
        Self::base(vec![], vec![], 0, 1, QScalar::from_ratio(1, 1), 0)
    }

    pub fn creation_coeff(&self, n: i64) -> QScalar {
        self.creation.iter().fold(QScalar::from_ratio(0, 1), |a, t| a.add_ref(&t.value(n)))
    }

    pub fn annihilation_coeff(&self, n: i64) -> QScalar {
        self.annihilation.iter().fold(QScalar::from_ratio(0, 1), |a, t| a.add_ref(&t.value(n)))
    }

    /// `β` with `(σμz)^{εP} = β^P z^{εP}`.
    pub fn momentum_base(&self) -> QScalar {
        let b = self.mu.mul_ref(&QScalar::from_ratio(self.sigma, 1));
        b.pow(self.eps as i32).expect("nonzero")
    }

    /// The field at the argument `λz`.
    pub fn at_scaled_argument(&self, lambda: &QScalar) -> Self {
        let inv = lambda.inv().expect("nonzero argument scale");
        let mut s = self.clone();
        for t in &mut s.creation {
            t.base = t.base.mul_ref(lambda);
        }
        for t in &mut s.annihilation {
            t.base = t.base.mul_ref(&inv);
        }
        s.mu = s.mu.mul_ref(lambda);
        s
    }

    /// Weight offset `w` with exponents `k = Δ_out - Δ_in - w`; `None` when
    /// the field is not homogeneous.
    pub fn weight2(&self) -> Option<i64> {
        (self.eps == self.shift).then_some(self.shift * self.shift)
    }

    pub fn is_identity(&self) -> bool {
        self.creation.is_empty() && self.annihilation.is_empty() && self.shift == 0 && self.k_power == 0 && self.eps == 0
    }
}

/// Normal-ordered product of exponential fields in up to two variables: all
/// creation parts left, all annihilation parts right, `e^{Q}` left of every
/// `z^P`, and each momentum factor reading the momentum of the state the
/// product acts on.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MergedSpec {
    /// `(variable, term)`
    pub creation: Vec<(usize, CoeffTerm)>,
    pub annihilation: Vec<(usize, CoeffTerm)>,
    pub shift: i64,
    /// `(variable, β, ε)`: the factor `β^P z_var^{εP}`.
    pub momentum: Vec<(usize, QScalar, i64)>,
    pub k_power: i64,
}

pub const MAX_VARS: usize = 2;

/// Merges `fields[i]` evaluated at `λ_i z_{var_i}`.
pub fn normal_ordered_merge(fields: &[(ExpFieldSpec, usize, QScalar)]) -> MergedSpec {
    let mut creation = Vec::new();
    let mut annihilation = Vec::new();
    let mut shift = 0;
    let mut k_power = 0;
    let mut mom: Vec<(usize, QScalar, i64)> = Vec::new();
    for (spec, var, lambda) in fields {
        assert!(*var < MAX_VARS, "at most {MAX_VARS} variables");
        let s = spec.at_scaled_argument(lambda);
        for t in s.creation.iter() {
            creation.push((*var, t.clone()));
        }
        for t in s.annihilation.iter() {
            annihilation.push((*var, t.clone()));
        }
        shift += s.shift;
        k_power += s.k_power;
        let beta = s.momentum_base();
        match mom.iter_mut().find(|m| m.0 == *var) {
            Some(m) => {
                m.1 = m.1.mul_ref(&beta);
                m.2 += s.eps;
            }
            None => mom.push((*var, beta, s.eps)),
        }
    }
    let by_var = |terms: Vec<(usize, CoeffTerm)>| -> Vec<(usize, CoeffTerm)> {
        let mut out = Vec::new();
        for v in 0..MAX_VARS {
            let ts = terms.iter().filter(|(w, _)| *w == v).map(|(_, t)| t.clone()).collect();
            out.extend(simplify(ts).into_iter().map(|t| (v, t)));
        }
        out
    };
    mom.retain(|(_, b, e)| *e != 0 || !b.is_one());
    mom.sort_by_key(|m| m.0);
    MergedSpec { creation: by_var(creation), annihilation: by_var(annihilation), shift, momentum: mom, k_power }
}

impl MergedSpec {
    pub fn single(spec: &ExpFieldSpec) -> Self {
        normal_ordered_merge(&[(spec.clone(), 0, QScalar::from_ratio(1, 1))])
    }

    pub fn is_identity(&self) -> bool {
        self.creation.is_empty() && self.annihilation.is_empty() && self.shift == 0 && self.momentum.is_empty() && self.k_power == 0
    }
}

impl fmt::Display for CoeffTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})*({})^n", self.amp, self.base)?;
        if self.over_q2n {
            write!(f, "/[2n]")?;
        }
        Ok(())
    }
}

impl fmt::Display for MergedSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |ts: &[(usize, CoeffTerm)]| -> String {
            ts.iter().map(|(v, t)| format!("z{v}:{t}")).collect::<Vec<_>>().join(" + ")
        };
        write!(
            f,
            "creation [{}], annihilation [{}], shift {}, momentum [{}], K^{}",
            show(&self.creation),
            show(&self.annihilation),
            self.shift,
            self.momentum.iter().map(|(v, b, e)| format!("({b})^P z{v}^({e}P)")).collect::<Vec<_>>().join(" "),
            self.k_power
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::qint;

    #[test]
    fn phi_1_coefficients() {
        let s = ExpFieldSpec::phi_1();
        assert_eq!(s.creation_coeff(1), QScalar::q_pow(5).mul_ref(&qint(2).inv().unwrap()));
        assert_eq!(s.annihilation_coeff(2), -QScalar::q_pow(-6).mul_ref(&qint(4).inv().unwrap()));
        assert_eq!((s.shift, s.sigma, s.eps), (1, -1, 1));
        assert_eq!(s.mu, QScalar::q_pow(4));
        let p = ExpFieldSpec::psi_m1();
        assert_eq!(p.creation_coeff(1), -QScalar::q_pow(1).mul_ref(&qint(2).inv().unwrap()));
        assert_eq!((p.shift, p.sigma, p.eps), (-1, -1, -1));
    }

    #[test]
    fn merged_identity() {
        let q = QScalar::q_pow;
        let m = normal_ordered_merge(&[
            (ExpFieldSpec::phi_1(), 0, QScalar::from_ratio(1, 1)),
            (ExpFieldSpec::phi_1(), 0, q(-2)),
            (ExpFieldSpec::e_pm(-1), 0, q(4)),
            (ExpFieldSpec::e_pm(-1), 0, q(2)),
        ]);
        assert!(m.is_identity(), "{m}");
    }

    #[test]
    fn single_merge_is_unchanged() {
        let m = MergedSpec::single(&ExpFieldSpec::e_pm(1));
        assert_eq!(m.creation.len(), 1);
        assert_eq!(m.creation[0].1, ExpFieldSpec::e_pm(1).creation[0]);
        assert_eq!(m.momentum, vec![(0, QScalar::from_ratio(1, 1), 1)]);
    }
}
