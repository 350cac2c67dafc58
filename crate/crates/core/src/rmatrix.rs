//! The spin-1 R-matrix on `V ⊗ V` and its exact checks.
//!
//! Basis order of `V ⊗ V`: `v_1v_1, v_1v_0, v_1v_-1, v_0v_1, v_0v_0, v_0v_-1,
//! v_-1v_1, v_-1v_0, v_-1v_-1`. Entry `(row, col)` maps basis vector `col` to `row`.

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::evalrep::spin;
use crate::linalg::Mat;
use crate::scalar::{evaluate_numeric, Poly, QScalar, RatFunc, ScalarError};
use crate::verify::report::VerificationReport;
use crate::ZRatFunc;

/// Entry symbol at each position; `"."` marks a structural zero.
pub const PATTERN: [[&str; 9]; 9] = [
    ["1", ".", ".", ".", ".", ".", ".", ".", "."],
    [".", "b", ".", "e", ".", ".", ".", ".", "."],
    [".", ".", "d", ".", "g", ".", "f", ".", "."],
    [".", "ebar", ".", "b", ".", ".", ".", ".", "."],
    [".", ".", "gbar", ".", "a", ".", "h", ".", "."],
    [".", ".", ".", ".", ".", "b", ".", "e", "."],
    [".", ".", "fbar", ".", "hbar", ".", "d", ".", "."],
    [".", ".", ".", ".", ".", "ebar", ".", "b", "."],
    [".", ".", ".", ".", ".", ".", ".", ".", "1"],
];

/// Spin labels `(i, j)` of basis position `k` of `V ⊗ V`.
pub fn pair(k: usize) -> (i64, i64) {
    (spin(k / 3), spin(k % 3))
}

fn q(k: i64) -> QScalar {
    QScalar::q_pow(k)
}

/// `Σ c_k z^k` from `(k, c_k)` pairs.
fn zpoly(terms: &[(i64, QScalar)]) -> Poly<QScalar> {
    let mut p = Poly::zero();
    for (k, c) in terms {
        p = p.add(&Poly::monomial(c.clone(), *k));
    }
    p
}

fn ratio(num: Poly<QScalar>, den: Poly<QScalar>) -> ZRatFunc {
    RatFunc::new(num, den).expect("nonzero denominator")
}

/// `zq^2 - q^-2`
fn den1() -> Poly<QScalar> {
    zpoly(&[(1, q(2)), (0, -q(-2))])
}

/// `(zq^2 - q^-2)(zq - q^-1)`
fn den2() -> Poly<QScalar> {
    den1().mul(&zpoly(&[(1, q(1)), (0, -q(-1))]))
}

/// Common denominator of every entry of `R(z)`: `(z - q^2)(zq^2 - q^-2)(zq - q^-1)`.
pub fn cleared_denominator() -> Poly<QScalar> {
    zpoly(&[(1, QScalar::one()), (0, -q(2))]).mul(&den2())
}

/// The scalar entries of `R(z)` before the overall factor `r(z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RMatrixEntries {
    pub r: ZRatFunc,
    pub a: ZRatFunc,
    pub b: ZRatFunc,
    pub d: ZRatFunc,
    pub e: ZRatFunc,
    pub e_bar: ZRatFunc,
    pub f: ZRatFunc,
    pub f_bar: ZRatFunc,
    pub g: ZRatFunc,
    pub g_bar: ZRatFunc,
    pub h: ZRatFunc,
    pub h_bar: ZRatFunc,
}

/// `q^-2/[2]^2`
pub fn gauge_ratio() -> QScalar {
    let two = crate::chevalley::qint(2);
    q(-2).checked_div(&two.mul_ref(&two)).expect("nonzero")
}

impl RMatrixEntries {
    /// Entries with `f` and `f̄` as the intertwining equations determine them.
    pub fn corrected() -> Self {
        let mut s = Self::uncorrected();
        let c = q(2).sub_ref(&q(-2)).mul_ref(&q(1).sub_ref(&q(-1)));
        s.f = ratio(zpoly(&[(0, c.clone())]), den2());
        s.f_bar = ratio(zpoly(&[(2, c)]), den2());
        s
    }

    /// Entries with `f = (q^2 - q^-2)(qz^2 - (q + q^-1)z + q)/((zq^2 - q^-2)(zq - q^-1))`,
    /// which break Yang-Baxter.
    pub fn uncorrected() -> Self {
        let one = QScalar::one();
        let k = q(2).sub_ref(&q(-2));
        let k2 = k.mul_ref(&q(2).add_ref(&one));
        let r = ratio(zpoly(&[(0, one.clone()), (1, -q(2))]), zpoly(&[(1, one.clone()), (0, -q(2))]));
        let mid = QScalar::from_ratio(2, 1)
            .mul_ref(&q(1).add_ref(&q(-1)))
            .sub_ref(&q(3))
            .sub_ref(&q(-3));
        let a = ratio(zpoly(&[(2, q(1)), (1, -mid), (0, q(-1))]), den2());
        let zm1 = zpoly(&[(1, one.clone()), (0, -one.clone())]);
        let b = ratio(zm1.clone(), den1());
        let d = ratio(zm1.mul(&zpoly(&[(1, q(-1)), (0, -q(1))])), den2());
        let e = ratio(zpoly(&[(0, k.clone())]), den1());
        let e_bar = ratio(zpoly(&[(1, k.clone())]), den1());
        let f = ratio(
            zpoly(&[(2, q(1)), (1, -(q(1).add_ref(&q(-1)))), (0, q(1))]).scale(&k),
            den2(),
        );
        let f_bar = ratio(
            zpoly(&[(2, q(-3)), (1, q(1).sub_ref(&q(-1)).sub_ref(&q(-3)))]).scale(&k),
            den2(),
        );
        let g = ratio(zm1.scale(&k2), den2());
        let h_bar = ratio(zm1.shift(1).scale(&k2), den2());
        let gr = gauge_ratio();
        let g_bar = h_bar.scale(&gr);
        let h = g.scale(&gr);
        RMatrixEntries { r, a, b, d, e, e_bar, f, f_bar, g, g_bar, h, h_bar }
    }

    pub fn symbol(&self, name: &str) -> ZRatFunc {
        match name {
            "1" => ZRatFunc::one(),
            "a" => self.a.clone(),
            "b" => self.b.clone(),
            "d" => self.d.clone(),
            "e" => self.e.clone(),
            "ebar" => self.e_bar.clone(),
            "f" => self.f.clone(),
            "fbar" => self.f_bar.clone(),
            "g" => self.g.clone(),
            "gbar" => self.g_bar.clone(),
            "h" => self.h.clone(),
            "hbar" => self.h_bar.clone(),
            _ => ZRatFunc::zero(),
        }
    }

    /// `R(z) = r(z) · (pattern)`.
    pub fn matrix(&self) -> RMatrixValue {
        let m = Mat::from_fn(9, 9, |i, j| self.symbol(PATTERN[i][j]).mul_ref(&self.r));
        RMatrixValue { m }
    }
}

/// The 9×9 R-matrix with entries in `Q(q)[√2](z)`, overall factor included.
#[derive(Clone, Debug, PartialEq)]
pub struct RMatrixValue {
    m: Mat<ZRatFunc>,
}

pub fn build_rmatrix() -> RMatrixValue {
    RMatrixEntries::corrected().matrix()
}

impl RMatrixValue {
    pub fn from_matrix(m: Mat<ZRatFunc>) -> Self {
        assert_eq!((m.rows(), m.cols()), (9, 9));
        RMatrixValue { m }
    }

    pub fn get(&self, row: usize, col: usize) -> &ZRatFunc {
        self.m.get(row, col)
    }

    pub fn matrix(&self) -> &Mat<ZRatFunc> {
        &self.m
    }

    /// `R^{kl}_{ij}(z)` in `R(z)(v_i ⊗ v_j) = Σ R^{ij}_{kl}(z) v_k ⊗ v_l`
    /// read with `(i, j)` as the column, `(k, l)` as the row.
    pub fn coeff(&self, k: i64, l: i64, i: i64, j: i64) -> &ZRatFunc {
        let idx = |a: i64, b: i64| crate::evalrep::index(a) * 3 + crate::evalrep::index(b);
        self.m.get(idx(k, l), idx(i, j))
    }

    /// Entry-wise evaluation at numeric `q` and `z`.
    pub fn eval(&self, q0: Complex64, z0: Complex64) -> Result<Mat<Complex64>, ScalarError> {
        self.m.try_map(|x| evaluate_numeric(x, q0, Some(z0)))
    }

    /// Reduced entries evaluated at `z = 1`.
    pub fn at_one(&self) -> Result<Mat<QScalar>, ScalarError> {
        self.m.try_map(|x| x.eval(&QScalar::one()))
    }

    /// `Den(z) · R(z)` as polynomial entries in `z`.
    pub fn cleared(&self) -> Mat<PolyEntry> {
        let den = RatFunc::from_poly(cleared_denominator());
        self.m.map(|x| {
            let y = x.mul_ref(&den);
            assert!(y.is_polynomial(), "entry not cleared by the common denominator");
            PolyEntry(y.numerator().clone())
        })
    }

    /// Canonical strings of the nonzero entries with their symbols.
    pub fn dump(&self) -> Vec<(usize, usize, &'static str, String)> {
        self.m.nonzeros().map(|(i, j, x)| (i, j, PATTERN[i][j], x.to_string())).collect()
    }
}

/// Polynomial in `z` wrapped as a ring element for matrix storage.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyEntry(pub Poly<QScalar>);

impl Zero for PolyEntry {
    fn zero() -> Self {
        PolyEntry(Poly::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for PolyEntry {
    fn one() -> Self {
        PolyEntry(Poly::one())
    }
}

impl std::ops::Add for PolyEntry {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        PolyEntry(self.0.add(&o.0))
    }
}

impl std::ops::Sub for PolyEntry {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        PolyEntry(self.0.sub(&o.0))
    }
}

impl std::ops::Mul for PolyEntry {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        PolyEntry(self.0.mul(&o.0))
    }
}

impl std::ops::Neg for PolyEntry {
    type Output = Self;
    fn neg(self) -> Self {
        PolyEntry(self.0.neg())
    }
}

impl crate::scalar::Ring for PolyEntry {
    fn from_i64(n: i64) -> Self {
        PolyEntry(Poly::constant(QScalar::from_ratio(n, 1)))
    }
}

/// Permutation operator on `V ⊗ V`.
pub fn permutation<T: crate::scalar::Ring>() -> Mat<T> {
    Mat::from_fn(9, 9, |row, col| if row == (col % 3) * 3 + col / 3 { T::one() } else { T::zero() })
}

/// Zero pattern, weight conservation and the `ḡ`, `h` proportionalities.
pub fn check_structure(r: &RMatrixValue) -> VerificationReport {
    let mut rep = VerificationReport::new("rmatrix-structure");
    let mut bad = None;
    for i in 0..9 {
        for j in 0..9 {
            let nonzero = !r.get(i, j).is_zero();
            if nonzero != (PATTERN[i][j] != ".") {
                bad = Some((r.get(i, j).to_string(), format!("entry ({i}, {j})")));
            }
        }
    }
    rep.exact("zero pattern has the 19 expected nonzero entries", bad);
    let mut bad = None;
    for (i, j, x) in r.matrix().nonzeros() {
        let (k, l) = pair(i);
        let (a, b) = pair(j);
        if k + l != a + b {
            bad = Some((x.to_string(), format!("entry ({i}, {j})")));
        }
    }
    rep.exact("weight conservation i + j = k + l", bad);
    let gr = gauge_ratio();
    let diff = r.get(4, 2).sub_ref(&r.get(6, 4).scale(&gr));
    rep.exact(
        "gbar = q^-2/[2]^2 hbar",
        (!diff.is_zero()).then(|| (diff.to_string(), "entries (4,2), (6,4)".into())),
    );
    let diff = r.get(4, 6).sub_ref(&r.get(2, 4).scale(&gr));
    rep.exact("h = q^-2/[2]^2 g", (!diff.is_zero()).then(|| (diff.to_string(), "entries (4,6), (2,4)".into())));
    rep
}

/// `R(1) = P` on reduced entries.
pub fn check_initial_condition(r: &RMatrixValue) -> VerificationReport {
    let mut rep = VerificationReport::new("rmatrix-initial-condition");
    match r.at_one() {
        Err(e) => rep.fail("R(1) = P", e.to_string(), "evaluation at z = 1"),
        Ok(m) => {
            let diff = m.sub(&permutation());
            let w = diff.nonzeros().next().map(|(i, j, x)| (x.to_string(), format!("entry ({i}, {j})")));
            rep.exact("R(1) = P", w);
            let swap = m.get(1, 3);
            rep.exact(
                "(v_1 v_0 -> v_0 v_1) amplitude of R(1) is 1",
                (!swap.is_one()).then(|| (swap.to_string(), "entry (1, 3)".into())),
            );
        }
    }
    rep
}

/// Unitarity `R(z) R_21(1/z) = id`, reported but never asserted.
pub fn unitarity_residual(r: &RMatrixValue) -> Option<String> {
    let p = permutation::<ZRatFunc>();
    let inv = r.matrix().map(|x| x.invert_argument());
    let r21 = p.mul(&inv).mul(&p);
    let prod = r.matrix().mul(&r21).sub(&Mat::identity(9));
    let first = prod.nonzeros().next().map(|(i, j, x)| format!("entry ({i}, {j}): {x}"));
    first
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Evaluate;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn spec_entries() {
        let r = build_rmatrix();
        let e = RMatrixEntries::corrected();
        assert_eq!(r.get(0, 0), &e.r);
        assert!(e.b.eval(&QScalar::one()).unwrap().is_zero());
        assert!(e.d.eval(&QScalar::one()).unwrap().is_zero());
        assert!(e.r.eval(&QScalar::one()).unwrap().is_one());
        assert_eq!(e.g_bar, e.h_bar.scale(&gauge_ratio()));
        assert_eq!(r.matrix().nonzeros().count(), 19);
    }

    #[test]
    fn numeric_entries_match_formulas() {
        // independent floating transcription of the entry formulas
        let (qv, z) = (0.3f64, 1.7f64);
        let d1 = z * qv * qv - 1.0 / (qv * qv);
        let d2 = d1 * (z * qv - 1.0 / qv);
        let k = qv * qv - 1.0 / (qv * qv);
        let a = (qv * z * z - (2.0 * qv + 2.0 / qv - qv.powi(3) - qv.powi(-3)) * z + 1.0 / qv) / d2;
        let f = k * (qv - 1.0 / qv) / d2;
        let e = RMatrixEntries::corrected();
        let ev = |x: &ZRatFunc| x.evaluate(c(qv), Some(c(z))).unwrap().re;
        assert!((ev(&e.a) - a).abs() < 1e-12);
        assert!((ev(&e.f) - f).abs() < 1e-12);
        let fp = k * (qv * z * z - (qv + 1.0 / qv) * z + qv) / d2;
        assert!((ev(&RMatrixEntries::uncorrected().f) - fp).abs() < 1e-12);
    }

    #[test]
    fn structure_and_initial_condition() {
        let r = build_rmatrix();
        assert!(check_structure(&r).fully_passed());
        let init = check_initial_condition(&r);
        assert!(init.fully_passed(), "{}", init.to_text());
        assert!(check_initial_condition(&RMatrixEntries::uncorrected().matrix()).fully_passed());
    }

    #[test]
    fn cleared_entries_are_polynomials() {
        let n = build_rmatrix().cleared();
        assert_eq!(n.nonzeros().count(), 19);
    }
}
