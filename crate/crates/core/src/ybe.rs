//! Yang–Baxter equation in two spectral variables.
//!
//! Every entry of `R(z)` shares the denominator `Den(z)`, so both sides are
//! compared after multiplying by `Den(z) Den(zw) Den(w)`: the entries become
//! polynomials in `(z, w)` over `Q(q)[√2]` and equality is exact.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::linalg::Mat;
use crate::rmatrix::{permutation, RMatrixValue};
use crate::scalar::QScalar;
use crate::verify::report::VerificationReport;

/// Sparse polynomial in `z`, `w` keyed by `(deg_z, deg_w)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Poly2 {
    terms: BTreeMap<(i64, i64), QScalar>,
}

impl Poly2 {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_product(&mut self, a: &Poly2, b: &Poly2) {
        for (&(i, j), x) in &a.terms {
            for (&(k, l), y) in &b.terms {
                let key = (i + k, j + l);
                let v = match self.terms.get(&key) {
                    Some(c) => c.add_ref(&x.mul_ref(y)),
                    None => x.mul_ref(y),
                };
                if v.is_zero() {
                    self.terms.remove(&key);
                } else {
                    self.terms.insert(key, v);
                }
            }
        }
    }

    pub fn sub(&self, o: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (k, v) in &o.terms {
            let nv = match out.terms.get(k) {
                Some(c) => c.sub_ref(v),
                None => -v.clone(),
            };
            if nv.is_zero() {
                out.terms.remove(k);
            } else {
                out.terms.insert(*k, nv);
            }
        }
        out
    }

    pub fn eval(&self, z: &QScalar, w: &QScalar) -> QScalar {
        let mut acc = QScalar::from_ratio(0, 1);
        for (&(i, j), c) in &self.terms {
            let t = c.mul_ref(&z.pow(i as i32).expect("nonzero")).mul_ref(&w.pow(j as i32).expect("nonzero"));
            acc = acc.add_ref(&t);
        }
        acc
    }
}

impl std::fmt::Display for Poly2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|((i, j), c)| format!("({c})*z^{i}*w^{j}")).collect();
        write!(f, "{}", if parts.is_empty() { "0".into() } else { parts.join(" + ") })
    }
}

/// Sparse 27×27 matrix, rows of `(column, entry)`.
type Sparse27 = Vec<BTreeMap<usize, Poly2>>;

/// Embeds a 9×9 cleared R-matrix into the factors `(s, t)` of `V⊗V⊗V`,
/// substituting `z ↦ z^a w^b`.
fn embed(n: &Mat<crate::rmatrix::PolyEntry>, s: usize, t: usize, (a, b): (i64, i64)) -> Sparse27 {
    let mut out: Sparse27 = vec![BTreeMap::new(); 27];
    let digits = |x: usize| [x / 9, (x / 3) % 3, x % 3];
    for row in 0..27 {
        let dr = digits(row);
        for col in 0..27 {
            let dc = digits(col);
            let other = 3 - s - t;
            if dr[other] != dc[other] {
                continue;
            }
            let e = &n.get(dr[s] * 3 + dr[t], dc[s] * 3 + dc[t]).0;
            if e.is_zero() {
                continue;
            }
            let mut p = Poly2::default();
            for (k, c) in e.terms() {
                p.terms.insert((a * k, b * k), c.clone());
            }
            out[row].insert(col, p);
        }
    }
    out
}

fn mul(x: &Sparse27, y: &Sparse27) -> Sparse27 {
    let mut out: Sparse27 = vec![BTreeMap::new(); 27];
    for (i, row) in x.iter().enumerate() {
        for (k, a) in row {
            for (j, b) in &y[*k] {
                out[i].entry(*j).or_default().add_product(a, b);
            }
        }
        out[i].retain(|_, p| !p.is_zero());
    }
    out
}

/// Both sides of the cleared equation.
pub fn ybe_sides(r: &RMatrixValue) -> (Sparse27, Sparse27) {
    let n = r.cleared();
    let r12 = embed(&n, 0, 1, (1, 0));
    let r13 = embed(&n, 0, 2, (1, 1));
    let r23 = embed(&n, 1, 2, (0, 1));
    let lhs = mul(&mul(&r12, &r13), &r23);
    let rhs = mul(&mul(&r23, &r13), &r12);
    (lhs, rhs)
}

/// Floating 27×27 residual `max |LHS - RHS|` at one point.
pub fn ybe_numeric_residual(r: &RMatrixValue, q0: f64, z: f64, w: f64) -> f64 {
    let ev = |x: f64| -> Mat<Complex64> { r.eval(Complex64::new(q0, 0.0), Complex64::new(x, 0.0)).expect("regular point") };
    let id3 = Mat::<Complex64>::identity(3);
    let p23 = id3.kron(&permutation::<Complex64>());
    let r12 = |m: &Mat<Complex64>| m.kron(&id3);
    let r23 = |m: &Mat<Complex64>| id3.kron(m);
    let r13 = |m: &Mat<Complex64>| p23.mul(&r12(m)).mul(&p23);
    let (rz, rzw, rw) = (ev(z), ev(z * w), ev(w));
    let lhs = r12(&rz).mul(&r13(&rzw)).mul(&r23(&rw));
    let rhs = r23(&rw).mul(&r13(&rzw)).mul(&r12(&rz));
    let d = lhs.sub(&rhs);
    let mut m = 0.0f64;
    for i in 0..27 {
        for j in 0..27 {
            m = m.max(d.get(i, j).norm());
        }
    }
    m
}

pub fn check_yang_baxter(r: &RMatrixValue) -> VerificationReport {
    let mut rep = VerificationReport::new("yang-baxter");
    let (lhs, rhs) = ybe_sides(r);
    let mut identical = 0usize;
    let mut first = None;
    for i in 0..27 {
        for j in 0..27 {
            let empty = Poly2::default();
            let a = lhs[i].get(&j).unwrap_or(&empty);
            let b = rhs[i].get(&j).unwrap_or(&empty);
            let d = a.sub(b);
            if d.is_zero() {
                identical += 1;
            } else if first.is_none() {
                first = Some((d.to_string(), format!("entry ({i}, {j})")));
            }
        }
    }
    rep.param("entries", 27 * 27);
    rep.param("identical_entries", identical);
    rep.exact("R12(z) R13(zw) R23(w) = R23(w) R13(zw) R12(z), all 729 entries", first);

    let one = QScalar::from_ratio(1, 1);
    let den1 = crate::rmatrix::cleared_denominator().eval(&one).expect("regular");
    let scale = den1.mul_ref(&den1).mul_ref(&den1);
    let p = permutation::<QScalar>();
    let id3 = Mat::<QScalar>::identity(3);
    let p12 = p.kron(&id3);
    let p23 = id3.kron(&p);
    let p13 = p23.mul(&p12).mul(&p23);
    let perm = p12.mul(&p13).mul(&p23);
    let mut bad = None;
    for i in 0..27 {
        for j in 0..27 {
            let empty = Poly2::default();
            for (side, m) in [("left", &lhs), ("right", &rhs)] {
                let v = m[i].get(&j).unwrap_or(&empty).eval(&one, &one);
                let expect = perm.get(i, j).mul_ref(&scale);
                if v != expect && bad.is_none() {
                    bad = Some((v.sub_ref(&expect).to_string(), format!("{side} side entry ({i}, {j})")));
                }
            }
        }
    }
    rep.exact("z = w = 1: both sides equal P12 P13 P23", bad);

    let (q0, z0, w0) = (0.3, 1.7, 0.4);
    rep.numeric(
        format!("numeric spot check at q = {q0}, z = {z0}, w = {w0}"),
        ybe_numeric_residual(r, q0, z0, w0),
        1e-12,
    );
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmatrix::{build_rmatrix, RMatrixEntries};

    #[test]
    fn corrected_matrix_satisfies_ybe() {
        let rep = check_yang_baxter(&build_rmatrix());
        assert!(rep.fully_passed(), "{}", rep.to_text());
    }

    #[test]
    fn uncorrected_matrix_fails_numerically() {
        let res = ybe_numeric_residual(&RMatrixEntries::uncorrected().matrix(), 0.3, 1.7, 0.4);
        assert!(res > 1.0);
    }
}
