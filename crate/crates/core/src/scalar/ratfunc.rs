use std::fmt;

use num_complex::Complex64;

use super::cyclotomic::{cyclotomic, q_integer_factors, split_cyclotomic};
use super::int::Int;
use super::ipoly::IntLaurent;
use super::laurent::LaurentPolyQ;
use super::rational::Rat;
use super::ScalarError;

/// Element of `Q(q)` in canonical reduced form.
///
/// The value is `num / (Π Φ_d(q)^e_d · rest)`. The denominator is kept
/// factored over cyclotomic polynomials, which is where every q-number
/// denominator lives; `rest` holds any remaining cyclotomic-free factor and is
/// `1` in practically all computations. Invariants:
///
/// * no `Φ_d` with positive exponent divides `num`, and `gcd(num, rest) = 1`;
/// * `rest` is a primitive polynomial with lowest exponent 0 and positive
///   constant term; the zero element has an empty factor list and `rest = 1`.
///
/// Together these make structural equality coincide with equality in `Q(q)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFuncQ {
    num: LaurentPolyQ,
    cyclo: Vec<(u32, u32)>,
    rest: IntLaurent,
}

fn merge_exponents(a: &[(u32, u32)], b: &[(u32, u32)], f: impl Fn(u32, u32) -> u32) -> Vec<(u32, u32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let (d, e) = match (a.get(i), b.get(j)) {
            (Some(&(da, ea)), Some(&(db, eb))) if da == db => {
                i += 1;
                j += 1;
                (da, f(ea, eb))
            }
            (Some(&(da, ea)), Some(&(db, _))) if da < db => {
                i += 1;
                (da, f(ea, 0))
            }
            (Some(&(da, ea)), None) => {
                i += 1;
                (da, f(ea, 0))
            }
            (_, Some(&(db, eb))) => {
                j += 1;
                (db, f(0, eb))
            }
            (None, None) => unreachable!(),
        };
        if e > 0 {
            out.push((d, e));
        }
    }
    out
}

fn expand_factors(factors: &[(u32, u32)]) -> IntLaurent {
    let mut acc = IntLaurent::one();
    for &(d, e) in factors {
        let phi = cyclotomic(d);
        for _ in 0..e {
            acc = acc.mul(&phi);
        }
    }
    acc
}

/// Divides `p` by as many copies of each listed factor as possible (bounded by
/// the exponent); returns the quotient and the exponents actually removed.
fn cancel_factors(p: &IntLaurent, factors: &[(u32, u32)]) -> (IntLaurent, Vec<(u32, u32)>) {
    let mut p = p.clone();
    let mut removed = Vec::new();
    for &(d, e) in factors {
        let phi = cyclotomic(d);
        let mut k = 0;
        while k < e {
            match p.div_exact_unit(&phi) {
                Some(qt) => {
                    p = qt;
                    k += 1;
                }
                None => break,
            }
        }
        if k > 0 {
            removed.push((d, k));
        }
    }
    (p, removed)
}

impl RatFuncQ {
    pub fn zero() -> Self {
        RatFuncQ { num: LaurentPolyQ::zero(), cyclo: Vec::new(), rest: IntLaurent::one() }
    }

    pub fn one() -> Self {
        Self::from_laurent(LaurentPolyQ::one())
    }

    pub fn from_laurent(p: LaurentPolyQ) -> Self {
        RatFuncQ { num: p, cyclo: Vec::new(), rest: IntLaurent::one() }
    }

    pub fn from_rat(r: Rat) -> Self {
        Self::from_laurent(LaurentPolyQ::constant(r))
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_rat(Rat::from_i64(n, 1))
    }

    pub fn q_pow(k: i64) -> Self {
        Self::from_laurent(LaurentPolyQ::q_pow(k))
    }

    /// `1/[n]` built directly in factored form, `n ≠ 0`.
    pub fn inv_q_integer(n: i64) -> Self {
        assert!(n != 0, "[0] is not invertible");
        let m = n.unsigned_abs() as u32;
        let sign = if n < 0 { -1 } else { 1 };
        RatFuncQ {
            num: LaurentPolyQ::monomial(Rat::from_i64(sign, 1), m as i64 - 1),
            cyclo: q_integer_factors(m),
            rest: IntLaurent::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.cyclo.is_empty() && self.rest.is_one() && self.num.is_one()
    }

    /// True when the denominator is 1 (the value is a Laurent polynomial).
    pub fn is_laurent(&self) -> bool {
        self.cyclo.is_empty() && self.rest.is_one()
    }

    pub fn as_laurent(&self) -> Option<&LaurentPolyQ> {
        self.is_laurent().then_some(&self.num)
    }

    pub fn numerator(&self) -> &LaurentPolyQ {
        &self.num
    }

    /// Cyclotomic part of the denominator as `(d, exponent)` pairs.
    pub fn cyclotomic_denominator(&self) -> &[(u32, u32)] {
        &self.cyclo
    }

    /// The fully expanded denominator polynomial (lowest exponent 0).
    pub fn denominator(&self) -> IntLaurent {
        expand_factors(&self.cyclo).mul(&self.rest)
    }

    fn reduce(num: LaurentPolyQ, cyclo: Vec<(u32, u32)>, rest: IntLaurent) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let scale = num.scale().clone();
        let (mut prim, removed) = cancel_factors(num.primitive_part(), &cyclo);
        let cyclo = if removed.is_empty() {
            cyclo
        } else {
            merge_exponents(&cyclo, &removed, |a, b| a - b)
        };
        let mut rest = rest;
        if !rest.is_one() {
            let g = IntLaurent::poly_gcd(&prim, &rest);
            if !g.is_one() {
                prim = prim.div_exact_unit(&g).expect("gcd divides numerator");
                rest = rest.div_exact_unit(&g).expect("gcd divides denominator");
            }
        }
        RatFuncQ { num: LaurentPolyQ::from_parts_unchecked(scale, prim), cyclo, rest }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.cyclo == other.cyclo && self.rest == other.rest {
            if self.is_laurent() {
                return Self::from_laurent(self.num.add(&other.num));
            }
            return Self::reduce(self.num.add(&other.num), self.cyclo.clone(), self.rest.clone());
        }
        let cyclo = merge_exponents(&self.cyclo, &other.cyclo, u32::max);
        let ma = merge_exponents(&cyclo, &self.cyclo, |a, b| a - b);
        let mb = merge_exponents(&cyclo, &other.cyclo, |a, b| a - b);
        let mut fa = expand_factors(&ma);
        let mut fb = expand_factors(&mb);
        let rest = if self.rest.is_one() && other.rest.is_one() {
            IntLaurent::one()
        } else {
            let g = IntLaurent::poly_gcd(&self.rest, &other.rest);
            let ra = self.rest.div_exact_unit(&g).unwrap();
            let rb = other.rest.div_exact_unit(&g).unwrap();
            fa = fa.mul(&rb);
            fb = fb.mul(&ra);
            self.rest.mul(&rb)
        };
        let na = self.num.mul(&LaurentPolyQ::from_int_poly(fa));
        let nb = other.num.mul(&LaurentPolyQ::from_int_poly(fb));
        Self::reduce(na.add(&nb), cyclo, rest)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RatFuncQ { num: self.num.neg(), cyclo: self.cyclo.clone(), rest: self.rest.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.is_laurent() && other.is_laurent() {
            return Self::from_laurent(self.num.mul(&other.num));
        }
        // Cross-cancel: each side's numerator against the other's factors.
        let (pa, ra) = cancel_factors(self.num.primitive_part(), &other.cyclo);
        let (pb, rb) = cancel_factors(other.num.primitive_part(), &self.cyclo);
        let ca = merge_exponents(&self.cyclo, &rb, |a, b| a - b);
        let cb = merge_exponents(&other.cyclo, &ra, |a, b| a - b);
        let cyclo = merge_exponents(&ca, &cb, |a, b| a + b);
        let num = LaurentPolyQ::from_parts_unchecked(
            self.num.scale().mul(other.num.scale()),
            pa.mul(&pb),
        );
        if self.rest.is_one() && other.rest.is_one() {
            return RatFuncQ { num, cyclo, rest: IntLaurent::one() };
        }
        Self::reduce(num, cyclo, self.rest.mul(&other.rest))
    }

    pub fn scale_by(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        RatFuncQ { num: self.num.scale_by(r), cyclo: self.cyclo.clone(), rest: self.rest.clone() }
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let low = self.num.low();
        let (factors, rest) = split_cyclotomic(&self.num.primitive_part().without_low());
        let (sign, rest) = if rest.lowest_coeff().is_some_and(|c| c.is_negative()) {
            (-1, rest.neg())
        } else {
            (1, rest)
        };
        let (c, rest) = rest.primitive();
        // c is positive here; fold it into the numerator scale.
        let scale = self.num.scale().mul_int(&Int::from(sign)).mul_int(&c).inv();
        let num = LaurentPolyQ::from_scaled(scale, self.denominator().shift(-low));
        Ok(RatFuncQ { num, cyclo: factors, rest })
    }

    pub fn div(&self, other: &Self) -> Result<Self, ScalarError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, n: i32) -> Result<Self, ScalarError> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Image under `q ↦ q^-1`.
    pub fn invert_q(&self) -> Self {
        let num = self.num.invert_q();
        let den = LaurentPolyQ::from_int_poly(self.denominator()).invert_q();
        Self::from_laurent(num)
            .div(&Self::from_laurent(den))
            .expect("denominator is nonzero")
    }

    pub fn eval_f64(&self, q: f64) -> Result<f64, ScalarError> {
        let d = self.denominator().eval_f64(q);
        if d == 0.0 || !d.is_finite() {
            return Err(ScalarError::Pole { denominator: super::format::int_poly_to_string(&self.denominator()) });
        }
        Ok(self.num.eval_f64(q) / d)
    }

    pub fn eval_complex(&self, q: Complex64) -> Result<Complex64, ScalarError> {
        let d = self.denominator().eval_complex(q);
        if d.norm() == 0.0 || !d.is_finite() {
            return Err(ScalarError::Pole { denominator: super::format::int_poly_to_string(&self.denominator()) });
        }
        Ok(self.num.eval_complex(q) / d)
    }
}

impl fmt::Debug for RatFuncQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::format::ratfunc_to_string(self))
    }
}

impl fmt::Display for RatFuncQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::format::ratfunc_to_string(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi(n: i64) -> RatFuncQ {
        super::super::qnumber::q_integer(n)
    }

    #[test]
    fn inverse_of_q_integer_matches_generic_inverse() {
        for n in 1..8 {
            assert_eq!(RatFuncQ::inv_q_integer(n), qi(n).inv().unwrap());
            assert!(qi(n).mul(&RatFuncQ::inv_q_integer(n)).is_one());
        }
    }

    #[test]
    fn sums_over_distinct_denominators_reduce() {
        // 1/[2] + 1/[2] - 2/[2] = 0 and [2]/[4] = 1/(q^2+q^-2)
        let a = RatFuncQ::inv_q_integer(2);
        assert!(a.add(&a).sub(&a.scale_by(&Rat::from_i64(2, 1))).is_zero());
        let b = qi(2).mul(&RatFuncQ::inv_q_integer(4));
        let expect = RatFuncQ::from_laurent(LaurentPolyQ::q_pow(2).add(&LaurentPolyQ::q_pow(-2)))
            .inv()
            .unwrap();
        assert_eq!(b, expect);
    }

    #[test]
    fn non_cyclotomic_denominators() {
        // 1/(2q^3 - 1) handled through the general remainder factor.
        let p = RatFuncQ::from_laurent(LaurentPolyQ::from_int_poly(IntLaurent::from_i64s(0, &[-1, 0, 0, 2])));
        let inv = p.inv().unwrap();
        assert!(inv.mul(&p).is_one());
        let s = inv.add(&RatFuncQ::inv_q_integer(3));
        let back = s.sub(&RatFuncQ::inv_q_integer(3));
        assert_eq!(back, inv);
    }
}
