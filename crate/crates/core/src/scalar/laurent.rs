use std::fmt;

use num_complex::Complex64;

use super::int::Int;
use super::ipoly::IntLaurent;
use super::rational::Rat;

/// Laurent polynomial in `q` with rational coefficients.
///
/// Stored as `scale · prim` where `prim` is a primitive integer Laurent
/// polynomial with positive lowest coefficient, which makes the representation
/// canonical: structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPolyQ {
    scale: Rat,
    prim: IntLaurent,
}

impl LaurentPolyQ {
    pub fn zero() -> Self {
        LaurentPolyQ { scale: Rat::zero(), prim: IntLaurent::zero() }
    }

    pub fn one() -> Self {
        LaurentPolyQ { scale: Rat::one(), prim: IntLaurent::one() }
    }

    pub fn constant(r: Rat) -> Self {
        Self::monomial(r, 0)
    }

    pub fn monomial(c: Rat, exp: i64) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPolyQ { scale: c, prim: IntLaurent::monomial(Int::from(1), exp) }
    }

    /// `q^k`
    pub fn q_pow(k: i64) -> Self {
        Self::monomial(Rat::one(), k)
    }

    pub fn from_int_poly(p: IntLaurent) -> Self {
        Self::from_scaled(Rat::one(), p)
    }

    pub fn from_scaled(scale: Rat, p: IntLaurent) -> Self {
        if scale.is_zero() || p.is_zero() {
            return Self::zero();
        }
        let (c, prim) = p.primitive();
        LaurentPolyQ { scale: scale.mul_int(&c), prim }
    }

    pub(crate) fn from_parts_unchecked(scale: Rat, prim: IntLaurent) -> Self {
        LaurentPolyQ { scale, prim }
    }

    /// From `(exponent, coefficient)` pairs; repeated exponents are summed.
    pub fn from_terms<I: IntoIterator<Item = (i64, Rat)>>(terms: I) -> Self {
        terms
            .into_iter()
            .fold(Self::zero(), |acc, (e, c)| acc.add(&Self::monomial(c, e)))
    }

    pub fn is_zero(&self) -> bool {
        self.scale.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.scale.is_one() && self.prim.is_one()
    }

    pub fn scale(&self) -> &Rat {
        &self.scale
    }

    pub fn primitive_part(&self) -> &IntLaurent {
        &self.prim
    }

    pub fn low(&self) -> i64 {
        self.prim.low()
    }

    pub fn high(&self) -> i64 {
        self.prim.high()
    }

    /// Rational coefficient of `q^exp`.
    pub fn coefficient(&self, exp: i64) -> Rat {
        let c = self.prim.coeff(exp);
        if c.is_zero() {
            Rat::zero()
        } else {
            self.scale.mul_int(&c)
        }
    }

    /// Nonzero `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn coefficients(&self) -> Vec<(i64, Rat)> {
        self.prim.terms().map(|(e, c)| (e, self.scale.mul_int(c))).collect()
    }

    /// Returns the constant if this polynomial is a rational number.
    pub fn as_constant(&self) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        (self.prim.span() == 1 && self.prim.low() == 0).then(|| self.scale.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (n1, d1) = (self.scale.num(), self.scale.den());
        let (n2, d2) = (other.scale.num(), other.scale.den());
        let g = d1.gcd(d2);
        let l1 = d2.div_exact(&g);
        let l2 = d1.div_exact(&g);
        let lcm = d1 * &l1;
        let sum = self.prim.add_scaled(&other.prim, &(n1 * &l1), &(n2 * &l2));
        if sum.is_zero() {
            return Self::zero();
        }
        let (c, prim) = sum.primitive();
        LaurentPolyQ { scale: Rat::new(c, lcm), prim }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentPolyQ { scale: self.scale.neg(), prim: self.prim.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        LaurentPolyQ { scale: self.scale.mul(&other.scale), prim: self.prim.mul(&other.prim) }
    }

    pub fn scale_by(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        LaurentPolyQ { scale: self.scale.mul(r), prim: self.prim.clone() }
    }

    pub fn shift(&self, k: i64) -> Self {
        LaurentPolyQ { scale: self.scale.clone(), prim: self.prim.shift(k) }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Image under `q ↦ q^-1`.
    pub fn invert_q(&self) -> Self {
        Self::from_terms(self.coefficients().into_iter().map(|(e, c)| (-e, c)))
    }

    pub fn eval_f64(&self, q: f64) -> f64 {
        self.scale.to_f64() * self.prim.eval_f64(q)
    }

    pub fn eval_complex(&self, q: Complex64) -> Complex64 {
        self.prim.eval_complex(q) * self.scale.to_f64()
    }
}

impl fmt::Debug for LaurentPolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::format::laurent_to_string(self))
    }
}

impl fmt::Display for LaurentPolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::format::laurent_to_string(self))
    }
}
