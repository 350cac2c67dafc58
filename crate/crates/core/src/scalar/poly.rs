//! Univariate Laurent polynomials and rational functions over an arbitrary
//! coefficient field, used for the spectral variable `z`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{Field, Ring, ScalarError};

/// `Σ coeffs[i] z^(low+i)`; empty or with nonzero first and last entries.
#[derive(Clone, PartialEq)]
pub struct Poly<F> {
    low: i64,
    coeffs: Vec<F>,
}

impl<F: Ring> Poly<F> {
    pub fn zero() -> Self {
        Poly { low: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(F::one(), 0)
    }

    pub fn constant(c: F) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: F, exp: i64) -> Self {
        Self::from_coeffs(exp, vec![c])
    }

    /// `z`
    pub fn var() -> Self {
        Self::monomial(F::one(), 1)
    }

    pub fn from_coeffs(low: i64, coeffs: Vec<F>) -> Self {
        let mut p = Poly { low, coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn low(&self) -> i64 {
        self.low
    }

    pub fn high(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    pub fn coeff(&self, exp: i64) -> F {
        let i = exp - self.low;
        if i < 0 || i >= self.coeffs.len() as i64 {
            F::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &F)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i64, c))
    }

    pub fn lowest_coeff(&self) -> Option<&F> {
        self.coeffs.first()
    }

    pub fn leading_coeff(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Poly { low: self.low + k, coeffs: self.coeffs.clone() }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let low = self.low.min(o.low);
        let high = self.high().max(o.high());
        let mut out = vec![F::zero(); (high - low + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = (self.low - low) as usize + i;
            out[k] = out[k].add_ref(c);
        }
        for (i, c) in o.coeffs.iter().enumerate() {
            let k = (o.low - low) as usize + i;
            out[k] = out[k].add_ref(c);
        }
        Self::from_coeffs(low, out)
    }

    pub fn neg(&self) -> Self {
        Poly { low: self.low, coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &F) -> Self {
        Self::from_coeffs(self.low, self.coeffs.iter().map(|c| c.mul_ref(s)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
                }
            }
        }
        Self::from_coeffs(self.low + o.low, out)
    }

    /// Substitutes `z ↦ c·z`.
    pub fn scale_argument(&self, c: &F) -> Self
    where
        F: Field,
    {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| a.mul_ref(&c.powi((self.low + i as i64) as i32).expect("nonzero argument scale")))
            .collect();
        Self::from_coeffs(self.low, coeffs)
    }

    /// Substitutes `z ↦ 1/z`.
    pub fn invert_argument(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self::from_coeffs(-self.high(), coeffs)
    }

    pub fn eval(&self, z: &F) -> Result<F, ScalarError>
    where
        F: Field,
    {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_ref(z).add_ref(c);
        }
        Ok(acc.mul_ref(&z.powi(self.low as i32)?))
    }

    /// Maps every coefficient through `f`.
    pub fn map<G: Ring>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::from_coeffs(self.low, self.coeffs.iter().map(f).collect())
    }
}

impl<F: Field> Poly<F> {
    /// Division with remainder of the polynomial parts (`low` offsets dropped).
    fn div_rem(a: &Self, b: &Self) -> (Self, Self) {
        let b = b.shift(-b.low);
        let mut r: Vec<F> = a.shift(-a.low).coeffs;
        let bn = b.coeffs.len() - 1;
        let lead_inv = b.coeffs[bn].try_inv().expect("nonzero leading coefficient");
        if r.len() <= bn {
            return (Self::zero(), Self::from_coeffs(0, r));
        }
        let mut quot = vec![F::zero(); r.len() - bn];
        for i in (0..r.len() - bn).rev() {
            let c = r[i + bn].mul_ref(&lead_inv);
            if c.is_zero() {
                continue;
            }
            for (j, bc) in b.coeffs.iter().enumerate() {
                r[i + j] = r[i + j].sub_ref(&c.mul_ref(bc));
            }
            quot[i] = c;
        }
        r.truncate(bn);
        (Self::from_coeffs(0, quot), Self::from_coeffs(0, r))
    }

    /// Monic gcd of the polynomial parts.
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let mut x = a.shift(-a.low);
        let mut y = b.shift(-b.low);
        while !y.is_zero() {
            let (_, r) = Self::div_rem(&x, &y);
            x = y;
            y = r;
        }
        match x.leading_coeff() {
            None => Self::zero(),
            Some(l) => {
                let inv = l.try_inv().expect("nonzero");
                x.scale(&inv)
            }
        }
    }

    /// Exact quotient of polynomial parts; panics if not exact.
    fn div_exact(a: &Self, b: &Self) -> Self {
        let (q, r) = Self::div_rem(a, b);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }
}

impl<F: Ring + fmt::Display> Poly<F> {
    pub fn to_string_in(&self, var: &str) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (e, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let cs = c.to_string();
            let cs = if cs.contains(' ') || cs.contains('/') { format!("({cs})") } else { cs };
            parts.push(match e {
                0 => cs,
                1 if cs == "1" => var.to_string(),
                1 => format!("{cs}*{var}"),
                _ if cs == "1" => format!("{var}^{e}"),
                _ => format!("{cs}*{var}^{e}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl<F: Ring> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly(low={}, {:?})", self.low, self.coeffs)
    }
}

/// Rational function `num/den` in canonical reduced form: the polynomial parts
/// are coprime, `den` has lowest exponent 0 and constant term 1.
#[derive(Clone, PartialEq)]
pub struct RatFunc<F> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Field> RatFunc<F> {
    pub fn new(num: Poly<F>, den: Poly<F>) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let num = num.shift(-den.low);
        let den = den.shift(-den.low);
        let g = Poly::gcd(&num, &den);
        let (num, den) = if g.coeffs.len() > 1 {
            (Poly::div_exact(&num, &g).shift(num.low), Poly::div_exact(&den, &g))
        } else {
            (num, den)
        };
        let c = den.lowest_coeff().expect("nonzero").try_inv()?;
        Ok(RatFunc { num: num.scale(&c), den: den.scale(&c) })
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn constant(c: F) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn var() -> Self {
        Self::from_poly(Poly::var())
    }

    pub fn numerator(&self) -> &Poly<F> {
        &self.num
    }

    pub fn denominator(&self) -> &Poly<F> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.coeffs.len() == 1
    }

    pub fn add_ref(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Self::new(self.num.add(&o.num), self.den.clone()).expect("nonzero denominator");
        }
        Self::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
            .expect("nonzero denominator")
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        self.add_ref(&o.neg_ref())
    }

    pub fn neg_ref(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul_ref(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero denominator")
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &Self) -> Result<Self, ScalarError> {
        Ok(self.mul_ref(&o.inv()?))
    }

    /// Substitutes `z ↦ c·z`.
    pub fn scale_argument(&self, c: &F) -> Self {
        Self::new(self.num.scale_argument(c), self.den.scale_argument(c)).expect("nonzero denominator")
    }

    /// Substitutes `z ↦ 1/z`.
    pub fn invert_argument(&self) -> Self {
        Self::new(self.num.invert_argument(), self.den.invert_argument()).expect("nonzero denominator")
    }

    /// Value at `z`; evaluating the reduced form removes removable singularities.
    pub fn eval(&self, z: &F) -> Result<F, ScalarError> {
        let d = self.den.eval(z)?;
        if d.is_zero() {
            return Err(ScalarError::Pole { denominator: "spectral denominator".into() });
        }
        self.num.eval(z)?.try_div(&d)
    }
}

impl<F: Field> Zero for RatFunc<F> {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
}

impl<F: Field> One for RatFunc<F> {
    fn one() -> Self {
        RatFunc::one()
    }
}

impl<F: Field> Add for RatFunc<F> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.add_ref(&o)
    }
}

impl<F: Field> Sub for RatFunc<F> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.sub_ref(&o)
    }
}

impl<F: Field> Mul for RatFunc<F> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.mul_ref(&o)
    }
}

impl<F: Field> Neg for RatFunc<F> {
    type Output = Self;
    fn neg(self) -> Self {
        self.neg_ref()
    }
}

impl<F: Field> Ring for RatFunc<F> {
    fn from_i64(n: i64) -> Self {
        RatFunc::constant(F::from_i64(n))
    }
    fn add_ref(&self, o: &Self) -> Self {
        RatFunc::add_ref(self, o)
    }
    fn sub_ref(&self, o: &Self) -> Self {
        RatFunc::sub_ref(self, o)
    }
    fn mul_ref(&self, o: &Self) -> Self {
        RatFunc::mul_ref(self, o)
    }
}

impl<F: Field> Field for RatFunc<F> {
    fn try_inv(&self) -> Result<Self, ScalarError> {
        self.inv()
    }
}

impl<F: Field + fmt::Display> fmt::Display for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num.to_string_in("z"))
        } else {
            write!(f, "({})/({})", self.num.to_string_in("z"), self.den.to_string_in("z"))
        }
    }
}

impl<F: Field> fmt::Debug for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({:?} / {:?})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::QScalar;
    use num_traits::One;

    fn c(n: i64) -> QScalar {
        QScalar::from_ratio(n, 1)
    }

    #[test]
    fn reduces_common_factors() {
        // (z^2 - 1)/(z - 1) = z + 1
        let num = Poly::from_coeffs(0, vec![c(-1), c(0), c(1)]);
        let den = Poly::from_coeffs(0, vec![c(-1), c(1)]);
        let r = RatFunc::new(num, den).unwrap();
        assert!(r.is_polynomial());
        assert_eq!(r.numerator(), &Poly::from_coeffs(0, vec![c(1), c(1)]));
    }

    #[test]
    fn removable_singularity_evaluates() {
        let q2 = QScalar::q_pow(2);
        // (1 - z q^2)(z - 1)/((z - q^2)(z - 1)) at z = 1
        let a = Poly::from_coeffs(0, vec![QScalar::one(), -q2.clone()]);
        let b = Poly::from_coeffs(0, vec![c(-1), c(1)]);
        let d = Poly::from_coeffs(0, vec![-q2.clone(), c(1)]);
        let r = RatFunc::new(a.mul(&b), d.mul(&b)).unwrap();
        assert!(r.eval(&QScalar::one()).unwrap().is_one());
    }

    #[test]
    fn monomial_denominators_move_to_numerator() {
        let r = RatFunc::new(Poly::constant(c(1)), Poly::monomial(c(2), 3)).unwrap();
        assert!(r.is_polynomial());
        assert_eq!(r.numerator(), &Poly::monomial(QScalar::from_ratio(1, 2), -3));
    }
}
