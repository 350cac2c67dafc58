use std::collections::btree_map;
use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::Ring;

use super::state::{FockState, Half};

/// Finite linear combination of basis states. Zero coefficients are never
/// stored. `dropped` counts terms discarded by truncation on the way here.
#[derive(Clone)]
pub struct FockVector<S> {
    terms: BTreeMap<FockState, S>,
    dropped: u64,
}

impl<S: Ring> Default for FockVector<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Ring> PartialEq for FockVector<S> {
    fn eq(&self, o: &Self) -> bool {
        self.terms == o.terms
    }
}

impl<S: Ring> FockVector<S> {
    pub fn zero() -> Self {
        FockVector { terms: BTreeMap::new(), dropped: 0 }
    }

    pub fn basis(s: FockState) -> Self {
        Self::term(s, S::one())
    }

    pub fn term(s: FockState, c: S) -> Self {
        let mut v = Self::zero();
        v.add_term(s, c);
        v
    }

    pub fn from_terms(it: impl IntoIterator<Item = (FockState, S)>) -> Self {
        let mut v = Self::zero();
        for (s, c) in it {
            v.add_term(s, c);
        }
        v
    }

    pub fn add_term(&mut self, s: FockState, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(s) {
            btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            btree_map::Entry::Occupied(mut e) => {
                let v = e.get().add_ref(&c);
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn coefficient_of(&self, s: &FockState) -> S {
        self.terms.get(s).cloned().unwrap_or_else(S::zero)
    }

    pub fn get(&self, s: &FockState) -> Option<&S> {
        self.terms.get(s)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FockState, &S)> {
        self.terms.iter()
    }

    pub fn states(&self) -> impl Iterator<Item = &FockState> {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn dropped(&self) -> u64 {
        self.dropped
    }

    pub(crate) fn note_dropped(&mut self, n: u64) {
        self.dropped += n;
    }

    pub fn max_degree(&self) -> Option<Half> {
        self.terms.keys().map(|s| s.degree()).max()
    }

    pub fn min_degree(&self) -> Option<Half> {
        self.terms.keys().map(|s| s.degree()).min()
    }

    pub fn add(&self, o: &Self) -> Self {
        self.axpy(&S::one(), o)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.axpy(&-S::one(), o)
    }

    /// `self + c·o`
    pub fn axpy(&self, c: &S, o: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(c, o);
        out
    }

    pub fn add_scaled(&mut self, c: &S, o: &Self) {
        if c.is_zero() {
            return;
        }
        for (s, x) in &o.terms {
            self.add_term(s.clone(), c.mul_ref(x));
        }
        self.dropped += o.dropped;
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return FockVector { terms: BTreeMap::new(), dropped: self.dropped };
        }
        FockVector { terms: self.terms.iter().map(|(s, x)| (s.clone(), x.mul_ref(c))).collect(), dropped: self.dropped }
    }

    pub fn map<T: Ring>(&self, f: impl Fn(&FockState, &S) -> T) -> FockVector<T> {
        let mut out = FockVector::from_terms(self.terms.iter().map(|(s, x)| (s.clone(), f(s, x))));
        out.dropped = self.dropped;
        out
    }

    pub fn filter(&self, keep: impl Fn(&FockState) -> bool) -> Self {
        FockVector {
            terms: self.terms.iter().filter(|(s, _)| keep(s)).map(|(s, x)| (s.clone(), x.clone())).collect(),
            dropped: self.dropped,
        }
    }

    /// `Σ_s self[s]·o[s]`: pairing of a dual vector with a vector in the same
    /// basis.
    pub fn pair(&self, o: &Self) -> S {
        let (small, large) = if self.len() <= o.len() { (self, o) } else { (o, self) };
        let mut acc = S::zero();
        for (s, x) in &small.terms {
            if let Some(y) = large.terms.get(s) {
                acc = acc.add_ref(&x.mul_ref(y));
            }
        }
        acc
    }

    pub fn into_terms(self) -> BTreeMap<FockState, S> {
        self.terms
    }
}

impl<S: Ring> FromIterator<(FockState, S)> for FockVector<S> {
    fn from_iter<I: IntoIterator<Item = (FockState, S)>>(it: I) -> Self {
        Self::from_terms(it)
    }
}

impl<S: Ring + fmt::Display> fmt::Display for FockVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(s, c)| format!("({c})|{s}>")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<S: Ring> fmt::Debug for FockVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|(s, c)| (s.to_string(), c))).finish()
    }
}
