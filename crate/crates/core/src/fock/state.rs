use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateError {
    #[error("fermion mode {0} is not a positive half-integer")]
    BadFermion(Half),
    #[error("fermion mode {0} occurs twice")]
    RepeatedFermion(Half),
    #[error("boson mode must be positive, got {0}")]
    BadBoson(i64),
    #[error("cannot parse state `{0}`")]
    Parse(String),
}

/// A half-integer, stored doubled.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Half(i64);

impl Half {
    pub const ZERO: Half = Half(0);

    pub const fn from_doubled(n: i64) -> Half {
        Half(n)
    }

    pub const fn int(n: i64) -> Half {
        Half(2 * n)
    }

    pub const fn doubled(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// Integer value when `self` is an integer.
    pub fn as_integer(self) -> Option<i64> {
        self.is_integer().then_some(self.0 / 2)
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl Add for Half {
    type Output = Half;
    fn add(self, o: Half) -> Half {
        Half(self.0 + o.0)
    }
}

impl Sub for Half {
    type Output = Half;
    fn sub(self, o: Half) -> Half {
        Half(self.0 - o.0)
    }
}

impl Neg for Half {
    type Output = Half;
    fn neg(self) -> Half {
        Half(-self.0)
    }
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl fmt::Debug for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Half {
    type Err = StateError;

    fn from_str(s: &str) -> Result<Half, StateError> {
        let bad = || StateError::Parse(s.to_string());
        let t = s.trim();
        match t.split_once('/') {
            Some((n, d)) => {
                let n: i64 = n.trim().parse().map_err(|_| bad())?;
                match d.trim() {
                    "2" => Ok(Half(n)),
                    "1" => Ok(Half(2 * n)),
                    _ => Err(bad()),
                }
            }
            None => t.parse::<i64>().map(Half::int).map_err(|_| bad()),
        }
    }
}

impl From<Half> for String {
    fn from(h: Half) -> String {
        h.to_string()
    }
}

impl TryFrom<String> for Half {
    type Error = StateError;
    fn try_from(s: String) -> Result<Half, StateError> {
        s.parse()
    }
}

/// Basis monomial `Π (a_{-n}/[2n])^{m_n} · b_{-r_1}⋯b_{-r_k} · e^{pQ}|0>` with
/// `r_1 < ⋯ < r_k`.
///
/// The bosonic factors are rescaled by `1/[2n]`: with this normalization every
/// coefficient produced by the realization is a Laurent polynomial in `q`.
/// [`FockState::plain_norm`] converts to the unscaled monomials.
///
/// The derived order compares degree, then momentum, then content.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockState {
    deg2: i64,
    momentum: i64,
    bosons: Vec<u32>,
    fermions: Vec<u32>,
}

impl FockState {
    pub fn vacuum() -> FockState {
        FockState { deg2: 0, momentum: 0, bosons: Vec::new(), fermions: Vec::new() }
    }

    /// `e^{pQ}|0>`
    pub fn charged(p: i64) -> FockState {
        FockState { deg2: p * p, momentum: p, bosons: Vec::new(), fermions: Vec::new() }
    }

    /// Boson modes listed with repetition, fermion modes in any order.
    pub fn new(momentum: i64, bosons: &[i64], fermions: &[Half]) -> Result<FockState, StateError> {
        let mut s = FockState::charged(momentum);
        for &n in bosons {
            if n <= 0 {
                return Err(StateError::BadBoson(n));
            }
            s.add_bosons(n as usize, 1);
        }
        let mut fs: Vec<u32> = Vec::with_capacity(fermions.len());
        for &r in fermions {
            if r.doubled() <= 0 || r.is_integer() {
                return Err(StateError::BadFermion(r));
            }
            if fs.contains(&(r.doubled() as u32)) {
                return Err(StateError::RepeatedFermion(r));
            }
            fs.push(r.doubled() as u32);
        }
        fs.sort_unstable();
        s.deg2 += fs.iter().map(|&r| r as i64).sum::<i64>();
        s.fermions = fs;
        Ok(s)
    }

    pub fn momentum(&self) -> i64 {
        self.momentum
    }

    pub fn degree(&self) -> Half {
        Half(self.deg2)
    }

    pub fn degree2(&self) -> i64 {
        self.deg2
    }

    /// Degree carried by the bosons alone.
    pub fn boson_degree(&self) -> i64 {
        self.bosons.iter().enumerate().map(|(i, &m)| (i as i64 + 1) * m as i64).sum()
    }

    pub fn multiplicity(&self, n: usize) -> u32 {
        self.bosons.get(n.wrapping_sub(1)).copied().unwrap_or(0)
    }

    /// Multiplicities indexed by `n - 1`, without trailing zeros.
    pub fn multiplicities(&self) -> &[u32] {
        &self.bosons
    }

    /// Boson modes with repetition, increasing.
    pub fn boson_modes(&self) -> Vec<i64> {
        let mut out = Vec::new();
        for (i, &m) in self.bosons.iter().enumerate() {
            out.extend(std::iter::repeat(i as i64 + 1).take(m as usize));
        }
        out
    }

    pub fn fermion_modes(&self) -> Vec<Half> {
        self.fermions.iter().map(|&r| Half(r as i64)).collect()
    }

    /// Doubled fermion modes, increasing.
    pub fn fermions_doubled(&self) -> &[u32] {
        &self.fermions
    }

    pub fn fermion_count(&self) -> usize {
        self.fermions.len()
    }

    /// Eigenvalue of `exp(-2πi d)`, i.e. `(-1)^{2·degree}`.
    pub fn parity(&self) -> i64 {
        if self.deg2.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }

    /// `Π [2n]^{m_n}` as exponents: the unscaled monomial equals
    /// `Π [2n]^{m_n}` times this state.
    pub fn plain_norm(&self) -> Vec<(i64, u32)> {
        self.bosons
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(i, &m)| (2 * (i as i64 + 1), m))
            .collect()
    }

    /// From momentum, boson multiplicities (index `n - 1`) and increasing
    /// doubled fermion modes.
    pub(crate) fn from_parts(momentum: i64, mut bosons: Vec<u32>, fermions: Vec<u32>) -> FockState {
        while bosons.last() == Some(&0) {
            bosons.pop();
        }
        let nb: i64 = bosons.iter().enumerate().map(|(i, &m)| (i as i64 + 1) * m as i64).sum();
        let nf: i64 = fermions.iter().map(|&r| r as i64).sum();
        FockState { deg2: 2 * nb + nf + momentum * momentum, momentum, bosons, fermions }
    }

    /// Doubled degree carried by the fermions.
    pub fn fermion_degree2(&self) -> i64 {
        self.fermions.iter().map(|&r| r as i64).sum()
    }

    pub(crate) fn add_bosons(&mut self, n: usize, k: u32) {
        if k == 0 {
            return;
        }
        if self.bosons.len() < n {
            self.bosons.resize(n, 0);
        }
        self.bosons[n - 1] += k;
        self.deg2 += 2 * n as i64 * k as i64;
    }

    pub(crate) fn remove_bosons(&mut self, n: usize, k: u32) {
        if k == 0 {
            return;
        }
        self.bosons[n - 1] -= k;
        self.deg2 -= 2 * n as i64 * k as i64;
        while self.bosons.last() == Some(&0) {
            self.bosons.pop();
        }
    }

    pub(crate) fn shift_momentum(&mut self, s: i64) {
        let p = self.momentum + s;
        self.deg2 += p * p - self.momentum * self.momentum;
        self.momentum = p;
    }

    /// Inserts `b_{-r}`; `None` if already occupied, else the sign
    /// `(-1)^{#modes below r}`.
    pub(crate) fn insert_fermion(&mut self, r2: u32) -> Option<i64> {
        match self.fermions.binary_search(&r2) {
            Ok(_) => None,
            Err(pos) => {
                self.fermions.insert(pos, r2);
                self.deg2 += r2 as i64;
                Some(if pos % 2 == 0 { 1 } else { -1 })
            }
        }
    }

    /// Removes `b_{-r}`; `None` if absent, else the sign
    /// `(-1)^{#modes below r}`.
    pub(crate) fn remove_fermion(&mut self, r2: u32) -> Option<i64> {
        match self.fermions.binary_search(&r2) {
            Err(_) => None,
            Ok(pos) => {
                self.fermions.remove(pos);
                self.deg2 -= r2 as i64;
                Some(if pos % 2 == 0 { 1 } else { -1 })
            }
        }
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<String> = self.boson_modes().iter().map(|n| n.to_string()).collect();
        let b: Vec<String> = self.fermion_modes().iter().map(|r| r.to_string()).collect();
        write!(f, "p={}; a:[{}]; b:[{}]", self.momentum, a.join(","), b.join(","))
    }
}

impl fmt::Debug for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{self}>")
    }
}

impl FromStr for FockState {
    type Err = StateError;

    /// Parses the encoding produced by `Display`; omitted parts default to
    /// empty, `p` to zero.
    fn from_str(s: &str) -> Result<FockState, StateError> {
        let bad = || StateError::Parse(s.to_string());
        let mut p = 0i64;
        let mut bosons = Vec::new();
        let mut fermions = Vec::new();
        for part in s.split(';').map(str::trim).filter(|x| !x.is_empty()) {
            if let Some(v) = part.strip_prefix("p=") {
                p = v.trim().parse().map_err(|_| bad())?;
                continue;
            }
            let (key, list) = part.split_once(':').ok_or_else(bad)?;
            let inner = list.trim().strip_prefix('[').and_then(|x| x.strip_suffix(']')).ok_or_else(bad)?;
            let items = inner.split(',').map(str::trim).filter(|x| !x.is_empty());
            match key.trim() {
                "a" => {
                    for it in items {
                        bosons.push(it.parse::<i64>().map_err(|_| bad())?);
                    }
                }
                "b" => {
                    for it in items {
                        fermions.push(it.parse::<Half>()?);
                    }
                }
                _ => return Err(bad()),
            }
        }
        FockState::new(p, &bosons, &fermions)
    }
}

impl Serialize for FockState {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FockState {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<FockState, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(s: &str) -> Half {
        s.parse().unwrap()
    }

    #[test]
    fn degrees() {
        assert_eq!(FockState::vacuum().degree(), Half::ZERO);
        let s = FockState::new(1, &[1], &[h("1/2")]).unwrap();
        assert_eq!(s.degree(), Half::int(2));
        assert_eq!(FockState::charged(2).degree(), Half::int(2));
    }

    #[test]
    fn encoding_round_trip() {
        let s = FockState::new(1, &[2, 1, 1], &[h("3/2"), h("1/2")]).unwrap();
        assert_eq!(s.to_string(), "p=1; a:[1,1,2]; b:[1/2,3/2]");
        assert_eq!(s.to_string().parse::<FockState>().unwrap(), s);
        assert_eq!("p=0; a:[]; b:[]".parse::<FockState>().unwrap(), FockState::vacuum());
        assert_eq!("b:[1/2]".parse::<FockState>().unwrap().fermion_count(), 1);
        assert!("b:[1/2,1/2]".parse::<FockState>().is_err());
        assert!("b:[1]".parse::<FockState>().is_err());
        assert!("a:[0]".parse::<FockState>().is_err());
    }

    #[test]
    fn parity_matches_fermions_plus_momentum() {
        let s = FockState::new(1, &[], &[h("1/2")]).unwrap();
        assert_eq!(s.parity(), 1);
        assert_eq!(FockState::charged(1).parity(), -1);
    }

    #[test]
    fn fermion_signs() {
        let mut s = FockState::vacuum();
        assert_eq!(s.insert_fermion(1), Some(1));
        assert_eq!(s.insert_fermion(3), Some(-1));
        assert_eq!(s.insert_fermion(1), None);
        assert_eq!(s.remove_fermion(1), Some(1));
        assert_eq!(s.degree(), h("3/2"));
    }

    #[test]
    fn half_text() {
        assert_eq!(h("-1/2").doubled(), -1);
        assert_eq!(h("3").to_string(), "3");
        assert_eq!(Half::from_doubled(5).to_string(), "5/2");
        assert!("1/3".parse::<Half>().is_err());
    }
}
