use serde::{Deserialize, Serialize};

use super::state::{FockState, Half};

/// Degree cutoff and momentum window of a truncated computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Truncation {
    pub max_degree: Half,
    pub p_min: i64,
    pub p_max: i64,
}

impl Truncation {
    /// Window wide enough for every momentum allowed by the degree bound.
    pub fn new(max_degree: Half) -> Truncation {
        let mut p = 0;
        while (p + 1) * (p + 1) <= max_degree.doubled() {
            p += 1;
        }
        Truncation { max_degree, p_min: -p, p_max: p }
    }

    pub fn with_window(max_degree: Half, p_min: i64, p_max: i64) -> Truncation {
        assert!(max_degree >= Half::ZERO, "negative degree bound");
        assert!(p_min <= p_max, "empty momentum window");
        Truncation { max_degree, p_min, p_max }
    }

    pub fn contains(&self, s: &FockState) -> bool {
        s.degree() <= self.max_degree && (self.p_min..=self.p_max).contains(&s.momentum())
    }
}

/// A graded piece: fixed degree and momentum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Sector {
    pub degree: Half,
    pub momentum: i64,
}

impl Sector {
    pub fn of(s: &FockState) -> Sector {
        Sector { degree: s.degree(), momentum: s.momentum() }
    }
}

/// Partitions of `n` as multiplicity vectors (index `k - 1` counts part `k`).
pub fn partitions(n: usize) -> Vec<Vec<u32>> {
    fn rec(rest: usize, max_part: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            let mut v = cur.clone();
            while v.last() == Some(&0) {
                v.pop();
            }
            out.push(v);
            return;
        }
        for k in (1..=max_part.min(rest)).rev() {
            cur[k - 1] += 1;
            rec(rest - k, k, cur, out);
            cur[k - 1] -= 1;
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut vec![0; n], &mut out);
    out
}

/// Sets of distinct positive odd integers (doubled half-integer modes) with
/// the given sum, each increasing.
pub fn fermion_sets(doubled_sum: usize) -> Vec<Vec<u32>> {
    fn rec(rest: usize, min: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        let mut r = min;
        while r <= rest {
            cur.push(r as u32);
            rec(rest - r, r + 2, cur, out);
            cur.pop();
            r += 2;
        }
    }
    let mut out = Vec::new();
    rec(doubled_sum, 1, &mut Vec::new(), &mut out);
    out
}

/// Every basis state of one sector, in canonical order.
pub fn sector_basis(sector: Sector) -> Vec<FockState> {
    let p = sector.momentum;
    let osc2 = sector.degree.doubled() - p * p;
    let mut out = Vec::new();
    if osc2 < 0 {
        return out;
    }
    let osc2 = osc2 as usize;
    for f in (0..=osc2).filter(|f| (osc2 - f) % 2 == 0) {
        let fsets = fermion_sets(f);
        if fsets.is_empty() {
            continue;
        }
        for bos in partitions((osc2 - f) / 2) {
            for fs in &fsets {
                out.push(build(p, &bos, fs));
            }
        }
    }
    out.sort();
    out
}

fn build(p: i64, bos: &[u32], fs: &[u32]) -> FockState {
    let mut s = FockState::charged(p);
    for (i, &m) in bos.iter().enumerate() {
        s.add_bosons(i + 1, m);
    }
    for &r in fs {
        s.insert_fermion(r);
    }
    s
}

/// All sectors of the truncation with at least one state, ordered.
pub fn sectors(t: &Truncation) -> Vec<Sector> {
    let mut out = Vec::new();
    for d in 0..=t.max_degree.doubled() {
        for p in t.p_min..=t.p_max {
            if p * p <= d {
                let s = Sector { degree: Half::from_doubled(d), momentum: p };
                if !sector_basis(s).is_empty() {
                    out.push(s);
                }
            }
        }
    }
    out
}

/// Every state of degree `≤ Δ_max` with momentum in the window, ordered by
/// degree, momentum, then content.
pub fn enumerate_basis(t: &Truncation) -> Vec<FockState> {
    let mut out: Vec<FockState> = sectors(t).into_iter().flat_map(sector_basis).collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..10).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30]);
    }

    #[test]
    fn fermion_set_counts() {
        // distinct odd parts: coefficients of Π(1 + x^(2k+1))
        let counts: Vec<usize> = (0..12).map(|n| fermion_sets(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 0, 1, 1, 1, 1, 1, 2, 2, 2, 2]);
    }

    #[test]
    fn small_sectors() {
        let s = sector_basis(Sector { degree: Half::int(1), momentum: 0 });
        assert_eq!(s.len(), 1);
        let s = sector_basis(Sector { degree: Half::from_doubled(3), momentum: 0 });
        assert_eq!(s.len(), 2);
        let s = sector_basis(Sector { degree: Half::from_doubled(1), momentum: 1 });
        assert_eq!(s, vec![FockState::charged(1)]);
    }
}
