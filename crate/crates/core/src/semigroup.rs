//! Symbolic descriptions of separating semigroups, the reference tables,
//! membership, and the closure of realized degree vectors.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::quadric::QuadricKind;

/// A finite union of explicit vectors, shifted cones v + ℕ₀ʳ and rays
/// {k·v : k ≥ 1}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemigroupDescription {
    pub arity: usize,
    pub finite: Vec<Vec<u32>>,
    pub cones: Vec<Vec<u32>>,
    pub rays: Vec<Vec<u32>>,
}

impl SemigroupDescription {
    pub fn new(arity: usize, finite: Vec<Vec<u32>>, cones: Vec<Vec<u32>>, rays: Vec<Vec<u32>>) -> Result<Self> {
        let d = SemigroupDescription { arity, finite, cones, rays };
        for v in d.finite.iter().chain(&d.cones).chain(&d.rays) {
            if v.len() != arity {
                return Err(invalid(format!("vector {v:?} does not have arity {arity}")));
            }
        }
        if d.rays.iter().any(|v| v.iter().all(|&x| x == 0)) {
            return Err(invalid("a ray generator must be nonzero"));
        }
        Ok(d)
    }

    /// A single shifted cone v + ℕ₀ʳ.
    pub fn cone(apex: &[u32]) -> Self {
        SemigroupDescription { arity: apex.len(), finite: Vec::new(), cones: vec![apex.to_vec()], rays: Vec::new() }
    }

    pub fn contains(&self, v: &[u32]) -> Result<bool> {
        if v.len() != self.arity {
            return Err(invalid(format!("vector of length {} against arity {}", v.len(), self.arity)));
        }
        if self.finite.iter().any(|f| f == v) {
            return Ok(true);
        }
        if self.cones.iter().any(|c| c.iter().zip(v).all(|(a, b)| a <= b)) {
            return Ok(true);
        }
        Ok(self.rays.iter().any(|g| on_ray(g, v)))
    }

    /// Members with positive entries and Σdᵢ ≤ bound.
    pub fn enumerate(&self, bound: u32) -> BTreeSet<Vec<u32>> {
        positive_vectors(self.arity, bound).into_iter().filter(|v| self.contains(v).unwrap_or(false)).collect()
    }
}

fn on_ray(g: &[u32], v: &[u32]) -> bool {
    let Some(i) = g.iter().position(|&x| x > 0) else { return false };
    if v[i] % g[i] != 0 {
        return false;
    }
    let k = v[i] / g[i];
    k >= 1 && g.iter().zip(v).all(|(a, b)| a * k == *b)
}

/// All vectors of length `r` with entries ≥ 1 and sum ≤ `bound`.
pub fn positive_vectors(r: usize, bound: u32) -> Vec<Vec<u32>> {
    fn rec(r: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        let rest = (r - cur.len() - 1) as u32;
        for x in 1..=left.saturating_sub(rest) {
            cur.push(x);
            rec(r, left - x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if r > 0 && bound as usize >= r {
        rec(r, bound, &mut Vec::with_capacity(r), &mut out);
    }
    out
}

/// Separating semigroups of real genus-4 curves on quadrics, by quadric
/// kind and the pair (r, l).
pub fn table1_description(kind: QuadricKind, r: usize, l: usize) -> Result<SemigroupDescription> {
    use QuadricKind::*;
    let d = match (kind, r, l) {
        (Ellipsoid, 3, 3) | (Cone, 3, 2) | (Hyperboloid, 3, 2) => SemigroupDescription::cone(&[1, 2, 1]),
        (Cone, 3, 0) => {
            let mut d = SemigroupDescription::cone(&[1, 2, 1]);
            d.finite.push(vec![1, 1, 1]);
            d
        }
        (Hyperboloid, 1, 0) => SemigroupDescription::cone(&[3]),
        (Hyperboloid, 3, 0) => SemigroupDescription::cone(&[1, 1, 1]),
        (Ellipsoid, 5, 5) | (Cone, 5, 4) | (Hyperboloid, 5, 4) => SemigroupDescription::cone(&[1; 5]),
        _ => return Err(invalid(format!("no table row for {} with (r, l) = ({r}, {l})", kind.name()))),
    };
    Ok(d)
}

/// The table rows, maximal ones last.
pub const TABLE1_ROWS: [(QuadricKind, usize, usize); 9] = [
    (QuadricKind::Ellipsoid, 3, 3),
    (QuadricKind::Cone, 3, 0),
    (QuadricKind::Cone, 3, 2),
    (QuadricKind::Hyperboloid, 1, 0),
    (QuadricKind::Hyperboloid, 3, 0),
    (QuadricKind::Hyperboloid, 3, 2),
    (QuadricKind::Ellipsoid, 5, 5),
    (QuadricKind::Cone, 5, 4),
    (QuadricKind::Hyperboloid, 5, 4),
];

/// Separating semigroup of a non-maximal separating hyperelliptic curve of
/// genus g: (1,1)ℕ ∪ ((m,m) + ℕ₀²) for odd g, 2ℕ ∪ (g + ℕ₀) for even g,
/// with m = ⌊(g+1)/2⌋.
pub fn theorem2_description(g: u32) -> Result<SemigroupDescription> {
    if g == 0 {
        return Err(invalid("genus must be at least 1"));
    }
    let m = (g + 1) / 2;
    if g % 2 == 1 {
        SemigroupDescription::new(2, Vec::new(), vec![vec![m, m]], vec![vec![1, 1]])
    } else {
        SemigroupDescription::new(1, Vec::new(), vec![vec![g]], vec![vec![2]])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub vector: Vec<u32>,
    pub certificate: String,
    /// Set only when a fiber has a rank-4 speciality certificate.
    pub nonspecial: bool,
}

/// Degree vectors realized by certified morphisms.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationLedger {
    pub entries: Vec<LedgerEntry>,
}

impl RealizationLedger {
    pub fn push(&mut self, vector: Vec<u32>, certificate: impl Into<String>, nonspecial: bool) {
        self.entries.push(LedgerEntry { vector, certificate: certificate.into(), nonspecial });
    }

    pub fn arity(&self) -> Option<usize> {
        self.entries.first().map(|e| e.vector.len())
    }
}

/// Smallest set containing the ledger, closed under addition and under
/// v ↦ v + ℕ₀ʳ for non-special v, truncated to Σdᵢ ≤ bound.
pub fn closure_up_to_bound(ledger: &RealizationLedger, bound: u32) -> Result<BTreeSet<Vec<u32>>> {
    let r = ledger.arity().ok_or_else(|| invalid("empty ledger"))?;
    if ledger.entries.iter().any(|e| e.vector.len() != r) {
        return Err(invalid("ledger vectors have different lengths"));
    }
    let sum = |v: &[u32]| v.iter().sum::<u32>();
    let mut set: BTreeSet<Vec<u32>> = BTreeSet::new();
    for e in &ledger.entries {
        if sum(&e.vector) > bound {
            continue;
        }
        if e.nonspecial {
            for v in positive_vectors(r, bound) {
                if e.vector.iter().zip(&v).all(|(a, b)| a <= b) {
                    set.insert(v);
                }
            }
        } else {
            set.insert(e.vector.clone());
        }
    }
    // sums, until nothing new appears
    loop {
        let items: Vec<Vec<u32>> = set.iter().cloned().collect();
        let mut added = false;
        for a in &items {
            for b in &items {
                if sum(a) + sum(b) > bound {
                    continue;
                }
                let c: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                added |= set.insert(c);
            }
        }
        if !added {
            return Ok(set);
        }
    }
}

/// Bounded comparison of a description with a set of vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub bound: u32,
    /// In the description but not in the set.
    pub missing: Vec<Vec<u32>>,
    /// In the set but not in the description.
    pub extra: Vec<Vec<u32>>,
}

impl Comparison {
    pub fn agrees(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }
}

pub fn compare_up_to_bound(s: &SemigroupDescription, t: &BTreeSet<Vec<u32>>, bound: u32) -> Result<Comparison> {
    if t.iter().any(|v| v.len() != s.arity) {
        return Err(invalid("arity mismatch"));
    }
    let sum = |v: &[u32]| v.iter().sum::<u32>();
    let expected = s.enumerate(bound);
    let missing = expected.iter().filter(|v| !t.contains(*v)).cloned().collect();
    let extra = t.iter().filter(|v| sum(v) <= bound && !expected.contains(*v)).cloned().collect();
    Ok(Comparison { bound, missing, extra })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_examples() {
        let s = SemigroupDescription::cone(&[1, 2, 1]);
        assert!(s.contains(&[1, 2, 1]).unwrap());
        assert!(!s.contains(&[1, 1, 1]).unwrap());
        assert!(s.contains(&[2, 5, 3]).unwrap());
        assert!(s.contains(&[1, 2]).is_err());
    }

    #[test]
    fn rays() {
        let s = theorem2_description(3).unwrap();
        assert!(s.contains(&[1, 1]).unwrap());
        assert!(s.contains(&[3, 3]).unwrap());
        assert!(!s.contains(&[1, 2]).unwrap());
        assert!(s.contains(&[2, 5]).unwrap());
        let e = theorem2_description(4).unwrap();
        let got: Vec<u32> = e.enumerate(7).into_iter().map(|v| v[0]).collect();
        assert_eq!(got, vec![2, 4, 5, 6, 7]);
        assert!(theorem2_description(0).is_err());
    }

    #[test]
    fn positive_vector_count() {
        // compositions of n into r positive parts: C(n-1, r-1)
        let total: usize = (3..=8).map(|n| ((n - 2) * (n - 1) / 2) as usize).sum();
        assert_eq!(positive_vectors(3, 8).len(), total);
    }
}
