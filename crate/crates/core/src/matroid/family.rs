use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::ElemSet;

/// A set of element sets in canonical order (size, then lexicographic).
///
/// Members are indices into some [`GroundSet`](super::GroundSet); the
/// family does not carry the ground set itself.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CircuitFamily {
    sets: Vec<ElemSet>,
}

impl CircuitFamily {
    pub fn new(sets: impl IntoIterator<Item = ElemSet>) -> Self {
        let mut sets: Vec<ElemSet> = sets.into_iter().collect();
        sets.sort_unstable();
        sets.dedup();
        CircuitFamily { sets }
    }

    /// Inclusion-minimal nonempty members of `sets`.
    pub fn minimal(sets: impl IntoIterator<Item = ElemSet>) -> Self {
        let all = CircuitFamily::new(sets.into_iter().filter(|s| !s.is_empty()));
        let mut kept: Vec<ElemSet> = Vec::with_capacity(all.len());
        // canonical order lists smaller sets first
        for s in all.sets {
            if !kept.iter().any(|k| k.is_subset(s)) {
                kept.push(s);
            }
        }
        CircuitFamily { sets: kept }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ElemSet> + '_ {
        self.sets.iter().copied()
    }

    pub fn as_slice(&self) -> &[ElemSet] {
        &self.sets
    }

    pub fn contains(&self, s: ElemSet) -> bool {
        self.sets.binary_search(&s).is_ok()
    }

    /// Whether some member is a subset of `s`.
    pub fn has_member_within(&self, s: ElemSet) -> bool {
        self.sets.iter().any(|c| c.is_subset(s))
    }

    pub fn union(&self, other: &CircuitFamily) -> CircuitFamily {
        CircuitFamily::new(self.iter().chain(other.iter()))
    }

    pub fn filter(&self, pred: impl Fn(ElemSet) -> bool) -> CircuitFamily {
        CircuitFamily {
            sets: self.iter().filter(|&s| pred(s)).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(ElemSet) -> ElemSet) -> CircuitFamily {
        CircuitFamily::new(self.iter().map(f))
    }

    /// Number of members of each size.
    pub fn size_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for s in &self.sets {
            *h.entry(s.len()).or_insert(0) += 1;
        }
        h
    }

    pub fn count_of_size(&self, k: usize) -> usize {
        self.sets.iter().filter(|s| s.len() == k).count()
    }
}

impl FromIterator<ElemSet> for CircuitFamily {
    fn from_iter<I: IntoIterator<Item = ElemSet>>(iter: I) -> Self {
        CircuitFamily::new(iter)
    }
}
