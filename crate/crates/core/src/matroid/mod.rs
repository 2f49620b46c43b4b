//! Matroids given by a GF(2) matrix or by an explicit circuit family, and
//! the oracles the rest of the crate is built on: circuits, rank,
//! binarity, 3-connectivity, cocircuits and equality.

mod family;
mod ground;
mod iso;
mod set;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

pub use family::CircuitFamily;
pub use ground::GroundSet;
pub use iso::spike_isomorphic;
pub(crate) use set::k_subsets;
pub use set::ElemSet;

use crate::error::{Error, Result};
use crate::gf2::{BitVec, GF2Matrix, DEFAULT_ENUMERATION_BUDGET};
use crate::label::Label;

/// Largest ground set for which `2^n` subset tables are built.
pub const SUBSET_TABLE_LIMIT: usize = 24;

/// Largest ground set accepted by [`circuits_bruteforce`].
pub const BRUTEFORCE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Representation {
    /// Column `j` of the (row-reduced) matrix is ground element `j`.
    Vector(GF2Matrix),
    Circuits,
}

/// A matroid on a labeled ground set.
///
/// The circuit family is computed once at construction; for a matrix
/// representation this enumerates the nullspace, so construction fails
/// with [`Error::MemoryBudget`] when `cols - rank` is too large.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matroid {
    ground: GroundSet,
    rep: Representation,
    circuits: CircuitFamily,
    rank: usize,
}

impl Matroid {
    pub fn from_matrix(m: &GF2Matrix) -> Result<Matroid> {
        Self::from_matrix_within(m, DEFAULT_ENUMERATION_BUDGET)
    }

    pub fn from_matrix_within(m: &GF2Matrix, limit: usize) -> Result<Matroid> {
        let ground = GroundSet::new(m.labels().iter().cloned())?;
        let matrix = m.select_columns(ground.labels())?.reduced();
        let circuits = CircuitFamily::minimal(
            matrix
                .nullspace_vectors_within(limit)?
                .iter()
                .map(|v| ElemSet(v.to_mask().expect("ground fits in 64 bits"))),
        );
        Ok(Matroid {
            rank: matrix.nrows(),
            ground,
            rep: Representation::Vector(matrix),
            circuits,
        })
    }

    /// Validates the circuit axioms before accepting the family.
    pub fn from_circuits(ground: GroundSet, circuits: CircuitFamily) -> Result<Matroid> {
        check_circuit_axioms(&circuits, &ground).map_err(Error::InvalidCircuits)?;
        let rank = greedy_rank(&circuits, ground.full());
        Ok(Matroid {
            ground,
            rep: Representation::Circuits,
            circuits,
            rank,
        })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn representation(&self) -> &Representation {
        &self.rep
    }

    /// The row-reduced representing matrix, if this is a vector matroid.
    pub fn matrix(&self) -> Option<&GF2Matrix> {
        match &self.rep {
            Representation::Vector(m) => Some(m),
            Representation::Circuits => None,
        }
    }

    pub fn circuits(&self) -> &CircuitFamily {
        &self.circuits
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ground.is_empty()
    }

    pub fn rank_of(&self, s: ElemSet) -> usize {
        match &self.rep {
            Representation::Vector(m) => m.column_rank(s.iter()),
            Representation::Circuits => greedy_rank(&self.circuits, s),
        }
    }

    pub fn rank_of_labels(&self, labels: &[Label]) -> Result<usize> {
        Ok(self.rank_of(self.ground.set_of(labels)?))
    }

    pub fn is_independent(&self, s: ElemSet) -> bool {
        !self.circuits.has_member_within(s)
    }

    /// Closed rank-`(r - 1)` set.
    pub fn is_hyperplane(&self, s: ElemSet) -> bool {
        let rs = self.rank_of(s);
        rs + 1 == self.rank
            && self
                .ground
                .full()
                .difference(s)
                .iter()
                .all(|e| self.rank_of(s.with(e)) > rs)
    }

    pub fn is_circuit_hyperplane(&self, s: ElemSet) -> bool {
        self.circuits.contains(s) && self.is_hyperplane(s)
    }

    /// `dependent[S]` for every subset mask `S`.
    pub fn dependence_table(&self) -> Result<Vec<bool>> {
        let n = self.len();
        if n > SUBSET_TABLE_LIMIT {
            return Err(Error::MemoryBudget {
                required: n,
                limit: SUBSET_TABLE_LIMIT,
            });
        }
        let mut dep = vec![false; 1 << n];
        for c in self.circuits.iter() {
            dep[c.0 as usize] = true;
        }
        for i in 0..n {
            let bit = 1usize << i;
            for s in 0..dep.len() {
                if s & bit != 0 && dep[s ^ bit] {
                    dep[s] = true;
                }
            }
        }
        Ok(dep)
    }

    /// `rank[S]` for every subset mask `S`.
    pub fn rank_table(&self) -> Result<Vec<u8>> {
        let dep = self.dependence_table()?;
        let mut rank = vec![0u8; dep.len()];
        for s in 1..dep.len() {
            rank[s] = if dep[s] {
                ElemSet(s as u64)
                    .iter()
                    .map(|e| rank[s ^ (1 << e)])
                    .max()
                    .unwrap_or(0)
            } else {
                s.count_ones() as u8
            };
        }
        Ok(rank)
    }

    /// Tutte 3-connectivity by scanning every partition `(S, E - S)` for a
    /// 1- or 2-separation.
    pub fn is_3connected(&self) -> Result<bool> {
        let rank = self.rank_table()?;
        let n = self.len();
        let full = (1usize << n) - 1;
        let r = rank[full] as i32;
        for s in 1..full {
            let k = (s.count_ones() as usize).min(n - s.count_ones() as usize);
            let lambda = rank[s] as i32 + rank[full ^ s] as i32 - r;
            if lambda < k.min(2) as i32 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Minimal nonzero supports of the row space (vector matroids only).
    pub fn cocircuits(&self) -> Result<CircuitFamily> {
        let m = self
            .matrix()
            .ok_or(Error::Unsupported("cocircuits need a GF(2) representation"))?;
        let vs = m.row_space_vectors_within(DEFAULT_ENUMERATION_BUDGET)?;
        Ok(CircuitFamily::minimal(vs.iter().map(|v| {
            ElemSet(v.to_mask().expect("ground fits in 64 bits"))
        })))
    }

    /// Same matroid with labels renamed through `map`; unmapped labels are
    /// kept.
    pub fn relabeled(&self, map: &BTreeMap<Label, Label>) -> Result<Matroid> {
        let rename = |l: &Label| map.get(l).cloned().unwrap_or_else(|| l.clone());
        match &self.rep {
            Representation::Vector(m) => {
                Matroid::from_matrix(&m.relabeled(m.labels().iter().map(rename).collect())?)
            }
            Representation::Circuits => {
                let ground = GroundSet::new(self.ground.labels().iter().map(rename))?;
                let idx: Vec<usize> = self
                    .ground
                    .labels()
                    .iter()
                    .map(|l| ground.index(&rename(l)))
                    .collect::<Result<_>>()?;
                let circuits = self
                    .circuits
                    .map(|c| ElemSet::from_indices(c.iter().map(|i| idx[i])));
                Ok(Matroid {
                    ground,
                    rep: Representation::Circuits,
                    circuits,
                    rank: self.rank,
                })
            }
        }
    }

    /// Labels of every circuit, in canonical order.
    pub fn circuit_labels(&self) -> Vec<Vec<Label>> {
        self.circuits
            .iter()
            .map(|c| self.ground.labels_of(c))
            .collect()
    }

    pub(crate) fn with_circuits_unchecked(ground: GroundSet, circuits: CircuitFamily) -> Matroid {
        let rank = greedy_rank(&circuits, ground.full());
        Matroid {
            ground,
            rep: Representation::Circuits,
            circuits,
            rank,
        }
    }
}

fn greedy_rank(circuits: &CircuitFamily, s: ElemSet) -> usize {
    let mut basis = ElemSet::EMPTY;
    for e in s.iter() {
        let cand = basis.with(e);
        if !circuits.has_member_within(cand) {
            basis = cand;
        }
    }
    basis.len()
}

/// The circuit family of `m`.
pub fn circuits(m: &Matroid) -> &CircuitFamily {
    m.circuits()
}

/// Minimal dependent sets found by asking `independent` about every subset.
pub fn circuits_bruteforce(
    ground: &GroundSet,
    independent: impl Fn(ElemSet) -> bool,
) -> Result<CircuitFamily> {
    let n = ground.len();
    if n > BRUTEFORCE_LIMIT {
        return Err(Error::MemoryBudget {
            required: n,
            limit: BRUTEFORCE_LIMIT,
        });
    }
    let indep: Vec<bool> = (0..1u64 << n).map(|s| independent(ElemSet(s))).collect();
    Ok(CircuitFamily::new((1..1u64 << n).filter_map(|s| {
        let set = ElemSet(s);
        (!indep[s as usize] && set.iter().all(|e| indep[(s & !(1 << e)) as usize])).then_some(set)
    })))
}

/// Independence oracle for the columns of `m` named by ground indices.
pub fn matrix_independence(m: &GF2Matrix) -> impl Fn(ElemSet) -> bool + '_ {
    move |s| m.column_rank(s.iter()) == s.len()
}

pub fn rank_of(m: &Matroid, labels: &[Label]) -> Result<usize> {
    m.rank_of_labels(labels)
}

/// Binary matroid test: every symmetric difference of two distinct circuits
/// contains a circuit.
pub fn is_binary_by_symdiff(c: &CircuitFamily) -> bool {
    let sets = c.as_slice();
    sets.iter().enumerate().all(|(i, &a)| {
        sets[i + 1..]
            .iter()
            .all(|&b| c.has_member_within(a.symmetric_difference(b)))
    })
}

pub fn verify_circuit_axioms(c: &CircuitFamily, ground: &GroundSet) -> bool {
    check_circuit_axioms(c, ground).is_ok()
}

/// Nonempty members inside the ground set, no member inside another, and
/// weak elimination.
pub fn check_circuit_axioms(
    c: &CircuitFamily,
    ground: &GroundSet,
) -> core::result::Result<(), String> {
    let full = ground.full();
    let sets = c.as_slice();
    for &s in sets {
        if s.is_empty() {
            return Err("empty circuit".into());
        }
        if !s.is_subset(full) {
            return Err(format!("circuit {s:?} leaves the ground set"));
        }
    }
    for (i, &a) in sets.iter().enumerate() {
        for &b in &sets[i + 1..] {
            if a.is_subset(b) || b.is_subset(a) {
                return Err(format!(
                    "{:?} and {:?} are nested",
                    ground.labels_of(a),
                    ground.labels_of(b)
                ));
            }
            let union = a.union(b);
            for e in a.intersection(b).iter() {
                if !c.has_member_within(union.without(e)) {
                    return Err(format!(
                        "elimination fails for {:?}, {:?} at {}",
                        ground.labels_of(a),
                        ground.labels_of(b),
                        ground.label(e)
                    ));
                }
            }
        }
    }
    Ok(())
}

pub fn is_3connected(m: &Matroid) -> Result<bool> {
    m.is_3connected()
}

pub fn cocircuits(m: &Matroid) -> Result<CircuitFamily> {
    m.cocircuits()
}

/// Same labeled ground set and same circuits.
pub fn matroids_equal(a: &Matroid, b: &Matroid) -> bool {
    a.ground == b.ground && a.circuits == b.circuits
}

/// `v` as an element set, for vectors indexed by ground position.
pub fn support(v: &BitVec) -> ElemSet {
    ElemSet(v.to_mask().expect("ground fits in 64 bits"))
}
