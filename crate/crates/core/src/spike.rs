//! Spikes: the binary spike `Z_r`, general spikes built from a family of
//! leg-transversal circuits, circuit-hyperplane relaxation and spike
//! recognition.
//!
//! A rank-`r` spike with tip `t` lives on `x_1..x_r, y_1..y_r, t`. Its
//! circuits are the legs `{t, x_i, y_i}`, the unions of two leg pairs, a
//! family of size-`r` leg-transversals (possibly empty), and every
//! `(r+1)`-set containing none of those.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gf2::{BitVec, GF2Matrix};
use crate::label::Label;
use crate::matroid::{k_subsets, CircuitFamily, ElemSet, GroundSet, Matroid};

/// Tip, legs and transversal circuits of a spike, by label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SpikeDescriptor {
    pub rank: usize,
    pub tip: Label,
    /// `legs[i]` is the pair `{x_i, y_i}`; the tip is implied.
    pub legs: Vec<(Label, Label)>,
    pub transversal_circuits: Vec<Vec<Label>>,
}

impl SpikeDescriptor {
    /// The descriptor of the canonical labeling `x_i, y_i, t`.
    pub fn canonical(r: usize, transversals: &CircuitFamily) -> SpikeDescriptor {
        let g = GroundSet::spike(r);
        SpikeDescriptor {
            rank: r,
            tip: Label::tip(),
            legs: (1..=r).map(|i| (Label::x(i), Label::y(i))).collect(),
            transversal_circuits: transversals.iter().map(|c| g.labels_of(c)).collect(),
        }
    }

    pub(crate) fn resolve(&self, g: &GroundSet) -> Result<ResolvedSpike> {
        let legs = self
            .legs
            .iter()
            .map(|(a, b)| Ok((g.index(a)?, g.index(b)?)))
            .collect::<Result<Vec<_>>>()?;
        let transversals = self
            .transversal_circuits
            .iter()
            .map(|c| g.set_of(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(ResolvedSpike {
            tip: g.index(&self.tip)?,
            legs,
            transversals,
        })
    }
}

/// A descriptor translated to ground indices.
pub(crate) struct ResolvedSpike {
    pub tip: usize,
    pub legs: Vec<(usize, usize)>,
    pub transversals: Vec<ElemSet>,
}

/// The pair `(X, e)` parameterizing an es-splitting.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SplitSpec {
    pub x: BTreeSet<Label>,
    pub e: Label,
}

impl SplitSpec {
    pub fn new(x: impl IntoIterator<Item = Label>, e: Label) -> Result<SplitSpec> {
        let x: BTreeSet<Label> = x.into_iter().collect();
        if !x.contains(&e) {
            return Err(Error::ElementNotInX(e.as_str().into()));
        }
        Ok(SplitSpec { x, e })
    }

    pub fn from_set(g: &GroundSet, x: ElemSet, e: usize) -> Result<SplitSpec> {
        SplitSpec::new(g.labels_of(x), g.label(e).clone())
    }
}

fn check_rank(r: usize) -> Result<()> {
    if r < 3 {
        Err(Error::RankTooSmall(r))
    } else {
        Ok(())
    }
}

/// `[I_r | J_r - I_r | 1]`, columns `x1..xr, y1..yr, t`.
pub fn binary_spike_matrix(r: usize) -> Result<GF2Matrix> {
    check_rank(r)?;
    let n = 2 * r + 1;
    let rows = (0..r)
        .map(|i| {
            BitVec::from_indices(
                n,
                [i].into_iter()
                    .chain((r..2 * r).filter(|&j| j != r + i))
                    .chain([2 * r]),
            )
        })
        .collect();
    GF2Matrix::new(rows, GroundSet::spike(r).labels().to_vec())
}

/// `Z_r` as a vector matroid.
pub fn binary_spike(r: usize) -> Result<Matroid> {
    Matroid::from_matrix(&binary_spike_matrix(r)?)
}

fn leg_pair(g: &GroundSet, i: usize) -> (usize, usize) {
    (
        g.index_of(&Label::x(i)).expect("spike ground"),
        g.index_of(&Label::y(i)).expect("spike ground"),
    )
}

/// Leg-transversals of the canonical spike ground, one per bit pattern:
/// bit `i` of `code` picks `y_{i+1}` instead of `x_{i+1}`.
fn transversal(r: usize, code: u64) -> ElemSet {
    ElemSet::from_indices((0..r).map(|i| if (code >> i) & 1 == 1 { r + i } else { i }))
}

/// The families `φ_1..φ_4` on `x1..xr, y1..yr, t`.
pub fn phi_family(r: usize, k: usize) -> Result<CircuitFamily> {
    check_rank(r)?;
    let g = GroundSet::spike(r);
    let t = 2 * r;
    let full = g.full();
    let phi3 = || {
        (0u64..1 << r)
            .filter(|c| c.count_ones() % 2 == 1)
            .map(move |c| transversal(r, c))
    };
    let fam = match k {
        1 => CircuitFamily::new((1..=r).map(|i| {
            let (x, y) = leg_pair(&g, i);
            ElemSet::from_indices([x, y, t])
        })),
        2 => CircuitFamily::new((1..=r).flat_map(|i| {
            let g = &g;
            (i + 1..=r).map(move |j| {
                let (a, b) = leg_pair(g, i);
                let (c, d) = leg_pair(g, j);
                ElemSet::from_indices([a, b, c, d])
            })
        })),
        3 => CircuitFamily::new(phi3()),
        4 if r % 2 == 1 => CircuitFamily::new(phi3().map(|c| full.difference(c))),
        4 => {
            let (a, b) = leg_pair(&g, r - 1);
            let swap = ElemSet::from_indices([a, b]);
            CircuitFamily::new(phi3().map(|c| full.difference(c).symmetric_difference(swap)))
        }
        _ => return Err(Error::Unsupported("phi family index must be 1..=4")),
    };
    Ok(fam)
}

/// `φ_1 ∪ φ_2 ∪ φ_3 ∪ φ_4`.
pub fn phi_union(r: usize) -> Result<CircuitFamily> {
    (1..=4).try_fold(CircuitFamily::default(), |acc, k| {
        Ok(acc.union(&phi_family(r, k)?))
    })
}

/// `2^r + r(r+1)/2`.
pub fn circuit_count_formula(r: usize) -> u64 {
    (1u64 << r) + (r as u64) * (r as u64 + 1) / 2
}

fn validate_transversals(
    r: usize,
    tip: usize,
    legs: &[(usize, usize)],
    c3: &[ElemSet],
    g: &GroundSet,
) -> core::result::Result<(), String> {
    for &c in c3 {
        let is_transversal = !c.contains(tip)
            && c.len() == r
            && legs.iter().all(|&(a, b)| c.contains(a) != c.contains(b));
        if !is_transversal {
            return Err(format!("{:?} is not a leg-transversal", g.labels_of(c)));
        }
    }
    for (i, &a) in c3.iter().enumerate() {
        for &b in &c3[i + 1..] {
            if a.intersection(b).len() > r - 2 {
                return Err(format!(
                    "{:?} and {:?} share more than {} elements",
                    g.labels_of(a),
                    g.labels_of(b),
                    r - 2
                ));
            }
        }
    }
    Ok(())
}

/// Circuits of the spike with the given tip, legs and transversal family on
/// a ground of `2r + 1` elements.
pub(crate) fn spike_circuits(
    n: usize,
    tip: usize,
    legs: &[(usize, usize)],
    c3: &[ElemSet],
) -> CircuitFamily {
    let r = legs.len();
    let pairs: Vec<ElemSet> = legs
        .iter()
        .map(|&(a, b)| ElemSet::from_indices([a, b]))
        .collect();
    let mut small: Vec<ElemSet> = pairs.iter().map(|p| p.with(tip)).collect();
    for (i, &p) in pairs.iter().enumerate() {
        for &q in &pairs[i + 1..] {
            small.push(p.union(q));
        }
    }
    small.extend_from_slice(c3);
    let small = CircuitFamily::new(small);
    let c4 = k_subsets(n, r + 1).filter(|&s| !small.has_member_within(s));
    small.union(&CircuitFamily::new(c4))
}

/// The rank-`r` spike on `x1..xr, y1..yr, t` whose transversal circuits are
/// `c3`.
pub fn build_spike(r: usize, c3: &CircuitFamily) -> Result<Matroid> {
    check_rank(r)?;
    let g = GroundSet::spike(r);
    let legs: Vec<(usize, usize)> = (1..=r).map(|i| leg_pair(&g, i)).collect();
    validate_transversals(r, 2 * r, &legs, c3.as_slice(), &g).map_err(Error::InvalidC3)?;
    let m = Matroid::from_circuits(
        g.clone(),
        spike_circuits(g.len(), 2 * r, &legs, c3.as_slice()),
    )?;
    debug_assert_eq!(m.rank(), r);
    Ok(m)
}

/// The rank-`r` free spike.
pub fn free_spike(r: usize) -> Result<Matroid> {
    build_spike(r, &CircuitFamily::default())
}

/// Relaxes the circuit-hyperplane `c`: the bases of the result are the bases
/// of `m` together with `c`.
pub fn relax(m: &Matroid, c: ElemSet) -> Result<Matroid> {
    if !m.is_circuit_hyperplane(c) {
        return Err(Error::NotCircuitHyperplane);
    }
    let dep = m.dependence_table()?;
    let dependent = |s: u64| dep[s as usize] && !ElemSet(s).is_subset(c);
    let n = m.len();
    let circuits = CircuitFamily::new((1..1u64 << n).filter_map(|s| {
        (dependent(s) && ElemSet(s).iter().all(|e| !dependent(s & !(1 << e)))).then_some(ElemSet(s))
    }));
    Ok(Matroid::with_circuits_unchecked(
        m.ground().clone(),
        circuits,
    ))
}

pub fn relax_labels(m: &Matroid, c: &[Label]) -> Result<Matroid> {
    relax(m, m.ground().set_of(c)?)
}

/// Every (tip, legs) decomposition under which `m` is a spike; empty when it
/// is not one.
pub fn recognize_spike(m: &Matroid) -> Vec<SpikeDescriptor> {
    let n = m.len();
    if n < 7 || n.is_multiple_of(2) {
        return Vec::new();
    }
    let r = (n - 1) / 2;
    let g = m.ground();
    let full = g.full();
    let threes: Vec<ElemSet> = m.circuits().iter().filter(|c| c.len() == 3).collect();
    let mut out = Vec::new();
    for tip in 0..n {
        let mut legs: Vec<(usize, usize)> = threes
            .iter()
            .filter(|c| c.contains(tip))
            .map(|c| {
                let mut it = c.without(tip).iter();
                (it.next().unwrap(), it.next().unwrap())
            })
            .collect();
        if legs.len() != r {
            continue;
        }
        let covered = legs
            .iter()
            .try_fold(ElemSet::singleton(tip), |acc, &(a, b)| {
                let p = ElemSet::from_indices([a, b]);
                acc.is_disjoint(p).then(|| acc.union(p))
            });
        if covered != Some(full) {
            continue;
        }
        legs.sort();
        let c3: Vec<ElemSet> = m
            .circuits()
            .iter()
            .filter(|&c| {
                c.len() == r
                    && !c.contains(tip)
                    && legs.iter().all(|&(a, b)| c.contains(a) != c.contains(b))
            })
            .collect();
        if validate_transversals(r, tip, &legs, &c3, g).is_err() {
            continue;
        }
        if spike_circuits(n, tip, &legs, &c3) != *m.circuits() {
            continue;
        }
        out.push(SpikeDescriptor {
            rank: r,
            tip: g.label(tip).clone(),
            legs: legs
                .iter()
                .map(|&(a, b)| (g.label(a).clone(), g.label(b).clone()))
                .collect(),
            transversal_circuits: c3.iter().map(|&c| g.labels_of(c)).collect(),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{is_binary_by_symdiff, matroids_equal, verify_circuit_axioms};

    fn labels(g: &GroundSet, names: &[&str]) -> ElemSet {
        g.set_of(&names.iter().map(|&s| Label::from(s)).collect::<Vec<_>>())
            .unwrap()
    }

    #[test]
    fn spike_matrix_shape() {
        let a3 = binary_spike_matrix(3).unwrap();
        assert_eq!((a3.nrows(), a3.ncols()), (3, 7));
        assert_eq!(a3.to_bitstrings(), ["1000111", "0101011", "0011101"]);
        assert_eq!(a3.column(&Label::y(1)).unwrap().to_bitstring(), "011");
        assert_eq!(binary_spike_matrix(2), Err(Error::RankTooSmall(2)));
        for r in 3..=7 {
            assert_eq!(binary_spike_matrix(r).unwrap().rank(), r);
        }
    }

    #[test]
    fn phi_examples() {
        let g = GroundSet::spike(3);
        let phi1 = phi_family(3, 1).unwrap();
        assert_eq!(
            phi1,
            CircuitFamily::new([
                labels(&g, &["t", "x1", "y1"]),
                labels(&g, &["t", "x2", "y2"]),
                labels(&g, &["t", "x3", "y3"]),
            ])
        );
        assert_eq!(phi_family(4, 3).unwrap().len(), 8);
        assert!(phi_family(3, 4)
            .unwrap()
            .contains(labels(&g, &["x1", "y2", "y3", "t"])));
        assert!(phi_family(3, 5).is_err());
        assert!(phi_family(2, 1).is_err());
        for r in 3..=7 {
            assert_eq!(phi_family(r, 1).unwrap().len(), r);
            assert_eq!(phi_family(r, 2).unwrap().len(), r * (r - 1) / 2);
            assert_eq!(phi_family(r, 3).unwrap().len(), 1 << (r - 1));
            assert_eq!(phi_family(r, 4).unwrap().len(), 1 << (r - 1));
        }
    }

    #[test]
    fn phi_union_counts() {
        assert_eq!(phi_union(3).unwrap().len(), 14);
        assert_eq!(phi_union(4).unwrap().len(), 26);
        let p5 = phi_union(5).unwrap();
        assert_eq!(p5.len(), 47);
        assert_eq!(p5.count_of_size(4), 10);
    }

    #[test]
    fn count_formula() {
        assert_eq!(circuit_count_formula(3), 14);
        assert_eq!(circuit_count_formula(4), 26);
        assert_eq!(circuit_count_formula(5), 47);
        assert_eq!(binary_spike(5).unwrap().circuits().len(), 47);
    }

    #[test]
    fn build_spike_examples() {
        let free = free_spike(4).unwrap();
        assert_eq!(free.rank(), 4);
        assert!(verify_circuit_axioms(free.circuits(), free.ground()));

        let f7 = build_spike(3, &phi_family(3, 3).unwrap()).unwrap();
        assert!(matroids_equal(&f7, &binary_spike(3).unwrap()));

        let g = GroundSet::spike(4);
        let bad = CircuitFamily::new([
            labels(&g, &["x1", "x2", "x3", "x4"]),
            labels(&g, &["x1", "x2", "x3", "y4"]),
        ]);
        assert!(matches!(build_spike(4, &bad), Err(Error::InvalidC3(_))));
        let not_transversal = CircuitFamily::new([labels(&g, &["x1", "y1", "x3", "x4"])]);
        assert!(matches!(
            build_spike(4, &not_transversal),
            Err(Error::InvalidC3(_))
        ));
    }

    #[test]
    fn relax_examples() {
        let z3 = binary_spike(3).unwrap();
        let line = phi_family(3, 3).unwrap().as_slice()[0];
        let relaxed = relax(&z3, line).unwrap();
        assert!(!is_binary_by_symdiff(relaxed.circuits()));
        assert!(!matroids_equal(&z3, &relaxed));
        assert_eq!(relaxed.circuits().len(), 14 - 1 + 4);
        assert!(!recognize_spike(&relaxed).is_empty());

        // a 4-circuit of F_7 has rank 3, so it is not a hyperplane
        let four = z3.circuits().iter().find(|c| c.len() == 4).unwrap();
        assert_eq!(relax(&z3, four), Err(Error::NotCircuitHyperplane));

        let z4 = binary_spike(4).unwrap();
        let mut m = z4.clone();
        for c in phi_family(4, 3).unwrap().iter() {
            m = relax(&m, c).unwrap();
            assert!(!recognize_spike(&m).is_empty());
        }
        assert!(matroids_equal(&m, &free_spike(4).unwrap()));
    }

    #[test]
    fn recognize_examples() {
        assert_eq!(recognize_spike(&binary_spike(3).unwrap()).len(), 7);
        let z5 = recognize_spike(&binary_spike(5).unwrap());
        assert_eq!(z5.len(), 1);
        assert_eq!(z5[0].tip, Label::tip());
        assert_eq!(z5[0].transversal_circuits.len(), 16);

        let g = GroundSet::new((0..7).map(|i| Label::new(format!("e{i}")))).unwrap();
        let u24_padded = Matroid::from_circuits(
            g,
            CircuitFamily::new(k_subsets(4, 3).chain((4..7).map(ElemSet::singleton))),
        )
        .unwrap();
        assert!(recognize_spike(&u24_padded).is_empty());
        assert_eq!(recognize_spike(&free_spike(5).unwrap()).len(), 1);
    }

    #[test]
    fn split_spec_requires_e_in_x() {
        assert!(SplitSpec::new([Label::x(1)], Label::tip()).is_err());
        assert!(SplitSpec::new([Label::x(1), Label::tip()], Label::tip()).is_ok());
    }
}
