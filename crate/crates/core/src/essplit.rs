//! The es-splitting operation `M -> M^e_X`.
//!
//! For a binary matroid represented by `A`, `A^e_X` is `A` with one extra
//! row, the indicator of `X`, followed by two new columns: `alpha`, the unit
//! vector in the new row, and `gamma = col(e) + col(alpha)`. Since `e ∈ X`,
//! `gamma` is zero in the new row and agrees with `e` elsewhere.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gf2::{col_xor, BitVec, GF2Matrix};
use crate::label::Label;
use crate::matroid::{
    is_binary_by_symdiff, CircuitFamily, ElemSet, GroundSet, Matroid, Representation,
};
use crate::spike::{phi_family, SplitSpec};

/// Parity of `|C ∩ X|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CircuitClass {
    Ox,
    Ex,
}

pub fn classify_circuit(c: ElemSet, x: ElemSet) -> CircuitClass {
    if c.intersection(x).len() % 2 == 1 {
        CircuitClass::Ox
    } else {
        CircuitClass::Ex
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitResult {
    /// Ground set is the old one plus `alpha` and `gamma`.
    pub matroid: Matroid,
    /// `{e, alpha, gamma}`, as a set over `matroid.ground()`.
    pub lambda: ElemSet,
    pub provenance: SplitSpec,
}

impl SplitResult {
    pub fn lambda_labels(&self) -> Vec<Label> {
        self.matroid.ground().labels_of(self.lambda)
    }
}

fn resolve(ground: &GroundSet, spec: &SplitSpec) -> Result<(ElemSet, usize)> {
    if !spec.x.contains(&spec.e) {
        return Err(Error::ElementNotInX(spec.e.as_str().into()));
    }
    Ok((ground.set_of(&spec.x)?, ground.index(&spec.e)?))
}

/// `A^e_X` over the columns of `a` followed by `alpha`, `gamma`.
pub fn es_split_raw_matrix(a: &GF2Matrix, spec: &SplitSpec) -> Result<GF2Matrix> {
    if let Some(l) = a.labels().iter().find(|l| l.is_reserved()) {
        return Err(Error::ReservedLabel(l.as_str().into()));
    }
    if !spec.x.contains(&spec.e) {
        return Err(Error::ElementNotInX(spec.e.as_str().into()));
    }
    let mut row = BitVec::zeros(a.ncols());
    for l in &spec.x {
        let j = a
            .col_index(l)
            .ok_or_else(|| Error::UnknownLabel(l.as_str().into()))?;
        row.set(j, true);
    }
    let grown = a.add_row(&row)?;
    let alpha = BitVec::from_indices(grown.nrows(), [a.nrows()]);
    let e_col = grown.column(&spec.e)?;
    let gamma = col_xor(&e_col, &alpha)?;
    grown
        .push_column(Label::alpha(), &alpha)?
        .push_column(Label::gamma(), &gamma)
}

/// Matrix-level es-splitting; the circuits of the result are recomputed
/// from the new matrix.
pub fn es_split_matrix(a: &GF2Matrix, spec: &SplitSpec) -> Result<SplitResult> {
    let matroid = Matroid::from_matrix(&es_split_raw_matrix(a, spec)?)?;
    let g = matroid.ground();
    let lambda = g.set_of(&[spec.e.clone(), Label::alpha(), Label::gamma()])?;
    Ok(SplitResult {
        matroid,
        lambda,
        provenance: spec.clone(),
    })
}

/// How the circuit-level families are assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SplitRule {
    /// `C_0 ∪ .. ∪ C_5 ∪ Λ`, then keep only inclusion-minimal members.
    #[default]
    Minimal,
    /// The union taken literally; `C_5` is minimized on its own. Not always
    /// an antichain.
    Literal,
    /// As `Literal`, but a `C_5` candidate is dropped when it contains a
    /// member of `C_0..C_4 ∪ Λ`, and minimality of `C_5` is taken after that.
    FilteredC5,
    /// `Minimal` plus the sets `(C_e - e) ∪ C_o ∪ {gamma}` for an
    /// EX-circuit `C_e ∋ e` and a disjoint OX-circuit `C_o`. This agrees
    /// with the matrix construction on general binary matroids, where
    /// `Minimal` alone can miss circuits.
    Completed,
}

/// The families `C_0..C_5` and `Λ`, over the ground with `alpha` and
/// `gamma` appended.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SplitFamilies {
    pub lambda: ElemSet,
    pub c: [CircuitFamily; 6],
    /// Unions of two disjoint OX-circuits, before any minimization.
    pub c5_candidates: CircuitFamily,
    /// Members of the completion family; empty unless requested.
    pub extra: CircuitFamily,
}

impl SplitFamilies {
    pub fn assemble(&self, rule: SplitRule) -> CircuitFamily {
        let all = self.c.iter().flat_map(|f| f.iter()).chain([self.lambda]);
        match rule {
            SplitRule::Literal => CircuitFamily::new(all),
            SplitRule::FilteredC5 => {
                let base = CircuitFamily::new(
                    self.c[..5]
                        .iter()
                        .flat_map(|f| f.iter())
                        .chain([self.lambda]),
                );
                let c5 = CircuitFamily::minimal(
                    self.c5_candidates
                        .iter()
                        .filter(|&s| !base.has_member_within(s)),
                );
                base.union(&c5)
            }
            SplitRule::Minimal => CircuitFamily::minimal(all),
            SplitRule::Completed => CircuitFamily::minimal(all.chain(self.extra.iter())),
        }
    }
}

/// Circuit-level families for `M^e_X` from the circuits of `M`.
pub fn split_families(
    ground: &GroundSet,
    circuits: &CircuitFamily,
    spec: &SplitSpec,
    with_completion: bool,
) -> Result<(GroundSet, SplitFamilies)> {
    let (x, e) = resolve(ground, spec)?;
    let split = ground.with_split_labels()?;
    let alpha = split.index(&Label::alpha())?;
    let gamma = split.index(&Label::gamma())?;
    let (ox, ex): (Vec<ElemSet>, Vec<ElemSet>) = circuits
        .iter()
        .partition(|&c| classify_circuit(c, x) == CircuitClass::Ox);

    let c0 = CircuitFamily::new(ex.iter().copied());
    let c1 = CircuitFamily::new(ox.iter().map(|c| c.with(alpha)));
    let c2 = CircuitFamily::new(
        ox.iter()
            .filter(|c| !c.contains(e))
            .map(|c| c.with(e).with(gamma)),
    );
    let c3 = CircuitFamily::new(
        ox.iter()
            .filter(|c| c.contains(e))
            .map(|c| c.without(e).with(gamma)),
    );
    let c4 = CircuitFamily::new(
        ex.iter()
            .filter(|c| c.contains(e))
            .map(|c| c.without(e).with(alpha).with(gamma)),
    );
    let mut pairs = Vec::new();
    for (i, &a) in ox.iter().enumerate() {
        for &b in &ox[i + 1..] {
            if a.is_disjoint(b) {
                pairs.push(a.union(b));
            }
        }
    }
    let c5_candidates = CircuitFamily::new(pairs);
    let c5 = CircuitFamily::minimal(c5_candidates.iter());
    let extra = if with_completion {
        CircuitFamily::new(ex.iter().filter(|c| c.contains(e)).flat_map(|&ce| {
            ox.iter()
                .filter(move |co| co.is_disjoint(ce))
                .map(move |&co| ce.without(e).union(co).with(gamma))
        }))
    } else {
        CircuitFamily::default()
    };
    let lambda = ElemSet::from_indices([e, alpha, gamma]);
    Ok((
        split,
        SplitFamilies {
            lambda,
            c: [c0, c1, c2, c3, c4, c5],
            c5_candidates,
            extra,
        },
    ))
}

/// Circuit-level es-splitting of a binary matroid given by its circuits.
pub fn es_split_circuits(
    ground: &GroundSet,
    circuits: &CircuitFamily,
    spec: &SplitSpec,
    rule: SplitRule,
) -> Result<(GroundSet, CircuitFamily)> {
    if !is_binary_by_symdiff(circuits) {
        return Err(Error::NotBinary);
    }
    let (split, fams) = split_families(ground, circuits, spec, rule == SplitRule::Completed)?;
    Ok((split, fams.assemble(rule)))
}

/// Splits `m` by its matrix when it has one, otherwise by the circuit rule
/// (which needs `m` binary).
pub fn es_split(m: &Matroid, spec: &SplitSpec, rule: SplitRule) -> Result<SplitResult> {
    match m.representation() {
        Representation::Vector(a) => es_split_matrix(a, spec),
        Representation::Circuits => {
            let (ground, circuits) = es_split_circuits(m.ground(), m.circuits(), spec, rule)?;
            let lambda = ground.set_of(&[spec.e.clone(), Label::alpha(), Label::gamma()])?;
            Ok(SplitResult {
                matroid: Matroid::from_circuits(ground, circuits)?,
                lambda,
                provenance: spec.clone(),
            })
        }
    }
}

/// Which relabeling turns a good split of `Z_r` into `Z_{r+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SpikeVariant {
    /// `r` even, `X ∈ φ_4`: `alpha -> x_{r+1}`, `gamma -> y_{r+1}`.
    Even,
    /// `r` odd, `X = C ∪ t` with `C ∈ φ_3`: same relabeling as `Even`.
    OddPhi3,
    /// `r` odd, `X = E`: `alpha -> x_{r+1}`, `t -> y_{r+1}`, `gamma -> t`.
    OddWholeGround,
}

impl SpikeVariant {
    fn check_parity(self, r: usize) -> Result<()> {
        let odd = !matches!(self, SpikeVariant::Even);
        if (r % 2 == 1) != odd {
            return Err(Error::ParityMismatch { rank: r });
        }
        Ok(())
    }

    /// Parity picks between `Even` and the odd variants; for odd `r`,
    /// `X = E` selects `OddWholeGround`.
    pub fn choose(r: usize, x_is_whole_ground: bool) -> SpikeVariant {
        match (r.is_multiple_of(2), x_is_whole_ground) {
            (true, _) => SpikeVariant::Even,
            (false, true) => SpikeVariant::OddWholeGround,
            (false, false) => SpikeVariant::OddPhi3,
        }
    }

    pub fn relabeling(self, r: usize) -> BTreeMap<Label, Label> {
        let mut map = BTreeMap::new();
        map.insert(Label::alpha(), Label::x(r + 1));
        match self {
            SpikeVariant::Even | SpikeVariant::OddPhi3 => {
                map.insert(Label::gamma(), Label::y(r + 1));
            }
            SpikeVariant::OddWholeGround => {
                map.insert(Label::tip(), Label::y(r + 1));
                map.insert(Label::gamma(), Label::tip());
            }
        }
        map
    }
}

/// The families `ψ_1..ψ_4` describing `Z_{r+1}` inside a split of `Z_r`,
/// over `x1..xr, y1..yr, t, alpha, gamma`.
pub fn psi_family(r: usize, variant: SpikeVariant, k: usize) -> Result<CircuitFamily> {
    variant.check_parity(r)?;
    let g = GroundSet::spike(r).with_split_labels()?;
    let t = g.index(&Label::tip())?;
    let alpha = g.index(&Label::alpha())?;
    let gamma = g.index(&Label::gamma())?;
    let legs = phi_family(r, 1)?;
    let lambda = ElemSet::from_indices([t, alpha, gamma]);
    let fam = match (variant, k) {
        (SpikeVariant::OddWholeGround, 1) => legs
            .map(|l| l.without(t).with(gamma))
            .union(&CircuitFamily::new([lambda])),
        (SpikeVariant::OddWholeGround, 2) => phi_family(r, 2)?.union(&legs.map(|l| l.with(alpha))),
        (SpikeVariant::OddWholeGround, 3) => phi_family(r, 3)?
            .map(|c| c.with(alpha))
            .union(&phi_family(r, 4)?),
        (SpikeVariant::OddWholeGround, 4) => phi_family(r, 3)?
            .map(|c| c.with(t).with(gamma))
            .union(&phi_family(r, 4)?.map(|c| c.without(t).with(alpha).with(gamma))),
        (_, 1) => legs.union(&CircuitFamily::new([lambda])),
        (_, 2) => phi_family(r, 2)?.union(&legs.map(|l| l.without(t).with(alpha).with(gamma))),
        (_, 3) => phi_family(r, 3)?
            .map(|c| c.with(alpha))
            .union(&phi_family(r, 4)?.map(|c| c.without(t).with(gamma))),
        (_, 4) => phi_family(r, 3)?
            .map(|c| c.with(t).with(gamma))
            .union(&phi_family(r, 4)?.map(|c| c.with(alpha))),
        _ => return Err(Error::Unsupported("psi family index must be 1..=4")),
    };
    Ok(fam)
}

pub fn psi_union(r: usize, variant: SpikeVariant) -> Result<CircuitFamily> {
    (1..=4).try_fold(CircuitFamily::default(), |acc, k| {
        Ok(acc.union(&psi_family(r, variant, k)?))
    })
}

/// Renames `alpha`, `gamma` (and `t` for [`SpikeVariant::OddWholeGround`])
/// so a split of `Z_r` can be compared label-for-label with `Z_{r+1}`.
pub fn relabel_to_spike(m: &Matroid, variant: SpikeVariant) -> Result<Matroid> {
    let n = m.len();
    if n < 9 || n.is_multiple_of(2) {
        return Err(Error::Unsupported("expected the ground of a split spike"));
    }
    let r = (n - 3) / 2;
    variant.check_parity(r)?;
    if *m.ground() != GroundSet::spike(r).with_split_labels()? {
        return Err(Error::Unsupported("expected the ground of a split spike"));
    }
    m.relabeled(&variant.relabeling(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{cocircuits, matroids_equal};
    use crate::spike::{binary_spike, binary_spike_matrix, circuit_count_formula};

    fn spec(names: &[&str], e: &str) -> SplitSpec {
        SplitSpec::new(names.iter().map(|&s| Label::from(s)), Label::from(e)).unwrap()
    }

    fn whole(r: usize) -> Vec<Label> {
        GroundSet::spike(r).labels().to_vec()
    }

    #[test]
    fn classify_examples() {
        let g = GroundSet::spike(3);
        let leg = g.set_of(&[Label::tip(), Label::x(1), Label::y(1)]).unwrap();
        let pair = g
            .set_of(&[Label::x(1), Label::y(1), Label::x(2), Label::y(2)])
            .unwrap();
        assert_eq!(classify_circuit(leg, g.full()), CircuitClass::Ox);
        assert_eq!(classify_circuit(pair, g.full()), CircuitClass::Ex);
    }

    #[test]
    fn matrix_split_of_f7() {
        let a3 = binary_spike_matrix(3).unwrap();
        let s = SplitSpec::new(whole(3), Label::tip()).unwrap();
        let raw = es_split_raw_matrix(&a3, &s).unwrap();
        assert_eq!((raw.nrows(), raw.ncols()), (4, 9));
        assert_eq!(raw.to_bitstrings()[3], "111111110");
        let res = es_split_matrix(&a3, &s).unwrap();
        assert!(res.matroid.circuits().contains(res.lambda));
        assert_eq!(
            res.lambda_labels(),
            [Label::tip(), Label::alpha(), Label::gamma()]
        );
        assert_eq!(res.matroid.rank(), 4);
    }

    #[test]
    fn matrix_split_errors() {
        let a3 = binary_spike_matrix(3).unwrap();
        let bad = SplitSpec {
            x: [Label::x(1)].into(),
            e: Label::tip(),
        };
        assert!(matches!(
            es_split_matrix(&a3, &bad),
            Err(Error::ElementNotInX(_))
        ));
        assert!(matches!(
            es_split_matrix(&a3, &spec(&["q"], "q")),
            Err(Error::UnknownLabel(_))
        ));
        let once = es_split_raw_matrix(&a3, &spec(&["t"], "t")).unwrap();
        assert!(matches!(
            es_split_matrix(&once, &spec(&["t"], "t")),
            Err(Error::ReservedLabel(_))
        ));
    }

    #[test]
    fn single_tip_split_has_two_cocircuit() {
        let a4 = binary_spike_matrix(4).unwrap();
        let res = es_split_matrix(&a4, &spec(&["t"], "t")).unwrap();
        let g = res.matroid.ground();
        let ta = g.set_of(&[Label::tip(), Label::alpha()]).unwrap();
        assert!(cocircuits(&res.matroid).unwrap().contains(ta));
        assert!(!res.matroid.is_3connected().unwrap());
    }

    #[test]
    fn circuit_rule_matches_matrix_on_z3() {
        let z3 = binary_spike(3).unwrap();
        let a3 = binary_spike_matrix(3).unwrap();
        let g = z3.ground();
        let (mut literal_differs, mut filtered_differs) = (0, 0);
        for xm in 1u64..1 << 7 {
            for e in ElemSet(xm).iter() {
                let s = SplitSpec::from_set(g, ElemSet(xm), e).unwrap();
                let truth = es_split_matrix(&a3, &s).unwrap();
                let (_, got) = es_split_circuits(g, z3.circuits(), &s, SplitRule::Minimal).unwrap();
                assert_eq!(&got, truth.matroid.circuits(), "{s:?}");
                for (rule, count) in [
                    (SplitRule::Literal, &mut literal_differs),
                    (SplitRule::FilteredC5, &mut filtered_differs),
                ] {
                    let (_, other) = es_split_circuits(g, z3.circuits(), &s, rule).unwrap();
                    *count += usize::from(&other != truth.matroid.circuits());
                }
            }
        }
        assert_eq!((literal_differs, filtered_differs), (364, 336));
    }

    #[test]
    fn completion_fixes_parallel_pairs() {
        // {e,a} and {b,c} parallel classes
        let labels: Vec<Label> = ["a", "b", "c", "e"]
            .iter()
            .map(|&s| Label::from(s))
            .collect();
        let a = GF2Matrix::from_bitstrings(&["1001", "0110"], labels).unwrap();
        let m = Matroid::from_matrix(&a).unwrap();
        let s = spec(&["e", "a", "b"], "e");
        let truth = es_split_matrix(&a, &s).unwrap();
        let (g, minimal) =
            es_split_circuits(m.ground(), m.circuits(), &s, SplitRule::Minimal).unwrap();
        let (_, completed) =
            es_split_circuits(m.ground(), m.circuits(), &s, SplitRule::Completed).unwrap();
        let missing = g
            .set_of(&[
                Label::from("a"),
                Label::from("b"),
                Label::from("c"),
                Label::gamma(),
            ])
            .unwrap();
        assert!(truth.matroid.circuits().contains(missing));
        assert!(!minimal.contains(missing));
        assert_eq!(&completed, truth.matroid.circuits());
    }

    #[test]
    fn legs_even_in_x_survive() {
        let z4 = binary_spike(4).unwrap();
        let s = spec(&["x1", "y1", "x2"], "x1");
        let (g, c) = es_split_circuits(z4.ground(), z4.circuits(), &s, SplitRule::Minimal).unwrap();
        let leg = g.set_of(&[Label::tip(), Label::x(1), Label::y(1)]).unwrap();
        assert!(c.contains(leg));
    }

    #[test]
    fn non_binary_input_rejected() {
        let g = GroundSet::new(["a", "b", "c", "d"].map(Label::from)).unwrap();
        let u24 = CircuitFamily::new(crate::matroid::k_subsets(4, 3));
        assert_eq!(
            es_split_circuits(&g, &u24, &spec(&["a"], "a"), SplitRule::Minimal),
            Err(Error::NotBinary)
        );
    }

    #[test]
    fn whole_ground_split_has_no_c5() {
        let z5 = binary_spike(5).unwrap();
        let s = SplitSpec::new(whole(5), Label::tip()).unwrap();
        let (_, fams) = split_families(z5.ground(), z5.circuits(), &s, false).unwrap();
        let assembled = fams.assemble(SplitRule::Minimal);
        assert!(fams.c[5].iter().all(|c| !assembled.contains(c)));
    }

    #[test]
    fn psi_examples() {
        let g = GroundSet::spike(4).with_split_labels().unwrap();
        let lambda = g
            .set_of(&[Label::tip(), Label::alpha(), Label::gamma()])
            .unwrap();
        let p1 = psi_family(4, SpikeVariant::Even, 1).unwrap();
        assert_eq!(
            p1,
            phi_family(4, 1)
                .unwrap()
                .union(&CircuitFamily::new([lambda]))
        );
        let g5 = GroundSet::spike(5).with_split_labels().unwrap();
        let p1 = psi_family(5, SpikeVariant::OddWholeGround, 1).unwrap();
        let leg = g5
            .set_of(&[Label::x(2), Label::y(2), Label::gamma()])
            .unwrap();
        assert!(p1.contains(leg));
        assert_eq!(p1.len(), 6);
        assert_eq!(
            psi_family(4, SpikeVariant::OddPhi3, 1),
            Err(Error::ParityMismatch { rank: 4 })
        );
        for (r, v) in [
            (4, SpikeVariant::Even),
            (5, SpikeVariant::OddPhi3),
            (5, SpikeVariant::OddWholeGround),
            (3, SpikeVariant::OddWholeGround),
        ] {
            assert_eq!(
                psi_union(r, v).unwrap().len() as u64,
                circuit_count_formula(r + 1)
            );
        }
    }

    #[test]
    fn relabeled_splits_are_the_next_spike() {
        let a4 = binary_spike_matrix(4).unwrap();
        let z5 = binary_spike(5).unwrap();
        let g4 = GroundSet::spike(4);
        for c in phi_family(4, 4).unwrap().iter() {
            let s = SplitSpec::from_set(&g4, c, 2 * 4).unwrap();
            let res = es_split_matrix(&a4, &s).unwrap();
            let relabeled = relabel_to_spike(&res.matroid, SpikeVariant::Even).unwrap();
            assert!(matroids_equal(&relabeled, &z5), "{s:?}");
        }
        let a5 = binary_spike_matrix(5).unwrap();
        let res = es_split_matrix(&a5, &SplitSpec::new(whole(5), Label::tip()).unwrap()).unwrap();
        assert_eq!(
            *res.matroid.circuits(),
            psi_union(5, SpikeVariant::OddWholeGround).unwrap()
        );
        let z6 = binary_spike(6).unwrap();
        let relabeled = relabel_to_spike(&res.matroid, SpikeVariant::OddWholeGround).unwrap();
        assert!(matroids_equal(&relabeled, &z6));
        assert_eq!(
            relabel_to_spike(&res.matroid, SpikeVariant::Even),
            Err(Error::ParityMismatch { rank: 5 })
        );
    }
}
