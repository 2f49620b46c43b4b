//! Exhaustive and sampled checks of the spike and es-splitting claims.
//!
//! Every check produces a [`ClaimReport`]. Reports are deterministic for a
//! given configuration: cases are enumerated in a fixed order, parallel
//! results are collected in that order, and wall-clock times are only
//! recorded on request.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use spikes_core::essplit::{
    es_split_circuits, es_split_matrix, psi_union, relabel_to_spike, split_families, SpikeVariant,
    SplitRule,
};
use spikes_core::matroid::{
    cocircuits, is_binary_by_symdiff, matroids_equal, spike_isomorphic, CircuitFamily, ElemSet,
    GroundSet, Matroid,
};
use spikes_core::spike::{
    binary_spike, binary_spike_matrix, circuit_count_formula, free_spike, phi_family, phi_union,
    recognize_spike, relax, SpikeDescriptor, SplitSpec,
};
use spikes_core::{BitVec, Error, GF2Matrix, Label};

/// Witness lists are truncated to this many entries; the full count is kept
/// in the report's counts.
pub const MAX_WITNESSES: usize = 20;

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_SAMPLES: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub claim_id: String,
    pub rank: usize,
    pub universe_size: u64,
    pub verdict: Verdict,
    pub witnesses: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub counts: BTreeMap<String, u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl ClaimReport {
    fn new(claim: Claim, rank: usize) -> Self {
        ClaimReport {
            claim_id: claim.id().to_string(),
            rank,
            universe_size: 0,
            verdict: Verdict::Pass,
            witnesses: Vec::new(),
            counts: BTreeMap::new(),
            seed: None,
            elapsed_ms: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    fn count(&mut self, key: &str, n: usize) {
        self.counts.insert(key.to_string(), n as u64);
    }

    /// Records a failure witness.
    fn fail(&mut self, witness: String) {
        self.verdict = Verdict::Fail;
        self.note(witness);
    }

    /// Records a witness without changing the verdict.
    fn note(&mut self, witness: String) {
        let key = "witnesses_total".to_string();
        *self.counts.entry(key).or_insert(0) += 1;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(witness);
        }
    }

    fn errored(claim: Claim, rank: usize, err: Error) -> Self {
        let mut r = ClaimReport::new(claim, rank);
        r.fail(format!("error: {err}"));
        r
    }
}

/// One family of checks. `id()` is the `claim_id` used in reports and on the
/// command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Claim {
    /// Circuits of `M[A_r]` are `φ_1 ∪ .. ∪ φ_4`.
    SpikeCircuits,
    /// Circuit-level splitting agrees with the matrix construction.
    SplitCircuitRule,
    /// 3-connectivity survives a split with an OX-circuit avoiding `e`.
    SplitConnectivity,
    /// No good split with `t ∉ X`.
    TipOutsideX,
    /// No good split with `e ≠ t`.
    ElementNotTip,
    /// No good split when some `φ_3` member meets `X` evenly.
    EvenTransversal,
    /// No good split with a whole leg pair in `X`, except `X = E` for odd `r`.
    WholeLegPair,
    /// No good split with `|X| ≤ r`.
    SmallX,
    /// No good split with `|X ∩ {x_i}|` odd.
    OddXSide,
    /// Good splits of `Z_r`, `r` even, are exactly `(C, t)`, `C ∈ φ_4`.
    EvenRankSplits,
    /// Good splits of `Z_r`, `r` odd, are `(C ∪ t, t)`, `C ∈ φ_3`, and `(E, t)`.
    OddRankSplits,
    /// Good splits of the Fano matroid, counted as `(X, e)` pairs.
    FanoSplits,
    /// Relaxing every `φ_3` member walks from `Z_r` to the free spike.
    RelaxationChain,
    /// Intersection parities inside `φ_3` and inside `φ_4`.
    PhiParity,
}

impl Claim {
    pub const ALL: [Claim; 14] = [
        Claim::SpikeCircuits,
        Claim::SplitCircuitRule,
        Claim::SplitConnectivity,
        Claim::TipOutsideX,
        Claim::ElementNotTip,
        Claim::EvenTransversal,
        Claim::WholeLegPair,
        Claim::SmallX,
        Claim::OddXSide,
        Claim::EvenRankSplits,
        Claim::OddRankSplits,
        Claim::FanoSplits,
        Claim::RelaxationChain,
        Claim::PhiParity,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Claim::SpikeCircuits => "spike-circuits",
            Claim::SplitCircuitRule => "split-circuit-rule",
            Claim::SplitConnectivity => "split-connectivity",
            Claim::TipOutsideX => "lemma-tip-outside-x",
            Claim::ElementNotTip => "lemma-e-not-tip",
            Claim::EvenTransversal => "lemma-even-transversal",
            Claim::WholeLegPair => "lemma-whole-leg-pair",
            Claim::SmallX => "lemma-small-x",
            Claim::OddXSide => "lemma-odd-x-side",
            Claim::EvenRankSplits => "even-rank-splits",
            Claim::OddRankSplits => "odd-rank-splits",
            Claim::FanoSplits => "fano-splits",
            Claim::RelaxationChain => "relaxation-chain",
            Claim::PhiParity => "phi-parity",
        }
    }

    /// Ranks checked when the suite is capped at `max_rank`.
    pub fn ranks(self, max_rank: usize) -> Vec<usize> {
        let within = |rs: &[usize]| rs.iter().copied().filter(|&r| r <= max_rank).collect();
        match self {
            Claim::SpikeCircuits | Claim::PhiParity => (3..=max_rank).collect(),
            Claim::SplitCircuitRule | Claim::SplitConnectivity | Claim::RelaxationChain => {
                within(&[3, 4])
            }
            Claim::TipOutsideX
            | Claim::ElementNotTip
            | Claim::EvenTransversal
            | Claim::WholeLegPair
            | Claim::OddXSide => within(&[4, 5]),
            Claim::SmallX => within(&[3, 4, 5]),
            Claim::EvenRankSplits => within(&[4]),
            Claim::OddRankSplits => within(&[5]),
            Claim::FanoSplits => within(&[3]),
        }
    }

    fn needs_census(self) -> bool {
        !matches!(
            self,
            Claim::SpikeCircuits
                | Claim::PhiParity
                | Claim::SplitCircuitRule
                | Claim::SplitConnectivity
                | Claim::RelaxationChain
        )
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Claim {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Claim::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

/// Parses `all` or a comma-separated list of claim ids.
pub fn parse_suites(s: &str) -> Result<Vec<Claim>, String> {
    if s == "all" {
        return Ok(Claim::ALL.to_vec());
    }
    let mut out: Vec<Claim> = s
        .split(',')
        .map(|p| p.trim().parse())
        .collect::<Result<_, _>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub suites: Vec<Claim>,
    pub max_rank: usize,
    pub jobs: usize,
    pub seed: u64,
    pub samples: usize,
    pub timings: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            suites: Claim::ALL.to_vec(),
            max_rank: 5,
            jobs: 1,
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
            timings: false,
        }
    }
}

fn fmt_set(g: &GroundSet, s: ElemSet) -> String {
    let names: Vec<String> = g
        .labels_of(s)
        .iter()
        .map(|l| l.as_str().to_string())
        .collect();
    format!("{{{}}}", names.join(","))
}

fn fmt_case(g: &GroundSet, x: ElemSet, e: usize) -> String {
    format!("X={} e={}", fmt_set(g, x), g.label(e))
}

/// One `(X, e)` split of `Z_r` and whether it is `Z_{r+1}` up to isomorphism.
#[derive(Debug, Clone)]
pub struct SplitCase {
    pub x: ElemSet,
    pub e: usize,
    /// Tip of the split, by label, when it is isomorphic to `Z_{r+1}`.
    pub good_tip: Option<Label>,
}

/// Every `(X, e)` split of `Z_r`, classified.
#[derive(Debug, Clone)]
pub struct Census {
    pub rank: usize,
    pub ground: GroundSet,
    pub cases: Vec<SplitCase>,
}

impl Census {
    pub fn good(&self) -> impl Iterator<Item = &SplitCase> {
        self.cases.iter().filter(|c| c.good_tip.is_some())
    }

    pub fn good_pairs(&self) -> BTreeSet<(u64, usize)> {
        self.good().map(|c| (c.x.bits(), c.e)).collect()
    }
}

/// Returns the tip of `m` if it is isomorphic to `target`.
pub fn isomorphic_spike_tip(
    m: &Matroid,
    target: &Matroid,
    target_desc: &SpikeDescriptor,
) -> Option<Label> {
    if m.circuits().len() != target.circuits().len()
        || m.circuits().size_histogram() != target.circuits().size_histogram()
    {
        return None;
    }
    recognize_spike(m)
        .into_iter()
        .find(|d| spike_isomorphic(m, target, d, target_desc).is_some())
        .map(|d| d.tip)
}

/// Splits `Z_r` at every `(X, e)` and tests each result against `Z_{r+1}`.
pub fn census(r: usize) -> spikes_core::Result<Census> {
    let a = binary_spike_matrix(r)?;
    let ground = GroundSet::spike(r);
    let target = binary_spike(r + 1)?;
    let target_desc = recognize_spike(&target)
        .into_iter()
        .next()
        .ok_or(Error::Unsupported("target is not a spike"))?;
    let n = ground.len();
    let per_x: Vec<spikes_core::Result<Vec<SplitCase>>> = (1u64..1 << n)
        .into_par_iter()
        .map(|xm| {
            let x = ElemSet(xm);
            x.iter()
                .map(|e| {
                    let spec = SplitSpec::from_set(&ground, x, e)?;
                    let res = es_split_matrix(&a, &spec)?;
                    Ok(SplitCase {
                        x,
                        e,
                        good_tip: isomorphic_spike_tip(&res.matroid, &target, &target_desc),
                    })
                })
                .collect()
        })
        .collect();
    let mut cases = Vec::new();
    for v in per_x {
        cases.extend(v?);
    }
    Ok(Census {
        rank: r,
        ground,
        cases,
    })
}

/// The circuits of `M[A_r]` against the `φ` families.
pub fn check_spike_circuits(r: usize) -> spikes_core::Result<ClaimReport> {
    let mut rep = ClaimReport::new(Claim::SpikeCircuits, r);
    let z = binary_spike(r)?;
    let phi = phi_union(r)?;
    let g = z.ground();
    rep.universe_size = z.circuits().len() as u64;
    rep.count("circuits", z.circuits().len());
    for k in 1..=4 {
        rep.count(&format!("phi{k}"), phi_family(r, k)?.len());
    }
    let expected_sizes = [r, r * (r - 1) / 2, 1 << (r - 1), 1 << (r - 1)];
    for (k, &want) in expected_sizes.iter().enumerate() {
        let got = phi_family(r, k + 1)?.len();
        if got != want {
            rep.fail(format!("|phi{}| = {got}, expected {want}", k + 1));
        }
    }
    for c in z.circuits().iter().filter(|&c| !phi.contains(c)) {
        rep.fail(format!("circuit {} is in no phi family", fmt_set(g, c)));
    }
    for c in phi.iter().filter(|&c| !z.circuits().contains(c)) {
        rep.fail(format!("phi member {} is not a circuit", fmt_set(g, c)));
    }
    if z.circuits().len() as u64 != circuit_count_formula(r) {
        rep.fail(format!(
            "{} circuits, formula gives {}",
            z.circuits().len(),
            circuit_count_formula(r)
        ));
    }
    if z.rank() != r {
        rep.fail(format!("rank {} != {r}", z.rank()));
    }
    if !is_binary_by_symdiff(z.circuits()) {
        rep.fail("symmetric-difference test fails".into());
    }
    Ok(rep)
}

/// The circuit-level rule used as the split oracle. Swappable so the
/// harness itself can be tested against a broken rule.
pub type CircuitRuleFn =
    dyn Fn(&GroundSet, &CircuitFamily, &SplitSpec) -> spikes_core::Result<CircuitFamily> + Sync;

pub fn default_circuit_rule(
    g: &GroundSet,
    c: &CircuitFamily,
    spec: &SplitSpec,
) -> spikes_core::Result<CircuitFamily> {
    Ok(es_split_circuits(g, c, spec, SplitRule::Minimal)?.1)
}

#[derive(Default)]
struct RuleTally {
    disagree: usize,
    literal: usize,
    filtered: usize,
    completed: usize,
    witnesses: Vec<String>,
}

fn compare_rules(
    a: &GF2Matrix,
    m: &Matroid,
    spec: &SplitSpec,
    rule: &CircuitRuleFn,
) -> spikes_core::Result<RuleTally> {
    let truth = es_split_matrix(a, spec)?;
    let want = truth.matroid.circuits();
    let got = rule(m.ground(), m.circuits(), spec)?;
    let (_, fams) = split_families(m.ground(), m.circuits(), spec, true)?;
    let mut t = RuleTally {
        literal: usize::from(fams.assemble(SplitRule::Literal) != *want),
        filtered: usize::from(fams.assemble(SplitRule::FilteredC5) != *want),
        completed: usize::from(fams.assemble(SplitRule::Completed) != *want),
        ..RuleTally::default()
    };
    if got != *want {
        t.disagree = 1;
        let g = truth.matroid.ground();
        let missing: Vec<String> = want
            .iter()
            .filter(|&c| !got.contains(c))
            .map(|c| fmt_set(g, c))
            .collect();
        let extra: Vec<String> = got
            .iter()
            .filter(|&c| !want.contains(c))
            .map(|c| fmt_set(g, c))
            .collect();
        t.witnesses.push(format!(
            "{}: missing [{}] extra [{}]",
            fmt_case(
                m.ground(),
                m.ground().set_of(&spec.x)?,
                m.ground().index(&spec.e)?
            ),
            missing.join(" "),
            extra.join(" ")
        ));
    }
    Ok(t)
}

fn fold_tallies(rep: &mut ClaimReport, tallies: Vec<RuleTally>) {
    let mut total = RuleTally::default();
    for t in tallies {
        total.disagree += t.disagree;
        total.literal += t.literal;
        total.filtered += t.filtered;
        total.completed += t.completed;
        for w in t.witnesses {
            rep.fail(w);
        }
    }
    rep.count("disagreements", total.disagree);
    rep.count("disagreements_literal_union", total.literal);
    rep.count("disagreements_filtered_c5", total.filtered);
    rep.count("disagreements_completed", total.completed);
}

/// Exhaustive agreement over every `(X, e)` on `Z_r`.
pub fn check_split_rule_exhaustive(
    r: usize,
    rule: &CircuitRuleFn,
) -> spikes_core::Result<ClaimReport> {
    let mut rep = ClaimReport::new(Claim::SplitCircuitRule, r);
    let a = binary_spike_matrix(r)?;
    let m = Matroid::from_matrix(&a)?;
    let n = m.len();
    let tallies: Vec<spikes_core::Result<Vec<RuleTally>>> = (1u64..1 << n)
        .into_par_iter()
        .map(|xm| {
            ElemSet(xm)
                .iter()
                .map(|e| {
                    compare_rules(
                        &a,
                        &m,
                        &SplitSpec::from_set(m.ground(), ElemSet(xm), e)?,
                        rule,
                    )
                })
                .collect()
        })
        .collect();
    let mut flat = Vec::new();
    for t in tallies {
        flat.extend(t?);
    }
    rep.universe_size = flat.len() as u64;
    fold_tallies(&mut rep, flat);
    Ok(rep)
}

/// Agreement on `samples` random `rows x cols` matrices, each with one
/// random `(X, e)`. Reported under rank `rows`.
pub fn check_split_rule_sampled(
    seed: u64,
    samples: usize,
    rows: usize,
    cols: usize,
    rule: &CircuitRuleFn,
) -> spikes_core::Result<ClaimReport> {
    let mut rep = ClaimReport::new(Claim::SplitCircuitRule, rows);
    rep.seed = Some(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels: Vec<Label> = (1..=cols).map(|i| Label::new(format!("e{i}"))).collect();
    let mut cases = Vec::with_capacity(samples);
    for _ in 0..samples {
        let matrix_rows: Vec<BitVec> = (0..rows)
            .map(|_| BitVec::from_mask(cols, rng.gen::<u64>() & ((1 << cols) - 1)))
            .collect();
        let a = GF2Matrix::new(matrix_rows, labels.clone())?;
        let x = ElemSet(rng.gen_range(1u64..1 << cols));
        let members: Vec<usize> = x.iter().collect();
        let e = *members.choose(&mut rng).expect("nonempty");
        cases.push((a, x, e));
    }
    let tallies: Vec<spikes_core::Result<RuleTally>> = cases
        .par_iter()
        .map(|(a, x, e)| {
            let m = Matroid::from_matrix(a)?;
            let spec = SplitSpec::new(x.iter().map(|i| labels[i].clone()), labels[*e].clone())?;
            compare_rules(a, &m, &spec, rule)
        })
        .collect();
    rep.universe_size = samples as u64;
    fold_tallies(
        &mut rep,
        tallies.into_iter().collect::<spikes_core::Result<_>>()?,
    );
    Ok(rep)
}

/// Every split of `Z_r` having an OX-circuit that avoids `e` is 3-connected.
/// (has an OX-circuit avoiding e, split is 3-connected, X, e)
type ConnectivityRow = (bool, bool, ElemSet, usize);

pub fn check_split_connectivity(r: usize) -> spikes_core::Result<ClaimReport> {
    let mut rep = ClaimReport::new(Claim::SplitConnectivity, r);
    let a = binary_spike_matrix(r)?;
    let z = Matroid::from_matrix(&a)?;
    let g = z.ground();
    let n = g.len();
    let rows: Vec<spikes_core::Result<Vec<ConnectivityRow>>> = (1u64..1 << n)
        .into_par_iter()
        .map(|xm| {
            let x = ElemSet(xm);
            x.iter()
                .map(|e| {
                    let hyp = z
                        .circuits()
                        .iter()
                        .any(|c| !c.contains(e) && c.intersection(x).len() % 2 == 1);
                    let split = es_split_matrix(&a, &SplitSpec::from_set(g, x, e)?)?;
                    Ok((hyp, split.matroid.is_3connected()?, x, e))
                })
                .collect()
        })
        .collect();
    let (mut universe, mut excluded, mut excluded_not_3c) = (0, 0, 0);
    for row in rows {
        for (hyp, connected, x, e) in row? {
            if hyp {
                universe += 1;
                if !connected {
                    rep.fail(format!("{} is not 3-connected", fmt_case(g, x, e)));
                }
            } else {
                excluded += 1;
                excluded_not_3c += usize::from(!connected);
            }
        }
    }
    rep.universe_size = universe as u64;
    rep.count("excluded", excluded);
    rep.count("excluded_not_3connected", excluded_not_3c);
    Ok(rep)
}

fn leg_pairs(g: &GroundSet, r: usize) -> Vec<ElemSet> {
    (1..=r)
        .map(|i| g.set_of(&[Label::x(i), Label::y(i)]).expect("spike ground"))
        .collect()
}

/// A universally quantified negative: no case satisfying `hyp` is good,
/// except that cases where `exception` returns `Some(tip)` must be good with
/// that tip.
fn check_negative(
    claim: Claim,
    census: &Census,
    hyp: impl Fn(ElemSet, usize) -> bool,
    exception: impl Fn(ElemSet, usize) -> Option<Label>,
) -> ClaimReport {
    let mut rep = ClaimReport::new(claim, census.rank);
    let g = &census.ground;
    let mut universe = 0;
    let mut exceptions = 0;
    for case in census.cases.iter().filter(|c| hyp(c.x, c.e)) {
        universe += 1;
        match (exception(case.x, case.e), &case.good_tip) {
            (Some(want), Some(tip)) if *tip == want => {
                exceptions += 1;
                rep.note(format!(
                    "{} is Z_{} with tip {tip}, as excepted",
                    fmt_case(g, case.x, case.e),
                    census.rank + 1
                ));
            }
            (Some(want), got) => rep.fail(format!(
                "{} should be Z_{} with tip {want}, got {:?}",
                fmt_case(g, case.x, case.e),
                census.rank + 1,
                got.as_ref().map(Label::as_str)
            )),
            (None, Some(tip)) => rep.fail(format!(
                "{} is Z_{} (tip {tip})",
                fmt_case(g, case.x, case.e),
                census.rank + 1
            )),
            (None, None) => {}
        }
    }
    rep.universe_size = universe;
    rep.count("exceptions_confirmed", exceptions);
    rep.count(
        "good_in_universe",
        census
            .cases
            .iter()
            .filter(|c| hyp(c.x, c.e) && c.good_tip.is_some())
            .count(),
    );
    rep
}

fn four_circuit_instance(r: usize, x: ElemSet, e: usize) -> spikes_core::Result<(usize, usize)> {
    // built by hand so that e may lie outside X
    let a = binary_spike_matrix(r)?;
    let mut row = BitVec::zeros(a.ncols());
    for i in x.iter() {
        row.set(i, true);
    }
    let grown = a.add_row(&row)?;
    let alpha = BitVec::from_indices(grown.nrows(), [a.nrows()]);
    let gamma = grown.column_at(e).xor(&alpha)?;
    let split = grown
        .push_column(Label::alpha(), &alpha)?
        .push_column(Label::gamma(), &gamma)?;
    let m = Matroid::from_matrix(&split)?;
    let z = binary_spike(r)?;
    let fours: Vec<ElemSet> = m.circuits().iter().filter(|c| c.len() == 4).collect();
    let total = fours.len();
    // alpha and gamma sort last, so old indices carry over unchanged
    let kept = fours.iter().filter(|&&c| z.circuits().contains(c)).count();
    Ok((total, kept))
}

fn lemma_report(claim: Claim, census: &Census) -> spikes_core::Result<ClaimReport> {
    let r = census.rank;
    let g = &census.ground;
    let t = g.index(&Label::tip())?;
    let full = g.full();
    let pairs = leg_pairs(g, r);
    let x_side = g.x_side();
    let phi3 = phi_family(r, 3)?;
    let none = |_: ElemSet, _: usize| None;
    let tip_split = move |x: ElemSet, e: usize| e == t && x.contains(t);
    let mut rep = match claim {
        Claim::TipOutsideX => check_negative(claim, census, |x, _| !x.contains(t), none),
        Claim::ElementNotTip => check_negative(claim, census, |_, e| e != t, none),
        Claim::EvenTransversal => check_negative(
            claim,
            census,
            |x, e| tip_split(x, e) && phi3.iter().any(|c| c.intersection(x).len() % 2 == 0),
            none,
        ),
        Claim::WholeLegPair => check_negative(
            claim,
            census,
            |x, e| tip_split(x, e) && pairs.iter().any(|&p| p.is_subset(x)),
            |x, _| (r % 2 == 1 && x == full).then(Label::gamma),
        ),
        Claim::SmallX => {
            check_negative(claim, census, |x, e| tip_split(x, e) && x.len() <= r, none)
        }
        Claim::OddXSide => check_negative(
            claim,
            census,
            |x, e| tip_split(x, e) && x.intersection(x_side).len() % 2 == 1,
            none,
        ),
        _ => unreachable!("not a lemma"),
    };
    if claim == Claim::EvenTransversal && r == 4 {
        // the 4-circuit count for X = {t}, E and E - t, split at t
        for (name, x) in [
            ("tip_only", ElemSet::singleton(t)),
            ("whole_ground", full),
            ("ground_minus_tip", full.without(t)),
        ] {
            let (total, kept) = four_circuit_instance(r, x, t)?;
            rep.count(&format!("four_circuits_{name}"), total);
            rep.count(&format!("four_circuits_{name}_inherited"), kept);
            if total != 14 {
                rep.fail(format!(
                    "X={} e=t: {total} four-element circuits ({kept} inherited), expected 14",
                    fmt_set(g, x)
                ));
            }
        }
    }
    if claim == Claim::SmallX {
        // X = {t}: the split has the 2-cocircuit {t, alpha}
        let a = binary_spike_matrix(r)?;
        let split = es_split_matrix(&a, &SplitSpec::from_set(g, ElemSet::singleton(t), t)?)?;
        let sg = split.matroid.ground();
        let ta = sg.set_of(&[Label::tip(), Label::alpha()])?;
        let has = cocircuits(&split.matroid)?.contains(ta);
        rep.count("tip_only_has_cocircuit_t_alpha", usize::from(has));
        if !has {
            rep.fail("X={t} e=t: {t,alpha} is not a cocircuit".into());
        }
    }
    Ok(rep)
}

fn predicted_good(r: usize, g: &GroundSet) -> spikes_core::Result<BTreeSet<(u64, usize)>> {
    let t = g.index(&Label::tip())?;
    let mut out = BTreeSet::new();
    if r.is_multiple_of(2) {
        for c in phi_family(r, 4)?.iter() {
            out.insert((c.bits(), t));
        }
    } else {
        for c in phi_family(r, 3)?.iter() {
            out.insert((c.with(t).bits(), t));
        }
        out.insert((g.full().bits(), t));
    }
    Ok(out)
}

fn compare_good_sets(rep: &mut ClaimReport, census: &Census, predicted: &BTreeSet<(u64, usize)>) {
    let g = &census.ground;
    let found = census.good_pairs();
    rep.universe_size = census.cases.len() as u64;
    rep.count("found_pairs", found.len());
    rep.count(
        "found_distinct_x",
        found.iter().map(|&(x, _)| x).collect::<BTreeSet<_>>().len(),
    );
    rep.count("predicted_pairs", predicted.len());
    rep.count(
        "predicted_distinct_x",
        predicted
            .iter()
            .map(|&(x, _)| x)
            .collect::<BTreeSet<_>>()
            .len(),
    );
    for &(x, e) in predicted.difference(&found) {
        rep.fail(format!(
            "predicted but not found: {}",
            fmt_case(g, ElemSet(x), e)
        ));
    }
    let tips: BTreeMap<(u64, usize), &Label> = census
        .good()
        .map(|c| ((c.x.bits(), c.e), c.good_tip.as_ref().unwrap()))
        .collect();
    for &(x, e) in found.difference(predicted) {
        rep.fail(format!(
            "found but not predicted: {} (tip {})",
            fmt_case(g, ElemSet(x), e),
            tips[&(x, e)]
        ));
    }
}

/// Good splits against the rank-parity characterization, plus the
/// label-exact check of the predicted cases against `Z_{r+1}` and `ψ`.
fn check_rank_splits(claim: Claim, census: &Census) -> spikes_core::Result<ClaimReport> {
    let r = census.rank;
    let g = &census.ground;
    let mut rep = ClaimReport::new(claim, r);
    let predicted = predicted_good(r, g)?;
    compare_good_sets(&mut rep, census, &predicted);
    let a = binary_spike_matrix(r)?;
    let next = binary_spike(r + 1)?;
    let mut strict = 0;
    for &(x, e) in &predicted {
        let x = ElemSet(x);
        let variant = SpikeVariant::choose(r, x == g.full());
        let res = es_split_matrix(&a, &SplitSpec::from_set(g, x, e)?)?;
        let psi_ok = *res.matroid.circuits() == psi_union(r, variant)?;
        let relabeled = relabel_to_spike(&res.matroid, variant)?;
        if psi_ok && matroids_equal(&relabeled, &next) {
            strict += 1;
        } else {
            rep.fail(format!(
                "{}: label-exact comparison with Z_{} fails (psi match: {psi_ok})",
                fmt_case(g, x, e),
                r + 1
            ));
        }
    }
    rep.count("label_exact_matches", strict);
    if r % 2 == 1 {
        // the X = E case has gamma as its tip
        let whole = census
            .cases
            .iter()
            .find(|c| c.x == g.full() && g.label(c.e) == &Label::tip());
        let tip = whole.and_then(|c| c.good_tip.clone());
        if tip != Some(Label::gamma()) {
            rep.fail(format!("X=E e=t: tip {tip:?}, expected gamma"));
        }
    }
    Ok(rep)
}

/// The Fano case: 35 `(X, e)` pairs over 29 distinct `X`.
fn check_fano_splits(census: &Census) -> spikes_core::Result<ClaimReport> {
    let g = &census.ground;
    let mut rep = ClaimReport::new(Claim::FanoSplits, census.rank);
    let z3 = binary_spike(3)?;
    let full = g.full();
    let mut predicted: BTreeSet<(u64, usize)> = full.iter().map(|e| (full.bits(), e)).collect();
    for line in z3.circuits().iter().filter(|c| c.len() == 3) {
        for z in full.difference(line).iter() {
            predicted.insert((line.with(z).bits(), z));
        }
    }
    compare_good_sets(&mut rep, census, &predicted);
    for (key, want) in [("predicted_pairs", 35), ("predicted_distinct_x", 29)] {
        if rep.counts[key] != want {
            rep.fail(format!("{key} = {}, expected {want}", rep.counts[key]));
        }
    }
    Ok(rep)
}

/// Relaxes `φ_3` in the given order, checking every intermediate step.
fn relax_all(
    rep: &mut ClaimReport,
    r: usize,
    order: &[ElemSet],
    tag: &str,
) -> spikes_core::Result<Matroid> {
    let mut m = binary_spike(r)?;
    let g = m.ground().clone();
    for (step, &c) in order.iter().enumerate() {
        m = match relax(&m, c) {
            Ok(next) => next,
            Err(err) => {
                rep.fail(format!(
                    "{tag} step {}: relaxing {}: {err}",
                    step + 1,
                    fmt_set(&g, c)
                ));
                return Ok(m);
            }
        };
        if recognize_spike(&m).is_empty() {
            rep.fail(format!("{tag} step {}: not a spike", step + 1));
        }
        if step == 0 && is_binary_by_symdiff(m.circuits()) {
            rep.fail(format!("{tag} step 1: still binary"));
        }
    }
    Ok(m)
}

pub fn check_relaxation_chain(r: usize, seed: u64) -> spikes_core::Result<ClaimReport> {
    let mut rep = ClaimReport::new(Claim::RelaxationChain, r);
    rep.seed = Some(seed);
    let z = binary_spike(r)?;
    let g = z.ground().clone();
    let phi3: Vec<ElemSet> = phi_family(r, 3)?.iter().collect();
    rep.universe_size = phi3.len() as u64;
    for &c in &phi3 {
        if !z.is_circuit_hyperplane(c) {
            rep.fail(format!("{} is not a circuit-hyperplane", fmt_set(&g, c)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let free = free_spike(r)?;
    let mut ends = Vec::new();
    for tag in ["order-a", "order-b"] {
        let mut order = phi3.clone();
        order.shuffle(&mut rng);
        let end = relax_all(&mut rep, r, &order, tag)?;
        if !matroids_equal(&end, &free) {
            rep.fail(format!("{tag}: end is not the free spike"));
        }
        ends.push(end);
    }
    if !matroids_equal(&ends[0], &ends[1]) {
        rep.fail("the two orders end at different matroids".into());
    }
    rep.count("steps", phi3.len());
    Ok(rep)
}

/// For odd `r` members of `φ_3` meet pairwise in odd sets and members of
/// `φ_4` in even sets; for even `r` the other way round.
pub fn check_phi_parity(r: usize) -> spikes_core::Result<ClaimReport> {
    let mut rep = ClaimReport::new(Claim::PhiParity, r);
    let g = GroundSet::spike(r);
    let mut pairs = 0;
    for (k, want_odd) in [(3, r % 2 == 1), (4, r.is_multiple_of(2))] {
        let fam = phi_family(r, k)?;
        let s = fam.as_slice();
        for (i, &a) in s.iter().enumerate() {
            for &b in &s[i + 1..] {
                pairs += 1;
                let odd = a.intersection(b).len() % 2 == 1;
                if odd != want_odd {
                    rep.fail(format!(
                        "phi{k}: {} and {} meet in {} elements",
                        fmt_set(&g, a),
                        fmt_set(&g, b),
                        a.intersection(b).len()
                    ));
                }
            }
        }
    }
    rep.universe_size = pairs;
    Ok(rep)
}

fn run_claim(
    claim: Claim,
    r: usize,
    cfg: &SuiteConfig,
    censuses: &BTreeMap<usize, Census>,
) -> Vec<ClaimReport> {
    let wrap = |res: spikes_core::Result<ClaimReport>| {
        res.unwrap_or_else(|e| ClaimReport::errored(claim, r, e))
    };
    let census = || censuses.get(&r).expect("census computed");
    match claim {
        Claim::SpikeCircuits => vec![wrap(check_spike_circuits(r))],
        Claim::SplitCircuitRule => {
            let mut out = vec![wrap(check_split_rule_exhaustive(r, &default_circuit_rule))];
            if r == 4 {
                out.push(wrap(check_split_rule_sampled(
                    cfg.seed,
                    cfg.samples,
                    4,
                    9,
                    &default_circuit_rule,
                )));
            }
            out
        }
        Claim::SplitConnectivity => vec![wrap(check_split_connectivity(r))],
        Claim::TipOutsideX
        | Claim::ElementNotTip
        | Claim::EvenTransversal
        | Claim::WholeLegPair
        | Claim::SmallX
        | Claim::OddXSide => vec![wrap(lemma_report(claim, census()))],
        Claim::EvenRankSplits | Claim::OddRankSplits => {
            vec![wrap(check_rank_splits(claim, census()))]
        }
        Claim::FanoSplits => vec![wrap(check_fano_splits(census()))],
        Claim::RelaxationChain => vec![wrap(check_relaxation_chain(r, cfg.seed))],
        Claim::PhiParity => vec![wrap(check_phi_parity(r))],
    }
}

fn timed(cfg: &SuiteConfig, f: impl FnOnce() -> Vec<ClaimReport>) -> Vec<ClaimReport> {
    let start = Instant::now();
    let mut out = f();
    if cfg.timings {
        let ms = start.elapsed().as_millis() as u64;
        for r in &mut out {
            r.elapsed_ms = Some(ms);
        }
    }
    out
}

/// Runs the configured suites on a pool of `cfg.jobs` workers. Reports come
/// back sorted by claim id, then rank.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<ClaimReport>, String> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| e.to_string())?;
    pool.install(|| {
        let census_ranks: BTreeSet<usize> = cfg
            .suites
            .iter()
            .filter(|c| c.needs_census())
            .flat_map(|c| c.ranks(cfg.max_rank))
            .collect();
        let mut censuses = BTreeMap::new();
        let mut census_errors = BTreeMap::new();
        for r in census_ranks {
            match census(r) {
                Ok(c) => {
                    censuses.insert(r, c);
                }
                Err(e) => {
                    census_errors.insert(r, e);
                }
            }
        }
        let tasks: Vec<(Claim, usize)> = cfg
            .suites
            .iter()
            .flat_map(|&c| c.ranks(cfg.max_rank).into_iter().map(move |r| (c, r)))
            .collect();
        let mut reports: Vec<ClaimReport> = tasks
            .par_iter()
            .flat_map_iter(|&(claim, r)| {
                if claim.needs_census() {
                    if let Some(e) = census_errors.get(&r) {
                        return vec![ClaimReport::errored(claim, r, e.clone())];
                    }
                }
                timed(cfg, || run_claim(claim, r, cfg, &censuses))
            })
            .collect();
        reports.sort_by(|a, b| (&a.claim_id, a.rank, a.seed).cmp(&(&b.claim_id, b.rank, b.seed)));
        Ok(reports)
    })
}

/// One JSON object per line.
pub fn reports_to_jsonl(reports: &[ClaimReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&serde_json::to_string(r).expect("report serializes"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn claim_ids_round_trip() {
        for c in Claim::ALL {
            assert_eq!(c.id().parse::<Claim>().unwrap(), c);
        }
        assert!(parse_suites("spike-circuits,nope").is_err());
        assert_eq!(parse_suites("all").unwrap().len(), Claim::ALL.len());
    }

    #[test]
    fn spike_circuits_pass() {
        for r in 3..=6 {
            assert!(check_spike_circuits(r).unwrap().passed());
        }
    }

    #[test]
    fn broken_rule_is_caught() {
        let drop_lambda = |g: &GroundSet, c: &CircuitFamily, s: &SplitSpec| {
            let (sg, fam) = es_split_circuits(g, c, s, SplitRule::Minimal)?;
            let lambda = sg.set_of(&[s.e.clone(), Label::alpha(), Label::gamma()])?;
            Ok(fam.filter(|x| x != lambda))
        };
        let rep = check_split_rule_exhaustive(3, &drop_lambda).unwrap();
        assert!(!rep.passed());
        assert!(!rep.witnesses.is_empty());
        assert_eq!(rep.counts["disagreements"], rep.universe_size);
        assert!(check_split_rule_exhaustive(3, &default_circuit_rule)
            .unwrap()
            .passed());
    }

    #[test]
    fn parity_holds() {
        for r in 3..=6 {
            assert!(check_phi_parity(r).unwrap().passed());
        }
    }

    #[test]
    fn fail_needs_witness() {
        let mut rep = ClaimReport::new(Claim::PhiParity, 3);
        rep.fail("w".into());
        assert_eq!(rep.verdict, Verdict::Fail);
        assert_eq!(rep.witnesses.len(), 1);
    }
}
