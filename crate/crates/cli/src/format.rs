//! JSON exchange format for matroids.
//!
//! A file names its ground set and gives either a GF(2) matrix as
//! bitstrings (one per row, one character per ground element) or the full
//! circuit list. The canonical form orders the ground set canonically,
//! stores a matrix in reduced row echelon form without zero rows, and lists
//! circuits in canonical order; binary matroids are uniquely representable,
//! so two canonical matrix files describe the same matroid exactly when
//! they are equal.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use spikes_core::essplit::{es_split, relabel_to_spike, SpikeVariant, SplitRule};
use spikes_core::matroid::{CircuitFamily, GroundSet, Matroid, Representation};
use spikes_core::spike::{binary_spike, build_spike, free_spike, relax_labels, SplitSpec};
use spikes_core::{Error, GF2Matrix, Label};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatroidFile {
    pub name: String,
    pub ground: Vec<String>,
    pub rep: Rep,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Rep {
    Gf2Matrix { rows: Vec<String> },
    Circuits { circuits: Vec<Vec<String>> },
}

/// How the matroid was produced: an optional starting matroid and the
/// operations applied to it, oldest first.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<Box<MatroidFile>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpikeMode {
    Binary,
    Free,
    C3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relabel {
    #[default]
    None,
    Auto,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum Step {
    GenSpike {
        rank: usize,
        mode: SpikeMode,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        c3: Option<Vec<Vec<String>>>,
    },
    Essplit {
        x: Vec<String>,
        e: String,
        #[serde(default)]
        relabel: Relabel,
    },
    Relax {
        circuit: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormatError {
    Json(String),
    Invalid(String),
    Core(Error),
}

impl std::fmt::Display for FormatError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FormatError::Json(m) => write!(f, "malformed matroid file: {m}"),
            FormatError::Invalid(m) => write!(f, "invalid matroid file: {m}"),
            FormatError::Core(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for FormatError {}

impl From<Error> for FormatError {
    fn from(e: Error) -> Self {
        FormatError::Core(e)
    }
}

fn labels(names: &[String]) -> Vec<Label> {
    names.iter().map(|s| Label::new(s.as_str())).collect()
}

fn names(labels: &[Label]) -> Vec<String> {
    labels.iter().map(|l| l.as_str().to_string()).collect()
}

impl MatroidFile {
    /// The canonical file for `m`.
    pub fn from_matroid(name: impl Into<String>, m: &Matroid, metadata: Option<Metadata>) -> Self {
        let rep = match m.representation() {
            Representation::Vector(a) => Rep::Gf2Matrix {
                rows: a.to_bitstrings(),
            },
            Representation::Circuits => Rep::Circuits {
                circuits: m.circuit_labels().iter().map(|c| names(c)).collect(),
            },
        };
        MatroidFile {
            name: name.into(),
            ground: names(m.ground().labels()),
            rep,
            metadata,
        }
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))
    }

    /// Pretty JSON with a trailing newline.
    pub fn emit(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("matroid file serializes");
        s.push('\n');
        s
    }

    pub fn to_matroid(&self) -> Result<Matroid, FormatError> {
        let ground_labels = labels(&self.ground);
        let ground = GroundSet::new(ground_labels.iter().cloned())?;
        if ground.len() != self.ground.len() {
            return Err(FormatError::Invalid("duplicate ground labels".into()));
        }
        match &self.rep {
            Rep::Gf2Matrix { rows } => {
                if let Some(bad) = rows.iter().find(|r| r.len() != self.ground.len()) {
                    return Err(FormatError::Invalid(format!(
                        "row `{bad}` has {} entries for {} ground elements",
                        bad.len(),
                        self.ground.len()
                    )));
                }
                let a = GF2Matrix::from_bitstrings(rows, ground_labels)?;
                Ok(Matroid::from_matrix(&a)?)
            }
            Rep::Circuits { circuits } => {
                let sets = circuits
                    .iter()
                    .map(|c| ground.set_of(&labels(c)))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Matroid::from_circuits(ground, CircuitFamily::new(sets))?)
            }
        }
    }

    /// Same name and metadata, canonical representation.
    pub fn canonical(&self) -> Result<Self, FormatError> {
        let m = self.to_matroid()?;
        Ok(MatroidFile::from_matroid(
            self.name.clone(),
            &m,
            self.metadata.clone(),
        ))
    }

    /// Metadata for a file derived from this one by `step`.
    pub fn derived_metadata(&self, step: Step) -> Metadata {
        match &self.metadata {
            Some(meta) if meta.seed.is_some() || !meta.steps.is_empty() => {
                let mut meta = meta.clone();
                meta.steps.push(step);
                meta
            }
            _ => Metadata {
                seed: Some(Box::new(MatroidFile {
                    metadata: None,
                    ..self.clone()
                })),
                steps: vec![step],
            },
        }
    }

    /// Re-runs the recorded provenance. `None` when the file carries none.
    pub fn replay(&self) -> Option<Result<Matroid, FormatError>> {
        let meta = self.metadata.as_ref()?;
        let mut current = match &meta.seed {
            Some(seed) => match seed.to_matroid() {
                Ok(m) => Some(m),
                Err(e) => return Some(Err(e)),
            },
            None => None,
        };
        if current.is_none() && meta.steps.is_empty() {
            return None;
        }
        for step in &meta.steps {
            current = match step.apply(current.as_ref()) {
                Ok(m) => Some(m),
                Err(e) => return Some(Err(e)),
            };
        }
        current.map(Ok)
    }
}

/// Generates a spike on `x1..xr, y1..yr, t`.
pub fn generate_spike(
    rank: usize,
    mode: SpikeMode,
    c3: Option<&[Vec<String>]>,
) -> Result<Matroid, FormatError> {
    match mode {
        SpikeMode::Binary => Ok(binary_spike(rank)?),
        SpikeMode::Free => Ok(free_spike(rank)?),
        SpikeMode::C3 => {
            let c3 =
                c3.ok_or_else(|| FormatError::Invalid("c3 mode needs a circuit list".into()))?;
            let g = GroundSet::spike(rank);
            let sets = c3
                .iter()
                .map(|c| g.set_of(&labels(c)))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| FormatError::Core(Error::InvalidC3(e.to_string())))?;
            Ok(build_spike(rank, &CircuitFamily::new(sets))?)
        }
    }
}

/// es-splits `m`; with [`Relabel::Auto`] the result is renamed so that a
/// good split of `Z_r` compares label-for-label with `Z_{r+1}`.
pub fn split(m: &Matroid, x: &[String], e: &str, relabel: Relabel) -> Result<Matroid, FormatError> {
    let spec = SplitSpec::new(labels(x), Label::new(e))?;
    let res = es_split(m, &spec, SplitRule::Minimal)?;
    match relabel {
        Relabel::None => Ok(res.matroid),
        Relabel::Auto => {
            let r = m.ground().spike_rank().ok_or_else(|| {
                FormatError::Invalid("relabel auto needs the ground x1..xr, y1..yr, t".into())
            })?;
            let whole = spec.x.len() == m.len();
            Ok(relabel_to_spike(
                &res.matroid,
                SpikeVariant::choose(r, whole),
            )?)
        }
    }
}

impl Step {
    /// Applies the step; `GenSpike` ignores `input`, the others need one.
    pub fn apply(&self, input: Option<&Matroid>) -> Result<Matroid, FormatError> {
        let need = || input.ok_or_else(|| FormatError::Invalid("step has no input matroid".into()));
        match self {
            Step::GenSpike { rank, mode, c3 } => generate_spike(*rank, *mode, c3.as_deref()),
            Step::Essplit { x, e, relabel } => split(need()?, x, e, *relabel),
            Step::Relax { circuit } => Ok(relax_labels(need()?, &labels(circuit))?),
        }
    }
}

/// Machine-readable summary of a matroid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Props {
    pub name: String,
    pub rank: usize,
    pub elements: usize,
    pub circuits: usize,
    pub circuit_sizes: BTreeMap<usize, usize>,
    pub binary: bool,
    /// `None` when the ground set is too large for the connectivity scan.
    pub three_connected: Option<bool>,
    pub spike: bool,
    pub spike_tips: Vec<String>,
}

impl Props {
    pub fn of(name: &str, m: &Matroid) -> Props {
        let tips: Vec<String> = spikes_core::spike::recognize_spike(m)
            .into_iter()
            .map(|d| d.tip.as_str().to_string())
            .collect();
        Props {
            name: name.to_string(),
            rank: m.rank(),
            elements: m.len(),
            circuits: m.circuits().len(),
            circuit_sizes: m.circuits().size_histogram(),
            binary: spikes_core::matroid::is_binary_by_symdiff(m.circuits()),
            three_connected: m.is_3connected().ok(),
            spike: !tips.is_empty(),
            spike_tips: tips,
        }
    }

    pub fn to_text(&self) -> String {
        let sizes: Vec<String> = self
            .circuit_sizes
            .iter()
            .map(|(k, v)| format!("{k}:{v}"))
            .collect();
        let yn = |b: bool| if b { "yes" } else { "no" };
        let connected = match self.three_connected {
            Some(b) => yn(b).to_string(),
            None => "unknown (too large)".to_string(),
        };
        let spike = if self.spike {
            format!("yes (tips: {})", self.spike_tips.join(","))
        } else {
            "no".to_string()
        };
        format!(
            "name: {}\nrank: {}\nelements: {}\ncircuits: {}\ncircuit sizes: {}\nbinary: {}\n3-connected: {}\nspike: {}\n",
            self.name,
            self.rank,
            self.elements,
            self.circuits,
            sizes.join(" "),
            yn(self.binary),
            connected,
            spike
        )
    }
}
