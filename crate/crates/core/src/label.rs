//! Element labels and their canonical order.
//!
//! Spike-shaped labels (`x1`, `y1`, `t`, `alpha`, `gamma`) sort as
//! `x_1..x_r, y_1..y_r, t`, then any other label, then `alpha`, `gamma`.
//! Keeping the split labels last means adjoining them never shifts the
//! position of an existing element.

use alloc::format;
use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;

pub const TIP: &str = "t";
pub const ALPHA: &str = "alpha";
pub const GAMMA: &str = "gamma";

/// A ground-set element, identified by its label.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Label(String);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum LabelKind {
    X(u32),
    Y(u32),
    Tip,
    Other,
    Alpha,
    Gamma,
}

fn indexed(s: &str, prefix: char) -> Option<u32> {
    let rest = s.strip_prefix(prefix)?;
    if rest.is_empty() || rest.starts_with('0') || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

impl Label {
    pub fn new(s: impl Into<String>) -> Self {
        Label(s.into())
    }

    pub fn x(i: usize) -> Self {
        Label(format!("x{i}"))
    }

    pub fn y(i: usize) -> Self {
        Label(format!("y{i}"))
    }

    pub fn tip() -> Self {
        Label(TIP.to_string())
    }

    pub fn alpha() -> Self {
        Label(ALPHA.to_string())
    }

    pub fn gamma() -> Self {
        Label(GAMMA.to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn kind(&self) -> LabelKind {
        match self.0.as_str() {
            TIP => LabelKind::Tip,
            ALPHA => LabelKind::Alpha,
            GAMMA => LabelKind::Gamma,
            s => {
                if let Some(i) = indexed(s, 'x') {
                    LabelKind::X(i)
                } else if let Some(i) = indexed(s, 'y') {
                    LabelKind::Y(i)
                } else {
                    LabelKind::Other
                }
            }
        }
    }

    pub fn is_reserved(&self) -> bool {
        matches!(self.kind(), LabelKind::Alpha | LabelKind::Gamma)
    }
}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> Ordering {
        self.kind()
            .cmp(&other.kind())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label(s.to_string())
    }
}

impl From<String> for Label {
    fn from(s: String) -> Self {
        Label(s)
    }
}
