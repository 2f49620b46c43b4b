use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::ElemSet;
use crate::error::{Error, Result};
use crate::label::{Label, LabelKind};

/// An ordered ground set. Labels are kept in canonical order, so the same
/// label set always produces the same indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroundSet {
    labels: Vec<Label>,
}

impl GroundSet {
    pub fn new(labels: impl IntoIterator<Item = Label>) -> Result<Self> {
        let mut labels: Vec<Label> = labels.into_iter().collect();
        labels.sort();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateLabel(w[0].as_str().into()));
        }
        if labels.len() > 64 {
            return Err(Error::GroundTooLarge(labels.len()));
        }
        Ok(GroundSet { labels })
    }

    /// `x1..xr, y1..yr, t`.
    pub fn spike(r: usize) -> Self {
        let labels = (1..=r)
            .map(Label::x)
            .chain((1..=r).map(Label::y))
            .chain([Label::tip()])
            .collect();
        GroundSet { labels }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &Label {
        &self.labels[i]
    }

    pub fn index_of(&self, l: &Label) -> Option<usize> {
        self.labels.binary_search(l).ok()
    }

    pub fn index(&self, l: &Label) -> Result<usize> {
        self.index_of(l)
            .ok_or_else(|| Error::UnknownLabel(l.as_str().into()))
    }

    pub fn full(&self) -> ElemSet {
        ElemSet::full(self.len())
    }

    pub fn set_of<'a>(&self, labels: impl IntoIterator<Item = &'a Label>) -> Result<ElemSet> {
        labels
            .into_iter()
            .try_fold(ElemSet::EMPTY, |s, l| Ok(s.with(self.index(l)?)))
    }

    /// Members of `s` in canonical order.
    pub fn labels_of(&self, s: ElemSet) -> Vec<Label> {
        s.iter().map(|i| self.labels[i].clone()).collect()
    }

    fn of_kind(&self, pred: impl Fn(LabelKind) -> bool) -> ElemSet {
        ElemSet::from_indices(
            self.labels
                .iter()
                .enumerate()
                .filter(|(_, l)| pred(l.kind()))
                .map(|(i, _)| i),
        )
    }

    /// `X_1 = {x_1, ..., x_r}`.
    pub fn x_side(&self) -> ElemSet {
        self.of_kind(|k| matches!(k, LabelKind::X(_)))
    }

    /// `Y_1 = {y_1, ..., y_r}`.
    pub fn y_side(&self) -> ElemSet {
        self.of_kind(|k| matches!(k, LabelKind::Y(_)))
    }

    /// `r` when the labels are exactly `x1..xr, y1..yr, t`.
    pub fn spike_rank(&self) -> Option<usize> {
        let r = (self.len().checked_sub(1))? / 2;
        (r > 0 && *self == GroundSet::spike(r)).then_some(r)
    }

    /// Appends `alpha` and `gamma`. They sort last, so existing indices are
    /// unchanged.
    pub fn with_split_labels(&self) -> Result<GroundSet> {
        if let Some(l) = self.labels.iter().find(|l| l.is_reserved()) {
            return Err(Error::ReservedLabel(l.as_str().into()));
        }
        GroundSet::new(
            self.labels
                .iter()
                .cloned()
                .chain([Label::alpha(), Label::gamma()]),
        )
    }

    /// Re-expresses `s` over another ground set containing the same labels.
    pub fn translate(&self, s: ElemSet, to: &GroundSet) -> Result<ElemSet> {
        s.iter().try_fold(ElemSet::EMPTY, |acc, i| {
            Ok(acc.with(to.index(&self.labels[i])?))
        })
    }

    pub fn label_set(&self) -> BTreeSet<&Label> {
        self.labels.iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spike_ground_is_canonical() {
        let g = GroundSet::spike(3);
        let shuffled =
            GroundSet::new(["t", "y3", "x1", "y1", "x3", "x2", "y2"].map(Label::from)).unwrap();
        assert_eq!(g, shuffled);
        assert_eq!(g.spike_rank(), Some(3));
        assert_eq!(g.x_side(), ElemSet::from_indices([0, 1, 2]));
        assert_eq!(g.y_side(), ElemSet::from_indices([3, 4, 5]));
    }

    #[test]
    fn split_labels_keep_indices() {
        let g = GroundSet::new(["b", "a", "t", "x1"].map(Label::from)).unwrap();
        let s = g.with_split_labels().unwrap();
        for (i, l) in g.labels().iter().enumerate() {
            assert_eq!(s.index_of(l), Some(i));
        }
        assert!(matches!(
            s.with_split_labels(),
            Err(Error::ReservedLabel(_))
        ));
    }

    #[test]
    fn duplicates_and_unknowns() {
        assert!(GroundSet::new(["a", "a"].map(Label::from)).is_err());
        let g = GroundSet::spike(3);
        assert!(matches!(
            g.set_of(&[Label::from("z")]),
            Err(Error::UnknownLabel(_))
        ));
        assert_eq!(
            GroundSet::new(["a"].map(Label::from)).unwrap().spike_rank(),
            None
        );
    }
}
