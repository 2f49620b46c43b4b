//! Binary matroids over GF(2), spikes, and the es-splitting operation.
//!
//! Element sets are bit masks over a canonically ordered [`GroundSet`] of at
//! most 64 labeled elements.

#![no_std]

extern crate alloc;

pub mod error;
pub mod essplit;
pub mod gf2;
pub mod label;
pub mod matroid;
pub mod spike;

pub use error::{Error, Result};
pub use essplit::{
    classify_circuit, es_split, es_split_circuits, es_split_matrix, psi_family, relabel_to_spike,
    CircuitClass, SpikeVariant, SplitResult, SplitRule,
};
pub use gf2::{BitVec, GF2Matrix};
pub use label::Label;
pub use matroid::{CircuitFamily, ElemSet, GroundSet, Matroid};
pub use spike::{
    binary_spike, binary_spike_matrix, build_spike, phi_family, recognize_spike, relax,
    SpikeDescriptor, SplitSpec,
};
