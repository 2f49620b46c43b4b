//! Verification harness, JSON exchange format and command implementations
//! for the `spikes` binary.

pub mod commands;
pub mod format;
pub mod verify;
