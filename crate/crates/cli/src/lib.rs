//! Formatting helpers and the self-check suite behind the `kramers` binary.

pub mod output;
pub mod verify;
