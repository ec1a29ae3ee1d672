//! Outer commutator words and their verbal subgroups in finite permutation
//! groups.
//!
//! * [`word`]: words as ordered binary trees, with height, defect, levels,
//!   sections, extensions and the grafting constructions.
//! * [`parse`]: the textual word syntax.
//! * [`group`]: permutation groups, subgroups, commutators, derived series.
//! * [`eval`]: word value sets and verbal subgroups.
//! * [`pcg`]: power-closed generated series: verification and construction.
//! * [`verify`]: end-to-end checks producing [`verify::CheckReport`]s.
//! * [`catalog`] and [`report`]: built-in groups and JSON reports.

pub mod catalog;
pub mod cli;
pub mod error;
pub mod eval;
pub mod group;
pub mod parse;
pub mod pcg;
pub mod report;
pub mod verify;
pub mod word;

pub use error::{Error, Result};
