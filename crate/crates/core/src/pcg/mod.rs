//! Power-closed generated series: chains of normal subgroups
//! `N = H_0 <= ... <= H_n` with abelian sections, each step generated over
//! the previous one by word values whose powers stay word values.

mod build;
mod check;
mod derived;
mod dietzmann;
mod lift;
mod refine;
mod series;

pub use build::{build, build_with};
pub use check::{verify_pcg, verify_pcg_with, Condition, PcgFailure, PcgReport, StepOutcome};
pub use derived::{build_derived, build_derived_with};
pub use dietzmann::dietzmann_decompose;
pub use lift::{commutator_lift, LiftSide};
pub use refine::{refine_cyclic, refine_cyclic_with, CyclicRefinement};
pub use series::{join, PcgSeries, PcgStep};
