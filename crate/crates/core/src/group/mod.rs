//! Finite permutation groups with explicit element enumeration.
//!
//! Quotients are never built. Statements about `G/N` go through coset
//! representatives (`CosetMap`) and `PermGroup::mod_eq`.

mod file;
mod perm;
mod perm_group;

pub use file::{load_group_file, parse_group_def, GroupDef};
pub use perm::{parse_cycles, Permutation};
pub use perm_group::{closure, CosetMap, DerivedSeries, ElemId, PermGroup, Subgroup, DEFAULT_ORDER_CAP};
