//! Outer commutator words as ordered binary trees.

mod relations;
mod section;
mod tree;

pub use relations::{
    find_constituent, is_constituent, is_extension, max_delta_level, proper_extensions,
    proper_extensions_capped, MAX_EXTENSIONS,
};
pub use section::{cut_below_level, omega_v, pi_v, Section};
pub use tree::{Caps, Vertex, VertexId, WordMeasures, WordTree};

pub(crate) use relations::shapes_up_to;

/// Every word of height at most `h`, sorted. Grows doubly exponentially;
/// intended for `h <= 3`.
pub fn all_words_up_to(h: usize) -> Vec<WordTree> {
    let mut v: Vec<WordTree> = shapes_up_to(h).iter().map(WordTree::from_shape).collect();
    v.sort();
    v
}
