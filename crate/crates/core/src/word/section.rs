use std::collections::BTreeSet;

use super::relations::max_delta_level;
use super::tree::{Shape, VertexId, WordTree};
use crate::error::{Error, Result};

/// A maximal antichain of vertices: every indeterminate of the word lies
/// under exactly one member.
#[derive(Clone, Debug)]
pub struct Section<'t> {
    tree: &'t WordTree,
    members: BTreeSet<VertexId>,
}

impl<'t> Section<'t> {
    pub fn new(tree: &'t WordTree, members: impl IntoIterator<Item = VertexId>) -> Result<Self> {
        let members: BTreeSet<VertexId> = members.into_iter().collect();
        for &v in &members {
            tree.vertex(v)?;
        }
        // each leaf must have exactly one member on its root path
        for leaf in tree.leaves() {
            let hits = members.iter().filter(|&&m| tree.is_ancestor(m, leaf)).count();
            if hits != 1 {
                return Err(Error::arg(format!(
                    "not a section: indeterminate at {leaf} is covered {hits} times"
                )));
            }
        }
        Ok(Section { tree, members })
    }

    /// The section consisting of every leaf.
    pub fn leaves(tree: &'t WordTree) -> Self {
        Section {
            tree,
            members: tree.leaves().collect(),
        }
    }

    /// The single-vertex section `{root}`.
    pub fn root(tree: &'t WordTree) -> Self {
        Section {
            tree,
            members: [tree.root()].into_iter().collect(),
        }
    }

    pub fn tree(&self) -> &'t WordTree {
        self.tree
    }

    pub fn members(&self) -> impl ExactSizeIterator<Item = VertexId> + '_ {
        self.members.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.members.contains(&v)
    }
}

/// Vertices at level `i + 1`, together with the leaves lying strictly
/// closer to the root than that level.
pub fn cut_below_level(t: &WordTree, i: usize) -> Result<Section<'_>> {
    if i >= t.height() {
        return Err(Error::arg(format!(
            "cut level {i} out of range for a word of height {}",
            t.height()
        )));
    }
    let mut members = BTreeSet::new();
    for v in t.vertices() {
        let level = t.level_of(v)?;
        if level == i + 1 || (level > i + 1 && t.is_leaf(v)?) {
            members.insert(v);
        }
    }
    Ok(Section { tree: t, members })
}

/// The word obtained by replacing the label `w_v` at `v` with `[w_v, gamma]`.
pub fn pi_v(t: &WordTree, v: VertexId, gamma: &WordTree) -> Result<WordTree> {
    t.vertex(v)?;
    let g = gamma.shape();
    Ok(WordTree::from_shape(&t.replace_at(v, |old| Shape::node(old, g))))
}

/// For `v` in the cut below the maximal delta level `i` of `t`: graft the
/// derived word of height `i` onto `v` if it is a leaf, otherwise over the
/// child of `v` that is not already that derived word (right child checked
/// first).
pub fn omega_v(t: &WordTree, v: VertexId, i: usize) -> Result<WordTree> {
    let expected = max_delta_level(t)?;
    if i != expected {
        return Err(Error::arg(format!("level {i} is not the maximal delta level {expected} of {t}")));
    }
    let cut = cut_below_level(t, i)?;
    if !cut.contains(v) {
        return Err(Error::arg(format!("{v} is not in the cut of {t} below level {i}")));
    }
    let delta = Shape::full(i);
    let target = match t.children(v)? {
        None => v,
        Some((p, q)) => {
            if !is_delta_at(t, q, i)? {
                q
            } else if !is_delta_at(t, p, i)? {
                p
            } else {
                return Err(Error::Invariant(format!(
                    "both children of {v} carry delta_{i}, contradicting maximality"
                )));
            }
        }
    };
    Ok(WordTree::from_shape(&t.replace_at(target, |_| delta)))
}

fn is_delta_at(t: &WordTree, v: VertexId, i: usize) -> Result<bool> {
    Ok(t.subtree_height(v)? == i && t.is_full_at(v)?)
}
