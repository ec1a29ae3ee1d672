use std::collections::BTreeSet;

use super::tree::{Shape, VertexId, WordTree};
use crate::error::{Error, Result};

/// Upper bound on the number of words `proper_extensions` will materialize.
pub const MAX_EXTENSIONS: usize = 100_000;

/// Whether `omega`'s tree is `phi`'s tree with every branch above some
/// antichain erased. Compares shapes only.
pub fn is_extension(phi: &WordTree, omega: &WordTree) -> bool {
    fn walk(phi: &WordTree, p: VertexId, omega: &WordTree, o: VertexId) -> bool {
        match (omega.children(o).unwrap(), phi.children(p).unwrap()) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some((ol, or)), Some((pl, pr))) => walk(phi, pl, omega, ol) && walk(phi, pr, omega, or),
        }
    }
    walk(phi, phi.root(), omega, omega.root())
}

/// Whether some vertex of `phi` is labelled by a word equivalent to `omega`.
pub fn is_constituent(omega: &WordTree, phi: &WordTree) -> bool {
    find_constituent(omega, phi).is_some()
}

pub fn find_constituent(omega: &WordTree, phi: &WordTree) -> Option<VertexId> {
    let target = omega.shape();
    phi.vertices().find(|&v| {
        let vx = phi.vertex(v).unwrap();
        vx.sub_size == omega.vertex_count() && vx.sub_height == omega.height() && phi.shape_at(v) == target
    })
}

/// Every shape of height at most `h`, in a fixed order.
pub(crate) fn shapes_up_to(h: usize) -> Vec<Shape> {
    let mut all = vec![Shape::Leaf];
    for _ in 0..h {
        let mut next = vec![Shape::Leaf];
        for l in &all {
            for r in &all {
                next.push(Shape::node(l.clone(), r.clone()));
            }
        }
        all = next;
    }
    all
}

/// All words of the same height that properly extend `t`, sorted and
/// deduplicated. Empty exactly when `t` is a derived word.
pub fn proper_extensions(t: &WordTree) -> Result<Vec<WordTree>> {
    proper_extensions_capped(t, MAX_EXTENSIONS)
}

pub fn proper_extensions_capped(t: &WordTree, budget: usize) -> Result<Vec<WordTree>> {
    let h = t.height();
    let leaves: Vec<VertexId> = t.leaves().collect();
    let mut menus: Vec<Vec<Shape>> = Vec::with_capacity(leaves.len());
    let mut total: usize = 1;
    for &leaf in &leaves {
        let room = h - t.depth(leaf)?;
        // s(k) = 1 + s(k-1)^2 overflows quickly; check before building
        let count = shape_count(room).ok_or_else(|| too_many(budget))?;
        total = total.checked_mul(count).filter(|&n| n <= budget.saturating_add(1)).ok_or_else(|| too_many(budget))?;
        menus.push(shapes_up_to(room));
    }

    let mut out = BTreeSet::new();
    let mut choice = vec![0usize; leaves.len()];
    loop {
        if choice.iter().any(|&c| c != 0) {
            out.insert(WordTree::from_shape(&graft_leaves(t, t.root(), &leaves, &menus, &choice)));
        }
        // odometer
        let mut k = 0;
        loop {
            if k == choice.len() {
                return Ok(out.into_iter().collect());
            }
            choice[k] += 1;
            if choice[k] < menus[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

fn too_many(budget: usize) -> Error {
    Error::resource(format!("more than {budget} proper extensions"))
}

fn shape_count(h: usize) -> Option<usize> {
    let mut s: usize = 1;
    for _ in 0..h {
        s = s.checked_mul(s)?.checked_add(1)?;
    }
    Some(s)
}

fn graft_leaves(t: &WordTree, v: VertexId, leaves: &[VertexId], menus: &[Vec<Shape>], choice: &[usize]) -> Shape {
    match t.children(v).unwrap() {
        None => {
            let k = leaves.binary_search(&v).expect("leaf listed");
            menus[k][choice[k]].clone()
        }
        Some((l, r)) => Shape::node(
            graft_leaves(t, l, leaves, menus, choice),
            graft_leaves(t, r, leaves, menus, choice),
        ),
    }
}

/// Largest `i` such that a vertex at level `i` carries the derived word
/// of height `i`. Requires `t` not to be a derived word itself.
pub fn max_delta_level(t: &WordTree) -> Result<usize> {
    if t.height() == 0 || t.is_derived_word() {
        return Err(Error::arg(format!("{t} is a derived word; no maximal delta level below the root")));
    }
    let mut best = 0;
    for v in t.vertices() {
        let level = t.level_of(v)?;
        if level > best && t.subtree_height(v)? == level && t.is_full_at(v)? {
            best = level;
        }
    }
    debug_assert!(best >= 1 && best < t.height());
    Ok(best)
}
