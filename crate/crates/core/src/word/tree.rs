use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};

/// Limits on the size of words built from the named families and on
/// enumerations over word shapes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub max_height: usize,
    pub max_leaves: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_height: 6,
            max_leaves: 64,
        }
    }
}

impl Caps {
    pub fn check(&self, t: &WordTree) -> Result<()> {
        if t.height() > self.max_height {
            return Err(Error::resource(format!(
                "word height {} exceeds cap {}",
                t.height(),
                self.max_height
            )));
        }
        if t.indeterminate_count() > self.max_leaves {
            return Err(Error::resource(format!(
                "word has {} indeterminates, cap is {}",
                t.indeterminate_count(),
                self.max_leaves
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub usize);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

#[derive(Clone, Debug)]
pub struct Vertex {
    pub parent: Option<VertexId>,
    /// Left and right child; both present or both absent.
    pub children: Option<(VertexId, VertexId)>,
    pub depth: usize,
    /// Height of the subtree rooted here.
    pub(crate) sub_height: usize,
    /// Number of vertices in the subtree rooted here.
    pub(crate) sub_size: usize,
    /// 1-based index of the leftmost indeterminate under this vertex.
    pub(crate) first_leaf: usize,
}

impl Vertex {
    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }
}

/// Recursive shape of an ordered binary tree. Used as the construction
/// currency for every tree transformation; a `WordTree` is the indexed,
/// navigable form of a shape.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Shape {
    Leaf,
    Node(Box<Shape>, Box<Shape>),
}

impl Shape {
    pub(crate) fn node(l: Shape, r: Shape) -> Shape {
        Shape::Node(Box::new(l), Box::new(r))
    }

    pub(crate) fn full(h: usize) -> Shape {
        if h == 0 {
            Shape::Leaf
        } else {
            let sub = Shape::full(h - 1);
            Shape::node(sub.clone(), sub)
        }
    }
}

/// An outer commutator word, stored as its ordered binary tree.
///
/// Vertices are kept in pre-order (left subtree first), so the root is
/// vertex 0 and the leaves, read in index order, are the indeterminates
/// `x1..xk`. Labels are never stored; they are rendered from the shape.
/// Two trees compare equal iff they have the same ordered shape, which is
/// exactly equivalence of words up to renaming indeterminates.
#[derive(Clone)]
pub struct WordTree {
    vertices: Vec<Vertex>,
    height: usize,
    leaves: usize,
}

impl WordTree {
    pub(crate) fn from_shape(shape: &Shape) -> WordTree {
        fn walk(s: &Shape, parent: Option<VertexId>, depth: usize, out: &mut Vec<Vertex>, next_leaf: &mut usize) -> VertexId {
            let id = VertexId(out.len());
            out.push(Vertex {
                parent,
                children: None,
                depth,
                sub_height: 0,
                sub_size: 1,
                first_leaf: *next_leaf,
            });
            if let Shape::Node(l, r) = s {
                let lid = walk(l, Some(id), depth + 1, out, next_leaf);
                let rid = walk(r, Some(id), depth + 1, out, next_leaf);
                let sub_height = 1 + out[lid.0].sub_height.max(out[rid.0].sub_height);
                let sub_size = 1 + out[lid.0].sub_size + out[rid.0].sub_size;
                let v = &mut out[id.0];
                v.children = Some((lid, rid));
                v.sub_height = sub_height;
                v.sub_size = sub_size;
            } else {
                *next_leaf += 1;
            }
            id
        }

        let mut vertices = Vec::new();
        let mut next_leaf = 1;
        walk(shape, None, 0, &mut vertices, &mut next_leaf);
        let height = vertices[0].sub_height;
        WordTree {
            vertices,
            height,
            leaves: next_leaf - 1,
        }
    }

    /// The word `x1`.
    pub fn indeterminate() -> WordTree {
        WordTree::from_shape(&Shape::Leaf)
    }

    /// `[alpha, beta]`. The operands' indeterminates are renamed apart, so
    /// `[x, x]` becomes `[x1, x2]`.
    pub fn commutator(alpha: &WordTree, beta: &WordTree) -> WordTree {
        WordTree::from_shape(&Shape::node(alpha.shape(), beta.shape()))
    }

    /// Lower central word `[x1, ..., xi]`, `i >= 1`.
    pub fn gamma(i: usize) -> Result<WordTree> {
        WordTree::gamma_capped(i, &Caps::default())
    }

    pub fn gamma_capped(i: usize, caps: &Caps) -> Result<WordTree> {
        if i == 0 {
            return Err(Error::arg("gamma index must be at least 1"));
        }
        if i - 1 > caps.max_height || i > caps.max_leaves {
            return Err(Error::resource(format!(
                "gamma_{i} exceeds caps (height {}, leaves {})",
                caps.max_height, caps.max_leaves
            )));
        }
        let mut s = Shape::Leaf;
        for _ in 1..i {
            s = Shape::node(s, Shape::Leaf);
        }
        Ok(WordTree::from_shape(&s))
    }

    /// Derived word: the full binary tree of height `i`.
    pub fn delta(i: usize) -> Result<WordTree> {
        WordTree::delta_capped(i, &Caps::default())
    }

    pub fn delta_capped(i: usize, caps: &Caps) -> Result<WordTree> {
        if i > caps.max_height || i >= usize::BITS as usize || (1usize << i) > caps.max_leaves {
            return Err(Error::resource(format!(
                "delta_{i} exceeds caps (height {}, leaves {})",
                caps.max_height, caps.max_leaves
            )));
        }
        Ok(WordTree::from_shape(&Shape::full(i)))
    }

    pub fn root(&self) -> VertexId {
        VertexId(0)
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn indeterminate_count(&self) -> usize {
        self.leaves
    }

    /// `2^(h+1) - 1 - V`: the number of vertices missing from the full tree
    /// of the same height.
    pub fn defect(&self) -> u128 {
        (1u128 << (self.height + 1)) - 1 - self.vertices.len() as u128
    }

    pub fn measures(&self) -> WordMeasures {
        WordMeasures {
            height: self.height,
            vertex_count: self.vertex_count(),
            defect: self.defect(),
            indeterminate_count: self.leaves,
        }
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = VertexId> + '_ {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn leaves(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices().filter(|&v| self.vertices[v.0].is_leaf())
    }

    pub fn vertex(&self, v: VertexId) -> Result<&Vertex> {
        self.vertices
            .get(v.0)
            .ok_or_else(|| Error::arg(format!("vertex {v} not in a tree with {} vertices", self.vertices.len())))
    }

    pub fn is_leaf(&self, v: VertexId) -> Result<bool> {
        Ok(self.vertex(v)?.is_leaf())
    }

    pub fn children(&self, v: VertexId) -> Result<Option<(VertexId, VertexId)>> {
        Ok(self.vertex(v)?.children)
    }

    pub fn parent(&self, v: VertexId) -> Result<Option<VertexId>> {
        Ok(self.vertex(v)?.parent)
    }

    pub fn depth(&self, v: VertexId) -> Result<usize> {
        Ok(self.vertex(v)?.depth)
    }

    /// Level counted up from the top of the tree: `height - depth(v)`.
    pub fn level_of(&self, v: VertexId) -> Result<usize> {
        Ok(self.height - self.vertex(v)?.depth)
    }

    /// The other child of `v`'s parent.
    pub fn companion(&self, v: VertexId) -> Result<VertexId> {
        let parent = self
            .vertex(v)?
            .parent
            .ok_or_else(|| Error::arg("the root has no companion"))?;
        let (l, r) = self.vertices[parent.0].children.expect("parent is internal");
        Ok(if l == v { r } else { l })
    }

    /// Whether `anc` lies on the path from the root to `v` (inclusive).
    pub fn is_ancestor(&self, anc: VertexId, v: VertexId) -> bool {
        // pre-order: the subtree of `anc` is a contiguous index range
        anc.0 <= v.0 && v.0 < anc.0 + self.vertices[anc.0].sub_size
    }

    /// Leaves under `v`, as 1-based indeterminate indices.
    pub fn indeterminates_under(&self, v: VertexId) -> Result<std::ops::Range<usize>> {
        let vx = self.vertex(v)?;
        let count = vx.sub_size.div_ceil(2);
        Ok(vx.first_leaf..vx.first_leaf + count)
    }

    /// The word labelling vertex `v`, as a stand-alone tree.
    pub fn subword(&self, v: VertexId) -> Result<WordTree> {
        self.vertex(v)?;
        Ok(WordTree::from_shape(&self.shape_at(v)))
    }

    /// Whether the subtree at `v` is the full tree of its own height.
    pub fn is_full_at(&self, v: VertexId) -> Result<bool> {
        let vx = self.vertex(v)?;
        Ok(vx.sub_size as u128 == (1u128 << (vx.sub_height + 1)) - 1)
    }

    pub fn subtree_height(&self, v: VertexId) -> Result<usize> {
        Ok(self.vertex(v)?.sub_height)
    }

    /// Renumber leaves in pre-order. Trees are stored canonically, so this
    /// rebuilds an identical tree.
    pub fn canonical_form(&self) -> WordTree {
        WordTree::from_shape(&self.shape())
    }

    pub fn is_derived_word(&self) -> bool {
        self.defect() == 0
    }

    /// Bracket text of the label at `v`, using the global indeterminate names.
    pub fn label(&self, v: VertexId) -> Result<String> {
        self.vertex(v)?;
        let mut out = String::new();
        self.write_bracket(v, &mut out);
        Ok(out)
    }

    pub(crate) fn write_bracket(&self, v: VertexId, out: &mut String) {
        let vx = &self.vertices[v.0];
        match vx.children {
            None => {
                out.push('x');
                out.push_str(&vx.first_leaf.to_string());
            }
            Some((l, r)) => {
                out.push('[');
                self.write_bracket(l, out);
                out.push(',');
                self.write_bracket(r, out);
                out.push(']');
            }
        }
    }

    pub(crate) fn shape(&self) -> Shape {
        self.shape_at(self.root())
    }

    pub(crate) fn shape_at(&self, v: VertexId) -> Shape {
        match self.vertices[v.0].children {
            None => Shape::Leaf,
            Some((l, r)) => Shape::node(self.shape_at(l), self.shape_at(r)),
        }
    }

    /// Shape of the tree with the subtree at `v` replaced by `f(old)`.
    pub(crate) fn replace_at(&self, v: VertexId, f: impl FnOnce(Shape) -> Shape) -> Shape {
        fn walk(t: &WordTree, cur: VertexId, target: VertexId, f: &mut Option<impl FnOnce(Shape) -> Shape>) -> Shape {
            if cur == target {
                let old = t.shape_at(cur);
                return (f.take().expect("target visited once"))(old);
            }
            match t.vertices[cur.0].children {
                None => Shape::Leaf,
                Some((l, r)) => {
                    if t.is_ancestor(l, target) {
                        Shape::node(walk(t, l, target, f), t.shape_at(r))
                    } else if t.is_ancestor(r, target) {
                        Shape::node(t.shape_at(l), walk(t, r, target, f))
                    } else {
                        Shape::node(t.shape_at(l), t.shape_at(r))
                    }
                }
            }
        }
        walk(self, self.root(), v, &mut Some(f))
    }

    /// Pre-order internal/leaf flags; identifies the shape uniquely.
    fn code(&self) -> impl Iterator<Item = bool> + '_ {
        self.vertices.iter().map(|v| v.children.is_some())
    }
}

impl PartialEq for WordTree {
    fn eq(&self, other: &Self) -> bool {
        self.vertices.len() == other.vertices.len() && self.code().eq(other.code())
    }
}

impl Eq for WordTree {}

impl Hash for WordTree {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.vertices.len().hash(state);
        for b in self.code() {
            b.hash(state);
        }
    }
}

impl Ord for WordTree {
    /// Fewer vertices first, then pre-order flags.
    fn cmp(&self, other: &Self) -> Ordering {
        self.vertices
            .len()
            .cmp(&other.vertices.len())
            .then_with(|| self.code().cmp(other.code()))
    }
}

impl PartialOrd for WordTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for WordTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write_bracket(self.root(), &mut s);
        f.write_str(&s)
    }
}

impl fmt::Debug for WordTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WordTree({self})")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WordMeasures {
    pub height: usize,
    pub vertex_count: usize,
    pub defect: u128,
    pub indeterminate_count: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(i: usize) -> WordTree {
        WordTree::gamma(i).unwrap()
    }

    fn d(i: usize) -> WordTree {
        WordTree::delta(i).unwrap()
    }

    #[test]
    fn indeterminate_measures() {
        let x = WordTree::indeterminate();
        assert_eq!(
            x.measures(),
            WordMeasures {
                height: 0,
                vertex_count: 1,
                defect: 0,
                indeterminate_count: 1
            }
        );
        assert_eq!(x.level_of(x.root()).unwrap(), 0);
        assert_eq!(x.to_string(), "x1");
    }

    #[test]
    fn named_families() {
        assert_eq!(g(4).measures(), WordMeasures { height: 3, vertex_count: 7, defect: 8, indeterminate_count: 4 });
        let d3 = d(3);
        assert_eq!((d3.vertex_count(), d3.height(), d3.defect()), (15, 3, 0));
        assert_eq!(g(1), d(0));
        assert_eq!(g(1), WordTree::indeterminate());
        for h in 0..=4 {
            assert_eq!(d(h).defect(), 0);
            assert_eq!(d(h).indeterminate_count(), 1 << h);
        }
        assert!(matches!(WordTree::gamma(0), Err(Error::Argument(_))));
        assert!(matches!(WordTree::delta(7), Err(Error::Resource(_))));
        assert!(matches!(WordTree::gamma(9), Err(Error::Resource(_))));
    }

    #[test]
    fn commutator_disjointifies() {
        let x = WordTree::indeterminate();
        let c = WordTree::commutator(&x, &x);
        assert_eq!(c.to_string(), "[x1,x2]");
        assert_eq!((c.vertex_count(), c.height()), (3, 1));

        let g3g3 = WordTree::commutator(&g(3), &g(3));
        assert_eq!((g3g3.vertex_count(), g3g3.height(), g3g3.defect()), (11, 3, 4));
        assert_eq!(g3g3.indeterminate_count(), 6);
    }

    #[test]
    fn commutator_gamma4_delta2() {
        // 7 + 7 + 1 vertices in a height-4 tree
        let t = WordTree::commutator(&g(4), &d(2));
        assert_eq!(t.height(), 4);
        assert_eq!(t.vertex_count(), 15);
        assert_eq!(t.defect(), 31 - 15);
    }

    #[test]
    fn levels_and_companions() {
        let g4 = g(4);
        // pre-order of [[[x1,x2],x3],x4]: root, [[x1,x2],x3], [x1,x2], x1, x2, x3, x4
        let x1 = VertexId(3);
        let x4 = VertexId(6);
        assert_eq!(g4.label(x1).unwrap(), "x1");
        assert_eq!(g4.level_of(x1).unwrap(), 0);
        assert_eq!(g4.level_of(g4.root()).unwrap(), 3);
        let c = g4.companion(x4).unwrap();
        assert_eq!(g4.label(c).unwrap(), "[[x1,x2],x3]");
        assert_eq!(g4.companion(c).unwrap(), x4);
        assert!(g4.companion(g4.root()).is_err());
        assert!(g4.level_of(VertexId(7)).is_err());

        let c2 = WordTree::commutator(&WordTree::indeterminate(), &WordTree::indeterminate());
        assert_eq!(c2.companion(VertexId(1)).unwrap(), VertexId(2));

        let d2 = d(2);
        let left = VertexId(1);
        let right = d2.companion(left).unwrap();
        assert_eq!(d2.label(left).unwrap(), "[x1,x2]");
        assert_eq!(d2.label(right).unwrap(), "[x3,x4]");
    }

    #[test]
    fn level_inside_gamma3_pair() {
        let t = WordTree::commutator(&g(3), &g(3));
        // the [x1,x2] vertex sits at depth 2
        let v = VertexId(2);
        assert_eq!(t.label(v).unwrap(), "[x1,x2]");
        assert_eq!(t.level_of(v).unwrap(), 1);
    }

    #[test]
    fn canonical_form_is_idempotent() {
        let t = WordTree::commutator(&d(2), &g(3));
        let c = t.canonical_form();
        assert_eq!(c, t);
        assert_eq!(c.canonical_form(), c);
        assert_eq!(d(2).to_string(), "[[x1,x2],[x3,x4]]");
    }

    #[test]
    fn ordered_trees_distinguish_sides() {
        let x = WordTree::indeterminate();
        let a = WordTree::commutator(&g(2), &x);
        let b = WordTree::commutator(&x, &g(2));
        assert_ne!(a, b);
    }

    #[test]
    fn indeterminate_ranges() {
        let t = WordTree::commutator(&g(3), &g(3));
        assert_eq!(t.indeterminates_under(t.root()).unwrap(), 1..7);
        let (_, r) = t.children(t.root()).unwrap().unwrap();
        assert_eq!(t.indeterminates_under(r).unwrap(), 4..7);
        assert_eq!(t.label(r).unwrap(), "[[x4,x5],x6]");
    }
}
