use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use super::perm::Permutation;
use crate::error::{Error, Result};

/// Default cap on group order.
pub const DEFAULT_ORDER_CAP: usize = 20_000;

/// Groups up to this order get a full multiplication table.
const TABLE_LIMIT: usize = 2048;

/// Index of an element in its group's sorted element list. Index order is
/// the lexicographic order on image arrays, and the identity is `ElemId(0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElemId(pub u32);

impl ElemId {
    pub const IDENTITY: ElemId = ElemId(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A finite permutation group with every element materialized.
pub struct PermGroup {
    name: Option<String>,
    degree: usize,
    generators: Vec<Permutation>,
    gen_ids: Vec<ElemId>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, ElemId>,
    inverse: Vec<ElemId>,
    table: Option<Vec<u32>>,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup")
            .field("name", &self.name)
            .field("degree", &self.degree)
            .field("order", &self.order())
            .finish()
    }
}

/// Smallest product-closed set containing `gens` and the identity, sorted.
pub fn closure(degree: usize, gens: &[Permutation], cap: usize) -> Result<Vec<Permutation>> {
    for g in gens {
        if g.degree() != degree {
            return Err(Error::arg(format!("generator {g} has degree {}, expected {degree}", g.degree())));
        }
    }
    let id = Permutation::identity(degree);
    let mut seen: HashSet<Permutation> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(id.clone());
    queue.push_back(id);
    while let Some(e) = queue.pop_front() {
        for g in gens {
            let p = e.then(g);
            if !seen.contains(&p) {
                if seen.len() >= cap {
                    return Err(Error::resource(format!("group order exceeds cap {cap}")));
                }
                seen.insert(p.clone());
                queue.push_back(p);
            }
        }
    }
    let mut elements: Vec<Permutation> = seen.into_iter().collect();
    elements.sort();
    Ok(elements)
}

impl PermGroup {
    pub fn new(name: Option<String>, degree: usize, generators: Vec<Permutation>) -> Result<Arc<Self>> {
        PermGroup::with_cap(name, degree, generators, DEFAULT_ORDER_CAP)
    }

    pub fn with_cap(name: Option<String>, degree: usize, generators: Vec<Permutation>, cap: usize) -> Result<Arc<Self>> {
        if degree == 0 {
            return Err(Error::arg("degree must be positive"));
        }
        let elements = closure(degree, &generators, cap)?;
        let index: HashMap<Permutation, ElemId> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), ElemId(i as u32)))
            .collect();
        let inverse = elements.iter().map(|p| index[&p.inverse()]).collect();
        let table = (elements.len() <= TABLE_LIMIT).then(|| {
            let n = elements.len();
            let mut t = vec![0u32; n * n];
            for (a, pa) in elements.iter().enumerate() {
                for (b, pb) in elements.iter().enumerate() {
                    t[a * n + b] = index[&pa.then(pb)].0;
                }
            }
            t
        });
        let gen_ids = generators.iter().map(|g| index[g]).collect();
        Ok(Arc::new(PermGroup {
            name,
            degree,
            generators,
            gen_ids,
            elements,
            index,
            inverse,
            table,
        }))
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn display_name(&self) -> String {
        self.name.clone().unwrap_or_else(|| format!("<degree {} order {}>", self.degree, self.order()))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn generator_ids(&self) -> &[ElemId] {
        &self.gen_ids
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn ids(&self) -> impl ExactSizeIterator<Item = ElemId> {
        (0..self.elements.len() as u32).map(ElemId)
    }

    pub fn perm(&self, x: ElemId) -> &Permutation {
        &self.elements[x.index()]
    }

    pub fn id_of(&self, p: &Permutation) -> Option<ElemId> {
        self.index.get(p).copied()
    }

    pub fn mul(&self, a: ElemId, b: ElemId) -> ElemId {
        match &self.table {
            Some(t) => ElemId(t[a.index() * self.elements.len() + b.index()]),
            None => self.index[&self.perm(a).then(self.perm(b))],
        }
    }

    pub fn inv(&self, a: ElemId) -> ElemId {
        self.inverse[a.index()]
    }

    /// `a^-1 b^-1 a b`
    pub fn comm(&self, a: ElemId, b: ElemId) -> ElemId {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(self.inv(ba), ab)
    }

    /// `g^-1 x g`
    pub fn conj(&self, x: ElemId, g: ElemId) -> ElemId {
        self.mul(self.mul(self.inv(g), x), g)
    }

    /// `x^n` by square-and-multiply; negative `n` allowed.
    pub fn power(&self, x: ElemId, n: i64) -> ElemId {
        let mut base = if n < 0 { self.inv(x) } else { x };
        let mut e = n.unsigned_abs();
        let mut acc = ElemId::IDENTITY;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, x: ElemId) -> usize {
        let mut n = 1;
        let mut y = x;
        while y != ElemId::IDENTITY {
            y = self.mul(y, x);
            n += 1;
        }
        n
    }

    pub fn whole(self: &Arc<Self>) -> Subgroup {
        let members: Vec<ElemId> = self.ids().collect();
        Subgroup::from_parts(self.clone(), members, self.gen_ids.clone())
    }

    pub fn trivial(self: &Arc<Self>) -> Subgroup {
        Subgroup::from_parts(self.clone(), vec![ElemId::IDENTITY], Vec::new())
    }

    /// Subgroup generated by `seeds`.
    pub fn subgroup(self: &Arc<Self>, seeds: impl IntoIterator<Item = ElemId>) -> Subgroup {
        self.trivial().extend(seeds)
    }

    /// `<S>` together with a normal subgroup: `<S> N`.
    pub fn subgroup_with(self: &Arc<Self>, seeds: impl IntoIterator<Item = ElemId>, n: &Subgroup) -> Subgroup {
        n.extend(seeds)
    }

    /// Smallest normal subgroup containing `seeds`.
    pub fn normal_closure(self: &Arc<Self>, seeds: impl IntoIterator<Item = ElemId>) -> Subgroup {
        let h = self.subgroup(seeds);
        h.close_under_conjugation(&self.gen_ids)
    }

    /// `[H, K]`, generated by commutators of generators and closed under
    /// conjugation by both factors.
    pub fn commutator_subgroup(self: &Arc<Self>, h: &Subgroup, k: &Subgroup) -> Subgroup {
        let mut seeds = Vec::with_capacity(h.gens.len() * k.gens.len());
        for &a in &h.gens {
            for &b in &k.gens {
                seeds.push(self.comm(a, b));
            }
        }
        let conjugators: Vec<ElemId> = h.gens.iter().chain(&k.gens).copied().collect();
        self.subgroup(seeds).close_under_conjugation(&conjugators)
    }

    /// Product `HK` of two subgroups, one of which normalizes the other.
    pub fn product(self: &Arc<Self>, h: &Subgroup, k: &Subgroup) -> Subgroup {
        h.extend(k.gens.iter().copied())
    }

    pub fn derived_series(self: &Arc<Self>) -> DerivedSeries {
        self.derived_series_mod(&self.trivial())
    }

    /// Terms `G^(j) N` until they stabilize.
    pub fn derived_series_mod(self: &Arc<Self>, n: &Subgroup) -> DerivedSeries {
        let mut terms = vec![self.whole()];
        loop {
            let last = terms.last().unwrap();
            if last == n {
                return DerivedSeries {
                    derived_length: Some(terms.len() - 1),
                    terms,
                };
            }
            let next = self.product(&self.commutator_subgroup(last, last), n);
            if &next == last {
                return DerivedSeries {
                    terms,
                    derived_length: None,
                };
            }
            terms.push(next);
        }
    }

    /// Whether `x y^-1` lies in `n`.
    pub fn mod_eq(&self, x: ElemId, y: ElemId, n: &Subgroup) -> bool {
        n.contains(self.mul(x, self.inv(y)))
    }
}

/// The derived series `G = G^(0) >= G^(1) >= ...`, possibly modulo a normal
/// subgroup.
#[derive(Clone, Debug)]
pub struct DerivedSeries {
    pub terms: Vec<Subgroup>,
    /// Index of the first trivial term, or `None` when the series stalls
    /// above it.
    pub derived_length: Option<usize>,
}

impl DerivedSeries {
    pub fn is_soluble(&self) -> bool {
        self.derived_length.is_some()
    }

    /// `G^(j)`; past the end of a soluble series this is the last term.
    pub fn term(&self, j: usize) -> &Subgroup {
        &self.terms[j.min(self.terms.len() - 1)]
    }
}

/// A subgroup of a `PermGroup`, stored as a sorted element list plus a
/// membership mask and a small generating set.
#[derive(Clone)]
pub struct Subgroup {
    group: Arc<PermGroup>,
    members: Vec<ElemId>,
    mask: Vec<bool>,
    gens: Vec<ElemId>,
    normal: OnceLock<bool>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.group, &other.group) && self.members == other.members
    }
}

impl Eq for Subgroup {}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order {} of {})", self.order(), self.group.display_name())
    }
}

impl Subgroup {
    fn from_parts(group: Arc<PermGroup>, mut members: Vec<ElemId>, gens: Vec<ElemId>) -> Self {
        members.sort();
        let mut mask = vec![false; group.order()];
        for &m in &members {
            mask[m.index()] = true;
        }
        Subgroup {
            group,
            members,
            mask,
            gens,
            normal: OnceLock::new(),
        }
    }

    pub fn group(&self) -> &Arc<PermGroup> {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[ElemId] {
        &self.members
    }

    pub fn generators(&self) -> &[ElemId] {
        &self.gens
    }

    pub fn contains(&self, x: ElemId) -> bool {
        self.mask[x.index()]
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.len() <= other.members.len() && self.gens.iter().all(|&g| other.contains(g))
    }

    pub fn is_normal(&self) -> bool {
        *self.normal.get_or_init(|| {
            let g = &self.group;
            self.gens
                .iter()
                .all(|&h| g.gen_ids.iter().all(|&x| self.contains(g.conj(h, x))))
        })
    }

    /// `<self, seeds>`.
    pub fn extend(&self, seeds: impl IntoIterator<Item = ElemId>) -> Subgroup {
        let g = self.group.clone();
        let mut members = self.members.clone();
        let mut mask = self.mask.clone();
        let mut gens = self.gens.clone();
        for s in seeds {
            if mask[s.index()] {
                continue;
            }
            gens.push(s);
            // every element is reachable from the old members by right
            // multiplication with generators
            let mut queue: VecDeque<ElemId> = members.iter().copied().collect();
            while let Some(e) = queue.pop_front() {
                for &t in &gens {
                    let p = g.mul(e, t);
                    if !mask[p.index()] {
                        mask[p.index()] = true;
                        members.push(p);
                        queue.push_back(p);
                    }
                }
            }
        }
        if gens.len() == self.gens.len() {
            return self.clone();
        }
        members.sort();
        Subgroup {
            group: g,
            members,
            mask,
            gens,
            normal: OnceLock::new(),
        }
    }

    /// Smallest subgroup containing `self` that is normalized by every
    /// element of `conjugators`.
    pub fn close_under_conjugation(&self, conjugators: &[ElemId]) -> Subgroup {
        let g = self.group.clone();
        let mut cur = self.clone();
        loop {
            let mut missing = Vec::new();
            for &h in &cur.gens {
                for &x in conjugators {
                    let c = g.conj(h, x);
                    if !cur.contains(c) {
                        missing.push(c);
                    }
                }
            }
            if missing.is_empty() {
                return cur;
            }
            cur = cur.extend(missing);
        }
    }

    /// Whether `[self, self]` lies in `n`.
    pub fn is_abelian_mod(&self, n: &Subgroup) -> bool {
        let g = &self.group;
        g.commutator_subgroup(self, self).is_subgroup_of(n)
    }

    pub fn index_in(&self, over: &Subgroup) -> usize {
        over.order() / self.order()
    }
}

/// Coset representatives of a subgroup `N`: the least element of each left
/// coset `xN`. For normal `N` left and right cosets agree.
#[derive(Clone, Debug)]
pub struct CosetMap {
    rep: Vec<ElemId>,
    reps: Vec<ElemId>,
}

impl CosetMap {
    pub fn new(n: &Subgroup) -> CosetMap {
        let g = n.group();
        let mut rep = vec![None; g.order()];
        let mut reps = Vec::new();
        for x in g.ids() {
            if rep[x.index()].is_some() {
                continue;
            }
            reps.push(x);
            for &m in n.members() {
                rep[g.mul(x, m).index()] = Some(x);
            }
        }
        CosetMap {
            rep: rep.into_iter().map(|r| r.expect("cosets partition G")).collect(),
            reps,
        }
    }

    pub fn rep(&self, x: ElemId) -> ElemId {
        self.rep[x.index()]
    }

    /// All representatives, ascending.
    pub fn reps(&self) -> &[ElemId] {
        &self.reps
    }

    pub fn index(&self) -> usize {
        self.reps.len()
    }
}

#[cfg(test)]
mod tests {
    use super::super::perm::parse_cycles;
    use super::*;

    fn group(degree: usize, gens: &[&str]) -> Arc<PermGroup> {
        let gens = gens.iter().map(|s| parse_cycles(s, degree).unwrap()).collect();
        PermGroup::new(None, degree, gens).unwrap()
    }

    fn s3() -> Arc<PermGroup> {
        group(3, &["(1 2 3)", "(1 2)"])
    }

    fn s4() -> Arc<PermGroup> {
        group(4, &["(1 2 3 4)", "(1 2)"])
    }

    fn q8() -> Arc<PermGroup> {
        group(8, &["(1 3 2 4)(5 7 6 8)", "(1 5 2 6)(3 8 4 7)"])
    }

    fn id(g: &PermGroup, s: &str) -> ElemId {
        g.id_of(&parse_cycles(s, g.degree()).unwrap()).unwrap()
    }

    /// Brute force: all pairwise products of the members stay inside.
    fn closed(h: &Subgroup) -> bool {
        let g = h.group();
        h.members()
            .iter()
            .all(|&a| h.members().iter().all(|&b| h.contains(g.mul(a, b))))
    }

    /// Brute force `[H, K]`: close the full set of commutators.
    fn brute_commutator(h: &Subgroup, k: &Subgroup) -> Vec<ElemId> {
        let g = h.group();
        let mut set: HashSet<ElemId> = HashSet::new();
        for &a in h.members() {
            for &b in k.members() {
                set.insert(g.comm(a, b));
            }
        }
        loop {
            let snapshot: Vec<ElemId> = set.iter().copied().collect();
            let before = set.len();
            for &a in &snapshot {
                for &b in &snapshot {
                    set.insert(g.mul(a, b));
                }
            }
            if set.len() == before {
                break;
            }
        }
        let mut v: Vec<ElemId> = set.into_iter().collect();
        v.sort();
        v
    }

    #[test]
    fn closure_orders() {
        assert_eq!(s3().order(), 6);
        assert_eq!(s4().order(), 24);
        assert_eq!(q8().order(), 8);
        assert_eq!(group(3, &[]).order(), 1);
        assert!(matches!(
            PermGroup::with_cap(None, 5, vec![parse_cycles("(1 2 3 4 5)", 5).unwrap(), parse_cycles("(1 2)", 5).unwrap()], 100),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn identity_is_least() {
        let g = s4();
        assert!(g.perm(ElemId::IDENTITY).is_identity());
        assert!(g.elements().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn subgroups_are_closed() {
        let g = s4();
        for a in g.ids() {
            for b in g.ids().step_by(5) {
                let h = g.subgroup([a, b]);
                assert!(closed(&h));
                assert_eq!(g.order() % h.order(), 0);
            }
        }
        assert!(closed(&g.whole()));
    }

    #[test]
    fn commutator_subgroups() {
        let g = s3();
        let gg = g.commutator_subgroup(&g.whole(), &g.whole());
        assert_eq!(gg.order(), 3);
        assert!(gg.is_normal());
        assert!(g.commutator_subgroup(&g.whole(), &g.trivial()).is_trivial());

        let q = q8();
        let qq = q.commutator_subgroup(&q.whole(), &q.whole());
        assert_eq!(qq.order(), 2);
    }

    #[test]
    fn commutator_subgroup_matches_brute_force() {
        let g = s4();
        let subs: Vec<Subgroup> = vec![
            g.whole(),
            g.normal_closure([id(&g, "(1 2 3)")]),
            g.normal_closure([id(&g, "(1 2)(3 4)")]),
            g.subgroup([id(&g, "(1 2)")]),
            g.subgroup([id(&g, "(1 2 3 4)")]),
            g.subgroup([id(&g, "(1 2 3)"), id(&g, "(1 2)")]),
        ];
        for h in &subs {
            for k in &subs {
                let fast = g.commutator_subgroup(h, k);
                assert_eq!(fast.members(), brute_commutator(h, k).as_slice());
                assert_eq!(fast, g.commutator_subgroup(k, h));
            }
        }
    }

    #[test]
    fn normal_closures() {
        let g = s3();
        assert_eq!(g.normal_closure([id(&g, "(1 2)")]).order(), 6);
        assert!(g.normal_closure([]).is_trivial());
        let g4 = s4();
        let a4 = g4.normal_closure([id(&g4, "(1 2 3)")]);
        assert_eq!(a4.order(), 12);
        assert!(a4.is_normal());
        assert!(!g4.subgroup([id(&g4, "(1 2)")]).is_normal());
    }

    #[test]
    fn derived_series_examples() {
        let g = s3();
        let ds = g.derived_series();
        assert_eq!(ds.terms.iter().map(Subgroup::order).collect::<Vec<_>>(), vec![6, 3, 1]);
        assert_eq!(ds.derived_length, Some(2));

        let c4 = group(4, &["(1 2 3 4)"]);
        assert_eq!(c4.derived_series().derived_length, Some(1));

        let a5 = group(5, &["(1 2 3 4 5)", "(1 2 3)"]);
        let ds = a5.derived_series();
        assert_eq!(ds.derived_length, None);
        assert_eq!(ds.terms.len(), 1);
        assert_eq!(a5.commutator_subgroup(&a5.whole(), &a5.whole()).order(), 60);

        let s4 = s4();
        let ds = s4.derived_series();
        assert_eq!(ds.terms.iter().map(Subgroup::order).collect::<Vec<_>>(), vec![24, 12, 4, 1]);
        for w in ds.terms.windows(2) {
            assert!(w[1].is_subgroup_of(&w[0]) && w[1].order() < w[0].order());
            assert!(w[1].is_normal());
        }
    }

    #[test]
    fn derived_series_modulo() {
        let g = s4();
        let v4 = g.normal_closure([id(&g, "(1 2)(3 4)")]);
        let ds = g.derived_series_mod(&v4);
        assert_eq!(ds.terms.iter().map(Subgroup::order).collect::<Vec<_>>(), vec![24, 12, 4]);
        assert_eq!(ds.derived_length, Some(2));
    }

    #[test]
    fn coset_arithmetic() {
        let g = s3();
        let a3 = g.commutator_subgroup(&g.whole(), &g.whole());
        let x = id(&g, "(1 2)");
        let y = id(&g, "(1 3)");
        assert!(g.mod_eq(x, x, &a3));
        assert!(g.mod_eq(x, y, &a3));
        assert!(!g.mod_eq(x, ElemId::IDENTITY, &a3));
        let c = id(&g, "(1 2 3)");
        assert_eq!(g.element_order(c), 3);
        assert_eq!(g.power(c, -1), id(&g, "(1 3 2)"));
        assert_eq!(g.power(c, 3), ElemId::IDENTITY);
        assert_eq!(g.power(c, 0), ElemId::IDENTITY);
        let cm = CosetMap::new(&a3);
        assert_eq!(cm.index(), 2);
        assert_eq!(cm.index() * a3.order(), g.order());
        assert_eq!(cm.rep(x), cm.rep(y));
        assert_eq!(cm.rep(c), ElemId::IDENTITY);
    }

    #[test]
    fn mod_eq_is_an_equivalence() {
        let g = s4();
        let v4 = g.normal_closure([id(&g, "(1 2)(3 4)")]);
        let ids: Vec<ElemId> = g.ids().collect();
        let mut classes: Vec<Vec<ElemId>> = Vec::new();
        for &x in &ids {
            assert!(g.mod_eq(x, x, &v4));
            match classes.iter_mut().find(|c| g.mod_eq(x, c[0], &v4)) {
                Some(c) => c.push(x),
                None => classes.push(vec![x]),
            }
        }
        for c in &classes {
            for &a in c {
                for &b in c {
                    assert!(g.mod_eq(a, b, &v4) && g.mod_eq(b, a, &v4));
                }
            }
        }
        assert_eq!(classes.len() * v4.order(), g.order());
    }
}
