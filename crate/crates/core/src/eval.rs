//! Word values `G_w` and verbal subgroups `w(G)`.
//!
//! For `w = [a, b]` the two operands share no indeterminates, so
//! `G_w = { [x, y] : x in G_a, y in G_b }`. The evaluator walks the tree
//! bottom-up with that rule, which costs at most `|G|^2` per vertex instead
//! of `|G|^k` for the whole tuple space. Working modulo a normal subgroup
//! `N` replaces every value by its least coset representative.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{CosetMap, ElemId, PermGroup, Permutation, Subgroup};
use crate::word::{VertexId, WordTree};

/// Default budget for the brute-force tuple enumeration.
pub const DEFAULT_NAIVE_BUDGET: u64 = 5_000_000;

/// Pair loops larger than this are split across threads.
const PARALLEL_PAIRS: usize = 1 << 16;

/// The values of a word in a group, optionally modulo a normal subgroup.
#[derive(Clone, Debug)]
pub struct ValueSet {
    group: Arc<PermGroup>,
    word: WordTree,
    modulus: Option<Subgroup>,
    values: Arc<Vec<ElemId>>,
}

impl ValueSet {
    pub fn group(&self) -> &Arc<PermGroup> {
        &self.group
    }

    pub fn word(&self) -> &WordTree {
        &self.word
    }

    pub fn modulus(&self) -> Option<&Subgroup> {
        self.modulus.as_ref()
    }

    /// Sorted values; coset representatives when a modulus is present.
    pub fn values(&self) -> &[ElemId] {
        &self.values
    }

    /// `|G_w|`, counted in the quotient when a modulus is present.
    pub fn m(&self) -> usize {
        self.values.len()
    }

    /// Membership of an already-reduced element.
    pub fn contains_rep(&self, x: ElemId) -> bool {
        self.values.binary_search(&x).is_ok()
    }
}

type MemoKey = (WordTree, Option<Vec<ElemId>>, Vec<ElemId>);

/// Word evaluation against one group, with memoized value sets.
///
/// The memo is keyed by the word, the substitution domain and the modulus.
/// Entries are deterministic, so concurrent writers store equal values.
pub struct Evaluator {
    group: Arc<PermGroup>,
    value_cap: usize,
    memo: Mutex<HashMap<MemoKey, Arc<Vec<ElemId>>>>,
    cosets: Mutex<HashMap<Vec<ElemId>, Arc<CosetMap>>>,
}

impl Evaluator {
    pub fn new(group: Arc<PermGroup>) -> Self {
        let cap = group.order();
        Evaluator::with_value_cap(group, cap)
    }

    pub fn with_value_cap(group: Arc<PermGroup>, value_cap: usize) -> Self {
        Evaluator {
            group,
            value_cap,
            memo: Mutex::new(HashMap::new()),
            cosets: Mutex::new(HashMap::new()),
        }
    }

    pub fn group(&self) -> &Arc<PermGroup> {
        &self.group
    }

    pub fn coset_map(&self, n: &Subgroup) -> Arc<CosetMap> {
        let key = n.members().to_vec();
        if let Some(c) = self.cosets.lock().unwrap().get(&key) {
            return c.clone();
        }
        let c = Arc::new(CosetMap::new(n));
        self.cosets.lock().unwrap().insert(key, c.clone());
        c
    }

    pub fn value_set(&self, w: &WordTree, modulus: Option<&Subgroup>) -> Result<ValueSet> {
        self.value_set_impl(w, None, modulus)
    }

    /// Values obtained by substituting only elements of `domain`.
    pub fn value_set_over(&self, w: &WordTree, domain: &Subgroup, modulus: Option<&Subgroup>) -> Result<ValueSet> {
        self.value_set_impl(w, Some(domain), modulus)
    }

    fn value_set_impl(&self, w: &WordTree, domain: Option<&Subgroup>, modulus: Option<&Subgroup>) -> Result<ValueSet> {
        if let Some(n) = modulus {
            self.check_same_group(n)?;
            if !n.is_normal() {
                return Err(Error::arg("modulus must be a normal subgroup"));
            }
        }
        if let Some(d) = domain {
            self.check_same_group(d)?;
        }
        let cosets = modulus.filter(|n| !n.is_trivial()).map(|n| self.coset_map(n));
        let ctx = Ctx {
            domain,
            domain_key: domain.map(|d| d.members().to_vec()),
            modulus_key: modulus.map(|n| n.members().to_vec()).unwrap_or_else(|| vec![ElemId::IDENTITY]),
            cosets: cosets.as_deref(),
        };
        let values = self.values_at(w, w.root(), &ctx)?;
        Ok(ValueSet {
            group: self.group.clone(),
            word: w.clone(),
            modulus: modulus.cloned(),
            values,
        })
    }

    fn check_same_group(&self, s: &Subgroup) -> Result<()> {
        if Arc::ptr_eq(s.group(), &self.group) {
            Ok(())
        } else {
            Err(Error::arg("subgroup belongs to a different group"))
        }
    }

    fn values_at(&self, t: &WordTree, v: VertexId, ctx: &Ctx<'_>) -> Result<Arc<Vec<ElemId>>> {
        let key = (t.subword(v)?, ctx.domain_key.clone(), ctx.modulus_key.clone());
        if let Some(hit) = self.memo.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let g = &self.group;
        let reduce = |x: ElemId| ctx.cosets.map_or(x, |c| c.rep(x));
        let values: Vec<ElemId> = match t.children(v)? {
            None => {
                let mut mask = vec![false; g.order()];
                match ctx.domain {
                    Some(d) => d.members().iter().for_each(|&x| mask[reduce(x).index()] = true),
                    None => g.ids().for_each(|x| mask[reduce(x).index()] = true),
                }
                collect_mask(&mask)
            }
            Some((l, r)) => {
                let a = self.values_at(t, l, ctx)?;
                let b = self.values_at(t, r, ctx)?;
                let n = g.order();
                let mask = if a.len() * b.len() >= PARALLEL_PAIRS {
                    a.par_iter()
                        .fold(
                            || vec![false; n],
                            |mut m, &x| {
                                for &y in b.iter() {
                                    m[reduce(g.comm(x, y)).index()] = true;
                                }
                                m
                            },
                        )
                        .reduce(
                            || vec![false; n],
                            |mut m1, m2| {
                                m1.iter_mut().zip(m2).for_each(|(p, q)| *p |= q);
                                m1
                            },
                        )
                } else {
                    let mut m = vec![false; n];
                    for &x in a.iter() {
                        for &y in b.iter() {
                            m[reduce(g.comm(x, y)).index()] = true;
                        }
                    }
                    m
                };
                collect_mask(&mask)
            }
        };
        if values.len() > self.value_cap {
            return Err(Error::resource(format!(
                "value set of size {} exceeds cap {}",
                values.len(),
                self.value_cap
            )));
        }
        let values = Arc::new(values);
        self.memo.lock().unwrap().insert(key, values.clone());
        Ok(values)
    }

    /// `w(G) N`: the subgroup generated by the values together with `N`.
    pub fn verbal_subgroup(&self, w: &WordTree, modulus: Option<&Subgroup>) -> Result<Subgroup> {
        let vs = self.value_set(w, modulus)?;
        Ok(self.close_values(&vs, modulus))
    }

    pub fn verbal_subgroup_over(&self, w: &WordTree, domain: &Subgroup, modulus: Option<&Subgroup>) -> Result<Subgroup> {
        let vs = self.value_set_over(w, domain, modulus)?;
        Ok(self.close_values(&vs, modulus))
    }

    fn close_values(&self, vs: &ValueSet, modulus: Option<&Subgroup>) -> Subgroup {
        let base = modulus.cloned().unwrap_or_else(|| self.group.trivial());
        base.extend(vs.values().iter().copied())
    }

    /// Longest shortest factorization over `G_w` (which is closed under
    /// inverses) of the elements of `targets`, or of all of `w(G)`.
    pub fn width(&self, w: &WordTree, targets: Option<&[ElemId]>) -> Result<usize> {
        let vs = self.value_set(w, None)?;
        let verbal = self.close_values(&vs, None);
        let g = &self.group;
        let mut steps: Vec<ElemId> = vs.values().to_vec();
        steps.extend(vs.values().iter().map(|&x| g.inv(x)));
        steps.sort();
        steps.dedup();

        let mut dist: Vec<Option<usize>> = vec![None; g.order()];
        dist[ElemId::IDENTITY.index()] = Some(0);
        let mut queue = VecDeque::from([ElemId::IDENTITY]);
        while let Some(e) = queue.pop_front() {
            let d = dist[e.index()].unwrap();
            for &s in &steps {
                let p = g.mul(e, s);
                if dist[p.index()].is_none() {
                    dist[p.index()] = Some(d + 1);
                    queue.push_back(p);
                }
            }
        }
        let targets: Vec<ElemId> = match targets {
            Some(t) => t.to_vec(),
            None => verbal.members().to_vec(),
        };
        let mut widest = 0;
        for x in targets {
            if !verbal.contains(x) {
                return Err(Error::arg(format!("{} is not in the verbal subgroup", g.perm(x))));
            }
            widest = widest.max(dist[x.index()].expect("verbal subgroup is connected"));
        }
        Ok(widest)
    }
}

struct Ctx<'a> {
    domain: Option<&'a Subgroup>,
    domain_key: Option<Vec<ElemId>>,
    modulus_key: Vec<ElemId>,
    cosets: Option<&'a CosetMap>,
}

fn collect_mask(mask: &[bool]) -> Vec<ElemId> {
    mask.iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| ElemId(i as u32))
        .collect()
}

pub fn value_set(g: &Arc<PermGroup>, w: &WordTree, modulus: Option<&Subgroup>) -> Result<ValueSet> {
    Evaluator::new(g.clone()).value_set(w, modulus)
}

pub fn verbal_subgroup(g: &Arc<PermGroup>, w: &WordTree, modulus: Option<&Subgroup>) -> Result<Subgroup> {
    Evaluator::new(g.clone()).verbal_subgroup(w, modulus)
}

pub fn width(g: &Arc<PermGroup>, w: &WordTree, targets: Option<&[ElemId]>) -> Result<usize> {
    Evaluator::new(g.clone()).width(w, targets)
}

/// Brute-force value set: substitute every tuple of group elements and
/// multiply out with plain permutations. Independent of [`Evaluator`].
pub fn value_set_naive(g: &Arc<PermGroup>, w: &WordTree) -> Result<ValueSet> {
    value_set_naive_budget(g, w, DEFAULT_NAIVE_BUDGET)
}

pub fn value_set_naive_budget(g: &Arc<PermGroup>, w: &WordTree, budget: u64) -> Result<ValueSet> {
    let k = w.indeterminate_count();
    let n = g.order() as u64;
    let tuples = (0..k).try_fold(1u64, |acc, _| acc.checked_mul(n).filter(|&t| t <= budget));
    if tuples.is_none() {
        return Err(Error::resource(format!("{n}^{k} tuples exceed budget {budget}")));
    }

    fn eval(t: &WordTree, v: VertexId, tuple: &[&Permutation]) -> Permutation {
        match t.children(v).unwrap() {
            None => tuple[t.indeterminates_under(v).unwrap().start - 1].clone(),
            Some((l, r)) => eval(t, l, tuple).commutator(&eval(t, r, tuple)),
        }
    }

    let elements = g.elements();
    let mut seen: HashSet<Permutation> = HashSet::new();
    let mut idx = vec![0usize; k];
    loop {
        let tuple: Vec<&Permutation> = idx.iter().map(|&i| &elements[i]).collect();
        seen.insert(eval(w, w.root(), &tuple));
        let mut pos = 0;
        loop {
            if pos == k {
                let mut values: Vec<ElemId> = seen.iter().map(|p| g.id_of(p).expect("value lies in G")).collect();
                values.sort();
                return Ok(ValueSet {
                    group: g.clone(),
                    word: w.clone(),
                    modulus: None,
                    values: Arc::new(values),
                });
            }
            idx[pos] += 1;
            if idx[pos] < elements.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::parse_cycles;

    fn group(degree: usize, gens: &[&str]) -> Arc<PermGroup> {
        let gens = gens.iter().map(|s| parse_cycles(s, degree).unwrap()).collect();
        PermGroup::new(None, degree, gens).unwrap()
    }
    fn s3() -> Arc<PermGroup> {
        group(3, &["(1 2 3)", "(1 2)"])
    }
    fn q8() -> Arc<PermGroup> {
        group(8, &["(1 3 2 4)(5 7 6 8)", "(1 5 2 6)(3 8 4 7)"])
    }
    fn w(s: &str) -> WordTree {
        s.parse().unwrap()
    }

    #[test]
    fn commutators_in_s3() {
        let g = s3();
        let vs = value_set(&g, &w("g2"), None).unwrap();
        assert_eq!(vs.m(), 3);
        let c3 = g.commutator_subgroup(&g.whole(), &g.whole());
        assert_eq!(vs.values(), c3.members());
        assert_eq!(verbal_subgroup(&g, &w("g2"), None).unwrap(), c3);
        assert_eq!(width(&g, &w("g2"), None).unwrap(), 1);
        assert_eq!(width(&g, &w("g2"), Some(&[ElemId::IDENTITY])).unwrap(), 0);
    }

    #[test]
    fn commutators_in_q8() {
        let g = q8();
        let vs = value_set(&g, &w("g2"), None).unwrap();
        assert_eq!(vs.m(), 2);
        assert_eq!(width(&g, &w("g2"), None).unwrap(), 1);
    }

    #[test]
    fn indeterminate_values_are_the_group() {
        let g = s3();
        assert_eq!(value_set(&g, &w("x1"), None).unwrap().m(), 6);
        let a3 = g.commutator_subgroup(&g.whole(), &g.whole());
        let vs = value_set(&g, &w("x1"), Some(&a3)).unwrap();
        assert_eq!(vs.m(), 2);
    }

    #[test]
    fn matches_naive_oracle() {
        let g = s3();
        for s in ["x1", "g2", "g3", "d2", "[x1,[x2,x3]]"] {
            let fast = value_set(&g, &w(s), None).unwrap();
            let slow = value_set_naive(&g, &w(s)).unwrap();
            assert_eq!(fast.values(), slow.values(), "{s}");
        }
        let c2 = group(2, &["(1 2)"]);
        assert_eq!(value_set_naive(&c2, &w("d2")).unwrap().values(), &[ElemId::IDENTITY]);
    }

    #[test]
    fn naive_budget() {
        let g = s3();
        assert!(matches!(value_set_naive_budget(&g, &w("d2"), 100), Err(Error::Resource(_))));
    }

    #[test]
    fn verbal_subgroups() {
        let s4 = group(4, &["(1 2 3 4)", "(1 2)"]);
        let g3 = verbal_subgroup(&s4, &w("g3"), None).unwrap();
        assert_eq!(g3.order(), 12);
        assert_eq!(g3, verbal_subgroup(&s4, &w("g2"), None).unwrap());
        let c4 = group(4, &["(1 2 3 4)"]);
        assert!(verbal_subgroup(&c4, &w("g2"), None).unwrap().is_trivial());
    }

    #[test]
    fn quotient_values_are_images() {
        let s4 = group(4, &["(1 2 3 4)", "(1 2)"]);
        let ev = Evaluator::new(s4.clone());
        let v4 = s4.normal_closure([s4.id_of(&parse_cycles("(1 2)(3 4)", 4).unwrap()).unwrap()]);
        let cm = ev.coset_map(&v4);
        for s in ["x1", "g2", "g3", "d2"] {
            let full = ev.value_set(&w(s), None).unwrap();
            let modded = ev.value_set(&w(s), Some(&v4)).unwrap();
            let mut image: Vec<ElemId> = full.values().iter().map(|&x| cm.rep(x)).collect();
            image.sort();
            image.dedup();
            assert_eq!(modded.values(), image.as_slice(), "{s}");
        }
    }

    #[test]
    fn restricted_domain() {
        let s4 = group(4, &["(1 2 3 4)", "(1 2)"]);
        let ev = Evaluator::new(s4.clone());
        let a4 = ev.verbal_subgroup(&w("g2"), None).unwrap();
        // commutators of elements of A4 generate the Klein group
        let v = ev.verbal_subgroup_over(&w("g2"), &a4, None).unwrap();
        assert_eq!(v.order(), 4);
        assert_eq!(v, ev.verbal_subgroup(&w("d2"), None).unwrap());
    }

    #[test]
    fn non_normal_modulus_is_rejected() {
        let g = s3();
        let h = g.subgroup([g.id_of(&parse_cycles("(1 2)", 3).unwrap()).unwrap()]);
        assert!(value_set(&g, &w("g2"), Some(&h)).is_err());
    }

    #[test]
    fn value_cap() {
        let g = s3();
        let ev = Evaluator::with_value_cap(g, 4);
        assert!(matches!(ev.value_set(&w("x1"), None), Err(Error::Resource(_))));
        assert_eq!(ev.value_set(&w("g2"), None).unwrap_err(), Error::Resource("value set of size 6 exceeds cap 4".into()));
    }
}
