//! End-to-end checks of the word and series machinery on concrete groups.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::eval::Evaluator;
use crate::group::{ElemId, PermGroup};
use crate::pcg::{build_with, refine_cyclic_with, verify_pcg_with};
use crate::word::{pi_v, Section, WordTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Fail,
    Skip,
}

/// The kinds of check run by [`run_suite`], in report order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckKind {
    Symmetry,
    ThreeSubgroup,
    TheoremA,
    TheoremB,
}

impl CheckKind {
    pub const ALL: [CheckKind; 4] = [
        CheckKind::Symmetry,
        CheckKind::ThreeSubgroup,
        CheckKind::TheoremA,
        CheckKind::TheoremB,
    ];

    pub fn subject(self) -> &'static str {
        match self {
            CheckKind::Symmetry => "symmetry",
            CheckKind::ThreeSubgroup => "three-subgroup",
            CheckKind::TheoremA => "theorem-a",
            CheckKind::TheoremB => "theorem-b",
        }
    }
}

/// Outcome of one check. `quantities` holds the computed numbers and any
/// parameters needed to re-run the check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub subject: String,
    pub group: String,
    pub word: String,
    pub quantities: BTreeMap<String, Value>,
    pub ok: bool,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// Set when the check was skipped because a size cap was hit.
    #[serde(skip)]
    pub resource_limited: bool,
}

impl CheckReport {
    fn new(subject: &str, g: &PermGroup, w: &WordTree) -> Self {
        CheckReport {
            subject: subject.into(),
            group: g.display_name(),
            word: w.to_string(),
            quantities: BTreeMap::new(),
            ok: true,
            status: Status::Ok,
            counterexample: None,
            reason: None,
            resource_limited: false,
        }
    }

    fn set(&mut self, key: &str, v: impl Into<Value>) {
        self.quantities.insert(key.into(), v.into());
    }

    fn set_big(&mut self, key: &str, v: &BigUint) {
        let value = match u64::try_from(v) {
            Ok(n) => Value::from(n),
            Err(_) => Value::from(v.to_string()),
        };
        self.quantities.insert(key.into(), value);
    }

    fn fail(&mut self, reason: impl Into<String>, counterexample: Option<String>) {
        if self.status != Status::Fail {
            self.reason = Some(reason.into());
            self.counterexample = counterexample;
        }
        self.status = Status::Fail;
        self.ok = false;
    }

    fn skip(&mut self, reason: impl Into<String>) {
        self.status = Status::Skip;
        self.ok = false;
        self.reason = Some(reason.into());
    }

    /// Resource errors turn into a skip; anything else is a failure.
    fn absorb(mut self, e: Error) -> Self {
        match e {
            Error::Resource(m) => {
                self.skip(m);
                self.resource_limited = true;
            }
            e => self.fail(e.to_string(), None),
        }
        self
    }
}

/// The value set is closed under inversion and under conjugation by `G`.
pub fn check_symmetry(g: &Arc<PermGroup>, w: &WordTree) -> CheckReport {
    check_symmetry_with(&Evaluator::new(g.clone()), w)
}

pub fn check_symmetry_with(ev: &Evaluator, w: &WordTree) -> CheckReport {
    let g = ev.group();
    let r = CheckReport::new(CheckKind::Symmetry.subject(), g, w);
    match symmetry(ev, w, r.clone()) {
        Ok(r) => r,
        Err(e) => r.absorb(e),
    }
}

fn symmetry(ev: &Evaluator, w: &WordTree, mut r: CheckReport) -> Result<CheckReport> {
    let g = ev.group();
    let vs = ev.value_set(w, None)?;
    r.set("m", vs.m());
    if let Some(&x) = vs.values().iter().find(|&&x| !vs.contains_rep(g.inv(x))) {
        r.fail("value set is not closed under inversion", Some(g.perm(x).to_string()));
        return Ok(r);
    }
    for &x in vs.values() {
        for &t in g.generator_ids() {
            if !vs.contains_rep(g.conj(x, t)) {
                r.fail(
                    "value set is not closed under conjugation",
                    Some(format!("{} by {}", g.perm(x), g.perm(t))),
                );
                return Ok(r);
            }
        }
    }
    Ok(r)
}

/// `[w(G), gamma(G)]` lies in the product of the verbal subgroups of the
/// words obtained by bracketing each section member with `gamma`.
pub fn check_three_subgroup(g: &Arc<PermGroup>, w: &WordTree, gamma: &WordTree, section: &Section<'_>) -> CheckReport {
    check_three_subgroup_with(&Evaluator::new(g.clone()), w, gamma, section)
}

pub fn check_three_subgroup_with(ev: &Evaluator, w: &WordTree, gamma: &WordTree, section: &Section<'_>) -> CheckReport {
    let g = ev.group();
    let mut r = CheckReport::new(CheckKind::ThreeSubgroup.subject(), g, w);
    r.set("gamma", gamma.to_string());
    r.set(
        "section",
        section.members().map(|v| Value::from(v.0)).collect::<Vec<_>>(),
    );
    if section.tree() != w {
        r.fail("section belongs to a different word", None);
        return r;
    }
    match three_subgroup(ev, w, gamma, section, r.clone()) {
        Ok(r) => r,
        Err(e) => r.absorb(e),
    }
}

fn three_subgroup(
    ev: &Evaluator,
    w: &WordTree,
    gamma: &WordTree,
    section: &Section<'_>,
    mut r: CheckReport,
) -> Result<CheckReport> {
    let g = ev.group();
    let wg = ev.verbal_subgroup(w, None)?;
    let cg = ev.verbal_subgroup(gamma, None)?;
    let left = g.commutator_subgroup(&wg, &cg);
    let mut right = g.trivial();
    for v in section.members() {
        let pi = pi_v(w, v, gamma)?;
        right = g.product(&right, &ev.verbal_subgroup(&pi, None)?);
    }
    r.set("left_order", left.order());
    r.set("right_order", right.order());
    if let Some(&x) = left.members().iter().find(|&&x| !right.contains(x)) {
        r.fail("commutator subgroup is not contained in the product", Some(g.perm(x).to_string()));
    }
    Ok(r)
}

/// Bounds the order of `w(G)` by the number `m` of values: `2^(m-1)` for
/// soluble `G`, `(m-1)^(m-1)` otherwise. The soluble branch also builds the
/// series and its cyclic refinement and checks `sum |G_j/G_(j-1)| <= m+k-1`;
/// the other branch checks that values of the derived word one level above
/// `w` have order at most `(m-1)(m-2)`.
pub fn check_theorem_a(g: &Arc<PermGroup>, w: &WordTree) -> CheckReport {
    check_theorem_a_with(&Evaluator::new(g.clone()), w)
}

pub fn check_theorem_a_with(ev: &Evaluator, w: &WordTree) -> CheckReport {
    let r = CheckReport::new(CheckKind::TheoremA.subject(), ev.group(), w);
    match theorem_a(ev, w, r.clone()) {
        Ok(r) => r,
        Err(e) => r.absorb(e),
    }
}

fn theorem_a(ev: &Evaluator, w: &WordTree, mut r: CheckReport) -> Result<CheckReport> {
    let g = ev.group();
    let m = ev.value_set(w, None)?.m();
    let order = ev.verbal_subgroup(w, None)?.order();
    r.set("m", m);
    r.set("verbal_order", order);
    let ds = g.derived_series();
    match ds.derived_length {
        Some(d) => {
            r.set("soluble", true);
            r.set("derived_length", d);
            let bound = BigUint::from(1u32) << (m - 1);
            r.set_big("bound", &bound);
            if BigUint::from(order) > bound {
                r.fail(format!("|w(G)| = {order} exceeds 2^(m-1)"), None);
            }
            let s = build_with(ev, w, None)?;
            let refinement = refine_cyclic_with(ev, &s)?;
            let k = refinement.k();
            let sum = refinement.section_sum();
            r.set("series_length", s.len());
            r.set("k", k);
            r.set("section_sum", sum);
            if *refinement.chain.last().unwrap() != ev.verbal_subgroup(w, None)? {
                r.fail("refinement does not reach w(G)", None);
            }
            if k > 0 && sum > m + k - 1 {
                r.fail(format!("section orders sum to {sum}, above m + k - 1 = {}", m + k - 1), None);
            }
        }
        None => {
            r.set("soluble", false);
            if order == 1 {
                r.set_big("bound", &BigUint::from(1u32));
                return Ok(r);
            }
            if m < 3 {
                r.fail(format!("non-trivial verbal subgroup of an insoluble group with m = {m}"), None);
                return Ok(r);
            }
            let bound = BigUint::from(m - 1).pow((m - 1) as u32);
            r.set_big("bound", &bound);
            if BigUint::from(order) > bound {
                r.fail(format!("|w(G)| = {order} exceeds (m-1)^(m-1)"), None);
            }
            let order_bound = (m - 1) * (m - 2);
            r.set("element_order_bound", order_bound);
            let delta = WordTree::delta(w.height() + 1)?;
            let dv = ev.value_set(&delta, None)?;
            let worst = dv.values().iter().copied().max_by_key(|&x| (g.element_order(x), std::cmp::Reverse(x)));
            let max_order = worst.map_or(1, |x| g.element_order(x));
            r.set("max_delta_value_order", max_order);
            if max_order > order_bound {
                let x = worst.unwrap_or(ElemId::IDENTITY);
                r.fail(
                    format!("a derived-word value has order {max_order} > (m-1)(m-2)"),
                    Some(g.perm(x).to_string()),
                );
            }
        }
    }
    Ok(r)
}

/// Builds the series for `w` and verifies it: every condition at every
/// step, every term normal, top equal to `w(G)`. Skipped for insoluble `G`.
pub fn check_theorem_b(g: &Arc<PermGroup>, w: &WordTree) -> CheckReport {
    check_theorem_b_with(&Evaluator::new(g.clone()), w)
}

pub fn check_theorem_b_with(ev: &Evaluator, w: &WordTree) -> CheckReport {
    let mut r = CheckReport::new(CheckKind::TheoremB.subject(), ev.group(), w);
    if !ev.group().derived_series().is_soluble() {
        r.skip("group is not soluble");
        return r;
    }
    match theorem_b(ev, w, r.clone()) {
        Ok(r) => r,
        Err(e) => r.absorb(e),
    }
}

fn theorem_b(ev: &Evaluator, w: &WordTree, mut r: CheckReport) -> Result<CheckReport> {
    let g = ev.group();
    let s = build_with(ev, w, None)?;
    let report = verify_pcg_with(ev, &s)?;
    let verbal = ev.verbal_subgroup(w, None)?;
    r.set("derived_length", g.derived_series().derived_length.unwrap_or(0));
    r.set("series_length", s.len());
    r.set("verbal_order", verbal.order());
    r.set(
        "orders",
        std::iter::once(s.base().order())
            .chain(s.steps().iter().map(|st| st.subgroup.order()))
            .collect::<Vec<_>>(),
    );
    if let Some(f) = report.failures.first() {
        r.fail(
            format!("step {} fails {}", f.step, f.condition),
            f.witness.map(|x| g.perm(x).to_string()),
        );
    }
    if *s.top() != verbal {
        r.fail(format!("series ends at order {}, not at w(G)", s.top().order()), None);
    }
    Ok(r)
}

/// Runs one kind of check with the defaults used by the suite: the
/// three-subgroup check brackets with `[x1,x2]` over the section of leaves.
pub fn run_check(ev: &Evaluator, kind: CheckKind, w: &WordTree) -> CheckReport {
    match kind {
        CheckKind::Symmetry => check_symmetry_with(ev, w),
        CheckKind::ThreeSubgroup => {
            let gamma = WordTree::delta(1).expect("small derived word");
            check_three_subgroup_with(ev, w, &gamma, &Section::leaves(w))
        }
        CheckKind::TheoremA => check_theorem_a_with(ev, w),
        CheckKind::TheoremB => check_theorem_b_with(ev, w),
    }
}

/// Every check on every (group, word) pair, ordered by group, then word,
/// then check kind.
pub fn run_suite(groups: &[Arc<PermGroup>], words: &[WordTree]) -> Vec<CheckReport> {
    let pairs: Vec<(usize, usize)> = (0..groups.len())
        .flat_map(|gi| (0..words.len()).map(move |wi| (gi, wi)))
        .collect();
    let evaluators: Vec<Evaluator> = groups.iter().map(|g| Evaluator::new(g.clone())).collect();
    pairs
        .par_iter()
        .flat_map_iter(|&(gi, wi)| {
            let ev = &evaluators[gi];
            CheckKind::ALL.iter().map(move |&k| run_check(ev, k, &words[wi]))
        })
        .collect()
}

/// Counts of `ok`, `fail` and `skip` reports.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub ok: usize,
    pub fail: usize,
    pub skip: usize,
}

pub fn summarize(reports: &[CheckReport]) -> Summary {
    let mut s = Summary::default();
    for r in reports {
        match r.status {
            Status::Ok => s.ok += 1,
            Status::Fail => s.fail += 1,
            Status::Skip => s.skip += 1,
        }
    }
    s
}
