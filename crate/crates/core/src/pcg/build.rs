use std::collections::HashMap;
use std::sync::Arc;

use super::derived::{build_derived_to, derived_length_for};
use super::lift::{commutator_lift, LiftSide};
use super::series::{join, PcgSeries};
use crate::error::{Error, Result};
use crate::eval::Evaluator;
use crate::group::{ElemId, PermGroup, Subgroup};
use crate::word::{is_constituent, max_delta_level, proper_extensions, WordTree};

/// Series from `N` (trivial by default) to `w(G) N` for `w`, by induction
/// on height and then on defect.
pub fn build(g: &Arc<PermGroup>, w: &WordTree, modulus: Option<&Subgroup>) -> Result<PcgSeries> {
    build_with(&Evaluator::new(g.clone()), w, modulus)
}

pub fn build_with(ev: &Evaluator, w: &WordTree, modulus: Option<&Subgroup>) -> Result<PcgSeries> {
    let g = ev.group();
    let n = modulus.cloned().unwrap_or_else(|| g.trivial());
    if !n.is_normal() {
        return Err(Error::arg("series base must be normal"));
    }
    let d = derived_length_for(ev, Some(&n))?;
    let mut b = Builder {
        ev,
        d,
        memo: HashMap::new(),
    };
    let s = b.build(&w.canonical_form(), &n)?;
    // the caller's numbering of indeterminates is kept
    s.reinterpret(w)
}

struct Builder<'a> {
    ev: &'a Evaluator,
    /// Padding length shared by every derived-word piece, so the length of
    /// the result depends only on the word and this number.
    d: usize,
    memo: HashMap<(WordTree, Vec<ElemId>), PcgSeries>,
}

impl Builder<'_> {
    fn build(&mut self, w: &WordTree, n: &Subgroup) -> Result<PcgSeries> {
        let key = (w.clone(), n.members().to_vec());
        if let Some(s) = self.memo.get(&key) {
            return Ok(s.clone());
        }
        let s = self.build_uncached(w, n)?;
        self.memo.insert(key, s.clone());
        Ok(s)
    }

    fn build_uncached(&mut self, w: &WordTree, n: &Subgroup) -> Result<PcgSeries> {
        if w.height() == 0 || w.defect() == 0 {
            return build_derived_to(self.ev, w.height(), Some(n), self.d);
        }
        let g = self.ev.group().clone();

        // every proper extension takes only w-values; together they reach L
        let mut acc: Option<PcgSeries> = None;
        for phi in proper_extensions(w)? {
            let s = self.build(&phi, n)?.reinterpret(w)?;
            acc = Some(match acc {
                None => s,
                Some(a) => join(&a, &s)?,
            });
        }
        let acc = acc.ok_or_else(|| Error::Invariant(format!("{w} has no proper extensions")))?;
        let l = acc.top().clone();

        let i = max_delta_level(w)?;
        let delta = WordTree::delta(i)?;
        let wg = self.ev.verbal_subgroup(w, Some(n))?;
        let di = g.derived_series().term(i).clone();
        if !g.commutator_subgroup(&wg, &di).is_subgroup_of(&l) {
            return Err(Error::Invariant(format!(
                "[{w}(G), delta_{i}(G)] is not contained in the join of the proper extensions"
            )));
        }

        let (p, q) = w
            .children(w.root())?
            .ok_or_else(|| Error::Invariant(format!("{w} has no children")))?;
        let alpha = w.subword(p)?;
        let beta = w.subword(q)?;
        let lifted = if is_constituent(&delta, &beta) {
            let s = self.build(&beta, &l)?;
            commutator_lift(self.ev, &s, &alpha, None, &l, LiftSide::Right)
        } else if is_constituent(&delta, &alpha) {
            let s = self.build(&alpha, &l)?;
            commutator_lift(self.ev, &s, &beta, None, &l, LiftSide::Left)
        } else {
            return Err(Error::Invariant(format!("delta_{i} is a constituent of neither side of {w}")));
        }
        .map_err(|e| match e {
            Error::Precondition(m) => Error::Invariant(format!("lift hypothesis failed while building {w}: {m}")),
            e => e,
        })?;
        acc.concat(lifted.reinterpret(w)?)
    }
}
