use std::sync::Arc;

use super::lift::{commutator_lift, LiftSide};
use super::series::PcgSeries;
use crate::error::{Error, Result};
use crate::eval::Evaluator;
use crate::group::{PermGroup, Subgroup};
use crate::word::WordTree;

/// Series from `N` to `G^(i) N` for the derived word of height `i`, of
/// length exactly `2^d - 2^i` (0 when `i >= d`), where `d` is the derived
/// length of `G` (of `G/N` if `G` itself is not soluble).
pub fn build_derived(g: &Arc<PermGroup>, i: usize, modulus: Option<&Subgroup>) -> Result<PcgSeries> {
    build_derived_with(&Evaluator::new(g.clone()), i, modulus)
}

pub fn build_derived_with(ev: &Evaluator, i: usize, modulus: Option<&Subgroup>) -> Result<PcgSeries> {
    let d = derived_length_for(ev, modulus)?;
    build_derived_to(ev, i, modulus, d)
}

pub(crate) fn derived_length_for(ev: &Evaluator, modulus: Option<&Subgroup>) -> Result<usize> {
    let g = ev.group();
    if let Some(d) = g.derived_series().derived_length {
        return Ok(d);
    }
    if let Some(n) = modulus {
        if let Some(d) = g.derived_series_mod(n).derived_length {
            return Ok(d);
        }
    }
    Err(Error::arg(format!("{} is not soluble", g.display_name())))
}

/// As [`build_derived`] with the padding length `d` supplied. `G^(d)` must
/// lie in `N`.
pub(crate) fn build_derived_to(ev: &Evaluator, i: usize, modulus: Option<&Subgroup>, d: usize) -> Result<PcgSeries> {
    let g = ev.group();
    let n = modulus.cloned().unwrap_or_else(|| g.trivial());
    let word = WordTree::delta(i)?;
    let series = g.derived_series_mod(&n);
    if !series.term(d).is_subgroup_of(&n) {
        return Err(Error::arg(format!("derived length bound {d} does not reach the modulus")));
    }
    let mut out = PcgSeries::new(word.clone(), n.clone());
    for j in (i..d).rev() {
        // G^(j) is abelian modulo G^(j+1) N
        let piece = abelian_series(ev, &g.whole(), j, series.term(j + 1))?;
        out = out.concat(piece.reinterpret(&word)?)?;
    }
    Ok(out)
}

/// For `X` normal in `G` with `X^(j)` abelian modulo `N`: a series of
/// length `2^j` from `N` to `X^(j) N` for the derived word of height `j`,
/// whose witnesses are values of that word on elements of `X`.
///
/// Every subgroup produced is a product of iterated commutators of derived
/// terms of `X` with `N`, hence normal in `G`.
pub(crate) fn abelian_series(ev: &Evaluator, x: &Subgroup, j: usize, n: &Subgroup) -> Result<PcgSeries> {
    let g = ev.group();
    if j == 0 {
        if !x.is_abelian_mod(n) {
            return Err(Error::Invariant("abelian section expected in derived-word series".into()));
        }
        let mut s = PcgSeries::new(WordTree::indeterminate(), n.clone());
        s.push(g.product(x, n), x.members().to_vec());
        return Ok(s);
    }
    let prev_word = WordTree::delta(j - 1)?;
    let x1 = g.commutator_subgroup(x, x);

    // N .. [X^(j), X^(j-1)] N, from the series for X' lifted by X^(j-1)
    let inner = abelian_series(ev, &x1, j - 1, n)?;
    let first = commutator_lift(ev, &inner, &prev_word, Some(x), n, LiftSide::Left)?;

    // [X^(j), X^(j-1)] N .. X^(j) N, from the series over X^(j) N lifted the same way
    let m = first.top().clone();
    let xj_n = inner.top().clone();
    let outer = abelian_series(ev, x, j - 1, &xj_n)?;
    let second = commutator_lift(ev, &outer, &prev_word, Some(x), &m, LiftSide::Left)?;

    if *second.base() != m {
        return Err(Error::Invariant("lifted derived-word pieces do not meet".into()));
    }
    first.concat(second)
}
