use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{ElemId, PermGroup, Subgroup};
use crate::word::{is_extension, WordTree};

#[derive(Clone, Debug)]
pub struct PcgStep {
    pub subgroup: Subgroup,
    /// Word values generating this step over the previous subgroup.
    pub witnesses: Vec<ElemId>,
}

/// An ascending chain `base = H_0 <= H_1 <= ... <= H_n` of normal
/// subgroups, each step carrying the value set `S_i` with
/// `H_i = <S_i> H_(i-1)`.
///
/// Steps may repeat the previous subgroup; constructors never drop them,
/// so the length of a constructed series depends only on the word and the
/// derived length of the group.
#[derive(Clone, Debug)]
pub struct PcgSeries {
    group: Arc<PermGroup>,
    word: WordTree,
    base: Subgroup,
    steps: Vec<PcgStep>,
}

impl PcgSeries {
    pub fn new(word: WordTree, base: Subgroup) -> Self {
        PcgSeries {
            group: base.group().clone(),
            word,
            base,
            steps: Vec::new(),
        }
    }

    pub fn push(&mut self, subgroup: Subgroup, mut witnesses: Vec<ElemId>) {
        witnesses.sort();
        witnesses.dedup();
        self.steps.push(PcgStep { subgroup, witnesses });
    }

    pub fn group(&self) -> &Arc<PermGroup> {
        &self.group
    }

    pub fn word(&self) -> &WordTree {
        &self.word
    }

    pub fn base(&self) -> &Subgroup {
        &self.base
    }

    pub fn steps(&self) -> &[PcgStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn top(&self) -> &Subgroup {
        self.steps.last().map_or(&self.base, |s| &s.subgroup)
    }

    /// `H_i`, with `H_0` the base.
    pub fn term(&self, i: usize) -> &Subgroup {
        if i == 0 {
            &self.base
        } else {
            &self.steps[i - 1].subgroup
        }
    }

    /// Reads the series as one for `omega`. Valid when this series' word
    /// extends `omega`, since then every value of the former is a value of
    /// the latter.
    pub fn reinterpret(mut self, omega: &WordTree) -> Result<Self> {
        if !is_extension(&self.word, omega) {
            return Err(Error::arg(format!("{} does not extend {omega}", self.word)));
        }
        self.word = omega.clone();
        Ok(self)
    }

    /// Appends `next`, which must start where `self` ends.
    pub fn concat(mut self, next: PcgSeries) -> Result<Self> {
        self.check_compatible(&next)?;
        if next.base != *self.top() {
            return Err(Error::arg(format!(
                "cannot concatenate: series ends at order {} but the next starts at order {}",
                self.top().order(),
                next.base.order()
            )));
        }
        self.steps.extend(next.steps);
        Ok(self)
    }

    fn check_compatible(&self, other: &PcgSeries) -> Result<()> {
        if !Arc::ptr_eq(&self.group, &other.group) {
            return Err(Error::arg("series live in different groups"));
        }
        if self.word != other.word {
            return Err(Error::arg(format!("series words differ: {} vs {}", self.word, other.word)));
        }
        Ok(())
    }
}

/// Series from the common base to `K L`: the steps of `a`, then each
/// subgroup of `b` multiplied by `K`, the top of `a`.
pub fn join(a: &PcgSeries, b: &PcgSeries) -> Result<PcgSeries> {
    a.check_compatible(b)?;
    if a.base != b.base {
        return Err(Error::arg("joined series must share their base"));
    }
    let top = a.top().clone();
    let g = a.group.clone();
    let mut out = a.clone();
    for step in &b.steps {
        out.steps.push(PcgStep {
            subgroup: g.product(&step.subgroup, &top),
            witnesses: step.witnesses.clone(),
        });
    }
    Ok(out)
}
