use super::series::PcgSeries;
use crate::error::{Error, Result};
use crate::eval::Evaluator;
use crate::group::{ElemId, Subgroup};

/// A chain `N = G_0 < G_1 < ... < G_k = top` in which every `G_j / G_(j-1)`
/// is cyclic, generated by the image of `generators[j-1]`.
#[derive(Clone, Debug)]
pub struct CyclicRefinement {
    pub chain: Vec<Subgroup>,
    pub generators: Vec<ElemId>,
}

impl CyclicRefinement {
    /// Number of nontrivial cyclic sections.
    pub fn k(&self) -> usize {
        self.generators.len()
    }

    /// `|G_j / G_(j-1)|` for each section.
    pub fn section_orders(&self) -> Vec<usize> {
        self.chain.windows(2).map(|w| w[1].order() / w[0].order()).collect()
    }

    /// Sum of the section orders, bounded by `m + k - 1` for a series built
    /// from word values.
    pub fn section_sum(&self) -> usize {
        self.section_orders().iter().sum()
    }
}

/// Refines each step of `s` into cyclic sections: repeatedly adjoin the
/// least witness not yet in the current subgroup. Every nontrivial coset of
/// every section is audited to contain a value of the word.
pub fn refine_cyclic(s: &PcgSeries) -> Result<CyclicRefinement> {
    refine_cyclic_with(&Evaluator::new(s.group().clone()), s)
}

pub fn refine_cyclic_with(ev: &Evaluator, s: &PcgSeries) -> Result<CyclicRefinement> {
    let g = s.group();
    let values = ev.value_set(s.word(), None)?;
    let mut chain = vec![s.base().clone()];
    let mut generators = Vec::new();
    for step in s.steps() {
        let mut c = chain.last().unwrap().clone();
        // witnesses are sorted, so the first missing one is the least
        while c != step.subgroup {
            let x = step
                .witnesses
                .iter()
                .copied()
                .find(|&x| !c.contains(x))
                .ok_or_else(|| Error::Invariant("witnesses do not generate the step".into()))?;
            let next = c.extend([x]);
            if !next.is_subgroup_of(&step.subgroup) {
                return Err(Error::Invariant("witness lies outside its step".into()));
            }
            let r = next.order() / c.order();
            let inv = g.inv(x);
            let mut shift = ElemId::IDENTITY;
            for n in 1..r {
                shift = g.mul(shift, inv);
                // some value v with x^(-n) v in C, i.e. v in x^n C
                if !values.values().iter().any(|&v| c.contains(g.mul(shift, v))) {
                    return Err(Error::Invariant(format!(
                        "coset {}^{n} of a cyclic section holds no word value",
                        g.perm(x)
                    )));
                }
            }
            generators.push(x);
            chain.push(next.clone());
            c = next;
        }
    }
    Ok(CyclicRefinement { chain, generators })
}
