use std::fmt;

use serde::Serialize;

use super::series::PcgSeries;
use crate::error::Result;
use crate::eval::Evaluator;
use crate::group::{ElemId, Subgroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Condition {
    Normal,
    Abelian,
    P1,
    P2,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Normal => "normal",
            Condition::Abelian => "abelian",
            Condition::P1 => "P1",
            Condition::P2 => "P2",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcgFailure {
    /// `i` for a failure at `H_i`; 0 refers to the base.
    pub step: usize,
    pub condition: Condition,
    pub witness: Option<ElemId>,
}

/// Outcome of each condition at one step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StepOutcome {
    pub normal: bool,
    pub abelian: bool,
    pub p1: bool,
    pub p2: bool,
}

#[derive(Clone, Debug)]
pub struct PcgReport {
    pub ok: bool,
    pub failures: Vec<PcgFailure>,
    pub per_step: Vec<StepOutcome>,
}

/// Checks every step of `s`: `H_i` normal in `G`, `H_i / H_(i-1)` abelian,
/// `H_i = <S_i> H_(i-1)`, and every power of every witness is a value of the
/// word modulo `H_(i-1)`.
pub fn verify_pcg(s: &PcgSeries) -> Result<PcgReport> {
    verify_pcg_with(&Evaluator::new(s.group().clone()), s)
}

pub fn verify_pcg_with(ev: &Evaluator, s: &PcgSeries) -> Result<PcgReport> {
    let g = s.group();
    let mut failures = Vec::new();
    let mut per_step = Vec::with_capacity(s.len());
    if !s.base().is_normal() {
        failures.push(PcgFailure {
            step: 0,
            condition: Condition::Normal,
            witness: non_normal_witness(s.base()),
        });
    }
    for (k, step) in s.steps().iter().enumerate() {
        let i = k + 1;
        let prev = s.term(k);
        let cur = &step.subgroup;
        let mut outcome = StepOutcome {
            normal: true,
            abelian: true,
            p1: true,
            p2: true,
        };

        if !cur.is_normal() {
            outcome.normal = false;
            failures.push(PcgFailure {
                step: i,
                condition: Condition::Normal,
                witness: non_normal_witness(cur),
            });
        }

        let derived = g.commutator_subgroup(cur, cur);
        if let Some(&x) = derived.members().iter().find(|&&x| !prev.contains(x)) {
            outcome.abelian = false;
            failures.push(PcgFailure {
                step: i,
                condition: Condition::Abelian,
                witness: Some(x),
            });
        }

        let generated = prev.extend(step.witnesses.iter().copied());
        if generated != *cur {
            outcome.p1 = false;
            let witness = step
                .witnesses
                .iter()
                .copied()
                .find(|&x| !cur.contains(x))
                .or_else(|| cur.members().iter().copied().find(|&x| !generated.contains(x)));
            failures.push(PcgFailure {
                step: i,
                condition: Condition::P1,
                witness,
            });
        }

        // a non-normal H_(i-1) has already failed; it cannot serve as a modulus
        if prev.is_normal() {
            let values = ev.value_set(s.word(), Some(prev))?;
            let cosets = ev.coset_map(prev);
            'witness: for &x in &step.witnesses {
                let order = g.element_order(x);
                let mut p = ElemId::IDENTITY;
                for _ in 0..order {
                    if !values.contains_rep(cosets.rep(p)) {
                        outcome.p2 = false;
                        failures.push(PcgFailure {
                            step: i,
                            condition: Condition::P2,
                            witness: Some(x),
                        });
                        continue 'witness;
                    }
                    p = g.mul(p, x);
                }
            }
        } else {
            outcome.p2 = false;
        }
        per_step.push(outcome);
    }
    Ok(PcgReport {
        ok: failures.is_empty(),
        failures,
        per_step,
    })
}

fn non_normal_witness(h: &Subgroup) -> Option<ElemId> {
    let g = h.group();
    h.generators()
        .iter()
        .flat_map(|&x| g.generator_ids().iter().map(move |&y| g.conj(x, y)))
        .find(|&c| !h.contains(c))
}
