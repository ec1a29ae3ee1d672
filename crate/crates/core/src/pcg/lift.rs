use super::series::PcgSeries;
use crate::error::{Error, Result};
use crate::eval::Evaluator;
use crate::group::{ElemId, Subgroup};
use crate::word::WordTree;

/// Which operand of the commutator the lifted series belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftSide {
    /// The series is for `alpha`; the result is for `[alpha, other]`.
    Left,
    /// The series is for `beta`; the result is for `[other, beta]`.
    Right,
}

/// Search budget for naming a violating triple in an error message.
const TRIPLE_SEARCH_BUDGET: usize = 2_000_000;

/// Takes commutators of a series from `K` to `L` with `B = other(domain)`,
/// giving a series from `[K, B] M` to `[L, B] M` for the commutator word.
/// Each witness set becomes `{[x, y] : x in S_i, y in values of other}`
/// (operands swapped for [`LiftSide::Right`]).
///
/// Requires `[L, B, L] <= M`. `domain` restricts the elements substituted
/// into `other`; `None` means the whole group.
pub fn commutator_lift(
    ev: &Evaluator,
    s: &PcgSeries,
    other: &WordTree,
    domain: Option<&Subgroup>,
    modulus: &Subgroup,
    side: LiftSide,
) -> Result<PcgSeries> {
    let g = ev.group().clone();
    if !modulus.is_normal() {
        return Err(Error::arg("lift modulus must be normal"));
    }
    let (other_values, b) = match domain {
        Some(d) => (ev.value_set_over(other, d, None)?, ev.verbal_subgroup_over(other, d, None)?),
        None => (ev.value_set(other, None)?, ev.verbal_subgroup(other, None)?),
    };

    let top = s.top();
    let lb = g.commutator_subgroup(top, &b);
    let lbl = g.commutator_subgroup(&lb, top);
    if !lbl.is_subgroup_of(modulus) {
        return Err(Error::Precondition(violating_triple(top, &b, modulus)));
    }

    let word = match side {
        LiftSide::Left => WordTree::commutator(s.word(), other),
        LiftSide::Right => WordTree::commutator(other, s.word()),
    };
    let lift = |h: &Subgroup| g.product(&g.commutator_subgroup(h, &b), modulus);
    let mut out = PcgSeries::new(word, lift(s.base()));
    let n = g.order();
    for step in s.steps() {
        let mut mask = vec![false; n];
        for &x in &step.witnesses {
            for &y in other_values.values() {
                let c = match side {
                    LiftSide::Left => g.comm(x, y),
                    LiftSide::Right => g.comm(y, x),
                };
                mask[c.index()] = true;
            }
        }
        let witnesses = mask
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| ElemId(i as u32))
            .collect();
        out.push(lift(&step.subgroup), witnesses);
    }
    Ok(out)
}

fn violating_triple(l: &Subgroup, b: &Subgroup, m: &Subgroup) -> String {
    let g = l.group();
    let mut tried = 0usize;
    for &x in l.members() {
        for &y in b.members() {
            let c = g.comm(x, y);
            for &z in l.members() {
                tried += 1;
                if tried > TRIPLE_SEARCH_BUDGET {
                    return "[L, B, L] is not contained in the modulus (search budget exhausted before naming a triple)".into();
                }
                if !m.contains(g.comm(c, z)) {
                    return format!(
                        "[L, B, L] is not contained in the modulus: [[{}, {}], {}] lies outside it",
                        g.perm(x),
                        g.perm(y),
                        g.perm(z)
                    );
                }
            }
        }
    }
    "[L, B, L] is not contained in the modulus".into()
}
