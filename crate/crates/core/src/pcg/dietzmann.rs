use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{ElemId, PermGroup};

/// Exponents `r_1..r_n` with `y = c_1^r_1 ... c_n^r_n`, for `X = [c_1..c_n]`
/// a normal subset of `G` and `y` in `<X>`. Each `r_i` lies in
/// `0..ord(c_i)`; among all solutions the one chosen takes the least
/// exponent for `c_n`, then for `c_(n-1)`, and so on.
pub fn dietzmann_decompose(g: &Arc<PermGroup>, xs: &[ElemId], y: ElemId) -> Result<Vec<u64>> {
    if xs.is_empty() {
        return Err(Error::arg("empty subset"));
    }
    let mut sorted = xs.to_vec();
    sorted.sort();
    for &x in xs {
        for &t in g.generator_ids() {
            if sorted.binary_search(&g.conj(x, t)).is_err() {
                return Err(Error::arg(format!(
                    "subset is not normal: {} conjugated by {} leaves it",
                    g.perm(x),
                    g.perm(t)
                )));
            }
        }
    }
    if !g.subgroup(xs.iter().copied()).contains(y) {
        return Err(Error::arg(format!("{} is not in the subgroup generated by the subset", g.perm(y))));
    }

    // reach[i]: products c_1^r_1 ... c_i^r_i
    let size = g.order();
    let mut reach = vec![vec![false; size]];
    reach[0][ElemId::IDENTITY.index()] = true;
    for &c in xs {
        let prev = reach.last().unwrap();
        let mut next = vec![false; size];
        let ord = g.element_order(c);
        for (z, _) in prev.iter().enumerate().filter(|(_, &b)| b) {
            let mut p = ElemId(z as u32);
            for _ in 0..ord {
                next[p.index()] = true;
                p = g.mul(p, c);
            }
        }
        reach.push(next);
    }
    if !reach[xs.len()][y.index()] {
        return Err(Error::Invariant(format!("{} is not a product of powers in the given order", g.perm(y))));
    }

    let mut r = vec![0u64; xs.len()];
    let mut cur = y;
    for i in (0..xs.len()).rev() {
        let inv = g.inv(xs[i]);
        let mut z = cur;
        let mut e = 0u64;
        while !reach[i][z.index()] {
            z = g.mul(z, inv);
            e += 1;
        }
        r[i] = e;
        cur = z;
    }
    Ok(r)
}
