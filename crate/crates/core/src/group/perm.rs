use std::fmt;

use crate::error::{Error, Result};

/// A permutation of `{0, .., degree-1}`, stored as its image array.
///
/// Products act on the right: `a.then(b)` sends `i` to `b[a[i]]`, and
/// commutators are `[a, b] = a^-1 b^-1 a b`. The derived ordering is
/// lexicographic on image arrays; the identity is the least element.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(Error::arg(format!("{images:?} is not a bijection on 0..{n}")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from disjoint 0-based cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            for (k, &p) in cycle.iter().enumerate() {
                if p >= degree {
                    return Err(Error::arg(format!("point {} outside degree {degree}", p + 1)));
                }
                if used[p] {
                    return Err(Error::arg(format!("point {} appears twice; cycles must be disjoint", p + 1)));
                }
                used[p] = true;
                images[p] = cycle[(k + 1) % cycle.len()] as u32;
            }
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &p)| i as u32 == p)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Permutation {
            images: self.images.iter().map(|&i| other.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.images.len()];
        for (i, &p) in self.images.iter().enumerate() {
            images[p as usize] = i as u32;
        }
        Permutation { images }
    }

    pub fn commutator(&self, other: &Permutation) -> Permutation {
        self.inverse().then(&other.inverse()).then(self).then(other)
    }

    /// `g^-1 self g`
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        g.inverse().then(self).then(g)
    }

    /// Disjoint cycles of length at least two, 0-based, each starting at its
    /// least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p);
                p = self.apply(p);
            }
            out.push(cycle);
        }
        out
    }
}

/// 1-based cycle notation, `()` for the identity.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (k, p) in c.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", p + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{}", self)
    }
}

/// Parses 1-based cycle notation such as `(1 2 3)(4 5)` or `()`.
pub fn parse_cycles(text: &str, degree: usize) -> Result<Permutation> {
    let mut cycles = Vec::new();
    let mut rest = text.trim();
    if rest.is_empty() {
        return Err(Error::arg("empty cycle notation"));
    }
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| Error::arg(format!("expected '(' at '{rest}'")))?;
        let close = body
            .find(')')
            .ok_or_else(|| Error::arg(format!("unclosed cycle '({body}'")))?;
        if body[..close].contains('(') {
            return Err(Error::arg(format!("unclosed cycle '({}'", &body[..close])));
        }
        let mut cycle = Vec::new();
        for tok in body[..close].split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()) {
            let p: usize = tok
                .parse()
                .map_err(|_| Error::arg(format!("bad point '{tok}'")))?;
            if p == 0 || p > degree {
                return Err(Error::arg(format!("point {p} outside 1..={degree}")));
            }
            cycle.push(p - 1);
        }
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
        rest = body[close + 1..].trim_start();
    }
    Permutation::from_cycles(degree, &cycles)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Permutation {
        parse_cycles(s, n).unwrap()
    }

    #[test]
    fn three_cycle_arithmetic() {
        let c = p("(1 2 3)", 3);
        assert_eq!(c.images(), &[1, 2, 0]);
        assert_eq!(c.inverse(), p("(1 3 2)", 3));
        assert!(c.then(&c.inverse()).is_identity());
        assert_eq!(c.to_string(), "(1 2 3)");
        assert_eq!(Permutation::identity(4).to_string(), "()");
    }

    #[test]
    fn right_action() {
        // (1 2) then (2 3): 1 -> 2 -> 3
        let a = p("(1 2)", 3);
        let b = p("(2 3)", 3);
        assert_eq!(a.then(&b).apply(0), 2);
        assert_eq!(a.then(&b), p("(1 3 2)", 3));
    }

    #[test]
    fn commutator_of_transpositions() {
        let a = p("(1 2)", 3);
        let b = p("(1 3)", 3);
        let c = a.commutator(&b);
        assert_eq!(c.cycles().len(), 1);
        assert_eq!(c.cycles()[0].len(), 3);
        assert_eq!(c.inverse(), b.commutator(&a));
    }

    #[test]
    fn cycle_parsing_errors() {
        assert!(parse_cycles("(1 2", 3).is_err());
        assert!(parse_cycles("(1 4)", 3).is_err());
        assert!(parse_cycles("(1 2)(2 3)", 3).is_err());
        assert!(parse_cycles("1 2", 3).is_err());
        assert!(parse_cycles("(0 1)", 3).is_err());
        assert!(parse_cycles("()", 3).unwrap().is_identity());
        assert_eq!(parse_cycles("(1 2)(3 4)", 4).unwrap().to_string(), "(1 2)(3 4)");
    }

    #[test]
    fn images_must_be_bijective() {
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_images(vec![2, 0, 1]).is_ok());
    }
}
