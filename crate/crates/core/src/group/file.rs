//! Plain-text group definitions:
//!
//! ```text
//! # comment
//! name S3
//! degree 3
//! gen (1 2 3)
//! gen (1 2)
//! ```
//!
//! Points are 1-based; `gen ()` is the identity.

use std::path::Path;
use std::sync::Arc;

use super::perm::{parse_cycles, Permutation};
use super::perm_group::{PermGroup, DEFAULT_ORDER_CAP};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupDef {
    pub name: Option<String>,
    pub degree: usize,
    pub generators: Vec<Permutation>,
}

impl GroupDef {
    pub fn build(&self) -> Result<Arc<PermGroup>> {
        self.build_capped(DEFAULT_ORDER_CAP)
    }

    pub fn build_capped(&self, cap: usize) -> Result<Arc<PermGroup>> {
        PermGroup::with_cap(self.name.clone(), self.degree, self.generators.clone(), cap)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(n) = &self.name {
            out.push_str(&format!("name {n}\n"));
        }
        out.push_str(&format!("degree {}\n", self.degree));
        for g in &self.generators {
            out.push_str(&format!("gen {g}\n"));
        }
        out
    }
}

pub fn parse_group_def(text: &str, source_name: &str) -> Result<GroupDef> {
    let err = |line: usize, message: String| Error::GroupFile {
        source_name: source_name.to_string(),
        line,
        message,
    };
    let mut name = None;
    let mut degree: Option<usize> = None;
    let mut pending: Vec<(usize, String)> = Vec::new();

    for (k, raw) in text.lines().enumerate() {
        let lineno = k + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match key {
            "name" => {
                if rest.is_empty() {
                    return Err(err(lineno, "empty name".into()));
                }
                if name.is_some() {
                    return Err(err(lineno, "duplicate name line".into()));
                }
                name = Some(rest.to_string());
            }
            "degree" => {
                if degree.is_some() {
                    return Err(err(lineno, "duplicate degree line".into()));
                }
                let d: usize = rest
                    .parse()
                    .map_err(|_| err(lineno, format!("bad degree '{rest}'")))?;
                if d == 0 {
                    return Err(err(lineno, "degree must be positive".into()));
                }
                degree = Some(d);
            }
            "gen" => pending.push((lineno, rest.to_string())),
            other => return Err(err(lineno, format!("unknown directive '{other}'"))),
        }
    }

    let degree = degree.ok_or_else(|| err(0, "missing degree line".into()))?;
    let mut generators = Vec::with_capacity(pending.len());
    for (lineno, text) in pending {
        let p = parse_cycles(&text, degree).map_err(|e| match e {
            Error::Argument(m) => err(lineno, m),
            other => other,
        })?;
        generators.push(p);
    }
    Ok(GroupDef {
        name,
        degree,
        generators,
    })
}

pub fn load_group_file(path: &Path) -> Result<GroupDef> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_group_def(&text, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_s3() {
        let def = parse_group_def("# S3\nname S3\ndegree 3\ngen (1 2 3)\ngen (1 2) # transposition\n", "s3.grp").unwrap();
        assert_eq!(def.name.as_deref(), Some("S3"));
        assert_eq!(def.generators.len(), 2);
        assert_eq!(def.build().unwrap().order(), 6);
        let again = parse_group_def(&def.to_text(), "x").unwrap();
        assert_eq!(again, def);
    }

    #[test]
    fn generators_may_precede_degree() {
        let def = parse_group_def("gen (1 2)\ndegree 2\n", "x").unwrap();
        assert_eq!(def.build().unwrap().order(), 2);
    }

    #[test]
    fn identity_generator() {
        let def = parse_group_def("degree 4\ngen ()\n", "x").unwrap();
        assert_eq!(def.build().unwrap().order(), 1);
    }

    #[test]
    fn errors_name_the_line() {
        match parse_group_def("degree 3\ngen (1 2 3)\ngen (1 2\n", "bad.grp") {
            Err(Error::GroupFile { line, source_name, .. }) => {
                assert_eq!(line, 3);
                assert_eq!(source_name, "bad.grp");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_group_def("gen (1 2)\n", "x"), Err(Error::GroupFile { line: 0, .. })));
        assert!(matches!(parse_group_def("degree 2\nfoo\n", "x"), Err(Error::GroupFile { line: 2, .. })));
        assert!(matches!(parse_group_def("degree 2\ngen (1 3)\n", "x"), Err(Error::GroupFile { line: 2, .. })));
        assert!(matches!(parse_group_def("degree x\n", "x"), Err(Error::GroupFile { line: 1, .. })));
    }
}
