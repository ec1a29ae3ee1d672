//! The built-in groups and catalogs read from group files.

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{load_group_file, parse_group_def, GroupDef, PermGroup};

/// Built-in groups as `(file name, contents)`, in catalog order.
const BUILTIN: &[(&str, &str)] = &[
    ("C2.grp", include_str!("../data/catalog/C2.grp")),
    ("C3.grp", include_str!("../data/catalog/C3.grp")),
    ("C4.grp", include_str!("../data/catalog/C4.grp")),
    ("C5.grp", include_str!("../data/catalog/C5.grp")),
    ("C6.grp", include_str!("../data/catalog/C6.grp")),
    ("S3.grp", include_str!("../data/catalog/S3.grp")),
    ("D4.grp", include_str!("../data/catalog/D4.grp")),
    ("Q8.grp", include_str!("../data/catalog/Q8.grp")),
    ("A4.grp", include_str!("../data/catalog/A4.grp")),
    ("S4.grp", include_str!("../data/catalog/S4.grp")),
    ("S3xS3.grp", include_str!("../data/catalog/S3xS3.grp")),
    ("A5.grp", include_str!("../data/catalog/A5.grp")),
    ("S5.grp", include_str!("../data/catalog/S5.grp")),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Builtin,
    File(PathBuf),
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Builtin => f.write_str("builtin"),
            Source::File(p) => write!(f, "{}", p.display()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub source: Source,
    pub group: Arc<PermGroup>,
    pub soluble: bool,
    pub derived_length: Option<usize>,
}

impl CatalogEntry {
    fn new(def: GroupDef, fallback_name: &str, source: Source) -> Result<Self> {
        let name = def.name.clone().unwrap_or_else(|| fallback_name.to_string());
        let def = GroupDef {
            name: Some(name.clone()),
            ..def
        };
        let group = def.build()?;
        let ds = group.derived_series();
        Ok(CatalogEntry {
            name,
            source,
            soluble: ds.is_soluble(),
            derived_length: ds.derived_length,
            group,
        })
    }
}

/// The built-in groups, in a fixed order.
pub fn builtin_catalog() -> Result<Vec<CatalogEntry>> {
    BUILTIN
        .iter()
        .map(|(file, text)| {
            let def = parse_group_def(text, file)?;
            CatalogEntry::new(def, stem(Path::new(file)), Source::Builtin)
        })
        .collect()
}

/// A built-in group by name, ignoring ASCII case.
pub fn builtin(name: &str) -> Result<CatalogEntry> {
    builtin_catalog()?
        .into_iter()
        .find(|e| e.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| {
            let names: Vec<_> = BUILTIN.iter().map(|(f, _)| stem(Path::new(f))).collect();
            Error::arg(format!("unknown group {name:?}; built-in groups: {}", names.join(", ")))
        })
}

/// The built-ins (optionally) followed by one entry per file. Entries
/// without a `name` line are named after the file stem. Names must be
/// unique.
pub fn load_catalog(paths: &[PathBuf], include_builtin: bool) -> Result<Vec<CatalogEntry>> {
    let mut entries = if include_builtin { builtin_catalog()? } else { Vec::new() };
    for path in paths {
        let def = load_group_file(path)?;
        entries.push(CatalogEntry::new(def, stem(path), Source::File(path.clone()))?);
    }
    let mut seen = HashSet::new();
    for e in &entries {
        if !seen.insert(e.name.as_str()) {
            return Err(Error::arg(format!("duplicate group name {:?} in catalog ({})", e.name, e.source)));
        }
    }
    Ok(entries)
}

/// The `.grp` files directly inside `dir`, sorted by path.
pub fn group_files_in(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir)? {
        let p = entry?.path();
        if p.is_file() && p.extension().is_some_and(|x| x == "grp") {
            out.push(p);
        }
    }
    out.sort();
    Ok(out)
}

fn stem(p: &Path) -> &str {
    p.file_stem().and_then(|s| s.to_str()).unwrap_or("group")
}
