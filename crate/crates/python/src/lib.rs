//! Python bindings: `Word`, `Group` and `Series`, plus the checks and the
//! suite runner returning plain dicts.

use std::path::PathBuf;
use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;

use verbal_core::catalog::{builtin, builtin_catalog, load_catalog};
use verbal_core::eval::Evaluator;
use verbal_core::group::{parse_cycles, ElemId, GroupDef, PermGroup};
use verbal_core::parse::{render, RenderMode};
use verbal_core::pcg::{self, PcgSeries};
use verbal_core::report::{to_json, SeriesRecord, SuiteReport};
use verbal_core::verify::{self, CheckKind};
use verbal_core::word::{self, Section, WordTree};
use verbal_core::Error;

create_exception!(verbal, ResourceError, PyRuntimeError, "A configured size cap was exceeded.");

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Resource(m) => ResourceError::new_err(m),
        Error::Invariant(_) => PyRuntimeError::new_err(e.to_string()),
        e => PyValueError::new_err(e.to_string()),
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for verbal_core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

/// Parses a JSON document into Python objects.
fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

/// An outer commutator word, e.g. `Word("[[x1,x2],x3]")` or `Word("g3")`.
#[pyclass(name = "Word", module = "verbal", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyWord {
    inner: WordTree,
}

#[pymethods]
impl PyWord {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyWord {
            inner: text.parse().py()?,
        })
    }

    #[staticmethod]
    fn gamma(i: usize) -> PyResult<Self> {
        Ok(PyWord {
            inner: WordTree::gamma(i).py()?,
        })
    }

    #[staticmethod]
    fn delta(i: usize) -> PyResult<Self> {
        Ok(PyWord {
            inner: WordTree::delta(i).py()?,
        })
    }

    #[getter]
    fn height(&self) -> usize {
        self.inner.height()
    }

    #[getter]
    fn defect(&self) -> u128 {
        self.inner.defect()
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn indeterminate_count(&self) -> usize {
        self.inner.indeterminate_count()
    }

    fn is_derived_word(&self) -> bool {
        self.inner.is_derived_word()
    }

    /// `"bracket"` or `"tree"`.
    #[pyo3(signature = (mode = "bracket"))]
    fn render(&self, mode: &str) -> PyResult<String> {
        let mode: RenderMode = mode.parse().py()?;
        Ok(render(&self.inner, mode))
    }

    /// Whether this word is an extension of `other`.
    fn extends(&self, other: &PyWord) -> bool {
        word::is_extension(&self.inner, &other.inner)
    }

    /// Whether `other` occurs as a subword of this word.
    fn contains(&self, other: &PyWord) -> bool {
        word::is_constituent(&other.inner, &self.inner)
    }

    fn proper_extensions(&self) -> PyResult<Vec<PyWord>> {
        Ok(word::proper_extensions(&self.inner)
            .py()?
            .into_iter()
            .map(|inner| PyWord { inner })
            .collect())
    }

    fn max_delta_level(&self) -> PyResult<usize> {
        word::max_delta_level(&self.inner).py()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Word('{}')", self.inner)
    }
}

/// A finite permutation group. Elements are written in 1-based cycle
/// notation, e.g. `"(1 2 3)(4 5)"`.
#[pyclass(name = "Group", module = "verbal", frozen)]
struct PyGroup {
    ev: Arc<Evaluator>,
}

impl PyGroup {
    fn from_group(g: Arc<PermGroup>) -> Self {
        PyGroup {
            ev: Arc::new(Evaluator::new(g)),
        }
    }

    fn group(&self) -> &Arc<PermGroup> {
        self.ev.group()
    }

    fn element(&self, text: &str) -> PyResult<ElemId> {
        let g = self.group();
        let p = parse_cycles(text, g.degree()).py()?;
        g.id_of(&p)
            .ok_or_else(|| PyValueError::new_err(format!("{text} is not in {}", g.display_name())))
    }

    fn show(&self, xs: &[ElemId]) -> Vec<String> {
        xs.iter().map(|&x| self.group().perm(x).to_string()).collect()
    }
}

#[pymethods]
impl PyGroup {
    /// A built-in group by name (`C2`..`C6`, `S3`, `D4`, `Q8`, `A4`, `S4`,
    /// `S3xS3`, `A5`, `S5`).
    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        Ok(Self::from_group(builtin(name).py()?.group))
    }

    #[staticmethod]
    fn from_file(path: PathBuf) -> PyResult<Self> {
        let mut entries = load_catalog(&[path], false).py()?;
        Ok(Self::from_group(entries.remove(0).group))
    }

    #[staticmethod]
    #[pyo3(signature = (degree, generators, name = None))]
    fn from_generators(degree: usize, generators: Vec<String>, name: Option<String>) -> PyResult<Self> {
        let generators = generators
            .iter()
            .map(|s| parse_cycles(s, degree))
            .collect::<verbal_core::Result<Vec<_>>>()
            .py()?;
        let def = GroupDef {
            name,
            degree,
            generators,
        };
        Ok(Self::from_group(def.build().py()?))
    }

    #[getter]
    fn name(&self) -> String {
        self.group().display_name()
    }

    #[getter]
    fn order(&self) -> usize {
        self.group().order()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.group().degree()
    }

    /// `None` for an insoluble group.
    #[getter]
    fn derived_length(&self) -> Option<usize> {
        self.group().derived_series().derived_length
    }

    fn is_soluble(&self) -> bool {
        self.group().derived_series().is_soluble()
    }

    /// Values of `word`; coset representatives modulo `G^(mod_derived)`
    /// when given.
    #[pyo3(signature = (word, mod_derived = None))]
    fn values(&self, word: &PyWord, mod_derived: Option<usize>) -> PyResult<Vec<String>> {
        let n = mod_derived.map(|j| self.group().derived_series().term(j).clone());
        let vs = self.ev.value_set(&word.inner, n.as_ref()).py()?;
        Ok(self.show(vs.values()))
    }

    /// `|G_w|`, the number of values of `word`.
    #[pyo3(signature = (word, mod_derived = None))]
    fn m(&self, word: &PyWord, mod_derived: Option<usize>) -> PyResult<usize> {
        let n = mod_derived.map(|j| self.group().derived_series().term(j).clone());
        Ok(self.ev.value_set(&word.inner, n.as_ref()).py()?.m())
    }

    /// `|w(G)|`, counted modulo `G^(mod_derived)` when given.
    #[pyo3(signature = (word, mod_derived = None))]
    fn verbal_order(&self, word: &PyWord, mod_derived: Option<usize>) -> PyResult<usize> {
        let n = mod_derived.map(|j| self.group().derived_series().term(j).clone());
        let v = self.ev.verbal_subgroup(&word.inner, n.as_ref()).py()?;
        Ok(v.order() / n.map_or(1, |n| n.order()))
    }

    fn width(&self, word: &PyWord) -> PyResult<usize> {
        self.ev.width(&word.inner, None).py()
    }

    /// Exponents `r` with `y = c_1^r_1 ... c_n^r_n` over the normal subset `xs`.
    fn dietzmann(&self, xs: Vec<String>, y: &str) -> PyResult<Vec<u64>> {
        let xs = xs.iter().map(|s| self.element(s)).collect::<PyResult<Vec<_>>>()?;
        let y = self.element(y)?;
        pcg::dietzmann_decompose(self.group(), &xs, y).py()
    }

    fn __repr__(&self) -> String {
        format!("Group('{}', order={})", self.name(), self.order())
    }
}

/// A power-closed generated series for a word.
#[pyclass(name = "Series", module = "verbal", frozen)]
struct PySeries {
    ev: Arc<Evaluator>,
    inner: PcgSeries,
}

#[pymethods]
impl PySeries {
    #[getter]
    fn word(&self) -> PyWord {
        PyWord {
            inner: self.inner.word().clone(),
        }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// Orders of `H_0, H_1, ..., H_n`.
    fn orders(&self) -> Vec<usize> {
        std::iter::once(self.inner.base().order())
            .chain(self.inner.steps().iter().map(|s| s.subgroup.order()))
            .collect()
    }

    fn witness_counts(&self) -> Vec<usize> {
        self.inner.steps().iter().map(|s| s.witnesses.len()).collect()
    }

    /// Dict with `ok`, `failures` and per-step outcomes.
    fn verify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let report = pcg::verify_pcg_with(&self.ev, &self.inner).py()?;
        json_to_py(py, &to_json(&SeriesRecord::new(&self.inner, &report)).py()?)
    }

    /// `(generators, section_orders)` of the cyclic refinement.
    fn refine(&self) -> PyResult<(Vec<String>, Vec<usize>)> {
        let r = pcg::refine_cyclic_with(&self.ev, &self.inner).py()?;
        let g = self.ev.group();
        Ok((
            r.generators.iter().map(|&x| g.perm(x).to_string()).collect(),
            r.section_orders(),
        ))
    }
}

/// Series from 1 to `w(G)`.
#[pyfunction]
fn build(group: &PyGroup, word: &PyWord) -> PyResult<PySeries> {
    let inner = pcg::build_with(&group.ev, &word.inner, None).py()?;
    Ok(PySeries {
        ev: group.ev.clone(),
        inner,
    })
}

/// Series from 1 to `G^(i)` for the derived word of height `i`.
#[pyfunction]
fn build_derived(group: &PyGroup, i: usize) -> PyResult<PySeries> {
    let inner = pcg::build_derived_with(&group.ev, i, None).py()?;
    Ok(PySeries {
        ev: group.ev.clone(),
        inner,
    })
}

/// One check: `"symmetry"`, `"three-subgroup"` (with the leaves section and
/// `gamma`, default `[x1,x2]`), `"theorem-a"` or `"theorem-b"`.
#[pyfunction]
#[pyo3(signature = (kind, group, word, gamma = None))]
fn check<'py>(
    py: Python<'py>,
    kind: &str,
    group: &PyGroup,
    word: &PyWord,
    gamma: Option<&PyWord>,
) -> PyResult<Bound<'py, PyAny>> {
    let w = &word.inner;
    let r = match kind {
        "symmetry" => verify::check_symmetry_with(&group.ev, w),
        "three-subgroup" => {
            let gamma = match gamma {
                Some(g) => g.inner.clone(),
                None => WordTree::delta(1).py()?,
            };
            verify::check_three_subgroup_with(&group.ev, w, &gamma, &Section::leaves(w))
        }
        "theorem-a" => verify::check_theorem_a_with(&group.ev, w),
        "theorem-b" => verify::check_theorem_b_with(&group.ev, w),
        other => {
            let kinds: Vec<_> = CheckKind::ALL.iter().map(|k| k.subject()).collect();
            return Err(PyValueError::new_err(format!(
                "unknown check {other:?}; expected one of {}",
                kinds.join(", ")
            )));
        }
    };
    json_to_py(py, &to_json(&r).py()?)
}

/// Every check over `groups` (default: the built-in catalog) and `words`,
/// as the JSON report dict.
#[pyfunction]
#[pyo3(signature = (words, groups = None))]
fn suite<'py>(py: Python<'py>, words: Vec<PyRef<'py, PyWord>>, groups: Option<Vec<PyRef<'py, PyGroup>>>) -> PyResult<Bound<'py, PyAny>> {
    let groups: Vec<Arc<PermGroup>> = match groups {
        Some(gs) => gs.iter().map(|g| g.group().clone()).collect(),
        None => builtin_catalog().py()?.into_iter().map(|e| e.group).collect(),
    };
    let words: Vec<WordTree> = words.iter().map(|w| w.inner.clone()).collect();
    let reports = py.detach(|| verify::run_suite(&groups, &words));
    json_to_py(py, &SuiteReport::new(reports).to_json().py()?)
}

/// Names of the built-in groups in catalog order.
#[pyfunction]
fn catalog_names() -> PyResult<Vec<String>> {
    Ok(builtin_catalog().py()?.into_iter().map(|e| e.name).collect())
}

#[pymodule]
pub fn verbal(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ResourceError", m.py().get_type::<ResourceError>())?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyWord>()?;
    m.add_class::<PyGroup>()?;
    m.add_class::<PySeries>()?;
    m.add_function(wrap_pyfunction!(build, m)?)?;
    m.add_function(wrap_pyfunction!(build_derived, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(suite, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_names, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use pyo3::exceptions::PyValueError;

    #[test]
    fn error_mapping() {
        Python::attach(|py| {
            assert!(py_err(Error::Resource("cap".into())).is_instance_of::<ResourceError>(py));
            assert!(py_err(Error::Resource("cap".into())).is_instance_of::<PyRuntimeError>(py));
            assert!(py_err(Error::Argument("bad".into())).is_instance_of::<PyValueError>(py));
            assert!(py_err(Error::Invariant("bug".into())).is_instance_of::<PyRuntimeError>(py));
        });
    }

    #[test]
    fn word_repr() {
        let w = PyWord::new("g3").unwrap();
        assert_eq!(w.__repr__(), "Word('[[x1,x2],x3]')");
        assert!(PyWord::new("x0").is_err());
    }
}
