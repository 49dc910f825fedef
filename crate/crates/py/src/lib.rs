//! Python module `kuratowski`. Point sets cross the boundary as lists of
//! 1-based point labels.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use kuratowski_core::counts::{closed_form_counts, dedekind_count, Count};
use kuratowski_core::error::Error;
use kuratowski_core::lattice::{distributive_closure, meet_semilattice_terms};
use kuratowski_core::pointset::PointSet;
use kuratowski_core::poset::{
    build_order, emit_hasse, unary_terms, HasseFormat, DEFAULT_ORDER_BOUND,
};
use kuratowski_core::saturation::{self, OpSet, DEFAULT_CAP};
use kuratowski_core::term::Term as CoreTerm;
use kuratowski_core::topology::{prefix_space, validate_space, TopSpace, ValidationConfig};
use kuratowski_core::unary::{enumerate_unary_monoid, normalize_unary, Letter, UnaryWord};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_ops(flags: &str) -> PyResult<OpSet> {
    flags.parse().map_err(err)
}

#[pyclass(name = "Space", frozen, module = "kuratowski")]
pub struct Space(TopSpace);

#[pymethods]
impl Space {
    /// `closure[x][y]` is true when point `x` lies in the closure of `{y}`.
    #[new]
    fn new(closure: Vec<Vec<bool>>) -> PyResult<Self> {
        TopSpace::new(&closure).map(Space).map_err(err)
    }

    #[staticmethod]
    fn discrete(points: usize) -> Self {
        Space(TopSpace::discrete(points))
    }

    #[staticmethod]
    fn indiscrete(points: usize) -> Self {
        Space(TopSpace::indiscrete(points))
    }

    #[staticmethod]
    fn prefix(points: usize) -> PyResult<Self> {
        prefix_space(points).map(Space).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        TopSpace::from_json_str(text).map(Space).map_err(err)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0.to_json()).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[getter]
    fn points(&self) -> usize {
        self.0.point_count()
    }

    fn closure(&self, labels: Vec<usize>) -> PyResult<Vec<usize>> {
        let a = self.0.set_from_labels(labels).map_err(err)?;
        Ok(self.0.closure(a).map_err(err)?.labels())
    }

    fn interior(&self, labels: Vec<usize>) -> PyResult<Vec<usize>> {
        let a = self.0.set_from_labels(labels).map_err(err)?;
        Ok(self.0.interior(a).map_err(err)?.labels())
    }

    /// Closure-axiom violations as text; empty for a valid space.
    #[pyo3(signature = (seed = 0))]
    fn validate(&self, seed: u64) -> Vec<String> {
        let config = ValidationConfig {
            seed,
            ..ValidationConfig::default()
        };
        validate_space(&self.0, &config)
            .violations
            .iter()
            .map(|v| v.to_string())
            .collect()
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

fn sets_on(space: &TopSpace, sets: Vec<Vec<usize>>) -> PyResult<Vec<PointSet>> {
    sets.into_iter()
        .map(|s| space.set_from_labels(s).map_err(err))
        .collect()
}

#[pyclass(name = "Term", frozen, module = "kuratowski")]
pub struct Term(CoreTerm);

#[pymethods]
impl Term {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(Term).map_err(err)
    }

    fn eval(&self, space: &Space, sets: Vec<Vec<usize>>) -> PyResult<Vec<usize>> {
        let a = sets_on(&space.0, sets)?;
        Ok(self.0.eval(&space.0, &a).map_err(err)?.labels())
    }

    fn dual(&self) -> Term {
        Term(self.0.dual())
    }

    #[getter]
    fn size(&self) -> usize {
        self.0.size()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Term('{}')", self.0)
    }

    fn __eq__(&self, other: &Term) -> bool {
        self.0 == other.0
    }
}

/// Normal form of a word over k, i, c.
#[pyfunction]
fn normalize(word: &str) -> PyResult<String> {
    let w: UnaryWord = word.parse().map_err(err)?;
    Ok(normalize_unary(&w).to_string())
}

/// Every distinct normal form reachable with the given letters.
#[pyfunction]
fn monoid(letters: &str) -> PyResult<Vec<String>> {
    let alphabet = letters
        .chars()
        .map(|ch| match ch {
            'k' => Ok(Letter::K),
            'i' => Ok(Letter::I),
            'c' => Ok(Letter::C),
            other => Err(PyValueError::new_err(format!("unknown letter {other:?}"))),
        })
        .collect::<PyResult<Vec<_>>>()?;
    Ok(enumerate_unary_monoid(&alphabet)
        .map_err(err)?
        .iter()
        .map(|w| w.to_string())
        .collect())
}

/// The family generated from `sets` as (labels, witness term) pairs.
#[pyfunction]
#[pyo3(signature = (space, sets, ops, cap = DEFAULT_CAP))]
fn saturate(
    space: &Space,
    sets: Vec<Vec<usize>>,
    ops: &str,
    cap: usize,
) -> PyResult<Vec<(Vec<usize>, String)>> {
    let a = sets_on(&space.0, sets)?;
    let fam = saturation::saturate(&space.0, &a, parse_ops(ops)?, cap).map_err(err)?;
    Ok(fam
        .entries()
        .map(|(s, t)| (s.labels(), t.to_string()))
        .collect())
}

/// Largest family over every space with at most `max_points` points.
/// Returns the count, the witness space and the witness sets.
#[pyfunction]
#[pyo3(signature = (ops, gens = 1, max_points = 4, cap = DEFAULT_CAP))]
fn max_count(
    ops: &str,
    gens: usize,
    max_points: usize,
    cap: usize,
) -> PyResult<(usize, Space, Vec<Vec<usize>>)> {
    let r =
        saturation::max_over_spaces(parse_ops(ops)?, gens, max_points, cap, None).map_err(err)?;
    let sets = r.assignment.iter().map(|s| s.labels()).collect();
    Ok((r.count, Space(r.space), sets))
}

/// Size of the free algebra on `n` generators, `None` when infinite.
#[pyfunction]
fn closed_form(n: usize, ops: &str) -> PyResult<Option<u128>> {
    Ok(match closed_form_counts(n, parse_ops(ops)?).map_err(err)? {
        Count::Finite(v) => Some(v),
        Count::Infinite => None,
    })
}

#[pyfunction]
fn dedekind(n: usize) -> PyResult<u128> {
    dedekind_count(n).map_err(err)
}

#[pyfunction]
fn phi(n: usize, steps: usize) -> PyResult<Vec<Vec<usize>>> {
    Ok(saturation::phi_iterate(n, steps)
        .map_err(err)?
        .iter()
        .map(|s| s.labels())
        .collect())
}

#[pyfunction]
fn ej(n: usize, steps: usize) -> PyResult<Vec<Vec<usize>>> {
    Ok(saturation::ej_sequence(n, steps)
        .map_err(err)?
        .iter()
        .map(|s| s.labels())
        .collect())
}

/// Covering diagram of `ki7`, `kimeet13` or `lattice35` as dot, json or md.
#[pyfunction]
#[pyo3(signature = (family, format = "dot", max_points = DEFAULT_ORDER_BOUND))]
fn hasse(family: &str, format: &str, max_points: usize) -> PyResult<String> {
    let format: HasseFormat = format.parse().map_err(err)?;
    let base = build_order(&unary_terms(), max_points).map_err(err)?;
    let poset = match family {
        "ki7" => base,
        "kimeet13" => {
            build_order(&meet_semilattice_terms(&base).map_err(err)?, max_points).map_err(err)?
        }
        "lattice35" => {
            let lat =
                distributive_closure(&meet_semilattice_terms(&base).map_err(err)?, max_points)
                    .map_err(err)?;
            build_order(lat.elements(), max_points).map_err(err)?
        }
        other => return Err(PyValueError::new_err(format!("unknown family {other:?}"))),
    };
    Ok(emit_hasse(&poset, format))
}

#[pymodule]
fn kuratowski(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Space>()?;
    m.add_class::<Term>()?;
    m.add_function(wrap_pyfunction!(normalize, m)?)?;
    m.add_function(wrap_pyfunction!(monoid, m)?)?;
    m.add_function(wrap_pyfunction!(saturate, m)?)?;
    m.add_function(wrap_pyfunction!(max_count, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(dedekind, m)?)?;
    m.add_function(wrap_pyfunction!(phi, m)?)?;
    m.add_function(wrap_pyfunction!(ej, m)?)?;
    m.add_function(wrap_pyfunction!(hasse, m)?)?;
    Ok(())
}
