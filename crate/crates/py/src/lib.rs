//! Python bindings for the tropical Plücker toolkit.
//!
//! Values cross the boundary as exact rational strings ("3", "-7/2") so that
//! nothing is ever rounded; points are plain lists/tuples of ints. The
//! functions mirror the library's main entry points:
//!
//! ```python
//! import tropical_plucker_py as tp
//! basis = tp.standard_basis([1, 2, 1], 0, 4)
//! f = tp.reconstruct([1, 2, 1], 0, 4, {tuple(b): 0 for b in basis})
//! tp.verify([1, 2, 1], 0, 4, f)   # -> []
//! ```

use std::collections::{BTreeMap, BTreeSet};

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use tropical_plucker::domain::{self, BoxShape, LatticePoint, TruncatedBox};
use tropical_plucker::laurent;
use tropical_plucker::properties::{self, Scope};
use tropical_plucker::rat::{self, Rat};
use tropical_plucker::tiling;
use tropical_plucker::tp::{self, BasisAssignment, ValuedFunction};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_shape(a: Vec<u32>) -> PyResult<BoxShape> {
    BoxShape::new(a).map_err(err)
}

fn parse_box(a: Vec<u32>, m: u32, m_prime: u32) -> PyResult<TruncatedBox> {
    TruncatedBox::new(parse_shape(a)?, m, m_prime).map_err(err)
}

fn parse_point(coords: Vec<u32>) -> LatticePoint {
    LatticePoint::new(coords)
}

/// Accepts ints, floats with integral value, or rational strings.
fn parse_value(v: &Bound<'_, PyAny>) -> PyResult<Rat> {
    if let Ok(n) = v.extract::<i64>() {
        return Ok(rat::int(n));
    }
    let s: String = v.extract()?;
    rat::parse(&s).map_err(err)
}

fn values_from_dict(values: &Bound<'_, PyDict>) -> PyResult<BTreeMap<LatticePoint, Rat>> {
    let mut out = BTreeMap::new();
    for (k, v) in values.iter() {
        let coords: Vec<u32> = k.extract()?;
        out.insert(parse_point(coords), parse_value(&v)?);
    }
    Ok(out)
}

fn values_to_dict<'py>(
    py: Python<'py>,
    values: &BTreeMap<LatticePoint, Rat>,
) -> PyResult<Bound<'py, PyDict>> {
    let dict = PyDict::new(py);
    for (p, v) in values {
        let key: Vec<u32> = p.coords().to_vec();
        dict.set_item(pyo3::types::PyTuple::new(py, key)?, rat::to_string(v))?;
    }
    Ok(dict)
}

/// The standard basis of the truncated box `B_m^{m'}(a)`, as point lists.
#[pyfunction]
fn standard_basis(a: Vec<u32>, m: u32, m_prime: u32) -> PyResult<Vec<Vec<u32>>> {
    let bx = parse_box(a, m, m_prime)?;
    Ok(domain::standard_basis(&bx)
        .into_iter()
        .map(|p| p.coords().to_vec())
        .collect())
}

/// Classifies a nonzero point as "fint", "sint" or "other".
#[pyfunction]
fn classify(a: Vec<u32>, point: Vec<u32>) -> PyResult<String> {
    let shape = parse_shape(a)?;
    let class = domain::classify_point(&shape, &parse_point(point)).map_err(err)?;
    Ok(match class {
        domain::PointClass::Fint => "fint",
        domain::PointClass::Sint { .. } => "sint",
        domain::PointClass::Other => "other",
    }
    .to_string())
}

/// Reconstructs the unique TP-function from values on the standard basis.
/// Returns `{point_tuple: "value"}` over the whole box.
#[pyfunction]
fn reconstruct<'py>(
    py: Python<'py>,
    a: Vec<u32>,
    m: u32,
    m_prime: u32,
    values: &Bound<'py, PyDict>,
) -> PyResult<Bound<'py, PyDict>> {
    let bx = parse_box(a, m, m_prime)?;
    let g = BasisAssignment::new(bx, values_from_dict(values)?).map_err(err)?;
    let f = tp::reconstruct(&g).map_err(err)?;
    values_to_dict(py, f.values())
}

/// Checks the TP3/TP4 relations; returns a list of violation dicts
/// (empty iff the function is a TP-function).
#[pyfunction]
fn verify<'py>(
    py: Python<'py>,
    a: Vec<u32>,
    m: u32,
    m_prime: u32,
    values: &Bound<'py, PyDict>,
) -> PyResult<Bound<'py, PyList>> {
    let bx = parse_box(a, m, m_prime)?;
    let f = ValuedFunction::new(bx, values_from_dict(values)?).map_err(err)?;
    let report = tp::verify(&f);
    let out = PyList::empty(py);
    for v in report.violations {
        let d = PyDict::new(py);
        d.set_item("kind", format!("{:?}", v.kind))?;
        d.set_item("base", v.base.coords().to_vec())?;
        d.set_item("indices", v.indices)?;
        d.set_item("lhs", rat::to_string(&v.lhs))?;
        d.set_item("rhs", rat::to_string(&v.rhs))?;
        out.append(d)?;
    }
    Ok(out)
}

/// Submodularity / skew-submodularity / discrete-concavity check on the
/// whole domain; returns the number of violated quadruples per property.
#[pyfunction]
fn properties_report<'py>(
    py: Python<'py>,
    a: Vec<u32>,
    m: u32,
    m_prime: u32,
    values: &Bound<'py, PyDict>,
) -> PyResult<Bound<'py, PyDict>> {
    let bx = parse_box(a, m, m_prime)?;
    let f = ValuedFunction::new(bx, values_from_dict(values)?).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item(
        "submodular",
        properties::check_submodular(&f, Scope::Domain).len(),
    )?;
    d.set_item(
        "skew_submodular",
        properties::check_skew_submodular(&f, Scope::Domain).len(),
    )?;
    d.set_item("dc", properties::check_dctp(&f, Scope::Domain).len())?;
    Ok(d)
}

/// The tropical Laurent polynomial of a box point over the standard basis:
/// a list of monomials, each a list of `(point_tuple, coeff)` pairs.
#[pyfunction]
fn laurent_box<'py>(py: Python<'py>, a: Vec<u32>, point: Vec<u32>) -> PyResult<Bound<'py, PyList>> {
    let shape = parse_shape(a)?;
    let poly = laurent::laurent_box(&shape, &parse_point(point)).map_err(err)?;
    let out = PyList::empty(py);
    for m in &poly.monomials {
        let mono = PyList::empty(py);
        for (p, &coeff) in &m.terms {
            let key = pyo3::types::PyTuple::new(py, p.coords().to_vec())?;
            mono.append((key, coeff))?;
        }
        out.append(mono)?;
    }
    Ok(out)
}

/// Extends a point set to a rhombic tiling; returns the rhombus list as
/// `(anchor_tuple, i, j)` triples, or raises ValueError with the obstacle.
#[pyfunction]
fn tile<'py>(py: Python<'py>, a: Vec<u32>, points: Vec<Vec<u32>>) -> PyResult<Bound<'py, PyList>> {
    let shape = parse_shape(a)?;
    let set: BTreeSet<LatticePoint> = points.into_iter().map(parse_point).collect();
    for p in &set {
        if !shape.contains(p) {
            return Err(PyValueError::new_err(format!("{p} outside the box")));
        }
    }
    match tiling::extend_points_to_tiling(&shape, &set) {
        Ok(t) => {
            let out = PyList::empty(py);
            for r in t.rhombi() {
                let anchor = pyo3::types::PyTuple::new(py, r.anchor.coords().to_vec())?;
                out.append((anchor, r.i, r.j))?;
            }
            Ok(out)
        }
        Err(obstacle) => Err(PyValueError::new_err(format!("obstacle: {obstacle}"))),
    }
}

/// Number of tilings of the zonogon `Z(a)` (flip closure of the standard one).
#[pyfunction]
fn count_tilings(a: Vec<u32>) -> PyResult<usize> {
    let shape = parse_shape(a)?;
    Ok(tiling::enumerate_tilings(&shape).map_err(err)?.len())
}

/// SVG rendering of the minimal tiling containing the given points.
#[pyfunction]
#[pyo3(signature = (a, points=None))]
fn tiling_svg(a: Vec<u32>, points: Option<Vec<Vec<u32>>>) -> PyResult<String> {
    let shape = parse_shape(a)?;
    let set: BTreeSet<LatticePoint> = points
        .unwrap_or_default()
        .into_iter()
        .map(parse_point)
        .collect();
    let t = tiling::extend_points_to_tiling(&shape, &set)
        .map_err(|o| PyValueError::new_err(format!("obstacle: {o}")))?;
    Ok(tiling::render_svg(&t, None))
}

#[pymodule]
fn tropical_plucker_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(standard_basis, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(properties_report, m)?)?;
    m.add_function(wrap_pyfunction!(laurent_box, m)?)?;
    m.add_function(wrap_pyfunction!(tile, m)?)?;
    m.add_function(wrap_pyfunction!(count_tilings, m)?)?;
    m.add_function(wrap_pyfunction!(tiling_svg, m)?)?;
    Ok(())
}
