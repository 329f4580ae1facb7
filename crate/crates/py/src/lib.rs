//! Python module `kwise`: families, the block construction, the verifier and
//! the search helpers. Sets cross the boundary as sorted lists of 1-based
//! elements, or as integer bitmasks via `Family.from_masks` and `Family.masks`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use kwise_core::search::{self, GreedyOrder};
use kwise_core::setcore::{self as core_set, SetMask, Universe};
use kwise_core::verifier::{self, Backend, Failure, Witness, World};
use kwise_core::{ConstructionParams, Error};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn elements(m: SetMask) -> Vec<u32> {
    m.elements().collect()
}

fn parse_world(world: &str) -> PyResult<World> {
    match world {
        "complement" => Ok(World::Complement),
        "direct" => Ok(World::Direct),
        other => Err(PyValueError::new_err(format!("unknown world `{other}`"))),
    }
}

fn parse_backend(backend: &str) -> PyResult<Backend> {
    match backend {
        "auto" => Ok(Backend::Auto),
        "dp" => Ok(Backend::Dp),
        "tuples" => Ok(Backend::Tuples),
        "both" => Ok(Backend::Both),
        other => Err(PyValueError::new_err(format!("unknown backend `{other}`"))),
    }
}

/// A family of subsets of `{1, ..., n}`.
#[pyclass(frozen, eq, skip_from_py_object, name = "Family", module = "kwise")]
#[derive(Clone, PartialEq)]
pub struct PyFamily {
    inner: core_set::Family,
}

#[pymethods]
impl PyFamily {
    #[new]
    #[pyo3(signature = (n, sets = Vec::new()))]
    fn new(n: u32, sets: Vec<Vec<u32>>) -> PyResult<Self> {
        let u = Universe::new(n).map_err(err)?;
        let masks = sets.into_iter().map(|s| u.set(s)).collect::<Result<Vec<_>, _>>().map_err(err)?;
        Ok(PyFamily { inner: core_set::Family::new(u, masks).map_err(err)? })
    }

    #[staticmethod]
    fn from_masks(n: u32, masks: Vec<u64>) -> PyResult<Self> {
        let u = Universe::new(n).map_err(err)?;
        let inner = core_set::Family::new(u, masks.into_iter().map(SetMask)).map_err(err)?;
        Ok(PyFamily { inner })
    }

    /// Parses the text family format (`n=<int>` header, one set per line).
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyFamily { inner: core_set::parse_family(text).map_err(err)? })
    }

    fn to_text(&self) -> String {
        core_set::format_family(&self.inner)
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.universe().n()
    }

    fn sets(&self) -> Vec<Vec<u32>> {
        self.inner.iter().map(elements).collect()
    }

    fn masks(&self) -> Vec<u64> {
        self.inner.iter().map(|m| m.0).collect()
    }

    fn complement(&self) -> Self {
        PyFamily { inner: self.inner.complement() }
    }

    fn is_downset(&self) -> bool {
        self.inner.is_downset()
    }

    fn is_upset(&self) -> bool {
        self.inner.is_upset()
    }

    fn downset_closure(&self) -> Self {
        PyFamily { inner: self.inner.downset_closure() }
    }

    fn maximal_elements(&self) -> Self {
        PyFamily { inner: self.inner.maximal_elements() }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __contains__(&self, set: Vec<u32>) -> bool {
        self.inner.universe().set(set).is_ok_and(|m| self.inner.contains(m))
    }

    fn __repr__(&self) -> String {
        let sets: Vec<String> = self.inner.iter().map(|m| m.to_string()).collect();
        format!("Family(n={}, [{}])", self.n(), sets.join(", "))
    }
}

/// Outcome of a verifier query. `witness` is `None` on success, otherwise
/// `("cover", [sets])` or `("gap", set, completion_or_None)`.
#[pyclass(frozen, get_all, name = "Verdict", module = "kwise")]
pub struct PyVerdict {
    ok: bool,
    failure: Option<&'static str>,
    downset: Option<bool>,
    witness: Option<Py<PyAny>>,
}

#[pymethods]
impl PyVerdict {
    fn __bool__(&self) -> bool {
        self.ok
    }

    fn __repr__(&self) -> String {
        format!("Verdict(ok={}, failure={:?})", self.ok, self.failure)
    }
}

fn verdict(py: Python<'_>, v: verifier::Verdict) -> PyResult<PyVerdict> {
    let sets = |ms: &[SetMask]| ms.iter().map(|&m| elements(m)).collect::<Vec<_>>();
    let witness = match &v.witness {
        None => None,
        Some(Witness::Cover(ms)) => Some(("cover", sets(ms)).into_pyobject(py)?.into_any().unbind()),
        Some(Witness::Gap { set, completion }) => Some(
            ("gap", elements(*set), completion.as_deref().map(sets))
                .into_pyobject(py)?
                .into_any()
                .unbind(),
        ),
    };
    Ok(PyVerdict {
        ok: v.ok,
        failure: v.failure().map(|f| match f {
            Failure::NotKwise => "not_kwise",
            Failure::NotSaturated => "not_saturated",
        }),
        downset: v.downset,
        witness,
    })
}

/// Complement-world family of the block construction for `(k, n)`.
#[pyfunction]
#[pyo3(signature = (k, n, world = "complement"))]
fn construct(k: u32, n: u32, world: &str) -> PyResult<PyFamily> {
    let c = kwise_core::build_family(ConstructionParams::new(k, n).map_err(err)?);
    Ok(PyFamily {
        inner: match parse_world(world)? {
            World::Complement => c.family,
            World::Direct => c.complement,
        },
    })
}

/// Closed-form size of the construction, when one is known for `(k, n)`.
#[pyfunction]
fn expected_size(k: u32, n: u32) -> Option<u64> {
    kwise_core::expected_size(k, n)
}

/// Blocks of the construction's partition, as element lists.
#[pyfunction]
fn partition(k: u32, n: u32) -> PyResult<Vec<Vec<u32>>> {
    let bp = kwise_core::make_partition(ConstructionParams::new(k, n).map_err(err)?);
    Ok(bp.blocks().iter().map(|&b| elements(b)).collect())
}

/// Complement world: no at most `k` members cover the universe.
#[pyfunction]
#[pyo3(signature = (family, k, backend = "auto"))]
fn check_kwise(py: Python<'_>, family: &PyFamily, k: u32, backend: &str) -> PyResult<PyVerdict> {
    let v = verifier::Verifier::new(parse_backend(backend)?).check_kwise(&family.inner, k).map_err(err)?;
    verdict(py, v)
}

/// Complement world: no non-member can join without breaking k-wise.
#[pyfunction]
#[pyo3(signature = (family, k, backend = "auto"))]
fn check_saturated(py: Python<'_>, family: &PyFamily, k: u32, backend: &str) -> PyResult<PyVerdict> {
    let v = verifier::Verifier::new(parse_backend(backend)?).check_saturated(&family.inner, k).map_err(err)?;
    verdict(py, v)
}

#[pyfunction]
#[pyo3(signature = (family, k, world = "complement", backend = "auto"))]
fn is_maximal_kwise(
    py: Python<'_>,
    family: &PyFamily,
    k: u32,
    world: &str,
    backend: &str,
) -> PyResult<PyVerdict> {
    let v = verifier::Verifier::new(parse_backend(backend)?)
        .is_maximal_kwise(&family.inner, k, parse_world(world)?)
        .map_err(err)?;
    verdict(py, v)
}

/// Exhaustive minimum over maximal k-wise intersecting families (n <= 5).
/// Returns `(f_k_n, extremal_count, maximal_count, sample_extremal)`; the
/// sample is in the direct world.
#[pyfunction]
fn oracle_min_size(k: u32, n: u32) -> PyResult<(usize, usize, usize, PyFamily)> {
    let r = search::oracle_min_size(k, Universe::new(n).map_err(err)?).map_err(err)?;
    Ok((r.f_k_n, r.extremal_count, r.maximal_count, PyFamily { inner: r.sample_extremal }))
}

/// Greedy saturation from `start` (default: empty). `seed=None` offers masks
/// in descending popcount order instead of a seeded shuffle.
#[pyfunction]
#[pyo3(signature = (k, n, seed = Some(0), start = None))]
fn greedy_saturate(k: u32, n: u32, seed: Option<u64>, start: Option<&PyFamily>) -> PyResult<PyFamily> {
    let u = Universe::new(n).map_err(err)?;
    let g0 = match start {
        Some(f) if f.inner.universe() != u => {
            return Err(PyValueError::new_err("start family has a different n"));
        }
        Some(f) => f.inner.clone(),
        None => core_set::Family::empty(u),
    };
    let order = seed.map_or(GreedyOrder::Popcount, GreedyOrder::Seeded);
    Ok(PyFamily { inner: search::greedy_saturate(&g0, k, order).map_err(err)? })
}

/// Members of `family` not inside a single block of the construction
/// partition for `(k, n)`; with `minimize`, the least such count over all
/// partitions into `k - 1` blocks. Returns `(distance, blocks)`.
#[pyfunction]
#[pyo3(signature = (family, k, minimize = false))]
fn cube_distance(family: &PyFamily, k: u32, minimize: bool) -> PyResult<(usize, Vec<Vec<u32>>)> {
    let f = &family.inner;
    let report = if minimize {
        search::minimize_cube_distance(f, k.saturating_sub(1) as usize)
    } else {
        ConstructionParams::new(k, f.universe().n())
            .and_then(|p| search::cube_distance(f, &kwise_core::make_partition(p)))
    }
    .map_err(err)?;
    Ok((report.distance, report.partition.blocks().iter().map(|&b| elements(b)).collect()))
}

#[pymodule]
#[pyo3(name = "kwise")]
fn kwise_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFamily>()?;
    m.add_class::<PyVerdict>()?;
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add_function(wrap_pyfunction!(expected_size, m)?)?;
    m.add_function(wrap_pyfunction!(partition, m)?)?;
    m.add_function(wrap_pyfunction!(check_kwise, m)?)?;
    m.add_function(wrap_pyfunction!(check_saturated, m)?)?;
    m.add_function(wrap_pyfunction!(is_maximal_kwise, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_min_size, m)?)?;
    m.add_function(wrap_pyfunction!(greedy_saturate, m)?)?;
    m.add_function(wrap_pyfunction!(cube_distance, m)?)?;
    Ok(())
}
