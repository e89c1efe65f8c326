//! Python bindings: the catalog decompositions and the main operations —
//! discretize, cover, asymptotic walks, condition checks, volume statistics,
//! verification, and SVG rendering.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use scdforge::conditions::{check_strong, check_weak};
use scdforge::discretize;
use scdforge::exact::{fmt_rat, parse_rat};
use scdforge::oracle;
use scdforge::polytope::LatticePoint;
use scdforge::poset::{ChainDecomposition, ChainKind, DiscreteChain};
use scdforge::{catalog, volume};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn chains_to_py<'py>(py: Python<'py>, d: &ChainDecomposition) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    out.set_item("n", d.denominator)?;
    let chains = PyList::empty(py);
    for chain in &d.chains {
        let c = PyDict::new(py);
        c.set_item("kind", match chain.kind {
            ChainKind::Closed => "closed",
            ChainKind::Open => "open",
        })?;
        c.set_item("points", chain.points.iter().map(|p| p.numerators.clone()).collect::<Vec<_>>())?;
        chains.append(c)?;
    }
    out.set_item("chains", chains)?;
    Ok(out)
}

fn chains_from_py(obj: &Bound<'_, PyDict>) -> PyResult<ChainDecomposition> {
    let n: u64 = obj.get_item("n")?.ok_or_else(|| err("missing key `n`"))?.extract()?;
    let chains_obj = obj.get_item("chains")?.ok_or_else(|| err("missing key `chains`"))?;
    let mut chains = Vec::new();
    for item in chains_obj.try_iter()? {
        let item = item?;
        let dict: &Bound<'_, PyDict> = item.downcast()?;
        let kind: String = dict.get_item("kind")?.ok_or_else(|| err("missing `kind`"))?.extract()?;
        let kind = match kind.as_str() {
            "closed" => ChainKind::Closed,
            "open" => ChainKind::Open,
            other => return Err(err(format!("unknown chain kind `{other}`"))),
        };
        let points: Vec<Vec<i64>> =
            dict.get_item("points")?.ok_or_else(|| err("missing `points`"))?.extract()?;
        chains.push(DiscreteChain::new(
            points.into_iter().map(|nums| LatticePoint::new(nums, n)).collect(),
            kind,
        ));
    }
    Ok(ChainDecomposition { denominator: n, chains })
}

/// A catalog decomposition with its exact machinery attached.
#[pyclass]
struct Decomposition {
    entry: catalog::CatalogEntry,
}

#[pymethods]
impl Decomposition {
    /// Load a catalog entry, e.g. `Decomposition.from_catalog("L3")` or
    /// `Decomposition.from_catalog("Pt", t="3/2")`.
    #[staticmethod]
    #[pyo3(signature = (id, t=None))]
    fn from_catalog(id: &str, t: Option<&str>) -> PyResult<Self> {
        let t = t.map(parse_rat).transpose().map_err(err)?;
        let entry = catalog::get(id, t.as_ref()).map_err(err)?;
        Ok(Decomposition { entry })
    }

    #[getter]
    fn id(&self) -> String {
        self.entry.id.clone()
    }

    /// Lattice points of denominator n, as integer numerator vectors.
    fn lattice_points(&self, n: u64) -> PyResult<Vec<Vec<i64>>> {
        Ok(self
            .entry
            .polytope()
            .lattice_points(n)
            .map_err(err)?
            .into_iter()
            .map(|p| p.numerators)
            .collect())
    }

    /// Histogram of scaled ranks of P(n).
    fn rank_profile(&self, n: u64) -> PyResult<Vec<u64>> {
        Ok(scdforge::poset::rank_profile(self.entry.polytope(), n).map_err(err)?.dense())
    }

    /// Exact symmetric chain decomposition of P(n).
    fn discretize<'py>(&self, py: Python<'py>, n: u64) -> PyResult<Bound<'py, PyDict>> {
        let d = discretize::decompose(&self.entry.decomposition, n).map_err(err)?;
        chains_to_py(py, &d)
    }

    /// Covering chains in P(kM) through every point of P(k).
    fn cover<'py>(&self, py: Python<'py>, k: u64) -> PyResult<Bound<'py, PyDict>> {
        let d = discretize::cover(&self.entry.decomposition, k, self.entry.cover_m_override)
            .map_err(err)?;
        chains_to_py(py, &d)
    }

    /// Asymptotic walk of P(k) with trimming; returns the kept chains and the
    /// loss accounting.
    #[pyo3(signature = (k, trim_cap=None))]
    fn asymptotic<'py>(
        &self,
        py: Python<'py>,
        k: u64,
        trim_cap: Option<usize>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let rep = discretize::asymptotic(&self.entry.decomposition, k, trim_cap).map_err(err)?;
        let out = PyDict::new(py);
        out.set_item("kept", chains_to_py(py, &rep.kept)?)?;
        out.set_item("discarded_points", rep.discarded_points)?;
        out.set_item("trimmed_points", rep.trimmed_points)?;
        out.set_item("total_points", rep.total_points)?;
        out.set_item("loss", fmt_rat(&rep.loss_fraction()))?;
        Ok(out)
    }

    /// Verify a chain decomposition dict against this entry's polytope.
    fn verify<'py>(&self, py: Python<'py>, chains: &Bound<'py, PyDict>) -> PyResult<Bound<'py, PyDict>> {
        let d = chains_from_py(chains)?;
        let report = scdforge::poset::verify_scd(&d, self.entry.polytope()).map_err(err)?;
        let independent = oracle::independent_verify(&d, self.entry.polytope()).map_err(err)?;
        let out = PyDict::new(py);
        out.set_item("ok", report.ok() && independent)?;
        out.set_item("covers", report.covers)?;
        out.set_item("disjoint", report.disjoint)?;
        out.set_item("saturated", report.all_saturated)?;
        out.set_item("symmetric", report.all_symmetric)?;
        out.set_item("independent", independent)?;
        out.set_item("offender", report.offender)?;
        Ok(out)
    }

    /// The certificate table: one row per turning set with both condition
    /// verdicts.
    fn check<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        let rows = PyList::empty(py);
        for ctx in &self.entry.certificates {
            let strong = check_strong(ctx).map_err(err)?;
            let weak = check_weak(ctx).map_err(err)?;
            let row = PyDict::new(py);
            row.set_item("label", ctx.label.clone())?;
            row.set_item("coeffs", ctx.certificate.coeffs.iter().map(fmt_rat).collect::<Vec<_>>())?;
            row.set_item("rhs", fmt_rat(&ctx.certificate.rhs))?;
            row.set_item("dirs_in", ctx.dirs_in.iter().copied().collect::<Vec<_>>())?;
            row.set_item("dirs_out", ctx.dirs_out.iter().copied().collect::<Vec<_>>())?;
            row.set_item("strong_ok", strong.satisfied)?;
            row.set_item("complexity", strong.complexity)?;
            row.set_item("weak_ok", weak)?;
            rows.append(row)?;
        }
        Ok(rows)
    }

    /// Exact volume statistics and identities.
    fn stats<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let g = &self.entry.decomposition;
        let out = PyDict::new(py);
        out.set_item("volume", fmt_rat(&volume::polytope_volume(&g.polytope).map_err(err)?))?;
        out.set_item("snake_total", fmt_rat(&volume::theorem64_total(g).map_err(err)?))?;
        out.set_item("starting_sets_match_middle_slice", volume::theorem63_check(g).map_err(err)?)?;
        out.set_item("snake_total_matches_volume", volume::theorem64_check(g).map_err(err)?)?;
        out.set_item(
            "volume_rank_symmetric",
            volume::volume_rank_symmetry(&g.polytope).map_err(err)?,
        )?;
        Ok(out)
    }

    /// Structural + sampled validation of the geometric decomposition.
    #[pyo3(signature = (sample_denoms=vec![1, 2, 3], seed=0))]
    fn validate(&self, sample_denoms: Vec<u64>, seed: u64) -> PyResult<bool> {
        Ok(self.entry.decomposition.validate(&sample_denoms, seed).map_err(err)?.ok())
    }

    /// Deterministic SVG drawing (two-dimensional entries).
    fn render_svg(&self) -> PyResult<String> {
        scdforge::render::render_geo(&self.entry.decomposition, None).map_err(err)
    }

    /// The GeoDecomposition JSON document.
    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string_pretty(&scdforge::io::geo_to_json(&self.entry.decomposition))
            .map_err(err)
    }
}

/// Catalog ids with one-line descriptions.
#[pyfunction]
fn catalog_entries() -> Vec<(String, String)> {
    catalog::list().into_iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

/// Coefficients of the Gaussian binomial [m+n choose m]_q.
#[pyfunction]
fn q_binomial(m: usize, n: usize) -> Vec<u64> {
    oracle::q_binomial(m, n)
}

/// Exhaustive symmetric-chain-decomposition search on a tiny catalog poset.
#[pyfunction]
#[pyo3(signature = (id, n, budget=1_000_000, cap=60, t=None))]
fn search_scd<'py>(
    py: Python<'py>,
    id: &str,
    n: u64,
    budget: u64,
    cap: usize,
    t: Option<&str>,
) -> PyResult<Option<Bound<'py, PyDict>>> {
    let t = t.map(parse_rat).transpose().map_err(err)?;
    let entry = catalog::get(id, t.as_ref()).map_err(err)?;
    match oracle::search_scd(entry.polytope(), n, budget, cap).map_err(err)? {
        None => Ok(None),
        Some(d) => Ok(Some(chains_to_py(py, &d)?)),
    }
}

#[pymodule]
fn scdforge_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Decomposition>()?;
    m.add_function(wrap_pyfunction!(catalog_entries, m)?)?;
    m.add_function(wrap_pyfunction!(q_binomial, m)?)?;
    m.add_function(wrap_pyfunction!(search_scd, m)?)?;
    Ok(())
}
