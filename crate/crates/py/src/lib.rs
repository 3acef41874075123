//! Python bindings: rings and ideals, graded modules with their Betti and
//! Koszul tables, and the geometric checks.

use std::collections::BTreeMap;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use syzcalc::geometry::{
    curve_nonvanishing_criterion, koszul_of_sections as sections_koszul, effective_bound_report, very_ampleness_order,
    AmplenessTarget, CriterionVerdict, CurveNumerics, Evidence, SectionModule, Strategy,
};
use syzcalc::gradedmod::{BettiTable, GradedModule, ModuleDescription};
use syzcalc::groebner::{GbOptions, IdealBasis};
use syzcalc::koszul::{koszul_cohomology_dim, koszul_table, ModuleAction};
use syzcalc::polygraph::{equivariant_vanishing_check, PolygraphLimits, PolygraphSpec, Verdict};
use syzcalc::{Field, MonomialOrder, RingRef};

create_exception!(pysyzcalc, SyzcalcError, PyException);
create_exception!(pysyzcalc, GuardError, SyzcalcError);

fn err(e: syzcalc::Error) -> PyErr {
    use syzcalc::Error as E;
    match e {
        E::BasisLimit(_) | E::Guard(_) | E::NoStabilization(_) | E::ResolutionTooLong(_) => GuardError::new_err(e.to_string()),
        _ => SyzcalcError::new_err(e.to_string()),
    }
}

fn field_of(s: &str) -> PyResult<Field> {
    match s {
        "qq" | "QQ" => Ok(Field::Rationals),
        _ => {
            let p = s
                .strip_prefix("fp:")
                .and_then(|p| p.parse::<u64>().ok())
                .ok_or_else(|| PyValueError::new_err(format!("field must be `qq` or `fp:P`, got `{s}`")))?;
            Field::prime(p).map_err(|e| PyValueError::new_err(e.to_string()))
        }
    }
}

fn field_name(f: Field) -> String {
    match f {
        Field::Rationals => "qq".into(),
        Field::Prime(p) => format!("fp:{p}"),
    }
}

fn opts(max_basis: usize) -> PyResult<GbOptions> {
    if max_basis == 0 {
        return Err(PyValueError::new_err("max_basis must be positive"));
    }
    Ok(GbOptions { max_basis })
}

fn table_dict(t: &BettiTable) -> BTreeMap<(usize, i64), usize> {
    t.entries().iter().filter(|(_, &v)| v > 0).map(|(&k, &v)| (k, v)).collect()
}

/// A polynomial ring with standard grading.
#[pyclass(module = "pysyzcalc", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Ring {
    inner: RingRef,
}

#[pymethods]
impl Ring {
    #[new]
    #[pyo3(signature = (vars, field = "qq", order = "grevlex"))]
    fn new(vars: Vec<String>, field: &str, order: &str) -> PyResult<Self> {
        let order = MonomialOrder::parse(order).ok_or_else(|| PyValueError::new_err(format!("unknown order `{order}`")))?;
        let n = vars.len();
        let inner = syzcalc::Ring::new(vars, vec![1; n], order, field_of(field)?).map_err(|e| err(e.into()))?;
        Ok(Ring { inner })
    }

    #[getter]
    fn vars(&self) -> Vec<String> {
        self.inner.names().to_vec()
    }

    #[getter]
    fn field(&self) -> String {
        field_name(self.inner.field())
    }

    /// Canonical form of a polynomial in this ring.
    fn normalize(&self, poly: &str) -> PyResult<String> {
        Ok(self.inner.parse(poly).map_err(|e| err(e.into()))?.to_string())
    }

    fn __repr__(&self) -> String {
        format!("Ring({:?}, field={:?})", self.inner.names(), self.field())
    }
}

/// An ideal given by generators, possibly a Gröbner basis.
#[pyclass(module = "pysyzcalc", frozen)]
struct Ideal {
    inner: IdealBasis,
}

#[pymethods]
impl Ideal {
    #[new]
    fn new(ring: &Ring, generators: Vec<String>) -> PyResult<Self> {
        let refs: Vec<&str> = generators.iter().map(String::as_str).collect();
        Ok(Ideal { inner: IdealBasis::parse(&ring.inner, &refs).map_err(err)? })
    }

    #[getter]
    fn ring(&self) -> Ring {
        Ring { inner: self.inner.ring().clone() }
    }

    #[getter]
    fn generators(&self) -> Vec<String> {
        self.inner.generators().iter().map(ToString::to_string).collect()
    }

    /// Reduced Gröbner basis.
    #[pyo3(signature = (max_basis = 20_000))]
    fn groebner_basis(&self, py: Python<'_>, max_basis: usize) -> PyResult<Ideal> {
        let o = opts(max_basis)?;
        let inner = py.detach(|| self.inner.groebner_with(&o)).map_err(err)?;
        Ok(Ideal { inner })
    }

    fn contains(&self, py: Python<'_>, poly: &str) -> PyResult<bool> {
        let f = self.inner.ring().parse(poly).map_err(|e| err(e.into()))?;
        py.detach(|| self.inner.groebner()?.contains(&f)).map_err(err)
    }

    /// Intersection with the subring in the remaining variables.
    #[pyo3(signature = (drop, max_basis = 20_000))]
    fn eliminate(&self, py: Python<'_>, drop: Vec<String>, max_basis: usize) -> PyResult<Ideal> {
        let ring = self.inner.ring();
        for v in &drop {
            if ring.var_index(v).is_none() {
                return Err(PyValueError::new_err(format!("unknown variable `{v}`")));
            }
        }
        let keep: Vec<usize> = (0..ring.nvars()).filter(|&i| !drop.contains(&ring.names()[i])).collect();
        let o = opts(max_basis)?;
        let inner = py.detach(|| self.inner.eliminate_with(&keep, &o)).map_err(err)?;
        Ok(Ideal { inner })
    }

    #[pyo3(signature = (other, max_basis = 20_000))]
    fn intersect(&self, py: Python<'_>, other: &Ideal, max_basis: usize) -> PyResult<Ideal> {
        let o = opts(max_basis)?;
        let inner = py.detach(|| self.inner.intersect(&other.inner, &o)).map_err(err)?;
        Ok(Ideal { inner })
    }

    /// The cyclic module `S/I`.
    fn quotient(&self) -> PyResult<Module> {
        Ok(Module { inner: GradedModule::quotient(&self.inner).map_err(err)? })
    }

    fn __repr__(&self) -> String {
        format!("Ideal({:?})", self.generators())
    }
}

/// A finitely presented graded module.
#[pyclass(module = "pysyzcalc", frozen)]
struct Module {
    inner: GradedModule,
}

#[pymethods]
impl Module {
    /// Parses the text format: a `vars:` line, `shifts:`, then relations.
    #[staticmethod]
    #[pyo3(signature = (text, field = "qq"))]
    fn from_text(text: &str, field: &str) -> PyResult<Self> {
        let f = field_of(field)?;
        let inner = ModuleDescription::parse_text(text).and_then(|d| d.build(f)).map_err(err)?;
        Ok(Module { inner })
    }

    /// Sections of `𝒪(b + q·d)` on the projective line for `q ≤ q_max`.
    #[staticmethod]
    #[pyo3(signature = (b, d, q_max = 3))]
    fn sections(b: i64, d: i64, q_max: i64) -> PyResult<Self> {
        let inner = SectionModule::rational(b, d).and_then(|s| s.presentation(q_max, &GbOptions::default())).map_err(err)?;
        Ok(Module { inner })
    }

    #[getter]
    fn ring(&self) -> Ring {
        Ring { inner: self.inner.ring().clone() }
    }

    #[getter]
    fn shifts(&self) -> Vec<i64> {
        self.inner.generators().shifts().to_vec()
    }

    fn hilbert_function(&self, q: i64) -> usize {
        self.inner.hilbert_function(q)
    }

    /// Nonzero `β_{p,q}` keyed by `(p, q)`; `β_{p,q}` counts generators of
    /// degree `p + q` in the `p`-th free module.
    #[pyo3(signature = (max_basis = 20_000))]
    fn betti_table(&self, py: Python<'_>, max_basis: usize) -> PyResult<BTreeMap<(usize, i64), usize>> {
        let o = opts(max_basis)?;
        py.detach(|| self.inner.betti_table(&o)).map(|t| table_dict(&t)).map_err(err)
    }

    /// Ranks of the minimal free resolution.
    #[pyo3(signature = (max_basis = 20_000))]
    fn resolution_ranks(&self, py: Python<'_>, max_basis: usize) -> PyResult<Vec<usize>> {
        let o = opts(max_basis)?;
        let len = self.inner.ring().nvars() + 1;
        py.detach(|| self.inner.minimal_free_resolution(len, &o)).map(|r| r.ranks()).map_err(err)
    }

    /// `dim K_{p,q}(M, V)` with `V` the space of variables.
    fn koszul(&self, py: Python<'_>, p: usize, q: i64) -> PyResult<usize> {
        py.detach(|| ModuleAction::standard(&self.inner).map(|a| koszul_cohomology_dim(&a, p, q))).map_err(err)
    }

    fn koszul_table(&self, py: Python<'_>, p_max: usize, q_min: i64, q_max: i64) -> PyResult<BTreeMap<(usize, i64), usize>> {
        py.detach(|| ModuleAction::standard(&self.inner).map(|a| table_dict(&koszul_table(&a, p_max, q_min, q_max))))
            .map_err(err)
    }

    fn to_text(&self) -> String {
        ModuleDescription::from_module(&self.inner).to_text()
    }
}

/// `dim K_{p,q}(ℙ¹, 𝒪(b), 𝒪(d))`.
#[pyfunction]
fn koszul_of_sections(py: Python<'_>, b: i64, d: i64, p: usize, q: i64) -> PyResult<usize> {
    py.detach(|| sections_koszul(b, d, p, q)).map_err(err)
}

/// Order of very ampleness of the complete system of `𝒪(m)` on the line.
#[pyfunction]
#[pyo3(signature = (m, p_max = 3, seed = None, trials = 64))]
fn ampleness_order<'py>(py: Python<'py>, m: i64, p_max: usize, seed: Option<u64>, trials: usize) -> PyResult<Bound<'py, PyDict>> {
    let strategy = match seed {
        Some(seed) => Strategy::Sampled { seed, trials },
        None => Strategy::Exhaustive,
    };
    let target = AmplenessTarget::line_bundle(m, Field::Rationals);
    let r = py.detach(|| very_ampleness_order(&target, p_max, strategy)).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("order", r.order)?;
    out.set_item("proved", r.evidence == Evidence::Proved)?;
    let checks: Vec<(usize, bool, usize, Option<String>)> =
        r.checks.into_iter().map(|c| (c.p, c.passed, c.schemes_checked, c.witness)).collect();
    out.set_item("checks", checks)?;
    Ok(out)
}

/// Numerical certificate for `K_{p,1}(C; B, L) ≠ 0` on a curve of genus `g`.
#[pyfunction]
#[pyo3(signature = (g, d, b, p, h0b = None))]
fn curve_criterion<'py>(py: Python<'py>, g: i64, d: i64, b: i64, p: i64, h0b: Option<i64>) -> PyResult<Bound<'py, PyDict>> {
    let h0b = h0b.unwrap_or((b + 1 - g).max(0));
    let c = CurveNumerics::new(g, d, b, p, h0b).and_then(|c| curve_nonvanishing_criterion(&c)).map_err(err)?;
    let out = PyDict::new(py);
    match c.verdict {
        CriterionVerdict::Certified => out.set_item("certified", true)?,
        CriterionVerdict::NotCertified { reason } => {
            out.set_item("certified", false)?;
            out.set_item("reason", reason)?;
        }
    }
    out.set_item("lhs", c.lhs)?;
    out.set_item("chi", c.chi_rr)?;
    Ok(out)
}

/// Least `d` in the effective bound for dimension `n` and order `p`, with
/// the hypotheses it needs.
#[pyfunction]
fn effective_bound(n: u64, p: u64) -> PyResult<(u64, String)> {
    effective_bound_report(n, p).map(|r| (r.d, r.hypotheses)).map_err(err)
}

/// Equivariant Ext check for the polygraph ring with `n` points and `k` factors.
#[pyfunction]
#[pyo3(signature = (n, k, field = "qq", max_degree = 6))]
fn polygraph_check<'py>(py: Python<'py>, n: usize, k: usize, field: &str, max_degree: u32) -> PyResult<Bound<'py, PyDict>> {
    let limits = PolygraphLimits { max_generator_degree: max_degree, ..PolygraphLimits::default() };
    let f = field_of(field)?;
    let r = py
        .detach(|| {
            let spec = PolygraphSpec::with_limits(n, k, f, &limits)?;
            equivariant_vanishing_check(&spec, &limits, &GbOptions::default())
        })
        .map_err(err)?;
    let out = PyDict::new(py);
    let verdict = match r.verdict {
        Verdict::ExtZero => "ext-zero",
        Verdict::InvariantsZero => "invariants-zero",
        Verdict::InvariantsNonzero { witness_degree } => {
            out.set_item("witness_degree", witness_degree)?;
            "invariants-nonzero"
        }
    };
    out.set_item("verdict", verdict)?;
    out.set_item("j", r.j)?;
    out.set_item("projective_dimension", r.projective_dimension)?;
    out.set_item("window", r.window)?;
    out.set_item("summary", r.summary())?;
    Ok(out)
}

#[pymodule]
fn pysyzcalc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SyzcalcError", m.py().get_type::<SyzcalcError>())?;
    m.add("GuardError", m.py().get_type::<GuardError>())?;
    m.add_class::<Ring>()?;
    m.add_class::<Ideal>()?;
    m.add_class::<Module>()?;
    m.add_function(wrap_pyfunction!(koszul_of_sections, m)?)?;
    m.add_function(wrap_pyfunction!(ampleness_order, m)?)?;
    m.add_function(wrap_pyfunction!(curve_criterion, m)?)?;
    m.add_function(wrap_pyfunction!(effective_bound, m)?)?;
    m.add_function(wrap_pyfunction!(polygraph_check, m)?)?;
    Ok(())
}
