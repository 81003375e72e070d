//! Python bindings: profiles, base manifolds and the closed-form bundle
//! geometry, with reports returned as JSON strings.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use gnatural_core::bundle_metric::{assemble_block, inverse_block};
use gnatural_core::connection::{koszul_oracle_at, nabla_bar_lifts, BundleSite, LiftKind, KOSZUL_STEP};
use gnatural_core::curvature_lab::{constant_curvature_scan, flatness_check, r_bar_lifts, sectional_curvature_at};
use gnatural_core::profile::{classify, inverse_identity_residuals, load_profile, profile_from_json, psi_coeffs, sample_grid};
use gnatural_core::{ChartPoint, ChartedManifold, GeomError, LiftVector, Matrix, MetricProfile, TangentPoint, Vector};

fn py_err(e: GeomError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_err(e: serde_json::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rows(m: &Matrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn stacked(v: &LiftVector) -> Vec<f64> {
    v.stacked().iter().copied().collect()
}

/// A lift given as `[horizontal..., vertical...]` of length `2m`.
fn lift(values: &[f64], m: usize) -> PyResult<LiftVector> {
    if values.len() != 2 * m {
        return Err(PyValueError::new_err(format!("lift needs {} components, got {}", 2 * m, values.len())));
    }
    Ok(LiftVector::from_stacked(&Vector::from_column_slice(values)))
}

/// Metric profile `α₁, α₂, α₃, β₁, β₂, β₃` of `t = g(u, u)`.
#[pyclass(name = "Profile", frozen, module = "gnatural")]
pub struct PyProfile {
    inner: MetricProfile,
}

#[pymethods]
impl PyProfile {
    /// Preset name or path to a profile document.
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        Ok(PyProfile { inner: load_profile(spec).map_err(py_err)? })
    }

    /// Profile document given as a JSON string.
    #[staticmethod]
    #[pyo3(signature = (text, name = "custom"))]
    fn from_json(text: &str, name: &str) -> PyResult<Self> {
        Ok(PyProfile { inner: profile_from_json(text, name).map_err(py_err)? })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    /// `(α₁, α₂, α₃, β₁, β₂, β₃)` at `t`.
    fn values(&self, t: f64) -> [f64; 6] {
        let s = self.inner.sample(t);
        [s.alpha[0], s.alpha[1], s.alpha[2], s.beta[0], s.beta[1], s.beta[2]]
    }

    /// `"degenerate"`, `"nondegenerate_pseudo"` or `"riemannian"` on an
    /// evenly spaced grid of `[0, t_max]`.
    #[pyo3(signature = (t_max = 10.0, samples = 50))]
    fn classify(&self, t_max: f64, samples: usize) -> PyResult<String> {
        let c = classify(&self.inner, &sample_grid(t_max, samples));
        serde_json::to_value(c)
            .map(|v| v.as_str().unwrap_or_default().to_string())
            .map_err(json_err)
    }

    /// `(ψ_λ, ψ_θ, ψ_ω)` at `t`.
    fn psi(&self, t: f64) -> PyResult<(f64, f64, f64)> {
        let c = psi_coeffs(&self.inner, t).map_err(py_err)?;
        Ok((c.psi_lambda, c.psi_theta, c.psi_omega))
    }

    /// Residuals of the four linear identities satisfied by `ψ`.
    fn inverse_identity_residuals(&self, t: f64) -> PyResult<[f64; 4]> {
        inverse_identity_residuals(&self.inner, t).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Profile({:?})", self.inner.name())
    }
}

/// Built-in base manifold: `flat2`, `flat3`, `sphere2` or `halfplane2`.
#[pyclass(name = "Manifold", frozen, module = "gnatural")]
pub struct PyManifold {
    inner: ChartedManifold,
}

#[pymethods]
impl PyManifold {
    #[new]
    fn new(name: &str) -> PyResult<Self> {
        Ok(PyManifold { inner: ChartedManifold::builtin(name).map_err(py_err)? })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    /// Base metric `g(x)` as a list of rows.
    fn metric(&self, x: Vec<f64>) -> PyResult<Vec<Vec<f64>>> {
        Ok(rows(&self.inner.metric_at(&ChartPoint::new(&x)).map_err(py_err)?))
    }

    fn __repr__(&self) -> String {
        format!("Manifold({:?})", self.inner.name())
    }
}

fn tangent_point(man: &PyManifold, x: &[f64], u: &[f64]) -> PyResult<TangentPoint> {
    TangentPoint::new(&man.inner, ChartPoint::new(x), Vector::from_column_slice(u)).map_err(py_err)
}

fn site(profile: &PyProfile, man: &PyManifold, x: &[f64], u: &[f64]) -> PyResult<BundleSite> {
    BundleSite::new(&profile.inner, &man.inner, &tangent_point(man, x, u)?).map_err(py_err)
}

/// Bundle metric `G` at `(x, u)` in the lift frame, `2m × 2m`.
#[pyfunction]
fn metric_block(profile: &PyProfile, manifold: &PyManifold, x: Vec<f64>, u: Vec<f64>) -> PyResult<Vec<Vec<f64>>> {
    let at = tangent_point(manifold, &x, &u)?;
    Ok(rows(&assemble_block(&profile.inner, &at).full()))
}

/// Closed-form `G⁻¹` at `(x, u)` in the lift frame.
#[pyfunction]
fn inverse_metric_block(
    profile: &PyProfile,
    manifold: &PyManifold,
    x: Vec<f64>,
    u: Vec<f64>,
) -> PyResult<Vec<Vec<f64>>> {
    let at = tangent_point(manifold, &x, &u)?;
    Ok(rows(&inverse_block(&profile.inner, &at).map_err(py_err)?.full()))
}

/// Closed-form `∇̄_A B` for lifts `A`, `B` of constant fields.
#[pyfunction]
fn nabla_bar(
    profile: &PyProfile,
    manifold: &PyManifold,
    x: Vec<f64>,
    u: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
) -> PyResult<Vec<f64>> {
    let m = manifold.inner.dim();
    let s = site(profile, manifold, &x, &u)?;
    Ok(stacked(&nabla_bar_lifts(&s, &lift(&a, m)?, &lift(&b, m)?)))
}

/// Koszul-formula oracle for `∇̄_A B`, from finite differences of `G`.
#[pyfunction]
fn koszul_oracle(
    profile: &PyProfile,
    manifold: &PyManifold,
    x: Vec<f64>,
    u: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
) -> PyResult<Vec<f64>> {
    let m = manifold.inner.dim();
    let s = site(profile, manifold, &x, &u)?;
    let (a, b) = (lift(&a, m)?, lift(&b, m)?);
    let mut total = LiftVector::zeros(m);
    for (kind, p, q) in [
        (LiftKind::Hh, &a.h, &b.h),
        (LiftKind::Hv, &a.h, &b.v),
        (LiftKind::Vh, &a.v, &b.h),
        (LiftKind::Vv, &a.v, &b.v),
    ] {
        total = total + koszul_oracle_at(&profile.inner, &manifold.inner, &s, kind, p, q, KOSZUL_STEP).map_err(py_err)?;
    }
    Ok(stacked(&total))
}

/// Closed-form curvature `R̄(A, B)C`.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
fn r_bar(
    profile: &PyProfile,
    manifold: &PyManifold,
    x: Vec<f64>,
    u: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
) -> PyResult<Vec<f64>> {
    let m = manifold.inner.dim();
    let s = site(profile, manifold, &x, &u)?;
    Ok(stacked(&r_bar_lifts(&s, &lift(&a, m)?, &lift(&b, m)?, &lift(&c, m)?)))
}

/// Sectional curvature of the plane spanned by lifts `A`, `B`.
#[pyfunction]
fn sectional_curvature(
    profile: &PyProfile,
    manifold: &PyManifold,
    x: Vec<f64>,
    u: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
) -> PyResult<f64> {
    let m = manifold.inner.dim();
    let s = site(profile, manifold, &x, &u)?;
    sectional_curvature_at(&s, &lift(&a, m)?, &lift(&b, m)?).map_err(py_err)
}

/// Seeded sectional-curvature scan; the report as a JSON string.
#[pyfunction]
#[pyo3(signature = (profile, manifold, sites = 8, planes = 6, seed = 0))]
fn curvature_scan(profile: &PyProfile, manifold: &PyManifold, sites: usize, planes: usize, seed: u64) -> PyResult<String> {
    let report = constant_curvature_scan(&profile.inner, &manifold.inner, sites, planes, seed);
    serde_json::to_string(&report).map_err(json_err)
}

/// Flatness conditions on a grid of `[0, t_max]`; the report as a JSON string.
#[pyfunction]
#[pyo3(signature = (profile, manifold, t_max = 10.0, samples = 50))]
fn flatness(profile: &PyProfile, manifold: &PyManifold, t_max: f64, samples: usize) -> PyResult<String> {
    let report = flatness_check(&profile.inner, &manifold.inner, &sample_grid(t_max, samples));
    serde_json::to_string(&report).map_err(json_err)
}

#[pymodule]
fn gnatural(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProfile>()?;
    m.add_class::<PyManifold>()?;
    m.add_function(wrap_pyfunction!(metric_block, m)?)?;
    m.add_function(wrap_pyfunction!(inverse_metric_block, m)?)?;
    m.add_function(wrap_pyfunction!(nabla_bar, m)?)?;
    m.add_function(wrap_pyfunction!(koszul_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(r_bar, m)?)?;
    m.add_function(wrap_pyfunction!(sectional_curvature, m)?)?;
    m.add_function(wrap_pyfunction!(curvature_scan, m)?)?;
    m.add_function(wrap_pyfunction!(flatness, m)?)?;
    Ok(())
}
