//! The six defining functions `α₁, α₂, α₃, β₁, β₂, β₃` of a g-natural metric,
//! the quantities derived from them, and the nondegeneracy / Riemannian
//! classification.
//!
//! All functions are functions of `t = g_x(u, u) >= 0`.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::error::{GeomError, Result};
use crate::fd;

/// Threshold on `|α φ|` below which a metric is treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Step of the finite-difference fallback for missing derivatives.
pub const FALLBACK_DERIVATIVE_STEP: f64 = 1e-6;

/// Default classification grid: 64 points on `[0, 10]`.
pub const DEFAULT_GRID_POINTS: usize = 64;
pub const DEFAULT_T_MAX: f64 = 10.0;

/// Preset names accepted by [`MetricProfile::preset`].
pub const PRESETS: [&str; 3] = ["sasaki", "flat-family", "scaled-sasaki"];

/// Polynomial in `t` with coefficients in ascending powers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Polynomial { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Polynomial { coeffs: vec![c] }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: vec![] }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| k as f64 * c)
                .collect(),
        }
    }

    /// `self + c` (shifts the constant term).
    pub fn shifted(&self, c: f64) -> Polynomial {
        let mut coeffs = self.coeffs.clone();
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        coeffs[0] += c;
        Polynomial { coeffs }
    }
}

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// One of the six profile functions together with its derivative.
#[derive(Clone)]
pub enum ScalarFn {
    Poly(Polynomial),
    /// Arbitrary function; when no derivative is supplied a central
    /// difference with step [`FALLBACK_DERIVATIVE_STEP`] is used.
    Custom { f: RealFn, df: Option<RealFn> },
}

impl fmt::Debug for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarFn::Poly(p) => write!(f, "Poly({:?})", p.coeffs),
            ScalarFn::Custom { df, .. } => write!(f, "Custom(analytic derivative: {})", df.is_some()),
        }
    }
}

impl ScalarFn {
    pub fn custom(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        df: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        ScalarFn::Custom {
            f: Arc::new(f),
            df: Some(Arc::new(df)),
        }
    }

    pub fn without_derivative(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        ScalarFn::Custom {
            f: Arc::new(f),
            df: None,
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            ScalarFn::Poly(p) => p.eval(t),
            ScalarFn::Custom { f, .. } => f(t),
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match self {
            ScalarFn::Poly(p) => p.derivative().eval(t),
            ScalarFn::Custom { df: Some(df), .. } => df(t),
            ScalarFn::Custom { f, df: None } => {
                fd::derivative_nonneg(|s| f(s), t, FALLBACK_DERIVATIVE_STEP)
            }
        }
    }

    fn has_analytic_derivative(&self) -> bool {
        !matches!(self, ScalarFn::Custom { df: None, .. })
    }
}

/// Index of a profile function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Component {
    Alpha1,
    Alpha2,
    Alpha3,
    Beta1,
    Beta2,
    Beta3,
}

impl Component {
    pub const ALL: [Component; 6] = [
        Component::Alpha1,
        Component::Alpha2,
        Component::Alpha3,
        Component::Beta1,
        Component::Beta2,
        Component::Beta3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Component::Alpha1 => "alpha1",
            Component::Alpha2 => "alpha2",
            Component::Alpha3 => "alpha3",
            Component::Beta1 => "beta1",
            Component::Beta2 => "beta2",
            Component::Beta3 => "beta3",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// The six functions defining a g-natural metric.
#[derive(Clone, Debug)]
pub struct MetricProfile {
    name: String,
    funcs: [ScalarFn; 6],
}

/// Values and first derivatives of the six functions at one `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfileSample {
    pub t: f64,
    /// `[α₁, α₂, α₃]`
    pub alpha: [f64; 3],
    /// `[β₁, β₂, β₃]`
    pub beta: [f64; 3],
    pub d_alpha: [f64; 3],
    pub d_beta: [f64; 3],
}

impl MetricProfile {
    /// Builds a profile from six functions in the order `α₁ α₂ α₃ β₁ β₂ β₃`.
    pub fn from_fns(name: impl Into<String>, funcs: [ScalarFn; 6]) -> Self {
        let name = name.into();
        for (c, f) in Component::ALL.iter().zip(funcs.iter()) {
            if !f.has_analytic_derivative() {
                log::warn!(
                    "profile `{name}`: no derivative supplied for {}, using finite differences",
                    c.name()
                );
            }
        }
        MetricProfile { name, funcs }
    }

    /// Polynomial profile; coefficient lists in ascending powers of `t`.
    pub fn polynomial(name: impl Into<String>, polys: [Polynomial; 6]) -> Self {
        MetricProfile {
            name: name.into(),
            funcs: polys.map(ScalarFn::Poly),
        }
    }

    /// Named preset: `sasaki`, `flat-family` or `scaled-sasaki`.
    pub fn preset(name: &str) -> Result<Self> {
        let p = Polynomial::new;
        match name {
            "sasaki" => Ok(Self::polynomial(
                "sasaki",
                [
                    p(vec![1.0]),
                    Polynomial::zero(),
                    Polynomial::zero(),
                    Polynomial::zero(),
                    Polynomial::zero(),
                    Polynomial::zero(),
                ],
            )),
            // α₁+α₃ ≡ 1, β₁+β₃ ≡ 0, 2α₂' = β₂, α₁' = α₂β₂, β₁ = β₂(2α₂ + tβ₂)
            "flat-family" => Ok(Self::polynomial(
                "flat-family",
                [
                    p(vec![1.0, 0.0, 1.0]),
                    p(vec![0.0, 1.0]),
                    p(vec![0.0, 0.0, -1.0]),
                    p(vec![0.0, 8.0]),
                    p(vec![2.0]),
                    p(vec![0.0, -8.0]),
                ],
            )),
            "scaled-sasaki" => Self::scaled_sasaki(2.0, 3.0),
            other => Err(GeomError::UnknownPreset(other.to_string())),
        }
    }

    /// `α₁ ≡ a`, `α₃ ≡ c − a`, everything else zero; Riemannian and flat
    /// over a flat base whenever `a > 0` and `c > 0`.
    pub fn scaled_sasaki(a: f64, c: f64) -> Result<Self> {
        if !(a > 0.0 && c > 0.0) {
            return Err(GeomError::InvalidProfile(format!(
                "scaled-sasaki needs a > 0 and c > 0, got a = {a}, c = {c}"
            )));
        }
        Ok(Self::polynomial(
            "scaled-sasaki",
            [
                Polynomial::constant(a),
                Polynomial::zero(),
                Polynomial::constant(c - a),
                Polynomial::zero(),
                Polynomial::zero(),
                Polynomial::zero(),
            ],
        ))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn function(&self, c: Component) -> &ScalarFn {
        &self.funcs[c.index()]
    }

    /// Replaces one function, e.g. to perturb a preset.
    pub fn with_function(mut self, c: Component, f: ScalarFn) -> Self {
        self.funcs[c.index()] = f;
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Polynomial coefficients of every function, when the profile is polynomial.
    pub fn polynomials(&self) -> Option<[Polynomial; 6]> {
        let mut out: [Polynomial; 6] = Default::default();
        for (slot, f) in out.iter_mut().zip(self.funcs.iter()) {
            match f {
                ScalarFn::Poly(p) => *slot = p.clone(),
                ScalarFn::Custom { .. } => return None,
            }
        }
        Some(out)
    }

    pub fn sample(&self, t: f64) -> ProfileSample {
        let v = |i: usize| self.funcs[i].value(t);
        let d = |i: usize| self.funcs[i].derivative(t);
        ProfileSample {
            t,
            alpha: [v(0), v(1), v(2)],
            beta: [v(3), v(4), v(5)],
            d_alpha: [d(0), d(1), d(2)],
            d_beta: [d(3), d(4), d(5)],
        }
    }

    /// Supplied derivatives against central differences; returns
    /// `(component, t, relative error)` for every sample exceeding `1e-6`.
    pub fn derivative_consistency(&self, t_samples: &[f64]) -> Vec<(Component, f64, f64)> {
        let mut bad = Vec::new();
        for c in Component::ALL {
            let f = self.function(c);
            for &t in t_samples {
                let numeric = fd::derivative_nonneg(|s| f.value(s), t, 1e-4);
                let supplied = f.derivative(t);
                let rel = (numeric - supplied).abs() / supplied.abs().max(1.0);
                if rel > 1e-6 {
                    bad.push((c, t, rel));
                }
            }
        }
        bad
    }

    /// Profile document for polynomial profiles (preset profiles are written
    /// by name).
    pub fn to_document(&self) -> Option<ProfileDocument> {
        if PRESETS.contains(&self.name.as_str()) {
            return Some(ProfileDocument {
                schema: 1,
                preset: Some(self.name.clone()),
                polynomial: None,
            });
        }
        let [alpha1, alpha2, alpha3, beta1, beta2, beta3] = self.polynomials()?;
        Some(ProfileDocument {
            schema: 1,
            preset: None,
            polynomial: Some(PolynomialSpec {
                alpha1,
                alpha2,
                alpha3,
                beta1,
                beta2,
                beta3,
            }),
        })
    }
}

impl ProfileSample {
    /// `φ_i = α_i + t β_i`.
    pub fn phi(&self) -> [f64; 3] {
        [0, 1, 2].map(|i| self.alpha[i] + self.t * self.beta[i])
    }

    /// `α = α₁(α₁+α₃) − α₂²`.
    pub fn alpha_det(&self) -> f64 {
        let [a1, a2, a3] = self.alpha;
        a1 * (a1 + a3) - a2 * a2
    }

    /// `φ₁+φ₃`, summed as `(α₁+α₃) + t(β₁+β₃)` so that large opposite
    /// `φ₁` and `φ₃` do not cancel.
    pub fn phi_sum(&self) -> f64 {
        (self.alpha[0] + self.alpha[2]) + self.t * (self.beta[0] + self.beta[2])
    }

    /// `φ = φ₁(φ₁+φ₃) − φ₂²`.
    pub fn phi_det(&self) -> f64 {
        let [p1, p2, _] = self.phi();
        p1 * self.phi_sum() - p2 * p2
    }

    pub fn derived(&self) -> DerivedValues {
        let phi = self.phi();
        let d_phi = [0, 1, 2].map(|i| self.d_alpha[i] + self.beta[i] + self.t * self.d_beta[i]);
        let [a1, a2, a3] = self.alpha;
        let [da1, da2, da3] = self.d_alpha;
        let [p1, p2, _] = phi;
        let [dp1, dp2, dp3] = d_phi;
        DerivedValues {
            t: self.t,
            phi,
            alpha_det: self.alpha_det(),
            phi_det: self.phi_det(),
            d_phi,
            d_alpha_det: da1 * (a1 + a3) + a1 * (da1 + da3) - 2.0 * a2 * da2,
            d_phi_det: dp1 * self.phi_sum() + p1 * (dp1 + dp3) - 2.0 * p2 * dp2,
        }
    }

    fn check_nondegenerate(&self) -> Result<()> {
        let value = self.alpha_det() * self.phi_det();
        if value.abs() < DEGENERACY_TOL || !value.is_finite() {
            return Err(GeomError::DegenerateAt { t: self.t, value });
        }
        Ok(())
    }
}

/// `φ_i`, `α`, `φ` and their `t`-derivatives at one `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivedValues {
    pub t: f64,
    pub phi: [f64; 3],
    pub alpha_det: f64,
    pub phi_det: f64,
    pub d_phi: [f64; 3],
    pub d_alpha_det: f64,
    pub d_phi_det: f64,
}

/// Derived functions of a profile.
#[derive(Clone, Debug)]
pub struct DerivedProfile {
    profile: MetricProfile,
}

impl DerivedProfile {
    pub fn at(&self, t: f64) -> DerivedValues {
        self.profile.sample(t).derived()
    }
}

pub fn derive(p: &MetricProfile) -> DerivedProfile {
    DerivedProfile { profile: p.clone() }
}

/// Classification of a profile on a sample grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Degenerate,
    NondegeneratePseudo,
    Riemannian,
}

/// `n` equally spaced points on `[0, t_max]`.
pub fn sample_grid(t_max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![0.0],
        _ => (0..n).map(|k| t_max * k as f64 / (n - 1) as f64).collect(),
    }
}

/// Degenerate if `|αφ| < 1e-12` somewhere on the grid, Riemannian if
/// `α₁, φ₁, α, φ > 0` everywhere on it, pseudo-Riemannian otherwise.
pub fn classify(p: &MetricProfile, t_samples: &[f64]) -> Classification {
    let mut riemannian = true;
    for &t in t_samples {
        let s = p.sample(t);
        if s.check_nondegenerate().is_err() {
            return Classification::Degenerate;
        }
        let phi = s.phi();
        riemannian &= s.alpha[0] > 0.0 && phi[0] > 0.0 && s.alpha_det() > 0.0 && s.phi_det() > 0.0;
    }
    if riemannian {
        Classification::Riemannian
    } else {
        Classification::NondegeneratePseudo
    }
}

/// Coefficients `ψ_λ, ψ_θ, ψ_ω` of the closed-form inverse.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InverseCoefficients {
    pub psi_lambda: f64,
    pub psi_theta: f64,
    pub psi_omega: f64,
    /// `α₁(α₁+α₃)` at `t`.
    pub side_alpha: f64,
    /// `φ₁(φ₁+φ₃)` at `t`.
    pub side_phi: f64,
    pub t: f64,
}

impl InverseCoefficients {
    /// The two extra nonvanishing conditions under which the block inverse
    /// is derived: `α₁(α₁+α₃) ≠ 0` and `φ₁(φ₁+φ₃) ≠ 0`.
    pub fn check_side_conditions(&self) -> Result<()> {
        if self.side_alpha.abs() < DEGENERACY_TOL {
            return Err(GeomError::SideConditionFailed {
                t: self.t,
                condition: "alpha1*(alpha1+alpha3) != 0",
                value: self.side_alpha,
            });
        }
        if self.side_phi.abs() < DEGENERACY_TOL {
            return Err(GeomError::SideConditionFailed {
                t: self.t,
                condition: "phi1*(phi1+phi3) != 0",
                value: self.side_phi,
            });
        }
        Ok(())
    }
}

pub fn psi_coeffs(p: &MetricProfile, t: f64) -> Result<InverseCoefficients> {
    psi_from_sample(&p.sample(t))
}

pub(crate) fn psi_from_sample(s: &ProfileSample) -> Result<InverseCoefficients> {
    s.check_nondegenerate()?;
    let w = WideSample::new(s);
    let denom = w.alpha_det() * w.phi_det();
    let common = w.bs * w.p1 - w.b2 * w.p2;
    let cross = w.cross();
    let omega = w.a_s * (w.b1 * w.ps - w.b2 * w.p2) + w.a2 * (w.a2 * w.bs - w.b2 * w.a_s);
    Ok(InverseCoefficients {
        psi_lambda: f64::from((w.a1 * common - w.a2 * cross) / denom),
        psi_theta: f64::from((-w.a2 * common + w.a_s * cross) / denom),
        psi_omega: f64::from(omega / denom),
        side_alpha: f64::from(w.a1 * w.a_s),
        side_phi: f64::from(w.p1 * w.ps),
        t: s.t,
    })
}

/// Profile values carried in double-double precision.
///
/// The inverse coefficients are ratios of determinants that cancel heavily
/// at large `t` (the flat family has `φ = 1` built from terms near `t²`),
/// so they are formed in extended precision and rounded once.
struct WideSample {
    a1: TwoFloat,
    a2: TwoFloat,
    a_s: TwoFloat,
    b1: TwoFloat,
    b2: TwoFloat,
    bs: TwoFloat,
    p1: TwoFloat,
    p2: TwoFloat,
    ps: TwoFloat,
}

impl WideSample {
    fn new(s: &ProfileSample) -> Self {
        let w = |x: f64| TwoFloat::from(x);
        let t = w(s.t);
        let [a1, a2, a3] = s.alpha.map(w);
        let [b1, b2, b3] = s.beta.map(w);
        let (a_s, bs) = (a1 + a3, b1 + b3);
        WideSample { a1, a2, a_s, b1, b2, bs, p1: a1 + t * b1, p2: a2 + t * b2, ps: a_s + t * bs }
    }

    fn alpha_det(&self) -> TwoFloat {
        self.a1 * self.a_s - self.a2 * self.a2
    }

    fn phi_det(&self) -> TwoFloat {
        self.p1 * self.ps - self.p2 * self.p2
    }

    fn cross(&self) -> TwoFloat {
        self.a1 * self.b2 - self.a2 * self.b1
    }
}

/// Residuals (LHS − RHS) of the four linear identities tying `ψ_λ, ψ_θ, ψ_ω`
/// to the profile.
///
/// The coefficients enter as rounded `f64` values; the identities themselves
/// are evaluated in double-double so that only the rounding of `ψ` shows up.
pub fn inverse_identity_residuals(p: &MetricProfile, t: f64) -> Result<[f64; 4]> {
    let s = p.sample(t);
    let psi = psi_from_sample(&s)?;
    let w = WideSample::new(&s);
    let al = w.alpha_det();
    let pl = TwoFloat::from(psi.psi_lambda);
    let pt = TwoFloat::from(psi.psi_theta);
    let po = TwoFloat::from(psi.psi_omega);
    Ok([
        w.p2 * pl + w.p1 * pt - w.cross() / al,
        w.ps * pl + w.p2 * pt - (w.a1 * w.bs - w.a2 * w.b2) / al,
        w.p2 * pt + w.p1 * po - (w.a_s * w.b1 - w.a2 * w.b2) / al,
        w.ps * pt + w.p2 * po - (w.a_s * w.b2 - w.a2 * w.bs) / al,
    ]
    .map(f64::from))
}

/// JSON profile document: either a preset name or six coefficient lists.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileDocument {
    #[serde(default = "default_schema")]
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polynomial: Option<PolynomialSpec>,
}

fn default_schema() -> u32 {
    1
}

/// Coefficients in ascending powers of `t`; omitted functions are zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct PolynomialSpec {
    #[serde(default)]
    pub alpha1: Polynomial,
    #[serde(default)]
    pub alpha2: Polynomial,
    #[serde(default)]
    pub alpha3: Polynomial,
    #[serde(default)]
    pub beta1: Polynomial,
    #[serde(default)]
    pub beta2: Polynomial,
    #[serde(default)]
    pub beta3: Polynomial,
}

impl ProfileDocument {
    pub fn into_profile(self, name: &str) -> Result<MetricProfile> {
        if self.schema != 1 {
            return Err(GeomError::InvalidProfile(format!(
                "unsupported profile schema {}",
                self.schema
            )));
        }
        match (self.preset, self.polynomial) {
            (Some(preset), None) => MetricProfile::preset(&preset),
            (None, Some(spec)) => {
                let polys = [
                    spec.alpha1,
                    spec.alpha2,
                    spec.alpha3,
                    spec.beta1,
                    spec.beta2,
                    spec.beta3,
                ];
                if polys.iter().flat_map(|p| p.coeffs()).any(|c| !c.is_finite()) {
                    return Err(GeomError::InvalidProfile("non-finite coefficient".into()));
                }
                Ok(MetricProfile::polynomial(name, polys))
            }
            _ => Err(GeomError::InvalidProfile(
                "profile document needs exactly one of `preset` or `polynomial`".into(),
            )),
        }
    }
}

/// Parses a profile document from JSON text.
pub fn profile_from_json(text: &str, name: &str) -> Result<MetricProfile> {
    let doc: ProfileDocument =
        serde_json::from_str(text).map_err(|e| GeomError::InvalidProfile(e.to_string()))?;
    doc.into_profile(name)
}

/// A preset name, or else a path to a profile document.
pub fn load_profile(spec: &str) -> Result<MetricProfile> {
    if PRESETS.contains(&spec) {
        return MetricProfile::preset(spec);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(GeomError::UnknownPreset(spec.to_string()));
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| GeomError::InvalidProfile(format!("{}: {e}", path.display())))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "custom".into());
    profile_from_json(&text, &name)
}

/// Random polynomial profile that is Riemannian with margin on `[0, t_max]`.
///
/// Rejection-samples low-degree polynomials until `α₁, φ₁, α, φ` all stay
/// above `0.05` on a 256-point grid.
pub fn random_riemannian_polynomial<R: Rng + ?Sized>(rng: &mut R, t_max: f64) -> MetricProfile {
    loop {
        let alpha1 = Polynomial::new(vec![
            rng.random_range(0.5..2.0),
            rng.random_range(0.0..0.5),
            rng.random_range(0.0..0.05),
        ]);
        let alpha2 = Polynomial::new(vec![rng.random_range(-0.4..0.4), rng.random_range(-0.1..0.1)]);
        let alpha3 = Polynomial::new(vec![rng.random_range(-0.3..1.0), rng.random_range(-0.05..0.3)]);
        let beta1 = Polynomial::new(vec![rng.random_range(0.0..0.4), rng.random_range(0.0..0.05)]);
        let beta2 = Polynomial::new(vec![rng.random_range(-0.3..0.3), rng.random_range(-0.02..0.02)]);
        let beta3 = Polynomial::new(vec![rng.random_range(-0.1..0.4), rng.random_range(-0.02..0.05)]);
        let p = MetricProfile::polynomial(
            "random-polynomial",
            [alpha1, alpha2, alpha3, beta1, beta2, beta3],
        );
        let ok = sample_grid(t_max, 256).into_iter().all(|t| {
            let s = p.sample(t);
            let phi = s.phi();
            s.alpha[0].min(phi[0]).min(s.alpha_det()).min(s.phi_det()) > 0.05
        });
        if ok {
            return p;
        }
    }
}
