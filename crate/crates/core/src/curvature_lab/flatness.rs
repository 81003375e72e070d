//! Algebraic characterisation of flat g-natural metrics and the auxiliary
//! system on the vertical-vertical table.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::base_manifold::ChartedManifold;
use crate::connection::{table_derivatives, tables_from_sample};
use crate::error::Result;
use crate::profile::{classify, Classification, MetricProfile};

/// Base points sampled for the flat-base condition.
pub const BASE_SAMPLES: usize = 10;
/// Bound on `max |R|` for the base to count as flat.
pub const BASE_FLAT_TOL: f64 = 1e-8;
/// Bound on the profile residuals.
pub const PROFILE_TOL: f64 = 1e-10;

/// The conditions whose conjunction characterises flatness of `(TM, G)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FlatnessCondition {
    /// `(M, g)` is flat.
    FlatBase,
    /// `G` is Riemannian.
    Riemannian,
    /// `(α₁+α₃)' = 0` and `α₁+α₃ > 0`.
    ConstantHorizontalSum,
    /// `β₁ + β₃ = 0`.
    VanishingBetaSum,
    /// `2α₂' = β₂`.
    AlphaTwoSlope,
    /// `α₁' = α₂β₂/(α₁+α₃)`.
    AlphaOneSlope,
    /// `β₁ = β₂(2α₂ + tβ₂)/(α₁+α₃)`.
    BetaOne,
}

impl FlatnessCondition {
    pub fn label(self) -> &'static str {
        match self {
            FlatnessCondition::FlatBase => "i",
            FlatnessCondition::Riemannian => "ii",
            FlatnessCondition::ConstantHorizontalSum
            | FlatnessCondition::VanishingBetaSum
            | FlatnessCondition::AlphaTwoSlope => "iii",
            FlatnessCondition::AlphaOneSlope | FlatnessCondition::BetaOne => "iv",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlatnessViolation {
    pub condition: FlatnessCondition,
    pub label: &'static str,
    /// `t` of the first failing sample, for profile conditions.
    pub t: Option<f64>,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlatnessReport {
    pub flat: bool,
    pub verdict: &'static str,
    pub classification: Classification,
    /// Worst residual per condition, reported whether or not it passed.
    pub residuals: BTreeMap<FlatnessCondition, f64>,
    pub violations: Vec<FlatnessViolation>,
}

/// Checks every flatness condition on `man` and on the sampled `t` values
/// and reports all that fail.
pub fn flatness_check(p: &MetricProfile, man: &ChartedManifold, t_samples: &[f64]) -> FlatnessReport {
    let mut residuals = BTreeMap::new();
    let mut violations = Vec::new();
    let mut record = |cond: FlatnessCondition, t: Option<f64>, r: f64, ok: bool| {
        let slot = residuals.entry(cond).or_insert(0.0_f64);
        if r.abs() > *slot || r.is_nan() {
            *slot = r.abs();
        }
        if !ok && !violations.iter().any(|v: &FlatnessViolation| v.condition == cond) {
            violations.push(FlatnessViolation { condition: cond, label: cond.label(), t, residual: r });
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut base_max = 0.0_f64;
    for _ in 0..BASE_SAMPLES {
        let x = man.sample_point(&mut rng);
        base_max = match man.riemann_at(&x) {
            Ok(r) => base_max.max(r.max_abs()),
            Err(_) => f64::INFINITY,
        };
    }
    record(FlatnessCondition::FlatBase, None, base_max, base_max < BASE_FLAT_TOL);

    let classification = classify(p, t_samples);
    let riemannian = classification == Classification::Riemannian;
    record(FlatnessCondition::Riemannian, None, if riemannian { 0.0 } else { 1.0 }, riemannian);

    for &t in t_samples {
        let s = p.sample(t);
        let [a1, a2, a3] = s.alpha;
        let [b1, b2, b3] = s.beta;
        let [da1, da2, da3] = s.d_alpha;
        let sum = a1 + a3;
        let ok = |r: f64| r.abs() < PROFILE_TOL;
        let slope = da1 + da3;
        record(FlatnessCondition::ConstantHorizontalSum, Some(t), slope, ok(slope) && sum > 0.0);
        record(FlatnessCondition::VanishingBetaSum, Some(t), b1 + b3, ok(b1 + b3));
        let c = 2.0 * da2 - b2;
        record(FlatnessCondition::AlphaTwoSlope, Some(t), c, ok(c));
        let d1 = da1 - a2 * b2 / sum;
        record(FlatnessCondition::AlphaOneSlope, Some(t), d1, ok(d1));
        let d2 = b1 - b2 * (2.0 * a2 + t * b2) / sum;
        record(FlatnessCondition::BetaOne, Some(t), d2, ok(d2));
    }

    let flat = violations.is_empty();
    FlatnessReport {
        flat,
        verdict: if flat { "flat" } else { "not_flat" },
        classification,
        residuals,
        violations,
    }
}

/// Residuals at one `t` of the conditions on a flat metric's profile and of
/// the system `t f₆f₇ + f₇ − f₆ = 0`, `f₆² + t f₆f₈ + f₈ = 2f₆'`,
/// `f₇² + t f₈f₇ + f₈ = 2f₇'` on the vertical-vertical table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VerticalSystemResiduals {
    pub t: f64,
    pub beta_sum: f64,
    pub horizontal_sum_slope: f64,
    pub alpha_two_slope: f64,
    pub f6: f64,
    pub f7: f64,
    pub f8: f64,
    pub system: [f64; 3],
}

impl VerticalSystemResiduals {
    pub fn max_abs(&self) -> f64 {
        [
            self.beta_sum,
            self.horizontal_sum_slope,
            self.alpha_two_slope,
            self.f6,
            self.f7,
            self.f8,
            self.system[0],
            self.system[1],
            self.system[2],
        ]
        .iter()
        .fold(0.0, |a, r| a.max(r.abs()))
    }
}

pub fn vertical_system_residuals(p: &MetricProfile, t_samples: &[f64]) -> Result<Vec<VerticalSystemResiduals>> {
    t_samples
        .iter()
        .map(|&t| {
            let s = p.sample(t);
            let f = tables_from_sample(&s)?.f.f;
            let df = table_derivatives(p, t)?.f.f;
            let (f6, f7, f8) = (f[5], f[6], f[7]);
            Ok(VerticalSystemResiduals {
                t,
                beta_sum: s.beta[0] + s.beta[2],
                horizontal_sum_slope: s.d_alpha[0] + s.d_alpha[2],
                alpha_two_slope: 2.0 * s.d_alpha[1] - s.beta[1],
                f6,
                f7,
                f8,
                system: [
                    t * f6 * f7 + f7 - f6,
                    f6 * f6 + t * f6 * f8 + f8 - 2.0 * df[5],
                    f7 * f7 + t * f8 * f7 + f8 - 2.0 * df[6],
                ],
            })
        })
        .collect()
}
