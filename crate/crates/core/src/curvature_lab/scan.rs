//! Sampling of sectional curvatures over `TM` and the constant-curvature
//! verdict.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::base_manifold::{ChartedManifold, Vector};
use crate::bundle_metric::LiftVector;
use crate::connection::BundleSite;
use crate::error::Result;
use crate::profile::MetricProfile;
use crate::sampling::{derive_seed, random_vector, tangent_point_with_norm};

use super::formulas::{combinators, r_bar_at, CurvatureCase};
use super::oracle::sectional_curvature_at;

/// Fibre norms `|u|` cycled through by the scan sites.
pub const SITE_NORMS: [f64; 4] = [0.0, 0.5, 1.0, 2.0];

/// Threshold on `|K|` and on the spread of `K` for a flat verdict.
pub const FLAT_TOL: f64 = 1e-6;

/// Attempts at drawing a nondegenerate plane before a sample is skipped.
const PLANE_ATTEMPTS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PlaneKind {
    /// `span(X^h, Y^h)`
    Horizontal,
    /// `span(X^v, Y^v)`
    Vertical,
    /// `span(X^h, Y^v)`
    Mixed,
}

impl PlaneKind {
    fn for_index(j: usize) -> Self {
        [PlaneKind::Horizontal, PlaneKind::Vertical, PlaneKind::Mixed][j % 3]
    }

    fn lifts(self, x: Vector, y: Vector) -> (LiftVector, LiftVector) {
        match self {
            PlaneKind::Horizontal => (LiftVector::horizontal(x), LiftVector::horizontal(y)),
            PlaneKind::Vertical => (LiftVector::vertical(x), LiftVector::vertical(y)),
            PlaneKind::Mixed => (LiftVector::horizontal(x), LiftVector::vertical(y)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanVerdict {
    /// Every sampled `|K|` and the spread are below [`FLAT_TOL`].
    Flat,
    ConstantNonzero,
    NonConstant,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureSample {
    pub site: usize,
    pub plane: usize,
    pub kind: PlaneKind,
    pub k: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanSite {
    pub index: usize,
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    pub t: f64,
    /// Largest `|R̄|∞` over the six cases on random arguments.
    pub curvature_max: f64,
}

/// Residuals of the necessary system for constant curvature `K`, maximised
/// over sites: `a₁(A,A)+a₁(C,B) − K(α₁+α₃)`, `a₂(A,A)+a₂(C,B) − K(β₁+β₃)`,
/// `a₃(A,A)+a₃(C,B)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConstantCurvatureResiduals {
    pub k: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl ConstantCurvatureResiduals {
    pub fn max_abs(&self) -> f64 {
        self.a1.abs().max(self.a2.abs()).max(self.a3.abs())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub profile: String,
    pub manifold: String,
    pub dim: usize,
    pub seed: u64,
    pub k_min: f64,
    pub k_max: f64,
    pub spread: f64,
    pub curvature_max: f64,
    pub verdict: ScanVerdict,
    /// Present when the verdict is a constant `K`.
    pub constant_curvature_residuals: Option<ConstantCurvatureResiduals>,
    /// `|K (α₁+α₃)(0)|`, present on a flat verdict.
    pub zero_section_residual: Option<f64>,
    pub warnings: Vec<String>,
    pub errors: Vec<String>,
    pub sites: Vec<ScanSite>,
    pub samples: Vec<CurvatureSample>,
}

impl ScanReport {
    /// One row per sample with header `site,plane,k`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("site,plane,k\n");
        for s in &self.samples {
            out.push_str(&format!("{},{},{:e}\n", s.site, s.plane, s.k));
        }
        out
    }
}

struct SiteOutcome {
    site: ScanSite,
    samples: Vec<CurvatureSample>,
    site_tables: BundleSite,
}

fn scan_site(
    p: &MetricProfile,
    man: &ChartedManifold,
    index: usize,
    planes: usize,
    seed: u64,
) -> Result<SiteOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, index as u64));
    let m = man.dim();
    let x = man.sample_point(&mut rng);
    let at = tangent_point_with_norm(man, &mut rng, x, SITE_NORMS[index % SITE_NORMS.len()]);
    let site = BundleSite::new(p, man, &at)?;

    let curvature_max = CurvatureCase::ALL
        .iter()
        .map(|case| {
            let (x, y, z) = (random_vector(&mut rng, m), random_vector(&mut rng, m), random_vector(&mut rng, m));
            r_bar_at(&site, *case, &x, &y, &z).amax()
        })
        .fold(0.0, f64::max);

    let mut samples = Vec::with_capacity(planes);
    for plane in 0..planes {
        let kind = PlaneKind::for_index(plane);
        for _ in 0..PLANE_ATTEMPTS {
            let (a, b) = kind.lifts(random_vector(&mut rng, m), random_vector(&mut rng, m));
            if let Ok(k) = sectional_curvature_at(&site, &a, &b) {
                samples.push(CurvatureSample { site: index, plane, kind, k });
                break;
            }
        }
    }
    Ok(SiteOutcome {
        site: ScanSite {
            index,
            x: at.x.coords().iter().copied().collect(),
            u: at.u.iter().copied().collect(),
            t: at.t,
            curvature_max,
        },
        samples,
        site_tables: site,
    })
}

/// Samples sectional curvatures of `n_planes` planes at each of `n_sites`
/// sites. Each site draws from its own seeded stream, so the report does
/// not depend on the number of worker threads.
pub fn constant_curvature_scan(
    p: &MetricProfile,
    man: &ChartedManifold,
    n_sites: usize,
    n_planes: usize,
    seed: u64,
) -> ScanReport {
    let mut warnings = Vec::new();
    if man.dim() == 2 {
        let msg = "base dimension is 2: a constant-curvature verdict does not force flatness below dimension 3".to_string();
        log::warn!("{msg}");
        warnings.push(msg);
    }
    let outcomes: Vec<(usize, Result<SiteOutcome>)> = (0..n_sites)
        .into_par_iter()
        .map(|i| (i, scan_site(p, man, i, n_planes, seed)))
        .collect();

    let mut sites = Vec::new();
    let mut samples = Vec::new();
    let mut errors = Vec::new();
    let mut tables = Vec::new();
    for (i, outcome) in outcomes {
        match outcome {
            Ok(o) => {
                sites.push(o.site);
                samples.extend(o.samples);
                tables.push(o.site_tables);
            }
            Err(e) => errors.push(format!("site {i}: {e}")),
        }
    }

    let ks: Vec<f64> = samples.iter().map(|s| s.k).collect();
    let (k_min, k_max) = if ks.is_empty() {
        (f64::NAN, f64::NAN)
    } else {
        ks.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), k| (lo.min(*k), hi.max(*k)))
    };
    let spread = k_max - k_min;
    let k_abs = k_min.abs().max(k_max.abs());
    let curvature_max = sites.iter().map(|s| s.curvature_max).fold(0.0, f64::max);

    let verdict = if ks.is_empty() || !spread.is_finite() {
        ScanVerdict::Inconclusive
    } else if spread < FLAT_TOL && k_abs < FLAT_TOL {
        ScanVerdict::Flat
    } else if spread >= 0.1 * k_abs.max(1.0) {
        ScanVerdict::NonConstant
    } else if spread < FLAT_TOL {
        ScanVerdict::ConstantNonzero
    } else {
        ScanVerdict::Inconclusive
    };

    let constant_k = match verdict {
        ScanVerdict::Flat => Some(0.0),
        ScanVerdict::ConstantNonzero => Some(0.5 * (k_min + k_max)),
        _ => None,
    };
    let constant_curvature_residuals = constant_k.map(|k| constant_curvature_residuals(&tables, k));
    let zero_section_residual = (verdict == ScanVerdict::Flat).then(|| {
        let s = p.sample(0.0);
        (0.5 * (k_min + k_max) * (s.alpha[0] + s.alpha[2])).abs()
    });

    ScanReport {
        profile: p.name().to_string(),
        manifold: man.name().to_string(),
        dim: man.dim(),
        seed,
        k_min,
        k_max,
        spread,
        curvature_max,
        verdict,
        constant_curvature_residuals,
        zero_section_residual,
        warnings,
        errors,
        sites,
        samples,
    }
}

fn constant_curvature_residuals(sites: &[BundleSite], k: f64) -> ConstantCurvatureResiduals {
    let mut worst = ConstantCurvatureResiduals { k, a1: 0.0, a2: 0.0, a3: 0.0 };
    let keep = |cur: f64, new: f64| if new.abs() > cur.abs() { new } else { cur };
    for site in sites {
        let tb = &site.tables;
        let t = site.point.t;
        let aa = combinators(&tb.a, &tb.a, t);
        let cb = combinators(&tb.c, &tb.b, t);
        let s = &site.sample;
        worst.a1 = keep(worst.a1, aa.a1 + cb.a1 - k * (s.alpha[0] + s.alpha[2]));
        worst.a2 = keep(worst.a2, aa.a2 + cb.a2 - k * (s.beta[0] + s.beta[2]));
        worst.a3 = keep(worst.a3, aa.a3 + cb.a3);
    }
    worst
}
