//! Curvature of `G` computed on the chart `(x, u)` of `TM`, with no use of
//! the connection tables: `TM` is treated as a plain `2m`-manifold whose
//! metric in coordinates is `JᵀGJ`, `J` being the change from coordinate
//! components to lift components.

use crate::base_manifold::{ChartPoint, ChartedManifold, Christoffel, Matrix, Riemann, Vector};
use crate::bundle_metric::{
    assemble_block, coordinate_to_lift_matrix, coordinates_to_lift, lift_to_coordinates, LiftVector,
    TangentPoint,
};
use crate::connection::BundleSite;
use crate::error::{GeomError, Result};
use crate::profile::MetricProfile;

use super::formulas::r_bar_lifts;

/// Minimum Gram determinant of a plane accepted by [`sectional_curvature`].
pub const PLANE_GRAM_TOL: f64 = 1e-10;

/// The total space `TM` as a charted `2m`-manifold with metric `G`.
///
/// Requires `G` to be positive definite at the points where it is used.
pub fn tangent_bundle_chart(p: &MetricProfile, man: &ChartedManifold) -> Result<ChartedManifold> {
    let m = man.dim();
    let (metric_base, domain_base) = (man.clone(), man.clone());
    let profile = p.clone();
    let split = move |c: &Vector| (ChartPoint(c.rows(0, m).into_owned()), c.rows(m, m).into_owned());
    let metric = move |c: &Vector| -> Matrix {
        let (x, u) = split(c);
        let gamma = metric_base
            .christoffel_at(&x)
            .expect("domain predicate admits only points with Christoffel symbols");
        let at = TangentPoint::new(&metric_base, x, u).expect("admitted by the domain predicate");
        let j = coordinate_to_lift_matrix(&gamma, &at.u);
        let g = j.transpose() * assemble_block(&profile, &at).full() * j;
        (&g + g.transpose()) * 0.5
    };
    let domain = move |c: &Vector| {
        let (x, _) = split(c);
        domain_base.christoffel_at(&x).is_ok()
    };
    ChartedManifold::new(format!("T{}", man.name()), 2 * m, metric, domain)?.with_fd_step(man.fd_step())
}

/// Curvature tensor of `G` at one point of `TM`, computed on the chart of
/// `TM` and read in the lift frame.
#[derive(Clone, Debug)]
pub struct ChartCurvature {
    riemann: Riemann,
    gamma: Christoffel,
    u: Vector,
}

impl ChartCurvature {
    pub fn new(p: &MetricProfile, man: &ChartedManifold, at: &TangentPoint) -> Result<Self> {
        let tm = tangent_bundle_chart(p, man)?;
        let coords = Vector::from_iterator(2 * at.dim(), at.x.coords().iter().chain(at.u.iter()).copied());
        Ok(ChartCurvature {
            riemann: tm.riemann_at(&ChartPoint(coords))?,
            gamma: man.christoffel_at(&at.x)?,
            u: at.u.clone(),
        })
    }

    /// `R̄(A, B) C`.
    pub fn apply(&self, a: &LiftVector, b: &LiftVector, c: &LiftVector) -> LiftVector {
        let to = |l: &LiftVector| lift_to_coordinates(&self.gamma, &self.u, l);
        coordinates_to_lift(&self.gamma, &self.u, &self.riemann.apply(&to(a), &to(b), &to(c)))
    }
}

/// `R̄(A, B) C` at `at` from finite differences of `G` on the chart of `TM`.
pub fn coordinate_curvature_oracle(
    p: &MetricProfile,
    man: &ChartedManifold,
    at: &TangentPoint,
    a: &LiftVector,
    b: &LiftVector,
    c: &LiftVector,
) -> Result<LiftVector> {
    Ok(ChartCurvature::new(p, man, at)?.apply(a, b, c))
}

/// Sectional curvature `G(R̄(A,B)B, A) / (G(A,A)G(B,B) − G(A,B)²)` of the
/// plane spanned by `A` and `B`, from the closed-form curvature.
pub fn sectional_curvature_at(site: &BundleSite, a: &LiftVector, b: &LiftVector) -> Result<f64> {
    let gram = site.pair(a, a) * site.pair(b, b) - site.pair(a, b).powi(2);
    if gram <= PLANE_GRAM_TOL {
        return Err(GeomError::DegeneratePlane { gram });
    }
    Ok(site.pair(&r_bar_lifts(site, a, b, b), a) / gram)
}

pub fn sectional_curvature(
    p: &MetricProfile,
    man: &ChartedManifold,
    at: &TangentPoint,
    a: &LiftVector,
    b: &LiftVector,
) -> Result<f64> {
    sectional_curvature_at(&BundleSite::new(p, man, at)?, a, b)
}
