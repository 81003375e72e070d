//! Levi-Civita connection of a nondegenerate g-natural metric.
//!
//! The closed form expresses `∇̄` on pairs of lifts through six F-tensors
//! `A … F`, each a combination `P(u;X,Y) = Σ f_i^P(t) T^i(u;X,Y)` of the eight
//! basic tensors [`t_basis`]. [`koszul_oracle`] recomputes the same
//! derivatives from the Koszul formula with finite-difference derivatives
//! of `G` and is independent of the coefficient tables.
//!
//! Vector arguments are read as constant-coefficient fields of the chart,
//! so `∇_X Y = Γ(X, Y)` and `[X, Y] = 0`.

use serde::Serialize;

use crate::base_manifold::{BaseGeometry, ChartedManifold, Vector};
use crate::bundle_metric::{
    assemble_sampled, g_on_lifts_sampled, inverse_sampled, lift_to_coordinates, BlockMetric,
    LiftVector, TangentPoint,
};
use crate::error::Result;
use crate::fd;
use crate::profile::{psi_from_sample, InverseCoefficients, MetricProfile, ProfileSample};

/// Step used to differentiate coefficient tables with respect to `t`.
pub const TABLE_DT: f64 = 1e-3;

/// Step of the Koszul oracle's directional derivatives on `TM` coordinates.
pub const KOSZUL_STEP: f64 = 1e-3;

/// The eight basic tensors at `(x,u)`:
/// `T¹ = R(X,u)Y`, `T² = R(Y,u)X`, `T³ = R(X,Y)u`, `T⁴ = g(R(X,u)Y,u)u`,
/// `T⁵ = g(X,u)Y`, `T⁶ = g(Y,u)X`, `T⁷ = g(X,Y)u`, `T⁸ = g(X,u)g(Y,u)u`.
pub fn t_basis_at(i: usize, geom: &BaseGeometry, u: &Vector, x: &Vector, y: &Vector) -> Vector {
    let r = &geom.riemann;
    let g = |a: &Vector, b: &Vector| geom.inner(a, b);
    match i {
        1 => r.apply(x, u, y),
        2 => r.apply(y, u, x),
        3 => r.apply(x, y, u),
        4 => u * g(&r.apply(x, u, y), u),
        5 => y * g(x, u),
        6 => x * g(y, u),
        7 => u * g(x, y),
        8 => u * (g(x, u) * g(y, u)),
        _ => panic!("basic tensor index must be in 1..=8, got {i}"),
    }
}

/// [`t_basis_at`] computing the base geometry from the manifold.
pub fn t_basis(
    i: usize,
    man: &ChartedManifold,
    at: &TangentPoint,
    x: &Vector,
    y: &Vector,
) -> Result<Vector> {
    let geom = man.geometry_at(&at.x)?;
    Ok(t_basis_at(i, &geom, &at.u, x, y))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TableLabel {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl TableLabel {
    pub const ALL: [TableLabel; 6] = [
        TableLabel::A,
        TableLabel::B,
        TableLabel::C,
        TableLabel::D,
        TableLabel::E,
        TableLabel::F,
    ];
}

/// Coefficients `f_1 … f_8` of one F-tensor at a fixed `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FTensorTable {
    pub label: TableLabel,
    pub t: f64,
    /// `f[i-1] = f_i`.
    pub f: [f64; 8],
}

impl FTensorTable {
    pub fn zero(label: TableLabel, t: f64) -> Self {
        FTensorTable { label, t, f: [0.0; 8] }
    }

    /// `P(u;X,Y) = Σ f_i T^i(u;X,Y)`.
    pub fn apply(&self, geom: &BaseGeometry, u: &Vector, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::zeros(u.len());
        for (k, c) in self.f.iter().enumerate() {
            if *c != 0.0 {
                out += t_basis_at(k + 1, geom, u, x, y) * *c;
            }
        }
        out
    }

    /// Table restricted to the metric-only tensors `T⁵ … T⁸`.
    pub fn metric_part(&self) -> FTensorTable {
        let mut f = self.f;
        f[..4].iter_mut().for_each(|c| *c = 0.0);
        FTensorTable { f, ..*self }
    }
}

/// All six tables at one `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConnectionTables {
    pub a: FTensorTable,
    pub b: FTensorTable,
    pub c: FTensorTable,
    pub d: FTensorTable,
    pub e: FTensorTable,
    pub f: FTensorTable,
}

impl ConnectionTables {
    pub fn get(&self, label: TableLabel) -> &FTensorTable {
        match label {
            TableLabel::A => &self.a,
            TableLabel::B => &self.b,
            TableLabel::C => &self.c,
            TableLabel::D => &self.d,
            TableLabel::E => &self.e,
            TableLabel::F => &self.f,
        }
    }

    fn flatten(&self) -> Vector {
        Vector::from_iterator(48, TableLabel::ALL.iter().flat_map(|l| self.get(*l).f))
    }

    fn from_flat(t: f64, v: &Vector) -> Self {
        let table = |k: usize, label| {
            let mut f = [0.0; 8];
            f.copy_from_slice(&v.as_slice()[8 * k..8 * k + 8]);
            FTensorTable { label, t, f }
        };
        ConnectionTables {
            a: table(0, TableLabel::A),
            b: table(1, TableLabel::B),
            c: table(2, TableLabel::C),
            d: table(3, TableLabel::D),
            e: table(4, TableLabel::E),
            f: table(5, TableLabel::F),
        }
    }
}

/// Coefficient tables from a profile sample.
pub fn tables_from_sample(s: &ProfileSample) -> Result<ConnectionTables> {
    let psi = psi_from_sample(s)?;
    Ok(tables_with_psi(s, &psi))
}

fn tables_with_psi(s: &ProfileSample, psi: &InverseCoefficients) -> ConnectionTables {
    let t = s.t;
    let [a1, a2, a3] = s.alpha;
    let [b1, b2, _] = s.beta;
    let [da1, da2, da3] = s.d_alpha;
    let [db1, db2, db3] = s.d_beta;
    let [p1, p2, _] = s.phi();
    let al = s.alpha_det();
    let ph = s.phi_det();
    let (pl, pt, po) = (psi.psi_lambda, psi.psi_theta, psi.psi_omega);
    let sa = a1 + a3;
    let sb = b1 + s.beta[2];
    let dsa = da1 + da3;
    let dsb = db1 + db3;
    // φ₁+φ₃ without the cancellation between φ₁ and φ₃
    let ps = sa + t * sb;
    // 2α₂' − β₂
    let k = 2.0 * da2 - b2;

    let a = [
        -a1 * a2 / (2.0 * al),
        -a1 * a2 / (2.0 * al),
        0.0,
        a2 * pl,
        a2 * sb / (2.0 * al),
        a2 * sb / (2.0 * al),
        dsa * p2 / ph,
        dsb * p2 / ph + sb * pt,
    ];
    let b = [
        a2 * a2 / al,
        0.0,
        -a1 * sa / (2.0 * al),
        a2 * pt,
        -sa * sb / (2.0 * al),
        -sa * sb / (2.0 * al),
        -dsa * ps / ph,
        -dsb * ps / ph + sb * po,
    ];
    let c = [
        0.0,
        -a1 * a1 / (2.0 * al),
        0.0,
        a1 * pl / 2.0,
        a1 * sb / (2.0 * al),
        dsa * a1 / al - a2 / (2.0 * al) * k,
        sb * p1 / (2.0 * ph) + 0.5 * k * p2 / ph,
        dsb * p1 / ph - pl * (dsa + sb / 2.0) - 0.5 * k * pt,
    ];
    let d = [
        0.0,
        a1 * a2 / (2.0 * al),
        0.0,
        a1 * pt / 2.0,
        -a2 * sb / (2.0 * al),
        -dsa * a2 / al + k * sa / (2.0 * al),
        -sb * p2 / (2.0 * ph) - 0.5 * k * ps / ph,
        -dsb * p2 / ph - (dsa + sb / 2.0) * pt - 0.5 * k * po,
    ];
    let e56 = (da2 + 0.5 * b2) * a1 / al - da1 * a2 / al;
    let e = [
        0.0,
        0.0,
        0.0,
        0.0,
        e56,
        e56,
        b2 * p1 / ph - (b1 - da1) * p2 / ph,
        2.0 * db2 * p1 / ph - db1 * p2 / ph - (2.0 * da2 + b2) * pl - 2.0 * da1 * pt,
    ];
    let f56 = -(da2 + 0.5 * b2) * a2 / al + da1 * sa / al;
    let f = [
        0.0,
        0.0,
        0.0,
        0.0,
        f56,
        f56,
        (b1 - da1) * ps / ph - b2 * p2 / ph,
        db1 * ps / ph - 2.0 * db2 * p2 / ph - (2.0 * da2 + b2) * pt - 2.0 * da1 * po,
    ];
    let mk = |label, f| FTensorTable { label, t, f };
    ConnectionTables {
        a: mk(TableLabel::A, a),
        b: mk(TableLabel::B, b),
        c: mk(TableLabel::C, c),
        d: mk(TableLabel::D, d),
        e: mk(TableLabel::E, e),
        f: mk(TableLabel::F, f),
    }
}

/// The eight coefficients of table `label` at `t`.
pub fn coeff_table(label: TableLabel, p: &MetricProfile, t: f64) -> Result<FTensorTable> {
    Ok(*tables_from_sample(&p.sample(t))?.get(label))
}

/// `t`-derivatives `f_i'` of all six tables, by finite differences in `t`.
pub fn table_derivatives(p: &MetricProfile, t: f64) -> Result<ConnectionTables> {
    // surface degeneracy at the centre before differencing
    tables_from_sample(&p.sample(t))?;
    let flat = |s: f64| {
        tables_from_sample(&p.sample(s))
            .map(|tb| tb.flatten())
            .unwrap_or_else(|_| Vector::from_element(48, f64::NAN))
    };
    let d = fd::derivative_nonneg(flat, t, TABLE_DT);
    Ok(ConnectionTables::from_flat(t, &d))
}

/// Everything needed to evaluate connection and curvature formulas at one
/// point of `TM`.
#[derive(Clone, Debug)]
pub struct BundleSite {
    pub geom: BaseGeometry,
    pub point: TangentPoint,
    pub sample: ProfileSample,
    pub psi: InverseCoefficients,
    pub tables: ConnectionTables,
    pub d_tables: ConnectionTables,
    pub metric: BlockMetric,
    pub inverse: BlockMetric,
}

impl BundleSite {
    pub fn new(p: &MetricProfile, man: &ChartedManifold, point: &TangentPoint) -> Result<Self> {
        let geom = man.geometry_at(&point.x)?;
        let sample = p.sample(point.t);
        let psi = psi_from_sample(&sample)?;
        let tables = tables_with_psi(&sample, &psi);
        let d_tables = table_derivatives(p, point.t)?;
        let metric = assemble_sampled(&sample, point);
        let inverse = inverse_sampled(&sample, point)?;
        Ok(BundleSite {
            geom,
            point: point.clone(),
            sample,
            psi,
            tables,
            d_tables,
            metric,
            inverse,
        })
    }

    pub fn dim(&self) -> usize {
        self.point.dim()
    }

    pub fn u(&self) -> &Vector {
        &self.point.u
    }

    /// `P(u;X,Y)` for table `label`.
    pub fn table(&self, label: TableLabel, x: &Vector, y: &Vector) -> Vector {
        self.tables.get(label).apply(&self.geom, &self.point.u, x, y)
    }

    /// `G(A, B)` at the site.
    pub fn pair(&self, a: &LiftVector, b: &LiftVector) -> f64 {
        g_on_lifts_sampled(&self.sample, &self.point, a, b)
    }
}

/// Which pair of lifts the connection acts on: `∇̄_{X^a} Y^b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LiftKind {
    Hh,
    Hv,
    Vh,
    Vv,
}

impl LiftKind {
    pub const ALL: [LiftKind; 4] = [LiftKind::Hh, LiftKind::Hv, LiftKind::Vh, LiftKind::Vv];

    fn lifts(self, x: &Vector, y: &Vector) -> (LiftVector, LiftVector) {
        let h = |v: &Vector| LiftVector::horizontal(v.clone());
        let vv = |v: &Vector| LiftVector::vertical(v.clone());
        match self {
            LiftKind::Hh => (h(x), h(y)),
            LiftKind::Hv => (h(x), vv(y)),
            LiftKind::Vh => (vv(x), h(y)),
            LiftKind::Vv => (vv(x), vv(y)),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LiftKind::Hh => "hh",
            LiftKind::Hv => "hv",
            LiftKind::Vh => "vh",
            LiftKind::Vv => "vv",
        }
    }
}

/// Closed-form `∇̄_{X^a} Y^b` at a prepared site.
pub fn nabla_bar_at(site: &BundleSite, kind: LiftKind, x: &Vector, y: &Vector) -> LiftVector {
    use TableLabel::*;
    let nabla_xy = || site.geom.christoffel.apply(x, y);
    match kind {
        LiftKind::Hh => LiftVector::new(nabla_xy() + site.table(A, x, y), site.table(B, x, y)),
        LiftKind::Hv => LiftVector::new(site.table(C, x, y), nabla_xy() + site.table(D, x, y)),
        LiftKind::Vh => LiftVector::new(site.table(C, y, x), site.table(D, y, x)),
        LiftKind::Vv => LiftVector::new(site.table(E, y, x), site.table(F, y, x)),
    }
}

/// `∇̄_A B` for lifts `A`, `B` of constant-coefficient fields.
pub fn nabla_bar_lifts(site: &BundleSite, a: &LiftVector, b: &LiftVector) -> LiftVector {
    nabla_bar_at(site, LiftKind::Hh, &a.h, &b.h)
        + nabla_bar_at(site, LiftKind::Hv, &a.h, &b.v)
        + nabla_bar_at(site, LiftKind::Vh, &a.v, &b.h)
        + nabla_bar_at(site, LiftKind::Vv, &a.v, &b.v)
}

/// Closed-form Levi-Civita connection of `G` on a pair of lifts.
pub fn nabla_bar(
    p: &MetricProfile,
    man: &ChartedManifold,
    at: &TangentPoint,
    kind: LiftKind,
    x: &Vector,
    y: &Vector,
) -> Result<LiftVector> {
    let site = BundleSite::new(p, man, at)?;
    Ok(nabla_bar_at(&site, kind, x, y))
}

/// Lie bracket of lifts of constant-coefficient fields:
/// `[X^h,Y^h] = −v{R(X,Y)u}`, `[X^h,Y^v] = (∇_X Y)^v`, `[X^v,Y^v] = 0`.
pub fn lift_bracket(geom: &BaseGeometry, u: &Vector, a: &LiftVector, b: &LiftVector) -> LiftVector {
    let gamma = &geom.christoffel;
    let v = -geom.riemann.apply(&a.h, &b.h, u) + gamma.apply(&a.h, &b.v) - gamma.apply(&b.h, &a.v);
    LiftVector::vertical(v)
}

/// `G(B, C)` as a function on `TM`, for lifts of constant-coefficient fields.
fn pairing_at(
    p: &MetricProfile,
    man: &ChartedManifold,
    coords: &Vector,
    b: &LiftVector,
    c: &LiftVector,
) -> Result<f64> {
    let m = man.dim();
    let x = crate::base_manifold::ChartPoint(coords.rows(0, m).into_owned());
    let u = coords.rows(m, m).into_owned();
    let at = TangentPoint::new(man, x, u)?;
    Ok(g_on_lifts_sampled(&p.sample(at.t), &at, b, c))
}

/// Derivative of `G(B, C)` along the lift `A` at the site, by differencing
/// along the coordinate direction of `A`.
pub fn lift_derivative_of_pairing(
    p: &MetricProfile,
    man: &ChartedManifold,
    site: &BundleSite,
    a: &LiftVector,
    b: &LiftVector,
    c: &LiftVector,
    step: f64,
) -> Result<f64> {
    let dir = lift_to_coordinates(&site.geom.christoffel, site.u(), a);
    let base = site.point.x.coords().clone();
    let center = Vector::from_iterator(
        2 * site.dim(),
        base.iter().chain(site.u().iter()).copied(),
    );
    fd::try_central(|s| pairing_at(p, man, &(&center + &dir * s), b, c), step)
}

/// `∇̄_{X^a} Y^b` from the Koszul formula: the right-hand sides
/// `G(∇̄_A B, ∂_k)` for every lift basis vector `∂_k` are assembled from
/// finite-difference derivatives of `G` and lift brackets, then mapped back
/// through `G⁻¹`.
pub fn koszul_oracle(
    p: &MetricProfile,
    man: &ChartedManifold,
    at: &TangentPoint,
    kind: LiftKind,
    x: &Vector,
    y: &Vector,
) -> Result<LiftVector> {
    let site = BundleSite::new(p, man, at)?;
    koszul_oracle_at(p, man, &site, kind, x, y, KOSZUL_STEP)
}

pub fn koszul_oracle_at(
    p: &MetricProfile,
    man: &ChartedManifold,
    site: &BundleSite,
    kind: LiftKind,
    x: &Vector,
    y: &Vector,
    step: f64,
) -> Result<LiftVector> {
    let m = site.dim();
    let (a, b) = kind.lifts(x, y);
    let u = site.u();
    let bracket = |l: &LiftVector, r: &LiftVector| lift_bracket(&site.geom, u, l, r);
    let deriv = |along: &LiftVector, l: &LiftVector, r: &LiftVector| {
        lift_derivative_of_pairing(p, man, site, along, l, r, step)
    };
    let ab = bracket(&a, &b);
    let mut rhs = Vector::zeros(2 * m);
    for k in 0..2 * m {
        let c = LiftVector::basis(m, k);
        let koszul = deriv(&a, &b, &c)? + deriv(&b, &a, &c)? - deriv(&c, &a, &b)?
            + site.pair(&ab, &c)
            - site.pair(&bracket(&a, &c), &b)
            - site.pair(&bracket(&b, &c), &a);
        rhs[k] = 0.5 * koszul;
    }
    Ok(LiftVector::from_stacked(&(site.inverse.full() * rhs)))
}

/// `|a − b|_∞ / max(1, |b|_∞)`.
pub fn relative_residual(a: &LiftVector, b: &LiftVector) -> f64 {
    (a.clone() - b.clone()).amax() / b.amax().max(1.0)
}
