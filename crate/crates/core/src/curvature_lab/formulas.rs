//! Closed-form curvature `R̄` of `G` on lifts.
//!
//! Every case is assembled from the connection tables, their covariant
//! derivatives along the base and their differentials along the fibre.

use serde::{Deserialize, Serialize};

use crate::base_manifold::{ChartedManifold, Vector};
use crate::bundle_metric::{LiftVector, TangentPoint};
use crate::connection::{BundleSite, FTensorTable, TableLabel};
use crate::error::Result;
use crate::profile::MetricProfile;

/// The six argument patterns of `R̄(X^a, Y^b) Z^c` that determine `R̄`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurvatureCase {
    Hhh,
    Hhv,
    Hvh,
    Hvv,
    Vvh,
    Vvv,
}

impl CurvatureCase {
    pub const ALL: [CurvatureCase; 6] = [
        CurvatureCase::Hhh,
        CurvatureCase::Hhv,
        CurvatureCase::Hvh,
        CurvatureCase::Hvv,
        CurvatureCase::Vvh,
        CurvatureCase::Vvv,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CurvatureCase::Hhh => "hhh",
            CurvatureCase::Hhv => "hhv",
            CurvatureCase::Hvh => "hvh",
            CurvatureCase::Hvv => "hvv",
            CurvatureCase::Vvh => "vvh",
            CurvatureCase::Vvv => "vvv",
        }
    }

    /// `(X^a, Y^b, Z^c)` as lift vectors.
    pub fn lifts(self, x: &Vector, y: &Vector, z: &Vector) -> [LiftVector; 3] {
        let h = |w: &Vector| LiftVector::horizontal(w.clone());
        let v = |w: &Vector| LiftVector::vertical(w.clone());
        match self {
            CurvatureCase::Hhh => [h(x), h(y), h(z)],
            CurvatureCase::Hhv => [h(x), h(y), v(z)],
            CurvatureCase::Hvh => [h(x), v(y), h(z)],
            CurvatureCase::Hvv => [h(x), v(y), v(z)],
            CurvatureCase::Vvh => [v(x), v(y), h(z)],
            CurvatureCase::Vvv => [v(x), v(y), v(z)],
        }
    }
}

/// One curvature evaluation request at a point of `TM`.
#[derive(Clone, Debug)]
pub struct CurvatureRequest {
    pub case: CurvatureCase,
    pub x: Vector,
    pub y: Vector,
    pub z: Vector,
    pub site: TangentPoint,
}

/// Scalars `a₁, a₂, a₃` with
/// `P(X,Q(Y,Z)) − P(Y,Q(X,Z)) = {a₁g(Y,Z) + a₂g(Y,u)g(Z,u)}X − {…}Y + a₃{…}u`
/// for tables built from `T⁵ … T⁸` only.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Combinators {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

/// Combinators of the metric parts of `p` and `q` at `t`.
pub fn combinators(p: &FTensorTable, q: &FTensorTable, t: f64) -> Combinators {
    let [p5, p6, p7, p8] = [p.f[4], p.f[5], p.f[6], p.f[7]];
    let [q5, q6, q7, q8] = [q.f[4], q.f[5], q.f[6], q.f[7]];
    Combinators {
        a1: t * p6 * q7,
        a2: p6 * (q6 + t * q8) - (p5 * q6 - p6 * q5),
        a3: p7 * q5 - (p5 + p7 + t * p8) * q7,
    }
}

/// `(∇_W P_u)(Y, Z)`: only the curvature-built tensors survive, with `R`
/// replaced by `∇_W R`.
pub fn nabla_table_at(site: &BundleSite, label: TableLabel, w: &Vector, y: &Vector, z: &Vector) -> Vector {
    let f = &site.tables.get(label).f;
    let u = site.u();
    let nr = &site.geom.nabla_riemann;
    let mut out = Vector::zeros(u.len());
    if f[0] != 0.0 {
        out += nr.apply(w, y, u, z) * f[0];
    }
    if f[1] != 0.0 {
        out += nr.apply(w, z, u, y) * f[1];
    }
    if f[2] != 0.0 {
        out += nr.apply(w, y, z, u) * f[2];
    }
    if f[3] != 0.0 {
        out += u * (f[3] * site.geom.inner(&nr.apply(w, y, u, z), u));
    }
    out
}

/// Differential at `u` of `P(·; X, Z)` along the fibre direction `Y`,
/// including the chain-rule terms from the coefficients' dependence on `t`.
pub fn d_table_at(site: &BundleSite, label: TableLabel, x: &Vector, z: &Vector, y: &Vector) -> Vector {
    let f = &site.tables.get(label).f;
    let df = &site.d_tables.get(label).f;
    let u = site.u();
    let geom = &site.geom;
    let r = &geom.riemann;
    let g = |a: &Vector, b: &Vector| geom.inner(a, b);
    let two_uy = 2.0 * g(u, y);

    let mut out = Vector::zeros(u.len());
    if two_uy != 0.0 {
        for (k, c) in df.iter().enumerate() {
            if *c != 0.0 {
                out += crate::connection::t_basis_at(k + 1, geom, u, x, z) * (two_uy * c);
            }
        }
    }
    // each u-slot of T^i replaced by Y in turn
    let slot = [
        r.apply(x, y, z),
        r.apply(z, y, x),
        r.apply(x, z, y),
        {
            let rxuz = r.apply(x, u, z);
            u * (g(&r.apply(x, y, z), u) + g(&rxuz, y)) + y * g(&rxuz, u)
        },
        z * g(x, y),
        x * g(z, y),
        y * g(x, z),
        u * (g(x, y) * g(z, u) + g(x, u) * g(z, y)) + y * (g(x, u) * g(z, u)),
    ];
    for (c, term) in f.iter().zip(slot) {
        if *c != 0.0 {
            out += term * *c;
        }
    }
    out
}

/// Closed-form `R̄(X^a, Y^b) Z^c` for one of the six cases.
pub fn r_bar_at(site: &BundleSite, case: CurvatureCase, x: &Vector, y: &Vector, z: &Vector) -> LiftVector {
    use TableLabel::*;
    let p = |l: TableLabel, a: &Vector, b: &Vector| site.table(l, a, b);
    let nab = |l: TableLabel, w: &Vector, a: &Vector, b: &Vector| nabla_table_at(site, l, w, a, b);
    let d = |l: TableLabel, a: &Vector, b: &Vector, dir: &Vector| d_table_at(site, l, a, b, dir);
    let r = &site.geom.riemann;
    let u = site.u();

    let (h, v) = match case {
        CurvatureCase::Hhh => {
            let (ayz, axz) = (p(A, y, z), p(A, x, z));
            let (byz, bxz) = (p(B, y, z), p(B, x, z));
            let rxyu = r.apply(x, y, u);
            let h = r.apply(x, y, z) + nab(A, x, y, z) - nab(A, y, x, z) + p(A, x, &ayz) - p(A, y, &axz)
                + p(C, x, &byz)
                - p(C, y, &bxz)
                + p(C, z, &rxyu);
            let v = nab(B, x, y, z) - nab(B, y, x, z) + p(B, x, &ayz) - p(B, y, &axz) + p(D, x, &byz)
                - p(D, y, &bxz)
                + p(D, z, &rxyu);
            (h, v)
        }
        CurvatureCase::Hhv => {
            let (cyz, cxz) = (p(C, y, z), p(C, x, z));
            let (dyz, dxz) = (p(D, y, z), p(D, x, z));
            let rxyu = r.apply(x, y, u);
            let h = nab(C, x, y, z) - nab(C, y, x, z) + p(A, x, &cyz) - p(A, y, &cxz) + p(C, x, &dyz)
                - p(C, y, &dxz)
                + p(E, &rxyu, z);
            let v = r.apply(x, y, z) + nab(D, x, y, z) - nab(D, y, x, z) + p(B, x, &cyz) - p(B, y, &cxz)
                + p(D, x, &dyz)
                - p(D, y, &dxz)
                + p(F, &rxyu, z);
            (h, v)
        }
        CurvatureCase::Hvh => {
            let czy = p(C, z, y);
            let dzy = p(D, z, y);
            let axz = p(A, x, z);
            let bxz = p(B, x, z);
            let h = nab(C, x, z, y) + p(A, x, &czy) + p(C, x, &dzy) - p(C, &axz, y) - p(E, y, &bxz)
                - d(A, x, z, y);
            let v = nab(D, x, z, y) + p(B, x, &czy) + p(D, x, &dzy) - p(D, &axz, y) - p(F, y, &bxz)
                - d(B, x, z, y);
            (h, v)
        }
        CurvatureCase::Hvv => {
            let eyz = p(E, y, z);
            let fyz = p(F, y, z);
            let cxz = p(C, x, z);
            let dxz = p(D, x, z);
            let h = nab(E, x, y, z) + p(A, x, &eyz) + p(C, x, &fyz) - p(C, &cxz, y) - p(E, y, &dxz)
                - d(C, x, z, y);
            let v = nab(F, x, y, z) + p(B, x, &eyz) + p(D, x, &fyz) - p(D, &cxz, y) - p(F, y, &dxz)
                - d(D, x, z, y);
            (h, v)
        }
        CurvatureCase::Vvh => {
            let (czy, czx) = (p(C, z, y), p(C, z, x));
            let (dzy, dzx) = (p(D, z, y), p(D, z, x));
            let h = d(C, z, y, x) - d(C, z, x, y) + p(C, &czy, x) - p(C, &czx, y) + p(E, x, &dzy)
                - p(E, y, &dzx);
            let v = d(D, z, y, x) - d(D, z, x, y) + p(D, &czy, x) - p(D, &czx, y) + p(F, x, &dzy)
                - p(F, y, &dzx);
            (h, v)
        }
        CurvatureCase::Vvv => {
            let (eyz, exz) = (p(E, y, z), p(E, x, z));
            let (fyz, fxz) = (p(F, y, z), p(F, x, z));
            let h = d(E, y, z, x) - d(E, x, z, y) + p(C, &eyz, x) - p(C, &exz, y) + p(E, x, &fyz)
                - p(E, y, &fxz);
            let v = d(F, y, z, x) - d(F, x, z, y) + p(D, &eyz, x) - p(D, &exz, y) + p(F, x, &fyz)
                - p(F, y, &fxz);
            (h, v)
        }
    };
    LiftVector::new(h, v)
}

/// `R̄(A, B) C` for arbitrary lift vectors, by multilinearity over the six
/// cases and `R̄(X^v, Y^h) = −R̄(Y^h, X^v)`.
pub fn r_bar_lifts(site: &BundleSite, a: &LiftVector, b: &LiftVector, c: &LiftVector) -> LiftVector {
    use CurvatureCase::*;
    let both = |hcase, vcase, x: &Vector, y: &Vector| r_bar_at(site, hcase, x, y, &c.h) + r_bar_at(site, vcase, x, y, &c.v);
    let hh = both(Hhh, Hhv, &a.h, &b.h);
    let hv = both(Hvh, Hvv, &a.h, &b.v);
    let vh = both(Hvh, Hvv, &b.h, &a.v);
    let vv = both(Vvh, Vvv, &a.v, &b.v);
    hh + hv - vh + vv
}

/// Closed-form curvature for a request.
pub fn r_bar(p: &MetricProfile, man: &ChartedManifold, req: &CurvatureRequest) -> Result<LiftVector> {
    let site = BundleSite::new(p, man, &req.site)?;
    Ok(r_bar_at(&site, req.case, &req.x, &req.y, &req.z))
}
