//! The base Riemannian manifold `(M, g)` in a single chart.
//!
//! The metric is a user-supplied function of the chart coordinates. Christoffel
//! symbols, the curvature tensor and its covariant derivative are derived by
//! nested five-point finite differences (see [`crate::fd`]). Every stencil
//! point is checked against the chart domain, so the usable margin around a
//! point is the stencil reach: `2h` for Christoffel symbols, `4h` for the
//! curvature tensor and `6h` for its covariant derivative.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{GeomError, Result};
use crate::fd;

pub type Vector = DVector<f64>;
pub type Matrix = DMatrix<f64>;

type MetricFn = Arc<dyn Fn(&Vector) -> Matrix + Send + Sync>;
type DomainFn = Arc<dyn Fn(&Vector) -> bool + Send + Sync>;

/// Default finite-difference step of the five-point stencils.
pub const DEFAULT_FD_STEP: f64 = 1e-3;

/// Names of the built-in example manifolds.
pub const BUILTIN_MANIFOLDS: [&str; 4] = ["flat2", "flat3", "sphere2", "halfplane2"];

/// Coordinates of a point of the chart.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartPoint(pub Vector);

impl ChartPoint {
    pub fn new(coords: &[f64]) -> Self {
        ChartPoint(Vector::from_column_slice(coords))
    }

    pub fn coords(&self) -> &Vector {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    fn shifted(&self, axis: usize, s: f64) -> ChartPoint {
        let mut c = self.0.clone();
        c[axis] += s;
        ChartPoint(c)
    }
}

/// A Riemannian manifold described by one chart.
#[derive(Clone)]
pub struct ChartedManifold {
    name: String,
    dim: usize,
    metric_fn: MetricFn,
    domain_fn: DomainFn,
    fd_step: f64,
    sample_box: Vec<(f64, f64)>,
}

impl fmt::Debug for ChartedManifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChartedManifold")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("fd_step", &self.fd_step)
            .finish()
    }
}

impl ChartedManifold {
    /// Builds a manifold from a metric function and a chart-domain predicate.
    ///
    /// The sample box used by [`ChartedManifold::sample_point`] defaults to
    /// `[-1, 1]^m`; override it with [`ChartedManifold::with_sample_box`].
    pub fn new<G, D>(name: impl Into<String>, dim: usize, metric_fn: G, domain_fn: D) -> Result<Self>
    where
        G: Fn(&Vector) -> Matrix + Send + Sync + 'static,
        D: Fn(&Vector) -> bool + Send + Sync + 'static,
    {
        if dim < 2 {
            return Err(GeomError::InvalidManifold(format!(
                "dimension must be at least 2, got {dim}"
            )));
        }
        Ok(ChartedManifold {
            name: name.into(),
            dim,
            metric_fn: Arc::new(metric_fn),
            domain_fn: Arc::new(domain_fn),
            fd_step: DEFAULT_FD_STEP,
            sample_box: vec![(-1.0, 1.0); dim],
        })
    }

    pub fn with_fd_step(mut self, h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(GeomError::InvalidManifold(format!(
                "finite-difference step must be positive, got {h}"
            )));
        }
        self.fd_step = h;
        Ok(self)
    }

    pub fn with_sample_box(mut self, bounds: Vec<(f64, f64)>) -> Result<Self> {
        if bounds.len() != self.dim {
            return Err(GeomError::DimensionMismatch {
                expected: self.dim,
                got: bounds.len(),
            });
        }
        self.sample_box = bounds;
        Ok(self)
    }

    /// One of the built-in manifolds: `flat2`, `flat3`, `sphere2`, `halfplane2`.
    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "flat2" => Self::flat(2),
            "flat3" => Self::flat(3),
            "sphere2" => Self::unit_sphere(),
            "halfplane2" => Self::half_plane(),
            other => Err(GeomError::UnknownManifold(other.to_string())),
        }
    }

    /// Euclidean space in Cartesian coordinates.
    pub fn flat(dim: usize) -> Result<Self> {
        let name = format!("flat{dim}");
        Self::new(name, dim, move |_| Matrix::identity(dim, dim), |_| true)
    }

    /// Unit 2-sphere in spherical coordinates `(theta, phi)`, restricted to
    /// `theta in (0.2, pi - 0.2)`.
    pub fn unit_sphere() -> Result<Self> {
        use std::f64::consts::PI;
        Self::new(
            "sphere2",
            2,
            |x| {
                let s = x[0].sin();
                Matrix::from_diagonal(&Vector::from_vec(vec![1.0, s * s]))
            },
            |x| x[0] > 0.2 && x[0] < PI - 0.2,
        )?
        .with_sample_box(vec![(0.5, PI - 0.5), (-PI, PI)])
    }

    /// Poincaré half-plane `(dx^2 + dy^2) / y^2`, restricted to `y > 0.1`.
    pub fn half_plane() -> Result<Self> {
        Self::new(
            "halfplane2",
            2,
            |x| Matrix::identity(2, 2) / (x[1] * x[1]),
            |x| x[1] > 0.1,
        )?
        .with_sample_box(vec![(-1.0, 1.0), (0.5, 2.0)])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn fd_step(&self) -> f64 {
        self.fd_step
    }

    pub fn contains(&self, x: &ChartPoint) -> bool {
        x.dim() == self.dim && (self.domain_fn)(&x.0)
    }

    /// Uniform sample from the manifold's sample box.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> ChartPoint {
        let coords: Vec<f64> = self
            .sample_box
            .iter()
            .map(|&(lo, hi)| rng.random_range(lo..hi))
            .collect();
        ChartPoint::new(&coords)
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.dim {
            return Err(GeomError::DimensionMismatch {
                expected: self.dim,
                got: len,
            });
        }
        Ok(())
    }

    /// The metric matrix `g(x)`, checked for symmetry and positive definiteness.
    pub fn metric_at(&self, x: &ChartPoint) -> Result<Matrix> {
        self.check_dim(x.dim())?;
        if !(self.domain_fn)(&x.0) {
            return Err(GeomError::OutOfChart {
                point: x.0.iter().copied().collect(),
            });
        }
        let g = (self.metric_fn)(&x.0);
        if g.nrows() != self.dim || g.ncols() != self.dim {
            return Err(GeomError::DimensionMismatch {
                expected: self.dim,
                got: g.nrows(),
            });
        }
        let scale = g.amax().max(1.0);
        if (&g - g.transpose()).amax() > 1e-14 * scale {
            return Err(GeomError::InvalidManifold(format!(
                "metric of `{}` is not symmetric at {:?}",
                self.name,
                x.0.as_slice()
            )));
        }
        if g.clone().cholesky().is_none() {
            return Err(GeomError::NotPositiveDefinite {
                point: x.0.iter().copied().collect(),
            });
        }
        Ok(g)
    }

    /// The inverse metric `g^{-1}(x)`.
    pub fn inverse_metric_at(&self, x: &ChartPoint) -> Result<Matrix> {
        let g = self.metric_at(x)?;
        invert_metric(g, x)
    }

    /// Christoffel symbols `Γ^l_jk` of the Levi-Civita connection.
    pub fn christoffel_at(&self, x: &ChartPoint) -> Result<Christoffel> {
        let m = self.dim;
        let g_inv = self.inverse_metric_at(x)?;
        let h = self.fd_step;
        let dg: Vec<Matrix> = (0..m)
            .map(|i| fd::try_central(|s| self.metric_at(&x.shifted(i, s)), h))
            .collect::<Result<_>>()?;
        let mut data = vec![0.0; m * m * m];
        for l in 0..m {
            for j in 0..m {
                for k in j..m {
                    let mut acc = 0.0;
                    for i in 0..m {
                        acc += g_inv[(l, i)] * (dg[j][(i, k)] + dg[k][(i, j)] - dg[i][(j, k)]);
                    }
                    data[(l * m + j) * m + k] = 0.5 * acc;
                    data[(l * m + k) * m + j] = 0.5 * acc;
                }
            }
        }
        Ok(Christoffel { dim: m, data })
    }

    /// Curvature tensor `R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z`.
    pub fn riemann_at(&self, x: &ChartPoint) -> Result<Riemann> {
        let m = self.dim;
        let gamma = self.christoffel_at(x)?;
        let h = self.fd_step;
        // dgamma[i] holds ∂_i Γ^l_jk in Christoffel layout
        let dgamma: Vec<Vector> = (0..m)
            .map(|i| {
                fd::try_central(
                    |s| {
                        self.christoffel_at(&x.shifted(i, s))
                            .map(|c| Vector::from_vec(c.data))
                    },
                    h,
                )
            })
            .collect::<Result<_>>()?;
        let mut data = vec![0.0; m * m * m * m];
        for l in 0..m {
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        let mut v = dgamma[i][(l * m + j) * m + k] - dgamma[j][(l * m + i) * m + k];
                        for s in 0..m {
                            v += gamma.get(l, i, s) * gamma.get(s, j, k)
                                - gamma.get(l, j, s) * gamma.get(s, i, k);
                        }
                        data[riemann_index(m, l, i, j, k)] = v;
                    }
                }
            }
        }
        Ok(Riemann { dim: m, data })
    }

    /// Covariant derivative `(∇_W R)(X,Y)Z`, by differencing the components of
    /// `R` and correcting with Christoffel terms.
    pub fn nabla_riemann_at(&self, x: &ChartPoint) -> Result<NablaRiemann> {
        let m = self.dim;
        let gamma = self.christoffel_at(x)?;
        let r = self.riemann_at(x)?;
        let h = self.fd_step;
        let dr: Vec<Vector> = (0..m)
            .map(|w| {
                fd::try_central(
                    |s| self.riemann_at(&x.shifted(w, s)).map(|r| Vector::from_vec(r.data)),
                    h,
                )
            })
            .collect::<Result<_>>()?;
        let m4 = m * m * m * m;
        let mut data = vec![0.0; m * m4];
        for w in 0..m {
            for l in 0..m {
                for i in 0..m {
                    for j in 0..m {
                        for k in 0..m {
                            let mut v = dr[w][riemann_index(m, l, i, j, k)];
                            for s in 0..m {
                                v += gamma.get(l, w, s) * r.get(s, i, j, k)
                                    - gamma.get(s, w, i) * r.get(l, s, j, k)
                                    - gamma.get(s, w, j) * r.get(l, i, s, k)
                                    - gamma.get(s, w, k) * r.get(l, i, j, s);
                            }
                            data[w * m4 + riemann_index(m, l, i, j, k)] = v;
                        }
                    }
                }
            }
        }
        Ok(NablaRiemann { dim: m, data })
    }

    /// Everything the tangent-bundle formulas need at one point.
    pub fn geometry_at(&self, x: &ChartPoint) -> Result<BaseGeometry> {
        let g = self.metric_at(x)?;
        let g_inv = invert_metric(g.clone(), x)?;
        Ok(BaseGeometry {
            point: x.clone(),
            g,
            g_inv,
            christoffel: self.christoffel_at(x)?,
            riemann: self.riemann_at(x)?,
            nabla_riemann: self.nabla_riemann_at(x)?,
        })
    }
}

fn invert_metric(g: Matrix, x: &ChartPoint) -> Result<Matrix> {
    let singular = || GeomError::SingularMetric {
        point: x.0.iter().copied().collect(),
    };
    let inv = g.try_inverse().ok_or_else(singular)?;
    if inv.iter().all(|v| v.is_finite()) {
        Ok(inv)
    } else {
        Err(singular())
    }
}

#[inline]
fn riemann_index(m: usize, l: usize, i: usize, j: usize, k: usize) -> usize {
    ((l * m + i) * m + j) * m + k
}

/// Christoffel symbols `Γ^l_jk`, stored `[l][j][k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Christoffel {
    dim: usize,
    data: Vec<f64>,
}

impl Christoffel {
    pub fn zeros(dim: usize) -> Self {
        Christoffel {
            dim,
            data: vec![0.0; dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, l: usize, j: usize, k: usize) -> f64 {
        self.data[(l * self.dim + j) * self.dim + k]
    }

    /// `Γ(X, Y)^l = Γ^l_jk X^j Y^k`, i.e. `∇_X Y` for constant-coefficient fields.
    pub fn apply(&self, x: &Vector, y: &Vector) -> Vector {
        let m = self.dim;
        Vector::from_fn(m, |l, _| {
            let mut acc = 0.0;
            for j in 0..m {
                for k in 0..m {
                    acc += self.get(l, j, k) * x[j] * y[k];
                }
            }
            acc
        })
    }

    /// Matrix `(Γ_u)_{lk} = Γ^l_jk u^j`.
    pub fn contract(&self, u: &Vector) -> Matrix {
        let m = self.dim;
        Matrix::from_fn(m, m, |l, k| (0..m).map(|j| self.get(l, j, k) * u[j]).sum())
    }
}

/// Curvature tensor components `R^l_ijk`, with
/// `R(∂_i, ∂_j)∂_k = R^l_ijk ∂_l`.
#[derive(Clone, Debug, PartialEq)]
pub struct Riemann {
    dim: usize,
    data: Vec<f64>,
}

impl Riemann {
    pub fn zeros(dim: usize) -> Self {
        Riemann {
            dim,
            data: vec![0.0; dim.pow(4)],
        }
    }

    pub fn get(&self, l: usize, i: usize, j: usize, k: usize) -> f64 {
        self.data[riemann_index(self.dim, l, i, j, k)]
    }

    /// `R(X,Y)Z`.
    pub fn apply(&self, x: &Vector, y: &Vector, z: &Vector) -> Vector {
        contract4(self.dim, &self.data, x, y, z)
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |a, v| a.max(v.abs()))
    }
}

/// Covariant derivative of the curvature tensor, stored `[w][l][i][j][k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct NablaRiemann {
    dim: usize,
    data: Vec<f64>,
}

impl NablaRiemann {
    pub fn zeros(dim: usize) -> Self {
        NablaRiemann {
            dim,
            data: vec![0.0; dim.pow(5)],
        }
    }

    /// `(∇_W R)(X,Y)Z`.
    pub fn apply(&self, w: &Vector, x: &Vector, y: &Vector, z: &Vector) -> Vector {
        let m = self.dim;
        let block = m.pow(4);
        let mut out = Vector::zeros(m);
        for (a, wa) in w.iter().enumerate() {
            if *wa != 0.0 {
                out += contract4(m, &self.data[a * block..(a + 1) * block], x, y, z) * *wa;
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |a, v| a.max(v.abs()))
    }
}

fn contract4(m: usize, data: &[f64], x: &Vector, y: &Vector, z: &Vector) -> Vector {
    Vector::from_fn(m, |l, _| {
        let mut acc = 0.0;
        for i in 0..m {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..m {
                if y[j] == 0.0 {
                    continue;
                }
                for k in 0..m {
                    acc += data[riemann_index(m, l, i, j, k)] * x[i] * y[j] * z[k];
                }
            }
        }
        acc
    })
}

/// Metric, connection and curvature data of the base at one point.
#[derive(Clone, Debug)]
pub struct BaseGeometry {
    pub point: ChartPoint,
    pub g: Matrix,
    pub g_inv: Matrix,
    pub christoffel: Christoffel,
    pub riemann: Riemann,
    pub nabla_riemann: NablaRiemann,
}

impl BaseGeometry {
    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    /// `g(X, Y)`.
    pub fn inner(&self, x: &Vector, y: &Vector) -> f64 {
        x.dot(&(&self.g * y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    fn random_vec<R: Rng>(rng: &mut R, m: usize) -> Vector {
        Vector::from_fn(m, |_, _| rng.random_range(-1.0..1.0))
    }

    fn builtins() -> Vec<ChartedManifold> {
        BUILTIN_MANIFOLDS
            .iter()
            .map(|n| ChartedManifold::builtin(n).unwrap())
            .collect()
    }

    #[test]
    fn metric_examples() {
        let flat = ChartedManifold::builtin("flat2").unwrap();
        assert_eq!(
            flat.metric_at(&ChartPoint::new(&[0.3, -1.2])).unwrap(),
            Matrix::identity(2, 2)
        );
        let hp = ChartedManifold::builtin("halfplane2").unwrap();
        let g = hp.metric_at(&ChartPoint::new(&[0.0, 2.0])).unwrap();
        assert_eq!(g, Matrix::identity(2, 2) * 0.25);
        let sphere = ChartedManifold::builtin("sphere2").unwrap();
        let g = sphere.metric_at(&ChartPoint::new(&[PI / 2.0, 0.0])).unwrap();
        assert!((g - Matrix::identity(2, 2)).amax() < 1e-15);
    }

    #[test]
    fn out_of_chart_and_margins() {
        let hp = ChartedManifold::builtin("halfplane2").unwrap();
        assert!(matches!(
            hp.metric_at(&ChartPoint::new(&[0.0, 0.05])),
            Err(GeomError::OutOfChart { .. })
        ));
        // inside the chart but closer than the stencil reach
        let h = hp.fd_step();
        let near_edge = ChartPoint::new(&[0.0, 0.1 + 1.5 * h]);
        assert!(hp.metric_at(&near_edge).is_ok());
        assert!(matches!(
            hp.christoffel_at(&near_edge),
            Err(GeomError::OutOfChart { .. })
        ));
        assert!(matches!(
            ChartedManifold::builtin("torus"),
            Err(GeomError::UnknownManifold(_))
        ));
        assert!(ChartedManifold::flat(1).is_err());
        assert!(ChartedManifold::flat(2).unwrap().with_fd_step(0.0).is_err());
    }

    #[test]
    fn non_positive_metric_is_rejected() {
        let bad = ChartedManifold::new(
            "bad",
            2,
            |_| Matrix::from_diagonal(&Vector::from_vec(vec![1.0, -1.0])),
            |_| true,
        )
        .unwrap();
        assert!(matches!(
            bad.metric_at(&ChartPoint::new(&[0.0, 0.0])),
            Err(GeomError::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn christoffel_closed_forms() {
        for m in [2, 3] {
            let flat = ChartedManifold::flat(m).unwrap();
            let c = flat.christoffel_at(&ChartPoint(Vector::from_element(m, 0.4))).unwrap();
            assert_eq!(c, Christoffel::zeros(m));
        }
        // half-plane at (0, 2): Γ^x_xy = −1/y, Γ^y_xx = 1/y, Γ^y_yy = −1/y
        let hp = ChartedManifold::builtin("halfplane2").unwrap();
        let c = hp.christoffel_at(&ChartPoint::new(&[0.0, 2.0])).unwrap();
        assert!((c.get(0, 0, 1) + 0.5).abs() < 1e-10);
        assert!((c.get(0, 1, 0) + 0.5).abs() < 1e-10);
        assert!((c.get(1, 0, 0) - 0.5).abs() < 1e-10);
        assert!((c.get(1, 1, 1) + 0.5).abs() < 1e-10);
        assert!(c.get(0, 0, 0).abs() < 1e-10 && c.get(1, 0, 1).abs() < 1e-10);
        // sphere at (π/4, 0): Γ^θ_φφ = −sinθ cosθ, Γ^φ_θφ = cotθ
        let s = ChartedManifold::builtin("sphere2").unwrap();
        let c = s.christoffel_at(&ChartPoint::new(&[PI / 4.0, 0.0])).unwrap();
        assert!((c.get(0, 1, 1) + 0.5).abs() < 1e-10);
        assert!((c.get(1, 0, 1) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn constant_curvature_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (name, k) in [("sphere2", 1.0), ("halfplane2", -1.0)] {
            let man = ChartedManifold::builtin(name).unwrap();
            for _ in 0..10 {
                let x = man.sample_point(&mut rng);
                let g = man.metric_at(&x).unwrap();
                let r = man.riemann_at(&x).unwrap();
                let a = random_vec(&mut rng, 2);
                let b = random_vec(&mut rng, 2);
                let ip = |p: &Vector, q: &Vector| p.dot(&(&g * q));
                let lhs = ip(&r.apply(&a, &b, &b), &a);
                let rhs = k * (ip(&a, &a) * ip(&b, &b) - ip(&a, &b).powi(2));
                assert!((lhs - rhs).abs() < 1e-4, "{name}: {lhs} vs {rhs}");
            }
        }
        let flat = ChartedManifold::flat(3).unwrap();
        let r = flat.riemann_at(&ChartPoint::new(&[0.1, 0.2, 0.3])).unwrap();
        assert_eq!(r.max_abs(), 0.0);
    }

    #[test]
    fn locally_symmetric_builtins_have_parallel_curvature() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for man in builtins() {
            let x = man.sample_point(&mut rng);
            let nr = man.nabla_riemann_at(&x).unwrap();
            assert!(nr.max_abs() < 1e-3, "{}: {}", man.name(), nr.max_abs());
        }
    }

    #[test]
    fn curvature_symmetries_on_builtins() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for man in builtins() {
            let m = man.dim();
            for _ in 0..20 {
                let x = man.sample_point(&mut rng);
                let c = man.christoffel_at(&x).unwrap();
                for l in 0..m {
                    for j in 0..m {
                        for k in 0..m {
                            assert_eq!(c.get(l, j, k), c.get(l, k, j));
                        }
                    }
                }
                let r = man.riemann_at(&x).unwrap();
                let (a, b, z) = (random_vec(&mut rng, m), random_vec(&mut rng, m), random_vec(&mut rng, m));
                let skew = r.apply(&a, &b, &z) + r.apply(&b, &a, &z);
                assert!(skew.amax() < 1e-10);
                let bianchi = r.apply(&a, &b, &z) + r.apply(&b, &z, &a) + r.apply(&z, &a, &b);
                assert!(bianchi.amax() < 1e-6, "{}: {}", man.name(), bianchi.amax());
            }
        }
    }

    #[test]
    fn metric_compatibility_of_christoffels() {
        // X g(Y,Z) = g(∇_X Y, Z) + g(Y, ∇_X Z) for constant-coefficient Y, Z
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for man in builtins() {
            let m = man.dim();
            let x = man.sample_point(&mut rng);
            let (a, b, z) = (random_vec(&mut rng, m), random_vec(&mut rng, m), random_vec(&mut rng, m));
            let along = |s: f64| {
                let p = ChartPoint(x.coords() + &a * s);
                b.dot(&(man.metric_at(&p).unwrap() * &z))
            };
            let lhs = fd::central(along, 1e-3);
            let g = man.metric_at(&x).unwrap();
            let c = man.christoffel_at(&x).unwrap();
            let rhs = c.apply(&a, &b).dot(&(&g * &z)) + b.dot(&(&g * c.apply(&a, &z)));
            assert!((lhs - rhs).abs() < 1e-8, "{}: {lhs} vs {rhs}", man.name());
        }
    }

    #[test]
    fn contract_matches_apply() {
        let s = ChartedManifold::builtin("sphere2").unwrap();
        let c = s.christoffel_at(&ChartPoint::new(&[1.0, 0.3])).unwrap();
        let u = v(&[0.3, -0.8]);
        let x = v(&[1.1, 0.4]);
        assert!((c.contract(&u) * &x - c.apply(&u, &x)).amax() < 1e-15);
    }
}
