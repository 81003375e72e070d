//! Closed-form geometry of g-natural metrics on tangent bundles.
//!
//! A g-natural metric on `TM` is determined by six real functions of
//! `t = g(u,u)`. This crate evaluates the metric, its inverse, its
//! Levi-Civita connection and its curvature on lifts of base vectors, and
//! checks each closed form against a numerical oracle built directly on
//! the chart of `TM`.

pub mod base_manifold;
pub mod bundle_metric;
pub mod cli_reports;
pub mod connection;
pub mod curvature_lab;
pub mod error;
pub mod fd;
pub mod profile;
pub mod sampling;

pub use base_manifold::{ChartPoint, ChartedManifold, Matrix, Vector};
pub use bundle_metric::{LiftVector, TangentPoint};
pub use error::{GeomError, Result};
pub use profile::{Classification, MetricProfile};
