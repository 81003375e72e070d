//! Curvature of g-natural metrics: closed forms, a chart-based oracle,
//! sectional-curvature scans and the flatness classifiers.

mod flatness;
mod formulas;
mod oracle;
mod scan;

pub use flatness::{
    flatness_check, vertical_system_residuals, FlatnessCondition, FlatnessReport, FlatnessViolation,
    VerticalSystemResiduals, BASE_FLAT_TOL, BASE_SAMPLES, PROFILE_TOL,
};
pub use formulas::{
    combinators, d_table_at, nabla_table_at, r_bar, r_bar_at, r_bar_lifts, Combinators, CurvatureCase,
    CurvatureRequest,
};
pub use oracle::{
    coordinate_curvature_oracle, ChartCurvature, sectional_curvature, sectional_curvature_at, tangent_bundle_chart,
    PLANE_GRAM_TOL,
};
pub use scan::{
    constant_curvature_scan, ConstantCurvatureResiduals, CurvatureSample, PlaneKind, ScanReport, ScanSite,
    ScanVerdict, FLAT_TOL, SITE_NORMS,
};
