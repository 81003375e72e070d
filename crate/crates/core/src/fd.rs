//! Finite-difference stencils shared by every numerical oracle in the crate.
//!
//! All first derivatives use the fourth-order five-point formula. Nested
//! differentiation (Christoffel symbols, curvature, covariant derivative of
//! curvature, curvature of the tangent-bundle chart) stacks these stencils,
//! so a stencil point reaches `2h` away from the centre per level.

use std::ops::{Add, Mul, Sub};

/// Five-point central difference of `f` at 0 with step `h`.
pub fn central<T, F>(f: F, h: f64) -> T
where
    F: Fn(f64) -> T,
    T: Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>,
{
    let m2 = f(-2.0 * h);
    let m1 = f(-h);
    let p1 = f(h);
    let p2 = f(2.0 * h);
    ((m2 - p2) + (p1 - m1) * 8.0) * (1.0 / (12.0 * h))
}

/// Fallible variant of [`central`]; the first error from any stencil point
/// is returned.
pub fn try_central<T, E, F>(f: F, h: f64) -> Result<T, E>
where
    F: Fn(f64) -> Result<T, E>,
    T: Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>,
{
    let m2 = f(-2.0 * h)?;
    let m1 = f(-h)?;
    let p1 = f(h)?;
    let p2 = f(2.0 * h)?;
    Ok(((m2 - p2) + (p1 - m1) * 8.0) * (1.0 / (12.0 * h)))
}

/// Fourth-order one-sided (forward) difference of `f` at 0.
pub fn forward<T, F>(f: F, h: f64) -> T
where
    F: Fn(f64) -> T,
    T: Clone + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>,
{
    let f0 = f(0.0);
    let f1 = f(h);
    let f2 = f(2.0 * h);
    let f3 = f(3.0 * h);
    let f4 = f(4.0 * h);
    // −25 f0 + 48 f1 − 36 f2 + 16 f3 − 3 f4, written with differences only
    ((f1.clone() - f0) * 25.0 + (f3 - f2.clone()) * 16.0 - (f2.clone() - f1) * 23.0 - (f4 - f2) * 3.0) * (1.0 / (12.0 * h))
}

/// Derivative of a function of `t >= 0` at `t`, never sampling negative
/// arguments: central stencil when `t >= 2h`, forward stencil otherwise.
pub fn derivative_nonneg<T, F>(f: F, t: f64, h: f64) -> T
where
    F: Fn(f64) -> T,
    T: Clone + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>,
{
    if t >= 2.0 * h {
        central(|s| f(t + s), h)
    } else {
        forward(|s| f(t + s), h)
    }
}
