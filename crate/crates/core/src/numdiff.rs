//! Central finite differences with one Richardson extrapolation step.

/// First derivative; error `O(h⁴)`.
pub fn derivative<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    let d = |h: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    (4.0 * d(0.5 * h) - d(h)) / 3.0
}

/// Second derivative; error `O(h⁴)`.
pub fn second_derivative<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    let fx = f(x);
    let d = |h: f64| (f(x + h) - 2.0 * fx + f(x - h)) / (h * h);
    (4.0 * d(0.5 * h) - d(h)) / 3.0
}

/// Step for differencing a function of a radius: never reaches below zero.
pub(crate) fn radial_step(r: f64, h: f64) -> f64 {
    h.min(0.25 * r)
}
