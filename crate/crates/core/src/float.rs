//! Scalar math shim so the crate body is identical with and without `std`.
//!
//! `sqrt` is correctly rounded in both backends, so results do not depend
//! on which feature is active.

#[cfg(feature = "std")]
#[inline(always)]
pub(crate) fn sqrt(x: f64) -> f64 {
    x.sqrt()
}

#[cfg(not(feature = "std"))]
#[inline(always)]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

/// `sqrt(a² + b²)` without intermediate overflow; same formula on every
/// backend.
#[inline]
pub(crate) fn hypot(a: f64, b: f64) -> f64 {
    let (a, b) = (a.abs(), b.abs());
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == 0.0 {
        return 0.0;
    }
    let r = lo / hi;
    hi * sqrt(1.0 + r * r)
}
