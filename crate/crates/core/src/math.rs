//! Scalar float functions that work without `std`.

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn acos(x: f64) -> f64 {
    libm::acos(x)
}

#[inline]
pub fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

#[inline]
pub fn tan(x: f64) -> f64 {
    libm::tan(x)
}

#[inline]
pub fn powi(x: f64, n: i32) -> f64 {
    libm::pow(x, n as f64)
}

/// `sin(x)/x`, continuous at zero.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        sin(x) / x
    }
}

/// `x·cot(x)`, continuous at zero.
pub fn x_cot_x(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 3.0 - x2 * x2 / 45.0
    } else {
        x / tan(x)
    }
}

/// Angle in `[0, π]` between two unit vectors, accurate near 0 and π.
pub fn angle_between(a: &[f64], b: &[f64]) -> f64 {
    let mut diff = 0.0;
    let mut sum = 0.0;
    for (x, y) in a.iter().zip(b) {
        diff += (x - y) * (x - y);
        sum += (x + y) * (x + y);
    }
    // 2·atan2(|a-b|, |a+b|) avoids the acos cancellation near ±1.
    2.0 * atan2(sqrt(diff), sqrt(sum))
}

/// `F(κ) = ½·acos(κ)²` and its first two `κ`-derivatives, given `A = acos κ`.
///
/// `F` is analytic at `κ = 1` even though `acos` is not, so the derivatives
/// are written in `A` with series near `A = 0`.
pub fn half_sq_acos(a: f64) -> (f64, f64, f64) {
    let f0 = 0.5 * a * a;
    if a < 1e-3 {
        let a2 = a * a;
        (
            f0,
            -(1.0 + a2 / 6.0 + 7.0 * a2 * a2 / 360.0),
            1.0 / 3.0 + 2.0 * a2 / 15.0,
        )
    } else {
        let s = sin(a);
        (f0, -a / s, (s - a * cos(a)) / (s * s * s))
    }
}

/// Wraps an angle to `(-π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    use core::f64::consts::{PI, TAU};
    let mut x = libm::fmod(a, TAU);
    if x <= -PI {
        x += TAU;
    } else if x > PI {
        x -= TAU;
    }
    x
}
