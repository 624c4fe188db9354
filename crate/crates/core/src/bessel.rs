//! Integer-order Bessel functions of the first and second kind.
//!
//! Values come from `libm`'s `jn`/`yn` (musl ports of fdlibm, which switch
//! between forward recurrence, Miller backward recurrence and Hankel
//! asymptotics). Derivatives use fₗ′ = (fₗ₋₁ − fₗ₊₁)/2 and negative orders
//! are folded onto positive ones with fₗ = (−1)ˡ f₋ₗ.

use crate::error::{Error, Result};
use std::f64::consts::FRAC_2_PI;

pub const MAX_ORDER: i32 = 200;
pub const MAX_ARGUMENT: f64 = 1.0e6;

/// Jₗ, Yₗ and their derivatives at one argument.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct BesselEval {
    pub order: i32,
    pub x: f64,
    pub j: f64,
    pub y: f64,
    pub jp: f64,
    pub yp: f64,
}

impl BesselEval {
    /// x·(J Y′ − J′ Y), which equals 2/π.
    pub fn scaled_wronskian(&self) -> f64 {
        self.x * (self.j * self.yp - self.jp * self.y)
    }

    /// Relative deviation of the Wronskian from 2/(πx).
    pub fn wronskian_residual(&self) -> f64 {
        (self.scaled_wronskian() / FRAC_2_PI - 1.0).abs()
    }

    /// √(J² + Y²), the local amplitude of the pair.
    pub fn modulus(&self) -> f64 {
        self.j.hypot(self.y)
    }
}

fn check(l: i32, x: f64) -> Result<()> {
    if !(x > 0.0) {
        return Err(Error::NonPositiveArgument(x));
    }
    if l.abs() > MAX_ORDER {
        return Err(Error::OrderOutOfRange(l));
    }
    if x > MAX_ARGUMENT {
        return Err(Error::ArgumentOverflow { order: l, x });
    }
    Ok(())
}

/// Jₗ(x) for any integer order accepted by [`bessel_pair`].
pub fn bessel_j(l: i32, x: f64) -> Result<f64> {
    check(l, x)?;
    Ok(libm::jn(l, x))
}

/// Yₗ(x) for any integer order accepted by [`bessel_pair`].
pub fn bessel_y(l: i32, x: f64) -> Result<f64> {
    check(l, x)?;
    let y = libm::yn(l, x);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::ArgumentOverflow { order: l, x })
    }
}

/// Evaluate Jₗ, Yₗ, Jₗ′, Yₗ′ at `x`.
pub fn bessel_pair(l: i32, x: f64) -> Result<BesselEval> {
    check(l, x)?;
    let n = l.abs();
    let j = libm::jn(n, x);
    let y = libm::yn(n, x);
    let (jp, yp) = if n == 0 {
        (-libm::j1(x), -libm::y1(x))
    } else {
        (
            0.5 * (libm::jn(n - 1, x) - libm::jn(n + 1, x)),
            0.5 * (libm::yn(n - 1, x) - libm::yn(n + 1, x)),
        )
    };
    if !(y.is_finite() && yp.is_finite()) {
        return Err(Error::ArgumentOverflow { order: l, x });
    }
    let sign = if l < 0 && n % 2 == 1 { -1.0 } else { 1.0 };
    Ok(BesselEval {
        order: l,
        x,
        j: sign * j,
        y: sign * y,
        jp: sign * jp,
        yp: sign * yp,
    })
}
