//! Embedded Dormand–Prince 5(4) stepper for the two-component radial system.

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// Fifth-order weights equal the last row of A (FSAL); these are b5 − b4.
const E: [f64; 7] = [
    35.0 / 384.0 - 5179.0 / 57600.0,
    0.0,
    500.0 / 1113.0 - 7571.0 / 16695.0,
    125.0 / 192.0 - 393.0 / 640.0,
    -2187.0 / 6784.0 + 92097.0 / 339200.0,
    11.0 / 84.0 - 187.0 / 2100.0,
    -1.0 / 40.0,
];

pub type State = [f64; 2];

/// Adaptive integration settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    /// Local error bound per step, relative to the error weights.
    pub rtol: f64,
    pub max_steps: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            rtol: 1e-12,
            max_steps: 5_000_000,
        }
    }
}

/// Integrate y' = f(x, y) from `x0` to `x1` (either direction).
///
/// `weights(x, y)` returns the per-component scale against which the local
/// error is measured; `h0` is the initial step magnitude. `on_step` sees every
/// accepted point. Returns the state at `x1` and the step magnitude to continue with.
#[allow(clippy::too_many_arguments)]
pub fn integrate<F, W, S>(
    f: F,
    weights: W,
    x0: f64,
    y0: State,
    x1: f64,
    h0: f64,
    control: &StepControl,
    mut on_step: S,
) -> Result<(State, f64)>
where
    F: Fn(f64, &State) -> State,
    W: Fn(f64, &State) -> State,
    S: FnMut(f64, &State),
{
    let dir = if x1 >= x0 { 1.0 } else { -1.0 };
    let span = (x1 - x0).abs();
    if span == 0.0 {
        return Ok((y0, h0));
    }
    let mut x = x0;
    let mut y = y0;
    let mut h = h0.abs().min(span).max(span * 1e-14);
    let mut k = [[0.0; 2]; 7];
    k[0] = f(x, &y);
    for _ in 0..control.max_steps {
        let remaining = (x1 - x).abs();
        let finishing = h >= remaining;
        let step = if finishing { remaining } else { h };
        let hs = dir * step;
        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s][j];
                if a != 0.0 {
                    ys[0] += hs * a * kj[0];
                    ys[1] += hs * a * kj[1];
                }
            }
            k[s] = f(x + C[s] * hs, &ys);
        }
        let mut y_new = y;
        let mut err = [0.0; 2];
        for (s, ks) in k.iter().enumerate() {
            let b = if s < 6 { A[6][s] } else { 0.0 };
            for c in 0..2 {
                y_new[c] += hs * b * ks[c];
                err[c] += hs * E[s] * ks[c];
            }
        }
        let w_old = weights(x, &y);
        let w_new = weights(x + hs, &y_new);
        let mut norm: f64 = 0.0;
        for c in 0..2 {
            let w = w_old[c].max(w_new[c]);
            norm = norm.max(err[c].abs() / (control.rtol * w));
        }
        if !norm.is_finite() {
            return Err(Error::StepFailure(x));
        }
        if norm <= 1.0 {
            x = if finishing { x1 } else { x + hs };
            y = y_new;
            k[0] = k[6];
            on_step(x, &y);
            if finishing {
                return Ok((y, h));
            }
            let grow = if norm == 0.0 {
                5.0
            } else {
                (0.9 * norm.powf(-0.2)).min(5.0)
            };
            h = step * grow.max(0.2);
        } else {
            h = step * (0.9 * norm.powf(-0.2)).max(0.1);
        }
        if h < 1e-15 * x.abs().max(span) {
            return Err(Error::StepFailure(x));
        }
    }
    Err(Error::StepFailure(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator() {
        let control = StepControl {
            rtol: 1e-12,
            ..Default::default()
        };
        let (y, _) = integrate(
            |_, y| [y[1], -y[0]],
            |_, y| {
                let a = y[0].hypot(y[1]);
                [a, a]
            },
            0.0,
            [0.0, 1.0],
            10.0,
            1e-3,
            &control,
            |_, _| {},
        )
        .unwrap();
        assert!((y[0] - 10f64.sin()).abs() < 1e-9);
        assert!((y[1] - 10f64.cos()).abs() < 1e-9);
    }

    #[test]
    fn backwards() {
        let control = StepControl::default();
        let (y, _) = integrate(
            |_, y| [y[0], 0.0],
            |_, y| [y[0].abs(), 1.0],
            1.0,
            [1.0, 0.0],
            0.0,
            0.1,
            &control,
            |_, _| {},
        )
        .unwrap();
        assert!((y[0] - (-1f64).exp()).abs() < 1e-11);
    }
}
