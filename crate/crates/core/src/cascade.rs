//! The closed-form coefficient cascade F₁, F₂, T₁, T₂ → F, T → β → U, V → γ →
//! δ → g → ψ → α for one partial wave, and the pole discriminant built
//! from it.
//!
//! These closed forms define the resonance condition g = 0, equivalently
//! β = Yₗ(ka)/Jₗ(ka), equivalently Yₗ(ka)T = Jₗ(ka)F. They do not satisfy the
//! interface-matching conditions of the Green function, so the regional
//! blocks in [`crate::green`] use coefficients obtained by matching instead
//! (see [`crate::green::MatchingCoefficients`]).

use crate::bessel::{bessel_pair, BesselEval};
use crate::error::{Degenerate, Error, Result};
use crate::model::{EnergyContext, PotentialProfile};
use serde::Serialize;
use std::f64::consts::PI;

/// A denominator q is degenerate when |q| < DEGENERACY · Σ|terms of q|.
pub const DEGENERACY: f64 = 1e-12;

/// Relative agreement required between the two closed forms of δ.
pub const DELTA_FORMS_TOL: f64 = 1e-9;

/// Full cascade for fixed (l, k, μ, a, b).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientSet {
    pub l: i32,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub g: f64,
    pub u: f64,
    pub v: f64,
    pub f: f64,
    pub t: f64,
    pub f1: f64,
    pub f2: f64,
    pub t1: f64,
    pub t2: f64,
    pub psi: f64,
}

/// One denominator of the cascade with its magnitude relative to the sum
/// of absolute values of its constituent terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DenominatorCheck {
    pub quantity: Degenerate,
    pub value: f64,
    pub scale: f64,
}

impl DenominatorCheck {
    fn new(quantity: Degenerate, value: f64, scale: f64) -> Self {
        Self { quantity, value, scale }
    }

    pub fn ratio(&self) -> f64 {
        if self.scale == 0.0 {
            0.0
        } else {
            self.value.abs() / self.scale
        }
    }

    pub fn is_degenerate(&self) -> bool {
        !(self.ratio() >= DEGENERACY)
    }
}

/// Unchecked cascade: every value is computed even where a denominator has
/// collapsed, together with the diagnostics that [`coefficient_set`] acts on.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CascadeTrace {
    pub set: CoefficientSet,
    /// δ from the γ-bearing form, for cross-checking the simplified form.
    pub delta_gamma_form: f64,
    pub delta_gamma_form_denominator: DenominatorCheck,
    /// Denominators in dependency order: Jₗ(ka), T, U, δ-denominator, g, Jₗ(kb).
    pub denominators: Vec<DenominatorCheck>,
    /// Δₗ = Yₗ(ka)T − Jₗ(ka)F.
    pub discriminant: f64,
    /// |Yₗ(ka)T| + |Jₗ(ka)F|.
    pub discriminant_scale: f64,
    pub at_ka: BesselEval,
}

impl CascadeTrace {
    pub fn first_degenerate(&self) -> Option<Degenerate> {
        self.denominators.iter().find(|d| d.is_degenerate()).map(|d| d.quantity)
    }

    /// Relative gap between the two forms of δ, or `None` when the γ-bearing
    /// form has a degenerate denominator.
    pub fn delta_forms_gap(&self) -> Option<f64> {
        if self.delta_gamma_form_denominator.is_degenerate() {
            return None;
        }
        let (d1, d2) = (self.set.delta, self.delta_gamma_form);
        let scale = d1.abs().max(d2.abs());
        Some(if scale == 0.0 { 0.0 } else { (d1 - d2).abs() / scale })
    }

    /// |g| / (|γ| + |δ|).
    pub fn g_relative(&self) -> f64 {
        let s = self.set.gamma.abs() + self.set.delta.abs();
        if s == 0.0 {
            0.0
        } else {
            self.set.g.abs() / s
        }
    }

    /// |β Jₗ(ka) − Yₗ(ka)| / (|β Jₗ(ka)| + |Yₗ(ka)|).
    pub fn beta_gap(&self) -> f64 {
        let bj = self.set.beta * self.at_ka.j;
        let s = bj.abs() + self.at_ka.y.abs();
        if s == 0.0 {
            0.0
        } else {
            (bj - self.at_ka.y).abs() / s
        }
    }
}

/// Evaluate the cascade without degeneracy checks. Fails only on Bessel
/// evaluation errors.
pub fn cascade_trace(l: i32, ctx: &EnergyContext, profile: &PotentialProfile) -> Result<CascadeTrace> {
    let (k, mu) = (ctx.k, ctx.mu);
    let (a, b) = (profile.a(), profile.b());
    let ma = bessel_pair(l, mu * a)?;
    let mb = bessel_pair(l, mu * b)?;
    let ka = bessel_pair(l, k * a)?;
    let kb = bessel_pair(l, k * b)?;

    let f1 = ma.j * mb.yp - ma.y * mb.jp;
    let f2 = mb.j * ma.yp - mb.y * ma.jp;
    let t1 = ma.j * mb.y - ma.y * mb.j;
    let t2 = mb.jp * ma.yp - mb.yp * ma.jp;

    let pa = PI * a;
    let f = mu * kb.j * (2.0 + k * pa * ka.j * ka.yp) * f1
        + k * kb.jp * (2.0 + k * pa * ka.j * ka.jp) * t1
        + mu * pa * ka.j * ka.y * (mu * kb.j * t2 + k * kb.jp * f2);
    let t_terms = [
        pa * k * mu * ka.j * ka.jp * kb.j * f1,
        -pa * k * mu * ka.j * ka.j * kb.jp * f2,
        -pa * ka.j * mu * mu * ka.j * kb.j * t2,
        -pa * ka.j * k * k * ka.jp * kb.jp * t1,
    ];
    let t: f64 = t_terms.iter().sum();
    let beta = f / t;

    // Outer-region combinations Yₗ(ka) − βJₗ(ka) and its derivative.
    let p = ka.y - beta * ka.j;
    let q = ka.yp - beta * ka.jp;
    let v = k * ma.y * q - mu * ma.yp * p;
    let u = k * ma.j * q - mu * ma.jp * p;
    let gamma = v / u;

    let delta_num = 2.0 * ma.y + pa * ka.j * v;
    let delta_den = 2.0 * ma.j + pa * ka.j * u;
    let delta = delta_num / delta_den;

    let mid_a = ma.yp - gamma * ma.jp;
    let dg_num = mu * ma.y * mid_a + k * gamma * ka.j * q;
    let dg_den_terms = [mu * ma.j * mid_a, k * ka.j * q];
    let dg_den = dg_den_terms[0] + dg_den_terms[1];
    let delta_gamma_form = dg_num / dg_den;

    let g = gamma - delta;
    let psi = (mb.y / g - gamma * mb.j / g) * (mb.y - delta * mb.j) / (kb.j * kb.j);
    let alpha = kb.y / kb.j + psi;

    let denominators = vec![
        DenominatorCheck::new(Degenerate::JKa, ka.j, ka.modulus()),
        DenominatorCheck::new(Degenerate::T, t, t_terms.iter().map(|x| x.abs()).sum()),
        DenominatorCheck::new(Degenerate::U, u, (k * ma.j * q).abs() + (mu * ma.jp * p).abs()),
        DenominatorCheck::new(
            Degenerate::DeltaDenominator,
            delta_den,
            (2.0 * ma.j).abs() + (pa * ka.j * u).abs(),
        ),
        DenominatorCheck::new(Degenerate::G, g, gamma.abs() + delta.abs()),
        DenominatorCheck::new(Degenerate::JKb, kb.j, kb.modulus()),
    ];

    Ok(CascadeTrace {
        set: CoefficientSet {
            l,
            alpha,
            beta,
            gamma,
            delta,
            g,
            u,
            v,
            f,
            t,
            f1,
            f2,
            t1,
            t2,
            psi,
        },
        delta_gamma_form,
        delta_gamma_form_denominator: DenominatorCheck::new(
            Degenerate::DeltaDenominator,
            dg_den,
            dg_den_terms[0].abs() + dg_den_terms[1].abs(),
        ),
        denominators,
        discriminant: ka.y * t - ka.j * f,
        discriminant_scale: (ka.y * t).abs() + (ka.j * f).abs(),
        at_ka: ka,
    })
}

/// The closed-form cascade with degeneracy detection and the δ-form cross-check.
pub fn coefficient_set(l: i32, ctx: &EnergyContext, profile: &PotentialProfile) -> Result<CoefficientSet> {
    let trace = cascade_trace(l, ctx, profile)?;
    if let Some(which) = trace.first_degenerate() {
        return Err(Error::NearPole(which));
    }
    if let Some(gap) = trace.delta_forms_gap() {
        if gap > DELTA_FORMS_TOL {
            return Err(Error::InconsistentDelta {
                simplified: trace.set.delta,
                gamma_form: trace.delta_gamma_form,
            });
        }
    }
    Ok(trace.set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{wavenumbers, Units};
    use approx::assert_relative_eq;

    fn setup(e: f64) -> (EnergyContext, PotentialProfile) {
        let p = PotentialProfile::new(1.0, 2.0, 1.0).unwrap();
        (wavenumbers(e, &p, Units::default()).unwrap(), p)
    }

    // Independent 50-digit mpmath transcription of the closed forms.
    #[test]
    fn fixture_l0_e2() {
        let (ctx, p) = setup(2.0);
        let c = coefficient_set(0, &ctx, &p).unwrap();
        let expect = [
            (c.f1, 0.399_497_460_935_529_33),
            (c.f2, 0.132_800_949_722_290_89),
            (c.t1, -0.370_778_363_504_162_94),
            (c.t2, 0.403_445_129_988_319_63),
            (c.f, 1.258_594_870_555_083_1),
            (c.t, -0.073_353_068_349_462_892),
            (c.beta, -17.158_039_859_477_792),
            (c.u, -3.958_559_166_979_071_2),
            (c.v, -4.838_155_925_177_610_3),
            (c.gamma, 1.222_201_240_677_625_9),
            (c.delta, 1.310_926_310_429_881_3),
            (c.g, -0.088_725_069_752_255_372),
            (c.psi, -27.934_696_554_018_088),
            (c.alpha, -27.318_320_439_735_46),
        ];
        for (got, want) in expect {
            assert_relative_eq!(got, want, max_relative = 1e-11);
        }
    }

    #[test]
    fn invariants() {
        for l in -3..=6 {
            for e in [1.3, 2.0, 3.7, 9.0] {
                let (ctx, p) = setup(e);
                let Ok(c) = coefficient_set(l, &ctx, &p) else { continue };
                assert_eq!(c.gamma - c.delta, c.g);
                assert_relative_eq!(c.beta * c.t, c.f, max_relative = 1e-10);
                assert_relative_eq!(c.gamma * c.u, c.v, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn parity() {
        let (ctx, p) = setup(2.6);
        for l in 1..6 {
            let a = coefficient_set(l, &ctx, &p).unwrap();
            let b = coefficient_set(-l, &ctx, &p).unwrap();
            assert_relative_eq!(a.beta, b.beta, max_relative = 1e-14);
            assert_relative_eq!(a.alpha, b.alpha, max_relative = 1e-14);
            assert_relative_eq!(a.g, b.g, max_relative = 1e-14);
        }
    }

    #[test]
    fn delta_forms_agree() {
        let (ctx, p) = setup(2.0);
        let trace = cascade_trace(1, &ctx, &p).unwrap();
        assert!(trace.delta_forms_gap().unwrap() < 1e-12);
    }
}
