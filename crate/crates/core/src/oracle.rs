//! Independent construction of the radial Green function by numerical
//! integration of
//!
//! ```text
//! u″ + u′/r + (κ² − l²/r²) u = 0,   κ = k outside the barrier, μ inside
//! ```
//!
//! from a solution regular at the origin and a solution equal to the standing
//! wave Jₗ(kr) beyond the barrier, joined with the Wronskian normalisation
//! G = (2/π) u_reg(r<) u_out(r>) / (r W(r)), with r·W(r) constant in r.
//!
//! When the barrier barely scatters, the two solutions are nearly dependent and
//! integration error in W is amplified. The relative error of G behaves like
//! 2·rtol/c, where c is |W| over the size of its two terms at the outer start
//! radius. Such pairs are re-integrated at a tighter tolerance and reported as
//! `WronskianDegenerate` if the estimate still exceeds [`ERROR_BUDGET`].

use crate::bessel::bessel_pair;
use crate::cascade::DEGENERACY;
use crate::error::{Error, Result};
use crate::model::{classify_region, EnergyContext, PotentialProfile, Region};
use crate::ode::{integrate, State, StepControl};
use serde::Serialize;
use std::f64::consts::FRAC_2_PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Provenance {
    /// u = Jₗ(kr) near the origin.
    RegularAtOrigin,
    /// u = Jₗ(kr) beyond the barrier.
    OuterStandingWave,
}

/// Largest acceptable [`OracleGreen::error_estimate`]. Above it the oracle
/// reports `WronskianDegenerate` instead of a value.
pub const ERROR_BUDGET: f64 = 2e-7;
/// Tightest tolerance used when re-integrating an ill-conditioned pair.
pub const MIN_RTOL: f64 = 1e-13;

/// Samples of one solution of the radial equation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialSolution {
    pub l: i32,
    pub provenance: Provenance,
    /// Radii in integration order.
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    pub up: Vec<f64>,
}

impl RadialSolution {
    /// (u, u′) at a radius that is on the sample grid.
    pub fn at(&self, r: f64) -> Option<(f64, f64)> {
        self.r.iter().position(|&x| x == r).map(|i| (self.u[i], self.up[i]))
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSettings {
    pub control: StepControl,
    /// Regular solutions start at this fraction of b.
    pub origin_fraction: f64,
}

impl Default for OracleSettings {
    fn default() -> Self {
        Self {
            control: StepControl::default(),
            origin_fraction: 1e-6,
        }
    }
}

impl OracleSettings {
    pub fn with_rtol(rtol: f64) -> Self {
        Self {
            control: StepControl {
                rtol,
                ..StepControl::default()
            },
            ..Self::default()
        }
    }

    /// Default start radius for a provenance: 1e-6·b, or max(50/k, 5a).
    pub fn start_radius(&self, provenance: Provenance, ctx: &EnergyContext, profile: &PotentialProfile) -> f64 {
        match provenance {
            Provenance::RegularAtOrigin => self.origin_fraction * profile.b(),
            Provenance::OuterStandingWave => (50.0 / ctx.k).max(5.0 * profile.a()),
        }
    }
}

struct Radial<'a> {
    l2: f64,
    ctx: &'a EnergyContext,
    profile: &'a PotentialProfile,
    control: StepControl,
}

impl Radial<'_> {
    fn kappa_between(&self, x0: f64, x1: f64) -> f64 {
        let mid = 0.5 * (x0 + x1);
        let region = if mid < self.profile.b() {
            Region::Inner
        } else if mid <= self.profile.a() {
            Region::Mid
        } else {
            Region::Outer
        };
        self.ctx.kappa(region)
    }

    /// Advance `y` from `x0` to `x1`, stopping at any interface in between.
    fn advance(&self, x0: f64, y: State, x1: f64, h: &mut f64, mut visit: impl FnMut(f64, &State)) -> Result<State> {
        let mut stops: Vec<f64> = [self.profile.b(), self.profile.a()]
            .into_iter()
            .filter(|&s| (s - x0) * (s - x1) < 0.0)
            .collect();
        if x1 < x0 {
            stops.reverse();
        }
        stops.push(x1);
        let (mut x, mut y) = (x0, y);
        for stop in stops {
            let kappa = self.kappa_between(x, stop);
            let k2 = kappa * kappa;
            let l2 = self.l2;
            let rhs = move |r: f64, s: &State| [s[1], -s[1] / r - (k2 - l2 / (r * r)) * s[0]];
            let weights = move |r: f64, s: &State| {
                let q = (k2 + l2 / (r * r)).sqrt();
                let amp = s[0].hypot(s[1] / q);
                [amp, amp * q]
            };
            if *h <= 0.0 {
                *h = 1e-2 / (k2 + l2 / (x * x)).sqrt();
            }
            let (y1, last) = integrate(rhs, weights, x, y, stop, *h, &self.control, &mut visit)?;
            *h = last;
            x = stop;
            y = y1;
        }
        Ok(y)
    }
}

fn initial_state(l: i32, ctx: &EnergyContext, r: f64) -> Result<State> {
    let b = bessel_pair(l, ctx.k * r)?;
    Ok([b.j, ctx.k * b.jp])
}

fn check_start(provenance: Provenance, r_start: f64, profile: &PotentialProfile) -> Result<()> {
    let region = classify_region(r_start, profile)?;
    let ok = match provenance {
        Provenance::RegularAtOrigin => region == Region::Inner,
        Provenance::OuterStandingWave => region == Region::Outer,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "{provenance:?} data cannot start at r = {r_start} ({region} region)"
        )))
    }
}

fn check_regime(ctx: &EnergyContext, profile: &PotentialProfile) -> Result<()> {
    if ctx.e <= profile.v0() {
        return Err(Error::NotDiffusionRegime {
            e: ctx.e,
            v0: profile.v0(),
        });
    }
    Ok(())
}

/// Integrate from `r_start` (where the provenance fixes the initial data) to
/// `r_end`, recording every accepted step.
pub fn integrate_radial(
    l: i32,
    ctx: &EnergyContext,
    profile: &PotentialProfile,
    provenance: Provenance,
    r_start: f64,
    r_end: f64,
) -> Result<RadialSolution> {
    integrate_radial_with(l, ctx, profile, provenance, r_start, r_end, &OracleSettings::default())
}

pub fn integrate_radial_with(
    l: i32,
    ctx: &EnergyContext,
    profile: &PotentialProfile,
    provenance: Provenance,
    r_start: f64,
    r_end: f64,
    settings: &OracleSettings,
) -> Result<RadialSolution> {
    check_regime(ctx, profile)?;
    check_start(provenance, r_start, profile)?;
    classify_region(r_end, profile)?;
    let y0 = initial_state(l, ctx, r_start)?;
    let mut sol = RadialSolution {
        l,
        provenance,
        r: vec![r_start],
        u: vec![y0[0]],
        up: vec![y0[1]],
    };
    let radial = Radial {
        l2: (l as f64).powi(2),
        ctx,
        profile,
        control: settings.control,
    };
    let mut h = 0.0;
    radial.advance(r_start, y0, r_end, &mut h, |x, y| {
        sol.r.push(x);
        sol.u.push(y[0]);
        sol.up.push(y[1]);
    })?;
    Ok(sol)
}

/// Solution of the given provenance sampled exactly at `radii`, integrated
/// from the default start radius in a single sweep.
pub fn sample_radial(
    l: i32,
    ctx: &EnergyContext,
    profile: &PotentialProfile,
    provenance: Provenance,
    radii: &[f64],
    settings: &OracleSettings,
) -> Result<RadialSolution> {
    check_regime(ctx, profile)?;
    let mut grid: Vec<f64> = radii.to_vec();
    for &r in &grid {
        classify_region(r, profile)?;
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let mut start = settings.start_radius(provenance, ctx, profile);
    if provenance == Provenance::OuterStandingWave {
        grid.reverse();
        if let Some(&far) = grid.first() {
            start = start.max(far);
        }
    } else if let Some(&near) = grid.first() {
        start = start.min(near);
    }
    let radial = Radial {
        l2: (l as f64).powi(2),
        ctx,
        profile,
        control: settings.control,
    };
    let mut y = initial_state(l, ctx, start)?;
    let (mut x, mut h) = (start, 0.0);
    let mut sol = RadialSolution {
        l,
        provenance,
        r: Vec::with_capacity(grid.len()),
        u: Vec::with_capacity(grid.len()),
        up: Vec::with_capacity(grid.len()),
    };
    for r in grid {
        y = radial.advance(x, y, r, &mut h, |_, _| {})?;
        x = r;
        sol.r.push(r);
        sol.u.push(y[0]);
        sol.up.push(y[1]);
    }
    Ok(sol)
}

/// Oracle Green function for one partial wave on a fixed set of radii.
#[derive(Debug, Clone)]
pub struct OracleGreen {
    l: i32,
    regular: RadialSolution,
    outgoing: RadialSolution,
    rtol: f64,
    conditioning: f64,
}

impl OracleGreen {
    pub fn new(
        l: i32,
        ctx: &EnergyContext,
        profile: &PotentialProfile,
        radii: &[f64],
        settings: &OracleSettings,
    ) -> Result<Self> {
        let far = radii.iter().copied().fold(
            settings.start_radius(Provenance::OuterStandingWave, ctx, profile),
            f64::max,
        );
        let mut grid = radii.to_vec();
        grid.push(far);
        let build = |settings: &OracleSettings| -> Result<Self> {
            let mut oracle = Self {
                l,
                regular: sample_radial(l, ctx, profile, Provenance::RegularAtOrigin, &grid, settings)?,
                outgoing: sample_radial(l, ctx, profile, Provenance::OuterStandingWave, &grid, settings)?,
                rtol: settings.control.rtol,
                conditioning: 0.0,
            };
            let ((u, up), (v, vp)) = oracle.pair(far)?;
            let scale = (u * vp).abs() + (up * v).abs();
            oracle.conditioning = if scale > 0.0 {
                (u * vp - up * v).abs() / scale
            } else {
                0.0
            };
            Ok(oracle)
        };
        let oracle = build(settings)?;
        let rtol = settings.control.rtol;
        if oracle.error_estimate() <= ERROR_BUDGET || rtol <= MIN_RTOL {
            return Ok(oracle);
        }
        let tighter = (0.25 * ERROR_BUDGET * oracle.conditioning).clamp(MIN_RTOL, rtol);
        build(&OracleSettings {
            control: StepControl {
                rtol: tighter,
                ..settings.control
            },
            ..*settings
        })
    }

    /// Relative error of G expected from integration, 2·rtol/conditioning.
    pub fn error_estimate(&self) -> f64 {
        2.0 * self.rtol / self.conditioning
    }

    /// |W| relative to |u_reg u_out'| + |u_reg' u_out| where the outer solution
    /// starts. Small values mean the two solutions are nearly dependent, and
    /// integration error in W is amplified by the inverse.
    pub fn conditioning(&self) -> f64 {
        self.conditioning
    }

    pub fn order(&self) -> i32 {
        self.l
    }

    fn pair(&self, r: f64) -> Result<((f64, f64), (f64, f64))> {
        match (self.regular.at(r), self.outgoing.at(r)) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(Error::InvalidInput(format!("r = {r} is not on the oracle grid"))),
        }
    }

    /// r·W(u_reg, u_out) at a grid radius; constant in r for exact solutions.
    pub fn scaled_wronskian(&self, r: f64) -> Result<f64> {
        let ((u, up), (v, vp)) = self.pair(r)?;
        Ok(r * (u * vp - up * v))
    }

    /// G(l; r, r′). The normalisation uses the mean of r·W at r and r′, so the
    /// result is exactly symmetric and the jump at r = r′ is 2/(πr′).
    pub fn value(&self, r: f64, rp: f64) -> Result<f64> {
        let (lo, hi) = if r <= rp { (r, rp) } else { (rp, r) };
        let ((reg_lo, regp_lo), (out_lo, outp_lo)) = self.pair(lo)?;
        let ((reg_hi, regp_hi), (out_hi, outp_hi)) = self.pair(hi)?;
        let w = 0.5 * (lo * (reg_lo * outp_lo - regp_lo * out_lo) + hi * (reg_hi * outp_hi - regp_hi * out_hi));
        let scale = 0.5
            * (lo * ((reg_lo * outp_lo).abs() + (regp_lo * out_lo).abs())
                + hi * ((reg_hi * outp_hi).abs() + (regp_hi * out_hi).abs()));
        if !(w.abs() >= DEGENERACY * scale) || !(self.error_estimate() <= ERROR_BUDGET) {
            return Err(Error::WronskianDegenerate(rp));
        }
        Ok(FRAC_2_PI * reg_lo * out_hi / w)
    }
}

/// G(l; r, r′) from the ODE oracle with default settings.
pub fn oracle_green(l: i32, r: f64, rp: f64, ctx: &EnergyContext, profile: &PotentialProfile) -> Result<f64> {
    OracleGreen::new(l, ctx, profile, &[r, rp], &OracleSettings::default())?.value(r, rp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel::bessel_j;
    use crate::model::{wavenumbers, Units};
    use approx::assert_relative_eq;

    fn setup(e: f64) -> (EnergyContext, PotentialProfile) {
        let p = PotentialProfile::new(1.0, 2.0, 1.0).unwrap();
        (wavenumbers(e, &p, Units::default()).unwrap(), p)
    }

    #[test]
    fn regular_solution_is_bessel_inside() {
        let (ctx, p) = setup(2.0);
        let sol = integrate_radial(0, &ctx, &p, Provenance::RegularAtOrigin, 1e-6, 0.999).unwrap();
        for (r, u) in sol.r.iter().zip(&sol.u) {
            let j = bessel_j(0, ctx.k * r).unwrap();
            assert!((u / j - 1.0).abs() <= 1e-8, "r={r}");
        }
    }

    #[test]
    fn wronskian_constant() {
        let (ctx, p) = setup(2.0);
        let radii: Vec<f64> = (1..60).map(|i| 0.07 * i as f64).collect();
        let o = OracleGreen::new(2, &ctx, &p, &radii, &OracleSettings::default()).unwrap();
        let w0 = o.scaled_wronskian(radii[0]).unwrap();
        for &r in &radii {
            assert_relative_eq!(o.scaled_wronskian(r).unwrap(), w0, max_relative = 1e-8);
        }
    }

    // Same fixture as the closed form; frozen from the 50-digit matching.
    #[test]
    fn fixture() {
        let (ctx, p) = setup(2.0);
        let g = oracle_green(0, 0.5, 0.7, &ctx, &p).unwrap();
        assert_relative_eq!(g, -5.179_473_059_151_446_9, max_relative = 1e-8);
    }

    #[test]
    fn symmetric() {
        let (ctx, p) = setup(2.0);
        let o = OracleGreen::new(1, &ctx, &p, &[0.3, 1.5], &OracleSettings::default()).unwrap();
        assert_eq!(o.value(0.3, 1.5).unwrap(), o.value(1.5, 0.3).unwrap());
    }

    #[test]
    fn bad_start() {
        let (ctx, p) = setup(2.0);
        assert!(integrate_radial(0, &ctx, &p, Provenance::RegularAtOrigin, 1.5, 3.0).is_err());
        assert!(integrate_radial(0, &ctx, &p, Provenance::OuterStandingWave, 1.5, 0.5).is_err());
    }

    // Thin, low barrier at low energy: the regular solution is almost a pure
    // Jₗ outside, so the Wronskian with the standing wave is tiny. Reference
    // value from 50-digit mpmath interface matching.
    #[test]
    fn weak_scattering_is_refined_or_flagged() {
        let p = PotentialProfile::new(0.3, 0.36, 0.2).unwrap();
        let ctx = EnergyContext::new(0.25, &p, Units::default()).unwrap();
        let (r, rp) = (0.015, 0.3 * 0.788_755_478_544_326_6);
        let want = -0.167_230_638_575_007_36;
        let o = OracleGreen::new(2, &ctx, &p, &[r, rp], &OracleSettings::default()).unwrap();
        assert!(o.conditioning() < 1e-5);
        match o.value(r, rp) {
            Ok(v) => assert!((v - want).abs() <= 1e-6 * want.abs(), "{v}"),
            Err(e) => assert!(matches!(e, Error::WronskianDegenerate(_))),
        }
        let loose = OracleGreen::new(2, &ctx, &p, &[r, rp], &OracleSettings::with_rtol(1e-8)).unwrap();
        assert!(matches!(loose.value(r, rp), Err(Error::WronskianDegenerate(_))));
    }
}
