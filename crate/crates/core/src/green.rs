//! Same-region blocks G¹¹, G²², G³³ of the radial Green function and the
//! angular partial-wave sum.
//!
//! Each block has the two-branch product form
//!
//! ```text
//! G¹¹ = [Yₗ(kr>) − α Jₗ(kr>)] Jₗ(kr<)                        0 < r, r' < b
//! G²² = [Yₗ(μr>) − γ Jₗ(μr>)] [Yₗ(μr<) − δ Jₗ(μr<)] / g       b ≤ r, r' ≤ a
//! G³³ = −Jₗ(kr>) [Yₗ(kr<) − β Jₗ(kr<)]                         r, r' > a
//! ```
//!
//! with g = γ − δ and a jump of 2/(πr') in ∂G/∂r at r = r'. The outgoing
//! branch is the standing wave Jₗ(kr) beyond a and the regular branch is
//! Jₗ(kr) inside b; α, β, γ, δ are fixed by continuity of the solution and its
//! derivative at r = a and r = b.

use crate::bessel::{bessel_pair, BesselEval};
use crate::cascade::DEGENERACY;
use crate::error::{Degenerate, Error, Result};
use crate::model::{classify_region, EnergyContext, PotentialProfile, Region};
use serde::Serialize;

/// Largest order reachable by the automatic partial-wave truncation.
pub const MAX_AUTO_ORDER: i32 = 200;
/// Relative size below which a partial-wave term counts as converged.
pub const SUM_TERM_TOL: f64 = 1e-10;

/// Coefficients of the regional branches, fixed by interface matching.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatchingCoefficients {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub g: f64,
    /// Denominator magnitudes relative to their terms, in the order
    /// γ, δ, g, β, α.
    #[serde(skip)]
    checks: [(Degenerate, f64); 5],
}

/// Coefficient c such that Yₗ(κr) − c Jₗ(κr) has value and r-derivative
/// proportional to `target` at the point where `f` was evaluated. Returns c and
/// the denominator magnitude relative to its terms.
fn match_branch(kappa: f64, f: &BesselEval, target: (f64, f64)) -> (f64, f64) {
    let s = target.0.abs().max(target.1.abs());
    let (t, tp) = if s > 0.0 { (target.0 / s, target.1 / s) } else { target };
    let num = kappa * f.yp * t - f.y * tp;
    let terms = [kappa * f.jp * t, -f.j * tp];
    let den = terms[0] + terms[1];
    let scale = terms[0].abs() + terms[1].abs();
    let rel = if scale == 0.0 { 0.0 } else { den.abs() / scale };
    (num / den, rel)
}

impl MatchingCoefficients {
    pub fn new(l: i32, ctx: &EnergyContext, profile: &PotentialProfile) -> Result<Self> {
        let (k, mu) = (ctx.k, ctx.mu);
        let ma = bessel_pair(l, mu * profile.a())?;
        let mb = bessel_pair(l, mu * profile.b())?;
        let ka = bessel_pair(l, k * profile.a())?;
        let kb = bessel_pair(l, k * profile.b())?;

        // Y(μr) − γJ(μr) continues Jₗ(kr) inward through r = a.
        let (gamma, gamma_rel) = match_branch(mu, &ma, (ka.j, k * ka.jp));
        // Y(μr) − δJ(μr) continues Jₗ(kr) outward through r = b.
        let (delta, delta_rel) = match_branch(mu, &mb, (kb.j, k * kb.jp));
        let g = gamma - delta;
        let g_scale = gamma.abs() + delta.abs();
        let g_rel = if g_scale == 0.0 { 0.0 } else { g.abs() / g_scale };

        // Y(kr) − βJ(kr) continues the regular branch outward through r = a.
        let (beta, beta_rel) = match_branch(k, &ka, (ma.y - delta * ma.j, mu * (ma.yp - delta * ma.jp)));
        // Y(kr) − αJ(kr) continues the outgoing branch inward through r = b.
        let (alpha, alpha_rel) = match_branch(k, &kb, (mb.y - gamma * mb.j, mu * (mb.yp - gamma * mb.jp)));

        let coeffs = Self {
            alpha,
            beta,
            gamma,
            delta,
            g,
            checks: [
                (Degenerate::MatchedGamma, gamma_rel),
                (Degenerate::MatchedDelta, delta_rel),
                (Degenerate::MatchedG, g_rel),
                (Degenerate::MatchedBeta, beta_rel),
                (Degenerate::MatchedAlpha, alpha_rel),
            ],
        };
        if [alpha, beta, gamma, delta, g].iter().any(|c| c.is_nan()) {
            return Err(Error::ArgumentOverflow {
                order: l,
                x: k * profile.a(),
            });
        }
        Ok(coeffs)
    }

    /// Quantities whose denominators collapsed, in dependency order.
    pub fn degenerate(&self) -> impl Iterator<Item = Degenerate> + '_ {
        self.checks
            .iter()
            .filter(|(_, rel)| !(*rel >= DEGENERACY))
            .map(|(q, _)| *q)
    }

    /// First degeneracy among the coefficients a block depends on.
    pub fn check_block(&self, region: Region) -> Result<()> {
        let needed: &[Degenerate] = match region {
            Region::Inner => &[Degenerate::MatchedGamma, Degenerate::MatchedAlpha],
            Region::Mid => &[Degenerate::MatchedGamma, Degenerate::MatchedDelta, Degenerate::MatchedG],
            Region::Outer => &[Degenerate::MatchedDelta, Degenerate::MatchedBeta],
        };
        match self.degenerate().find(|q| needed.contains(q)) {
            Some(q) => Err(Error::NearPole(q)),
            None => Ok(()),
        }
    }
}

/// One evaluation of G(l; r, r').
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialGreenValue {
    pub l: i32,
    pub r: f64,
    pub rp: f64,
    pub region: Region,
    pub value: f64,
}

/// Which branch of a two-branch block: `Lower` is the r ≤ r' formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lower,
    Upper,
}

/// A branch value with its r-derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchValue {
    pub value: f64,
    pub slope: f64,
}

/// Radial Green function of one partial wave at fixed energy.
#[derive(Debug, Clone)]
pub struct RadialGreen {
    l: i32,
    ctx: EnergyContext,
    profile: PotentialProfile,
    coeffs: MatchingCoefficients,
}

impl RadialGreen {
    pub fn new(l: i32, ctx: &EnergyContext, profile: &PotentialProfile) -> Result<Self> {
        if ctx.e <= profile.v0() {
            return Err(Error::NotDiffusionRegime {
                e: ctx.e,
                v0: profile.v0(),
            });
        }
        Ok(Self {
            l,
            ctx: *ctx,
            profile: *profile,
            coeffs: MatchingCoefficients::new(l, ctx, profile)?,
        })
    }

    pub fn order(&self) -> i32 {
        self.l
    }

    pub fn coefficients(&self) -> &MatchingCoefficients {
        &self.coeffs
    }

    pub fn context(&self) -> &EnergyContext {
        &self.ctx
    }

    pub fn profile(&self) -> &PotentialProfile {
        &self.profile
    }

    /// G(l; r, r') for r and r' in the same region.
    pub fn eval(&self, r: f64, rp: f64) -> Result<RadialGreenValue> {
        let region = classify_region(r, &self.profile)?;
        let source = classify_region(rp, &self.profile)?;
        if region != source {
            return Err(Error::CrossRegionUnsupported(region.name(), source.name()));
        }
        let side = if r <= rp { Side::Lower } else { Side::Upper };
        let v = self.branch(region, side, r, rp)?;
        Ok(RadialGreenValue {
            l: self.l,
            r,
            rp,
            region,
            value: v.value,
        })
    }

    /// Evaluate one branch formula of `region`'s block. `r` and `rp` may sit
    /// anywhere on the closed region, including its interfaces, and the branch
    /// is taken as given rather than chosen from the ordering of r and r'.
    pub fn branch(&self, region: Region, side: Side, r: f64, rp: f64) -> Result<BranchValue> {
        for x in [r, rp] {
            if !(x > 0.0) || !x.is_finite() {
                return Err(Error::NonPositiveRadius(x));
            }
        }
        self.coeffs.check_block(region)?;
        let kappa = self.ctx.kappa(region);
        let at_r = bessel_pair(self.l, kappa * r)?;
        let at_rp = bessel_pair(self.l, kappa * rp)?;
        let c = &self.coeffs;
        // Y − cJ and its derivative with respect to the argument.
        let comb = |b: &BesselEval, coef: f64| (b.y - coef * b.j, b.yp - coef * b.jp);
        let (value, slope) = match (region, side) {
            (Region::Inner, Side::Lower) => {
                let (w, _) = comb(&at_rp, c.alpha);
                (w * at_r.j, w * at_r.jp)
            }
            (Region::Inner, Side::Upper) => {
                let (w, wp) = comb(&at_r, c.alpha);
                (w * at_rp.j, wp * at_rp.j)
            }
            (Region::Mid, Side::Lower) => {
                let (outgoing, _) = comb(&at_rp, c.gamma);
                let (regular, regular_p) = comb(&at_r, c.delta);
                (outgoing * regular / c.g, outgoing * regular_p / c.g)
            }
            (Region::Mid, Side::Upper) => {
                let (regular, _) = comb(&at_rp, c.delta);
                let (outgoing, outgoing_p) = comb(&at_r, c.gamma);
                (regular * outgoing / c.g, regular * outgoing_p / c.g)
            }
            (Region::Outer, Side::Lower) => {
                let (w, wp) = comb(&at_r, c.beta);
                (-at_rp.j * w, -at_rp.j * wp)
            }
            (Region::Outer, Side::Upper) => {
                let (w, _) = comb(&at_rp, c.beta);
                (-w * at_r.j, -w * at_r.jp)
            }
        };
        Ok(BranchValue {
            value,
            slope: kappa * slope,
        })
    }
}

/// G(l; r, r') for a same-region pair.
pub fn green_radial(
    l: i32,
    r: f64,
    rp: f64,
    ctx: &EnergyContext,
    profile: &PotentialProfile,
) -> Result<RadialGreenValue> {
    for x in [r, rp] {
        classify_region(x, profile)?;
    }
    RadialGreen::new(l, ctx, profile)?.eval(r, rp)
}

/// Truncation of the partial-wave sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    Fixed(i32),
    /// Stop once three consecutive |2G(l)| are each ≤ 1e-10·|partial sum|.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartialWaveSum {
    pub value: f64,
    pub lmax: i32,
}

/// G(r, θ, r', θ') = G(0) + 2 Σ_{l≥1} G(l) cos(l(θ − θ')).
pub fn green_polar_sum(
    r: f64,
    theta: f64,
    rp: f64,
    thetap: f64,
    ctx: &EnergyContext,
    profile: &PotentialProfile,
    truncation: Truncation,
) -> Result<PartialWaveSum> {
    let region = classify_region(r, profile)?;
    let source = classify_region(rp, profile)?;
    if region != source {
        return Err(Error::CrossRegionUnsupported(region.name(), source.name()));
    }
    let phi = theta - thetap;
    let mut sum = RadialGreen::new(0, ctx, profile)?.eval(r, rp)?.value;
    match truncation {
        Truncation::Fixed(lmax) => {
            if lmax < 0 {
                return Err(Error::InvalidInput(format!("lmax must be >= 0, got {lmax}")));
            }
            for l in 1..=lmax {
                let g = RadialGreen::new(l, ctx, profile)?.eval(r, rp)?.value;
                sum += 2.0 * g * (l as f64 * phi).cos();
            }
            Ok(PartialWaveSum { value: sum, lmax })
        }
        Truncation::Auto => {
            let mut small = 0;
            for l in 1..=MAX_AUTO_ORDER {
                let g = RadialGreen::new(l, ctx, profile)?.eval(r, rp)?.value;
                sum += 2.0 * g * (l as f64 * phi).cos();
                if (2.0 * g).abs() <= SUM_TERM_TOL * sum.abs() {
                    small += 1;
                    if small == 3 {
                        return Ok(PartialWaveSum { value: sum, lmax: l });
                    }
                } else {
                    small = 0;
                }
            }
            Err(Error::NoConvergence(MAX_AUTO_ORDER))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{wavenumbers, Units};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn setup(e: f64) -> (EnergyContext, PotentialProfile) {
        let p = PotentialProfile::new(1.0, 2.0, 1.0).unwrap();
        (wavenumbers(e, &p, Units::default()).unwrap(), p)
    }

    // 50-digit mpmath matching of Jₗ(kr) at a and b; agrees with a DOP853
    // integration of the radial ODE to ~1e-10.
    #[test]
    fn matched_coefficients_fixture() {
        let (ctx, p) = setup(2.0);
        let c = MatchingCoefficients::new(0, &ctx, &p).unwrap();
        assert_relative_eq!(c.alpha, 7.762_189_501_631_690_1, max_relative = 1e-11);
        assert_relative_eq!(c.beta, -5.615_410_745_838_801_1, max_relative = 1e-11);
        assert_relative_eq!(c.gamma, 1.115_583_381_534_353_5, max_relative = 1e-11);
        assert_relative_eq!(c.delta, 1.470_981_433_179_159_6, max_relative = 1e-11);
        assert_relative_eq!(c.g, -0.355_398_051_644_806_15, max_relative = 1e-11);
    }

    #[test]
    fn value_fixtures() {
        let (ctx, p) = setup(2.0);
        let cases = [
            (0, 0.5, 0.7, -5.179_473_059_151_446_9),
            (0, 1.2, 1.7, 0.017_177_309_358_380_368),
            (0, 2.5, 3.3, -0.553_028_370_479_614_17),
            (1, 0.4, 0.8, -0.339_085_834_788_374_36),
            (2, 1.2, 1.7, -0.313_513_338_042_370_09),
            (2, 2.5, 3.3, -0.274_555_096_776_101_19),
        ];
        for (l, r, rp, want) in cases {
            let g = green_radial(l, r, rp, &ctx, &p).unwrap();
            assert_relative_eq!(g.value, want, max_relative = 1e-10);
        }
    }

    #[test]
    fn symmetric_in_r_and_rp() {
        let (ctx, p) = setup(2.0);
        let a = green_radial(1, 0.4, 0.8, &ctx, &p).unwrap().value;
        let b = green_radial(1, 0.8, 0.4, &ctx, &p).unwrap().value;
        assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn cross_region_rejected() {
        let (ctx, p) = setup(2.0);
        assert_eq!(
            green_radial(0, 0.5, 3.0, &ctx, &p),
            Err(Error::CrossRegionUnsupported("inner", "outer"))
        );
        assert_eq!(green_radial(0, 0.0, 0.5, &ctx, &p), Err(Error::NonPositiveRadius(0.0)));
    }

    #[test]
    fn jump_is_two_over_pi_rp() {
        let (ctx, p) = setup(2.0);
        for l in [0, 3] {
            let gf = RadialGreen::new(l, &ctx, &p).unwrap();
            for (region, rp) in [(Region::Inner, 0.6), (Region::Mid, 1.4), (Region::Outer, 2.9)] {
                let up = gf.branch(region, Side::Upper, rp, rp).unwrap();
                let lo = gf.branch(region, Side::Lower, rp, rp).unwrap();
                assert_relative_eq!(up.value, lo.value, max_relative = 1e-13);
                assert_relative_eq!(up.slope - lo.slope, 2.0 / (PI * rp), max_relative = 1e-11);
            }
        }
    }

    #[test]
    fn interfaces_match() {
        let (ctx, p) = setup(3.1);
        for l in [0, 1, 4] {
            let gf = RadialGreen::new(l, &ctx, &p).unwrap();
            for (x, lo, hi) in [(p.a(), Region::Mid, Region::Outer), (p.b(), Region::Inner, Region::Mid)] {
                for side in [Side::Lower, Side::Upper] {
                    let u = gf.branch(lo, side, x, x).unwrap();
                    let v = gf.branch(hi, side, x, x).unwrap();
                    assert_relative_eq!(u.value, v.value, max_relative = 1e-11);
                    assert_relative_eq!(u.slope, v.slope, max_relative = 1e-11);
                }
            }
        }
    }

    #[test]
    fn single_term_sum() {
        let (ctx, p) = setup(2.0);
        let s = green_polar_sum(0.5, 0.3, 0.7, 1.1, &ctx, &p, Truncation::Fixed(0)).unwrap();
        assert_eq!(s.value, green_radial(0, 0.5, 0.7, &ctx, &p).unwrap().value);
        assert_eq!(s.lmax, 0);
    }

    #[test]
    fn auto_sum_converges_off_diagonal() {
        let (ctx, p) = setup(2.0);
        let s = green_polar_sum(0.3, 0.0, 0.7, 0.5, &ctx, &p, Truncation::Auto).unwrap();
        let reference = green_polar_sum(0.3, 0.0, 0.7, 0.5, &ctx, &p, Truncation::Fixed(64)).unwrap();
        assert!(s.lmax < 64);
        assert_relative_eq!(s.value, reference.value, max_relative = 1e-9);
    }

    #[test]
    fn auto_sum_diverges_on_coincident_points() {
        let (ctx, p) = setup(2.0);
        assert!(matches!(
            green_polar_sum(0.5, 0.0, 0.5, 0.0, &ctx, &p, Truncation::Auto),
            Err(Error::NoConvergence(_)) | Err(Error::ArgumentOverflow { .. })
        ));
    }
}
