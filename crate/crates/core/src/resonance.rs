//! Resonance wavenumbers as zeros of the pole discriminant
//! Δₗ(k) = Yₗ(ka)T(k) − Jₗ(ka)F(k).
//!
//! At a zero of Δₗ the closed-form cascade has β = Yₗ(ka)/Jₗ(ka) and g = γ − δ = 0.
//! T carries an overall factor Jₗ(ka), so Δₗ also vanishes wherever
//! Jₗ(ka) = 0. There β = F/T is singular and the cascade flags Jₗ(ka) and T as
//! degenerate; such zeros are reported as spurious and never as resonances.

use crate::cascade::cascade_trace;
use crate::error::{Degenerate, Error, Result};
use crate::model::{EnergyContext, PotentialProfile, Units};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonanceScanConfig {
    pub l: i32,
    pub kmin: f64,
    pub kmax: f64,
    pub samples: usize,
    /// Absolute bracket width in k at which bisection stops.
    pub refine_tol: f64,
}

impl ResonanceScanConfig {
    pub fn validate(&self, profile: &PotentialProfile, units: Units) -> Result<()> {
        let threshold = units.threshold_k(profile);
        if !(self.kmin > threshold) {
            return Err(Error::NotDiffusionRegime {
                e: units.energy_of_k(self.kmin),
                v0: profile.v0(),
            });
        }
        if !(self.kmax > self.kmin) {
            return Err(Error::DegenerateRange {
                kmin: self.kmin,
                kmax: self.kmax,
            });
        }
        if self.samples < 2 {
            return Err(Error::InvalidInput(format!(
                "samples must be >= 2, got {}",
                self.samples
            )));
        }
        if !(self.refine_tol > 0.0) {
            return Err(Error::InvalidInput(format!(
                "refine_tol must be positive, got {}",
                self.refine_tol
            )));
        }
        Ok(())
    }

    /// The i-th sample of the uniform k grid.
    pub fn k_at(&self, i: usize) -> f64 {
        if i + 1 == self.samples {
            self.kmax
        } else {
            self.kmin + (self.kmax - self.kmin) * i as f64 / (self.samples - 1) as f64
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonanceRoot {
    pub l: i32,
    pub k_star: f64,
    pub e_star: f64,
    /// |Δₗ(k★)| / (|Yₗ(ka)T| + |Jₗ(ka)F|).
    pub residual: f64,
    /// |β Jₗ(k★a) − Yₗ(k★a)| / (|β Jₗ(k★a)| + |Yₗ(k★a)|).
    pub beta_gap: f64,
    /// g = γ − δ of the closed-form cascade at k★.
    pub g_at_root: f64,
    /// |g| / (|γ| + |δ|).
    pub g_relative: f64,
}

/// Δₗ(k) together with |Yₗ(ka)T| + |Jₗ(ka)F|.
pub fn discriminant_with_scale(l: i32, k: f64, profile: &PotentialProfile, units: Units) -> Result<(f64, f64)> {
    let ctx = EnergyContext::from_k(k, profile, units)?;
    let trace = cascade_trace(l, &ctx, profile)?;
    Ok((trace.discriminant, trace.discriminant_scale))
}

pub fn pole_discriminant(l: i32, k: f64, profile: &PotentialProfile, units: Units) -> Result<f64> {
    discriminant_with_scale(l, k, profile, units).map(|(d, _)| d)
}

/// Bisect a sign-change bracket of Δₗ until it is no wider than `tol`.
/// Returns the final bracket.
pub fn refine_bracket(
    l: i32,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    profile: &PotentialProfile,
    units: Units,
) -> Result<(f64, f64)> {
    let mut f_lo = pole_discriminant(l, lo, profile, units)?;
    if f_lo == 0.0 {
        return Ok((lo, lo));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = pole_discriminant(l, mid, profile, units)?;
        if f_mid == 0.0 {
            return Ok((mid, mid));
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// Midpoint of the refined bracket.
pub fn refine_root(l: i32, lo: f64, hi: f64, tol: f64, profile: &PotentialProfile, units: Units) -> Result<f64> {
    refine_bracket(l, lo, hi, tol, profile, units).map(|(a, b)| 0.5 * (a + b))
}

/// What a refined sign change of Δₗ turned out to be.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Crossing {
    Root(ResonanceRoot),
    /// Zero of the Jₗ(ka) factor, where β = F/T has a pole.
    Spurious {
        k: f64,
    },
    /// |Δₗ| grew toward the refined point.
    Pole {
        k: f64,
    },
}

/// Refine one sign-change bracket [k0, k1] and classify it.
pub fn classify_crossing(
    l: i32,
    k0: f64,
    k1: f64,
    tol: f64,
    profile: &PotentialProfile,
    units: Units,
) -> Result<Crossing> {
    let d0 = pole_discriminant(l, k0, profile, units)?;
    let d1 = pole_discriminant(l, k1, profile, units)?;
    let (lo, hi) = refine_bracket(l, k0, k1, tol, profile, units)?;
    let k = 0.5 * (lo + hi);
    let ctx = EnergyContext::from_k(k, profile, units)?;
    let trace = cascade_trace(l, &ctx, profile)?;
    let edge = d0.abs().max(d1.abs());
    if !trace.discriminant.is_finite() || (edge > 0.0 && trace.discriminant.abs() >= edge) {
        return Ok(Crossing::Pole { k });
    }
    let ja = |kk: f64| crate::bessel::bessel_j(l, kk * profile.a());
    let (j_lo, j_hi) = (ja(lo)?, ja(hi)?);
    let factor_zero = j_lo == 0.0 || j_hi == 0.0 || (j_lo > 0.0) != (j_hi > 0.0);
    let flagged = trace
        .denominators
        .iter()
        .any(|d| matches!(d.quantity, Degenerate::JKa | Degenerate::T) && d.is_degenerate());
    if factor_zero || flagged {
        return Ok(Crossing::Spurious { k });
    }
    Ok(Crossing::Root(diagnose(l, k, profile, units)?))
}

fn diagnose(l: i32, k: f64, profile: &PotentialProfile, units: Units) -> Result<ResonanceRoot> {
    let ctx = EnergyContext::from_k(k, profile, units)?;
    let trace = cascade_trace(l, &ctx, profile)?;
    let residual = if trace.discriminant_scale == 0.0 {
        0.0
    } else {
        trace.discriminant.abs() / trace.discriminant_scale
    };
    Ok(ResonanceRoot {
        l,
        k_star: k,
        e_star: ctx.e,
        residual,
        beta_gap: trace.beta_gap(),
        g_at_root: trace.set.g,
        g_relative: trace.g_relative(),
    })
}

/// Uniform scan of Δₗ on [kmin, kmax] with bisection refinement of every
/// sign change. Only crossings classified as [`Crossing::Root`] are returned.
pub fn resonance_scan(
    config: &ResonanceScanConfig,
    profile: &PotentialProfile,
    units: Units,
) -> Result<Vec<ResonanceRoot>> {
    config.validate(profile, units)?;
    let l = config.l;
    let ks: Vec<f64> = (0..config.samples).map(|i| config.k_at(i)).collect();
    let values = ks
        .iter()
        .map(|&k| pole_discriminant(l, k, profile, units))
        .collect::<Result<Vec<_>>>()?;

    let mut roots = Vec::new();
    for i in 0..ks.len() {
        let (k0, d0) = (ks[i], values[i]);
        if d0 == 0.0 {
            if let Crossing::Root(r) = classify_crossing(l, k0, k0, config.refine_tol, profile, units)? {
                roots.push(r);
            }
            continue;
        }
        let Some(&d1) = values.get(i + 1) else { break };
        if d1 == 0.0 || (d0 > 0.0) == (d1 > 0.0) {
            continue;
        }
        if let Crossing::Root(r) = classify_crossing(l, k0, ks[i + 1], config.refine_tol, profile, units)? {
            roots.push(r);
        }
    }
    roots.sort_by(|a, b| a.k_star.total_cmp(&b.k_star));
    Ok(roots)
}

/// Δₗ(k) sampled for several orders on a shared k grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscriminantCurve {
    pub k: Vec<f64>,
    pub orders: Vec<i32>,
    /// One column per order, aligned with `k`.
    pub columns: Vec<Vec<f64>>,
}

impl DiscriminantCurve {
    /// Sign-change brackets [k_i, k_{i+1}] in column `col`.
    pub fn crossings(&self, col: usize) -> Vec<(f64, f64)> {
        let d = &self.columns[col];
        (0..d.len().saturating_sub(1))
            .filter(|&i| d[i] != 0.0 && d[i + 1] != 0.0 && (d[i] > 0.0) != (d[i + 1] > 0.0))
            .map(|i| (self.k[i], self.k[i + 1]))
            .collect()
    }
}

pub fn discriminant_curve(
    orders: &[i32],
    kmin: f64,
    kmax: f64,
    samples: usize,
    profile: &PotentialProfile,
    units: Units,
) -> Result<DiscriminantCurve> {
    let grid = ResonanceScanConfig {
        l: 0,
        kmin,
        kmax,
        samples,
        refine_tol: 1.0,
    };
    grid.validate(profile, units)?;
    let k: Vec<f64> = (0..samples).map(|i| grid.k_at(i)).collect();
    let columns = orders
        .iter()
        .map(|&l| {
            k.iter()
                .map(|&kk| pole_discriminant(l, kk, profile, units))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DiscriminantCurve {
        k,
        orders: orders.to_vec(),
        columns,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn profile() -> PotentialProfile {
        PotentialProfile::new(1.0, 2.0, 1.0).unwrap()
    }

    // mpmath transcription of the closed-form F and T at 50 digits.
    #[test]
    fn discriminant_fixture() {
        let d = pole_discriminant(0, 1.5, &profile(), Units::default()).unwrap();
        assert_relative_eq!(d, 0.255_127_245_278_849_34, max_relative = 1e-11);
    }

    #[test]
    fn empty_range_without_bracket() {
        let cfg = ResonanceScanConfig {
            l: 0,
            kmin: 2.0,
            kmax: 2.0 + 1e-9,
            samples: 2,
            refine_tol: 1e-12,
        };
        assert!(resonance_scan(&cfg, &profile(), Units::default()).unwrap().is_empty());
    }

    #[test]
    fn config_errors() {
        let mut cfg = ResonanceScanConfig {
            l: 0,
            kmin: 0.9,
            kmax: 2.0,
            samples: 10,
            refine_tol: 1e-12,
        };
        assert!(matches!(
            resonance_scan(&cfg, &profile(), Units::default()),
            Err(Error::NotDiffusionRegime { .. })
        ));
        cfg.kmin = 3.0;
        assert!(matches!(
            resonance_scan(&cfg, &profile(), Units::default()),
            Err(Error::DegenerateRange { .. })
        ));
    }

    fn scan(l: i32) -> Vec<ResonanceRoot> {
        let cfg = ResonanceScanConfig {
            l,
            kmin: 1.05,
            kmax: 8.0,
            samples: 4000,
            refine_tol: 1e-12,
        };
        resonance_scan(&cfg, &profile(), Units::default()).unwrap()
    }

    // Sign changes located independently with mpmath findroot on the same
    // discriminant; the Jₗ(2k) zeros among them are j_{l,n}/2.
    #[test]
    fn l1_roots_fixture() {
        let roots = scan(1);
        let want = [
            2.053_318_638_596_858,
            4.320_472_514_296_602,
            5.043_683_122_612_923,
            7.510_930_054_277_773,
        ];
        assert_eq!(roots.len(), want.len());
        for (r, w) in roots.iter().zip(want) {
            assert!((r.k_star - w).abs() < 1e-10, "{} vs {}", r.k_star, w);
            assert!(r.g_relative <= 1e-6);
            assert!(r.beta_gap <= 1e-6);
            assert!(r.residual <= 1e-9);
        }
    }

    #[test]
    fn l0_sign_changes_are_all_factor_zeros() {
        let p = profile();
        let u = Units::default();
        let spurious = [
            1.202_412_778_847_886,
            2.760_039_055_143_155,
            4.326_863_956_455_506,
            5.895_767_219_507_141,
            7.465_458_854_243_893,
        ];
        for k in spurious {
            let c = classify_crossing(0, k - 1e-3, k + 1e-3, 1e-12, &p, u).unwrap();
            match c {
                Crossing::Spurious { k: ks } => assert!((ks - k).abs() < 1e-10),
                other => panic!("expected spurious zero at {k}, got {other:?}"),
            }
        }
        assert!(scan(0).is_empty());
    }

    #[test]
    fn l2_single_root() {
        let roots = scan(2);
        assert_eq!(roots.len(), 1);
        assert!((roots[0].k_star - 2.574_952_486_282_868).abs() < 1e-10);
    }
}
