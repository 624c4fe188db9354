//! Problem data: barrier geometry, energy, and the radial regions.

use crate::error::{Error, Result};
use serde::Serialize;

/// Annular barrier: V = V₀ for b ≤ r ≤ a, zero elsewhere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialProfile {
    b: f64,
    a: f64,
    v0: f64,
}

impl PotentialProfile {
    pub fn new(b: f64, a: f64, v0: f64) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::InvalidProfile(format!("inner radius b = {b} must be positive")));
        }
        if !(a > b && a.is_finite()) {
            return Err(Error::InvalidProfile(format!(
                "outer radius a = {a} must exceed b = {b}"
            )));
        }
        if !(v0 > 0.0 && v0.is_finite()) {
            return Err(Error::InvalidProfile(format!(
                "barrier height V0 = {v0} must be positive"
            )));
        }
        Ok(Self { b, a, v0 })
    }

    /// Inner radius.
    pub fn b(&self) -> f64 {
        self.b
    }

    /// Outer radius.
    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn v0(&self) -> f64 {
        self.v0
    }

    pub fn potential(&self, r: f64) -> f64 {
        if (self.b..=self.a).contains(&r) {
            self.v0
        } else {
            0.0
        }
    }
}

/// Mass and ħ. The default is the reduced system 2M = ħ = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Units {
    pub mass: f64,
    pub hbar: f64,
}

impl Default for Units {
    fn default() -> Self {
        Self { mass: 0.5, hbar: 1.0 }
    }
}

impl Units {
    pub fn new(mass: f64, hbar: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) || !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "mass ({mass}) and hbar ({hbar}) must be positive"
            )));
        }
        Ok(Self { mass, hbar })
    }

    pub fn is_reduced(&self) -> bool {
        *self == Self::default()
    }

    /// 2M/ħ², the factor converting an energy into a squared wavenumber.
    pub fn energy_to_k2(&self) -> f64 {
        2.0 * self.mass / (self.hbar * self.hbar)
    }

    /// Human-readable tag emitted as output metadata.
    pub fn label(&self) -> String {
        if self.is_reduced() {
            "reduced (2M=hbar=1)".to_string()
        } else {
            format!("custom (M={:?}, hbar={:?})", self.mass, self.hbar)
        }
    }

    /// Lowest wavenumber still in the diffusion regime, √(2MV₀)/ħ.
    pub fn threshold_k(&self, profile: &PotentialProfile) -> f64 {
        (self.energy_to_k2() * profile.v0()).sqrt()
    }

    pub fn energy_of_k(&self, k: f64) -> f64 {
        k * k / self.energy_to_k2()
    }
}

/// Energy E together with the derived wavenumbers k (outside the barrier)
/// and μ (inside it).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyContext {
    pub e: f64,
    pub units: Units,
    pub k: f64,
    pub mu: f64,
}

impl EnergyContext {
    pub fn new(e: f64, profile: &PotentialProfile, units: Units) -> Result<Self> {
        wavenumbers(e, profile, units)
    }

    /// Context for a given outer wavenumber k, as used by k-axis scans.
    pub fn from_k(k: f64, profile: &PotentialProfile, units: Units) -> Result<Self> {
        let e = units.energy_of_k(k);
        let mut ctx = wavenumbers(e, profile, units)?;
        let threshold = units.threshold_k(profile);
        ctx.k = k;
        ctx.mu = ((k - threshold) * (k + threshold)).sqrt();
        Ok(ctx)
    }

    pub fn mass(&self) -> f64 {
        self.units.mass
    }

    pub fn hbar(&self) -> f64 {
        self.units.hbar
    }

    /// Local wavenumber in `region`.
    pub fn kappa(&self, region: Region) -> f64 {
        match region {
            Region::Mid => self.mu,
            Region::Inner | Region::Outer => self.k,
        }
    }
}

/// k = √(2ME)/ħ and μ = √(2M(E − V₀))/ħ.
pub fn wavenumbers(e: f64, profile: &PotentialProfile, units: Units) -> Result<EnergyContext> {
    if !e.is_finite() || e <= profile.v0() {
        return Err(Error::NotDiffusionRegime { e, v0: profile.v0() });
    }
    let s = units.energy_to_k2();
    Ok(EnergyContext {
        e,
        units,
        k: (s * e).sqrt(),
        mu: (s * (e - profile.v0())).sqrt(),
    })
}

/// Radial region. The interfaces r = b and r = a belong to `Mid`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    Inner,
    Mid,
    Outer,
}

impl Region {
    pub fn name(self) -> &'static str {
        match self {
            Region::Inner => "inner",
            Region::Mid => "mid",
            Region::Outer => "outer",
        }
    }

    /// Block label: G¹¹, G²², G³³.
    pub fn block(self) -> &'static str {
        match self {
            Region::Inner => "G11",
            Region::Mid => "G22",
            Region::Outer => "G33",
        }
    }
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

pub fn classify_region(r: f64, profile: &PotentialProfile) -> Result<Region> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::NonPositiveRadius(r));
    }
    Ok(if r < profile.b() {
        Region::Inner
    } else if r <= profile.a() {
        Region::Mid
    } else {
        Region::Outer
    })
}
