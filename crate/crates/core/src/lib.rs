//! Radial Green function of the two-dimensional Schrödinger operator for an
//! annular constant barrier V = V₀ on b ≤ r ≤ a, in closed form per partial
//! wave, with resonance scanning and an independent ODE oracle.
//!
//! ```
//! use annular_green::green::green_radial;
//! use annular_green::model::{EnergyContext, PotentialProfile, Units};
//!
//! let profile = PotentialProfile::new(1.0, 2.0, 1.0)?; // b, a, V0
//! let ctx = EnergyContext::new(2.0, &profile, Units::default())?;
//! let g = green_radial(0, 0.5, 0.7, &ctx, &profile)?;
//! assert!((g.value + 5.179_473_059_151_447).abs() < 1e-12);
//! # Ok::<(), annular_green::error::Error>(())
//! ```

pub mod bessel;
pub mod cascade;
pub mod cli;
pub mod config;
pub mod error;
pub mod green;
pub mod model;
pub mod ode;
pub mod oracle;
pub mod resonance;
pub mod validation;
