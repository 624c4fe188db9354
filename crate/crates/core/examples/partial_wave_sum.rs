//! Angular partial-wave sum with fixed and automatic truncation.
//!
//! ```bash
//! cargo run --example partial_wave_sum
//! ```

use annular_green::green::{green_polar_sum, Truncation};
use annular_green::model::{EnergyContext, PotentialProfile, Units};

fn main() -> Result<(), annular_green::error::Error> {
    let profile = PotentialProfile::new(1.0, 2.0, 1.0)?;
    let ctx = EnergyContext::new(2.0, &profile, Units::default())?;
    let (r, rp) = (0.3, 0.7);

    for phi in [0.0, 0.5, 1.5, std::f64::consts::PI] {
        let auto = green_polar_sum(r, phi, rp, 0.0, &ctx, &profile, Truncation::Auto)?;
        print!("phi = {phi:.4}  auto: {:+.16e} (lmax {:>2})", auto.value, auto.lmax);
        for lmax in [2, 8, 32] {
            let s = green_polar_sum(r, phi, rp, 0.0, &ctx, &profile, Truncation::Fixed(lmax))?;
            print!("  L={lmax}: {:+.6e}", s.value);
        }
        println!();
    }
    Ok(())
}
