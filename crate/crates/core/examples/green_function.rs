//! Same-region values of G(l; r, r') in all three blocks, with the jump of
//! ∂G/∂r at the source point.
//!
//! ```bash
//! cargo run --example green_function
//! ```

use std::f64::consts::FRAC_2_PI;

use annular_green::green::{RadialGreen, Side};
use annular_green::model::{EnergyContext, PotentialProfile, Units};

fn main() -> Result<(), annular_green::error::Error> {
    let profile = PotentialProfile::new(1.0, 2.0, 1.0)?;
    let ctx = EnergyContext::new(2.0, &profile, Units::default())?;
    println!("E = {}, k = {:.6}, mu = {:.6}", ctx.e, ctx.k, ctx.mu);

    for l in [0, 1, 2] {
        let gf = RadialGreen::new(l, &ctx, &profile)?;
        for (r, rp) in [(0.5, 0.7), (1.2, 1.7), (2.5, 3.3)] {
            let g = gf.eval(r, rp)?;
            let above = gf.branch(g.region, Side::Upper, rp, rp)?;
            let below = gf.branch(g.region, Side::Lower, rp, rp)?;
            let jump = (above.slope - below.slope) / (FRAC_2_PI / rp);
            println!(
                "l={l} {} ({r}, {rp}) G = {:+.16e}  jump/(2/pi r') = {jump:.15}",
                g.region.block(),
                g.value
            );
        }
    }
    Ok(())
}
