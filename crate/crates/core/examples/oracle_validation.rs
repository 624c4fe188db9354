//! Sweeps the defining properties of G and compares it with the ODE oracle.
//!
//! ```bash
//! cargo run --release --example oracle_validation
//! ```

use annular_green::model::{EnergyContext, PotentialProfile, Units};
use annular_green::oracle::oracle_green;
use annular_green::validation::{validate, GridSpec};

fn main() -> Result<(), annular_green::error::Error> {
    let profile = PotentialProfile::new(1.0, 2.0, 1.0)?;
    let ctx = EnergyContext::new(2.0, &profile, Units::default())?;

    let g = oracle_green(0, 0.5, 0.7, &ctx, &profile)?;
    println!("oracle G(0; 0.5, 0.7) = {g:+.16e}\n");

    for l in [0, 2] {
        let report = validate(l, &ctx, &profile, &GridSpec::default())?;
        print!("{}", report.to_text());
        println!();
    }
    Ok(())
}
