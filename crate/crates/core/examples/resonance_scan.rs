//! Resonance wavenumbers from the pole discriminant, with the crossings that
//! are only zeros of the Jₗ(ka) factor shown separately.
//!
//! ```bash
//! cargo run --example resonance_scan
//! ```

use annular_green::model::{PotentialProfile, Units};
use annular_green::resonance::{classify_crossing, discriminant_curve, Crossing};

fn main() -> Result<(), annular_green::error::Error> {
    let profile = PotentialProfile::new(1.0, 2.0, 1.0)?;
    let units = Units::default();
    let curve = discriminant_curve(&[0, 1, 2], 1.05, 8.0, 4000, &profile, units)?;

    for (col, &l) in curve.orders.iter().enumerate() {
        println!("l = {l}");
        for (k0, k1) in curve.crossings(col) {
            match classify_crossing(l, k0, k1, 1e-12, &profile, units)? {
                Crossing::Root(r) => println!(
                    "  resonance k* = {:.15} E* = {:.12}  g = {:+.2e}  beta gap = {:.2e}",
                    r.k_star, r.e_star, r.g_at_root, r.beta_gap
                ),
                Crossing::Spurious { k } => println!("  J_l(ka) = 0 at k = {k:.15} (not a resonance)"),
                Crossing::Pole { k } => println!("  pole at k = {k:.15}"),
            }
        }
    }
    Ok(())
}
