//! Writes the sampled pole discriminant Δₗ(k) for l = 0, 1, 2 as CSV, the
//! data behind a plot of its intersections with the k axis.
//!
//! ```bash
//! cargo run --example discriminant_curve > curve.csv
//! ```

use annular_green::cli::num;
use annular_green::model::{PotentialProfile, Units};
use annular_green::resonance::discriminant_curve;

fn main() -> Result<(), annular_green::error::Error> {
    let profile = PotentialProfile::new(1.0, 2.0, 1.0)?;
    let curve = discriminant_curve(&[0, 1, 2], 1.05, 8.0, 2000, &profile, Units::default())?;
    println!("k,delta_l0,delta_l1,delta_l2");
    for (i, k) in curve.k.iter().enumerate() {
        let row: Vec<String> = curve.columns.iter().map(|c| num(c[i])).collect();
        println!("{},{}", num(*k), row.join(","));
    }
    for (col, l) in curve.orders.iter().enumerate() {
        eprintln!("l = {l}: {} sign changes", curve.crossings(col).len());
    }
    Ok(())
}
