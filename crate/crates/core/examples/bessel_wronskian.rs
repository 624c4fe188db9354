//! Bessel pairs and the scaled Wronskian x(JY' − J'Y) = 2/π.
//!
//! ```bash
//! cargo run --example bessel_wronskian
//! ```

use annular_green::bessel::bessel_pair;
use std::f64::consts::FRAC_2_PI;

fn main() -> Result<(), annular_green::error::Error> {
    println!("{:>4} {:>10} {:>24} {:>24} {:>10}", "l", "x", "J", "Y", "residual");
    for l in [-3, 0, 1, 5, 20] {
        for x in [1e-3, 0.5, 10.0, 500.0] {
            let b = bessel_pair(l, x)?;
            let residual = (b.scaled_wronskian() - FRAC_2_PI).abs() / FRAC_2_PI;
            println!("{l:>4} {x:>10} {:>24.16e} {:>24.16e} {residual:>10.2e}", b.j, b.y);
        }
    }
    Ok(())
}
