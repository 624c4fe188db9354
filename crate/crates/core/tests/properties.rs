use std::f64::consts::FRAC_2_PI;

use annular_green::bessel::{bessel_j, bessel_pair, bessel_y};
use annular_green::cascade::cascade_trace;
use annular_green::cli::num;
use annular_green::error::Error;
use annular_green::green::{RadialGreen, Side};
use annular_green::model::{EnergyContext, PotentialProfile, Region, Units};
use annular_green::oracle::{OracleGreen, OracleSettings};
use proptest::prelude::*;

/// Barrier (b, a, V0) and an energy above it.
fn setting() -> impl Strategy<Value = (PotentialProfile, EnergyContext)> {
    (0.3..1.5f64, 1.2..2.5f64, 0.2..3.0f64, 0.05..6.0f64).prop_map(|(b, width, v0, above)| {
        let p = PotentialProfile::new(b, b * width, v0).unwrap();
        let ctx = EnergyContext::new(v0 + above, &p, Units::default()).unwrap();
        (p, ctx)
    })
}

fn bounds(region: Region, p: &PotentialProfile) -> (f64, f64) {
    match region {
        Region::Inner => (0.0, p.b()),
        Region::Mid => (p.b(), p.a()),
        Region::Outer => (p.a(), 3.0 * p.a()),
    }
}

fn region() -> impl Strategy<Value = Region> {
    prop_oneof![Just(Region::Inner), Just(Region::Mid), Just(Region::Outer)]
}

/// Two radii strictly inside `region`, given as fractions of its extent.
fn place(region: Region, p: &PotentialProfile, s: f64, t: f64) -> (f64, f64) {
    let (lo, hi) = bounds(region, p);
    (lo + (hi - lo) * s, lo + (hi - lo) * t)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn scaled_wronskian(l in -30i32..=30, lx in -2.0..3.0f64) {
        let b = bessel_pair(l, 10f64.powf(lx)).unwrap();
        prop_assert!((b.scaled_wronskian() - FRAC_2_PI).abs() <= 1e-10 * FRAC_2_PI);
    }

    #[test]
    fn reflection(l in 0i32..=40, x in 0.01..200.0f64) {
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert_eq!(bessel_j(-l, x).unwrap(), sign * bessel_j(l, x).unwrap());
        prop_assert_eq!(bessel_y(-l, x).unwrap(), sign * bessel_y(l, x).unwrap());
    }

    #[test]
    fn green_symmetric_and_even_in_l(
        (p, ctx) in setting(), l in 0i32..=6, reg in region(), s in 0.02..0.98f64, t in 0.02..0.98f64,
    ) {
        let (r, rp) = place(reg, &p, s, t);
        let g = RadialGreen::new(l, &ctx, &p).unwrap();
        let m = RadialGreen::new(-l, &ctx, &p).unwrap();
        let v = g.eval(r, rp).unwrap().value;
        prop_assert_eq!(v, g.eval(rp, r).unwrap().value);
        let w = m.eval(r, rp).unwrap().value;
        prop_assert!((v - w).abs() <= 1e-12 * v.abs());
    }

    #[test]
    fn jump_at_source((p, ctx) in setting(), l in 0i32..=6, reg in region(), s in 0.02..0.98f64) {
        let (rp, _) = place(reg, &p, s, s);
        let g = RadialGreen::new(l, &ctx, &p).unwrap();
        let above = g.branch(reg, Side::Upper, rp, rp).unwrap();
        let below = g.branch(reg, Side::Lower, rp, rp).unwrap();
        prop_assert!((above.value - below.value).abs() <= 1e-12 * above.value.abs().max(below.value.abs()));
        // The jump is a difference of the two slopes, so its rounding error
        // scales with their size rather than with 2/(πr').
        let want = FRAC_2_PI / rp;
        let scale = want.max(above.slope.abs() + below.slope.abs());
        prop_assert!(((above.slope - below.slope) - want).abs() <= 1e-11 * scale);
    }

    #[test]
    fn interfaces_match((p, ctx) in setting(), l in 0i32..=6) {
        let g = RadialGreen::new(l, &ctx, &p).unwrap();
        for (x, lo, hi) in [(p.b(), Region::Inner, Region::Mid), (p.a(), Region::Mid, Region::Outer)] {
            for side in [Side::Lower, Side::Upper] {
                let u = g.branch(lo, side, x, x).unwrap();
                let v = g.branch(hi, side, x, x).unwrap();
                prop_assert!((u.value - v.value).abs() <= 1e-9 * u.value.abs().max(v.value.abs()));
                prop_assert!((u.slope - v.slope).abs() <= 1e-9 * u.slope.abs().max(v.slope.abs()));
            }
        }
    }

    #[test]
    fn cascade_quotients((p, ctx) in setting(), l in 0i32..=6) {
        let tr = cascade_trace(l, &ctx, &p).unwrap();
        prop_assume!(tr.first_degenerate().is_none());
        let c = tr.set;
        prop_assert!((c.beta * c.t - c.f).abs() <= 1e-12 * c.f.abs().max((c.beta * c.t).abs()));
        prop_assert!((c.gamma * c.u - c.v).abs() <= 1e-12 * c.v.abs().max((c.gamma * c.u).abs()));
        prop_assert!(tr.delta_forms_gap().unwrap() <= 1e-9);
    }

    #[test]
    fn decimal_round_trip(bits in any::<u64>()) {
        let x = f64::from_bits(bits);
        prop_assume!(x.is_finite());
        prop_assert_eq!(num(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn oracle_agrees(
        (p, ctx) in setting(), l in 0i32..=4, reg in region(), s in 0.05..0.95f64, t in 0.05..0.95f64,
    ) {
        let (r, rp) = place(reg, &p, s, t);
        let g = RadialGreen::new(l, &ctx, &p).unwrap().eval(r, rp).unwrap().value;
        let o = match OracleGreen::new(l, &ctx, &p, &[r, rp], &OracleSettings::default()).unwrap().value(r, rp) {
            Err(Error::WronskianDegenerate(_)) => return Ok(()),
            other => other.unwrap(),
        };
        prop_assert!((g - o).abs() <= 1e-6 * o.abs().max(1e-12), "analytic {} oracle {}", g, o);
    }
}
