//! Property sweep of the radial Green function against its defining
//! conditions and the ODE oracle.

use std::f64::consts::FRAC_2_PI;

use serde::Serialize;

use crate::cascade::cascade_trace;
use crate::error::{Error, Result};
use crate::green::{RadialGreen, Side};
use crate::model::{classify_region, EnergyContext, PotentialProfile, Region};
use crate::oracle::{OracleGreen, OracleSettings};

/// Deviations below this fraction of the largest |G| in the region are
/// measured against that floor instead of the local value.
pub const DEVIATION_FLOOR: f64 = 1e-3;

/// Sample radii for a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    /// Points per region, placed at cell midpoints so none lands on an interface.
    pub per_region: usize,
    /// The outer region is sampled on (a, outer_extent·a].
    pub outer_extent: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            per_region: 10,
            outer_extent: 2.0,
        }
    }
}

impl GridSpec {
    pub fn radii(&self, profile: &PotentialProfile) -> Result<Vec<(Region, Vec<f64>)>> {
        if self.per_region < 2 {
            return Err(Error::InvalidInput(format!(
                "per_region must be >= 2, got {}",
                self.per_region
            )));
        }
        if !(self.outer_extent > 1.0) || !self.outer_extent.is_finite() {
            return Err(Error::InvalidInput(format!(
                "outer_extent must exceed 1, got {}",
                self.outer_extent
            )));
        }
        let n = self.per_region;
        let cells =
            |lo: f64, hi: f64| -> Vec<f64> { (0..n).map(|i| lo + (hi - lo) * (i as f64 + 0.5) / n as f64).collect() };
        let (b, a) = (profile.b(), profile.a());
        Ok(vec![
            (Region::Inner, cells(0.0, b)),
            (Region::Mid, cells(b, a)),
            (Region::Outer, cells(a, self.outer_extent * a)),
        ])
    }
}

/// Largest value of one check and where it occurred.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extremum {
    pub value: f64,
    pub r: f64,
    pub rp: f64,
}

impl Extremum {
    fn record(&mut self, value: f64, r: f64, rp: f64) {
        if value > self.value || value.is_nan() {
            *self = Extremum { value, r, rp };
        }
    }
}

impl Default for Extremum {
    fn default() -> Self {
        Self {
            value: 0.0,
            r: f64::NAN,
            rp: f64::NAN,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FlagSource {
    /// Matched coefficients of the Green function blocks.
    Analytic,
    /// The closed-form coefficient cascade and its discriminant.
    Cascade,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Flag {
    pub source: FlagSource,
    pub kind: String,
    pub r: Option<f64>,
    pub rp: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub l: i32,
    pub e: f64,
    pub k: f64,
    pub mu: f64,
    pub a: f64,
    pub b: f64,
    pub v0: f64,
    pub units: String,
    pub interface_value_a: Extremum,
    pub interface_value_b: Extremum,
    pub interface_slope_a: Extremum,
    pub interface_slope_b: Extremum,
    pub jump: Extremum,
    pub ode_residual: Extremum,
    pub symmetry: Extremum,
    pub parity: Extremum,
    pub oracle_deviation: Extremum,
    pub oracle_pairs: usize,
    pub delta_forms_gap: f64,
    pub flags: Vec<Flag>,
}

impl ValidationReport {
    /// Flat `key = value` text, one line per scalar.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        let num = |x: f64| format!("{x:.16e}");
        line("l", self.l.to_string());
        for (k, v) in [
            ("E", self.e),
            ("k", self.k),
            ("mu", self.mu),
            ("a", self.a),
            ("b", self.b),
            ("V0", self.v0),
        ] {
            line(k, num(v));
        }
        line("units", self.units.clone());
        for (name, x) in self.extrema() {
            line(name, num(x.value));
            line(&format!("{name}.r"), num(x.r));
            line(&format!("{name}.rp"), num(x.rp));
        }
        line("oracle_pairs", self.oracle_pairs.to_string());
        line("delta_forms_gap", num(self.delta_forms_gap));
        line("flags", self.flags.len().to_string());
        for (i, f) in self.flags.iter().enumerate() {
            let pos = |x: Option<f64>| x.map_or_else(|| "none".to_string(), num);
            let source = match f.source {
                FlagSource::Analytic => "analytic",
                FlagSource::Cascade => "cascade",
                FlagSource::Oracle => "oracle",
            };
            line(
                &format!("flag.{i}"),
                format!("{source} {} r={} rp={}", f.kind, pos(f.r), pos(f.rp)),
            );
        }
        out
    }

    pub fn extrema(&self) -> [(&'static str, Extremum); 9] {
        [
            ("interface_value_a", self.interface_value_a),
            ("interface_value_b", self.interface_value_b),
            ("interface_slope_a", self.interface_slope_a),
            ("interface_slope_b", self.interface_slope_b),
            ("jump", self.jump),
            ("ode_residual", self.ode_residual),
            ("symmetry", self.symmetry),
            ("parity", self.parity),
            ("oracle_deviation", self.oracle_deviation),
        ]
    }

    pub fn is_flagged(&self, kind: &str) -> bool {
        self.flags.iter().any(|f| f.kind == kind)
    }
}

fn rel(x: f64, y: f64) -> f64 {
    let scale = x.abs().max(y.abs());
    if scale == 0.0 {
        0.0
    } else {
        (x - y).abs() / scale
    }
}

fn flag_for(err: &Error) -> Option<String> {
    match err {
        Error::NearPole(d) => Some(format!("near_pole:{}", d.name())),
        Error::WronskianDegenerate(_) => Some("wronskian_degenerate".to_string()),
        _ => None,
    }
}

/// Relative residual of G'' + G'/r + (κ² − l²/r²)G from a five-point stencil.
pub fn ode_residual(gf: &RadialGreen, region: Region, side: Side, r: f64, rp: f64, h: f64) -> Result<f64> {
    let l = gf.order() as f64;
    let kappa = gf.context().kappa(region);
    let g = |x: f64| gf.branch(region, side, x, rp).map(|b| b.value);
    let (m2, m1, c, p1, p2) = (g(r - 2.0 * h)?, g(r - h)?, g(r)?, g(r + h)?, g(r + 2.0 * h)?);
    let d2 = (-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * h * h);
    let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
    let terms = [d2, d1 / r, kappa * kappa * c, -l * l / (r * r) * c];
    let scale: f64 = terms.iter().map(|t| t.abs()).sum();
    let sum: f64 = terms.iter().sum();
    Ok(if scale == 0.0 { 0.0 } else { sum.abs() / scale })
}

/// Sweep every defining property of G(l; ·, ·) over `grid`.
pub fn validate(l: i32, ctx: &EnergyContext, profile: &PotentialProfile, grid: &GridSpec) -> Result<ValidationReport> {
    validate_with(l, ctx, profile, grid, &OracleSettings::default())
}

pub fn validate_with(
    l: i32,
    ctx: &EnergyContext,
    profile: &PotentialProfile,
    grid: &GridSpec,
    settings: &OracleSettings,
) -> Result<ValidationReport> {
    if ctx.e <= profile.v0() {
        return Err(Error::NotDiffusionRegime {
            e: ctx.e,
            v0: profile.v0(),
        });
    }
    let regions = grid.radii(profile)?;
    let mut report = ValidationReport {
        l,
        e: ctx.e,
        k: ctx.k,
        mu: ctx.mu,
        a: profile.a(),
        b: profile.b(),
        v0: profile.v0(),
        units: ctx.units.label(),
        interface_value_a: Extremum::default(),
        interface_value_b: Extremum::default(),
        interface_slope_a: Extremum::default(),
        interface_slope_b: Extremum::default(),
        jump: Extremum::default(),
        ode_residual: Extremum::default(),
        symmetry: Extremum::default(),
        parity: Extremum::default(),
        oracle_deviation: Extremum::default(),
        oracle_pairs: 0,
        delta_forms_gap: 0.0,
        flags: Vec::new(),
    };

    let trace = cascade_trace(l, ctx, profile)?;
    report.delta_forms_gap = trace.delta_forms_gap().unwrap_or(f64::INFINITY);
    if let Some(d) = trace.first_degenerate() {
        report.flags.push(Flag {
            source: FlagSource::Cascade,
            kind: format!("near_pole:{}", d.name()),
            r: None,
            rp: None,
        });
    }

    let analytic = match (RadialGreen::new(l, ctx, profile), RadialGreen::new(-l, ctx, profile)) {
        (Ok(g), Ok(m)) => Some((g, m)),
        (Err(e), _) | (_, Err(e)) => {
            report.flags.push(Flag {
                source: FlagSource::Analytic,
                kind: flag_for(&e).ok_or(e)?,
                r: None,
                rp: None,
            });
            None
        }
    };

    let all: Vec<f64> = regions.iter().flat_map(|(_, rs)| rs.iter().copied()).collect();
    let oracle = OracleGreen::new(l, ctx, profile, &all, settings)?;

    let Some((gf, mirror)) = analytic else {
        return Ok(report);
    };

    for (x, lo, hi, value, slope) in [
        (
            profile.a(),
            Region::Mid,
            Region::Outer,
            &mut report.interface_value_a,
            &mut report.interface_slope_a,
        ),
        (
            profile.b(),
            Region::Inner,
            Region::Mid,
            &mut report.interface_value_b,
            &mut report.interface_slope_b,
        ),
    ] {
        for side in [Side::Lower, Side::Upper] {
            let u = gf.branch(lo, side, x, x)?;
            let v = gf.branch(hi, side, x, x)?;
            value.record(rel(u.value, v.value), x, x);
            slope.record(rel(u.slope, v.slope), x, x);
        }
    }

    for (region, rs) in &regions {
        let region = *region;
        debug_assert!(rs.iter().all(|&r| classify_region(r, profile) == Ok(region)));
        let (lo_edge, hi_edge) = match region {
            Region::Inner => (0.0, profile.b()),
            Region::Mid => (profile.b(), profile.a()),
            Region::Outer => (profile.a(), f64::INFINITY),
        };
        let mut values = Vec::with_capacity(rs.len() * rs.len());
        let mut largest = 0.0_f64;
        for &rp in rs {
            let below = gf.branch(region, Side::Lower, rp, rp)?;
            let above = gf.branch(region, Side::Upper, rp, rp)?;
            report
                .jump
                .record(rel(above.slope - below.slope, FRAC_2_PI / rp), rp, rp);
            for &r in rs {
                let g = gf.eval(r, rp)?.value;
                let swapped = gf.eval(rp, r)?.value;
                let minus = mirror.eval(r, rp)?.value;
                report.symmetry.record(rel(g, swapped), r, rp);
                report.parity.record(rel(g, minus), r, rp);
                largest = largest.max(g.abs());
                if r != rp {
                    let side = if r < rp { Side::Lower } else { Side::Upper };
                    let room = (r - lo_edge).min(hi_edge - r).min((r - rp).abs());
                    let h = (1e-2 * r / (1.0 + l.unsigned_abs() as f64))
                        .min(1e-2 / gf.context().kappa(region))
                        .min(room / 3.0);
                    report
                        .ode_residual
                        .record(ode_residual(&gf, region, side, r, rp, h)?, r, rp);
                }
                values.push((r, rp, g));
            }
        }
        for (r, rp, g) in values {
            match oracle.value(r, rp) {
                Ok(o) => {
                    let denom = o.abs().max(DEVIATION_FLOOR * largest);
                    let dev = if denom == 0.0 { 0.0 } else { (g - o).abs() / denom };
                    report.oracle_deviation.record(dev, r, rp);
                    report.oracle_pairs += 1;
                }
                Err(e) => report.flags.push(Flag {
                    source: FlagSource::Oracle,
                    kind: flag_for(&e).ok_or(e)?,
                    r: Some(r),
                    rp: Some(rp),
                }),
            }
        }
    }
    Ok(report)
}
