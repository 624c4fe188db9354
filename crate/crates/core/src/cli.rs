//! Command-line front end.
//!
//! Exit codes: 0 success, 2 invalid input or configuration, 3 degenerate
//! numerics, 4 internal consistency failure.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::cascade::DELTA_FORMS_TOL;
use crate::config::{load_pairs, required, Format, RunConfig};
use crate::error::{Error, Result};
use crate::green::{green_polar_sum, green_radial, Truncation};
use crate::model::EnergyContext;
use crate::resonance::{discriminant_curve, resonance_scan, ResonanceScanConfig};
use crate::validation::validate;

const DEFAULT_SCAN_SAMPLES: usize = 4000;
const DEFAULT_CURVE_SAMPLES: usize = 2000;
const DEFAULT_TOL: f64 = 1e-12;

#[derive(Parser, Debug)]
#[command(
    name = "annular-green",
    version,
    about = "Radial Green function of an annular barrier"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// G(l; r, r') and its region block.
    Eval(Flags),
    /// Angular partial-wave sum G(r, θ, r', θ').
    Sum(Flags),
    /// Refined zeros of the pole discriminant.
    Resonances(Flags),
    /// Sampled pole discriminant, one column per l.
    Curve(Flags),
    /// Property and oracle sweep.
    Validate(Flags),
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// `key = value` file; flags override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Angular momentum, or a comma-separated list.
    #[arg(long, allow_hyphen_values = true)]
    l: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    r: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    rp: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    thetap: Option<String>,
    /// Energy.
    #[arg(long = "E", allow_hyphen_values = true)]
    e: Option<String>,
    /// Barrier height.
    #[arg(long = "V0", allow_hyphen_values = true)]
    v0: Option<String>,
    /// Outer barrier radius.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// Inner barrier radius.
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    mass: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    hbar: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    kmin: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    kmax: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    /// Bisection bracket width in k.
    #[arg(long)]
    tol: Option<String>,
    /// Last order of the partial-wave sum, or `auto`.
    #[arg(long)]
    lmax: Option<String>,
    /// Validation points per region.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    outer_extent: Option<String>,
    #[arg(long)]
    out: Option<String>,
    /// csv, json or text.
    #[arg(long)]
    format: Option<String>,
}

impl Flags {
    fn pairs(&self) -> BTreeMap<String, String> {
        [
            ("l", &self.l),
            ("r", &self.r),
            ("rp", &self.rp),
            ("theta", &self.theta),
            ("thetap", &self.thetap),
            ("E", &self.e),
            ("V0", &self.v0),
            ("a", &self.a),
            ("b", &self.b),
            ("mass", &self.mass),
            ("hbar", &self.hbar),
            ("kmin", &self.kmin),
            ("kmax", &self.kmax),
            ("samples", &self.samples),
            ("tol", &self.tol),
            ("lmax", &self.lmax),
            ("grid", &self.grid),
            ("outer_extent", &self.outer_extent),
            ("out", &self.out),
            ("format", &self.format),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.clone().map(|v| (k.to_string(), v)))
        .collect()
    }

    fn resolve(&self) -> Result<RunConfig> {
        let file = match &self.config {
            Some(p) => load_pairs(p)?,
            None => BTreeMap::new(),
        };
        RunConfig::from_sources(file, self.pairs())
    }
}

/// Full-precision decimal form that parses back to the same f64.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Output of one subcommand before it is written anywhere.
struct Artifact {
    format: Format,
    csv_header: Vec<String>,
    rows: Vec<Vec<String>>,
    /// Text-format blocks, separated by blank lines.
    blocks: Vec<String>,
    json: Value,
    meta: Map<String, Value>,
    out: Option<PathBuf>,
    code: i32,
}

fn meta_line(key: &str, value: &Value) -> String {
    match value {
        Value::String(s) => format!("{key} = {s}\n"),
        Value::Number(n) => match n.as_f64() {
            Some(x) if !n.is_i64() && !n.is_u64() => format!("{key} = {}\n", num(x)),
            _ => format!("{key} = {n}\n"),
        },
        other => format!("{key} = {other}\n"),
    }
}

fn meta_text(meta: &Map<String, Value>) -> String {
    meta.iter().map(|(k, v)| meta_line(k, v)).collect()
}

impl Artifact {
    fn body(&self) -> String {
        match self.format {
            Format::Csv => {
                let mut s = self.csv_header.join(",");
                s.push('\n');
                for row in &self.rows {
                    s.push_str(&row.join(","));
                    s.push('\n');
                }
                s
            }
            Format::Json => {
                let mut doc = Map::new();
                doc.insert("metadata".into(), Value::Object(self.meta.clone()));
                doc.insert("results".into(), self.json.clone());
                let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut parts = self.blocks.clone();
                parts.push(meta_text(&self.meta));
                parts.join("\n")
            }
        }
    }

    /// Write the artifact to `out` or stdout. CSV metadata goes to a `.meta`
    /// sidecar next to `out`, or to stderr when writing to stdout.
    fn emit(&self, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
        let io = |e: std::io::Error| Error::InvalidInput(format!("cannot write output: {e}"));
        let body = self.body();
        match &self.out {
            Some(path) => {
                std::fs::write(path, &body).map_err(io)?;
                if self.format == Format::Csv {
                    let mut meta = path.as_os_str().to_owned();
                    meta.push(".meta");
                    std::fs::write(PathBuf::from(meta), meta_text(&self.meta)).map_err(io)?;
                }
            }
            None => {
                stdout.write_all(body.as_bytes()).map_err(io)?;
                if self.format == Format::Csv {
                    stderr.write_all(meta_text(&self.meta).as_bytes()).map_err(io)?;
                }
            }
        }
        Ok(())
    }
}

fn header(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn base_meta(command: &str, cfg: &RunConfig) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("units".into(), json!(cfg.units.label()));
    m.insert("mass".into(), json!(cfg.units.mass));
    m.insert("hbar".into(), json!(cfg.units.hbar));
    m.insert("a".into(), json!(cfg.profile.a()));
    m.insert("b".into(), json!(cfg.profile.b()));
    m.insert("V0".into(), json!(cfg.profile.v0()));
    m
}

fn energy_meta(m: &mut Map<String, Value>, ctx: &EnergyContext) {
    m.insert("E".into(), json!(ctx.e));
    m.insert("k".into(), json!(ctx.k));
    m.insert("mu".into(), json!(ctx.mu));
}

fn eval(cfg: &RunConfig) -> Result<Artifact> {
    let orders = required(cfg.orders.clone(), "l")?;
    let (r, rp) = (required(cfg.r, "r")?, required(cfg.rp, "rp")?);
    let ctx = EnergyContext::new(required(cfg.e, "E")?, &cfg.profile, cfg.units)?;
    let mut rows = Vec::new();
    let mut blocks = Vec::new();
    let mut items = Vec::new();
    for &l in &orders {
        let g = green_radial(l, r, rp, &ctx, &cfg.profile)?;
        rows.push(vec![
            l.to_string(),
            num(r),
            num(rp),
            g.region.name().into(),
            g.region.block().into(),
            num(g.value),
        ]);
        blocks.push(format!(
            "l = {l}\nr = {}\nrp = {}\nregion = {}\nblock = {}\nvalue = {}\n",
            num(r),
            num(rp),
            g.region.name(),
            g.region.block(),
            num(g.value)
        ));
        items.push(json!({"l": l, "r": r, "rp": rp, "region": g.region, "block": g.region.block(), "value": g.value}));
    }
    let mut meta = base_meta("eval", cfg);
    energy_meta(&mut meta, &ctx);
    Ok(Artifact {
        format: cfg.format.unwrap_or(Format::Text),
        csv_header: header(&["l", "r", "rp", "region", "block", "value"]),
        rows,
        blocks,
        json: Value::Array(items),
        meta,
        out: cfg.out.clone(),
        code: 0,
    })
}

fn sum(cfg: &RunConfig) -> Result<Artifact> {
    let (r, rp) = (required(cfg.r, "r")?, required(cfg.rp, "rp")?);
    let (theta, thetap) = (cfg.theta.unwrap_or(0.0), cfg.thetap.unwrap_or(0.0));
    let ctx = EnergyContext::new(required(cfg.e, "E")?, &cfg.profile, cfg.units)?;
    let truncation = cfg.lmax.unwrap_or(Truncation::Auto);
    let s = green_polar_sum(r, theta, rp, thetap, &ctx, &cfg.profile, truncation)?;
    let mut meta = base_meta("sum", cfg);
    energy_meta(&mut meta, &ctx);
    meta.insert(
        "truncation".into(),
        json!(match truncation {
            Truncation::Auto => "auto".to_string(),
            Truncation::Fixed(n) => n.to_string(),
        }),
    );
    Ok(Artifact {
        format: cfg.format.unwrap_or(Format::Text),
        csv_header: header(&["r", "theta", "rp", "thetap", "value", "lmax"]),
        rows: vec![vec![
            num(r),
            num(theta),
            num(rp),
            num(thetap),
            num(s.value),
            s.lmax.to_string(),
        ]],
        blocks: vec![format!(
            "r = {}\ntheta = {}\nrp = {}\nthetap = {}\nvalue = {}\nlmax = {}\n",
            num(r),
            num(theta),
            num(rp),
            num(thetap),
            num(s.value),
            s.lmax
        )],
        json: json!({"r": r, "theta": theta, "rp": rp, "thetap": thetap, "value": s.value, "lmax": s.lmax}),
        meta,
        out: cfg.out.clone(),
        code: 0,
    })
}

fn scan_meta(m: &mut Map<String, Value>, kmin: f64, kmax: f64, samples: usize) {
    m.insert("kmin".into(), json!(kmin));
    m.insert("kmax".into(), json!(kmax));
    m.insert("samples".into(), json!(samples));
}

fn resonances(cfg: &RunConfig) -> Result<Artifact> {
    let orders = required(cfg.orders.clone(), "l")?;
    let (kmin, kmax) = (required(cfg.kmin, "kmin")?, required(cfg.kmax, "kmax")?);
    let samples = cfg.samples.unwrap_or(DEFAULT_SCAN_SAMPLES);
    let tol = cfg.tol.unwrap_or(DEFAULT_TOL);
    let mut roots = Vec::new();
    for &l in &orders {
        let scan = ResonanceScanConfig {
            l,
            kmin,
            kmax,
            samples,
            refine_tol: tol,
        };
        roots.extend(resonance_scan(&scan, &cfg.profile, cfg.units)?);
    }
    let rows = roots
        .iter()
        .map(|r| {
            vec![
                r.l.to_string(),
                num(r.k_star),
                num(r.e_star),
                num(r.residual),
                num(r.beta_gap),
                num(r.g_at_root),
            ]
        })
        .collect();
    let blocks = roots
        .iter()
        .map(|r| {
            format!(
                "l = {}\nk_star = {}\ne_star = {}\nresidual = {}\nbeta_gap = {}\ng_at_root = {}\n",
                r.l,
                num(r.k_star),
                num(r.e_star),
                num(r.residual),
                num(r.beta_gap),
                num(r.g_at_root)
            )
        })
        .collect();
    let mut meta = base_meta("resonances", cfg);
    scan_meta(&mut meta, kmin, kmax, samples);
    meta.insert("tol".into(), json!(tol));
    Ok(Artifact {
        format: cfg.format.unwrap_or(Format::Csv),
        csv_header: header(&["l", "k_star", "e_star", "residual", "beta_gap", "g_at_root"]),
        rows,
        blocks,
        json: serde_json::to_value(&roots).expect("serializable"),
        meta,
        out: cfg.out.clone(),
        code: 0,
    })
}

fn curve(cfg: &RunConfig) -> Result<Artifact> {
    let orders = cfg.orders.clone().unwrap_or_else(|| vec![0, 1, 2]);
    let (kmin, kmax) = (required(cfg.kmin, "kmin")?, required(cfg.kmax, "kmax")?);
    let samples = cfg.samples.unwrap_or(DEFAULT_CURVE_SAMPLES);
    let c = discriminant_curve(&orders, kmin, kmax, samples, &cfg.profile, cfg.units)?;
    let header: Vec<String> = std::iter::once("k".to_string())
        .chain(orders.iter().map(|l| format!("delta_l{l}")))
        .collect();
    let rows: Vec<Vec<String>> = (0..c.k.len())
        .map(|i| {
            std::iter::once(num(c.k[i]))
                .chain(c.columns.iter().map(|col| num(col[i])))
                .collect()
        })
        .collect();
    let blocks = rows
        .iter()
        .map(|row| header.iter().zip(row).map(|(h, v)| format!("{h} = {v}\n")).collect())
        .collect();
    let mut meta = base_meta("curve", cfg);
    scan_meta(&mut meta, kmin, kmax, samples);
    Ok(Artifact {
        format: cfg.format.unwrap_or(Format::Csv),
        csv_header: header,
        rows,
        blocks,
        json: serde_json::to_value(&c).expect("serializable"),
        meta,
        out: cfg.out.clone(),
        code: 0,
    })
}

fn validate_cmd(cfg: &RunConfig, stderr: &mut dyn Write) -> Result<Artifact> {
    let orders = cfg.orders.clone().unwrap_or_else(|| vec![0]);
    let ctx = EnergyContext::new(required(cfg.e, "E")?, &cfg.profile, cfg.units)?;
    let reports = orders
        .iter()
        .map(|&l| validate(l, &ctx, &cfg.profile, &cfg.grid))
        .collect::<Result<Vec<_>>>()?;
    let mut code = 0;
    for rep in &reports {
        if !(rep.delta_forms_gap <= DELTA_FORMS_TOL) {
            let _ = writeln!(
                stderr,
                "error: l = {}: the two closed forms of delta differ by {:e}",
                rep.l, rep.delta_forms_gap
            );
            code = 4;
        }
    }
    let mut meta = base_meta("validate", cfg);
    energy_meta(&mut meta, &ctx);
    meta.insert("grid".into(), json!(cfg.grid.per_region));
    meta.insert("outer_extent".into(), json!(cfg.grid.outer_extent));
    Ok(Artifact {
        format: cfg.format.unwrap_or(Format::Text),
        csv_header: header(&["l", "check", "value", "r", "rp"]),
        rows: reports
            .iter()
            .flat_map(|rep| {
                rep.extrema()
                    .into_iter()
                    .map(|(name, x)| vec![rep.l.to_string(), name.to_string(), num(x.value), num(x.r), num(x.rp)])
                    .chain([
                        vec![
                            rep.l.to_string(),
                            "delta_forms_gap".into(),
                            num(rep.delta_forms_gap),
                            num(f64::NAN),
                            num(f64::NAN),
                        ],
                        vec![
                            rep.l.to_string(),
                            "flags".into(),
                            rep.flags.len().to_string(),
                            num(f64::NAN),
                            num(f64::NAN),
                        ],
                    ])
            })
            .collect(),
        blocks: reports.iter().map(|r| r.to_text()).collect(),
        json: serde_json::to_value(&reports).expect("serializable"),
        meta,
        out: cfg.out.clone(),
        code,
    })
}

fn dispatch(command: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let artifact = match command {
        Command::Eval(f) => eval(&f.resolve()?)?,
        Command::Sum(f) => sum(&f.resolve()?)?,
        Command::Resonances(f) => resonances(&f.resolve()?)?,
        Command::Curve(f) => curve(&f.resolve()?)?,
        Command::Validate(f) => validate_cmd(&f.resolve()?, stderr)?,
    };
    artifact.emit(stdout, stderr)?;
    Ok(artifact.code)
}

/// Parse `args` (including the program name), run the subcommand and return
/// the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(&cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
