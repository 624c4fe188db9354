//! Run configuration: a flat `key = value` file overlaid by command-line flags.
//!
//! ```text
//! # barrier
//! a = 2
//! b = 1
//! V0 = 1
//! l = 0,1,2
//! ```
//!
//! Every key is also a flag of the same name (`--V0 1`). Flags win over the
//! file. Unknown or repeated keys are rejected. Absent barrier keys default to
//! b = 1, a = 2, V0 = 1.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::green::Truncation;
use crate::model::{PotentialProfile, Units};
use crate::validation::GridSpec;

pub const KEYS: &[&str] = &[
    "l",
    "r",
    "rp",
    "theta",
    "thetap",
    "E",
    "V0",
    "a",
    "b",
    "mass",
    "hbar",
    "kmin",
    "kmax",
    "samples",
    "tol",
    "lmax",
    "grid",
    "outer_extent",
    "out",
    "format",
];

/// (b, a, V0) used when the barrier keys are absent.
pub const DEFAULT_PROFILE: (f64, f64, f64) = (1.0, 2.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Text,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            _ => Err(Error::InvalidInput(format!(
                "format must be csv, json or text, got `{s}`"
            ))),
        }
    }
}

/// Parse `key = value` lines. `#` starts a comment.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::InvalidInput(format!("config line {}: expected `key = value`", n + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(Error::InvalidInput(format!(
                "config line {}: unknown key `{key}`",
                n + 1
            )));
        }
        if map.insert(key.to_string(), value.to_string()).is_some() {
            return Err(Error::InvalidInput(format!(
                "config line {}: duplicate key `{key}`",
                n + 1
            )));
        }
    }
    Ok(map)
}

pub fn load_pairs(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read config {}: {e}", path.display())))?;
    parse_pairs(&text)
}

/// Typed settings shared by every subcommand; absent keys stay `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub profile: PotentialProfile,
    pub units: Units,
    pub orders: Option<Vec<i32>>,
    pub r: Option<f64>,
    pub rp: Option<f64>,
    pub theta: Option<f64>,
    pub thetap: Option<f64>,
    pub e: Option<f64>,
    pub kmin: Option<f64>,
    pub kmax: Option<f64>,
    pub samples: Option<usize>,
    pub tol: Option<f64>,
    pub lmax: Option<Truncation>,
    pub grid: GridSpec,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

fn number(key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::InvalidInput(format!("{key}: expected a finite number, got `{v}`")))
}

fn count(key: &str, v: &str) -> Result<usize> {
    v.parse::<usize>()
        .map_err(|_| Error::InvalidInput(format!("{key}: expected a non-negative integer, got `{v}`")))
}

fn orders(v: &str) -> Result<Vec<i32>> {
    let list = v
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<i32>()
                .map_err(|_| Error::InvalidInput(format!("l: expected integers separated by commas, got `{v}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    if list.is_empty() {
        return Err(Error::InvalidInput("l: empty list".into()));
    }
    Ok(list)
}

impl RunConfig {
    /// Merge `file` and `flags` (flags win) and parse every value.
    pub fn from_sources(file: BTreeMap<String, String>, flags: BTreeMap<String, String>) -> Result<Self> {
        let mut map = file;
        map.extend(flags);
        Self::from_map(&map)
    }

    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self> {
        if let Some(k) = map.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(Error::InvalidInput(format!("unknown key `{k}`")));
        }
        let get = |k: &str| map.get(k).map(String::as_str);
        let num = |k: &str| get(k).map(|v| number(k, v)).transpose();

        let profile = PotentialProfile::new(
            num("b")?.unwrap_or(DEFAULT_PROFILE.0),
            num("a")?.unwrap_or(DEFAULT_PROFILE.1),
            num("V0")?.unwrap_or(DEFAULT_PROFILE.2),
        )?;
        let defaults = Units::default();
        let units = Units::new(
            num("mass")?.unwrap_or(defaults.mass),
            num("hbar")?.unwrap_or(defaults.hbar),
        )?;
        let lmax = match get("lmax") {
            None => None,
            Some("auto") => Some(Truncation::Auto),
            Some(v) => Some(Truncation::Fixed(
                v.parse::<i32>().ok().filter(|&n| n >= 0).ok_or_else(|| {
                    Error::InvalidInput(format!("lmax: expected `auto` or a non-negative integer, got `{v}`"))
                })?,
            )),
        };
        let mut grid = GridSpec::default();
        if let Some(v) = get("grid") {
            grid.per_region = count("grid", v)?;
        }
        if let Some(v) = num("outer_extent")? {
            grid.outer_extent = v;
        }
        Ok(Self {
            profile,
            units,
            orders: get("l").map(orders).transpose()?,
            r: num("r")?,
            rp: num("rp")?,
            theta: num("theta")?,
            thetap: num("thetap")?,
            e: num("E")?,
            kmin: num("kmin")?,
            kmax: num("kmax")?,
            samples: get("samples").map(|v| count("samples", v)).transpose()?,
            tol: num("tol")?,
            lmax,
            grid,
            out: get("out").map(PathBuf::from),
            format: get("format").map(str::parse).transpose()?,
        })
    }
}

/// Unwrap an optional key or report it as missing.
pub fn required<T>(value: Option<T>, key: &str) -> Result<T> {
    value.ok_or_else(|| Error::InvalidInput(format!("missing required key `{key}`")))
}
