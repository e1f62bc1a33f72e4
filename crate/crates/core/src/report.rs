//! Run configuration, presets and serialization of result rows and curves.
//!
//! Configuration files are flat `key = value` text with `#` comments. The
//! keys mirror the command-line flags: `V0`, `R0`, `a`, `mu`, `A`, `D`, `l`,
//! `nr`, `scan-l`, `oracle`, `format`, `out`, `samples`, `constants`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{invalid, Error, Result};
use crate::numerov::Hamiltonian;
use crate::potential::{ChannelSpec, Model, PotentialParams};
use crate::solution::{solve_channel_with, ChannelSolution, SolveOptions};
use crate::wavefunction::Coordinate;

fn bad(key: &str, reason: impl std::fmt::Display) -> Error {
    Error::Config(format!("{key}: {reason}"))
}

pub const NEUTRON_MASS_U: f64 = 1.00866;

/// Env var naming a constants override file.
pub const CONSTANTS_ENV: &str = "WS_SPECTRA_CONSTANTS";

/// Woods-Saxon parameters for a neutron on a core of mass number `a`:
/// V₀ = 40.5 + 0.13A MeV, R₀ = 1.285A^{1/3} fm, a = 0.65 fm.
pub fn mass_defaults(a: u32) -> Result<PotentialParams> {
    if a == 0 {
        return Err(invalid("A", "mass number must be at least 1"));
    }
    let m = a as f64;
    PotentialParams::new(
        40.5 + 0.13 * m,
        1.285 * m.cbrt(),
        0.65,
        m * NEUTRON_MASS_U / (m + NEUTRON_MASS_U),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "pretty" | "pretty-table" | "table" => Ok(Format::Pretty),
            other => Err(invalid("format", format!("expected json, csv or pretty, got `{other}`"))),
        }
    }
}

/// Partially specified settings, as read from a file or from flags.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub v0: Option<f64>,
    pub r0: Option<f64>,
    pub a: Option<f64>,
    pub mu: Option<f64>,
    pub mass_number: Option<u32>,
    pub dims: Option<Vec<u32>>,
    pub ls: Option<Vec<u32>>,
    pub nrs: Option<Vec<u32>>,
    pub scan_l: Option<(u32, u32)>,
    pub oracle: Option<bool>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub samples: Option<usize>,
    pub constants: Option<PhysicalConstants>,
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| bad(key, format!("cannot parse `{v}`")))
}

fn parse_list(key: &str, v: &str) -> Result<Vec<u32>> {
    v.split(',').map(|s| parse_num(key, s)).collect()
}

/// `LO:HI`, inclusive.
pub fn parse_range(key: &str, v: &str) -> Result<(u32, u32)> {
    let (lo, hi) = v
        .split_once(':')
        .ok_or_else(|| bad(key, format!("expected LO:HI, got `{v}`")))?;
    let (lo, hi) = (parse_num(key, lo)?, parse_num(key, hi)?);
    if lo > hi {
        return Err(bad(key, format!("empty range {lo}:{hi}")));
    }
    Ok((lo, hi))
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v.trim() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        other => Err(bad(key, format!("expected a boolean, got `{other}`"))),
    }
}

/// `key = value` lines; blank lines and `#` comments are skipped. Later
/// duplicates win.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value, got `{raw}`", i + 1)))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

/// Constants from `preset = codata|rounded` or explicit `hbar_c`, `amu_c2`.
pub fn parse_constants(text: &str) -> Result<PhysicalConstants> {
    let map = parse_key_values(text)?;
    let mut c = match map.get("preset").map(String::as_str) {
        None | Some("codata") => PhysicalConstants::CODATA_2018,
        Some("rounded") => PhysicalConstants::rounded_si(),
        Some(other) => return Err(invalid("preset", format!("unknown preset `{other}`"))),
    };
    for (k, v) in &map {
        match k.as_str() {
            "preset" => {}
            "hbar_c" => c.hbar_c = parse_num(k, v)?,
            "amu_c2" => c.amu_c2 = parse_num(k, v)?,
            _ => return Err(bad(k, "unknown constants key")),
        }
    }
    PhysicalConstants::new(c.hbar_c, c.amu_c2)
}

fn preset_constants(v: &str) -> Result<PhysicalConstants> {
    match v {
        "codata" => Ok(PhysicalConstants::CODATA_2018),
        "rounded" => Ok(PhysicalConstants::rounded_si()),
        path => parse_constants(&std::fs::read_to_string(path).map_err(|e| invalid("constants", e.to_string()))?),
    }
}

impl Settings {
    pub fn from_text(text: &str) -> Result<Self> {
        let mut s = Self::default();
        for (k, v) in parse_key_values(text)? {
            s.set(&k, &v)?;
        }
        Ok(s)
    }

    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "V0" => self.v0 = Some(parse_num(key, v)?),
            "R0" => self.r0 = Some(parse_num(key, v)?),
            "a" => self.a = Some(parse_num(key, v)?),
            "mu" => self.mu = Some(parse_num(key, v)?),
            "A" => self.mass_number = Some(parse_num(key, v)?),
            "D" => self.dims = Some(parse_list(key, v)?),
            "l" => self.ls = Some(parse_list(key, v)?),
            "nr" => self.nrs = Some(parse_list(key, v)?),
            "scan-l" => self.scan_l = Some(parse_range(key, v)?),
            "oracle" => self.oracle = Some(parse_bool(key, v)?),
            "format" => self.format = Some(v.parse()?),
            "out" => self.out = Some(PathBuf::from(v)),
            "samples" => self.samples = Some(parse_num(key, v)?),
            "constants" => self.constants = Some(preset_constants(v)?),
            _ => return Err(bad(key, "unknown configuration key")),
        }
        Ok(())
    }

    /// Fields set in `over` replace those in `self`.
    pub fn overridden_by(self, over: Settings) -> Settings {
        Settings {
            v0: over.v0.or(self.v0),
            r0: over.r0.or(self.r0),
            a: over.a.or(self.a),
            mu: over.mu.or(self.mu),
            mass_number: over.mass_number.or(self.mass_number),
            dims: over.dims.or(self.dims),
            ls: over.ls.or(self.ls),
            nrs: over.nrs.or(self.nrs),
            scan_l: over.scan_l.or(self.scan_l),
            oracle: over.oracle.or(self.oracle),
            format: over.format.or(self.format),
            out: over.out.or(self.out),
            samples: over.samples.or(self.samples),
            constants: over.constants.or(self.constants),
        }
    }

    /// Explicit V₀, R₀, a, μ override the mass-number defaults (A = 56 when
    /// no A is given).
    pub fn params(&self) -> Result<PotentialParams> {
        let base = mass_defaults(self.mass_number.unwrap_or(56))?;
        PotentialParams::new(
            self.v0.unwrap_or(base.v0),
            self.r0.unwrap_or(base.r0),
            self.a.unwrap_or(base.a),
            self.mu.unwrap_or(base.mu),
        )
    }

    /// Channels sorted by (D, l, n_r); empty when no l is given.
    pub fn channels(&self) -> Result<Vec<ChannelSpec>> {
        let ls: Vec<u32> = match (&self.ls, self.scan_l) {
            (_, Some((lo, hi))) => (lo..=hi).collect(),
            (Some(ls), None) => ls.clone(),
            (None, None) => Vec::new(),
        };
        let dims = self.dims.clone().unwrap_or_else(|| vec![3]);
        let nrs = self.nrs.clone().unwrap_or_else(|| vec![0]);
        let mut out = Vec::new();
        for &d in &dims {
            for &l in &ls {
                for &nr in &nrs {
                    out.push(ChannelSpec::new(nr, l, d)?);
                }
            }
        }
        out.sort_by_key(|c| (c.dim, c.l, c.nr));
        out.dedup();
        Ok(out)
    }

    pub fn run_config(&self, default_constants: PhysicalConstants) -> Result<RunConfig> {
        let channels = self.channels()?;
        if channels.is_empty() {
            return Err(Error::Config("no channels: give l (or scan-l)".into()));
        }
        Ok(RunConfig {
            params: self.params()?,
            constants: self.constants.unwrap_or(default_constants),
            channels,
            format: self.format.unwrap_or(Format::Pretty),
            oracle: self.oracle.unwrap_or(false),
            out: self.out.clone(),
            samples: self.samples.unwrap_or(201),
        })
    }
}

/// Constants named by the override env var, if set.
pub fn constants_from_env() -> Result<Option<PhysicalConstants>> {
    match std::env::var_os(CONSTANTS_ENV) {
        None => Ok(None),
        Some(path) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| invalid(CONSTANTS_ENV, format!("{}: {e}", Path::new(&path).display())))?;
            parse_constants(&text).map(Some)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: PotentialParams,
    pub constants: PhysicalConstants,
    pub channels: Vec<ChannelSpec>,
    pub format: Format,
    pub oracle: bool,
    pub out: Option<PathBuf>,
    pub samples: usize,
}

impl RunConfig {
    fn preset(d: u32, rows: &[(u32, u32)]) -> Self {
        Self {
            params: PotentialParams::fe56(),
            constants: PhysicalConstants::rounded_si(),
            channels: rows.iter().map(|&(nr, l)| ChannelSpec::new(nr, l, d).unwrap()).collect(),
            format: Format::Pretty,
            oracle: false,
            out: None,
            samples: 201,
        }
    }

    /// ⁵⁶Fe, D = 3: n_r ∈ {0, 1} for l = 1..4 and n_r = 0 for l = 5..7.
    pub fn table1() -> Self {
        let mut rows: Vec<(u32, u32)> = (1..=4).flat_map(|l| [(0, l), (1, l)]).collect();
        rows.extend((5..=7).map(|l| (0, l)));
        Self::preset(3, &rows)
    }

    /// ⁵⁶Fe, D = 4: n_r ∈ {0, 1} for l = 0..4 and n_r = 0 for l = 5, 6.
    pub fn table2() -> Self {
        let mut rows: Vec<(u32, u32)> = (0..=4).flat_map(|l| [(0, l), (1, l)]).collect();
        rows.extend((5..=6).map(|l| (0, l)));
        Self::preset(4, &rows)
    }

    pub fn model(&self) -> Model {
        Model::new(self.params, self.constants)
    }

    /// Solve every channel in parallel; rows keep the order of `channels`.
    pub fn solve(&self) -> Result<Vec<ChannelSolution>> {
        let model = self.model();
        let opts = SolveOptions {
            oracle: self.oracle.then_some(Hamiltonian::ExactEffective),
            shooting: None,
        };
        self.channels
            .par_iter()
            .map(|c| solve_channel_with(&model, c, &opts))
            .collect()
    }
}

/// Round to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap()
}

/// Shortest decimal text of `round12(x)`; empty for `None`.
pub fn fmt12(x: Option<f64>) -> String {
    x.map(|v| format!("{}", round12(v))).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub nr: u32,
    pub l: u32,
    #[serde(rename = "D")]
    pub dim: u32,
    pub r_l: Option<f64>,
    pub veff_min: Option<f64>,
    pub energy: Option<f64>,
    pub status: String,
    pub norm: Option<f64>,
    pub epsilon: Option<f64>,
    pub eta: Option<f64>,
    pub oracle_energy: Option<f64>,
    pub pekeris_error: Option<f64>,
}

pub const COLUMNS: [&str; 12] = [
    "nr", "l", "D", "r_l", "veff_min", "energy", "status", "norm", "epsilon", "eta", "oracle_energy", "pekeris_error",
];

impl TableRow {
    /// Numeric fields are rounded to 12 significant digits.
    pub fn from_solution(s: &ChannelSolution) -> Self {
        let r = |x: Option<f64>| x.map(round12);
        let wf = s.wavefunction.as_ref();
        let oracle = s.oracle.map(|o| o.energy);
        Self {
            nr: s.channel.nr,
            l: s.channel.l,
            dim: s.channel.dim,
            r_l: r(s.r_l()),
            veff_min: r(s.veff_min()),
            energy: r(s.energy),
            status: s.status.to_string(),
            norm: r(wf.map(|w| w.norm_const_flat)),
            epsilon: r(wf.map(|w| w.epsilon)),
            eta: r(wf.map(|w| w.eta)),
            oracle_energy: r(oracle),
            pekeris_error: r(s.energy.zip(oracle).map(|(e, o)| e - o)),
        }
    }

    fn cells(&self) -> [String; 12] {
        [
            self.nr.to_string(),
            self.l.to_string(),
            self.dim.to_string(),
            fmt12(self.r_l),
            fmt12(self.veff_min),
            fmt12(self.energy),
            self.status.clone(),
            fmt12(self.norm),
            fmt12(self.epsilon),
            fmt12(self.eta),
            fmt12(self.oracle_energy),
            fmt12(self.pekeris_error),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub params: PotentialParams,
    pub constants: PhysicalConstants,
    pub rows: Vec<TableRow>,
}

impl Report {
    pub fn new(cfg: &RunConfig, sols: &[ChannelSolution]) -> Self {
        Self {
            params: cfg.params,
            constants: cfg.constants,
            rows: sols.iter().map(TableRow::from_solution).collect(),
        }
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidRange(e.to_string());
        w.write_record(COLUMNS).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.cells()).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidRange(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_pretty(&self) -> String {
        let cells: Vec<[String; 12]> = self.rows.iter().map(TableRow::cells).collect();
        let widths: Vec<usize> = (0..12)
            .map(|j| cells.iter().map(|r| r[j].len()).chain([COLUMNS[j].len()]).max().unwrap())
            .collect();
        let mut out = String::new();
        let line = |out: &mut String, items: &[&str]| {
            let parts: Vec<String> = items.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect();
            writeln!(out, "{}", parts.join("  ").trim_end()).unwrap();
        };
        line(&mut out, &COLUMNS);
        for r in &cells {
            line(&mut out, &r.iter().map(String::as_str).collect::<Vec<_>>());
        }
        out
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(self.to_json()),
            Format::Csv => self.to_csv(),
            Format::Pretty => Ok(self.to_pretty()),
        }
    }

    pub fn from_csv(text: &str) -> Result<Vec<TableRow>> {
        let mut rd = csv::Reader::from_reader(text.as_bytes());
        rd.deserialize()
            .map(|r| r.map_err(|e| Error::InvalidRange(e.to_string())))
            .collect()
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    let fail = |e: std::io::Error| invalid("out", format!("{}: {e}", path.display()));
    let mut f = std::fs::File::create(path).map_err(fail)?;
    f.write_all(text.as_bytes()).map_err(fail)
}

/// Header plus rows of 12-digit values.
pub fn curve_csv(header: [&str; 2], samples: &[(f64, f64)]) -> String {
    let mut s = format!("{},{}\n", header[0], header[1]);
    for &(x, y) in samples {
        writeln!(s, "{},{}", round12(x), round12(y)).unwrap();
    }
    s
}

/// Effective-potential curves and n_r = 0 wavefunctions for every l of the
/// configuration, written to `dir`. Returns the paths in write order.
pub fn write_curves(cfg: &RunConfig, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| invalid("out", format!("{}: {e}", dir.display())))?;
    let model = cfg.model();
    let p = cfg.params;
    let mut seen = Vec::new();
    let mut written = Vec::new();
    for c in &cfg.channels {
        let c = c.with_nr(0);
        if seen.contains(&c) {
            continue;
        }
        seen.push(c);
        let (d, l) = (c.dim, c.l);
        let veff = model.potential_curve(&c, 0.05 * p.a, p.r0 + 15.0 * p.a, cfg.samples)?;
        let path = dir.join(format!("veff_D{d}_l{l}.csv"));
        write_file(&path, &curve_csv(["r_fm", "veff_mev"], &veff))?;
        written.push(path);
        let sol = solve_channel_with(&model, &c, &SolveOptions::default())?;
        if let Some(wf) = sol.wavefunction {
            let curve = wf.sample_curve(cfg.samples, Coordinate::Z, &p)?;
            let samples: Vec<(f64, f64)> = curve
                .samples
                .iter()
                .map(|&(z, _)| (z, wf.evaluate_flat(z)))
                .collect();
            let path = dir.join(format!("wavefunction_D{d}_l{l}.csv"));
            write_file(&path, &curve_csv(["z", "u"], &samples))?;
            written.push(path);
        }
    }
    Ok(written)
}

/// Write `text` to `out`, or stdout when `None`.
pub fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => write_file(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| invalid("stdout", e.to_string()))
        }
    }
}
