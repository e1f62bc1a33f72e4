use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use ws_spectra::nu;
use ws_spectra::numerov::{self, Hamiltonian, ShootingConfig};
use ws_spectra::report::{self, fmt12, Format, Report, RunConfig, Settings};
use ws_spectra::{PekerisExpansion, PhysicalConstants};

#[derive(Parser)]
#[command(name = "ws-spectra", version, about = "Woods-Saxon bound states in D dimensions")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve the configured channels.
    Solve(Common),
    /// ⁵⁶Fe table for D = 3.
    Table1(Output),
    /// ⁵⁶Fe table for D = 4.
    Table2(Output),
    /// Write effective-potential and wavefunction curves as CSV files.
    Curves(Common),
    /// Compare closed forms with Numerov shooting.
    Oracle {
        #[command(flatten)]
        common: Common,
        /// Integrate the expanded Hamiltonian over the whole line in z.
        #[arg(long)]
        full_line: bool,
        /// Grid step in fm (default a/50).
        #[arg(long)]
        step: Option<f64>,
    },
}

#[derive(Args, Clone, Default)]
struct Output {
    /// json, csv or pretty.
    #[arg(long, value_parser = parse_format)]
    format: Option<Format>,
    /// Output file (directory for curves); stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Add the exact-Hamiltonian shooting energy and the expansion error.
    #[arg(long)]
    oracle: bool,
    /// codata, rounded, or a constants file.
    #[arg(long)]
    constants: Option<String>,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// key = value configuration file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Well depth in MeV.
    #[arg(long = "V0")]
    v0: Option<String>,
    /// Radius in fm.
    #[arg(long = "R0")]
    r0: Option<String>,
    /// Surface diffuseness in fm.
    #[arg(long = "a")]
    a: Option<String>,
    /// Reduced mass in u.
    #[arg(long = "mu")]
    mu: Option<String>,
    /// Mass number; sets V0, R0, a, mu not given explicitly.
    #[arg(long = "A")]
    mass_number: Option<String>,
    /// Dimension(s), comma separated.
    #[arg(long = "D")]
    dim: Option<String>,
    /// Orbital quantum number(s), comma separated.
    #[arg(long = "l")]
    l: Option<String>,
    /// Radial quantum number(s), comma separated.
    #[arg(long = "nr")]
    nr: Option<String>,
    /// Inclusive l range LO:HI.
    #[arg(long = "scan-l")]
    scan_l: Option<String>,
    /// Points per curve.
    #[arg(long)]
    samples: Option<String>,
    #[command(flatten)]
    output: Output,
}

fn parse_format(s: &str) -> std::result::Result<Format, String> {
    s.parse().map_err(|e: ws_spectra::Error| e.to_string())
}

const USAGE: &str = "usage: ws-spectra solve --l 1[,2,..] [--D 3] [--nr 0] [--V0 ..] [--R0 ..] [--a ..] [--mu ..] [--A 56]";

/// Failure classes mapped to exit codes.
enum Failure {
    Input(anyhow::Error),
    CrossCheck(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

impl From<ws_spectra::Error> for Failure {
    fn from(e: ws_spectra::Error) -> Self {
        Failure::Input(e.into())
    }
}

fn default_constants() -> Result<PhysicalConstants> {
    Ok(report::constants_from_env()?.unwrap_or(PhysicalConstants::CODATA_2018))
}

impl Common {
    fn settings(&self) -> Result<Settings> {
        let file = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                Settings::from_text(&text)?
            }
            None => Settings::default(),
        };
        let mut flags = Settings::default();
        let pairs = [
            ("V0", &self.v0),
            ("R0", &self.r0),
            ("a", &self.a),
            ("mu", &self.mu),
            ("A", &self.mass_number),
            ("D", &self.dim),
            ("l", &self.l),
            ("nr", &self.nr),
            ("scan-l", &self.scan_l),
            ("samples", &self.samples),
            ("constants", &self.output.constants),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                flags.set(k, v)?;
            }
        }
        flags.format = self.output.format;
        flags.out = self.output.out.clone();
        if self.output.oracle {
            flags.oracle = Some(true);
        }
        Ok(file.overridden_by(flags))
    }

    fn run_config(&self) -> Result<RunConfig> {
        self.settings()?
            .run_config(default_constants()?)
            .map_err(|e| anyhow::anyhow!("{e}\n{USAGE}"))
    }
}

fn emit_rows(cfg: &RunConfig) -> std::result::Result<(), Failure> {
    let sols = cfg.solve()?;
    let report = Report::new(cfg, &sols);
    report::emit(&report.render(cfg.format)?, cfg.out.as_deref())?;
    let failed: Vec<String> = sols
        .iter()
        .filter(|s| !s.cross_check_ok())
        .map(|s| format!("(nr={}, l={}, D={})", s.channel.nr, s.channel.l, s.channel.dim))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::CrossCheck(failed.join(", ")))
    }
}

fn table(mut cfg: RunConfig, out: &Output) -> std::result::Result<(), Failure> {
    if let Some(c) = report::constants_from_env()? {
        cfg.constants = c;
    }
    if let Some(spec) = &out.constants {
        let mut s = Settings::default();
        s.set("constants", spec)?;
        cfg.constants = s.constants.unwrap();
    }
    cfg.format = out.format.unwrap_or(Format::Pretty);
    cfg.out = out.out.clone();
    cfg.oracle = out.oracle;
    emit_rows(&cfg)
}

fn oracle(common: &Common, full_line: bool, step: Option<f64>) -> std::result::Result<(), Failure> {
    let cfg = common.run_config()?;
    let model = cfg.model();
    let mut shooting = if full_line {
        ShootingConfig::full_line(&cfg.params)
    } else {
        ShootingConfig::new(&cfg.params)
    };
    if let Some(h) = step {
        shooting = shooting.with_step(h);
    }
    let lines: Vec<String> = cfg
        .channels
        .par_iter()
        .map(|c| {
            let head = format!("{},{},{}", c.nr, c.l, c.dim);
            let Ok(px) = PekerisExpansion::build(&model, c) else {
                return format!("{head},,,,NoExtremum");
            };
            let closed = nu::nu_energy(&model, c, &px).ok();
            let shoot = |h: Hamiltonian, cfg: &ShootingConfig| numerov::shoot(h, &model, c, &px, cfg).ok().map(|o| o.energy);
            let approx = shoot(Hamiltonian::PekerisApprox, &shooting);
            let exact_cfg = ShootingConfig::new(&cfg.params).with_step(shooting.step);
            let exact = shoot(Hamiltonian::ExactEffective, &exact_cfg);
            let status = nu::classify(&model, c, &px).status;
            format!("{head},{},{},{},{status}", fmt12(closed), fmt12(approx), fmt12(exact))
        })
        .collect();
    let mut text = String::from("nr,l,D,closed_form,shoot_expanded,shoot_exact,status\n");
    for l in lines {
        text.push_str(&l);
        text.push('\n');
    }
    report::emit(&text, cfg.out.as_deref())?;
    Ok(())
}

fn run(cli: Cli) -> std::result::Result<(), Failure> {
    match cli.cmd {
        Cmd::Solve(common) => emit_rows(&common.run_config()?),
        Cmd::Table1(out) => table(RunConfig::table1(), &out),
        Cmd::Table2(out) => table(RunConfig::table2(), &out),
        Cmd::Curves(common) => {
            let cfg = common.run_config()?;
            let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("curves"));
            for path in report::write_curves(&cfg, &dir)? {
                println!("{}", path.display());
            }
            Ok(())
        }
        Cmd::Oracle { common, full_line, step } => oracle(&common, full_line, step),
    }
}

fn main() -> ExitCode {
    env_logger::init();
    // clap reports usage errors with status 2, which is reserved here for
    // cross-check failures
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::CrossCheck(which)) => {
            eprintln!("error: closed-form cross-check failed for {which}");
            ExitCode::from(2)
        }
    }
}
