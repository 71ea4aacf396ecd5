use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_traits::ToPrimitive;
use spinstat_cli::specfile::parse_rational;
use spinstat_cli::{run, CliError, Command, Input};
use spinstat_core::{Params, Rational};

/// Spin-statistics checks for SU(2) x C x T invariant free fields.
#[derive(Parser)]
#[command(name = "spinstat", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Symmetry constraints and spectral reality.
    Check(Common),
    /// Lambda, statistics verdict, Fock and causality evidence.
    Statistics(Common),
    /// Branch points of E(p) in the complex p plane.
    BranchPoints {
        #[command(flatten)]
        common: Common,
        /// Helicity sigma (e.g. 1/2, -1); all helicities when omitted.
        #[arg(long, allow_hyphen_values = true)]
        sigma: Option<String>,
        /// Direction of the momentum ray as x,y,z.
        #[arg(long, allow_hyphen_values = true)]
        direction: Option<String>,
    },
    /// The branch point => M- => unique Lambda => spin parity chain.
    Corollary(Common),
    /// Everything above in one report.
    Report(Common),
}

#[derive(Args)]
struct Common {
    /// TOML spec file.
    spec: Option<String>,
    /// Built-in spec: klein-gordon, dirac, proca, schroedinger, bdg.
    #[arg(long)]
    catalog: Option<String>,
    /// 2j for `--catalog schroedinger`.
    #[arg(long = "two-j")]
    two_j: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    m0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
    /// Extra parameter override, `name=value`; repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
    /// Symmetry residual tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Number of sample momenta.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write the JSON report here (`-` for stdout instead of text).
    #[arg(long)]
    json: Option<String>,
}

fn rational_arg(name: &str, text: &str) -> Result<Rational, CliError> {
    parse_rational(text).map_err(|e| CliError::Usage(format!("--{name} {text}: {e}")))
}

impl Common {
    fn input(&self) -> Result<Input, CliError> {
        let mut params = Params::new();
        for (name, value) in [("m0", &self.m0), ("mu", &self.mu), ("delta", &self.delta)] {
            if let Some(v) = value {
                params.insert(name.to_string(), rational_arg(name, v)?);
            }
        }
        for kv in &self.params {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("--param {kv}: expected NAME=VALUE")))?;
            params.insert(k.trim().to_string(), rational_arg("param", v.trim())?);
        }
        Ok(Input {
            spec_path: self.spec.clone(),
            catalog: self.catalog.clone(),
            two_j: self.two_j,
            params,
            tol: self.tol,
            samples: self.samples,
            seed: self.seed,
            sigma_two: None,
            direction: None,
        })
    }
}

fn sigma_two(text: &str) -> Result<i32, CliError> {
    let twice = rational_arg("sigma", text)? * Rational::from_integer(2.into());
    if !twice.is_integer() {
        return Err(CliError::Usage(format!(
            "--sigma {text}: not a multiple of 1/2"
        )));
    }
    twice
        .to_integer()
        .to_i32()
        .ok_or_else(|| CliError::Usage(format!("--sigma {text}: out of range")))
}

fn direction(text: &str) -> Result<[f64; 3], CliError> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Usage(format!("--direction {text}: {e}")))?;
    <[f64; 3]>::try_from(parts)
        .map_err(|_| CliError::Usage(format!("--direction {text}: expected x,y,z")))
}

fn main_inner(cli: Cli) -> Result<i32, CliError> {
    let (command, common, input) = match &cli.command {
        Cmd::Check(c) => (Command::Check, c, c.input()?),
        Cmd::Statistics(c) => (Command::Statistics, c, c.input()?),
        Cmd::Corollary(c) => (Command::Corollary, c, c.input()?),
        Cmd::Report(c) => (Command::Report, c, c.input()?),
        Cmd::BranchPoints {
            common,
            sigma,
            direction: dir,
        } => {
            let mut input = common.input()?;
            input.sigma_two = sigma.as_deref().map(sigma_two).transpose()?;
            input.direction = dir.as_deref().map(direction).transpose()?;
            (Command::BranchPoints, common, input)
        }
    };
    let report = run(command, &input)?;
    match common.json.as_deref() {
        Some("-") => println!("{}", report.to_json()),
        Some(path) => {
            print!("{}", report.render_text());
            std::fs::write(path, report.to_json() + "\n").map_err(|e| CliError::Io {
                path: path.to_string(),
                message: e.to_string(),
            })?;
        }
        None => print!("{}", report.render_text()),
    }
    if let Some(e) = &report.error {
        eprintln!("spinstat: {e}");
    }
    Ok(report.exit_code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match main_inner(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("spinstat: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
