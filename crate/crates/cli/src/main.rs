//! `fig8`: evaluate, verify and report. Exit status 0 on success, 1 on a
//! numeric failure (with an error object on stdout), 2 on a usage error.

mod commands;
mod nlist;
mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use fig8_core::quadrature::ContourSpec;
use fig8_core::representations::RootChoice;
use fig8_core::{Error, PrecisionContext};
use rug::{Complex, Float};
use serde_json::json;

use commands::Env;
use nlist::NList;
use report::{Fmt, Format, Meta, Report};

#[derive(Debug, Parser)]
#[command(name = "fig8", version, about = "Figure-eight knot invariants at q = e^(xi/N)")]
struct Cli {
    /// Output precision in bits.
    #[arg(long, global = true, default_value_t = 128)]
    bits: u32,
    /// Target tolerance for the result and the contour quadrature.
    #[arg(long, global = true, default_value_t = 1e-20)]
    tol: f64,
    /// Contour opening angle; defaults to a safe angle for the given xi.
    #[arg(long, global = true, allow_hyphen_values = true)]
    theta: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Leave all timing fields empty so reports are byte-identical across runs.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RootArg {
    Plus,
    Minus,
    Matched,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Colored Jones values J_N(e^(xi/N)) by the cyclotomic sum.
    Jones {
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
        /// Comma list, `a..=b`, or `a..=b xK`.
        #[arg(long = "N")]
        n: NList,
    },
    /// kappa, phi, S, S~, T, eta, Chern-Simons value and torsion at xi.
    Invariants {
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
    },
    /// T_N(z) and its classical limits at one or more points `re,im`.
    Qdilog {
        #[arg(long)]
        xi: String,
        #[arg(long = "N")]
        n: u32,
        #[arg(long = "z", allow_hyphen_values = true, default_values_t = ["0.3,0.1".to_string()])]
        z: Vec<String>,
    },
    /// Residuals of the exact identities, each with a pass flag.
    VerifyIdentities {
        #[arg(long)]
        xi: String,
        #[arg(long = "N")]
        n: u32,
    },
    /// Ratio of the Jones value to its asymptotic predictor over a list of N.
    Converge {
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
        #[arg(long = "N")]
        n: NList,
    },
    /// The SL(2, C) representation attached to xi.
    Rep {
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
        #[arg(long, value_enum, default_value_t = RootArg::Matched)]
        root: RootArg,
    },
}

enum Failure {
    Usage(String),
    Numeric(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidContext(m) => Failure::Usage(m),
            e => Failure::Numeric(e),
        }
    }
}

fn parse_real(s: &str, bits: u32, what: &str) -> Result<Float, Failure> {
    Float::parse(s.trim())
        .map(|v| Float::with_val(bits, v))
        .map_err(|_| Failure::Usage(format!("{what}: `{s}` is not a real number")))
}

fn parse_point(s: &str, bits: u32) -> Result<Complex, Failure> {
    let (re, im) = s.split_once(',').unwrap_or((s, "0"));
    let re = parse_real(re, bits, "--z")?;
    let im = parse_real(im, bits, "--z")?;
    Ok(Complex::with_val(bits, (re, im)))
}

/// Default or user-supplied contour, validated against `xi`.
fn contour(cli: &Cli, xi: &Float) -> Result<ContourSpec, Failure> {
    let x = xi.to_f64();
    if x.is_nan() || x <= 0.0 {
        return Err(Failure::Usage("contour commands require xi > 0".into()));
    }
    let usage = |e: Error| Failure::Usage(e.to_string());
    let base = ContourSpec::default_for(x, cli.tol).map_err(usage)?;
    let spec = match cli.theta {
        Some(t) => base.with_theta(t).map_err(usage)?,
        None => base,
    };
    spec.check_for_xi(x).map_err(usage)?;
    Ok(spec)
}

fn run(cli: &Cli) -> Result<(Meta, Report), Failure> {
    let start = Instant::now();
    let ctx = PrecisionContext::new(cli.bits, cli.tol)?;
    let bits = cli.bits;
    let mut env = Env {
        ctx,
        fmt: Fmt::new(bits),
        timings: (!cli.no_timing).then(Vec::new),
    };
    let mut theta = None;
    let report = match &cli.command {
        Command::Jones { xi, n } => commands::jones(&mut env, &parse_real(xi, bits, "--xi")?, &n.0)?,
        Command::Invariants { xi } => commands::invariant_report(&mut env, &parse_real(xi, bits, "--xi")?)?,
        Command::Qdilog { xi, n, z } => {
            let xi = parse_real(xi, bits, "--xi")?;
            let spec = contour(cli, &xi)?;
            theta = Some(spec.theta);
            let zs = z.iter().map(|s| parse_point(s, bits)).collect::<Result<Vec<_>, _>>()?;
            commands::qdilog(&mut env, &xi, *n, &spec, &zs)?
        }
        Command::VerifyIdentities { xi, n } => {
            let xi = parse_real(xi, bits, "--xi")?;
            let spec = contour(cli, &xi)?;
            theta = Some(spec.theta);
            commands::verify_identities(&mut env, &xi, *n, &spec)?
        }
        Command::Converge { xi, n } => commands::converge(&mut env, &parse_real(xi, bits, "--xi")?, &n.0)?,
        Command::Rep { xi, root } => {
            let root = match root {
                RootArg::Plus => RootChoice::Plus,
                RootArg::Minus => RootChoice::Minus,
                RootArg::Matched => RootChoice::Matched,
            };
            commands::rep(&mut env, &parse_real(xi, bits, "--xi")?, root)?
        }
    };
    let meta = Meta {
        bits,
        tol: cli.tol,
        theta,
        wall_ms: (!cli.no_timing).then(|| start.elapsed().as_secs_f64() * 1e3),
        timings: env.timings.map(serde_json::Value::Array),
    };
    Ok((meta, report))
}

fn sink(cli: &Cli) -> io::Result<Box<dyn Write>> {
    Ok(match &cli.out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn emit_error(cli: &Cli, kind: &str, message: &str) {
    eprintln!("fig8: {message}");
    let doc = json!({ "error": { "kind": kind, "message": message } });
    match sink(cli) {
        Ok(mut out) => {
            let _ = writeln!(out, "{doc}");
            let _ = out.flush();
        }
        Err(_) => println!("{doc}"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|(meta, report)| {
        let mut out = sink(&cli).map_err(Failure::Io)?;
        report::write_report(&mut *out, cli.format, &meta, &report).map_err(Failure::Io)?;
        out.flush().map_err(Failure::Io)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            emit_error(&cli, "usage", &m);
            ExitCode::from(2)
        }
        Err(Failure::Numeric(e)) => {
            emit_error(&cli, e.kind(), &e.to_string());
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) => {
            emit_error(&cli, "io", &e.to_string());
            ExitCode::from(1)
        }
    }
}
