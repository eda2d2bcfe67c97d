//! `kramers`: slip coefficients, special-function curves, Knudsen-layer
//! profiles and self-checks on the command line.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kramers_core::neumann::build_series;
use kramers_core::special::{dispersion_l, t_n};
use kramers_core::transport::{self, chapman_enskog};
use kramers_core::{GasParameters, QuadratureSpec};
use serde::Serialize;
use thiserror::Error;

use kramers_cli::output::{round6, sig6, Csv, Range};
use kramers_cli::verify;

#[derive(Parser)]
#[command(name = "kramers", version, about = "Isothermal slip of a moderately dense gas")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Slip velocity, slip coefficient and the per-order coefficients U_n.
    Slip(SlipArgs),
    /// Dispersion function L(k) and moments T_1..T_3 over a k-range.
    Curves(CurvesArgs),
    /// Velocity profile U(x1) and optionally h(x1, mu).
    Profile(ProfileArgs),
    /// Identity suites, oracle cross-checks and reference constants.
    Verify(VerifyArgs),
}

#[derive(Args, Clone, Copy)]
struct Numerics {
    /// Relative quadrature tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Spectral cutoff beyond which tails are modelled.
    #[arg(long, default_value_t = 200.0)]
    kmax: f64,
}

impl Numerics {
    fn spec(&self) -> Result<QuadratureSpec, CliError> {
        let spec = QuadratureSpec::default().with_rel_tol(self.tol).with_k_max(self.kmax);
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Args, Clone, Copy)]
struct Model {
    /// Diffusion (accommodation) coefficient, 0 < q <= 1.
    #[arg(long, default_value_t = 1.0)]
    q: f64,
    /// Density parameter, 0 <= gamma < 1.
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
    /// Neumann-series order.
    #[arg(long, default_value_t = 2)]
    order: usize,
    /// Dimensionless far-field velocity gradient G_v.
    #[arg(long, default_value_t = 1.0)]
    gv: f64,
    #[command(flatten)]
    numerics: Numerics,
}

#[derive(Args)]
struct Sink {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct SlipArgs {
    #[command(flatten)]
    model: Model,
    #[command(flatten)]
    sink: Sink,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Curve {
    Dispersion,
    Tn,
    All,
}

#[derive(Args)]
struct CurvesArgs {
    #[arg(long, value_enum, default_value_t = Curve::All)]
    what: Curve,
    /// Wavenumbers as start:stop:step.
    #[arg(long, default_value = "0:10:0.1")]
    k: Range,
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
    #[command(flatten)]
    numerics: Numerics,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ProfileArgs {
    #[command(flatten)]
    model: Model,
    /// Distances from the wall as start:stop:step.
    #[arg(long, default_value = "0:20:0.5")]
    x: Range,
    /// Direction cosines for h(x1, mu): a comma list, or `grid` for the
    /// standard 33-node grid on [-4, 4].
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    #[command(flatten)]
    sink: Sink,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run only these groups.
    #[arg(long, value_enum, value_delimiter = ',')]
    only: Vec<verify::Group>,
    #[command(flatten)]
    numerics: Numerics,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] kramers_core::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot encode JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Core(_) => 2,
            CliError::Io(_) | CliError::Json(_) => 1,
        }
    }
}

#[derive(Serialize)]
struct Meta {
    gamma: f64,
    q: f64,
    order: usize,
    g_v: f64,
    rel_tol: f64,
    abs_tol: f64,
    k_max: f64,
    version: &'static str,
}

impl Meta {
    fn new(m: &Model, spec: &QuadratureSpec) -> Self {
        Meta {
            gamma: m.gamma,
            q: m.q,
            order: m.order,
            g_v: m.gv,
            rel_tol: spec.rel_tol,
            abs_tol: spec.abs_tol,
            k_max: spec.k_max,
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Serialize)]
struct Document<T: Serialize> {
    meta: Meta,
    data: T,
}

fn json<T: Serialize>(meta: Meta, data: T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(&Document { meta, data })?;
    s.push('\n');
    Ok(s)
}

fn emit(text: &str, path: Option<&PathBuf>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn gas(m: &Model) -> Result<GasParameters, CliError> {
    if m.gv == 0.0 {
        return Err(CliError::Usage("--gv must be non-zero".into()));
    }
    Ok(GasParameters::new(m.gamma, m.q, m.gv)?)
}

fn slip(args: &SlipArgs) -> Result<(), CliError> {
    let m = &args.model;
    let params = gas(m)?;
    let spec = m.numerics.spec()?;
    let series = build_series(m.gamma, m.order, &spec)?;
    let u_sl = transport::slip_velocity(&params, &series)? / m.gv;
    let kv = transport::slip_coefficient_kv(&params, &series)?;
    let mut rows = vec![("U_sl/G_v".to_string(), u_sl), ("K_v".to_string(), kv)];
    rows.extend(
        series
            .u_coeffs()
            .iter()
            .enumerate()
            .map(|(n, &u)| (format!("U_{n}"), u)),
    );
    let text = match args.sink.format {
        Format::Csv => {
            let mut csv = Csv::new(&["quantity", "value"]);
            for (name, v) in rows {
                csv.line([name, sig6(v)]);
            }
            csv.finish()
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Data {
                u_sl_over_g_v: f64,
                k_v: f64,
                u_coeffs: Vec<f64>,
            }
            let data = Data {
                u_sl_over_g_v: round6(u_sl),
                k_v: round6(kv),
                u_coeffs: series.u_coeffs().iter().map(|&u| round6(u)).collect(),
            };
            json(Meta::new(m, &spec), data)?
        }
    };
    emit(&text, args.sink.output.as_ref())
}

fn curves(args: &CurvesArgs) -> Result<(), CliError> {
    let spec = args.numerics.spec()?;
    GasParameters::new(args.gamma, 1.0, 1.0)?;
    let (disp, tn) = match args.what {
        Curve::Dispersion => (true, false),
        Curve::Tn => (false, true),
        Curve::All => (true, true),
    };
    let mut header = vec!["k"];
    if disp {
        header.push("L");
    }
    if tn {
        header.extend(["T1", "T2", "T3"]);
    }
    let mut csv = Csv::new(&header);
    for k in args.k.samples() {
        let mut row = vec![k];
        if disp {
            row.push(dispersion_l(k, args.gamma, &spec)?);
        }
        if tn {
            for n in 1..=3 {
                row.push(t_n(n, k, &spec)?);
            }
        }
        csv.row(&row);
    }
    emit(&csv.finish(), args.output.as_ref())
}

fn parse_mu(s: &str) -> Result<Vec<f64>, CliError> {
    if s.trim() == "grid" {
        return Ok(transport::mu_grid());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Usage(format!("invalid value '{t}' in --mu list")))
        })
        .collect()
}

fn profile(args: &ProfileArgs) -> Result<(), CliError> {
    let m = &args.model;
    let params = gas(m)?;
    let mus = args.mu.as_deref().map(parse_mu).transpose()?.unwrap_or_default();
    let spec = m.numerics.spec()?;
    let series = build_series(m.gamma, m.order, &spec)?;
    let xs = args.x.samples();
    let prof = transport::velocity_profile(&params, &series, &xs, &spec)?;
    let mut h = Vec::with_capacity(xs.len());
    for &x in &xs {
        let row = mus
            .iter()
            .map(|&mu| {
                let hc = transport::distribution_continuum(&params, &series, x, mu, &spec)?;
                Ok(chapman_enskog(&params, prof.u_sl, x, mu) + hc)
            })
            .collect::<Result<Vec<f64>, CliError>>()?;
        h.push(row);
    }

    let text = match args.sink.format {
        Format::Csv => {
            let mut header = vec!["x1".to_string(), "U".to_string(), "U_c".to_string()];
            header.extend(mus.iter().map(|&mu| format!("h(mu={})", sig6(mu))));
            let mut csv = Csv::new(&header);
            for i in 0..xs.len() {
                let mut row = vec![xs[i], prof.u_total[i], prof.u_continuum[i]];
                row.extend(&h[i]);
                csv.row(&row);
            }
            csv.finish()
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                x1: f64,
                u_total: f64,
                u_continuum: f64,
                #[serde(skip_serializing_if = "Vec::is_empty")]
                h: Vec<f64>,
            }
            #[derive(Serialize)]
            struct Data {
                u_sl: f64,
                #[serde(skip_serializing_if = "Vec::is_empty")]
                mu: Vec<f64>,
                rows: Vec<Row>,
            }
            let rows = (0..xs.len())
                .map(|i| Row {
                    x1: round6(xs[i]),
                    u_total: round6(prof.u_total[i]),
                    u_continuum: round6(prof.u_continuum[i]),
                    h: h[i].iter().map(|&v| round6(v)).collect(),
                })
                .collect();
            let data = Data {
                u_sl: round6(prof.u_sl),
                mu: mus.iter().map(|&v| round6(v)).collect(),
                rows,
            };
            json(Meta::new(m, &spec), data)?
        }
    };
    emit(&text, args.sink.output.as_ref())
}

fn run_verify(args: &VerifyArgs) -> Result<bool, CliError> {
    let spec = args.numerics.spec()?;
    let checks = verify::run(&args.only, &spec)?;
    print!("{}", verify::report(&checks));
    Ok(checks.iter().all(verify::Check::passed))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Slip(a) => slip(a).map(|_| true),
        Command::Curves(a) => curves(a).map(|_| true),
        Command::Profile(a) => profile(a).map(|_| true),
        Command::Verify(a) => run_verify(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
