//! `weakmean`: evaluate means, check their properties, print the Lehmer
//! arity-bound table and run spatial-tonal filters on PGM images.
//!
//! Exit codes: 0 success (or no violation found), 1 property violated,
//! 2 usage, domain or input error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use weakmean::catalog::{parse_list, Mean, MeanParams, OwaCase};
use weakmean::filter::{
    read_pgm, write_pgm, Boundary, CenterEstimator, Dissimilarity, FilterConfig, PgmFormat,
    TonalFilter, TonalKernel,
};
use weakmean::verify::{self, lehmer_bound_table, Property, SamplerConfig};
use weakmean::{Error, Interval, ScalarFunction};

#[derive(Parser)]
#[command(name = "weakmean", version, about = "Evaluate means and check their monotonicity properties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a mean on a list of values.
    Aggregate(AggregateArgs),
    /// Search for a violation of a property by sampling.
    Check(CheckArgs),
    /// Compare the Lehmer arity bound with sampled weak monotonicity.
    Table(TableArgs),
    /// Filter a PGM image.
    Filter(FilterArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    /// One JSON object.
    Machine,
}

#[derive(Args)]
struct MeanArgs {
    /// Mean name (mean, median, lehmer, shorth, ...); an unknown name lists them all.
    mean: String,
    #[arg(long, allow_hyphen_values = true)]
    p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    q: Option<f64>,
    /// Order statistic index (1-based).
    #[arg(long)]
    k: Option<usize>,
    /// Comma-separated weight vector.
    #[arg(long)]
    weights: Option<String>,
    /// Generator function: t, t^k, ln, exp, exp:k, sqrt, a constant.
    #[arg(long)]
    g: Option<String>,
    /// Weight function, same syntax as --g.
    #[arg(long)]
    w: Option<String>,
    /// Bin width for the mode.
    #[arg(long)]
    epsilon: Option<f64>,
    /// OWA penalty weights: ls, chebyshev, lms, lts or a comma list.
    #[arg(long)]
    delta: Option<String>,
}

impl MeanArgs {
    fn resolve(&self) -> Result<Mean, Error> {
        let params = MeanParams {
            p: self.p,
            q: self.q,
            k: self.k,
            weights: self.weights.as_deref().map(parse_list).transpose()?,
            g: self.g.as_deref().map(str::parse::<ScalarFunction>).transpose()?,
            w: self.w.as_deref().map(str::parse::<ScalarFunction>).transpose()?,
            epsilon: self.epsilon,
            delta: self.delta.as_deref().map(str::parse::<OwaCase>).transpose()?,
        };
        Mean::from_name(&self.mean, &params)
    }
}

#[derive(Args)]
struct AggregateArgs {
    #[command(flatten)]
    mean: MeanArgs,
    /// Read values from a file, one number per line.
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Values, after `--`.
    #[arg(last = true, allow_hyphen_values = true)]
    values: Vec<f64>,
}

#[derive(Args)]
struct CheckArgs {
    /// monotone, weakly-monotone, shift-invariant, homogeneous, idempotent,
    /// averaging, internal or mixture-condition.
    property: String,
    #[command(flatten)]
    mean: MeanArgs,
    /// Arity for means that take any number of arguments.
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long)]
    shift_max: Option<f64>,
    #[arg(long, default_value_t = 0.2)]
    boundary_fraction: f64,
    /// Domain as `lo,hi`.
    #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
    domain: String,
    /// Grid size for the mixture condition.
    #[arg(long, default_value_t = 1001)]
    grid: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct TableArgs {
    /// Comma-separated q values.
    #[arg(long, default_value = "-2,-1,0,0.5,1,2,3,10", allow_hyphen_values = true)]
    q_list: String,
    #[arg(long, default_value_t = 9)]
    n_max: usize,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelName {
    Gaussian,
    Cauchy,
}

#[derive(Clone, Copy, ValueEnum)]
enum DissimilarityName {
    Squared,
    Huber,
}

#[derive(Clone, Copy, ValueEnum)]
enum PgmName {
    P2,
    P5,
}

#[derive(Args)]
struct FilterArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long = "out")]
    output: PathBuf,
    #[arg(long, default_value_t = 2)]
    radius: usize,
    #[arg(long, default_value_t = 1.5)]
    spatial_sigma: f64,
    #[arg(long, value_enum, default_value = "gaussian")]
    tonal_kernel: KernelName,
    #[arg(long, default_value_t = 0.1)]
    tonal_sigma: f64,
    /// center, median, shorth or mode.
    #[arg(long, default_value = "center")]
    estimator: String,
    #[arg(long, value_enum, default_value = "squared")]
    dissimilarity: DissimilarityName,
    #[arg(long, default_value_t = Dissimilarity::DEFAULT_HUBER_DELTA)]
    huber_delta: f64,
    /// clamp or mirror.
    #[arg(long, default_value = "mirror")]
    boundary: String,
    #[arg(long)]
    mode_epsilon: Option<f64>,
    /// Output encoding.
    #[arg(long, value_enum, default_value = "p5")]
    pgm: PgmName,
}

/// Twelve significant digits, trailing zeros removed.
fn fmt_value(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.11e}", v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    let trim = |s: String| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if (-5..12).contains(&exp) {
        trim(format!("{:.*}", (11 - exp).max(0) as usize, v))
    } else {
        format!("{}e{}", trim(mantissa.to_string()), exp)
    }
}

fn read_values(path: &PathBuf) -> Result<Vec<f64>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let v = line
            .parse::<f64>()
            .map_err(|_| format!("{}:{}: '{line}' is not a number", path.display(), i + 1))?;
        out.push(v);
    }
    Ok(out)
}

enum Failure {
    Violated,
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn aggregate(args: AggregateArgs) -> Result<(), Failure> {
    let mean = args.mean.resolve()?;
    let mut values = args.values;
    if let Some(path) = &args.file {
        values.extend(read_values(path).map_err(Failure::Usage)?);
    }
    if values.is_empty() {
        return Err(Failure::Usage("no values given (pass them after `--` or with --file)".into()));
    }
    let v = mean.eval(&values)?;
    match args.format {
        Format::Text => println!("{}", fmt_value(v)),
        Format::Machine => println!(
            "{}",
            serde_json::json!({ "mean": mean.label(), "n": values.len(), "value": v })
        ),
    }
    Ok(())
}

fn parse_domain(s: &str) -> Result<Interval, Error> {
    match parse_list(s)?.as_slice() {
        [lo, hi] => Interval::new(*lo, *hi),
        _ => Err(Error::InvalidConfig(format!("domain must be 'lo,hi', got '{s}'"))),
    }
}

fn check(args: CheckArgs) -> Result<(), Failure> {
    let property: Property = args.property.parse()?;
    let domain = parse_domain(&args.domain)?;
    let report = if property == Property::MixtureCondition {
        let w = args
            .mean
            .w
            .as_deref()
            .ok_or_else(|| Failure::Usage("mixture-condition needs --w".into()))?
            .parse::<ScalarFunction>()?;
        verify::check_mixture_sufficient_condition(&w, domain, args.grid)?
    } else {
        let mean = args.mean.resolve()?;
        let cfg = SamplerConfig {
            samples: args.samples,
            shift_max: args.shift_max,
            seed: args.seed,
            tol: args.tol,
            boundary_fraction: args.boundary_fraction,
            n: args.n,
        };
        verify::check(property, &mean.handle_on(args.n, domain), &cfg)?
    };
    match args.format {
        Format::Text => println!("{}", report.to_line()),
        Format::Machine => println!("{}", report.to_json()),
    }
    if report.is_violated() {
        Err(Failure::Violated)
    } else {
        Ok(())
    }
}

fn table(args: TableArgs) -> Result<(), Failure> {
    let qs = parse_list(&args.q_list)?;
    let cfg = SamplerConfig::default()
        .with_samples(args.samples)
        .with_seed(args.seed)
        .with_tol(args.tol);
    let t = lehmer_bound_table(&qs, args.n_max, &cfg)?;
    match args.format {
        Format::Text => print!("{t}"),
        Format::Machine => println!("{}", serde_json::to_string(&t).expect("table serialises")),
    }
    if t.is_coherent() {
        Ok(())
    } else {
        eprintln!("error: a cell within the bound showed a violation");
        Err(Failure::Violated)
    }
}

fn filter(args: FilterArgs) -> Result<(), Failure> {
    let tonal_kernel = match args.tonal_kernel {
        KernelName::Gaussian => TonalKernel::Gaussian(args.tonal_sigma),
        KernelName::Cauchy => TonalKernel::Cauchy(args.tonal_sigma),
    };
    let cfg = FilterConfig {
        radius: args.radius,
        spatial_sigma: args.spatial_sigma,
        tonal_kernel,
        center: args.estimator.parse::<CenterEstimator>()?,
        dissimilarity: match args.dissimilarity {
            DissimilarityName::Squared => Dissimilarity::Squared,
            DissimilarityName::Huber => Dissimilarity::Huber(args.huber_delta),
        },
        boundary: args.boundary.parse::<Boundary>()?,
        mode_epsilon: args.mode_epsilon,
    };
    let filter = TonalFilter::new(cfg.clone())?;
    let bytes = fs::read(&args.input)
        .map_err(|e| Failure::Usage(format!("{}: {e}", args.input.display())))?;
    let img = read_pgm(&bytes)
        .map_err(|e| Failure::Usage(format!("{}: {e}", args.input.display())))?;
    let out = filter.filter_image(&img)?;
    let format = match args.pgm {
        PgmName::P2 => PgmFormat::P2,
        PgmName::P5 => PgmFormat::P5,
    };
    fs::write(&args.output, write_pgm(&out, format))
        .map_err(|e| Failure::Usage(format!("{}: {e}", args.output.display())))?;
    let dissimilarity = match cfg.dissimilarity {
        Dissimilarity::Squared => "squared".to_string(),
        Dissimilarity::Huber(d) => format!("huber({d})"),
    };
    println!(
        "filtered {}x{} maxval={} radius={} spatial-sigma={} tonal-kernel={:?} estimator={} dissimilarity={} boundary={} -> {}",
        img.width(),
        img.height(),
        img.maxval(),
        cfg.radius,
        cfg.spatial_sigma,
        cfg.tonal_kernel,
        cfg.center,
        dissimilarity,
        cfg.boundary,
        args.output.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Aggregate(a) => aggregate(a),
        Command::Check(a) => check(a),
        Command::Table(a) => table(a),
        Command::Filter(a) => filter(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violated) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
