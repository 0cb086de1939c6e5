//! Command-line front end: model and utility loading, solver subcommands,
//! JSON/CSV/table emission.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use nmvm_core::concave::{self, GammaEvalConfig};
use nmvm_core::error::{Error, Result};
use nmvm_core::exp_opt;
use nmvm_core::market::NmvmModel;
use nmvm_core::oracle::{self, McReport};
use nmvm_core::utility::UtilitySpec;

#[derive(Parser)]
#[command(
    name = "nmvm",
    version,
    about = "Expected-utility portfolios under normal mean-variance mixture returns",
    after_help = "Exit codes: 0 success, 2 validation failure, 3 numeric failure, 4 usage error.\n\
        The environment variable NMVM_THREADS caps the worker thread count."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Per-asset descriptive statistics from a returns CSV.
    ///
    /// The first column is treated as a date label and skipped; every other
    /// column must be numeric. Kurtosis is the raw fourth standardized
    /// moment (a Gaussian sample reads close to 3), not excess kurtosis.
    Stats {
        /// Returns CSV with a header row.
        returns: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Expected-utility-optimal portfolio for a model and utility spec.
    Optimize {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        econ: EconArgs,
        /// closed = exponential closed form, gamma = 1-D concave search.
        /// Defaults to closed for the exponential family, gamma otherwise.
        #[arg(long, value_enum)]
        route: Option<Route>,
        /// Re-estimate the optimum's expected utility by Monte Carlo.
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        mc: McArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Skewness-adjusted and mean-variance tangent portfolios.
    Tangent {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Grid of optimal risky fractions for the SAHARA(a, b) family.
    LambdaTable {
        #[command(flatten)]
        model: ModelArgs,
        /// Initial wealth.
        #[arg(long, value_name = "R", default_value_t = 1.0)]
        w0: f64,
        /// Comma-separated risk-aversion values a (table rows).
        #[arg(long, value_name = "LIST")]
        a_list: String,
        /// Comma-separated scale values b (table columns).
        #[arg(long, value_name = "LIST")]
        b_list: String,
        /// Wealth shift of the family.
        #[arg(long, value_name = "R", default_value_t = 0.0)]
        delta: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Mean-std frontier rows plus the optimal portfolio's point.
    Frontier {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        econ: EconArgs,
        /// Route used for the marked optimal point (see optimize).
        #[arg(long, value_enum)]
        route: Option<Route>,
        /// Number of exposure grid points.
        #[arg(long, value_name = "N", default_value_t = 101)]
        points: usize,
        /// Largest risky exposure on the grid.
        #[arg(long, value_name = "R", default_value_t = 0.05)]
        c_max: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exponential-utility optimum under a no-short-sales constraint.
    ShortSales {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        econ: EconArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Monte-Carlo estimate of expected utility for given weights.
    Verify {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        econ: EconArgs,
        /// Comma-separated portfolio weights.
        #[arg(long, value_name = "LIST")]
        weights: String,
        #[command(flatten)]
        mc: McArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args)]
struct ModelArgs {
    /// Market model JSON file.
    #[arg(long, value_name = "PATH")]
    model: PathBuf,
    /// Annual risk-free rate; overrides the model file's per-period rate
    /// after dividing by --periods-per-year.
    #[arg(long, value_name = "R")]
    annual_rf: Option<f64>,
    /// Periods per year for the annual-rate proration (simple division).
    #[arg(long, value_name = "N", default_value_t = 252,
          value_parser = clap::value_parser!(u32).range(1..))]
    periods_per_year: u32,
}

#[derive(Args)]
struct EconArgs {
    /// Utility spec: inline JSON or a path to a JSON file.
    #[arg(long, value_name = "JSON|PATH")]
    utility: String,
    /// Initial wealth.
    #[arg(long, value_name = "R", default_value_t = 1.0)]
    w0: f64,
}

#[derive(Args)]
struct McArgs {
    /// Monte-Carlo sample count.
    #[arg(long, value_name = "N", default_value_t = 1_000_000)]
    mc_samples: usize,
    /// RNG seed.
    #[arg(long, value_name = "N", default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct OutArgs {
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Route {
    Closed,
    Gamma,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 4,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    init_threads()?;
    match cli.cmd {
        Cmd::Stats { returns, format, out } => cmd_stats(&returns, format, &out),
        Cmd::Optimize { model, econ, route, verify, mc, format, out } => {
            cmd_optimize(&model, &econ, route, verify, &mc, format, &out)
        }
        Cmd::Tangent { model, format, out } => cmd_tangent(&model, format, &out),
        Cmd::LambdaTable { model, w0, a_list, b_list, delta, format, out } => {
            cmd_lambda_table(&model, w0, &a_list, &b_list, delta, format, &out)
        }
        Cmd::Frontier { model, econ, route, points, c_max, format, out } => {
            cmd_frontier(&model, &econ, route, points, c_max, format, &out)
        }
        Cmd::ShortSales { model, econ, format, out } => {
            cmd_short_sales(&model, &econ, format, &out)
        }
        Cmd::Verify { model, econ, weights, mc, format, out } => {
            cmd_verify(&model, &econ, &weights, &mc, format, &out)
        }
    }
}

fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var("NMVM_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| {
            Error::InvalidParameter(format!("NMVM_THREADS must be a positive integer, got {v:?}"))
        })?;
        if n == 0 {
            return Err(Error::InvalidParameter("NMVM_THREADS must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    }
    Ok(())
}

impl ModelArgs {
    fn load(&self) -> Result<NmvmModel> {
        let text = std::fs::read_to_string(&self.model)?;
        let model: NmvmModel = serde_json::from_str(&text)?;
        match self.annual_rf {
            None => Ok(model),
            Some(annual) => {
                let r_f = annual / f64::from(self.periods_per_year);
                NmvmModel::new(
                    model.mu().to_vec(),
                    model.gamma().to_vec(),
                    model.sigma().to_vec(),
                    r_f,
                    *model.law(),
                )
            }
        }
    }
}

fn load_utility(arg: &str) -> Result<UtilitySpec> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg)?
    };
    let spec: UtilitySpec = serde_json::from_str(&text)?;
    spec.validate()?;
    Ok(spec)
}

fn usage(msg: String) -> Error {
    Error::Io(std::io::Error::other(msg))
}

fn parse_list(label: &str, s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| Error::InvalidParameter(format!("{label}: {e} in {t:?}")))
        })
        .collect()
}

fn pick_route(spec: &UtilitySpec, forced: Option<Route>) -> Result<Route> {
    let exponential = matches!(spec, UtilitySpec::Exponential { .. });
    match forced {
        Some(Route::Closed) if !exponential => Err(Error::InvalidParameter(
            "--route closed requires the exponential family".into(),
        )),
        Some(r) => Ok(r),
        None => Ok(if exponential { Route::Closed } else { Route::Gamma }),
    }
}

fn exp_risk_aversion(spec: &UtilitySpec) -> Result<f64> {
    match spec {
        UtilitySpec::Exponential { a } => Ok(*a),
        _ => Err(Error::InvalidParameter(
            "this command requires the exponential family".into(),
        )),
    }
}

fn gamma_cfg(mc: &McArgs) -> GammaEvalConfig {
    GammaEvalConfig { n_samples: mc.mc_samples, seed: mc.seed, ..GammaEvalConfig::default() }
}

// ---------------------------------------------------------------- emission

/// Compact float text shared by the csv and table formats; JSON emission
/// uses the same shortest-round-trip digits through serde.
fn fmt_f(v: f64) -> String {
    if v.is_finite() {
        match serde_json::Number::from_f64(v) {
            Some(n) => n.to_string(),
            None => v.to_string(),
        }
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn csv_quote(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn emit(out: &OutArgs, content: &str) -> Result<()> {
    match &out.out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn json_text<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn kv_csv(rows: &[(String, String)]) -> String {
    let mut s = String::from("key,value\n");
    for (k, v) in rows {
        s.push_str(&format!("{},{}\n", csv_quote(k), csv_quote(v)));
    }
    s
}

fn kv_table(rows: &[(String, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut s = String::new();
    for (k, v) in rows {
        s.push_str(&format!("{k:<width$}  {v}\n"));
    }
    s
}

fn push_vec(rows: &mut Vec<(String, String)>, name: &str, v: &[f64]) {
    for (i, x) in v.iter().enumerate() {
        rows.push((format!("{name}[{i}]"), fmt_f(*x)));
    }
}

fn emit_kv<T: Serialize>(
    format: Format,
    out: &OutArgs,
    value: &T,
    rows: Vec<(String, String)>,
) -> Result<()> {
    let content = match format {
        Format::Json => json_text(value)?,
        Format::Csv => kv_csv(&rows),
        Format::Table => kv_table(&rows),
    };
    emit(out, &content)
}

// ------------------------------------------------------------------ stats

#[derive(Serialize)]
struct StatsRow {
    asset: String,
    mean: f64,
    variance: f64,
    skewness: Option<f64>,
    kurtosis: Option<f64>,
}

#[derive(Serialize)]
struct StatsReport {
    n_obs: usize,
    rows: Vec<StatsRow>,
}

fn cmd_stats(path: &PathBuf, format: Format, out: &OutArgs) -> Result<()> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| usage(format!("returns file: {e}")))?;
    let headers = rdr.headers().map_err(|e| usage(format!("returns file: {e}")))?.clone();
    if headers.len() < 2 {
        return Err(usage(format!(
            "returns file needs a date column plus at least one numeric column, found {}",
            headers.len()
        )));
    }
    let d = headers.len() - 1;
    let assets: Vec<String> = headers.iter().skip(1).map(str::to_string).collect();

    let mut data = Vec::new();
    let mut n_obs = 0usize;
    for record in rdr.records() {
        let record = record.map_err(|e| usage(format!("returns file: {e}")))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        for field in record.iter().skip(1) {
            let v: f64 = field.parse().map_err(|_| {
                usage(format!("returns file line {line}: not a number: {field:?}"))
            })?;
            data.push(v);
        }
        n_obs += 1;
    }
    if n_obs == 0 {
        return Err(usage("returns file has no data rows".into()));
    }

    let stats = oracle::descriptive_stats(&data, d)?;
    let rows: Vec<StatsRow> = assets
        .into_iter()
        .zip(&stats)
        .map(|(asset, s)| StatsRow {
            asset,
            mean: s.mean,
            variance: s.variance,
            skewness: s.skewness,
            kurtosis: s.kurtosis,
        })
        .collect();
    let report = StatsReport { n_obs, rows };

    let opt = |o: &Option<f64>| o.map(fmt_f).unwrap_or_default();
    let content = match format {
        Format::Json => json_text(&report)?,
        Format::Csv => {
            let mut s = String::from("asset,mean,variance,skewness,kurtosis\n");
            for r in &report.rows {
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    csv_quote(&r.asset),
                    fmt_f(r.mean),
                    fmt_f(r.variance),
                    opt(&r.skewness),
                    opt(&r.kurtosis)
                ));
            }
            s
        }
        Format::Table => {
            let mut s = format!("{:<12}{:>16}{:>16}{:>12}{:>12}\n", "asset", "mean", "variance", "skew", "kurtosis");
            for r in &report.rows {
                s.push_str(&format!(
                    "{:<12}{:>16.8}{:>16.10}{:>12.4}{:>12.4}\n",
                    r.asset,
                    r.mean,
                    r.variance,
                    r.skewness.unwrap_or(f64::NAN),
                    r.kurtosis.unwrap_or(f64::NAN)
                ));
            }
            s.push_str(&format!("observations: {}\n", report.n_obs));
            s
        }
    };
    emit(out, &content)
}

// --------------------------------------------------------------- optimize

/// Canonical serialization of an exponential-route solution.
#[derive(Serialize)]
struct ExpReport {
    weights: Vec<f64>,
    q_min: f64,
    expected_utility: f64,
    active_set: Vec<usize>,
    binding: bool,
}

#[derive(Serialize)]
#[serde(untagged)]
enum SolutionReport {
    Closed(ExpReport),
    Gamma { weights: Vec<f64>, c_star: f64, expected_utility: f64 },
}

impl SolutionReport {
    fn weights(&self) -> &[f64] {
        match self {
            SolutionReport::Closed(r) => &r.weights,
            SolutionReport::Gamma { weights, .. } => weights,
        }
    }
}

#[derive(Serialize)]
struct OptimizeReport {
    route: &'static str,
    solution: SolutionReport,
    lambda_u: f64,
    risk_free_fraction: f64,
    /// Normalized risky composition; None when the net risky weight is zero
    /// or the mixing mean is infinite.
    tangent: Option<Vec<f64>>,
    certainty_equivalent: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    verification: Option<McReport>,
}

fn cmd_optimize(
    model: &ModelArgs,
    econ: &EconArgs,
    route: Option<Route>,
    verify: bool,
    mc: &McArgs,
    format: Format,
    out: &OutArgs,
) -> Result<()> {
    let m = model.load()?;
    let spec = load_utility(&econ.utility)?;
    let route = pick_route(&spec, route)?;

    let mut report = match route {
        Route::Closed => {
            let a = exp_risk_aversion(&spec)?;
            let sol = exp_opt::global_optimal(&m, a, econ.w0)?;
            let lambda: f64 = sol.weights.iter().sum();
            OptimizeReport {
                route: "closed",
                lambda_u: lambda,
                risk_free_fraction: 1.0 - lambda,
                tangent: concave::tangent_skew(&m).ok(),
                certainty_equivalent: sol.certainty_equivalent(),
                verification: None,
                solution: SolutionReport::Closed(ExpReport {
                    weights: sol.weights,
                    q_min: sol.q_min,
                    expected_utility: sol.expected_utility,
                    active_set: Vec::new(),
                    binding: false,
                }),
            }
        }
        Route::Gamma => {
            let sol = concave::optimal_portfolio(&m, spec, econ.w0, &gamma_cfg(mc))?;
            OptimizeReport {
                route: "gamma",
                lambda_u: sol.lambda_u,
                risk_free_fraction: sol.risk_free_fraction,
                tangent: sol.tangent,
                certainty_equivalent: sol.certainty_equivalent,
                verification: None,
                solution: SolutionReport::Gamma {
                    weights: sol.weights,
                    c_star: sol.c_star,
                    expected_utility: sol.expected_utility,
                },
            }
        }
    };
    if verify {
        report.verification = Some(oracle::mc_expected_utility(
            &m,
            spec,
            econ.w0,
            report.solution.weights(),
            mc.mc_samples,
            mc.seed,
        )?);
    }

    let mut rows = vec![("route".to_string(), report.route.to_string())];
    push_vec(&mut rows, "weight", report.solution.weights());
    match &report.solution {
        SolutionReport::Closed(r) => {
            rows.push(("q_min".into(), fmt_f(r.q_min)));
            rows.push(("expected_utility".into(), fmt_f(r.expected_utility)));
        }
        SolutionReport::Gamma { c_star, expected_utility, .. } => {
            rows.push(("c_star".into(), fmt_f(*c_star)));
            rows.push(("expected_utility".into(), fmt_f(*expected_utility)));
        }
    }
    rows.push(("lambda_u".into(), fmt_f(report.lambda_u)));
    rows.push(("risk_free_fraction".into(), fmt_f(report.risk_free_fraction)));
    if let Some(t) = &report.tangent {
        push_vec(&mut rows, "tangent", t);
    }
    rows.push(("certainty_equivalent".into(), fmt_f(report.certainty_equivalent)));
    if let Some(v) = &report.verification {
        rows.push(("mc_estimate".into(), fmt_f(v.estimate)));
        rows.push(("mc_std_error".into(), fmt_f(v.std_error)));
        rows.push(("mc_n".into(), v.n.to_string()));
        rows.push(("mc_seed".into(), v.seed.to_string()));
        rows.push(("mc_clipped".into(), v.clipped.to_string()));
    }
    emit_kv(format, out, &report, rows)
}

// ---------------------------------------------------------------- tangent

#[derive(Serialize)]
struct TangentReport {
    skew: Vec<f64>,
    mv: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mv_notice: Option<String>,
}

fn cmd_tangent(model: &ModelArgs, format: Format, out: &OutArgs) -> Result<()> {
    let m = model.load()?;
    let skew = concave::tangent_skew(&m)?;
    let (mv, mv_notice) = match concave::nmvm_mv_inputs(&m) {
        Ok((mean, cov)) => (Some(concave::tangent_mv(&mean, &cov, m.r_f())?), None),
        Err(Error::UnsupportedModel(msg)) => (None, Some(msg)),
        Err(e) => return Err(e),
    };
    let report = TangentReport { skew, mv, mv_notice };

    let mut rows = Vec::new();
    push_vec(&mut rows, "skew", &report.skew);
    if let Some(mv) = &report.mv {
        push_vec(&mut rows, "mv", mv);
    }
    if let Some(notice) = &report.mv_notice {
        rows.push(("mv_notice".into(), notice.clone()));
    }
    emit_kv(format, out, &report, rows)
}

// ----------------------------------------------------------- lambda-table

#[derive(Serialize)]
struct LambdaTableReport {
    a: Vec<f64>,
    b: Vec<f64>,
    delta: f64,
    w0: f64,
    lambda: Vec<Vec<f64>>,
}

fn cmd_lambda_table(
    model: &ModelArgs,
    w0: f64,
    a_list: &str,
    b_list: &str,
    delta: f64,
    format: Format,
    out: &OutArgs,
) -> Result<()> {
    let m = model.load()?;
    let a_vals = parse_list("--a-list", a_list)?;
    let b_vals = parse_list("--b-list", b_list)?;
    let cfg = GammaEvalConfig::default();

    let mut lambda = Vec::with_capacity(a_vals.len());
    for &a in &a_vals {
        let mut row = Vec::with_capacity(b_vals.len());
        for &b in &b_vals {
            let spec = UtilitySpec::Sahara { a, b, delta };
            let sol = concave::optimal_portfolio(&m, spec, w0, &cfg)?;
            row.push(sol.lambda_u);
        }
        lambda.push(row);
    }
    let report = LambdaTableReport { a: a_vals, b: b_vals, delta, w0, lambda };

    let content = match format {
        Format::Json => json_text(&report)?,
        Format::Csv => {
            let mut s = String::from("a\\b");
            for b in &report.b {
                s.push_str(&format!(",{}", fmt_f(*b)));
            }
            s.push('\n');
            for (a, row) in report.a.iter().zip(&report.lambda) {
                s.push_str(&fmt_f(*a));
                for l in row {
                    s.push_str(&format!(",{}", fmt_f(*l)));
                }
                s.push('\n');
            }
            s
        }
        Format::Table => {
            let mut s = format!("{:>8}", "a\\b");
            for b in &report.b {
                s.push_str(&format!("{b:>12.4}"));
            }
            s.push('\n');
            for (a, row) in report.a.iter().zip(&report.lambda) {
                s.push_str(&format!("{a:>8.4}"));
                for l in row {
                    s.push_str(&format!("{l:>12.6}"));
                }
                s.push('\n');
            }
            s
        }
    };
    emit(out, &content)
}

// --------------------------------------------------------------- frontier

#[derive(Serialize)]
struct OptimalPoint {
    c: f64,
    std: f64,
    mean: f64,
}

#[derive(Serialize)]
struct FrontierReport {
    rows: Vec<concave::FrontierRow>,
    optimal: Option<OptimalPoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mv_skipped: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    optimal_skipped: Option<String>,
}

/// (std, mean) of terminal wealth for a portfolio x, in wealth units.
fn wealth_point(m: &NmvmModel, w0: f64, x: &[f64]) -> Result<OptimalPoint> {
    let v = m.excess_vector()?;
    let mom = m.law().moments();
    let d = m.d();
    let c: f64 = x.iter().zip(&v).map(|(xi, vi)| xi * vi).sum();
    let xg: f64 = x.iter().zip(m.gamma()).map(|(xi, gi)| xi * gi).sum();
    let sigma = m.sigma();
    let mut xsx = 0.0;
    for i in 0..d {
        for j in 0..d {
            xsx += x[i] * sigma[i * d + j] * x[j];
        }
    }
    // 0 * inf guard: a gamma-neutral portfolio has finite variance even
    // when Var Z is infinite.
    let skew_term = if xg == 0.0 { 0.0 } else { xg * xg * mom.variance };
    let var = w0 * w0 * (skew_term + mom.mean * xsx);
    Ok(OptimalPoint { c, std: var.sqrt(), mean: w0 * (1.0 + m.r_f()) + w0 * c })
}

fn cmd_frontier(
    model: &ModelArgs,
    econ: &EconArgs,
    route: Option<Route>,
    points: usize,
    c_max: f64,
    format: Format,
    out: &OutArgs,
) -> Result<()> {
    let m = model.load()?;
    let spec = load_utility(&econ.utility)?;
    let route = pick_route(&spec, route)?;
    let table = concave::frontier(&m, econ.w0, points, c_max)?;

    let optimal_weights = match route {
        Route::Closed => {
            let a = exp_risk_aversion(&spec)?;
            exp_opt::global_optimal(&m, a, econ.w0).map(|s| s.weights)
        }
        Route::Gamma => {
            concave::optimal_portfolio(&m, spec, econ.w0, &GammaEvalConfig::default())
                .map(|s| s.weights)
        }
    };
    let (optimal, optimal_skipped) = match optimal_weights {
        Ok(x) => (Some(wealth_point(&m, econ.w0, &x)?), None),
        Err(Error::Degenerate(msg)) => (None, Some(msg)),
        Err(e) => return Err(e),
    };
    let report = FrontierReport {
        rows: table.rows,
        optimal,
        mv_skipped: table.mv_skipped,
        optimal_skipped,
    };

    let content = match format {
        Format::Json => json_text(&report)?,
        Format::Csv | Format::Table => {
            let mut s = String::from("kind,c,std,mean\n");
            for r in &report.rows {
                let kind = match r.kind {
                    concave::FrontierKind::Mv => "mv",
                    concave::FrontierKind::Skew => "skew",
                };
                s.push_str(&format!("{kind},{},{},{}\n", fmt_f(r.c), fmt_f(r.std), fmt_f(r.mean)));
            }
            if let Some(p) = &report.optimal {
                s.push_str(&format!("optimal,{},{},{}\n", fmt_f(p.c), fmt_f(p.std), fmt_f(p.mean)));
            }
            if let Some(msg) = &report.mv_skipped {
                s.push_str(&format!("mv_skipped,{},,\n", csv_quote(msg)));
            }
            if let Some(msg) = &report.optimal_skipped {
                s.push_str(&format!("optimal_skipped,{},,\n", csv_quote(msg)));
            }
            s
        }
    };
    emit(out, &content)
}

// ------------------------------------------------------------ short-sales

#[derive(Serialize)]
struct ShortSalesReport {
    solution: ExpReport,
    unconstrained_feasible: bool,
    certainty_equivalent: f64,
}

fn cmd_short_sales(model: &ModelArgs, econ: &EconArgs, format: Format, out: &OutArgs) -> Result<()> {
    let m = model.load()?;
    let spec = load_utility(&econ.utility)?;
    let a = exp_risk_aversion(&spec)?;
    let sol = exp_opt::short_sales_optimal(&m, a, econ.w0)?;
    let report = ShortSalesReport {
        unconstrained_feasible: sol.active_set.is_empty(),
        certainty_equivalent: sol.base.certainty_equivalent(),
        solution: ExpReport {
            weights: sol.base.weights,
            q_min: sol.base.q_min,
            expected_utility: sol.base.expected_utility,
            binding: !sol.active_set.is_empty(),
            active_set: sol.active_set,
        },
    };

    let mut rows = Vec::new();
    push_vec(&mut rows, "weight", &report.solution.weights);
    rows.push(("q_min".into(), fmt_f(report.solution.q_min)));
    rows.push(("expected_utility".into(), fmt_f(report.solution.expected_utility)));
    rows.push((
        "active_set".into(),
        report
            .solution
            .active_set
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(" "),
    ));
    rows.push(("binding".into(), report.solution.binding.to_string()));
    rows.push(("unconstrained_feasible".into(), report.unconstrained_feasible.to_string()));
    rows.push(("certainty_equivalent".into(), fmt_f(report.certainty_equivalent)));
    emit_kv(format, out, &report, rows)
}

// ----------------------------------------------------------------- verify

#[derive(Serialize)]
struct VerifyReport {
    report: McReport,
    /// None when the estimate sits outside the utility's range.
    certainty_equivalent: Option<f64>,
}

fn cmd_verify(
    model: &ModelArgs,
    econ: &EconArgs,
    weights: &str,
    mc: &McArgs,
    format: Format,
    out: &OutArgs,
) -> Result<()> {
    let m = model.load()?;
    let spec = load_utility(&econ.utility)?;
    let x = parse_list("--weights", weights)?;
    if x.len() != m.d() {
        return Err(Error::DimensionMismatch(format!(
            "weights: expected {} components, got {}",
            m.d(),
            x.len()
        )));
    }
    let rep = oracle::mc_expected_utility(&m, spec, econ.w0, &x, mc.mc_samples, mc.seed)?;
    let certainty_equivalent = oracle::certainty_equivalent(spec, rep.estimate).ok();
    let report = VerifyReport { report: rep, certainty_equivalent };

    let rows = vec![
        ("estimate".to_string(), fmt_f(report.report.estimate)),
        ("std_error".to_string(), fmt_f(report.report.std_error)),
        ("n".to_string(), report.report.n.to_string()),
        ("seed".to_string(), report.report.seed.to_string()),
        ("clipped".to_string(), report.report.clipped.to_string()),
        (
            "certainty_equivalent".to_string(),
            report.certainty_equivalent.map(fmt_f).unwrap_or_default(),
        ),
    ];
    emit_kv(format, out, &report, rows)
}
