//! Command-line surface for custodians.
//!
//! Release commands (`ad-verify`, `am-verify`) append to the ledger before the
//! report is written. Simulation commands (`ad-mselect`, `am-contour`) and
//! `invert` only read published quantities and never touch the ledger.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::ad::{
    build_fixed_region, build_inflated_region, compute_indicator_count, gibbs_posterior,
    release_count, robustness_contour_with, suggested_delta, ADConfig, ContourInputs, RegionSpec,
    ToleranceRegion,
};
use crate::am::{
    average_overlap_with, credible_interval, invert_credible_interval, null_assumption_lengths,
    posterior_nu, reference_contour, release_overlap, AMConfig, InversionAssumption,
};
use crate::dp::{budget_status, BudgetLedger, PrivacyParams, RngStream};
use crate::error::{Error, Result};
use crate::model::{fit_ols, ConfidenceInterval, Dataset, DegeneratePolicy, ModelSpec, Schema};
use crate::partition::make_partition;
use crate::prior::BetaPrior;
use crate::report::{
    contour_csv, robustness_csv, write_json, AdDebug, AdRelease, AmDebug, AmRelease, Inversion,
    ReleaseReport,
};

#[derive(Debug, Parser)]
#[command(
    name = "dprep",
    version,
    about = "Differentially private replication checks for regression coefficients"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a model on the full confidential table (custodian-only output).
    Fit(FitArgs),
    /// Verify a published coefficient against confidential data.
    AdVerify(AdVerifyArgs),
    /// Robustness statistic over (gamma, M) from published quantities only.
    AdMselect(AdMselectArgs),
    /// Compare two model specifications by confidence-interval overlap.
    AmVerify(AmVerifyArgs),
    /// Chebyshev error bound for candidate M values.
    AmMselect(AmMselectArgs),
    /// Reference contour of mean overlap over (difference, sd ratio).
    AmContour(AmContourArgs),
    /// Invert a credible interval for the average overlap into |beta - gamma|.
    Invert(InvertArgs),
    /// Spent and remaining privacy budget of a ledger file.
    BudgetStatus(BudgetArgs),
    /// Recompute a release report's summaries from its own contents.
    Summarize(SummarizeArgs),
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Delimited table with a header row.
    #[arg(long)]
    pub input: PathBuf,
    /// Column kinds, one `name:numeric|categorical` per line.
    #[arg(long)]
    pub schema: Option<PathBuf>,
    #[arg(long, default_value = ",")]
    pub delimiter: char,
}

#[derive(Debug, Args)]
pub struct ReleaseArgs {
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long = "M")]
    pub subsets: usize,
    #[arg(long, default_value = "1,1")]
    pub prior: BetaPrior,
    /// Seeds the partition and posterior sampling; echoed in the report.
    #[arg(long, env = "DPREP_SEED")]
    pub seed: u64,
    /// Seeds the Laplace noise. Never written to any report; drawn from the
    /// operating system when absent.
    #[arg(long, env = "DPREP_NOISE_SEED", hide_env_values = true)]
    pub noise_seed: Option<u64>,
    #[arg(long)]
    pub ledger: PathBuf,
    #[arg(long)]
    pub budget_cap: Option<f64>,
    /// Release report (JSON).
    #[arg(long)]
    pub out: PathBuf,
    /// Also write per-subset statistics. They must not leave the custodian.
    #[arg(long)]
    pub unsafe_debug: bool,
    /// Where the debug report goes; defaults to `<out>.debug.json`.
    #[arg(long, requires = "unsafe_debug")]
    pub debug_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub model: String,
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PublishedArgs {
    /// Published estimate of the coefficient.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma_hat: Option<f64>,
    /// Published standard error of the estimate.
    #[arg(long)]
    pub sigma_hat: Option<f64>,
    /// Sample size of the original study.
    #[arg(long)]
    pub n0: Option<usize>,
}

#[derive(Debug, Args)]
pub struct AdVerifyArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub model: String,
    #[arg(long)]
    pub coef: String,
    /// `lo:hi` (empty side = unbounded) or `inflate:alpha`.
    #[arg(long, allow_hyphen_values = true)]
    pub region: RegionSpec,
    #[command(flatten)]
    pub published: PublishedArgs,
    /// Defaults to 0.5 for fixed regions and 0.9 delta* for inflated ones.
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long, default_value_t = crate::ad::DEFAULT_BURN_IN)]
    pub burn_in: usize,
    #[arg(long, default_value_t = crate::ad::DEFAULT_KEEP)]
    pub keep: usize,
    #[command(flatten)]
    pub release: ReleaseArgs,
}

#[derive(Debug, Args)]
pub struct AdMselectArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub region: RegionSpec,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma_hat: Option<f64>,
    #[arg(long)]
    pub sigma_hat: f64,
    #[arg(long)]
    pub n0: usize,
    /// Rows of the confidential table.
    #[arg(long = "N")]
    pub n_total: usize,
    #[arg(long)]
    pub epsilon: f64,
    /// `a,b,c` or `lo:hi:count`.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma_grid: String,
    #[arg(long = "M-grid", default_value = "5:90:18")]
    pub m_grid: String,
    #[arg(long = "K", default_value_t = crate::ad::contour::DEFAULT_REPLICATIONS)]
    pub replications: usize,
    #[arg(long, env = "DPREP_SEED")]
    pub seed: u64,
    /// CSV output.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AmVerifyArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub model: String,
    #[arg(long)]
    pub model_alt: String,
    #[arg(long)]
    pub coef: String,
    #[arg(long, default_value_t = crate::am::DEFAULT_LEVEL)]
    pub level: f64,
    #[arg(long, default_value_t = crate::am::DEFAULT_GRID_POINTS)]
    pub grid_points: usize,
    #[arg(long, default_value_t = crate::am::DEFAULT_DRAWS)]
    pub draws: usize,
    /// Credible mass of the interval that gets inverted.
    #[arg(long, default_value_t = 0.9)]
    pub mass: f64,
    /// Map zero-width subset intervals to points instead of failing.
    #[arg(long)]
    pub point_intervals: bool,
    /// Invert the credible interval under the null assumption (needs
    /// --sigma-hat and --n0) or explicit --lengths.
    #[arg(long)]
    pub invert: bool,
    #[arg(long)]
    pub sigma_hat: Option<f64>,
    #[arg(long)]
    pub n0: Option<usize>,
    /// `l1,l2` interval lengths for the inversion.
    #[arg(long)]
    pub lengths: Option<String>,
    #[command(flatten)]
    pub release: ReleaseArgs,
}

#[derive(Debug, Args)]
pub struct AmMselectArgs {
    #[arg(long = "M-grid", default_value = "10,25,50,100")]
    pub m_grid: String,
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.2)]
    pub omega: f64,
    #[arg(long, default_value_t = crate::am::WORST_CASE_VARIANCE)]
    pub variance_cap: f64,
}

#[derive(Debug, Args)]
pub struct AmContourArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub gamma_hat: f64,
    /// Subset-scale standard error of the coefficient.
    #[arg(long)]
    pub sigma_hat: f64,
    #[arg(long, default_value_t = crate::am::contour::DEFAULT_CORR, allow_hyphen_values = true)]
    pub corr: f64,
    #[arg(long, default_value = "0:1.5:16")]
    pub diff_grid: String,
    #[arg(long, default_value = "0.5:2:16")]
    pub ratio_grid: String,
    #[arg(long = "K", default_value_t = crate::am::contour::DEFAULT_REPLICATIONS)]
    pub replications: usize,
    #[arg(long, env = "DPREP_SEED")]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct InvertArgs {
    /// `lo,hi` credible interval for the average overlap.
    #[arg(long)]
    pub nu_ci: String,
    #[arg(long, default_value_t = 0.9)]
    pub mass: f64,
    #[arg(long)]
    pub sigma_hat: Option<f64>,
    #[arg(long)]
    pub n0: Option<usize>,
    /// Subset size; or give --N and --M.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long = "N")]
    pub n_total: Option<usize>,
    #[arg(long = "M")]
    pub subsets: Option<usize>,
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
    #[arg(long)]
    pub lengths: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    #[arg(long)]
    pub ledger: PathBuf,
    #[arg(long)]
    pub budget_cap: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SummarizeArgs {
    #[arg(long)]
    pub report: PathBuf,
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Fit(a) => cmd_fit(a),
        Command::AdVerify(a) => cmd_ad_verify(a),
        Command::AdMselect(a) => cmd_ad_mselect(a),
        Command::AmVerify(a) => cmd_am_verify(a),
        Command::AmMselect(a) => cmd_am_mselect(a),
        Command::AmContour(a) => cmd_am_contour(a),
        Command::Invert(a) => cmd_invert(a),
        Command::BudgetStatus(a) => cmd_budget_status(a),
        Command::Summarize(a) => cmd_summarize(a),
    }
}

fn load(data: &DataArgs) -> Result<Dataset> {
    let schema = match &data.schema {
        Some(p) => Schema::from_path(p)?,
        None => Schema::new(),
    };
    let delimiter = u8::try_from(data.delimiter).map_err(|_| {
        Error::arg(format!(
            "delimiter `{}` is not a single byte",
            data.delimiter
        ))
    })?;
    Dataset::read_path(&data.input, &schema, delimiter)
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    use std::io::Write;
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Format(e.to_string()))?;
    text.push('\n');
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::io("<stdout>", e)),
        _ => Ok(()),
    }
}

fn emit_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    match out {
        Some(p) => write_json(p, value),
        None => print_json(value),
    }
}

fn absolute(p: &Path) -> PathBuf {
    std::path::absolute(p).unwrap_or_else(|_| p.to_path_buf())
}

/// Release and debug paths, checked to be distinct.
fn output_paths(r: &ReleaseArgs) -> Result<(PathBuf, Option<PathBuf>)> {
    if !r.unsafe_debug {
        return Ok((r.out.clone(), None));
    }
    let debug = r.debug_out.clone().unwrap_or_else(|| {
        let mut s = r.out.as_os_str().to_owned();
        s.push(".debug.json");
        PathBuf::from(s)
    });
    if absolute(&debug) == absolute(&r.out) {
        return Err(Error::arg("--debug-out must differ from --out"));
    }
    Ok((r.out.clone(), Some(debug)))
}

fn noise_stream(r: &ReleaseArgs, purpose: &str) -> RngStream {
    let seed = r.noise_seed.unwrap_or_else(rand::random);
    RngStream::root(seed).derive(purpose, 0)
}

fn open_ledger(r: &ReleaseArgs) -> Result<BudgetLedger> {
    let ledger = BudgetLedger::open(&r.ledger, r.budget_cap)?;
    // fail before any data is touched if the budget is already gone
    ledger.check(r.epsilon)?;
    Ok(ledger)
}

#[derive(Serialize)]
struct FitSummary {
    model: String,
    n: usize,
    residual_df: u64,
    sigma2_hat: f64,
    terms: Vec<FitTerm>,
}

#[derive(Serialize)]
struct FitTerm {
    term: String,
    estimate: f64,
    stderr: f64,
    interval: ConfidenceInterval,
}

fn cmd_fit(a: FitArgs) -> Result<()> {
    let data = load(&a.data)?;
    let spec = ModelSpec::from_formula(&a.model, &data)?;
    let fit = fit_ols(&data, &spec)?;
    let terms = spec
        .labels()
        .into_iter()
        .enumerate()
        .map(|(j, term)| {
            Ok(FitTerm {
                term,
                estimate: fit.coefficients[j],
                stderr: fit.stderrs[j],
                interval: fit.confidence_interval_with(
                    j,
                    a.level,
                    DegeneratePolicy::PointInterval,
                )?,
            })
        })
        .collect::<Result<_>>()?;
    emit_json(
        a.out.as_deref(),
        &FitSummary {
            model: spec.to_string(),
            n: fit.n,
            residual_df: fit.residual_df,
            sigma2_hat: fit.sigma2_hat,
            terms,
        },
    )
}

fn require<T>(v: Option<T>, flag: &str, why: &str) -> Result<T> {
    v.ok_or_else(|| Error::arg(format!("{flag} is required {why}")))
}

fn ad_region(spec: RegionSpec, published: &PublishedArgs, n: usize) -> Result<ToleranceRegion> {
    match spec {
        RegionSpec::Fixed { lower, upper } => build_fixed_region(lower, upper),
        RegionSpec::Inflate { alpha } => {
            let why = "for an inflated region";
            build_inflated_region(
                require(published.gamma_hat, "--gamma-hat", why)?,
                require(published.sigma_hat, "--sigma-hat", why)?,
                alpha,
                require(published.n0, "--n0", why)?,
                n,
            )
        }
    }
}

fn cmd_ad_verify(a: AdVerifyArgs) -> Result<()> {
    let r = &a.release;
    let epsilon = PrivacyParams::new(r.epsilon)?;
    let (out, debug_out) = output_paths(r)?;
    let data = load(&a.data)?;
    let spec = ModelSpec::from_formula(&a.model, &data)?;
    let plan = make_partition(data.n_rows(), r.subsets, r.seed)?;
    let n = data.n_rows() / r.subsets;
    let region = ad_region(a.region, &a.published, n)?;
    let delta = match (a.delta, region.provenance) {
        (Some(d), _) => d,
        (None, Some(p)) => suggested_delta(p.gamma_hat_o, p.sigma_hat_o, p.alpha, p.n0, p.n)?,
        (None, None) => crate::ad::DEFAULT_DELTA,
    };
    let config = ADConfig {
        delta,
        prior: r.prior,
        burn_in: a.burn_in,
        keep: a.keep,
        seed: r.seed,
        ..ADConfig::new(r.subsets, epsilon)
    };
    config.validate()?;
    let mut ledger = open_ledger(r)?;

    let count = compute_indicator_count(&data, &spec, &a.coef, &region, &plan)?;
    let released = release_count(
        count.count,
        &config,
        &mut ledger,
        &mut noise_stream(r, "ad-release"),
    )?;
    drop(ledger);
    let posterior = gibbs_posterior(&released, &config)?;
    let report = ReleaseReport::Ad(AdRelease::new(
        &released,
        &config,
        posterior,
        spec.to_string(),
        a.coef.clone(),
        region,
    ));
    write_json(&out, &report)?;
    if let Some(path) = debug_out {
        write_json(&path, &AdDebug::new(plan.record(), &count))?;
        log::warn!("custodian-only diagnostics written to {}", path.display());
    }
    if let ReleaseReport::Ad(rep) = &report {
        println!(
            "theta_hat = {:.4} (delta = {:.4}), median r = {:.4}; report: {}",
            rep.theta_hat,
            rep.delta,
            rep.r_summary.median,
            out.display()
        );
    }
    Ok(())
}

/// `a,b,c` or `lo:hi:count` (count evenly spaced points, ends included).
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::arg(format!("bad grid `{s}`: use a,b,c or lo:hi:count"));
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
    let parts: Vec<&str> = s.split(':').collect();
    let grid = match parts.as_slice() {
        [lo, hi, count] => {
            let (lo, hi) = (num(lo)?, num(hi)?);
            let count: usize = count.trim().parse().map_err(|_| bad())?;
            match count {
                0 => return Err(bad()),
                1 => vec![lo],
                _ => (0..count)
                    .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
                    .collect(),
            }
        }
        [list] => list.split(',').map(num).collect::<Result<_>>()?,
        _ => return Err(bad()),
    };
    if grid.is_empty() || grid.iter().any(|v| !v.is_finite()) {
        return Err(bad());
    }
    Ok(grid)
}

pub fn parse_count_grid(s: &str) -> Result<Vec<usize>> {
    let mut out: Vec<usize> = Vec::new();
    for v in parse_grid(s)? {
        if v < 1.0 {
            return Err(Error::arg(format!("grid `{s}` has a value below 1")));
        }
        let m = v.round() as usize;
        if !out.contains(&m) {
            out.push(m);
        }
    }
    Ok(out)
}

fn parse_pair(s: &str, what: &str) -> Result<(f64, f64)> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| Error::arg(format!("{what} `{s}` is not of the form a,b")))?;
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| Error::arg(format!("bad number `{t}` in {what}")))
    };
    Ok((num(a)?, num(b)?))
}

fn cmd_ad_mselect(a: AdMselectArgs) -> Result<()> {
    let inputs = ContourInputs {
        sigma_hat_o: a.sigma_hat,
        n0: a.n0,
        n_total: a.n_total,
        epsilon: PrivacyParams::new(a.epsilon)?,
        replications: a.replications,
        seed: a.seed,
    };
    let gammas = parse_grid(&a.gamma_grid)?;
    let ms = parse_count_grid(&a.m_grid)?;
    let published = PublishedArgs {
        gamma_hat: a.gamma_hat,
        sigma_hat: Some(a.sigma_hat),
        n0: Some(a.n0),
    };
    let grid = robustness_contour_with(
        &gammas,
        &ms,
        |m| ad_region(a.region, &published, a.n_total / m),
        &inputs,
    )?;
    let file = File::create(&a.out).map_err(|e| Error::io(&a.out, e))?;
    robustness_csv(BufWriter::new(file), &grid)?;
    println!(
        "robustness grid ({} x {}) written to {}",
        gammas.len(),
        ms.len(),
        a.out.display()
    );
    Ok(())
}

fn assumption(
    lengths: Option<&str>,
    sigma_hat: Option<f64>,
    n0: Option<usize>,
    n: Option<usize>,
    level: f64,
) -> Result<InversionAssumption> {
    if let Some(l) = lengths {
        let (l1, l2) = parse_pair(l, "--lengths")?;
        return InversionAssumption::new(l1, l2);
    }
    let why = "for the null assumption (or pass --lengths)";
    null_assumption_lengths(
        require(sigma_hat, "--sigma-hat", why)?,
        require(n0, "--n0", why)?,
        require(n, "subset size", why)?,
        level,
    )
}

fn cmd_am_verify(a: AmVerifyArgs) -> Result<()> {
    let r = &a.release;
    let epsilon = PrivacyParams::new(r.epsilon)?;
    let (out, debug_out) = output_paths(r)?;
    let data = load(&a.data)?;
    let m0 = ModelSpec::from_formula(&a.model, &data)?;
    let m1 = ModelSpec::from_formula(&a.model_alt, &data)?;
    let plan = make_partition(data.n_rows(), r.subsets, r.seed)?;
    let config = AMConfig {
        level: a.level,
        prior: r.prior,
        grid_points: a.grid_points,
        draws: a.draws,
        seed: r.seed,
        ..AMConfig::new(r.subsets, epsilon)
    };
    config.validate()?;
    if !(a.mass > 0.0 && a.mass < 1.0) {
        return Err(Error::arg(format!("--mass {} outside (0, 1)", a.mass)));
    }
    let inversion_assumption = if a.invert {
        // the null assumption's n0-scale sd is read at the subset scale ⌊N/M⌋
        let n = data.n_rows() / r.subsets;
        Some(assumption(
            a.lengths.as_deref(),
            a.sigma_hat,
            a.n0,
            Some(n),
            a.level,
        )?)
    } else {
        None
    };
    let policy = if a.point_intervals {
        DegeneratePolicy::PointInterval
    } else {
        DegeneratePolicy::Error
    };
    let mut ledger = open_ledger(r)?;

    let overlap = average_overlap_with(&data, &m0, &m1, &a.coef, &plan, a.level, policy)?;
    let released = release_overlap(
        &overlap,
        &config,
        &mut ledger,
        &mut noise_stream(r, "am-release"),
    )?;
    drop(ledger);
    let posterior = posterior_nu(&released, &config)?;
    let inversion = match inversion_assumption {
        Some(asm) => Some(Inversion {
            interval: invert_credible_interval(&credible_interval(&posterior, a.mass)?, &asm)?,
            assumption: asm,
        }),
        None => None,
    };
    let report = AmRelease::new(
        &released,
        &config,
        &posterior,
        m0.to_string(),
        m1.to_string(),
        a.coef.clone(),
        inversion,
        Some(a.mass),
    )?;
    let ci = report
        .credible_intervals
        .iter()
        .find(|c| c.level == a.mass)
        .copied();
    write_json(&out, &ReleaseReport::Am(report))?;
    if let Some(path) = debug_out {
        write_json(&path, &AmDebug::new(plan.record(), &overlap))?;
        log::warn!("custodian-only diagnostics written to {}", path.display());
    }
    if let Some(ci) = ci {
        println!(
            "{:.0}% credible interval for the average overlap: [{:.4}, {:.4}]; report: {}",
            100.0 * a.mass,
            ci.lower,
            ci.upper,
            out.display()
        );
    }
    Ok(())
}

#[derive(Serialize)]
struct BoundRow {
    #[serde(rename = "M")]
    subsets: usize,
    epsilon: f64,
    omega: f64,
    variance_cap: f64,
    bound: f64,
}

fn cmd_am_mselect(a: AmMselectArgs) -> Result<()> {
    let rows = parse_count_grid(&a.m_grid)?
        .into_iter()
        .map(|m| {
            Ok(BoundRow {
                subsets: m,
                epsilon: a.epsilon,
                omega: a.omega,
                variance_cap: a.variance_cap,
                bound: crate::am::error_bound(m, a.epsilon, a.omega, a.variance_cap)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    print_json(&rows)
}

fn cmd_am_contour(a: AmContourArgs) -> Result<()> {
    let diffs = parse_grid(&a.diff_grid)?;
    let ratios = parse_grid(&a.ratio_grid)?;
    let grid = reference_contour(
        a.gamma_hat,
        a.sigma_hat,
        a.corr,
        &diffs,
        &ratios,
        a.replications,
        a.seed,
    )?;
    let file = File::create(&a.out).map_err(|e| Error::io(&a.out, e))?;
    contour_csv(BufWriter::new(file), &grid)?;
    println!(
        "reference contour ({} x {}) written to {}",
        diffs.len(),
        ratios.len(),
        a.out.display()
    );
    Ok(())
}

#[derive(Serialize)]
struct InvertReport {
    nu_interval: ConfidenceInterval,
    assumption: InversionAssumption,
    nu_max: f64,
    difference_interval: ConfidenceInterval,
}

fn cmd_invert(a: InvertArgs) -> Result<()> {
    let (lo, hi) = parse_pair(&a.nu_ci, "--nu-ci")?;
    let nu_interval = ConfidenceInterval::new(lo, hi, a.mass)?;
    let n = match (a.n, a.n_total, a.subsets) {
        (Some(n), _, _) => Some(n),
        (None, Some(total), Some(m)) if m > 0 => Some(total / m),
        _ => None,
    };
    let asm = assumption(a.lengths.as_deref(), a.sigma_hat, a.n0, n, a.level)?;
    let report = InvertReport {
        difference_interval: invert_credible_interval(&nu_interval, &asm)?,
        nu_interval,
        nu_max: asm.nu_max(),
        assumption: asm,
    };
    emit_json(a.out.as_deref(), &report)
}

#[derive(Serialize)]
struct StatusReport {
    ledger: PathBuf,
    spent: f64,
    remaining: Option<f64>,
    releases: usize,
}

fn cmd_budget_status(a: BudgetArgs) -> Result<()> {
    let mut ledger = BudgetLedger::new(a.budget_cap)?;
    if a.ledger.exists() {
        ledger = BudgetLedger::from_entries(a.budget_cap, BudgetLedger::load(&a.ledger)?)?;
    }
    let status = budget_status(&ledger);
    print_json(&StatusReport {
        ledger: a.ledger,
        spent: status.spent,
        remaining: status.remaining,
        releases: status.releases,
    })
}

#[derive(Serialize)]
struct SummarizeReport {
    framework: &'static str,
    consistent: bool,
    recomputed: crate::report::Recomputed,
}

fn cmd_summarize(a: SummarizeArgs) -> Result<()> {
    let report = ReleaseReport::from_path(&a.report)?;
    let consistent = report.is_consistent()?;
    let framework = match report {
        ReleaseReport::Ad(_) => "ad",
        ReleaseReport::Am(_) => "am",
    };
    print_json(&SummarizeReport {
        framework,
        consistent,
        recomputed: report.recompute()?,
    })?;
    if consistent {
        Ok(())
    } else {
        Err(Error::Format(format!(
            "{}: stored summaries do not match the stored samples",
            a.report.display()
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("1, 2.5,4").unwrap(), vec![1.0, 2.5, 4.0]);
        assert_eq!(parse_grid("-2:-1:2").unwrap(), vec![-2.0, -1.0]);
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert_eq!(parse_count_grid("5:90:18").unwrap()[..3], [5, 10, 15]);
        assert!(parse_count_grid("0,5").is_err());
    }

    #[test]
    fn cli_shape() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
