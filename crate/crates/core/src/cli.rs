//! Command-line frontend. Every subcommand reads an optional JSON config,
//! applies flag overrides on top of it and writes CSV/JSON files into `--out`.
//!
//! Exit codes: 0 on success, 1 on usage or configuration errors (and any
//! other failure), 2 when a check of `kernel-check` or `verify-all` fails.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::chain_sim::{self, ChainModel, ChainRunConfig};
use crate::dispersion::{self, Dispersion, ModelParams};
use crate::error::{Error, Result};
use crate::frac_pde::{self, FracField};
use crate::kinetic_mc::{self, KineticRow, KINETIC_CSV_HEADER};
use crate::numerics::{integrate, QuadOptions};
use crate::output::{fmt_f64, write_csv_file, write_json_file, Metadata};
use crate::resolvent;
use crate::scattering;
use crate::stats::stream_rng;

/// Environment variable that overrides the default worker count.
pub const THREADS_ENV: &str = "FRACCHAIN_THREADS";

#[derive(Debug, Parser)]
#[command(name = "fracchain", version, about = "Fractional energy diffusion in noisy long-range harmonic chains")]
pub struct Cli {
    /// Worker threads; defaults to $FRACCHAIN_THREADS, then to available parallelism.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// JSON config; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// omega, a_hat and their derivatives on a k grid.
    Dispersion {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        gamma0: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
    },
    /// Rank-2 and product-form identities of the scattering kernel.
    KernelCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_count)]
        pairs: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Monte-Carlo solution of the kinetic equation in the diffusive scaling.
    Kinetic {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        gamma0: Option<f64>,
        #[arg(long = "N")]
        n_scale: Option<f64>,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long, value_parser = parse_count)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Stable-law fit of the rescaled flight Z(Nt)/N(theta).
    Levy {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        gamma0: Option<f64>,
        #[arg(long = "N")]
        n_scale: Option<f64>,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long, value_parser = parse_count)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// a_eps and I_eps along a sequence of eps.
    Resolvent {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        gamma0: Option<f64>,
        #[arg(long)]
        s: Option<f64>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        lambda: Option<f64>,
    },
    /// Spectral solution of the fractional diffusion equation.
    Fracpde {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        variance: Option<f64>,
    },
    /// Ensemble of microscopic chains.
    Chain {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_parser = parse_count)]
        steps: Option<usize>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        temperature: Option<f64>,
        #[arg(long)]
        replicas: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Deterministic identity suite; `--quick` skips the slower checks.
    VerifyAll {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        quick: bool,
    },
}

/// Counts written as `100000` or `1e5`.
pub fn parse_count(s: &str) -> std::result::Result<usize, String> {
    if let Ok(n) = s.parse::<usize>() {
        return Ok(n);
    }
    let x: f64 = s.parse().map_err(|_| format!("not a count: {s}"))?;
    if x >= 0.0 && x.fract() == 0.0 && x <= 9.0e15 {
        Ok(x as usize)
    } else {
        Err(format!("not a nonnegative integer: {s}"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DispersionConfig {
    pub theta: f64,
    pub gamma0: f64,
    /// Midpoint grid size on the torus.
    pub points: usize,
}

impl Default for DispersionConfig {
    fn default() -> Self {
        Self { theta: 4.0, gamma0: 1.0, points: 256 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelCheckConfig {
    #[serde(default = "default_pairs")]
    pub pairs: usize,
    pub seed: u64,
}

fn default_pairs() -> usize {
    10_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KineticConfig {
    pub theta: f64,
    #[serde(default = "one")]
    pub gamma0: f64,
    #[serde(rename = "N")]
    pub n_scale: f64,
    #[serde(default = "one")]
    pub t: f64,
    pub samples: usize,
    pub seed: u64,
    /// Midpoint `k` nodes for the `k`-average.
    #[serde(default = "default_k_nodes")]
    pub k_nodes: usize,
    #[serde(default = "default_y_grid")]
    pub y: Vec<f64>,
    /// `u0(y, k) = exp(-y^2/2) (1 + amplitude cos 2 pi k)`.
    #[serde(default = "default_amplitude")]
    pub amplitude: f64,
}

fn one() -> f64 {
    1.0
}

fn default_k_nodes() -> usize {
    16
}

fn default_y_grid() -> Vec<f64> {
    (0..=16).map(|i| -4.0 + 0.5 * i as f64).collect()
}

fn default_amplitude() -> f64 {
    0.8
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevyConfig {
    pub theta: f64,
    #[serde(default = "one")]
    pub gamma0: f64,
    #[serde(rename = "N")]
    pub n_scale: f64,
    #[serde(default = "one")]
    pub t: f64,
    pub samples: usize,
    pub seed: u64,
    /// Exceedance statistic at these `lambda`, next to its limit.
    #[serde(default)]
    pub tail_lambdas: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResolventConfig {
    pub theta: f64,
    pub gamma0: f64,
    pub s: f64,
    pub p: f64,
    pub lambda: f64,
    pub eps: Vec<f64>,
}

impl Default for ResolventConfig {
    fn default() -> Self {
        Self { theta: 4.0, gamma0: 1.0, s: 0.0, p: 1.0, lambda: 1.0, eps: vec![1e-2, 1e-3, 1e-4, 1e-5, 1e-6] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FracPdeConfig {
    pub theta: f64,
    pub gamma0: f64,
    /// Overrides the stable index of `theta`.
    pub alpha: Option<f64>,
    /// Overrides `C_{theta,gamma0}`.
    pub kappa: Option<f64>,
    pub domain_length: f64,
    pub n_modes: usize,
    /// Variance of the Gaussian initial datum.
    pub variance: f64,
    pub t: f64,
}

impl Default for FracPdeConfig {
    fn default() -> Self {
        Self {
            theta: 4.0,
            gamma0: 1.0,
            alpha: None,
            kappa: None,
            domain_length: 80.0,
            n_modes: 4096,
            variance: 1.0,
            t: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub theta: f64,
    pub quick: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { theta: 4.0, quick: false }
    }
}

/// Parses argv and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(Error::CheckFailure(msg)) => {
            eprintln!("check failed: {msg}");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

/// Worker count from the flag, then the environment, then the machine.
pub fn resolve_threads(flag: Option<usize>) -> Result<Option<usize>> {
    if let Some(n) = flag {
        return Ok(Some(n));
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| Error::Config(format!("{THREADS_ENV}={v} is not a count"))),
        Err(_) => Ok(None),
    }
}

pub fn execute(cli: Cli) -> Result<()> {
    if let Some(n) = resolve_threads(cli.threads)? {
        if n == 0 {
            return Err(Error::Config("--threads must be positive".into()));
        }
        // A second call in the same process (tests) keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match cli.command {
        Command::Dispersion { common, theta, gamma0, points } => {
            let cfg: DispersionConfig =
                load("dispersion", &common, [("theta", num(theta)), ("gamma0", num(gamma0)), ("points", count(points))])?;
            run_dispersion(&cfg, &common.out)
        }
        Command::KernelCheck { common, pairs, seed } => {
            let cfg: KernelCheckConfig =
                load("kernel-check", &common, [("pairs", count(pairs)), ("seed", seed.map(Value::from))])?;
            run_kernel_check(&cfg, &common.out)
        }
        Command::Kinetic { common, theta, gamma0, n_scale, t, samples, seed } => {
            let cfg: KineticConfig = load(
                "kinetic",
                &common,
                [
                    ("theta", num(theta)),
                    ("gamma0", num(gamma0)),
                    ("N", num(n_scale)),
                    ("t", num(t)),
                    ("samples", count(samples)),
                    ("seed", seed.map(Value::from)),
                ],
            )?;
            run_kinetic(&cfg, &common.out)
        }
        Command::Levy { common, theta, gamma0, n_scale, t, samples, seed } => {
            let cfg: LevyConfig = load(
                "levy",
                &common,
                [
                    ("theta", num(theta)),
                    ("gamma0", num(gamma0)),
                    ("N", num(n_scale)),
                    ("t", num(t)),
                    ("samples", count(samples)),
                    ("seed", seed.map(Value::from)),
                ],
            )?;
            run_levy(&cfg, &common.out)
        }
        Command::Resolvent { common, theta, gamma0, s, p, lambda } => {
            let cfg: ResolventConfig = load(
                "resolvent",
                &common,
                [("theta", num(theta)), ("gamma0", num(gamma0)), ("s", num(s)), ("p", num(p)), ("lambda", num(lambda))],
            )?;
            run_resolvent(&cfg, &common.out)
        }
        Command::Fracpde { common, theta, t, variance } => {
            let cfg: FracPdeConfig =
                load("fracpde", &common, [("theta", num(theta)), ("t", num(t)), ("variance", num(variance))])?;
            run_fracpde(&cfg, &common.out)
        }
        Command::Chain { common, theta, gamma, n, steps, dt, temperature, replicas, seed } => {
            let cfg: ChainRunConfig = load(
                "chain",
                &common,
                [
                    ("theta", num(theta)),
                    ("gamma", num(gamma)),
                    ("n", count(n)),
                    ("steps", count(steps)),
                    ("dt", num(dt)),
                    ("temperature", num(temperature)),
                    ("replicas", count(replicas)),
                    ("seed", seed.map(Value::from)),
                ],
            )?;
            run_chain(&cfg, &common.out)
        }
        Command::VerifyAll { common, theta, quick } => {
            let cfg: VerifyConfig =
                load("verify-all", &common, [("theta", num(theta)), ("quick", quick.then_some(Value::Bool(true)))])?;
            run_verify_all(&cfg, &common.out)
        }
    }
}

fn num(x: Option<f64>) -> Option<Value> {
    x.map(Value::from)
}

fn count(x: Option<usize>) -> Option<Value> {
    x.map(Value::from)
}

/// Config file (if any) with the given flag values laid over it.
fn load<T: DeserializeOwned, const M: usize>(
    command: &str,
    common: &Common,
    overrides: [(&str, Option<Value>); M],
) -> Result<T> {
    let mut map = match &common.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            match serde_json::from_str::<Value>(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))? {
                Value::Object(m) => m,
                _ => return Err(Error::Config("config must be a JSON object".into())),
            }
        }
        None => Map::new(),
    };
    if let Some(c) = map.remove("command") {
        if c.as_str() != Some(command) {
            return Err(Error::Config(format!("config is for command {c}, not '{command}'")));
        }
    }
    for (key, value) in overrides {
        if let Some(v) = value {
            map.insert(key.to_string(), v);
        }
    }
    serde_json::from_value(Value::Object(map)).map_err(|e| Error::Config(format!("{command} config: {e}")))
}

/// Metadata shared by all outputs: tool version, command and the resolved config.
fn metadata<T: Serialize>(command: &str, cfg: &T) -> Result<Metadata> {
    Metadata::new("fracchain").with("command", command).with_config(cfg)
}

/// Recovers the resolved config from the `# config:` header line of an output file.
pub fn config_echo(csv_text: &str) -> Option<Value> {
    csv_text
        .lines()
        .take_while(|l| l.starts_with('#'))
        .find_map(|l| l.strip_prefix("# config: "))
        .and_then(|j| serde_json::from_str(j).ok())
}

fn params(theta: f64, gamma0: f64) -> Result<ModelParams> {
    let p = ModelParams::new(theta).with_gamma0(gamma0);
    p.validate()?;
    Ok(p)
}

pub fn run_dispersion(cfg: &DispersionConfig, out: &Path) -> Result<()> {
    let p = params(cfg.theta, cfg.gamma0)?;
    p.require_theta_above_two()?;
    if cfg.points == 0 {
        return Err(Error::Config("points must be positive".into()));
    }
    let d = Dispersion::new(&p)?;
    let mut rows = Vec::with_capacity(cfg.points);
    for k in kinetic_mc::midpoint_k_grid(cfg.points) {
        let s = d.sample(k)?;
        rows.push(vec![fmt_f64(k), fmt_f64(s.a_hat), fmt_f64(s.a_hat_prime), fmt_f64(s.omega), fmt_f64(s.omega_prime)]);
    }
    let meta = metadata("dispersion", cfg)?.with("c_theta", fmt_f64(dispersion::c_theta(&p)?));
    write_csv_file(&out.join("dispersion.csv"), &meta, &["k", "a_hat", "a_hat_prime", "omega", "omega_prime"], &rows)
}

/// One line of a check report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `value <= tolerance`.
    pub fn at_most(name: &str, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, tolerance, pass: value <= tolerance }
    }

    /// Passes when `value >= tolerance`, as for p-values.
    pub fn at_least(name: &str, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, tolerance, pass: value >= tolerance }
    }
}

fn write_checks(path: &Path, meta: &Metadata, checks: &[Check]) -> Result<()> {
    let rows: Vec<Vec<String>> = checks
        .iter()
        .map(|c| vec![c.name.clone(), fmt_f64(c.value), fmt_f64(c.tolerance), c.pass.to_string()])
        .collect();
    write_csv_file(path, meta, &["check", "value", "tolerance", "pass"], &rows)?;
    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Error::CheckFailure(failed.join(", ")))
    }
}

/// Largest deviations of the rank-2 and product forms of the kernel over
/// `pairs` random points.
pub fn kernel_checks(pairs: usize, seed: u64) -> Vec<Check> {
    let mut rng = stream_rng(seed, 0);
    let (mut rank2, mut product) = (0f64, 0f64);
    for _ in 0..pairs {
        let k: f64 = rng.random_range(-0.5..0.5);
        let kp: f64 = rng.random_range(-0.5..0.5);
        let p: f64 = rng.random_range(-0.5..0.5);
        rank2 = rank2.max((scattering::r_pair(k, kp) - scattering::r_pair_rank2(k, kp)).abs());
        product = product.max((scattering::r_p_kernel(k, kp, p) - scattering::r_p_kernel_product(k, kp, p)).abs());
    }
    vec![Check::at_most("kernel_rank2", rank2, 1e-12), Check::at_most("kernel_product_form", product, 1e-12)]
}

pub fn run_kernel_check(cfg: &KernelCheckConfig, out: &Path) -> Result<()> {
    let meta = metadata("kernel-check", cfg)?.with("seed", cfg.seed);
    write_checks(&out.join("kernel_check.csv"), &meta, &kernel_checks(cfg.pairs, cfg.seed))
}

pub fn run_kinetic(cfg: &KineticConfig, out: &Path) -> Result<()> {
    let p = params(cfg.theta, cfg.gamma0)?;
    p.require_theta_above_two()?;
    if cfg.k_nodes == 0 || cfg.y.is_empty() {
        return Err(Error::Config("k_nodes and y must be nonempty".into()));
    }
    let amp = cfg.amplitude;
    let u0 = move |y: f64, k: f64| (-0.5 * y * y).exp() * (1.0 + amp * (2.0 * PI * k).cos());
    let k_grid = kinetic_mc::midpoint_k_grid(cfg.k_nodes);
    let est = kinetic_mc::rescaled_un_profile(&p, &u0, cfg.n_scale, cfg.t, &cfg.y, &k_grid, cfg.samples, cfg.seed)?;
    let meta = metadata("kinetic", cfg)?.with("seed", cfg.seed);
    let rows: Vec<Vec<String>> = est
        .iter()
        .map(|e| {
            vec![
                fmt_f64(e.y),
                fmt_f64(e.k_average),
                fmt_f64(e.k_average_stderr),
                fmt_f64(e.deficit),
                fmt_f64(e.deficit_raw),
                fmt_f64(e.deficit_stderr),
            ]
        })
        .collect();
    write_csv_file(
        &out.join("kinetic.csv"),
        &meta,
        &["y", "k_average", "k_average_stderr", "deficit", "deficit_raw", "deficit_stderr"],
        &rows,
    )
}

pub fn run_levy(cfg: &LevyConfig, out: &Path) -> Result<()> {
    let p = params(cfg.theta, cfg.gamma0)?;
    let est = kinetic_mc::estimate_stable_exponent(&p, cfg.n_scale, cfg.t, cfg.samples, cfg.seed)?;
    let c = resolvent::c_big(&p)?;
    let row = |name: &str, value: f64, stderr: f64| KineticRow {
        theta: cfg.theta,
        gamma0: cfg.gamma0,
        n: cfg.n_scale,
        t: cfg.t,
        statistic: name.into(),
        value,
        stderr,
        n_samples: cfg.samples,
        seed: cfg.seed,
    };
    let mut rows = vec![
        row("exponent_fit", est.exponent_fit, est.stderr),
        row("exponent_target", resolvent::stable_index(cfg.theta), 0.0),
        row("coefficient_fit", est.coefficient_fit, f64::NAN),
        row("c_big", c, 0.0),
        row("r_squared", est.r_squared, f64::NAN),
        row("max_imag_z", est.max_imag_z, f64::NAN),
    ];
    for &lam in &cfg.tail_lambdas {
        rows.push(row(&format!("tail_statistic[lambda={lam}]"), kinetic_mc::tail_statistic(&p, cfg.n_scale, lam)?, 0.0));
        rows.push(row(&format!("tail_limit[lambda={lam}]"), kinetic_mc::tail_limit(&p, lam)?, 0.0));
    }
    let meta = metadata("levy", cfg)?.with("seed", cfg.seed);
    let records: Vec<Vec<String>> = rows.iter().map(KineticRow::record).collect();
    write_csv_file(&out.join("levy.csv"), &meta, &KINETIC_CSV_HEADER, &records)
}

pub fn run_resolvent(cfg: &ResolventConfig, out: &Path) -> Result<()> {
    let p = params(cfg.theta, cfg.gamma0)?.with_s(cfg.s);
    let rows = resolvent::sweep(&p, &cfg.eps, cfg.p, cfg.lambda)?;
    let records: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            [r.theta, r.gamma0, r.s, r.eps, r.p, r.lambda, r.a_eps, r.i_eps, r.limit, r.rel_error]
                .iter()
                .map(|&x| fmt_f64(x))
                .collect()
        })
        .collect();
    let meta = metadata("resolvent", cfg)?;
    write_csv_file(
        &out.join("resolvent.csv"),
        &meta,
        &["theta", "gamma0", "s", "eps", "p", "lambda", "a_eps", "I_eps", "limit", "rel_error"],
        &records,
    )
}

pub fn run_fracpde(cfg: &FracPdeConfig, out: &Path) -> Result<()> {
    let p = params(cfg.theta, cfg.gamma0)?;
    let alpha = match cfg.alpha {
        Some(a) => a,
        None => resolvent::stable_index(p.theta),
    };
    let kappa = match cfg.kappa {
        Some(k) => k,
        None => frac_pde::macroscopic_kappa(&p)?,
    };
    if !(cfg.variance > 0.0) {
        return Err(Error::Config("variance must be positive".into()));
    }
    let field = FracField::from_spectrum(
        cfg.domain_length,
        cfg.n_modes,
        alpha,
        kappa,
        frac_pde::gaussian_spectrum(cfg.variance),
    )?
    .evolve(cfg.t)?;
    let profile = field.to_native_grid()?;
    field.write_profile(&profile, &metadata("fracpde", cfg)?, &out.join("fracpde.csv"), &out.join("fracpde.json"))
}

pub fn run_chain(cfg: &ChainRunConfig, out: &Path) -> Result<()> {
    let summary = chain_sim::run_config(cfg, out)?;
    write_json_file(&out.join("chain_summary.json"), &summary)
}

/// Deterministic identity checks at `theta`. Without `quick` the chain run is
/// longer and the small-k, rescaled-difference and resolvent checks are added.
pub fn verify_checks(theta: f64, quick: bool) -> Result<Vec<Check>> {
    let params = ModelParams::new(theta);
    params.require_theta_above_two()?;
    let mut checks = kernel_checks(10_000, 0);

    let opts = QuadOptions::tol(1e-15, 1e-13);
    let mut marginal = 0f64;
    for i in 0..33 {
        let k = -0.5 + i as f64 / 32.0;
        let q = integrate(|kp| scattering::r_pair(k, kp), -0.5, 0.5, opts)?.value;
        marginal = marginal.max((q - scattering::r_mean(k)).abs());
    }
    checks.push(Check::at_most("kernel_marginal", marginal, 1e-10));
    let mut norm = 0f64;
    for i in [1u8, 2] {
        let q = integrate(|k| scattering::e_basis(i, k).unwrap_or(f64::NAN), -0.5, 0.5, opts)?.value;
        norm = norm.max((q - 1.0).abs());
    }
    checks.push(Check::at_most("basis_normalization", norm, 1e-12));

    let mut residue = 0f64;
    for tau in [0.0, 0.3, 0.6, 0.9] {
        residue = residue.max((resolvent::residue_integral(tau)? - resolvent::residue_integral_quadrature(tau)?).abs());
    }
    checks.push(Check::at_most("residue_integral", residue, 1e-8));
    let mut sine = 0f64;
    for a in [6.0 / 4.8, 6.0 / 4.5, 1.5] {
        sine = sine.max((resolvent::sine_integral(a)? - resolvent::sine_integral_quadrature(a)?).abs());
    }
    checks.push(Check::at_most("sine_integral", sine, 1e-6));
    let mut csc = 0f64;
    for th in [2.2, 2.5, 2.8, 3.0] {
        let (a, b) = resolvent::csc_arguments(th);
        csc = csc.max((a - b).abs());
    }
    checks.push(Check::at_most("csc_arguments", csc, 1e-12));

    let mut coeff = 0f64;
    for g0 in [0.5, 1.0, 2.0] {
        let p = params.with_gamma0(g0);
        let (a, b) = (resolvent::c_big(&p)?, resolvent::c_small(&p)?);
        coeff = coeff.max((a - b).abs() / a);
    }
    checks.push(Check::at_most("coefficient_identity", coeff, 1e-10));

    let (n, steps) = if quick { (128, 200) } else { (1024, 2000) };
    let model = ChainModel::new(&params, n)?;
    let mut rng = stream_rng(0, 0);
    let mut state = chain_sim::init_thermal(&model, 1.0, 1.0, &mut rng)?;
    let start = state.clone();
    let dt = model.default_dt();
    chain_sim::run(&mut state, dt, steps, &mut rng);
    checks.push(Check::at_most("chain_energy_drift", chain_sim::energy_drift(&start, &state), 1e-10));
    checks.push(Check::at_most("chain_momentum_drift", chain_sim::momentum_drift(&start, &state), 1e-10));

    let small = ChainModel::new(&params, 64)?;
    let s64 = chain_sim::init_thermal(&small, 1.0, 1.0, &mut rng)?;
    let (real, spec) = (chain_sim::site_energies(&s64), chain_sim::site_energies_spectral(&s64));
    let scale = real.iter().map(|e| e.abs()).fold(0.0, f64::max);
    let energy_gap = real.iter().zip(&spec).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / scale;
    checks.push(Check::at_most("site_energy_agreement", energy_gap, 1e-10));
    let psi2: f64 = chain_sim::wave_function(&s64).iter().map(|z| z.norm_sqr()).sum::<f64>() / 64.0;
    checks.push(Check::at_most("wave_function_norm", (psi2 - 2.0 * s64.energy()).abs() / (2.0 * s64.energy()), 1e-12));

    let var0 = 0.5;
    let heat = FracField::from_spectrum(40.0, 1024, 2.0, 1.0, frac_pde::gaussian_spectrum(var0))?.evolve(1.0)?;
    let exact = FracField::from_spectrum(40.0, 1024, 2.0, 1.0, frac_pde::gaussian_spectrum(var0 + 1.0 / (2.0 * PI * PI)))?;
    let (a, b) = (heat.to_native_grid()?, exact.to_native_grid()?);
    let heat_err = a.w.iter().zip(&b.w).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    checks.push(Check::at_most("heat_mode", heat_err, 1e-10));
    checks.push(Check::at_most("mass_conservation", (heat.mass() - 1.0).abs(), 1e-12));

    if !quick {
        let c = dispersion::c_theta(&params)?;
        let d = Dispersion::new(&params)?;
        let k = 2f64.powi(-20);
        if theta == 3.0 {
            // The leading term alone is 2.5% off at this k; check the two-term expansion.
            let two_term = 4.0 * PI * PI * k * k * ((1.0 / (2.0 * PI * k)).ln() + 1.5);
            checks.push(Check::at_most("dispersion_log_expansion", (d.a_hat(k) - two_term).abs() / d.a_hat(k), 1e-10));
        } else {
            let lead = (d.a_hat(k) - dispersion::a_hat_leading(&params, c, k)).abs() / d.a_hat(k);
            checks.push(Check::at_most("dispersion_leading_term", lead, 0.02));
        }
        let mut limit = 0f64;
        for k in [-2.0, -0.5, 0.3, 1.0, 3.0] {
            let v = dispersion::delta_eps_omega_rescaled(&params, 1e-200, 1.0, k)?;
            let l = dispersion::delta_eps_omega_rescaled_limit(&params, k)?;
            limit = limit.max((v / l - 1.0).abs());
        }
        checks.push(Check::at_most("rescaled_difference_limit", limit, 0.03));
        let r = resolvent::Resolvent::new(&params, 1e-3, 1.0, 1.0)?;
        let split = (r.a_eps()? - (r.lambda * r.lambda_part()? + r.i_eps()?)).abs() / r.a_eps()?;
        checks.push(Check::at_most("a_eps_decomposition", split, 1e-9));
    }
    Ok(checks)
}

pub fn run_verify_all(cfg: &VerifyConfig, out: &Path) -> Result<()> {
    let checks = verify_checks(cfg.theta, cfg.quick)?;
    for c in &checks {
        println!("{} {:<28} {:.3e} (tol {:.1e})", if c.pass { "PASS" } else { "FAIL" }, c.name, c.value, c.tolerance);
    }
    let meta = metadata("verify-all", cfg)?;
    write_checks(&out.join("verify.csv"), &meta, &checks)
}
