//! Command-line front end: parses a graph polynomial, computes its Newton
//! polyhedron invariants and restriction exponents, and drives the decay
//! and Knapp verification harnesses. Every command prints a JSON report to
//! stdout and, with --out, writes the report (plus CSV sample tables where
//! applicable) into the output directory.
//!
//! Exit codes: 0 success (including "theorem check failed" verdicts),
//! 2 polynomial syntax error, 3 degenerate input, 4 quadrature budget
//! exceeded with partial results, 1 other operational failures.

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use restrix::adapt::{self, HeightResult};
use restrix::newton;
use restrix::oscint::{self, DecayConfig, QuadratureConfig, SurfacePatch};
use restrix::polyalg::{self, Polynomial};
use restrix::rat::{rat, rat_from_str, rat_to_string, Rat};
use restrix::report::{self, VerifyJson};
use restrix::restrict::{self, Verdict};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "restrix",
    about = "Newton-polyhedron invariants and Fourier restriction exponents of convex polynomial hypersurfaces x4 = phi(x1,x2,x3)",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct CommonArgs {
    /// Graph polynomial in x1..x3, e.g. "x1^2 + x2^2 + x3^4"
    #[arg(long)]
    poly: String,
    /// Output directory for JSON/CSV files (stdout only when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for every randomized component (deterministic outputs)
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Print compact single-line JSON instead of pretty-printed
    #[arg(long)]
    json: bool,
    /// Bump radius of the surface measure weight
    #[arg(long, default_value_t = 0.5)]
    bump_radius: f64,
    /// Maximum integrand evaluations per oscillatory integral
    #[arg(long, default_value_t = 200_000_000)]
    budget: u64,
    /// Panel multiplier per estimated oscillation (>= 4)
    #[arg(long, default_value_t = 4.0)]
    npw: f64,
    /// Drop the surface-area factor sqrt(1+|grad phi|^2)
    #[arg(long)]
    no_area_factor: bool,
    /// Worker threads (quadrature and search parallelism)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct HeightArgs {
    /// Multistart count for the rotation search
    #[arg(long, default_value_t = 64)]
    starts: usize,
    /// Refinement rounds (shrinking angular step)
    #[arg(long, default_value_t = 40)]
    iters: usize,
}

#[derive(Args, Debug, Clone)]
struct DecayArgs {
    /// Smallest frequency magnitude
    #[arg(long, default_value_t = 8.0)]
    xi_min: f64,
    /// Largest frequency magnitude (>= 32 * xi-min)
    #[arg(long, default_value_t = 256.0)]
    xi_max: f64,
    /// Number of magnitudes on the geometric grid (>= 8)
    #[arg(long, default_value_t = 8)]
    mags: usize,
    /// Number of directions (normal at 0 always included)
    #[arg(long, default_value_t = 9)]
    dirs: usize,
}

#[derive(Args, Debug, Clone)]
struct KnappArgs {
    /// Smallest cap scale delta
    #[arg(long, default_value_t = 0.001953125)]
    delta_min: f64,
    /// Largest cap scale delta
    #[arg(long, default_value_t = 0.25)]
    delta_max: f64,
    /// Number of scales on the geometric ladder (>= 6)
    #[arg(long, default_value_t = 8)]
    scales: usize,
    /// Cap constant: the fourth frequency half-width is c * delta
    #[arg(long, default_value_t = 0.125)]
    cap_c: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a polynomial and print its canonical form
    Parse(CommonArgs),
    /// Newton polyhedron, facets, distance, and principal face
    Newton(CommonArgs),
    /// Height search over rotations
    Height {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        height: HeightArgs,
    },
    /// Height plus all derived restriction exponents
    Exponents {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        height: HeightArgs,
        /// Skip the search and use this height (rational, e.g. "4/5")
        #[arg(long)]
        h_override: Option<String>,
    },
    /// Surface-measure Fourier decay sweep and exponent fit
    Decay {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        height: HeightArgs,
        #[command(flatten)]
        decay: DecayArgs,
    },
    /// Knapp restriction-quotient scan at a fixed exponent p
    Knapp {
        #[command(flatten)]
        common: CommonArgs,
        /// Lebesgue exponent p in (1, 2], rational ("10/7") or decimal
        #[arg(long)]
        p: String,
        #[command(flatten)]
        knapp: KnappArgs,
    },
    /// Full pipeline: exponents, decay conformance, Knapp bracket at
    /// p* -1/10, p*, p* + 1/10
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        height: HeightArgs,
        #[command(flatten)]
        decay: DecayArgs,
        #[command(flatten)]
        knapp: KnappArgs,
    },
}

/// Fully resolved run configuration, echoed into every output file.
#[derive(Debug, Clone, Serialize)]
struct RunConfig {
    command: String,
    poly: String,
    nvars: usize,
    bump_radius: f64,
    bump_kind: String,
    include_area_factor: bool,
    seed: u64,
    budget: u64,
    nodes_per_wavelength: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    starts: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    iters: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    h_override: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    xi_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    xi_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n_mags: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n_dirs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n_scales: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cap_c: Option<f64>,
}

impl RunConfig {
    // thread count and output paths are execution details, not part of the
    // reproducibility record: outputs must be byte-identical across
    // parallelism levels
    fn new(command: &str, common: &CommonArgs) -> Self {
        RunConfig {
            command: command.into(),
            poly: common.poly.clone(),
            nvars: 3,
            bump_radius: common.bump_radius,
            bump_kind: "smooth_exp".into(),
            include_area_factor: !common.no_area_factor,
            seed: common.seed,
            budget: common.budget,
            nodes_per_wavelength: common.npw,
            starts: None,
            iters: None,
            h_override: None,
            xi_min: None,
            xi_max: None,
            n_mags: None,
            n_dirs: None,
            p: None,
            delta_min: None,
            delta_max: None,
            n_scales: None,
            cap_c: None,
        }
    }

    fn with_height(mut self, h: &HeightArgs) -> Self {
        self.starts = Some(h.starts);
        self.iters = Some(h.iters);
        self
    }

    fn with_decay(mut self, d: &DecayArgs) -> Self {
        self.xi_min = Some(d.xi_min);
        self.xi_max = Some(d.xi_max);
        self.n_mags = Some(d.mags);
        self.n_dirs = Some(d.dirs);
        self
    }

    fn with_knapp(mut self, k: &KnappArgs, p: Option<&str>) -> Self {
        self.p = p.map(String::from);
        self.delta_min = Some(k.delta_min);
        self.delta_max = Some(k.delta_max);
        self.n_scales = Some(k.scales);
        self.cap_c = Some(k.cap_c);
        self
    }

    fn json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }
}

/// Error carrying the intended process exit code.
#[derive(Debug)]
struct CliError {
    code: u8,
    message: String,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for CliError {}

fn fail(code: u8, message: impl Into<String>) -> anyhow::Error {
    CliError { code, message: message.into() }.into()
}

fn parse_poly_arg(text: &str) -> Result<Polynomial> {
    polyalg::parse(text, 3).map_err(|e| fail(2, format!("{e}")))
}

fn support_of(poly: &Polynomial) -> Result<newton::SupportSet> {
    newton::support(poly).map_err(|e| fail(3, format!("{e}")))
}

fn parse_rational(text: &str) -> Result<Rat> {
    rat_from_str(text).ok_or_else(|| fail(1, format!("not a rational number: {text}")))
}

fn print_report<T: Serialize>(report: &T, compact: bool) -> Result<()> {
    let text = if compact {
        serde_json::to_string(report)?
    } else {
        serde_json::to_string_pretty(report)?
    };
    println!("{text}");
    Ok(())
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    std::fs::create_dir_all(dir)
        .with_context(|| format!("creating output directory {}", dir.display()))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn write_json<T: Serialize>(dir: Option<&PathBuf>, name: &str, report: &T) -> Result<()> {
    if let Some(dir) = dir {
        write_file(dir, name, &format!("{}\n", serde_json::to_string_pretty(report)?))?;
    }
    Ok(())
}

/// Advisory hypothesis checks; failures become warnings, not errors.
fn hypothesis_warnings(poly: &Polynomial, radius: f64) -> Vec<String> {
    let mut warnings = Vec::new();
    let conv = polyalg::check_convex(poly, radius, 9);
    if !conv.convex {
        let w = format!(
            "convexity check failed: Hessian eigenvalue {:.3e} at {:?}",
            conv.min_eigenvalue,
            conv.witness.unwrap_or_default()
        );
        log::warn!("{w}");
        warnings.push(w);
    }
    let lt = polyalg::check_finite_line_type(poly, 64);
    if !lt.finite_type {
        let w = format!(
            "finite-line-type check failed: the restriction along {:?} vanishes",
            lt.worst_direction
        );
        log::warn!("{w}");
        warnings.push(w);
    }
    warnings
}

fn knapp_scales(args: &KnappArgs) -> Result<Vec<f64>> {
    if args.scales < 2 || args.delta_min >= args.delta_max {
        return Err(fail(1, "need delta_min < delta_max and at least 2 scales"));
    }
    let ratio = (args.delta_min / args.delta_max).powf(1.0 / (args.scales as f64 - 1.0));
    Ok((0..args.scales).map(|j| args.delta_max * ratio.powi(j as i32)).collect())
}

fn patch_for(common: &CommonArgs, poly: Polynomial) -> Result<SurfacePatch> {
    SurfacePatch::new(
        poly,
        common.bump_radius,
        oscint::BumpKind::SmoothExp,
        !common.no_area_factor,
    )
    .map_err(|e| fail(1, e.to_string()))
}

fn quad_config(common: &CommonArgs) -> QuadratureConfig {
    QuadratureConfig { nodes_per_wavelength: common.npw, max_evaluations: common.budget }
}

fn run_height(poly: &Polynomial, args: &HeightArgs, seed: u64) -> Result<HeightResult> {
    adapt::height_search(poly, args.starts, args.iters, seed).map_err(|e| match e {
        adapt::AdaptError::Degenerate(_) => fail(3, format!("{e}")),
        other => fail(1, format!("{other}")),
    })
}

#[derive(Serialize)]
struct ParseJson {
    schema: String,
    config: serde_json::Value,
    canonical: String,
    nvars: usize,
    degree: u32,
    terms: usize,
}

fn cmd_parse(common: &CommonArgs) -> Result<()> {
    let poly = parse_poly_arg(&common.poly)?;
    let cfg = RunConfig::new("parse", common);
    let out = ParseJson {
        schema: report::SCHEMA_VERSION.into(),
        config: cfg.json(),
        canonical: poly.to_string(),
        nvars: poly.nvars(),
        degree: poly.degree(),
        terms: poly.terms().len(),
    };
    print_report(&out, common.json)?;
    write_json(common.out.as_ref(), "parse.json", &out)
}

fn cmd_newton(common: &CommonArgs) -> Result<()> {
    let poly = parse_poly_arg(&common.poly)?;
    let support = support_of(&poly)?;
    let np = newton::build_polyhedron(&support);
    let dr = newton::distance(&np);
    let cfg = RunConfig::new("newton", common);
    let mut warnings = Vec::new();
    if support.had_constant {
        warnings.push("nonzero constant term dropped (graph functions vanish at 0)".into());
    }
    let out = report::polyhedron_json(&np, &dr, poly.to_string(), cfg.json(), warnings);
    print_report(&out, common.json)?;
    write_json(common.out.as_ref(), "newton.json", &out)
}

fn cmd_height(common: &CommonArgs, args: &HeightArgs) -> Result<()> {
    let poly = parse_poly_arg(&common.poly)?;
    let height = run_height(&poly, args, common.seed)?;
    let exps = adapt::exponent_report(&height.h, &height.d_original);
    let cfg = RunConfig::new("height", common).with_height(args);
    let warnings = hypothesis_warnings(&poly, common.bump_radius);
    let out = report::exponents_json(Some(&height), &exps, poly.to_string(), cfg.json(), warnings);
    print_report(&out, common.json)?;
    write_json(common.out.as_ref(), "height.json", &out)
}

fn cmd_exponents(
    common: &CommonArgs,
    args: &HeightArgs,
    h_override: Option<&str>,
) -> Result<()> {
    let poly = parse_poly_arg(&common.poly)?;
    let cfg = RunConfig::new("exponents", common).with_height(args);
    let mut cfg = cfg;
    cfg.h_override = h_override.map(String::from);
    let warnings = hypothesis_warnings(&poly, common.bump_radius);
    let out = match h_override {
        Some(text) => {
            let h = parse_rational(text)?;
            if h <= rat(0, 1) {
                return Err(fail(1, "height override must be positive"));
            }
            let exps = adapt::critical_p(&h);
            report::exponents_json(None, &exps, poly.to_string(), cfg.json(), warnings)
        }
        None => {
            let height = run_height(&poly, args, common.seed)?;
            let exps = adapt::exponent_report(&height.h, &height.d_original);
            report::exponents_json(Some(&height), &exps, poly.to_string(), cfg.json(), warnings)
        }
    };
    print_report(&out, common.json)?;
    write_json(common.out.as_ref(), "exponents.json", &out)
}

fn decay_run(
    common: &CommonArgs,
    args: &DecayArgs,
    poly: &Polynomial,
    seed: u64,
) -> Result<oscint::DecayFit> {
    let sp = patch_for(common, poly.clone())?;
    let cfg = DecayConfig {
        mag_min: args.xi_min,
        mag_max: args.xi_max,
        n_mags: args.mags,
        n_dirs: args.dirs,
        seed,
        quad: quad_config(common),
    };
    oscint::decay_fit(&sp, &cfg).map_err(|e| fail(1, e.to_string()))
}

fn cmd_decay(
    common: &CommonArgs,
    height_args: &HeightArgs,
    args: &DecayArgs,
) -> Result<()> {
    let poly = parse_poly_arg(&common.poly)?;
    let _ = support_of(&poly)?;
    let height = run_height(&poly, height_args, common.seed)?;
    let fit = decay_run(common, args, &poly, common.seed)?;
    let cfg = RunConfig::new("decay", common).with_height(height_args).with_decay(args);
    let warnings = hypothesis_warnings(&poly, common.bump_radius);
    let out = report::decay_json(&fit, Some(&height.h), poly.to_string(), cfg.json(), warnings);
    print_report(&out, common.json)?;
    write_json(common.out.as_ref(), "decay.json", &out)?;
    if let Some(dir) = &common.out {
        write_file(dir, "decay.csv", &report::decay_csv(&fit.samples, &cfg.json()))?;
    }
    if fit.budget_exhausted {
        return Err(fail(4, "quadrature budget exceeded; partial results flagged in the report"));
    }
    Ok(())
}

fn knapp_file_stem(p: &Rat) -> String {
    format!("knapp_p_{}", rat_to_string(p).replace('/', "_"))
}

fn cmd_knapp(common: &CommonArgs, p_text: &str, args: &KnappArgs) -> Result<()> {
    let poly = parse_poly_arg(&common.poly)?;
    let support = support_of(&poly)?;
    let p = parse_rational(p_text)?;
    let dr = newton::distance_of_support(&support);
    let scales = knapp_scales(args)?;
    let fam = restrict::knapp_family(&poly, &dr, &scales, args.cap_c)
        .map_err(|e| fail(1, e.to_string()))?;
    let sp = patch_for(common, poly.clone())?;
    let rep = restrict::knapp_scan(&sp, &fam, &p).map_err(|e| fail(1, e.to_string()))?;
    let cfg = RunConfig::new("knapp", common).with_knapp(args, Some(p_text));
    let warnings = hypothesis_warnings(&poly, common.bump_radius);
    let out = report::knapp_json(&rep, &fam, poly.to_string(), cfg.json(), warnings);
    print_report(&out, common.json)?;
    write_json(common.out.as_ref(), &format!("{}.json", knapp_file_stem(&p)), &out)?;
    if let Some(dir) = &common.out {
        write_file(
            dir,
            &format!("{}.csv", knapp_file_stem(&p)),
            &report::knapp_csv(&rep.samples, &cfg.json()),
        )?;
    }
    Ok(())
}

fn cmd_verify(
    common: &CommonArgs,
    height_args: &HeightArgs,
    decay_args: &DecayArgs,
    knapp_args: &KnappArgs,
) -> Result<()> {
    let poly = parse_poly_arg(&common.poly)?;
    let _ = support_of(&poly)?;
    let mut warnings = hypothesis_warnings(&poly, common.bump_radius);

    // height and exponents
    let height = run_height(&poly, height_args, common.seed)?;
    let exps = adapt::exponent_report(&height.h, &height.d_original);

    // work in the maximizing coordinates: the surface measure is rotation
    // invariant and the Knapp crossing is exact exactly when d = h
    let adapted = if height.h > height.d_original {
        warnings.push("surface rotated into adapted coordinates for decay and Knapp runs".into());
        poly.compose_linear_pruned(&height.maximizer, adapt::ROTATION_PRUNE_REL)
            .map_err(|e| fail(1, e.to_string()))?
    } else {
        poly.clone()
    };
    let adapted_dr = newton::distance_of_support(&support_of(&adapted)?);

    let cfg = RunConfig::new("verify", common)
        .with_height(height_args)
        .with_decay(decay_args)
        .with_knapp(knapp_args, None);

    // decay conformance against 1/h
    let fit = decay_run(common, decay_args, &adapted, common.seed)?;
    let decay_out =
        report::decay_json(&fit, Some(&height.h), adapted.to_string(), cfg.json(), Vec::new());

    // Knapp bracket around p*
    let scales = knapp_scales(knapp_args)?;
    let fam = restrict::knapp_family(&adapted, &adapted_dr, &scales, knapp_args.cap_c)
        .map_err(|e| fail(1, e.to_string()))?;
    let sp = patch_for(common, adapted.clone())?;
    let tenth = rat(1, 10);
    let p_values =
        [&exps.p_star - &tenth, exps.p_star.clone(), &exps.p_star + &tenth];
    let expected = [Verdict::Bounded, Verdict::Critical, Verdict::Divergent];
    let mut knapp_out = Vec::new();
    let mut verdicts_ok = true;
    for (p, want) in p_values.iter().zip(expected) {
        let rep = restrict::knapp_scan(&sp, &fam, p).map_err(|e| fail(1, e.to_string()))?;
        verdicts_ok &= rep.verdict == want;
        if let Some(dir) = &common.out {
            write_file(
                dir,
                &format!("{}.csv", knapp_file_stem(p)),
                &report::knapp_csv(&rep.samples, &cfg.json()),
            )?;
        }
        knapp_out.push(report::knapp_json(&rep, &fam, adapted.to_string(), cfg.json(), Vec::new()));
    }

    let conforms = report::decay_conforms(&fit, &height.h);
    let pass = conforms && verdicts_ok;
    if fit.budget_exhausted {
        warnings.push("decay sweep hit the quadrature budget; fit uses the surviving samples".into());
    }
    let out = VerifyJson {
        schema: report::SCHEMA_VERSION.into(),
        config: cfg.json(),
        poly: poly.to_string(),
        exponents: report::exponents_json(
            Some(&height),
            &exps,
            poly.to_string(),
            cfg.json(),
            Vec::new(),
        ),
        decay: decay_out,
        knapp: knapp_out,
        expected_verdicts: expected.iter().map(|v| v.as_str().to_string()).collect(),
        pass,
        warnings,
    };
    print_report(&out, common.json)?;
    write_json(common.out.as_ref(), "verify.json", &out)?;
    if let Some(dir) = &common.out {
        write_file(dir, "decay.csv", &report::decay_csv(&fit.samples, &cfg.json()))?;
    }
    Ok(())
}

fn run() -> Result<()> {
    let cli = Cli::parse();
    let common = match &cli.command {
        Command::Parse(c) | Command::Newton(c) => c,
        Command::Height { common, .. }
        | Command::Exponents { common, .. }
        | Command::Decay { common, .. }
        | Command::Knapp { common, .. }
        | Command::Verify { common, .. } => common,
    };
    let threads = common.threads.unwrap_or_else(|| {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    });
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .ok(); // already-built pool (e.g. in tests) is fine

    match &cli.command {
        Command::Parse(c) => cmd_parse(c),
        Command::Newton(c) => cmd_newton(c),
        Command::Height { common, height } => cmd_height(common, height),
        Command::Exponents { common, height, h_override } => {
            cmd_exponents(common, height, h_override.as_deref())
        }
        Command::Decay { common, height, decay } => cmd_decay(common, height, decay),
        Command::Knapp { common, p, knapp } => cmd_knapp(common, p, knapp),
        Command::Verify { common, height, decay, knapp } => {
            cmd_verify(common, height, decay, knapp)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            let code = err.downcast_ref::<CliError>().map(|e| e.code).unwrap_or(1);
            ExitCode::from(code)
        }
    }
}
