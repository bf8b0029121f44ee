//! Batch experiment driver for the rho-Baskakov operator laboratory.
//!
//! Exit codes: 0 all verdicts pass, 1 verdict failure, 2 usage error,
//! 3 numeric error. Grid parallelism is delegated to the library (rayon);
//! cap threads with RAYON_NUM_THREADS.

mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use baskakov_lab::astat::{
    a_density, astat_korovkin_demo, astat_limit, regularity_check, AstatOutcome, IndexSet,
    SummabilityMatrix,
};
use baskakov_lab::moments::{
    central_moment_closed, central_moment_series, fourth_moment_order_check, raw_moment_closed,
    raw_moment_series,
};
use baskakov_lab::operator::{apply, OperatorFamily, OperatorSpec, TruncationPolicy};
use baskakov_lab::rho::{self, RhoMap};
use baskakov_lab::suite;
use baskakov_lab::weighted::{
    function_by_label, holhos_bound, holhos_delta, measure_deviations, phi_growth_constant,
    quantitative_bound_check, voronovskaya_check, ModulusVariant, SupGrid, Verdict,
};

use config::ConfigFile;
use report::Report;

#[derive(Parser)]
#[command(
    name = "baskakov-lab",
    version,
    about = "Numerical experiments with rho-generalized Baskakov operators"
)]
struct Cli {
    /// Optional flat key=value config file; CLI flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write the structured report to this path (.json or .csv).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an operator family applied to a test function on a grid.
    Evaluate(EvaluateArgs),
    /// Closed-form vs series moments, and the fourth-moment order check.
    Moments(MomentsArgs),
    /// Weighted error norms, delta_n, and the quantitative bound.
    Bound(BoundArgs),
    /// Voronovskaya limit extrapolation.
    Voronovskaya(VoronovskayaArgs),
    /// Summability-matrix experiments: regularity, density, limits, demo.
    Astat(AstatArgs),
    /// Run the full verification suite (or a subset).
    Suite(SuiteArgs),
}

#[derive(Args)]
struct EvaluateArgs {
    /// classical-baskakov | rho-baskakov | rho-szasz
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    rho: Option<String>,
    /// Parameter for the scaled-exp family.
    #[arg(long)]
    rho_param: Option<f64>,
    #[arg(long, short)]
    n: Option<u64>,
    /// e0 | rho | rho2 | sin-rho | exp-neg-rho
    #[arg(long, short)]
    f: Option<String>,
    /// Evaluation point(s); repeatable.
    #[arg(long, short)]
    x: Vec<f64>,
    /// Grid upper end when no explicit -x is given.
    #[arg(long)]
    x_max: Option<f64>,
    /// Grid size when no explicit -x is given.
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    mass_tol: Option<f64>,
    #[arg(long)]
    k_max: Option<usize>,
}

#[derive(Args)]
struct MomentsArgs {
    #[arg(long)]
    rho: Option<String>,
    #[arg(long)]
    rho_param: Option<f64>,
    /// raw | central
    #[arg(long)]
    kind: Option<String>,
    /// Moment order (raw 0..=3 closed, series 0..=4).
    #[arg(long, short)]
    order: Option<u8>,
    /// Comma-separated operator indices.
    #[arg(long)]
    n_list: Option<String>,
    #[arg(long, short)]
    x: Option<f64>,
    /// Matching tolerance per comparison (abs+rel).
    #[arg(long)]
    tol: Option<f64>,
    /// Run the n²·mu4 order check over the n list instead.
    #[arg(long)]
    order_check: bool,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long)]
    rho: Option<String>,
    #[arg(long)]
    rho_param: Option<f64>,
    #[arg(long)]
    n_list: Option<String>,
    /// Comma-separated function labels.
    #[arg(long)]
    f_list: Option<String>,
    #[arg(long)]
    x_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// sum | paper-literal
    #[arg(long)]
    variant: Option<String>,
}

#[derive(Args)]
struct VoronovskayaArgs {
    #[arg(long)]
    rho: Option<String>,
    #[arg(long)]
    rho_param: Option<f64>,
    #[arg(long, short)]
    f: Option<String>,
    #[arg(long, short)]
    x: Option<f64>,
    #[arg(long)]
    n_list: Option<String>,
    #[arg(long)]
    tol_rel: Option<f64>,
    #[arg(long)]
    tol_abs: Option<f64>,
}

#[derive(Args)]
struct AstatArgs {
    /// regularity | density | limit | demo
    #[arg(long)]
    task: Option<String>,
    /// cesaro | identity | banded
    #[arg(long)]
    matrix: Option<String>,
    #[arg(long)]
    band_width: Option<u64>,
    /// Index set for density: naturals | evens | squares
    #[arg(long)]
    set: Option<String>,
    /// Sequence for limit: harmonic | square-indicator
    #[arg(long)]
    sequence: Option<String>,
    #[arg(long)]
    target: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    j_list: Option<String>,
    #[arg(long)]
    horizon: Option<u64>,
    #[arg(long)]
    n_max: Option<u64>,
    #[arg(long)]
    rho: Option<String>,
    #[arg(long)]
    rho_param: Option<f64>,
}

#[derive(Args)]
struct SuiteArgs {
    /// Comma-separated criterion ids (1..=9); empty runs everything.
    #[arg(long)]
    only: Option<String>,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<baskakov_lab::Error> for Failure {
    fn from(e: baskakov_lab::Error) -> Self {
        Failure {
            code: e.exit_code() as u8,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: 3,
            message: format!("io: {e}"),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: msg.into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let started = Instant::now();
    let cfg = match &cli.config {
        Some(path) => ConfigFile::load(path).map_err(usage)?,
        None => ConfigFile::empty(),
    };

    let mut report = match &cli.command {
        Command::Evaluate(args) => cmd_evaluate(args, &cfg)?,
        Command::Moments(args) => cmd_moments(args, &cfg)?,
        Command::Bound(args) => cmd_bound(args, &cfg)?,
        Command::Voronovskaya(args) => cmd_voronovskaya(args, &cfg)?,
        Command::Astat(args) => cmd_astat(args, &cfg)?,
        Command::Suite(args) => cmd_suite(args, &cfg)?,
    };
    report.runtime_ms = started.elapsed().as_millis() as u64;

    print!("{}", report.render_table());
    if let Some(path) = &cli.out {
        report.write(path)?;
    }
    Ok(if report.all_pass() { 0 } else { 1 })
}

fn parse_u64_list(s: &str) -> Result<Vec<u64>, Failure> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<u64>()
                .map_err(|_| usage(format!("bad integer '{p}' in list")))
        })
        .collect()
}

fn resolve_rho(
    name: Option<String>,
    param: Option<f64>,
    cfg: &ConfigFile,
) -> Result<RhoMap<f64>, Failure> {
    let name = name
        .or_else(|| cfg.get("rho"))
        .unwrap_or_else(|| "identity".to_string());
    let param = match param {
        Some(p) => Some(p),
        None => cfg.get_parsed::<f64>("rho-param").map_err(usage)?,
    };
    Ok(rho::by_name(&name, param)?)
}

fn policy_from(mass_tol: Option<f64>, k_max: Option<usize>, growth: f64) -> TruncationPolicy<f64> {
    let mut policy = TruncationPolicy::default().with_growth_bound(growth);
    if let Some(m) = mass_tol {
        policy = policy.with_mass_tol(m);
    }
    if let Some(k) = k_max {
        policy = policy.with_k_max(k);
    }
    policy
}

fn cmd_evaluate(args: &EvaluateArgs, cfg: &ConfigFile) -> Result<Report, Failure> {
    let family: OperatorFamily = args
        .family
        .clone()
        .or_else(|| cfg.get("family"))
        .unwrap_or_else(|| "rho-baskakov".to_string())
        .parse()?;
    let rho = resolve_rho(args.rho.clone(), args.rho_param, cfg)?;
    let n = match args.n {
        Some(n) => n,
        None => cfg
            .get_parsed::<u64>("n")
            .map_err(usage)?
            .ok_or_else(|| usage("missing --n"))?,
    };
    let label = args
        .f
        .clone()
        .or_else(|| cfg.get("f"))
        .unwrap_or_else(|| "e0".to_string());

    let registration = rho::grid_for(&rho);
    let cat = function_by_label(&rho, &registration, &label)?;
    let mass_tol = match args.mass_tol {
        Some(m) => Some(m),
        None => cfg.get_parsed("mass-tol").map_err(usage)?,
    };
    let policy = policy_from(mass_tol, args.k_max, cat.function.growth_constant());
    let spec = OperatorSpec::new(family, n, rho.clone())?;

    let xs: Vec<f64> = if args.x.is_empty() {
        let x_max = args.x_max.unwrap_or_else(|| rho.domain_hint());
        let points = args.points.unwrap_or(9);
        rho::default_grid(x_max, points)
    } else {
        args.x.clone()
    };

    let mut report = Report::new("evaluate");
    report.input("family", family);
    report.input("rho", rho.name());
    report.input("n", n);
    report.input("f", &label);
    report.input("mass_tol", report::format_g(policy.mass_tol));
    for &x in &xs {
        if x < 0.0 {
            return Err(usage(format!("x must be >= 0, got {x}")));
        }
        let eval = apply(&spec, |t| cat.function.eval(t), x, &policy)?;
        report.row(&label, x, eval.value);
        report.row("tail_bound", x, eval.tail_bound);
    }
    Ok(report)
}

fn cmd_moments(args: &MomentsArgs, cfg: &ConfigFile) -> Result<Report, Failure> {
    let rho = resolve_rho(args.rho.clone(), args.rho_param, cfg)?;
    let kind = args
        .kind
        .clone()
        .or_else(|| cfg.get("kind"))
        .unwrap_or_else(|| "raw".to_string());
    let order = args.order.unwrap_or(2);
    let n_list = parse_u64_list(
        &args
            .n_list
            .clone()
            .or_else(|| cfg.get("n-list"))
            .unwrap_or_else(|| "1,5,10,100".to_string()),
    )?;
    let x = args.x.unwrap_or(1.0);
    let tol = args.tol.unwrap_or(1e-9);
    let policy = TruncationPolicy::default();

    let mut report = Report::new("moments");
    report.input("rho", rho.name());
    report.input("kind", &kind);
    report.input("x", x);
    report.input("tol", report::format_g(tol));

    if args.order_check {
        report.input("order", "4 (central, n²-scaled)");
        let check = fourth_moment_order_check(x, &rho, &n_list, 0.10, &policy)?;
        for &(n, s) in &check.scaled {
            report.row("n2_mu4", n as f64, s);
        }
        for (w, &r) in check.scaled.windows(2).zip(&check.ratios) {
            report.row("ratio", w[1].0 as f64, r);
        }
        report.verdict(
            "fourth-moment-order",
            check.pass,
            format!("limit {}", report::format_g(check.limit)),
        );
        return Ok(report);
    }

    report.input("order", order);
    let has_closed = match kind.as_str() {
        "raw" => order <= 3,
        "central" => (1..=2).contains(&order),
        other => return Err(usage(format!("unknown kind '{other}'"))),
    };
    let mut worst: f64 = 0.0;
    for &n in &n_list {
        let (closed, series) = match kind.as_str() {
            "raw" => {
                let closed = if has_closed {
                    Some(raw_moment_closed(order, n, x, &rho)?)
                } else {
                    None
                };
                (closed, raw_moment_series(order, n, x, &rho, &policy)?)
            }
            _ => {
                let closed = if has_closed {
                    Some(central_moment_closed(order, n, x, &rho)?)
                } else {
                    None
                };
                (closed, central_moment_series(order, n, x, &rho, &policy)?)
            }
        };
        report.row("series", n as f64, series.value);
        report.row("tail_bound", n as f64, series.tail_bound);
        if let Some(c) = closed {
            report.row("closed", n as f64, c);
            let err = (series.value - c).abs();
            worst = worst.max(err / (tol + tol * c.abs()));
            report.row("abs_diff", n as f64, err);
        }
    }
    if has_closed {
        report.verdict(
            "series-matches-closed",
            worst <= 1.0,
            format!("worst err/tol = {}", report::format_g(worst)),
        );
    }
    Ok(report)
}

fn cmd_bound(args: &BoundArgs, cfg: &ConfigFile) -> Result<Report, Failure> {
    let rho = resolve_rho(args.rho.clone(), args.rho_param, cfg)?;
    let n_list = parse_u64_list(
        &args
            .n_list
            .clone()
            .or_else(|| cfg.get("n-list"))
            .unwrap_or_else(|| "4,16,64,256".to_string()),
    )?;
    let labels: Vec<String> = args
        .f_list
        .clone()
        .or_else(|| cfg.get("f-list"))
        .unwrap_or_else(|| "e0,rho,rho2,sin-rho,exp-neg-rho".to_string())
        .split(',')
        .map(|s| s.trim().to_string())
        .collect();
    let variant: ModulusVariant = args
        .variant
        .clone()
        .or_else(|| cfg.get("variant"))
        .unwrap_or_else(|| "sum".to_string())
        .parse()?;
    let x_max = args.x_max.unwrap_or_else(|| rho.domain_hint());
    let points = args.points.unwrap_or(192);

    let grid = SupGrid::geometric(x_max, points);
    let norm_grid = SupGrid::geometric(x_max, 512);
    let registration = rho::grid_for(&rho);
    let policy = TruncationPolicy::default();

    let mut report = Report::new("bound");
    report.input("rho", rho.name());
    report.input("x_max", report::format_g(x_max));
    report.input("points", points);
    report.input(
        "variant",
        match variant {
            ModulusVariant::Sum => "sum",
            ModulusVariant::PaperLiteral => "paper-literal",
        },
    );

    for &n in &n_list {
        let dev = measure_deviations(n, &rho, &norm_grid)?;
        let delta = holhos_delta(&dev);
        report.row("a_n", n as f64, dev.a);
        report.row("b_n", n as f64, dev.b);
        report.row("c_n", n as f64, dev.c);
        report.row("c_bound", n as f64, 2.0 / n as f64);
        report.row("d_n", n as f64, dev.d);
        report.row("d_bound", n as f64, 10.0 / n as f64);
        report.row("delta_n", n as f64, delta);
        // Coefficient (7+4a+2c) of the error bound, for the record.
        report.row("bound_coeff", n as f64, holhos_bound(&dev, 1.0, 0.0));
        let k_n = phi_growth_constant(n, &rho, &grid, &policy)?;
        report.row("K_n", n as f64, k_n);

        report.verdict(
            format!("c_n<=2/n @ n={n}"),
            dev.c <= 2.0 / n as f64,
            format!("c_n = {}", report::format_g(dev.c)),
        );
        report.verdict(
            format!("d_n<=10/n @ n={n}"),
            dev.d <= 10.0 / n as f64,
            format!("d_n = {}", report::format_g(dev.d)),
        );

        for label in &labels {
            let cat = function_by_label(&rho, &registration, label)?;
            let check = quantitative_bound_check(&cat.function, n, &rho, &grid, &policy, variant)?;
            report.row(format!("lhs_{label}"), n as f64, check.lhs);
            report.row(format!("rhs_{label}"), n as f64, check.rhs);
            report.verdict(
                format!("bound {label} @ n={n}"),
                check.pass,
                format!(
                    "lhs {} <= rhs {}",
                    report::format_g(check.lhs),
                    report::format_g(check.rhs)
                ),
            );
        }
    }
    Ok(report)
}

fn cmd_voronovskaya(args: &VoronovskayaArgs, cfg: &ConfigFile) -> Result<Report, Failure> {
    let rho = resolve_rho(args.rho.clone(), args.rho_param, cfg)?;
    let label = args
        .f
        .clone()
        .or_else(|| cfg.get("f"))
        .unwrap_or_else(|| "exp-neg-rho".to_string());
    let x = args.x.unwrap_or(1.0);
    let n_list = parse_u64_list(
        &args
            .n_list
            .clone()
            .or_else(|| cfg.get("n-list"))
            .unwrap_or_else(|| "50,100,200,400,800".to_string()),
    )?;
    let tol_rel = args.tol_rel.unwrap_or(0.01);
    let tol_abs = args.tol_abs.unwrap_or(1e-4);

    let registration = rho::grid_for(&rho);
    let cat = function_by_label(&rho, &registration, &label)?;
    let d2 = cat.pullback_second_derivative.clone().ok_or_else(|| {
        usage(format!(
            "function '{label}' has no registered pullback second derivative"
        ))
    })?;
    let policy = TruncationPolicy::default();
    let check = voronovskaya_check(
        &rho,
        &cat.function,
        |u| d2(u),
        x,
        &n_list,
        &policy,
        tol_rel,
        tol_abs,
    )?;

    let mut report = Report::new("voronovskaya");
    report.input("rho", rho.name());
    report.input("f", &label);
    report.input("x", x);
    report.input("tol_rel", report::format_g(tol_rel));
    report.input("tol_abs", report::format_g(tol_abs));
    for &(n, g, noise) in &check.samples {
        report.row("g_n", n as f64, g);
        report.row("noise", n as f64, noise);
    }
    report.row("limit", 0.0, check.limit);
    report.row("target", 0.0, check.target);
    let (pass, detail) = match check.verdict {
        Verdict::Pass | Verdict::Fail => (
            check.verdict == Verdict::Pass,
            format!(
                "limit {} vs target {}",
                report::format_g(check.limit),
                report::format_g(check.target)
            ),
        ),
        Verdict::Inconclusive => (false, "tail noise dominates; tighten policy".to_string()),
    };
    report.verdict("voronovskaya-limit", pass, detail);
    Ok(report)
}

fn cmd_astat(args: &AstatArgs, cfg: &ConfigFile) -> Result<Report, Failure> {
    let task = args
        .task
        .clone()
        .or_else(|| cfg.get("task"))
        .unwrap_or_else(|| "demo".to_string());
    let matrix_name = args
        .matrix
        .clone()
        .or_else(|| cfg.get("matrix"))
        .unwrap_or_else(|| "cesaro".to_string());
    let matrix = SummabilityMatrix::<f64>::by_name(&matrix_name, args.band_width)?;
    let horizon = args.horizon.unwrap_or(100_000);
    let j_list = parse_u64_list(
        &args
            .j_list
            .clone()
            .or_else(|| cfg.get("j-list"))
            .unwrap_or_else(|| "10,100,1000,10000,100000".to_string()),
    )?;

    let mut report = Report::new("astat");
    report.input("task", &task);
    report.input("matrix", matrix.name());
    report.input("horizon", horizon);

    match task.as_str() {
        "regularity" => {
            let check =
                regularity_check(&matrix, *j_list.last().unwrap_or(&10_000), horizon, 1e-9)?;
            for &(j, s) in &check.row_sums {
                report.row("row_sum", j as f64, s);
            }
            for &(n, v) in &check.column_finals {
                report.row("column_final", n as f64, v);
            }
            report.row("abs_row_sum_max", 0.0, check.abs_row_sum_max);
            report.verdict("rows->1", check.rows_pass, "row sums approach 1");
            report.verdict("columns->0", check.columns_pass, "sampled columns die off");
            report.verdict(
                "bounded",
                check.bounded_pass,
                format!(
                    "sup_j Σ|a(j,n)| = {}",
                    report::format_g(check.abs_row_sum_max)
                ),
            );
        }
        "density" => {
            let set_name = args
                .set
                .clone()
                .or_else(|| cfg.get("set"))
                .unwrap_or_else(|| "squares".to_string());
            let set = IndexSet::by_name(&set_name)?;
            report.input("set", set.name());
            let densities = a_density(&matrix, &set, &j_list, horizon)?;
            for &(j, v) in &densities {
                report.row("density", j as f64, v);
            }
            let trending = densities.len() < 2 || densities.last().unwrap().1 <= densities[0].1;
            report.verdict(
                "density-trend",
                trending,
                format!(
                    "final density {}",
                    report::format_g(densities.last().unwrap().1)
                ),
            );
        }
        "limit" => {
            let seq_name = args
                .sequence
                .clone()
                .or_else(|| cfg.get("sequence"))
                .unwrap_or_else(|| "harmonic".to_string());
            let seq: Box<dyn Fn(u64) -> f64> = match seq_name.as_str() {
                "harmonic" => Box::new(|n| 1.0 / n as f64),
                "square-indicator" => {
                    let squares = IndexSet::perfect_squares();
                    Box::new(move |n| if squares.contains(n) { 1.0 } else { 0.0 })
                }
                other => return Err(usage(format!("unknown sequence '{other}'"))),
            };
            let target = args.target.unwrap_or(0.0);
            let epsilon = args.epsilon.unwrap_or(0.5);
            report.input("sequence", &seq_name);
            report.input("target", target);
            report.input("epsilon", epsilon);
            let verdict =
                astat_limit(&matrix, seq.as_ref(), target, epsilon, &j_list, horizon, 0.01)?;
            for &(j, t) in &verdict.tail_masses {
                report.row("tail_mass", j as f64, t);
            }
            report.verdict(
                "astat-limit",
                verdict.verdict == AstatOutcome::Converges,
                format!("{:?}", verdict.verdict),
            );
        }
        "demo" => {
            let rho = resolve_rho(args.rho.clone(), args.rho_param, cfg)?;
            let n_max = args.n_max.unwrap_or_else(|| horizon.max(1_000));
            report.input("rho", rho.name());
            report.input("n_max", n_max);
            let j_demo: Vec<u64> = j_list.iter().copied().filter(|&j| j <= n_max).collect();
            let demo = astat_korovkin_demo(&rho, n_max, &matrix, &j_demo)?;
            report.row("error_constant", 0.0, demo.error_constant);
            for v in &demo.unperturbed {
                for &(j, t) in &v.tail_masses {
                    report.row(
                        format!("tail_eps_{}", report::format_g(v.epsilon)),
                        j as f64,
                        t,
                    );
                }
            }
            for &(j, t) in &demo.perturbed.tail_masses {
                report.row("tail_perturbed", j as f64, t);
            }
            // Under the identity matrix the perturbed sequence must diverge;
            // under a regular averaging matrix it converges statistically.
            let expect = if matrix.name() == "identity" {
                AstatOutcome::Diverges
            } else {
                AstatOutcome::Converges
            };
            report.verdict(
                "korovkin-demo",
                demo.pass(expect),
                format!(
                    "unperturbed converge, perturbed {:?} (expected {:?}), {} witnesses",
                    demo.perturbed.verdict, expect, demo.witness_count
                ),
            );
        }
        other => return Err(usage(format!("unknown task '{other}'"))),
    }
    Ok(report)
}

fn cmd_suite(args: &SuiteArgs, cfg: &ConfigFile) -> Result<Report, Failure> {
    let ids: Vec<u8> = match args.only.clone().or_else(|| cfg.get("only")) {
        Some(s) => s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u8>()
                    .map_err(|_| usage(format!("bad criterion id '{p}'")))
            })
            .collect::<Result<_, _>>()?,
        None => Vec::new(),
    };

    let outcomes = suite::run_selected(&ids)?;
    let mut report = Report::new("suite");
    report.input("seed", format!("{:#x}", suite::PROPERTY_SEED));
    if !ids.is_empty() {
        report.input(
            "only",
            ids.iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(","),
        );
    }
    for outcome in &outcomes {
        println!("{}", outcome.summary_line());
        for line in &outcome.details {
            println!("    {line}");
        }
        report.row(
            format!("criterion_{}", outcome.id),
            outcome.id as f64,
            if outcome.pass { 1.0 } else { 0.0 },
        );
        report.verdict(
            format!("criterion {} {}", outcome.id, outcome.name),
            outcome.pass,
            outcome
                .details
                .iter()
                .map(|d| d.trim())
                .collect::<Vec<_>>()
                .join("; "),
        );
    }
    Ok(report)
}
