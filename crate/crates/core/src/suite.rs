//! The headless verification suite: nine criteria covering moment
//! identities, weighted error norms, the quantitative bound, Voronovskaya
//! asymptotics, the classical reduction, and A-statistical convergence.
//!
//! Each criterion returns a [`CriterionOutcome`] with per-check detail lines
//! and its wall-clock duration; the runtime budgets are part of the pass
//! condition. The randomized criteria run from a fixed seed recorded in the
//! outcome so reports are reproducible byte for byte.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::astat::{
    a_density, astat_korovkin_demo, regularity_check, AstatOutcome, IndexSet, SummabilityMatrix,
};
use crate::error::Result;
use crate::moments::{fourth_moment_order_check, raw_moment_closed, raw_moment_series};
use crate::operator::{
    apply, build_weight_table, classical_equivalence_check, OperatorFamily, OperatorSpec,
    TruncationPolicy,
};
use crate::rho::{builtin_catalog, default_grid, identity, RhoMap};
use crate::weighted::{
    function_catalog, measure_deviations, monotone_nondecreasing_check, omega_rho,
    quantitative_bound_check, voronovskaya_check, HolhosDeviations, ModulusVariant, SupGrid,
    Verdict, holhos_delta,
};

/// Seed for every randomized check in the suite.
pub const PROPERTY_SEED: u64 = 0x00B1_5CA1_AB5E_ED01;

#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub details: Vec<String>,
    pub duration: Duration,
    pub budget: Option<Duration>,
}

impl CriterionOutcome {
    pub fn summary_line(&self) -> String {
        let status = if self.pass { "PASS" } else { "FAIL" };
        let budget = match self.budget {
            Some(b) => format!(" (budget {:.0?})", b),
            None => String::new(),
        };
        format!(
            "criterion {} {} — {} [{:.1?}{}]",
            self.id, status, self.name, self.duration, budget
        )
    }
}

struct Recorder {
    pass: bool,
    details: Vec<String>,
}

impl Recorder {
    fn new() -> Self {
        Recorder {
            pass: true,
            details: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, line: impl Into<String>) {
        let line = line.into();
        if !ok {
            self.pass = false;
            self.details.push(format!("FAIL {line}"));
        } else {
            self.details.push(format!("ok   {line}"));
        }
    }

    fn note(&mut self, line: impl Into<String>) {
        self.details.push(format!("     {}", line.into()));
    }

    fn finish(
        mut self,
        id: u8,
        name: &'static str,
        started: Instant,
        budget: Option<Duration>,
    ) -> CriterionOutcome {
        let duration = started.elapsed();
        if let Some(b) = budget {
            let ok = duration <= b;
            if !ok {
                self.pass = false;
            }
            self.details
                .push(format!("{} runtime {duration:.1?} within {b:.0?}", if ok { "ok  " } else { "FAIL" }));
        }
        CriterionOutcome {
            id,
            name,
            pass: self.pass,
            details: self.details,
            duration,
            budget,
        }
    }
}

fn sweep_points(rho: &RhoMap<f64>) -> Vec<f64> {
    default_grid(rho.domain_hint(), 19)
}

fn within(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

/// Criterion 1: series moments match the closed forms for m ≤ 2 across the
/// catalog sweep, 1e−9 abs+rel, under 5 s.
pub fn criterion_1_moment_identities() -> Result<CriterionOutcome> {
    let started = Instant::now();
    let mut rec = Recorder::new();
    let policy = TruncationPolicy::<f64>::default();

    let mut worst: f64 = 0.0;
    let mut count = 0usize;
    for rho in builtin_catalog::<f64>() {
        for &n in &[1u64, 5, 10, 100] {
            for &x in &sweep_points(&rho) {
                for m in 0..=2u8 {
                    let closed = raw_moment_closed(m, n, x, &rho)?;
                    let series = raw_moment_series(m, n, x, &rho, &policy)?;
                    let tol = 1e-9 + 1e-9 * closed.abs();
                    let err = (series.value - closed).abs();
                    worst = worst.max(err / tol.max(f64::MIN_POSITIVE));
                    count += 1;
                    if err > tol {
                        rec.check(
                            false,
                            format!(
                                "{} n={n} x={x} m={m}: series={} closed={closed}",
                                rho.name(),
                                series.value
                            ),
                        );
                    }
                }
            }
        }
    }
    rec.check(
        worst <= 1.0,
        format!("{count} moment comparisons, worst err/tol = {worst:.3e}"),
    );

    let spot = raw_moment_closed(2, 10, 2.0, &identity::<f64>())?;
    rec.check(within(spot, 4.6, 1e-12), format!("V(ρ²;2) at n=10 = {spot}"));

    Ok(rec.finish(
        1,
        "moment identities (orders 0..2)",
        started,
        Some(Duration::from_secs(5)),
    ))
}

/// Criterion 2: the third raw moment matches the spelled-out formula
/// ρ/n² + 3(1+n)ρ²/n² + (2+3n+n²)ρ³/n² on the same sweep.
pub fn criterion_2_third_moment() -> Result<CriterionOutcome> {
    let started = Instant::now();
    let mut rec = Recorder::new();
    let policy = TruncationPolicy::<f64>::default();

    let mut worst: f64 = 0.0;
    let mut count = 0usize;
    for rho in builtin_catalog::<f64>() {
        for &n in &[1u64, 5, 10, 100] {
            let n_f = n as f64;
            for &x in &sweep_points(&rho) {
                let r = rho.rho(x);
                // Independent spelling of the closed form.
                let formula = r / (n_f * n_f)
                    + 3.0 * (1.0 + n_f) * r * r / (n_f * n_f)
                    + (2.0 + 3.0 * n_f + n_f * n_f) * r.powi(3) / (n_f * n_f);
                let series = raw_moment_series(3, n, x, &rho, &policy)?;
                let tol = 1e-9 + 1e-9 * formula.abs();
                let err = (series.value - formula).abs();
                worst = worst.max(err / tol);
                count += 1;
                if err > tol {
                    rec.check(
                        false,
                        format!("{} n={n} x={x}: series={}", rho.name(), series.value),
                    );
                }
            }
        }
    }
    rec.check(
        worst <= 1.0,
        format!("{count} third-moment comparisons, worst err/tol = {worst:.3e}"),
    );

    Ok(rec.finish(2, "third raw moment formula", started, None))
}

/// Criterion 3: c_n ≤ 2/n with n·c_n = (1+√2)/2 ± 1e−6 at the identity, and
/// d_n ≤ 10/n, for n in {4, …, 1024} across the catalog.
pub fn criterion_3_weighted_error_norms() -> Result<CriterionOutcome> {
    let started = Instant::now();
    let mut rec = Recorder::new();

    let half_one_plus_sqrt2 = (1.0 + 2f64.sqrt()) / 2.0;
    let mut worst_c_scale: f64 = 0.0;
    let mut identity_dev: f64 = 0.0;
    for rho in builtin_catalog::<f64>() {
        let grid = SupGrid::geometric(rho.domain_hint(), 512);
        let mut n = 4u64;
        while n <= 1024 {
            let dev = measure_deviations(n, &rho, &grid)?;
            let n_f = n as f64;
            worst_c_scale = worst_c_scale.max(dev.c * n_f / 2.0);
            if dev.c > 2.0 / n_f || dev.d > 10.0 / n_f {
                rec.check(
                    false,
                    format!("{} n={n}: c={} d={}", rho.name(), dev.c, dev.d),
                );
            }
            if rho.name() == "identity" {
                identity_dev = identity_dev.max((dev.c * n_f - half_one_plus_sqrt2).abs());
            }
            n *= 2;
        }
    }
    rec.check(
        worst_c_scale <= 1.0,
        format!("c_n·n/2 max = {worst_c_scale:.6} (bound 1)"),
    );
    rec.check(
        identity_dev <= 1e-6,
        format!("identity n·c_n vs (1+√2)/2: max dev = {identity_dev:.3e}"),
    );

    Ok(rec.finish(3, "weighted error norms c_n, d_n", started, None))
}

/// Criterion 4: the δ_n formula at (0, 0, 2/n, 10/n) equals 2√2/√n + 16/n to
/// machine precision for n ≤ 10³, and is exactly 3 at n = 8.
pub fn criterion_4_delta_consistency() -> Result<CriterionOutcome> {
    let started = Instant::now();
    let mut rec = Recorder::new();

    let mut worst: f64 = 0.0;
    for n in 1u64..=1000 {
        let n_f = n as f64;
        let delta = holhos_delta(&HolhosDeviations::<f64>::baskakov_bounds(n));
        let closed = 2.0 * 2f64.sqrt() / n_f.sqrt() + 16.0 / n_f;
        worst = worst.max((delta - closed).abs() / closed);
    }
    rec.check(worst <= 1e-13, format!("max rel deviation = {worst:.3e}"));

    let at_8 = holhos_delta(&HolhosDeviations::<f64>::baskakov_bounds(8));
    rec.check(at_8 == 3.0, format!("δ_8 = {at_8} (exact 3 expected)"));

    Ok(rec.finish(4, "delta_n formula consistency", started, None))
}

/// Criterion 5: the quantitative bound holds for the five test functions,
/// every catalog ρ, n in {4, 16, 64, 256}; zero violations, under 60 s.
pub fn criterion_5_quantitative_bound() -> Result<CriterionOutcome> {
    let started = Instant::now();
    let mut rec = Recorder::new();
    let policy = TruncationPolicy::<f64>::default();

    let mut checked = 0usize;
    let mut min_margin = f64::INFINITY;
    for rho in builtin_catalog::<f64>() {
        let grid = SupGrid::geometric(rho.domain_hint(), 96).with_refine_points(24);
        let registration = default_grid(rho.domain_hint(), 128);
        for cat in function_catalog(&rho, &registration)? {
            for &n in &[4u64, 16, 64, 256] {
                let report = quantitative_bound_check(
                    &cat.function,
                    n,
                    &rho,
                    &grid,
                    &policy,
                    ModulusVariant::Sum,
                )?;
                checked += 1;
                if report.rhs > 0.0 {
                    min_margin = min_margin.min(report.rhs / report.lhs.max(1e-300));
                }
                if !report.pass {
                    rec.check(
                        false,
                        format!(
                            "{} f={} n={n}: lhs={} > rhs={}",
                            rho.name(),
                            report.label,
                            report.lhs,
                            report.rhs
                        ),
                    );
                }
            }
        }
    }
    rec.check(
        checked == 80,
        format!("{checked} bound checks, min rhs/lhs = {min_margin:.2}"),
    );

    Ok(rec.finish(
        5,
        "quantitative error bound",
        started,
        Some(Duration::from_secs(60)),
    ))
}

/// Criterion 6: Voronovskaya limits — exact identity for f = ρ², the e^{−1}
/// limit for f = e^{−ρ} within 1 %, and the n² fourth-moment order check.
pub fn criterion_6_voronovskaya() -> Result<CriterionOutcome> {
    let started = Instant::now();
    let mut rec = Recorder::new();
    let policy = TruncationPolicy::<f64>::default();
    let n_list = [50u64, 100, 200, 400, 800];

    for rho in [identity::<f64>(), crate::rho::quadratic::<f64>()] {
        let registration = default_grid(rho.domain_hint(), 128);
        let cat = crate::weighted::function_by_label(&rho, &registration, "rho2")?;
        let d2 = cat.pullback_second_derivative.clone().unwrap();
        let report = voronovskaya_check(
            &rho,
            &cat.function,
            |u| d2(u),
            1.0,
            &n_list,
            &policy,
            0.01,
            1e-4,
        )?;
        let target = report.target;
        let exact = report
            .samples
            .iter()
            .all(|&(_, g, _)| (g - target).abs() <= 1e-7 * (1.0 + target.abs()));
        rec.check(
            exact && report.verdict == Verdict::Pass,
            format!(
                "{}: n(Vρ²−ρ²) ≡ ρ(1+ρ) = {target:.12} for all n",
                rho.name()
            ),
        );
    }

    let rho = identity::<f64>();
    let registration = default_grid(rho.domain_hint(), 128);
    let cat = crate::weighted::function_by_label(&rho, &registration, "exp-neg-rho")?;
    let d2 = cat.pullback_second_derivative.clone().unwrap();
    let report = voronovskaya_check(
        &rho,
        &cat.function,
        |u| d2(u),
        1.0,
        &n_list,
        &policy,
        0.01,
        1e-4,
    )?;
    let target = (-1.0f64).exp();
    rec.check(
        report.verdict == Verdict::Pass && (report.limit - target).abs() <= 0.01 * target,
        format!(
            "exp-neg-rho at x=1: limit={:.8} target={target:.8}",
            report.limit
        ),
    );

    for rho in [identity::<f64>(), crate::rho::quadratic::<f64>()] {
        let order = fourth_moment_order_check(1.0, &rho, &n_list, 0.10, &policy)?;
        rec.check(
            order.pass,
            format!(
                "{}: n²μ₄ ratios end at {:.4}, limit {:.4}",
                rho.name(),
                order.ratios.last().copied().unwrap_or(f64::NAN),
                order.limit
            ),
        );
        if rho.name() == "identity" {
            // limit 3ρ²(1+ρ)² = 12 at x=1
            rec.check(
                (order.limit - 12.0).abs() <= 1.2,
                format!("identity n²μ₄ limit {:.4} within 10% of 12", order.limit),
            );
        }
    }

    Ok(rec.finish(6, "voronovskaya asymptotics", started, None))
}

/// Criterion 7: the classical family and rho-baskakov with identity ρ agree
/// within 1e−12 on 10³ seeded random probes.
pub fn criterion_7_classical_reduction() -> Result<CriterionOutcome> {
    let started = Instant::now();
    let mut rec = Recorder::new();
    let mut rng = ChaCha8Rng::seed_from_u64(PROPERTY_SEED);
    let policy = TruncationPolicy::<f64>::default().with_growth_bound(1024.0);

    let mut worst: f64 = 0.0;
    for probe in 0..1000 {
        let n = rng.gen_range(1u64..=64);
        let x = rng.gen_range(0.0..4.0);
        let deviation = match probe % 4 {
            0 => classical_equivalence_check(n, x, |t: f64| (1.0 + t).recip(), &policy)?,
            1 => classical_equivalence_check(n, x, |t: f64| t * t, &policy)?,
            2 => classical_equivalence_check(n, x, |t: f64| t.sin(), &policy)?,
            _ => classical_equivalence_check(n, x, |t: f64| (-t).exp(), &policy)?,
        };
        worst = worst.max(deviation);
    }
    rec.check(
        worst <= 1e-12,
        format!("1000 probes, max |classical − rho@identity| = {worst:.3e}"),
    );
    rec.note(format!("seed = {PROPERTY_SEED:#x}"));

    Ok(rec.finish(7, "classical reduction", started, None))
}

/// Criterion 8: the A-statistical suite — C₁ regularity, the square-density
/// value at j = 10⁴, and the Korovkin demo under C₁ and the identity. Under
/// 10 s.
pub fn criterion_8_astat() -> Result<CriterionOutcome> {
    let started = Instant::now();
    let mut rec = Recorder::new();

    let c1 = SummabilityMatrix::<f64>::cesaro_c1();
    let regularity = regularity_check(&c1, 10_000, 100_000, 1e-9)?;
    rec.check(regularity.pass(), "C₁ passes the regularity check");

    let densities = a_density(
        &c1,
        &IndexSet::perfect_squares(),
        &[100, 1_000, 10_000],
        10_000,
    )?;
    let at_10k = densities.last().unwrap().1;
    rec.check(
        (at_10k - 0.01).abs() <= 1e-12,
        format!("square density at j=10⁴ = {at_10k}"),
    );
    rec.check(
        densities[0].1 > densities[2].1,
        format!(
            "density trend {:.4} → {:.4}",
            densities[0].1, densities[2].1
        ),
    );

    let rho = identity::<f64>();
    let j_list: Vec<u64> = vec![10, 100, 1_000, 10_000, 100_000];
    let demo = astat_korovkin_demo(&rho, 100_000, &c1, &j_list)?;
    rec.check(
        demo.pass(AstatOutcome::Converges),
        format!(
            "C₁ demo: unperturbed converges, square-perturbed converges ({} witnesses)",
            demo.witness_count
        ),
    );

    let id = SummabilityMatrix::<f64>::identity();
    let j_squares: Vec<u64> = vec![16, 64, 256, 1_024, 4_096, 9_409, 10_000];
    let demo_id = astat_korovkin_demo(&rho, 10_000, &id, &j_squares)?;
    rec.check(
        demo_id.perturbed.verdict == AstatOutcome::Diverges,
        "identity demo: square-perturbed sequence diverges",
    );

    Ok(rec.finish(
        8,
        "a-statistical convergence suite",
        started,
        Some(Duration::from_secs(10)),
    ))
}

/// Criterion 9: randomized property suite — positivity, monotonicity,
/// linearity, normalization, interpolation at 0, and modulus monotonicity.
pub fn criterion_9_property_suite() -> Result<CriterionOutcome> {
    let started = Instant::now();
    let mut rec = Recorder::new();
    let mut rng = ChaCha8Rng::seed_from_u64(PROPERTY_SEED);
    let catalog = builtin_catalog::<f64>();
    let policy = TruncationPolicy::<f64>::default().with_growth_bound(64.0);

    let mut failures = 0usize;
    for _ in 0..100 {
        let rho = &catalog[rng.gen_range(0..catalog.len())];
        let n = rng.gen_range(1u64..=40);
        let x = rng.gen_range(0.0..3.0);
        let spec = OperatorSpec::new(OperatorFamily::RhoBaskakov, n, rho.clone())?;

        let a = rng.gen_range(0.1..2.0);
        let b = rng.gen_range(0.0..1.0);
        let f = move |t: f64| (a * t).sin().abs() + b;
        let bump = rng.gen_range(0.0..1.0);
        let g = move |t: f64| f(t) + bump;

        let fa = apply(&spec, f, x, &policy)?.value;
        let ga = apply(&spec, g, x, &policy)?.value;
        // positivity
        if fa < -1e-15 {
            failures += 1;
        }
        // monotonicity: f <= g pointwise
        if fa > ga + 1e-12 {
            failures += 1;
        }
        // linearity
        let alpha = rng.gen_range(-2.0..2.0);
        let beta = rng.gen_range(-2.0..2.0);
        let combo = apply(&spec, |t| alpha * f(t) + beta * g(t), x, &policy)?.value;
        if (combo - (alpha * fa + beta * ga)).abs() > 1e-12 * (1.0 + combo.abs()) {
            failures += 1;
        }
        // normalization
        let table = build_weight_table(&spec, x, &policy)?;
        let mass = table.mass();
        if !(mass >= 1.0 - policy.mass_tol && mass <= 1.0 + 1e-12) {
            failures += 1;
        }
        // interpolation at 0
        let at_zero = apply(&spec, f, 0.0, &policy)?.value;
        if at_zero != f(0.0) {
            failures += 1;
        }
    }
    rec.check(
        failures == 0,
        format!("operator properties: {failures} failures over 100 random cases"),
    );

    let mut omega_failures = 0usize;
    for _ in 0..20 {
        let rho = &catalog[rng.gen_range(0..catalog.len())];
        let grid = SupGrid::geometric(rho.domain_hint(), 256);
        let registration = default_grid(rho.domain_hint(), 64);
        let functions = function_catalog(rho, &registration)?;
        let f = &functions[rng.gen_range(0..functions.len())].function;
        let base = rng.gen_range(0.05..0.5);
        let deltas = [base, base * 2.0, base * 5.0];
        if !monotone_nondecreasing_check(f, &deltas, rho, &grid, ModulusVariant::Sum)? {
            omega_failures += 1;
        }
        if omega_rho(f, 0.0, rho, &grid, ModulusVariant::Sum)?.value != 0.0 {
            omega_failures += 1;
        }
    }
    rec.check(
        omega_failures == 0,
        format!("modulus properties: {omega_failures} failures over 20 random cases"),
    );
    rec.note(format!("seed = {PROPERTY_SEED:#x}"));

    Ok(rec.finish(9, "randomized property suite", started, None))
}

/// Runs the whole suite in order.
pub fn run_all() -> Result<Vec<CriterionOutcome>> {
    Ok(vec![
        criterion_1_moment_identities()?,
        criterion_2_third_moment()?,
        criterion_3_weighted_error_norms()?,
        criterion_4_delta_consistency()?,
        criterion_5_quantitative_bound()?,
        criterion_6_voronovskaya()?,
        criterion_7_classical_reduction()?,
        criterion_8_astat()?,
        criterion_9_property_suite()?,
    ])
}

/// Runs a subset by criterion id (empty = all).
pub fn run_selected(ids: &[u8]) -> Result<Vec<CriterionOutcome>> {
    if ids.is_empty() {
        return run_all();
    }
    let mut outcomes = Vec::new();
    for &id in ids {
        outcomes.push(match id {
            1 => criterion_1_moment_identities()?,
            2 => criterion_2_third_moment()?,
            3 => criterion_3_weighted_error_norms()?,
            4 => criterion_4_delta_consistency()?,
            5 => criterion_5_quantitative_bound()?,
            6 => criterion_6_voronovskaya()?,
            7 => criterion_7_classical_reduction()?,
            8 => criterion_8_astat()?,
            9 => criterion_9_property_suite()?,
            other => {
                return Err(crate::error::Error::Usage(format!(
                    "unknown criterion id {other} (expected 1..=9)"
                )))
            }
        });
    }
    Ok(outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_criteria_pass() {
        for outcome in [
            criterion_4_delta_consistency().unwrap(),
            criterion_7_classical_reduction().unwrap(),
        ] {
            assert!(outcome.pass, "{}", outcome.summary_line());
        }
    }

    #[test]
    fn selector_rejects_unknown_ids() {
        assert!(run_selected(&[42]).is_err());
    }
}
