//! Stable evaluation of the Baskakov-type operator families.
//!
//! Weights are generated by a ratio recurrence seeded from a log-space w₀,
//! never through the raw binomial coefficient, so indices n in the thousands
//! stay overflow-free. Truncation collects probability mass past the series
//! mean and certifies the discarded tail with a Cauchy–Schwarz split against
//! the closed-form second moment.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::real::{ln_gamma, Real};
use crate::rho::{identity, RhoMap};

/// Operator family selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorFamily {
    /// Negative-binomial weights against f(k/n) on [0,∞).
    ClassicalBaskakov,
    /// Negative-binomial weights in ρ(x) against f(ρ⁻¹(k/n)).
    RhoBaskakov,
    /// Poisson weights in nρ(x) against f(ρ⁻¹(k/n)).
    RhoSzasz,
}

impl fmt::Display for OperatorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OperatorFamily::ClassicalBaskakov => "classical-baskakov",
            OperatorFamily::RhoBaskakov => "rho-baskakov",
            OperatorFamily::RhoSzasz => "rho-szasz",
        })
    }
}

impl FromStr for OperatorFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical-baskakov" => Ok(OperatorFamily::ClassicalBaskakov),
            "rho-baskakov" => Ok(OperatorFamily::RhoBaskakov),
            "rho-szasz" => Ok(OperatorFamily::RhoSzasz),
            other => Err(Error::Usage(format!(
                "unknown family '{other}' (expected classical-baskakov|rho-baskakov|rho-szasz)"
            ))),
        }
    }
}

/// A fully specified operator: family, index n, and the ρ map.
#[derive(Debug, Clone)]
pub struct OperatorSpec<T> {
    family: OperatorFamily,
    n: u64,
    rho: RhoMap<T>,
}

impl<T: Real> OperatorSpec<T> {
    /// Builds a spec; the classical family ignores the supplied ρ and is
    /// forced to the identity.
    pub fn new(family: OperatorFamily, n: u64, rho: RhoMap<T>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Usage("operator index n must be >= 1".into()));
        }
        let rho = match family {
            OperatorFamily::ClassicalBaskakov => identity(),
            _ => rho,
        };
        // Cheap sanity on the c1/c2 conditions; full certification is
        // validate_rho's job and the catalog entries arrive pre-validated.
        let at_zero = rho.rho(T::zero()).abs();
        let slope = rho.rho_prime(T::zero());
        if !(at_zero <= T::of(1e-9)) || !(slope >= T::one() - T::of(1e-9)) {
            return Err(Error::Usage(format!(
                "rho '{}' fails the c2 spot check: rho(0)={at_zero}, rho'(0)={slope}",
                rho.name()
            )));
        }
        Ok(OperatorSpec { family, n, rho })
    }

    pub fn family(&self) -> OperatorFamily {
        self.family
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn rho(&self) -> &RhoMap<T> {
        &self.rho
    }
}

/// Series truncation controls.
#[derive(Debug, Clone, Copy)]
pub struct TruncationPolicy<T> {
    /// Uncollected weight mass allowed past the cut.
    pub mass_tol: T,
    /// Declared M_f with |f| ≤ M_f·φ, φ = √(1+ρ²); converts mass into value error.
    pub growth_bound: T,
    /// Hard cap on the series index; `None` picks max(10⁶, 64·n·(1+ρ(x))).
    pub k_max: Option<usize>,
}

impl<T: Real> Default for TruncationPolicy<T> {
    fn default() -> Self {
        TruncationPolicy {
            mass_tol: T::of(1e-12).max(T::epsilon() * T::of(100.0)),
            growth_bound: T::one(),
            k_max: None,
        }
    }
}

impl<T: Real> TruncationPolicy<T> {
    pub fn with_growth_bound(mut self, m: T) -> Self {
        self.growth_bound = m;
        self
    }

    pub fn with_mass_tol(mut self, tol: T) -> Self {
        self.mass_tol = tol;
        self
    }

    pub fn with_k_max(mut self, k_max: usize) -> Self {
        self.k_max = Some(k_max);
        self
    }

    pub fn validate(&self, n: u64) -> Result<()> {
        if !(self.mass_tol > T::zero() && self.mass_tol < T::one()) {
            return Err(Error::Usage(format!(
                "mass_tol must lie in (0,1), got {}",
                self.mass_tol
            )));
        }
        if let Some(k) = self.k_max {
            if (k as u64) < n {
                return Err(Error::Usage(format!("k_max={k} must be >= n={n}")));
            }
        }
        Ok(())
    }

    pub(crate) fn effective_k_max(&self, n: u64, rho_x: T) -> usize {
        match self.k_max {
            Some(k) => k.max(n as usize),
            None => {
                let scaled = T::of(64.0) * T::of_u64(n) * (T::one() + rho_x);
                let scaled = scaled.to_f64().unwrap_or(1e6).min(1e9) as usize;
                scaled.max(1_000_000).max(n as usize)
            }
        }
    }
}

/// Finite weight prefix at one evaluation point with a certified tail bound.
#[derive(Debug, Clone)]
pub struct WeightTable<T> {
    pub x: T,
    pub rho_x: T,
    pub n: u64,
    pub family: OperatorFamily,
    pub weights: Vec<T>,
    /// Upper bound on the uncollected mass Σ_{k>K} w_k.
    pub tail_mass_bound: T,
}

impl<T: Real> WeightTable<T> {
    pub fn mass(&self) -> T {
        self.weights.iter().fold(T::zero(), |acc, &w| acc + w)
    }
}

/// Ratio-recurrence generator for the per-family weight sequences.
///
/// Baskakov: w₀ = (1+r)^{-n}, w_{k+1}/w_k = ((n+k)/(k+1))·r/(1+r).
/// Szász:    w₀ = e^{-nr},    w_{k+1}/w_k = nr/(k+1).
///
/// When n·ln(1+r) exceeds the exponent range the seed is not representable;
/// the generator then carries log-weights and switches to the linear
/// recurrence once the sequence climbs back into range. The skipped front
/// carries less than ~1e−280 of mass.
pub(crate) struct WeightSeq<T> {
    family: OperatorFamily,
    n: T,
    r: T,
    p: T,
    state: SeqState<T>,
    k: usize,
}

enum SeqState<T> {
    Log(T),
    Linear(T),
}

impl<T: Real> WeightSeq<T> {
    pub(crate) fn new(family: OperatorFamily, n: u64, r: T) -> Self {
        let n_t = T::of_u64(n);
        let (log_w0, p) = match family {
            OperatorFamily::RhoSzasz => (-(n_t * r), n_t * r),
            _ => (-(n_t * r.ln_1p()), r / (T::one() + r)),
        };
        let state = if log_w0 >= Self::switch_threshold() {
            SeqState::Linear(log_w0.exp())
        } else {
            SeqState::Log(log_w0)
        };
        WeightSeq {
            family,
            n: n_t,
            r,
            p,
            state,
            k: 0,
        }
    }

    /// Log-weight above which the linear recurrence takes over; keeps a
    /// safety margin above the smallest positive normal.
    fn switch_threshold() -> T {
        T::min_positive_value().ln() * T::of(0.9)
    }

    /// Weight at the current index; 0 while still far below range.
    pub(crate) fn weight(&self) -> T {
        match self.state {
            SeqState::Linear(w) => w,
            SeqState::Log(lw) => {
                if lw >= T::min_positive_value().ln() {
                    lw.exp()
                } else {
                    T::zero()
                }
            }
        }
    }

    pub(crate) fn index(&self) -> usize {
        self.k
    }

    /// w_{k+1}/w_k at the current index. Strictly decreasing in k, with
    /// limit r/(1+r) (Baskakov) resp. 0 (Szász), so past the point where it
    /// drops below 1 the sequence decays at least geometrically.
    pub(crate) fn ratio(&self) -> T {
        let kp1 = T::of_u64(self.k as u64 + 1);
        match self.family {
            OperatorFamily::RhoSzasz => self.p / kp1,
            _ => (self.n + T::of_u64(self.k as u64)) / kp1 * self.p,
        }
    }

    /// Advances to index k+1.
    pub(crate) fn advance(&mut self) {
        let ratio = self.ratio();
        self.state = match self.state {
            SeqState::Linear(w) => SeqState::Linear(w * ratio),
            SeqState::Log(lw) => {
                let next = lw + ratio.ln();
                if next >= Self::switch_threshold() {
                    SeqState::Linear(next.exp())
                } else {
                    SeqState::Log(next)
                }
            }
        };
        self.k += 1;
    }

    /// Mean of the index distribution divided by n, i.e. ρ(x).
    pub(crate) fn mean_over_n(&self) -> T {
        self.r
    }
}

/// Closed-form second raw moment Σ (k/n)² w_k for each family.
pub(crate) fn second_raw_moment<T: Real>(family: OperatorFamily, n: u64, r: T) -> T {
    let n_t = T::of_u64(n);
    match family {
        OperatorFamily::RhoSzasz => r * r + r / n_t,
        _ => r * r + (r * r + r) / n_t,
    }
}

/// Direct log-space evaluation of the Baskakov weight
/// C(n+k−1, k)·ρ(x)^k/(1+ρ(x))^{n+k}.
///
/// This is the cross-check path; tables use the ratio recurrence.
pub fn weight<T: Real>(n: u64, k: u64, x: T, rho: &RhoMap<T>) -> Result<T> {
    if n == 0 {
        return Err(Error::Usage("weight requires n >= 1".into()));
    }
    if !(x >= T::zero()) {
        return Err(Error::Domain(format!("x must be >= 0, got {x}")));
    }
    let r = rho.rho(x);
    if !r.is_finite() {
        return Err(Error::Numeric(format!("rho({x}) is not finite")));
    }
    if r == T::zero() {
        return Ok(if k == 0 { T::one() } else { T::zero() });
    }
    let log_w = ln_binomial_nk::<T>(n, k) + T::of_u64(k) * r.ln()
        - (T::of_u64(n) + T::of_u64(k)) * r.ln_1p();
    Ok(log_w.exp())
}

/// Direct log-space Poisson weight e^{-nρ(x)}·(nρ(x))^k/k!.
pub fn szasz_weight<T: Real>(n: u64, k: u64, x: T, rho: &RhoMap<T>) -> Result<T> {
    if n == 0 {
        return Err(Error::Usage("szasz_weight requires n >= 1".into()));
    }
    if !(x >= T::zero()) {
        return Err(Error::Domain(format!("x must be >= 0, got {x}")));
    }
    let lambda = T::of_u64(n) * rho.rho(x);
    if !lambda.is_finite() {
        return Err(Error::Numeric(format!("n*rho({x}) is not finite")));
    }
    if lambda == T::zero() {
        return Ok(if k == 0 { T::one() } else { T::zero() });
    }
    let log_w =
        -lambda + T::of_u64(k) * lambda.ln() - ln_gamma(T::of_u64(k) + T::one());
    Ok(log_w.exp())
}

/// log C(n+k−1, k).
fn ln_binomial_nk<T: Real>(n: u64, k: u64) -> T {
    crate::real::ln_binomial(n + k - 1, k)
}

/// Collects weights until the cumulative mass reaches 1 − mass_tol *and* the
/// index has passed the series mean k/n = ρ(x), where the weights are
/// decreasing-dominated, so `tail_mass_bound = 1 − collected` is certified.
pub fn build_weight_table<T: Real>(
    spec: &OperatorSpec<T>,
    x: T,
    policy: &TruncationPolicy<T>,
) -> Result<WeightTable<T>> {
    policy.validate(spec.n)?;
    if !(x >= T::zero()) {
        return Err(Error::Domain(format!("x must be >= 0, got {x}")));
    }
    let r = spec.rho.rho(x);
    if !r.is_finite() {
        return Err(Error::Numeric(format!("rho({x}) is not finite")));
    }
    build_weight_table_from_rho_value(spec.family, spec.n, r, policy).map(|mut t| {
        t.x = x;
        t
    })
}

/// Table builder keyed by (family, n, ρ(x)) — the weights depend on x only
/// through ρ(x), so this is the natural cache key.
pub fn build_weight_table_from_rho_value<T: Real>(
    family: OperatorFamily,
    n: u64,
    rho_x: T,
    policy: &TruncationPolicy<T>,
) -> Result<WeightTable<T>> {
    if rho_x == T::zero() {
        return Ok(WeightTable {
            x: T::zero(),
            rho_x,
            n,
            family,
            weights: vec![T::one()],
            tail_mass_bound: T::zero(),
        });
    }

    let k_max = policy.effective_k_max(n, rho_x);
    let target = T::one() - policy.mass_tol;
    let mut seq = WeightSeq::new(family, n, rho_x);
    let mean = seq.mean_over_n();
    let n_t = T::of_u64(n);

    let mut weights = Vec::new();
    let mut cum = T::zero();
    let saturation = T::epsilon() * T::of(0.25);
    loop {
        let w = seq.weight();
        weights.push(w);
        cum += w;
        let k_t = T::of_u64(seq.index() as u64);
        let past_mean = k_t >= n_t * mean;
        if past_mean && cum >= target {
            break;
        }
        // Past the mean the terms only shrink; once a term can no longer
        // move the accumulated mass, the float sum has saturated and the
        // honest tail bound is whatever mass remains unreachable.
        if past_mean && w > T::zero() && w <= cum * saturation {
            break;
        }
        if seq.index() + 1 > k_max {
            return Err(Error::Truncation {
                collected_mass: cum.to_f64().unwrap_or(f64::NAN),
                k_max,
            });
        }
        seq.advance();
    }

    Ok(WeightTable {
        x: rho_x,
        rho_x,
        n,
        family,
        weights,
        tail_mass_bound: (T::one() - cum).max(T::zero()),
    })
}

/// Operator value together with a certified bound on the truncation error.
#[derive(Debug, Clone, Copy)]
pub struct Evaluation<T> {
    pub value: T,
    pub tail_bound: T,
}

/// Applies the operator to `f` at `x`: Σ f(ρ⁻¹(k/n))·w_k.
///
/// The discarded tail is bounded by M_f·√(tail mass)·√(tail φ²-mass) where
/// the φ²-mass Σ(1+(k/n)²)w_k over the tail comes from the closed-form
/// second moment minus the collected part. The declared growth bound
/// |f| ≤ M_f·√(1+ρ²) is checked on every node actually evaluated.
pub fn apply<T: Real>(
    spec: &OperatorSpec<T>,
    f: impl Fn(T) -> T,
    x: T,
    policy: &TruncationPolicy<T>,
) -> Result<Evaluation<T>> {
    let table = build_weight_table(spec, x, policy)?;
    apply_with_table(spec, f, &table, policy)
}

/// Same as [`apply`] but reusing a prebuilt table for the same (spec, x).
pub fn apply_with_table<T: Real>(
    spec: &OperatorSpec<T>,
    f: impl Fn(T) -> T,
    table: &WeightTable<T>,
    policy: &TruncationPolicy<T>,
) -> Result<Evaluation<T>> {
    let n_t = T::of_u64(spec.n);
    let growth = policy.growth_bound;
    let growth_slack = T::one() + T::of(1e-9);
    let invert_tol = T::of(1e-12).max(T::epsilon() * T::of(16.0));

    let mut value = T::zero();
    let mut phi2_collected = T::zero();
    for (k, &w) in table.weights.iter().enumerate() {
        let u = T::of_u64(k as u64) / n_t;
        let node = match spec.family {
            OperatorFamily::ClassicalBaskakov => u,
            _ => {
                if k == 0 {
                    T::zero()
                } else {
                    spec.rho.invert(u, invert_tol * T::one().max(u))?
                }
            }
        };
        let fv = f(node);
        if !fv.is_finite() {
            return Err(Error::Numeric(format!(
                "f is not finite at node {node} (k={k})"
            )));
        }
        let phi2 = T::one() + u * u;
        if fv.abs() > growth * phi2.sqrt() * growth_slack {
            return Err(Error::Contract(format!(
                "|f|={} exceeds growth bound {growth}·phi at node {node} (k={k})",
                fv.abs()
            )));
        }
        value += fv * w;
        phi2_collected += phi2 * w;
    }

    let phi2_total = T::one() + second_raw_moment(table.family, spec.n, table.rho_x);
    // φ² >= 1 makes the tail φ²-mass at least the tail mass itself; the
    // floor keeps the bound valid when the subtraction cancels to rounding.
    let tail_phi2 = (phi2_total - phi2_collected).max(table.tail_mass_bound);
    let tail_bound = growth * (table.tail_mass_bound * tail_phi2).sqrt();
    Ok(Evaluation { value, tail_bound })
}

/// Max deviation between the classical family and rho-baskakov with identity ρ
/// on the same inputs. Identical series, so this should sit at rounding level.
pub fn classical_equivalence_check<T: Real>(
    n: u64,
    x: T,
    f: impl Fn(T) -> T,
    policy: &TruncationPolicy<T>,
) -> Result<T> {
    let classical = OperatorSpec::new(OperatorFamily::ClassicalBaskakov, n, identity())?;
    let rho_form = OperatorSpec::new(OperatorFamily::RhoBaskakov, n, identity())?;
    let a = apply(&classical, &f, x, policy)?;
    let b = apply(&rho_form, &f, x, policy)?;
    Ok((a.value - b.value).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rho::{identity, quadratic};

    fn policy64() -> TruncationPolicy<f64> {
        TruncationPolicy::default()
    }

    #[test]
    fn weight_n1_identity_is_geometric() {
        let rho = identity::<f64>();
        for k in [0u64, 1, 2, 5, 20] {
            let w = weight(1, k, 1.0, &rho).unwrap();
            let expected = 0.5f64.powi(k as i32 + 1);
            assert!((w - expected).abs() <= 1e-15 * expected, "k={k}: {w}");
        }
    }

    #[test]
    fn weight_at_origin_is_kronecker() {
        let rho = quadratic::<f64>();
        assert_eq!(weight(7, 0, 0.0, &rho).unwrap(), 1.0);
        assert_eq!(weight(7, 3, 0.0, &rho).unwrap(), 0.0);
    }

    #[test]
    fn weight_direct_binomial_case() {
        // n=2, k=3, x=1: C(4,3)/2^5 = 0.125
        let w = weight(2, 3, 1.0, &identity::<f64>()).unwrap();
        assert!((w - 0.125).abs() < 1e-15);
    }

    #[test]
    fn table_at_origin_is_single_unit_weight() {
        let spec = OperatorSpec::new(OperatorFamily::RhoBaskakov, 5, quadratic()).unwrap();
        let table = build_weight_table(&spec, 0.0, &policy64()).unwrap();
        assert_eq!(table.weights, vec![1.0]);
        assert_eq!(table.tail_mass_bound, 0.0);
    }

    #[test]
    fn table_mass_is_normalized() {
        let spec = OperatorSpec::new(OperatorFamily::RhoBaskakov, 10, identity()).unwrap();
        let table = build_weight_table(&spec, 2.0, &policy64()).unwrap();
        let mass = table.mass();
        assert!(mass >= 1.0 - 1e-12 && mass <= 1.0 + 1e-12, "mass={mass}");
        assert!(table.tail_mass_bound <= 1e-12);
    }

    #[test]
    fn table_first_moment_matches_rho() {
        // Σ (k/10)·w_k = 2 after tail correction
        let spec = OperatorSpec::new(OperatorFamily::RhoBaskakov, 10, identity()).unwrap();
        let table = build_weight_table(&spec, 2.0, &policy64()).unwrap();
        let m1: f64 = table
            .weights
            .iter()
            .enumerate()
            .map(|(k, w)| (k as f64 / 10.0) * w)
            .sum();
        assert!((m1 - 2.0).abs() < 1e-9, "m1={m1}");
    }

    #[test]
    fn recurrence_matches_direct_weights() {
        let rho = quadratic::<f64>();
        let spec = OperatorSpec::new(OperatorFamily::RhoBaskakov, 17, rho.clone()).unwrap();
        let table = build_weight_table(&spec, 1.3, &policy64()).unwrap();
        for (k, &w) in table.weights.iter().enumerate().step_by(7) {
            let direct = weight(17, k as u64, 1.3, &rho).unwrap();
            let scale = direct.max(f64::MIN_POSITIVE);
            assert!(
                (w - direct).abs() <= 1e-12 * scale,
                "k={k}: recurrence={w} direct={direct}"
            );
        }
    }

    #[test]
    fn szasz_recurrence_matches_direct_weights() {
        let rho = identity::<f64>();
        let spec = OperatorSpec::new(OperatorFamily::RhoSzasz, 9, rho.clone()).unwrap();
        let table = build_weight_table(&spec, 2.5, &policy64()).unwrap();
        for (k, &w) in table.weights.iter().enumerate().step_by(5) {
            let direct = szasz_weight(9, k as u64, 2.5, &rho).unwrap();
            assert!(
                (w - direct).abs() <= 1e-12 * direct.max(f64::MIN_POSITIVE),
                "k={k}"
            );
        }
    }

    #[test]
    fn apply_constant_is_one() {
        for family in [
            OperatorFamily::ClassicalBaskakov,
            OperatorFamily::RhoBaskakov,
            OperatorFamily::RhoSzasz,
        ] {
            let spec = OperatorSpec::new(family, 12, quadratic()).unwrap();
            let eval = apply(&spec, |_| 1.0, 1.7, &policy64()).unwrap();
            assert!(
                (eval.value - 1.0).abs() <= eval.tail_bound + 1e-12,
                "{family}: {} (tail {})",
                eval.value,
                eval.tail_bound
            );
        }
    }

    #[test]
    fn apply_rho_squared_second_moment() {
        // V(ρ²; x) = ρ² + (ρ²+ρ)/n: identity, n=10, x=2 → 4.6
        let spec = OperatorSpec::new(OperatorFamily::RhoBaskakov, 10, identity()).unwrap();
        let policy = policy64().with_growth_bound(64.0);
        let eval = apply(&spec, |t| t * t, 2.0, &policy).unwrap();
        assert!((eval.value - 4.6).abs() < 1e-9, "{}", eval.value);
    }

    #[test]
    fn apply_reproduces_rho_for_quadratic_map() {
        // f = ρ, ρ(x) = x + x², n=7, x=1 → ρ(1) = 2
        let rho = quadratic::<f64>();
        let spec = OperatorSpec::new(OperatorFamily::RhoBaskakov, 7, rho.clone()).unwrap();
        let policy = policy64().with_growth_bound(2.0);
        let f = {
            let rho = rho.clone();
            move |t: f64| rho.rho(t)
        };
        let eval = apply(&spec, f, 1.0, &policy).unwrap();
        assert!((eval.value - 2.0).abs() < 1e-9, "{}", eval.value);
    }

    #[test]
    fn apply_interpolates_at_origin() {
        let spec = OperatorSpec::new(OperatorFamily::RhoBaskakov, 4, quadratic()).unwrap();
        let eval = apply(&spec, |t| (1.0 + t).recip(), 0.0, &policy64()).unwrap();
        assert_eq!(eval.value, 1.0);
        assert_eq!(eval.tail_bound, 0.0);
    }

    #[test]
    fn classical_reduction_is_exact() {
        let policy = policy64();
        let d = classical_equivalence_check(5, 1.5, |t: f64| (1.0 + t).recip(), &policy).unwrap();
        assert!(d <= 1e-12, "deviation {d}");
        let d0 = classical_equivalence_check(1, 0.0, |t: f64| t.sin(), &policy).unwrap();
        assert_eq!(d0, 0.0);
        let policy2 = policy64().with_growth_bound(1024.0);
        let d2 = classical_equivalence_check(20, 3.0, |t: f64| t * t, &policy2).unwrap();
        assert!(d2 <= 1e-12, "deviation {d2}");
    }

    #[test]
    fn szasz_moments_follow_poisson_closed_forms() {
        // S(ρ; x) = ρ(x) and S(ρ²; x) = ρ² + ρ/n — the closed forms behind
        // the family's tail certificate.
        let rho = quadratic::<f64>();
        let n = 12u64;
        let x = 1.4f64;
        let r = rho.rho(x);
        let spec = OperatorSpec::new(OperatorFamily::RhoSzasz, n, rho.clone()).unwrap();
        let table = build_weight_table(&spec, x, &policy64()).unwrap();
        let (mut m1, mut m2) = (0.0f64, 0.0f64);
        for (k, &w) in table.weights.iter().enumerate() {
            let u = k as f64 / n as f64;
            m1 += u * w;
            m2 += u * u * w;
        }
        assert!((m1 - r).abs() < 1e-9, "m1={m1} r={r}");
        let closed = r * r + r / n as f64;
        assert!((m2 - closed).abs() < 1e-9, "m2={m2} closed={closed}");
        assert_eq!(second_raw_moment(OperatorFamily::RhoSzasz, n, r), closed);
    }

    #[test]
    fn growth_contract_violation_is_reported() {
        let spec = OperatorSpec::new(OperatorFamily::RhoBaskakov, 6, identity()).unwrap();
        let policy = policy64(); // growth_bound 1 cannot cover e^t
        let err = apply(&spec, |t: f64| t.exp(), 3.0, &policy).unwrap_err();
        assert!(matches!(err, Error::Contract(_)), "{err}");
    }

    #[test]
    fn small_k_max_errors_with_collected_mass() {
        // Mean index is n·rho(x) = 15, so the cap at 16 cuts mid-mass.
        let spec = OperatorSpec::new(OperatorFamily::RhoBaskakov, 3, identity()).unwrap();
        let policy = policy64().with_k_max(16);
        match build_weight_table(&spec, 5.0, &policy) {
            Err(Error::Truncation {
                collected_mass,
                k_max,
            }) => {
                assert_eq!(k_max, 16);
                assert!(collected_mass > 0.0 && collected_mass < 0.99, "{collected_mass}");
            }
            other => panic!("expected truncation error, got {other:?}"),
        }
    }

    #[test]
    fn zero_index_is_usage_error() {
        assert!(matches!(
            OperatorSpec::new(OperatorFamily::RhoBaskakov, 0, identity::<f64>()),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn tables_stay_stable_at_large_n() {
        let spec = OperatorSpec::new(OperatorFamily::RhoBaskakov, 10_000, identity()).unwrap();
        let table = build_weight_table(&spec, 2.0, &policy64()).unwrap();
        let mass = table.mass();
        assert!((mass - 1.0).abs() < 1e-10, "mass={mass}");
        assert!(table.weights.iter().all(|w| w.is_finite() && *w >= 0.0));
    }

    #[test]
    fn f32_smoke() {
        let spec = OperatorSpec::new(OperatorFamily::RhoBaskakov, 8u64, identity::<f32>()).unwrap();
        let eval = apply(&spec, |_| 1.0f32, 1.5f32, &TruncationPolicy::default()).unwrap();
        assert!((eval.value - 1.0).abs() < 1e-4);
    }
}
