//! The ρ functions that parameterize every operator in the crate.
//!
//! A valid ρ is continuously differentiable on [0,∞) with ρ(0)=0 and
//! ρ'(x) ≥ 1 everywhere. Those two conditions force strict monotonicity,
//! unboundedness, and the expansion property |x−t| ≤ |ρ(x)−ρ(t)| that the
//! weighted-modulus machinery relies on. Validation is by sampling: the
//! artifact certifies behavior where it evaluates, not symbolically.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::real::Real;

type ScalarFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// How ρ⁻¹ is evaluated.
#[derive(Clone)]
pub enum InverseRule<T> {
    /// A closed-form inverse.
    ClosedForm(ScalarFn<T>),
    /// No closed form; fall back to bracketing + bisection.
    Numeric,
}

impl<T> fmt::Debug for InverseRule<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InverseRule::ClosedForm(_) => f.write_str("ClosedForm(..)"),
            InverseRule::Numeric => f.write_str("Numeric"),
        }
    }
}

/// A validated ρ function with derivative and inverse.
#[derive(Clone)]
pub struct RhoMap<T> {
    name: String,
    rho: ScalarFn<T>,
    rho_prime: ScalarFn<T>,
    inverse: InverseRule<T>,
    domain_hint: T,
}

impl<T> fmt::Debug for RhoMap<T>
where
    T: fmt::Debug,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RhoMap")
            .field("name", &self.name)
            .field("inverse", &self.inverse)
            .field("domain_hint", &self.domain_hint)
            .finish()
    }
}

/// Ordinate whose preimage caps the default evaluation grids: moments
/// concentrate near ρ(x), and ρ(x) ≤ 50 covers all desk-scale experiments.
const DOMAIN_HINT_ORDINATE: f64 = 50.0;

impl<T: Real> RhoMap<T> {
    /// Builds a map and derives `domain_hint` by solving ρ(x) = 50 numerically.
    pub fn new(
        name: impl Into<String>,
        rho: ScalarFn<T>,
        rho_prime: ScalarFn<T>,
        inverse: InverseRule<T>,
    ) -> Result<Self> {
        let mut map = RhoMap {
            name: name.into(),
            rho,
            rho_prime,
            inverse,
            domain_hint: T::one(),
        };
        let hint_tol = T::of(1e-10).max(T::epsilon() * T::of(64.0));
        map.domain_hint = map.invert_numeric(T::of(DOMAIN_HINT_ORDINATE), hint_tol)?;
        Ok(map)
    }

    /// Like [`RhoMap::new`] but with an explicit `domain_hint` instead of
    /// solving ρ(x) = 50 — the only option for maps that violate c1/c2 and
    /// exist to be rejected by validation.
    pub fn with_domain_hint(
        name: impl Into<String>,
        rho: ScalarFn<T>,
        rho_prime: ScalarFn<T>,
        inverse: InverseRule<T>,
        domain_hint: T,
    ) -> Self {
        RhoMap {
            name: name.into(),
            rho,
            rho_prime,
            inverse,
            domain_hint,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Suggested x_max for grids; the preimage of 50 under ρ.
    pub fn domain_hint(&self) -> T {
        self.domain_hint
    }

    pub fn rho(&self, x: T) -> T {
        (self.rho)(x)
    }

    pub fn rho_prime(&self, x: T) -> T {
        (self.rho_prime)(x)
    }

    pub fn has_closed_inverse(&self) -> bool {
        matches!(self.inverse, InverseRule::ClosedForm(_))
    }

    /// ρ⁻¹(y): closed form when available, bisection otherwise.
    pub fn invert(&self, y: T, tol: T) -> Result<T> {
        match &self.inverse {
            InverseRule::ClosedForm(inv) => {
                if y < T::zero() {
                    return Err(Error::Domain(format!(
                        "cannot invert {} at negative ordinate {y}",
                        self.name
                    )));
                }
                Ok(inv(y))
            }
            InverseRule::Numeric => self.invert_numeric(y, tol),
        }
    }

    /// Bracketing + monotone bisection inverse, independent of any closed form.
    ///
    /// Doubles an upper bound until ρ(hi) ≥ y (guaranteed to succeed since
    /// ρ' ≥ 1 makes ρ unbounded), bisects until |ρ(mid) − y| ≤ tol, then
    /// applies one Newton polish step clamped to the bracket.
    pub fn invert_numeric(&self, y: T, tol: T) -> Result<T> {
        if y < T::zero() {
            return Err(Error::Domain(format!(
                "cannot invert {} at negative ordinate {y}",
                self.name
            )));
        }
        if !y.is_finite() {
            return Err(Error::Numeric(format!("non-finite ordinate {y}")));
        }
        if y == T::zero() {
            return Ok(T::zero());
        }

        let mut hi = T::one();
        let mut doublings = 0usize;
        while self.rho(hi) < y {
            hi = hi + hi;
            doublings += 1;
            if doublings > 200 || !self.rho(hi).is_finite() {
                return Err(Error::Numeric(format!(
                    "bracketing ρ⁻¹({y}) for {} failed after {doublings} doublings",
                    self.name
                )));
            }
        }
        let mut lo = T::zero();
        let mut mid = hi * T::of(0.5);
        for _ in 0..500 {
            let r = self.rho(mid);
            if !r.is_finite() {
                return Err(Error::Numeric(format!(
                    "non-finite ρ({mid}) while inverting {}",
                    self.name
                )));
            }
            if (r - y).abs() <= tol {
                // Newton polish; keep only if it does not lose ground.
                let dp = self.rho_prime(mid);
                if dp.is_finite() && dp > T::zero() {
                    let polished = mid - (r - y) / dp;
                    if polished >= lo
                        && polished <= hi
                        && (self.rho(polished) - y).abs() <= (r - y).abs()
                    {
                        return Ok(polished);
                    }
                }
                return Ok(mid);
            }
            if r < y {
                lo = mid;
            } else {
                hi = mid;
            }
            mid = (lo + hi) * T::of(0.5);
        }
        Err(Error::Numeric(format!(
            "bisection for ρ⁻¹({y}) on {} did not reach tol {tol}",
            self.name
        )))
    }
}

/// One validation check: worst violation over the sampled grid.
#[derive(Debug, Clone)]
pub struct CheckResult<T> {
    pub name: &'static str,
    pub worst: T,
    pub tol: T,
    pub pass: bool,
}

/// Outcome of [`validate_rho`]: one entry per RhoMap invariant.
#[derive(Debug, Clone)]
pub struct ValidationReport<T> {
    pub checks: Vec<CheckResult<T>>,
}

impl<T: Real> ValidationReport<T> {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn push(&mut self, name: &'static str, worst: T, tol: T) {
        let pass = worst.is_finite() && worst <= tol;
        self.checks.push(CheckResult {
            name,
            worst,
            tol,
            pass,
        });
    }
}

/// Worst-violation update that treats any non-finite sample as a failure.
fn bump<T: Real>(worst: &mut T, violation: T) {
    if !violation.is_finite() {
        *worst = T::infinity();
    } else if violation > *worst {
        *worst = violation;
    }
}

/// Samples every RhoMap invariant on `grid` and reports worst violations.
///
/// The derivative entry also cross-validates ρ' against a central finite
/// difference of ρ; that comparison is floored at 1e−6 relative because the
/// difference quotient itself carries O(h²) truncation error.
pub fn validate_rho<T: Real>(map: &RhoMap<T>, grid: &[T], tol: T) -> Result<ValidationReport<T>> {
    if grid.is_empty() {
        return Err(Error::Usage("validation grid is empty".into()));
    }
    if grid.iter().any(|&x| !(x >= T::zero())) {
        return Err(Error::Usage("validation grid must lie in [0,∞)".into()));
    }
    if !grid.iter().any(|&x| x == T::zero()) {
        return Err(Error::Usage("validation grid must include 0".into()));
    }

    let mut report = ValidationReport { checks: Vec::new() };
    let values: Vec<T> = grid.iter().map(|&x| map.rho(x)).collect();
    let primes: Vec<T> = grid.iter().map(|&x| map.rho_prime(x)).collect();

    // rho(0) = 0 (condition c2).
    let mut worst = T::zero();
    bump(&mut worst, map.rho(T::zero()).abs());
    report.push("rho-at-zero", worst, tol);

    // rho_prime >= 1 on the grid (condition c2).
    let mut worst = T::zero();
    for &p in &primes {
        bump(&mut worst, T::one() - p);
    }
    report.push("derivative-lower-bound", worst.max(T::zero()), tol);

    // Non-decrease of rho along the grid; exact ties surface through the
    // expansion check below, whose violation scale is the x-spacing.
    let mut worst = T::zero();
    for w in values.windows(2) {
        bump(&mut worst, w[0] - w[1]);
    }
    report.push("strictly-increasing", worst, tol);

    // Inverse round-trip rho_inverse(rho(x)) = x, relative to max(1, x).
    let mut worst = T::zero();
    for (&x, &r) in grid.iter().zip(&values) {
        match map.invert(r, tol.min(T::of(1e-10)).max(T::epsilon() * T::of(16.0))) {
            Ok(back) => bump(&mut worst, (back - x).abs() / T::one().max(x.abs())),
            Err(_) => bump(&mut worst, T::infinity()),
        }
    }
    report.push("inverse-roundtrip", worst, tol.max(T::of(1e-10)));

    // Expansion |x − t| <= |rho(x) − rho(t)| on all grid pairs.
    let mut worst = T::zero();
    for i in 0..grid.len() {
        for j in (i + 1)..grid.len() {
            let lhs = (grid[j] - grid[i]).abs();
            let rhs = (values[j] - values[i]).abs();
            bump(&mut worst, lhs - rhs);
        }
    }
    report.push("expansion", worst.max(T::zero()), tol);

    // Central finite difference of rho vs rho_prime on interior points.
    let fd_tol = tol.max(T::of(1e-6));
    let mut worst = T::zero();
    for (idx, &x) in grid.iter().enumerate() {
        if idx == 0 || idx + 1 == grid.len() {
            continue;
        }
        let mut h = T::epsilon().cbrt() * T::one().max(x.abs());
        if x - h < T::zero() {
            h = x * T::of(0.5);
        }
        if h == T::zero() {
            continue;
        }
        let fd = (map.rho(x + h) - map.rho(x - h)) / (h + h);
        let p = map.rho_prime(x);
        bump(&mut worst, (fd - p).abs() / T::one().max(p.abs()));
    }
    report.push("derivative-finite-difference", worst, fd_tol);

    Ok(report)
}

/// 0 followed by `count` geometrically spaced points on (x_max·1e−6, x_max].
pub fn default_grid<T: Real>(x_max: T, count: usize) -> Vec<T> {
    let mut grid = Vec::with_capacity(count + 1);
    grid.push(T::zero());
    if count == 0 {
        return grid;
    }
    let lo = x_max * T::of(1e-6);
    let ratio = (x_max / lo).ln() / T::of_u64(count.max(2) as u64 - 1);
    for i in 0..count {
        grid.push(lo * (ratio * T::of_u64(i as u64)).exp());
    }
    let last = grid.len() - 1;
    grid[last] = x_max;
    grid
}

/// Default 512-point validation/evaluation grid for a map.
pub fn grid_for<T: Real>(map: &RhoMap<T>) -> Vec<T> {
    default_grid(map.domain_hint(), 512)
}

/// ρ(x) = x. The classical Baskakov case.
pub fn identity<T: Real>() -> RhoMap<T> {
    RhoMap::new(
        "identity",
        Arc::new(|x| x),
        Arc::new(|_| T::one()),
        InverseRule::ClosedForm(Arc::new(|y| y)),
    )
    .expect("identity map construction cannot fail")
}

/// ρ(x) = x + x², with inverse (√(1+4y) − 1)/2.
pub fn quadratic<T: Real>() -> RhoMap<T> {
    RhoMap::new(
        "quadratic",
        Arc::new(|x: T| x + x * x),
        Arc::new(|x: T| T::one() + x + x),
        InverseRule::ClosedForm(Arc::new(|y: T| {
            let four = T::of(4.0);
            ((T::one() + four * y).sqrt() - T::one()) * T::of(0.5)
        })),
    )
    .expect("quadratic map construction cannot fail")
}

/// ρ(x) = (e^{ax} − 1)/a for 0 < a ≤ 4, with ρ'(x) = e^{ax} ≥ 1 on [0,∞).
///
/// Growth beyond a = 4 makes series truncation indices explode; the catalog
/// caps there and leaves faster growth untested.
pub fn scaled_exp<T: Real>(a: T) -> Result<RhoMap<T>> {
    if !(a > T::zero()) || a > T::of(4.0) {
        return Err(Error::Usage(format!(
            "scaled-exp parameter must satisfy 0 < a <= 4, got {a}"
        )));
    }
    RhoMap::new(
        format!("scaled-exp(a={a})"),
        Arc::new(move |x: T| (a * x).exp_m1() / a),
        Arc::new(move |x: T| (a * x).exp()),
        InverseRule::ClosedForm(Arc::new(move |y: T| (a * y).ln_1p() / a)),
    )
}

/// ρ(x) = sinh(x); ρ'(0) = 1 attains the infimum.
pub fn hyperbolic_sine<T: Real>() -> RhoMap<T> {
    RhoMap::new(
        "sinh",
        Arc::new(|x: T| x.sinh()),
        Arc::new(|x: T| x.cosh()),
        InverseRule::ClosedForm(Arc::new(|y: T| y.asinh())),
    )
    .expect("sinh map construction cannot fail")
}

/// The built-in catalog: identity, quadratic, scaled exponential (a = 1), sinh.
/// All entries pass [`validate_rho`] on their default grids.
pub fn builtin_catalog<T: Real>() -> Vec<RhoMap<T>> {
    vec![
        identity(),
        quadratic(),
        scaled_exp(T::one()).expect("a=1 is inside the allowed range"),
        hyperbolic_sine(),
    ]
}

/// Catalog lookup by name; `param` feeds the scaled-exp family.
pub fn by_name<T: Real>(name: &str, param: Option<T>) -> Result<RhoMap<T>> {
    match name {
        "identity" => Ok(identity()),
        "quadratic" => Ok(quadratic()),
        "scaled-exp" => scaled_exp(param.unwrap_or_else(T::one)),
        "sinh" => Ok(hyperbolic_sine()),
        other => Err(Error::Usage(format!(
            "unknown rho '{other}' (expected identity|quadratic|scaled-exp|sinh)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_grid() -> Vec<f64> {
        (0..=10).map(f64::from).collect()
    }

    #[test]
    fn identity_validates_on_integer_grid() {
        let report = validate_rho(&identity::<f64>(), &unit_grid(), 1e-9).unwrap();
        assert!(report.pass(), "{:?}", report.checks);
    }

    #[test]
    fn quadratic_validates_and_inverts_six_to_two() {
        let map = quadratic::<f64>();
        let report = validate_rho(&map, &unit_grid(), 1e-9).unwrap();
        assert!(report.pass(), "{:?}", report.checks);
        assert!((map.invert(6.0, 1e-12).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn decreasing_rho_fails_derivative_check() {
        // rho(x) = x - x^2 has rho'(1) = -1 < 1.
        let bad = RhoMap {
            name: "x-minus-x2".into(),
            rho: Arc::new(|x: f64| x - x * x),
            rho_prime: Arc::new(|x: f64| 1.0 - 2.0 * x),
            inverse: InverseRule::Numeric,
            domain_hint: 2.0,
        };
        let report = validate_rho(&bad, &unit_grid(), 1e-9).unwrap();
        assert!(!report.pass());
        let deriv = report
            .checks
            .iter()
            .find(|c| c.name == "derivative-lower-bound")
            .unwrap();
        assert!(!deriv.pass);
        // worst violation at x = 10: 1 - (1 - 20) = 20
        assert!((deriv.worst - 20.0).abs() < 1e-12);
    }

    #[test]
    fn numeric_inversion_of_scaled_exp() {
        let map = scaled_exp::<f64>(2.0).unwrap();
        // (e^{2x}-1)/2 = 3  =>  x = ln(7)/2
        let x = map.invert_numeric(3.0, 1e-12).unwrap();
        assert!((x - 7f64.ln() / 2.0).abs() < 1e-10);
    }

    #[test]
    fn numeric_inversion_at_zero_is_zero() {
        let map = hyperbolic_sine::<f64>();
        assert_eq!(map.invert_numeric(0.0, 1e-12).unwrap(), 0.0);
    }

    #[test]
    fn negative_ordinate_is_domain_error() {
        let map = identity::<f64>();
        assert!(matches!(
            map.invert_numeric(-1.0, 1e-12),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn catalog_entries_validate_on_default_grids() {
        for map in builtin_catalog::<f64>() {
            let grid = grid_for(&map);
            let report = validate_rho(&map, &grid, 1e-8).unwrap();
            assert!(report.pass(), "{} failed: {:?}", map.name(), report.checks);
        }
    }

    #[test]
    fn catalog_derivative_spot_values() {
        let quad = quadratic::<f64>();
        assert_eq!(quad.rho_prime(3.0), 7.0);
        let sh = hyperbolic_sine::<f64>();
        assert_eq!(sh.rho_prime(0.0), 1.0);
    }

    #[test]
    fn bisection_agrees_with_closed_inverse() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for map in builtin_catalog::<f64>() {
            let y_max = map.rho(map.domain_hint());
            for _ in 0..100 {
                let y: f64 = rng.gen_range(0.0..y_max);
                let closed = map.invert(y, 1e-14).unwrap();
                let numeric = map.invert_numeric(y, 1e-13).unwrap();
                assert!(
                    (closed - numeric).abs() <= 1e-10 * closed.max(1.0),
                    "{}: y={y} closed={closed} numeric={numeric}",
                    map.name()
                );
            }
        }
    }

    #[test]
    fn domain_hint_solves_rho_equals_fifty() {
        for map in builtin_catalog::<f64>() {
            let hint = map.domain_hint();
            assert!(
                (map.rho(hint) - 50.0).abs() < 1e-8,
                "{}: rho(hint)={}",
                map.name(),
                map.rho(hint)
            );
        }
    }

    #[test]
    fn scaled_exp_parameter_cap() {
        assert!(scaled_exp::<f64>(4.5).is_err());
        assert!(scaled_exp::<f64>(0.0).is_err());
        assert!(scaled_exp::<f64>(4.0).is_ok());
    }

    #[test]
    fn empty_grid_is_usage_error() {
        assert!(matches!(
            validate_rho(&identity::<f64>(), &[], 1e-9),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn non_finite_rho_fails_validation_without_crash() {
        let bad = RhoMap {
            name: "nan-at-two".into(),
            rho: Arc::new(|x: f64| if x == 2.0 { f64::NAN } else { x }),
            rho_prime: Arc::new(|_| 1.0),
            inverse: InverseRule::Numeric,
            domain_hint: 10.0,
        };
        let report = validate_rho(&bad, &unit_grid(), 1e-9).unwrap();
        assert!(!report.pass());
    }
}
