//! Summability matrices, A-transforms, A-density, and A-statistical limits.
//!
//! Limits over the row index are decided by trend testing at a finite
//! horizon; verdicts carry the horizon so `Inconclusive` is an honest
//! outcome. The Korovkin-type demonstration drives the closed-form operator
//! error sequence, so horizons up to 10⁶ stay cheap.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::real::Real;
use crate::rho::RhoMap;
use crate::weighted::{weighted_norm, SpaceExponent, SupGrid, WeightedSpace};

/// An infinite nonnegative matrix given by an entry rule with finite row
/// support.
#[derive(Clone)]
pub struct SummabilityMatrix<T> {
    name: String,
    entry: Arc<dyn Fn(u64, u64) -> T + Send + Sync>,
    /// Inclusive (start, end) column range outside which a(j, ·) = 0.
    row_support: Arc<dyn Fn(u64) -> (u64, u64) + Send + Sync>,
}

impl<T> fmt::Debug for SummabilityMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SummabilityMatrix")
            .field("name", &self.name)
            .finish()
    }
}

impl<T: Real> SummabilityMatrix<T> {
    pub fn from_rule(
        name: impl Into<String>,
        entry: Arc<dyn Fn(u64, u64) -> T + Send + Sync>,
        row_support: Arc<dyn Fn(u64) -> (u64, u64) + Send + Sync>,
    ) -> Self {
        SummabilityMatrix {
            name: name.into(),
            entry,
            row_support,
        }
    }

    /// Cesàro C₁: a(j, n) = 1/j for n ≤ j.
    pub fn cesaro_c1() -> Self {
        SummabilityMatrix::from_rule(
            "cesaro-c1",
            Arc::new(|j, n| {
                if n >= 1 && n <= j {
                    T::of_u64(j).recip()
                } else {
                    T::zero()
                }
            }),
            Arc::new(|j| (1, j)),
        )
    }

    /// The identity matrix; A-statistical convergence degenerates to
    /// ordinary convergence.
    pub fn identity() -> Self {
        SummabilityMatrix::from_rule(
            "identity",
            Arc::new(|j, n| if j == n { T::one() } else { T::zero() }),
            Arc::new(|j| (j, j)),
        )
    }

    /// Uniform band of `width` columns starting at the diagonal; rows sum to
    /// 1 and every column dies off, so the matrix is regular.
    pub fn banded(width: u64) -> Result<Self> {
        if width == 0 {
            return Err(Error::Usage("band width must be >= 1".into()));
        }
        Ok(SummabilityMatrix::from_rule(
            format!("banded({width})"),
            Arc::new(move |j, n| {
                if n >= j && n < j + width {
                    T::of_u64(width).recip()
                } else {
                    T::zero()
                }
            }),
            Arc::new(move |j| (j, j + width - 1)),
        ))
    }

    pub fn by_name(name: &str, width: Option<u64>) -> Result<Self> {
        match name {
            "cesaro" | "cesaro-c1" => Ok(Self::cesaro_c1()),
            "identity" => Ok(Self::identity()),
            "banded" => Self::banded(width.unwrap_or(8)),
            other => Err(Error::Usage(format!(
                "unknown matrix '{other}' (expected cesaro|identity|banded)"
            ))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn entry(&self, j: u64, n: u64) -> T {
        (self.entry)(j, n)
    }

    pub fn row_support(&self, j: u64) -> (u64, u64) {
        (self.row_support)(j)
    }

    fn row_iter(&self, j: u64, horizon: u64) -> Result<impl Iterator<Item = u64>> {
        let (start, end) = self.row_support(j);
        if end.saturating_sub(start) > 100_000_000 {
            return Err(Error::Numeric(format!(
                "row support of {} at j={j} spans {} columns",
                self.name,
                end - start
            )));
        }
        Ok(start.max(1)..=end.min(horizon))
    }
}

/// An index set with decidable membership up to a horizon.
#[derive(Clone)]
pub struct IndexSet {
    name: String,
    pred: Arc<dyn Fn(u64) -> bool + Send + Sync>,
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IndexSet").field("name", &self.name).finish()
    }
}

impl IndexSet {
    pub fn new(name: impl Into<String>, pred: Arc<dyn Fn(u64) -> bool + Send + Sync>) -> Self {
        IndexSet {
            name: name.into(),
            pred,
        }
    }

    pub fn naturals() -> Self {
        IndexSet::new("naturals", Arc::new(|_| true))
    }

    pub fn evens() -> Self {
        IndexSet::new("evens", Arc::new(|n| n % 2 == 0))
    }

    pub fn perfect_squares() -> Self {
        IndexSet::new(
            "perfect-squares",
            Arc::new(|n| {
                let r = (n as f64).sqrt().round() as u64;
                r * r == n
            }),
        )
    }

    pub fn complement(&self) -> Self {
        let pred = self.pred.clone();
        IndexSet::new(format!("complement-of-{}", self.name), Arc::new(move |n| !pred(n)))
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "naturals" => Ok(Self::naturals()),
            "evens" => Ok(Self::evens()),
            "squares" | "perfect-squares" => Ok(Self::perfect_squares()),
            other => Err(Error::Usage(format!(
                "unknown index set '{other}' (expected naturals|evens|squares)"
            ))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn contains(&self, n: u64) -> bool {
        (self.pred)(n)
    }
}

/// (Ax)_j restricted to the horizon, with the row mass left out of reach.
#[derive(Debug, Clone, Copy)]
pub struct TransformEstimate<T> {
    pub value: T,
    /// Σ a(j, n) over support columns beyond the horizon.
    pub omitted_mass: T,
}

/// (Ax)_j = Σ a(j,n)·x_n over the row support up to `horizon`.
pub fn a_transform<T: Real>(
    matrix: &SummabilityMatrix<T>,
    x: &(impl Fn(u64) -> T + ?Sized),
    j: u64,
    horizon: u64,
) -> Result<TransformEstimate<T>> {
    if j == 0 {
        return Err(Error::Usage("row index j must be >= 1".into()));
    }
    let mut value = T::zero();
    let mut abs_mass = T::zero();
    for n in matrix.row_iter(j, horizon)? {
        let a = matrix.entry(j, n);
        value += a * x(n);
        abs_mass += a.abs();
        if !value.is_finite() || abs_mass > T::of(1e12) {
            return Err(Error::Numeric(format!(
                "row {j} of {} diverges",
                matrix.name()
            )));
        }
    }
    let (start, end) = matrix.row_support(j);
    let mut omitted_mass = T::zero();
    if end > horizon {
        for n in (horizon + 1).max(start)..=end {
            omitted_mass += matrix.entry(j, n).abs();
        }
    }
    Ok(TransformEstimate {
        value,
        omitted_mass,
    })
}

/// Row-weighted indicator mass of K at each requested j.
pub fn a_density<T: Real>(
    matrix: &SummabilityMatrix<T>,
    set: &IndexSet,
    j_list: &[u64],
    horizon: u64,
) -> Result<Vec<(u64, T)>> {
    let chi = |n: u64| {
        if set.contains(n) {
            T::one()
        } else {
            T::zero()
        }
    };
    j_list
        .iter()
        .map(|&j| Ok((j, a_transform(matrix, &chi, j, horizon)?.value)))
        .collect()
}

/// Numerical Silverman–Toeplitz check: rows sum to 1, columns die off,
/// absolute row sums stay bounded.
#[derive(Debug, Clone)]
pub struct RegularityReport<T> {
    pub row_sums: Vec<(u64, T)>,
    /// (column, entry at the largest sampled j).
    pub column_finals: Vec<(u64, T)>,
    pub abs_row_sum_max: T,
    pub rows_pass: bool,
    pub columns_pass: bool,
    pub bounded_pass: bool,
}

impl<T> RegularityReport<T> {
    pub fn pass(&self) -> bool {
        self.rows_pass && self.columns_pass && self.bounded_pass
    }
}

/// Bound accepted for sup_j Σ_n |a(j,n)|; Silverman–Toeplitz only asks for
/// finiteness, this pins a desk-scale constant.
const ABS_ROW_SUM_CAP: f64 = 100.0;

pub fn regularity_check<T: Real>(
    matrix: &SummabilityMatrix<T>,
    j_max: u64,
    horizon: u64,
    tol: T,
) -> Result<RegularityReport<T>> {
    if j_max < 4 {
        return Err(Error::Usage("j_max must be >= 4".into()));
    }
    // Geometric sample of rows up to j_max.
    let mut j_list = vec![1u64];
    while *j_list.last().unwrap() < j_max {
        let next = (j_list.last().unwrap() * 4).min(j_max);
        j_list.push(next);
    }

    let one = |_: u64| T::one();
    let mut row_sums = Vec::with_capacity(j_list.len());
    let mut abs_max = T::zero();
    for &j in &j_list {
        let t = a_transform(matrix, &one, j, horizon)?;
        row_sums.push((j, t.value + t.omitted_mass));
        let mut abs_sum = T::zero();
        for n in matrix.row_iter(j, horizon)? {
            abs_sum += matrix.entry(j, n).abs();
        }
        abs_max = abs_max.max(abs_sum);
    }
    let final_dev = (row_sums.last().unwrap().1 - T::one()).abs();
    let first_dev = (row_sums[0].1 - T::one()).abs();
    let rows_pass = final_dev <= tol && final_dev <= first_dev + tol;

    let columns = [1u64, 2, 3, 5, 10, 100];
    let mut column_finals = Vec::new();
    let mut columns_pass = true;
    for &n in columns.iter().filter(|&&n| n <= j_max) {
        let first = matrix.entry(j_list[0].max(n), n).abs();
        let last = matrix.entry(j_max, n).abs();
        column_finals.push((n, last));
        if !(last <= tol.max(T::of(10.0) / T::of_u64(j_max)) && last <= first + tol) {
            columns_pass = false;
        }
    }

    Ok(RegularityReport {
        row_sums,
        column_finals,
        abs_row_sum_max: abs_max,
        rows_pass,
        columns_pass,
        bounded_pass: abs_max <= T::of(ABS_ROW_SUM_CAP),
    })
}

/// Trend verdict for a tail-mass sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AstatOutcome {
    Converges,
    Diverges,
    Inconclusive,
}

/// Evidence record for one A-statistical limit test.
#[derive(Debug, Clone)]
pub struct AstatVerdict<T> {
    pub target: T,
    pub epsilon: T,
    /// t_j = Σ_{n : |x_n − L| ≥ ε} a(j, n) at each sampled j.
    pub tail_masses: Vec<(u64, T)>,
    pub verdict: AstatOutcome,
    pub horizon: u64,
    pub threshold: T,
}

/// Decides st_A-lim x = L at tolerance `threshold` by the tail masses
/// t_j = Σ_{|x_n − L| ≥ ε} a(j,n): `Converges` needs the final t_j under the
/// threshold *and* a nonincreasing trend over the final half of the rows.
pub fn astat_limit<T: Real>(
    matrix: &SummabilityMatrix<T>,
    x: &(impl Fn(u64) -> T + ?Sized),
    target: T,
    epsilon: T,
    j_list: &[u64],
    horizon: u64,
    threshold: T,
) -> Result<AstatVerdict<T>> {
    if !(epsilon > T::zero()) {
        return Err(Error::Usage(format!("epsilon must be > 0, got {epsilon}")));
    }
    if j_list.is_empty() || j_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Usage("j_list must be nonempty and increasing".into()));
    }

    let indicator = |n: u64| {
        if (x(n) - target).abs() >= epsilon {
            T::one()
        } else {
            T::zero()
        }
    };
    let mut tail_masses = Vec::with_capacity(j_list.len());
    for &j in j_list {
        tail_masses.push((j, a_transform(matrix, &indicator, j, horizon)?.value));
    }

    let half = tail_masses.len() / 2;
    let final_half = &tail_masses[half..];
    let final_mass = tail_masses.last().unwrap().1;
    let half_max = final_half
        .iter()
        .fold(T::zero(), |acc, &(_, t)| acc.max(t));
    let slack = threshold.max(half_max * T::of(0.05));
    let trend_ok = final_half.windows(2).all(|w| w[1].1 <= w[0].1 + slack);
    let still_falling = final_mass <= half_max * T::of(0.7);

    let verdict = if final_mass <= threshold && trend_ok {
        AstatOutcome::Converges
    } else if trend_ok && still_falling {
        // Heading down but the horizon ran out first.
        AstatOutcome::Inconclusive
    } else if half_max > threshold {
        AstatOutcome::Diverges
    } else {
        AstatOutcome::Inconclusive
    };

    Ok(AstatVerdict {
        target,
        epsilon,
        tail_masses,
        verdict,
        horizon,
        threshold,
    })
}

/// Korovkin-type demonstration on the operator error sequence
/// s_n = ‖V_n(ρ²;·) − ρ²‖_{s=1}.
///
/// The sup of (ρ²+ρ)/(1+ρ²) over the grid is n-independent, so s_n = S/n in
/// closed form and horizons up to 10⁶ cost nothing. A density-zero
/// perturbation (+1 on the perfect squares) keeps the A-statistical limit at
/// 0 under C₁ while destroying ordinary convergence — the witnesses are the
/// squares themselves.
#[derive(Debug, Clone)]
pub struct KorovkinDemoReport<T> {
    pub matrix_name: String,
    /// n·s_n — the grid sup of (ρ²+ρ)/(1+ρ²).
    pub error_constant: T,
    pub unperturbed: Vec<AstatVerdict<T>>,
    pub perturbed: AstatVerdict<T>,
    /// Number of perturbed indices below the horizon.
    pub witness_count: u64,
    /// The largest few perturbed indices, as no-ordinary-limit witnesses.
    pub witness_samples: Vec<u64>,
}

impl<T> KorovkinDemoReport<T> {
    pub fn pass(&self, expect_perturbed: AstatOutcome) -> bool {
        self.unperturbed
            .iter()
            .all(|v| v.verdict == AstatOutcome::Converges)
            && self.perturbed.verdict == expect_perturbed
            && self.witness_count > 0
    }
}

pub fn astat_korovkin_demo<T: Real>(
    rho: &RhoMap<T>,
    n_max: u64,
    matrix: &SummabilityMatrix<T>,
    j_list: &[u64],
) -> Result<KorovkinDemoReport<T>> {
    if n_max < 1_000 {
        return Err(Error::Usage("n_max must be >= 1000".into()));
    }
    let grid = SupGrid::geometric(rho.domain_hint(), 512);
    let space1 = WeightedSpace::new(rho.clone(), SpaceExponent::One);
    let error_constant = weighted_norm(
        |x| {
            let r = rho.rho(x);
            r * r + r
        },
        &space1,
        &grid,
    )?
    .value;

    let s = move |n: u64| error_constant / T::of_u64(n);
    let squares = IndexSet::perfect_squares();
    let s_perturbed = {
        let squares = squares.clone();
        move |n: u64| {
            let base = error_constant / T::of_u64(n);
            if squares.contains(n) {
                base + T::one()
            } else {
                base
            }
        }
    };

    let threshold = T::of(0.01);
    let mut unperturbed = Vec::new();
    for eps in [T::of(0.1), T::of(0.01)] {
        unperturbed.push(astat_limit(
            matrix,
            &s,
            T::zero(),
            eps,
            j_list,
            n_max,
            threshold,
        )?);
    }
    let perturbed = astat_limit(
        matrix,
        &s_perturbed,
        T::zero(),
        T::of(0.5),
        j_list,
        n_max,
        threshold,
    )?;

    let witness_count = (n_max as f64).sqrt().floor() as u64;
    let witness_samples: Vec<u64> = (1..=witness_count)
        .rev()
        .take(3)
        .map(|k| k * k)
        .collect();

    Ok(KorovkinDemoReport {
        matrix_name: matrix.name().to_string(),
        error_constant,
        unperturbed,
        perturbed,
        witness_count,
        witness_samples,
    })
}
