//! Raw and central ρ-moments of the rho-Baskakov operator.
//!
//! Closed forms exist for raw orders 0..=3 and central orders 1..=2; the
//! series path is the independent oracle for all of them and the only route
//! to the fourth central moment, whose closed form the source material never
//! states — only its O(1/n²) order, which [`fourth_moment_order_check`]
//! verifies empirically.
//!
//! Series moments depend on x only through ρ(x), so every entry point has a
//! `*_from_rho_value` twin keyed by (n, ρ(x)).

use crate::error::{Error, Result};
use crate::operator::{Evaluation, OperatorFamily, TruncationPolicy, WeightSeq};
use crate::real::Real;
use crate::rho::RhoMap;

/// Raw vs central moment selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentKind {
    Raw,
    Central,
}

/// A single moment computation request.
#[derive(Debug, Clone, Copy)]
pub struct MomentRequest<T> {
    pub kind: MomentKind,
    pub order: u8,
    pub n: u64,
    pub x: T,
}

impl<T: Real> MomentRequest<T> {
    /// True when a closed form is available for this request.
    pub fn has_closed_form(&self) -> bool {
        match self.kind {
            MomentKind::Raw => self.order <= 3,
            MomentKind::Central => (1..=2).contains(&self.order),
        }
    }

    pub fn closed(&self, rho: &RhoMap<T>) -> Result<T> {
        match self.kind {
            MomentKind::Raw => raw_moment_closed(self.order, self.n, self.x, rho),
            MomentKind::Central => central_moment_closed(self.order, self.n, self.x, rho),
        }
    }

    pub fn series(&self, rho: &RhoMap<T>, policy: &TruncationPolicy<T>) -> Result<Evaluation<T>> {
        match self.kind {
            MomentKind::Raw => raw_moment_series(self.order, self.n, self.x, rho, policy),
            MomentKind::Central => central_moment_series(self.order, self.n, self.x, rho, policy),
        }
    }
}

/// Closed-form V(ρ^m; x) for m ≤ 3.
pub fn raw_moment_closed<T: Real>(m: u8, n: u64, x: T, rho: &RhoMap<T>) -> Result<T> {
    raw_moment_closed_from_rho_value(m, n, rho.rho(x))
}

/// Closed-form raw moment keyed by r = ρ(x):
/// m=0 → 1; m=1 → r; m=2 → r² + (r²+r)/n;
/// m=3 → r/n² + 3(1+n)r²/n² + (2+3n+n²)r³/n².
pub fn raw_moment_closed_from_rho_value<T: Real>(m: u8, n: u64, r: T) -> Result<T> {
    if n == 0 {
        return Err(Error::Usage("moment requires n >= 1".into()));
    }
    let n_t = T::of_u64(n);
    match m {
        0 => Ok(T::one()),
        1 => Ok(r),
        2 => Ok(r * r + (r * r + r) / n_t),
        3 => {
            let n2 = n_t * n_t;
            let r2 = r * r;
            let r3 = r2 * r;
            Ok(r / n2
                + T::of(3.0) * (T::one() + n_t) * r2 / n2
                + (T::of(2.0) + T::of(3.0) * n_t + n2) * r3 / n2)
        }
        _ => Err(Error::Usage(format!(
            "no closed form for raw moment of order {m} (expected 0..=3)"
        ))),
    }
}

/// Closed-form central moment: m=1 → 0 exactly, m=2 → (r²+r)/n.
pub fn central_moment_closed<T: Real>(m: u8, n: u64, x: T, rho: &RhoMap<T>) -> Result<T> {
    central_moment_closed_from_rho_value(m, n, rho.rho(x))
}

pub fn central_moment_closed_from_rho_value<T: Real>(m: u8, n: u64, r: T) -> Result<T> {
    if n == 0 {
        return Err(Error::Usage("moment requires n >= 1".into()));
    }
    match m {
        1 => Ok(T::zero()),
        2 => Ok((r * r + r) / T::of_u64(n)),
        _ => Err(Error::Usage(format!(
            "no closed form for central moment of order {m} (expected 1..=2)"
        ))),
    }
}

/// Series Σ (k/n)^m·w_k with a certified tail bound.
pub fn raw_moment_series<T: Real>(
    m: u8,
    n: u64,
    x: T,
    rho: &RhoMap<T>,
    policy: &TruncationPolicy<T>,
) -> Result<Evaluation<T>> {
    raw_moment_series_from_rho_value(m, n, rho.rho(x), policy)
}

pub fn raw_moment_series_from_rho_value<T: Real>(
    m: u8,
    n: u64,
    r: T,
    policy: &TruncationPolicy<T>,
) -> Result<Evaluation<T>> {
    moment_series(m, n, r, T::zero(), policy)
}

/// Series Σ (k/n − ρ(x))^m·w_k with a certified tail bound — the oracle for
/// every closed form above and the only route to m = 4.
pub fn central_moment_series<T: Real>(
    m: u8,
    n: u64,
    x: T,
    rho: &RhoMap<T>,
    policy: &TruncationPolicy<T>,
) -> Result<Evaluation<T>> {
    central_moment_series_from_rho_value(m, n, rho.rho(x), policy)
}

pub fn central_moment_series_from_rho_value<T: Real>(
    m: u8,
    n: u64,
    r: T,
    policy: &TruncationPolicy<T>,
) -> Result<Evaluation<T>> {
    moment_series(m, n, r, r, policy)
}

/// Shared series engine over the Baskakov weight recurrence.
///
/// Terms past the mean have strictly decreasing ratios
/// t_{k+1}/t_k = ((k+1−nc)/(k−nc))^m · w_{k+1}/w_k, so once that ratio q
/// drops below 1 the remaining tail is bounded by the geometric majorant
/// t_{k+1}/(1−q). Summation stops when the mean is passed, the mass target
/// is met, and the certified m-th-moment tail is below
/// mass_tol·(1 + |partial sum|).
fn moment_series<T: Real>(
    m: u8,
    n: u64,
    r: T,
    center: T,
    policy: &TruncationPolicy<T>,
) -> Result<Evaluation<T>> {
    if n == 0 {
        return Err(Error::Usage("moment requires n >= 1".into()));
    }
    if m > 4 {
        return Err(Error::Usage(format!(
            "moment order {m} out of range (expected 0..=4)"
        )));
    }
    policy.validate(n)?;
    if !r.is_finite() || r < T::zero() {
        return Err(Error::Numeric(format!("rho value {r} is not usable")));
    }
    if r == T::zero() {
        // Single unit weight at k=0; node 0, offset -center.
        let value = (T::zero() - center).powi(m as i32);
        return Ok(Evaluation {
            value,
            tail_bound: T::zero(),
        });
    }

    let n_t = T::of_u64(n);
    let k_max = policy.effective_k_max(n, r);
    let mass_target = T::one() - policy.mass_tol;
    let mut seq = WeightSeq::new(OperatorFamily::RhoBaskakov, n, r);

    let mut sum = T::zero();
    let mut cum_mass = T::zero();
    loop {
        let k_t = T::of_u64(seq.index() as u64);
        let offset = k_t / n_t - center;
        let w = seq.weight();
        let term = offset.powi(m as i32) * w;
        sum += term;
        cum_mass += w;

        let past_mean = k_t >= n_t * r;
        if past_mean && offset > T::zero() {
            // Certified geometric tail for the *moment* terms.
            let w_ratio = seq.ratio();
            let next_offset = offset + T::one() / n_t;
            let q = (next_offset / offset).powi(m as i32) * w_ratio;
            if q < T::one() {
                let next_term = next_offset.powi(m as i32) * w * w_ratio;
                let tail = next_term / (T::one() - q);
                let target_met =
                    cum_mass >= mass_target && tail <= policy.mass_tol * (T::one() + sum.abs());
                // The float sum saturates once terms drop under ~ulp(sum)/4;
                // past that point only the reported tail bound can grow.
                let saturated =
                    next_term <= (T::one() + sum.abs()) * T::epsilon() * T::of(0.25);
                if target_met || saturated {
                    return Ok(Evaluation {
                        value: sum,
                        tail_bound: tail,
                    });
                }
            }
        }
        if seq.index() + 1 > k_max {
            return Err(Error::Truncation {
                collected_mass: cum_mass.to_f64().unwrap_or(f64::NAN),
                k_max,
            });
        }
        seq.advance();
    }
}

/// Evidence record for the O(1/n²) fourth-central-moment claim.
#[derive(Debug, Clone)]
pub struct OrderCheckReport<T> {
    /// (n, n²·μ₄(n)) pairs.
    pub scaled: Vec<(u64, T)>,
    /// Successive ratios of the scaled values.
    pub ratios: Vec<T>,
    /// Least-squares limit of the scaled sequence under an L + C/n model.
    pub limit: T,
    pub pass: bool,
}

/// Computes n²·μ₄ along `n_list` and passes iff the sequence is bounded with
/// successive ratios approaching 1 within `ratio_tol` — evidence that the
/// fourth central moment decays at exactly order n⁻².
pub fn fourth_moment_order_check<T: Real>(
    x: T,
    rho: &RhoMap<T>,
    n_list: &[u64],
    ratio_tol: T,
    policy: &TruncationPolicy<T>,
) -> Result<OrderCheckReport<T>> {
    if n_list.len() < 3 {
        return Err(Error::Usage("order check needs at least 3 indices".into()));
    }
    if n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Usage("n_list must be strictly increasing".into()));
    }
    // A doubling sequence of >= 3 steps qualifies as a decade-scale span.
    if n_list[n_list.len() - 1] < 8 * n_list[0] {
        return Err(Error::Usage(
            "n_list must span at least a decade of indices".into(),
        ));
    }

    let mut scaled = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let n_t = T::of_u64(n);
        let mu4 = central_moment_series(4, n, x, rho, policy)?;
        scaled.push((n, n_t * n_t * mu4.value));
    }

    // Interpolation at 0 zeroes every moment; that trivially satisfies O(1/n²).
    let tiny = T::of(1e-30);
    if scaled.iter().all(|&(_, s)| s.abs() <= tiny) {
        return Ok(OrderCheckReport {
            scaled,
            ratios: Vec::new(),
            limit: T::zero(),
            pass: true,
        });
    }

    let ratios: Vec<T> = scaled
        .windows(2)
        .map(|w| w[1].1 / w[0].1)
        .collect();
    let limit = fit_limit(&scaled);
    let bounded = scaled.iter().all(|&(_, s)| s.is_finite());
    let final_dev = (ratios[ratios.len() - 1] - T::one()).abs();
    let first_dev = (ratios[0] - T::one()).abs();
    let pass = bounded && final_dev <= ratio_tol && final_dev <= first_dev + T::of(1e-9);

    Ok(OrderCheckReport {
        scaled,
        ratios,
        limit,
        pass,
    })
}

/// Least-squares fit of s_n = L + C/n; returns L.
pub(crate) fn fit_limit<T: Real>(points: &[(u64, T)]) -> T {
    let mut a = T::zero(); // Σ 1
    let mut b = T::zero(); // Σ 1/n
    let mut d = T::zero(); // Σ 1/n²
    let mut s = T::zero(); // Σ y
    let mut t = T::zero(); // Σ y/n
    for &(n, y) in points {
        let inv = T::of_u64(n).recip();
        a += T::one();
        b += inv;
        d += inv * inv;
        s += y;
        t += y * inv;
    }
    let det = a * d - b * b;
    if det == T::zero() {
        return s / a;
    }
    (d * s - b * t) / det
}
