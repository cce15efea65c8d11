//! Summation of `pFq(x) = sum_n x^n / rho(n)` with a rigorous tail bound.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::Model;

/// Hard cap on summed terms.
pub const MAX_TERMS: usize = 10_000;

/// Value of a summed series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesResult {
    pub value: Complex64,
    pub terms_used: usize,
    /// Bound on the modulus of the discarded remainder.
    pub tail_bound: f64,
}

fn check_radius(model: &Model, x: Complex64) -> Result<()> {
    let modulus = x.norm();
    let radius = model.radius();
    if modulus > 0.0 && modulus >= radius {
        return Err(Error::Divergence { modulus, radius });
    }
    if !modulus.is_finite() {
        return Err(Error::Domain(format!("series argument {x} is not finite")));
    }
    Ok(())
}

/// Bound on `sum_{k > n} r^k / rho(k)` given the term `t = r^{n+1} / rho(n+1)`.
///
/// Uses `e(k) >= e_lb(n+2)` for `k >= n+2`, giving a geometric majorant with
/// ratio `r / e_lb(n+2)`. Returns `None` while that ratio is not below 1.
fn geometric_tail(model: &Model, r: f64, n: usize, next_term: f64) -> Option<f64> {
    let ratio = r / model.e_lower_bound(n + 2);
    if ratio < 1.0 {
        Some(next_term / (1.0 - ratio))
    } else {
        None
    }
}

/// `pFq(x)` for the family of `model`.
///
/// Families that reduce to `p = q = 0` after cancelling equal parameter pairs
/// are returned as `exp(x)` directly; the series is badly conditioned for
/// large negative `x`.
pub fn pfq(model: &Model, x: Complex64, tol: f64) -> Result<SeriesResult> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    check_radius(model, x)?;
    if model.is_canonical() {
        return Ok(SeriesResult { value: x.exp(), terms_used: 1, tail_bound: 0.0 });
    }
    pfq_summed(model, x, tol)
}

/// Real-argument convenience wrapper returning only the value.
pub fn pfq_real(model: &Model, x: f64, tol: f64) -> Result<f64> {
    Ok(pfq(model, Complex64::new(x, 0.0), tol)?.value.re)
}

/// Term-by-term summation with no closed-form shortcut.
pub fn pfq_summed(model: &Model, x: Complex64, tol: f64) -> Result<SeriesResult> {
    check_radius(model, x)?;
    let r = x.norm();
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    if r == 0.0 {
        return Ok(SeriesResult { value: sum, terms_used: 1, tail_bound: 0.0 });
    }
    for n in 0..MAX_TERMS {
        let next = term * x / model.e(n + 1);
        if let Some(tail) = geometric_tail(model, r, n, next.norm()) {
            if tail <= tol * sum.norm().max(1.0) {
                return Ok(SeriesResult { value: sum, terms_used: n + 1, tail_bound: tail });
            }
        }
        sum += next;
        term = next;
    }
    Err(Error::Convergence { terms: MAX_TERMS })
}

/// Bound on `sum_{k > n} r^k / rho(k)` for `r >= 0`.
///
/// Explicit terms are added until the geometric majorant applies; returns
/// infinity if `r` is outside the radius.
pub fn positive_tail(model: &Model, r: f64, n: usize) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    if r >= model.radius() {
        return f64::INFINITY;
    }
    let ln_r = r.ln();
    let mut acc = 0.0;
    let mut k = n;
    let mut term = ((k + 1) as f64 * ln_r - model.ln_rho(k + 1)).exp();
    loop {
        if let Some(t) = geometric_tail(model, r, k, term) {
            return acc + t;
        }
        acc += term;
        k += 1;
        if k > n + MAX_TERMS {
            return f64::INFINITY;
        }
        term *= r / model.e(k + 1);
    }
}

/// Truncation level for the positive series `sum r^n / rho(n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositiveTruncation {
    /// Last kept level.
    pub level: usize,
    /// Bound on the discarded sum beyond `level`.
    pub tail: f64,
    /// Partial sum over `0..=level`.
    pub partial: f64,
}

/// Smallest level whose tail bound is at most `rel_tol` times the partial
/// sum, capped at `cap`; at the cap the honest tail bound is reported.
pub fn truncate_positive(model: &Model, r: f64, rel_tol: f64, cap: usize) -> Result<PositiveTruncation> {
    check_radius(model, Complex64::new(r, 0.0))?;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    if r == 0.0 {
        return Ok(PositiveTruncation { level: 0, tail: 0.0, partial: 1.0 });
    }
    for n in 0..=cap {
        let next = term * r / model.e(n + 1);
        if let Some(tail) = geometric_tail(model, r, n, next) {
            if tail <= rel_tol * sum || n == cap {
                return Ok(PositiveTruncation { level: n, tail, partial: sum });
            }
        }
        if n == cap {
            return Ok(PositiveTruncation { level: n, tail: positive_tail(model, r, n), partial: sum });
        }
        sum += next;
        term = next;
    }
    unreachable!("loop returns at n == cap")
}
