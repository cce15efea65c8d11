//! Modified Bessel functions of real order.

use crate::error::{Error, Result};

use super::gamma::{ln_gamma_signed, recip_gamma};

const MAX_SERIES_TERMS: usize = 2000;

/// `I_ν(x)` for real order and `x >= 0`, by the ascending series.
pub fn bessel_i(nu: f64, x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() || !nu.is_finite() {
        return Err(Error::Domain(format!("bessel_i requires finite nu and x >= 0, got nu = {nu}, x = {x}")));
    }
    // I_{-n} = I_n for integer order.
    let nu = if nu < 0.0 && nu == nu.trunc() { -nu } else { nu };
    if x == 0.0 {
        return Ok(if nu == 0.0 {
            1.0
        } else if nu > 0.0 {
            0.0
        } else {
            recip_gamma(nu + 1.0).signum() * f64::INFINITY
        });
    }
    let half = 0.5 * x;
    let first = if nu + 1.0 > 0.0 {
        let lg = ln_gamma_signed(nu + 1.0)?;
        (nu * half.ln() - lg.ln_abs).exp()
    } else {
        half.powf(nu) * recip_gamma(nu + 1.0)
    };
    let q = half * half;
    let mut term = first;
    let mut sum = first;
    for k in 0..MAX_SERIES_TERMS {
        let kf = k as f64;
        term *= q / ((kf + 1.0) * (kf + nu + 1.0));
        sum += term;
        let decreasing = kf + nu + 1.0 > 0.0 && (kf + 1.0) * (kf + nu + 1.0) > q;
        if decreasing && term.abs() <= 1e-17 * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::Convergence { terms: MAX_SERIES_TERMS })
}

/// `K_ν(x)` for real order and `x > 0`.
///
/// Trapezoidal rule on `K_ν(x) = ∫_0^∞ exp(-x cosh t) cosh(νt) dt`; the
/// integrand is entire and doubly-exponentially decaying, so the plain
/// trapezoid converges geometrically in 1/h.
pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() || !nu.is_finite() {
        return Err(Error::Domain(format!("bessel_k requires finite nu and x > 0, got nu = {nu}, x = {x}")));
    }
    let nu = nu.abs();
    let h = (0.5 / x.sqrt()).min(0.1);
    // With the factor exp(-x) pulled out, the t = 0 term is 1.
    let mut sum = 0.5;
    let mut k = 1usize;
    loop {
        let t = k as f64 * h;
        let s = (0.5 * t).sinh();
        let expo = -2.0 * x * s * s;
        let term = 0.5 * ((expo + nu * t).exp() + (expo - nu * t).exp());
        sum += term;
        let past_peak = x * t.sinh() > nu;
        if past_peak && term <= 1e-18 * sum {
            break;
        }
        k += 1;
        if k > 1_000_000 {
            return Err(Error::Convergence { terms: k });
        }
    }
    Ok(h * sum * (-x).exp())
}
