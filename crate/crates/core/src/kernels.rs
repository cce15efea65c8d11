//! Measure and kernel identities.
//!
//! The integration measure of a family is represented by its Stieltjes
//! moments `Γ(b̃/ã) rho(l)`. Two families have elementary densities in
//! `x = |z|^2` and are also checked by quadrature:
//!
//! | reduced `(p, q)` | density                               |
//! |------------------|---------------------------------------|
//! | `(0, 0)`         | `exp(-x)`                             |
//! | `(0, 1)`         | `2 x^{(b-1)/2} K_{b-1}(2 sqrt(x))`    |

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::Model;
use crate::specfun::gamma::{ln_factorial, ln_gamma_positive, pochhammer};
use crate::specfun::quadrature::radial_quadrature_split;
use crate::specfun::series::pfq;
use crate::specfun::{bessel_k, pfq_real};

/// Moments of the integration measure of one family.
#[derive(Debug, Clone)]
pub struct MomentFunctional {
    pub model: Model,
    /// `Γ(b̃/ã) = prod Γ(b_j) / prod Γ(a_i)`.
    pub normalization: f64,
}

impl MomentFunctional {
    pub fn new(model: &Model) -> Self {
        MomentFunctional { model: model.clone(), normalization: model.ln_gamma_ratio().exp() }
    }

    /// `ln` of `Γ(l+1) prod Γ(b_j+l) / prod Γ(a_i+l)`.
    pub fn ln_moment(&self, l: usize) -> f64 {
        let lf = l as f64;
        let r = self.model.reduced_params();
        let up: f64 = r.b.iter().map(|&b| ln_gamma_positive(b + lf)).sum();
        let down: f64 = r.a.iter().map(|&a| ln_gamma_positive(a + lf)).sum();
        ln_factorial(l) + (up - down)
    }

    /// `Γ(b̃/ã) rho(l)`.
    pub fn moment_exact(&self, l: usize) -> f64 {
        let direct = (1..=l).fold(self.normalization, |acc, k| acc * self.model.e(k));
        if direct.is_finite() && direct > f64::MIN_POSITIVE {
            direct
        } else {
            self.ln_moment(l).exp()
        }
    }
}

/// Density of the measure in `x = |z|^2` for the elementary families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum KernelFamily {
    /// `exp(-x)`.
    Exponential,
    /// `2 x^{nu/2} K_nu(2 sqrt(x))` with `nu = b - 1`.
    BesselK { nu: f64 },
}

impl KernelFamily {
    pub fn of(model: &Model) -> Result<KernelFamily> {
        let r = model.reduced_params();
        match (r.p(), r.q()) {
            (0, 0) => Ok(KernelFamily::Exponential),
            (0, 1) => Ok(KernelFamily::BesselK { nu: r.b[0] - 1.0 }),
            _ => Err(Error::UnsupportedKernel { p: model.p(), q: model.q() }),
        }
    }

    pub fn density(self, x: f64) -> f64 {
        match self {
            KernelFamily::Exponential => (-x).exp(),
            KernelFamily::BesselK { nu } => {
                if x <= 0.0 {
                    return if nu > 0.0 { ln_gamma_positive(nu).exp() } else { f64::INFINITY };
                }
                let s = x.sqrt();
                // Small argument: K_nu(t) ~ Γ(nu) (t/2)^{-nu} / 2 for nu > 0.
                if nu.abs() > 0.0 && 2.0 * s < 1e-8 {
                    return ln_gamma_positive(nu.abs()).exp() * x.powf((nu - nu.abs()) / 2.0);
                }
                let k = bessel_k(nu, 2.0 * s).expect("positive argument");
                2.0 * x.powf(nu / 2.0) * k
            }
        }
    }
}

fn split_for(l: f64) -> f64 {
    10.0f64.max(4.0 * l)
}

/// `∫_0^∞ density(x) x^l dx` by quadrature.
pub fn moment_quadrature(model: &Model, l: usize, tol: f64) -> Result<f64> {
    let family = KernelFamily::of(model)?;
    let lf = l as f64;
    let f = |x: f64| {
        let k = family.density(x);
        if k == 0.0 {
            0.0
        } else {
            k * x.powi(l as i32)
        }
    };
    Ok(radial_quadrature_split(f, split_for(lf), tol * 1e-2)?.value)
}

/// Both sides of a scalar identity with their gap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelReport {
    pub lhs: Complex64,
    pub rhs: Complex64,
    /// `|lhs - rhs| / max(1, |rhs|)`.
    pub gap: f64,
    pub passed: bool,
}

impl KernelReport {
    fn new(lhs: Complex64, rhs: Complex64, tol: f64) -> Self {
        let gap = (lhs - rhs).norm() / rhs.norm().max(1.0);
        KernelReport { lhs, rhs, gap, passed: gap <= tol }
    }
}

fn complex_quadrature<F>(f: F, split: f64, tol: f64, needs_imag: bool) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let re = radial_quadrature_split(|x| f(x).re, split, tol)?.value;
    let im = if needs_imag { radial_quadrature_split(|x| f(x).im, split, tol)?.value } else { 0.0 };
    Ok(Complex64::new(re, im))
}

/// `∫ d²z/π density(|z|^2) pFq(z u) pFq(conj(z) v) = Γ(b̃/ã) pFq(u v)`.
///
/// The angular integral keeps only the diagonal terms, leaving
/// `∫ density(x) sum_l (u v x)^l / rho(l)^2 dx`; the inner series is the
/// family with squared structure function, evaluated at `u v x`.
pub fn reproducing_kernel_check(model: &Model, u: Complex64, v: Complex64, tol: f64) -> Result<KernelReport> {
    let family = KernelFamily::of(model)?;
    let uv = u * v;
    let mf = MomentFunctional::new(model);
    let rhs = pfq(model, uv, 1e-16)?.value * mf.normalization;
    let squared = model.squared();
    let integrand = |x: f64| {
        let k = family.density(x);
        if k == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let a = pfq(&squared, uv * x, 1e-16).map(|r| r.value).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
        a * k
    };
    let split = split_for(1.0 + 4.0 * uv.norm());
    let lhs = complex_quadrature(integrand, split, tol * 1e-2, uv.im != 0.0)?;
    Ok(KernelReport::new(lhs, rhs, tol))
}

/// `(d/du)^n (d/dv)^m exp(u v)` in closed form.
pub fn derivative_kernel_closed_form(n: usize, m: usize, u: Complex64, v: Complex64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..=n.min(m) {
        let binom = (ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)).exp().round();
        let falling = (ln_factorial(m) - ln_factorial(m - k)).exp().round();
        sum += u.powu((m - k) as u32) * v.powu((n - k) as u32) * (binom * falling);
    }
    sum * (u * v).exp()
}

/// `∫ d²z/π exp(-|z|^2) z^n conj(z)^m exp(z u) exp(conj(z) v)` by full
/// polar quadrature, against `(d/du)^n (d/dv)^m exp(u v)`.
///
/// Canonical family only. The angle uses a trapezoid rule with
/// `max(2(n+m)+8, 64)` nodes; the radius uses the adaptive rule in `x = r^2`.
pub fn derivative_kernel_check(
    model: &Model,
    n: usize,
    m: usize,
    u: Complex64,
    v: Complex64,
    tol: f64,
) -> Result<KernelReport> {
    if !model.is_canonical() {
        return Err(Error::UnsupportedKernel { p: model.p(), q: model.q() });
    }
    let nodes = (2 * (n + m) + 8).max(64);
    let phases: Vec<Complex64> =
        (0..nodes).map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / nodes as f64)).collect();
    let angular = |x: f64| -> Complex64 {
        let r = x.sqrt();
        let mut acc = Complex64::new(0.0, 0.0);
        for w in &phases {
            let z = w * r;
            acc += z.powu(n as u32) * z.conj().powu(m as u32) * (z * u + z.conj() * v).exp();
        }
        acc * ((-x).exp() / nodes as f64)
    };
    // d²z/π = r dr dφ/π = dx dφ/(2π); the angular mean supplies the 1/(2π).
    let split = split_for((n + m) as f64 + 4.0 * (u.norm() + v.norm()).powi(2));
    let lhs = complex_quadrature(angular, split, tol * 1e-2, true)?;
    let rhs = derivative_kernel_closed_form(n, m, u, v);
    Ok(KernelReport::new(lhs, rhs, tol))
}

/// One coefficient pair of the series identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesCoefficient {
    pub l: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesIdentityReport {
    pub n: usize,
    pub m: usize,
    pub coefficients: Vec<SeriesCoefficient>,
    pub max_rel_err: f64,
}

fn poch_ratio(a: &[f64], b: &[f64], shift: f64, l: usize) -> f64 {
    let mut v = 1.0;
    for &ai in a {
        v *= pochhammer(ai - shift, l);
    }
    for &bj in b {
        v /= pochhammer(bj - shift, l);
    }
    v
}

/// Coefficient-wise check of
/// `∫ dμ(z) z^n conj(z)^m pFq(z u) pFq(conj(z) v)`.
///
/// The angular integral selects `u^{l-n} v^{l-m}`; with the moments the
/// coefficient is `Γ(b̃/ã) rho(l) / (rho(l-n) rho(l-m))`. The right side
/// writes `z^n pFq(a; b; z u) = C_n (d/du)^n pFq(a-n; b-n; z u)` and sums the
/// product series, giving
///
/// ```text
/// Γ(b̃/ã) C_n C_m P_l l! / ((l-n)! (l-m)!),
/// C_k = prod (b_j-k)_k / prod (a_i-k)_k,
/// P_l = [(a-n)_l/(b-n)_l] [(a-m)_l/(b-m)_l] [(b)_l/(a)_l],
/// ```
///
/// evaluated by direct Pochhammer products. `C_k` carries the sign
/// `(-1)^{k(q-p)}` relative to `prod (1-b_j)_k / prod (1-a_i)_k`.
pub fn series_identity_check(model: &Model, n: usize, m: usize, max_l: usize) -> Result<SeriesIdentityReport> {
    let r = model.reduced_params();
    let (a, b) = (&r.a, &r.b);
    let nf = n as f64;
    let mf = m as f64;
    for &shift in &[nf, mf] {
        for &bj in b {
            let s = bj - shift;
            if s <= 0.0 && s == s.trunc() {
                return Err(Error::Domain(format!("lower parameter {bj} shifted by {shift} hits a pole")));
            }
        }
        for &ai in a {
            let s = ai - shift;
            if s <= 0.0 && s == s.trunc() && -s < shift {
                return Err(Error::Domain(format!("upper parameter {ai} shifted by {shift} gives a zero prefactor")));
            }
        }
    }
    let gamma = model.ln_gamma_ratio().exp();
    let c_n = poch_ratio(b, a, nf, n);
    let c_m = poch_ratio(b, a, mf, m);
    let start = n.max(m);
    let mut coefficients = Vec::new();
    let mut max_rel_err = 0.0f64;
    for l in start..=max_l.max(start) {
        let lhs = gamma * (model.ln_rho(l) - model.ln_rho(l - n) - model.ln_rho(l - m)).exp();
        let p_l = poch_ratio(a, b, nf, l) * poch_ratio(a, b, mf, l) * poch_ratio(b, a, 0.0, l);
        let falling = |k: usize| ((l - k + 1)..=l).map(|i| i as f64).product::<f64>();
        let rhs = gamma * c_n * c_m * p_l * falling(n) * falling(m) / (1..=l).map(|i| i as f64).product::<f64>();
        let rel_err = (lhs - rhs).abs() / lhs.abs();
        max_rel_err = max_rel_err.max(rel_err);
        coefficients.push(SeriesCoefficient { l, lhs, rhs, rel_err });
    }
    Ok(SeriesIdentityReport { n, m, coefficients, max_rel_err })
}

/// Two-variable closure arithmetic at one level `l`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosureReport {
    pub l: usize,
    /// `sum_n C(l,n) {Int_z / ((l-n)! [g(l-n)]!^2)} {Int_sigma / (n! [g(n)]!^2)} [g(l)]!`.
    pub closure_sum: f64,
    /// The same sum through the functional binomial:
    /// `(1/rho(l)) sum_n (rho(l)/(rho(n) rho(l-n)))^2 Int_z Int_sigma`.
    pub functional_form: f64,
    pub binomial_total: u128,
    pub power_of_two: u128,
}

/// Closure arithmetic with the declared integral values
/// `Int_z = (l-n)! [g(l-n)]!^2 / sqrt(2^l [g(l)]!)` and
/// `Int_sigma = n! [g(n)]!^2 / sqrt(2^l [g(l)]!)`.
pub fn two_variable_closure_check(model: &Model, l: usize) -> Result<ClosureReport> {
    if l > 60 {
        return Err(Error::Domain(format!("closure check supports l <= 60, got {l}")));
    }
    let p = model.params();
    let g = |k: usize| poch_ratio(&p.b, &p.a, 0.0, k);
    let fact = |k: usize| (1..=k).map(|i| i as f64).product::<f64>();
    let binom_int = |k: usize| -> u128 {
        let mut c: u128 = 1;
        for i in 0..k {
            c = c * (l - i) as u128 / (i + 1) as u128;
        }
        c
    };
    let scale = ((2f64).powi(l as i32) * g(l)).sqrt();
    let mut closure_sum = 0.0;
    let mut functional_form = 0.0;
    let mut binomial_total: u128 = 0;
    for n in 0..=l {
        let int_z = fact(l - n) * g(l - n).powi(2) / scale;
        let int_s = fact(n) * g(n).powi(2) / scale;
        let c = binom_int(n);
        binomial_total += c;
        closure_sum +=
            c as f64 * (int_z / (fact(l - n) * g(l - n).powi(2))) * (int_s / (fact(n) * g(n).powi(2))) * g(l);
        let fb = model.func_binom(l, n)?;
        functional_form += fb * fb * int_z * int_s;
    }
    functional_form /= model.rho(l);
    Ok(ClosureReport { l, closure_sum, functional_form, binomial_total, power_of_two: 1u128 << l })
}

/// Resolution of the identity from the moments: the diagonal entries
/// `moment(l) / (Γ(b̃/ã) rho(l))` should all be 1; off-diagonal entries vanish
/// by the angular integral. Returns the largest deviation over `0..=trunc`.
pub fn resolution_of_identity(model: &Model, trunc: usize) -> f64 {
    let mf = MomentFunctional::new(model);
    (0..=trunc)
        .map(|l| (mf.ln_moment(l) - model.ln_gamma_ratio() - model.ln_rho(l)).exp_m1().abs())
        .fold(0.0, |acc: f64, e| if acc.is_nan() || e.is_nan() { f64::NAN } else { acc.max(e) })
}

/// `0F1(; b; y)` against `Γ(b) y^{(1-b)/2} I_{b-1}(2 sqrt(y))`; returns the relative gap.
pub fn pho_bessel_gap(b: f64, y: f64) -> Result<f64> {
    let model = Model::pho(b)?;
    let series = pfq_real(&model, y, 1e-17)?;
    if y == 0.0 {
        return Ok((series - 1.0).abs());
    }
    let closed =
        ln_gamma_positive(b).exp() * y.powf((1.0 - b) / 2.0) * crate::specfun::bessel_i(b - 1.0, 2.0 * y.sqrt())?;
    Ok((series - closed).abs() / closed.abs())
}
