//! Barut-Girardello, Klauder-Perelomov and shifted-argument coherent states.
//!
//! Conventions:
//! - labels are complex, the series variable is `x = |z|^2`;
//! - the shifted state with label `Z = eps z + lam sigma` has coefficients
//!   `[eps z + lam sigma]^l / sqrt(rho(l))`, using the generalized binomial,
//!   and is normalized by `N(z, sigma) = sum_l |[eps z + lam sigma]^l|^2 / rho(l)`.
//!   The literal `pFq(|Z|^2)` differs from `N` unless the family is
//!   canonical; it is reported by [`shift_norms`] as a diagnostic.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{build_ladder, LadderKind, StateVector};
use crate::model::Model;
use crate::specfun::series::{pfq, positive_tail, truncate_positive};

/// Ceiling for automatic truncation.
pub const MAX_AUTO_LEVEL: usize = 512;

/// Tolerance used when a normalization series is only needed as a constant.
const SERIES_TOL: f64 = 1e-17;

/// How the Fock space is cut off.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Truncation {
    /// Smallest level whose discarded weight is at most `tol`, capped at
    /// [`MAX_AUTO_LEVEL`].
    Auto { tol: f64 },
    /// Keep levels `0..=N`.
    Fixed(usize),
}

impl Truncation {
    fn check(self) -> Result<()> {
        match self {
            Truncation::Auto { tol } if !(tol > 0.0) => {
                Err(Error::Domain(format!("truncation tolerance must be positive, got {tol}")))
            }
            _ => Ok(()),
        }
    }
}

fn cplx(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn pfq_value(model: &Model, x: f64) -> Result<f64> {
    Ok(pfq(model, cplx(x), SERIES_TOL)?.value.re)
}

/// Coefficients `z^n / sqrt(rho(n) F)` with `rho` and `F` taken from
/// `series`, attached to the family `owner`.
fn coherent(owner: &Model, series: &Model, z: Complex64, trunc: Truncation) -> Result<StateVector> {
    trunc.check()?;
    let r = z.norm_sqr();
    let norm = pfq_value(series, r)?;
    let (level, tail) = match trunc {
        Truncation::Auto { tol } => {
            let t = truncate_positive(series, r, tol, MAX_AUTO_LEVEL)?;
            (t.level, t.tail)
        }
        Truncation::Fixed(n) => (n, positive_tail(series, r, n)),
    };
    let ln_mod = z.norm().ln();
    let theta = z.arg();
    let half_ln_norm = 0.5 * norm.ln();
    let coeffs = (0..=level)
        .map(|n| {
            if n == 0 {
                return cplx((-half_ln_norm).exp());
            }
            if r == 0.0 {
                return cplx(0.0);
            }
            let mag = (n as f64 * ln_mod - 0.5 * series.ln_rho(n) - half_ln_norm).exp();
            Complex64::from_polar(mag, n as f64 * theta)
        })
        .collect();
    Ok(StateVector { coeffs, model: owner.clone(), tail_bound: tail / norm })
}

/// Barut-Girardello state `|z>` with automatic truncation.
pub fn bg_state(model: &Model, z: Complex64, tol: f64) -> Result<StateVector> {
    bg_state_with(model, z, Truncation::Auto { tol })
}

pub fn bg_state_with(model: &Model, z: Complex64, trunc: Truncation) -> Result<StateVector> {
    coherent(model, model, z, trunc)
}

/// Klauder-Perelomov state: coefficients `z^n / sqrt(rho_KP(n))` with
/// `rho_KP(n) = (n!)^2 / rho(n)`, normalized by the dual family's series.
pub fn kp_state(model: &Model, z: Complex64, tol: f64) -> Result<StateVector> {
    kp_state_with(model, z, Truncation::Auto { tol })
}

pub fn kp_state_with(model: &Model, z: Complex64, trunc: Truncation) -> Result<StateVector> {
    coherent(model, &model.dual(), z, trunc)
}

/// `<z|w>` by the kernel formula and by summing coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OverlapReport {
    pub kernel: Complex64,
    pub inner_product: Complex64,
    pub gap: f64,
}

/// Overlap of two BG states.
pub fn overlap(model: &Model, z: Complex64, w: Complex64) -> Result<OverlapReport> {
    let fz = pfq_value(model, z.norm_sqr())?;
    let fw = pfq_value(model, w.norm_sqr())?;
    let kernel = pfq(model, z.conj() * w, SERIES_TOL)?.value / (fz * fw).sqrt();
    let tol = 1e-24;
    let a = bg_state(model, z, tol)?;
    let b = bg_state(model, w, tol)?;
    let inner_product = a.inner(&b);
    Ok(OverlapReport { kernel, inner_product, gap: (kernel - inner_product).norm() })
}

/// `||A- |z> - z |z>||` together with its truncation bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualReport {
    pub residual: f64,
    /// `sqrt(e(N+1) * tail_bound)` plus a rounding floor.
    pub bound: f64,
    pub trunc: usize,
}

/// Eigenvalue residual of the BG state, truncated so that the bound is at
/// most `tol` (or at the automatic cap).
pub fn annihilation_residual(model: &Model, z: Complex64, tol: f64) -> Result<ResidualReport> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let floor = 8.0 * f64::EPSILON * (1.0 + z.norm());
    let mut weight = tol * tol;
    let mut best = None;
    for _ in 0..60 {
        let psi = bg_state(model, z, weight)?;
        let n = psi.trunc();
        let bound = (model.e(n + 1) * psi.tail_bound).sqrt() + floor;
        let done = bound <= tol || n >= MAX_AUTO_LEVEL || weight < 1e-300;
        best = Some((psi, bound));
        if done {
            break;
        }
        weight *= 1e-2;
    }
    let (psi, bound) = best.expect("loop runs at least once");
    let psi = psi.resized(psi.trunc().max(1));
    let low = build_ladder(model, psi.trunc(), LadderKind::Lowering)?;
    let diff = low.apply(&psi)?.add_scaled(-z, &psi)?;
    Ok(ResidualReport { residual: diff.norm(), bound, trunc: psi.trunc() })
}

/// `pFq(conj(z) A-) |sigma>` against `pFq(conj(z) sigma) |sigma>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenReport {
    pub eigenvalue: Complex64,
    pub residual: f64,
    /// `sqrt(sum_n |c_n|^2 T_{N-n}^2)` with `T_j` the tail of the eigenvalue series after `j`.
    pub bound: f64,
    pub trunc: usize,
}

/// Eigenvalue identity of the hypergeometric annihilator on a BG state.
pub fn hypergeometric_eigen_check(model: &Model, z: Complex64, sigma: Complex64, tol: f64) -> Result<EigenReport> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let arg = z.conj() * sigma;
    let eigenvalue = pfq(model, arg, SERIES_TOL)?.value;
    let floor = 16.0 * f64::EPSILON * (1.0 + eigenvalue.norm());
    let r = arg.norm();
    let mut weight = (tol * 1e-2).powi(2);
    let mut chosen = None;
    for _ in 0..40 {
        let psi = bg_state(model, sigma, weight)?;
        let n = psi.trunc();
        let b2: f64 =
            psi.coeffs.iter().enumerate().map(|(k, c)| c.norm_sqr() * positive_tail(model, r, n - k).powi(2)).sum();
        let bound = b2.sqrt() + floor;
        let done = bound <= tol || n >= MAX_AUTO_LEVEL || weight < 1e-300;
        chosen = Some((psi, bound));
        if done {
            break;
        }
        weight *= 1e-2;
    }
    let (psi, bound) = chosen.expect("loop runs at least once");
    let psi = psi.resized(psi.trunc().max(1));
    let low = build_ladder(model, psi.trunc(), LadderKind::Lowering)?;
    let lhs = low.hypergeometric_apply(z.conj(), &psi)?;
    let diff = lhs.add_scaled(-eigenvalue, &psi)?;
    Ok(EigenReport { eigenvalue, residual: diff.norm(), bound, trunc: psi.trunc() })
}

/// Generalized Newton binomial `[x+y]^l` with its summands.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinomialPower {
    pub l: usize,
    pub value: Complex64,
    pub terms: Vec<Complex64>,
}

/// `[x+y]^l = sum_n rho(l)/(rho(n) rho(l-n)) x^{l-n} y^n`.
pub fn gen_binom_power(model: &Model, x: Complex64, y: Complex64, l: usize) -> BinomialPower {
    let terms: Vec<Complex64> = (0..=l)
        .map(|n| {
            let c = model.func_binom(l, n).expect("n <= l");
            c * (x.powu((l - n) as u32) * y.powu(n as u32))
        })
        .collect();
    BinomialPower { l, value: terms.iter().sum(), terms }
}

/// Label data of a shifted state, `Z = eps z + lam sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShiftSpec {
    pub eps: f64,
    pub z: Complex64,
    pub lam: f64,
    pub sigma: Complex64,
}

impl ShiftSpec {
    pub fn new(eps: f64, z: Complex64, lam: f64, sigma: Complex64) -> Self {
        ShiftSpec { eps, z, lam, sigma }
    }

    /// `eps z`.
    pub fn x(&self) -> Complex64 {
        self.z * self.eps
    }

    /// `lam sigma`.
    pub fn y(&self) -> Complex64 {
        self.sigma * self.lam
    }

    /// `Z = eps z + lam sigma`.
    pub fn label(&self) -> Complex64 {
        self.x() + self.y()
    }

    /// `|Z|` and the phase of `Z`; `|Z| e^{i phi}` reproduces the label.
    pub fn polar(&self) -> (f64, f64) {
        self.label().to_polar()
    }
}

/// `ln |[x+y]^l|` with `x, y` replaced by their moduli, the majorant of the
/// generalized binomial.
fn ln_binom_majorant(model: &Model, lx: f64, ly: f64, l: usize) -> f64 {
    let mut best = f64::NEG_INFINITY;
    let logs: Vec<f64> = (0..=l)
        .map(|m| {
            let v = model.ln_func_binom(l, m).expect("m <= l") + mul_ln((l - m) as f64, lx) + mul_ln(m as f64, ly);
            best = best.max(v);
            v
        })
        .collect();
    if best == f64::NEG_INFINITY {
        return best;
    }
    best + logs.iter().map(|v| (v - best).exp()).sum::<f64>().ln()
}

/// `k * ln r` with `0 * ln 0 = 0`.
fn mul_ln(k: f64, ln_r: f64) -> f64 {
    if k == 0.0 {
        0.0
    } else {
        k * ln_r
    }
}

/// `[x+y]^l / sqrt(rho(l))` summed term by term in the log domain.
fn shifted_amplitude(model: &Model, x: Complex64, y: Complex64, l: usize) -> Complex64 {
    let (rx, tx) = x.to_polar();
    let (ry, ty) = y.to_polar();
    let (lx, ly) = (rx.ln(), ry.ln());
    let half = 0.5 * model.ln_rho(l);
    (0..=l)
        .map(|m| {
            let k = (l - m) as f64;
            let mf = m as f64;
            let ln_mag = half - model.ln_rho(m) - model.ln_rho(l - m) + mul_ln(k, lx) + mul_ln(mf, ly);
            if ln_mag == f64::NEG_INFINITY {
                return cplx(0.0);
            }
            Complex64::from_polar(ln_mag.exp(), k * tx + mf * ty)
        })
        .sum()
}

/// Truncation data shared by both shifted-state routes.
#[derive(Debug, Clone, PartialEq)]
struct ShiftPlan {
    /// `[x+y]^l / sqrt(rho(l))` for the kept levels.
    amplitudes: Vec<Complex64>,
    /// Majorant bound on the discarded weight beyond the last level.
    tail: f64,
    /// `N(z, sigma)`, summed past the truncation.
    norm: f64,
}

fn check_shift_radius(model: &Model, shift: &ShiftSpec) -> Result<()> {
    let radius = model.radius();
    for v in [shift.x(), shift.y()] {
        let m = v.norm_sqr();
        if m > 0.0 && m >= radius {
            return Err(Error::Divergence { modulus: m, radius });
        }
    }
    Ok(())
}

fn plan_shift(model: &Model, shift: &ShiftSpec, trunc: Truncation) -> Result<ShiftPlan> {
    trunc.check()?;
    check_shift_radius(model, shift)?;
    let (x, y) = (shift.x(), shift.y());
    let (lx, ly) = (x.norm().ln(), y.norm().ln());
    if x.norm() == 0.0 && y.norm() == 0.0 {
        let keep = match trunc {
            Truncation::Auto { .. } => 0,
            Truncation::Fixed(n) => n,
        };
        let mut amplitudes = vec![cplx(0.0); keep + 1];
        amplitudes[0] = cplx(1.0);
        return Ok(ShiftPlan { amplitudes, tail: 0.0, norm: 1.0 });
    }
    // Limit of the majorant's term ratio.
    let r_inf = if model.p() > model.q() { x.norm().max(y.norm()).powi(2) } else { 0.0 };
    let ln_major = |l: usize| 2.0 * ln_binom_majorant(model, lx, ly, l) - model.ln_rho(l);
    let tail_after = |n: usize| -> f64 {
        // Geometric majorant from the last two ratios; infinite while they grow past 1.
        let a0 = ln_major(n.saturating_sub(1));
        let a1 = ln_major(n);
        let a2 = ln_major(n + 1);
        let r_prev = if n == 0 { 0.0 } else { (a1 - a0).exp() };
        let r_now = (a2 - a1).exp();
        let q = r_now.max(r_inf);
        if q < 1.0 && (n == 0 || r_now <= r_prev || r_inf > 0.0) {
            a2.exp() / (1.0 - q)
        } else {
            f64::INFINITY
        }
    };
    let mut amplitudes = Vec::new();
    let mut partial = 0.0;
    let tail;
    let mut l = 0usize;
    loop {
        let d = shifted_amplitude(model, x, y, l);
        partial += d.norm_sqr();
        amplitudes.push(d);
        match trunc {
            Truncation::Fixed(n) if l == n => {
                tail = tail_after(l);
                break;
            }
            Truncation::Fixed(_) => {}
            Truncation::Auto { tol } => {
                let t = tail_after(l);
                if t <= tol * partial || l >= MAX_AUTO_LEVEL {
                    tail = t;
                    break;
                }
            }
        }
        l += 1;
    }
    // Sum the normalization past the truncation until the majorant is negligible.
    let mut norm = partial;
    let mut k = amplitudes.len();
    let limit = k + 4 * MAX_AUTO_LEVEL;
    while k < limit {
        if tail_after(k - 1) <= 1e-18 * norm {
            break;
        }
        norm += shifted_amplitude(model, x, y, k).norm_sqr();
        k += 1;
    }
    if !norm.is_finite() || norm <= 0.0 {
        return Err(Error::Convergence { terms: k });
    }
    Ok(ShiftPlan { amplitudes, tail, norm })
}

/// Shifted-argument state with label `eps z + lam sigma`.
pub fn shifted_state(model: &Model, shift: &ShiftSpec, tol: f64) -> Result<StateVector> {
    shifted_state_with(model, shift, Truncation::Auto { tol })
}

pub fn shifted_state_with(model: &Model, shift: &ShiftSpec, trunc: Truncation) -> Result<StateVector> {
    let plan = plan_shift(model, shift, trunc)?;
    let s = 1.0 / plan.norm.sqrt();
    Ok(StateVector {
        coeffs: plan.amplitudes.iter().map(|a| a * s).collect(),
        model: model.clone(),
        tail_bound: plan.tail / plan.norm,
    })
}

/// The three candidate normalizers of a shifted state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShiftNorms {
    /// `N(z, sigma) = sum_l |[Z]^l|^2 / rho(l)`, used for normalization.
    pub module_norm: f64,
    /// `pFq(|eps z + lam sigma|^2)`.
    pub literal_norm: f64,
    /// `sum_l <|[Z]^l|^2>_phase / rho(l)`, the average over the relative phase of `z` and `sigma`.
    pub angular_norm: f64,
    /// `|literal_norm - module_norm| / module_norm`.
    pub literal_gap: f64,
}

pub fn shift_norms(model: &Model, shift: &ShiftSpec, tol: f64) -> Result<ShiftNorms> {
    let plan = plan_shift(model, shift, Truncation::Auto { tol })?;
    let z_abs = shift.label().norm_sqr();
    let literal_norm = if z_abs < model.radius() { pfq_value(model, z_abs)? } else { f64::INFINITY };
    let (rx, ry) = (shift.x().norm_sqr(), shift.y().norm_sqr());
    let mut angular_norm = 0.0;
    for l in 0..plan.amplitudes.len() + 64 {
        let s: f64 = (0..=l)
            .map(|n| {
                let ln = 2.0 * model.ln_func_binom(l, n).expect("n <= l")
                    + mul_ln((l - n) as f64, rx.ln())
                    + mul_ln(n as f64, ry.ln())
                    - model.ln_rho(l);
                ln.exp()
            })
            .sum();
        angular_norm += s;
    }
    let module_norm = plan.norm;
    Ok(ShiftNorms {
        module_norm,
        literal_norm,
        angular_norm,
        literal_gap: (literal_norm - module_norm).abs() / module_norm,
    })
}

/// Result of applying the two displacement operators in sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct SequentialDisplacement {
    /// Normalized output.
    pub state: StateVector,
    /// Norm of the unnormalized output.
    pub factor: f64,
    /// `sqrt(N(z, sigma)) / sqrt(pFq(|lam sigma|^2) pFq(|eps z|^2))`.
    pub predicted_factor: f64,
}

/// `pFq(lam sigma A+) / sqrt(pFq(|lam sigma|^2))` applied to the BG state of `eps z`.
///
/// Uses the same truncation as [`shifted_state`] so the two routes can be
/// compared entrywise.
pub fn sequential_displacement(model: &Model, shift: &ShiftSpec, tol: f64) -> Result<SequentialDisplacement> {
    sequential_displacement_with(model, shift, Truncation::Auto { tol })
}

pub fn sequential_displacement_with(
    model: &Model,
    shift: &ShiftSpec,
    trunc: Truncation,
) -> Result<SequentialDisplacement> {
    let plan = plan_shift(model, shift, trunc)?;
    let level = (plan.amplitudes.len() - 1).max(1);
    let (x, y) = (shift.x(), shift.y());
    let psi = bg_state_with(model, x, Truncation::Fixed(level))?;
    let up = build_ladder(model, level, LadderKind::Raising)?;
    let fy = pfq_value(model, y.norm_sqr())?;
    let fx = pfq_value(model, x.norm_sqr())?;
    let phi = up.hypergeometric_apply(y, &psi)?.scaled(cplx(1.0 / fy.sqrt()));
    let factor = phi.norm();
    let mut state = phi.scaled(cplx(1.0 / factor));
    state.tail_bound = plan.tail / plan.norm;
    Ok(SequentialDisplacement { state, factor, predicted_factor: (plan.norm / (fx * fy)).sqrt() })
}

/// Diagonal coherent-state element of the generalized displacement operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagonalReport {
    /// `pFq(z s*) pFq(z* s) / (sqrt(pFq(|z|^2)) pFq(|s|^2))`.
    pub closed_form: Complex64,
    /// Matrix element between normalized truncated states.
    pub truncated: Complex64,
    /// `pFq(|s|^2)`, the factor separating the two.
    pub sigma_norm: f64,
    /// `|closed_form * sigma_norm - truncated| / max(1, |truncated|)`.
    pub gap: f64,
}

/// `<sigma| #pFq(z A+) pFq(conj(z) A-)# |sigma> / sqrt(pFq(|z|^2))`.
///
/// With normalized `|sigma>` the truncated element equals the closed form times
/// `pFq(|sigma|^2)`; the gap compares the two on that footing.
pub fn displacement_diagonal(model: &Model, z: Complex64, sigma: Complex64) -> Result<DiagonalReport> {
    let fz = pfq_value(model, z.norm_sqr())?;
    let fs = pfq_value(model, sigma.norm_sqr())?;
    let a = pfq(model, z * sigma.conj(), SERIES_TOL)?.value;
    let b = pfq(model, z.conj() * sigma, SERIES_TOL)?.value;
    let closed_form = a * b / (fz.sqrt() * fs);

    let psi = bg_state(model, sigma, 1e-28)?;
    let psi = psi.resized(psi.trunc().max(1));
    let n = psi.trunc();
    let low = build_ladder(model, n, LadderKind::Lowering)?;
    let up = build_ladder(model, n, LadderKind::Raising)?;
    let phi = low.hypergeometric_apply(z.conj(), &psi)?;
    let chi = up.hypergeometric_apply(z, &phi)?;
    let truncated = psi.inner(&chi) / fz.sqrt();
    let gap = (closed_form * fs - truncated).norm() / truncated.norm().max(1.0);
    Ok(DiagonalReport { closed_form, truncated, sigma_norm: fs, gap })
}
