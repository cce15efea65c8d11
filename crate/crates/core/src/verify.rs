//! Verification suites: named checks with tolerances, run in parallel and
//! reported in a fixed order.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{build_ladder, number_expectation, raise_vacuum, LadderKind, StateVector};
use crate::kernels::{
    derivative_kernel_check, moment_quadrature, pho_bessel_gap, reproducing_kernel_check, resolution_of_identity,
    series_identity_check, two_variable_closure_check, KernelFamily, MomentFunctional,
};
use crate::model::{Model, ModelParams};
use crate::specfun::gamma::pochhammer;
use crate::states::{
    annihilation_residual, bg_state, displacement_diagonal, gen_binom_power, hypergeometric_eigen_check, kp_state,
    overlap, sequential_displacement, shifted_state, ShiftSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    States,
    Kernels,
    Limits,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::All => "all",
            Suite::States => "states",
            Suite::Kernels => "kernels",
            Suite::Limits => "limits",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Suite::All),
            "states" => Ok(Suite::States),
            "kernels" => Ok(Suite::Kernels),
            "limits" => Ok(Suite::Limits),
            other => Err(Error::Parse(format!("unknown suite '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

/// One row of a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// The identity under test.
    pub paper_ref: String,
    pub status: CheckStatus,
    pub max_err: f64,
    pub tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: Suite,
    pub params: String,
    pub checks: Vec<Check>,
    pub failed_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    /// Truncation weight for state construction.
    pub tol: f64,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { tol: 1e-10, seed: 0 }
    }
}

/// What a check body returns: the measured error, or a reason to skip.
enum Outcome {
    Measured(f64),
    Skip(String),
}

type Body = Box<dyn Fn(&Model, &VerifyConfig, &mut ChaCha8Rng) -> Result<Outcome> + Send + Sync>;

struct Entry {
    name: &'static str,
    identity: &'static str,
    tol: fn(&VerifyConfig) -> f64,
    body: Body,
}

fn entry<F>(name: &'static str, identity: &'static str, tol: fn(&VerifyConfig) -> f64, body: F) -> Entry
where
    F: Fn(&Model, &VerifyConfig, &mut ChaCha8Rng) -> Result<Outcome> + Send + Sync + 'static,
{
    Entry { name, identity, tol, body: Box::new(body) }
}

/// FNV-1a, used to give each check its own stream.
fn name_hash(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn run_one(entry: &Entry, model: &Model, cfg: &VerifyConfig) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ name_hash(entry.name));
    let tol = (entry.tol)(cfg);
    let (status, max_err, detail) = match (entry.body)(model, cfg, &mut rng) {
        Ok(Outcome::Measured(err)) if err <= tol => (CheckStatus::Pass, err, None),
        Ok(Outcome::Measured(err)) => (CheckStatus::Fail, err, None),
        Ok(Outcome::Skip(why)) => (CheckStatus::Skipped, 0.0, Some(why)),
        Err(e) => (CheckStatus::Fail, f64::INFINITY, Some(e.to_string())),
    };
    Check { name: entry.name.to_string(), paper_ref: entry.identity.to_string(), status, max_err, tol, detail }
}

/// Runs a suite against `model`.
///
/// The `limits` checks use fixed reference families and ignore `model`.
pub fn run_suite(model: &Model, suite: Suite, cfg: &VerifyConfig) -> VerificationReport {
    let entries: Vec<Entry> = match suite {
        Suite::Limits => limit_checks(),
        Suite::States => state_checks(),
        Suite::Kernels => kernel_checks(),
        Suite::All => limit_checks().into_iter().chain(state_checks()).chain(kernel_checks()).collect(),
    };
    let mut checks: Vec<Check> = entries.par_iter().map(|e| run_one(e, model, cfg)).collect();
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    let failed_count = checks.iter().filter(|c| c.status == CheckStatus::Fail).count();
    VerificationReport { suite, params: model.to_string(), checks, failed_count }
}

/// Running maximum that lets NaN through instead of dropping it.
trait Worst {
    fn worst(self, other: f64) -> f64;
}

impl Worst for f64 {
    fn worst(self, other: f64) -> f64 {
        if self.is_nan() || other.is_nan() {
            f64::NAN
        } else {
            self.max(other)
        }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Uniform point in the disk of radius `r`.
pub fn random_label(rng: &mut ChaCha8Rng, r: f64) -> Complex64 {
    let rho = r * rng.gen::<f64>().sqrt();
    Complex64::from_polar(rho, 2.0 * PI * rng.gen::<f64>())
}

/// Label modulus used by randomized sweeps: 2 for entire families, 0.8 inside the unit radius.
pub fn sweep_radius(model: &Model) -> f64 {
    if model.radius().is_finite() {
        0.8 * model.radius().sqrt()
    } else {
        2.0
    }
}

fn ln_factorial_by_sum(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `e^{-|z|^2/2} z^n / sqrt(n!)` by recursion, the harmonic-oscillator coherent state.
pub fn canonical_coherent(z: Complex64, trunc: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(trunc + 1);
    let mut cur = c((-0.5 * z.norm_sqr()).exp(), 0.0);
    for n in 0..=trunc {
        if n > 0 {
            cur = cur * z / (n as f64).sqrt();
        }
        out.push(cur);
    }
    out
}

fn max_rel_ln_err(model: &Model, n_max: usize) -> f64 {
    (0..=n_max)
        .map(|n| {
            let want = ln_factorial_by_sum(n);
            (model.ln_rho(n) - want).abs() / want.abs().max(1.0)
        })
        .fold(0.0, Worst::worst)
}

fn limit_checks() -> Vec<Entry> {
    vec![
        entry(
            "limits.rho_factorial_canonical",
            "rho(n) = n! for p = q = 0",
            |_| 1e-12,
            |_, _, _| Ok(Outcome::Measured(max_rel_ln_err(&Model::canonical(), 50))),
        ),
        entry(
            "limits.rho_factorial_equal_pairs",
            "rho(n) = n! for p = q with a = b",
            |_| 1e-12,
            |_, _, _| {
                let m = Model::new(ModelParams::new(vec![0.7, 2.3], vec![0.7, 2.3]))?;
                Ok(Outcome::Measured(max_rel_ln_err(&m, 50)))
            },
        ),
        entry(
            "limits.bg_closed_form",
            "canonical |z> = e^{-|z|^2/2} sum z^n/sqrt(n!) |n>",
            |_| 1e-12,
            |_, cfg, rng| {
                let mut err = 0.0f64;
                for m in [Model::canonical(), Model::new(ModelParams::new(vec![0.7, 2.3], vec![2.3, 0.7]))?] {
                    for _ in 0..20 {
                        let z = random_label(rng, 2.0);
                        let psi = bg_state(&m, z, cfg.tol)?;
                        let want = canonical_coherent(z, psi.trunc());
                        for (a, b) in psi.coeffs.iter().zip(&want) {
                            err = err.worst((a - b).norm());
                        }
                    }
                }
                Ok(Outcome::Measured(err))
            },
        ),
        entry(
            "limits.shifted_closed_form",
            "canonical shifted state e^{-|z+sigma|^2/2} (z+sigma)^n/sqrt(n!)",
            |_| 1e-10,
            |_, cfg, rng| {
                let m = Model::canonical();
                let mut err = 0.0f64;
                for _ in 0..20 {
                    let z = random_label(rng, 2.0);
                    let s = random_label(rng, 2.0);
                    let psi = shifted_state(&m, &ShiftSpec::new(1.0, z, 1.0, s), cfg.tol)?;
                    let want = canonical_coherent(z + s, psi.trunc());
                    for (a, b) in psi.coeffs.iter().zip(&want) {
                        err = err.worst((a - b).norm());
                    }
                }
                Ok(Outcome::Measured(err))
            },
        ),
        entry(
            "limits.canonical_ladder",
            "a|n> = sqrt(n)|n-1>, a+|n> = sqrt(n+1)|n+1>",
            |_| 1e-12,
            |_, _, rng| {
                let m = Model::canonical();
                let n = 40;
                let low = build_ladder(&m, n, LadderKind::Lowering)?;
                let up = build_ladder(&m, n, LadderKind::Raising)?;
                let v = random_vector(&m, n, rng);
                let a = low.apply(&v)?;
                let b = up.apply(&v)?;
                let mut err = 0.0f64;
                for k in 0..n {
                    err = err.worst((a.coeffs[k] - v.coeffs[k + 1] * ((k + 1) as f64).sqrt()).norm());
                    err = err.worst((b.coeffs[k + 1] - v.coeffs[k] * ((k + 1) as f64).sqrt()).norm());
                }
                Ok(Outcome::Measured(err))
            },
        ),
        entry(
            "limits.pho_bessel_normalization",
            "0F1(;b;y) = Gamma(b) y^{(1-b)/2} I_{b-1}(2 sqrt(y))",
            |_| 1e-10,
            |_, _, _| {
                let mut err = 0.0f64;
                for b in [1.5, 2.5] {
                    for i in 1..=100 {
                        let modulus = 5.0 * i as f64 / 100.0;
                        err = err.worst(pho_bessel_gap(b, modulus * modulus)?);
                    }
                }
                Ok(Outcome::Measured(err))
            },
        ),
        entry(
            "limits.pho_ladder_amplitudes",
            "PHO amplitude sqrt(n(n+s-1/2)), b = s+1/2",
            |_| 1e-12,
            |_, _, _| {
                let mut err = 0.0f64;
                for s in [1.0, 2.0] {
                    let m = Model::pho(s + 0.5)?;
                    let low = build_ladder(&m, 40, LadderKind::Lowering)?;
                    for n in 1..=40usize {
                        let nf = n as f64;
                        let want = (nf * (nf + s - 0.5)).sqrt();
                        err = err.worst((low.amplitude(n) - want).abs() / want);
                    }
                }
                Ok(Outcome::Measured(err))
            },
        ),
        entry(
            "limits.func_binom_canonical",
            "rho(l)/(rho(n) rho(l-n)) = C(l,n) for p = q = 0",
            |_| 1e-12,
            |_, _, _| {
                let m = Model::canonical();
                let mut err = 0.0f64;
                for l in 0..=30usize {
                    let mut binom: u128 = 1;
                    for n in 0..=l {
                        if n > 0 {
                            binom = binom * (l - n + 1) as u128 / n as u128;
                        }
                        let got = m.func_binom(l, n)?;
                        err = err.worst((got - binom as f64).abs() / binom as f64);
                    }
                }
                Ok(Outcome::Measured(err))
            },
        ),
    ]
}

fn random_vector(model: &Model, n: usize, rng: &mut ChaCha8Rng) -> StateVector {
    let mut v = StateVector::zeros(model, n);
    for c in v.coeffs.iter_mut() {
        *c = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
    }
    v
}

fn state_checks() -> Vec<Entry> {
    vec![
        entry(
            "states.ladder_consistency",
            "(A+)^n |0> = sqrt(rho(n)) |n>",
            |_| 1e-12,
            |m, _, _| {
                let mut err = 0.0f64;
                for n in 0..=40 {
                    let v = raise_vacuum(m, n, 40)?;
                    let want = m.rho(n).sqrt();
                    for (k, c) in v.coeffs.iter().enumerate() {
                        let e = if k == n { (c.re - want).abs() / want + c.im.abs() } else { c.norm() };
                        err = err.worst(e);
                    }
                }
                Ok(Outcome::Measured(err))
            },
        ),
        entry(
            "states.adjointness",
            "<u, A- v> = <A+ u, v>",
            |_| 1e-12,
            |m, _, rng| {
                let n = 40;
                let low = build_ladder(m, n, LadderKind::Lowering)?;
                let up = build_ladder(m, n, LadderKind::Raising)?;
                let mut err = 0.0f64;
                for _ in 0..20 {
                    let u = random_vector(m, n, rng);
                    let v = random_vector(m, n, rng);
                    let a = u.inner(&low.apply(&v)?);
                    let b = up.apply(&u)?.inner(&v);
                    let scale: f64 = (0..n).map(|k| u.coeffs[k].norm() * low.band[k] * v.coeffs[k + 1].norm()).sum();
                    err = err.worst((a - b).norm() / scale.max(1.0));
                }
                Ok(Outcome::Measured(err))
            },
        ),
        entry(
            "states.number_expectation",
            "<n| A+ A- |n> = e(n)",
            |_| 1e-12,
            |m, _, _| {
                let mut err = 0.0f64;
                for n in 0..=40 {
                    let got = number_expectation(&StateVector::basis(m, n, 40)?);
                    err = err.worst((got - m.e(n)).abs() / m.e(n).max(1.0));
                }
                Ok(Outcome::Measured(err))
            },
        ),
        entry(
            "states.bg_normalization",
            "<z|z> = 1",
            |cfg| cfg.tol + 1e-12,
            |m, cfg, rng| {
                let mut err = 0.0f64;
                let r = sweep_radius(m);
                for _ in 0..50 {
                    let psi = bg_state(m, random_label(rng, r), cfg.tol)?;
                    err = err.worst((1.0 - psi.norm_sqr()).abs());
                }
                Ok(Outcome::Measured(err))
            },
        ),
        entry(
            "states.kp_normalization",
            "KP <z|z> = 1",
            |cfg| cfg.tol + 1e-12,
            |m, cfg, rng| {
                let dual = m.dual().radius();
                if dual == 0.0 {
                    return Ok(Outcome::Skip("dual family has zero radius".into()));
                }
                let r = if dual.is_finite() { 0.8 * dual.sqrt() } else { 2.0 };
                let mut err = 0.0f64;
                for _ in 0..50 {
                    let psi = kp_state(m, random_label(rng, r), cfg.tol)?;
                    err = err.worst((1.0 - psi.norm_sqr()).abs());
                }
                Ok(Outcome::Measured(err))
            },
        ),
        entry(
            "states.annihilation_residual",
            "A- |z> = z |z>; residual over truncation bound",
            |_| 10.0,
            |m, cfg, rng| {
                let r = sweep_radius(m);
                let mut worst = 0.0f64;
                for _ in 0..50 {
                    let rep = annihilation_residual(m, random_label(rng, r), cfg.tol)?;
                    worst = worst.worst(rep.residual / rep.bound);
                }
                Ok(Outcome::Measured(worst))
            },
        ),
        entry(
            "states.hypergeometric_eigenvalue",
            "pFq(z* A-)|s> = pFq(z* s)|s>",
            |_| 1e-9,
            |m, _, rng| {
                let r = sweep_radius(m);
                let mut err = 0.0f64;
                for _ in 0..50 {
                    let rep = hypergeometric_eigen_check(m, random_label(rng, r), random_label(rng, r), 1e-10)?;
                    err = err.worst(rep.residual);
                }
                Ok(Outcome::Measured(err))
            },
        ),
        entry(
            "states.overlap_two_routes",
            "<z|w> = pFq(z* w)/sqrt(pFq(|z|^2) pFq(|w|^2))",
            |_| 1e-10,
            |m, _, rng| {
                let r = sweep_radius(m);
                let mut err = 0.0f64;
                for _ in 0..50 {
                    let rep = overlap(m, random_label(rng, r), random_label(rng, r))?;
                    err = err.worst(rep.gap);
                }
                Ok(Outcome::Measured(err))
            },
        ),
        entry(
            "states.label_continuity",
            "|| |z> - |z'> ||^2 = 2 - 2 Re<z|z'> -> 0 linearly",
            |_| 1e-9,
            |m, _, rng| {
                let r = 0.8 * sweep_radius(m);
                let mut err = 0.0f64;
                for _ in 0..10 {
                    let z = random_label(rng, r);
                    let dir = Complex64::from_polar(1.0, 2.0 * PI * rng.gen::<f64>());
                    let psi = bg_state(m, z, 1e-24)?;
                    let mut rates = Vec::new();
                    for k in 1..=4 {
                        let delta = 10f64.powi(-k);
                        let phi = bg_state(m, z + dir * delta, 1e-24)?;
                        let direct = psi.distance_sqr(&phi);
                        let via_overlap = 2.0 - 2.0 * overlap(m, z, z + dir * delta)?.kernel.re;
                        err = err.worst((direct - via_overlap).abs());
                        rates.push(direct.sqrt() / delta);
                    }
                    // Distance over step must settle to a constant.
                    let spread = (rates[3] - rates[2]).abs() / rates[3].max(1e-300);
                    if spread > 0.05 {
                        return Err(Error::Convergence { terms: 4 });
                    }
                }
                Ok(Outcome::Measured(err))
            },
        ),
        entry(
            "states.two_route_displacement",
            "D(lam s) D(eps z)|0> and the shifted state agree entrywise",
            |_| 1e-8,
            |m, cfg, rng| {
                let r = sweep_radius(m) / 1.5;
                let mut err = 0.0f64;
                for _ in 0..30 {
                    let eps = rng.gen_range(-1.5..1.5);
                    let lam = rng.gen_range(-1.5..1.5);
                    let shift = ShiftSpec::new(eps, random_label(rng, r), lam, random_label(rng, r));
                    let seq = sequential_displacement(m, &shift, cfg.tol)?;
                    let direct = shifted_state(m, &shift, cfg.tol)?;
                    err = err.worst(seq.state.max_abs_diff(&direct));
                    err = err.worst((seq.factor / seq.predicted_factor - 1.0).abs());
                }
                Ok(Outcome::Measured(err))
            },
        ),
        entry(
            "states.binomial_symmetry",
            "[x+y]^l = [y+x]^l",
            |_| 1e-12,
            |m, _, rng| {
                let mut err = 0.0f64;
                for _ in 0..50 {
                    let x = random_label(rng, 2.0);
                    let y = random_label(rng, 2.0);
                    let l = rng.gen_range(0..=30);
                    let a = gen_binom_power(m, x, y, l);
                    let b = gen_binom_power(m, y, x, l);
                    let scale: f64 = a.terms.iter().map(|t| t.norm()).sum();
                    err = err.worst((a.value - b.value).norm() / scale.max(1e-300));
                }
                Ok(Outcome::Measured(err))
            },
        ),
        entry(
            "states.displacement_diagonal",
            "<s|D(z)|s> = pFq(z s*) pFq(z* s)/(sqrt(pFq(|z|^2)) pFq(|s|^2))",
            |_| 1e-10,
            |m, _, rng| {
                let r = sweep_radius(m);
                let mut err = 0.0f64;
                for _ in 0..20 {
                    let rep = displacement_diagonal(m, random_label(rng, r), random_label(rng, r))?;
                    err = err.worst(rep.gap);
                }
                Ok(Outcome::Measured(err))
            },
        ),
    ]
}

fn kernel_checks() -> Vec<Entry> {
    vec![
        entry(
            "kernels.moment_quadrature",
            "int density(x) x^l dx = Gamma(b/a) rho(l)",
            |_| 1e-6,
            |m, _, _| {
                let family = match KernelFamily::of(m) {
                    Ok(f) => f,
                    Err(e) => return Ok(Outcome::Skip(e.to_string())),
                };
                let l_max = if family == KernelFamily::Exponential { 15 } else { 10 };
                let mf = MomentFunctional::new(m);
                let mut err = 0.0f64;
                for l in 0..=l_max {
                    let exact = mf.moment_exact(l);
                    let quad = moment_quadrature(m, l, 1e-8)?;
                    err = err.worst((quad / exact - 1.0).abs());
                }
                Ok(Outcome::Measured(err))
            },
        ),
        entry(
            "kernels.resolution_of_identity",
            "sum_l moment(l)/(Gamma(b/a) rho(l)) |l><l| = I",
            |_| 1e-12,
            |m, _, _| Ok(Outcome::Measured(resolution_of_identity(m, 100))),
        ),
        entry(
            "kernels.reproducing_kernel",
            "int d2z/pi density pFq(z u) pFq(z* v) = Gamma(b/a) pFq(u v)",
            |_| 1e-6,
            |m, _, _| {
                if let Err(e) = KernelFamily::of(m) {
                    return Ok(Outcome::Skip(e.to_string()));
                }
                let grid = [0.0, 0.25, 0.5, 0.75, 1.0];
                let mut err = 0.0f64;
                for &u in &grid {
                    for &v in &grid {
                        let rep = reproducing_kernel_check(m, c(u, 0.0), c(v, 0.0), 1e-6)?;
                        err = err.worst(rep.gap);
                    }
                }
                Ok(Outcome::Measured(err))
            },
        ),
        entry(
            "kernels.derivative_kernel",
            "int d2z/pi e^{-|z|^2} z^n z*^m e^{zu} e^{z*v} = d_u^n d_v^m e^{uv}",
            |_| 1e-5,
            |m, _, _| {
                if !m.is_canonical() {
                    return Ok(Outcome::Skip("defined for the canonical family only".into()));
                }
                let mut err = 0.0f64;
                for n in 0..=2 {
                    for k in 0..=2 {
                        for &u in &[0.0, 0.5] {
                            for &v in &[0.0, 0.5] {
                                let rep = derivative_kernel_check(m, n, k, c(u, 0.0), c(v, 0.0), 1e-5)?;
                                err = err.worst(rep.gap);
                            }
                        }
                    }
                }
                Ok(Outcome::Measured(err))
            },
        ),
        entry(
            "kernels.series_identity",
            "moment-weighted coefficients equal shifted Pochhammer products",
            |_| 1e-12,
            |m, _, _| {
                let mut err = 0.0f64;
                for n in 0..=3 {
                    for k in 0..=3 {
                        match series_identity_check(m, n, k, 30) {
                            Ok(rep) => err = err.worst(rep.max_rel_err),
                            Err(Error::Domain(why)) => return Ok(Outcome::Skip(why)),
                            Err(e) => return Err(e),
                        }
                    }
                }
                Ok(Outcome::Measured(err))
            },
        ),
        entry(
            "kernels.two_variable_closure",
            "sum_n C(l,n) Int_z Int_s [g(l)]! / (...) = 1, sum_n C(l,n) = 2^l",
            |_| 1e-12,
            |m, _, _| {
                let mut err = 0.0f64;
                for l in 0..=20 {
                    let rep = two_variable_closure_check(m, l)?;
                    if rep.binomial_total != rep.power_of_two {
                        return Err(Error::Domain(format!("sum of binomials {} != 2^{l}", rep.binomial_total)));
                    }
                    err = err.worst((rep.closure_sum - 1.0).abs()).worst((rep.functional_form - 1.0).abs());
                }
                Ok(Outcome::Measured(err))
            },
        ),
        entry(
            "kernels.pochhammer_identity",
            "(a-n)_n = (-1)^n (1-a)_n",
            |_| 1e-12,
            |_, _, rng| Ok(Outcome::Measured(pochhammer_identity_sweep(rng, 200))),
        ),
    ]
}

/// Largest relative gap of `(a-n)_n` against `(-1)^n (1-a)_n` over random `a`, `n <= 10`.
pub fn pochhammer_identity_sweep(rng: &mut ChaCha8Rng, count: usize) -> f64 {
    let mut err = 0.0f64;
    for _ in 0..count {
        let a: f64 = rng.gen_range(-10.0..10.0);
        let n: usize = rng.gen_range(0..=10);
        let lhs = pochhammer(a - n as f64, n);
        let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        let rhs = sign * pochhammer(1.0 - a, n);
        let scale = lhs.abs().max(rhs.abs());
        if scale > 0.0 {
            err = err.worst((lhs - rhs).abs() / scale);
        }
    }
    err
}
