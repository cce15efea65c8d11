//! Acceptance criteria 1-9. Prints one line per criterion and exits non-zero
//! if any fails.

use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hypercs::fock::{build_ladder, number_expectation, raise_vacuum, LadderKind, StateVector};
use hypercs::kernels::{
    derivative_kernel_check, moment_quadrature, reproducing_kernel_check, resolution_of_identity,
    series_identity_check, two_variable_closure_check, MomentFunctional,
};
use hypercs::specfun::pochhammer;
use hypercs::states::{
    annihilation_residual, bg_state, hypergeometric_eigen_check, overlap, sequential_displacement, shifted_state,
    ShiftSpec,
};
use hypercs::{Model, Result};

const STATE_TOL: f64 = 1e-12;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn model(s: &str) -> Model {
    s.parse().expect("valid family")
}

fn families() -> Vec<Model> {
    vec![
        Model::canonical(),
        Model::pho(1.5).unwrap(),
        Model::pho(2.5).unwrap(),
        model("p=1,q=0;a=1.3;b="),
        model("p=2,q=3;a=0.7,2.2;b=1.1,0.4,3"),
    ]
}

/// Labels stay well inside the radius of convergence.
fn label_radius(m: &Model) -> f64 {
    if m.radius().is_finite() {
        0.8 * m.radius().sqrt()
    } else {
        2.0
    }
}

fn random_label(rng: &mut ChaCha8Rng, r: f64) -> Complex64 {
    let rho = r * rng.gen::<f64>().sqrt();
    let phi = rng.gen_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(rho, phi)
}

/// `exp(-|z|^2/2) z^n / sqrt(n!)` for `n = 0..=trunc`.
fn glauber(z: Complex64, trunc: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(trunc + 1);
    let mut term = c((-z.norm_sqr() / 2.0).exp(), 0.0);
    for n in 0..=trunc {
        if n > 0 {
            term *= z / (n as f64).sqrt();
        }
        out.push(term);
    }
    out
}

fn ln_factorial_sum(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, Worst::worst)
}

/// Running maximum that keeps NaN.
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

/// One named measurement against its tolerance.
struct Part {
    what: &'static str,
    err: f64,
    tol: f64,
}

struct Outcome {
    parts: Vec<Part>,
}

impl Outcome {
    fn passed(&self) -> bool {
        self.parts.iter().all(|p| p.err <= p.tol)
    }
}

fn part(what: &'static str, err: f64, tol: f64) -> Part {
    Part { what, err, tol }
}

fn criterion_1(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let canon = Model::canonical();
    let equal = model("p=2,q=2;a=0.7,2.4;b=0.7,2.4");
    let mut rho_err = 0.0f64;
    for m in [&canon, &equal] {
        for n in 0..=50 {
            rho_err = rho_err.worst((m.ln_rho(n) - ln_factorial_sum(n)).abs());
        }
    }
    let mut bg_err = 0.0f64;
    for m in [&canon, &equal] {
        for _ in 0..20 {
            let z = random_label(rng, 2.0);
            let v = bg_state(m, z, STATE_TOL)?;
            bg_err = bg_err.worst(max_diff(&v.coeffs, &glauber(z, v.trunc())));
        }
    }
    let mut shift_err = 0.0f64;
    for _ in 0..20 {
        let (z, sigma) = (random_label(rng, 2.0), random_label(rng, 2.0));
        let v = shifted_state(&canon, &ShiftSpec::new(1.0, z, 1.0, sigma), 1e-14)?;
        shift_err = shift_err.worst(max_diff(&v.coeffs, &glauber(z + sigma, v.trunc())));
    }
    Ok(Outcome {
        parts: vec![
            part("ln rho(n) = ln n!", rho_err, 1e-12),
            part("bg_state closed form", bg_err, 1e-12),
            part("shifted_state closed form", shift_err, 1e-10),
        ],
    })
}

fn criterion_2() -> Result<Outcome> {
    let trunc = 40;
    let (mut ladder, mut adj, mut number) = (0.0f64, 0.0f64, 0.0f64);
    for m in [Model::canonical(), Model::pho(1.5)?, Model::pho(2.5)?, model("p=1,q=0;a=1.3;b=")] {
        for n in 0..=trunc {
            let v = raise_vacuum(&m, n, trunc)?;
            let expect = m.rho(n).sqrt();
            let off: f64 = v.coeffs.iter().enumerate().filter(|&(k, _)| k != n).map(|(_, x)| x.norm()).sum();
            ladder = ladder.worst((v.coeffs[n].re - expect).abs() / expect).worst(off / expect);
            let e = m.e(n);
            let got = number_expectation(&StateVector::basis(&m, n, trunc)?);
            number = number.worst((got - e).abs() / e.max(1.0));
        }
        let up = build_ladder(&m, trunc, LadderKind::Raising)?.to_dense();
        let down = build_ladder(&m, trunc, LadderKind::Lowering)?.to_dense();
        for i in 0..=trunc {
            for j in 0..=trunc {
                adj = adj.worst((up[i][j] - down[j][i]).abs());
            }
        }
    }
    Ok(Outcome {
        parts: vec![
            part("(A+)^n|0> = sqrt(rho(n))|n>", ladder, 1e-12),
            part("A+ adjoint of A-", adj, 1e-12),
            part("<n|A+A-|n> = e(n)", number, 1e-12),
        ],
    })
}

fn criterion_3(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let (mut norm_excess, mut resid_ratio, mut eigen, mut over) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for m in families() {
        let r = label_radius(&m);
        for _ in 0..50 {
            let z = random_label(rng, r);
            let v = bg_state(&m, z, 1e-10)?;
            norm_excess = norm_excess.worst((v.norm_sqr() - 1.0).abs() - v.norm_tolerance());
            let res = annihilation_residual(&m, z, 1e-10)?;
            resid_ratio = resid_ratio.worst(res.residual / res.bound);
            let sigma = random_label(rng, r);
            let e = hypergeometric_eigen_check(&m, z, sigma, 1e-9)?;
            eigen = eigen.worst(e.residual);
            over = over.worst(overlap(&m, z, sigma)?.gap);
        }
    }
    Ok(Outcome {
        parts: vec![
            part("|<z|z> - 1| beyond tail_bound", norm_excess.max(0.0), 0.0),
            part("annihilation residual / bound", resid_ratio, 10.0),
            part("pFq(z* A-)|s> eigenvalue", eigen, 1e-9),
            part("overlap kernel vs inner product", over, 1e-10),
        ],
    })
}

fn criterion_4(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut gap = 0.0f64;
    for m in families() {
        let r = label_radius(&m);
        for _ in 0..30 {
            let eps = rng.gen_range(-1.5..1.5);
            let lam = rng.gen_range(-1.5..1.5);
            let z = random_label(rng, r / 1.5);
            let sigma = random_label(rng, r / 1.5);
            let shift = ShiftSpec::new(eps, z, lam, sigma);
            let direct = shifted_state(&m, &shift, 1e-10)?;
            let seq = sequential_displacement(&m, &shift, 1e-10)?;
            gap = gap.worst(direct.max_abs_diff(&seq.state));
        }
    }
    Ok(Outcome { parts: vec![part("sequential vs shifted entrywise", gap, 1e-8)] })
}

fn criterion_5() -> Result<Outcome> {
    let mut moment = 0.0f64;
    for (m, l_max) in [(Model::canonical(), 15), (Model::pho(1.5)?, 10), (Model::pho(2.5)?, 10)] {
        let mf = MomentFunctional::new(&m);
        for l in 0..=l_max {
            let exact = mf.moment_exact(l);
            moment = moment.worst((moment_quadrature(&m, l, 1e-9)? - exact).abs() / exact);
        }
    }
    let resolution = families().iter().map(|m| resolution_of_identity(m, 40)).fold(0.0, Worst::worst);
    Ok(Outcome {
        parts: vec![
            part("moment quadrature vs exact", moment, 1e-6),
            part("resolution of identity", resolution, 1e-12),
        ],
    })
}

fn criterion_6() -> Result<Outcome> {
    let (mut rk, mut dk, mut si) = (0.0f64, 0.0f64, 0.0f64);
    let grid: Vec<f64> = (0..5).map(|k| k as f64 / 4.0).collect();
    for m in [Model::canonical(), Model::pho(1.5)?] {
        for &u in &grid {
            for &v in &grid {
                rk = rk.worst(reproducing_kernel_check(&m, c(u, 0.0), c(v, 0.0), 1e-6)?.gap);
            }
        }
    }
    let canon = Model::canonical();
    for n in 0..=2 {
        for mm in 0..=2 {
            for u in [0.0, 0.5] {
                for v in [0.0, 0.5] {
                    dk = dk.worst(derivative_kernel_check(&canon, n, mm, c(u, 0.0), c(v, 0.0), 1e-5)?.gap);
                }
            }
        }
    }
    for m in [Model::canonical(), Model::pho(1.5)?, Model::pho(2.5)?] {
        for n in 0..=3 {
            for mm in 0..=3 {
                si = si.worst(series_identity_check(&m, n, mm, 30)?.max_rel_err);
            }
        }
    }
    Ok(Outcome {
        parts: vec![
            part("reproducing kernel 5x5 grid", rk, 1e-6),
            part("derivative kernel n,m <= 2", dk, 1e-5),
            part("series identity n,m <= 3, l <= 30", si, 1e-12),
        ],
    })
}

fn criterion_7() -> Result<Outcome> {
    let mut bessel = 0.0f64;
    let mut amp = 0.0f64;
    for s in [1.0, 2.0] {
        let b = s + 0.5;
        for k in 0..=100 {
            let r = 5.0 * k as f64 / 100.0;
            bessel = bessel.worst(hypercs::kernels::pho_bessel_gap(b, r * r)?);
        }
        let low = build_ladder(&Model::pho(b)?, 40, LadderKind::Lowering)?;
        for n in 0..=40 {
            let nf = n as f64;
            amp = amp.worst((low.amplitude(n) - (nf * (nf + s - 0.5)).sqrt()).abs());
        }
    }
    Ok(Outcome {
        parts: vec![
            part("0F1 vs Bessel-I normalization", bessel, 1e-10),
            part("ladder amplitudes sqrt(n(n+s-1/2))", amp, 1e-12),
        ],
    })
}

fn criterion_8() -> Result<Outcome> {
    let mut closure = 0.0f64;
    let mut binom = 0.0f64;
    for m in [Model::canonical(), Model::pho(1.5)?, Model::pho(2.5)?] {
        for l in 0..=20 {
            let r = two_variable_closure_check(&m, l)?;
            closure = closure.worst((r.closure_sum - 1.0).abs()).worst((r.functional_form - 1.0).abs());
            if r.binomial_total != r.power_of_two || r.power_of_two != 1u128 << l {
                binom = f64::INFINITY;
            }
        }
    }
    Ok(Outcome { parts: vec![part("closure sum = 1", closure, 1e-12), part("sum_n C(l,n) = 2^l exactly", binom, 0.0)] })
}

fn criterion_9(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut err = 0.0f64;
    for _ in 0..200 {
        let a: f64 = rng.gen_range(-10.0..10.0);
        let n: usize = rng.gen_range(0..=10);
        let lhs = pochhammer(a - n as f64, n);
        let rhs = if n.is_multiple_of(2) { 1.0 } else { -1.0 } * pochhammer(1.0 - a, n);
        err = err.worst((lhs - rhs).abs() / rhs.abs().max(f64::MIN_POSITIVE));
    }
    Ok(Outcome { parts: vec![part("(a-n)_n = (-1)^n (1-a)_n", err, 1e-12)] })
}

fn main() -> ExitCode {
    let titles = [
        "canonical limit",
        "structure",
        "coherent states",
        "two-route displacement",
        "moments",
        "kernels",
        "PHO regression",
        "two-variable closure",
        "Pochhammer identity",
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_617);
    let mut failed = 0;
    for (k, title) in titles.iter().enumerate() {
        let start = Instant::now();
        let outcome = match k + 1 {
            1 => criterion_1(&mut rng),
            2 => criterion_2(),
            3 => criterion_3(&mut rng),
            4 => criterion_4(&mut rng),
            5 => criterion_5(),
            6 => criterion_6(),
            7 => criterion_7(),
            8 => criterion_8(),
            _ => criterion_9(&mut rng),
        };
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(o) => {
                let tag = if o.passed() { "PASS" } else { "FAIL" };
                let detail = o
                    .parts
                    .iter()
                    .map(|p| format!("{} {:.3e} <= {:.0e}", p.what, p.err, p.tol))
                    .collect::<Vec<_>>()
                    .join("; ");
                println!("[{tag}] criterion {}: {title} ({secs:.2}s) | {detail}", k + 1);
                if !o.passed() {
                    failed += 1;
                }
            }
            Err(e) => {
                println!("[FAIL] criterion {}: {title} ({secs:.2}s) | error: {e}", k + 1);
                failed += 1;
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", titles.len() - failed, titles.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
