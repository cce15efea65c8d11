//! Log-gamma, reciprocal gamma and Pochhammer symbols.
//!
//! Everything that multiplies many factors together goes through the log
//! domain with an explicit sign so that structure functions of a few hundred
//! levels never overflow.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Bernoulli coefficients B_{2k} / (2k (2k-1)) of the Stirling series.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

const STIRLING_MIN: f64 = 10.0;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `zeta(k) - 1` for `k = 2..=33`.
const ZETA_MINUS_ONE: [f64; 32] = [
    0.6449340668482264,
    0.2020569031595943,
    0.08232323371113819,
    0.03692775514336993,
    0.01734306198444914,
    0.008349277381922827,
    0.00407735619794434,
    0.0020083928260822143,
    0.0009945751278180853,
    0.0004941886041194645,
    0.0002460865533080483,
    0.00012271334757848915,
    6.124813505870483e-05,
    3.058823630702049e-05,
    1.528225940865187e-05,
    7.637197637899763e-06,
    3.81729326499984e-06,
    1.908212716553939e-06,
    9.539620338727962e-07,
    4.769329867878064e-07,
    2.38450502727733e-07,
    1.1921992596531106e-07,
    5.960818905125948e-08,
    2.980350351465228e-08,
    1.4901554828365043e-08,
    7.45071178983543e-09,
    3.725334024788457e-09,
    1.862659723513049e-09,
    9.313274324196682e-10,
    4.656629065033784e-10,
    2.3283118336765053e-10,
    1.164155017270052e-10,
];

/// A real number stored as `ln|v|` plus a sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLn {
    pub ln_abs: f64,
    pub negative: bool,
}

impl SignedLn {
    pub const ONE: SignedLn = SignedLn { ln_abs: 0.0, negative: false };

    pub fn from_value(v: f64) -> Self {
        SignedLn { ln_abs: v.abs().ln(), negative: v < 0.0 }
    }

    pub fn value(self) -> f64 {
        let m = self.ln_abs.exp();
        if self.negative {
            -m
        } else {
            m
        }
    }

    pub fn is_zero(self) -> bool {
        self.ln_abs == f64::NEG_INFINITY
    }
}

impl std::ops::Mul for SignedLn {
    type Output = SignedLn;

    fn mul(self, other: SignedLn) -> SignedLn {
        SignedLn { ln_abs: self.ln_abs + other.ln_abs, negative: self.negative != other.negative }
    }
}

impl std::ops::Div for SignedLn {
    type Output = SignedLn;

    fn div(self, other: SignedLn) -> SignedLn {
        SignedLn { ln_abs: self.ln_abs - other.ln_abs, negative: self.negative != other.negative }
    }
}

/// `ln Γ(x)` for `x > 0`.
///
/// Integers up to 171 go through an exact factorial product, arguments near
/// the zeros at 1 and 2 through the Taylor series about 2, larger ones through
/// the Stirling series, and the rest are shifted up with the recurrence.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("log_gamma requires x > 0, got {x}")));
    }
    Ok(ln_gamma_positive(x))
}

pub(crate) fn ln_gamma_positive(x: f64) -> f64 {
    if x == x.trunc() && x <= 171.0 {
        let n = x as u32;
        let mut fact = 1.0f64;
        for k in 2..n {
            fact *= k as f64;
        }
        return fact.ln();
    }
    if x >= STIRLING_MIN {
        return stirling(x);
    }
    if x < 0.5 {
        return ln_gamma_positive(x + 1.0) - x.ln();
    }
    if x < 1.5 {
        let eps = x - 1.0;
        return ln_gamma_about_two(eps) - eps.ln_1p();
    }
    if x <= 2.5 {
        return ln_gamma_about_two(x - 2.0);
    }
    // Shift into the Stirling range: Γ(x) = Γ(x + k) / (x (x+1) ... (x+k-1)).
    let k = (STIRLING_MIN - x).ceil() as u32;
    let mut prod = 1.0f64;
    for i in 0..k {
        prod *= x + i as f64;
    }
    stirling(x + k as f64) - prod.ln()
}

/// `ln Γ(2 + eps) = (1 - γ) eps + sum_k (-1)^k (zeta(k) - 1) eps^k / k` for `|eps| <= 1/2`.
fn ln_gamma_about_two(eps: f64) -> f64 {
    let mut sum = 0.0;
    let mut pow = -eps;
    for (i, z) in ZETA_MINUS_ONE.iter().enumerate() {
        pow *= -eps;
        sum += z * pow / (i + 2) as f64;
    }
    (1.0 - EULER_GAMMA) * eps + sum
}

fn stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut corr = 0.0;
    let mut pow = inv;
    for c in STIRLING {
        corr += c * pow;
        pow *= inv2;
    }
    (x - 0.5) * x.ln() - x + LN_SQRT_2PI + corr
}

/// `Γ(x)` for any real `x` that is not a non-positive integer, as a signed log.
pub fn ln_gamma_signed(x: f64) -> Result<SignedLn> {
    if x > 0.0 {
        return Ok(SignedLn { ln_abs: ln_gamma_positive(x), negative: false });
    }
    if x == x.trunc() {
        return Err(Error::Domain(format!("Γ has a pole at {x}")));
    }
    // Reflection: Γ(x) Γ(1-x) = π / sin(πx)
    let s = sin_pi(x);
    let lg = ln_gamma_positive(1.0 - x);
    Ok(SignedLn { ln_abs: PI.ln() - s.abs().ln() - lg, negative: s < 0.0 })
}

/// `1/Γ(x)`, which is entire: zero at the non-positive integers.
pub fn recip_gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.trunc() {
        return 0.0;
    }
    let g = ln_gamma_signed(x).expect("poles handled above");
    let m = (-g.ln_abs).exp();
    if g.negative {
        -m
    } else {
        m
    }
}

/// sin(πx) with the argument reduced first so large |x| keeps its accuracy.
fn sin_pi(x: f64) -> f64 {
    let r = x.rem_euclid(2.0);
    if r == 0.0 || r == 1.0 {
        return 0.0;
    }
    (PI * r).sin()
}

/// Rising factorial `(x)_n = x (x+1) ... (x+n-1)` as a signed log.
pub fn ln_pochhammer(x: f64, n: usize) -> SignedLn {
    let mut out = SignedLn::ONE;
    for s in 0..n {
        let f = x + s as f64;
        out = out * SignedLn::from_value(f);
    }
    out
}

/// Rising factorial `(x)_n`.
///
/// Computed as a direct product, which is exact for small integer inputs;
/// falls back to the log domain if the product leaves the finite range.
pub fn pochhammer(x: f64, n: usize) -> f64 {
    let mut prod = 1.0f64;
    for s in 0..n {
        prod *= x + s as f64;
        if prod == 0.0 {
            return 0.0;
        }
    }
    if prod.is_finite() {
        prod
    } else {
        ln_pochhammer(x, n).value()
    }
}

/// `ln n!`.
pub fn ln_factorial(n: usize) -> f64 {
    ln_gamma_positive(n as f64 + 1.0)
}
