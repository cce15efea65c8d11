//! Adaptive Gauss-Kronrod quadrature on the half line.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Kronrod abscissae on [-1, 1] (non-negative half, descending).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for the odd-indexed Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Default node split between the polynomial head and the mapped tail.
pub const DEFAULT_SPLIT: f64 = 10.0;

const MAX_SEGMENTS: usize = 4000;

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub segments: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Piece {
    /// x = u^2 on [0, sqrt(split)].
    Head,
    /// x = split + t / (1 - t) on [0, 1).
    Tail,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    piece: Piece,
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One 15-point Kronrod rule with the QUADPACK error heuristic.
fn gk15<F: Fn(f64) -> f64>(g: &F, lo: f64, hi: f64) -> (f64, f64) {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = g(center);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = fc.abs() * WGK[7];
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = g(center - dx);
        let f2 = g(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = res_k * 0.5;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let h = half.abs();
    let value = res_k * half;
    res_abs *= h;
    res_asc *= h;
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

/// Adaptive integration of `f` over a finite interval.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain("integrate needs finite limits".into()));
    }
    let mut heap = BinaryHeap::new();
    let (value, error) = gk15(&f, a, b);
    heap.push(Segment { piece: Piece::Head, lo: a, hi: b, value, error });
    drive(&mut heap, tol, |_, lo, hi| gk15(&f, lo, hi))
}

/// `∫_0^∞ f(x) dx` with the default split.
pub fn radial_quadrature<F: Fn(f64) -> f64>(f: F, tol: f64) -> Result<f64> {
    radial_quadrature_split(f, DEFAULT_SPLIT, tol).map(|r| r.value)
}

/// `∫_0^∞ f(x) dx`, splitting at `split`.
///
/// The head uses `x = u^2`, which removes `sqrt(x)` endpoint behaviour, and
/// the tail uses `x = split + t/(1-t)`. Both pieces share one error budget;
/// the run stops once the summed error estimate is at most
/// `max(tol, tol * |I|)`.
pub fn radial_quadrature_split<F: Fn(f64) -> f64>(f: F, split: f64, tol: f64) -> Result<QuadResult> {
    if !(split > 0.0) || !(tol > 0.0) {
        return Err(Error::Domain(format!("radial quadrature needs split > 0 and tol > 0, got {split}, {tol}")));
    }
    let head = |u: f64| {
        let x = u * u;
        let v = f(x);
        if v == 0.0 {
            0.0
        } else {
            2.0 * u * v
        }
    };
    let tail = |t: f64| {
        let s = 1.0 - t;
        if s <= 0.0 {
            return 0.0;
        }
        let v = f(split + t / s);
        if v == 0.0 {
            0.0
        } else {
            v / (s * s)
        }
    };
    let eval = |piece: Piece, lo: f64, hi: f64| match piece {
        Piece::Head => gk15(&head, lo, hi),
        Piece::Tail => gk15(&tail, lo, hi),
    };
    let mut heap = BinaryHeap::new();
    let root = split.sqrt();
    for &(piece, lo, hi) in &[(Piece::Head, 0.0, root), (Piece::Tail, 0.0, 1.0)] {
        let (value, error) = eval(piece, lo, hi);
        heap.push(Segment { piece, lo, hi, value, error });
    }
    drive(&mut heap, tol, eval)
}

fn drive<E>(heap: &mut BinaryHeap<Segment>, tol: f64, eval: E) -> Result<QuadResult>
where
    E: Fn(Piece, f64, f64) -> (f64, f64),
{
    loop {
        let value: f64 = heap.iter().map(|s| s.value).sum();
        let error: f64 = heap.iter().map(|s| s.error).sum();
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::Quadrature { error, intervals: heap.len() });
        }
        if error <= tol.max(tol * value.abs()) {
            return Ok(QuadResult { value, error, segments: heap.len() });
        }
        if heap.len() >= MAX_SEGMENTS {
            return Err(Error::Quadrature { error, intervals: heap.len() });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(mid > worst.lo && mid < worst.hi) || worst.hi - worst.lo < 1e-15 * worst.hi.abs().max(1e-300) {
            return Err(Error::Quadrature { error, intervals: heap.len() + 1 });
        }
        for (lo, hi) in [(worst.lo, mid), (mid, worst.hi)] {
            let (value, error) = eval(worst.piece, lo, hi);
            heap.push(Segment { piece: worst.piece, lo, hi, value, error });
        }
    }
}
