//! Truncated Fock space: state vectors and banded ladder operators.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::Model;

/// Coefficients on levels `0..=N` of a truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub coeffs: Vec<Complex64>,
    pub model: Model,
    /// Bound on the weight discarded by truncation.
    pub tail_bound: f64,
}

impl StateVector {
    pub fn zeros(model: &Model, trunc: usize) -> StateVector {
        StateVector { coeffs: vec![Complex64::new(0.0, 0.0); trunc + 1], model: model.clone(), tail_bound: 0.0 }
    }

    /// The basis vector `|n>`.
    pub fn basis(model: &Model, n: usize, trunc: usize) -> Result<StateVector> {
        if n > trunc {
            return Err(Error::Truncation { level: n, trunc });
        }
        let mut v = StateVector::zeros(model, trunc);
        v.coeffs[n] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Slack for `|1 - ||v||^2|` on a normalized state: the truncation bound
    /// plus a rounding allowance of `4 (N+1)` ulps.
    pub fn norm_tolerance(&self) -> f64 {
        self.tail_bound + 4.0 * (self.coeffs.len() as f64) * f64::EPSILON
    }

    /// `<self|other>`, conjugate-linear in `self`, over the common levels.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.conj() * b).sum()
    }

    /// Largest entrywise modulus of the difference, padding the shorter vector with zeros.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        (0..n)
            .map(|k| {
                let a = self.coeffs.get(k).copied().unwrap_or(zero);
                let b = other.coeffs.get(k).copied().unwrap_or(zero);
                (a - b).norm()
            })
            .fold(0.0, |acc: f64, d| if acc.is_nan() || d.is_nan() { f64::NAN } else { acc.max(d) })
    }

    /// Squared distance `||self - other||^2`, padding with zeros.
    pub fn distance_sqr(&self, other: &StateVector) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        (0..n)
            .map(|k| {
                let a = self.coeffs.get(k).copied().unwrap_or(zero);
                let b = other.coeffs.get(k).copied().unwrap_or(zero);
                (a - b).norm_sqr()
            })
            .sum()
    }

    pub fn scaled(&self, s: Complex64) -> StateVector {
        StateVector {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
            model: self.model.clone(),
            tail_bound: self.tail_bound * s.norm_sqr(),
        }
    }

    /// Copy resized to `trunc`; levels cut off are added to the tail bound.
    pub fn resized(&self, trunc: usize) -> StateVector {
        let mut coeffs = self.coeffs.clone();
        let dropped: f64 = coeffs.iter().skip(trunc + 1).map(|c| c.norm_sqr()).sum();
        coeffs.resize(trunc + 1, Complex64::new(0.0, 0.0));
        StateVector { coeffs, model: self.model.clone(), tail_bound: self.tail_bound + dropped }
    }

    fn check_compatible(&self, other: &StateVector) -> Result<()> {
        if self.coeffs.len() != other.coeffs.len() {
            return Err(Error::Shape(format!("truncations {} and {} differ", self.trunc(), other.trunc())));
        }
        if self.model != other.model {
            return Err(Error::Shape("state vectors belong to different families".into()));
        }
        Ok(())
    }

    /// `self + s * other`; tail bounds add.
    pub fn add_scaled(&self, s: Complex64, other: &StateVector) -> Result<StateVector> {
        self.check_compatible(other)?;
        Ok(StateVector {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + s * b).collect(),
            model: self.model.clone(),
            tail_bound: self.tail_bound + s.norm_sqr() * other.tail_bound,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderKind {
    Raising,
    Lowering,
}

/// Generalized creation or annihilation operator on levels `0..=N`.
///
/// `band[k] = sqrt(e(k+1))` is the amplitude linking levels `k` and `k+1`,
/// shared by both kinds.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderOperator {
    pub kind: LadderKind,
    pub band: Vec<f64>,
    pub model: Model,
    /// `sqrt(e(N+1))`, the amplitude that leaves the space when raising level N.
    pub edge: f64,
}

impl LadderOperator {
    pub fn trunc(&self) -> usize {
        self.band.len()
    }

    /// `sqrt(e(n))`: lowering amplitude from level `n`, raising amplitude into it.
    pub fn amplitude(&self, n: usize) -> f64 {
        match n {
            0 => 0.0,
            n if n <= self.band.len() => self.band[n - 1],
            n if n == self.band.len() + 1 => self.edge,
            n => self.model.e(n).sqrt(),
        }
    }

    /// Dense matrix `M[row][col]`.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.trunc() + 1;
        let mut m = vec![vec![0.0; n]; n];
        for (k, &amp) in self.band.iter().enumerate() {
            match self.kind {
                LadderKind::Lowering => m[k][k + 1] = amp,
                LadderKind::Raising => m[k + 1][k] = amp,
            }
        }
        m
    }

    /// Matrix-vector product.
    ///
    /// Raising pushes level N out of the space; its weight is added to the
    /// result's tail bound. Both kinds scale the incoming tail bound by
    /// `e(N+1)`, the weight level N+1 would send back into the space.
    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if v.trunc() != self.trunc() {
            return Err(Error::Shape(format!(
                "operator truncation {} but vector truncation {}",
                self.trunc(),
                v.trunc()
            )));
        }
        if v.model != self.model {
            return Err(Error::Shape("operator and vector belong to different families".into()));
        }
        let n = self.trunc();
        let zero = Complex64::new(0.0, 0.0);
        let mut out = vec![zero; n + 1];
        let tail_bound = match self.kind {
            LadderKind::Lowering => {
                for (o, (c, b)) in out.iter_mut().zip(v.coeffs[1..].iter().zip(&self.band)) {
                    *o = c * b;
                }
                v.tail_bound * self.edge * self.edge
            }
            LadderKind::Raising => {
                for (o, (c, b)) in out[1..].iter_mut().zip(v.coeffs.iter().zip(&self.band)) {
                    *o = c * b;
                }
                let spilled = (v.coeffs[n] * self.edge).norm_sqr();
                v.tail_bound * self.edge * self.edge + spilled
            }
        };
        Ok(StateVector { coeffs: out, model: v.model.clone(), tail_bound })
    }

    /// `sum_{k >= 0} arg^k / rho(k) * A^k v`, the family's hypergeometric
    /// function of this operator applied to `v`.
    ///
    /// Uses `w_k = (arg / e(k)) A w_{k-1}`; the sum terminates after N steps
    /// because every power beyond N annihilates or leaves the space.
    pub fn hypergeometric_apply(&self, arg: Complex64, v: &StateVector) -> Result<StateVector> {
        let mut total = v.clone();
        let mut w = v.clone();
        for k in 1..=self.trunc() + 1 {
            w = self.apply(&w)?.scaled(arg / self.model.e(k));
            if w.coeffs.iter().all(|c| *c == Complex64::new(0.0, 0.0)) && w.tail_bound == 0.0 {
                break;
            }
            total = total.add_scaled(Complex64::new(1.0, 0.0), &w)?;
        }
        Ok(total)
    }
}

/// Ladder operator of the given kind on levels `0..=trunc`.
pub fn build_ladder(model: &Model, trunc: usize, kind: LadderKind) -> Result<LadderOperator> {
    if trunc == 0 {
        return Err(Error::Domain("a ladder operator needs truncation N >= 1".into()));
    }
    let band = (1..=trunc).map(|n| model.e(n).sqrt()).collect();
    Ok(LadderOperator { kind, band, model: model.clone(), edge: model.e(trunc + 1).sqrt() })
}

/// `(A+)^n |0>` by n applications of the raising operator.
pub fn raise_vacuum(model: &Model, n: usize, trunc: usize) -> Result<StateVector> {
    if n > trunc {
        return Err(Error::Truncation { level: n, trunc });
    }
    let mut v = StateVector::basis(model, 0, trunc)?;
    if n == 0 {
        return Ok(v);
    }
    let up = build_ladder(model, trunc, LadderKind::Raising)?;
    for _ in 0..n {
        v = up.apply(&v)?;
    }
    Ok(v)
}

/// `<v| A+ A- |v> = sum_n e(n) |c_n|^2`.
pub fn number_expectation(v: &StateVector) -> f64 {
    v.coeffs.iter().enumerate().map(|(n, c)| v.model.e(n) * c.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_band() {
        let m = Model::canonical();
        let low = build_ladder(&m, 6, LadderKind::Lowering).unwrap();
        assert_eq!(low.band[0], 1.0);
        assert_eq!(low.band[1], 2f64.sqrt());
        assert_eq!(low.amplitude(3), 3f64.sqrt());
        assert_eq!(low.amplitude(0), 0.0);
        assert_eq!(low.amplitude(7), 7f64.sqrt());
        assert!(build_ladder(&m, 0, LadderKind::Raising).is_err());
    }

    #[test]
    fn pho_amplitude() {
        let m = Model::pho(1.5).unwrap();
        let low = build_ladder(&m, 4, LadderKind::Lowering).unwrap();
        assert_eq!(low.amplitude(1), 1.5f64.sqrt());
    }

    #[test]
    fn lowering_examples() {
        let m = Model::canonical();
        let low = build_ladder(&m, 5, LadderKind::Lowering).unwrap();
        let v = low.apply(&StateVector::basis(&m, 0, 5).unwrap()).unwrap();
        assert!(v.coeffs.iter().all(|c| c.norm() == 0.0));
        let v = low.apply(&StateVector::basis(&m, 3, 5).unwrap()).unwrap();
        assert_eq!(v.coeffs[2].re, 3f64.sqrt());
    }

    #[test]
    fn raising_at_the_edge_records_the_loss() {
        let m = Model::canonical();
        let up = build_ladder(&m, 3, LadderKind::Raising).unwrap();
        let v = up.apply(&StateVector::basis(&m, 3, 3).unwrap()).unwrap();
        assert_eq!(v.norm_sqr(), 0.0);
        assert!((v.tail_bound - 4.0).abs() < 1e-15);
        let v = up.apply(&StateVector::basis(&m, 1, 3).unwrap()).unwrap();
        assert_eq!(v.coeffs[2].re, 2f64.sqrt());
        assert_eq!(v.tail_bound, 0.0);
    }

    #[test]
    fn shape_errors() {
        let m = Model::canonical();
        let up = build_ladder(&m, 3, LadderKind::Raising).unwrap();
        assert!(matches!(up.apply(&StateVector::basis(&m, 0, 4).unwrap()), Err(Error::Shape(_))));
        let other = Model::pho(1.5).unwrap();
        assert!(matches!(up.apply(&StateVector::basis(&other, 0, 3).unwrap()), Err(Error::Shape(_))));
        assert!(matches!(raise_vacuum(&m, 5, 4), Err(Error::Truncation { .. })));
    }

    #[test]
    fn raise_vacuum_examples() {
        let v = raise_vacuum(&Model::canonical(), 4, 6).unwrap();
        assert!((v.coeffs[4].re - 24f64.sqrt()).abs() < 1e-13);
        let v = raise_vacuum(&Model::pho(1.5).unwrap(), 2, 6).unwrap();
        assert!((v.coeffs[2].re - 7.5f64.sqrt()).abs() < 1e-13);
        let v = raise_vacuum(&Model::canonical(), 0, 2).unwrap();
        assert_eq!(v.coeffs[0].re, 1.0);
    }

    #[test]
    fn number_expectation_examples() {
        let m = Model::canonical();
        assert_eq!(number_expectation(&StateVector::basis(&m, 2, 4).unwrap()), 2.0);
        assert_eq!(number_expectation(&StateVector::basis(&m, 0, 4).unwrap()), 0.0);
        let p = Model::pho(1.5).unwrap();
        assert_eq!(number_expectation(&StateVector::basis(&p, 2, 4).unwrap()), 5.0);
    }

    #[test]
    fn hypergeometric_of_lowering_on_basis_state() {
        // exp(t a)|n> = sum_k t^k sqrt(n!/(n-k)!)/k! |n-k>
        let m = Model::canonical();
        let low = build_ladder(&m, 5, LadderKind::Lowering).unwrap();
        let t = Complex64::new(0.5, 0.0);
        let v = low.hypergeometric_apply(t, &StateVector::basis(&m, 2, 5).unwrap()).unwrap();
        assert!((v.coeffs[2].re - 1.0).abs() < 1e-15);
        assert!((v.coeffs[1].re - 0.5 * 2f64.sqrt()).abs() < 1e-15);
        assert!((v.coeffs[0].re - 0.125 * 2f64.sqrt()).abs() < 1e-15);
    }
}
