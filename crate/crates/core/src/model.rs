//! Parameter families `(p, q, a, b)` and their structure quantities.
//!
//! A family is fixed by the upper list `a` and lower list `b`. From them come
//! the ladder eigenvalues
//!
//! ```text
//! e(n) = n * prod_j (b_j - 1 + n) / prod_i (a_i - 1 + n)
//! ```
//!
//! and the structure function `rho(n) = e(1) e(2) ... e(n)`, with
//! `rho(0) = 1`. Every other module indexes `rho` through a [`Model`], which
//! caches `ln rho(n)` and `e(n)` in a table that grows on demand.

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::gamma::{ln_factorial, ln_gamma_positive};

const INITIAL_TABLE: usize = 64;

/// Raw parameter lists of one family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelParams {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl ModelParams {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Self {
        ModelParams { a, b }
    }

    pub fn p(&self) -> usize {
        self.a.len()
    }

    pub fn q(&self) -> usize {
        self.b.len()
    }

    /// Checks positivity and the radius condition.
    pub fn validate(self) -> Result<ModelParams> {
        for (name, list) in [("a", &self.a), ("b", &self.b)] {
            for (i, &v) in list.iter().enumerate() {
                if !v.is_finite() || v <= 0.0 {
                    return Err(Error::Validation(format!("{name}[{i}] = {v} must be a positive real")));
                }
            }
        }
        if self.p() > self.q() + 1 {
            return Err(Error::ZeroRadius { p: self.p(), q: self.q() });
        }
        Ok(self)
    }

    /// Removes pairs with `a_i == b_j`, which cancel in every `e(n)`.
    pub fn reduced(&self) -> ModelParams {
        let mut a = self.a.clone();
        let mut b = Vec::with_capacity(self.b.len());
        for &bj in &self.b {
            if let Some(pos) = a.iter().position(|&ai| ai == bj) {
                a.remove(pos);
            } else {
                b.push(bj);
            }
        }
        ModelParams { a, b }
    }
}

impl fmt::Display for ModelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[f64]| v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(",");
        write!(f, "p={},q={};a={};b={}", self.p(), self.q(), join(&self.a), join(&self.b))
    }
}

impl FromStr for ModelParams {
    type Err = Error;

    /// Parses `p=0,q=1;a=;b=1.5`.
    fn from_str(s: &str) -> Result<Self> {
        let mut p = None;
        let mut q = None;
        let mut a = None;
        let mut b = None;
        for section in s.split(';') {
            let section = section.trim();
            if section.is_empty() {
                continue;
            }
            if section.starts_with("a=") || section.starts_with("b=") {
                let (key, rest) = section.split_at(2);
                let list = parse_list(rest)?;
                let slot = if key == "a=" { &mut a } else { &mut b };
                if slot.replace(list).is_some() {
                    return Err(Error::Parse(format!("duplicate section '{key}'")));
                }
                continue;
            }
            for item in section.split(',') {
                let (key, value) =
                    item.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value, got '{item}'")))?;
                let n: usize =
                    value.trim().parse().map_err(|_| Error::Parse(format!("'{}' is not a count", value.trim())))?;
                match key.trim() {
                    "p" => p = Some(n),
                    "q" => q = Some(n),
                    other => return Err(Error::Parse(format!("unknown key '{other}'"))),
                }
            }
        }
        let a = a.unwrap_or_default();
        let b = b.unwrap_or_default();
        let p = p.ok_or_else(|| Error::Parse("missing p".into()))?;
        let q = q.ok_or_else(|| Error::Parse("missing q".into()))?;
        if p != a.len() || q != b.len() {
            return Err(Error::Parse(format!("p={p}, q={q} but a has {} and b has {} entries", a.len(), b.len())));
        }
        Ok(ModelParams { a, b })
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>().map_err(|_| Error::Parse(format!("'{t}' is not a real number")))
        })
        .collect()
}

/// `ln rho(n)` and `e(n)` up to some level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureTable {
    /// `ln rho(n)` for `n = 0..=N`.
    pub rho_log: Vec<f64>,
    /// `e(n)` for `n = 1..=N`, stored at index `n - 1`.
    pub e: Vec<f64>,
}

impl StructureTable {
    pub fn trunc(&self) -> usize {
        self.rho_log.len() - 1
    }
}

struct Inner {
    params: ModelParams,
    reduced: ModelParams,
    zero_radius: bool,
    /// `(ln rho(n), e(n))` with `e(0)` stored as 0.
    table: RwLock<(Vec<f64>, Vec<f64>)>,
}

/// A validated family with its cached structure table.
///
/// Cloning is cheap and clones share the cache.
#[derive(Clone)]
pub struct Model {
    inner: Arc<Inner>,
}

impl fmt::Debug for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Model").field("params", &self.inner.params).finish()
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.inner.params.fmt(f)
    }
}

impl PartialEq for Model {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.params == other.inner.params
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Model::new(s.parse()?)
    }
}

impl Model {
    pub fn new(params: ModelParams) -> Result<Model> {
        Ok(Model::build(params.validate()?, false))
    }

    fn build(params: ModelParams, zero_radius: bool) -> Model {
        let reduced = params.reduced();
        let model = Model {
            inner: Arc::new(Inner { params, reduced, zero_radius, table: RwLock::new((vec![0.0], vec![0.0])) }),
        };
        model.ensure(INITIAL_TABLE);
        model
    }

    /// `p = q = 0`: the harmonic oscillator.
    pub fn canonical() -> Model {
        Model::new(ModelParams::new(vec![], vec![])).expect("canonical family is valid")
    }

    /// `(p, q) = (0, 1)` with lower parameter `b`: the pseudoharmonic oscillator.
    pub fn pho(b: f64) -> Result<Model> {
        Model::new(ModelParams::new(vec![], vec![b]))
    }

    pub fn params(&self) -> &ModelParams {
        &self.inner.params
    }

    /// Parameters with cancelling `a_i == b_j` pairs removed.
    pub fn reduced_params(&self) -> &ModelParams {
        &self.inner.reduced
    }

    pub fn p(&self) -> usize {
        self.inner.params.p()
    }

    pub fn q(&self) -> usize {
        self.inner.params.q()
    }

    /// True when every `a_i` cancels against a `b_j`, so `rho(n) = n!`.
    pub fn is_canonical(&self) -> bool {
        self.inner.reduced.a.is_empty() && self.inner.reduced.b.is_empty()
    }

    /// Radius of convergence of `sum x^n / rho(n)` in `x = |z|^2`.
    pub fn radius(&self) -> f64 {
        if self.inner.zero_radius {
            0.0
        } else if self.p() <= self.q() {
            f64::INFINITY
        } else {
            1.0
        }
    }

    /// The family with `a` and `b` exchanged, whose structure function is
    /// `(n!)^2 / rho(n)`.
    ///
    /// The result may have zero radius; then only `x = 0` is summable.
    pub fn dual(&self) -> Model {
        let params = ModelParams::new(self.inner.params.b.clone(), self.inner.params.a.clone());
        let zero = params.p() > params.q() + 1;
        Model::build(params, zero)
    }

    /// The family whose structure function is `rho(n)^2`, i.e. lists
    /// `a ∪ a` and `b ∪ b ∪ {1}`.
    pub fn squared(&self) -> Model {
        let p = &self.inner.params;
        let a = p.a.iter().chain(&p.a).copied().collect();
        let b = p.b.iter().chain(&p.b).copied().chain(std::iter::once(1.0)).collect();
        Model::build(ModelParams::new(a, b), false)
    }

    fn e_raw(&self, n: usize) -> f64 {
        if n == 0 {
            return 0.0;
        }
        let nf = n as f64;
        let r = &self.inner.reduced;
        let mut v = nf;
        for &bj in &r.b {
            v *= bj - 1.0 + nf;
        }
        for &ai in &r.a {
            v /= ai - 1.0 + nf;
        }
        v
    }

    fn ln_rho_raw(&self, n: usize) -> f64 {
        if n == 0 {
            return 0.0;
        }
        let nf = n as f64;
        let r = &self.inner.reduced;
        let up: f64 = r.b.iter().map(|&b| ln_gamma_positive(b + nf) - ln_gamma_positive(b)).sum();
        let down: f64 = r.a.iter().map(|&a| ln_gamma_positive(a + nf) - ln_gamma_positive(a)).sum();
        ln_factorial(n) + (up - down)
    }

    fn ensure(&self, n: usize) {
        {
            let t = self.inner.table.read().expect("structure table lock");
            if t.0.len() > n {
                return;
            }
        }
        let mut t = self.inner.table.write().expect("structure table lock");
        let have = t.0.len();
        if have > n {
            return;
        }
        let target = (n + 1).max(2 * have);
        for k in have..target {
            let lr = self.ln_rho_raw(k);
            let e = self.e_raw(k);
            t.0.push(lr);
            t.1.push(e);
        }
    }

    /// `e(n)`, with `e(0) = 0` so that lowering annihilates the vacuum.
    pub fn e(&self, n: usize) -> f64 {
        self.ensure(n);
        self.inner.table.read().expect("structure table lock").1[n]
    }

    /// `e(n)` for `n >= 1`.
    pub fn e_coeff(&self, n: usize) -> Result<f64> {
        if n == 0 {
            return Err(Error::Domain("e(n) is defined for n >= 1".into()));
        }
        Ok(self.e(n))
    }

    /// `ln rho(n)`.
    pub fn ln_rho(&self, n: usize) -> f64 {
        self.ensure(n);
        self.inner.table.read().expect("structure table lock").0[n]
    }

    pub fn rho(&self, n: usize) -> f64 {
        self.ln_rho(n).exp()
    }

    /// `ln [g(n)]! = ln rho(n) - ln n!`.
    pub fn ln_g_factorial(&self, n: usize) -> f64 {
        self.ln_rho(n) - ln_factorial(n)
    }

    /// `ln rho_KP(n) = 2 ln n! - ln rho(n)`.
    pub fn ln_kp_rho(&self, n: usize) -> f64 {
        2.0 * ln_factorial(n) - self.ln_rho(n)
    }

    /// `ln` of the functional binomial `rho(l) / (rho(n) rho(l-n))`.
    pub fn ln_func_binom(&self, l: usize, n: usize) -> Result<f64> {
        if n > l {
            return Err(Error::Domain(format!("func_binom needs n <= l, got l = {l}, n = {n}")));
        }
        // Sum the two lower terms first so that (l, n) and (l, l-n) round alike.
        Ok(self.ln_rho(l) - (self.ln_rho(n) + self.ln_rho(l - n)))
    }

    pub fn func_binom(&self, l: usize, n: usize) -> Result<f64> {
        self.ln_func_binom(l, n).map(f64::exp)
    }

    /// Snapshot of the table for levels `0..=n`.
    pub fn structure_table(&self, n: usize) -> StructureTable {
        self.ensure(n);
        let t = self.inner.table.read().expect("structure table lock");
        StructureTable { rho_log: t.0[..=n].to_vec(), e: t.1[1..=n].to_vec() }
    }

    /// Lower bound on `e(m)` valid for every `m >= from`.
    pub fn e_lower_bound(&self, from: usize) -> f64 {
        let m = from.max(1) as f64;
        let r = &self.inner.reduced;
        let expo = 1 + r.q() as i32 - r.p() as i32;
        let mut v = m.powi(expo);
        for &bj in &r.b {
            v *= (1.0 + (bj - 1.0) / m).min(1.0);
        }
        for &ai in &r.a {
            v *= (1.0 / (1.0 + (ai - 1.0) / m)).min(1.0);
        }
        v
    }

    /// `ln Γ(b̃/ã) = sum_j ln Γ(b_j) - sum_i ln Γ(a_i)`.
    pub fn ln_gamma_ratio(&self) -> f64 {
        let r = &self.inner.reduced;
        let up: f64 = r.b.iter().map(|&b| ln_gamma_positive(b)).sum();
        let down: f64 = r.a.iter().map(|&a| ln_gamma_positive(a)).sum();
        up - down
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma::pochhammer;

    fn pho() -> Model {
        Model::pho(1.5).unwrap()
    }

    #[test]
    fn validation() {
        assert!(Model::new(ModelParams::new(vec![], vec![])).is_ok());
        assert!(Model::new(ModelParams::new(vec![], vec![1.5])).is_ok());
        assert_eq!(Model::new(ModelParams::new(vec![1.0, 2.0], vec![])).unwrap_err(), Error::ZeroRadius { p: 2, q: 0 });
        assert!(matches!(Model::new(ModelParams::new(vec![], vec![-1.0])), Err(Error::Validation(_))));
        assert!(matches!(Model::new(ModelParams::new(vec![0.0], vec![])), Err(Error::Validation(_))));
    }

    #[test]
    fn parse_and_display_round_trip() {
        let p: ModelParams = "p=0,q=1;a=;b=1.5".parse().unwrap();
        assert_eq!(p, ModelParams::new(vec![], vec![1.5]));
        assert_eq!(p.to_string(), "p=0,q=1;a=;b=1.5");
        let p: ModelParams = " p=2, q=2 ; a=1.25, 3 ; b=0.5,7 ".parse().unwrap();
        assert_eq!(p, ModelParams::new(vec![1.25, 3.0], vec![0.5, 7.0]));
        assert_eq!(p.to_string().parse::<ModelParams>().unwrap(), p);
        let p: ModelParams = "p=0,q=0".parse().unwrap();
        assert_eq!(p, ModelParams::new(vec![], vec![]));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!("p=1,q=0;a=;b=".parse::<ModelParams>(), Err(Error::Parse(_))));
        assert!(matches!("p=0,q=1;a=;b=x".parse::<ModelParams>(), Err(Error::Parse(_))));
        assert!(matches!("q=0".parse::<ModelParams>(), Err(Error::Parse(_))));
        assert!(matches!("p=0,q=0,r=1".parse::<ModelParams>(), Err(Error::Parse(_))));
        assert!(matches!("p=0,q=1;a=;b=-1".parse::<Model>(), Err(Error::Validation(_))));
    }

    #[test]
    fn e_coefficient_examples() {
        assert_eq!(Model::canonical().e_coeff(5).unwrap(), 5.0);
        assert_eq!(pho().e_coeff(1).unwrap(), 1.5);
        assert_eq!(pho().e_coeff(2).unwrap(), 5.0);
        assert!(pho().e_coeff(0).is_err());
    }

    #[test]
    fn rho_examples() {
        assert!((Model::canonical().rho(5) - 120.0).abs() < 1e-12);
        assert_eq!(pho().ln_rho(0), 0.0);
        assert!((pho().rho(2) - 7.5).abs() < 1e-13);
        assert!((pho().func_binom(2, 1).unwrap() - 7.5 / 2.25).abs() < 1e-13);
        assert!((Model::canonical().func_binom(4, 2).unwrap() - 6.0).abs() < 1e-13);
        assert!((pho().ln_kp_rho(2).exp() - 4.0 / 7.5).abs() < 1e-13);
        assert!(pho().func_binom(2, 3).is_err());
    }

    #[test]
    fn structure_table_consistency() {
        for m in [
            Model::canonical(),
            pho(),
            "p=1,q=0;a=1.3;b=".parse().unwrap(),
            "p=2,q=3;a=0.7,2.2;b=1.1,0.4,3".parse().unwrap(),
        ] {
            let t = m.structure_table(200);
            assert_eq!(t.rho_log[0], 0.0);
            for n in 1..=200 {
                let d = t.rho_log[n] - t.rho_log[n - 1];
                let scale = ln_factorial(n).max(1.0);
                assert!((d - t.e[n - 1].ln()).abs() < 1e-14 * scale, "{m} n={n}");
                if n <= 50 {
                    assert!((d - t.e[n - 1].ln()).abs() < 1e-12, "{m} n={n}");
                }
            }
        }
    }

    #[test]
    fn rho_matches_pochhammer_products() {
        let m: Model = "p=2,q=3;a=0.7,2.2;b=1.1,0.4,3".parse().unwrap();
        for n in 0..=50usize {
            let mut g = 1.0;
            for &b in &m.params().b {
                g *= pochhammer(b, n);
            }
            for &a in &m.params().a {
                g /= pochhammer(a, n);
            }
            let want = ln_factorial(n) + g.ln();
            assert!((m.ln_rho(n) - want).abs() <= 1e-12 * want.abs().max(1.0), "n = {n}");
            assert!((m.ln_g_factorial(n) - g.ln()).abs() <= 1e-12 * g.ln().abs().max(1.0));
        }
    }

    #[test]
    fn equal_pairs_cancel_to_the_canonical_family() {
        let m: Model = "p=2,q=2;a=1.7,0.3;b=0.3,1.7".parse().unwrap();
        assert!(m.is_canonical());
        for n in 0..=50 {
            assert_eq!(m.ln_rho(n), ln_factorial(n));
        }
    }

    #[test]
    fn radius_and_dual() {
        assert_eq!(Model::canonical().radius(), f64::INFINITY);
        assert_eq!(pho().radius(), f64::INFINITY);
        let m: Model = "p=1,q=0;a=2;b=".parse().unwrap();
        assert_eq!(m.radius(), 1.0);
        assert_eq!(pho().dual().radius(), 1.0);
        let wide: Model = "p=0,q=2;a=;b=1,2".parse().unwrap();
        assert_eq!(wide.dual().radius(), 0.0);
        for n in 0..30 {
            assert!((pho().dual().ln_rho(n) - pho().ln_kp_rho(n)).abs() < 1e-12);
        }
    }

    #[test]
    fn squared_family_has_squared_rho() {
        let m: Model = "p=1,q=2;a=0.8;b=1.5,2.5".parse().unwrap();
        let s = m.squared();
        for n in 0..40 {
            let want = 2.0 * m.ln_rho(n);
            assert!((s.ln_rho(n) - want).abs() <= 1e-12 * want.abs().max(1.0));
        }
    }

    #[test]
    fn e_lower_bound_holds() {
        for m in [
            Model::canonical(),
            pho(),
            "p=1,q=0;a=1.3;b=".parse().unwrap(),
            "p=1,q=0;a=0.2;b=".parse().unwrap(),
            "p=2,q=1;a=3,0.5;b=0.1".parse().unwrap(),
        ] {
            for from in 1..60 {
                let lb = m.e_lower_bound(from);
                for k in from..from + 200 {
                    assert!(m.e(k) >= lb * (1.0 - 1e-15), "{m} from={from} k={k}");
                }
            }
        }
    }

    #[test]
    fn table_grows_lazily_and_is_shared() {
        let m = pho();
        let c = m.clone();
        let far = m.ln_rho(1000);
        assert_eq!(c.structure_table(1000).rho_log[1000], far);
    }
}
