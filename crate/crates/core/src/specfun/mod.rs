//! Scalar special functions and quadrature.

pub mod bessel;
pub mod gamma;
pub mod quadrature;
pub mod series;

pub use bessel::{bessel_i, bessel_k};
pub use gamma::{ln_factorial, ln_gamma_signed, ln_pochhammer, log_gamma, pochhammer, recip_gamma, SignedLn};
pub use quadrature::{integrate, radial_quadrature, radial_quadrature_split, QuadResult};
pub use series::{
    pfq, pfq_real, pfq_summed, positive_tail, truncate_positive, PositiveTruncation, SeriesResult, MAX_TERMS,
};
