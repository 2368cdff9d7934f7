//! Numeric substrate: extended-precision reals, the gamma function and a
//! half-line quadrature used as an independent oracle.

mod gamma;
pub mod quadrature;
mod real;

pub use gamma::gamma;
pub use quadrature::{integrate_halfline, integrate_halfline_tol, quad_halfline, QuadResult};
pub use real::{
    abs_diff, compensated_sum, decimal_digits, rel_diff, ExtReal, DEFAULT_PRECISION,
    MIN_PRECISION,
};
