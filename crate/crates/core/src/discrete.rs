//! Forward iteration of the discrete system
//!
//! ```text
//! x_n x_{n-1} = (y_n + z_n) / (y_n² − α²/4),   z_n = n + α/2
//! y_n + y_{n+1} = (1/x_n) (t/√2 − 1/x_n)
//! ```
//!
//! seeded with `x_0 = √2 μ_0 / (t μ_0 − 2 μ_1)` and `y_0 = −α/2`. The
//! coefficients follow from `2a_n² = y_n + n + α/2` and `2b_n = t − √2/x_n`.
//!
//! The orbit is unstable under forward iteration: rounding in the seed is
//! amplified with n. Runs therefore use the same precision policy as the
//! Hankel route, and no re-anchoring is ever done mid-orbit.

use crate::error::{Error, Result};
use crate::moments::{base_moments, hankel_precision, CoeffTable, Route, WeightParams};
use crate::numerics::ExtReal;

#[derive(Clone, Debug)]
pub struct DiscreteState {
    pub n: usize,
    pub x: ExtReal,
    pub y: ExtReal,
    /// z_n = n + α/2
    pub z: ExtReal,
}

#[derive(Clone, Debug)]
pub struct DiscreteRun {
    pub states: Vec<DiscreteState>,
    pub coeffs: CoeffTable,
}

/// The n = 0 state from the first two moments.
pub fn initial_state(params: &WeightParams, prec: u32) -> Result<DiscreteState> {
    let (mu0, mu1) = base_moments(params, prec)?;
    let alpha = params.alpha.with_prec(prec);
    let t = params.t.with_prec(prec);
    let denom = &t * &mu0 - &mu1 * 2.0;
    if denom.is_zero() {
        return Err(Error::SingularInitialization);
    }
    Ok(DiscreteState {
        n: 0,
        x: ExtReal::sqrt2(prec) * &mu0 / denom,
        y: -(&alpha * 0.5),
        z: &alpha * 0.5,
    })
}

/// Iterates the discrete system for n = 0..=N and extracts a_n², b_n.
///
/// Order per step: y_{n+1} from the second equation at index n, then x_{n+1}
/// from the first equation at index n+1. The n = 0 instance of the first
/// equation is the indeterminate form 0/0 and is never evaluated.
pub fn run_discrete(params: &WeightParams, n_max: usize, prec: u32) -> Result<DiscreteRun> {
    run_discrete_exact(params, n_max, hankel_precision(prec, n_max))
}

/// [`run_discrete`] at exactly `work` bits, without the precision policy.
/// Useful for measuring how fast the forward orbit loses accuracy.
pub fn run_discrete_exact(params: &WeightParams, n_max: usize, work: u32) -> Result<DiscreteRun> {
    if n_max < 1 {
        return Err(Error::Domain("coefficient table needs N >= 1".into()));
    }
    let alpha = params.alpha.with_prec(work);
    let t = params.t.with_prec(work);
    let sqrt2 = ExtReal::sqrt2(work);
    let t_over_sqrt2 = &t / &sqrt2;
    let quarter_alpha2 = alpha.square() * 0.25;
    let singular = ExtReal::pow2(-((work / 2) as i32), work);

    let first = initial_state(params, work)?;
    let mu0 = base_moments(params, work)?.0;
    let mut states = Vec::with_capacity(n_max + 1);
    states.push(first);
    for n in 0..n_max {
        let cur = &states[n];
        let inv_x = cur.x.recip();
        let y_next = &inv_x * (&t_over_sqrt2 - &inv_x) - &cur.y;
        let z_next = &alpha * 0.5 + (n + 1) as f64;
        let gap = y_next.square() - &quarter_alpha2;
        if gap.abs() < singular {
            return Err(Error::SingularOrbit { n: n + 1 });
        }
        let x_next = (&y_next + &z_next) / (gap * &cur.x);
        if x_next.is_zero() || !x_next.is_finite() {
            return Err(Error::exhausted(format!("x_{} of the discrete orbit", n + 1), work));
        }
        states.push(DiscreteState {
            n: n + 1,
            x: x_next,
            y: y_next,
            z: z_next,
        });
    }

    let mut a2 = vec![ExtReal::zero(work)];
    let mut b = Vec::with_capacity(n_max + 1);
    for s in &states {
        b.push((&t - &sqrt2 / &s.x) * 0.5);
        if s.n >= 1 {
            // 2a_n² = y_n + n + α/2 = y_n + z_n
            let v = (&s.y + &s.z) * 0.5;
            if !v.is_positive() {
                return Err(Error::exhausted(format!("a_{}^2 from the discrete orbit", s.n), work));
            }
            a2.push(v);
        }
    }
    Ok(DiscreteRun {
        states,
        coeffs: CoeffTable {
            params: params.clone(),
            a2,
            b,
            mu0,
            route: Route::Discrete,
            precision_bits: work,
        },
    })
}
