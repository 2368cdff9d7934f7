//! Toda flow of the recurrence coefficients in t.
//!
//! ```text
//! (a_n²)' = a_n² (b_n − b_{n−1})
//!  b_n'   = a_{n+1}² − a_n²
//! ```
//!
//! Pointwise residuals use central differences of Hankel-route tables. The
//! x_n derivative is analytic; only second derivatives are differenced.

use crate::discrete::run_discrete;
use crate::error::{Error, Result};
use crate::moments::{base_moments, hankel_a2, hankel_route, CoeffTable, Route, WeightParams};
use crate::numerics::ExtReal;

/// Default central-difference step `2^(-prec/8)` (`2^-32` at 256 bits).
pub fn default_step(prec: u32) -> ExtReal {
    ExtReal::pow2(-((prec / 8) as i32), prec)
}

/// `(f(t+h) − f(t−h)) / 2h`
pub fn central_difference(plus: &ExtReal, minus: &ExtReal, h: &ExtReal) -> ExtReal {
    (plus - minus) / (h * 2.0)
}

/// x_n' from x_n, y_n: `x' = (√2 t x − 4 y x² − 2) / (2√2)`.
pub fn xn_derivative(x: &ExtReal, y: &ExtReal, t: &ExtReal) -> ExtReal {
    let prec = x.prec().max(y.prec());
    let sqrt2 = ExtReal::sqrt2(prec);
    (&sqrt2 * t * x - y * x.square() * 4.0 - 2.0) / (sqrt2 * 2.0)
}

#[derive(Clone, Debug)]
pub struct TodaResidualPoint {
    pub t: ExtReal,
    /// (n, r1_n) for 1 ≤ n ≤ N
    pub r1: Vec<(usize, ExtReal)>,
    /// (n, r2_n) for 0 ≤ n ≤ N−1
    pub r2: Vec<(usize, ExtReal)>,
}

#[derive(Clone, Debug)]
pub struct TodaResidualReport {
    pub points: Vec<TodaResidualPoint>,
    pub h: ExtReal,
    pub precision_bits: u32,
}

impl TodaResidualReport {
    pub fn max_abs(&self) -> f64 {
        self.points
            .iter()
            .flat_map(|p| p.r1.iter().chain(p.r2.iter()))
            .map(|(_, r)| r.abs().to_f64())
            .fold(0.0, f64::max)
    }
}

/// Toda residuals at one t from tables at t, t+h and t−h.
pub fn toda_residuals_from_tables(
    center: &CoeffTable,
    plus: &CoeffTable,
    minus: &CoeffTable,
    h: &ExtReal,
) -> TodaResidualPoint {
    let n_max = center.n_max();
    let r1 = (1..=n_max)
        .map(|n| {
            let fd = central_difference(&plus.a2[n], &minus.a2[n], h);
            let rhs = &center.a2[n] * (&center.b[n] - &center.b[n - 1]);
            (n, fd - rhs)
        })
        .collect();
    let r2 = (0..n_max)
        .map(|n| {
            let fd = central_difference(&plus.b[n], &minus.b[n], h);
            let rhs = &center.a2[n + 1] - &center.a2[n];
            (n, fd - rhs)
        })
        .collect();
    TodaResidualPoint {
        t: center.params.t.clone(),
        r1,
        r2,
    }
}

/// Residuals of both Toda equations over a grid of t values.
pub fn toda_residuals(
    params: &WeightParams,
    n_max: usize,
    t_grid: &[ExtReal],
    h: &ExtReal,
    prec: u32,
) -> Result<TodaResidualReport> {
    let mut points = Vec::with_capacity(t_grid.len());
    for t in t_grid {
        let at = |t: ExtReal| hankel_route(&params.with_t(t), n_max, prec);
        let center = at(t.clone())?;
        let plus = at(t + h)?;
        let minus = at(t - h)?;
        points.push(toda_residuals_from_tables(&center, &plus, &minus, h));
    }
    Ok(TodaResidualReport {
        points,
        h: h.clone(),
        precision_bits: prec,
    })
}

/// Residual of the second-order equation for x_n given x, x', x''.
pub fn xn_ode_residual_at(
    x: &ExtReal,
    x1: &ExtReal,
    x2: &ExtReal,
    t: &ExtReal,
    n: usize,
    alpha: &ExtReal,
) -> Result<ExtReal> {
    if x.is_zero() {
        return Err(Error::Pole("x_n"));
    }
    let prec = x.prec();
    let sqrt2 = ExtReal::sqrt2(prec);
    let rhs = x1.square() * 1.5 / x + alpha.square() * x.powi(3) * 0.25
        - x * 0.125 * (t.square() - 4.0 - (8 * n) as f64 - alpha * 4.0)
        + t / &sqrt2
        - 0.75 / x;
    Ok(x2 - rhs)
}

/// Residual of the x_n equation at t, with x'' from central differences of
/// the analytic x' at t ± h.
pub fn xn_ode_residual(params: &WeightParams, n: usize, t: &ExtReal, h: &ExtReal, prec: u32) -> Result<ExtReal> {
    let orbit_n = n.max(1);
    let state_at = |t: ExtReal| -> Result<(ExtReal, ExtReal, ExtReal)> {
        let run = run_discrete(&params.with_t(t.clone()), orbit_n, prec)?;
        let s = &run.states[n];
        let x1 = xn_derivative(&s.x, &s.y, &t);
        Ok((s.x.clone(), x1, t))
    };
    let (x, x1, t_c) = state_at(t.clone())?;
    let (_, x1_plus, _) = state_at(t + h)?;
    let (_, x1_minus, _) = state_at(t - h)?;
    let x2 = central_difference(&x1_plus, &x1_minus, h);
    xn_ode_residual_at(&x, &x1, &x2, &t_c, n, &params.alpha)
}

// Dormand–Prince 5(4) tableau as exact rationals.
const DP_C: [(i64, i64); 7] = [(0, 1), (1, 5), (3, 10), (4, 5), (8, 9), (1, 1), (1, 1)];
const DP_A: [&[(i64, i64)]; 7] = [
    &[],
    &[(1, 5)],
    &[(3, 40), (9, 40)],
    &[(44, 45), (-56, 15), (32, 9)],
    &[(19372, 6561), (-25360, 2187), (64448, 6561), (-212, 729)],
    &[(9017, 3168), (-355, 33), (46732, 5247), (49, 176), (-5103, 18656)],
    &[(35, 384), (0, 1), (500, 1113), (125, 192), (-2187, 6784), (11, 84)],
];
const DP_B: [(i64, i64); 7] = [(35, 384), (0, 1), (500, 1113), (125, 192), (-2187, 6784), (11, 84), (0, 1)];
const DP_B_LOW: [(i64, i64); 7] = [
    (5179, 57600),
    (0, 1),
    (7571, 16695),
    (393, 640),
    (-92097, 339200),
    (187, 2100),
    (1, 40),
];

struct TodaSystem<'a> {
    params: &'a WeightParams,
    n_max: usize,
    prec: u32,
}

impl TodaSystem<'_> {
    /// State layout: [a_1², …, a_N², b_0, …, b_N].
    fn rhs(&self, t: &ExtReal, state: &[ExtReal]) -> Result<Vec<ExtReal>> {
        let n = self.n_max;
        let closure = hankel_a2(&self.params.with_t(t.clone()), n + 1, self.prec)?;
        let zero = ExtReal::zero(self.prec);
        let a2 = |k: usize| -> &ExtReal {
            match k {
                0 => &zero,
                k if k <= n => &state[k - 1],
                _ => &closure,
            }
        };
        let b = |k: usize| &state[n + k];
        let mut out = Vec::with_capacity(state.len());
        for k in 1..=n {
            out.push(a2(k) * (b(k) - b(k - 1)));
        }
        for k in 0..=n {
            out.push(a2(k + 1) - a2(k));
        }
        Ok(out)
    }

    fn table(&self, t: &ExtReal, state: &[ExtReal]) -> Result<CoeffTable> {
        let n = self.n_max;
        let params = self.params.with_t(t.clone());
        let (mu0, _) = base_moments(&params, self.prec)?;
        let mut a2 = vec![ExtReal::zero(self.prec)];
        a2.extend(state[..n].iter().cloned());
        Ok(CoeffTable {
            params,
            a2,
            b: state[n..].to_vec(),
            mu0,
            route: Route::Toda,
            precision_bits: self.prec,
        })
    }
}

/// Integrates the Toda system for n = 0..=N from t0 to t1 with an adaptive
/// Dormand–Prince 5(4) pair. Initial data and the closure a_{N+1}²(t) come
/// from the Hankel route. Returns the table at every accepted step,
/// starting with t0 and ending exactly at t1.
pub fn toda_integrate(
    params: &WeightParams,
    n_max: usize,
    t0: &ExtReal,
    t1: &ExtReal,
    tol: f64,
    prec: u32,
) -> Result<Vec<CoeffTable>> {
    if n_max < 1 {
        return Err(Error::Domain("Toda integration needs N >= 1".into()));
    }
    if t1 < t0 {
        return Err(Error::Domain("Toda integration needs t0 <= t1".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain("local tolerance must be positive".into()));
    }
    let start = hankel_route(&params.with_t(t0.clone()), n_max, prec)?;
    let work = start.precision_bits;
    let system = TodaSystem {
        params,
        n_max,
        prec: work,
    };
    let mut state: Vec<ExtReal> = start.a2[1..].iter().chain(start.b.iter()).cloned().collect();
    let mut t = t0.with_prec(work);
    let t1 = t1.with_prec(work);
    let mut trajectory = vec![start];
    if t == t1 {
        return Ok(trajectory);
    }

    let r = |(p, q): (i64, i64)| ExtReal::ratio(p, q, work);
    let c: Vec<ExtReal> = DP_C.iter().copied().map(r).collect();
    let a: Vec<Vec<ExtReal>> = DP_A.iter().map(|row| row.iter().copied().map(r).collect()).collect();
    let b: Vec<ExtReal> = DP_B.iter().copied().map(r).collect();
    let e: Vec<ExtReal> = DP_B
        .iter()
        .zip(DP_B_LOW.iter())
        .map(|(&hi, &lo)| r(hi) - r(lo))
        .collect();

    let span = (&t1 - &t).to_f64();
    let mut h = ExtReal::from_f64((span * tol.powf(0.2)).min(span), work);
    let h_min = span * 2f64.powi(-50);

    loop {
        let remaining = &t1 - &t;
        let last = h >= remaining;
        if last {
            h = remaining;
        }
        let mut k: Vec<Vec<ExtReal>> = Vec::with_capacity(7);
        k.push(system.rhs(&t, &state)?);
        for stage in 1..7 {
            let stage_state: Vec<ExtReal> = (0..state.len())
                .map(|i| {
                    let incr = a[stage]
                        .iter()
                        .enumerate()
                        .fold(ExtReal::zero(work), |acc, (j, aij)| acc + aij * &k[j][i]);
                    &state[i] + &h * incr
                })
                .collect();
            k.push(system.rhs(&(&t + &c[stage] * &h), &stage_state)?);
        }
        // The FSAL stage k[6] is evaluated at the 5th-order solution.
        let next: Vec<ExtReal> = (0..state.len())
            .map(|i| {
                let incr = (0..7).fold(ExtReal::zero(work), |acc, j| acc + &b[j] * &k[j][i]);
                &state[i] + &h * incr
            })
            .collect();
        let err = (0..state.len())
            .map(|i| {
                let est = (0..7).fold(ExtReal::zero(work), |acc, j| acc + &e[j] * &k[j][i]);
                let scale = tol * (1.0 + next[i].abs().to_f64());
                (&h * est).abs().to_f64() / scale
            })
            .fold(0.0, f64::max);

        if err <= 1.0 {
            t = if last { t1.clone() } else { &t + &h };
            state = next;
            trajectory.push(system.table(&t, &state)?);
            if last {
                return Ok(trajectory);
            }
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        let h_next = h.to_f64() * factor;
        if h_next < h_min {
            return Err(Error::Stiffness {
                t: t.to_f64(),
                h: h_next,
            });
        }
        h = ExtReal::from_f64(h_next, work);
    }
}
