//! Moments of the semi-classical Laguerre weight `x^α e^(-x²+tx)` on (0, ∞)
//! and recurrence coefficients from Hankel determinants of those moments.

use std::fmt;

use crate::error::{Error, Result};
use crate::numerics::{gamma, ExtReal};

/// Parameters (α, t) of the weight `x^α e^(-x²+tx)`, with α > −1.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightParams {
    pub alpha: ExtReal,
    pub t: ExtReal,
}

impl WeightParams {
    pub fn new(alpha: ExtReal, t: ExtReal) -> Result<Self> {
        if alpha <= -1.0 || !alpha.is_finite() {
            return Err(Error::Domain(format!(
                "weight exponent must satisfy alpha > -1, got {}",
                alpha.to_f64()
            )));
        }
        if !t.is_finite() {
            return Err(Error::Domain("t must be finite".into()));
        }
        Ok(WeightParams { alpha, t })
    }

    /// Convenience constructor for exactly representable `f64` inputs.
    pub fn from_f64(alpha: f64, t: f64, prec: u32) -> Result<Self> {
        Self::new(ExtReal::from_f64(alpha, prec), ExtReal::from_f64(t, prec))
    }

    /// Same α at a different deformation parameter.
    pub fn with_t(&self, t: ExtReal) -> Self {
        WeightParams {
            alpha: self.alpha.clone(),
            t,
        }
    }

    /// The α+1 weight at the same t.
    pub fn shifted(&self) -> Self {
        WeightParams {
            alpha: &self.alpha + 1.0,
            t: self.t.clone(),
        }
    }

    pub fn at_prec(&self, prec: u32) -> Self {
        WeightParams {
            alpha: self.alpha.with_prec(prec),
            t: self.t.with_prec(prec),
        }
    }
}

/// Moments μ_0..μ_K of one weight.
#[derive(Clone, Debug)]
pub struct MomentTable {
    pub params: WeightParams,
    pub mu: Vec<ExtReal>,
    pub precision_bits: u32,
}

/// Which computation produced a [`CoeffTable`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Route {
    Hankel,
    Discrete,
    Toda,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Hankel => "hankel",
            Route::Discrete => "discrete",
            Route::Toda => "toda",
        })
    }
}

/// Orthonormal recurrence coefficients `x p_n = a_{n+1} p_{n+1} + b_n p_n + a_n p_{n-1}`.
///
/// `a2[n]` holds a_n² for n = 0..=N with `a2[0] = 0` (the β_0 convention),
/// `b[n]` holds b_n for n = 0..=N. In monic normalization β_n = a_n² and
/// α_n = b_n.
#[derive(Clone, Debug)]
pub struct CoeffTable {
    pub params: WeightParams,
    pub a2: Vec<ExtReal>,
    pub b: Vec<ExtReal>,
    /// μ_0, the squared norm of the constant monic polynomial.
    pub mu0: ExtReal,
    pub route: Route,
    pub precision_bits: u32,
}

impl CoeffTable {
    /// Largest index N stored.
    pub fn n_max(&self) -> usize {
        self.b.len() - 1
    }

    pub fn a2(&self, n: usize) -> Result<&ExtReal> {
        self.a2.get(n).ok_or(Error::IndexOutOfRange {
            index: n,
            len: self.a2.len(),
        })
    }

    pub fn b(&self, n: usize) -> Result<&ExtReal> {
        self.b.get(n).ok_or(Error::IndexOutOfRange {
            index: n,
            len: self.b.len(),
        })
    }
}

/// The series peaks near m = t²/2 and needs t²/4·log2(e) guard bits, so the
/// cost grows like t⁴; beyond this |t| it is reported as exhausted.
pub const MAX_ABS_T: f64 = 200.0;

fn guard_bits(t: &ExtReal) -> u32 {
    // Alternating terms for t < 0 grow to roughly e^{t²/4} times the result.
    let t = t.to_f64();
    32 + (t * t / 4.0 * std::f64::consts::LOG2_E).ceil() as u32
}

/// μ_k for k ∈ {0, 1} by the series Σ_m t^m/m! · Γ((k+m+α+1)/2)/2.
pub fn base_moments(params: &WeightParams, prec: u32) -> Result<(ExtReal, ExtReal)> {
    WeightParams::new(params.alpha.clone(), params.t.clone())?;
    let t_f = params.t.to_f64().abs();
    if t_f > MAX_ABS_T {
        return Err(Error::exhausted(format!("moment series (|t| above {MAX_ABS_T})"), prec));
    }
    let work = prec + guard_bits(&params.t);
    let alpha = params.alpha.with_prec(work);
    let t = params.t.with_prec(work);

    // g_j = Γ((j+α+1)/2)/2 and g_{j+2} = g_j (j+α+1)/2
    let mut g = [
        gamma(&((&alpha + 1.0) * 0.5))? * 0.5,
        gamma(&((&alpha + 2.0) * 0.5))? * 0.5,
    ];
    let mut sums = [g[0].clone(), g[1].clone()];
    let mut power = ExtReal::one(work);
    let peak = (t_f * t_f / 2.0) as usize + 2;
    let threshold = ExtReal::pow2(-(work as i32) - 16, work);
    let mut j = 0usize;
    for m in 1usize.. {
        if m > 8 * peak + 1000 {
            return Err(Error::exhausted("moment series", prec));
        }
        // advance g to (g_m, g_{m+1})
        let next = &g[0] * ((&alpha + (j + 1) as f64) * 0.5);
        g = [g[1].clone(), next];
        j += 1;
        power = power * &t / m as f64;
        let term0 = &power * &g[0];
        let term1 = &power * &g[1];
        sums[0] += &term0;
        sums[1] += &term1;
        if m > peak
            && term0.abs() <= &threshold * sums[0].abs()
            && term1.abs() <= &threshold * sums[1].abs()
        {
            break;
        }
    }
    let [mu0, mu1] = sums;
    Ok((mu0.with_prec(prec), mu1.with_prec(prec)))
}

/// μ_0..μ_K via μ_{k+2} = ((α+k+1) μ_k + t μ_{k+1}) / 2.
pub fn moment_table(params: &WeightParams, k_max: usize, prec: u32) -> Result<MomentTable> {
    if k_max < 1 {
        return Err(Error::Domain("moment table needs K >= 1".into()));
    }
    let work = prec + guard_bits(&params.t);
    let (mu0, mu1) = base_moments(params, work)?;
    let alpha = params.alpha.with_prec(work);
    let t = params.t.with_prec(work);
    let mut mu = Vec::with_capacity(k_max + 1);
    mu.push(mu0);
    mu.push(mu1);
    for k in 0..k_max.saturating_sub(1) {
        let next = ((&alpha + (k + 1) as f64) * &mu[k] + &t * &mu[k + 1]) * 0.5;
        mu.push(next);
    }
    Ok(MomentTable {
        params: params.clone(),
        mu: mu.into_iter().map(|m| m.with_prec(prec)).collect(),
        precision_bits: prec,
    })
}

/// Determinant by fraction-free (Bareiss) elimination with full pivoting.
pub fn determinant(mut m: Vec<Vec<ExtReal>>) -> ExtReal {
    let n = m.len();
    if n == 0 {
        return ExtReal::one(64);
    }
    let prec = m[0][0].prec();
    let mut negate = false;
    let mut prev = ExtReal::one(prec);
    for k in 0..n {
        let (mut pr, mut pc) = (k, k);
        let mut best = m[k][k].abs();
        for (i, row) in m.iter().enumerate().skip(k) {
            for (j, v) in row.iter().enumerate().skip(k) {
                let a = v.abs();
                if a > best {
                    best = a;
                    pr = i;
                    pc = j;
                }
            }
        }
        if best.is_zero() {
            return ExtReal::zero(prec);
        }
        if pr != k {
            m.swap(pr, k);
            negate = !negate;
        }
        if pc != k {
            for row in m.iter_mut() {
                row.swap(pc, k);
            }
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// D_n = det[μ_{i+j+shift}]_{i,j<n}, D_0 = 1.
fn hankel_det(mu: &[ExtReal], n: usize, shift: usize) -> ExtReal {
    if n == 0 {
        return ExtReal::one(mu[0].prec());
    }
    let m = (0..n)
        .map(|i| (0..n).map(|j| mu[i + j + shift].clone()).collect())
        .collect();
    determinant(m)
}

/// D'_n: D_n with its last column replaced by (μ_n, …, μ_{2n−1}); D'_0 = 0.
fn hankel_det_shifted_last(mu: &[ExtReal], n: usize, shift: usize) -> ExtReal {
    if n == 0 {
        return ExtReal::zero(mu[0].prec());
    }
    let m = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let idx = if j == n - 1 { i + n } else { i + j };
                    mu[idx + shift].clone()
                })
                .collect()
        })
        .collect();
    determinant(m)
}

/// Working precision used for an N-row Hankel computation.
pub fn hankel_precision(prec: u32, n: usize) -> u32 {
    prec.max(64 + 24 * n as u32)
}

/// Hankel determinants D_0..D_{n_max} and D'_0..D'_{n_max} of the moment
/// sequence offset by `shift` (shift 1 gives the α+1 weight).
pub(crate) struct HankelDets {
    pub d: Vec<ExtReal>,
    pub d_prime: Vec<ExtReal>,
}

pub(crate) fn hankel_dets(mu: &[ExtReal], n_max: usize, shift: usize, prec: u32) -> Result<HankelDets> {
    let mut d = Vec::with_capacity(n_max + 1);
    let mut d_prime = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let dn = hankel_det(mu, n, shift);
        if !dn.is_positive() {
            return Err(Error::exhausted(format!("Hankel determinant D_{n}"), prec));
        }
        d.push(dn);
        d_prime.push(hankel_det_shifted_last(mu, n, shift));
    }
    Ok(HankelDets { d, d_prime })
}

/// Recurrence coefficients for n = 0..=N from Hankel determinants:
/// b_n = D'_{n+1}/D_{n+1} − D'_n/D_n and a_n² = D_{n+1} D_{n−1} / D_n².
pub fn hankel_route(params: &WeightParams, n_max: usize, prec: u32) -> Result<CoeffTable> {
    if n_max < 1 {
        return Err(Error::Domain("coefficient table needs N >= 1".into()));
    }
    let work = hankel_precision(prec, n_max);
    let moments = moment_table(params, 2 * n_max + 1, work)?;
    let dets = hankel_dets(&moments.mu, n_max + 1, 0, work)?;
    let (d, dp) = (&dets.d, &dets.d_prime);

    let mut a2 = vec![ExtReal::zero(work)];
    let mut b = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        b.push(&dp[n + 1] / &d[n + 1] - &dp[n] / &d[n]);
        if n >= 1 {
            let v = &d[n + 1] * &d[n - 1] / d[n].square();
            if !v.is_positive() {
                return Err(Error::exhausted(format!("a_{n}^2 from Hankel determinants"), work));
            }
            a2.push(v);
        }
    }
    Ok(CoeffTable {
        params: params.clone(),
        a2,
        b,
        mu0: moments.mu[0].clone(),
        route: Route::Hankel,
        precision_bits: work,
    })
}

/// a_n² alone, D_{n+1} D_{n−1} / D_n², for n ≥ 1.
pub fn hankel_a2(params: &WeightParams, n: usize, prec: u32) -> Result<ExtReal> {
    if n < 1 {
        return Err(Error::Domain("a_n^2 is defined for n >= 1".into()));
    }
    let work = hankel_precision(prec, n);
    let moments = moment_table(params, 2 * n + 1, work)?;
    let d_prev = hankel_det(&moments.mu, n - 1, 0);
    let d = hankel_det(&moments.mu, n, 0);
    let d_next = hankel_det(&moments.mu, n + 1, 0);
    let v = d_next * d_prev / d.square();
    if !v.is_positive() {
        return Err(Error::exhausted(format!("a_{n}^2 from Hankel determinants"), work));
    }
    Ok(v)
}
