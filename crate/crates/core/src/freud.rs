//! Freud weight `|x|^(2α+1) e^(−x⁴+tx²)` on ℝ.
//!
//! The monic recurrence is `x P̃_n = P̃_{n+1} + A_n² P̃_{n−1}`. Its
//! coefficients obey the string equation (dPI)
//!
//! ```text
//! 4A_n² (A_{n−1}² + A_n² + A_{n+1}² − t/2) = n + (2α+1)Δ_n,   Δ_n = (1 − (−1)^n)/2
//! ```
//!
//! and the flow `(A_n²)' = A_n² (A_{n+1}² − A_{n−1}²)`. Since
//! `P̃_{2n}(x) = P_n^α(x²)` and `P̃_{2n+1}(x) = x P_n^{α+1}(x²)`, the Freud
//! coefficients interleave the Laguerre ones at α and α+1.

use crate::error::{Error, Result};
use crate::moments::{base_moments, CoeffTable, hankel_dets, hankel_precision, hankel_route, moment_table, WeightParams};
use crate::numerics::ExtReal;
use crate::painleve::{P4Params, P4Point};

#[derive(Clone, Debug)]
pub struct FreudTable {
    pub alpha: ExtReal,
    pub t: ExtReal,
    /// A_n² for n = 0..=N, with A_0² = 0.
    pub a2: Vec<ExtReal>,
    pub precision_bits: u32,
}

impl FreudTable {
    pub fn n_max(&self) -> usize {
        self.a2.len() - 1
    }

    pub fn a2(&self, n: usize) -> Result<&ExtReal> {
        self.a2.get(n).ok_or(Error::IndexOutOfRange { index: n, len: self.a2.len() })
    }
}

/// Working precision for a dPI orbit of length N.
///
/// The forward string-equation orbit loses about as many bits per step as
/// the Laguerre orbit does per half step, so the policy is indexed by the
/// matching Laguerre length.
pub fn dpi_precision(prec: u32, n_max: usize) -> u32 {
    hankel_precision(prec, n_max / 2 + 1)
}

/// A_0², …, A_N² by forward iteration of dPI from A_1² = μ_1/μ_0.
pub fn dpi_run(params: &WeightParams, n_max: usize, prec: u32) -> Result<FreudTable> {
    dpi_run_exact(params, n_max, dpi_precision(prec, n_max))
}

/// [`dpi_run`] at exactly `work` bits.
pub fn dpi_run_exact(params: &WeightParams, n_max: usize, work: u32) -> Result<FreudTable> {
    if n_max < 1 {
        return Err(Error::Domain("Freud table needs N >= 1".into()));
    }
    let (mu0, mu1) = base_moments(params, work)?;
    let alpha = params.alpha.with_prec(work);
    let t = params.t.with_prec(work);
    let half_t = &t * 0.5;
    let odd_weight = &alpha * 2.0 + 1.0;
    let floor = ExtReal::pow2(-((work / 2) as i32), work);

    let mut a2 = Vec::with_capacity(n_max + 1);
    a2.push(ExtReal::zero(work));
    a2.push(mu1 / mu0);
    for n in 1..n_max {
        let rhs = if n % 2 == 1 { &odd_weight + n as f64 } else { ExtReal::from_i64(n as i64, work) };
        let next = rhs / (&a2[n] * 4.0) - &a2[n - 1] - &a2[n] + &half_t;
        if !(next > floor) {
            return Err(Error::exhausted(format!("A_{}^2 of the dPI orbit", n + 1), work));
        }
        a2.push(next);
    }
    Ok(FreudTable {
        alpha: params.alpha.clone(),
        t: params.t.clone(),
        a2,
        precision_bits: work,
    })
}

/// dPI residual `4A_n²(A_{n−1}² + A_n² + A_{n+1}² − t/2) − n − (2α+1)Δ_n`.
pub fn dpi_residual(table: &FreudTable, n: usize) -> Result<ExtReal> {
    let prev = if n == 0 { ExtReal::zero(table.precision_bits) } else { table.a2(n - 1)?.clone() };
    let cur = table.a2(n)?;
    let next = table.a2(n + 1)?;
    let delta = if n % 2 == 1 { &table.alpha * 2.0 + 1.0 } else { ExtReal::zero(table.precision_bits) };
    Ok(cur * 4.0 * (prev + cur + next - &table.t * 0.5) - n as f64 - delta)
}

/// A_0², …, A_N² from Hankel determinants of μ_k and μ_{k+1}:
/// `A_{2n}² = h_n^α / h_{n−1}^{α+1}` and `A_{2n+1}² = h_n^{α+1} / h_n^α`
/// with `h_n = D_{n+1}/D_n`.
pub fn freud_hankel(params: &WeightParams, n_max: usize, prec: u32) -> Result<FreudTable> {
    if n_max < 1 {
        return Err(Error::Domain("Freud table needs N >= 1".into()));
    }
    let m = n_max / 2 + 1;
    let work = hankel_precision(prec, m);
    let mu = moment_table(params, 2 * m + 2, work)?.mu;
    let even = hankel_dets(&mu, m, 0, work)?.d;
    let odd = hankel_dets(&mu, m, 1, work)?.d;
    let norm = |d: &[ExtReal], k: usize| &d[k + 1] / &d[k];

    let mut a2 = vec![ExtReal::zero(work)];
    for n in 1..=n_max {
        let k = n / 2;
        let v = if n % 2 == 0 { norm(&even, k) / norm(&odd, k - 1) } else { norm(&odd, k) / norm(&even, k) };
        a2.push(v);
    }
    Ok(FreudTable {
        alpha: params.alpha.clone(),
        t: params.t.clone(),
        a2,
        precision_bits: work,
    })
}

/// FD[(A_n²)'] − A_n² (A_{n+1}² − A_{n−1}²) with central differences at t ± h.
pub fn dpi_f2_residual(params: &WeightParams, n: usize, h: &ExtReal, prec: u32) -> Result<ExtReal> {
    if n < 1 {
        return Err(Error::Domain("dPI flow residual needs n >= 1".into()));
    }
    let center = dpi_run(params, n + 1, prec)?;
    let plus = dpi_run(&params.with_t(&params.t + h), n + 1, prec)?;
    let minus = dpi_run(&params.with_t(&params.t - h), n + 1, prec)?;
    f2_residual_from_tables(&center, &plus, &minus, n, h)
}

pub fn f2_residual_from_tables(
    center: &FreudTable,
    plus: &FreudTable,
    minus: &FreudTable,
    n: usize,
    h: &ExtReal,
) -> Result<ExtReal> {
    let derivative = (plus.a2(n)? - minus.a2(n)?) / (h * 2.0);
    Ok(derivative - flow_rhs(center, n)?)
}

/// A_n² (A_{n+1}² − A_{n−1}²)
fn flow_rhs(table: &FreudTable, n: usize) -> Result<ExtReal> {
    let prev = if n == 0 { ExtReal::zero(table.precision_bits) } else { table.a2(n - 1)?.clone() };
    Ok(table.a2(n)? * (table.a2(n + 1)? - prev))
}

/// Residuals of the interleaving relations at one Laguerre index n.
#[derive(Clone, Debug)]
pub struct CrossResiduals {
    pub n: usize,
    /// (a_n^α)² − A_{2n}² A_{2n−1}²
    pub rel1_a: ExtReal,
    /// b_n^α − A_{2n}² − A_{2n+1}²
    pub rel1_b: ExtReal,
    /// (a_n^{α+1})² − A_{2n}² A_{2n+1}²
    pub rel2_a: ExtReal,
    /// b_n^{α+1} − A_{2n+2}² − A_{2n+1}²
    pub rel2_b: ExtReal,
}

impl CrossResiduals {
    pub fn named(&self) -> [(&'static str, &ExtReal); 4] {
        [
            ("rel1_a", &self.rel1_a),
            ("rel1_b", &self.rel1_b),
            ("rel2_a", &self.rel2_a),
            ("rel2_b", &self.rel2_b),
        ]
    }

    pub fn max_abs(&self) -> f64 {
        self.named().iter().map(|(_, v)| v.abs().to_f64()).fold(0.0, f64::max)
    }
}

/// Compares Laguerre tables at α and α+1 against the dPI orbit for n ≤ N.
pub fn freud_cross_check(params: &WeightParams, n_max: usize, prec: u32) -> Result<Vec<CrossResiduals>> {
    let lag = hankel_route(params, n_max.max(1), prec)?;
    let lag1 = hankel_route(&params.shifted(), n_max.max(1), prec)?;
    let freud = dpi_run(params, 2 * n_max + 2, prec)?;
    cross_residuals_from_tables(&lag, &lag1, &freud, n_max)
}

/// Interleaving residuals from Laguerre tables at α (`lag`) and α+1 (`lag1`)
/// and a Freud table reaching index 2N+2.
pub fn cross_residuals_from_tables(
    lag: &CoeffTable,
    lag1: &CoeffTable,
    freud: &FreudTable,
    n_max: usize,
) -> Result<Vec<CrossResiduals>> {
    freud.a2(2 * n_max + 2)?;
    let f = &freud.a2;
    (0..=n_max)
        .map(|n| {
            let rel1_a = if n == 0 { lag.a2(0)? - &f[0] } else { lag.a2(n)? - &f[2 * n] * &f[2 * n - 1] };
            Ok(CrossResiduals {
                n,
                rel1_a,
                rel1_b: lag.b(n)? - &f[2 * n] - &f[2 * n + 1],
                rel2_a: lag1.a2(n)? - &f[2 * n] * &f[2 * n + 1],
                rel2_b: lag1.b(n)? - &f[2 * n + 2] - &f[2 * n + 1],
            })
        })
        .collect()
}

/// P_IV parameters satisfied by f(z) = −2A_n²(2z):
/// even n gives `(−(2+n+4α)/2, −n²/2)`, odd n gives `(1/2 − n/2 + α, −(1+n+2α)²/2)`.
pub fn freud_p4_map(n: usize, alpha: &ExtReal) -> P4Params {
    let nf = n as f64;
    if n % 2 == 0 {
        P4Params {
            a: (alpha * 4.0 + 2.0 + nf) * -0.5,
            b: ExtReal::from_f64(-nf * nf / 2.0, alpha.prec()),
        }
    } else {
        P4Params {
            a: alpha + (0.5 - nf / 2.0),
            b: (alpha * 2.0 + 1.0 + nf).square() * -0.5,
        }
    }
}

/// f(z) = −2A_n²(2z) as a P_IV point. f' is exact through the flow
/// equation; f'' is a central difference of f' with step h in t.
pub fn freud_p4_point(alpha: &ExtReal, n: usize, z: &ExtReal, h: &ExtReal, prec: u32) -> Result<P4Point> {
    if n < 1 {
        return Err(Error::Domain("Freud P_IV map needs n >= 1".into()));
    }
    let t = z * 2.0;
    let table_at = |t: ExtReal| -> Result<FreudTable> {
        dpi_run(&WeightParams::new(alpha.clone(), t)?, n + 1, prec)
    };
    let center = table_at(t.clone())?;
    let plus = table_at(&t + h)?;
    let minus = table_at(&t - h)?;
    // f'(z) = −4 (A_n²)'(t)
    let f1 = |table: &FreudTable| flow_rhs(table, n).map(|v| v * -4.0);
    let q1 = f1(&center)?;
    let q2 = (f1(&plus)? - f1(&minus)?) / h;
    Ok(P4Point {
        z: z.with_prec(center.precision_bits),
        q: center.a2(n)? * -2.0,
        q1,
        q2,
        params: freud_p4_map(n, alpha),
    })
}

/// Which interleaving relation a Bäcklund link is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossRelation {
    /// f_1 = −2A_{2n}², f_2 = −2A_{2n+1}², q built from b_n^α
    Rel1,
    /// f_1 = −2A_{2n+2}², f_2 = −2A_{2n+1}², q built from b_n^{α+1}
    Rel2,
}

#[derive(Clone, Debug)]
pub struct FreudLink {
    pub f1: ExtReal,
    pub f2_direct: ExtReal,
    pub f2_backlund: ExtReal,
    pub q_direct: ExtReal,
    pub q_backlund: ExtReal,
}

/// `q(z) = −2z + 2b_n(2z)` from the Laguerre coefficients at α (Rel1) or
/// α+1 (Rel2).
pub fn freud_q_direct(alpha: &ExtReal, n: usize, z: &ExtReal, relation: CrossRelation, prec: u32) -> Result<ExtReal> {
    let mut params = WeightParams::new(alpha.clone(), z * 2.0)?;
    if relation == CrossRelation::Rel2 {
        params = params.shifted();
    }
    let table = hankel_route(&params, n.max(1), prec)?;
    Ok(table.b(n)? * 2.0 - z * 2.0)
}

/// Links the Freud functions f_1, f_2 to the Laguerre q through Bäcklund
/// transformations. f_1' is a central difference with step h in t.
pub fn freud_backlund_link(
    alpha: &ExtReal,
    n: usize,
    z: &ExtReal,
    relation: CrossRelation,
    h: &ExtReal,
    prec: u32,
) -> Result<FreudLink> {
    let (i1, i2) = match relation {
        CrossRelation::Rel1 => (2 * n, 2 * n + 1),
        CrossRelation::Rel2 => (2 * n + 2, 2 * n + 1),
    };
    let t = z * 2.0;
    let table_at = |t: ExtReal| -> Result<FreudTable> {
        dpi_run(&WeightParams::new(alpha.clone(), t)?, i1.max(i2).max(1), prec)
    };
    let center = table_at(t.clone())?;
    let f1 = center.a2(i1)? * -2.0;
    if f1.is_zero() {
        return Err(Error::Pole("f_1"));
    }
    let f2_direct = center.a2(i2)? * -2.0;
    let f1_plus = table_at(&t + h)?.a2(i1)? * -2.0;
    let f1_minus = table_at(&t - h)?.a2(i1)? * -2.0;
    let f1_prime = (f1_plus - f1_minus) / h;

    let nf = n as f64;
    let common = z * &f1 * 2.0 + f1.square();
    let f2_backlund = match relation {
        CrossRelation::Rel1 => (-common + 2.0 * nf - &f1_prime) / (&f1 * 2.0),
        CrossRelation::Rel2 => (-common + (2.0 + 2.0 * nf) + &f1_prime) / (&f1 * 2.0),
    };
    let q_backlund = z * -2.0 - &f1 - &f2_backlund;
    let q_direct = freud_q_direct(alpha, n, z, relation, prec)?;
    Ok(FreudLink {
        f1,
        f2_direct,
        f2_backlund,
        q_direct,
        q_backlund,
    })
}
