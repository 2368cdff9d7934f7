//! Verification suites: every identity evaluated at one t, as flat rows.
//!
//! Each suite computes its inputs independently of the identity it checks
//! (tables from the Hankel route, orbits from the discrete system, Freud
//! coefficients from dPI) and reports the signed residual next to the
//! tolerance it is judged against. Identities in the variable z = t/2 are
//! reported with `point_var = "z"`.

use std::fmt;
use std::str::FromStr;

use crate::discrete::run_discrete;
use crate::error::{Error, Result};
use crate::freud::{
    cross_residuals_from_tables, dpi_residual, dpi_run, f2_residual_from_tables, freud_backlund_link, freud_hankel,
    freud_p4_point, CrossRelation,
};
use crate::ladder::{verify_conditions, w_equals_rn_check};
use crate::moments::{hankel_route, WeightParams};
use crate::numerics::{rel_diff, ExtReal};
use crate::painleve::{ladder_down, ladder_up, p4_residual, q_from_orbit, q_orbit_points, riccati_residual};
use crate::toda::{toda_residuals_from_tables, xn_ode_residual};

/// Acceptance thresholds for each family of identities.
#[derive(Clone, Debug, PartialEq)]
pub struct Tolerances {
    /// Agreement between independent routes (relative).
    pub route: f64,
    /// Toda and dPI flow residuals (finite differences).
    pub toda: f64,
    /// Second-order equation for x_n.
    pub ode: f64,
    /// P_IV residuals.
    pub p4: f64,
    /// Riccati residual at n = 0 (analytic, no differencing).
    pub riccati: f64,
    /// Bäcklund ladder q_n → q_{n±1}.
    pub ladder: f64,
    /// Ladder-operator compatibility conditions.
    pub cond: f64,
    /// Identities that need a finite-difference first derivative.
    pub fd: f64,
    /// Identities that need quadrature.
    pub quad: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            route: 1e-25,
            toda: 1e-12,
            ode: 1e-12,
            p4: 1e-12,
            riccati: 1e-25,
            ladder: 1e-12,
            cond: 1e-25,
            fd: 1e-12,
            quad: 1e-15,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Toda,
    P4,
    Riccati,
    Ladder,
    Backlund,
    Dpi,
    Cross,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Toda,
        Suite::P4,
        Suite::Riccati,
        Suite::Ladder,
        Suite::Backlund,
        Suite::Dpi,
        Suite::Cross,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Toda => "toda",
            Suite::P4 => "p4",
            Suite::Riccati => "riccati",
            Suite::Ladder => "ladder",
            Suite::Backlund => "backlund",
            Suite::Dpi => "dpi",
            Suite::Cross => "cross",
        }
    }

    /// Whether the suite's hypotheses hold for these parameters. The ladder
    /// relations are only established for α > 0.
    pub fn applies(self, alpha: &ExtReal) -> bool {
        self != Suite::Ladder || alpha.is_positive()
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Parse {
                input: s.to_string(),
                reason: "unknown suite".into(),
            })
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub alpha: ExtReal,
    pub n_max: usize,
    pub precision_bits: u32,
    /// Central-difference step in t.
    pub h: ExtReal,
    pub tolerances: Tolerances,
    /// Perturbation added to one input of every suite; a harness self-test.
    pub fault: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct CheckRow {
    pub suite: Suite,
    pub identity: &'static str,
    pub n: usize,
    /// "t" or "z"
    pub point_var: &'static str,
    pub point: ExtReal,
    pub residual: ExtReal,
    pub tolerance: f64,
    pub pass: bool,
}

struct Rows<'a> {
    suite: Suite,
    point_var: &'static str,
    point: &'a ExtReal,
    out: Vec<CheckRow>,
}

impl Rows<'_> {
    fn push(&mut self, identity: &'static str, n: usize, residual: ExtReal, tolerance: f64) {
        let pass = residual.is_finite() && residual.abs() <= tolerance;
        self.out.push(CheckRow {
            suite: self.suite,
            identity,
            n,
            point_var: self.point_var,
            point: self.point.clone(),
            residual,
            tolerance,
            pass,
        });
    }
}

/// Runs one suite at one t.
pub fn verify_at(suite: Suite, cfg: &VerifyConfig, t: &ExtReal) -> Result<Vec<CheckRow>> {
    if cfg.n_max < 1 {
        return Err(Error::Domain("verification needs N >= 1".into()));
    }
    let params = WeightParams::new(cfg.alpha.clone(), t.clone())?;
    let z = t * 0.5;
    let (point_var, point) = match suite {
        Suite::P4 | Suite::Riccati | Suite::Backlund => ("z", &z),
        _ => ("t", t),
    };
    let mut rows = Rows {
        suite,
        point_var,
        point,
        out: Vec::new(),
    };
    match suite {
        Suite::Toda => toda_suite(cfg, &params, &mut rows)?,
        Suite::P4 => p4_suite(cfg, &z, &mut rows)?,
        Suite::Riccati => riccati_suite(cfg, &z, &mut rows)?,
        Suite::Ladder => ladder_suite(cfg, &params, &mut rows)?,
        Suite::Backlund => backlund_suite(cfg, &z, &mut rows)?,
        Suite::Dpi => dpi_suite(cfg, &params, &mut rows)?,
        Suite::Cross => cross_suite(cfg, &params, &mut rows)?,
    }
    Ok(rows.out)
}

fn toda_suite(cfg: &VerifyConfig, params: &WeightParams, rows: &mut Rows) -> Result<()> {
    let (n, prec, h) = (cfg.n_max, cfg.precision_bits, &cfg.h);
    let mut center = hankel_route(params, n, prec)?;
    let plus = hankel_route(&params.with_t(&params.t + h), n, prec)?;
    let minus = hankel_route(&params.with_t(&params.t - h), n, prec)?;
    if let Some(delta) = cfg.fault {
        center.a2[1] += delta;
    }
    let point = toda_residuals_from_tables(&center, &plus, &minus, h);
    for (k, r) in point.r1 {
        rows.push("toda_a2", k, r, cfg.tolerances.toda);
    }
    for (k, r) in point.r2 {
        rows.push("toda_b", k, r, cfg.tolerances.toda);
    }
    for k in 0..=n {
        let mut r = xn_ode_residual(params, k, &params.t, h, prec)?;
        if k == 1 {
            if let Some(delta) = cfg.fault {
                r += delta;
            }
        }
        rows.push("xn_ode", k, r, cfg.tolerances.ode);
    }
    Ok(())
}

fn p4_suite(cfg: &VerifyConfig, z: &ExtReal, rows: &mut Rows) -> Result<()> {
    let (n, prec, h) = (cfg.n_max, cfg.precision_bits, &cfg.h);
    let mut points = q_orbit_points(&cfg.alpha, n, z, h, prec)?;
    if let Some(delta) = cfg.fault {
        points[1].q2 += delta;
    }
    for (k, pt) in points.iter().enumerate() {
        rows.push("p4_laguerre", k, p4_residual(pt)?, cfg.tolerances.p4);
    }
    for k in 1..=n {
        let pt = freud_p4_point(&cfg.alpha, k, z, h, prec)?;
        rows.push("p4_freud", k, p4_residual(&pt)?, cfg.tolerances.p4);
    }
    Ok(())
}

fn riccati_suite(cfg: &VerifyConfig, z: &ExtReal, rows: &mut Rows) -> Result<()> {
    let mut pt = q_from_orbit(&cfg.alpha, 0, z, &cfg.h, cfg.precision_bits)?;
    if let Some(delta) = cfg.fault {
        pt.q1 += delta;
    }
    let r = riccati_residual(&pt.q, &pt.q1, z, &cfg.alpha);
    rows.push("riccati", 0, r, cfg.tolerances.riccati);
    Ok(())
}

fn ladder_suite(cfg: &VerifyConfig, params: &WeightParams, rows: &mut Rows) -> Result<()> {
    let (n, prec) = (cfg.n_max, cfg.precision_bits);
    let mut table = hankel_route(params, n + 1, prec)?;
    if let Some(delta) = cfg.fault {
        table.a2[1] += delta;
    }
    for row in verify_conditions(&table, n)? {
        for (name, r) in row.named() {
            rows.push(name, row.n, r.clone(), cfg.tolerances.cond);
        }
    }
    let orbit = run_discrete(params, n, prec)?;
    for (k, state) in orbit.states.iter().enumerate() {
        let from_orbit = -(ExtReal::sqrt2(state.x.prec()) / &state.x);
        let big_r = &table.b[k] * 2.0 - &params.t;
        rows.push("r_n_orbit", k, ExtReal::from_f64(rel_diff(&big_r, &from_orbit), 64), cfg.tolerances.route);
    }
    for k in 0..=n {
        let w = w_equals_rn_check(params, k, prec)?;
        rows.push("w_equals_r_n", k, &w.lhs - &w.rhs, cfg.tolerances.quad);
    }
    Ok(())
}

fn backlund_suite(cfg: &VerifyConfig, z: &ExtReal, rows: &mut Rows) -> Result<()> {
    let (n, prec, h) = (cfg.n_max, cfg.precision_bits, &cfg.h);
    let alpha = &cfg.alpha;
    let mut points = q_orbit_points(alpha, n + 1, z, h, prec)?;
    if let Some(delta) = cfg.fault {
        points[1].q1 += delta;
    }
    for k in 0..=n {
        let up = ladder_up(&points[k].q, &points[k].q1, z, k, alpha)?;
        rows.push("ladder_up", k, up - &points[k + 1].q, cfg.tolerances.ladder);
    }
    for k in 1..=n {
        let down = ladder_down(&points[k].q, &points[k].q1, z, k, alpha)?;
        rows.push("ladder_down", k, down - &points[k - 1].q, cfg.tolerances.ladder);
    }
    for (relation, first, f2_name, q_name) in [
        (CrossRelation::Rel1, 1, "freud_link1_f2", "freud_link1_q"),
        (CrossRelation::Rel2, 0, "freud_link2_f2", "freud_link2_q"),
    ] {
        for k in first..=n {
            let link = freud_backlund_link(alpha, k, z, relation, h, prec)?;
            rows.push(f2_name, k, &link.f2_direct - &link.f2_backlund, cfg.tolerances.fd);
            rows.push(q_name, k, &link.q_direct - &link.q_backlund, cfg.tolerances.fd);
        }
    }
    Ok(())
}

fn dpi_suite(cfg: &VerifyConfig, params: &WeightParams, rows: &mut Rows) -> Result<()> {
    let (n, prec, h) = (cfg.n_max, cfg.precision_bits, &cfg.h);
    let mut center = dpi_run(params, n + 1, prec)?;
    let plus = dpi_run(&params.with_t(&params.t + h), n + 1, prec)?;
    let minus = dpi_run(&params.with_t(&params.t - h), n + 1, prec)?;
    let oracle = freud_hankel(params, n + 1, prec)?;
    if let Some(delta) = cfg.fault {
        center.a2[1] += delta;
    }
    for k in 0..=n {
        rows.push("dpi_string", k, dpi_residual(&center, k)?, cfg.tolerances.route);
    }
    for k in 1..=n {
        rows.push("dpi_flow", k, f2_residual_from_tables(&center, &plus, &minus, k, h)?, cfg.tolerances.toda);
    }
    for k in 1..=n + 1 {
        let diff = rel_diff(&center.a2[k], &oracle.a2[k]);
        rows.push("dpi_hankel", k, ExtReal::from_f64(diff, 64), cfg.tolerances.route);
    }
    Ok(())
}

fn cross_suite(cfg: &VerifyConfig, params: &WeightParams, rows: &mut Rows) -> Result<()> {
    let (n, prec) = (cfg.n_max, cfg.precision_bits);
    let mut lag = hankel_route(params, n, prec)?;
    let lag1 = hankel_route(&params.shifted(), n, prec)?;
    let freud = dpi_run(params, 2 * n + 2, prec)?;
    if let Some(delta) = cfg.fault {
        lag.a2[1] += delta;
    }
    for row in cross_residuals_from_tables(&lag, &lag1, &freud, n)? {
        for (name, r) in row.named() {
            rows.push(name, row.n, r.clone(), cfg.tolerances.route);
        }
    }
    Ok(())
}
