use rayon::prelude::*;
use semilag_core::discrete::run_discrete;
use semilag_core::freud::dpi_run;
use semilag_core::ladder::ladder_from_coeffs;
use semilag_core::moments::hankel_route;
use semilag_core::painleve::q_orbit_points;
use semilag_core::verify::{verify_at, VerifyConfig};
use semilag_core::{CoeffTable, ExtReal, Result, Suite, Tolerances, WeightParams};

use crate::args::{Quantity, RouteArg, RunConfig, SuiteArg};
use crate::table::{self, Table};

/// Evaluates `f` at every grid point in parallel, keeping grid order.
fn over_grid<F>(cfg: &RunConfig, columns: Vec<&'static str>, f: F) -> Result<Table>
where
    F: Fn(&ExtReal) -> Result<Table> + Sync,
{
    let parts: Vec<Result<Table>> = cfg.t_grid.par_iter().map(&f).collect();
    let mut out = Table::new(columns);
    for part in parts {
        out.extend(part?);
    }
    Ok(out)
}

fn params(cfg: &RunConfig, t: &ExtReal) -> Result<WeightParams> {
    WeightParams::new(cfg.alpha.clone(), t.clone())
}

fn route_table(cfg: &RunConfig, t: &ExtReal, route: RouteArg) -> Result<CoeffTable> {
    let p = params(cfg, t)?;
    match route {
        RouteArg::Discrete => Ok(run_discrete(&p, cfg.n_max, cfg.precision_bits)?.coeffs),
        _ => hankel_route(&p, cfg.n_max, cfg.precision_bits),
    }
}

pub fn coeffs(cfg: &RunConfig, route: RouteArg) -> Result<Table> {
    let prec = cfg.precision_bits;
    let v = |x: &ExtReal| table::value(x, prec);
    match route {
        RouteArg::Hankel | RouteArg::Discrete => over_grid(cfg, vec!["t", "n", "route", "a2", "b"], |t| {
            let c = route_table(cfg, t, route)?;
            let mut out = Table::default();
            for n in 0..=cfg.n_max {
                out.rows.push(vec![v(t), n.to_string(), c.route.to_string(), v(&c.a2[n]), v(&c.b[n])]);
            }
            Ok(out)
        }),
        RouteArg::Both => over_grid(
            cfg,
            vec!["t", "n", "a2_hankel", "a2_discrete", "a2_abs_diff", "b_hankel", "b_discrete", "b_abs_diff"],
            |t| {
                let h = route_table(cfg, t, RouteArg::Hankel)?;
                let d = route_table(cfg, t, RouteArg::Discrete)?;
                let mut out = Table::default();
                for n in 0..=cfg.n_max {
                    let da = (&h.a2[n] - &d.a2[n]).abs();
                    let db = (&h.b[n] - &d.b[n]).abs();
                    out.rows.push(vec![
                        v(t),
                        n.to_string(),
                        v(&h.a2[n]),
                        v(&d.a2[n]),
                        table::residual(&da),
                        v(&h.b[n]),
                        v(&d.b[n]),
                        table::residual(&db),
                    ]);
                }
                Ok(out)
            },
        ),
    }
}

/// Suites run by `verify`, plus the ones skipped because their hypotheses
/// fail for this α.
pub fn suites(arg: SuiteArg, alpha: &ExtReal) -> (Vec<Suite>, Vec<Suite>) {
    let requested = match arg {
        SuiteArg::All => Suite::ALL.to_vec(),
        SuiteArg::Toda => vec![Suite::Toda],
        SuiteArg::P4 => vec![Suite::P4],
        SuiteArg::Riccati => vec![Suite::Riccati],
        SuiteArg::Ladder => vec![Suite::Ladder],
        SuiteArg::Backlund => vec![Suite::Backlund],
        SuiteArg::Dpi => vec![Suite::Dpi],
        SuiteArg::Cross => vec![Suite::Cross],
    };
    if arg != SuiteArg::All {
        // an explicitly requested suite reports its own hypothesis error
        return (requested, Vec::new());
    }
    requested.into_iter().partition(|s| s.applies(alpha))
}

pub struct VerifyOutcome {
    pub table: Table,
    pub checks: usize,
    pub failures: usize,
}

pub fn verify(cfg: &RunConfig, suites: &[Suite], tolerances: Tolerances, fault: Option<f64>) -> Result<VerifyOutcome> {
    let vcfg = VerifyConfig {
        alpha: cfg.alpha.clone(),
        n_max: cfg.n_max,
        precision_bits: cfg.precision_bits,
        h: cfg.h.clone(),
        tolerances,
        fault,
    };
    let jobs: Vec<(&ExtReal, Suite)> = cfg
        .t_grid
        .iter()
        .flat_map(|t| suites.iter().map(move |&s| (t, s)))
        .collect();
    let results: Vec<_> = jobs.par_iter().map(|&(t, s)| verify_at(s, &vcfg, t)).collect();

    let prec = cfg.precision_bits;
    let mut out = Table::new(vec!["suite", "identity", "n", "point_var", "point", "residual", "tolerance", "pass"]);
    let (mut checks, mut failures) = (0, 0);
    for rows in results {
        for row in rows? {
            checks += 1;
            failures += usize::from(!row.pass);
            out.push(vec![
                row.suite.to_string(),
                row.identity.to_string(),
                row.n.to_string(),
                row.point_var.to_string(),
                table::value(&row.point, prec),
                table::residual(&row.residual),
                table::tolerance(row.tolerance),
                row.pass.to_string(),
            ]);
        }
    }
    Ok(VerifyOutcome {
        table: out,
        checks,
        failures,
    })
}

pub fn trace(cfg: &RunConfig, quantity: Quantity) -> Result<Table> {
    let prec = cfg.precision_bits;
    let v = |x: &ExtReal| table::value(x, prec);
    match quantity {
        Quantity::Coeffs => over_grid(cfg, vec!["t", "n", "a2", "b", "big_r", "r"], |t| {
            let c = hankel_route(&params(cfg, t)?, cfg.n_max.max(1), prec)?;
            let mut out = Table::default();
            for n in 0..=cfg.n_max {
                let mut row = vec![v(t), n.to_string(), v(&c.a2[n]), v(&c.b[n])];
                if c.params.alpha.is_positive() {
                    let l = ladder_from_coeffs(&c, n)?;
                    row.extend([v(&l.big_r), v(&l.r)]);
                } else {
                    // R_n, r_n only carry meaning for α > 0
                    row.extend([String::new(), String::new()]);
                }
                out.rows.push(row);
            }
            Ok(out)
        }),
        Quantity::Q => over_grid(cfg, vec!["z", "n", "q", "q1"], |t| {
            let z = t * 0.5;
            let points = q_orbit_points(&cfg.alpha, cfg.n_max, &z, &cfg.h, prec)?;
            let mut out = Table::default();
            for (n, pt) in points.iter().enumerate() {
                out.rows.push(vec![v(&z), n.to_string(), v(&pt.q), v(&pt.q1)]);
            }
            Ok(out)
        }),
        Quantity::Freud => over_grid(cfg, vec!["t", "n", "big_a2"], |t| {
            let f = dpi_run(&params(cfg, t)?, cfg.n_max.max(1), prec)?;
            let mut out = Table::default();
            for n in 0..=cfg.n_max {
                out.rows.push(vec![v(t), n.to_string(), v(&f.a2[n])]);
            }
            Ok(out)
        }),
    }
}
