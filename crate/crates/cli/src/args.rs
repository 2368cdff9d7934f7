use clap::{Args, Parser, Subcommand, ValueEnum};
use semilag_core::numerics::MIN_PRECISION;
use semilag_core::toda::default_step;
use semilag_core::{Error, ExtReal, Result, Tolerances, DEFAULT_PRECISION};

#[derive(Parser, Debug)]
#[command(name = "semilag", version, about = "Recurrence coefficients of semi-classical Laguerre and Freud weights")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Recurrence coefficients a_n², b_n over a t-grid.
    Coeffs {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value_t = RouteArg::Hankel)]
        route: RouteArg,
    },
    /// Residuals of the identities between coefficients, orbits and P_IV.
    Verify {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[command(flatten)]
        tol: TolArgs,
        /// Perturb one input of every suite by DELTA (default 1e-6); every
        /// suite should then report at least one failing row.
        #[arg(long, value_name = "DELTA", num_args = 0..=1, default_missing_value = "1e-6")]
        fault: Option<f64>,
    },
    /// Plot-ready tables of one quantity over (t, n).
    Trace {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum)]
        quantity: Quantity,
    },
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Weight exponent, α > −1.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    /// Single t value; exclusive with the grid flags.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["t_min", "t_max", "t_steps"])]
    pub t: Option<String>,
    #[arg(long, allow_hyphen_values = true, requires_all = ["t_max", "t_steps"])]
    pub t_min: Option<String>,
    #[arg(long, allow_hyphen_values = true, requires_all = ["t_min", "t_steps"])]
    pub t_max: Option<String>,
    #[arg(long, requires_all = ["t_min", "t_max"])]
    pub t_steps: Option<usize>,
    #[arg(long, default_value_t = 8)]
    pub n_max: usize,
    /// Working precision in bits.
    #[arg(long, env = "SEMILAG_PRECISION", default_value_t = DEFAULT_PRECISION)]
    pub precision: u32,
    /// Central-difference step in t; defaults to 2^(−precision/8).
    #[arg(long)]
    pub h: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug, Clone, Default)]
pub struct TolArgs {
    #[arg(long)]
    pub tol_route: Option<f64>,
    #[arg(long)]
    pub tol_toda: Option<f64>,
    #[arg(long)]
    pub tol_ode: Option<f64>,
    #[arg(long)]
    pub tol_p4: Option<f64>,
    #[arg(long)]
    pub tol_riccati: Option<f64>,
    #[arg(long)]
    pub tol_ladder: Option<f64>,
    #[arg(long)]
    pub tol_cond: Option<f64>,
    #[arg(long)]
    pub tol_fd: Option<f64>,
    #[arg(long)]
    pub tol_quad: Option<f64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum RouteArg {
    Hankel,
    Discrete,
    Both,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteArg {
    Toda,
    P4,
    Riccati,
    Ladder,
    Backlund,
    Dpi,
    Cross,
    All,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Coeffs,
    Q,
    Freud,
}

/// Validated run settings shared by every command.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub alpha: ExtReal,
    pub t_grid: Vec<ExtReal>,
    pub n_max: usize,
    pub precision_bits: u32,
    pub h: ExtReal,
}

fn parse_real(name: &str, text: &str, prec: u32) -> Result<ExtReal> {
    ExtReal::parse(text, prec).map_err(|_| Error::Parse {
        input: text.to_string(),
        reason: format!("--{name} is not a real number"),
    })
}

impl RunArgs {
    /// `min_n` is 0 for commands that accept a single-index table.
    pub fn resolve(&self, min_n: usize) -> Result<RunConfig> {
        let prec = self.precision;
        if prec < MIN_PRECISION {
            return Err(Error::Domain(format!("precision must be at least {MIN_PRECISION} bits, got {prec}")));
        }
        if self.n_max < min_n {
            return Err(Error::Domain(format!("--n-max must be at least {min_n}, got {}", self.n_max)));
        }
        let alpha = parse_real("alpha", &self.alpha, prec)?;
        if alpha <= -1.0 {
            return Err(Error::Domain(format!("alpha must exceed -1, got {}", self.alpha)));
        }
        let t_grid = match (&self.t, &self.t_min, &self.t_max, self.t_steps) {
            (Some(t), ..) => vec![parse_real("t", t, prec)?],
            (None, Some(lo), Some(hi), Some(steps)) => {
                if steps < 1 {
                    return Err(Error::Domain("--t-steps must be at least 1".into()));
                }
                let lo = parse_real("t-min", lo, prec)?;
                let hi = parse_real("t-max", hi, prec)?;
                if hi < lo {
                    return Err(Error::Domain("--t-max must not be below --t-min".into()));
                }
                if steps == 1 {
                    vec![lo]
                } else {
                    let step = (&hi - &lo) / (steps - 1) as f64;
                    (0..steps).map(|i| &lo + &step * i as f64).collect()
                }
            }
            _ => return Err(Error::Domain("give either --t or all of --t-min, --t-max, --t-steps".into())),
        };
        let h = match &self.h {
            Some(text) => parse_real("h", text, prec)?,
            None => default_step(prec),
        };
        if !h.is_positive() {
            return Err(Error::Domain("--h must be positive".into()));
        }
        Ok(RunConfig {
            alpha,
            t_grid,
            n_max: self.n_max,
            precision_bits: prec,
            h,
        })
    }
}

impl TolArgs {
    pub fn resolve(&self) -> Tolerances {
        let d = Tolerances::default();
        Tolerances {
            route: self.tol_route.unwrap_or(d.route),
            toda: self.tol_toda.unwrap_or(d.toda),
            ode: self.tol_ode.unwrap_or(d.ode),
            p4: self.tol_p4.unwrap_or(d.p4),
            riccati: self.tol_riccati.unwrap_or(d.riccati),
            ladder: self.tol_ladder.unwrap_or(d.ladder),
            cond: self.tol_cond.unwrap_or(d.cond),
            fd: self.tol_fd.unwrap_or(d.fd),
            quad: self.tol_quad.unwrap_or(d.quad),
        }
    }
}
