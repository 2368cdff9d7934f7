//! Recurrence coefficients of semi-classical Laguerre and Freud orthogonal
//! polynomials, computed at extended precision by independent routes, with
//! residual checks for the Toda, Painlevé IV, ladder-operator, Bäcklund and
//! Freud identities that connect them.

pub mod discrete;
pub mod error;
pub mod freud;
pub mod ladder;
pub mod moments;
pub mod numerics;
pub mod painleve;
pub mod toda;
pub mod verify;

pub use discrete::{DiscreteRun, DiscreteState};
pub use error::{Error, Result};
pub use freud::FreudTable;
pub use ladder::LadderCoeffs;
pub use moments::{CoeffTable, MomentTable, Route, WeightParams};
pub use numerics::{ExtReal, DEFAULT_PRECISION};
pub use painleve::{P4Params, P4Point};
pub use verify::{CheckRow, Suite, Tolerances, VerifyConfig};
