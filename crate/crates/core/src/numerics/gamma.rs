use super::ExtReal;
use crate::error::{Error, Result};

/// Γ(s) for real `s > 0`, correctly rounded at the precision of `s`.
pub fn gamma(s: &ExtReal) -> Result<ExtReal> {
    if !s.is_positive() {
        return Err(Error::Domain(format!("gamma requires s > 0, got {}", s.to_f64())));
    }
    Ok(s.gamma_unchecked())
}
