//! Variable-order fractional operators on a 1D interval with truncated horizons.
//!
//! * [`vo_rc_derivative`]: Riesz–Caputo derivative with order α(x) taken at
//!   the evaluation point, integrated in closed form segment by segment.
//! * [`vo_riesz_integral`]: Riesz integral whose kernel order is α(x′), as it
//!   appears in the strong form and natural boundary conditions.
//! * [`riesz_rl_derivative`]: first derivative of the Riesz integral by
//!   central differences; a diagnostic, never used in assembly.

mod caputo;
mod field;
mod riesz;

pub use caputo::{segment_weights, vo_rc_derivative, SegmentWeight};
pub use field::{FieldKind, PiecewiseField};
pub use riesz::{riesz_rl_derivative, vo_riesz_integral, vo_riesz_integral_with, RieszQuadrature};

use crate::error::{Error, Result};

/// Orders at or above this are treated as the local (classical) limit inside
/// fractional branches that cannot take α = 1 directly.
pub const ALPHA_CLAMP: f64 = 1.0 - 1e-12;

/// Interior horizon radius `lf` on a beam of length `length`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Horizon {
    lf: f64,
    length: f64,
}

impl Horizon {
    pub fn new(lf: f64, length: f64) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::Domain(format!(
                "domain length must be positive, got {length}"
            )));
        }
        if !(lf.is_finite() && lf > 0.0 && lf <= length) {
            return Err(Error::Domain(format!(
                "horizon length must satisfy 0 < lf <= L = {length}, got {lf}"
            )));
        }
        Ok(Self { lf, length })
    }

    pub fn lf(&self) -> f64 {
        self.lf
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Left and right length scales at `x`, clipped to the physical domain.
    pub fn truncated_lengths(&self, x: f64) -> Result<(f64, f64)> {
        self.check_point(x)?;
        Ok((x.min(self.lf), (self.length - x).min(self.lf)))
    }

    pub(crate) fn check_point(&self, x: f64) -> Result<()> {
        if !(x >= 0.0 && x <= self.length) {
            return Err(Error::Domain(format!(
                "x = {x} lies outside [0, {}]",
                self.length
            )));
        }
        Ok(())
    }
}

/// `(l_minus, l_plus)` at `x`; see [`Horizon::truncated_lengths`].
pub fn truncated_lengths(x: f64, horizon: &Horizon) -> Result<(f64, f64)> {
    horizon.truncated_lengths(x)
}

pub(crate) fn check_order(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Domain(format!(
            "order must lie in (0, 1], got {alpha}"
        )));
    }
    Ok(())
}
