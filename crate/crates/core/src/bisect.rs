//! Bracketing root finder for monotone scalar functions.

use crate::error::{PadError, Result};

/// Final bracket of a bisection run. `f_lo` and `f_hi` have opposite signs
/// (or one of them is zero).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl Bracket {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

const MAX_ITERATIONS: usize = 200;

/// Halves `[lo, hi]` until it is narrower than `tol`.
///
/// An endpoint where `f` vanishes exactly collapses the bracket onto it.
pub fn bisect<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<Bracket>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut lo, mut hi) = (lo, hi);
    let mut f_lo = f(lo)?;
    let mut f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(Bracket {
            lo,
            hi: lo,
            f_lo,
            f_hi: f_lo,
        });
    }
    if f_hi == 0.0 {
        return Ok(Bracket {
            lo: hi,
            hi,
            f_lo: f_hi,
            f_hi,
        });
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(PadError::NoBracket { lo, hi });
    }

    for _ in 0..MAX_ITERATIONS {
        if hi - lo < tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(Bracket {
                lo: mid,
                hi: mid,
                f_lo: f_mid,
                f_hi: f_mid,
            });
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    Ok(Bracket { lo, hi, f_lo, f_hi })
}
