//! Special-function helpers for the normalization constants.

use crate::error::{Error, Result};

/// Generalized hypergeometric series 0F2(b1, b2; x) summed with the term
/// recurrence `t_{n+1} = t_n x / ((b1+n)(b2+n)(n+1))` until `t_n / sum < 1e-16`.
pub fn hypergeometric_0f2(b1: f64, b2: f64, x: f64) -> Result<f64> {
    for (name, b) in [("b1", b1), ("b2", b2)] {
        if !b.is_finite() || (b <= 0.0 && b == b.floor()) {
            return Err(Error::InvalidParameter(format!(
                "{name} must not be a non-positive integer, got {b}"
            )));
        }
    }
    if !x.is_finite() || x < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "series argument must be finite and >= 0, got {x}"
        )));
    }
    let mut sum = 0.0;
    let mut term = 1.0;
    const CAP: usize = 1000;
    for n in 0..CAP {
        sum += term;
        term *= x / ((b1 + n as f64) * (b2 + n as f64) * (n as f64 + 1.0));
        if term < 1e-16 * sum {
            return Ok(sum + term);
        }
    }
    Err(Error::NonConvergence { cap: CAP, tol: 1e-16 })
}

/// Generalized factorial `[q(s)]! = q(1) q(2) ... q(s)`, empty product 1.
pub fn generalized_factorial<F: Fn(usize) -> f64>(q: F, s: usize) -> f64 {
    (1..=s).map(q).product()
}
