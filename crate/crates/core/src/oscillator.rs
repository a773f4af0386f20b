//! Oscillator eigenfunctions underlying both Landau-level problems.
//!
//! `psi_n(x)` is the n-th normalized harmonic-oscillator eigenfunction in the
//! magnetic length scale, centered at `-2k/omega`:
//!
//! ```text
//! psi_n(x) = (omega/2pi)^(1/4) (2^n n!)^(-1/2) H_n(xi) exp(-xi^2/2),
//! xi = sqrt(omega/2) (x + 2k/omega).
//! ```
//!
//! Evaluation runs on the normalized three-term recurrence
//! `phi_{n+1} = sqrt(2/(n+1)) xi phi_n - sqrt(n/(n+1)) phi_{n-1}`;
//! raw `H_n` with factorial normalization overflows for n ≳ 150 while the
//! normalized functions stay O(1).

use crate::error::{Error, Result};
use crate::params::PhysicalParams;

/// Dimensionless oscillator coordinate `xi = sqrt(omega/2)(x + 2k/omega)`.
pub fn xi(x: f64, params: &PhysicalParams) -> f64 {
    (params.omega() / 2.0).sqrt() * (x - params.center())
}

fn check_x(x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::InvalidParameter(format!("non-finite x = {x}")));
    }
    Ok(())
}

/// `psi_n(x)`.
pub fn psi(n: usize, x: f64, params: &PhysicalParams) -> Result<f64> {
    check_x(x)?;
    Ok(psi_row(n, x, params)[n])
}

/// `d psi_n / dx`, from the ladder identity
/// `psi_n' = sqrt(n omega) psi_{n-1} - (omega x / 2 + k) psi_n`.
pub fn psi_derivative(n: usize, x: f64, params: &PhysicalParams) -> Result<f64> {
    check_x(x)?;
    let row = psi_row(n, x, params);
    let below = if n == 0 { 0.0 } else { row[n - 1] };
    Ok((n as f64 * params.omega()).sqrt() * below
        - (params.omega() * x / 2.0 + params.wavenumber()) * row[n])
}

/// All of `psi_0(x) .. psi_{n_max}(x)` in one recurrence sweep.
pub fn psi_row(n_max: usize, x: f64, params: &PhysicalParams) -> Vec<f64> {
    let xi = xi(x, params);
    let mut row = vec![0.0; n_max + 1];
    row[0] = (params.omega() / (2.0 * std::f64::consts::PI)).powf(0.25) * (-xi * xi / 2.0).exp();
    if n_max >= 1 {
        row[1] = std::f64::consts::SQRT_2 * xi * row[0];
    }
    for n in 1..n_max {
        row[n + 1] = (2.0 / (n as f64 + 1.0)).sqrt() * xi * row[n]
            - (n as f64 / (n as f64 + 1.0)).sqrt() * row[n - 1];
    }
    row
}

/// Derivative row matching [`psi_row`].
pub fn psi_derivative_row(n_max: usize, x: f64, params: &PhysicalParams) -> Vec<f64> {
    let row = psi_row(n_max, x, params);
    derivative_from_row(&row, x, params)
}

pub(crate) fn derivative_from_row(row: &[f64], x: f64, params: &PhysicalParams) -> Vec<f64> {
    let pref = params.omega() * x / 2.0 + params.wavenumber();
    let sw = params.omega().sqrt();
    (0..row.len())
        .map(|n| {
            let below = if n == 0 { 0.0 } else { row[n - 1] };
            sw * (n as f64).sqrt() * below - pref * row[n]
        })
        .collect()
}
