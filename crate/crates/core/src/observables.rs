//! Position/momentum moments, uncertainty products and mean energies.
//!
//! Two independent routes exist for the moments of the dimensionless
//! quadratures `q = (a^+ + a^-)/sqrt(2)`, `p = i(a^+ - a^-)/sqrt(2)`:
//!
//! * the spectral path applies the tridiagonal/pentadiagonal operator actions
//!   to both spinor components of an arbitrary expansion;
//! * the closed-form path evaluates the coefficient series for the three
//!   bilayer families verbatim.
//!
//! The spectral path is authoritative; the closed forms serve as regression
//! fixtures and must agree with it to 1e-8 over the sweep grid. The same
//! dual-route scheme covers the mean energy: a family-specific series against
//! the generic occupation-weighted sum over Landau levels.

use num_complex::Complex64 as C64;

use crate::coherent::{CoherentExpansion, Family};
use crate::error::{Error, Result};
use crate::ladder::LadderFunction;
use crate::params::{Branch, PhysicalParams, System};
use crate::special::hypergeometric_0f2;
use crate::spectrum::landau_level;

/// Moments of the dimensionless quadratures in a given state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableReport {
    pub mean_q: f64,
    pub mean_p: f64,
    pub mean_q2: f64,
    pub mean_p2: f64,
    pub sigma_q: f64,
    pub sigma_p: f64,
    /// Uncertainty product `sigma_q sigma_p`; bounded below by 1/2.
    pub product: f64,
}

impl ObservableReport {
    fn from_moments(mean_q: f64, mean_p: f64, mean_q2: f64, mean_p2: f64) -> Self {
        let sigma_q = (mean_q2 - mean_q * mean_q).max(0.0).sqrt();
        let sigma_p = (mean_p2 - mean_p * mean_p).max(0.0).sqrt();
        Self {
            mean_q,
            mean_p,
            mean_q2,
            mean_p2,
            sigma_q,
            sigma_p,
            product: sigma_q * sigma_p,
        }
    }
}

/// Weight the truncation may have dropped before operator expectations are
/// refused. Stored coefficients act exactly thanks to the spinor guard slots;
/// only the discarded tail of the infinite series can corrupt a moment.
const GUARD_BAND_WEIGHT: f64 = 1e-8;

fn quadrature_moments(components: &[&[C64]]) -> (f64, f64, f64, f64) {
    let mut q = 0.0;
    let mut p = 0.0;
    let mut diag = 0.0;
    let mut cross = 0.0;
    for c in components {
        for m in 0..c.len() {
            diag += (m as f64 + 0.5) * c[m].norm_sqr();
            if m + 1 < c.len() {
                let w = (c[m].conj() * c[m + 1]) * ((m + 1) as f64).sqrt();
                q += std::f64::consts::SQRT_2 * w.re;
                p += std::f64::consts::SQRT_2 * w.im;
            }
            if m + 2 < c.len() {
                cross += (((m + 1) * (m + 2)) as f64).sqrt() * (c[m].conj() * c[m + 2]).re;
            }
        }
    }
    (q, p, diag + cross, diag - cross)
}

/// Moments evaluated by operator action on the spinor realization.
///
/// Fails if the truncation dropped more than `1e-8` of the state's weight;
/// the pentadiagonal actions would then couple to missing coefficients.
pub fn moments_spectral(
    expansion: &CoherentExpansion,
    params: &PhysicalParams,
) -> Result<ObservableReport> {
    if expansion.tail() > GUARD_BAND_WEIGHT {
        return Err(Error::GuardBand { weight: expansion.tail() });
    }
    let spinor = expansion.to_spinor(params);
    let (q, p, q2, p2) = quadrature_moments(&[spinor.upper(), spinor.lower()]);
    Ok(ObservableReport::from_moments(q, p, q2, p2))
}

/// Sum `sum_{n >= n0} weight(n) u_n` with `u_{n0} = first` and
/// `u_{n+1} = u_n ratio(n)`, relative tail cutoff 1e-14.
fn sum_weighted<W, R>(first: f64, n0: usize, weight: W, ratio: R) -> f64
where
    W: Fn(usize) -> f64,
    R: Fn(usize) -> f64,
{
    let mut base = first;
    let mut sum = 0.0;
    let mut n = n0;
    loop {
        sum += weight(n) * base;
        if base.abs() <= 1e-14 * sum.abs().max(f64::MIN_POSITIVE) || n > n0 + 4000 {
            return sum;
        }
        base *= ratio(n);
        n += 1;
    }
}

fn nf(n: usize) -> f64 {
    n as f64
}

/// Published closed-form moments for the three bilayer families with their
/// standard weight functions. Any other combination is unsupported.
pub fn moments_closed_form(
    system: System,
    family: Family,
    f: &LadderFunction,
    alpha: C64,
) -> Result<ObservableReport> {
    if system != System::Bilayer || *f != family.standard_ladder() {
        return Err(Error::UnsupportedClosedForm);
    }
    let r2 = alpha.norm_sqr();
    let (re, im) = (alpha.re, alpha.im);
    let aniso = re * re - im * im;
    let sqrt2 = std::f64::consts::SQRT_2;

    let (mean_q, mean_p, mean_q2, mean_p2) = match family {
        Family::A => {
            let c2 = 1.0 / (2.0 * r2.exp() - r2 - 1.0);
            let s = r2.exp()
                + sum_weighted(r2 * r2 / 12.0_f64.sqrt(), 2, |n| (nf(n) - 1.0).sqrt(), |n| {
                    r2 / ((nf(n) + 1.0) * (nf(n) + 2.0)).sqrt()
                });
            let d = 1.0
                + 3.0 * r2
                + 2.0 * sum_weighted(r2 * r2 / 2.0, 2, |n| 2.0 * nf(n) - 1.0, |n| r2 / (nf(n) + 1.0));
            let x = r2.exp()
                + sum_weighted(r2 * r2 / 24.0_f64.sqrt(), 2, |_| 1.0, |n| {
                    r2 / ((nf(n) - 1.0) * (nf(n) + 3.0)).sqrt()
                });
            (
                sqrt2 * re * c2 * s,
                sqrt2 * im * c2 * s,
                0.5 * c2 * (d + 2.0 * aniso * x),
                0.5 * c2 * (d - 2.0 * aniso * x),
            )
        }
        Family::B => {
            let d2 = 1.0 / (2.0 * r2.exp() - 1.0);
            let u_ratio = |n: usize| r2 / ((nf(n) + 1.0) * (nf(n) + 2.0)).sqrt();
            let s1 = sum_weighted(1.0, 0, |n| (nf(n) + 2.0).sqrt(), u_ratio);
            let s2 = sum_weighted(r2 / sqrt2, 1, |_| 1.0, |n| r2 / (nf(n) * (nf(n) + 2.0)).sqrt());
            let d = 1.0 + 2.0 * sum_weighted(1.0, 0, |n| 2.0 * nf(n) + 1.0, |n| r2 / (nf(n) + 1.0));
            let x1 = sum_weighted(r2 / 6.0_f64.sqrt(), 1, |n| (nf(n) + 1.0).sqrt(), |n| {
                r2 / (nf(n) * (nf(n) + 3.0)).sqrt()
            });
            let x2 = sum_weighted(1.0, 0, |n| (nf(n) + 3.0).sqrt(), u_ratio);
            (
                sqrt2 * re * d2 * (s1 + s2),
                sqrt2 * im * d2 * (s1 + s2),
                0.5 * d2 * (d + 2.0 * aniso * (x1 + x2)),
                0.5 * d2 * (d - 2.0 * aniso * (x1 + x2)),
            )
        }
        Family::C => {
            let f02 = hypergeometric_0f2(1.0, 2.0, r2).expect("valid 0F2 arguments");
            let s1 = sum_weighted(1.0 / sqrt2, 0, |_| 1.0, |n| {
                r2 / ((nf(n) + 2.0) * ((nf(n) + 3.0) * (nf(n) + 1.0).powi(3)).sqrt())
            });
            let s2 = sum_weighted(1.0 / sqrt2, 0, |n| (nf(n) + 3.0).sqrt(), |n| {
                r2 / ((nf(n) + 1.0) * ((nf(n) + 3.0) * (nf(n) + 2.0).powi(3)).sqrt())
            });
            let d = sum_weighted(1.0, 0, |n| 2.0 * nf(n) + 3.0, |n| {
                r2 / ((nf(n) + 1.0).powi(2) * (nf(n) + 2.0))
            });
            let x1 = sum_weighted(1.0 / (2.0 * 6.0_f64.sqrt()), 0, |n| (nf(n) + 2.0).sqrt(), |n| {
                r2 / ((nf(n) + 3.0) * ((nf(n) + 4.0) * (nf(n) + 1.0).powi(3)).sqrt())
            });
            let x2 = sum_weighted(1.0 / (2.0 * sqrt2), 0, |n| (nf(n) + 4.0).sqrt(), |n| {
                r2 / ((nf(n) + 1.0) * ((nf(n) + 2.0) * (nf(n) + 3.0).powi(3)).sqrt())
            });
            (
                re / sqrt2 / f02 * (s1 + s2),
                im / sqrt2 / f02 * (s1 + s2),
                0.5 / f02 * (d + aniso * (x1 + x2)),
                0.5 / f02 * (d - aniso * (x1 + x2)),
            )
        }
    };
    Ok(ObservableReport::from_moments(mean_q, mean_p, mean_q2, mean_p2))
}

/// Mean energy from the expansion: occupation-weighted sum over the
/// positive-branch Landau levels.
pub fn mean_energy(expansion: &CoherentExpansion, params: &PhysicalParams) -> f64 {
    (0..=expansion.truncation_order())
        .map(|n| expansion.weight(n) * landau_level(expansion.system(), n, Branch::Electron, params))
        .sum()
}

/// Mean energy from the per-family closed-form series (standard weight
/// functions). Must agree with [`mean_energy`] to 1e-10 relative.
pub fn mean_energy_series(
    system: System,
    family: Family,
    r: f64,
    params: &PhysicalParams,
) -> Result<f64> {
    if !r.is_finite() || r < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "radius must be finite and >= 0, got {r}"
        )));
    }
    let r2 = r * r;
    let poisson_ratio = |n: usize| r2 / (nf(n) + 1.0);
    let value = match system {
        System::Bilayer => {
            let scale = params.hbar() * params.omega_c();
            match family {
                Family::A => {
                    2.0 * scale / (2.0 * r2.exp() - r2 - 1.0)
                        * sum_weighted(r2 * r2 / 2.0, 2, |n| (nf(n) * (nf(n) - 1.0)).sqrt(), poisson_ratio)
                }
                Family::B => {
                    2.0 * scale / (2.0 * r2.exp() - 1.0)
                        * sum_weighted(r2, 1, |n| (nf(n) * (nf(n) + 1.0)).sqrt(), poisson_ratio)
                }
                Family::C => {
                    let f02 = hypergeometric_0f2(1.0, 2.0, r2).expect("valid 0F2 arguments");
                    scale / f02
                        * sum_weighted(
                            1.0,
                            0,
                            |n| ((nf(n) + 1.0) * (nf(n) + 2.0)).sqrt(),
                            |n| r2 / ((nf(n) + 1.0).powi(2) * (nf(n) + 2.0)),
                        )
                }
            }
        }
        System::Monolayer => {
            let scale = params.hbar() * params.monolayer_scale();
            match family {
                Family::A => {
                    2.0 * scale / (2.0 * r2.exp() - 1.0)
                        * sum_weighted(r2, 1, |n| nf(n).sqrt(), poisson_ratio)
                }
                Family::B => {
                    scale * (-r2).exp()
                        * sum_weighted(1.0, 0, |n| (nf(n) + 1.0).sqrt(), poisson_ratio)
                }
                Family::C => {
                    let f02 = hypergeometric_0f2(1.0, 2.0, r2).expect("valid 0F2 arguments");
                    scale / f02
                        * sum_weighted(
                            1.0,
                            0,
                            |n| (nf(n) + 2.0).sqrt(),
                            |n| r2 / ((nf(n) + 1.0).powi(2) * (nf(n) + 2.0)),
                        )
                }
            }
        }
    };
    Ok(value)
}
