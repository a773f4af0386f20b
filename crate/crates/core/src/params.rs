//! Physical scales shared by every computation.
//!
//! All quantities live in one consistent natural-unit system. The oscillator
//! parameter is not free: `omega = 2 m* omega_c / hbar` is enforced whenever a
//! parameter set is built, so states, spectra and currents always agree on the
//! underlying length scale `1/sqrt(omega)`.

use crate::error::{Error, Result};

/// Which effective two-band model the state lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum System {
    /// Quadratic two-band model, Landau levels `± hbar omega_c sqrt(n(n-1))`.
    Bilayer,
    /// Linear (Dirac-Weyl) model, Landau levels `± hbar v_F sqrt(n omega)`.
    Monolayer,
}

impl System {
    pub fn label(self) -> &'static str {
        match self {
            System::Bilayer => "bilayer",
            System::Monolayer => "monolayer",
        }
    }
}

/// Electron (+) or hole (-) branch of the spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Electron,
    Hole,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Electron => 1.0,
            Branch::Hole => -1.0,
        }
    }
}

/// Consistent set of physical constants and scales.
///
/// Fields are private so the constructor invariants cannot be broken:
/// `omega == 2 m* omega_c / hbar` exactly, and `hbar`, `m*`, `omega_c`,
/// `omega`, `v_F` are all strictly positive. The transverse wavenumber `k`
/// only shifts the oscillator center `-2k/omega` and may take any finite
/// value. `b_field` is a proxy for the applied field with `omega_c = b_field`
/// at unit proportionality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    hbar: f64,
    m_star: f64,
    omega_c: f64,
    omega: f64,
    k: f64,
    v_fermi: f64,
    b_field: f64,
}

fn require_positive(name: &str, value: f64) -> Result<()> {
    if !value.is_finite() || value <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "{name} must be finite and positive, got {value}"
        )));
    }
    Ok(())
}

fn require_finite(name: &str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "{name} must be finite, got {value}"
        )));
    }
    Ok(())
}

impl PhysicalParams {
    /// Build from `hbar`, effective mass and cyclotron frequency; derives the
    /// oscillator parameter `omega = 2 m* omega_c / hbar`.
    pub fn new(hbar: f64, m_star: f64, omega_c: f64) -> Result<Self> {
        require_positive("hbar", hbar)?;
        require_positive("m_star", m_star)?;
        require_positive("omega_c", omega_c)?;
        Ok(Self {
            hbar,
            m_star,
            omega_c,
            omega: 2.0 * m_star * omega_c / hbar,
            k: 0.0,
            v_fermi: 1.0,
            b_field: omega_c,
        })
    }

    /// Build from the pair `(omega, omega_c)` with `hbar = 1`; the effective
    /// mass is derived as `m* = omega / (2 omega_c)`.
    pub fn from_frequencies(omega: f64, omega_c: f64) -> Result<Self> {
        require_positive("omega", omega)?;
        require_positive("omega_c", omega_c)?;
        let mut p = Self::new(1.0, omega / (2.0 * omega_c), omega_c)?;
        // Rebuild omega from the derived mass so the invariant holds exactly.
        p.omega = 2.0 * p.m_star * p.omega_c / p.hbar;
        Ok(p)
    }

    /// Replace the transverse wavenumber `k`.
    pub fn with_wavenumber(mut self, k: f64) -> Result<Self> {
        require_finite("k", k)?;
        self.k = k;
        Ok(self)
    }

    /// Replace the Fermi velocity used by the monolayer spectrum.
    pub fn with_fermi_velocity(mut self, v_fermi: f64) -> Result<Self> {
        require_positive("v_fermi", v_fermi)?;
        self.v_fermi = v_fermi;
        Ok(self)
    }

    /// Set the field proxy `B`; `omega_c` tracks it at unit proportionality
    /// and `omega` is re-derived with the effective mass held fixed.
    pub fn with_b_field(mut self, b: f64) -> Result<Self> {
        require_positive("b_field", b)?;
        self.b_field = b;
        self.omega_c = b;
        self.omega = 2.0 * self.m_star * self.omega_c / self.hbar;
        Ok(self)
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn m_star(&self) -> f64 {
        self.m_star
    }

    /// Cyclotron frequency of the effective-mass electrons.
    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    /// Oscillator parameter (dimension 1/length^2).
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Transverse wavenumber; the oscillator is centered at `-2k/omega`.
    pub fn wavenumber(&self) -> f64 {
        self.k
    }

    pub fn v_fermi(&self) -> f64 {
        self.v_fermi
    }

    pub fn b_field(&self) -> f64 {
        self.b_field
    }

    /// Center of the oscillator eigenfunctions on the x axis.
    pub fn center(&self) -> f64 {
        -2.0 * self.k / self.omega
    }

    /// Frequency scale of the monolayer spectrum, `v_F sqrt(omega)`.
    pub fn monolayer_scale(&self) -> f64 {
        self.v_fermi * self.omega.sqrt()
    }
}

impl Default for PhysicalParams {
    /// The reference parameter set of the standard figures:
    /// `omega = 1`, `omega_c = 1`, `k = 1`, `v_F = 1` (so `hbar = 1`,
    /// `m* = 1/2`).
    fn default() -> Self {
        Self::from_frequencies(1.0, 1.0)
            .and_then(|p| p.with_wavenumber(1.0))
            .expect("default parameters are valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_consistency_enforced() {
        let p = PhysicalParams::new(1.0, 1.0, 1.0).unwrap();
        assert_eq!(p.omega(), 2.0 * p.m_star() * p.omega_c() / p.hbar());

        let p = PhysicalParams::from_frequencies(1.0, 1.0).unwrap();
        assert_eq!(p.omega(), 1.0);
        assert_eq!(p.m_star(), 0.5);
        assert_eq!(p.omega(), 2.0 * p.m_star() * p.omega_c() / p.hbar());
    }

    #[test]
    fn default_matches_plotting_scales() {
        let p = PhysicalParams::default();
        assert_eq!(p.omega(), 1.0);
        assert_eq!(p.omega_c(), 1.0);
        assert_eq!(p.wavenumber(), 1.0);
        assert_eq!(p.v_fermi(), 1.0);
        assert_eq!(p.center(), -2.0);
        assert_eq!(p.monolayer_scale(), 1.0);
    }

    #[test]
    fn b_field_scales_both_frequencies() {
        let p = PhysicalParams::default().with_b_field(0.125).unwrap();
        assert_eq!(p.omega_c(), 0.125);
        assert_eq!(p.omega(), 2.0 * p.m_star() * 0.125);
        assert_eq!(p.b_field(), 0.125);
    }

    #[test]
    fn rejects_nonpositive_scales() {
        assert!(PhysicalParams::new(0.0, 1.0, 1.0).is_err());
        assert!(PhysicalParams::new(1.0, -1.0, 1.0).is_err());
        assert!(PhysicalParams::new(1.0, 1.0, f64::NAN).is_err());
        assert!(PhysicalParams::default().with_wavenumber(f64::INFINITY).is_err());
        assert!(PhysicalParams::default().with_fermi_velocity(0.0).is_err());
    }
}
