//! Two-component spinor states over the oscillator basis.
//!
//! A state is a pair of coefficient vectors (upper/lower component) over the
//! oscillator index m, together with the transverse wavenumber carried by the
//! implicit plane-wave prefactor along y. That prefactor is never sampled:
//! d/dy acts as multiplication by ik throughout.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::oscillator;
use crate::params::{Branch, PhysicalParams, System};
use crate::spectrum;

/// Label (n, branch) of an energy eigenstate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EigenstateLabel {
    pub n: usize,
    pub branch: Branch,
}

/// Spinor wavefunction as oscillator coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorWavefunction {
    upper: Vec<C64>,
    lower: Vec<C64>,
    params: PhysicalParams,
}

impl SpinorWavefunction {
    pub fn zero(len: usize, params: PhysicalParams) -> Self {
        Self {
            upper: vec![C64::new(0.0, 0.0); len],
            lower: vec![C64::new(0.0, 0.0); len],
            params,
        }
    }

    /// Both components must have the same length and finite entries.
    pub fn from_components(
        upper: Vec<C64>,
        lower: Vec<C64>,
        params: PhysicalParams,
    ) -> Result<Self> {
        if upper.len() != lower.len() {
            return Err(Error::LengthMismatch {
                expected: upper.len(),
                got: lower.len(),
            });
        }
        if upper
            .iter()
            .chain(lower.iter())
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::InvalidParameter(
                "spinor coefficients must be finite".into(),
            ));
        }
        Ok(Self { upper, lower, params })
    }

    pub fn len(&self) -> usize {
        self.upper.len()
    }

    pub fn is_empty(&self) -> bool {
        self.upper.is_empty()
    }

    pub fn upper(&self) -> &[C64] {
        &self.upper
    }

    pub fn lower(&self) -> &[C64] {
        &self.lower
    }

    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }

    pub fn wavenumber(&self) -> f64 {
        self.params.wavenumber()
    }

    pub(crate) fn upper_mut(&mut self) -> &mut [C64] {
        &mut self.upper
    }

    pub(crate) fn lower_mut(&mut self) -> &mut [C64] {
        &mut self.lower
    }

    /// Squared norm, `sum |u_m|^2 + |l_m|^2`.
    pub fn norm_sq(&self) -> f64 {
        self.upper
            .iter()
            .chain(self.lower.iter())
            .map(|c| c.norm_sqr())
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Inner product `<self, other>` (conjugate-linear in `self`); shorter
    /// coefficient vectors are treated as zero-padded.
    pub fn inner(&self, other: &Self) -> C64 {
        let dot = |a: &[C64], b: &[C64]| -> C64 {
            a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
        };
        dot(&self.upper, &other.upper) + dot(&self.lower, &other.lower)
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            upper: self.upper.iter().map(|c| c * factor).collect(),
            lower: self.lower.iter().map(|c| c * factor).collect(),
            params: self.params,
        }
    }

    /// `self + factor * other`, padded to the longer truncation.
    pub fn add_scaled(&self, other: &Self, factor: C64) -> Self {
        let len = self.len().max(other.len());
        let mut out = Self::zero(len, self.params);
        for m in 0..len {
            let a_u = self.upper.get(m).copied().unwrap_or_default();
            let a_l = self.lower.get(m).copied().unwrap_or_default();
            let b_u = other.upper.get(m).copied().unwrap_or_default();
            let b_l = other.lower.get(m).copied().unwrap_or_default();
            out.upper[m] = a_u + factor * b_u;
            out.lower[m] = a_l + factor * b_l;
        }
        out
    }

    /// Evaluate both component functions and their x-derivatives at `x`.
    pub fn components_at(&self, x: f64) -> Result<ComponentValues> {
        let n_max = self.len().saturating_sub(1);
        let row = oscillator::psi_row(n_max, x, &self.params);
        if !x.is_finite() {
            return Err(Error::InvalidParameter(format!("non-finite x = {x}")));
        }
        Ok(self.components_from_row(&row, x))
    }

    pub(crate) fn components_from_row(&self, row: &[f64], x: f64) -> ComponentValues {
        let p = &self.params;
        let pref = p.omega() * x / 2.0 + p.wavenumber();
        let sw = p.omega().sqrt();
        let mut u = C64::default();
        let mut l = C64::default();
        let mut du_ladder = C64::default();
        let mut dl_ladder = C64::default();
        for (m, &row_m) in row.iter().enumerate().take(self.len()) {
            u += self.upper[m] * row_m;
            l += self.lower[m] * row_m;
            if m + 1 < self.len() {
                let s = ((m + 1) as f64).sqrt() * row_m;
                du_ladder += self.upper[m + 1] * s;
                dl_ladder += self.lower[m + 1] * s;
            }
        }
        ComponentValues {
            upper: u,
            lower: l,
            upper_dx: sw * du_ladder - pref * u,
            lower_dx: sw * dl_ladder - pref * l,
        }
    }

    /// Apply the effective Hamiltonian spectrally: the lowering square sends
    /// the lower component into the upper equation and the raising square the
    /// upper component into the lower one (linear ladders for the monolayer).
    /// The output allocates the extra slots the raising action needs.
    pub fn apply_hamiltonian(&self, system: System) -> Self {
        let p = &self.params;
        match system {
            System::Bilayer => {
                let scale = p.hbar() * p.omega_c();
                let mut out = Self::zero(self.len() + 2, self.params);
                for m in 0..self.len() {
                    // b^-^2 on lower: m+2 -> m with sqrt((m+1)(m+2)).
                    if m + 2 < self.len() {
                        out.upper[m] = scale
                            * ((m + 1) as f64 * (m + 2) as f64).sqrt()
                            * self.lower[m + 2];
                    }
                    // b^+^2 on upper: m -> m+2 with sqrt((m+1)(m+2)).
                    out.lower[m + 2] =
                        scale * ((m + 1) as f64 * (m + 2) as f64).sqrt() * self.upper[m];
                }
                out
            }
            System::Monolayer => {
                let scale = p.hbar() * p.v_fermi() * p.omega().sqrt();
                let mut out = Self::zero(self.len() + 1, self.params);
                for m in 0..self.len() {
                    if m + 1 < self.len() {
                        out.upper[m] = scale * ((m + 1) as f64).sqrt() * self.lower[m + 1];
                    }
                    out.lower[m + 1] = scale * ((m + 1) as f64).sqrt() * self.upper[m];
                }
                out
            }
        }
    }
}

/// Values of the two component functions and their x-derivatives at one point.
#[derive(Debug, Clone, Copy)]
pub struct ComponentValues {
    pub upper: C64,
    pub lower: C64,
    pub upper_dx: C64,
    pub lower_dx: C64,
}

/// Normalized energy eigenstate as a truncated spinor.
///
/// Bilayer: n = 0, 1 are pure lower-component states; n >= 2 pairs the
/// oscillator states n-2 (upper) and n (lower) with weight 1/sqrt(2).
/// Monolayer: n = 0 is pure lower; n >= 1 pairs n-1 (upper) and n (lower).
/// On the hole branch the upper component flips sign; the zero modes carry no
/// branch distinction.
pub fn build_eigenstate(
    label: EigenstateLabel,
    m_max: usize,
    params: PhysicalParams,
    system: System,
) -> Result<SpinorWavefunction> {
    if m_max < label.n {
        return Err(Error::Truncation {
            requested: label.n,
            available: m_max,
        });
    }
    let mut state = SpinorWavefunction::zero(m_max + 1, params);
    let n = label.n;
    let sign = label.branch.sign();
    let half = std::f64::consts::FRAC_1_SQRT_2;
    match system {
        System::Bilayer => {
            if n < 2 {
                state.lower[n] = C64::new(1.0, 0.0);
            } else {
                state.upper[n - 2] = C64::new(sign * half, 0.0);
                state.lower[n] = C64::new(half, 0.0);
            }
        }
        System::Monolayer => {
            if n == 0 {
                state.lower[0] = C64::new(1.0, 0.0);
            } else {
                state.upper[n - 1] = C64::new(sign * half, 0.0);
                state.lower[n] = C64::new(half, 0.0);
            }
        }
    }
    Ok(state)
}

/// Residual `||H psi - E_n psi||` of a labelled eigenstate.
pub fn eigen_residual(
    label: EigenstateLabel,
    m_max: usize,
    params: PhysicalParams,
    system: System,
) -> Result<f64> {
    let state = build_eigenstate(label, m_max + 2, params, system)?;
    let h_state = state.apply_hamiltonian(system);
    let energy = spectrum::landau_level(system, label.n, label.branch, &params);
    Ok(h_state.add_scaled(&state, C64::new(-energy, 0.0)).norm())
}
