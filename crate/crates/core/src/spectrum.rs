//! Landau levels of the two effective models.

use crate::params::{Branch, PhysicalParams, System};

/// Bilayer Landau level `± hbar omega_c sqrt(n(n-1))`; doubly degenerate zero
/// at n = 0, 1.
pub fn bilayer_energy(n: usize, branch: Branch, params: &PhysicalParams) -> f64 {
    let n = n as f64;
    // n (n-1) is -0.0 at n = 0; clamp so the zero level prints as +0.
    branch.sign() * params.hbar() * params.omega_c() * (n * (n - 1.0)).max(0.0).sqrt()
}

/// Monolayer Landau level `± hbar v_F sqrt(n omega)`.
pub fn monolayer_energy(n: usize, branch: Branch, params: &PhysicalParams) -> f64 {
    branch.sign() * params.hbar() * params.v_fermi() * (n as f64 * params.omega()).sqrt()
}

/// Level of either system.
pub fn landau_level(system: System, n: usize, branch: Branch, params: &PhysicalParams) -> f64 {
    match system {
        System::Bilayer => bilayer_energy(n, branch, params),
        System::Monolayer => monolayer_energy(n, branch, params),
    }
}

/// Distinct positive-branch levels in increasing order, tagged with the lowest
/// state index that attains them. The bilayer zero level appears once even
/// though both n = 0 and n = 1 sit on it.
pub fn distinct_positive_levels(
    system: System,
    params: PhysicalParams,
) -> impl Iterator<Item = (usize, f64)> {
    let start_skip = match system {
        System::Bilayer => 1, // skip n = 1, degenerate with n = 0
        System::Monolayer => 0,
    };
    (0..).filter_map(move |n| {
        if n == 1 && start_skip == 1 {
            None
        } else {
            Some((n, landau_level(system, n, Branch::Electron, &params)))
        }
    })
}
