//! Matrix-valued ladder operators with a number-operator weight function f.
//!
//! The annihilation operator acts componentwise: on the lower component as
//! `f(N+1) a^-`, on the upper component with its index shifted by the spinor
//! offset of the system (2 for the bilayer pairing, 1 for the monolayer), so
//! that every paired eigenstate maps onto the one below it with a single
//! coefficient. The creation operator is the Hermitian conjugate.
//!
//! On bilayer eigenstates the lowering action reads
//! `A^- Psi_0 = 0`, `A^- Psi_1 = f(1) Psi_0`, `A^- Psi_2 = f(2) Psi_1`,
//! `A^- Psi_n = sqrt(n) f(n) Psi_{n-1}` for n >= 3; raising gives
//! `A^+ Psi_0 = f(1) Psi_1`, `A^+ Psi_n = sqrt(n+1) f(n+1) Psi_{n+1}` for
//! n >= 2, while `A^+ Psi_1` lands outside the eigenbasis on a pure
//! lower-component state with coefficient `sqrt(2) f(2)`.

use std::sync::Arc;

use crate::params::System;
use crate::spinor::SpinorWavefunction;

/// Real weight function of the number operator.
///
/// The three standard choices are built in; `Custom` accepts any map
/// `n -> f(n)` (convergence of derived quantities is then only checked
/// numerically, not guaranteed).
#[derive(Clone)]
pub enum LadderFunction {
    /// f(n) = 1.
    Unit,
    /// f(n) = sqrt(n-1)/sqrt(n); vanishes at n = 1.
    Shift1,
    /// f(n) = (n-2) sqrt(n-1)/sqrt(n); vanishes at n = 1 and n = 2.
    Shift2,
    Custom(Arc<dyn Fn(usize) -> f64 + Send + Sync>),
}

impl std::fmt::Debug for LadderFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

impl PartialEq for LadderFunction {
    fn eq(&self, other: &Self) -> bool {
        matches!(
            (self, other),
            (LadderFunction::Unit, LadderFunction::Unit)
                | (LadderFunction::Shift1, LadderFunction::Shift1)
                | (LadderFunction::Shift2, LadderFunction::Shift2)
        )
    }
}

impl LadderFunction {
    pub fn eval(&self, n: usize) -> f64 {
        match self {
            LadderFunction::Unit => 1.0,
            LadderFunction::Shift1 => {
                if n == 0 {
                    0.0
                } else {
                    ((n as f64 - 1.0) / n as f64).sqrt()
                }
            }
            LadderFunction::Shift2 => {
                if n == 0 {
                    0.0
                } else {
                    (n as f64 - 2.0) * ((n as f64 - 1.0) / n as f64).sqrt()
                }
            }
            LadderFunction::Custom(f) => f(n),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            LadderFunction::Unit => "unit",
            LadderFunction::Shift1 => "shift1",
            LadderFunction::Shift2 => "shift2",
            LadderFunction::Custom(_) => "custom",
        }
    }
}

fn upper_shift(system: System) -> usize {
    match system {
        System::Bilayer => 2,
        System::Monolayer => 1,
    }
}

/// Annihilation-type action `A^-` on a truncated spinor. The weight function
/// is evaluated on indices up to the truncation plus the spinor offset.
pub fn apply_ladder_down(
    state: &SpinorWavefunction,
    f: &LadderFunction,
    system: System,
) -> SpinorWavefunction {
    let s = upper_shift(system);
    let mut out = SpinorWavefunction::zero(state.len(), *state.params());
    for m in 1..state.len() {
        out.upper_mut()[m - 1] =
            ((m + s) as f64).sqrt() * f.eval(m + s) * state.upper()[m];
        out.lower_mut()[m - 1] = (m as f64).sqrt() * f.eval(m) * state.lower()[m];
    }
    out
}

/// Creation-type action `A^+`, the Hermitian conjugate of
/// [`apply_ladder_down`]; the output grows by one slot so the image is exact
/// within truncation.
pub fn apply_ladder_up(
    state: &SpinorWavefunction,
    f: &LadderFunction,
    system: System,
) -> SpinorWavefunction {
    let s = upper_shift(system);
    let mut out = SpinorWavefunction::zero(state.len() + 1, *state.params());
    for m in 0..state.len() {
        out.upper_mut()[m + 1] =
            ((m + 1 + s) as f64).sqrt() * f.eval(m + 1 + s) * state.upper()[m];
        out.lower_mut()[m + 1] = ((m + 1) as f64).sqrt() * f.eval(m + 1) * state.lower()[m];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{Branch, PhysicalParams};
    use crate::spinor::{build_eigenstate, EigenstateLabel};
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64 as C64;
    use proptest::prelude::*;

    fn eigen(n: usize, m_max: usize, system: System) -> SpinorWavefunction {
        build_eigenstate(
            EigenstateLabel { n, branch: Branch::Electron },
            m_max,
            PhysicalParams::default(),
            system,
        )
        .unwrap()
    }

    fn dist(a: &SpinorWavefunction, b: &SpinorWavefunction) -> f64 {
        a.add_scaled(b, C64::new(-1.0, 0.0)).norm()
    }

    #[test]
    fn lowering_annihilates_ground_state() {
        let out = apply_ladder_down(&eigen(0, 6, System::Bilayer), &LadderFunction::Unit,
            System::Bilayer);
        assert_abs_diff_eq!(out.norm(), 0.0, epsilon = 1e-300);
    }

    #[test]
    fn lowering_steps_down_with_expected_coefficients() {
        // Psi_1 -> f(1) Psi_0, Psi_2 -> f(2) Psi_1, Psi_4 -> 2 Psi_3 at f = 1.
        let f = LadderFunction::Unit;
        let out = apply_ladder_down(&eigen(1, 6, System::Bilayer), &f, System::Bilayer);
        assert_abs_diff_eq!(dist(&out, &eigen(0, 6, System::Bilayer)), 0.0, epsilon = 1e-15);

        let out = apply_ladder_down(&eigen(2, 6, System::Bilayer), &f, System::Bilayer);
        assert_abs_diff_eq!(dist(&out, &eigen(1, 6, System::Bilayer)), 0.0, epsilon = 1e-15);

        let out = apply_ladder_down(&eigen(4, 6, System::Bilayer), &f, System::Bilayer);
        let expect = eigen(3, 6, System::Bilayer).scaled(C64::new(2.0, 0.0));
        assert_abs_diff_eq!(dist(&out, &expect), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn raising_steps_up_and_detunes_first_level() {
        let f = LadderFunction::Unit;
        let out = apply_ladder_up(&eigen(0, 6, System::Bilayer), &f, System::Bilayer);
        assert_abs_diff_eq!(dist(&out, &eigen(1, 7, System::Bilayer)), 0.0, epsilon = 1e-15);

        // Raising the first level gives sqrt(2) f(2) times a pure lower state,
        // not the paired eigenstate.
        let out = apply_ladder_up(&eigen(1, 6, System::Bilayer), &f, System::Bilayer);
        assert!(out.upper().iter().all(|c| c.norm() == 0.0));
        assert_abs_diff_eq!(out.lower()[2].re, std::f64::consts::SQRT_2, epsilon = 1e-15);

        let out = apply_ladder_up(&eigen(3, 6, System::Bilayer), &f, System::Bilayer);
        let expect = eigen(4, 7, System::Bilayer).scaled(C64::new(2.0, 0.0));
        assert_abs_diff_eq!(dist(&out, &expect), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn monolayer_lowering_matches_recurrence() {
        // Psi_1 -> f(1)/sqrt(2) Psi_0; Psi_n -> sqrt(n) f(n) Psi_{n-1} above.
        let f = LadderFunction::Unit;
        let out = apply_ladder_down(&eigen(1, 6, System::Monolayer), &f, System::Monolayer);
        let expect = eigen(0, 6, System::Monolayer)
            .scaled(C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0));
        assert_abs_diff_eq!(dist(&out, &expect), 0.0, epsilon = 1e-15);

        let out = apply_ladder_down(&eigen(3, 6, System::Monolayer), &f, System::Monolayer);
        let expect = eigen(2, 6, System::Monolayer).scaled(C64::new(3.0_f64.sqrt(), 0.0));
        assert_abs_diff_eq!(dist(&out, &expect), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn down_after_up_is_proportional_to_input() {
        let f = LadderFunction::Shift1;
        for n in [0, 2, 3, 7] {
            let state = eigen(n, 12, System::Bilayer);
            let round = apply_ladder_down(
                &apply_ladder_up(&state, &f, System::Bilayer),
                &f,
                System::Bilayer,
            );
            let overlap = state.inner(&round);
            let residual = round.add_scaled(&state, -overlap).norm();
            assert!(residual < 1e-12, "n={n}: residual {residual}");
        }
    }

    #[test]
    fn shift_functions_vanish_where_required() {
        assert_eq!(LadderFunction::Shift1.eval(1), 0.0);
        assert!(LadderFunction::Shift1.eval(2) > 0.0);
        assert_eq!(LadderFunction::Shift2.eval(1), 0.0);
        assert_eq!(LadderFunction::Shift2.eval(2), 0.0);
        assert!(LadderFunction::Shift2.eval(3) > 0.0);
    }

    proptest! {
        /// <A^+ phi, chi> = <phi, A^- chi> for random interior-supported
        /// states (one guard band of zero coefficients at the top).
        #[test]
        fn raising_and_lowering_are_adjoint(
            seed_u in proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 10),
            seed_l in proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 10),
            which_f in 0usize..3,
        ) {
            let p = PhysicalParams::default();
            let f = match which_f {
                0 => LadderFunction::Unit,
                1 => LadderFunction::Shift1,
                _ => LadderFunction::Shift2,
            };
            let embed = |seed: &[(f64, f64)]| {
                let mut v: Vec<C64> = seed.iter().map(|&(re, im)| C64::new(re, im)).collect();
                v.extend([C64::default(); 2]); // guard band
                v
            };
            let phi = SpinorWavefunction::from_components(
                embed(&seed_u), embed(&seed_l), p).unwrap();
            let chi = SpinorWavefunction::from_components(
                embed(&seed_l), embed(&seed_u), p).unwrap();
            for system in [System::Bilayer, System::Monolayer] {
                let lhs = apply_ladder_up(&phi, &f, system).inner(&chi);
                let rhs = phi.inner(&apply_ladder_down(&chi, &f, system));
                prop_assert!((lhs - rhs).norm() < 1e-10,
                    "{system:?}: <A+ phi, chi> = {lhs}, <phi, A- chi> = {rhs}");
            }
        }
    }
}
