//! Coherent states for electrons in mono- and bilayer graphene in a uniform
//! perpendicular magnetic field.
//!
//! The effective two-band Hamiltonians of both systems share one oscillator
//! basis in the Landau gauge. This crate builds their Landau spectra and
//! spinor eigenstates, constructs nonlinear coherent states as annihilation-
//! operator eigenstates for three families of number-operator weight
//! functions, and evaluates the quantities that characterize them:
//! uncertainty products, probability densities and currents, mean energies,
//! unitary time evolution and quasi-period estimates.
//!
//! Wherever a closed form exists, it is implemented verbatim next
//! to an independent operator path and the two are cross-checked; the
//! [`regress`] module collects those checks behind pinned tolerances.
//!
//! Everything is pure and immutable after construction: values may be shared
//! freely across threads, and parameter sweeps parallelize with no
//! coordination.

pub mod coherent;
pub mod dynamics;
pub mod error;
pub mod ladder;
pub mod numerics;
pub mod observables;
pub mod oscillator;
pub mod params;
pub mod profile;
pub mod regress;
pub mod special;
pub mod spectrum;
pub mod spinor;
pub mod table;

pub use coherent::{annihilation_residual, build_coherent, build_coherent_polar,
    CoherentExpansion, Family};
pub use dynamics::{density_movie, evolve, quasi_period, revival_distance, EvolvedExpansion,
    PeriodEstimate};
pub use error::{Error, Result};
pub use ladder::{apply_ladder_down, apply_ladder_up, LadderFunction};
pub use numerics::GridSpec;
pub use observables::{mean_energy, mean_energy_series, moments_closed_form, moments_spectral,
    ObservableReport};
pub use params::{Branch, PhysicalParams, System};
pub use profile::{field_profile, integrate_profile, FieldProfile, ProfileMode};
pub use spectrum::{bilayer_energy, landau_level, monolayer_energy};
pub use spinor::{build_eigenstate, EigenstateLabel, SpinorWavefunction};
