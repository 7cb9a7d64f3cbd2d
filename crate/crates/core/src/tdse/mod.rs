//! Crank–Nicolson solution of the one-particle Schrödinger equation on the
//! grid, for hard-wall and finite-step traps, with the observables used to
//! check the analytic short-time results.

mod eigen;
mod observables;
mod potential;
mod propagator;
mod run;

pub use eigen::{bound_states, ground_state, Eigenstate};
pub use observables::{
    current_at, decompose, momentum_spectrum_numeric, nonescape_numeric, survival_numeric, SpectralDecomposition,
    MAX_TAIL_FRACTION,
};
pub use potential::{Hamiltonian, Potential};
pub use propagator::{evolve, PropagatorCN};
pub use run::{evolve_sampled, EvolutionStats, StepSchedule};
