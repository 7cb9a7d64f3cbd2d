//! Release of atoms from a one-dimensional box trap: short-time analytics,
//! a Crank-Nicolson solver, many-body determinants and repeated-measurement
//! protocols. Natural units ħ = M = a = 1 unless a `TrapConfig` says otherwise.

// NaN must fail parameter checks, so `!(x > 0.0)` is intended.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod erf;
pub mod error;
pub mod experiments;
pub mod fit;
pub mod grid;
pub mod manybody;
pub mod quadrature;
pub mod series;
pub mod tdse;
pub mod trap;
pub mod units;
pub mod zeno;

pub use error::{Error, Result};
pub use grid::{make_grid, normalize, Grid1D, WaveFunction};
pub use series::{MomentumSpectrum, SeriesKind, TimeSeries};
pub use trap::{Barrier, TrapConfig};
pub use units::{t0_physical, PhysicalSpecies, TimeScale};
