//! Shared fixtures for the criterion benches.

use zeno_core::tdse::{ground_state, Potential};
use zeno_core::{make_grid, Grid1D, TrapConfig, WaveFunction};

/// Reference trap on a grid with `n_points` nodes.
pub fn reference_grid(n_points: usize) -> (TrapConfig, Grid1D) {
    let config = TrapConfig::reference();
    let grid = make_grid(&config, n_points).expect("valid grid");
    (config, grid)
}

/// Ground state of the closed trap and the potential it is released into.
pub fn released_ground_state(n_points: usize) -> (WaveFunction, Potential) {
    let (config, grid) = reference_grid(n_points);
    let trap = Potential::trap(grid, &config).expect("trap potential");
    let psi = ground_state(&trap, &config, 1).expect("ground state");
    (psi, Potential::open(grid, &config).expect("open potential"))
}
