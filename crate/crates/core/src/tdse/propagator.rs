use num_complex::Complex64;

use super::potential::{Hamiltonian, Potential};
use crate::error::{Error, Result};
use crate::grid::{Grid1D, WaveFunction};

/// Crank–Nicolson map (1 + i dt H/2)⁻¹(1 − i dt H/2) with a cached
/// tridiagonal factorization.
#[derive(Debug, Clone)]
pub struct PropagatorCN {
    dt: f64,
    grid: Grid1D,
    h: Hamiltonian,
    // Thomas factorization of 1 + i dt H/2
    sub: Vec<Complex64>,
    sup_prime: Vec<Complex64>,
    inv_pivot: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl PropagatorCN {
    pub fn new(potential: &Potential, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::param(format!("time step must be positive, got {dt}")));
        }
        let h = potential.hamiltonian();
        let n = h.diag.len();
        let half = Complex64::new(0.0, 0.5 * dt);
        let mut sub = vec![Complex64::new(0.0, 0.0); n];
        let mut sup_prime = vec![Complex64::new(0.0, 0.0); n];
        let mut inv_pivot = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let (b, lower, upper) = if h.pinned[i] {
                (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
            } else {
                let lower = if i > 0 { half * h.coupling(i - 1) } else { Complex64::new(0.0, 0.0) };
                let upper = if i + 1 < n { half * h.coupling(i) } else { Complex64::new(0.0, 0.0) };
                (Complex64::new(1.0, 0.0) + half * h.diag[i], lower, upper)
            };
            let pivot = if i > 0 { b - lower * sup_prime[i - 1] } else { b };
            inv_pivot[i] = pivot.inv();
            sup_prime[i] = upper * inv_pivot[i];
            sub[i] = lower;
        }
        Ok(Self {
            dt,
            grid: *potential.grid(),
            h,
            sub,
            sup_prime,
            inv_pivot,
            scratch: vec![Complex64::new(0.0, 0.0); n],
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    /// One step in place.
    pub fn step(&mut self, psi: &mut [Complex64]) {
        let n = psi.len();
        let rhs = &mut self.scratch;
        self.h.apply_slice(psi, rhs);
        let minus_half = Complex64::new(0.0, -0.5 * self.dt);
        for i in 0..n {
            rhs[i] = if self.h.pinned[i] { Complex64::new(0.0, 0.0) } else { psi[i] + minus_half * rhs[i] };
        }
        // forward sweep
        psi[0] = rhs[0] * self.inv_pivot[0];
        for i in 1..n {
            psi[i] = (rhs[i] - self.sub[i] * psi[i - 1]) * self.inv_pivot[i];
        }
        // back substitution
        for i in (0..n - 1).rev() {
            let next = psi[i + 1];
            psi[i] -= self.sup_prime[i] * next;
        }
    }
}

/// Applies `n_steps` Crank–Nicolson steps.
pub fn evolve(psi: &WaveFunction, propagator: &mut PropagatorCN, n_steps: usize) -> Result<WaveFunction> {
    if *psi.grid() != propagator.grid {
        return Err(Error::GridMismatch("state and propagator grids differ".into()));
    }
    let grid = *psi.grid();
    let mut amps = psi.amplitudes().to_vec();
    for _ in 0..n_steps {
        propagator.step(&mut amps);
    }
    Ok(WaveFunction::from_parts(grid, amps))
}
