use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Grid1D, WaveFunction};
use crate::trap::{Barrier, TrapConfig};

/// Sampled potential with a set of Dirichlet (pinned-to-zero) nodes.
///
/// The endpoints x = 0 and x = L are always Dirichlet. A hard wall at the
/// trap edge is realized by pinning every node with x ≥ a.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    grid: Grid1D,
    mass: f64,
    values: Vec<f64>,
    dirichlet: Vec<bool>,
}

impl Potential {
    fn build(grid: Grid1D, mass: f64, values: Vec<f64>, mut dirichlet: Vec<bool>) -> Result<Self> {
        if values.len() != grid.len() || dirichlet.len() != grid.len() {
            return Err(Error::GridMismatch("potential length differs from grid".into()));
        }
        if !(mass > 0.0) {
            return Err(Error::param(format!("mass must be positive, got {mass}")));
        }
        let last = grid.len() - 1;
        dirichlet[0] = true;
        dirichlet[last] = true;
        if values.iter().zip(&dirichlet).any(|(v, &d)| !d && !v.is_finite()) {
            return Err(Error::param("potential must be finite at free nodes"));
        }
        Ok(Self { grid, mass, values, dirichlet })
    }

    /// Arbitrary sampled potential; only the endpoints are pinned.
    pub fn from_values(grid: Grid1D, mass: f64, values: Vec<f64>) -> Result<Self> {
        let n = grid.len();
        Self::build(grid, mass, values, vec![false; n])
    }

    /// V = 0 on [0, a); every node with x ≥ a is pinned.
    pub fn hard_wall_box(grid: Grid1D, config: &TrapConfig) -> Result<Self> {
        let n = grid.len();
        let edge = grid.first_at_or_after(config.a());
        let dirichlet = (0..n).map(|i| i >= edge).collect();
        Self::build(grid, config.mass(), vec![0.0; n], dirichlet)
    }

    /// V = 0 for x < a, V0 for x ≥ a.
    pub fn step_trap(grid: Grid1D, config: &TrapConfig, v0: f64) -> Result<Self> {
        if !(v0 > 0.0 && v0.is_finite()) {
            return Err(Error::param(format!("step height must be positive, got {v0}")));
        }
        let n = grid.len();
        let edge = grid.first_at_or_after(config.a());
        let values = (0..n).map(|i| if i >= edge { v0 } else { 0.0 }).collect();
        Self::build(grid, config.mass(), values, vec![false; n])
    }

    /// Trap potential before release, following `config.barrier()`.
    pub fn trap(grid: Grid1D, config: &TrapConfig) -> Result<Self> {
        match config.barrier() {
            Barrier::HardWall => Self::hard_wall_box(grid, config),
            Barrier::Step { v0 } => Self::step_trap(grid, config, v0),
        }
    }

    /// V = 0 everywhere: the right barrier has been switched off.
    pub fn open(grid: Grid1D, config: &TrapConfig) -> Result<Self> {
        Self::from_values(grid, config.mass(), vec![0.0; grid.len()])
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_dirichlet(&self, i: usize) -> bool {
        self.dirichlet[i]
    }

    /// Finite-difference Hamiltonian −(1/2M)∂² + V.
    pub fn hamiltonian(&self) -> Hamiltonian {
        let dx = self.grid.dx();
        let k = 1.0 / (self.mass * dx * dx);
        let diag = self.values.iter().zip(&self.dirichlet).map(|(v, &d)| if d { 0.0 } else { k + v }).collect();
        Hamiltonian { grid: self.grid, diag, off: -0.5 * k, pinned: self.dirichlet.clone() }
    }
}

/// Symmetric tridiagonal H restricted to the free nodes.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    grid: Grid1D,
    pub(crate) diag: Vec<f64>,
    pub(crate) off: f64,
    pub(crate) pinned: Vec<bool>,
}

impl Hamiltonian {
    /// Coupling between nodes i and i+1 (zero if either is pinned).
    pub(crate) fn coupling(&self, i: usize) -> f64 {
        if self.pinned[i] || self.pinned[i + 1] {
            0.0
        } else {
            self.off
        }
    }

    pub(crate) fn apply_slice(&self, psi: &[Complex64], out: &mut [Complex64]) {
        let n = psi.len();
        for i in 0..n {
            if self.pinned[i] {
                out[i] = Complex64::new(0.0, 0.0);
                continue;
            }
            let mut acc = psi[i] * self.diag[i];
            if i > 0 {
                acc += psi[i - 1] * self.coupling(i - 1);
            }
            if i + 1 < n {
                acc += psi[i + 1] * self.coupling(i);
            }
            out[i] = acc;
        }
    }

    pub fn apply(&self, psi: &WaveFunction) -> Result<WaveFunction> {
        if *psi.grid() != self.grid {
            return Err(Error::GridMismatch("state and Hamiltonian grids differ".into()));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); psi.amplitudes().len()];
        self.apply_slice(psi.amplitudes(), &mut out);
        Ok(WaveFunction::from_parts(self.grid, out))
    }

    /// ⟨ψ|H|ψ⟩/⟨ψ|ψ⟩.
    pub fn rayleigh(&self, psi: &WaveFunction) -> Result<f64> {
        let h = self.apply(psi)?;
        Ok(psi.inner(&h)?.re / psi.norm_sq())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    #[test]
    fn step_location_and_pins() {
        let c = TrapConfig::reference();
        let g = make_grid(&c, 1201).unwrap();
        let v = Potential::trap(g, &c).unwrap();
        let edge = g.nearest(1.0);
        assert_eq!(edge, 100);
        assert_eq!(v.values()[edge - 1], 0.0);
        assert!(v.values()[edge] > 2e4);
        assert!(v.is_dirichlet(0) && v.is_dirichlet(1200) && !v.is_dirichlet(edge));

        let hw = Potential::hard_wall_box(g, &c).unwrap();
        assert!(hw.is_dirichlet(edge) && !hw.is_dirichlet(edge - 1));
        assert!(Potential::step_trap(g, &c, -1.0).is_err());
    }

    #[test]
    fn hamiltonian_hermitian() {
        let c = TrapConfig::reference();
        let g = make_grid(&c, 241).unwrap();
        let h = Potential::trap(g, &c).unwrap().hamiltonian();
        let f = WaveFunction::from_fn(g, |x| Complex64::new((x * 1.3).sin(), x.cos() * 0.2));
        let q = WaveFunction::from_fn(g, |x| Complex64::new((-x).exp(), (x * 0.7).sin()));
        let lhs = f.inner(&h.apply(&q).unwrap()).unwrap();
        let rhs = h.apply(&f).unwrap().inner(&q).unwrap();
        assert!((lhs - rhs).norm() < 1e-9 * lhs.norm());
    }
}
