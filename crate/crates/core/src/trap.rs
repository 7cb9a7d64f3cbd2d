use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Barrier at the right edge of the trap before it is opened.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Barrier {
    HardWall,
    /// Finite step of height `v0` for x ≥ a.
    Step {
        v0: f64,
    },
}

impl Barrier {
    /// The step height used in the finite-barrier experiment, V0·t0 = (50π)².
    pub fn reference_step(config_t0: f64) -> Self {
        Barrier::Step { v0: (50.0 * PI).powi(2) / config_t0 }
    }
}

/// Geometry and particle parameters, natural units (ħ = 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapConfig {
    a: f64,
    mass: f64,
    barrier: Barrier,
    box_length: f64,
}

impl TrapConfig {
    pub fn new(a: f64, mass: f64, barrier: Barrier, box_length: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::param(format!("trap width a must be positive, got {a}")));
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::param(format!("mass must be positive, got {mass}")));
        }
        if !box_length.is_finite() || box_length <= a {
            return Err(Error::param(format!("box length L = {box_length} must be finite and exceed a = {a}")));
        }
        if let Barrier::Step { v0 } = barrier {
            if !(v0 > 0.0 && v0.is_finite()) {
                return Err(Error::param(format!("step height must be positive, got {v0}")));
            }
        }
        Ok(Self { a, mass, barrier, box_length })
    }

    /// a = M = 1, L = 12, step barrier V0 t0 = (50π)².
    pub fn reference() -> Self {
        Self { a: 1.0, mass: 1.0, barrier: Barrier::reference_step(1.0), box_length: 12.0 }
    }

    pub fn hard_wall() -> Self {
        Self { barrier: Barrier::HardWall, ..Self::reference() }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn barrier(&self) -> Barrier {
        self.barrier
    }

    /// Computational box length; also the outer wall position b.
    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    pub fn t0(&self) -> f64 {
        self.mass * self.a * self.a
    }

    pub fn with_barrier(self, barrier: Barrier) -> Result<Self> {
        Self::new(self.a, self.mass, barrier, self.box_length)
    }

    pub fn with_box_length(self, box_length: f64) -> Result<Self> {
        Self::new(self.a, self.mass, self.barrier, box_length)
    }
}

impl Default for TrapConfig {
    fn default() -> Self {
        Self::reference()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_enforced() {
        assert!(TrapConfig::new(0.0, 1.0, Barrier::HardWall, 2.0).is_err());
        assert!(TrapConfig::new(1.0, -1.0, Barrier::HardWall, 2.0).is_err());
        assert!(TrapConfig::new(1.0, 1.0, Barrier::HardWall, 1.0).is_err());
        assert!(TrapConfig::new(1.0, 1.0, Barrier::Step { v0: 0.0 }, 2.0).is_err());
        assert!(TrapConfig::new(1.0, 1.0, Barrier::HardWall, f64::NAN).is_err());
    }

    #[test]
    fn reference_step_height() {
        let c = TrapConfig::reference();
        match c.barrier() {
            Barrier::Step { v0 } => assert!((v0 * c.t0() - (50.0 * PI).powi(2)).abs() < 1e-9),
            _ => unreachable!(),
        }
        let c2 = TrapConfig::new(2.0, 3.0, Barrier::HardWall, 10.0).unwrap();
        assert_eq!(c2.t0(), 12.0);
    }
}
