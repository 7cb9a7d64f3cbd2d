use crate::grid::WaveFunction;
use crate::tdse::Potential;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyMoments {
    pub mean: f64,
    pub variance: f64,
}

impl EnergyMoments {
    /// Conventional Zeno time [⟨H²⟩ − ⟨H⟩²]^{−1/2}; infinite variance gives zero.
    pub fn conventional_zeno_time(&self) -> f64 {
        1.0 / self.variance.sqrt()
    }
}

/// ⟨H⟩ and ⟨H²⟩ − ⟨H⟩² of a normalized state under the finite-difference
/// Hamiltonian of `potential`.
///
/// A state with a kink (a box eigenstate released into the open grid) has a
/// variance that grows like 1/dx: the conventional Zeno time does not exist.
pub fn energy_moments(psi: &WaveFunction, potential: &Potential) -> crate::Result<EnergyMoments> {
    let h_psi = potential.hamiltonian().apply(psi)?;
    let mean = psi.inner(&h_psi)?.re;
    let second = h_psi.norm_sq();
    Ok(EnergyMoments { mean, variance: second - mean * mean })
}
