use std::f64::consts::PI;

use num_complex::Complex64;

use super::potential::Potential;
use crate::error::{Error, Result};
use crate::grid::{squared_norm, WaveFunction};
use crate::trap::{Barrier, TrapConfig};

const MAX_ITERATIONS: usize = 500;
const ENERGY_TOL: f64 = 1e-10;
const STATE_TOL: f64 = 1e-11;
const TAIL_FLOOR: f64 = 1e-150;

#[derive(Debug, Clone)]
pub struct Eigenstate {
    pub n: u32,
    pub energy: f64,
    pub state: WaveFunction,
}

/// The `n_target`-th bound state (n_target = 1 is the ground state).
pub fn ground_state(potential: &Potential, config: &TrapConfig, n_target: u32) -> Result<WaveFunction> {
    let mut states = bound_states(potential, config, n_target)?;
    Ok(states.pop().expect("n_target ≥ 1").state)
}

/// Lowest `n_max` bound states by shifted imaginary-time relaxation.
///
/// Each iteration applies (1 + dτ(H − σ))⁻¹ with dτ = t0 and σ the current
/// Rayleigh quotient, then projects out the lower states. Guesses are the box
/// sines, normalized so that ⟨guess|ψ⟩ > 0.
pub fn bound_states(potential: &Potential, config: &TrapConfig, n_max: u32) -> Result<Vec<Eigenstate>> {
    if n_max == 0 {
        return Err(Error::param("n_target must be ≥ 1"));
    }
    let grid = *potential.grid();
    let h = potential.hamiltonian();
    let dx = grid.dx();
    let a = config.a();
    let dtau = config.t0();
    let n_pts = grid.len();
    let mut found: Vec<Eigenstate> = Vec::new();

    for n in 1..=n_max {
        let kn = n as f64 * PI / a;
        let guess: Vec<f64> = (0..n_pts)
            .map(|i| {
                let x = grid.x(i);
                if x < a && !potential.is_dirichlet(i) {
                    (kn * x).sin()
                } else {
                    0.0
                }
            })
            .collect();
        let mut psi = guess.clone();
        project_out(&mut psi, &found, dx);
        normalize_real(&mut psi, dx)?;
        let mut energy = rayleigh_real(&h, &psi, dx);
        let mut converged = false;
        let mut scratch = vec![0.0; n_pts];

        for _ in 0..MAX_ITERATIONS {
            let sigma = energy;
            shifted_solve(&h, &psi, dtau, sigma, &mut scratch)?;
            project_out(&mut scratch, &found, dx);
            normalize_real(&mut scratch, dx)?;
            if dot(&scratch, &guess) < 0.0 {
                scratch.iter_mut().for_each(|v| *v = -*v);
            }
            let change: f64 = scratch.iter().zip(&psi).map(|(p, q)| (p - q).powi(2)).sum::<f64>() * dx;
            std::mem::swap(&mut psi, &mut scratch);
            let e_new = rayleigh_real(&h, &psi, dx);
            let de = (e_new - energy).abs();
            energy = e_new;
            if de <= ENERGY_TOL * energy.abs() && change.sqrt() <= STATE_TOL {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence {
                what: "imaginary-time relaxation",
                detail: format!("state {n} after {MAX_ITERATIONS} iterations"),
            });
        }
        if let Barrier::Step { v0 } = config.barrier() {
            if energy >= v0 {
                return Err(Error::param(format!(
                    "requested level {n} has E = {energy:.6e} ≥ V0 = {v0:.6e}: not bound"
                )));
            }
        }
        // the deep barrier tail underflows into subnormals, which slow every later step
        let amps = psi.iter().map(|&v| Complex64::new(if v.abs() < TAIL_FLOOR { 0.0 } else { v }, 0.0)).collect();
        found.push(Eigenstate { n, energy, state: WaveFunction::from_parts(grid, amps) });
    }
    Ok(found)
}

fn dot(f: &[f64], g: &[f64]) -> f64 {
    f.iter().zip(g).map(|(a, b)| a * b).sum()
}

fn normalize_real(psi: &mut [f64], dx: f64) -> Result<()> {
    let n = dot(psi, psi) * dx;
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::NoConvergence { what: "imaginary-time relaxation", detail: "state collapsed".into() });
    }
    let s = 1.0 / n.sqrt();
    psi.iter_mut().for_each(|v| *v *= s);
    Ok(())
}

fn project_out(psi: &mut [f64], lower: &[Eigenstate], dx: f64) {
    // two passes of classical Gram–Schmidt
    for _ in 0..2 {
        for s in lower {
            let amps = s.state.amplitudes();
            let c: f64 = amps.iter().zip(psi.iter()).map(|(a, p)| a.re * p).sum::<f64>() * dx;
            for (p, a) in psi.iter_mut().zip(amps) {
                *p -= c * a.re;
            }
        }
    }
}

fn rayleigh_real(h: &super::potential::Hamiltonian, psi: &[f64], dx: f64) -> f64 {
    let c: Vec<Complex64> = psi.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut out = vec![Complex64::new(0.0, 0.0); c.len()];
    h.apply_slice(&c, &mut out);
    let num: f64 = psi.iter().zip(&out).map(|(p, o)| p * o.re).sum::<f64>() * dx;
    num / (squared_norm(&c, dx))
}

/// Solves (1 + dτ(H − σ)) y = psi with pinned rows kept at zero.
fn shifted_solve(h: &super::potential::Hamiltonian, psi: &[f64], dtau: f64, sigma: f64, y: &mut [f64]) -> Result<()> {
    let n = psi.len();
    let mut sup = vec![0.0; n];
    let mut prev_sup = 0.0;
    let mut prev_y = 0.0;
    for i in 0..n {
        let (b, lower, upper, r) = if h.pinned[i] {
            (1.0, 0.0, 0.0, 0.0)
        } else {
            let lower = if i > 0 { dtau * h.coupling(i - 1) } else { 0.0 };
            let upper = if i + 1 < n { dtau * h.coupling(i) } else { 0.0 };
            (1.0 + dtau * (h.diag[i] - sigma), lower, upper, psi[i])
        };
        let pivot = b - lower * prev_sup;
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::NoConvergence {
                what: "imaginary-time relaxation",
                detail: "singular shifted system".into(),
            });
        }
        sup[i] = upper / pivot;
        y[i] = (r - lower * prev_y) / pivot;
        prev_sup = sup[i];
        prev_y = y[i];
    }
    for i in (0..n - 1).rev() {
        y[i] -= sup[i] * y[i + 1];
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    #[test]
    fn hard_wall_states_are_sines() {
        let c = TrapConfig::hard_wall();
        let g = make_grid(&c, 2401).unwrap();
        let v = Potential::trap(g, &c).unwrap();
        let states = bound_states(&v, &c, 3).unwrap();
        for s in &states {
            let k = s.n as f64 * PI;
            let exact = WaveFunction::from_fn(g, |x| {
                Complex64::new(if x < 1.0 { 2f64.sqrt() * (k * x).sin() } else { 0.0 }, 0.0)
            });
            let diff = s.state.minus(&exact).unwrap().norm_sq().sqrt();
            assert!(diff < 1e-6, "n = {}: {diff}", s.n);
        }
        let o = states[0].state.inner(&states[1].state).unwrap().norm();
        assert!(o < 1e-8);
        assert!(bound_states(&v, &c, 0).is_err());
    }

    #[test]
    fn unbound_level_rejected() {
        let c = TrapConfig::reference().with_barrier(Barrier::Step { v0: 10.0 }).unwrap();
        let g = make_grid(&c, 1201).unwrap();
        let v = Potential::trap(g, &c).unwrap();
        assert!(ground_state(&v, &c, 1).is_ok());
        assert!(ground_state(&v, &c, 2).is_err());
    }
}
