use serde::{Deserialize, Serialize};

use super::potential::Potential;
use super::propagator::PropagatorCN;
use crate::error::{Error, Result};
use crate::grid::{squared_norm, WaveFunction};

/// Fine steps up to `switch_t`, coarse steps after.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepSchedule {
    pub fine_dt: f64,
    pub coarse_dt: f64,
    pub switch_t: f64,
}

impl StepSchedule {
    /// dt = 1e−6 t0 up to 0.01 t0, 1e−5 t0 beyond.
    pub fn reference(t0: f64) -> Self {
        Self { fine_dt: 1e-6 * t0, coarse_dt: 1e-5 * t0, switch_t: 0.01 * t0 }
    }

    pub fn uniform(dt: f64) -> Self {
        Self { fine_dt: dt, coarse_dt: dt, switch_t: 0.0 }
    }

    pub fn halved(self) -> Self {
        Self { fine_dt: 0.5 * self.fine_dt, coarse_dt: 0.5 * self.coarse_dt, ..self }
    }

    fn validate(&self) -> Result<()> {
        if !(self.fine_dt > 0.0 && self.coarse_dt > 0.0 && self.switch_t >= 0.0) {
            return Err(Error::param(format!("invalid step schedule {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EvolutionStats {
    pub steps: usize,
    /// Largest |‖ψ‖² change| over a single step, relative.
    pub max_step_drift: f64,
    /// |‖ψ(t_end)‖²/‖ψ(0)‖² − 1|.
    pub total_drift: f64,
}

/// Evolves `psi0` under `potential`, calling `observe` at each of the
/// strictly increasing `times` (t = 0 allowed).
///
/// Every segment between consecutive sample times is split into equal steps
/// no longer than the scheduled dt, so samples land exactly on the requested times.
pub fn evolve_sampled(
    psi0: &WaveFunction,
    potential: &Potential,
    times: &[f64],
    schedule: StepSchedule,
    mut observe: impl FnMut(f64, &WaveFunction) -> Result<()>,
) -> Result<EvolutionStats> {
    schedule.validate()?;
    if psi0.grid() != potential.grid() {
        return Err(Error::GridMismatch("initial state and potential grids differ".into()));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) || times.first().is_some_and(|&t| t < 0.0) {
        return Err(Error::param("sample times must be non-negative and strictly increasing"));
    }
    let grid = *psi0.grid();
    let dx = grid.dx();
    let mut amps = psi0.amplitudes().to_vec();
    let n0 = squared_norm(&amps, dx);
    let mut stats = EvolutionStats::default();
    let mut t = 0.0;
    let mut cache: Option<PropagatorCN> = None;

    // breakpoints: sample times plus the schedule switch
    for &target in times {
        let mut stops = Vec::with_capacity(2);
        if t < schedule.switch_t && target > schedule.switch_t {
            stops.push(schedule.switch_t);
        }
        stops.push(target);
        for stop in stops {
            let span = stop - t;
            if span > 0.0 {
                let dt_max = if t < schedule.switch_t { schedule.fine_dt } else { schedule.coarse_dt };
                let n = (span / dt_max * (1.0 - 1e-12)).ceil().max(1.0) as usize;
                let dt = span / n as f64;
                if cache.as_ref().is_none_or(|p| p.dt() != dt) {
                    cache = Some(PropagatorCN::new(potential, dt)?);
                }
                let prop = cache.as_mut().expect("propagator built above");
                let mut before = squared_norm(&amps, dx);
                for _ in 0..n {
                    prop.step(&mut amps);
                    let after = squared_norm(&amps, dx);
                    stats.max_step_drift = stats.max_step_drift.max(((after - before) / before).abs());
                    before = after;
                }
                stats.steps += n;
            }
            t = stop;
        }
        let snapshot = WaveFunction::from_parts(grid, amps.clone());
        if !snapshot.norm_sq().is_finite() {
            return Err(Error::NoConvergence {
                what: "Crank–Nicolson evolution",
                detail: format!("non-finite state at t = {t}"),
            });
        }
        observe(t, &snapshot)?;
    }
    stats.total_drift = (squared_norm(&amps, dx) / n0 - 1.0).abs();
    Ok(stats)
}
