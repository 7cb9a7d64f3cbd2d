//! End-to-end runs behind each data product: the emitted wave, escape spectra,
//! one- and four-atom survival curves, rate sweeps and the laboratory time scales.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{bound_energy, delta_psi_profile, escape_spectrum, transition_probability, zeno_time, LeftMode};
use crate::error::{Error, Result};
use crate::fit::{fit_scale_fixed_exponent, power_law_exponent, LinearFit};
use crate::grid::{make_grid, WaveFunction};
use crate::manybody::{fermionized_probabilities, fermionized_zeno_time, ManyBodyConfig, Statistics};
use crate::series::MomentumSpectrum;
use crate::tdse::{
    bound_states, decompose, evolve_sampled, momentum_spectrum_numeric, nonescape_numeric, Eigenstate, EvolutionStats,
    Potential,
};
use crate::trap::TrapConfig;
use crate::units::{PhysicalSpecies, TimeScale};
use crate::zeno::TdseSettings;

/// Trap levels prepared in the closed trap, ready to be released into the open box.
#[derive(Debug, Clone)]
pub struct Release {
    pub config: TrapConfig,
    pub levels: Vec<Eigenstate>,
    pub open: Potential,
    pub settings: TdseSettings,
}

/// Snapshots ψ_k(t_j) of each released level.
#[derive(Debug, Clone)]
pub struct Evolved {
    pub times: Vec<f64>,
    /// states[k][j]: level k+1 at times[j]
    pub states: Vec<Vec<WaveFunction>>,
    pub stats: Vec<EvolutionStats>,
}

impl Release {
    pub fn prepare(config: &TrapConfig, n_levels: u32, settings: TdseSettings) -> Result<Self> {
        let grid = make_grid(config, settings.grid_points)?;
        let trap = Potential::trap(grid, config)?;
        let levels = bound_states(&trap, config, n_levels)?;
        Ok(Self { config: *config, levels, open: Potential::open(grid, config)?, settings })
    }

    pub fn initial(&self, level: usize) -> &WaveFunction {
        &self.levels[level].state
    }

    pub fn initial_states(&self) -> Vec<WaveFunction> {
        self.levels.iter().map(|l| l.state.clone()).collect()
    }

    /// Evolves every level in parallel and keeps a snapshot at each time.
    pub fn evolve(&self, times: &[f64]) -> Result<Evolved> {
        let runs: Vec<(Vec<WaveFunction>, EvolutionStats)> = self
            .levels
            .par_iter()
            .map(|level| {
                let mut snaps = Vec::with_capacity(times.len());
                let stats = evolve_sampled(&level.state, &self.open, times, self.settings.schedule, |_, p| {
                    snaps.push(p.clone());
                    Ok(())
                })?;
                Ok((snaps, stats))
            })
            .collect::<Result<_>>()?;
        let (states, stats) = runs.into_iter().unzip();
        Ok(Evolved { times: times.to_vec(), states, stats })
    }
}

impl Evolved {
    /// Worst cumulative norm drift over all levels.
    pub fn norm_drift(&self) -> f64 {
        self.stats.iter().map(|s| s.total_drift).fold(0.0, f64::max)
    }

    pub fn max_step_drift(&self) -> f64 {
        self.stats.iter().map(|s| s.max_step_drift).fold(0.0, f64::max)
    }
}

/// Emitted wave near the trap edge, analytic and from the solver.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmissionProfile {
    pub t: f64,
    pub x: Vec<f64>,
    pub analytic: Vec<Complex64>,
    pub numeric: Vec<Complex64>,
    /// ‖δψ_num − δψ_an‖/‖δψ_an‖ over x ≥ a.
    pub exterior_l2_error: f64,
    /// Same over the whole window.
    pub window_l2_error: f64,
    /// max_ξ |δψ_num(a−ξ) − δψ_num(a+ξ)| / max |δψ_num|.
    pub numeric_asymmetry: f64,
    /// 2Re⟨φ(t)|δψ⟩ + ⟨δψ|δψ⟩ on the full grid.
    pub optical_residual: f64,
    pub norm_drift: f64,
}

/// δψ(x, t) = ψ(t) − e^{−iE t}ψ(0) on the grid nodes with x ∈ [a − half_width, a + half_width].
pub fn emission_profile(
    config: &TrapConfig,
    n: LeftMode,
    t: f64,
    half_width: f64,
    settings: TdseSettings,
) -> Result<EmissionProfile> {
    if !(half_width > 0.0) {
        return Err(Error::param("profile half-width must be positive"));
    }
    let release = Release::prepare(config, n.n(), settings)?;
    let level = &release.levels[n.n() as usize - 1];
    let evolved = release.evolve_level(n, &[t])?;
    let psi_t = &evolved.0[0];
    let phase = Complex64::from_polar(1.0, -level.energy * t);
    let closed = level.state.scaled(phase);
    let delta = psi_t.minus(&closed)?;
    let optical = 2.0 * closed.inner(&delta)?.re + delta.norm_sq();

    let g = *psi_t.grid();
    let a = config.a();
    let edge = g.first_at_or_after(a);
    let lo = g.first_at_or_after((a - half_width).max(0.0));
    let hi = g.nearest(a + half_width).min(g.len() - 1);
    let idx: Vec<usize> = (lo..=hi).collect();
    let x: Vec<f64> = idx.iter().map(|&i| g.x(i)).collect();
    let numeric: Vec<Complex64> = idx.iter().map(|&i| delta.amplitudes()[i]).collect();
    let analytic = delta_psi_profile(&x, t, n, config)?;

    let err = |range: &dyn Fn(usize) -> bool| {
        let (mut num, mut den) = (0.0, 0.0);
        for (k, &i) in idx.iter().enumerate() {
            if range(i) {
                num += (numeric[k] - analytic[k]).norm_sqr();
                den += analytic[k].norm_sqr();
            }
        }
        (num / den).sqrt()
    };
    let exterior_l2_error = err(&|i| i >= edge);
    let window_l2_error = err(&|_| true);

    let peak = numeric.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut asym: f64 = 0.0;
    for s in 1..=(edge - lo).min(hi - edge) {
        let d = delta.amplitudes()[edge - s] - delta.amplitudes()[edge + s];
        asym = asym.max(d.norm());
    }
    Ok(EmissionProfile {
        t,
        x,
        analytic,
        numeric,
        exterior_l2_error,
        window_l2_error,
        numeric_asymmetry: asym / peak,
        optical_residual: optical,
        norm_drift: evolved.1.total_drift,
    })
}

impl Release {
    fn evolve_level(&self, n: LeftMode, times: &[f64]) -> Result<(Vec<WaveFunction>, EvolutionStats)> {
        let level = &self.levels[n.n() as usize - 1];
        let mut snaps = Vec::with_capacity(times.len());
        let stats = evolve_sampled(&level.state, &self.open, times, self.settings.schedule, |_, p| {
            snaps.push(p.clone());
            Ok(())
        })?;
        Ok((snaps, stats))
    }
}

/// One row of the escape-spectrum table, at k_m = mπ/a.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TransitionRow {
    pub m: u32,
    pub k: f64,
    /// n² F(k_m, t)
    pub escape_density: f64,
    /// W_{m←n}(t), analytic
    pub transition: f64,
    /// |⟨φ_m^L|ψ(t)⟩|² from the solver
    pub transition_numeric: f64,
    /// transition / escape_density, equal to π/a
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumComparison {
    pub t: f64,
    /// Analytic n²F sampled on the solver's exterior modes.
    pub analytic: MomentumSpectrum,
    pub numeric: MomentumSpectrum,
    pub transitions: Vec<TransitionRow>,
    pub analytic_escape: f64,
    pub numeric_escape: f64,
    pub nonescape: f64,
    pub analytic_peak: f64,
    pub numeric_peak: f64,
}

/// Largest exterior wavenumber kept in the spectrum tables.
pub fn default_k_max(t: f64, config: &TrapConfig) -> f64 {
    // well past the peak near k ~ (M/t)^{1/2}
    40.0 * (config.mass() / t).sqrt()
}

pub fn spectrum_comparison(
    config: &TrapConfig,
    n: LeftMode,
    t: f64,
    k_max: f64,
    m_transitions: u32,
    settings: TdseSettings,
) -> Result<SpectrumComparison> {
    let release = Release::prepare(config, n.n(), settings)?;
    let (snaps, _) = release.evolve_level(n, &[t])?;
    let psi = &snaps[0];
    let full = momentum_spectrum_numeric(psi, config, None)?;
    let numeric_escape = full.integral();
    let dk = full.dk.expect("discrete spectrum");
    let numeric =
        MomentumSpectrum { points: full.points.iter().copied().filter(|p| p.0 <= k_max).collect(), dk: Some(dk) };
    let analytic_points = numeric
        .points
        .par_iter()
        .map(|&(k, _)| Ok((k, escape_spectrum(k, t, n, config)?)))
        .collect::<Result<Vec<_>>>()?;
    let analytic = MomentumSpectrum { points: analytic_points, dk: Some(dk) };

    let d = decompose(psi, config, m_transitions as usize, 1)?;
    let a = config.a();
    let transitions = (1..=m_transitions)
        .filter(|&m| m != n.n())
        .map(|m| {
            let mm = LeftMode::new(m)?;
            let k = m as f64 * std::f64::consts::PI / a;
            let escape_density = escape_spectrum(k, t, n, config)?;
            let transition = transition_probability(mm, n, t, config)?;
            Ok(TransitionRow {
                m,
                k,
                escape_density,
                transition,
                transition_numeric: d.left[m as usize - 1].norm_sqr(),
                ratio: transition / escape_density,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(SpectrumComparison {
        t,
        analytic_peak: analytic.peak().unwrap_or(f64::NAN),
        numeric_peak: numeric.peak().unwrap_or(f64::NAN),
        analytic_escape: crate::analytic::escape_probability(t, n, config)?,
        numeric_escape,
        nonescape: nonescape_numeric(psi, config),
        analytic,
        numeric,
        transitions,
    })
}

/// Sample times and fit windows for a survival curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub times: Vec<f64>,
    /// Window for the fixed-exponent t_Z fit.
    pub fit_window: (f64, f64),
    /// Window for the free power-law exponent.
    pub exponent_window: (f64, f64),
}

impl CurveSpec {
    /// 16 samples per decade on [1e−4, 1e−2] t0 plus four more up to 0.02 t0.
    pub fn reference(t0: f64) -> Self {
        let mut times = crate::fit::log_spaced(1e-4 * t0, 1e-2 * t0, 33);
        times.extend([0.0125, 0.015, 0.0175, 0.02].iter().map(|t| t * t0));
        Self { times, fit_window: (1e-3 * t0, 1e-2 * t0), exponent_window: (1e-4 * t0, 1e-2 * t0) }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SurvivalCurve {
    pub particles: u32,
    pub t: Vec<f64>,
    pub survival: Vec<f64>,
    pub nonescape: Vec<f64>,
    /// 1 − (t/t_Z^(N))^{3/2} with the closed-form Zeno time.
    pub survival_closed: Vec<f64>,
    /// (1 + survival_closed)/2
    pub nonescape_closed: Vec<f64>,
    pub closed_zeno_time: f64,
    pub fitted_zeno_time: f64,
    pub exponent: LinearFit,
    pub norm_drift: f64,
    pub max_step_drift: f64,
}

impl SurvivalCurve {
    /// (1 − P)/(1 − S) at each sample.
    pub fn escape_ratio(&self) -> Vec<f64> {
        self.survival.iter().zip(&self.nonescape).map(|(s, p)| (1.0 - p) / (1.0 - s)).collect()
    }

    /// max |P − (1 + S)/2| over the samples.
    pub fn max_nonescape_gap(&self) -> f64 {
        self.survival.iter().zip(&self.nonescape).map(|(s, p)| (p - 0.5 * (1.0 + s)).abs()).fold(0.0, f64::max)
    }
}

/// Survival and non-escape of N fermionized atoms (N = 1: a single atom in the ground state).
pub fn survival_curve(
    config: &TrapConfig,
    particles: u32,
    spec: &CurveSpec,
    settings: TdseSettings,
) -> Result<SurvivalCurve> {
    let mb = ManyBodyConfig::new(particles, Statistics::Fermionized)?;
    let release = Release::prepare(config, mb.n_particles(), settings)?;
    let evolved = release.evolve(&spec.times)?;
    let initial = release.initial_states();
    let mut survival = Vec::with_capacity(spec.times.len());
    let mut nonescape = Vec::with_capacity(spec.times.len());
    for j in 0..spec.times.len() {
        let now: Vec<WaveFunction> = evolved.states.iter().map(|s| s[j].clone()).collect();
        let (s, p) = fermionized_probabilities(&initial, &now, config)?;
        survival.push(s);
        nonescape.push(p);
    }
    let closed = fermionized_zeno_time(particles, config)?;
    let survival_closed: Vec<f64> = spec.times.iter().map(|t| 1.0 - (t / closed).powf(1.5)).collect();
    let nonescape_closed = survival_closed.iter().map(|s| 0.5 * (1.0 + s)).collect();

    let pick = |(lo, hi): (f64, f64)| -> (Vec<f64>, Vec<f64>) {
        spec.times
            .iter()
            .zip(&survival)
            .filter(|(t, _)| **t >= lo * (1.0 - 1e-9) && **t <= hi * (1.0 + 1e-9))
            .map(|(t, s)| (*t, 1.0 - s))
            .unzip()
    };
    let (ft, fl) = pick(spec.fit_window);
    let fitted_zeno_time = fit_scale_fixed_exponent(&ft, &fl, 1.5)?;
    let (et, el) = pick(spec.exponent_window);
    let exponent = power_law_exponent(&et, &el)?;

    Ok(SurvivalCurve {
        particles,
        t: spec.times.clone(),
        survival,
        nonescape,
        survival_closed,
        nonescape_closed,
        closed_zeno_time: closed,
        fitted_zeno_time,
        exponent,
        norm_drift: evolved.norm_drift(),
        max_step_drift: evolved.max_step_drift(),
    })
}

/// Loss 1 − S^(N) at which the anomalous decay is taken to be observable.
pub const OBSERVABLE_LOSS: f64 = 0.25;

/// Time scales of the experiment in seconds.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UnitsReport {
    pub species: String,
    pub a_meters: f64,
    pub particles: u32,
    pub statistics: Statistics,
    pub t0: f64,
    pub t_z: f64,
    pub t_z_n: f64,
    pub horizon: f64,
    /// Time at which 1 − S^(N) = OBSERVABLE_LOSS, i.e. t_Z^(N)·OBSERVABLE_LOSS^{2/3}.
    pub observability_window: f64,
}

pub fn units_report(species: &PhysicalSpecies, a_meters: f64, mb: ManyBodyConfig) -> Result<UnitsReport> {
    let scale = TimeScale::new(species, a_meters)?;
    let unit = TrapConfig::hard_wall();
    let t_z = zeno_time(LeftMode::ground(), &unit).t_z;
    let t_z_n = mb.zeno_time(&unit)?;
    let horizon = crate::analytic::validity_horizon(LeftMode::ground(), &unit);
    Ok(UnitsReport {
        species: species.name.clone(),
        a_meters,
        particles: mb.n_particles(),
        statistics: mb.statistics(),
        t0: scale.t0_seconds(),
        t_z: scale.to_seconds(t_z),
        t_z_n: scale.to_seconds(t_z_n),
        horizon: scale.to_seconds(horizon),
        observability_window: scale.to_seconds(t_z_n * OBSERVABLE_LOSS.powf(2.0 / 3.0)),
    })
}

/// Energy of the n-th level of the closed trap as found by the solver, for reference.
pub fn level_energy_shift(release: &Release, n: LeftMode) -> f64 {
    release.levels[n.n() as usize - 1].energy / bound_energy(n, &release.config) - 1.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn observability_windows() {
        let mb = ManyBodyConfig::new(4, Statistics::Fermionized).unwrap();
        let rb = units_report(&PhysicalSpecies::rb85(), 80e-6, mb).unwrap();
        let na = units_report(&PhysicalSpecies::na23(), 80e-6, mb).unwrap();
        assert!((rb.observability_window / 0.15 - 1.0).abs() < 0.1, "{}", rb.observability_window);
        assert!((na.observability_window / 0.041 - 1.0).abs() < 0.1, "{}", na.observability_window);
        assert!(rb.t_z_n < rb.t_z && rb.horizon < rb.t0);
    }
}
