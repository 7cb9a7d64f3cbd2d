//! Repeated-measurement protocol: evolve for τ, measure, repeat; record the
//! cumulative population W(mτ) just after each measurement.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{nonescape_from_survival, survival_probability_short, validity_horizon, LeftMode};
use crate::error::{Error, Result};
use crate::fit::{linear_fit, power_law_exponent, LinearFit};
use crate::grid::{make_grid, WaveFunction};
use crate::series::{SeriesKind, TimeSeries};
use crate::tdse::{evolve_sampled, ground_state, survival_numeric, Potential, StepSchedule};
use crate::trap::TrapConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasurementMode {
    /// Project onto the initial trap level.
    SurvivalProjection,
    /// Keep only the trap interior and renormalize.
    InteriorProjection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Engine {
    Analytic,
    Tdse,
}

/// Grid and time stepping for the Tdse engine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TdseSettings {
    pub grid_points: usize,
    pub schedule: StepSchedule,
}

impl TdseSettings {
    pub fn reference(config: &TrapConfig) -> Self {
        let per_a = 2000.0 / config.a();
        let grid_points = (config.box_length() * per_a).round() as usize + 1;
        Self { grid_points, schedule: StepSchedule::reference(config.t0()) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZenoProtocol {
    pub tau: f64,
    pub m_max: usize,
    pub mode: MeasurementMode,
    pub engine: Engine,
    pub tdse: Option<TdseSettings>,
}

impl ZenoProtocol {
    pub fn new(tau: f64, m_max: usize, mode: MeasurementMode, engine: Engine) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::param(format!("measurement interval must be positive, got {tau}")));
        }
        if m_max == 0 {
            return Err(Error::param("at least one measurement cycle is required"));
        }
        Ok(Self { tau, m_max, mode, engine, tdse: None })
    }

    pub fn with_tdse(self, settings: TdseSettings) -> Self {
        Self { tdse: Some(settings), ..self }
    }
}

/// W(mτ) for m = 1..m_max.
pub fn run_protocol(protocol: &ZenoProtocol, n: LeftMode, config: &TrapConfig) -> Result<TimeSeries> {
    let label = format!("W(t), tau = {:e}", protocol.tau);
    let per_cycle = match protocol.engine {
        Engine::Analytic => {
            let horizon = validity_horizon(n, config);
            if protocol.tau > horizon {
                return Err(Error::Validity { t: protocol.tau, horizon });
            }
            let s = survival_probability_short(protocol.tau, n, config).max(0.0);
            match protocol.mode {
                MeasurementMode::SurvivalProjection => s,
                MeasurementMode::InteriorProjection => nonescape_from_survival(s)?,
            }
        }
        Engine::Tdse => {
            let settings = protocol.tdse.unwrap_or_else(|| TdseSettings::reference(config));
            match protocol.mode {
                MeasurementMode::SurvivalProjection => tdse_survival(protocol.tau, n, config, &settings)?,
                MeasurementMode::InteriorProjection => {
                    return tdse_interior_protocol(protocol, n, config, &settings, label);
                }
            }
        }
    };
    let records = (1..=protocol.m_max).map(|m| (m as f64 * protocol.tau, per_cycle.powi(m as i32)));
    TimeSeries::from_records(label, SeriesKind::Probability, records)
}

fn initial_and_open(n: LeftMode, config: &TrapConfig, settings: &TdseSettings) -> Result<(WaveFunction, Potential)> {
    let grid = make_grid(config, settings.grid_points)?;
    let trap = Potential::trap(grid, config)?;
    let psi0 = ground_state(&trap, config, n.n())?;
    Ok((psi0, Potential::open(grid, config)?))
}

fn tdse_survival(tau: f64, n: LeftMode, config: &TrapConfig, settings: &TdseSettings) -> Result<f64> {
    let (psi0, open) = initial_and_open(n, config, settings)?;
    let mut s = f64::NAN;
    evolve_sampled(&psi0, &open, &[tau], settings.schedule, |_, psi| {
        s = survival_numeric(&psi0, psi)?;
        Ok(())
    })?;
    Ok(s)
}

fn tdse_interior_protocol(
    protocol: &ZenoProtocol,
    n: LeftMode,
    config: &TrapConfig,
    settings: &TdseSettings,
    label: String,
) -> Result<TimeSeries> {
    let (mut psi, open) = initial_and_open(n, config, settings)?;
    let edge = psi.grid().first_at_or_after(config.a());
    let mut series = TimeSeries::new(label, SeriesKind::Probability);
    let mut w = 1.0;
    for m in 1..=protocol.m_max {
        let mut next = None;
        evolve_sampled(&psi, &open, &[protocol.tau], settings.schedule, |_, p| {
            next = Some(p.clone());
            Ok(())
        })?;
        let grid = *psi.grid();
        let mut amps = next.expect("one sample requested").into_amplitudes();
        amps[edge..].iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        let projected = WaveFunction::new(grid, amps)?;
        let kept = projected.norm_sq() / psi.norm_sq();
        w *= kept;
        series.push(m as f64 * protocol.tau, w)?;
        psi = crate::grid::normalize(&projected)?;
    }
    Ok(series)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub rate: f64,
    pub fit: LinearFit,
}

/// γ from least squares of ln W against t.
pub fn fit_rate(series: &TimeSeries) -> Result<RateFit> {
    if series.len() < 5 {
        return Err(Error::param(format!("rate fit needs ≥ 5 points, got {}", series.len())));
    }
    let mut ts = Vec::with_capacity(series.len());
    let mut logs = Vec::with_capacity(series.len());
    for &(t, w) in series.records() {
        if !(w > 0.0) {
            return Err(Error::param(format!("population must be positive, got {w} at t = {t}")));
        }
        ts.push(t);
        logs.push(w.ln());
    }
    let fit = linear_fit(&ts, &logs)?;
    Ok(RateFit { rate: -fit.slope, fit })
}

/// Fitted γ for each τ, run in parallel, plus the log–log slope of γ(τ).
pub fn rate_sweep(
    taus: &[f64],
    template: &ZenoProtocol,
    n: LeftMode,
    config: &TrapConfig,
) -> Result<(Vec<(f64, f64)>, LinearFit)> {
    if taus.len() < 3 {
        return Err(Error::param(format!("a sweep needs at least 3 values of tau, got {}", taus.len())));
    }
    let rates: Vec<(f64, f64)> = taus
        .par_iter()
        .map(|&tau| {
            let p = ZenoProtocol { tau, ..*template };
            Ok((tau, fit_rate(&run_protocol(&p, n, config)?)?.rate))
        })
        .collect::<Result<_>>()?;
    let (xs, ys): (Vec<f64>, Vec<f64>) = rates.iter().copied().unzip();
    let slope = power_law_exponent(&xs, &ys)?;
    Ok((rates, slope))
}
