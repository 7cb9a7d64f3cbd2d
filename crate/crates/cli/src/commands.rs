//! One function per subcommand, each turning a resolved config into a table.
//!
//! Times in the config are in units of t0 = M a², energies in units of 1/t0,
//! lengths in units of a. The output columns use the same scaling.

use num_complex::Complex64;
use zeno_core::analytic::{
    delta_psi_profile, escape_probability, escape_spectrum, transition_probability, zeno_rate, zeno_time, LeftMode,
    RateLaw,
};
use zeno_core::experiments::{
    default_k_max, emission_profile, spectrum_comparison, survival_curve, units_report, CurveSpec,
};
use zeno_core::fit::log_spaced;
use zeno_core::manybody::{fermionized_zeno_time, ManyBodyConfig, Statistics};
use zeno_core::tdse::StepSchedule;
use zeno_core::zeno::{rate_sweep, Engine, MeasurementMode, TdseSettings, ZenoProtocol};
use zeno_core::{make_grid, Barrier, PhysicalSpecies, TrapConfig};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{Cell, Table};
use crate::Cmd;

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Engines {
    analytic: bool,
    tdse: bool,
}

fn engines(cfg: &RunConfig) -> Engines {
    match cfg.text("engine") {
        "analytic" => Engines { analytic: true, tdse: false },
        "tdse" => Engines { analytic: false, tdse: true },
        _ => Engines { analytic: true, tdse: true },
    }
}

fn trap(cfg: &RunConfig) -> Result<TrapConfig> {
    let (a, mass) = (cfg.float("a"), cfg.float("mass"));
    let t0 = mass * a * a;
    let barrier = match cfg.text("barrier") {
        "step" => Barrier::Step { v0: cfg.float("v0") / t0 },
        _ => Barrier::HardWall,
    };
    Ok(TrapConfig::new(a, mass, barrier, cfg.float("box_length") * a)?)
}

fn settings(cfg: &RunConfig, c: &TrapConfig) -> TdseSettings {
    let t0 = c.t0();
    TdseSettings {
        grid_points: cfg.count("grid_points"),
        schedule: StepSchedule {
            fine_dt: cfg.float("fine_dt") * t0,
            coarse_dt: cfg.float("coarse_dt") * t0,
            switch_t: cfg.float("switch_t") * t0,
        },
    }
}

fn level(cfg: &RunConfig) -> Result<LeftMode> {
    Ok(LeftMode::new(cfg.count("n") as u32)?)
}

fn opt(on: bool, x: f64) -> Cell {
    if on {
        Cell::Num(x)
    } else {
        Cell::Empty
    }
}

pub fn run(cfg: &RunConfig) -> Result<Table> {
    match cfg.command() {
        Cmd::Fig1 => fig1(cfg),
        Cmd::Fig2 => fig2(cfg),
        Cmd::Fig3 | Cmd::Fig4 => survival(cfg),
        Cmd::Zeno => zeno(cfg),
        Cmd::Units => units(cfg),
    }
}

/// Emitted wave around the trap edge.
fn fig1(cfg: &RunConfig) -> Result<Table> {
    let c = trap(cfg)?;
    let n = level(cfg)?;
    let (a, t0) = (c.a(), c.t0());
    let t = cfg.float("t") * t0;
    let half_width = cfg.float("half_width") * a;
    let stride = cfg.count("stride");
    let on = engines(cfg);
    let mut table = Table::new(
        cfg,
        vec!["x_over_a", "re_analytic", "im_analytic", "abs_analytic", "re_numeric", "im_numeric", "abs_numeric"],
    );

    let (x, analytic, numeric): (Vec<f64>, Vec<Complex64>, Vec<Complex64>) = if on.tdse {
        let p = emission_profile(&c, n, t, half_width, settings(cfg, &c))?;
        if on.analytic {
            table.result("exterior_l2_error", p.exterior_l2_error);
            table.result("window_l2_error", p.window_l2_error);
        }
        table.result("numeric_asymmetry", p.numeric_asymmetry);
        table.result("optical_residual", p.optical_residual);
        table.result("norm_drift", p.norm_drift);
        (p.x, p.analytic, p.numeric)
    } else {
        let g = make_grid(&c, cfg.count("grid_points"))?;
        let lo = g.first_at_or_after((a - half_width).max(0.0));
        let hi = g.nearest(a + half_width).min(g.len() - 1);
        let x: Vec<f64> = (lo..=hi).map(|i| g.x(i)).collect();
        let analytic = delta_psi_profile(&x, t, n, &c)?;
        let numeric = vec![Complex64::new(f64::NAN, f64::NAN); x.len()];
        (x, analytic, numeric)
    };
    for i in (0..x.len()).step_by(stride) {
        let (an, nu) = (analytic[i], numeric[i]);
        table.push(vec![
            Cell::Num(x[i] / a),
            opt(on.analytic, an.re),
            opt(on.analytic, an.im),
            opt(on.analytic, an.norm()),
            opt(on.tdse, nu.re),
            opt(on.tdse, nu.im),
            opt(on.tdse, nu.norm()),
        ]);
    }
    Ok(table)
}

/// Momentum distribution of the escaped atoms and trap-level transitions.
fn fig2(cfg: &RunConfig) -> Result<Table> {
    let c = trap(cfg)?;
    let n = level(cfg)?;
    let (a, t0) = (c.a(), c.t0());
    let t = cfg.float("t") * t0;
    let k_max = cfg.float_or_auto("k_max").map_or_else(|| default_k_max(t, &c), |k| k / a);
    let m_transitions = cfg.count("transitions") as u32;
    let on = engines(cfg);
    let mut table = Table::new(
        cfg,
        vec!["kind", "m", "k_times_a", "w_analytic", "w_numeric", "transition", "transition_numeric", "ratio"],
    );
    table.note("kind", "0 = exterior box mode k = m pi/(L - a), 1 = trap level k = m pi/a");
    table.note("ratio", "transition / (n^2 F(k_m, t)), equal to pi/a");

    if on.tdse {
        let cmp = spectrum_comparison(&c, n, t, k_max, m_transitions, settings(cfg, &c))?;
        let dk = cmp.numeric.dk.unwrap_or(f64::NAN);
        if on.analytic {
            table.result("analytic_escape", cmp.analytic_escape);
            table.result("analytic_peak_k_times_a", cmp.analytic_peak * a);
        }
        table.result("numeric_escape", cmp.numeric_escape);
        table.result("numeric_nonescape", cmp.nonescape);
        table.result("completeness", cmp.numeric_escape + cmp.nonescape);
        table.result("numeric_peak_k_times_a", cmp.numeric_peak * a);
        for (an, nu) in cmp.analytic.points.iter().zip(&cmp.numeric.points) {
            table.push(vec![
                Cell::Int(0),
                Cell::Int((nu.0 / dk).round() as i64),
                Cell::Num(nu.0 * a),
                opt(on.analytic, an.1),
                Cell::Num(nu.1),
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
            ]);
        }
        for r in &cmp.transitions {
            table.push(vec![
                Cell::Int(1),
                Cell::Int(r.m as i64),
                Cell::Num(r.k * a),
                opt(on.analytic, r.escape_density),
                Cell::Empty,
                opt(on.analytic, r.transition),
                Cell::Num(r.transition_numeric),
                opt(on.analytic, r.ratio),
            ]);
        }
    } else {
        let dk = std::f64::consts::PI / (c.box_length() - a);
        let mut best = (0.0, f64::NEG_INFINITY);
        for m in 1..=(k_max / dk).floor() as i64 {
            let k = m as f64 * dk;
            let w = escape_spectrum(k, t, n, &c)?;
            if w > best.1 {
                best = (k, w);
            }
            table.push(vec![
                Cell::Int(0),
                Cell::Int(m),
                Cell::Num(k * a),
                Cell::Num(w),
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
            ]);
        }
        table.result("analytic_escape", escape_probability(t, n, &c)?);
        table.result("analytic_peak_k_times_a", best.0 * a);
        for m in (1..=m_transitions).filter(|&m| m != n.n()) {
            let k = m as f64 * std::f64::consts::PI / a;
            let density = escape_spectrum(k, t, n, &c)?;
            let w = transition_probability(LeftMode::new(m)?, n, t, &c)?;
            table.push(vec![
                Cell::Int(1),
                Cell::Int(m as i64),
                Cell::Num(k * a),
                Cell::Num(density),
                Cell::Empty,
                Cell::Num(w),
                Cell::Empty,
                Cell::Num(w / density),
            ]);
        }
    }
    Ok(table)
}

fn curve_spec(cfg: &RunConfig, t0: f64) -> Result<CurveSpec> {
    let (lo, hi) = (cfg.float("t_min"), cfg.float("t_max"));
    let (fit_lo, fit_hi) = (cfg.float("fit_min"), cfg.float("fit_max"));
    if lo >= hi || fit_lo >= fit_hi {
        return Err(CliError::Config(format!(
            "sample and fit windows need min < max, got [{lo}, {hi}] and [{fit_lo}, {fit_hi}]"
        )));
    }
    let mut times = log_spaced(lo * t0, hi * t0, cfg.count("samples"));
    times.extend(cfg.list("t_extra").iter().map(|t| t * t0));
    times.sort_by(f64::total_cmp);
    times.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * y.abs());
    Ok(CurveSpec { times, fit_window: (fit_lo * t0, fit_hi * t0), exponent_window: (lo * t0, hi * t0) })
}

/// Survival and non-escape after release; fig4 is fixed at four fermionized atoms.
fn survival(cfg: &RunConfig) -> Result<Table> {
    let c = trap(cfg)?;
    let t0 = c.t0();
    let particles = if cfg.has("particles") { cfg.count("particles") as u32 } else { 4 };
    let spec = curve_spec(cfg, t0)?;
    let on = engines(cfg);
    let mut table = Table::new(cfg, vec!["t_over_t0", "s_numeric", "p_numeric", "s_closed", "p_closed"]);
    table.note("particles", format!("{particles} fermionized"));
    table.note("s_closed", "1 - (t/t_Z)^(3/2) with the closed-form t_Z; p_closed = (1 + s_closed)/2");

    let closed = fermionized_zeno_time(particles, &c)?;
    table.result("closed_zeno_time_over_t0", closed / t0);
    if on.tdse {
        let curve = survival_curve(&c, particles, &spec, settings(cfg, &c))?;
        table.result("fitted_zeno_time_over_t0", curve.fitted_zeno_time / t0);
        table.result("exponent", curve.exponent.slope);
        table.result("max_nonescape_gap", curve.max_nonescape_gap());
        table.result("norm_drift", curve.norm_drift);
        for i in 0..curve.t.len() {
            table.push(vec![
                Cell::Num(curve.t[i] / t0),
                Cell::Num(curve.survival[i]),
                Cell::Num(curve.nonescape[i]),
                opt(on.analytic, curve.survival_closed[i]),
                opt(on.analytic, curve.nonescape_closed[i]),
            ]);
        }
    } else {
        for &t in &spec.times {
            let s = 1.0 - (t / closed).powf(1.5);
            table.push(vec![Cell::Num(t / t0), Cell::Empty, Cell::Empty, Cell::Num(s), Cell::Num(0.5 * (1.0 + s))]);
        }
    }
    Ok(table)
}

/// Decay rate under repeated measurement for a sweep of intervals.
fn zeno(cfg: &RunConfig) -> Result<Table> {
    let c = trap(cfg)?;
    let n = level(cfg)?;
    let t0 = c.t0();
    let taus: Vec<f64> = cfg.list("taus").iter().map(|t| t * t0).collect();
    if taus.len() < 3 {
        return Err(CliError::Config(format!("taus needs at least 3 values, got {}", taus.len())));
    }
    let mode = match cfg.text("mode") {
        "interior" => MeasurementMode::InteriorProjection,
        _ => MeasurementMode::SurvivalProjection,
    };
    let on = engines(cfg);
    let t_z = zeno_time(n, &c).t_z;
    let mut table =
        Table::new(cfg, vec!["tau_over_t0", "gamma_analytic", "gamma_tdse", "gamma_anomalous", "gamma_conventional"]);
    table.note("measurement_record", "W is recorded just after each projection, at t = m tau, m = 1..cycles");
    table.note("gamma_anomalous", "tau^(1/2) / t_Z^(3/2); gamma_conventional = tau / t_Z^2; rates in units of 1/t0");
    table.result("zeno_time_over_t0", t_z / t0);

    let sweep = |engine: Engine| -> Result<(Vec<f64>, f64)> {
        let mut p = ZenoProtocol::new(taus[0], cfg.count("cycles"), mode, engine)?;
        if engine == Engine::Tdse {
            p = p.with_tdse(settings(cfg, &c));
        }
        let (rates, fit) = rate_sweep(&taus, &p, n, &c)?;
        Ok((rates.into_iter().map(|r| r.1).collect(), fit.slope))
    };
    let mut an = None;
    let mut nu = None;
    if on.analytic {
        let (r, slope) = sweep(Engine::Analytic)?;
        table.result("slope_analytic", slope);
        an = Some(r);
    }
    if on.tdse {
        let (r, slope) = sweep(Engine::Tdse)?;
        table.result("slope_tdse", slope);
        nu = Some(r);
    }
    let mut exceeds = true;
    for (i, &tau) in taus.iter().enumerate() {
        let conventional = zeno_rate(tau, t_z, RateLaw::Conventional)?;
        let pick = |r: &Option<Vec<f64>>| r.as_ref().map(|r| r[i]);
        for g in [pick(&an), pick(&nu)].into_iter().flatten() {
            exceeds &= g > conventional;
        }
        table.push(vec![
            Cell::Num(tau / t0),
            pick(&an).map_or(Cell::Empty, |g| Cell::Num(g * t0)),
            pick(&nu).map_or(Cell::Empty, |g| Cell::Num(g * t0)),
            Cell::Num(zeno_rate(tau, t_z, RateLaw::Anomalous)? * t0),
            Cell::Num(conventional * t0),
        ]);
    }
    table.results.push(("exceeds_conventional".into(), exceeds.to_string()));
    Ok(table)
}

/// Time scales in seconds for a given species and trap width.
fn units(cfg: &RunConfig) -> Result<Table> {
    let species = PhysicalSpecies::lookup(cfg.text("species"))?;
    let stats = match cfg.text("statistics") {
        "boson" => Statistics::BosonCondensate,
        _ => Statistics::Fermionized,
    };
    let mb = ManyBodyConfig::new(cfg.count("particles") as u32, stats)?;
    let r = units_report(&species, cfg.float("a_meters"), mb)?;
    let mut table = Table::new(cfg, vec!["t0_s", "t_z_s", "t_z_n_s", "horizon_s", "observability_window_s"]);
    table.note("species", format!("{} ({:.9} u)", r.species, species.mass / zeno_core::units::ATOMIC_MASS_UNIT));
    table.note("observability_window_s", "time at which 1 - S^(N) = 1/4");
    table.push(vec![r.t0.into(), r.t_z.into(), r.t_z_n.into(), r.horizon.into(), r.observability_window.into()]);
    Ok(table)
}
