//! Closed-form and quadrature results for the sharply localised trap state:
//! left/right eigenbasis, the wave emitted when the right wall is removed,
//! short-time survival, Zeno times and rates, and escape spectra.

mod emission;
mod moments;
mod spectrum;

use std::f64::consts::PI;

pub use emission::{
    delta_psi, delta_psi_profile, survival_amplitude_integral, survival_amplitude_short, SurvivalAmplitude,
};
pub use moments::{energy_moments, EnergyMoments};
pub use spectrum::{
    escape_probability, escape_spectrum, spectral_bracket_direct, spectral_bracket_series, spectral_f,
    transition_probability, SERIES_SWITCH,
};

use crate::error::{Error, Result};
use crate::trap::TrapConfig;

/// Trap-interior box state |φ_n^L⟩, n ≥ 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LeftMode(u32);

impl LeftMode {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("left-mode quantum number must be ≥ 1"));
        }
        Ok(Self(n))
    }

    pub fn ground() -> Self {
        Self(1)
    }

    pub fn n(self) -> u32 {
        self.0
    }

    fn nf(self) -> f64 {
        self.0 as f64
    }
}

/// Exterior continuum state |φ_k^R⟩, k ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct RightMode(f64);

impl RightMode {
    pub fn new(k: f64) -> Result<Self> {
        if !(k >= 0.0 && k.is_finite()) {
            return Err(Error::param(format!("wavenumber must be ≥ 0, got {k}")));
        }
        Ok(Self(k))
    }

    pub fn k(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    Left(LeftMode),
    Right(RightMode),
}

/// ⟨x|φ⟩ for either side of the left/right basis.
pub fn eigenmode(mode: Mode, x: f64, config: &TrapConfig) -> f64 {
    let a = config.a();
    match mode {
        Mode::Left(n) if (0.0..=a).contains(&x) => (2.0 / a).sqrt() * (n.nf() * PI * x / a).sin(),
        Mode::Right(k) if x >= a => (2.0 / PI).sqrt() * (k.k() * (x - a)).sin(),
        _ => 0.0,
    }
}

/// E_n = n²π²/(2Ma²).
pub fn bound_energy(n: LeftMode, config: &TrapConfig) -> f64 {
    let a = config.a();
    n.nf().powi(2) * PI * PI / (2.0 * config.mass() * a * a)
}

/// E(k) = k²/(2M).
pub fn free_energy(k: f64, config: &TrapConfig) -> f64 {
    k * k / (2.0 * config.mass())
}

/// φ_n^L'(a) = (2/a)^{1/2} (nπ/a) (−1)^n.
pub fn boundary_slope(n: LeftMode, config: &TrapConfig) -> f64 {
    let a = config.a();
    let sign = if n.n().is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * (2.0 / a).sqrt() * n.nf() * PI / a
}

/// 2 t0/(π² n²): short-time results only hold well below this.
pub fn validity_horizon(n: LeftMode, config: &TrapConfig) -> f64 {
    2.0 * config.t0() / (PI * PI * n.nf().powi(2))
}

/// G_free(dx, t) = √(M/2πit) exp[iM dx²/2t], with √(1/i) = e^{−iπ/4}.
pub fn free_propagator(dx: f64, t: f64, mass: f64) -> Result<num_complex::Complex64> {
    if !(t > 0.0) {
        return Err(Error::param(format!("propagator needs t > 0, got {t}")));
    }
    let modulus = (mass / (2.0 * PI * t)).sqrt();
    let phase = mass * dx * dx / (2.0 * t) - PI / 4.0;
    Ok(num_complex::Complex64::from_polar(modulus, phase))
}

/// Per-mode and optional N-particle Zeno times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZenoTimes {
    pub t_z: f64,
    pub t_z_n: Option<f64>,
}

/// t_Z(n) = 3^{2/3} M a² / (2^{2/3} π n^{4/3}).
pub fn zeno_time(n: LeftMode, config: &TrapConfig) -> ZenoTimes {
    let t_z = 3f64.powf(2.0 / 3.0) * config.t0() / (2f64.powf(2.0 / 3.0) * PI * n.nf().powf(4.0 / 3.0));
    ZenoTimes { t_z, t_z_n: None }
}

/// S(t) = 1 − (t/t_Z)^{3/2}, returned unclamped.
pub fn survival_probability_short(t: f64, n: LeftMode, config: &TrapConfig) -> f64 {
    1.0 - (t / zeno_time(n, config).t_z).powf(1.5)
}

/// P ≈ (1 + S)/2.
pub fn nonescape_from_survival(s: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::param(format!("survival probability must lie in [0, 1], got {s}")));
    }
    Ok(0.5 * (1.0 + s))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum RateLaw {
    /// γ = τ^{1/2} / t_Z^{3/2}
    Anomalous,
    /// γ = τ / t_Z²
    Conventional,
}

/// Decay rate under projective checks every `tau`.
pub fn zeno_rate(tau: f64, t_z: f64, law: RateLaw) -> Result<f64> {
    if !(tau > 0.0 && t_z > 0.0) {
        return Err(Error::param(format!("need tau > 0 and t_Z > 0, got {tau}, {t_z}")));
    }
    Ok(match law {
        RateLaw::Anomalous => tau.sqrt() / t_z.powf(1.5),
        RateLaw::Conventional => tau / (t_z * t_z),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn unit() -> TrapConfig {
        TrapConfig::hard_wall()
    }

    fn n(k: u32) -> LeftMode {
        LeftMode::new(k).unwrap()
    }

    #[test]
    fn eigenmodes() {
        let c = unit();
        assert!((eigenmode(Mode::Left(n(1)), 0.5, &c) - 2f64.sqrt()).abs() < 1e-15);
        assert!(eigenmode(Mode::Left(n(2)), 1.0, &c).abs() < 1e-15);
        assert_eq!(eigenmode(Mode::Right(RightMode::new(3.0).unwrap()), 0.7, &c), 0.0);
        assert_eq!(eigenmode(Mode::Left(n(1)), 1.5, &c), 0.0);
        assert!(LeftMode::new(0).is_err());
        assert!(RightMode::new(-1.0).is_err());
    }

    #[test]
    fn energies() {
        let c = unit();
        assert!((bound_energy(n(1), &c) - 4.934_802_200_544_679).abs() < 1e-12);
        assert!((bound_energy(n(2), &c) / bound_energy(n(1), &c) - 4.0).abs() < 1e-14);
        for k in 1..6 {
            let kk = k as f64 * PI;
            assert!((free_energy(kk, &c) - bound_energy(n(k), &c)).abs() < 1e-12);
        }
    }

    #[test]
    fn horizons() {
        let c = unit();
        assert!((validity_horizon(n(1), &c) - 0.202_642_367_284_675_6).abs() < 1e-12);
        assert!((validity_horizon(n(2), &c) * 4.0 - validity_horizon(n(1), &c)).abs() < 1e-15);
        assert!((validity_horizon(n(4), &c) - 0.012_665).abs() < 1e-5);
    }

    #[test]
    fn propagator_kernel() {
        let g0 = free_propagator(0.0, 0.3, 1.0).unwrap();
        let expect = Complex64::from_polar((1.0 / (2.0 * PI * 0.3)).sqrt(), -PI / 4.0);
        assert!((g0 - expect).norm() < 1e-15);
        for &d in &[0.1, 1.0, 7.5] {
            assert!((free_propagator(d, 0.3, 1.0).unwrap().norm() - g0.norm()).abs() < 1e-14);
        }
        assert!(free_propagator(0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn zeno_times() {
        let c = unit();
        let t1 = zeno_time(n(1), &c).t_z;
        assert!((t1 - 0.417_1).abs() < 1e-4, "{t1}");
        assert!((zeno_time(n(2), &c).t_z / t1 - 2f64.powf(-4.0 / 3.0)).abs() < 1e-14);
        let s = survival_probability_short(0.01, n(1), &c);
        assert!((s - 0.996_29).abs() < 1e-5, "{s}");
        // decreasing in n
        let ts: Vec<f64> = (1..8).map(|k| zeno_time(n(k), &c).t_z).collect();
        assert!(ts.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn rates() {
        let tz = 0.4171;
        assert!((zeno_rate(tz, tz, RateLaw::Anomalous).unwrap() - 1.0 / tz).abs() < 1e-12);
        let g1 = zeno_rate(1e-3, tz, RateLaw::Anomalous).unwrap();
        let g4 = zeno_rate(4e-3, tz, RateLaw::Anomalous).unwrap();
        assert!((g4 / g1 - 2.0).abs() < 1e-12);
        for &tau in &[1e-6, 1e-3, 0.1, 0.4] {
            assert!(
                zeno_rate(tau, tz, RateLaw::Anomalous).unwrap() > zeno_rate(tau, tz, RateLaw::Conventional).unwrap()
            );
        }
        assert!(zeno_rate(0.0, tz, RateLaw::Anomalous).is_err());
    }

    #[test]
    fn nonescape_relation() {
        assert_eq!(nonescape_from_survival(1.0).unwrap(), 1.0);
        let c = unit();
        let t = 0.003;
        let s = survival_probability_short(t, n(1), &c);
        let p = nonescape_from_survival(s).unwrap();
        let x = (t / zeno_time(n(1), &c).t_z).powf(1.5);
        assert!((p - (1.0 - x / 2.0)).abs() < 1e-15);
        assert!(nonescape_from_survival(1.5).is_err());
    }
}
