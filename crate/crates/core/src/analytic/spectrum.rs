//! Momentum distribution of escaped atoms and transition probabilities into
//! other trap levels.
//!
//! Both are built from
//!
//! F(k, t) = 2t/(a³ M k²) · |1 − √(iπ)/(2√(Et)) e^{−iEt} Erf(√(−iEt))|²,  E = k²/2M,
//!
//! with √i = e^{iπ/4} and √(−iEt) = e^{−iπ/4}√(Et).

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{free_energy, LeftMode};
use crate::erf::complex_erf;
use crate::error::{Error, Result};
use crate::quadrature::{integrate, Tolerance};
use crate::trap::TrapConfig;

/// Below this value of E·t the bracket is evaluated from its power series.
pub const SERIES_SWITCH: f64 = 1e-3;

/// Bracket of F from the error function.
pub fn spectral_bracket_direct(et: f64) -> Result<Complex64> {
    let u = et.sqrt();
    let z = Complex64::from_polar(u, -PI / 4.0);
    let pref = Complex64::from_polar(PI.sqrt() / (2.0 * u), PI / 4.0);
    Ok(Complex64::new(1.0, 0.0) - pref * Complex64::from_polar(1.0, -et) * complex_erf(z)?)
}

/// Bracket of F as Σ_{n≥1} (−1)^{n+1} (iε)ⁿ 4ⁿ n!/(2n+1)!, ε = E t.
///
/// Obtained from 1 − ∫₀¹ e^{−iε(1−s²)} ds; free of the cancellation that
/// the direct form suffers as ε → 0.
pub fn spectral_bracket_series(et: f64) -> Complex64 {
    let step = Complex64::new(0.0, -et);
    let mut term = Complex64::new(0.0, 2.0 * et / 3.0);
    let mut sum = term;
    let mut n = 1.0;
    loop {
        n += 1.0;
        term = term * step * (2.0 / (2.0 * n + 1.0));
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() || n > 400.0 {
            break;
        }
    }
    sum
}

fn bracket_norm_sqr(et: f64) -> Result<f64> {
    Ok(if et < SERIES_SWITCH {
        spectral_bracket_series(et).norm_sqr()
    } else {
        spectral_bracket_direct(et)?.norm_sqr()
    })
}

/// F(k, t).
pub fn spectral_f(k: f64, t: f64, config: &TrapConfig) -> Result<f64> {
    if !(k > 0.0 && t > 0.0) {
        return Err(Error::param(format!("F(k, t) needs k > 0 and t > 0, got k = {k}, t = {t}")));
    }
    let et = free_energy(k, config) * t;
    let a = config.a();
    Ok(2.0 * t / (a.powi(3) * config.mass() * k * k) * bracket_norm_sqr(et)?)
}

/// W_n(k, t) ≈ n² F(k, t).
pub fn escape_spectrum(k: f64, t: f64, n: LeftMode, config: &TrapConfig) -> Result<f64> {
    Ok((n.n() as f64).powi(2) * spectral_f(k, t, config)?)
}

/// W_{m←n}(t) ≈ (π n²/a) F(k_m, t) with k_m = mπ/a.
pub fn transition_probability(m: LeftMode, n: LeftMode, t: f64, config: &TrapConfig) -> Result<f64> {
    if m == n {
        return Err(Error::param("transition m ← n requires m ≠ n; use the survival amplitude"));
    }
    let a = config.a();
    let km = m.n() as f64 * PI / a;
    Ok(PI * (n.n() as f64).powi(2) / a * spectral_f(km, t, config)?)
}

/// ∫₀^∞ W_n(k, t) dk.
///
/// Written in ε = E t, ∫F dk = (√2 t^{3/2} / 2 a³ M^{3/2}) ∫₀^∞ |bracket(ε)|² ε^{−3/2} dε.
/// The ε-integral is done numerically up to ε_max and the tail from the
/// large-ε expansion |bracket|² ≈ 1 − √(π/ε) cos(ε − π/4).
pub fn escape_probability(t: f64, n: LeftMode, config: &TrapConfig) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::param(format!("t must be > 0, got {t}")));
    }
    const EPS_MAX: f64 = 4.0e3;
    let tol = Tolerance { rel: 1e-11, abs: 0.0, max_panels: 1 << 15 };
    // Split at ε = 1: the integrand behaves as ε^{1/2} below and oscillates above.
    let f = |eps: f64| -> f64 {
        if eps <= 0.0 {
            return 0.0;
        }
        bracket_norm_sqr(eps).unwrap_or(f64::NAN) * eps.powf(-1.5)
    };
    let low = integrate(|v: f64| f(v * v) * 2.0 * v, 0.0, 1.0, tol)?.value;
    let high = integrate(f, 1.0, EPS_MAX, tol)?.value;
    if !(low.is_finite() && high.is_finite()) {
        return Err(Error::Range("bracket evaluation failed inside the escape integral".into()));
    }
    // ∫_X^∞ ε^{-3/2} dε = 2/√X; the oscillating correction contributes O(X^{-2}).
    let tail = 2.0 / EPS_MAX.sqrt();
    let j = low + high + tail;
    let a = config.a();
    let nn = (n.n() as f64).powi(2);
    Ok(nn * 2f64.sqrt() * t.powf(1.5) / (2.0 * a.powi(3) * config.mass().powf(1.5)) * j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::zeno_time;

    fn cfg() -> TrapConfig {
        TrapConfig::hard_wall()
    }

    #[test]
    fn branch_consistency() {
        let mut eps = 1e-3;
        while eps <= 10.0 {
            let d = spectral_bracket_direct(eps).unwrap().norm_sqr();
            let s = spectral_bracket_series(eps).norm_sqr();
            assert!(((d - s) / s).abs() < 1e-8, "ε = {eps}: {d} vs {s}");
            eps *= 1.25;
        }
    }

    #[test]
    fn small_et_leading_term() {
        for &eps in &[1e-8, 1e-6, 1e-4] {
            let s = spectral_bracket_series(eps).norm_sqr();
            let lead = 4.0 / 9.0 * eps * eps;
            assert!(((s - lead) / lead).abs() < 0.1 * eps, "{eps}");
        }
    }

    #[test]
    fn large_et_limit() {
        let c = cfg();
        let k = 2000.0;
        for &t in &[1e-3, 1e-2] {
            let f = spectral_f(k, t, &c).unwrap();
            let lim = 2.0 * t / (k * k);
            assert!(((f - lim) / lim).abs() < 0.02);
        }
    }

    #[test]
    fn spectra_ratios() {
        let c = cfg();
        let n1 = LeftMode::new(1).unwrap();
        let n2 = LeftMode::new(2).unwrap();
        for m in [2, 3, 5, 9] {
            let m = LeftMode::new(m).unwrap();
            for &t in &[1e-4, 1e-3, 1e-2] {
                let km = m.n() as f64 * PI;
                let w = transition_probability(m, n1, t, &c).unwrap();
                let wk = escape_spectrum(km, t, n1, &c).unwrap();
                assert!((w / wk - PI).abs() < 1e-12);
                if m != n2 {
                    let w2 = transition_probability(m, n2, t, &c).unwrap();
                    assert!((w2 / w - 4.0).abs() < 1e-12);
                }
            }
        }
        assert!(transition_probability(n1, n1, 1e-3, &c).is_err());
        assert!(spectral_f(0.0, 1e-3, &c).is_err());
    }

    #[test]
    fn integrated_escape_is_half_of_survival_loss() {
        let c = cfg();
        let n1 = LeftMode::ground();
        let t = 1e-3;
        let esc = escape_probability(t, n1, &c).unwrap();
        let half_loss = 0.5 * (t / zeno_time(n1, &c).t_z).powf(1.5);
        assert!(((esc - half_loss) / half_loss).abs() < 0.05, "{esc} vs {half_loss}");
    }
}
