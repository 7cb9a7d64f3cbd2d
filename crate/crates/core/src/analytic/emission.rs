//! The wave emitted from x = a after the right wall is removed, and the
//! survival amplitude built from its first-exit / last-entry decomposition.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{bound_energy, boundary_slope, validity_horizon, LeftMode};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, Tolerance};
use crate::trap::TrapConfig;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// ∫₀ᵗ G_free(d, s) e^{iEs} ds along a contour that leaves s = 0 into the
/// lower half plane, where e^{iMd²/2s} decays instead of oscillating.
///
/// Path: s(λ) = t(λ − iλ(1 − λ)), λ = v², so the s^{−1/2} endpoint factor is
/// cancelled by ds = 2v dλ/dv.
fn emitted_kernel_integral(d: f64, t: f64, energy: f64, mass: f64) -> Result<Complex64> {
    let pref = (mass / (2.0 * PI)).sqrt();
    let alpha = 0.5 * mass * d * d;
    let f = |v: f64| {
        let lam = v * v;
        let s = Complex64::new(t * lam, -t * lam * (1.0 - lam));
        let ds_dv = Complex64::new(t, -t * (1.0 - 2.0 * lam)) * (2.0 * v);
        let g = pref / (I * s).sqrt() * (I * alpha / s).exp();
        g * (I * energy * s).exp() * ds_dv
    };
    // |∫| at d = 0 is about 2√t·pref; use it as the absolute error scale.
    let scale = 2.0 * t.sqrt() * pref;
    let tol = Tolerance { rel: 1e-10, abs: 1e-12 * scale, max_panels: 1 << 14 };
    let est = integrate(f, 0.0, 1.0, tol)?;
    if est.error > 1e-8 * scale {
        return Err(Error::NoConvergence {
            what: "emitted-wave quadrature",
            detail: format!("error {:.3e} at x − a = {d}, t = {t}", est.error),
        });
    }
    Ok(est.value)
}

/// δψ(x, t) = −(i/2M) φ_n'(a) ∫₀ᵗ dt₁ G_free(x − a, t − t₁) e^{−iE_n t₁}.
///
/// The overall sign is the one for which the emitted wave carries norm out of
/// the trap, i.e. 2 Re⟨φ_n(t)|δψ⟩ = −⟨δψ|δψ⟩.
pub fn delta_psi(x: f64, t: f64, n: LeftMode, config: &TrapConfig) -> Result<Complex64> {
    if x < 0.0 || !x.is_finite() {
        return Err(Error::param(format!("x must be ≥ 0, got {x}")));
    }
    if !(t > 0.0) {
        return Err(Error::param(format!("t must be > 0, got {t}")));
    }
    let m = config.mass();
    let e = bound_energy(n, config);
    let k = emitted_kernel_integral(x - config.a(), t, e, m)?;
    Ok(-I / (2.0 * m) * boundary_slope(n, config) * (-I * e * t).exp() * k)
}

/// δψ on a set of points, evaluated in parallel.
pub fn delta_psi_profile(xs: &[f64], t: f64, n: LeftMode, config: &TrapConfig) -> Result<Vec<Complex64>> {
    xs.par_iter().map(|&x| delta_psi(x, t, n, config)).collect()
}

/// A^{n←n}(t) split into the closed-trap part and the boundary (escape) term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurvivalAmplitude {
    /// 1 − iE_n t + boundary term.
    pub value: Complex64,
    pub t: f64,
    pub n: LeftMode,
    pub boundary: Complex64,
    pub energy: f64,
}

impl SurvivalAmplitude {
    fn new(t: f64, n: LeftMode, energy: f64, boundary: Complex64) -> Self {
        let value = Complex64::new(1.0, -energy * t) + boundary;
        Self { value, t, n, boundary, energy }
    }

    /// e^{−iE_n t} + boundary term; keeps the exact closed-trap phase.
    pub fn with_closed_trap_phase(&self) -> Complex64 {
        (-I * self.energy * self.t).exp() + self.boundary
    }

    pub fn probability(&self) -> f64 {
        self.value.norm_sqr()
    }
}

fn check_window(t: f64, n: LeftMode, config: &TrapConfig) -> Result<()> {
    let horizon = validity_horizon(n, config);
    if !(t >= 0.0) || t > horizon {
        return Err(Error::Validity { t, horizon });
    }
    Ok(())
}

/// Boundary term of the survival amplitude by double quadrature:
///
/// −(2M)^{−2} |φ_n'(a)|² ∫₀ᵗ dt₂ e^{−iE(t−t₂)} ∫₀^{t₂} dt₁ G_free(0, t₂−t₁) e^{−iE t₁}.
///
/// With t₂ = w², t₂ − t₁ = (w r)² both integrands are smooth on [0, √t] × [0, 1].
pub fn survival_amplitude_integral(t: f64, n: LeftMode, config: &TrapConfig) -> Result<SurvivalAmplitude> {
    check_window(t, n, config)?;
    let e = bound_energy(n, config);
    if t == 0.0 {
        return Ok(SurvivalAmplitude::new(0.0, n, e, Complex64::new(0.0, 0.0)));
    }
    let m = config.mass();
    let slope = boundary_slope(n, config);
    let tol = Tolerance { rel: 1e-12, abs: 0.0, max_panels: 1 << 12 };
    let inner =
        |w: f64| -> Result<Complex64> { Ok(integrate(|r: f64| (I * e * w * w * r * r).exp(), 0.0, 1.0, tol)?.value) };
    // Collect inner failures instead of panicking inside the outer closure.
    let failure = std::cell::Cell::new(None::<Error>);
    let outer = integrate(
        |w: f64| match inner(w) {
            Ok(v) => v * (2.0 * w * w),
            Err(err) => {
                failure.set(Some(err));
                Complex64::new(0.0, 0.0)
            }
        },
        0.0,
        t.sqrt(),
        Tolerance { rel: 1e-12, abs: 0.0, max_panels: 1 << 12 },
    )?;
    if let Some(err) = failure.take() {
        return Err(err);
    }
    let kernel = Complex64::from_polar((m / (2.0 * PI)).sqrt(), -PI / 4.0);
    let boundary = -(slope * slope) / (2.0 * m * m) * kernel * (-I * e * t).exp() * outer.value;
    Ok(SurvivalAmplitude::new(t, n, e, boundary))
}

/// A ≈ 1 − iE_n t − (2^{1/2} n² π^{3/2} / 3 M^{3/2} a³) e^{−iπ/4} t^{3/2}.
pub fn survival_amplitude_short(t: f64, n: LeftMode, config: &TrapConfig) -> SurvivalAmplitude {
    let e = bound_energy(n, config);
    let a = config.a();
    let nn = n.n() as f64;
    let c = 2f64.sqrt() * nn * nn * PI.powf(1.5) / (3.0 * config.mass().powf(1.5) * a.powi(3));
    let boundary = -Complex64::from_polar(c, -PI / 4.0) * t.max(0.0).powf(1.5);
    SurvivalAmplitude::new(t, n, e, boundary)
}
