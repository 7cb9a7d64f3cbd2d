use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::grid::WaveFunction;
use crate::series::MomentumSpectrum;
use crate::trap::TrapConfig;

/// Largest tail mass (as a fraction of the exterior norm) left above the mode cut-off.
pub const MAX_TAIL_FRACTION: f64 = 0.01;

/// S = |⟨ψ₀|ψ(t)⟩|².
pub fn survival_numeric(psi0: &WaveFunction, psi_t: &WaveFunction) -> Result<f64> {
    Ok(psi0.inner(psi_t)?.norm_sqr())
}

/// P = ∫₀^a |ψ|² dx, trapezoid with half weight on the edge node.
pub fn nonescape_numeric(psi_t: &WaveFunction, config: &TrapConfig) -> f64 {
    let cut = edge_index(psi_t, config);
    psi_t.inner_interior(psi_t, cut).map(|z| z.re).unwrap_or(f64::NAN)
}

/// Probability current Im[ψ* ∂ₓψ]/M at the grid point nearest `x`.
pub fn current_at(psi_t: &WaveFunction, x: f64, config: &TrapConfig) -> Result<f64> {
    let g = psi_t.grid();
    let i = g.nearest(x);
    if i == 0 || i + 1 >= g.len() {
        return Err(Error::param(format!("current needs an interior point, got x = {x}")));
    }
    let p = psi_t.amplitudes();
    let d = (p[i + 1] - p[i - 1]) / (2.0 * g.dx());
    Ok((p[i].conj() * d).im / config.mass())
}

pub(crate) fn edge_index(psi: &WaveFunction, config: &TrapConfig) -> usize {
    psi.grid().first_at_or_after(config.a())
}

/// X_m = Σ_{j=1}^{N−1} y_j sin(π j m / N) for m = 1..N−1, where y has N+1 entries
/// and its end values are ignored.
pub(crate) fn sine_transform(y: &[Complex64]) -> Vec<Complex64> {
    let n = y.len() - 1;
    if n < 2 {
        return Vec::new();
    }
    let mut buf = vec![Complex64::new(0.0, 0.0); 2 * n];
    for j in 1..n {
        buf[j] = y[j];
        buf[2 * n - j] = -y[j];
    }
    FftPlanner::new().plan_fft_forward(2 * n).process(&mut buf);
    // FFT of the odd extension is −2i X_m
    buf[1..n].iter().map(|z| Complex64::new(0.0, 0.5) * z).collect()
}

/// Projections onto the unit-normalized box modes sin(k_m (x − a)) on [a, L].
fn exterior_modes(psi: &WaveFunction, config: &TrapConfig) -> (f64, Vec<Complex64>) {
    let g = psi.grid();
    let edge = edge_index(psi, config);
    let width = g.x_max() - g.x(edge);
    let scale = (2.0 / width).sqrt() * g.dx();
    let c = sine_transform(&psi.amplitudes()[edge..]).into_iter().map(|z| z * scale).collect();
    (std::f64::consts::PI / width, c)
}

/// Exterior momentum distribution W(k_m) = |c_m|²/Δk, m = 1..m_cut
/// (all resolvable modes when `m_cut` is `None`).
pub fn momentum_spectrum_numeric(
    psi_t: &WaveFunction,
    config: &TrapConfig,
    m_cut: Option<usize>,
) -> Result<MomentumSpectrum> {
    let (dk, c) = exterior_modes(psi_t, config);
    let m_cut = m_cut.unwrap_or(c.len());
    if m_cut == 0 {
        return Err(Error::param("mode cut-off must be ≥ 1"));
    }
    let m_cut = m_cut.min(c.len());
    let total: f64 = c.iter().map(|z| z.norm_sqr()).sum();
    let tail: f64 = c[m_cut..].iter().map(|z| z.norm_sqr()).sum();
    if total > 0.0 && tail > MAX_TAIL_FRACTION * total {
        return Err(Error::param(format!(
            "mode cut-off {m_cut} leaves {:.3}% of the exterior norm in the tail",
            100.0 * tail / total
        )));
    }
    let points = c[..m_cut].iter().enumerate().map(|(i, z)| ((i + 1) as f64 * dk, z.norm_sqr() / dk)).collect();
    Ok(MomentumSpectrum { points, dk: Some(dk) })
}

/// Coefficients of a state in the left/right basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    /// b_n = ⟨φ_n^L|ψ⟩, n = 1..
    pub left: Vec<Complex64>,
    /// (k_m, c_m) with c_m = ⟨φ_{k_m}^R|ψ⟩, m = 1..
    pub right: Vec<(f64, Complex64)>,
}

impl SpectralDecomposition {
    pub fn total(&self) -> f64 {
        self.left.iter().map(|z| z.norm_sqr()).sum::<f64>() + self.right.iter().map(|(_, z)| z.norm_sqr()).sum::<f64>()
    }
}

pub fn decompose(
    psi_t: &WaveFunction,
    config: &TrapConfig,
    n_left_max: usize,
    m_right_max: usize,
) -> Result<SpectralDecomposition> {
    if n_left_max == 0 || m_right_max == 0 {
        return Err(Error::param("decomposition cut-offs must be ≥ 1"));
    }
    let g = psi_t.grid();
    let edge = edge_index(psi_t, config);
    let a_grid = g.x(edge);
    let scale = (2.0 / a_grid).sqrt() * g.dx();
    let left_all = sine_transform(&psi_t.amplitudes()[..=edge]);
    let (dk, right_all) = exterior_modes(psi_t, config);
    if n_left_max > left_all.len() || m_right_max > right_all.len() {
        return Err(Error::param(format!(
            "cut-offs ({n_left_max}, {m_right_max}) exceed the resolvable modes ({}, {})",
            left_all.len(),
            right_all.len()
        )));
    }
    let left = left_all[..n_left_max].iter().map(|z| z * scale).collect();
    let right = right_all[..m_right_max].iter().enumerate().map(|(i, &z)| ((i + 1) as f64 * dk, z)).collect();
    Ok(SpectralDecomposition { left, right })
}
