//! Uniform spatial grid on [0, L] and complex wavefunctions sampled on it.
//!
//! All quadratures are trapezoidal. Because the endpoint amplitudes are pinned
//! to zero, the trapezoid and rectangle rules coincide for full-range integrals.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::trap::TrapConfig;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    x_max: f64,
    n_points: usize,
}

impl Grid1D {
    pub fn new(x_max: f64, n_points: usize) -> Result<Self> {
        if n_points < 3 {
            return Err(Error::param(format!("grid needs at least 3 points, got {n_points}")));
        }
        if !(x_max.is_finite() && x_max > 0.0) {
            return Err(Error::param(format!("grid length must be finite and positive, got {x_max}")));
        }
        Ok(Self { x_max, n_points })
    }

    pub fn x_min(&self) -> f64 {
        0.0
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        self.x_max / (self.n_points - 1) as f64
    }

    /// Grid point `i`; the last point is exactly `x_max`.
    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.x_max
        } else {
            i as f64 * self.dx()
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.x(i))
    }

    /// Index of the grid point nearest to `x` (clamped to the grid).
    pub fn nearest(&self, x: f64) -> usize {
        let i = (x / self.dx()).round();
        (i.max(0.0) as usize).min(self.n_points - 1)
    }

    /// Index of the first grid point with x_i ≥ x (within round-off).
    pub fn first_at_or_after(&self, x: f64) -> usize {
        let r = x / self.dx();
        let i = if (r - r.round()).abs() < 1e-9 { r.round() } else { r.ceil() };
        (i.max(0.0) as usize).min(self.n_points - 1)
    }
}

/// Grid spanning [0, L] for the given trap.
pub fn make_grid(config: &TrapConfig, n_points: usize) -> Result<Grid1D> {
    let grid = Grid1D::new(config.box_length(), n_points)?;
    let i = grid.nearest(config.a());
    let off = (grid.x(i) - config.a()).abs();
    if off > 1e-9 * grid.dx() {
        log::warn!(
            "trap edge a = {} is not a grid node (nearest x = {}, offset {:.3} dx)",
            config.a(),
            grid.x(i),
            off / grid.dx()
        );
    }
    Ok(grid)
}

/// Complex amplitudes on a grid with Dirichlet endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    grid: Grid1D,
    amplitudes: Vec<Complex64>,
    norm_sq: f64,
}

impl WaveFunction {
    /// Fails if the length does not match the grid or the endpoint values are non-zero.
    pub fn new(grid: Grid1D, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} amplitudes for a {}-point grid",
                amplitudes.len(),
                grid.len()
            )));
        }
        let last = amplitudes.len() - 1;
        if amplitudes[0] != Complex64::new(0.0, 0.0) || amplitudes[last] != Complex64::new(0.0, 0.0) {
            return Err(Error::param("wavefunction must vanish at x = 0 and x = L"));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::param("wavefunction contains non-finite amplitudes"));
        }
        Ok(Self::from_parts(grid, amplitudes))
    }

    /// Samples `f` at the interior points; the endpoints are set to zero.
    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> Complex64) -> Self {
        let n = grid.len();
        let amplitudes =
            (0..n).map(|i| if i == 0 || i + 1 == n { Complex64::new(0.0, 0.0) } else { f(grid.x(i)) }).collect();
        Self::from_parts(grid, amplitudes)
    }

    pub(crate) fn from_parts(grid: Grid1D, amplitudes: Vec<Complex64>) -> Self {
        let norm_sq = squared_norm(&amplitudes, grid.dx());
        Self { grid, amplitudes, norm_sq }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    /// Stored ∫|ψ|² dx.
    pub fn norm_sq(&self) -> f64 {
        self.norm_sq
    }

    pub fn recompute_norm_sq(&self) -> f64 {
        squared_norm(&self.amplitudes, self.grid.dx())
    }

    pub fn check_same_grid(&self, other: &WaveFunction) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(format!("{:?} vs {:?}", self.grid, other.grid)));
        }
        Ok(())
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &WaveFunction) -> Result<Complex64> {
        self.check_same_grid(other)?;
        Ok(inner_slices(&self.amplitudes, &other.amplitudes, self.grid.dx()))
    }

    /// ⟨self|P_[0,x_cut]|other⟩ with trapezoid weight ½ on the cut node.
    pub fn inner_interior(&self, other: &WaveFunction, cut: usize) -> Result<Complex64> {
        self.check_same_grid(other)?;
        let dx = self.grid.dx();
        let cut = cut.min(self.grid.len() - 1);
        let head = inner_slices(&self.amplitudes[..cut], &other.amplitudes[..cut], dx);
        Ok(head + self.amplitudes[cut].conj() * other.amplitudes[cut] * (0.5 * dx))
    }

    pub fn scaled(&self, c: Complex64) -> WaveFunction {
        let amps = self.amplitudes.iter().map(|z| z * c).collect();
        WaveFunction::from_parts(self.grid, amps)
    }

    /// self − other.
    pub fn minus(&self, other: &WaveFunction) -> Result<WaveFunction> {
        self.check_same_grid(other)?;
        let amps = self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a - b).collect();
        Ok(WaveFunction::from_parts(self.grid, amps))
    }
}

pub fn normalize(psi: &WaveFunction) -> Result<WaveFunction> {
    let n = psi.recompute_norm_sq();
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::param("cannot normalize a zero-norm wavefunction"));
    }
    Ok(psi.scaled(Complex64::new(1.0 / n.sqrt(), 0.0)))
}

pub(crate) fn squared_norm(amps: &[Complex64], dx: f64) -> f64 {
    amps.iter().map(|z| z.norm_sqr()).sum::<f64>() * dx
}

pub(crate) fn inner_slices(f: &[Complex64], g: &[Complex64], dx: f64) -> Complex64 {
    f.iter().zip(g).map(|(a, b)| a.conj() * b).sum::<Complex64>() * dx
}
