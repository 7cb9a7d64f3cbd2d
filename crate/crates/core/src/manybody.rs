//! N weakly interacting atoms: condensed bosons by the N^{2/3} scaling of the
//! Zeno time, fermionized bosons by determinants of one-particle overlaps.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{zeno_time, LeftMode};
use crate::error::{Error, Result};
use crate::grid::WaveFunction;
use crate::tdse::nonescape_numeric;
use crate::trap::TrapConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Statistics {
    BosonCondensate,
    /// Strongly repulsive bosons occupying levels 1..N.
    Fermionized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManyBodyConfig {
    n_particles: u32,
    statistics: Statistics,
}

impl ManyBodyConfig {
    pub fn new(n_particles: u32, statistics: Statistics) -> Result<Self> {
        if n_particles == 0 {
            return Err(Error::param("particle number must be ≥ 1"));
        }
        Ok(Self { n_particles, statistics })
    }

    pub fn n_particles(&self) -> u32 {
        self.n_particles
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    /// One-particle levels occupied initially.
    pub fn occupied_levels(&self) -> Vec<LeftMode> {
        match self.statistics {
            Statistics::BosonCondensate => vec![LeftMode::ground()],
            Statistics::Fermionized => (1..=self.n_particles).map(|n| LeftMode::new(n).expect("n ≥ 1")).collect(),
        }
    }

    /// t_Z^(N) for this configuration.
    pub fn zeno_time(&self, config: &TrapConfig) -> Result<f64> {
        match self.statistics {
            Statistics::BosonCondensate => boson_zeno_time(zeno_time(LeftMode::ground(), config).t_z, self.n_particles),
            Statistics::Fermionized => fermionized_zeno_time(self.n_particles, config),
        }
    }
}

/// t_Z / N^{2/3}.
pub fn boson_zeno_time(t_z_single: f64, n_particles: u32) -> Result<f64> {
    if n_particles == 0 {
        return Err(Error::param("particle number must be ≥ 1"));
    }
    if !(t_z_single > 0.0) {
        return Err(Error::param(format!("t_Z must be positive, got {t_z_single}")));
    }
    Ok(t_z_single / (n_particles as f64).powf(2.0 / 3.0))
}

/// [Σ_{n=1}^N t_Z(n)^{−3/2}]^{−2/3}.
pub fn fermionized_zeno_time(n_particles: u32, config: &TrapConfig) -> Result<f64> {
    if n_particles == 0 {
        return Err(Error::param("particle number must be ≥ 1"));
    }
    let sum: f64 = (1..=n_particles).map(|n| zeno_time(LeftMode::new(n).expect("n ≥ 1"), config).t_z.powf(-1.5)).sum();
    Ok(sum.powf(-2.0 / 3.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OverlapKind {
    /// ⟨φ_n(0)|φ_k(t)⟩
    Plain,
    /// ⟨φ_n(t)|P_L|φ_k(t)⟩
    InteriorWeighted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OverlapMatrix {
    n: usize,
    entries: Vec<Complex64>,
    kind: OverlapKind,
}

impl OverlapMatrix {
    /// Row-major N×N entries.
    pub fn from_entries(n: usize, entries: Vec<Complex64>, kind: OverlapKind) -> Result<Self> {
        if n == 0 || entries.len() != n * n {
            return Err(Error::param(format!("{} entries do not form a non-empty {n}×{n} matrix", entries.len())));
        }
        Ok(Self { n, entries, kind })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> OverlapKind {
        self.kind
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.n + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn determinant(&self) -> Result<Complex64> {
        if self.entries.iter().any(|z| z.re.is_nan() || z.im.is_nan()) {
            return Err(Error::param("overlap matrix contains NaN"));
        }
        let n = self.n;
        let mut m = self.entries.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| m[i * n + col].norm().total_cmp(&m[j * n + col].norm()))
                .expect("non-empty range");
            if m[pivot * n + col].norm() == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            if pivot != col {
                for k in 0..n {
                    m.swap(pivot * n + k, col * n + k);
                }
                det = -det;
            }
            let p = m[col * n + col];
            det *= p;
            for row in col + 1..n {
                let f = m[row * n + col] / p;
                for k in col..n {
                    let v = m[col * n + k];
                    m[row * n + k] -= f * v;
                }
            }
        }
        Ok(det)
    }
}

pub fn overlap_matrix(
    states0: &[WaveFunction],
    states_t: &[WaveFunction],
    kind: OverlapKind,
    config: &TrapConfig,
) -> Result<OverlapMatrix> {
    let n = states0.len();
    if n == 0 || states_t.len() != n {
        return Err(Error::param(format!("state lists must be non-empty and equal, got {} and {}", n, states_t.len())));
    }
    for s in states0.iter().chain(states_t) {
        states0[0].check_same_grid(s)?;
    }
    let cut = states0[0].grid().first_at_or_after(config.a());
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for k in 0..n {
            entries.push(match kind {
                OverlapKind::Plain => states0[i].inner(&states_t[k])?,
                OverlapKind::InteriorWeighted => states_t[i].inner_interior(&states_t[k], cut)?,
            });
        }
    }
    OverlapMatrix::from_entries(n, entries, kind)
}

/// S^(N) = |det Plain|²; P^(N) = det InteriorWeighted.
///
/// The interior matrix is the Gram matrix of the projected orbitals P_L φ_k,
/// so its determinant is already the probability that all N atoms are inside;
/// for N = 1 it reduces to ⟨φ|P_L|φ⟩.
pub fn det_probability(matrix: &OverlapMatrix) -> Result<f64> {
    let det = matrix.determinant()?;
    Ok(match matrix.kind {
        OverlapKind::Plain => det.norm_sqr(),
        OverlapKind::InteriorWeighted => det.re,
    })
}

/// (S^(N), P^(N)) of fermionized atoms from their evolved orbitals.
pub fn fermionized_probabilities(
    states0: &[WaveFunction],
    states_t: &[WaveFunction],
    config: &TrapConfig,
) -> Result<(f64, f64)> {
    if states0.len() == 1 {
        let s = states0[0].inner(&states_t[0])?.norm_sqr();
        return Ok((s, nonescape_numeric(&states_t[0], config)));
    }
    let s = det_probability(&overlap_matrix(states0, states_t, OverlapKind::Plain, config)?)?;
    let p = det_probability(&overlap_matrix(states0, states_t, OverlapKind::InteriorWeighted, config)?)?;
    Ok((s, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaling_laws() {
        assert_eq!(boson_zeno_time(0.4171, 1).unwrap(), 0.4171);
        assert!((boson_zeno_time(0.4171, 8).unwrap() - 0.4171 / 4.0).abs() < 1e-15);
        let tz = zeno_time(LeftMode::ground(), &TrapConfig::hard_wall()).t_z;
        assert!((boson_zeno_time(tz, 4).unwrap() - 0.165_528).abs() < 1e-6);
        assert!(boson_zeno_time(0.4171, 0).is_err());
        let c = TrapConfig::hard_wall();
        let t1 = fermionized_zeno_time(1, &c).unwrap();
        assert!((t1 - zeno_time(LeftMode::ground(), &c).t_z).abs() < 1e-15);
        let t4 = fermionized_zeno_time(4, &c).unwrap();
        assert!((t4 - 0.0432).abs() < 1e-4, "{t4}");
        for n in 1..7 {
            let sq: f64 = (1..=n).map(|k| (k * k) as f64).sum();
            let alt = t1 * sq.powf(-2.0 / 3.0);
            assert!((fermionized_zeno_time(n, &c).unwrap() - alt).abs() < 1e-14);
        }
    }

    #[test]
    fn determinant_basics() {
        let id = OverlapMatrix::from_entries(
            2,
            vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
            ],
            OverlapKind::Plain,
        )
        .unwrap();
        assert_eq!(det_probability(&id).unwrap(), 1.0);
        let swap = OverlapMatrix::from_entries(
            2,
            vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(2.0, 0.0),
                Complex64::new(3.0, 0.0),
                Complex64::new(1.0, 0.0),
            ],
            OverlapKind::Plain,
        )
        .unwrap();
        assert!((swap.determinant().unwrap() - Complex64::new(-6.0, 0.0)).norm() < 1e-15);
        let nan = OverlapMatrix::from_entries(1, vec![Complex64::new(f64::NAN, 0.0)], OverlapKind::Plain).unwrap();
        assert!(det_probability(&nan).is_err());
        assert!(OverlapMatrix::from_entries(2, vec![Complex64::new(1.0, 0.0)], OverlapKind::Plain).is_err());
    }
}
