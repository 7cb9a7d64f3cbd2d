//! Composite Gauss–Legendre quadrature with panel doubling.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Nodes per panel.
pub const ORDER: usize = 20;

/// Values that can be integrated: a real vector space with a norm.
pub trait Integrand: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl Integrand for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Integrand for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Gauss–Legendre nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on P_n from the Chebyshev-like initial guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, z);
                dp = d;
                let dz = p / d;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, z);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Single-panel rule on [a, b].
    pub fn integrate<T: Integrand>(&self, f: &impl Fn(f64) -> T, a: f64, b: f64) -> T {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let mut acc = T::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(mid + half * x) * (w * half);
        }
        acc
    }

    /// `panels` equal panels on [a, b].
    pub fn composite<T: Integrand>(&self, f: &impl Fn(f64) -> T, a: f64, b: f64, panels: usize) -> T {
        let h = (b - a) / panels as f64;
        (0..panels).fold(T::zero(), |acc, p| {
            let lo = a + p as f64 * h;
            let hi = if p + 1 == panels { b } else { lo + h };
            acc + self.integrate(f, lo, hi)
        })
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

pub fn default_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(ORDER))
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub rel: f64,
    /// Absolute floor, for integrals that legitimately vanish.
    pub abs: f64,
    pub max_panels: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { rel: 1e-10, abs: 0.0, max_panels: 1 << 14 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
    pub panels: usize,
}

/// Doubles the number of equal panels until two successive estimates agree.
pub fn integrate<T: Integrand>(f: impl Fn(f64) -> T, a: f64, b: f64, tol: Tolerance) -> Result<Estimate<T>> {
    let rule = default_rule();
    let mut panels = 1;
    let mut prev = rule.composite(&f, a, b, panels);
    loop {
        panels *= 2;
        let cur = rule.composite(&f, a, b, panels);
        let err = (cur - prev).magnitude();
        if err <= tol.rel * cur.magnitude() || err <= tol.abs {
            return Ok(Estimate { value: cur, error: err, panels });
        }
        if panels >= tol.max_panels {
            return Err(Error::NoConvergence {
                what: "Gauss-Legendre quadrature",
                detail: format!("difference {err:.3e} at {panels} panels (|I| = {:.3e})", cur.magnitude()),
            });
        }
        prev = cur;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two_and_polynomials_exact() {
        for n in [1, 2, 5, 20, 33] {
            let r = GaussLegendre::new(n);
            let s: f64 = r.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n}");
            // exact for degree 2n-1
            let deg = 2 * n - 1;
            let got = r.integrate(&|x: f64| x.powi(deg as i32 - 1), 0.0, 1.0);
            assert!((got - 1.0 / deg as f64).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn adaptive_handles_oscillation() {
        let est = integrate(|x: f64| Complex64::new(0.0, 200.0 * x).exp(), 0.0, 1.0, Tolerance::default()).unwrap();
        let exact = (Complex64::new(0.0, 200.0).exp() - 1.0) / Complex64::new(0.0, 200.0);
        assert!((est.value - exact).norm() < 1e-12);
    }

    #[test]
    fn reports_non_convergence() {
        let tol = Tolerance { max_panels: 4, ..Default::default() };
        let r = integrate(|x: f64| (1.0 / x.max(1e-300)).sin(), 0.0, 1.0, tol);
        assert!(matches!(r, Err(Error::NoConvergence { .. })));
    }
}
