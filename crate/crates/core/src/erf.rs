//! Error function of a complex argument.
//!
//! Inside |z|² ≤ 36 (and along the imaginary-axis band x² ≤ 18) the Maclaurin
//! series is summed in double-double arithmetic, which absorbs the up to e^{36}
//! cancellation between terms. Elsewhere erfc is evaluated from its Laplace
//! continued fraction, which converges quickly once Re z > 4.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        let (p, pe) = two_prod(q1, b);
        let (s, mut e) = two_sum(self.hi, -p);
        e -= pe;
        e += self.lo;
        let q2 = (s + e) / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (hi, lo) = quick_two_sum(s, e + self.lo + b.lo);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let (hi, lo) = quick_two_sum(p, e + self.hi * b.lo + self.lo * b.hi);
        Dd { hi, lo }
    }
}

#[derive(Debug, Clone, Copy)]
struct CDd {
    re: Dd,
    im: Dd,
}

impl CDd {
    fn from(z: Complex64) -> Self {
        CDd { re: Dd::from(z.re), im: Dd::from(z.im) }
    }

    fn mul(self, b: CDd) -> CDd {
        CDd { re: self.re * b.re - self.im * b.im, im: self.re * b.im + self.im * b.re }
    }

    fn add(self, b: CDd) -> CDd {
        CDd { re: self.re + b.re, im: self.im + b.im }
    }

    fn div_f64(self, d: f64) -> CDd {
        CDd { re: self.re.div_f64(d), im: self.im.div_f64(d) }
    }

    fn scale(self, c: Dd) -> CDd {
        CDd { re: self.re * c, im: self.im * c }
    }

    fn approx_norm(&self) -> f64 {
        self.re.hi.hypot(self.im.hi)
    }

    fn to_complex(self) -> Complex64 {
        Complex64::new(self.re.hi + self.re.lo, self.im.hi + self.im.lo)
    }
}

const TWO_OVER_SQRT_PI: Dd = Dd { hi: std::f64::consts::FRAC_2_SQRT_PI, lo: 1.533_545_961_316_588e-17 };

/// Largest exponent accepted before the result (or its intermediate terms) overflows.
const MAX_EXPONENT: f64 = 700.0;

/// Maclaurin series (2/√π) Σ (−1)ⁿ z^{2n+1} / (n! (2n+1)), double-double accumulation.
fn erf_series(z: Complex64) -> Complex64 {
    let zz = CDd::from(z);
    let minus_z2 = zz.mul(zz);
    let minus_z2 = CDd { re: -minus_z2.re, im: -minus_z2.im };
    let mut term = zz;
    let mut sum = zz;
    let peak = z.norm_sqr();
    let mut n = 1u32;
    loop {
        term = term.mul(minus_z2).div_f64(n as f64);
        let contrib = term.div_f64((2 * n + 1) as f64);
        sum = sum.add(contrib);
        if (n as f64) > peak && contrib.approx_norm() <= 1e-34 * sum.approx_norm() {
            break;
        }
        if n > 100_000 {
            break;
        }
        n += 1;
    }
    sum.scale(TWO_OVER_SQRT_PI).to_complex()
}

/// erfc(z) = e^{−z²}/(√π) · 1/(z + ½/(z + 1/(z + 3/2/(z + …)))), for Re z > 0.
fn erfc_continued_fraction(z: Complex64) -> Result<Complex64> {
    const TINY: f64 = 1e-300;
    let mut f = z;
    if f.norm() == 0.0 {
        f = Complex64::new(TINY, 0.0);
    }
    let mut c = f;
    let mut d = Complex64::new(0.0, 0.0);
    for j in 1..20_000 {
        let aj = 0.5 * j as f64;
        d = z + d * aj;
        if d.norm() == 0.0 {
            d = Complex64::new(TINY, 0.0);
        }
        d = d.inv();
        c = z + c.inv() * aj;
        if c.norm() == 0.0 {
            c = Complex64::new(TINY, 0.0);
        }
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            return Ok((-z * z).exp() / (f * PI.sqrt()));
        }
    }
    Err(Error::NoConvergence { what: "erfc continued fraction", detail: format!("z = {z}") })
}

fn erf_first_quadrant(z: Complex64) -> Result<Complex64> {
    let x2 = z.re * z.re;
    let y2 = z.im * z.im;
    let r2 = x2 + y2;
    if r2 <= 36.0 || x2 <= 18.0 {
        if r2 > MAX_EXPONENT {
            return Err(Error::Range(format!("erf({z}) overflows")));
        }
        Ok(erf_series(z))
    } else {
        if y2 - x2 > MAX_EXPONENT {
            return Err(Error::Range(format!("erf({z}) overflows")));
        }
        Ok(Complex64::new(1.0, 0.0) - erfc_continued_fraction(z)?)
    }
}

/// Erf(z) = (2/√π) ∫₀^z e^{−s²} ds.
///
/// Odd and conjugation symmetry hold exactly because the value is always
/// computed in the first quadrant and mapped back.
pub fn complex_erf(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Range(format!("erf of non-finite argument {z}")));
    }
    let flip_sign = z.re < 0.0 || (z.re == 0.0 && z.im < 0.0);
    let w = if flip_sign { -z } else { z };
    let conj = w.im < 0.0;
    let w = if conj { w.conj() } else { w };
    let mut v = erf_first_quadrant(w)?;
    if conj {
        v = v.conj();
    }
    if flip_sign {
        v = -v;
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(complex_erf(Complex64::new(0.0, 0.0)).unwrap(), Complex64::new(0.0, 0.0));
        let e1 = complex_erf(Complex64::new(1.0, 0.0)).unwrap();
        assert!((e1.re - 0.842_700_792_949_714_9).abs() < 1e-15 && e1.im == 0.0);
        let z = Complex64::new(1.0, 1.0) / 2f64.sqrt();
        let v = complex_erf(z).unwrap();
        let want = Complex64::new(0.969_264_211_944_215_9, 0.474_147_636_640_994_25);
        assert!((v - want).norm() < 1e-15 * want.norm());
    }

    #[test]
    fn large_real_axis_approaches_one() {
        let v = complex_erf(Complex64::new(7.0, 0.0)).unwrap();
        assert!((v.re - 1.0).abs() < 1e-15);
        let v = complex_erf(Complex64::new(-30.0, 0.1)).unwrap();
        assert!((v + 1.0).norm() < 1e-15);
    }

    #[test]
    fn branches_agree_at_switch() {
        // Points just on either side of the series / continued-fraction boundary.
        for &(x, y) in &[(4.3, 4.1), (4.25, 4.25), (4.5, 4.0), (5.0, 3.4), (6.5, 1.0)] {
            let z = Complex64::new(x, y);
            let s = erf_series(z);
            let c = Complex64::new(1.0, 0.0) - erfc_continued_fraction(z).unwrap();
            assert!((s - c).norm() < 1e-13 * c.norm(), "{z}: {s} vs {c}");
        }
    }

    #[test]
    fn overflow_rejected() {
        assert!(matches!(complex_erf(Complex64::new(0.1, 40.0)), Err(Error::Range(_))));
        assert!(matches!(complex_erf(Complex64::new(5.0, 30.0)), Err(Error::Range(_))));
        assert!(complex_erf(Complex64::new(f64::NAN, 0.0)).is_err());
        // Large but representable.
        assert!(complex_erf(Complex64::new(0.5, 20.0)).unwrap().im > 1e150);
    }
}
