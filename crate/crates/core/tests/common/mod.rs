//! Arbitrary-precision reference for the complex error function: the
//! Maclaurin series evaluated in 512-bit fixed point.

use num_bigint::BigInt;
use num_complex::Complex64;

const BITS: u32 = 512;

fn fixed_from_f64(v: f64) -> BigInt {
    if v == 0.0 {
        return BigInt::from(0);
    }
    let bits = v.to_bits();
    let sign = if bits >> 63 == 1 { -1 } else { 1 };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
    let m = BigInt::from(mant) * sign;
    let shift = e + BITS as i64;
    if shift >= 0 {
        m << shift as usize
    } else {
        m >> (-shift) as usize
    }
}

fn fixed_to_f64(v: &BigInt) -> f64 {
    let top: BigInt = v >> (BITS - 60) as usize;
    let n = i128::try_from(&top).expect("value fits after scaling");
    n as f64 * 2f64.powi(-60)
}

fn mul(a: &BigInt, b: &BigInt) -> BigInt {
    (a * b) >> BITS as usize
}

fn atan_inv(x: u32) -> BigInt {
    // atan(1/x) = Σ (−1)^k / ((2k+1) x^{2k+1})
    let one = BigInt::from(1) << BITS as usize;
    let x2 = BigInt::from(x) * x;
    let mut power = &one / x;
    let mut sum = power.clone();
    let mut k = 1u32;
    loop {
        power = &power / &x2;
        if power == BigInt::from(0) {
            return sum;
        }
        let term = &power / (2 * k + 1);
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
}

fn two_over_sqrt_pi() -> BigInt {
    let pi: BigInt = atan_inv(5) * 16 - atan_inv(239) * 4;
    let sqrt_pi: BigInt = (pi << BITS as usize).sqrt();
    (BigInt::from(2) << (2 * BITS) as usize) / sqrt_pi
}

pub fn erf_oracle(z: Complex64) -> Complex64 {
    let (x, y) = (fixed_from_f64(z.re), fixed_from_f64(z.im));
    // −z² = (y² − x²) − 2ixy
    let mz2_re: BigInt = mul(&y, &y) - mul(&x, &x);
    let mz2_im: BigInt = BigInt::from(0) - mul(&x, &y) * 2;
    let (mut tr, mut ti) = (x.clone(), y.clone());
    let (mut sr, mut si) = (x, y);
    let zero = BigInt::from(0);
    let mut n = 1u32;
    let min_terms = (z.norm_sqr() as u32) + 10;
    loop {
        let nr = mul(&tr, &mz2_re) - mul(&ti, &mz2_im);
        let ni = mul(&tr, &mz2_im) + mul(&ti, &mz2_re);
        tr = nr / n;
        ti = ni / n;
        sr += &tr / (2 * n + 1);
        si += &ti / (2 * n + 1);
        if n > min_terms && tr == zero && ti == zero {
            break;
        }
        n += 1;
    }
    let c = two_over_sqrt_pi();
    Complex64::new(fixed_to_f64(&mul(&sr, &c)), fixed_to_f64(&mul(&si, &c)))
}
