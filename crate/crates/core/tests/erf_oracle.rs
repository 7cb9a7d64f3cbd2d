//! complex_erf against the arbitrary-precision series.

use num_complex::Complex64;
use proptest::prelude::*;
use zeno_core::erf::complex_erf;

mod common;
use common::erf_oracle;

fn rel_err(got: Complex64, want: Complex64) -> f64 {
    (got - want).norm() / want.norm().max(1.0)
}

#[test]
fn oracle_sanity() {
    let v = erf_oracle(Complex64::new(1.0, 0.0));
    assert!((v.re - 0.842_700_792_949_714_9).abs() < 1e-16);
    let w = erf_oracle(Complex64::new(1.0, 1.0) / 2f64.sqrt());
    assert!((w - Complex64::new(0.969_264_211_944_215_9, 0.474_147_636_640_994_25)).norm() < 1e-15);
}

#[test]
fn diagonal_ray_to_radius_eight() {
    let dir = Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4);
    let mut worst: f64 = 0.0;
    for i in 1..=160 {
        let z = dir * (i as f64 * 0.05);
        let e = rel_err(complex_erf(z).unwrap(), erf_oracle(z));
        worst = worst.max(e);
    }
    assert!(worst <= 1e-12, "worst relative error {worst:e}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn random_points(r in 0.0f64..6.0, theta in -std::f64::consts::PI..std::f64::consts::PI) {
        let z = Complex64::from_polar(r, theta);
        prop_assume!(z.im * z.im - z.re * z.re < 30.0);
        let e = rel_err(complex_erf(z).unwrap(), erf_oracle(z));
        prop_assert!(e <= 1e-12, "z = {z}: {e:e}");
    }
}
