use num_complex::Complex64;
use proptest::prelude::*;
use zeno_core::experiments::{CurveSpec, Release};
use zeno_core::fit::fit_scale_fixed_exponent;
use zeno_core::manybody::*;
use zeno_core::tdse::{evolve_sampled, Potential, StepSchedule};
use zeno_core::zeno::TdseSettings;
use zeno_core::{make_grid, TrapConfig, WaveFunction};

fn cofactor_det(m: &[Complex64], n: usize) -> Complex64 {
    if n == 1 {
        return m[0];
    }
    let mut det = Complex64::new(0.0, 0.0);
    for col in 0..n {
        let minor: Vec<Complex64> = (1..n)
            .flat_map(|r| (0..n).filter(move |&c| c != col).map(move |c| (r, c)))
            .map(|(r, c)| m[r * n + c])
            .collect();
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        det += m[col] * sign * cofactor_det(&minor, n - 1);
    }
    det
}

proptest! {
    #[test]
    fn pivoted_determinant_matches_cofactors(entries in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16)) {
        // scale rows so the matrix is a contraction in the max-row-sum norm
        let m: Vec<Complex64> = entries.iter().map(|&(re, im)| Complex64::new(re, im) * 0.35).collect();
        let om = OverlapMatrix::from_entries(4, m.clone(), OverlapKind::Plain).unwrap();
        let got = om.determinant().unwrap();
        let want = cofactor_det(&m, 4);
        prop_assert!((got - want).norm() <= 1e-12, "{got} vs {want}");
        prop_assert!((det_probability(&om).unwrap() - want.norm_sqr()).abs() <= 1e-12);
    }
}

fn principal_minors_nonnegative(m: &OverlapMatrix, tol: f64) -> bool {
    let n = m.dim();
    (1u32..(1 << n)).all(|mask| {
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let sub: Vec<Complex64> =
            idx.iter().flat_map(|&r| idx.iter().map(move |&c| (r, c))).map(|(r, c)| m.get(r, c)).collect();
        let d =
            OverlapMatrix::from_entries(idx.len(), sub, OverlapKind::InteriorWeighted).unwrap().determinant().unwrap();
        d.re >= -tol && d.im.abs() <= tol
    })
}

#[test]
fn closed_trap_overlaps_are_unitary() {
    let c = TrapConfig::hard_wall();
    let settings = TdseSettings { grid_points: 6001, schedule: StepSchedule::uniform(1e-5) };
    let r = Release::prepare(&c, 4, settings).unwrap();
    let closed = Potential::trap(*r.open.grid(), &c).unwrap();
    let init = r.initial_states();
    let mut later = Vec::new();
    for s in &init {
        evolve_sampled(s, &closed, &[0.05], settings.schedule, |_, p| {
            later.push(p.clone());
            Ok(())
        })
        .unwrap();
    }
    let plain0 = overlap_matrix(&init, &init, OverlapKind::Plain, &c).unwrap();
    for i in 0..4 {
        for k in 0..4 {
            let want = if i == k { 1.0 } else { 0.0 };
            assert!((plain0.get(i, k) - want).norm() <= 1e-10);
        }
    }
    let plain = overlap_matrix(&init, &later, OverlapKind::Plain, &c).unwrap();
    assert!((det_probability(&plain).unwrap() - 1.0).abs() <= 1e-9);
}

#[test]
fn fermionized_curves_follow_the_combined_zeno_time() {
    let c = TrapConfig::reference();
    let settings = TdseSettings::reference(&c);
    let spec = CurveSpec::reference(1.0);
    let release = Release::prepare(&c, 4, settings).unwrap();
    let evolved = release.evolve(&spec.times).unwrap();
    let init = release.initial_states();
    let (lo, hi) = spec.fit_window;
    for n in 1..=4usize {
        let mut ts = Vec::new();
        let mut loss = Vec::new();
        for (j, &t) in spec.times.iter().enumerate() {
            let now: Vec<WaveFunction> = evolved.states[..n].iter().map(|s| s[j].clone()).collect();
            let (s, _) = fermionized_probabilities(&init[..n], &now, &c).unwrap();
            let inner = overlap_matrix(&init[..n], &now, OverlapKind::InteriorWeighted, &c).unwrap();
            assert!(principal_minors_nonnegative(&inner, 1e-12));
            if n == 1 {
                let s1 = init[0].inner(&now[0]).unwrap().norm_sqr();
                let p1 = zeno_core::tdse::nonescape_numeric(&now[0], &c);
                let plain = overlap_matrix(&init[..1], &now, OverlapKind::Plain, &c).unwrap();
                assert!((det_probability(&plain).unwrap() - s1).abs() <= 1e-10);
                assert!((det_probability(&inner).unwrap() - p1).abs() <= 1e-10);
            }
            if t >= lo * (1.0 - 1e-9) && t <= hi * (1.0 + 1e-9) {
                ts.push(t);
                loss.push(1.0 - s);
            }
        }
        if n >= 2 {
            let fitted = fit_scale_fixed_exponent(&ts, &loss, 1.5).unwrap();
            let closed = fermionized_zeno_time(n as u32, &c).unwrap();
            assert!((fitted / closed - 1.0).abs() <= 0.03, "N = {n}: {fitted} vs {closed}");
        }
    }
}

#[test]
fn nonescape_dominates_survival_for_a_sharp_edge() {
    let c = TrapConfig::hard_wall();
    let release = Release::prepare(&c, 4, TdseSettings::reference(&c)).unwrap();
    let times = zeno_core::fit::log_spaced(1e-4, 1e-2, 7);
    let evolved = release.evolve(&times).unwrap();
    let init = release.initial_states();
    for n in 1..=4usize {
        for (j, &t) in times.iter().enumerate() {
            let now: Vec<WaveFunction> = evolved.states[..n].iter().map(|s| s[j].clone()).collect();
            let (s, p) = fermionized_probabilities(&init[..n], &now, &c).unwrap();
            assert!(p >= s, "N = {n}, t = {t}: P = {p} < S = {s}");
        }
    }
}

#[test]
fn zeno_time_decreases_with_particle_number() {
    let c = TrapConfig::hard_wall();
    let tz = zeno_core::analytic::zeno_time(zeno_core::analytic::LeftMode::ground(), &c).t_z;
    for n in 1..10 {
        assert!(fermionized_zeno_time(n + 1, &c).unwrap() < fermionized_zeno_time(n, &c).unwrap());
        assert!(boson_zeno_time(tz, n + 1).unwrap() < boson_zeno_time(tz, n).unwrap());
    }
    let g = make_grid(&c, 101).unwrap();
    let a = WaveFunction::from_fn(g, |x| Complex64::new(x.sin(), 0.0));
    let other = make_grid(&c, 103).unwrap();
    let b = WaveFunction::from_fn(other, |x| Complex64::new(x.sin(), 0.0));
    assert!(overlap_matrix(std::slice::from_ref(&a), &[b], OverlapKind::Plain, &c).is_err());
    assert!(overlap_matrix(&[a.clone(), a.clone()], &[a], OverlapKind::Plain, &c).is_err());
}
