use hyperloc::geometry::{
    radial_schrodinger_residual, BallGrid, RadialCoord, RadialGrid, RadialInput, Space,
};
use hyperloc::helmholtz::*;
use hyperloc::specfun::{bessel_j, harmonic_dimension, real_harmonic, SphereQuadrature};
use hyperloc::Error;
use proptest::prelude::*;
use std::f64::consts::PI;

const H: ModeFamily = ModeFamily::Helmholtz;

#[test]
fn every_mode_passes_its_residual_oracle() {
    let grid = RadialGrid::uniform(RadialCoord::Areal, 0.05, 30.0, 600).unwrap();
    for d in 2..=5usize {
        let flat = Space::euclidean(d).unwrap();
        for l in 0..=6 {
            let p = ModeProfile::new(d, H, l).unwrap();
            let res = radial_schrodinger_residual(&flat, l, &|_| 0.0, 1.0, RadialInput::Analytic(&p), &grid).unwrap();
            assert!(res.relative_sup <= 1e-6, "helmholtz d={d} l={l}: {:e}", res.relative_sup);
            for alpha in [0.5, 1.0, 3.0] {
                let p = ModeProfile::new(d, ModeFamily::CoulombZeroEnergy { alpha }, l).unwrap();
                let v = move |r: f64| -alpha / r;
                let res = radial_schrodinger_residual(&flat, l, &v, 0.0, RadialInput::Analytic(&p), &grid).unwrap();
                assert!(res.relative_sup <= 1e-6, "coulomb d={d} l={l} a={alpha}: {:e}", res.relative_sup);
            }
        }
    }
}

#[test]
fn mode_parity_follows_degree() {
    for l in 0..=5 {
        for m in 1..=harmonic_dimension(3, l) {
            let md = bessel_mode(3, H, l, m).unwrap();
            let x = [0.4, -1.1, 0.7];
            let a = md.eval(&x).unwrap();
            let b = md.eval(&[-0.4, 1.1, -0.7]).unwrap();
            let s = if l % 2 == 0 { 1.0 } else { -1.0 };
            assert!((b - s * a).abs() <= 1e-14 * a.abs().max(1e-300));
        }
    }
}

fn radii() -> Vec<f64> {
    vec![0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5]
}

fn wide_radii() -> Vec<f64> {
    (1..=20).map(|i| 2.0 * i as f64).collect()
}

#[test]
fn single_mode_is_recovered() {
    for family in [H, ModeFamily::CoulombZeroEnergy { alpha: 1.0 }] {
        let md = bessel_mode(3, family, 3, 4).unwrap();
        let target = move |x: &[f64]| Ok(2.5 * md.eval(x)?);
        let q = SphereQuadrature::new(3, 12).unwrap();
        let fit = expand(&target, family, &q, &ExpandOptions::new(8, wide_radii())).unwrap();
        for f in &fit.fits {
            if (f.l, f.m) == (3, 4) {
                assert!((f.c - 2.5).abs() <= 1e-8, "{f:?}");
            } else {
                assert!(f.c.abs() <= 1e-10, "{f:?}");
            }
        }
        assert_eq!(fit.expansion.modes().len(), 1);
        assert_eq!(fit.expansion.parity(), Parity::Odd);
    }
}

/// `cos(x . e1) = sum_l Re(i^l) 4 pi sqrt(pi/2) g_l(r) sum_m Y_lm(e1) Y_lm(omega)`
fn plane_wave_coefficient(l: usize, m: usize) -> f64 {
    let re = match l % 4 {
        0 => 1.0,
        2 => -1.0,
        _ => 0.0,
    };
    re * 4.0 * PI * (PI / 2.0).sqrt() * real_harmonic(3, l, m, &[1.0, 0.0, 0.0]).unwrap()
}

/// Projection at one radius with a rule of four times the degree.
fn brute_force_coefficient(l: usize, m: usize, r: f64) -> f64 {
    let q = SphereQuadrature::new(3, 4 * 24).unwrap();
    let v = q.integrate(|w| (r * w[0]).cos() * real_harmonic(3, l, m, w).unwrap());
    v / ModeProfile::new(3, H, l).unwrap().value_at(r).unwrap()
}

#[test]
fn plane_wave_coefficients_match_oracles() {
    let target = |x: &[f64]| Ok(x[0].cos());
    let q = SphereQuadrature::new(3, 24).unwrap();
    let fit = expand(&target, H, &q, &ExpandOptions::new(8, radii())).unwrap();
    for f in &fit.fits {
        let exact = plane_wave_coefficient(f.l, f.m);
        assert!((f.c - exact).abs() <= 1e-6, "{f:?} vs {exact}");
        let brute = brute_force_coefficient(f.l, f.m, 2.2);
        if exact != 0.0 {
            assert!((f.c - brute).abs() <= 1e-6, "{f:?} vs {brute}");
        }
    }
}

#[test]
fn odd_target_has_no_even_coefficients() {
    let target = |x: &[f64]| Ok((0.6 * x[0] - 0.8 * x[2]).sin() + x[1] * 0.3);
    let q = SphereQuadrature::new(3, 24).unwrap();
    let fit = expand(&target, H, &q, &ExpandOptions::new(9, radii())).unwrap();
    for f in fit.fits.iter().filter(|f| f.l % 2 == 0) {
        assert!(f.c.abs() <= 1e-10, "{f:?}");
    }
    assert_eq!(fit.expansion.parity(), Parity::Odd);
}

#[test]
fn probe_radius_at_a_zero_is_reported() {
    let target = |x: &[f64]| Ok(x[0].cos());
    let q = SphereQuadrature::new(3, 4).unwrap();
    // r = pi is a zero of J_{1/2}
    let err = expand(&target, H, &q, &ExpandOptions::new(2, vec![PI])).unwrap_err();
    assert_eq!(err, Error::IllConditionedFit { l: 0, m: 1 });
}

#[test]
fn truncation_error_of_finite_target_vanishes() {
    let e = HelmholtzExpansion::new(
        3,
        H,
        vec![
            Mode { l: 0, m: 1, c: 1.0 },
            Mode { l: 2, m: 3, c: -0.5 },
            Mode { l: 4, m: 8, c: 0.25 },
        ],
    )
    .unwrap();
    let target = |x: &[f64]| e.eval(x);
    let q = SphereQuadrature::new(3, 10).unwrap();
    let fit = expand(&target, H, &q, &ExpandOptions::new(6, radii())).unwrap();
    let grid = BallGrid::new(3, 3.0, 12, 10).unwrap();
    assert!(truncation_error(&target, &fit.expansion, &grid).unwrap() <= 1e-8);
}

#[test]
fn plane_wave_truncation_error_decreases_with_degree() {
    let target = |x: &[f64]| Ok(x[0].cos());
    let q = SphereQuadrature::new(3, 30).unwrap();
    let grid = BallGrid::new(3, 2.0, 10, 16).unwrap();
    let errs: Vec<f64> = [4usize, 8, 12]
        .iter()
        .map(|&l0| {
            let fit = expand(&target, H, &q, &ExpandOptions::new(l0, radii())).unwrap();
            truncation_error(&target, &fit.expansion, &grid).unwrap()
        })
        .collect();
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
}

#[test]
fn json_round_trip_is_exact() {
    let e = HelmholtzExpansion::new(
        3,
        ModeFamily::CoulombZeroEnergy { alpha: 0.1 + 0.2 },
        vec![Mode { l: 2, m: 1, c: 1.0 / 3.0 }, Mode { l: 0, m: 1, c: -PI * 1e-17 }],
    )
    .unwrap();
    let s = e.to_json().unwrap();
    let back = HelmholtzExpansion::from_json(&s).unwrap();
    assert_eq!(back, e);
    assert!(s.contains("\"coulomb_zero_energy\""));
    let bad = s.replace("\"even\"", "\"odd\"");
    assert!(HelmholtzExpansion::from_json(&bad).is_err());
}

fn dense(sol: &RadialSolution) -> (Vec<f64>, Vec<f64>) {
    (sol.rho.clone(), sol.w.clone())
}

#[test]
fn near_flat_solution_matches_bessel() {
    for d in [2usize, 3, 4] {
        for l in 0..=3usize {
            let lambda: f64 = 2.0;
            let s = Space::new(d, 1e-4).unwrap();
            let sol = hyperbolic_radial_helmholtz(&s, lambda, l, 10.0, &RadialHelmholtzOptions::default()).unwrap();
            let (rho, w) = dense(&sol);
            let nu = l as f64 + d as f64 / 2.0 - 1.0;
            let pairs: Vec<(f64, f64)> = rho
                .iter()
                .zip(&w)
                .filter(|(p, _)| **p >= 0.1)
                .map(|(&p, &v)| (v, bessel_j(nu, lambda.sqrt() * p).unwrap() * p.powf(1.0 - d as f64 / 2.0)))
                .collect();
            let amp = pairs.iter().map(|(v, b)| v * b).sum::<f64>() / pairs.iter().map(|(_, b)| b * b).sum::<f64>();
            let scale = pairs.iter().map(|(_, b)| (amp * b).abs()).fold(0.0, f64::max);
            let err = pairs.iter().map(|(v, b)| (v - amp * b).abs()).fold(0.0, f64::max) / scale;
            assert!(err <= 1e-4, "d={d} l={l}: {err:e}");
        }
    }
}

#[test]
fn envelope_rate_matches_curvature() {
    let s = Space::new(3, 1.0).unwrap();
    let opts = RadialHelmholtzOptions {
        window: Some((5.0, 25.0)),
        ..Default::default()
    };
    let sol = hyperbolic_radial_helmholtz(&s, 2.0, 0, 25.0, &opts).unwrap();
    let r = &sol.report;
    assert_eq!(r.target_rate, -1.0);
    assert!((r.fitted_rate / r.target_rate - 1.0).abs() <= 0.05, "{r:?}");
    assert!(r.envelope_bounded);
    assert!(r.quotient.bounded, "{:?}", r.quotient);
}

#[test]
fn returned_samples_satisfy_the_ode() {
    for (d, k, lambda, l) in [(3usize, 1.0, 2.0, 0usize), (2, 0.5, 1.0, 2), (4, 0.3, 3.0, 1), (5, 1.0, 4.5, 3)] {
        let s = Space::new(d, k).unwrap();
        let sol = hyperbolic_radial_helmholtz(&s, lambda, l, 20.0, &RadialHelmholtzOptions::default()).unwrap();
        assert!(sol.ode_residual() <= 1e-8, "d={d} l={l}: {:e}", sol.ode_residual());
        // independent check from the values alone, away from the singular
        // coefficients at the origin
        let skip = sol.rho.partition_point(|&p| p < 0.5);
        let grid =
            RadialGrid::uniform(RadialCoord::Geodesic, sol.rho[skip], 20.0, sol.rho.len() - skip).unwrap();
        let res = radial_schrodinger_residual(&s, l, &|_| 0.0, lambda, RadialInput::Sampled(&sol.w[skip..]), &grid)
            .unwrap();
        assert!(res.relative_sup <= 1e-8, "d={d} l={l}: {:e}", res.relative_sup);
    }
}

#[test]
fn oscillation_has_the_expected_period() {
    for (d, k, lambda) in [(3usize, 1.0, 2.0), (2, 0.5, 0.5), (4, 0.2, 1.0)] {
        let s = Space::new(d, k).unwrap();
        let sol = hyperbolic_radial_helmholtz(&s, lambda, 1, 40.0f64.min(45.0 / k), &RadialHelmholtzOptions::default())
            .unwrap();
        let period = 2.0 * PI / (lambda - ((d as f64 - 1.0) * k / 2.0).powi(2)).sqrt();
        let zs: Vec<f64> = sol.zero_crossings().into_iter().filter(|z| *z > 10.0).collect();
        assert!(zs.len() > 4);
        for w in zs.windows(2) {
            assert!(w[1] - w[0] <= 0.8 * period, "d={d}: gap {} vs period {period}", w[1] - w[0]);
        }
    }
}

#[test]
fn below_threshold_is_rejected() {
    let s = Space::new(3, 1.0).unwrap();
    let err = hyperbolic_radial_helmholtz(&s, 0.9, 0, 10.0, &RadialHelmholtzOptions::default()).unwrap_err();
    assert!(err.is_validation());
}

#[test]
fn constant_function_has_unbounded_quotient() {
    let s = Space::new(3, 1.0).unwrap();
    let rho: Vec<f64> = (0..=2000).map(|i| i as f64 * 0.01).collect();
    let radii: Vec<f64> = (1..=20).map(|i| i as f64).collect();
    let q = agmon_hormander_quotient(&s, &rho, &vec![1.0; rho.len()], &radii).unwrap();
    assert!(!q.bounded);
    // direct integration in H^3(1): 4 pi / R * int_0^R sinh^2
    for (r, v) in radii.iter().zip(&q.quotients) {
        let direct = 4.0 * PI / r * (((2.0 * r).sinh() - 2.0 * r) / 4.0);
        assert!((v / direct - 1.0).abs() < 1e-3, "R={r}: {v} vs {direct}");
    }
}

#[test]
fn pointwise_decay_gives_bounded_quotient() {
    for (d, k) in [(2usize, 1.0), (3, 1.0), (4, 0.5)] {
        let s = Space::new(d, k).unwrap();
        let rate = (d as f64 - 1.0) * k / 2.0;
        let rho: Vec<f64> = (0..=3000).map(|i| i as f64 * 0.01).collect();
        let v2: Vec<f64> = rho.iter().map(|p| (-2.0 * rate * p).exp() * (3.0 * p).cos().powi(2)).collect();
        let radii: Vec<f64> = (1..=30).map(|i| i as f64).collect();
        assert!(agmon_hormander_quotient(&s, &rho, &v2, &radii).unwrap().bounded);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn expansion_projection_is_idempotent(cs in proptest::collection::vec(-3.0f64..3.0, 49)) {
        let mut modes = vec![];
        let mut it = cs.iter();
        for l in 0..=6usize {
            for m in 1..=harmonic_dimension(3, l) {
                modes.push(Mode { l, m, c: *it.next().unwrap() });
            }
        }
        let e = HelmholtzExpansion::new(3, H, modes).unwrap();
        let target = |x: &[f64]| e.eval(x);
        let q = SphereQuadrature::new(3, 6).unwrap();
        let mut opts = ExpandOptions::new(6, vec![0.7, 1.3, 2.9]);
        opts.floor = 0.0;
        let fit = expand(&target, H, &q, &opts).unwrap();
        for md in e.modes() {
            prop_assert!((fit.expansion.coefficient(md.l, md.m) - md.c).abs() <= 1e-8);
        }
    }
}
