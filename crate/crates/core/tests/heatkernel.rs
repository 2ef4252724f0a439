use hyperloc::heatkernel::{
    d_rho, descent_check, large_time_rate, recurrence_up_check, total_mass, Bump, HeatKernel, KernelBound,
    Propagator, RadialProfile, TimeRadiusGrid,
};
use std::f64::consts::PI;

fn grid(times: &[f64], r0: f64, r1: f64, n: usize) -> TimeRadiusGrid {
    TimeRadiusGrid {
        times: times.to_vec(),
        radii: (0..n).map(|i| r0 + (r1 - r0) * i as f64 / (n - 1) as f64).collect(),
    }
}

#[test]
fn three_dimensional_closed_form_matches_the_operator_form() {
    // (-1/(2 pi sqrt(4 pi t))) (kappa/sinh(kappa rho)) d/drho exp(-kappa^2 t - rho^2/4t)
    let (k, t, rho) = (1.0f64, 0.5, 1.0);
    let e = |r: f64| (-k * k * t - r * r / (4.0 * t)).exp();
    let h = 1e-3;
    let de = (-e(rho + 2.0 * h) + 8.0 * e(rho + h) - 8.0 * e(rho - h) + e(rho - 2.0 * h)) / (12.0 * h);
    let op_form = -1.0 / (2.0 * PI * (4.0 * PI * t).sqrt()) * k / (k * rho).sinh() * de;
    let closed = HeatKernel::new(3, k).unwrap().value(t, rho).unwrap();
    assert!((closed - op_form).abs() / closed <= 1e-8, "{closed} {op_form}");
}

#[test]
fn five_dimensional_closed_form_matches_nested_differences() {
    // apply (kappa/sinh d/drho) twice by finite differences
    let (k, t) = (0.8f64, 0.7);
    let e = |r: f64| (-4.0 * k * k * t - r * r / (4.0 * t)).exp();
    let dd = |f: &dyn Fn(f64) -> f64, r: f64| {
        let h = 1e-3;
        (-f(r + 2.0 * h) + 8.0 * f(r + h) - 8.0 * f(r - h) + f(r - 2.0 * h)) / (12.0 * h)
    };
    let once = |r: f64| k / (k * r).sinh() * dd(&e, r);
    for rho in [0.3, 1.0, 2.5] {
        let twice = k / (k * rho).sinh() * dd(&once, rho);
        let want = twice / (4.0 * PI * PI * (4.0 * PI * t).sqrt());
        let got = HeatKernel::new(5, k).unwrap().value(t, rho).unwrap();
        assert!((got - want).abs() / got <= 1e-7, "rho={rho}: {got} {want}");
    }
}

#[test]
fn flat_limit_is_the_gaussian() {
    for d in 2..=5 {
        let kern = HeatKernel::new(d, 1e-3).unwrap();
        for i in 0..=30 {
            let rho = 0.1 * i as f64;
            let h = kern.value(1.0, rho).unwrap();
            let g = kern.euclidean(1.0, rho);
            assert!((h / g - 1.0).abs() <= 1e-4, "d={d} rho={rho}: {}", h / g - 1.0);
        }
    }
}

#[test]
fn kernel_is_positive_and_below_the_calibrated_bound() {
    let kern = HeatKernel::new(3, 1.0).unwrap();
    let cal = TimeRadiusGrid::sweep(0.01, 10.0, 25, 20.0, 81, false).unwrap();
    let ver = TimeRadiusGrid::sweep(0.01, 10.0, 25, 20.0, 81, true).unwrap();
    let b = KernelBound::calibrate(kern, &cal).unwrap();
    let chk = b.check(&ver).unwrap();
    assert!(chk.min_value >= 0.0);
    assert!(chk.holds, "{chk:?}");
    // the d = 3 ratio H/B is 2 kappa rho e^{kappa rho} / (sinh(kappa rho)(1+kappa rho)) / 2 < 2
    assert!(b.c < 2.0 && b.c > 1.8);
}

#[test]
fn bound_holds_in_other_dimensions() {
    for d in [2usize, 4, 5] {
        let kern = HeatKernel::new(d, 1.0).unwrap();
        let cal = TimeRadiusGrid::sweep(0.05, 5.0, 9, 10.0, 21, false).unwrap();
        let ver = TimeRadiusGrid::sweep(0.05, 5.0, 9, 10.0, 21, true).unwrap();
        let b = KernelBound::calibrate(kern, &cal).unwrap();
        let chk = b.check(&ver).unwrap();
        assert!(chk.min_value >= 0.0, "d={d}: {chk:?}");
        assert!(chk.max_ratio <= 1.0 + 1e-2, "d={d}: {chk:?}");
    }
}

#[test]
fn large_time_decay_rate() {
    for (d, k) in [(3usize, 1.0f64), (3, 0.5), (2, 1.0), (5, 0.6)] {
        let kern = HeatKernel::new(d, k).unwrap();
        let rate = large_time_rate(&kern, 1.0, &[10.0, 20.0, 30.0, 40.0, 50.0]).unwrap();
        let want = -k * k * ((d - 1) as f64).powi(2) / 4.0;
        assert!((rate / want - 1.0).abs() <= 0.05, "d={d} k={k}: {rate} vs {want}");
    }
}

#[test]
fn dimension_raising_recurrence() {
    let g = grid(&[0.2, 1.0, 5.0], 0.2, 10.0, 50);
    let odd = recurrence_up_check(3, 1.0, &g).unwrap();
    assert!(odd <= 1e-6, "{odd:e}");
    let even = recurrence_up_check(2, 1.0, &g).unwrap();
    assert!(even <= 1e-4, "{even:e}");
}

#[test]
fn dimension_lowering_integral() {
    let g = grid(&[0.2, 1.0, 5.0], 0.0, 10.0, 26);
    let two = descent_check(2, 1.0, &g).unwrap();
    assert!(two <= 1e-5, "{two:e}");
    let four = descent_check(4, 1.0, &g).unwrap();
    assert!(four <= 1e-4, "{four:e}");
}

#[test]
fn unit_mass() {
    let k3 = HeatKernel::new(3, 1.0).unwrap();
    let m: Vec<f64> = [0.1, 1.0, 5.0].iter().map(|&t| total_mass(&k3, t).unwrap()).collect();
    for v in &m {
        assert!((v - 1.0).abs() <= 1e-6, "{m:?}");
    }
    assert!((m[0] - m[2]).abs() <= 1e-6);
    for d in [2usize, 4, 5] {
        let kern = HeatKernel::new(d, 1.0).unwrap();
        let m: Vec<f64> = [0.1, 1.0, 5.0].iter().map(|&t| total_mass(&kern, t).unwrap()).collect();
        for v in &m {
            assert!((v - 1.0).abs() <= 1e-6, "d={d}: {m:?}");
        }
    }
    let flat = HeatKernel::new(3, 1e-6).unwrap();
    assert!((total_mass(&flat, 1.0).unwrap() - 1.0).abs() <= 1e-6);
}

#[test]
fn fd_derivative_of_kernel() {
    let kern = HeatKernel::new(3, 1.0).unwrap();
    // d/drho of the closed form
    let (t, r) = (0.4f64, 1.3f64);
    let h = kern.value(t, r).unwrap();
    let exact = h * (1.0 / r - 1.0 / r.tanh() - r / (2.0 * t));
    assert!((d_rho(&kern, t, r).unwrap() / exact - 1.0).abs() < 1e-9);
}

fn bump() -> Bump {
    Bump::new(1.0, 1.0).unwrap()
}

#[test]
fn propagator_recovers_the_initial_datum() {
    let p = Propagator::new(HeatKernel::new(3, 1.0).unwrap()).unwrap();
    assert_eq!(p.c_d, 1.0 / total_mass(&p.kernel, 1.0).unwrap());
    let v0 = bump();
    let radii: Vec<f64> = (0..=12).map(|i| 0.1 * i as f64).collect();
    let errs: Vec<f64> = [1e-2, 1e-3]
        .iter()
        .map(|&t| {
            let w = p.apply_many(&v0, t, &radii).unwrap();
            w.iter().zip(&radii).map(|(a, &r)| (a - v0.value(r)).abs()).fold(0.0, f64::max)
        })
        .collect();
    eprintln!("{errs:?}");
    assert!(errs[1] < errs[0]);
}

#[test]
fn propagator_solves_the_heat_equation() {
    let p = Propagator::new(HeatKernel::new(3, 1.0).unwrap()).unwrap();
    let v0 = bump();
    for (t, rho) in [(0.1, 0.5), (0.3, 0.2), (0.5, 1.0), (1.0, 2.0)] {
        let res = p.heat_residual(&v0, t, rho).unwrap();
        assert!(res <= 1e-3, "t={t} rho={rho}: {res:e}");
    }
}

#[test]
fn propagator_semigroup() {
    let p = Propagator::new(HeatKernel::new(3, 1.0).unwrap()).unwrap();
    let v0 = bump();
    let half = p.tabulate(&v0, 0.5, 9.0, 0.02).unwrap();
    let radii: Vec<f64> = (0..=15).map(|i| 0.2 * i as f64).collect();
    let two_steps = p.apply_many(&half, 0.5, &radii).unwrap();
    let one_step = p.apply_many(&v0, 1.0, &radii).unwrap();
    let defect = two_steps.iter().zip(&one_step).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    eprintln!("semigroup defect {defect:e}");
    assert!(defect <= 1e-3);
    assert!(one_step.iter().all(|&w| w >= -1e-8));
}

#[test]
fn propagating_zero_gives_zero() {
    let p = Propagator::new(HeatKernel::new(3, 1.0).unwrap()).unwrap();
    let z = Bump::new(0.0, 1.0).unwrap();
    assert_eq!(p.apply(&z, 0.3, 0.7).unwrap(), 0.0);
}

proptest::proptest! {
    #![proptest_config(proptest::prelude::ProptestConfig::with_cases(200))]
    #[test]
    fn kernel_is_nonnegative(d in 2usize..=5, k in 0.05f64..2.0, t in 0.01f64..10.0, rho in 0.0f64..15.0) {
        let h = HeatKernel::new(d, k).unwrap().gauss_scaled(t, rho).unwrap();
        proptest::prop_assert!(h >= 0.0, "d={} k={} t={} rho={}: {}", d, k, t, rho, h);
    }
}
