mod common;

use common::valid_nr;
use hnr_core::curvature::*;
use hnr_core::height::*;
use hnr_core::profile::*;
use hnr_core::quadrature::QuadratureConfig;
use proptest::prelude::*;

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn curve(n: usize, r: usize, d: f64, samples: usize) -> ProfileCurve {
    let grid = profile_grid(n, r, d, samples, 6.0).unwrap();
    sample_profile(n, r, d, &grid, &ProfileOptions::default()).unwrap()
}

#[test]
fn first_integral_is_constant_on_every_regime() {
    for (n, r) in valid_nr() {
        for d in [0.3, 0.8, 1.0, 1.5, 4.0] {
            let c = curve(n, r, d, 96);
            for s in &c.samples {
                let fi = first_integral(n, r, s.rho, s.lambda_dot).powf(1.0 / r as f64);
                assert!((fi - d).abs() < 1e-9 * d.max(1.0), "({n},{r},{d}) rho={}: {fi}", s.rho);
            }
            assert!(hr_ode_residual(&c).unwrap() < 1e-6);
        }
    }
}

#[test]
fn slopes_are_positive_and_concave_on_the_positive_side() {
    for (n, r) in valid_nr() {
        for d in [0.5, 1.0, 2.0] {
            let c = curve(n, r, d, 64);
            for s in c.samples.iter().filter(|s| s.rho > 0.0) {
                assert!(s.lambda_dot > 0.0 && s.lambda_ddot < 0.0, "({n},{r},{d}) rho={}", s.rho);
            }
            for w in c.samples.windows(2).filter(|w| w[0].rho > 0.0) {
                assert!(w[1].lambda > w[0].lambda);
            }
        }
    }
}

#[test]
fn regime_shapes() {
    // two sheets stay below the half-height, the entire graph is odd
    let d = 2.0;
    let h = height(3, 1, d, &cfg()).unwrap().h;
    let c = curve(3, 1, d, 64);
    assert!(c.samples.iter().all(|s| s.lambda < h && s.lambda >= 0.0));
    let far = profile_two_sheets(3, 1, d, 40.0, &cfg()).unwrap();
    assert!((far - h).abs() < 1e-8, "{far} vs {h}");

    let e = curve(4, 1, 0.5, 65);
    let m = e.samples.len();
    for i in 0..m {
        let (a, b) = (&e.samples[i], &e.samples[m - 1 - i]);
        assert!((a.rho + b.rho).abs() < 1e-12);
        assert!((a.lambda + b.lambda).abs() < 1e-10);
    }
    let bound = profile_entire(4, 1, 0.5, 60.0, &cfg()).unwrap();
    assert!(e.samples.iter().all(|s| s.lambda.abs() < bound));

    // half graph: unbounded below near its vertical end, bounded above
    let low = profile_half_graph(3, 1, 1.0, 1e-8, &cfg()).unwrap();
    let lower = profile_half_graph(3, 1, 1.0, 1e-12, &cfg()).unwrap();
    assert!(lower < low && low < -8.0);
    let top = profile_half_graph(3, 1, 1.0, 60.0, &cfg()).unwrap();
    assert!(top.is_finite() && top > profile_half_graph(3, 1, 1.0, 10.0, &cfg()).unwrap());
}

#[test]
fn corrupted_slope_is_detected() {
    let mut c = curve(3, 1, 2.0, 128);
    let k = c.samples.len() / 2;
    c.samples[k].lambda_dot += 1e-2;
    assert!(hr_ode_residual(&c).unwrap() > 1e-3);
}

#[test]
fn closed_form_curvature_matches_general_route() {
    for (n, r) in valid_nr() {
        for d in [0.5, 1.0, 2.0, 5.0] {
            let c = curve(n, r, d, 24);
            for s in &c.samples {
                let (k1, k2) = principal_curvatures(s.rho, s.lambda_dot, s.lambda_ddot);
                for j in 1..=n {
                    let direct = mean_curvature_j(n, j, k1, k2).unwrap();
                    let closed = hj_on_family(n, r, d, j, s.rho).unwrap();
                    let scale = direct.abs().max(shape_norm(n, k1, k2).powi(j as i32)).max(1e-300);
                    assert!(
                        (direct - closed).abs() <= 1e-12 * scale,
                        "({n},{r},{d}) j={j} rho={}: {direct} vs {closed}",
                        s.rho
                    );
                }
            }
        }
    }
}

#[test]
fn sign_theorem() {
    for n in 3..=5 {
        for r in 1..n {
            for d in [1.5, 3.0, 10.0] {
                let a = waist(n, r, d).unwrap();
                for i in 0..100 {
                    let rho = a + 1e-4 + 6.0 * i as f64 / 99.0;
                    let (k1, k2) = family_curvatures(n, r, d, rho).unwrap();
                    let norm = shape_norm(n, k1, k2);
                    for j in 1..=n {
                        let hj = mean_curvature_j(n, j, k1, k2).unwrap();
                        if j < r {
                            assert!(hj > 0.0, "({n},{r},{d}) H_{j}({rho}) = {hj}");
                        } else if j == r {
                            assert!(hj.abs() < 1e-12 * norm.powi(r as i32) + 1e-300);
                        } else {
                            assert!(hj < 0.0, "({n},{r},{d}) H_{j}({rho}) = {hj}");
                        }
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mean_curvature_one_is_the_average(n in 2usize..7, k1 in -5.0f64..5.0, k2 in -5.0f64..5.0) {
        let avg = (k1 + (n - 1) as f64 * k2) / n as f64;
        prop_assert!((mean_curvature_j(n, 1, k1, k2).unwrap() - avg).abs() <= 4.0 * f64::EPSILON * avg.abs().max(1.0));
    }

    #[test]
    fn vertical_normal_is_monotone(s1 in 0.0f64..1e3, s2 in 0.0f64..1e3) {
        let (a, b) = (normal_vertical_component(s1), normal_vertical_component(s2));
        prop_assert!(a > 0.0 && a <= 1.0);
        if s1 < s2 {
            prop_assert!(a >= b);
        }
    }

    #[test]
    fn first_integral_along_random_members(idx in 0usize..6, d in 0.05f64..20.0, t in 0.0f64..1.0) {
        let (n, r) = valid_nr()[idx];
        prop_assume!(d != 1.0);
        let start = if d > 1.0 { waist(n, r, d).unwrap() + 1e-9 } else { 0.0 };
        let rho = start + 1e-6 + 10.0 * t;
        let ld = lambda_dot(n, r, d, rho).unwrap();
        let fi = first_integral(n, r, rho, ld).powf(1.0 / r as f64);
        prop_assert!((fi - d).abs() < 1e-9 * d.max(1.0));
    }
}

#[test]
fn height_derivative_matches_differences() {
    for (n, r) in [(3, 1), (4, 1), (4, 2), (5, 3)] {
        for a in [0.5, 1.0, 2.0, 4.0] {
            let step = 1e-4 * a;
            let hp = height_from_a(n, r, a + step, &cfg()).unwrap().h;
            let hm = height_from_a(n, r, a - step, &cfg()).unwrap().h;
            let fd = (hp - hm) / (2.0 * step);
            let exact = height_derivative(n, r, a, &cfg()).unwrap();
            assert!(exact < 0.0);
            assert!(
                (exact - fd).abs() < 1e-6 * exact.abs(),
                "({n},{r}) a={a}: {exact} vs {fd}"
            );
        }
    }
}

#[test]
fn height_decreases_to_the_limit() {
    for (n, r) in valid_nr() {
        let limit = height_limit(n, r).unwrap();
        let hs: Vec<f64> = [0.05, 0.2, 0.7, 1.5, 3.0, 6.0]
            .iter()
            .map(|&a| height_from_a(n, r, a, &cfg()).unwrap().h)
            .collect();
        assert!(hs.windows(2).all(|w| w[1] < w[0]), "({n},{r}): {hs:?}");
        assert!(hs.iter().all(|h| *h > limit));
    }
}

#[test]
fn frozen_heights() {
    // independent high-precision evaluations of the height integral
    let table: [((usize, usize), [f64; 3]); 5] = [
        ((3, 1), [2.23959, 0.927924, 0.785734]),
        ((4, 1), [1.67613, 0.631204, 0.523849]),
        ((4, 2), [3.69893, 1.79163, 1.571323]),
        ((5, 2), [2.75427, 1.21916, 1.047605]),
        ((5, 3), [4.99551, 2.63590, 2.356865]),
    ];
    for ((n, r), hs) in table {
        for (a, expect) in [0.1, 1.0, 4.0].iter().zip(hs) {
            let h = height_from_a(n, r, *a, &cfg()).unwrap().h;
            assert!((h - expect).abs() < 6e-6 * expect, "({n},{r}) a={a}: {h} vs {expect}");
        }
    }
}
