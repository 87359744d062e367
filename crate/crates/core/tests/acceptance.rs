//! Acceptance criteria, one `PASS`/`FAIL` line each. Exits nonzero if any
//! criterion fails.

mod common;

use std::time::Instant;

use hnr_core::ambient::*;
use hnr_core::barrier::*;
use hnr_core::curvature::*;
use hnr_core::height::*;
use hnr_core::profile::*;
use hnr_core::quadrature::QuadratureConfig;
use hnr_core::stc::*;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

const GRID: [(usize, usize); 5] = [(3, 1), (4, 1), (4, 2), (5, 2), (5, 3)];

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn height_limit_case() -> Outcome {
    let mut worst: f64 = 0.0;
    for (n, r) in GRID {
        let start = Instant::now();
        let h = height_from_a(n, r, 10.0, &cfg()).map_err(|e| e.to_string())?.h;
        let elapsed = start.elapsed().as_secs_f64();
        let err = (h - height_limit(n, r).unwrap()).abs();
        ensure(err < 1e-4, || format!("({n},{r}): |h(10) - limit| = {err:e}"))?;
        ensure(elapsed < 1.0, || format!("({n},{r}): took {elapsed:.3} s"))?;
        worst = worst.max(err);
    }
    Ok(format!("max |h(10) - pi r/(2(n-r))| = {worst:.3e}"))
}

fn height_monotonicity() -> Outcome {
    let grid = [0.1, 0.5, 1.0, 2.0, 4.0, 8.0];
    let mut worst: f64 = 0.0;
    for (n, r) in GRID {
        let hs: Vec<f64> = grid
            .iter()
            .map(|&a| height_from_a(n, r, a, &cfg()).unwrap().h)
            .collect();
        ensure(hs.windows(2).all(|w| w[1] < w[0]), || {
            format!("({n},{r}) not decreasing: {hs:?}")
        })?;
        for &a in &grid {
            let step = 1e-4 * a;
            let fd = (height_from_a(n, r, a + step, &cfg()).unwrap().h
                - height_from_a(n, r, a - step, &cfg()).unwrap().h)
                / (2.0 * step);
            let exact = height_derivative(n, r, a, &cfg()).map_err(|e| e.to_string())?;
            let rel = ((exact - fd) / exact).abs();
            ensure(rel < 1e-6, || format!("({n},{r}) a={a}: dh/da {exact} vs fd {fd}"))?;
            worst = worst.max(rel);
        }
    }
    Ok(format!("strictly decreasing; max rel derivative error {worst:.3e}"))
}

fn height_divergence() -> Outcome {
    let h = height_from_a(3, 1, 1e-3, &cfg()).map_err(|e| e.to_string())?.h;
    ensure(h > 5.0, || format!("h(1e-3) = {h}"))?;
    let rep = divergence_check(3, 1, &[0.1, 0.01, 0.001], None, &cfg()).map_err(|e| e.to_string())?;
    ensure(rep.strictly_increasing, || format!("heights {:?}", rep.h))?;
    Ok(format!("h(1e-3) = {h:.6}, increasing {:?}", rep.h))
}

fn first_integral_constancy() -> Outcome {
    let mut cases = 0;
    let mut worst_fi: f64 = 0.0;
    let mut worst_res: f64 = 0.0;
    for n in 3..=5 {
        for r in 1..n {
            for d in [0.3, 1.0, 2.0, 6.0] {
                let grid = default_grid(n, r, d, DEFAULT_SAMPLES).map_err(|e| e.to_string())?;
                let curve = sample_profile(n, r, d, &grid, &ProfileOptions::default()).map_err(|e| e.to_string())?;
                for s in &curve.samples {
                    let fi = first_integral(n, r, s.rho, s.lambda_dot).powf(1.0 / r as f64);
                    let err = (fi - d).abs() / d.max(1.0);
                    ensure(err < 1e-9, || format!("({n},{r},{d}) rho={}: {fi}", s.rho))?;
                    worst_fi = worst_fi.max(err);
                }
                let res = hr_ode_residual(&curve).map_err(|e| e.to_string())?;
                ensure(res < 1e-6, || format!("({n},{r},{d}) residual {res:e}"))?;
                worst_res = worst_res.max(res);
                cases += 1;
            }
        }
    }
    ensure(cases >= 20, || format!("only {cases} cases"))?;
    Ok(format!(
        "{cases} profiles; max FI error {worst_fi:.2e}, max residual {worst_res:.2e}"
    ))
}

fn sign_theorem() -> Outcome {
    let mut checked = 0;
    for n in 3..=5 {
        for r in 1..n {
            for d in [1.5, 3.0, 10.0] {
                let a = waist(n, r, d).map_err(|e| e.to_string())?;
                for i in 0..100 {
                    let rho = a + waist_offset(a) + 8.0 * i as f64 / 99.0;
                    let (k1, k2) = family_curvatures(n, r, d, rho).map_err(|e| e.to_string())?;
                    let norm_r = shape_norm(n, k1, k2).powi(r as i32);
                    for j in 1..=n {
                        let hj = mean_curvature_j(n, j, k1, k2).map_err(|e| e.to_string())?;
                        let ok = if j < r {
                            hj > 0.0
                        } else if j == r {
                            hj.abs() < 1e-12 * norm_r + 1e-300
                        } else {
                            hj < 0.0
                        };
                        ensure(ok, || format!("({n},{r},{d}) rho={rho} H_{j} = {hj:e}"))?;
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} samples"))
}

fn christoffel_identities() -> Outcome {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.gen_range(2..=5);
        let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let len = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        let radius = 0.9 * rng.gen_range(0.0f64..1.0);
        x.iter_mut().for_each(|c| *c *= radius / len);
        let t = rng.gen_range(-2.0..2.0);
        let p = BallPoint::new(x.clone(), t).map_err(|e| e.to_string())?;
        let gamma = common::fd_christoffel(&x, 1e-4);
        let l = position_factor(&p);
        let mut pos = x.clone();
        pos.push(t);
        for j in 0..=n {
            for k in 0..=n {
                let fd = if j == k { 1.0 } else { 0.0 } + (0..=n).map(|i| gamma[k][j][i] * pos[i]).sum::<f64>();
                let expect = if j == k {
                    if j < n {
                        l
                    } else {
                        1.0
                    }
                } else {
                    0.0
                };
                worst = worst.max((fd - expect).abs());
            }
        }
    }
    ensure(worst < 1e-6, || format!("max deviation {worst:e}"))?;
    Ok(format!("100 points, max |FD - L e_j| = {worst:.2e}"))
}

fn norm_comparison_case() -> Outcome {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    for i in 0..10_000 {
        let n = rng.gen_range(2..=6);
        let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let len = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        let radius = rng.gen_range(0.0..0.999);
        x.iter_mut().for_each(|c| *c *= radius / len);
        let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
        v.push(rng.gen_range(-5.0..5.0));
        if v[..n].iter().all(|c| *c == 0.0) {
            continue;
        }
        let p = BallPoint::new(x, 0.0).map_err(|e| e.to_string())?;
        let c = norm_comparison(&AmbientVector::new(p, v).map_err(|e| e.to_string())?);
        ensure(c.ambient > c.euclidean, || {
            format!("sample {i}: {} <= {}", c.ambient, c.euclidean)
        })?;
    }
    Ok("10000 random tangent vectors".into())
}

fn dilation_invariance() -> Outcome {
    let mut worst: f64 = 0.0;
    for (n, r, d) in [(3, 1, 2.0), (3, 1, 0.5), (4, 2, 3.0)] {
        let spec = MeshSpec {
            rows: 96,
            columns: 16,
            ..MeshSpec::new(n, r, d)
        };
        let mesh = build_fermi_mesh(&spec).map_err(|e| e.to_string())?;
        let q = n as f64 + 1.5;
        let base = strong_total_curvature(&mesh, q).map_err(|e| e.to_string())?.value;
        for c in [0.5, 2.0, 10.0] {
            let v = strong_total_curvature(&dilation_transform(&mesh, c).unwrap(), q)
                .unwrap()
                .value;
            let rel = ((v - base) / base).abs();
            ensure(rel <= 1e-12, || format!("({n},{r},{d}) c={c}: rel change {rel:e}"))?;
            worst = worst.max(rel);
        }
    }
    Ok(format!("3 meshes, max rel change {worst:.2e}"))
}

fn decay_profile() -> Outcome {
    let pts = decay_check(3, 1, 2.0, &[2.0, 4.0, 6.0, 8.0, 10.0], &cfg()).map_err(|e| e.to_string())?;
    let values: Vec<f64> = pts.iter().map(|p| p.value).collect();
    ensure(values.windows(2).all(|w| w[1] < w[0]), || {
        format!("not decreasing: {values:?}")
    })?;
    let last = *values.last().unwrap();
    ensure(last < 1e-3, || format!("final value {last:e}"))?;
    Ok(format!(
        "R^2 sup|A|^2 = {}",
        values.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>().join(", ")
    ))
}

fn vertical_normal() -> Outcome {
    // near the vertical end N ≈ √q ρ, so the supremum over ρ < 1e-3 is about
    // 1.414e-3 for (3, 1)
    let mut worst_low: f64 = 0.0;
    for k in 1..=50 {
        let rho = 1e-3 * (1.0 - k as f64 / 51.0);
        let nv = normal_vertical_component(lambda_dot(3, 1, 1.0, rho).map_err(|e| e.to_string())?);
        ensure(nv < 1e-3, || format!("N(rho = {rho:.4e}) = {nv:.4e} is not below 1e-3"))?;
        worst_low = worst_low.max(nv);
    }
    let far: Vec<f64> = [5.0, 10.0, 20.0, 40.0]
        .iter()
        .map(|&rho| normal_vertical_component(lambda_dot(3, 1, 1.0, rho).unwrap()))
        .collect();
    ensure(far.windows(2).all(|w| w[1] >= w[0]), || {
        format!("not increasing: {far:?}")
    })?;
    ensure((1.0 - far[3]).abs() < 1e-12, || format!("N(40) = {}", far[3]))?;
    Ok(format!("max N below 1e-3: {worst_low:.2e}; N(40) = {}", far[3]))
}

fn barrier_sweep() -> Outcome {
    let contained = containment_fixture(3)
        .map_err(|e| e.to_string())?
        .run(DEFAULT_CONTACT_TOL, &cfg())
        .map_err(|e| e.to_string())?;
    ensure(contained.verdict == Verdict::Containment, || {
        format!("containment fixture: {:?}", contained.verdict)
    })?;
    let violated = violation_fixture(3)
        .map_err(|e| e.to_string())?
        .run(DEFAULT_CONTACT_TOL, &cfg())
        .map_err(|e| e.to_string())?;
    let gap = match &violated.verdict {
        Verdict::FirstContact(c) => c.gap,
        other => return Err(format!("violation fixture: {other:?}")),
    };
    ensure((0.0..1e-6).contains(&gap), || format!("witness gap {gap:e}"))?;
    let plane = Hyperplane::through_origin(&[0.0, 0.0, 1.0]).unwrap();
    let mut worst: f64 = 0.0;
    for d in [1.05, 2.0, 5.0] {
        let b = PlacedBarrier::canonical(3, 1, d, plane.clone(), 0.0, 0.0, cfg()).map_err(|e| e.to_string())?;
        let pts = b.sample_points(32, &[0.0, 1.0, 2.5]).map_err(|e| e.to_string())?;
        let min = pts
            .iter()
            .map(|p| signed_distance_to_hyperplane(p, &plane))
            .fold(f64::INFINITY, f64::min);
        let expect = d.powf(1.0 / 2.0).acosh();
        let err = (min - expect).abs();
        ensure(err < 1e-8, || format!("d={d}: resting distance {min} vs {expect}"))?;
        worst = worst.max(err);
    }
    Ok(format!(
        "Containment / FirstContact (gap {gap:.2e}); resting distance error {worst:.2e}"
    ))
}

fn slab_predicate() -> Outcome {
    for n in 2..=8 {
        for r in 1..n {
            let limit = height_limit(n, r).map_err(|e| e.to_string())?;
            let threshold = 2.0 * limit;
            ensure(slab_obstruction(n, r, threshold).unwrap(), || {
                format!("({n},{r}) at threshold")
            })?;
            let above = threshold * (1.0 + f64::EPSILON);
            ensure(!slab_obstruction(n, r, above).unwrap(), || {
                format!("({n},{r}) above threshold")
            })?;
            ensure(threshold == std::f64::consts::PI * r as f64 / (n - r) as f64, || {
                format!("({n},{r}) threshold {threshold}")
            })?;
        }
    }
    Ok("threshold = 2 * height_limit for 2 <= n <= 8, r < n".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("height limit", height_limit_case),
        ("height monotonicity", height_monotonicity),
        ("height divergence as d -> 1", height_divergence),
        ("first integral / H_r = 0", first_integral_constancy),
        ("sign theorem", sign_theorem),
        ("Christoffel identities", christoffel_identities),
        ("ambient vs Euclidean norm", norm_comparison_case),
        ("dilation invariance", dilation_invariance),
        ("decay profile", decay_profile),
        ("vertical normal at the vertical end", vertical_normal),
        ("barrier sweep", barrier_sweep),
        ("slab predicate", slab_predicate),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed in {:.2} s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
