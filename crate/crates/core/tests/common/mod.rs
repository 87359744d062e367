#![allow(dead_code)]

use hnr_core::ambient::BallPoint;
use proptest::prelude::*;

/// Metric coefficient `g_ij` of `δ/F² + dt²` at horizontal position `x`.
pub fn metric(x: &[f64], i: usize, j: usize) -> f64 {
    let n = x.len();
    if i != j {
        return 0.0;
    }
    if i == n {
        return 1.0;
    }
    let f = 0.5 * (1.0 - x.iter().map(|v| v * v).sum::<f64>());
    1.0 / (f * f)
}

/// `Γ^k_ij` from five-point central differences of the metric
/// coefficients, indexed `[k][i][j]` over `0..=n`.
pub fn fd_christoffel(x: &[f64], h: f64) -> Vec<Vec<Vec<f64>>> {
    let n = x.len();
    let dim = n + 1;
    // dg[l][i][j] = ∂_l g_ij
    let mut dg = vec![vec![vec![0.0; dim]; dim]; dim];
    for l in 0..n {
        let at = |s: f64| {
            let mut y = x.to_vec();
            y[l] += s;
            y
        };
        let (p2, p1, m1, m2) = (at(2.0 * h), at(h), at(-h), at(-2.0 * h));
        for i in 0..dim {
            for j in 0..dim {
                dg[l][i][j] = (-metric(&p2, i, j) + 8.0 * metric(&p1, i, j) - 8.0 * metric(&m1, i, j)
                    + metric(&m2, i, j))
                    / (12.0 * h);
            }
        }
    }
    let mut out = vec![vec![vec![0.0; dim]; dim]; dim];
    for k in 0..dim {
        // the metric is diagonal
        let ginv = 1.0 / metric(x, k, k);
        for i in 0..dim {
            for j in 0..dim {
                out[k][i][j] = 0.5 * ginv * (dg[i][j][k] + dg[j][i][k] - dg[k][i][j]);
            }
        }
    }
    out
}

/// Jacobian of `map` at `x` by the eighth-order central stencil,
/// `J[k][i] = ∂_i map_k`.
pub fn jacobian<F: Fn(&[f64]) -> Vec<f64>>(map: F, x: &[f64], h: f64) -> Vec<Vec<f64>> {
    const W: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
    let n = x.len();
    let m = map(x).len();
    let mut jac = vec![vec![0.0; n]; m];
    for i in 0..n {
        let at = |s: f64| {
            let mut y = x.to_vec();
            y[i] += s;
            map(&y)
        };
        for (step, w) in W.iter().enumerate() {
            let off = (step + 1) as f64 * h;
            let (p, q) = (at(off), at(-off));
            for k in 0..m {
                jac[k][i] += w * (p[k] - q[k]) / h;
            }
        }
    }
    jac
}

pub fn unit_vector(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, n)
        .prop_filter("nonzero", |v| v.iter().map(|c| c * c).sum::<f64>() > 1e-4)
        .prop_map(|v| {
            let len = v.iter().map(|c| c * c).sum::<f64>().sqrt();
            v.into_iter().map(|c| c / len).collect()
        })
}

/// Horizontal positions with `|x| ≤ max_radius`.
pub fn ball_vec(n: usize, max_radius: f64) -> impl Strategy<Value = Vec<f64>> {
    (unit_vector(n), 0.0f64..=1.0).prop_map(move |(u, s)| u.into_iter().map(|c| c * s * max_radius).collect())
}

pub fn ball_point(n: usize, max_radius: f64) -> impl Strategy<Value = BallPoint> {
    (ball_vec(n, max_radius), -3.0f64..3.0).prop_map(|(x, t)| BallPoint::new(x, t).unwrap())
}

pub fn valid_nr() -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for n in 3..=5 {
        for r in 1..n {
            out.push((n, r));
        }
    }
    out
}
