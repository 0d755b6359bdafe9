//! Straight-line reimplementations of the identification and tuning
//! objectives, sharing no code with the library.

use sta_ident::problems::PENALTY;

fn settle(mse: f64) -> f64 {
    if mse.is_finite() {
        mse.min(PENALTY)
    } else {
        PENALTY
    }
}

/// Bilinear plant under u = 1: rows of (x1, x2, y) for k = 0..n.
fn bilinear_rows(t: [f64; 4], n: usize) -> Vec<[f64; 3]> {
    let (mut x1, mut x2) = (1.0f64, 1.0f64);
    let mut rows = Vec::new();
    for _ in 0..n {
        let y = t[2] * x2 - t[3] * x1 * x1;
        rows.push([x1, x2, y]);
        let nx1 = t[0] * x1 * x2;
        let nx2 = t[1] * x1 * x1 + 1.0;
        x1 = nx1;
        x2 = nx2;
    }
    rows
}

pub fn oracle_example1_identification(t: [f64; 4]) -> f64 {
    let truth = bilinear_rows([0.5, 0.3, 1.8, 0.9], 8);
    let est = bilinear_rows(t, 8);
    let mut sum = 0.0;
    for k in 0..8 {
        for j in 0..3 {
            sum += (truth[k][j] - est[k][j]).powi(2);
        }
    }
    settle(sum / 8.0)
}

/// Dead-time plant under a unit step, k = 0..n.
fn step_response(k_gain: f64, t_const: f64, tau: f64, n: usize) -> Option<Vec<f64>> {
    if t_const <= 1e-9 {
        return None;
    }
    let d = (10.0 * tau).round() as i64;
    let mut x = vec![0.0; n];
    for k in 0..n - 1 {
        let u_delayed = if k as i64 - d >= 0 { 1.0 } else { 0.0 };
        x[k + 1] = (1.0 - 1.0 / (10.0 * t_const)) * x[k] + k_gain / (10.0 * t_const) * u_delayed;
    }
    Some(x)
}

pub fn oracle_example2_identification(p: [f64; 3]) -> f64 {
    let truth = step_response(10.0, 5.0, 9.0, 350).unwrap();
    match step_response(p[0], p[1], p[2], 350) {
        None => PENALTY,
        Some(est) => {
            let sum: f64 = truth.iter().zip(&est).map(|(a, b)| (a - b).powi(2)).sum();
            settle(sum / 350.0)
        }
    }
}

pub fn oracle_example1_tuning(g: [f64; 3]) -> f64 {
    let (t1, t2, t3, t4) = (0.5, 0.3, 1.8, 0.9);
    let (mut x1, mut x2) = (1.0f64, 1.0f64);
    let (mut u1, mut e1, mut e2) = (0.0f64, 0.0f64, 0.0f64);
    let mut sum = 0.0;
    for _ in 0..50 {
        let y = t3 * x2 - t4 * x1 * x1;
        let e = 2.0 - y;
        let u = u1 + g[0] * (e - e1) + g[1] * e + g[2] * (e - 2.0 * e1 + e2);
        sum += e * e;
        e2 = e1;
        e1 = e;
        u1 = u;
        let nx1 = t1 * x1 * x2;
        x2 = t2 * x1 * x1 + u;
        x1 = nx1;
    }
    settle(sum / 50.0)
}

pub fn oracle_example2_tuning(g: [f64; 3]) -> f64 {
    let (a, b, d) = (1.0 - 1.0 / 50.0, 10.0 / 50.0, 90usize);
    let mut us = Vec::with_capacity(1500);
    let mut x = 0.0f64;
    let (mut e1, mut e2) = (0.0f64, 0.0f64);
    let mut sum = 0.0;
    for k in 0..1500 {
        let e = 1.0 - x;
        let u_prev = if k == 0 { 0.0 } else { us[k - 1] };
        let u = u_prev + g[0] * (e - e1) + g[1] * e + g[2] * (e - 2.0 * e1 + e2);
        us.push(u);
        sum += e * e;
        e2 = e1;
        e1 = e;
        let delayed = if k >= d { us[k - d] } else { 0.0 };
        x = a * x + b * delayed;
    }
    settle(sum / 1500.0)
}
