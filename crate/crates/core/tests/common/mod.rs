//! Naive-loop reference implementations shared by the integration tests.
#![allow(dead_code)]

use cdpanel::cd_tests::WeightVector;
use cdpanel::panel::{validate_panel, PanelDataset, ResidualMatrix, ResidualSource};
use ndarray::{Array2, Array3};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random residual matrix with `2 <= N <= 6`, `3 <= T <= 8` and
/// heterogeneous row scales.
pub fn small_instance(rng: &mut ChaCha8Rng) -> Array2<f64> {
    let n = rng.gen_range(2..=6);
    let t = rng.gen_range(3..=8);
    let mut e = Array2::zeros((n, t));
    for i in 0..n {
        let scale = rng.gen_range(0.2..3.0);
        for s in 0..t {
            e[[i, s]] = scale * rng.gen_range(-1.0..1.0);
        }
    }
    e
}

/// Like [`small_instance`] with a strong common component, so that many
/// pairwise correlations are close to one.
pub fn correlated_instance(rng: &mut ChaCha8Rng) -> Array2<f64> {
    let mut e = small_instance(rng);
    let (n, t) = e.dim();
    let f: Vec<f64> = (0..t).map(|_| rng.gen_range(-3.0..3.0)).collect();
    for i in 0..n {
        let load = if rng.gen::<bool>() { 4.0 } else { -4.0 };
        for s in 0..t {
            e[[i, s]] += load * f[s];
        }
    }
    e
}

pub fn residuals(e: &Array2<f64>) -> ResidualMatrix {
    ResidualMatrix::new(e.clone(), ResidualSource::Raw).expect("valid residuals")
}

pub fn signs(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 }).collect()
}

pub fn weights(w: &[f64]) -> WeightVector {
    WeightVector::custom(w.to_vec()).unwrap()
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

pub fn naive_rho(e: &Array2<f64>, i: usize, j: usize) -> f64 {
    let t = e.ncols();
    let mi = (0..t).map(|s| e[[i, s]]).sum::<f64>() / t as f64;
    let mj = (0..t).map(|s| e[[j, s]]).sum::<f64>() / t as f64;
    let mut num = 0.0;
    let mut di = 0.0;
    let mut dj = 0.0;
    for s in 0..t {
        let a = e[[i, s]] - mi;
        let b = e[[j, s]] - mj;
        num += a * b;
        di += a * a;
        dj += b * b;
    }
    num / (di.sqrt() * dj.sqrt())
}

pub fn naive_cd(e: &Array2<f64>) -> f64 {
    let (n, t) = e.dim();
    let mut s = 0.0;
    for i in 1..n {
        for j in 0..i {
            s += naive_rho(e, i, j);
        }
    }
    (2.0 * t as f64 / (n as f64 * (n as f64 - 1.0))).sqrt() * s
}

pub fn naive_cd_weighted(e: &Array2<f64>, w: &[f64]) -> f64 {
    let (n, t) = e.dim();
    let (nf, tf) = (n as f64, t as f64);
    let mut num = 0.0;
    for s in 0..t {
        for i in 1..n {
            for j in 0..i {
                num += w[i] * e[[i, s]] * w[j] * e[[j, s]];
            }
        }
    }
    let mut den = 0.0;
    for i in 0..n {
        for s in 0..t {
            den += e[[i, s]] * e[[i, s]] * w[i] * w[i];
        }
    }
    den /= nf * tf;
    (2.0 / (tf * nf * (nf - 1.0))).sqrt() * num / den
}

pub fn naive_screening(e: &Array2<f64>) -> f64 {
    let (n, t) = e.dim();
    let threshold = 2.0 * ((n as f64).ln() / t as f64).sqrt();
    let mut s = 0.0;
    for i in 1..n {
        for j in 0..i {
            let r = naive_rho(e, i, j).abs();
            if r > threshold {
                s += r;
            }
        }
    }
    s
}

pub fn naive_cd_power_enhanced(e: &Array2<f64>, w: &[f64]) -> f64 {
    naive_cd_weighted(e, w) + naive_screening(e)
}

pub fn naive_xi(sigma2: &[f64]) -> f64 {
    let n = sigma2.len();
    let mut inv = 0.0;
    for v in sigma2 {
        inv += 1.0 / v.sqrt();
    }
    inv /= n as f64;
    let mut s = 0.0;
    for v in sigma2 {
        let d = 1.0 - v.sqrt() * inv;
        s += d * d;
    }
    (1.0 / (2.0 * n as f64 * (n as f64 - 1.0))).sqrt() * (s - n as f64)
}

/// `(Phi_1, Phi_2)` from explicit matrices: `B`, the block matrix
/// `diag(sum sigma_i^2, sum Sigma_i)` and the mean loading vector.
pub fn naive_phi(sigma2: &[f64], beta: &[f64], loadings: &Array2<f64>, moments: &Array2<f64>) -> (f64, f64) {
    let n = sigma2.len();
    let m = beta.len();
    let k = m + 1;
    let nf = n as f64;
    let c = (1.0 / (2.0 * nf * (nf - 1.0))).sqrt();
    let mut inv = 0.0;
    for v in sigma2 {
        inv += v.powf(-0.5);
    }
    inv /= nf;
    let mut lbar = vec![0.0; k];
    for i in 0..n {
        for a in 0..k {
            lbar[a] += loadings[[i, a]] / nf;
        }
    }
    let mut b = Array2::<f64>::zeros((k, k));
    b[[0, 0]] = 1.0;
    for a in 0..m {
        b[[a + 1, 0]] = beta[a];
        b[[a + 1, a + 1]] = 1.0;
    }
    let mut mid = Array2::<f64>::zeros((k, k));
    mid[[0, 0]] = sigma2.iter().sum();
    for a in 0..m {
        for d in 0..m {
            mid[[a + 1, d + 1]] = moments[[a, d]];
        }
    }
    // v = B lbar
    let mut v = vec![0.0; k];
    for a in 0..k {
        for d in 0..k {
            v[a] += b[[a, d]] * lbar[d];
        }
    }
    let mut quad = 0.0;
    for a in 0..k {
        for d in 0..k {
            quad += v[a] * mid[[a, d]] * v[d];
        }
    }
    let sum_sigma: f64 = sigma2.iter().map(|s| s.sqrt()).sum();
    (c * inv * inv * quad, c * inv * lbar[0] * sum_sigma)
}

pub fn naive_omega_n(e: &Array2<f64>, w: &[f64]) -> f64 {
    let (n, t) = e.dim();
    let wbar = w.iter().sum::<f64>() / n as f64;
    let mut s = 0.0;
    for i in 1..n {
        for j in 0..i {
            let mut dot = 0.0;
            for u in 0..t {
                dot += (w[i] - wbar) * e[[i, u]] * (w[j] - wbar) * e[[j, u]];
            }
            s += dot * dot;
        }
    }
    2.0 / (t as f64 * n as f64 * (n as f64 - 1.0)) * s
}

/// Random `(sigma2, beta, loadings, moments)` for the CCE bias terms.
pub fn phi_inputs(rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>, Array2<f64>, Array2<f64>) {
    let n = rng.gen_range(2..=6);
    let m = rng.gen_range(0..=3);
    let sigma2: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..4.0)).collect();
    let beta: Vec<f64> = (0..m).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let loadings = Array2::from_shape_fn((n, m + 1), |_| rng.gen_range(-2.0..2.0));
    let a = Array2::from_shape_fn((m, m), |_| rng.gen_range(-1.0..1.0));
    let moments = a.dot(&a.t());
    (sigma2, beta, loadings, moments)
}

/// Random panel with one factor, unit effects, `3 <= N <= 15`,
/// `5 <= T <= 15` and up to two regressors.
pub fn random_panel(seed: u64) -> PanelDataset {
    let mut r = rng(seed);
    let n = r.gen_range(3..=15);
    let t = r.gen_range(5..=15);
    let m = r.gen_range(0..=2);
    let f: Vec<f64> = (0..t).map(|_| r.gen_range(-2.0..2.0)).collect();
    let mut x = Array3::zeros((n, t, m));
    let mut y = Array2::zeros((n, t));
    for i in 0..n {
        let a = r.gen_range(-1.0..1.0);
        let l = r.gen_range(0.0..2.0);
        for s in 0..t {
            let mut v = a + l * f[s] + r.gen_range(-1.0..1.0);
            for k in 0..m {
                let xv = l * f[s] + r.gen_range(-1.0..1.0);
                x[[i, s, k]] = xv;
                v += 0.5 * xv;
            }
            y[[i, s]] = v;
        }
    }
    validate_panel(y, x).unwrap()
}
