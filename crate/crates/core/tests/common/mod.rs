//! Brute-force oracles that never touch the Laurent-operator code path.
#![allow(dead_code)]

use std::collections::BTreeMap;

use ndarray::Array2;
use num_complex::Complex64;
use qwalk_core::walk::Coin;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Evolves the joint coin ⊗ walker state vector step by step and returns the
/// site probabilities after each of `0..=steps` steps.
pub fn amplitude_walk(coin: Coin, c0: Complex64, d0: Complex64, steps: usize) -> Vec<BTreeMap<i64, f64>> {
    let u = coin.matrix();
    let width = 2 * steps + 3;
    let origin = steps as i64 + 1;
    let mut up = vec![Complex64::new(0.0, 0.0); width];
    let mut down = vec![Complex64::new(0.0, 0.0); width];
    up[origin as usize] = c0;
    down[origin as usize] = d0;

    let mut out = Vec::with_capacity(steps + 1);
    for n in 0..=steps {
        let mut probs = BTreeMap::new();
        for i in 0..width {
            let p = up[i].norm_sqr() + down[i].norm_sqr();
            if p > 0.0 {
                probs.insert(i as i64 - origin, p);
            }
        }
        out.push(probs);
        if n == steps {
            break;
        }
        let mut new_up = vec![Complex64::new(0.0, 0.0); width];
        let mut new_down = vec![Complex64::new(0.0, 0.0); width];
        for i in 0..width {
            let a = u[0][0] * up[i] + u[0][1] * down[i];
            let b = u[1][0] * up[i] + u[1][1] * down[i];
            if i + 1 < width {
                new_up[i + 1] += a;
            }
            if i >= 1 {
                new_down[i - 1] += b;
            }
        }
        up = new_up;
        down = new_down;
    }
    out
}

/// Dense realization of the channel that applies `V^m` to `|φ><φ| ⊗ ρ` and
/// traces the coin, iterated `iterations` times from `|0><0|`. Returns the
/// dense walker density matrix (sites `-half..=half`) after each iteration.
pub fn dense_delayed_walk(
    coin: Coin,
    c0: Complex64,
    d0: Complex64,
    m: usize,
    iterations: usize,
) -> (i64, Vec<Array2<Complex64>>) {
    let half = (m * iterations + 2) as i64;
    let w = (2 * half + 1) as usize;
    let u = coin.matrix();
    let zero = Complex64::new(0.0, 0.0);

    // Joint index: coin * w + (site + half).
    let mut v = Array2::from_elem((2 * w, 2 * w), zero);
    for s in 0..w {
        for coin_in in 0..2 {
            if s + 1 < w {
                v[[s + 1, coin_in * w + s]] += u[0][coin_in];
            }
            if s >= 1 {
                v[[w + s - 1, coin_in * w + s]] += u[1][coin_in];
            }
        }
    }
    let mut vm = Array2::from_diag(&ndarray::Array1::from_elem(2 * w, Complex64::new(1.0, 0.0)));
    for _ in 0..m {
        vm = v.dot(&vm);
    }
    let vm_dag = vm.t().mapv(|z| z.conj());
    let phi = [c0, d0];

    let mut rho = Array2::from_elem((w, w), zero);
    rho[[half as usize, half as usize]] = Complex64::new(1.0, 0.0);
    let mut out = vec![rho.clone()];
    for _ in 0..iterations {
        let mut joint = Array2::from_elem((2 * w, 2 * w), zero);
        for a in 0..2 {
            for b in 0..2 {
                let f = phi[a] * phi[b].conj();
                for i in 0..w {
                    for j in 0..w {
                        joint[[a * w + i, b * w + j]] = f * rho[[i, j]];
                    }
                }
            }
        }
        let evolved = vm.dot(&joint).dot(&vm_dag);
        let mut next = Array2::from_elem((w, w), zero);
        for k in 0..2 {
            for i in 0..w {
                for j in 0..w {
                    next[[i, j]] += evolved[[k * w + i, k * w + j]];
                }
            }
        }
        rho = next;
        out.push(rho.clone());
    }
    (half, out)
}

/// Diagonal of a dense walker density matrix as `site -> probability`.
pub fn dense_diagonal(half: i64, rho: &Array2<Complex64>) -> BTreeMap<i64, f64> {
    (0..rho.nrows())
        .filter(|&i| rho[[i, i]].re > 1e-15)
        .map(|i| (i as i64 - half, rho[[i, i]].re))
        .collect()
}

pub fn second_moment(probs: &BTreeMap<i64, f64>) -> f64 {
    probs.iter().map(|(&k, &p)| (k * k) as f64 * p).sum()
}

pub fn max_diff(a: &BTreeMap<i64, f64>, b: impl Iterator<Item = (i64, f64)>) -> f64 {
    let b: BTreeMap<i64, f64> = b.collect();
    a.keys()
        .chain(b.keys())
        .map(|k| (a.get(k).copied().unwrap_or(0.0) - b.get(k).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}

/// `C(n, k) q^k (1-q)^(n-k)` at site `2k - n`, from exact integer binomials.
pub fn binomial_oracle(n: usize, q: f64) -> BTreeMap<i64, f64> {
    let mut row: Vec<u128> = vec![1];
    for _ in 0..n {
        let mut next = vec![1u128; row.len() + 1];
        for k in 1..row.len() {
            next[k] = row[k - 1] + row[k];
        }
        row = next;
    }
    row.iter()
        .enumerate()
        .map(|(k, &b)| {
            let w = b as f64 * q.powi(k as i32) * (1.0 - q).powi((n - k) as i32);
            (2 * k as i64 - n as i64, w)
        })
        .collect()
}

pub fn shannon(probs: &BTreeMap<i64, f64>) -> f64 {
    probs.values().filter(|&&p| p > 0.0).map(|p| -p * p.ln()).sum()
}
