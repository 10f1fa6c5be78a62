//! Shared fixtures and seeded model generators for the property suites.

#![allow(dead_code)]

use opdyn_core::mat::Matrix;
use opdyn_core::model::{normalize_model, validate_model, ModelParts, NetworkModel};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The 4-agent network used throughout: one totally stubborn agent, the
/// rest stubborn, influences as published.
pub fn reference_w() -> Matrix {
    Matrix::from_rows(&[
        vec![0.220, 0.120, 0.360, 0.300],
        vec![0.147, 0.215, 0.344, 0.294],
        vec![0.0, 0.0, 1.0, 0.0],
        vec![0.090, 0.178, 0.446, 0.286],
    ])
}

pub fn reference_u() -> Vec<f64> {
    vec![25.0, 25.0, 25.0, 15.0, 75.0, -50.0, 85.0, 5.0]
}

pub fn reference_model(c: Matrix) -> NetworkModel {
    let w = reference_w();
    let lambda: Vec<f64> = (0..4).map(|i| 1.0 - w[(i, i)]).collect();
    normalize_model(
        validate_model(ModelParts {
            n: 4,
            m: c.rows(),
            w,
            lambda,
            c,
            d: None,
            u: reference_u(),
        })
        .unwrap(),
    )
}

pub fn coupling_positive() -> Matrix {
    Matrix::from_rows(&[vec![0.8, 0.2], vec![0.3, 0.7]])
}

pub fn coupling_opposing() -> Matrix {
    Matrix::from_rows(&[vec![0.8, -0.2], vec![-0.3, 0.7]])
}

/// Random row-stochastic matrix with full support.
pub fn random_stochastic(rng: &mut ChaCha8Rng, d: usize) -> Matrix {
    let mut m = Matrix::from_fn(d, d, |_, _| rng.random_range(0.05..1.0));
    for i in 0..d {
        let s: f64 = m.row(i).iter().sum();
        for x in m.row_mut(i) {
            *x /= s;
        }
    }
    m
}

/// Random row-stochastic matrix with a random sparsity pattern; every
/// row keeps at least `min_support` positive entries.
pub fn random_sparse_stochastic(rng: &mut ChaCha8Rng, d: usize, min_support: usize) -> Matrix {
    let mut m = Matrix::zeros(d, d);
    for i in 0..d {
        let support = rng.random_range(min_support..=d);
        let mut cols: Vec<usize> = (0..d).collect();
        for k in 0..support {
            let pick = rng.random_range(k..d);
            cols.swap(k, pick);
        }
        let mut s = 0.0;
        for &j in &cols[..support] {
            let v = rng.random_range(0.05..1.0);
            m[(i, j)] = v;
            s += v;
        }
        for j in 0..d {
            m[(i, j)] /= s;
        }
    }
    m
}

/// A stable model: every agent stubborn with susceptibility at most
/// `lambda_cap`, issue coupling either identity or row-stochastic.
pub fn random_stable_model(
    rng: &mut ChaCha8Rng,
    n_max: usize,
    m_max: usize,
    lambda_cap: f64,
) -> NetworkModel {
    let n = rng.random_range(2..=n_max);
    let m = rng.random_range(1..=m_max);
    let w = random_sparse_stochastic(rng, n, 2);
    let lambda: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..lambda_cap)).collect();
    let c = if rng.random_range(0..3) == 0 {
        Matrix::identity(m)
    } else {
        random_stochastic(rng, m)
    };
    let u: Vec<f64> = (0..n * m).map(|_| rng.random_range(-1.0..1.0)).collect();
    normalize_model(
        validate_model(ModelParts { n, m, w, lambda, c, d: None, u }).unwrap(),
    )
}

/// A model with a planted oblivious block, scrambled by a random
/// relabeling. Returns the model together with the planted oblivious
/// index set (sorted, in the scrambled labels). Oblivious rows keep at
/// least two support entries so normalization cannot reclassify them.
pub fn planted_oblivious_model(
    rng: &mut ChaCha8Rng,
    n_max: usize,
    m: usize,
    aperiodic_block: bool,
) -> (NetworkModel, Vec<usize>) {
    let n = rng.random_range(4..=n_max.max(4));
    let n_ob = if rng.random_range(0..4) == 0 {
        0
    } else {
        rng.random_range(2..=(n - 2).max(2))
    };
    let np = n - n_ob;

    let mut w = Matrix::zeros(n, n);
    let mut lambda = vec![1.0; n];

    // agent 0 is stubborn; every other non-oblivious agent has a walk
    // down to it
    lambda[0] = rng.random_range(0.0..0.9);
    for i in 0..np {
        if i > 0 && rng.random_range(0..3) == 0 {
            lambda[i] = rng.random_range(0.0..0.9);
        }
        let down = if i > 0 { rng.random_range(0..i) } else { 0 };
        w[(i, down)] = rng.random_range(0.1..1.0);
        let extras = rng.random_range(1..=3usize);
        for _ in 0..extras {
            let j = rng.random_range(0..n);
            w[(i, j)] += rng.random_range(0.05..1.0);
        }
        let s: f64 = w.row(i).iter().sum();
        for x in w.row_mut(i) {
            *x /= s;
        }
    }

    // oblivious block: fully susceptible, support strictly inside the
    // block, at least two entries per row
    for i in np..n {
        if aperiodic_block {
            for j in np..n {
                w[(i, j)] = rng.random_range(0.05..1.0);
            }
        } else {
            let next = np + ((i - np + 1) % n_ob.max(1));
            w[(i, next)] = rng.random_range(0.3..1.0);
            w[(i, i)] += rng.random_range(0.05..0.5);
        }
        let s: f64 = w.row(i).iter().sum();
        for x in w.row_mut(i) {
            *x /= s;
        }
    }

    // scramble labels; relabel maps planted index -> new index
    let mut relabel: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let pick = rng.random_range(k..n);
        relabel.swap(k, pick);
    }
    let mut w_new = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            w_new[(relabel[i], relabel[j])] = w[(i, j)];
        }
    }
    let mut lambda_new = vec![0.0; n];
    for i in 0..n {
        lambda_new[relabel[i]] = lambda[i];
    }
    let mut oblivious: Vec<usize> = (np..n).map(|i| relabel[i]).collect();
    oblivious.sort_unstable();

    let u: Vec<f64> = (0..n * m).map(|_| rng.random_range(-1.0..1.0)).collect();
    let model = normalize_model(
        validate_model(ModelParts {
            n,
            m,
            w: w_new,
            lambda: lambda_new,
            c: Matrix::identity(m),
            d: None,
            u,
        })
        .unwrap(),
    );
    (model, oblivious)
}
