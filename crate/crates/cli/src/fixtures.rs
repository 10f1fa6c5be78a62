//! Bundled example inputs: the 4-agent reference network under three
//! issue couplings, their pure-averaging variants, a seeded 51-agent
//! hierarchy, and two identification data sets.

use opdyn_core::mat::Matrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::io::{IdentifyFile, ModelFile, Observations};

pub const REFERENCE_U: [[f64; 2]; 4] = [[25.0, 25.0], [25.0, 15.0], [75.0, -50.0], [85.0, 5.0]];

pub fn reference_w() -> Vec<Vec<f64>> {
    vec![
        vec![0.220, 0.120, 0.360, 0.300],
        vec![0.147, 0.215, 0.344, 0.294],
        vec![0.0, 0.0, 1.0, 0.0],
        vec![0.090, 0.178, 0.446, 0.286],
    ]
}

pub fn coupling_identity() -> Vec<Vec<f64>> {
    vec![vec![1.0, 0.0], vec![0.0, 1.0]]
}

pub fn coupling_positive() -> Vec<Vec<f64>> {
    vec![vec![0.8, 0.2], vec![0.3, 0.7]]
}

pub fn coupling_opposing() -> Vec<Vec<f64>> {
    vec![vec![0.8, -0.2], vec![-0.3, 0.7]]
}

fn reference_lambda() -> Vec<f64> {
    let w = reference_w();
    (0..4).map(|i| 1.0 - w[i][i]).collect()
}

/// The 4-agent reference network with a chosen issue coupling.
pub fn network4(c: Vec<Vec<f64>>) -> ModelFile {
    ModelFile {
        n: 4,
        m: 2,
        w: reference_w(),
        lambda: reference_lambda(),
        c,
        d: None,
        u: REFERENCE_U.iter().map(|a| a.to_vec()).collect(),
    }
}

/// The same network with fully susceptible agents (pure averaging).
pub fn degroot4(c: Vec<Vec<f64>>) -> ModelFile {
    ModelFile {
        n: 4,
        m: 2,
        w: reference_w(),
        lambda: vec![1.0; 4],
        c,
        d: None,
        u: REFERENCE_U.iter().map(|a| a.to_vec()).collect(),
    }
}

/// Seed of the 51-agent hierarchy builder; fixed so the fixture is the
/// same on every machine.
pub const HIERARCHY_SEED: u64 = 51;

/// A hierarchy of one totally stubborn leader plus ten 5-agent groups.
/// Each group has a local leader: the first follows the top leader with
/// weight 0.9 (self-weight 0.1), later ones follow their predecessor
/// with weight 0.5. Remaining members mix the local leader, each other
/// and themselves with seeded random weights. Susceptibilities are
/// `1 - w_ii`; prejudices are uniform in `[-10, 10]` except the leader's
/// fixed `[100, -100]`.
pub fn hierarchy51() -> ModelFile {
    let n = 51;
    let groups = 10;
    let mut rng = ChaCha8Rng::seed_from_u64(HIERARCHY_SEED);
    let mut w = Matrix::zeros(n, n);
    w[(0, 0)] = 1.0;
    for g in 0..groups {
        let base = 1 + 5 * g;
        let leader = base;
        if g == 0 {
            w[(leader, 0)] = 0.9;
            w[(leader, leader)] = 0.1;
        } else {
            w[(leader, base - 5)] = 0.5;
            w[(leader, leader)] = 0.5;
        }
        for i in base + 1..base + 5 {
            let mut sum = 0.0;
            for j in base..base + 5 {
                let v = rng.random_range(0.1..1.0);
                w[(i, j)] = v;
                sum += v;
            }
            for j in base..base + 5 {
                w[(i, j)] /= sum;
            }
        }
    }
    let lambda: Vec<f64> = (0..n).map(|i| 1.0 - w[(i, i)]).collect();
    let mut u = vec![vec![100.0, -100.0]];
    for _ in 1..n {
        u.push(vec![
            rng.random_range(-10.0..10.0),
            rng.random_range(-10.0..10.0),
        ]);
    }
    ModelFile {
        n,
        m: 2,
        w: (0..n).map(|i| w.row(i).to_vec()).collect(),
        lambda,
        c: vec![vec![0.9, 0.1], vec![0.1, 0.9]],
        d: None,
        u,
    }
}

/// Steady-state identification data for the reference network.
pub fn identify_steady() -> IdentifyFile {
    IdentifyFile {
        n: 4,
        m: 2,
        w: reference_w(),
        lambda: reference_lambda(),
        u: REFERENCE_U.iter().map(|a| a.to_vec()).collect(),
        observations: Observations::Infinite {
            x_prime: vec![
                vec![35.0, 11.0],
                vec![35.0, 10.0],
                vec![75.0, -50.0],
                vec![53.0, 5.0],
            ],
        },
    }
}

/// Three recorded rounds of the reference network for finite-horizon
/// identification.
pub fn identify_rounds() -> IdentifyFile {
    IdentifyFile {
        n: 4,
        m: 2,
        w: reference_w(),
        lambda: reference_lambda(),
        u: REFERENCE_U.iter().map(|a| a.to_vec()).collect(),
        observations: Observations::Finite {
            rounds: vec![
                vec![
                    vec![42.80, 14.05],
                    vec![43.59, 12.51],
                    vec![75.0, -50.0],
                    vec![61.49, 7.18],
                ],
                vec![
                    vec![41.31, 13.37],
                    vec![41.45, 11.43],
                    vec![75.0, -50.0],
                    vec![55.48, 6.45],
                ],
                vec![
                    vec![41.74, 12.30],
                    vec![40.41, 10.84],
                    vec![75.0, -50.0],
                    vec![58.99, 6.02],
                ],
            ],
        },
    }
}

/// All bundled fixtures with their file names.
pub fn all() -> Vec<(&'static str, serde_json::Value)> {
    vec![
        (
            "network4_identity.json",
            serde_json::to_value(network4(coupling_identity())).unwrap(),
        ),
        (
            "network4_coupled.json",
            serde_json::to_value(network4(coupling_positive())).unwrap(),
        ),
        (
            "network4_opposing.json",
            serde_json::to_value(network4(coupling_opposing())).unwrap(),
        ),
        (
            "degroot_identity.json",
            serde_json::to_value(degroot4(coupling_identity())).unwrap(),
        ),
        (
            "degroot_coupled.json",
            serde_json::to_value(degroot4(coupling_positive())).unwrap(),
        ),
        (
            "degroot_opposing.json",
            serde_json::to_value(degroot4(coupling_opposing())).unwrap(),
        ),
        (
            "hierarchy51.json",
            serde_json::to_value(hierarchy51()).unwrap(),
        ),
        (
            "identify_steady.json",
            serde_json::to_value(identify_steady()).unwrap(),
        ),
        (
            "identify_rounds.json",
            serde_json::to_value(identify_rounds()).unwrap(),
        ),
    ]
}
