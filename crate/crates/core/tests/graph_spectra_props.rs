//! Cross-module properties tying the combinatorial classification to the
//! spectral machinery.

mod common;

use common::*;
use opdyn_core::graph::{build_graph, classify_agents, maximal_stochastic_subset};
use opdyn_core::mat::{kron, solve, Matrix};
use opdyn_core::model::TOL_ROW;
use opdyn_core::spectra::{
    eigenvalues, is_regular, limit_power, spectral_radius, LimitMode,
};
use rand::Rng;

/// The oblivious index set found by graph classification must equal the
/// maximal stochastic subset of `ΛW`, across planted random models.
#[test]
fn classification_agrees_with_stochastic_subset_on_200_models() {
    let mut rng = rng(0x5EED_0001);
    for trial in 0..200 {
        let aperiodic = trial % 2 == 0;
        let (model, planted) = planted_oblivious_model(&mut rng, 10, 1, aperiodic);
        let cls = classify_agents(&model, &build_graph(&model));
        let from_cls = cls.oblivious_indices();
        let from_subset = maximal_stochastic_subset(&model.lambda_w()).unwrap();
        assert_eq!(from_cls, from_subset, "trial {trial}");
        assert_eq!(from_cls, planted, "trial {trial}: planted set mismatch");
    }
}

/// Exhaustive search on small substochastic matrices: unions of
/// stochastic subsets are stochastic, and the fixpoint algorithm finds
/// the maximal one.
#[test]
fn stochastic_subsets_are_closed_under_union() {
    let mut rng = rng(0x5EED_0002);
    for _ in 0..60 {
        let n = rng.random_range(2..=6usize);
        // random substochastic matrix with some stochastic structure
        let mut a = Matrix::zeros(n, n);
        let block = rng.random_range(0..=n);
        for i in 0..n {
            if i < block {
                // row stochastic inside the leading block
                let mut s = 0.0;
                for j in 0..block {
                    a[(i, j)] = rng.random_range(0.01..1.0);
                    s += a[(i, j)];
                }
                for j in 0..block {
                    a[(i, j)] /= s;
                }
            } else {
                let deficit = rng.random_range(0.05..0.9);
                let mut s = 0.0;
                for j in 0..n {
                    a[(i, j)] = rng.random_range(0.0..1.0);
                    s += a[(i, j)];
                }
                for j in 0..n {
                    a[(i, j)] *= (1.0 - deficit) / s;
                }
            }
        }

        let is_stochastic_subset = |set: &[usize]| -> bool {
            !set.is_empty()
                && set.iter().all(|&i| {
                    let s: f64 = set.iter().map(|&j| a[(i, j)]).sum();
                    (s - 1.0).abs() <= TOL_ROW
                })
        };

        let mut subsets: Vec<Vec<usize>> = Vec::new();
        for mask in 1u32..(1 << n) {
            let set: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            if is_stochastic_subset(&set) {
                subsets.push(set);
            }
        }
        for s1 in &subsets {
            for s2 in &subsets {
                let mut union: Vec<usize> = s1.iter().chain(s2).copied().collect();
                union.sort_unstable();
                union.dedup();
                assert!(
                    is_stochastic_subset(&union),
                    "union of stochastic subsets must be stochastic"
                );
            }
        }
        let brute_max = subsets.iter().max_by_key(|s| s.len()).cloned().unwrap_or_default();
        let algo = maximal_stochastic_subset(&a).unwrap();
        assert_eq!(algo, brute_max);
    }
}

/// Under the classification permutation the lower-left block of `ΛW`
/// must be exactly zero.
#[test]
fn permuted_coupling_matrix_is_block_triangular() {
    let mut rng = rng(0x5EED_0003);
    for _ in 0..80 {
        let (model, _) = planted_oblivious_model(&mut rng, 9, 1, true);
        let cls = classify_agents(&model, &build_graph(&model));
        let lw = cls.permute_square(&model.lambda_w());
        for i in cls.n_prime..model.n() {
            for j in 0..cls.n_prime {
                assert_eq!(lw[(i, j)], 0.0, "lower-left block must vanish");
            }
        }
    }
}

/// Graph-based regularity must agree with the spectral criterion: all
/// eigenvalues other than (multiples of) 1 strictly inside the unit
/// circle, and full regularity exactly when 1 is simple.
#[test]
fn regularity_matches_spectral_criterion_on_500_matrices() {
    let mut rng = rng(0x5EED_0004);
    let tol = 1e-6;
    for trial in 0..500 {
        let d = rng.random_range(2..=8usize);
        let a = match trial % 5 {
            // dense positive: primitive
            0 => random_stochastic(&mut rng, d),
            // pure cycle: periodic for d > 1
            1 => Matrix::from_fn(d, d, |i, j| if j == (i + 1) % d { 1.0 } else { 0.0 }),
            // cycle with one lazy node: aperiodic
            2 => {
                let mut m = Matrix::from_fn(d, d, |i, j| if j == (i + 1) % d { 1.0 } else { 0.0 });
                if d > 1 {
                    m[(0, 1)] = 0.6;
                    m[(0, 0)] = 0.4;
                }
                m
            }
            // two closed positive blocks: regular, not fully regular
            3 => {
                let k = (d / 2).max(1);
                let k2 = d - k;
                if k2 == 0 {
                    random_stochastic(&mut rng, d)
                } else {
                    let b1 = random_stochastic(&mut rng, k);
                    let b2 = random_stochastic(&mut rng, k2);
                    let mut m = Matrix::zeros(d, d);
                    for i in 0..k {
                        for j in 0..k {
                            m[(i, j)] = b1[(i, j)];
                        }
                    }
                    for i in 0..k2 {
                        for j in 0..k2 {
                            m[(k + i, k + j)] = b2[(i, j)];
                        }
                    }
                    m
                }
            }
            // random sparse
            _ => random_sparse_stochastic(&mut rng, d, 1),
        };
        let graph_route = is_regular(&a).unwrap();
        let eigs = eigenvalues(&a).unwrap();
        let near_one = |e: &num_complex::Complex64| (e - 1.0).norm() <= tol;
        let spectral_regular = eigs
            .iter()
            .all(|e| e.norm() < 1.0 - tol || near_one(e));
        let ones = eigs.iter().filter(|e| near_one(e)).count();
        assert_eq!(
            graph_route.regular, spectral_regular,
            "trial {trial}: regularity mismatch for {a:?} eigs {eigs:?}"
        );
        if graph_route.regular {
            assert_eq!(
                graph_route.fully_regular,
                ones == 1,
                "trial {trial}: full-regularity mismatch for {a:?} eigs {eigs:?}"
            );
        }
    }
}

/// The spectrum of a Kronecker product consists of all pairwise
/// eigenvalue products, so spectral radii multiply.
#[test]
fn kronecker_spectral_radius_is_product() {
    let mut rng = rng(0x5EED_0005);
    for _ in 0..40 {
        let p = rng.random_range(1..=5usize);
        let q = rng.random_range(1..=5usize);
        let a = Matrix::from_fn(p, p, |_, _| rng.random_range(-1.0..1.0));
        let b = Matrix::from_fn(q, q, |_, _| rng.random_range(-1.0..1.0));
        let lhs = spectral_radius(&kron(&a, &b)).unwrap();
        let rhs = spectral_radius(&a).unwrap() * spectral_radius(&b).unwrap();
        assert!(
            (lhs - rhs).abs() <= 1e-7 * (1.0 + rhs),
            "rho(kron) = {lhs} vs product {rhs}"
        );
    }
}

/// `A*` is the projector onto the fixed subspace: `A A* = A* A = A* A* = A*`.
#[test]
fn power_limit_is_a_projector() {
    let mut rng = rng(0x5EED_0006);
    for _ in 0..60 {
        let d = rng.random_range(2..=7usize);
        let a = if rng.random_range(0..2) == 0 {
            random_stochastic(&mut rng, d)
        } else {
            // absorbing structure: a few identity rows, others dense
            let mut m = random_stochastic(&mut rng, d);
            for i in 0..rng.random_range(1..=d) {
                for j in 0..d {
                    m[(i, j)] = if i == j { 1.0 } else { 0.0 };
                }
            }
            m
        };
        if !is_regular(&a).unwrap().regular {
            continue;
        }
        let star = limit_power(&a, LimitMode::RowStochastic).unwrap();
        for (label, prod) in [
            ("A*A", a.matmul(&star)),
            ("A*·A", star.matmul(&a)),
            ("A*·A*", star.matmul(&star)),
        ] {
            assert!(
                prod.sub(&star).max_abs() < 1e-9,
                "{label} deviates from A* by {}",
                prod.sub(&star).max_abs()
            );
        }
    }
}

/// The power limit agrees with the resolvent limit
/// `(I − αA)⁻¹ (1 − α)` as `α → 1`.
#[test]
fn power_limit_matches_resolvent_limit() {
    let mut rng = rng(0x5EED_0007);
    let alpha = 1.0 - 1e-6;
    for _ in 0..40 {
        let d = rng.random_range(2..=6usize);
        let mut a = random_stochastic(&mut rng, d);
        if rng.random_range(0..2) == 0 {
            for j in 0..d {
                a[(0, j)] = if j == 0 { 1.0 } else { 0.0 };
            }
        }
        let star = limit_power(&a, LimitMode::RowStochastic).unwrap();
        // columns of (I - alpha A)^{-1} (1 - alpha)
        let mut sys = a.scale(-alpha);
        for i in 0..d {
            sys[(i, i)] += 1.0;
        }
        for j in 0..d {
            let mut e = vec![0.0; d];
            e[j] = 1.0 - alpha;
            let col = solve(&sys, &e).unwrap();
            for i in 0..d {
                assert!(
                    (col[i] - star[(i, j)]).abs() < 1e-4,
                    "resolvent route differs at ({i}, {j}): {} vs {}",
                    col[i],
                    star[(i, j)]
                );
            }
        }
    }
}
