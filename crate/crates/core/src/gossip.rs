//! Randomized pairwise-activation dynamics: one uniformly sampled arc per
//! step, prejudice re-injection, and Cesàro–Polyak averaging of the
//! resulting non-convergent sample paths.
//!
//! Sample paths oscillate forever, but their running time averages
//! converge to the fixed point of the synchronous dynamics. Runs are
//! reproducible: replication `r` draws from generator `chacha8` seeded
//! with [`mix64`]`(master_seed, r)`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dynamics::limit_opinion;
use crate::graph::{build_graph, classify_agents, InteractionGraph};
use crate::mat::{inf_norm_vec, kron, norm2_vec, vec_sub, Matrix};
use crate::model::{NetworkModel, TOL_ROW};
use crate::spectra::analyze_spectrum;

/// Identity of the pseudo-random generator fixed by this crate, recorded
/// in run metadata so outputs stay reproducible across builds.
pub const PRNG_IDENTITY: &str = "chacha8";

/// Tolerance for the structural identities a gossip configuration must
/// satisfy.
pub const TOL_GOSSIP: f64 = 1e-9;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GossipError {
    #[error("gossip requires a model without oblivious agents")]
    ObliviousAgentsPresent,
    #[error("gossip requires a row-stochastic coupling matrix C")]
    NonStochasticC,
    #[error("gossip requires an identity initial transform D")]
    InitialTransformUnsupported,
    #[error("invalid gossip gains: {0}")]
    InvalidGamma(String),
    #[error("scalar-protocol mapping conditions violated: {0}")]
    CorollaryConditionsViolated(String),
    #[error("operation requires a scalar model (m = 1)")]
    NotScalar,
    #[error("deterministic limit unavailable: {0}")]
    LimitUnavailable(String),
}

/// Deterministic 64-bit mixer used to derive per-replication seeds:
/// `seed_r = mix64(master_seed, r)`. The constants are the SplitMix64
/// finalizer applied to `master_seed XOR r·golden_gamma`.
pub fn mix64(seed: u64, r: u64) -> u64 {
    let mut z = seed ^ r.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Configuration of a gossip run.
#[derive(Debug, Clone, PartialEq)]
pub struct GossipConfig {
    /// Neighbour-attention gains; must equal `ΛW`.
    pub gamma1: Matrix,
    /// Prejudice-attention gains; any non-negative matrix supported on
    /// the arc set with `Σ_j γ²_ij = 1 − λ_ii` and `γ¹ + γ² ≤ 1`.
    pub gamma2: Matrix,
    /// Master seed; replication `r` uses `mix64(seed, r)`.
    pub seed: u64,
    /// Arc activations per replication.
    pub steps: u64,
    /// Number of independent replications.
    pub replications: u32,
    /// Steps at which the running average is checkpointed (ascending).
    pub checkpoints: Vec<u64>,
}

/// Checkpoint grid: powers of 10 up to `steps`, plus `steps` itself.
pub fn default_checkpoints(steps: u64) -> Vec<u64> {
    let mut grid = Vec::new();
    let mut k = 10u64;
    while k < steps {
        grid.push(k);
        match k.checked_mul(10) {
            Some(next) => k = next,
            None => break,
        }
    }
    if steps > 0 {
        grid.push(steps);
    }
    grid
}

/// The gains of the ergodic reference protocol: `Γ¹ = ΛW` and
/// `Γ² = (I − Λ)W`, with seed 0, one replication and a power-of-ten
/// checkpoint grid.
pub fn default_config(model: &NetworkModel) -> Result<GossipConfig, GossipError> {
    let n = model.n();
    let gamma1 = model.lambda_w();
    let gamma2 = Matrix::from_fn(n, n, |i, j| (1.0 - model.lambda()[i]) * model.w()[(i, j)]);
    let steps = 1_000_000;
    let config = GossipConfig {
        gamma1,
        gamma2,
        seed: 0,
        steps,
        replications: 1,
        checkpoints: default_checkpoints(steps),
    };
    validate_config(model, &config)?;
    Ok(config)
}

/// Checks every structural requirement of the ergodicity theorem: no
/// oblivious agents, row-stochastic `C`, identity initial transform,
/// `Γ¹ = ΛW`, non-negative gains with `γ¹ + γ² ≤ 1` supported on the
/// arc set, and prejudice rows summing to `1 − λ_ii`.
pub fn validate_config(model: &NetworkModel, config: &GossipConfig) -> Result<(), GossipError> {
    let n = model.n();
    if !model.d_is_identity() {
        return Err(GossipError::InitialTransformUnsupported);
    }
    if !model.c().is_row_stochastic(TOL_ROW) {
        return Err(GossipError::NonStochasticC);
    }
    let graph = build_graph(model);
    let cls = classify_agents(model, &graph);
    if cls.has_oblivious() {
        return Err(GossipError::ObliviousAgentsPresent);
    }
    if (config.gamma1.rows(), config.gamma1.cols()) != (n, n)
        || (config.gamma2.rows(), config.gamma2.cols()) != (n, n)
    {
        return Err(GossipError::InvalidGamma(String::from(
            "gain matrices must be n x n",
        )));
    }
    let arc_set: Vec<(usize, usize)> = graph.arcs().to_vec();
    for i in 0..n {
        let mut row_sum2 = 0.0;
        for j in 0..n {
            let g1 = config.gamma1[(i, j)];
            let g2 = config.gamma2[(i, j)];
            if g1 < 0.0 || g2 < 0.0 {
                return Err(GossipError::InvalidGamma(alloc::format!(
                    "negative gain at ({i}, {j})"
                )));
            }
            if g1 + g2 > 1.0 + TOL_GOSSIP {
                return Err(GossipError::InvalidGamma(alloc::format!(
                    "gamma1 + gamma2 exceeds 1 at ({i}, {j})"
                )));
            }
            let on_arc = arc_set.binary_search(&(i, j)).is_ok();
            if !on_arc && g2 != 0.0 {
                return Err(GossipError::InvalidGamma(alloc::format!(
                    "gamma2 supported outside the arc set at ({i}, {j})"
                )));
            }
            let lw = model.lambda()[i] * model.w()[(i, j)];
            if (g1 - lw).abs() > TOL_GOSSIP {
                return Err(GossipError::InvalidGamma(alloc::format!(
                    "gamma1 must equal lambda_ii * w_ij at ({i}, {j})"
                )));
            }
            row_sum2 += g2;
        }
        if (row_sum2 - (1.0 - model.lambda()[i])).abs() > TOL_GOSSIP {
            return Err(GossipError::InvalidGamma(alloc::format!(
                "gamma2 row {i} sums to {row_sum2}, expected 1 - lambda_ii"
            )));
        }
    }
    Ok(())
}

/// Maps the scalar single-gain protocol (per-agent openness `h_i`,
/// pairwise gains `γ_ij`) onto a [`GossipConfig`], checking the two
/// identities it must satisfy: `(1 − h_i)·d_i = 1 − λ_ii` and
/// `h_i γ_ij = λ_ii w_ij` off the diagonal. Only scalar models.
pub fn from_scalar_gossip(
    model: &NetworkModel,
    h: &[f64],
    gamma: &Matrix,
) -> Result<GossipConfig, GossipError> {
    let n = model.n();
    if model.m() != 1 {
        return Err(GossipError::NotScalar);
    }
    if h.len() != n || gamma.rows() != n || gamma.cols() != n {
        return Err(GossipError::CorollaryConditionsViolated(String::from(
            "h or gamma has wrong dimensions",
        )));
    }
    let graph = build_graph(model);
    for (i, &hi) in h.iter().enumerate() {
        if !(0.0..=1.0).contains(&hi) {
            return Err(GossipError::CorollaryConditionsViolated(alloc::format!(
                "h[{i}] = {hi} outside [0, 1]"
            )));
        }
        let d_i = graph.out_degree(i) as f64;
        let expect = 1.0 - model.lambda()[i];
        if ((1.0 - hi) * d_i - expect).abs() > TOL_GOSSIP {
            return Err(GossipError::CorollaryConditionsViolated(alloc::format!(
                "(1 - h_i) d_i = {} differs from 1 - lambda_ii = {expect} for agent {i}",
                (1.0 - hi) * d_i
            )));
        }
    }
    for &(i, j) in graph.arcs() {
        let g = gamma[(i, j)];
        if !(0.0..=1.0).contains(&g) {
            return Err(GossipError::CorollaryConditionsViolated(alloc::format!(
                "gamma[{i}][{j}] = {g} outside [0, 1]"
            )));
        }
        if i != j && (h[i] * g - model.lambda()[i] * model.w()[(i, j)]).abs() > TOL_GOSSIP {
            return Err(GossipError::CorollaryConditionsViolated(alloc::format!(
                "h_i gamma_ij differs from lambda_ii w_ij on arc ({i}, {j})"
            )));
        }
    }

    // Diagonal gains have no effect in the scalar protocol, so the
    // canonical representative with gamma1 = ΛW is used.
    let gamma1 = model.lambda_w();
    let gamma2 = Matrix::from_fn(n, n, |i, j| {
        if model.w()[(i, j)] > 0.0 {
            1.0 - h[i]
        } else {
            0.0
        }
    });
    let steps = 1_000_000;
    let config = GossipConfig {
        gamma1,
        gamma2,
        seed: 0,
        steps,
        replications: 1,
        checkpoints: default_checkpoints(steps),
    };
    validate_config(model, &config)?;
    Ok(config)
}

/// Running-average snapshot at one checkpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub k: u64,
    /// Cesàro average `x̄(k)`.
    pub cesaro: Vec<f64>,
    /// `‖x̄(k) − x'‖₂` against the deterministic limit.
    pub dist2: f64,
    /// `‖x̄(k) − x'‖∞`.
    pub dist_inf: f64,
}

/// Outcome of a single replication.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationStats {
    /// Derived seed actually fed to the generator.
    pub seed: u64,
    /// Final sample `x(K)`.
    pub final_x: Vec<f64>,
    /// Final Cesàro average `x̄(K)`.
    pub cesaro: Vec<f64>,
    pub checkpoints: Vec<Checkpoint>,
    /// `max_k ‖x(k) − x'‖∞` over the trailing window of the run
    /// (at most the last 10⁴ steps); witnesses that sample paths keep
    /// oscillating while the averages settle.
    pub osc_max_dist_inf: f64,
}

/// Results of all replications plus the deterministic reference point.
#[derive(Debug, Clone, PartialEq)]
pub struct GossipRunStats {
    /// Fixed point `x'` of the synchronous dynamics.
    pub reference: Vec<f64>,
    pub replications: Vec<ReplicationStats>,
    /// Generator identity (see [`PRNG_IDENTITY`]).
    pub prng: &'static str,
}

/// Window length used for the oscillation statistic.
const OSC_WINDOW: u64 = 10_000;

fn kahan_add(sum: &mut [f64], comp: &mut [f64], x: &[f64]) {
    for t in 0..sum.len() {
        let y = x[t] - comp[t];
        let s = sum[t] + y;
        comp[t] = (s - sum[t]) - y;
        sum[t] = s;
    }
}

/// Runs replication `r` of a validated configuration against a known
/// deterministic limit. Exposed separately so callers may fan
/// replications out across threads; results do not depend on scheduling.
pub fn run_replication(
    model: &NetworkModel,
    config: &GossipConfig,
    graph: &InteractionGraph,
    reference: &[f64],
    r: u32,
) -> ReplicationStats {
    let m = model.m();
    let arcs = graph.arcs();
    let seed = mix64(config.seed, u64::from(r));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut x = model.u().to_vec();
    let mut sum = x.clone();
    let mut comp = vec![0.0; x.len()];
    let mut coupled = vec![0.0; m];

    let osc_start = config.steps.saturating_sub(OSC_WINDOW);
    let mut osc_max = if osc_start == 0 {
        inf_norm_vec(&vec_sub(&x, reference))
    } else {
        0.0
    };

    let mut checkpoints = Vec::with_capacity(config.checkpoints.len());
    let mut next_ckpt = config.checkpoints.iter().copied().peekable();
    while next_ckpt.peek() == Some(&0) {
        next_ckpt.next();
    }

    for k in 1..=config.steps {
        let (i, j) = arcs[rng.random_range(0..arcs.len())];
        let g1 = config.gamma1[(i, j)];
        let g2 = config.gamma2[(i, j)];
        let keep = 1.0 - g1 - g2;
        for (t, c) in coupled.iter_mut().enumerate() {
            let mut acc = 0.0;
            for s in 0..m {
                acc += model.c()[(t, s)] * x[j * m + s];
            }
            *c = acc;
        }
        let ui = model.u_agent(i);
        for t in 0..m {
            x[i * m + t] = keep * x[i * m + t] + g1 * coupled[t] + g2 * ui[t];
        }

        kahan_add(&mut sum, &mut comp, &x);

        if k >= osc_start {
            let d = inf_norm_vec(&vec_sub(&x, reference));
            if d > osc_max {
                osc_max = d;
            }
        }

        if next_ckpt.peek() == Some(&k) {
            next_ckpt.next();
            let denom = k as f64 + 1.0;
            let cesaro: Vec<f64> = sum.iter().map(|s| s / denom).collect();
            let diff = vec_sub(&cesaro, reference);
            checkpoints.push(Checkpoint {
                k,
                dist2: norm2_vec(&diff),
                dist_inf: inf_norm_vec(&diff),
                cesaro,
            });
        }
    }

    let denom = config.steps as f64 + 1.0;
    let cesaro: Vec<f64> = sum.iter().map(|s| s / denom).collect();
    ReplicationStats {
        seed,
        final_x: x,
        cesaro,
        checkpoints,
        osc_max_dist_inf: osc_max,
    }
}

/// Computes the deterministic fixed point the averages converge to.
pub fn deterministic_limit(model: &NetworkModel) -> Result<Vec<f64>, GossipError> {
    let graph = build_graph(model);
    let cls = classify_agents(model, &graph);
    let report = analyze_spectrum(model, &cls)
        .map_err(|e| GossipError::LimitUnavailable(alloc::format!("{e}")))?;
    limit_opinion(model, &cls, &report)
        .map_err(|e| GossipError::LimitUnavailable(alloc::format!("{e}")))
}

/// Validates the configuration and runs all replications sequentially in
/// replication order. Identical master seeds produce bit-identical
/// statistics.
pub fn run(model: &NetworkModel, config: &GossipConfig) -> Result<GossipRunStats, GossipError> {
    validate_config(model, config)?;
    let graph = build_graph(model);
    let reference = deterministic_limit(model)?;
    let replications = (0..config.replications)
        .map(|r| run_replication(model, config, &graph, &reference, r))
        .collect();
    Ok(GossipRunStats {
        reference,
        replications,
        prng: PRNG_IDENTITY,
    })
}

/// Exact single-step expectation of the random update: the mean update
/// matrix `E P` and mean injection vector `E v` with `E x(k+1) =
/// EP·E x(k) + Ev`, computed from the gains and the uniform arc
/// distribution. For the reference gains this equals
/// `I − α(I − ΛW ⊗ C)` and `α((I−Λ) ⊗ I_m)u` with `α = 1/|E|`.
pub fn expected_step_matrices(model: &NetworkModel, config: &GossipConfig) -> (Matrix, Vec<f64>) {
    let (n, m) = (model.n(), model.m());
    assert_eq!((config.gamma1.rows(), config.gamma1.cols()), (n, n));
    assert_eq!((config.gamma2.rows(), config.gamma2.cols()), (n, n));
    let graph = build_graph(model);
    let arcs = graph.arcs();
    let alpha = 1.0 / arcs.len() as f64;

    let mut ep = Matrix::identity(n * m);
    let mut ev = vec![0.0; n * m];
    for &(i, j) in arcs {
        let g1 = config.gamma1[(i, j)];
        let g2 = config.gamma2[(i, j)];
        for t in 0..m {
            ep[(i * m + t, i * m + t)] -= alpha * (g1 + g2);
        }
        for t in 0..m {
            for s in 0..m {
                ep[(i * m + t, j * m + s)] += alpha * g1 * model.c()[(t, s)];
            }
        }
        for t in 0..m {
            ev[i * m + t] += alpha * g2 * model.u()[i * m + t];
        }
    }
    (ep, ev)
}

/// Reference closed form of [`expected_step_matrices`] for the default
/// gains; kept public so tests and tools can cross-check the two routes.
pub fn expected_step_closed_form(model: &NetworkModel) -> (Matrix, Vec<f64>) {
    let (n, m) = (model.n(), model.m());
    let graph = build_graph(model);
    let alpha = 1.0 / graph.arc_count() as f64;
    let mut ep = kron(&model.lambda_w(), model.c()).scale(alpha);
    for i in 0..n * m {
        ep[(i, i)] += 1.0 - alpha;
    }
    let mut ev = vec![0.0; n * m];
    for i in 0..n {
        for t in 0..m {
            ev[i * m + t] = alpha * (1.0 - model.lambda()[i]) * model.u()[i * m + t];
        }
    }
    (ep, ev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{normalize_model, validate_model, ModelParts};
    use approx::assert_abs_diff_eq;

    fn reference_model(c: Matrix) -> NetworkModel {
        let w = Matrix::from_rows(&[
            vec![0.220, 0.120, 0.360, 0.300],
            vec![0.147, 0.215, 0.344, 0.294],
            vec![0.0, 0.0, 1.0, 0.0],
            vec![0.090, 0.178, 0.446, 0.286],
        ]);
        let lambda: Vec<f64> = (0..4).map(|i| 1.0 - w[(i, i)]).collect();
        normalize_model(
            validate_model(ModelParts {
                n: 4,
                m: c.rows(),
                w,
                lambda,
                c,
                d: None,
                u: vec![25.0, 25.0, 25.0, 15.0, 75.0, -50.0, 85.0, 5.0],
            })
            .unwrap(),
        )
    }

    #[test]
    fn default_config_satisfies_identities() {
        let model = reference_model(Matrix::identity(2));
        let config = default_config(&model).unwrap();
        // gamma1 + gamma2 = w entry-wise
        for i in 0..4 {
            for j in 0..4 {
                assert_abs_diff_eq!(
                    config.gamma1[(i, j)] + config.gamma2[(i, j)],
                    model.w()[(i, j)],
                    epsilon = 1e-15
                );
            }
        }
    }

    #[test]
    fn oblivious_model_is_rejected() {
        let model = normalize_model(
            validate_model(ModelParts {
                n: 2,
                m: 1,
                w: Matrix::from_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]),
                lambda: vec![1.0, 1.0],
                c: Matrix::identity(1),
                d: None,
                u: vec![1.0, -1.0],
            })
            .unwrap(),
        );
        assert_eq!(
            default_config(&model).unwrap_err(),
            GossipError::ObliviousAgentsPresent
        );
    }

    #[test]
    fn bad_prejudice_row_sum_is_rejected() {
        let model = reference_model(Matrix::identity(2));
        let mut config = default_config(&model).unwrap();
        config.gamma2[(0, 1)] *= 0.5;
        assert!(matches!(
            validate_config(&model, &config).unwrap_err(),
            GossipError::InvalidGamma(_)
        ));
    }

    #[test]
    fn non_stochastic_coupling_is_rejected() {
        let c2 = Matrix::from_rows(&[vec![0.8, -0.2], vec![-0.3, 0.7]]);
        let model = reference_model(c2);
        assert_eq!(
            default_config(&model).unwrap_err(),
            GossipError::NonStochasticC
        );
    }

    #[test]
    fn zero_gains_make_the_update_an_identity() {
        // raw update semantics, bypassing the structural validation
        let model = reference_model(Matrix::identity(2));
        let graph = build_graph(&model);
        let reference = vec![0.0; 8];
        let config = GossipConfig {
            gamma1: Matrix::zeros(4, 4),
            gamma2: Matrix::zeros(4, 4),
            seed: 3,
            steps: 500,
            replications: 1,
            checkpoints: vec![500],
        };
        let rep = run_replication(&model, &config, &graph, &reference, 0);
        assert_eq!(rep.final_x, model.u().to_vec());
        assert_eq!(rep.cesaro, model.u().to_vec());
    }

    #[test]
    fn single_agent_fixed_point_is_exact() {
        let model = normalize_model(
            validate_model(ModelParts {
                n: 1,
                m: 1,
                w: Matrix::identity(1),
                lambda: vec![0.5],
                c: Matrix::identity(1),
                d: None,
                u: vec![1.0],
            })
            .unwrap(),
        );
        // normalization keeps lambda = 0.5 only if w_00 < 1; a single
        // agent must have w_00 = 1, so lambda collapses to 0 and the
        // unique fixed point is u itself.
        let config = default_config(&model).unwrap();
        let stats = run(
            &model,
            &GossipConfig { steps: 1000, checkpoints: vec![1000], ..config },
        )
        .unwrap();
        assert_eq!(stats.reference, vec![1.0]);
        assert_eq!(stats.replications[0].cesaro, vec![1.0]);
        assert_eq!(stats.replications[0].final_x, vec![1.0]);
    }

    #[test]
    fn identical_seeds_are_bit_identical() {
        let model = reference_model(Matrix::from_rows(&[vec![0.8, 0.2], vec![0.3, 0.7]]));
        let mut config = default_config(&model).unwrap();
        config.steps = 20_000;
        config.checkpoints = default_checkpoints(20_000);
        config.seed = 7;
        config.replications = 3;
        let a = run(&model, &config).unwrap();
        let b = run(&model, &config).unwrap();
        assert_eq!(a, b);
        // different seed diverges
        config.seed = 8;
        let c = run(&model, &config).unwrap();
        assert_ne!(a.replications[0].final_x, c.replications[0].final_x);
    }

    #[test]
    fn expectation_matrices_match_closed_form_for_defaults() {
        let model = reference_model(Matrix::from_rows(&[vec![0.8, 0.2], vec![0.3, 0.7]]));
        let config = default_config(&model).unwrap();
        let (ep, ev) = expected_step_matrices(&model, &config);
        let (ep_ref, ev_ref) = expected_step_closed_form(&model);
        assert!(ep.sub(&ep_ref).max_abs() < 1e-14);
        for (a, b) in ev.iter().zip(&ev_ref) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn reference_arc_count_gives_alpha_one_thirteenth() {
        let model = reference_model(Matrix::identity(2));
        let graph = build_graph(&model);
        assert_eq!(graph.arc_count(), 13);
    }

    #[test]
    fn zero_gain_config_yields_identity_expectation() {
        let model = reference_model(Matrix::identity(2));
        let config = GossipConfig {
            gamma1: Matrix::zeros(4, 4),
            gamma2: Matrix::zeros(4, 4),
            seed: 0,
            steps: 0,
            replications: 0,
            checkpoints: vec![],
        };
        let (ep, ev) = expected_step_matrices(&model, &config);
        assert!(ep.sub(&Matrix::identity(8)).max_abs() == 0.0);
        assert!(ev.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn scalar_protocol_mapping_round_trip() {
        // every agent has equal openness consistent with its degree
        let w = Matrix::from_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]);
        let lambda = vec![0.5, 0.5];
        let model = normalize_model(
            validate_model(ModelParts {
                n: 2,
                m: 1,
                w,
                lambda,
                c: Matrix::identity(1),
                d: None,
                u: vec![1.0, -1.0],
            })
            .unwrap(),
        );
        // d_i = 2, so h_i = 1 - (1 - lambda_ii)/d_i = 0.75
        let h = vec![0.75, 0.75];
        let gamma = Matrix::from_fn(2, 2, |i, j| {
            model.lambda()[i] * model.w()[(i, j)] / h[i]
        });
        let config = from_scalar_gossip(&model, &h, &gamma).unwrap();
        assert_abs_diff_eq!(config.gamma2[(0, 0)], 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(config.gamma2[(0, 1)], 0.25, epsilon = 1e-15);
    }

    #[test]
    fn open_minded_agents_cannot_host_stubborn_model() {
        let w = Matrix::from_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]);
        let model = normalize_model(
            validate_model(ModelParts {
                n: 2,
                m: 1,
                w,
                lambda: vec![0.5, 0.5],
                c: Matrix::identity(1),
                d: None,
                u: vec![1.0, -1.0],
            })
            .unwrap(),
        );
        let h = vec![1.0, 1.0];
        let gamma = Matrix::from_fn(2, 2, |_, _| 0.5);
        assert!(matches!(
            from_scalar_gossip(&model, &h, &gamma).unwrap_err(),
            GossipError::CorollaryConditionsViolated(_)
        ));
    }
}
