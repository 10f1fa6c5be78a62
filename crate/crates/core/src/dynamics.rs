//! Deterministic synchronous opinion dynamics: stepping, simulation to a
//! fixed point, closed-form limit opinions, the stubborn approximation
//! and the geometric-series decomposition of the limit.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::graph::AgentClassification;
use crate::mat::{inf_norm_vec, kron, vec_sub, Lu, Matrix};
use crate::model::{NetworkModel, OpinionState};
use crate::spectra::{w22_block, SpectralReport};

/// Default stopping tolerance of [`simulate`], well below the precision
/// at which limit opinions are usually reported.
pub const DEFAULT_CONV_TOL: f64 = 1e-10;
/// A trajectory whose ∞-norm exceeds this is declared divergent.
pub const DIVERGENCE_GUARD: f64 = 1e12;

#[derive(Debug, Clone, Copy, Error, PartialEq, Eq)]
pub enum DynamicsError {
    #[error("model does not converge: {0}")]
    NotConvergent(&'static str),
    #[error("linear system is singular")]
    SingularSystem,
    #[error("coupling-matrix powers of ΛW have no limit")]
    NotRegular,
    #[error("operation requires a scalar model (m = 1)")]
    NotScalar,
    #[error("operation requires m = 1 or identity issue coupling")]
    CouplingNotIdentity,
    #[error("alpha must lie in [0, 1)")]
    BadAlpha,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminationReason {
    /// Consecutive states differed by less than the tolerance.
    Converged,
    /// The step budget ran out first.
    StepCap,
    /// The state norm crossed [`DIVERGENCE_GUARD`].
    Diverged,
}

/// A simulated trajectory `x(0), …, x(K)` with the reason it stopped.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub states: Vec<OpinionState>,
    pub termination: TerminationReason,
}

impl Trajectory {
    pub fn last(&self) -> &OpinionState {
        self.states.last().expect("trajectory holds at least x(0)")
    }
}

/// One synchronous update of the stacked opinion vector, computed
/// agent-wise so the `nm × nm` Kronecker matrix is never materialized.
pub fn step(model: &NetworkModel, x: &[f64]) -> Vec<f64> {
    let (n, m) = (model.n(), model.m());
    assert_eq!(x.len(), n * m, "stacked vector length differs from n*m");
    let mut out = vec![0.0; n * m];
    let mut avg = vec![0.0; m];
    for i in 0..n {
        avg.fill(0.0);
        for j in 0..n {
            let w = model.w()[(i, j)];
            if w == 0.0 {
                continue;
            }
            for (t, a) in avg.iter_mut().enumerate() {
                *a += w * x[j * m + t];
            }
        }
        let coupled = model.c().matvec(&avg);
        let li = model.lambda()[i];
        let ui = model.u_agent(i);
        for t in 0..m {
            out[i * m + t] = li * coupled[t] + (1.0 - li) * ui[t];
        }
    }
    out
}

/// Iterates [`step`] from `x(0) = (I ⊗ D) u` until consecutive states
/// agree to `conv_tol` in the ∞-norm, the step budget is exhausted, or
/// the state norm crosses the divergence guard.
pub fn simulate(model: &NetworkModel, max_steps: usize, conv_tol: f64) -> Trajectory {
    assert!(conv_tol > 0.0, "conv_tol must be positive");
    let mut states = Vec::with_capacity(max_steps.min(1024) + 1);
    states.push(OpinionState { k: 0, x: model.initial_opinions() });
    for k in 1..=max_steps {
        let x = step(model, &states[states.len() - 1].x);
        let delta = inf_norm_vec(&vec_sub(&x, &states[states.len() - 1].x));
        let norm = inf_norm_vec(&x);
        states.push(OpinionState { k, x });
        if delta < conv_tol {
            return Trajectory { states, termination: TerminationReason::Converged };
        }
        if norm > DIVERGENCE_GUARD {
            return Trajectory { states, termination: TerminationReason::Diverged };
        }
    }
    Trajectory { states, termination: TerminationReason::StepCap }
}

/// Right-hand side `((I − Λ) ⊗ I_m) u` of the stacked update.
fn prejudice_injection(model: &NetworkModel) -> Vec<f64> {
    let (n, m) = (model.n(), model.m());
    let mut b = vec![0.0; n * m];
    for i in 0..n {
        let f = 1.0 - model.lambda()[i];
        for t in 0..m {
            b[i * m + t] = f * model.u()[i * m + t];
        }
    }
    b
}

/// Closed-form limit opinion vector.
///
/// Stable models solve `(I − ΛW ⊗ C) x' = ((I − Λ) ⊗ I_m) u` directly by
/// LU on the assembled system. Models that are merely convergent (some
/// agents oblivious, `C` regular, and either `C* = 0` or `W22` regular)
/// are assembled blockwise from the permuted decomposition; the optional
/// initial transform `D` enters through the oblivious block only.
pub fn limit_opinion(
    model: &NetworkModel,
    cls: &AgentClassification,
    report: &SpectralReport,
) -> Result<Vec<f64>, DynamicsError> {
    let m = model.m();
    if report.stable {
        let sys = stacked_system(model);
        let lu = Lu::factor(&sys).map_err(|_| DynamicsError::SingularSystem)?;
        return Ok(lu.solve(&prejudice_injection(model)));
    }

    if !cls.has_oblivious() || !report.regular_c {
        return Err(DynamicsError::NotConvergent(
            "spectral product is not below 1 and the oblivious-block conditions fail",
        ));
    }
    let c_star = report.c_star.as_ref().expect("present when regular_c");
    if !c_star.is_zero() && report.regular_w22 != Some(true) {
        return Err(DynamicsError::NotConvergent(
            "C* is nonzero and W22 is not regular",
        ));
    }
    let w22 = w22_block(model, cls);
    let w22_star = report
        .w22_star
        .clone()
        .unwrap_or_else(|| Matrix::zeros(w22.rows(), w22.cols()));

    let n = model.n();
    let np = cls.n_prime;
    let nob = n - np;
    let lw = cls.permute_square(&model.lambda_w());
    let u_perm = cls.permute_stacked(model.u(), m);
    let (u1, u2) = u_perm.split_at(np * m);

    // y1 = ((I − Λ11) ⊗ I_m) u1 + ((Λ11 W12 W22*) ⊗ (C C* D)) u2
    let lambda_perm: Vec<f64> = cls.permutation.iter().map(|&i| model.lambda()[i]).collect();
    let mut y1 = vec![0.0; np * m];
    for i in 0..np {
        let f = 1.0 - lambda_perm[i];
        for t in 0..m {
            y1[i * m + t] = f * u1[i * m + t];
        }
    }
    let mut y2 = vec![0.0; nob * m];
    if nob > 0 {
        let top: Vec<usize> = (0..np).collect();
        let bottom: Vec<usize> = (np..n).collect();
        let ccd = model.c().matmul(c_star).matmul(model.d());
        let csd = c_star.matmul(model.d());
        if np > 0 {
            let coupling = kron(&lw.block(&top, &bottom).matmul(&w22_star), &ccd);
            let add = coupling.matvec(u2);
            for (y, a) in y1.iter_mut().zip(&add) {
                *y += a;
            }
        }
        y2 = kron(&w22_star, &csd).matvec(u2);
    }

    // x1 solves (I − (Λ11 W11) ⊗ C) x1 = y1
    let mut x_perm = vec![0.0; n * m];
    if np > 0 {
        let top: Vec<usize> = (0..np).collect();
        let mut sys = kron(&lw.block(&top, &top), model.c()).scale(-1.0);
        for i in 0..np * m {
            sys[(i, i)] += 1.0;
        }
        let lu = Lu::factor(&sys).map_err(|_| DynamicsError::SingularSystem)?;
        let x1 = lu.solve(&y1);
        x_perm[..np * m].copy_from_slice(&x1);
    }
    x_perm[np * m..].copy_from_slice(&y2);

    Ok(cls.unpermute_stacked(&x_perm, m))
}

/// `I − ΛW ⊗ C` assembled explicitly (desk scale).
fn stacked_system(model: &NetworkModel) -> Matrix {
    let nm = model.n() * model.m();
    let mut sys = kron(&model.lambda_w(), model.c()).scale(-1.0);
    for i in 0..nm {
        sys[(i, i)] += 1.0;
    }
    sys
}

/// Limit of the stubborn approximation: `x'_α = (I − αΛW)⁻¹(I − αΛ)u`,
/// which tends to the true limit opinion as `α ↑ 1` for every convergent
/// model. Requires `m = 1` or `C = I`; accepts `α ∈ [0, 1)`.
pub fn alpha_approximation(model: &NetworkModel, alpha: f64) -> Result<Vec<f64>, DynamicsError> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(DynamicsError::BadAlpha);
    }
    let (n, m) = (model.n(), model.m());
    if m > 1 && *model.c() != Matrix::identity(m) {
        return Err(DynamicsError::CouplingNotIdentity);
    }
    let mut sys = model.lambda_w().scale(-alpha);
    for i in 0..n {
        sys[(i, i)] += 1.0;
    }
    let lu = Lu::factor(&sys).map_err(|_| DynamicsError::SingularSystem)?;
    let mut out = vec![0.0; n * m];
    let mut rhs = vec![0.0; n];
    for t in 0..m {
        for i in 0..n {
            rhs[i] = (1.0 - alpha * model.lambda()[i]) * model.u()[i * m + t];
        }
        let col = lu.solve(&rhs);
        for i in 0..n {
            out[i * m + t] = col[i];
        }
    }
    Ok(out)
}

/// The two summands of the limit decomposition `x' = A* u + Σ (ΛW)^k (I−Λ) u`
/// for scalar models with regular `ΛW`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesDecomposition {
    /// Value of the geometric series `Σ_k (ΛW)^k (I − Λ) u`.
    pub series: Vec<f64>,
    /// `A* u`, the influence of initial opinions that survives the limit.
    pub a_star_u: Vec<f64>,
}

/// Evaluates the series `Σ (ΛW)^k (I−Λ)u` in closed form together with
/// `A* u`, so callers can check that their sum equals the limit opinion.
/// Scalar models only; `ΛW` must be regular (equivalently `W22` regular
/// when oblivious agents exist).
pub fn stationary_series(
    model: &NetworkModel,
    cls: &AgentClassification,
    report: &SpectralReport,
) -> Result<SeriesDecomposition, DynamicsError> {
    if model.m() != 1 {
        return Err(DynamicsError::NotScalar);
    }
    if cls.has_oblivious() && report.regular_w22 != Some(true) {
        return Err(DynamicsError::NotRegular);
    }
    let a_star = report.a_star.as_ref().ok_or(DynamicsError::NotRegular)?;

    let n = model.n();
    let np = cls.n_prime;
    let lw = cls.permute_square(&model.lambda_w());
    let u_perm = cls.permute_stacked(model.u(), 1);
    let lambda_perm: Vec<f64> = cls.permutation.iter().map(|&i| model.lambda()[i]).collect();

    let mut series_perm = vec![0.0; n];
    if np > 0 {
        let top: Vec<usize> = (0..np).collect();
        let mut sys = Matrix::identity(np);
        for i in 0..np {
            for j in 0..np {
                sys[(i, j)] -= lw.block(&top, &top)[(i, j)];
            }
        }
        let rhs: Vec<f64> = (0..np).map(|i| (1.0 - lambda_perm[i]) * u_perm[i]).collect();
        let lu = Lu::factor(&sys).map_err(|_| DynamicsError::SingularSystem)?;
        series_perm[..np].copy_from_slice(&lu.solve(&rhs));
    }

    Ok(SeriesDecomposition {
        series: cls.unpermute_stacked(&series_perm, 1),
        a_star_u: a_star.matvec(model.u()),
    })
}
