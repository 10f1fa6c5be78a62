//! Model data types shared by every other module, plus validation and the
//! canonical normal form.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::mat::Matrix;

/// Row sums of a stochastic matrix may deviate from 1 by at most this much.
pub const TOL_ROW: f64 = 1e-9;
/// Entries above `-TOL_NEG` are treated as numerical dust and clamped to 0.
pub const TOL_NEG: f64 = 1e-12;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ModelError {
    #[error("row {row} of W is not stochastic: {defect}")]
    NonStochasticRow { row: usize, defect: RowDefect },
    #[error("susceptibility lambda[{index}] = {value} lies outside [0, 1]")]
    BadSusceptibility { index: usize, value: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),
}

#[derive(Debug, Clone, Copy, Error, PartialEq)]
pub enum RowDefect {
    #[error("row sums to {0}")]
    Sum(f64),
    #[error("entry at column {col} is {value}")]
    NegativeEntry { col: usize, value: f64 },
}

/// Raw ingredients for a [`NetworkModel`], before validation.
///
/// `u` is stacked agent-major: agent 0's `m` issue coordinates come first.
#[derive(Debug, Clone)]
pub struct ModelParts {
    pub n: usize,
    pub m: usize,
    pub w: Matrix,
    pub lambda: Vec<f64>,
    pub c: Matrix,
    /// Optional transform applied to prejudices to form the initial
    /// opinions, `x_i(0) = D u_i`. Defaults to the identity.
    pub d: Option<Matrix>,
    pub u: Vec<f64>,
}

/// A validated opinion-dynamics model.
///
/// Invariants guaranteed by construction: `W` is `n × n`, entry-wise
/// non-negative with rows summing to 1 (negative dust clamped, rows
/// rescaled); every `λ_ii ∈ [0, 1]`; `C` and `D` are finite `m × m`
/// matrices; `u` is a finite stacked vector of length `n·m`.
///
/// All fields are immutable after construction, so the type is safe to
/// share across threads by reference.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkModel {
    n: usize,
    m: usize,
    w: Matrix,
    lambda: Vec<f64>,
    c: Matrix,
    d: Matrix,
    u: Vec<f64>,
}

impl NetworkModel {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn w(&self) -> &Matrix {
        &self.w
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn c(&self) -> &Matrix {
        &self.c
    }

    pub fn d(&self) -> &Matrix {
        &self.d
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    /// Agent `i`'s prejudice vector (length `m`).
    pub fn u_agent(&self, i: usize) -> &[f64] {
        &self.u[i * self.m..(i + 1) * self.m]
    }

    /// The coupling matrix `ΛW` (row `i` of `W` scaled by `λ_ii`).
    pub fn lambda_w(&self) -> Matrix {
        Matrix::from_fn(self.n, self.n, |i, j| self.lambda[i] * self.w[(i, j)])
    }

    pub fn d_is_identity(&self) -> bool {
        self.d == Matrix::identity(self.m)
    }

    /// Initial opinion vector `x(0)`, with `x_i(0) = D u_i`.
    pub fn initial_opinions(&self) -> Vec<f64> {
        let mut x0 = Vec::with_capacity(self.n * self.m);
        for i in 0..self.n {
            x0.extend(self.d.matvec(self.u_agent(i)));
        }
        x0
    }

    /// Whether the normal form holds: `w_ii = 1` exactly when `λ_ii = 0`.
    pub fn is_normalized(&self) -> bool {
        (0..self.n).all(|i| (self.w[(i, i)] == 1.0) == (self.lambda[i] == 0.0))
    }

    /// Replaces `C` (used by identification to re-simulate with an
    /// estimate). Dimensions must match.
    pub fn with_c(&self, c: Matrix) -> NetworkModel {
        assert_eq!((c.rows(), c.cols()), (self.m, self.m));
        NetworkModel { c, ..self.clone() }
    }
}

/// One snapshot of the stacked opinion vector.
#[derive(Debug, Clone, PartialEq)]
pub struct OpinionState {
    pub k: usize,
    pub x: Vec<f64>,
}

/// Checks all model invariants, clamping values that are off by no more
/// than the documented tolerances: entries of `W` in `(-TOL_NEG, 0)`
/// become exact zeros and rows whose sum is within `TOL_ROW` of 1 are
/// rescaled to sum 1. Everything farther out is an error.
pub fn validate_model(raw: ModelParts) -> Result<NetworkModel, ModelError> {
    let ModelParts { n, m, mut w, lambda, c, d, u } = raw;
    if n == 0 || m == 0 {
        return Err(ModelError::DimensionMismatch(format!(
            "agent count n = {n} and issue count m = {m} must be positive"
        )));
    }
    if w.rows() != n || w.cols() != n {
        return Err(ModelError::DimensionMismatch(format!(
            "W is {}x{}, expected {n}x{n}",
            w.rows(),
            w.cols()
        )));
    }
    if lambda.len() != n {
        return Err(ModelError::DimensionMismatch(format!(
            "Lambda has {} diagonal entries, expected {n}",
            lambda.len()
        )));
    }
    if c.rows() != m || c.cols() != m {
        return Err(ModelError::DimensionMismatch(format!(
            "C is {}x{}, expected {m}x{m}",
            c.rows(),
            c.cols()
        )));
    }
    let d = d.unwrap_or_else(|| Matrix::identity(m));
    if d.rows() != m || d.cols() != m {
        return Err(ModelError::DimensionMismatch(format!(
            "D is {}x{}, expected {m}x{m}",
            d.rows(),
            d.cols()
        )));
    }
    if u.len() != n * m {
        return Err(ModelError::DimensionMismatch(format!(
            "u has length {}, expected n*m = {}",
            u.len(),
            n * m
        )));
    }

    for (i, &l) in lambda.iter().enumerate() {
        if !(0.0..=1.0).contains(&l) {
            return Err(ModelError::BadSusceptibility { index: i, value: l });
        }
    }

    for i in 0..n {
        let row = w.row_mut(i);
        for (j, x) in row.iter_mut().enumerate() {
            if *x < -TOL_NEG {
                return Err(ModelError::NonStochasticRow {
                    row: i,
                    defect: RowDefect::NegativeEntry { col: j, value: *x },
                });
            }
            if *x < 0.0 {
                *x = 0.0;
            }
        }
        let sum: f64 = row.iter().sum();
        if !((sum - 1.0).abs() <= TOL_ROW) {
            return Err(ModelError::NonStochasticRow {
                row: i,
                defect: RowDefect::Sum(sum),
            });
        }
        if sum != 1.0 {
            for x in row.iter_mut() {
                *x /= sum;
            }
        }
    }

    if !c.data().iter().all(|x| x.is_finite()) {
        return Err(ModelError::NonFinite("C"));
    }
    if !d.data().iter().all(|x| x.is_finite()) {
        return Err(ModelError::NonFinite("D"));
    }
    if !u.iter().all(|x| x.is_finite()) {
        return Err(ModelError::NonFinite("u"));
    }

    Ok(NetworkModel { n, m, w, lambda, c, d, u })
}

/// Rewrites the model into the normal form in which `w_ii = 1` holds
/// exactly for the agents with `λ_ii = 0` and vice versa:
///
/// - an agent with `w_ii = 1` gets `λ_ii := 0`;
/// - an agent with `λ_ii = 0` gets row `i` of `W` replaced by `e_i`.
///
/// An agent hit by either rule keeps the constant opinion `x_i(k) ≡ u_i`
/// when the issue coupling is the identity (or `m = 1`), so the rewrite
/// does not change trajectories there. With a non-identity `C`, a unit
/// self-weight combined with `λ_ii > 0` describes an agent that keeps
/// re-coupling its own issues; the rewrite pins such an agent to its
/// prejudice instead, which is the reading the analysis in this crate
/// assumes. Already-normalized models are returned unchanged.
pub fn normalize_model(model: NetworkModel) -> NetworkModel {
    let NetworkModel { n, m, mut w, mut lambda, c, d, u } = model;
    for i in 0..n {
        if w[(i, i)] == 1.0 {
            lambda[i] = 0.0;
        }
        if lambda[i] == 0.0 {
            for j in 0..n {
                w[(i, j)] = if i == j { 1.0 } else { 0.0 };
            }
        }
    }
    NetworkModel { n, m, w, lambda, c, d, u }
}
