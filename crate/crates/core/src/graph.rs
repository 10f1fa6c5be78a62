//! Interaction graph, classification of agents by stubbornness, and the
//! permutation that puts `ΛW` into block upper-triangular form.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::mat::Matrix;
use crate::model::{NetworkModel, TOL_ROW};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GraphError {
    #[error("matrix is not substochastic: {0}")]
    NotSubstochastic(&'static str),
}

/// Directed graph on the agents with an arc `(i, j)` exactly when
/// `w_ij > 0`; positive self-weights contribute self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionGraph {
    n: usize,
    arcs: Vec<(usize, usize)>,
}

impl InteractionGraph {
    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Arcs in lexicographic order by `(i, j)`.
    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// Out-branch degree of node `i` (self-loop included).
    pub fn out_degree(&self, i: usize) -> usize {
        self.arcs.iter().filter(|&&(a, _)| a == i).count()
    }

    /// For each node, the list of nodes pointing at it.
    pub fn reverse_adjacency(&self) -> Vec<Vec<usize>> {
        let mut rev = vec![Vec::new(); self.n];
        for &(i, j) in &self.arcs {
            rev[j].push(i);
        }
        rev
    }
}

/// Builds the interaction graph of a validated model. Validation clamps
/// numerical dust to exact zeros, so the `w_ij > 0` test is exact.
pub fn build_graph(model: &NetworkModel) -> InteractionGraph {
    let n = model.n();
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if model.w()[(i, j)] > 0.0 {
                arcs.push((i, j));
            }
        }
    }
    InteractionGraph { n, arcs }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AgentStatus {
    /// `λ_ii = 0`: the opinion never moves from the prejudice.
    TotallyStubborn,
    /// `0 < λ_ii < 1`: the prejudice is re-injected every step.
    Stubborn,
    /// Fully susceptible (`λ_ii = 1`) but connected by a walk to a
    /// stubborn agent, so prejudices still reach it.
    InfluencedByStubborn,
    /// Neither stubborn nor influenced by one; evolves by pure averaging.
    Oblivious,
}

impl AgentStatus {
    pub fn is_oblivious(self) -> bool {
        self == AgentStatus::Oblivious
    }
}

/// Per-agent statuses plus the permutation that lists non-oblivious
/// agents first, realizing the block upper-triangular form of `ΛW`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentClassification {
    /// Status of each agent, in original indexing.
    pub status: Vec<AgentStatus>,
    /// `permutation[new] = old`; non-oblivious agents first, original
    /// relative order preserved within each group.
    pub permutation: Vec<usize>,
    /// Number of non-oblivious agents.
    pub n_prime: usize,
}

impl AgentClassification {
    pub fn oblivious_indices(&self) -> Vec<usize> {
        self.status
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_oblivious())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn has_oblivious(&self) -> bool {
        self.n_prime < self.status.len()
    }

    /// Applies the permutation to a square agent-indexed matrix.
    pub fn permute_square(&self, a: &Matrix) -> Matrix {
        Matrix::from_fn(a.rows(), a.cols(), |i, j| {
            a[(self.permutation[i], self.permutation[j])]
        })
    }

    /// Permutes a stacked vector (`m` coordinates per agent) into the
    /// non-oblivious-first order.
    pub fn permute_stacked(&self, x: &[f64], m: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(x.len());
        for &old in &self.permutation {
            out.extend_from_slice(&x[old * m..(old + 1) * m]);
        }
        out
    }

    /// Inverse of [`permute_stacked`](Self::permute_stacked).
    pub fn unpermute_stacked(&self, x: &[f64], m: usize) -> Vec<f64> {
        let mut out = vec![0.0; x.len()];
        for (new, &old) in self.permutation.iter().enumerate() {
            out[old * m..(old + 1) * m].copy_from_slice(&x[new * m..(new + 1) * m]);
        }
        out
    }
}

/// Classifies every agent and computes the block permutation.
///
/// Reachability is a reverse breadth-first search from the set of
/// stubborn agents (`λ_ii < 1`), which costs `O(n + |E|)`.
pub fn classify_agents(model: &NetworkModel, graph: &InteractionGraph) -> AgentClassification {
    let n = model.n();
    let stubborn: Vec<bool> = model.lambda().iter().map(|&l| l < 1.0).collect();

    let rev = graph.reverse_adjacency();
    let mut reaches_stubborn = vec![false; n];
    let mut queue = VecDeque::new();
    for i in 0..n {
        if stubborn[i] {
            reaches_stubborn[i] = true;
            queue.push_back(i);
        }
    }
    while let Some(j) = queue.pop_front() {
        for &i in &rev[j] {
            if !reaches_stubborn[i] {
                reaches_stubborn[i] = true;
                queue.push_back(i);
            }
        }
    }

    let status: Vec<AgentStatus> = (0..n)
        .map(|i| {
            if model.lambda()[i] == 0.0 {
                AgentStatus::TotallyStubborn
            } else if stubborn[i] {
                AgentStatus::Stubborn
            } else if reaches_stubborn[i] {
                AgentStatus::InfluencedByStubborn
            } else {
                AgentStatus::Oblivious
            }
        })
        .collect();

    let mut permutation: Vec<usize> = (0..n).filter(|&i| !status[i].is_oblivious()).collect();
    let n_prime = permutation.len();
    permutation.extend((0..n).filter(|&i| status[i].is_oblivious()));

    AgentClassification { status, permutation, n_prime }
}

/// Returns the maximal index set `J` such that the `J × J` principal
/// submatrix of `a` is row-stochastic; empty exactly when `ρ(a) < 1`.
///
/// Works combinatorially: repeatedly delete rows whose sum over the
/// surviving columns falls below `1 − TOL_ROW`, until a fixpoint.
pub fn maximal_stochastic_subset(a: &Matrix) -> Result<Vec<usize>, GraphError> {
    if !a.is_square() {
        return Err(GraphError::NotSubstochastic("matrix is not square"));
    }
    let n = a.rows();
    for i in 0..n {
        let row = a.row(i);
        if row.iter().any(|&x| x < 0.0) {
            return Err(GraphError::NotSubstochastic("negative entry"));
        }
        if row.iter().sum::<f64>() > 1.0 + TOL_ROW {
            return Err(GraphError::NotSubstochastic("row sum exceeds 1"));
        }
    }

    let mut alive = vec![true; n];
    loop {
        let mut changed = false;
        for i in 0..n {
            if !alive[i] {
                continue;
            }
            let s: f64 = (0..n).filter(|&j| alive[j]).map(|j| a[(i, j)]).sum();
            if s < 1.0 - TOL_ROW {
                alive[i] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok((0..n).filter(|&i| alive[i]).collect())
}
