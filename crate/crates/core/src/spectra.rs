//! Eigenvalue- and structure-based analysis: spectral radii, regularity
//! of stochastic matrices, limits of matrix powers, and the assembled
//! spectral report with its convergence verdict.
//!
//! Regularity of stochastic matrices is decided combinatorially (strongly
//! connected components plus cycle-period gcd) because spectral tests at
//! the unit circle are tolerance-fragile; the spectral criterion is kept
//! as a test-time cross-check only.

use alloc::vec;
use alloc::vec::Vec;

pub use num_complex::Complex64;
use thiserror::Error;

use crate::eigen;
use crate::float;
use crate::graph::AgentClassification;
use crate::mat::Matrix;
use crate::model::{NetworkModel, TOL_ROW};

/// Margin used when comparing spectral-radius products against 1.
pub const TOL_SPEC: f64 = 1e-10;
/// Margin used to classify computed eigenvalues relative to the unit circle.
pub const TOL_UNIT: f64 = 1e-8;

/// Hard bound on the consecutive-squares test of [`limit_power`].
const SQUARING_CAP: usize = 60;
const SQUARING_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, Error, PartialEq, Eq)]
pub enum SpectraError {
    #[error("eigenvalue iteration exceeded the sweep cap")]
    NoConvergence,
    #[error("matrix is not row-stochastic")]
    NotStochastic,
    #[error("matrix powers have no limit")]
    NotRegular,
}

pub(crate) fn modulus(c: Complex64) -> f64 {
    float::hypot(c.re, c.im)
}

/// All eigenvalues with multiplicity. Balancing, Hessenberg reduction and
/// double-shift QR; the iteration budget is 100 sweeps per dimension.
/// Intended for desk-scale matrices (dimension up to 64).
pub fn eigenvalues(a: &Matrix) -> Result<Vec<Complex64>, SpectraError> {
    eigen::eigenvalues(a, 100 * a.rows().max(1)).ok_or(SpectraError::NoConvergence)
}

/// Largest eigenvalue modulus.
pub fn spectral_radius(a: &Matrix) -> Result<f64, SpectraError> {
    Ok(eigenvalues(a)?
        .into_iter()
        .map(modulus)
        .fold(0.0, f64::max))
}

/// Result of the regularity test for a row-stochastic matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Regularity {
    /// `A^k` converges to some limit.
    pub regular: bool,
    /// The limit exists and has identical rows.
    pub fully_regular: bool,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Strongly connected components via Kosaraju's two-pass search.
fn strongly_connected_components(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for s in 0..n {
        if visited[s] {
            continue;
        }
        visited[s] = true;
        let mut stack = vec![(s, 0usize)];
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next < adj[v].len() {
                let w = adj[v][*next];
                *next += 1;
                if !visited[w] {
                    visited[w] = true;
                    stack.push((w, 0));
                }
            } else {
                order.push(v);
                stack.pop();
            }
        }
    }

    let mut radj = vec![Vec::new(); n];
    for (v, outs) in adj.iter().enumerate() {
        for &w in outs {
            radj[w].push(v);
        }
    }

    let mut component = vec![usize::MAX; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for &s in order.iter().rev() {
        if component[s] != usize::MAX {
            continue;
        }
        let id = components.len();
        component[s] = id;
        let mut members = vec![s];
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &w in &radj[v] {
                if component[w] == usize::MAX {
                    component[w] = id;
                    members.push(w);
                    stack.push(w);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    components
}

/// Cycle period of one strongly connected component: gcd of
/// `level(u) + 1 - level(v)` over its internal arcs, with levels from a
/// breadth-first search.
fn component_period(members: &[usize], adj: &[Vec<usize>], in_component: &[bool]) -> u64 {
    let n = in_component.len();
    let mut level = vec![i64::MIN; n];
    let mut queue = alloc::collections::VecDeque::new();
    level[members[0]] = 0;
    queue.push_back(members[0]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if in_component[w] && level[w] == i64::MIN {
                level[w] = level[v] + 1;
                queue.push_back(w);
            }
        }
    }
    let mut g = 0u64;
    for &v in members {
        for &w in &adj[v] {
            if in_component[w] {
                g = gcd(g, (level[v] + 1 - level[w]).unsigned_abs());
            }
        }
    }
    g
}

/// Decides regularity of a row-stochastic matrix from its graph: the
/// matrix is regular iff every closed class is aperiodic, and fully
/// regular iff additionally exactly one closed class exists.
pub fn is_regular(a: &Matrix) -> Result<Regularity, SpectraError> {
    if !a.is_row_stochastic(TOL_ROW) {
        return Err(SpectraError::NotStochastic);
    }
    let n = a.rows();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| a[(i, j)] > 0.0).collect())
        .collect();
    let components = strongly_connected_components(&adj);

    let mut closed_count = 0usize;
    let mut all_closed_aperiodic = true;
    let mut in_component = vec![false; n];
    for members in &components {
        for &v in members {
            in_component[v] = true;
        }
        let closed = members
            .iter()
            .all(|&v| adj[v].iter().all(|&w| in_component[w]));
        if closed {
            closed_count += 1;
            if component_period(members, &adj, &in_component) != 1 {
                all_closed_aperiodic = false;
            }
        }
        for &v in members {
            in_component[v] = false;
        }
    }

    let regular = all_closed_aperiodic;
    Ok(Regularity {
        regular,
        fully_regular: regular && closed_count == 1,
    })
}

/// Which hypothesis justifies taking `lim A^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitMode {
    /// `A` row-stochastic and regular.
    RowStochastic,
    /// `ρ(A) < 1`, so the limit is the zero matrix.
    SchurStable,
    /// A general issue-coupling matrix; regularity is established
    /// spectrally plus by the squaring test itself.
    Coupling,
}

fn repeated_squaring(a: &Matrix) -> Result<Matrix, SpectraError> {
    let guard = 1e6 * (1.0 + a.inf_norm());
    let mut b = a.clone();
    for _ in 0..SQUARING_CAP {
        let b2 = b.matmul(&b);
        if b2.sub(&b).inf_norm() < SQUARING_TOL {
            return Ok(b2);
        }
        if b2.inf_norm() > guard {
            return Err(SpectraError::NotRegular);
        }
        b = b2;
    }
    Err(SpectraError::NoConvergence)
}

/// Limit of matrix powers `A* = lim A^k`, computed by repeated squaring
/// until consecutive squares agree to `1e-12` in the ∞-norm.
///
/// In `RowStochastic` mode the rows of the limit are re-normalized to
/// sum exactly 1.
pub fn limit_power(a: &Matrix, mode: LimitMode) -> Result<Matrix, SpectraError> {
    match mode {
        LimitMode::SchurStable => {
            if spectral_radius(a)? < 1.0 - TOL_SPEC {
                Ok(Matrix::zeros(a.rows(), a.cols()))
            } else {
                Err(SpectraError::NotRegular)
            }
        }
        LimitMode::RowStochastic => {
            if !is_regular(a)?.regular {
                return Err(SpectraError::NotRegular);
            }
            let mut star = repeated_squaring(a)?;
            for i in 0..star.rows() {
                let s: f64 = star.row(i).iter().sum();
                for x in star.row_mut(i) {
                    *x /= s;
                }
            }
            Ok(star)
        }
        LimitMode::Coupling => match coupling_regularity(a)? {
            (_, Some(star)) => Ok(star),
            (_, None) => Err(SpectraError::NotRegular),
        },
    }
}

/// Regularity of a general coupling matrix together with its power limit
/// when one exists. Eigenvalues on the unit circle away from 1 rule the
/// limit out; a defective eigenvalue 1 is caught by the divergence guard
/// of the squaring iteration.
fn coupling_regularity(c: &Matrix) -> Result<(bool, Option<Matrix>), SpectraError> {
    let eigs = eigenvalues(c)?;
    let rho = eigs.iter().copied().map(modulus).fold(0.0, f64::max);
    if rho < 1.0 - TOL_SPEC {
        return Ok((true, Some(Matrix::zeros(c.rows(), c.cols()))));
    }
    if rho > 1.0 + TOL_UNIT {
        return Ok((false, None));
    }
    let off_unit_one = eigs
        .iter()
        .any(|e| modulus(*e) >= 1.0 - TOL_UNIT && modulus(*e - Complex64::new(1.0, 0.0)) > TOL_UNIT);
    if off_unit_one {
        return Ok((false, None));
    }
    match repeated_squaring(c) {
        Ok(star) => Ok((true, Some(star))),
        Err(SpectraError::NotRegular) => Ok((false, None)),
        Err(e) => Err(e),
    }
}

/// Assembled spectral facts about one model.
///
/// `rho_lw` and `rho_c` are pinned to exactly 1 when stochastic structure
/// guarantees it (oblivious agents present, or `C` row-stochastic); they
/// are never left to eigenvalue round-off in those cases. Fields about
/// the oblivious block `W22` are `None` when every agent is
/// non-oblivious.
#[derive(Debug, Clone)]
pub struct SpectralReport {
    pub rho_lw: f64,
    pub rho_c: f64,
    /// `ρ(ΛW)·ρ(C) < 1 − TOL_SPEC`.
    pub stable: bool,
    pub regular_c: bool,
    pub regular_w22: Option<bool>,
    pub fully_regular_w22: Option<bool>,
    /// `lim C^k`, present iff `regular_c`.
    pub c_star: Option<Matrix>,
    /// `lim (W22)^k`; when `C* = 0` and `W22` is irregular this is set to
    /// the zero matrix, the convention the convergent-limit formula uses.
    pub w22_star: Option<Matrix>,
    /// `lim (ΛW)^k` in original agent indexing, when it exists.
    pub a_star: Option<Matrix>,
}

/// Extracts the oblivious-block submatrix of `W` in permutation order.
pub(crate) fn w22_block(model: &NetworkModel, cls: &AgentClassification) -> Matrix {
    let idx = &cls.permutation[cls.n_prime..];
    model.w().principal_submatrix(idx)
}

/// Computes the full spectral report for a normalized model.
pub fn analyze_spectrum(
    model: &NetworkModel,
    cls: &AgentClassification,
) -> Result<SpectralReport, SpectraError> {
    let n = model.n();
    let lw = model.lambda_w();

    let rho_lw = if cls.has_oblivious() {
        1.0
    } else {
        spectral_radius(&lw)?
    };
    let rho_c = if model.c().is_row_stochastic(TOL_ROW) {
        1.0
    } else {
        spectral_radius(model.c())?
    };
    let stable = rho_lw * rho_c < 1.0 - TOL_SPEC;

    let (regular_c, c_star) = coupling_regularity(model.c())?;

    let (regular_w22, fully_regular_w22, w22_star) = if cls.has_oblivious() {
        let w22 = w22_block(model, cls);
        let reg = is_regular(&w22)?;
        let star = if reg.regular {
            Some(limit_power(&w22, LimitMode::RowStochastic)?)
        } else if c_star.as_ref().is_some_and(Matrix::is_zero) {
            Some(Matrix::zeros(w22.rows(), w22.cols()))
        } else {
            None
        };
        (Some(reg.regular), Some(reg.fully_regular), star)
    } else {
        (None, None, None)
    };

    let a_star = if !cls.has_oblivious() {
        Some(Matrix::zeros(n, n))
    } else if regular_w22 == Some(true) {
        Some(assemble_a_star(
            model,
            cls,
            w22_star.as_ref().expect("limit present when regular"),
        ))
    } else {
        None
    };

    Ok(SpectralReport {
        rho_lw,
        rho_c,
        stable,
        regular_c,
        regular_w22,
        fully_regular_w22,
        c_star,
        w22_star,
        a_star,
    })
}

/// `lim (ΛW)^k` in original indexing, assembled blockwise from the
/// permuted decomposition once `W22*` is known.
fn assemble_a_star(model: &NetworkModel, cls: &AgentClassification, w22_star: &Matrix) -> Matrix {
    let n = model.n();
    let np = cls.n_prime;
    let nob = n - np;
    let lw = cls.permute_square(&model.lambda_w());

    let top: Vec<usize> = (0..np).collect();
    let bottom: Vec<usize> = (np..n).collect();
    let mut star_perm = Matrix::zeros(n, n);
    for i in 0..nob {
        for j in 0..nob {
            star_perm[(np + i, np + j)] = w22_star[(i, j)];
        }
    }

    if np > 0 && nob > 0 {
        let lw11 = lw.block(&top, &top);
        let lw12 = lw.block(&top, &bottom);
        let rhs = lw12.matmul(w22_star);
        let mut sys = Matrix::identity(np);
        for i in 0..np {
            for j in 0..np {
                sys[(i, j)] -= lw11[(i, j)];
            }
        }
        let lu = crate::mat::Lu::factor(&sys).expect("I - L11 W11 is invertible");
        for j in 0..nob {
            let col: Vec<f64> = (0..np).map(|i| rhs[(i, j)]).collect();
            let sol = lu.solve(&col);
            for i in 0..np {
                star_perm[(i, np + j)] = sol[i];
            }
        }
    }

    let mut star = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            star[(cls.permutation[i], cls.permutation[j])] = star_perm[(i, j)];
        }
    }
    star
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictKind {
    /// The stacked update matrix is Schur stable.
    Stable,
    /// Not stable, but opinions converge for every prejudice vector.
    Convergent,
    /// Opinions do not converge for some prejudice vectors.
    Divergent,
}

/// Verdict plus the clause of the stability/convergence theorems that
/// decided it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub clause: &'static str,
}

/// Maps a spectral report to the stability/convergence verdict.
pub fn convergence_verdict(report: &SpectralReport, cls: &AgentClassification) -> Verdict {
    if report.stable {
        let clause = if report.rho_c == 1.0 {
            "no oblivious agents"
        } else {
            "rho(LW) * rho(C) < 1"
        };
        return Verdict { kind: VerdictKind::Stable, clause };
    }
    if cls.has_oblivious() {
        if !report.regular_c {
            return Verdict {
                kind: VerdictKind::Divergent,
                clause: "C not regular",
            };
        }
        if report.c_star.as_ref().is_some_and(Matrix::is_zero) {
            return Verdict {
                kind: VerdictKind::Convergent,
                clause: "C regular and C* = 0",
            };
        }
        if report.regular_w22 == Some(true) {
            return Verdict {
                kind: VerdictKind::Convergent,
                clause: "C regular and W22 regular",
            };
        }
        return Verdict {
            kind: VerdictKind::Divergent,
            clause: "W22 not regular",
        };
    }
    Verdict {
        kind: VerdictKind::Divergent,
        clause: "rho(LW) * rho(C) >= 1 with no oblivious agents",
    }
}
