//! Opinion dynamics on social networks with interdependent issues.
//!
//! A group of `n` agents repeatedly exchanges opinions on `m` coupled
//! issues. Each step, agent `i` averages the opinion vectors of its
//! neighbours with weights from a row-stochastic influence matrix `W`,
//! passes the average through an issue-coupling matrix `C`, and blends
//! the result with its fixed prejudice `u_i` according to its
//! susceptibility `λ_ii`:
//!
//! ```text
//! x_i(k+1) = λ_ii · C · Σ_j w_ij x_j(k) + (1 − λ_ii) · u_i
//! ```
//!
//! Stacked over agents this is `x(k+1) = (ΛW ⊗ C) x(k) + ((I−Λ) ⊗ I_m) u`,
//! although no routine here ever materialises the `nm × nm` Kronecker
//! matrix outside of limit computations.
//!
//! The crate provides:
//!
//! - [`model`] — validated model data types and the canonical normal form;
//! - [`graph`] — interaction graph, agent classification (stubborn /
//!   oblivious), and the block decomposition they induce;
//! - [`spectra`] — spectral radii, regularity of stochastic matrices, and
//!   limit matrices of matrix powers;
//! - [`dynamics`] — synchronous simulation, closed-form limit opinions,
//!   and the stubborn approximation;
//! - [`gossip`] — randomized pairwise-activation dynamics whose running
//!   time averages recover the synchronous limit;
//! - [`identify`] — constrained least-squares estimation of the coupling
//!   matrix from observed opinions.
//!
//! The crate is `no_std`-compatible (an allocator is required). Builds
//! without the standard library must enable the `libm` feature.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("opdyn-core requires either the `std` or the `libm` feature");

extern crate alloc;

mod eigen;
mod float;

pub mod dynamics;
pub mod gossip;
pub mod graph;
pub mod identify;
pub mod mat;
pub mod model;
pub mod spectra;

pub use dynamics::{simulate, step, Trajectory};
pub use graph::{AgentClassification, AgentStatus, InteractionGraph};
pub use mat::Matrix;
pub use model::{normalize_model, validate_model, ModelParts, NetworkModel, OpinionState};
pub use spectra::{analyze_spectrum, SpectralReport};
