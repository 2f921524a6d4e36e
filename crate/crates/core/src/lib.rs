//! Classical simulation of uniform quantum channels over finite groups.
//!
//! A finite group `G` of unitaries on `N` qubits defines the uniform channel
//! `QU(ρ) = (1/|G|) Σ_g g ρ g†`. With a symmetric generating set `S`, the
//! cheaper channel `Q_N` mixes only over `{id} ∪ S`; its powers converge to
//! `QU` at a rate set by the spectral gap of the Cayley graph `Γ(G,S)`.
//!
//! Modules:
//!
//! - [`group_rep`]: groups of basis permutations and unitaries, `S_n` acting
//!   on graph edge qubits, orbits, stabilizers and swap decompositions.
//! - [`cayley`]: Cayley graphs, Laplacian and walk spectra, mixing bounds.
//! - [`channel`]: density matrices, group-mixture channels, the environment
//!   dilation of `Q_N`, trace-norm convergence and the SWAP test.
//! - [`gip`]: graph isomorphism through `S_n` orbits on edge qubits.
//! - [`cli`]: report builders behind the `unichan` binary.

pub mod cayley;
pub mod channel;
pub mod cli;
pub mod error;
pub mod gip;
pub mod group_rep;

pub use error::{Error, Result};
