//! Solvers and exact analysis tools for information-sharing network formation
//! games.
//!
//! A game is given by `n` agents and a table of pairwise utilities: agent `i`
//! receives `u[i][j]` from ending up in the same connected component of the
//! information-sharing network as agent `j` (utilities may be `-inf`, meaning
//! `i` must never share a component with `j`). Agents form and sever links
//! strategically; a coalition of up to `k` agents may defect by forming all
//! pairwise links among themselves while each member drops an arbitrary subset
//! of its other links. A network is *k-stable* when no such defection strictly
//! improves every participant.
//!
//! The crate provides:
//!
//! * [`model`] — instances, networks, clique partitions, utilities and their
//!   JSON formats.
//! * [`stability`] — exact defection search, k-stability verification and the
//!   exhaustive stable-network existence oracle.
//! * [`construct`] — constructive algorithms: maximum-independent-set peeling,
//!   polynomial 2/3/4-stable dynamics, welfare-preserving repair,
//!   best-response runs and the proposal algorithm for stable marriage.
//! * [`welfare`] — welfare optima, chromatic baselines and exact
//!   price-of-stability / price-of-anarchy measurement.
//! * [`instances`] — generators for the benchmark families and gadgets.
//! * [`reductions`] — the executable hardness-reduction chain from graph
//!   3-coloring down to stable-network existence.
//! * [`suite`] — the scripted verification battery run by the CLI.
//!
//! All searches are exact and deterministic. With the default `parallel`
//! feature the heavy enumerations fan out over a rayon pool while preserving
//! the sequential first-witness semantics; disabling the feature leaves a
//! purely sequential build.

mod bits;
mod config;
mod error;
mod rng;

pub mod construct;
pub mod exec;
pub mod instances;
pub mod model;
pub(crate) mod partition;
pub mod reductions;
pub mod stability;
pub mod suite;
pub mod welfare;

pub use config::SolverConfig;
pub use error::{Error, Result};
pub use exec::ExecMode;
