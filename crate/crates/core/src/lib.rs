//! Compiler and verifier for continuous-time quantum-walk circuits.
//!
//! Given a sparse undirected graph, this crate builds an explicit
//! elementary-gate circuit approximating the walk operator
//! `exp(-i gamma A t)` (`A` the adjacency matrix) and certifies the result
//! against a dense matrix-exponential oracle at desk scale.
//!
//! The pipeline:
//!
//! 1. [`graph`] — parse and validate edge lists, build adjacency matrices.
//! 2. [`decompose`] — split the edge set into rooted forests, color each
//!    forest with at most six colors in `O(log* N)` rounds, and regroup
//!    the edges into vertex-disjoint star forests.
//! 3. [`star`] — compile each star forest's evolution *exactly* into
//!    `X`/`H`/`SWAP`/`RX`/`RZ` gates with multi-controls, using one
//!    ancilla qubit.
//! 4. [`trotter`] — interleave the term evolutions with symmetrized
//!    product-formula schedules of any even order, choosing the segment
//!    count analytically or by doubling against measurement.
//! 5. [`pauli`] — the baseline: expand the same Hamiltonian into Pauli
//!    strings and exponentiate term by term, for cost comparisons.
//! 6. [`sim`] — dense state-vector simulation, exact references, and
//!    spectral-norm distances; every compiled circuit is judged here.
//!
//! [`circuit`] holds the shared gate IR with its cost model and text
//! format; [`generators`] and [`stats`] support benchmarks and scaling
//! measurements.

pub mod circuit;
pub mod decompose;
pub mod generators;
pub mod graph;
pub mod pauli;
pub mod sim;
pub mod star;
pub mod stats;
pub mod trotter;

pub use circuit::{Circuit, CostModel, Gate, GateCounts, Polarity};
pub use decompose::{decompose_to_stars, Star, StarForest};
pub use graph::Graph;
pub use trotter::{SegmentMode, Synthesis, SynthesisOptions, TrotterPlan};
