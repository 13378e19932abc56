//! Toolkit for finite-dimensional generalized probabilistic models.
//!
//! The library is organized around a small number of concrete structures:
//!
//! - [`testspace`]: finite test spaces, probability weights, and exact
//!   state-polytope computation over the rationals, plus a catalog of
//!   standard small models (square bit, firefly box, grids, graphs, n-gons).
//! - [`ordspace`]: ordered linear spaces with polyhedral cones, the linear
//!   hull `E(A)` of a model and its dual state space `V(A)`, and positive
//!   processes between them.
//! - [`composite`]: bipartite non-signaling states, conditioning maps,
//!   minimal/maximal tensor products, separability tests, and CHSH analysis.
//! - [`protocols`]: cloning and broadcasting decisions, remote evaluation,
//!   teleportation and entanglement-swapping verification, steering.
//! - [`infotheory`]: measurement and mixing entropies, mutual information,
//!   strong subadditivity, Holevo bound, data processing, and the
//!   information-causality protocol simulator.
//! - [`jordan`]: Euclidean Jordan algebras (real/complex/quaternionic
//!   Hermitian matrices and spin factors) as a non-polyhedral cone backend,
//!   with spectral theory and quantum composites.
//!
//! Everything outside [`jordan`] and the entropy evaluations uses exact
//! rational arithmetic; no tolerance is involved in polytope or cone
//! computations.

pub mod composite;
pub mod infotheory;
pub mod jordan;
pub mod lp;
pub mod ordspace;
pub mod perm;
pub mod polytope;
pub mod protocols;
pub mod rat;
pub mod testspace;

pub use rat::{Matrix, Rat, Vector};
