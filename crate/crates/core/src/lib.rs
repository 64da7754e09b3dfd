//! Degree-repetition invariants of induced subgraphs.
//!
//! `rep(G)` is the largest multiplicity in the degree sequence of `G` and
//! `maxrep(G)` the number of vertices of maximum degree. This crate computes
//! both over all induced subgraphs, enumerates bounded-degree connected
//! graphs up to isomorphism, solves the component-mix linear program in exact
//! arithmetic, turns the peeling upper-bound arguments into certificate
//! producers, and samples the inhomogeneous random graph model.

pub mod canon;
pub mod certify;
pub mod enumeration;
pub mod error;
pub mod extremal;
pub mod graph;
pub mod graph6;
pub mod invariants;
pub mod lp;
pub mod random;

pub use error::{Error, Result};
pub use graph::{DegreeSequence, Graph, VertexSet};
pub use certify::{Certificate, Infeasible, PartitionCertificate};
pub use invariants::{DegreeProfile, Exactness, Mode, Witness};
pub use enumeration::{Catalog, CatalogEntry};
pub use extremal::SearchResult;
pub use lp::{Construction, LpInstance, LpSolution, Rational};
pub use random::{ExperimentReport, ModelParams};
