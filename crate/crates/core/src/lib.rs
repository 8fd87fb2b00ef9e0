//! Maximum-cardinality f-matching of multigraphs by phases of blocking
//! augmenting trails, with an optimality certificate.

pub mod certificate;
pub mod driver;
pub mod dsu;
pub mod engine;
pub mod error;
pub mod expand;
pub mod io;
pub mod multigraph;
pub mod oracle;
pub mod substitute;

pub use error::{Error, Result};
pub use multigraph::{DegreeBounds, EdgeId, MType, Matching, Multigraph};
