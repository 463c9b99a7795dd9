//! Cut-relative survivable network design.

pub mod cli;
pub mod cutreq;
pub mod decomp;
mod error;
pub mod flow;
pub mod graph;
pub mod lp;
pub mod rational;
pub mod sets;
pub mod solver;

pub use error::{Error, Result};
pub use graph::{Edge, EdgeId, Multigraph, NodeId};
pub use rational::Rational;
pub use sets::{EdgeSet, NodeSet};
