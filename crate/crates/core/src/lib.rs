//! Multi-objective multi-agent path finding on four-connected grids.

pub mod conflicts;
pub mod cost;
pub mod error;
pub mod graph;
pub mod instance;
pub mod lowlevel;
pub mod mocbs;
pub mod mosipp;
pub mod oracle;

pub use cost::{pareto_filter, CostVector};
pub use error::{ModelError, ParseError, SearchError};
pub use graph::{EdgeCosts, GridGraph, JointPath, Path, Time, Vertex};
