//! K4-bootstrap percolation: closures, the clique process, structure of
//! irreducible percolating graphs, exhaustive small-graph censuses,
//! threshold constants, and seeded Monte Carlo experiments on G(n, p).

pub mod asymptotics;
pub mod bootstrap;
pub mod clique_process;
pub mod enumeration;
pub mod experiments;
pub mod graph;
pub mod io;
pub mod rng;
pub mod small;
pub mod structure;

pub use graph::{sample_gnp, DuplicatePolicy, Graph, GraphError, VertexSet};
