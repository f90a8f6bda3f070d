//! Example chains with closed-form strong stationary duals.
//!
//! States use a mixed-radix index with coordinate 0 least significant; that
//! index order is consistent with the coordinate-wise order, so every model
//! poset enumerates its states as `0, 1, ..., M-1`.

mod cube;
mod ising;
mod lattice;

use std::collections::BTreeMap;

pub use cube::{cube_corner_index, cube_corner_states, kary_cube, kary_cube_dual, CubeSpec};
pub use ising::{ising_circle, ising_circle_dual, ising_gibbs_graph, Graph, IsingSpec};
pub use lattice::{lattice_walk, lattice_walk_dual, LatticeSpec};

use crate::chain::ChainSpec;
use crate::error::{Error, Result};
use crate::poset::max_states;

/// A generated chain with the parameters that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub chain: ChainSpec,
    /// Non-fatal remarks, e.g. a disconnected interaction graph.
    pub warnings: Vec<String>,
}

fn check_size(size: Option<usize>) -> Result<usize> {
    let max = max_states();
    match size {
        Some(s) if s <= max => Ok(s),
        Some(s) => Err(Error::TooLarge { size: s, max }),
        None => Err(Error::TooLarge {
            size: usize::MAX,
            max,
        }),
    }
}

fn delta(m: usize, at: usize) -> Vec<f64> {
    let mut v = vec![0.0; m];
    v[at] = 1.0;
    v
}
