//! Heat-bath (Gibbs) dynamics for the Ising model without external field.
//!
//! Configuration bit `i` set means spin `+1` at vertex `i`; the all-minus
//! configuration is state 0 and the all-plus one is `2^N - 1`.

use std::collections::{BTreeMap, BTreeSet};

use super::{check_size, delta, Model};
use crate::chain::ChainSpec;
use crate::duality::DualChain;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poset::grid_poset;

/// Simple undirected graph on vertices `0..vertices`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Validates the edge list; edges are stored as sorted `(min, max)` pairs.
    pub fn new(vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if vertices == 0 {
            return Err(Error::BadParameters(
                "graph needs at least one vertex".into(),
            ));
        }
        let mut seen = BTreeSet::new();
        for &(a, b) in edges {
            if a >= vertices || b >= vertices {
                return Err(Error::BadParameters(format!(
                    "edge ({a}, {b}) references a vertex outside 0..{vertices}"
                )));
            }
            if a == b {
                return Err(Error::BadParameters(format!("self-loop at vertex {a}")));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::BadParameters(format!("duplicate edge ({a}, {b})")));
            }
        }
        Ok(Graph {
            vertices,
            edges: seen.into_iter().collect(),
        })
    }

    /// Cycle `{i, i+1 mod n}`; needs `n >= 3` to be simple.
    pub fn circle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::BadParameters(format!(
                "a circle needs at least 3 vertices (got {n})"
            )));
        }
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &edges)
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut nb = vec![Vec::new(); self.vertices];
        for &(a, b) in &self.edges {
            nb[a].push(b);
            nb[b].push(a);
        }
        nb
    }

    pub fn is_connected(&self) -> bool {
        let nb = self.neighbors();
        let mut seen = vec![false; self.vertices];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &nb[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_circle(&self) -> bool {
        self.vertices >= 3 && Graph::circle(self.vertices).is_ok_and(|c| c.edges == self.edges)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IsingSpec {
    pub graph: Graph,
    pub beta: f64,
}

impl IsingSpec {
    pub fn new(graph: Graph, beta: f64) -> Result<Self> {
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(Error::BadParameters(format!(
                "beta must be >= 0 (got {beta})"
            )));
        }
        Ok(IsingSpec { graph, beta })
    }

    pub fn circle(n: usize, beta: f64) -> Result<Self> {
        IsingSpec::new(Graph::circle(n)?, beta)
    }

    fn spin(state: usize, v: usize) -> f64 {
        if state >> v & 1 == 1 {
            1.0
        } else {
            -1.0
        }
    }

    /// Probability that the heat-bath update at `v` sets spin `+1`:
    /// `e^{2 beta (k+ - k-)} / (e^{2 beta (k+ - k-)} + 1)`.
    pub fn plus_probability(&self, neighbors: &[Vec<usize>], v: usize, state: usize) -> f64 {
        let field: f64 = neighbors[v].iter().map(|&w| Self::spin(state, w)).sum();
        1.0 / (1.0 + (-2.0 * self.beta * field).exp())
    }

    /// Unnormalized `exp(beta * sum_{edges} e(x) e(y))`.
    pub fn weight(&self, state: usize) -> f64 {
        let s: f64 = self
            .graph
            .edges
            .iter()
            .map(|&(a, b)| Self::spin(state, a) * Self::spin(state, b))
            .sum();
        (self.beta * s).exp()
    }

    /// Boltzmann law with the partition function summed directly.
    pub fn stationary(&self) -> Vec<f64> {
        let m = 1usize << self.graph.vertices;
        let w: Vec<f64> = (0..m).map(|s| self.weight(s)).collect();
        let z: f64 = w.iter().sum();
        w.into_iter().map(|v| v / z).collect()
    }

    pub fn state_label(&self, state: usize) -> String {
        (0..self.graph.vertices)
            .map(|v| if state >> v & 1 == 1 { '+' } else { '-' })
            .collect()
    }

    fn size(&self) -> Result<usize> {
        check_size(
            u32::try_from(self.graph.vertices)
                .ok()
                .and_then(|n| 1usize.checked_shl(n))
                .filter(|_| self.graph.vertices < usize::BITS as usize),
        )
    }
}

/// Gibbs sampler on `{-1,+1}^V` for an arbitrary simple graph, started from
/// the all-minus configuration.
pub fn ising_gibbs_graph(spec: &IsingSpec) -> Result<Model> {
    let m = spec.size()?;
    let n = spec.graph.vertices;
    let nb = spec.graph.neighbors();
    let mut p = Matrix::zeros(m, m);
    for s in 0..m {
        for v in 0..n {
            let f = spec.plus_probability(&nb, v, s);
            let up = s | 1 << v;
            let down = s & !(1 << v);
            p[(s, up)] += f / n as f64;
            p[(s, down)] += (1.0 - f) / n as f64;
        }
    }
    let labels = (0..m).map(|s| spec.state_label(s)).collect();
    let poset = grid_poset(&vec![2; n])?.relabel(labels)?;
    let chain = ChainSpec::new(poset, p, delta(m, 0), Some(spec.stationary()))?;

    let mut warnings = Vec::new();
    if !spec.graph.is_connected() {
        warnings.push("interaction graph is disconnected".to_string());
    }
    let circle = spec.graph.is_circle();
    let mut params = BTreeMap::from([("N".to_string(), n as f64), ("beta".to_string(), spec.beta)]);
    if !circle {
        params.insert("edges".to_string(), spec.graph.edges.len() as f64);
    }
    Ok(Model {
        name: if circle {
            "ising-circle"
        } else {
            "ising-graph"
        }
        .to_string(),
        params,
        chain,
        warnings,
    })
}

/// Gibbs sampler for the Ising model on the circle with `n >= 3` vertices.
pub fn ising_circle(n: usize, beta: f64) -> Result<Model> {
    ising_gibbs_graph(&IsingSpec::circle(n, beta)?)
}

/// Pure-birth closed form for the circle sampler: holds with probability
/// `S(e)/N`, flips a minus spin `j` up with probability
/// `H(e + s_j) / H(e) * (1 - f(j, e)) / N`, never moves down.
///
/// This equals the dual from [`build_dual`](crate::duality::build_dual) only
/// at `beta == 0`. For `beta > 0` the true dual also moves between
/// incomparable configurations and these rows sum to less than one.
pub fn ising_circle_dual(n: usize, beta: f64) -> Result<DualChain> {
    let spec = IsingSpec::circle(n, beta)?;
    let m = spec.size()?;
    let nb = spec.graph.neighbors();
    let pi = spec.stationary();

    // H(e) = sum over sub-configurations, by the subset-sum transform.
    let mut h = pi.clone();
    for v in 0..n {
        for s in 0..m {
            if s >> v & 1 == 1 {
                h[s] += h[s ^ 1 << v];
            }
        }
    }

    let nf = n as f64;
    let mut p = Matrix::zeros(m, m);
    for s in 0..m {
        p[(s, s)] = s.count_ones() as f64 / nf;
        for j in (0..n).filter(|&j| s >> j & 1 == 0) {
            let t = s | 1 << j;
            let f = spec.plus_probability(&nb, j, s);
            p[(s, t)] = h[t] / h[s] * (1.0 - f) / nf;
        }
    }
    let labels = (0..m).map(|s| spec.state_label(s)).collect();
    let poset = grid_poset(&vec![2; n])?.relabel(labels)?;
    DualChain::new(poset, p, delta(m, 0), m - 1)
}
