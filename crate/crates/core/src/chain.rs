//! Finite Markov chains on a poset-indexed state space.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{max_abs_diff, Matrix};
use crate::poset::Poset;
use crate::spectrum::{SpectrumReport, SpectrumSource};
use crate::tol;

/// Transition matrix `P`, initial law `nu` and (optionally) the stationary
/// law `pi`, all indexed like the states of `poset`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSpec {
    pub poset: Poset,
    pub p: Matrix,
    pub nu: Vec<f64>,
    pub pi: Option<Vec<f64>>,
}

impl ChainSpec {
    /// Checks shapes only; stochasticity is reported by [`validate`].
    pub fn new(poset: Poset, p: Matrix, nu: Vec<f64>, pi: Option<Vec<f64>>) -> Result<Self> {
        let m = poset.len();
        for found in [p.rows(), p.cols(), nu.len()]
            .into_iter()
            .chain(pi.as_ref().map(Vec::len))
        {
            if found != m {
                return Err(Error::DimensionMismatch { expected: m, found });
            }
        }
        Ok(ChainSpec { poset, p, nu, pi })
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    /// `pi`, or `MissingStationary`.
    pub fn pi(&self) -> Result<&[f64]> {
        self.pi.as_deref().ok_or(Error::MissingStationary)
    }

    /// Fills in `pi` by [`stationary`] when absent.
    pub fn with_stationary(mut self) -> Result<Self> {
        if self.pi.is_none() {
            self.pi = Some(stationary(&self)?);
        }
        Ok(self)
    }

    /// Same chain started from `nu`.
    pub fn with_initial(&self, nu: Vec<f64>) -> Result<Self> {
        ChainSpec::new(self.poset.clone(), self.p.clone(), nu, self.pi.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub max_row_residual: f64,
    /// Rows whose sum is off by more than the construction tolerance.
    pub row_violations: Vec<usize>,
    /// Entries `(row, col)` that are negative.
    pub negative_entries: Vec<(usize, usize)>,
    pub nu_residual: f64,
    pub nu_negative: bool,
    pub irreducible: bool,
    /// Period of the communicating class of state 0 (0 when it has no cycle).
    pub period: usize,
    pub aperiodic: bool,
}

impl ValidationReport {
    pub fn is_stochastic(&self) -> bool {
        self.row_violations.is_empty()
            && self.negative_entries.is_empty()
            && self.nu_residual <= tol::CONSTRUCTION
            && !self.nu_negative
    }

    pub fn is_ergodic(&self) -> bool {
        self.irreducible && self.aperiodic
    }
}

pub fn validate(c: &ChainSpec) -> ValidationReport {
    let m = c.len();
    let mut max_row_residual: f64 = 0.0;
    let mut row_violations = Vec::new();
    let mut negative_entries = Vec::new();
    for i in 0..m {
        let row = c.p.row(i);
        let r = (row.iter().sum::<f64>() - 1.0).abs();
        max_row_residual = max_row_residual.max(r);
        if r > tol::CONSTRUCTION {
            row_violations.push(i);
        }
        negative_entries.extend(
            row.iter()
                .enumerate()
                .filter(|(_, &v)| v < 0.0)
                .map(|(j, _)| (i, j)),
        );
    }
    let nu_residual = (c.nu.iter().sum::<f64>() - 1.0).abs();
    let nu_negative = c.nu.iter().any(|&v| v < 0.0);
    let (irreducible, period) = connectivity(&c.p);
    ValidationReport {
        max_row_residual,
        row_violations,
        negative_entries,
        nu_residual,
        nu_negative,
        irreducible,
        period,
        aperiodic: period == 1,
    }
}

fn successors(p: &Matrix) -> Vec<Vec<usize>> {
    (0..p.rows())
        .map(|i| {
            p.row(i)
                .iter()
                .enumerate()
                .filter(|(_, &v)| v > 0.0)
                .map(|(j, _)| j)
                .collect()
        })
        .collect()
}

fn bfs(adj: &[Vec<usize>], start: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    dist[start] = Some(0);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        let d = dist[v].unwrap_or(0);
        for &w in &adj[v] {
            if dist[w].is_none() {
                dist[w] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Strong connectivity of the positive-entry digraph and the period of the
/// class containing state 0.
fn connectivity(p: &Matrix) -> (bool, usize) {
    let m = p.rows();
    if m == 0 {
        return (false, 0);
    }
    let fwd = successors(p);
    let mut bwd = vec![Vec::new(); m];
    for (v, ws) in fwd.iter().enumerate() {
        for &w in ws {
            bwd[w].push(v);
        }
    }
    let df = bfs(&fwd, 0);
    let db = bfs(&bwd, 0);
    let in_class: Vec<bool> = (0..m).map(|v| df[v].is_some() && db[v].is_some()).collect();
    let irreducible = in_class.iter().all(|&b| b);
    let mut period = 0;
    for v in (0..m).filter(|&v| in_class[v]) {
        for &w in fwd[v].iter().filter(|&&w| in_class[w]) {
            let (dv, dw) = (df[v].unwrap_or(0), df[w].unwrap_or(0));
            period = gcd(period, (dv + 1).abs_diff(dw));
        }
    }
    (irreducible, period)
}

/// Solves `pi (P - I) = 0`, `sum pi = 1` by a dense LU solve.
pub fn stationary(c: &ChainSpec) -> Result<Vec<f64>> {
    let m = c.len();
    if !connectivity(&c.p).0 {
        return Err(Error::NotIrreducible);
    }
    // Rows of A are the equations sum_x pi(x) (P(x,y) - 1{x=y}) = 0, with
    // the last one replaced by the normalization.
    let mut a = nalgebra::DMatrix::<f64>::zeros(m, m);
    for x in 0..m {
        for y in 0..m {
            a[(y, x)] = c.p[(x, y)] - if x == y { 1.0 } else { 0.0 };
        }
    }
    for x in 0..m {
        a[(m - 1, x)] = 1.0;
    }
    let mut b = nalgebra::DVector::<f64>::zeros(m);
    b[m - 1] = 1.0;
    let pi = a
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::SingularSystem("stationary equations".into()))?;
    let pi: Vec<f64> = pi.iter().copied().collect();
    let moved = c.p.left_mul(&pi)?;
    let residual = max_abs_diff(&moved, &pi);
    if !(residual <= tol::STATIONARITY) {
        return Err(Error::SingularSystem(format!(
            "stationary residual {residual:e}"
        )));
    }
    Ok(pi)
}

fn positive_pi(c: &ChainSpec) -> Result<&[f64]> {
    let pi = c.pi()?;
    if let Some(i) = pi.iter().position(|&v| !(v > 0.0)) {
        return Err(Error::NonPositiveStationary {
            state: c.poset.label(i).to_string(),
        });
    }
    Ok(pi)
}

/// `P~(x,y) = pi(y) P(y,x) / pi(x)`.
pub fn time_reversal(c: &ChainSpec) -> Result<Matrix> {
    let pi = positive_pi(c)?;
    Ok(Matrix::from_fn(c.len(), c.len(), |x, y| {
        pi[y] * c.p[(y, x)] / pi[x]
    }))
}

/// Largest detailed-balance defect `|pi(x)P(x,y) - pi(y)P(y,x)|`.
pub fn detailed_balance_residual(c: &ChainSpec) -> Result<f64> {
    let pi = c.pi()?;
    let m = c.len();
    let mut worst: f64 = 0.0;
    for x in 0..m {
        for y in x + 1..m {
            worst = worst.max((pi[x] * c.p[(x, y)] - pi[y] * c.p[(y, x)]).abs());
        }
    }
    Ok(worst)
}

pub fn is_reversible(c: &ChainSpec, tol: f64) -> Result<bool> {
    Ok(detailed_balance_residual(c)? <= tol)
}

/// `nu P^n` by repeated vector-matrix products.
pub fn evolve(c: &ChainSpec, n: usize) -> Result<Vec<f64>> {
    let mut v = c.nu.clone();
    for _ in 0..n {
        v = c.p.left_mul(&v)?;
    }
    Ok(v)
}

/// Eigenvalues of a reversible chain from the symmetric matrix
/// `D^{1/2} P D^{-1/2}`, `D = diag(pi)`.
pub fn spectrum_numeric(c: &ChainSpec) -> Result<SpectrumReport> {
    let pi = positive_pi(c)?;
    let residual = detailed_balance_residual(c)?;
    if residual > tol::STATIONARITY {
        return Err(Error::NotReversible { residual });
    }
    let m = c.len();
    let sq: Vec<f64> = pi.iter().map(|v| v.sqrt()).collect();
    let mut s = nalgebra::DMatrix::<f64>::zeros(m, m);
    for x in 0..m {
        for y in 0..m {
            s[(x, y)] = sq[x] * c.p[(x, y)] / sq[y];
        }
    }
    let sym = (&s + s.transpose()) * 0.5;
    let eig = nalgebra::SymmetricEigen::new(sym);
    Ok(SpectrumReport::from_values(
        eig.eigenvalues.iter().copied().collect(),
        tol::EIGEN_GROUP,
        SpectrumSource::Numeric,
    ))
}
