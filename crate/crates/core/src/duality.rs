//! Möbius monotonicity certificates and the strong stationary dual built
//! on the truncated-stationary link.
//!
//! With `C` the zeta matrix and `mu = C^{-1}`, the dual of a chain whose
//! time reversal `P~` satisfies `C^{-1} P~ C >= 0` is
//!
//! ```text
//! P*(i, j) = H(j) / H(i) * (C^{-1} P~ C)(j, i)
//! nu*(i)   = H(i) * (C^{-1} g)(i),          g = nu / pi
//! ```
//!
//! where `H(j)` is the `pi`-mass of the down-set of `j`. The link is
//! `Lambda(j, i) = 1{i ⪯ j} pi(i) / H(j)`.

use serde::Serialize;

use crate::absorption::{absorption_survival, separation_curve};
use crate::chain::{time_reversal, ChainSpec};
use crate::error::{Error, MonotonicityKind, Result};
use crate::matrix::{max_abs_diff, Matrix};
use crate::poset::{mobius_pair, MobiusPair, Poset};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `C^{-1} P C >= 0` (functions: `f (C^T)^{-1} >= 0`).
    Down,
    /// `(C^T)^{-1} P C^T >= 0` (functions: `f C^{-1} >= 0`).
    Up,
}

impl std::str::FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "down" => Ok(Direction::Down),
            "up" => Ok(Direction::Up),
            other => Err(format!("unknown direction {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub direction: Direction,
    /// Transformed kernel (`M x M`), or a `1 x M` row for a function check.
    #[serde(skip)]
    pub transformed: Matrix,
    pub min_entry: f64,
    pub passed: bool,
    /// `(row, col)` of the most negative transformed entry.
    pub witness: (usize, usize),
}

impl MonotonicityReport {
    fn from_transformed(direction: Direction, transformed: Matrix, tol: f64) -> Self {
        let (min_entry, r, c) = transformed.min_entry().unwrap_or((0.0, 0, 0));
        MonotonicityReport {
            direction,
            transformed,
            min_entry,
            passed: min_entry >= -tol,
            witness: (r, c),
        }
    }
}

/// `C^{-1} K` where `K = P C`, i.e. entry `(j, i)` is
/// `sum_{e ⪰ j} mu(j, e) P(e, {i}↓)`. Sums run in ascending enumeration order.
fn down_transform(p: &Matrix, poset: &Poset, mobius: &MobiusPair) -> Matrix {
    let m = poset.len();
    let ups: Vec<Vec<usize>> = (0..m).map(|i| poset.up_set(i)).collect();
    // K(e, i) = P(e, {i}↓)
    let mut k = Matrix::zeros(m, m);
    for e in 0..m {
        let src = p.row(e);
        let dst = k.row_mut(e);
        for &x in poset.enumeration() {
            let v = src[x];
            if v == 0.0 {
                continue;
            }
            for &i in &ups[x] {
                dst[i] += v;
            }
        }
    }
    let mut t = Matrix::zeros(m, m);
    for j in 0..m {
        let dst = t.row_mut(j);
        for &(e, mu) in mobius.row(j) {
            let mu = mu as f64;
            for (d, &v) in dst.iter_mut().zip(k.row(e)) {
                *d += mu * v;
            }
        }
    }
    t
}

/// `(C^T)^{-1} P C^T`: entry `(j, i)` is `sum_{e ⪯ j} P(e, {i}↑) mu(e, j)`.
fn up_transform(p: &Matrix, poset: &Poset, mobius: &MobiusPair) -> Matrix {
    let m = poset.len();
    let downs: Vec<Vec<usize>> = (0..m).map(|i| poset.down_set(i)).collect();
    let mut k = Matrix::zeros(m, m);
    for e in 0..m {
        let src = p.row(e);
        let dst = k.row_mut(e);
        for &x in poset.enumeration() {
            let v = src[x];
            if v == 0.0 {
                continue;
            }
            for &i in &downs[x] {
                dst[i] += v;
            }
        }
    }
    let mut t = Matrix::zeros(m, m);
    for j in 0..m {
        let dst = t.row_mut(j);
        for &(e, mu) in mobius.col(j) {
            let mu = mu as f64;
            for (d, &v) in dst.iter_mut().zip(k.row(e)) {
                *d += mu * v;
            }
        }
    }
    t
}

/// Möbius monotonicity of a kernel in the given direction.
pub fn check_mobius_monotone(
    p: &Matrix,
    poset: &Poset,
    direction: Direction,
    tol: f64,
) -> Result<MonotonicityReport> {
    let m = poset.len();
    for found in [p.rows(), p.cols()] {
        if found != m {
            return Err(Error::DimensionMismatch { expected: m, found });
        }
    }
    let mobius = mobius_pair(poset);
    let t = match direction {
        Direction::Down => down_transform(p, poset, &mobius),
        Direction::Up => up_transform(p, poset, &mobius),
    };
    Ok(MonotonicityReport::from_transformed(direction, t, tol))
}

/// `g = nu / pi`.
pub fn g_function(c: &ChainSpec) -> Result<Vec<f64>> {
    let pi = c.pi()?;
    Ok(c.nu.iter().zip(pi).map(|(n, p)| n / p).collect())
}

fn function_transform(g: &[f64], mobius: &MobiusPair, direction: Direction) -> Vec<f64> {
    (0..g.len())
        .map(|i| match direction {
            Direction::Down => mobius.row(i).iter().map(|&(e, mu)| mu as f64 * g[e]).sum(),
            Direction::Up => mobius.col(i).iter().map(|&(e, mu)| mu as f64 * g[e]).sum(),
        })
        .collect()
}

/// Down-Möbius monotonicity of `g = nu / pi`: `(C^{-1} g)(i) >= -tol` for all `i`.
pub fn check_g_monotone(c: &ChainSpec, tol: f64) -> Result<MonotonicityReport> {
    check_g_monotone_direction(c, Direction::Down, tol)
}

pub fn check_g_monotone_direction(
    c: &ChainSpec,
    direction: Direction,
    tol: f64,
) -> Result<MonotonicityReport> {
    let g = g_function(c)?;
    let mobius = mobius_pair(&c.poset);
    let row = function_transform(&g, &mobius, direction);
    let t = Matrix::from_rows(&[row])?;
    Ok(MonotonicityReport::from_transformed(direction, t, tol))
}

/// Truncated-stationary link with the down-set masses `H`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkKernel {
    pub lambda: Matrix,
    pub h: Vec<f64>,
}

pub fn build_link(poset: &Poset, pi: &[f64]) -> Result<LinkKernel> {
    let m = poset.len();
    if pi.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: pi.len(),
        });
    }
    if let Some(i) = pi.iter().position(|&v| !(v > 0.0)) {
        return Err(Error::NonPositiveStationary {
            state: poset.label(i).to_string(),
        });
    }
    if !poset.has_unique_max() {
        return Err(no_unique_max(poset));
    }
    let mut h = vec![0.0; m];
    let mut lambda = Matrix::zeros(m, m);
    for j in 0..m {
        let down = poset.down_set(j);
        h[j] = down.iter().map(|&e| pi[e]).sum();
        for &i in &down {
            lambda[(j, i)] = pi[i] / h[j];
        }
    }
    Ok(LinkKernel { lambda, h })
}

fn no_unique_max(poset: &Poset) -> Error {
    Error::NoUniqueMax {
        maximal: poset
            .maximal_elements()
            .into_iter()
            .map(|i| poset.label(i).to_string())
            .collect(),
    }
}

/// Absorbing dual chain on the same poset as its primal.
#[derive(Debug, Clone, PartialEq)]
pub struct DualChain {
    pub poset: Poset,
    pub p_star: Matrix,
    pub nu_star: Vec<f64>,
    pub absorbing_index: usize,
}

impl DualChain {
    pub fn new(
        poset: Poset,
        p_star: Matrix,
        nu_star: Vec<f64>,
        absorbing_index: usize,
    ) -> Result<Self> {
        let m = poset.len();
        for found in [p_star.rows(), p_star.cols(), nu_star.len()] {
            if found != m {
                return Err(Error::DimensionMismatch { expected: m, found });
            }
        }
        if absorbing_index >= m {
            return Err(Error::NoAbsorbingState {
                index: absorbing_index,
            });
        }
        Ok(DualChain {
            poset,
            p_star,
            nu_star,
            absorbing_index,
        })
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    /// Whether the absorbing row is the unit vector at itself.
    pub fn is_absorbing(&self) -> bool {
        let a = self.absorbing_index;
        self.p_star
            .row(a)
            .iter()
            .enumerate()
            .all(|(j, &v)| v == if j == a { 1.0 } else { 0.0 })
    }

    /// States reachable from the support of `nu*`, ascending by index.
    pub fn reachable_states(&self) -> Vec<usize> {
        let m = self.len();
        let mut seen = vec![false; m];
        let mut stack: Vec<usize> = (0..m).filter(|&i| self.nu_star[i] > 0.0).collect();
        for &s in &stack {
            seen[s] = true;
        }
        while let Some(v) = stack.pop() {
            for (w, &p) in self.p_star.row(v).iter().enumerate() {
                if p > 0.0 && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        (0..m).filter(|&i| seen[i]).collect()
    }

    /// The closed sub-chain on [`reachable_states`](Self::reachable_states).
    pub fn reachable_part(&self) -> Result<DualChain> {
        let states = self.reachable_states();
        let poset = self.poset.induced(&states)?;
        let p_star = Matrix::from_fn(states.len(), states.len(), |a, b| {
            self.p_star[(states[a], states[b])]
        });
        let nu_star = states.iter().map(|&s| self.nu_star[s]).collect();
        let absorbing_index = states
            .iter()
            .position(|&s| s == self.absorbing_index)
            .ok_or(Error::NoAbsorbingState {
                index: self.absorbing_index,
            })?;
        DualChain::new(poset, p_star, nu_star, absorbing_index)
    }
}

/// Clamps entries in `[-CLAMP, 0)` to zero; more negative entries are a
/// monotonicity failure. Returns whether anything was clamped.
fn clamp_row(
    row: &mut [f64],
    poset: &Poset,
    row_state: usize,
    kind: MonotonicityKind,
) -> Result<bool> {
    let mut clamped = false;
    for (j, v) in row.iter_mut().enumerate() {
        if *v < -tol::CLAMP {
            return Err(Error::MonotonicityViolated {
                kind,
                min_entry: *v,
                row: poset.label(row_state).to_string(),
                col: poset.label(j).to_string(),
            });
        }
        if *v < 0.0 {
            *v = 0.0;
            clamped = true;
        }
    }
    Ok(clamped)
}

fn settle_row(row: &mut [f64], poset: &Poset, row_state: usize, clamped: bool) -> Result<()> {
    let sum: f64 = row.iter().sum();
    if !((sum - 1.0).abs() <= tol::STATIONARITY) {
        return Err(Error::NotRowStochastic {
            row: poset.label(row_state).to_string(),
            sum,
        });
    }
    if clamped {
        row.iter_mut().for_each(|v| *v /= sum);
    }
    Ok(())
}

fn violation(kind: MonotonicityKind, report: &MonotonicityReport, poset: &Poset) -> Error {
    let (r, c) = report.witness;
    let row = match kind {
        MonotonicityKind::Kernel => poset.label(r).to_string(),
        MonotonicityKind::InitialDistribution => "g".to_string(),
    };
    Error::MonotonicityViolated {
        kind,
        min_entry: report.min_entry,
        row,
        col: poset.label(c).to_string(),
    }
}

/// Builds the strong stationary dual of `c` (which must carry `pi`).
pub fn build_dual(c: &ChainSpec) -> Result<DualChain> {
    let poset = &c.poset;
    let pi = c.pi()?;
    let top = poset.unique_max().ok_or_else(|| no_unique_max(poset))?;
    let reversed = time_reversal(c)?;

    let kernel = check_mobius_monotone(&reversed, poset, Direction::Down, tol::CLAMP)?;
    if !kernel.passed {
        return Err(violation(MonotonicityKind::Kernel, &kernel, poset));
    }
    let initial = check_g_monotone(c, tol::CLAMP)?;
    if !initial.passed {
        return Err(violation(
            MonotonicityKind::InitialDistribution,
            &initial,
            poset,
        ));
    }
    let link = build_link(poset, pi)?;
    let h = &link.h;
    let t = &kernel.transformed;

    let m = poset.len();
    let mut p_star = Matrix::from_fn(m, m, |i, j| h[j] / h[i] * t[(j, i)]);
    for i in 0..m {
        let row = p_star.row_mut(i);
        let clamped = clamp_row(row, poset, i, MonotonicityKind::Kernel)?;
        settle_row(row, poset, i, clamped)?;
    }
    // The top row is a unit vector in exact arithmetic; remove round-off.
    let top_row = p_star.row_mut(top);
    let off = top_row
        .iter()
        .enumerate()
        .map(|(j, &v)| (v - f64::from(j == top)).abs())
        .fold(0.0, f64::max);
    if off > tol::STATIONARITY {
        return Err(Error::NoAbsorbingState { index: top });
    }
    top_row
        .iter_mut()
        .enumerate()
        .for_each(|(j, v)| *v = f64::from(j == top));

    let mut nu_star: Vec<f64> = initial
        .transformed
        .row(0)
        .iter()
        .zip(h)
        .map(|(v, h)| h * v)
        .collect();
    let clamped = clamp_row(
        &mut nu_star,
        poset,
        top,
        MonotonicityKind::InitialDistribution,
    )?;
    let sum: f64 = nu_star.iter().sum();
    if !((sum - 1.0).abs() <= tol::STATIONARITY) {
        return Err(Error::NotRowStochastic {
            row: "nu*".into(),
            sum,
        });
    }
    if clamped {
        nu_star.iter_mut().for_each(|v| *v /= sum);
    }

    DualChain::new(poset.clone(), p_star, nu_star, top)
}

/// `‖nu - nu* Lambda‖_inf` and `‖Lambda P - P* Lambda‖_inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntertwiningResidual {
    pub initial: f64,
    pub kernel: f64,
}

impl IntertwiningResidual {
    pub fn max(&self) -> f64 {
        self.initial.max(self.kernel)
    }
}

pub fn verify_intertwining(
    c: &ChainSpec,
    d: &DualChain,
    link: &LinkKernel,
) -> Result<IntertwiningResidual> {
    let m = c.len();
    for found in [d.len(), link.lambda.rows(), link.lambda.cols()] {
        if found != m {
            return Err(Error::DimensionMismatch { expected: m, found });
        }
    }
    let initial = max_abs_diff(&c.nu, &link.lambda.left_mul(&d.nu_star)?);
    let lp = link.lambda.mul(&c.p)?;
    let pl = d.p_star.mul(&link.lambda)?;
    Ok(IntertwiningResidual {
        initial,
        kernel: lp.max_abs_diff(&pl),
    })
}

/// `max_{n <= horizon} |s(nu P^n, pi) - P(T* > n)|`.
pub fn verify_sharpness(c: &ChainSpec, d: &DualChain, horizon: usize) -> Result<f64> {
    let sep = separation_curve(c, horizon)?;
    let law = absorption_survival(d, horizon)?;
    Ok(max_abs_diff(&sep.separation, &law.survival))
}
