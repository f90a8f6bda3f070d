//! Lazy single-coordinate resampling on `{0..k}^n`.

use std::collections::BTreeMap;

use super::{check_size, delta, Model};
use crate::chain::ChainSpec;
use crate::duality::{build_dual, DualChain};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poset::grid_poset;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CubeSpec {
    pub n: usize,
    pub k: usize,
}

impl CubeSpec {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::BadParameters(format!(
                "cube needs n >= 1 and k >= 1 (got n = {n}, k = {k})"
            )));
        }
        Ok(CubeSpec { n, k })
    }

    fn radix(&self) -> usize {
        self.k + 1
    }

    fn size(&self) -> Result<usize> {
        check_size(
            u32::try_from(self.n)
                .ok()
                .and_then(|n| self.radix().checked_pow(n)),
        )
    }

    pub fn digits(&self, mut state: usize) -> Vec<usize> {
        let mut d = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            d.push(state % self.radix());
            state /= self.radix();
        }
        d
    }

    fn label(&self, state: usize) -> String {
        let parts: Vec<String> = self.digits(state).iter().map(|d| d.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

/// Index of the corner `e_A`: coordinate `i` equals `k` for `i` in `A`
/// (bit `i` of `subset`), 0 otherwise.
pub fn cube_corner_index(spec: &CubeSpec, subset: usize) -> usize {
    let mut idx = 0;
    let mut place = 1;
    for i in 0..spec.n {
        if subset >> i & 1 == 1 {
            idx += spec.k * place;
        }
        place *= spec.radix();
    }
    idx
}

/// `(subset, state index)` for every corner, by ascending subset bitmask.
pub fn cube_corner_states(spec: &CubeSpec) -> Vec<(usize, usize)> {
    (0..1usize << spec.n)
        .map(|a| (a, cube_corner_index(spec, a)))
        .collect()
}

/// Holds with probability 1/2, otherwise moves one uniformly chosen
/// coordinate to a uniformly chosen different value.
pub fn kary_cube(spec: &CubeSpec) -> Result<Model> {
    let m = spec.size()?;
    let (n, k) = (spec.n, spec.k);
    let move_p = 1.0 / (2 * n * k) as f64;
    let mut p = Matrix::zeros(m, m);
    for s in 0..m {
        p[(s, s)] = 0.5;
        let digits = spec.digits(s);
        let mut place = 1;
        for &d in &digits {
            for v in (0..=k).filter(|&v| v != d) {
                let t = s - d * place + v * place;
                p[(s, t)] = move_p;
            }
            place *= spec.radix();
        }
    }
    let labels = (0..m).map(|s| spec.label(s)).collect();
    let poset = grid_poset(&vec![spec.radix(); n])?.relabel(labels)?;
    let chain = ChainSpec::new(poset, p, delta(m, 0), Some(vec![1.0 / m as f64; m]))?;
    Ok(Model {
        name: "cube".to_string(),
        params: BTreeMap::from([("n".to_string(), n as f64), ("k".to_string(), k as f64)]),
        chain,
        warnings: Vec::new(),
    })
}

/// Dual on the full cube. Rows at the corners `e_A` are the closed form
/// (`(k+1)/(2nk)` to each `e_{A+j}`, hold `(n(k-1) + |A|(k+1))/(2nk)`);
/// the remaining rows, never visited from `e_1`, come from [`build_dual`].
pub fn kary_cube_dual(spec: &CubeSpec) -> Result<DualChain> {
    let model = kary_cube(spec)?;
    let mut dual = build_dual(&model.chain)?;
    let (n, k) = (spec.n, spec.k);
    let denom = (2 * n * k) as f64;
    let step = (k + 1) as f64 / denom;
    for (subset, s) in cube_corner_states(spec) {
        let row = dual.p_star.row_mut(s);
        row.iter_mut().for_each(|v| *v = 0.0);
        let size = subset.count_ones() as usize;
        row[s] = (n * (k - 1) + size * (k + 1)) as f64 / denom;
        for j in (0..n).filter(|&j| subset >> j & 1 == 0) {
            row[cube_corner_index(spec, subset | 1 << j)] = step;
        }
    }
    dual.nu_star = delta(dual.len(), 0);
    Ok(dual)
}
