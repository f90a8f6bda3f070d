//! Direction-weighted random walk on the square lattice `{0..N}^2`.
//!
//! State `(x, y)` has index `x + (N + 1) y`.

use std::collections::BTreeMap;

use super::{check_size, delta, Model};
use crate::chain::ChainSpec;
use crate::duality::DualChain;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poset::grid_poset;

/// Moves right `lambda1`, left `mu1`, up `lambda2`, down `mu2` when feasible;
/// the remaining mass is a self-loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec {
    pub n: usize,
    pub lambda1: f64,
    pub lambda2: f64,
    pub mu1: f64,
    pub mu2: f64,
}

impl LatticeSpec {
    pub fn new(n: usize, lambda1: f64, lambda2: f64, mu1: f64, mu2: f64) -> Result<Self> {
        let spec = LatticeSpec {
            n,
            lambda1,
            lambda2,
            mu1,
            mu2,
        };
        spec.check()?;
        Ok(spec)
    }

    fn check(&self) -> Result<()> {
        let rates = [self.lambda1, self.lambda2, self.mu1, self.mu2];
        if rates.iter().any(|&r| !(r > 0.0) || !r.is_finite()) {
            return Err(Error::BadParameters(format!(
                "lattice move probabilities must be positive (got {rates:?})"
            )));
        }
        if rates.iter().sum::<f64>() > 1.0 + 1e-15 {
            return Err(Error::BadParameters(format!(
                "lambda1 + lambda2 + mu1 + mu2 must not exceed 1 (got {})",
                rates.iter().sum::<f64>()
            )));
        }
        if self.n == 0 {
            return Err(Error::BadParameters(
                "lattice side N must be at least 1".into(),
            ));
        }
        Ok(())
    }

    pub fn rho1(&self) -> f64 {
        self.lambda1 / self.mu1
    }

    pub fn rho2(&self) -> f64 {
        self.lambda2 / self.mu2
    }

    pub fn side(&self) -> usize {
        self.n + 1
    }

    pub fn index(&self, x: usize, y: usize) -> usize {
        x + self.side() * y
    }

    pub fn coords(&self, state: usize) -> (usize, usize) {
        (state % self.side(), state / self.side())
    }

    fn size(&self) -> Result<usize> {
        check_size(self.side().checked_mul(self.side()))
    }

    fn labels(&self) -> Vec<String> {
        let m = self.side() * self.side();
        (0..m)
            .map(|s| {
                let (x, y) = self.coords(s);
                format!("({x},{y})")
            })
            .collect()
    }

    /// `pi(x, y) ∝ rho1^x rho2^y`, normalized by explicit finite sums.
    pub fn stationary(&self) -> Vec<f64> {
        let side = self.side();
        let px: Vec<f64> = (0..side).map(|x| self.rho1().powi(x as i32)).collect();
        let py: Vec<f64> = (0..side).map(|y| self.rho2().powi(y as i32)).collect();
        let z = px.iter().sum::<f64>() * py.iter().sum::<f64>();
        (0..side * side)
            .map(|s| {
                let (x, y) = self.coords(s);
                px[x] * py[y] / z
            })
            .collect()
    }

    fn params(&self) -> BTreeMap<String, f64> {
        BTreeMap::from([
            ("N".to_string(), self.n as f64),
            ("lambda1".to_string(), self.lambda1),
            ("lambda2".to_string(), self.lambda2),
            ("mu1".to_string(), self.mu1),
            ("mu2".to_string(), self.mu2),
        ])
    }
}

pub fn lattice_walk(spec: &LatticeSpec) -> Result<Model> {
    spec.check()?;
    let m = spec.size()?;
    let n = spec.n;
    let mut p = Matrix::zeros(m, m);
    for s in 0..m {
        let (x, y) = spec.coords(s);
        let mut moved = 0.0;
        let mut step = |t: usize, w: f64| {
            p[(s, t)] += w;
            moved += w;
        };
        if x < n {
            step(spec.index(x + 1, y), spec.lambda1);
        }
        if x > 0 {
            step(spec.index(x - 1, y), spec.mu1);
        }
        if y < n {
            step(spec.index(x, y + 1), spec.lambda2);
        }
        if y > 0 {
            step(spec.index(x, y - 1), spec.mu2);
        }
        p[(s, s)] += 1.0 - moved;
    }
    let poset = grid_poset(&[spec.side(), spec.side()])?.relabel(spec.labels())?;
    let chain = ChainSpec::new(poset, p, delta(m, 0), Some(spec.stationary()))?;
    Ok(Model {
        name: "lattice".to_string(),
        params: spec.params(),
        chain,
        warnings: Vec::new(),
    })
}

/// Closed-form dual, absorbing at `(N, N)`.
///
/// Up-moves along axis `i` happen with `mu_i (1 - rho^{c+2}) / (1 - rho^{c+1})`
/// and down-moves with `lambda_i (1 - rho^c) / (1 - rho^{c+1})`, where `c` is
/// the current coordinate. A coordinate that has reached `N` stays there.
/// Requires `lambda_i != mu_i`.
pub fn lattice_walk_dual(spec: &LatticeSpec) -> Result<DualChain> {
    spec.check()?;
    if spec.lambda1 == spec.mu1 || spec.lambda2 == spec.mu2 {
        return Err(Error::BadParameters(
            "closed-form lattice dual needs lambda1 != mu1 and lambda2 != mu2".into(),
        ));
    }
    let m = spec.size()?;
    let n = spec.n;
    let ratio = |rho: f64, a: i32, b: i32| (1.0 - rho.powi(a)) / (1.0 - rho.powi(b));
    let (r1, r2) = (spec.rho1(), spec.rho2());

    let mut p = Matrix::zeros(m, m);
    for s in 0..m {
        let (x, y) = spec.coords(s);
        let (xi, yi) = (x as i32, y as i32);
        if x < n {
            p[(s, spec.index(x + 1, y))] = ratio(r1, xi + 2, xi + 1) * spec.mu1;
            if x > 0 {
                p[(s, spec.index(x - 1, y))] = ratio(r1, xi, xi + 1) * spec.lambda1;
            }
        }
        if y < n {
            p[(s, spec.index(x, y + 1))] = ratio(r2, yi + 2, yi + 1) * spec.mu2;
            if y > 0 {
                p[(s, spec.index(x, y - 1))] = ratio(r2, yi, yi + 1) * spec.lambda2;
            }
        }
        p[(s, s)] = match (x < n, y < n) {
            (true, true) => 1.0 - (spec.lambda1 + spec.lambda2 + spec.mu1 + spec.mu2),
            (true, false) => 1.0 - (spec.lambda1 + spec.mu1),
            (false, true) => 1.0 - (spec.lambda2 + spec.mu2),
            (false, false) => 1.0,
        };
    }
    let poset = grid_poset(&[spec.side(), spec.side()])?.relabel(spec.labels())?;
    DualChain::new(poset, p, delta(m, 0), m - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> LatticeSpec {
        LatticeSpec::new(3, 0.2, 0.15, 0.25, 0.3).unwrap()
    }

    #[test]
    fn interior_row_has_five_nonzeros() {
        let s = spec();
        let model = lattice_walk(&s).unwrap();
        let row = model.chain.p.row(s.index(1, 2));
        assert_eq!(row.iter().filter(|&&v| v > 0.0).count(), 5);
        assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn corner_feedback() {
        let s = spec();
        let model = lattice_walk(&s).unwrap();
        assert!((model.chain.p[(0, 0)] - (1.0 - 0.2 - 0.15)).abs() < 1e-15);
        let top = s.index(3, 3);
        assert!((model.chain.p[(top, top)] - (1.0 - 0.25 - 0.3)).abs() < 1e-15);
        // (N, 0): left, up; the table's "x' = x > 0, y = 0" row would add lambda1
        let corner = s.index(3, 0);
        assert!((model.chain.p[(corner, corner)] - (1.0 - 0.25 - 0.15)).abs() < 1e-15);
    }

    #[test]
    fn equal_rates_give_uniform_stationary_law() {
        let s = LatticeSpec::new(2, 0.2, 0.1, 0.2, 0.1).unwrap();
        assert!(s
            .stationary()
            .iter()
            .all(|&v| (v - 1.0 / 9.0).abs() < 1e-15));
    }

    #[test]
    fn small_lattice_stationary_law() {
        // N = 1, rho = 0.8: weights {1, .8, .8, .64} / 3.24
        let s = LatticeSpec::new(1, 0.2, 0.2, 0.25, 0.25).unwrap();
        let pi = s.stationary();
        assert!((pi[0] - 1.0 / 3.24).abs() < 1e-15);
        assert!((pi[3] - 0.64 / 3.24).abs() < 1e-15);
    }

    #[test]
    fn dual_rows_sum_to_one_on_every_border() {
        let s = spec();
        let d = lattice_walk_dual(&s).unwrap();
        for (i, sum) in d.p_star.row_sums().iter().enumerate() {
            assert!((sum - 1.0).abs() < 1e-12, "row {i}: {sum}");
        }
        assert!(d.is_absorbing());
        // no down-y on the top border, no down-x on the right border
        assert_eq!(d.p_star[(s.index(1, 3), s.index(1, 2))], 0.0);
        assert_eq!(d.p_star[(s.index(3, 1), s.index(2, 1))], 0.0);
    }

    #[test]
    fn first_move_probability() {
        let s = LatticeSpec::new(1, 0.2, 0.2, 0.25, 0.25).unwrap();
        let d = lattice_walk_dual(&s).unwrap();
        assert!((d.p_star[(0, 1)] - 0.45).abs() < 1e-15);
    }

    #[test]
    fn axis_identity() {
        // mu (1 - r^{x+2}) + lambda (1 - r^x) = (lambda + mu)(1 - r^{x+1})
        let (l, m) = (0.2f64, 0.35f64);
        let r = l / m;
        for x in 0..10 {
            let lhs = m * (1.0 - r.powi(x + 2)) + l * (1.0 - r.powi(x));
            let rhs = (l + m) * (1.0 - r.powi(x + 1));
            assert!((lhs - rhs).abs() < 1e-15);
        }
    }

    #[test]
    fn bad_parameters() {
        assert!(LatticeSpec::new(2, 0.5, 0.3, 0.3, 0.1).is_err());
        assert!(LatticeSpec::new(2, 0.0, 0.3, 0.3, 0.1).is_err());
        let sym = LatticeSpec::new(2, 0.2, 0.1, 0.2, 0.15).unwrap();
        assert!(lattice_walk(&sym).is_ok());
        assert!(matches!(
            lattice_walk_dual(&sym),
            Err(Error::BadParameters(_))
        ));
    }
}
