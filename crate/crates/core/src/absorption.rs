//! Separation distance, absorption-time laws and the closed-form bounds.

use serde::Serialize;

use crate::chain::ChainSpec;
use crate::duality::DualChain;
use crate::error::{Error, Result};
use crate::spectrum::{SpectrumReport, SpectrumSource};
use crate::tol;

/// `s_n = max_e (1 - nu P^n(e) / pi(e))` with the companion total-variation
/// curve, for `n = 0..=horizon`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationCurve {
    pub separation: Vec<f64>,
    pub tv: Vec<f64>,
}

pub fn separation_curve(c: &ChainSpec, horizon: usize) -> Result<SeparationCurve> {
    let pi = c.pi()?;
    let mut separation = Vec::with_capacity(horizon + 1);
    let mut tv = Vec::with_capacity(horizon + 1);
    let mut dist = c.nu.clone();
    for n in 0..=horizon {
        if n > 0 {
            dist = c.p.left_mul(&dist)?;
        }
        let s = dist
            .iter()
            .zip(pi)
            .map(|(d, p)| 1.0 - d / p)
            .fold(f64::NEG_INFINITY, f64::max);
        let l1: f64 = dist.iter().zip(pi).map(|(d, p)| (d - p).abs()).sum();
        separation.push(s);
        tv.push(0.5 * l1);
    }
    Ok(SeparationCurve { separation, tv })
}

/// Survival curve `q_n = P(T > n)` and the first two moments of `T`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AbsorptionLaw {
    pub survival: Vec<f64>,
    pub mean: f64,
    pub variance: f64,
}

/// Default horizon `max(4 * ceil(mean), 50)`.
pub fn default_horizon(mean: f64) -> usize {
    let scaled = if mean.is_finite() && mean > 0.0 {
        4 * mean.ceil() as usize
    } else {
        0
    };
    scaled.max(50)
}

fn transient_states(d: &DualChain) -> Result<Vec<usize>> {
    if d.absorbing_index >= d.len() || !d.is_absorbing() {
        return Err(Error::NoAbsorbingState {
            index: d.absorbing_index,
        });
    }
    Ok((0..d.len()).filter(|&i| i != d.absorbing_index).collect())
}

/// Exact absorption law of a dual chain: survival from powers of the
/// transient block `Q`, moments from the fundamental matrix `(I - Q)^{-1}`.
pub fn absorption_survival(d: &DualChain, horizon: usize) -> Result<AbsorptionLaw> {
    let transient = transient_states(d)?;
    let t = transient.len();
    let q = |a: usize, b: usize| d.p_star[(transient[a], transient[b])];

    let mut mass: Vec<f64> = transient.iter().map(|&s| d.nu_star[s]).collect();
    let mut survival = Vec::with_capacity(horizon + 1);
    for n in 0..=horizon {
        if n > 0 {
            let mut next = vec![0.0; t];
            for (a, &w) in mass.iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                for (b, nx) in next.iter_mut().enumerate() {
                    *nx += w * q(a, b);
                }
            }
            mass = next;
        }
        survival.push(mass.iter().sum::<f64>());
    }

    let (mean, variance) = if t == 0 {
        (0.0, 0.0)
    } else {
        let mut i_minus_q = nalgebra::DMatrix::<f64>::identity(t, t);
        for a in 0..t {
            for b in 0..t {
                i_minus_q[(a, b)] -= q(a, b);
            }
        }
        let lu = i_minus_q.lu();
        let ones = nalgebra::DVector::<f64>::from_element(t, 1.0);
        let m = lu
            .solve(&ones)
            .ok_or_else(|| Error::SingularSystem("fundamental matrix".into()))?;
        let w = lu
            .solve(&m)
            .ok_or_else(|| Error::SingularSystem("fundamental matrix".into()))?;
        let alpha: Vec<f64> = transient.iter().map(|&s| d.nu_star[s]).collect();
        let mean: f64 = alpha.iter().zip(m.iter()).map(|(a, v)| a * v).sum();
        // E[T^2 | start] = (2N - I) N 1 = 2w - m
        let second: f64 = alpha
            .iter()
            .zip(w.iter().zip(m.iter()))
            .map(|(a, (w, m))| a * (2.0 * w - m))
            .sum();
        (mean, (second - mean * mean).max(0.0))
    };
    if !mean.is_finite() {
        return Err(Error::SingularSystem("absorption time moments".into()));
    }
    Ok(AbsorptionLaw {
        survival,
        mean,
        variance,
    })
}

/// Law of `sum_i Y_i` for independent geometric `Y_i` on `{1, 2, ...}` with
/// success probabilities `p`, by sequential convolution.
pub fn geometric_sum_law(p: &[f64], horizon: usize) -> Result<AbsorptionLaw> {
    if let Some(&bad) = p.iter().find(|&&x| !(x > 0.0 && x <= 1.0)) {
        return Err(Error::BadProbability(bad));
    }
    // pmf[t] for t <= horizon, plus the exact mass beyond the horizon.
    let mut pmf = vec![0.0; horizon + 1];
    pmf[0] = 1.0;
    let mut tail = 0.0;
    for &pi in p {
        let fail = 1.0 - pi;
        let mut next = vec![0.0; horizon + 1];
        let mut next_tail = tail;
        for (s, &w) in pmf.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let mut geo = pi;
            for slot in next.iter_mut().skip(s + 1) {
                *slot += w * geo;
                geo *= fail;
            }
            // P(Y > horizon - s)
            next_tail += w * fail.powi((horizon - s) as i32);
        }
        pmf = next;
        tail = next_tail;
    }
    let mut survival = vec![0.0; horizon + 1];
    let mut acc = tail;
    for n in (0..=horizon).rev() {
        survival[n] = acc;
        acc += pmf[n];
    }
    Ok(AbsorptionLaw {
        survival,
        mean: p.iter().map(|x| 1.0 / x).sum(),
        variance: p.iter().map(|x| (1.0 - x) / (x * x)).sum(),
    })
}

/// A chain on levels that either holds or moves up by one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BirthChain {
    /// Lowest level present.
    pub start_level: usize,
    /// `birth[k]` is the probability of moving from level `start_level + k`
    /// to the next; the last entry (the absorbing top) is 0.
    pub birth: Vec<f64>,
}

impl BirthChain {
    pub fn top_level(&self) -> usize {
        self.start_level + self.birth.len() - 1
    }

    /// Success probabilities of the geometric holding times below the top.
    pub fn success_probabilities(&self) -> &[f64] {
        &self.birth[..self.birth.len() - 1]
    }
}

/// Lumps the dual by `level` and checks the result is a pure-birth chain.
pub fn pure_birth_projection(d: &DualChain, level: impl Fn(usize) -> usize) -> Result<BirthChain> {
    let m = d.len();
    let levels: Vec<usize> = (0..m).map(&level).collect();
    let lo = *levels.iter().min().ok_or(Error::EmptyPoset)?;
    let hi = *levels.iter().max().ok_or(Error::EmptyPoset)?;
    let classes = hi - lo + 1;

    let aggregated: Vec<Vec<f64>> = (0..m)
        .map(|e| {
            let mut agg = vec![0.0; classes];
            for (j, &v) in d.p_star.row(e).iter().enumerate() {
                agg[levels[j] - lo] += v;
            }
            agg
        })
        .collect();

    let mut representative: Vec<Option<usize>> = vec![None; classes];
    for e in 0..m {
        let c = levels[e] - lo;
        match representative[c] {
            None => representative[c] = Some(e),
            Some(r) => {
                for k in 0..classes {
                    let gap = (aggregated[e][k] - aggregated[r][k]).abs();
                    if gap > tol::STATIONARITY {
                        return Err(Error::NotLumpable {
                            a: d.poset.label(r).to_string(),
                            b: d.poset.label(e).to_string(),
                            class: k + lo,
                            gap,
                        });
                    }
                }
            }
        }
    }

    let mut birth = Vec::with_capacity(classes);
    for c in 0..classes {
        let Some(r) = representative[c] else {
            return Err(Error::NotPureBirth {
                from: c + lo,
                to: c + lo,
            });
        };
        for (k, &v) in aggregated[r].iter().enumerate() {
            if v > tol::STATIONARITY && k != c && k != c + 1 {
                return Err(Error::NotPureBirth {
                    from: c + lo,
                    to: k + lo,
                });
            }
        }
        birth.push(aggregated[r].get(c + 1).copied().unwrap_or(0.0));
    }
    Ok(BirthChain {
        start_level: lo,
        birth,
    })
}

/// Eigenvalues read off the diagonal of an upper-triangular dual.
pub fn spectrum_from_triangular(d: &DualChain) -> Result<SpectrumReport> {
    let poset = &d.poset;
    let m = d.len();
    for i in 0..m {
        for j in 0..m {
            let v = d.p_star[(i, j)];
            if poset.position(i) > poset.position(j) && v.abs() > tol::STATIONARITY {
                return Err(Error::NotTriangular {
                    row: poset.label(i).to_string(),
                    col: poset.label(j).to_string(),
                    value: v,
                });
            }
        }
    }
    Ok(SpectrumReport::from_values(
        (0..m).map(|i| d.p_star[(i, i)]).collect(),
        tol::TRIANGULAR_GROUP,
        SpectrumSource::TriangularDual,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepBound {
    pub steps: usize,
    pub bound: f64,
}

/// `n = ceil(N ln N + c N)` steps bring the separation below `e^{-c}`.
pub fn coupon_collector_bound(n: usize, c: f64) -> Result<StepBound> {
    if n < 2 || !(c > 0.0) {
        return Err(Error::BadParameters(format!(
            "coupon-collector bound needs N >= 2 and c > 0 (got N = {n}, c = {c})"
        )));
    }
    let nf = n as f64;
    Ok(StepBound {
        steps: (nf * nf.ln() + c * nf).ceil() as usize,
        bound: (-c).exp(),
    })
}

/// Chebyshev bound for the k-ary cube:
/// `m = (2k/(k+1)) (n+1) ln n + c (2k/(k+1)) (pi/sqrt 6) n`, bound `1/c^2`.
pub fn chebyshev_bound(n: usize, k: usize, c: f64) -> Result<StepBound> {
    if n < 1 || k < 1 || !(c > 0.0) {
        return Err(Error::BadParameters(format!(
            "Chebyshev bound needs n >= 1, k >= 1 and c > 0 (got n = {n}, k = {k}, c = {c})"
        )));
    }
    let (nf, kf) = (n as f64, k as f64);
    let scale = 2.0 * kf / (kf + 1.0);
    let m = scale * (nf + 1.0) * nf.ln() + c * scale * (std::f64::consts::PI / 6f64.sqrt()) * nf;
    Ok(StepBound {
        steps: m.ceil() as usize,
        bound: 1.0 / (c * c),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;
    use crate::poset::Poset;

    fn two_state_dual() -> DualChain {
        DualChain::new(
            Poset::chain(2).unwrap(),
            Matrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 1.0]]).unwrap(),
            vec![1.0, 0.0],
            1,
        )
        .unwrap()
    }

    #[test]
    fn symmetric_two_state_curves() {
        let c = ChainSpec::new(
            Poset::chain(2).unwrap(),
            Matrix::from_fn(2, 2, |_, _| 0.5),
            vec![1.0, 0.0],
            Some(vec![0.5, 0.5]),
        )
        .unwrap();
        let s = separation_curve(&c, 3).unwrap();
        assert_eq!(s.separation, vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(s.tv[0], 0.5);

        let law = absorption_survival(&two_state_dual(), 3).unwrap();
        assert_eq!(law.survival, vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(law.mean, 1.0);
        assert_eq!(law.variance, 0.0);
    }

    #[test]
    fn stationary_start_has_zero_separation() {
        let c = ChainSpec::new(
            Poset::chain(2).unwrap(),
            Matrix::from_rows(&[vec![0.7, 0.3], vec![0.2, 0.8]]).unwrap(),
            vec![0.4, 0.6],
            Some(vec![0.4, 0.6]),
        )
        .unwrap();
        for s in separation_curve(&c, 10).unwrap().separation {
            assert!(s.abs() < 1e-12);
        }
    }

    #[test]
    fn missing_absorbing_state() {
        let mut d = two_state_dual();
        d.p_star[(1, 0)] = 0.5;
        d.p_star[(1, 1)] = 0.5;
        assert!(matches!(
            absorption_survival(&d, 3),
            Err(Error::NoAbsorbingState { index: 1 })
        ));
    }

    #[test]
    fn already_absorbed_dual() {
        let mut d = two_state_dual();
        d.nu_star = vec![0.0, 1.0];
        let law = absorption_survival(&d, 2).unwrap();
        assert_eq!(law.survival, vec![0.0; 3]);
        assert_eq!(law.mean, 0.0);
    }

    #[test]
    fn geometric_edge_cases() {
        let law = geometric_sum_law(&[1.0], 3).unwrap();
        assert_eq!(law.survival, vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!((law.mean, law.variance), (1.0, 0.0));
        assert!(matches!(
            geometric_sum_law(&[0.0], 3),
            Err(Error::BadProbability(_))
        ));
        assert!(matches!(
            geometric_sum_law(&[1.5], 3),
            Err(Error::BadProbability(_))
        ));
    }

    #[test]
    fn geometric_sum_matches_brute_force() {
        // Brute-force oracle: P(Y1 + Y2 > n) by double summation.
        let (a, b) = (0.3, 0.55);
        let law = geometric_sum_law(&[a, b], 12).unwrap();
        for n in 0..=12usize {
            let mut le = 0.0;
            for y1 in 1..=n {
                for y2 in 1..=n {
                    if y1 + y2 <= n {
                        le += a
                            * (1.0f64 - a).powi(y1 as i32 - 1)
                            * b
                            * (1.0f64 - b).powi(y2 as i32 - 1);
                    }
                }
            }
            assert!((law.survival[n] - (1.0 - le)).abs() < 1e-14, "n = {n}");
        }
    }

    #[test]
    fn bounds_arithmetic() {
        let b = coupon_collector_bound(10, 2.0).unwrap();
        assert_eq!(b.steps, 44);
        assert!((b.bound - 0.1353352832366127).abs() < 1e-15);
        assert!(coupon_collector_bound(10, 1e-12).unwrap().bound > 0.999_999);

        let b = chebyshev_bound(10, 1, 3.0).unwrap();
        assert_eq!(b.steps, 64);
        assert!((b.bound - 1.0 / 9.0).abs() < 1e-15);
        assert!(chebyshev_bound(10, 1, 1e6).unwrap().bound < 1e-11);

        assert!(coupon_collector_bound(1, 1.0).is_err());
        assert!(chebyshev_bound(3, 0, 1.0).is_err());
        assert!(chebyshev_bound(3, 1, -1.0).is_err());
    }

    #[test]
    fn triangularity_is_enforced() {
        let d = DualChain::new(
            Poset::chain(2).unwrap(),
            Matrix::from_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap(),
            vec![1.0, 0.0],
            1,
        )
        .unwrap();
        assert!(matches!(
            spectrum_from_triangular(&d),
            Err(Error::NotTriangular { .. })
        ));
        let s = spectrum_from_triangular(&two_state_dual()).unwrap();
        assert_eq!(s.values(), vec![1.0, 0.0]);
    }

    #[test]
    fn default_horizon_floor() {
        assert_eq!(default_horizon(3.0), 50);
        assert_eq!(default_horizon(20.2), 84);
    }
}
