//! Finite posets, consistent enumerations and the Möbius function of the
//! incidence algebra.
//!
//! States are addressed by their index in `labels`. All matrices in this
//! crate use that same indexing; the consistent enumeration is carried
//! alongside as a permutation (`enumeration()[pos] = state`). Under it the
//! zeta matrix is upper unitriangular.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use crate::error::{Error, Result};

/// Default cap on the number of states of any constructed poset.
pub const DEFAULT_MAX_STATES: usize = 16384;

/// Environment variable overriding [`DEFAULT_MAX_STATES`].
pub const MAX_STATES_ENV: &str = "SSD_MAX_STATES";

/// The configured state cap: `SSD_MAX_STATES` when set and parseable,
/// otherwise [`DEFAULT_MAX_STATES`].
pub fn max_states() -> usize {
    std::env::var(MAX_STATES_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&v: &usize| v > 0)
        .unwrap_or(DEFAULT_MAX_STATES)
}

/// Square bit matrix, one `u64` word run per row.
#[derive(Debug, Clone, PartialEq, Eq)]
struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        BitMatrix {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    fn or_row_into(&mut self, dst: usize, src: usize) {
        let w = self.words;
        for k in 0..w {
            let v = self.bits[src * w + k];
            self.bits[dst * w + k] |= v;
        }
    }

    fn row_ones(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let row = &self.bits[i * self.words..(i + 1) * self.words];
        row.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let b = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + b)
            })
        })
    }

    fn count_ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::new(self.n);
        for i in 0..self.n {
            for j in self.row_ones(i) {
                t.set(j, i);
            }
        }
        t
    }
}

/// A finite partially ordered set with a consistent enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    covers: Vec<(usize, usize)>,
    /// `up[i][j]` iff `i ⪯ j`.
    up: BitMatrix,
    /// `down[i][j]` iff `j ⪯ i`.
    down: BitMatrix,
    enumeration: Vec<usize>,
    position: Vec<usize>,
}

impl Poset {
    /// Builds a poset from generating relations `(lower, upper)`.
    ///
    /// Duplicate pairs are dropped. The enumeration is Kahn's topological
    /// sort with ties broken by the smallest state index, so the identity
    /// is returned whenever it is consistent with the order.
    pub fn new(labels: Vec<String>, covers: &[(usize, usize)]) -> Result<Self> {
        Self::with_cap(labels, covers, max_states())
    }

    pub fn with_cap(labels: Vec<String>, covers: &[(usize, usize)], cap: usize) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::EmptyPoset);
        }
        if n > cap {
            return Err(Error::SizeOverflow { size: n, max: cap });
        }
        let mut unique = BTreeSet::new();
        for &(lo, hi) in covers {
            if lo >= n || hi >= n || lo == hi {
                return Err(Error::InvalidCover {
                    lower: lo,
                    upper: hi,
                    size: n,
                });
            }
            unique.insert((lo, hi));
        }
        let covers: Vec<(usize, usize)> = unique.into_iter().collect();

        let mut children = vec![Vec::new(); n];
        let mut indegree = vec![0usize; n];
        for &(lo, hi) in &covers {
            children[lo].push(hi);
            indegree[hi] += 1;
        }

        let mut heap: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&v| indegree[v] == 0).map(Reverse).collect();
        let mut enumeration = Vec::with_capacity(n);
        let mut remaining = indegree.clone();
        while let Some(Reverse(v)) = heap.pop() {
            enumeration.push(v);
            for &w in &children[v] {
                remaining[w] -= 1;
                if remaining[w] == 0 {
                    heap.push(Reverse(w));
                }
            }
        }
        if enumeration.len() < n {
            let stuck: Vec<bool> = remaining.iter().map(|&d| d > 0).collect();
            let cycle = find_cycle(&children, &stuck);
            return Err(Error::CycleDetected {
                cycle: cycle.iter().map(|&v| labels[v].clone()).collect(),
            });
        }

        let mut up = BitMatrix::new(n);
        for &v in enumeration.iter().rev() {
            up.set(v, v);
            for &w in &children[v] {
                up.or_row_into(v, w);
            }
        }
        let down = up.transpose();
        let mut position = vec![0; n];
        for (pos, &v) in enumeration.iter().enumerate() {
            position[v] = pos;
        }
        Ok(Poset {
            labels,
            covers,
            up,
            down,
            enumeration,
            position,
        })
    }

    /// A linear order `0 < 1 < ... < len-1` labelled by the integers.
    pub fn chain(len: usize) -> Result<Self> {
        let labels = (0..len).map(|i| i.to_string()).collect();
        let covers: Vec<_> = (1..len).map(|i| (i - 1, i)).collect();
        Poset::new(labels, &covers)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// Replaces the labels, keeping the order.
    pub fn relabel(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: labels.len(),
            });
        }
        self.labels = labels;
        Ok(self)
    }

    /// The deduplicated generating relations, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// `i ⪯ j`.
    pub fn le(&self, i: usize, j: usize) -> bool {
        self.up.get(i, j)
    }

    /// `i ≺ j`.
    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.le(i, j)
    }

    /// Number of related pairs `i ⪯ j`, reflexive pairs included.
    pub fn relation_count(&self) -> usize {
        self.up.count_ones()
    }

    /// `enumeration()[pos]` is the state at position `pos`.
    pub fn enumeration(&self) -> &[usize] {
        &self.enumeration
    }

    pub fn position(&self, state: usize) -> usize {
        self.position[state]
    }

    /// `{j : i ⪯ j}` in ascending enumeration position.
    pub fn up_set(&self, i: usize) -> Vec<usize> {
        self.sorted_by_position(self.up.row_ones(i).collect())
    }

    /// `{j : j ⪯ i}` in ascending enumeration position.
    pub fn down_set(&self, i: usize) -> Vec<usize> {
        self.sorted_by_position(self.down.row_ones(i).collect())
    }

    fn sorted_by_position(&self, mut states: Vec<usize>) -> Vec<usize> {
        states.sort_by_key(|&s| self.position[s]);
        states
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.up.row_ones(i).all(|j| j == i))
            .collect()
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.down.row_ones(i).all(|j| j == i))
            .collect()
    }

    /// The greatest element, if the poset has exactly one maximal state.
    pub fn unique_max(&self) -> Option<usize> {
        match self.maximal_elements().as_slice() {
            [m] => Some(*m),
            _ => None,
        }
    }

    /// The least element, if the poset has exactly one minimal state.
    pub fn unique_min(&self) -> Option<usize> {
        match self.minimal_elements().as_slice() {
            [m] => Some(*m),
            _ => None,
        }
    }

    pub fn has_unique_max(&self) -> bool {
        self.unique_max().is_some()
    }

    pub fn has_unique_min(&self) -> bool {
        self.unique_min().is_some()
    }

    /// Whether `order` lists every state once and `i ≺ j` implies `i` comes first.
    pub fn is_consistent_enumeration(&self, order: &[usize]) -> bool {
        if order.len() != self.len() {
            return false;
        }
        let mut pos = vec![usize::MAX; self.len()];
        for (p, &s) in order.iter().enumerate() {
            if s >= self.len() || pos[s] != usize::MAX {
                return false;
            }
            pos[s] = p;
        }
        (0..self.len()).all(|i| self.up.row_ones(i).all(|j| i == j || pos[i] < pos[j]))
    }

    /// The subposet induced on `states`, indexed in the given order.
    pub fn induced(&self, states: &[usize]) -> Result<Poset> {
        let mut index = vec![usize::MAX; self.len()];
        for (k, &s) in states.iter().enumerate() {
            index[s] = k;
        }
        let mut relations = Vec::new();
        for (a, &s) in states.iter().enumerate() {
            for t in self.up.row_ones(s) {
                if t != s && index[t] != usize::MAX {
                    relations.push((a, index[t]));
                }
            }
        }
        let labels = states.iter().map(|&s| self.labels[s].clone()).collect();
        Poset::new(labels, &relations)
    }
}

/// Finds a directed cycle among the `stuck` vertices left over by Kahn's
/// algorithm; every such vertex has a stuck predecessor.
fn find_cycle(children: &[Vec<usize>], stuck: &[bool]) -> Vec<usize> {
    let n = children.len();
    let mut parents = vec![Vec::new(); n];
    for (v, ch) in children.iter().enumerate() {
        for &w in ch {
            if stuck[v] && stuck[w] {
                parents[w].push(v);
            }
        }
    }
    let Some(start) = (0..n).find(|&v| stuck[v]) else {
        return Vec::new();
    };
    // Walk backwards until a vertex repeats.
    let mut seen = vec![usize::MAX; n];
    let mut path = Vec::new();
    let mut v = start;
    while seen[v] == usize::MAX {
        seen[v] = path.len();
        path.push(v);
        v = parents[v][0];
    }
    let mut cycle: Vec<usize> = path[seen[v]..].to_vec();
    cycle.reverse();
    cycle.push(cycle[0]);
    cycle
}

/// Product order: `(a, b) ⪯ (a', b')` iff `a ⪯ a'` and `b ⪯ b'`.
///
/// The pair `(a, b)` gets index `a + |p| * b`, so the first factor is the
/// least significant digit.
pub fn product_poset(p: &Poset, q: &Poset) -> Result<Poset> {
    product_poset_with_cap(p, q, max_states())
}

pub fn product_poset_with_cap(p: &Poset, q: &Poset, cap: usize) -> Result<Poset> {
    let size = p.len().checked_mul(q.len()).ok_or(Error::SizeOverflow {
        size: usize::MAX,
        max: cap,
    })?;
    if size > cap {
        return Err(Error::SizeOverflow { size, max: cap });
    }
    let np = p.len();
    let idx = |a: usize, b: usize| a + np * b;

    let mut labels = Vec::with_capacity(size);
    for b in 0..q.len() {
        for a in 0..np {
            labels.push(format!("({},{})", p.labels[a], q.labels[b]));
        }
    }
    let mut covers = Vec::new();
    for &(lo, hi) in &p.covers {
        for b in 0..q.len() {
            covers.push((idx(lo, b), idx(hi, b)));
        }
    }
    for &(lo, hi) in &q.covers {
        for a in 0..np {
            covers.push((idx(a, lo), idx(a, hi)));
        }
    }
    covers.sort_unstable();

    let mut up = BitMatrix::new(size);
    for b in 0..q.len() {
        let ub: Vec<usize> = q.up.row_ones(b).collect();
        for a in 0..np {
            let row = idx(a, b);
            for a2 in p.up.row_ones(a) {
                for &b2 in &ub {
                    up.set(row, idx(a2, b2));
                }
            }
        }
    }
    let down = up.transpose();

    // Kahn on the product covers; reuse the generic builder's tie-break.
    let mut indegree = vec![0usize; size];
    let mut children = vec![Vec::new(); size];
    for &(lo, hi) in &covers {
        children[lo].push(hi);
        indegree[hi] += 1;
    }
    let mut heap: BinaryHeap<Reverse<usize>> = (0..size)
        .filter(|&v| indegree[v] == 0)
        .map(Reverse)
        .collect();
    let mut enumeration = Vec::with_capacity(size);
    while let Some(Reverse(v)) = heap.pop() {
        enumeration.push(v);
        for &w in &children[v] {
            indegree[w] -= 1;
            if indegree[w] == 0 {
                heap.push(Reverse(w));
            }
        }
    }
    let mut position = vec![0; size];
    for (pos, &v) in enumeration.iter().enumerate() {
        position[v] = pos;
    }
    Ok(Poset {
        labels,
        covers,
        up,
        down,
        enumeration,
        position,
    })
}

/// Product of chains of the given lengths, first factor least significant.
pub fn grid_poset(radices: &[usize]) -> Result<Poset> {
    let cap = max_states();
    let mut acc: Option<Poset> = None;
    for &r in radices {
        let c = Poset::chain(r)?;
        acc = Some(match acc {
            None => c,
            Some(p) => product_poset_with_cap(&p, &c, cap)?,
        });
    }
    acc.ok_or(Error::EmptyPoset)
}

/// Integer zeta and Möbius functions of a poset.
///
/// Both are stored as sparse rows indexed by state; `zeta_dense` and
/// `mobius_dense` materialize the `M x M` matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MobiusPair {
    size: usize,
    /// Row `i`: `(j, mu(i, j))` for `mu != 0`, ascending enumeration position.
    rows: Vec<Vec<(usize, i64)>>,
    /// Column `j`: `(i, mu(i, j))` for `mu != 0`, ascending enumeration position.
    cols: Vec<Vec<(usize, i64)>>,
    zeta_rows: Vec<Vec<usize>>,
}

impl MobiusPair {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn mu(&self, i: usize, j: usize) -> i64 {
        self.rows[i]
            .iter()
            .find(|&&(k, _)| k == j)
            .map_or(0, |&(_, v)| v)
    }

    /// Nonzero `mu(i, ·)` in ascending enumeration position.
    pub fn row(&self, i: usize) -> &[(usize, i64)] {
        &self.rows[i]
    }

    /// Nonzero `mu(·, j)` in ascending enumeration position.
    pub fn col(&self, j: usize) -> &[(usize, i64)] {
        &self.cols[j]
    }

    pub fn nonzeros(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn zeta_dense(&self) -> Vec<Vec<i64>> {
        let mut z = vec![vec![0; self.size]; self.size];
        for (i, row) in self.zeta_rows.iter().enumerate() {
            for &j in row {
                z[i][j] = 1;
            }
        }
        z
    }

    pub fn mobius_dense(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0; self.size]; self.size];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                m[i][j] = v;
            }
        }
        m
    }

    /// Checks `zeta * mobius = I` in exact integer arithmetic.
    pub fn is_inverse_pair(&self) -> bool {
        let mut acc = vec![0i64; self.size];
        for (i, ups) in self.zeta_rows.iter().enumerate() {
            let mut touched = Vec::new();
            for &z in ups {
                for &(j, v) in &self.rows[z] {
                    if acc[j] == 0 {
                        touched.push(j);
                    }
                    acc[j] += v;
                }
            }
            let ok = (0..self.size).all(|j| acc[j] == i64::from(i == j));
            for &j in &touched {
                acc[j] = 0;
            }
            if !ok {
                return false;
            }
        }
        true
    }
}

/// Möbius function by the recursion `mu(x,x) = 1`,
/// `mu(x,y) = -sum_{x ⪯ z ≺ y} mu(x,z)`.
pub fn mobius_pair(p: &Poset) -> MobiusPair {
    let n = p.len();
    let mut rows = Vec::with_capacity(n);
    let mut zeta_rows = Vec::with_capacity(n);
    let mut value = vec![0i64; n];
    for x in 0..n {
        let ups = p.up_set(x);
        let mut row = Vec::new();
        for (k, &y) in ups.iter().enumerate() {
            let v = if y == x {
                1
            } else {
                // ups is sorted by position, so every z ≺ y precedes y.
                -ups[..k]
                    .iter()
                    .filter(|&&z| p.le(z, y))
                    .map(|&z| value[z])
                    .sum::<i64>()
            };
            value[y] = v;
            if v != 0 {
                row.push((y, v));
            }
        }
        for &y in &ups {
            value[y] = 0;
        }
        rows.push(row);
        zeta_rows.push(ups);
    }
    let mut cols: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for &x in p.enumeration() {
        for &(y, v) in &rows[x] {
            cols[y].push((x, v));
        }
    }
    let pair = MobiusPair {
        size: n,
        rows,
        cols,
        zeta_rows,
    };
    debug_assert!(pair.is_inverse_pair());
    pair
}

/// Recovers `f` from its up-set sums `F(e) = sum_{e' ⪰ e} f(e')` through
/// the Möbius function; the result should equal `f` up to round-off.
pub fn mobius_inverse_check(f: &[f64], p: &Poset) -> Result<Vec<f64>> {
    if f.len() != p.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            found: f.len(),
        });
    }
    let mobius = mobius_pair(p);
    let upper: Vec<f64> = (0..p.len())
        .map(|e| p.up_set(e).iter().map(|&u| f[u]).sum())
        .collect();
    Ok((0..p.len())
        .map(|i| {
            mobius
                .row(i)
                .iter()
                .map(|&(e, m)| m as f64 * upper[e])
                .sum()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("s{i}")).collect()
    }

    #[test]
    fn two_chain() {
        let p = Poset::new(vec!["a".into(), "b".into()], &[(0, 1)]).unwrap();
        assert_eq!(p.enumeration(), &[0, 1]);
        assert!(p.le(0, 1) && !p.le(1, 0));
        let m = mobius_pair(&p);
        assert_eq!(m.mobius_dense(), vec![vec![1, -1], vec![0, 1]]);
    }

    #[test]
    fn antichain_has_identity_reachability() {
        let p = Poset::new(labels(2), &[]).unwrap();
        assert_eq!(p.relation_count(), 2);
        assert!(!p.le(0, 1) && !p.le(1, 0));
        assert!(!p.has_unique_max());
        assert!(!p.has_unique_min());
    }

    #[test]
    fn boolean_square_has_nine_relations() {
        // 0 = bottom, 1, 2 atoms, 3 = top
        let p = Poset::new(labels(4), &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let brute = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .filter(|&(i, j)| p.le(i, j))
            .count();
        assert_eq!(brute, 9);
        assert_eq!(p.relation_count(), 9);
        assert_eq!(p.unique_max(), Some(3));
        assert_eq!(p.unique_min(), Some(0));
    }

    #[test]
    fn enumeration_breaks_ties_by_index() {
        // 2 < 0 forces 2 first; 1 is free and smallest among the rest.
        let p = Poset::new(labels(3), &[(2, 0)]).unwrap();
        assert_eq!(p.enumeration(), &[1, 2, 0]);
        assert!(p.is_consistent_enumeration(p.enumeration()));
        assert!(!p.is_consistent_enumeration(&[0, 1, 2]));
    }

    #[test]
    fn cycle_is_named() {
        let err = Poset::new(labels(3), &[(0, 1), (1, 2), (2, 0)]).unwrap_err();
        match err {
            Error::CycleDetected { cycle } => {
                assert_eq!(cycle.len(), 4);
                assert_eq!(cycle.first(), cycle.last());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_covers_are_merged_and_bad_ones_rejected() {
        let p = Poset::new(labels(2), &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(p.covers(), &[(0, 1)]);
        assert!(matches!(
            Poset::new(labels(2), &[(0, 0)]),
            Err(Error::InvalidCover { .. })
        ));
        assert!(matches!(
            Poset::new(labels(2), &[(0, 5)]),
            Err(Error::InvalidCover { .. })
        ));
    }

    #[test]
    fn product_of_two_chains_is_boolean_square() {
        let c = Poset::chain(2).unwrap();
        let sq = product_poset(&c, &c).unwrap();
        assert_eq!(sq.len(), 4);
        assert_eq!(sq.relation_count(), 9);
        assert_eq!(sq.unique_min(), Some(0));
        assert_eq!(sq.unique_max(), Some(3));
        assert_eq!(sq.label(1), "(1,0)");
    }

    #[test]
    fn product_respects_cap() {
        let c = Poset::chain(10).unwrap();
        assert!(matches!(
            product_poset_with_cap(&c, &c, 99),
            Err(Error::SizeOverflow { size: 100, max: 99 })
        ));
    }

    #[test]
    fn kary_grid_has_extreme_states() {
        let g = grid_poset(&[3, 3, 3]).unwrap();
        assert_eq!(g.len(), 27);
        assert_eq!(g.unique_min(), Some(0));
        assert_eq!(g.unique_max(), Some(26));
        let identity: Vec<usize> = (0..27).collect();
        assert_eq!(g.enumeration(), identity.as_slice());
    }

    #[test]
    fn boolean_lattice_mobius_is_signed_rank_difference() {
        let n = 4;
        let g = grid_poset(&vec![2; n]).unwrap();
        let m = mobius_pair(&g);
        for a in 0..1usize << n {
            for b in 0..1usize << n {
                let expected = if a & b == a {
                    if (b.count_ones() - a.count_ones()) % 2 == 0 {
                        1
                    } else {
                        -1
                    }
                } else {
                    0
                };
                assert_eq!(m.mu(a, b), expected, "mu({a},{b})");
            }
        }
    }

    #[test]
    fn square_lattice_mobius_lives_on_unit_boxes() {
        let n1 = 4;
        let g = grid_poset(&[n1, n1]).unwrap();
        let m = mobius_pair(&g);
        let idx = |x: usize, y: usize| x + n1 * y;
        for x in 0..n1 {
            for y in 0..n1 {
                for x2 in 0..n1 {
                    for y2 in 0..n1 {
                        let expected = match (x2 as i64 - x as i64, y2 as i64 - y as i64) {
                            (0, 0) | (1, 1) => 1,
                            (1, 0) | (0, 1) => -1,
                            _ => 0,
                        };
                        assert_eq!(m.mu(idx(x, y), idx(x2, y2)), expected);
                    }
                }
            }
        }
    }

    #[test]
    fn mobius_sums_vanish_on_intervals() {
        let g = grid_poset(&[3, 2, 2]).unwrap();
        let m = mobius_pair(&g);
        assert!(m.is_inverse_pair());
        for x in 0..g.len() {
            for y in g.up_set(x) {
                let s: i64 = g
                    .up_set(x)
                    .into_iter()
                    .filter(|&z| g.le(z, y))
                    .map(|z| m.mu(z, y))
                    .sum();
                assert_eq!(s, i64::from(x == y));
            }
        }
    }

    #[test]
    fn inverse_check_on_two_chain_and_cube() {
        let c = Poset::chain(2).unwrap();
        let g = mobius_inverse_check(&[0.3, -1.25], &c).unwrap();
        assert!(crate::matrix::max_abs_diff(&g, &[0.3, -1.25]) < 1e-15);

        // Indicator of the top of {0,1}^3: every up-set sum is 1.
        let cube = grid_poset(&[2, 2, 2]).unwrap();
        let mut f = vec![0.0; 8];
        f[7] = 1.0;
        let g = mobius_inverse_check(&f, &cube).unwrap();
        assert_eq!(g, f);
    }

    #[test]
    fn induced_subposet_keeps_order() {
        let g = grid_poset(&[3, 3]).unwrap();
        // corners {0,2}^2: indices 0, 2, 6, 8
        let sub = g.induced(&[0, 2, 6, 8]).unwrap();
        assert_eq!(sub.relation_count(), 9);
        assert_eq!(sub.unique_max(), Some(3));
    }
}
