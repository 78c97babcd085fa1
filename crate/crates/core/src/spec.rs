//! Degree sequences, index maps, lower sets and quasi-uniform grids.
//!
//! A blended space is described by two degree sequences `m = [m_0, ..., m_r]`
//! and `n = [n_0, ..., n_r]`; it is the sum of the tensor spaces
//! `Pi_{m_k} x Pi_{n_{r-k}}`. Building the quasi-interpolant additionally needs
//! each `m_k` to divide `m_{k+1}` (likewise for `n`), which makes the uniform
//! index sequences of every level nest inside the next.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::bernstein::{elevation_matrix, BernsteinContext};
use crate::error::{BlendError, Result};
use crate::numeric::{inf_norm, inverse};

/// Which coordinate a univariate object acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    /// `x`, degrees from `m`.
    First,
    /// `y`, degrees from `n`.
    Second,
}

/// Validated pair of degree sequences with the divisibility chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct BlendSpec {
    m: Vec<usize>,
    n: Vec<usize>,
}

#[derive(Deserialize)]
struct RawSpec {
    m: Vec<usize>,
    n: Vec<usize>,
}

impl TryFrom<RawSpec> for BlendSpec {
    type Error = BlendError;

    fn try_from(raw: RawSpec) -> Result<Self> {
        BlendSpec::new(raw.m, raw.n)
    }
}

impl BlendSpec {
    pub fn new(m: Vec<usize>, n: Vec<usize>) -> Result<Self> {
        check_lemma_form(&m, &n)?;
        check_divisible("m", &m)?;
        check_divisible("n", &n)?;
        Ok(Self { m, n })
    }

    /// Like [`BlendSpec::new`] but repairs a broken divisibility chain by
    /// degree elevation first. The repaired space contains the requested one.
    pub fn elevated(m: &[usize], n: &[usize]) -> Result<Self> {
        Self::new(elevate_to_divisible(m)?, elevate_to_divisible(n)?)
    }

    pub fn m(&self) -> &[usize] {
        &self.m
    }

    pub fn n(&self) -> &[usize] {
        &self.n
    }

    pub fn degrees(&self, axis: Axis) -> &[usize] {
        match axis {
            Axis::First => &self.m,
            Axis::Second => &self.n,
        }
    }

    /// The index `r` of the last level.
    pub fn r(&self) -> usize {
        self.m.len() - 1
    }

    pub fn top_m(&self) -> usize {
        self.m[self.r()]
    }

    pub fn top_n(&self) -> usize {
        self.n[self.r()]
    }

    pub fn dimension(&self) -> usize {
        dimension(&self.m, &self.n).expect("validated spec")
    }

    pub fn predicted_order(&self) -> usize {
        predicted_order(&self.m, &self.n).expect("validated spec")
    }
}

impl std::fmt::Display for BlendSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "m={} n={}", fmt_seq(&self.m), fmt_seq(&self.n))
    }
}

pub fn fmt_seq(s: &[usize]) -> String {
    let parts: Vec<String> = s.iter().map(|v| v.to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn is_strictly_increasing(s: &[usize]) -> bool {
    s.windows(2).all(|w| w[0] < w[1])
}

fn check_lemma_form(m: &[usize], n: &[usize]) -> Result<()> {
    if m.is_empty() || n.is_empty() {
        return Err(BlendError::EmptyInput);
    }
    if m.len() != n.len() {
        return Err(BlendError::InvalidSpec(format!(
            "m has {} entries but n has {}",
            m.len(),
            n.len()
        )));
    }
    for (name, s) in [("m", m), ("n", n)] {
        if !is_strictly_increasing(s) {
            return Err(BlendError::InvalidSpec(format!(
                "{name}={} is not strictly increasing",
                fmt_seq(s)
            )));
        }
    }
    Ok(())
}

fn check_divisible(name: &str, s: &[usize]) -> Result<()> {
    for w in s.windows(2) {
        // 0 divides nothing, but a degree-0 first level nests trivially
        if w[0] != 0 && w[1] % w[0] != 0 {
            return Err(BlendError::InvalidSpec(format!(
                "{name}={}: {} does not divide {}",
                fmt_seq(s),
                w[0],
                w[1]
            )));
        }
    }
    Ok(())
}

/// Rewrites arbitrary sequences into strictly increasing ones spanning the
/// same space.
///
/// Works on the pairs `(m_k, n_{r-k})`: for equal `m` only the largest `n` is
/// kept, pairs are sorted by `m`, and a pair is dropped when a pair with larger
/// `m` has an `n` at least as large (its box is then contained in that one).
pub fn normalize_sequences(m: &[usize], n: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    if m.is_empty() || n.is_empty() {
        return Err(BlendError::EmptyInput);
    }
    if m.len() != n.len() {
        return Err(BlendError::InvalidSpec(format!(
            "m has {} entries but n has {}",
            m.len(),
            n.len()
        )));
    }
    let r = m.len() - 1;
    let mut pairs: Vec<(usize, usize)> = (0..=r).map(|k| (m[k], n[r - k])).collect();
    pairs.sort_unstable();
    // after sorting, the last entry of each run of equal m has the largest n
    let mut kept: Vec<(usize, usize)> = Vec::with_capacity(pairs.len());
    for &(mk, nk) in pairs.iter().rev() {
        match kept.last() {
            Some(&(_, n_above)) if nk <= n_above => {}
            _ => kept.push((mk, nk)),
        }
    }
    // `kept` is ordered by decreasing m with strictly increasing n
    let m_hat: Vec<usize> = kept.iter().rev().map(|p| p.0).collect();
    let n_hat: Vec<usize> = kept.iter().map(|p| p.1).collect();
    Ok((m_hat, n_hat))
}

/// Smallest degree elevation of a strictly increasing sequence that satisfies
/// the divisibility chain: each entry becomes the least multiple of its
/// (already repaired) predecessor that is at least the requested degree and
/// still strictly larger than the predecessor.
pub fn elevate_to_divisible(m: &[usize]) -> Result<Vec<usize>> {
    if m.is_empty() {
        return Err(BlendError::EmptyInput);
    }
    if !is_strictly_increasing(m) {
        return Err(BlendError::NotIncreasing(m.to_vec()));
    }
    let mut out = Vec::with_capacity(m.len());
    out.push(m[0]);
    for &want in &m[1..] {
        let base = *out.last().unwrap();
        let target = want.max(base + 1);
        out.push(if base == 0 {
            target
        } else {
            target.div_ceil(base) * base
        });
    }
    Ok(out)
}

/// Dimension of the blended space, `sum_k (m_k - m_{k-1})(n_{r-k} + 1)` with
/// `m_{-1} = -1`.
pub fn dimension(m: &[usize], n: &[usize]) -> Result<usize> {
    check_lemma_form(m, n)?;
    let r = m.len() - 1;
    let mut prev: i64 = -1;
    let mut total: i64 = 0;
    for k in 0..=r {
        total += (m[k] as i64 - prev) * (n[r - k] as i64 + 1);
        prev = m[k] as i64;
    }
    Ok(total as usize)
}

/// Predicted approximation order `p = min_k (m_{k-1} + n_{r-k} + 2)` over
/// `k = 0..=r+1`, with `m_{-1} = n_{-1} = -1`.
pub fn predicted_order(m: &[usize], n: &[usize]) -> Result<usize> {
    check_lemma_form(m, n)?;
    let r = m.len() as i64 - 1;
    let at = |s: &[usize], k: i64| if k < 0 { -1 } else { s[k as usize] as i64 };
    let p = (0..=r + 1)
        .map(|k| at(m, k - 1) + at(n, r - k) + 2)
        .min()
        .unwrap();
    Ok(p as usize)
}

/// Uniform index sequences of every level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSequences {
    /// `alpha[k][i] = i * m_r / m_k`
    pub alpha: Vec<Vec<usize>>,
    /// `beta[k][j] = j * n_r / n_k`
    pub beta: Vec<Vec<usize>>,
}

fn uniform_indices(degrees: &[usize]) -> Vec<Vec<usize>> {
    let top = *degrees.last().unwrap();
    degrees
        .iter()
        .map(|&d| {
            if d == 0 {
                vec![0]
            } else {
                (0..=d).map(|i| i * top / d).collect()
            }
        })
        .collect()
}

pub fn index_sequences(spec: &BlendSpec) -> IndexSequences {
    IndexSequences {
        alpha: uniform_indices(&spec.m),
        beta: uniform_indices(&spec.n),
    }
}

/// Inverse of one level's index sequence as a dense lookup table over
/// `0..=top`; `None` off the range.
fn inverse_table(seq: &[usize], top: usize) -> Vec<Option<usize>> {
    let mut table = vec![None; top + 1];
    for (pos, &v) in seq.iter().enumerate() {
        table[v] = Some(pos);
    }
    table
}

/// The quasi-uniform set `G` together with the per-level inverse index maps.
#[derive(Debug, Clone)]
pub struct QuasiUniformGrid {
    top_m: usize,
    top_n: usize,
    points: Vec<(usize, usize)>,
    slot: Vec<Option<usize>>,
    sequences: IndexSequences,
    inverse_alpha: Vec<Vec<Option<usize>>>,
    inverse_beta: Vec<Vec<Option<usize>>>,
}

impl QuasiUniformGrid {
    pub fn new(spec: &BlendSpec) -> Self {
        let r = spec.r();
        let (top_m, top_n) = (spec.top_m(), spec.top_n());
        let sequences = index_sequences(spec);
        let mut set = BTreeSet::new();
        for k in 0..=r {
            for &i in &sequences.alpha[k] {
                for &j in &sequences.beta[r - k] {
                    set.insert((i, j));
                }
            }
        }
        let points: Vec<(usize, usize)> = set.into_iter().collect();
        let mut slot = vec![None; (top_m + 1) * (top_n + 1)];
        for (idx, &(i, j)) in points.iter().enumerate() {
            slot[i * (top_n + 1) + j] = Some(idx);
        }
        let inverse_alpha = sequences.alpha.iter().map(|s| inverse_table(s, top_m)).collect();
        let inverse_beta = sequences.beta.iter().map(|s| inverse_table(s, top_n)).collect();
        Self {
            top_m,
            top_n,
            points,
            slot,
            sequences,
            inverse_alpha,
            inverse_beta,
        }
    }

    /// Grid points in lexicographic order.
    pub fn points(&self) -> &[(usize, usize)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn sequences(&self) -> &IndexSequences {
        &self.sequences
    }

    /// Position of `(i, j)` in [`points`](Self::points).
    pub fn position(&self, i: usize, j: usize) -> Option<usize> {
        if i > self.top_m || j > self.top_n {
            return None;
        }
        self.slot[i * (self.top_n + 1) + j]
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.position(i, j).is_some()
    }

    /// `alpha-hat^k(i)`.
    pub fn inverse_alpha(&self, k: usize, i: usize) -> Option<usize> {
        self.inverse_alpha[k].get(i).copied().flatten()
    }

    /// `beta-hat^k(j)`.
    pub fn inverse_beta(&self, k: usize, j: usize) -> Option<usize> {
        self.inverse_beta[k].get(j).copied().flatten()
    }

    pub fn inverse_alpha_table(&self, k: usize) -> &[Option<usize>] {
        &self.inverse_alpha[k]
    }

    pub fn inverse_beta_table(&self, k: usize) -> &[Option<usize>] {
        &self.inverse_beta[k]
    }

    /// First level whose alpha sequence contains `i`.
    pub fn alpha_level(&self, i: usize) -> Option<usize> {
        (0..self.inverse_alpha.len()).find(|&k| self.inverse_alpha(k, i).is_some())
    }

    pub fn beta_level(&self, j: usize) -> Option<usize> {
        (0..self.inverse_beta.len()).find(|&k| self.inverse_beta(k, j).is_some())
    }
}

pub fn quasi_uniform_grid(spec: &BlendSpec) -> QuasiUniformGrid {
    QuasiUniformGrid::new(spec)
}

/// Downward-closed set of monomial exponents, the union of the boxes
/// `[0..m_k] x [0..n_{r-k}]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerSet {
    points: BTreeSet<(usize, usize)>,
}

impl LowerSet {
    /// Union of boxes `[0..a] x [0..b]` for the given corners.
    pub fn from_corners(corners: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut points = BTreeSet::new();
        for (a, b) in corners {
            for i in 0..=a {
                for j in 0..=b {
                    points.insert((i, j));
                }
            }
        }
        Self { points }
    }

    pub fn points(&self) -> &BTreeSet<(usize, usize)> {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.points.contains(&(i, j))
    }
}

pub fn lower_set(m: &[usize], n: &[usize]) -> Result<LowerSet> {
    check_lemma_form(m, n)?;
    let r = m.len() - 1;
    Ok(LowerSet::from_corners((0..=r).map(|k| (m[k], n[r - k]))))
}

/// `[s^0, s^1 - s^0, ..., s^r - s^{r-1}]` with set differences in order.
fn level_ordering(levels: &[Vec<usize>]) -> Vec<usize> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for level in levels {
        for &v in level {
            if seen.insert(v) {
                out.push(v);
            }
        }
    }
    out
}

/// Checks that the level orderings of the index sequences map the lower set
/// bijectively onto the quasi-uniform grid.
pub fn permutation_check(spec: &BlendSpec) -> bool {
    let seq = index_sequences(spec);
    let alpha = level_ordering(&seq.alpha);
    let beta = level_ordering(&seq.beta);
    let lower = lower_set(&spec.m, &spec.n).expect("validated spec");
    let grid = QuasiUniformGrid::new(spec);
    if lower.len() != grid.len() {
        return false;
    }
    let mut image = BTreeSet::new();
    for &(i, j) in lower.points() {
        match (alpha.get(i), beta.get(j)) {
            (Some(&a), Some(&b)) => {
                image.insert((a, b));
            }
            _ => return false,
        }
    }
    image.len() == grid.len() && image.iter().all(|&(a, b)| grid.contains(a, b))
}

/// Computable part of the projector bound on one axis:
/// `(d_k + 1) * ||E_{d_k}^{d_r}(alpha^k, :)^{-1}||_inf`.
pub fn stability_factor(spec: &BlendSpec, axis: Axis, k: usize) -> Result<f64> {
    let degrees = spec.degrees(axis);
    if k >= degrees.len() {
        return Err(BlendError::InvalidArgument(format!(
            "level {k} out of range 0..={}",
            degrees.len() - 1
        )));
    }
    let low = BernsteinContext::new(degrees[k], 0.0, 1.0)?;
    let high = BernsteinContext::new(*degrees.last().unwrap(), 0.0, 1.0)?;
    let e = elevation_matrix(&low, &high)?;
    let seq = &uniform_indices(degrees)[k];
    let a = inverse(&e.select_rows(seq))?;
    Ok((degrees[k] + 1) as f64 * inf_norm(&a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec(m: &[usize], n: &[usize]) -> BlendSpec {
        BlendSpec::new(m.to_vec(), n.to_vec()).unwrap()
    }

    #[test]
    fn table_dimensions() {
        assert_eq!(dimension(&[2], &[2]).unwrap(), 9);
        assert_eq!(dimension(&[1, 2], &[1, 2]).unwrap(), 8);
        assert_eq!(dimension(&[1, 3, 6], &[1, 3, 4]).unwrap(), 24);
        assert_eq!(dimension(&[3, 6, 12, 24], &[2, 4, 8, 16]).unwrap(), 161);
        // Pi_12 x Pi_3 + Pi_5 x Pi_7: 52 + 48 - 24
        assert_eq!(dimension(&[5, 12], &[3, 7]).unwrap(), 76);
    }

    #[test]
    fn dimension_rejects_bad_input() {
        assert!(matches!(dimension(&[2, 1], &[1, 2]), Err(BlendError::InvalidSpec(_))));
        assert!(matches!(dimension(&[1], &[1, 2]), Err(BlendError::InvalidSpec(_))));
        assert!(matches!(dimension(&[], &[]), Err(BlendError::EmptyInput)));
    }

    #[test]
    fn spec_validation() {
        assert!(BlendSpec::new(vec![2, 3], vec![1, 2]).is_err());
        assert!(BlendSpec::new(vec![2, 2], vec![1, 2]).is_err());
        assert!(BlendSpec::new(vec![0, 3], vec![1, 2]).is_ok());
        assert!(BlendSpec::new(vec![1, 3], vec![0, 5]).is_ok());
        assert!(BlendSpec::new(vec![1], vec![1, 2]).is_err());
    }

    #[test]
    fn spec_json_round_trip_and_validation() {
        let s = spec(&[2, 4], &[1, 3]);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"m":[2,4],"n":[1,3]}"#);
        let back: BlendSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<BlendSpec>(r#"{"m":[2,3],"n":[1,2]}"#).is_err());
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(
            normalize_sequences(&[1, 2], &[1, 2]).unwrap(),
            (vec![1, 2], vec![1, 2])
        );
        assert_eq!(
            normalize_sequences(&[1, 2, 2], &[2, 1, 3]).unwrap(),
            (vec![1, 2], vec![2, 3])
        );
        assert_eq!(
            normalize_sequences(&[3, 2], &[1, 2]).unwrap(),
            (vec![3], vec![2])
        );
        assert!(matches!(normalize_sequences(&[], &[]), Err(BlendError::EmptyInput)));
    }

    #[test]
    fn elevate_examples() {
        assert_eq!(elevate_to_divisible(&[2, 3, 5, 7]).unwrap(), vec![2, 4, 8, 16]);
        assert_eq!(elevate_to_divisible(&[2, 4, 8]).unwrap(), vec![2, 4, 8]);
        assert_eq!(elevate_to_divisible(&[1, 5]).unwrap(), vec![1, 5]);
        assert_eq!(elevate_to_divisible(&[0, 3, 4]).unwrap(), vec![0, 3, 6]);
        assert!(matches!(
            elevate_to_divisible(&[3, 3]),
            Err(BlendError::NotIncreasing(_))
        ));
    }

    #[test]
    fn index_sequence_listing() {
        let seq = index_sequences(&spec(&[3, 6, 12, 24], &[2, 4, 8, 16]));
        assert_eq!(seq.alpha[0], vec![0, 8, 16, 24]);
        assert_eq!(seq.alpha[1], vec![0, 4, 8, 12, 16, 20, 24]);
        assert_eq!(seq.alpha[3], (0..=24).collect::<Vec<_>>());
        assert_eq!(seq.beta[0], vec![0, 8, 16]);
        assert_eq!(seq.beta[1], vec![0, 4, 8, 12, 16]);
        assert_eq!(seq.beta[3], (0..=16).collect::<Vec<_>>());
    }

    #[test]
    fn level_orderings_match_listing() {
        let seq = index_sequences(&spec(&[3, 6, 12, 24], &[2, 4, 8, 16]));
        assert_eq!(
            level_ordering(&seq.alpha),
            vec![
                0, 8, 16, 24, 4, 12, 20, 2, 6, 10, 14, 18, 22, 1, 3, 5, 7, 9, 11, 13, 15, 17,
                19, 21, 23
            ]
        );
        assert_eq!(
            level_ordering(&seq.beta),
            vec![0, 8, 16, 4, 12, 2, 6, 10, 14, 1, 3, 5, 7, 9, 11, 13, 15]
        );
    }

    #[test]
    fn tensor_grid_when_single_level() {
        let g = quasi_uniform_grid(&spec(&[2], &[2]));
        let all: Vec<_> = (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).collect();
        assert_eq!(g.points(), all.as_slice());
    }

    #[test]
    fn two_four_grid_drops_odd_odd_points() {
        let g = quasi_uniform_grid(&spec(&[2, 4], &[2, 4]));
        assert_eq!(g.len(), 21);
        for i in 0..=4 {
            for j in 0..=4 {
                assert_eq!(g.contains(i, j), !(i % 2 == 1 && j % 2 == 1), "({i},{j})");
            }
        }
        assert_eq!(g.inverse_alpha(0, 2), Some(1));
        assert_eq!(g.inverse_alpha(0, 3), None);
        assert_eq!(g.inverse_beta(1, 3), Some(3));
        assert_eq!(g.alpha_level(3), Some(1));
        assert_eq!(g.alpha_level(4), Some(0));
    }

    #[test]
    fn large_example_grid_size() {
        let g = quasi_uniform_grid(&spec(&[3, 6, 12, 24], &[2, 4, 8, 16]));
        assert_eq!(g.len(), 161);
    }

    #[test]
    fn lower_sets() {
        assert_eq!(lower_set(&[2], &[2]).unwrap().len(), 9);
        let l = lower_set(&[1, 2], &[1, 2]).unwrap();
        assert_eq!(l.len(), 8);
        assert!(!l.contains(2, 2));
        let l = lower_set(&[1, 3, 6], &[1, 3, 4]).unwrap();
        let fig: Vec<(usize, usize)> = vec![
            (0, 0), (0, 1), (0, 2), (0, 3), (0, 4), (1, 0), (1, 1), (1, 2), (1, 3), (1, 4),
            (2, 0), (2, 1), (2, 2), (2, 3), (3, 0), (3, 1), (3, 2), (3, 3), (4, 0), (4, 1),
            (5, 0), (5, 1), (6, 0), (6, 1),
        ];
        assert_eq!(l.points().iter().copied().collect::<Vec<_>>(), fig);
    }

    #[test]
    fn permutation_examples() {
        assert!(permutation_check(&spec(&[2], &[2])));
        assert!(permutation_check(&spec(&[3, 6, 12, 24], &[2, 4, 8, 16])));
        assert!(permutation_check(&spec(&[2, 4], &[2, 4])));
        assert!(permutation_check(&spec(&[0, 4], &[1, 3])));
    }

    #[test]
    fn orders() {
        assert_eq!(predicted_order(&[3, 6, 12], &[2, 4, 8]).unwrap(), 9);
        assert_eq!(predicted_order(&[12], &[8]).unwrap(), 9);
        assert_eq!(predicted_order(&[2, 4], &[2, 4]).unwrap(), 5);
        assert_eq!(predicted_order(&[1, 2], &[1, 2]).unwrap(), 3);
        assert_eq!(predicted_order(&[1, 3], &[1, 3]).unwrap(), 4);
        assert_eq!(predicted_order(&[1, 2, 4], &[1, 2, 4]).unwrap(), 5);
    }

    #[test]
    fn stability_factors() {
        let s = spec(&[1, 2], &[2, 4]);
        assert!((stability_factor(&s, Axis::First, 1).unwrap() - 3.0).abs() < 1e-12);
        assert!((stability_factor(&s, Axis::Second, 1).unwrap() - 5.0).abs() < 1e-12);
        assert!((stability_factor(&s, Axis::First, 0).unwrap() - 2.0).abs() < 1e-12);
        assert!(stability_factor(&s, Axis::First, 2).is_err());
    }

    fn chain(start: usize, factors: &[usize]) -> Vec<usize> {
        let mut out = vec![start];
        for &f in factors {
            let last = *out.last().unwrap();
            out.push(if last == 0 { f } else { last * f });
        }
        out
    }

    proptest! {
        #[test]
        fn dimension_matches_lower_set_and_grid(
            m0 in 0usize..4, n0 in 0usize..4,
            fm in proptest::collection::vec(2usize..4, 0..3),
            fn_ in proptest::collection::vec(2usize..4, 0..3),
        ) {
            let r = fm.len().min(fn_.len());
            let m = chain(m0, &fm[..r]);
            let n = chain(n0, &fn_[..r]);
            prop_assume!(m[r] <= 24 && n[r] <= 24);
            let s = BlendSpec::new(m.clone(), n.clone()).unwrap();
            let d = dimension(&m, &n).unwrap();
            prop_assert_eq!(d, lower_set(&m, &n).unwrap().len());
            prop_assert_eq!(d, quasi_uniform_grid(&s).len());
            let seq = index_sequences(&s);
            for k in 0..r {
                for v in &seq.alpha[k] {
                    prop_assert!(seq.alpha[k + 1].contains(v));
                }
                for v in &seq.beta[k] {
                    prop_assert!(seq.beta[k + 1].contains(v));
                }
            }
            prop_assert!(permutation_check(&s));
        }

        #[test]
        fn single_level_order_is_tensor_order(m in 0usize..30, n in 0usize..30) {
            prop_assert_eq!(predicted_order(&[m], &[n]).unwrap(), m.min(n) + 1);
        }

        #[test]
        fn elevation_repairs_any_increasing_sequence(
            raw in proptest::collection::btree_set(1usize..40, 1..5),
        ) {
            let m: Vec<usize> = raw.into_iter().collect();
            let e = elevate_to_divisible(&m).unwrap();
            prop_assert_eq!(e[0], m[0]);
            for k in 0..m.len() {
                prop_assert!(e[k] >= m[k]);
            }
            for w in e.windows(2) {
                prop_assert!(w[0] < w[1] && w[1] % w[0] == 0);
            }
        }
    }
}
