//! Structural analysis of binary matrices: column statistics, coherence,
//! Tanner-graph girth, spark lower bounds, and exhaustive spark and stopping
//! distance on small instances.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_rational::Ratio;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::geometry::{a_count, n_count, GeometryKind};
use crate::incidence::{BinaryMatrix, MatrixType};
use crate::util::{binomial, Combinations};

/// Upper limit on the number of subsets an exhaustive search may visit.
pub const MAX_SUBSETS: u128 = 100_000_000;
/// Largest subset size accepted by the exhaustive searches.
pub const MAX_SEARCH_LIMIT: usize = 10;

/// The column pair attaining the coherence, kept in integer form so the
/// value λ_ij / √(w_i w_j) can be compared exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coherence {
    /// Overlapping column pair, `None` when all supports are disjoint.
    pub columns: Option<(usize, usize)>,
    pub inner: u64,
    pub weight_i: u64,
    pub weight_j: u64,
}

impl Coherence {
    pub fn value(&self) -> f64 {
        if self.inner == 0 {
            return 0.0;
        }
        self.inner as f64 / ((self.weight_i * self.weight_j) as f64).sqrt()
    }

    // a/√b > c/√d  ⇔  a²d > c²b
    fn exceeds(&self, other: &Coherence) -> bool {
        let lhs = (self.inner as u128).pow(2) * (other.weight_i * other.weight_j) as u128;
        let rhs = (other.inner as u128).pow(2) * (self.weight_i * self.weight_j) as u128;
        lhs > rhs
    }
}

/// Weight and overlap statistics of a binary matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColumnStats {
    /// Minimum column weight.
    pub gamma: u64,
    /// Maximum inner product of two distinct columns.
    pub lambda: u64,
    /// Maximum row weight.
    pub rho: u64,
    pub coherence: Coherence,
}

/// One pass over all column pairs by bitset popcount.
pub fn column_stats(h: &BinaryMatrix) -> ColumnStats {
    let cols = h.column_bitsets();
    let weights: Vec<u64> = cols.iter().map(|c| popcount(c)).collect();
    let none = Coherence {
        columns: None,
        inner: 0,
        weight_i: 1,
        weight_j: 1,
    };
    let pick = |a: (u64, Coherence), b: (u64, Coherence)| {
        let lambda = a.0.max(b.0);
        let better = if b.1.exceeds(&a.1) || (!a.1.exceeds(&b.1) && b.1.columns < a.1.columns && b.1.columns.is_some()) {
            b.1
        } else {
            a.1
        };
        (lambda, better)
    };
    let (lambda, coherence) = (0..cols.len())
        .into_par_iter()
        .map(|i| {
            let mut best = (0u64, none);
            for j in i + 1..cols.len() {
                let inner = and_count(&cols[i], &cols[j]);
                if inner == 0 {
                    continue;
                }
                let c = Coherence {
                    columns: Some((i, j)),
                    inner,
                    weight_i: weights[i],
                    weight_j: weights[j],
                };
                best.0 = best.0.max(inner);
                if c.exceeds(&best.1) {
                    best.1 = c;
                }
            }
            best
        })
        .reduce(|| (0, none), pick);
    ColumnStats {
        gamma: weights.iter().copied().min().unwrap_or(0),
        lambda,
        rho: h.row_weights().into_iter().max().unwrap_or(0) as u64,
        coherence,
    }
}

pub fn coherence(h: &BinaryMatrix) -> Coherence {
    column_stats(h).coherence
}

/// `(γ, λ)`: minimum column weight and maximum pairwise inner product.
pub fn gamma_lambda(h: &BinaryMatrix) -> (u64, u64) {
    let s = column_stats(h);
    (s.gamma, s.lambda)
}

fn popcount(words: &[u64]) -> u64 {
    words.iter().map(|w| w.count_ones() as u64).sum()
}

fn and_count(a: &[u64], b: &[u64]) -> u64 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as u64).sum()
}

/// The bound 1 + 1/μ = 1 + √(w_i w_j)/λ_ij.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoherenceBound(pub Coherence);

impl CoherenceBound {
    pub fn value(&self) -> f64 {
        1.0 + 1.0 / self.0.value()
    }

    /// Smallest integer not below the bound, computed exactly.
    pub fn ceil(&self) -> u64 {
        let prod = self.0.weight_i * self.0.weight_j;
        let lambda = self.0.inner;
        // smallest t with t·λ ≥ √prod
        let mut t = ((prod as f64).sqrt() / lambda as f64).ceil() as u64;
        while t > 0 && (t - 1) * (t - 1) * lambda * lambda >= prod {
            t -= 1;
        }
        while t * t * lambda * lambda < prod {
            t += 1;
        }
        1 + t
    }
}

/// Lower bounds on spark(H). Entries are `None` where a bound does not
/// apply.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparkBounds {
    /// 1 + 1/μ(H).
    pub coherence: Option<CoherenceBound>,
    /// 1 + γ/λ.
    pub gamma_lambda: Option<Ratio<u64>>,
    /// 2γ/λ.
    pub two_gamma_lambda: Option<Ratio<u64>>,
    /// 2A(μ2, μ2−1) for a type-I matrix with all its rows.
    pub type_i: Option<u64>,
    /// 2N(μ1+1, μ1) for a type-II matrix with all its rows.
    pub type_ii: Option<u64>,
}

impl SparkBounds {
    /// The strongest bound, rounded up to an integer.
    pub fn best(&self) -> Option<u64> {
        let ceil = |r: &Ratio<u64>| r.ceil().to_integer();
        [
            self.coherence.map(|c| c.ceil()),
            self.gamma_lambda.as_ref().map(ceil),
            self.two_gamma_lambda.as_ref().map(ceil),
            self.type_i,
            self.type_ii,
        ]
        .into_iter()
        .flatten()
        .max()
    }

    /// Largest k with 2k below the best bound: every k-sparse signal is the
    /// unique sparsest solution of its measurements.
    pub fn guaranteed_sparsity(&self) -> Option<u64> {
        self.best().map(|b| (b.max(1) - 1) / 2)
    }
}

pub fn spark_lower_bounds(h: &BinaryMatrix) -> Result<SparkBounds> {
    spark_bounds_from_stats(h, &column_stats(h))
}

fn spark_bounds_from_stats(h: &BinaryMatrix, stats: &ColumnStats) -> Result<SparkBounds> {
    let mut bounds = SparkBounds {
        coherence: None,
        gamma_lambda: None,
        two_gamma_lambda: None,
        type_i: None,
        type_ii: None,
    };
    if stats.lambda > 0 {
        bounds.coherence = Some(CoherenceBound(stats.coherence));
        bounds.gamma_lambda = Some(Ratio::from_integer(1) + Ratio::new(stats.gamma, stats.lambda));
        bounds.two_gamma_lambda = Some(Ratio::new(2 * stats.gamma, stats.lambda));
    }
    if let Some(meta) = h.meta().filter(|m| m.rows_complete()) {
        let to_u64 = |v: u128| u64::try_from(v).map_err(|_| Error::TooLarge(format!("bound {v}")));
        match meta.matrix_type {
            MatrixType::I => bounds.type_i = Some(2 * to_u64(a_count(meta.q, meta.r, meta.mu2, meta.mu2 - 1)?)?),
            MatrixType::II => {
                bounds.type_ii = Some(2 * to_u64(n_count(meta.kind, meta.q, meta.mu1 + 1, meta.mu1)?)?)
            }
        }
    }
    Ok(bounds)
}

/// The ordered triple compared in the bound-chain remarks, for one geometry
/// and one matrix type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundChain {
    pub kind: GeometryKind,
    pub q: u64,
    pub r: usize,
    pub mu1: usize,
    pub mu2: usize,
    pub matrix_type: MatrixType,
    /// Geometry bound.
    pub geometric: Ratio<u128>,
    /// 2γ/λ.
    pub two_gamma_lambda: Ratio<u128>,
    /// 1 + γ'/λ' of the comparison family.
    pub baseline: Ratio<u128>,
    /// Whether the first two entries should coincide.
    pub equality_expected: bool,
}

impl BoundChain {
    /// `geometric ≥ two_gamma_lambda > baseline`, with equality in the first
    /// comparison exactly when expected.
    pub fn holds(&self) -> bool {
        self.geometric >= self.two_gamma_lambda
            && self.two_gamma_lambda > self.baseline
            && (self.geometric == self.two_gamma_lambda) == self.equality_expected
    }
}

impl fmt::Display for BoundChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ty = match self.matrix_type {
            MatrixType::I => "I",
            MatrixType::II => "II",
        };
        write!(
            f,
            "{}({},{}) type {ty} mu1={} mu2={}: ({}, {}, {})",
            self.kind.short_name().to_uppercase(),
            self.r,
            self.q,
            self.mu1,
            self.mu2,
            self.geometric,
            self.two_gamma_lambda,
            self.baseline
        )
    }
}

/// Evaluates the chain for type I (needs 1 ≤ μ1 < μ2 < r) or type II
/// (needs 0 ≤ μ1 < μ2 < r).
pub fn bound_chain(
    kind: GeometryKind,
    q: u64,
    r: usize,
    mu1: usize,
    mu2: usize,
    matrix_type: MatrixType,
) -> Result<BoundChain> {
    let min_mu1 = if matrix_type == MatrixType::I { 1 } else { 0 };
    if !(min_mu1 <= mu1 && mu1 < mu2 && mu2 < r) {
        return invalid(format!("need {min_mu1} <= mu1 < mu2 < r, got mu1={mu1}, mu2={mu2}, r={r}"));
    }
    let int = Ratio::from_integer;
    let (geometric, two_gamma_lambda, baseline, equality_expected) = match matrix_type {
        MatrixType::I => {
            let a = |hi, lo| a_count(q, r, hi, lo);
            let top = a(mu2, mu2 - 1)?;
            (
                int(2 * top),
                Ratio::new(2 * a(mu2, mu1)?, a(mu2, mu1 + 1)?),
                int(1 + top),
                mu2 == mu1 + 1,
            )
        }
        MatrixType::II => {
            let n = |hi, lo| n_count(kind, q, hi, lo);
            let bottom = n(mu1 + 1, mu1)?;
            (
                int(2 * bottom),
                Ratio::new(2 * n(mu2, mu1)?, n(mu2 - 1, mu1)?),
                int(1 + bottom),
                mu2 == mu1 + 1 || (kind == GeometryKind::Euclidean && mu1 == 0),
            )
        }
    };
    Ok(BoundChain {
        kind,
        q,
        r,
        mu1,
        mu2,
        matrix_type,
        geometric,
        two_gamma_lambda,
        baseline,
        equality_expected,
    })
}

/// Every chain over the given dimensions and field sizes, both geometries
/// and both types.
pub fn bound_chain_grid(rs: &[usize], qs: &[u64]) -> Result<Vec<BoundChain>> {
    let mut out = Vec::new();
    for kind in [GeometryKind::Euclidean, GeometryKind::Projective] {
        for &r in rs {
            for &q in qs {
                for mu2 in 1..r {
                    for mu1 in 0..mu2 {
                        if mu1 >= 1 {
                            out.push(bound_chain(kind, q, r, mu1, mu2, MatrixType::I)?);
                        }
                        out.push(bound_chain(kind, q, r, mu1, mu2, MatrixType::II)?);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Length of the shortest cycle in the Tanner graph, `None` if acyclic.
pub fn girth(h: &BinaryMatrix) -> Option<usize> {
    if column_stats(h).lambda >= 2 {
        return Some(4);
    }
    girth_bfs(h)
}

fn girth_bfs(h: &BinaryMatrix) -> Option<usize> {
    let n = h.cols();
    let col_adj = h.column_supports();
    let row_adj: Vec<Vec<usize>> = (0..h.rows()).map(|i| h.row_support(i)).collect();
    // nodes 0..n are columns, n.. are rows
    let neighbours = |v: usize| -> Box<dyn Iterator<Item = usize> + '_> {
        if v < n {
            Box::new(col_adj[v].iter().map(move |&i| i + n))
        } else {
            Box::new(row_adj[v - n].iter().copied())
        }
    };
    let best = AtomicUsize::new(usize::MAX);
    (0..n).into_par_iter().for_each(|start| {
        let total = n + h.rows();
        let mut dist = vec![usize::MAX; total];
        let mut parent = vec![usize::MAX; total];
        let mut queue = std::collections::VecDeque::new();
        dist[start] = 0;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            if 2 * dist[u] >= best.load(Ordering::Relaxed) {
                break;
            }
            for w in neighbours(u) {
                if w == parent[u] {
                    continue;
                }
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else {
                    best.fetch_min(dist[u] + dist[w] + 1, Ordering::Relaxed);
                }
            }
        }
    });
    match best.into_inner() {
        usize::MAX => None,
        g => Some(g),
    }
}

/// Result of an exhaustive smallest-subset search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    /// Smallest size and the lexicographically first subset of that size.
    Found { size: usize, certificate: Vec<usize> },
    /// Nothing up to this size.
    ExceedsLimit(usize),
    /// No such subset exists at any size.
    Infinite,
}

impl SearchOutcome {
    pub fn size(&self) -> Option<usize> {
        match self {
            SearchOutcome::Found { size, .. } => Some(*size),
            _ => None,
        }
    }
}

impl fmt::Display for SearchOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchOutcome::Found { size, .. } => write!(f, "{size}"),
            SearchOutcome::ExceedsLimit(limit) => write!(f, ">{limit}"),
            SearchOutcome::Infinite => write!(f, "inf"),
        }
    }
}

fn check_budget(n: usize, limit: usize) -> Result<()> {
    if limit > MAX_SEARCH_LIMIT {
        return invalid(format!("search limit {limit} exceeds {MAX_SEARCH_LIMIT}"));
    }
    let total: u128 = (1..=limit.min(n)).map(|s| binomial(n, s)).fold(0, u128::saturating_add);
    if total > MAX_SUBSETS {
        return Err(Error::TooLarge(format!("{total} subsets of {n} columns up to size {limit}")));
    }
    Ok(())
}

/// Lexicographically first `s`-subset of `0..n` satisfying `pred`. Work is
/// split by leading index; the first hit in order wins regardless of
/// scheduling.
fn first_subset<F>(n: usize, s: usize, pred: F) -> Option<Vec<usize>>
where
    F: Fn(&[usize]) -> bool + Sync,
{
    if s == 0 || s > n {
        return None;
    }
    (0..=n - s).into_par_iter().find_map_first(|first| {
        let mut buf = vec![first; s];
        Combinations::new(n - first - 1, s - 1).find_map(|rest| {
            for (k, &j) in rest.iter().enumerate() {
                buf[k + 1] = first + 1 + j;
            }
            pred(&buf).then(|| buf.clone())
        })
    })
}

/// Rank over the rationals by fraction-free elimination. The input rows are
/// consumed. Fails with `TooLarge` if an intermediate overflows `i128`.
pub fn bareiss_rank(mut a: Vec<Vec<i128>>) -> Result<usize> {
    let overflow = || Error::TooLarge("integer overflow during elimination".into());
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut prev: i128 = 1;
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank][c];
        for i in rank + 1..rows {
            let factor = a[i][c];
            for j in c + 1..cols {
                let v = pivot
                    .checked_mul(a[i][j])
                    .and_then(|x| x.checked_sub(factor.checked_mul(a[rank][j])?))
                    .ok_or_else(overflow)?;
                a[i][j] = v / prev;
            }
            a[i][c] = 0;
        }
        prev = pivot;
        rank += 1;
    }
    Ok(rank)
}

fn columns_as_rows(h: &BinaryMatrix, cols: &[usize]) -> Vec<Vec<i128>> {
    cols.iter()
        .map(|&j| (0..h.rows()).map(|i| h.get(i, j) as i128).collect())
        .collect()
}

/// True when the listed columns are linearly dependent over the rationals.
pub fn columns_dependent(h: &BinaryMatrix, cols: &[usize]) -> Result<bool> {
    Ok(bareiss_rank(columns_as_rows(h, cols))? < cols.len())
}

/// Smallest number of linearly dependent columns, searched up to `limit`.
pub fn exact_spark(h: &BinaryMatrix, limit: usize) -> Result<SearchOutcome> {
    let n = h.cols();
    if n <= h.rows() {
        let all: Vec<usize> = (0..n).collect();
        if !columns_dependent(h, &all)? {
            return Ok(SearchOutcome::Infinite);
        }
    }
    check_budget(n, limit)?;
    let col_rows: Vec<Vec<i128>> = columns_as_rows(h, &(0..n).collect::<Vec<_>>());
    for s in 1..=limit.min(n) {
        let hit = first_subset(n, s, |subset| {
            let m: Vec<Vec<i128>> = subset.iter().map(|&j| col_rows[j].clone()).collect();
            // entries of small 0/1 minors cannot overflow i128
            bareiss_rank(m).map_or(false, |r| r < s)
        });
        if let Some(certificate) = hit {
            return Ok(SearchOutcome::Found { size: s, certificate });
        }
    }
    Ok(SearchOutcome::ExceedsLimit(limit))
}

/// An integer vector `v` with `H_S v = 0`, primitive and with positive first
/// nonzero entry, or `None` if the columns are independent.
pub fn null_vector(h: &BinaryMatrix, cols: &[usize]) -> Result<Option<Vec<i128>>> {
    let s = cols.len();
    let mut a: Vec<Vec<Ratio<i128>>> = (0..h.rows())
        .map(|i| cols.iter().map(|&j| Ratio::from_integer(h.get(i, j) as i128)).collect())
        .collect();
    let zero = Ratio::from_integer(0);
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..s {
        let Some(p) = (row..a.len()).find(|&i| a[i][c] != zero) else {
            continue;
        };
        a.swap(row, p);
        let inv = a[row][c].recip();
        for v in a[row].iter_mut() {
            *v *= inv;
        }
        for i in 0..a.len() {
            if i != row && a[i][c] != zero {
                let f = a[i][c];
                for j in 0..s {
                    let d = a[row][j] * f;
                    a[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    let Some(free) = (0..s).find(|c| !pivots.contains(c)) else {
        return Ok(None);
    };
    let mut x = vec![zero; s];
    x[free] = Ratio::from_integer(1);
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = -a[r][free];
    }
    let lcm = x.iter().fold(1i128, |acc, v| {
        let d = *v.denom();
        acc / gcd_i128(acc, d) * d
    });
    let mut ints: Vec<i128> = x.iter().map(|v| (v * lcm).to_integer()).collect();
    let g = ints.iter().fold(0i128, |acc, &v| gcd_i128(acc, v));
    let sign = if ints.iter().find(|&&v| v != 0).copied().unwrap_or(1) < 0 { -1 } else { 1 };
    for v in ints.iter_mut() {
        *v = *v / g * sign;
    }
    if !is_null_vector(h, cols, &ints) {
        return Err(Error::Internal("null vector failed verification".into()));
    }
    Ok(Some(ints))
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Checks `H_S v = 0` exactly with `v ≠ 0`.
pub fn is_null_vector(h: &BinaryMatrix, cols: &[usize], v: &[i128]) -> bool {
    v.len() == cols.len()
        && v.iter().any(|&x| x != 0)
        && (0..h.rows()).all(|i| cols.iter().zip(v).filter(|(&j, _)| h.get(i, j)).map(|(_, &x)| x).sum::<i128>() == 0)
}

/// True when no row meets the column set exactly once.
pub fn is_stopping_set(h: &BinaryMatrix, cols: &[usize]) -> bool {
    let bitsets = h.column_bitsets();
    let refs: Vec<&[u64]> = cols.iter().map(|&j| bitsets[j].as_slice()).collect();
    !cols.is_empty() && no_single_row(&refs)
}

fn no_single_row(cols: &[&[u64]]) -> bool {
    let words = cols.first().map_or(0, |c| c.len());
    (0..words).all(|w| {
        let (mut once, mut twice) = (0u64, 0u64);
        for c in cols {
            twice |= once & c[w];
            once |= c[w];
        }
        once == twice
    })
}

/// Columns left after repeatedly removing any column that is the only one
/// in some row: the union of all stopping sets.
pub fn maximal_stopping_set(h: &BinaryMatrix) -> Vec<usize> {
    let supports = h.column_supports();
    let mut alive = vec![true; h.cols()];
    let mut count = vec![0usize; h.rows()];
    for s in &supports {
        for &i in s {
            count[i] += 1;
        }
    }
    let rows: Vec<Vec<usize>> = (0..h.rows()).map(|i| h.row_support(i)).collect();
    let mut stack: Vec<usize> = (0..h.rows()).filter(|&i| count[i] == 1).collect();
    while let Some(i) = stack.pop() {
        if count[i] != 1 {
            continue;
        }
        let j = *rows[i].iter().find(|&&j| alive[j]).expect("row count is one");
        alive[j] = false;
        for &k in &supports[j] {
            count[k] -= 1;
            if count[k] == 1 {
                stack.push(k);
            }
        }
    }
    (0..h.cols()).filter(|&j| alive[j]).collect()
}

/// Size of the smallest nonempty stopping set, searched up to `limit`.
pub fn stopping_distance(h: &BinaryMatrix, limit: usize) -> Result<SearchOutcome> {
    let core = maximal_stopping_set(h);
    if core.is_empty() {
        return Ok(SearchOutcome::Infinite);
    }
    check_budget(core.len(), limit)?;
    let bitsets = h.column_bitsets();
    let cols: Vec<&[u64]> = core.iter().map(|&j| bitsets[j].as_slice()).collect();
    for s in 1..=limit.min(core.len()) {
        let hit = first_subset(core.len(), s, |subset| {
            let chosen: Vec<&[u64]> = subset.iter().map(|&k| cols[k]).collect();
            no_single_row(&chosen)
        });
        if let Some(local) = hit {
            let certificate = local.iter().map(|&k| core[k]).collect();
            return Ok(SearchOutcome::Found { size: s, certificate });
        }
    }
    Ok(SearchOutcome::ExceedsLimit(limit))
}

/// Search limits for [`analyze`]; `None` skips the search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AnalysisOptions {
    pub spark_limit: Option<usize>,
    pub stopping_limit: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalysisReport {
    pub rows: usize,
    pub cols: usize,
    pub stats: ColumnStats,
    pub girth: Option<usize>,
    pub bounds: SparkBounds,
    pub spark: Option<SearchOutcome>,
    pub stopping: Option<SearchOutcome>,
}

pub fn analyze(h: &BinaryMatrix, options: AnalysisOptions) -> Result<AnalysisReport> {
    let stats = column_stats(h);
    let girth = if stats.lambda >= 2 { Some(4) } else { girth_bfs(h) };
    Ok(AnalysisReport {
        rows: h.rows(),
        cols: h.cols(),
        stats,
        girth,
        bounds: spark_bounds_from_stats(h, &stats)?,
        spark: options.spark_limit.map(|l| exact_spark(h, l)).transpose()?,
        stopping: options.stopping_limit.map(|l| stopping_distance(h, l)).transpose()?,
    })
}

/// `key=value` lines in a fixed order.
impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let na = || "na".to_string();
        let ratio = |r: &Option<Ratio<u64>>| r.map_or_else(na, |r| r.to_string());
        let int = |v: Option<u64>| v.map_or_else(na, |v| v.to_string());
        let c = &self.stats.coherence;
        writeln!(f, "rows={}", self.rows)?;
        writeln!(f, "cols={}", self.cols)?;
        writeln!(f, "gamma={}", self.stats.gamma)?;
        writeln!(f, "lambda={}", self.stats.lambda)?;
        writeln!(f, "rho={}", self.stats.rho)?;
        writeln!(f, "coherence={:.6}", c.value())?;
        match c.columns {
            Some((i, j)) => writeln!(f, "coherence_exact={}/sqrt({}*{}) columns={i},{j}", c.inner, c.weight_i, c.weight_j)?,
            None => writeln!(f, "coherence_exact=0 disjoint_supports")?,
        }
        writeln!(f, "girth={}", self.girth.map_or_else(|| "inf".into(), |g| g.to_string()))?;
        let cb = self.bounds.coherence.map_or_else(na, |b| format!("{:.6}", b.value()));
        writeln!(f, "bound_coherence={cb}")?;
        writeln!(f, "bound_gamma_lambda={}", ratio(&self.bounds.gamma_lambda))?;
        writeln!(f, "bound_two_gamma_lambda={}", ratio(&self.bounds.two_gamma_lambda))?;
        writeln!(f, "bound_type_i={}", int(self.bounds.type_i))?;
        writeln!(f, "bound_type_ii={}", int(self.bounds.type_ii))?;
        writeln!(f, "bound_best={}", int(self.bounds.best()))?;
        writeln!(f, "guaranteed_k={}", int(self.bounds.guaranteed_sparsity()))?;
        let outcome = |o: &Option<SearchOutcome>| o.as_ref().map_or_else(|| "skipped".into(), |o| o.to_string());
        let cert = |o: &Option<SearchOutcome>| match o {
            Some(SearchOutcome::Found { certificate, .. }) => {
                certificate.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(",")
            }
            _ => na(),
        };
        writeln!(f, "spark={}", outcome(&self.spark))?;
        writeln!(f, "spark_certificate={}", cert(&self.spark))?;
        writeln!(f, "stopping_distance={}", outcome(&self.stopping))?;
        writeln!(f, "stopping_certificate={}", cert(&self.stopping))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::geometry::Geometry;
    use crate::incidence::{build_incidence, select_row_bundles};
    use GeometryKind::{Euclidean as EG, Projective as PG};

    fn found(o: SearchOutcome) -> (usize, Vec<usize>) {
        match o {
            SearchOutcome::Found { size, certificate } => (size, certificate),
            other => panic!("expected a finite value, got {other:?}"),
        }
    }

    #[test]
    fn k4_values() {
        let h = fixtures::k4_incidence();
        assert_eq!(gamma_lambda(&h), (2, 1));
        let (spark, cert) = found(exact_spark(&h, 6).unwrap());
        assert_eq!(spark, 4);
        let v = null_vector(&h, &cert).unwrap().unwrap();
        assert!(v.iter().all(|&x| x != 0));
        // the 4-cycle through edges 01, 02, 13, 23
        assert!(is_null_vector(&h, &[0, 1, 4, 5], &[1, -1, -1, 1]));
        let (s, cert) = found(stopping_distance(&h, 6).unwrap());
        assert_eq!(s, 3);
        assert!(is_stopping_set(&h, &cert));
        assert!(is_stopping_set(&h, &[3, 4, 5]));
        assert_eq!(girth(&h), Some(6));
    }

    #[test]
    fn hamming_values() {
        for m in [3, 4] {
            let h = fixtures::hamming(m);
            assert_eq!(exact_spark(&h, 5).unwrap().size(), Some(3), "m={m}");
            assert_eq!(stopping_distance(&h, 5).unwrap().size(), Some(3), "m={m}");
        }
        let c = coherence(&fixtures::hamming(3));
        assert!((c.value() - 2.0 / 6f64.sqrt()).abs() < 1e-12);
        assert_eq!((c.inner, c.weight_i * c.weight_j), (2, 6));
    }

    #[test]
    fn coherence_matches_pairwise_oracle() {
        for h in [fixtures::hamming(3), fixtures::k4_incidence(), fixtures::eg_2_2_lines()] {
            let cols = h.column_supports();
            let mut best = 0.0f64;
            for i in 0..cols.len() {
                for j in i + 1..cols.len() {
                    let inner = cols[i].iter().filter(|r| cols[j].contains(r)).count() as f64;
                    best = best.max(inner / ((cols[i].len() * cols[j].len()) as f64).sqrt());
                }
            }
            assert!((coherence(&h).value() - best).abs() < 1e-12);
        }
    }

    #[test]
    fn independent_columns_have_infinite_spark() {
        let h = fixtures::eg_2_2_lines();
        assert_eq!((h.rows(), h.cols()), (6, 4));
        assert_eq!(exact_spark(&h, 4).unwrap(), SearchOutcome::Infinite);
        let id = BinaryMatrix::identity(5);
        assert_eq!(exact_spark(&id, 3).unwrap(), SearchOutcome::Infinite);
        assert_eq!(stopping_distance(&id, 3).unwrap(), SearchOutcome::Infinite);
        assert_eq!(girth(&id), None);
        let c = coherence(&id);
        assert_eq!((c.value(), c.columns), (0.0, None));
        let b = spark_lower_bounds(&id).unwrap();
        assert_eq!((b.coherence, b.gamma_lambda, b.best()), (None, None, None));
    }

    #[test]
    fn limits_and_budget() {
        let h = fixtures::k4_incidence();
        assert_eq!(exact_spark(&h, 3).unwrap(), SearchOutcome::ExceedsLimit(3));
        assert_eq!(stopping_distance(&h, 2).unwrap(), SearchOutcome::ExceedsLimit(2));
        assert!(matches!(exact_spark(&h, 11), Err(Error::InvalidArgument(_))));
        let big = build_incidence(&Geometry::new(PG, 2, 7).unwrap(), 0, 1, MatrixType::I).unwrap();
        assert!(matches!(exact_spark(&big, 10), Err(Error::TooLarge(_))));
    }

    #[test]
    fn bareiss_rank_small_cases() {
        assert_eq!(bareiss_rank(vec![vec![1, 2], vec![2, 4]]).unwrap(), 1);
        assert_eq!(bareiss_rank(vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]).unwrap(), 3);
        assert_eq!(bareiss_rank(vec![vec![0, 0, 1], vec![0, 0, 2], vec![0, 1, 0]]).unwrap(), 2);
        assert_eq!(bareiss_rank(vec![]).unwrap(), 0);
        let huge = i128::MAX / 2;
        assert!(matches!(bareiss_rank(vec![vec![huge, 3], vec![3, huge]]), Err(Error::TooLarge(_))));
    }

    #[test]
    fn example_statistics() {
        let g = Geometry::new(EG, 4, 2).unwrap();
        let h = build_incidence(&g, 1, 3, MatrixType::I).unwrap();
        let s = column_stats(&h);
        assert_eq!((s.gamma, s.lambda, s.rho), (7, 3, 28));
        assert!(s.coherence.value() <= 3.0 / 7.0 + 1e-12);
        assert_eq!(girth(&h), Some(4));
        let b = spark_lower_bounds(&h).unwrap();
        assert_eq!((b.type_i, b.type_ii), (Some(6), None));
        assert_eq!(b.two_gamma_lambda, Some(Ratio::new(14, 3)));
        assert_eq!(b.best(), Some(6));
        assert_eq!(b.guaranteed_sparsity(), Some(2));

        let ht = build_incidence(&Geometry::new(PG, 3, 4).unwrap(), 0, 1, MatrixType::II).unwrap();
        let s = column_stats(&ht);
        assert_eq!((s.gamma, s.lambda), (5, 1));
        assert_eq!(girth(&ht), Some(6));
        let b = spark_lower_bounds(&ht).unwrap();
        assert_eq!((b.type_i, b.type_ii, b.best()), (None, Some(10), Some(10)));
    }

    #[test]
    fn punctured_rows_drop_geometry_bound() {
        let g = Geometry::new(EG, 2, 4).unwrap();
        let h = build_incidence(&g, 0, 1, MatrixType::I).unwrap();
        assert_eq!(spark_lower_bounds(&h).unwrap().type_i, Some(2 * 5));
        let hb = select_row_bundles(&h, 3).unwrap();
        let b = spark_lower_bounds(&hb).unwrap();
        assert_eq!(b.type_i, None);
        assert_eq!(b.two_gamma_lambda, Some(Ratio::from_integer(6)));
    }

    #[test]
    fn coherence_bound_ceiling_is_exact() {
        let mk = |inner, wi, wj| CoherenceBound(Coherence { columns: Some((0, 1)), inner, weight_i: wi, weight_j: wj });
        // 1 + 3/1 = 4 exactly
        assert_eq!(mk(1, 3, 3).ceil(), 4);
        // 1 + sqrt(6)/2 ≈ 2.22
        assert_eq!(mk(2, 2, 3).ceil(), 3);
        // 1 + 7/3 ≈ 3.33
        assert_eq!(mk(3, 7, 7).ceil(), 4);
        for (i, w1, w2) in [(1u64, 5u64, 8u64), (2, 9, 9), (3, 10, 11), (4, 16, 16)] {
            let b = mk(i, w1, w2);
            assert_eq!(b.ceil(), b.value().ceil() as u64);
        }
    }

    #[test]
    fn chain_examples() {
        let c = bound_chain(EG, 2, 4, 1, 3, MatrixType::I).unwrap();
        assert_eq!(c.geometric, Ratio::from_integer(6));
        assert_eq!(c.two_gamma_lambda, Ratio::new(14, 3));
        assert_eq!(c.baseline, Ratio::from_integer(4));
        assert!(c.holds());
        let adjacent = bound_chain(PG, 3, 4, 1, 2, MatrixType::I).unwrap();
        assert_eq!(adjacent.geometric, adjacent.two_gamma_lambda);
        let eg0 = bound_chain(EG, 5, 4, 0, 3, MatrixType::II).unwrap();
        assert_eq!(eg0.geometric, eg0.two_gamma_lambda);
        let pg0 = bound_chain(PG, 5, 4, 0, 3, MatrixType::II).unwrap();
        assert!(pg0.geometric > pg0.two_gamma_lambda);
        assert!(bound_chain(EG, 2, 4, 0, 3, MatrixType::I).is_err());
    }

    #[test]
    fn chain_grid_holds() {
        let grid = bound_chain_grid(&[2, 3, 4], &[2, 3, 4, 5, 7, 8]).unwrap();
        assert!(!grid.is_empty());
        for c in &grid {
            assert!(c.holds(), "{c}");
        }
    }

    #[test]
    fn chain_matches_constructed_matrices() {
        // 2γ/λ of the built matrix equals the chain's middle entry
        for (kind, r, q, mu1, mu2) in [(EG, 3, 2, 0, 2), (PG, 3, 2, 0, 2), (EG, 4, 2, 1, 3), (PG, 3, 3, 1, 2)] {
            let g = Geometry::new(kind, r, q).unwrap();
            for ty in [MatrixType::I, MatrixType::II] {
                if ty == MatrixType::I && mu1 == 0 {
                    continue;
                }
                let h = build_incidence(&g, mu1, mu2, ty).unwrap();
                let (gamma, lambda) = gamma_lambda(&h);
                let chain = bound_chain(kind, q, r, mu1, mu2, ty).unwrap();
                assert_eq!(Ratio::new(2 * gamma as u128, lambda as u128), chain.two_gamma_lambda, "{chain}");
            }
        }
    }

    #[test]
    fn small_instance_invariants() {
        let mut cases = vec![fixtures::k4_incidence(), fixtures::hamming(3), fixtures::eg_2_2_lines()];
        for (kind, r, q) in [(EG, 2, 2), (EG, 2, 3), (PG, 2, 2)] {
            let g = Geometry::new(kind, r, q).unwrap();
            for ty in [MatrixType::I, MatrixType::II] {
                cases.push(build_incidence(&g, 0, 1, ty).unwrap());
            }
        }
        for h in &cases {
            let limit = h.cols().min(8);
            let spark = exact_spark(h, limit).unwrap();
            let stop = stopping_distance(h, limit).unwrap();
            if let (Some(sp), Some(st)) = (spark.size(), stop.size()) {
                assert!(sp >= st);
            }
            if let SearchOutcome::Found { size, certificate } = &spark {
                assert_eq!(certificate.len(), *size);
                assert!(columns_dependent(h, certificate).unwrap());
                assert!(!columns_dependent(h, &certificate[1..]).unwrap());
                let best = spark_lower_bounds(h).unwrap().best().unwrap_or(0);
                assert!(*size as u64 >= best, "spark {size} below bound {best}");
            }
            if let SearchOutcome::Found { certificate, .. } = &stop {
                assert!(is_stopping_set(h, certificate));
            }
            if gamma_lambda(h).1 == 1 {
                assert!(girth(h).map_or(true, |g| g >= 6));
            }
        }
    }

    #[test]
    fn girth_matches_brute_force_on_small_graphs() {
        // 4-cycle: two columns sharing two rows
        let c4 = BinaryMatrix::from_dense(&[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(girth(&c4), Some(4));
        // 8-cycle: a ring of four rows and four columns
        let ring = BinaryMatrix::from_dense(&[vec![1, 1, 0, 0], vec![0, 1, 1, 0], vec![0, 0, 1, 1], vec![1, 0, 0, 1]])
            .unwrap();
        assert_eq!(girth(&ring), Some(8));
        let path = BinaryMatrix::from_dense(&[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        assert_eq!(girth(&path), None);
        let fano = build_incidence(&Geometry::new(PG, 2, 2).unwrap(), 0, 1, MatrixType::I).unwrap();
        assert_eq!(girth(&fano), Some(6));
    }

    #[test]
    fn report_keys_are_stable() {
        let r = analyze(
            &fixtures::k4_incidence(),
            AnalysisOptions {
                spark_limit: Some(6),
                stopping_limit: Some(6),
            },
        )
        .unwrap();
        let text = r.to_string();
        let keys: Vec<&str> = text.lines().map(|l| l.split('=').next().unwrap()).collect();
        assert_eq!(
            keys,
            [
                "rows",
                "cols",
                "gamma",
                "lambda",
                "rho",
                "coherence",
                "coherence_exact",
                "girth",
                "bound_coherence",
                "bound_gamma_lambda",
                "bound_two_gamma_lambda",
                "bound_type_i",
                "bound_type_ii",
                "bound_best",
                "guaranteed_k",
                "spark",
                "spark_certificate",
                "stopping_distance",
                "stopping_certificate"
            ]
        );
        assert!(text.contains("spark=4\n"));
        assert!(text.contains("stopping_distance=3\n"));
    }
}
