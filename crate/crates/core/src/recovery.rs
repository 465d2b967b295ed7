//! Sparse signals, OMP and an exhaustive l0 decoder.
//!
//! All randomness flows through [`substream`], which keys a ChaCha20
//! generator by (master seed, purpose, k, trial) so that a trial's draws do
//! not depend on how trials are scheduled.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::analysis::{exact_spark, null_vector, SearchOutcome};
use crate::error::{invalid, Error, Result};
use crate::incidence::BinaryMatrix;
use crate::util::Combinations;

/// Reconstructions at or above this SNR count as exact.
pub const SUCCESS_DB: f64 = 100.0;
/// OMP stops once `‖r‖ ≤ EARLY_EXIT · ‖y‖`.
pub const EARLY_EXIT: f64 = 1e-12;
/// A selected column whose component orthogonal to the current support is
/// below this fraction of its norm makes the least-squares system singular.
pub const DEGENERATE_TOL: f64 = 1e-10;
/// Relative residual below which the l0 decoder accepts a support.
pub const ORACLE_TOL: f64 = 1e-9;

/// Dense real matrix stored column by column.
#[derive(Clone, Debug, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    /// `data` is column-major, `rows * cols` long.
    pub fn from_columns(rows: usize, cols: usize, data: Vec<f64>) -> Result<RealMatrix> {
        if data.len() != rows * cols {
            return invalid(format!("expected {} entries, got {}", rows * cols, data.len()));
        }
        Ok(RealMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.rows + i]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![0.0; self.rows];
        for (j, &xj) in x.iter().enumerate() {
            if xj != 0.0 {
                axpy(xj, self.column(j), &mut y);
            }
        }
        y
    }
}

impl From<&BinaryMatrix> for RealMatrix {
    fn from(h: &BinaryMatrix) -> RealMatrix {
        let mut data = vec![0.0; h.rows() * h.cols()];
        for i in 0..h.rows() {
            for j in h.row_support(i) {
                data[j * h.rows() + i] = 1.0;
            }
        }
        RealMatrix {
            rows: h.rows(),
            cols: h.cols(),
            data,
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// What a random stream is used for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Purpose {
    Signal,
    Matrix,
    Battery,
}

impl Purpose {
    fn tag(self) -> u64 {
        match self {
            Purpose::Signal => 1,
            Purpose::Matrix => 2,
            Purpose::Battery => 3,
        }
    }
}

/// Independent generator for one (seed, purpose, k, trial) key.
pub fn substream(seed: u64, purpose: Purpose, k: u64, trial: u64) -> ChaCha20Rng {
    let mut key = [0u8; 32];
    for (chunk, word) in key.chunks_exact_mut(8).zip([seed, purpose.tag(), k, trial]) {
        chunk.copy_from_slice(&word.to_le_bytes());
    }
    ChaCha20Rng::from_seed(key)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SparseSignal {
    pub n: usize,
    /// Sorted, distinct.
    pub support: Vec<usize>,
    pub values: Vec<f64>,
}

impl SparseSignal {
    pub fn dense(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.n];
        for (&i, &v) in self.support.iter().zip(&self.values) {
            x[i] = v;
        }
        x
    }
}

/// Uniform k-subset support with i.i.d. standard normal values.
pub fn gen_sparse_signal<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<SparseSignal> {
    if k == 0 || k > n {
        return invalid(format!("need 1 <= k <= n, got k={k}, n={n}"));
    }
    let mut support = index::sample(rng, n, k).into_vec();
    support.sort_unstable();
    let values = (0..k).map(|_| rng.sample(StandardNormal)).collect();
    Ok(SparseSignal { n, support, values })
}

/// `m × n` matrix of i.i.d. standard normal entries, drawn column by column.
pub fn gaussian_matrix<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> RealMatrix {
    let data = (0..m * n).map(|_| rng.sample(StandardNormal)).collect();
    RealMatrix { rows: m, cols: n, data }
}

/// Thin QR factorisation grown one column at a time by modified
/// Gram-Schmidt with a second orthogonalisation pass.
#[derive(Default)]
struct IncrementalQr {
    q: Vec<Vec<f64>>,
    // r[t] is column t of R, length t + 1
    r: Vec<Vec<f64>>,
}

impl IncrementalQr {
    /// Appends a column and returns its new orthonormal direction, or `None`
    /// if the column lies numerically in the span of the previous ones.
    fn push(&mut self, column: &[f64], column_norm: f64) -> Option<&[f64]> {
        let mut v = column.to_vec();
        let mut coeffs = vec![0.0; self.q.len() + 1];
        for _pass in 0..2 {
            for (t, qt) in self.q.iter().enumerate() {
                let c = dot(qt, &v);
                coeffs[t] += c;
                axpy(-c, qt, &mut v);
            }
        }
        let v_norm = norm(&v);
        if v_norm <= DEGENERATE_TOL * column_norm {
            return None;
        }
        v.iter_mut().for_each(|x| *x /= v_norm);
        coeffs[self.q.len()] = v_norm;
        self.q.push(v);
        self.r.push(coeffs);
        self.q.last().map(|v| v.as_slice())
    }

    /// Coefficients minimising `‖y − A_S z‖` by back-substitution on
    /// `R z = Qᵀ y`.
    fn solve(&self, y: &[f64]) -> Vec<f64> {
        let t = self.q.len();
        let qty: Vec<f64> = self.q.iter().map(|qi| dot(qi, y)).collect();
        let mut z = vec![0.0; t];
        for i in (0..t).rev() {
            let mut s = qty[i];
            for j in i + 1..t {
                s -= self.r[j][i] * z[j];
            }
            z[i] = s / self.r[i][i];
        }
        z
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OmpOutput {
    pub estimate: Vec<f64>,
    /// Columns in the order they were selected.
    pub support: Vec<usize>,
    /// `‖r‖` before the first iteration and after each one.
    pub residual_norms: Vec<f64>,
}

impl OmpOutput {
    pub fn iterations(&self) -> usize {
        self.support.len()
    }

    pub fn residual_norm(&self) -> f64 {
        *self.residual_norms.last().expect("history starts with ‖y‖")
    }
}

/// Orthogonal matching pursuit with at most `k` iterations.
///
/// Columns are scored by `|⟨a_i, r⟩| / ‖a_i‖`, ties going to the smaller
/// index. The least-squares fit on the support is kept as an incremental QR
/// factorisation (modified Gram-Schmidt, two passes).
pub fn omp(a: &RealMatrix, y: &[f64], k: usize) -> Result<OmpOutput> {
    let (m, n) = (a.rows(), a.cols());
    if y.len() != m {
        return invalid(format!("measurement length {} does not match {m} rows", y.len()));
    }
    if k > m {
        return invalid(format!("sparsity budget {k} exceeds {m} rows"));
    }
    let col_norms: Vec<f64> = (0..n).map(|j| norm(a.column(j))).collect();
    let y_norm = norm(y);
    let mut residual = y.to_vec();
    let mut history = vec![y_norm];
    let mut selected = vec![false; n];
    let mut support = Vec::with_capacity(k);
    let mut qr = IncrementalQr::default();

    for _ in 0..k {
        if history.last().copied().unwrap_or(0.0) <= EARLY_EXIT * y_norm {
            break;
        }
        let mut best: Option<(usize, f64)> = None;
        for j in 0..n {
            if selected[j] || col_norms[j] == 0.0 {
                continue;
            }
            let score = dot(a.column(j), &residual).abs() / col_norms[j];
            if best.is_none_or(|(_, s)| score > s) {
                best = Some((j, score));
            }
        }
        let Some((j, _)) = best else { break };
        let q = qr.push(a.column(j), col_norms[j]).ok_or(Error::DegenerateSelection { column: j })?;
        let c = dot(q, &residual);
        axpy(-c, q, &mut residual);
        selected[j] = true;
        support.push(j);
        history.push(norm(&residual));
    }

    let mut estimate = vec![0.0; n];
    for (&j, v) in support.iter().zip(qr.solve(y)) {
        estimate[j] = v;
    }
    Ok(OmpOutput {
        estimate,
        support,
        residual_norms: history,
    })
}

/// `20·log10(‖x‖ / ‖x − x̂‖)`, infinite when the estimate is exact.
pub fn snr_rec(x: &[f64], x_hat: &[f64]) -> Result<f64> {
    if x.len() != x_hat.len() {
        return invalid(format!("lengths differ: {} vs {}", x.len(), x_hat.len()));
    }
    let signal = norm(x);
    if signal == 0.0 {
        return invalid("SNR of the zero signal is undefined");
    }
    let err: Vec<f64> = x.iter().zip(x_hat).map(|(a, b)| a - b).collect();
    let e = norm(&err);
    Ok(if e == 0.0 { f64::INFINITY } else { 20.0 * (signal / e).log10() })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecoveryResult {
    pub estimate: Vec<f64>,
    pub support: Vec<usize>,
    pub residual_norm: f64,
    pub iterations: usize,
    /// Set when OMP stopped on a numerically dependent column.
    pub degenerate_column: Option<usize>,
    pub snr_db: f64,
    pub success: bool,
}

/// Measures `x` with `a`, decodes with OMP at budget `k = |supp x|` and
/// scores the estimate. A degenerate selection counts as a failure.
pub fn recover(a: &RealMatrix, x: &SparseSignal) -> Result<RecoveryResult> {
    let dense = x.dense();
    let y = a.mul_vec(&dense);
    match omp(a, &y, x.support.len()) {
        Ok(out) => {
            let snr_db = snr_rec(&dense, &out.estimate)?;
            Ok(RecoveryResult {
                iterations: out.iterations(),
                residual_norm: out.residual_norm(),
                estimate: out.estimate,
                support: out.support,
                degenerate_column: None,
                snr_db,
                success: snr_db >= SUCCESS_DB,
            })
        }
        Err(Error::DegenerateSelection { column }) => Ok(RecoveryResult {
            estimate: vec![0.0; a.cols()],
            support: Vec::new(),
            residual_norm: norm(&y),
            iterations: 0,
            degenerate_column: Some(column),
            snr_db: 0.0,
            success: false,
        }),
        Err(e) => Err(e),
    }
}

/// Outcome of the exhaustive l0 decoder.
#[derive(Clone, Debug, PartialEq)]
pub enum L0Outcome {
    /// Smallest consistent support size with every consistent support of
    /// that size (lexicographic order) and the matching solutions.
    Found {
        size: usize,
        supports: Vec<Vec<usize>>,
        solutions: Vec<Vec<f64>>,
    },
    NotFound,
}

impl L0Outcome {
    pub fn is_unique(&self) -> bool {
        matches!(self, L0Outcome::Found { supports, .. } if supports.len() == 1)
    }
}

pub const ORACLE_MAX_COLS: usize = 25;
pub const ORACLE_MAX_K: usize = 5;

/// Least-squares fit of `y` on the listed columns: `(coefficients,
/// residual norm)`, or `None` if the columns are numerically dependent.
fn least_squares(a: &RealMatrix, cols: &[usize], y: &[f64]) -> Option<(Vec<f64>, f64)> {
    let mut qr = IncrementalQr::default();
    for &j in cols {
        qr.push(a.column(j), norm(a.column(j)))?;
    }
    let z = qr.solve(y);
    let mut fit = y.to_vec();
    for (&j, &v) in cols.iter().zip(&z) {
        axpy(-v, a.column(j), &mut fit);
    }
    Some((z, norm(&fit)))
}

/// Sparsest exact solutions of `A x = y` with at most `kmax` nonzeros, by
/// testing every support in order of size.
pub fn l0_oracle(a: &RealMatrix, y: &[f64], kmax: usize) -> Result<L0Outcome> {
    let n = a.cols();
    if n > ORACLE_MAX_COLS || kmax > ORACLE_MAX_K {
        return invalid(format!(
            "l0 oracle limited to n <= {ORACLE_MAX_COLS}, kmax <= {ORACLE_MAX_K}; got n={n}, kmax={kmax}"
        ));
    }
    if y.len() != a.rows() {
        return invalid("measurement length does not match the matrix");
    }
    let tol = ORACLE_TOL * norm(y).max(1.0);
    if norm(y) <= tol {
        return Ok(L0Outcome::Found {
            size: 0,
            supports: vec![Vec::new()],
            solutions: vec![vec![0.0; n]],
        });
    }
    for s in 1..=kmax.min(n) {
        let mut supports = Vec::new();
        let mut solutions = Vec::new();
        for cols in Combinations::new(n, s) {
            if let Some((z, res)) = least_squares(a, &cols, y) {
                if res <= tol {
                    let mut x = vec![0.0; n];
                    for (&j, &v) in cols.iter().zip(&z) {
                        x[j] = v;
                    }
                    supports.push(cols);
                    solutions.push(x);
                }
            }
        }
        if !supports.is_empty() {
            return Ok(L0Outcome::Found {
                size: s,
                supports,
                solutions,
            });
        }
    }
    Ok(L0Outcome::NotFound)
}

/// Tally of the l0 uniqueness battery on one matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniquenessCheck {
    pub spark: usize,
    /// Random signals decoded with 2k below the spark.
    pub unique_trials: usize,
    /// Of those, the ones not recovered uniquely and exactly.
    pub violations: usize,
    /// Sparsity of the certificate-built signal, ⌈spark/2⌉.
    pub counter_k: usize,
    /// Whether that signal failed to be the unique sparsest solution.
    pub counterexample_defeats: bool,
}

impl UniquenessCheck {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.counterexample_defeats
    }
}

/// For each k with 2k < spark(H), decodes `signals` random k-sparse signals
/// with the l0 oracle and expects the true support back uniquely. Then splits
/// a minimal dependent column set into halves of sizes ⌈σ/2⌉ and ⌊σ/2⌋ and
/// checks that the ⌈σ/2⌉-sparse half is not uniquely recovered.
pub fn check_l0_uniqueness(h: &BinaryMatrix, signals: usize, seed: u64) -> Result<UniquenessCheck> {
    let limit = (h.rows() + 1).min(h.cols()).min(crate::analysis::MAX_SEARCH_LIMIT);
    let (spark, certificate) = match exact_spark(h, limit)? {
        SearchOutcome::Found { size, certificate } => (size, certificate),
        other => return Err(Error::Unsupported(format!("spark is {other}; no dependent set to split"))),
    };
    let a = RealMatrix::from(h);
    let close = |u: &[f64], v: &[f64]| u.iter().zip(v).all(|(p, q)| (p - q).abs() <= 1e-8 * (1.0 + q.abs()));
    let mut unique_trials = 0;
    let mut violations = 0;
    for k in (1..).take_while(|k| 2 * k < spark) {
        for trial in 0..signals {
            let mut rng = substream(seed, Purpose::Battery, k as u64, trial as u64);
            let x = gen_sparse_signal(h.cols(), k, &mut rng)?;
            let dense = x.dense();
            let out = l0_oracle(&a, &a.mul_vec(&dense), k)?;
            unique_trials += 1;
            let ok = match &out {
                L0Outcome::Found {
                    supports, solutions, ..
                } => supports.len() == 1 && supports[0] == x.support && close(&solutions[0], &dense),
                L0Outcome::NotFound => false,
            };
            if !ok {
                violations += 1;
            }
        }
    }

    let v = null_vector(h, &certificate)?.ok_or_else(|| Error::Internal("certificate has no null vector".into()))?;
    let counter_k = spark.div_ceil(2);
    let mut x1 = vec![0.0; h.cols()];
    for (&j, &c) in certificate.iter().zip(&v).take(counter_k) {
        x1[j] = c as f64;
    }
    let first_half: Vec<usize> = certificate[..counter_k].to_vec();
    let out = l0_oracle(&a, &a.mul_vec(&x1), counter_k)?;
    let defeated = match &out {
        L0Outcome::Found {
            supports, solutions, ..
        } => !(supports.len() == 1 && supports[0] == first_half && close(&solutions[0], &x1)),
        L0Outcome::NotFound => true,
    };
    Ok(UniquenessCheck {
        spark,
        unique_trials,
        violations,
        counter_k,
        counterexample_defeats: defeated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn rng(trial: u64) -> ChaCha20Rng {
        substream(7, Purpose::Signal, 3, trial)
    }

    #[test]
    fn streams_are_keyed() {
        let draw = |seed, p, k, t| substream(seed, p, k, t).random::<u64>();
        assert_eq!(draw(1, Purpose::Signal, 2, 3), draw(1, Purpose::Signal, 2, 3));
        assert_ne!(draw(1, Purpose::Signal, 2, 3), draw(1, Purpose::Signal, 2, 4));
        assert_ne!(draw(1, Purpose::Signal, 2, 3), draw(1, Purpose::Matrix, 2, 3));
        assert_ne!(draw(1, Purpose::Signal, 2, 3), draw(2, Purpose::Signal, 2, 3));
    }

    #[test]
    fn signal_shape_and_determinism() {
        let x = gen_sparse_signal(10, 10, &mut rng(0)).unwrap();
        assert_eq!(x.support, (0..10).collect::<Vec<_>>());
        assert!(x.dense().iter().all(|&v| v != 0.0));
        let a = gen_sparse_signal(50, 5, &mut rng(1)).unwrap();
        let b = gen_sparse_signal(50, 5, &mut rng(1)).unwrap();
        assert_eq!(a, b);
        assert!(a.support.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(a.dense().iter().filter(|&&v| v != 0.0).count(), 5);
        assert!(gen_sparse_signal(3, 4, &mut rng(0)).is_err());
        assert!(gen_sparse_signal(3, 0, &mut rng(0)).is_err());
    }

    #[test]
    fn support_is_uniform() {
        let mut r = rng(99);
        let mut hits = [0usize; 10];
        let draws = 100_000;
        for _ in 0..draws {
            for i in gen_sparse_signal(10, 2, &mut r).unwrap().support {
                hits[i] += 1;
            }
        }
        for h in hits {
            let freq = h as f64 / draws as f64;
            assert!((freq - 0.2).abs() < 0.01, "frequency {freq}");
        }
    }

    #[test]
    fn gaussian_moments() {
        let g = gaussian_matrix(1000, 1000, &mut substream(1, Purpose::Matrix, 0, 0));
        let n = g.as_slice().len() as f64;
        let mean = g.as_slice().iter().sum::<f64>() / n;
        let var = g.as_slice().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.01, "variance {var}");
        let again = gaussian_matrix(1000, 1000, &mut substream(1, Purpose::Matrix, 0, 0));
        assert_eq!(g, again);
    }

    #[test]
    fn omp_single_atom() {
        let h = fixtures::hamming(3);
        let a = RealMatrix::from(&h);
        for j in 0..7 {
            let out = omp(&a, a.column(j), 1).unwrap();
            assert_eq!(out.support, vec![j]);
            let mut e = vec![0.0; 7];
            e[j] = 1.0;
            // weight-1 and weight-4 columns reproduce exactly; others round
            assert!(snr_rec(&e, &out.estimate).unwrap() >= 300.0);
        }
        let id = RealMatrix::from(&BinaryMatrix::identity(3));
        let out = omp(&id, id.column(2), 1).unwrap();
        assert_eq!(snr_rec(&[0.0, 0.0, 1.0], &out.estimate).unwrap(), f64::INFINITY);
    }

    #[test]
    fn omp_zero_measurement() {
        let a = RealMatrix::from(&fixtures::k4_incidence());
        let out = omp(&a, &[0.0; 4], 3).unwrap();
        assert_eq!(out.iterations(), 0);
        assert!(out.estimate.iter().all(|&v| v == 0.0));
        assert!(omp(&a, &[0.0; 4], 5).is_err());
        assert!(omp(&a, &[0.0; 3], 1).is_err());
    }

    #[test]
    fn omp_ties_go_to_smallest_index() {
        // columns 0 and 1 are identical; y is that column
        let a = RealMatrix::from_columns(2, 3, vec![1.0, 0.0, 1.0, 0.0, 0.0, 1.0]).unwrap();
        let out = omp(&a, &[2.0, 0.0], 1).unwrap();
        assert_eq!(out.support, vec![0]);
    }

    #[test]
    fn omp_flags_dependent_selection() {
        // after picking column 2 = c0 + c1 the residual still correlates with c0,
        // which is fine, but a duplicate of a selected column is dependent
        let a = RealMatrix::from_columns(2, 2, vec![1.0, 1.0, 2.0, 2.0]).unwrap();
        let err = omp(&a, &[1.0, 0.5], 2).unwrap_err();
        assert!(matches!(err, Error::DegenerateSelection { .. }));
    }

    #[test]
    fn omp_invariants_on_gaussian() {
        let a = gaussian_matrix(30, 60, &mut substream(3, Purpose::Matrix, 0, 0));
        for trial in 0..50 {
            let x = gen_sparse_signal(60, 6, &mut rng(trial)).unwrap();
            let y = a.mul_vec(&x.dense());
            let out = omp(&a, &y, 12).unwrap();
            assert!(out.residual_norms.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)));
            let r: Vec<f64> = y.iter().zip(a.mul_vec(&out.estimate)).map(|(p, q)| p - q).collect();
            assert!((norm(&r) - out.residual_norm()).abs() <= 1e-8 * norm(&y));
            for &j in &out.support {
                assert!(dot(a.column(j), &r).abs() <= 1e-8 * norm(&y));
            }
        }
    }

    #[test]
    fn omp_agrees_with_oracle_when_it_succeeds() {
        let mut agreed = 0;
        for t in 0..40u64 {
            let h = fixtures::random_binary(6, 10, &mut substream(5, Purpose::Matrix, 0, t));
            if exact_spark(&h, 7).unwrap().size().is_none_or(|s| s <= 4) {
                continue;
            }
            let a = RealMatrix::from(&h);
            for k in 1..=2 {
                let x = gen_sparse_signal(10, k, &mut substream(5, Purpose::Signal, k as u64, t)).unwrap();
                let res = recover(&a, &x).unwrap();
                if res.success {
                    let L0Outcome::Found { supports, solutions, .. } = l0_oracle(&a, &a.mul_vec(&x.dense()), k).unwrap()
                    else {
                        panic!("oracle found nothing");
                    };
                    assert_eq!(supports, vec![x.support.clone()]);
                    assert!(snr_rec(&solutions[0], &res.estimate).unwrap() >= SUCCESS_DB);
                    agreed += 1;
                }
            }
        }
        assert!(agreed > 0);
    }

    #[test]
    fn snr_boundaries() {
        let x = [3.0, -4.0];
        assert_eq!(snr_rec(&x, &x).unwrap(), f64::INFINITY);
        assert_eq!(snr_rec(&x, &[0.0, 0.0]).unwrap(), 0.0);
        let s = snr_rec(&[100000.0], &[99999.0]).unwrap();
        assert_eq!(s, 100.0);
        assert!(s >= SUCCESS_DB);
        assert!(snr_rec(&[0.0], &[0.0]).is_err());
        assert!(snr_rec(&[1.0], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn oracle_basics() {
        let h = fixtures::hamming(3);
        let a = RealMatrix::from(&h);
        let out = l0_oracle(&a, a.column(4), 2).unwrap();
        assert!(out.is_unique());
        assert!(matches!(&out, L0Outcome::Found { size: 1, supports, .. } if supports == &vec![vec![4]]));
        // a 2-sparse signal of a spark-3 matrix can be explained by one column
        let y: Vec<f64> = a.column(0).iter().zip(a.column(1)).map(|(p, q)| p + q).collect();
        assert!(matches!(l0_oracle(&a, &y, 2).unwrap(), L0Outcome::Found { size: 1, .. }));
        // identity: y with three nonzeros needs three columns
        let id = RealMatrix::from(&BinaryMatrix::identity(4));
        assert_eq!(l0_oracle(&id, &[1.0, 1.0, 1.0, 0.0], 2).unwrap(), L0Outcome::NotFound);
        assert!(l0_oracle(&id, &[0.0; 4], 1).unwrap().is_unique());
        assert!(l0_oracle(&a, a.column(0), 6).is_err());
    }

    #[test]
    fn uniqueness_battery_on_fixtures() {
        for h in [fixtures::k4_incidence(), fixtures::hamming(3)] {
            let c = check_l0_uniqueness(&h, 20, 11).unwrap();
            assert!(c.passed(), "{c:?}");
        }
        let c = check_l0_uniqueness(&fixtures::k4_incidence(), 5, 1).unwrap();
        assert_eq!((c.spark, c.counter_k, c.unique_trials), (4, 2, 5));
    }
}
