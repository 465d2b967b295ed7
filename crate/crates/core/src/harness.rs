//! Monte-Carlo recovery experiments.
//!
//! Each trial draws its signal from its own keyed substream and results are
//! folded in trial order, so a curve depends only on the configuration and
//! seed, never on the worker count.

use std::fmt::Write as _;
use std::path::PathBuf;

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::incidence::{BinaryMatrix, BuildParams};
use crate::recovery::{gaussian_matrix, gen_sparse_signal, recover, substream, Purpose, RealMatrix};

pub const DEFAULT_TRIALS: usize = 500;
pub const DEFAULT_SEED: u64 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatrixSource {
    /// A BMM file.
    File(PathBuf),
    Geometry(BuildParams),
    /// `rows × cols` standard normal entries drawn from the master seed.
    Gaussian { rows: usize, cols: usize },
}

impl MatrixSource {
    pub fn load(&self, seed: u64) -> Result<RealMatrix> {
        match self {
            MatrixSource::File(path) => Ok(RealMatrix::from(&BinaryMatrix::read_bmm(path)?)),
            MatrixSource::Geometry(params) => Ok(RealMatrix::from(&params.build()?)),
            MatrixSource::Gaussian { rows, cols } => {
                if *rows == 0 || *cols == 0 {
                    return invalid("Gaussian matrix needs positive dimensions");
                }
                Ok(gaussian_matrix(*rows, *cols, &mut substream(seed, Purpose::Matrix, 0, 0)))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub source: MatrixSource,
    pub k_min: usize,
    pub k_max: usize,
    pub k_step: usize,
    pub trials: usize,
    pub seed: u64,
    /// Worker threads; 0 uses all available cores.
    pub workers: usize,
}

impl ExperimentConfig {
    pub fn new(source: MatrixSource, k_min: usize, k_max: usize) -> Self {
        ExperimentConfig {
            source,
            k_min,
            k_max,
            k_step: 1,
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            workers: 0,
        }
    }

    pub fn k_grid(&self) -> Vec<usize> {
        (self.k_min..=self.k_max).step_by(self.k_step.max(1)).collect()
    }

    fn validate(&self, rows: usize, cols: usize) -> Result<()> {
        if self.k_min == 0 || self.k_step == 0 || self.trials == 0 {
            return invalid("k_min, k_step and trials must be at least 1");
        }
        if self.k_min > self.k_max {
            return invalid(format!("k_min={} exceeds k_max={}", self.k_min, self.k_max));
        }
        if self.k_max > rows || self.k_max > cols {
            return invalid(format!("k_max={} exceeds the {rows}x{cols} matrix", self.k_max));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CurvePoint {
    pub k: usize,
    pub trials: usize,
    pub successes: usize,
}

impl CurvePoint {
    /// Success rate in hundredths of a percent, rounded half up.
    pub fn basis_points(&self) -> u64 {
        let (s, t) = (self.successes as u64, self.trials as u64);
        (20_000 * s + t) / (2 * t)
    }

    /// Success rate with exactly two decimals.
    pub fn percent(&self) -> String {
        let bp = self.basis_points();
        format!("{}.{:02}", bp / 100, bp % 100)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoveryCurve {
    pub points: Vec<CurvePoint>,
}

impl RecoveryCurve {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,trials,successes,percent\n");
        for p in &self.points {
            writeln!(s, "{},{},{},{}", p.k, p.trials, p.successes, p.percent()).unwrap();
        }
        s
    }

    /// Two-column `k percent` listing for plotting tools.
    pub fn to_dat(&self) -> String {
        let mut s = String::from("# k percent\n");
        for p in &self.points {
            writeln!(s, "{} {}", p.k, p.percent()).unwrap();
        }
        s
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))
}

/// Runs the experiment on an already loaded matrix.
pub fn run_on_matrix(a: &RealMatrix, cfg: &ExperimentConfig) -> Result<RecoveryCurve> {
    cfg.validate(a.rows(), a.cols())?;
    let n = a.cols();
    let run = || -> Result<RecoveryCurve> {
        let mut points = Vec::new();
        for k in cfg.k_grid() {
            let outcomes: Vec<bool> = (0..cfg.trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = substream(cfg.seed, Purpose::Signal, k as u64, t as u64);
                    let x = gen_sparse_signal(n, k, &mut rng)?;
                    Ok(recover(a, &x)?.success)
                })
                .collect::<Result<_>>()?;
            points.push(CurvePoint {
                k,
                trials: cfg.trials,
                successes: outcomes.iter().filter(|&&ok| ok).count(),
            });
        }
        Ok(RecoveryCurve { points })
    };
    pool(cfg.workers)?.install(run)
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RecoveryCurve> {
    run_on_matrix(&cfg.source.load(cfg.seed)?, cfg)
}

/// Proposed and baseline curves on a shared k-grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairedCurve {
    pub proposed: RecoveryCurve,
    pub gaussian: RecoveryCurve,
}

impl PairedCurve {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,percent_proposed,percent_gaussian\n");
        for (p, g) in self.proposed.points.iter().zip(&self.gaussian.points) {
            writeln!(s, "{},{},{}", p.k, p.percent(), g.percent()).unwrap();
        }
        s
    }

    /// Grid points where the proposed curve is strictly higher.
    pub fn wins(&self) -> usize {
        self.pairs().filter(|(p, g)| p.successes * g.trials > g.successes * p.trials).count()
    }

    /// Largest shortfall of the proposed curve, in percentage points.
    pub fn worst_deficit(&self) -> f64 {
        self.pairs()
            .map(|(p, g)| (g.basis_points() as f64 - p.basis_points() as f64) / 100.0)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn pairs(&self) -> impl Iterator<Item = (&CurvePoint, &CurvePoint)> {
        self.proposed.points.iter().zip(&self.gaussian.points)
    }
}

/// Runs both configurations. They must describe matrices of the same size
/// and the same k-grid; the signals of trial `t` at sparsity `k` coincide
/// when the seeds do.
pub fn compare(proposed: &ExperimentConfig, gaussian: &ExperimentConfig) -> Result<PairedCurve> {
    let a = proposed.source.load(proposed.seed)?;
    let b = gaussian.source.load(gaussian.seed)?;
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return invalid(format!(
            "matrix sizes differ: {}x{} vs {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        ));
    }
    if proposed.k_grid() != gaussian.k_grid() {
        return invalid("k-grids differ");
    }
    Ok(PairedCurve {
        proposed: run_on_matrix(&a, proposed)?,
        gaussian: run_on_matrix(&b, gaussian)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn percent_rounding() {
        let p = |successes, trials| CurvePoint { k: 1, trials, successes }.percent();
        assert_eq!(p(500, 500), "100.00");
        assert_eq!(p(0, 500), "0.00");
        assert_eq!(p(1, 3), "33.33");
        assert_eq!(p(2, 3), "66.67");
        assert_eq!(p(1, 8), "12.50");
        assert_eq!(p(1, 80000), "0.00");
        assert_eq!(p(1, 20000), "0.01");
    }

    #[test]
    fn csv_layout() {
        let curve = RecoveryCurve {
            points: vec![CurvePoint { k: 2, trials: 4, successes: 3 }],
        };
        assert_eq!(curve.to_csv(), "k,trials,successes,percent\n2,4,3,75.00\n");
        assert_eq!(curve.to_dat(), "# k percent\n2 75.00\n");
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.bmm");
        fixtures::hamming(4).write_bmm(&path).unwrap();
        let mut cfg = ExperimentConfig::new(MatrixSource::File(path), 1, 3);
        cfg.trials = 40;
        cfg.workers = 1;
        let one = run_experiment(&cfg).unwrap();
        cfg.workers = 4;
        assert_eq!(run_experiment(&cfg).unwrap(), one);
        assert_eq!(one.points.len(), 3);
        assert_eq!(one.points[0].successes, 40);
    }

    #[test]
    fn config_validation() {
        let src = MatrixSource::Gaussian { rows: 4, cols: 8 };
        assert!(run_experiment(&ExperimentConfig::new(src.clone(), 1, 5)).is_err());
        assert!(run_experiment(&ExperimentConfig::new(src.clone(), 0, 2)).is_err());
        assert!(run_experiment(&ExperimentConfig::new(src.clone(), 3, 2)).is_err());
        let mut cfg = ExperimentConfig::new(src, 1, 4);
        cfg.k_step = 2;
        cfg.trials = 5;
        assert_eq!(cfg.k_grid(), vec![1, 3]);
        assert_eq!(run_experiment(&cfg).unwrap().points.len(), 2);
        let missing = ExperimentConfig::new(MatrixSource::File("/nonexistent/h.bmm".into()), 1, 1);
        assert!(matches!(run_experiment(&missing), Err(Error::Io(_))));
    }

    #[test]
    fn compare_requires_matching_shapes() {
        let a = ExperimentConfig::new(MatrixSource::Gaussian { rows: 6, cols: 12 }, 1, 2);
        let b = ExperimentConfig::new(MatrixSource::Gaussian { rows: 6, cols: 10 }, 1, 2);
        assert!(compare(&a, &b).is_err());
        let mut c = a.clone();
        c.k_max = 1;
        assert!(compare(&a, &c).is_err());
        let mut small = a.clone();
        small.trials = 10;
        let paired = compare(&small, &small).unwrap();
        assert_eq!(paired.proposed, paired.gaussian);
        assert_eq!(paired.wins(), 0);
        assert!(paired.to_csv().starts_with("k,percent_proposed,percent_gaussian\n"));
    }
}
