//! `fgsense`: build, analyse and benchmark finite-geometry measurement
//! matrices.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fgsense_core::analysis::{analyze, AnalysisOptions};
use fgsense_core::geometry::{Geometry, GeometryKind};
use fgsense_core::gf::Field;
use fgsense_core::harness::{compare, run_experiment, ExperimentConfig, MatrixSource, DEFAULT_SEED, DEFAULT_TRIALS};
use fgsense_core::incidence::{BinaryMatrix, BuildParams, MatrixType};
use fgsense_core::verify::{run_suite, SUITES};
use fgsense_core::Error;

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "fgsense", version, about = "Finite-geometry compressed-sensing matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Describe GF(q): modulus and optionally the operation tables.
    Field {
        #[arg(long)]
        q: u64,
        /// Print addition and multiplication tables (element codes).
        #[arg(long)]
        tables: bool,
    },
    /// Count flats of EG(r,q) or PG(r,q).
    Count {
        #[arg(long, value_parser = parse_kind)]
        geom: GeometryKind,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        q: u64,
        /// Also report N(mu2,mu1) and A(mu2,mu1).
        #[arg(long, requires = "mu2")]
        mu1: Option<usize>,
        #[arg(long, requires = "mu1")]
        mu2: Option<usize>,
    },
    /// Build an incidence matrix and write it as BMM.
    Build {
        #[command(flatten)]
        geometry: GeometryArgs,
        #[arg(short = 'o', long)]
        output: PathBuf,
    },
    /// Print structural statistics and spark bounds as key=value lines.
    Analyze {
        /// BMM file; omit to build from geometry flags instead.
        file: Option<PathBuf>,
        #[command(flatten)]
        geometry: GeometryArgs,
        #[arg(long)]
        exact_spark_limit: Option<usize>,
        #[arg(long)]
        stopping_limit: Option<usize>,
    },
    /// Monte-Carlo OMP recovery curve.
    Simulate {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Also write a two-column `k percent` file.
        #[arg(long)]
        dat: Option<PathBuf>,
    },
    /// Recovery curve of a matrix next to a Gaussian matrix of the same size.
    Compare {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run a named self-check battery.
    Verify {
        #[arg(value_parser = SUITES)]
        suite: String,
    },
}

#[derive(Args, Clone)]
struct GeometryArgs {
    #[arg(long, value_parser = parse_kind)]
    geom: Option<GeometryKind>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    mu1: Option<usize>,
    #[arg(long)]
    mu2: Option<usize>,
    /// 1: mu2-flats over mu1-flats; 2: the transpose.
    #[arg(long = "type", value_parser = parse_type, default_value = "1")]
    matrix_type: MatrixType,
    /// Keep only the first C parallel bundles of rows (EG).
    #[arg(long)]
    bundles: Option<usize>,
    /// Delete the points on the first J flats of the next bundle.
    #[arg(long)]
    delete_lines: Option<usize>,
}

impl GeometryArgs {
    fn given(&self) -> bool {
        self.geom.is_some() || self.r.is_some() || self.q.is_some() || self.mu1.is_some() || self.mu2.is_some()
    }

    fn params(&self) -> Result<BuildParams, Error> {
        let missing = |flag: &str| Error::InvalidArgument(format!("missing --{flag}"));
        let mut p = BuildParams::new(
            self.geom.ok_or_else(|| missing("geom"))?,
            self.r.ok_or_else(|| missing("r"))?,
            self.q.ok_or_else(|| missing("q"))?,
            self.mu1.ok_or_else(|| missing("mu1"))?,
            self.mu2.ok_or_else(|| missing("mu2"))?,
            self.matrix_type,
        );
        p.bundles = self.bundles;
        p.delete_lines = self.delete_lines;
        Ok(p)
    }
}

#[derive(Args, Clone)]
struct SourceArgs {
    /// BMM file.
    #[arg(long, conflicts_with = "gaussian")]
    matrix: Option<PathBuf>,
    /// Gaussian matrix, given as MxN.
    #[arg(long, value_parser = parse_dims)]
    gaussian: Option<(usize, usize)>,
    #[command(flatten)]
    geometry: GeometryArgs,
}

impl SourceArgs {
    fn source(&self) -> Result<MatrixSource, Error> {
        let chosen = [self.matrix.is_some(), self.gaussian.is_some(), self.geometry.given()];
        if chosen.iter().filter(|&&c| c).count() != 1 {
            return Err(Error::InvalidArgument(
                "give exactly one of --matrix, --gaussian or the geometry flags".into(),
            ));
        }
        Ok(if let Some(path) = &self.matrix {
            MatrixSource::File(path.clone())
        } else if let Some((rows, cols)) = self.gaussian {
            MatrixSource::Gaussian { rows, cols }
        } else {
            MatrixSource::Geometry(self.geometry.params()?)
        })
    }
}

#[derive(Args, Clone)]
struct RunArgs {
    #[arg(long, default_value_t = 1)]
    kmin: usize,
    #[arg(long)]
    kmax: usize,
    #[arg(long, default_value_t = 1)]
    kstep: usize,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads (0 = all cores); never changes the output.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// CSV output path; standard output if omitted.
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

impl RunArgs {
    fn config(&self, source: MatrixSource) -> ExperimentConfig {
        ExperimentConfig {
            source,
            k_min: self.kmin,
            k_max: self.kmax,
            k_step: self.kstep,
            trials: self.trials,
            seed: self.seed,
            workers: self.workers,
        }
    }
}

fn parse_kind(s: &str) -> Result<GeometryKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_type(s: &str) -> Result<MatrixType, String> {
    match s {
        "1" | "I" => Ok(MatrixType::I),
        "2" | "II" => Ok(MatrixType::II),
        _ => Err(format!("matrix type must be 1 or 2, got {s:?}")),
    }
}

fn parse_dims(s: &str) -> Result<(usize, usize), String> {
    let (m, n) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected MxN, got {s:?}"))?;
    let parse = |v: &str| v.parse::<usize>().map_err(|e| format!("{v:?}: {e}"));
    Ok((parse(m)?, parse(n)?))
}

enum Failure {
    Core(Error),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Field { q, tables } => {
            let f = Field::with_order(q)?;
            println!("order={}", f.order());
            println!("characteristic={}", f.characteristic());
            println!("degree={}", f.degree());
            let modulus: Vec<String> = f.modulus().iter().map(|c| c.to_string()).collect();
            println!("modulus={}", modulus.join(","));
            if tables {
                for (name, op) in [("add", 0), ("mul", 1)] {
                    println!("{name}:");
                    for a in f.elements() {
                        let row: Vec<String> = f
                            .elements()
                            .into_iter()
                            .map(|b| if op == 0 { f.add(a, b) } else { f.mul(a, b) }.code().to_string())
                            .collect();
                        println!("{}", row.join(" "));
                    }
                }
            }
        }
        Command::Count { geom, r, q, mu1, mu2 } => {
            let g = Geometry::new(geom, r, q)?;
            for mu in 0..=r {
                println!("N({r},{mu})={}", g.num_flats(mu)?);
            }
            if let (Some(mu1), Some(mu2)) = (mu1, mu2) {
                println!("N({mu2},{mu1})={}", g.count_n(mu2, mu1)?);
                println!("A({mu2},{mu1})={}", g.count_a(mu2, mu1)?);
            }
        }
        Command::Build { geometry, output } => {
            let h = geometry.params()?.build()?;
            h.write_bmm(&output)?;
            eprintln!("wrote {}x{} matrix to {}", h.rows(), h.cols(), output.display());
        }
        Command::Analyze {
            file,
            geometry,
            exact_spark_limit,
            stopping_limit,
        } => {
            let h = match (&file, geometry.given()) {
                (Some(path), false) => BinaryMatrix::read_bmm(path)?,
                (None, true) => geometry.params()?.build()?,
                _ => return Err(Error::InvalidArgument("give either a BMM file or the geometry flags".into()).into()),
            };
            let options = AnalysisOptions {
                spark_limit: exact_spark_limit,
                stopping_limit,
            };
            print!("{}", analyze(&h, options)?);
        }
        Command::Simulate { source, run, dat } => {
            let curve = run_experiment(&run.config(source.source()?))?;
            write_output(run.output.as_deref(), &curve.to_csv())?;
            if let Some(path) = dat {
                std::fs::write(path, curve.to_dat()).map_err(Error::from)?;
            }
        }
        Command::Compare { source, run } => {
            let proposed = run.config(source.source()?);
            let probe = proposed.source.load(proposed.seed)?;
            let gaussian = run.config(MatrixSource::Gaussian {
                rows: probe.rows(),
                cols: probe.cols(),
            });
            let paired = compare(&proposed, &gaussian)?;
            write_output(run.output.as_deref(), &paired.to_csv())?;
        }
        Command::Verify { suite } => {
            let report = run_suite(&suite)?;
            print!("{report}");
            if !report.passed() {
                return Err(Failure::Verify);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(EXIT_VERIFY),
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Io(_) | Error::Parse { .. } => EXIT_IO,
                Error::Internal(_) => EXIT_VERIFY,
                _ => EXIT_USAGE,
            })
        }
    }
}
