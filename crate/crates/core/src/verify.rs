//! Named self-check batteries, run from the command line.

use std::fmt;

use num_rational::Ratio;

use crate::analysis::{
    bound_chain, bound_chain_grid, column_stats, coherence, exact_spark, girth, spark_lower_bounds, stopping_distance,
};
use crate::error::{invalid, Result};
use crate::fixtures;
use crate::geometry::{Geometry, GeometryKind};
use crate::gf::{is_irreducible, Field};
use crate::incidence::{build_incidence, select_row_bundles, Incidence, MatrixType};
use crate::recovery::{check_l0_uniqueness, substream, Purpose};

pub const SUITES: [&str; 5] = ["fields", "small-geometries", "bounds-chain", "oracle", "paper-values"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub observed: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{tag} {}: {}", c.name, c.observed)?;
        }
        writeln!(
            f,
            "{}: {} checks, {} failed",
            self.suite,
            self.checks.len(),
            self.failures()
        )
    }
}

#[derive(Default)]
struct Recorder {
    checks: Vec<Check>,
}

impl Recorder {
    fn check(&mut self, name: impl Into<String>, passed: bool, observed: impl fmt::Display) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            observed: observed.to_string(),
        });
    }

    /// Records an equality check; an error counts as a failure.
    fn expect<T: PartialEq + fmt::Debug>(&mut self, name: impl Into<String>, got: Result<T>, want: T) {
        match got {
            Ok(v) => {
                let passed = v == want;
                self.check(name, passed, format!("{v:?} (expected {want:?})"));
            }
            Err(e) => self.check(name, false, e),
        }
    }
}

pub fn run_suite(name: &str) -> Result<SuiteReport> {
    let mut rec = Recorder::default();
    match name {
        "fields" => fields(&mut rec),
        "small-geometries" => small_geometries(&mut rec),
        "bounds-chain" => bounds_chain(&mut rec),
        "oracle" => oracle(&mut rec),
        "paper-values" => reference_values(&mut rec),
        other => return invalid(format!("unknown suite {other:?}; expected one of {}", SUITES.join(", "))),
    }
    Ok(SuiteReport {
        suite: name.to_string(),
        checks: rec.checks,
    })
}

fn fields(rec: &mut Recorder) {
    for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32, 49, 64, 81, 125, 128, 243, 256, 1024] {
        let f = match Field::with_order(q) {
            Ok(f) => f,
            Err(e) => {
                rec.check(format!("GF({q}) construction"), false, e);
                continue;
            }
        };
        let elems = f.elements();
        let mut bad = 0usize;
        // exhaustive triples for tiny fields, a fixed stride otherwise
        let stride = if q <= 16 { 1 } else { (q as usize / 13).max(1) };
        for a in elems.iter().step_by(stride) {
            for b in elems.iter().step_by(stride) {
                if f.add(*a, *b) != f.add(*b, *a) || f.mul(*a, *b) != f.mul(*b, *a) {
                    bad += 1;
                }
                for c in elems.iter().step_by(stride * 3) {
                    if f.mul(*a, f.add(*b, *c)) != f.add(f.mul(*a, *b), f.mul(*a, *c))
                        || f.mul(f.mul(*a, *b), *c) != f.mul(*a, f.mul(*b, *c))
                        || f.add(f.add(*a, *b), *c) != f.add(*a, f.add(*b, *c))
                    {
                        bad += 1;
                    }
                }
            }
        }
        for &a in &elems[1..] {
            let inverse_ok = f.inv(a).is_ok_and(|i| f.mul(a, i) == f.one());
            if !inverse_ok || f.pow(a, q - 1) != f.one() || f.add(a, f.neg(a)) != f.zero() {
                bad += 1;
            }
        }
        let irreducible = is_irreducible(f.modulus(), f.characteristic());
        rec.check(
            format!("GF({q}) axioms, inverses, Fermat, irreducible modulus"),
            bad == 0 && irreducible,
            format!("{bad} violations, modulus {:?}", f.modulus()),
        );
    }
}

fn small_geometries(rec: &mut Recorder) {
    use GeometryKind::*;
    for kind in [Euclidean, Projective] {
        for r in 2..=4usize {
            for q in [2u64, 3, 4, 5, 7, 8] {
                let Ok(g) = Geometry::new(kind, r, q) else { continue };
                let label = format!("{}({r},{q})", kind.short_name().to_uppercase());
                let mut counts_ok = true;
                let mut observed = Vec::new();
                for mu in 0..r {
                    let expected = g.num_flats(mu).unwrap_or(0);
                    if expected > 400_000 {
                        continue;
                    }
                    match g.flats(mu) {
                        Ok(fs) => {
                            counts_ok &= fs.len() as u128 == expected;
                            if kind == Euclidean {
                                let per_bundle = (q as usize).pow((r - mu) as u32);
                                counts_ok &= fs.bundles().iter().all(|b| b.members.len() == per_bundle);
                            }
                            observed.push(format!("{mu}:{}", fs.len()));
                        }
                        Err(_) => counts_ok = false,
                    }
                }
                rec.check(format!("{label} flat counts"), counts_ok, observed.join(" "));
                for mu2 in 1..r {
                    for mu1 in 0..mu2 {
                        let (j, n) = (g.num_flats(mu2).unwrap_or(0), g.num_flats(mu1).unwrap_or(0));
                        if j * n > 2_000_000 {
                            continue;
                        }
                        let want = g
                            .count_a(mu2, mu1)
                            .and_then(|a| Ok((a as usize, g.count_n(mu2, mu1)? as usize)));
                        let got = build_incidence(&g, mu1, mu2, MatrixType::I).map(|h| h.regularity());
                        match (got, want) {
                            (Ok(reg), Ok(want)) => rec.check(
                                format!("{label} mu1={mu1} mu2={mu2} regularity"),
                                reg == Some(want),
                                format!("{reg:?} (expected {want:?})"),
                            ),
                            (Err(e), _) | (_, Err(e)) => {
                                rec.check(format!("{label} mu1={mu1} mu2={mu2} regularity"), false, e)
                            }
                        }
                    }
                }
            }
        }
    }
}

fn bounds_chain(rec: &mut Recorder) {
    match bound_chain_grid(&[2, 3, 4], &[2, 3, 4, 5, 7, 8]) {
        Ok(grid) => {
            for c in grid {
                let equal = c.geometric == c.two_gamma_lambda;
                rec.check(
                    c.to_string(),
                    c.holds(),
                    format!("first two equal: {equal}, expected equal: {}", c.equality_expected),
                );
            }
        }
        Err(e) => rec.check("chain grid", false, e),
    }
}

/// Number of random 6×10 matrices in the l0 battery.
pub const ORACLE_MATRICES: usize = 100;
/// Random signals per sparsity level in the l0 battery.
pub const ORACLE_SIGNALS: usize = 20;

fn oracle(rec: &mut Recorder) {
    let mut cases = vec![
        ("K4 incidence".to_string(), fixtures::k4_incidence()),
        ("Hamming 3x7".to_string(), fixtures::hamming(3)),
    ];
    for t in 0..ORACLE_MATRICES {
        let h = fixtures::random_binary(6, 10, &mut substream(DEFAULT_ORACLE_SEED, Purpose::Matrix, 6, t as u64));
        cases.push((format!("random 6x10 #{t}"), h));
    }
    for (name, h) in cases {
        match check_l0_uniqueness(&h, ORACLE_SIGNALS, DEFAULT_ORACLE_SEED) {
            Ok(c) => rec.check(
                name,
                c.passed(),
                format!(
                    "spark={} unique {}/{} counterexample(k={}) defeats={}",
                    c.spark,
                    c.unique_trials - c.violations,
                    c.unique_trials,
                    c.counter_k,
                    c.counterexample_defeats
                ),
            ),
            Err(e) => rec.check(name, false, e),
        }
    }
}

const DEFAULT_ORACLE_SEED: u64 = 2024;

fn reference_values(rec: &mut Recorder) {
    use GeometryKind::*;
    let geom = |kind, r, q| Geometry::new(kind, r, q);

    for (kind, r, q, mu, want) in [
        (Euclidean, 4, 2, 3, 30u128),
        (Euclidean, 4, 2, 1, 120),
        (Projective, 3, 4, 0, 85),
        (Projective, 3, 4, 1, 357),
        (Euclidean, 3, 7, 0, 343),
        (Euclidean, 3, 7, 1, 2793),
        (Euclidean, 3, 8, 2, 584),
        (Euclidean, 3, 8, 1, 4672),
        (Euclidean, 2, 16, 0, 256),
        (Euclidean, 2, 16, 1, 272),
        (Euclidean, 2, 32, 0, 1024),
        (Euclidean, 2, 32, 1, 1056),
    ] {
        let name = format!("{}({r},{q}) {mu}-flats", kind.short_name().to_uppercase());
        rec.expect(name, geom(kind, r, q).and_then(|g| g.flats(mu)).map(|f| f.len() as u128), want);
    }
    for (q, bundles) in [(16u64, 17usize), (32, 33)] {
        let got = geom(Euclidean, 2, q).and_then(|g| g.parallel_bundles(1)).map(|b| {
            let sizes: Vec<usize> = b.iter().map(|x| x.members.len()).collect();
            (b.len(), sizes.iter().all(|&s| s == q as usize))
        });
        rec.expect(format!("EG(2,{q}) line bundles"), got, (bundles, true));
    }

    // (kind, r, q, mu1, mu2, type, (γ, ρ), girth, geometric bound)
    let families = [
        (Euclidean, 4, 2, 1, 3, MatrixType::I, (7, 28), 4, 6),
        (Projective, 3, 4, 0, 1, MatrixType::II, (5, 21), 6, 10),
        (Euclidean, 3, 7, 0, 1, MatrixType::II, (7, 57), 6, 14),
        (Euclidean, 3, 8, 1, 2, MatrixType::I, (9, 72), 6, 18),
    ];
    for (kind, r, q, mu1, mu2, ty, reg, want_girth, bound) in families {
        let label = format!(
            "{}({r},{q}) mu1={mu1} mu2={mu2} type {}",
            kind.short_name().to_uppercase(),
            if ty == MatrixType::I { "I" } else { "II" }
        );
        let h = match geom(kind, r, q).and_then(|g| build_incidence(&g, mu1, mu2, ty)) {
            Ok(h) => h,
            Err(e) => {
                rec.check(label, false, e);
                continue;
            }
        };
        rec.expect(format!("{label} regularity"), Ok(h.regularity()), Some(reg));
        rec.expect(format!("{label} girth"), Ok(girth(&h)), Some(want_girth));
        let geometric = spark_lower_bounds(&h).map(|b| b.type_i.or(b.type_ii));
        rec.expect(format!("{label} geometric spark bound"), geometric, Some(bound));
    }
    rec.expect(
        "EG(4,2) mu1=1 mu2=3 type I lambda",
        geom(Euclidean, 4, 2)
            .and_then(|g| build_incidence(&g, 1, 3, MatrixType::I))
            .map(|h| column_stats(&h).lambda),
        3,
    );

    let eg16 = geom(Euclidean, 2, 16).and_then(|g| build_incidence(&g, 0, 1, MatrixType::I));
    for count in 4..=7 {
        let got = eg16.as_ref().map_err(clone_err).and_then(|h| {
            let s = select_row_bundles(h, count)?;
            Ok((s.rows(), s.cols(), s.column_weights().iter().all(|&w| w == count)))
        });
        rec.expect(format!("EG(2,16) first {count} bundles"), got, (16 * count, 256, true));
    }
    let eg32 = geom(Euclidean, 2, 32).and_then(|g| Incidence::new(g, 0, 1));
    for j in [0usize, 4, 12] {
        let got = eg32.as_ref().map_err(clone_err).and_then(|inc| {
            let h = select_row_bundles(&inc.matrix(MatrixType::I)?, 10)?;
            let d = inc.delete_covered_columns(&h, 10, j)?;
            Ok((d.rows(), d.cols(), d.column_weights().iter().all(|&w| w == 10)))
        });
        rec.expect(format!("EG(2,32) 10 bundles, {j} lines deleted"), got, (320, 1024 - 32 * j, true));
    }

    let k4 = fixtures::k4_incidence();
    rec.expect(
        "K4 incidence (gamma, lambda)",
        Ok(column_stats(&k4)).map(|s| (s.gamma, s.lambda)),
        (2, 1),
    );
    rec.expect("K4 incidence spark", exact_spark(&k4, 6).map(|o| o.size()), Some(4));
    rec.expect("K4 incidence stopping distance", stopping_distance(&k4, 6).map(|o| o.size()), Some(3));
    let ham = fixtures::hamming(3);
    rec.expect("Hamming 3x7 spark", exact_spark(&ham, 7).map(|o| o.size()), Some(3));
    rec.expect("Hamming 3x7 stopping distance", stopping_distance(&ham, 7).map(|o| o.size()), Some(3));
    let mu = coherence(&ham);
    rec.expect("Hamming 3x7 coherence 2/sqrt(6)", Ok((mu.inner, mu.weight_i * mu.weight_j)), (2, 6));
    rec.expect(
        "EG(4,2) type I chain (6, 14/3, 4)",
        bound_chain(Euclidean, 2, 4, 1, 3, MatrixType::I).map(|c| (c.geometric, c.two_gamma_lambda, c.baseline)),
        (Ratio::from_integer(6), Ratio::new(14, 3), Ratio::from_integer(4)),
    );
}

fn clone_err(e: &crate::Error) -> crate::Error {
    crate::Error::Internal(e.to_string())
}
