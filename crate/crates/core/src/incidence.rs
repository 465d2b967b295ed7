//! Finite-geometry measurement matrices.
//!
//! The type-I matrix `H` has one row per μ2-flat and one column per μ1-flat,
//! with a 1 wherever the row flat contains the column flat. The type-II
//! matrix is its transpose. In EG the rows come grouped by parallel bundle, so
//! keeping the first few bundles gives column-regular submatrices, and
//! deleting the points covered by lines of an unused bundle shortens the
//! matrix while keeping it regular.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{invalid, Error, Result};
use crate::geometry::{n_count, FlatSet, Geometry, GeometryKind, ParallelBundle};

/// Upper limit on `rows * cols` for constructed matrices.
pub const MAX_BITS: u128 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MatrixType {
    /// μ2-flats over μ1-flats.
    I,
    /// μ1-flats over μ2-flats.
    II,
}

impl MatrixType {
    pub fn toggled(self) -> MatrixType {
        match self {
            MatrixType::I => MatrixType::II,
            MatrixType::II => MatrixType::I,
        }
    }
}

/// How a matrix was obtained from a geometry. Bundle and deletion records
/// always refer to the type-I orientation `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction {
    pub kind: GeometryKind,
    pub r: usize,
    pub q: u64,
    pub mu1: usize,
    pub mu2: usize,
    pub matrix_type: MatrixType,
    /// Rows per parallel bundle of μ2-flats (EG only).
    pub bundle_size: Option<usize>,
    /// Row bundles of `H` still present, in order; `None` means every row.
    pub selected_bundles: Option<Vec<usize>>,
    /// μ1-flat indices whose columns of `H` were removed.
    pub deleted_columns: Vec<usize>,
    /// μ2-flat index behind each remaining row of `H`.
    pub mu2_flats: Vec<usize>,
    /// μ1-flat index behind each remaining column of `H`.
    pub mu1_flats: Vec<usize>,
}

impl Construction {
    /// True when no row of the current matrix has been punctured away, which
    /// is what the geometric spark bounds require.
    pub fn rows_complete(&self) -> bool {
        match self.matrix_type {
            MatrixType::I => self.selected_bundles.is_none(),
            MatrixType::II => self.deleted_columns.is_empty(),
        }
    }
}

/// Dense 0/1 matrix, row-major bit-packed, with no all-zero column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    bits: Vec<u64>,
    meta: Option<Construction>,
}

impl BinaryMatrix {
    /// Builds a matrix from the column indices set in each row.
    pub fn from_row_supports(rows: usize, cols: usize, supports: &[Vec<usize>]) -> Result<BinaryMatrix> {
        if supports.len() != rows {
            return invalid(format!("expected {rows} rows, got {}", supports.len()));
        }
        let mut m = BinaryMatrix::zeroed(rows, cols);
        for (i, support) in supports.iter().enumerate() {
            for &j in support {
                if j >= cols {
                    return invalid(format!("column {j} out of range in row {i}"));
                }
                m.set(i, j);
            }
        }
        m.check_columns()?;
        Ok(m)
    }

    /// Builds a matrix from rows of 0/1 values.
    pub fn from_dense(rows: &[Vec<u8>]) -> Result<BinaryMatrix> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = BinaryMatrix::zeroed(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return invalid(format!("row {i} has length {}, expected {cols}", row.len()));
            }
            for (j, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 => m.set(i, j),
                    _ => return invalid(format!("entry ({i},{j}) is {v}, not 0 or 1")),
                }
            }
        }
        m.check_columns()?;
        Ok(m)
    }

    pub fn identity(n: usize) -> BinaryMatrix {
        let mut m = BinaryMatrix::zeroed(n, n);
        for i in 0..n {
            m.set(i, i);
        }
        m
    }

    fn zeroed(rows: usize, cols: usize) -> BinaryMatrix {
        let words = cols.div_ceil(64);
        BinaryMatrix {
            rows,
            cols,
            words,
            bits: vec![0; rows * words],
            meta: None,
        }
    }

    fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    fn check_columns(&self) -> Result<()> {
        let weights = self.column_weights();
        match weights.iter().position(|&w| w == 0) {
            Some(column) => Err(Error::ZeroColumn { column }),
            None => Ok(()),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn meta(&self) -> Option<&Construction> {
        self.meta.as_ref()
    }

    pub fn with_meta(mut self, meta: Option<Construction>) -> BinaryMatrix {
        self.meta = meta;
        self
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    fn row_words(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    /// Columns set in row `i`, ascending.
    pub fn row_support(&self, i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, &word) in self.row_words(i).iter().enumerate() {
            let mut x = word;
            while x != 0 {
                out.push(w * 64 + x.trailing_zeros() as usize);
                x &= x - 1;
            }
        }
        out
    }

    /// Rows set in each column, ascending.
    pub fn column_supports(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.cols];
        for i in 0..self.rows {
            for j in self.row_support(i) {
                out[j].push(i);
            }
        }
        out
    }

    /// Each column packed into words over the row index.
    pub fn column_bitsets(&self) -> Vec<Vec<u64>> {
        let words = self.rows.div_ceil(64);
        let mut out = vec![vec![0u64; words]; self.cols];
        for i in 0..self.rows {
            for j in self.row_support(i) {
                out[j][i / 64] |= 1 << (i % 64);
            }
        }
        out
    }

    pub fn row_weights(&self) -> Vec<usize> {
        (0..self.rows)
            .map(|i| self.row_words(i).iter().map(|w| w.count_ones() as usize).sum())
            .collect()
    }

    pub fn column_weights(&self) -> Vec<usize> {
        let mut out = vec![0; self.cols];
        for i in 0..self.rows {
            for j in self.row_support(i) {
                out[j] += 1;
            }
        }
        out
    }

    /// `(γ, ρ)` when every column has weight γ and every row weight ρ.
    pub fn regularity(&self) -> Option<(usize, usize)> {
        let cw = self.column_weights();
        let rw = self.row_weights();
        let gamma = *cw.first()?;
        let rho = *rw.first()?;
        (cw.iter().all(|&w| w == gamma) && rw.iter().all(|&w| w == rho)).then_some((gamma, rho))
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Compares entries only, ignoring construction records.
    pub fn same_bits(&self, other: &BinaryMatrix) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.bits == other.bits
    }

    /// Exact transpose; construction records flip between type I and II.
    /// Fails if the input has an all-zero row, which would become a zero
    /// column.
    pub fn transpose(&self) -> Result<BinaryMatrix> {
        let mut t = BinaryMatrix::zeroed(self.cols, self.rows);
        for i in 0..self.rows {
            for j in self.row_support(i) {
                t.set(j, i);
            }
        }
        t.check_columns()?;
        t.meta = self.meta.clone().map(|mut m| {
            m.matrix_type = m.matrix_type.toggled();
            m
        });
        Ok(t)
    }

    /// Submatrix keeping the listed rows in the given order. Construction
    /// records are dropped.
    pub fn select_rows(&self, rows: &[usize]) -> Result<BinaryMatrix> {
        let mut m = BinaryMatrix::zeroed(rows.len(), self.cols);
        for (k, &i) in rows.iter().enumerate() {
            if i >= self.rows {
                return invalid(format!("row {i} out of range"));
            }
            m.bits[k * self.words..(k + 1) * self.words].copy_from_slice(self.row_words(i));
        }
        m.check_columns()?;
        Ok(m)
    }

    /// Submatrix keeping the listed columns in the given order. Construction
    /// records are dropped.
    pub fn select_columns(&self, cols: &[usize]) -> Result<BinaryMatrix> {
        if let Some(&j) = cols.iter().find(|&&j| j >= self.cols) {
            return invalid(format!("column {j} out of range"));
        }
        let mut m = BinaryMatrix::zeroed(self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &j) in cols.iter().enumerate() {
                if self.get(i, j) {
                    m.set(i, k);
                }
            }
        }
        m.check_columns()?;
        Ok(m)
    }

    /// `H x` over the reals.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row_support(i).iter().map(|&j| x[j]).sum())
            .collect()
    }

    /// Serialises to the BMM text format.
    pub fn to_bmm_string(&self) -> String {
        let mut s = String::with_capacity(16 + self.rows * (self.cols + 1));
        writeln!(s, "BMM {} {}", self.rows, self.cols).unwrap();
        for i in 0..self.rows {
            for j in 0..self.cols {
                s.push(if self.get(i, j) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }

    /// Parses the BMM text format: a `BMM <rows> <cols>` header followed by
    /// one line of exactly `cols` characters from `{0,1}` per row.
    pub fn parse_bmm(text: &str) -> Result<BinaryMatrix> {
        let parse_err = |line: usize, message: String| Error::Parse { line, message };
        let mut lines = text.split('\n');
        let header = lines.next().unwrap_or("");
        let fields: Vec<&str> = header.split(' ').collect();
        let dim = |s: &str| -> Option<usize> {
            (!s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())).then(|| s.parse().ok())?
        };
        let (rows, cols) = match fields.as_slice() {
            ["BMM", r, c] => match (dim(r), dim(c)) {
                (Some(r), Some(c)) => (r, c),
                _ => return Err(parse_err(1, format!("bad dimensions in header {header:?}"))),
            },
            _ => return Err(parse_err(1, format!("expected `BMM <rows> <cols>`, got {header:?}"))),
        };
        if (rows as u128) * (cols as u128) > MAX_BITS {
            return Err(Error::TooLarge(format!("{rows}x{cols} matrix")));
        }
        let mut m = BinaryMatrix::zeroed(rows, cols);
        for i in 0..rows {
            let line_no = i + 2;
            let line = lines
                .next()
                .ok_or_else(|| parse_err(line_no, format!("missing row {} of {rows}", i + 1)))?;
            if line.len() != cols {
                return Err(parse_err(line_no, format!("row has length {}, expected {cols}", line.len())));
            }
            for (j, b) in line.bytes().enumerate() {
                match b {
                    b'0' => {}
                    b'1' => m.set(i, j),
                    _ => return Err(parse_err(line_no, format!("invalid character {:?}", b as char))),
                }
            }
        }
        let rest: Vec<&str> = lines.collect();
        if !(rest.is_empty() || rest == [""]) {
            return Err(parse_err(rows + 2, "unexpected content after the last row".into()));
        }
        m.check_columns()?;
        Ok(m)
    }

    pub fn write_bmm(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_bmm_string())?;
        Ok(())
    }

    pub fn read_bmm(path: impl AsRef<Path>) -> Result<BinaryMatrix> {
        BinaryMatrix::parse_bmm(&std::fs::read_to_string(path)?)
    }
}

/// Flats of two dimensions of one geometry, ready to produce incidence
/// matrices.
#[derive(Clone, Debug)]
pub struct Incidence {
    geometry: Geometry,
    mu1: usize,
    mu2: usize,
    outer: FlatSet,
    inner: FlatSet,
}

impl Incidence {
    pub fn new(geometry: Geometry, mu1: usize, mu2: usize) -> Result<Incidence> {
        if !(mu1 < mu2 && mu2 < geometry.r()) {
            return invalid(format!(
                "need 0 <= mu1 < mu2 < r, got mu1={mu1}, mu2={mu2}, r={}",
                geometry.r()
            ));
        }
        let j = n_count(geometry.kind(), geometry.q(), geometry.r(), mu2)?;
        let n = n_count(geometry.kind(), geometry.q(), geometry.r(), mu1)?;
        if j.saturating_mul(n) > MAX_BITS {
            return Err(Error::TooLarge(format!("{j}x{n} incidence matrix")));
        }
        let outer = geometry.flats(mu2)?;
        let inner = geometry.flats(mu1)?;
        Ok(Incidence {
            geometry,
            mu1,
            mu2,
            outer,
            inner,
        })
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    /// The μ2-flats (rows of `H`).
    pub fn outer_flats(&self) -> &FlatSet {
        &self.outer
    }

    /// The μ1-flats (columns of `H`).
    pub fn inner_flats(&self) -> &FlatSet {
        &self.inner
    }

    /// Parallel bundles of the μ2-flats (empty for PG).
    pub fn bundles(&self) -> &[ParallelBundle] {
        self.outer.bundles()
    }

    pub fn matrix(&self, matrix_type: MatrixType) -> Result<BinaryMatrix> {
        let supports = self
            .outer
            .flats()
            .iter()
            .map(|f| self.inner.within(&self.geometry, f))
            .collect::<Result<Vec<_>>>()?;
        let h = BinaryMatrix::from_row_supports(self.outer.len(), self.inner.len(), &supports)?;
        let meta = Construction {
            kind: self.geometry.kind(),
            r: self.geometry.r(),
            q: self.geometry.q(),
            mu1: self.mu1,
            mu2: self.mu2,
            matrix_type: MatrixType::I,
            bundle_size: self.outer.bundles().first().map(|b| b.members.len()),
            selected_bundles: None,
            deleted_columns: Vec::new(),
            mu2_flats: (0..self.outer.len()).collect(),
            mu1_flats: (0..self.inner.len()).collect(),
        };
        let h = h.with_meta(Some(meta));
        match matrix_type {
            MatrixType::I => Ok(h),
            MatrixType::II => h.transpose(),
        }
    }

    /// Removes from `h_b` the columns of every point on the first `j` flats
    /// of the row bundle `bundle_id`, which must not be among the rows of
    /// `h_b`. Parallel flats are disjoint, so exactly `j·q^μ2` columns go.
    pub fn delete_covered_columns(&self, h_b: &BinaryMatrix, bundle_id: usize, j: usize) -> Result<BinaryMatrix> {
        let meta = h_b
            .meta()
            .ok_or_else(|| Error::InvalidArgument("matrix carries no construction record".into()))?;
        if meta.kind != self.geometry.kind()
            || meta.r != self.geometry.r()
            || meta.q != self.geometry.q()
            || meta.mu1 != self.mu1
            || meta.mu2 != self.mu2
        {
            return invalid("matrix was built from a different geometry");
        }
        if meta.matrix_type != MatrixType::I {
            return invalid("column deletion applies to type-I matrices");
        }
        if self.mu1 != 0 {
            return invalid("column deletion needs point columns (mu1 = 0)");
        }
        let bundle = self
            .bundles()
            .get(bundle_id)
            .ok_or_else(|| Error::InvalidArgument(format!("no bundle {bundle_id}")))?;
        let in_use = match &meta.selected_bundles {
            None => true,
            Some(sel) => sel.contains(&bundle_id),
        };
        if in_use {
            return invalid(format!("bundle {bundle_id} already supplies rows of the matrix"));
        }
        if j > bundle.members.len() {
            return invalid(format!("j={j} exceeds the bundle size {}", bundle.members.len()));
        }
        let mut covered = HashSet::new();
        for &member in &bundle.members[..j] {
            let flat = &self.outer.flats()[member];
            covered.extend(self.inner.within(&self.geometry, flat)?);
        }
        let keep: Vec<usize> = (0..h_b.cols()).filter(|&c| !covered.contains(&meta.mu1_flats[c])).collect();
        let removed = h_b.cols() - keep.len();
        let expected = j * (self.geometry.q() as usize).pow(self.mu2 as u32);
        if removed != expected {
            return Err(Error::Internal(format!("removed {removed} columns, expected {expected}")));
        }
        let mut out_meta = meta.clone();
        out_meta.deleted_columns.extend(
            (0..h_b.cols()).filter(|c| !keep.contains(c)).map(|c| meta.mu1_flats[c]),
        );
        out_meta.mu1_flats = keep.iter().map(|&c| meta.mu1_flats[c]).collect();
        Ok(h_b.select_columns(&keep)?.with_meta(Some(out_meta)))
    }
}

/// Incidence matrix of μ2-flats over μ1-flats (type I) or its transpose.
pub fn build_incidence(geometry: &Geometry, mu1: usize, mu2: usize, matrix_type: MatrixType) -> Result<BinaryMatrix> {
    Incidence::new(geometry.clone(), mu1, mu2)?.matrix(matrix_type)
}

/// Keeps the first `count` row bundles of an EG type-I matrix.
pub fn select_row_bundles(h: &BinaryMatrix, count: usize) -> Result<BinaryMatrix> {
    let meta = h
        .meta()
        .ok_or_else(|| Error::InvalidArgument("matrix carries no construction record".into()))?;
    if meta.matrix_type != MatrixType::I {
        return invalid("bundle selection applies to type-I matrices");
    }
    let size = meta
        .bundle_size
        .ok_or_else(|| Error::InvalidArgument("matrix has no parallel-bundle structure".into()))?;
    let present: Vec<usize> = match &meta.selected_bundles {
        Some(sel) => sel.clone(),
        None => (0..h.rows() / size).collect(),
    };
    if count == 0 || count > present.len() {
        return invalid(format!("bundle count {count} outside 1..={}", present.len()));
    }
    let rows: Vec<usize> = (0..count * size).collect();
    let mut out_meta = meta.clone();
    out_meta.selected_bundles = (count < present.len() || meta.selected_bundles.is_some())
        .then(|| present[..count].to_vec());
    out_meta.mu2_flats = meta.mu2_flats[..count * size].to_vec();
    Ok(h.select_rows(&rows)?.with_meta(Some(out_meta)))
}

/// Parameters for a geometry-backed matrix, as accepted by the CLI.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuildParams {
    pub kind: GeometryKind,
    pub r: usize,
    pub q: u64,
    pub mu1: usize,
    pub mu2: usize,
    pub matrix_type: MatrixType,
    /// Keep only the first this many row bundles of `H`.
    pub bundles: Option<usize>,
    /// Delete the points on the first this many flats of the next bundle.
    pub delete_lines: Option<usize>,
}

impl BuildParams {
    pub fn new(kind: GeometryKind, r: usize, q: u64, mu1: usize, mu2: usize, matrix_type: MatrixType) -> Self {
        BuildParams {
            kind,
            r,
            q,
            mu1,
            mu2,
            matrix_type,
            bundles: None,
            delete_lines: None,
        }
    }

    pub fn build(&self) -> Result<BinaryMatrix> {
        let geometry = Geometry::new(self.kind, self.r, self.q)?;
        let incidence = Incidence::new(geometry, self.mu1, self.mu2)?;
        let mut h = incidence.matrix(MatrixType::I)?;
        if let Some(count) = self.bundles {
            h = select_row_bundles(&h, count)?;
        }
        if let Some(j) = self.delete_lines {
            let Some(count) = self.bundles else {
                return invalid("deleting covered columns needs a bundle selection");
            };
            h = incidence.delete_covered_columns(&h, count, j)?;
        }
        match self.matrix_type {
            MatrixType::I => Ok(h),
            MatrixType::II => h.transpose(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use GeometryKind::{Euclidean as EG, Projective as PG};

    fn geom(kind: GeometryKind, r: usize, q: u64) -> Geometry {
        Geometry::new(kind, r, q).unwrap()
    }

    #[test]
    fn example_dimensions_and_regularity() {
        let h = build_incidence(&geom(EG, 4, 2), 1, 3, MatrixType::I).unwrap();
        assert_eq!((h.rows(), h.cols()), (30, 120));
        assert_eq!(h.regularity(), Some((7, 28)));

        let ht = build_incidence(&geom(PG, 3, 4), 0, 1, MatrixType::II).unwrap();
        assert_eq!((ht.rows(), ht.cols()), (85, 357));
        assert_eq!(ht.regularity(), Some((5, 21)));
        assert_eq!(ht.meta().unwrap().matrix_type, MatrixType::II);
    }

    #[test]
    fn type_two_is_transpose() {
        let g = geom(EG, 3, 3);
        let h = build_incidence(&g, 0, 1, MatrixType::I).unwrap();
        let ht = build_incidence(&g, 0, 1, MatrixType::II).unwrap();
        assert!(h.transpose().unwrap().same_bits(&ht));
        assert_eq!(h.transpose().unwrap().transpose().unwrap(), h);
    }

    #[test]
    fn full_matrices_are_regular_on_grid() {
        for kind in [EG, PG] {
            for r in 2..=3 {
                for q in [2u64, 3, 4, 5] {
                    let g = geom(kind, r, q);
                    for mu2 in 1..r {
                        for mu1 in 0..mu2 {
                            let h = build_incidence(&g, mu1, mu2, MatrixType::I).unwrap();
                            let gamma = g.count_a(mu2, mu1).unwrap() as usize;
                            let rho = g.count_n(mu2, mu1).unwrap() as usize;
                            assert_eq!(h.regularity(), Some((gamma, rho)), "{kind}({r},{q}) {mu2}/{mu1}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn invalid_dimensions() {
        let g = geom(EG, 3, 2);
        assert!(matches!(build_incidence(&g, 1, 1, MatrixType::I), Err(Error::InvalidArgument(_))));
        assert!(matches!(build_incidence(&g, 1, 3, MatrixType::I), Err(Error::InvalidArgument(_))));
        let big = Geometry::new(EG, 4, 32).unwrap();
        assert!(matches!(build_incidence(&big, 0, 1, MatrixType::I), Err(Error::TooLarge(_))));
    }

    #[test]
    fn bundle_rows_cover_points_once() {
        let g = geom(EG, 2, 4);
        let h = build_incidence(&g, 0, 1, MatrixType::I).unwrap();
        let size = h.meta().unwrap().bundle_size.unwrap();
        assert_eq!(size, 4);
        for b in 0..h.rows() / size {
            let mut sum = vec![0; h.cols()];
            for i in b * size..(b + 1) * size {
                for j in h.row_support(i) {
                    sum[j] += 1;
                }
            }
            assert!(sum.iter().all(|&s| s == 1));
        }
    }

    #[test]
    fn bundle_selection() {
        let g = geom(EG, 2, 16);
        let h = build_incidence(&g, 0, 1, MatrixType::I).unwrap();
        let h4 = select_row_bundles(&h, 4).unwrap();
        assert_eq!((h4.rows(), h4.cols()), (64, 256));
        assert!(h4.column_weights().iter().all(|&w| w == 4));
        let h7 = select_row_bundles(&h, 7).unwrap();
        assert_eq!((h7.rows(), h7.cols()), (112, 256));
        assert!(h7.column_weights().iter().all(|&w| w == 7));
        assert_eq!(h7.meta().unwrap().selected_bundles, Some((0..7).collect()));

        let all = select_row_bundles(&h, 17).unwrap();
        assert!(all.same_bits(&h));
        assert!(select_row_bundles(&h, 0).is_err());
        assert!(select_row_bundles(&h, 18).is_err());
        assert!(select_row_bundles(&BinaryMatrix::identity(3), 1).is_err());
    }

    #[test]
    fn column_deletion_keeps_regularity() {
        let g = geom(EG, 2, 8);
        let inc = Incidence::new(g, 0, 1).unwrap();
        let h = inc.matrix(MatrixType::I).unwrap();
        let hb = select_row_bundles(&h, 3).unwrap();
        assert!(inc.delete_covered_columns(&hb, 3, 0).unwrap().same_bits(&hb));
        for j in 0..=8 {
            let d = inc.delete_covered_columns(&hb, 3, j).unwrap();
            assert_eq!(d.cols(), 64 - 8 * j);
            assert!(d.column_weights().iter().all(|&w| w == 3));
            assert_eq!(d.meta().unwrap().deleted_columns.len(), 8 * j);
        }
        assert!(inc.delete_covered_columns(&hb, 2, 1).is_err());
        assert!(inc.delete_covered_columns(&hb, 3, 9).is_err());
        assert!(inc.delete_covered_columns(&h, 3, 1).is_err());
    }

    #[test]
    fn bmm_identity_body() {
        let id = BinaryMatrix::identity(2);
        assert_eq!(id.to_bmm_string(), "BMM 2 2\n10\n01\n");
        assert_eq!(BinaryMatrix::parse_bmm("BMM 2 2\n10\n01\n").unwrap(), id);
        assert_eq!(BinaryMatrix::parse_bmm("BMM 2 2\n10\n01").unwrap(), id);
    }

    #[test]
    fn bmm_round_trip_file() {
        let h = build_incidence(&geom(EG, 4, 2), 1, 3, MatrixType::I).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.bmm");
        h.write_bmm(&path).unwrap();
        assert!(BinaryMatrix::read_bmm(&path).unwrap().same_bits(&h));
    }

    #[test]
    fn bmm_parse_errors() {
        let line_of = |text: &str| match BinaryMatrix::parse_bmm(text) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected parse error, got {other:?}"),
        };
        assert_eq!(line_of("BMX 2 2\n10\n01\n"), 1);
        assert_eq!(line_of("BMM 2  2\n10\n01\n"), 1);
        assert_eq!(line_of("BMM 2 -2\n10\n01\n"), 1);
        assert_eq!(line_of("BMM 2 2\n10\n011\n"), 3);
        assert_eq!(line_of("BMM 2 2\n1x\n01\n"), 2);
        assert_eq!(line_of("BMM 2 2\n10\n01 \n"), 3);
        assert_eq!(line_of("BMM 2 2\n10\n"), 3);
        assert_eq!(line_of("BMM 2 2\n10\n01\n11\n"), 4);
        assert!(matches!(
            BinaryMatrix::parse_bmm("BMM 2 2\n10\n00\n"),
            Err(Error::ZeroColumn { column: 1 })
        ));
    }

    #[test]
    fn zero_columns_rejected() {
        assert!(matches!(
            BinaryMatrix::from_dense(&[vec![1, 0], vec![1, 0]]),
            Err(Error::ZeroColumn { column: 1 })
        ));
        let m = BinaryMatrix::from_dense(&[vec![1, 1], vec![0, 0]]).unwrap();
        assert!(matches!(m.transpose(), Err(Error::ZeroColumn { column: 1 })));
    }

    #[test]
    fn build_params_pipeline() {
        let mut p = BuildParams::new(EG, 2, 8, 0, 1, MatrixType::I);
        p.bundles = Some(4);
        p.delete_lines = Some(2);
        let m = p.build().unwrap();
        assert_eq!((m.rows(), m.cols()), (32, 48));
        p.matrix_type = MatrixType::II;
        let t = p.build().unwrap();
        assert_eq!((t.rows(), t.cols()), (48, 32));
        p.bundles = None;
        assert!(p.build().is_err());
    }
}
