//! Points and flats of the Euclidean geometry EG(r,q) and the projective
//! geometry PG(r,q).
//!
//! Every flat has a canonical form. Its direction subspace is stored as the
//! reduced row-echelon basis (unique per subspace) and, for EG, its coset by
//! the representative that vanishes at every pivot coordinate of that basis.
//! Flats are indexed in the order of their canonical keys. In EG this puts
//! each parallel bundle in one contiguous block: bundles are ordered by their
//! direction subspace and members by offset.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::gf::{Elem, Field};
use crate::util::{gcd, Combinations};

/// Upper limit on q^(ambient dimension).
const MAX_VECTORS: u128 = 1 << 32;

/// A coordinate vector over GF(q).
pub type Vector = Vec<Elem>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeometryKind {
    Euclidean,
    Projective,
}

impl GeometryKind {
    pub fn short_name(self) -> &'static str {
        match self {
            GeometryKind::Euclidean => "EG",
            GeometryKind::Projective => "PG",
        }
    }
}

impl std::fmt::Display for GeometryKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.short_name())
    }
}

impl std::str::FromStr for GeometryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "eg" => Ok(GeometryKind::Euclidean),
            "pg" => Ok(GeometryKind::Projective),
            other => invalid(format!("unknown geometry {other:?}, expected eg or pg")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct FlatKey {
    rows: Vec<u64>,
    offset: u64,
}

/// A μ-flat in canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flat {
    kind: GeometryKind,
    q: u32,
    mu: usize,
    basis: Vec<Vector>,
    offset: Option<Vector>,
    index: usize,
    bundle_id: Option<usize>,
}

impl Flat {
    pub fn kind(&self) -> GeometryKind {
        self.kind
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    /// Reduced row-echelon basis of the underlying subspace (μ rows for EG,
    /// μ+1 rows for PG).
    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// Canonical coset representative (EG only).
    pub fn offset(&self) -> Option<&[Elem]> {
        self.offset.as_deref()
    }

    /// Position in the global flat ordering of its dimension.
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn bundle_id(&self) -> Option<usize> {
        self.bundle_id
    }
}

/// The flats of one parallel class in EG(r,q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParallelBundle {
    pub id: usize,
    /// Shared direction subspace, in reduced row-echelon form.
    pub direction: Vec<Vector>,
    /// Global indices of the member flats, in canonical order.
    pub members: Vec<usize>,
}

/// All μ-flats of a geometry together with a canonical-form lookup table.
#[derive(Clone, Debug)]
pub struct FlatSet {
    kind: GeometryKind,
    q: u32,
    mu: usize,
    flats: Vec<Flat>,
    lookup: HashMap<FlatKey, usize>,
    bundles: Vec<ParallelBundle>,
}

impl FlatSet {
    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn get(&self, index: usize) -> Option<&Flat> {
        self.flats.get(index)
    }

    /// Parallel bundles of the set; empty for projective geometries.
    pub fn bundles(&self) -> &[ParallelBundle] {
        &self.bundles
    }

    /// Indices of the flats of this set contained in `outer`.
    ///
    /// The inner flats are generated directly inside `outer` (subspaces of its
    /// coordinate space and their translates) and resolved through the lookup
    /// table, so the cost is proportional to the number of results.
    pub fn within(&self, geometry: &Geometry, outer: &Flat) -> Result<Vec<usize>> {
        if outer.kind != self.kind || outer.q != self.q || outer.kind != geometry.kind {
            return invalid("flats belong to different geometries");
        }
        if outer.mu <= self.mu {
            return invalid(format!(
                "inner dimension {} must be below outer dimension {}",
                self.mu, outer.mu
            ));
        }
        let field = geometry.field();
        let t = outer.basis.len();
        let k_inner = match self.kind {
            GeometryKind::Euclidean => self.mu,
            GeometryKind::Projective => self.mu + 1,
        };
        let mut out = Vec::new();
        for local in rref_subspaces(field, t, k_inner) {
            let global: Vec<Vector> = local.iter().map(|c| combine(field, c, &outer.basis)).collect();
            let basis = rref(field, global);
            match self.kind {
                GeometryKind::Projective => {
                    out.push(self.index_of_key(&geometry.key_of(&basis, None))?);
                }
                GeometryKind::Euclidean => {
                    let local_pivots: Vec<usize> = local.iter().map(|row| pivot(row).unwrap()).collect();
                    let base = outer.offset.as_ref().expect("EG flats carry an offset");
                    for coords in free_vectors(field, t, &local_pivots) {
                        let shift = combine(field, &coords, &outer.basis);
                        let mut point: Vector =
                            base.iter().zip(&shift).map(|(&a, &b)| field.add(a, b)).collect();
                        reduce(field, &basis, &mut point);
                        out.push(self.index_of_key(&geometry.key_of(&basis, Some(&point)))?);
                    }
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    fn index_of_key(&self, key: &FlatKey) -> Result<usize> {
        self.lookup
            .get(key)
            .copied()
            .ok_or_else(|| Error::Internal("canonical flat missing from lookup table".into()))
    }
}

/// EG(r,q) or PG(r,q) over a fixed field.
#[derive(Clone, Debug)]
pub struct Geometry {
    kind: GeometryKind,
    r: usize,
    field: Arc<Field>,
    /// Sorted codes of canonical PG points (empty for EG).
    pg_points: Vec<u64>,
}

impl Geometry {
    pub fn new(kind: GeometryKind, r: usize, q: u64) -> Result<Geometry> {
        Geometry::with_field(kind, r, Arc::new(Field::with_order(q)?))
    }

    pub fn with_field(kind: GeometryKind, r: usize, field: Arc<Field>) -> Result<Geometry> {
        if r < 2 {
            return invalid(format!("dimension r={r} must be at least 2"));
        }
        let dim = match kind {
            GeometryKind::Euclidean => r,
            GeometryKind::Projective => r + 1,
        };
        let q = field.order() as u128;
        if q.checked_pow(dim as u32).is_none_or(|v| v > MAX_VECTORS) {
            return invalid(format!("{kind}({r},{q}) is too large to index"));
        }
        let mut g = Geometry {
            kind,
            r,
            field,
            pg_points: Vec::new(),
        };
        if kind == GeometryKind::Projective {
            let mut codes: Vec<u64> = rref_subspaces(&g.field, dim, 1)
                .into_iter()
                .map(|b| g.vector_code(&b[0]))
                .collect();
            codes.sort_unstable();
            g.pg_points = codes;
        }
        Ok(g)
    }

    pub fn kind(&self) -> GeometryKind {
        self.kind
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn q(&self) -> u64 {
        self.field.order() as u64
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Length of the coordinate vectors (`r` for EG, `r + 1` for PG).
    pub fn ambient_dim(&self) -> usize {
        match self.kind {
            GeometryKind::Euclidean => self.r,
            GeometryKind::Projective => self.r + 1,
        }
    }

    pub fn num_points(&self) -> u128 {
        let q = self.q() as u128;
        match self.kind {
            GeometryKind::Euclidean => q.pow(self.r as u32),
            GeometryKind::Projective => (q.pow(self.r as u32 + 1) - 1) / (q - 1),
        }
    }

    /// Points in lexicographic order; PG points are normalised so that their
    /// first nonzero coordinate is 1.
    pub fn points(&self) -> Vec<Vector> {
        match self.kind {
            GeometryKind::Euclidean => {
                let n = self.num_points() as u64;
                (0..n).map(|c| self.vector_from_code(c)).collect()
            }
            GeometryKind::Projective => self.pg_points.iter().map(|&c| self.vector_from_code(c)).collect(),
        }
    }

    /// Index of a point in [`Geometry::points`]. PG vectors are normalised
    /// first; the zero vector has no index in PG.
    pub fn point_index(&self, v: &[Elem]) -> Option<usize> {
        if v.len() != self.ambient_dim() {
            return None;
        }
        match self.kind {
            GeometryKind::Euclidean => Some(self.vector_code(v) as usize),
            GeometryKind::Projective => {
                let lead = *v.iter().find(|e| !e.is_zero())?;
                let inv = self.field.inv(lead).ok()?;
                let normal: Vector = v.iter().map(|&e| self.field.mul(e, inv)).collect();
                self.pg_points.binary_search(&self.vector_code(&normal)).ok()
            }
        }
    }

    /// Number of μ-flats, N(r, μ).
    pub fn num_flats(&self, mu: usize) -> Result<u128> {
        if mu > self.r {
            return invalid(format!("flat dimension {mu} exceeds r={}", self.r));
        }
        n_count(self.kind, self.q(), self.r, mu)
    }

    /// N(μ2, μ1): μ1-flats inside a fixed μ2-flat.
    pub fn count_n(&self, mu2: usize, mu1: usize) -> Result<u128> {
        self.check_order(mu2, mu1)?;
        n_count(self.kind, self.q(), mu2, mu1)
    }

    /// A(μ2, μ1): μ2-flats through a fixed μ1-flat.
    pub fn count_a(&self, mu2: usize, mu1: usize) -> Result<u128> {
        self.check_order(mu2, mu1)?;
        a_count(self.q(), self.r, mu2, mu1)
    }

    fn check_order(&self, mu2: usize, mu1: usize) -> Result<()> {
        if mu1 >= mu2 || mu2 > self.r {
            return invalid(format!("need 0 <= mu1 < mu2 <= r, got mu1={mu1}, mu2={mu2}, r={}", self.r));
        }
        Ok(())
    }

    /// Enumerates all μ-flats in canonical order.
    pub fn flats(&self, mu: usize) -> Result<FlatSet> {
        let expected = self.num_flats(mu)?;
        if expected > 50_000_000 {
            return Err(Error::TooLarge(format!("{expected} flats of dimension {mu}")));
        }
        let field = &*self.field;
        let dim = self.ambient_dim();
        let q = field.order();
        let mut entries: Vec<(FlatKey, Vec<Vector>, Option<Vector>)> = Vec::with_capacity(expected as usize);
        match self.kind {
            GeometryKind::Projective => {
                for basis in rref_subspaces(field, dim, mu + 1) {
                    entries.push((self.key_of(&basis, None), basis, None));
                }
            }
            GeometryKind::Euclidean => {
                for basis in rref_subspaces(field, dim, mu) {
                    let pivots: Vec<usize> = basis.iter().map(|row| pivot(row).unwrap()).collect();
                    for offset in free_vectors(field, dim, &pivots) {
                        entries.push((self.key_of(&basis, Some(&offset)), basis.clone(), Some(offset)));
                    }
                }
            }
        }
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        if entries.len() as u128 != expected {
            return Err(Error::Internal(format!(
                "enumerated {} flats, expected {expected}",
                entries.len()
            )));
        }

        let mut flats = Vec::with_capacity(entries.len());
        let mut lookup = HashMap::with_capacity(entries.len());
        let mut bundles: Vec<ParallelBundle> = Vec::new();
        for (index, (key, basis, offset)) in entries.into_iter().enumerate() {
            let bundle_id = match self.kind {
                GeometryKind::Projective => None,
                GeometryKind::Euclidean => {
                    let same = bundles.last().is_some_and(|b| b.direction == basis);
                    if !same {
                        bundles.push(ParallelBundle {
                            id: bundles.len(),
                            direction: basis.clone(),
                            members: Vec::new(),
                        });
                    }
                    let b = bundles.last_mut().unwrap();
                    b.members.push(index);
                    Some(b.id)
                }
            };
            lookup.insert(key, index);
            flats.push(Flat {
                kind: self.kind,
                q,
                mu,
                basis,
                offset,
                index,
                bundle_id,
            });
        }
        Ok(FlatSet {
            kind: self.kind,
            q,
            mu,
            flats,
            lookup,
            bundles,
        })
    }

    /// Parallel bundles of μ-flats. Projective geometries have none.
    pub fn parallel_bundles(&self, mu: usize) -> Result<Vec<ParallelBundle>> {
        if self.kind == GeometryKind::Projective {
            return Err(Error::Unsupported(
                "projective geometries have no parallel structure".into(),
            ));
        }
        Ok(self.flats(mu)?.bundles)
    }

    /// Containment test on canonical forms, without listing points.
    pub fn contains(&self, outer: &Flat, inner: &Flat) -> Result<bool> {
        let dim = self.ambient_dim();
        let same_space = |f: &Flat| {
            f.kind == self.kind && f.q == self.field.order() && f.basis.iter().all(|row| row.len() == dim)
        };
        if !same_space(outer) || !same_space(inner) {
            return invalid("flats belong to different geometries");
        }
        if inner.mu > outer.mu {
            return Ok(false);
        }
        let field = &*self.field;
        let in_span = |v: &[Elem]| {
            let mut w = v.to_vec();
            reduce(field, &outer.basis, &mut w);
            w.iter().all(|e| e.is_zero())
        };
        if !inner.basis.iter().all(|row| in_span(row)) {
            return Ok(false);
        }
        Ok(match (&outer.offset, &inner.offset) {
            (Some(o), Some(i)) => {
                let diff: Vector = i.iter().zip(o).map(|(&a, &b)| field.sub(a, b)).collect();
                in_span(&diff)
            }
            _ => true,
        })
    }

    /// Indices (into [`Geometry::points`]) of the points on a flat, sorted.
    pub fn flat_points(&self, flat: &Flat) -> Vec<usize> {
        let field = &*self.field;
        let k = flat.basis.len();
        let mut out = Vec::new();
        match &flat.offset {
            Some(offset) => {
                for coords in free_vectors(field, k, &[]) {
                    let shift = combine(field, &coords, &flat.basis);
                    let p: Vector = offset.iter().zip(&shift).map(|(&a, &b)| field.add(a, b)).collect();
                    out.push(self.point_index(&p).unwrap());
                }
            }
            None => {
                // coefficient vectors with leading entry 1 map to normalised points
                for lead in 0..k {
                    for mut coords in free_vectors(field, k, &(0..=lead).collect::<Vec<_>>()) {
                        coords[lead] = field.one();
                        let p = combine(field, &coords, &flat.basis);
                        out.push(self.point_index(&p).unwrap());
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Canonical flat spanned by `directions` (through `through` in EG). The
    /// returned flat carries no index or bundle id.
    pub fn flat_from_span(&self, directions: &[Vector], through: Option<&[Elem]>) -> Result<Flat> {
        let dim = self.ambient_dim();
        if directions.iter().any(|d| d.len() != dim) {
            return invalid("vector length does not match the geometry");
        }
        let field = &*self.field;
        let basis = rref(field, directions.to_vec());
        let (mu, offset) = match self.kind {
            GeometryKind::Euclidean => {
                let p = through.ok_or_else(|| Error::InvalidArgument("EG flats need a point".into()))?;
                if p.len() != dim {
                    return invalid("point length does not match the geometry");
                }
                let mut o = p.to_vec();
                reduce(field, &basis, &mut o);
                (basis.len(), Some(o))
            }
            GeometryKind::Projective => {
                if basis.is_empty() {
                    return invalid("a projective flat needs a nonzero spanning vector");
                }
                (basis.len() - 1, None)
            }
        };
        Ok(Flat {
            kind: self.kind,
            q: field.order(),
            mu,
            basis,
            offset,
            index: usize::MAX,
            bundle_id: None,
        })
    }

    fn vector_code(&self, v: &[Elem]) -> u64 {
        let q = self.field.order() as u64;
        v.iter().fold(0u64, |acc, e| acc * q + e.code() as u64)
    }

    fn vector_from_code(&self, mut code: u64) -> Vector {
        let q = self.field.order() as u64;
        let mut v = vec![Elem::ZERO; self.ambient_dim()];
        for slot in v.iter_mut().rev() {
            *slot = self.field.elem((code % q) as u32);
            code /= q;
        }
        v
    }

    fn key_of(&self, basis: &[Vector], offset: Option<&[Elem]>) -> FlatKey {
        FlatKey {
            rows: basis.iter().map(|r| self.vector_code(r)).collect(),
            offset: offset.map_or(0, |o| self.vector_code(o)),
        }
    }
}

fn pivot(row: &[Elem]) -> Option<usize> {
    row.iter().position(|e| !e.is_zero())
}

/// Σ coeffs[i]·rows[i].
fn combine(field: &Field, coeffs: &[Elem], rows: &[Vector]) -> Vector {
    let dim = rows.first().map_or(0, |r| r.len());
    let mut out = vec![Elem::ZERO; dim];
    for (&c, row) in coeffs.iter().zip(rows) {
        if c.is_zero() {
            continue;
        }
        for (slot, &x) in out.iter_mut().zip(row) {
            *slot = field.add(*slot, field.mul(c, x));
        }
    }
    out
}

/// Reduces `v` modulo a basis in reduced row-echelon form, leaving zeros at
/// every pivot column.
fn reduce(field: &Field, basis: &[Vector], v: &mut [Elem]) {
    for row in basis {
        let p = pivot(row).expect("basis rows are nonzero");
        let c = v[p];
        if c.is_zero() {
            continue;
        }
        for (slot, &x) in v.iter_mut().zip(row) {
            *slot = field.sub(*slot, field.mul(c, x));
        }
    }
}

/// Reduced row-echelon form; zero rows are dropped.
pub(crate) fn rref(field: &Field, mut rows: Vec<Vector>) -> Vec<Vector> {
    let dim = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..dim {
        let Some(sel) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, sel);
        let inv = field.inv(rows[rank][col]).expect("nonzero pivot");
        for x in rows[rank].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == rank || row[col].is_zero() {
                continue;
            }
            let c = row[col];
            for (slot, &x) in row.iter_mut().zip(&pivot_row) {
                *slot = field.sub(*slot, field.mul(c, x));
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows
}

/// All vectors of length `dim` that vanish on `fixed`, in lexicographic order.
fn free_vectors(field: &Field, dim: usize, fixed: &[usize]) -> Vec<Vector> {
    let free: Vec<usize> = (0..dim).filter(|j| !fixed.contains(j)).collect();
    let q = field.order();
    let total = (q as usize).pow(free.len() as u32);
    let mut out = Vec::with_capacity(total);
    let mut digits = vec![0u32; free.len()];
    for _ in 0..total {
        let mut v = vec![Elem::ZERO; dim];
        for (&pos, &d) in free.iter().zip(&digits) {
            v[pos] = field.elem(d);
        }
        out.push(v);
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < q {
                break;
            }
            *d = 0;
        }
    }
    out
}

/// Every k-dimensional subspace of GF(q)^dim, as its reduced row-echelon
/// basis: one matrix per pivot pattern and per assignment of the free
/// entries.
pub(crate) fn rref_subspaces(field: &Field, dim: usize, k: usize) -> Vec<Vec<Vector>> {
    let q = field.order();
    let mut out = Vec::new();
    for pivots in Combinations::new(dim, k) {
        let slots: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| ((c + 1)..dim).filter(|j| !pivots.contains(j)).map(move |j| (i, j)))
            .collect();
        let mut digits = vec![0u32; slots.len()];
        let total = (q as usize).pow(slots.len() as u32);
        for _ in 0..total {
            let mut rows = vec![vec![Elem::ZERO; dim]; k];
            for (i, &c) in pivots.iter().enumerate() {
                rows[i][c] = field.one();
            }
            for (&(i, j), &d) in slots.iter().zip(&digits) {
                rows[i][j] = field.elem(d);
            }
            out.push(rows);
            for d in digits.iter_mut().rev() {
                *d += 1;
                if *d < q {
                    break;
                }
                *d = 0;
            }
        }
    }
    out
}

/// Exact product of quotients, failing on overflow.
struct ExactProduct {
    num: u128,
    den: u128,
}

impl ExactProduct {
    fn new() -> Self {
        ExactProduct { num: 1, den: 1 }
    }

    fn times(&mut self, n: u128, d: u128) -> Result<()> {
        let g1 = gcd(n, self.den);
        let g2 = gcd(d, self.num);
        let overflow = || Error::TooLarge("flat count overflows 128 bits".into());
        self.num = (self.num / g2).checked_mul(n / g1).ok_or_else(overflow)?;
        self.den = (self.den / g1).checked_mul(d / g2).ok_or_else(overflow)?;
        Ok(())
    }

    fn integer(&self) -> Result<u128> {
        if self.num % self.den != 0 {
            return Err(Error::Internal("flat count is not an integer".into()));
        }
        Ok(self.num / self.den)
    }
}

fn qpow(q: u64, e: usize) -> Result<u128> {
    (q as u128)
        .checked_pow(e as u32)
        .ok_or_else(|| Error::TooLarge(format!("{q}^{e} overflows")))
}

/// N(μ2, μ1) for `mu1 <= mu2`; N(μ, μ) = 1.
pub fn n_count(kind: GeometryKind, q: u64, mu2: usize, mu1: usize) -> Result<u128> {
    if mu1 > mu2 {
        return invalid(format!("mu1={mu1} exceeds mu2={mu2}"));
    }
    let mut acc = ExactProduct::new();
    match kind {
        GeometryKind::Euclidean => {
            acc.times(qpow(q, mu2 - mu1)?, 1)?;
            for i in 1..=mu1 {
                acc.times(qpow(q, mu2 - i + 1)? - 1, qpow(q, mu1 - i + 1)? - 1)?;
            }
        }
        GeometryKind::Projective => {
            for i in 0..=mu1 {
                acc.times(qpow(q, mu2 - i + 1)? - 1, qpow(q, mu1 - i + 1)? - 1)?;
            }
        }
    }
    acc.integer()
}

/// A(μ2, μ1) in a geometry of dimension `r` (same for EG and PG); A(μ, μ) = 1.
pub fn a_count(q: u64, r: usize, mu2: usize, mu1: usize) -> Result<u128> {
    if mu1 > mu2 || mu2 > r {
        return invalid(format!("need mu1 <= mu2 <= r, got mu1={mu1}, mu2={mu2}, r={r}"));
    }
    let mut acc = ExactProduct::new();
    for i in mu1 + 1..=mu2 {
        acc.times(qpow(q, r - i + 1)? - 1, qpow(q, mu2 - i + 1)? - 1)?;
    }
    acc.integer()
}

/// Outcome of an exhaustive check of one of the separating-flat lemmas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationCheck {
    /// Largest family size tested.
    pub max_family: usize,
    /// Number of (family, distinguished member) pairs examined.
    pub cases: u64,
    /// Cases for which no separating flat exists.
    pub violations: u64,
}

/// For every family of at most A(μ2, μ2−1) distinct μ1-flats and every
/// member `F_j`, looks for a (μ2−1)-flat containing `F_j` but none of the
/// other members.
pub fn check_separating_superflat(g: &Geometry, mu1: usize, mu2: usize) -> Result<SeparationCheck> {
    if !(mu1 < mu2 && mu2 < g.r()) {
        return invalid("need 0 <= mu1 < mu2 < r");
    }
    let members = g.flats(mu1)?;
    let candidates = g.flats(mu2 - 1)?;
    let max_family = a_count(g.q(), g.r(), mu2, mu2 - 1)? as usize;
    // contains[c][i]: candidate c contains member i
    let contains = containment_table(candidates.flats(), members.flats(), |c, m| g.contains(c, m))?;
    Ok(separation_search(&contains, members.len(), max_family))
}

/// For every family of at most N(μ1+1, μ1) distinct μ2-flats and every
/// member `F_j`, looks for a (μ1+1)-flat inside `F_j` and inside none of the
/// other members.
pub fn check_separating_subflat(g: &Geometry, mu1: usize, mu2: usize) -> Result<SeparationCheck> {
    if !(mu1 < mu2 && mu2 < g.r()) {
        return invalid("need 0 <= mu1 < mu2 < r");
    }
    let members = g.flats(mu2)?;
    let candidates = g.flats(mu1 + 1)?;
    let max_family = n_count(g.kind(), g.q(), mu1 + 1, mu1)? as usize;
    let contains = containment_table(candidates.flats(), members.flats(), |c, m| g.contains(m, c))?;
    Ok(separation_search(&contains, members.len(), max_family))
}

fn containment_table(
    candidates: &[Flat],
    members: &[Flat],
    rel: impl Fn(&Flat, &Flat) -> Result<bool>,
) -> Result<Vec<Vec<bool>>> {
    candidates
        .iter()
        .map(|c| members.iter().map(|m| rel(c, m)).collect())
        .collect()
}

fn separation_search(related: &[Vec<bool>], n_members: usize, max_family: usize) -> SeparationCheck {
    let max_family = max_family.min(n_members);
    let mut cases = 0;
    let mut violations = 0;
    for l in 1..=max_family {
        for family in Combinations::new(n_members, l) {
            for &j in &family {
                cases += 1;
                let separated = related
                    .iter()
                    .any(|row| row[j] && family.iter().all(|&i| i == j || !row[i]));
                if !separated {
                    violations += 1;
                }
            }
        }
    }
    SeparationCheck {
        max_family,
        cases,
        violations,
    }
}
