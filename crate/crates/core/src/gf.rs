//! Arithmetic in prime-power fields GF(p^m).
//!
//! Elements use the polynomial basis over GF(p) modulo the lexicographically
//! smallest monic irreducible polynomial of degree `m`, where polynomials are
//! compared coefficient by coefficient starting from the constant term.
//!
//! An [`Elem`] is stored as its rank in the canonical element order: the
//! coefficient vector `(c0, c1, .., c_{m-1})` read as a base-`p` number with
//! `c0` the most significant digit. Comparing ranks therefore compares
//! coefficient vectors lexicographically, and zero is always rank 0.

use crate::error::{invalid, Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 20;

/// Table-driven addition is used up to this order.
const ADD_TABLE_LIMIT: u32 = 256;

/// A field element, identified by its position in the canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);

    /// Position of the element in [`Field::elements`].
    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// An immutable description of GF(p^m) together with its lookup tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Field {
    p: u32,
    m: u32,
    q: u32,
    /// Monic modulus, constant term first, length `m + 1`.
    modulus: Vec<u32>,
    one: Elem,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Option<Vec<u32>>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` into `(p, m)` with `q = p^m`, if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut m = 0;
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p as u32, m))
}

impl Field {
    /// Builds GF(p^m).
    pub fn new(p: u32, m: u32) -> Result<Field> {
        if !is_prime(p as u64) {
            return invalid(format!("characteristic {p} is not prime"));
        }
        if !(1..=16).contains(&m) {
            return invalid(format!("extension degree {m} outside 1..=16"));
        }
        let q = (p as u64)
            .checked_pow(m)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or_else(|| Error::InvalidArgument(format!("{p}^{m} exceeds 2^20")))?
            as u32;

        let modulus = smallest_irreducible(p, m as usize)
            .ok_or_else(|| Error::Internal(format!("no irreducible of degree {m} over GF({p})")))?;

        let mut field = Field {
            p,
            m,
            q,
            modulus,
            one: Elem(p.pow(m - 1)),
            exp: Vec::new(),
            log: Vec::new(),
            add_table: None,
        };
        field.build_log_tables()?;
        if q <= ADD_TABLE_LIMIT {
            let mut table = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    table[(a * q + b) as usize] = field.add_digits(Elem(a), Elem(b)).0;
                }
            }
            field.add_table = Some(table);
        }
        Ok(field)
    }

    /// Builds the field of order `q`, which must be a prime power.
    pub fn with_order(q: u64) -> Result<Field> {
        let (p, m) = prime_power(q)
            .ok_or_else(|| Error::InvalidArgument(format!("{q} is not a prime power")))?;
        Field::new(p, m)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, constant term first (monic, length `m + 1`).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        self.one
    }

    /// Element with the given canonical rank.
    pub fn elem(&self, code: u32) -> Elem {
        debug_assert!(code < self.q);
        Elem(code)
    }

    /// All `q` elements in canonical order, zero first.
    pub fn elements(&self) -> Vec<Elem> {
        (0..self.q).map(Elem).collect()
    }

    /// Coefficient vector of `e`, constant term first.
    pub fn coeffs(&self, e: Elem) -> Vec<u32> {
        let mut out = vec![0; self.m as usize];
        let mut code = e.0;
        for slot in out.iter_mut().rev() {
            *slot = code % self.p;
            code /= self.p;
        }
        out
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Elem> {
        if coeffs.len() != self.m as usize {
            return invalid(format!("expected {} coefficients, got {}", self.m, coeffs.len()));
        }
        let mut code = 0;
        for &c in coeffs {
            if c >= self.p {
                return invalid(format!("coefficient {c} not reduced mod {}", self.p));
            }
            code = code * self.p + c;
        }
        Ok(Elem(code))
    }

    /// Embeds an integer of the prime subfield.
    pub fn from_int(&self, n: u64) -> Elem {
        let c = (n % self.p as u64) as u32;
        Elem(c * self.one.0)
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.add_table {
            Some(t) => Elem(t[(a.0 * self.q + b.0) as usize]),
            None if self.p == 2 => Elem(a.0 ^ b.0),
            None => self.add_digits(a, b),
        }
    }

    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 {
            return a;
        }
        let mut out = 0;
        let mut scale = 1;
        let mut x = a.0;
        for _ in 0..self.m {
            let d = x % self.p;
            out += ((self.p - d) % self.p) * scale;
            x /= self.p;
            scale *= self.p;
        }
        Elem(out)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        let order = self.q - 1;
        let s = self.log[a.0 as usize] + self.log[b.0 as usize];
        Elem(self.exp[(s % order) as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let order = self.q - 1;
        let l = self.log[a.0 as usize];
        Ok(Elem(self.exp[((order - l) % order) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return self.one;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        let order = (self.q - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        Elem(self.exp[((l * (e % order)) % order) as usize])
    }

    fn add_digits(&self, a: Elem, b: Elem) -> Elem {
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..self.m {
            out += ((x % self.p + y % self.p) % self.p) * scale;
            x /= self.p;
            y /= self.p;
            scale *= self.p;
        }
        Elem(out)
    }

    /// Multiplication by polynomial arithmetic, used to build the log tables.
    fn mul_poly(&self, a: Elem, b: Elem) -> Elem {
        let prod = poly_mul(&self.coeffs(a), &self.coeffs(b), self.p);
        let rem = poly_rem(&prod, &self.modulus, self.p);
        let mut coeffs = vec![0; self.m as usize];
        for (slot, c) in coeffs.iter_mut().zip(rem) {
            *slot = c;
        }
        self.from_coeffs(&coeffs).expect("reduced polynomial")
    }

    fn pow_poly(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = self.one;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            e >>= 1;
        }
        acc
    }

    fn build_log_tables(&mut self) -> Result<()> {
        let order = (self.q - 1) as u64;
        let factors = prime_factors(order);
        let generator = (1..self.q)
            .map(Elem)
            .find(|&g| factors.iter().all(|&f| self.pow_poly(g, order / f) != self.one))
            .ok_or_else(|| Error::Internal("no primitive element".into()))?;

        let mut exp = vec![0u32; order as usize];
        let mut log = vec![0u32; self.q as usize];
        let mut x = self.one;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = x.0;
            log[x.0 as usize] = i as u32;
            x = self.mul_poly(x, generator);
        }
        if x != self.one {
            return Err(Error::Internal("generator order mismatch".into()));
        }
        self.exp = exp;
        self.log = log;
        Ok(())
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

/// Remainder of `a` divided by the monic polynomial `b`.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        for (i, &c) in b.iter().enumerate() {
            let sub = (lead as u64 * c as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        r = trim(r);
    }
    r
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-`p`
/// digits of `code`, `c0` most significant.
fn monic_from_code(mut code: u64, deg: usize, p: u32) -> Vec<u32> {
    let mut poly = vec![0u32; deg + 1];
    poly[deg] = 1;
    for i in (0..deg).rev() {
        poly[i] = (code % p as u64) as u32;
        code /= p as u64;
    }
    poly
}

pub(crate) fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let divisor = monic_from_code(code, d, p);
            if poly_rem(poly, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, m: usize) -> Option<Vec<u32>> {
    let count = (p as u64).pow(m as u32);
    (0..count)
        .map(|code| monic_from_code(code, m, p))
        .find(|poly| is_irreducible(poly, p))
}
