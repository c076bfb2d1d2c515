//! Arithmetic in GF(q), q = p^k odd.
//!
//! Elements are identified with their canonical index: the coefficients of the
//! residue polynomial `c0 + c1 x + ... + c(k-1) x^(k-1)` read as the base-p
//! integer `c0 + c1 p + ...`. Index 0 is zero and index 1 is one. Fields with
//! at most [`TABLE_LIMIT`] elements precompute full addition and multiplication
//! tables; larger fields fall back to polynomial arithmetic.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest field order for which full operation tables are built.
pub const TABLE_LIMIT: u32 = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("q = {0} is even; only odd prime powers are supported")]
    EvenOrder(u64),
    #[error("q = {0} is not a prime power")]
    NotPrimePower(u64),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("modulus {0:?} is reducible over GF({1})")]
    ReducibleModulus(Vec<u32>, u32),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("element index {index} out of range for GF({q})")]
    OutOfRange { index: u64, q: u32 },
    #[error("cube test needs 3 | Q-1, but Q = {0}")]
    CubePrecondition(u32),
    #[error("cube test is undefined for zero")]
    ZeroCube,
}

/// A field element, stored as its canonical index.
///
/// An `Fe` carries no reference to its field; every operation goes through
/// the [`Field`] that produced it.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fe(u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    square: Vec<bool>,
}

/// The finite field GF(p^k) for an odd prime p.
pub struct Field {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    tables: Option<Tables>,
    nonsquare: Fe,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field").field("p", &self.p).field("k", &self.k).field("modulus", &self.modulus).finish()
    }
}

/// Splits `q` into `(p, k)` with `q = p^k`.
pub fn prime_power(q: u64) -> Result<(u32, u32), FieldError> {
    if q < 2 {
        return Err(FieldError::NotPrimePower(q));
    }
    let mut p = 2u64;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    if rest != 1 {
        return Err(FieldError::NotPrimePower(q));
    }
    if p == 2 {
        return Err(FieldError::EvenOrder(q));
    }
    if q > u32::MAX as u64 {
        return Err(FieldError::OutOfRange { index: q, q: u32::MAX });
    }
    Ok((p as u32, k))
}

impl Field {
    /// GF(q) with the default modulus, the smallest monic irreducible of
    /// degree k in canonical order.
    pub fn new(q: u64) -> Result<Field, FieldError> {
        let (p, k) = prime_power(q)?;
        Ok(Field::build(p, k, smallest_irreducible(p, k)))
    }

    /// GF(q) with an explicit monic modulus given low-to-high, so it has
    /// `k + 1` coefficients ending in 1. For prime q the modulus must be `[c0, 1]`.
    pub fn with_modulus(q: u64, modulus: &[u32]) -> Result<Field, FieldError> {
        let (p, k) = prime_power(q)?;
        if modulus.len() != k as usize + 1 {
            return Err(FieldError::InvalidModulus(format!(
                "expected {} coefficients for degree {k}, got {}",
                k + 1,
                modulus.len()
            )));
        }
        if modulus[k as usize] != 1 {
            return Err(FieldError::InvalidModulus("modulus must be monic".into()));
        }
        if let Some(c) = modulus.iter().find(|&&c| c >= p) {
            return Err(FieldError::InvalidModulus(format!("coefficient {c} is not reduced mod {p}")));
        }
        if !is_irreducible(p, modulus) {
            return Err(FieldError::ReducibleModulus(modulus.to_vec(), p));
        }
        Ok(Field::build(p, k, modulus.to_vec()))
    }

    fn build(p: u32, k: u32, modulus: Vec<u32>) -> Field {
        let q = p.pow(k);
        let mut field = Field { p, k, q, modulus, tables: None, nonsquare: Fe::ZERO };
        if q <= TABLE_LIMIT {
            let n = q as usize;
            let mut add = vec![0u16; n * n];
            let mut mul = vec![0u16; n * n];
            for a in 0..q {
                for b in a..q {
                    let s = field.slow_add(Fe(a), Fe(b)).0 as u16;
                    let m = field.slow_mul(Fe(a), Fe(b)).0 as u16;
                    let (i, j) = (a as usize, b as usize);
                    add[i * n + j] = s;
                    add[j * n + i] = s;
                    mul[i * n + j] = m;
                    mul[j * n + i] = m;
                }
            }
            let mut neg = vec![0u16; n];
            let mut inv = vec![0u16; n];
            for a in 0..n {
                for b in 0..n {
                    if add[a * n + b] == 0 {
                        neg[a] = b as u16;
                    }
                    if mul[a * n + b] == 1 {
                        inv[a] = b as u16;
                    }
                }
            }
            let mut square = vec![false; n];
            for a in 0..n {
                square[mul[a * n + a] as usize] = true;
            }
            field.tables = Some(Tables { add, mul, neg, inv, square });
        }
        field.nonsquare = field.elements().find(|&x| !field.is_square(x)).expect("odd q has non-squares");
        field
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, low to high, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    pub fn element(&self, index: u64) -> Result<Fe, FieldError> {
        if index < self.q as u64 {
            Ok(Fe(index as u32))
        } else {
            Err(FieldError::OutOfRange { index, q: self.q })
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.q).map(Fe)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Fe> + Clone {
        (1..self.q).map(Fe)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        match &self.tables {
            Some(t) => Fe(t.add[(a.0 * self.q + b.0) as usize] as u32),
            None => self.slow_add(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        match &self.tables {
            Some(t) => Fe(t.neg[a.0 as usize] as u32),
            None => self.slow_neg(a),
        }
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        match &self.tables {
            Some(t) => Fe(t.mul[(a.0 * self.q + b.0) as usize] as u32),
            None => self.slow_mul(a, b),
        }
    }

    pub fn inv(&self, a: Fe) -> Result<Fe, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        Ok(match &self.tables {
            Some(t) => Fe(t.inv[a.0 as usize] as u32),
            None => self.pow(a, self.q as u64 - 2),
        })
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut base = a;
        let mut acc = Fe::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Sum of a sequence of elements.
    pub fn sum<I: IntoIterator<Item = Fe>>(&self, it: I) -> Fe {
        it.into_iter().fold(Fe::ZERO, |acc, x| self.add(acc, x))
    }

    /// Zero counts as a square.
    pub fn is_square(&self, a: Fe) -> bool {
        match &self.tables {
            Some(t) => t.square[a.0 as usize],
            None => a.is_zero() || self.pow(a, (self.q as u64 - 1) / 2) == Fe::ONE,
        }
    }

    /// The non-square with the smallest canonical index.
    pub fn canonical_nonsquare(&self) -> Fe {
        self.nonsquare
    }

    /// A square root of `a`, choosing the root with the smaller index.
    /// Tonelli-Shanks over the multiplicative group.
    pub fn sqrt(&self, a: Fe) -> Option<Fe> {
        if a.is_zero() {
            return Some(Fe::ZERO);
        }
        if !self.is_square(a) {
            return None;
        }
        let mut s = 0u32;
        let mut t = self.q as u64 - 1;
        while t.is_multiple_of(2) {
            t /= 2;
            s += 1;
        }
        let mut m = s;
        let mut c = self.pow(self.nonsquare, t);
        let mut x = self.pow(a, t.div_ceil(2));
        let mut b = self.pow(a, t);
        while b != Fe::ONE {
            let mut i = 0;
            let mut b2 = b;
            while b2 != Fe::ONE {
                b2 = self.mul(b2, b2);
                i += 1;
            }
            let mut d = c;
            for _ in 0..(m - i - 1) {
                d = self.mul(d, d);
            }
            x = self.mul(x, d);
            c = self.mul(d, d);
            b = self.mul(b, c);
            m = i;
        }
        let y = self.neg(x);
        Some(x.min(y))
    }

    /// Whether `a` is a cube, for fields with 3 | q-1.
    pub fn is_cube(&self, a: Fe) -> Result<bool, FieldError> {
        if !(self.q - 1).is_multiple_of(3) {
            return Err(FieldError::CubePrecondition(self.q));
        }
        if a.is_zero() {
            return Err(FieldError::ZeroCube);
        }
        Ok(self.pow(a, (self.q as u64 - 1) / 3) == Fe::ONE)
    }

    /// Smallest-index generator of the multiplicative group.
    pub fn primitive_element(&self) -> Fe {
        let n = self.q as u64 - 1;
        let primes = prime_factors(n);
        self.nonzero()
            .find(|&x| primes.iter().all(|&r| self.pow(x, n / r) != Fe::ONE))
            .expect("multiplicative group is cyclic")
    }

    /// The generator `x` of GF(p^k) over GF(p), i.e. the element with index p
    /// (or 1 when k = 1).
    pub fn generator(&self) -> Fe {
        if self.k == 1 {
            Fe::ONE
        } else {
            Fe(self.p)
        }
    }

    /// GF(q^2) together with an embedding of this field.
    pub fn quadratic_extension(&self) -> QuadraticExtension {
        let big = Field::build(self.p, 2 * self.k, smallest_irreducible(self.p, 2 * self.k));
        // Send the class of x to the smallest root of our modulus in GF(q^2).
        let root = if self.k == 1 {
            Fe::ONE
        } else {
            big.elements()
                .find(|&r| {
                    let mut acc = Fe::ZERO;
                    for &c in self.modulus.iter().rev() {
                        acc = big.add(big.mul(acc, r), big.from_int(c as i64));
                    }
                    acc.is_zero()
                })
                .expect("modulus splits in the degree-2k extension")
        };
        let embedding = self
            .elements()
            .map(|x| {
                let digits = self.digits(x);
                let mut acc = Fe::ZERO;
                for &c in digits.iter().rev() {
                    acc = big.add(big.mul(acc, root), big.from_int(c as i64));
                }
                acc
            })
            .collect();
        QuadraticExtension { field: big, embedding }
    }

    /// Base-p digits of an element, low first (the residue polynomial).
    pub fn digits(&self, a: Fe) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.k as usize);
        let mut x = a.0;
        for _ in 0..self.k {
            v.push(x % self.p);
            x /= self.p;
        }
        v
    }

    fn compose_digits(&self, d: &[u32]) -> Fe {
        Fe(d.iter().rev().fold(0, |acc, &c| acc * self.p + c))
    }

    fn slow_add(&self, a: Fe, b: Fe) -> Fe {
        let (da, db) = (self.digits(a), self.digits(b));
        let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.compose_digits(&s)
    }

    fn slow_neg(&self, a: Fe) -> Fe {
        let d: Vec<u32> = self.digits(a).iter().map(|&x| (self.p - x) % self.p).collect();
        self.compose_digits(&d)
    }

    fn slow_mul(&self, a: Fe, b: Fe) -> Fe {
        let p = self.p as u64;
        let k = self.k as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for deg in (k..prod.len()).rev() {
            let c = prod[deg];
            if c != 0 {
                for (i, &m) in self.modulus[..k].iter().enumerate() {
                    let idx = deg - k + i;
                    prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
                }
                prod[deg] = 0;
            }
        }
        let d: Vec<u32> = prod[..k].iter().map(|&x| x as u32).collect();
        self.compose_digits(&d)
    }
}

/// GF(q^2) and the embedding GF(q) -> GF(q^2).
#[derive(Debug)]
pub struct QuadraticExtension {
    pub field: Field,
    embedding: Vec<Fe>,
}

impl QuadraticExtension {
    pub fn embed(&self, a: Fe) -> Fe {
        self.embedding[a.0 as usize]
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
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

/// Remainder of `a` modulo the monic polynomial `m` over GF(p); both low-to-high.
fn poly_rem(p: u32, a: &[u32], m: &[u32]) -> Vec<u32> {
    let p = p as u64;
    let dm = m.len() - 1;
    let mut r: Vec<u64> = a.iter().map(|&x| x as u64).collect();
    while r.len() > dm {
        let c = r.pop().unwrap();
        if c != 0 {
            let base = r.len() - dm;
            for i in 0..dm {
                r[base + i] = (r[base + i] + (p - c) * m[i] as u64) % p;
            }
        }
    }
    r.into_iter().map(|x| x as u32).collect()
}

/// Trial division by every monic polynomial of degree at most half the degree.
pub fn is_irreducible(p: u32, poly: &[u32]) -> bool {
    let d = poly.len() - 1;
    if d == 0 {
        return false;
    }
    for deg in 1..=d / 2 {
        let count = (p as u64).pow(deg as u32);
        for code in 0..count {
            let mut divisor = Vec::with_capacity(deg + 1);
            let mut c = code;
            for _ in 0..deg {
                divisor.push((c % p as u64) as u32);
                c /= p as u64;
            }
            divisor.push(1);
            if poly_rem(p, poly, &divisor).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible of degree k, ordering the lower coefficients by
/// their base-p value (constant term least significant).
pub fn smallest_irreducible(p: u32, k: u32) -> Vec<u32> {
    if k == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(k);
    for code in 0..count {
        let mut poly = Vec::with_capacity(k as usize + 1);
        let mut c = code;
        for _ in 0..k {
            poly.push((c % p as u64) as u32);
            c /= p as u64;
        }
        poly.push(1);
        if is_irreducible(p, &poly) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u64) -> Field {
        Field::new(q).unwrap()
    }

    #[test]
    fn rejects_even_and_composite_orders() {
        assert_eq!(Field::new(4).unwrap_err(), FieldError::EvenOrder(4));
        assert_eq!(Field::new(2).unwrap_err(), FieldError::EvenOrder(2));
        assert_eq!(Field::new(15).unwrap_err(), FieldError::NotPrimePower(15));
        assert_eq!(Field::new(1).unwrap_err(), FieldError::NotPrimePower(1));
        assert_eq!(Field::new(0).unwrap_err(), FieldError::NotPrimePower(0));
    }

    #[test]
    fn small_arithmetic() {
        let f = gf(3);
        assert_eq!(f.add(Fe(2), Fe(2)), Fe(1));
        let f9 = Field::with_modulus(9, &[1, 0, 1]).unwrap();
        let x = f9.element(3).unwrap();
        assert_eq!(f9.mul(x, x), Fe(2));
        for q in [3, 5, 9, 25, 27] {
            let f = gf(q);
            assert_eq!(f.inv(Fe::ONE).unwrap(), Fe::ONE);
            assert_eq!(f.inv(Fe::ZERO), Err(FieldError::ZeroInverse));
        }
    }

    #[test]
    fn default_modulus_for_nine_is_x2_plus_1() {
        assert_eq!(gf(9).modulus(), &[1, 0, 1]);
    }

    #[test]
    fn modulus_validation() {
        assert!(matches!(Field::with_modulus(9, &[0, 0, 1]), Err(FieldError::ReducibleModulus(..))));
        assert!(matches!(Field::with_modulus(9, &[1, 1]), Err(FieldError::InvalidModulus(_))));
        assert!(matches!(Field::with_modulus(9, &[1, 0, 2]), Err(FieldError::InvalidModulus(_))));
        assert!(Field::with_modulus(9, &[2, 2, 1]).is_ok());
    }

    #[test]
    fn squares() {
        let f = gf(5);
        assert!(f.is_square(Fe(4)));
        assert!(!f.is_square(Fe(2)));
        assert!(f.is_square(Fe::ZERO));
        let f9 = gf(9);
        assert!(!f9.is_square(f9.primitive_element()));
    }

    #[test]
    fn square_roots() {
        assert_eq!(gf(7).sqrt(Fe(2)), Some(Fe(3)));
        assert_eq!(gf(5).sqrt(Fe(2)), None);
        for q in [3, 5, 7, 9, 13, 25, 27, 49] {
            let f = gf(q);
            assert_eq!(f.sqrt(Fe::ZERO), Some(Fe::ZERO));
            for x in f.elements() {
                // brute-force oracle: smallest-index root
                let brute = f.elements().find(|&y| f.mul(y, y) == x);
                assert_eq!(f.sqrt(x), brute, "q={q} x={x}");
            }
        }
    }

    #[test]
    fn canonical_nonsquares() {
        assert_eq!(gf(5).canonical_nonsquare(), Fe(2));
        assert_eq!(gf(3).canonical_nonsquare(), Fe(2));
        assert_eq!(gf(7).canonical_nonsquare(), Fe(3));
    }

    #[test]
    fn cubes() {
        let f = gf(7);
        assert_eq!(f.is_cube(Fe(1)), Ok(true));
        assert_eq!(f.is_cube(Fe(6)), Ok(true));
        assert_eq!(f.is_cube(Fe(2)), Ok(false));
        assert_eq!(f.is_cube(Fe::ZERO), Err(FieldError::ZeroCube));
        assert_eq!(gf(5).is_cube(Fe(2)), Err(FieldError::CubePrecondition(5)));
        // brute-force oracle
        for q in [7, 13, 25] {
            let f = gf(q);
            for x in f.nonzero() {
                let brute = f.elements().any(|y| f.mul(y, f.mul(y, y)) == x);
                assert_eq!(f.is_cube(x), Ok(brute));
            }
        }
    }

    #[test]
    fn quadratic_extension_embeds_homomorphically() {
        for q in [3, 5, 7, 9, 27] {
            let f = gf(q);
            let ext = f.quadratic_extension();
            assert_eq!(ext.field.q(), f.q() * f.q());
            assert_eq!(ext.embed(Fe::ONE), Fe::ONE);
            for a in f.elements() {
                assert!(ext.field.is_square(ext.embed(a)));
                for b in f.elements() {
                    assert_eq!(ext.embed(f.add(a, b)), ext.field.add(ext.embed(a), ext.embed(b)));
                    assert_eq!(ext.embed(f.mul(a, b)), ext.field.mul(ext.embed(a), ext.embed(b)));
                }
            }
        }
        let f5 = gf(5);
        let e = f5.quadratic_extension();
        assert_eq!(e.field.add(e.embed(Fe(2)), e.embed(Fe(3))), e.embed(Fe::ZERO));
    }

    #[test]
    fn untabled_field_matches_tabled_arithmetic() {
        // 3^7 = 2187 > TABLE_LIMIT
        let big = gf(2187);
        assert!(!big.has_tables());
        let x = Fe(5);
        let y = big.inv(x).unwrap();
        assert_eq!(big.mul(x, y), Fe::ONE);
        assert_eq!(big.add(x, big.neg(x)), Fe::ZERO);
        let r = big.sqrt(big.mul(x, x)).unwrap();
        assert_eq!(big.mul(r, r), big.mul(x, x));
    }

    #[test]
    fn primitive_elements_have_full_order() {
        for q in [3, 5, 7, 9, 25, 27] {
            let f = gf(q);
            let g = f.primitive_element();
            let mut seen = std::collections::HashSet::new();
            let mut x = Fe::ONE;
            for _ in 0..q - 1 {
                seen.insert(x);
                x = f.mul(x, g);
            }
            assert_eq!(seen.len() as u64, q - 1);
        }
    }
}
