//! PG(2,q), PG(5,q) and the symmetric-matrix model of PG(5,q).
//!
//! A point `y = (y0, ..., y5)` of PG(5,q) is identified with the symmetric
//! matrix
//!
//! ```text
//!     | y0 y1 y2 |
//!     | y1 y3 y4 |
//!     | y2 y4 y5 |
//! ```
//!
//! and a ternary quadratic form is identified with its Gram matrix, so the
//! form `X0^2 + 2 X0 X1` is the point `(1, 1, 0, 0, 0, 0)`.

use std::collections::HashMap;

use thiserror::Error;

use crate::gf::{Fe, Field, FieldError};
use crate::linalg::{self, Mat3, Vec3};

pub type Vec6 = [Fe; 6];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PgError {
    #[error("the zero vector is not a projective point")]
    ZeroVector,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("expected a subspace of projective dimension {expected}, got {got}")]
    RankDeficient { expected: usize, got: isize },
    #[error("expected a plane, got a subspace of projective dimension {0}")]
    NotAPlane(usize),
    #[error("net file: {0}")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Matrix position of each coordinate, in the order `y0..y5`.
pub const SLOTS: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

pub fn sym_matrix(v: &Vec6) -> Mat3 {
    [[v[0], v[1], v[2]], [v[1], v[3], v[4]], [v[2], v[4], v[5]]]
}

pub fn sym_coords(m: &Mat3) -> Vec6 {
    SLOTS.map(|(i, j)| m[i][j])
}

/// A point of PG(5,q), normalised so its first non-zero coordinate is 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymPoint {
    coords: Vec6,
}

impl SymPoint {
    pub fn new(f: &Field, mut coords: Vec6) -> Result<SymPoint, PgError> {
        if !linalg::normalize(f, &mut coords) {
            return Err(PgError::ZeroVector);
        }
        Ok(SymPoint { coords })
    }

    pub fn from_matrix(f: &Field, m: &Mat3) -> Result<SymPoint, PgError> {
        if linalg::transpose(m) != *m {
            return Err(PgError::NotSymmetric);
        }
        SymPoint::new(f, sym_coords(m))
    }

    /// Builds a point from integer coordinates reduced into the prime field.
    pub fn from_ints(f: &Field, coords: [i64; 6]) -> Result<SymPoint, PgError> {
        SymPoint::new(f, coords.map(|c| f.from_int(c)))
    }

    /// Wraps coordinates that are already normalised.
    pub(crate) fn from_normalized(coords: Vec6) -> SymPoint {
        debug_assert!(coords.iter().find(|x| !x.is_zero()) == Some(&Fe::ONE));
        SymPoint { coords }
    }

    pub fn coords(&self) -> &Vec6 {
        &self.coords
    }

    pub fn matrix(&self) -> Mat3 {
        sym_matrix(&self.coords)
    }

    pub fn rank(&self, f: &Field) -> usize {
        linalg::rank3(f, &self.matrix())
    }
}

/// The Veronese map `(x0,x1,x2) -> (x0^2, x0x1, x0x2, x1^2, x1x2, x2^2)`.
pub fn veronese(f: &Field, x: &Vec3) -> Result<SymPoint, PgError> {
    let m = |i: usize, j: usize| f.mul(x[i], x[j]);
    SymPoint::new(f, [m(0, 0), m(0, 1), m(0, 2), m(1, 1), m(1, 2), m(2, 2)])
}

/// Rank of the symmetric matrix of a point (1, 2 or 3).
pub fn rank(f: &Field, p: &SymPoint) -> usize {
    p.rank(f)
}

/// A projective subspace of PG(5,q) held as its reduced row echelon basis.
/// Two subspaces are equal exactly when their bases are identical.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subspace {
    basis: Vec<Vec6>,
    pivots: Vec<usize>,
}

impl Subspace {
    /// Span of the given vectors; fails only if they are all zero.
    pub fn span(f: &Field, vectors: &[Vec6]) -> Result<Subspace, PgError> {
        let mut rows = vectors.to_vec();
        let pivots = linalg::rref(f, &mut rows);
        if rows.is_empty() {
            return Err(PgError::ZeroVector);
        }
        Ok(Subspace { basis: rows, pivots })
    }

    /// Span of vectors that must have projective dimension `dim`.
    pub fn with_dim(f: &Field, vectors: &[Vec6], dim: usize) -> Result<Subspace, PgError> {
        let s = Subspace::span(f, vectors).map_err(|_| PgError::RankDeficient { expected: dim, got: -1 })?;
        if s.dim() != dim {
            return Err(PgError::RankDeficient { expected: dim, got: s.dim() as isize });
        }
        Ok(s)
    }

    pub fn line(f: &Field, a: &Vec6, b: &Vec6) -> Result<Subspace, PgError> {
        Subspace::with_dim(f, &[*a, *b], 1)
    }

    pub fn plane(f: &Field, a: &Vec6, b: &Vec6, c: &Vec6) -> Result<Subspace, PgError> {
        Subspace::with_dim(f, &[*a, *b, *c], 2)
    }

    /// Projective dimension: 0 point, 1 line, 2 plane.
    pub fn dim(&self) -> usize {
        self.basis.len() - 1
    }

    pub fn basis(&self) -> &[Vec6] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Membership test by reduction against the echelon basis.
    pub fn contains(&self, f: &Field, v: &Vec6) -> bool {
        let mut r = *v;
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            let c = r[pc];
            if !c.is_zero() {
                for (x, &y) in r.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        r.iter().all(|x| x.is_zero())
    }

    pub fn contains_subspace(&self, f: &Field, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(f, v))
    }

    /// `sum_i coeffs[i] * basis[i]`.
    pub fn combine(&self, f: &Field, coeffs: &[Fe]) -> Vec6 {
        let mut out = [Fe::ZERO; 6];
        for (row, &c) in self.basis.iter().zip(coeffs) {
            if c.is_zero() {
                continue;
            }
            for (x, &y) in out.iter_mut().zip(row) {
                *x = f.add(*x, f.mul(c, y));
            }
        }
        out
    }

    /// All points, in the order of the normalised coefficient vectors of
    /// PG(dim, q). Combining echelon rows with a normalised coefficient
    /// vector already yields a normalised point.
    pub fn points(&self, f: &Field) -> Vec<SymPoint> {
        match self.basis.len() {
            1 => vec![SymPoint::from_normalized(self.basis[0])],
            2 => linalg::projective_points::<2>(f)
                .iter()
                .map(|c| SymPoint::from_normalized(self.combine(f, c)))
                .collect(),
            3 => linalg::projective_points::<3>(f)
                .iter()
                .map(|c| SymPoint::from_normalized(self.combine(f, c)))
                .collect(),
            n => {
                // higher-dimensional subspaces are not needed on hot paths
                let mut out = Vec::new();
                let q = f.q() as u64;
                let total = q.pow(n as u32);
                for code in 1..total {
                    let mut coeffs = vec![Fe::ZERO; n];
                    let mut c = code;
                    for x in coeffs.iter_mut() {
                        *x = f.element(c % q).unwrap();
                        c /= q;
                    }
                    let mut v = self.combine(f, &coeffs);
                    if linalg::normalize(f, &mut v) {
                        out.push(SymPoint::from_normalized(v));
                    }
                }
                out.sort();
                out.dedup();
                out
            }
        }
    }

    /// All lines of a plane, in the order of the dual points of PG(2,q).
    pub fn plane_lines(&self, f: &Field) -> Result<Vec<Subspace>, PgError> {
        if self.dim() != 2 {
            return Err(PgError::NotAPlane(self.dim()));
        }
        let incidence = PlaneIncidence::new(f);
        Ok(incidence
            .lines
            .iter()
            .map(|pts| {
                let a = self.combine(f, &incidence.points[pts[0] as usize]);
                let b = self.combine(f, &incidence.points[pts[1] as usize]);
                Subspace::line(f, &a, &b).expect("distinct points span a line")
            })
            .collect())
    }
}

/// Every subspace of PG(5,q) of projective dimension `dim`, by running over
/// reduced row echelon forms: pivot columns first, then the free entries.
pub fn all_subspaces(f: &Field, dim: usize) -> Vec<Subspace> {
    let k = dim + 1;
    let q = f.q() as u64;
    let mut out = Vec::new();
    for mask in 0u32..64 {
        if mask.count_ones() as usize != k {
            continue;
        }
        let pivots: Vec<usize> = (0..6).filter(|&c| mask & (1 << c) != 0).collect();
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &pc)| (pc + 1..6).filter(|c| mask & (1 << c) == 0).map(move |c| (r, c)))
            .collect();
        for code in 0..q.pow(free.len() as u32) {
            let mut basis = vec![[Fe::ZERO; 6]; k];
            for (r, &pc) in pivots.iter().enumerate() {
                basis[r][pc] = Fe::ONE;
            }
            let mut c = code;
            for &(r, col) in free.iter().rev() {
                basis[r][col] = f.element(c % q).unwrap();
                c /= q;
            }
            out.push(Subspace { basis, pivots: pivots.clone() });
        }
    }
    out.sort();
    out
}

/// Gaussian binomial `[n choose k]_q`.
pub fn gaussian_binomial(n: u32, k: u32, q: u64) -> u64 {
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= (q as u128).pow(n - i) - 1;
        den *= (q as u128).pow(i + 1) - 1;
    }
    (num / den) as u64
}

/// Point-line incidence of PG(2,q) in normalised coordinates.
#[derive(Debug, Clone)]
pub struct PlaneIncidence {
    pub points: Vec<Vec3>,
    /// Point indices on each line; line `i` has dual coordinates `points[i]`.
    pub lines: Vec<Vec<u32>>,
}

impl PlaneIncidence {
    pub fn new(f: &Field) -> PlaneIncidence {
        let points = linalg::projective_points::<3>(f);
        let pairs = linalg::projective_points::<2>(f);
        let lines = points
            .iter()
            .map(|dual| {
                // two independent solutions of dual . x = 0 spanning the line
                let m = [*dual, [Fe::ZERO; 3], [Fe::ZERO; 3]];
                let ker = linalg::kernel3(f, &m);
                let mut idx: Vec<u32> = pairs
                    .iter()
                    .map(|c| {
                        let mut x = [Fe::ZERO; 3];
                        for (i, xi) in x.iter_mut().enumerate() {
                            *xi = f.add(f.mul(c[0], ker[0][i]), f.mul(c[1], ker[1][i]));
                        }
                        linalg::normalize(f, &mut x);
                        pg2_index(f, &x) as u32
                    })
                    .collect();
                idx.sort_unstable();
                idx
            })
            .collect();
        PlaneIncidence { points, lines }
    }
}

/// Position of a normalised point of PG(2,q) in [`linalg::projective_points`].
pub fn pg2_index(f: &Field, x: &Vec3) -> usize {
    let q = f.q() as usize;
    let (a, b, c) = (x[0].index() as usize, x[1].index() as usize, x[2].index() as usize);
    if a != 0 {
        b * q + c
    } else if b != 0 {
        q * q + c
    } else {
        q * q + q
    }
}

/// Three ternary quadratic forms, each given by the coefficients of
/// `X0^2, X0X1, X0X2, X1^2, X1X2, X2^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetInput {
    pub forms: [Vec6; 3],
}

impl NetInput {
    /// Parses three lines of six canonical element indices. `#` starts a
    /// comment; blank lines are ignored.
    pub fn parse(f: &Field, text: &str) -> Result<NetInput, PgError> {
        let mut forms = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let vals: Vec<&str> = line.split_whitespace().collect();
            if vals.len() != 6 {
                return Err(PgError::Parse(format!(
                    "line {}: expected 6 coefficients, found {}",
                    lineno + 1,
                    vals.len()
                )));
            }
            let mut form = [Fe::ZERO; 6];
            for (slot, v) in form.iter_mut().zip(vals) {
                let n: u64 = v
                    .parse()
                    .map_err(|_| PgError::Parse(format!("line {}: `{v}` is not an element index", lineno + 1)))?;
                *slot = f.element(n)?;
            }
            forms.push(form);
        }
        let forms: [Vec6; 3] =
            forms.try_into().map_err(|v: Vec<Vec6>| PgError::Parse(format!("expected 3 forms, found {}", v.len())))?;
        Ok(NetInput { forms })
    }

    /// The net whose conics have the basis points of `plane` as Gram matrices.
    pub fn from_plane(f: &Field, plane: &Subspace) -> Result<NetInput, PgError> {
        if plane.dim() != 2 {
            return Err(PgError::NotAPlane(plane.dim()));
        }
        let two = f.from_int(2);
        let form = |y: &Vec6| [y[0], f.mul(two, y[1]), f.mul(two, y[2]), y[3], f.mul(two, y[4]), y[5]];
        Ok(NetInput { forms: [form(&plane.basis[0]), form(&plane.basis[1]), form(&plane.basis[2])] })
    }

    /// Gram matrix of each form, as a point vector (off-diagonal terms halved).
    pub fn gram_vectors(&self, f: &Field) -> [Vec6; 3] {
        let half = f.inv(f.from_int(2)).expect("q is odd");
        self.forms.map(|a| [a[0], f.mul(half, a[1]), f.mul(half, a[2]), a[3], f.mul(half, a[4]), a[5]])
    }
}

/// The point of PG(5,q) of a conic: its Gram matrix.
pub fn conic_point(f: &Field, form: &Vec6) -> Result<SymPoint, PgError> {
    let net = NetInput { forms: [*form, [Fe::ZERO; 6], [Fe::ZERO; 6]] };
    SymPoint::new(f, net.gram_vectors(f)[0])
}

/// The plane of a net; fails if the three forms are linearly dependent.
pub fn net_to_plane(f: &Field, net: &NetInput) -> Result<Subspace, PgError> {
    let [a, b, c] = net.gram_vectors(f);
    Subspace::plane(f, &a, &b, &c)
}

/// Exponents of the ten cubic monomials in `x, y, z`.
pub const CUBIC_MONOMIALS: [[u8; 3]; 10] =
    [[3, 0, 0], [2, 1, 0], [2, 0, 1], [1, 2, 0], [1, 1, 1], [1, 0, 2], [0, 3, 0], [0, 2, 1], [0, 1, 2], [0, 0, 3]];

/// A ternary cubic, coefficients in [`CUBIC_MONOMIALS`] order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CubicForm {
    pub coeffs: [Fe; 10],
}

impl CubicForm {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, f: &Field, p: &Vec3) -> Fe {
        f.sum(CUBIC_MONOMIALS.iter().zip(&self.coeffs).map(|(e, &c)| {
            let mut t = c;
            for (k, &ek) in e.iter().enumerate() {
                t = f.mul(t, f.pow(p[k], ek as u64));
            }
            t
        }))
    }

    pub fn zero_locus(&self, f: &Field) -> Vec<Vec3> {
        linalg::projective_points::<3>(f).into_iter().filter(|p| self.eval(f, p).is_zero()).collect()
    }
}

/// The discriminant `det(x A1 + y A2 + z A3)` of a net, with `Ai` the Gram
/// matrices of its forms. It vanishes exactly at the singular conics.
pub fn discriminant_cubic(f: &Field, net: &NetInput) -> CubicForm {
    let grams = net.gram_vectors(f).map(|v| sym_matrix(&v));
    // entry (i,j) is the linear form sum_t grams[t][i][j] * var_t
    let lin = |i: usize, j: usize| -> Vec3 { [grams[0][i][j], grams[1][i][j], grams[2][i][j]] };
    let mut index: HashMap<[u8; 3], usize> = HashMap::new();
    for (k, e) in CUBIC_MONOMIALS.iter().enumerate() {
        index.insert(*e, k);
    }
    let mut coeffs = [Fe::ZERO; 10];
    const PERMS: [([usize; 3], bool); 6] = [
        ([0, 1, 2], true),
        ([0, 2, 1], false),
        ([1, 0, 2], false),
        ([1, 2, 0], true),
        ([2, 0, 1], true),
        ([2, 1, 0], false),
    ];
    for (perm, even) in PERMS {
        let (l0, l1, l2) = (lin(0, perm[0]), lin(1, perm[1]), lin(2, perm[2]));
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    let mut e = [0u8; 3];
                    e[a] += 1;
                    e[b] += 1;
                    e[c] += 1;
                    let t = f.mul(l0[a], f.mul(l1[b], l2[c]));
                    let slot = &mut coeffs[index[&e]];
                    *slot = if even { f.add(*slot, t) } else { f.sub(*slot, t) };
                }
            }
        }
    }
    CubicForm { coeffs }
}
