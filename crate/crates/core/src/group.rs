//! PGL(3,q) acting on PG(5,q) by `M -> A M A^T`: enumeration, random
//! elements, orbits and brute-force stabilizers.

use std::collections::{HashSet, VecDeque};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::gf::{Fe, Field};
use crate::linalg::{self, Mat3, Vec3, IDENTITY};
use crate::pg::{self, Subspace, SymPoint, Vec6};

/// Largest q for which a full stabilizer scan runs without `force`.
pub const STABILIZER_FREE_LIMIT: u32 = 7;
/// Largest q for which a full stabilizer scan runs at all.
pub const STABILIZER_HARD_LIMIT: u32 = 13;
/// Largest q for which an orbit search runs without `force`.
pub const ORBIT_FREE_LIMIT: u32 = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("matrix is singular")]
    Singular,
    #[error("a full scan of PGL(3,{0}) is expensive; pass --force to run it")]
    NeedsForce(u32),
    #[error("a full scan of PGL(3,{0}) is beyond the supported range (q <= {1})")]
    TooLarge(u32, u32),
}

/// An element of PGL(3,q): an invertible matrix scaled so that its first
/// non-zero entry in row-major order is 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GroupElement {
    a: Mat3,
}

impl GroupElement {
    pub fn new(f: &Field, a: Mat3) -> Result<GroupElement, GroupError> {
        if linalg::det3(f, &a).is_zero() {
            return Err(GroupError::Singular);
        }
        Ok(GroupElement { a: normalize_matrix(f, a) })
    }

    pub fn identity() -> GroupElement {
        GroupElement { a: IDENTITY }
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.a
    }

    pub fn is_identity(&self) -> bool {
        self.a == IDENTITY
    }

    /// `self ∘ other`: acting by the product acts by `other` first.
    pub fn compose(&self, f: &Field, other: &GroupElement) -> GroupElement {
        GroupElement { a: normalize_matrix(f, linalg::mat_mul(f, &self.a, &other.a)) }
    }

    pub fn inverse(&self, f: &Field) -> GroupElement {
        let mut rows = vec![[Fe::ZERO; 6]; 3];
        for (i, row) in rows.iter_mut().enumerate() {
            row[..3].copy_from_slice(&self.a[i]);
            row[3 + i] = Fe::ONE;
        }
        linalg::rref(f, &mut rows);
        let inv: Mat3 = std::array::from_fn(|i| std::array::from_fn(|j| rows[i][3 + j]));
        GroupElement { a: normalize_matrix(f, inv) }
    }

    /// Order in PGL(3,q).
    pub fn order(&self, f: &Field) -> u64 {
        let mut g = *self;
        let mut n = 1;
        while !g.is_identity() {
            g = g.compose(f, self);
            n += 1;
        }
        n
    }

    /// `A M A^T` without normalisation.
    pub fn act_vec(&self, f: &Field, y: &Vec6) -> Vec6 {
        let m = pg::sym_matrix(y);
        let am = linalg::mat_mul(f, &self.a, &m);
        let a = &self.a;
        pg::SLOTS.map(|(i, j)| f.sum((0..3).map(|k| f.mul(am[i][k], a[j][k]))))
    }

    pub fn act_point(&self, f: &Field, p: &SymPoint) -> SymPoint {
        SymPoint::new(f, self.act_vec(f, p.coords())).expect("the action is invertible")
    }

    pub fn act_subspace(&self, f: &Field, s: &Subspace) -> Subspace {
        let images: Vec<Vec6> = s.basis().iter().map(|v| self.act_vec(f, v)).collect();
        Subspace::span(f, &images).expect("the action is invertible")
    }

    /// Whether the element maps `s` onto itself.
    pub fn fixes(&self, f: &Field, s: &Subspace) -> bool {
        s.basis().iter().all(|v| s.contains(f, &self.act_vec(f, v)))
    }

    /// The induced map on PG(2,q): `x -> A x`.
    pub fn act_plane_point(&self, f: &Field, x: &Vec3) -> Vec3 {
        linalg::mat_vec(f, &self.a, x)
    }
}

fn normalize_matrix(f: &Field, a: Mat3) -> Mat3 {
    let mut flat: [Fe; 9] = std::array::from_fn(|i| a[i / 3][i % 3]);
    linalg::normalize(f, &mut flat);
    std::array::from_fn(|i| std::array::from_fn(|j| flat[3 * i + j]))
}

pub fn group_order(q: u64) -> u64 {
    q.pow(3) * (q.pow(3) - 1) * (q * q - 1)
}

fn all_vectors(f: &Field) -> Vec<Vec3> {
    let q = f.q() as u64;
    (0..q.pow(3))
        .map(|code| {
            let mut v = [Fe::ZERO; 3];
            let mut c = code;
            for x in v.iter_mut().rev() {
                *x = f.element(c % q).unwrap();
                c /= q;
            }
            v
        })
        .collect()
}

fn independent2(f: &Field, a: &Vec3, b: &Vec3) -> bool {
    (0..3).any(|i| (i + 1..3).any(|j| !f.sub(f.mul(a[i], b[j]), f.mul(a[j], b[i])).is_zero()))
}

/// The group elements whose first row is `first` (a normalised vector), in a
/// fixed order.
fn with_first_row<'a>(f: &'a Field, first: Vec3, vectors: &'a [Vec3]) -> impl Iterator<Item = GroupElement> + 'a {
    vectors.iter().filter(move |r2| independent2(f, &first, r2)).flat_map(move |r2| {
        vectors.iter().filter_map(move |r3| {
            let a = [first, *r2, *r3];
            (!linalg::det3(f, &a).is_zero()).then_some(GroupElement { a })
        })
    })
}

/// Every element of PGL(3,q) exactly once.
pub fn enumerate(f: &Field) -> impl Iterator<Item = GroupElement> + '_ {
    let vectors = all_vectors(f);
    linalg::projective_points::<3>(f)
        .into_iter()
        .flat_map(move |r1| with_first_row(f, r1, &vectors).collect::<Vec<_>>())
}

/// Visits every element of PGL(3,q) in parallel and keeps those passing
/// `keep`, in enumeration order regardless of the thread count.
pub fn par_filter<F>(f: &Field, keep: F) -> Vec<GroupElement>
where
    F: Fn(&GroupElement) -> bool + Sync,
{
    let vectors = all_vectors(f);
    let firsts = linalg::projective_points::<3>(f);
    firsts
        .par_iter()
        .map(|&r1| with_first_row(f, r1, &vectors).filter(|g| keep(g)).collect::<Vec<_>>())
        .collect::<Vec<_>>()
        .concat()
}

/// A uniformly random element.
pub fn random<R: Rng + ?Sized>(f: &Field, rng: &mut R) -> GroupElement {
    let q = f.q() as u64;
    loop {
        let a: Mat3 = std::array::from_fn(|_| std::array::from_fn(|_| f.element(rng.gen_range(0..q)).unwrap()));
        if let Ok(g) = GroupElement::new(f, a) {
            return g;
        }
    }
}

/// Transvections `I + t E_ij` for `t` running over an additive basis of
/// GF(q) over GF(p), and `diag(ω, 1, 1)` for a primitive element `ω`.
pub fn generators(f: &Field) -> Vec<GroupElement> {
    let mut out = Vec::new();
    let mut t = Fe::ONE;
    for _ in 0..f.k() {
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    let mut a = IDENTITY;
                    a[i][j] = t;
                    out.push(GroupElement::new(f, a).unwrap());
                }
            }
        }
        t = f.mul(t, f.generator());
    }
    let mut d = IDENTITY;
    d[0][0] = f.primitive_element();
    out.push(GroupElement::new(f, d).unwrap());
    out
}

fn guard(q: u32, free: u32, force: bool) -> Result<(), GroupError> {
    if q > STABILIZER_HARD_LIMIT {
        Err(GroupError::TooLarge(q, STABILIZER_HARD_LIMIT))
    } else if q > free && !force {
        Err(GroupError::NeedsForce(q))
    } else {
        Ok(())
    }
}

/// All elements fixing `s`, by a full scan of the group.
pub fn stabilizer(f: &Field, s: &Subspace, force: bool) -> Result<Vec<GroupElement>, GroupError> {
    guard(f.q(), STABILIZER_FREE_LIMIT, force)?;
    Ok(par_filter(f, |g| g.fixes(f, s)))
}

pub fn stabilizer_order(f: &Field, s: &Subspace, force: bool) -> Result<u64, GroupError> {
    Ok(stabilizer(f, s, force)?.len() as u64)
}

/// The orbit of `s`, by breadth-first search over [`generators`].
pub fn orbit_bfs(f: &Field, s: &Subspace, force: bool) -> Result<HashSet<Subspace>, GroupError> {
    guard(f.q(), ORBIT_FREE_LIMIT, force)?;
    let gens = generators(f);
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(s.clone());
    queue.push_back(s.clone());
    while let Some(t) = queue.pop_front() {
        for g in &gens {
            let img = g.act_subspace(f, &t);
            if !seen.contains(&img) {
                seen.insert(img.clone());
                queue.push_back(img);
            }
        }
    }
    Ok(seen)
}

/// Whether the elements commute pairwise.
pub fn is_abelian(f: &Field, elements: &[GroupElement]) -> bool {
    elements.iter().all(|g| elements.iter().all(|h| g.compose(f, h) == h.compose(f, g)))
}

/// Whether some element generates the whole set.
pub fn is_cyclic(f: &Field, elements: &[GroupElement]) -> bool {
    let n = elements.len() as u64;
    elements.iter().any(|g| g.order(f) == n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pg::veronese;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn enumeration_counts_and_uniqueness() {
        let f = Field::new(3).unwrap();
        let all: Vec<GroupElement> = enumerate(&f).collect();
        assert_eq!(all.len(), 5616);
        let set: HashSet<GroupElement> = all.iter().copied().collect();
        assert_eq!(set.len(), 5616);
        for g in &all {
            assert_eq!(GroupElement::new(&f, *g.matrix()).unwrap(), *g);
        }
        assert_eq!(par_filter(&f, |_| true), all);
    }

    #[test]
    fn order_five() {
        let f = Field::new(5).unwrap();
        assert_eq!(par_filter(&f, |_| true).len() as u64, group_order(5));
        assert_eq!(group_order(5), 372000);
    }

    #[test]
    fn action_commutes_with_veronese() {
        let f = Field::new(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let g = random(&f, &mut rng);
            let x: Vec3 = loop {
                let x = std::array::from_fn(|_| f.element(rng.gen_range(0..7)).unwrap());
                if x != [Fe::ZERO; 3] {
                    break x;
                }
            };
            assert_eq!(g.act_point(&f, &veronese(&f, &x).unwrap()), veronese(&f, &g.act_plane_point(&f, &x)).unwrap());
        }
    }

    #[test]
    fn swap_moves_the_first_square() {
        let f = Field::new(5).unwrap();
        let swap = GroupElement::new(
            &f,
            [[Fe::ZERO, Fe::ONE, Fe::ZERO], [Fe::ONE, Fe::ZERO, Fe::ZERO], [Fe::ZERO, Fe::ZERO, Fe::ONE]],
        )
        .unwrap();
        let p = SymPoint::from_ints(&f, [1, 0, 0, 0, 0, 0]).unwrap();
        assert_eq!(swap.act_point(&f, &p), SymPoint::from_ints(&f, [0, 0, 0, 1, 0, 0]).unwrap());
    }

    #[test]
    fn action_law_and_inverses() {
        let f = Field::new(9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let e = |i: usize| {
            let mut v = [Fe::ZERO; 6];
            v[i] = Fe::ONE;
            v
        };
        let s = Subspace::plane(&f, &e(0), &e(1), &[1, 0, 2, 0, 1, 1].map(|c| f.from_int(c))).unwrap();
        for _ in 0..50 {
            let g = random(&f, &mut rng);
            let h = random(&f, &mut rng);
            assert_eq!(g.compose(&f, &h).act_subspace(&f, &s), g.act_subspace(&f, &h.act_subspace(&f, &s)));
            assert!(g.compose(&f, &g.inverse(&f)).is_identity());
            assert_eq!(GroupElement::identity().act_subspace(&f, &s), s);
            let p = SymPoint::new(&f, s.basis()[2]).unwrap();
            assert_eq!(g.act_point(&f, &p).rank(&f), p.rank(&f));
        }
    }

    #[test]
    fn generators_reach_the_whole_group_at_three() {
        let f = Field::new(3).unwrap();
        let gens = generators(&f);
        let mut seen: HashSet<GroupElement> = HashSet::new();
        let mut queue = VecDeque::from([GroupElement::identity()]);
        seen.insert(GroupElement::identity());
        while let Some(g) = queue.pop_front() {
            for h in &gens {
                let x = h.compose(&f, &g);
                if seen.insert(x) {
                    queue.push_back(x);
                }
            }
        }
        assert_eq!(seen.len(), 5616);
    }

    #[test]
    fn guards() {
        let f = Field::new(9).unwrap();
        let s = Subspace::line(
            &f,
            &[Fe::ONE, Fe::ZERO, Fe::ZERO, Fe::ZERO, Fe::ZERO, Fe::ZERO],
            &[Fe::ZERO, Fe::ZERO, Fe::ZERO, Fe::ONE, Fe::ZERO, Fe::ZERO],
        )
        .unwrap();
        assert_eq!(stabilizer(&f, &s, false), Err(GroupError::NeedsForce(9)));
        assert_eq!(orbit_bfs(&f, &s, false).map(|o| o.len()), Err(GroupError::NeedsForce(9)));
        let big = Field::new(17).unwrap();
        let s17 = Subspace::line(
            &big,
            &[Fe::ONE, Fe::ZERO, Fe::ZERO, Fe::ZERO, Fe::ZERO, Fe::ZERO],
            &[Fe::ZERO, Fe::ZERO, Fe::ZERO, Fe::ONE, Fe::ZERO, Fe::ZERO],
        )
        .unwrap();
        assert_eq!(stabilizer(&big, &s17, true), Err(GroupError::TooLarge(17, 13)));
    }
}
