//! Small dense linear algebra over a [`Field`]: 3x3 matrices and row echelon
//! forms of short coordinate vectors.

use crate::gf::{Fe, Field};

pub type Mat3 = [[Fe; 3]; 3];
pub type Vec3 = [Fe; 3];

pub const IDENTITY: Mat3 =
    [[Fe::ONE, Fe::ZERO, Fe::ZERO], [Fe::ZERO, Fe::ONE, Fe::ZERO], [Fe::ZERO, Fe::ZERO, Fe::ONE]];

pub fn det3(f: &Field, m: &Mat3) -> Fe {
    let minor = |a: Fe, b: Fe, c: Fe, d: Fe| f.sub(f.mul(a, d), f.mul(b, c));
    let t0 = f.mul(m[0][0], minor(m[1][1], m[1][2], m[2][1], m[2][2]));
    let t1 = f.mul(m[0][1], minor(m[1][0], m[1][2], m[2][0], m[2][2]));
    let t2 = f.mul(m[0][2], minor(m[1][0], m[1][1], m[2][0], m[2][1]));
    f.add(f.sub(t0, t1), t2)
}

/// Determinant of the 2x2 matrix left after deleting row `i` and column `i`.
pub fn principal_minor(f: &Field, m: &Mat3, i: usize) -> Fe {
    let (a, b) = match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    f.sub(f.mul(m[a][a], m[b][b]), f.mul(m[a][b], m[b][a]))
}

pub fn mat_mul(f: &Field, a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[Fe::ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = Fe::ZERO;
            for k in 0..3 {
                acc = f.add(acc, f.mul(a[i][k], b[k][j]));
            }
            out[i][j] = acc;
        }
    }
    out
}

pub fn transpose(a: &Mat3) -> Mat3 {
    let mut t = *a;
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = a[j][i];
        }
    }
    t
}

pub fn mat_vec(f: &Field, a: &Mat3, x: &Vec3) -> Vec3 {
    let mut out = [Fe::ZERO; 3];
    for (i, row) in a.iter().enumerate() {
        out[i] = f.sum((0..3).map(|k| f.mul(row[k], x[k])));
    }
    out
}

/// `v^T M v`.
pub fn quadratic_value(f: &Field, m: &Mat3, v: &Vec3) -> Fe {
    let mv = mat_vec(f, m, v);
    f.sum((0..3).map(|i| f.mul(v[i], mv[i])))
}

/// Reduced row echelon form in place; zero rows are dropped. Returns the pivot
/// columns.
pub fn rref<const N: usize>(f: &Field, rows: &mut Vec<[Fe; N]>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..N {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = f.inv(rows[r][c]).expect("pivot is non-zero");
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row = rows[r];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = f.sub(*x, f.mul(factor, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank3(f: &Field, m: &Mat3) -> usize {
    let mut rows = m.to_vec();
    rref(f, &mut rows).len()
}

/// Basis of the right kernel `{v : M v = 0}` read off the echelon form, one
/// vector per free column in increasing column order.
pub fn kernel3(f: &Field, m: &Mat3) -> Vec<Vec3> {
    let mut rows = m.to_vec();
    let pivots = rref(f, &mut rows);
    let free: Vec<usize> = (0..3).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = [Fe::ZERO; 3];
            v[fc] = Fe::ONE;
            for (row, &pc) in rows.iter().zip(&pivots) {
                v[pc] = f.neg(row[fc]);
            }
            v
        })
        .collect()
}

/// Scales a non-zero vector so its first non-zero entry is 1.
pub fn normalize<const N: usize>(f: &Field, v: &mut [Fe; N]) -> bool {
    let Some(lead) = v.iter().copied().find(|x| !x.is_zero()) else {
        return false;
    };
    if lead != Fe::ONE {
        let inv = f.inv(lead).expect("non-zero");
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
    }
    true
}

/// Normalised representatives of the points of PG(n-1, q), ordered by the
/// position of the leading 1 and then by the remaining coordinates.
pub fn projective_points<const N: usize>(f: &Field) -> Vec<[Fe; N]> {
    let q = f.q() as usize;
    let mut out = Vec::new();
    for lead in 0..N {
        let tail = N - lead - 1;
        let count = q.pow(tail as u32);
        for code in 0..count {
            let mut v = [Fe::ZERO; N];
            v[lead] = Fe::ONE;
            let mut c = code;
            for i in (lead + 1..N).rev() {
                v[i] = f.element((c % q) as u64).unwrap();
                c /= q;
            }
            out.push(v);
        }
    }
    out
}
