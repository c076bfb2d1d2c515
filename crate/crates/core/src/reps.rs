//! Canonical representatives of the line and plane orbits, together with the
//! parameter searches their matrix families need.

use serde::Serialize;
use thiserror::Error;

use crate::classify::{LineOrbit, PlaneOrbit};
use crate::gf::{Fe, Field, FieldError};
use crate::linalg::Mat3;
use crate::pg::{self, PgError, Subspace, Vec6};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("{orbit} is not an orbit for q = {q}")]
    WrongCongruence { orbit: PlaneOrbit, q: u32 },
    #[error("no parameter satisfies {0} over GF({1})")]
    Infeasible(&'static str, u32),
    #[error(transparent)]
    Pg(#[from] PgError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Which square class `-v` must lie in for a (*) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarClass {
    Any,
    NegVSquare,
    NegVNonSquare,
}

/// `v λ^2 + u v λ - 1 != 0` for every λ.
pub fn satisfies_star(f: &Field, u: Fe, v: Fe) -> bool {
    f.elements().all(|l| {
        let t = f.add(f.mul(v, f.mul(l, l)), f.mul(f.mul(u, v), l));
        t != Fe::ONE
    })
}

/// `λ^3 + w λ^2 - u λ + v != 0` for every λ.
pub fn satisfies_doublestar(f: &Field, u: Fe, v: Fe, w: Fe) -> bool {
    f.elements().all(|l| {
        let l2 = f.mul(l, l);
        let t = f.add(f.sub(f.add(f.mul(l2, l), f.mul(w, l2)), f.mul(u, l)), v);
        !t.is_zero()
    })
}

/// `c ∉ {0,1}`, `-3c` a square, and `(√c+1)/(√c-1)` a non-cube in
/// GF(q)(√-3). Requires q ≢ 0 (mod 3).
pub fn satisfies_dagger(f: &Field, c: Fe) -> Result<bool, FieldError> {
    if c.is_zero() || c == Fe::ONE || !f.is_square(f.mul(f.from_int(-3), c)) {
        return Ok(false);
    }
    if f.q() % 3 == 1 {
        let s = f.sqrt(c).expect("-3 and -3c are squares, so c is");
        let x = f.div(f.add(s, Fe::ONE), f.sub(s, Fe::ONE))?;
        Ok(!f.is_cube(x)?)
    } else {
        // √-3 is not in GF(q), so the test runs in GF(q^2), where c has a root
        let ext = f.quadratic_extension();
        let g = &ext.field;
        let s = g.sqrt(ext.embed(c)).expect("every element of GF(q) is a square in GF(q^2)");
        let x = g.div(g.add(s, Fe::ONE), g.sub(s, Fe::ONE))?;
        Ok(!g.is_cube(x)?)
    }
}

/// All (*) pairs with `v != 0`, ordered by `u` then `v`.
pub fn star_params(f: &Field, class: StarClass) -> impl Iterator<Item = (Fe, Fe)> + '_ {
    f.elements().flat_map(move |u| f.nonzero().map(move |v| (u, v))).filter(move |&(u, v)| {
        let neg_sq = f.is_square(f.neg(v));
        let ok = match class {
            StarClass::Any => true,
            StarClass::NegVSquare => neg_sq,
            StarClass::NegVNonSquare => !neg_sq,
        };
        ok && satisfies_star(f, u, v)
    })
}

/// All (**) triples, ordered by `u`, then `v`, then `w`.
pub fn doublestar_params(f: &Field) -> impl Iterator<Item = (Fe, Fe, Fe)> + '_ {
    f.elements()
        .flat_map(move |u| f.elements().flat_map(move |v| f.elements().map(move |w| (u, v, w))))
        .filter(move |&(u, v, w)| satisfies_doublestar(f, u, v, w))
}

/// All (†) values in canonical order; empty when q ≡ 0 (mod 3).
pub fn dagger_params(f: &Field) -> Vec<Fe> {
    if f.q().is_multiple_of(3) {
        return Vec::new();
    }
    f.elements().filter(|&c| satisfies_dagger(f, c).unwrap_or(false)).collect()
}

pub fn find_star_params(f: &Field, class: StarClass) -> Result<(Fe, Fe), RepError> {
    star_params(f, class).next().ok_or(RepError::Infeasible("(*)", f.q()))
}

pub fn find_doublestar_params(f: &Field) -> Result<(Fe, Fe, Fe), RepError> {
    doublestar_params(f).next().ok_or(RepError::Infeasible("(**)", f.q()))
}

pub fn find_dagger_c(f: &Field) -> Result<Fe, RepError> {
    dagger_params(f).first().copied().ok_or(RepError::Infeasible("(†)", f.q()))
}

/// The parameters used by the representative families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RepParams {
    pub epsilon: Fe,
    /// (u, v) for o10.
    pub star: (Fe, Fe),
    /// (u, v) for o15,1, with -v a square.
    pub star_square: (Fe, Fe),
    /// (u, v) for o15,2, with -v a non-square.
    pub star_nonsquare: (Fe, Fe),
    /// (u, v, w) for o17.
    pub doublestar: (Fe, Fe, Fe),
    /// c for Σ14; absent when q ≡ 0 (mod 3).
    pub dagger: Option<Fe>,
}

impl RepParams {
    /// The smallest valid parameters.
    pub fn new(f: &Field) -> Result<RepParams, RepError> {
        Ok(RepParams {
            epsilon: f.canonical_nonsquare(),
            star: find_star_params(f, StarClass::Any)?,
            star_square: find_star_params(f, StarClass::NegVSquare)?,
            star_nonsquare: find_star_params(f, StarClass::NegVNonSquare)?,
            doublestar: find_doublestar_params(f)?,
            dagger: if f.q().is_multiple_of(3) { None } else { Some(find_dagger_c(f)?) },
        })
    }

    /// The `n`-th valid choice (from 0) in every search, if each search has
    /// that many solutions.
    pub fn nth(f: &Field, n: usize) -> Option<RepParams> {
        Some(RepParams {
            epsilon: f.canonical_nonsquare(),
            star: star_params(f, StarClass::Any).nth(n)?,
            star_square: star_params(f, StarClass::NegVSquare).nth(n)?,
            star_nonsquare: star_params(f, StarClass::NegVNonSquare).nth(n)?,
            doublestar: doublestar_params(f).nth(n)?,
            dagger: if f.q().is_multiple_of(3) { None } else { Some(*dagger_params(f).get(n)?) },
        })
    }
}

/// A matrix family written entrywise as linear forms in α, β, γ with
/// coefficients built from the parameters `u, v, w, ε, c` and `v⁻¹`.
#[derive(Debug, Clone, Copy)]
pub struct Template {
    pub rows: [[&'static str; 3]; 3],
    pub condition: &'static str,
}

const fn t(rows: [[&'static str; 3]; 3], condition: &'static str) -> Template {
    Template { rows, condition }
}

pub fn line_template(o: LineOrbit) -> Template {
    use LineOrbit::*;
    match o {
        O5 => t([["α", "0", "0"], ["0", "β", "0"], ["0", "0", "0"]], ""),
        O6 => t([["α", "β", "0"], ["β", "0", "0"], ["0", "0", "0"]], ""),
        O8_1 => t([["α", "0", "0"], ["0", "β", "0"], ["0", "0", "-β"]], ""),
        O8_2 => t([["α", "0", "0"], ["0", "β", "0"], ["0", "0", "-εβ"]], ""),
        O9 => t([["α", "0", "β"], ["0", "β", "0"], ["β", "0", "0"]], ""),
        O10 => t([["vα", "β", "0"], ["β", "α+uβ", "0"], ["0", "0", "0"]], "(*)"),
        O12 => t([["0", "α", "0"], ["α", "0", "β"], ["0", "β", "0"]], ""),
        O13_1 => t([["0", "α", "0"], ["α", "β", "0"], ["0", "0", "-β"]], ""),
        O13_2 => t([["0", "α", "0"], ["α", "β", "0"], ["0", "0", "-εβ"]], ""),
        O14_1 => t([["α", "0", "0"], ["0", "-α-β", "0"], ["0", "0", "β"]], ""),
        O14_2 => t([["α", "0", "0"], ["0", "-εα-εβ", "0"], ["0", "0", "β"]], ""),
        O15_1 => t([["vβ", "α", "0"], ["α", "uα+β", "0"], ["0", "0", "α"]], "-v square, (*)"),
        O15_2 => t([["vβ", "α", "0"], ["α", "uα+β", "0"], ["0", "0", "α"]], "-v non-square, (*)"),
        O16 => t([["0", "0", "α"], ["0", "α", "β"], ["α", "β", "0"]], ""),
        O17 => t([["v⁻¹α", "β", "0"], ["β", "uβ-wα", "α"], ["0", "α", "β"]], "(**)"),
    }
}

pub fn plane_template(o: PlaneOrbit) -> Template {
    use PlaneOrbit::*;
    match o {
        S1 => t([["α", "γ", "0"], ["γ", "β", "0"], ["0", "0", "0"]], ""),
        S2 => t([["α", "0", "0"], ["0", "β", "0"], ["0", "0", "γ"]], ""),
        S3 => t([["α", "0", "γ"], ["0", "β", "0"], ["γ", "0", "0"]], ""),
        S4 => t([["α", "0", "γ"], ["0", "β", "γ"], ["γ", "γ", "0"]], ""),
        S5 => t([["α", "0", "γ"], ["0", "β", "γ"], ["γ", "γ", "γ"]], ""),
        S6 => t([["α", "β", "0"], ["β", "εα", "0"], ["0", "0", "γ"]], ""),
        S7 => t([["α", "β", "γ"], ["β", "0", "0"], ["γ", "0", "0"]], ""),
        S8 => t([["α", "β", "0"], ["β", "0", "γ"], ["0", "γ", "0"]], ""),
        S9 => t([["α", "β", "0"], ["β", "γ", "0"], ["0", "0", "-γ"]], ""),
        S10 => t([["α", "β", "0"], ["β", "γ", "0"], ["0", "0", "-εγ"]], ""),
        S11 => t([["0", "β", "γ"], ["β", "α", "α"], ["γ", "α", "α+γ"]], ""),
        S12 => t([["α", "β", "0"], ["β", "γ", "β"], ["0", "β", "γ"]], ""),
        S13 => t([["α", "β", "0"], ["β", "γ", "β"], ["0", "β", "εγ"]], ""),
        S14 => t([["α", "β", "0"], ["β", "cγ", "β-γ"], ["0", "β-γ", "γ"]], "q ≢ 0 (mod 3), (†)"),
        S14Prime => t([["α+γ", "γ", "γ"], ["γ", "β+γ", "γ"], ["γ", "γ", "-β"]], "q ≡ 0 (mod 3)"),
        S15 => t([["α", "β", "γ"], ["β", "γ", "0"], ["γ", "0", "0"]], ""),
    }
}

/// Values of the symbols appearing in one template.
struct Symbols {
    u: Fe,
    v: Fe,
    w: Fe,
    eps: Fe,
    c: Fe,
}

/// Coefficient of variable `var` (0 = α, 1 = β, 2 = γ) in a linear entry such
/// as `uα+β`, `-εα-εβ` or `v⁻¹α`.
fn coefficient(f: &Field, sym: &Symbols, entry: &str, var: usize) -> Fe {
    let names = ['α', 'β', 'γ'];
    let mut total = Fe::ZERO;
    let mut chars = entry.chars().peekable();
    while chars.peek().is_some() {
        let mut sign = Fe::ONE;
        if let Some(&s) = chars.peek() {
            if s == '+' || s == '-' {
                if s == '-' {
                    sign = f.neg(Fe::ONE);
                }
                chars.next();
            }
        }
        let mut coeff = sign;
        let mut this_var = None;
        while let Some(&ch) = chars.peek() {
            if ch == '+' || ch == '-' {
                break;
            }
            chars.next();
            match ch {
                'u' => coeff = f.mul(coeff, sym.u),
                'w' => coeff = f.mul(coeff, sym.w),
                'ε' => coeff = f.mul(coeff, sym.eps),
                'c' => coeff = f.mul(coeff, sym.c),
                'v' => {
                    if chars.peek() == Some(&'⁻') {
                        chars.next();
                        chars.next();
                        coeff = f.mul(coeff, f.inv(sym.v).expect("v is non-zero"));
                    } else {
                        coeff = f.mul(coeff, sym.v);
                    }
                }
                '0' => coeff = Fe::ZERO,
                x => this_var = names.iter().position(|&n| n == x),
            }
        }
        if this_var == Some(var) {
            total = f.add(total, coeff);
        }
    }
    total
}

fn basis(f: &Field, template: &Template, sym: &Symbols, vars: usize) -> Vec<Vec6> {
    (0..vars)
        .map(|var| {
            let m: Mat3 =
                std::array::from_fn(|i| std::array::from_fn(|j| coefficient(f, sym, template.rows[i][j], var)));
            debug_assert_eq!(m, crate::linalg::transpose(&m));
            pg::sym_coords(&m)
        })
        .collect()
}

fn line_symbols(o: LineOrbit, p: &RepParams) -> Symbols {
    let (u, v, w) = match o {
        LineOrbit::O10 => (p.star.0, p.star.1, Fe::ZERO),
        LineOrbit::O15_1 => (p.star_square.0, p.star_square.1, Fe::ZERO),
        LineOrbit::O15_2 => (p.star_nonsquare.0, p.star_nonsquare.1, Fe::ZERO),
        LineOrbit::O17 => p.doublestar,
        _ => (Fe::ZERO, Fe::ONE, Fe::ZERO),
    };
    Symbols { u, v, w, eps: p.epsilon, c: Fe::ZERO }
}

/// The representative line of an orbit.
pub fn line_rep(f: &Field, p: &RepParams, o: LineOrbit) -> Result<Subspace, RepError> {
    let b = basis(f, &line_template(o), &line_symbols(o, p), 2);
    Ok(Subspace::line(f, &b[0], &b[1])?)
}

/// The representative plane of an orbit.
pub fn plane_rep(f: &Field, p: &RepParams, o: PlaneOrbit) -> Result<Subspace, RepError> {
    if !o.valid_for(f.q() as u64) {
        return Err(RepError::WrongCongruence { orbit: o, q: f.q() });
    }
    let sym = Symbols { u: Fe::ZERO, v: Fe::ONE, w: Fe::ZERO, eps: p.epsilon, c: p.dagger.unwrap_or(Fe::ZERO) };
    let b = basis(f, &plane_template(o), &sym, 3);
    Ok(Subspace::plane(f, &b[0], &b[1], &b[2])?)
}

/// The parameter assignments a line family uses, for display.
pub fn line_param_text(o: LineOrbit, p: &RepParams) -> String {
    let s = line_symbols(o, p);
    match o {
        LineOrbit::O8_2 | LineOrbit::O13_2 | LineOrbit::O14_2 => format!("ε = {}", p.epsilon),
        LineOrbit::O10 | LineOrbit::O15_1 | LineOrbit::O15_2 => format!("u = {}, v = {}", s.u, s.v),
        LineOrbit::O17 => format!("u = {}, v = {}, w = {}", s.u, s.v, s.w),
        _ => String::new(),
    }
}

pub fn plane_param_text(o: PlaneOrbit, p: &RepParams) -> String {
    match o {
        PlaneOrbit::S6 | PlaneOrbit::S10 | PlaneOrbit::S13 => format!("ε = {}", p.epsilon),
        PlaneOrbit::S14 => p.dagger.map(|c| format!("c = {c}")).unwrap_or_default(),
        _ => String::new(),
    }
}
