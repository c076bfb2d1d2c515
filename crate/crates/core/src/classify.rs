//! Orbit classification of points, lines and rank-one planes of PG(5,q) under
//! the congruence action of PGL(3,q).

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::gf::Field;
use crate::linalg::{self, Mat3};
use crate::pg::{self, PlaneIncidence, Subspace, SymPoint, Vec6};
use crate::tables;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("the plane contains no rank-1 point, so it is not a rank-one net")]
    NotRankOne,
    #[error("expected a subspace of projective dimension {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PointClass {
    Rank1,
    Rank2Exterior,
    Rank2Interior,
    Rank3,
}

/// Counts `[n1, n2e, n2i, n3]` of point classes in a subspace.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PointDistribution {
    pub n1: u64,
    pub n2e: u64,
    pub n2i: u64,
    pub n3: u64,
}

impl PointDistribution {
    pub fn new(n1: u64, n2e: u64, n2i: u64, n3: u64) -> PointDistribution {
        PointDistribution { n1, n2e, n2i, n3 }
    }

    pub fn add(&mut self, c: PointClass) {
        match c {
            PointClass::Rank1 => self.n1 += 1,
            PointClass::Rank2Exterior => self.n2e += 1,
            PointClass::Rank2Interior => self.n2i += 1,
            PointClass::Rank3 => self.n3 += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.n1 + self.n2e + self.n2i + self.n3
    }

    pub fn as_array(&self) -> [u64; 4] {
        [self.n1, self.n2e, self.n2i, self.n3]
    }
}

impl fmt::Display for PointDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}, {}]", self.n1, self.n2e, self.n2i, self.n3)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown orbit label `{0}`")]
pub struct UnknownLabel(pub String);

fn squash(s: &str) -> String {
    s.chars()
        .filter(|c| !matches!(c, ',' | '_' | '.' | ' ' | '-'))
        .map(|c| match c {
            '₀'..='₉' => char::from_digit(c as u32 - '₀' as u32, 10).unwrap(),
            '′' | 'p' => '\'',
            'Σ' | 's' => 'S',
            'O' => 'o',
            c => c,
        })
        .collect()
}

macro_rules! orbit_enum {
    ($name:ident, $n:expr, [$($var:ident => $label:expr, $key:expr;)*]) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum $name {
            $($var,)*
        }

        impl $name {
            pub const ALL: [$name; $n] = [$($name::$var,)*];

            pub fn label(self) -> &'static str {
                match self {
                    $($name::$var => $label,)*
                }
            }

            pub fn index(self) -> usize {
                self as usize
            }

            fn key(self) -> &'static str {
                match self {
                    $($name::$var => $key,)*
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.label())
            }
        }

        impl FromStr for $name {
            type Err = UnknownLabel;

            fn from_str(s: &str) -> Result<$name, UnknownLabel> {
                let k = squash(s.trim());
                $name::ALL
                    .into_iter()
                    .find(|o| o.key() == k)
                    .ok_or_else(|| UnknownLabel(s.to_string()))
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(self.label())
            }
        }
    };
}

orbit_enum!(LineOrbit, 15, [
    O5 => "o5", "o5";
    O6 => "o6", "o6";
    O8_1 => "o8,1", "o81";
    O8_2 => "o8,2", "o82";
    O9 => "o9", "o9";
    O10 => "o10", "o10";
    O12 => "o12", "o12";
    O13_1 => "o13,1", "o131";
    O13_2 => "o13,2", "o132";
    O14_1 => "o14,1", "o141";
    O14_2 => "o14,2", "o142";
    O15_1 => "o15,1", "o151";
    O15_2 => "o15,2", "o152";
    O16 => "o16", "o16";
    O17 => "o17", "o17";
]);

orbit_enum!(PlaneOrbit, 16, [
    S1 => "Σ1", "S1";
    S2 => "Σ2", "S2";
    S3 => "Σ3", "S3";
    S4 => "Σ4", "S4";
    S5 => "Σ5", "S5";
    S6 => "Σ6", "S6";
    S7 => "Σ7", "S7";
    S8 => "Σ8", "S8";
    S9 => "Σ9", "S9";
    S10 => "Σ10", "S10";
    S11 => "Σ11", "S11";
    S12 => "Σ12", "S12";
    S13 => "Σ13", "S13";
    S14 => "Σ14", "S14";
    S14Prime => "Σ14′", "S14'";
    S15 => "Σ15", "S15";
]);

impl PlaneOrbit {
    /// Whether the orbit exists for this q: Σ14 needs q ≢ 0 and Σ14′ needs
    /// q ≡ 0 (mod 3).
    pub fn valid_for(self, q: u64) -> bool {
        match self {
            PlaneOrbit::S14 => !q.is_multiple_of(3),
            PlaneOrbit::S14Prime => q.is_multiple_of(3),
            _ => true,
        }
    }

    /// The fifteen orbits that exist for `q`.
    pub fn all_for(q: u64) -> Vec<PlaneOrbit> {
        PlaneOrbit::ALL.into_iter().filter(|o| o.valid_for(q)).collect()
    }

    /// ASCII label, e.g. `S14'`.
    pub fn ascii(self) -> &'static str {
        self.key()
    }
}

/// Number of lines of each line orbit inside a plane.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct LineDistribution {
    counts: [u64; 15],
}

impl LineDistribution {
    pub fn get(&self, o: LineOrbit) -> u64 {
        self.counts[o.index()]
    }

    pub fn set(&mut self, o: LineOrbit, n: u64) {
        self.counts[o.index()] = n;
    }

    pub fn add(&mut self, o: LineOrbit) {
        self.counts[o.index()] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Line orbits with a non-zero count.
    pub fn support(&self) -> Vec<LineOrbit> {
        LineOrbit::ALL.into_iter().filter(|&o| self.get(o) > 0).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (LineOrbit, u64)> + '_ {
        LineOrbit::ALL.into_iter().map(|o| (o, self.get(o)))
    }
}

impl fmt::Display for LineDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        let mut first = true;
        for (o, n) in self.iter().filter(|&(_, n)| n > 0) {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{o}: {n}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for LineDistribution {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(15))?;
        for (o, n) in self.iter() {
            m.serialize_entry(o.label(), &n)?;
        }
        m.end()
    }
}

/// Rank of a symmetric matrix from its minors; 0 only for the zero matrix.
pub fn sym_rank(f: &Field, m: &Mat3) -> usize {
    if !linalg::det3(f, m).is_zero() {
        return 3;
    }
    let minor = |a: usize, b: usize, c: usize, d: usize| f.sub(f.mul(m[a][c], m[b][d]), f.mul(m[a][d], m[b][c]));
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        for (c, d) in [(0, 1), (0, 2), (1, 2)] {
            if !minor(a, b, c, d).is_zero() {
                return 2;
            }
        }
    }
    if m.iter().flatten().any(|x| !x.is_zero()) {
        1
    } else {
        0
    }
}

fn classify_matrix(f: &Field, m: &Mat3) -> PointClass {
    match sym_rank(f, m) {
        3 => PointClass::Rank3,
        2 => {
            let minors = [0, 1, 2].map(|i| f.neg(linalg::principal_minor(f, m, i)));
            if minors.iter().all(|&x| f.is_square(x)) && minors.iter().any(|x| !x.is_zero()) {
                PointClass::Rank2Exterior
            } else {
                PointClass::Rank2Interior
            }
        }
        _ => PointClass::Rank1,
    }
}

/// Class of a point: rank 1, exterior or interior rank 2, or rank 3.
///
/// A rank-2 point is exterior iff the negated principal 2x2 minors of its
/// matrix are all squares (0 included) and not all zero.
pub fn classify_point(f: &Field, p: &SymPoint) -> PointClass {
    classify_matrix(f, &p.matrix())
}

pub fn point_distribution(f: &Field, s: &Subspace) -> PointDistribution {
    let mut d = PointDistribution::default();
    for p in s.points(f) {
        d.add(classify_point(f, &p));
    }
    d
}

/// With `w` the rank-2 point and `y` another point of a line of type
/// [0,1,0,q]: o15,1 iff `v^T M_y v != 0` for `v` spanning the kernel of `M_w`.
fn split_o15_o16(f: &Field, w: &Vec6, y: &Vec6) -> LineOrbit {
    let ker = linalg::kernel3(f, &pg::sym_matrix(w));
    let v = ker[0];
    if linalg::quadratic_value(f, &pg::sym_matrix(y), &v).is_zero() {
        LineOrbit::O16
    } else {
        LineOrbit::O15_1
    }
}

/// Separates o15,1 from o16 for a line with point distribution [0,1,0,q].
pub fn disambiguate_o15_o16(f: &Field, line: &Subspace) -> Result<LineOrbit, ClassifyError> {
    if line.dim() != 1 {
        return Err(ClassifyError::WrongDimension { expected: 1, got: line.dim() });
    }
    let q = f.q() as u64;
    let points = line.points(f);
    let classes: Vec<PointClass> = points.iter().map(|p| classify_point(f, p)).collect();
    let mut d = PointDistribution::default();
    classes.iter().for_each(|&c| d.add(c));
    if d != PointDistribution::new(0, 1, 0, q) {
        return Err(ClassifyError::Precondition(format!("line has point distribution {d}, expected [0, 1, 0, {q}]")));
    }
    let wi = classes.iter().position(|&c| c == PointClass::Rank2Exterior).unwrap();
    let yi = if wi == 0 { 1 } else { 0 };
    Ok(split_o15_o16(f, points[wi].coords(), points[yi].coords()))
}

struct PlanePattern {
    orbit: PlaneOrbit,
    support: Vec<LineOrbit>,
    expected: LineDistribution,
}

/// Classification context for one field: caches the incidence structure of
/// PG(2,q) and the tabulated distributions evaluated at q.
pub struct Classifier<'f> {
    f: &'f Field,
    incidence: PlaneIncidence,
    line_lookup: HashMap<PointDistribution, LineOrbit>,
    ambiguous: PointDistribution,
    planes: Vec<PlanePattern>,
}

impl<'f> Classifier<'f> {
    pub fn new(f: &'f Field) -> Classifier<'f> {
        let q = f.q() as u64;
        tables::assert_consistent(q);
        let ambiguous = PointDistribution::new(0, 1, 0, q);
        let mut line_lookup = HashMap::new();
        for o in LineOrbit::ALL {
            let d = tables::line_point_distribution(o, q);
            if d != ambiguous {
                let prev = line_lookup.insert(d, o);
                assert!(prev.is_none(), "line point distributions collide at q = {q}");
            }
        }
        let planes = PlaneOrbit::all_for(q)
            .into_iter()
            .map(|orbit| {
                let expected = tables::line_distribution(orbit, q);
                PlanePattern { orbit, support: expected.support(), expected }
            })
            .collect();
        Classifier { f, incidence: PlaneIncidence::new(f), line_lookup, ambiguous, planes }
    }

    pub fn field(&self) -> &'f Field {
        self.f
    }

    pub fn classify_point(&self, p: &SymPoint) -> PointClass {
        classify_point(self.f, p)
    }

    fn orbit_of(&self, d: &PointDistribution) -> Result<LineOrbit, ClassifyError> {
        self.line_lookup.get(d).copied().ok_or_else(|| {
            ClassifyError::InternalInconsistency(format!(
                "point distribution {d} matches no line orbit at q = {}",
                self.f.q()
            ))
        })
    }

    pub fn classify_line(&self, line: &Subspace) -> Result<LineOrbit, ClassifyError> {
        if line.dim() != 1 {
            return Err(ClassifyError::WrongDimension { expected: 1, got: line.dim() });
        }
        let d = point_distribution(self.f, line);
        if d == self.ambiguous {
            disambiguate_o15_o16(self.f, line)
        } else {
            self.orbit_of(&d)
        }
    }

    /// Line-orbit distribution of a plane, classifying each of its points once.
    pub fn line_distribution(&self, plane: &Subspace) -> Result<LineDistribution, ClassifyError> {
        Ok(self.analyse_plane(plane)?.1)
    }

    /// Point and line-orbit distributions of a plane.
    pub fn analyse_plane(&self, plane: &Subspace) -> Result<(PointDistribution, LineDistribution), ClassifyError> {
        if plane.dim() != 2 {
            return Err(ClassifyError::WrongDimension { expected: 2, got: plane.dim() });
        }
        let f = self.f;
        let vectors: Vec<Vec6> = self.incidence.points.iter().map(|c| plane.combine(f, c)).collect();
        let classes: Vec<PointClass> = vectors.iter().map(|v| classify_matrix(f, &pg::sym_matrix(v))).collect();
        let mut points = PointDistribution::default();
        classes.iter().for_each(|&c| points.add(c));
        let mut lines = LineDistribution::default();
        for on_line in &self.incidence.lines {
            let mut d = PointDistribution::default();
            for &i in on_line {
                d.add(classes[i as usize]);
            }
            let o = if d == self.ambiguous {
                let w = on_line.iter().copied().find(|&i| classes[i as usize] == PointClass::Rank2Exterior).unwrap();
                let y = if on_line[0] == w { on_line[1] } else { on_line[0] };
                split_o15_o16(f, &vectors[w as usize], &vectors[y as usize])
            } else {
                self.orbit_of(&d)?
            };
            lines.add(o);
        }
        Ok((points, lines))
    }

    /// The orbit of a rank-one plane: the unique label whose line-orbit
    /// support at q matches, checked against the full tabulated counts.
    pub fn classify_plane(&self, plane: &Subspace) -> Result<PlaneOrbit, ClassifyError> {
        Ok(self.classify_plane_full(plane)?.0)
    }

    pub fn classify_plane_full(
        &self,
        plane: &Subspace,
    ) -> Result<(PlaneOrbit, PointDistribution, LineDistribution), ClassifyError> {
        let (points, lines) = self.analyse_plane(plane)?;
        if points.n1 == 0 {
            return Err(ClassifyError::NotRankOne);
        }
        let support = lines.support();
        let mut hits = self.planes.iter().filter(|p| p.support == support);
        let (Some(hit), None) = (hits.next(), hits.next()) else {
            return Err(ClassifyError::InternalInconsistency(format!(
                "line-orbit distribution {lines} does not single out a plane orbit at q = {}",
                self.f.q()
            )));
        };
        if hit.expected != lines {
            return Err(ClassifyError::InternalInconsistency(format!(
                "plane matches the support of {} but has line-orbit distribution {lines}, expected {}",
                hit.orbit, hit.expected
            )));
        }
        Ok((hit.orbit, points, lines))
    }
}

/// Convenience wrapper building a one-off [`Classifier`].
pub fn classify_line(f: &Field, line: &Subspace) -> Result<LineOrbit, ClassifyError> {
    Classifier::new(f).classify_line(line)
}

pub fn line_distribution(f: &Field, plane: &Subspace) -> Result<LineDistribution, ClassifyError> {
    Classifier::new(f).line_distribution(plane)
}

pub fn classify_plane(f: &Field, plane: &Subspace) -> Result<PlaneOrbit, ClassifyError> {
    Classifier::new(f).classify_plane(plane)
}

/// Whether any point of the subspace has rank 1.
pub fn has_rank_one_point(f: &Field, s: &Subspace) -> bool {
    s.points(f).iter().any(|p| p.rank(f) == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Fe;

    fn pt(f: &Field, c: [i64; 6]) -> SymPoint {
        SymPoint::from_ints(f, c).unwrap()
    }

    #[test]
    fn point_examples() {
        for q in [3, 5, 7, 9] {
            let f = Field::new(q).unwrap();
            let eps = f.canonical_nonsquare();
            let ext = SymPoint::new(&f, [0, 0, 0, 1, 0, -1].map(|c| f.from_int(c))).unwrap();
            assert_eq!(classify_point(&f, &ext), PointClass::Rank2Exterior);
            let int = SymPoint::new(&f, [Fe::ZERO, Fe::ZERO, Fe::ZERO, Fe::ONE, Fe::ZERO, f.neg(eps)]).unwrap();
            assert_eq!(classify_point(&f, &int), PointClass::Rank2Interior);
            assert_eq!(classify_point(&f, &pt(&f, [1, 0, 0, 1, 0, 1])), PointClass::Rank3);
            assert_eq!(classify_point(&f, &pt(&f, [1, 0, 0, 0, 0, 0])), PointClass::Rank1);
        }
    }

    #[test]
    fn sym_rank_agrees_with_echelon_rank() {
        let f = Field::new(5).unwrap();
        for v in linalg::projective_points::<6>(&f) {
            let m = pg::sym_matrix(&v);
            assert_eq!(sym_rank(&f, &m), linalg::rank3(&f, &m));
        }
    }

    #[test]
    fn labels_round_trip() {
        for o in LineOrbit::ALL {
            assert_eq!(o.label().parse::<LineOrbit>().unwrap(), o);
        }
        for o in PlaneOrbit::ALL {
            assert_eq!(o.label().parse::<PlaneOrbit>().unwrap(), o);
            assert_eq!(o.ascii().parse::<PlaneOrbit>().unwrap(), o);
        }
        assert_eq!("o8_1".parse::<LineOrbit>().unwrap(), LineOrbit::O8_1);
        assert_eq!("o₁₅,₂".parse::<LineOrbit>().unwrap(), LineOrbit::O15_2);
        assert_eq!("S14p".parse::<PlaneOrbit>().unwrap(), PlaneOrbit::S14Prime);
        assert_eq!("Σ₁₄′".parse::<PlaneOrbit>().unwrap(), PlaneOrbit::S14Prime);
        assert_eq!("sigma5".parse::<PlaneOrbit>().ok(), None);
        assert!("o7".parse::<LineOrbit>().is_err());
    }

    #[test]
    fn distribution_display() {
        let mut d = LineDistribution::default();
        d.set(LineOrbit::O6, 1);
        d.set(LineOrbit::O12, 9);
        assert_eq!(d.to_string(), "{o6: 1, o12: 9}");
        assert_eq!(d.total(), 10);
        assert_eq!(PointDistribution::new(1, 2, 3, 4).to_string(), "[1, 2, 3, 4]");
    }
}
