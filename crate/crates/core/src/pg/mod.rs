//! Projective spaces PG(n,q): points, flats, and semilinear collineations.
//!
//! Points are row vectors; a collineation `(M, e)` acts by
//! `x -> x^(p^e) * M`, i.e. Frobenius first, then the matrix.

mod stabilizer;

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{usage, Result};
use crate::gf::{Field, FieldElement};
use crate::linalg::{self, Matrix};

pub use stabilizer::{
    find_stabilizer_element, stabilizer_order_bruteforce, StabilizerOptions, StabilizerReport,
    DEFAULT_BUDGET,
};

/// The ambient space PG(n,q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjSpace {
    n: usize,
    field: Field,
}

/// Scales `v` so that its first nonzero entry is one. Returns false for the
/// zero vector.
pub fn normalize(f: &Field, v: &mut [FieldElement]) -> bool {
    let Some(lead) = v.iter().position(|a| !a.is_zero()) else {
        return false;
    };
    let c = v[lead];
    if c != FieldElement::ONE {
        let inv = f.inv_nz(c);
        for x in &mut v[lead..] {
            *x = f.mul(*x, inv);
        }
    }
    true
}

impl ProjSpace {
    pub fn new(n: usize, field: Field) -> ProjSpace {
        ProjSpace { n, field }
    }

    pub fn over_order(n: usize, q: u64) -> Result<ProjSpace> {
        Ok(ProjSpace::new(n, Field::from_order(q)?))
    }

    /// Projective dimension n.
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn num_points(&self) -> u64 {
        let q = self.q() as u64;
        (q.pow(self.n as u32 + 1) - 1) / (q - 1)
    }

    /// Builds a point, normalizing the coordinates.
    pub fn point(&self, coords: Vec<FieldElement>) -> Result<ProjPoint> {
        if coords.len() != self.n + 1 {
            return usage(format!(
                "a point of PG({},q) needs {} coordinates, got {}",
                self.n,
                self.n + 1,
                coords.len()
            ));
        }
        if coords.iter().any(|&a| !self.field.contains(a)) {
            return usage("coordinate outside the field");
        }
        let mut coords = coords;
        if !normalize(&self.field, &mut coords) {
            return usage("the zero vector is not a projective point");
        }
        Ok(ProjPoint { space: self.clone(), coords })
    }

    pub fn point_from_ints(&self, coords: &[u32]) -> Result<ProjPoint> {
        self.point(coords.iter().map(|&c| FieldElement(c)).collect())
    }

    /// Index of a normalized coordinate vector in the enumeration order:
    /// grouped by the position of the leading one, then by the remaining
    /// coordinates read as a base-q number.
    pub fn index_of(&self, coords: &[FieldElement]) -> usize {
        let q = self.q() as usize;
        let lead = coords.iter().position(|a| !a.is_zero()).expect("nonzero vector");
        debug_assert_eq!(coords[lead], FieldElement::ONE);
        let mut offset = 0;
        for j in 0..lead {
            offset += q.pow((self.n - j) as u32);
        }
        let mut rest = 0;
        for &c in &coords[lead + 1..] {
            rest = rest * q + c.index();
        }
        offset + rest
    }

    pub fn coords_at(&self, mut idx: usize) -> Vec<FieldElement> {
        let q = self.q() as usize;
        let mut lead = 0;
        loop {
            let block = q.pow((self.n - lead) as u32);
            if idx < block {
                break;
            }
            idx -= block;
            lead += 1;
        }
        let mut coords = vec![FieldElement::ZERO; self.n + 1];
        coords[lead] = FieldElement::ONE;
        for j in (lead + 1..=self.n).rev() {
            coords[j] = FieldElement((idx % q) as u32);
            idx /= q;
        }
        coords
    }

    pub fn point_at(&self, idx: usize) -> ProjPoint {
        ProjPoint { space: self.clone(), coords: self.coords_at(idx) }
    }

    pub fn points(&self) -> impl Iterator<Item = ProjPoint> + '_ {
        (0..self.num_points() as usize).map(move |i| self.point_at(i))
    }

    pub fn empty(&self) -> Subspace {
        Subspace { space: self.clone(), basis: Matrix::zeros(0, self.n + 1) }
    }

    pub fn full(&self) -> Subspace {
        Subspace { space: self.clone(), basis: Matrix::identity(self.n + 1) }
    }

    /// The hyperplane `sum a_i X_i = 0`.
    pub fn hyperplane(&self, coeffs: &[FieldElement]) -> Result<Subspace> {
        if coeffs.len() != self.n + 1 || coeffs.iter().all(|a| a.is_zero()) {
            return usage("hyperplane needs n+1 coefficients, not all zero");
        }
        let functional = Matrix { rows: 1, cols: self.n + 1, data: coeffs.to_vec() };
        let basis = linalg::nullspace(&self.field, &functional);
        Ok(Subspace { space: self.clone(), basis })
    }

    /// The flat with the given (not necessarily reduced) basis rows.
    pub fn subspace(&self, rows: Matrix) -> Result<Subspace> {
        if rows.cols != self.n + 1 && rows.rows > 0 {
            return usage("basis rows have the wrong length");
        }
        let mut basis = rows;
        basis.cols = self.n + 1;
        linalg::rref(&self.field, &mut basis);
        Ok(Subspace { space: self.clone(), basis })
    }

    fn check_point(&self, p: &ProjPoint) -> Result<()> {
        if &p.space != self {
            return usage("point belongs to a different ambient space");
        }
        Ok(())
    }
}

/// A point of PG(n,q) with normalized homogeneous coordinates.
#[derive(Clone)]
pub struct ProjPoint {
    space: ProjSpace,
    coords: Vec<FieldElement>,
}

impl ProjPoint {
    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn space(&self) -> &ProjSpace {
        &self.space
    }

    pub fn index(&self) -> usize {
        self.space.index_of(&self.coords)
    }

    pub fn coord_ints(&self) -> Vec<u32> {
        self.coords.iter().map(|c| c.0).collect()
    }
}

impl PartialEq for ProjPoint {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && self.space == other.space
    }
}

impl Eq for ProjPoint {}

impl Hash for ProjPoint {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl PartialOrd for ProjPoint {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ProjPoint {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coords.cmp(&other.coords)
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", c.0)?;
        }
        write!(f, ")")
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coord_ints().serialize(s)
    }
}

/// A flat of PG(n,q), stored as a reduced row-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    space: ProjSpace,
    basis: Matrix,
}

impl Hash for Subspace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.basis.hash(state);
    }
}

impl Subspace {
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn space(&self) -> &ProjSpace {
        &self.space
    }

    /// Vector-space rank (number of basis rows).
    pub fn rank(&self) -> usize {
        self.basis.rows
    }

    /// Projective dimension; the empty flat has dimension -1.
    pub fn dim(&self) -> isize {
        self.basis.rows as isize - 1
    }

    pub fn is_hyperplane(&self) -> bool {
        self.basis.rows == self.space.n
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.contains_coords(&p.coords)
    }

    pub fn contains_coords(&self, v: &[FieldElement]) -> bool {
        if self.basis.rows == 0 {
            return false;
        }
        let mut rows: Vec<&[FieldElement]> = (0..self.basis.rows).map(|i| self.basis.row(i)).collect();
        rows.push(v);
        linalg::rank_of_rows(&self.space.field, &rows) == self.basis.rows
    }

    /// The linear functionals vanishing on the flat (RREF basis).
    pub fn annihilator(&self) -> Matrix {
        if self.basis.rows == 0 {
            return Matrix::identity(self.space.n + 1);
        }
        linalg::nullspace(&self.space.field, &self.basis)
    }

    /// Every point of the flat, in a deterministic order.
    pub fn points(&self) -> Vec<ProjPoint> {
        let f = &self.space.field;
        let r = self.basis.rows;
        let q = f.q() as usize;
        let mut out = Vec::new();
        if r == 0 {
            return out;
        }
        // coefficient vectors with leading entry one
        for lead in 0..r {
            let free = r - lead - 1;
            let total = q.pow(free as u32);
            for mut code in 0..total {
                let mut coeffs = vec![FieldElement::ZERO; r];
                coeffs[lead] = FieldElement::ONE;
                for j in (lead + 1..r).rev() {
                    coeffs[j] = FieldElement((code % q) as u32);
                    code /= q;
                }
                let mut v = self.basis.vec_mul(f, &coeffs);
                normalize(f, &mut v);
                out.push(ProjPoint { space: self.space.clone(), coords: v });
            }
        }
        out
    }
}

/// The smallest flat containing all the given points.
pub fn span(space: &ProjSpace, points: &[ProjPoint]) -> Result<Subspace> {
    for p in points {
        space.check_point(p)?;
    }
    let rows: Vec<Vec<FieldElement>> = points.iter().map(|p| p.coords.clone()).collect();
    let m = if rows.is_empty() { Matrix::zeros(0, space.n + 1) } else { Matrix::from_rows(&rows) };
    space.subspace(m)
}

pub fn join(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    if a.space != b.space {
        return usage("flats live in different ambient spaces");
    }
    a.space.subspace(a.basis.stack(&b.basis))
}

/// The intersection of two flats.
pub fn meet(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    if a.space != b.space {
        return usage("flats live in different ambient spaces");
    }
    let f = &a.space.field;
    let both = a.annihilator().stack(&b.annihilator());
    let basis = linalg::nullspace(f, &both);
    Ok(Subspace { space: a.space.clone(), basis })
}

/// All q+1 points of the line PQ: first P, then Q + tP for t in field order.
pub fn points_of_line(p: &ProjPoint, q: &ProjPoint) -> Result<Vec<ProjPoint>> {
    if p.space != q.space {
        return usage("points live in different ambient spaces");
    }
    if p == q {
        return usage("a line needs two distinct points");
    }
    let space = &p.space;
    let f = &space.field;
    let mut out = Vec::with_capacity(f.q() as usize + 1);
    out.push(p.clone());
    for t in f.elements() {
        let mut v: Vec<FieldElement> =
            q.coords.iter().zip(&p.coords).map(|(&b, &a)| f.add(b, f.mul(t, a))).collect();
        normalize(f, &mut v);
        out.push(ProjPoint { space: space.clone(), coords: v });
    }
    Ok(out)
}

/// An element of PΓL(n+1,q): `x -> x^(p^frob) * matrix`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Collineation {
    pub matrix: Matrix,
    pub frob: u32,
}

impl Collineation {
    pub fn identity(dim: usize) -> Collineation {
        Collineation { matrix: Matrix::identity(dim + 1), frob: 0 }
    }

    /// Scales the matrix so the first nonzero entry of its first column is one.
    pub fn new(f: &Field, matrix: Matrix, frob: u32) -> Result<Collineation> {
        if matrix.rows != matrix.cols {
            return usage("collineation matrix must be square");
        }
        if frob >= f.h() {
            return usage("Frobenius exponent out of range");
        }
        if linalg::inverse(f, &matrix).is_none() {
            return usage("collineation matrix is singular");
        }
        Ok(Collineation { matrix: normalize_matrix(f, matrix), frob })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows - 1
    }

    pub fn is_identity(&self) -> bool {
        self.frob == 0 && self.matrix == Matrix::identity(self.matrix.rows)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, f: &Field, other: &Collineation) -> Collineation {
        let h = f.h();
        let m = other.matrix.frobenius(f, self.frob).mul(f, &self.matrix);
        Collineation { matrix: normalize_matrix(f, m), frob: (self.frob + other.frob) % h }
    }

    pub fn inverse(&self, f: &Field) -> Collineation {
        let h = f.h();
        let back = (h - self.frob) % h;
        let m = linalg::inverse(f, &self.matrix.frobenius(f, back)).expect("invertible");
        Collineation { matrix: normalize_matrix(f, m), frob: back }
    }

    /// Image of a coordinate vector, normalized.
    pub fn apply_coords(&self, f: &Field, v: &[FieldElement]) -> Vec<FieldElement> {
        let x: Vec<FieldElement> = v.iter().map(|&a| f.frob(a, self.frob)).collect();
        let mut out = self.matrix.vec_mul(f, &x);
        normalize(f, &mut out);
        out
    }
}

fn normalize_matrix(f: &Field, m: Matrix) -> Matrix {
    let first = (0..m.rows).map(|i| m.get(i, 0)).find(|a| !a.is_zero());
    match first {
        Some(c) if c != FieldElement::ONE => m.scale(f, f.inv_nz(c)),
        _ => m,
    }
}

/// Image of a point under a collineation.
pub fn apply(g: &Collineation, p: &ProjPoint) -> Result<ProjPoint> {
    if g.dim() != p.space.n {
        return usage("collineation and point have different dimensions");
    }
    if g.frob >= p.space.field.h() {
        return usage("Frobenius exponent out of range for this field");
    }
    let coords = g.apply_coords(&p.space.field, &p.coords);
    Ok(ProjPoint { space: p.space.clone(), coords })
}

fn functional_of(axis: &Subspace) -> Result<Vec<FieldElement>> {
    if !axis.is_hyperplane() {
        return usage(format!("axis has projective dimension {}, not a hyperplane", axis.dim()));
    }
    Ok(axis.annihilator().row(0).to_vec())
}

fn dot(f: &Field, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
    a.iter().zip(b).fold(FieldElement::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

/// `x -> x + (x . a) c` as a matrix.
fn transvection_matrix(f: &Field, a: &[FieldElement], c: &[FieldElement]) -> Matrix {
    let d = a.len();
    let mut m = Matrix::identity(d);
    for (i, &ai) in a.iter().enumerate() {
        for (j, &cj) in c.iter().enumerate() {
            let v = f.add(m.get(i, j), f.mul(ai, cj));
            m.set(i, j, v);
        }
    }
    m
}

/// The unique elation with the given axis and center mapping `a` to `b`.
pub fn elation(axis: &Subspace, center: &ProjPoint, a: &ProjPoint, b: &ProjPoint) -> Result<Collineation> {
    let space = axis.space();
    for p in [center, a, b] {
        space.check_point(p)?;
    }
    let f = space.field();
    let functional = functional_of(axis)?;
    if !axis.contains(center) {
        return usage("the center of an elation must lie on its axis");
    }
    if axis.contains(a) || axis.contains(b) {
        return usage("elation endpoints must lie off the axis");
    }
    if a == b {
        return Ok(Collineation::identity(space.dim()));
    }
    let fa = dot(f, &functional, a.coords());
    let fb = dot(f, &functional, b.coords());
    // rescale b so that it has the same functional value as a
    let scale = f.mul(fa, f.inv_nz(fb));
    let b_scaled: Vec<FieldElement> = b.coords().iter().map(|&x| f.mul(x, scale)).collect();
    let diff: Vec<FieldElement> = b_scaled.iter().zip(a.coords()).map(|(&x, &y)| f.sub(x, y)).collect();
    // diff must be a multiple of the center vector
    let lead = center.coords().iter().position(|c| !c.is_zero()).unwrap();
    let t = diff[lead];
    let expected: Vec<FieldElement> = center.coords().iter().map(|&c| f.mul(c, t)).collect();
    if expected != diff {
        return usage("center, a and b are not collinear");
    }
    let c: Vec<FieldElement> = diff.iter().map(|&x| f.mul(x, f.inv_nz(fa))).collect();
    Collineation::new(f, transvection_matrix(f, &functional, &c), 0)
}

/// Order and generators of the group of perspectivities with a given axis.
#[derive(Clone, Debug)]
pub struct PerspGroup {
    pub order: u128,
    pub generators: Vec<Collineation>,
}

/// Elations and homologies with the hyperplane `axis`: n+1 elations whose
/// centers span the axis, plus one homology of primitive factor.
pub fn persp_group(axis: &Subspace) -> Result<PerspGroup> {
    let functional = functional_of(axis)?;
    let space = axis.space();
    let f = space.field();
    let q = f.q() as u128;
    let mut generators = Vec::new();
    for i in 0..axis.rank() {
        let c = axis.basis().row(i).to_vec();
        generators.push(Collineation::new(f, transvection_matrix(f, &functional, &c), 0)?);
    }
    // homology: center off the axis scaled so that c . a = 1
    let j = functional.iter().position(|x| !x.is_zero()).unwrap();
    let mut c = vec![FieldElement::ZERO; space.dim() + 1];
    c[j] = f.inv_nz(functional[j]);
    let g = f.primitive_element();
    let mu = f.sub(g, FieldElement::ONE);
    let c: Vec<FieldElement> = c.iter().map(|&x| f.mul(x, mu)).collect();
    if q > 2 {
        generators.push(Collineation::new(f, transvection_matrix(f, &functional, &c), 0)?);
    }
    let order = q.pow(space.dim() as u32) * (q - 1);
    Ok(PerspGroup { order, generators })
}

/// Enumerates the group generated by `gens` by breadth-first closure.
/// Fails once more than `limit` elements have been found.
pub fn enumerate_group(f: &Field, dim: usize, gens: &[Collineation], limit: usize) -> Result<Vec<Collineation>> {
    let id = Collineation::identity(dim);
    let mut seen: HashSet<Collineation> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(id.clone());
    queue.push_back(id);
    let mut out = Vec::new();
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = s.compose(f, &g);
            if seen.insert(h.clone()) {
                if seen.len() > limit {
                    return usage(format!("group has more than {limit} elements"));
                }
                queue.push_back(h);
            }
        }
        out.push(g);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(space: &ProjSpace, c: &[u32]) -> ProjPoint {
        space.point_from_ints(c).unwrap()
    }

    #[test]
    fn point_counts() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            for n in 1..=4usize {
                let space = ProjSpace::over_order(n, q).unwrap();
                let expected = (q.pow(n as u32 + 1) - 1) / (q - 1);
                assert_eq!(space.num_points(), expected);
                if expected < 20_000 {
                    let all: HashSet<ProjPoint> = space.points().collect();
                    assert_eq!(all.len() as u64, expected);
                    for (i, p) in space.points().enumerate().take(500) {
                        assert_eq!(p.index(), i);
                    }
                }
            }
        }
    }

    #[test]
    fn normalization() {
        let space = ProjSpace::over_order(2, 5).unwrap();
        let p = pt(&space, &[0, 3, 1]);
        assert_eq!(p.coord_ints(), vec![0, 1, 2]);
        assert!(space.point_from_ints(&[0, 0, 0]).is_err());
        assert!(space.point_from_ints(&[1, 0]).is_err());
    }

    #[test]
    fn span_examples() {
        let space = ProjSpace::over_order(2, 5).unwrap();
        let l = span(&space, &[pt(&space, &[1, 0, 0]), pt(&space, &[0, 1, 0])]).unwrap();
        assert_eq!(l.dim(), 1);
        assert!(l.contains(&pt(&space, &[1, 1, 0])));
        assert!(!l.contains(&pt(&space, &[0, 0, 1])));
        assert_eq!(span(&space, &[pt(&space, &[1, 2, 3])]).unwrap().dim(), 0);
        assert_eq!(span(&space, &[]).unwrap().dim(), -1);
        let other = ProjSpace::over_order(2, 7).unwrap();
        assert!(span(&space, &[pt(&other, &[1, 0, 0])]).is_err());
    }

    #[test]
    fn meet_examples() {
        let space = ProjSpace::over_order(2, 3).unwrap();
        let l1 = span(&space, &[pt(&space, &[1, 0, 0]), pt(&space, &[0, 1, 0])]).unwrap();
        let l2 = span(&space, &[pt(&space, &[1, 0, 0]), pt(&space, &[0, 0, 1])]).unwrap();
        let m = meet(&l1, &l2).unwrap();
        assert_eq!(m.dim(), 0);
        assert!(m.contains(&pt(&space, &[1, 0, 0])));
        assert_eq!(meet(&l1, &l1).unwrap(), l1);

        let s3 = ProjSpace::over_order(3, 4).unwrap();
        let plane = s3.hyperplane(&[FieldElement(0), FieldElement(0), FieldElement(0), FieldElement(1)]).unwrap();
        let line = span(&s3, &[pt(&s3, &[1, 0, 0, 0]), pt(&s3, &[0, 0, 0, 1])]).unwrap();
        let m = meet(&plane, &line).unwrap();
        assert_eq!(m.dim(), 0);
        assert!(m.contains(&pt(&s3, &[1, 0, 0, 0])));
    }

    #[test]
    fn modular_law_on_samples() {
        let space = ProjSpace::over_order(3, 3).unwrap();
        let pts: Vec<ProjPoint> = space.points().collect();
        let mut flats = Vec::new();
        for i in 0..8 {
            let a = &pts[(i * 7) % pts.len()];
            let b = &pts[(i * 13 + 5) % pts.len()];
            let c = &pts[(i * 3 + 11) % pts.len()];
            flats.push(span(&space, std::slice::from_ref(a)).unwrap());
            flats.push(span(&space, &[a.clone(), b.clone()]).unwrap());
            flats.push(span(&space, &[a.clone(), b.clone(), c.clone()]).unwrap());
        }
        for s1 in &flats {
            for s2 in &flats {
                let j = join(s1, s2).unwrap();
                let m = meet(s1, s2).unwrap();
                assert_eq!(s1.dim() + s2.dim(), j.dim() + m.dim());
                assert!(m.dim() >= s1.dim() + s2.dim() - 3);
            }
        }
    }

    #[test]
    fn line_points() {
        let space = ProjSpace::over_order(2, 5).unwrap();
        let p = pt(&space, &[1, 0, 0]);
        let q = pt(&space, &[0, 1, 1]);
        let line = points_of_line(&p, &q).unwrap();
        assert_eq!(line.len(), 6);
        assert!(line.contains(&p) && line.contains(&q));
        assert!(points_of_line(&p, &p).is_err());

        let s3 = ProjSpace::over_order(3, 4).unwrap();
        let line = points_of_line(&pt(&s3, &[1, 2, 0, 3]), &pt(&s3, &[0, 1, 1, 1])).unwrap();
        let distinct: HashSet<_> = line.iter().cloned().collect();
        assert_eq!(distinct.len(), 5);
    }

    #[test]
    fn apply_examples() {
        let space = ProjSpace::over_order(2, 9).unwrap();
        let f = space.field().clone();
        let id = Collineation::identity(2);
        for p in space.points() {
            assert_eq!(apply(&id, &p).unwrap(), p);
        }
        let frob = Collineation::new(&f, Matrix::identity(3), 1).unwrap();
        for t in f.elements() {
            let p = space.point(vec![FieldElement::ONE, t, f.mul(t, t)]).unwrap();
            let tp = f.pow(t, 3);
            let expected = space.point(vec![FieldElement::ONE, tp, f.pow(t, 6)]).unwrap();
            assert_eq!(apply(&frob, &p).unwrap(), expected);
        }

        let s5 = ProjSpace::over_order(2, 5).unwrap();
        let f5 = s5.field().clone();
        let a_phi = Matrix::from_rows(&[
            vec![FieldElement(1), FieldElement(1), FieldElement(0)],
            vec![FieldElement(0), FieldElement(1), FieldElement(1)],
            vec![FieldElement(0), FieldElement(0), FieldElement(1)],
        ]);
        let g = Collineation::new(&f5, a_phi, 0).unwrap();
        assert_eq!(apply(&g, &pt(&s5, &[1, 0, 0])).unwrap(), pt(&s5, &[1, 1, 0]));
    }

    #[test]
    fn elation_examples() {
        let space = ProjSpace::over_order(2, 3).unwrap();
        let f = space.field().clone();
        let axis = space.hyperplane(&[FieldElement(1), FieldElement(0), FieldElement(0)]).unwrap();
        let center = pt(&space, &[0, 1, 0]);
        let a = pt(&space, &[1, 0, 0]);
        let b = pt(&space, &[1, 1, 0]);
        assert!(elation(&axis, &center, &a, &a).unwrap().is_identity());
        let g = elation(&axis, &center, &a, &b).unwrap();
        // solving x M = x + x0 (0,1,0) directly gives this matrix
        let expected = Matrix::from_rows(&[
            vec![FieldElement(1), FieldElement(1), FieldElement(0)],
            vec![FieldElement(0), FieldElement(1), FieldElement(0)],
            vec![FieldElement(0), FieldElement(0), FieldElement(1)],
        ]);
        assert_eq!(g.matrix, expected);
        assert_eq!(apply(&g, &a).unwrap(), b);
        for p in axis.points() {
            assert_eq!(apply(&g, &p).unwrap(), p);
        }
        assert!(elation(&axis, &pt(&space, &[1, 0, 0]), &a, &b).is_err());
        assert!(elation(&axis, &center, &a, &pt(&space, &[1, 0, 1])).is_err());
        let _ = f;
    }

    #[test]
    fn persp_orders() {
        let s = ProjSpace::over_order(3, 3).unwrap();
        let axis = s.hyperplane(&[FieldElement(1), FieldElement(0), FieldElement(0), FieldElement(0)]).unwrap();
        assert_eq!(persp_group(&axis).unwrap().order, 54);
        let s = ProjSpace::over_order(3, 5).unwrap();
        let axis = s.hyperplane(&[FieldElement(1), FieldElement(0), FieldElement(0), FieldElement(0)]).unwrap();
        assert_eq!(persp_group(&axis).unwrap().order, 500);
        let line = span(&s, &[pt(&s, &[1, 0, 0, 0]), pt(&s, &[0, 1, 0, 0])]).unwrap();
        assert!(persp_group(&line).is_err());
    }

    #[test]
    fn persp_generators_enumerate_to_formula() {
        for q in [2u64, 3, 4] {
            for n in 1..=2usize {
                // axis is a hyperplane of PG(n+1,q)
                let s = ProjSpace::over_order(n + 1, q).unwrap();
                let f = s.field().clone();
                let mut coeffs = vec![FieldElement::ZERO; n + 2];
                coeffs[1] = FieldElement::ONE;
                let axis = s.hyperplane(&coeffs).unwrap();
                let group = persp_group(&axis).unwrap();
                let elements = enumerate_group(&f, n + 1, &group.generators, 100_000).unwrap();
                assert_eq!(elements.len() as u128, group.order, "q={q} n={n}");
                for g in &elements {
                    for p in axis.points() {
                        assert_eq!(apply(g, &p).unwrap(), p);
                    }
                }
            }
        }
    }

    #[test]
    fn composition_and_inverse() {
        let s = ProjSpace::over_order(2, 4).unwrap();
        let f = s.field().clone();
        let a = Collineation::new(
            &f,
            Matrix::from_rows(&[
                vec![FieldElement(1), FieldElement(2), FieldElement(0)],
                vec![FieldElement(0), FieldElement(3), FieldElement(1)],
                vec![FieldElement(1), FieldElement(0), FieldElement(1)],
            ]),
            1,
        )
        .unwrap();
        let b = Collineation::new(
            &f,
            Matrix::from_rows(&[
                vec![FieldElement(2), FieldElement(0), FieldElement(0)],
                vec![FieldElement(1), FieldElement(1), FieldElement(0)],
                vec![FieldElement(0), FieldElement(3), FieldElement(1)],
            ]),
            0,
        )
        .unwrap();
        let c = Collineation::new(&f, Matrix::identity(3), 1).unwrap();
        assert_eq!(a.compose(&f, &b).compose(&f, &c), a.compose(&f, &b.compose(&f, &c)));
        assert!(a.compose(&f, &a.inverse(&f)).is_identity());
        for p in s.points() {
            let direct = apply(&a, &apply(&b, &p).unwrap()).unwrap();
            assert_eq!(apply(&a.compose(&f, &b), &p).unwrap(), direct);
        }
    }
}
