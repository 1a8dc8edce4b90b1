//! Brute-force setwise stabilizers in PΓL(n+1,q).
//!
//! Every collineation is pinned down by the images of a fixed basis
//! `b_0..b_n` together with the scalars of those images (first scalar one)
//! and the Frobenius exponent. When the basis is drawn from S, the images of
//! its points must again lie in S, which cuts the search to ordered tuples
//! of S. Each group element is visited exactly once.

use rayon::prelude::*;
use serde::Serialize;

use super::{normalize, Collineation, ProjPoint, ProjSpace};
use crate::error::{usage, Error, Result};
use crate::gf::{Field, FieldElement};
use crate::linalg::{self, Matrix};

pub const DEFAULT_BUDGET: u128 = 100_000_000;

#[derive(Clone, Debug)]
pub struct StabilizerOptions {
    pub with_frobenius: bool,
    /// Upper bound on candidate collineations examined.
    pub budget: u128,
    pub parallel: bool,
}

impl Default for StabilizerOptions {
    fn default() -> Self {
        StabilizerOptions { with_frobenius: true, budget: DEFAULT_BUDGET, parallel: true }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilizerReport {
    pub order: u128,
    /// Candidates the enumeration was sized for.
    pub candidates: u128,
    pub transitive: bool,
    /// Orbits on S, as indices into the input slice.
    pub orbits: Vec<Vec<usize>>,
    /// Ambient points fixed by the whole stabilizer.
    pub fixed_points: Vec<ProjPoint>,
}

struct Search<'a> {
    space: &'a ProjSpace,
    field: &'a Field,
    dim: usize,
    set: Vec<Vec<FieldElement>>,
    member: Vec<bool>,
    /// Row i of the basis; `spanned` of them come from the set.
    basis: Vec<Vec<FieldElement>>,
    spanned: usize,
    /// Inverse of the Frobenius image of the basis matrix, per exponent.
    basis_inv: Vec<Matrix>,
    ambient: Vec<Vec<FieldElement>>,
    frob_range: u32,
}

fn check_points(space: &ProjSpace, points: &[ProjPoint]) -> Result<()> {
    for p in points {
        space.check_point(p)?;
    }
    Ok(())
}

impl<'a> Search<'a> {
    fn new(space: &'a ProjSpace, points: &[ProjPoint], opts: &StabilizerOptions, first: Option<usize>) -> Result<Self> {
        check_points(space, points)?;
        let field = space.field();
        let dim = space.dim() + 1;
        let total = space.num_points() as usize;
        let mut member = vec![false; total];
        let mut set = Vec::new();
        for p in points {
            if !member[p.index()] {
                member[p.index()] = true;
                set.push(p.coords().to_vec());
            }
        }
        if set.len() != points.len() {
            return usage("point set contains repeated points");
        }
        // greedy basis from S, then completed with unit vectors
        let mut basis: Vec<Vec<FieldElement>> = Vec::new();
        let mut order: Vec<usize> = (0..set.len()).collect();
        if let Some(f) = first {
            order.retain(|&i| i != f);
            order.insert(0, f);
        }
        for i in order {
            let mut rows: Vec<&[FieldElement]> = basis.iter().map(|r| r.as_slice()).collect();
            rows.push(&set[i]);
            if linalg::rank_of_rows(field, &rows) == basis.len() + 1 {
                basis.push(set[i].clone());
            }
            if basis.len() == dim {
                break;
            }
        }
        let spanned = basis.len();
        let ambient: Vec<Vec<FieldElement>> = (0..total).map(|i| space.coords_at(i)).collect();
        for v in &ambient {
            if basis.len() == dim {
                break;
            }
            let mut rows: Vec<&[FieldElement]> = basis.iter().map(|r| r.as_slice()).collect();
            rows.push(v);
            if linalg::rank_of_rows(field, &rows) == basis.len() + 1 {
                basis.push(v.clone());
            }
        }
        let frob_range = if opts.with_frobenius { field.h() } else { 1 };
        let bm = Matrix::from_rows(&basis);
        let basis_inv = (0..frob_range)
            .map(|e| linalg::inverse(field, &bm.frobenius(field, e)).expect("basis is independent"))
            .collect();
        Ok(Search { space, field, dim, set, member, basis, spanned, basis_inv, ambient, frob_range })
    }

    fn candidates(&self) -> u128 {
        let k = self.set.len() as u128;
        let total = self.ambient.len() as u128;
        let mut c: u128 = 1;
        for i in 0..self.dim as u128 {
            let choices = if (i as usize) < self.spanned { k - i } else { total - i };
            c = c.saturating_mul(choices);
        }
        let q = self.field.q() as u128;
        c.saturating_mul((q - 1).saturating_pow(self.dim as u32 - 1)).saturating_mul(self.frob_range as u128)
    }

    fn pool(&self, i: usize) -> &[Vec<FieldElement>] {
        if i < self.spanned {
            &self.set
        } else {
            &self.ambient
        }
    }

    /// Calls `visit` on every stabilizer element whose basis image starts
    /// with `c0`. Returns false if the visitor asked to stop.
    fn run_from(&self, c0: &[FieldElement], visit: &mut dyn FnMut(&Collineation) -> bool) -> bool {
        let mut tuple: Vec<&[FieldElement]> = vec![c0];
        self.extend(&mut tuple, visit)
    }

    fn extend<'b>(&'b self, tuple: &mut Vec<&'b [FieldElement]>, visit: &mut dyn FnMut(&Collineation) -> bool) -> bool {
        if tuple.len() == self.dim {
            return self.scalars(tuple, visit);
        }
        let i = tuple.len();
        for c in self.pool(i) {
            if tuple.contains(&c.as_slice()) {
                continue;
            }
            tuple.push(c);
            if linalg::rank_of_rows(self.field, tuple) == tuple.len() && !self.extend(tuple, visit) {
                return false;
            }
            tuple.pop();
        }
        true
    }

    fn scalars(&self, tuple: &[&[FieldElement]], visit: &mut dyn FnMut(&Collineation) -> bool) -> bool {
        let f = self.field;
        let q = f.q() as usize;
        let d = self.dim;
        let nonzero: Vec<FieldElement> = f.elements().skip(1).collect();
        let combos = (q - 1).pow(d as u32 - 1);
        let mut scaled = Matrix::zeros(d, d);
        for code in 0..combos {
            let mut rest = code;
            for (i, c) in tuple.iter().enumerate() {
                let lambda = if i == 0 {
                    FieldElement::ONE
                } else {
                    let l = nonzero[rest % (q - 1)];
                    rest /= q - 1;
                    l
                };
                for j in 0..d {
                    scaled.set(i, j, f.mul(lambda, c[j]));
                }
            }
            for e in 0..self.frob_range {
                let m = self.basis_inv[e as usize].mul(f, &scaled);
                if self.stabilizes(&m, e) {
                    let g = Collineation { matrix: super::normalize_matrix(f, m), frob: e };
                    if !visit(&g) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn stabilizes(&self, m: &Matrix, e: u32) -> bool {
        let f = self.field;
        let mut x = vec![FieldElement::ZERO; self.dim];
        let mut y = vec![FieldElement::ZERO; self.dim];
        for s in &self.set {
            for (xi, &si) in x.iter_mut().zip(s) {
                *xi = f.frob(si, e);
            }
            linalg::vec_mul_into(f, &x, m, &mut y);
            normalize(f, &mut y);
            if !self.member[self.space.index_of(&y)] {
                return false;
            }
        }
        true
    }

    fn index_in_set(&self) -> std::collections::HashMap<Vec<FieldElement>, usize> {
        self.set.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect()
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

struct Tally {
    order: u128,
    uf: UnionFind,
    fixed: Vec<bool>,
}

impl Tally {
    fn merge(mut self, mut other: Tally) -> Tally {
        self.order += other.order;
        for i in 0..self.uf.0.len() {
            let r = other.uf.find(i);
            self.uf.union(i, r);
        }
        for (a, b) in self.fixed.iter_mut().zip(&other.fixed) {
            *a &= *b;
        }
        self
    }
}

/// Exact order of the setwise stabilizer of `points` in PΓL(n+1,q) (or
/// PGL(n+1,q) without Frobenius), with its orbits on the set and the
/// ambient points it fixes.
pub fn stabilizer_order_bruteforce(
    space: &ProjSpace,
    points: &[ProjPoint],
    opts: &StabilizerOptions,
) -> Result<StabilizerReport> {
    let search = Search::new(space, points, opts, None)?;
    let needed = search.candidates();
    if needed > opts.budget {
        return Err(Error::OracleOutOfRange { needed, budget: opts.budget });
    }
    let index = search.index_in_set();
    let k = search.set.len();
    let f = space.field();
    let fresh = || Tally { order: 0, uf: UnionFind::new(k), fixed: vec![true; search.ambient.len()] };
    let work = |c0: &Vec<FieldElement>| {
        let mut t = fresh();
        search.run_from(c0, &mut |g| {
            t.order += 1;
            for (i, s) in search.set.iter().enumerate() {
                let img = g.apply_coords(f, s);
                let j = index[&img];
                t.uf.union(i, j);
            }
            for (idx, v) in search.ambient.iter().enumerate() {
                if t.fixed[idx] && g.apply_coords(f, v) != *v {
                    t.fixed[idx] = false;
                }
            }
            true
        });
        t
    };
    let pool = search.pool(0);
    let tally = if opts.parallel {
        pool.par_iter().map(work).reduce(fresh, Tally::merge)
    } else {
        pool.iter().map(work).fold(fresh(), Tally::merge)
    };
    let mut tally = tally;
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    let mut root_slot = std::collections::HashMap::new();
    for i in 0..k {
        let r = tally.uf.find(i);
        let slot = *root_slot.entry(r).or_insert_with(|| {
            orbits.push(Vec::new());
            orbits.len() - 1
        });
        orbits[slot].push(i);
    }
    // map set order back to input order
    let input_pos: std::collections::HashMap<&[FieldElement], usize> =
        points.iter().enumerate().map(|(i, p)| (p.coords(), i)).collect();
    for orbit in &mut orbits {
        for i in orbit.iter_mut() {
            *i = input_pos[search.set[*i].as_slice()];
        }
        orbit.sort_unstable();
    }
    orbits.sort();
    let fixed_points = tally
        .fixed
        .iter()
        .enumerate()
        .filter(|(_, &fx)| fx)
        .map(|(i, _)| space.point_at(i))
        .collect();
    Ok(StabilizerReport { order: tally.order, candidates: needed, transitive: orbits.len() <= 1, orbits, fixed_points })
}

/// Some element of the setwise stabilizer mapping `points[from]` to
/// `points[to]`, if one exists.
pub fn find_stabilizer_element(
    space: &ProjSpace,
    points: &[ProjPoint],
    from: usize,
    to: usize,
    opts: &StabilizerOptions,
) -> Result<Option<Collineation>> {
    if from >= points.len() || to >= points.len() {
        return usage("point index out of range");
    }
    let search = Search::new(space, points, opts, Some(from))?;
    let needed = search.candidates() / points.len() as u128;
    if needed > opts.budget {
        return Err(Error::OracleOutOfRange { needed, budget: opts.budget });
    }
    let mut found = None;
    search.run_from(points[to].coords(), &mut |g| {
        found = Some(g.clone());
        false
    });
    debug_assert!(found.as_ref().is_none_or(|g| g.apply_coords(space.field(), search.basis[0].as_slice())
        == points[to].coords()));
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pg::apply;

    fn pts(space: &ProjSpace, list: &[&[u32]]) -> Vec<ProjPoint> {
        list.iter().map(|c| space.point_from_ints(c).unwrap()).collect()
    }

    #[test]
    fn basis_of_pg23() {
        let s = ProjSpace::over_order(2, 3).unwrap();
        let basis = pts(&s, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let r = stabilizer_order_bruteforce(&s, &basis, &StabilizerOptions::default()).unwrap();
        // permutations times diagonal matrices modulo scalars: 3! * 2^3 / 2
        assert_eq!(r.order, 24);
        assert!(r.transitive);
    }

    #[test]
    fn whole_plane_gives_full_group() {
        let s = ProjSpace::over_order(2, 3).unwrap();
        let all: Vec<ProjPoint> = s.points().collect();
        let r = stabilizer_order_bruteforce(&s, &all, &StabilizerOptions::default()).unwrap();
        // |PGL(3,3)| = 3^3 (3^3-1)(3^2-1)(3-1)... / (3-1)
        let q: u128 = 3;
        let pgl = q.pow(3) * (q.pow(3) - 1) * (q.pow(2) - 1);
        assert_eq!(r.order, pgl);
        assert_eq!(r.order, 5616);
        assert!(r.fixed_points.is_empty());
    }

    #[test]
    fn conic_minus_point() {
        let s = ProjSpace::over_order(2, 5).unwrap();
        let f = s.field().clone();
        let set: Vec<ProjPoint> =
            f.elements().map(|t| s.point(vec![FieldElement::ONE, t, f.mul(t, t)]).unwrap()).collect();
        let r = stabilizer_order_bruteforce(&s, &set, &StabilizerOptions::default()).unwrap();
        assert_eq!(r.order, 20);
        assert!(r.transitive);
        assert_eq!(r.fixed_points, vec![s.point_from_ints(&[0, 0, 1]).unwrap()]);
    }

    #[test]
    fn non_spanning_set_and_partitioning_agree() {
        let s = ProjSpace::over_order(2, 3).unwrap();
        let line = pts(&s, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0]]);
        let par = stabilizer_order_bruteforce(&s, &line, &StabilizerOptions::default()).unwrap();
        let seq = stabilizer_order_bruteforce(
            &s,
            &line,
            &StabilizerOptions { parallel: false, ..Default::default() },
        )
        .unwrap();
        assert_eq!(par.order, seq.order);
        // stabilizer of 3 points on a line in PGL(3,3): the same count by brute force
        // over all of PGL(3,3)
        let all: Vec<ProjPoint> = s.points().collect();
        let f = s.field().clone();
        let mut count = 0u128;
        let pgl = stabilizer_order_bruteforce(&s, &all, &StabilizerOptions::default()).unwrap();
        assert_eq!(pgl.order, 5616);
        let mut rows = Vec::new();
        enumerate_pgl(&f, &mut rows, &mut |m| {
            let g = Collineation::new(&f, m.clone(), 0).unwrap();
            let imgs: Vec<ProjPoint> = line.iter().map(|p| apply(&g, p).unwrap()).collect();
            if imgs.iter().all(|p| line.contains(p)) {
                count += 1;
            }
        });
        assert_eq!(count, par.order);
    }

    // all invertible 3x3 matrices over GF(3) with first nonzero entry of
    // column zero equal to one
    fn enumerate_pgl(f: &Field, rows: &mut Vec<Vec<FieldElement>>, visit: &mut dyn FnMut(&Matrix)) {
        if rows.len() == 3 {
            let m = Matrix::from_rows(rows);
            let lead = (0..3).map(|i| m.get(i, 0)).find(|a| !a.is_zero());
            if lead == Some(FieldElement::ONE) && linalg::rank(f, &m) == 3 {
                visit(&m);
            }
            return;
        }
        for code in 0..27u32 {
            let row = vec![FieldElement(code % 3), FieldElement(code / 3 % 3), FieldElement(code / 9)];
            rows.push(row);
            enumerate_pgl(f, rows, visit);
            rows.pop();
        }
    }

    #[test]
    fn budget_is_enforced() {
        let s = ProjSpace::over_order(2, 5).unwrap();
        let all: Vec<ProjPoint> = s.points().collect();
        let opts = StabilizerOptions { budget: 1000, ..Default::default() };
        assert!(matches!(
            stabilizer_order_bruteforce(&s, &all, &opts),
            Err(Error::OracleOutOfRange { .. })
        ));
    }

    #[test]
    fn transporter_element() {
        let s = ProjSpace::over_order(2, 7).unwrap();
        let f = s.field().clone();
        let set: Vec<ProjPoint> =
            f.elements().map(|t| s.point(vec![FieldElement::ONE, t, f.mul(t, t)]).unwrap()).collect();
        for to in 0..set.len() {
            let g = find_stabilizer_element(&s, &set, 2, to, &StabilizerOptions::default()).unwrap().unwrap();
            assert_eq!(apply(&g, &set[2]).unwrap(), set[to]);
            for p in &set {
                assert!(set.contains(&apply(&g, p).unwrap()));
            }
        }
    }
}
