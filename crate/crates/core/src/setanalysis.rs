//! Predicates on point sets: span, arcs, caps, tangents, closure.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::gf::FieldElement;
use crate::linalg::{self, Matrix};
use crate::pg::{normalize, span, ProjPoint, ProjSpace};
use crate::pointsets::PointSet;

/// Projective dimension of the span; -1 for the empty set.
pub fn span_dimension(s: &PointSet) -> isize {
    span(s.space(), s.points()).expect("points share the ambient").dim()
}

#[derive(Clone, Debug, Serialize)]
pub struct ArcVerdict {
    pub arc: bool,
    /// Indices of dependent points, when not an arc.
    pub witness: Option<Vec<usize>>,
}

/// True iff every subset of at most n+1 points is independent, so for
/// |S| >= n+1 no n+1 points lie in a hyperplane.
pub fn is_arc(s: &PointSet) -> ArcVerdict {
    let f = s.field();
    let target = (s.n() + 1).min(s.len());
    let pts: Vec<&[FieldElement]> = s.points().iter().map(|p| p.coords()).collect();
    let mut chosen: Vec<usize> = Vec::new();

    fn search(
        f: &crate::gf::Field,
        pts: &[&[FieldElement]],
        chosen: &mut Vec<usize>,
        target: usize,
    ) -> Option<Vec<usize>> {
        if chosen.len() == target {
            return None;
        }
        let start = chosen.last().map_or(0, |&i| i + 1);
        for i in start..pts.len() {
            chosen.push(i);
            let rows: Vec<&[FieldElement]> = chosen.iter().map(|&j| pts[j]).collect();
            if linalg::rank_of_rows(f, &rows) < chosen.len() {
                return Some(chosen.clone());
            }
            if let Some(w) = search(f, pts, chosen, target) {
                return Some(w);
            }
            chosen.pop();
        }
        None
    }

    let witness = search(f, &pts, &mut chosen, target);
    ArcVerdict { arc: witness.is_none(), witness }
}

#[derive(Clone, Debug, Serialize)]
pub struct CapVerdict {
    pub cap: bool,
    pub witness: Option<[usize; 3]>,
}

/// True iff no three points are collinear.
pub fn is_cap(s: &PointSet) -> CapVerdict {
    let f = s.field();
    let pts: Vec<&[FieldElement]> = s.points().iter().map(|p| p.coords()).collect();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            for k in j + 1..pts.len() {
                if linalg::rank_of_rows(f, &[pts[i], pts[j], pts[k]]) < 3 {
                    return CapVerdict { cap: false, witness: Some([i, j, k]) };
                }
            }
        }
    }
    CapVerdict { cap: true, witness: None }
}

#[derive(Clone, Debug, Serialize)]
pub struct TangentReport {
    pub checked: usize,
    pub uncovered: Vec<ProjPoint>,
}

/// Direction of the line XS seen from X: S with the lead coordinate of X
/// eliminated, normalized.
fn direction_from(f: &crate::gf::Field, x: &[FieldElement], lead: usize, s: &[FieldElement]) -> Vec<FieldElement> {
    let c = s[lead];
    let mut v: Vec<FieldElement> = s.iter().zip(x).map(|(&a, &b)| f.sub(a, f.mul(c, b))).collect();
    normalize(f, &mut v);
    v
}

/// For each point of the ambient space (points of S only when
/// `include_s_points`), whether some line through it meets S in exactly one
/// point. Returns the points with no such tangent.
pub fn tangent_coverage(s: &PointSet, include_s_points: bool) -> TangentReport {
    let space = s.space();
    let f = space.field();
    let q = f.q() as u64;
    let lines_through_point = (q.pow(space.dim() as u32) - 1) / (q - 1);
    let members: HashSet<&ProjPoint> = s.points().iter().collect();
    let mut uncovered = Vec::new();
    let mut checked = 0;
    let mut counts: HashMap<Vec<FieldElement>, u32> = HashMap::new();
    for x in space.points() {
        let in_s = members.contains(&x);
        if in_s && !include_s_points {
            continue;
        }
        checked += 1;
        let lead = x.coords().iter().position(|c| !c.is_zero()).unwrap();
        counts.clear();
        for p in s.points() {
            if *p == x {
                continue;
            }
            *counts.entry(direction_from(f, x.coords(), lead, p.coords())).or_default() += 1;
        }
        let covered = if in_s {
            // a tangent through a point of S is a line with no other S point
            (counts.len() as u64) < lines_through_point
        } else {
            counts.values().any(|&c| c == 1)
        };
        if !covered {
            uncovered.push(x);
        }
    }
    TangentReport { checked, uncovered }
}

struct Flat {
    basis: Matrix,
    bits: Vec<u64>,
}

struct ClosureState<'a> {
    space: &'a ProjSpace,
    words: usize,
    flats: Vec<Flat>,
    index: HashMap<Matrix, usize>,
    present: Vec<bool>,
    count: usize,
}

impl<'a> ClosureState<'a> {
    fn flat_of(&mut self, mut basis: Matrix) -> Option<usize> {
        let f = self.space.field();
        linalg::rref(f, &mut basis);
        if self.index.contains_key(&basis) {
            return None;
        }
        let sub = self.space.subspace(basis.clone()).expect("valid rows");
        let mut bits = vec![0u64; self.words];
        for p in sub.points() {
            let i = p.index();
            bits[i / 64] |= 1 << (i % 64);
        }
        let id = self.flats.len();
        self.flats.push(Flat { basis: basis.clone(), bits });
        self.index.insert(basis, id);
        Some(id)
    }

    /// Adds a point and every join of it with an existing flat.
    fn add_point(&mut self, idx: usize, fresh: &mut Vec<usize>) {
        if self.present[idx] {
            return;
        }
        self.present[idx] = true;
        self.count += 1;
        let coords = self.space.coords_at(idx);
        let row = Matrix::from_rows(&[coords]);
        let existing = self.flats.len();
        if let Some(id) = self.flat_of(row.clone()) {
            fresh.push(id);
        }
        for j in 0..existing {
            let joined = self.flats[j].basis.stack(&row);
            if let Some(id) = self.flat_of(joined) {
                fresh.push(id);
            }
        }
    }
}

/// The closure of S: repeatedly adjoin every point that is the sole
/// intersection of two spans of subsets, until nothing changes.
pub fn closure(s: &PointSet) -> PointSet {
    let idx = closure_indices(s.space(), s.points());
    let space = s.space();
    let pts = idx.into_iter().map(|i| space.point_at(i)).collect();
    PointSet::custom(space, pts).expect("closure points are distinct")
}

/// Ambient indices of the closure of `points`, sorted.
pub fn closure_indices(space: &ProjSpace, points: &[ProjPoint]) -> Vec<usize> {
    let total = space.num_points() as usize;
    let words = total.div_ceil(64);
    let mut st = ClosureState {
        space,
        words,
        flats: Vec::new(),
        index: HashMap::new(),
        present: vec![false; total],
        count: 0,
    };
    let mut pending: Vec<usize> = points.iter().map(|p| p.index()).collect();
    while !pending.is_empty() && st.count < total {
        let mut fresh = Vec::new();
        for idx in pending.drain(..) {
            st.add_point(idx, &mut fresh);
        }
        // every new pair involves a fresh flat; pair it with all earlier flats
        let mut found = HashSet::new();
        for &a in &fresh {
            for b in 0..a {
                let (fa, fb) = (&st.flats[a].bits, &st.flats[b].bits);
                let mut pop = 0;
                let mut hit = 0;
                for (w, (x, y)) in fa.iter().zip(fb).enumerate() {
                    let m = x & y;
                    if m != 0 {
                        pop += m.count_ones();
                        if pop > 1 {
                            break;
                        }
                        hit = w * 64 + m.trailing_zeros() as usize;
                    }
                }
                if pop == 1 && !st.present[hit] {
                    found.insert(hit);
                }
            }
        }
        let mut found: Vec<usize> = found.into_iter().collect();
        found.sort_unstable();
        pending = found;
    }
    (0..total).filter(|&i| st.present[i]).collect()
}

/// Points of the line through K[a] and K[b], other than those two, that are
/// the meet of the line with a hyperplane spanned by n further points of K.
pub fn line_meets_from_hyperplanes(k: &PointSet, a: usize, b: usize) -> Vec<ProjPoint> {
    let space = k.space();
    let n = k.n();
    let others: Vec<usize> = (0..k.len()).filter(|&i| i != a && i != b).collect();
    let line = span(space, &[k.points()[a].clone(), k.points()[b].clone()]).expect("same ambient");
    let mut found: HashSet<ProjPoint> = HashSet::new();
    let mut chosen = Vec::new();
    fn rec(
        k: &PointSet,
        line: &crate::pg::Subspace,
        others: &[usize],
        start: usize,
        n: usize,
        chosen: &mut Vec<usize>,
        found: &mut HashSet<ProjPoint>,
    ) {
        if chosen.len() == n {
            let pts: Vec<ProjPoint> = chosen.iter().map(|&i| k.points()[i].clone()).collect();
            let h = span(k.space(), &pts).unwrap();
            if h.is_hyperplane() {
                let m = crate::pg::meet(&h, line).unwrap();
                if m.rank() == 1 {
                    found.insert(m.points()[0].clone());
                }
            }
            return;
        }
        for i in start..others.len() {
            chosen.push(others[i]);
            rec(k, line, others, i + 1, n, chosen, found);
            chosen.pop();
        }
    }
    rec(k, &line, &others, 0, n, &mut chosen, &mut found);
    found.remove(&k.points()[a]);
    found.remove(&k.points()[b]);
    let mut out: Vec<ProjPoint> = found.into_iter().collect();
    out.sort();
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct SetReport {
    pub span_dim: isize,
    pub is_arc: bool,
    pub is_cap: bool,
    pub uncovered_points: Vec<ProjPoint>,
    pub closure_size: usize,
    pub closure_equals_ambient: bool,
}

pub fn report(s: &PointSet) -> SetReport {
    let closure_size = closure_indices(s.space(), s.points()).len();
    SetReport {
        span_dim: span_dimension(s),
        is_arc: is_arc(s).arc,
        is_cap: is_cap(s).cap,
        uncovered_points: tangent_coverage(s, true).uncovered,
        closure_size,
        closure_equals_ambient: closure_size as u64 == s.space().num_points(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointsets::{baer_set, cone_set, frame, nrc_minus_point, BaerKind};
    use proptest::prelude::*;

    fn set(n: usize, q: u64, coords: &[&[u32]]) -> PointSet {
        let space = ProjSpace::over_order(n, q).unwrap();
        PointSet::from_ints(&space, &coords.iter().map(|c| c.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn span_examples() {
        assert_eq!(span_dimension(&nrc_minus_point(2, 5).unwrap()), 2);
        assert_eq!(span_dimension(&set(2, 5, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0]])), 1);
        assert_eq!(span_dimension(&set(2, 5, &[&[1, 2, 3]])), 0);
    }

    #[test]
    fn arcs() {
        assert!(is_arc(&frame(3, 5).unwrap()).arc);
        let bad = set(2, 5, &[&[1, 0, 0], &[0, 0, 1], &[0, 1, 0], &[1, 1, 0]]);
        let v = is_arc(&bad);
        assert!(!v.arc);
        let w = v.witness.unwrap();
        let rows: Vec<&[FieldElement]> = w.iter().map(|&i| bad.points()[i].coords()).collect();
        assert!(linalg::rank_of_rows(bad.field(), &rows) < rows.len());
    }

    #[test]
    fn caps() {
        let line = set(2, 3, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0], &[1, 2, 0]]);
        assert!(!is_cap(&line).cap);
        assert!(!is_cap(&baer_set(BaerKind::Hyperbolic, 9).unwrap()).cap);
    }

    #[test]
    fn tangents() {
        let k = nrc_minus_point(2, 5).unwrap();
        assert!(tangent_coverage(&k, true).uncovered.is_empty());
        let one = set(2, 5, &[&[1, 2, 3]]);
        let r = tangent_coverage(&one, false);
        assert_eq!(r.checked, 30);
        assert!(r.uncovered.is_empty());
    }

    #[test]
    fn cone_tangents() {
        let k = cone_set(3, 2, 3, None).unwrap();
        let r = tangent_coverage(&k, true);
        let v = k.space().point_from_ints(&[1, 0, 0, 0]).unwrap();
        assert_eq!(r.uncovered, vec![v.clone()]);
        // a quadrangle base: no tangents through the diagonal points or the
        // third points of the lines joining them to V
        let quad = cone_set(3, 2, 3, Some(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 1]])).unwrap();
        let r = tangent_coverage(&quad, true);
        assert_eq!(r.uncovered.len(), 7);
        assert!(r.uncovered.contains(&v));
    }

    #[test]
    fn closure_examples() {
        let k = nrc_minus_point(2, 5).unwrap();
        assert_eq!(closure(&k).len(), 31);
        // a quadrangle of PG(2,9) closes to a subplane of order 3
        let quad = set(2, 9, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]]);
        assert_eq!(closure(&quad).len(), 13);
        let single = set(2, 5, &[&[1, 0, 0]]);
        assert_eq!(closure(&single).len(), 1);
    }

    #[test]
    fn elliptic_closure_is_baer_subgeometry() {
        let k = baer_set(BaerKind::Elliptic, 9).unwrap();
        let c = closure(&k);
        assert_eq!(c.len(), 40);
        let sub: HashSet<FieldElement> = k.field().subfield(1).unwrap().into_iter().collect();
        assert!(c.points().iter().all(|p| p.coords().iter().all(|x| sub.contains(x))));
    }

    #[test]
    fn hyperplane_meets_on_a_secant() {
        let k = nrc_minus_point(3, 7).unwrap();
        let pts = line_meets_from_hyperplanes(&k, 0, 1);
        assert!(pts.len() as f64 >= 7.0 / 2.0);
    }

    fn arbitrary_set() -> impl Strategy<Value = (u64, Vec<usize>)> {
        prop_oneof![Just(2u64), Just(3), Just(4), Just(5), Just(7), Just(8), Just(9)].prop_flat_map(|q| {
            let total = (q * q + q + 1) as usize;
            (Just(q), proptest::collection::vec(0..total, 1..5))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn closure_is_extensive_idempotent_monotone((q, idx) in arbitrary_set(), extra in 0usize..1000) {
            let space = ProjSpace::over_order(2, q).unwrap();
            let mut idx = idx;
            idx.sort_unstable();
            idx.dedup();
            let pts: Vec<ProjPoint> = idx.iter().map(|&i| space.point_at(i)).collect();
            let c = closure_indices(&space, &pts);
            for i in &idx {
                prop_assert!(c.contains(i));
            }
            let cpts: Vec<ProjPoint> = c.iter().map(|&i| space.point_at(i)).collect();
            prop_assert_eq!(closure_indices(&space, &cpts), c.clone());
            let mut bigger = idx.clone();
            bigger.push(extra % space.num_points() as usize);
            bigger.sort_unstable();
            bigger.dedup();
            let bpts: Vec<ProjPoint> = bigger.iter().map(|&i| space.point_at(i)).collect();
            let cb = closure_indices(&space, &bpts);
            for i in &c {
                prop_assert!(cb.contains(i));
            }
        }
    }
}
