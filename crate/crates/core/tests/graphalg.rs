//! Automorphism engine checked against an independent Schreier-Sims order
//! computation and against collineations of PG(n+1,q).

use std::collections::HashMap;

use num_bigint::BigUint;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use semisym::graphalg::{self, AutOptions};
use semisym::linrep::{build_gamma, extend_to_ambient, GammaLayout};
use semisym::pg::{find_stabilizer_element, persp_group, StabilizerOptions};
use semisym::pointsets::{basis, frame, nrc_minus_point};
use semisym::{Collineation, FieldElement, Graph, IncidenceGraph, PointSet, ProjSpace};

type Perm = Vec<u32>;

fn mul(a: &Perm, b: &Perm) -> Perm {
    a.iter().map(|&x| b[x as usize]).collect()
}

fn inv(a: &Perm) -> Perm {
    let mut out = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        out[x as usize] = i as u32;
    }
    out
}

fn is_id(a: &Perm) -> bool {
    a.iter().enumerate().all(|(i, &x)| i as u32 == x)
}

/// Deterministic Schreier-Sims: strong generators are tagged with the first
/// base level they move, and every Schreier generator must sift.
struct Bsgs {
    n: usize,
    base: Vec<u32>,
    strong: Vec<(usize, Perm)>,
}

impl Bsgs {
    fn transversal(&self, level: usize) -> HashMap<u32, Perm> {
        let b = self.base[level];
        let gens: Vec<&Perm> = self.strong.iter().filter(|(l, _)| *l >= level).map(|(_, p)| p).collect();
        let mut t = HashMap::new();
        t.insert(b, (0..self.n as u32).collect::<Perm>());
        let mut queue = vec![b];
        while let Some(x) = queue.pop() {
            for g in &gens {
                let y = g[x as usize];
                if !t.contains_key(&y) {
                    let tx = mul(&t[&x], g);
                    t.insert(y, tx);
                    queue.push(y);
                }
            }
        }
        t
    }

    fn sift(&self, mut h: Perm, from: usize, ts: &[HashMap<u32, Perm>]) -> (Perm, usize) {
        for l in from..self.base.len() {
            let x = h[self.base[l] as usize];
            match ts[l].get(&x) {
                Some(t) => h = mul(&h, &inv(t)),
                None => return (h, l),
            }
        }
        let l = self.base.len();
        (h, l)
    }

    fn add(&mut self, h: Perm) {
        let level = self.base.iter().position(|&b| h[b as usize] != b).unwrap_or_else(|| {
            let moved = h.iter().enumerate().position(|(i, &x)| i as u32 != x).unwrap();
            self.base.push(moved as u32);
            self.base.len() - 1
        });
        self.strong.push((level, h));
    }

    fn order(n: usize, gens: &[Perm]) -> BigUint {
        let mut s = Bsgs { n, base: Vec::new(), strong: Vec::new() };
        for g in gens.iter().filter(|g| !is_id(g)) {
            s.add(g.clone());
        }
        'outer: loop {
            let ts: Vec<HashMap<u32, Perm>> = (0..s.base.len()).map(|l| s.transversal(l)).collect();
            for l in (0..s.base.len()).rev() {
                let gens: Vec<Perm> = s.strong.iter().filter(|(k, _)| *k >= l).map(|(_, p)| p.clone()).collect();
                for (&x, tx) in &ts[l] {
                    for g in &gens {
                        let y = g[x as usize];
                        let h = mul(&mul(tx, g), &inv(&ts[l][&y]));
                        let (r, _) = s.sift(h, l + 1, &ts);
                        if !is_id(&r) {
                            s.add(r);
                            continue 'outer;
                        }
                    }
                }
            }
            return ts.iter().map(|t| BigUint::from(t.len())).product();
        }
    }
}

fn full_generators(ig: &IncidenceGraph) -> (Vec<Perm>, BigUint) {
    let r = graphalg::automorphisms(ig, &AutOptions::default()).unwrap();
    let mut gens = r.generators.clone();
    gens.extend(r.swap.clone());
    for g in &gens {
        assert!(ig.graph().is_automorphism(g));
    }
    (gens, r.full_group_order)
}

#[test]
fn schreier_sims_agrees_with_engine() {
    let cases: Vec<PointSet> =
        vec![nrc_minus_point(2, 3).unwrap(), nrc_minus_point(2, 5).unwrap(), basis(2, 3).unwrap(), frame(2, 4).unwrap(), basis(3, 4).unwrap()];
    for k in cases {
        let ig = build_gamma(&k).unwrap();
        let (gens, order) = full_generators(&ig);
        assert_eq!(Bsgs::order(ig.graph().n(), &gens), order, "{:?} n={} q={}", k.family(), k.n(), k.q());
    }
}

#[test]
fn schreier_sims_on_small_graphs() {
    let petersen = Graph::from_edges(
        10,
        &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 5), (1, 6), (2, 7), (3, 8), (4, 9), (5, 7), (7, 9), (6, 9), (6, 8), (5, 8)],
    )
    .unwrap();
    let g = graphalg::automorphism_group(&petersen, &[0; 10]);
    assert_eq!(Bsgs::order(10, &g.generators), BigUint::from(120u32));
    assert_eq!(g.order, BigUint::from(120u32));
}

/// Vertex permutation of Γ_{n,q}(K) induced by a collineation of PG(n+1,q)
/// that fixes X0 = 0 and K.
fn induced(k: &PointSet, layout: &GammaLayout, g: &Collineation, nv: usize) -> Perm {
    let f = k.field();
    let np = layout.num_points();
    let affine = |a: &[FieldElement]| {
        let mut x = vec![FieldElement::ONE];
        x.extend_from_slice(a);
        let y = g.apply_coords(f, &x);
        assert!(y[0] == FieldElement::ONE, "H∞ not fixed");
        y[1..].to_vec()
    };
    let mut perm = vec![0u32; nv];
    for v in 0..np as u32 {
        perm[v as usize] = layout.point_vertex(&affine(&layout.point_coords(v)));
    }
    for v in np as u32..nv as u32 {
        let (ki, anchor) = layout.line_info(v);
        let mut d = vec![FieldElement::ZERO];
        d.extend_from_slice(k.points()[ki].coords());
        let img = g.apply_coords(f, &d);
        let kj = k.points().iter().position(|p| p.coords() == &img[1..]).expect("K is fixed");
        perm[v as usize] = layout.line_vertex(kj, &affine(&anchor));
    }
    perm
}

#[test]
fn geometric_generators_are_automorphisms() {
    for k in [nrc_minus_point(2, 5).unwrap(), nrc_minus_point(2, 9).unwrap(), nrc_minus_point(3, 4).unwrap(), frame(3, 5).unwrap()] {
        let ig = build_gamma(&k).unwrap();
        let layout = GammaLayout::new(&k).unwrap();
        let nv = ig.graph().n();
        let f = k.field().clone();
        let ambient = ProjSpace::new(k.n() + 1, f.clone());
        let mut h = vec![FieldElement::ZERO; k.n() + 2];
        h[0] = FieldElement::ONE;
        let axis = ambient.hyperplane(&h).unwrap();
        let mut gens: Vec<Collineation> = persp_group(&axis).unwrap().generators;
        for j in 1..k.len() {
            let b = find_stabilizer_element(k.space(), k.points(), 0, j, &StabilizerOptions::default()).unwrap().unwrap();
            gens.push(extend_to_ambient(&b));
        }
        if f.h() > 1 {
            gens.push(Collineation::new(&f, semisym::Matrix::identity(k.n() + 2), 1).unwrap());
        }
        let perms: Vec<Perm> = gens.iter().map(|g| induced(&k, &layout, g, nv)).collect();
        for p in &perms {
            assert!(ig.graph().is_automorphism(p));
        }
        // the geometric generators sit inside the engine's group
        let (engine_gens, order) = full_generators(&ig);
        let mut all = engine_gens;
        all.extend(perms);
        assert_eq!(Bsgs::order(nv, &all), order);
    }
}

fn shuffled_within_parts(ig: &IncidenceGraph, seed: u64) -> (IncidenceGraph, Perm) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let np = ig.num_points();
    let mut pts: Vec<u32> = (0..np as u32).collect();
    let mut lines: Vec<u32> = (np as u32..ig.graph().n() as u32).collect();
    pts.shuffle(&mut rng);
    lines.shuffle(&mut rng);
    let perm: Perm = pts.into_iter().chain(lines).collect();
    let g = ig.graph().relabel(&perm);
    let mut meta = ig.meta().clone();
    meta.point_set = None;
    (IncidenceGraph::new(g, meta).unwrap(), perm)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn relabeling_preserves_form_and_order(seed in any::<u64>(), which in 0usize..3) {
        let k = [nrc_minus_point(2, 4), basis(2, 3), frame(3, 5)][which].clone().unwrap();
        let ig = build_gamma(&k).unwrap();
        let (jg, perm) = shuffled_within_parts(&ig, seed);
        prop_assert_eq!(graphalg::canonical_form(&ig), graphalg::canonical_form(&jg));
        let a = graphalg::automorphisms(&ig, &AutOptions::default()).unwrap();
        let b = graphalg::automorphisms(&jg, &AutOptions::default()).unwrap();
        prop_assert_eq!(&a.full_group_order, &b.full_group_order);
        prop_assert_eq!(a.edge_orbits.sizes, b.edge_orbits.sizes);
        // conjugated generators are automorphisms of the relabeled graph
        let pinv = inv(&perm);
        for g in &a.generators {
            let c = mul(&mul(&pinv, g), &perm);
            prop_assert!(jg.graph().is_automorphism(&c));
        }
    }
}
