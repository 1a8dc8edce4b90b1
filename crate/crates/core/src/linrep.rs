//! The incidence graphs Γ_{n,q}(K) and Λ_{n,q}, the orbit point set under
//! the unipotent matrix A_φ, and explicit edge-to-edge collineations.
//!
//! Γ vertex numbering: the affine point (1,a_1,...,a_{n+1}) is
//! Σ a_i q^(n+1-i); the line through K[k] with anchor r is
//! q^(n+1) + k q^n + r, where the anchor is the point of the line whose
//! coordinate at the leading position of K[k] is zero and r encodes its
//! other n coordinates in base q.

use std::collections::BTreeMap;

use serde_json::json;

use crate::error::{usage, Error, Result};
use crate::gf::{is_prime, Field, FieldElement};
use crate::graph::{Graph, GraphMeta, IncidenceGraph, META_SCHEMA};
use crate::linalg::Matrix;
use crate::pg::{self, Collineation, ProjPoint, ProjSpace, StabilizerOptions};
use crate::pointsets::PointSet;

fn base_q(q: usize, digits: impl Iterator<Item = FieldElement>) -> usize {
    digits.fold(0, |acc, d| acc * q + d.index())
}

fn digits(q: usize, mut x: usize, len: usize) -> Vec<FieldElement> {
    let mut out = vec![FieldElement::ZERO; len];
    for slot in out.iter_mut().rev() {
        *slot = FieldElement((x % q) as u32);
        x /= q;
    }
    out
}

/// Geometry of Γ_{n,q}(K): how vertex numbers map to points and lines.
pub struct GammaLayout {
    pub n: usize,
    pub q: usize,
    field: Field,
    directions: Vec<Vec<FieldElement>>,
    leads: Vec<usize>,
}

impl GammaLayout {
    pub fn new(k: &PointSet) -> Result<GammaLayout> {
        if k.is_empty() {
            return usage("K is empty");
        }
        let directions: Vec<Vec<FieldElement>> = k.points().iter().map(|p| p.coords().to_vec()).collect();
        let leads = directions.iter().map(|d| d.iter().position(|c| !c.is_zero()).unwrap()).collect();
        Ok(GammaLayout { n: k.n(), q: k.q() as usize, field: k.field().clone(), directions, leads })
    }

    pub fn num_points(&self) -> usize {
        self.q.pow(self.n as u32 + 1)
    }

    pub fn point_vertex(&self, affine: &[FieldElement]) -> u32 {
        base_q(self.q, affine.iter().copied()) as u32
    }

    /// Affine part (a_1..a_{n+1}) of a point vertex.
    pub fn point_coords(&self, v: u32) -> Vec<FieldElement> {
        digits(self.q, v as usize, self.n + 1)
    }

    /// The line vertex through the affine point `a` with direction K[k].
    pub fn line_vertex(&self, k: usize, a: &[FieldElement]) -> u32 {
        let f = &self.field;
        let d = &self.directions[k];
        let j = self.leads[k];
        // d[j] = 1, so subtracting a_j d lands on the anchor
        let t = a[j];
        let anchor = a.iter().zip(d).enumerate().filter(|&(i, _)| i != j).map(|(_, (&x, &y))| f.sub(x, f.mul(t, y)));
        let r = base_q(self.q, anchor);
        (self.num_points() + k * self.q.pow(self.n as u32) + r) as u32
    }

    /// (K index, anchor point) of a line vertex.
    pub fn line_info(&self, v: u32) -> (usize, Vec<FieldElement>) {
        let rel = v as usize - self.num_points();
        let per = self.q.pow(self.n as u32);
        let (k, r) = (rel / per, rel % per);
        let rest = digits(self.q, r, self.n);
        let j = self.leads[k];
        let mut anchor = Vec::with_capacity(self.n + 1);
        anchor.extend_from_slice(&rest[..j]);
        anchor.push(FieldElement::ZERO);
        anchor.extend_from_slice(&rest[j..]);
        (k, anchor)
    }
}

/// Γ_{n,q}(K) with H∞ = {X0 = 0}.
pub fn build_gamma(k: &PointSet) -> Result<IncidenceGraph> {
    let layout = GammaLayout::new(k)?;
    let f = k.field().clone();
    let (n, q) = (layout.n, layout.q);
    let np = layout.num_points();
    let nl = k.len() * q.pow(n as u32);
    let mut lists: Vec<Vec<u32>> = vec![Vec::with_capacity(k.len()); np];
    lists.extend((0..nl).map(|_| Vec::with_capacity(q)));
    for (ki, d) in layout.directions.iter().enumerate() {
        for r in 0..q.pow(n as u32) {
            let line = (np + ki * q.pow(n as u32) + r) as u32;
            let (_, anchor) = layout.line_info(line);
            for t in f.elements() {
                let a: Vec<FieldElement> = anchor.iter().zip(d).map(|(&x, &y)| f.add(x, f.mul(t, y))).collect();
                let p = layout.point_vertex(&a);
                lists[p as usize].push(line);
                lists[line as usize].push(p);
            }
        }
    }
    let graph = Graph::from_lists(lists)?;
    let mut params = BTreeMap::new();
    params.insert("k_size".into(), json!(k.len()));
    let meta = GraphMeta {
        schema: META_SCHEMA,
        family: k.family().as_str().into(),
        n,
        q: q as u32,
        part_sizes: [np, nl],
        vertex_order: "points (1,a_1..a_{n+1}) as base-q numbers a_1 first; then lines q^(n+1) + k q^n + r, \
                       r = base-q anchor with the leading coordinate of K[k] dropped"
            .into(),
        params,
        point_set: Some(k.to_data()),
    };
    IncidenceGraph::new(graph, meta)
}

/// The bipartite graph Λ_{n,q}: (p) ~ [l] iff l_{i+1} + p_{i+1} = p_1 l_i
/// for i = 1..n. Points (p) come first, both parts in base-q order.
pub fn build_lambda(n: usize, q: u64) -> Result<IncidenceGraph> {
    if n < 1 {
        return usage("Λ needs n >= 1");
    }
    let f = Field::from_order(q)?;
    let qq = q as usize;
    let size = qq.pow(n as u32 + 1);
    let mut lists: Vec<Vec<u32>> = vec![Vec::with_capacity(qq); 2 * size];
    for pv in 0..size {
        let p = digits(qq, pv, n + 1);
        for l1 in f.elements() {
            let mut l = vec![l1];
            for i in 0..n {
                l.push(f.sub(f.mul(p[0], l[i]), p[i + 1]));
            }
            let lv = size + base_q(qq, l.into_iter());
            lists[pv].push(lv as u32);
            lists[lv].push(pv as u32);
        }
    }
    let graph = Graph::from_lists(lists)?;
    let meta = GraphMeta {
        schema: META_SCHEMA,
        family: "lambda".into(),
        n,
        q: q as u32,
        part_sizes: [size, size],
        vertex_order: "points (p_1..p_{n+1}) then lines [l_1..l_{n+1}], each as base-q numbers p_1 first".into(),
        params: BTreeMap::new(),
        point_set: None,
    };
    IncidenceGraph::new(graph, meta)
}

/// The vertex map Λ_{n,q} -> Γ_{n,q}(nrc_minus_point(n,q)): the line [l]
/// goes to the affine point (1,l) and the point (p) to the line through
/// (1,0,x_2..x_{n+1}) with direction (1,p_1,...,p_1^n), where
/// x_{i+1} = p_1 x_i - p_{i+1}. Parts are swapped.
pub fn lambda_to_gamma_map(n: usize, q: u64) -> Result<Vec<u32>> {
    let f = Field::from_order(q)?;
    let qq = q as usize;
    let size = qq.pow(n as u32 + 1);
    let per = qq.pow(n as u32);
    let mut map = vec![0u32; 2 * size];
    for (pv, slot) in map[..size].iter_mut().enumerate() {
        let p = digits(qq, pv, n + 1);
        let mut x = vec![FieldElement::ZERO];
        for i in 0..n {
            x.push(f.sub(f.mul(p[0], x[i]), p[i + 1]));
        }
        let r = base_q(qq, x[1..].iter().copied());
        *slot = (size + p[0].index() * per + r) as u32;
    }
    for lv in 0..size {
        map[size + lv] = lv as u32;
    }
    Ok(map)
}

/// The orbit of (1,0,...,0) under x -> x A_φ in PG(n,p), where A_φ has ones
/// on the diagonal and superdiagonal.
pub fn dwz_pointset(n: usize, p: u64) -> Result<PointSet> {
    if !is_prime(p) {
        return usage(format!("{p} is not prime"));
    }
    if n < 1 || n as u64 > p - 1 {
        return usage(format!("the orbit construction needs 1 <= n <= p-1, got n = {n}, p = {p}"));
    }
    let space = ProjSpace::over_order(n, p)?;
    let f = space.field().clone();
    let g = Collineation::new(&f, a_phi(n), 0)?;
    let mut pts = Vec::new();
    let mut cur = space.point_from_ints(&{
        let mut v = vec![0u32; n + 1];
        v[0] = 1;
        v
    })?;
    for _ in 0..p {
        pts.push(cur.clone());
        cur = pg::apply(&g, &cur)?;
    }
    if cur != pts[0] {
        return usage("orbit did not close after p steps");
    }
    let mut meta = BTreeMap::new();
    meta.insert("construction".into(), json!("orbit of (1,0,...,0) under A_phi"));
    meta.insert("n".into(), json!(n));
    meta.insert("p".into(), json!(p));
    PointSet::new(crate::pointsets::Family::Custom, &space, pts, meta)
}

/// Ones on the diagonal and superdiagonal.
pub fn a_phi(n: usize) -> Matrix {
    let mut m = Matrix::identity(n + 1);
    for i in 0..n {
        m.set(i, i + 1, FieldElement::ONE);
    }
    m
}

/// Embeds a collineation of H∞ = PG(n,q) into PG(n+1,q) as diag(1, B).
pub fn extend_to_ambient(g: &Collineation) -> Collineation {
    let d = g.matrix.rows;
    let mut m = Matrix::zeros(d + 1, d + 1);
    m.set(0, 0, FieldElement::ONE);
    for i in 0..d {
        for j in 0..d {
            m.set(i + 1, j + 1, g.matrix.get(i, j));
        }
    }
    Collineation { matrix: m, frob: g.frob }
}

/// A collineation of PG(n+1,q) fixing H∞, stabilizing K, and mapping the
/// edge e1 = (point, line) of Γ_{n,q}(K) onto e2.
pub fn edge_map_witness(
    g: &IncidenceGraph,
    e1: (u32, u32),
    e2: (u32, u32),
    opts: &StabilizerOptions,
) -> Result<Collineation> {
    let k = g.point_set().ok_or_else(|| Error::Usage("graph was not built from a point set".into()))?;
    let layout = GammaLayout::new(k)?;
    let gr = g.graph();
    for &(r, l) in &[e1, e2] {
        if !g.is_point(r) || g.is_point(l) || !gr.has_edge(r, l) {
            return usage(format!("({r},{l}) is not a point-line edge"));
        }
    }
    let f = k.field().clone();
    let n = k.n();
    let big = ProjSpace::new(n + 1, f.clone());
    let (k1, _) = layout.line_info(e1.1);
    let (k2, _) = layout.line_info(e2.1);
    let beta = if k1 == k2 {
        Collineation::identity(n)
    } else {
        pg::find_stabilizer_element(k.space(), k.points(), k1, k2, opts)?.ok_or_else(|| {
            Error::Unsupported(format!("no collineation stabilizing K maps K[{k1}] to K[{k2}]"))
        })?
    };
    let beta_ext = extend_to_ambient(&beta);
    let affine = |v: u32| -> Result<ProjPoint> {
        let mut c = vec![FieldElement::ONE];
        c.extend(layout.point_coords(v));
        big.point(c)
    };
    let r1 = affine(e1.0)?;
    let r2 = affine(e2.0)?;
    let moved = pg::apply(&beta_ext, &r1)?;
    let mut h_inf = vec![FieldElement::ZERO; n + 2];
    h_inf[0] = FieldElement::ONE;
    let axis = big.hyperplane(&h_inf)?;
    let gamma = if moved == r2 {
        Collineation::identity(n + 1)
    } else {
        let line = pg::span(&big, &[moved.clone(), r2.clone()])?;
        let center = pg::meet(&line, &axis)?.points().remove(0);
        pg::elation(&axis, &center, &moved, &r2)?
    };
    let w = gamma.compose(&f, &beta_ext);
    verify_edge_map(k, &layout, &big, &w, e1, e2)?;
    Ok(w)
}

fn verify_edge_map(
    k: &PointSet,
    layout: &GammaLayout,
    big: &ProjSpace,
    w: &Collineation,
    e1: (u32, u32),
    e2: (u32, u32),
) -> Result<()> {
    let f = big.field();
    let to_vertex = |p: &ProjPoint| -> Option<u32> {
        let c = p.coords();
        (c[0] == FieldElement::ONE).then(|| layout.point_vertex(&c[1..]))
    };
    let lift = |v: u32| {
        let mut c = vec![FieldElement::ONE];
        c.extend(layout.point_coords(v));
        big.point(c).unwrap()
    };
    let fail = || Err(Error::Usage("constructed collineation does not map the edges".into()));
    if to_vertex(&pg::apply(w, &lift(e1.0))?) != Some(e2.0) {
        return fail();
    }
    let (k1, anchor) = layout.line_info(e1.1);
    let (k2, _) = layout.line_info(e2.1);
    let d = k.points()[k1].coords();
    for t in f.elements() {
        let a: Vec<FieldElement> = anchor.iter().zip(d).map(|(&x, &y)| f.add(x, f.mul(t, y))).collect();
        let img = pg::apply(w, &lift(layout.point_vertex(&a)))?;
        match to_vertex(&img) {
            Some(v) if layout.line_vertex(k2, &layout.point_coords(v)) == e2.1 => {}
            _ => return fail(),
        }
    }
    // K is mapped onto itself at infinity
    for p in k.points() {
        let mut c = vec![FieldElement::ZERO];
        c.extend_from_slice(p.coords());
        let img = pg::apply(w, &big.point(c)?)?;
        let back = k.space().point(img.coords()[1..].to_vec())?;
        if img.coords()[0] != FieldElement::ZERO || !k.contains(&back) {
            return fail();
        }
    }
    Ok(())
}
