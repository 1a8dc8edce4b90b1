//! Connectivity, girth, short cycles, distance statistics, canonical forms
//! and automorphism groups.

mod geometric;
mod partition;
mod search;

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{usage, Error, Result};
use crate::graph::{Graph, IncidenceGraph};

pub use geometric::{geometric_order, FormulaValue, GeometricOrder};

pub const DEFAULT_CEILING: usize = 20_000;

/// Disjoint-set forest over vertex ids.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n as u32).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a as usize] < self.size[b as usize] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b as usize] = a;
        self.size[a as usize] += self.size[b as usize];
        true
    }

    /// Classes sorted by smallest member, members ascending.
    pub fn classes(&mut self) -> Vec<Vec<u32>> {
        let n = self.parent.len();
        let mut by_root: HashMap<u32, usize> = HashMap::new();
        let mut out: Vec<Vec<u32>> = Vec::new();
        for v in 0..n as u32 {
            let r = self.find(v);
            let i = *by_root.entry(r).or_insert_with(|| {
                out.push(Vec::new());
                out.len() - 1
            });
            out[i].push(v);
        }
        out
    }
}

pub fn connected_components(g: &Graph) -> Vec<Vec<u32>> {
    let mut uf = UnionFind::new(g.n());
    for (a, b) in g.edges() {
        uf.union(a, b);
    }
    uf.classes()
}

pub fn is_connected(g: &Graph) -> bool {
    connected_components(g).len() <= 1
}

/// Common degree, if the graph is regular and nonempty.
pub fn regular_degree(g: &Graph) -> Option<usize> {
    if g.n() == 0 {
        return None;
    }
    let d = g.degree(0);
    (0..g.n() as u32).all(|v| g.degree(v) == d).then_some(d)
}

fn bfs(g: &Graph, root: u32, limit: u32, dist: &mut [u32], seen: &mut Vec<u32>, mut visit: impl FnMut(u32, u32, u32, u32)) {
    seen.clear();
    dist[root as usize] = 0;
    seen.push(root);
    let mut head = 0;
    while head < seen.len() {
        let u = seen[head];
        head += 1;
        let du = dist[u as usize];
        if du >= limit {
            continue;
        }
        for &w in g.neighbors(u) {
            if dist[w as usize] == u32::MAX {
                dist[w as usize] = du + 1;
                seen.push(w);
            }
            visit(u, w, du, dist[w as usize]);
        }
    }
}

/// Vertices at each distance from `v` (index = distance).
pub fn distance_profile(g: &Graph, v: u32) -> Vec<usize> {
    let mut dist = vec![u32::MAX; g.n()];
    let mut seen = Vec::new();
    bfs(g, v, u32::MAX, &mut dist, &mut seen, |_, _, _, _| {});
    let mut out = Vec::new();
    for &u in &seen {
        let d = dist[u as usize] as usize;
        if out.len() <= d {
            out.resize(d + 1, 0);
        }
        out[d] += 1;
    }
    out
}

/// Length of a shortest cycle; `None` for a forest.
pub fn girth(g: &Graph) -> Option<usize> {
    let n = g.n();
    let best = AtomicUsize::new(usize::MAX);
    (0..n as u32).into_par_iter().for_each_init(
        || (vec![u32::MAX; n], Vec::new(), vec![u32::MAX; n]),
        |(dist, seen, parent), root| {
            let bound = best.load(Ordering::Relaxed);
            // a cycle through root of length < bound has all vertices within bound/2
            let limit = if bound == usize::MAX { u32::MAX } else { (bound / 2) as u32 };
            let mut local = usize::MAX;
            parent[root as usize] = root;
            bfs(g, root, limit, dist, seen, |u, w, du, dw| {
                if parent[w as usize] == u32::MAX {
                    parent[w as usize] = u;
                } else if parent[u as usize] != w {
                    local = local.min((du + dw + 1) as usize);
                }
            });
            for &s in seen.iter() {
                dist[s as usize] = u32::MAX;
                parent[s as usize] = u32::MAX;
            }
            best.fetch_min(local, Ordering::Relaxed);
        },
    );
    let b = best.into_inner();
    (b != usize::MAX).then_some(b)
}

const MAX_CYCLE: usize = 16;

struct Path {
    end: u32,
    interior: [u32; MAX_CYCLE / 2],
    len: usize,
}

fn paths_from(g: &Graph, root: u32, lengths: (usize, usize), out: (&mut Vec<Path>, &mut Vec<Path>)) {
    fn go(g: &Graph, stack: &mut Vec<u32>, lengths: (usize, usize), out: &mut (&mut Vec<Path>, &mut Vec<Path>)) {
        let depth = stack.len() - 1;
        let u = *stack.last().unwrap();
        let record = |stack: &[u32]| {
            let mut interior = [0; MAX_CYCLE / 2];
            let inner = &stack[1..stack.len() - 1];
            interior[..inner.len()].copy_from_slice(inner);
            Path { end: *stack.last().unwrap(), interior, len: inner.len() }
        };
        if depth == lengths.0 && lengths.0 != lengths.1 {
            out.0.push(record(stack));
        }
        if depth == lengths.1 {
            out.1.push(record(stack));
        }
        if depth == lengths.1 {
            return;
        }
        for &w in g.neighbors(u) {
            if w > stack[0] && !stack.contains(&w) {
                stack.push(w);
                go(g, stack, lengths, out);
                stack.pop();
            }
        }
    }
    let mut stack = vec![root];
    let mut out = out;
    go(g, &mut stack, lengths, &mut out);
}

/// A cycle of length exactly `k` (3 <= k <= 16), as its vertex sequence.
///
/// Every cycle is found from its smallest vertex r as two internally
/// disjoint paths from r, of lengths floor(k/2) and ceil(k/2), ending at
/// the same vertex. The smallest such r is reported.
pub fn find_cycle(g: &Graph, k: usize) -> Result<Option<Vec<u32>>> {
    if !(3..=MAX_CYCLE).contains(&k) {
        return usage(format!("cycle length must be in 3..={MAX_CYCLE}, got {k}"));
    }
    let (a, b) = (k / 2, k - k / 2);
    Ok((0..g.n() as u32).into_par_iter().find_map_first(|root| {
        let (mut short, mut long) = (Vec::new(), Vec::new());
        paths_from(g, root, (a, b), (&mut short, &mut long));
        long.sort_unstable_by_key(|p| p.end);
        let short = if a == b { &long } else { &short };
        let long = &long;
        short.iter().find_map(|p| {
            let lo = long.partition_point(|q| q.end < p.end);
            long[lo..].iter().take_while(|q| q.end == p.end).find_map(|q| {
                let pi = &p.interior[..p.len];
                let qi = &q.interior[..q.len];
                (pi != qi && pi.iter().all(|x| !qi.contains(x))).then(|| {
                    let mut cyc = vec![root];
                    cyc.extend_from_slice(pi);
                    cyc.push(p.end);
                    cyc.extend(qi.iter().rev());
                    cyc
                })
            })
        })
    }))
}

pub fn has_cycle_length(g: &Graph, k: usize) -> Result<bool> {
    Ok(find_cycle(g, k)?.is_some())
}

/// Vertices at distance exactly 4 from `v` whose neighbours all lie at
/// distance 3 from `v`.
pub fn saturated_d4_count(g: &Graph, v: u32) -> usize {
    let mut dist = vec![u32::MAX; g.n()];
    let mut seen = Vec::new();
    bfs(g, v, 4, &mut dist, &mut seen, |_, _, _, _| {});
    seen.iter()
        .filter(|&&w| dist[w as usize] == 4 && g.neighbors(w).iter().all(|&x| dist[x as usize] == 3))
        .count()
}

fn decimal<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// Orbit partition in summary form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitSummary {
    pub count: usize,
    pub sizes: Vec<usize>,
    /// Smallest member of each orbit.
    pub representatives: Vec<u32>,
}

impl OrbitSummary {
    fn from_classes(classes: &[Vec<u32>]) -> OrbitSummary {
        OrbitSummary {
            count: classes.len(),
            sizes: classes.iter().map(Vec::len).collect(),
            representatives: classes.iter().map(|c| c[0]).collect(),
        }
    }
}

/// Automorphism group of a coloured graph.
#[derive(Clone, Debug, Serialize)]
pub struct Group {
    #[serde(serialize_with = "decimal")]
    pub order: BigUint,
    pub generators: Vec<Vec<u32>>,
    /// Base along which `orbit_lengths` were measured.
    pub base: Vec<u32>,
    pub orbit_lengths: Vec<u64>,
}

/// Group of colour-preserving automorphisms. Vertices of equal colour form
/// the cells of the initial partition.
pub fn automorphism_group(g: &Graph, colors: &[u32]) -> Group {
    let out = search::run_deep(g, colors);
    Group { order: out.order, generators: out.generators, base: out.base, orbit_lengths: out.orbit_lengths }
}

fn encode_form(g: &Graph, colors: &[u32], cert: &[u32]) -> Vec<u8> {
    let mut sizes: Vec<(u32, u32)> = Vec::new();
    let mut sorted = colors.to_vec();
    sorted.sort_unstable();
    for c in sorted {
        match sizes.last_mut() {
            Some((last, k)) if *last == c => *k += 1,
            _ => sizes.push((c, 1)),
        }
    }
    let mut out = b"SSCF1".to_vec();
    out.extend_from_slice(&(g.n() as u32).to_le_bytes());
    out.extend_from_slice(&(sizes.len() as u32).to_le_bytes());
    for (_, k) in sizes {
        out.extend_from_slice(&k.to_le_bytes());
    }
    for x in cert {
        out.extend_from_slice(&x.to_le_bytes());
    }
    out
}

/// Canonical form of a graph with an ordered colouring: equal for two
/// inputs iff some isomorphism carries colour class i onto colour class i.
pub fn canonical_form_colored(g: &Graph, colors: &[u32]) -> Vec<u8> {
    let out = search::run_deep(g, colors);
    encode_form(g, colors, &out.certificate)
}

pub fn canonical_form_graph(g: &Graph) -> Vec<u8> {
    canonical_form_colored(g, &vec![0; g.n()])
}

fn part_colors(ig: &IncidenceGraph) -> (Vec<u32>, Vec<u32>) {
    let c: Vec<u32> = ig.coloring().into_iter().map(u32::from).collect();
    let swapped = c.iter().map(|&x| 1 - x).collect();
    (c, swapped)
}

fn run_both(g: &Graph, a: &[u32], b: &[u32]) -> (search::Outcome, search::Outcome) {
    rayon::join(|| search::run_deep(g, a), || search::run_deep(g, b))
}

/// Canonical form of a bipartite incidence graph, allowing the two parts to
/// be exchanged: the smaller of the forms over (points, lines) and
/// (lines, points).
pub fn canonical_form(ig: &IncidenceGraph) -> Vec<u8> {
    let (c, s) = part_colors(ig);
    let (a, b) = run_both(ig.graph(), &c, &s);
    let fa = encode_form(ig.graph(), &c, &a.certificate);
    let fb = encode_form(ig.graph(), &s, &b.certificate);
    fa.min(fb)
}

#[derive(Clone, Debug)]
pub struct AutOptions {
    /// Largest vertex count accepted.
    pub ceiling: usize,
}

impl Default for AutOptions {
    fn default() -> Self {
        AutOptions { ceiling: DEFAULT_CEILING }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AutReport {
    /// Order of the group of part-preserving automorphisms.
    #[serde(serialize_with = "decimal")]
    pub group_order: BigUint,
    /// Whether some automorphism exchanges points and lines.
    pub part_swap: bool,
    #[serde(serialize_with = "decimal")]
    pub full_group_order: BigUint,
    pub base: Vec<u32>,
    pub orbit_lengths: Vec<u64>,
    /// Part-preserving generators, one-line notation.
    pub generators: Vec<Vec<u32>>,
    pub swap: Option<Vec<u32>>,
    pub point_orbits: OrbitSummary,
    pub line_orbits: OrbitSummary,
    /// Vertex orbits of the full group.
    pub vertex_orbits: OrbitSummary,
    /// Edge orbits of the full group; representatives index `Graph::edges`.
    pub edge_orbits: OrbitSummary,
    pub vertex_transitive: bool,
    pub edge_transitive: bool,
    pub search_nodes: u64,
    pub search_leaves: u64,
}

pub fn automorphisms(ig: &IncidenceGraph, opts: &AutOptions) -> Result<AutReport> {
    let g = ig.graph();
    if g.n() > opts.ceiling {
        return Err(Error::TooLarge { vertices: g.n(), ceiling: opts.ceiling });
    }
    let (c, s) = part_colors(ig);
    let (a, b) = run_both(g, &c, &s);
    let part_swap = a.certificate == b.certificate && ig.num_points() == ig.num_lines();
    let swap = part_swap.then(|| {
        let mut perm = vec![0u32; g.n()];
        for (x, y) in a.labeling.iter().zip(&b.labeling) {
            perm[*x as usize] = *y;
        }
        perm
    });
    if let Some(p) = &swap {
        debug_assert!(g.is_automorphism(p));
    }
    for gen in &a.generators {
        debug_assert!(g.is_automorphism(gen));
    }

    let mut uf = UnionFind::new(g.n());
    for gen in &a.generators {
        for (v, &w) in gen.iter().enumerate() {
            uf.union(v as u32, w);
        }
    }
    let classes = uf.classes();
    let (pc, lc): (Vec<Vec<u32>>, Vec<Vec<u32>>) = classes.iter().cloned().partition(|c| ig.is_point(c[0]));
    if let Some(p) = &swap {
        for (v, &w) in p.iter().enumerate() {
            uf.union(v as u32, w);
        }
    }
    let vertex_classes = uf.classes();

    let edges: Vec<(u32, u32)> = g.edges().collect();
    let index: HashMap<(u32, u32), u32> = edges.iter().enumerate().map(|(i, &e)| (e, i as u32)).collect();
    let mut euf = UnionFind::new(edges.len());
    for gen in a.generators.iter().chain(swap.iter()) {
        for (i, &(x, y)) in edges.iter().enumerate() {
            let (u, w) = (gen[x as usize], gen[y as usize]);
            euf.union(i as u32, index[&(u.min(w), u.max(w))]);
        }
    }
    let edge_classes = euf.classes();

    let full = if part_swap { &a.order * 2u32 } else { a.order.clone() };
    Ok(AutReport {
        group_order: a.order,
        part_swap,
        full_group_order: full,
        base: a.base,
        orbit_lengths: a.orbit_lengths,
        generators: a.generators,
        swap,
        point_orbits: OrbitSummary::from_classes(&pc),
        line_orbits: OrbitSummary::from_classes(&lc),
        vertex_transitive: vertex_classes.len() == 1,
        vertex_orbits: OrbitSummary::from_classes(&vertex_classes),
        edge_transitive: edge_classes.len() == 1,
        edge_orbits: OrbitSummary::from_classes(&edge_classes),
        search_nodes: a.nodes + b.nodes,
        search_leaves: a.leaves + b.leaves,
    })
}
