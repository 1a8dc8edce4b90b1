//! Individualization-refinement search: automorphism generators, exact
//! group order along the first path, and a best-leaf canonical labeling.

use std::cmp::Ordering;
use std::collections::HashSet;

use num_bigint::BigUint;

use super::partition::{Partition, Scratch};
use super::UnionFind;
use crate::graph::Graph;

struct Leaf {
    labeling: Vec<u32>,
    trace: Vec<u64>,
    seq: Vec<u32>,
}

/// What one search over a coloured graph produces.
pub(crate) struct Outcome {
    pub generators: Vec<Vec<u32>>,
    /// First-path individualized vertices.
    pub base: Vec<u32>,
    /// Orbit length of each base point in the stabilizer of the earlier ones.
    pub orbit_lengths: Vec<u64>,
    pub order: BigUint,
    /// Canonical labeling: position i holds the vertex labelled i.
    pub labeling: Vec<u32>,
    pub certificate: Vec<u32>,
    pub nodes: u64,
    pub leaves: u64,
}

struct Engine<'a> {
    g: &'a Graph,
    scratch: Scratch,
    gens: Vec<Vec<u32>>,
    first: Option<Leaf>,
    best: Option<(Leaf, Vec<u32>)>,
    orbit_lengths: Vec<u64>,
    nodes: u64,
    leaves: u64,
}

fn prefix_cmp(cur: &[u64], other: &[u64]) -> Ordering {
    let k = cur.len().min(other.len());
    match cur[..k].cmp(&other[..k]) {
        Ordering::Equal if cur.len() > other.len() => Ordering::Greater,
        o => o,
    }
}

fn common_prefix(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Sorted relabelled adjacency, row by row, each row prefixed by its length.
pub(crate) fn certificate(g: &Graph, labeling: &[u32]) -> Vec<u32> {
    let n = g.n();
    let mut label = vec![0u32; n];
    for (i, &v) in labeling.iter().enumerate() {
        label[v as usize] = i as u32;
    }
    let mut out = Vec::with_capacity(n + 2 * g.num_edges());
    let mut row = Vec::new();
    for &v in labeling {
        row.clear();
        row.extend(g.neighbors(v).iter().map(|&w| label[w as usize]));
        row.sort_unstable();
        out.push(row.len() as u32);
        out.extend_from_slice(&row);
    }
    out
}

impl<'a> Engine<'a> {
    /// Orbits of the subgroup generated by the generators fixing `seq` pointwise.
    fn orbits_fixing(&self, seq: &[u32]) -> UnionFind {
        let mut uf = UnionFind::new(self.g.n());
        for gen in self.gens.iter().filter(|p| seq.iter().all(|&v| p[v as usize] == v)) {
            for (v, &w) in gen.iter().enumerate() {
                uf.union(v as u32, w);
            }
        }
        uf
    }

    fn add_generator(&mut self, perm: Vec<u32>) {
        if perm.iter().enumerate().any(|(i, &v)| i as u32 != v) {
            self.gens.push(perm);
        }
    }

    fn search(&mut self, part: &Partition, trace: &mut Vec<u64>, seq: &mut Vec<u32>) -> Option<usize> {
        self.nodes += 1;
        let k = seq.len();
        if let (Some(first), Some((best, _))) = (&self.first, &self.best) {
            let eq_first = prefix_cmp(trace, &first.trace) == Ordering::Equal;
            if !eq_first && prefix_cmp(trace, &best.trace) == Ordering::Greater {
                return None;
            }
        }
        let Some(t) = part.target_cell() else {
            return self.leaf(part, trace, seq);
        };
        let cell: Vec<u32> = part.elems[t..t + part.cell_len(t)].to_vec();
        let mut explored: Vec<u32> = Vec::new();
        let mut cached: Option<(usize, UnionFind, HashSet<u32>)> = None;
        for &u in &cell {
            if !explored.is_empty() {
                let fresh = !matches!(&cached, Some((ng, _, _)) if *ng == self.gens.len());
                if fresh {
                    let mut uf = self.orbits_fixing(seq);
                    let roots = explored.iter().map(|&e| uf.find(e)).collect();
                    cached = Some((self.gens.len(), uf, roots));
                }
                let (_, uf, roots) = cached.as_mut().unwrap();
                let r = uf.find(u);
                if roots.contains(&r) {
                    continue;
                }
                roots.insert(r);
            }
            explored.push(u);
            let mut child = part.clone();
            let h = child.individualize(self.g, u, &mut self.scratch);
            trace.push(h);
            seq.push(u);
            let jump = self.search(&child, trace, seq);
            trace.pop();
            seq.pop();
            if let Some(level) = jump {
                if level < k {
                    return Some(level);
                }
            }
        }
        let first = self.first.as_ref().expect("a leaf was reached");
        if first.seq.len() > k && first.seq[..k] == seq[..] {
            let b = first.seq[k];
            let mut uf = self.orbits_fixing(seq);
            let root = uf.find(b);
            let len = (0..self.g.n() as u32).filter(|&v| uf.find(v) == root).count();
            self.orbit_lengths[k] = len as u64;
        }
        None
    }

    fn leaf(&mut self, part: &Partition, trace: &[u64], seq: &[u32]) -> Option<usize> {
        self.leaves += 1;
        let labeling = part.elems.clone();
        let Some(first) = &self.first else {
            let cert = certificate(self.g, &labeling);
            self.orbit_lengths = vec![1; seq.len()];
            let leaf = || Leaf { labeling: labeling.clone(), trace: trace.to_vec(), seq: seq.to_vec() };
            self.first = Some(leaf());
            self.best = Some((leaf(), cert));
            return None;
        };
        if trace == &first.trace[..] {
            let mut perm = vec![0u32; labeling.len()];
            for (a, b) in first.labeling.iter().zip(&labeling) {
                perm[*a as usize] = *b;
            }
            if self.g.is_automorphism(&perm) {
                let level = common_prefix(seq, &first.seq);
                self.add_generator(perm);
                return Some(level);
            }
        }
        let (best, best_cert) = self.best.as_ref().unwrap();
        let order = trace.cmp(&best.trace[..]);
        if order == Ordering::Greater {
            return None;
        }
        let cert = certificate(self.g, &labeling);
        let order = order.then_with(|| cert.cmp(best_cert));
        match order {
            Ordering::Less => {
                let leaf = Leaf { labeling, trace: trace.to_vec(), seq: seq.to_vec() };
                self.best = Some((leaf, cert));
                None
            }
            Ordering::Equal => {
                let mut perm = vec![0u32; labeling.len()];
                for (a, b) in best.labeling.iter().zip(&labeling) {
                    perm[*a as usize] = *b;
                }
                let level = common_prefix(seq, &best.seq);
                debug_assert!(self.g.is_automorphism(&perm));
                self.add_generator(perm);
                Some(level)
            }
            Ordering::Greater => None,
        }
    }
}

/// Runs the search on `g` with the vertex colouring `colors`; cells of the
/// initial partition follow increasing colour value.
pub(crate) fn run(g: &Graph, colors: &[u32]) -> Outcome {
    let n = g.n();
    let (mut part, starts) = Partition::from_colors(colors);
    let mut engine = Engine {
        g,
        scratch: Scratch::new(n),
        gens: Vec::new(),
        first: None,
        best: None,
        orbit_lengths: Vec::new(),
        nodes: 0,
        leaves: 0,
    };
    let h = part.refine(g, &starts, &mut engine.scratch);
    let mut trace = vec![h];
    let mut seq = Vec::new();
    engine.search(&part, &mut trace, &mut seq);
    let first = engine.first.unwrap();
    let (best, certificate) = engine.best.unwrap();
    let order = engine.orbit_lengths.iter().fold(BigUint::from(1u32), |acc, &l| acc * l);
    Outcome {
        generators: engine.gens,
        base: first.seq,
        orbit_lengths: engine.orbit_lengths,
        order,
        labeling: best.labeling,
        certificate,
        nodes: engine.nodes,
        leaves: engine.leaves,
    }
}

/// Runs `run` on a thread with a large stack; deep searches recurse once
/// per individualized vertex.
pub(crate) fn run_deep(g: &Graph, colors: &[u32]) -> Outcome {
    std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(512 << 20)
            .spawn_scoped(s, || run(g, colors))
            .expect("spawn search thread")
            .join()
            .expect("search thread panicked")
    })
}
