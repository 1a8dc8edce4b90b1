//! Simple undirected graphs in compressed adjacency form, and bipartite
//! incidence graphs with their construction metadata.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{usage, Result};
use crate::pointsets::{PointSet, PointSetData};

/// An undirected simple graph; neighbor lists are sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    adj: Vec<u32>,
}

impl Graph {
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Graph> {
        let mut lists: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a as usize >= n || b as usize >= n {
                return usage(format!("edge ({a},{b}) out of range for {n} vertices"));
            }
            if a == b {
                return usage(format!("loop at vertex {a}"));
            }
            lists[a as usize].push(b);
            lists[b as usize].push(a);
        }
        Graph::from_lists(lists)
    }

    /// Builds from adjacency lists; rejects asymmetric or repeated entries.
    pub fn from_lists(mut lists: Vec<Vec<u32>>) -> Result<Graph> {
        let n = lists.len();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut adj = Vec::new();
        offsets.push(0);
        for (v, l) in lists.iter_mut().enumerate() {
            l.sort_unstable();
            if l.windows(2).any(|w| w[0] == w[1]) {
                return usage(format!("repeated edge at vertex {v}"));
            }
            adj.extend_from_slice(l);
            offsets.push(adj.len());
        }
        let g = Graph { offsets, adj };
        for v in 0..n as u32 {
            for &w in g.neighbors(v) {
                if w as usize >= n || w == v || !g.has_edge(w, v) {
                    return usage(format!("adjacency of {v} and {w} is not symmetric"));
                }
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        self.neighbors(a).binary_search(&b).is_ok()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.len() / 2
    }

    /// Edges (a,b) with a < b, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n() as u32).flat_map(move |a| self.neighbors(a).iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
    }

    /// The graph with vertex v renamed to perm[v].
    pub fn relabel(&self, perm: &[u32]) -> Graph {
        let mut lists = vec![Vec::new(); self.n()];
        for v in 0..self.n() as u32 {
            lists[perm[v as usize] as usize] = self.neighbors(v).iter().map(|&w| perm[w as usize]).collect();
        }
        Graph::from_lists(lists).expect("relabeling preserves simplicity")
    }

    /// Whether `perm` maps the edge set onto itself.
    pub fn is_automorphism(&self, perm: &[u32]) -> bool {
        perm.len() == self.n()
            && (0..self.n() as u32).all(|v| {
                let pv = perm[v as usize];
                self.degree(v) == self.degree(pv) && self.neighbors(v).iter().all(|&w| self.has_edge(pv, perm[w as usize]))
            })
    }

    pub fn induced(&self, vertices: &[u32]) -> Graph {
        let mut pos = vec![u32::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            pos[v as usize] = i as u32;
        }
        let lists = vertices
            .iter()
            .map(|&v| self.neighbors(v).iter().filter(|&&w| pos[w as usize] != u32::MAX).map(|&w| pos[w as usize]).collect())
            .collect();
        Graph::from_lists(lists).expect("induced subgraph is simple")
    }
}

/// Everything graph6 cannot carry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphMeta {
    pub schema: u32,
    pub family: String,
    pub n: usize,
    pub q: u32,
    /// Sizes of the point part and the line part; points come first.
    pub part_sizes: [usize; 2],
    pub vertex_order: String,
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
    #[serde(default)]
    pub point_set: Option<PointSetData>,
}

pub const META_SCHEMA: u32 = 1;

/// A bipartite graph whose first `part_sizes[0]` vertices are points and
/// remaining vertices are lines.
#[derive(Clone, Debug)]
pub struct IncidenceGraph {
    graph: Graph,
    meta: GraphMeta,
    point_set: Option<PointSet>,
}

impl IncidenceGraph {
    pub fn new(graph: Graph, meta: GraphMeta) -> Result<IncidenceGraph> {
        if meta.part_sizes[0] + meta.part_sizes[1] != graph.n() {
            return usage(format!(
                "part sizes {:?} do not add up to {} vertices",
                meta.part_sizes,
                graph.n()
            ));
        }
        let p = meta.part_sizes[0] as u32;
        for (a, b) in graph.edges() {
            if (a < p) == (b < p) {
                return usage(format!("edge ({a},{b}) lies inside one part"));
            }
        }
        let point_set = meta.point_set.as_ref().map(PointSet::from_data).transpose()?;
        Ok(IncidenceGraph { graph, meta, point_set })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn meta(&self) -> &GraphMeta {
        &self.meta
    }

    pub fn point_set(&self) -> Option<&PointSet> {
        self.point_set.as_ref()
    }

    pub fn num_points(&self) -> usize {
        self.meta.part_sizes[0]
    }

    pub fn num_lines(&self) -> usize {
        self.meta.part_sizes[1]
    }

    pub fn is_point(&self, v: u32) -> bool {
        (v as usize) < self.meta.part_sizes[0]
    }

    /// Part labels: 0 for points, 1 for lines.
    pub fn coloring(&self) -> Vec<u8> {
        (0..self.graph.n() as u32).map(|v| u8::from(!self.is_point(v))).collect()
    }
}
