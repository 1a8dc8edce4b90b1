//! Ordered partitions with equitable refinement.

use std::collections::VecDeque;

use crate::graph::Graph;

#[inline]
pub(crate) fn mix(h: u64, x: u64) -> u64 {
    let mut z = (h ^ x).wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Reusable buffers for refinement.
pub(crate) struct Scratch {
    count: Vec<u32>,
    in_queue: Vec<bool>,
    touched: Vec<u32>,
}

impl Scratch {
    pub fn new(n: usize) -> Scratch {
        Scratch { count: vec![0; n], in_queue: vec![false; n], touched: Vec::new() }
    }
}

/// Cells are contiguous runs of `elems`, identified by their first position.
#[derive(Clone, Debug)]
pub(crate) struct Partition {
    pub elems: Vec<u32>,
    pos: Vec<u32>,
    start: Vec<u32>,
    len: Vec<u32>,
    pub cells: usize,
}

impl Partition {
    /// Cells ordered by color value; returns the partition and its cell starts.
    pub fn from_colors(colors: &[u32]) -> (Partition, Vec<u32>) {
        let n = colors.len();
        let mut elems: Vec<u32> = (0..n as u32).collect();
        elems.sort_by_key(|&v| (colors[v as usize], v));
        let mut pos = vec![0; n];
        let mut start = vec![0; n];
        let mut len = vec![0; n];
        let mut starts = Vec::new();
        let mut i = 0;
        while i < n {
            let c = colors[elems[i] as usize];
            let mut j = i;
            while j < n && colors[elems[j] as usize] == c {
                pos[elems[j] as usize] = j as u32;
                start[elems[j] as usize] = i as u32;
                j += 1;
            }
            len[i] = (j - i) as u32;
            starts.push(i as u32);
            i = j;
        }
        let cells = starts.len();
        (Partition { elems, pos, start, len, cells }, starts)
    }


    pub fn cell_len(&self, s: usize) -> usize {
        self.len[s] as usize
    }

    /// Start of the first smallest non-singleton cell.
    pub fn target_cell(&self) -> Option<usize> {
        let mut best: Option<(u32, usize)> = None;
        let mut i = 0;
        while i < self.elems.len() {
            let l = self.len[i];
            if l > 1 && best.is_none_or(|(bl, _)| l < bl) {
                best = Some((l, i));
            }
            i += l as usize;
        }
        best.map(|(_, s)| s)
    }

    /// Makes `v` a singleton at the front of its cell and refines.
    pub fn individualize(&mut self, g: &Graph, v: u32, scratch: &mut Scratch) -> u64 {
        let s = self.start[v as usize] as usize;
        let l = self.len[s] as usize;
        let h = mix(s as u64, l as u64);
        if l == 1 {
            return h;
        }
        let p = self.pos[v as usize] as usize;
        self.swap(p, s);
        self.len[s] = 1;
        self.len[s + 1] = (l - 1) as u32;
        for i in s + 1..s + l {
            self.start[self.elems[i] as usize] = (s + 1) as u32;
        }
        self.cells += 1;
        mix(h, self.refine(g, &[s as u32], scratch))
    }

    fn swap(&mut self, a: usize, b: usize) {
        self.elems.swap(a, b);
        self.pos[self.elems[a] as usize] = a as u32;
        self.pos[self.elems[b] as usize] = b as u32;
    }

    /// Equitable refinement from the given splitter cells. The returned hash
    /// depends only on the isomorphism class of the coloured graph.
    pub fn refine(&mut self, g: &Graph, splitters: &[u32], sc: &mut Scratch) -> u64 {
        let n = self.elems.len();
        let mut h = mix(0x5eed, self.cells as u64);
        let mut queue: VecDeque<u32> = VecDeque::new();
        for &s in splitters {
            if !sc.in_queue[s as usize] {
                sc.in_queue[s as usize] = true;
                queue.push_back(s);
            }
        }
        let mut groups: Vec<(u32, u32, u32)> = Vec::new();
        while let Some(w) = queue.pop_front() {
            sc.in_queue[w as usize] = false;
            if self.cells == n {
                continue;
            }
            let w = w as usize;
            sc.touched.clear();
            for i in w..w + self.len[w] as usize {
                for &x in g.neighbors(self.elems[i]) {
                    if sc.count[x as usize] == 0 {
                        sc.touched.push(x);
                    }
                    sc.count[x as usize] += 1;
                }
            }
            groups.clear();
            groups.extend(sc.touched.iter().map(|&x| (self.start[x as usize], sc.count[x as usize], x)));
            groups.sort_unstable();
            let mut a = 0;
            while a < groups.len() {
                let s = groups[a].0 as usize;
                let mut b = a;
                while b < groups.len() && groups[b].0 as usize == s {
                    b += 1;
                }
                let members = &groups[a..b];
                let l = self.len[s] as usize;
                let k = members.len();
                if k == l && members[0].1 == members[k - 1].1 {
                    a = b;
                    continue;
                }
                let base = s + l - k;
                for (i, &(_, _, x)) in members.iter().enumerate() {
                    let p = self.pos[x as usize] as usize;
                    self.swap(p, base + i);
                }
                // fragment boundaries
                let mut frags: Vec<(usize, usize, u32)> = Vec::new();
                if base > s {
                    frags.push((s, base - s, 0));
                }
                let mut i = 0;
                while i < k {
                    let c = members[i].1;
                    let mut j = i;
                    while j < k && members[j].1 == c {
                        j += 1;
                    }
                    frags.push((base + i, j - i, c));
                    i = j;
                }
                h = mix(h, s as u64);
                for &(fs, fl, c) in &frags {
                    self.len[fs] = fl as u32;
                    for p in fs..fs + fl {
                        self.start[self.elems[p] as usize] = fs as u32;
                    }
                    h = mix(h, ((fl as u64) << 32) | c as u64);
                }
                self.cells += frags.len() - 1;
                let was_queued = sc.in_queue[s];
                let largest = frags.iter().enumerate().max_by_key(|&(i, f)| (f.1, std::cmp::Reverse(i))).unwrap().0;
                for (i, &(fs, _, _)) in frags.iter().enumerate() {
                    if (was_queued || i != largest) && !sc.in_queue[fs] {
                        sc.in_queue[fs] = true;
                        queue.push_back(fs as u32);
                    }
                }
                a = b;
            }
            for &x in &sc.touched {
                sc.count[x as usize] = 0;
            }
        }
        mix(h, self.cells as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_refines_by_distance_from_end() {
        // path 0-1-2-3-4: degrees split ends, then distance from ends
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let (mut p, starts) = Partition::from_colors(&[0; 5]);
        let mut sc = Scratch::new(5);
        p.refine(&g, &starts, &mut sc);
        assert_eq!(p.cells, 3);
        let cell_of = |v: u32| p.start[v as usize];
        assert_eq!(cell_of(0), cell_of(4));
        assert_eq!(cell_of(1), cell_of(3));
        assert_ne!(cell_of(0), cell_of(2));
        p.individualize(&g, 0, &mut sc);
        assert_eq!(p.cells, 5);
    }

    #[test]
    fn regular_graph_is_stable() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        let (mut p, starts) = Partition::from_colors(&[0; 6]);
        let mut sc = Scratch::new(6);
        p.refine(&g, &starts, &mut sc);
        assert_eq!(p.cells, 1);
        assert_eq!(p.target_cell(), Some(0));
        p.individualize(&g, 2, &mut sc);
        // 2 | {1,3} | {0,4} | 5
        assert_eq!(p.cells, 4);
        assert_eq!(p.elems[0], 2);
    }
}
