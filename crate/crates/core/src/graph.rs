//! Simple undirected graphs with per-vertex bitset adjacency.
//!
//! Vertices are dense indices `0..n`. Graphs are immutable after
//! construction; every operation here is a pure read, so shared references
//! can be used freely across threads.

use crate::error::{Error, Result};

/// Hard cap on vertex count so bitset rows stay cache-resident.
pub const MAX_VERTICES: usize = 65_536;

const WORD_BITS: usize = 64;

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(WORD_BITS)
}

/// A set of vertices, stored as a bitset over `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    n: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet {
            n,
            words: vec![0; words_for(n)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(n: usize, it: I) -> Self {
        let mut s = Self::empty(n);
        for v in it {
            s.insert(v);
        }
        s
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        debug_assert!(v < self.n);
        self.words[v / WORD_BITS] |= 1 << (v % WORD_BITS);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        debug_assert!(v < self.n);
        self.words[v / WORD_BITS] &= !(1 << (v % WORD_BITS));
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.n && (self.words[v / WORD_BITS] >> (v % WORD_BITS)) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn subtract(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    /// Iterates members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let base = wi * WORD_BITS;
            BitIter { word: w, base }
        })
    }

    pub fn min(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl std::fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

struct BitIter {
    word: u64,
    base: usize,
}

impl Iterator for BitIter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.word == 0 {
            return None;
        }
        let tz = self.word.trailing_zeros() as usize;
        self.word &= self.word - 1;
        Some(self.base + tz)
    }
}

/// A simple undirected graph. No self-loops, no multi-edges.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooLarge { n, max: MAX_VERTICES });
        }
        let words = words_for(n.max(1));
        Ok(Graph {
            n,
            words,
            bits: vec![0; n * words],
        })
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge_mut(u, v);
            }
        }
        Ok(g)
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop at vertex {u}")));
            }
            g.add_edge_mut(u, v);
        }
        Ok(g)
    }

    /// Cycle 0-1-...-(n-1)-0. Requires n >= 3.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidInput(format!("cycle needs >= 3 vertices, got {n}")));
        }
        let mut edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        edges.push((n - 1, 0));
        Graph::from_edges(n, &edges)
    }

    /// Path 0-1-...-(n-1).
    pub fn path(n: usize) -> Result<Self> {
        Graph::from_edges(n, &(0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect::<Vec<_>>())
    }

    #[inline]
    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub(crate) fn add_edge_mut(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.bits[u * self.words + v / WORD_BITS] |= 1 << (v % WORD_BITS);
        self.bits[v * self.words + u / WORD_BITS] |= 1 << (u % WORD_BITS);
    }

    #[inline]
    pub(crate) fn remove_edge_mut(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.bits[u * self.words + v / WORD_BITS] &= !(1 << (v % WORD_BITS));
        self.bits[v * self.words + u / WORD_BITS] &= !(1 << (u % WORD_BITS));
    }

    /// New graph with edge `uv` added.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Graph> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::InvalidInput(format!("self-loop at vertex {u}")));
        }
        let mut g = self.clone();
        g.add_edge_mut(u, v);
        Ok(g)
    }

    /// New graph with edge `uv` removed.
    pub fn without_edge(&self, u: usize, v: usize) -> Result<Graph> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let mut g = self.clone();
        g.remove_edge_mut(u, v);
        Ok(g)
    }

    /// New graph with the given vertices deleted; keeps the relative order of
    /// the survivors and returns the old-index-to-new-index map.
    pub fn without_vertices(&self, drop: &VertexSet) -> (Graph, Vec<Option<usize>>) {
        let mut map = vec![None; self.n];
        let mut next = 0usize;
        for v in 0..self.n {
            if !drop.contains(v) {
                map[v] = Some(next);
                next += 1;
            }
        }
        let mut g = Graph::empty(next).expect("shrinking keeps the size valid");
        for (u, v) in self.edges() {
            if let (Some(nu), Some(nv)) = (map[u], map[v]) {
                g.add_edge_mut(nu, nv);
            }
        }
        (g, map)
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        debug_assert!(u < self.n && v < self.n);
        (self.bits[u * self.words + v / WORD_BITS] >> (v % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub(crate) fn row(&self, v: usize) -> &[u64] {
        &self.bits[v * self.words..(v + 1) * self.words]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn neighbor_set(&self, v: usize) -> VertexSet {
        VertexSet {
            n: self.n,
            words: self.row(v).to_vec(),
        }
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(v).iter().enumerate().flat_map(|(wi, &w)| BitIter {
            word: w,
            base: wi * WORD_BITS,
        })
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        let total: usize = (0..self.n).map(|v| self.degree(v)).sum();
        total / 2
    }

    pub fn non_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// N_G(W): vertices adjacent to every vertex of `W`. For empty `W`
    /// this is all of V(G).
    pub fn common_neighborhood(&self, w: &VertexSet) -> Result<VertexSet> {
        if w.universe() != self.n {
            return Err(Error::InvalidInput(format!(
                "vertex set over {} vertices used with graph on {}",
                w.universe(),
                self.n
            )));
        }
        let mut acc = VertexSet::full(self.n);
        for v in w.iter() {
            self.check_vertex(v)?;
            for (a, b) in acc.words.iter_mut().zip(self.row(v)) {
                *a &= b;
            }
        }
        Ok(acc)
    }

    /// BFS distances from `src`; `u32::MAX` marks unreachable vertices.
    pub fn bfs_distances(&self, src: usize) -> Vec<u32> {
        self.bfs_distances_multi(std::iter::once(src))
    }

    /// BFS distances from a set of sources.
    pub fn bfs_distances_multi<I: IntoIterator<Item = usize>>(&self, srcs: I) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.n];
        let mut queue = std::collections::VecDeque::new();
        for s in srcs {
            if dist[s] == u32::MAX {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[u];
            for v in self.neighbors(u) {
                if dist[v] == u32::MAX {
                    dist[v] = du + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// d_G(u, v): shortest-path edge count, `None` when disconnected.
    pub fn distance(&self, u: usize, v: usize) -> Result<Option<usize>> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Ok(Some(0));
        }
        let d = self.bfs_distances(u)[v];
        Ok(if d == u32::MAX { None } else { Some(d as usize) })
    }

    /// Distance between nonempty vertex sets: min over pairs.
    pub fn set_distance(&self, s: &VertexSet, t: &VertexSet) -> Result<Option<usize>> {
        if s.is_empty() || t.is_empty() {
            return Err(Error::InvalidInput("set_distance needs nonempty sets".into()));
        }
        if s.intersects(t) {
            return Ok(Some(0));
        }
        let dist = self.bfs_distances_multi(s.iter());
        let best = t.iter().map(|v| dist[v]).min().unwrap();
        Ok(if best == u32::MAX { None } else { Some(best as usize) })
    }

    /// E_G(S, T): edges with one endpoint in `S` and the other in `T`
    /// (in either orientation); each qualifying edge listed once, ordered.
    pub fn edges_between(&self, s: &VertexSet, t: &VertexSet) -> Vec<(usize, usize)> {
        self.edges()
            .filter(|&(u, v)| {
                (s.contains(u) && t.contains(v)) || (s.contains(v) && t.contains(u))
            })
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        self.bfs_distances(0).iter().all(|&d| d != u32::MAX)
    }

    /// Largest pairwise distance, `None` when disconnected.
    pub fn diameter(&self) -> Option<usize> {
        let mut best = 0usize;
        for v in 0..self.n {
            for d in self.bfs_distances(v) {
                if d == u32::MAX {
                    return None;
                }
                best = best.max(d as usize);
            }
        }
        Some(best)
    }

    /// Connected component of `v` as a vertex set.
    pub fn component_of(&self, v: usize) -> VertexSet {
        let dist = self.bfs_distances(v);
        VertexSet::from_iter(self.n, (0..self.n).filter(|&u| dist[u] != u32::MAX))
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges().collect::<Vec<_>>())
    }
}

/// A path given as an ordered list of distinct, consecutively adjacent vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    pub vertices: Vec<usize>,
}

impl Path {
    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// The maximal paths and cycles formed by the degree-two vertices of a graph.
///
/// Every degree-two vertex appears in exactly one path or one cycle. Paths
/// are oriented smallest-endpoint-first and sorted by their smallest
/// contained vertex; cycles are rotated to start at their smallest vertex,
/// with the smaller neighbor second.
#[derive(Clone, Debug, Default)]
pub struct DegreeTwoDecomposition {
    pub paths: Vec<Path>,
    pub cycles: Vec<Vec<usize>>,
}

/// Splits the degree-two vertices of `g` into maximal paths and cycles.
///
/// The components of the subgraph induced on degree-two vertices are paths
/// or cycles; components where every vertex keeps both neighbors inside are
/// reported as cycles.
pub fn degree_two_paths(g: &Graph) -> DegreeTwoDecomposition {
    let n = g.n();
    let is_two: Vec<bool> = (0..n).map(|v| g.degree(v) == 2).collect();
    let sub_nbrs: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            if is_two[v] {
                g.neighbors(v).filter(|&w| is_two[w]).collect()
            } else {
                Vec::new()
            }
        })
        .collect();

    let mut seen = vec![false; n];
    let mut paths: Vec<Path> = Vec::new();
    let mut cycles: Vec<Vec<usize>> = Vec::new();

    for v in 0..n {
        if !is_two[v] || seen[v] {
            continue;
        }
        let mut comp = vec![v];
        seen[v] = true;
        let mut qi = 0;
        while qi < comp.len() {
            let u = comp[qi];
            qi += 1;
            for &w in &sub_nbrs[u] {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
        }
        let endpoint = comp.iter().copied().filter(|&u| sub_nbrs[u].len() < 2).min();
        match endpoint {
            None => {
                // Cycle: rotate to start at the minimum, smaller neighbor second.
                let start = *comp.iter().min().unwrap();
                let mut cyc = vec![start];
                let mut prev = start;
                let mut cur = *sub_nbrs[start].iter().min().unwrap();
                while cur != start {
                    cyc.push(cur);
                    let next = sub_nbrs[cur].iter().copied().find(|&w| w != prev).unwrap();
                    prev = cur;
                    cur = next;
                }
                cycles.push(cyc);
            }
            Some(start) => {
                let mut p = vec![start];
                let mut prev = usize::MAX;
                let mut cur = start;
                while let Some(w) = sub_nbrs[cur].iter().copied().find(|&w| w != prev) {
                    p.push(w);
                    prev = cur;
                    cur = w;
                }
                if p.first() > p.last() {
                    p.reverse();
                }
                paths.push(Path { vertices: p });
            }
        }
    }

    paths.sort_by_key(|p| p.vertices.iter().copied().min().unwrap());
    cycles.sort_by_key(|c| c[0]);
    DegreeTwoDecomposition { paths, cycles }
}

/// Outcome of the starlike test on a tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Starlike {
    /// Unique vertex of degree >= 3; the tree is a union of >= 3 paths
    /// sharing exactly this endpoint.
    Center(usize),
    /// The tree is a bare path (no distinguished center).
    Path,
    /// More than one vertex of degree >= 3.
    Branched,
}

/// Tests whether a tree is starlike, returning its center.
///
/// Errors when the input is not a tree.
pub fn is_starlike(t: &Graph) -> Result<Starlike> {
    let n = t.n();
    if n == 0 || t.edge_count() != n - 1 || !t.is_connected() {
        return Err(Error::NotATree);
    }
    let branch: Vec<usize> = (0..n).filter(|&v| t.degree(v) >= 3).collect();
    Ok(match branch.len() {
        0 => Starlike::Path,
        1 => Starlike::Center(branch[0]),
        _ => Starlike::Branched,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn common_neighborhood_examples() {
        let tri = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let w = VertexSet::from_iter(3, [0, 1]);
        assert_eq!(tri.common_neighborhood(&w).unwrap().to_vec(), vec![2]);

        let p3 = Graph::path(3).unwrap();
        let w = VertexSet::from_iter(3, [0, 2]);
        assert_eq!(p3.common_neighborhood(&w).unwrap().to_vec(), vec![1]);

        // K4 minus edge 2-3: common neighborhood of {2,3} is {0,1}.
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let w = VertexSet::from_iter(4, [2, 3]);
        assert_eq!(g.common_neighborhood(&w).unwrap().to_vec(), vec![0, 1]);

        // Empty W yields all of V.
        let w = VertexSet::empty(4);
        assert_eq!(g.common_neighborhood(&w).unwrap().len(), 4);
    }

    #[test]
    fn distance_examples() {
        let p4 = Graph::path(4).unwrap();
        assert_eq!(p4.distance(0, 3).unwrap(), Some(3));
        assert_eq!(p4.distance(2, 2).unwrap(), Some(0));

        let two_edges = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(two_edges.distance(0, 3).unwrap(), None);

        assert!(p4.distance(0, 9).is_err());
    }

    #[test]
    fn set_distance_examples() {
        let p4 = Graph::path(4).unwrap();
        let s = VertexSet::from_iter(4, [0]);
        let t = VertexSet::from_iter(4, [3]);
        assert_eq!(p4.set_distance(&s, &t).unwrap(), Some(3));

        let s2 = VertexSet::from_iter(4, [0, 2]);
        let t2 = VertexSet::from_iter(4, [2, 3]);
        assert_eq!(p4.set_distance(&s2, &t2).unwrap(), Some(0));

        // Star: leaf to leaf is 2.
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let s = VertexSet::from_iter(4, [1]);
        let t = VertexSet::from_iter(4, [2]);
        assert_eq!(star.set_distance(&s, &t).unwrap(), Some(2));

        assert!(p4.set_distance(&VertexSet::empty(4), &t).is_err());
    }

    #[test]
    fn edges_between_examples() {
        let k4 = Graph::complete(4).unwrap();
        let all = VertexSet::full(4);
        assert_eq!(k4.edges_between(&all, &all).len(), 6);

        let s = VertexSet::from_iter(4, [0, 1]);
        let t = VertexSet::from_iter(4, [2, 3]);
        assert_eq!(k4.edges_between(&s, &t), vec![(0, 2), (0, 3), (1, 2), (1, 3)]);

        let g = Graph::from_edges(4, &[(0, 2)]).unwrap();
        assert_eq!(g.edges_between(&s, &t), vec![(0, 2)]);
    }

    #[test]
    fn degree_two_decomposition_examples() {
        // C5: one cycle of 5 degree-two vertices, zero paths.
        let c5 = Graph::cycle(5).unwrap();
        let d = degree_two_paths(&c5);
        assert!(d.paths.is_empty());
        assert_eq!(d.cycles.len(), 1);
        assert_eq!(d.cycles[0].len(), 5);

        // P4: the two middle vertices form one maximal degree-two path.
        let p4 = Graph::path(4).unwrap();
        let d = degree_two_paths(&p4);
        assert_eq!(d.cycles.len(), 0);
        assert_eq!(d.paths.len(), 1);
        assert_eq!(d.paths[0].vertices, vec![1, 2]);

        // Two triangles joined by a 3-edge path: the joining path has 2
        // interior degree-two vertices, and each triangle keeps a pair of
        // degree-two corners of its own.
        let g = Graph::from_edges(
            8,
            &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (5, 7)],
        )
        .unwrap();
        let d = degree_two_paths(&g);
        assert_eq!(d.paths.len(), 3);
        assert!(d.paths.iter().any(|p| p.vertices == vec![3, 4]));
    }

    #[test]
    fn degree_two_union_covers_exactly() {
        let g = Graph::from_edges(
            9,
            &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (8, 4)],
        )
        .unwrap();
        let d = degree_two_paths(&g);
        let mut covered: Vec<usize> = d
            .paths
            .iter()
            .flat_map(|p| p.vertices.iter().copied())
            .chain(d.cycles.iter().flatten().copied())
            .collect();
        covered.sort_unstable();
        let expect: Vec<usize> = (0..9).filter(|&v| g.degree(v) == 2).collect();
        assert_eq!(covered, expect);
    }

    #[test]
    fn starlike_examples() {
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(is_starlike(&star).unwrap(), Starlike::Center(0));

        let p5 = Graph::path(5).unwrap();
        assert_eq!(is_starlike(&p5).unwrap(), Starlike::Path);

        // Spider with legs 2, 3, 4 hanging off vertex 0.
        let spider = Graph::from_edges(
            10,
            &[(0, 1), (1, 2), (0, 3), (3, 4), (4, 5), (0, 6), (6, 7), (7, 8), (8, 9)],
        )
        .unwrap();
        assert_eq!(is_starlike(&spider).unwrap(), Starlike::Center(0));

        // Not a tree.
        let c4 = Graph::cycle(4).unwrap();
        assert!(is_starlike(&c4).is_err());

        // Two branch vertices.
        let h = Graph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (3, 4), (3, 5)]).unwrap();
        assert_eq!(is_starlike(&h).unwrap(), Starlike::Branched);
    }

    #[test]
    fn size_cap_enforced() {
        assert!(Graph::empty(MAX_VERTICES + 1).is_err());
    }
}
