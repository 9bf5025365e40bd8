//! Canonical forms for small graphs: iterative color refinement
//! (degree, then neighborhood color multisets) followed by a backtracking
//! search for the minimal adjacency bitstring over labelings that respect
//! the refinement cells. Adequate for the solver's n <= 11 working range;
//! no external isomorphism machinery.

use crate::graph::{Graph, VertexSet};

/// Canonical form: vertex count plus the upper-triangle adjacency bits of
/// the canonically labeled graph, packed in column order (the graph6 bit
/// order). Equal forms hold exactly for isomorphic graphs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub n: usize,
    pub bits: Vec<u64>,
}

impl CanonicalForm {
    /// Rebuilds the canonically labeled graph.
    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::empty(self.n).expect("canonical forms come from valid graphs");
        let mut idx = 0usize;
        for j in 1..self.n {
            for i in 0..j {
                if (self.bits[idx / 64] >> (idx % 64)) & 1 == 1 {
                    g.add_edge_mut(i, j);
                }
                idx += 1;
            }
        }
        g
    }
}

/// Stable partition of vertices by iterated (color, neighbor-color
/// multiset) refinement. The returned color ids order cells canonically:
/// isomorphic graphs refine to identically keyed partitions.
fn refine(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut color: Vec<usize> = {
        let mut degrees: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
        let mut uniq = degrees.clone();
        uniq.sort_unstable();
        uniq.dedup();
        degrees
            .drain(..)
            .map(|d| uniq.binary_search(&d).unwrap())
            .collect()
    };
    let mut classes = color.iter().copied().max().map_or(0, |m| m + 1);
    loop {
        let mut keys: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = g.neighbors(v).map(|w| color[w]).collect();
                nb.sort_unstable();
                (color[v], nb)
            })
            .collect();
        let mut uniq = keys.clone();
        uniq.sort();
        uniq.dedup();
        if uniq.len() == classes {
            return color;
        }
        classes = uniq.len();
        color = keys
            .drain(..)
            .map(|k| uniq.binary_search(&k).unwrap())
            .collect();
    }
}

/// Twin classes: vertices whose neighborhoods agree outside the pair are
/// interchangeable by an automorphism, so the canonical search only needs
/// one representative per class at each branch point.
fn twin_class(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut class: Vec<usize> = (0..n).collect();
    for u in 0..n {
        if class[u] != u {
            continue;
        }
        for v in u + 1..n {
            if class[v] != v {
                continue;
            }
            let mut ru = g.neighbor_set(u);
            let mut rv = g.neighbor_set(v);
            ru.remove(u);
            ru.remove(v);
            rv.remove(u);
            rv.remove(v);
            if ru == rv {
                class[v] = u;
            }
        }
    }
    class
}

struct Search<'a> {
    g: &'a Graph,
    n: usize,
    cells: Vec<Vec<usize>>, // candidate vertices per position block, by cell
    cell_of_pos: Vec<usize>,
    twin: Vec<usize>,
    placed: Vec<usize>,
    used: VertexSet,
    cur: Vec<u64>,
    best: Option<Vec<u64>>,
}

#[inline]
fn set_bit(bits: &mut [u64], idx: usize, on: bool) {
    if on {
        bits[idx / 64] |= 1 << (idx % 64);
    } else {
        bits[idx / 64] &= !(1 << (idx % 64));
    }
}

#[inline]
fn get_bit(bits: &[u64], idx: usize) -> bool {
    (bits[idx / 64] >> (idx % 64)) & 1 == 1
}

/// Compares packed bitstrings in stream order: bit index 0 is the most
/// significant. The first differing stream bit decides.
fn cmp_bits(a: &[u64], b: &[u64]) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    for (x, y) in a.iter().zip(b) {
        if x != y {
            let bit = (x ^ y).trailing_zeros();
            return if (x >> bit) & 1 == 1 {
                Ordering::Greater
            } else {
                Ordering::Less
            };
        }
    }
    a.len().cmp(&b.len())
}

impl<'a> Search<'a> {
    /// Writes the column for placing `v` at position `p`; returns
    /// Less/Equal/Greater against `best` over just this column.
    fn write_column(&mut self, p: usize, v: usize) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        let off = p * (p.wrapping_sub(1)) / 2;
        let mut ord = Ordering::Equal;
        for (q, &w) in self.placed.iter().enumerate().take(p) {
            let bit = self.g.has_edge(v, w);
            set_bit(&mut self.cur, off + q, bit);
            if ord == Ordering::Equal {
                if let Some(best) = &self.best {
                    let bb = get_bit(best, off + q);
                    ord = match (bit, bb) {
                        (false, true) => Ordering::Less,
                        (true, false) => Ordering::Greater,
                        _ => Ordering::Equal,
                    };
                }
            }
        }
        ord
    }

    fn clear_column(&mut self, p: usize) {
        let off = p * (p.wrapping_sub(1)) / 2;
        for q in 0..p {
            set_bit(&mut self.cur, off + q, false);
        }
    }

    /// `tight` marks branches whose prefix equals the best prefix; only
    /// those can be pruned by a greater column.
    fn dfs(&mut self, p: usize, tight: bool) {
        use std::cmp::Ordering;
        if p == self.n {
            if self.best.as_ref().is_none_or(|best| cmp_bits(&self.cur, best) == Ordering::Less) {
                self.best = Some(self.cur.clone());
            }
            return;
        }
        let cell = self.cell_of_pos[p];
        let cand: Vec<usize> = self.cells[cell].clone();
        let mut tried_twins: Vec<usize> = Vec::new();
        for v in cand {
            if self.used.contains(v) || tried_twins.contains(&self.twin[v]) {
                continue;
            }
            tried_twins.push(self.twin[v]);
            let ord = self.write_column(p, v);
            if tight && ord == Ordering::Greater {
                self.clear_column(p);
                continue;
            }
            self.used.insert(v);
            self.placed.push(v);
            self.dfs(p + 1, tight && ord == Ordering::Equal);
            self.placed.pop();
            self.used.remove(v);
            self.clear_column(p);
        }
    }
}

/// Computes the canonical form of `g`.
pub fn canonical_form(g: &Graph) -> CanonicalForm {
    let n = g.n();
    if n <= 1 {
        return CanonicalForm { n, bits: vec![] };
    }
    let color = refine(g);
    let ncells = color.iter().copied().max().unwrap() + 1;
    let mut cells: Vec<Vec<usize>> = vec![Vec::new(); ncells];
    for v in 0..n {
        cells[color[v]].push(v);
    }
    let mut cell_of_pos = Vec::with_capacity(n);
    for (ci, cell) in cells.iter().enumerate() {
        cell_of_pos.extend(std::iter::repeat_n(ci, cell.len()));
    }
    let nbits = n * (n - 1) / 2;
    let words = nbits.div_ceil(64);
    let mut search = Search {
        g,
        n,
        cells,
        cell_of_pos,
        twin: twin_class(g),
        placed: Vec::with_capacity(n),
        used: VertexSet::empty(n),
        cur: vec![0; words],
        best: None,
    };
    search.dfs(0, true);
    CanonicalForm {
        n,
        bits: search.best.expect("search always places all vertices"),
    }
}

pub fn is_isomorphic(a: &Graph, b: &Graph) -> bool {
    a.n() == b.n() && canonical_form(a) == canonical_form(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabelings_share_a_form() {
        let g1 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let g2 = Graph::from_edges(5, &[(3, 0), (0, 4), (4, 1), (1, 2)]).unwrap();
        assert!(is_isomorphic(&g1, &g2));
    }

    #[test]
    fn distinguishes_same_degree_sequence() {
        // C6 vs two triangles: both 2-regular on 6 vertices.
        let c6 = Graph::cycle(6).unwrap();
        let tt = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert!(!is_isomorphic(&c6, &tt));
    }

    #[test]
    fn canonical_graph_is_isomorphic_to_input() {
        let g = Graph::from_edges(7, &[(0, 3), (3, 5), (5, 1), (1, 6), (6, 2), (2, 4), (0, 5)]).unwrap();
        let form = canonical_form(&g);
        let h = form.to_graph();
        assert_eq!(canonical_form(&h), form);
    }

    #[test]
    fn high_symmetry_graphs_are_fast() {
        // Empty and complete graphs collapse through twin classes.
        let e = Graph::empty(11).unwrap();
        assert_eq!(canonical_form(&e).bits.iter().copied().sum::<u64>(), 0);
        let k = Graph::complete(11).unwrap();
        let form = canonical_form(&k);
        assert_eq!(form.to_graph().edge_count(), 55);
    }
}
