//! Structural checkers for cycle-saturated graphs. Each checker encodes a
//! necessary condition satisfied by every C_k-saturated graph (in its
//! stated k range) and returns the configurations that falsify it; any
//! violation on a verified-saturated input is a bug, and on candidate
//! graphs the checkers double as sound pruning filters.

use crate::error::{Error, Result};
use crate::graph::{degree_two_paths, Graph};
use crate::graph::VertexSet;
use crate::pattern::exact_length_path;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaId {
    PendantNeighborhood,
    PendantPairDegree,
    DegreeTwoPathClosure,
    TwoPathLink,
    DisjointLongPaths,
    Connectivity,
    Diameter,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LemmaViolation {
    pub lemma: LemmaId,
    pub vertices: Vec<usize>,
    pub description: String,
}

/// Oriented segment of a maximal degree-two path (or cycle arc), tracked
/// with enough indexing to decide vertex-disjointness cheaply.
#[derive(Clone, Debug)]
struct Window {
    vertices: Vec<usize>,
    comp: usize,
    lo: usize,
    hi: usize,
    on_cycle: bool,
}

impl Window {
    fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    fn start(&self) -> usize {
        self.vertices[0]
    }

    fn end(&self) -> usize {
        *self.vertices.last().unwrap()
    }

    fn disjoint_from(&self, other: &Window) -> bool {
        if self.comp != other.comp {
            return true;
        }
        if !self.on_cycle {
            return self.hi < other.lo || other.hi < self.lo;
        }
        // Cycle arcs wrap; fall back to a set check.
        !self.vertices.iter().any(|v| other.vertices.contains(v))
    }
}

/// All oriented windows with `min_len..=max_len` edges over the degree-two
/// decomposition. Both orientations of every segment are produced.
fn windows(g: &Graph, min_len: usize, max_len: usize) -> Vec<Window> {
    let decomp = degree_two_paths(g);
    let mut out = Vec::new();
    let mut comp = 0usize;
    for p in &decomp.paths {
        let m = p.vertices.len();
        for lo in 0..m {
            for hi in lo..m {
                let len = hi - lo;
                if len < min_len || len > max_len {
                    continue;
                }
                let fwd: Vec<usize> = p.vertices[lo..=hi].to_vec();
                let mut bwd = fwd.clone();
                bwd.reverse();
                out.push(Window { vertices: fwd, comp, lo, hi, on_cycle: false });
                if len > 0 {
                    out.push(Window { vertices: bwd, comp, lo, hi, on_cycle: false });
                }
            }
        }
        comp += 1;
    }
    for c in &decomp.cycles {
        let m = c.len();
        for lo in 0..m {
            for len in min_len..=max_len.min(m - 1) {
                let fwd: Vec<usize> = (0..=len).map(|i| c[(lo + i) % m]).collect();
                let mut bwd = fwd.clone();
                bwd.reverse();
                out.push(Window { vertices: fwd, comp, lo, hi: lo + len, on_cycle: true });
                if len > 0 {
                    out.push(Window { vertices: bwd, comp, lo, hi: lo + len, on_cycle: true });
                }
            }
        }
        comp += 1;
    }
    out
}

/// Pendant-neighborhood conditions: around a pendant edge x-y, every other
/// vertex of N[y] has degree >= 3; two adjacent pendant-carrying vertices
/// each have degree >= 4. Needs k >= 5 and at least 3 vertices.
pub fn check_pendant_neighborhoods(g: &Graph, k: usize) -> Result<Vec<LemmaViolation>> {
    if k < 5 {
        return Err(Error::Refused(format!("pendant checks assume k >= 5, got {k}")));
    }
    if g.n() < 3 {
        return Err(Error::Refused("pendant checks assume >= 3 vertices".into()));
    }
    let mut out = Vec::new();
    let pendants: Vec<usize> = (0..g.n()).filter(|&v| g.degree(v) == 1).collect();
    for &x in &pendants {
        let y = g.neighbors(x).next().expect("degree-one vertex");
        for v in g.neighbors(y).chain(std::iter::once(y)) {
            if v == x {
                continue;
            }
            if g.degree(v) <= 2 {
                out.push(LemmaViolation {
                    lemma: LemmaId::PendantNeighborhood,
                    vertices: vec![x, y, v],
                    description: format!(
                        "pendant {x} at {y}: vertex {v} in N[{y}] has degree {} < 3",
                        g.degree(v)
                    ),
                });
            }
        }
    }
    // Adjacent pendant-carriers.
    let carries: Vec<bool> = (0..g.n())
        .map(|v| g.neighbors(v).any(|w| g.degree(w) == 1))
        .collect();
    for u in 0..g.n() {
        if !carries[u] {
            continue;
        }
        for v in g.neighbors(u) {
            if v > u && carries[v] {
                for y in [u, v] {
                    if g.degree(y) <= 3 {
                        out.push(LemmaViolation {
                            lemma: LemmaId::PendantPairDegree,
                            vertices: vec![u, v, y],
                            description: format!(
                                "adjacent pendant-carriers {u},{v}: degree of {y} is {} < 4",
                                g.degree(y)
                            ),
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Closure condition: the endpoints of any degree-two path with >= 2 edges
/// have no common neighbor outside the path.
pub fn check_degree_two_path_closure(g: &Graph, k: usize) -> Result<Vec<LemmaViolation>> {
    if k < 5 {
        return Err(Error::Refused(format!("closure check assumes k >= 5, got {k}")));
    }
    let mut out = Vec::new();
    for w in windows(g, 2, g.n()) {
        if w.vertices[0] > *w.vertices.last().unwrap() {
            continue; // one orientation suffices here
        }
        let ends = VertexSet::from_iter(g.n(), [w.start(), w.end()]);
        let common = g.common_neighborhood(&ends).expect("valid vertices");
        for c in common.iter() {
            if !w.vertices.contains(&c) {
                out.push(LemmaViolation {
                    lemma: LemmaId::DegreeTwoPathClosure,
                    vertices: {
                        let mut vs = w.vertices.clone();
                        vs.push(c);
                        vs
                    },
                    description: format!(
                        "degree-two path {:?} endpoints share outside neighbor {c}",
                        w.vertices
                    ),
                });
            }
        }
    }
    Ok(out)
}

/// Linked-pair condition: for vertex-disjoint degree-two paths u_0..u_r and
/// v_0..v_s with r+s >= k-1 whose initial vertices share a neighbor w,
/// a w-to-u_r path of length exactly k-r-3 avoiding u_0 must exist.
pub fn check_two_path_link(g: &Graph, k: usize) -> Result<Vec<LemmaViolation>> {
    if k < 5 {
        return Err(Error::Refused(format!("link check assumes k >= 5, got {k}")));
    }
    let mut out = Vec::new();
    let ws = windows(g, 0, g.n());
    for (i, wu) in ws.iter().enumerate() {
        for (j, wv) in ws.iter().enumerate() {
            if i == j || !wu.disjoint_from(wv) {
                continue;
            }
            if wu.len() + wv.len() < k - 1 {
                continue;
            }
            let u0 = wu.start();
            let v0 = wv.start();
            let shared = g.neighbor_set(u0);
            let mut shared = {
                let mut s = shared;
                s.intersect_with(&g.neighbor_set(v0));
                s
            };
            shared.remove(u0);
            shared.remove(v0);
            for w in shared.iter() {
                let r = wu.len();
                if k < r + 3 {
                    out.push(LemmaViolation {
                        lemma: LemmaId::TwoPathLink,
                        vertices: vec![w, u0, wu.end()],
                        description: format!(
                            "paths of lengths {r} and {} with linked starts leave no room for a length-{} return path",
                            wv.len(),
                            k as i64 - r as i64 - 3
                        ),
                    });
                    continue;
                }
                let forb = VertexSet::from_iter(g.n(), [u0]);
                if exact_length_path(g, w, wu.end(), k - r - 3, Some(&forb)).is_none() {
                    out.push(LemmaViolation {
                        lemma: LemmaId::TwoPathLink,
                        vertices: vec![w, u0, wu.end()],
                        description: format!(
                            "no path of length {} from {w} to {} avoiding {u0} (paths {:?} / {:?})",
                            k - r - 3,
                            wu.end(),
                            wu.vertices,
                            wv.vertices
                        ),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Long-pair condition: two vertex-disjoint degree-two paths of length
/// exactly k-4 never have initial vertices with a common neighbor.
/// Needs k >= 7.
pub fn check_disjoint_long_paths(g: &Graph, k: usize) -> Result<Vec<LemmaViolation>> {
    if k < 7 {
        return Err(Error::Refused(format!("long-pair check assumes k >= 7, got {k}")));
    }
    let mut out = Vec::new();
    let ws = windows(g, k - 4, k - 4);
    for (i, wu) in ws.iter().enumerate() {
        for wv in ws.iter().skip(i + 1) {
            if !wu.disjoint_from(wv) {
                continue;
            }
            let u0 = wu.start();
            let v0 = wv.start();
            let mut shared = g.neighbor_set(u0);
            shared.intersect_with(&g.neighbor_set(v0));
            shared.remove(u0);
            shared.remove(v0);
            for w in shared.iter() {
                out.push(LemmaViolation {
                    lemma: LemmaId::DisjointLongPaths,
                    vertices: vec![u0, v0, w],
                    description: format!(
                        "disjoint degree-two paths of length {} start at {u0},{v0} sharing neighbor {w}",
                        k - 4
                    ),
                });
            }
        }
    }
    Ok(out)
}

/// Connectivity and diameter <= k-1, both consequences of saturation.
pub fn check_connectivity_diameter(g: &Graph, k: usize) -> Result<Vec<LemmaViolation>> {
    let mut out = Vec::new();
    if g.n() <= 1 {
        return Ok(out);
    }
    match g.diameter() {
        None => out.push(LemmaViolation {
            lemma: LemmaId::Connectivity,
            vertices: vec![],
            description: "graph is disconnected".into(),
        }),
        Some(d) if d > k - 1 => out.push(LemmaViolation {
            lemma: LemmaId::Diameter,
            vertices: vec![],
            description: format!("diameter {d} exceeds k-1 = {}", k - 1),
        }),
        _ => {}
    }
    Ok(out)
}

/// Runs every checker that applies at this k and concatenates the findings.
pub fn check_all(g: &Graph, k: usize) -> Result<Vec<LemmaViolation>> {
    let mut out = check_connectivity_diameter(g, k)?;
    if k >= 5 && g.n() >= 3 {
        out.extend(check_pendant_neighborhoods(g, k)?);
        out.extend(check_degree_two_path_closure(g, k)?);
        out.extend(check_two_path_link(g, k)?);
    }
    if k >= 7 {
        out.extend(check_disjoint_long_paths(g, k)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::Pattern;
    use crate::saturation::{greedy_saturate, verify_saturated, PairOrder};

    #[test]
    fn star_negative_control() {
        // K_{1,4} is not C6-saturated; the pendant checks must fire.
        let star = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let v = check_pendant_neighborhoods(&star, 6).unwrap();
        assert!(!v.is_empty());
    }

    #[test]
    fn no_pendants_is_vacuous() {
        let c8 = Graph::cycle(8).unwrap();
        assert!(check_pendant_neighborhoods(&c8, 6).unwrap().is_empty());
    }

    #[test]
    fn refusals() {
        let g = Graph::cycle(5).unwrap();
        assert!(check_pendant_neighborhoods(&g, 4).is_err());
        assert!(check_disjoint_long_paths(&g, 6).is_err());
    }

    #[test]
    fn saturated_instances_pass_all() {
        for k in [6usize, 8] {
            for seed in 0..5 {
                let g = greedy_saturate(
                    &Graph::empty(20).unwrap(),
                    &Pattern::cycle(k).unwrap(),
                    PairOrder::DegreeAscending { seed },
                )
                .unwrap();
                assert!(verify_saturated(&g, &Pattern::cycle(k).unwrap(), false).is_saturated());
                let v = check_all(&g, k).unwrap();
                assert!(v.is_empty(), "k={k} seed={seed}: {v:?}");
            }
        }
    }

    #[test]
    fn two_cliques_flag_disconnection() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let v = check_connectivity_diameter(&g, 6).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].lemma, LemmaId::Connectivity);
    }

    #[test]
    fn long_path_flags_diameter() {
        let p = Graph::path(12).unwrap();
        let v = check_connectivity_diameter(&p, 6).unwrap();
        assert_eq!(v[0].lemma, LemmaId::Diameter);
    }

    #[test]
    fn hub_with_two_long_paths_violates_long_pair() {
        // Two paths of length k-4 = 4 hanging off one hub, k = 8.
        let k = 8;
        let mut edges = vec![(0usize, 1usize), (0, 6)];
        edges.extend((1..5).map(|i| (i, i + 1)));
        edges.extend((6..10).map(|i| (i, i + 1)));
        // Extend ends so the path vertices are interior (degree two).
        edges.push((5, 11));
        edges.push((11, 12));
        edges.push((10, 13));
        edges.push((13, 14));
        let g = Graph::from_edges(15, &edges).unwrap();
        let v = check_disjoint_long_paths(&g, k).unwrap();
        assert!(!v.is_empty());
    }

    #[test]
    fn mutilated_witness_breaks_some_check() {
        // Sparse structured instances (long degree-two paths) are where
        // the checkers bite; deleting any path edge must fire one.
        let k = 6;
        let pat = Pattern::cycle(k).unwrap();
        let base = Graph::from_edges(
            9,
            &[(0, 1), (0, 2), (0, 4), (0, 6), (1, 8), (2, 3), (2, 5), (2, 7), (3, 8), (4, 5), (6, 8), (7, 8)],
        )
        .unwrap();
        assert!(verify_saturated(&base, &pat, false).is_saturated());
        assert!(check_all(&base, k).unwrap().is_empty());
        let killed = base
            .edges()
            .filter(|&(u, v)| {
                let broken = base.without_edge(u, v).unwrap();
                !check_all(&broken, k).unwrap().is_empty()
            })
            .count();
        assert!(killed > 0, "no single-edge deletion fired any checker");
    }
}
