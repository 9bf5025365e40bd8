//! F-freeness and F-saturation: verification with certificates, and greedy
//! completion of an F-free seed to an F-saturated graph.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::pattern::{contains, creates_on_edge, Embedding, Pattern};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Outcome of a saturation check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SaturationStatus {
    /// The graph already contains F.
    NotFree { embedding: Embedding },
    /// Some nonadjacent pair can be joined without creating F.
    NotSaturated { x: usize, y: usize },
    Saturated,
}

/// Saturation verdict, optionally carrying one witness embedding per
/// nonadjacent pair.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SaturationCertificate {
    pub status: SaturationStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<((usize, usize), Embedding)>>,
}

impl SaturationCertificate {
    pub fn is_saturated(&self) -> bool {
        self.status == SaturationStatus::Saturated
    }
}

/// True iff `g` has no subgraph copy of `pattern`.
pub fn is_free(g: &Graph, pattern: &Pattern) -> bool {
    contains(g, pattern).is_none()
}

/// Checks that `g` is `pattern`-saturated: F-free, and joining any
/// nonadjacent pair creates a copy of F.
///
/// Pairs are checked in parallel. Without `keep_witnesses` the scan
/// short-circuits on the first failing pair; with it, every pair's
/// embedding is retained in the certificate.
pub fn verify_saturated(g: &Graph, pattern: &Pattern, keep_witnesses: bool) -> SaturationCertificate {
    if let Some(embedding) = contains(g, pattern) {
        return SaturationCertificate {
            status: SaturationStatus::NotFree { embedding },
            witnesses: None,
        };
    }
    let non_edges = g.non_edges();
    if keep_witnesses {
        let results: Vec<((usize, usize), Option<Embedding>)> = non_edges
            .par_iter()
            .map(|&(x, y)| {
                let emb = creates_on_edge(g, x, y, pattern).expect("pair pre-screened");
                ((x, y), emb)
            })
            .collect();
        if let Some(&((x, y), _)) = results.iter().find(|(_, e)| e.is_none()) {
            return SaturationCertificate {
                status: SaturationStatus::NotSaturated { x, y },
                witnesses: None,
            };
        }
        SaturationCertificate {
            status: SaturationStatus::Saturated,
            witnesses: Some(
                results
                    .into_iter()
                    .map(|(p, e)| (p, e.expect("checked above")))
                    .collect(),
            ),
        }
    } else {
        let failing = non_edges
            .par_iter()
            .find_any(|&&(x, y)| creates_on_edge(g, x, y, pattern).expect("pair pre-screened").is_none());
        match failing {
            Some(&(x, y)) => SaturationCertificate {
                status: SaturationStatus::NotSaturated { x, y },
                witnesses: None,
            },
            None => SaturationCertificate {
                status: SaturationStatus::Saturated,
                witnesses: None,
            },
        }
    }
}

/// Order in which greedy saturation examines candidate pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "snake_case")]
pub enum PairOrder {
    /// (0,1), (0,2), ..., fixed lexicographic order.
    Lexicographic,
    /// Seeded uniform shuffle of all pairs.
    Random { seed: u64 },
    /// Always prefer the pair with the smallest current degree sum; ties
    /// broken by a seeded per-pair key. Tends to produce sparser
    /// saturated graphs.
    DegreeAscending { seed: u64 },
}

/// Extends an F-free seed to an F-saturated supergraph on the same vertex
/// set: pairs are examined in the policy order and an edge is added exactly
/// when the result stays F-free. Deterministic given (seed graph, pattern,
/// policy).
pub fn greedy_saturate(seed: &Graph, pattern: &Pattern, order: PairOrder) -> Result<Graph> {
    if let Some(emb) = contains(seed, pattern) {
        return Err(Error::InvalidInput(format!(
            "seed graph already contains the pattern (on vertices {:?})",
            emb.vertices()
        )));
    }
    let mut g = seed.clone();
    let mut pool = g.non_edges();

    match order {
        PairOrder::Lexicographic | PairOrder::Random { .. } => {
            if let PairOrder::Random { seed } = order {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                pool.shuffle(&mut rng);
            }
            // A rejected pair stays rejected: containment is monotone under
            // edge additions, so one pass suffices for a fixed order.
            for (x, y) in pool {
                if creates_on_edge(&g, x, y, pattern)?.is_none() {
                    g.add_edge_mut(x, y);
                }
            }
        }
        PairOrder::DegreeAscending { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            pool.shuffle(&mut rng); // stable sort keeps this as the tie-break
            loop {
                pool.sort_by_key(|&(x, y)| g.degree(x) + g.degree(y));
                let mut added = false;
                let mut it = pool.into_iter();
                for (x, y) in it.by_ref() {
                    if creates_on_edge(&g, x, y, pattern)?.is_none() {
                        g.add_edge_mut(x, y);
                        added = true;
                        break;
                    }
                    // rejected pairs stay rejected; drop them for good
                }
                pool = it.collect();
                if !added {
                    break;
                }
            }
        }
    }
    debug_assert!(is_free(&g, pattern));
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::ehm_graph;

    #[test]
    fn star_is_triangle_saturated() {
        let star = Graph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]).unwrap();
        let cert = verify_saturated(&star, &Pattern::complete(3).unwrap(), false);
        assert!(cert.is_saturated());
    }

    #[test]
    fn split_graph_is_clique_saturated() {
        // K_{s-2} joined to an independent set is K_s-saturated.
        for s in 3..=5 {
            let g = ehm_graph(9, s).unwrap();
            let cert = verify_saturated(&g, &Pattern::complete(s).unwrap(), false);
            assert!(cert.is_saturated(), "s={s}");
        }
    }

    #[test]
    fn containing_graph_is_not_free() {
        let c6 = Graph::cycle(6).unwrap();
        let cert = verify_saturated(&c6, &Pattern::cycle(6).unwrap(), false);
        assert!(matches!(cert.status, SaturationStatus::NotFree { .. }));
    }

    #[test]
    fn not_saturated_reports_pair() {
        // P4 plus the missing chord (0,3) stays triangle-free.
        let p4 = Graph::path(4).unwrap();
        let cert = verify_saturated(&p4, &Pattern::complete(3).unwrap(), false);
        assert!(matches!(cert.status, SaturationStatus::NotSaturated { .. }));
        // P3 on the other hand is triangle-saturated: the only non-edge
        // closes the triangle.
        let p3 = Graph::path(3).unwrap();
        assert!(verify_saturated(&p3, &Pattern::complete(3).unwrap(), false).is_saturated());
    }

    #[test]
    fn witnesses_cover_every_pair() {
        let star = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let cert = verify_saturated(&star, &Pattern::complete(3).unwrap(), true);
        assert!(cert.is_saturated());
        assert_eq!(cert.witnesses.unwrap().len(), star.non_edges().len());
    }

    #[test]
    fn greedy_rejects_unfree_seed() {
        let k3 = Graph::complete(3).unwrap();
        assert!(greedy_saturate(&k3, &Pattern::complete(3).unwrap(), PairOrder::Lexicographic).is_err());
    }

    #[test]
    fn greedy_fixpoint_on_saturated_seed() {
        let star = Graph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]).unwrap();
        let out = greedy_saturate(&star, &Pattern::complete(3).unwrap(), PairOrder::Lexicographic).unwrap();
        assert_eq!(out, star);
    }

    #[test]
    fn greedy_output_verifies() {
        let empty = Graph::empty(8).unwrap();
        for pat in [Pattern::complete(3).unwrap(), Pattern::cycle(4).unwrap()] {
            for order in [
                PairOrder::Lexicographic,
                PairOrder::Random { seed: 11 },
                PairOrder::DegreeAscending { seed: 11 },
            ] {
                let g = greedy_saturate(&empty, &pat, order).unwrap();
                assert!(verify_saturated(&g, &pat, false).is_saturated());
            }
        }
    }

    #[test]
    fn greedy_triangle_edge_count_bound() {
        // Lexicographic completion of the empty graph is maximal
        // triangle-free; its size is at least sat(6, K3) = 5.
        let empty = Graph::empty(6).unwrap();
        let g = greedy_saturate(&empty, &Pattern::complete(3).unwrap(), PairOrder::Lexicographic).unwrap();
        assert!(g.edge_count() >= 5);
    }

    #[test]
    fn greedy_is_deterministic() {
        let empty = Graph::empty(9).unwrap();
        let pat = Pattern::cycle(4).unwrap();
        let a = greedy_saturate(&empty, &pat, PairOrder::Random { seed: 3 }).unwrap();
        let b = greedy_saturate(&empty, &pat, PairOrder::Random { seed: 3 }).unwrap();
        assert_eq!(a, b);
    }
}
