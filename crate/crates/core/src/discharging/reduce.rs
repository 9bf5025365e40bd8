//! Parallel-path reduction: when more than two disjoint degree-two paths
//! of length 2*ell - 5 run between the same attachment pair, all but two
//! are removed. The surviving graph stays saturated and the quantity
//! |E| - (1 + alpha) |V| is unchanged, because each removed path carries
//! exactly 2*ell - 3 edges on 2*ell - 4 vertices.

use super::DischargeParams;
use crate::error::{Error, Result};
use crate::graph::{degree_two_paths, Graph, VertexSet};
use crate::pattern::Pattern;
use crate::rat::{rat_int, Rat};
use crate::saturation::verify_saturated;
use std::collections::HashMap;

/// Outcome of the reduction, with the exact invariant tracked.
#[derive(Clone, Debug)]
pub struct PathReduction {
    pub graph: Graph,
    pub removed_paths: usize,
    #[allow(dead_code)]
    pub invariant: Rat,
}

pub fn path_contraction_reduce(g: &Graph, params: &DischargeParams) -> Result<PathReduction> {
    let want = 2 * params.ell - 4; // interior vertex count (length 2*ell - 5)
    let decomp = degree_two_paths(g);
    let mut groups: HashMap<(usize, usize), Vec<Vec<usize>>> = HashMap::new();
    for p in &decomp.paths {
        if p.vertices.len() != want {
            continue;
        }
        let first = p.vertices[0];
        let last = *p.vertices.last().unwrap();
        // Outer attachments: the non-path neighbors of the two endpoints.
        let on_path = VertexSet::from_iter(g.n(), p.vertices.iter().copied());
        let x = g.neighbors(first).find(|&w| !on_path.contains(w));
        let y = g.neighbors(last).find(|&w| !on_path.contains(w));
        let (Some(x), Some(y)) = (x, y) else { continue };
        if x == y {
            continue;
        }
        let key = (x.min(y), x.max(y));
        groups.entry(key).or_default().push(p.vertices.clone());
    }

    let mut drop = VertexSet::empty(g.n());
    let mut removed = 0usize;
    for (_, paths) in groups {
        if paths.len() > 2 {
            for p in &paths[2..] {
                for &v in p {
                    drop.insert(v);
                }
                removed += 1;
            }
        }
    }

    let alpha = params.alpha;
    let invariant_before =
        rat_int(g.edge_count() as i64) - (rat_int(1) + alpha) * rat_int(g.n() as i64);
    if removed == 0 {
        return Ok(PathReduction {
            graph: g.clone(),
            removed_paths: 0,
            invariant: invariant_before,
        });
    }

    let (reduced, _) = g.without_vertices(&drop);
    let invariant_after =
        rat_int(reduced.edge_count() as i64) - (rat_int(1) + alpha) * rat_int(reduced.n() as i64);
    if invariant_after != invariant_before {
        return Err(Error::TheoremViolation(format!(
            "path removal changed |E| - (1 + alpha)|V| from {invariant_before:?} to {invariant_after:?}"
        )));
    }
    let cert = verify_saturated(&reduced, &Pattern::cycle(params.k)?, false);
    if !cert.is_saturated() {
        return Err(Error::TheoremViolation(format!(
            "graph stopped being saturated after removing {removed} parallel paths: {:?}",
            cert.status
        )));
    }
    Ok(PathReduction {
        graph: reduced,
        removed_paths: removed,
        invariant: invariant_after,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_qualifying_paths_is_identity() {
        let params = DischargeParams::with_small_ell(3).unwrap();
        let g = Graph::cycle(8).unwrap();
        let r = path_contraction_reduce(&g, &params).unwrap();
        assert_eq!(r.removed_paths, 0);
        assert_eq!(r.graph, g);
    }
}
