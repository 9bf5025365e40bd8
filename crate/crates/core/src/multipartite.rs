//! Low-degree structure analysis for complete-multipartite saturation:
//! the A / M / N sets, the X/Y/Z degree split, and an executable audit of
//! the lower-bound accounting on concrete saturated graphs.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::pattern::Pattern;
use crate::rat::{rat, rat_int, Rat};
use crate::saturation::verify_saturated;
use itertools::Itertools;
use serde::{Deserialize, Serialize};

/// Part sizes with the derived totals used by every threshold here.
#[derive(Clone, Debug)]
pub struct PartSizes {
    pub sizes: Vec<usize>,
    pub total: usize,
    pub largest: usize,
}

impl PartSizes {
    pub fn new(sizes: &[usize]) -> Result<PartSizes> {
        if sizes.len() < 2 || sizes.iter().any(|&s| s == 0) {
            return Err(Error::InvalidInput("need >= 2 positive part sizes".into()));
        }
        let mut sorted = sizes.to_vec();
        sorted.sort_unstable();
        let total = sorted.iter().sum();
        let largest = *sorted.last().unwrap();
        Ok(PartSizes {
            sizes: sorted,
            total,
            largest,
        })
    }

    pub fn pattern(&self) -> Pattern {
        Pattern::multipartite(self.sizes.clone()).expect("validated sizes")
    }

    /// Degree cap 2s - s_r - 4 for the low-degree set.
    fn low_degree_cap(&self) -> i64 {
        2 * self.total as i64 - self.largest as i64 - 4
    }

    /// Common-neighborhood cap s - s_r - 2 for family membership.
    fn pair_cap(&self) -> i64 {
        self.total as i64 - self.largest as i64 - 2
    }
}

/// A = { x : deg(x) <= 2s - s_r - 4 }; empty when the cap is negative.
pub fn low_degree_set(h: &Graph, sizes: &PartSizes) -> VertexSet {
    let cap = sizes.low_degree_cap();
    if cap < 0 {
        return VertexSet::empty(h.n());
    }
    VertexSet::from_iter(h.n(), (0..h.n()).filter(|&v| h.degree(v) as i64 <= cap))
}

/// Membership in the family: M is inside A and every distinct pair of its
/// vertices has a common neighborhood of size at most s - s_r - 2.
pub fn family_a_member(h: &Graph, mset: &VertexSet, sizes: &PartSizes) -> bool {
    let a = low_degree_set(h, sizes);
    if !mset.is_subset_of(&a) {
        return false;
    }
    let cap = sizes.pair_cap();
    let members = mset.to_vec();
    members.iter().enumerate().all(|(i, &u)| {
        members[i + 1..].iter().all(|&v| {
            let w = VertexSet::from_iter(h.n(), [u, v]);
            let common = h.common_neighborhood(&w).expect("vertices in range");
            common.len() as i64 <= cap.max(-1)
        })
    })
}

/// Greedily grows a maximal family member, scanning vertices in the given
/// order (ascending index when `order` is `None`); maximality is verified
/// by attempting every extension.
pub fn maximal_m(h: &Graph, sizes: &PartSizes, order: Option<&[usize]>) -> VertexSet {
    let default_order: Vec<usize> = (0..h.n()).collect();
    let scan = order.unwrap_or(&default_order);
    let a = low_degree_set(h, sizes);
    let cap = sizes.pair_cap();
    let mut m = VertexSet::empty(h.n());
    let compatible = |m: &VertexSet, v: usize| -> bool {
        m.iter().all(|u| {
            let w = VertexSet::from_iter(h.n(), [u, v]);
            let common = h.common_neighborhood(&w).expect("vertices in range");
            common.len() as i64 <= cap.max(-1)
        })
    };
    for &v in scan {
        if a.contains(v) && !m.contains(v) && compatible(&m, v) {
            m.insert(v);
        }
    }
    debug_assert!(
        (0..h.n()).all(|v| m.contains(v) || !a.contains(v) || !compatible(&m, v)),
        "greedy member must be maximal"
    );
    m
}

/// Per-instance ledger of the lower-bound accounting.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MultipartiteLedger {
    pub sizes: Vec<usize>,
    pub n: usize,
    pub edges: u64,
    pub a_size: usize,
    pub m: Vec<usize>,
    pub nbhd: Vec<usize>,
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub z: Vec<usize>,
    /// Every Y-vertex has at least s - s_r - 1 neighbors in N.
    pub y_neighbor_check: bool,
    /// Smallest margin deg_N(y) - (s - s_r - 1) over Y, when Y is nonempty.
    pub y_margin: Option<i64>,
    /// |E| >= ((2s - s_r - 3)/2)(|X| + |Y|), with its exact margin.
    pub edge_bound_check: bool,
    #[serde(with = "crate::rat::rat_serde")]
    pub edge_bound_margin: Rat,
    /// |N| <= (2s - s_r - 3)|M|.
    pub n_cap_check: bool,
}

/// Runs the lower-bound audit. Refuses unsaturated inputs unless `force`.
pub fn theorem11_audit(h: &Graph, sizes: &PartSizes, force: bool) -> Result<MultipartiteLedger> {
    if !force {
        let cert = verify_saturated(h, &sizes.pattern(), false);
        if !cert.is_saturated() {
            return Err(Error::Refused(format!(
                "input is not saturated for {}: {:?}",
                sizes.pattern(),
                cert.status
            )));
        }
    }
    let n = h.n();
    let s = sizes.total as i64;
    let s_r = sizes.largest as i64;
    let a = low_degree_set(h, sizes);
    let m = maximal_m(h, sizes, None);
    let mut nbhd = VertexSet::empty(n);
    for v in m.iter() {
        nbhd.union_with(&h.neighbor_set(v));
    }
    let mut rest = VertexSet::full(n);
    rest.subtract(&m);
    rest.subtract(&nbhd);
    let mut x = Vec::new();
    let mut y = Vec::new();
    let mut z = Vec::new();
    for v in rest.iter() {
        let d = h.degree(v) as i64;
        if d >= 2 * s - s_r - 3 {
            x.push(v);
        } else if d >= s - 2 {
            y.push(v);
        } else {
            z.push(v);
        }
    }

    let mut y_margin: Option<i64> = None;
    for &v in &y {
        let in_n = h.neighbors(v).filter(|&w| nbhd.contains(w)).count() as i64;
        let margin = in_n - (s - s_r - 1);
        y_margin = Some(y_margin.map_or(margin, |m0| m0.min(margin)));
    }
    let y_neighbor_check = y_margin.is_none_or(|m0| m0 >= 0);

    let edges = h.edge_count() as u64;
    let required = rat(2 * s - s_r - 3, 2) * rat_int((x.len() + y.len()) as i64);
    let edge_bound_margin = rat_int(edges as i64) - required;
    let edge_bound_check = edge_bound_margin >= rat_int(0);

    let n_cap_check = nbhd.len() as i64 <= (2 * s - s_r - 3).max(0) * m.len() as i64;

    Ok(MultipartiteLedger {
        sizes: sizes.sizes.clone(),
        n,
        edges,
        a_size: a.len(),
        m: m.to_vec(),
        nbhd: nbhd.to_vec(),
        x,
        y,
        z,
        y_neighbor_check,
        y_margin,
        edge_bound_check,
        edge_bound_margin,
        n_cap_check,
    })
}

/// Query record for the bounded-degree independent-set search.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BigneibQuery {
    pub b: Vec<usize>,
    /// Maximum degree over B.
    pub a_cap: usize,
    pub c: usize,
    pub threshold: i64,
    pub result: Option<Vec<usize>>,
    pub result_neighborhood: Option<usize>,
}

/// Exhaustively searches c-subsets of the independent set `B` for one
/// whose common neighborhood reaches s - s_r - 1. Desk scale: |B| <= 24.
pub fn bigneib_search(h: &Graph, b: &VertexSet, c: usize, sizes: &PartSizes) -> Result<BigneibQuery> {
    let b_vec = b.to_vec();
    if b_vec.len() > 24 {
        return Err(Error::Refused(format!(
            "bigneib search capped at |B| <= 24, got {}",
            b_vec.len()
        )));
    }
    if c == 0 || c > b_vec.len() {
        return Err(Error::InvalidInput(format!(
            "need 1 <= c <= |B|, got c={c}, |B|={}",
            b_vec.len()
        )));
    }
    for (i, &u) in b_vec.iter().enumerate() {
        for &v in &b_vec[i + 1..] {
            if h.has_edge(u, v) {
                return Err(Error::InvalidInput(format!("B is not independent: edge {u}-{v}")));
            }
        }
    }
    let a_cap = b_vec.iter().map(|&v| h.degree(v)).max().unwrap_or(0);
    let threshold = (sizes.total as i64 - sizes.largest as i64 - 1).max(0);
    let mut result = None;
    let mut result_nbhd = None;
    for combo in b_vec.iter().copied().combinations(c) {
        let set = VertexSet::from_iter(h.n(), combo.iter().copied());
        let common = h.common_neighborhood(&set)?;
        if common.len() as i64 >= threshold {
            result_nbhd = Some(common.len());
            result = Some(combo);
            break;
        }
    }
    Ok(BigneibQuery {
        b: b_vec,
        a_cap,
        c,
        threshold,
        result,
        result_neighborhood: result_nbhd,
    })
}

/// D = { v : deg(v) <= s - 3 }, the small-degree set tracked for
/// empirical boundedness.
pub fn small_degree_set(h: &Graph, sizes: &PartSizes) -> VertexSet {
    let cap = sizes.total as i64 - 3;
    if cap < 0 {
        return VertexSet::empty(h.n());
    }
    VertexSet::from_iter(h.n(), (0..h.n()).filter(|&v| h.degree(v) as i64 <= cap))
}
