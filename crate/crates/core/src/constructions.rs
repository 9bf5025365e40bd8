//! Known saturated constructions and closed-form values or bounds for
//! sat(n, F), all evaluated in exact rational arithmetic.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::pattern::{contains, Pattern};
use crate::rat::{binom, ceil_to_i64, choose2, floor_to_i64, rat, rat_int, Rat};
use crate::saturation::{greedy_saturate, verify_saturated, PairOrder, SaturationCertificate};
use serde::{Deserialize, Serialize};

/// K_{s-2} joined to an independent set of n-s+2 vertices: the classical
/// minimum K_s-saturated graph, with (s-2)n - C(s-1,2) edges.
pub fn ehm_graph(n: usize, s: usize) -> Result<Graph> {
    if s < 2 || n < s {
        return Err(Error::InvalidInput(format!("need n >= s >= 2, got n={n}, s={s}")));
    }
    let mut g = Graph::empty(n)?;
    for u in 0..s - 2 {
        for v in u + 1..n {
            g.add_edge_mut(u, v);
        }
    }
    Ok(g)
}

/// The independence parameters behind the classical upper bound: a maximum
/// independent set S of F, b = |V(F)| - |S| - 1, and the minimum number of
/// S-neighbors over the remaining vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KtParams {
    pub independent: Vec<usize>,
    pub b: usize,
    pub d: usize,
}

/// Finds the parameters: a maximum independent set of the pattern (ties
/// break toward the lexicographically least sorted vertex list), then b
/// and the minimum S-neighbor count. Complete multipartite graphs and
/// cycles have closed-form maximum independent sets; explicit patterns of
/// up to 24 vertices are searched exhaustively.
pub fn kt_params(pattern: &Pattern) -> Result<KtParams> {
    if pattern.edge_count() == 0 {
        return Err(Error::InvalidInput("pattern needs at least one edge".into()));
    }
    let independent: Vec<usize> = match pattern {
        Pattern::Multipartite { sizes } => {
            // Independent sets live inside one part; the first part of the
            // largest size is the lexicographically least maximum.
            let largest = *sizes.iter().max().expect("nonempty sizes");
            let mut offset = 0;
            let mut chosen = 0;
            for &s in sizes {
                if s == largest {
                    chosen = offset;
                    break;
                }
                offset += s;
            }
            (chosen..chosen + largest).collect()
        }
        Pattern::Cycle { k } => (0..*k / 2).map(|i| 2 * i).collect(),
        Pattern::Explicit { .. } => {
            let f = pattern.to_graph();
            let nf = f.n();
            if nf > 24 {
                return Err(Error::Refused(format!(
                    "independent-set search capped at 24 pattern vertices, got {nf}"
                )));
            }
            let mut best: Option<Vec<usize>> = None;
            for mask in 0u32..(1u32 << nf) {
                let verts: Vec<usize> = (0..nf).filter(|&v| (mask >> v) & 1 == 1).collect();
                let has_edge = verts
                    .iter()
                    .enumerate()
                    .any(|(i, &u)| verts[i + 1..].iter().any(|&v| f.has_edge(u, v)));
                if has_edge {
                    continue;
                }
                let better = match &best {
                    None => true,
                    Some(b) => verts.len() > b.len() || (verts.len() == b.len() && verts < *b),
                };
                if better {
                    best = Some(verts);
                }
            }
            best.expect("empty set is always independent")
        }
    };
    let f = pattern.to_graph();
    let nf = f.n();
    let s_set = VertexSet::from_iter(nf, independent.iter().copied());
    let b = nf - independent.len() - 1;
    let d = (0..nf)
        .filter(|v| !s_set.contains(*v))
        .map(|x| f.neighbors(x).filter(|w| s_set.contains(*w)).count())
        .min()
        .unwrap_or(0);
    Ok(KtParams { independent, b, d })
}

/// Evaluates the upper-bound expression ((2b+d-1)/2) n - b(b+d)/2 exactly.
pub fn kt_bound(n: usize, pattern: &Pattern) -> Result<Rat> {
    let p = kt_params(pattern)?;
    let b = p.b as i64;
    let d = p.d as i64;
    Ok(rat(2 * b + d - 1, 2) * rat_int(n as i64) - rat(b * (b + d), 2))
}

/// A candidate graph meeting the independence-parameter bound, built as
/// K_b joined to a circulant that is (d-1)-regular where parity permits,
/// then greedily completed to saturation and verified.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KtConstruction {
    pub graph: Graph,
    pub certificate: SaturationCertificate,
    pub edges: u64,
    #[serde(with = "crate::rat::rat_serde")]
    pub bound: Rat,
    pub within_bound: bool,
    /// True when the circulant seed contained F and the construction fell
    /// back to K_b joined to an independent set.
    pub degraded_seed: bool,
}

/// Circulant on `n` vertices with connection offsets 1..=r, plus the
/// antipodal chord when `extra` is set and `n` is even.
fn circulant(n: usize, r: usize, extra: bool) -> Result<Graph> {
    let mut g = Graph::empty(n)?;
    for v in 0..n {
        for off in 1..=r {
            let w = (v + off) % n;
            if w != v && !g.has_edge(v, w) {
                g.add_edge_mut(v, w);
            }
        }
    }
    if extra && n % 2 == 0 {
        for v in 0..n / 2 {
            let w = v + n / 2;
            if !g.has_edge(v, w) {
                g.add_edge_mut(v, w);
            }
        }
    }
    Ok(g)
}

pub fn kt_construction(n: usize, pattern: &Pattern) -> Result<KtConstruction> {
    let params = kt_params(pattern)?;
    if n < pattern.vertex_count() {
        return Err(Error::InvalidInput(format!(
            "need n >= |V(F)| = {}, got {n}",
            pattern.vertex_count()
        )));
    }
    let b = params.b;
    let d = params.d;
    let rest = n - b;
    // (d-1)-regular-as-possible circulant on the joined part.
    let reg = d.saturating_sub(1);
    let seed_rest = if reg == 0 {
        Graph::empty(rest)?
    } else {
        circulant(rest, reg / 2, reg % 2 == 1)?
    };
    let join = |inner: &Graph| -> Result<Graph> {
        let mut g = Graph::empty(n)?;
        for u in 0..b {
            for v in u + 1..n {
                g.add_edge_mut(u, v);
            }
        }
        for (u, v) in inner.edges() {
            g.add_edge_mut(b + u, b + v);
        }
        Ok(g)
    };
    let mut seed = join(&seed_rest)?;
    let mut degraded = false;
    if contains(&seed, pattern).is_some() {
        // K_b joined to an independent set is always F-free: removing a
        // maximum independent set from F leaves more than b vertices.
        seed = join(&Graph::empty(rest)?)?;
        degraded = true;
    }
    let graph = greedy_saturate(&seed, pattern, PairOrder::DegreeAscending { seed: 0 })?;
    let certificate = verify_saturated(&graph, pattern, false);
    let edges = graph.edge_count() as u64;
    let bound = kt_bound(n, pattern)?;
    Ok(KtConstruction {
        within_bound: rat_int(edges as i64) <= bound,
        graph,
        certificate,
        edges,
        bound,
        degraded_seed: degraded,
    })
}

/// What the literature pins down for sat(n, F) at a specific n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FormulaKind {
    Exact { value: u64 },
    Bounds {
        #[serde(with = "crate::rat::rat_serde")]
        lower: Rat,
        #[serde(with = "crate::rat::rat_serde")]
        upper: Rat,
        lower_strict: bool,
        upper_strict: bool,
    },
    Slope {
        #[serde(with = "crate::rat::rat_serde")]
        slope: Rat,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaValue {
    pub kind: FormulaKind,
    /// Validity constraint on n that admitted this record.
    pub validity: String,
    /// Literature tag for the source of the formula.
    pub source: String,
}

impl FormulaValue {
    /// Smallest edge count consistent with the record.
    pub fn min_edges(&self) -> Option<u64> {
        match &self.kind {
            FormulaKind::Exact { value } => Some(*value),
            FormulaKind::Bounds { lower, lower_strict, .. } => {
                let f = floor_to_i64(*lower);
                let v = if *lower_strict || !lower.is_integer() {
                    f + 1
                } else {
                    f
                };
                Some(v.max(0) as u64)
            }
            FormulaKind::Slope { .. } => None,
        }
    }

    /// Largest edge count consistent with the record.
    pub fn max_edges(&self) -> Option<u64> {
        match &self.kind {
            FormulaKind::Exact { value } => Some(*value),
            FormulaKind::Bounds { upper, upper_strict, .. } => {
                let c = ceil_to_i64(*upper);
                let v = if *upper_strict || !upper.is_integer() {
                    // strict or fractional: the largest integer below
                    if upper.is_integer() {
                        c - 1
                    } else {
                        floor_to_i64(*upper)
                    }
                } else {
                    c
                };
                Some(v.max(0) as u64)
            }
            FormulaKind::Slope { .. } => None,
        }
    }
}

/// The tightest published record for sat(n, F): exact beats bounds beats
/// slope; `None` when the literature covered here says nothing.
pub fn known_formula(n: usize, pattern: &Pattern) -> Option<FormulaValue> {
    let n_i = n as i64;
    match pattern {
        Pattern::Multipartite { sizes } => {
            let r = sizes.len();
            let s: usize = sizes.iter().sum();
            if sizes.iter().all(|&x| x == 1) {
                // Complete graph K_s.
                if n >= s {
                    let v = (s as i64 - 2) * n_i - choose2(s as i64 - 1).to_integer();
                    return Some(FormulaValue {
                        kind: FormulaKind::Exact { value: v as u64 },
                        validity: format!("n >= {s}"),
                        source: "erdos-hajnal-moon".into(),
                    });
                }
                return None;
            }
            if r == 2 && sizes[0] == 1 {
                // Star K_{1,s}.
                let st = sizes[1] as i64;
                if 2 * n_i >= 3 * st && n_i > st {
                    let v = ceil_to_i64(rat(st - 1, 2) * rat_int(n_i) - rat(st * st, 8));
                    return Some(FormulaValue {
                        kind: FormulaKind::Exact { value: v.max(0) as u64 },
                        validity: format!("n >= 3*{st}/2"),
                        source: "kaszonyi-tuza".into(),
                    });
                }
                if n_i >= st + 1 {
                    let v = binom(st as u64, 2) + binom((n_i - st) as u64, 2);
                    return Some(FormulaValue {
                        kind: FormulaKind::Exact { value: v },
                        validity: format!("{} <= n <= 3*{st}/2", st + 1),
                        source: "kaszonyi-tuza".into(),
                    });
                }
                return None;
            }
            // General complete multipartite: asymptotic slope only.
            let slope = multipartite_slope(sizes).ok()?;
            Some(FormulaValue {
                kind: FormulaKind::Slope { slope },
                validity: "fixed part sizes, n large".into(),
                source: "asymptotic-slope".into(),
            })
        }
        Pattern::Cycle { k } => match k {
            3 => {
                if n >= 3 {
                    Some(FormulaValue {
                        kind: FormulaKind::Exact { value: (n - 1) as u64 },
                        validity: "n >= 3".into(),
                        source: "erdos-hajnal-moon".into(),
                    })
                } else {
                    None
                }
            }
            4 => {
                if n >= 5 {
                    Some(FormulaValue {
                        kind: FormulaKind::Exact {
                            value: floor_to_i64(rat(3 * n_i - 5, 2)) as u64,
                        },
                        validity: "n >= 5".into(),
                        source: "ollmann".into(),
                    })
                } else {
                    None
                }
            }
            5 => {
                if n >= 21 {
                    Some(FormulaValue {
                        kind: FormulaKind::Exact {
                            value: ceil_to_i64(rat(10 * (n_i - 1), 7)) as u64,
                        },
                        validity: "n >= 21".into(),
                        source: "chen".into(),
                    })
                } else {
                    None
                }
            }
            6 => {
                if n >= 9 {
                    Some(FormulaValue {
                        kind: FormulaKind::Bounds {
                            lower: rat(4 * n_i, 3) - rat_int(2),
                            upper: rat(4 * n_i + 1, 3),
                            lower_strict: false,
                            upper_strict: false,
                        },
                        validity: "n >= 9".into(),
                        source: "lan-shi-wang-zhang".into(),
                    })
                } else {
                    None
                }
            }
            k if *k >= 7 => {
                let ki = *k as i64;
                if n_i >= 2 * ki - 5 {
                    Some(FormulaValue {
                        kind: FormulaKind::Bounds {
                            lower: rat(ki + 3, ki + 2) * rat_int(n_i) - rat_int(1),
                            upper: rat(ki - 3, ki - 4) * rat_int(n_i)
                                + rat_int(binom(*k as u64 - 4, 2) as i64),
                            lower_strict: true,
                            upper_strict: true,
                        },
                        validity: format!("n >= {}", 2 * ki - 5),
                        source: "furedi-kim".into(),
                    })
                } else if *k >= 28 && k % 2 == 0 {
                    Some(FormulaValue {
                        kind: FormulaKind::Slope { slope: cycle_slope(*k).value },
                        validity: "even k >= 28, n large".into(),
                        source: "asymptotic-slope".into(),
                    })
                } else {
                    None
                }
            }
            _ => None,
        },
        Pattern::Explicit { .. } => None,
    }
}

/// A slope (or other derived quantity) that may carry a premise warning.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedValue {
    #[serde(with = "crate::rat::rat_serde")]
    pub value: Rat,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// s_1 + ... + s_{r-1} + (s_r - 3)/2, the linear coefficient of
/// sat(n, K_{s_1,...,s_r}) for fixed part sizes.
pub fn multipartite_slope(sizes: &[usize]) -> Result<Rat> {
    if sizes.len() < 2 || sizes.iter().any(|&s| s == 0) {
        return Err(Error::InvalidInput("need >= 2 positive part sizes".into()));
    }
    let mut sorted = sizes.to_vec();
    sorted.sort_unstable();
    let head: i64 = sorted[..sorted.len() - 1].iter().map(|&x| x as i64).sum();
    let last = sorted[sorted.len() - 1] as i64;
    Ok(rat_int(head) + rat(last - 3, 2))
}

/// (k-3)/(k-4), the linear coefficient of sat(n, C_k) for fixed even
/// k >= 28. Outside that premise the value is still returned, tagged.
pub fn cycle_slope(k: usize) -> TaggedValue {
    let value = rat(k as i64 - 3, k as i64 - 4);
    let warning = if k % 2 != 0 {
        Some(format!("slope premise needs even k, got {k}"))
    } else if k < 28 {
        Some(format!("slope premise needs k >= 28, got {k}"))
    } else {
        None
    };
    TaggedValue { value, warning }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ehm_edge_counts_and_shape() {
        // (6,3): the star K_{1,5}.
        let g = ehm_graph(6, 3).unwrap();
        assert_eq!(g.edge_count(), 5);
        assert_eq!(g.degree(0), 5);

        // (s,s): K_s minus one edge.
        for s in 3..=6 {
            let g = ehm_graph(s, s).unwrap();
            assert_eq!(g.edge_count(), s * (s - 1) / 2 - 1);
        }

        // (7,4): 11 edges, K4-saturated.
        let g = ehm_graph(7, 4).unwrap();
        assert_eq!(g.edge_count(), 11);
        assert!(verify_saturated(&g, &Pattern::complete(4).unwrap(), false).is_saturated());

        assert!(ehm_graph(3, 4).is_err());
    }

    #[test]
    fn kt_params_families() {
        // K_s: singleton independent sets.
        let p = kt_params(&Pattern::complete(5).unwrap()).unwrap();
        assert_eq!((p.independent.len(), p.b, p.d), (1, 3, 1));

        // Even cycles: alternating vertices, both off-S neighbors inside.
        let p = kt_params(&Pattern::cycle(8).unwrap()).unwrap();
        assert_eq!((p.independent.len(), p.b, p.d), (4, 3, 2));

        // Stars: the leaves, d = s from the center.
        let p = kt_params(&Pattern::multipartite(vec![1, 4]).unwrap()).unwrap();
        assert_eq!((p.independent.len(), p.b, p.d), (4, 0, 4));

        assert!(kt_params(&Pattern::explicit(Graph::empty(3).unwrap())).is_err());
    }

    #[test]
    fn kt_bound_matches_clique_formula() {
        for s in 2..=7i64 {
            for n in 1..=30usize {
                let bound = kt_bound(n, &Pattern::complete(s as usize).unwrap()).unwrap();
                let direct = rat_int((s - 2) * n as i64) - choose2(s - 1);
                assert_eq!(bound, direct, "s={s}, n={n}");
            }
        }
        // Constant term at n = 0 is -b(b+d)/2.
        let b = kt_bound(0, &Pattern::cycle(6).unwrap()).unwrap();
        assert_eq!(b, rat(-2 * (2 + 2), 2)); // b=2, d=2 for C6
    }

    #[test]
    fn kt_construction_examples() {
        let k4 = Pattern::complete(4).unwrap();
        let c = kt_construction(8, &k4).unwrap();
        assert!(c.certificate.is_saturated());
        assert_eq!(c.edges, 13); // 2*8 - 3
        assert!(c.within_bound);

        let c4 = Pattern::cycle(4).unwrap();
        let c = kt_construction(8, &c4).unwrap();
        assert!(c.certificate.is_saturated());
        assert!(c.edges <= 10, "bound 10.5 floors to 10, got {}", c.edges);

        // Stars: the circulant stand-in lands on C_9 (already saturated,
        // 9 edges = the bound), one above the known optimum 8.
        let star = Pattern::multipartite(vec![1, 3]).unwrap();
        let c = kt_construction(9, &star).unwrap();
        assert!(c.certificate.is_saturated());
        assert!(c.within_bound);
        assert_eq!(c.edges, 9);
    }

    #[test]
    fn known_formula_examples() {
        // sat(21, C5) = 29.
        let f = known_formula(21, &Pattern::cycle(5).unwrap()).unwrap();
        assert_eq!(f.kind, FormulaKind::Exact { value: 29 });

        // C6 at n=12: integer window [14, 16].
        let f = known_formula(12, &Pattern::cycle(6).unwrap()).unwrap();
        assert_eq!(f.min_edges(), Some(14));
        assert_eq!(f.max_edges(), Some(16));

        // C8 at n=100: strict window (109, 131) -> integers [110, 131].
        let f = known_formula(100, &Pattern::cycle(8).unwrap()).unwrap();
        match &f.kind {
            FormulaKind::Bounds { lower, upper, .. } => {
                assert_eq!(*lower, rat_int(109));
                assert_eq!(*upper, rat_int(131));
            }
            other => panic!("expected bounds, got {other:?}"),
        }
        assert_eq!(f.min_edges(), Some(110));
        assert_eq!(f.max_edges(), Some(130));

        // Stars: both branches and their meeting point.
        let k14 = Pattern::multipartite(vec![1, 4]).unwrap();
        let f = known_formula(6, &k14).unwrap(); // n = 3s/2
        assert_eq!(f.kind, FormulaKind::Exact { value: 7 });
        let f = known_formula(5, &k14).unwrap();
        assert_eq!(f.kind, FormulaKind::Exact { value: 6 + 0 }); // C(4,2)+C(1,2)
    }

    #[test]
    fn slope_examples() {
        // All-ones sizes reduce to the K_r slope r-2.
        for r in 2..=6 {
            assert_eq!(multipartite_slope(&vec![1; r]).unwrap(), rat_int(r as i64 - 2));
        }
        assert_eq!(multipartite_slope(&[2, 3]).unwrap(), rat_int(2));
        let s = cycle_slope(28);
        assert_eq!(s.value, rat(25, 24));
        assert!(s.warning.is_none());
        assert!(cycle_slope(27).warning.is_some());
        assert!(cycle_slope(10).warning.is_some());
    }

    #[test]
    fn cycle_slopes_decrease_toward_one() {
        let mut prev = rat_int(2);
        for k in (28..=40).step_by(2) {
            let s = cycle_slope(k).value;
            assert!(s > rat_int(1));
            assert!(s < prev);
            prev = s;
        }
    }
}
