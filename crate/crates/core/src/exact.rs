//! Exact saturation numbers at desk scale.
//!
//! Graphs are enumerated by ascending edge count, one isomorphism class per
//! representative, inside the F-free universe (any subgraph of an F-free
//! graph is F-free, so augmentation from F-free representatives reaches
//! every F-free class). The first edge count carrying an F-saturated graph
//! is sat(n, F), and exhausted levels certify the lower bound.

use crate::canon::{canonical_form, CanonicalForm};
use crate::cycle_lemmas;
use crate::error::Result;
use crate::graph::Graph;
use crate::graph6;
use crate::pattern::{creates_on_edge, Pattern};
use crate::saturation::{greedy_saturate, verify_saturated, PairOrder};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

/// Caps on the enumeration search.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Maximum number of canonicalized candidate graphs.
    pub max_nodes: u64,
    pub max_seconds: f64,
    /// Rayon thread cap; 0 uses the global pool as-is.
    pub parallel_width: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 100_000_000,
            max_seconds: 300.0,
            parallel_width: 0,
        }
    }
}

/// How a sat value (or bound pair) was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Enumeration,
    Formula,
    Greedy,
    KtBound,
}

/// Best known information about sat(n, F).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SatRecord {
    pub n: usize,
    pub pattern: Pattern,
    pub lower: u64,
    pub upper: u64,
    pub exact: bool,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Graph>,
    pub nodes_used: u64,
}

impl SatRecord {
    pub fn value(&self) -> Option<u64> {
        self.exact.then_some(self.upper)
    }
}

/// Resumable enumeration state: the frontier holds the canonical F-free
/// representatives of the next level to process.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub n: usize,
    pub pattern: Pattern,
    pub next_m: usize,
    pub frontier: Vec<String>,
    pub nodes_used: u64,
}

pub const CHECKPOINT_VERSION: u32 = 1;

/// Outcome of an enumeration run: either the exact record or a checkpoint
/// for the unfinished remainder.
#[derive(Debug)]
pub enum ExactOutcome {
    Exact(SatRecord),
    Exhausted { partial: SatRecord, checkpoint: Checkpoint },
}

impl ExactOutcome {
    pub fn record(&self) -> &SatRecord {
        match self {
            ExactOutcome::Exact(r) => r,
            ExactOutcome::Exhausted { partial, .. } => partial,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SolverOptions {
    /// Skip the saturation scan on candidates that fail the cycle
    /// structural checks (sound necessary conditions, cycles only).
    pub cycle_lemma_filters: bool,
}

/// Computes sat(n, F) by canonical enumeration, or bounds on budget
/// exhaustion (never an error).
pub fn sat_exact(n: usize, pattern: &Pattern, budget: &SearchBudget) -> Result<SatRecord> {
    Ok(run(n, pattern, budget, SolverOptions::default(), None)?.record().clone())
}

pub fn sat_exact_opts(
    n: usize,
    pattern: &Pattern,
    budget: &SearchBudget,
    opts: SolverOptions,
    resume: Option<Checkpoint>,
) -> Result<ExactOutcome> {
    run(n, pattern, budget, opts, resume)
}

fn run(
    n: usize,
    pattern: &Pattern,
    budget: &SearchBudget,
    opts: SolverOptions,
    resume: Option<Checkpoint>,
) -> Result<ExactOutcome> {
    let start = Instant::now();
    let deadline = Duration::from_secs_f64(budget.max_seconds);
    let nodes = AtomicU64::new(0);

    let (mut m, mut level) = match resume {
        Some(cp) => {
            if cp.version != CHECKPOINT_VERSION {
                return Err(crate::error::Error::InvalidInput(format!(
                    "checkpoint version {} unsupported",
                    cp.version
                )));
            }
            if cp.n != n || &cp.pattern != pattern {
                return Err(crate::error::Error::InvalidInput(
                    "checkpoint does not match the requested (n, pattern)".into(),
                ));
            }
            nodes.store(cp.nodes_used, Ordering::Relaxed);
            let lvl: Result<Vec<Graph>> = cp.frontier.iter().map(|s| graph6::from_graph6(s)).collect();
            (cp.next_m, lvl?)
        }
        None => (0usize, vec![Graph::empty(n)?]),
    };

    let mut run_inner = || -> Result<ExactOutcome> {
        let max_edges = n * n.saturating_sub(1) / 2;
        loop {
            // Scan this level for a saturated representative.
            let saturated: Option<(CanonicalForm, Graph)> = level
                .par_iter()
                .filter_map(|g| {
                    if opts.cycle_lemma_filters && !passes_cycle_filters(g, pattern) {
                        return None;
                    }
                    let all_create = g
                        .non_edges()
                        .iter()
                        .all(|&(x, y)| creates_on_edge(g, x, y, pattern).map(|e| e.is_some()).unwrap_or(false));
                    all_create.then(|| (canonical_form(g), g.clone()))
                })
                .min_by(|a, b| a.0.cmp(&b.0));
            if let Some((_, witness)) = saturated {
                debug_assert!(verify_saturated(&witness, pattern, false).is_saturated());
                return Ok(ExactOutcome::Exact(SatRecord {
                    n,
                    pattern: pattern.clone(),
                    lower: m as u64,
                    upper: m as u64,
                    exact: true,
                    method: Method::Enumeration,
                    witness: Some(witness),
                    nodes_used: nodes.load(Ordering::Relaxed),
                }));
            }
            if m == max_edges {
                // No saturated graph at any edge count can only happen when
                // F fits in no supergraph scan; report the complete graph.
                let complete = Graph::complete(n)?;
                return Ok(ExactOutcome::Exact(SatRecord {
                    n,
                    pattern: pattern.clone(),
                    lower: max_edges as u64,
                    upper: max_edges as u64,
                    exact: true,
                    method: Method::Enumeration,
                    witness: Some(complete),
                    nodes_used: nodes.load(Ordering::Relaxed),
                }));
            }

            // Augment to level m+1 within the F-free universe.
            let mut children: Vec<(CanonicalForm, Graph)> = level
                .par_iter()
                .flat_map_iter(|g| {
                    g.non_edges()
                        .into_iter()
                        .filter(|&(x, y)| {
                            creates_on_edge(g, x, y, pattern).map(|e| e.is_none()).unwrap_or(false)
                        })
                        .map(|(x, y)| {
                            nodes.fetch_add(1, Ordering::Relaxed);
                            let child = g.with_edge(x, y).expect("non-edge addition");
                            (canonical_form(&child), child)
                        })
                        .collect::<Vec<_>>()
                })
                .collect();
            children.sort_by(|a, b| a.0.cmp(&b.0));
            children.dedup_by(|a, b| a.0 == b.0);

            let exhausted = nodes.load(Ordering::Relaxed) > budget.max_nodes || start.elapsed() > deadline;
            if exhausted {
                // Levels 0..=m are exhausted (no saturated graph there).
                let lower = (m + 1) as u64;
                let upper_rec = sat_upper_randomized(n, pattern, 64, 0)?;
                let frontier: Vec<String> = children.iter().map(|(_, g)| graph6::to_graph6(g)).collect();
                let checkpoint = Checkpoint {
                    version: CHECKPOINT_VERSION,
                    n,
                    pattern: pattern.clone(),
                    next_m: m + 1,
                    frontier,
                    nodes_used: nodes.load(Ordering::Relaxed),
                };
                return Ok(ExactOutcome::Exhausted {
                    partial: SatRecord {
                        n,
                        pattern: pattern.clone(),
                        lower,
                        upper: upper_rec.upper.max(lower),
                        exact: false,
                        method: Method::Greedy,
                        witness: upper_rec.witness,
                        nodes_used: nodes.load(Ordering::Relaxed),
                    },
                    checkpoint,
                });
            }

            level = children.into_iter().map(|(_, g)| g).collect();
            m += 1;
        }
    };

    if budget.parallel_width > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(budget.parallel_width)
            .build()
            .map_err(|e| crate::error::Error::InvalidInput(format!("thread pool: {e}")))?;
        pool.install(run_inner)
    } else {
        run_inner()
    }
}

/// Sound necessary conditions for cycle saturation, used as a prefilter.
fn passes_cycle_filters(g: &Graph, pattern: &Pattern) -> bool {
    let Pattern::Cycle { k } = pattern else {
        return true;
    };
    // Connectivity and diameter hold for every C_k-saturated graph.
    if g.n() >= 2 {
        match g.diameter() {
            None => return false,
            Some(d) if d > k - 1 => return false,
            _ => {}
        }
    }
    if *k >= 5 && g.n() >= 3 && !cycle_lemmas::check_pendant_neighborhoods(g, *k).map_or(true, |v| v.is_empty()) {
        return false;
    }
    true
}

/// Upper-bounds sat(n, F) by the smallest saturated graph found over
/// seeded greedy completions of the empty graph: even trials use uniform
/// random pair orders, odd trials the degree-ascending policy.
pub fn sat_upper_randomized(n: usize, pattern: &Pattern, trials: u64, rng_seed: u64) -> Result<SatRecord> {
    if trials < 1 {
        return Err(crate::error::Error::InvalidInput("trials must be >= 1".into()));
    }
    let empty = Graph::empty(n)?;
    let best = (0..trials)
        .into_par_iter()
        .map(|t| {
            let seed = rng_seed.wrapping_add(t);
            let order = if t % 2 == 0 {
                PairOrder::Random { seed }
            } else {
                PairOrder::DegreeAscending { seed }
            };
            let g = greedy_saturate(&empty, pattern, order)?;
            Ok((g.edge_count() as u64, t, g))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min_by_key(|(edges, t, _)| (*edges, *t))
        .expect("at least one trial");
    Ok(SatRecord {
        n,
        pattern: pattern.clone(),
        lower: 0,
        upper: best.0,
        exact: false,
        method: Method::Greedy,
        witness: Some(best.2),
        nodes_used: 0,
    })
}

/// All graphs on `n` vertices with exactly `m` edges, one per isomorphism
/// class (canonical representatives in canonical-form order).
pub fn nonisomorphic_graphs(n: usize, m: usize) -> Result<Vec<Graph>> {
    let mut level = vec![canonical_form(&Graph::empty(n)?)];
    for _ in 0..m {
        let mut next: Vec<CanonicalForm> = level
            .par_iter()
            .flat_map_iter(|form| {
                let g = form.to_graph();
                g.non_edges()
                    .into_iter()
                    .map(|(x, y)| canonical_form(&g.with_edge(x, y).expect("non-edge")))
                    .collect::<Vec<_>>()
            })
            .collect();
        next.sort();
        next.dedup();
        level = next;
        if level.is_empty() {
            break;
        }
    }
    Ok(level.into_iter().map(|f| f.to_graph()).collect())
}

/// Isomorphism-class counts by edge count for all m = 0..=C(n,2).
pub fn count_graphs_by_edges(n: usize) -> Result<Vec<u64>> {
    let max_edges = n * n.saturating_sub(1) / 2;
    let mut counts = Vec::with_capacity(max_edges + 1);
    let mut level = vec![canonical_form(&Graph::empty(n)?)];
    counts.push(1u64);
    for _ in 0..max_edges {
        let mut next: Vec<CanonicalForm> = level
            .par_iter()
            .flat_map_iter(|form| {
                let g = form.to_graph();
                g.non_edges()
                    .into_iter()
                    .map(|(x, y)| canonical_form(&g.with_edge(x, y).expect("non-edge")))
                    .collect::<Vec<_>>()
            })
            .collect();
        next.sort();
        next.dedup();
        counts.push(next.len() as u64);
        level = next;
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_budget() -> SearchBudget {
        SearchBudget {
            max_nodes: 50_000_000,
            max_seconds: 120.0,
            parallel_width: 0,
        }
    }

    #[test]
    fn sat_k3_small() {
        // sat(5, K3) = 4 with the star K_{1,4} as a witness.
        let rec = sat_exact(5, &Pattern::complete(3).unwrap(), &quick_budget()).unwrap();
        assert!(rec.exact);
        assert_eq!(rec.value(), Some(4));
        let w = rec.witness.unwrap();
        assert_eq!(w.edge_count(), 4);
        assert!(verify_saturated(&w, &Pattern::complete(3).unwrap(), false).is_saturated());
    }

    #[test]
    fn sat_c4_five_and_seven() {
        let c4 = Pattern::cycle(4).unwrap();
        let rec = sat_exact(5, &c4, &quick_budget()).unwrap();
        assert_eq!(rec.value(), Some(5));
        let rec = sat_exact(7, &c4, &quick_budget()).unwrap();
        assert_eq!(rec.value(), Some(8));
    }

    #[test]
    fn graph_counts_match_known_rows() {
        // Non-isomorphic graphs by edge count (classical tables).
        assert_eq!(count_graphs_by_edges(4).unwrap(), vec![1, 1, 2, 3, 2, 1, 1]);
        assert_eq!(
            count_graphs_by_edges(5).unwrap(),
            vec![1, 1, 2, 4, 6, 6, 6, 4, 2, 1, 1]
        );
        let row6 = count_graphs_by_edges(6).unwrap();
        assert_eq!(row6.iter().sum::<u64>(), 156);
        assert_eq!(row6, vec![1, 1, 2, 5, 9, 15, 21, 24, 24, 21, 15, 9, 5, 2, 1, 1]);
    }

    #[test]
    fn budget_exhaustion_returns_partial() {
        let tiny = SearchBudget {
            max_nodes: 1,
            max_seconds: 600.0,
            parallel_width: 0,
        };
        let out = sat_exact_opts(7, &Pattern::cycle(4).unwrap(), &tiny, SolverOptions::default(), None).unwrap();
        match out {
            ExactOutcome::Exhausted { partial, checkpoint } => {
                assert!(!partial.exact);
                assert!(partial.lower <= partial.upper);
                assert!(checkpoint.next_m >= 1);
            }
            ExactOutcome::Exact(r) => panic!("expected exhaustion, got exact {:?}", r.value()),
        }
    }

    #[test]
    fn checkpoint_resume_matches_uninterrupted() {
        let c4 = Pattern::cycle(4).unwrap();
        let direct = sat_exact(6, &c4, &quick_budget()).unwrap();

        // Stop early, then resume from the checkpoint.
        let tiny = SearchBudget {
            max_nodes: 3,
            max_seconds: 600.0,
            parallel_width: 0,
        };
        let out = sat_exact_opts(6, &c4, &tiny, SolverOptions::default(), None).unwrap();
        let cp = match out {
            ExactOutcome::Exhausted { checkpoint, .. } => checkpoint,
            ExactOutcome::Exact(_) => panic!("expected exhaustion"),
        };
        let resumed = sat_exact_opts(6, &c4, &quick_budget(), SolverOptions::default(), Some(cp)).unwrap();
        match resumed {
            ExactOutcome::Exact(rec) => {
                assert_eq!(rec.value(), direct.value());
            }
            ExactOutcome::Exhausted { .. } => panic!("resume should finish"),
        }
    }

    #[test]
    fn lemma_filters_do_not_change_answers() {
        let c4 = Pattern::cycle(4).unwrap();
        for n in 5..=6 {
            let plain = sat_exact(n, &c4, &quick_budget()).unwrap();
            let filtered = sat_exact_opts(
                n,
                &c4,
                &quick_budget(),
                SolverOptions { cycle_lemma_filters: true },
                None,
            )
            .unwrap();
            assert_eq!(plain.value(), filtered.record().value());
        }
    }

    #[test]
    fn randomized_upper_bounds() {
        // sat(6, K3) = 5; fifty trials find a witness at most a little above.
        let rec = sat_upper_randomized(6, &Pattern::complete(3).unwrap(), 50, 0).unwrap();
        assert!(rec.upper >= 5);
        let w = rec.witness.unwrap();
        assert!(verify_saturated(&w, &Pattern::complete(3).unwrap(), false).is_saturated());
    }
}
