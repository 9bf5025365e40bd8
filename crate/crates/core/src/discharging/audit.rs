//! Phase four: the per-instance audit. Every gray half-edge weight is
//! traced to a vertex, every tree claim to a root, and the final
//! per-vertex weights are checked against the 1 + alpha target with exact
//! conservation of |E|.

use super::{DischargeLedger, Label, TreeFamily, TreeShape};
use crate::error::{Error, Result};
use crate::rat::{rat, rat_int, Rat};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RootReport {
    pub vertex: usize,
    pub in_b: bool,
    #[serde(with = "crate::rat::rat_serde")]
    pub final_weight: Rat,
    #[serde(with = "crate::rat::rat_serde")]
    pub gamma_sum: Rat,
    pub gray_halves: usize,
    pub exempt: bool,
    pub meets_target: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SlackBreakdown {
    /// Unclaimed tree pool weight (overweight beyond the claims).
    #[serde(with = "crate::rat::rat_serde")]
    pub tree_leftovers: Rat,
    /// Gray half-edge weight parked on M u A vertices.
    #[serde(with = "crate::rat::rat_serde")]
    pub protected_half_weight: Rat,
    /// Root weight beyond the per-vertex targets.
    #[serde(with = "crate::rat::rat_serde")]
    pub root_surplus: Rat,
    /// Deficit of exempt roots against the 1 + alpha target.
    #[serde(with = "crate::rat::rat_serde")]
    pub exempt_deficit: Rat,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AuditReport {
    pub n: usize,
    pub edges: u64,
    pub m_size: usize,
    pub a_size: usize,
    pub b_size: usize,
    pub d_size: usize,
    pub layer_sizes: Vec<usize>,
    pub long_path_count: usize,
    pub tree_count: usize,
    pub linked_count: usize,
    pub exempt_count: usize,
    pub null_pair_count: usize,

    /// Hard identities (fail => implementation bug at any ell).
    pub conservation_d_weight: bool,
    pub gray_totals_recompute: bool,
    pub pendant_overweight: bool,
    pub global_balance: bool,

    /// Lemma-level checks (hard only in strict mode on verified input).
    pub weight_lower_bounds: bool,
    pub overweight_identity: bool,
    pub claims_funded_initial: bool,
    pub claims_funded_final: bool,
    pub zero_tree_roots: bool,
    pub half_tree_roots: bool,
    pub exempt_cap: bool,
    pub final_targets: bool,
    pub strict_class_targets: bool,
    pub global_lower: bool,

    /// Final per-vertex weights ("0" on M u A).
    #[serde(with = "super::rat_vec_serde")]
    pub final_weight: Vec<Rat>,
    pub roots: Vec<RootReport>,
    pub slack: SlackBreakdown,
    #[serde(with = "crate::rat::rat_serde")]
    pub global_margin: Rat,
    pub violations: Vec<String>,
    pub warnings: Vec<String>,
}

pub fn audit(ledger: &DischargeLedger) -> Result<AuditReport> {
    let g = &ledger.graph;
    let n = ledger.n();
    let alpha = ledger.params.alpha;
    let one = rat_int(1);
    let mut violations: Vec<String> = Vec::new();
    let mut hard_broken: Vec<String> = Vec::new();

    let is_d = |v: usize| ledger.label[v].is_d();
    let is_root = |v: usize| matches!(ledger.label[v], Label::B | Label::D(0));
    let in_protected = |v: usize| matches!(ledger.label[v], Label::M | Label::A);

    // ---- hard identities ----

    // Distributed-weight conservation over D.
    let wt_total: Rat = (0..n).filter(|&v| is_d(v)).map(|v| ledger.wt[v]).sum();
    let halves_in_d: usize = (0..n).filter(|&v| is_d(v)).map(|v| ledger.gray[v]).sum();
    let conservation_d_weight = wt_total == rat(halves_in_d as i64, 2);
    if !conservation_d_weight {
        hard_broken.push(format!(
            "distributed weight {wt_total:?} differs from half of the {halves_in_d} gray half-edges in D"
        ));
    }

    // Bottom-up gray totals equal direct subtree sums.
    let gray_totals_recompute = (0..n).filter(|&v| is_d(v)).all(|v| {
        let direct: usize = ledger.subtree(v).iter().map(|&x| ledger.gray[x]).sum();
        direct == ledger.gray_tree[v]
    });
    if !gray_totals_recompute {
        hard_broken.push("bottom-up gray totals disagree with direct subtree sums".into());
    }

    // Pendant singleton trees have overweight exactly -alpha, and only they do.
    let pendant_overweight = ledger.trees.iter().all(|t| {
        let minus = ledger.beta[t.anchor] == -alpha;
        let single = t.shape == TreeShape::PendantSingleton;
        minus == single
    });
    if !pendant_overweight {
        hard_broken.push("pendant-singleton overweights are not exactly -alpha".into());
    }

    // ---- per-tree pools and claims ----

    let eps_r = |v: usize| rat_int(ledger.eps[v] as i64);
    let pool_of = |t: &super::TreeInfo| -> Rat {
        t.vertices.iter().map(|&x| ledger.wt[x] - eps_r(x) * alpha).sum()
    };
    let transfer_of = |t: &super::TreeInfo| -> Rat {
        match t.family {
            Some(TreeFamily::Exempt) => rat_int(0),
            _ => t.gamma.unwrap_or_else(|| rat_int(0)),
        }
    };
    let claims_of = |ti: usize| -> Rat {
        let t = &ledger.trees[ti];
        if !t.is_positive() {
            return rat_int(0);
        }
        let own = transfer_of(t);
        let funded: Rat = t
            .zset
            .iter()
            .map(|&o| ledger.trees[o].gamma.unwrap_or_else(|| rat_int(0)))
            .sum();
        own + funded
    };

    // Lemma-level weight bounds.
    let mut weight_lower_bounds = true;
    for v in (0..n).filter(|&v| is_d(v)) {
        let d = rat_int(g.degree(v) as i64);
        let e = eps_r(v);
        if ledger.wt[v] < (d - e) * e * alpha {
            weight_lower_bounds = false;
            violations.push(format!("vertex {v}: weight below the (deg - eps) eps alpha bound"));
        }
        if ledger.wt[v] - e * alpha < rat_int(0) {
            weight_lower_bounds = false;
            violations.push(format!("vertex {v}: weight below eps alpha"));
        }
    }

    // Overweight identity for subtrees with a non-pendant top.
    let mut overweight_identity = true;
    for v in (0..n).filter(|&v| is_d(v)) {
        if g.degree(v) < 2 {
            continue;
        }
        let direct: Rat = ledger
            .subtree(v)
            .iter()
            .map(|&x| ledger.wt[x] - eps_r(x) * alpha)
            .sum();
        if direct != ledger.beta[v] {
            overweight_identity = false;
            violations.push(format!(
                "vertex {v}: overweight {:?} differs from the eps-adjusted sum {direct:?}",
                ledger.beta[v]
            ));
        }
    }

    // Claims funded: initial gammas for plain positive trees, final gammas
    // for everything (exempt trees fund only their null partners).
    let mut claims_funded_initial = true;
    let mut claims_funded_final = true;
    for (ti, t) in ledger.trees.iter().enumerate() {
        if !t.is_positive() {
            continue;
        }
        let pool = pool_of(t);
        if t.family.is_none() {
            let init: Rat = t.gamma_initial.unwrap_or_else(|| rat_int(0))
                + t.zset
                    .iter()
                    .map(|&o| ledger.trees[o].gamma_initial.unwrap_or_else(|| rat_int(0)))
                    .sum::<Rat>();
            if pool < init {
                claims_funded_initial = false;
                violations.push(format!(
                    "tree at {}: pool {pool:?} cannot fund the initial claims {init:?}",
                    t.anchor
                ));
            }
        }
        let fin = claims_of(ti);
        if pool < fin {
            claims_funded_final = false;
            violations.push(format!(
                "tree at {}: pool {pool:?} cannot fund the final claims {fin:?}",
                t.anchor
            ));
        }
    }

    // ---- per-vertex final weights ----

    let pendant_d_neighbors = |v: usize| -> usize {
        g.neighbors(v).filter(|&w| g.degree(w) == 1 && is_d(w)).count()
    };
    let mut final_weight = vec![rat_int(0); n];
    for v in 0..n {
        match ledger.label[v] {
            Label::M | Label::A => {}
            Label::D(i) if i >= 1 => {
                let recv = if g.degree(v) == 1 { alpha } else { rat_int(0) };
                let donate = rat_int(pendant_d_neighbors(v) as i64) * alpha;
                final_weight[v] = one + eps_r(v) * alpha - donate + recv;
            }
            Label::D(_) | Label::B => {
                let black = if matches!(ledger.label[v], Label::D(0)) { one } else { rat_int(0) };
                let gamma_sum: Rat = ledger
                    .trees
                    .iter()
                    .filter(|t| t.root == v)
                    .map(transfer_of)
                    .sum();
                let donate = rat_int(pendant_d_neighbors(v) as i64) * alpha;
                final_weight[v] = black + rat(ledger.gray[v] as i64, 2) + gamma_sum - donate;
            }
        }
    }

    // Exempt roots are excluded from the target inequality and counted.
    let exempt_roots: Vec<usize> = ledger
        .trees
        .iter()
        .filter(|t| t.family == Some(TreeFamily::Exempt))
        .map(|t| t.root)
        .collect();
    let target = one + alpha;
    let mut final_targets = true;
    let mut root_surplus = rat_int(0);
    let mut exempt_deficit = rat_int(0);
    let mut roots = Vec::new();
    for v in 0..n {
        if in_protected(v) {
            continue;
        }
        let exempt = exempt_roots.contains(&v);
        let meets = final_weight[v] >= target;
        if is_root(v) {
            let gamma_sum: Rat = ledger.trees.iter().filter(|t| t.root == v).map(transfer_of).sum();
            roots.push(RootReport {
                vertex: v,
                in_b: ledger.label[v] == Label::B,
                final_weight: final_weight[v],
                gamma_sum,
                gray_halves: ledger.gray[v],
                exempt,
                meets_target: meets,
            });
            if meets {
                root_surplus += final_weight[v] - target;
            } else if exempt {
                exempt_deficit += target - final_weight[v];
            }
        }
        if !meets && !exempt {
            final_targets = false;
            violations.push(format!(
                "vertex {v}: final weight {:?} below 1 + alpha",
                final_weight[v]
            ));
        }
    }

    // Stricter per-class targets mirroring the distribution argument.
    let mut strict_class_targets = true;
    for v in 0..n {
        if exempt_roots.contains(&v) {
            continue;
        }
        match ledger.label[v] {
            Label::D(0) => {
                let extra = final_weight[v] - one + rat_int(pendant_d_neighbors(v) as i64) * alpha;
                let need = if ledger.eps[v] == 2 { alpha * rat_int(2) } else { alpha };
                if extra < need {
                    strict_class_targets = false;
                    violations.push(format!(
                        "root {v}: extra weight {extra:?} under the per-class requirement {need:?}"
                    ));
                }
            }
            Label::B => {
                let extra = final_weight[v] + rat_int(pendant_d_neighbors(v) as i64) * alpha;
                if extra < one + alpha * rat_int(2) {
                    strict_class_targets = false;
                    violations.push(format!(
                        "high-degree vertex {v}: weight {extra:?} under 1 + 2 alpha"
                    ));
                }
            }
            _ => {}
        }
    }

    // Zero-tree root conditions.
    let zero_tree = |ti: usize| -> bool {
        let t = &ledger.trees[ti];
        t.shape != TreeShape::PendantSingleton
            && t.family != Some(TreeFamily::Exempt)
            && t.gamma.is_some_and(|x| x.is_zero())
    };
    let half = alpha / rat_int(2);
    let mut zero_tree_roots = true;
    let mut half_tree_roots = true;
    for v in 0..n {
        if !is_root(v) {
            continue;
        }
        let here: Vec<usize> = (0..ledger.trees.len()).filter(|&ti| ledger.trees[ti].root == v).collect();
        let zeros = here.iter().filter(|&&ti| zero_tree(ti)).count();
        if zeros >= 2 && ledger.gray[v] == 0 {
            zero_tree_roots = false;
            violations.push(format!(
                "root {v} carries {zeros} zero-claim trees but no gray half-edge"
            ));
        }
        if g.degree(v) == 3 {
            let has_half = here
                .iter()
                .any(|&ti| ledger.trees[ti].gamma.is_some_and(|x| x == half));
            if zeros >= 1 && has_half {
                half_tree_roots = false;
                violations.push(format!(
                    "degree-three root {v} hosts both a zero-claim and a half-claim tree"
                ));
            }
        }
    }

    // Exempt-family cap.
    let m_size = (0..n).filter(|&v| ledger.label[v] == Label::M).count();
    let exempt_count = exempt_roots.len();
    let exempt_cap = exempt_count <= 3 * m_size;
    if !exempt_cap {
        violations.push(format!(
            "{exempt_count} exempt trees exceed three times the protected size {m_size}"
        ));
    }

    // ---- global balance and lower bound ----

    let leftovers: Rat = (0..ledger.trees.len())
        .map(|ti| pool_of(&ledger.trees[ti]) - claims_of(ti))
        .sum();
    let protected_half_weight: Rat = (0..n)
        .filter(|&v| in_protected(v))
        .map(|v| rat(ledger.gray[v] as i64, 2))
        .sum();
    let finals_total: Rat = final_weight.iter().sum();
    let edges = g.edge_count() as u64;
    let global_balance = finals_total + leftovers + protected_half_weight == rat_int(edges as i64);
    if !global_balance {
        hard_broken.push(format!(
            "edge weight {edges} splits into finals {finals_total:?} + leftovers {leftovers:?} \
             + protected halves {protected_half_weight:?}"
        ));
    }
    if finals_total > rat_int(edges as i64) {
        hard_broken.push("assigned weight exceeds the edge count".into());
    }

    let outside = (0..n).filter(|&v| !in_protected(v)).count();
    let global_margin = rat_int(edges as i64) - target * rat_int(outside as i64);
    let global_lower = global_margin >= rat_int(0);
    if !global_lower {
        violations.push(format!(
            "edge count {edges} under (1 + alpha) |V - (M u A)| with margin {global_margin:?}"
        ));
    }

    let a_size = (0..n).filter(|&v| ledger.label[v] == Label::A).count();
    let b_size = (0..n).filter(|&v| ledger.label[v] == Label::B).count();
    let d_size = (0..n).filter(|&v| is_d(v)).count();
    let mut layer_sizes = vec![0usize; ledger.params.ell.max(2) - 1];
    for v in 0..n {
        if let Label::D(i) = ledger.label[v] {
            layer_sizes[i] += 1;
        }
    }

    let report = AuditReport {
        n,
        edges,
        m_size,
        a_size,
        b_size,
        d_size,
        layer_sizes,
        long_path_count: ledger.long_paths.len(),
        tree_count: ledger.trees.len(),
        linked_count: ledger
            .trees
            .iter()
            .filter(|t| t.family == Some(TreeFamily::Linked))
            .count(),
        exempt_count,
        null_pair_count: ledger
            .trees
            .iter()
            .filter(|t| t.family == Some(TreeFamily::NullPair))
            .count(),
        conservation_d_weight,
        gray_totals_recompute,
        pendant_overweight,
        global_balance,
        weight_lower_bounds,
        overweight_identity,
        claims_funded_initial,
        claims_funded_final,
        zero_tree_roots,
        half_tree_roots,
        exempt_cap,
        final_targets,
        strict_class_targets,
        global_lower,
        final_weight,
        roots,
        slack: SlackBreakdown {
            tree_leftovers: leftovers,
            protected_half_weight,
            root_surplus,
            exempt_deficit,
        },
        global_margin,
        violations: violations.clone(),
        warnings: ledger.warnings.clone(),
    };

    if !hard_broken.is_empty() {
        return Err(Error::TheoremViolation(format!(
            "conservation identities failed: {}",
            hard_broken.join("; ")
        )));
    }
    if ledger.params.strict && !violations.is_empty() {
        return Err(Error::TheoremViolation(format!(
            "audit failed on a strict run: {}",
            violations.join("; ")
        )));
    }
    Ok(report)
}
