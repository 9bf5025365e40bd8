//! Phase three: tree shapes, the linked/exempt/null-pair families, the
//! gamma assignment, and mate resolution.

use super::{DischargeLedger, Label};
use crate::error::Result;
use crate::rat::{rat_int, Rat};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// Shape tags for the classified subtrees. "Chain" means every vertex of
/// the subtree has at most one black child; "tipped at j" means the single
/// gray half-edge of the subtree sits on the deepest chain vertex, which
/// lies in layer j.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TreeShape {
    /// One degree-one vertex; overweight is exactly -alpha.
    PendantSingleton,
    /// Chain tipped at the bottom layer (overweight 0).
    NullPath,
    /// Chain tipped one layer above the bottom (overweight alpha).
    AlphaPath,
    /// Two bottom-tipped chains off one center (overweight alpha).
    AlphaFork,
    /// Pendant child plus a child carrying two bottom-tipped chains.
    AlphaPendantFork,
    /// Chain tipped two layers above the bottom (overweight 2 alpha).
    TwoAlphaPath,
    /// Three bottom-tipped chains off one center.
    TwoAlphaStar,
    /// Two chains tipped at the bottom two layers.
    TwoAlphaMixed,
    /// Single child whose subtree is an alpha fork.
    TwoAlphaNested,
    /// Pendant child plus a child carrying mixed-depth chains.
    TwoAlphaPendantFork,
    /// Two chains both tipped one layer up (overweight 3 alpha).
    ThreeAlphaFork,
    Other,
}

/// Family memberships driving the gamma bookkeeping.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TreeFamily {
    /// Alpha-path trees gray-linked to a null tree; resolved via mates.
    Linked,
    /// Fork trees whose root is exempted from the final accounting.
    Exempt,
    /// Null trees gray-linked to null trees; these become 0-trees.
    NullPair,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TreeInfo {
    /// The layer-one vertex anchoring the tree.
    pub anchor: usize,
    /// The designated root in B u D0.
    pub root: usize,
    pub vertices: Vec<usize>,
    #[serde(with = "crate::rat::rat_serde")]
    pub beta: Rat,
    pub shape: TreeShape,
    pub family: Option<TreeFamily>,
    /// Indices (into the tree list) of null trees gray-linked to this tree.
    pub zset: Vec<usize>,
    #[serde(with = "crate::rat::rat_serde_opt")]
    pub gamma_initial: Option<Rat>,
    /// Final gamma after mate updates; None only for pendant singletons,
    /// which claim nothing.
    #[serde(with = "crate::rat::rat_serde_opt")]
    pub gamma: Option<Rat>,
    pub mate: Option<usize>,
}

impl TreeInfo {
    pub fn is_null(&self) -> bool {
        self.beta.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.beta > rat_int(0)
    }
}

/// Subtree as a chain: `Some(vertices)` top-down when every vertex has at
/// most one black child.
fn chain(ledger: &DischargeLedger, v: usize) -> Option<Vec<usize>> {
    let mut out = vec![v];
    let mut cur = v;
    loop {
        match ledger.children[cur].len() {
            0 => return Some(out),
            1 => {
                cur = ledger.children[cur][0];
                out.push(cur);
            }
            _ => return None,
        }
    }
}

/// Chain whose only gray half-edge sits on the deepest vertex; returns
/// (tip, tip layer).
fn gray_tipped_chain(ledger: &DischargeLedger, v: usize) -> Option<(usize, usize)> {
    let ch = chain(ledger, v)?;
    let tip = *ch.last().unwrap();
    if ledger.gray[tip] != 1 {
        return None;
    }
    if ch[..ch.len() - 1].iter().any(|&x| ledger.gray[x] != 0) {
        return None;
    }
    Some((tip, ledger.depth(tip).expect("chain stays in D")))
}

fn is_pendant(ledger: &DischargeLedger, v: usize) -> bool {
    ledger.graph.degree(v) == 1
}

/// Fork: exactly two chain children; returns their (tip, depth) pairs.
fn fork_tips(ledger: &DischargeLedger, v: usize) -> Option<[(usize, usize); 2]> {
    if ledger.children[v].len() != 2 || ledger.gray[v] != 0 || ledger.eps[v] != 1 {
        return None;
    }
    let a = gray_tipped_chain(ledger, ledger.children[v][0])?;
    let b = gray_tipped_chain(ledger, ledger.children[v][1])?;
    Some([a, b])
}

/// Pendant fork: children are a graph-pendant plus a vertex carrying two
/// chains; returns the chain tips.
fn pendant_fork_tips(ledger: &DischargeLedger, v: usize) -> Option<[(usize, usize); 2]> {
    if ledger.children[v].len() != 2 || ledger.gray[v] != 0 || ledger.eps[v] != 2 {
        return None;
    }
    let (p, w) = {
        let c0 = ledger.children[v][0];
        let c1 = ledger.children[v][1];
        if is_pendant(ledger, c0) {
            (c0, c1)
        } else if is_pendant(ledger, c1) {
            (c1, c0)
        } else {
            return None;
        }
    };
    let _ = p;
    if ledger.gray[w] != 0 || ledger.eps[w] != 1 || ledger.children[w].len() != 2 {
        return None;
    }
    let a = gray_tipped_chain(ledger, ledger.children[w][0])?;
    let b = gray_tipped_chain(ledger, ledger.children[w][1])?;
    Some([a, b])
}

fn classify_shape(ledger: &DischargeLedger, v: usize) -> TreeShape {
    let ell = ledger.params.ell;
    let bottom = ell - 2;
    if ledger.children[v].is_empty() && is_pendant(ledger, v) {
        return TreeShape::PendantSingleton;
    }
    if let Some((_, d)) = gray_tipped_chain(ledger, v) {
        if d == bottom {
            return TreeShape::NullPath;
        }
        if d + 1 == bottom {
            return TreeShape::AlphaPath;
        }
        if d + 2 == bottom {
            return TreeShape::TwoAlphaPath;
        }
    }
    if let Some(tips) = fork_tips(ledger, v) {
        let mut depths = [tips[0].1, tips[1].1];
        depths.sort_unstable();
        if depths == [bottom, bottom] {
            return TreeShape::AlphaFork;
        }
        if depths == [bottom - 1, bottom] {
            return TreeShape::TwoAlphaMixed;
        }
        if depths == [bottom - 1, bottom - 1] {
            return TreeShape::ThreeAlphaFork;
        }
    }
    if let Some(tips) = pendant_fork_tips(ledger, v) {
        let mut depths = [tips[0].1, tips[1].1];
        depths.sort_unstable();
        if depths == [bottom, bottom] {
            return TreeShape::AlphaPendantFork;
        }
        if depths == [bottom - 1, bottom] {
            return TreeShape::TwoAlphaPendantFork;
        }
    }
    if ledger.children[v].len() == 3 && ledger.gray[v] == 0 && ledger.eps[v] == 1 {
        let tips: Option<Vec<(usize, usize)>> = ledger.children[v]
            .iter()
            .map(|&c| gray_tipped_chain(ledger, c))
            .collect();
        if let Some(tips) = tips {
            if tips.iter().all(|&(_, d)| d == bottom) {
                return TreeShape::TwoAlphaStar;
            }
        }
    }
    if ledger.children[v].len() == 1 && ledger.gray[v] == 0 && ledger.eps[v] == 1 {
        let c = ledger.children[v][0];
        if fork_tips(ledger, c).is_some_and(|tips| tips[0].1 == bottom && tips[1].1 == bottom) {
            return TreeShape::TwoAlphaNested;
        }
    }
    TreeShape::Other
}

/// The gray edge leaving a chain tip, if its far endpoint lies in D.
fn gray_partner_in_d(ledger: &DischargeLedger, tip: usize) -> Option<usize> {
    ledger
        .graph
        .neighbors(tip)
        .find(|&w| {
            ledger.black_parent[tip] != Some(w)
                && ledger.black_parent[w] != Some(tip)
                && ledger.label[w].is_d()
        })
}

pub fn classify_trees(ledger: &mut DischargeLedger) -> Result<()> {
    let alpha = ledger.params.alpha;
    let ell = ledger.params.ell;

    // Gray-total lemma, both directions: a gray-free subtree is exactly a
    // graph-pendant vertex.
    let d_list: Vec<usize> = ledger.d_vertices().collect();
    for &v in &d_list {
        let zero_total = ledger.gray_tree[v] == 0;
        let pendant = is_pendant(ledger, v);
        if zero_total && !pendant {
            ledger.warn_or_fail(format!(
                "subtree at {v} carries no gray half-edge but {v} is not a pendant"
            ))?;
        }
        if pendant && !zero_total {
            ledger.warn_or_fail(format!("pendant {v} carries gray half-edges"))?;
        }
        if ledger.gray_tree[v] == 1 {
            // Single-gray subtrees are chains with the half-edge at an end.
            let ok = match chain(ledger, v) {
                None => false,
                Some(ch) => {
                    let tip = *ch.last().unwrap();
                    if ledger.gray[tip] == 1 {
                        true
                    } else if ledger.gray[v] == 1 {
                        ch.len() == 1 || (ch.len() == 2 && is_pendant(ledger, ch[1]))
                    } else {
                        false
                    }
                }
            };
            if !ok {
                ledger.warn_or_fail(format!(
                    "subtree at {v} has one gray half-edge but is not an end-tipped chain"
                ))?;
            }
        }
    }

    // Shape lemmas on subtrees (forward directions only).
    for &v in &d_list {
        let depth = ledger.depth(v).unwrap();
        let b = ledger.beta[v];
        if (1..=4).contains(&depth) && b.is_zero() {
            let shape = classify_shape(ledger, v);
            if shape != TreeShape::NullPath {
                ledger.warn_or_fail(format!(
                    "zero-overweight subtree at {v} (layer {depth}) is {shape:?}, \
                     expected a bottom-tipped chain"
                ))?;
            }
        }
        if (2..=3).contains(&depth) && b == alpha {
            let shape = classify_shape(ledger, v);
            if !matches!(
                shape,
                TreeShape::AlphaPath | TreeShape::AlphaFork | TreeShape::AlphaPendantFork
            ) {
                ledger.warn_or_fail(format!(
                    "alpha-overweight subtree at {v} (layer {depth}) is {shape:?}"
                ))?;
            }
        }
        if depth == 2 && b == alpha * rat_int(2) {
            let shape = classify_shape(ledger, v);
            if !matches!(
                shape,
                TreeShape::TwoAlphaPath
                    | TreeShape::TwoAlphaStar
                    | TreeShape::TwoAlphaMixed
                    | TreeShape::TwoAlphaNested
                    | TreeShape::TwoAlphaPendantFork
            ) {
                ledger.warn_or_fail(format!(
                    "double-alpha subtree at {v} (layer 2) is {shape:?}"
                ))?;
            }
        }
    }

    // Assemble the layer-one trees.
    let anchors: Vec<usize> = (0..ledger.n())
        .filter(|&v| ledger.label[v] == Label::D(1))
        .collect();
    let mut index_of = vec![usize::MAX; ledger.n()];
    let mut trees: Vec<TreeInfo> = anchors
        .iter()
        .enumerate()
        .map(|(ti, &u)| {
            let vertices = ledger.subtree(u);
            for &x in &vertices {
                index_of[x] = ti;
            }
            TreeInfo {
                anchor: u,
                root: ledger.black_parent[u].expect("layer-one vertices designate"),
                vertices,
                beta: ledger.beta[u],
                shape: classify_shape(ledger, u),
                family: None,
                zset: Vec::new(),
                gamma_initial: None,
                gamma: None,
                mate: None,
            }
        })
        .collect();
    for v in 0..ledger.n() {
        ledger.tree_of[v] = (index_of[v] != usize::MAX).then_some(index_of[v]);
    }

    // Z-sets: null trees gray-linked to each tree.
    let mut links: Vec<(usize, usize)> = Vec::new();
    for (a, b) in ledger.graph.edges() {
        let black = ledger.black_parent[a] == Some(b) || ledger.black_parent[b] == Some(a);
        if black {
            continue;
        }
        if let (Some(ta), Some(tb)) = (ledger.tree_of[a], ledger.tree_of[b]) {
            if ta != tb {
                links.push((ta, tb));
            }
        }
    }
    for (ta, tb) in links {
        if trees[tb].is_null() && !trees[ta].zset.contains(&tb) {
            trees[ta].zset.push(tb);
        }
        if trees[ta].is_null() && !trees[tb].zset.contains(&ta) {
            trees[tb].zset.push(ta);
        }
    }

    // Families.
    let bottom = ell - 2;
    for ti in 0..trees.len() {
        let t = &trees[ti];
        if t.is_positive() {
            if t.shape == TreeShape::AlphaPath && !t.zset.is_empty() {
                trees[ti].family = Some(TreeFamily::Linked);
                continue;
            }
            // Exempt forks: two chains with tips in the bottom two layers,
            // root pendant-classed with no gray, and a null tree hangs on a
            // tip exactly when the tip sits one layer up.
            let u = t.anchor;
            let root = t.root;
            if ledger.graph.degree(u) == 3 && ledger.gray[root] == 0 && ledger.eps[root] == 2 {
                if let Some(tips) = fork_tips(ledger, u) {
                    let tips_ok = tips.iter().all(|&(_, d)| d == bottom || d + 1 == bottom);
                    let null_iff = tips.iter().all(|&(tip, d)| {
                        let joined = gray_partner_in_d(ledger, tip)
                            .and_then(|z| ledger.tree_of[z])
                            .is_some_and(|tz| trees[tz].is_null());
                        joined == (d + 1 == bottom)
                    });
                    if tips_ok && null_iff {
                        trees[ti].family = Some(TreeFamily::Exempt);
                        continue;
                    }
                }
            }
        } else if t.is_null() && !t.zset.is_empty() {
            trees[ti].family = Some(TreeFamily::NullPair);
        }
    }

    // Initial gamma values.
    let mut in_someones_zset: Vec<Option<usize>> = vec![None; trees.len()];
    for ti in 0..trees.len() {
        for &z in &trees[ti].zset {
            if trees[z].is_null() && trees[ti].is_positive() {
                in_someones_zset[z] = Some(ti);
            }
        }
    }
    let third = alpha / rat_int(3);
    let mut pending_warnings: Vec<String> = Vec::new();
    for ti in 0..trees.len() {
        let t = &trees[ti];
        if t.shape == TreeShape::PendantSingleton {
            continue; // no claim; handled by the root's pendant donation
        }
        let x = t.root;
        let degx = ledger.graph.degree(x);
        let g = if t.is_positive() {
            if ledger.gray[x] > 0 {
                third
            } else if ledger.eps[x] == 2 && degx == 3 {
                alpha * rat_int(2)
            } else if ledger.eps[x] == 2 {
                if degx < 3 {
                    pending_warnings.push(format!(
                        "root {x} has a pendant neighbor but degree {degx} < 3"
                    ));
                }
                alpha
            } else {
                alpha
            }
        } else if t.is_null() {
            if t.family == Some(TreeFamily::NullPair) {
                rat_int(0)
            } else if in_someones_zset[ti].is_some() {
                if ledger.gray[x] == 0 {
                    alpha
                } else {
                    third
                }
            } else {
                pending_warnings.push(format!(
                    "null tree at {} links to no tree; treated as a 0-tree",
                    t.anchor
                ));
                rat_int(0)
            }
        } else {
            // Negative overweight outside the pendant singleton case.
            pending_warnings.push(format!(
                "tree at {} has negative overweight {:?} without being a pendant",
                t.anchor, t.beta
            ));
            rat_int(0)
        };
        trees[ti].gamma_initial = Some(g);
        trees[ti].gamma = Some(g);
    }
    for w in pending_warnings {
        ledger.warn_or_fail(w)?;
    }

    ledger.trees = trees;
    Ok(())
}

/// Applies the mate updates: each linked tree and its unique null partner
/// split the available overweight according to their root degrees.
pub fn resolve_mates(ledger: &mut DischargeLedger) -> Result<()> {
    let alpha = ledger.params.alpha;
    let mut updates: Vec<(usize, usize, Rat, Rat)> = Vec::new();
    let mut issues: Vec<String> = Vec::new();
    for ti in 0..ledger.trees.len() {
        let t = &ledger.trees[ti];
        match t.family {
            Some(TreeFamily::Linked) => {
                if t.zset.len() != 1 {
                    issues.push(format!(
                        "linked tree at {} has {} null partners, expected one",
                        t.anchor,
                        t.zset.len()
                    ));
                    continue;
                }
                let mate = t.zset[0];
                let ru = ledger.graph.degree(t.root);
                let rv = ledger.graph.degree(ledger.trees[mate].root);
                if t.root == ledger.trees[mate].root {
                    issues.push(format!(
                        "mated trees at {} and {} share root {}",
                        t.anchor, ledger.trees[mate].anchor, t.root
                    ));
                    continue;
                }
                let (gu, gv) = if ru == 2 && rv >= 3 {
                    (alpha, rat_int(0))
                } else if ru >= 3 && rv == 2 {
                    (rat_int(0), alpha)
                } else if ru >= 3 && rv >= 3 {
                    (alpha / rat_int(2), alpha / rat_int(2))
                } else {
                    issues.push(format!(
                        "mated roots {} and {} both have degree two; a maximal long-path \
                         family forbids this",
                        t.root, ledger.trees[mate].root
                    ));
                    (alpha, rat_int(0))
                };
                updates.push((ti, mate, gu, gv));
            }
            Some(TreeFamily::NullPair) => {
                if t.zset.len() == 1 {
                    updates.push((ti, t.zset[0], rat_int(0), rat_int(0)));
                }
            }
            _ => {}
        }
    }
    for issue in issues {
        ledger.warn_or_fail(issue)?;
    }
    for (ti, mate, gu, gv) in updates {
        match ledger.trees[ti].family {
            Some(TreeFamily::Linked) => {
                ledger.trees[ti].gamma = Some(gu);
                ledger.trees[mate].gamma = Some(gv);
                ledger.trees[ti].mate = Some(mate);
                ledger.trees[mate].mate = Some(ti);
            }
            Some(TreeFamily::NullPair) => {
                ledger.trees[ti].mate = Some(mate);
            }
            _ => {}
        }
    }
    Ok(())
}
