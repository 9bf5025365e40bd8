//! Forbidden-pattern containment: complete multipartite graphs, cycles of a
//! fixed length, and explicit graphs, as (not necessarily induced) subgraphs.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::graph6;
use serde::{Deserialize, Serialize};

/// A forbidden graph `F`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Pattern {
    /// K_{s_1,...,s_r} with part sizes kept nondecreasing, r >= 2.
    Multipartite { sizes: Vec<usize> },
    /// Cycle of length exactly `k`, k >= 3.
    Cycle { k: usize },
    /// An explicit pattern graph.
    Explicit { graph: Graph },
}

impl Pattern {
    pub fn multipartite(mut sizes: Vec<usize>) -> Result<Pattern> {
        if sizes.len() < 2 {
            return Err(Error::PatternParse("need at least 2 parts".into()));
        }
        if sizes.iter().any(|&s| s == 0) {
            return Err(Error::PatternParse("part sizes must be positive".into()));
        }
        sizes.sort_unstable();
        Ok(Pattern::Multipartite { sizes })
    }

    /// Complete graph K_s as the r = s all-ones multipartite pattern.
    pub fn complete(s: usize) -> Result<Pattern> {
        Pattern::multipartite(vec![1; s])
    }

    pub fn cycle(k: usize) -> Result<Pattern> {
        if k < 3 {
            return Err(Error::PatternParse(format!("cycle length must be >= 3, got {k}")));
        }
        Ok(Pattern::Cycle { k })
    }

    pub fn explicit(graph: Graph) -> Pattern {
        Pattern::Explicit { graph }
    }

    /// Parses the CLI pattern syntax: `K7`, `K{2,3,3}`, `C28`, `@file.g6`,
    /// or `@g6:<string>` for an inline explicit pattern.
    pub fn parse(text: &str) -> Result<Pattern> {
        let t = text.trim();
        if let Some(rest) = t.strip_prefix('@') {
            let g6 = if let Some(inline) = rest.strip_prefix("g6:") {
                inline.to_string()
            } else {
                let data = std::fs::read_to_string(rest)
                    .map_err(|e| Error::PatternParse(format!("cannot read {rest}: {e}")))?;
                data.lines()
                    .map(str::trim)
                    .find(|l| !l.is_empty())
                    .ok_or_else(|| Error::PatternParse(format!("{rest} holds no graph")))?
                    .to_string()
            };
            return Ok(Pattern::explicit(graph6::from_graph6(&g6)?));
        }
        if let Some(rest) = t.strip_prefix('C') {
            let k: usize = rest
                .parse()
                .map_err(|_| Error::PatternParse(format!("bad cycle length in {t:?}")))?;
            return Pattern::cycle(k);
        }
        if let Some(rest) = t.strip_prefix('K') {
            if let Some(inner) = rest.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
                let sizes: Vec<usize> = inner
                    .split(',')
                    .map(|p| {
                        p.trim()
                            .parse()
                            .map_err(|_| Error::PatternParse(format!("bad part size {p:?}")))
                    })
                    .collect::<Result<_>>()?;
                return Pattern::multipartite(sizes);
            }
            let s: usize = rest
                .parse()
                .map_err(|_| Error::PatternParse(format!("bad clique size in {t:?}")))?;
            if s < 2 {
                return Err(Error::PatternParse("K_s needs s >= 2".into()));
            }
            return Pattern::complete(s);
        }
        Err(Error::PatternParse(format!(
            "unrecognized pattern {t:?} (expected K<s>, K{{s1,...}}, C<k>, or @file)"
        )))
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            Pattern::Multipartite { sizes } => sizes.iter().sum(),
            Pattern::Cycle { k } => *k,
            Pattern::Explicit { graph } => graph.n(),
        }
    }

    pub fn edge_count(&self) -> usize {
        match self {
            Pattern::Multipartite { sizes } => {
                let s: usize = sizes.iter().sum();
                (s * s - sizes.iter().map(|x| x * x).sum::<usize>()) / 2
            }
            Pattern::Cycle { k } => *k,
            Pattern::Explicit { graph } => graph.edge_count(),
        }
    }

    /// The pattern as a concrete graph: multipartite parts are laid out in
    /// the stored nondecreasing order, cycles as 0-1-...-k-1-0.
    pub fn to_graph(&self) -> Graph {
        match self {
            Pattern::Multipartite { sizes } => {
                let n: usize = sizes.iter().sum();
                let mut part_of = Vec::with_capacity(n);
                for (i, &s) in sizes.iter().enumerate() {
                    part_of.extend(std::iter::repeat_n(i, s));
                }
                let mut edges = Vec::new();
                for u in 0..n {
                    for v in u + 1..n {
                        if part_of[u] != part_of[v] {
                            edges.push((u, v));
                        }
                    }
                }
                Graph::from_edges(n, &edges).expect("pattern graphs are small")
            }
            Pattern::Cycle { k } => Graph::cycle(*k).expect("k >= 3 enforced"),
            Pattern::Explicit { graph } => graph.clone(),
        }
    }
}

impl std::fmt::Display for Pattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Pattern::Multipartite { sizes } => {
                if sizes.iter().all(|&s| s == 1) {
                    write!(f, "K{}", sizes.len())
                } else {
                    let inner: Vec<String> = sizes.iter().map(|s| s.to_string()).collect();
                    write!(f, "K{{{}}}", inner.join(","))
                }
            }
            Pattern::Cycle { k } => write!(f, "C{k}"),
            Pattern::Explicit { graph } => write!(f, "@g6:{}", graph6::to_graph6(graph)),
        }
    }
}

/// Witness that `F` embeds into a host graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum Embedding {
    /// Host vertices of the cycle in cyclic order.
    Cycle { vertices: Vec<usize> },
    /// Images of each part, in the pattern's part order.
    Multipartite { parts: Vec<Vec<usize>> },
    /// `map[i]` is the host image of pattern vertex `i`.
    Explicit { map: Vec<usize> },
}

impl Embedding {
    pub fn vertices(&self) -> Vec<usize> {
        match self {
            Embedding::Cycle { vertices } => vertices.clone(),
            Embedding::Multipartite { parts } => parts.iter().flatten().copied().collect(),
            Embedding::Explicit { map } => map.clone(),
        }
    }

    /// Checks the witness against a host graph.
    pub fn verify(&self, g: &Graph, pattern: &Pattern) -> bool {
        let distinct = |vs: &[usize]| {
            let mut s = vs.to_vec();
            s.sort_unstable();
            s.dedup();
            s.len() == vs.len() && s.iter().all(|&v| v < g.n())
        };
        match (self, pattern) {
            (Embedding::Cycle { vertices }, Pattern::Cycle { k }) => {
                vertices.len() == *k
                    && distinct(vertices)
                    && (0..*k).all(|i| g.has_edge(vertices[i], vertices[(i + 1) % *k]))
            }
            (Embedding::Multipartite { parts }, Pattern::Multipartite { sizes }) => {
                let flat: Vec<usize> = parts.iter().flatten().copied().collect();
                parts.len() == sizes.len()
                    && parts.iter().zip(sizes).all(|(p, &s)| p.len() == s)
                    && distinct(&flat)
                    && parts.iter().enumerate().all(|(i, p)| {
                        parts.iter().skip(i + 1).all(|q| {
                            p.iter().all(|&u| q.iter().all(|&v| g.has_edge(u, v)))
                        })
                    })
            }
            (Embedding::Explicit { map }, Pattern::Explicit { graph }) => {
                map.len() == graph.n()
                    && distinct(map)
                    && graph.edges().all(|(a, b)| g.has_edge(map[a], map[b]))
            }
            _ => false,
        }
    }
}

/// Searches for a simple path from `from` to `to` with exactly `len` edges,
/// avoiding the vertices in `forbidden`. Depth-first with a shortest-path
/// budget bound: a partial path dies when the remaining budget drops below
/// the BFS distance to the target.
pub fn exact_length_path(
    g: &Graph,
    from: usize,
    to: usize,
    len: usize,
    forbidden: Option<&VertexSet>,
) -> Option<Vec<usize>> {
    if from >= g.n() || to >= g.n() {
        return None;
    }
    if let Some(f) = forbidden {
        if f.contains(from) || f.contains(to) {
            return None;
        }
    }
    if len == 0 {
        return (from == to).then(|| vec![from]);
    }
    if from == to {
        return None; // positive-length simple path cannot return to its start
    }
    // Distances toward `to` in the forbidden-free graph.
    let dist_to = {
        let mut dist = vec![u32::MAX; g.n()];
        let mut queue = std::collections::VecDeque::new();
        dist[to] = 0;
        queue.push_back(to);
        while let Some(u) = queue.pop_front() {
            for v in g.neighbors(u) {
                if dist[v] == u32::MAX && forbidden.is_none_or(|f| !f.contains(v)) {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    };
    if dist_to[from] == u32::MAX || dist_to[from] as usize > len {
        return None;
    }

    let mut used = VertexSet::empty(g.n());
    if let Some(f) = forbidden {
        used.union_with(f);
    }
    used.insert(from);
    let mut path = vec![from];

    fn dfs(
        g: &Graph,
        cur: usize,
        to: usize,
        remaining: usize,
        dist_to: &[u32],
        used: &mut VertexSet,
        path: &mut Vec<usize>,
    ) -> bool {
        if remaining == 1 {
            if g.has_edge(cur, to) && !used.contains(to) {
                path.push(to);
                return true;
            }
            return false;
        }
        for v in g.neighbors(cur) {
            if used.contains(v) || v == to {
                continue;
            }
            if dist_to[v] == u32::MAX || dist_to[v] as usize > remaining - 1 {
                continue;
            }
            used.insert(v);
            path.push(v);
            if dfs(g, v, to, remaining - 1, dist_to, used, path) {
                return true;
            }
            path.pop();
            used.remove(v);
        }
        false
    }

    if dfs(g, from, to, len, &dist_to, &mut used, &mut path) {
        Some(path)
    } else {
        None
    }
}

/// Finds an embedding of `pattern` in `g` as a subgraph, if one exists.
pub fn contains(g: &Graph, pattern: &Pattern) -> Option<Embedding> {
    match pattern {
        Pattern::Cycle { k } => find_cycle(g, *k),
        Pattern::Multipartite { sizes } => {
            multipartite_embed(g, sizes, &[]).map(|parts| Embedding::Multipartite { parts })
        }
        Pattern::Explicit { graph } => {
            explicit_embed(g, graph, &[]).map(|map| Embedding::Explicit { map })
        }
    }
}

fn find_cycle(g: &Graph, k: usize) -> Option<Embedding> {
    if k > g.n() {
        return None;
    }
    for (u, v) in g.edges() {
        if let Some(path) = exact_length_path(g, u, v, k - 1, None) {
            return Some(Embedding::Cycle { vertices: path });
        }
    }
    None
}

/// Part-by-part multipartite search. Parts are filled in decreasing size
/// order (largest parts fail fastest); candidate sets are maintained as
/// bitset intersections of the placed vertices' neighborhoods. `seeds` pins
/// pattern parts (by index into the descending order) to host vertices.
fn multipartite_embed(
    g: &Graph,
    sizes_ascending: &[usize],
    seeds: &[(usize, usize)],
) -> Option<Vec<Vec<usize>>> {
    let n = g.n();
    let mut order: Vec<usize> = (0..sizes_ascending.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(sizes_ascending[i]));
    let sizes_desc: Vec<usize> = order.iter().map(|&i| sizes_ascending[i]).collect();
    if sizes_ascending.iter().sum::<usize>() > n {
        return None;
    }

    let mut seed_of_part: Vec<Vec<usize>> = vec![Vec::new(); sizes_desc.len()];
    let mut all_seeds = VertexSet::empty(n);
    for &(p, v) in seeds {
        seed_of_part[p].push(v);
        all_seeds.insert(v);
    }
    // Cross-part seed pairs must already be adjacent in the host.
    for (i, &(p, v)) in seeds.iter().enumerate() {
        for &(q, w) in &seeds[i + 1..] {
            if p != q && !g.has_edge(v, w) {
                return None;
            }
            if p == q && v == w {
                return None;
            }
        }
    }

    // Members of part p must be adjacent to the seeds of every other part.
    let cross_seed_mask: Vec<VertexSet> = (0..sizes_desc.len())
        .map(|p| {
            let mut mask = VertexSet::full(n);
            for (q, svs) in seed_of_part.iter().enumerate() {
                if q == p {
                    continue;
                }
                for &s in svs {
                    mask.intersect_with(&g.neighbor_set(s));
                }
            }
            mask.subtract(&all_seeds);
            mask
        })
        .collect();

    struct Ctx<'a> {
        g: &'a Graph,
        sizes: &'a [usize],
        seeds: &'a [Vec<usize>],
        masks: &'a [VertexSet],
        parts: Vec<Vec<usize>>,
    }

    fn fill(ctx: &mut Ctx, p: usize, inter: &VertexSet, used: &VertexSet) -> bool {
        if p == ctx.sizes.len() {
            return true;
        }
        let need = ctx.sizes[p] - ctx.seeds[p].len();
        let mut cand = inter.clone();
        cand.intersect_with(&ctx.masks[p]);
        cand.subtract(used);
        let cand_vec = cand.to_vec();
        if cand_vec.len() < need {
            return false;
        }
        let mut picks = vec![0usize; need];
        choose(ctx, p, &cand_vec, 0, 0, &mut picks, inter, used)
    }

    #[allow(clippy::too_many_arguments)]
    fn choose(
        ctx: &mut Ctx,
        p: usize,
        cand: &[usize],
        start: usize,
        got: usize,
        picks: &mut Vec<usize>,
        inter: &VertexSet,
        used: &VertexSet,
    ) -> bool {
        let need = picks.len();
        if got == need {
            let members: Vec<usize> = ctx.seeds[p].iter().copied().chain(picks.iter().copied()).collect();
            let mut next_inter = inter.clone();
            let mut next_used = used.clone();
            for &m in picks.iter() {
                next_used.insert(m);
            }
            for &m in &members {
                next_inter.intersect_with(&ctx.g.neighbor_set(m));
            }
            ctx.parts.push(members);
            if fill(ctx, p + 1, &next_inter, &next_used) {
                return true;
            }
            ctx.parts.pop();
            return false;
        }
        for (i, &v) in cand.iter().enumerate().skip(start) {
            if cand.len() - i < need - got {
                break;
            }
            picks[got] = v;
            if choose(ctx, p, cand, i + 1, got + 1, picks, inter, used) {
                return true;
            }
        }
        false
    }

    let mut ctx = Ctx {
        g,
        sizes: &sizes_desc,
        seeds: &seed_of_part,
        masks: &cross_seed_mask,
        parts: Vec::new(),
    };
    let used0 = all_seeds.clone();
    if !fill(&mut ctx, 0, &VertexSet::full(n), &used0) {
        return None;
    }
    // Seeds constrain candidate masks but are not re-checked against the
    // placed vertices above; the masks already encode seed adjacency both ways.
    // Map parts back to the pattern's ascending-size order.
    let mut out = vec![Vec::new(); sizes_desc.len()];
    for (slot, &orig) in order.iter().enumerate() {
        let mut part = ctx.parts[slot].clone();
        part.sort_unstable();
        out[orig] = part;
    }
    Some(out)
}

/// Backtracking subgraph-isomorphism search for an explicit pattern.
/// `pins` fixes pattern-vertex-to-host assignments up front.
fn explicit_embed(g: &Graph, pat: &Graph, pins: &[(usize, usize)]) -> Option<Vec<usize>> {
    let pn = pat.n();
    if pn > g.n() {
        return None;
    }
    const UNSET: usize = usize::MAX;
    let mut assign = vec![UNSET; pn];
    let mut used = VertexSet::empty(g.n());
    for &(a, v) in pins {
        if assign[a] != UNSET || used.contains(v) {
            return None;
        }
        assign[a] = v;
        used.insert(v);
    }
    // Pattern edges incident to pinned vertices must already be checkable
    // once both ends are pinned.
    for (a, b) in pat.edges() {
        if assign[a] != UNSET && assign[b] != UNSET && !g.has_edge(assign[a], assign[b]) {
            return None;
        }
    }

    // Order unpinned pattern vertices: most constrained first (neighbors
    // already placed), then by degree.
    let mut order: Vec<usize> = (0..pn).filter(|&a| assign[a] == UNSET).collect();
    {
        let mut placed: Vec<bool> = (0..pn).map(|a| assign[a] != UNSET).collect();
        let mut ordered = Vec::with_capacity(order.len());
        while !order.is_empty() {
            let (idx, &best) = order
                .iter()
                .enumerate()
                .max_by_key(|&(_, &a)| {
                    let placed_nbrs = pat.neighbors(a).filter(|&b| placed[b]).count();
                    (placed_nbrs, pat.degree(a), std::cmp::Reverse(a))
                })
                .unwrap();
            placed[best] = true;
            ordered.push(best);
            order.remove(idx);
        }
        order = ordered;
    }

    fn dfs(
        g: &Graph,
        pat: &Graph,
        order: &[usize],
        depth: usize,
        assign: &mut Vec<usize>,
        used: &mut VertexSet,
    ) -> bool {
        const UNSET: usize = usize::MAX;
        if depth == order.len() {
            return true;
        }
        let a = order[depth];
        let mut cand = VertexSet::full(g.n());
        let mut constrained = false;
        for b in pat.neighbors(a) {
            if assign[b] != UNSET {
                cand.intersect_with(&g.neighbor_set(assign[b]));
                constrained = true;
            }
        }
        if !constrained {
            // No placed neighbor: any unused host vertex of sufficient degree.
            cand = VertexSet::full(g.n());
        }
        cand.subtract(used);
        let deg_need = pat.degree(a);
        for v in cand.iter() {
            if g.degree(v) < deg_need {
                continue;
            }
            assign[a] = v;
            used.insert(v);
            if dfs(g, pat, order, depth + 1, assign, used) {
                return true;
            }
            used.remove(v);
            assign[a] = UNSET;
        }
        false
    }

    if dfs(g, pat, &order, 0, &mut assign, &mut used) {
        Some(assign)
    } else {
        None
    }
}

/// Searches for an embedding of `pattern` in `g + xy` that uses the new
/// edge `xy`. For cycles this is an exact-length-(k-1) path search between
/// `x` and `y` in `g` itself.
pub fn creates_on_edge(g: &Graph, x: usize, y: usize, pattern: &Pattern) -> Result<Option<Embedding>> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    if x == y {
        return Err(Error::InvalidInput("creates_on_edge needs two distinct vertices".into()));
    }
    if g.has_edge(x, y) {
        return Err(Error::EdgeExists { u: x, v: y });
    }
    match pattern {
        Pattern::Cycle { k } => Ok(exact_length_path(g, x, y, k - 1, None).map(|path| {
            // path runs x..y; closing it along the new edge forms the cycle
            debug_assert_eq!(path.first(), Some(&x));
            debug_assert_eq!(path.last(), Some(&y));
            Embedding::Cycle { vertices: path }
        })),
        Pattern::Multipartite { sizes } => {
            let host = g.with_edge(x, y)?;
            let r = sizes.len();
            let mut order: Vec<usize> = (0..r).collect();
            order.sort_by_key(|&i| std::cmp::Reverse(sizes[i]));
            let sizes_desc: Vec<usize> = order.iter().map(|&i| sizes[i]).collect();
            // Equal-size parts are interchangeable: seed one ordered pair
            // of representatives per pair of size classes.
            let mut class_reps: Vec<(usize, Vec<usize>)> = Vec::new(); // (size, first two indices)
            for (idx, &s) in sizes_desc.iter().enumerate() {
                match class_reps.iter_mut().find(|(cs, _)| *cs == s) {
                    Some((_, reps)) if reps.len() < 2 => reps.push(idx),
                    Some(_) => {}
                    None => class_reps.push((s, vec![idx])),
                }
            }
            for (ai, (_, reps_a)) in class_reps.iter().enumerate() {
                for (bi, (_, reps_b)) in class_reps.iter().enumerate() {
                    let (pi, pj) = if ai == bi {
                        if reps_a.len() < 2 {
                            continue;
                        }
                        (reps_a[0], reps_a[1])
                    } else {
                        (reps_a[0], reps_b[0])
                    };
                    if let Some(parts) = multipartite_embed(&host, sizes, &[(pi, x), (pj, y)]) {
                        return Ok(Some(Embedding::Multipartite { parts }));
                    }
                }
            }
            Ok(None)
        }
        Pattern::Explicit { graph } => {
            let host = g.with_edge(x, y)?;
            for (a, b) in graph.edges() {
                for (va, vb) in [(x, y), (y, x)] {
                    if let Some(map) = explicit_embed(&host, graph, &[(a, va), (b, vb)]) {
                        return Ok(Some(Embedding::Explicit { map }));
                    }
                }
            }
            Ok(None)
        }
    }
}

/// Result of a capped copy count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CopyCount {
    pub count: u64,
    pub capped: bool,
}

pub const DEFAULT_COUNT_CAP: u64 = 1_000_000;

/// Counts subgraph copies of `pattern` in `g`, stopping at `cap`.
///
/// Cycles are counted once each (rotations and reflections deduplicated);
/// multipartite copies are counted as distinct part-partitions; explicit
/// copies as injective maps deduplicated by pattern automorphisms.
pub fn count_copies(g: &Graph, pattern: &Pattern, cap: u64) -> Result<CopyCount> {
    if cap == 0 {
        return Err(Error::InvalidInput("count cap must be >= 1".into()));
    }
    match pattern {
        Pattern::Cycle { k } => Ok(count_cycles(g, *k, cap)),
        Pattern::Multipartite { sizes } => Ok(count_multipartite(g, sizes, cap)),
        Pattern::Explicit { graph } => {
            if graph.n() == 0 {
                return Err(Error::InvalidInput("empty pattern".into()));
            }
            let aut = count_embeddings(graph, graph, u64::MAX);
            debug_assert!(aut.count >= 1);
            let raw_cap = cap.saturating_mul(aut.count);
            let raw = count_embeddings(g, graph, raw_cap);
            Ok(CopyCount {
                count: raw.count / aut.count,
                capped: raw.capped,
            })
        }
    }
}

/// Counts k-cycles once each: the DFS roots every cycle at its minimum
/// vertex and fixes the direction by requiring the second vertex to be
/// smaller than the last.
fn count_cycles(g: &Graph, k: usize, cap: u64) -> CopyCount {
    let n = g.n();
    let mut count = 0u64;
    let mut used = VertexSet::empty(n);
    let mut path: Vec<usize> = Vec::with_capacity(k);

    fn dfs(
        g: &Graph,
        k: usize,
        root: usize,
        used: &mut VertexSet,
        path: &mut Vec<usize>,
        count: &mut u64,
        cap: u64,
    ) {
        if *count >= cap {
            return;
        }
        let cur = *path.last().unwrap();
        if path.len() == k {
            if g.has_edge(cur, root) && path[1] < path[k - 1] {
                *count += 1;
            }
            return;
        }
        for v in g.neighbors(cur) {
            if v <= root || used.contains(v) {
                continue;
            }
            used.insert(v);
            path.push(v);
            dfs(g, k, root, used, path, count, cap);
            path.pop();
            used.remove(v);
            if *count >= cap {
                return;
            }
        }
    }

    for root in 0..n {
        if count >= cap {
            break;
        }
        used.insert(root);
        path.push(root);
        dfs(g, k, root, &mut used, &mut path, &mut count, cap);
        path.pop();
        used.remove(root);
    }
    CopyCount {
        count,
        capped: count >= cap,
    }
}

fn count_multipartite(g: &Graph, sizes_ascending: &[usize], cap: u64) -> CopyCount {
    let n = g.n();
    let mut sizes_desc = sizes_ascending.to_vec();
    sizes_desc.sort_unstable_by_key(|&s| std::cmp::Reverse(s));

    struct Ctx<'a> {
        g: &'a Graph,
        sizes: Vec<usize>,
        count: u64,
        cap: u64,
    }

    // Equal-size parts are deduplicated by demanding increasing minima.
    fn fill(ctx: &mut Ctx, p: usize, inter: &VertexSet, used: &VertexSet, prev_min: usize) {
        if ctx.count >= ctx.cap {
            return;
        }
        if p == ctx.sizes.len() {
            ctx.count += 1;
            return;
        }
        let mut cand = inter.clone();
        cand.subtract(used);
        let cand_vec: Vec<usize> = cand.to_vec();
        let min_floor = if p > 0 && ctx.sizes[p] == ctx.sizes[p - 1] {
            prev_min
        } else {
            0
        };
        combos(ctx, p, &cand_vec, 0, &mut Vec::new(), inter, used, min_floor);
    }

    #[allow(clippy::too_many_arguments)]
    fn combos(
        ctx: &mut Ctx,
        p: usize,
        cand: &[usize],
        start: usize,
        picked: &mut Vec<usize>,
        inter: &VertexSet,
        used: &VertexSet,
        min_floor: usize,
    ) {
        if ctx.count >= ctx.cap {
            return;
        }
        let need = ctx.sizes[p];
        if picked.len() == need {
            let part_min = picked[0];
            if part_min <= min_floor && min_floor != 0 {
                return;
            }
            let mut next_inter = inter.clone();
            let mut next_used = used.clone();
            for &m in picked.iter() {
                next_inter.intersect_with(&ctx.g.neighbor_set(m));
                next_used.insert(m);
            }
            fill(ctx, p + 1, &next_inter, &next_used, part_min);
            return;
        }
        for (i, &v) in cand.iter().enumerate().skip(start) {
            if cand.len() - i < need - picked.len() {
                break;
            }
            if picked.is_empty() && min_floor != 0 && v <= min_floor {
                continue;
            }
            picked.push(v);
            combos(ctx, p, cand, i + 1, picked, inter, used, min_floor);
            picked.pop();
        }
    }

    let mut ctx = Ctx {
        g,
        sizes: sizes_desc,
        count: 0,
        cap,
    };
    fill(&mut ctx, 0, &VertexSet::full(n), &VertexSet::empty(n), 0);
    CopyCount {
        count: ctx.count,
        capped: ctx.count >= cap,
    }
}

/// Counts injective edge-preserving maps `pat -> g` (labeled embeddings).
fn count_embeddings(g: &Graph, pat: &Graph, cap: u64) -> CopyCount {
    let pn = pat.n();
    let mut order: Vec<usize> = (0..pn).collect();
    order.sort_by_key(|&a| std::cmp::Reverse(pat.degree(a)));

    fn dfs(
        g: &Graph,
        pat: &Graph,
        order: &[usize],
        depth: usize,
        assign: &mut Vec<usize>,
        used: &mut VertexSet,
        count: &mut u64,
        cap: u64,
    ) {
        const UNSET: usize = usize::MAX;
        if *count >= cap {
            return;
        }
        if depth == order.len() {
            *count += 1;
            return;
        }
        let a = order[depth];
        let mut cand = VertexSet::full(g.n());
        for b in pat.neighbors(a) {
            if assign[b] != UNSET {
                cand.intersect_with(&g.neighbor_set(assign[b]));
            }
        }
        cand.subtract(used);
        for v in cand.iter() {
            if g.degree(v) < pat.degree(a) {
                continue;
            }
            assign[a] = v;
            used.insert(v);
            dfs(g, pat, order, depth + 1, assign, used, count, cap);
            used.remove(v);
            assign[a] = UNSET;
            if *count >= cap {
                return;
            }
        }
    }

    let mut assign = vec![usize::MAX; pn];
    let mut used = VertexSet::empty(g.n());
    let mut count = 0u64;
    dfs(g, pat, &order, 0, &mut assign, &mut used, &mut count, cap);
    CopyCount {
        count,
        capped: count >= cap,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(Pattern::parse("K3").unwrap(), Pattern::complete(3).unwrap());
        assert_eq!(
            Pattern::parse("K{2,3,3}").unwrap(),
            Pattern::multipartite(vec![2, 3, 3]).unwrap()
        );
        assert_eq!(Pattern::parse("C28").unwrap(), Pattern::cycle(28).unwrap());
        assert!(Pattern::parse("C2").is_err());
        assert!(Pattern::parse("K1").is_err());
        assert!(Pattern::parse("nonsense").is_err());
        let p = Pattern::parse("@g6:Bw").unwrap();
        assert_eq!(p.vertex_count(), 3);
        assert_eq!(p.edge_count(), 3);
    }

    #[test]
    fn contains_examples() {
        let k4 = Graph::complete(4).unwrap();
        let c3 = Pattern::cycle(3).unwrap();
        let emb = contains(&k4, &c3).unwrap();
        assert!(emb.verify(&k4, &c3));

        let c6 = Graph::cycle(6).unwrap();
        assert!(contains(&c6, &Pattern::cycle(4).unwrap()).is_none());

        let k112 = Pattern::multipartite(vec![1, 1, 2]).unwrap();
        let emb = contains(&k4, &k112).unwrap();
        assert!(emb.verify(&k4, &k112));
    }

    #[test]
    fn creates_on_edge_examples() {
        // Path w-x-...-y of length 3 plus C4 on the endpoints closes a 4-cycle.
        let p4 = Graph::path(4).unwrap();
        let c4 = Pattern::cycle(4).unwrap();
        let emb = creates_on_edge(&p4, 0, 3, &c4).unwrap().unwrap();
        let host = p4.with_edge(0, 3).unwrap();
        assert!(emb.verify(&host, &c4));

        // Two isolated vertices create nothing beyond the bare edge.
        let iso = Graph::empty(2).unwrap();
        assert!(creates_on_edge(&iso, 0, 1, &Pattern::complete(3).unwrap())
            .unwrap()
            .is_none());
        assert!(creates_on_edge(&iso, 0, 1, &c4).unwrap().is_none());
        // The single-edge pattern is the degenerate exception: the new edge
        // itself is a copy.
        assert!(creates_on_edge(&iso, 0, 1, &Pattern::complete(2).unwrap())
            .unwrap()
            .is_some());

        // Existing edge is an input error.
        assert!(creates_on_edge(&p4, 0, 1, &c4).is_err());
    }

    #[test]
    fn petersen_minus_edge_restores_c5() {
        // Petersen graph; drop one edge and check the pair closes a 5-cycle.
        let petersen = Graph::from_edges(
            10,
            &[
                (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
                (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
                (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
            ],
        )
        .unwrap();
        let g = petersen.without_edge(0, 1).unwrap();
        let c5 = Pattern::cycle(5).unwrap();
        let emb = creates_on_edge(&g, 0, 1, &c5).unwrap().unwrap();
        assert!(emb.verify(&petersen, &c5));
    }

    #[test]
    fn count_examples() {
        let k4 = Graph::complete(4).unwrap();
        assert_eq!(
            count_copies(&k4, &Pattern::cycle(3).unwrap(), 1000).unwrap().count,
            4
        );
        let c5 = Graph::cycle(5).unwrap();
        assert_eq!(
            count_copies(&c5, &Pattern::cycle(5).unwrap(), 1000).unwrap().count,
            1
        );
        let k5 = Graph::complete(5).unwrap();
        assert_eq!(
            count_copies(&k5, &Pattern::cycle(4).unwrap(), 1000).unwrap().count,
            15
        );
    }

    #[test]
    fn count_cap_reported() {
        let k6 = Graph::complete(6).unwrap();
        let r = count_copies(&k6, &Pattern::cycle(3).unwrap(), 5).unwrap();
        assert!(r.capped);
        assert_eq!(r.count, 5);
    }

    #[test]
    fn exact_length_path_basics() {
        let c6 = Graph::cycle(6).unwrap();
        assert!(exact_length_path(&c6, 0, 3, 3, None).is_some());
        assert!(exact_length_path(&c6, 0, 3, 4, None).is_none());
        assert_eq!(exact_length_path(&c6, 2, 2, 0, None), Some(vec![2]));
        let mut forb = VertexSet::empty(6);
        forb.insert(1);
        // With vertex 1 blocked only the long way around remains.
        assert_eq!(
            exact_length_path(&c6, 0, 2, 4, Some(&forb)),
            Some(vec![0, 5, 4, 3, 2])
        );
        forb.insert(4);
        // Both routes blocked.
        assert!(exact_length_path(&c6, 0, 3, 3, Some(&forb)).is_none());
        assert!(exact_length_path(&c6, 0, 3, 5, Some(&forb)).is_none());
    }
}
