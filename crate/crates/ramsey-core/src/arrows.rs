//! Copies, arrow relations, witness gadgets, and order surgery.
//!
//! The arrow check `Z -> (Y)^X_{k,t}` asks whether every k-coloring of the
//! copies of X in Z admits a copy of Y whose X-copies carry at most t
//! colors. The search walks colorings in lexicographic order restricted to
//! canonical ones (colors appear in first-use order, which never changes
//! the verdict), prunes a branch as soon as some Y-copy is completely
//! colored within t colors, and completes a branch with color 1 as soon as
//! every Y-copy already exceeds t. Verdicts are exact; if the relation
//! fails, the reported bad coloring is the lexicographically least one.

use itertools::Itertools;
use std::collections::BTreeMap;

use crate::canonical::canonical_form;
use crate::classes::{enumerate_members, ClassKind, ClassSpec};
use crate::degrees::{
    enumerate_extensions_monotone, enumerate_extensions_ordered, ExtensionCatalog,
};
use crate::error::{Error, Result};
use crate::structures::{
    is_monotone, is_proper_coloring, ColoringOfCopies, Graph, OrderedColoredGraph,
};

/// Default cap on arrow-search nodes.
pub const DEFAULT_ARROW_BUDGET: u64 = 1 << 26;

/// An induced embedding of a pattern into a host: edge and non-edge
/// preserving, strictly increasing when the structures are ordered, and
/// color preserving when they are colored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Embedding {
    map: Vec<usize>,
}

impl Embedding {
    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// Sorted image; identifies the copy for unordered patterns.
    pub fn image(&self) -> Vec<usize> {
        let mut img = self.map.clone();
        img.sort_unstable();
        img
    }

    fn image_mask(&self) -> u128 {
        self.map.iter().fold(0u128, |m, &v| m | 1 << v)
    }
}

fn kind_of(s: &OrderedColoredGraph) -> (bool, bool) {
    (s.ordered(), s.coloring().is_some())
}

fn check_same_kind(pattern: &OrderedColoredGraph, host: &OrderedColoredGraph) -> Result<()> {
    if kind_of(pattern) != kind_of(host) {
        return Err(Error::KindMismatch {
            reason: format!(
                "pattern is {:?} but host is {:?} (ordered, colored)",
                kind_of(pattern),
                kind_of(host)
            ),
        });
    }
    if pattern.coloring().is_some() && pattern.n() != host.n() {
        return Err(Error::KindMismatch {
            reason: format!(
                "colored structures over different universes {} and {}",
                pattern.n(),
                host.n()
            ),
        });
    }
    if !pattern.ordered() && pattern.coloring().is_some() {
        return Err(Error::KindMismatch {
            reason: "unordered colored structures are not a supported kind".to_string(),
        });
    }
    Ok(())
}

/// Increasing induced matches of an ordered pattern, in lexicographic
/// order of the image. Colors must match pointwise when present.
fn match_increasing(
    pattern: &OrderedColoredGraph,
    host: &OrderedColoredGraph,
    first_only: bool,
) -> Vec<Embedding> {
    let p = pattern.vertex_count();
    let h = host.vertex_count();
    let pg = pattern.graph();
    let hg = host.graph();
    let pc = pattern.coloring();
    let hc = host.coloring();
    let mut out = Vec::new();
    let mut map: Vec<usize> = Vec::with_capacity(p);
    #[allow(clippy::too_many_arguments)] // recursion state, not an API
    fn go(
        pg: &Graph,
        hg: &Graph,
        pc: Option<&[usize]>,
        hc: Option<&[usize]>,
        p: usize,
        h: usize,
        map: &mut Vec<usize>,
        out: &mut Vec<Embedding>,
        first_only: bool,
    ) -> bool {
        let i = map.len();
        if i == p {
            out.push(Embedding { map: map.clone() });
            return first_only;
        }
        let start = map.last().map(|&w| w + 1).unwrap_or(0);
        // Leave room for the remaining pattern vertices.
        for w in start..=h.saturating_sub(p - i) {
            if let (Some(pc), Some(hc)) = (pc, hc) {
                if pc[i] != hc[w] {
                    continue;
                }
            }
            if map
                .iter()
                .enumerate()
                .any(|(j, &u)| pg.has_edge(j, i) != hg.has_edge(u, w))
            {
                continue;
            }
            map.push(w);
            if go(pg, hg, pc, hc, p, h, map, out, first_only) {
                return true;
            }
            map.pop();
        }
        false
    }
    if p > h {
        return out;
    }
    go(pg, hg, pc, hc, p, h, &mut map, &mut out, first_only);
    out
}

/// Unordered copies: image sets inducing a subgraph isomorphic to the
/// pattern, one witness embedding per set, in lexicographic set order.
fn match_unordered(
    pattern: &OrderedColoredGraph,
    host: &OrderedColoredGraph,
    first_only: bool,
) -> Result<Vec<Embedding>> {
    let p = pattern.vertex_count();
    let pattern_form = canonical_form(pattern.graph())?;
    let mut out = Vec::new();
    for set in (0..host.vertex_count()).combinations(p) {
        let induced = host.graph().induced(&set);
        if induced.edge_count() != pattern.graph().edge_count() {
            continue;
        }
        let induced_form = canonical_form(&induced)?;
        if induced_form.certificate != pattern_form.certificate {
            continue;
        }
        // Witness through the shared canonical position: pattern vertex i
        // sits at position relabeling[i], as does local vertex j of the set.
        let mut position_to_local = vec![0usize; p];
        for (local, &pos) in induced_form.relabeling.iter().enumerate() {
            position_to_local[pos] = local;
        }
        let map: Vec<usize> = (0..p)
            .map(|i| set[position_to_local[pattern_form.relabeling[i]]])
            .collect();
        out.push(Embedding { map });
        if first_only {
            break;
        }
    }
    Ok(out)
}

/// All copies of the pattern in the host. Both must be the same kind of
/// structure: plain graphs, ordered graphs, or ordered colored graphs.
pub fn enumerate_copies(
    pattern: &OrderedColoredGraph,
    host: &OrderedColoredGraph,
) -> Result<Vec<Embedding>> {
    check_same_kind(pattern, host)?;
    if pattern.ordered() {
        Ok(match_increasing(pattern, host, false))
    } else {
        match_unordered(pattern, host, false)
    }
}

/// Whether at least one copy exists.
pub fn embeds(pattern: &OrderedColoredGraph, host: &OrderedColoredGraph) -> Result<bool> {
    check_same_kind(pattern, host)?;
    if pattern.ordered() {
        Ok(!match_increasing(pattern, host, true).is_empty())
    } else {
        Ok(!match_unordered(pattern, host, true)?.is_empty())
    }
}

/// Test that an embedding really is one; used by diagnostics and tests.
pub fn is_valid_embedding(
    pattern: &OrderedColoredGraph,
    host: &OrderedColoredGraph,
    emb: &Embedding,
) -> bool {
    let map = emb.map();
    if map.len() != pattern.vertex_count() {
        return false;
    }
    let mut seen = 0u128;
    for &w in map {
        if w >= host.vertex_count() || seen >> w & 1 == 1 {
            return false;
        }
        seen |= 1 << w;
    }
    if pattern.ordered() && !map.windows(2).all(|w| w[0] < w[1]) {
        return false;
    }
    if let (Some(pc), Some(hc)) = (pattern.coloring(), host.coloring()) {
        if (0..map.len()).any(|i| pc[i] != hc[map[i]]) {
            return false;
        }
    }
    (0..map.len()).all(|i| {
        (i + 1..map.len())
            .all(|j| pattern.graph().has_edge(i, j) == host.graph().has_edge(map[i], map[j]))
    })
}

#[derive(Clone, Debug)]
pub struct ArrowQuery {
    pub host: OrderedColoredGraph,
    pub target: OrderedColoredGraph,
    pub pattern: OrderedColoredGraph,
    pub k: usize,
    pub t: usize,
}

#[derive(Clone, Debug)]
pub struct ArrowResult {
    pub holds: bool,
    /// Lexicographically least bad coloring; present iff the arrow fails.
    pub bad_coloring: Option<ColoringOfCopies>,
    /// Search nodes examined.
    pub colorings_examined: u64,
}

struct ArrowSearch {
    copy_count: usize,
    /// x-copy index -> y-copy indices containing it, ascending.
    containing: Vec<Vec<usize>>,
    /// y-copy index -> x-copy indices inside, ascending.
    members_of: Vec<Vec<usize>>,
    k: usize,
    t: usize,
    budget: u64,
    examined: u64,
    /// Per y-copy, the set of colors among its assigned members.
    seen: Vec<u64>,
    assigned: Vec<usize>,
    /// Number of y-copies whose seen set already exceeds t colors.
    doomed: usize,
    assignment: Vec<usize>,
}

impl ArrowSearch {
    fn is_doomed(&self, j: usize) -> bool {
        self.seen[j].count_ones() as usize > self.t
    }

    /// Whether color c occurs among the assigned members of y-copy j.
    /// The assignment stack holds copies 0..assignment.len().
    fn color_present(&self, j: usize, c: usize) -> bool {
        self.members_of[j]
            .iter()
            .take_while(|&&x| x < self.assignment.len())
            .any(|&x| self.assignment[x] == c)
    }

    /// Lexicographically least canonical bad coloring below this node, if
    /// any. Colors stay within first-use order; the least bad coloring
    /// overall is itself canonical, so nothing is lost.
    fn dfs(&mut self, i: usize, max_used: usize) -> Result<Option<Vec<usize>>> {
        if self.doomed == self.seen.len() {
            // Every y-copy already exceeds t; the least completion wins.
            let mut bad = self.assignment.clone();
            bad.resize(self.copy_count, 1);
            return Ok(Some(bad));
        }
        if i == self.copy_count {
            return Ok(Some(self.assignment.clone()));
        }
        for c in 1..=self.k.min(max_used + 1) {
            self.examined += 1;
            if self.examined > self.budget {
                return Err(Error::BudgetExceeded {
                    budget: self.budget,
                });
            }
            let bit = 1u64 << (c - 1);
            let mut applied = 0usize;
            let mut pruned = false;
            for idx in 0..self.containing[i].len() {
                let j = self.containing[i][idx];
                let was_doomed = self.is_doomed(j);
                self.seen[j] |= bit;
                self.assigned[j] += 1;
                if self.is_doomed(j) && !was_doomed {
                    self.doomed += 1;
                }
                applied = idx + 1;
                if self.assigned[j] == self.members_of[j].len() && !self.is_doomed(j) {
                    // This y-copy is completely colored within t colors:
                    // no completion of this branch is bad.
                    pruned = true;
                    break;
                }
            }
            if !pruned {
                self.assignment.push(c);
                let found = self.dfs(i + 1, max_used.max(c))?;
                self.assignment.pop();
                if let Some(bad) = found {
                    return Ok(Some(bad));
                }
            }
            for idx in (0..applied).rev() {
                let j = self.containing[i][idx];
                let was_doomed = self.is_doomed(j);
                self.assigned[j] -= 1;
                if !self.color_present(j, c) {
                    self.seen[j] &= !bit;
                }
                if was_doomed && !self.is_doomed(j) {
                    self.doomed -= 1;
                }
            }
        }
        Ok(None)
    }
}

/// Exhaustive arrow check with the default budget.
pub fn arrow_check(query: &ArrowQuery) -> Result<ArrowResult> {
    arrow_check_budgeted(query, DEFAULT_ARROW_BUDGET)
}

pub fn arrow_check_budgeted(query: &ArrowQuery, budget: u64) -> Result<ArrowResult> {
    if query.k == 0 || query.t == 0 || query.t > query.k {
        return Err(Error::KindMismatch {
            reason: format!("need 1 <= t <= k, got k={} t={}", query.k, query.t),
        });
    }
    if query.k > 64 {
        return Err(Error::SizeCapExceeded {
            what: "colors in an arrow query",
            cap: 64,
            actual: query.k,
        });
    }
    check_same_kind(&query.pattern, &query.host)?;
    check_same_kind(&query.target, &query.host)?;
    let x_copies = enumerate_copies(&query.pattern, &query.host)?;
    let y_copies = enumerate_copies(&query.target, &query.host)?;
    let m = x_copies.len();

    let x_masks: Vec<u128> = x_copies.iter().map(Embedding::image_mask).collect();
    let mut members_of = vec![Vec::new(); y_copies.len()];
    let mut containing = vec![Vec::new(); m];
    for (j, y) in y_copies.iter().enumerate() {
        let y_mask = y.image_mask();
        for (i, &x_mask) in x_masks.iter().enumerate() {
            if x_mask & !y_mask == 0 {
                members_of[j].push(i);
                containing[i].push(j);
            }
        }
    }

    // A y-copy with no x-copies is within t colors under every coloring.
    if members_of.iter().any(Vec::is_empty) && !y_copies.is_empty() {
        return Ok(ArrowResult {
            holds: true,
            bad_coloring: None,
            colorings_examined: 0,
        });
    }

    let mut search = ArrowSearch {
        copy_count: m,
        containing,
        members_of,
        k: query.k,
        t: query.t,
        budget,
        examined: 0,
        seen: vec![0u64; y_copies.len()],
        assigned: vec![0usize; y_copies.len()],
        doomed: 0,
        assignment: Vec::with_capacity(m),
    };
    let bad = search.dfs(0, 0)?;
    Ok(ArrowResult {
        holds: bad.is_none(),
        bad_coloring: match bad {
            Some(colors) => Some(ColoringOfCopies::new(colors, query.k)?),
            None => None,
        },
        colorings_examined: search.examined,
    })
}

struct SimultaneousSearch {
    total: usize,
    pattern_count: usize,
    pattern_of: Vec<usize>,
    /// Global copy index -> y-copy indices containing it.
    containing: Vec<Vec<usize>>,
    /// Flattened (y-copy, pattern) -> ascending global copy indices.
    members: Vec<Vec<usize>>,
    member_total: Vec<usize>,
    k: usize,
    budget: u64,
    examined: u64,
    /// Flattened (y-copy, pattern) -> colors among assigned members.
    seen: Vec<u64>,
    assigned: Vec<usize>,
    /// Per y-copy, the number of patterns showing >= 2 colors inside it.
    poly: Vec<usize>,
    doomed: usize,
    assignment: Vec<usize>,
    max_used: Vec<usize>,
}

impl SimultaneousSearch {
    fn color_present(&self, j: usize, p: usize, c: usize) -> bool {
        self.members[j * self.pattern_count + p]
            .iter()
            .take_while(|&&x| x < self.assignment.len())
            .any(|&x| self.assignment[x] == c)
    }

    /// True iff some coloring below this node defeats every y-copy. The
    /// color universe canonicalizes per pattern family: each family can be
    /// renamed independently without changing which y-copies survive.
    fn dfs(&mut self, g: usize) -> Result<bool> {
        if self.doomed == self.poly.len() {
            return Ok(true);
        }
        if g == self.total {
            return Ok(true);
        }
        let p = self.pattern_of[g];
        for c in 1..=self.k.min(self.max_used[p] + 1) {
            self.examined += 1;
            if self.examined > self.budget {
                return Err(Error::BudgetExceeded {
                    budget: self.budget,
                });
            }
            let bit = 1u64 << (c - 1);
            let mut applied = 0usize;
            let mut pruned = false;
            for idx in 0..self.containing[g].len() {
                let j = self.containing[g][idx];
                let slot = j * self.pattern_count + p;
                let before = self.seen[slot].count_ones();
                self.seen[slot] |= bit;
                if before == 1 && self.seen[slot].count_ones() == 2 {
                    self.poly[j] += 1;
                    if self.poly[j] == 1 {
                        self.doomed += 1;
                    }
                }
                self.assigned[j] += 1;
                applied = idx + 1;
                if self.assigned[j] == self.member_total[j] && self.poly[j] == 0 {
                    // Complete and monochromatic for every pattern.
                    pruned = true;
                    break;
                }
            }
            if !pruned {
                self.assignment.push(c);
                let saved = self.max_used[p];
                self.max_used[p] = saved.max(c);
                let found = self.dfs(g + 1)?;
                self.max_used[p] = saved;
                self.assignment.pop();
                if found {
                    return Ok(true);
                }
            }
            for idx in (0..applied).rev() {
                let j = self.containing[g][idx];
                let slot = j * self.pattern_count + p;
                self.assigned[j] -= 1;
                if !self.color_present(j, p, c) {
                    let before = self.seen[slot].count_ones();
                    self.seen[slot] &= !bit;
                    if before == 2 {
                        self.poly[j] -= 1;
                        if self.poly[j] == 0 {
                            self.doomed -= 1;
                        }
                    }
                }
            }
        }
        Ok(false)
    }
}

/// Simultaneous arrow check with the default budget.
pub fn simultaneous_arrow_check(
    host: &OrderedColoredGraph,
    target: &OrderedColoredGraph,
    patterns: &[OrderedColoredGraph],
    k: usize,
) -> Result<bool> {
    simultaneous_arrow_check_budgeted(host, target, patterns, k, DEFAULT_ARROW_BUDGET)
}

/// True iff every simultaneous k-coloring of the copies of all patterns
/// admits a copy of the target inside which each pattern's copies are
/// monochromatic separately.
pub fn simultaneous_arrow_check_budgeted(
    host: &OrderedColoredGraph,
    target: &OrderedColoredGraph,
    patterns: &[OrderedColoredGraph],
    k: usize,
    budget: u64,
) -> Result<bool> {
    if k == 0 {
        return Err(Error::KindMismatch {
            reason: "need at least one color".to_string(),
        });
    }
    if k > 64 {
        return Err(Error::SizeCapExceeded {
            what: "colors in an arrow query",
            cap: 64,
            actual: k,
        });
    }
    check_same_kind(target, host)?;
    for (a, pattern) in patterns.iter().enumerate() {
        check_same_kind(pattern, host)?;
        if patterns[..a].contains(pattern) {
            return Err(Error::DuplicatePattern { position: a });
        }
    }

    let y_copies = enumerate_copies(target, host)?;
    let pattern_count = patterns.len();
    let mut pattern_of = Vec::new();
    let mut copy_masks: Vec<u128> = Vec::new();
    for (p, pattern) in patterns.iter().enumerate() {
        for copy in enumerate_copies(pattern, host)? {
            pattern_of.push(p);
            copy_masks.push(copy.image_mask());
        }
    }
    let total = copy_masks.len();

    let mut members = vec![Vec::new(); y_copies.len() * pattern_count.max(1)];
    let mut member_total = vec![0usize; y_copies.len()];
    let mut containing = vec![Vec::new(); total];
    for (j, y) in y_copies.iter().enumerate() {
        let y_mask = y.image_mask();
        for (g, &mask) in copy_masks.iter().enumerate() {
            if mask & !y_mask == 0 {
                members[j * pattern_count.max(1) + pattern_of[g]].push(g);
                member_total[j] += 1;
                containing[g].push(j);
            }
        }
    }

    if y_copies.is_empty() {
        return Ok(false);
    }
    if member_total.contains(&0) || pattern_count == 0 {
        // Some y-copy is untouched by every pattern, hence always good.
        return Ok(true);
    }

    let mut search = SimultaneousSearch {
        total,
        pattern_count,
        pattern_of,
        containing,
        members,
        member_total,
        k,
        budget,
        examined: 0,
        seen: vec![0u64; y_copies.len() * pattern_count],
        assigned: vec![0usize; y_copies.len()],
        poly: vec![0usize; y_copies.len()],
        doomed: 0,
        assignment: Vec::with_capacity(total),
        max_used: vec![0usize; pattern_count],
    };
    Ok(!search.dfs(0)?)
}

/// Which expanded class a catalog, gadget, or type coloring lives in.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExtensionMode {
    /// Proper colorings of an ordered base.
    OrderedColored,
    /// Vertex orders with nondecreasing proper colorings, up to isomorphism.
    Monotone,
}

fn catalog_for(x: &Graph, n: usize, mode: ExtensionMode) -> Result<ExtensionCatalog> {
    match mode {
        ExtensionMode::OrderedColored => enumerate_extensions_ordered(x, n),
        ExtensionMode::Monotone => enumerate_extensions_monotone(x, n),
    }
}

/// Disjoint union in the given order; vertex blocks keep their internal
/// order and colors. All parts must be the same kind of structure.
pub fn disjoint_union(parts: &[&OrderedColoredGraph]) -> Result<OrderedColoredGraph> {
    let first = *parts.first().ok_or_else(|| Error::KindMismatch {
        reason: "disjoint union of an empty list".to_string(),
    })?;
    let mut edges = Vec::new();
    let mut colors = Vec::new();
    let mut offset = 0usize;
    for part in parts {
        if kind_of(part) != kind_of(first) || part.n() != first.n() {
            return Err(Error::KindMismatch {
                reason: "disjoint union parts disagree in kind or color universe".to_string(),
            });
        }
        for &(a, b) in part.graph().edges() {
            edges.push((a + offset, b + offset));
        }
        if let Some(c) = part.coloring() {
            colors.extend_from_slice(c);
        }
        offset += part.vertex_count();
    }
    let graph = Graph::new(offset, &edges)?;
    let coloring = first.coloring().map(|_| colors);
    OrderedColoredGraph::new(graph, first.n(), coloring, first.ordered())
}

/// Host witnessing the lower-bound construction: the disjoint union of
/// every extension of x in catalog order, followed by an ordered complete
/// graph on n vertices colored 1..=n. In monotone mode the union is
/// re-sorted so the whole structure is monotone.
pub fn build_gadget(x: &Graph, n: usize, mode: ExtensionMode) -> Result<OrderedColoredGraph> {
    let catalog = catalog_for(x, n, mode)?;
    if catalog.is_empty() && x.vertex_count() > 0 {
        return Err(Error::NotNColorable { n });
    }
    let clique = OrderedColoredGraph::new(Graph::complete(n), n, Some((1..=n).collect()), true)?;
    let mut parts: Vec<&OrderedColoredGraph> = catalog.items().iter().collect();
    parts.push(&clique);
    let joined = disjoint_union(&parts)?;
    match mode {
        ExtensionMode::OrderedColored => Ok(joined),
        ExtensionMode::Monotone => monotone_reorder(&joined),
    }
}

/// Exhaustively confirms that the gadget absorbs every recoloring: for
/// every permutation f of the colors (and in monotone mode every per-class
/// keep-or-reverse flip, re-sorted to stay monotone), every catalog item
/// embeds into the transformed gadget.
pub fn recolor_embed_check(x: &Graph, n: usize, mode: ExtensionMode) -> Result<bool> {
    let catalog = catalog_for(x, n, mode)?;
    let gadget = build_gadget(x, n, mode)?;
    match mode {
        ExtensionMode::OrderedColored => {
            for f in (1..=n).permutations(n) {
                let recolored = gadget.recolored(&f)?;
                for item in catalog.items() {
                    if !embeds(item, &recolored)? {
                        return Ok(false);
                    }
                }
            }
        }
        ExtensionMode::Monotone => {
            let colors_old = gadget.coloring().expect("gadget is colored");
            for f in (1..=n).permutations(n) {
                for flips in 0u32..1 << n {
                    // Each old color class keeps or reverses its internal
                    // order, and classes line up by their new color.
                    let mut groups: Vec<(usize, Vec<usize>)> = (1..=n)
                        .map(|c| {
                            let mut class: Vec<usize> = (0..gadget.vertex_count())
                                .filter(|&v| colors_old[v] == c)
                                .collect();
                            if flips >> (c - 1) & 1 == 1 {
                                class.reverse();
                            }
                            (f[c - 1], class)
                        })
                        .collect();
                    groups.sort_by_key(|&(new_color, _)| new_color);
                    let seq: Vec<usize> = groups.into_iter().flat_map(|(_, class)| class).collect();
                    let mut rank = vec![0usize; seq.len()];
                    for (pos, &old) in seq.iter().enumerate() {
                        rank[old] = pos;
                    }
                    let graph = gadget.graph().permuted(&rank);
                    let colors: Vec<usize> =
                        seq.iter().map(|&old| f[colors_old[old] - 1]).collect();
                    let candidate = OrderedColoredGraph::new(graph, n, Some(colors), true)?;
                    debug_assert!(matches!(is_monotone(&candidate), Ok(true)));
                    debug_assert!(matches!(is_proper_coloring(&candidate), Ok(true)));
                    for item in catalog.items() {
                        if !embeds(item, &candidate)? {
                            return Ok(false);
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

/// The type coloring: each copy of x in the host is sent to the catalog
/// index of the expansion the host's coloring (and order) induces on it.
/// Values align with `enumerate_copies` of the uncolored pattern against
/// the host's uncolored reduct; the color universe is the catalog size.
pub fn extension_type_coloring(
    host: &OrderedColoredGraph,
    x: &Graph,
    mode: ExtensionMode,
) -> Result<ColoringOfCopies> {
    let n = host.n();
    if !host.ordered() {
        return Err(Error::InvalidExtension {
            reason: "host carries no vertex order".to_string(),
        });
    }
    let host_colors = host.coloring().ok_or_else(|| Error::InvalidExtension {
        reason: "host carries no coloring".to_string(),
    })?;
    if !is_proper_coloring(host)? {
        return Err(Error::InvalidExtension {
            reason: "host coloring is not proper".to_string(),
        });
    }
    if mode == ExtensionMode::Monotone && !is_monotone(host)? {
        return Err(Error::InvalidExtension {
            reason: "host coloring is not monotone along its order".to_string(),
        });
    }
    let catalog = catalog_for(x, n, mode)?;
    let copies = match mode {
        ExtensionMode::OrderedColored => enumerate_copies(
            &OrderedColoredGraph::with_order(x.clone(), n)?,
            &OrderedColoredGraph::with_order(host.graph().clone(), n)?,
        )?,
        ExtensionMode::Monotone => enumerate_copies(
            &OrderedColoredGraph::plain(x.clone(), n)?,
            &OrderedColoredGraph::plain(host.graph().clone(), n)?,
        )?,
    };
    let mut values = Vec::with_capacity(copies.len());
    for copy in &copies {
        // The copy inherits the host order: sorted image positions.
        let image = copy.image();
        let colors: Vec<usize> = image.iter().map(|&v| host_colors[v]).collect();
        let induced =
            OrderedColoredGraph::new(host.graph().induced(&image), n, Some(colors), true)?;
        let index = catalog
            .index_of(&induced)
            .expect("induced expansion of a copy is in the exhaustive catalog");
        values.push(index);
    }
    ColoringOfCopies::new(values, catalog.len())
}

/// Stable re-sort of the vertices by color. The new order restricted to
/// each color class equals the old order, and the result is monotone.
pub fn monotone_reorder(z: &OrderedColoredGraph) -> Result<OrderedColoredGraph> {
    Ok(monotone_reorder_map(z)?.0)
}

/// As `monotone_reorder`, also returning the map from old vertex to new
/// position.
pub fn monotone_reorder_map(z: &OrderedColoredGraph) -> Result<(OrderedColoredGraph, Vec<usize>)> {
    if !z.ordered() {
        return Err(Error::NotOrdered);
    }
    let colors = z.coloring().ok_or(Error::MissingColoring)?;
    let mut seq: Vec<usize> = (0..z.vertex_count()).collect();
    seq.sort_by_key(|&u| (colors[u], u));
    let mut rank = vec![0usize; seq.len()];
    for (pos, &old) in seq.iter().enumerate() {
        rank[old] = pos;
    }
    let new_colors: Vec<usize> = seq.iter().map(|&old| colors[old]).collect();
    let graph = z.graph().permuted(&rank);
    let reordered = OrderedColoredGraph::new(graph, z.n(), Some(new_colors), true)?;
    Ok((reordered, rank))
}

/// How one order restricts against another on a color class.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OrderRelation {
    Coincide,
    Opposite,
    Neither,
}

/// Classifies, per color class, the restriction of order b against order a.
/// Orders are rank arrays: `order[v]` is the position of vertex v. Singleton
/// classes coincide; both relations are vacuous on one point.
pub fn order_relation_per_class(
    order_a: &[usize],
    order_b: &[usize],
    coloring: &[usize],
) -> BTreeMap<usize, OrderRelation> {
    assert_eq!(order_a.len(), coloring.len());
    assert_eq!(order_b.len(), coloring.len());
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (v, &c) in coloring.iter().enumerate() {
        classes.entry(c).or_default().push(v);
    }
    classes
        .into_iter()
        .map(|(c, verts)| {
            let mut all_same = true;
            let mut all_reversed = true;
            for (i, &u) in verts.iter().enumerate() {
                for &w in &verts[i + 1..] {
                    let same = (order_a[u] < order_a[w]) == (order_b[u] < order_b[w]);
                    all_same &= same;
                    all_reversed &= !same;
                }
            }
            let relation = if all_same {
                OrderRelation::Coincide
            } else if all_reversed {
                OrderRelation::Opposite
            } else {
                OrderRelation::Neither
            };
            (c, relation)
        })
        .collect()
}

/// True iff every color class occupies an interval of the order.
/// `order[v]` is the position of vertex v.
pub fn is_convex_classes(order: &[usize], coloring: &[usize]) -> bool {
    assert_eq!(order.len(), coloring.len());
    let mut spans: BTreeMap<usize, (usize, usize, usize)> = BTreeMap::new();
    for (v, &c) in coloring.iter().enumerate() {
        let entry = spans.entry(c).or_insert((usize::MAX, 0, 0));
        entry.0 = entry.0.min(order[v]);
        entry.1 = entry.1.max(order[v]);
        entry.2 += 1;
    }
    spans.values().all(|&(lo, hi, count)| hi - lo + 1 == count)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SizeCaps {
    /// Largest target structure swept.
    pub max_target: usize,
    /// Largest host structure tried per target.
    pub max_host: usize,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DegreeRow {
    pub t: usize,
    /// Targets for which no host within caps satisfied the arrow.
    pub uncovered_targets: usize,
}

/// Outcome of the capped degree search. `upper` is sound whenever present:
/// some host witnessed every target. A missing upper bound only means the
/// caps were exhausted, never that the degree exceeds k.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DegreeReport {
    pub class: ClassSpec,
    pub k: usize,
    pub caps: SizeCaps,
    pub targets_total: usize,
    pub rows: Vec<DegreeRow>,
    pub upper: Option<usize>,
    /// Certified by the type coloring; every class member admits an
    /// expansion whose type coloring defeats all smaller t.
    pub lower: usize,
    pub exact: bool,
}

impl DegreeReport {
    pub fn render_text(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        writeln!(
            out,
            "degree search in {:?} (n={}) with k={}, targets <= {} vertices, hosts <= {} vertices",
            self.class.kind, self.class.n, self.k, self.caps.max_target, self.caps.max_host
        )
        .unwrap();
        for row in &self.rows {
            if row.uncovered_targets == 0 {
                writeln!(
                    out,
                    "t={}: covered for all {} targets",
                    row.t, self.targets_total
                )
                .unwrap();
            } else {
                writeln!(
                    out,
                    "t={}: UNDETERMINED, {} of {} targets uncovered within caps",
                    row.t, row.uncovered_targets, self.targets_total
                )
                .unwrap();
            }
        }
        writeln!(out, "certified lower bound: {}", self.lower).unwrap();
        match self.upper {
            Some(upper) if self.exact => {
                writeln!(out, "degree: {} (exact)", upper).unwrap();
            }
            Some(upper) => {
                writeln!(
                    out,
                    "degree: between {} and {} (upper bound holds at these caps)",
                    self.lower, upper
                )
                .unwrap();
            }
            None => {
                writeln!(
                    out,
                    "degree: UNDETERMINED within caps; certified lower bound {}",
                    self.lower
                )
                .unwrap();
            }
        }
        out
    }
}

/// Largest t that the type coloring forces on every host, truncated to k
/// colors: each target admits an expansion, every expansion of the target
/// shows at least L distinct types on the pattern copies inside, and any
/// host's own type coloring realizes those types on every target copy.
fn certified_lower(
    x: &Graph,
    spec: &ClassSpec,
    k: usize,
    targets: &[OrderedColoredGraph],
) -> Result<usize> {
    if spec.kind == ClassKind::KnFree {
        // No coloring machinery applies; only the trivial bound.
        return Ok(1);
    }
    let mode = if spec.kind.is_ordered() {
        ExtensionMode::OrderedColored
    } else {
        ExtensionMode::Monotone
    };
    if catalog_for(x, spec.n, mode)?.is_empty() {
        return Ok(1);
    }
    let mut best = 1usize;
    for y in targets {
        let expansions = catalog_for(y.graph(), spec.n, mode)?;
        let mut least_types: Option<usize> = None;
        for expansion in expansions.items() {
            let alpha = extension_type_coloring(expansion, x, mode)?;
            let distinct: std::collections::BTreeSet<usize> =
                alpha.colors().iter().copied().collect();
            let count = distinct.len();
            least_types = Some(least_types.map_or(count, |best| best.min(count)));
        }
        if let Some(types) = least_types {
            best = best.max(types.min(k));
        }
    }
    Ok(best)
}

/// Capped search for the smallest t with `arrow_check` covering every
/// class member target by some class member host. The pattern x is taken
/// as a plain or an ordered graph according to the class kind.
pub fn empirical_degree(
    x: &Graph,
    spec: &ClassSpec,
    k: usize,
    caps: SizeCaps,
) -> Result<DegreeReport> {
    empirical_degree_budgeted(x, spec, k, caps, DEFAULT_ARROW_BUDGET)
}

pub fn empirical_degree_budgeted(
    x: &Graph,
    spec: &ClassSpec,
    k: usize,
    caps: SizeCaps,
    budget: u64,
) -> Result<DegreeReport> {
    if spec.kind.is_colored() {
        return Err(Error::KindMismatch {
            reason: "degree search takes an uncolored pattern; colored classes have no reduct"
                .to_string(),
        });
    }
    let pattern = if spec.kind.is_ordered() {
        OrderedColoredGraph::with_order(x.clone(), spec.n)?
    } else {
        OrderedColoredGraph::plain(x.clone(), spec.n)?
    };
    let targets = enumerate_members(spec, caps.max_target)?;
    let hosts = enumerate_members(spec, caps.max_host)?;

    let mut rows = Vec::new();
    let mut upper = None;
    for t in 1..=k {
        let mut uncovered = 0usize;
        for target in &targets {
            let mut found = false;
            for host in &hosts {
                let query = ArrowQuery {
                    host: host.clone(),
                    target: target.clone(),
                    pattern: pattern.clone(),
                    k,
                    t,
                };
                if arrow_check_budgeted(&query, budget)?.holds {
                    found = true;
                    break;
                }
            }
            if !found {
                uncovered += 1;
            }
        }
        rows.push(DegreeRow {
            t,
            uncovered_targets: uncovered,
        });
        if uncovered == 0 && upper.is_none() {
            upper = Some(t);
        }
    }

    let lower = certified_lower(x, spec, k, &targets)?;
    Ok(DegreeReport {
        class: *spec,
        k,
        caps,
        targets_total: targets.len(),
        rows,
        upper,
        lower,
        exact: upper == Some(lower),
    })
}
