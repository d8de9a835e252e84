//! The graph classes the engine works in: n-colorable, exactly
//! n-chromatic, clique-free, and their ordered and colored companions.

use rayon::prelude::*;
use std::collections::BTreeSet;

use crate::canonical::{canonical_form, Certificate};
use crate::error::{Error, Result};
use crate::structures::{
    contains_clique, is_monotone, is_proper_coloring, Graph, OrderedColoredGraph,
};

pub const CHROMATIC_CAP: usize = 12;
pub const ENUM_UNORDERED_CAP: usize = 7;
pub const ENUM_ORDERED_CAP: usize = 5;

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum ClassKind {
    /// Graphs with chromatic number at most n.
    NColorable,
    /// Ordered graphs with chromatic number at most n.
    NColorableOrdered,
    /// Graphs with chromatic number exactly n.
    NChromatic,
    /// Ordered graphs with chromatic number exactly n.
    NChromaticOrdered,
    /// Graphs with no clique on n vertices.
    KnFree,
    /// Ordered graphs with a proper coloring into 1..=n.
    ColoredOrdered,
    /// Ordered graphs whose proper coloring is nondecreasing along the order.
    MonotoneColoredOrdered,
}

impl ClassKind {
    pub fn is_ordered(&self) -> bool {
        !matches!(
            self,
            ClassKind::NColorable | ClassKind::NChromatic | ClassKind::KnFree
        )
    }

    pub fn is_colored(&self) -> bool {
        matches!(
            self,
            ClassKind::ColoredOrdered | ClassKind::MonotoneColoredOrdered
        )
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct ClassSpec {
    pub kind: ClassKind,
    pub n: usize,
}

impl ClassSpec {
    pub fn new(kind: ClassKind, n: usize) -> Result<ClassSpec> {
        if n == 0 {
            return Err(Error::InvalidColorUniverse);
        }
        Ok(ClassSpec { kind, n })
    }
}

/// All proper colorings of `g` into `1..=n`, in lexicographic order.
pub fn proper_colorings(g: &Graph, n: usize) -> Vec<Vec<usize>> {
    fn go(g: &Graph, n: usize, colors: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let u = colors.len();
        if u == g.vertex_count() {
            out.push(colors.clone());
            return;
        }
        'choice: for c in 1..=n {
            for (q, &qc) in colors.iter().enumerate() {
                if qc == c && g.has_edge(q, u) {
                    continue 'choice;
                }
            }
            colors.push(c);
            go(g, n, colors, out);
            colors.pop();
        }
    }
    let mut out = Vec::new();
    go(g, n, &mut Vec::new(), &mut out);
    out
}

/// Proper colorings that are also nondecreasing along the vertex order.
pub fn monotone_proper_colorings(g: &Graph, n: usize) -> Vec<Vec<usize>> {
    fn go(g: &Graph, n: usize, colors: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let u = colors.len();
        if u == g.vertex_count() {
            out.push(colors.clone());
            return;
        }
        let floor = colors.last().copied().unwrap_or(1);
        'choice: for c in floor..=n {
            for (q, &qc) in colors.iter().enumerate() {
                if qc == c && g.has_edge(q, u) {
                    continue 'choice;
                }
            }
            colors.push(c);
            go(g, n, colors, out);
            colors.pop();
        }
    }
    let mut out = Vec::new();
    go(g, n, &mut Vec::new(), &mut out);
    out
}

fn k_colorable(g: &Graph, k: usize) -> bool {
    // Descending-degree order tightens the search; colors are introduced
    // in increasing order to break color symmetry.
    let mut order: Vec<usize> = (0..g.vertex_count()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    fn go(
        g: &Graph,
        order: &[usize],
        k: usize,
        assigned: &mut Vec<usize>,
        max_used: usize,
    ) -> bool {
        let i = assigned.len();
        if i == order.len() {
            return true;
        }
        let u = order[i];
        let limit = (max_used + 1).min(k);
        'choice: for c in 1..=limit {
            for (j, &w) in order[..i].iter().enumerate() {
                if assigned[j] == c && g.has_edge(u, w) {
                    continue 'choice;
                }
            }
            assigned.push(c);
            if go(g, order, k, assigned, max_used.max(c)) {
                return true;
            }
            assigned.pop();
        }
        false
    }
    go(g, &order, k, &mut Vec::new(), 0)
}

/// Exact largest clique size.
fn clique_number(g: &Graph) -> usize {
    let mut m = 0;
    while m < g.vertex_count() && contains_clique(g, m + 1) {
        m += 1;
    }
    m
}

fn greedy_coloring_bound(g: &Graph) -> usize {
    let mut order: Vec<usize> = (0..g.vertex_count()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    let mut colors = vec![0usize; g.vertex_count()];
    let mut used = 0;
    for &u in &order {
        let mut c = 1;
        while (0..g.vertex_count()).any(|w| colors[w] == c && g.has_edge(u, w)) {
            c += 1;
        }
        colors[u] = c;
        used = used.max(c);
    }
    used
}

/// Exact chromatic number; the empty graph has chromatic number zero.
pub fn chromatic_number(g: &Graph) -> Result<usize> {
    if g.vertex_count() > CHROMATIC_CAP {
        return Err(Error::SizeCapExceeded {
            what: "chromatic number",
            cap: CHROMATIC_CAP,
            actual: g.vertex_count(),
        });
    }
    if g.vertex_count() == 0 {
        return Ok(0);
    }
    let lower = clique_number(g).max(1);
    let upper = greedy_coloring_bound(g);
    for k in lower..upper {
        if k_colorable(g, k) {
            return Ok(k);
        }
    }
    Ok(upper)
}

/// Class membership. Kind and shape mismatches answer false; only size
/// caps and a zero parameter are errors. Unordered kinds judge the
/// underlying graph of whatever expansion they are handed.
pub fn is_member(value: &OrderedColoredGraph, spec: &ClassSpec) -> Result<bool> {
    if spec.n == 0 {
        return Err(Error::InvalidColorUniverse);
    }
    let g = value.graph();
    match spec.kind {
        ClassKind::NColorable => Ok(chromatic_number(g)? <= spec.n),
        ClassKind::NChromatic => Ok(chromatic_number(g)? == spec.n),
        ClassKind::KnFree => Ok(!contains_clique(g, spec.n)),
        ClassKind::NColorableOrdered => Ok(value.ordered() && chromatic_number(g)? <= spec.n),
        ClassKind::NChromaticOrdered => Ok(value.ordered() && chromatic_number(g)? == spec.n),
        ClassKind::ColoredOrdered => Ok(value.ordered()
            && within_universe(value, spec.n)
            && value.coloring().is_some()
            && is_proper_coloring(value)?),
        ClassKind::MonotoneColoredOrdered => Ok(value.ordered()
            && within_universe(value, spec.n)
            && value.coloring().is_some()
            && is_proper_coloring(value)?
            && is_monotone(value)?),
    }
}

fn within_universe(value: &OrderedColoredGraph, n: usize) -> bool {
    value
        .coloring()
        .map(|colors| colors.iter().all(|&c| c <= n))
        .unwrap_or(false)
}

fn all_labeled_graphs(v: usize) -> Vec<Graph> {
    let mut pairs = Vec::new();
    for a in 0..v {
        for b in (a + 1)..v {
            pairs.push((a, b));
        }
    }
    (0u64..1 << pairs.len())
        .map(|mask| {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            Graph::new(v, &edges).expect("mask edges are valid")
        })
        .collect()
}

/// Hereditary envelope used to grow unordered members level by level.
/// Deleting a vertex never raises the chromatic number or creates a clique,
/// so every member on v vertices extends a member on v - 1.
fn envelope_admits(g: &Graph, spec: &ClassSpec) -> Result<bool> {
    match spec.kind {
        ClassKind::KnFree => Ok(!contains_clique(g, spec.n)),
        _ => Ok(chromatic_number(g)? <= spec.n),
    }
}

fn enumerate_unordered(spec: &ClassSpec, max_vertices: usize) -> Result<Vec<Graph>> {
    let mut out = Vec::new();
    let mut level: Vec<Graph> = vec![Graph::edgeless(0)];
    for v in 0..=max_vertices {
        if v > 0 {
            let parents = std::mem::take(&mut level);
            let expansions: Vec<Vec<Certificate>> = parents
                .par_iter()
                .map(|parent| {
                    let mut certs = Vec::new();
                    for mask in 0u64..1 << (v - 1) {
                        let mut edges = parent.edges().to_vec();
                        for w in 0..v - 1 {
                            if mask >> w & 1 == 1 {
                                edges.push((w, v - 1));
                            }
                        }
                        let child = Graph::new(v, &edges).expect("expansion edges are valid");
                        if envelope_admits(&child, spec)? {
                            certs.push(canonical_form(&child)?.certificate);
                        }
                    }
                    Ok(certs)
                })
                .collect::<Result<_>>()?;
            let distinct: BTreeSet<Certificate> = expansions.into_iter().flatten().collect();
            level = distinct.iter().map(Certificate::to_graph).collect();
        }
        for g in &level {
            let keep = match spec.kind {
                ClassKind::NChromatic => chromatic_number(g)? == spec.n,
                _ => true,
            };
            if keep {
                out.push(g.clone());
            }
        }
    }
    Ok(out)
}

/// One representative per isomorphism class, cumulatively over
/// `0..=max_vertices` vertices, in sorted certificate order within each
/// size. Ordered kinds list each labeled structure once, since ordered
/// isomorphism is equality.
pub fn enumerate_members(
    spec: &ClassSpec,
    max_vertices: usize,
) -> Result<Vec<OrderedColoredGraph>> {
    if spec.n == 0 {
        return Err(Error::InvalidColorUniverse);
    }
    let cap = if spec.kind.is_ordered() {
        ENUM_ORDERED_CAP
    } else {
        ENUM_UNORDERED_CAP
    };
    if max_vertices > cap {
        return Err(Error::SizeCapExceeded {
            what: "member enumeration",
            cap,
            actual: max_vertices,
        });
    }
    if !spec.kind.is_ordered() {
        return enumerate_unordered(spec, max_vertices)?
            .into_iter()
            .map(|g| OrderedColoredGraph::plain(g, spec.n))
            .collect();
    }
    let mut out = Vec::new();
    for v in 0..=max_vertices {
        let mut this_size = Vec::new();
        for g in all_labeled_graphs(v) {
            match spec.kind {
                ClassKind::NColorableOrdered => {
                    if chromatic_number(&g)? <= spec.n {
                        this_size.push(OrderedColoredGraph::with_order(g, spec.n)?);
                    }
                }
                ClassKind::NChromaticOrdered => {
                    if chromatic_number(&g)? == spec.n {
                        this_size.push(OrderedColoredGraph::with_order(g, spec.n)?);
                    }
                }
                ClassKind::ColoredOrdered => {
                    for colors in proper_colorings(&g, spec.n) {
                        this_size.push(OrderedColoredGraph::new(
                            g.clone(),
                            spec.n,
                            Some(colors),
                            true,
                        )?);
                    }
                }
                ClassKind::MonotoneColoredOrdered => {
                    for colors in monotone_proper_colorings(&g, spec.n) {
                        this_size.push(OrderedColoredGraph::new(
                            g.clone(),
                            spec.n,
                            Some(colors),
                            true,
                        )?);
                    }
                }
                _ => unreachable!("unordered kinds handled above"),
            }
        }
        this_size.sort_by_key(|ocg| {
            (
                Certificate::of_labeled(ocg.graph()),
                ocg.coloring().map(|c| c.to_vec()),
            )
        });
        out.append(&mut this_size);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chromatic_numbers_of_known_graphs() {
        assert_eq!(chromatic_number(&Graph::edgeless(0)).unwrap(), 0);
        assert_eq!(chromatic_number(&Graph::edgeless(5)).unwrap(), 1);
        assert_eq!(chromatic_number(&Graph::path(4)).unwrap(), 2);
        assert_eq!(chromatic_number(&Graph::cycle(5)).unwrap(), 3);
        assert_eq!(chromatic_number(&Graph::cycle(6)).unwrap(), 2);
        assert_eq!(chromatic_number(&Graph::complete(4)).unwrap(), 4);
        assert_eq!(
            chromatic_number(&Graph::complete_multipartite(&[2, 2, 2])).unwrap(),
            3
        );
    }

    /// Oracle: decide k-colorability by scanning every assignment.
    fn chromatic_oracle(g: &Graph) -> usize {
        if g.vertex_count() == 0 {
            return 0;
        }
        for k in 1..=g.vertex_count() {
            let any = proper_colorings_count_naive(g, k) > 0;
            if any {
                return k;
            }
        }
        unreachable!("every graph is vertex-count colorable")
    }

    fn proper_colorings_count_naive(g: &Graph, n: usize) -> u64 {
        let v = g.vertex_count();
        let total = (n as u64).pow(v as u32);
        let mut count = 0;
        for code in 0..total {
            let mut x = code;
            let mut colors = Vec::with_capacity(v);
            for _ in 0..v {
                colors.push((x % n as u64) as usize + 1);
                x /= n as u64;
            }
            if g.edges().iter().all(|&(a, b)| colors[a] != colors[b]) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn chromatic_number_matches_naive_search_up_to_five_vertices() {
        for v in 0..=5 {
            for g in all_labeled_graphs(v) {
                assert_eq!(
                    chromatic_number(&g).unwrap(),
                    chromatic_oracle(&g),
                    "graph {:?}",
                    g.edges()
                );
            }
        }
    }

    #[test]
    fn membership_examples() {
        let c5 = OrderedColoredGraph::plain(Graph::cycle(5), 3).unwrap();
        assert!(!is_member(&c5, &ClassSpec::new(ClassKind::NColorable, 2).unwrap()).unwrap());
        assert!(is_member(&c5, &ClassSpec::new(ClassKind::NColorable, 3).unwrap()).unwrap());
        assert!(is_member(&c5, &ClassSpec::new(ClassKind::NChromatic, 3).unwrap()).unwrap());
        assert!(!is_member(&c5, &ClassSpec::new(ClassKind::NChromatic, 2).unwrap()).unwrap());
        assert!(is_member(&c5, &ClassSpec::new(ClassKind::KnFree, 3).unwrap()).unwrap());

        let k3 = OrderedColoredGraph::plain(Graph::complete(3), 3).unwrap();
        assert!(!is_member(&k3, &ClassSpec::new(ClassKind::KnFree, 3).unwrap()).unwrap());
        assert!(is_member(&k3, &ClassSpec::new(ClassKind::KnFree, 4).unwrap()).unwrap());

        let empty = OrderedColoredGraph::plain(Graph::edgeless(0), 1).unwrap();
        assert!(is_member(&empty, &ClassSpec::new(ClassKind::NColorable, 1).unwrap()).unwrap());
        assert!(!is_member(&empty, &ClassSpec::new(ClassKind::NChromatic, 1).unwrap()).unwrap());
    }

    #[test]
    fn colored_membership_examples() {
        let path = Graph::path(3);
        let monotone =
            OrderedColoredGraph::new(path.clone(), 2, Some(vec![1, 2, 2]), true).unwrap();
        // (1,2,2) on a path 0-1-2 collides on the edge 1-2.
        assert!(!is_member(
            &monotone,
            &ClassSpec::new(ClassKind::ColoredOrdered, 2).unwrap()
        )
        .unwrap());
        let proper = OrderedColoredGraph::new(path.clone(), 2, Some(vec![1, 2, 1]), true).unwrap();
        assert!(is_member(
            &proper,
            &ClassSpec::new(ClassKind::ColoredOrdered, 2).unwrap()
        )
        .unwrap());
        // Proper but decreasing, so not monotone.
        assert!(!is_member(
            &proper,
            &ClassSpec::new(ClassKind::MonotoneColoredOrdered, 2).unwrap()
        )
        .unwrap());
        let rising =
            OrderedColoredGraph::new(Graph::edgeless(3), 2, Some(vec![1, 1, 2]), true).unwrap();
        assert!(is_member(
            &rising,
            &ClassSpec::new(ClassKind::MonotoneColoredOrdered, 2).unwrap()
        )
        .unwrap());
        let unordered = OrderedColoredGraph::new(path, 2, Some(vec![1, 2, 1]), false).unwrap();
        assert!(!is_member(
            &unordered,
            &ClassSpec::new(ClassKind::ColoredOrdered, 2).unwrap()
        )
        .unwrap());
    }

    #[test]
    fn enumeration_counts_all_graphs() {
        // Unrestricted counts per size: 1, 1, 2, 4, 11, 34 isomorphism
        // classes on 0..=5 vertices.
        let spec = ClassSpec::new(ClassKind::NColorable, 5).unwrap();
        let members = enumerate_members(&spec, 5).unwrap();
        let mut by_size = vec![0usize; 6];
        for m in &members {
            by_size[m.vertex_count()] += 1;
        }
        assert_eq!(by_size, vec![1, 1, 2, 4, 11, 34]);
    }

    #[test]
    fn enumeration_matches_labeled_brute_force() {
        // Independent route: dedup every labeled graph by certificate.
        for v in 0..=5 {
            let spec = ClassSpec::new(ClassKind::NColorable, v.max(1)).unwrap();
            let members = enumerate_members(&spec, v).unwrap();
            let at_size: Vec<_> = members.iter().filter(|m| m.vertex_count() == v).collect();
            let mut certs = BTreeSet::new();
            for g in all_labeled_graphs(v) {
                certs.insert(canonical_form(&g).unwrap().certificate);
            }
            assert_eq!(at_size.len(), certs.len(), "size {v}");
        }
    }

    #[test]
    fn one_colorable_graphs_are_edgeless() {
        let spec = ClassSpec::new(ClassKind::NColorable, 1).unwrap();
        let members = enumerate_members(&spec, 3).unwrap();
        let on_three: Vec<_> = members.iter().filter(|m| m.vertex_count() == 3).collect();
        assert_eq!(on_three.len(), 1);
        assert_eq!(on_three[0].graph().edge_count(), 0);
    }

    #[test]
    fn chromatic_classes_partition_nonempty_graphs() {
        for v in 1..=5 {
            let total: usize = (1..=v)
                .map(|n| {
                    let spec = ClassSpec::new(ClassKind::NChromatic, n).unwrap();
                    enumerate_members(&spec, v)
                        .unwrap()
                        .iter()
                        .filter(|m| m.vertex_count() == v)
                        .count()
                })
                .sum();
            let spec = ClassSpec::new(ClassKind::NColorable, v).unwrap();
            let all = enumerate_members(&spec, v)
                .unwrap()
                .iter()
                .filter(|m| m.vertex_count() == v)
                .count();
            assert_eq!(total, all, "size {v}");
        }
    }

    #[test]
    fn triangle_free_enumeration() {
        let spec = ClassSpec::new(ClassKind::KnFree, 3).unwrap();
        let members = enumerate_members(&spec, 4).unwrap();
        for m in &members {
            assert!(!contains_clique(m.graph(), 3));
        }
        // 4 of the 11 four-vertex classes contain a triangle: the triangle
        // plus an isolated vertex, the paw, the diamond, and K4.
        assert_eq!(members.iter().filter(|m| m.vertex_count() == 4).count(), 7);
    }

    #[test]
    fn ordered_enumeration_counts_labeled_structures() {
        let spec = ClassSpec::new(ClassKind::NColorableOrdered, 2).unwrap();
        let members = enumerate_members(&spec, 3).unwrap();
        // Of the 8 labeled graphs on 3 vertices, only the triangle needs
        // a third color.
        assert_eq!(members.iter().filter(|m| m.vertex_count() == 3).count(), 7);
        for m in &members {
            assert!(m.ordered());
        }
    }

    #[test]
    fn colored_ordered_enumeration_matches_coloring_counts() {
        let spec = ClassSpec::new(ClassKind::ColoredOrdered, 2).unwrap();
        let members = enumerate_members(&spec, 2).unwrap();
        // Sizes 0, 1, 2: 1 + 2 + (edgeless pair: 4, edge: 2) = 9.
        assert_eq!(members.len(), 9);
        let monotone_spec = ClassSpec::new(ClassKind::MonotoneColoredOrdered, 2).unwrap();
        let monotone = enumerate_members(&monotone_spec, 2).unwrap();
        // Monotone cut: 1 + 2 + (edgeless: (1,1),(1,2),(2,2); edge: (1,2)) = 7.
        assert_eq!(monotone.len(), 7);
        for m in &monotone {
            assert!(is_monotone(m).unwrap());
            assert!(is_proper_coloring(m).unwrap());
        }
    }

    #[test]
    fn enumeration_caps() {
        let spec = ClassSpec::new(ClassKind::NColorable, 3).unwrap();
        assert!(matches!(
            enumerate_members(&spec, 8).unwrap_err(),
            Error::SizeCapExceeded { .. }
        ));
        let ordered = ClassSpec::new(ClassKind::ColoredOrdered, 3).unwrap();
        assert!(matches!(
            enumerate_members(&ordered, 6).unwrap_err(),
            Error::SizeCapExceeded { .. }
        ));
    }

    #[test]
    fn coloring_generators_are_lexicographic_and_complete() {
        let p3 = Graph::path(3);
        let all = proper_colorings(&p3, 2);
        assert_eq!(all, vec![vec![1, 2, 1], vec![2, 1, 2]]);
        assert_eq!(
            proper_colorings_count_naive(&p3, 3),
            proper_colorings(&p3, 3).len() as u64
        );
        let monotone = monotone_proper_colorings(&Graph::edgeless(2), 2);
        assert_eq!(monotone, vec![vec![1, 1], vec![1, 2], vec![2, 2]]);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
    }
}
