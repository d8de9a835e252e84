//! Finite graphs and their ordered, vertex-colored expansions.
//!
//! Vertices are `0..vertex_count`. When a structure is ordered, the order is
//! the vertex index order; isomorphic ordered structures are therefore equal
//! after normalization, which is what makes exhaustive catalogs cheap to
//! deduplicate. Colors are 1-based values in `1..=n`.

use crate::error::{Error, Result};

/// Hard representation cap: adjacency rows are single 128-bit words.
/// Large enough for every gadget the engine builds (extension unions
/// reach the 80s); every search operation caps far below this.
pub const MAX_VERTICES: usize = 128;

/// A finite simple graph. No loops, no parallel edges.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Graph {
    vertex_count: usize,
    /// Sorted, deduplicated `(min, max)` pairs with both endpoints in range.
    edges: Vec<(usize, usize)>,
    /// Bitset adjacency row per vertex; kept consistent with `edges`.
    adj: Vec<u128>,
}

impl Graph {
    /// Normalizes edge input: orientation and duplicates are forgiven,
    /// loops and out-of-range endpoints are not.
    pub fn new(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        if vertex_count > MAX_VERTICES {
            return Err(Error::SizeCapExceeded {
                what: "graph construction",
                cap: MAX_VERTICES,
                actual: vertex_count,
            });
        }
        let mut normalized = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a == b {
                return Err(Error::LoopEdge { vertex: a });
            }
            for v in [a, b] {
                if v >= vertex_count {
                    return Err(Error::VertexOutOfRange {
                        vertex: v,
                        vertex_count,
                    });
                }
            }
            normalized.push((a.min(b), a.max(b)));
        }
        normalized.sort_unstable();
        normalized.dedup();
        let mut adj = vec![0u128; vertex_count];
        for &(a, b) in &normalized {
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        Ok(Graph {
            vertex_count,
            edges: normalized,
            adj,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && a < self.vertex_count && b < self.vertex_count && (self.adj[a] >> b) & 1 == 1
    }

    /// Neighbor bitset of `v`.
    pub fn neighbors(&self, v: usize) -> u128 {
        self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    /// The graph with vertex `v` renamed to `relabel[v]`.
    /// `relabel` must be a permutation of `0..vertex_count`.
    pub fn permuted(&self, relabel: &[usize]) -> Graph {
        debug_assert_eq!(relabel.len(), self.vertex_count);
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(a, b)| (relabel[a], relabel[b]))
            .collect();
        Graph::new(self.vertex_count, &edges).expect("permutation preserves validity")
    }

    /// Induced subgraph on `verts`; vertex `verts[i]` becomes vertex `i`.
    pub fn induced(&self, verts: &[usize]) -> Graph {
        let mut edges = Vec::new();
        for (i, &u) in verts.iter().enumerate() {
            for (j, &w) in verts.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, w) {
                    edges.push((i, j));
                }
            }
        }
        Graph::new(verts.len(), &edges).expect("induced subgraph is valid")
    }

    /// Upper-triangle adjacency bits in column-major order:
    /// pairs (0,1), (0,2), (1,2), (0,3), ... as in the graph6 convention.
    pub fn upper_triangle_bits(&self) -> Vec<bool> {
        let mut bits =
            Vec::with_capacity(self.vertex_count * self.vertex_count.saturating_sub(1) / 2);
        for i in 1..self.vertex_count {
            for j in 0..i {
                bits.push(self.has_edge(j, i));
            }
        }
        bits
    }

    pub fn complete(v: usize) -> Graph {
        let mut edges = Vec::new();
        for a in 0..v {
            for b in (a + 1)..v {
                edges.push((a, b));
            }
        }
        Graph::new(v, &edges).expect("complete graph is valid")
    }

    pub fn edgeless(v: usize) -> Graph {
        Graph::new(v, &[]).expect("edgeless graph is valid")
    }

    pub fn path(v: usize) -> Graph {
        let edges: Vec<(usize, usize)> = (1..v).map(|i| (i - 1, i)).collect();
        Graph::new(v, &edges).expect("path graph is valid")
    }

    pub fn cycle(v: usize) -> Graph {
        assert!(v >= 3, "cycles need at least 3 vertices");
        let mut edges: Vec<(usize, usize)> = (1..v).map(|i| (i - 1, i)).collect();
        edges.push((v - 1, 0));
        Graph::new(v, &edges).expect("cycle graph is valid")
    }

    /// Complete multipartite graph; part `p` occupies a consecutive block of
    /// `parts[p]` vertices, and edges join exactly the cross-part pairs.
    pub fn complete_multipartite(parts: &[usize]) -> Graph {
        let v: usize = parts.iter().sum();
        let mut part_of = Vec::with_capacity(v);
        for (p, &size) in parts.iter().enumerate() {
            part_of.extend(std::iter::repeat_n(p, size));
        }
        let mut edges = Vec::new();
        for a in 0..v {
            for b in (a + 1)..v {
                if part_of[a] != part_of[b] {
                    edges.push((a, b));
                }
            }
        }
        Graph::new(v, &edges).expect("complete multipartite graph is valid")
    }
}

/// A graph together with a color universe `1..=n`, an optional total
/// vertex coloring, and an ordered flag. Ordered means the vertex index
/// order is the linear order of the structure.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct OrderedColoredGraph {
    graph: Graph,
    n: usize,
    coloring: Option<Vec<usize>>,
    ordered: bool,
}

impl OrderedColoredGraph {
    pub fn new(
        graph: Graph,
        n: usize,
        coloring: Option<Vec<usize>>,
        ordered: bool,
    ) -> Result<OrderedColoredGraph> {
        if n == 0 {
            return Err(Error::InvalidColorUniverse);
        }
        if let Some(colors) = &coloring {
            if colors.len() != graph.vertex_count() {
                return Err(Error::MissingColoring);
            }
            for &c in colors {
                if c == 0 || c > n {
                    return Err(Error::ColorOutOfRange { color: c, n });
                }
            }
        }
        Ok(OrderedColoredGraph {
            graph,
            n,
            coloring,
            ordered,
        })
    }

    /// Unordered, uncolored graph viewed inside color universe `n`.
    pub fn plain(graph: Graph, n: usize) -> Result<OrderedColoredGraph> {
        OrderedColoredGraph::new(graph, n, None, false)
    }

    /// Ordered, uncolored: the vertex labels are the order.
    pub fn with_order(graph: Graph, n: usize) -> Result<OrderedColoredGraph> {
        OrderedColoredGraph::new(graph, n, None, true)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coloring(&self) -> Option<&[usize]> {
        self.coloring.as_deref()
    }

    pub fn ordered(&self) -> bool {
        self.ordered
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Same structure with colors renamed through `f`, where color `c`
    /// becomes `f[c - 1]`. `f` must map into `1..=n`.
    pub fn recolored(&self, f: &[usize]) -> Result<OrderedColoredGraph> {
        if f.len() != self.n {
            return Err(Error::InvalidColorUniverse);
        }
        let coloring = self
            .coloring
            .as_ref()
            .map(|colors| colors.iter().map(|&c| f[c - 1]).collect::<Vec<usize>>());
        OrderedColoredGraph::new(self.graph.clone(), self.n, coloring, self.ordered)
    }
}

/// True iff the coloring is total and proper: adjacent vertices differ.
pub fn is_proper_coloring(c: &OrderedColoredGraph) -> Result<bool> {
    let colors = c.coloring().ok_or(Error::MissingColoring)?;
    Ok(c.graph()
        .edges()
        .iter()
        .all(|&(a, b)| colors[a] != colors[b]))
}

/// True iff the coloring is nondecreasing along the order.
pub fn is_monotone(c: &OrderedColoredGraph) -> Result<bool> {
    if !c.ordered() {
        return Err(Error::NotOrdered);
    }
    let colors = c.coloring().ok_or(Error::MissingColoring)?;
    Ok(colors.windows(2).all(|w| w[0] <= w[1]))
}

/// True iff some `m` vertices are pairwise adjacent. `m = 0` holds vacuously.
pub fn contains_clique(g: &Graph, m: usize) -> bool {
    fn grow(adj: &[u128], cand: u128, need: usize) -> bool {
        if need == 0 {
            return true;
        }
        if (cand.count_ones() as usize) < need {
            return false;
        }
        let mut rest = cand;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            // Only candidates past v are considered after v, so each
            // clique is probed once, in ascending vertex order.
            if grow(adj, rest & adj[v], need - 1) {
                return true;
            }
        }
        false
    }
    if m == 0 {
        return true;
    }
    if m > g.vertex_count() {
        return false;
    }
    let all = if g.vertex_count() == MAX_VERTICES {
        u128::MAX
    } else {
        (1u128 << g.vertex_count()) - 1
    };
    grow(&g.adj, all, m)
}

/// A total assignment of colors `1..=color_universe` to an enumerated list
/// of copies of a pattern inside a host.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ColoringOfCopies {
    colors: Vec<usize>,
    color_universe: usize,
}

impl ColoringOfCopies {
    pub fn new(colors: Vec<usize>, color_universe: usize) -> Result<ColoringOfCopies> {
        if color_universe == 0 && !colors.is_empty() {
            return Err(Error::InvalidColorUniverse);
        }
        for &c in &colors {
            if c == 0 || c > color_universe {
                return Err(Error::ColorOutOfRange {
                    color: c,
                    n: color_universe,
                });
            }
        }
        Ok(ColoringOfCopies {
            colors,
            color_universe,
        })
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn color_universe(&self) -> usize {
        self.color_universe
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    #[test]
    fn construction_normalizes_edges() {
        let g = Graph::new(3, &[(2, 1), (0, 1), (1, 2)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert!(g.has_edge(1, 0));
        assert!(!g.has_edge(0, 2));
        assert_eq!(g.degree(1), 2);
    }

    #[test]
    fn construction_rejects_loops_and_range() {
        assert_eq!(
            Graph::new(2, &[(1, 1)]).unwrap_err(),
            Error::LoopEdge { vertex: 1 }
        );
        assert_eq!(
            Graph::new(2, &[(0, 2)]).unwrap_err(),
            Error::VertexOutOfRange {
                vertex: 2,
                vertex_count: 2
            }
        );
    }

    #[test]
    fn empty_graph_is_legal() {
        let g = Graph::new(0, &[]).unwrap();
        assert_eq!(g.vertex_count(), 0);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn induced_and_permuted_agree_on_p3() {
        let p3 = Graph::path(3);
        let sub = p3.induced(&[0, 1]);
        assert_eq!(sub.edges(), &[(0, 1)]);
        let relabeled = p3.permuted(&[2, 0, 1]);
        // Center vertex 1 becomes vertex 0 and keeps degree 2.
        assert_eq!(relabeled.degree(0), 2);
        assert_eq!(relabeled.edge_count(), 2);
    }

    #[test]
    fn proper_coloring_examples() {
        let p3 = Graph::path(3);
        let good = OrderedColoredGraph::new(p3.clone(), 2, Some(vec![1, 2, 1]), true).unwrap();
        assert!(is_proper_coloring(&good).unwrap());
        let bad = OrderedColoredGraph::new(Graph::complete(2), 2, Some(vec![1, 1]), true).unwrap();
        assert!(!is_proper_coloring(&bad).unwrap());
        let missing = OrderedColoredGraph::plain(p3, 2).unwrap();
        assert_eq!(
            is_proper_coloring(&missing).unwrap_err(),
            Error::MissingColoring
        );
    }

    #[test]
    fn monotone_examples() {
        let e2 = Graph::edgeless(2);
        let up = OrderedColoredGraph::new(e2.clone(), 2, Some(vec![1, 2]), true).unwrap();
        assert!(is_monotone(&up).unwrap());
        let down = OrderedColoredGraph::new(e2.clone(), 2, Some(vec![2, 1]), true).unwrap();
        assert!(!is_monotone(&down).unwrap());
        let unordered = OrderedColoredGraph::new(e2, 2, Some(vec![1, 2]), false).unwrap();
        assert_eq!(is_monotone(&unordered).unwrap_err(), Error::NotOrdered);
    }

    #[test]
    fn coloring_validation() {
        let e2 = Graph::edgeless(2);
        assert_eq!(
            OrderedColoredGraph::new(e2.clone(), 2, Some(vec![1]), true).unwrap_err(),
            Error::MissingColoring
        );
        assert_eq!(
            OrderedColoredGraph::new(e2.clone(), 2, Some(vec![1, 3]), true).unwrap_err(),
            Error::ColorOutOfRange { color: 3, n: 2 }
        );
        assert_eq!(
            OrderedColoredGraph::plain(e2, 0).unwrap_err(),
            Error::InvalidColorUniverse
        );
    }

    /// Oracle: check every m-subset by hand before trusting the bitset search.
    fn clique_oracle(g: &Graph, m: usize) -> bool {
        if m == 0 {
            return true;
        }
        (0..g.vertex_count()).combinations(m).any(|set| {
            set.iter()
                .tuple_combinations()
                .all(|(&a, &b)| g.has_edge(a, b))
        })
    }

    #[test]
    fn clique_detection_matches_oracle() {
        let k4 = Graph::complete(4);
        let c5 = Graph::cycle(5);
        assert!(contains_clique(&k4, 3));
        assert!(!contains_clique(&c5, 3));
        assert!(contains_clique(&c5, 1));
        assert!(!contains_clique(&Graph::edgeless(3), 2));
        for g in [&k4, &c5, &Graph::path(4), &Graph::edgeless(1)] {
            for m in 0..=g.vertex_count() + 1 {
                assert_eq!(contains_clique(g, m), clique_oracle(g, m), "m={m}");
            }
        }
    }

    #[test]
    fn multipartite_blocks() {
        // Octahedron: three parts of size two, every cross pair joined.
        let g = Graph::complete_multipartite(&[2, 2, 2]);
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 12);
        assert!(!g.has_edge(0, 1));
        assert!(g.has_edge(0, 2));
    }

    #[test]
    fn recoloring_by_permutation() {
        let g = Graph::complete(2);
        let ocg = OrderedColoredGraph::new(g, 3, Some(vec![1, 3]), true).unwrap();
        let swapped = ocg.recolored(&[3, 2, 1]).unwrap();
        assert_eq!(swapped.coloring().unwrap(), &[3, 1]);
    }

    #[test]
    fn copy_coloring_validation() {
        assert!(ColoringOfCopies::new(vec![1, 2, 1], 2).is_ok());
        assert_eq!(
            ColoringOfCopies::new(vec![1, 3], 2).unwrap_err(),
            Error::ColorOutOfRange { color: 3, n: 2 }
        );
        let empty = ColoringOfCopies::new(vec![], 0).unwrap();
        assert!(empty.is_empty());
    }
}
