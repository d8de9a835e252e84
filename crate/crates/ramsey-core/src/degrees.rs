//! Extension catalogs and the degree quantities they count.
//!
//! sigma(x, n) counts the pairwise non-isomorphic ways an ordered graph x
//! expands to a properly colored ordered graph over colors 1..=n; order
//! rigidity makes that exactly the set of proper colorings. tau(x, n)
//! counts expansions of an unordered x by an order plus a monotone proper
//! coloring, up to isomorphism of x. Two independent routes compute tau:
//! generation with deduplication, and the orbit-counting average over the
//! automorphism group. They must agree and are never merged.

use itertools::Itertools;
use std::collections::BTreeSet;

use crate::canonical::{automorphism_group, Certificate, AUT_CAP};
use crate::classes::{monotone_proper_colorings, proper_colorings, ClassKind, ClassSpec};
use crate::error::{Error, Result};
use crate::structures::{Graph, OrderedColoredGraph};

/// Ordered catalogs hold one item per proper coloring.
pub const ORDERED_EXTENSION_CAP: usize = 10;
/// Monotone catalogs sweep all vertex orders.
pub const MONOTONE_EXTENSION_CAP: usize = 7;

/// Exhaustive list of the pairwise non-isomorphic expansions of a base
/// structure into a target class, indexed 1..=len in a deterministic order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtensionCatalog {
    base: OrderedColoredGraph,
    target: ClassSpec,
    items: Vec<OrderedColoredGraph>,
}

impl ExtensionCatalog {
    pub fn base(&self) -> &OrderedColoredGraph {
        &self.base
    }

    pub fn target(&self) -> &ClassSpec {
        &self.target
    }

    pub fn items(&self) -> &[OrderedColoredGraph] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// 1-based index of a normalized item.
    pub fn index_of(&self, item: &OrderedColoredGraph) -> Option<usize> {
        self.items
            .binary_search_by(|probe| catalog_key(probe).cmp(&catalog_key(item)))
            .ok()
            .map(|i| i + 1)
    }
}

fn catalog_key(item: &OrderedColoredGraph) -> (Certificate, Option<Vec<usize>>) {
    (
        Certificate::of_labeled(item.graph()),
        item.coloring().map(|c| c.to_vec()),
    )
}

/// All expansions of the ordered graph x by a proper coloring into 1..=n,
/// in lexicographic color-sequence order. An empty catalog means x is not
/// n-colorable; that is answered with a warning, not an error.
pub fn enumerate_extensions_ordered(x: &Graph, n: usize) -> Result<ExtensionCatalog> {
    if n == 0 {
        return Err(Error::InvalidColorUniverse);
    }
    if x.vertex_count() > ORDERED_EXTENSION_CAP {
        return Err(Error::SizeCapExceeded {
            what: "ordered extension catalog",
            cap: ORDERED_EXTENSION_CAP,
            actual: x.vertex_count(),
        });
    }
    let items: Vec<OrderedColoredGraph> = proper_colorings(x, n)
        .into_iter()
        .map(|colors| OrderedColoredGraph::new(x.clone(), n, Some(colors), true))
        .collect::<Result<_>>()?;
    if items.is_empty() {
        log::warn!("base graph is not {n}-colorable; ordered extension catalog is empty");
    }
    Ok(ExtensionCatalog {
        base: OrderedColoredGraph::with_order(x.clone(), n)?,
        target: ClassSpec::new(ClassKind::ColoredOrdered, n)?,
        items,
    })
}

/// Number of proper colorings of the ordered graph x over 1..=n.
pub fn sigma(x: &Graph, n: usize) -> Result<usize> {
    Ok(enumerate_extensions_ordered(x, n)?.len())
}

/// All expansions of the unordered graph x by a vertex order and a
/// monotone proper coloring, deduplicated across the automorphism action.
/// Items are normalized so the order is the vertex index order.
pub fn enumerate_extensions_monotone(x: &Graph, n: usize) -> Result<ExtensionCatalog> {
    if n == 0 {
        return Err(Error::InvalidColorUniverse);
    }
    let v = x.vertex_count();
    if v > MONOTONE_EXTENSION_CAP {
        return Err(Error::SizeCapExceeded {
            what: "monotone extension catalog",
            cap: MONOTONE_EXTENSION_CAP,
            actual: v,
        });
    }
    let mut distinct: BTreeSet<(Certificate, Vec<usize>, Graph)> = BTreeSet::new();
    for perm in (0..v).permutations(v) {
        // perm lists vertices in order; rank sends a vertex to its position.
        let mut rank = vec![0usize; v];
        for (pos, &orig) in perm.iter().enumerate() {
            rank[orig] = pos;
        }
        let relabeled = x.permuted(&rank);
        for colors in monotone_proper_colorings(&relabeled, n) {
            distinct.insert((
                Certificate::of_labeled(&relabeled),
                colors,
                relabeled.clone(),
            ));
        }
    }
    let items: Vec<OrderedColoredGraph> = distinct
        .into_iter()
        .map(|(_, colors, g)| OrderedColoredGraph::new(g, n, Some(colors), true))
        .collect::<Result<_>>()?;
    if items.is_empty() && v > 0 {
        log::warn!("base graph is not {n}-colorable; monotone extension catalog is empty");
    }
    Ok(ExtensionCatalog {
        base: OrderedColoredGraph::plain(x.clone(), n)?,
        target: ClassSpec::new(ClassKind::MonotoneColoredOrdered, n)?,
        items,
    })
}

/// Number of monotone expansions of x up to isomorphism, by generation
/// plus deduplication.
pub fn tau(x: &Graph, n: usize) -> Result<usize> {
    Ok(enumerate_extensions_monotone(x, n)?.len())
}

/// Independent route to tau: the orbit-counting average of fixed
/// (order, coloring) pairs over the automorphism group of x.
pub fn tau_burnside(x: &Graph, n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::InvalidColorUniverse);
    }
    let v = x.vertex_count();
    if v > MONOTONE_EXTENSION_CAP {
        return Err(Error::SizeCapExceeded {
            what: "orbit-count tau",
            cap: MONOTONE_EXTENSION_CAP,
            actual: v,
        });
    }
    let group = automorphism_group(x)?;
    let elements = group
        .elements()
        .expect("listing cap covers the monotone extension cap");
    let mut fixed_total: u64 = 0;
    for perm in (0..v).permutations(v) {
        let mut rank = vec![0usize; v];
        for (pos, &orig) in perm.iter().enumerate() {
            rank[orig] = pos;
        }
        let relabeled = x.permuted(&rank);
        for colors in monotone_proper_colorings(&relabeled, n) {
            // Coloring pulled back to the original vertex names.
            let on_original: Vec<usize> = (0..v).map(|u| colors[rank[u]]).collect();
            for phi in elements {
                let order_fixed = perm.iter().all(|&u| phi[u] == u);
                let coloring_fixed = (0..v).all(|u| on_original[phi[u]] == on_original[u]);
                if order_fixed && coloring_fixed {
                    fixed_total += 1;
                }
            }
        }
    }
    if group.order == 0 {
        return Ok(0);
    }
    debug_assert_eq!(fixed_total % group.order, 0, "orbit count must be integral");
    Ok((fixed_total / group.order) as usize)
}

fn factorial(v: usize) -> u64 {
    (1..=v as u64).product()
}

fn binomial(n: usize, m: usize) -> u64 {
    if m > n {
        return 0;
    }
    let mut result = 1u64;
    for i in 0..m {
        result = result * (n - i) as u64 / (i + 1) as u64;
    }
    result
}

/// vertex_count! / |Aut(x)|, the number of distinct orderings of x up to
/// isomorphism.
pub fn aut_degree(x: &Graph) -> Result<u64> {
    let v = x.vertex_count();
    if v > AUT_CAP {
        return Err(Error::SizeCapExceeded {
            what: "order-expansion degree",
            cap: AUT_CAP,
            actual: v,
        });
    }
    let order = automorphism_group(x)?.order;
    let total = factorial(v);
    debug_assert_eq!(total % order, 0, "group order divides the factorial");
    Ok(total / order)
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Quantity {
    Sigma,
    Tau,
}

impl Quantity {
    fn name(&self) -> &'static str {
        match self {
            Quantity::Sigma => "sigma",
            Quantity::Tau => "tau",
        }
    }
}

/// One row of the closed-form comparison table.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ElementaryRow {
    pub quantity: Quantity,
    /// Number of parts m in the complete multipartite base.
    pub parts: usize,
    /// Common part size l; l = 1 gives the complete graph K_m.
    pub part_size: usize,
    pub vertex_count: usize,
    pub closed_form: u64,
    pub enumerated: u64,
    pub discrepancy: bool,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ElementaryReport {
    pub n: usize,
    pub rows: Vec<ElementaryRow>,
}

impl ElementaryReport {
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("quantity\tm\tl\tvertices\tclosed_form\tenumerated\tstatus\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                row.quantity.name(),
                row.parts,
                row.part_size,
                row.vertex_count,
                row.closed_form,
                row.enumerated,
                if row.discrepancy {
                    "DISCREPANCY"
                } else {
                    "AGREE"
                }
            ));
        }
        out
    }
}

/// Closed-form predictions against enumeration for complete multipartite
/// bases: sigma is predicted as C(n,m) (lm)!, tau as C(n,m). Disagreeing
/// rows are flagged, never reconciled; enumeration is the ground truth.
pub fn elementary_report(n: usize, max_m: usize, max_l: usize) -> Result<ElementaryReport> {
    if n == 0 {
        return Err(Error::InvalidColorUniverse);
    }
    let mut rows = Vec::new();
    for m in 1..=max_m {
        for l in 1..=max_l {
            let base = Graph::complete_multipartite(&vec![l; m]);
            let v = base.vertex_count();
            let sigma_closed = binomial(n, m) * factorial(l * m);
            let sigma_enum = sigma(&base, n)? as u64;
            rows.push(ElementaryRow {
                quantity: Quantity::Sigma,
                parts: m,
                part_size: l,
                vertex_count: v,
                closed_form: sigma_closed,
                enumerated: sigma_enum,
                discrepancy: sigma_closed != sigma_enum,
            });
            let tau_closed = binomial(n, m);
            let tau_enum = tau(&base, n)? as u64;
            rows.push(ElementaryRow {
                quantity: Quantity::Tau,
                parts: m,
                part_size: l,
                vertex_count: v,
                closed_form: tau_closed,
                enumerated: tau_enum,
                discrepancy: tau_closed != tau_enum,
            });
        }
    }
    Ok(ElementaryReport { n, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordered_catalog_for_an_edge() {
        let catalog = enumerate_extensions_ordered(&Graph::complete(2), 2).unwrap();
        let colorings: Vec<&[usize]> = catalog
            .items()
            .iter()
            .map(|item| item.coloring().unwrap())
            .collect();
        assert_eq!(colorings, vec![&[1, 2][..], &[2, 1][..]]);
        assert_eq!(catalog.index_of(catalog.items().first().unwrap()), Some(1));
    }

    #[test]
    fn sigma_known_values() {
        assert_eq!(sigma(&Graph::complete(1), 3).unwrap(), 3);
        assert_eq!(sigma(&Graph::edgeless(2), 3).unwrap(), 9);
        assert_eq!(sigma(&Graph::complete(3), 3).unwrap(), 6);
        assert_eq!(sigma(&Graph::complete(3), 2).unwrap(), 0);
        assert_eq!(sigma(&Graph::path(3), 2).unwrap(), 2);
        assert_eq!(sigma(&Graph::edgeless(0), 4).unwrap(), 1);
    }

    /// Oracle: count by scanning all n^v assignments, no backtracking.
    fn sigma_oracle(g: &Graph, n: usize) -> usize {
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
    fn sigma_matches_exhaustive_count() {
        for g in [
            Graph::path(4),
            Graph::cycle(4),
            Graph::cycle(5),
            Graph::complete(4),
            Graph::complete_multipartite(&[2, 2]),
        ] {
            for n in 1..=3 {
                assert_eq!(sigma(&g, n).unwrap(), sigma_oracle(&g, n), "n={n}");
            }
        }
    }

    #[test]
    fn sigma_is_monotone_in_n_and_at_least_two_with_an_edge() {
        for g in [Graph::complete(2), Graph::path(3), Graph::cycle(5)] {
            let mut prev = 0;
            for n in 1..=4 {
                let s = sigma(&g, n).unwrap();
                assert!(s >= prev);
                prev = s;
                if n >= 2 && g.edge_count() > 0 {
                    assert!(s >= 2 || s == 0);
                }
            }
        }
        // With at least one edge and n >= 2, a proper coloring can always
        // be recolored by swapping two colors, so sigma is never 1.
        assert!(sigma(&Graph::complete(2), 2).unwrap() >= 2);
    }

    #[test]
    fn monotone_catalog_for_an_edge() {
        let catalog = enumerate_extensions_monotone(&Graph::complete(2), 3).unwrap();
        let colorings: Vec<&[usize]> = catalog
            .items()
            .iter()
            .map(|item| item.coloring().unwrap())
            .collect();
        assert_eq!(colorings, vec![&[1, 2][..], &[1, 3][..], &[2, 3][..]]);
    }

    #[test]
    fn tau_known_values() {
        assert_eq!(tau(&Graph::complete(1), 2).unwrap(), 2);
        assert_eq!(tau(&Graph::complete(2), 3).unwrap(), 3);
        assert_eq!(tau(&Graph::complete(3), 3).unwrap(), 1);
        assert_eq!(tau(&Graph::edgeless(2), 2).unwrap(), 3);
        assert_eq!(tau(&Graph::path(3), 2).unwrap(), 2);
        assert_eq!(tau(&Graph::complete_multipartite(&[2, 2]), 2).unwrap(), 1);
        assert_eq!(tau(&Graph::complete(3), 2).unwrap(), 0);
    }

    #[test]
    fn tau_agrees_with_orbit_counting_on_small_graphs() {
        let mut graphs = vec![Graph::edgeless(0)];
        for v in 1..=4 {
            // All labeled graphs on v vertices; duplication across
            // isomorphism classes only strengthens the comparison.
            let mut pairs = Vec::new();
            for a in 0..v {
                for b in (a + 1)..v {
                    pairs.push((a, b));
                }
            }
            for mask in 0u64..1 << pairs.len() {
                let edges: Vec<(usize, usize)> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &e)| e)
                    .collect();
                graphs.push(Graph::new(v, &edges).unwrap());
            }
        }
        for g in &graphs {
            for n in 1..=3 {
                assert_eq!(
                    tau(g, n).unwrap(),
                    tau_burnside(g, n).unwrap(),
                    "graph {:?} n={n}",
                    g.edges()
                );
            }
        }
    }

    #[test]
    fn monotone_items_are_monotone_and_proper() {
        use crate::structures::{is_monotone, is_proper_coloring};
        let catalog = enumerate_extensions_monotone(&Graph::path(4), 3).unwrap();
        assert!(!catalog.is_empty());
        for item in catalog.items() {
            assert!(is_proper_coloring(item).unwrap());
            assert!(is_monotone(item).unwrap());
        }
    }

    #[test]
    fn aut_degree_known_values() {
        assert_eq!(aut_degree(&Graph::complete(4)).unwrap(), 1);
        assert_eq!(aut_degree(&Graph::path(3)).unwrap(), 3);
        assert_eq!(aut_degree(&Graph::cycle(5)).unwrap(), 12);
        assert_eq!(aut_degree(&Graph::edgeless(0)).unwrap(), 1);
    }

    #[test]
    fn elementary_report_flags_the_multipartite_rows() {
        let report = elementary_report(3, 2, 2).unwrap();
        let row = |q: Quantity, m: usize, l: usize| {
            report
                .rows
                .iter()
                .find(|r| r.quantity == q && r.parts == m && r.part_size == l)
                .unwrap()
        };
        // Complete graphs: closed forms hold.
        let k1 = row(Quantity::Sigma, 1, 1);
        assert_eq!(
            (k1.closed_form, k1.enumerated, k1.discrepancy),
            (3, 3, false)
        );
        let k2 = row(Quantity::Sigma, 2, 1);
        assert_eq!(
            (k2.closed_form, k2.enumerated, k2.discrepancy),
            (6, 6, false)
        );
        // Edgeless pair: prediction 6, enumeration 9.
        let pair = row(Quantity::Sigma, 1, 2);
        assert_eq!(
            (pair.closed_form, pair.enumerated, pair.discrepancy),
            (6, 9, true)
        );
        let pair_tau = row(Quantity::Tau, 1, 2);
        assert_eq!(pair_tau.closed_form, 3);
        assert_eq!(pair_tau.enumerated, 6);
        assert!(pair_tau.discrepancy);
        let tsv = report.to_tsv();
        assert!(tsv.contains("sigma\t1\t2\t2\t6\t9\tDISCREPANCY"));
        assert!(tsv.contains("sigma\t2\t1\t2\t6\t6\tAGREE"));
    }

    #[test]
    fn caps_are_enforced() {
        assert!(matches!(
            enumerate_extensions_monotone(&Graph::edgeless(8), 2).unwrap_err(),
            Error::SizeCapExceeded { .. }
        ));
        assert!(matches!(
            enumerate_extensions_ordered(&Graph::edgeless(11), 2).unwrap_err(),
            Error::SizeCapExceeded { .. }
        ));
        assert!(matches!(
            aut_degree(&Graph::edgeless(11)).unwrap_err(),
            Error::SizeCapExceeded { .. }
        ));
    }
}
