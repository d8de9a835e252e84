//! Canonical forms under vertex relabeling, automorphism groups, and the
//! isomorphism predicates built on them.
//!
//! The certificate of a graph is the lexicographically minimal column-major
//! upper-triangle adjacency bit string over all relabelings. The search
//! assigns canonical positions one vertex at a time; a partial assignment
//! fixes a prefix of the bit string, so any branch whose prefix exceeds the
//! best known full string is pruned without loss. Interchangeable vertices
//! (twins, where swapping the pair is an automorphism) produce identical
//! subtrees and only the first is walked. The result is always the exact
//! minimum, never a heuristic canonical form.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::structures::{Graph, OrderedColoredGraph};

/// Canonicalization cap; 45 certificate bits at most.
pub const CANONICAL_CAP: usize = 10;
/// Full element listings stop here; above, only order and generators.
pub const AUT_LISTING_CAP: usize = 8;
/// Automorphism order cap.
pub const AUT_CAP: usize = 10;

/// Upper-triangle bit string packed most significant bit first, so numeric
/// order on `bits` is lexicographic order on the string.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Certificate {
    vertex_count: usize,
    bits: u64,
}

impl Certificate {
    /// The bit string of the graph as labeled, without canonicalizing.
    /// For ordered structures this already is the certificate.
    pub fn of_labeled(g: &Graph) -> Certificate {
        let mut bits = 0u64;
        for bit in g.upper_triangle_bits() {
            bits = bits << 1 | bit as u64;
        }
        Certificate {
            vertex_count: g.vertex_count(),
            bits,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Rebuild the graph this certificate encodes.
    pub fn to_graph(&self) -> Graph {
        let v = self.vertex_count;
        let total = v * v.saturating_sub(1) / 2;
        let mut edges = Vec::new();
        let mut t = 0;
        for i in 1..v {
            for j in 0..i {
                if self.bits >> (total - 1 - t) & 1 == 1 {
                    edges.push((j, i));
                }
                t += 1;
            }
        }
        Graph::new(v, &edges).expect("certificate encodes a valid graph")
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CanonicalForm {
    /// `relabeling[v]` is the canonical position of original vertex `v`.
    pub relabeling: Vec<usize>,
    pub certificate: Certificate,
}

fn triangular(p: usize) -> usize {
    p * p.saturating_sub(1) / 2
}

/// Swapping u and w is an automorphism iff their adjacency rows agree
/// outside the pair itself.
fn is_twin(g: &Graph, u: usize, w: usize) -> bool {
    (g.neighbors(u) & !(1 << w)) == (g.neighbors(w) & !(1 << u))
}

struct CanonSearch<'a> {
    g: &'a Graph,
    v: usize,
    total_bits: usize,
    best_bits: u64,
    best_perm: Vec<usize>,
    found: bool,
}

impl CanonSearch<'_> {
    fn column(&self, placed: &[usize], u: usize) -> u64 {
        let mut col = 0u64;
        for &q in placed {
            col = col << 1 | self.g.has_edge(q, u) as u64;
        }
        col
    }

    fn descend(&mut self, placed: &mut Vec<usize>, used: u64, prefix: u64) {
        let p = placed.len();
        if p == self.v {
            if !self.found || prefix < self.best_bits {
                self.best_bits = prefix;
                self.best_perm = placed.clone();
                self.found = true;
            }
            return;
        }
        let mut candidates: Vec<(u64, usize)> = (0..self.v)
            .filter(|&u| used >> u & 1 == 0)
            .map(|u| (self.column(placed, u), u))
            .collect();
        candidates.sort_unstable();
        let mut explored: Vec<(u64, usize)> = Vec::new();
        for &(col, u) in &candidates {
            if explored
                .iter()
                .any(|&(ec, eu)| ec == col && is_twin(self.g, eu, u))
            {
                continue;
            }
            explored.push((col, u));
            let new_prefix = prefix << p | col;
            if self.found {
                let best_prefix = self.best_bits >> (self.total_bits - triangular(p + 1));
                if new_prefix > best_prefix {
                    // Candidates are sorted, so every later column is
                    // at least this one; the whole remainder is pruned.
                    break;
                }
            }
            placed.push(u);
            self.descend(placed, used | 1 << u, new_prefix);
            placed.pop();
        }
    }
}

/// Exact lexicographic-minimum canonical form.
pub fn canonical_form(g: &Graph) -> Result<CanonicalForm> {
    let v = g.vertex_count();
    if v > CANONICAL_CAP {
        return Err(Error::SizeCapExceeded {
            what: "canonical form",
            cap: CANONICAL_CAP,
            actual: v,
        });
    }
    if v <= 1 {
        return Ok(CanonicalForm {
            relabeling: (0..v).collect(),
            certificate: Certificate {
                vertex_count: v,
                bits: 0,
            },
        });
    }
    let mut search = CanonSearch {
        g,
        v,
        total_bits: triangular(v),
        best_bits: 0,
        best_perm: Vec::new(),
        found: false,
    };
    search.descend(&mut Vec::new(), 0, 0);
    let mut relabeling = vec![0usize; v];
    for (pos, &orig) in search.best_perm.iter().enumerate() {
        relabeling[orig] = pos;
    }
    Ok(CanonicalForm {
        relabeling,
        certificate: Certificate {
            vertex_count: v,
            bits: search.best_bits,
        },
    })
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AutPerms {
    /// Every automorphism, identity included, in lexicographic order.
    Elements(Vec<Vec<usize>>),
    /// A generating set; full listings stop at `AUT_LISTING_CAP`.
    Generators(Vec<Vec<usize>>),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AutGroup {
    pub order: u64,
    pub perms: AutPerms,
}

impl AutGroup {
    /// Element list when available.
    pub fn elements(&self) -> Option<&[Vec<usize>]> {
        match &self.perms {
            AutPerms::Elements(e) => Some(e),
            AutPerms::Generators(_) => None,
        }
    }
}

fn consistent_image(g: &Graph, mapped: &[usize], u: usize, w: usize) -> bool {
    if g.degree(u) != g.degree(w) {
        return false;
    }
    mapped
        .iter()
        .enumerate()
        .all(|(q, &img)| g.has_edge(q, u) == g.has_edge(img, w))
}

fn list_automorphisms(g: &Graph) -> Vec<Vec<usize>> {
    fn go(g: &Graph, pi: &mut Vec<usize>, used: u64, out: &mut Vec<Vec<usize>>) {
        let u = pi.len();
        if u == g.vertex_count() {
            out.push(pi.clone());
            return;
        }
        for w in 0..g.vertex_count() {
            if used >> w & 1 == 0 && consistent_image(g, pi, u, w) {
                pi.push(w);
                go(g, pi, used | 1 << w, out);
                pi.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(g, &mut Vec::new(), 0, &mut out);
    out
}

/// Order-only count. Twin candidates at a node head isomorphic subtrees,
/// so one is walked and multiplied by the class size; the walked full maps
/// and the collapsing transpositions are kept as generators.
fn count_automorphisms(g: &Graph) -> (u64, Vec<Vec<usize>>) {
    fn go(g: &Graph, pi: &mut Vec<usize>, used: u64, gens: &mut BTreeSet<Vec<usize>>) -> u64 {
        let u = pi.len();
        let v = g.vertex_count();
        if u == v {
            if pi.iter().enumerate().any(|(a, &b)| a != b) {
                gens.insert(pi.clone());
            }
            return 1;
        }
        let mut total = 0u64;
        let mut reps: Vec<(usize, u64)> = Vec::new();
        for w in 0..v {
            if used >> w & 1 != 0 || !consistent_image(g, pi, u, w) {
                continue;
            }
            // Twin subtrees have equal counts by the swap bijection;
            // reuse the representative's count instead of descending again.
            if let Some(&(rep, below)) = reps.iter().find(|&&(r, _)| is_twin(g, r, w)) {
                let mut swap: Vec<usize> = (0..v).collect();
                swap[rep] = w;
                swap[w] = rep;
                gens.insert(swap);
                total += below;
                continue;
            }
            pi.push(w);
            let below = go(g, pi, used | 1 << w, gens);
            pi.pop();
            reps.push((w, below));
            total += below;
        }
        total
    }
    let mut gens = BTreeSet::new();
    let order = go(g, &mut Vec::new(), 0, &mut gens);
    (order, gens.into_iter().collect())
}

/// Automorphism group; full element listing up to `AUT_LISTING_CAP`
/// vertices, order and generators up to `AUT_CAP`.
pub fn automorphism_group(g: &Graph) -> Result<AutGroup> {
    let v = g.vertex_count();
    if v > AUT_CAP {
        return Err(Error::SizeCapExceeded {
            what: "automorphism group",
            cap: AUT_CAP,
            actual: v,
        });
    }
    if v <= AUT_LISTING_CAP {
        let elements = list_automorphisms(g);
        return Ok(AutGroup {
            order: elements.len() as u64,
            perms: AutPerms::Elements(elements),
        });
    }
    let (order, generators) = count_automorphisms(g);
    Ok(AutGroup {
        order,
        perms: AutPerms::Generators(generators),
    })
}

/// Unlabeled isomorphism through certificate equality.
pub fn are_isomorphic(a: &Graph, b: &Graph) -> Result<bool> {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return Ok(false);
    }
    let mut deg_a: Vec<usize> = (0..a.vertex_count()).map(|u| a.degree(u)).collect();
    let mut deg_b: Vec<usize> = (0..b.vertex_count()).map(|u| b.degree(u)).collect();
    deg_a.sort_unstable();
    deg_b.sort_unstable();
    if deg_a != deg_b {
        return Ok(false);
    }
    Ok(canonical_form(a)?.certificate == canonical_form(b)?.certificate)
}

/// Ordered colored isomorphism is equality of the normalized structures.
/// Structures over different color universes are never isomorphic; that
/// comparison is answered false with a warning rather than an error.
pub fn ordered_colored_isomorphic(
    a: &OrderedColoredGraph,
    b: &OrderedColoredGraph,
) -> Result<bool> {
    if !a.ordered() || !b.ordered() {
        return Err(Error::NotOrdered);
    }
    if a.n() != b.n() {
        log::warn!(
            "comparing structures over color universes {} and {}: not comparable, answering false",
            a.n(),
            b.n()
        );
        return Ok(false);
    }
    Ok(a == b)
}
