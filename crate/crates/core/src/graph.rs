//! Graphs with a fixed vertex order along a spine.
//!
//! Vertices are spine positions `1..=n`. An edge is an open interval `(u, v)`
//! with `u < v`; how a pair of edges relates is decided entirely by their
//! endpoints:
//!
//! * they *cross* when the endpoints strictly interleave,
//! * one *contains* the other when one open interval encloses the other
//!   (shared endpoints allowed),
//! * otherwise the intervals are disjoint or merely touch.
//!
//! Exactly one of the three holds for any pair of distinct edges. Edge
//! indices are assigned at construction and never change; every other module
//! speaks in terms of these indices via [`EdgeSubset`].

use crate::error::{Error, Result};
use crate::subset::{EdgeSubset, MAX_EDGES};

#[derive(Clone, PartialEq, Eq)]
pub struct OrderedGraph {
    n: u32,
    edges: Vec<(u32, u32)>,
    cross: Vec<EdgeSubset>,
}

impl OrderedGraph {
    /// Builds a graph on spine positions `1..=n`. Endpoint pairs are
    /// normalized to `u < v`; self-loops, out-of-range endpoints and
    /// duplicate edges are rejected.
    pub fn new(n: u32, raw_edges: &[(u32, u32)]) -> Result<Self> {
        if raw_edges.len() > MAX_EDGES {
            return Err(Error::capacity(
                "edge count",
                raw_edges.len() as u64,
                MAX_EDGES as u64,
            ));
        }
        let mut edges = Vec::with_capacity(raw_edges.len());
        for &(a, b) in raw_edges {
            let (u, v) = if a <= b { (a, b) } else { (b, a) };
            if u == v {
                return Err(Error::invalid(format!("self-loop at vertex {u}")));
            }
            if u < 1 || v > n {
                return Err(Error::invalid(format!(
                    "edge ({a}, {b}) outside spine 1..={n}"
                )));
            }
            if edges.contains(&(u, v)) {
                return Err(Error::invalid(format!("duplicate edge ({u}, {v})")));
            }
            edges.push((u, v));
        }
        let cross = cross_masks(&edges);
        Ok(OrderedGraph { n, edges, cross })
    }

    /// Complete graph on `1..=n` with edges in lexicographic order.
    pub fn complete(n: u32) -> Result<Self> {
        let mut edges = Vec::new();
        for u in 1..=n {
            for v in u + 1..=n {
                edges.push((u, v));
            }
        }
        OrderedGraph::new(n, &edges)
    }

    pub fn vertex_count(&self) -> u32 {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn endpoints(&self, e: usize) -> (u32, u32) {
        self.edges[e]
    }

    pub fn all_edges(&self) -> EdgeSubset {
        EdgeSubset::full(self.edges.len())
    }

    /// True when the endpoints strictly interleave: u < u' < v < v'.
    pub fn crosses(&self, e: usize, f: usize) -> bool {
        self.cross[e].contains(f)
    }

    /// True when the open interval of `e` encloses the open interval of `f`.
    /// Shared endpoints are allowed, so (1,4) contains both (2,3) and (1,3).
    pub fn contains(&self, e: usize, f: usize) -> bool {
        let (u, v) = self.edges[e];
        let (a, b) = self.edges[f];
        e != f && u <= a && b <= v
    }

    /// Edges crossing `e`.
    pub fn cross_set(&self, e: usize) -> EdgeSubset {
        self.cross[e]
    }

    /// Edges other than `e` lying inside the closed interval of `e`.
    pub fn span_set(&self, e: usize) -> EdgeSubset {
        let (u, v) = self.edges[e];
        let mut s = EdgeSubset::EMPTY;
        for (f, &(a, b)) in self.edges.iter().enumerate() {
            if f != e && u <= a && b <= v {
                s.insert(f);
            }
        }
        s
    }

    /// Edges whose right endpoint is at or before spine position `w`.
    pub fn left_set(&self, w: u32) -> EdgeSubset {
        let mut s = EdgeSubset::EMPTY;
        for (f, &(_, b)) in self.edges.iter().enumerate() {
            if b <= w {
                s.insert(f);
            }
        }
        s
    }

    /// Edges not lying in the span of any other edge.
    pub fn maximal_edges(&self) -> EdgeSubset {
        self.maximal_edges_in(self.all_edges())
    }

    /// Maximality relative to a sub-collection of edges.
    pub fn maximal_edges_in(&self, alive: EdgeSubset) -> EdgeSubset {
        let mut s = EdgeSubset::EMPTY;
        'outer: for e in alive.iter() {
            for f in alive.iter() {
                if f != e && self.contains(f, e) {
                    continue 'outer;
                }
            }
            s.insert(e);
        }
        s
    }

    /// Same-page crossing partners of every non-deleted edge must number at
    /// most `d`.
    pub fn is_d_planar(&self, assignment: &PageAssignment, d: u32) -> bool {
        assert_eq!(assignment.len(), self.edges.len());
        for e in 0..self.edges.len() {
            let Some(q) = assignment.page_of(e) else {
                continue;
            };
            let mut load = 0;
            for f in self.cross[e].iter() {
                if assignment.page_of(f) == Some(q) {
                    load += 1;
                    if load > d {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Number of same-page crossing pairs among non-deleted edges.
    pub fn crossing_count(&self, assignment: &PageAssignment) -> u64 {
        assert_eq!(assignment.len(), self.edges.len());
        let mut total = 0;
        for (e, f) in self.crossing_pairs() {
            if let (Some(p), Some(q)) = (assignment.page_of(e), assignment.page_of(f)) {
                if p == q {
                    total += 1;
                }
            }
        }
        total
    }

    /// All crossing pairs (e, f) with e < f, in lexicographic order.
    pub fn crossing_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for e in 0..self.edges.len() {
            for f in self.cross[e].iter() {
                if e < f {
                    pairs.push((e, f));
                }
            }
        }
        pairs
    }

    /// Crossing partners of `e` restricted to a sub-collection.
    pub fn cross_set_in(&self, e: usize, alive: EdgeSubset) -> EdgeSubset {
        self.cross[e] & alive
    }

    /// The subgraph keeping exactly the edges in `keep`, on the same spine.
    /// Returns the new graph and, per new edge index, the old index.
    pub fn subgraph(&self, keep: EdgeSubset) -> (OrderedGraph, Vec<usize>) {
        let back: Vec<usize> = keep.iter().collect();
        let edges: Vec<(u32, u32)> = back.iter().map(|&e| self.edges[e]).collect();
        let cross = cross_masks(&edges);
        (
            OrderedGraph {
                n: self.n,
                edges,
                cross,
            },
            back,
        )
    }

    /// Looks an edge up by its endpoints.
    pub fn edge_index(&self, u: u32, v: u32) -> Option<usize> {
        let key = if u <= v { (u, v) } else { (v, u) };
        self.edges.iter().position(|&p| p == key)
    }
}

impl std::fmt::Debug for OrderedGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "OrderedGraph(n={}, edges={:?})", self.n, self.edges)
    }
}

fn cross_masks(edges: &[(u32, u32)]) -> Vec<EdgeSubset> {
    let mut cross = vec![EdgeSubset::EMPTY; edges.len()];
    for (e, &(u, v)) in edges.iter().enumerate() {
        for (f, &(a, b)) in edges.iter().enumerate() {
            if u < a && a < v && v < b {
                cross[e].insert(f);
                cross[f].insert(e);
            }
        }
    }
    cross
}

/// Assignment of every edge to one of `page_count` pages (1-based) or to the
/// deleted pool.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PageAssignment {
    placement: Vec<Option<u32>>,
    page_count: u32,
}

impl PageAssignment {
    /// All `m` edges on page 1.
    pub fn single_page(m: usize) -> Self {
        PageAssignment {
            placement: vec![Some(1); m],
            page_count: 1,
        }
    }

    /// All `m` edges deleted.
    pub fn empty(m: usize, page_count: u32) -> Self {
        PageAssignment {
            placement: vec![None; m],
            page_count,
        }
    }

    pub fn page_count(&self) -> u32 {
        self.page_count
    }

    pub fn len(&self) -> usize {
        self.placement.len()
    }

    pub fn is_empty(&self) -> bool {
        self.placement.is_empty()
    }

    /// `None` means deleted.
    pub fn page_of(&self, e: usize) -> Option<u32> {
        self.placement[e]
    }

    pub fn set_page(&mut self, e: usize, page: u32) {
        assert!(page >= 1 && page <= self.page_count);
        self.placement[e] = Some(page);
    }

    pub fn delete(&mut self, e: usize) {
        self.placement[e] = None;
    }

    pub fn deleted(&self) -> EdgeSubset {
        (0..self.placement.len())
            .filter(|&e| self.placement[e].is_none())
            .collect()
    }

    pub fn edges_on_page(&self, page: u32) -> EdgeSubset {
        (0..self.placement.len())
            .filter(|&e| self.placement[e] == Some(page))
            .collect()
    }
}
