//! Greedy page assignment and the peeling bound for crowded pages.
//!
//! The greedy scheme is set cover with crossing-free pages as the sets:
//! each round takes a maximum non-crossing subset of whatever is left, so
//! the round count is within a factor ln(m)+1 of the page number. Peeling
//! turns one page where every edge has at most d crossings into at most
//! d+1 crossing-free pages, which transfers the same guarantee to layouts
//! judged by crossings per edge instead of page count.

use crate::circle_mis::max_noncrossing_subset;
use crate::error::{Error, Result};
use crate::graph::{OrderedGraph, PageAssignment};
use crate::subset::EdgeSubset;

/// Crossing-free pages covering all edges, each a maximum non-crossing
/// subset of the edges still unplaced when it is formed. The page count is
/// at most ln(m)+1 times the page number.
pub fn greedy_pages(g: &OrderedGraph) -> Vec<EdgeSubset> {
    let mut pages = Vec::new();
    let mut remaining = g.all_edges();
    while !remaining.is_empty() {
        let page = max_noncrossing_subset(g, remaining);
        remaining = remaining - page;
        pages.push(page);
    }
    pages
}

/// Splits a page where every edge has at most `d` same-page crossings into
/// at most `d+1` crossing-free pages. Each round removes a maximal
/// non-crossing set among the busiest edges; maximality knocks every other
/// busiest edge down a crossing, so the bound drops by one per round.
pub fn split_d_planar_page(
    g: &OrderedGraph,
    page: EdgeSubset,
    d: u32,
) -> Result<Vec<EdgeSubset>> {
    for e in page.iter() {
        let load = g.cross_set_in(e, page).len() as u32;
        if load > d {
            let (u, v) = g.endpoints(e);
            return Err(Error::invalid(format!(
                "edge ({u}, {v}) has {load} same-page crossings, more than d = {d}"
            )));
        }
    }
    let mut out = Vec::new();
    let mut rest = page;
    for level in (1..=d).rev() {
        let busiest: Vec<usize> = rest
            .iter()
            .filter(|&e| g.cross_set_in(e, rest).len() as u32 == level)
            .collect();
        let mut peeled = EdgeSubset::EMPTY;
        for e in busiest {
            if (g.cross_set(e) & peeled).is_empty() {
                peeled.insert(e);
            }
        }
        if !peeled.is_empty() {
            out.push(peeled);
            rest = rest - peeled;
        }
    }
    if !rest.is_empty() {
        out.push(rest);
    }
    debug_assert!(out.len() <= d as usize + 1);
    Ok(out)
}

/// Crossing-free greedy layout, packaged as an assignment. The result is
/// trivially d-planar for every `d`; the parameter enters only the quality
/// guarantee, which peeling stretches to (d+1) times the best page count
/// among layouts allowed `d` crossings per edge, times ln(m)+1.
pub fn d_planar_pages_approx(g: &OrderedGraph, d: u32) -> PageAssignment {
    let pages = greedy_pages(g);
    let mut out = PageAssignment::empty(g.edge_count(), pages.len().max(1) as u32);
    for (i, page) in pages.iter().enumerate() {
        for e in page.iter() {
            out.set_page(e, i as u32 + 1);
        }
    }
    debug_assert!(g.is_d_planar(&out, d));
    out
}
