//! Exact crossing minima for a bounded number of pages.
//!
//! `table[F]` holds the one-page crossing count of every edge subset `F`;
//! the `q`-page minimum is then a min-plus subset convolution peeling one
//! page off: best over `F' <= F` of one page holding `F'` plus `q-1` pages
//! holding the rest. The convolution enumerates submask pairs directly,
//! which is Theta(3^m) per level, so instances are capped at 20 edges.
//! The page number is the first level whose full-set entry reaches zero.

use crate::error::{Error, Result};
use crate::graph::{OrderedGraph, PageAssignment};

/// Subset tables and convolutions stop at this many edges.
pub const DEFAULT_SUBSET_EDGE_LIMIT: usize = 20;

/// One-page crossing counts for every subset of the first `m` edges,
/// indexed by bitmask.
pub struct CrossingTable {
    values: Vec<u32>,
}

impl CrossingTable {
    pub fn at(&self, subset: u64) -> u32 {
        self.values[subset as usize]
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }
}

fn check_edge_budget(g: &OrderedGraph, limit: usize) -> Result<usize> {
    let m = g.edge_count();
    let cap = limit.min(DEFAULT_SUBSET_EDGE_LIMIT);
    if m > cap {
        return Err(Error::capacity("edge count", m as u64, cap as u64));
    }
    Ok(m)
}

/// Crossing count of each edge subset on a single page.
pub fn one_page_table(g: &OrderedGraph) -> Result<CrossingTable> {
    one_page_table_limited(g, DEFAULT_SUBSET_EDGE_LIMIT)
}

pub fn one_page_table_limited(g: &OrderedGraph, limit: usize) -> Result<CrossingTable> {
    let m = check_edge_budget(g, limit)?;
    let mut values = vec![0u32; 1usize << m];
    for mask in 1..values.len() {
        let e = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let new = (g.cross_set(e).0 & rest as u64).count_ones();
        values[mask] = values[rest] + new;
    }
    Ok(CrossingTable { values })
}

/// Min-plus subset convolution by direct submask enumeration:
/// `out[F] = min over F' <= F of a[F'] + b[F minus F']`.
pub fn min_plus_convolve(a: &[u32], b: &[u32]) -> Vec<u32> {
    assert_eq!(a.len(), b.len());
    let mut out = vec![u32::MAX; a.len()];
    for mask in 0..a.len() {
        let mut sub = mask;
        let mut best = u32::MAX;
        loop {
            best = best.min(a[sub].saturating_add(b[mask & !sub]));
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & mask;
        }
        out[mask] = best;
    }
    out
}

/// Minimum same-page crossing counts for 1, 2, .., `p` pages, and an
/// assignment realizing the `p`-page minimum. Levels past the edge count
/// stay at zero because singleton pages are crossing-free.
pub fn crossing_numbers_up_to(g: &OrderedGraph, p: u32) -> Result<(Vec<u64>, PageAssignment)> {
    crossing_numbers_up_to_limited(g, p, DEFAULT_SUBSET_EDGE_LIMIT)
}

pub fn crossing_numbers_up_to_limited(
    g: &OrderedGraph,
    p: u32,
    limit: usize,
) -> Result<(Vec<u64>, PageAssignment)> {
    if p < 1 {
        return Err(Error::invalid("page count must be at least 1"));
    }
    let m = check_edge_budget(g, limit)?;
    if m == 0 {
        return Ok((vec![0; p as usize], PageAssignment::empty(0, p)));
    }
    let levels = (p as usize).min(m);
    let tables = build_levels(g, levels, limit)?;
    let full = (1u64 << m) - 1;
    let mut per_page: Vec<u64> = tables.iter().map(|t| t[full as usize] as u64).collect();
    per_page.resize(p as usize, *per_page.last().unwrap());
    let witness = reconstruct(g, &tables, full, p);
    Ok((per_page, witness))
}

/// Smallest page count with zero crossings, and a crossing-free assignment.
pub fn page_number(g: &OrderedGraph) -> Result<(u32, PageAssignment)> {
    page_number_limited(g, DEFAULT_SUBSET_EDGE_LIMIT)
}

pub fn page_number_limited(g: &OrderedGraph, limit: usize) -> Result<(u32, PageAssignment)> {
    let m = check_edge_budget(g, limit)?;
    if m == 0 {
        return Ok((0, PageAssignment::empty(0, 1)));
    }
    let full = ((1u64 << m) - 1) as usize;
    let mut tables = vec![one_page_table_limited(g, limit)?.values];
    while tables.last().unwrap()[full] != 0 {
        let next = min_plus_convolve(&tables[0], tables.last().unwrap());
        tables.push(next);
    }
    let pages = tables.len() as u32;
    let witness = reconstruct(g, &tables, full as u64, pages);
    Ok((pages, witness))
}

fn build_levels(g: &OrderedGraph, levels: usize, limit: usize) -> Result<Vec<Vec<u32>>> {
    let mut tables = vec![one_page_table_limited(g, limit)?.values];
    for _ in 1..levels {
        let next = min_plus_convolve(&tables[0], tables.last().unwrap());
        tables.push(next);
    }
    Ok(tables)
}

/// Walks the level tables back down, peeling the page that realizes each
/// minimum. Ties take the numerically smallest submask, making the witness
/// a pure function of the instance.
fn reconstruct(
    g: &OrderedGraph,
    tables: &[Vec<u32>],
    full: u64,
    page_count: u32,
) -> PageAssignment {
    let mut witness = PageAssignment::empty(g.edge_count(), page_count);
    let mut remaining = full as usize;
    for level in (1..tables.len()).rev() {
        // page holding F' plus level-1 pages holding the rest
        let want = tables[level][remaining];
        let mut pick = remaining;
        let mut sub = remaining;
        loop {
            let value = tables[0][sub].saturating_add(tables[level - 1][remaining & !sub]);
            if value <= want {
                pick = sub;
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & remaining;
        }
        for e in 0..g.edge_count() {
            if pick >> e & 1 == 1 {
                witness.set_page(e, (level + 1) as u32);
            }
        }
        remaining &= !pick;
    }
    for e in 0..g.edge_count() {
        if remaining >> e & 1 == 1 {
            witness.set_page(e, 1);
        }
    }
    witness
}
