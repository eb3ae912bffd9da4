//! Exhaustive reference solvers.
//!
//! Every optimizing routine in this crate is checked against one of these.
//! They enumerate the whole search space and share nothing with the solvers
//! except the graph types and the pairwise predicates, so agreement is
//! meaningful. They are deliberately small and slow; calls beyond the fixed
//! instance bounds are rejected rather than attempted.

use crate::error::{Error, Result};
use crate::graph::{OrderedGraph, PageAssignment};
use crate::subset::EdgeSubset;
use crate::tracks::{layout_crossings, TrackInstance, TrackLayout};

/// Largest edge count any graph oracle accepts.
pub const ORACLE_MAX_EDGES: usize = 12;
/// Largest movable-vertex count the track oracle accepts.
pub const ORACLE_MAX_TRACK_VERTICES: u32 = 8;

const MAX_ASSIGNMENTS: u64 = 20_000_000;

fn check_graph_bound(g: &OrderedGraph) -> Result<()> {
    if g.edge_count() > ORACLE_MAX_EDGES {
        return Err(Error::capacity(
            "oracle edge count",
            g.edge_count() as u64,
            ORACLE_MAX_EDGES as u64,
        ));
    }
    Ok(())
}

/// Minimum number of same-page crossings over every assignment of all edges
/// to exactly `p` pages, by full enumeration.
pub fn oracle_min_crossings(g: &OrderedGraph, p: u32) -> Result<u64> {
    check_graph_bound(g)?;
    if p < 1 {
        return Err(Error::invalid("page count must be at least 1"));
    }
    let m = g.edge_count();
    let total = (p as u64)
        .checked_pow(m as u32)
        .filter(|&t| t <= MAX_ASSIGNMENTS)
        .ok_or_else(|| Error::capacity("oracle assignment count", u64::MAX, MAX_ASSIGNMENTS))?;
    let pairs = g.crossing_pairs();
    let mut pages = vec![1u32; m];
    let mut best = u64::MAX;
    for _ in 0..total {
        let crossings = pairs
            .iter()
            .filter(|&&(e, f)| pages[e] == pages[f])
            .count() as u64;
        best = best.min(crossings);
        // next assignment in base-p counter order
        for slot in pages.iter_mut() {
            if *slot < p {
                *slot += 1;
                break;
            }
            *slot = 1;
        }
    }
    if m == 0 {
        best = 0;
    }
    Ok(best)
}

/// Depth-first search over page assignments of `kept`, abandoning prefixes
/// where some edge already exceeds `d` same-page crossings. Complete: it
/// declares infeasible only after covering the whole space.
fn assignable(g: &OrderedGraph, kept: &[usize], p: u32, d: u32) -> Option<PageAssignment> {
    if p == 1 {
        // only one assignment exists
        for &e in kept {
            let mut load = 0;
            for f in kept {
                if g.crosses(e, *f) {
                    load += 1;
                }
            }
            if load > d {
                return None;
            }
        }
        let mut a = PageAssignment::empty(g.edge_count(), 1);
        for &e in kept {
            a.set_page(e, 1);
        }
        return Some(a);
    }
    let mut pages = vec![0u32; kept.len()];
    fn rec(
        g: &OrderedGraph,
        kept: &[usize],
        pages: &mut Vec<u32>,
        at: usize,
        p: u32,
        d: u32,
    ) -> bool {
        if at == kept.len() {
            return true;
        }
        'page: for q in 1..=p {
            pages[at] = q;
            // same-page crossing load of the new edge and its partners
            let mut load = 0;
            for i in 0..at {
                if pages[i] == q && g.crosses(kept[at], kept[i]) {
                    load += 1;
                    let partner = (0..=at)
                        .filter(|&j| pages[j] == q && g.crosses(kept[i], kept[j]))
                        .count() as u32;
                    if partner > d {
                        continue 'page;
                    }
                }
            }
            if load > d {
                continue 'page;
            }
            if rec(g, kept, pages, at + 1, p, d) {
                return true;
            }
        }
        pages[at] = 0;
        false
    }
    if rec(g, kept, &mut pages, 0, p, d) {
        let mut a = PageAssignment::empty(g.edge_count(), p);
        for (i, &e) in kept.iter().enumerate() {
            a.set_page(e, pages[i]);
        }
        Some(a)
    } else {
        None
    }
}

/// Smallest number of edges whose removal lets the rest be assigned to `p`
/// pages with at most `d` same-page crossings per edge. Deletion sets are
/// tried in increasing size, so the first feasible size is the answer.
pub fn oracle_min_deletion(g: &OrderedGraph, p: u32, d: u32) -> Result<u64> {
    check_graph_bound(g)?;
    if p < 1 {
        return Err(Error::invalid("page count must be at least 1"));
    }
    let m = g.edge_count();
    for size in 0..=m {
        for mask in 0u64..(1u64 << m) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let kept: Vec<usize> = (0..m).filter(|&e| mask >> e & 1 == 0).collect();
            if assignable(g, &kept, p, d).is_some() {
                return Ok(size as u64);
            }
        }
    }
    unreachable!("deleting every edge is always feasible");
}

/// Maximum pairwise non-crossing subset of `candidates` by full enumeration.
/// Ties resolve to the lexicographically smallest sorted index sequence.
pub fn oracle_max_noncrossing(g: &OrderedGraph, candidates: EdgeSubset) -> Result<EdgeSubset> {
    let pool: Vec<usize> = candidates.iter().collect();
    if pool.len() > 20 {
        return Err(Error::capacity(
            "oracle candidate count",
            pool.len() as u64,
            20,
        ));
    }
    let mut best = EdgeSubset::EMPTY;
    for mask in 0u64..(1u64 << pool.len()) {
        let mut subset = EdgeSubset::EMPTY;
        for (i, &e) in pool.iter().enumerate() {
            if mask >> i & 1 == 1 {
                subset.insert(e);
            }
        }
        let independent = subset.iter().all(|e| (g.cross_set(e) & subset).is_empty());
        if !independent {
            continue;
        }
        if subset.len() > best.len() || (subset.len() == best.len() && lex_smaller(subset, best)) {
            best = subset;
        }
    }
    Ok(best)
}

/// True when `a`'s sorted index sequence precedes `b`'s lexicographically.
fn lex_smaller(a: EdgeSubset, b: EdgeSubset) -> bool {
    let diff = a.0 ^ b.0;
    if diff == 0 {
        return false;
    }
    a.0 >> diff.trailing_zeros() & 1 == 1
}

/// Smallest vertex set of size at most `k` whose removal leaves every
/// remaining vertex of the graph given by adjacency masks with degree at
/// most `d`, by size-ascending subset enumeration. `None` when no such set
/// exists within the budget.
pub fn oracle_degree_deletion(
    adj: &[EdgeSubset],
    d: u32,
    k: u32,
) -> Result<Option<EdgeSubset>> {
    let n = adj.len();
    let mut budget = 5_000_000u64;
    let fits = |removed: EdgeSubset| {
        (0..n).all(|v| removed.contains(v) || (adj[v] - removed).len() as u32 <= d)
    };
    for size in 0..=(k as usize).min(n) {
        let mut picks: Vec<usize> = (0..size).collect();
        loop {
            budget = budget.checked_sub(1).ok_or_else(|| {
                Error::capacity("oracle deletion candidates", 5_000_001, 5_000_000)
            })?;
            let removed: EdgeSubset = picks.iter().copied().collect();
            if fits(removed) {
                return Ok(Some(removed));
            }
            if !next_combination(&mut picks, n) {
                break;
            }
        }
    }
    Ok(None)
}

/// Advances `picks` to the next combination of its length drawn from
/// `0..n`, in lexicographic order. False once the last one has been seen.
fn next_combination(picks: &mut [usize], n: usize) -> bool {
    let size = picks.len();
    let mut i = size;
    while i > 0 {
        i -= 1;
        if picks[i] < n - size + i {
            picks[i] += 1;
            for j in i + 1..size {
                picks[j] = picks[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Minimum crossings over every partition of the movable vertices into at
/// most `t` tracks and every per-track order, by full enumeration.
pub fn oracle_track_crossings(inst: &TrackInstance, t: u32) -> Result<u64> {
    let b = inst.track_vertex_count();
    if b > ORACLE_MAX_TRACK_VERTICES {
        return Err(Error::capacity(
            "oracle track vertex count",
            b as u64,
            ORACLE_MAX_TRACK_VERTICES as u64,
        ));
    }
    if t < 1 {
        return Err(Error::invalid("track count must be at least 1"));
    }
    if b == 0 {
        return Ok(0);
    }
    // best order cost per vertex subset, each by brute-force permutations
    let full = 1usize << b;
    let mut best_subset = vec![0u64; full];
    for (mask, slot) in best_subset.iter_mut().enumerate().skip(1) {
        let members: Vec<u32> = (0..b).filter(|&x| mask >> x & 1 == 1).collect();
        *slot = best_permutation_cost(inst, &members);
    }
    // assign each vertex a track label, sum the track costs
    let mut label = vec![0u32; b as usize];
    let mut best = u64::MAX;
    loop {
        let mut masks = vec![0usize; t as usize];
        for (x, &l) in label.iter().enumerate() {
            masks[l as usize] |= 1 << x;
        }
        let value = masks.iter().map(|&s| best_subset[s]).sum::<u64>();
        best = best.min(value);
        // next labeling in base-t counter order
        let mut advanced = false;
        for slot in label.iter_mut() {
            if *slot + 1 < t {
                *slot += 1;
                advanced = true;
                break;
            }
            *slot = 0;
        }
        if !advanced {
            break;
        }
    }
    Ok(best)
}

fn best_permutation_cost(inst: &TrackInstance, members: &[u32]) -> u64 {
    let singles: Vec<Vec<u32>> = (0..inst.track_vertex_count())
        .filter(|x| !members.contains(x))
        .map(|x| vec![x])
        .collect();
    let mut order: Vec<u32> = Vec::with_capacity(members.len());
    let mut used = vec![false; members.len()];
    let mut best = u64::MAX;
    fn rec(
        inst: &TrackInstance,
        members: &[u32],
        singles: &[Vec<u32>],
        order: &mut Vec<u32>,
        used: &mut Vec<bool>,
        best: &mut u64,
    ) {
        if order.len() == members.len() {
            // isolate the rest on singleton tracks; cross-track pairs cost 0
            let mut tracks = vec![order.clone()];
            tracks.extend(singles.iter().cloned());
            let layout = TrackLayout { tracks };
            *best = (*best).min(layout_crossings(inst, &layout));
            return;
        }
        for i in 0..members.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            order.push(members[i]);
            rec(inst, members, singles, order, used, best);
            order.pop();
            used[i] = false;
        }
    }
    rec(inst, members, &singles, &mut order, &mut used, &mut best);
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_and_k5_crossing_numbers() {
        let k4 = OrderedGraph::complete(4).unwrap();
        assert_eq!(oracle_min_crossings(&k4, 1).unwrap(), 1);
        assert_eq!(oracle_min_crossings(&k4, 2).unwrap(), 0);
        let k5 = OrderedGraph::complete(5).unwrap();
        assert_eq!(oracle_min_crossings(&k5, 1).unwrap(), 5);
        assert_eq!(oracle_min_crossings(&k5, 2).unwrap(), 1);
        assert_eq!(oracle_min_crossings(&k5, 3).unwrap(), 0);
    }

    #[test]
    fn k5_deletion_to_one_crossing_free_page_needs_three() {
        let k5 = OrderedGraph::complete(5).unwrap();
        assert_eq!(oracle_min_deletion(&k5, 1, 0).unwrap(), 3);
        assert_eq!(oracle_min_deletion(&k5, 1, 2).unwrap(), 0);
        let k4 = OrderedGraph::complete(4).unwrap();
        assert_eq!(oracle_min_deletion(&k4, 1, 0).unwrap(), 1);
        assert_eq!(oracle_min_deletion(&k4, 2, 0).unwrap(), 0);
    }

    #[test]
    fn max_noncrossing_sizes_on_complete_graphs() {
        let k4 = OrderedGraph::complete(4).unwrap();
        let best4 = oracle_max_noncrossing(&k4, k4.all_edges()).unwrap();
        assert_eq!(best4.len(), 5);
        // lex tie-break keeps (1,3), the earlier of the two crossing edges
        assert!(best4.contains(k4.edge_index(1, 3).unwrap()));
        let k5 = OrderedGraph::complete(5).unwrap();
        assert_eq!(
            oracle_max_noncrossing(&k5, k5.all_edges()).unwrap().len(),
            7
        );
    }

    #[test]
    fn deletion_oracle_agrees_with_crossing_oracle() {
        // d = 0, p pages: zero deletions needed exactly when the p-page
        // minimum crossing count is already zero
        for n in 2..=5u32 {
            let g = OrderedGraph::complete(n).unwrap();
            for p in 1..=3 {
                let zero = oracle_min_crossings(&g, p).unwrap() == 0;
                let none = oracle_min_deletion(&g, p, 0).unwrap() == 0;
                assert_eq!(zero, none, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn degree_deletion_oracle_small_cases() {
        let empty: Vec<EdgeSubset> = vec![EdgeSubset::EMPTY; 4];
        assert_eq!(
            oracle_degree_deletion(&empty, 0, 0).unwrap(),
            Some(EdgeSubset::EMPTY)
        );
        let single = vec![EdgeSubset::single(1), EdgeSubset::single(0)];
        assert_eq!(
            oracle_degree_deletion(&single, 0, 1).unwrap(),
            Some(EdgeSubset::single(0))
        );
        assert_eq!(oracle_degree_deletion(&single, 0, 0).unwrap(), None);
        // 5-cycle: the largest independent set has 2 vertices, so degree
        // zero needs 3 removals
        let mut cycle = vec![EdgeSubset::EMPTY; 5];
        for (v, nbrs) in cycle.iter_mut().enumerate() {
            nbrs.insert((v + 1) % 5);
            nbrs.insert((v + 4) % 5);
        }
        assert_eq!(oracle_degree_deletion(&cycle, 0, 2).unwrap(), None);
        assert_eq!(
            oracle_degree_deletion(&cycle, 0, 3).unwrap().unwrap().len(),
            3
        );
        // the same cycle tolerating degree 2 needs nothing removed
        assert_eq!(
            oracle_degree_deletion(&cycle, 2, 0).unwrap(),
            Some(EdgeSubset::EMPTY)
        );
    }

    #[test]
    fn track_oracle_small_cases() {
        let k22 = TrackInstance::new(2, 2, &[(1, 0), (1, 1), (2, 0), (2, 1)]).unwrap();
        assert_eq!(oracle_track_crossings(&k22, 1).unwrap(), 1);
        assert_eq!(oracle_track_crossings(&k22, 2).unwrap(), 0);
        let mut e33 = Vec::new();
        for s in 1..=3 {
            for x in 0..3 {
                e33.push((s, x));
            }
        }
        let k33 = TrackInstance::new(3, 3, &e33).unwrap();
        assert_eq!(oracle_track_crossings(&k33, 1).unwrap(), 9);
        assert_eq!(oracle_track_crossings(&k33, 2).unwrap(), 3);
        assert_eq!(oracle_track_crossings(&k33, 3).unwrap(), 0);
    }
}
