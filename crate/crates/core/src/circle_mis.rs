//! Maximum non-crossing edge subsets.
//!
//! The crossing relation of interval edges is a circle graph, so a maximum
//! independent set comes from interval dynamic programming once endpoints
//! are made distinct. Shared spine positions are expanded into per-edge
//! slots ordered so that the crossing relation is untouched: at each vertex,
//! right endpoints come first (longer edges last), then left endpoints
//! (longer edges first). Edges sharing an endpoint end up nested or
//! disjoint, exactly as the pairwise predicate says.

use crate::graph::OrderedGraph;
use crate::subset::EdgeSubset;

/// Edges mapped to chords with pairwise distinct endpoints.
///
/// `slots[e] = (l, r)` are the expanded endpoint positions of candidate edge
/// `e`; two chords cross exactly when their slot intervals strictly
/// interleave.
pub struct ChordModel {
    pub members: Vec<usize>,
    pub slots: Vec<(u32, u32)>,
}

impl ChordModel {
    pub fn build(g: &OrderedGraph, candidates: EdgeSubset) -> ChordModel {
        let members: Vec<usize> = candidates.iter().collect();
        // per spine vertex: right-endpoint slots, shorter edges first, then
        // left-endpoint slots, longer edges first
        let mut keyed: Vec<(u32, u8, i64, usize, bool)> = Vec::with_capacity(2 * members.len());
        for (i, &e) in members.iter().enumerate() {
            let (u, v) = g.endpoints(e);
            let len = (v - u) as i64;
            keyed.push((u, 1, -len, i, true));
            keyed.push((v, 0, len, i, false));
        }
        keyed.sort();
        let mut slots = vec![(0u32, 0u32); members.len()];
        for (pos, &(_, _, _, i, is_left)) in keyed.iter().enumerate() {
            if is_left {
                slots[i].0 = pos as u32;
            } else {
                slots[i].1 = pos as u32;
            }
        }
        ChordModel { members, slots }
    }

    fn chords_crossing_matches_graph(&self, g: &OrderedGraph) -> bool {
        for i in 0..self.members.len() {
            for j in i + 1..self.members.len() {
                let (a, b) = self.slots[i];
                let (c, d) = self.slots[j];
                let chords = (a < c && c < b && b < d) || (c < a && a < d && d < b);
                if chords != g.crosses(self.members[i], self.members[j]) {
                    return false;
                }
            }
        }
        true
    }
}

/// Maximum subset of `candidates` with no two edges crossing. Among all
/// maximum subsets, returns the one whose sorted edge-index sequence is
/// lexicographically smallest.
pub fn max_noncrossing_subset(g: &OrderedGraph, candidates: EdgeSubset) -> EdgeSubset {
    let target = mis_size(g, candidates);
    // force smallest indices in first: e joins when the optimum survives
    let mut chosen = EdgeSubset::EMPTY;
    let mut pool = candidates;
    for e in candidates.iter() {
        if !pool.contains(e) {
            continue;
        }
        let shrunk = pool - (g.cross_set(e) | EdgeSubset::single(e));
        if chosen.len() + 1 + mis_size(g, shrunk) == target {
            chosen.insert(e);
            pool = shrunk;
        }
    }
    debug_assert_eq!(chosen.len(), target);
    chosen
}

/// Independent-set size of the crossing relation restricted to `candidates`.
fn mis_size(g: &OrderedGraph, candidates: EdgeSubset) -> usize {
    let model = ChordModel::build(g, candidates);
    debug_assert!(model.chords_crossing_matches_graph(g));
    let m = model.members.len();
    if m == 0 {
        return 0;
    }
    let slots = 2 * m;
    let mut ends_at: Vec<Option<usize>> = vec![None; slots];
    for (i, &(_, r)) in model.slots.iter().enumerate() {
        ends_at[r as usize] = Some(i);
    }
    // best[i][j]: maximum chords inside slot window [i, j]
    let mut best = vec![vec![0u16; slots + 1]; slots + 1];
    for j in 0..slots {
        for i in (0..=j).rev() {
            let mut val = best[i][j]; // window [i, j-1] shifted: skip slot j
            if let Some(c) = ends_at[j] {
                let l = model.slots[c].0 as usize;
                if l >= i {
                    // take c: independent chords split into inside and left
                    let take = 1 + best[l + 1][j] + if l > i { best[i][l] } else { 0 };
                    val = val.max(take);
                }
            }
            best[i][j + 1] = val;
        }
    }
    best[0][slots] as usize
}
