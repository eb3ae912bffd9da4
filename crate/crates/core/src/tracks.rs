//! Crossing minimization for spine-plus-tracks layouts.
//!
//! One side of a bipartite graph sits on the spine in a fixed order; the
//! other side is distributed over `t` parallel tracks, each track ordered
//! freely. Two edges cross exactly when their track endpoints share a track
//! and the spine order of their other endpoints inverts the track order.
//! Crossings are never counted between distinct tracks.
//!
//! The minimum crossing count over one track is a Held-Karp style scan over
//! vertex subsets: appending vertex `y` to an ordered set `X` costs the
//! pairwise inversions between `y` and everything already placed, which an
//! incremental table makes O(2^b b) overall. Splitting over `t` tracks is a
//! min-plus subset convolution of that one-track table with itself, and the
//! smallest `t` with zero crossings is found by folding until the full-set
//! entry hits zero.

use crate::error::{Error, Result};
use crate::io::{content_lines, parse_fields};

/// Subset tables take 2^b entries; above this the instance is rejected.
pub const DEFAULT_TRACK_VERTEX_LIMIT: usize = 20;

const MAX_TRACK_EDGES: usize = 10_000;

/// Bipartite instance: spine positions `1..=spine_count` in fixed order,
/// movable vertices `0..track_vertex_count` to be distributed over tracks.
#[derive(Clone, Debug)]
pub struct TrackInstance {
    spine_count: u32,
    track_vertex_count: u32,
    edges: Vec<(u32, u32)>,
}

impl TrackInstance {
    /// Edges pair a spine position `1..=a` with a movable vertex `0..b`.
    pub fn new(spine_count: u32, track_vertex_count: u32, edges: &[(u32, u32)]) -> Result<Self> {
        if edges.len() > MAX_TRACK_EDGES {
            return Err(Error::capacity(
                "track edge count",
                edges.len() as u64,
                MAX_TRACK_EDGES as u64,
            ));
        }
        let mut seen = Vec::with_capacity(edges.len());
        for &(s, x) in edges {
            if s < 1 || s > spine_count {
                return Err(Error::invalid(format!(
                    "spine endpoint {s} outside 1..={spine_count}"
                )));
            }
            if x >= track_vertex_count {
                return Err(Error::invalid(format!(
                    "track endpoint {x} outside 0..{track_vertex_count}"
                )));
            }
            if seen.contains(&(s, x)) {
                return Err(Error::invalid(format!("duplicate edge ({s}, {x})")));
            }
            seen.push((s, x));
        }
        Ok(TrackInstance {
            spine_count,
            track_vertex_count,
            edges: seen,
        })
    }

    pub fn spine_count(&self) -> u32 {
        self.spine_count
    }

    pub fn track_vertex_count(&self) -> u32 {
        self.track_vertex_count
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Spine neighbors of movable vertex `x`.
    pub fn spine_neighbors(&self, x: u32) -> Vec<u32> {
        self.edges
            .iter()
            .filter(|&&(_, y)| y == x)
            .map(|&(s, _)| s)
            .collect()
    }

    /// Parses the track text format: a header line `a b m` followed by `m`
    /// lines `s x` with `1 <= s <= a` and `1 <= x <= b`. Movable vertices are
    /// stored zero-based. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (line_no, header) = lines
            .next()
            .ok_or_else(|| Error::invalid("empty track instance".to_string()))?;
        let fields = parse_fields(line_no, &header, 3)?;
        let (a, b, m) = (fields[0], fields[1], fields[2]);
        let mut edges = Vec::with_capacity(m as usize);
        let mut last_line = line_no;
        for _ in 0..m {
            let (line_no, line) = lines.next().ok_or_else(|| Error::Parse {
                line: last_line,
                msg: format!("expected {m} edges, found {}", edges.len()),
            })?;
            last_line = line_no;
            let fields = parse_fields(line_no, &line, 2)?;
            let (s, x) = (fields[0], fields[1]);
            if x < 1 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "track endpoint must be at least 1".to_string(),
                });
            }
            edges.push((s, x - 1));
        }
        if let Some((line_no, _)) = lines.next() {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("more than the declared {m} edges"),
            });
        }
        TrackInstance::new(a, b, &edges).map_err(|e| match e {
            Error::InvalidInput(msg) => Error::Parse { line: 0, msg },
            other => other,
        })
    }
}

/// Movable vertices grouped into tracks; `tracks[i]` lists the vertices on
/// track `i` in their left-to-right order. Every movable vertex appears on
/// exactly one track.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrackLayout {
    pub tracks: Vec<Vec<u32>>,
}

impl TrackLayout {
    pub fn track_of(&self, x: u32) -> Option<usize> {
        self.tracks.iter().position(|t| t.contains(&x))
    }

    pub fn is_partition(&self, track_vertex_count: u32) -> bool {
        let mut seen = vec![false; track_vertex_count as usize];
        for t in &self.tracks {
            for &x in t {
                if x >= track_vertex_count || seen[x as usize] {
                    return false;
                }
                seen[x as usize] = true;
            }
        }
        seen.iter().all(|&s| s)
    }
}

/// Crossings forced when `x` is placed somewhere before `y` on the same
/// track: pairs of distinct spine neighbors in inverted order.
pub fn pair_cost(inst: &TrackInstance, x: u32, y: u32) -> u64 {
    let mut cost = 0;
    for &(a, xe) in inst.edges() {
        if xe != x {
            continue;
        }
        for &(a2, ye) in inst.edges() {
            if ye == y && a2 < a {
                cost += 1;
            }
        }
    }
    cost
}

/// Dense `b x b` table of [`pair_cost`] values.
pub struct CostTable {
    b: usize,
    c: Vec<u32>,
}

impl CostTable {
    pub fn build(inst: &TrackInstance) -> CostTable {
        let b = inst.track_vertex_count() as usize;
        let mut c = vec![0u32; b * b];
        for &(a, x) in inst.edges() {
            for &(a2, y) in inst.edges() {
                if x != y && a2 < a {
                    c[x as usize * b + y as usize] += 1;
                }
            }
        }
        CostTable { b, c }
    }

    pub fn at(&self, x: usize, y: usize) -> u32 {
        self.c[x * self.b + y]
    }
}

/// Per-subset minimum crossings on a single track, plus the appended-last
/// vertex realizing each minimum (for order reconstruction).
struct OneTrackTable {
    best: Vec<u32>,
    last: Vec<u8>,
}

fn one_track_table(cost: &CostTable) -> OneTrackTable {
    let b = cost.b;
    let full = 1usize << b;
    // eta[X][y] = cost of appending y after the set X has been placed
    let mut eta = vec![0u32; full * b];
    for x_set in 1..full {
        let z = x_set.trailing_zeros() as usize;
        let rest = x_set & (x_set - 1);
        for y in 0..b {
            let inherited = eta[rest * b + y];
            eta[x_set * b + y] = if y == z {
                inherited
            } else {
                inherited + cost.at(z, y)
            };
        }
    }
    let mut best = vec![0u32; full];
    let mut last = vec![0u8; full];
    for x_set in 1..full {
        let mut val = u32::MAX;
        let mut pick = 0u8;
        let mut bits = x_set;
        while bits != 0 {
            let y = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let cand = best[x_set & !(1 << y)] + eta[x_set * b + y];
            if cand < val {
                val = cand;
                pick = y as u8;
            }
        }
        best[x_set] = val;
        last[x_set] = pick;
    }
    OneTrackTable { best, last }
}

fn order_of(table: &OneTrackTable, mut subset: usize) -> Vec<u32> {
    let mut rev = Vec::new();
    while subset != 0 {
        let y = table.last[subset] as usize;
        rev.push(y as u32);
        subset &= !(1 << y);
    }
    rev.reverse();
    rev
}

fn check_vertex_budget(inst: &TrackInstance, limit: usize) -> Result<usize> {
    let b = inst.track_vertex_count() as usize;
    let cap = limit.min(DEFAULT_TRACK_VERTEX_LIMIT);
    if b > cap {
        return Err(Error::capacity(
            "track vertex count",
            b as u64,
            cap as u64,
        ));
    }
    Ok(b)
}

/// Minimum crossings with every movable vertex on one track, with an order
/// achieving it.
pub fn min_crossings_one_track(inst: &TrackInstance) -> Result<(u64, Vec<u32>)> {
    min_crossings_one_track_limited(inst, DEFAULT_TRACK_VERTEX_LIMIT)
}

pub fn min_crossings_one_track_limited(
    inst: &TrackInstance,
    limit: usize,
) -> Result<(u64, Vec<u32>)> {
    let b = check_vertex_budget(inst, limit)?;
    let table = one_track_table(&CostTable::build(inst));
    let full = (1usize << b) - 1;
    Ok((table.best[full] as u64, order_of(&table, full)))
}

/// Minimum crossings over at most `tracks` tracks, with a layout achieving
/// it. Unused tracks stay empty.
pub fn min_crossings(inst: &TrackInstance, tracks: u32) -> Result<(u64, TrackLayout)> {
    min_crossings_limited(inst, tracks, DEFAULT_TRACK_VERTEX_LIMIT)
}

pub fn min_crossings_limited(
    inst: &TrackInstance,
    tracks: u32,
    limit: usize,
) -> Result<(u64, TrackLayout)> {
    if tracks < 1 {
        return Err(Error::invalid("track count must be at least 1"));
    }
    let b = check_vertex_budget(inst, limit)?;
    let table = one_track_table(&CostTable::build(inst));
    let full = (1usize << b) - 1;
    // levels beyond b can only repeat empty tracks
    let levels = (tracks as usize).min(b.max(1));
    let mut current = table.best.clone();
    let mut splits: Vec<Vec<u32>> = Vec::new();
    for _ in 2..=levels {
        let (next, split) = fold_level(&current, &table.best);
        splits.push(split);
        current = next;
    }
    let value = current[full] as u64;

    // peel one track per level, deepest level first
    let mut layout = TrackLayout {
        tracks: vec![Vec::new(); tracks as usize],
    };
    let mut remaining = full;
    for (level, split) in splits.iter().enumerate().rev() {
        let kept = split[remaining] as usize;
        let peeled = remaining & !kept;
        layout.tracks[level + 1] = order_of(&table, peeled);
        remaining = kept;
    }
    layout.tracks[0] = order_of(&table, remaining);
    Ok((value, layout))
}

/// One min-plus convolution level: `next[X] = min over Y subset of X of
/// current[Y] + single[X minus Y]`, recording the kept submask `Y`.
fn fold_level(current: &[u32], single: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let full = current.len();
    let mut next = vec![u32::MAX; full];
    let mut split = vec![0u32; full];
    for x_set in 0..full {
        let mut sub = x_set;
        loop {
            let cand = current[sub].saturating_add(single[x_set & !sub]);
            if cand < next[x_set] {
                next[x_set] = cand;
                split[x_set] = sub as u32;
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & x_set;
        }
    }
    (next, split)
}

/// Smallest track count admitting a crossing-free layout, with a witness.
/// Singleton tracks always suffice, so the answer is at most `b`.
pub fn min_track_count(inst: &TrackInstance) -> Result<(u32, TrackLayout)> {
    min_track_count_limited(inst, DEFAULT_TRACK_VERTEX_LIMIT)
}

pub fn min_track_count_limited(inst: &TrackInstance, limit: usize) -> Result<(u32, TrackLayout)> {
    let b = check_vertex_budget(inst, limit)?;
    if b == 0 {
        return Ok((0, TrackLayout { tracks: Vec::new() }));
    }
    for t in 1..=b as u32 {
        let (value, layout) = min_crossings_limited(inst, t, limit)?;
        if value == 0 {
            return Ok((t, layout));
        }
    }
    unreachable!("one vertex per track is always crossing-free");
}

/// Crossings of a concrete layout, counted pairwise from scratch. This is
/// the ground-truth predicate shared by tests, oracles and verification.
pub fn layout_crossings(inst: &TrackInstance, layout: &TrackLayout) -> u64 {
    let mut position = vec![None; inst.track_vertex_count() as usize];
    for (tid, track) in layout.tracks.iter().enumerate() {
        for (i, &x) in track.iter().enumerate() {
            position[x as usize] = Some((tid, i));
        }
    }
    let mut total = 0;
    let edges = inst.edges();
    for (i, &(a, x)) in edges.iter().enumerate() {
        for &(a2, y) in &edges[i + 1..] {
            if x == y || a == a2 {
                continue;
            }
            let (tx, px) = position[x as usize].expect("layout covers every vertex");
            let (ty, py) = position[y as usize].expect("layout covers every vertex");
            if tx != ty {
                continue;
            }
            // same track: crossing iff spine order and track order disagree
            if (a < a2) != (px < py) {
                total += 1;
            }
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete_bipartite(a: u32, b: u32) -> TrackInstance {
        let mut edges = Vec::new();
        for s in 1..=a {
            for x in 0..b {
                edges.push((s, x));
            }
        }
        TrackInstance::new(a, b, &edges).unwrap()
    }

    #[test]
    fn pair_cost_counts_inversions() {
        // x sees spine 2, y sees spine 1: placing x first inverts the pair
        let inst = TrackInstance::new(2, 2, &[(2, 0), (1, 1)]).unwrap();
        assert_eq!(pair_cost(&inst, 0, 1), 1);
        assert_eq!(pair_cost(&inst, 1, 0), 0);
    }

    #[test]
    fn pair_cost_identity_on_k22() {
        let inst = complete_bipartite(2, 2);
        assert_eq!(pair_cost(&inst, 0, 1), 1);
        assert_eq!(pair_cost(&inst, 1, 0), 1);
        // the two orders together account for every distinct-spine pair
        assert_eq!(pair_cost(&inst, 0, 1) + pair_cost(&inst, 1, 0), 2);
    }

    #[test]
    fn k22_needs_two_tracks() {
        let inst = complete_bipartite(2, 2);
        let (one, _) = min_crossings_one_track(&inst).unwrap();
        assert_eq!(one, 1);
        let (two, layout) = min_crossings(&inst, 2).unwrap();
        assert_eq!(two, 0);
        assert!(layout.is_partition(2));
        assert_eq!(layout_crossings(&inst, &layout), 0);
        assert_eq!(min_track_count(&inst).unwrap().0, 2);
    }

    #[test]
    fn star_fits_one_track() {
        let inst = TrackInstance::new(1, 3, &[(1, 0), (1, 1), (1, 2)]).unwrap();
        let (value, order) = min_crossings_one_track(&inst).unwrap();
        assert_eq!(value, 0);
        assert_eq!(order.len(), 3);
        assert_eq!(min_track_count(&inst).unwrap().0, 1);
    }

    #[test]
    fn k33_needs_three_tracks() {
        let inst = complete_bipartite(3, 3);
        assert_eq!(min_crossings_one_track(&inst).unwrap().0, 9);
        assert_eq!(min_crossings(&inst, 2).unwrap().0, 3);
        let (t, layout) = min_track_count(&inst).unwrap();
        assert_eq!(t, 3);
        assert_eq!(layout_crossings(&inst, &layout), 0);
    }

    #[test]
    fn enough_tracks_always_reach_zero() {
        let inst = complete_bipartite(3, 3);
        let (value, layout) = min_crossings(&inst, 5).unwrap();
        assert_eq!(value, 0);
        assert!(layout.is_partition(3));
    }

    #[test]
    fn parses_track_format() {
        let text = "# K22 split across the spine\n2 2 4\n1 1\n1 2\n2 1\n2 2\n";
        let inst = TrackInstance::parse(text).unwrap();
        assert_eq!(inst.spine_count(), 2);
        assert_eq!(inst.track_vertex_count(), 2);
        assert_eq!(inst.edges().len(), 4);
        assert!(TrackInstance::parse("2 2 1\n1 3\n").is_err());
        let err = TrackInstance::parse("2 2 1\nx 1\n").unwrap_err();
        assert!(err.to_string().contains("line 2"));
    }
}
