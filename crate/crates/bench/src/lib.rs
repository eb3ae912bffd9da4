//! Seeded instance builders for the benchmarks. Every builder is a pure
//! function of its arguments, so benchmark runs are comparable across
//! checkouts and machines.

use bookemb::tracks::TrackInstance;
use bookemb::OrderedGraph;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

/// Uniform sample of `m` distinct edges over the spine `1..=n`.
pub fn graph_with_edges(seed: u64, n: u32, m: usize) -> OrderedGraph {
    let mut pairs: Vec<(u32, u32)> = (1..=n)
        .flat_map(|u| (u + 1..=n).map(move |v| (u, v)))
        .collect();
    assert!(m <= pairs.len(), "not enough vertex pairs for {m} edges");
    let mut rng = StdRng::seed_from_u64(seed);
    pairs.shuffle(&mut rng);
    pairs.truncate(m);
    pairs.sort_unstable();
    OrderedGraph::new(n, &pairs).unwrap()
}

/// Like [`graph_with_edges`] but every edge spans the gap after `n / 2`, so
/// the whole graph is stabbed by a single point.
pub fn split_graph_with_edges(seed: u64, n: u32, m: usize) -> OrderedGraph {
    let cut = n / 2;
    let mut pairs: Vec<(u32, u32)> = (1..=cut)
        .flat_map(|u| (cut + 1..=n).map(move |v| (u, v)))
        .collect();
    assert!(m <= pairs.len(), "not enough crossing pairs for {m} edges");
    let mut rng = StdRng::seed_from_u64(seed);
    pairs.shuffle(&mut rng);
    pairs.truncate(m);
    pairs.sort_unstable();
    OrderedGraph::new(n, &pairs).unwrap()
}

/// Random graph thinned until every edge has at most `d` crossings. The
/// result usually keeps fewer than `m` edges; read the count off the value.
pub fn d_planar_graph(seed: u64, n: u32, m: usize, d: u32) -> OrderedGraph {
    let g = graph_with_edges(seed, n, m);
    let mut alive = g.all_edges();
    loop {
        let worst = alive
            .iter()
            .max_by_key(|&e| g.cross_set_in(e, alive).len());
        match worst {
            Some(e) if g.cross_set_in(e, alive).len() > d as usize => alive.remove(e),
            _ => break,
        }
    }
    let edges: Vec<(u32, u32)> = alive.iter().map(|e| g.edges()[e]).collect();
    OrderedGraph::new(n, &edges).unwrap()
}

/// Uniform sample of `m` distinct spine-to-track edges.
pub fn track_instance_with_edges(seed: u64, a: u32, b: u32, m: usize) -> TrackInstance {
    let mut pairs: Vec<(u32, u32)> = (1..=a)
        .flat_map(|s| (0..b).map(move |x| (s, x)))
        .collect();
    assert!(m <= pairs.len(), "not enough spine-track pairs for {m} edges");
    let mut rng = StdRng::seed_from_u64(seed);
    pairs.shuffle(&mut rng);
    pairs.truncate(m);
    pairs.sort_unstable();
    TrackInstance::new(a, b, &pairs).unwrap()
}
