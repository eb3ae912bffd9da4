//! Edge deletion to `p` crossing-free pages, driven by hitting sets.
//!
//! Every edge is an open interval, so a set of spine points stabbing all
//! intervals measures how "spread out" an instance is. When a single point
//! suffices, any crossing-free page is a containment chain through that
//! point, and keeping the most edges becomes a minimum-cost flow problem
//! over the containment order ([`solve_h1`]). With `h` points, the chains
//! on each page are delimited by at most `2h - 1` boundary pairs; trying
//! every choice of boundaries and solving a flow per bridged group yields
//! an exact, if expensive, solver for the general case ([`solve_general`]).

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{OrderedGraph, PageAssignment};
use crate::subset::EdgeSubset;

/// Default cap on the number of candidate boundary encodings
/// [`solve_general`] will enumerate before giving up.
pub const DEFAULT_ENCODING_LIMIT: u64 = 100_000_000;

/// Memory guard for the per-page boundary candidates that back the encoding
/// enumeration; the product limit alone would not stop a single page from
/// materializing an enormous list when p = 1.
const PAGE_CODE_LIMIT: u64 = 1_000_000;

/// A point on the spine half way between positions `gap` and `gap + 1`.
///
/// Half-integer coordinates keep hitting points disjoint from the vertex
/// positions, so "inside an open interval" never degenerates.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SpinePoint {
    gap: u32,
}

impl SpinePoint {
    pub fn new(gap: u32) -> SpinePoint {
        SpinePoint { gap }
    }

    pub fn gap(self) -> u32 {
        self.gap
    }

    /// True when the point lies strictly inside the open interval `(u, v)`.
    pub fn inside(self, u: u32, v: u32) -> bool {
        u <= self.gap && self.gap < v
    }
}

impl std::fmt::Display for SpinePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}.5", self.gap)
    }
}

/// A set of spine points such that every edge interval contains at least
/// one of them. Points are kept in increasing order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HittingSet {
    points: Vec<SpinePoint>,
}

impl HittingSet {
    pub fn points(&self) -> &[SpinePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// True when every edge of `g` contains one of the points.
    pub fn covers(&self, g: &OrderedGraph) -> bool {
        (0..g.edge_count()).all(|e| {
            let (u, v) = g.endpoints(e);
            self.points.iter().any(|pt| pt.inside(u, v))
        })
    }
}

/// Minimum-cardinality hitting set for the edge intervals of `g`.
///
/// Scans edges by increasing right endpoint and drops a point just before
/// the first unhit right endpoint; every interval still unhit at that
/// moment either contains the point or lies wholly to the right, which is
/// the classic exchange argument for interval stabbing, so the greedy
/// size is optimal. An edgeless graph yields the empty set.
pub fn greedy_hitting_set(g: &OrderedGraph) -> HittingSet {
    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    order.sort_by_key(|&e| g.endpoints(e).1);
    let mut points = Vec::new();
    let mut hit = EdgeSubset::EMPTY;
    for &e in &order {
        if hit.contains(e) {
            continue;
        }
        let pt = SpinePoint::new(g.endpoints(e).1 - 1);
        for f in 0..g.edge_count() {
            let (u, v) = g.endpoints(f);
            if pt.inside(u, v) {
                hit.insert(f);
            }
        }
        points.push(pt);
    }
    debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
    HittingSet { points }
}

/// The points of `hs` lying inside the open interval of `e`, in increasing
/// order. This is the unique maximal subset the edge bridges.
pub fn bridge_set(g: &OrderedGraph, hs: &HittingSet, e: usize) -> Vec<SpinePoint> {
    let (u, v) = g.endpoints(e);
    hs.points
        .iter()
        .copied()
        .filter(|pt| pt.inside(u, v))
        .collect()
}

/// All edges whose bridge set is exactly `x` (compared as a sorted list).
pub fn edges_bridging(g: &OrderedGraph, hs: &HittingSet, x: &[SpinePoint]) -> EdgeSubset {
    (0..g.edge_count())
        .filter(|&e| bridge_set(g, hs, e) == x)
        .collect()
}

/// Bitmask over `hs` point indices of the points inside `e`.
fn bridge_mask(g: &OrderedGraph, hs: &HittingSet, e: usize) -> u64 {
    let (u, v) = g.endpoints(e);
    let mut mask = 0u64;
    for (i, pt) in hs.points.iter().enumerate() {
        if pt.inside(u, v) {
            mask |= 1 << i;
        }
    }
    mask
}

/// Nonempty bridge classes as (point mask, member edges), ascending by mask.
/// The classes partition the edge set: every edge bridges exactly one set.
fn bridge_classes(g: &OrderedGraph, hs: &HittingSet) -> Vec<(u64, EdgeSubset)> {
    let mut classes: Vec<(u64, EdgeSubset)> = Vec::new();
    for e in 0..g.edge_count() {
        let mask = bridge_mask(g, hs, e);
        match classes.iter_mut().find(|c| c.0 == mask) {
            Some(c) => c.1.insert(e),
            None => classes.push((mask, EdgeSubset::single(e))),
        }
    }
    classes.sort_by_key(|c| c.0);
    classes
}

/// One directed arc of a [`FlowNetwork`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FlowArc {
    pub from: usize,
    pub to: usize,
    pub capacity: u32,
    pub cost: i32,
}

/// Unit-capacity network whose maximum flow of minimum cost selects up to
/// `p` vertex-disjoint containment chains covering as many edges as
/// possible.
///
/// Graph edge `e` owns the node pair `entry(e)`, `exit(e)`, joined by the
/// only negative arcs in the network (capacity 1, cost -1), so cheaper
/// means more edges kept. Containment arcs run from the exit of an edge to
/// the entry of every edge enclosing it; a source feeds a gate node whose
/// single arc caps the chain count at `p`, the gate feeds designated chain
/// start edges, and designated chain end edges drain to the sink. Minus
/// the source-gate arc the network is acyclic because containment always
/// grows the interval.
#[derive(Clone, Debug)]
pub struct FlowNetwork {
    edge_nodes: usize,
    arcs: Vec<FlowArc>,
}

impl FlowNetwork {
    /// Number of graph edges modeled.
    pub fn edge_count(&self) -> usize {
        self.edge_nodes
    }

    pub fn entry(&self, e: usize) -> usize {
        2 * e
    }

    pub fn exit(&self, e: usize) -> usize {
        2 * e + 1
    }

    pub fn source(&self) -> usize {
        2 * self.edge_nodes
    }

    pub fn gate(&self) -> usize {
        2 * self.edge_nodes + 1
    }

    pub fn sink(&self) -> usize {
        2 * self.edge_nodes + 2
    }

    pub fn node_count(&self) -> usize {
        2 * self.edge_nodes + 3
    }

    pub fn arcs(&self) -> &[FlowArc] {
        &self.arcs
    }
}

/// Builds the chain-selection network for `g` with the given chain start
/// and end candidates and chain budget `p`.
///
/// Requires a hitting set of size exactly 1: only then is "non-crossing on
/// one page" the same as "totally ordered by containment", which is what
/// the chain decomposition encodes.
pub fn build_network(
    g: &OrderedGraph,
    sources: EdgeSubset,
    sinks: EdgeSubset,
    p: u32,
) -> Result<FlowNetwork> {
    if p < 1 {
        return Err(Error::invalid("page count must be at least 1"));
    }
    if !sources.is_subset_of(g.all_edges()) || !sinks.is_subset_of(g.all_edges()) {
        return Err(Error::invalid("source or sink edges outside the graph"));
    }
    let h = greedy_hitting_set(g).len();
    if h != 1 {
        return Err(Error::invalid(format!(
            "hitting set size is {h}, chain networks need a single stabbing point"
        )));
    }
    if sources.is_empty() || sinks.is_empty() {
        return Err(Error::invalid("source and sink edge sets must be nonempty"));
    }
    let m = g.edge_count();
    let mut arcs = Vec::new();
    for e in 0..m {
        arcs.push(FlowArc {
            from: 2 * e,
            to: 2 * e + 1,
            capacity: 1,
            cost: -1,
        });
    }
    for e in 0..m {
        for f in 0..m {
            if g.contains(f, e) {
                arcs.push(FlowArc {
                    from: 2 * e + 1,
                    to: 2 * f,
                    capacity: 1,
                    cost: 0,
                });
            }
        }
    }
    arcs.push(FlowArc {
        from: 2 * m,
        to: 2 * m + 1,
        capacity: p,
        cost: 0,
    });
    for e in sources.iter() {
        arcs.push(FlowArc {
            from: 2 * m + 1,
            to: 2 * e,
            capacity: 1,
            cost: 0,
        });
    }
    for e in sinks.iter() {
        arcs.push(FlowArc {
            from: 2 * e + 1,
            to: 2 * m + 2,
            capacity: 1,
            cost: 0,
        });
    }
    Ok(FlowNetwork {
        edge_nodes: m,
        arcs,
    })
}

/// Integral maximum flow of minimum cost by successive shortest paths.
///
/// Returns the flow value, its total cost, and the flow on each arc in
/// [`FlowNetwork::arcs`] order. Negative arcs are handled by seeding the
/// node potentials with one exact shortest-path pass in topological order,
/// after which every augmentation runs Dijkstra on reduced costs.
pub fn min_cost_max_flow(net: &FlowNetwork) -> (u32, i64, Vec<u32>) {
    const INF: i64 = i64::MAX / 4;
    let n = net.node_count();
    let s = net.source();
    let t = net.sink();

    // residual arcs: 2i forward for net.arcs[i], 2i + 1 its reverse
    let arc_n = net.arcs.len();
    let mut to = vec![0usize; 2 * arc_n];
    let mut cap = vec![0u32; 2 * arc_n];
    let mut cost = vec![0i64; 2 * arc_n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, a) in net.arcs.iter().enumerate() {
        to[2 * i] = a.to;
        cap[2 * i] = a.capacity;
        cost[2 * i] = a.cost as i64;
        to[2 * i + 1] = a.from;
        cost[2 * i + 1] = -(a.cost as i64);
        out[a.from].push(2 * i);
        out[a.to].push(2 * i + 1);
    }

    // exact distances from s in one pass over a topological order
    let mut indeg = vec![0usize; n];
    for a in &net.arcs {
        indeg[a.to] += 1;
    }
    let mut topo: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut at = 0;
    while at < topo.len() {
        let v = topo[at];
        at += 1;
        for &aid in &out[v] {
            if aid % 2 == 0 {
                indeg[to[aid]] -= 1;
                if indeg[to[aid]] == 0 {
                    topo.push(to[aid]);
                }
            }
        }
    }
    debug_assert_eq!(topo.len(), n, "network must be acyclic");
    let mut pot = vec![INF; n];
    pot[s] = 0;
    for &v in &topo {
        if pot[v] == INF {
            continue;
        }
        for &aid in &out[v] {
            if aid % 2 == 0 && pot[v] + cost[aid] < pot[to[aid]] {
                pot[to[aid]] = pot[v] + cost[aid];
            }
        }
    }

    let mut total_flow = 0u32;
    let mut total_cost = 0i64;
    let mut dist = vec![INF; n];
    let mut parent = vec![usize::MAX; n];
    loop {
        dist.fill(INF);
        parent.fill(usize::MAX);
        dist[s] = 0;
        let mut heap = std::collections::BinaryHeap::new();
        heap.push(std::cmp::Reverse((0i64, s)));
        while let Some(std::cmp::Reverse((d, v))) = heap.pop() {
            if d > dist[v] {
                continue;
            }
            for &aid in &out[v] {
                let w = to[aid];
                if cap[aid] == 0 || pot[w] == INF {
                    continue;
                }
                let reduced = cost[aid] + pot[v] - pot[w];
                debug_assert!(reduced >= 0);
                if d + reduced < dist[w] {
                    dist[w] = d + reduced;
                    parent[w] = aid;
                    heap.push(std::cmp::Reverse((dist[w], w)));
                }
            }
        }
        if dist[t] == INF {
            break;
        }
        for v in 0..n {
            if dist[v] < INF {
                pot[v] += dist[v];
            }
        }
        let mut bottleneck = u32::MAX;
        let mut v = t;
        while v != s {
            let aid = parent[v];
            bottleneck = bottleneck.min(cap[aid]);
            v = to[aid ^ 1];
        }
        let mut v = t;
        while v != s {
            let aid = parent[v];
            cap[aid] -= bottleneck;
            cap[aid ^ 1] += bottleneck;
            total_cost += cost[aid] * bottleneck as i64;
            v = to[aid ^ 1];
        }
        total_flow += bottleneck;
    }

    let flows: Vec<u32> = (0..arc_n).map(|i| net.arcs[i].capacity - cap[2 * i]).collect();
    (total_flow, total_cost, flows)
}

/// Reads the chains out of a flow: one per unit leaving the gate, ordered
/// by start edge index, each following the unique flowing containment arc
/// onward. With unit capacities the chains are vertex disjoint.
fn flow_chains(net: &FlowNetwork, flows: &[u32]) -> Vec<Vec<usize>> {
    let m = net.edge_count();
    let gate = net.gate();
    let mut succ = vec![usize::MAX; m];
    let mut starts = Vec::new();
    for (i, a) in net.arcs.iter().enumerate() {
        if flows[i] == 0 {
            continue;
        }
        if a.from == gate {
            starts.push(a.to / 2);
        } else if a.from < 2 * m && a.from % 2 == 1 && a.to < 2 * m {
            debug_assert_eq!(succ[a.from / 2], usize::MAX);
            succ[a.from / 2] = a.to / 2;
        }
    }
    starts.sort_unstable();
    starts
        .into_iter()
        .map(|start| {
            let mut chain = vec![start];
            let mut cur = start;
            while succ[cur] != usize::MAX {
                cur = succ[cur];
                chain.push(cur);
            }
            chain
        })
        .collect()
}

/// Deletes the fewest edges so the rest fits `p` crossing-free pages, for
/// instances stabbed by a single point.
///
/// Each page of the result is one containment chain picked by the flow;
/// edges on no chain are deleted. Instances whose hitting set is not of
/// size 1 are rejected.
pub fn solve_h1(g: &OrderedGraph, p: u32) -> Result<(EdgeSubset, PageAssignment)> {
    let net = build_network(g, g.all_edges(), g.all_edges(), p)?;
    let (_, cost, flows) = min_cost_max_flow(&net);
    let chains = flow_chains(&net, &flows);
    let mut assignment = PageAssignment::empty(g.edge_count(), p);
    for (i, chain) in chains.iter().enumerate() {
        for &e in chain {
            assignment.set_page(e, i as u32 + 1);
        }
    }
    let deleted = assignment.deleted();
    // kept edge count is the number of gadget arcs carrying flow
    debug_assert_eq!((g.edge_count() - deleted.len()) as i64, -cost);
    debug_assert!(g.is_d_planar(&assignment, 0));
    Ok((deleted, assignment))
}

/// Decides whether `inner` and `outer` can delimit `p` containment chains,
/// and if so returns the largest edge set forming `p` vertex-disjoint
/// chains, each starting at a distinct `inner` edge and ending at a
/// distinct `outer` edge, together with the chains themselves (ordered by
/// start edge).
///
/// `None` means no pairing of the boundaries nests, so the sets cannot
/// delimit the pages of any drawing. Both sets must have exactly `p`
/// edges; the instance must be stabbed by a single point.
pub fn compatible(
    g: &OrderedGraph,
    inner: EdgeSubset,
    outer: EdgeSubset,
    p: u32,
) -> Result<Option<(EdgeSubset, Vec<EdgeSubset>)>> {
    if inner.len() != p as usize || outer.len() != p as usize {
        return Err(Error::invalid(format!(
            "boundary sets have sizes {} and {}, both must equal {p}",
            inner.len(),
            outer.len()
        )));
    }
    let net = build_network(g, inner, outer, p)?;
    let (value, _, flows) = min_cost_max_flow(&net);
    if value < p {
        return Ok(None);
    }
    let chains = flow_chains(&net, &flows);
    debug_assert_eq!(chains.len(), p as usize);
    let mut union = EdgeSubset::EMPTY;
    let mut sets = Vec::with_capacity(chains.len());
    for chain in &chains {
        debug_assert!(inner.contains(chain[0]));
        debug_assert!(outer.contains(*chain.last().unwrap()));
        let set: EdgeSubset = chain.iter().copied().collect();
        union = union | set;
        sets.push(set);
    }
    Ok(Some((union, sets)))
}

/// One boundary choice on one page: the bridge class (by index into the
/// class list) with its innermost and outermost edge on that page.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct PageTriple {
    class: usize,
    inner: usize,
    outer: usize,
}

/// Enumerates every admissible set of boundary triples for a single page:
/// at most `max_triples` classes, pairwise laminar as point sets, each
/// outer edge enclosing its inner edge, all boundary edges mutually
/// non-crossing, and enclosing classes bracketing enclosed ones. Order is
/// canonical: classes ascend within a set, sets extend depth first.
fn page_codes(
    g: &OrderedGraph,
    classes: &[(u64, EdgeSubset)],
    max_triples: usize,
) -> Result<Vec<Box<[PageTriple]>>> {
    fn admissible(
        g: &OrderedGraph,
        classes: &[(u64, EdgeSubset)],
        chosen: &[PageTriple],
        class: usize,
        inner: usize,
        outer: usize,
    ) -> bool {
        let mask = classes[class].0;
        for t in chosen {
            let other = classes[t.class].0;
            let meet = mask & other;
            if meet != 0 && meet != mask && meet != other {
                return false; // point sets must be laminar
            }
            for &a in &[inner, outer] {
                for &b in &[t.inner, t.outer] {
                    if g.crosses(a, b) {
                        return false;
                    }
                }
            }
            if other & mask == other && other != mask && !g.contains(inner, t.outer) {
                return false; // enclosing class must bracket the enclosed one
            }
            if mask & other == mask && mask != other && !g.contains(t.inner, outer) {
                return false;
            }
        }
        true
    }

    fn rec(
        g: &OrderedGraph,
        classes: &[(u64, EdgeSubset)],
        max_triples: usize,
        next: usize,
        chosen: &mut Vec<PageTriple>,
        out: &mut Vec<Box<[PageTriple]>>,
    ) -> Result<()> {
        if out.len() as u64 >= PAGE_CODE_LIMIT {
            return Err(Error::capacity(
                "page boundary candidates",
                out.len() as u64 + 1,
                PAGE_CODE_LIMIT,
            ));
        }
        out.push(chosen.clone().into_boxed_slice());
        if chosen.len() == max_triples {
            return Ok(());
        }
        for class in next..classes.len() {
            let members = classes[class].1;
            for inner in members.iter() {
                for outer in members.iter() {
                    if inner != outer && !g.contains(outer, inner) {
                        continue;
                    }
                    if !admissible(g, classes, chosen, class, inner, outer) {
                        continue;
                    }
                    chosen.push(PageTriple {
                        class,
                        inner,
                        outer,
                    });
                    rec(g, classes, max_triples, class + 1, chosen, out)?;
                    chosen.pop();
                }
            }
        }
        Ok(())
    }

    let mut out = Vec::new();
    let mut chosen = Vec::new();
    rec(g, classes, max_triples, 0, &mut chosen, &mut out)?;
    Ok(out)
}

/// Chains-of-one-class units placed by backtracking: each unit goes on a
/// page not already carrying a chain of the same class, without crossing
/// anything placed there before. Pages that are still empty are
/// interchangeable, so only the first empty page is ever tried.
fn assemble(
    g: &OrderedGraph,
    units: &[(usize, EdgeSubset)],
    p: u32,
) -> Option<PageAssignment> {
    fn rec(
        g: &OrderedGraph,
        units: &[(usize, EdgeSubset)],
        at: usize,
        pages: &mut Vec<EdgeSubset>,
        owners: &mut Vec<Vec<usize>>,
        placed: &mut Vec<u32>,
    ) -> bool {
        if at == units.len() {
            return true;
        }
        let (class, chain) = units[at];
        let mut tried_empty = false;
        for q in 0..pages.len() {
            if pages[q].is_empty() {
                if tried_empty {
                    continue;
                }
                tried_empty = true;
            }
            if owners[q].contains(&class) {
                continue;
            }
            if chain.iter().any(|e| g.cross_set(e).intersects(pages[q])) {
                continue;
            }
            let saved = pages[q];
            pages[q] = pages[q] | chain;
            owners[q].push(class);
            placed[at] = q as u32;
            if rec(g, units, at + 1, pages, owners, placed) {
                return true;
            }
            owners[q].pop();
            pages[q] = saved;
        }
        false
    }

    let mut pages = vec![EdgeSubset::EMPTY; p as usize];
    let mut owners: Vec<Vec<usize>> = vec![Vec::new(); p as usize];
    let mut placed = vec![0u32; units.len()];
    if !rec(g, units, 0, &mut pages, &mut owners, &mut placed) {
        return None;
    }
    let mut assignment = PageAssignment::empty(g.edge_count(), p);
    for (i, &(_, chain)) in units.iter().enumerate() {
        for e in chain.iter() {
            assignment.set_page(e, placed[i] + 1);
        }
    }
    Some(assignment)
}

type FlowMemo = HashMap<(usize, u64, u64), Option<Vec<EdgeSubset>>>;

/// Maximal chains for one bridge class between the given boundary edge
/// sets, in original edge indices. The flow runs on the subgraph induced
/// by the class, which a single point always stabs.
fn class_chains(
    g: &OrderedGraph,
    members: EdgeSubset,
    inner: EdgeSubset,
    outer: EdgeSubset,
) -> Option<Vec<EdgeSubset>> {
    let (sub, back) = g.subgraph(members);
    let to_local = |set: EdgeSubset| -> EdgeSubset {
        back.iter()
            .enumerate()
            .filter(|&(_, &global)| set.contains(global))
            .map(|(local, _)| local)
            .collect()
    };
    let local_inner = to_local(inner);
    let local_outer = to_local(outer);
    let result = compatible(&sub, local_inner, local_outer, local_inner.len() as u32)
        .expect("bridge classes always admit a single stabbing point");
    result.map(|(_, chains)| {
        chains
            .into_iter()
            .map(|chain| chain.iter().map(|local| back[local]).collect())
            .collect()
    })
}

/// Deletes the fewest edges so the rest fits `p` crossing-free pages, for
/// any instance, in time exponential in the hitting set size.
///
/// Enumerates, per page, which bridge classes appear and which edges
/// delimit them; groups equal classes across pages and solves one chain
/// flow per group; then searches for a placement of the resulting chains
/// onto pages. Candidates are accepted only after the assembled assignment
/// independently verifies crossing-free, and the best accepted candidate
/// is optimal because an optimal drawing's boundary choices are among
/// those enumerated.
pub fn solve_general(g: &OrderedGraph, p: u32) -> Result<(EdgeSubset, PageAssignment)> {
    solve_general_limited(g, p, DEFAULT_ENCODING_LIMIT)
}

/// [`solve_general`] with an explicit cap on the number of candidate
/// encodings (the per-page candidate count raised to the p-th power).
pub fn solve_general_limited(
    g: &OrderedGraph,
    p: u32,
    limit: u64,
) -> Result<(EdgeSubset, PageAssignment)> {
    if p < 1 {
        return Err(Error::invalid("page count must be at least 1"));
    }
    let hs = greedy_hitting_set(g);
    let classes = bridge_classes(g, &hs);
    let max_triples = (2 * hs.len()).saturating_sub(1);
    let codes = page_codes(g, &classes, max_triples)?;
    let per_page = codes.len() as u64;
    if per_page.checked_pow(p).filter(|&t| t <= limit).is_none() {
        return Err(Error::capacity(
            "encoding candidates",
            per_page.saturating_pow(p),
            limit,
        ));
    }

    let mut memo: FlowMemo = HashMap::new();
    let mut best: Option<(usize, PageAssignment)> = None;
    let mut pick = vec![0usize; p as usize];
    loop {
        evaluate(g, &classes, &codes, &pick, &mut memo, &mut best);
        let mut finished = true;
        for slot in pick.iter_mut().rev() {
            if *slot + 1 < codes.len() {
                *slot += 1;
                finished = false;
                break;
            }
            *slot = 0;
        }
        if finished {
            break;
        }
    }
    let (kept, assignment) = best.expect("the all-empty candidate always assembles");
    let deleted = assignment.deleted();
    debug_assert_eq!(deleted.len(), g.edge_count() - kept);
    Ok((deleted, assignment))
}

/// Scores one encoding candidate and installs it as the new best when its
/// chains assemble into a verified drawing keeping strictly more edges.
fn evaluate(
    g: &OrderedGraph,
    classes: &[(u64, EdgeSubset)],
    codes: &[Box<[PageTriple]>],
    pick: &[usize],
    memo: &mut FlowMemo,
    best: &mut Option<(usize, PageAssignment)>,
) {
    // group the chosen triples by class: page count and boundary sets
    let mut used: Vec<(usize, u32, EdgeSubset, EdgeSubset)> = Vec::new();
    for &code in pick {
        for t in codes[code].iter() {
            match used.iter_mut().find(|u| u.0 == t.class) {
                Some(u) => {
                    u.1 += 1;
                    u.2.insert(t.inner);
                    u.3.insert(t.outer);
                }
                None => used.push((
                    t.class,
                    1,
                    EdgeSubset::single(t.inner),
                    EdgeSubset::single(t.outer),
                )),
            }
        }
    }
    used.sort_by_key(|u| u.0);
    // a drawing places an edge on one page only, so boundary edges must
    // differ across the pages of a class
    for &(_, pages, inner, outer) in &used {
        if inner.len() != pages as usize || outer.len() != pages as usize {
            return;
        }
    }

    let mut total = 0usize;
    let mut units: Vec<(usize, EdgeSubset)> = Vec::new();
    for &(class, _, inner, outer) in &used {
        let chains = memo
            .entry((class, inner.0, outer.0))
            .or_insert_with(|| class_chains(g, classes[class].1, inner, outer));
        match chains {
            None => return,
            Some(chains) => {
                for chain in chains.iter() {
                    total += chain.len();
                    units.push((class, *chain));
                }
            }
        }
    }
    if let Some((kept, _)) = best {
        if total <= *kept {
            return;
        }
    }

    let Some(assignment) = assemble(g, &units, pick.len() as u32) else {
        return;
    };
    debug_assert!(g.is_d_planar(&assignment, 0));
    if !g.is_d_planar(&assignment, 0) {
        return;
    }
    *best = Some((total, assignment));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_pages::crossing_numbers_up_to;
    use crate::oracles::oracle_min_deletion;

    fn xorshift(state: &mut u64) -> u64 {
        *state ^= *state << 13;
        *state ^= *state >> 7;
        *state ^= *state << 17;
        *state
    }

    fn separated_k22() -> OrderedGraph {
        OrderedGraph::new(4, &[(1, 3), (1, 4), (2, 3), (2, 4)]).unwrap()
    }

    fn idx(g: &OrderedGraph, u: u32, v: u32) -> usize {
        g.edge_index(u, v).unwrap()
    }

    /// Edges all crossing the gap after `cut`, so the point cut + 0.5
    /// stabs everything.
    fn random_split_graph(state: &mut u64, n: u32, cut: u32, max_edges: usize) -> OrderedGraph {
        let mut edges = Vec::new();
        for u in 1..=cut {
            for v in cut + 1..=n {
                if xorshift(state).is_multiple_of(2) {
                    edges.push((u, v));
                }
            }
        }
        if edges.is_empty() {
            edges.push((cut, cut + 1));
        }
        edges.truncate(max_edges);
        OrderedGraph::new(n, &edges).unwrap()
    }

    /// Every edge crosses one of two gaps, so two points stab everything.
    fn random_two_split_graph(state: &mut u64, n: u32, max_edges: usize) -> OrderedGraph {
        let c1 = 1 + (xorshift(state) % (n as u64 - 2)) as u32;
        let c2 = c1 + 1 + (xorshift(state) % (n as u64 - c1 as u64 - 1)) as u32;
        let mut edges = Vec::new();
        for u in 1..n {
            for v in u + 1..=n {
                let over1 = u <= c1 && c1 < v;
                let over2 = u <= c2 && c2 < v;
                if (over1 || over2) && !xorshift(state).is_multiple_of(3) {
                    edges.push((u, v));
                }
            }
        }
        if edges.is_empty() {
            edges.push((c1, c1 + 1));
        }
        edges.truncate(max_edges);
        OrderedGraph::new(n, &edges).unwrap()
    }

    fn brute_force_hitting_size(g: &OrderedGraph) -> usize {
        if g.edge_count() == 0 {
            return 0;
        }
        let gaps: Vec<u32> = (1..g.vertex_count()).collect();
        for size in 1..=gaps.len() {
            for mask in 0u64..1 << gaps.len() {
                if mask.count_ones() as usize != size {
                    continue;
                }
                let all_hit = (0..g.edge_count()).all(|e| {
                    let (u, v) = g.endpoints(e);
                    gaps.iter().enumerate().any(|(i, &gap)| {
                        mask >> i & 1 == 1 && SpinePoint::new(gap).inside(u, v)
                    })
                });
                if all_hit {
                    return size;
                }
            }
        }
        unreachable!("one point per gap hits everything");
    }

    #[test]
    fn greedy_hitting_set_on_listed_shapes() {
        let k22 = separated_k22();
        let hs = greedy_hitting_set(&k22);
        assert_eq!(hs.points(), &[SpinePoint::new(2)]);
        assert_eq!(hs.points()[0].to_string(), "2.5");
        assert!(hs.covers(&k22));

        let k4 = OrderedGraph::complete(4).unwrap();
        let hs = greedy_hitting_set(&k4);
        let expect: Vec<SpinePoint> = [1, 2, 3].into_iter().map(SpinePoint::new).collect();
        assert_eq!(hs.points(), &expect[..]);

        let single = OrderedGraph::new(2, &[(1, 2)]).unwrap();
        assert_eq!(greedy_hitting_set(&single).points(), &[SpinePoint::new(1)]);

        let edgeless = OrderedGraph::new(5, &[]).unwrap();
        assert!(greedy_hitting_set(&edgeless).is_empty());
    }

    #[test]
    fn greedy_hitting_set_is_minimum() {
        let mut state = 0x51ce9d2f04a1b77u64;
        for _ in 0..120 {
            let n = 4 + (xorshift(&mut state) % 6) as u32;
            let mut edges = Vec::new();
            for u in 1..n {
                for v in u + 1..=n {
                    if xorshift(&mut state).is_multiple_of(3) {
                        edges.push((u, v));
                    }
                }
            }
            edges.truncate(12);
            let g = OrderedGraph::new(n, &edges).unwrap();
            let hs = greedy_hitting_set(&g);
            assert!(hs.covers(&g));
            assert_eq!(hs.len(), brute_force_hitting_size(&g), "{g:?}");
        }
    }

    #[test]
    fn bridge_sets_follow_the_interval_definition() {
        // h = 2 shape: (1,2) sits left, (3,4) right, (1,4) spans both points
        let g = OrderedGraph::new(4, &[(1, 2), (3, 4), (1, 4)]).unwrap();
        let hs = greedy_hitting_set(&g);
        let expect: Vec<SpinePoint> = [1, 3].into_iter().map(SpinePoint::new).collect();
        assert_eq!(hs.points(), &expect[..]);
        assert_eq!(bridge_set(&g, &hs, 0), vec![SpinePoint::new(1)]);
        assert_eq!(bridge_set(&g, &hs, 1), vec![SpinePoint::new(3)]);
        assert_eq!(bridge_set(&g, &hs, 2), expect);
        assert_eq!(edges_bridging(&g, &hs, &[SpinePoint::new(1)]), EdgeSubset::single(0));
        assert_eq!(edges_bridging(&g, &hs, &expect), EdgeSubset::single(2));

        // a single point is bridged by every edge
        let k22 = separated_k22();
        let hs = greedy_hitting_set(&k22);
        assert_eq!(
            edges_bridging(&k22, &hs, &[SpinePoint::new(2)]),
            k22.all_edges()
        );
    }

    #[test]
    fn bridge_classes_partition_the_edges() {
        let mut state = 0x9be2a71c5f00d13u64;
        for _ in 0..60 {
            let g = random_two_split_graph(&mut state, 7, 10);
            let hs = greedy_hitting_set(&g);
            let classes = bridge_classes(&g, &hs);
            let mut union = EdgeSubset::EMPTY;
            for (mask, members) in &classes {
                assert_ne!(*mask, 0, "every edge contains a hitting point");
                assert!(!members.intersects(union));
                union = union | *members;
            }
            assert_eq!(union, g.all_edges());
        }
    }

    #[test]
    fn network_shape_on_separated_k22() {
        let g = separated_k22();
        let net = build_network(&g, g.all_edges(), g.all_edges(), 1).unwrap();
        // containment arcs, read back as edge pairs
        let m = g.edge_count();
        let mut chains: Vec<(usize, usize)> = net
            .arcs()
            .iter()
            .filter(|a| a.from < 2 * m && a.from % 2 == 1 && a.to < 2 * m)
            .map(|a| (a.from / 2, a.to / 2))
            .collect();
        chains.sort_unstable();
        let e13 = idx(&g, 1, 3);
        let e14 = idx(&g, 1, 4);
        let e23 = idx(&g, 2, 3);
        let e24 = idx(&g, 2, 4);
        let mut expect = vec![(e23, e13), (e23, e14), (e13, e14), (e24, e14), (e23, e24)];
        expect.sort_unstable();
        assert_eq!(chains, expect);

        for a in net.arcs() {
            if a.cost < 0 {
                assert_eq!(a.cost, -1);
                assert_eq!(a.capacity, 1);
                assert_eq!(a.to, a.from + 1);
                assert!(a.from % 2 == 0 && a.to < 2 * m);
            }
            if a.from == net.source() {
                assert_eq!(a.to, net.gate());
                assert_eq!(a.capacity, 1); // p = 1
            }
        }

        assert!(build_network(&OrderedGraph::complete(4).unwrap(), EdgeSubset::full(6), EdgeSubset::full(6), 1).is_err());
        assert!(build_network(&g, EdgeSubset::EMPTY, g.all_edges(), 1).is_err());
    }

    #[test]
    fn flow_finds_longest_chains_on_separated_k22() {
        let g = separated_k22();
        let net1 = build_network(&g, g.all_edges(), g.all_edges(), 1).unwrap();
        let (value, cost, flows) = min_cost_max_flow(&net1);
        assert_eq!((value, cost), (1, -3));
        assert_eq!(flow_chains(&net1, &flows).len(), 1);

        let net2 = build_network(&g, g.all_edges(), g.all_edges(), 2).unwrap();
        let (value, cost, _) = min_cost_max_flow(&net2);
        assert_eq!((value, cost), (2, -4));
    }

    #[test]
    fn flow_degenerate_networks() {
        // no edge nodes at all: only the source-gate arc, no path to the sink
        let empty = FlowNetwork {
            edge_nodes: 0,
            arcs: vec![FlowArc {
                from: 0,
                to: 1,
                capacity: 3,
                cost: 0,
            }],
        };
        assert_eq!(min_cost_max_flow(&empty), (0, 0, vec![0]));

        let single = OrderedGraph::new(2, &[(1, 2)]).unwrap();
        let net = build_network(&single, single.all_edges(), single.all_edges(), 1).unwrap();
        let (value, cost, _) = min_cost_max_flow(&net);
        assert_eq!((value, cost), (1, -1));

        // chain budget above the edge supply saturates at one chain
        let net = build_network(&single, single.all_edges(), single.all_edges(), 5).unwrap();
        let (value, cost, _) = min_cost_max_flow(&net);
        assert_eq!((value, cost), (1, -1));
    }

    #[test]
    fn solve_h1_on_separated_k22() {
        let g = separated_k22();
        let (deleted, assignment) = solve_h1(&g, 1).unwrap();
        assert_eq!(deleted.len(), 1);
        assert!(g.is_d_planar(&assignment, 0));
        assert_eq!(assignment.deleted(), deleted);

        let (deleted, assignment) = solve_h1(&g, 2).unwrap();
        assert!(deleted.is_empty());
        assert!(g.is_d_planar(&assignment, 0));

        // a containment chain fits one page with nothing deleted
        let chain = OrderedGraph::new(5, &[(3, 4), (2, 4), (2, 5), (1, 5)]).unwrap();
        let (deleted, assignment) = solve_h1(&chain, 1).unwrap();
        assert!(deleted.is_empty());
        assert!(chain.is_d_planar(&assignment, 0));

        let k4 = OrderedGraph::complete(4).unwrap();
        assert!(solve_h1(&k4, 2).is_err());
    }

    #[test]
    fn solve_h1_matches_the_deletion_oracle() {
        let mut state = 0x7d4b9f31e8c6a25u64;
        for round in 0..90 {
            let n = 4 + (xorshift(&mut state) % 4) as u32;
            let cut = 1 + (xorshift(&mut state) % (n as u64 - 1)) as u32;
            let g = random_split_graph(&mut state, n, cut, 10);
            let p = 1 + (round % 3) as u32;
            let (deleted, assignment) = solve_h1(&g, p).unwrap();
            let oracle = oracle_min_deletion(&g, p, 0).unwrap();
            assert_eq!(deleted.len() as u64, oracle, "p={p} {g:?}");
            assert!(g.is_d_planar(&assignment, 0));
            assert_eq!(assignment.deleted(), deleted);
        }
    }

    #[test]
    fn one_point_pages_are_containment_chains() {
        let mut state = 0x3f8c1d5a9b7e461u64;
        for _ in 0..40 {
            let n = 4 + (xorshift(&mut state) % 4) as u32;
            let cut = 1 + (xorshift(&mut state) % (n as u64 - 1)) as u32;
            let g = random_split_graph(&mut state, n, cut, 10);
            let page = crate::circle_mis::max_noncrossing_subset(&g, g.all_edges());
            let edges: Vec<usize> = page.iter().collect();
            for (i, &e) in edges.iter().enumerate() {
                for &f in &edges[i + 1..] {
                    assert!(
                        g.contains(e, f) || g.contains(f, e),
                        "edges {e} and {f} on one page must nest in {g:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn compatibility_of_boundary_sets() {
        let g = separated_k22();
        let e13 = idx(&g, 1, 3);
        let e14 = idx(&g, 1, 4);
        let e23 = idx(&g, 2, 3);
        let e24 = idx(&g, 2, 4);

        let single = EdgeSubset::single(e23);
        let (kept, chains) = compatible(&g, single, single, 1).unwrap().unwrap();
        assert_eq!(kept, single);
        assert_eq!(chains, vec![single]);

        let inner = EdgeSubset::single(e23) | EdgeSubset::single(e24);
        let outer = EdgeSubset::single(e14) | EdgeSubset::single(e24);
        let (kept, chains) = compatible(&g, inner, outer, 2).unwrap().unwrap();
        assert_eq!(kept, g.all_edges());
        let long: EdgeSubset = [e23, e13, e14].into_iter().collect();
        assert_eq!(chains, vec![long, EdgeSubset::single(e24)]);

        // (2,3) does not contain (1,4), so the pairing fails
        assert!(compatible(&g, EdgeSubset::single(e14), EdgeSubset::single(e23), 1)
            .unwrap()
            .is_none());

        assert!(compatible(&g, single, inner, 1).is_err());
    }

    #[test]
    fn kept_count_equals_negated_flow_cost() {
        let mut state = 0xa1e77b93c25d84fu64;
        for _ in 0..40 {
            let n = 4 + (xorshift(&mut state) % 4) as u32;
            let cut = 1 + (xorshift(&mut state) % (n as u64 - 1)) as u32;
            let g = random_split_graph(&mut state, n, cut, 10);
            let p = 1 + (xorshift(&mut state) % 3) as u32;
            let net = build_network(&g, g.all_edges(), g.all_edges(), p).unwrap();
            let (_, cost, flows) = min_cost_max_flow(&net);
            let kept: usize = flow_chains(&net, &flows).iter().map(|c| c.len()).sum();
            assert_eq!(kept as i64, -cost);
        }
    }

    #[test]
    fn general_solver_handles_the_single_point_case() {
        let mut state = 0x6c2f8a41d97e5b3u64;
        for round in 0..30 {
            let n = 4 + (xorshift(&mut state) % 3) as u32;
            let cut = 1 + (xorshift(&mut state) % (n as u64 - 1)) as u32;
            let g = random_split_graph(&mut state, n, cut, 7);
            let p = 1 + (round % 2) as u32;
            let (from_flow, _) = solve_h1(&g, p).unwrap();
            let (from_general, assignment) = solve_general(&g, p).unwrap();
            assert_eq!(from_general.len(), from_flow.len(), "p={p} {g:?}");
            assert!(g.is_d_planar(&assignment, 0));
        }
    }

    #[test]
    fn general_solver_on_k4() {
        let k4 = OrderedGraph::complete(4).unwrap();
        let (deleted, assignment) = solve_general(&k4, 1).unwrap();
        assert_eq!(deleted.len(), 1);
        assert!(k4.is_d_planar(&assignment, 0));

        let (deleted, assignment) = solve_general(&k4, 2).unwrap();
        assert!(deleted.is_empty());
        assert!(k4.is_d_planar(&assignment, 0));
        assert_eq!(assignment.deleted(), EdgeSubset::EMPTY);
    }

    #[test]
    fn general_solver_matches_the_deletion_oracle() {
        let mut state = 0xe59d03b7a6f14c9u64;
        for round in 0..50 {
            let g = random_two_split_graph(&mut state, 7, 8);
            let p = 1 + (round % 2) as u32;
            let (deleted, assignment) = solve_general(&g, p).unwrap();
            let oracle = oracle_min_deletion(&g, p, 0).unwrap();
            assert_eq!(deleted.len() as u64, oracle, "p={p} {g:?}");
            assert!(g.is_d_planar(&assignment, 0));
            assert_eq!(assignment.deleted(), deleted);
        }
    }

    #[test]
    fn encoding_enumeration_covers_optimal_drawings() {
        let mut state = 0x48b1f6e2c3a9d07u64;
        let mut rounds = 0;
        while rounds < 12 {
            let g = random_two_split_graph(&mut state, 6, 7);
            let m = g.edge_count();
            let p = 1 + (rounds % 2) as u32;
            let hs = greedy_hitting_set(&g);
            let classes = bridge_classes(&g, &hs);
            let codes = page_codes(&g, &classes, (2 * hs.len()).saturating_sub(1)).unwrap();

            // best drawing by direct search: largest kept subset that fits
            // p crossing-free pages, witnessed by the exact page solver
            let mut witness = None;
            'sizes: for kept_size in (0..=m).rev() {
                for mask in 0u64..1 << m {
                    if mask.count_ones() as usize != kept_size {
                        continue;
                    }
                    let keep = EdgeSubset(mask);
                    let (sub, back) = g.subgraph(keep);
                    let (levels, layout) = crossing_numbers_up_to(&sub, p).unwrap();
                    if *levels.last().unwrap() == 0 {
                        witness = Some((keep, back, layout));
                        break 'sizes;
                    }
                }
            }
            let (_, back, layout) = witness.unwrap();

            // read the boundary triples off the witness, page by page
            for q in 1..=p {
                let mut triples: Vec<PageTriple> = Vec::new();
                for (ci, &(_, members)) in classes.iter().enumerate() {
                    let on_page: Vec<usize> = layout
                        .edges_on_page(q)
                        .iter()
                        .map(|local| back[local])
                        .filter(|&e| members.contains(e))
                        .collect();
                    if on_page.is_empty() {
                        continue;
                    }
                    let span = |&e: &usize| {
                        let (u, v) = g.endpoints(e);
                        v - u
                    };
                    let inner = *on_page.iter().min_by_key(|e| span(e)).unwrap();
                    let outer = *on_page.iter().max_by_key(|e| span(e)).unwrap();
                    triples.push(PageTriple {
                        class: ci,
                        inner,
                        outer,
                    });
                }
                assert!(
                    codes.iter().any(|code| code.as_ref() == triples.as_slice()),
                    "page {q} boundaries {triples:?} missing for {g:?}"
                );
            }
            rounds += 1;
        }
    }

    #[test]
    fn encoding_budget_is_enforced() {
        let k4 = OrderedGraph::complete(4).unwrap();
        match solve_general_limited(&k4, 1, 10) {
            Err(Error::Capacity { limit, .. }) => assert_eq!(limit, 10),
            other => panic!("expected a capacity error, got {other:?}"),
        }
        assert!(solve_general_limited(&k4, 1, 100).is_ok());
    }
}
