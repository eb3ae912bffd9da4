//! Fewest edge deletions until one page tolerates its crossings.
//!
//! The target is a layout on a single page where every surviving edge keeps
//! at most `d` crossings. Edges crossed much more than `d` times are dealt
//! with by branching: delete the edge itself, or keep it and delete all but
//! `d` of its crossing partners. Once no edge is crossed `d + sqrt(k)` times
//! or more, the crossing structure is tame enough that its conflict graph
//! (one vertex per edge, one edge per crossing pair) decomposes along
//! balanced separators into small bags, and a tree-decomposition dynamic
//! program finishes the job as a degree-bounded vertex deletion.
//!
//! The separator construction sorts the edge intervals by how much they
//! enclose. An edge enclosing a middling stretch splits the instance by
//! itself; if every edge encloses little, a sweep over the maximal edges
//! finds a cut position; an edge enclosing almost everything reduces to the
//! sweep inside it. Each case surrenders at most `3(d+1)` edges to the
//! separator and leaves parts of at most two thirds the instance.

use crate::error::{Error, Result};
use crate::graph::OrderedGraph;
use crate::oracles::oracle_degree_deletion;
use crate::subset::EdgeSubset;

/// Heavy branching stops once a single edge would spawn this many subsets.
pub const DEFAULT_HEAVY_BRANCH_LIMIT: u64 = 1_000_000;
/// Decompositions wider than this are handed to the exhaustive fallback.
pub const DEFAULT_WIDTH_LIMIT: usize = 18;
/// Largest dense state table a single bag may allocate.
const STATE_LIMIT: u64 = 1 << 22;
/// Largest state-pair product a join node may enumerate.
const JOIN_LIMIT: u64 = 1 << 26;

/// One subproblem of the deletion search: make `g` d-planar on one page by
/// deleting at most `k` edges.
#[derive(Clone)]
pub struct Instance {
    pub g: OrderedGraph,
    pub k: u32,
    pub d: u32,
}

/// A three-way split of the edges: removing `separator` leaves `part1` and
/// `part2` with no crossings between them, and neither part holds more than
/// two thirds of the edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Separation {
    pub separator: EdgeSubset,
    pub part1: EdgeSubset,
    pub part2: EdgeSubset,
}

impl Separation {
    /// Checks every promise made by [`balanced_separator`] for a `d`-planar
    /// graph: partition, separator size, part balance, and no crossing pair
    /// straddling the parts.
    pub fn validate(&self, g: &OrderedGraph, d: u32) -> Result<()> {
        let m = g.edge_count();
        let whole = self.separator | self.part1 | self.part2;
        let sizes = self.separator.len() + self.part1.len() + self.part2.len();
        if whole != g.all_edges() || sizes != m {
            return Err(Error::invalid("separation does not partition the edges"));
        }
        if self.separator.len() as u64 > 3 * (d as u64 + 1) {
            return Err(Error::invalid(format!(
                "separator holds {} edges, above 3(d+1) = {}",
                self.separator.len(),
                3 * (d + 1)
            )));
        }
        for part in [self.part1, self.part2] {
            if 3 * part.len() > 2 * m {
                return Err(Error::invalid(format!(
                    "a part holds {} of {m} edges, above two thirds",
                    part.len()
                )));
            }
        }
        for e in self.part1.iter() {
            let bad = g.cross_set(e) & self.part2;
            if !bad.is_empty() {
                return Err(Error::invalid(format!(
                    "edge {e} crosses edge {} in the other part",
                    bad.smallest().unwrap()
                )));
            }
        }
        Ok(())
    }
}

fn check_d_planar(g: &OrderedGraph, d: u32) -> Result<()> {
    for e in 0..g.edge_count() {
        let c = g.cross_set(e).len() as u32;
        if c > d {
            let (u, v) = g.endpoints(e);
            return Err(Error::invalid(format!(
                "edge ({u}, {v}) has {c} crossings, above d = {d}"
            )));
        }
    }
    Ok(())
}

/// Splits a one-page `d`-planar graph into a separator of at most `3(d+1)`
/// edges and two mutually non-crossing parts of at most `2m/3` edges each.
pub fn balanced_separator(g: &OrderedGraph, d: u32) -> Result<Separation> {
    check_d_planar(g, d)?;
    let m = g.edge_count();
    let all = g.all_edges();
    let spans: Vec<usize> = (0..m).map(|e| g.span_set(e).len()).collect();

    // an edge enclosing between a third and (just over) two thirds of the
    // instance separates by itself; prefer the tightest such edge
    let window = (0..m)
        .filter(|&e| 3 * spans[e] >= m && 3 * spans[e] <= 2 * m + 3 * (d as usize + 1))
        .min_by_key(|&e| (spans[e], e));
    if let Some(e) = window {
        let mut separator = EdgeSubset::single(e) | g.cross_set(e);
        let mut part1 = g.span_set(e) - separator;
        // enclosing beyond two thirds is allowed by at most d+1 edges,
        // which are shed into the separator
        while 3 * part1.len() > 2 * m {
            let shed = widest_reaching(g, part1);
            part1.remove(shed);
            separator.insert(shed);
        }
        let part2 = all - separator - part1;
        return finish(g, d, separator, part1, part2);
    }

    // an edge enclosing more than that reduces to the sweep inside it
    let big = (0..m)
        .filter(|&e| 3 * spans[e] > 2 * m + 3 * (d as usize + 1))
        .min_by_key(|&e| (spans[e], e));
    if let Some(e) = big {
        let inner = g.span_set(e);
        let (cut, left) = sweep_cut(g, inner, m, d)
            .ok_or_else(|| Error::invalid("separator sweep failed inside an enclosing edge"))?;
        let separator = EdgeSubset::single(e) | g.cross_set(e) | cut;
        let part1 = left - separator;
        let part2 = all - separator - part1;
        return finish(g, d, separator, part1, part2);
    }

    // every edge encloses less than a third: sweep the whole instance,
    // unless it is too small for the sweep's counting argument to bite
    if m > 3 * (d as usize + 1) {
        if let Some((cut, left)) = sweep_cut(g, all, m, d) {
            let part1 = left - cut;
            let part2 = all - cut - part1;
            return finish(g, d, cut, part1, part2);
        }
    }
    finish(g, d, all, EdgeSubset::EMPTY, EdgeSubset::EMPTY)
}

fn finish(
    g: &OrderedGraph,
    d: u32,
    separator: EdgeSubset,
    part1: EdgeSubset,
    part2: EdgeSubset,
) -> Result<Separation> {
    let sep = Separation {
        separator,
        part1,
        part2,
    };
    debug_assert!(sep.validate(g, d).is_ok());
    Ok(sep)
}

/// The edge of `pool` with the largest right endpoint, ties to the smallest
/// index.
fn widest_reaching(g: &OrderedGraph, pool: EdgeSubset) -> usize {
    pool.iter()
        .max_by_key(|&e| (g.endpoints(e).1, usize::MAX - e))
        .expect("pool is nonempty")
}

/// Sweep step shared by the whole-instance and enclosed-subinstance cases.
/// Walks the maximal edges of `alive` left to right until the edges ending
/// before the current left endpoint exceed a third of `m_total`, then cuts
/// at that maximal edge. Returns the cut set and the edges left of the cut;
/// `None` when every position keeps a third or less behind it, which the
/// counting argument rules out for callers with `m_total > 3(d+1)`.
fn sweep_cut(
    g: &OrderedGraph,
    alive: EdgeSubset,
    m_total: usize,
    d: u32,
) -> Option<(EdgeSubset, EdgeSubset)> {
    let mut maximal: Vec<usize> = g.maximal_edges_in(alive).iter().collect();
    maximal.sort_by_key(|&e| g.endpoints(e).0);
    let cut_at = (0..maximal.len())
        .take_while(|&i| {
            let u = g.endpoints(maximal[i]).0;
            3 * (g.left_set(u) & alive).len() <= m_total
        })
        .count();
    if cut_at >= maximal.len() {
        return None;
    }
    let estar = maximal[cut_at];
    let mut cut = EdgeSubset::single(estar) | g.cross_set(estar);
    let mut left = (g.left_set(g.endpoints(estar).0) & alive) - cut;
    // the region behind the cut may overshoot two thirds by up to d+1
    // edges; shedding the d+1 widest-reaching restores the balance
    for _ in 0..=d {
        if left.is_empty() {
            break;
        }
        let shed = widest_reaching(g, left);
        left.remove(shed);
        cut.insert(shed);
    }
    Some((cut, left))
}

/// A rooted tree of bags over the vertices of a conflict graph (edge
/// indices of the underlying ordered graph).
#[derive(Debug, Clone)]
pub struct TreeDecomposition {
    bags: Vec<EdgeSubset>,
    children: Vec<Vec<usize>>,
    root: usize,
}

impl TreeDecomposition {
    pub fn bags(&self) -> &[EdgeSubset] {
        &self.bags
    }

    pub fn children(&self, node: usize) -> &[usize] {
        &self.children[node]
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn width(&self) -> usize {
        let largest = self.bags.iter().map(|b| b.len()).max().unwrap_or(0);
        largest.saturating_sub(1)
    }
}

/// Crossing partners of every edge, i.e. the adjacency masks of the
/// conflict graph.
pub fn conflict_adjacency(g: &OrderedGraph) -> Vec<EdgeSubset> {
    (0..g.edge_count()).map(|e| g.cross_set(e)).collect()
}

/// Tree decomposition of the conflict graph by recursive balanced
/// separation; bags stay within O((d+1) log m).
pub fn build_decomposition(g: &OrderedGraph, d: u32) -> Result<TreeDecomposition> {
    check_d_planar(g, d)?;
    let mut bags = Vec::new();
    let mut children = Vec::new();
    let root = decompose_into(g, d, g.all_edges(), EdgeSubset::EMPTY, &mut bags, &mut children)?;
    // edges crossing nothing need no company: pulling each into its own
    // bag keeps crossing-free regions from inflating the width
    let loners: EdgeSubset = (0..g.edge_count())
        .filter(|&e| g.cross_set(e).is_empty())
        .collect();
    if !loners.is_empty() {
        for bag in &mut bags {
            *bag = *bag - loners;
        }
        for v in loners.iter() {
            bags.push(EdgeSubset::single(v));
            children.push(Vec::new());
            let leaf = bags.len() - 1;
            children[root].push(leaf);
        }
    }
    Ok(TreeDecomposition {
        bags,
        children,
        root,
    })
}

fn decompose_into(
    g: &OrderedGraph,
    d: u32,
    alive: EdgeSubset,
    boundary: EdgeSubset,
    bags: &mut Vec<EdgeSubset>,
    children: &mut Vec<Vec<usize>>,
) -> Result<usize> {
    let (sub, back) = g.subgraph(alive);
    let sep = balanced_separator(&sub, d)?;
    let lift = |set: EdgeSubset| -> EdgeSubset { set.iter().map(|e| back[e]).collect() };
    let bag = boundary | lift(sep.separator);
    let node = bags.len();
    bags.push(bag);
    children.push(Vec::new());
    for part in [lift(sep.part1), lift(sep.part2)] {
        if part.is_empty() {
            continue;
        }
        debug_assert!(3 * part.len() <= 2 * alive.len());
        let mut reach = EdgeSubset::EMPTY;
        for e in part.iter() {
            reach = reach | g.cross_set(e);
        }
        let child = decompose_into(g, d, part, bag & (reach - part), bags, children)?;
        children[node].push(child);
    }
    Ok(node)
}

/// Checks the three tree-decomposition axioms for the conflict graph given
/// by `adj`: every vertex in a bag, every adjacent pair in a common bag,
/// and each vertex's bags forming a connected subtree.
pub fn validate_decomposition(adj: &[EdgeSubset], td: &TreeDecomposition) -> Result<()> {
    let n = adj.len();
    let mut seen = EdgeSubset::EMPTY;
    for bag in &td.bags {
        seen = seen | *bag;
    }
    for v in 0..n {
        if !seen.contains(v) {
            return Err(Error::invalid(format!("vertex {v} is in no bag")));
        }
    }
    for (v, nbrs) in adj.iter().enumerate() {
        for u in nbrs.iter().filter(|&u| u > v) {
            let covered = td
                .bags
                .iter()
                .any(|bag| bag.contains(v) && bag.contains(u));
            if !covered {
                return Err(Error::invalid(format!(
                    "adjacent pair {{{v}, {u}}} shares no bag"
                )));
            }
        }
    }
    let mut parent = vec![usize::MAX; td.bags.len()];
    for (node, kids) in td.children.iter().enumerate() {
        for &kid in kids {
            parent[kid] = node;
        }
    }
    for v in 0..n {
        let holders: Vec<usize> = (0..td.bags.len())
            .filter(|&i| td.bags[i].contains(v))
            .collect();
        let linked = holders
            .iter()
            .filter(|&&i| i != td.root && td.bags[parent[i]].contains(v))
            .count();
        if linked + 1 != holders.len() {
            return Err(Error::invalid(format!(
                "bags holding vertex {v} form a disconnected subtree"
            )));
        }
    }
    Ok(())
}

enum NiceStep {
    Leaf,
    Introduce(usize, usize),
    Forget(usize, usize),
    Join(usize, usize),
}

struct NiceNode {
    step: NiceStep,
    bag: Vec<usize>,
}

/// Rebuilds `td` as a chain of leaf/introduce/forget/join nodes ending in
/// an empty root bag.
fn build_nice(td: &TreeDecomposition) -> (Vec<NiceNode>, usize) {
    let mut nodes = Vec::new();
    let top = nice_of(td, td.root, &mut nodes);
    let mut at = top;
    for v in td.bags[td.root].iter() {
        at = push_forget(&mut nodes, v, at);
    }
    (nodes, at)
}

fn nice_of(td: &TreeDecomposition, node: usize, nodes: &mut Vec<NiceNode>) -> usize {
    let bag = td.bags[node];
    let mut built: Vec<usize> = Vec::new();
    for &kid in &td.children[node] {
        let mut at = nice_of(td, kid, nodes);
        for v in (td.bags[kid] - bag).iter() {
            at = push_forget(nodes, v, at);
        }
        for v in (bag - td.bags[kid]).iter() {
            at = push_introduce(nodes, v, at);
        }
        built.push(at);
    }
    match built.len() {
        0 => {
            let mut at = nodes.len();
            nodes.push(NiceNode {
                step: NiceStep::Leaf,
                bag: Vec::new(),
            });
            for v in bag.iter() {
                at = push_introduce(nodes, v, at);
            }
            at
        }
        _ => {
            let mut at = built[0];
            for &other in &built[1..] {
                let joined = nodes.len();
                nodes.push(NiceNode {
                    step: NiceStep::Join(at, other),
                    bag: nodes[at].bag.clone(),
                });
                at = joined;
            }
            at
        }
    }
}

fn push_introduce(nodes: &mut Vec<NiceNode>, v: usize, child: usize) -> usize {
    let mut bag = nodes[child].bag.clone();
    let pos = bag.partition_point(|&x| x < v);
    bag.insert(pos, v);
    nodes.push(NiceNode {
        step: NiceStep::Introduce(v, child),
        bag,
    });
    nodes.len() - 1
}

fn push_forget(nodes: &mut Vec<NiceNode>, v: usize, child: usize) -> usize {
    let mut bag = nodes[child].bag.clone();
    let pos = bag.binary_search(&v).expect("forgotten vertex is in bag");
    bag.remove(pos);
    nodes.push(NiceNode {
        step: NiceStep::Forget(v, child),
        bag,
    });
    nodes.len() - 1
}

/// Smallest vertex set of size at most `k` whose removal leaves every
/// vertex of the conflict graph with degree at most `d`, computed along
/// `td`. Each bag vertex is either deleted or kept while tracking how many
/// of its already-forgotten neighbors were kept; a vertex may only be
/// forgotten once its kept-neighbor count is final and at most `d`.
pub fn degree_d_deletion(
    adj: &[EdgeSubset],
    td: &TreeDecomposition,
    d: u32,
    k: u32,
) -> Result<Option<EdgeSubset>> {
    validate_decomposition(adj, td)?;
    let (nodes, root) = build_nice(td);
    let base = d as u64 + 2;
    let mut tables: Vec<Vec<Option<EdgeSubset>>> = Vec::with_capacity(nodes.len());
    for node in &nodes {
        let width = node.bag.len() as u32;
        let size = base
            .checked_pow(width)
            .filter(|&s| s <= STATE_LIMIT)
            .ok_or_else(|| {
                Error::capacity(
                    "deletion state table",
                    base.saturating_pow(width),
                    STATE_LIMIT,
                )
            })? as usize;
        if matches!(node.step, NiceStep::Join(..)) && (size as u64).pow(2) > JOIN_LIMIT {
            return Err(Error::capacity(
                "deletion join table",
                (size as u64).pow(2),
                JOIN_LIMIT,
            ));
        }
        let table = match &node.step {
            NiceStep::Leaf => vec![Some(EdgeSubset::EMPTY)],
            NiceStep::Introduce(v, child) => {
                introduce_table(&tables[*child], &nodes[*child].bag, *v, base)
            }
            NiceStep::Forget(v, child) => {
                forget_table(&tables[*child], &nodes[*child].bag, *v, base, d, k, adj)
            }
            NiceStep::Join(left, right) => {
                join_table(&tables[*left], &tables[*right], &nodes[*left].bag, base, k)
            }
        };
        debug_assert_eq!(table.len(), size);
        tables.push(table);
    }
    let answer = tables[root][0];
    if let Some(set) = answer {
        debug_assert!((0..adj.len())
            .all(|v| set.contains(v) || (adj[v] - set).len() as u32 <= d));
    }
    Ok(answer)
}

fn better(slot: &mut Option<EdgeSubset>, candidate: EdgeSubset) {
    match slot {
        Some(old) if old.len() <= candidate.len() => {}
        _ => *slot = Some(candidate),
    }
}

fn introduce_table(
    child: &[Option<EdgeSubset>],
    child_bag: &[usize],
    v: usize,
    base: u64,
) -> Vec<Option<EdgeSubset>> {
    let pos = child_bag.partition_point(|&x| x < v);
    let lo = base.pow(pos as u32) as usize;
    let mut out = vec![None; child.len() * base as usize];
    for (code, entry) in child.iter().enumerate() {
        let Some(set) = entry else { continue };
        let split = (code / lo, code % lo);
        // the new vertex starts deleted (digit 0) or kept with no
        // forgotten neighbors (digit 1)
        for digit in 0..2usize {
            let code = (split.0 * base as usize + digit) * lo + split.1;
            better(&mut out[code], *set);
        }
    }
    out
}

fn forget_table(
    child: &[Option<EdgeSubset>],
    child_bag: &[usize],
    v: usize,
    base: u64,
    d: u32,
    k: u32,
    adj: &[EdgeSubset],
) -> Vec<Option<EdgeSubset>> {
    let pos = child_bag
        .binary_search(&v)
        .expect("forgotten vertex is in bag");
    let lo = base.pow(pos as u32) as usize;
    let mut out = vec![None; child.len() / base as usize];
    for (code, entry) in child.iter().enumerate() {
        let Some(set) = entry else { continue };
        let digit = code / lo % base as usize;
        let rest = (code / lo / base as usize) * lo + code % lo;
        if digit == 0 {
            // deleting v costs one; it never constrains its neighbors
            if set.len() as u32 >= k {
                continue;
            }
            let mut grown = *set;
            grown.insert(v);
            better(&mut out[rest], grown);
            continue;
        }
        // v is kept: its degree is final now, counting forgotten kept
        // neighbors plus the kept part of its bag neighborhood
        let mut final_degree = digit as u32 - 1;
        let mut bumped = rest;
        let mut dead = false;
        for (i, &u) in child_bag.iter().enumerate() {
            if u == v || !adj[v].contains(u) {
                continue;
            }
            let shift = if i < pos { i } else { i - 1 };
            let place = base.pow(shift as u32) as usize;
            let u_digit = bumped / place % base as usize;
            if u_digit == 0 {
                continue;
            }
            final_degree += 1;
            if u_digit as u64 == base - 1 {
                dead = true; // u would exceed d forgotten kept neighbors
                break;
            }
            bumped += place;
        }
        if dead || final_degree > d {
            continue;
        }
        better(&mut out[bumped], *set);
    }
    out
}

fn join_table(
    left: &[Option<EdgeSubset>],
    right: &[Option<EdgeSubset>],
    bag: &[usize],
    base: u64,
    k: u32,
) -> Vec<Option<EdgeSubset>> {
    let width = bag.len();
    let mut out = vec![None; left.len()];
    for (lc, lentry) in left.iter().enumerate() {
        let Some(lset) = lentry else { continue };
        for (rc, rentry) in right.iter().enumerate() {
            let Some(rset) = rentry else { continue };
            // the two subtrees share only the bag, so kept-neighbor
            // counts add and deletion sets union disjointly
            let mut code = 0usize;
            let mut ok = true;
            let mut place = 1usize;
            let (mut l, mut r) = (lc, rc);
            for _ in 0..width {
                let (ld, rd) = (l % base as usize, r % base as usize);
                if (ld == 0) != (rd == 0) {
                    ok = false;
                    break;
                }
                let merged = if ld == 0 { 0 } else { ld + rd - 1 };
                if merged as u64 >= base {
                    ok = false;
                    break;
                }
                code += merged * place;
                place *= base as usize;
                l /= base as usize;
                r /= base as usize;
            }
            if !ok {
                continue;
            }
            let union = *lset | *rset;
            if union.len() as u32 > k {
                continue;
            }
            better(&mut out[code], union);
        }
    }
    out
}

/// Integer ceiling of the square root.
fn ceil_sqrt(k: u32) -> u32 {
    (0..).find(|x| x * x >= k).unwrap()
}

/// Callback receiving each surviving branch leaf: the reduced graph, the
/// leftover budget, and the deletions that led there.
type LeafVisitor<'a> = dyn FnMut(&OrderedGraph, u32, &[(u32, u32)]) -> Result<()> + 'a;

/// Walks the branching tree: at each node the most-crossed edge beyond the
/// `d + sqrt(k)` threshold either leaves (budget minus one) or stays, in
/// which case all but `d` of its crossing partners leave. `on_leaf` sees
/// every surviving leaf with the deletions that led to it.
fn branch_walk(
    g: &OrderedGraph,
    k: u32,
    d: u32,
    heavy_limit: u64,
    path: &mut Vec<(u32, u32)>,
    on_leaf: &mut LeafVisitor<'_>,
) -> Result<()> {
    let threshold = d + ceil_sqrt(k).max(1);
    let edge = (0..g.edge_count())
        .filter(|&e| g.cross_set(e).len() as u32 >= threshold)
        .max_by_key(|&e| (g.cross_set(e).len(), usize::MAX - e));
    let Some(e) = edge else {
        return on_leaf(g, k, path);
    };
    let partners: Vec<usize> = g.cross_set(e).iter().collect();
    let c = partners.len() as u32;
    if k >= 1 {
        let (sub, _) = g.subgraph(g.all_edges() - EdgeSubset::single(e));
        path.push(g.endpoints(e));
        branch_walk(&sub, k - 1, d, heavy_limit, path, on_leaf)?;
        path.pop();
    }
    if c <= d + k {
        let take = (c - d) as usize;
        let ways = binomial(partners.len(), take);
        if ways > heavy_limit {
            return Err(Error::capacity("heavy branch count", ways, heavy_limit));
        }
        let mut picks: Vec<usize> = (0..take).collect();
        loop {
            let removed: EdgeSubset = picks.iter().map(|&i| partners[i]).collect();
            let (sub, _) = g.subgraph(g.all_edges() - removed);
            for f in removed.iter() {
                path.push(g.endpoints(f));
            }
            branch_walk(&sub, k - take as u32, d, heavy_limit, path, on_leaf)?;
            for _ in 0..take {
                path.pop();
            }
            if !advance_combination(&mut picks, partners.len()) {
                break;
            }
        }
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> u64 {
    let k = k.min(n - k);
    let mut out = 1u64;
    for i in 0..k {
        out = out.saturating_mul((n - i) as u64) / (i as u64 + 1);
    }
    out
}

fn advance_combination(picks: &mut [usize], n: usize) -> bool {
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

/// All leaves of the branching tree for `inst`. Every edge of a leaf has
/// fewer than `d + sqrt(k)` crossings (relative to the leaf's remaining
/// budget), and the original instance is solvable within budget exactly
/// when some leaf is.
pub fn branch(inst: &Instance) -> Result<Vec<Instance>> {
    let mut leaves = Vec::new();
    let mut path = Vec::new();
    branch_walk(
        &inst.g,
        inst.k,
        inst.d,
        DEFAULT_HEAVY_BRANCH_LIMIT,
        &mut path,
        &mut |g, k, _| {
            leaves.push(Instance {
                g: g.clone(),
                k,
                d: inst.d,
            });
            Ok(())
        },
    )?;
    Ok(leaves)
}

/// Minimum set of at most `k` edges whose deletion leaves every remaining
/// edge with at most `d` crossings on a single page, or `None` if the
/// budget cannot get there.
pub fn solve(inst: &Instance) -> Result<Option<EdgeSubset>> {
    solve_limited(inst, DEFAULT_HEAVY_BRANCH_LIMIT)
}

pub fn solve_limited(inst: &Instance, heavy_limit: u64) -> Result<Option<EdgeSubset>> {
    let mut best: Option<Vec<(u32, u32)>> = None;
    let mut path = Vec::new();
    branch_walk(
        &inst.g,
        inst.k,
        inst.d,
        heavy_limit,
        &mut path,
        &mut |g, k, path| {
            let extra = solve_leaf(g, k, inst.d)?;
            if let Some(set) = extra {
                let mut full: Vec<(u32, u32)> = path.to_vec();
                full.extend(set.iter().map(|e| g.endpoints(e)));
                if best.as_ref().is_none_or(|b| full.len() < b.len()) {
                    best = Some(full);
                }
            }
            Ok(())
        },
    )?;
    let Some(pairs) = best else { return Ok(None) };
    let set: EdgeSubset = pairs
        .iter()
        .map(|&(u, v)| inst.g.edge_index(u, v).expect("deleted edge exists"))
        .collect();
    debug_assert!({
        let (rest, _) = inst.g.subgraph(inst.g.all_edges() - set);
        check_d_planar(&rest, inst.d).is_ok()
    });
    Ok(Some(set))
}

/// Decides one branching leaf: decompose the conflict graph (any graph is
/// e-planar for e = its own maximum crossing count) and run the deletion
/// DP with the real `d`, falling back to exhaustive search if the
/// decomposition comes out too wide for dense tables.
fn solve_leaf(g: &OrderedGraph, k: u32, d: u32) -> Result<Option<EdgeSubset>> {
    let adj = conflict_adjacency(g);
    let d_eff = adj.iter().map(|s| s.len() as u32).max().unwrap_or(0);
    if d_eff <= d {
        return Ok(Some(EdgeSubset::EMPTY));
    }
    let td = build_decomposition(g, d_eff)?;
    if td.width() <= DEFAULT_WIDTH_LIMIT {
        match degree_d_deletion(&adj, &td, d, k) {
            Err(Error::Capacity { .. }) => {}
            other => return other,
        }
    }
    oracle_degree_deletion(&adj, d, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::oracle_min_deletion;

    fn xorshift(state: &mut u64) -> u64 {
        *state ^= *state << 13;
        *state ^= *state >> 7;
        *state ^= *state << 17;
        *state
    }

    fn random_graph(state: &mut u64, n_lo: u32, n_hi: u32, keep_mod: u64) -> OrderedGraph {
        let n = n_lo + (xorshift(state) % (n_hi - n_lo + 1) as u64) as u32;
        let mut edges = Vec::new();
        for u in 1..=n {
            for v in u + 1..=n {
                if !xorshift(state).is_multiple_of(keep_mod) {
                    edges.push((u, v));
                }
            }
        }
        edges.truncate(12);
        OrderedGraph::new(n, &edges).unwrap()
    }

    #[test]
    fn separator_on_nested_triple() {
        let g = OrderedGraph::new(6, &[(1, 6), (2, 5), (3, 4)]).unwrap();
        let sep = balanced_separator(&g, 0).unwrap();
        assert_eq!(sep.separator, EdgeSubset::single(1)); // (2,5)
        assert_eq!(sep.part1, EdgeSubset::single(2)); // (3,4)
        assert_eq!(sep.part2, EdgeSubset::single(0)); // (1,6)
    }

    #[test]
    fn separator_on_k4() {
        let g = OrderedGraph::complete(4).unwrap();
        let sep = balanced_separator(&g, 1).unwrap();
        let e13 = g.edge_index(1, 3).unwrap();
        let e24 = g.edge_index(2, 4).unwrap();
        assert_eq!(sep.separator, EdgeSubset::single(e13) | EdgeSubset::single(e24));
        assert_eq!(
            sep.part1,
            EdgeSubset::single(g.edge_index(1, 2).unwrap())
                | EdgeSubset::single(g.edge_index(2, 3).unwrap())
        );
        sep.validate(&g, 1).unwrap();
    }

    #[test]
    fn separator_accepts_tiny_instances() {
        let g = OrderedGraph::new(6, &[(1, 4), (2, 5), (3, 6)]).unwrap();
        let sep = balanced_separator(&g, 2).unwrap();
        assert_eq!(sep.separator, g.all_edges());
        assert!(sep.part1.is_empty() && sep.part2.is_empty());
        let empty = OrderedGraph::new(3, &[]).unwrap();
        balanced_separator(&empty, 0).unwrap().validate(&empty, 0).unwrap();
    }

    #[test]
    fn separator_rejects_overcrossed_input() {
        let k5 = OrderedGraph::complete(5).unwrap();
        assert!(balanced_separator(&k5, 1).is_err());
    }

    #[test]
    fn separator_invariants_on_random_d_planar_graphs() {
        let mut state = 0xc0ffee123456789u64;
        let mut done = 0;
        while done < 150 {
            let g = random_graph(&mut state, 4, 9, 3);
            let d = (xorshift(&mut state) % 3) as u32;
            // thin the graph until it is d-planar on one page
            let mut keep = g.all_edges();
            loop {
                let worst = keep
                    .iter()
                    .max_by_key(|&e| g.cross_set_in(e, keep).len())
                    .map(|e| (e, g.cross_set_in(e, keep).len() as u32));
                match worst {
                    Some((e, c)) if c > d => keep.remove(e),
                    _ => break,
                }
            }
            let (sub, _) = g.subgraph(keep);
            balanced_separator(&sub, d)
                .unwrap()
                .validate(&sub, d)
                .unwrap();
            done += 1;
        }
    }

    #[test]
    fn decomposition_of_crossing_free_graph_has_width_zero() {
        let g = OrderedGraph::new(5, &[(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)]).unwrap();
        let td = build_decomposition(&g, 0).unwrap();
        assert_eq!(td.width(), 0);
        validate_decomposition(&conflict_adjacency(&g), &td).unwrap();
    }

    #[test]
    fn decomposition_of_k4_has_width_one() {
        let g = OrderedGraph::complete(4).unwrap();
        let td = build_decomposition(&g, 1).unwrap();
        assert_eq!(td.width(), 1);
        validate_decomposition(&conflict_adjacency(&g), &td).unwrap();
    }

    #[test]
    fn decompositions_of_random_graphs_are_valid() {
        let mut state = 0xfeedface0badf00du64;
        for _ in 0..120 {
            let g = random_graph(&mut state, 4, 8, 4);
            let adj = conflict_adjacency(&g);
            let d_eff = adj.iter().map(|s| s.len() as u32).max().unwrap_or(0);
            let td = build_decomposition(&g, d_eff).unwrap();
            validate_decomposition(&adj, &td).unwrap();
        }
    }

    #[test]
    fn deletion_dp_on_small_conflict_graphs() {
        // K5's conflict graph is a 5-cycle on its five chords
        let k5 = OrderedGraph::complete(5).unwrap();
        let adj = conflict_adjacency(&k5);
        let td = build_decomposition(&k5, 2).unwrap();
        assert_eq!(degree_d_deletion(&adj, &td, 0, 2).unwrap(), None);
        let three = degree_d_deletion(&adj, &td, 0, 3).unwrap().unwrap();
        assert_eq!(three.len(), 3);
        assert_eq!(
            degree_d_deletion(&adj, &td, 2, 0).unwrap(),
            Some(EdgeSubset::EMPTY)
        );
        // single conflict edge, d = 0: one endpoint must go
        let k4 = OrderedGraph::complete(4).unwrap();
        let adj = conflict_adjacency(&k4);
        let td = build_decomposition(&k4, 1).unwrap();
        let one = degree_d_deletion(&adj, &td, 0, 1).unwrap().unwrap();
        assert_eq!(one.len(), 1);
    }

    #[test]
    fn deletion_dp_matches_oracle_on_random_conflict_graphs() {
        let mut state = 0xabcdef987654321u64;
        for round in 0..60 {
            let g = random_graph(&mut state, 4, 7, 3);
            let adj = conflict_adjacency(&g);
            let d_eff = adj.iter().map(|s| s.len() as u32).max().unwrap_or(0);
            let td = build_decomposition(&g, d_eff).unwrap();
            for d in 0..=2u32 {
                for k in 0..=4u32 {
                    let dp = degree_d_deletion(&adj, &td, d, k).unwrap();
                    let oracle = oracle_degree_deletion(&adj, d, k).unwrap();
                    assert_eq!(
                        dp.map(|s| s.len()),
                        oracle.map(|s| s.len()),
                        "round {round} d {d} k {k} edges {:?}",
                        g.edges()
                    );
                    if let Some(s) = dp {
                        assert!((0..adj.len())
                            .all(|v| s.contains(v) || (adj[v] - s).len() as u32 <= d));
                    }
                }
            }
        }
    }

    #[test]
    fn branching_on_small_complete_graphs() {
        let k4 = OrderedGraph::complete(4).unwrap();
        let leaves = branch(&Instance {
            g: k4.clone(),
            k: 1,
            d: 0,
        })
        .unwrap();
        // light leaf drops (1,3); the heavy leaf keeps it and drops (2,4)
        assert_eq!(leaves.len(), 2);
        assert!(leaves.iter().all(|l| l.g.edge_count() == 5 && l.k == 0));
        assert!(!leaves[0].g.edges().contains(&(1, 3)));
        assert!(!leaves[1].g.edges().contains(&(2, 4)));

        // K5 with d = 0, k = 1: every chord has two crossings, so the
        // heavy side is out of budget and the light child dead-ends too
        let k5 = OrderedGraph::complete(5).unwrap();
        let leaves = branch(&Instance {
            g: k5.clone(),
            k: 1,
            d: 0,
        })
        .unwrap();
        assert!(leaves.is_empty());

        // an already sparse instance is its own single leaf
        let path = OrderedGraph::new(4, &[(1, 2), (2, 3), (3, 4)]).unwrap();
        let leaves = branch(&Instance {
            g: path.clone(),
            k: 2,
            d: 0,
        })
        .unwrap();
        assert_eq!(leaves.len(), 1);
        assert_eq!(leaves[0].g.edge_count(), 3);
        assert_eq!(leaves[0].k, 2);
    }

    #[test]
    fn leaves_are_sparse_for_their_budget() {
        let mut state = 0x1234543212345u64;
        for _ in 0..40 {
            let g = random_graph(&mut state, 4, 7, 4);
            let inst = Instance {
                g,
                k: (xorshift(&mut state) % 4) as u32,
                d: (xorshift(&mut state) % 3) as u32,
            };
            for leaf in branch(&inst).unwrap() {
                let bound = inst.d + ceil_sqrt(leaf.k).max(1);
                for e in 0..leaf.g.edge_count() {
                    assert!((leaf.g.cross_set(e).len() as u32) < bound);
                }
            }
        }
    }

    #[test]
    fn solve_on_complete_graphs() {
        let k4 = OrderedGraph::complete(4).unwrap();
        let s = solve(&Instance {
            g: k4.clone(),
            k: 1,
            d: 0,
        })
        .unwrap()
        .unwrap();
        assert_eq!(s, EdgeSubset::single(k4.edge_index(1, 3).unwrap()));
        let k5 = OrderedGraph::complete(5).unwrap();
        assert_eq!(
            solve(&Instance {
                g: k5.clone(),
                k: 2,
                d: 0,
            })
            .unwrap(),
            None
        );
        assert_eq!(
            solve(&Instance {
                g: k5.clone(),
                k: 0,
                d: 2,
            })
            .unwrap(),
            Some(EdgeSubset::EMPTY)
        );
        let s = solve(&Instance { g: k5, k: 3, d: 0 }).unwrap().unwrap();
        assert_eq!(s.len(), 3);
    }

    #[test]
    fn solve_matches_deletion_oracle() {
        let mut state = 0x777123456789abcu64;
        for round in 0..60 {
            let g = random_graph(&mut state, 4, 6, 3);
            for d in 0..=2u32 {
                for k in 0..=3u32 {
                    let inst = Instance {
                        g: g.clone(),
                        k,
                        d,
                    };
                    let got = solve(&inst).unwrap();
                    let want = oracle_min_deletion(&g, 1, d).unwrap();
                    match got {
                        Some(s) => {
                            assert_eq!(s.len() as u64, want, "round {round} d {d} k {k}");
                            let (rest, _) = g.subgraph(g.all_edges() - s);
                            check_d_planar(&rest, d).unwrap();
                        }
                        None => {
                            assert!(want > k as u64, "round {round} d {d} k {k}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn feasibility_is_monotone_in_budget_and_tolerance() {
        let mut state = 0x31415926535897u64;
        for _ in 0..30 {
            let g = random_graph(&mut state, 4, 6, 3);
            for d in 0..=1u32 {
                for k in 0..=2u32 {
                    let base = solve(&Instance {
                        g: g.clone(),
                        k,
                        d,
                    })
                    .unwrap()
                    .is_some();
                    if !base {
                        continue;
                    }
                    for (k2, d2) in [(k + 1, d), (k, d + 1)] {
                        assert!(solve(&Instance {
                            g: g.clone(),
                            k: k2,
                            d: d2,
                        })
                        .unwrap()
                        .is_some());
                    }
                }
            }
        }
    }
}
