//! Command line front end for the book embedding solvers.
//!
//! Exit codes: 0 success, 1 infeasible (or a failed cross-check), 2 input
//! error, 3 capacity limit hit.

mod report;
mod svg;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;

use bookemb::approx_pages::{d_planar_pages_approx, greedy_pages};
use bookemb::edge_deletion::{self, Instance};
use bookemb::exact_pages::{
    crossing_numbers_up_to, crossing_numbers_up_to_limited, page_number, page_number_limited,
    DEFAULT_SUBSET_EDGE_LIMIT,
};
use bookemb::hitting_flow::{
    greedy_hitting_set, solve_general, solve_general_limited, solve_h1, DEFAULT_ENCODING_LIMIT,
};
use bookemb::io::parse_graph;
use bookemb::oracles;
use bookemb::tracks::{
    layout_crossings, min_crossings, min_crossings_limited, min_track_count,
    min_track_count_limited, TrackInstance, DEFAULT_TRACK_VERTEX_LIMIT,
};
use bookemb::{EdgeSubset, Error, OrderedGraph, PageAssignment, Result};
use report::{print_infeasible, Report};

#[derive(Parser)]
#[command(
    name = "bookemb",
    version,
    about = "Book embeddings with a fixed spine order: page counts, \
             crossing-minimal deletions, track layouts, SVG drawings"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Emit the report as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Reserved for randomized features; every current solver is
    /// deterministic, so this changes nothing today.
    #[arg(long, global = true, value_name = "SEED")]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact page number, or minimum crossings on a fixed page count.
    #[command(name = "pages-exact")]
    PagesExact {
        file: PathBuf,
        /// Fix the page count and minimize total crossings instead.
        #[arg(long)]
        p: Option<u32>,
        /// Edge-count cap for the subset tables.
        #[arg(long, value_name = "M", default_value_t = DEFAULT_SUBSET_EDGE_LIMIT)]
        limit_m: usize,
        /// Cross-check the objective against the brute-force oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Crossing-free pages greedily, or d-planar pages for positive d.
    #[command(name = "pages-greedy")]
    PagesGreedy {
        file: PathBuf,
        /// Crossings an edge may carry on its page.
        #[arg(long, default_value_t = 0)]
        d: u32,
    },
    /// Fewest deletions making a single page d-planar, within budget k.
    #[command(name = "delete1page")]
    DeleteOnePage {
        file: PathBuf,
        /// Crossings an edge may carry on the page.
        #[arg(long, default_value_t = 0)]
        d: u32,
        /// Deletion budget.
        #[arg(long)]
        k: u32,
        #[arg(long)]
        oracle: bool,
    },
    /// Fewest deletions fitting the rest on p crossing-free pages.
    #[command(name = "deletepages")]
    DeletePages {
        file: PathBuf,
        /// Page count.
        #[arg(long, default_value_t = 1)]
        p: u32,
        /// Cap on boundary-encoding candidates for the general solver.
        #[arg(long, value_name = "N", default_value_t = DEFAULT_ENCODING_LIMIT)]
        limit_encodings: u64,
        #[arg(long)]
        oracle: bool,
    },
    /// Minimum set of spine points stabbing every edge interval.
    Hitting { file: PathBuf },
    /// Order and partition the movable vertices to minimize crossings.
    Tracks {
        file: PathBuf,
        /// Number of tracks.
        #[arg(long, default_value_t = 1, conflicts_with = "min_tracks")]
        t: u32,
        /// Find the least track count drawable without crossings.
        #[arg(long)]
        min_tracks: bool,
        /// Movable-vertex cap for the subset tables.
        #[arg(long, value_name = "B", default_value_t = DEFAULT_TRACK_VERTEX_LIMIT)]
        limit_m: usize,
        #[arg(long)]
        oracle: bool,
    },
    /// Draw an instance (graph or track format, autodetected) as SVG.
    Render {
        file: PathBuf,
        /// Page count for graph drawings; defaults to the page number.
        #[arg(long)]
        pages: Option<u32>,
        /// Delete the fewest edges instead of allowing crossings.
        #[arg(long)]
        delete: bool,
        /// Track count for track drawings; defaults to the fewest that
        /// avoid crossings.
        #[arg(long)]
        t: Option<u32>,
        /// Write here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Capacity { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let json = cli.json;
    match cli.command {
        Cmd::PagesExact {
            file,
            p,
            limit_m,
            oracle,
        } => pages_exact(&file, p, limit_m, oracle, json),
        Cmd::PagesGreedy { file, d } => pages_greedy(&file, d, json),
        Cmd::DeleteOnePage { file, d, k, oracle } => delete_one_page(&file, d, k, oracle, json),
        Cmd::DeletePages {
            file,
            p,
            limit_encodings,
            oracle,
        } => delete_pages(&file, p, limit_encodings, oracle, json),
        Cmd::Hitting { file } => hitting(&file, json),
        Cmd::Tracks {
            file,
            t,
            min_tracks,
            limit_m,
            oracle,
        } => tracks(&file, t, min_tracks, limit_m, oracle, json),
        Cmd::Render {
            file,
            pages,
            delete,
            t,
            out,
        } => render(&file, pages, delete, t, out.as_deref()),
    }
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<OrderedGraph> {
    parse_graph(&read_file(path)?)
}

/// Prints the mismatch and reports failure; reaching this means a solver
/// bug, never a property of the input.
fn cross_check(what: &str, got: u64, expect: u64) -> Result<u8> {
    eprintln!("{what}: solver returned {got}, reference says {expect}");
    Ok(1)
}

fn edge_value(g: &OrderedGraph, e: usize) -> Value {
    let (u, v) = g.endpoints(e);
    Value::Array(vec![u.into(), v.into()])
}

fn edge_set_value(g: &OrderedGraph, set: EdgeSubset) -> Value {
    Value::Array(set.iter().map(|e| edge_value(g, e)).collect())
}

fn edge_set_text(g: &OrderedGraph, set: EdgeSubset) -> String {
    if set.is_empty() {
        return "(none)".to_string();
    }
    let parts: Vec<String> = set
        .iter()
        .map(|e| {
            let (u, v) = g.endpoints(e);
            format!("({u},{v})")
        })
        .collect();
    parts.join(" ")
}

/// Adds the page-by-page edge lists to a report.
fn witness_pages(rep: &mut Report, g: &OrderedGraph, assignment: &PageAssignment) {
    let mut json_pages = Vec::new();
    let mut lines = Vec::new();
    for q in 1..=assignment.page_count() {
        let set = assignment.edges_on_page(q);
        json_pages.push(edge_set_value(g, set));
        lines.push(format!("page {q}: {}", edge_set_text(g, set)));
    }
    rep.witness("pages", Value::Array(json_pages), lines);
}

fn pages_exact(file: &Path, p: Option<u32>, limit: usize, oracle: bool, json: bool) -> Result<u8> {
    let g = read_graph(file)?;
    match p {
        Some(p) => {
            let (levels, assignment) = crossing_numbers_up_to_limited(&g, p, limit)?;
            let objective = *levels.last().expect("p >= 1 levels");
            let ok = assignment.deleted().is_empty()
                && assignment.page_count() == p
                && g.crossing_count(&assignment) == objective;
            if !ok {
                return cross_check("crossing witness", g.crossing_count(&assignment), objective);
            }
            let mut rep = Report::new("p-page-crossings");
            rep.param("n", g.vertex_count());
            rep.param("m", g.edge_count());
            rep.param("p", p);
            if oracle {
                let reference = oracles::oracle_min_crossings(&g, p)?;
                if reference != objective {
                    return cross_check("oracle", objective, reference);
                }
                rep.param("oracle", reference);
            }
            rep.objective(objective);
            let levels_line = levels
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(" ");
            rep.witness(
                "crossing_numbers",
                Value::Array(levels.iter().map(|&v| v.into()).collect()),
                vec![format!("crossings by page count: {levels_line}")],
            );
            witness_pages(&mut rep, &g, &assignment);
            rep.print(json);
            Ok(0)
        }
        None => {
            let (pn, assignment) = page_number_limited(&g, limit)?;
            let ok = assignment.deleted().is_empty() && g.crossing_count(&assignment) == 0;
            if !ok {
                return cross_check("page witness", g.crossing_count(&assignment), 0);
            }
            let mut rep = Report::new("page-number");
            rep.param("n", g.vertex_count());
            rep.param("m", g.edge_count());
            if oracle {
                let reference = if g.edge_count() == 0 {
                    0
                } else {
                    (1..)
                        .find(|&q| matches!(oracles::oracle_min_crossings(&g, q), Ok(0)))
                        .expect("one page per edge is crossing-free")
                };
                if reference != pn {
                    return cross_check("oracle", pn as u64, reference as u64);
                }
                rep.param("oracle", reference);
            }
            rep.objective(pn);
            witness_pages(&mut rep, &g, &assignment);
            rep.print(json);
            Ok(0)
        }
    }
}

fn pages_greedy(file: &Path, d: u32, json: bool) -> Result<u8> {
    let g = read_graph(file)?;
    let assignment = if d == 0 {
        let pages = greedy_pages(&g);
        let mut assignment = PageAssignment::empty(g.edge_count(), pages.len().max(1) as u32);
        for (i, page) in pages.iter().enumerate() {
            for e in page.iter() {
                assignment.set_page(e, i as u32 + 1);
            }
        }
        assignment
    } else {
        d_planar_pages_approx(&g, d)
    };
    let used = (1..=assignment.page_count())
        .filter(|&q| !assignment.edges_on_page(q).is_empty())
        .count();
    if !(assignment.deleted().is_empty() && g.is_d_planar(&assignment, d)) {
        return cross_check("greedy witness", 0, 1);
    }
    let mut rep = Report::new("greedy-pages");
    rep.param("n", g.vertex_count());
    rep.param("m", g.edge_count());
    rep.param("d", d);
    rep.objective(used);
    witness_pages(&mut rep, &g, &assignment);
    rep.print(json);
    Ok(0)
}

fn delete_one_page(file: &Path, d: u32, k: u32, oracle: bool, json: bool) -> Result<u8> {
    let g = read_graph(file)?;
    let inst = Instance { g: g.clone(), k, d };
    let params: Vec<(&'static str, Value)> = vec![
        ("n", g.vertex_count().into()),
        ("m", g.edge_count().into()),
        ("d", d.into()),
        ("k", k.into()),
    ];
    match edge_deletion::solve(&inst)? {
        None => {
            if oracle {
                let reference = oracles::oracle_min_deletion(&g, 1, d)?;
                if reference <= k as u64 {
                    return cross_check("oracle", k as u64 + 1, reference);
                }
            }
            print_infeasible(
                "one-page-deletion",
                &params,
                &format!("no solution within budget k={k}"),
                json,
            );
            Ok(1)
        }
        Some(set) => {
            let (rest, _) = g.subgraph(g.all_edges() - set);
            let survivor = PageAssignment::single_page(rest.edge_count());
            if !(set.len() as u32 <= k && rest.is_d_planar(&survivor, d)) {
                return cross_check("deletion witness", set.len() as u64, k as u64);
            }
            let mut rep = Report::new("one-page-deletion");
            rep.param("n", g.vertex_count());
            rep.param("m", g.edge_count());
            rep.param("d", d);
            rep.param("k", k);
            if oracle {
                let reference = oracles::oracle_min_deletion(&g, 1, d)?;
                if reference != set.len() as u64 {
                    return cross_check("oracle", set.len() as u64, reference);
                }
                rep.param("oracle", reference);
            }
            rep.objective(set.len());
            rep.witness(
                "deleted",
                edge_set_value(&g, set),
                vec![format!("deleted: {}", edge_set_text(&g, set))],
            );
            rep.print(json);
            Ok(0)
        }
    }
}

fn delete_pages(file: &Path, p: u32, limit: u64, oracle: bool, json: bool) -> Result<u8> {
    let g = read_graph(file)?;
    let h = greedy_hitting_set(&g).len();
    let (deleted, assignment) = if h == 1 {
        solve_h1(&g, p)?
    } else {
        solve_general_limited(&g, p, limit)?
    };
    let ok = g.is_d_planar(&assignment, 0)
        && assignment.deleted() == deleted
        && assignment.page_count() == p;
    if !ok {
        return cross_check("deletion witness", deleted.len() as u64, 0);
    }
    let mut rep = Report::new("p-page-deletion");
    rep.param("n", g.vertex_count());
    rep.param("m", g.edge_count());
    rep.param("p", p);
    rep.param("h", h);
    rep.param("method", if h == 1 { "chain-flow" } else { "boundary-search" });
    if oracle {
        let reference = oracles::oracle_min_deletion(&g, p, 0)?;
        if reference != deleted.len() as u64 {
            return cross_check("oracle", deleted.len() as u64, reference);
        }
        rep.param("oracle", reference);
    }
    rep.objective(deleted.len());
    rep.witness(
        "deleted",
        edge_set_value(&g, deleted),
        vec![format!("deleted: {}", edge_set_text(&g, deleted))],
    );
    witness_pages(&mut rep, &g, &assignment);
    rep.print(json);
    Ok(0)
}

fn hitting(file: &Path, json: bool) -> Result<u8> {
    let g = read_graph(file)?;
    let hs = greedy_hitting_set(&g);
    if !hs.covers(&g) {
        return cross_check("hitting witness", hs.len() as u64, 0);
    }
    let mut rep = Report::new("hitting-set");
    rep.param("n", g.vertex_count());
    rep.param("m", g.edge_count());
    rep.objective(hs.len());
    let coords: Vec<Value> = hs
        .points()
        .iter()
        .map(|pt| (pt.gap() as f64 + 0.5).into())
        .collect();
    let line = if hs.is_empty() {
        "points: (none)".to_string()
    } else {
        let parts: Vec<String> = hs.points().iter().map(|pt| pt.to_string()).collect();
        format!("points: {}", parts.join(" "))
    };
    rep.witness("points", Value::Array(coords), vec![line]);
    rep.print(json);
    Ok(0)
}

fn tracks(
    file: &Path,
    t: u32,
    min_tracks: bool,
    limit: usize,
    oracle: bool,
    json: bool,
) -> Result<u8> {
    let inst = TrackInstance::parse(&read_file(file)?)?;
    let b = inst.track_vertex_count();
    let (problem, objective, layout) = if min_tracks {
        let (count, layout) = min_track_count_limited(&inst, limit)?;
        (("min-tracks"), count as u64, layout)
    } else {
        let (value, layout) = min_crossings_limited(&inst, t, limit)?;
        (("track-crossings"), value, layout)
    };
    let nonempty = layout.tracks.iter().filter(|tr| !tr.is_empty()).count() as u64;
    let ok = layout.is_partition(b)
        && if min_tracks {
            layout_crossings(&inst, &layout) == 0 && nonempty == objective
        } else {
            layout_crossings(&inst, &layout) == objective && nonempty <= t as u64
        };
    if !ok {
        return cross_check("layout witness", layout_crossings(&inst, &layout), objective);
    }
    let mut rep = Report::new(problem);
    rep.param("a", inst.spine_count());
    rep.param("b", b);
    rep.param("m", inst.edges().len());
    if !min_tracks {
        rep.param("t", t);
    }
    if oracle {
        let reference = if min_tracks {
            if b == 0 {
                0
            } else {
                (1..=b)
                    .find(|&q| matches!(oracles::oracle_track_crossings(&inst, q), Ok(0)))
                    .expect("one vertex per track avoids crossings") as u64
            }
        } else {
            oracles::oracle_track_crossings(&inst, t)?
        };
        if reference != objective {
            return cross_check("oracle", objective, reference);
        }
        rep.param("oracle", reference);
    }
    rep.objective(objective);
    let mut json_tracks = Vec::new();
    let mut lines = Vec::new();
    for (i, track) in layout.tracks.iter().enumerate() {
        json_tracks.push(Value::Array(
            track.iter().map(|&x| (x + 1).into()).collect(),
        ));
        let labels: Vec<String> = track.iter().map(|&x| (x + 1).to_string()).collect();
        let shown = if labels.is_empty() {
            "(none)".to_string()
        } else {
            labels.join(" ")
        };
        lines.push(format!("track {}: {shown}", i + 1));
    }
    rep.witness("tracks", Value::Array(json_tracks), lines);
    rep.print(json);
    Ok(0)
}

fn render(
    file: &Path,
    pages: Option<u32>,
    delete: bool,
    t: Option<u32>,
    out: Option<&Path>,
) -> Result<u8> {
    let text = read_file(file)?;
    let doc = match sniff_format(&text)? {
        Format::Graph => {
            let g = parse_graph(&text)?;
            let assignment = if delete {
                let p = pages.unwrap_or(1);
                let h = greedy_hitting_set(&g).len();
                let (_, assignment) = if h == 1 {
                    solve_h1(&g, p)?
                } else {
                    solve_general(&g, p)?
                };
                assignment
            } else if let Some(p) = pages {
                crossing_numbers_up_to(&g, p)?.1
            } else {
                let (pn, assignment) = page_number(&g)?;
                if pn == 0 {
                    PageAssignment::empty(0, 1)
                } else {
                    assignment
                }
            };
            svg::book_drawing(&g, &assignment)?
        }
        Format::Tracks => {
            let inst = TrackInstance::parse(&text)?;
            let layout = match t {
                Some(t) => min_crossings(&inst, t)?.1,
                None => min_track_count(&inst)?.1,
            };
            svg::track_drawing(&inst, &layout)
        }
    };
    match out {
        Some(path) => fs::write(path, doc)
            .map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?,
        None => print!("{doc}"),
    }
    Ok(0)
}

enum Format {
    Graph,
    Tracks,
}

/// Graph headers have two fields, track headers three.
fn sniff_format(text: &str) -> Result<Format> {
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        return match line.split_whitespace().count() {
            2 => Ok(Format::Graph),
            3 => Ok(Format::Tracks),
            k => Err(Error::Parse {
                line: i + 1,
                msg: format!("header has {k} fields, expected 2 (graph) or 3 (tracks)"),
            }),
        };
    }
    Err(Error::invalid("empty instance file"))
}
