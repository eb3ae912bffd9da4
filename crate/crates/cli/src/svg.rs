//! Static SVG pictures: book embeddings as stacked page lanes over a
//! repeated spine, track instances as straight-line layered drawings.
//!
//! Every coordinate is a pure function of the instance, so the same input
//! always serializes to the same bytes.

use std::fmt::Write as _;

use bookemb::tracks::{TrackInstance, TrackLayout};
use bookemb::{Error, OrderedGraph, PageAssignment, Result};

const SPACING: f64 = 60.0;
const MARGIN: f64 = 50.0;

fn fx(v: f64) -> String {
    format!("{v:.1}")
}

/// One lane per page, each with its own copy of the spine and its edges as
/// semicircular arcs. Deleted edges hang dashed and gray in an extra lane
/// at the bottom; crossings inside a lane are dotted red at the geometric
/// intersection of the two arcs.
pub fn book_drawing(g: &OrderedGraph, assignment: &PageAssignment) -> Result<String> {
    if assignment.len() != g.edge_count() || assignment.page_count() == 0 {
        return Err(Error::invalid("assignment does not match the graph"));
    }
    let n = g.vertex_count();
    let deleted = assignment.deleted();
    let page_lanes = assignment.page_count() as usize;
    let lanes = page_lanes + usize::from(!deleted.is_empty());
    let arc_top = if n >= 2 {
        (n - 1) as f64 * SPACING / 2.0
    } else {
        SPACING / 2.0
    };
    let lane_h = arc_top + 50.0;
    let width = 2.0 * MARGIN + n.saturating_sub(1) as f64 * SPACING;
    let height = MARGIN + lanes as f64 * lane_h + 10.0;
    let x_of = |vertex: u32| MARGIN + (vertex - 1) as f64 * SPACING;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"##,
        w = fx(width),
        h = fx(height),
    );
    let crossings = g.crossing_pairs();
    for lane in 0..lanes {
        let y = MARGIN + (lane + 1) as f64 * lane_h;
        let on_page = lane < page_lanes;
        let label = if on_page {
            format!("page {}", lane + 1)
        } else {
            "deleted".to_string()
        };
        let _ = writeln!(
            out,
            r##"  <text x="8" y="{}" fill="#555">{label}</text>"##,
            fx(y - lane_h + 14.0),
        );
        let _ = writeln!(
            out,
            r##"  <line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="#333"/>"##,
            fx(MARGIN - 15.0),
            fx(width - MARGIN + 15.0),
            y = fx(y),
        );
        let edges = if on_page {
            assignment.edges_on_page(lane as u32 + 1)
        } else {
            deleted
        };
        let style = if on_page {
            r##"stroke="#1f6feb""##.to_string()
        } else {
            r##"stroke="#999" stroke-dasharray="5 4""##.to_string()
        };
        for e in edges.iter() {
            let (u, v) = g.endpoints(e);
            let (x1, x2) = (x_of(u), x_of(v));
            let r = (x2 - x1) / 2.0;
            let _ = writeln!(
                out,
                r##"  <path d="M {} {y} A {r} {r} 0 0 1 {} {y}" fill="none" {style} stroke-width="1.5"/>"##,
                fx(x1),
                fx(x2),
                y = fx(y),
                r = fx(r),
            );
        }
        if on_page {
            for &(e, f) in &crossings {
                if !edges.contains(e) || !edges.contains(f) {
                    continue;
                }
                let (x, lift) = arc_intersection(g, e, f, &x_of);
                let _ = writeln!(
                    out,
                    r##"  <circle cx="{}" cy="{}" r="2.5" fill="#d33"/>"##,
                    fx(x),
                    fx(y - lift),
                );
            }
        }
        for i in 1..=n {
            let cx = x_of(i);
            let _ = writeln!(
                out,
                r##"  <circle cx="{cx}" cy="{y}" r="3" fill="#333"/>"##,
                cx = fx(cx),
                y = fx(y),
            );
            let _ = writeln!(
                out,
                r##"  <text x="{}" y="{}" text-anchor="middle">{i}</text>"##,
                fx(cx),
                fx(y + 18.0),
            );
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Where the semicircles of two crossing edges meet, as (x, height above
/// the spine). Crossing edges interleave strictly, so the circle centers
/// differ and the radical line cuts both upper halves.
fn arc_intersection(
    g: &OrderedGraph,
    e: usize,
    f: usize,
    x_of: &impl Fn(u32) -> f64,
) -> (f64, f64) {
    let (u1, v1) = g.endpoints(e);
    let (u2, v2) = g.endpoints(f);
    let (c1, r1) = ((x_of(u1) + x_of(v1)) / 2.0, (x_of(v1) - x_of(u1)) / 2.0);
    let (c2, r2) = ((x_of(u2) + x_of(v2)) / 2.0, (x_of(v2) - x_of(u2)) / 2.0);
    let x = (c1 + c2) / 2.0 + (r1 * r1 - r2 * r2) / (2.0 * (c2 - c1));
    let lift = (r1 * r1 - (x - c1) * (x - c1)).max(0.0).sqrt();
    (x, lift)
}

/// Spine across the bottom, one horizontal track per layer above it,
/// movable vertices in layout order and edges as straight segments.
pub fn track_drawing(inst: &TrackInstance, layout: &TrackLayout) -> String {
    let a = inst.spine_count();
    let tracks = layout.tracks.len();
    let gap = 80.0;
    let longest = layout.tracks.iter().map(|t| t.len()).max().unwrap_or(0);
    let cols = (a as usize).max(longest);
    let width = 2.0 * MARGIN + cols.saturating_sub(1) as f64 * SPACING;
    let y_spine = MARGIN + tracks as f64 * gap;
    let height = y_spine + 40.0;
    let spine_x = |s: u32| MARGIN + (s - 1) as f64 * SPACING;

    // movable vertex coordinates, fixed by the layout
    let mut pos = vec![(0.0, 0.0); inst.track_vertex_count() as usize];
    for (ti, track) in layout.tracks.iter().enumerate() {
        let y = y_spine - (ti + 1) as f64 * gap;
        for (i, &x) in track.iter().enumerate() {
            pos[x as usize] = (MARGIN + i as f64 * SPACING, y);
        }
    }

    let mut out = String::new();
    let _ = writeln!(
        out,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"##,
        w = fx(width),
        h = fx(height),
    );
    for &(s, x) in inst.edges() {
        let (x2, y2) = pos[x as usize];
        let _ = writeln!(
            out,
            r##"  <line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#1f6feb" stroke-width="1.2"/>"##,
            fx(spine_x(s)),
            fx(y_spine),
            fx(x2),
            fx(y2),
        );
    }
    let _ = writeln!(
        out,
        r##"  <text x="8" y="{}" fill="#555">spine</text>"##,
        fx(y_spine - 8.0),
    );
    let _ = writeln!(
        out,
        r##"  <line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="#333"/>"##,
        fx(MARGIN - 15.0),
        fx(width - MARGIN + 15.0),
        y = fx(y_spine),
    );
    for s in 1..=a {
        let _ = writeln!(
            out,
            r##"  <circle cx="{cx}" cy="{y}" r="3" fill="#333"/>"##,
            cx = fx(spine_x(s)),
            y = fx(y_spine),
        );
        let _ = writeln!(
            out,
            r##"  <text x="{}" y="{}" text-anchor="middle">{s}</text>"##,
            fx(spine_x(s)),
            fx(y_spine + 18.0),
        );
    }
    for (ti, track) in layout.tracks.iter().enumerate() {
        let y = y_spine - (ti + 1) as f64 * gap;
        let _ = writeln!(
            out,
            r##"  <text x="8" y="{}" fill="#555">track {}</text>"##,
            fx(y - 8.0),
            ti + 1,
        );
        for &x in track {
            let (cx, cy) = pos[x as usize];
            let _ = writeln!(
                out,
                r##"  <circle cx="{}" cy="{}" r="3" fill="#b33ca8"/>"##,
                fx(cx),
                fx(cy),
            );
            let _ = writeln!(
                out,
                r##"  <text x="{}" y="{}" text-anchor="middle">{}</text>"##,
                fx(cx),
                fx(cy - 8.0),
                x + 1,
            );
        }
    }
    out.push_str("</svg>\n");
    out
}
