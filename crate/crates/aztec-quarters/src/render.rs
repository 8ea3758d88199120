//! SVG and ASCII pictures of regions. The only floating point in the crate
//! lives here.

use std::fmt::Write as _;

use num_traits::ToPrimitive;

use crate::engines::first_matching;
use crate::error::Result;
use crate::graphs::dual_graph;
use crate::regions::{Cell, Orientation, Region};

const SCALE: f64 = 12.0;
const ROW_STRETCH: f64 = 0.866_025_403_784_438_6;

fn corners(c: &Cell) -> Vec<(f64, f64)> {
    let (x, y) = c.position();
    let (x, y) = (x.to_f64().unwrap(), y.to_f64().unwrap());
    match c {
        Cell::Square { .. } => vec![(x - 1.0, y), (x, y + 1.0), (x + 1.0, y), (x, y - 1.0)],
        Cell::Triangle { orientation: Orientation::Up, .. } => {
            vec![(x - 3.0, y - 2.0), (x + 3.0, y - 2.0), (x, y + 4.0)]
        }
        Cell::Triangle { .. } => vec![(x - 3.0, y + 2.0), (x + 3.0, y + 2.0), (x, y - 4.0)],
    }
}

fn centre(c: &Cell) -> (f64, f64) {
    let (x, y) = c.position();
    (x.to_f64().unwrap(), y.to_f64().unwrap())
}

struct Frame {
    min_x: f64,
    max_y: f64,
    sx: f64,
    sy: f64,
}

impl Frame {
    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        ((x - self.min_x) * self.sx + SCALE, (self.max_y - y) * self.sy + SCALE)
    }
}

fn points(frame: &Frame, pts: &[(f64, f64)]) -> String {
    pts.iter()
        .map(|&p| {
            let (x, y) = frame.map(p);
            format!("{x:.2},{y:.2}")
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// A perfect matching of the region's dual graph as cell pairs, if any.
pub fn sample_tiling(region: &Region) -> Result<Option<Vec<(Cell, Cell)>>> {
    let cells: Vec<Cell> = region.cells.iter().copied().collect();
    let m = first_matching(&dual_graph(region))?;
    Ok(m.map(|pairs| {
        let mut tiles: Vec<(Cell, Cell)> = pairs.into_iter().map(|(i, j)| (cells[i], cells[j])).collect();
        tiles.sort();
        tiles
    }))
}

pub fn render_svg(region: &Region, tiling: Option<&[(Cell, Cell)]>) -> String {
    let triangular = region.cells.iter().any(|c| matches!(c, Cell::Triangle { .. }));
    let (sx, sy) = if triangular { (SCALE / 3.0, SCALE / 3.0 * ROW_STRETCH) } else { (SCALE, SCALE) };
    let all: Vec<(f64, f64)> = region.cells.iter().flat_map(corners).collect();
    let fold = |f: fn(f64, f64) -> f64, init: f64, pick: fn(&(f64, f64)) -> f64| all.iter().map(pick).fold(init, f);
    let (min_x, max_x) = (fold(f64::min, f64::INFINITY, |p| p.0), fold(f64::max, f64::NEG_INFINITY, |p| p.0));
    let (min_y, max_y) = (fold(f64::min, f64::INFINITY, |p| p.1), fold(f64::max, f64::NEG_INFINITY, |p| p.1));
    let (min_x, max_x, min_y, max_y) =
        if all.is_empty() { (0.0, 0.0, 0.0, 0.0) } else { (min_x, max_x, min_y, max_y) };
    let frame = Frame { min_x, max_y, sx, sy };
    let width = (max_x - min_x) * sx + 2.0 * SCALE;
    let height = (max_y - min_y) * sy + 2.0 * SCALE;

    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.2}" height="{height:.2}" viewBox="0 0 {width:.2} {height:.2}">"#
    )
    .unwrap();
    writeln!(out, "<title>{}</title>", region.spec).unwrap();
    writeln!(out, r##"<g stroke="#333333" stroke-width="0.6">"##).unwrap();
    for c in &region.cells {
        let fill = if c.is_black() { "#9aa5b1" } else { "#f5f5f0" };
        writeln!(out, r#"<polygon class="cell" points="{}" fill="{fill}"/>"#, points(&frame, &corners(c))).unwrap();
    }
    writeln!(out, "</g>").unwrap();

    if !region.weights.is_empty() {
        writeln!(out, r##"<g stroke="#c0392b" stroke-width="1.5" stroke-dasharray="3,2" fill="none">"##).unwrap();
        for (a, b) in region.weights.keys() {
            let (x1, y1) = frame.map(centre(a));
            let (x2, y2) = frame.map(centre(b));
            writeln!(out, r#"<line class="weighted" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"#).unwrap();
        }
        writeln!(out, "</g>").unwrap();
    }

    if let Some(tiles) = tiling {
        writeln!(out, r##"<g stroke="#1f4e79" stroke-width="3" stroke-linecap="round">"##).unwrap();
        for (a, b) in tiles {
            let (x1, y1) = frame.map(centre(a));
            let (x2, y2) = frame.map(centre(b));
            writeln!(out, r#"<line class="tile" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"#).unwrap();
        }
        writeln!(out, "</g>").unwrap();
    }
    writeln!(out, "</svg>").unwrap();
    out
}

/// One text row per lattice row, top row first. Squares print as `X`
/// (black) and `O` (white); triangles as `^` and `v`. Cells carrying a
/// weighted edge print in lowercase (`w` for triangles).
pub fn render_ascii(region: &Region) -> String {
    let weighted = |c: &Cell| region.weights.keys().any(|(a, b)| a == c || b == c);
    let mut placed: Vec<(i64, i64, char)> = Vec::new();
    for c in &region.cells {
        let x = c.position().0.to_integer().to_i64().unwrap();
        let w = weighted(c);
        let (row, ch) = match c {
            Cell::Square { row, .. } => {
                let ch = match (c.is_black(), w) {
                    (true, false) => 'X',
                    (true, true) => 'x',
                    (false, false) => 'O',
                    (false, true) => 'o',
                };
                (*row as i64, ch)
            }
            Cell::Triangle { row, orientation, .. } => {
                let ch = match (orientation, w) {
                    (_, true) => 'w',
                    (Orientation::Up, _) => '^',
                    (Orientation::Down, _) => 'v',
                };
                (-(*row as i64), ch)
            }
        };
        let col = if matches!(c, Cell::Triangle { .. }) { x.div_euclid(3) } else { x };
        placed.push((row, col, ch));
    }
    if placed.is_empty() {
        return String::new();
    }
    let min_col = placed.iter().map(|p| p.1).min().unwrap();
    let max_col = placed.iter().map(|p| p.1).max().unwrap();
    let mut rows: Vec<i64> = placed.iter().map(|p| p.0).collect();
    rows.sort_unstable();
    rows.dedup();
    let mut out = String::new();
    for &r in rows.iter().rev() {
        let mut line = vec![' '; (max_col - min_col + 1) as usize];
        for &(pr, pc, ch) in &placed {
            if pr == r {
                line[(pc - min_col) as usize] = ch;
            }
        }
        let s: String = line.into_iter().collect();
        out.push_str(s.trim_end());
        out.push('\n');
    }
    out
}
