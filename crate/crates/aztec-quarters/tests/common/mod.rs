#![allow(dead_code)]

use aztec_quarters::graphs::{Color, MatchGraph};
use aztec_quarters::numeric::{int, rat, Rational};
use aztec_quarters::rewrites::ScriptStep;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn dyadic(rng: &mut impl Rng) -> Rational {
    rat(rng.gen_range(1..=4), 1 << rng.gen_range(0..=2))
}

pub fn cycle4() -> MatchGraph {
    let mut g = MatchGraph::new();
    let v: Vec<usize> = [(0, 0, Color::Black), (1, 0, Color::White), (1, 1, Color::Black), (0, 1, Color::White)]
        .iter()
        .map(|&(x, y, c)| g.add_vertex(int(x), int(y), c))
        .collect();
    for i in 0..4 {
        g.add_edge(v[i], v[(i + 1) % 4], int(1)).unwrap();
    }
    g
}

/// Random subgraph of the `w x h` grid with at most `max_vertices` vertices,
/// colored by coordinate parity, with dyadic weights.
pub fn random_grid_graph(rng: &mut impl Rng, w: i64, h: i64, max_vertices: usize) -> MatchGraph {
    let mut pts: Vec<(i64, i64)> = (0..w).flat_map(|x| (0..h).map(move |y| (x, y))).collect();
    pts.shuffle(rng);
    let keep = rng.gen_range(2..=max_vertices.min(pts.len()));
    let mut pts = pts[..keep].to_vec();
    pts.sort();
    let mut g = MatchGraph::new();
    for &(x, y) in &pts {
        g.add_vertex(int(x), int(y), if (x + y) % 2 == 0 { Color::Black } else { Color::White });
    }
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let (a, b) = (pts[i], pts[j]);
            if (a.0 - b.0).abs() + (a.1 - b.1).abs() == 1 && rng.gen_bool(0.85) {
                g.add_edge(i, j, dyadic(rng)).unwrap();
            }
        }
    }
    g
}

/// Random bipartite host with `whites` white and `blacks` black vertices.
pub fn random_host(rng: &mut impl Rng, whites: usize, blacks: usize, p: f64) -> MatchGraph {
    let mut g = MatchGraph::new();
    for i in 0..whites {
        g.add_vertex(int(i as i64), int(0), Color::White);
    }
    for i in 0..blacks {
        g.add_vertex(int(i as i64), int(3), Color::Black);
    }
    for w in 0..whites {
        for b in 0..blacks {
            if rng.gen_bool(p) {
                g.add_edge(w, whites + b, dyadic(rng)).unwrap();
            }
        }
    }
    g
}

fn add(g: &mut MatchGraph, c: Color) -> usize {
    let n = g.len() as i64;
    g.add_vertex(int(n), int(7), c)
}

fn label(g: &MatchGraph, i: usize) -> usize {
    g.vertex(i).label
}

/// Picks distinct host vertices (never planted ones) of the requested colors.
fn pick(rng: &mut impl Rng, g: &MatchGraph, colors: &[Color]) -> Vec<usize> {
    let mut out = Vec::new();
    for &c in colors {
        let mut cands: Vec<usize> = (0..g.len()).filter(|&i| g.vertex(i).color == c && g.vertex(i).y != int(7) && !out.contains(&i)).collect();
        cands.shuffle(rng);
        out.push(cands[0]);
    }
    out
}

pub const RULES: [&str; 7] = ["vertex-split", "star", "spider-a", "spider-b", "spider-c", "double-4-cycle", "forced-edge"];

/// A host graph of at most 20 vertices with a valid site for `rule`, and the step.
pub fn planted(rng: &mut impl Rng, rule: &str) -> (MatchGraph, ScriptStep) {
    use Color::{Black as B, White as W};
    match rule {
        "vertex-split" => {
            let g = random_grid_graph(rng, 4, 4, 14);
            let v = rng.gen_range(0..g.len());
            let h: Vec<usize> = g.neighbors(v).into_iter().filter(|_| rng.gen_bool(0.5)).map(|u| label(&g, u)).collect();
            (g.clone(), ScriptStep::VertexSplit { site: label(&g, v), h })
        }
        "star" => {
            let g = random_grid_graph(rng, 4, 4, 16);
            let v = rng.gen_range(0..g.len());
            let t = dyadic(rng);
            (g.clone(), ScriptStep::Star { site: label(&g, v), t: aztec_quarters::numeric::fmt_rational(&t) })
        }
        "spider-a" => {
            let mut g = random_host(rng, 6, 6, 0.45);
            let legs = pick(rng, &g, &[W, B, W, B]);
            let p = [add(&mut g, B), add(&mut g, W), add(&mut g, B), add(&mut g, W)];
            for i in 0..4 {
                g.add_edge(p[i], p[(i + 1) % 4], dyadic(rng)).unwrap();
                g.add_edge(p[i], legs[i], int(1)).unwrap();
            }
            (g.clone(), ScriptStep::SpiderA { site: p.map(|i| label(&g, i)) })
        }
        "spider-b" => {
            let mut g = random_host(rng, 6, 7, 0.45);
            let legs = pick(rng, &g, &[W, B, W]);
            let p = [add(&mut g, B), add(&mut g, W), add(&mut g, B)];
            g.add_edge(p[0], p[1], dyadic(rng)).unwrap();
            g.add_edge(p[1], p[2], dyadic(rng)).unwrap();
            for i in 0..3 {
                g.add_edge(p[i], legs[i], int(1)).unwrap();
            }
            (g.clone(), ScriptStep::SpiderB { site: p.map(|i| label(&g, i)) })
        }
        "spider-c" => {
            let mut g = random_host(rng, 7, 7, 0.45);
            let legs = pick(rng, &g, &[W, B]);
            let p = [add(&mut g, B), add(&mut g, W)];
            g.add_edge(p[0], p[1], dyadic(rng)).unwrap();
            g.add_edge(p[0], legs[0], int(1)).unwrap();
            g.add_edge(p[1], legs[1], int(1)).unwrap();
            (g.clone(), ScriptStep::SpiderC { site: p.map(|i| label(&g, i)) })
        }
        "double-4-cycle" => {
            let mut g = random_host(rng, 5, 7, 0.45);
            let a = add(&mut g, B);
            let b = [add(&mut g, W), add(&mut g, B), add(&mut g, W)];
            let c = [add(&mut g, W), add(&mut g, B), add(&mut g, W)];
            for cyc in [b, c] {
                let (w1, w2, w3) = (dyadic(rng), dyadic(rng), dyadic(rng));
                let w4 = &w1 * &w3 / &w2;
                g.add_edge(a, cyc[0], w1).unwrap();
                g.add_edge(cyc[0], cyc[1], w2).unwrap();
                g.add_edge(cyc[1], cyc[2], w3).unwrap();
                g.add_edge(cyc[2], a, w4).unwrap();
                let h = pick(rng, &g, &[B])[0];
                g.add_edge(cyc[2], h, dyadic(rng)).unwrap();
            }
            let site = [a, b[0], b[1], b[2], c[0], c[1], c[2]].map(|i| label(&g, i));
            (g, ScriptStep::Double4Cycle { site })
        }
        "forced-edge" => {
            let mut g = random_host(rng, 8, 8, 0.4);
            if rng.gen_bool(0.5) {
                let h = pick(rng, &g, &[B])[0];
                let p = add(&mut g, W);
                g.add_edge(p, h, dyadic(rng)).unwrap();
                let site = label(&g, p);
                (g, ScriptStep::ForcedEdge { site: Some(site) })
            } else {
                (g, ScriptStep::ForcedEdge { site: None })
            }
        }
        _ => panic!("unknown rule {rule}"),
    }
}
