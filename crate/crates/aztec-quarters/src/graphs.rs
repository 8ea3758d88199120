//! Weighted planar bipartite graphs with exact vertex positions.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};
use crate::numeric::{fmt_rational, int, parse_rational, rat, Rational};
use crate::regions::{Cell, Region};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn flip(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Color::Black => "black",
            Color::White => "white",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    /// Stable identifier; survives rewrites that renumber the vertex list.
    pub label: usize,
    pub x: Rational,
    pub y: Rational,
    pub color: Color,
}

/// Simple bipartite graph; edges are keyed by vertex index with `i < j`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MatchGraph {
    vertices: Vec<Vertex>,
    edges: BTreeMap<(usize, usize), Rational>,
}

fn key(i: usize, j: usize) -> (usize, usize) {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

impl MatchGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Vertex {
        &self.vertices[i]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        self.edges.iter().map(|(&(i, j), w)| (i, j, w))
    }

    pub fn next_label(&self) -> usize {
        self.vertices.iter().map(|v| v.label + 1).max().unwrap_or(0)
    }

    pub fn add_vertex(&mut self, x: Rational, y: Rational, color: Color) -> usize {
        let label = self.next_label();
        self.add_labeled(label, x, y, color)
    }

    fn add_labeled(&mut self, label: usize, x: Rational, y: Rational, color: Color) -> usize {
        self.vertices.push(Vertex { label, x, y, color });
        self.vertices.len() - 1
    }

    pub fn add_edge(&mut self, i: usize, j: usize, w: Rational) -> Result<()> {
        if i == j {
            return invalid(format!("self-loop at vertex {}", self.vertices[i].label));
        }
        if w <= Rational::zero() {
            return invalid(format!("edge weight {} is not positive", fmt_rational(&w)));
        }
        if self.vertices[i].color == self.vertices[j].color {
            return invalid(format!(
                "edge {}-{} joins two {} vertices",
                self.vertices[i].label,
                self.vertices[j].label,
                self.vertices[i].color.name()
            ));
        }
        if self.edges.insert(key(i, j), w).is_some() {
            return invalid(format!(
                "parallel edge {}-{}",
                self.vertices[i].label, self.vertices[j].label
            ));
        }
        Ok(())
    }

    /// Adds `w` to the weight of edge `i-j`, creating it when absent.
    pub fn merge_edge(&mut self, i: usize, j: usize, w: Rational) -> Result<()> {
        match self.edges.get_mut(&key(i, j)) {
            Some(old) => {
                *old += w;
                Ok(())
            }
            None => self.add_edge(i, j, w),
        }
    }

    pub fn weight(&self, i: usize, j: usize) -> Option<&Rational> {
        self.edges.get(&key(i, j))
    }

    pub fn set_weight(&mut self, i: usize, j: usize, w: Rational) {
        if let Some(old) = self.edges.get_mut(&key(i, j)) {
            *old = w;
        }
    }

    pub fn index_of(&self, label: usize) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v.label == label)
            .ok_or_else(|| Error::Invalid(format!("no vertex with label {label}")))
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(i, j) in self.edges.keys() {
            adj[i].push(j);
            adj[j].push(i);
        }
        adj
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .keys()
            .filter_map(|&(i, j)| if i == v { Some(j) } else if j == v { Some(i) } else { None })
            .collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.keys().filter(|&&(i, j)| i == v || j == v).count()
    }

    pub fn color_counts(&self) -> (usize, usize) {
        let b = self.vertices.iter().filter(|v| v.color == Color::Black).count();
        (b, self.vertices.len() - b)
    }

    pub fn is_balanced(&self) -> bool {
        let (b, w) = self.color_counts();
        b == w
    }

    /// Graph on the vertices for which `keep` holds; labels are preserved.
    pub fn induced(&self, keep: impl Fn(usize) -> bool) -> MatchGraph {
        let mut map = vec![usize::MAX; self.vertices.len()];
        let mut g = MatchGraph::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if keep(i) {
                map[i] = g.vertices.len();
                g.vertices.push(v.clone());
            }
        }
        for (&(i, j), w) in &self.edges {
            if map[i] != usize::MAX && map[j] != usize::MAX {
                g.edges.insert(key(map[i], map[j]), w.clone());
            }
        }
        g
    }

    pub fn without(&self, removed: &BTreeSet<usize>) -> MatchGraph {
        self.induced(|i| !removed.contains(&i))
    }

    pub fn remove_edge(&mut self, i: usize, j: usize) -> Option<Rational> {
        self.edges.remove(&key(i, j))
    }

    /// Same graph with every vertex color swapped.
    pub fn recolored(&self) -> MatchGraph {
        let mut g = self.clone();
        for v in &mut g.vertices {
            v.color = v.color.flip();
        }
        g
    }

    /// Connected components as sorted index lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertices.len()];
        let mut out = Vec::new();
        for s in 0..self.vertices.len() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut stack = vec![s];
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &u in &adj[v] {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Line-oriented text form: vertices `label x y color`, then edges
    /// `label label weight`, both sorted.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let mut vs: Vec<&Vertex> = self.vertices.iter().collect();
        vs.sort_by_key(|v| v.label);
        writeln!(out, "vertices {}", vs.len()).unwrap();
        for v in vs {
            writeln!(out, "{} {} {} {}", v.label, fmt_rational(&v.x), fmt_rational(&v.y), v.color.name()).unwrap();
        }
        let mut es: Vec<(usize, usize, String)> = self
            .edges
            .iter()
            .map(|(&(i, j), w)| {
                let (a, b) = (self.vertices[i].label, self.vertices[j].label);
                (a.min(b), a.max(b), fmt_rational(w))
            })
            .collect();
        es.sort();
        writeln!(out, "edges {}", es.len()).unwrap();
        for (a, b, w) in es {
            writeln!(out, "{a} {b} {w}").unwrap();
        }
        out
    }

    pub fn parse_dump(text: &str, path: &str) -> Result<MatchGraph> {
        let err = |line: usize, msg: String| Error::Parse { path: path.to_string(), line, msg };
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .collect();
        let mut at = 0;
        let mut next = || -> Result<(usize, Vec<&str>)> {
            let (ln, l) = lines.get(at).ok_or_else(|| err(0, "unexpected end of file".into()))?;
            at += 1;
            Ok((*ln, l.split_whitespace().collect()))
        };
        let header = |(ln, f): (usize, Vec<&str>), name: &str| -> Result<usize> {
            match f[..] {
                [h, c] if h == name => c.parse().map_err(|_| err(ln, format!("bad {name} count"))),
                _ => Err(err(ln, format!("expected `{name} <count>`"))),
            }
        };
        let nv = header(next()?, "vertices")?;
        let mut g = MatchGraph::new();
        let mut by_label = HashMap::new();
        for _ in 0..nv {
            let (ln, f) = next()?;
            let [label, x, y, color] = f[..] else {
                return Err(err(ln, "vertex line needs `label x y color`".into()));
            };
            let label: usize = label.parse().map_err(|_| err(ln, format!("bad label {label:?}")))?;
            let x = parse_rational(x).map_err(|e| err(ln, e.to_string()))?;
            let y = parse_rational(y).map_err(|e| err(ln, e.to_string()))?;
            let color = match color {
                "black" => Color::Black,
                "white" => Color::White,
                c => return Err(err(ln, format!("bad color {c:?}"))),
            };
            if by_label.insert(label, g.add_labeled(label, x, y, color)).is_some() {
                return Err(err(ln, format!("duplicate label {label}")));
            }
        }
        let ne = header(next()?, "edges")?;
        for _ in 0..ne {
            let (ln, f) = next()?;
            let [a, b, w] = f[..] else {
                return Err(err(ln, "edge line needs `label label weight`".into()));
            };
            let end = |s: &str| -> Result<usize> {
                let lab: usize = s.parse().map_err(|_| err(ln, format!("bad label {s:?}")))?;
                by_label.get(&lab).copied().ok_or_else(|| err(ln, format!("unknown label {lab}")))
            };
            let (i, j) = (end(a)?, end(b)?);
            let w = parse_rational(w).map_err(|e| err(ln, e.to_string()))?;
            g.add_edge(i, j, w).map_err(|e| err(ln, e.to_string()))?;
        }
        if let Ok((ln, _)) = next() {
            return Err(err(ln, "trailing content".into()));
        }
        Ok(g)
    }
}

/// One vertex per cell (sorted cell order) and one edge per adjacent pair.
pub fn dual_graph(region: &Region) -> MatchGraph {
    let mut g = MatchGraph::new();
    let cells: Vec<Cell> = region.cells.iter().copied().collect();
    let index: HashMap<Cell, usize> = cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    for c in &cells {
        let (x, y) = c.position();
        g.add_vertex(x, y, if c.is_black() { Color::Black } else { Color::White });
    }
    for (a, b) in region.adjacent_pairs() {
        g.edges.insert(key(index[&a], index[&b]), region.weight(a, b));
    }
    g
}

/// Strips forced edges at degree-1 vertices until none remain.
pub fn reduce_forced(g: &MatchGraph) -> (MatchGraph, Rational) {
    let mut alive = vec![true; g.len()];
    let mut deg: Vec<usize> = (0..g.len()).map(|_| 0).collect();
    let adj = g.adjacency();
    for (v, a) in adj.iter().enumerate() {
        deg[v] = a.len();
    }
    let mut factor = Rational::one();
    loop {
        let Some(v) = (0..g.len()).find(|&v| alive[v] && deg[v] == 1) else { break };
        let u = adj[v].iter().copied().find(|&u| alive[u]).unwrap();
        factor *= g.weight(u, v).unwrap();
        for x in [u, v] {
            alive[x] = false;
            for &y in &adj[x] {
                if alive[y] {
                    deg[y] -= 1;
                }
            }
        }
    }
    (g.induced(|i| alive[i]), factor)
}

/// Disjoint union of `g1` and `g2` with `v2[i]` identified with `v1[i]`
/// (indices). `g2` is recolored when the first pair disagrees. Vertices are
/// relabelled `0..` in order: `g1` first, then the unglued part of `g2`.
pub fn connected_sum(g1: &MatchGraph, v1: &[usize], g2: &MatchGraph, v2: &[usize]) -> Result<MatchGraph> {
    if v1.len() != v2.len() {
        return invalid(format!("gluing lists differ in length ({} vs {})", v1.len(), v2.len()));
    }
    let flipped;
    let g2 = match (v1.first(), v2.first()) {
        (Some(&a), Some(&b)) if g1.vertex(a).color != g2.vertex(b).color => {
            flipped = g2.recolored();
            &flipped
        }
        _ => g2,
    };
    for (&a, &b) in v1.iter().zip(v2) {
        if g1.vertex(a).color != g2.vertex(b).color {
            return invalid(format!("glued vertices {a} and {b} have different colors"));
        }
    }
    let mut out = MatchGraph::new();
    for v in &g1.vertices {
        out.add_labeled(out.len(), v.x.clone(), v.y.clone(), v.color);
    }
    out.edges = g1.edges.clone();
    let mut map = vec![usize::MAX; g2.len()];
    for (&a, &b) in v1.iter().zip(v2) {
        if map[b] != usize::MAX {
            return invalid(format!("vertex {b} glued twice"));
        }
        map[b] = a;
    }
    for (i, v) in g2.vertices.iter().enumerate() {
        if map[i] == usize::MAX {
            map[i] = out.add_labeled(out.len(), v.x.clone(), v.y.clone(), v.color);
        }
    }
    for (&(i, j), w) in &g2.edges {
        let (a, b) = (map[i], map[j]);
        if a == b {
            return invalid("gluing creates a self-loop");
        }
        if out.edges.insert(key(a, b), w.clone()).is_some() {
            return invalid(format!("gluing creates a parallel edge {a}-{b}"));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutResult {
    pub plus: MatchGraph,
    pub minus: MatchGraph,
    pub width: usize,
}

/// Cuts a graph symmetric about the vertical line `x = axis`.
///
/// On-axis vertices are read top to bottom as `a1, b1, a2, b2, ...` with
/// colors flipped globally if needed so that `a1` is white. White `a`s and
/// black `b`s lose their edges to the left, black `a`s and white `b`s their
/// edges to the right, and edges along the axis are halved. `plus` collects the
/// components reaching left of the axis, `minus` the rest.
pub fn symmetry_cut(g: &MatchGraph, axis: &Rational) -> Result<CutResult> {
    let two = int(2);
    let mirror: HashMap<(Rational, Rational), usize> =
        g.vertices.iter().enumerate().map(|(i, v)| ((v.x.clone(), v.y.clone()), i)).collect();
    let mut image = vec![0; g.len()];
    for (i, v) in g.vertices.iter().enumerate() {
        let p = (&two * axis - &v.x, v.y.clone());
        image[i] = *mirror
            .get(&p)
            .ok_or_else(|| Error::Invalid(format!("vertex {} has no mirror image", v.label)))?;
    }
    for (&(i, j), w) in &g.edges {
        if g.weight(image[i], image[j]) != Some(w) {
            return invalid(format!(
                "edge {}-{} has no mirror edge of equal weight",
                g.vertices[i].label, g.vertices[j].label
            ));
        }
    }
    let side = |i: usize| g.vertices[i].x.cmp(axis);
    use std::cmp::Ordering::{Equal, Greater, Less};
    for &(i, j) in g.edges.keys() {
        if matches!((side(i), side(j)), (Less, Greater) | (Greater, Less)) {
            return invalid("an edge crosses the axis; on-axis vertices are not a cut set");
        }
    }
    let mut on_axis: Vec<usize> = (0..g.len()).filter(|&i| side(i) == Equal).collect();
    if on_axis.len() % 2 == 1 {
        return invalid(format!("{} vertices on the axis; need an even number", on_axis.len()));
    }
    on_axis.sort_by(|&a, &b| g.vertices[b].y.cmp(&g.vertices[a].y));
    let flip = on_axis.first().is_some_and(|&a| g.vertices[a].color == Color::Black);
    let color = |i: usize| if flip { g.vertices[i].color.flip() } else { g.vertices[i].color };

    let mut cut = g.clone();
    for (pos, &p) in on_axis.iter().enumerate() {
        let is_a = pos % 2 == 0;
        let white = color(p) == Color::White;
        let drop_left = is_a == white;
        for q in g.neighbors(p) {
            let s = side(q);
            if (s == Less && drop_left) || (s == Greater && !drop_left) {
                cut.remove_edge(p, q);
            }
        }
    }
    let half = rat(1, 2);
    for &(i, j) in g.edges.keys() {
        if side(i) == Equal && side(j) == Equal {
            if let Some(w) = cut.edges.get_mut(&key(i, j)) {
                *w *= &half;
            }
        }
    }
    let mut in_plus = vec![false; g.len()];
    for comp in cut.components() {
        let left = comp.iter().any(|&v| side(v) == Less);
        let right = comp.iter().any(|&v| side(v) == Greater);
        if left && right {
            return invalid("after the cut a component still spans both sides of the axis");
        }
        if !right {
            for v in comp {
                in_plus[v] = true;
            }
        }
    }
    Ok(CutResult {
        plus: cut.induced(|i| in_plus[i]),
        minus: cut.induced(|i| !in_plus[i]),
        width: on_axis.len() / 2,
    })
}

/// Exact isomorphism test (weights and colors included) by backtracking;
/// intended for the small graphs produced by rewrite pipelines.
pub fn isomorphic(g: &MatchGraph, h: &MatchGraph) -> bool {
    if g.len() != h.len() || g.edge_count() != h.edge_count() {
        return false;
    }
    let (ga, ha) = (g.adjacency(), h.adjacency());
    let sig = |gr: &MatchGraph, adj: &[Vec<usize>], v: usize| {
        let mut ws: Vec<Rational> = adj[v].iter().map(|&u| gr.weight(u, v).unwrap().clone()).collect();
        ws.sort();
        ws
    };
    let gs: Vec<_> = (0..g.len()).map(|v| sig(g, &ga, v)).collect();
    let hs: Vec<_> = (0..h.len()).map(|v| sig(h, &ha, v)).collect();
    let mut a = gs.clone();
    let mut b = hs.clone();
    a.sort();
    b.sort();
    if a != b {
        return false;
    }
    // try both global color assignments
    [false, true].into_iter().any(|flip| {
        let mut map = vec![usize::MAX; g.len()];
        let mut used = vec![false; h.len()];
        let mut order: Vec<usize> = Vec::new();
        let mut seen = vec![false; g.len()];
        for s in 0..g.len() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                order.push(v);
                for &u in &ga[v] {
                    if !seen[u] {
                        seen[u] = true;
                        queue.push_back(u);
                    }
                }
            }
        }
        extend(g, h, &ga, &gs, &hs, flip, &order, 0, &mut map, &mut used)
    })
}

#[allow(clippy::too_many_arguments)]
fn extend(
    g: &MatchGraph,
    h: &MatchGraph,
    ga: &[Vec<usize>],
    gs: &[Vec<Rational>],
    hs: &[Vec<Rational>],
    flip: bool,
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    let Some(&v) = order.get(depth) else { return true };
    for c in 0..h.len() {
        if used[c] || gs[v] != hs[c] {
            continue;
        }
        let want = if flip { g.vertex(v).color.flip() } else { g.vertex(v).color };
        if h.vertex(c).color != want {
            continue;
        }
        let ok = ga[v].iter().all(|&u| map[u] == usize::MAX || h.weight(map[u], c) == g.weight(u, v));
        if !ok {
            continue;
        }
        map[v] = c;
        used[c] = true;
        if extend(g, h, ga, gs, hs, flip, order, depth + 1, map, used) {
            return true;
        }
        map[v] = usize::MAX;
        used[c] = false;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn cycle4() -> MatchGraph {
        let mut g = MatchGraph::new();
        let pts = [(0, 1, Color::Black), (-1, 0, Color::White), (0, -1, Color::Black), (1, 0, Color::White)];
        for (x, y, c) in pts {
            g.add_vertex(int(x), int(y), c);
        }
        for i in 0..4 {
            g.add_edge(i, (i + 1) % 4, int(1)).unwrap();
        }
        g
    }

    #[test]
    fn dump_round_trips() {
        let mut g = cycle4();
        g.set_weight(0, 1, rat(1, 2));
        let text = g.dump();
        assert!(text.contains("0 1 1/2"));
        let h = MatchGraph::parse_dump(&text, "mem").unwrap();
        assert_eq!(h.dump(), text);
    }

    #[test]
    fn dump_parse_errors_carry_line_numbers() {
        let bad = "vertices 1\n0 0 0 purple\nedges 0\n";
        let e = MatchGraph::parse_dump(bad, "g.txt").unwrap_err().to_string();
        assert!(e.starts_with("g.txt:2:"), "{e}");
    }

    #[test]
    fn forced_edges_strip() {
        let mut g = MatchGraph::new();
        g.add_vertex(int(0), int(0), Color::Black);
        g.add_vertex(int(1), int(0), Color::White);
        g.add_edge(0, 1, rat(1, 2)).unwrap();
        let (r, f) = reduce_forced(&g);
        assert!(r.is_empty());
        assert_eq!(f, rat(1, 2));

        let (r, f) = reduce_forced(&cycle4());
        assert_eq!(r, cycle4());
        assert_eq!(f, int(1));

        g.add_vertex(int(2), int(0), Color::Black);
        g.add_edge(1, 2, int(3)).unwrap();
        let (r, f) = reduce_forced(&g);
        assert_eq!(r.len(), 1);
        assert_eq!(f, rat(1, 2));
    }

    #[test]
    fn cut_of_symmetric_square() {
        let c = symmetry_cut(&cycle4(), &int(0)).unwrap();
        assert_eq!(c.width, 1);
        assert_eq!(c.plus.len(), 2);
        assert_eq!(c.minus.len(), 2);
        assert_eq!(c.plus.edge_count(), 1);
        assert_eq!(c.minus.edge_count(), 1);
    }

    #[test]
    fn cut_rejects_asymmetry() {
        let mut g = cycle4();
        g.set_weight(0, 1, int(2));
        assert!(symmetry_cut(&g, &int(0)).is_err());
        assert!(symmetry_cut(&cycle4(), &int(1)).is_err());
    }

    #[test]
    fn gluing_checks() {
        let g = cycle4();
        assert!(connected_sum(&g, &[0], &g, &[]).is_err());
        let s = connected_sum(&g, &[], &g, &[]).unwrap();
        assert_eq!(s.len(), 8);
        assert!(connected_sum(&g, &[0, 1], &g, &[0, 1]).is_err());
    }

    #[test]
    fn isomorphism_detects_relabelling() {
        let g = cycle4();
        let h = g.induced(|_| true).recolored();
        assert!(isomorphic(&g, &h));
        let mut k = g.clone();
        k.set_weight(0, 1, int(2));
        assert!(!isomorphic(&g, &k));
    }
}
