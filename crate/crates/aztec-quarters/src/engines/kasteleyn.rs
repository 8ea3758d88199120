//! Signed biadjacency determinant for plane bipartite graphs.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graphs::{Color, MatchGraph};
use crate::numeric::{det_exact, IntMatrix, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KasteleynSigning {
    /// Sign per edge, keyed by index pair `(i, j)` with `i < j`.
    pub signs: BTreeMap<(usize, usize), i8>,
}

impl KasteleynSigning {
    pub fn sign(&self, i: usize, j: usize) -> i8 {
        self.signs[&(i.min(j), i.max(j))]
    }
}

type Pt = (i128, i128);

fn integer_points(g: &MatchGraph) -> Result<Vec<Pt>> {
    let l = g
        .vertices()
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.x.denom()).lcm(v.y.denom()));
    let scale = |r: &Rational| {
        (r.numer() * (&l / r.denom()))
            .to_i128()
            .filter(|v| v.abs() < 1 << 60)
            .ok_or_else(|| Error::NotPlane("coordinates too large".into()))
    };
    g.vertices().iter().map(|v| Ok((scale(&v.x)?, scale(&v.y)?))).collect()
}

fn cross(o: Pt, a: Pt, b: Pt) -> i128 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn on_segment(p: Pt, a: Pt, b: Pt) -> bool {
    cross(a, b, p) == 0 && p.0 >= a.0.min(b.0) && p.0 <= a.0.max(b.0) && p.1 >= a.1.min(b.1) && p.1 <= a.1.max(b.1)
}

fn segments_meet(a: Pt, b: Pt, c: Pt, d: Pt) -> bool {
    let (d1, d2) = (cross(a, b, c), cross(a, b, d));
    let (d3, d4) = (cross(c, d, a), cross(c, d, b));
    if ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)) {
        return true;
    }
    on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) || on_segment(b, c, d)
}

/// Rejects coincident vertices, vertices inside edges and crossing edges.
fn check_plane(g: &MatchGraph, p: &[Pt]) -> Result<()> {
    let mut seen = HashMap::new();
    for (i, q) in p.iter().enumerate() {
        if let Some(j) = seen.insert(*q, i) {
            return Err(Error::NotPlane(format!(
                "vertices {} and {} coincide",
                g.vertex(j).label,
                g.vertex(i).label
            )));
        }
    }
    let edges: Vec<(usize, usize)> = g.edges().map(|(i, j, _)| (i, j)).collect();
    let label = |i: usize| g.vertex(i).label;
    for &(i, j) in &edges {
        for (v, q) in p.iter().enumerate() {
            if v != i && v != j && on_segment(*q, p[i], p[j]) {
                return Err(Error::NotPlane(format!("vertex {} lies on edge {}-{}", label(v), label(i), label(j))));
            }
        }
    }
    for (x, &(a, b)) in edges.iter().enumerate() {
        for &(c, d) in &edges[x + 1..] {
            let shared = [a, b].into_iter().find(|v| *v == c || *v == d);
            let crossing = match shared {
                // two edges from a common endpoint only meet elsewhere when collinear and overlapping,
                // which the vertex-on-edge test above already rejects
                Some(_) => false,
                None => segments_meet(p[a], p[b], p[c], p[d]),
            };
            if crossing {
                return Err(Error::NotPlane(format!(
                    "edges {}-{} and {}-{} cross",
                    label(a),
                    label(b),
                    label(c),
                    label(d)
                )));
            }
        }
    }
    Ok(())
}

fn half(d: Pt) -> u8 {
    if d.1 > 0 || (d.1 == 0 && d.0 > 0) {
        0
    } else {
        1
    }
}

/// Counter-clockwise angular order of direction vectors.
fn angle_cmp(a: Pt, b: Pt) -> Ordering {
    half(a).cmp(&half(b)).then_with(|| 0.cmp(&(a.0 * b.1 - a.1 * b.0)))
}

struct Face {
    darts: Vec<(usize, usize)>,
    area2: i128,
}

struct Embedding {
    faces: Vec<Face>,
    comp_of: Vec<usize>,
    comps: Vec<Vec<usize>>,
}

fn embed(g: &MatchGraph, p: &[Pt]) -> Result<Embedding> {
    let adj = g.adjacency();
    let rot: Vec<Vec<usize>> = adj
        .iter()
        .enumerate()
        .map(|(v, ns)| {
            let mut ns = ns.clone();
            ns.sort_by(|&a, &b| {
                let da = (p[a].0 - p[v].0, p[a].1 - p[v].1);
                let db = (p[b].0 - p[v].0, p[b].1 - p[v].1);
                angle_cmp(da, db)
            });
            ns
        })
        .collect();
    let pos: HashMap<(usize, usize), usize> = rot
        .iter()
        .enumerate()
        .flat_map(|(v, ns)| ns.iter().enumerate().map(move |(k, &u)| ((v, u), k)))
        .collect();
    let mut used = HashSet::new();
    let mut faces = Vec::new();
    for (v, ns) in rot.iter().enumerate() {
        for &u in ns {
            if used.contains(&(v, u)) {
                continue;
            }
            let mut darts = Vec::new();
            let (mut a, mut b) = (v, u);
            while used.insert((a, b)) {
                darts.push((a, b));
                let r = &rot[b];
                let k = pos[&(b, a)];
                let c = r[(k + r.len() - 1) % r.len()];
                a = b;
                b = c;
            }
            let area2 = darts.iter().map(|&(a, b)| p[a].0 * p[b].1 - p[a].1 * p[b].0).sum();
            faces.push(Face { darts, area2 });
        }
    }
    let comps = g.components();
    let mut comp_of = vec![0; g.len()];
    for (c, vs) in comps.iter().enumerate() {
        for &v in vs {
            comp_of[v] = c;
        }
    }
    for (c, vs) in comps.iter().enumerate() {
        let nf = faces.iter().filter(|f| comp_of[f.darts[0].0] == c).count();
        let ne: usize = vs.iter().map(|&v| adj[v].len()).sum::<usize>() / 2;
        if vs.len() > 1 && vs.len() + nf != ne + 2 {
            return Err(Error::NotPlane("face count violates Euler's formula".into()));
        }
    }
    Ok(Embedding { faces, comp_of, comps })
}

fn bounded_faces_of(emb: &Embedding, c: usize) -> Result<(Vec<usize>, usize)> {
    let ids: Vec<usize> = (0..emb.faces.len()).filter(|&f| emb.comp_of[emb.faces[f].darts[0].0] == c).collect();
    let outer = *ids
        .iter()
        .min_by_key(|&&f| emb.faces[f].area2)
        .ok_or_else(|| Error::NotPlane("component without faces".into()))?;
    if ids.iter().any(|&f| f != outer && emb.faces[f].area2 <= 0) {
        return Err(Error::NotPlane("more than one unbounded face".into()));
    }
    Ok((ids, outer))
}

fn edge_multiplicity(face: &Face) -> HashMap<(usize, usize), usize> {
    let mut m = HashMap::new();
    for &(a, b) in &face.darts {
        *m.entry((a.min(b), a.max(b))).or_insert(0) += 1;
    }
    m
}

fn sign_component(g: &MatchGraph, emb: &Embedding, c: usize, signs: &mut BTreeMap<(usize, usize), i8>) -> Result<()> {
    let vs = &emb.comps[c];
    let adj = g.adjacency();
    let mut tree = HashSet::new();
    let mut seen = HashSet::from([vs[0]]);
    let mut queue = VecDeque::from([vs[0]]);
    while let Some(v) = queue.pop_front() {
        for &u in &adj[v] {
            if seen.insert(u) {
                tree.insert((v.min(u), v.max(u)));
                queue.push_back(u);
            }
        }
    }
    for &e in &tree {
        signs.insert(e, 1);
    }
    if vs.len() == 1 {
        return Ok(());
    }
    let (ids, outer) = bounded_faces_of(emb, c)?;
    let mut face_of_dart = HashMap::new();
    for &f in &ids {
        for &d in &emb.faces[f].darts {
            face_of_dart.insert(d, f);
        }
    }
    // dual tree over the edges outside the spanning tree
    let mut dual: HashMap<usize, Vec<(usize, (usize, usize))>> = HashMap::new();
    for &v in vs {
        for &u in &adj[v] {
            let e = (v.min(u), v.max(u));
            if v < u && !tree.contains(&e) {
                let (f1, f2) = (face_of_dart[&(v, u)], face_of_dart[&(u, v)]);
                if f1 == f2 {
                    return Err(Error::NotPlane("non-tree edge bounded by a single face".into()));
                }
                dual.entry(f1).or_default().push((f2, e));
                dual.entry(f2).or_default().push((f1, e));
            }
        }
    }
    let mut parent: HashMap<usize, (usize, usize)> = HashMap::new();
    let mut order = vec![outer];
    let mut visited = HashSet::from([outer]);
    let mut i = 0;
    while i < order.len() {
        let f = order[i];
        i += 1;
        for &(h, e) in dual.get(&f).map(Vec::as_slice).unwrap_or(&[]) {
            if visited.insert(h) {
                parent.insert(h, e);
                order.push(h);
            }
        }
    }
    if order.len() != ids.len() {
        return Err(Error::NotPlane("dual of the cotree is disconnected".into()));
    }
    for &f in order.iter().rev() {
        if f == outer {
            continue;
        }
        let pe = parent[&f];
        let face = &emb.faces[f];
        let ell = face.darts.len() / 2;
        let minus = edge_multiplicity(face)
            .into_iter()
            .filter(|&(e, k)| k == 1 && e != pe && signs[&e] == -1)
            .count();
        let want = (ell + 1) % 2;
        signs.insert(pe, if minus % 2 == want { 1 } else { -1 });
    }
    Ok(())
}

/// Constructs a signing satisfying the face condition on every bounded face.
pub fn kasteleyn_signing(g: &MatchGraph) -> Result<KasteleynSigning> {
    let p = integer_points(g)?;
    check_plane(g, &p)?;
    let emb = embed(g, &p)?;
    let mut signs = BTreeMap::new();
    for c in 0..emb.comps.len() {
        sign_component(g, &emb, c, &mut signs)?;
    }
    Ok(KasteleynSigning { signs })
}

/// True iff every bounded face of length `2l` carries a number of `-1`
/// edges congruent to `l + 1` mod 2 (edges seen twice on a face ignored).
pub fn check_signing(g: &MatchGraph, s: &KasteleynSigning) -> Result<bool> {
    let p = integer_points(g)?;
    let emb = embed(g, &p)?;
    for c in 0..emb.comps.len() {
        if emb.comps[c].len() == 1 {
            continue;
        }
        let (ids, outer) = bounded_faces_of(&emb, c)?;
        for f in ids.into_iter().filter(|&f| f != outer) {
            let face = &emb.faces[f];
            let minus = edge_multiplicity(face)
                .into_iter()
                .filter(|&((a, b), k)| k == 1 && s.sign(a, b) == -1)
                .count();
            if minus % 2 != (face.darts.len() / 2 + 1) % 2 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn count_kasteleyn(g: &MatchGraph) -> Result<Rational> {
    let signing = kasteleyn_signing(g)?;
    let l = g.edges().fold(BigInt::one(), |acc, (_, _, w)| acc.lcm(w.denom()));
    let mut total = Rational::one();
    for comp in g.components() {
        let blacks: Vec<usize> = comp.iter().copied().filter(|&v| g.vertex(v).color == Color::Black).collect();
        let whites: Vec<usize> = comp.iter().copied().filter(|&v| g.vertex(v).color == Color::White).collect();
        if blacks.len() != whites.len() {
            return Ok(Rational::zero());
        }
        let col: HashMap<usize, usize> = whites.iter().enumerate().map(|(k, &w)| (w, k)).collect();
        let n = blacks.len();
        let mut m = IntMatrix::zeros(n, n);
        for (r, &b) in blacks.iter().enumerate() {
            for u in g.neighbors(b) {
                let w = g.weight(b, u).unwrap();
                let v = (w.numer() * (&l / w.denom())) * BigInt::from(signing.sign(b, u));
                m.set(r, col[&u], v);
            }
        }
        let d = det_exact(&m)?.abs();
        if d.is_zero() {
            return Ok(Rational::zero());
        }
        total *= Rational::new(d, num_traits::pow(l.clone(), n));
    }
    Ok(total)
}
