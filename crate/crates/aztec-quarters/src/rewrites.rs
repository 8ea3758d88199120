//! Local graph transformations that change the matching generating function
//! by a known factor, and scripts chaining them.
//!
//! Every rule returns the rewritten graph together with a [`RewriteStep`]
//! whose factor satisfies `M(before) = factor * M(after)`. Sites are given by
//! vertex labels, which survive rewrites; new vertices get fresh labels.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graphs::{dual_graph, reduce_forced, Color, MatchGraph};
use crate::numeric::{fmt_rational, int, parse_rational, rat, Rational};
use crate::regions::{build_region, Quarter, RegionSpec};

/// One step of a rewrite script.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", deny_unknown_fields)]
pub enum ScriptStep {
    /// Split `site`; the first copy keeps the neighbours in `h`.
    #[serde(rename = "vertex-split")]
    VertexSplit { site: usize, h: Vec<usize> },
    /// Multiply every edge at `site` by `t`, written as `"p/q"`.
    #[serde(rename = "star")]
    Star { site: usize, t: String },
    /// Inner 4-cycle `p1 p2 p3 p4`, each with one unit leg.
    #[serde(rename = "spider-a")]
    SpiderA { site: [usize; 4] },
    /// Inner path `p1 p2 p3`, each with one unit leg.
    #[serde(rename = "spider-b")]
    SpiderB { site: [usize; 3] },
    /// Inner edge `p1 p2`, each end with one unit leg.
    #[serde(rename = "spider-c")]
    SpiderC { site: [usize; 2] },
    /// `a b1 b2 b3 c1 c2 c3`.
    #[serde(rename = "double-4-cycle")]
    Double4Cycle { site: [usize; 7] },
    /// Remove the edge at a degree-1 vertex, or all forced edges when no site is given.
    #[serde(rename = "forced-edge")]
    ForcedEdge {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        site: Option<usize>,
    },
}

impl ScriptStep {
    pub fn rule(&self) -> &'static str {
        match self {
            ScriptStep::VertexSplit { .. } => "vertex-split",
            ScriptStep::Star { .. } => "star",
            ScriptStep::SpiderA { .. } => "spider-a",
            ScriptStep::SpiderB { .. } => "spider-b",
            ScriptStep::SpiderC { .. } => "spider-c",
            ScriptStep::Double4Cycle { .. } => "double-4-cycle",
            ScriptStep::ForcedEdge { .. } => "forced-edge",
        }
    }
}

/// A rule as applied: which vertices it consumed and its factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteStep {
    pub rule: &'static str,
    pub site: Vec<usize>,
    pub factor: Rational,
}

fn step(rule: &'static str, site: &[usize], factor: Rational) -> RewriteStep {
    RewriteStep { rule, site: site.to_vec(), factor }
}

fn idx(g: &MatchGraph, label: usize) -> Result<usize> {
    g.index_of(label)
}

fn indices<const N: usize>(g: &MatchGraph, site: [usize; N]) -> Result<[usize; N]> {
    distinct(&site)?;
    let mut out = [0; N];
    for (o, l) in out.iter_mut().zip(site) {
        *o = g.index_of(l)?;
    }
    Ok(out)
}

fn label(g: &MatchGraph, i: usize) -> usize {
    g.vertex(i).label
}

fn distinct(site: &[usize]) -> Result<()> {
    let set: BTreeSet<_> = site.iter().collect();
    if set.len() != site.len() {
        return invalid(format!("site {site:?} repeats a vertex"));
    }
    Ok(())
}

fn edge(g: &MatchGraph, i: usize, j: usize) -> Result<Rational> {
    g.weight(i, j)
        .cloned()
        .ok_or_else(|| Error::Pattern(format!("missing edge {}-{}", label(g, i), label(g, j))))
}

/// The unique neighbour of `v` outside `inner`, which must be joined by a unit edge.
fn unit_leg(g: &MatchGraph, v: usize, inner: &[usize], inner_degree: usize) -> Result<usize> {
    let nbrs = g.neighbors(v);
    let inside = nbrs.iter().filter(|u| inner.contains(u)).count();
    let outside: Vec<usize> = nbrs.into_iter().filter(|u| !inner.contains(u)).collect();
    if inside != inner_degree || outside.len() != 1 {
        return Err(Error::Pattern(format!(
            "vertex {} must have {inner_degree} site neighbours and exactly one outside neighbour",
            label(g, v)
        )));
    }
    let leg = outside[0];
    if !edge(g, v, leg)?.is_one() {
        return Err(Error::Pattern(format!("leg {}-{} must have weight 1", label(g, v), label(g, leg))));
    }
    Ok(leg)
}

pub fn vertex_split(g: &MatchGraph, v: usize, h: &[usize]) -> Result<(MatchGraph, RewriteStep)> {
    let vi = idx(g, v)?;
    let nbrs = g.neighbors(vi);
    let mut keep = BTreeSet::new();
    for &l in h {
        let u = idx(g, l)?;
        if !nbrs.contains(&u) {
            return invalid(format!("vertex {l} is not a neighbour of {v}"));
        }
        keep.insert(u);
    }
    let mut out = g.clone();
    let vx = g.vertex(vi);
    let color = vx.color;
    let (x0, y0) = (vx.x.clone(), vx.y.clone());
    let second = out.add_vertex(&x0 + rat(1, 2), y0.clone(), color);
    let mid = out.add_vertex(&x0 + rat(1, 4), &y0 + rat(1, 4), color.flip());
    for u in nbrs.into_iter().filter(|u| !keep.contains(u)) {
        let w = out.remove_edge(vi, u).unwrap();
        out.add_edge(second, u, w)?;
    }
    out.add_edge(vi, mid, int(1))?;
    out.add_edge(second, mid, int(1))?;
    Ok((out, step("vertex-split", &[v], int(1))))
}

pub fn star_scale(g: &MatchGraph, v: usize, t: &Rational) -> Result<(MatchGraph, RewriteStep)> {
    if *t <= Rational::zero() {
        return invalid(format!("star factor {} must be positive", fmt_rational(t)));
    }
    let vi = idx(g, v)?;
    let mut out = g.clone();
    for u in g.neighbors(vi) {
        let w = edge(g, vi, u)? * t;
        out.set_weight(vi, u, w);
    }
    Ok((out, step("star", &[v], t.recip())))
}

/// Replaces the inner 4-cycle by a 4-cycle on its legs, dividing by `xz + yt`.
pub fn urban_renewal(g: &MatchGraph, site: [usize; 4]) -> Result<(MatchGraph, RewriteStep)> {
    let p = indices(g, site)?;
    let x = edge(g, p[0], p[1])?;
    let y = edge(g, p[1], p[2])?;
    let z = edge(g, p[2], p[3])?;
    let t = edge(g, p[3], p[0])?;
    let mut legs = [0; 4];
    for i in 0..4 {
        legs[i] = label(g, unit_leg(g, p[i], &p, 2)?);
    }
    distinct(&legs)?;
    let delta = &x * &z + &y * &t;
    let removed: BTreeSet<usize> = p.iter().copied().collect();
    let mut out = g.without(&removed);
    let l = legs.map(|l| out.index_of(l).unwrap());
    out.merge_edge(l[0], l[1], &z / &delta)?;
    out.merge_edge(l[1], l[2], &t / &delta)?;
    out.merge_edge(l[2], l[3], &x / &delta)?;
    out.merge_edge(l[3], l[0], &y / &delta)?;
    Ok((out, step("spider-a", &site, delta)))
}

/// Replaces the inner path `p1 - p2 - p3` (weights `x`, `y`) by a 4-cycle
/// through its legs `A B C` and a new vertex `D`.
pub fn urban_renewal_b(g: &MatchGraph, site: [usize; 3]) -> Result<(MatchGraph, RewriteStep)> {
    let p = indices(g, site)?;
    let x = edge(g, p[0], p[1])?;
    let y = edge(g, p[1], p[2])?;
    let a = unit_leg(g, p[0], &p, 1)?;
    let b = unit_leg(g, p[1], &p, 2)?;
    let c = unit_leg(g, p[2], &p, 1)?;
    let legs = [label(g, a), label(g, b), label(g, c)];
    distinct(&legs)?;
    let (va, vb, vc) = (g.vertex(a).clone(), g.vertex(b).clone(), g.vertex(c).clone());
    let mut out = g.without(&p.iter().copied().collect());
    let [a, b, c] = legs.map(|l| out.index_of(l).unwrap());
    let d = out.add_vertex(&va.x + &vc.x - &vb.x, &va.y + &vc.y - &vb.y, vb.color);
    let two = int(2);
    out.merge_edge(a, b, (&two * &x).recip())?;
    out.merge_edge(b, c, (&two * &y).recip())?;
    out.add_edge(c, d, &x / &two)?;
    out.add_edge(d, a, &y / &two)?;
    Ok((out, step("spider-b", &site, two)))
}

/// Replaces the inner edge `p1 - p2` (weight `x`) by a 4-cycle through its
/// legs `A B` and new vertices `C D`.
pub fn urban_renewal_c(g: &MatchGraph, site: [usize; 2]) -> Result<(MatchGraph, RewriteStep)> {
    let p = indices(g, site)?;
    let x = edge(g, p[0], p[1])?;
    let a = unit_leg(g, p[0], &p, 1)?;
    let b = unit_leg(g, p[1], &p, 1)?;
    let legs = [label(g, a), label(g, b)];
    distinct(&legs)?;
    let (va, vb) = (g.vertex(a).clone(), g.vertex(b).clone());
    let (v1, v2) = (g.vertex(p[0]).clone(), g.vertex(p[1]).clone());
    let mut out = g.without(&p.iter().copied().collect());
    let [a, b] = legs.map(|l| out.index_of(l).unwrap());
    let two = int(2);
    let c = out.add_vertex(&two * &v2.x - &vb.x, &two * &v2.y - &vb.y, vb.color.flip());
    let d = out.add_vertex(&two * &v1.x - &va.x, &two * &v1.y - &va.y, va.color.flip());
    out.merge_edge(a, b, (&two * &x).recip())?;
    out.add_edge(b, c, rat(1, 2))?;
    out.add_edge(c, d, &x / &two)?;
    out.add_edge(d, a, rat(1, 2))?;
    Ok((out, step("spider-c", &site, two)))
}

/// Two 4-cycles `a b1 b2 b3` and `a c1 c2 c3` sharing `a`; only `b3` and
/// `c3` reach outside. Deletes `b1 b2 c1 c2`.
pub fn double_4cycle(g: &MatchGraph, site: [usize; 7]) -> Result<(MatchGraph, RewriteStep)> {
    let [a, b1, b2, b3, c1, c2, c3] = indices(g, site)?;
    let expect = |x: usize, nbrs: &[usize]| -> Result<()> {
        let mut got = g.neighbors(x);
        got.sort_unstable();
        let mut want = nbrs.to_vec();
        want.sort_unstable();
        if got != want {
            return Err(Error::Pattern(format!("vertex {} has neighbours outside the pattern", label(g, x))));
        }
        Ok(())
    };
    expect(a, &[b1, b3, c1, c3])?;
    expect(b1, &[a, b2])?;
    expect(b2, &[b1, b3])?;
    expect(c1, &[a, c2])?;
    expect(c2, &[c1, c3])?;
    for (p, q, r, s) in [(b1, b2, b3, "b"), (c1, c2, c3, "c")] {
        let lhs = edge(g, a, p)? * edge(g, q, r)?;
        let rhs = edge(g, p, q)? * edge(g, r, a)?;
        if lhs != rhs {
            return Err(Error::Pattern(format!("{s}-cycle opposite weight products differ")));
        }
    }
    let factor = int(2) * edge(g, b1, b2)? * edge(g, c1, c2)?;
    let out = g.without(&[b1, b2, c1, c2].into_iter().collect());
    Ok((out, step("double-4-cycle", &site, factor)))
}

pub fn forced_edge(g: &MatchGraph, site: Option<usize>) -> Result<(MatchGraph, RewriteStep)> {
    match site {
        None => {
            let (out, factor) = reduce_forced(g);
            Ok((out, step("forced-edge", &[], factor)))
        }
        Some(l) => {
            let v = idx(g, l)?;
            let nbrs = g.neighbors(v);
            if nbrs.len() != 1 {
                return Err(Error::Pattern(format!("vertex {l} has degree {}, not 1", nbrs.len())));
            }
            let w = edge(g, v, nbrs[0])?;
            let out = g.without(&[v, nbrs[0]].into_iter().collect());
            Ok((out, step("forced-edge", &[l], w)))
        }
    }
}

pub fn apply_step(g: &MatchGraph, s: &ScriptStep) -> Result<(MatchGraph, RewriteStep)> {
    match s {
        ScriptStep::VertexSplit { site, h } => vertex_split(g, *site, h),
        ScriptStep::Star { site, t } => star_scale(g, *site, &parse_rational(t)?),
        ScriptStep::SpiderA { site } => urban_renewal(g, *site),
        ScriptStep::SpiderB { site } => urban_renewal_b(g, *site),
        ScriptStep::SpiderC { site } => urban_renewal_c(g, *site),
        ScriptStep::Double4Cycle { site } => double_4cycle(g, *site),
        ScriptStep::ForcedEdge { site } => forced_edge(g, *site),
    }
}

/// Final graph, accumulated factor and the applied steps.
pub fn replay_script(g: &MatchGraph, steps: &[ScriptStep]) -> Result<(MatchGraph, Rational, Vec<RewriteStep>)> {
    let mut cur = g.clone();
    let mut factor = Rational::one();
    let mut applied = Vec::with_capacity(steps.len());
    for (index, s) in steps.iter().enumerate() {
        let (next, st) = apply_step(&cur, s).map_err(|e| Error::Step { index, source: Box::new(e) })?;
        factor *= &st.factor;
        applied.push(st);
        cur = next;
    }
    Ok((cur, factor, applied))
}

pub fn parse_script(text: &str, path: &str) -> Result<Vec<ScriptStep>> {
    serde_json::from_str(text).map_err(|e| Error::Parse { path: path.to_string(), line: e.line(), msg: e.to_string() })
}

/// A script turning a region graph into the graph of another region.
#[derive(Clone, Debug)]
pub struct Pipeline {
    pub initial: MatchGraph,
    pub steps: Vec<ScriptStep>,
    pub result: MatchGraph,
    pub factor: Rational,
    pub target: RegionSpec,
}

fn run(g: &mut MatchGraph, steps: &mut Vec<ScriptStep>, factor: &mut Rational, s: ScriptStep) -> Result<()> {
    let (next, st) = apply_step(g, &s)?;
    *factor *= st.factor;
    *g = next;
    steps.push(s);
    Ok(())
}

/// Turns `RE(2k-1, n)` into `TO(2k-1, n)` or `RO(2k, n)` into `TE(2k, n)`:
/// split every vertex, renew every face of the ambient rectangle, clear
/// forced edges and rescale one color class by 2.
pub fn quarter_pipeline(spec: &RegionSpec) -> Result<Pipeline> {
    let RegionSpec::Quartered { family, m, n, a } = spec else {
        return invalid(format!("pipeline needs an RE or RO region, not {spec}"));
    };
    let target_family = match family {
        Quarter::RE if m % 2 == 1 => Quarter::TO,
        Quarter::RO if m % 2 == 0 => Quarter::TE,
        _ => return invalid(format!("pipeline needs RE with odd m or RO with even m, not {spec}")),
    };
    let region = build_region(spec)?;
    let initial = dual_graph(&region);
    let mut g = initial.clone();
    let mut steps = Vec::new();
    let mut factor = Rational::one();

    // Odd rows keep their upper neighbours in the first half, even rows
    // their left ones.
    let pos = |g: &MatchGraph, i: usize| -> (i64, i64) {
        let v = g.vertex(i);
        (v.x.to_integer().try_into().unwrap(), v.y.to_integer().try_into().unwrap())
    };
    let originals: Vec<((i64, i64), usize)> = (0..g.len()).map(|i| (pos(&g, i), label(&g, i))).collect();
    let mut halves = std::collections::BTreeMap::new();
    for &((x, y), l) in &originals {
        let vi = idx(&g, l)?;
        let h: Vec<usize> = if y % 2 == 1 {
            g.neighbors(vi).into_iter().filter(|&u| pos(&g, u).1 > y).map(|u| label(&g, u)).collect()
        } else {
            g.neighbors(vi).into_iter().filter(|&u| pos(&g, u).0 < x).map(|u| label(&g, u)).collect()
        };
        let second = g.next_label();
        run(&mut g, &mut steps, &mut factor, ScriptStep::VertexSplit { site: l, h })?;
        halves.insert((x, y), (l, second));
    }

    // Faces of the ambient rectangle are centred at (even x, even y).
    let rows = 2 * *m as i64 + 1;
    let width = 2 * *n as i64 + 2;
    for yc in (2..rows).step_by(2) {
        for xc in (0..=width).step_by(2) {
            let top = halves.get(&(xc, yc + 1)).map(|h| h.1);
            let left = halves.get(&(xc - 1, yc)).map(|h| h.1);
            let bottom = halves.get(&(xc, yc - 1)).map(|h| h.0);
            let right = halves.get(&(xc + 1, yc)).map(|h| h.0);
            let ring = [top, left, bottom, right];
            let present = ring.iter().filter(|v| v.is_some()).count();
            let s = match present {
                4 => Some(ScriptStep::SpiderA { site: ring.map(Option::unwrap) }),
                3 => {
                    let gap = ring.iter().position(Option::is_none).unwrap();
                    let path = [1, 2, 3].map(|i| ring[(gap + i) % 4].unwrap());
                    Some(ScriptStep::SpiderB { site: path })
                }
                2 => (0..4)
                    .find(|&i| ring[i].is_some() && ring[(i + 1) % 4].is_some())
                    .map(|i| ScriptStep::SpiderC { site: [ring[i].unwrap(), ring[(i + 1) % 4].unwrap()] }),
                _ => None,
            };
            if let Some(s) = s {
                run(&mut g, &mut steps, &mut factor, s)?;
            }
        }
    }

    run(&mut g, &mut steps, &mut factor, ScriptStep::ForcedEdge { site: None })?;
    let stars: Vec<usize> =
        (0..g.len()).filter(|&i| g.vertex(i).color == Color::Black).map(|i| label(&g, i)).collect();
    for l in stars {
        run(&mut g, &mut steps, &mut factor, ScriptStep::Star { site: l, t: "2".into() })?;
    }
    Ok(Pipeline {
        initial,
        steps,
        result: g,
        factor,
        target: RegionSpec::Quartered { family: target_family, m: *m, n: *n, a: a.clone() },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engines::count_brute;

    fn cycle4(w: Rational) -> MatchGraph {
        let mut g = MatchGraph::new();
        let v: Vec<usize> = [(0, 0, Color::Black), (1, 0, Color::White), (1, 1, Color::Black), (0, 1, Color::White)]
            .iter()
            .map(|&(x, y, c)| g.add_vertex(int(x), int(y), c))
            .collect();
        g.add_edge(v[0], v[1], w).unwrap();
        for i in 1..4 {
            g.add_edge(v[i], v[(i + 1) % 4], int(1)).unwrap();
        }
        g
    }

    #[test]
    fn split_keeps_count() {
        let g = cycle4(int(1));
        let (h, s) = vertex_split(&g, 0, &[1]).unwrap();
        assert_eq!(h.len(), 6);
        assert_eq!(s.factor, int(1));
        assert_eq!(count_brute(&h).unwrap(), int(2));
        assert!(vertex_split(&g, 0, &[2]).is_err());
    }

    #[test]
    fn star_factor() {
        let g = cycle4(int(1));
        let (h, s) = star_scale(&g, 0, &int(3)).unwrap();
        assert_eq!(count_brute(&h).unwrap(), int(6));
        assert_eq!(s.factor, rat(1, 3));
        assert!(star_scale(&g, 0, &int(0)).is_err());
    }

    #[test]
    fn script_json() {
        let text = r#"[{"rule":"star","site":0,"t":"1/2"},{"rule":"forced-edge"}]"#;
        let steps = parse_script(text, "s.json").unwrap();
        assert_eq!(steps.len(), 2);
        let bad = r#"[{"rule":"star","site":0,"t":"2","extra":1}]"#;
        assert!(parse_script(bad, "s.json").is_err());
        let (h, f, _) = replay_script(&cycle4(int(1)), &steps).unwrap();
        assert_eq!(f, int(2));
        assert_eq!(count_brute(&h).unwrap(), int(1));
    }

    #[test]
    fn step_error_index() {
        let steps = vec![ScriptStep::ForcedEdge { site: None }, ScriptStep::ForcedEdge { site: Some(0) }];
        match replay_script(&cycle4(int(1)), &steps) {
            Err(Error::Step { index, .. }) => assert_eq!(index, 1),
            other => panic!("unexpected {other:?}"),
        }
    }
}
