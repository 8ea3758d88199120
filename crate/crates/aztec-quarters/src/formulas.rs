//! Product formulas, their dispatch per region family, and identity checks
//! that count both sides of an equation.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::engines::{count_brute, count_brute_bounded, count_kasteleyn, DEFAULT_MAX_VERTICES};
use crate::error::{invalid, Result};
use crate::graphs::{connected_sum, dual_graph, Color, MatchGraph};
use crate::numeric::{det_exact, factorial, fmt_rational, int, pow2, rat, IntMatrix, Rational};
use crate::regions::{build_region, Cell, DiamondQuarter, Quarter, RegionSpec};

fn check_list(a: &[i64]) -> Result<()> {
    if a.is_empty() {
        return invalid("argument list must be nonempty");
    }
    if a[0] < 1 {
        return invalid("arguments must be positive");
    }
    if a.windows(2).any(|w| w[0] >= w[1]) {
        return invalid("arguments must be strictly increasing");
    }
    Ok(())
}

fn pairs_lt(a: &[i64], f: impl Fn(i64, i64) -> i64) -> BigInt {
    let mut p = BigInt::one();
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            p *= f(a[i], a[j]);
        }
    }
    p
}

fn pairs_le(a: &[i64], f: impl Fn(i64, i64) -> i64) -> BigInt {
    let mut p = BigInt::one();
    for i in 0..a.len() {
        for j in i..a.len() {
            p *= f(a[i], a[j]);
        }
    }
    p
}

/// `0! 2! ... (2k-2)!` when `odd` is false, `1! 3! ... (2k-1)!` otherwise.
fn factorial_ladder(k: usize, odd: bool) -> BigInt {
    (0..k as u64).map(|i| factorial(2 * i + odd as u64)).product()
}

fn power_k2(k: usize) -> BigInt {
    BigInt::one() << (k * k)
}

fn e_raw(a: &[i64]) -> Rational {
    let k = a.len();
    let num = power_k2(k) * pairs_lt(a, |x, y| y - x) * pairs_lt(a, |x, y| x + y - 1);
    Rational::new(num, factorial_ladder(k, false))
}

fn o_raw(a: &[i64]) -> Rational {
    let k = a.len();
    let num = power_k2(k) * pairs_lt(a, |x, y| y - x) * pairs_le(a, |x, y| x + y - 1);
    Rational::new(num, factorial_ladder(k, true))
}

fn ebar_raw(a: &[i64]) -> Rational {
    let k = a.len();
    let prod: BigInt = a.iter().map(|&x| BigInt::from(x)).product();
    let num = power_k2(k) * prod * pairs_lt(a, |x, y| y - x) * pairs_le(a, |x, y| x + y);
    Rational::new(num, factorial_ladder(k, false))
}

fn obar_raw(a: &[i64]) -> Rational {
    let k = a.len();
    let prod: BigInt = a.iter().map(|&x| BigInt::from(x)).product();
    let num = power_k2(k) * prod * pairs_lt(a, |x, y| y - x) * pairs_lt(a, |x, y| x + y);
    Rational::new(num, factorial_ladder(k, true))
}

pub fn eval_e(a: &[i64]) -> Result<Rational> {
    check_list(a)?;
    Ok(e_raw(a))
}

pub fn eval_o(a: &[i64]) -> Result<Rational> {
    check_list(a)?;
    Ok(o_raw(a))
}

pub fn eval_ebar(a: &[i64]) -> Result<Rational> {
    check_list(a)?;
    Ok(ebar_raw(a))
}

pub fn eval_obar(a: &[i64]) -> Result<Rational> {
    check_list(a)?;
    Ok(obar_raw(a))
}

/// Product of pairwise differences of `s` in increasing order.
pub fn delta(s: &[i64]) -> BigInt {
    let mut v = s.to_vec();
    v.sort_unstable();
    pairs_lt(&v, |x, y| y - x)
}

fn labels(a: &[u32]) -> Vec<i64> {
    a.iter().map(|&x| x as i64).collect()
}

fn evens(n: i64) -> Vec<i64> {
    (1..=n).map(|i| 2 * i).collect()
}

fn odds(n: i64) -> Vec<i64> {
    (1..=n).map(|i| 2 * i - 1).collect()
}

fn diamond_formula(family: DiamondQuarter, order: u32) -> Rational {
    let o = order as i64;
    match (family, o % 4) {
        (DiamondQuarter::R, 1 | 2) => Rational::zero(),
        (DiamondQuarter::R, 0) => e_raw(&evens(o / 4)),
        (DiamondQuarter::R, _) => {
            let n = (o + 1) / 4;
            pow2(-n) * e_raw(&evens(n))
        }
        (DiamondQuarter::Ka, 0) => e_raw(&odds(o / 4)),
        (DiamondQuarter::Ka, 2) => e_raw(&odds((o + 2) / 4)),
        (DiamondQuarter::Ka, r) => {
            let n = if r == 3 { (o + 1) / 4 } else { (o - 1) / 4 };
            pow2(-n) * o_raw(&evens(n))
        }
        (DiamondQuarter::Kna, 0) => o_raw(&evens(o / 4)),
        (DiamondQuarter::Kna, 2) => o_raw(&evens((o - 2) / 4)),
        (DiamondQuarter::Kna, r) => {
            let n = if r == 1 { (o + 3) / 4 } else { (o + 1) / 4 };
            pow2(-n) * e_raw(&odds(n))
        }
    }
}

fn quartered_formula(family: Quarter, m: u32, a: &[i64]) -> Rational {
    let k = a.len() as i64;
    let _ = m;
    match family {
        Quarter::RE => e_raw(a),
        Quarter::RO => o_raw(a),
        Quarter::TE => pow2(-k) * o_raw(a),
        Quarter::TO => pow2(-k) * e_raw(a),
        Quarter::BarRE => pow2(k) * obar_raw(a),
        Quarter::BarRO => {
            let sq: BigInt = a.iter().map(|&x| BigInt::from(x * x)).product();
            pow2(-k) * ebar_raw(a) / Rational::from_integer(sq)
        }
        Quarter::BarTE => obar_raw(a),
        Quarter::BarTO => ebar_raw(a) / Rational::from_integer(factorial(2 * k as u64)),
    }
}

/// The value the printed statement gives for `BarRO`, kept for comparison.
pub fn bar_ro_printed(a: &[i64]) -> Result<Rational> {
    check_list(a)?;
    Ok(pow2(-(a.len() as i64)) * ebar_raw(a))
}

fn vandermonde_ratio(a: &[i64]) -> Rational {
    let mut r = Rational::one();
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            r *= rat(a[j] - a[i], (j - i) as i64);
        }
    }
    r
}

/// Closed-form tiling count (or weighted count) of the region.
pub fn closed_form(spec: &RegionSpec) -> Result<Rational> {
    spec.validate()?;
    Ok(match spec {
        RegionSpec::AztecDiamond { n } => pow2((n * (n + 1) / 2) as i64),
        RegionSpec::AztecRectangle { m, n } => {
            if m == n {
                pow2((n * (n + 1) / 2) as i64)
            } else {
                Rational::zero()
            }
        }
        RegionSpec::TrimmedAztecDiamond { .. } | RegionSpec::TrimmedAztecRectangle { .. } => {
            return invalid(format!("{spec}: no closed form in source"))
        }
        RegionSpec::Quartered { family, m, a, .. } => quartered_formula(*family, *m, &labels(a)),
        RegionSpec::Diamond { family, order } => diamond_formula(*family, *order),
        RegionSpec::QH { m, a, .. } => {
            let a = labels(a);
            let k = a.len() as i64;
            if m % 2 == 1 {
                pow2(-k * k) * e_raw(&a)
            } else {
                pow2(-k * k) * obar_raw(&a)
            }
        }
        RegionSpec::BarQH { m, a, .. } => {
            let a = labels(a);
            let k = a.len() as i64;
            if m % 2 == 0 {
                pow2(-k * (k + 1)) * o_raw(&a)
            } else {
                pow2(-k * (k + 1)) * ebar_raw(&a) / Rational::from_integer(factorial(2 * k as u64))
            }
        }
        RegionSpec::SemiHexagon { s, .. } => vandermonde_ratio(&labels(s)),
        RegionSpec::HoleyAR { m, a, .. } => {
            let m = *m as i64;
            pow2(m * (m + 1) / 2) * vandermonde_ratio(&labels(a))
        }
        RegionSpec::HoleyARBar { m, a, .. } => {
            let m = *m as i64;
            pow2(m * (m - 1) / 2) * vandermonde_ratio(&labels(a))
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Eq9Report {
    pub n: u32,
    pub pass: bool,
    pub e: String,
    pub o: String,
    pub product: String,
}

/// `E(2,4,...,2n) = O(1,3,...,2n-1) = 2^{n(3n-1)/2} prod_{i<j} (2i+2j-1)/(i+j-1)`.
pub fn check_eq9(n: u32) -> Result<Eq9Report> {
    if n < 1 {
        return invalid("eq9 needs n >= 1");
    }
    let n64 = n as i64;
    let e = e_raw(&evens(n64));
    let o = o_raw(&odds(n64));
    let mut p = pow2(n64 * (3 * n64 - 1) / 2);
    for i in 1..=n64 {
        for j in i + 1..=n64 {
            p *= rat(2 * i + 2 * j - 1, i + j - 1);
        }
    }
    Ok(Eq9Report { n, pass: e == o && o == p, e: fmt_rational(&e), o: fmt_rational(&o), product: fmt_rational(&p) })
}

/// Checks the determinant evaluation
/// `det(prod_{t>j}(X_i - A_t - C)(X_i + A_t)) = prod_{i<j}(X_j - X_i)(C - X_i - X_j)`.
/// `a[0]` is ignored.
pub fn check_krattenthaler(x: &[i64], a: &[i64], c: i64) -> Result<bool> {
    let n = x.len();
    if n == 0 || a.len() != n {
        return invalid(format!("need |X| = |A| >= 1, got {} and {}", n, a.len()));
    }
    let mut entries = Vec::with_capacity(n * n);
    for &xi in x {
        for j in 0..n {
            let mut e = BigInt::one();
            for &at in &a[j + 1..] {
                e *= BigInt::from(xi - at - c) * BigInt::from(xi + at);
            }
            entries.push(e);
        }
    }
    let lhs = det_exact(&IntMatrix::new(n, n, entries)?)?;
    let rhs = pairs_lt(x, |xi, xj| (xj - xi) * (c - xi - xj));
    Ok(lhs == rhs)
}

/// Counts a graph with the brute engine when small enough, else Kasteleyn.
pub fn count_graph(g: &MatchGraph) -> Result<Rational> {
    if g.len() <= DEFAULT_MAX_VERTICES {
        count_brute(g)
    } else {
        count_kasteleyn(g)
    }
}

pub fn count_spec(spec: &RegionSpec) -> Result<Rational> {
    count_graph(&dual_graph(&build_region(spec)?))
}

pub const IDENTITY_TAGS: [&str; 20] = [
    "lem2-eq5",
    "lem2-eq6",
    "lem2-eq7",
    "lem2-eq8",
    "lem3-eq1",
    "lem3-eq2",
    "lem10a",
    "lem10b",
    "lem11-eq3",
    "lem11-QHex3",
    "lem11-QHex4",
    "fn1",
    "fn2",
    "fn3",
    "fn4",
    "qhfactor1",
    "qhfactor2",
    "factoreq2",
    "factorn1",
    "factorn2",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityParams {
    pub k: u32,
    pub n: u32,
    pub a: Vec<u32>,
    /// Seed for the random host graph of the gluing identities.
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub tag: String,
    pub params: IdentityParams,
    pub left: String,
    pub right: String,
    pub factor: String,
    pub pass: bool,
}

fn quarter(family: Quarter, m: u32, n: u32, a: &[u32]) -> RegionSpec {
    RegionSpec::Quartered { family, m, n, a: a.to_vec() }
}

/// Parameter requirements shared by every identity: `1 <= k < n`, `|a| = k`,
/// strictly increasing labels in `1..=max`.
fn check_params(tag: &str, p: &IdentityParams, max: u32) -> Result<()> {
    let IdentityParams { k, n, a, .. } = p;
    if *k < 1 || k >= n {
        return invalid(format!("{tag}: requires 1 <= k < n, got k = {k}, n = {n}"));
    }
    if a.len() != *k as usize {
        return invalid(format!("{tag}: expected {k} labels, got {}", a.len()));
    }
    if a[0] < 1 || a.windows(2).any(|w| w[0] >= w[1]) || *a.last().unwrap() > max {
        return invalid(format!("{tag}: labels must be strictly increasing within 1..={max}"));
    }
    Ok(())
}

/// Both sides of a named identity: `left` is the region count on the left,
/// `right` the predicted factor times the product of the right-hand counts.
pub fn verify_identity(tag: &str, p: &IdentityParams) -> Result<IdentityReport> {
    let (k, n, a) = (p.k, p.n, p.a.as_slice());
    let k64 = k as i64;
    let (left, factor, right_specs): (Rational, Rational, Vec<RegionSpec>) = match tag {
        "lem2-eq5" | "lem2-eq6" | "lem2-eq7" | "lem2-eq8" | "lem3-eq1" | "lem3-eq2" => {
            check_params(tag, p, n)?;
            let (fam_l, m_l, fam_r, m_r, f) = match tag {
                "lem2-eq5" => (Quarter::RE, 2 * k - 1, Quarter::RE, 2 * k, int(1)),
                "lem2-eq6" => (Quarter::RO, 2 * k, Quarter::RO, 2 * k + 1, int(1)),
                "lem2-eq7" => (Quarter::TE, 2 * k, Quarter::TE, 2 * k + 1, int(1)),
                "lem2-eq8" => (Quarter::TO, 2 * k - 1, Quarter::TO, 2 * k, int(1)),
                "lem3-eq1" => (Quarter::RE, 2 * k - 1, Quarter::TO, 2 * k - 1, pow2(k64)),
                _ => (Quarter::RO, 2 * k, Quarter::TE, 2 * k, pow2(k64)),
            };
            (count_spec(&quarter(fam_l, m_l, n, a))?, f, vec![quarter(fam_r, m_r, n, a)])
        }
        "fn1" | "fn2" | "fn3" | "fn4" | "lem11-QHex4" => {
            let max = if matches!(tag, "fn1" | "fn2" | "lem11-QHex4") { n - 1 } else { n };
            check_params(tag, p, max)?;
            let (fam_l, m_l, fam_r, m_r, f) = match tag {
                "fn1" => (Quarter::BarRO, 2 * k - 1, Quarter::BarRO, 2 * k, int(1)),
                "fn2" => (Quarter::BarRE, 2 * k, Quarter::BarRE, 2 * k + 1, int(1)),
                "fn3" => (Quarter::BarTO, 2 * k + 1, Quarter::BarTO, 2 * k + 2, int(1)),
                "fn4" => (Quarter::BarTE, 2 * k, Quarter::BarTE, 2 * k + 1, int(1)),
                _ => (Quarter::BarRE, 2 * k, Quarter::BarTE, 2 * k, pow2(k64)),
            };
            (count_spec(&quarter(fam_l, m_l, n, a))?, f, vec![quarter(fam_r, m_r, n, a)])
        }
        "lem11-eq3" => {
            check_params(tag, p, n)?;
            let l = count_spec(&quarter(Quarter::TO, 2 * k - 1, n, a))?;
            (l, pow2(k64 * (k64 - 1)), vec![RegionSpec::QH { m: 2 * k - 1, n, a: a.to_vec() }])
        }
        "lem11-QHex3" => {
            check_params(tag, p, n)?;
            let l = count_spec(&quarter(Quarter::BarTE, 2 * k, n, a))?;
            (l, pow2(k64 * k64), vec![RegionSpec::QH { m: 2 * k, n, a: a.to_vec() }])
        }
        "qhfactor1" | "qhfactor2" | "factoreq2" | "factorn1" | "factorn2" => {
            let f = factorization(tag, p)?;
            (count_spec(&f.whole)?, pow2(k64), f.parts.to_vec())
        }
        "lem10a" | "lem10b" => return verify_gluing(tag, p),
        _ => return invalid(format!("unknown identity {tag:?}; known: {}", IDENTITY_TAGS.join(", "))),
    };
    let mut right = factor.clone();
    for s in &right_specs {
        right *= count_spec(s)?;
    }
    Ok(IdentityReport {
        tag: tag.to_string(),
        params: p.clone(),
        pass: left == right,
        left: fmt_rational(&left),
        right: fmt_rational(&right),
        factor: fmt_rational(&factor),
    })
}

pub const FACTORIZATION_TAGS: [&str; 5] = ["factoreq2", "factorn1", "factorn2", "qhfactor1", "qhfactor2"];

/// A mirror-symmetric region, its vertical axis in dual-graph coordinates,
/// and the regions its left and right halves reduce to after forced edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub whole: RegionSpec,
    pub axis: Rational,
    pub parts: [RegionSpec; 2],
}

/// `{lo - a_i}`, then `lo` itself when `middle`, then `{hi + a_i}`.
fn mirrored(a: &[u32], lo: u32, middle: bool, hi: u32) -> Vec<u32> {
    let mut s: Vec<u32> = a.iter().rev().map(|&x| lo - x).collect();
    if middle {
        s.push(lo);
    }
    s.extend(a.iter().map(|&x| hi + x));
    s
}

pub fn factorization(tag: &str, p: &IdentityParams) -> Result<Factorization> {
    let (k, n, a) = (p.k, p.n, p.a.as_slice());
    let max = if tag == "factorn1" { n - 1 } else { n };
    check_params(tag, p, max)?;
    let f = match tag {
        "factoreq2" => Factorization {
            whole: RegionSpec::HoleyAR { m: 2 * k, n: 2 * n, a: mirrored(a, n + 1, false, n) },
            axis: int(2 * n as i64 + 1),
            parts: [quarter(Quarter::RE, 2 * k, n, a), quarter(Quarter::RO, 2 * k, n, a)],
        },
        "factorn1" => Factorization {
            whole: RegionSpec::HoleyAR { m: 2 * k, n: 2 * n - 1, a: mirrored(a, n, false, n) },
            axis: int(2 * n as i64),
            parts: [quarter(Quarter::BarRE, 2 * k, n, a), quarter(Quarter::BarRO, 2 * k - 1, n, a)],
        },
        "factorn2" => Factorization {
            whole: RegionSpec::HoleyARBar { m: 2 * k + 1, n: 2 * n, a: mirrored(a, n + 1, true, n + 1) },
            axis: int(2 * n as i64 + 1),
            parts: [quarter(Quarter::BarTE, 2 * k, n, a), quarter(Quarter::BarTO, 2 * k + 1, n, a)],
        },
        "qhfactor1" => Factorization {
            whole: RegionSpec::SemiHexagon { a: 2 * k, b: 2 * n - 2 * k, s: mirrored(a, n + 1, false, n) },
            axis: int(3 * (2 * n - 2 * k) as i64),
            parts: [RegionSpec::QH { m: 2 * k - 1, n, a: a.to_vec() }, RegionSpec::BarQH { m: 2 * k, n, a: a.to_vec() }],
        },
        "qhfactor2" => Factorization {
            whole: RegionSpec::SemiHexagon { a: 2 * k + 1, b: 2 * n - 2 * k, s: mirrored(a, n + 1, true, n + 1) },
            axis: int(3 * (2 * n - 2 * k) as i64),
            parts: [RegionSpec::QH { m: 2 * k, n, a: a.to_vec() }, RegionSpec::BarQH { m: 2 * k + 1, n, a: a.to_vec() }],
        },
        _ => return invalid(format!("{tag:?} is not a factorization identity")),
    };
    Ok(f)
}

/// Gadget graph on square cells plus optional pendant vertices below the
/// bottom row; returns the graph and the gluing vertices left to right.
fn gadget(cells: std::collections::BTreeSet<Cell>, pendants: bool) -> (MatchGraph, Vec<usize>) {
    let bottom = cells
        .iter()
        .filter_map(|c| match c {
            Cell::Square { row, .. } => Some(*row),
            _ => None,
        })
        .min()
        .unwrap_or(1);
    let region = crate::regions::Region {
        spec: RegionSpec::AztecDiamond { n: 1 },
        cells,
        weights: Default::default(),
        sides: Default::default(),
    };
    let mut g = dual_graph(&region);
    let cells: Vec<Cell> = region.cells.iter().copied().collect();
    let mut glue: Vec<usize> =
        (0..cells.len()).filter(|&i| matches!(cells[i], Cell::Square { row, .. } if row == bottom)).collect();
    glue.sort_by(|&i, &j| g.vertex(i).x.cmp(&g.vertex(j).x));
    if pendants {
        glue = glue
            .into_iter()
            .map(|i| {
                let v = g.vertex(i).clone();
                let p = g.add_vertex(v.x.clone(), &v.y - int(1), v.color.flip());
                g.add_edge(i, p, int(1)).unwrap();
                p
            })
            .collect();
    }
    (g, glue)
}

fn square_block(m: u32, n: u32, trimmed: bool) -> std::collections::BTreeSet<Cell> {
    let spec = if trimmed {
        RegionSpec::TrimmedAztecRectangle { m, n }
    } else {
        RegionSpec::AztecRectangle { m, n }
    };
    build_region(&spec).expect("valid rectangle").cells
}

/// Removes the leftmost cells (even rows, column 1) whose bottom-up label has
/// the given parity (`1` odd, `0` even), and optionally the whole bottom row.
fn trim_left(mut cells: std::collections::BTreeSet<Cell>, parity: u32, drop_bottom: bool) -> std::collections::BTreeSet<Cell> {
    if drop_bottom {
        cells.retain(|c| !matches!(c, Cell::Square { row: 1, .. }));
    }
    let left: Vec<Cell> = cells.iter().copied().filter(|c| matches!(c, Cell::Square { col: 1, row } if row % 2 == 0)).collect();
    for (i, c) in left.iter().enumerate() {
        if (i as u32 + 1) % 2 == parity {
            cells.remove(c);
        }
    }
    cells
}

/// The two gadgets of a transformation step with ratio `2^q`:
/// part `a` glues along the top edge of a host, part `b` along its bottom.
pub fn transform_gadgets(part: char, q: u32, n: u32) -> Result<[(MatchGraph, Vec<usize>); 2]> {
    if q < 1 || n < 1 {
        return invalid("gadgets need q >= 1 and n >= 1");
    }
    Ok(match part {
        'a' => [
            gadget(trim_left(square_block(2 * q + 1, n + 1, true), 1, true), false),
            gadget(trim_left(square_block(2 * q, n, false), 1, true), true),
        ],
        'b' => [
            gadget(trim_left(square_block(2 * q + 1, n, false), 1, false), false),
            gadget(trim_left(square_block(2 * q + 1, n, true), 0, false), true),
        ],
        _ => return invalid(format!("unknown transformation part {part:?}")),
    })
}

/// Random bipartite host with `n` white gluing vertices listed first and
/// `surplus` more black than white vertices.
pub fn random_host(n: u32, surplus: i64, rng: &mut impl Rng) -> MatchGraph {
    let mut g = MatchGraph::new();
    let whites = (n as i64 + rng.gen_range(0..=2i64)).max(-surplus) as usize;
    let blacks = (whites as i64 + surplus) as usize;
    for i in 0..whites {
        g.add_vertex(int(i as i64), int(0), Color::White);
    }
    for i in 0..blacks {
        g.add_vertex(int(i as i64), int(1), Color::Black);
    }
    for w in 0..whites {
        for b in 0..blacks {
            if rng.gen_bool(0.5) {
                let wt = rat(rng.gen_range(1..=3), 1 << rng.gen_range(0..=1));
                g.add_edge(w, whites + b, wt).unwrap();
            }
        }
    }
    g
}

/// White minus black vertices a gadget adds beside its gluing vertices,
/// with colours oriented so the gluing vertices are white.
fn gadget_surplus(g: &MatchGraph, glue: &[usize]) -> i64 {
    let (black, white) = g.color_counts();
    let (mut b, mut w) = (black as i64, white as i64);
    if glue.first().is_some_and(|&v| g.vertex(v).color == Color::Black) {
        std::mem::swap(&mut b, &mut w);
    }
    w - glue.len() as i64 - b
}

const GLUED_MAX_VERTICES: usize = 128;

fn verify_gluing(tag: &str, p: &IdentityParams) -> Result<IdentityReport> {
    let (q, n) = (p.k, p.n);
    let part = if tag == "lem10a" { 'a' } else { 'b' };
    let [(k1, g1), (k2, g2)] = transform_gadgets(part, q, n)?;
    let surplus = gadget_surplus(&k1, &g1);
    if surplus != gadget_surplus(&k2, &g2) {
        return invalid(format!("{tag}: gadgets have different color balance"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let host = random_host(n, surplus, &mut rng);
    let glue: Vec<usize> = (0..n as usize).collect();
    let left = count_brute_bounded(&connected_sum(&host, &glue, &k1, &g1)?, GLUED_MAX_VERTICES)?;
    let factor = pow2(q as i64);
    let right = &factor * count_brute_bounded(&connected_sum(&host, &glue, &k2, &g2)?, GLUED_MAX_VERTICES)?;
    Ok(IdentityReport {
        tag: tag.to_string(),
        params: p.clone(),
        pass: left == right,
        left: fmt_rational(&left),
        right: fmt_rational(&right),
        factor: fmt_rational(&factor),
    })
}

/// Strictly increasing `k`-subsets of `1..=max`, in lexicographic order.
pub fn label_lists(max: u32, k: usize) -> Vec<Vec<u32>> {
    fn go(start: u32, max: u32, k: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..=max {
            if (max - x + 1) as usize + cur.len() < k {
                break;
            }
            cur.push(x);
            go(x + 1, max, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, max, k, &mut Vec::new(), &mut out);
    out
}

/// Every spec with a closed form and at most `kmax` labels (or `2 kmax`
/// rows for the holey and semihexagon families) and size bound `nmax`.
pub fn sweep_specs(kmax: u32, nmax: u32) -> Vec<RegionSpec> {
    let mut out = Vec::new();
    for n in 1..=nmax {
        out.push(RegionSpec::AztecDiamond { n });
    }
    for family in [DiamondQuarter::R, DiamondQuarter::Ka, DiamondQuarter::Kna] {
        for order in 1..=(4 * kmax + 2).min(2 * nmax + 2) {
            out.push(RegionSpec::Diamond { family, order });
        }
    }
    for family in Quarter::ALL {
        for n in 2..=nmax {
            for m in 1..=2 * kmax + 2 {
                let k = family.label_count(m);
                if k < 1 || k > kmax as i64 {
                    continue;
                }
                for a in label_lists(family.max_label(n), k as usize) {
                    out.push(RegionSpec::Quartered { family, m, n, a });
                }
            }
        }
    }
    let mut push_valid = |s: RegionSpec| {
        if s.validate().is_ok() {
            out.push(s);
        }
    };
    for n in 2..=nmax {
        for m in 1..=2 * kmax + 1 {
            for k in [m.div_ceil(2), m / 2] {
                if k < 1 || k > kmax {
                    continue;
                }
                for a in label_lists(n, k as usize) {
                    if k == m.div_ceil(2) {
                        push_valid(RegionSpec::QH { m, n, a: a.clone() });
                    }
                    if k == m / 2 {
                        push_valid(RegionSpec::BarQH { m, n, a });
                    }
                }
            }
        }
    }
    for m in 1..=2 * kmax {
        for n in 1..=nmax {
            for a in label_lists(n + 1, m as usize) {
                push_valid(RegionSpec::HoleyAR { m, n, a: a.clone() });
                push_valid(RegionSpec::HoleyARBar { m, n, a });
            }
        }
    }
    for a in 1..=2 * kmax {
        for b in 1..=nmax.saturating_sub(a) {
            for s in label_lists(a + b, a as usize) {
                push_valid(RegionSpec::SemiHexagon { a, b, s });
            }
        }
    }
    out.retain(|s| s.validate().is_ok());
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepFailure {
    pub spec: String,
    pub formula: String,
    pub count: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub checked: usize,
    pub pass: bool,
    pub failures: Vec<SweepFailure>,
}

/// Compares `formula` with the graph count on every spec, in parallel;
/// failures are listed in input order.
pub fn verify_sweep(
    specs: &[RegionSpec],
    formula: impl Fn(&RegionSpec) -> Result<Rational> + Sync,
) -> Result<SweepReport> {
    use rayon::prelude::*;
    let results: Vec<Result<Option<SweepFailure>>> = specs
        .par_iter()
        .map(|s| {
            let f = formula(s)?;
            let c = count_spec(s)?;
            Ok((f != c).then(|| SweepFailure { spec: s.to_string(), formula: fmt_rational(&f), count: fmt_rational(&c) }))
        })
        .collect();
    let mut failures = Vec::new();
    for r in results {
        if let Some(f) = r? {
            failures.push(f);
        }
    }
    Ok(SweepReport { checked: specs.len(), pass: failures.is_empty(), failures })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KrattInstance {
    pub x: Vec<i64>,
    pub a: Vec<i64>,
    pub c: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KrattReport {
    pub instances: usize,
    pub nmax: usize,
    pub seed: u64,
    pub pass: bool,
    pub failures: Vec<KrattInstance>,
}

/// Seeded random instances with `1 <= n <= nmax` and entries in `[-20, 20]`.
pub fn krattenthaler_instances(count: usize, nmax: usize, seed: u64) -> Vec<KrattInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=nmax.max(1));
            let mut draw = |len: usize| (0..len).map(|_| rng.gen_range(-20..=20)).collect::<Vec<i64>>();
            let x = draw(n);
            let a = draw(n);
            let c = rng.gen_range(-20..=20);
            KrattInstance { x, a, c }
        })
        .collect()
}

pub fn check_krattenthaler_random(count: usize, nmax: usize, seed: u64) -> Result<KrattReport> {
    let mut failures = Vec::new();
    for inst in krattenthaler_instances(count, nmax, seed) {
        if !check_krattenthaler(&inst.x, &inst.a, inst.c)? {
            failures.push(inst);
        }
    }
    Ok(KrattReport { instances: count, nmax, seed, pass: failures.is_empty(), failures })
}
