//! Region families as finite sets of lattice cells.
//!
//! Square cells use the rotated dual grid of an Aztec rectangle `AR(m, n)`:
//! rows `1..=2m+1` counted bottom-up, odd rows holding `n` cells and even rows
//! `n + 1`. The cell in row `r`, column `c` sits at `x = 2c` on odd rows and
//! `x = 2c - 1` on even rows, so two cells are adjacent exactly when they lie in
//! consecutive rows and their `x` differ by one.
//!
//! Triangular cells live in semihexagon rows counted top-down. Row `r` of a
//! semihexagon with top side `b` holds `2(b + r) - 1` unit triangles, the odd
//! columns pointing up.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::{Map, Value};

use crate::error::{invalid, Error, Result};
use crate::numeric::{int, rat, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Orientation {
    Up,
    Down,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cell {
    Square { row: u32, col: u32 },
    Triangle { row: u32, col: u32, orientation: Orientation },
}

pub fn sq(row: u32, col: u32) -> Cell {
    Cell::Square { row, col }
}

/// Triangle by its 0-based index `j` inside a full semihexagon row.
pub fn tri(row: u32, j: u32) -> Cell {
    let orientation = if j.is_multiple_of(2) { Orientation::Up } else { Orientation::Down };
    Cell::Triangle { row, col: j + 1, orientation }
}

impl Cell {
    /// Exact planar position used for dual graphs.
    pub fn position(&self) -> (Rational, Rational) {
        match *self {
            Cell::Square { row, col } => {
                let x = if row % 2 == 1 { 2 * col as i64 } else { 2 * col as i64 - 1 };
                (int(x), int(row as i64))
            }
            Cell::Triangle { row, col, orientation } => {
                let j = col as i64 - 1;
                let r = row as i64;
                let dy = if orientation == Orientation::Up { 2 } else { 4 };
                (int(3 * j - 3 * (r - 1)), int(-6 * r + dy))
            }
        }
    }

    pub fn is_black(&self) -> bool {
        match *self {
            Cell::Square { row, .. } => row % 2 == 1,
            Cell::Triangle { orientation, .. } => orientation == Orientation::Down,
        }
    }

    /// Lattice neighbours, whether or not they belong to a given region.
    pub fn neighbors(&self) -> Vec<Cell> {
        match *self {
            Cell::Square { row, col } => {
                let cols = if row % 2 == 1 { [col, col + 1] } else { [col - 1, col] };
                let mut out = Vec::with_capacity(4);
                for r in [row - 1, row + 1] {
                    for c in cols {
                        if r >= 1 && c >= 1 {
                            out.push(sq(r, c));
                        }
                    }
                }
                out
            }
            Cell::Triangle { row, col, orientation } => {
                let j = col - 1;
                let mut out = vec![tri(row, j + 1)];
                if j > 0 {
                    out.push(tri(row, j - 1));
                }
                match orientation {
                    Orientation::Up => out.push(tri(row + 1, j + 1)),
                    Orientation::Down if row > 1 => out.push(tri(row - 1, j - 1)),
                    Orientation::Down => {}
                }
                out
            }
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Square { row, col } => write!(f, "sq({row},{col})"),
            Cell::Triangle { row, col, orientation } => {
                let o = if *orientation == Orientation::Up { "up" } else { "down" };
                write!(f, "tri({row},{col},{o})")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    SW,
    SE,
    NW,
    NE,
}

impl std::str::FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Side> {
        match s.to_ascii_uppercase().as_str() {
            "SW" => Ok(Side::SW),
            "SE" => Ok(Side::SE),
            "NW" => Ok(Side::NW),
            "NE" => Ok(Side::NE),
            _ => invalid(format!("unknown side {s:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub spec: RegionSpec,
    pub cells: BTreeSet<Cell>,
    /// Non-unit tile weights, keyed by ordered cell pair.
    pub weights: BTreeMap<(Cell, Cell), Rational>,
    pub sides: BTreeMap<Side, Vec<Cell>>,
}

impl Region {
    pub fn weight(&self, a: Cell, b: Cell) -> Rational {
        let key = if a <= b { (a, b) } else { (b, a) };
        self.weights.get(&key).cloned().unwrap_or_else(|| int(1))
    }

    /// Unordered adjacent pairs inside the region, each listed once.
    pub fn adjacent_pairs(&self) -> Vec<(Cell, Cell)> {
        let mut out = Vec::new();
        for &c in &self.cells {
            for d in c.neighbors() {
                if c < d && self.cells.contains(&d) {
                    out.push((c, d));
                }
            }
        }
        out
    }

    pub fn black_white(&self) -> (usize, usize) {
        let b = self.cells.iter().filter(|c| c.is_black()).count();
        (b, self.cells.len() - b)
    }
}

pub fn side_cells(region: &Region, side: Side) -> Result<Vec<Cell>> {
    region
        .sides
        .get(&side)
        .cloned()
        .ok_or_else(|| Error::Invalid(format!("side {side:?} is not defined for {}", region.spec)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quarter {
    RE,
    RO,
    TE,
    TO,
    BarRE,
    BarRO,
    BarTE,
    BarTO,
}

impl Quarter {
    pub const ALL: [Quarter; 8] = [
        Quarter::RE,
        Quarter::RO,
        Quarter::TE,
        Quarter::TO,
        Quarter::BarRE,
        Quarter::BarRO,
        Quarter::BarTE,
        Quarter::BarTO,
    ];

    /// Number of selected labels for a region with `m` rows of the given kind.
    pub fn label_count(self, m: u32) -> i64 {
        let m = m as i64;
        match self {
            Quarter::RE | Quarter::TO | Quarter::BarRO => (m + 1) / 2,
            Quarter::RO | Quarter::TE | Quarter::BarRE | Quarter::BarTE => m / 2,
            Quarter::BarTO => (m - 1) / 2,
        }
    }

    /// Largest admissible label for width `n`.
    pub fn max_label(self, n: u32) -> u32 {
        match self {
            Quarter::BarRE | Quarter::BarRO => n.saturating_sub(1),
            _ => n,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Quarter::RE => "RE",
            Quarter::RO => "RO",
            Quarter::TE => "TE",
            Quarter::TO => "TO",
            Quarter::BarRE => "BarRE",
            Quarter::BarRO => "BarRO",
            Quarter::BarTE => "BarTE",
            Quarter::BarTO => "BarTO",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DiamondQuarter {
    R,
    Ka,
    Kna,
}

impl DiamondQuarter {
    pub const ALL: [DiamondQuarter; 3] = [DiamondQuarter::R, DiamondQuarter::Ka, DiamondQuarter::Kna];

    pub fn tag(self) -> &'static str {
        match self {
            DiamondQuarter::R => "R",
            DiamondQuarter::Ka => "Ka",
            DiamondQuarter::Kna => "Kna",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RegionSpec {
    AztecDiamond { n: u32 },
    TrimmedAztecDiamond { n: u32 },
    AztecRectangle { m: u32, n: u32 },
    TrimmedAztecRectangle { m: u32, n: u32 },
    Quartered { family: Quarter, m: u32, n: u32, a: Vec<u32> },
    Diamond { family: DiamondQuarter, order: u32 },
    QH { m: u32, n: u32, a: Vec<u32> },
    BarQH { m: u32, n: u32, a: Vec<u32> },
    SemiHexagon { a: u32, b: u32, s: Vec<u32> },
    HoleyAR { m: u32, n: u32, a: Vec<u32> },
    HoleyARBar { m: u32, n: u32, a: Vec<u32> },
}

fn fmt_list(a: &[u32]) -> String {
    a.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for RegionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegionSpec::AztecDiamond { n } => write!(f, "AD(n={n})"),
            RegionSpec::TrimmedAztecDiamond { n } => write!(f, "TAD(n={n})"),
            RegionSpec::AztecRectangle { m, n } => write!(f, "AR(m={m},n={n})"),
            RegionSpec::TrimmedAztecRectangle { m, n } => write!(f, "TR(m={m},n={n})"),
            RegionSpec::Quartered { family, m, n, a } => {
                write!(f, "{}(m={m},n={n},a=[{}])", family.tag(), fmt_list(a))
            }
            RegionSpec::Diamond { family, order } => write!(f, "{}(order={order})", family.tag()),
            RegionSpec::QH { m, n, a } => write!(f, "QH(m={m},n={n},a=[{}])", fmt_list(a)),
            RegionSpec::BarQH { m, n, a } => write!(f, "BarQH(m={m},n={n},a=[{}])", fmt_list(a)),
            RegionSpec::SemiHexagon { a, b, s } => write!(f, "SH(a={a},b={b},s=[{}])", fmt_list(s)),
            RegionSpec::HoleyAR { m, n, a } => write!(f, "HoleyAR(m={m},n={n},a=[{}])", fmt_list(a)),
            RegionSpec::HoleyARBar { m, n, a } => {
                write!(f, "HoleyARBar(m={m},n={n},a=[{}])", fmt_list(a))
            }
        }
    }
}

fn check_labels(what: &str, a: &[u32], len: i64, max: u32) -> Result<()> {
    if len < 1 {
        return invalid(format!("{what}: label list must be nonempty (k = {len})"));
    }
    if a.len() as i64 != len {
        return invalid(format!("{what}: expected {len} labels, got {}", a.len()));
    }
    if a.windows(2).any(|w| w[0] >= w[1]) {
        return invalid(format!("{what}: labels must be strictly increasing"));
    }
    if a[0] < 1 {
        return invalid(format!("{what}: labels start at 1"));
    }
    if *a.last().unwrap() > max {
        return invalid(format!("{what}: largest label {} exceeds {max}", a.last().unwrap()));
    }
    Ok(())
}

impl RegionSpec {
    pub fn family_tag(&self) -> &'static str {
        match self {
            RegionSpec::AztecDiamond { .. } => "AD",
            RegionSpec::TrimmedAztecDiamond { .. } => "TAD",
            RegionSpec::AztecRectangle { .. } => "AR",
            RegionSpec::TrimmedAztecRectangle { .. } => "TR",
            RegionSpec::Quartered { family, .. } => family.tag(),
            RegionSpec::Diamond { family, .. } => family.tag(),
            RegionSpec::QH { .. } => "QH",
            RegionSpec::BarQH { .. } => "BarQH",
            RegionSpec::SemiHexagon { .. } => "SH",
            RegionSpec::HoleyAR { .. } => "HoleyAR",
            RegionSpec::HoleyARBar { .. } => "HoleyARBar",
        }
    }

    pub fn is_triangular(&self) -> bool {
        matches!(self, RegionSpec::QH { .. } | RegionSpec::BarQH { .. } | RegionSpec::SemiHexagon { .. })
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: u32| {
            if v == 0 {
                invalid(format!("{self}: {name} must be at least 1"))
            } else {
                Ok(())
            }
        };
        match self {
            RegionSpec::AztecDiamond { n } | RegionSpec::TrimmedAztecDiamond { n } => positive("n", *n),
            RegionSpec::AztecRectangle { m, n } | RegionSpec::TrimmedAztecRectangle { m, n } => {
                positive("m", *m)?;
                positive("n", *n)
            }
            RegionSpec::Quartered { family, m, n, a } => {
                positive("m", *m)?;
                let k = family.label_count(*m);
                check_labels(&self.to_string(), a, k, family.max_label(*n))?;
                if k >= *n as i64 {
                    return invalid(format!("{self}: requires 1 <= k < n, got k = {k}"));
                }
                Ok(())
            }
            RegionSpec::Diamond { order, .. } => positive("order", *order),
            RegionSpec::QH { m, n, a } => {
                positive("m", *m)?;
                let k = (*m as i64 + 1) / 2;
                check_labels(&self.to_string(), a, k, *n)?;
                if k >= *n as i64 {
                    return invalid(format!("{self}: requires 1 <= k < n, got k = {k}"));
                }
                Ok(())
            }
            RegionSpec::BarQH { m, n, a } => {
                let k = *m as i64 / 2;
                check_labels(&self.to_string(), a, k, *n)?;
                if k >= *n as i64 {
                    return invalid(format!("{self}: requires 1 <= k < n, got k = {k}"));
                }
                Ok(())
            }
            RegionSpec::SemiHexagon { a, b, s } => {
                positive("a", *a)?;
                check_labels(&self.to_string(), s, *a as i64, a + b)
            }
            RegionSpec::HoleyAR { m, n, a } => {
                positive("m", *m)?;
                check_labels(&self.to_string(), a, *m as i64, *n)
            }
            RegionSpec::HoleyARBar { m, n, a } => {
                positive("m", *m)?;
                check_labels(&self.to_string(), a, *m as i64, n + 1)
            }
        }
    }

    pub fn from_json_str(text: &str) -> Result<RegionSpec> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("region spec: {e}")))?;
        RegionSpec::from_json(&v)
    }

    /// Parses `{"family": TAG, "params": {...}}`; unknown fields are rejected.
    pub fn from_json(v: &Value) -> Result<RegionSpec> {
        let obj = v.as_object().ok_or_else(|| Error::Invalid("region spec must be a JSON object".into()))?;
        if let Some(k) = obj.keys().find(|k| *k != "family" && *k != "params") {
            return invalid(format!("region spec: unknown field {k:?}"));
        }
        let family = obj
            .get("family")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Invalid("region spec: missing string field \"family\"".into()))?;
        let empty = Map::new();
        let params = match obj.get("params") {
            Some(Value::Object(p)) => p,
            Some(_) => return invalid("region spec: \"params\" must be an object"),
            None => &empty,
        };
        let known = ["AD", "TAD", "AR", "TR", "R", "Ka", "Kna", "SH", "QH", "BarQH", "HoleyAR", "HoleyARBar"];
        if !known.contains(&family) && !Quarter::ALL.iter().any(|q| q.tag() == family) {
            return invalid(format!("unknown region family {family:?}"));
        }
        let p = Params(params);
        let spec = match family {
            "AD" => {
                p.only(&["n"])?;
                RegionSpec::AztecDiamond { n: p.int("n")? }
            }
            "TAD" => {
                p.only(&["n"])?;
                RegionSpec::TrimmedAztecDiamond { n: p.int("n")? }
            }
            "AR" | "TR" => {
                p.only(&["m", "n"])?;
                let (m, n) = (p.int("m")?, p.int("n")?);
                if family == "AR" {
                    RegionSpec::AztecRectangle { m, n }
                } else {
                    RegionSpec::TrimmedAztecRectangle { m, n }
                }
            }
            "R" | "Ka" | "Kna" => {
                p.only(&["order"])?;
                let fam = match family {
                    "R" => DiamondQuarter::R,
                    "Ka" => DiamondQuarter::Ka,
                    _ => DiamondQuarter::Kna,
                };
                RegionSpec::Diamond { family: fam, order: p.int("order")? }
            }
            "SH" => {
                p.only(&["a", "b", "s"])?;
                RegionSpec::SemiHexagon { a: p.int("a")?, b: p.int("b")?, s: p.list("s")? }
            }
            _ => {
                p.only(&["m", "n", "a"])?;
                let (m, n, a) = (p.int("m")?, p.int("n")?, p.list("a")?);
                match family {
                    "QH" => RegionSpec::QH { m, n, a },
                    "BarQH" => RegionSpec::BarQH { m, n, a },
                    "HoleyAR" => RegionSpec::HoleyAR { m, n, a },
                    "HoleyARBar" => RegionSpec::HoleyARBar { m, n, a },
                    _ => {
                        let q = Quarter::ALL
                            .into_iter()
                            .find(|q| q.tag() == family)
                            .ok_or_else(|| Error::Invalid(format!("unknown region family {family:?}")))?;
                        RegionSpec::Quartered { family: q, m, n, a }
                    }
                }
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> Value {
        let mut p = Map::new();
        let list = |a: &[u32]| Value::from(a.to_vec());
        match self {
            RegionSpec::AztecDiamond { n } | RegionSpec::TrimmedAztecDiamond { n } => {
                p.insert("n".into(), (*n).into());
            }
            RegionSpec::AztecRectangle { m, n } | RegionSpec::TrimmedAztecRectangle { m, n } => {
                p.insert("m".into(), (*m).into());
                p.insert("n".into(), (*n).into());
            }
            RegionSpec::Diamond { order, .. } => {
                p.insert("order".into(), (*order).into());
            }
            RegionSpec::SemiHexagon { a, b, s } => {
                p.insert("a".into(), (*a).into());
                p.insert("b".into(), (*b).into());
                p.insert("s".into(), list(s));
            }
            RegionSpec::Quartered { m, n, a, .. }
            | RegionSpec::QH { m, n, a }
            | RegionSpec::BarQH { m, n, a }
            | RegionSpec::HoleyAR { m, n, a }
            | RegionSpec::HoleyARBar { m, n, a } => {
                p.insert("m".into(), (*m).into());
                p.insert("n".into(), (*n).into());
                p.insert("a".into(), list(a));
            }
        }
        let mut o = Map::new();
        o.insert("family".into(), self.family_tag().into());
        o.insert("params".into(), Value::Object(p));
        Value::Object(o)
    }
}

struct Params<'a>(&'a Map<String, Value>);

impl Params<'_> {
    fn only(&self, allowed: &[&str]) -> Result<()> {
        match self.0.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => invalid(format!("region spec: unknown parameter {k:?} (expected {allowed:?})")),
            None => Ok(()),
        }
    }

    fn int(&self, key: &str) -> Result<u32> {
        self.0
            .get(key)
            .and_then(Value::as_u64)
            .and_then(|v| u32::try_from(v).ok())
            .ok_or_else(|| Error::Invalid(format!("region spec: parameter {key:?} must be a nonnegative integer")))
    }

    fn list(&self, key: &str) -> Result<Vec<u32>> {
        let arr = self
            .0
            .get(key)
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Invalid(format!("region spec: parameter {key:?} must be an integer array")))?;
        arr.iter()
            .map(|v| {
                v.as_u64()
                    .and_then(|x| u32::try_from(x).ok())
                    .ok_or_else(|| Error::Invalid(format!("region spec: {key:?} entries must be nonnegative integers")))
            })
            .collect()
    }
}

type Cells = BTreeSet<Cell>;

fn aztec_rectangle(m: u32, n: u32) -> Cells {
    let mut cells = Cells::new();
    for r in 1..=2 * m + 1 {
        let width = if r % 2 == 1 { n } else { n + 1 };
        cells.extend((1..=width).map(|c| sq(r, c)));
    }
    cells
}

fn se_side(n: u32) -> Vec<Cell> {
    (1..=n).map(|c| sq(1, c)).collect()
}

fn sw_side(m: u32) -> Vec<Cell> {
    (1..=m).map(|i| sq(2 * i, 1)).collect()
}

fn nw_side(m: u32, n: u32) -> Vec<Cell> {
    (1..=n).map(|c| sq(2 * m + 1, c)).collect()
}

fn ne_side(m: u32, n: u32) -> Vec<Cell> {
    (1..=m).map(|i| sq(2 * i, n + 1)).collect()
}

fn trimmed_rectangle(m: u32, n: u32) -> Cells {
    let mut cells = aztec_rectangle(m, n);
    for c in nw_side(m, n).into_iter().chain(ne_side(m, n)) {
        cells.remove(&c);
    }
    cells
}

/// Removes the cells of `side` whose 1-based label satisfies `pred`.
fn remove_labels(cells: &mut Cells, side: &[Cell], pred: impl Fn(u32) -> bool) {
    for (i, c) in side.iter().enumerate() {
        if pred(i as u32 + 1) {
            cells.remove(c);
        }
    }
}

fn even(i: u32) -> bool {
    i.is_multiple_of(2)
}

fn odd(i: u32) -> bool {
    i % 2 == 1
}

/// `AR(m, n)` without its SW side and bottommost cell, with the new sides.
fn bar_r_base(m: u32, n: u32) -> (Cells, Vec<Cell>, Vec<Cell>) {
    let mut cells = aztec_rectangle(m, n);
    for c in sw_side(m) {
        cells.remove(&c);
    }
    cells.remove(&sq(1, 1));
    let sw = (1..=m).map(|i| sq(2 * i + 1, 1)).collect();
    let se = (2..=n).map(|c| sq(1, c)).collect();
    (cells, sw, se)
}

/// `AR(m, n)` without its SE side and bottom SW cell, with the new sides.
fn bar_t_base(m: u32, n: u32) -> (Cells, Vec<Cell>, Vec<Cell>) {
    let mut cells = aztec_rectangle(m, n);
    for c in se_side(n) {
        cells.remove(&c);
    }
    cells.remove(&sq(2, 1));
    let sw = (2..=m).map(|i| sq(2 * i, 1)).collect();
    let se = (1..=n).map(|c| sq(2, c + 1)).collect();
    (cells, sw, se)
}

fn quartered(family: Quarter, m: u32, n: u32, a: &[u32]) -> Cells {
    let keep = |i: u32| !a.contains(&i);
    let drop = |i: u32| a.contains(&i);
    match family {
        Quarter::RE | Quarter::RO | Quarter::TE | Quarter::TO => {
            let mut cells = match family {
                Quarter::RE | Quarter::RO => aztec_rectangle(m, n),
                _ => trimmed_rectangle(m, n),
            };
            let sw = sw_side(m);
            let se = se_side(n);
            match family {
                Quarter::RE => {
                    remove_labels(&mut cells, &sw, even);
                    remove_labels(&mut cells, &se, keep);
                }
                Quarter::RO => {
                    remove_labels(&mut cells, &sw, odd);
                    remove_labels(&mut cells, &se, keep);
                }
                Quarter::TE => {
                    remove_labels(&mut cells, &sw, even);
                    remove_labels(&mut cells, &se, drop);
                }
                _ => {
                    remove_labels(&mut cells, &sw, odd);
                    remove_labels(&mut cells, &se, drop);
                }
            }
            cells
        }
        Quarter::BarRE | Quarter::BarRO => {
            let (mut cells, sw, se) = bar_r_base(m, n);
            remove_labels(&mut cells, &sw, if family == Quarter::BarRE { even } else { odd });
            remove_labels(&mut cells, &se, keep);
            cells
        }
        Quarter::BarTE | Quarter::BarTO => {
            let (mut cells, sw, se) = bar_t_base(m, n);
            remove_labels(&mut cells, &sw, if family == Quarter::BarTE { even } else { odd });
            remove_labels(&mut cells, &se, drop);
            cells
        }
    }
}

fn diamond_quarter(family: DiamondQuarter, order: u32) -> Cells {
    let k = order.div_ceil(2);
    let mut cells = if order.is_multiple_of(2) { aztec_rectangle(k, k) } else { trimmed_rectangle(k, k) };
    let (sw, se) = (sw_side(k), se_side(k));
    let (p_sw, p_se): (fn(u32) -> bool, fn(u32) -> bool) = match family {
        DiamondQuarter::R => (odd, even),
        DiamondQuarter::Ka => (even, even),
        DiamondQuarter::Kna => (odd, odd),
    };
    remove_labels(&mut cells, &sw, p_sw);
    remove_labels(&mut cells, &se, p_se);
    cells
}

fn semihexagon_cells(rows: u32, b: u32) -> Cells {
    let mut cells = Cells::new();
    for r in 1..=rows {
        cells.extend((0..2 * (b + r) - 1).map(|j| tri(r, j)));
    }
    cells
}

/// Up-pointing triangles of the bottom row `r`, left to right.
fn bottom_ups(cells: &Cells, r: u32) -> Vec<Cell> {
    cells
        .iter()
        .copied()
        .filter(|c| matches!(c, Cell::Triangle { row, orientation: Orientation::Up, .. } if *row == r))
        .collect()
}

/// Right half of the top `m` rows of the hexagon with top side `b`,
/// keeping only triangles strictly right of the vertical axis.
fn hexagon_quarter(m: u32, b: u32) -> Cells {
    let mut cells = Cells::new();
    for r in 1..=m {
        let mid = b + r - 1;
        cells.extend((mid + 1..2 * (b + r) - 1).map(|j| tri(r, j)));
    }
    cells
}

/// Pairs forming the weight-1/2 vertical rhombi along the left edge of a quarter.
fn left_rhombi(m: u32, b: u32) -> Vec<(Cell, Cell)> {
    (1..=m / 2)
        .map(|i| {
            let r = 2 * i;
            let mid = b + r - 1;
            (tri(r - 1, mid), tri(r, mid + 1))
        })
        .collect()
}

fn ordered(a: Cell, b: Cell) -> (Cell, Cell) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn with_sides(m: u32, n: u32, full: bool, sides: &mut BTreeMap<Side, Vec<Cell>>) -> Cells {
    sides.insert(Side::SW, sw_side(m));
    sides.insert(Side::SE, se_side(n));
    if full {
        sides.insert(Side::NW, nw_side(m, n));
        sides.insert(Side::NE, ne_side(m, n));
        aztec_rectangle(m, n)
    } else {
        trimmed_rectangle(m, n)
    }
}

pub fn build_region(spec: &RegionSpec) -> Result<Region> {
    spec.validate()?;
    let mut sides = BTreeMap::new();
    let mut weights = BTreeMap::new();
    let cells = match spec {
        RegionSpec::AztecDiamond { n } => with_sides(*n, *n, true, &mut sides),
        RegionSpec::AztecRectangle { m, n } => with_sides(*m, *n, true, &mut sides),
        RegionSpec::TrimmedAztecDiamond { n } => with_sides(*n, *n, false, &mut sides),
        RegionSpec::TrimmedAztecRectangle { m, n } => with_sides(*m, *n, false, &mut sides),
        RegionSpec::Quartered { family, m, n, a } => quartered(*family, *m, *n, a),
        RegionSpec::Diamond { family, order } => diamond_quarter(*family, *order),
        RegionSpec::QH { m, n, a } => {
            let k = m.div_ceil(2);
            let mut cells = hexagon_quarter(*m, 2 * (n - k) + 1);
            let ups = bottom_ups(&cells, *m);
            debug_assert_eq!(ups.len(), *n as usize);
            for &i in a {
                cells.remove(&ups[i as usize - 1]);
            }
            cells
        }
        RegionSpec::BarQH { m, n, a } => {
            let k = m / 2;
            let b = 2 * (n - k) + 1;
            let mut cells = hexagon_quarter(*m, b);
            for (p, q) in left_rhombi(*m, b) {
                weights.insert(ordered(p, q), rat(1, 2));
            }
            let mut ups = bottom_ups(&cells, *m);
            if m % 2 == 1 {
                cells.remove(&ups[0]);
                ups.remove(0);
            }
            debug_assert_eq!(ups.len(), *n as usize);
            for &i in a {
                cells.remove(&ups[i as usize - 1]);
            }
            cells
        }
        RegionSpec::SemiHexagon { a, b, s } => {
            let mut cells = semihexagon_cells(*a, *b);
            let ups = bottom_ups(&cells, *a);
            for &i in s {
                cells.remove(&ups[i as usize - 1]);
            }
            cells
        }
        RegionSpec::HoleyAR { m, n, a } => {
            let mut cells = aztec_rectangle(*m, *n);
            remove_labels(&mut cells, &se_side(*n), |i| !a.contains(&i));
            cells
        }
        RegionSpec::HoleyARBar { m, n, a } => {
            let mut cells = aztec_rectangle(*m, *n);
            for c in se_side(*n) {
                cells.remove(&c);
            }
            for &i in a {
                cells.remove(&sq(2, i));
            }
            cells
        }
    };
    Ok(Region { spec: spec.clone(), cells, weights, sides })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(spec: RegionSpec) -> Region {
        build_region(&spec).unwrap()
    }

    #[test]
    fn diamond_cell_counts() {
        for n in 1..=6 {
            assert_eq!(build(RegionSpec::AztecDiamond { n }).cells.len(), (2 * n * (n + 1)) as usize);
        }
        assert_eq!(build(RegionSpec::TrimmedAztecDiamond { n: 2 }).cells.len(), 8);
    }

    #[test]
    fn rectangle_matches_diamond_on_square_shape() {
        for n in 1..=4 {
            assert_eq!(
                build(RegionSpec::AztecDiamond { n }).cells,
                build(RegionSpec::AztecRectangle { m: n, n }).cells
            );
        }
    }

    #[test]
    fn sides_have_expected_lengths() {
        let ad = build(RegionSpec::AztecDiamond { n: 3 });
        let sw = side_cells(&ad, Side::SW).unwrap();
        assert_eq!(sw, vec![sq(2, 1), sq(4, 1), sq(6, 1)]);
        let ar = build(RegionSpec::AztecRectangle { m: 3, n: 5 });
        assert_eq!(side_cells(&ar, Side::SE).unwrap().len(), 5);
        assert_eq!(side_cells(&ar, Side::SW).unwrap().len(), 3);
        let re = build(RegionSpec::Quartered { family: Quarter::RE, m: 3, n: 4, a: vec![1, 3] });
        assert!(side_cells(&re, Side::SW).is_err());
    }

    #[test]
    fn label_count_mismatch_is_rejected() {
        let bad = RegionSpec::Quartered { family: Quarter::RE, m: 3, n: 4, a: vec![1] };
        let msg = build_region(&bad).unwrap_err().to_string();
        assert!(msg.contains("expected 2 labels"), "{msg}");
        let bad = RegionSpec::Quartered { family: Quarter::RO, m: 4, n: 2, a: vec![1, 2] };
        assert!(build_region(&bad).unwrap_err().to_string().contains("k < n"));
        let bad = RegionSpec::QH { m: 3, n: 4, a: vec![3, 1] };
        assert!(build_region(&bad).is_err());
    }

    #[test]
    fn barred_hexagon_quarters_carry_half_weights() {
        for m in 2..=7 {
            let k = m / 2;
            let a: Vec<u32> = (1..=k).collect();
            let r = build(RegionSpec::BarQH { m, n: k + 1, a });
            assert_eq!(r.weights.len(), k as usize);
            assert!(r.weights.values().all(|w| *w == rat(1, 2)));
            for (p, q) in r.weights.keys() {
                assert!(r.cells.contains(p) && r.cells.contains(q));
                assert!(p.neighbors().contains(q));
            }
        }
    }

    #[test]
    fn json_round_trip_and_unknown_fields() {
        let spec = RegionSpec::Quartered { family: Quarter::TE, m: 4, n: 5, a: vec![2, 5] };
        let text = spec.to_json().to_string();
        assert_eq!(RegionSpec::from_json_str(&text).unwrap(), spec);
        assert!(RegionSpec::from_json_str(r#"{"family":"AD","params":{"n":2,"k":1}}"#).is_err());
        assert!(RegionSpec::from_json_str(r#"{"family":"AD","params":{"n":2},"x":0}"#).is_err());
        assert!(RegionSpec::from_json_str(r#"{"family":"ZZ","params":{"m":1,"n":2,"a":[1]}}"#).is_err());
    }
}
