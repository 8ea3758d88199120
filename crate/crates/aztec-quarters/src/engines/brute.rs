//! Memoized branching over vertex subsets.

use std::collections::{HashMap, HashSet};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graphs::{Color, MatchGraph};
use crate::numeric::Rational;

pub const DEFAULT_MAX_VERTICES: usize = 40;
const HARD_LIMIT: usize = 128;

pub fn count_brute(g: &MatchGraph) -> Result<Rational> {
    count_brute_bounded(g, DEFAULT_MAX_VERTICES)
}

/// Matching generating function of `g`, refusing graphs above `bound` vertices.
pub fn count_brute_bounded(g: &MatchGraph, bound: usize) -> Result<Rational> {
    let bound = bound.min(HARD_LIMIT);
    if g.len() > bound {
        return Err(Error::TooLarge { vertices: g.len(), bound });
    }
    let mut s = Solver::new(g);
    Ok(s.count(full(g.len())))
}

/// Some perfect matching of `g` as index pairs, if one exists.
pub fn first_matching(g: &MatchGraph) -> Result<Option<Vec<(usize, usize)>>> {
    if g.len() > HARD_LIMIT {
        return Err(Error::TooLarge { vertices: g.len(), bound: HARD_LIMIT });
    }
    let s = Solver::new(g);
    let mut dead = HashSet::new();
    let mut out = Vec::new();
    Ok(s.find(full(g.len()), &mut dead, &mut out).then_some(out))
}

fn full(n: usize) -> u128 {
    if n == 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

struct Solver {
    nbr: Vec<u128>,
    weight: HashMap<(usize, usize), Rational>,
    black: u128,
    memo: HashMap<u128, Rational>,
}

impl Solver {
    fn new(g: &MatchGraph) -> Self {
        let mut nbr = vec![0u128; g.len()];
        let mut weight = HashMap::new();
        for (i, j, w) in g.edges() {
            nbr[i] |= 1 << j;
            nbr[j] |= 1 << i;
            weight.insert((i, j), w.clone());
            weight.insert((j, i), w.clone());
        }
        let black = (0..g.len())
            .filter(|&i| g.vertex(i).color == Color::Black)
            .fold(0u128, |m, i| m | 1 << i);
        Solver { nbr, weight, black, memo: HashMap::new() }
    }

    fn feasible(&self, mask: u128) -> bool {
        let n = mask.count_ones();
        n.is_multiple_of(2) && (mask & self.black).count_ones() * 2 == n
    }

    /// Vertex of least degree inside `mask`, with that degree.
    fn pivot(&self, mask: u128) -> (usize, u32) {
        let mut best = (0, u32::MAX);
        let mut m = mask;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            let d = (self.nbr[v] & mask).count_ones();
            if d < best.1 {
                best = (v, d);
                if d <= 1 {
                    break;
                }
            }
        }
        best
    }

    fn component(&self, v: usize, mask: u128) -> u128 {
        let mut comp = 1u128 << v;
        let mut frontier = comp;
        while frontier != 0 {
            let mut grown = 0;
            let mut f = frontier;
            while f != 0 {
                let u = f.trailing_zeros() as usize;
                f &= f - 1;
                grown |= self.nbr[u] & mask;
            }
            frontier = grown & !comp;
            comp |= grown;
        }
        comp
    }

    fn count(&mut self, mask: u128) -> Rational {
        if mask == 0 {
            return Rational::one();
        }
        if !self.feasible(mask) {
            return Rational::zero();
        }
        if let Some(r) = self.memo.get(&mask) {
            return r.clone();
        }
        let (v, d) = self.pivot(mask);
        let result = if d == 0 {
            Rational::zero()
        } else {
            let comp = self.component(v, mask);
            if comp != mask {
                let first = self.count(comp);
                if first.is_zero() {
                    first
                } else {
                    first * self.count(mask & !comp)
                }
            } else {
                let rest = mask & !(1u128 << v);
                let mut total = Rational::zero();
                let mut m = self.nbr[v] & mask;
                while m != 0 {
                    let u = m.trailing_zeros() as usize;
                    m &= m - 1;
                    let sub = self.count(rest & !(1u128 << u));
                    if !sub.is_zero() {
                        total += sub * &self.weight[&(v, u)];
                    }
                }
                total
            }
        };
        self.memo.insert(mask, result.clone());
        result
    }

    fn find(&self, mask: u128, dead: &mut HashSet<u128>, out: &mut Vec<(usize, usize)>) -> bool {
        if mask == 0 {
            return true;
        }
        if !self.feasible(mask) || dead.contains(&mask) {
            return false;
        }
        let (v, d) = self.pivot(mask);
        if d > 0 {
            let rest = mask & !(1u128 << v);
            let mut m = self.nbr[v] & mask;
            while m != 0 {
                let u = m.trailing_zeros() as usize;
                m &= m - 1;
                out.push((v.min(u), v.max(u)));
                if self.find(rest & !(1u128 << u), dead, out) {
                    return true;
                }
                out.pop();
            }
        }
        dead.insert(mask);
        false
    }
}
