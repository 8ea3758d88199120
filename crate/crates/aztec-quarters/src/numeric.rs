//! Exact integer and rational arithmetic: binomials, powers of two and
//! fraction-free determinants.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{invalid, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Binomial coefficient with `binomial(n, k) = 0` outside `0..=n`.
pub fn binomial(n: i64, k: i64) -> Result<BigInt> {
    if n < 0 {
        return invalid(format!("binomial: n = {n} is negative"));
    }
    if k < 0 || k > n {
        return Ok(BigInt::zero());
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Ok(acc)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn pow2(e: i64) -> Rational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

/// Renders a rational as `p/q`, or `p` when the denominator is 1.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| crate::Error::Invalid(format!("not a rational: {s:?}")))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let q = parse_int(q)?;
            if q.is_zero() {
                return invalid(format!("zero denominator in {s:?}"));
            }
            Ok(Rational::new(parse_int(p)?, q))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return invalid(format!(
                "matrix of shape {rows}x{cols} needs {} entries, got {}",
                rows * cols,
                entries.len()
            ));
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return invalid("ragged matrix rows");
        }
        let entries = rows.iter().flatten().cloned().map(Into::into).collect();
        Ok(IntMatrix { rows: rows.len(), cols, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        self.entries.chunks(self.cols.max(1)).take(self.rows).map(<[BigInt]>::to_vec).collect()
    }
}

/// Determinant by Bareiss fraction-free elimination.
pub fn det_exact(m: &IntMatrix) -> Result<BigInt> {
    if m.rows != m.cols {
        return invalid(format!("determinant of non-square {}x{} matrix", m.rows, m.cols));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.to_rows();
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = !sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if sign { -d } else { d })
}

/// Determinant of a rational matrix, clearing denominators with their LCM.
pub fn det_rational(rows: &[Vec<Rational>]) -> Result<Rational> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return invalid("determinant of non-square rational matrix");
    }
    let l = rows
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let lr = Rational::from_integer(l.clone());
    let entries = rows
        .iter()
        .flatten()
        .map(|x| (x * &lr).to_integer())
        .collect();
    let d = det_exact(&IntMatrix::new(n, n, entries)?)?;
    Ok(Rational::new(d, num_traits::pow(l, n)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(0, 0).unwrap(), BigInt::one());
        assert_eq!(binomial(4, 2).unwrap(), BigInt::from(6));
        assert_eq!(binomial(2, 3).unwrap(), BigInt::zero());
        assert_eq!(binomial(5, -1).unwrap(), BigInt::zero());
        assert!(binomial(-1, 0).is_err());
    }

    #[test]
    fn small_determinants() {
        assert_eq!(det_exact(&m(&[vec![1]])).unwrap(), BigInt::from(1));
        assert_eq!(det_exact(&m(&[vec![1, 0], vec![0, 3]])).unwrap(), BigInt::from(3));
        assert_eq!(det_exact(&m(&[vec![1, 0], vec![1, 3]])).unwrap(), BigInt::from(3));
        assert_eq!(det_exact(&m(&[vec![0, 1], vec![1, 0]])).unwrap(), BigInt::from(-1));
        assert!(det_exact(&m(&[vec![1, 2, 3]])).is_err());
    }

    #[test]
    fn rational_det_clears_denominators() {
        let rows = vec![vec![rat(1, 2), rat(1, 3)], vec![rat(1, 4), rat(1, 5)]];
        assert_eq!(det_rational(&rows).unwrap(), rat(1, 10) - rat(1, 12));
    }

    #[test]
    fn powers_of_two() {
        assert_eq!(pow2(0), int(1));
        assert_eq!(pow2(3), int(8));
        assert_eq!(pow2(-2), rat(1, 4));
    }

    #[test]
    fn rational_text_round_trip() {
        assert_eq!(fmt_rational(&rat(6, 4)), "3/2");
        assert_eq!(fmt_rational(&rat(-4, 2)), "-2");
        assert_eq!(parse_rational(" 3/6 ").unwrap(), rat(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
