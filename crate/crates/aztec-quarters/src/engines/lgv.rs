//! Lattice-path determinants for quartered hexagons.
//!
//! A lozenge tiling of `QH(2k-1, n)` corresponds to `k` nonintersecting paths
//! from `(a_i - 1, 0)` to `(j - 1, 2j - 2)`; for `QH(2k, n)` the endpoints are
//! `(j - 1, 2j - 1)`.

use num_bigint::BigInt;

use crate::error::{invalid, Result};
use crate::numeric::{binomial, det_exact, IntMatrix};
use crate::regions::RegionSpec;

pub fn lgv_matrix(spec: &RegionSpec) -> Result<IntMatrix> {
    let RegionSpec::QH { m, a, .. } = spec else {
        return invalid(format!("the path engine only handles QH regions, not {spec}"));
    };
    spec.validate()?;
    let k = a.len();
    let shift = if m % 2 == 1 { 2 } else { 1 };
    let mut entries = Vec::with_capacity(k * k);
    for &ai in a {
        for j in 1..=k as i64 {
            let ai = ai as i64;
            let e: BigInt = binomial(ai + j - shift, 2 * j - shift)?;
            entries.push(e);
        }
    }
    IntMatrix::new(k, k, entries)
}

pub fn count_lgv(spec: &RegionSpec) -> Result<BigInt> {
    det_exact(&lgv_matrix(spec)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qh(m: u32, n: u32, a: &[u32]) -> RegionSpec {
        RegionSpec::QH { m, n, a: a.to_vec() }
    }

    #[test]
    fn matrices() {
        assert_eq!(lgv_matrix(&qh(1, 3, &[2])).unwrap(), IntMatrix::from_rows(&[vec![1]]).unwrap());
        assert_eq!(
            lgv_matrix(&qh(3, 4, &[1, 3])).unwrap(),
            IntMatrix::from_rows(&[vec![1, 0], vec![1, 3]]).unwrap()
        );
        assert_eq!(lgv_matrix(&qh(2, 5, &[4])).unwrap(), IntMatrix::from_rows(&[vec![4]]).unwrap());
    }

    #[test]
    fn counts() {
        assert_eq!(count_lgv(&qh(3, 4, &[1, 3])).unwrap(), BigInt::from(3));
        assert_eq!(count_lgv(&qh(2, 5, &[4])).unwrap(), BigInt::from(4));
        assert!(count_lgv(&RegionSpec::AztecDiamond { n: 2 }).is_err());
    }
}
