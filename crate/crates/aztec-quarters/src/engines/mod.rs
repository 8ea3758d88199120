//! Exact counting engines for matching generating functions.

pub mod brute;
pub mod kasteleyn;
pub mod lgv;

pub use brute::{count_brute, count_brute_bounded, first_matching, DEFAULT_MAX_VERTICES};
pub use kasteleyn::{check_signing, count_kasteleyn, kasteleyn_signing, KasteleynSigning};
pub use lgv::{count_lgv, lgv_matrix};
