//! Numerical toolkit for short multiplicative character sums modulo a prime:
//! Dirichlet characters and prefix tables, rough-number sieves, the
//! multiplicative-congruence collision count, complete 2r-th moments with
//! their Weil-type bound, and the Burgess-type bound shapes.

pub mod bounds;
pub mod chars;
pub mod congruence;
pub mod error;
pub mod moments;
pub mod sieve;
pub mod suite;

pub use bounds::{
    bound_value, derive_params, extremal_scan, holder_chain, holder_chain_with, least_nonresidue,
    nonresidue_max_gap, BoundReport, BoundVariant, BurgessParams, HolderChainReport, ScanResult,
};
pub use chars::{CharValue, Character, ComplexSum, PrefixTable, PrimeModulus};
pub use congruence::{CollisionDistribution, CollisionInstance, CongruenceReport};
pub use error::{Error, Result};
pub use moments::{moment_check, moment_sum, weil_bound, MomentReport, MomentValue};
pub use sieve::{mertens_v, Primorial, RoughSet, SpfTable};
