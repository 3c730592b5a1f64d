//! Verifiers and reports built on the exact mechanisms.

pub mod bounds;
pub mod correlation;
pub mod impartiality;
pub mod montecarlo;
pub mod ratio;
pub mod sweep;
pub mod symmetry;
pub mod tightness;
pub mod ub_chain;

pub use bounds::{
    figure3_csv, mix_alpha_table, perm_alpha, prugd_alpha, rd_alpha, upper_bound, upper_bound_min, BoundRow,
    HighVertices,
};
pub use correlation::{verify_correlation_lemma, CorrelationReport};
pub use impartiality::{check_impartial, CheckMode, ImpartialityReport};
pub use montecarlo::{compare_frequencies, estimate_ratio, sample_counts, Estimate, SampleCounts};
pub use ratio::{ratio_of, RatioReport};
pub use sweep::{check_bounds, worst_case, BoundsReport, SweepReport};
pub use symmetry::{check_symmetric, symmetrize, SymmetryReport};
pub use tightness::{tightness_scan, TightnessReport};
pub use ub_chain::{verify_ub_chain, verify_ub_chain_with, UbChainReport};

pub(crate) fn serialize_display<T: std::fmt::Display, S: serde::Serializer>(x: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(x)
}
