//! Gromov hyperbolicity of Denjoy domains.
//!
//! [`classify`] decides hyperbolicity from the gap structure when a known
//! criterion applies, and otherwise says so. The remaining functions produce
//! numerical evidence: distances from fundamental geodesics to the real axis
//! ([`fundamental_scan`]), bigon widths ([`bigon_thinness`]), the finite-gap
//! constant `c0` ([`finite_gap_constant`]) and the probe points showing that
//! thin gaps break inner uniformity ([`inner_uniformity_probe`]). None of the
//! numbers is a certified hyperbolicity constant.

mod criteria;
mod probe;
mod scan;

pub use criteria::{classify, CriterionVerdict, Rule, TailAssumption, Verdict, Witness};
pub use probe::{circular_arc, inner_uniformity_probe, is_uniform_curve, ProbeReport, UniformityCheck};
pub use scan::{
    adjacent_gap_distance, bigon_thinness, finite_gap_constant, fundamental_scan, scan_indices, FiniteGapConstant,
    PairDistance, ScanReport, ScanRow, Subsequence, ThinnessReport, ThinnessSample, SCAN_SAMPLES,
};
