//! Numerical analysis of admissibility and zero-class admissibility for
//! diagonal C₀-semigroup observation systems.

// Negated float comparisons are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod carleson;
pub mod counterexample;
pub mod energy;
pub mod error;
pub mod numerics;
pub mod profile;
pub mod report;
pub mod sufficient;
pub mod system;
pub mod system_file;
pub mod weiss;

pub use carleson::{classify, sup_box_ratio, CarlesonBox, CarlesonClass, ClassifyOptions};
pub use counterexample::{
    assemble, basis_gram, block_energy, block_m_profile, blow_up_sequence, sharpness_profile,
    target_coefficients, AssembledCounterexample, CounterexampleBlock, NonBesselianBasis,
};
pub use energy::{admissibility_constant, gram_matrix, k_profile, KProfile, KVerdict};
pub use error::{Error, Result};
pub use numerics::GeometricGrid;
pub use report::{AnalysisReport, Table, VerdictEntry};
pub use sufficient::{
    analytic_alpha_bound, check_zwart_bound, sector_bound, spectrum_in_region, zwart_summability,
    GrowthFunction, SectorRegion, Summability,
};
pub use system::{
    direct_sum, heat_system, wave_system, Atom, DiagonalSystem, DirectSumSpec, PointMeasure,
    SpectralMode,
};
pub use weiss::{
    b2_constant, b2_profile, weiss_m, weiss_m_profile, MProfile, MVerdict, TauProfile, TauVerdict,
};
