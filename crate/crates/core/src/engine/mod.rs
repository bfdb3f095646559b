//! Discrete bilinear multipliers on periodic band-limited functions.
//!
//! Functions are trigonometric polynomials sampled on `N` points of one
//! period, so multiplier actions, projections and quadratures of products are
//! exact up to rounding.

mod analysis;
mod bilinear;
mod function;
mod probe;

pub use analysis::{
    carleson_hunt_maximal, frequency_project, grid_indices_in, holder_chain_check, lp_norm, mixed_norm,
    square_function_report, ExponentTriple, HolderReport, InnerNorm, PreparedTrial, ProofChain,
    SquareFunctionReport, EXPONENT_TOL,
};
pub use bilinear::{apply_bilinear, BilinearOperator};
pub use function::{integrate_product, product_grid, SampledFunction};
pub use probe::{norm_probe, probe_pair, trial_seed, Growth, ProbeConfig, ProbeReport, ProbeRow, TrialFamily};
