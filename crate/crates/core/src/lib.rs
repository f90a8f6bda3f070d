//! Strong stationary duals of Möbius monotone Markov chains on finite posets.
//!
//! A chain whose time reversal is Möbius monotone (and whose initial law has
//! a Möbius monotone density with respect to the stationary law) admits an
//! absorbing dual chain on the same poset. The absorption time of the dual is
//! a strong stationary time for the original chain, and its survival function
//! equals the separation distance.

pub mod absorption;
pub mod chain;
pub mod duality;
pub mod error;
pub mod matrix;
pub mod models;
pub mod poset;
pub mod simulate;
pub mod spectrum;

/// Numerical tolerances shared across the crate.
pub mod tol {
    /// Row sums of generated kernels.
    pub const CONSTRUCTION: f64 = 1e-12;
    /// Stationarity, lumpability and row-sum checks after arithmetic.
    pub const STATIONARITY: f64 = 1e-10;
    /// Eigenvalues closer than this are merged into one multiplicity.
    pub const EIGEN_GROUP: f64 = 1e-7;
    /// Negative entries down to `-CLAMP` are rounding noise and set to zero.
    pub const CLAMP: f64 = 1e-9;
    /// Grouping of diagonal entries of a triangular dual.
    pub const TRIANGULAR_GROUP: f64 = 1e-9;
}

pub use absorption::{
    absorption_survival, chebyshev_bound, coupon_collector_bound, default_horizon,
    geometric_sum_law, pure_birth_projection, separation_curve, spectrum_from_triangular,
    AbsorptionLaw, BirthChain, SeparationCurve, StepBound,
};
pub use chain::{
    detailed_balance_residual, evolve, is_reversible, spectrum_numeric, stationary, time_reversal,
    validate, ChainSpec, ValidationReport,
};
pub use duality::{
    build_dual, build_link, check_g_monotone, check_g_monotone_direction, check_mobius_monotone,
    g_function, verify_intertwining, verify_sharpness, Direction, DualChain, IntertwiningResidual,
    LinkKernel, MonotonicityReport,
};
pub use error::{Error, MonotonicityKind, Result};
pub use matrix::Matrix;
pub use poset::{
    grid_poset, max_states, mobius_inverse_check, mobius_pair, product_poset, MobiusPair, Poset,
};
pub use simulate::{simulate_absorption_times, simulate_sst, SimulationConfig};
pub use spectrum::{Eigenvalue, SpectrumReport, SpectrumSource};
