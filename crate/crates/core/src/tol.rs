//! Numerical tolerances shared across the crate.

/// `|‖ψ‖² − 1|` allowed for a state to count as normalized.
pub const NORM: f64 = 1e-9;
/// Below this norm a vector is treated as zero.
pub const ZERO_VECTOR: f64 = 1e-12;
/// Max elementwise `|m − m†|`.
pub const HERMITIAN: f64 = 1e-9;
pub const TRACE: f64 = 1e-9;
/// Eigenvalues down to `-PSD` are clipped to zero.
pub const PSD: f64 = 1e-9;
/// Default relative cutoff for counting Schmidt coefficients.
pub const SCHMIDT_REL: f64 = 1e-10;
/// Residual threshold for translation eigenstates.
pub const EIGENSTATE: f64 = 1e-8;
/// Default tolerance for permutation (anti)symmetry checks.
pub const SYMMETRY: f64 = 1e-8;
/// Two unit factors are parallel when `|⟨φ_i|φ_j⟩| ≥ 1 − PARALLEL`.
pub const PARALLEL: f64 = 1e-9;
