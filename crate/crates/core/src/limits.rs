//! Resource guards.
//!
//! The pure-state guard defaults to 12 qubits worth of amplitudes and can be
//! raised or lowered with the `SYMSEP_MAX_QUBITS` environment variable.

use crate::error::{Error, Result};

pub const ENV_MAX_QUBITS: &str = "SYMSEP_MAX_QUBITS";
pub const DEFAULT_MAX_QUBITS: u32 = 12;
/// Largest `n` for which the `n!` permutation sums are enumerated.
pub const SYMMETRIZER_MAX_PARTIES: usize = 10;
/// Dense `dⁿ × dⁿ` operators are limited to `n·log₂d ≤ 14`.
pub const OPERATOR_MAX_QUBITS: f64 = 14.0;

pub fn max_state_qubits() -> u32 {
    std::env::var(ENV_MAX_QUBITS)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_QUBITS)
}

fn log2_dimension(dims: &[usize]) -> f64 {
    dims.iter().map(|&d| (d as f64).log2()).sum()
}

pub fn check_state_size(dims: &[usize]) -> Result<()> {
    let max = max_state_qubits();
    let q = log2_dimension(dims);
    if q > max as f64 + 1e-9 {
        return Err(Error::SizeGuard(format!(
            "state of dimension 2^{q:.2} exceeds the {max}-qubit guard ({ENV_MAX_QUBITS})"
        )));
    }
    Ok(())
}

pub fn check_operator_size(dims: &[usize]) -> Result<()> {
    let q = log2_dimension(dims);
    if q > OPERATOR_MAX_QUBITS + 1e-9 {
        return Err(Error::SizeGuard(format!(
            "dense operator on 2^{q:.2} dimensions exceeds n·log2(d) <= {OPERATOR_MAX_QUBITS}"
        )));
    }
    Ok(())
}

pub fn check_symmetrizer(n: usize) -> Result<()> {
    if n > SYMMETRIZER_MAX_PARTIES {
        return Err(Error::SizeGuard(format!(
            "{n}! permutations exceed the n <= {SYMMETRIZER_MAX_PARTIES} symmetrizer guard"
        )));
    }
    Ok(())
}
