//! Matrix permanents and Gram matrices of product-state factors.
//!
//! For unit factors the Gram matrix `a_ij = ⟨φ_i|φ_j⟩` is Hermitian, PSD and
//! has unit diagonal, and its permanent satisfies `1 ≤ Perm(a) ≤ n!`. The
//! lower bound is attained for orthonormal factors and the upper bound when
//! all factors coincide up to phase.

use crate::error::{Error, Result};
use crate::permutation::{factorial, Permutation};
use crate::state::{hermitian_deviation, require_homogeneous, spectral_decompose, vec_inner, CMatrix, ProductState, C64};

/// Largest side accepted by [`permanent_ryser`].
pub const RYSER_MAX: usize = 24;
/// Largest side accepted by [`permanent_naive`].
pub const NAIVE_MAX: usize = 9;

const GRAM_HERMITIAN: f64 = 1e-12;
const GRAM_DIAGONAL: f64 = 1e-9;
const GRAM_PSD: f64 = 1e-9;
/// Imaginary part tolerated on the permanent of a Hermitian PSD matrix,
/// relative to `max(1, |perm|)`.
pub const PERM_IMAG: f64 = 1e-9;

/// Overlap matrix of unit vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    entries: CMatrix,
}

impl GramMatrix {
    pub fn new(entries: CMatrix) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::NotSquare(entries.nrows(), entries.ncols()));
        }
        let herm = hermitian_deviation(&entries);
        if herm > GRAM_HERMITIAN {
            return Err(Error::InvalidGram(format!("Hermitian deviation {herm:e}")));
        }
        for i in 0..entries.nrows() {
            let a = entries[(i, i)];
            if (a - C64::new(1.0, 0.0)).norm() > GRAM_DIAGONAL {
                return Err(Error::InvalidGram(format!("diagonal entry {i} is {a}")));
            }
        }
        let min = spectral_decompose(&entries)?
            .eigenvalues
            .last()
            .copied()
            .unwrap_or(0.0);
        if min < -GRAM_PSD {
            return Err(Error::InvalidGram(format!("eigenvalue {min:e} < 0")));
        }
        Ok(Self { entries })
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }
}

/// `a_ij = ⟨φ_i|φ_j⟩` for the factors of a product state.
pub fn gram_from_factors(phi: &ProductState) -> Result<GramMatrix> {
    require_homogeneous(&phi.dims())?;
    let n = phi.n_parties();
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let a = vec_inner(phi.factor(i), phi.factor(j));
            m[(i, j)] = a;
            m[(j, i)] = a.conj();
        }
        m[(i, i)] = C64::new(m[(i, i)].re, 0.0);
    }
    GramMatrix::new(m)
}

fn require_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare(m.nrows(), m.ncols()));
    }
    Ok(m.nrows())
}

/// Ryser's inclusion–exclusion formula with Gray-code subset updates,
/// `O(2ⁿ n)` operations.
///
/// `Perm(A) = (−1)ⁿ Σ_{S ⊆ cols} (−1)^{|S|} ∏_i Σ_{j∈S} a_ij`
pub fn permanent_ryser(m: &CMatrix) -> Result<C64> {
    let n = require_square(m)?;
    if n > RYSER_MAX {
        return Err(Error::SizeGuard(format!(
            "Ryser permanent limited to n <= {RYSER_MAX}, got {n}"
        )));
    }
    if n == 0 {
        return Ok(C64::new(1.0, 0.0));
    }
    let mut row_sums = vec![C64::new(0.0, 0.0); n];
    let mut total = C64::new(0.0, 0.0);
    let mut gray: u64 = 0;
    for k in 1u64..(1u64 << n) {
        let bit = k.trailing_zeros() as usize;
        gray ^= 1 << bit;
        if gray & (1 << bit) != 0 {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s += m[(i, bit)];
            }
        } else {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s -= m[(i, bit)];
            }
        }
        let prod: C64 = row_sums.iter().product();
        if gray.count_ones().is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(if n % 2 == 0 { total } else { -total })
}

/// Direct sum `Σ_σ ∏_i m[i, σ(i)]` over all permutations. Reference oracle.
pub fn permanent_naive(m: &CMatrix) -> Result<C64> {
    let n = require_square(m)?;
    if n > NAIVE_MAX {
        return Err(Error::SizeGuard(format!(
            "naive permanent limited to n <= {NAIVE_MAX}, got {n}"
        )));
    }
    Ok(Permutation::all(n)
        .map(|p| (0..n).map(|i| m[(i, p.apply(i))]).product::<C64>())
        .sum())
}

/// Permanent of a Gram matrix set against the bounds `1 ≤ Perm ≤ n!`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarcusReport {
    pub n: usize,
    pub perm: f64,
    /// `|Im Perm|` before the real part was taken.
    pub imag_residue: f64,
    pub lower_ok: bool,
    pub upper_ok: bool,
}

impl MarcusReport {
    /// Both bounds hold.
    pub fn holds(&self) -> bool {
        self.lower_ok && self.upper_ok
    }

    /// Attains `Perm = 1` (orthonormal factors).
    pub fn at_lower(&self) -> bool {
        (self.perm - 1.0).abs() <= 1e-9
    }

    /// Attains `Perm = n!` (parallel factors).
    pub fn at_upper(&self) -> bool {
        let nf = factorial(self.n);
        (self.perm - nf).abs() <= 1e-6 * nf
    }
}

pub fn marcus_bounds_check(g: &GramMatrix) -> Result<MarcusReport> {
    let n = g.n();
    let p = permanent_ryser(g.entries())?;
    let imag_residue = p.im.abs();
    if imag_residue > PERM_IMAG * p.norm().max(1.0) {
        return Err(Error::Numerical(format!(
            "permanent of a Hermitian PSD matrix has imaginary part {imag_residue:e}"
        )));
    }
    let perm = p.re;
    let nf = factorial(n);
    Ok(MarcusReport {
        n,
        perm,
        imag_residue,
        lower_ok: perm >= 1.0 - 1e-9,
        upper_ok: perm <= nf + 1e-6 * nf,
    })
}
