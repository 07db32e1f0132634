//! Dense multipartite states.
//!
//! Amplitudes are stored row-major with party 0 as the slowest-varying index:
//! the basis state `|p_0 p_1 … p_{n-1}⟩` lives at flat index
//! `((p_0·d_1 + p_1)·d_2 + …)`. For two qubits the order is
//! `|00⟩, |01⟩, |10⟩, |11⟩`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::permutation::Permutation;
use crate::tol;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

fn check_dims(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() {
        return Err(Error::InvalidDims("at least one party is required".into()));
    }
    if dims.len() == 1 {
        if dims[0] == 0 {
            return Err(Error::InvalidDims("local dimension must be positive".into()));
        }
    } else if let Some(d) = dims.iter().find(|&&d| d < 2) {
        return Err(Error::InvalidDims(format!(
            "local dimension {d} < 2 in a multipartite register"
        )));
    }
    dims.iter().try_fold(1usize, |acc, &d| {
        acc.checked_mul(d)
            .ok_or_else(|| Error::SizeGuard(format!("total dimension of {dims:?} overflows")))
    })
}

/// `Some(d)` when every party has local dimension `d`.
pub fn homogeneous_dim(dims: &[usize]) -> Option<usize> {
    let first = *dims.first()?;
    dims.iter().all(|&d| d == first).then_some(first)
}

pub(crate) fn require_homogeneous(dims: &[usize]) -> Result<usize> {
    homogeneous_dim(dims).ok_or_else(|| Error::Heterogeneous(dims.to_vec()))
}

pub(crate) fn vec_norm_squared(v: &[C64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum()
}

/// `⟨a|b⟩`, conjugate-linear in `a`.
pub fn vec_inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Pure state of `n` parties with possibly distinct local dimensions.
///
/// The constructor only checks shape; operations that need a unit vector
/// call [`PureState::require_normalized`]. Unnormalized states appear as
/// intermediate results, e.g. a symmetrized product.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(dims: Vec<usize>, amplitudes: Vec<C64>) -> Result<Self> {
        let total = check_dims(&dims)?;
        if amplitudes.len() != total {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for dims {:?} (expected {})",
                amplitudes.len(),
                dims,
                total
            )));
        }
        Ok(Self { dims, amplitudes })
    }

    /// Rescale to unit norm; a vector with norm below 1e-12 is rejected.
    pub fn normalized(dims: Vec<usize>, amplitudes: Vec<C64>) -> Result<Self> {
        Self::new(dims, amplitudes)?.normalize()
    }

    /// Computational basis state `|digits⟩`.
    pub fn basis(dims: Vec<usize>, digits: &[usize]) -> Result<Self> {
        let total = check_dims(&dims)?;
        if digits.len() != dims.len() || digits.iter().zip(&dims).any(|(&p, &d)| p >= d) {
            return Err(Error::InvalidParameter(format!(
                "basis label {digits:?} does not fit dims {dims:?}"
            )));
        }
        let index = digits.iter().zip(&dims).fold(0, |acc, (&p, &d)| acc * d + p);
        let mut amplitudes = vec![C64::new(0.0, 0.0); total];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self { dims, amplitudes })
    }

    pub fn n_parties(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dimension(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    /// Local dimension when all parties share it.
    pub fn local_dim(&self) -> Option<usize> {
        homogeneous_dim(&self.dims)
    }

    pub fn norm_squared(&self) -> f64 {
        vec_norm_squared(&self.amplitudes)
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_squared() - 1.0).abs() <= tol::NORM
    }

    pub fn require_normalized(&self) -> Result<()> {
        let ns = self.norm_squared();
        if (ns - 1.0).abs() <= tol::NORM {
            Ok(())
        } else {
            Err(Error::NotNormalized(ns))
        }
    }

    pub fn normalize(mut self) -> Result<Self> {
        let norm = self.norm_squared().sqrt();
        if norm < tol::ZERO_VECTOR {
            return Err(Error::ZeroVector(norm));
        }
        let inv = 1.0 / norm;
        self.amplitudes.iter_mut().for_each(|a| *a *= inv);
        Ok(self)
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            dims: self.dims.clone(),
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
        }
    }

    /// Euclidean distance `‖self − other‖`; dims must agree.
    pub fn distance(&self, other: &PureState) -> Result<f64> {
        same_dims(&self.dims, &other.dims)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// `|⟨self|other⟩|²` for unit vectors.
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        Ok(inner_product(self, other)?.norm_sqr())
    }

    /// `|ψ⟩⟨ψ|` as a validated density matrix.
    pub fn density(&self) -> Result<DensityMatrix> {
        self.require_normalized()?;
        Ok(DensityMatrix::from_parts(self.dims.clone(), outer(&self.amplitudes)))
    }
}

fn same_dims(a: &[usize], b: &[usize]) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(format!("{a:?} vs {b:?}")))
    }
}

pub(crate) fn outer(v: &[C64]) -> CMatrix {
    let n = v.len();
    CMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj())
}

/// Completely product state `⊗_i |φ_i⟩` kept in factored form.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    factors: Vec<Vec<C64>>,
}

impl ProductState {
    /// Every factor must already have unit norm (`|‖φ‖² − 1| ≤ 1e-9`).
    pub fn new(factors: Vec<Vec<C64>>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidDims("at least one factor is required".into()));
        }
        let dims: Vec<usize> = factors.iter().map(Vec::len).collect();
        check_dims(&dims)?;
        for (i, f) in factors.iter().enumerate() {
            let ns = vec_norm_squared(f);
            if (ns - 1.0).abs() > tol::NORM {
                return Err(Error::InvalidParameter(format!(
                    "factor {i} has norm squared {ns}, expected 1"
                )));
            }
        }
        Ok(Self { factors })
    }

    /// Normalize each factor; zero factors are rejected.
    pub fn from_unnormalized(factors: Vec<Vec<C64>>) -> Result<Self> {
        let mut out = Vec::with_capacity(factors.len());
        for f in factors {
            let norm = vec_norm_squared(&f).sqrt();
            if norm < tol::ZERO_VECTOR {
                return Err(Error::ZeroVector(norm));
            }
            out.push(f.into_iter().map(|a| a / norm).collect());
        }
        Self::new(out)
    }

    /// Same basis state on every party, e.g. `|0⟩^{⊗n}`.
    pub fn basis(dims: &[usize], digits: &[usize]) -> Result<Self> {
        if dims.len() != digits.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} digits for {} parties",
                digits.len(),
                dims.len()
            )));
        }
        let factors = dims
            .iter()
            .zip(digits)
            .map(|(&d, &p)| {
                if p >= d {
                    return Err(Error::InvalidParameter(format!("digit {p} >= dim {d}")));
                }
                let mut v = vec![C64::new(0.0, 0.0); d];
                v[p] = C64::new(1.0, 0.0);
                Ok(v)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(factors)
    }

    pub fn n_parties(&self) -> usize {
        self.factors.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(Vec::len).collect()
    }

    pub fn factors(&self) -> &[Vec<C64>] {
        &self.factors
    }

    pub fn factor(&self, i: usize) -> &[C64] {
        &self.factors[i]
    }

    /// Reorder factors so that factor `i` ends up in slot `σ(i)`.
    pub fn permuted(&self, sigma: &Permutation) -> Result<Self> {
        if sigma.len() != self.factors.len() {
            return Err(Error::InvalidPermutation(sigma.images().to_vec()));
        }
        let mut slots = vec![Vec::new(); self.factors.len()];
        for (i, f) in self.factors.iter().enumerate() {
            slots[sigma.apply(i)] = f.clone();
        }
        Ok(Self { factors: slots })
    }
}

/// Flat amplitudes of `⊗_i |φ_i⟩` with party 0 slowest.
pub fn tensor_product(factors: &ProductState) -> Result<PureState> {
    let dims = factors.dims();
    let mut amps = vec![C64::new(1.0, 0.0)];
    for f in factors.factors() {
        amps = amps
            .iter()
            .flat_map(|a| f.iter().map(move |b| a * b))
            .collect();
    }
    PureState::new(dims, amps)
}

/// `⟨a|b⟩`, antilinear in `a`.
pub fn inner_product(a: &PureState, b: &PureState) -> Result<C64> {
    same_dims(&a.dims, &b.dims)?;
    Ok(vec_inner(&a.amplitudes, &b.amplitudes))
}

/// Relabel parties: the local state of party `i` moves to slot `σ(i)`.
pub fn apply_party_permutation(psi: &PureState, sigma: &Permutation) -> Result<PureState> {
    let d = require_homogeneous(&psi.dims)?;
    if sigma.len() != psi.n_parties() {
        return Err(Error::InvalidPermutation(sigma.images().to_vec()));
    }
    let map = sigma.source_index_map(d);
    Ok(PureState {
        dims: psi.dims.clone(),
        amplitudes: map.iter().map(|&p| psi.amplitudes[p]).collect(),
    })
}

/// Largest elementwise `|m − m†|`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub(crate) fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Mixed state on a register with the given local dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity (all to 1e-9).
    pub fn new(dims: Vec<usize>, matrix: CMatrix) -> Result<Self> {
        let total = check_dims(&dims)?;
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare(matrix.nrows(), matrix.ncols()));
        }
        if matrix.nrows() != total {
            return Err(Error::DimensionMismatch(format!(
                "matrix side {} for dims {:?}",
                matrix.nrows(),
                dims
            )));
        }
        let herm = hermitian_deviation(&matrix);
        if herm > tol::HERMITIAN {
            return Err(Error::NotHermitian(herm));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > tol::TRACE || trace.im.abs() > tol::TRACE {
            return Err(Error::InvalidDensity(format!("trace {trace}")));
        }
        let spectrum = spectral_decompose(&matrix)?;
        if let Some(&min) = spectrum.eigenvalues.last() {
            if min < -tol::PSD {
                return Err(Error::InvalidDensity(format!("eigenvalue {min:e} < 0")));
            }
        }
        Ok(Self { dims, matrix })
    }

    /// Construction for matrices that are valid by construction.
    pub(crate) fn from_parts(dims: Vec<usize>, matrix: CMatrix) -> Self {
        Self { dims, matrix }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn n_parties(&self) -> usize {
        self.dims.len()
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> Result<f64> {
        same_dims(&self.dims, &other.dims)?;
        Ok(max_abs_diff(&self.matrix, &other.matrix))
    }
}

/// Trace out every party not in `keep` from a square operator on `dims`.
///
/// The kept parties appear in increasing label order. Works on any square
/// operator, so unnormalized projectors can be reduced too.
pub fn partial_trace_operator(
    dims: &[usize],
    m: &CMatrix,
    keep: &[usize],
) -> Result<(Vec<usize>, CMatrix)> {
    let n = dims.len();
    if keep.is_empty() {
        return Err(Error::InvalidParties("keep set is empty".into()));
    }
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if let Some(&bad) = kept.iter().find(|&&p| p >= n) {
        return Err(Error::InvalidParties(format!(
            "party {bad} out of range for {n} parties"
        )));
    }
    let total: usize = dims.iter().product();
    if m.nrows() != total || m.ncols() != total {
        return Err(Error::DimensionMismatch(format!(
            "operator {}x{} for dims {:?}",
            m.nrows(),
            m.ncols(),
            dims
        )));
    }
    if kept.len() == n {
        return Ok((dims.to_vec(), m.clone()));
    }
    let traced: Vec<usize> = (0..n).filter(|p| !kept.contains(p)).collect();
    let kept_dims: Vec<usize> = kept.iter().map(|&p| dims[p]).collect();
    let kd: usize = kept_dims.iter().product();
    let td: usize = traced.iter().map(|&p| dims[p]).product();

    // full[k * td + t] = flat index with kept digits k and traced digits t
    let mut full = vec![0usize; kd * td];
    let mut digits = vec![0usize; n];
    for flat in 0..total {
        let k = kept.iter().fold(0, |acc, &p| acc * dims[p] + digits[p]);
        let t = traced.iter().fold(0, |acc, &p| acc * dims[p] + digits[p]);
        full[k * td + t] = flat;
        for p in (0..n).rev() {
            digits[p] += 1;
            if digits[p] < dims[p] {
                break;
            }
            digits[p] = 0;
        }
    }
    let out = CMatrix::from_fn(kd, kd, |a, b| {
        (0..td)
            .map(|t| m[(full[a * td + t], full[b * td + t])])
            .sum()
    });
    Ok((kept_dims, out))
}

/// Reduced state on the parties in `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let (dims, m) = partial_trace_operator(&rho.dims, &rho.matrix, keep)?;
    Ok(DensityMatrix::from_parts(dims, m))
}

/// `Tr_{rest}|ψ⟩⟨ψ|` computed from the amplitudes without forming the full
/// projector. `ψ` need not be normalized; the trace of the result is `‖ψ‖²`.
pub fn reduced_operator(psi: &PureState, keep: &[usize]) -> Result<(Vec<usize>, CMatrix)> {
    let n = psi.n_parties();
    if keep.is_empty() {
        return Err(Error::InvalidParties("keep set is empty".into()));
    }
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if let Some(&bad) = kept.iter().find(|&&p| p >= n) {
        return Err(Error::InvalidParties(format!(
            "party {bad} out of range for {n} parties"
        )));
    }
    let traced: Vec<usize> = (0..n).filter(|p| !kept.contains(p)).collect();
    let m = reshape(psi, &kept, &traced);
    let kept_dims = kept.iter().map(|&p| psi.dims[p]).collect();
    Ok((kept_dims, &m * m.adjoint()))
}

/// Coefficient matrix of `ψ` with rows indexed by the parties in `rows` and
/// columns by those in `cols` (each group row-major in the listed order).
pub(crate) fn reshape(psi: &PureState, rows: &[usize], cols: &[usize]) -> CMatrix {
    let dims = &psi.dims;
    let nr: usize = rows.iter().map(|&p| dims[p]).product();
    let nc: usize = cols.iter().map(|&p| dims[p]).product();
    let mut m = CMatrix::zeros(nr, nc);
    let mut digits = vec![0usize; dims.len()];
    for a in &psi.amplitudes {
        let r = rows.iter().fold(0, |acc, &p| acc * dims[p] + digits[p]);
        let c = cols.iter().fold(0, |acc, &p| acc * dims[p] + digits[p]);
        m[(r, c)] = *a;
        for p in (0..dims.len()).rev() {
            digits[p] += 1;
            if digits[p] < dims[p] {
                break;
            }
            digits[p] = 0;
        }
    }
    m
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues descending.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector for `eigenvalues[k]`.
    pub unitary: CMatrix,
}

impl SpectralDecomposition {
    /// `U diag(λ) U†`.
    pub fn reconstruct(&self) -> CMatrix {
        let mut scaled = self.unitary.clone();
        for (k, &l) in self.eigenvalues.iter().enumerate() {
            scaled.column_mut(k).scale_mut(l);
        }
        &scaled * self.unitary.adjoint()
    }
}

pub fn spectral_decompose(h: &CMatrix) -> Result<SpectralDecomposition> {
    if h.nrows() != h.ncols() {
        return Err(Error::NotSquare(h.nrows(), h.ncols()));
    }
    let dev = hermitian_deviation(h);
    if dev > tol::HERMITIAN {
        return Err(Error::NotHermitian(dev));
    }
    let sym = (h + h.adjoint()).scale(0.5);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvalues = order
        .iter()
        .map(|&k| {
            let l = eig.eigenvalues[k];
            if (-tol::PSD..0.0).contains(&l) {
                0.0
            } else {
                l
            }
        })
        .collect();
    let n = h.nrows();
    let unitary = CMatrix::from_fn(n, n, |i, k| eig.eigenvectors[(i, order[k])]);
    Ok(SpectralDecomposition {
        eigenvalues,
        unitary,
    })
}
