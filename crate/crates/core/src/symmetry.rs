//! Exchange symmetry: invariance tests, (anti)symmetrizers, the periodic
//! translation and the symmetric-subspace projector.
//!
//! Symmetrization keeps the raw average `(1/n!) Σ_σ σ|Φ⟩` with no extra
//! normalization constant, so `⟨Φ_S|Φ_S⟩ = Perm(a)/n!` for unit factors.

use std::collections::HashMap;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::limits;
use crate::permanent::permanent_ryser;
use crate::permutation::{factorial, increment_digits, Permutation};
use crate::state::{
    apply_party_permutation, inner_product, require_homogeneous, tensor_product, CMatrix,
    ProductState, PureState, C64,
};
use crate::tol;

fn adjacent_deviations(psi: &PureState, sign: f64) -> Result<impl Iterator<Item = Result<f64>> + '_> {
    require_homogeneous(psi.dims())?;
    let n = psi.n_parties();
    Ok((0..n.saturating_sub(1)).map(move |i| {
        let swapped = apply_party_permutation(psi, &Permutation::transposition(n, i, i + 1)?)?;
        Ok(swapped
            .amplitudes()
            .iter()
            .zip(psi.amplitudes())
            .map(|(a, b)| (a - sign * b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }))
}

/// `‖σψ − ψ‖ ≤ tol` for every adjacent transposition, which generate `S_n`.
pub fn is_permutation_invariant(psi: &PureState, tol: f64) -> Result<bool> {
    for dev in adjacent_deviations(psi, 1.0)? {
        if dev? > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `‖σψ + ψ‖ ≤ tol` for every adjacent transposition.
pub fn is_antisymmetric(psi: &PureState, tol: f64) -> Result<bool> {
    if psi.n_parties() < 2 {
        return Ok(psi.norm_squared().sqrt() <= tol);
    }
    for dev in adjacent_deviations(psi, -1.0)? {
        if dev? > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of testing `T|ψ⟩ = e^{iθ}|ψ⟩` for the translation `i → i+1 (mod n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TranslationReport {
    pub is_eigenstate: bool,
    /// Eigenphase in `(−π, π]`, set only for eigenstates.
    pub theta: Option<f64>,
    /// `‖T|ψ⟩ − e^{iθ}|ψ⟩‖` with `θ = arg⟨ψ|Tψ⟩`.
    pub residual: f64,
    /// `⟨ψ|T|ψ⟩`.
    pub overlap: C64,
}

fn wrap_phase(theta: f64) -> f64 {
    if theta <= -std::f64::consts::PI {
        theta + 2.0 * std::f64::consts::PI
    } else {
        theta
    }
}

pub fn translation_analyze(psi: &PureState) -> Result<TranslationReport> {
    require_homogeneous(psi.dims())?;
    let n = psi.n_parties();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "translation analysis needs at least two parties".into(),
        ));
    }
    psi.require_normalized()?;
    let shifted = apply_party_permutation(psi, &Permutation::cyclic_shift(n, 1))?;
    let overlap = inner_product(psi, &shifted)?;
    let theta = wrap_phase(overlap.arg());
    let phase = C64::from_polar(1.0, theta);
    let residual = shifted
        .amplitudes()
        .iter()
        .zip(psi.amplitudes())
        .map(|(t, a)| (t - phase * a).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let is_eigenstate = overlap.norm() >= 1.0 - tol::EIGENSTATE && residual <= tol::EIGENSTATE;
    Ok(TranslationReport {
        is_eigenstate,
        theta: is_eigenstate.then_some(theta),
        residual,
        overlap,
    })
}

/// Result of (anti)symmetrizing a product state, kept unnormalized.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetrizedState {
    pub state: PureState,
    pub norm_squared: f64,
}

impl SymmetrizedState {
    fn from_state(state: PureState) -> Self {
        let norm_squared = state.norm_squared();
        Self { state, norm_squared }
    }

    pub fn is_zero(&self) -> bool {
        self.norm_squared < tol::ZERO_VECTOR
    }

    /// Unit-norm version; fails for the zero state.
    pub fn normalized(&self) -> Result<PureState> {
        self.state.clone().normalize()
    }
}

fn symmetrizer_preconditions(phi: &ProductState) -> Result<usize> {
    let dims = phi.dims();
    let d = require_homogeneous(&dims)?;
    limits::check_symmetrizer(phi.n_parties())?;
    limits::check_state_size(&dims)?;
    Ok(d)
}

/// `M[i][j] = φ_i[q_j]`: the amplitude of `σ(⊗φ)` at `|q⟩` is `∏_i M[i][σ(i)]`.
fn slot_matrix(phi: &ProductState, digits: &[usize]) -> CMatrix {
    let n = phi.n_parties();
    DMatrix::from_fn(n, n, |i, j| phi.factor(i)[digits[j]])
}

/// `(1/n!) Σ_σ σ(⊗φ_i)`.
///
/// The amplitude at `|q⟩` is `Perm(M_q)/n!` with `M_q[i][j] = φ_i[q_j]`; it
/// only depends on the multiset of digits in `q`, so one permanent is
/// evaluated per orbit of basis states.
pub fn symmetrize(phi: &ProductState) -> Result<SymmetrizedState> {
    let d = symmetrizer_preconditions(phi)?;
    let n = phi.n_parties();
    let total = d.pow(n as u32);
    let scale = 1.0 / factorial(n);
    let mut cache: HashMap<Vec<usize>, C64> = HashMap::new();
    let mut amplitudes = Vec::with_capacity(total);
    let mut digits = vec![0usize; n];
    for _ in 0..total {
        let mut key = digits.clone();
        key.sort_unstable();
        let amp = match cache.get(&key) {
            Some(&a) => a,
            None => {
                let a = permanent_ryser(&slot_matrix(phi, &key))? * scale;
                cache.insert(key, a);
                a
            }
        };
        amplitudes.push(amp);
        increment_digits(&mut digits, d);
    }
    let out = SymmetrizedState::from_state(PureState::new(phi.dims(), amplitudes)?);
    // Perm(a) >= 1 for unit factors, so the symmetrized state never vanishes.
    if out.norm_squared < 1.0 / factorial(n) - 1e-9 {
        return Err(Error::Numerical(format!(
            "symmetrized norm {} below 1/{n}!",
            out.norm_squared
        )));
    }
    Ok(out)
}

/// `(1/n!) Σ_σ sign(σ) σ(⊗φ_i)`; the result is zero when `d < n` or when
/// the factors are linearly dependent.
pub fn antisymmetrize(phi: &ProductState) -> Result<SymmetrizedState> {
    let d = symmetrizer_preconditions(phi)?;
    let n = phi.n_parties();
    let total = d.pow(n as u32);
    let scale = 1.0 / factorial(n);
    let mut cache: HashMap<Vec<usize>, C64> = HashMap::new();
    let mut amplitudes = Vec::with_capacity(total);
    let mut digits = vec![0usize; n];
    for _ in 0..total {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&j| digits[j]);
        let key: Vec<usize> = order.iter().map(|&j| digits[j]).collect();
        let amp = if key.windows(2).any(|w| w[0] == w[1]) {
            C64::new(0.0, 0.0)
        } else {
            let det = *cache
                .entry(key)
                .or_insert_with_key(|k| slot_matrix(phi, k).determinant() * scale);
            // columns of M_q are those of the sorted representative, reordered
            let sign = Permutation::from_images(order)?.sign() as f64;
            det * sign
        };
        amplitudes.push(amp);
        increment_digits(&mut digits, d);
    }
    Ok(SymmetrizedState::from_state(PureState::new(phi.dims(), amplitudes)?))
}

/// Reference symmetrizer: accumulates `σ(⊗φ)` over `S_n` in lexicographic
/// order. Exponentially slower than [`symmetrize`]; used to cross-check it.
pub fn symmetrize_reference(phi: &ProductState, antisymmetric: bool) -> Result<SymmetrizedState> {
    symmetrizer_preconditions(phi)?;
    let n = phi.n_parties();
    let scale = 1.0 / factorial(n);
    let mut acc = vec![C64::new(0.0, 0.0); phi.dims().iter().product()];
    for sigma in Permutation::all(n) {
        let sign = if antisymmetric { sigma.sign() as f64 } else { 1.0 };
        let term = tensor_product(&phi.permuted(&sigma)?)?;
        for (a, t) in acc.iter_mut().zip(term.amplitudes()) {
            *a += t * (sign * scale);
        }
    }
    Ok(SymmetrizedState::from_state(PureState::new(phi.dims(), acc)?))
}

/// `U_σ` on `n` parties of dimension `d`: `U_σ|ψ⟩ = σψ`.
pub fn permutation_operator(sigma: &Permutation, d: usize) -> Result<CMatrix> {
    let dims = vec![d; sigma.len()];
    limits::check_operator_size(&dims)?;
    let map = sigma.source_index_map(d);
    let total = map.len();
    let mut u = CMatrix::zeros(total, total);
    for (q, &p) in map.iter().enumerate() {
        u[(q, p)] = C64::new(1.0, 0.0);
    }
    Ok(u)
}

/// Number of symmetric basis states, `C(n+d−1, n)`.
pub fn symmetric_dimension(n: usize, d: usize) -> u128 {
    let mut out: u128 = 1;
    for k in 1..=n as u128 {
        out = out * (d as u128 - 1 + k) / k;
    }
    out
}

/// `P_sym = (1/n!) Σ_σ U_σ`.
///
/// Assembled orbit by orbit: `P_sym[q][q'] = 1/|orbit|` when `q` and `q'`
/// hold the same multiset of digits, else 0.
pub fn symmetric_subspace_projector(n: usize, d: usize) -> Result<CMatrix> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidParameter(format!("n = {n}, d = {d}")));
    }
    limits::check_operator_size(&vec![d; n])?;
    let total = d.pow(n as u32);
    let mut orbit_of = Vec::with_capacity(total);
    let mut orbits: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    let mut digits = vec![0usize; n];
    for q in 0..total {
        let mut key = digits.clone();
        key.sort_unstable();
        orbits.entry(key.clone()).or_default().push(q);
        orbit_of.push(key);
        increment_digits(&mut digits, d);
    }
    let mut p = CMatrix::zeros(total, total);
    for members in orbits.values() {
        let w = C64::new(1.0 / members.len() as f64, 0.0);
        for &a in members {
            for &b in members {
                p[(a, b)] = w;
            }
        }
    }
    Ok(p)
}
