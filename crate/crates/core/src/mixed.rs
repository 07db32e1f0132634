//! Mixed states given as explicit ensembles.
//!
//! Separability of a general density matrix is not decided here. A mixed
//! state counts as fully separable only through a certificate: an ensemble
//! whose members are all product states.

use crate::error::{Error, Result};
use crate::limits;
use crate::permutation::{factorial, Permutation};
use crate::state::{
    max_abs_diff, outer, require_homogeneous, tensor_product, CMatrix, DensityMatrix,
    ProductState, PureState, C64,
};
use crate::symmetry::{symmetric_subspace_projector, symmetrize};
use crate::tol;

#[derive(Debug, Clone, PartialEq)]
pub enum Member {
    Pure(PureState),
    Product(ProductState),
}

impl Member {
    pub fn dims(&self) -> Vec<usize> {
        match self {
            Member::Pure(p) => p.dims().to_vec(),
            Member::Product(p) => p.dims(),
        }
    }

    pub fn to_pure(&self) -> Result<PureState> {
        match self {
            Member::Pure(p) => Ok(p.clone()),
            Member::Product(p) => tensor_product(p),
        }
    }
}

/// `ρ = Σ_i p_i |m_i⟩⟨m_i|` with `p_i > 0`, `Σ p_i = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    weights: Vec<f64>,
    members: Vec<Member>,
}

impl Ensemble {
    pub fn new(weights: Vec<f64>, members: Vec<Member>) -> Result<Self> {
        if members.is_empty() || weights.len() != members.len() {
            return Err(Error::InvalidEnsemble(format!(
                "{} weights for {} members",
                weights.len(),
                members.len()
            )));
        }
        if let Some(w) = weights.iter().find(|&&w| w.is_nan() || w <= 0.0) {
            return Err(Error::InvalidEnsemble(format!("non-positive weight {w}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > tol::NORM {
            return Err(Error::InvalidEnsemble(format!("weights sum to {total}")));
        }
        let dims = members[0].dims();
        for m in &members {
            if m.dims() != dims {
                return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", m.dims(), dims)));
            }
            if let Member::Pure(p) = m {
                p.require_normalized()?;
            }
        }
        Ok(Self { weights, members })
    }

    /// Ensemble of product states, i.e. a full-separability certificate.
    pub fn from_products(weights: Vec<f64>, products: Vec<ProductState>) -> Result<Self> {
        Self::new(weights, products.into_iter().map(Member::Product).collect())
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn dims(&self) -> Vec<usize> {
        self.members[0].dims()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_certificate(&self) -> bool {
        self.members.iter().all(|m| matches!(m, Member::Product(_)))
    }

    fn products(&self) -> Result<Vec<&ProductState>> {
        self.members
            .iter()
            .map(|m| match m {
                Member::Product(p) => Ok(p),
                Member::Pure(_) => Err(Error::InvalidEnsemble(
                    "certificate members must be product states".into(),
                )),
            })
            .collect()
    }
}

pub fn ensemble_to_density(e: &Ensemble) -> Result<DensityMatrix> {
    let dims = e.dims();
    limits::check_operator_size(&dims)?;
    let total: usize = dims.iter().product();
    let mut rho = CMatrix::zeros(total, total);
    for (w, m) in e.weights.iter().zip(&e.members) {
        rho += outer(m.to_pure()?.amplitudes()).scale(*w);
    }
    DensityMatrix::new(dims, rho)
}

/// Hilbert–Schmidt inner product `Tr(a†b)`, real part.
pub fn hs_inner(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dims() != b.dims() {
        return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", a.dims(), b.dims())));
    }
    Ok(a.matrix()
        .iter()
        .zip(b.matrix().iter())
        .map(|(x, y)| x.conj() * y)
        .sum::<C64>()
        .re)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportReport {
    /// `‖P_sym ρ P_sym − ρ‖_max ≤ 1e-8`.
    pub in_subspace: bool,
    /// `Tr(ρ P_sym)`.
    pub overlap: f64,
    pub deviation: f64,
}

pub fn symmetric_support_check(rho: &DensityMatrix) -> Result<SupportReport> {
    let d = require_homogeneous(rho.dims())?;
    let p = symmetric_subspace_projector(rho.n_parties(), d)?;
    let overlap = (rho.matrix() * &p).trace().re;
    let projected = &p * rho.matrix() * &p;
    let deviation = max_abs_diff(&projected, rho.matrix());
    Ok(SupportReport {
        in_subspace: deviation <= 1e-8,
        overlap,
        deviation,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonorthogonalityReport {
    /// `Tr(ρ P_sym) = Σ_i p_i ‖Sym(Φ_i)‖²`.
    pub overlap: f64,
    /// `min_i p_i / n!`.
    pub floor: f64,
    pub holds: bool,
    /// `‖Sym(Φ_i)‖²` per member.
    pub member_overlaps: Vec<f64>,
}

/// Overlap of a certified fully separable state with the symmetric
/// subspace. Each product member contributes at least `p_i/n!`.
pub fn verify_mixed_nonorthogonality(e: &Ensemble) -> Result<NonorthogonalityReport> {
    let products = e.products()?;
    let n = e.dims().len();
    let member_overlaps = products
        .iter()
        .map(|p| symmetrize(p).map(|s| s.norm_squared))
        .collect::<Result<Vec<_>>>()?;
    let overlap = e
        .weights
        .iter()
        .zip(&member_overlaps)
        .map(|(w, o)| w * o)
        .sum::<f64>();
    let floor = e.weights.iter().copied().fold(f64::INFINITY, f64::min) / factorial(n);
    Ok(NonorthogonalityReport {
        overlap,
        floor,
        holds: overlap > 0.0 && overlap >= floor - 1e-9,
        member_overlaps,
    })
}

/// `ρ' = (1/n!) Σ_σ U_σ ρ U_σ†`.
pub fn symmetrize_density(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let d = require_homogeneous(rho.dims())?;
    let n = rho.n_parties();
    limits::check_symmetrizer(n)?;
    limits::check_operator_size(rho.dims())?;
    let total = rho.dimension();
    let m = rho.matrix();
    let mut out = CMatrix::zeros(total, total);
    for sigma in Permutation::all(n) {
        let src = sigma.source_index_map(d);
        for r in 0..total {
            for c in 0..total {
                out[(r, c)] += m[(src[r], src[c])];
            }
        }
    }
    Ok(DensityMatrix::from_parts(
        rho.dims().to_vec(),
        out.unscale(factorial(n)),
    ))
}

#[derive(Debug, Clone)]
pub struct SymmetrizedEnsemble {
    pub density: DensityMatrix,
    /// For certificate inputs: every member permuted by every `σ`, weight
    /// `p_i/n!`, in member-major, lexicographic-permutation order.
    pub certificate: Option<Ensemble>,
    /// Max elementwise gap between `density` and the certificate's matrix.
    pub reconstruction_error: Option<f64>,
}

/// Symmetrize the density of an ensemble; product ensembles also yield a
/// product certificate for the symmetrized state.
pub fn symmetrize_ensemble(e: &Ensemble) -> Result<SymmetrizedEnsemble> {
    let density = symmetrize_density(&ensemble_to_density(e)?)?;
    if !e.is_certificate() {
        return Ok(SymmetrizedEnsemble {
            density,
            certificate: None,
            reconstruction_error: None,
        });
    }
    let n = e.dims().len();
    let nf = factorial(n);
    let mut weights = Vec::new();
    let mut members = Vec::new();
    for (w, p) in e.weights.iter().zip(e.products()?) {
        for sigma in Permutation::all(n) {
            weights.push(w / nf);
            members.push(Member::Product(p.permuted(&sigma)?));
        }
    }
    // renormalize the rounding in Σ p_i/n!
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    let certificate = Ensemble::new(weights, members)?;
    let rebuilt = ensemble_to_density(&certificate)?;
    let err = density.max_abs_diff(&rebuilt)?;
    Ok(SymmetrizedEnsemble {
        density,
        certificate: Some(certificate),
        reconstruction_error: Some(err),
    })
}
