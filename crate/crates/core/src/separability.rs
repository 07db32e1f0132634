//! Bipartitions, Schmidt ranks and the three-way classification of pure
//! states, together with executable checks of the two exchange-symmetry
//! theorems:
//!
//! * a permutation-invariant or translation-covariant state is never
//!   separable across one cut without being fully separable;
//! * symmetrizing a product state gives a nonzero state that is globally
//!   entangled unless all factors coincide up to phase.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::limits;
use crate::permanent::{gram_from_factors, permanent_ryser};
use crate::permutation::factorial;
use crate::state::{
    reduced_operator, reshape, spectral_decompose, tensor_product, vec_inner, CMatrix,
    DensityMatrix, ProductState, PureState, SpectralDecomposition, C64,
};
use crate::symmetry::{is_permutation_invariant, symmetrize, translation_analyze};
use crate::tol;

/// Split of the parties into two nonempty groups. `side_a` always holds
/// party 0, so `A:B` and `B:A` share one canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bipartition {
    side_a: Vec<usize>,
    side_b: Vec<usize>,
}

impl Bipartition {
    /// Build from one side (either one); the other side is the complement.
    pub fn new(n: usize, side: &[usize]) -> Result<Self> {
        let mut s = side.to_vec();
        s.sort_unstable();
        s.dedup();
        if s.iter().any(|&p| p >= n) {
            return Err(Error::InvalidParties(format!("{side:?} for {n} parties")));
        }
        if s.is_empty() || s.len() == n {
            return Err(Error::InvalidParties(format!(
                "{side:?} is not a proper nonempty subset of {n} parties"
            )));
        }
        let rest: Vec<usize> = (0..n).filter(|p| !s.contains(p)).collect();
        Ok(if s[0] == 0 {
            Self { side_a: s, side_b: rest }
        } else {
            Self { side_a: rest, side_b: s }
        })
    }

    pub fn side_a(&self) -> &[usize] {
        &self.side_a
    }

    pub fn side_b(&self) -> &[usize] {
        &self.side_b
    }

    pub fn n_parties(&self) -> usize {
        self.side_a.len() + self.side_b.len()
    }

    /// Same cut with the roles of the two sides exchanged (not canonical).
    pub fn swapped(&self) -> (Vec<usize>, Vec<usize>) {
        (self.side_b.clone(), self.side_a.clone())
    }

    /// Cut isolating a single party.
    pub fn is_single_party(&self) -> bool {
        self.side_a.len() == 1 || self.side_b.len() == 1
    }
}

/// Written with 1-based party labels, e.g. `{1}:{2,3}`.
impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[usize]| {
            v.iter()
                .map(|p| (p + 1).to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{{{}}}:{{{}}}", show(&self.side_a), show(&self.side_b))
    }
}

/// All `2^(n−1) − 1` canonical bipartitions.
///
/// Ordered by the bitmask `m` of parties `1..n` that join party 0 on side A.
pub fn enumerate_bipartitions(n: usize) -> Result<Vec<Bipartition>> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "bipartitions need at least two parties, got {n}"
        )));
    }
    if n > 63 {
        return Err(Error::SizeGuard(format!("{n} parties")));
    }
    let full = (1u64 << (n - 1)) - 1;
    Ok((0..full)
        .map(|mask| {
            let mut side_a = vec![0];
            let mut side_b = Vec::new();
            for p in 1..n {
                if mask & (1 << (p - 1)) != 0 {
                    side_a.push(p);
                } else {
                    side_b.push(p);
                }
            }
            Bipartition { side_a, side_b }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtCoefficients {
    pub rank: usize,
    /// Singular values of the reshaped coefficient matrix, descending.
    pub singular_values: Vec<f64>,
}

fn singular_values_desc(m: CMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

fn count_rank(s: &[f64], rel_tol: f64) -> usize {
    let max = s.first().copied().unwrap_or(0.0);
    if max <= 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x >= rel_tol * max).count()
}

fn check_cut(psi: &PureState, cut: &Bipartition) -> Result<()> {
    if cut.n_parties() != psi.n_parties() {
        return Err(Error::InvalidParties(format!(
            "cut {cut} does not cover {} parties",
            psi.n_parties()
        )));
    }
    Ok(())
}

/// Schmidt rank across `cut`: singular values `s ≥ rel_tol·s_max` are counted.
pub fn schmidt_rank(psi: &PureState, cut: &Bipartition, rel_tol: f64) -> Result<SchmidtCoefficients> {
    psi.require_normalized()?;
    check_cut(psi, cut)?;
    Ok(schmidt_unchecked(psi, cut.side_a(), cut.side_b(), rel_tol))
}

fn schmidt_unchecked(psi: &PureState, rows: &[usize], cols: &[usize], rel_tol: f64) -> SchmidtCoefficients {
    let singular_values = singular_values_desc(reshape(psi, rows, cols));
    SchmidtCoefficients {
        rank: count_rank(&singular_values, rel_tol),
        singular_values,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    FullySeparable,
    GloballyEntangled,
    PartiallySeparable,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::FullySeparable => "FullySeparable",
            Verdict::GloballyEntangled => "GloballyEntangled",
            Verdict::PartiallySeparable => "PartiallySeparable",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutEvidence {
    pub cut: Bipartition,
    pub rank: usize,
    pub singular_values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub verdict: Verdict,
    /// First rank-one cut in canonical order, present iff partially separable.
    pub witness: Option<Bipartition>,
    /// Recovered single-party states, present iff fully separable. Each is
    /// phase-fixed so that its largest-magnitude component is real positive.
    pub factors: Option<ProductState>,
    /// `|⟨⊗ factors|ψ⟩|²`, present with `factors`.
    pub factor_fidelity: Option<f64>,
    /// One entry per canonical bipartition, in canonical order.
    pub evidence: Vec<CutEvidence>,
}

impl Classification {
    pub fn ranks(&self) -> Vec<usize> {
        self.evidence.iter().map(|e| e.rank).collect()
    }
}

/// Options for [`classify_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyOptions {
    /// Relative singular-value cutoff.
    pub rel_tol: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            rel_tol: tol::SCHMIDT_REL,
        }
    }
}

pub fn classify(psi: &PureState) -> Result<Classification> {
    classify_with(psi, &ClassifyOptions::default())
}

/// Sweep every bipartition and sort the state into one of the three classes.
pub fn classify_with(psi: &PureState, opts: &ClassifyOptions) -> Result<Classification> {
    let n = psi.n_parties();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "classification needs at least two parties".into(),
        ));
    }
    limits::check_state_size(psi.dims())?;
    psi.require_normalized()?;
    let cuts = enumerate_bipartitions(n)?;
    let evidence: Vec<CutEvidence> = cuts
        .into_par_iter()
        .map(|cut| {
            let s = schmidt_unchecked(psi, cut.side_a(), cut.side_b(), opts.rel_tol);
            CutEvidence {
                cut,
                rank: s.rank,
                singular_values: s.singular_values,
            }
        })
        .collect();

    let verdict = if evidence.iter().all(|e| e.rank == 1) {
        Verdict::FullySeparable
    } else if evidence.iter().all(|e| e.rank >= 2) {
        Verdict::GloballyEntangled
    } else {
        Verdict::PartiallySeparable
    };
    let witness = (verdict == Verdict::PartiallySeparable)
        .then(|| evidence.iter().find(|e| e.rank == 1).map(|e| e.cut.clone()))
        .flatten();
    let (factors, factor_fidelity) = if verdict == Verdict::FullySeparable {
        let f = recover_factors(psi)?;
        let fid = tensor_product(&f)?.fidelity(psi)?;
        (Some(f), Some(fid))
    } else {
        (None, None)
    };
    Ok(Classification {
        verdict,
        witness,
        factors,
        factor_fidelity,
        evidence,
    })
}

/// Dominant left singular vector of each single-party cut.
fn recover_factors(psi: &PureState) -> Result<ProductState> {
    let n = psi.n_parties();
    let mut factors = Vec::with_capacity(n);
    for k in 0..n {
        let rest: Vec<usize> = (0..n).filter(|&p| p != k).collect();
        let svd = reshape(psi, &[k], &rest).svd(true, false);
        let u = svd
            .u
            .ok_or_else(|| Error::Numerical("SVD did not return left vectors".into()))?;
        let best = svd
            .singular_values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        factors.push(fix_phase(u.column(best).iter().copied().collect()));
    }
    ProductState::from_unnormalized(factors)
}

/// Rotate the global phase so the largest-magnitude component is real positive.
pub fn fix_phase(v: Vec<C64>) -> Vec<C64> {
    let pivot = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or(C64::new(1.0, 0.0));
    if pivot.norm() == 0.0 {
        return v;
    }
    let phase = pivot.conj() / pivot.norm();
    v.into_iter().map(|a| a * phase).collect()
}

/// `|⟨φ_i|φ_j⟩| ≥ 1 − 1e-9` for every pair of unit factors.
pub fn factors_identical(phi: &ProductState) -> bool {
    let f = phi.factors();
    (0..f.len()).all(|i| {
        (i + 1..f.len()).all(|j| vec_inner(&f[i], &f[j]).norm() >= 1.0 - tol::PARALLEL)
    })
}

/// Which symmetry premise of the dichotomy a state satisfies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SymmetryPremise {
    PermutationInvariant,
    TranslationEigenstate { theta: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Result1Check {
    pub holds: bool,
    pub premise: SymmetryPremise,
    pub detail: Classification,
    /// For fully separable permutation-invariant states: whether the
    /// recovered factors coincide up to phase.
    pub factors_identical: Option<bool>,
}

/// Machine-check the dichotomy for one state. States without permutation
/// invariance or translation covariance are rejected, not passed.
pub fn verify_result1(psi: &PureState) -> Result<Result1Check> {
    verify_result1_with(psi, &ClassifyOptions::default())
}

pub fn verify_result1_with(psi: &PureState, opts: &ClassifyOptions) -> Result<Result1Check> {
    psi.require_normalized()?;
    let premise = if is_permutation_invariant(psi, tol::SYMMETRY)? {
        SymmetryPremise::PermutationInvariant
    } else {
        let t = translation_analyze(psi)?;
        match t.theta {
            Some(theta) if t.is_eigenstate => SymmetryPremise::TranslationEigenstate { theta },
            _ => {
                return Err(Error::Premise(
                    "state is neither permutation invariant nor a translation eigenstate".into(),
                ))
            }
        }
    };
    let detail = classify_with(psi, opts)?;
    let factors_identical = match (&premise, &detail.factors) {
        (SymmetryPremise::PermutationInvariant, Some(f)) => Some(factors_identical(f)),
        _ => None,
    };
    let holds = detail.verdict != Verdict::PartiallySeparable && factors_identical != Some(false);
    Ok(Result1Check {
        holds,
        premise,
        detail,
        factors_identical,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Result2Check {
    pub nonzero: bool,
    pub norm_squared: f64,
    /// `Perm(⟨φ_i|φ_j⟩)`, equal to `n!·norm_squared`.
    pub permanent: f64,
    pub symmetrized: PureState,
    pub verdict: Classification,
    pub factors_identical: bool,
    pub holds: bool,
}

/// Symmetrize `φ`, classify the result and compare with what the theorem
/// predicts from the factors alone.
pub fn verify_result2(phi: &ProductState) -> Result<Result2Check> {
    verify_result2_with(phi, &ClassifyOptions::default())
}

pub fn verify_result2_with(phi: &ProductState, opts: &ClassifyOptions) -> Result<Result2Check> {
    let n = phi.n_parties();
    if n < 2 {
        return Err(Error::InvalidParameter("need at least two factors".into()));
    }
    let sym = symmetrize(phi)?;
    let permanent = permanent_ryser(gram_from_factors(phi)?.entries())?.re;
    let nonzero = sym.norm_squared >= 1.0 / factorial(n) - 1e-9;
    let symmetrized = sym.normalized()?;
    let verdict = classify_with(&symmetrized, opts)?;
    let identical = factors_identical(phi);
    let holds = nonzero
        && match verdict.verdict {
            Verdict::GloballyEntangled => !identical,
            Verdict::FullySeparable => {
                identical
                    && verdict.factors.as_ref().is_some_and(|f| {
                        f.factors()
                            .iter()
                            .all(|v| vec_inner(v, phi.factor(0)).norm() >= 1.0 - tol::PARALLEL)
                    })
            }
            Verdict::PartiallySeparable => false,
        };
    Ok(Result2Check {
        nonzero,
        norm_squared: sym.norm_squared,
        permanent,
        symmetrized,
        verdict,
        factors_identical: identical,
        holds,
    })
}

/// Two routes to the single-party reduced state of a symmetrized product.
#[derive(Debug, Clone)]
pub struct CrossCheckReport {
    /// `⟨Φ_S|Φ_S⟩` of the raw symmetrization.
    pub norm_squared: f64,
    /// Partial trace over parties `2..n`, normalized to unit trace.
    pub direct_rdm: DensityMatrix,
    /// `Σ_k λ_k |α_k⟩⟨α_k| / (n!)²`, normalized to unit trace.
    pub gram_rdm: DensityMatrix,
    /// `G[i][j] = ⟨ψ_i|ψ_j⟩` for the `(n−1)`-party states `ψ_k`.
    pub psi_gram: CMatrix,
    pub spectral: SpectralDecomposition,
    /// `|α_k⟩ = Σ_i conj(U_ik) |φ_i⟩`.
    pub alpha_vectors: Vec<Vec<C64>>,
    /// Max elementwise deviation between the two unnormalized reductions.
    pub max_deviation: f64,
}

/// Rebuild `Tr_{2..n}|Φ_S⟩⟨Φ_S|` from the decomposition
/// `|Φ_S⟩ = (1/n!) Σ_k |φ_k⟩|ψ_k⟩`, where `ψ_k` is the sum over `S_{n−1}`
/// of the product of the remaining factors in cyclic order
/// `φ_{k+1} … φ_n φ_1 … φ_{k−1}`.
pub fn rdm_crosscheck(phi: &ProductState) -> Result<CrossCheckReport> {
    let n = phi.n_parties();
    if n < 2 {
        return Err(Error::InvalidParameter("need at least two factors".into()));
    }
    let sym = symmetrize(phi)?;
    let d = phi.factor(0).len();

    let sub_scale = factorial(n - 1);
    let psis: Vec<Vec<C64>> = (0..n)
        .map(|k| {
            let rest: Vec<Vec<C64>> = (1..n).map(|m| phi.factor((k + m) % n).to_vec()).collect();
            let s = symmetrize(&ProductState::new(rest)?)?;
            Ok(s.state.amplitudes().iter().map(|a| a * sub_scale).collect())
        })
        .collect::<Result<_>>()?;
    let mut gram = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let g = vec_inner(&psis[i], &psis[j]);
            gram[(i, j)] = g;
            gram[(j, i)] = g.conj();
        }
        gram[(i, i)] = C64::new(gram[(i, i)].re, 0.0);
    }
    let spectral = spectral_decompose(&gram)?;
    let u = &spectral.unitary;
    let alpha_vectors: Vec<Vec<C64>> = (0..n)
        .map(|k| {
            (0..d)
                .map(|c| (0..n).map(|i| u[(i, k)].conj() * phi.factor(i)[c]).sum())
                .collect()
        })
        .collect();
    let inv = 1.0 / (factorial(n) * factorial(n));
    let mut gram_rdm = CMatrix::zeros(d, d);
    for (lambda, alpha) in spectral.eigenvalues.iter().zip(&alpha_vectors) {
        for r in 0..d {
            for c in 0..d {
                gram_rdm[(r, c)] += alpha[r] * alpha[c].conj() * (lambda * inv);
            }
        }
    }
    let (_, direct) = reduced_operator(&sym.state, &[0])?;
    let max_deviation = crate::state::max_abs_diff(&direct, &gram_rdm);
    let unit = |m: &CMatrix| {
        let t = m.trace().re;
        DensityMatrix::from_parts(vec![d], m.unscale(t))
    };
    Ok(CrossCheckReport {
        norm_squared: sym.norm_squared,
        direct_rdm: unit(&direct),
        gram_rdm: unit(&gram_rdm),
        psi_gram: gram,
        spectral,
        alpha_vectors,
        max_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{ghz, w_state};
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn bell() -> PureState {
        PureState::normalized(vec![2, 2], vec![c(1.0), c(0.0), c(0.0), c(1.0)]).unwrap()
    }

    fn zero_bell() -> PureState {
        let mut a = vec![c(0.0); 8];
        a[0] = c(1.0);
        a[3] = c(1.0);
        PureState::normalized(vec![2, 2, 2], a).unwrap()
    }

    #[test]
    fn bipartition_counts() {
        assert_eq!(enumerate_bipartitions(2).unwrap().len(), 1);
        assert_eq!(enumerate_bipartitions(3).unwrap().len(), 3);
        assert_eq!(enumerate_bipartitions(5).unwrap().len(), 15);
        assert!(enumerate_bipartitions(1).is_err());
        let cuts = enumerate_bipartitions(3).unwrap();
        assert_eq!(cuts[0].to_string(), "{1}:{2,3}");
        assert_eq!(cuts[1].to_string(), "{1,2}:{3}");
        assert_eq!(cuts[2].to_string(), "{1,3}:{2}");
    }

    #[test]
    fn bipartition_canonical_form() {
        let a = Bipartition::new(3, &[1, 2]).unwrap();
        let b = Bipartition::new(3, &[0]).unwrap();
        assert_eq!(a, b);
        assert!(Bipartition::new(3, &[]).is_err());
        assert!(Bipartition::new(3, &[0, 1, 2]).is_err());
        assert!(Bipartition::new(3, &[3]).is_err());
    }

    #[test]
    fn schmidt_examples() {
        let cut = Bipartition::new(2, &[0]).unwrap();
        let s = schmidt_rank(&bell(), &cut, 1e-10).unwrap();
        assert_eq!(s.rank, 2);
        for v in &s.singular_values {
            assert_relative_eq!(*v, FRAC_1_SQRT_2, epsilon = 1e-14);
        }
        let s = schmidt_rank(&PureState::basis(vec![2, 2], &[0, 0]).unwrap(), &cut, 1e-10).unwrap();
        assert_eq!(s.rank, 1);
        let cut = Bipartition::new(4, &[0, 1]).unwrap();
        assert_eq!(schmidt_rank(&ghz(4, 2).unwrap(), &cut, 1e-10).unwrap().rank, 2);
        let unnormalized = PureState::new(vec![2, 2], vec![c(1.0); 4]).unwrap();
        assert!(schmidt_rank(&unnormalized, &Bipartition::new(2, &[0]).unwrap(), 1e-10).is_err());
        assert!(schmidt_rank(&bell(), &Bipartition::new(3, &[0]).unwrap(), 1e-10).is_err());
    }

    #[test]
    fn classify_examples() {
        let c0 = classify(&PureState::basis(vec![2, 2, 2], &[0, 0, 0]).unwrap()).unwrap();
        assert_eq!(c0.verdict, Verdict::FullySeparable);
        let f = c0.factors.unwrap();
        for v in f.factors() {
            assert_relative_eq!(v[0].re, 1.0, epsilon = 1e-14);
            assert!(v[1].norm() < 1e-14);
        }
        assert!(c0.factor_fidelity.unwrap() >= 1.0 - 1e-12);

        let g = classify(&ghz(3, 2).unwrap()).unwrap();
        assert_eq!(g.verdict, Verdict::GloballyEntangled);
        assert_eq!(g.ranks(), vec![2, 2, 2]);
        assert!(g.witness.is_none() && g.factors.is_none());

        let p = classify(&zero_bell()).unwrap();
        assert_eq!(p.verdict, Verdict::PartiallySeparable);
        assert_eq!(p.witness.as_ref().unwrap().to_string(), "{1}:{2,3}");
        assert_eq!(p.ranks(), vec![1, 2, 2]);
    }

    #[test]
    fn classify_rejects_bad_input() {
        let unnormalized = PureState::new(vec![2, 2], vec![c(1.0); 4]).unwrap();
        assert!(matches!(classify(&unnormalized), Err(Error::NotNormalized(_))));
        let big = PureState::basis(vec![2; 13], &[0; 13]).unwrap();
        assert!(classify(&big).unwrap_err().is_guard());
    }

    #[test]
    fn result1_examples() {
        let r = verify_result1(&w_state(3).unwrap()).unwrap();
        assert!(r.holds);
        assert_eq!(r.detail.verdict, Verdict::GloballyEntangled);
        assert_eq!(r.premise, SymmetryPremise::PermutationInvariant);

        let h = FRAC_1_SQRT_2;
        let plus = ProductState::new(vec![vec![c(h), c(h)]; 3]).unwrap();
        let r = verify_result1(&tensor_product(&plus).unwrap()).unwrap();
        assert!(r.holds);
        assert_eq!(r.detail.verdict, Verdict::FullySeparable);
        assert_eq!(r.factors_identical, Some(true));

        let omega = C64::from_polar(1.0, 2.0 * PI / 3.0);
        let mut a = vec![c(0.0); 8];
        a[1] = c(1.0);
        a[2] = omega;
        a[4] = omega * omega;
        let r = verify_result1(&PureState::normalized(vec![2, 2, 2], a).unwrap()).unwrap();
        assert!(r.holds);
        assert_eq!(r.detail.verdict, Verdict::GloballyEntangled);
        assert!(matches!(r.premise, SymmetryPremise::TranslationEigenstate { theta } if theta.abs() > 1.0));

        assert!(matches!(verify_result1(&zero_bell()), Err(Error::Premise(_))));
    }

    #[test]
    fn result2_examples() {
        let r = verify_result2(&ProductState::basis(&[2, 2, 2], &[0, 0, 0]).unwrap()).unwrap();
        assert!(r.holds && r.factors_identical);
        assert_eq!(r.verdict.verdict, Verdict::FullySeparable);

        let r = verify_result2(&ProductState::basis(&[2, 2], &[0, 1]).unwrap()).unwrap();
        assert!(r.holds && !r.factors_identical);
        assert_eq!(r.verdict.verdict, Verdict::GloballyEntangled);
        let expected = PureState::normalized(vec![2, 2], vec![c(0.0), c(1.0), c(1.0), c(0.0)]).unwrap();
        assert!(r.symmetrized.distance(&expected).unwrap() < 1e-14);
        assert_relative_eq!(r.norm_squared, 0.5, epsilon = 1e-15);

        let h = FRAC_1_SQRT_2;
        let phi = ProductState::new(vec![vec![c(1.0), c(0.0)], vec![c(h), c(h)], vec![c(0.0), c(1.0)]]).unwrap();
        let r = verify_result2(&phi).unwrap();
        assert!(r.holds);
        assert_eq!(r.verdict.verdict, Verdict::GloballyEntangled);
        assert_relative_eq!(r.permanent, 6.0 * r.norm_squared, epsilon = 1e-12);
    }

    #[test]
    fn crosscheck_examples() {
        let r = rdm_crosscheck(&ProductState::basis(&[2, 2], &[0, 0]).unwrap()).unwrap();
        assert!(r.max_deviation < 1e-14);
        assert_relative_eq!(r.spectral.eigenvalues[0], 2.0, epsilon = 1e-14);
        assert_eq!(r.spectral.eigenvalues[1], 0.0);
        assert_relative_eq!(r.direct_rdm.matrix()[(0, 0)].re, 1.0, epsilon = 1e-14);
        assert_relative_eq!(r.gram_rdm.matrix()[(0, 0)].re, 1.0, epsilon = 1e-14);

        let r = rdm_crosscheck(&ProductState::basis(&[2, 2], &[0, 1]).unwrap()).unwrap();
        let half = CMatrix::identity(2, 2).scale(0.5);
        assert!(crate::state::max_abs_diff(r.direct_rdm.matrix(), &half) < 1e-14);
        assert!(crate::state::max_abs_diff(r.gram_rdm.matrix(), &half) < 1e-14);

        let mut rng = crate::families::seeded_rng(3);
        let phi = crate::families::random_product(3, 2, &mut rng).unwrap();
        assert!(rdm_crosscheck(&phi).unwrap().max_deviation <= 1e-8);
    }
}
