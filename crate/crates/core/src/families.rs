//! Canonical and random state families.
//!
//! Random vectors are Haar distributed: normalized complex Gaussian samples
//! drawn from a seeded ChaCha8 generator, so a fixed seed reproduces the
//! same states on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::permutation::{increment_digits, Permutation};
use crate::state::{apply_party_permutation, tensor_product, ProductState, PureState, C64};
use crate::symmetry::antisymmetrize;
use crate::tol;

pub type StateRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> StateRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

/// Haar-random unit vector in `C^d`.
pub fn haar_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..d).map(|_| complex_gaussian(rng)).collect();
        let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > tol::ZERO_VECTOR {
            return v.into_iter().map(|a| a / norm).collect();
        }
    }
}

pub fn random_product<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<ProductState> {
    check_register(n, d)?;
    ProductState::new((0..n).map(|_| haar_vector(d, rng)).collect())
}

/// `|φ⟩^{⊗n}` for a Haar-random `φ`.
pub fn random_identical_product<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<ProductState> {
    check_register(n, d)?;
    let phi = haar_vector(d, rng);
    ProductState::new(vec![phi; n])
}

fn check_register(n: usize, d: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if d < 2 {
        return Err(Error::InvalidParameter("d must be at least 2".into()));
    }
    Ok(())
}

fn check_dense(n: usize, d: usize) -> Result<()> {
    check_register(n, d)?;
    crate::limits::check_state_size(&vec![d; n])
}

fn flat_index(digits: &[usize], d: usize) -> usize {
    digits.iter().fold(0, |acc, &p| acc * d + p)
}

/// `(1/√d) Σ_k |k k … k⟩`.
pub fn ghz(n: usize, d: usize) -> Result<PureState> {
    check_dense(n, d)?;
    let mut amps = vec![C64::new(0.0, 0.0); d.pow(n as u32)];
    for k in 0..d {
        amps[flat_index(&vec![k; n], d)] = C64::new(1.0, 0.0);
    }
    PureState::normalized(vec![d; n], amps)
}

/// Equal-weight superposition of all basis states with `k` parties in `|1⟩`
/// and the rest in `|0⟩`.
pub fn dicke(n: usize, d: usize, k: usize) -> Result<PureState> {
    check_dense(n, d)?;
    if k > n {
        return Err(Error::InvalidParameter(format!(
            "Dicke excitation count k = {k} exceeds n = {n}"
        )));
    }
    let mut occupation = vec![0usize; d];
    occupation[0] = n - k;
    occupation[1] = k;
    symmetric_basis_state(n, d, &occupation)
}

pub fn w_state(n: usize) -> Result<PureState> {
    dicke(n, 2, 1)
}

/// Normalized uniform superposition over the basis states whose digit
/// counts equal `occupation` (`occupation[j]` parties in `|j⟩`).
pub fn symmetric_basis_state(n: usize, d: usize, occupation: &[usize]) -> Result<PureState> {
    check_dense(n, d)?;
    if occupation.len() != d || occupation.iter().sum::<usize>() != n {
        return Err(Error::InvalidParameter(format!(
            "occupation {occupation:?} does not describe {n} parties of dimension {d}"
        )));
    }
    let total = d.pow(n as u32);
    let mut amps = vec![C64::new(0.0, 0.0); total];
    let mut digits = vec![0usize; n];
    let mut counts = vec![0usize; d];
    for a in amps.iter_mut() {
        counts.iter_mut().for_each(|c| *c = 0);
        digits.iter().for_each(|&p| counts[p] += 1);
        if counts == occupation {
            *a = C64::new(1.0, 0.0);
        }
        increment_digits(&mut digits, d);
    }
    PureState::normalized(vec![d; n], amps)
}

/// All occupation vectors of `n` parties over `d` levels, lexicographic.
pub fn occupations(n: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(remaining: usize, slots: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=remaining).rev() {
            prefix.push(k);
            rec(remaining - k, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if d > 0 {
        rec(n, d, &mut Vec::new(), &mut out);
    }
    out
}

/// Random superposition of the symmetric basis (for qubits, of Dicke states)
/// with complex Gaussian coefficients.
pub fn random_symmetric<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<PureState> {
    check_dense(n, d)?;
    let mut amps = vec![C64::new(0.0, 0.0); d.pow(n as u32)];
    for occ in occupations(n, d) {
        let coeff = complex_gaussian(rng);
        let basis = symmetric_basis_state(n, d, &occ)?;
        for (a, b) in amps.iter_mut().zip(basis.amplitudes()) {
            *a += coeff * b;
        }
    }
    PureState::normalized(vec![d; n], amps)
}

/// Normalized antisymmetrization of `|0⟩, |1⟩, …, |n−1⟩`.
pub fn slater(n: usize, d: usize) -> Result<PureState> {
    check_dense(n, d)?;
    if d < n {
        return Err(Error::InvalidParameter(format!(
            "a Slater determinant of {n} parties needs d >= n, got d = {d}"
        )));
    }
    let digits: Vec<usize> = (0..n).collect();
    antisymmetrize(&ProductState::basis(&vec![d; n], &digits)?)?.normalized()
}

/// `Σ_m e^{−imθ} T^m |b⟩` with `θ = 2πk/n` and `|b⟩` a Haar-random product,
/// normalized; it satisfies `T|ψ⟩ = e^{iθ}|ψ⟩`.
pub fn translation_eigenstate<R: Rng + ?Sized>(
    n: usize,
    d: usize,
    k: usize,
    rng: &mut R,
) -> Result<PureState> {
    check_dense(n, d)?;
    if n < 2 {
        return Err(Error::InvalidParameter("translation needs n >= 2".into()));
    }
    let theta = 2.0 * std::f64::consts::PI * (k % n) as f64 / n as f64;
    for _ in 0..16 {
        let seed = tensor_product(&random_product(n, d, rng)?)?;
        let mut amps = vec![C64::new(0.0, 0.0); seed.dimension()];
        for m in 0..n {
            let shifted = apply_party_permutation(&seed, &Permutation::cyclic_shift(n, m))?;
            let phase = C64::from_polar(1.0, -(m as f64) * theta);
            for (a, s) in amps.iter_mut().zip(shifted.amplitudes()) {
                *a += phase * s;
            }
        }
        if let Ok(psi) = PureState::normalized(vec![d; n], amps) {
            if psi.norm_squared() > 0.5 {
                return Ok(psi);
            }
        }
    }
    Err(Error::Numerical("could not build a nonzero translation eigenstate".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::{is_antisymmetric, is_permutation_invariant, translation_analyze};
    use approx::assert_relative_eq;

    #[test]
    fn ghz_amplitudes() {
        let g = ghz(3, 2).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_relative_eq!(g.amplitudes()[0].re, s, epsilon = 1e-15);
        assert_relative_eq!(g.amplitudes()[7].re, s, epsilon = 1e-15);
        assert_eq!(g.amplitudes().iter().filter(|a| a.norm() > 0.0).count(), 2);
    }

    #[test]
    fn dicke_one_is_w() {
        let w = dicke(3, 2, 1).unwrap();
        let third = (1.0f64 / 3.0).sqrt();
        for (i, a) in w.amplitudes().iter().enumerate() {
            let expected = if [1, 2, 4].contains(&i) { third } else { 0.0 };
            assert_relative_eq!(a.re, expected, epsilon = 1e-15);
        }
        assert!(dicke(3, 2, 4).is_err());
    }

    #[test]
    fn occupations_count() {
        assert_eq!(occupations(3, 2), vec![vec![3, 0], vec![2, 1], vec![1, 2], vec![0, 3]]);
        assert_eq!(occupations(4, 3).len(), 15);
    }

    #[test]
    fn generators_have_their_symmetry() {
        let mut rng = seeded_rng(7);
        let s = random_symmetric(4, 2, &mut rng).unwrap();
        assert!(is_permutation_invariant(&s, 1e-12).unwrap());
        let s = random_symmetric(3, 3, &mut rng).unwrap();
        assert!(is_permutation_invariant(&s, 1e-12).unwrap());
        assert!(is_antisymmetric(&slater(3, 4).unwrap(), 1e-12).unwrap());
        assert!(slater(3, 2).is_err());
        for k in 0..5 {
            let t = translation_eigenstate(5, 2, k, &mut rng).unwrap();
            let r = translation_analyze(&t).unwrap();
            assert!(r.is_eigenstate, "k = {k}: {r:?}");
            let expected = 2.0 * std::f64::consts::PI * k as f64 / 5.0;
            let diff = C64::from_polar(1.0, r.theta.unwrap()) - C64::from_polar(1.0, expected);
            assert!(diff.norm() < 1e-10);
        }
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        let a = random_product(4, 3, &mut seeded_rng(11)).unwrap();
        let b = random_product(4, 3, &mut seeded_rng(11)).unwrap();
        assert_eq!(a, b);
    }
}
