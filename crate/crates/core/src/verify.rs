//! Randomized property suites for the two exchange-symmetry theorems, the
//! permanent machinery and the mixed-state extensions.
//!
//! Each trial draws from its own generator seeded by `(seed, property,
//! trial)`, so trials run in parallel while the report stays identical for
//! a fixed seed.

use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::families::{
    complex_gaussian, dicke, haar_vector, random_identical_product, random_product,
    random_symmetric, seeded_rng, translation_eigenstate, StateRng,
};
use crate::mixed::{
    ensemble_to_density, symmetric_support_check, symmetrize_density, symmetrize_ensemble,
    verify_mixed_nonorthogonality, Ensemble, Member,
};
use crate::permanent::{gram_from_factors, marcus_bounds_check, permanent_naive, permanent_ryser, GramMatrix};
use crate::permutation::{factorial, Permutation};
use crate::separability::{classify, rdm_crosscheck, verify_result1, verify_result2, Classification, Verdict};
use crate::state::{max_abs_diff, tensor_product, CMatrix, ProductState, C64};
use crate::symmetry::{antisymmetrize, symmetrize};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Result1,
    Result2,
    Permanent,
    Mixed,
    All,
}

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::Result1 => "result1",
            Suite::Result2 => "result2",
            Suite::Permanent => "permanent",
            Suite::Mixed => "mixed",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "result1" => Ok(Suite::Result1),
            "result2" => Ok(Suite::Result2),
            "permanent" => Ok(Suite::Permanent),
            "mixed" => Ok(Suite::Mixed),
            "all" => Ok(Suite::All),
            other => Err(Error::InvalidParameter(format!("unknown suite {other:?}"))),
        }
    }
}

/// Which side of `bound` the per-trial metric must stay on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    AtMost(f64),
    AtLeast(f64),
}

impl Bound {
    fn satisfied(&self, v: f64) -> bool {
        match *self {
            Bound::AtMost(b) => v <= b,
            Bound::AtLeast(b) => v >= b,
        }
    }

    fn worse(&self, a: f64, b: f64) -> f64 {
        match self {
            Bound::AtMost(_) => a.max(b),
            Bound::AtLeast(_) => a.min(b),
        }
    }

    pub fn value(&self) -> f64 {
        match *self {
            Bound::AtMost(b) | Bound::AtLeast(b) => b,
        }
    }

    pub fn relation(&self) -> &'static str {
        match self {
            Bound::AtMost(_) => "<=",
            Bound::AtLeast(_) => ">=",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyOutcome {
    pub suite: &'static str,
    pub name: &'static str,
    /// What the metric measures.
    pub metric: &'static str,
    pub trials: usize,
    pub failures: usize,
    pub bound: Bound,
    /// Worst metric value seen, if any trial produced one.
    pub worst: Option<f64>,
    /// Distance from the worst value to the bound (negative on violation).
    pub margin: Option<f64>,
    pub first_failure: Option<String>,
}

impl PropertyOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub trials: usize,
    pub properties: Vec<PropertyOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(PropertyOutcome::passed)
    }
}

struct Trial {
    ok: bool,
    value: Option<f64>,
    note: Option<String>,
}

impl Trial {
    fn check(ok: bool, value: f64, note: impl FnOnce() -> String) -> Self {
        Self {
            ok,
            value: Some(value),
            note: (!ok).then(note),
        }
    }
}

fn mix(seed: u64, property: u64, trial: u64) -> u64 {
    // splitmix64 over the three inputs
    let mut z = seed
        .wrapping_add(property.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(trial.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

struct Property {
    suite: &'static str,
    name: &'static str,
    metric: &'static str,
    bound: Bound,
    run: fn(usize, &mut StateRng) -> Result<Trial>,
}

fn run_property(p: &Property, id: u64, trials: usize, seed: u64) -> PropertyOutcome {
    let results: Vec<Result<Trial>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = seeded_rng(mix(seed, id, t as u64));
            (p.run)(t, &mut rng)
        })
        .collect();
    let mut failures = 0;
    let mut worst: Option<f64> = None;
    let mut first_failure = None;
    for (t, r) in results.into_iter().enumerate() {
        let (ok, note) = match r {
            Ok(trial) => {
                let within = trial.value.is_none_or(|v| p.bound.satisfied(v));
                if let Some(v) = trial.value {
                    worst = Some(worst.map_or(v, |w| p.bound.worse(w, v)));
                }
                let note = trial
                    .note
                    .or_else(|| (!within).then(|| format!("metric {:?} out of bounds", trial.value)));
                (trial.ok && within, note)
            }
            Err(e) => (false, Some(e.to_string())),
        };
        if !ok {
            failures += 1;
            if first_failure.is_none() {
                first_failure = Some(format!("trial {t}: {}", note.unwrap_or_default()));
            }
        }
    }
    let margin = worst.map(|w| match p.bound {
        Bound::AtMost(b) => b - w,
        Bound::AtLeast(b) => w - b,
    });
    PropertyOutcome {
        suite: p.suite,
        name: p.name,
        metric: p.metric,
        trials,
        failures,
        bound: p.bound,
        worst,
        margin,
        first_failure,
    }
}

/// Smallest `s₂/s₁` over all cuts; at least the Schmidt cutoff when the
/// state is globally entangled.
pub fn min_schmidt_ratio(c: &Classification) -> f64 {
    c.evidence
        .iter()
        .map(|e| match e.singular_values.as_slice() {
            [s1, s2, ..] if *s1 > 0.0 => s2 / s1,
            _ => 0.0,
        })
        .fold(f64::INFINITY, f64::min)
}

fn expect_global(c: &Classification) -> Trial {
    Trial::check(c.verdict == Verdict::GloballyEntangled, min_schmidt_ratio(c), || {
        format!("verdict {} with ranks {:?}", c.verdict, c.ranks())
    })
}

fn dichotomy(t: usize, rng: &mut StateRng) -> Result<Trial> {
    let n = 3 + t % 4;
    let psi = match t % 4 {
        0 => random_symmetric(n, 2, rng)?,
        1 => symmetrize(&random_product(n, 2, rng)?)?.normalized()?,
        2 => dicke(n, 2, rng.random_range(0..=n))?,
        _ => tensor_product(&random_identical_product(n, 2, rng)?)?,
    };
    let r = verify_result1(&psi)?;
    let value = (r.detail.verdict == Verdict::GloballyEntangled).then(|| min_schmidt_ratio(&r.detail));
    Ok(Trial {
        ok: r.holds,
        value,
        note: (!r.holds).then(|| format!("verdict {} ranks {:?}", r.detail.verdict, r.detail.ranks())),
    })
}

fn antisymmetric(t: usize, rng: &mut StateRng) -> Result<Trial> {
    let n = 2 + t % 3;
    let d = n + (t / 3) % 3;
    let phi = random_product(n, d, rng)?;
    let s = antisymmetrize(&phi)?;
    if s.is_zero() {
        return Err(Error::Numerical("random Slater determinant vanished".into()));
    }
    Ok(expect_global(&classify(&s.normalized()?)?))
}

fn translation(t: usize, rng: &mut StateRng) -> Result<Trial> {
    let n = 3 + t % 3;
    let k = 1 + rng.random_range(0..n - 1);
    let psi = translation_eigenstate(n, 2, k, rng)?;
    let r = verify_result1(&psi)?;
    if !r.holds {
        return Ok(Trial::check(false, 0.0, || "dichotomy violated".into()));
    }
    Ok(expect_global(&r.detail))
}

fn symmetrized_products(t: usize, rng: &mut StateRng) -> Result<Trial> {
    let n = 3 + t % 3;
    let d = 2 + (t / 3) % 2;
    let phi = random_product(n, d, rng)?;
    let r = verify_result2(&phi)?;
    let scaled = r.norm_squared * factorial(n);
    Ok(Trial::check(
        r.holds && r.verdict.verdict == Verdict::GloballyEntangled,
        scaled,
        || format!("verdict {} identical {}", r.verdict.verdict, r.factors_identical),
    ))
}

fn identical_products(t: usize, rng: &mut StateRng) -> Result<Trial> {
    let n = 2 + t % 4;
    let d = 2 + (t / 4) % 2;
    let phi = random_identical_product(n, d, rng)?;
    let r = verify_result2(&phi)?;
    let infidelity = 1.0 - r.verdict.factor_fidelity.unwrap_or(0.0);
    Ok(Trial::check(
        r.holds && r.verdict.verdict == Verdict::FullySeparable,
        infidelity,
        || format!("verdict {}", r.verdict.verdict),
    ))
}

fn crosscheck(t: usize, rng: &mut StateRng) -> Result<Trial> {
    let n = 2 + t % 4;
    let d = 2 + (t / 4) % 2;
    let r = rdm_crosscheck(&random_product(n, d, rng)?)?;
    Ok(Trial::check(true, r.max_deviation, String::new))
}

fn random_matrix(n: usize, rng: &mut StateRng) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| complex_gaussian(rng))
}

fn ryser_vs_naive(t: usize, rng: &mut StateRng) -> Result<Trial> {
    let m = random_matrix(2 + t % 7, rng);
    let fast = permanent_ryser(&m)?;
    let slow = permanent_naive(&m)?;
    Ok(Trial::check(true, (fast - slow).norm() / slow.norm().max(1.0), String::new))
}

fn marcus(t: usize, rng: &mut StateRng) -> Result<Trial> {
    let n = 2 + t % 7;
    let (phi, expect) = match t % 10 {
        0 => {
            let digits: Vec<usize> = (0..n).collect();
            (ProductState::basis(&vec![n; n], &digits)?, Some(true))
        }
        5 => (random_identical_product(n, 2 + t % 3, rng)?, Some(false)),
        _ => (random_product(n, 2 + (t / 7) % 3, rng)?, None),
    };
    let r = marcus_bounds_check(&gram_from_factors(&phi)?)?;
    let tight = match expect {
        Some(true) => r.at_lower(),
        Some(false) => r.at_upper(),
        None => true,
    };
    Ok(Trial::check(r.holds() && tight, r.imag_residue, || {
        format!("perm {} for n = {n}", r.perm)
    }))
}

fn norm_identity(t: usize, rng: &mut StateRng) -> Result<Trial> {
    let n = 2 + t % 6;
    let d = 2 + (t / 6) % 2;
    let phi = random_product(n, d, rng)?;
    let sym = symmetrize(&phi)?;
    let perm = permanent_ryser(gram_from_factors(&phi)?.entries())?;
    Ok(Trial::check(true, (factorial(n) * sym.norm_squared - perm.re).abs(), String::new))
}

fn relabeling(t: usize, rng: &mut StateRng) -> Result<Trial> {
    let n = 2 + t % 7;
    let phi = random_product(n, 2 + t % 3, rng)?;
    let g = gram_from_factors(&phi)?;
    let mut images: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        images.swap(i, rng.random_range(0..=i));
    }
    let sigma = Permutation::from_images(images)?;
    let relabeled = GramMatrix::new(CMatrix::from_fn(n, n, |i, j| {
        g.entries()[(sigma.apply(i), sigma.apply(j))]
    }))?;
    let a = permanent_ryser(g.entries())?;
    let b = permanent_ryser(relabeled.entries())?;
    Ok(Trial::check(true, (a - b).norm() / a.norm().max(1.0), String::new))
}

fn random_weights(k: usize, rng: &mut StateRng) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| 0.05 + rng.random::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    let mut w: Vec<f64> = raw.iter().map(|x| x / total).collect();
    let rest: f64 = w[1..].iter().sum();
    w[0] = 1.0 - rest;
    w
}

fn random_certificate(t: usize, rng: &mut StateRng) -> Result<Ensemble> {
    let n = 2 + t % 3;
    let k = 1 + rng.random_range(0..4);
    let weights = random_weights(k, rng);
    let members = (0..k).map(|_| random_product(n, 2, rng)).collect::<Result<Vec<_>>>()?;
    Ensemble::from_products(weights, members)
}

fn nonorthogonality(t: usize, rng: &mut StateRng) -> Result<Trial> {
    let e = random_certificate(t, rng)?;
    let r = verify_mixed_nonorthogonality(&e)?;
    let dense = symmetric_support_check(&ensemble_to_density(&e)?)?;
    let agree = (dense.overlap - r.overlap).abs() <= 1e-9;
    Ok(Trial::check(r.holds && agree, r.overlap - r.floor, || {
        format!("overlap {} (dense {}) floor {}", r.overlap, dense.overlap, r.floor)
    }))
}

fn certificate(t: usize, rng: &mut StateRng) -> Result<Trial> {
    let s = symmetrize_ensemble(&random_certificate(t, rng)?)?;
    match s.reconstruction_error {
        Some(err) => Ok(Trial::check(true, err, String::new)),
        None => Ok(Trial::check(false, f64::NAN, || "no certificate emitted".into())),
    }
}

fn idempotence(t: usize, rng: &mut StateRng) -> Result<Trial> {
    let n = 2 + t % 3;
    let k = 1 + rng.random_range(0..3);
    let weights = random_weights(k, rng);
    let members = (0..k)
        .map(|_| {
            let amps: Vec<C64> = haar_vector(1 << n, rng);
            crate::state::PureState::new(vec![2; n], amps).map(Member::Pure)
        })
        .collect::<Result<Vec<_>>>()?;
    let rho = ensemble_to_density(&Ensemble::new(weights, members)?)?;
    let once = symmetrize_density(&rho)?;
    let twice = symmetrize_density(&once)?;
    let dev = max_abs_diff(once.matrix(), twice.matrix()).max((once.trace().re - 1.0).abs());
    Ok(Trial::check(true, dev, String::new))
}

fn symmetric_mixture(t: usize, rng: &mut StateRng) -> Result<Trial> {
    let n = 2 + t % 3;
    let k = 1 + rng.random_range(0..3);
    let weights = random_weights(k, rng);
    let members = (0..k)
        .map(|_| random_symmetric(n, 2, rng).map(Member::Pure))
        .collect::<Result<Vec<_>>>()?;
    let r = symmetric_support_check(&ensemble_to_density(&Ensemble::new(weights, members)?)?)?;
    Ok(Trial::check(r.in_subspace, r.deviation, || "support leaks out of the symmetric subspace".into()))
}

const PROPERTIES: &[Property] = &[
    Property { suite: "result1", name: "symmetric_dichotomy", metric: "min s2/s1 over cuts of entangled cases", bound: Bound::AtLeast(tol::SCHMIDT_REL), run: dichotomy },
    Property { suite: "result1", name: "antisymmetric_global", metric: "min s2/s1 over cuts", bound: Bound::AtLeast(tol::SCHMIDT_REL), run: antisymmetric },
    Property { suite: "result1", name: "translation_global", metric: "min s2/s1 over cuts", bound: Bound::AtLeast(tol::SCHMIDT_REL), run: translation },
    Property { suite: "result2", name: "symmetrized_product_global", metric: "n! * norm_squared", bound: Bound::AtLeast(1.0 - 1e-9), run: symmetrized_products },
    Property { suite: "result2", name: "identical_factors_separable", metric: "1 - factor fidelity", bound: Bound::AtMost(1e-8), run: identical_products },
    Property { suite: "result2", name: "rdm_crosscheck", metric: "max |direct - gram| elementwise", bound: Bound::AtMost(1e-8), run: crosscheck },
    Property { suite: "permanent", name: "ryser_matches_naive", metric: "|ryser - naive| / max(1, |naive|)", bound: Bound::AtMost(1e-10), run: ryser_vs_naive },
    Property { suite: "permanent", name: "marcus_bounds", metric: "|Im perm|", bound: Bound::AtMost(1e-9), run: marcus },
    Property { suite: "permanent", name: "norm_identity", metric: "|n! * norm_squared - perm|", bound: Bound::AtMost(1e-9), run: norm_identity },
    Property { suite: "permanent", name: "relabeling_invariance", metric: "relative permanent change", bound: Bound::AtMost(1e-10), run: relabeling },
    Property { suite: "mixed", name: "nonorthogonality", metric: "overlap - min(p)/n!", bound: Bound::AtLeast(-1e-9), run: nonorthogonality },
    Property { suite: "mixed", name: "certificate_preservation", metric: "max reconstruction error", bound: Bound::AtMost(1e-9), run: certificate },
    Property { suite: "mixed", name: "symmetrize_density_idempotent", metric: "max |S(S(rho)) - S(rho)|, |tr - 1|", bound: Bound::AtMost(1e-9), run: idempotence },
    Property { suite: "mixed", name: "symmetric_mixture_support", metric: "max |P rho P - rho|", bound: Bound::AtMost(1e-8), run: symmetric_mixture },
];

/// Run every property of `suite` with `trials` randomized trials each.
pub fn run_suite(suite: Suite, trials: usize, seed: u64) -> SuiteReport {
    let properties = PROPERTIES
        .iter()
        .enumerate()
        .filter(|(_, p)| suite == Suite::All || p.suite == suite.name())
        .map(|(id, p)| run_property(p, id as u64, trials, seed))
        .collect();
    SuiteReport {
        suite,
        seed,
        trials,
        properties,
    }
}
