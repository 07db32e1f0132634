//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero on any failure.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;
use serde_json::Value;

use symsep::families::{
    complex_gaussian, random_identical_product, random_product, random_symmetric, seeded_rng,
    translation_eigenstate, StateRng,
};
use symsep::mixed::{
    ensemble_to_density, symmetric_support_check, symmetrize_ensemble, verify_mixed_nonorthogonality,
};
use symsep::permanent::{gram_from_factors, marcus_bounds_check, permanent_naive, permanent_ryser};
use symsep::permutation::factorial;
use symsep::separability::{classify, rdm_crosscheck, verify_result2, Verdict};
use symsep::state::{tensor_product, vec_inner, CMatrix};
use symsep::symmetry::{antisymmetrize, symmetrize, translation_analyze};
use symsep::{Ensemble, ProductState, C64};

type Outcome = Result<String, String>;

struct Runner {
    failed: usize,
}

impl Runner {
    fn run(&mut self, id: u32, title: &str, budget: Duration, check: impl FnOnce() -> Outcome) {
        let started = Instant::now();
        let outcome = check();
        let elapsed = started.elapsed();
        let (ok, detail) = match outcome {
            Ok(_) if elapsed > budget => (false, "over time budget".to_string()),
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        let status = if ok { "PASS" } else { "FAIL" };
        println!(
            "{status} criterion {id:>2}: {title} | {detail} | {:.2}s (budget {}s)",
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
        if !ok {
            self.failed += 1;
        }
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: symsep::Error) -> String {
    e.to_string()
}

fn orthonormal_factors(n: usize, d: usize, rng: &mut StateRng) -> ProductState {
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(n);
    while basis.len() < n {
        let mut v: Vec<C64> = (0..d).map(|_| complex_gaussian(rng)).collect();
        for b in &basis {
            let c = vec_inner(b, &v);
            for (x, y) in v.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            basis.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    ProductState::from_unnormalized(basis).unwrap()
}

fn permanent_oracle() -> Outcome {
    let mut rng = seeded_rng(1001);
    let mut worst = 0.0f64;
    for i in 0..500 {
        let n = 2 + i % 7;
        let m = CMatrix::from_fn(n, n, |_, _| complex_gaussian(&mut rng));
        let fast = permanent_ryser(&m).map_err(err)?;
        let slow = permanent_naive(&m).map_err(err)?;
        let rel = (fast - slow).norm() / slow.norm().max(1.0);
        worst = worst.max(rel);
        ensure(rel <= 1e-10, || format!("matrix {i} (n = {n}): relative deviation {rel:e}"))?;
    }
    Ok(format!("500 matrices, worst relative deviation {worst:.3e}"))
}

fn marcus() -> Outcome {
    let mut rng = seeded_rng(1002);
    let mut worst_imag = 0.0f64;
    for i in 0..1000 {
        let n = 2 + i % 7;
        let d = 2 + (i / 7) % 3;
        let g = gram_from_factors(&random_product(n, d, &mut rng).map_err(err)?).map_err(err)?;
        let p = permanent_ryser(g.entries()).map_err(err)?;
        worst_imag = worst_imag.max(p.im.abs());
        let upper = factorial(n) * (1.0 + 1e-6);
        ensure(p.im.abs() <= 1e-9, || format!("gram {i}: imaginary part {:e}", p.im))?;
        ensure(p.re >= 1.0 - 1e-9 && p.re <= upper, || format!("gram {i}: perm {} outside [1, {n}!]", p.re))?;
        let r = marcus_bounds_check(&g).map_err(err)?;
        ensure(r.holds(), || format!("gram {i}: bounds report disagrees"))?;
    }
    let mut equality = 0;
    for n in 2..=8 {
        for rep in 0..5 {
            let ortho = orthonormal_factors(n, n + rep % 2, &mut rng);
            let p = permanent_ryser(gram_from_factors(&ortho).map_err(err)?.entries()).map_err(err)?;
            ensure((p.re - 1.0).abs() <= 1e-9 && p.im.abs() <= 1e-9, || {
                format!("orthonormal n = {n}: perm {p}")
            })?;
            let same = random_identical_product(n, 2 + rep % 3, &mut rng).map_err(err)?;
            let p = permanent_ryser(gram_from_factors(&same).map_err(err)?.entries()).map_err(err)?;
            let nf = factorial(n);
            ensure((p.re - nf).abs() <= 1e-6 * nf, || format!("identical n = {n}: perm {p}"))?;
            equality += 2;
        }
    }
    Ok(format!("1000 Grams, worst |Im| {worst_imag:.3e}; {equality} equality cases tight"))
}

fn norm_identity() -> Outcome {
    let mut rng = seeded_rng(1003);
    let mut worst = 0.0f64;
    for i in 0..300 {
        let n = 2 + i % 6;
        let d = 2 + (i / 6) % 2;
        let phi = random_product(n, d, &mut rng).map_err(err)?;
        let s = symmetrize(&phi).map_err(err)?;
        let perm = permanent_ryser(gram_from_factors(&phi).map_err(err)?.entries()).map_err(err)?;
        let dev = (factorial(n) * s.norm_squared - perm.re).abs();
        worst = worst.max(dev);
        ensure(dev <= 1e-9, || format!("state {i} (n = {n}, d = {d}): deviation {dev:e}"))?;
    }
    Ok(format!("300 products, worst |n! norm^2 - perm| {worst:.3e}"))
}

fn dichotomy() -> Outcome {
    let mut rng = seeded_rng(1004);
    let (mut global, mut separable) = (0, 0);
    for i in 0..500 {
        let n = 3 + i % 4;
        let psi = match i % 5 {
            0 | 1 => random_symmetric(n, 2, &mut rng),
            2 | 3 => symmetrize(&random_product(n, 2, &mut rng).map_err(err)?)
                .and_then(|s| s.normalized()),
            _ => tensor_product(&random_identical_product(n, 2, &mut rng).map_err(err)?),
        }
        .map_err(err)?;
        let c = classify(&psi).map_err(err)?;
        match c.verdict {
            Verdict::PartiallySeparable => {
                return Err(format!("state {i} (n = {n}) partially separable, ranks {:?}", c.ranks()))
            }
            Verdict::GloballyEntangled => global += 1,
            Verdict::FullySeparable => {
                separable += 1;
                let f = c.factors.as_ref().ok_or("missing factors")?;
                for a in f.factors() {
                    for b in f.factors() {
                        let o = vec_inner(a, b).norm();
                        ensure(o >= 1.0 - 1e-9, || format!("state {i}: factor overlap {o}"))?;
                    }
                }
            }
        }
    }
    ensure(separable > 0, || "no fully separable case exercised".into())?;
    Ok(format!("500 states: {global} globally entangled, {separable} fully separable, 0 partial"))
}

fn slater_global() -> Outcome {
    let mut rng = seeded_rng(1005);
    let mut count = 0;
    for n in 2..=3 {
        for d in n..=n + 2 {
            let mut products = Vec::new();
            for digits in combinations(d, n) {
                products.push(ProductState::basis(&vec![d; n], &digits).map_err(err)?);
            }
            for _ in 0..20 {
                products.push(random_product(n, d, &mut rng).map_err(err)?);
            }
            for phi in products {
                let s = antisymmetrize(&phi).map_err(err)?;
                if s.is_zero() {
                    continue;
                }
                let c = classify(&s.normalized().map_err(err)?).map_err(err)?;
                ensure(c.ranks().iter().all(|&r| r >= 2), || {
                    format!("n = {n}, d = {d}: ranks {:?}", c.ranks())
                })?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} Slater states, every cut rank >= 2"))
}

fn combinations(d: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(start: usize, d: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for x in start..d {
            cur.push(x);
            rec(x + 1, d, n, cur, out);
            cur.pop();
        }
    }
    rec(0, d, n, &mut cur, &mut out);
    out
}

fn translation() -> Outcome {
    let mut rng = seeded_rng(1006);
    for i in 0..100 {
        let n = 3 + i % 3;
        let k = 1 + rng.random_range(0..n - 1);
        let psi = translation_eigenstate(n, 2, k, &mut rng).map_err(err)?;
        let t = translation_analyze(&psi).map_err(err)?;
        let theta = t.theta.ok_or_else(|| format!("state {i} is not a translation eigenstate"))?;
        ensure(theta.abs() > 1e-6, || format!("state {i}: theta = 0"))?;
        let c = classify(&psi).map_err(err)?;
        ensure(c.verdict == Verdict::GloballyEntangled, || {
            format!("state {i} (n = {n}, k = {k}): {}", c.verdict)
        })?;
    }
    Ok("100 eigenstates with theta != 0, all globally entangled".into())
}

fn result2() -> Outcome {
    let mut rng = seeded_rng(1007);
    let mut min_scaled = f64::INFINITY;
    for i in 0..200 {
        let n = 3 + i % 3;
        let phi = random_product(n, 2 + (i / 3) % 2, &mut rng).map_err(err)?;
        let f = phi.factors();
        let nonparallel = (0..n).any(|a| (a + 1..n).any(|b| vec_inner(&f[a], &f[b]).norm() < 1.0 - 1e-9));
        ensure(nonparallel, || format!("product {i} has parallel factors"))?;
        let r = verify_result2(&phi).map_err(err)?;
        ensure(r.norm_squared >= 1.0 / factorial(n) - 1e-9, || {
            format!("product {i}: norm_squared {}", r.norm_squared)
        })?;
        ensure(r.verdict.verdict == Verdict::GloballyEntangled, || {
            format!("product {i}: {}", r.verdict.verdict)
        })?;
        min_scaled = min_scaled.min(r.norm_squared * factorial(n));
    }
    for i in 0..50 {
        let n = 3 + i % 3;
        let phi = random_identical_product(n, 2 + i % 2, &mut rng).map_err(err)?;
        let r = verify_result2(&phi).map_err(err)?;
        ensure(r.verdict.verdict == Verdict::FullySeparable, || {
            format!("identical product {i}: {}", r.verdict.verdict)
        })?;
    }
    Ok(format!("200 globally entangled (min n! norm^2 {min_scaled:.4}), 50 fully separable"))
}

fn rdm() -> Outcome {
    let mut rng = seeded_rng(1008);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let n = 2 + i % 4;
        let r = rdm_crosscheck(&random_product(n, 2 + (i / 4) % 2, &mut rng).map_err(err)?).map_err(err)?;
        worst = worst.max(r.max_deviation);
        ensure(r.max_deviation <= 1e-8, || format!("product {i}: deviation {:e}", r.max_deviation))?;
    }
    Ok(format!("100 products, worst elementwise deviation {worst:.3e}"))
}

fn random_certificate(i: usize, rng: &mut StateRng) -> Result<Ensemble, String> {
    let n = 2 + i % 3;
    let k = 1 + rng.random_range(0..4);
    let raw: Vec<f64> = (0..k).map(|_| 0.05 + rng.random::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    let mut weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
    weights[0] = 1.0 - weights[1..].iter().sum::<f64>();
    let members = (0..k)
        .map(|_| random_product(n, 2, rng))
        .collect::<symsep::Result<Vec<_>>>()
        .map_err(err)?;
    Ensemble::from_products(weights, members).map_err(err)
}

fn nonorthogonality() -> Outcome {
    let mut rng = seeded_rng(1009);
    let mut min_slack = f64::INFINITY;
    for i in 0..200 {
        let e = random_certificate(i, &mut rng)?;
        let r = verify_mixed_nonorthogonality(&e).map_err(err)?;
        let dense = symmetric_support_check(&ensemble_to_density(&e).map_err(err)?).map_err(err)?;
        let n = e.dims().len();
        let floor = e.weights().iter().cloned().fold(f64::INFINITY, f64::min) / factorial(n);
        ensure(dense.overlap >= floor - 1e-9, || {
            format!("ensemble {i}: Tr(rho P) = {} < {floor}", dense.overlap)
        })?;
        ensure(r.holds && (r.overlap - dense.overlap).abs() <= 1e-9, || {
            format!("ensemble {i}: certificate overlap {} vs dense {}", r.overlap, dense.overlap)
        })?;
        min_slack = min_slack.min(dense.overlap - floor);
    }
    Ok(format!("200 ensembles, min Tr(rho P) - floor {min_slack:.3e}"))
}

fn certificate() -> Outcome {
    let mut rng = seeded_rng(1010);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let s = symmetrize_ensemble(&random_certificate(i, &mut rng)?).map_err(err)?;
        let e = s.reconstruction_error.ok_or_else(|| format!("ensemble {i}: no certificate"))?;
        worst = worst.max(e);
        ensure(e <= 1e-9, || format!("ensemble {i}: reconstruction error {e:e}"))?;
    }
    Ok(format!("100 certificates, worst reconstruction error {worst:.3e}"))
}

fn strip_timing(stdout: &[u8]) -> Result<String, String> {
    let mut v: Value = serde_json::from_slice(stdout).map_err(|e| e.to_string())?;
    v.as_object_mut().ok_or("report is not an object")?.remove("timing");
    Ok(symsep::statefile::to_canonical_json(&v))
}

fn cli_determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_symsep"))
            .args(["verify", "--suite", "all", "--seed", "42", "--json"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.code() == Some(0) && b.status.code() == Some(0), || {
        format!("exit codes {:?} and {:?}", a.status.code(), b.status.code())
    })?;
    let (sa, sb) = (strip_timing(&a.stdout)?, strip_timing(&b.stdout)?);
    ensure(sa == sb, || "reports differ outside the timing field".into())?;
    let raw = |o: &[u8]| String::from_utf8_lossy(o).lines().filter(|l| !l.contains("elapsed_ms")).collect::<Vec<_>>().join("\n");
    ensure(raw(&a.stdout) == raw(&b.stdout), || "raw output differs outside timing".into())?;
    Ok(format!("two runs identical modulo timing ({} bytes), exit 0", sa.len()))
}

fn main() {
    let mut r = Runner { failed: 0 };
    let s = Duration::from_secs;
    r.run(1, "permanent oracle equivalence", s(10), permanent_oracle);
    r.run(2, "Marcus bounds and equality cases", s(30), marcus);
    r.run(3, "norm identity", s(60), norm_identity);
    r.run(4, "symmetric dichotomy", s(300), dichotomy);
    r.run(5, "antisymmetric global entanglement", s(30), slater_global);
    r.run(6, "translation eigenstates", s(60), translation);
    r.run(7, "symmetrized products", s(180), result2);
    r.run(8, "RDM cross-check", s(60), rdm);
    r.run(9, "mixed non-orthogonality", s(60), nonorthogonality);
    r.run(10, "certificate preservation", s(60), certificate);
    r.run(11, "CLI determinism", s(120), cli_determinism);
    if r.failed > 0 {
        println!("{} criteria failed", r.failed);
        std::process::exit(1);
    }
    println!("all 11 criteria passed");
}
