//! Acceptance suite: one line per criterion, non-zero exit on any failure.

use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};
use std::process::Command;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use nctspin::rational_oracle::{build_rep, frobenius_residual, RationalTheta};
use nctspin::sample;
use nctspin::spectral::{self, ModeOperator, ModeSpinor};
use nctspin::spin_cover::{deformed_cover, embed_cover, group_gx, z2prime_fixed_check, CoverElement, SpinStructure};
use nctspin::splitting::{self, kappa};
use nctspin::{Monomial, ThetaMatrix, TorusElement};
use num_complex::Complex64;
use rand::Rng;

/// √2/6 = 0.2357…
const IRRATIONAL: f64 = SQRT_2 / 6.0;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

/// `u^m ⋆ u^n` computed from the cocycle definition, term by term.
fn naive_star(a: &TorusElement, b: &TorusElement) -> BTreeMap<Vec<i64>, Complex64> {
    let th = a.theta();
    let n = th.dim();
    let mut out: BTreeMap<Vec<i64>, Complex64> = BTreeMap::new();
    for (m, c) in a.terms() {
        for (k, d) in b.terms() {
            let mut arg = 0.0;
            for r in 0..n {
                for s in 0..r {
                    arg += th.get(r, s) * (m.0[r] * k.0[s]) as f64;
                }
            }
            let sum: Vec<i64> = m.0.iter().zip(&k.0).map(|(x, y)| x + y).collect();
            *out.entry(sum).or_default() += c * d * Complex64::cis(2.0 * PI * arg);
        }
    }
    out
}

fn map_diff(a: &TorusElement, b: &BTreeMap<Vec<i64>, Complex64>) -> f64 {
    let mut worst: f64 = 0.0;
    for (m, c) in b {
        worst = worst.max((a.coefficient(&Monomial(m.clone())) - c).norm());
    }
    for (m, c) in a.terms() {
        if !b.contains_key(&m.0) {
            worst = worst.max(c.norm());
        }
    }
    worst
}

/// Clock and shift written out by hand: `U e_k = ω^k e_k`, `V e_k = e_{k−1}`.
fn reference_clock_shift(p: i64, q: usize) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let omega = |k: i64| Complex64::cis(2.0 * PI * (p * k) as f64 / q as f64);
    let u = DMatrix::from_fn(q, q, |r, c| if r == c { omega(r as i64) } else { Complex64::default() });
    let v = DMatrix::from_fn(q, q, |r, c| {
        if c == (r + 1) % q {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::default()
        }
    });
    (u, v)
}

fn coprime(p: i64, q: i64) -> bool {
    let (mut a, mut b) = (p.abs(), q);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a == 1
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = sample::rng(1);
    let mut worst: f64 = 0.0;
    let mut generators: f64 = 0.0;
    let mut cases = 0;
    for q in [2i64, 3, 4, 5, 12] {
        for p in (1..q).filter(|&p| coprime(p, q)) {
            let t = RationalTheta::new(p, q as u64).unwrap();
            let rep = build_rep(t);
            let (u, v) = reference_clock_shift(p, q as usize);
            generators = generators.max(frobenius_residual(&rep.u, &u)).max(frobenius_residual(&rep.v, &v));
            let theta = t.theta();
            for _ in 0..100 {
                let a = sample::element(&mut rng, &theta, 20, 8);
                let b = sample::element(&mut rng, &theta, 20, 8);
                let ra = rep.represent(&a).unwrap();
                let rb = rep.represent(&b).unwrap();
                let ab = rep.represent(&a.star_product(&b).unwrap()).unwrap();
                worst = worst
                    .max(frobenius_residual(&ab, &(&ra * &rb)))
                    .max(frobenius_residual(&rep.represent(&a.involution()).unwrap(), &ra.adjoint()));
                cases += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-10 && generators <= 1e-12 && elapsed < Duration::from_secs(10),
        format!("{cases} pairs, max Frobenius residual {worst:.2e}, generator mismatch {generators:.1e}, {elapsed:.2?} (limit 10 s)"),
    )
}

fn criterion_2() -> Outcome {
    let mut rng = sample::rng(2);
    let mut assoc: f64 = 0.0;
    let mut anti: f64 = 0.0;
    let mut naive: f64 = 0.0;
    for n in [2usize, 3, 5] {
        for _ in 0..200 {
            let th = sample::theta(&mut rng, n);
            let a = sample::element(&mut rng, &th, 6, 4);
            let b = sample::element(&mut rng, &th, 6, 4);
            let c = sample::element(&mut rng, &th, 6, 4);
            let ab = a.star_product(&b).unwrap();
            let left = ab.star_product(&c).unwrap();
            let right = a.star_product(&b.star_product(&c).unwrap()).unwrap();
            assoc = assoc.max(left.max_abs_diff(&right).unwrap());
            let lhs = ab.involution();
            let rhs = b.involution().star_product(&a.involution()).unwrap();
            anti = anti.max(lhs.max_abs_diff(&rhs).unwrap());
            naive = naive.max(map_diff(&ab, &naive_star(&a, &b)));
        }
    }
    let worst = assoc.max(anti).max(naive);
    outcome(
        worst <= 1e-12,
        format!("associativity {assoc:.1e}, anti-homomorphism {anti:.1e}, cocycle oracle {naive:.1e} (tol 1e-12)"),
    )
}

fn criterion_3() -> Outcome {
    let mut rng = sample::rng(3);
    let mut hom: f64 = 0.0;
    let mut failures = Vec::new();
    let mut check = |th: &ThetaMatrix, spin: &SpinStructure, rng: &mut sample::SampleRng, failures: &mut Vec<String>| {
        let alg = deformed_cover(th, spin).unwrap();
        let n = th.dim();
        let x = spin.twist_set();
        for _ in 0..10 {
            let a = sample::element(rng, th, 5, 3);
            let b = sample::element(rng, th, 5, 3);
            let ea = embed_cover(&alg, &a).unwrap();
            let eb = embed_cover(&alg, &b).unwrap();
            let prod = embed_cover(&alg, &a.star_product(&b).unwrap()).unwrap();
            hom = hom
                .max(prod.max_abs_diff(&ea.star_product(&eb).unwrap()).unwrap())
                .max(embed_cover(&alg, &a.involution()).unwrap().max_abs_diff(&ea.involution()).unwrap());
            // image is fixed by every element of G_X
            if let CoverElement::Twisted(t) = &ea {
                for eps in alg.group() {
                    if t.sign_action(eps).unwrap() != *t {
                        failures.push(format!("G_X does not fix image for {:?}", spin.bits()));
                    }
                }
            }
            if !alg.contains(&ea) {
                failures.push(format!("image outside covering algebra for {:?}", spin.bits()));
            }
        }
        let tt = alg.theta_tilde();
        for k in 0..n {
            for l in 0..n {
                let divisor = match (spin.is_twisted(k), spin.is_twisted(l)) {
                    (false, false) => 1.0,
                    (true, true) => 4.0,
                    _ => 2.0,
                };
                if tt.get(k, l) != th.get(k, l) / divisor {
                    failures.push(format!("zone value at ({k},{l}) for {:?}", spin.bits()));
                }
            }
        }
        let expected = if x.is_empty() { 1 } else { 1 << (x.len() - 1) };
        if alg.group().len() != expected || group_gx(&x, n).len() != expected {
            failures.push(format!("|G_X| for {:?}", spin.bits()));
        }
        alg
    };
    let mut fixed_checks = 0;
    for spin in SpinStructure::all(2) {
        let th = ThetaMatrix::from_scalar(IRRATIONAL);
        let alg = check(&th, &spin, &mut rng, &mut failures);
        let r = z2prime_fixed_check(&alg, 6).unwrap();
        fixed_checks += 1;
        if !r.equal || r.fixed_dim != r.image_dim {
            failures.push(format!("Z2' fixed space differs from image for {:?}: {r:?}", spin.bits()));
        }
    }
    for _ in 0..50 {
        let n = rng.gen_range(2..=5);
        let th = sample::theta(&mut rng, n);
        let bits: Vec<u8> = (0..n).map(|_| rng.gen_range(0..=1)).collect();
        let spin = SpinStructure::new(bits).unwrap();
        check(&th, &spin, &mut rng, &mut failures);
    }
    outcome(
        hom <= 1e-12 && failures.is_empty(),
        format!(
            "*-homomorphism residual {hom:.1e}, {fixed_checks} fixed-point checks at cutoff 6, 54 (θ, X) cases, {} failures{}",
            failures.len(),
            failures.first().map(|f| format!(": {f}")).unwrap_or_default()
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut rng = sample::rng(4);
    let mut worst: f64 = 0.0;
    let mut applications = 0;
    for theta in [1.0 / 7.0, 1.0 / 3.0, IRRATIONAL] {
        let spins = SpinStructure::all(2);
        for i in 0..200 {
            let k = ModeOperator::random(&mut rng, 3, 5);
            let k2 = ModeOperator::random(&mut rng, 3, 5);
            let spin = &spins[i % 4];
            for _ in 0..20 {
                let psi = ModeSpinor::random(&mut rng, spin, 6, 5).unwrap();
                worst = worst.max(spectral::product_rule_residual(&k, &k2, theta, &psi));
                applications += 1;
            }
        }
    }
    outcome(
        worst <= 1e-12,
        format!("{applications} operator-pair/spinor applications, max residual {worst:.2e} (tol 1e-12)"),
    )
}

fn criterion_5() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for spin in SpinStructure::all(2) {
        let base = spectral::spectrum(&spin, 6.0).unwrap();
        let base_restricted = splitting::SpinorBimodule::new(&spin, 0.0)
            .unwrap()
            .restricted_spectrum(6.0, 1e-12)
            .unwrap();
        for theta in [0.0, 1.0 / 3.0, IRRATIONAL] {
            let r = spectral::axiom_suite(theta, &spin, 4, 1e-12).unwrap();
            worst = worst.max(r.max_residual());
            if !r.passed {
                failures.push(format!("axioms j={:?} θ={theta}", spin.bits()));
            }
            if spectral::spectrum(&spin, 6.0).unwrap() != base {
                failures.push(format!("spectrum changed j={:?} θ={theta}", spin.bits()));
            }
            let restricted = splitting::SpinorBimodule::new(&spin, theta)
                .unwrap()
                .restricted_spectrum(6.0, 1e-12)
                .unwrap();
            let bits = |v: &[(f64, usize)]| v.iter().map(|(e, m)| (e.to_bits(), *m)).collect::<Vec<_>>();
            if bits(&restricted) != bits(&base_restricted) {
                failures.push(format!("restricted spectrum changed j={:?} θ={theta}", spin.bits()));
            }
        }
    }
    outcome(
        failures.is_empty() && worst <= 1e-12,
        format!(
            "12 (j, θ) cases, max residual {worst:.2e} (tol 1e-12), {} failures{}",
            failures.len(),
            failures.first().map(|f| format!(": {f}")).unwrap_or_default()
        ),
    )
}

/// `2 · #{m : |m + j/2| ≤ Λ}` by direct enumeration.
fn brute_count(spin: &SpinStructure, cutoff: f64) -> usize {
    let j = spin.bits();
    let r = cutoff.ceil() as i64 + 1;
    let mut count = 0;
    for m1 in -r..=r {
        for m2 in -r..=r {
            let p1 = m1 as f64 + j[0] as f64 / 2.0;
            let p2 = m2 as f64 + j[1] as f64 / 2.0;
            if p1 * p1 + p2 * p2 <= cutoff * cutoff {
                count += 2;
            }
        }
    }
    count
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let expected_min = [0.0, 0.5, 0.5, SQRT_2 / 2.0];
    let expected_kernel = [2, 0, 0, 0];
    let mut worst_weyl: f64 = 0.0;
    for (i, spin) in [(0, 0), (1, 0), (0, 1), (1, 1)].into_iter().enumerate() {
        let spin = SpinStructure::pair(spin.0, spin.1).unwrap();
        let s = spectral::spectrum(&spin, 5.0).unwrap();
        if s.kernel_dim() != expected_kernel[i] {
            failures.push(format!("kernel j={:?}: {}", spin.bits(), s.kernel_dim()));
        }
        if s.min_abs() != Some(expected_min[i]) {
            failures.push(format!("min |λ| j={:?}: {:?}", spin.bits(), s.min_abs()));
        }
        let big = spectral::spectrum(&spin, 200.0).unwrap();
        let fast = spectral::eigenvalue_count(&spin, 200.0).unwrap();
        if big.total() != fast || fast != brute_count(&spin, 200.0) {
            failures.push(format!("count mismatch j={:?}", spin.bits()));
        }
        worst_weyl = worst_weyl.max((big.weyl_ratio() - 1.0).abs());
    }
    let elapsed = start.elapsed();
    let in_time = elapsed < Duration::from_secs(5);
    outcome(
        failures.is_empty() && worst_weyl <= 0.05 && in_time,
        format!(
            "kernel dims 2/0/0/0, min |λ| 0, 1/2, 1/2, √2/2; max |Weyl ratio − 1| at Λ=200 {worst_weyl:.2e}; {elapsed:.2?} (limit 5 s){}",
            failures.first().map(|f| format!("; failure: {f}")).unwrap_or_default()
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = sample::rng(7);
    let mut failures = Vec::new();
    let mut kappa_res: f64 = 0.0;
    for n in [2usize, 3] {
        let th = sample::theta(&mut rng, n);
        for _ in 0..100 {
            let a = sample::element(&mut rng, &th, 6, 4);
            let b = sample::element(&mut rng, &th, 6, 4);
            let lhs = kappa(&a.star_product(&b).unwrap());
            let rhs = kappa(&a).product(&kappa(&b)).unwrap();
            kappa_res = kappa_res.max(lhs.max_abs_diff(&rhs).unwrap());
        }
    }
    // surjection onto the fixed-point basis at cutoff 4
    let cutoff = 4;
    let basis = splitting::fixed_point_basis(2, cutoff);
    let side = 2 * cutoff + 1;
    let mut weight_zero = 0;
    for a1 in -cutoff..=cutoff {
        for a2 in -cutoff..=cutoff {
            for b1 in -cutoff..=cutoff {
                for b2 in -cutoff..=cutoff {
                    if a1 == b1 && a2 == b2 {
                        weight_zero += 1;
                    }
                }
            }
        }
    }
    if basis.len() != weight_zero || weight_zero != (side * side) as usize {
        failures.push(format!("fixed basis size {}", basis.len()));
    }
    let th = ThetaMatrix::from_scalar(IRRATIONAL);
    for (a, b) in &basis {
        let u = TorusElement::monomial(th.clone(), b.clone(), Complex64::new(1.0, 0.0)).unwrap();
        let image = kappa(&u);
        let hit = image.terms().next().map(|(k, c)| k == &(a.clone(), b.clone()) && *c == Complex64::new(1.0, 0.0));
        if image.len() != 1 || hit != Some(true) {
            failures.push(format!("basis element {a:?} not hit"));
        }
    }
    for spin in SpinStructure::all(2) {
        let r = splitting::spinor_bimodule_basis(&spin, IRRATIONAL, 4).unwrap().report;
        if !(r.free_left && r.free_right && r.partners_span && r.rank == 2) {
            failures.push(format!("bimodule not free of rank 2 for j={:?}", spin.bits()));
        }
        if !splitting::restricted_spectrum_matches(&spin, IRRATIONAL, 4.0, 1e-12).unwrap() {
            failures.push(format!("restricted spectrum mismatch j={:?}", spin.bits()));
        }
    }
    outcome(
        failures.is_empty() && kappa_res <= 1e-12,
        format!(
            "κ residual {kappa_res:.1e}, {} fixed basis elements hit, rank-2 freeness and D_θ spectrum for 4 spin structures{}",
            basis.len(),
            failures.first().map(|f| format!("; failure: {f}")).unwrap_or_default()
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut failures = Vec::new();
    for theta in [0.5, IRRATIONAL] {
        let r = splitting::puzzle_report(theta).unwrap();
        let a = Complex64::new(r.prescription_phase[0], r.prescription_phase[1]);
        let b = Complex64::new(r.trivial_double_phase[0], r.trivial_double_phase[1]);
        if (a - Complex64::cis(PI * theta)).norm() > 1e-12 || (b - Complex64::cis(2.0 * PI * theta)).norm() > 1e-12 {
            failures.push(format!("phases at θ={theta}: {a}, {b}"));
        }
        if !r.discrepancy {
            failures.push(format!("no discrepancy at θ={theta}"));
        }
    }
    let zero = splitting::puzzle_report(0.0).unwrap();
    if zero.discrepancy {
        failures.push("discrepancy at θ=0".into());
    }
    outcome(
        failures.is_empty(),
        format!(
            "θ=1/2: i vs −1; θ=√2/6 distinct subgroups; θ=0 coincide{}",
            failures.first().map(|f| format!("; failure: {f}")).unwrap_or_default()
        ),
    )
}

fn criterion_9() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_nctspin");
    let run = |args: &[&str]| Command::new(bin).args(args).env_remove("NCTSPIN_THREADS").output().unwrap();
    let mut failures = Vec::new();
    let repeatable: &[&[&str]] = &[
        &["spectrum", "--spin", "1", "1", "--lambda", "8"],
        &["verify", "--theta", "0.2357", "--spin", "0", "1", "--seed", "5"],
        &["cover", "--spin", "1", "0", "--theta", "0.3", "--seed", "5"],
        &["deform", "--theta", "0.3", "--seed", "5", "--trials", "50"],
        &["split", "--theta", "0.25", "--spin", "1", "1", "--cutoff", "3"],
        &["oracle-check", "--p", "1", "--q", "5", "--trials", "100", "--seed", "7"],
    ];
    for args in repeatable {
        let a = run(args);
        let b = run(args);
        if a.stdout != b.stdout || a.stdout.is_empty() || a.status.code() != Some(0) {
            failures.push(format!("{args:?} not reproducible or failed"));
        }
    }
    let invalid: &[(&[&str], &str)] = &[
        (&["verify", "--tol", "0"], "--tol"),
        (&["verify", "--cutoff", "-2"], "--cutoff"),
        (&["verify", "--spin", "2", "0"], "--spin"),
        (&["spectrum", "--lambda", "-3"], "--lambda"),
        (&["oracle-check", "--q", "0"], "--q"),
    ];
    for (args, field) in invalid {
        let o = run(args);
        let err = String::from_utf8_lossy(&o.stderr);
        if o.status.code() != Some(2) || !err.contains(field) {
            failures.push(format!("{args:?} gave {:?}: {err}", o.status.code()));
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{} commands byte-identical across runs, {} invalid configs exit 2 naming the field{}",
            repeatable.len(),
            invalid.len(),
            failures.first().map(|f| format!("; failure: {f}")).unwrap_or_default()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("oracle equivalence", criterion_1),
        ("star-product algebra laws", criterion_2),
        ("covering algebra suite", criterion_3),
        ("deformation product rule", criterion_4),
        ("spectral triple axioms", criterion_5),
        ("spin-structure spectral fingerprints", criterion_6),
        ("splitting and spinor bimodule", criterion_7),
        ("θ/2 puzzle demonstrator", criterion_8),
        ("CLI determinism and config errors", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("{status} [{}] {name}: {} [{:.2?}]", i + 1, o.detail, start.elapsed());
        if !o.passed {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
