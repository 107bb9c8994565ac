//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. All comparisons are exact; only wall-clock budgets
//! carry a bound.

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use d21::algebra::{Parity, SuperAlgebra};
use d21::cohomology::{full_derivation_dims, h1, psi1_report, psi_regime, verify_psi};
use d21::enveloping::{target_weight_basis, weight_of_monomial, Character, HighestWeight, VermaModule};
use d21::scan::{all_triples, run_scan, valid_alphas, Method, ScanConfig, ScanRow};

/// Exact arithmetic: every numeric comparison below is equality.
const TOLERANCE: u32 = 0;

const MIN: Duration = Duration::from_secs(60);

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { ok: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { ok: false, detail: detail.into() }
}

fn within(o: Outcome, elapsed: Duration, budget: Duration) -> Outcome {
    if o.ok && elapsed > budget {
        fail(format!("{} but took {elapsed:.1?} (budget {budget:?})", o.detail))
    } else {
        Outcome { ok: o.ok, detail: format!("{} [{elapsed:.1?}]", o.detail) }
    }
}

fn algebra(p: u32, alpha: u32) -> SuperAlgebra {
    SuperAlgebra::new(p as u64, alpha as i64).unwrap()
}

fn random_lambdas(rng: &mut ChaCha8Rng, p: u32, n: usize) -> Vec<[i64; 3]> {
    (0..n).map(|_| std::array::from_fn(|_| rng.gen_range(0..p as i64))).collect()
}

/// Nonzero `(h1_even, h1_odd)` at `χ = 0`, keyed by `λ` mod `p`.
fn expected_nonzero(p: u32) -> BTreeMap<[u32; 3], (usize, usize)> {
    let r = |x: i64| x.rem_euclid(p as i64) as u32;
    [([2, -2, -2], (6, 0)), ([2, -2, 0], (1, 0)), ([2, 0, -2], (1, 0)), ([3, -3, -3], (0, 1))]
        .into_iter()
        .map(|(l, d)| (l.map(r), d))
        .collect()
}

fn criterion_1() -> Outcome {
    for p in [5, 7] {
        for alpha in valid_alphas(p) {
            let start = Instant::now();
            let report = algebra(p, alpha).check_axioms();
            let elapsed = start.elapsed();
            if !report.is_empty() {
                return fail(format!("p={p} α={alpha}: {} violations, first {}", report.violations.len(), report.violations[0]));
            }
            if elapsed > Duration::from_secs(1) {
                return fail(format!("p={p} α={alpha} took {elapsed:.1?}"));
            }
        }
    }
    pass("empty reports for p ∈ {5,7}, every valid α")
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let lambdas = random_lambdas(&mut rng, 5, 5);
    let mut checked = 0;
    for alpha in [1, 2, 3] {
        let alg = algebra(5, alpha);
        for chi in [[0, 0, 0], [1, 0, 0], [1, 1, 1]] {
            for &l in &lambdas {
                let m = VermaModule::from_params(&alg, l, chi);
                let v = m.check_axioms();
                if let Some(first) = v.first() {
                    return fail(format!("α={alpha} λ={l:?} χ={chi:?}: {} violations, first {first}", v.len()));
                }
                checked += 1;
            }
        }
    }
    pass(format!("{checked} modules, all identities exact"))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let alg = algebra(5, 2);
    let f = alg.field();
    for l in random_lambdas(&mut rng, 5, 5) {
        let m = VermaModule::from_params(&alg, l, [0, 0, 0]);
        let spaces = m.weight_spaces();
        if spaces.len() != 125 {
            return fail(format!("λ={l:?}: {} weight spaces", spaces.len()));
        }
        if let Some((w, idx)) = spaces.iter().find(|(_, v)| v.len() != 16) {
            return fail(format!("λ={l:?}: weight {w:?} has dimension {}", idx.len()));
        }
        let lambda = HighestWeight::new(l, f);
        for beta in spaces.keys() {
            let basis = target_weight_basis(beta, &lambda, f);
            for (t, mono) in &basis.entries {
                if weight_of_monomial(mono, &lambda, f) != *beta {
                    return fail(format!("λ={l:?} β={beta:?} θ={t}: wrong weight"));
                }
                let idx = m.index_of(mono);
                if m.weight_of_basis(idx) != *beta || !spaces[beta].contains(&idx) {
                    return fail(format!("λ={l:?} β={beta:?} θ={t}: not in the weight space"));
                }
            }
        }
    }
    pass("5 random λ: 125 weight spaces of dimension 16, w_β^θ of weight β")
}

fn scan_grid(p: u32, lemmas: bool) -> Vec<ScanRow> {
    let cfg = ScanConfig {
        p,
        alphas: valid_alphas(p),
        lambdas: all_triples(p),
        chis: vec![[0, 0, 0]],
        method: Method::Graded,
        lemmas,
    };
    run_scan(&cfg, jobs()).unwrap()
}

fn compare_scan(p: u32, rows: &[ScanRow]) -> Result<usize, String> {
    let expected = expected_nonzero(p);
    let want_rows = valid_alphas(p).len() * (p * p * p) as usize;
    if rows.len() != want_rows {
        return Err(format!("p={p}: {} rows, expected {want_rows}", rows.len()));
    }
    for r in rows {
        let want = expected.get(&r.lambda).copied().unwrap_or((0, 0));
        if (r.h1_even, r.h1_odd) != want {
            return Err(format!("p={p} α={} λ={:?}: got {:?}, expected {want:?}", r.alpha, r.lambda, (r.h1_even, r.h1_odd)));
        }
    }
    Ok(rows.iter().filter(|r| r.is_nonzero()).count())
}

/// Criteria 4 and 8 share one scan with the lemma checks switched on.
fn criteria_4_and_8() -> (Outcome, Outcome) {
    let mut scan_ok = Vec::new();
    let mut lemma_violations = 0;
    let mut first_violation = None;
    for (p, budget) in [(5, 5 * MIN), (7, 30 * MIN)] {
        let start = Instant::now();
        let rows = scan_grid(p, true);
        let elapsed = start.elapsed();
        for r in &rows {
            lemma_violations += r.lemma_violations.len();
            if first_violation.is_none() {
                first_violation = r.lemma_violations.first().map(|v| format!("p={p} α={} λ={:?}: {v}", r.alpha, r.lambda));
            }
        }
        let o = match compare_scan(p, &rows) {
            Ok(n) => pass(format!("p={p}: {n} nonzero rows, all as expected")),
            Err(e) => fail(e),
        };
        scan_ok.push(within(o, elapsed, budget));
    }
    let ok = scan_ok.iter().all(|o| o.ok);
    let detail = scan_ok.iter().map(|o| o.detail.as_str()).collect::<Vec<_>>().join("; ");
    let c4 = Outcome { ok, detail };
    let c8 = match first_violation {
        None => pass("no violations over the p=5 and p=7 grids"),
        Some(v) => fail(format!("{lemma_violations} violations, first {v}")),
    };
    (c4, c8)
}

fn criterion_5() -> Outcome {
    let cfg = ScanConfig {
        p: 5,
        alphas: vec![2],
        lambdas: all_triples(5),
        chis: vec![[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]],
        method: Method::Graded,
        lemmas: false,
    };
    let rows = run_scan(&cfg, jobs()).unwrap();
    match rows.iter().find(|r| r.is_nonzero()) {
        Some(r) => fail(format!("λ={:?} χ={:?}: {:?}", r.lambda, r.chi_f, (r.h1_even, r.h1_odd))),
        None => pass(format!("{} points, H¹ = (0,0) everywhere", rows.len())),
    }
}

fn criterion_6() -> Outcome {
    let alg = algebra(5, 2);
    let points: [([i64; 3], [i64; 3]); 6] = [
        ([2, 3, 3], [0, 0, 0]),
        ([3, 2, 2], [0, 0, 0]),
        ([2, 3, 0], [0, 0, 0]),
        ([1, 4, 0], [0, 0, 0]),
        ([1, 1, 1], [1, 0, 0]),
        ([2, 3, 3], [2, 0, 1]),
    ];
    for (l, chi) in points {
        let start = Instant::now();
        let m = VermaModule::from_params(&alg, l, chi);
        let graded = h1(&m).unwrap();
        for parity in Parity::BOTH {
            let full = full_derivation_dims(&m, parity).unwrap();
            let g = graded.dims(parity);
            if full.h1() != g.h1() {
                return fail(format!("λ={l:?} χ={chi:?} {parity}: full {} vs graded {}", full.h1(), g.h1()));
            }
            if full.der + g.ider0 != g.der0 + full.ider {
                return fail(format!("λ={l:?} χ={chi:?} {parity}: dim Der {} ≠ {} + {} − {}", full.der, g.der0, full.ider, g.ider0));
            }
        }
        if start.elapsed() > 20 * MIN {
            return fail(format!("λ={l:?} χ={chi:?} over budget"));
        }
    }
    pass(format!("{} points agree per parity, decomposition identity exact", points.len()))
}

fn criterion_7() -> Outcome {
    let mut checks = 0;
    for p in [5, 7] {
        for alpha in valid_alphas(p) {
            let alg = algebra(p, alpha);
            for which in 1..=4u8 {
                let (lambda, _) = psi_regime(which, p).unwrap();
                let m = VermaModule::new(&alg, HighestWeight(lambda), Character::ZERO);
                let n = if which == 1 { 5 } else { 1 };
                for i in 0..n {
                    let params: Vec<u32> = (0..n).map(|j| u32::from(i == j)).collect();
                    let v = match verify_psi(which, &params, &m) {
                        Ok(v) => v,
                        Err(e) => return fail(format!("p={p} α={alpha} ψ{which} {params:?}: {e}")),
                    };
                    if let Err(e) = v.outcome.map.verify(&m) {
                        return fail(format!("p={p} α={alpha} ψ{which} {params:?}: {e}"));
                    }
                    if !v.passed() {
                        return fail(format!("p={p} α={alpha} ψ{which} {params:?}: outer={} in_span={}", v.outer, v.in_h1_span));
                    }
                    checks += 1;
                }
            }
        }
    }
    let alg = algebra(5, 2);
    let (lambda, _) = psi_regime(1, 5).unwrap();
    let report = psi1_report(&VermaModule::new(&alg, HighestWeight(lambda), Character::ZERO)).unwrap();
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("psi1_report.json");
    let json = serde_json::to_string_pretty(&report).unwrap();
    if let Err(e) = std::fs::write(&path, &json) {
        return fail(format!("cannot write {}: {e}", path.display()));
    }
    if report.printed_parameters != 5 || report.h1_even != 6 || report.missing_dimension != 1 {
        return fail(format!("unexpected ψ₁ report {json}"));
    }
    pass(format!(
        "{checks} verifications; ψ₁ report: {} printed parameters vs dim {} ({})",
        report.printed_parameters,
        report.h1_even,
        path.display()
    ))
}

fn criterion_9() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_d21");
    let run = |jobs: &str| {
        Command::new(bin).args(["scan", "--p", "5", "--jobs", jobs]).output().expect("run d21")
    };
    let a = run("1");
    let b = run("4");
    if !a.status.success() || !b.status.success() {
        return fail(format!("exit statuses {} and {}", a.status, b.status));
    }
    if a.stdout != b.stdout {
        return fail("CSV differs between --jobs 1 and --jobs 4");
    }
    pass(format!("{} bytes identical for --jobs 1 and 4", a.stdout.len()))
}

fn timed(budget: Duration, f: fn() -> Outcome) -> Outcome {
    let start = Instant::now();
    let o = f();
    within(o, start.elapsed(), budget)
}

fn jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn main() -> ExitCode {
    println!("acceptance: exact arithmetic, tolerance {TOLERANCE}");
    let mut results: Vec<(u32, Outcome)> = Vec::new();
    results.push((1, timed(20 * Duration::from_secs(1), criterion_1)));
    results.push((2, timed(Duration::from_secs(30), criterion_2)));
    results.push((3, timed(Duration::from_secs(5), criterion_3)));
    let (c4, c8) = criteria_4_and_8();
    results.push((4, c4));
    results.push((5, timed(10 * MIN, criterion_5)));
    results.push((6, timed(6 * 20 * MIN, criterion_6)));
    results.push((7, timed(30 * MIN, criterion_7)));
    results.push((8, c8));
    results.push((9, timed(10 * MIN, criterion_9)));
    results.sort_by_key(|(n, _)| *n);
    let mut all = true;
    for (n, o) in &results {
        all &= o.ok;
        println!("criterion {n}: {} {}", if o.ok { "PASS" } else { "FAIL" }, o.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
