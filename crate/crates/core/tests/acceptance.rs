//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Every comparison is exact.

use std::process::{Command, ExitCode};
use std::time::Instant;

use bethe_weights::multiset::PiMultiset;
use bethe_weights::verify::{run, Check, RunConfig};

type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

struct Outcome {
    records: usize,
    failures: Vec<String>,
}

fn sweep(
    checks: &[Check],
    ranks: &[usize],
    factors: &[usize],
    patterns: &dyn Fn(usize) -> Vec<Option<Vec<usize>>>,
    seed: u64,
    trials: usize,
) -> Outcome {
    let mut out = Outcome { records: 0, failures: Vec::new() };
    for &n in ranks {
        for &f in factors {
            for pattern in patterns(n) {
                let config = RunConfig {
                    n: Some(n),
                    factors: Some(f),
                    pattern,
                    seeds: vec![seed],
                    trials,
                    checks: checks.to_vec(),
                    timings: false,
                };
                match run(&config) {
                    Ok(report) => {
                        out.records += report.records.len();
                        for r in report.records.iter().filter(|r| !r.pass) {
                            out.failures.push(format!("{} {:?} seed={} {:?}", r.check, r.params, r.seed, r.witness));
                        }
                    }
                    Err(e) => out.failures.push(format!("N={n} factors={f}: {e}")),
                }
            }
        }
    }
    out
}

fn no_pattern(_: usize) -> Vec<Option<Vec<usize>>> {
    vec![None]
}

fn all_patterns_up_to(max: usize) -> impl Fn(usize) -> Vec<Option<Vec<usize>>> {
    move |n| (0..=max).flat_map(|len| PiMultiset::all_patterns(n, len)).map(|p| Some(p.colours().to_vec())).collect()
}

/// Sorted patterns with every colour at most twice and at most three elements.
fn symmetry_patterns(n: usize) -> Vec<Option<Vec<usize>>> {
    (1..=3)
        .flat_map(|len| PiMultiset::all_patterns(n, len))
        .filter(|p| p.colours().windows(2).all(|w| w[0] <= w[1]))
        .filter(|p| p.counts(n).iter().all(|&c| c <= 2))
        .map(|p| Some(p.colours().to_vec()))
        .collect()
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_bethe-verify");
    let args = ["run", "--trials", "2", "--seed", "17", "--seed", "4", "--emit", "machine"];
    let a = Command::new(bin).args(args).output();
    let b = Command::new(bin).args(args).output();
    let mut failures = Vec::new();
    let records = match (a, b) {
        (Ok(a), Ok(b)) => {
            if !a.status.success() {
                failures.push(format!("first run exited with {}", a.status));
            }
            if a.stdout != b.stdout {
                failures.push("machine reports differ between runs".into());
            }
            if a.stdout.is_empty() {
                failures.push("empty report".into());
            }
            serde_json::from_slice::<serde_json::Value>(&a.stdout)
                .ok()
                .and_then(|v| v["records"].as_array().map(Vec::len))
                .unwrap_or(0)
        }
        (a, b) => {
            failures.push(format!("could not launch: {:?} {:?}", a.err(), b.err()));
            0
        }
    };
    Outcome { records, failures }
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        (
            "Yang-Baxter and inversion, N in {2,3,4}, 20 samples",
            Box::new(|| sweep(&[Check::YangBaxter, Check::Inversion], &[2, 3, 4], &[0], &no_pattern, 1000, 20)),
        ),
        (
            "RLL relations (++, --, +-), N in {2,3}, 1-2 factors, 10 samples",
            Box::new(|| sweep(&[Check::Rll], &[2, 3], &[1, 2], &no_pattern, 2000, 10)),
        ),
        (
            "singular vector triangularity and weights, N <= 4, factors <= 3",
            Box::new(|| sweep(&[Check::Triangularity], &[2, 3, 4], &[0, 1, 2, 3], &no_pattern, 3000, 3)),
        ),
        (
            "Gauss reconstruction and K_i v = Lambda_i v, N <= 4, factors <= 3",
            Box::new(|| sweep(&[Check::GaussReconstruct], &[2, 3, 4], &[1, 2, 3], &no_pattern, 4000, 3)),
        ),
        (
            "screening identity, N in {3,4}, 1-2 factors, 5 samples",
            Box::new(|| sweep(&[Check::Screening], &[3, 4], &[1, 2], &no_pattern, 5000, 5)),
        ),
        (
            "monodromy variants, exchange identity, same-colour symmetry, n_a <= 2, M <= 3",
            Box::new(|| sweep(&[Check::Symmetry], &[2, 3], &[1, 2], &symmetry_patterns, 6000, 3)),
        ),
        (
            "partial-operator recurrence and staircase projection, N <= 4, k <= 3, factors <= 3, 5 samples",
            Box::new(|| sweep(&[Check::ReR1, Check::ReR2Ind1], &[2, 3, 4], &[1, 2, 3], &no_pattern, 7000, 5)),
        ),
        (
            "comultiplication for w_B and w_P on V1 x V2, |I| <= 3, and modify/unmodify roundtrip",
            Box::new(|| {
                sweep(&[Check::Coproduct, Check::ModifyRoundtrip], &[2, 3], &[2], &all_patterns_up_to(3), 8000, 3)
            }),
        ),
        (
            "q-symmetry of both collections under all reorderings, |I| <= 3",
            Box::new(|| sweep(&[Check::PullbackQsym], &[2, 3], &[1, 2], &all_patterns_up_to(3), 9000, 3)),
        ),
        (
            "w_P = w_B, N in {2,3}, 1-3 factors, all patterns |I| <= 3, 10 samples",
            Box::new(|| sweep(&[Check::MainTheorem], &[2, 3], &[1, 2, 3], &all_patterns_up_to(3), 10000, 10)),
        ),
        ("byte-identical machine reports for identical configs", Box::new(determinism)),
    ];

    let mut failed = 0;
    for (k, (label, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let ok = outcome.failures.is_empty() && outcome.records > 0;
        println!(
            "criterion {:>2} [{}] {} ({} records, {:.1}s)",
            k + 1,
            if ok { "PASS" } else { "FAIL" },
            label,
            outcome.records,
            start.elapsed().as_secs_f64()
        );
        for msg in outcome.failures.iter().take(5) {
            println!("    {msg}");
        }
        if !ok {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
