//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines come out in order.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use semicyclic_core::verify::{
    conjecture_checks, golden_module, golden_rmatrix, holonomy_braid_relation, lifted_rp_yang_baxter,
    markov_sequences, modified_dimension, semicyclic_power, set_yang_baxter, twist_identity, untwisted_relations,
    Check,
};

const SEED: u64 = 7;
const TOL: f64 = 1e-9;

struct Outcome {
    pass: bool,
    summary: String,
}

fn from_checks(checks: &[Check]) -> Outcome {
    let worst = checks.iter().map(|c| c.value / c.tol).fold(0.0, f64::max);
    let failed: Vec<String> = checks.iter().filter(|c| !c.pass).map(|c| c.to_string()).collect();
    let summary = if failed.is_empty() {
        format!("{} checks, worst dev/tol={worst:.2e}", checks.len())
    } else {
        failed.join("; ")
    };
    Outcome { pass: failed.is_empty(), summary }
}

fn criterion(id: u32, title: &str, budget: Option<Duration>, body: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = body();
    let elapsed = start.elapsed();
    let in_time = budget.map_or(true, |b| elapsed < b);
    let pass = out.pass && in_time;
    let budget_note = budget.map_or(String::new(), |b| format!(" budget={:.0?}", b));
    println!(
        "{} criterion {id:>2} {title}: {} time={:.2?}{budget_note}",
        if pass { "PASS" } else { "FAIL" },
        out.summary,
        elapsed
    );
    pass
}

fn verify_all() -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_semicyclic"))
        .args(["verify", "--suite", "all", "--seed", "7"])
        .output()
        .expect("binary runs");
    out.stdout
}

fn main() -> ExitCode {
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let secs = Duration::from_secs;
    let results = [
        criterion(1, "golden N=4 R-matrix", Some(secs(1)), || from_checks(&[golden_rmatrix(20, SEED)])),
        criterion(2, "golden N=4 module matrices", None, || from_checks(&[golden_module(20, SEED)])),
        criterion(3, "set-theoretic Yang-Baxter", Some(secs(1)), || from_checks(&[set_yang_baxter(1000, SEED)])),
        criterion(4, "holonomy braid relation N=4,6", Some(secs(10)), || {
            let checks: Vec<Check> = [4, 6].iter().flat_map(|&n| holonomy_braid_relation(n, 50, SEED, TOL)).collect();
            from_checks(&checks)
        }),
        criterion(5, "lifted Yang-Baxter for RP", None, || from_checks(&[lifted_rp_yang_baxter(100, SEED)])),
        criterion(6, "semi-cyclic power and relations", None, || {
            let checks: Vec<Check> = [3, 4, 5, 6, 8]
                .iter()
                .flat_map(|&n| [semicyclic_power(n, 20, SEED, TOL), untwisted_relations(n, 20, SEED, TOL)])
                .collect();
            from_checks(&checks)
        }),
        criterion(7, "twist identity N=4,6", None, || {
            let checks: Vec<Check> = [4, 6].iter().map(|&n| twist_identity(n, 20, SEED, TOL)).collect();
            from_checks(&checks)
        }),
        criterion(8, "modified dimension", None, || {
            let checks: Vec<Check> = [3, 4, 5, 6, 8].iter().flat_map(|&n| modified_dimension(n, 20, SEED, TOL)).collect();
            from_checks(&checks)
        }),
        criterion(9, "Markov invariance", Some(secs(30)), || {
            let mut checks = Vec::new();
            for n in [4, 6] {
                match markov_sequences(n, 200, 6, SEED, TOL) {
                    Ok(s) => {
                        let detail = format!("sequences={} moves={}", s.sequences, s.moves);
                        checks.push(Check::measured("markov", format!("normalized N={n}"), s.normalized_dev, 1e-6, detail.clone()));
                        checks.push(Check::measured("markov", format!("raw-factor N={n}"), s.raw_dev, 1e-8, detail));
                    }
                    Err(e) => checks.push(Check::measured("markov", format!("N={n} error: {e}"), f64::NAN, 1e-6, "")),
                }
            }
            from_checks(&checks)
        }),
        criterion(10, "conjecture N=4,6", Some(secs(60)), || {
            let checks: Vec<Check> = [4, 6].iter().flat_map(|&n| conjecture_checks(n, TOL)).collect();
            for c in &checks {
                println!("    {c}");
            }
            from_checks(&checks)
        }),
        criterion(11, "determinism of verify --suite all --seed 7", None, || {
            let (a, b) = (verify_all(), verify_all());
            let same = !a.is_empty() && a == b;
            Outcome { pass: same, summary: format!("{} bytes, identical={same}", a.len()) }
        }),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
