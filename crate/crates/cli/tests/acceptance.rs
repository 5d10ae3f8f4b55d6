//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::time::{Duration, Instant};

use petersson_cli::suites;
use petersson_cli::SuiteReport;
use petersson_core::Result;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Result<SuiteReport>,
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn criteria() -> Vec<Criterion> {
    vec![
        Criterion { id: 1, name: "weight-4 exactness on E8, det(2T) <= 64", budget: secs(120), run: || suites::weight4_exactness(64) },
        Criterion { id: 2, name: "weight-8 exactness on E8+E8 and D16+, n <= 3, m <= 2", budget: secs(600), run: || suites::weight8_exactness(3, 2) },
        Criterion { id: 3, name: "three routes agree, f = Delta, m <= 12, n < 20", budget: secs(600), run: || suites::routes(12, 12, 20) },
        Criterion { id: 4, name: "degenerate-coefficient law, m in {4, 8, 9, 12}", budget: secs(600), run: || suites::degenerate(12, &[4, 8, 9, 12]) },
        Criterion { id: 5, name: "Moebius sum = primitive-Y count on E8, det(2T) <= 64", budget: secs(600), run: || suites::saviour(64) },
        Criterion { id: 6, name: "Hecke chain closed forms, proportionality, eigenvalue bound", budget: secs(600), run: || suites::hecke(&[8, 12], 36, 20) },
        Criterion { id: 7, name: "Dirichlet factorization N <= 500, composed eigenvalue N <= 8", budget: secs(600), run: || suites::dirichlet(&[8, 10, 12], 500, 8) },
        Criterion { id: 8, name: "differential-operator identities at 256 bits, rel 1e-25", budget: secs(60), run: || suites::diffop(256) },
        Criterion { id: 9, name: "arithmetic-function dual computations up to 10^4", budget: secs(60), run: || suites::arith(10_000) },
        Criterion { id: 10, name: "saha sequence for 10 inputs", budget: secs(1), run: || suites::saha(&[5, 6, 7, 8, 9, 10, 11, 12, 13, 14]) },
        Criterion { id: 11, name: "operator and coefficient property suite", budget: secs(600), run: suites::properties },
    ]
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    if args.iter().any(|a| a == "--list") {
        return;
    }
    let mut failed = 0;
    for c in criteria() {
        let t0 = Instant::now();
        let res = (c.run)();
        let dt = t0.elapsed();
        let (ok, note) = match &res {
            Ok(rep) => {
                let in_time = dt <= c.budget;
                let mut note = String::new();
                for ch in rep.checks.iter().filter(|ch| !ch.passed) {
                    note += &format!("; {}: {}", ch.name, ch.counterexample.as_deref().unwrap_or("failed"));
                }
                if !in_time {
                    note += &format!("; over the {:?} budget", c.budget);
                }
                let cases: u64 = rep.checks.iter().map(|ch| ch.cases).sum();
                (rep.passed && in_time, format!("{cases} cases{note}"))
            }
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2}: {} {} ({:.2}s, {})",
            c.id,
            if ok { "PASS" } else { "FAIL" },
            c.name,
            dt.as_secs_f64(),
            note
        );
    }
    println!("acceptance: {} of 11 criteria passed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
