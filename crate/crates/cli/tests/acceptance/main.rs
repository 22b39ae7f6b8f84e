//! Acceptance suite: every criterion prints one PASS/FAIL line.
//!
//! Run a subset with `cargo test --test acceptance -- 3 6`.

mod decoding;
mod determinism;
mod sos;
mod spectral;
mod support;

use std::panic::AssertUnwindSafe;
use std::time::{Duration, Instant};

use support::Verdict;

struct Criterion {
    id: u8,
    name: &'static str,
    run: fn() -> Verdict,
    budget: Duration,
}

fn main() {
    let secs = Duration::from_secs;
    // Criterion 4 audits the solves made by 6-9, so it runs after them.
    let all = [
        Criterion {
            id: 1,
            name: "swap-operator spectrum",
            run: spectral::swap_spectrum,
            budget: secs(60),
        },
        Criterion {
            id: 2,
            name: "parity sampling bound",
            run: spectral::parity_sampling,
            budget: secs(120),
        },
        Criterion {
            id: 3,
            name: "complete-complex near-independence",
            run: spectral::near_independence,
            budget: secs(60),
        },
        Criterion {
            id: 5,
            name: "progress step numerics",
            run: sos::progress,
            budget: secs(120),
        },
        Criterion {
            id: 6,
            name: "SOS vs distribution optimum",
            run: sos::sos_vs_distribution,
            budget: secs(900),
        },
        Criterion {
            id: 7,
            name: "unique decoding vs ML oracle",
            run: decoding::unique_decoding,
            budget: secs(1800),
        },
        Criterion {
            id: 8,
            name: "list decoding vs list oracle",
            run: decoding::list_decoding,
            budget: secs(3600),
        },
        Criterion {
            id: 9,
            name: "product-to-sum reduction",
            run: decoding::product_reduction,
            budget: secs(1800),
        },
        Criterion {
            id: 4,
            name: "entropic lower bound on every solve",
            run: sos::entropic_bound,
            budget: secs(10),
        },
        Criterion {
            id: 10,
            name: "rate formulas",
            run: spectral::rates,
            budget: secs(120),
        },
        Criterion {
            id: 11,
            name: "CLI determinism",
            run: determinism::determinism,
            budget: secs(600),
        },
    ];
    let wanted: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for c in all.iter().filter(|c| wanted.is_empty() || wanted.contains(&c.id)) {
        let start = Instant::now();
        let verdict = std::panic::catch_unwind(AssertUnwindSafe(c.run))
            .unwrap_or_else(|e| Verdict::fail(format!("panicked: {}", support::panic_text(&e))));
        let elapsed = start.elapsed();
        let in_time = elapsed <= c.budget;
        let pass = verdict.pass && in_time;
        failed += usize::from(!pass);
        println!(
            "{} [{:>2}] {}: {} ({:.1}s, budget {}s{})",
            if pass { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            verdict.summary,
            elapsed.as_secs_f64(),
            c.budget.as_secs(),
            if in_time { "" } else { ", over budget" }
        );
        for note in &verdict.notes {
            println!("       {note}");
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
