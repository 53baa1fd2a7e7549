//! Acceptance suite. Runs every criterion at its stated tolerance and prints
//! one PASS/FAIL line per criterion, plus indented notes.
//!
//! Two criteria are known to be unattainable as stated and are listed in
//! [`KNOWN_RED`]. They still print FAIL. The process exits non-zero on any
//! other failure, or if a known-red criterion starts passing. Set
//! `ACCEPTANCE_STRICT=1` to treat every FAIL as fatal.
//!
//! Run with `cargo test -p assurance --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use assurance::cli;
use assurance::oracle::{
    default_probes, enumerate_assurance_oracle, run_probes, simulate_tail_probability_in,
    SimulationConfig,
};
use assurance_core::exact::{approx, confidence_infinite_exact};
use assurance_core::{
    assurance_finite, assurance_infinite, assurance_infinite_brent, confidence_finite,
    confidence_infinite, reliability_finite, reliability_infinite, FinitePlan, Probability,
    TestEvidence,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Published assurance table, f = 0. Rows n = 3..22; columns m = 1..10, inf.
const GOLDEN: &str = "
 3 80.0 80.0 70.4 71.4 75.0 70.4 70.0 72.7 70.4 69.2 68.2
 4 83.3 83.3 80.2 75.0 77.8 80.0 74.0 75.0 76.9 76.0 72.4
 5 85.7 86.8 86.8 77.8 80.0 81.8 81.4 76.9 78.6 80.0 75.5
 6 87.5 88.9 88.9 82.2 81.8 83.3 84.6 82.2 80.0 81.2 77.8
 7 88.9 90.0 90.0 86.7 83.3 84.6 85.7 86.7 82.8 82.4 79.7
 8 90.0 90.9 90.9 90.0 84.6 85.7 86.7 87.5 86.6 83.3 81.2
 9 90.9 91.7 92.3 92.3 86.6 86.7 87.5 88.2 88.9 86.6 82.4
10 91.7 92.3 92.9 92.9 89.3 87.5 88.2 88.9 89.5 89.3 83.5
11 92.3 92.9 93.3 93.3 91.4 88.2 88.9 89.5 90.0 90.5 84.5
12 92.9 93.3 93.8 93.8 93.1 88.9 89.5 90.0 90.5 90.9 85.2
13 93.3 93.8 94.1 94.4 94.4 90.7 90.0 90.5 90.9 91.3 86.0
14 93.8 94.1 94.4 94.7 94.7 92.2 90.5 90.9 91.3 91.7 86.6
15 94.1 94.4 94.7 95.0 95.0 93.5 90.9 91.3 91.7 92.0 87.2
16 94.4 94.7 95.0 95.2 95.2 94.6 91.5 91.7 92.0 92.3 87.7
17 94.7 95.0 95.2 95.5 95.5 95.5 92.7 92.0 92.3 92.6 88.2
18 95.0 95.2 95.5 95.7 95.8 95.8 93.8 92.3 92.6 92.9 88.6
19 95.2 95.5 95.7 95.8 96.0 96.0 94.7 92.6 92.9 93.1 89.0
20 95.5 95.7 95.8 96.0 96.2 96.2 95.4 93.1 93.1 93.3 89.4
21 95.7 95.8 96.0 96.2 96.3 96.3 96.1 93.9 93.3 93.5 89.7
22 95.8 96.0 96.2 96.3 96.4 96.6 96.6 94.7 93.5 93.8 90.1
";

/// Criteria that fail as stated, with the reason.
const KNOWN_RED: &[(usize, &str)] = &[
    (3, "n=22 converges to 90.04%; the published 90.1 comes from a root finder stopped at xtol=1e-3"),
    (7, "reliability_finite is non-increasing in c; the stated direction is reversed"),
];

/// Percentage-point tolerance for anchor values.
const PP: f64 = 0.05;

type Check = fn() -> Outcome;

struct Outcome {
    passed: bool,
    summary: String,
    notes: Vec<String>,
}

impl Outcome {
    fn new(passed: bool, summary: impl Into<String>) -> Self {
        Outcome {
            passed,
            summary: summary.into(),
            notes: Vec::new(),
        }
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

fn ev(n: u64, f: u64) -> TestEvidence {
    TestEvidence::new(n, f).unwrap()
}

fn p(x: f64) -> Probability {
    Probability::new(x).unwrap()
}

fn secs(d: Duration) -> String {
    format!("{:.3} s", d.as_secs_f64())
}

fn cli_stdout(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(
        std::iter::once("assurance").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (code, String::from_utf8(out).unwrap())
}

fn compare_table(csv: &str) -> (usize, Vec<String>) {
    let got: Vec<Vec<&str>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    let want: Vec<Vec<&str>> = GOLDEN
        .trim()
        .lines()
        .map(|l| l.split_whitespace().collect())
        .collect();
    let header = [
        "n", "1", "2", "3", "4", "5", "6", "7", "8", "9", "10", "inf",
    ];
    let mut matched = 0;
    let mut misses = Vec::new();
    for (i, want_row) in want.iter().enumerate() {
        for (j, want_cell) in want_row.iter().enumerate().skip(1) {
            let got_cell = got
                .get(i)
                .and_then(|r| r.get(j))
                .copied()
                .unwrap_or("<missing>");
            if got_cell == *want_cell {
                matched += 1;
            } else {
                misses.push(format!(
                    "n={} m={}: got {got_cell}, published {want_cell}",
                    want_row[0], header[j]
                ));
            }
        }
    }
    (matched, misses)
}

fn table_reproduction() -> Outcome {
    let start = Instant::now();
    let (code, csv) = cli_stdout(&["table"]);
    let elapsed = start.elapsed();
    let header_ok = csv.lines().next() == Some("n,1,2,3,4,5,6,7,8,9,10,inf");
    let (matched, misses) = compare_table(&csv);
    let passed = code == 0 && header_ok && matched == 220 && elapsed < Duration::from_secs(1);
    let mut out = Outcome::new(
        passed,
        format!(
            "{matched}/220 cells match the published table ({})",
            secs(elapsed)
        ),
    );
    for miss in misses {
        out = out.note(miss);
    }
    let (_, converged) = cli_stdout(&["table", "--inf-method", "converged"]);
    let (_, drift) = compare_table(&converged);
    out.note(format!(
        "with --inf-method converged, {} inf cells differ: {}",
        drift.len(),
        drift.join("; ")
    ))
}

fn figure_anchors() -> Outcome {
    let mut failures = Vec::new();
    let mut check = |what: String, got: f64, want: f64| {
        if (got * 100.0 - want).abs() > PP {
            failures.push(format!("{what}: got {:.4}%, want {want}%", got * 100.0));
        }
    };
    for (m, r, c) in [(4, 71.4, 87.5), (5, 75.0, 78.4)] {
        let step = FinitePlan::new(ev(3, 0), m).step(2);
        check(
            format!("n=3 m={m} d=2 reliability"),
            step.overall_reliability.value(),
            r,
        );
        check(
            format!("n=3 m={m} d=2 confidence"),
            step.confidence.value(),
            c,
        );
    }
    // The confidence at which ten clean samples demonstrate 80% reliability
    // with infinite follow-up; the figure labels it as roughly 89%.
    let c = p(1.0 - 0.8f64.powi(10));
    for (m, want) in [(10, 90.0), (30, 85.0)] {
        let r = reliability_finite(&FinitePlan::new(ev(10, 0), m), c).unwrap();
        check(
            format!("n=10 m={m} reliability at c={:.4}", c.value()),
            r.value(),
            want,
        );
    }
    let r = reliability_infinite(ev(10, 0), c).unwrap();
    check(
        format!("n=10 m=inf reliability at c={:.4}", c.value()),
        r.value(),
        80.0,
    );

    let mut out = Outcome::new(
        failures.is_empty(),
        format!("7 anchors checked within ±{PP} pp"),
    );
    for f in failures {
        out = out.note(f);
    }
    let literal = reliability_infinite(ev(10, 0), p(0.89)).unwrap();
    out.note(format!(
        "at the literal c=0.89 the infinite reliability is {:.2}%, so the anchor uses c=1-0.8^10",
        literal.percent()
    ))
}

fn infinite_anchors() -> Outcome {
    let mut out_notes = Vec::new();
    let mut passed = true;
    for (n, f, want) in [(3, 0, 68.2), (22, 0, 90.1), (3, 2, 31.8)] {
        let got = assurance_infinite(ev(n, f)).unwrap().percent();
        let published = assurance_infinite_brent(ev(n, f), 1e-3).unwrap().percent();
        let ok = (got - want).abs() <= PP;
        passed &= ok;
        out_notes.push(format!(
            "n={n} f={f}: converged {got:.4}% vs {want}% ({}); coarse-tolerance Brent gives {published:.4}%",
            if ok { "ok" } else { "outside tolerance" }
        ));
    }
    let mut out = Outcome::new(
        passed,
        format!("3 infinite assurance anchors within ±{PP} pp"),
    );
    for note in out_notes {
        out = out.note(note);
    }
    if !passed {
        out = out.note(
            "the published values come from a root finder stopped at xtol=1e-3 (the default table's inf \
             column); those land within tolerance, but assurance_infinite is held to 1e-10",
        );
    }
    out
}

fn closed_form() -> Outcome {
    let mut worst = 0.0f64;
    for n in 1..=50u64 {
        for c in [0.5, 0.8, 0.9, 0.95, 0.99] {
            let got = reliability_infinite(ev(n, 0), p(c)).unwrap().value();
            let want = (1.0 - c).powf(1.0 / n as f64);
            worst = worst.max((got - want).abs());
        }
    }
    Outcome::new(
        worst <= 1e-9,
        format!("250 cases, max |error| = {worst:.2e} (tolerance 1e-9)"),
    )
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut exact_cases = 0;
    for n in 1..=30u64 {
        for f in 0..=n {
            for k in 1..=9i64 {
                let exact = BigRational::new(BigInt::from(k), BigInt::from(10));
                let want = approx(&confidence_infinite_exact(ev(n, f), &exact).unwrap());
                let got = confidence_infinite(ev(n, f), p(k as f64 / 10.0)).value();
                worst = worst.max((got - want).abs());
                exact_cases += 1;
            }
        }
    }
    let mut plans = 0;
    let mut mismatches = Vec::new();
    for n in 1..=25u64 {
        for f in 0..=3.min(n) {
            for m in 0..=40u64 {
                let plan = FinitePlan::new(ev(n, f), m);
                let fast = assurance_finite(&plan);
                let slow = enumerate_assurance_oracle(&plan).unwrap();
                plans += 1;
                if fast != slow {
                    mismatches.push(format!("n={n} f={f} m={m}: {fast:?} vs {slow:?}"));
                }
            }
        }
    }
    let passed = worst <= 1e-12 && mismatches.is_empty();
    let mut out = Outcome::new(
        passed,
        format!(
            "{exact_cases} exact cases max |error| = {worst:.2e} (tolerance 1e-12); \
             {}/{plans} plans identical to enumeration ({})",
            plans - mismatches.len(),
            secs(start.elapsed())
        ),
    );
    for m in mismatches.into_iter().take(10) {
        out = out.note(m);
    }
    out
}

fn dominance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut violations = Vec::new();
    for i in 0..1000 {
        let n = rng.random_range(1..=50u64);
        let m = rng.random_range(0..=50u64);
        let plan = FinitePlan::new(ev(n, 0), m);
        // every other probe sits exactly on a step boundary
        let r = if i % 2 == 0 || m == 0 {
            p(rng.random::<f64>())
        } else {
            plan.step_reliability(rng.random_range(0..=m))
        };
        let finite = confidence_finite(&plan, r);
        let infinite = confidence_infinite(ev(n, 0), r);
        if finite < infinite {
            violations.push(format!(
                "n={n} m={m} r={}: {} < {}",
                r.value(),
                finite.value(),
                infinite.value()
            ));
        }
    }
    let mut out = Outcome::new(
        violations.is_empty(),
        format!("{} violations in 1000 probes", violations.len()),
    );
    for v in violations.into_iter().take(10) {
        out = out.note(v);
    }
    out
}

fn monotonicity() -> Outcome {
    let grid: Vec<f64> = (0..=200).map(|i| i as f64 / 200.0).collect();
    let interior = &grid[1..grid.len() - 1];

    let mut in_r = 0;
    let mut in_f = 0;
    for n in 1..=20u64 {
        for f in 0..=n {
            for m in [None, Some(0), Some(1), Some(5), Some(20)] {
                let conf = |f: u64, r: f64| match m {
                    None => confidence_infinite(ev(n, f), p(r)).value(),
                    Some(m) => confidence_finite(&FinitePlan::new(ev(n, f), m), p(r)).value(),
                };
                in_r += grid
                    .windows(2)
                    .filter(|w| conf(f, w[1]) > conf(f, w[0]))
                    .count();
                if f < n {
                    in_f += grid
                        .iter()
                        .filter(|&&r| conf(f + 1, r) > conf(f, r))
                        .count();
                }
            }
        }
    }

    let mut rising = 0;
    let mut falling = 0;
    let mut example = None;
    for n in 1..=20u64 {
        for f in 0..n {
            for m in [1, 2, 5, 10, 30] {
                let plan = FinitePlan::new(ev(n, f), m);
                for w in interior.windows(2) {
                    let lo = reliability_finite(&plan, p(w[0])).unwrap().value();
                    let hi = reliability_finite(&plan, p(w[1])).unwrap().value();
                    if hi < lo {
                        falling += 1;
                        example.get_or_insert((n, f, m, w[0], lo, w[1], hi));
                    }
                    if hi > lo {
                        rising += 1;
                    }
                }
            }
        }
    }

    let values: Vec<f64> = (3..=22)
        .map(|n| assurance_infinite(ev(n, 0)).unwrap().value())
        .collect();
    let increasing = values.windows(2).all(|w| w[1] > w[0]);

    let passed = in_r == 0 && in_f == 0 && falling == 0 && increasing;
    let mut out = Outcome::new(
        passed,
        format!(
            "confidence rises with r: {in_r}, rises with f: {in_f}; reliability_finite falls as c rises: \
             {falling}; assurance_infinite increasing over n=3..22: {increasing}"
        ),
    );
    if let Some((n, f, m, c0, r0, c1, r1)) = example {
        out = out.note(format!(
            "reliability_finite is non-increasing in c, not non-decreasing: n={n} f={f} m={m} gives \
             r={r0:.4} at c={c0} but r={r1:.4} at c={c1}"
        ));
        out = out.note(format!(
            "checked the opposite direction over the same grid: {rising} rises (0 means non-increasing holds)"
        ));
    }
    out
}

fn monte_carlo() -> Outcome {
    const TRIALS: u64 = 1_000_000;
    const SEED: u64 = 0;
    let probes = default_probes();
    let start = Instant::now();
    let first = run_probes(&probes, TRIALS, SEED).unwrap();
    let elapsed = start.elapsed();
    let second = run_probes(&probes, TRIALS, SEED).unwrap();
    let repeatable = first
        .iter()
        .zip(&second)
        .all(|(a, b)| a.estimate == b.estimate);

    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let wide = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap();
    let probe = probes[3];
    let config = SimulationConfig::new(TRIALS, SEED + 3, p(probe.reliability)).unwrap();
    let thread_independent = simulate_tail_probability_in(&single, ev(probe.n, probe.f), &config)
        == simulate_tail_probability_in(&wide, ev(probe.n, probe.f), &config);

    let bracketed = first.iter().filter(|o| o.passed).count();
    let passed = bracketed == probes.len()
        && repeatable
        && thread_independent
        && elapsed < Duration::from_secs(30);
    let mut out = Outcome::new(
        passed,
        format!(
            "{bracketed}/{} probes within 3 SE at {TRIALS} trials; repeatable: {repeatable}; \
             thread-count independent: {thread_independent} ({})",
            probes.len(),
            secs(elapsed)
        ),
    );
    for o in &first {
        let z = if o.estimate.standard_error > 0.0 {
            format!(
                "z={:+.2}",
                (o.estimate.estimate - o.expected) / o.estimate.standard_error
            )
        } else {
            "exact".to_string()
        };
        out = out.note(format!(
            "n={} f={} r={}: expected {:.6}, estimate {:.6}, {z}{}",
            o.probe.n,
            o.probe.f,
            o.probe.reliability,
            o.expected,
            o.estimate.estimate,
            if o.passed { "" } else { "  <- outside band" }
        ));
    }
    out
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 8] = [
        ("table reproduction", table_reproduction),
        ("figure anchors", figure_anchors),
        ("infinite assurance anchors", infinite_anchors),
        ("closed form", closed_form),
        ("oracle equivalence", oracle_equivalence),
        ("finite dominance", dominance),
        ("monotonicity", monotonicity),
        ("monte carlo coverage", monte_carlo),
    ];
    let strict = std::env::var_os("ACCEPTANCE_STRICT").is_some_and(|v| v == "1");
    let mut failed = 0;
    let mut fatal = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let number = i + 1;
        let outcome = check();
        let verdict = if outcome.passed { "PASS" } else { "FAIL" };
        println!("criterion {number} {verdict} {name}: {}", outcome.summary);
        for note in &outcome.notes {
            println!("    {note}");
        }
        let known = KNOWN_RED.iter().find(|(n, _)| *n == number);
        match (outcome.passed, known) {
            (false, Some((_, why))) => {
                println!("    known red: {why}");
                failed += 1;
                fatal += usize::from(strict);
            }
            (false, None) => {
                failed += 1;
                fatal += 1;
            }
            (true, Some(_)) => {
                println!("    listed as known red but passed; update KNOWN_RED");
                fatal += 1;
            }
            (true, None) => {}
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed, {} known red",
        criteria.len() - failed,
        KNOWN_RED.len()
    );
    if fatal == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
