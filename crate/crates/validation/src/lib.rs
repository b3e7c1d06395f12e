//! Runner for the acceptance criteria: each criterion is a function returning an
//! [`Outcome`] and reports one line, in the order given.

use std::time::{Duration, Instant};

#[derive(Debug, Clone)]
pub struct Outcome {
    pub pass: bool,
    pub detail: String,
}

impl Outcome {
    pub fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

pub type Criterion = (&'static str, fn() -> Outcome);

pub fn line(name: &str, o: &Outcome, took: Duration) -> String {
    format!("{} {name}: {} [{:.1}s]", if o.pass { "PASS" } else { "FAIL" }, o.detail, took.as_secs_f64())
}

fn timed(f: fn() -> Outcome) -> (Outcome, Duration) {
    let t = Instant::now();
    let o = f();
    (o, t.elapsed())
}

/// Runs `serial` one at a time (for timing), then `parallel` on separate threads,
/// and prints one line per criterion in the given order; true iff all passed.
pub fn run_all(serial: &[Criterion], parallel: &[Criterion]) -> bool {
    let mut results: Vec<(Outcome, Duration)> = serial
        .iter()
        .map(|(_, f)| std::panic::catch_unwind(|| timed(*f)).unwrap_or_else(|_| (Outcome::new(false, "panicked"), Duration::ZERO)))
        .collect();
    let rest: Vec<(Outcome, Duration)> = std::thread::scope(|s| {
        let handles: Vec<_> = parallel.iter().map(|(_, f)| s.spawn(move || timed(*f))).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| (Outcome::new(false, "panicked"), Duration::ZERO)))
            .collect()
    });
    results.extend(rest);
    let mut all = true;
    for ((name, _), (o, took)) in serial.iter().chain(parallel).zip(&results) {
        println!("{}", line(name, o, *took));
        all &= o.pass;
    }
    let passed = results.iter().filter(|(o, _)| o.pass).count();
    println!("{passed}/{} criteria passed", results.len());
    all
}
