//! Runs every acceptance criterion at full budget and prints one line each.
//!
//! `STRIPECOVER_SEED` overrides the seed (default 7) and
//! `STRIPECOVER_THREADS` caps the worker threads.

use std::process::ExitCode;
use std::time::Instant;

use stripecover::verify;

fn env_or<T: std::str::FromStr>(name: &str, default: T) -> T {
    std::env::var(name)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(default)
}

fn main() -> ExitCode {
    let seed = env_or("STRIPECOVER_SEED", 7u64);
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    let threads = env_or("STRIPECOVER_THREADS", cores);
    let start = Instant::now();
    let outcomes = verify::run_all(seed, threads).expect("campaigns run");
    print!("{}", verify::report(seed, &outcomes));
    for o in outcomes.iter().filter(|o| !o.passed) {
        println!("witness {}: {}", o.id, o.witness.as_ref().expect("failures carry witnesses"));
    }
    println!("# elapsed {:.1}s", start.elapsed().as_secs_f64());
    if outcomes.iter().all(|o| o.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
