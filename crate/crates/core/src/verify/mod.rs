//! Configured verification runs: suites, certificates and reports.

pub mod certificate;
pub mod config;
pub mod report;
pub mod suites;
pub mod validate;

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use certificate::{Certificate, ImprovementStep};
pub use config::{parse_config, SuiteConfig, SuiteName};
pub use report::{Report, SuiteReport};

/// Runs every requested suite, concurrently, each on its own seeded stream.
pub fn run_suites(cfg: &SuiteConfig) -> Report {
    let start = Instant::now();
    let suites = std::thread::scope(|scope| {
        let handles: Vec<_> = cfg
            .suites
            .iter()
            .map(|req| {
                scope.spawn(move || {
                    let began = Instant::now();
                    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                    rng.set_stream(req.name.stream());
                    let outcome = suites::run_one(req, cfg.trials, &cfg.caps, &mut rng);
                    SuiteReport::new(req.name, outcome, began.elapsed())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    });
    Report::new(cfg, suites, start.elapsed())
}
