//! Acceptance reporting. The checks themselves live in `tests/acceptance.rs`
//! (`cargo test -p bernstein-validation --test acceptance`).

use std::process::ExitCode;
use std::time::{Duration, Instant};

#[derive(Debug, Default)]
pub struct Report {
    passed: usize,
    failed: Vec<String>,
}

impl Report {
    /// Prints one `PASS`/`FAIL` line.
    pub fn record(&mut self, id: &str, title: &str, pass: bool, detail: &str) {
        println!("{} [{id}] {title}: {detail}", if pass { "PASS" } else { "FAIL" });
        if pass {
            self.passed += 1;
        } else {
            self.failed.push(id.to_string());
        }
    }

    pub fn finish(self) -> ExitCode {
        println!(
            "acceptance: {} passed, {} failed{}",
            self.passed,
            self.failed.len(),
            if self.failed.is_empty() { String::new() } else { format!(" ({})", self.failed.join(", ")) }
        );
        if self.failed.is_empty() {
            ExitCode::SUCCESS
        } else {
            ExitCode::FAILURE
        }
    }
}

pub fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_outcomes() {
        let mut r = Report::default();
        r.record("x", "t", true, "");
        r.record("y", "t", false, "");
        assert_eq!(r.passed, 1);
        assert_eq!(r.failed, ["y"]);
    }
}
