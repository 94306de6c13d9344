//! Bookkeeping for the acceptance run: one verdict line per criterion.

use std::time::Instant;

#[derive(Debug, Clone)]
pub struct Verdict {
    pub id: u32,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Default)]
pub struct Ledger {
    verdicts: Vec<Verdict>,
}

impl Ledger {
    /// Runs one criterion and prints its verdict line immediately.
    pub fn check(&mut self, id: u32, title: &'static str, f: impl FnOnce() -> (bool, String)) {
        let start = Instant::now();
        let (pass, detail) = f();
        let v = Verdict {
            id,
            title,
            pass,
            detail,
        };
        println!(
            "criterion {:>2} {} {}: {} [{:.1}s]",
            v.id,
            if v.pass { "PASS" } else { "FAIL" },
            v.title,
            v.detail,
            start.elapsed().as_secs_f64()
        );
        self.verdicts.push(v);
    }

    pub fn verdicts(&self) -> &[Verdict] {
        &self.verdicts
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    /// Prints the summary and returns the process exit code.
    pub fn finish(&self) -> i32 {
        let passed = self.verdicts.iter().filter(|v| v.pass).count();
        println!("acceptance: {passed}/{} criteria passed", self.verdicts.len());
        for v in self.verdicts.iter().filter(|v| !v.pass) {
            println!("  failed: criterion {} ({})", v.id, v.title);
        }
        if self.all_pass() {
            0
        } else {
            1
        }
    }
}

/// All entries strictly decreasing.
pub fn strictly_decreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] < w[0])
}
