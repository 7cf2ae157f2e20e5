use std::fmt::Write as _;

/// Counters and score trajectory for one hill-climbing run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunStats {
    /// Candidate trees scored, including the initial random tree.
    pub trees_examined: u64,
    /// `accepted[k]`: accepted proposals that were `k`-mutations.
    pub accepted: Vec<u64>,
    pub rejected: Vec<u64>,
    /// `(trees_examined, S)` at the start and after each strict improvement.
    pub trajectory: Vec<(u64, f64)>,
}

impl RunStats {
    pub(crate) fn new(k_max: usize) -> RunStats {
        RunStats {
            trees_examined: 0,
            accepted: vec![0; k_max + 1],
            rejected: vec![0; k_max + 1],
            trajectory: Vec::new(),
        }
    }

    pub(crate) fn record(&mut self, k: usize, accepted: bool) {
        if accepted {
            self.accepted[k] += 1;
        } else {
            self.rejected[k] += 1;
        }
    }

    pub fn proposals(&self) -> u64 {
        self.accepted.iter().chain(&self.rejected).sum()
    }

    pub fn best_score(&self) -> Option<f64> {
        self.trajectory.last().map(|&(_, s)| s)
    }

    /// `trees_examined S` per line, S with 6 decimals.
    pub fn trajectory_text(&self) -> String {
        let mut out = String::new();
        for &(t, s) in &self.trajectory {
            writeln!(out, "{t} {s:.6}").unwrap();
        }
        out
    }

    /// `k accepted rejected` per line, for every `k` that was proposed.
    pub fn histogram_text(&self) -> String {
        let mut out = String::new();
        for k in 1..self.accepted.len() {
            let (a, r) = (self.accepted[k], self.rejected[k]);
            if a + r > 0 {
                writeln!(out, "{k} {a} {r}").unwrap();
            }
        }
        out
    }

    /// Both sections with `#` headers, the format written by `--stats`.
    pub fn to_text(&self) -> String {
        format!(
            "# trajectory\n{}# histogram\n{}",
            self.trajectory_text(),
            self.histogram_text()
        )
    }
}
