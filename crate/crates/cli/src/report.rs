//! Line-oriented output with a schema header.

use crate::config::RunConfig;

pub const HEADER: &str = "ltphi-report v1";

#[derive(Clone, Debug, Default)]
pub struct Report {
    lines: Vec<String>,
    failures: usize,
}

impl Report {
    pub fn new(command: &str, cfg: &RunConfig) -> Self {
        let mut r = Report::default();
        r.lines.push(HEADER.to_string());
        r.lines.push(format!("command={command} {cfg}"));
        r
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    pub fn field(&mut self, key: &str, value: impl std::fmt::Display) {
        self.lines.push(format!("{key}: {value}"));
    }

    /// One property line: name, number of cases, verdict.
    pub fn property(&mut self, name: &str, cases: usize, pass: bool) {
        if !pass {
            self.failures += 1;
        }
        let verdict = if pass { "pass" } else { "fail" };
        self.lines.push(format!("property {name} cases={cases} {verdict}"));
    }

    pub fn failures(&self) -> usize {
        self.failures
    }

    pub fn text(&self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }
}
