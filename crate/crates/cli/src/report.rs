//! Structured result documents with deterministic text and JSON renderings.
//!
//! A [`Report`] is plain data: tables keyed by strings, pass/fail check
//! records, and assumption notes, all in `Vec`s so the serialized output is
//! byte-identical for identical inputs. The text and JSON renderers read
//! the same structure, so the two formats always carry the same data.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use loopcalc::check::Check;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub model: String,
    pub max_degree: usize,
    pub k: u32,
    pub assumptions: Vec<String>,
    pub sections: Vec<Section>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section {
    pub title: String,
    pub notes: Vec<String>,
    pub tables: Vec<Table>,
    pub checks: Vec<CheckResult>,
}

impl Section {
    pub fn new(title: impl Into<String>) -> Self {
        Section {
            title: title.into(),
            notes: Vec::new(),
            tables: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn push_checks(&mut self, checks: impl IntoIterator<Item = Check>) {
        for c in checks {
            self.checks.push(CheckResult::from_check(&c));
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    pub skipped: usize,
    pub witnesses: Vec<String>,
}

impl CheckResult {
    /// Keeps at most five witnesses so reports stay readable; the count of
    /// failures is preserved in `checked` vs passing.
    pub fn from_check(c: &Check) -> Self {
        let mut witnesses: Vec<String> = c.failures.iter().take(5).cloned().collect();
        if c.failures.len() > 5 {
            witnesses.push(format!("... {} more", c.failures.len() - 5));
        }
        CheckResult {
            name: c.name.clone(),
            passed: c.passed(),
            checked: c.checked,
            skipped: c.skipped,
            witnesses,
        }
    }
}

impl Report {
    pub fn recompute_passed(&mut self) {
        self.passed = self.sections.iter().all(Section::passed);
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {} report", self.tool, self.version);
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(out, "model: {}", self.model);
        let _ = writeln!(out, "max degree: {}", self.max_degree);
        let _ = writeln!(out, "k: {}", self.k);
        let _ = writeln!(out, "status: {}", if self.passed { "PASS" } else { "FAIL" });
        for a in &self.assumptions {
            let _ = writeln!(out, "assumption: {}", a);
        }
        for section in &self.sections {
            let _ = writeln!(out);
            let _ = writeln!(out, "== {} ==", section.title);
            for n in &section.notes {
                let _ = writeln!(out, "note: {}", n);
            }
            for table in &section.tables {
                let _ = writeln!(out, "-- {} --", table.title);
                let _ = writeln!(out, "{}", table.columns.join(" | "));
                for row in &table.rows {
                    let _ = writeln!(out, "{}", row.join(" | "));
                }
            }
            for check in &section.checks {
                let verdict = if check.passed { "PASS" } else { "FAIL" };
                let _ = writeln!(
                    out,
                    "[{}] {} (checked {}, skipped {})",
                    verdict, check.name, check.checked, check.skipped
                );
                for w in &check.witnesses {
                    let _ = writeln!(out, "    witness: {}", w);
                }
            }
        }
        out
    }

    pub fn render_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }
}
