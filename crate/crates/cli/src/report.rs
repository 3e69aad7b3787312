//! Deterministic reports: one line per check, per-degree dimension tables,
//! rendered values. For fixed input and flags the output is byte-identical
//! across runs except for the trailing wall-time field.

use std::collections::BTreeMap;

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub model: String,
    pub digest: String,
    pub checks: Vec<CheckLine>,
    pub dims: BTreeMap<String, Vec<usize>>,
    pub values: BTreeMap<String, String>,
    pub status: String,
    pub wall_ms: u128,
}

impl Report {
    pub fn new(command: impl Into<String>, model: impl Into<String>, digest: String) -> Self {
        Self {
            command: command.into(),
            model: model.into(),
            digest,
            checks: Vec::new(),
            dims: BTreeMap::new(),
            values: BTreeMap::new(),
            status: "ok".into(),
            wall_ms: 0,
        }
    }

    pub fn check(&mut self, name: impl Into<String>, witness: Option<String>) {
        let name = name.into();
        match witness {
            None => self.checks.push(CheckLine {
                name,
                status: "ok".into(),
                witness: None,
            }),
            Some(w) => {
                self.status = "fail".into();
                self.checks.push(CheckLine {
                    name,
                    status: "fail".into(),
                    witness: Some(w),
                });
            }
        }
    }

    pub fn check_eq<T: PartialEq + std::fmt::Debug>(
        &mut self,
        name: impl Into<String>,
        got: &T,
        expected: &T,
    ) {
        if got == expected {
            self.check(name, None);
        } else {
            self.check(
                name,
                Some(format!("got {got:?}, expected {expected:?}")),
            );
        }
    }

    pub fn dims(&mut self, name: impl Into<String>, dims: Vec<usize>) {
        self.dims.insert(name.into(), dims);
    }

    pub fn value(&mut self, name: impl Into<String>, value: impl Into<String>) {
        self.values.insert(name.into(), value.into());
    }

    pub fn failed(&self) -> bool {
        self.status == "fail"
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        out.push_str(&format!("model: {}\n", self.model));
        out.push_str(&format!("digest: sha256:{}\n", self.digest));
        for c in &self.checks {
            match &c.witness {
                None => out.push_str(&format!("check {}: ok\n", c.name)),
                Some(w) => out.push_str(&format!("check {}: FAIL ({w})\n", c.name)),
            }
        }
        for (name, dims) in &self.dims {
            let rendered = dims
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            out.push_str(&format!("dims {name}: {rendered}\n"));
        }
        for (name, value) in &self.values {
            out.push_str(&format!("value {name}: {value}\n"));
        }
        out.push_str(&format!("status: {}\n", self.status));
        out.push_str(&format!("wall-ms: {}\n", self.wall_ms));
        out
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
