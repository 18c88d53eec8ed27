use std::fmt::Write as _;

use asympl::{Status, Verdict, Witness};
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Serialize)]
pub struct WitnessOut {
    pub condition: String,
    pub component: String,
    pub point: Option<Vec<String>>,
    pub value: f64,
}

#[derive(Serialize)]
pub struct ConditionOut {
    pub name: String,
    /// `holds`, `fails` or `indeterminate`.
    pub status: &'static str,
    /// Auxiliary cross-checks do not enter the verdict.
    pub primary: bool,
    pub detail: Option<String>,
}

#[derive(Default)]
pub struct Report {
    pub subcommand: String,
    conditions: Vec<ConditionOut>,
    witnesses: Vec<WitnessOut>,
    outputs: Vec<(String, Value)>,
    any_primary: bool,
}

fn status_name(s: &Status) -> &'static str {
    match s {
        Status::Holds => "holds",
        Status::Fails(_) => "fails",
        Status::Indeterminate { .. } => "indeterminate",
    }
}

/// Display label for an output key; JSON keeps the ASCII key.
fn label(key: &str) -> String {
    let greek = [
        ("d_omega", "dω"),
        ("d_sigma", "dσ"),
        ("sigma", "σ"),
        ("psi", "ψ"),
        ("omega", "ω"),
        ("varpi", "ϖ"),
        ("iota", "ι"),
        ("xi", "ξ"),
    ];
    let mut s = key.to_string();
    for (a, g) in greek {
        s = s.replace(a, g);
    }
    s
}

fn witness_out(cond: &str, w: &Witness) -> WitnessOut {
    WitnessOut {
        condition: cond.to_string(),
        component: w.component.clone(),
        point: w.point.as_ref().map(|p| p.values().iter().map(|q| q.to_string()).collect()),
        value: w.value,
    }
}

impl Report {
    pub fn new(subcommand: &str) -> Self {
        Report {
            subcommand: subcommand.to_string(),
            ..Default::default()
        }
    }

    pub fn output(&mut self, name: impl Into<String>, value: impl ToString) {
        self.outputs.push((name.into(), Value::String(value.to_string())));
    }

    pub fn output_list(&mut self, name: impl Into<String>, values: Vec<String>) {
        self.outputs
            .push((name.into(), Value::Array(values.into_iter().map(Value::String).collect())));
    }

    pub fn condition(&mut self, name: impl Into<String>, status: &Status, primary: bool) {
        let name = name.into();
        if let Status::Fails(w) = status {
            self.witnesses.push(witness_out(&name, w));
        }
        let detail = match status {
            Status::Holds => None,
            Status::Fails(w) => Some(w.to_string()),
            Status::Indeterminate { component } => Some(component.clone()),
        };
        self.any_primary |= primary;
        self.conditions.push(ConditionOut {
            name,
            status: status_name(status),
            primary,
            detail,
        });
    }

    /// Adds every condition of `v`, names prefixed with `prefix` if nonempty.
    pub fn verdict(&mut self, prefix: &str, v: &Verdict) {
        let name = |n: &str| if prefix.is_empty() { n.to_string() } else { format!("{prefix}: {n}") };
        for c in &v.conditions {
            self.condition(name(&c.name), &c.status, true);
        }
        for c in &v.auxiliary {
            self.condition(name(&c.name), &c.status, false);
        }
    }

    /// `pass`, `fail`, `indeterminate`, or `none` when no check was requested.
    pub fn overall(&self) -> &'static str {
        if !self.any_primary {
            return "none";
        }
        let prim = self.conditions.iter().filter(|c| c.primary);
        let mut indeterminate = false;
        for c in prim {
            match c.status {
                "fails" => return "fail",
                "indeterminate" => indeterminate = true,
                _ => {}
            }
        }
        if indeterminate {
            "indeterminate"
        } else {
            "pass"
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self.overall() {
            "pass" | "none" => 0,
            _ => 1,
        }
    }

    pub fn to_json(&self, elapsed_ms: f64) -> Value {
        let mut outputs = Map::new();
        for (k, v) in &self.outputs {
            outputs.insert(k.clone(), v.clone());
        }
        serde_json::json!({
            "subcommand": self.subcommand,
            "verdict": self.overall(),
            "conditions": self.conditions,
            "witnesses": self.witnesses,
            "outputs": outputs,
            "elapsed_ms": elapsed_ms,
        })
    }

    pub fn to_text(&self, elapsed_ms: f64) -> String {
        let mut s = String::new();
        let width = self.outputs.iter().map(|(k, _)| label(k).chars().count()).max().unwrap_or(0);
        for (k, v) in &self.outputs {
            let k = label(k);
            let pad = " ".repeat(width - k.chars().count());
            match v {
                Value::Array(items) if items.is_empty() => {
                    let _ = writeln!(s, "{k}{pad} = (none)");
                }
                Value::Array(items) => {
                    for (i, it) in items.iter().enumerate() {
                        let lead = if i == 0 { format!("{k}{pad} =") } else { " ".repeat(width + 2) };
                        let _ = writeln!(s, "{lead} {}", it.as_str().unwrap_or_default());
                    }
                }
                _ => {
                    let _ = writeln!(s, "{k}{pad} = {}", v.as_str().unwrap_or_default());
                }
            }
        }
        for c in &self.conditions {
            let tag = match c.status {
                "holds" => "ok  ",
                "fails" => "FAIL",
                _ => "??  ",
            };
            // a failing identity `… = 0` reads as `… ≠ 0`
            let name = if c.status == "fails" && c.name.ends_with(" = 0") && !c.name.contains(" and ") {
                c.name.replace(" = 0", " ≠ 0")
            } else {
                c.name.clone()
            };
            let aux = if c.primary { "" } else { " (auxiliary)" };
            let _ = write!(s, "[{tag}] {name}{aux}");
            if let Some(d) = &c.detail {
                let _ = write!(s, ": {d}");
            }
            s.push('\n');
        }
        let _ = writeln!(s, "verdict: {} ({elapsed_ms:.1} ms)", self.overall());
        s
    }
}
