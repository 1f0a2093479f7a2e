//! Check records and JSON/CSV rendering.

use serde::Serialize;
use serde_json::Value;

/// Residuals smaller than this do not count as a discrepancy witness.
pub const WITNESS_MIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    /// Passes when the residual is within tolerance.
    Check,
    /// Passes when the residual exceeds the tolerance, i.e. an expected inequality was observed.
    Witness,
    /// Reported only; never affects the exit status.
    Diagnostic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub kind: CheckKind,
}

impl Check {
    pub fn check(name: &str, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            tolerance,
            pass: residual <= tolerance,
            kind: CheckKind::Check,
        }
    }

    pub fn witness(name: &str, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            tolerance,
            pass: residual > tolerance,
            kind: CheckKind::Witness,
        }
    }

    pub fn diagnostic(name: &str, residual: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            tolerance: f64::NAN,
            pass: true,
            kind: CheckKind::Diagnostic,
        }
    }

    /// Library errors inside a suite become failing checks.
    pub fn error(name: &str, err: &crate::Error) -> Self {
        Self {
            name: format!("{name}: {err}"),
            residual: f64::INFINITY,
            tolerance: 0.0,
            pass: false,
            kind: CheckKind::Check,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub data: Value,
}

impl Report {
    pub fn new(command: &str, seed: u64, checks: Vec<Check>, data: Value) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Self {
            command: command.into(),
            seed,
            pass,
            checks,
            data,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Long format `section,key,value`: one row per check field and one per
    /// leaf of `data`, keyed by its JSON path.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let row = |w: &mut csv::Writer<Vec<u8>>, a: &str, b: &str, c: &str| {
            w.write_record([a, b, c]).expect("write to memory");
        };
        row(&mut w, "section", "key", "value");
        row(&mut w, "meta", "command", &self.command);
        row(&mut w, "meta", "seed", &self.seed.to_string());
        row(&mut w, "meta", "pass", &self.pass.to_string());
        for c in &self.checks {
            row(
                &mut w,
                "check",
                &format!("{}.residual", c.name),
                &fmt_f64(c.residual),
            );
            row(
                &mut w,
                "check",
                &format!("{}.tolerance", c.name),
                &fmt_f64(c.tolerance),
            );
            row(
                &mut w,
                "check",
                &format!("{}.pass", c.name),
                &c.pass.to_string(),
            );
            let kind = serde_json::to_value(c.kind).expect("kind serializes");
            row(
                &mut w,
                "check",
                &format!("{}.kind", c.name),
                kind.as_str().unwrap_or(""),
            );
        }
        let mut leaves = Vec::new();
        flatten("", &self.data, &mut leaves);
        for (k, v) in leaves {
            row(&mut w, "data", &k, &v);
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 output")
    }
}

fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x:e}")
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                flatten(&join(k), x, out);
            }
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&join(&i.to_string()), x, out);
            }
        }
        Value::String(s) => out.push((prefix.into(), s.clone())),
        Value::Null => out.push((prefix.into(), String::new())),
        other => out.push((prefix.into(), other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn kinds_decide_pass() {
        assert!(Check::check("a", 1e-12, 1e-10).pass);
        assert!(!Check::check("a", 1e-8, 1e-10).pass);
        assert!(Check::witness("b", 0.3, WITNESS_MIN).pass);
        assert!(!Check::witness("b", 0.0, WITNESS_MIN).pass);
        assert!(Check::diagnostic("c", 4.0).pass);
        assert!(!Check::check("nan", f64::NAN, 1.0).pass);
    }

    #[test]
    fn csv_flattens_data() {
        let r = Report::new(
            "chaos",
            3,
            vec![Check::check("x", 0.0, 1e-10)],
            json!({"rows": [{"k": 0, "a": 1.5}]}),
        );
        let csv = r.to_csv();
        assert!(csv.starts_with("section,key,value\n"));
        assert!(csv.contains("data,rows.0.a,1.5\n"));
        assert!(csv.contains("check,x.pass,true\n"));
    }
}
