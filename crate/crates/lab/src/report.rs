//! Verification reports and their JSON form.

use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "hyperring-lab/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail { witness: String },
    Skipped { reason: String },
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail { .. } => "fail",
            Status::Skipped { .. } => "skipped",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub theorem: String,
    pub instance: String,
    #[serde(flatten)]
    pub status: Status,
    /// Set only when timings are requested, so that default reports are
    /// reproducible byte for byte.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    pub results: Vec<Outcome>,
    pub summary: Summary,
}

impl VerificationReport {
    /// Sorts outcomes by theorem id, then instance id.
    pub fn new(mut results: Vec<Outcome>) -> Self {
        results.sort_by(|a, b| (&a.theorem, &a.instance).cmp(&(&b.theorem, &b.instance)));
        let mut summary = Summary::default();
        for r in &results {
            match r.status {
                Status::Pass => summary.pass += 1,
                Status::Fail { .. } => summary.fail += 1,
                Status::Skipped { .. } => summary.skipped += 1,
            }
        }
        VerificationReport {
            schema: SCHEMA.to_string(),
            results,
            summary,
        }
    }

    pub fn to_text(&self) -> String {
        let id_width = self.results.iter().map(|r| r.theorem.len()).max().unwrap_or(0);
        let width = self.results.iter().map(|r| r.instance.len()).max().unwrap_or(0);
        let mut out = String::new();
        for r in &self.results {
            let detail = match &r.status {
                Status::Pass => String::new(),
                Status::Fail { witness } => format!("  {witness}"),
                Status::Skipped { reason } => format!("  ({reason})"),
            };
            let time = r.wall_ms.map(|t| format!("  {t:.1}ms")).unwrap_or_default();
            let line = format!(
                "{:<id_width$} {:<width$} {:<7}{}{}",
                r.theorem,
                r.instance,
                r.status.label(),
                detail,
                time
            );
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out.push_str(&format!(
            "{} pass, {} fail, {} skipped\n",
            self.summary.pass, self.summary.fail, self.summary.skipped
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let report = VerificationReport::new(vec![
            Outcome {
                theorem: "hull-real-reduction".into(),
                instance: "3x3".into(),
                status: Status::Pass,
                wall_ms: None,
            },
            Outcome {
                theorem: "regularity".into(),
                instance: "Z4".into(),
                status: Status::Fail { witness: "2".into() },
                wall_ms: Some(1.5),
            },
            Outcome {
                theorem: "real-reduction-quotient".into(),
                instance: "K".into(),
                status: Status::Skipped {
                    reason: "not semi-real".into(),
                },
                wall_ms: None,
            },
        ]);
        assert_eq!(report.results[0].theorem, "hull-real-reduction");
        assert_eq!(report.results[2].theorem, "regularity");
        assert_eq!(
            report.summary,
            Summary {
                pass: 1,
                fail: 1,
                skipped: 1
            }
        );
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains(r#""status":"skipped","reason":"not semi-real""#));
        let back: VerificationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
    }
}
