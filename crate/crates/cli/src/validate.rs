use rayon::prelude::*;
use serde::Serialize;

use qperiod::analysis::{is_fuchsian, ramification_data, to_diff_form, Completeness};
use qperiod::kvdb::{validate_names, Database};
use qperiod::recurrence::{annihilates, normalize};
use qperiod::FanoRecord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Warning,
    Skipped,
}

impl Outcome {
    fn label(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "FAIL",
            Outcome::Warning => "warning",
            Outcome::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub outcome: Outcome,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RecordReport {
    pub id: u64,
    pub names: Vec<String>,
    pub passed: bool,
    /// Positions `e` of violated recurrence relations.
    pub residual_positions: Vec<usize>,
    pub defect: Option<i64>,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub file: String,
    pub dimension: u8,
    pub records: usize,
    pub passed: usize,
    pub failed: usize,
    pub operator_checks_skipped: usize,
    pub warnings: Vec<String>,
    pub results: Vec<RecordReport>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            out.push_str(&format!(
                "record {} [{}]: {}\n",
                r.id,
                r.names.join(", "),
                if r.passed { "pass" } else { "FAIL" }
            ));
            for c in &r.checks {
                if c.detail.is_empty() {
                    out.push_str(&format!("  {}: {}\n", c.name, c.outcome.label()));
                } else {
                    out.push_str(&format!("  {}: {} ({})\n", c.name, c.outcome.label(), c.detail));
                }
            }
        }
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out.push_str(&format!(
            "{}: {} records, {} passed, {} failed, operator checks skipped for {}\n",
            self.file, self.records, self.passed, self.failed, self.operator_checks_skipped
        ));
        out
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Options {
    pub fuchsian: bool,
    pub ramification: bool,
}

fn check(name: &'static str, outcome: Outcome, detail: impl Into<String>) -> Check {
    Check {
        name,
        outcome,
        detail: detail.into(),
    }
}

fn validate_record(r: &FanoRecord, dimension: u8, opts: Options) -> RecordReport {
    let mut checks = Vec::new();
    let mut residual_positions = Vec::new();
    let mut defect = None;

    checks.push(if !r.period.is_nonnegative_integral() {
        check("period", Outcome::Fail, "coefficients must be non-negative integers")
    } else if !r.period.follows_period_convention() {
        check("period", Outcome::Fail, "expected c_0 = 1 and c_1 = 0")
    } else {
        check("period", Outcome::Pass, format!("c_0..c_{}", r.period.len() - 1))
    });

    let warnings = validate_names(r, dimension);
    checks.push(if warnings.is_empty() {
        check("names", Outcome::Pass, "")
    } else {
        let text: Vec<String> = warnings.iter().map(|w| w.to_string()).collect();
        check("names", Outcome::Warning, text.join("; "))
    });

    match &r.operator {
        None => checks.push(check("operator", Outcome::Skipped, "no operator stored")),
        Some(op) => {
            let ann = annihilates(op, &r.period);
            residual_positions = ann.residuals.iter().map(|(e, _)| *e).collect();
            checks.push(if ann.holds() {
                check("annihilation", Outcome::Pass, format!("relations 0..={}", ann.verified_range))
            } else {
                let shown: Vec<String> = ann
                    .residuals
                    .iter()
                    .take(8)
                    .map(|(e, v)| format!("e = {e}: {v}"))
                    .collect();
                let more = ann.residuals.len().saturating_sub(8);
                let tail = if more > 0 { format!(", {more} more") } else { String::new() };
                check("annihilation", Outcome::Fail, format!("residuals {}{tail}", shown.join(", ")))
            });

            let normal = normalize(op);
            checks.push(if &normal == op {
                check("normalized", Outcome::Pass, "")
            } else if normal.same_as(op) {
                check("normalized", Outcome::Fail, "terms are not in descending (m, n) order")
            } else {
                check("normalized", Outcome::Fail, format!("normal form is {normal}"))
            });

            if r.pf_proven == Some(true) {
                checks.push(check("pf_proven", Outcome::Warning, "record claims a proof"));
            }

            if opts.fuchsian {
                let cert = is_fuchsian(&to_diff_form(op));
                let irregular: Vec<String> = cert
                    .points
                    .iter()
                    .filter(|(_, regular)| !regular)
                    .map(|(p, _)| p.to_string())
                    .collect();
                checks.push(if cert.fuchsian {
                    check("fuchsian", Outcome::Pass, "")
                } else {
                    check("fuchsian", Outcome::Fail, format!("irregular at {}", irregular.join(", ")))
                });
            }

            if opts.ramification {
                checks.push(match ramification_data(op) {
                    Ok(rep) => {
                        defect = Some(rep.defect);
                        let detail = format!(
                            "rank {}, rf {}, defect {}{}",
                            rep.rank,
                            rep.rf,
                            rep.defect,
                            if rep.extremal { ", extremal" } else { "" }
                        );
                        match rep.completeness {
                            Completeness::Full => check("ramification", Outcome::Pass, detail),
                            Completeness::Partial(why) => {
                                check("ramification", Outcome::Warning, format!("{detail}; partial: {why}"))
                            }
                        }
                    }
                    Err(e) => check("ramification", Outcome::Fail, e.to_string()),
                });
            }
        }
    }

    RecordReport {
        id: r.id,
        names: r.names.clone(),
        passed: checks.iter().all(|c| c.outcome != Outcome::Fail),
        residual_positions,
        defect,
        checks,
    }
}

pub fn validate_database(db: &Database, file: &str, opts: Options) -> Report {
    let mut results: Vec<RecordReport> = db
        .records()
        .par_iter()
        .map(|r| {
            log::debug!("validating record {}", r.id);
            validate_record(r, db.dimension(), opts)
        })
        .collect();
    results.sort_by_key(|r| r.id);
    let passed = results.iter().filter(|r| r.passed).count();
    Report {
        file: file.to_string(),
        dimension: db.dimension(),
        records: results.len(),
        passed,
        failed: results.len() - passed,
        operator_checks_skipped: db.records().iter().filter(|r| r.operator.is_none()).count(),
        warnings: db.warnings(),
        results,
    }
}
