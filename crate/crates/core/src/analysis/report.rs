//! Ramification of the solution local system.

use std::fmt;

use super::local::{invariant_dimension_bounded, Exponent};
use super::{is_fuchsian, singular_points, to_diff_form, AnalysisError, PointKind, SingularPoint};
use crate::operator::DOperator;

pub const DEFAULT_MAX_FACTOR_DEGREE: usize = 8;
pub const DEFAULT_MAX_EXPONENT_GAP: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisConfig {
    /// Algebraic points of higher degree are skipped and the report marked
    /// partial.
    pub max_factor_degree: usize,
    pub max_exponent_gap: u64,
    /// Treat a negative defect as an error rather than a warning.
    pub assume_irreducible: bool,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            max_factor_degree: DEFAULT_MAX_FACTOR_DEGREE,
            max_exponent_gap: DEFAULT_MAX_EXPONENT_GAP,
            assume_irreducible: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointReport {
    pub point: SingularPoint,
    pub exponents: Vec<Exponent>,
    pub invariant_dim: usize,
    /// `rank - invariant_dim`, for each conjugate point.
    pub contribution: usize,
}

impl PointReport {
    /// Contribution to rf, summed over the conjugates.
    pub fn total_contribution(&self) -> usize {
        self.contribution * self.point.conjugates()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Completeness {
    Full,
    Partial(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamificationReport {
    pub rank: usize,
    pub points: Vec<PointReport>,
    pub rf: usize,
    pub defect: i64,
    pub extremal: bool,
    pub completeness: Completeness,
    pub warnings: Vec<String>,
}

impl RamificationReport {
    pub fn is_complete(&self) -> bool {
        self.completeness == Completeness::Full
    }
}

impl fmt::Display for RamificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rank: {}", self.rank)?;
        for p in &self.points {
            let exps: Vec<String> = p.exponents.iter().map(|e| e.to_string()).collect();
            write!(
                f,
                "point {}: exponents [{}], invariant {}, contribution {}",
                p.point,
                exps.join(", "),
                p.invariant_dim,
                p.contribution
            )?;
            if p.point.conjugates() > 1 {
                write!(f, " (x{} conjugates)", p.point.conjugates())?;
            }
            writeln!(f)?;
        }
        writeln!(f, "rf: {}", self.rf)?;
        writeln!(f, "defect: {}", self.defect)?;
        writeln!(f, "extremal: {}", self.extremal)?;
        match &self.completeness {
            Completeness::Full => writeln!(f, "completeness: full")?,
            Completeness::Partial(why) => writeln!(f, "completeness: partial ({why})")?,
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

pub fn ramification_data(op: &DOperator) -> Result<RamificationReport, AnalysisError> {
    ramification_data_with(op, &AnalysisConfig::default())
}

pub fn ramification_data_with(
    op: &DOperator,
    config: &AnalysisConfig,
) -> Result<RamificationReport, AnalysisError> {
    let df = to_diff_form(op);
    let rank = df.order();
    let cert = is_fuchsian(&df);
    if let Some((p, _)) = cert.points.iter().find(|(_, ok)| !ok) {
        return Err(AnalysisError::NotFuchsian {
            point: p.to_string(),
        });
    }
    let mut points = Vec::new();
    let mut skipped = Vec::new();
    for point in singular_points(&df) {
        if let PointKind::Algebraic(f) = &point.kind {
            if f.degree().unwrap_or(0) > config.max_factor_degree {
                skipped.push(point.to_string());
                continue;
            }
        }
        let (exponents, invariant_dim) =
            invariant_dimension_bounded(&df, &point, config.max_exponent_gap)?;
        points.push(PointReport {
            point,
            exponents,
            invariant_dim,
            contribution: rank - invariant_dim,
        });
    }
    let rf: usize = points.iter().map(PointReport::total_contribution).sum();
    let defect = rf as i64 - 2 * rank as i64;
    let mut warnings = Vec::new();
    if defect < 0 {
        if config.assume_irreducible {
            return Err(AnalysisError::NegativeDefect { defect });
        }
        warnings.push(format!(
            "negative ramification defect {defect}: the local system is reducible or trivial"
        ));
    }
    let completeness = if skipped.is_empty() {
        Completeness::Full
    } else {
        Completeness::Partial(format!(
            "skipped {} beyond degree {}",
            skipped.join("; "),
            config.max_factor_degree
        ))
    };
    Ok(RamificationReport {
        rank,
        points,
        rf,
        defect,
        extremal: defect == 0,
        completeness,
        warnings,
    })
}

pub fn ramification_defect(op: &DOperator) -> Result<i64, AnalysisError> {
    ramification_data(op).map(|r| r.defect)
}
