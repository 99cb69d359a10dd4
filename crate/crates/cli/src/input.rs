use std::io::Read;
use std::path::{Path, PathBuf};

use qperiod::kvdb::{self, Fields};
use qperiod::laurent::{parse_laurent, LaurentPolynomial};
use qperiod::{DOperator, PeriodSequence};

use crate::Failure;

/// Read a file, or standard input for `-` and for no path at all.
pub fn read_source(path: Option<&Path>) -> Result<(String, String), Failure> {
    match path {
        Some(p) if p != Path::new("-") => std::fs::read_to_string(p)
            .map(|t| (t, p.display().to_string()))
            .map_err(|e| Failure::parse(format!("{}: {e}", p.display()))),
        _ => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Failure::parse(format!("standard input: {e}")))?;
            Ok((text, "standard input".into()))
        }
    }
}

/// Key-value fields of one block; a bare `[c0,c1,...]` is read as a period.
pub fn read_fields(path: Option<&Path>) -> Result<Fields, Failure> {
    let (text, origin) = read_source(path)?;
    let trimmed = text.trim();
    let text = if trimmed.starts_with('[') {
        format!("period: {trimmed}\n")
    } else {
        text
    };
    kvdb::parse_fields(&text).map_err(|e| Failure::parse(format!("{origin}: {e}")))
}

/// What `expand` can start from.
pub enum Generator {
    Operator(DOperator),
    Laurent(LaurentPolynomial),
}

/// Key-value input with an operator, or a bare Laurent polynomial such as
/// `x + y + x^-1 y^-1` written in the `x1^a1 ... xk^ak` grammar.
pub fn read_generator(path: Option<&Path>) -> Result<Generator, Failure> {
    let (text, origin) = read_source(path)?;
    let trimmed = text.trim();
    if !trimmed.is_empty() && !trimmed.contains(':') && !trimmed.starts_with('[') {
        return parse_laurent(trimmed, None)
            .map(Generator::Laurent)
            .map_err(|e| Failure::parse(format!("{origin}: Laurent polynomial: {e}")));
    }
    kvdb::parse_fields(&text)
        .map_err(|e| Failure::parse(format!("{origin}: {e}")))?
        .operator
        .map(Generator::Operator)
        .ok_or_else(|| Failure::parse("input has no pf_coefficients/pf_exponents"))
}

pub fn read_operator(path: Option<&Path>) -> Result<DOperator, Failure> {
    read_fields(path)?
        .operator
        .ok_or_else(|| Failure::parse("input has no pf_coefficients/pf_exponents"))
}

pub fn read_period(path: Option<&Path>) -> Result<PeriodSequence, Failure> {
    read_fields(path)?
        .period
        .ok_or_else(|| Failure::parse("input has no period"))
}

/// Dimension encoded in a `smooth_fano_N.txt` file name.
pub fn dimension_of(path: &Path) -> Option<u8> {
    let name = path.file_name()?.to_str()?;
    let n: u8 = name.strip_prefix("smooth_fano_")?.strip_suffix(".txt")?.parse().ok()?;
    (1..=4).contains(&n).then_some(n)
}

pub fn load_database(path: &PathBuf, dimension: Option<u8>) -> Result<kvdb::Database, Failure> {
    if !path.exists() && path.to_string_lossy().contains('=') {
        return Err(Failure::usage(format!(
            "'{}' looks like a filter; place filters before --data",
            path.display()
        )));
    }
    let dim = dimension.or_else(|| dimension_of(path)).ok_or_else(|| {
        Failure::usage(format!(
            "{}: cannot infer the dimension from the file name; pass it explicitly",
            path.display()
        ))
    })?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
    kvdb::parse_database(&text, dim).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))
}
