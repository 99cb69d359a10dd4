//! The `smooth_fano_N.txt` key-value databases.
//!
//! A file is a sequence of records separated by blank lines. Each line of a
//! record is `key: value`. See `FORMAT.md` at the repository root for the
//! value grammar.

mod names;
mod value;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;

use crate::operator::{DOperator, OperatorError};
use crate::record::FanoRecord;
use crate::sequence::PeriodSequence;

pub use names::{validate_name, validate_names, NameWarning};

/// Keys in canonical serialization order.
pub const KEYS: [&str; 8] = [
    "id",
    "period",
    "names",
    "pf_coefficients",
    "pf_exponents",
    "pf_proven",
    "notes",
    "duplicate",
];

/// Degrees `d` for which `c_d` can be queried.
pub const QUERY_DEGREES: std::ops::RangeInclusive<usize> = 2..=6;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("dimension {0} is not one of 1, 2, 3, 4")]
    InvalidDimension(u8),
    #[error("line is not of the form 'key: value'")]
    MissingSeparator,
    #[error("unknown key '{0}'")]
    UnknownKey(String),
    #[error("key '{0}' appears twice in the record")]
    DuplicateKey(String),
    #[error("malformed value for '{key}': {message}")]
    Malformed { key: &'static str, message: String },
    #[error("{coefficients} pf_coefficients but {exponents} pf_exponents")]
    LengthMismatch {
        coefficients: usize,
        exponents: usize,
    },
    #[error("invalid operator: {0}")]
    InvalidOperator(OperatorError),
    #[error("record is missing key '{0}'")]
    MissingKey(&'static str),
    #[error("id {0} is used by an earlier record")]
    DuplicateId(u64),
}

/// A parse failure, located by 1-based line number and 1-based record ordinal.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line} (record {record}): {kind}")]
pub struct ParseError {
    pub line: usize,
    pub record: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DatabaseError {
    #[error("dimension {0} is not one of 1, 2, 3, 4")]
    InvalidDimension(u8),
    #[error("id {0} appears more than once")]
    DuplicateId(u64),
    #[error("record {id}: names must be non-empty")]
    NoNames { id: u64 },
    #[error("record {id}: period must be a non-empty integer sequence")]
    BadPeriod { id: u64 },
    #[error("record {id}: pf_proven must be present exactly when the operator is")]
    ProvenFlag { id: u64 },
    #[error("record {id}: notes must be a single line")]
    MultilineNotes { id: u64 },
    #[error("record {id}: id must be positive")]
    ZeroId { id: u64 },
}

/// A loaded database: records in file order, indexed by id and by `c_2..c_6`.
#[derive(Clone, Debug)]
pub struct Database {
    dimension: u8,
    records: Vec<FanoRecord>,
    by_id: HashMap<u64, usize>,
    by_coeff: Vec<BTreeMap<BigInt, Vec<usize>>>,
}

impl PartialEq for Database {
    fn eq(&self, other: &Self) -> bool {
        self.dimension == other.dimension && self.records == other.records
    }
}

impl Eq for Database {}

impl Database {
    pub fn new(dimension: u8, records: Vec<FanoRecord>) -> Result<Self, DatabaseError> {
        if !(1..=4).contains(&dimension) {
            return Err(DatabaseError::InvalidDimension(dimension));
        }
        let mut by_id = HashMap::new();
        let mut by_coeff = vec![BTreeMap::new(); QUERY_DEGREES.count()];
        for (pos, r) in records.iter().enumerate() {
            let id = r.id;
            if id == 0 {
                return Err(DatabaseError::ZeroId { id });
            }
            if by_id.insert(id, pos).is_some() {
                return Err(DatabaseError::DuplicateId(id));
            }
            if r.names.is_empty() {
                return Err(DatabaseError::NoNames { id });
            }
            if r.period.is_empty() || !r.period.is_integral() {
                return Err(DatabaseError::BadPeriod { id });
            }
            if r.operator.is_some() != r.pf_proven.is_some() {
                return Err(DatabaseError::ProvenFlag { id });
            }
            if r.notes.as_deref().is_some_and(|n| n.contains(['\n', '\r'])) {
                return Err(DatabaseError::MultilineNotes { id });
            }
            for (slot, d) in QUERY_DEGREES.enumerate() {
                if let Some(c) = r.period.get(d) {
                    by_coeff[slot]
                        .entry(c.to_integer())
                        .or_insert_with(Vec::new)
                        .push(pos);
                }
            }
        }
        Ok(Database {
            dimension,
            records,
            by_id,
            by_coeff,
        })
    }

    pub fn empty(dimension: u8) -> Result<Self, DatabaseError> {
        Database::new(dimension, Vec::new())
    }

    pub fn dimension(&self) -> u8 {
        self.dimension
    }

    pub fn records(&self) -> &[FanoRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, id: u64) -> Option<&FanoRecord> {
        self.by_id.get(&id).map(|&i| &self.records[i])
    }

    /// Soft invariants: sequential ids from 1, dangling `duplicate`
    /// references, and the keys that low-dimensional databases always carry.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, r) in self.records.iter().enumerate() {
            let expected = i as u64 + 1;
            if r.id != expected {
                out.push(format!(
                    "record {}: id {} is not sequential (expected {expected})",
                    i + 1,
                    r.id
                ));
            }
            if let Some(dup) = r.duplicate {
                if dup == r.id || !self.by_id.contains_key(&dup) {
                    out.push(format!(
                        "record {}: duplicate refers to missing id {dup}",
                        r.id
                    ));
                }
            }
            if self.dimension <= 3 {
                if r.operator.is_none() {
                    out.push(format!("record {}: no operator", r.id));
                }
                if r.notes.is_none() {
                    out.push(format!("record {}: no notes", r.id));
                }
            }
        }
        out
    }

    /// Records matching every constraint of `filter`, in id order.
    pub fn query(&self, filter: &Filter) -> Result<Vec<&FanoRecord>, QueryError> {
        for (d, _) in &filter.coefficients {
            if !QUERY_DEGREES.contains(d) {
                return Err(QueryError::DegreeOutOfRange(*d));
            }
        }
        let candidates: Vec<usize> = match (filter.id, filter.coefficients.first()) {
            (Some(id), _) => self.by_id.get(&id).copied().into_iter().collect(),
            (None, Some((d, v))) => self.by_coeff[d - QUERY_DEGREES.start()]
                .get(v)
                .cloned()
                .unwrap_or_default(),
            (None, None) => (0..self.records.len()).collect(),
        };
        let mut hits: Vec<&FanoRecord> = candidates
            .into_iter()
            .map(|i| &self.records[i])
            .filter(|r| filter.matches(r))
            .collect();
        hits.sort_by_key(|r| r.id);
        Ok(hits)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QueryError {
    #[error("c{0} cannot be queried; only c2..c6 are indexed")]
    DegreeOutOfRange(usize),
}

/// Conjunctive query over id, a substring of any name, and exact values of `c_d`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Filter {
    pub id: Option<u64>,
    pub name: Option<String>,
    pub coefficients: Vec<(usize, BigInt)>,
}

impl Filter {
    pub fn new() -> Self {
        Filter::default()
    }

    pub fn id(mut self, id: u64) -> Self {
        self.id = Some(id);
        self
    }

    pub fn name(mut self, fragment: impl Into<String>) -> Self {
        self.name = Some(fragment.into());
        self
    }

    pub fn coefficient(mut self, d: usize, value: impl Into<BigInt>) -> Self {
        self.coefficients.push((d, value.into()));
        self
    }

    pub fn matches(&self, r: &FanoRecord) -> bool {
        if self.id.is_some_and(|id| id != r.id) {
            return false;
        }
        if let Some(frag) = &self.name {
            if !r.names.iter().any(|n| n.contains(frag.as_str())) {
                return false;
            }
        }
        self.coefficients.iter().all(|(d, v)| {
            r.period
                .get(*d)
                .is_some_and(|c| c.is_integer() && c.numer() == v)
        })
    }
}

#[derive(Default)]
struct Pending {
    id: Option<u64>,
    period: Option<Vec<BigInt>>,
    names: Option<Vec<String>>,
    coeffs: Option<(usize, Vec<BigInt>)>,
    exps: Option<(usize, Vec<(u32, u32)>)>,
    proven: Option<(usize, bool)>,
    notes: Option<String>,
    duplicate: Option<u64>,
    first_line: usize,
    id_line: usize,
}

/// Parse the text of a `smooth_fano_N.txt` file.
pub fn parse_database(text: &str, dimension: u8) -> Result<Database, ParseError> {
    if !(1..=4).contains(&dimension) {
        return Err(ParseError {
            line: 0,
            record: 0,
            kind: ParseErrorKind::InvalidDimension(dimension),
        });
    }
    let mut records = Vec::new();
    let mut seen_ids = HashMap::new();
    let mut current: Option<Pending> = None;
    let mut last_line = 0;
    for (idx, raw) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() {
            if let Some(p) = current.take() {
                let ordinal = records.len() + 1;
                records.push(finish_record(p, ordinal, line_no - 1, &mut seen_ids)?);
            }
            continue;
        }
        last_line = line_no;
        let ordinal = records.len() + 1;
        let pending = current.get_or_insert_with(|| Pending {
            first_line: line_no,
            ..Pending::default()
        });
        read_line(pending, line, line_no, ordinal)?;
    }
    if let Some(p) = current.take() {
        let ordinal = records.len() + 1;
        records.push(finish_record(p, ordinal, last_line, &mut seen_ids)?);
    }
    Database::new(dimension, records).map_err(|e| ParseError {
        line: 0,
        record: 0,
        kind: ParseErrorKind::Malformed {
            key: "record",
            message: e.to_string(),
        },
    })
}

fn read_line(p: &mut Pending, line: &str, line_no: usize, ordinal: usize) -> Result<(), ParseError> {
    let err = |kind| ParseError {
        line: line_no,
        record: ordinal,
        kind,
    };
    let (key, value) = line
        .split_once(':')
        .ok_or_else(|| err(ParseErrorKind::MissingSeparator))?;
    let key = key.trim();
    let value = value.trim();
    let canonical = KEYS
        .iter()
        .copied()
        .find(|k| *k == key)
        .ok_or_else(|| err(ParseErrorKind::UnknownKey(key.to_string())))?;
    let malformed = |message: String| {
        err(ParseErrorKind::Malformed {
            key: canonical,
            message,
        })
    };
    let duplicate = || err(ParseErrorKind::DuplicateKey(canonical.to_string()));
    macro_rules! store {
        ($slot:expr, $parsed:expr) => {{
            if $slot.is_some() {
                return Err(duplicate());
            }
            $slot = Some($parsed.map_err(malformed)?);
        }};
    }
    match canonical {
        "id" => {
            store!(p.id, value::parse_positive(value));
            p.id_line = line_no;
        }
        "period" => {
            let parsed = value::parse_integer_list(value).and_then(|v| {
                if v.is_empty() {
                    Err("period must be non-empty".to_string())
                } else {
                    Ok(v)
                }
            });
            store!(p.period, parsed)
        }
        "names" => {
            let parsed = value::parse_names(value).and_then(|v| {
                if v.is_empty() {
                    Err("names must be non-empty".to_string())
                } else {
                    Ok(v)
                }
            });
            store!(p.names, parsed)
        }
        "pf_coefficients" => store!(
            p.coeffs,
            value::parse_integer_list(value).map(|v| (line_no, v))
        ),
        "pf_exponents" => store!(p.exps, value::parse_pair_list(value).map(|v| (line_no, v))),
        "pf_proven" => store!(p.proven, value::parse_bool(value).map(|v| (line_no, v))),
        "notes" => store!(p.notes, Ok::<_, String>(value.to_string())),
        "duplicate" => store!(p.duplicate, value::parse_positive(value)),
        _ => unreachable!("key list and match arms agree"),
    }
    Ok(())
}

fn finish_record(
    p: Pending,
    ordinal: usize,
    end_line: usize,
    seen_ids: &mut HashMap<u64, usize>,
) -> Result<FanoRecord, ParseError> {
    let at = |line: usize, kind| ParseError {
        line,
        record: ordinal,
        kind,
    };
    let missing = |key| at(p.first_line, ParseErrorKind::MissingKey(key));
    let id = p.id.ok_or_else(|| missing("id"))?;
    let period = p.period.ok_or_else(|| missing("period"))?;
    let names = p.names.ok_or_else(|| missing("names"))?;
    if seen_ids.insert(id, ordinal).is_some() {
        return Err(at(p.id_line, ParseErrorKind::DuplicateId(id)));
    }
    let mut record = FanoRecord::new(id, names, PeriodSequence::from_integers(period));
    match (p.coeffs, p.exps, p.proven) {
        (None, None, None) => {}
        (Some((line, coeffs)), Some((_, exps)), Some((_, proven))) => {
            if coeffs.len() != exps.len() {
                return Err(at(
                    line,
                    ParseErrorKind::LengthMismatch {
                        coefficients: coeffs.len(),
                        exponents: exps.len(),
                    },
                ));
            }
            let op = DOperator::from_parts(&coeffs, &exps)
                .map_err(|e| at(line, ParseErrorKind::InvalidOperator(e)))?;
            record = record.with_operator(op, proven);
        }
        (c, e, _) => {
            let key = if c.is_none() {
                "pf_coefficients"
            } else if e.is_none() {
                "pf_exponents"
            } else {
                "pf_proven"
            };
            return Err(at(end_line, ParseErrorKind::MissingKey(key)));
        }
    }
    record.notes = p.notes;
    record.duplicate = p.duplicate;
    Ok(record)
}

/// The keys of one block with nothing required: the currency of command-line
/// pipes, where a block may carry only a period or only an operator.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Fields {
    pub id: Option<u64>,
    pub period: Option<PeriodSequence>,
    pub names: Option<Vec<String>>,
    pub operator: Option<DOperator>,
    pub pf_proven: Option<bool>,
    pub notes: Option<String>,
    pub duplicate: Option<u64>,
}

/// Parse a single block; blank lines are ignored, so every key may appear
/// at most once in the whole text.
pub fn parse_fields(text: &str) -> Result<Fields, ParseError> {
    let mut p = Pending::default();
    let mut last = 0;
    for (idx, raw) in text.split('\n').enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() {
            continue;
        }
        if last == 0 {
            p.first_line = idx + 1;
        }
        last = idx + 1;
        read_line(&mut p, line, idx + 1, 1)?;
    }
    let operator = match (p.coeffs, p.exps) {
        (None, None) => None,
        (Some((line, coeffs)), Some((_, exps))) => {
            if coeffs.len() != exps.len() {
                return Err(ParseError {
                    line,
                    record: 1,
                    kind: ParseErrorKind::LengthMismatch {
                        coefficients: coeffs.len(),
                        exponents: exps.len(),
                    },
                });
            }
            Some(DOperator::from_parts(&coeffs, &exps).map_err(|e| ParseError {
                line,
                record: 1,
                kind: ParseErrorKind::InvalidOperator(e),
            })?)
        }
        (c, _) => {
            let key = if c.is_none() { "pf_coefficients" } else { "pf_exponents" };
            return Err(ParseError {
                line: last,
                record: 1,
                kind: ParseErrorKind::MissingKey(key),
            });
        }
    };
    Ok(Fields {
        id: p.id,
        period: p.period.map(PeriodSequence::from_integers),
        names: p.names,
        operator,
        pf_proven: p.proven.map(|(_, b)| b),
        notes: p.notes,
        duplicate: p.duplicate,
    })
}

/// `pf_coefficients` and `pf_exponents` lines for an operator.
pub fn serialize_operator(op: &DOperator) -> String {
    let (coeffs, exps) = op.render_lists();
    format!("pf_coefficients: {coeffs}\npf_exponents: {exps}\n")
}

/// A `period` line; non-integral entries are written as `p/q`.
pub fn serialize_period(seq: &PeriodSequence) -> String {
    format!("period: {seq}\n")
}

/// One record in canonical key order, each line LF-terminated.
pub fn serialize_record(r: &FanoRecord) -> String {
    use fmt::Write;
    let mut out = String::new();
    let ints: Vec<BigInt> = r.period.coeffs().iter().map(|c| c.to_integer()).collect();
    let _ = writeln!(out, "id: {}", r.id);
    let _ = writeln!(out, "period: {}", value::render_integers(&ints));
    let _ = writeln!(out, "names: {}", value::render_names(&r.names));
    if let Some(op) = &r.operator {
        out.push_str(&serialize_operator(op));
    }
    if let Some(proven) = r.pf_proven {
        let _ = writeln!(out, "pf_proven: {proven}");
    }
    if let Some(notes) = &r.notes {
        let _ = writeln!(out, "notes: {notes}");
    }
    if let Some(dup) = r.duplicate {
        let _ = writeln!(out, "duplicate: {dup}");
    }
    out
}

/// Canonical text: records separated by exactly one blank line.
pub fn serialize_database(db: &Database) -> String {
    db.records
        .iter()
        .map(serialize_record)
        .collect::<Vec<_>>()
        .join("\n")
}

/// `smooth_fano_N.txt`.
pub fn file_name(dimension: u8) -> String {
    format!("smooth_fano_{dimension}.txt")
}

#[cfg(test)]
mod tests {
    use super::*;

    const P1: &str = "id: 1\nperiod: [1,0,2,0,6,0,20]\nnames: [P1]\npf_coefficients: [4,-1,4]\npf_exponents: [[1,2],[1,0],[0,2]]\npf_proven: false\nnotes: projective line\n";

    fn err_kind(text: &str) -> (usize, usize, ParseErrorKind) {
        let e = parse_database(text, 4).unwrap_err();
        (e.line, e.record, e.kind)
    }

    #[test]
    fn parses_the_p1_record() {
        let db = parse_database(P1, 1).unwrap();
        assert_eq!(db.len(), 1);
        let r = &db.records()[0];
        assert_eq!(r.id, 1);
        assert_eq!(r.names, vec!["P1"]);
        assert_eq!(r.period, PeriodSequence::from_integers([1, 0, 2, 0, 6, 0, 20]));
        let op = r.operator.as_ref().unwrap();
        assert_eq!(op.to_string(), "4*t^2*D - D + 4*t^2");
        assert_eq!(r.pf_proven, Some(false));
        assert_eq!(serialize_database(&db), P1);
    }

    #[test]
    fn empty_input() {
        assert!(parse_database("", 2).unwrap().is_empty());
        assert!(parse_database("\n\n", 2).unwrap().is_empty());
        assert_eq!(serialize_database(&Database::empty(3).unwrap()), "");
    }

    #[test]
    fn operatorless_record() {
        let db = parse_database("id: 7\nperiod: [1,0,0]\nnames: [P4]\n", 4).unwrap();
        assert!(db.records()[0].operator.is_none());
        assert!(db.records()[0].pf_proven.is_none());
    }

    #[test]
    fn key_order_is_irrelevant_and_whitespace_tolerated() {
        let shuffled = "pf_proven: false\nnames: [ P1 ]\npf_exponents: [[1, 2], [1, 0], [0, 2]]\nid: 1\nnotes: projective line  \npf_coefficients: [4, -1, 4]\nperiod: [1, 0, 2, 0, 6, 0, 20]\n";
        let a = parse_database(shuffled, 1).unwrap();
        let b = parse_database(P1, 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(serialize_database(&a), P1);
    }

    #[test]
    fn two_records_have_one_separator() {
        let text = "id: 1\nperiod: [1]\nnames: [A]\n\nid: 2\nperiod: [1,0]\nnames: [B]\nduplicate: 1\n";
        let db = parse_database(text, 4).unwrap();
        let out = serialize_database(&db);
        assert_eq!(out, text);
        assert_eq!(out.matches("\n\n").count(), 1);
        assert!(out.ends_with("duplicate: 1\n"));
    }

    #[test]
    fn errors_carry_line_and_record() {
        let base = "id: 1\nperiod: [1]\nnames: [A]\n\n";
        assert_eq!(
            err_kind(&format!("{base}id: 2\ncolour: red\n")),
            (6, 2, ParseErrorKind::UnknownKey("colour".into()))
        );
        assert_eq!(
            err_kind(&format!("{base}id: 2\nid: 3\n")),
            (6, 2, ParseErrorKind::DuplicateKey("id".into()))
        );
        let (line, record, kind) = err_kind(&format!("{base}id: 2\nperiod: [1,x]\nnames: [B]\n"));
        assert_eq!((line, record), (6, 2));
        assert!(matches!(kind, ParseErrorKind::Malformed { key: "period", .. }));
        assert_eq!(
            err_kind("id: 1\nperiod: [1]\nnames: [A]\npf_coefficients: [1,2]\npf_exponents: [[1,0]]\npf_proven: false\n"),
            (4, 1, ParseErrorKind::LengthMismatch { coefficients: 2, exponents: 1 })
        );
        assert_eq!(
            err_kind(&format!("{base}id: 2\nnames: [B]\n")),
            (5, 2, ParseErrorKind::MissingKey("period"))
        );
        assert_eq!(
            err_kind(&format!("{base}period: [1]\nnames: [B]\n")),
            (5, 2, ParseErrorKind::MissingKey("id"))
        );
        assert_eq!(
            err_kind(&format!("{base}id: 2\nperiod: [1]\n")),
            (5, 2, ParseErrorKind::MissingKey("names"))
        );
        assert_eq!(
            err_kind(&format!("{base}id: 1\nperiod: [1]\nnames: [B]\n")),
            (5, 2, ParseErrorKind::DuplicateId(1))
        );
        assert_eq!(
            err_kind("id: 1\nperiod: [1]\nnames: [A]\npf_coefficients: [1]\npf_exponents: [[1,0]]\n"),
            (5, 1, ParseErrorKind::MissingKey("pf_proven"))
        );
        assert_eq!(err_kind("id 1\n"), (1, 1, ParseErrorKind::MissingSeparator));
        assert!(matches!(
            err_kind("id: 1\nperiod: [1]\nnames: [A]\npf_coefficients: [1]\npf_exponents: [[0,0]]\npf_proven: false\n").2,
            ParseErrorKind::InvalidOperator(OperatorError::ZeroOrder)
        ));
        assert!(matches!(
            err_kind("id: 0\n").2,
            ParseErrorKind::Malformed { key: "id", .. }
        ));
        assert_eq!(parse_database("", 5).unwrap_err().kind, ParseErrorKind::InvalidDimension(5));
    }

    #[test]
    fn fields_of_a_fragment() {
        let f = parse_fields("pf_coefficients: [4,-1,4]\n\npf_exponents: [[1,2],[1,0],[0,2]]\n").unwrap();
        assert_eq!(f.operator.unwrap().to_string(), "4*t^2*D - D + 4*t^2");
        assert!(f.period.is_none() && f.id.is_none());
        let f = parse_fields(P1).unwrap();
        assert_eq!(f.names.unwrap(), vec!["P1"]);
        assert_eq!(f.pf_proven, Some(false));
        assert_eq!(parse_fields("").unwrap(), Fields::default());
        let e = parse_fields("period: [1]\npf_exponents: [[1,0]]\n").unwrap_err();
        assert_eq!((e.line, e.kind), (2, ParseErrorKind::MissingKey("pf_coefficients")));
        let e = parse_fields("period: [1]\n\nperiod: [1]\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DuplicateKey("period".into()));
        let op = parse_fields(P1).unwrap().operator.unwrap();
        assert_eq!(parse_fields(&serialize_operator(&op)).unwrap().operator.unwrap(), op);
    }

    #[test]
    fn crlf_is_accepted() {
        let db = parse_database(&P1.replace('\n', "\r\n"), 1).unwrap();
        assert_eq!(serialize_database(&db), P1);
    }

    fn fourfold_fixture() -> Database {
        let mut r32 = FanoRecord::new(
            32,
            vec!["CKP(31)".into(), "Obro(4,31)".into()],
            PeriodSequence::from_integers([1, 0, 0, 18, 72, 360, 2430]),
        );
        r32.notes = None;
        let r340 = FanoRecord::new(
            340,
            vec!["CKK(262)".into(), "CKP(332)".into()],
            PeriodSequence::from_integers([1, 0, 6, 6, 114, 360, 3390]),
        );
        let short = FanoRecord::new(5, vec!["P4".into()], PeriodSequence::from_integers([1, 0, 0, 0, 72]));
        Database::new(4, vec![r340, short, r32]).unwrap()
    }

    #[test]
    fn queries() {
        let db = fourfold_fixture();
        let hits = db.query(&Filter::new().coefficient(4, 72).coefficient(5, 360)).unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].id, 32);
        assert_eq!(hits[0].names_joined(), "CKP(31), Obro(4,31)");
        let r = db.query(&Filter::new().id(340)).unwrap();
        assert_eq!(r[0].names_joined(), "CKK(262), CKP(332)");
        let ids: Vec<u64> = db.query(&Filter::new()).unwrap().iter().map(|r| r.id).collect();
        assert_eq!(ids, vec![5, 32, 340]);
        // record 5 stores only c_0..c_4, so a c_5 constraint never matches it
        let ids: Vec<u64> = db.query(&Filter::new().coefficient(4, 72)).unwrap().iter().map(|r| r.id).collect();
        assert_eq!(ids, vec![5, 32]);
        assert!(db.query(&Filter::new().coefficient(4, 72).coefficient(5, 0)).unwrap().is_empty());
        assert!(db.query(&Filter::new().id(999)).unwrap().is_empty());
        assert_eq!(db.query(&Filter::new().name("CKP")).unwrap().len(), 2);
        assert_eq!(db.query(&Filter::new().name("Obro").id(340)).unwrap().len(), 0);
        assert_eq!(
            db.query(&Filter::new().coefficient(7, 1)).unwrap_err(),
            QueryError::DegreeOutOfRange(7)
        );
        assert_eq!(
            db.query(&Filter::new().coefficient(1, 0)).unwrap_err(),
            QueryError::DegreeOutOfRange(1)
        );
    }

    #[test]
    fn warnings_for_soft_invariants() {
        let db = fourfold_fixture();
        let w = db.warnings();
        assert_eq!(w.len(), 3, "{w:?}");
        assert!(w[0].contains("not sequential"));
        let db = parse_database(P1, 1).unwrap();
        assert!(db.warnings().is_empty());
        let bare = parse_database("id: 1\nperiod: [1]\nnames: [P1]\nduplicate: 4\n", 1).unwrap();
        let w = bare.warnings();
        assert!(w.iter().any(|s| s.contains("missing id 4")));
        assert!(w.iter().any(|s| s.contains("no operator")));
    }

    #[test]
    fn constructor_rejects_invalid_records() {
        let r = |id| FanoRecord::new(id, vec!["A".into()], PeriodSequence::from_integers([1]));
        assert_eq!(Database::new(1, vec![r(1), r(1)]).unwrap_err(), DatabaseError::DuplicateId(1));
        let mut half = r(2);
        half.pf_proven = Some(false);
        assert_eq!(Database::new(1, vec![half]).unwrap_err(), DatabaseError::ProvenFlag { id: 2 });
        let mut frac = r(3);
        frac.period = PeriodSequence::new(vec![crate::arith::rational(1, 2).unwrap()]);
        assert_eq!(Database::new(1, vec![frac]).unwrap_err(), DatabaseError::BadPeriod { id: 3 });
        assert_eq!(Database::new(0, vec![]).unwrap_err(), DatabaseError::InvalidDimension(0));
    }
}
