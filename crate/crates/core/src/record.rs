use crate::operator::DOperator;
use crate::sequence::PeriodSequence;

/// One database entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanoRecord {
    pub id: u64,
    pub names: Vec<String>,
    pub period: PeriodSequence,
    pub operator: Option<DOperator>,
    pub pf_proven: Option<bool>,
    pub notes: Option<String>,
    pub duplicate: Option<u64>,
}

impl FanoRecord {
    pub fn new(id: u64, names: Vec<String>, period: PeriodSequence) -> Self {
        FanoRecord {
            id,
            names,
            period,
            operator: None,
            pf_proven: None,
            notes: None,
            duplicate: None,
        }
    }

    pub fn with_operator(mut self, operator: DOperator, proven: bool) -> Self {
        self.operator = Some(operator);
        self.pf_proven = Some(proven);
        self
    }

    pub fn with_notes(mut self, notes: impl Into<String>) -> Self {
        self.notes = Some(notes.into());
        self
    }

    /// `names` joined the way the search service renders them.
    pub fn names_joined(&self) -> String {
        self.names.join(", ")
    }
}
