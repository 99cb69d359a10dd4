use std::fmt::Write;

use qperiod::FanoRecord;

/// Amount of detail in a search response, `1..=3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PrintLevel(u8);

impl PrintLevel {
    pub const MIN: PrintLevel = PrintLevel(1);
    pub const MAX: PrintLevel = PrintLevel(3);

    pub fn new(level: u8) -> Option<Self> {
        (1..=3).contains(&level).then_some(PrintLevel(level))
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

impl Default for PrintLevel {
    fn default() -> Self {
        PrintLevel::MIN
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            c => out.push(c),
        }
    }
    out
}

fn element(out: &mut String, name: &str, value: &str) {
    let _ = writeln!(out, "    <{name}>{}</{name}>", escape(value));
}

fn render_result(out: &mut String, row: usize, r: &FanoRecord, level: PrintLevel) {
    let _ = writeln!(out, "  <result row=\"{row}\" printlevel=\"{}\">", level.get());
    element(out, "id", &r.id.to_string());
    element(out, "names", &r.names_joined());
    for d in 2..=6 {
        if let Some(c) = r.period.get(d) {
            element(out, &format!("c{d}"), &c.to_string());
        }
    }
    if level.get() >= 2 {
        element(out, "period", &r.period.to_string());
        if let Some(notes) = &r.notes {
            element(out, "notes", notes);
        }
        if let Some(dup) = r.duplicate {
            element(out, "duplicate", &dup.to_string());
        }
    }
    if level.get() >= 3 {
        if let Some(op) = &r.operator {
            let (coeffs, exps) = op.render_lists();
            element(out, "pf_coefficients", &coeffs);
            element(out, "pf_exponents", &exps);
        }
        if let Some(proven) = r.pf_proven {
            element(out, "pf_proven", &proven.to_string());
        }
    }
    out.push_str("  </result>\n");
}

/// Full response body: declaration, banner comment, and one `result` per
/// record, indented by two spaces per level.
pub fn render_results(records: &[&FanoRecord], level: PrintLevel) -> String {
    let mut out = String::from("<?xml version=\"1.0\"?>\n<!-- Graded Ring Database -->\n");
    let _ = writeln!(out, "<results numrows=\"{}\">", records.len());
    for (i, r) in records.iter().enumerate() {
        render_result(&mut out, i + 1, r, level);
    }
    out.push_str("</results>\n");
    out
}
