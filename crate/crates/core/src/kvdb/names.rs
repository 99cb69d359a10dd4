//! Naming schemes for database entries.
//!
//! Low-dimensional entries use `P1, P2, P3, Q3, dP(k), V(3,k), B(3,k), MM(r,k)`;
//! four-dimensional entries use `P4, Q4, FI(4,k), V(4,k), MW(4,k), Obro(4,k),
//! Str(k), CKP(k), CKK(k)`. `S1 x S2` names a product, and the dimensions of
//! the factors must add up.

use std::fmt;

use crate::record::FanoRecord;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NameWarning {
    pub name: String,
    /// The offending factor, or the whole name.
    pub token: String,
    pub message: String,
}

impl fmt::Display for NameWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.token == self.name {
            write!(f, "name '{}': {}", self.name, self.message)
        } else {
            write!(f, "name '{}': '{}' {}", self.name, self.token, self.message)
        }
    }
}

fn positive(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) && !s.trim_start_matches('0').is_empty()
}

/// Dimension of the manifold a single (non-product) name denotes.
fn atom_dimension(token: &str) -> Option<u8> {
    match token {
        "P1" => return Some(1),
        "P2" => return Some(2),
        "P3" | "Q3" => return Some(3),
        "P4" | "Q4" => return Some(4),
        _ => {}
    }
    let (head, args) = token.strip_suffix(')')?.split_once('(')?;
    let args: Vec<&str> = args.split(',').collect();
    match (head, args.as_slice()) {
        ("dP", [k]) if positive(k) => Some(2),
        ("V" | "B", ["3", k]) if positive(k) => Some(3),
        ("MM", [r, k]) if positive(r) && positive(k) => Some(3),
        ("FI" | "V" | "MW" | "Obro", ["4", k]) if positive(k) => Some(4),
        ("Str" | "CKP" | "CKK", [k]) if positive(k) => Some(4),
        _ => None,
    }
}

/// Warnings for one name in a database of the given dimension.
pub fn validate_name(name: &str, dimension: u8) -> Vec<NameWarning> {
    let warn = |token: &str, message: String| NameWarning {
        name: name.to_string(),
        token: token.to_string(),
        message,
    };
    let factors: Vec<&str> = name.split(" x ").map(str::trim).collect();
    let mut out = Vec::new();
    let mut total = 0u32;
    for f in &factors {
        match atom_dimension(f) {
            Some(d) => total += d as u32,
            None => out.push(warn(f, "is not a recognized name".into())),
        }
    }
    if out.is_empty() && total != dimension as u32 {
        let what = if factors.len() > 1 {
            format!("has factors of total dimension {total}")
        } else {
            format!("is a {total}-dimensional name")
        };
        out.push(warn(name, format!("{what}, expected {dimension}")));
    }
    out
}

pub fn validate_names(record: &FanoRecord, dimension: u8) -> Vec<NameWarning> {
    record
        .names
        .iter()
        .flat_map(|n| validate_name(n, dimension))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clean(name: &str, dim: u8) -> bool {
        validate_name(name, dim).is_empty()
    }

    #[test]
    fn table_names() {
        for n in ["P3", "Q3", "V(3,22)", "B(3,5)", "MM(2,3)", "MM(5,1)"] {
            assert!(clean(n, 3), "{n}");
        }
        for n in ["P2", "dP(7)", "dP(3)"] {
            assert!(clean(n, 2), "{n}");
        }
        assert!(clean("P1", 1));
        for n in ["P4", "Q4", "FI(4,2)", "V(4,10)", "MW(4,18)", "Obro(4,31)", "Str(7)", "CKP(332)", "CKK(262)"] {
            assert!(clean(n, 4), "{n}");
        }
    }

    #[test]
    fn products() {
        assert!(clean("P1 x dP(7)", 3));
        assert!(clean("P1 x P1", 2));
        assert!(clean("P1 x P1 x P1", 3));
        assert!(clean("P1 x MM(2,34)", 4));
        assert!(clean("dP(6) x dP(8)", 4));
        let w = validate_name("P1 x P1", 3);
        assert_eq!(w.len(), 1);
        assert!(w[0].message.contains("total dimension 2"));
        let w = validate_name("P1 x Foo", 2);
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].token, "Foo");
    }

    #[test]
    fn unknown_and_misplaced_names() {
        let w = validate_name("XYZZY(9)", 4);
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].token, "XYZZY(9)");
        assert!(w[0].to_string().contains("XYZZY(9)"));
        for bad in ["dP(0)", "dP()", "V(5,2)", "MM(2)", "CKP(x)", "p1", "P1 x", "dP(7"] {
            assert!(!clean(bad, 3) && !clean(bad, 4), "{bad}");
        }
        assert!(!clean("P4", 3));
        assert!(!clean("MM(2,3)", 4));
    }
}
