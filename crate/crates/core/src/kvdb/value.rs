//! Value syntax of the key-value files.
//!
//! All bracketed values tolerate whitespace around brackets, commas and
//! elements; serialization emits the spaceless canonical form.

use num_bigint::BigInt;

#[derive(Debug)]
pub(crate) struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        Cursor { text, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let rest = self.rest();
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn expect(&mut self, c: char) -> Result<(), String> {
        match self.peek() {
            Some(found) if found == c => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(found) => Err(format!("expected '{c}', found '{found}'")),
            None => Err(format!("expected '{c}', found end of value")),
        }
    }

    fn finish(&mut self) -> Result<(), String> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(format!("unexpected trailing '{c}'")),
        }
    }

    fn integer(&mut self) -> Result<BigInt, String> {
        self.skip_ws();
        let rest = self.rest();
        let bytes = rest.as_bytes();
        let mut end = 0;
        if matches!(bytes.first(), Some(b'-') | Some(b'+')) {
            end = 1;
        }
        let digits_start = end;
        while end < bytes.len() && bytes[end].is_ascii_digit() {
            end += 1;
        }
        if end == digits_start {
            return Err(match rest.chars().next() {
                Some(c) => format!("expected an integer, found '{c}'"),
                None => "expected an integer, found end of value".into(),
            });
        }
        let value = rest[..end]
            .trim_start_matches('+')
            .parse::<BigInt>()
            .map_err(|e| e.to_string())?;
        self.pos += end;
        Ok(value)
    }

    /// `[item, item, ...]` with a caller-supplied item parser; `[]` is allowed.
    fn list<T>(
        &mut self,
        mut item: impl FnMut(&mut Self) -> Result<T, String>,
    ) -> Result<Vec<T>, String> {
        self.expect('[')?;
        let mut out = Vec::new();
        if self.peek() == Some(']') {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(']') => {
                    self.pos += 1;
                    return Ok(out);
                }
                Some(c) => return Err(format!("expected ',' or ']', found '{c}'")),
                None => return Err("unterminated list".into()),
            }
        }
    }
}

pub(crate) fn parse_integer(text: &str) -> Result<BigInt, String> {
    let mut cur = Cursor::new(text);
    let v = cur.integer()?;
    cur.finish()?;
    Ok(v)
}

pub(crate) fn parse_positive(text: &str) -> Result<u64, String> {
    let v = parse_integer(text)?;
    let v: u64 = v
        .try_into()
        .map_err(|_| format!("{text} is not a positive 64-bit integer"))?;
    if v == 0 {
        return Err("expected a positive integer, found 0".into());
    }
    Ok(v)
}

pub(crate) fn parse_integer_list(text: &str) -> Result<Vec<BigInt>, String> {
    let mut cur = Cursor::new(text);
    let v = cur.list(|c| c.integer())?;
    cur.finish()?;
    Ok(v)
}

pub(crate) fn parse_pair_list(text: &str) -> Result<Vec<(u32, u32)>, String> {
    let mut cur = Cursor::new(text);
    let v = cur.list(|c| {
        let pair = c.list(|c| c.integer())?;
        if pair.len() != 2 {
            return Err(format!("expected a pair [m,n], found {} entries", pair.len()));
        }
        let conv = |x: &BigInt| {
            u32::try_from(x).map_err(|_| format!("exponent {x} is not a non-negative 32-bit integer"))
        };
        Ok((conv(&pair[0])?, conv(&pair[1])?))
    })?;
    cur.finish()?;
    Ok(v)
}

pub(crate) fn parse_bool(text: &str) -> Result<bool, String> {
    match text.trim() {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(format!("expected true or false, found '{other}'")),
    }
}

/// Bracketed names, split at commas outside parentheses: `[CKP(31), Obro(4,31)]`.
pub(crate) fn parse_names(text: &str) -> Result<Vec<String>, String> {
    let inner = text
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| "names must be enclosed in [ ]".to_string())?;
    let mut names = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in inner.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err("unbalanced ')' in names".into());
                }
            }
            '[' | ']' => return Err(format!("unexpected '{c}' inside names")),
            ',' if depth == 0 => {
                names.push(inner[start..i].trim().to_string());
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err("unbalanced '(' in names".into());
    }
    let last = inner[start..].trim();
    if !(names.is_empty() && last.is_empty()) {
        names.push(last.to_string());
    }
    if names.iter().any(|n| n.is_empty()) {
        return Err("empty name in list".into());
    }
    Ok(names)
}

pub(crate) fn render_integers<'a, T: std::fmt::Display + 'a>(
    values: impl IntoIterator<Item = &'a T>,
) -> String {
    let parts: Vec<String> = values.into_iter().map(|v| v.to_string()).collect();
    format!("[{}]", parts.join(","))
}

pub(crate) fn render_names(names: &[String]) -> String {
    format!("[{}]", names.join(", "))
}
