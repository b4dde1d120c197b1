//! Text format for vector sets.
//!
//! ```text
//! n s
//! c_1 c_2 ... c_n      (s lines, one vector each)
//! ```
//!
//! ASCII decimal integers separated by single spaces, LF line endings, no
//! leading or trailing whitespace. The writer emits vectors in ascending
//! lexicographic order, so `write_set(&read_set(x)?)` is the canonical form
//! of `x`. The reader tolerates a missing final newline and duplicate vector
//! lines (the set is deduplicated), nothing else.

use std::fmt;

use thiserror::Error;

use crate::linalg::IntVector;
use crate::vectorset::VectorSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    EmptyInput,
    /// Header line does not consist of exactly two tokens.
    MalformedHeader {
        tokens: usize,
    },
    ZeroDimension,
    NotAnInteger(String),
    /// A vector line with the wrong number of coordinates.
    WrongTokenCount {
        expected: usize,
        found: usize,
    },
    /// Fewer vector lines than the header announced.
    MissingVectors {
        declared: usize,
        found: usize,
    },
    /// Non-empty content after the announced vectors.
    TrailingContent,
    /// Empty token, leading/trailing whitespace, tabs or CR.
    BadWhitespace,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: ", self.line, self.column)?;
        match &self.kind {
            ParseErrorKind::EmptyInput => write!(f, "empty input, expected header \"n s\""),
            ParseErrorKind::MalformedHeader { tokens } => {
                write!(f, "malformed header: expected \"n s\", found {tokens} tokens")
            }
            ParseErrorKind::ZeroDimension => write!(f, "dimension must be positive"),
            ParseErrorKind::NotAnInteger(tok) => write!(f, "not an integer: {tok:?}"),
            ParseErrorKind::WrongTokenCount { expected, found } => {
                write!(f, "expected {expected} coordinates, found {found}")
            }
            ParseErrorKind::MissingVectors { declared, found } => {
                write!(f, "declared {declared} vectors, found {found}")
            }
            ParseErrorKind::TrailingContent => write!(f, "unexpected content after the last vector"),
            ParseErrorKind::BadWhitespace => {
                write!(f, "tokens must be separated by single spaces with no surrounding whitespace")
            }
        }
    }
}

fn err(line: usize, column: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, column, kind }
}

/// Split a line into `(column, token)` pairs, rejecting any whitespace other
/// than single separating spaces.
fn tokens(line: &str, lineno: usize) -> Result<Vec<(usize, &str)>, ParseError> {
    if let Some(pos) = line.find(|c: char| c.is_whitespace() && c != ' ') {
        return Err(err(lineno, pos + 1, ParseErrorKind::BadWhitespace));
    }
    let mut out = Vec::new();
    let mut col = 1;
    for tok in line.split(' ') {
        if tok.is_empty() {
            return Err(err(lineno, col, ParseErrorKind::BadWhitespace));
        }
        out.push((col, tok));
        col += tok.len() + 1;
    }
    Ok(out)
}

fn integer<T: std::str::FromStr>(tok: &str, line: usize, col: usize) -> Result<T, ParseError> {
    let digits = tok.strip_prefix('-').unwrap_or(tok);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err(line, col, ParseErrorKind::NotAnInteger(tok.to_string())));
    }
    tok.parse().map_err(|_| err(line, col, ParseErrorKind::NotAnInteger(tok.to_string())))
}

/// Parse a vector-set file.
pub fn read_set(text: &str) -> Result<VectorSet, ParseError> {
    let body = text.strip_suffix('\n').unwrap_or(text);
    if body.is_empty() {
        return Err(err(1, 1, ParseErrorKind::EmptyInput));
    }
    let mut lines = body.split('\n').enumerate().map(|(k, l)| (k + 1, l));

    let (_, header) = lines.next().expect("split yields at least one line");
    let head = tokens(header, 1)?;
    if head.len() != 2 {
        return Err(err(1, 1, ParseErrorKind::MalformedHeader { tokens: head.len() }));
    }
    if head[0].1.starts_with('-') {
        return Err(err(1, 1, ParseErrorKind::NotAnInteger(head[0].1.to_string())));
    }
    if head[1].1.starts_with('-') {
        return Err(err(1, head[1].0, ParseErrorKind::NotAnInteger(head[1].1.to_string())));
    }
    let dim: usize = integer(head[0].1, 1, head[0].0)?;
    let count: usize = integer(head[1].1, 1, head[1].0)?;
    if dim == 0 {
        return Err(err(1, 1, ParseErrorKind::ZeroDimension));
    }

    let mut vectors = Vec::new();
    for (lineno, line) in lines.by_ref() {
        if vectors.len() == count {
            return Err(err(lineno, 1, ParseErrorKind::TrailingContent));
        }
        let toks = tokens(line, lineno)?;
        if toks.len() != dim {
            return Err(err(lineno, 1, ParseErrorKind::WrongTokenCount { expected: dim, found: toks.len() }));
        }
        let coords =
            toks.iter().map(|&(col, tok)| integer::<i64>(tok, lineno, col)).collect::<Result<Vec<_>, _>>()?;
        vectors.push(IntVector::new(coords));
    }
    if vectors.len() < count {
        let line = vectors.len() + 2;
        return Err(err(line, 1, ParseErrorKind::MissingVectors { declared: count, found: vectors.len() }));
    }
    Ok(VectorSet::from_vectors(dim, vectors).expect("dimensions validated while parsing"))
}

/// Serialize a set in canonical form.
pub fn write_set(set: &VectorSet) -> String {
    let mut out = format!("{} {}\n", set.dim(), set.len());
    for v in set.iter() {
        out.push_str(&v.to_string());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_a2() {
        let s = read_set("2 6\n1 0\n-1 0\n0 1\n0 -1\n1 -1\n-1 1\n").unwrap();
        assert_eq!(s.len(), 6);
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&[1, -1].into()));
        assert_eq!(write_set(&s), "2 6\n-1 0\n-1 1\n0 -1\n0 1\n1 -1\n1 0\n");
    }

    #[test]
    fn missing_vectors() {
        let e = read_set("2 3\n1 0\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MissingVectors { declared: 3, found: 1 });
        assert_eq!(e.line, 3);
        assert!(e.to_string().contains("declared 3 vectors, found 1"));
    }

    #[test]
    fn diagnostics_carry_positions() {
        let e = read_set("2 2\n1 0\n0 x\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 3));
        assert_eq!(e.kind, ParseErrorKind::NotAnInteger("x".into()));

        let e = read_set("2 1\n1 0 0\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::WrongTokenCount { expected: 2, found: 3 });

        let e = read_set("2 1\n1  0\n").unwrap_err();
        assert_eq!((e.line, e.column, e.kind), (2, 3, ParseErrorKind::BadWhitespace));

        let e = read_set("2 1\r\n1 0\n").unwrap_err();
        assert_eq!((e.line, e.column, e.kind), (1, 4, ParseErrorKind::BadWhitespace));

        let e = read_set("2 1\n1 0\n0 1\n").unwrap_err();
        assert_eq!((e.line, e.kind), (3, ParseErrorKind::TrailingContent));

        let e = read_set("2\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MalformedHeader { tokens: 1 });

        assert_eq!(read_set("").unwrap_err().kind, ParseErrorKind::EmptyInput);
        assert_eq!(read_set("0 0\n").unwrap_err().kind, ParseErrorKind::ZeroDimension);
        assert!(matches!(
            read_set("1 1\n99999999999999999999\n").unwrap_err().kind,
            ParseErrorKind::NotAnInteger(_)
        ));
        assert!(matches!(read_set("1 1\n+1\n").unwrap_err().kind, ParseErrorKind::NotAnInteger(_)));
        assert!(matches!(read_set("-1 1\n1\n").unwrap_err().kind, ParseErrorKind::NotAnInteger(_)));
    }

    #[test]
    fn lenient_on_final_newline_and_duplicates() {
        let s = read_set("1 3\n1\n-1\n1").unwrap();
        assert_eq!(write_set(&s), "1 2\n-1\n1\n");
        assert_eq!(read_set("3 0\n").unwrap().len(), 0);
    }
}
