//! Pattern file formats and catalog persistence.

mod catalog;
mod plaintext;
mod rle;
mod table;

use std::fmt;
use std::path::Path;

pub use catalog::{load_catalog, save_catalog, CATALOG_VERSION};
pub use plaintext::{emit_plaintext, parse_plaintext};
pub use rle::{decode_rle_body, emit_rle, encode_rle_body, parse_rle};
pub use table::{save_table, table_to_json, TABLE_VERSION};

use crate::universe::Coord;

/// A parsed pattern file. Cells are placed with the top-left of the declared
/// extent at the origin.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PatternFile {
    pub comments: Vec<String>,
    pub width: u64,
    pub height: u64,
    pub cells: Vec<Coord>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Rle,
    Plaintext,
}

impl Format {
    /// `.cells` and `.txt` are plaintext; everything else is RLE.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
            Some("cells") | Some("txt") => Format::Plaintext,
            _ => Format::Rle,
        }
    }
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "rle" => Ok(Format::Rle),
            "plaintext" | "cells" => Ok(Format::Plaintext),
            other => Err(format!("unknown format `{other}` (expected rle or plaintext)")),
        }
    }
}

/// Parses raw bytes, reporting invalid UTF-8 as a positioned error.
pub fn parse_bytes(bytes: &[u8], format: Format) -> Result<PatternFile, ParseError> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let prefix = &bytes[..e.valid_up_to()];
        let line = prefix.iter().filter(|&&b| b == b'\n').count() + 1;
        let column = prefix.iter().rev().take_while(|&&b| b != b'\n').count() + 1;
        ParseError::new(ParseErrorKind::InvalidUtf8, line, column)
    })?;
    match format {
        Format::Rle => parse_rle(text),
        Format::Plaintext => parse_plaintext(text),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    MissingHeader,
    MalformedHeader(String),
    UnsupportedRule(String),
    UnknownToken(char),
    BadCount,
    Overrun,
    Unterminated,
    InvalidUtf8,
    BadCharacter(char),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::MissingHeader => f.write_str("missing `x = .., y = ..` header"),
            ParseErrorKind::MalformedHeader(m) => write!(f, "malformed header: {m}"),
            ParseErrorKind::UnsupportedRule(r) => write!(f, "unsupported rule `{r}` (only B3/S23)"),
            ParseErrorKind::UnknownToken(c) => write!(f, "unknown token {c:?}"),
            ParseErrorKind::BadCount => f.write_str("run count must be a positive integer"),
            ParseErrorKind::Overrun => f.write_str("pattern overruns its declared extent"),
            ParseErrorKind::Unterminated => f.write_str("pattern is missing its terminating `!`"),
            ParseErrorKind::InvalidUtf8 => f.write_str("input is not valid UTF-8"),
            ParseErrorKind::BadCharacter(c) => write!(f, "unexpected character {c:?} (expected `.` or `O`)"),
        }
    }
}

/// A parse failure with a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
}

impl ParseError {
    pub(crate) fn new(kind: ParseErrorKind, line: usize, column: usize) -> Self {
        ParseError { kind, line, column }
    }
}

/// Splits on LF, dropping a trailing CR from each line.
pub(crate) fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.split('\n').enumerate().map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
}

/// Translates cells so the bounding-box min corner is the origin, sorted.
pub(crate) fn to_origin(cells: &[Coord]) -> (Vec<Coord>, u64, u64) {
    match crate::universe::BoundingBox::of(cells) {
        None => (Vec::new(), 0, 0),
        Some(b) => {
            let mut v: Vec<Coord> = cells.iter().map(|c| Coord::new(c.x - b.min.x, c.y - b.min.y)).collect();
            v.sort_unstable();
            v.dedup();
            (v, b.width(), b.height())
        }
    }
}
