use super::{lines, to_origin, ParseError, ParseErrorKind, PatternFile};
use crate::universe::Coord;

const LINE_WIDTH: usize = 70;

/// Parses an RLE document.
pub fn parse_rle(text: &str) -> Result<PatternFile, ParseError> {
    let mut comments = Vec::new();
    let mut all = lines(text).peekable();
    let mut header = None;
    for (no, line) in all.by_ref() {
        let trimmed = line.trim();
        if let Some(c) = trimmed.strip_prefix('#') {
            comments.push(c.to_string());
        } else if !trimmed.is_empty() {
            header = Some((no, line));
            break;
        }
    }
    let Some((header_line, header)) = header else {
        return Err(ParseError::new(ParseErrorKind::MissingHeader, 1, 1));
    };
    let (width, height) = parse_header(header, header_line)?;
    let mut cells = Vec::new();
    decode_body(all, Some((width, height)), &mut cells)?;
    Ok(PatternFile { comments, width, height, cells })
}

fn parse_header(line: &str, no: usize) -> Result<(u64, u64), ParseError> {
    let malformed = |msg: String, col: usize| ParseError::new(ParseErrorKind::MalformedHeader(msg), no, col);
    let mut width = None;
    let mut height = None;
    let mut col = 1;
    for field in line.split(',') {
        let field_col = col + field.len() - field.trim_start().len();
        col += field.chars().count() + 1;
        let Some((key, value)) = field.split_once('=') else {
            return Err(malformed(format!("expected `key = value`, found `{}`", field.trim()), field_col));
        };
        let (key, value) = (key.trim(), value.trim());
        match key {
            "x" | "y" => {
                let n: u64 = value
                    .parse()
                    .map_err(|_| malformed(format!("`{key}` must be a non-negative integer"), field_col))?;
                let slot = if key == "x" { &mut width } else { &mut height };
                if slot.replace(n).is_some() {
                    return Err(malformed(format!("duplicate `{key}`"), field_col));
                }
            }
            "rule" => {
                let norm: String = value.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase();
                if norm != "b3/s23" && norm != "23/3" {
                    return Err(ParseError::new(ParseErrorKind::UnsupportedRule(value.to_string()), no, field_col));
                }
            }
            other => return Err(malformed(format!("unknown key `{other}`"), field_col)),
        }
    }
    match (width, height) {
        (Some(w), Some(h)) => Ok((w, h)),
        _ => Err(malformed("both `x` and `y` are required".into(), 1)),
    }
}

/// Decodes run-length tokens up to `!`. With an extent, cells beyond it are
/// an error.
fn decode_body<'a>(
    body: impl Iterator<Item = (usize, &'a str)>,
    extent: Option<(u64, u64)>,
    out: &mut Vec<Coord>,
) -> Result<(), ParseError> {
    let (mut x, mut y) = (0u64, 0u64);
    let mut count: Option<u64> = None;
    let mut last = (1, 1);
    for (no, line) in body {
        for (ci, ch) in line.chars().enumerate() {
            let col = ci + 1;
            last = (no, col + 1);
            let err = |k| ParseError::new(k, no, col);
            match ch {
                '0'..='9' => {
                    let d = ch as u64 - '0' as u64;
                    let n = count.unwrap_or(0).checked_mul(10).and_then(|n| n.checked_add(d));
                    match n {
                        Some(n) if n <= u32::MAX as u64 => count = Some(n),
                        _ => return Err(err(ParseErrorKind::BadCount)),
                    }
                }
                'b' | 'o' | '$' | '!' => {
                    let n = count.take().unwrap_or(1);
                    if n == 0 {
                        return Err(err(ParseErrorKind::BadCount));
                    }
                    match ch {
                        'b' | 'o' => {
                            if let Some((w, h)) = extent {
                                if x + n > w || y >= h {
                                    return Err(err(ParseErrorKind::Overrun));
                                }
                            }
                            if ch == 'o' {
                                out.extend((x..x + n).map(|cx| Coord::new(cx as i64, y as i64)));
                            }
                            x += n;
                        }
                        '$' => {
                            y += n;
                            x = 0;
                            if let Some((_, h)) = extent {
                                if y > h {
                                    return Err(err(ParseErrorKind::Overrun));
                                }
                            }
                        }
                        _ => {
                            out.sort_unstable();
                            return Ok(());
                        }
                    }
                }
                c if c.is_whitespace() => {}
                c => return Err(err(ParseErrorKind::UnknownToken(c))),
            }
        }
    }
    Err(ParseError::new(ParseErrorKind::Unterminated, last.0, last.1))
}

/// Decodes a headerless body such as `bo$2bo$3o!`.
pub fn decode_rle_body(body: &str) -> Result<Vec<Coord>, ParseError> {
    let mut cells = Vec::new();
    decode_body(lines(body), None, &mut cells)?;
    Ok(cells)
}

fn push_run(tokens: &mut Vec<String>, n: u64, tag: char) {
    if n == 1 {
        tokens.push(tag.to_string());
    } else if n > 1 {
        tokens.push(format!("{n}{tag}"));
    }
}

/// Tokens of the body of `cells`, which must already sit at the origin.
fn body_tokens(cells: &[Coord]) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut row = 0i64;
    let mut i = 0;
    while i < cells.len() {
        let y = cells[i].y;
        push_run(&mut tokens, (y - row) as u64, '$');
        row = y;
        let mut x = 0i64;
        while i < cells.len() && cells[i].y == y {
            let start = cells[i].x;
            let mut end = start;
            i += 1;
            while i < cells.len() && cells[i].y == y && cells[i].x == end + 1 {
                end += 1;
                i += 1;
            }
            push_run(&mut tokens, (start - x) as u64, 'b');
            push_run(&mut tokens, (end - start + 1) as u64, 'o');
            x = end + 1;
        }
    }
    tokens.push("!".into());
    tokens
}

/// Single-line body, translated to the origin first.
pub fn encode_rle_body(cells: &[Coord]) -> String {
    let (cells, _, _) = to_origin(cells);
    body_tokens(&cells).concat()
}

/// Canonical RLE: origin-normalized, greedy runs, lines at most 70 columns,
/// LF separated, no trailing newline.
pub fn emit_rle(cells: &[Coord]) -> String {
    let (cells, w, h) = to_origin(cells);
    if cells.is_empty() {
        return "x = 0, y = 0\n!".to_string();
    }
    let mut out = format!("x = {w}, y = {h}, rule = B3/S23\n");
    let mut line_len = 0;
    for t in body_tokens(&cells) {
        if line_len > 0 && line_len + t.len() > LINE_WIDTH {
            out.push('\n');
            line_len = 0;
        }
        line_len += t.len();
        out.push_str(&t);
    }
    out
}
