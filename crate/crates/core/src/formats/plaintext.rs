use super::{lines, to_origin, ParseError, ParseErrorKind, PatternFile};
use crate::universe::Coord;

/// Parses the `.cells` plaintext format: `!` comment lines, then one row per
/// line with `.` dead and `O` alive.
pub fn parse_plaintext(text: &str) -> Result<PatternFile, ParseError> {
    let mut comments = Vec::new();
    let mut rows: Vec<&str> = Vec::new();
    let mut body_lines = Vec::new();
    for (no, line) in lines(text) {
        if rows.is_empty() && line.starts_with('!') {
            comments.push(line[1..].to_string());
            continue;
        }
        rows.push(line);
        body_lines.push(no);
    }
    while rows.last().is_some_and(|r| r.is_empty()) {
        rows.pop();
    }
    let mut cells = Vec::new();
    let mut width = 0u64;
    for (y, (row, no)) in rows.iter().zip(body_lines).enumerate() {
        let mut w = 0u64;
        for (x, ch) in row.chars().enumerate() {
            match ch {
                '.' => {}
                'O' => cells.push(Coord::new(x as i64, y as i64)),
                c => return Err(ParseError::new(ParseErrorKind::BadCharacter(c), no, x + 1)),
            }
            w += 1;
        }
        width = width.max(w);
    }
    Ok(PatternFile { comments, width, height: rows.len() as u64, cells })
}

/// Origin-normalized plaintext; every row is written at full width and ends
/// with LF. The empty set emits nothing.
pub fn emit_plaintext(cells: &[Coord]) -> String {
    let (cells, w, h) = to_origin(cells);
    let mut grid = vec![vec![b'.'; w as usize]; h as usize];
    for c in &cells {
        grid[c.y as usize][c.x as usize] = b'O';
    }
    let mut out = String::with_capacity(((w + 1) * h) as usize);
    for row in grid {
        out.push_str(std::str::from_utf8(&row).expect("ascii"));
        out.push('\n');
    }
    out
}
