//! RLE and plaintext (`.cells`) pattern codecs for square-lattice grids.
//!
//! Encoders write the canonical form of the grid (bounding box at the origin)
//! and are byte-deterministic:
//!
//! * RLE: `x = <w>, y = <h>, rule = <rule>\n` followed by the body, wrapped
//!   at 70 columns without splitting a run, ending in `!` and no newline.
//!   Two-state grids use `b`/`o`; grids with any color above 1 use `b` for
//!   dead and `A`..`X` for colors 1..24.
//! * Plaintext: one line per row, full bounding-box width, `.` dead and `O`
//!   live, each line terminated by `\n`. No comment lines are written.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::grid::{CellState, Coord, Grid, Topology, DEAD};

use super::{AutomatonError, RuleSet};

const RLE_WIDTH: usize = 70;
const MAX_RLE_COLOR: CellState = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatternFormat {
    Rle,
    Plaintext,
}

impl PatternFormat {
    /// `.cells`/`.txt` are plaintext; anything else is read as RLE.
    pub fn from_path(path: &Path) -> PatternFormat {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .as_deref()
        {
            Some("cells" | "txt") => PatternFormat::Plaintext,
            _ => PatternFormat::Rle,
        }
    }
}

impl fmt::Display for PatternFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PatternFormat::Rle => "rle",
            PatternFormat::Plaintext => "plaintext",
        })
    }
}

impl FromStr for PatternFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "rle" => Ok(PatternFormat::Rle),
            "plaintext" | "cells" => Ok(PatternFormat::Plaintext),
            other => Err(format!("unknown pattern format `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("pattern codecs support square lattices only, got {0}")]
    UnsupportedTopology(Topology),
    #[error("cell state {state} cannot be written in {format} format")]
    UnsupportedState {
        state: CellState,
        format: PatternFormat,
    },
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> PatternError {
    PatternError::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Decodes a pattern with its top-left corner at the origin. The RLE header
/// is optional; its `rule` entry, when present, is returned alongside.
pub fn decode_pattern(
    text: &str,
    format: PatternFormat,
) -> Result<(Grid, Option<RuleSet>), PatternError> {
    match format {
        PatternFormat::Rle => decode_rle(text),
        PatternFormat::Plaintext => decode_plaintext(text).map(|g| (g, None)),
    }
}

/// Encodes with the Life rule in the RLE header.
pub fn encode_pattern(g: &Grid, format: PatternFormat) -> Result<String, PatternError> {
    encode_pattern_with_rule(g, format, &RuleSet::LIFE)
}

pub fn encode_pattern_with_rule(
    g: &Grid,
    format: PatternFormat,
    rule: &RuleSet,
) -> Result<String, PatternError> {
    if g.topology() != Topology::Square {
        return Err(PatternError::UnsupportedTopology(g.topology()));
    }
    match format {
        PatternFormat::Rle => encode_rle(g, rule),
        PatternFormat::Plaintext => encode_plaintext(g),
    }
}

fn decode_rle(text: &str) -> Result<(Grid, Option<RuleSet>), PatternError> {
    let mut grid = Grid::new(Topology::Square);
    let mut rule = None;
    let mut seen_header = false;
    let mut seen_body = false;
    let (mut x, mut y) = (0i64, 0i64);
    let mut run: Option<(u64, usize, usize)> = None;
    let mut last = (1, 1);

    for (li, raw) in text.lines().enumerate() {
        let line_no = li + 1;
        let line = raw.trim_end_matches('\r');
        let trimmed = line.trim_start();
        if !seen_body {
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if !seen_header && trimmed.starts_with('x') {
                rule = parse_rle_header(trimmed, line_no)?;
                seen_header = true;
                continue;
            }
        }
        seen_body = true;
        for (ci, ch) in line.char_indices() {
            let col = ci + 1;
            last = (line_no, col);
            if let Some(d) = ch.to_digit(10) {
                let (n, l, c) = run.unwrap_or((0, line_no, col));
                let n = n
                    .checked_mul(10)
                    .and_then(|n| n.checked_add(u64::from(d)))
                    .filter(|&n| n <= u64::from(u32::MAX))
                    .ok_or_else(|| parse_err(l, c, "run count too large"))?;
                run = Some((n, l, c));
                continue;
            }
            if ch.is_whitespace() {
                continue;
            }
            let count = match run.take() {
                Some((0, l, c)) => return Err(parse_err(l, c, "run count must be positive")),
                Some((n, ..)) => n as i64,
                None => 1,
            };
            let state = match ch {
                'b' | '.' => Some(DEAD),
                'o' => Some(1),
                'A'..='X' => Some(ch as u8 - b'A' + 1),
                '$' => {
                    y += count;
                    x = 0;
                    None
                }
                '!' => {
                    if count != 1 || line[..ci].ends_with(|c: char| c.is_ascii_digit()) {
                        return Err(parse_err(line_no, col, "run count before `!`"));
                    }
                    return Ok((grid, rule));
                }
                other => return Err(parse_err(line_no, col, format!("unknown symbol `{other}`"))),
            };
            if let Some(s) = state {
                if s != DEAD {
                    for i in 0..count {
                        grid.set(Coord::new(x + i, y), s);
                    }
                }
                x += count;
            }
        }
    }
    if let Some((_, l, c)) = run {
        return Err(parse_err(l, c, "run count without a symbol"));
    }
    Err(parse_err(last.0, last.1, "missing `!` terminator"))
}

fn parse_rle_header(line: &str, line_no: usize) -> Result<Option<RuleSet>, PatternError> {
    let mut rule = None;
    let mut offset = 0;
    for field in line.split(',') {
        let col = offset + 1;
        offset += field.len() + 1;
        let Some((key, value)) = field.split_once('=') else {
            return Err(parse_err(
                line_no,
                col,
                format!("malformed header field `{}`", field.trim()),
            ));
        };
        let (key, value) = (key.trim(), value.trim());
        match key {
            "x" | "y" => {
                value.parse::<u64>().map_err(|_| {
                    parse_err(line_no, col, format!("bad {key} dimension `{value}`"))
                })?;
            }
            "rule" => {
                let r = value
                    .parse::<RuleSet>()
                    .map_err(|e: AutomatonError| parse_err(line_no, col, e.to_string()))?;
                rule = Some(r);
            }
            _ => {}
        }
    }
    Ok(rule)
}

fn decode_plaintext(text: &str) -> Result<Grid, PatternError> {
    let mut grid = Grid::new(Topology::Square);
    let mut y = 0i64;
    for (li, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.starts_with('!') {
            continue;
        }
        for (ci, ch) in line.chars().enumerate() {
            match ch {
                '.' => {}
                'O' => grid.set(Coord::new(ci as i64, y), 1),
                other => {
                    return Err(parse_err(
                        li + 1,
                        ci + 1,
                        format!("unknown symbol `{other}`"),
                    ))
                }
            }
        }
        y += 1;
    }
    Ok(grid)
}

/// Rows of `(state, run length)` over the canonical grid, trailing dead runs
/// dropped. Empty rows are empty vectors.
fn runs_by_row(g: &Grid) -> Vec<Vec<(CellState, u64)>> {
    let Some(bb) = g.bounding_box() else {
        return Vec::new();
    };
    let mut rows: Vec<Vec<(CellState, i64)>> = vec![Vec::new(); bb.height() as usize];
    for (c, s) in g.iter() {
        rows[(c.y - bb.min.y) as usize].push((s, c.x - bb.min.x));
    }
    rows.into_iter()
        .map(|mut cells| {
            cells.sort_unstable_by_key(|&(_, x)| x);
            let mut runs: Vec<(CellState, u64)> = Vec::new();
            let mut next_x = 0;
            for (s, x) in cells {
                if x > next_x {
                    runs.push((DEAD, (x - next_x) as u64));
                }
                match runs.last_mut() {
                    Some((prev, n)) if *prev == s && x == next_x => *n += 1,
                    _ => runs.push((s, 1)),
                }
                next_x = x + 1;
            }
            runs
        })
        .collect()
}

struct Wrapped {
    out: String,
    line_len: usize,
}

impl Wrapped {
    fn push(&mut self, count: u64, tag: char) {
        let token = if count == 1 {
            tag.to_string()
        } else {
            format!("{count}{tag}")
        };
        if self.line_len > 0 && self.line_len + token.len() > RLE_WIDTH {
            self.out.push('\n');
            self.line_len = 0;
        }
        self.line_len += token.len();
        self.out.push_str(&token);
    }
}

fn encode_rle(g: &Grid, rule: &RuleSet) -> Result<String, PatternError> {
    let max = g.max_state();
    if max > MAX_RLE_COLOR {
        return Err(PatternError::UnsupportedState {
            state: max,
            format: PatternFormat::Rle,
        });
    }
    let multi = max > 1;
    let (w, h) = g
        .bounding_box()
        .map_or((0, 0), |bb| (bb.width(), bb.height()));
    let mut body = Wrapped {
        out: format!("x = {w}, y = {h}, rule = {rule}\n"),
        line_len: 0,
    };
    let mut pending_rows = 0u64;
    for (i, row) in runs_by_row(g).into_iter().enumerate() {
        if i > 0 {
            pending_rows += 1;
        }
        if row.is_empty() {
            continue;
        }
        if pending_rows > 0 {
            body.push(pending_rows, '$');
            pending_rows = 0;
        }
        for (s, n) in row {
            let tag = match s {
                DEAD => 'b',
                1 if !multi => 'o',
                s => (b'A' + s - 1) as char,
            };
            body.push(n, tag);
        }
    }
    body.push(1, '!');
    Ok(body.out)
}

fn encode_plaintext(g: &Grid) -> Result<String, PatternError> {
    if let Some(state) = g.iter().map(|(_, s)| s).find(|&s| s > 1) {
        return Err(PatternError::UnsupportedState {
            state,
            format: PatternFormat::Plaintext,
        });
    }
    let Some(bb) = g.bounding_box() else {
        return Ok(String::new());
    };
    let (w, h) = (bb.width() as usize, bb.height() as usize);
    let mut rows = vec![vec![b'.'; w]; h];
    for (c, _) in g.iter() {
        rows[(c.y - bb.min.y) as usize][(c.x - bb.min.x) as usize] = b'O';
    }
    let mut out = String::with_capacity((w + 1) * h);
    for row in rows {
        out.push_str(std::str::from_utf8(&row).expect("ascii"));
        out.push('\n');
    }
    Ok(out)
}
