//! Text format for squares: `n` lines of `n` whitespace-separated 1-based
//! symbols. `#` starts a comment and blank lines separate squares. A comment
//! line directly above a square is taken as its label.

use crate::error::{Error, Result};
use crate::square::LatinSquare;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledSquare {
    pub label: Option<String>,
    /// Every comment line attached to the square, without the leading `#`.
    pub comments: Vec<String>,
    pub square: LatinSquare,
}

struct Block {
    comments: Vec<String>,
    rows: Vec<(usize, Vec<usize>)>,
}

fn blocks(text: &str) -> Result<Vec<Block>> {
    let mut out = Vec::new();
    let mut cur = Block { comments: Vec::new(), rows: Vec::new() };
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let (data, comment) = match raw.find('#') {
            Some(pos) => (&raw[..pos], Some(raw[pos + 1..].trim())),
            None => (raw, None),
        };
        let data = data.trim();
        if data.is_empty() {
            if let Some(c) = comment {
                if !cur.rows.is_empty() {
                    out.push(std::mem::replace(&mut cur, Block { comments: Vec::new(), rows: Vec::new() }));
                }
                cur.comments.push(c.to_string());
            } else if !cur.rows.is_empty() {
                out.push(std::mem::replace(&mut cur, Block { comments: Vec::new(), rows: Vec::new() }));
            } else {
                cur.comments.clear();
            }
            continue;
        }
        let row = data
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>().map_err(|_| Error::Malformed {
                    line: line_no,
                    message: format!("not an integer: {t:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        cur.rows.push((line_no, row));
    }
    if !cur.rows.is_empty() {
        out.push(cur);
    }
    Ok(out)
}

fn build(block: Block) -> Result<LabeledSquare> {
    let n = block.rows.len();
    let mut cells = Vec::with_capacity(n * n);
    for (r, (line, row)) in block.rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Malformed {
                line: *line,
                message: format!("expected {n} entries, found {}", row.len()),
            });
        }
        for (c, &v) in row.iter().enumerate() {
            if v == 0 || v > n {
                return Err(Error::SymbolOutOfRange { row: r + 1, col: c + 1, symbol: v, order: n });
            }
            cells.push(v - 1);
        }
    }
    let square = LatinSquare::new(n, cells)?;
    Ok(LabeledSquare {
        label: block.comments.first().cloned(),
        comments: block.comments,
        square,
    })
}

pub fn parse_squares(text: &str) -> Result<Vec<LabeledSquare>> {
    blocks(text)?.into_iter().map(build).collect()
}

/// Parses a text holding exactly one square.
pub fn parse_square(text: &str) -> Result<LatinSquare> {
    let mut all = blocks(text)?;
    match all.len() {
        1 => Ok(build(all.pop().unwrap())?.square),
        0 => Err(Error::Malformed { line: 1, message: "no square found".into() }),
        k => Err(Error::Malformed {
            line: all[1].rows[0].0,
            message: format!("expected one square, found {k}"),
        }),
    }
}

pub fn render_square(l: &LatinSquare) -> String {
    l.to_string()
}

/// Renders labelled squares separated by blank lines.
pub fn render_squares<'a>(items: impl IntoIterator<Item = (Option<&'a str>, &'a LatinSquare)>) -> String {
    let mut out = String::new();
    for (i, (label, l)) in items.into_iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        if let Some(label) = label {
            out.push_str("# ");
            out.push_str(label);
            out.push('\n');
        }
        out.push_str(&l.to_string());
    }
    out
}
