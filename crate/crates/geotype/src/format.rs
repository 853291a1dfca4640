//! The line-oriented geometric-type file format.
//!
//! ```text
//! # comment
//! n 1
//! hv 1 2 2
//! phi 1 1 1 1 +1
//! phi 1 2 1 2 -1
//! ```
//!
//! `phi` lines may come in any order and may also be written `1 2 -> 1 2 -1`.
//! Request files for refinements add `orbit <len> <w_0> … <w_{len-1}>` lines.

use std::fmt::Write as _;

use geotype_core::{Cell, GeometricType, Violation};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: syntax error: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}: range violation: {message}")]
    Range { line: usize, message: String },
    #[error("line {line}: bijection violation: {message}")]
    Bijection { line: usize, message: String },
    #[error("line {line}: sum mismatch: sum of h is {horizontal}, sum of v is {vertical}")]
    SumMismatch { line: usize, horizontal: usize, vertical: usize },
    #[error("line {line}: missing entries: {message}")]
    Missing { line: usize, message: String },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::Syntax { line, .. }
            | ParseError::Range { line, .. }
            | ParseError::Bijection { line, .. }
            | ParseError::SumMismatch { line, .. }
            | ParseError::Missing { line, .. } => *line,
        }
    }
}

struct Tok<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Tok<'_>> {
    let body = match line.find('#') {
        Some(p) => &line[..p],
        None => line,
    };
    let mut out = Vec::new();
    let mut start = None;
    for (idx, ch) in body.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Tok { text: &body[s..idx], column: s + 1 });
            }
        } else if start.is_none() {
            start = Some(idx);
        }
    }
    if let Some(s) = start {
        out.push(Tok { text: &body[s..], column: s + 1 });
    }
    out
}

fn int(tok: &Tok<'_>, line: usize) -> Result<usize, ParseError> {
    tok.text.parse::<usize>().map_err(|_| ParseError::Syntax {
        line,
        column: tok.column,
        message: format!("expected a non-negative integer, found `{}`", tok.text),
    })
}

fn sign(tok: &Tok<'_>, line: usize) -> Result<i8, ParseError> {
    match tok.text {
        "+1" | "1" | "+" => Ok(1),
        "-1" | "-" => Ok(-1),
        _ => Err(ParseError::Syntax {
            line,
            column: tok.column,
            message: format!("expected +1 or -1, found `{}`", tok.text),
        }),
    }
}

fn positive(tok: &Tok<'_>, line: usize, what: &str) -> Result<usize, ParseError> {
    let x = int(tok, line)?;
    if x == 0 {
        return Err(ParseError::Range { line, message: format!("{} must be at least 1", what) });
    }
    Ok(x)
}

fn arity(toks: &[Tok<'_>], want: usize, line: usize, what: &str) -> Result<(), ParseError> {
    if toks.len() != want {
        let column = toks.get(want).or(toks.last()).map(|t| t.column).unwrap_or(1);
        return Err(ParseError::Syntax {
            line,
            column,
            message: format!("`{}` line takes {} fields, found {}", what, want - 1, toks.len() - 1),
        });
    }
    Ok(())
}

/// A parsed request: a type plus the orbit words listed after it (1-based symbols).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Request {
    pub ty: GeometricType,
    pub orbits: Vec<Vec<usize>>,
}

/// Parses a geometric-type file.
pub fn parse_type(text: &str) -> Result<GeometricType, ParseError> {
    let req = parse_request(text)?;
    if !req.orbits.is_empty() {
        let (idx, tok) = text
            .lines()
            .enumerate()
            .find_map(|(idx, l)| tokens(l).into_iter().next().filter(|t| t.text == "orbit").map(|t| (idx, t.column)))
            .unwrap_or((0, 1));
        return Err(ParseError::Syntax {
            line: idx + 1,
            column: tok,
            message: "orbit lines are only allowed in request files".into(),
        });
    }
    Ok(req.ty)
}

/// Parses a type file that may also carry `orbit` lines.
pub fn parse_request(text: &str) -> Result<Request, ParseError> {
    let mut n: Option<usize> = None;
    let mut hv: Vec<(usize, usize)> = Vec::new();
    let mut phi: Vec<Vec<Option<(Cell, usize)>>> = Vec::new();
    let mut orbits = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let toks = tokens(raw);
        if toks.is_empty() {
            continue;
        }
        let head = toks[0].text;
        match (head, n) {
            ("n", None) => {
                arity(&toks, 2, line, "n")?;
                let v = positive(&toks[1], line, "n")?;
                n = Some(v);
            }
            ("n", Some(_)) => return Err(ParseError::Syntax { line, column: 1, message: "duplicate `n` line".into() }),
            (_, None) => {
                return Err(ParseError::Syntax {
                    line,
                    column: toks[0].column,
                    message: "the first statement must be `n <int>`".into(),
                })
            }
            ("hv", Some(nn)) => {
                arity(&toks, 4, line, "hv")?;
                let i = int(&toks[1], line)?;
                if i != hv.len() + 1 || i > nn {
                    return Err(ParseError::Range {
                        line,
                        message: format!("expected `hv {}`, found index {}", hv.len() + 1, i),
                    });
                }
                if !phi.is_empty() {
                    return Err(ParseError::Syntax { line, column: 1, message: "`hv` after `phi`".into() });
                }
                let h = positive(&toks[2], line, "h")?;
                let v = positive(&toks[3], line, "v")?;
                hv.push((h, v));
                if hv.len() == nn {
                    let sh: usize = hv.iter().map(|p| p.0).sum();
                    let sv: usize = hv.iter().map(|p| p.1).sum();
                    if sh != sv {
                        return Err(ParseError::SumMismatch { line, horizontal: sh, vertical: sv });
                    }
                    phi = hv.iter().map(|&(h, _)| vec![None; h]).collect();
                }
            }
            ("orbit", Some(nn)) => {
                if toks.len() < 2 {
                    return Err(ParseError::Syntax { line, column: 1, message: "`orbit` needs a length".into() });
                }
                let len = positive(&toks[1], line, "orbit length")?;
                arity(&toks, len + 2, line, "orbit")?;
                let mut word = Vec::with_capacity(len);
                for t in &toks[2..] {
                    let s = int(t, line)?;
                    if s == 0 || s > nn {
                        return Err(ParseError::Range {
                            line,
                            message: format!("orbit symbol {} not in 1..={}", s, nn),
                        });
                    }
                    word.push(s);
                }
                orbits.push(word);
            }
            _ => {
                let Some(nn) = n else { unreachable!() };
                let fields: Vec<&Tok<'_>> = if head == "phi" {
                    arity(&toks, 6, line, "phi")?;
                    toks[1..].iter().collect()
                } else if toks.len() == 6 && toks[2].text == "->" {
                    toks.iter().enumerate().filter(|(p, _)| *p != 2).map(|(_, t)| t).collect()
                } else {
                    return Err(ParseError::Syntax {
                        line,
                        column: toks[0].column,
                        message: format!("unknown statement `{}`", head),
                    });
                };
                if hv.len() != nn {
                    return Err(ParseError::Missing { line, message: format!("phi before all {} `hv` lines", nn) });
                }
                let i = int(fields[0], line)?;
                let j = int(fields[1], line)?;
                let k = int(fields[2], line)?;
                let l = int(fields[3], line)?;
                let e = sign(fields[4], line)?;
                if i == 0 || i > nn || j == 0 || j > hv[i - 1].0 {
                    return Err(ParseError::Range {
                        line,
                        message: format!("({},{}) is not a horizontal label", i, j),
                    });
                }
                if k == 0 || k > nn || l == 0 || l > hv[k - 1].1 {
                    return Err(ParseError::Range { line, message: format!("({},{}) is not a vertical label", k, l) });
                }
                if let Some((_, first)) = phi[i - 1][j - 1] {
                    return Err(ParseError::Bijection {
                        line,
                        message: format!("({},{}) already defined on line {}", i, j, first),
                    });
                }
                phi[i - 1][j - 1] = Some((Cell::new(k - 1, l - 1, e), line));
            }
        }
    }
    let Some(nn) = n else {
        return Err(ParseError::Missing { line: last_line.max(1), message: "no `n` line".into() });
    };
    if hv.len() != nn {
        return Err(ParseError::Missing {
            line: last_line.max(1),
            message: format!("expected {} `hv` lines, found {}", nn, hv.len()),
        });
    }
    // Injectivity, reported at the second line hitting a target.
    let mut hit: Vec<Vec<Option<(usize, usize, usize)>>> = hv.iter().map(|&(_, v)| vec![None; v]).collect();
    let mut rows = Vec::with_capacity(nn);
    for (i, row) in phi.iter().enumerate() {
        let mut cells = Vec::with_capacity(row.len());
        for (j, entry) in row.iter().enumerate() {
            let Some((c, line)) = entry else {
                return Err(ParseError::Missing {
                    line: last_line,
                    message: format!("no phi line for ({},{})", i + 1, j + 1),
                });
            };
            if let Some((pi, pj, pline)) = hit[c.k][c.l] {
                return Err(ParseError::Bijection {
                    line: *line,
                    message: format!(
                        "rho not injective: ({},{}) and ({},{}) (line {}) both map to ({},{})",
                        i + 1,
                        j + 1,
                        pi + 1,
                        pj + 1,
                        pline,
                        c.k + 1,
                        c.l + 1
                    ),
                });
            }
            hit[c.k][c.l] = Some((i, j, *line));
            cells.push(*c);
        }
        rows.push(cells);
    }
    let h = hv.iter().map(|p| p.0).collect();
    let v = hv.iter().map(|p| p.1).collect();
    let ty = GeometricType::new(h, v, rows).map_err(|report| {
        // Everything above already guards each invariant; keep a named error anyway.
        let msg = report.to_string();
        match report.violations.first() {
            Some(Violation::SumMismatch { horizontal, vertical }) => {
                ParseError::SumMismatch { line: last_line, horizontal: *horizontal, vertical: *vertical }
            }
            Some(Violation::OutOfRange { .. }) | Some(Violation::BadSign { .. }) => {
                ParseError::Range { line: last_line, message: msg }
            }
            _ => ParseError::Bijection { line: last_line, message: msg },
        }
    })?;
    Ok(Request { ty, orbits })
}

/// Canonical text: `n`, then `hv` in order, then `phi` sorted by `(i, j)`.
pub fn serialize_type(t: &GeometricType) -> String {
    let mut s = String::new();
    writeln!(s, "n {}", t.n()).unwrap();
    for i in 0..t.n() {
        writeln!(s, "hv {} {} {}", i + 1, t.h(i), t.v(i)).unwrap();
    }
    for (i, j, c) in t.cells() {
        writeln!(s, "phi {} {} {} {} {}", i + 1, j + 1, c.k + 1, c.l + 1, if c.eps == 1 { "+1" } else { "-1" })
            .unwrap();
    }
    s
}

/// `orbit` lines for a family of 1-based words.
pub fn serialize_orbits(words: &[Vec<usize>]) -> String {
    let mut s = String::new();
    for w in words {
        write!(s, "orbit {}", w.len()).unwrap();
        for x in w {
            write!(s, " {}", x).unwrap();
        }
        s.push('\n');
    }
    s
}
