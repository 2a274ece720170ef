//! The line-oriented circuit file format.
//!
//! ```text
//! NAME identity
//! META gate identity
//! SHAPE 3 4 3
//! SECTION PRIMAL_Z
//! 0 1 1 1 1 1
//! SECTION DUAL_Z
//! 0.5 0.5 0.5 1.5 0.5 0.5
//! TARGET z PRIMAL
//!   DESC Z on the in plane carried to the out plane
//!   0 1 1 0 2 1
//! END
//! ```
//!
//! `#` starts a comment. Primal cells are written as integer vertex pairs and
//! dual cells as `.5` cube-midpoint pairs. A target may add `INTERIOR` after
//! its kind to mark a chain that deliberately leaves the in/out planes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::{CircuitSpec, LogicalTarget, MeasurementPattern, PatternError, TargetKind};
use crate::complex::{format_half, Cell, ChainComplex, LatticeShape, P3};

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let content = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in content.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Token { text: &content[s..i], column: content[..s].chars().count() + 1 });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Token { text: &content[s..], column: content[..s].chars().count() + 1 });
    }
    out
}

/// Text after the first `skip` tokens, comment stripped and trimmed.
fn rest_of_line<'a>(line: &'a str, tokens: &[Token<'_>], skip: usize) -> &'a str {
    let content = line.split('#').next().unwrap_or("");
    match tokens.get(skip) {
        Some(t) => {
            let byte = content.char_indices().nth(t.column - 1).map_or(content.len(), |(b, _)| b);
            content[byte..].trim()
        }
        None => "",
    }
}

enum Context {
    Header,
    Primal,
    Dual,
    Target(LogicalTarget),
}

struct Parser {
    line: usize,
    name: Option<String>,
    metadata: BTreeMap<String, String>,
    shape: Option<LatticeShape>,
    primal: BTreeSet<Cell>,
    dual: BTreeSet<Cell>,
    targets: Vec<LogicalTarget>,
    context: Context,
}

impl Parser {
    fn syntax(&self, column: usize, message: impl Into<String>) -> PatternError {
        PatternError::Syntax { line: self.line, column, message: message.into() }
    }

    fn parse_coord(&self, tok: &Token<'_>, kind: TargetKind) -> Result<i32, PatternError> {
        let (neg, body) = match tok.text.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, tok.text),
        };
        let sign = if neg { -1 } else { 1 };
        let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
        let bad = || self.syntax(tok.column, format!("malformed coordinate `{}`", tok.text));
        let numeric = match body.split_once('.') {
            None => digits(body),
            Some((int, frac)) => digits(int) && digits(frac),
        };
        if !numeric {
            return Err(bad());
        }
        match (kind, body.split_once('.')) {
            (TargetKind::Primal, None) if digits(body) => {
                body.parse::<i32>().map(|v| sign * 2 * v).map_err(|_| bad())
            }
            (TargetKind::Dual, Some((int, "5"))) if digits(int) => {
                int.parse::<i32>().map(|v| sign * (2 * v + 1)).map_err(|_| bad())
            }
            (TargetKind::Primal, _) => {
                Err(self.syntax(tok.column, format!("primal coordinates are integers, got `{}`", tok.text)))
            }
            (TargetKind::Dual, _) => {
                Err(self.syntax(tok.column, format!("dual coordinates end in .5, got `{}`", tok.text)))
            }
        }
    }

    fn parse_cell(&self, tokens: &[Token<'_>], kind: TargetKind) -> Result<Cell, PatternError> {
        if tokens.len() != 6 {
            let col = tokens.get(6).map_or(tokens[0].column, |t| t.column);
            return Err(self.syntax(col, format!("a cell line has 6 coordinates, found {}", tokens.len())));
        }
        let mut v = [0i32; 6];
        for (slot, tok) in v.iter_mut().zip(tokens) {
            *slot = self.parse_coord(tok, kind)?;
        }
        let a: P3 = [v[0], v[1], v[2]];
        let b: P3 = [v[3], v[4], v[5]];
        let cell = Cell::pair(kind.boundary_dim(), a, b)
            .ok_or_else(|| self.syntax(tokens[0].column, "the two endpoints are not adjacent"))?;
        let shape = self.shape.ok_or_else(|| self.syntax(tokens[0].column, "cells must follow SHAPE"))?;
        if !ChainComplex::shape_admits(&shape, &cell) {
            return Err(PatternError::OutOfRange { line: self.line, cell: cell.to_string(), shape });
        }
        Ok(cell)
    }

    fn close_context(&mut self) -> Result<(), PatternError> {
        match std::mem::replace(&mut self.context, Context::Header) {
            Context::Target(t) => Err(self.syntax(1, format!("target `{}` is missing END", t.id))),
            _ => Ok(()),
        }
    }

    fn feed(&mut self, raw: &str) -> Result<(), PatternError> {
        let tokens = tokenize(raw);
        let Some(head) = tokens.first() else { return Ok(()) };
        match head.text {
            "NAME" | "META" | "SHAPE" | "SECTION" | "TARGET" => self.close_context()?,
            _ => {}
        }
        match head.text {
            "NAME" => {
                let [_, name] = tokens.as_slice() else {
                    return Err(self.syntax(head.column, "NAME takes one word"));
                };
                self.name = Some(name.text.to_string());
            }
            "META" => {
                let key = tokens.get(1).ok_or_else(|| self.syntax(head.column, "META needs a key"))?;
                self.metadata.insert(key.text.to_string(), rest_of_line(raw, &tokens, 2).to_string());
            }
            "SHAPE" => {
                if self.shape.is_some() {
                    return Err(self.syntax(head.column, "SHAPE given twice"));
                }
                if tokens.len() != 4 {
                    return Err(self.syntax(head.column, "SHAPE takes three extents"));
                }
                let mut s = [0usize; 3];
                for (slot, tok) in s.iter_mut().zip(&tokens[1..]) {
                    *slot = tok
                        .text
                        .parse()
                        .map_err(|_| self.syntax(tok.column, format!("malformed extent `{}`", tok.text)))?;
                }
                self.shape = Some(LatticeShape::new(s[0], s[1], s[2]).map_err(|e| self.syntax(tokens[1].column, e.to_string()))?);
            }
            "SECTION" => {
                let name = tokens.get(1).ok_or_else(|| self.syntax(head.column, "SECTION needs a name"))?;
                self.context = match name.text {
                    "PRIMAL_Z" => Context::Primal,
                    "DUAL_Z" => Context::Dual,
                    other => return Err(PatternError::UnknownSection { line: self.line, name: other.to_string() }),
                };
            }
            "TARGET" => {
                let (id, kind) = match tokens.as_slice() {
                    [_, id, kind] | [_, id, kind, _] => (id, kind),
                    _ => return Err(self.syntax(head.column, "expected TARGET <id> PRIMAL|DUAL [INTERIOR]")),
                };
                let kind_v = match kind.text {
                    "PRIMAL" => TargetKind::Primal,
                    "DUAL" => TargetKind::Dual,
                    other => return Err(self.syntax(kind.column, format!("unknown target kind `{other}`"))),
                };
                let mut t = LogicalTarget::new(id.text, kind_v);
                if let Some(flag) = tokens.get(3) {
                    if flag.text != "INTERIOR" {
                        return Err(self.syntax(flag.column, format!("unknown target flag `{}`", flag.text)));
                    }
                    t.interior = true;
                }
                if self.targets.iter().any(|o| o.id == t.id) {
                    return Err(PatternError::DuplicateTarget { line: self.line, id: t.id });
                }
                self.context = Context::Target(t);
            }
            "DESC" => {
                let text = rest_of_line(raw, &tokens, 1).to_string();
                match &mut self.context {
                    Context::Target(t) => t.description = text,
                    _ => return Err(self.syntax(head.column, "DESC outside a target")),
                }
            }
            "END" => match std::mem::replace(&mut self.context, Context::Header) {
                Context::Target(t) => self.targets.push(t),
                _ => return Err(self.syntax(head.column, "END without an open target")),
            },
            first => {
                let starts_numeric = first.starts_with(|c: char| c.is_ascii_digit() || c == '-');
                if !starts_numeric {
                    return Err(self.syntax(head.column, format!("unknown directive `{first}`")));
                }
                let kind = match &self.context {
                    Context::Primal => TargetKind::Primal,
                    Context::Dual => TargetKind::Dual,
                    Context::Target(t) => t.kind,
                    Context::Header => return Err(self.syntax(head.column, "cell line outside a section or target")),
                };
                let cell = self.parse_cell(&tokens, kind)?;
                let fresh = match &mut self.context {
                    Context::Primal => self.primal.insert(cell),
                    Context::Dual => self.dual.insert(cell),
                    Context::Target(t) => t.boundary.insert(cell),
                    Context::Header => unreachable!(),
                };
                if !fresh {
                    return Err(PatternError::DuplicateCell { line: self.line, cell: cell.to_string() });
                }
            }
        }
        Ok(())
    }
}

/// Parses and validates a circuit file.
pub fn parse_circuit(text: &str) -> Result<CircuitSpec, PatternError> {
    let mut p = Parser {
        line: 0,
        name: None,
        metadata: BTreeMap::new(),
        shape: None,
        primal: BTreeSet::new(),
        dual: BTreeSet::new(),
        targets: Vec::new(),
        context: Context::Header,
    };
    for (i, raw) in text.lines().enumerate() {
        p.line = i + 1;
        p.feed(raw)?;
    }
    p.line += 1;
    p.close_context()?;
    let shape = p.shape.ok_or_else(|| p.syntax(1, "missing SHAPE"))?;
    let pattern = MeasurementPattern::new(shape, p.primal, p.dual)?;
    Ok(CircuitSpec {
        name: p.name.unwrap_or_else(|| "unnamed".to_string()),
        pattern,
        targets: p.targets,
        metadata: p.metadata,
    })
}

fn write_cell(out: &mut String, indent: &str, cell: &Cell) {
    let (a, b) = match *cell {
        Cell::Edge(a, b) | Cell::Face(a, b) => (a, b),
        Cell::Vertex(p) | Cell::Cube(p) => (p, p),
    };
    let coords: Vec<String> = a.iter().chain(&b).map(|&v| format_half(v)).collect();
    let _ = writeln!(out, "{indent}{}", coords.join(" "));
}

/// Writes a spec in canonical form: cells sorted, metadata sorted, no comments.
#[must_use]
pub fn serialize_circuit(spec: &CircuitSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "NAME {}", spec.name);
    for (k, v) in &spec.metadata {
        let _ = writeln!(out, "META {k} {v}");
    }
    let [a, b, c] = spec.pattern.shape().extents();
    let _ = writeln!(out, "SHAPE {a} {b} {c}");
    out.push_str("\nSECTION PRIMAL_Z\n");
    for cell in spec.pattern.primal_z() {
        write_cell(&mut out, "", cell);
    }
    out.push_str("\nSECTION DUAL_Z\n");
    for cell in spec.pattern.dual_z() {
        write_cell(&mut out, "", cell);
    }
    for t in &spec.targets {
        let flag = if t.interior { " INTERIOR" } else { "" };
        let _ = writeln!(out, "\nTARGET {} {}{flag}", t.id, t.kind.keyword());
        if !t.description.is_empty() {
            let _ = writeln!(out, "  DESC {}", t.description);
        }
        for cell in &t.boundary {
            write_cell(&mut out, "  ", cell);
        }
        out.push_str("END\n");
    }
    out
}
