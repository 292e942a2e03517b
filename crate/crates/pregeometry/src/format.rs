//! Plain-text file formats for matroids and groups.
//!
//! Both formats are line oriented and versioned by a `v1` header.
//! Canonical serialization sorts every set ascending (flat lists
//! lexicographically), so parse-then-serialize is byte-identical on
//! canonicalized files.
//!
//! Matroid files:
//!
//! ```text
//! pregeometry v1
//! ground 8
//! kind linear 2 3
//! ```
//!
//! with `kind` one of `explicit`, `linear <q> <d>`, `affine <q> <d>`,
//! `trivial [loops..]`, `subgroup <groupfile>`. Explicit kinds carry a
//! `flats` block, one flat per line as ascending space-separated indices
//! (`-` for the empty flat), terminated by `end`.
//!
//! Group files:
//!
//! ```text
//! group v1
//! order 4
//! table
//! 0 1 2 3
//! 1 2 3 0
//! 2 3 0 1
//! 3 0 1 2
//! end
//! ```
//!
//! Row i, column j holds i·j; the identity must be index 0. Tables are
//! validated (associativity, identity, inverses) on load.

use std::path::Path;

use crate::closure::{ClosureTable, TableKind};
use crate::constructors::{self, FieldSpec};
use crate::error::{MatroidError, ParseError};
use crate::group::FiniteGroup;
use crate::matroid::Matroid;
use crate::set::ElementSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatroidFileKind {
    Explicit { flats: Vec<ElementSet> },
    Linear { q: u64, d: u32 },
    Affine { q: u64, d: u32 },
    Trivial { loops: ElementSet },
    Subgroup { path: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatroidFile {
    pub ground: usize,
    pub kind: MatroidFileKind,
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        msg: msg.into(),
    }
}

struct LineCursor<'a> {
    lines: Vec<&'a str>,
    at: usize,
}

impl<'a> LineCursor<'a> {
    fn new(text: &'a str) -> Self {
        LineCursor {
            lines: text.lines().map(str::trim_end).collect(),
            at: 0,
        }
    }

    /// Next non-empty line as (1-based line number, text).
    fn next(&mut self, expect: &str) -> Result<(usize, &'a str), ParseError> {
        while self.at < self.lines.len() && self.lines[self.at].is_empty() {
            self.at += 1;
        }
        if self.at >= self.lines.len() {
            return Err(syntax(
                self.lines.len(),
                format!("unexpected end of file: {expect}"),
            ));
        }
        self.at += 1;
        Ok((self.at, self.lines[self.at - 1]))
    }

    fn finish(mut self) -> Result<(), ParseError> {
        while self.at < self.lines.len() {
            if !self.lines[self.at].is_empty() {
                return Err(syntax(
                    self.at + 1,
                    format!("unexpected trailing line '{}'", self.lines[self.at]),
                ));
            }
            self.at += 1;
        }
        Ok(())
    }
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize, ParseError> {
    tok.parse()
        .map_err(|_| syntax(line, format!("expected {what}, got '{tok}'")))
}

fn parse_indices(line_text: &str, line: usize, ground: usize) -> Result<ElementSet, ParseError> {
    if line_text == "-" {
        return Ok(ElementSet::empty());
    }
    let mut set = ElementSet::empty();
    for tok in line_text.split_whitespace() {
        let idx = parse_usize(tok, line, "an element index")?;
        if idx >= ground {
            return Err(syntax(
                line,
                format!("index {idx} out of range for ground {ground}"),
            ));
        }
        set.insert(idx);
    }
    Ok(set)
}

impl MatroidFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut cursor = LineCursor::new(text);
        let (ln, header) = cursor.next("expected header")?;
        if header != "pregeometry v1" {
            return Err(syntax(ln, "expected header 'pregeometry v1'"));
        }
        let (ln, ground_line) = cursor.next("expected 'ground <n>'")?;
        let ground = match ground_line.strip_prefix("ground ") {
            Some(rest) => parse_usize(rest.trim(), ln, "a ground size")?,
            None => return Err(syntax(ln, "expected 'ground <n>'")),
        };
        if ground == 0 {
            return Err(syntax(ln, "ground size must be at least 1"));
        }
        let (ln, kind_line) = cursor.next("expected 'kind ...'")?;
        let rest = kind_line
            .strip_prefix("kind ")
            .ok_or_else(|| syntax(ln, "expected 'kind ...'"))?;
        let mut toks = rest.split_whitespace();
        let kind = match toks.next() {
            Some("explicit") => {
                if toks.next().is_some() {
                    return Err(syntax(ln, "kind explicit takes no arguments"));
                }
                let (fln, flats_header) = cursor.next("expected 'flats'")?;
                if flats_header != "flats" {
                    return Err(syntax(fln, "expected 'flats'"));
                }
                let mut flats = Vec::new();
                loop {
                    let (fln, flat_line) = cursor.next("expected a flat line or 'end'")?;
                    if flat_line == "end" {
                        break;
                    }
                    flats.push(parse_indices(flat_line, fln, ground)?);
                }
                MatroidFileKind::Explicit { flats }
            }
            Some(field @ ("linear" | "affine")) => {
                let q = parse_usize(toks.next().ok_or_else(|| syntax(ln, "missing q"))?, ln, "q")?
                    as u64;
                let d =
                    parse_usize(toks.next().ok_or_else(|| syntax(ln, "missing d"))?, ln, "d")?
                        as u32;
                if toks.next().is_some() {
                    return Err(syntax(ln, format!("kind {field} takes exactly q and d")));
                }
                let spec = FieldSpec::new(q, d).map_err(|e| syntax(ln, e.to_string()))?;
                if spec.ground_size() != ground {
                    return Err(syntax(
                        ln,
                        format!("ground {ground} does not match q^d = {}", spec.ground_size()),
                    ));
                }
                if field == "linear" {
                    MatroidFileKind::Linear { q, d }
                } else {
                    MatroidFileKind::Affine { q, d }
                }
            }
            Some("trivial") => {
                let mut loops = ElementSet::empty();
                for tok in toks {
                    let idx = parse_usize(tok, ln, "a loop index")?;
                    if idx >= ground {
                        return Err(syntax(ln, format!("loop {idx} out of range")));
                    }
                    loops.insert(idx);
                }
                MatroidFileKind::Trivial { loops }
            }
            Some("subgroup") => {
                let path = toks
                    .next()
                    .ok_or_else(|| syntax(ln, "kind subgroup needs a group file path"))?
                    .to_string();
                if toks.next().is_some() {
                    return Err(syntax(ln, "kind subgroup takes exactly one path"));
                }
                MatroidFileKind::Subgroup { path }
            }
            other => {
                return Err(syntax(
                    ln,
                    format!("unknown kind '{}'", other.unwrap_or("")),
                ))
            }
        };

        cursor.finish()?;
        Ok(MatroidFile { ground, kind })
    }

    /// Canonical text: flats lexicographically sorted, sets ascending.
    pub fn serialize(&self) -> String {
        let mut out = String::from("pregeometry v1\n");
        out.push_str(&format!("ground {}\n", self.ground));
        match &self.kind {
            MatroidFileKind::Explicit { flats } => {
                out.push_str("kind explicit\nflats\n");
                let mut sorted = flats.clone();
                sorted.sort();
                sorted.dedup();
                for flat in &sorted {
                    if flat.is_empty() {
                        out.push_str("-\n");
                    } else {
                        let toks: Vec<String> = flat.iter().map(|i| i.to_string()).collect();
                        out.push_str(&toks.join(" "));
                        out.push('\n');
                    }
                }
                out.push_str("end\n");
            }
            MatroidFileKind::Linear { q, d } => out.push_str(&format!("kind linear {q} {d}\n")),
            MatroidFileKind::Affine { q, d } => out.push_str(&format!("kind affine {q} {d}\n")),
            MatroidFileKind::Trivial { loops } => {
                out.push_str("kind trivial");
                for l in loops.iter() {
                    out.push_str(&format!(" {l}"));
                }
                out.push('\n');
            }
            MatroidFileKind::Subgroup { path } => out.push_str(&format!("kind subgroup {path}\n")),
        }
        out
    }

    /// Builds the closure table; `base_dir` resolves subgroup file paths.
    pub fn to_table(&self, base_dir: &Path) -> Result<ClosureTable, ParseError> {
        match &self.kind {
            MatroidFileKind::Explicit { flats } => {
                Ok(constructors::explicit_from_flats(self.ground, flats.clone())?)
            }
            MatroidFileKind::Linear { q, d } => {
                Ok(constructors::linear_matroid(FieldSpec::new(*q, *d)?))
            }
            MatroidFileKind::Affine { q, d } => {
                Ok(constructors::affine_matroid(FieldSpec::new(*q, *d)?))
            }
            MatroidFileKind::Trivial { loops } => {
                Ok(constructors::trivial_pregeometry(self.ground, loops.clone())?)
            }
            MatroidFileKind::Subgroup { path } => {
                let resolved = base_dir.join(path);
                let group = parse_group_file(&resolved)?;
                if group.order() != self.ground {
                    return Err(ParseError::Syntax {
                        line: 2,
                        msg: format!(
                            "ground {} does not match group order {}",
                            self.ground,
                            group.order()
                        ),
                    });
                }
                Ok(constructors::subgroup_closure(group))
            }
        }
    }

    /// Describes a table in file form, when the table's kind is
    /// representable (derived tables and subgroup closures are not).
    pub fn from_table(table: &ClosureTable) -> Option<Self> {
        let ground = table.ground().size();
        match table.kind() {
            TableKind::Explicit => Some(MatroidFile {
                ground,
                kind: MatroidFileKind::Explicit {
                    flats: table.explicit_flats()?.to_vec(),
                },
            }),
            TableKind::Linear { q, d } => Some(MatroidFile {
                ground,
                kind: MatroidFileKind::Linear { q, d },
            }),
            TableKind::Affine { q, d } => Some(MatroidFile {
                ground,
                kind: MatroidFileKind::Affine { q, d },
            }),
            TableKind::Trivial { loops } => Some(MatroidFile {
                ground,
                kind: MatroidFileKind::Trivial { loops },
            }),
            TableKind::Subgroup | TableKind::Derived => None,
        }
    }

    /// Materializes any matroid as an explicit flat-list file.
    pub fn explicit_from_matroid(m: &Matroid) -> Result<Self, MatroidError> {
        Ok(MatroidFile {
            ground: m.ground().size(),
            kind: MatroidFileKind::Explicit {
                flats: m.enumerate_flats(None)?,
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupFile {
    pub order: usize,
    pub table: Vec<usize>,
}

impl GroupFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut cursor = LineCursor::new(text);
        let (ln, header) = cursor.next("expected header")?;
        if header != "group v1" {
            return Err(syntax(ln, "expected header 'group v1'"));
        }
        let (ln, order_line) = cursor.next("expected 'order <n>'")?;
        let order = match order_line.strip_prefix("order ") {
            Some(rest) => parse_usize(rest.trim(), ln, "an order")?,
            None => return Err(syntax(ln, "expected 'order <n>'")),
        };
        let (ln, table_header) = cursor.next("expected 'table'")?;
        if table_header != "table" {
            return Err(syntax(ln, "expected 'table'"));
        }
        let mut table = Vec::with_capacity(order * order);
        for _ in 0..order {
            let (rln, row) = cursor.next("expected a table row")?;
            let entries: Vec<usize> = row
                .split_whitespace()
                .map(|tok| parse_usize(tok, rln, "a table entry"))
                .collect::<Result<_, _>>()?;
            if entries.len() != order {
                return Err(syntax(
                    rln,
                    format!("row has {} entries, expected {order}", entries.len()),
                ));
            }
            table.extend(entries);
        }
        let (eln, end) = cursor.next("expected 'end'")?;
        if end != "end" {
            return Err(syntax(eln, "expected 'end'"));
        }
        cursor.finish()?;
        Ok(GroupFile { order, table })
    }

    pub fn serialize(&self) -> String {
        let mut out = String::from("group v1\n");
        out.push_str(&format!("order {}\n", self.order));
        out.push_str("table\n");
        for i in 0..self.order {
            let row: Vec<String> = (0..self.order)
                .map(|j| self.table[i * self.order + j].to_string())
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out.push_str("end\n");
        out
    }

    /// Validates the table into a group.
    pub fn to_group(&self) -> Result<FiniteGroup, ParseError> {
        Ok(FiniteGroup::from_table(self.order, self.table.clone())?)
    }

    pub fn from_group(group: &FiniteGroup) -> Self {
        GroupFile {
            order: group.order(),
            table: group.table().to_vec(),
        }
    }
}

pub fn parse_matroid_file(path: &Path) -> Result<ClosureTable, ParseError> {
    let text = std::fs::read_to_string(path).map_err(|source| ParseError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let file = MatroidFile::parse(&text)?;
    let base_dir = path.parent().unwrap_or(Path::new("."));
    file.to_table(base_dir)
}

pub fn parse_group_file(path: &Path) -> Result<FiniteGroup, ParseError> {
    let text = std::fs::read_to_string(path).map_err(|source| ParseError::Io {
        path: path.display().to_string(),
        source,
    })?;
    GroupFile::parse(&text)?.to_group()
}
