//! Code-spec text files.
//!
//! ```text
//! # comments run to the end of the line
//! name: opt16_7
//! n: 4
//! k: 7
//! A: [6, 7, 8, 12, 14, 15, 16]
//! constraints:
//!   10: [6, 7]
//!   11: [6]
//! d: 6
//! A_d: 48
//! ```
//!
//! Indices are 1-based. Instead of `A` and `constraints`, a file may give the
//! precoding matrix directly, one row of `0`/`1` characters per indented line:
//!
//! ```text
//! n: 2
//! matrix:
//!   0101
//!   0011
//! ```
//!
//! `name`, `k`, `d` and `A_d` are optional; `k` is checked when present.

use std::fmt::Write;

use super::{
    check_sc_aimed, precoding_from_spec, spec_from_precoding, CodeSpec, DistanceTerms,
    PrecodedPolarCode,
};
use crate::error::{Error, Result};
use crate::gf2::BitMatrix;

/// The code definition part of a spec file, before validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecBody {
    Sets {
        n: u32,
        info: Vec<usize>,
        constraints: Vec<(usize, Vec<usize>)>,
    },
    Matrix(BitMatrix),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecFile {
    pub name: Option<String>,
    pub k: Option<usize>,
    pub body: SpecBody,
    pub distance: Option<DistanceTerms>,
}

impl SpecFile {
    /// The precoding matrix as written (for a matrix body) or as implied by the sets.
    pub fn matrix(&self) -> Result<BitMatrix> {
        match &self.body {
            SpecBody::Matrix(m) => Ok(m.clone()),
            SpecBody::Sets { .. } => Ok(precoding_from_spec(&self.code_spec()?)),
        }
    }

    pub fn code_spec(&self) -> Result<CodeSpec> {
        let spec = match &self.body {
            SpecBody::Sets {
                n,
                info,
                constraints,
            } => CodeSpec::from_one_based(*n, info, constraints)?,
            SpecBody::Matrix(m) => spec_from_precoding(m)?,
        };
        if let Some(k) = self.k {
            if k != spec.dimension() {
                return Err(Error::InvalidSpec(format!(
                    "k = {k} but the code has dimension {}",
                    spec.dimension()
                )));
            }
        }
        Ok(spec)
    }

    pub fn to_code(&self) -> Result<PrecodedPolarCode> {
        let mut code = PrecodedPolarCode::new(self.code_spec()?);
        if let Some(name) = &self.name {
            code = code.with_name(name.clone());
        }
        if let Some(d) = self.distance {
            code = code.with_distance(d);
        }
        Ok(code)
    }

    /// True when the body is a matrix that fails the SC-aimed or rank checks.
    pub fn matrix_fails_checks(&self) -> bool {
        match &self.body {
            SpecBody::Matrix(m) => !check_sc_aimed(m).passes(),
            SpecBody::Sets { .. } => false,
        }
    }
}

#[derive(PartialEq)]
enum Block {
    None,
    Constraints,
    Matrix,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_usize(s: &str, line: usize, what: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| parse_err(line, format!("expected a non-negative integer for {what}, found {:?}", s.trim())))
}

fn parse_list(s: &str, line: usize) -> Result<Vec<usize>> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| parse_err(line, format!("expected a list like [1, 2], found {s:?}")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|t| parse_usize(t, line, "list entry"))
        .collect()
}

/// Parses a spec file. Structural problems are reported with 1-based line numbers;
/// code-level validation happens in [`SpecFile::code_spec`].
pub fn parse_spec(text: &str) -> Result<SpecFile> {
    let mut name = None;
    let mut n: Option<(u32, usize)> = None;
    let mut k = None;
    let mut info: Option<Vec<usize>> = None;
    let mut constraints: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut saw_constraints = false;
    let mut matrix_rows: Vec<Vec<u8>> = Vec::new();
    let mut matrix_line = None;
    let mut d = None;
    let mut a_d = None;
    let mut block = Block::None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let indented = line.starts_with(' ') || line.starts_with('\t');
        if indented && block != Block::None {
            match block {
                Block::Constraints => {
                    let (key, value) = line
                        .split_once(':')
                        .ok_or_else(|| parse_err(line_no, "expected a constraint \"i: [j, ...]\""))?;
                    let target = parse_usize(key, line_no, "constraint index")?;
                    constraints.push((target, parse_list(value, line_no)?));
                }
                Block::Matrix => {
                    let row: Result<Vec<u8>> = line
                        .chars()
                        .filter(|c| !c.is_whitespace())
                        .map(|c| match c {
                            '0' => Ok(0),
                            '1' => Ok(1),
                            other => Err(parse_err(line_no, format!("unexpected character {other:?} in matrix row"))),
                        })
                        .collect();
                    let row = row?;
                    if let Some(first) = matrix_rows.first() {
                        if first.len() != row.len() {
                            return Err(parse_err(
                                line_no,
                                format!("matrix row has {} entries, expected {}", row.len(), first.len()),
                            ));
                        }
                    }
                    matrix_rows.push(row);
                }
                Block::None => unreachable!(),
            }
            continue;
        }

        block = Block::None;
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| parse_err(line_no, format!("expected \"key: value\", found {:?}", line.trim())))?;
        let value = value.trim();
        match key.trim() {
            "name" => name = Some(value.to_string()),
            "n" => {
                let v = parse_usize(value, line_no, "n")?;
                n = Some((u32::try_from(v).map_err(|_| parse_err(line_no, "n too large"))?, line_no));
            }
            "k" => k = Some(parse_usize(value, line_no, "k")?),
            "A" => info = Some(parse_list(value, line_no)?),
            "d" => d = Some(parse_usize(value, line_no, "d")?),
            "A_d" => a_d = Some(parse_usize(value, line_no, "A_d")? as u64),
            "constraints" => {
                saw_constraints = true;
                if value == "{}" || value == "[]" {
                    continue;
                }
                if !value.is_empty() {
                    return Err(parse_err(line_no, "constraints are listed on indented lines below the key"));
                }
                block = Block::Constraints;
            }
            "matrix" => {
                if !value.is_empty() {
                    return Err(parse_err(line_no, "matrix rows are listed on indented lines below the key"));
                }
                matrix_line = Some(line_no);
                block = Block::Matrix;
            }
            other => return Err(parse_err(line_no, format!("unknown key {other:?}"))),
        }
    }

    let distance = match (d, a_d) {
        (Some(d), Some(multiplicity)) => Some(DistanceTerms { d, multiplicity }),
        (None, None) => None,
        _ => return Err(parse_err(0, "d and A_d must be given together")),
    };

    let body = if let Some(mline) = matrix_line {
        if info.is_some() || saw_constraints {
            return Err(parse_err(mline, "a file gives either A/constraints or a matrix, not both"));
        }
        if matrix_rows.is_empty() {
            return Err(parse_err(mline, "matrix has no rows"));
        }
        let m = BitMatrix::from_rows(&matrix_rows)?;
        if let Some((n, nline)) = n {
            if n >= usize::BITS || 1usize << n != m.cols() {
                return Err(parse_err(nline, format!("n = {n} does not match {} matrix columns", m.cols())));
            }
        }
        SpecBody::Matrix(m)
    } else {
        let (n, _) = n.ok_or_else(|| parse_err(0, "missing key n"))?;
        let info = info.ok_or_else(|| parse_err(0, "missing key A"))?;
        SpecBody::Sets {
            n,
            info,
            constraints,
        }
    };

    Ok(SpecFile {
        name,
        k,
        body,
        distance,
    })
}

/// Writes a spec in the file grammar; `parse_spec` reads it back to the same spec.
pub fn format_spec(spec: &CodeSpec, name: Option<&str>, distance: Option<DistanceTerms>) -> String {
    let mut out = String::new();
    if let Some(name) = name {
        let _ = writeln!(out, "name: {name}");
    }
    let _ = writeln!(out, "n: {}", spec.log_length());
    let _ = writeln!(out, "k: {}", spec.dimension());
    let list = |v: &[usize]| {
        v.iter()
            .map(|i| (i + 1).to_string())
            .collect::<Vec<_>>()
            .join(", ")
    };
    let _ = writeln!(out, "A: [{}]", list(spec.info_set()));
    if spec.constraints().is_empty() {
        let _ = writeln!(out, "constraints: {{}}");
    } else {
        let _ = writeln!(out, "constraints:");
        for (t, srcs) in spec.constraints() {
            let _ = writeln!(out, "  {}: [{}]", t + 1, list(srcs));
        }
    }
    if let Some(d) = distance {
        let _ = writeln!(out, "d: {}", d.d);
        let _ = writeln!(out, "A_d: {}", d.multiplicity);
    }
    out
}
