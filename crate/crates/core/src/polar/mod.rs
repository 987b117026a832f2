//! Precoded polar component codes.
//!
//! A code of length `N = 2^n` is defined by its information set `A`, the
//! frozen set `F = [N] \ A`, and linear constraints for the dynamic frozen
//! bits `F_d ⊆ F`. Codewords are `c = u * K^{⊗n}` in natural bit order
//! (no bit-reversal permutation), where `u` carries the message on `A`,
//! zeros on `F \ F_d` and `u_i = f_i(u_1..u_{i-1})` on `F_d`.
//!
//! Indices are 0-based inside this crate. Spec files and reports use 1-based
//! indices; conversion happens only at those boundaries.

mod catalog;
mod specfile;

use std::collections::BTreeMap;
use std::fmt;

pub use catalog::{builtin_codes, Catalog, CatalogEntry, CatalogSource};
pub use specfile::{format_spec, parse_spec, SpecBody, SpecFile};

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// Largest supported component length exponent.
pub const MAX_LOG_LENGTH: u32 = 20;

/// Minimum distance and its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DistanceTerms {
    pub d: usize,
    pub multiplicity: u64,
}

/// Information set, frozen set and dynamic frozen constraints of a code.
///
/// Constraint sources are always stored in canonical form: information
/// indices only, sorted, with sources that are themselves dynamic frozen
/// bits expanded transitively (XOR, so repeated sources cancel).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeSpec {
    n: u32,
    info: Vec<usize>,
    constraints: BTreeMap<usize, Vec<usize>>,
}

impl CodeSpec {
    /// Validates and canonicalizes a code description (0-based indices).
    pub fn new(n: u32, info: Vec<usize>, constraints: BTreeMap<usize, Vec<usize>>) -> Result<Self> {
        if n > MAX_LOG_LENGTH {
            return Err(Error::InvalidSpec(format!(
                "n = {n} exceeds the supported maximum {MAX_LOG_LENGTH}"
            )));
        }
        let len = 1usize << n;
        if info.is_empty() {
            return Err(Error::InvalidSpec("information set is empty".into()));
        }
        if info.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSpec(
                "information set must be strictly increasing".into(),
            ));
        }
        if let Some(&bad) = info.iter().find(|&&i| i >= len) {
            return Err(Error::InvalidSpec(format!(
                "information index {} outside [1, {len}]",
                bad + 1
            )));
        }
        let is_info = |i: usize| info.binary_search(&i).is_ok();

        let mut canonical: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (&target, sources) in &constraints {
            if target >= len {
                return Err(Error::InvalidSpec(format!(
                    "constraint index {} outside [1, {len}]",
                    target + 1
                )));
            }
            if is_info(target) {
                return Err(Error::InvalidSpec(format!(
                    "constraint target {} is an information index",
                    target + 1
                )));
            }
            if sources.is_empty() {
                return Err(Error::InvalidSpec(format!(
                    "constraint for index {} has no sources",
                    target + 1
                )));
            }
            // Keys are visited in increasing order, so every earlier dynamic
            // frozen source is already canonical.
            let mut acc: Vec<bool> = vec![false; len];
            for &s in sources {
                if s >= target {
                    return Err(Error::InvalidSpec(format!(
                        "constraint for index {} uses source {} which is not earlier",
                        target + 1,
                        s + 1
                    )));
                }
                if is_info(s) {
                    acc[s] ^= true;
                } else if let Some(expanded) = canonical.get(&s) {
                    for &e in expanded {
                        acc[e] ^= true;
                    }
                } else if constraints.contains_key(&s) {
                    // Source was a dynamic frozen bit whose constraint cancelled to zero.
                } else {
                    return Err(Error::InvalidSpec(format!(
                        "constraint for index {} uses source {} which is neither information nor dynamic frozen",
                        target + 1,
                        s + 1
                    )));
                }
            }
            let expanded: Vec<usize> = (0..len).filter(|&i| acc[i]).collect();
            if !expanded.is_empty() {
                canonical.insert(target, expanded);
            }
        }
        Ok(CodeSpec {
            n,
            info,
            constraints: canonical,
        })
    }

    /// Builds a spec from 1-based indices as written in spec files.
    pub fn from_one_based(
        n: u32,
        info: &[usize],
        constraints: &[(usize, Vec<usize>)],
    ) -> Result<Self> {
        let dec = |i: usize| -> Result<usize> {
            i.checked_sub(1)
                .ok_or_else(|| Error::InvalidSpec("indices are 1-based; found 0".into()))
        };
        let info = info.iter().map(|&i| dec(i)).collect::<Result<Vec<_>>>()?;
        let mut map = BTreeMap::new();
        for (t, srcs) in constraints {
            let srcs = srcs.iter().map(|&s| dec(s)).collect::<Result<Vec<_>>>()?;
            if map.insert(dec(*t)?, srcs).is_some() {
                return Err(Error::InvalidSpec(format!("duplicate constraint for index {t}")));
            }
        }
        CodeSpec::new(n, info, map)
    }

    /// Plain polar code (all frozen bits static) with the given information set.
    pub fn plain(n: u32, info: Vec<usize>) -> Result<Self> {
        CodeSpec::new(n, info, BTreeMap::new())
    }

    pub fn log_length(&self) -> u32 {
        self.n
    }

    pub fn length(&self) -> usize {
        1 << self.n
    }

    pub fn dimension(&self) -> usize {
        self.info.len()
    }

    pub fn rate(&self) -> f64 {
        self.dimension() as f64 / self.length() as f64
    }

    /// Information indices (0-based, increasing).
    pub fn info_set(&self) -> &[usize] {
        &self.info
    }

    pub fn frozen_set(&self) -> Vec<usize> {
        (0..self.length())
            .filter(|i| self.info.binary_search(i).is_err())
            .collect()
    }

    /// Dynamic frozen constraints: target index to information-index sources (0-based).
    pub fn constraints(&self) -> &BTreeMap<usize, Vec<usize>> {
        &self.constraints
    }

    pub fn is_plain(&self) -> bool {
        self.constraints.is_empty()
    }
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{}) A={{", self.length(), self.dimension())?;
        for (j, i) in self.info.iter().enumerate() {
            if j > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str("}")?;
        for (t, srcs) in &self.constraints {
            let s: Vec<String> = srcs.iter().map(|s| format!("u{}", s + 1)).collect();
            write!(f, " f{}={}", t + 1, s.join("+"))?;
        }
        Ok(())
    }
}

/// Result of checking the two SC-aimed properties and the rank of a matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScAimedReport {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    /// Leading (first nonzero) column of each row.
    pub leading: Vec<Option<usize>>,
    /// Property 1: each leading 1 is the only nonzero entry of its column.
    pub unique_leading_columns: bool,
    /// Property 2: leading columns strictly increase with the row index.
    pub increasing_leading_columns: bool,
    pub full_rank: bool,
    pub power_of_two_length: bool,
    pub violations: Vec<String>,
}

impl ScAimedReport {
    pub fn is_sc_aimed(&self) -> bool {
        self.unique_leading_columns && self.increasing_leading_columns
    }

    pub fn passes(&self) -> bool {
        self.is_sc_aimed() && self.full_rank && self.power_of_two_length
    }
}

/// Checks SC-aimed structure and rank of a precoding matrix.
pub fn check_sc_aimed(p: &BitMatrix) -> ScAimedReport {
    let leading: Vec<Option<usize>> = p.row_iter().map(BitVector::first_one).collect();
    let mut violations = Vec::new();

    let mut unique = true;
    for (r, lead) in leading.iter().enumerate() {
        match lead {
            None => violations.push(format!("row {} is all-zero", r + 1)),
            Some(c) => {
                let others = (0..p.rows()).filter(|&o| o != r && p.get(o, *c)).count();
                if others > 0 {
                    unique = false;
                    violations.push(format!(
                        "property 1: column {} holds the leading 1 of row {} but has {} other nonzero entries",
                        c + 1,
                        r + 1,
                        others
                    ));
                }
            }
        }
    }

    let mut increasing = true;
    let present: Vec<(usize, usize)> = leading
        .iter()
        .enumerate()
        .filter_map(|(r, l)| l.map(|c| (r, c)))
        .collect();
    for w in present.windows(2) {
        if w[0].1 >= w[1].1 {
            increasing = false;
            violations.push(format!(
                "property 2: leading column {} of row {} is not before leading column {} of row {}",
                w[0].1 + 1,
                w[0].0 + 1,
                w[1].1 + 1,
                w[1].0 + 1
            ));
        }
    }

    let rank = p.rank();
    let full_rank = rank == p.rows();
    if !full_rank {
        violations.push(format!("rank {rank} is below the {} rows", p.rows()));
    }
    let power_of_two_length = p.cols().is_power_of_two();
    if !power_of_two_length {
        violations.push(format!("length {} is not a power of two", p.cols()));
    }

    ScAimedReport {
        rows: p.rows(),
        cols: p.cols(),
        rank,
        leading,
        unique_leading_columns: unique,
        increasing_leading_columns: increasing,
        full_rank,
        power_of_two_length,
        violations,
    }
}

/// Reads information set and dynamic frozen constraints off an SC-aimed matrix.
pub fn spec_from_precoding(p: &BitMatrix) -> Result<CodeSpec> {
    let report = check_sc_aimed(p);
    if !report.power_of_two_length {
        return Err(Error::NotPowerOfTwo(p.cols()));
    }
    if !report.is_sc_aimed() {
        let first = report
            .violations
            .iter()
            .find(|v| v.starts_with("property"))
            .cloned()
            .unwrap_or_default();
        return Err(Error::NotScAimed(first));
    }
    if !report.full_rank {
        return Err(Error::RankDeficient {
            rank: report.rank,
            rows: report.rows,
        });
    }
    let info: Vec<usize> = report.leading.iter().map(|l| l.expect("full rank")).collect();
    let n = p.cols().trailing_zeros();
    let mut constraints = BTreeMap::new();
    for col in 0..p.cols() {
        if info.binary_search(&col).is_ok() {
            continue;
        }
        let sources: Vec<usize> = (0..p.rows()).filter(|&r| p.get(r, col)).map(|r| info[r]).collect();
        if !sources.is_empty() {
            constraints.insert(col, sources);
        }
    }
    CodeSpec::new(n, info, constraints)
}

/// The SC-aimed precoding matrix of a spec: row `j` has its leading 1 at the
/// `j`-th information index and a 1 in every dynamic frozen column that lists
/// that index as a source.
pub fn precoding_from_spec(spec: &CodeSpec) -> BitMatrix {
    let mut p = BitMatrix::zeros(spec.dimension(), spec.length());
    for (row, &a) in spec.info.iter().enumerate() {
        p.set(row, a, true);
    }
    for (&target, sources) in &spec.constraints {
        for s in sources {
            let row = spec.info.binary_search(s).expect("canonical sources are information indices");
            p.set(row, target, true);
        }
    }
    p
}

/// In-place `x <- x * K^{⊗n}` on a slice of 0/1 bytes; `x.len()` must be a power of two.
pub fn polar_transform_in_place(x: &mut [u8]) {
    let len = x.len();
    debug_assert!(len.is_power_of_two());
    let mut half = 1;
    while half < len {
        for block in (0..len).step_by(2 * half) {
            for j in block..block + half {
                x[j] ^= x[j + half];
            }
        }
        half *= 2;
    }
}

/// `u * K^{⊗n}` in butterfly form.
pub fn polar_transform(u: &BitVector) -> Result<BitVector> {
    if !u.len().is_power_of_two() {
        return Err(Error::NotPowerOfTwo(u.len()));
    }
    let mut bits = u.to_bits();
    polar_transform_in_place(&mut bits);
    Ok(BitVector::from_bits(&bits))
}

/// What the decoder or encoder does at a given input position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BitRole {
    /// Carries message bit with this index.
    Info(usize),
    /// Static frozen bit, always 0.
    Frozen,
    /// Dynamic frozen bit: XOR of the listed earlier input positions.
    Dynamic(Vec<usize>),
}

/// A precoded polar code with its precoding and generator matrices.
#[derive(Clone, Debug)]
pub struct PrecodedPolarCode {
    name: Option<String>,
    spec: CodeSpec,
    precoding: BitMatrix,
    generator: BitMatrix,
    roles: Vec<BitRole>,
    distance: Option<DistanceTerms>,
}

impl PrecodedPolarCode {
    pub fn new(spec: CodeSpec) -> Self {
        let precoding = precoding_from_spec(&spec);
        let generator = precoding
            .mul(&BitMatrix::kernel_power(spec.log_length()))
            .expect("precoding has N columns");
        let mut roles = vec![BitRole::Frozen; spec.length()];
        for (m, &a) in spec.info.iter().enumerate() {
            roles[a] = BitRole::Info(m);
        }
        for (&t, srcs) in &spec.constraints {
            roles[t] = BitRole::Dynamic(srcs.clone());
        }
        PrecodedPolarCode {
            name: None,
            spec,
            precoding,
            generator,
            roles,
            distance: None,
        }
    }

    pub fn from_precoding(p: &BitMatrix) -> Result<Self> {
        Ok(Self::new(spec_from_precoding(p)?))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Attaches known minimum-distance terms (e.g. from catalog metadata).
    pub fn with_distance(mut self, terms: DistanceTerms) -> Self {
        self.distance = Some(terms);
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn label(&self) -> String {
        self.name
            .clone()
            .unwrap_or_else(|| format!("({},{})", self.length(), self.dimension()))
    }

    pub fn spec(&self) -> &CodeSpec {
        &self.spec
    }

    pub fn precoding(&self) -> &BitMatrix {
        &self.precoding
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    pub fn roles(&self) -> &[BitRole] {
        &self.roles
    }

    /// Distance terms attached as metadata, if any.
    pub fn distance_metadata(&self) -> Option<DistanceTerms> {
        self.distance
    }

    pub fn length(&self) -> usize {
        self.spec.length()
    }

    pub fn dimension(&self) -> usize {
        self.spec.dimension()
    }

    pub fn log_length(&self) -> u32 {
        self.spec.log_length()
    }

    /// Two-stage encoding: build `u` from the message, then apply the polar transform.
    pub fn encode(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                what: "message length",
                expected: self.dimension(),
                found: v.len(),
            });
        }
        let msg = v.to_bits();
        let mut out = vec![0u8; self.length()];
        self.encode_into(&msg, &mut out);
        Ok(BitVector::from_bits(&out))
    }

    /// Encodes `msg` (k bytes of 0/1) into `out` (N bytes).
    pub fn encode_into(&self, msg: &[u8], out: &mut [u8]) {
        debug_assert_eq!(msg.len(), self.dimension());
        debug_assert_eq!(out.len(), self.length());
        for i in 0..out.len() {
            out[i] = match &self.roles[i] {
                BitRole::Info(m) => msg[*m],
                BitRole::Frozen => 0,
                BitRole::Dynamic(srcs) => srcs.iter().fold(0, |acc, &s| acc ^ out[s]),
            };
        }
        polar_transform_in_place(out);
    }

    /// Membership test: invert the transform and check every frozen constraint.
    pub fn is_member(&self, c: &BitVector) -> bool {
        if c.len() != self.length() {
            return false;
        }
        let mut bits = c.to_bits();
        self.is_member_in_place(&mut bits)
    }

    /// Membership test on 0/1 bytes; overwrites `bits` with the transform input `u`.
    pub fn is_member_in_place(&self, bits: &mut [u8]) -> bool {
        if bits.len() != self.length() {
            return false;
        }
        polar_transform_in_place(bits);
        self.roles.iter().enumerate().all(|(i, role)| match role {
            BitRole::Info(_) => true,
            BitRole::Frozen => bits[i] == 0,
            BitRole::Dynamic(srcs) => srcs.iter().fold(0, |acc, &s| acc ^ bits[s]) == bits[i],
        })
    }

    /// Recovers the message of a codeword, or `None` if `c` is not a codeword.
    pub fn unencode(&self, c: &BitVector) -> Option<BitVector> {
        let mut bits = c.to_bits();
        if !self.is_member_in_place(&mut bits) {
            return None;
        }
        Some(BitVector::from_bits(
            &self.spec.info.iter().map(|&a| bits[a]).collect::<Vec<_>>(),
        ))
    }
}
