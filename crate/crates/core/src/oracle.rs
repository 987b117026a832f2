//! Exhaustive reference implementations: weight enumeration, ML decoding and
//! exact bitwise a-posteriori LLRs. All of them walk every codeword, so they
//! are guarded to `k <= 24`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::polar::{DistanceTerms, PrecodedPolarCode};

/// Largest dimension accepted by the exhaustive routines.
pub const ENUMERATION_LIMIT: usize = 24;

fn guard(k: usize) -> Result<()> {
    if k > ENUMERATION_LIMIT {
        return Err(Error::GuardViolation {
            k,
            limit: ENUMERATION_LIMIT,
        });
    }
    Ok(())
}

/// Visits every codeword spanned by the generator rows, in Gray-code order.
pub fn for_each_codeword(generator: &BitMatrix, mut f: impl FnMut(&BitVector)) -> Result<()> {
    let k = generator.rows();
    guard(k)?;
    let mut c = BitVector::zeros(generator.cols());
    f(&c);
    for i in 1u64..(1u64 << k) {
        c.xor_assign(generator.row(i.trailing_zeros() as usize));
        f(&c);
    }
    Ok(())
}

/// Weight distribution of a linear code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightEnumerator {
    pub length: usize,
    pub dimension: usize,
    pub counts: BTreeMap<usize, u64>,
}

impl WeightEnumerator {
    pub fn multiplicity(&self, w: usize) -> u64 {
        self.counts.get(&w).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Smallest nonzero weight and its multiplicity; `None` for the zero code.
    pub fn min_distance(&self) -> Option<DistanceTerms> {
        self.counts
            .iter()
            .find(|(&w, _)| w > 0)
            .map(|(&d, &multiplicity)| DistanceTerms { d, multiplicity })
    }
}

impl fmt::Display for WeightEnumerator {
    /// Polynomial form, e.g. `1 + 48x^6 + 30x^8`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .counts
            .iter()
            .map(|(&w, &a)| match w {
                0 => a.to_string(),
                1 => format!("{a}x"),
                _ => format!("{a}x^{w}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

/// Weight enumerator of the code generated by the rows of `generator`
/// (rows assumed linearly independent).
pub fn wef_of_generator(generator: &BitMatrix) -> Result<WeightEnumerator> {
    let mut counts = BTreeMap::new();
    for_each_codeword(generator, |c| *counts.entry(c.weight()).or_insert(0) += 1)?;
    Ok(WeightEnumerator {
        length: generator.cols(),
        dimension: generator.rows(),
        counts,
    })
}

pub fn brute_wef(code: &PrecodedPolarCode) -> Result<WeightEnumerator> {
    wef_of_generator(code.generator())
}

/// `sum_j (1 - 2 c_j) * llr_j`.
fn correlation(c: &BitVector, llr: &[f64]) -> f64 {
    llr.iter()
        .enumerate()
        .map(|(j, &l)| if c.get(j) { -l } else { l })
        .sum()
}

fn lex_less(a: &BitVector, b: &BitVector) -> bool {
    for j in 0..a.len() {
        match (a.get(j), b.get(j)) {
            (false, true) => return true,
            (true, false) => return false,
            _ => {}
        }
    }
    false
}

fn check_llr(code: &PrecodedPolarCode, llr: &[f64]) -> Result<()> {
    if llr.len() != code.length() {
        return Err(Error::DimensionMismatch {
            what: "LLR vector length",
            expected: code.length(),
            found: llr.len(),
        });
    }
    if let Some(j) = llr.iter().position(|l| !l.is_finite()) {
        return Err(Error::NonFinite(j));
    }
    Ok(())
}

/// Maximum-likelihood codeword by exhaustive correlation search. Ties go to
/// the lexicographically smaller codeword (first position most significant).
pub fn ml_decode(code: &PrecodedPolarCode, llr: &[f64]) -> Result<BitVector> {
    guard(code.dimension())?;
    check_llr(code, llr)?;
    let mut best: Option<(f64, BitVector)> = None;
    for_each_codeword(code.generator(), |c| {
        let corr = correlation(c, llr);
        let better = match &best {
            None => true,
            Some((b, bc)) => corr > *b || (corr == *b && lex_less(c, bc)),
        };
        if better {
            best = Some((corr, c.clone()));
        }
    })?;
    Ok(best.expect("code has at least the zero codeword").1)
}

fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// Exact bitwise a-posteriori LLRs.
///
/// Each codeword is weighted by `exp(corr(c) / 2)`, which is proportional to
/// its likelihood given channel LLRs. A position where every codeword has
/// the same value gets `+inf` (always 0) or `-inf` (always 1).
pub fn exact_bit_app(code: &PrecodedPolarCode, llr: &[f64]) -> Result<Vec<f64>> {
    guard(code.dimension())?;
    check_llr(code, llr)?;
    let n = code.length();
    let mut zeros: Vec<Vec<f64>> = vec![Vec::new(); n];
    let mut ones: Vec<Vec<f64>> = vec![Vec::new(); n];
    for_each_codeword(code.generator(), |c| {
        let metric = 0.5 * correlation(c, llr);
        for j in 0..n {
            if c.get(j) {
                ones[j].push(metric);
            } else {
                zeros[j].push(metric);
            }
        }
    })?;
    Ok((0..n)
        .map(|j| log_sum_exp(&zeros[j]) - log_sum_exp(&ones[j]))
        .collect())
}
