//! Two-dimensional product codes built from precoded polar components.
//!
//! Orientation: a codeword is an `N1 x N2` array stored row-major. Every
//! column (length `N1`) is a codeword of component 1 and every row (length
//! `N2`) a codeword of component 2. The flattened codeword equals
//! `v * (G1 ⊗ G2)` and also `v * (P1 ⊗ P2) * K^{⊗(n1+n2)}`, so the product
//! is itself a precoded polar code with an SC-aimed precoding matrix.

use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::oracle::{brute_wef, ENUMERATION_LIMIT};
use crate::polar::{check_sc_aimed, DistanceTerms, PrecodedPolarCode};

/// Minimum distance terms of a component: exhaustive enumeration when
/// `k <= 24`, otherwise the code's metadata.
pub fn component_distance(code: &PrecodedPolarCode) -> Option<DistanceTerms> {
    if code.dimension() <= ENUMERATION_LIMIT {
        brute_wef(code).ok().and_then(|w| w.min_distance())
    } else {
        code.distance_metadata()
    }
}

#[derive(Clone, Debug)]
pub struct ProductCode {
    column_code: PrecodedPolarCode,
    row_code: PrecodedPolarCode,
    composed: PrecodedPolarCode,
    distance: Option<DistanceTerms>,
}

/// Composes component 1 (columns) with component 2 (rows).
pub fn compose(c1: PrecodedPolarCode, c2: PrecodedPolarCode) -> Result<ProductCode> {
    let p = c1.precoding().kron(c2.precoding());
    let report = check_sc_aimed(&p);
    if !report.passes() {
        return Err(Error::NotScAimed(format!(
            "composed precoding failed: {}",
            report.violations.join("; ")
        )));
    }
    let composed = PrecodedPolarCode::from_precoding(&p)?
        .with_name(format!("{}x{}", c1.label(), c2.label()));
    let distance = match (component_distance(&c1), component_distance(&c2)) {
        (Some(a), Some(b)) => Some(DistanceTerms {
            d: a.d * b.d,
            multiplicity: a.multiplicity * b.multiplicity,
        }),
        _ => None,
    };
    let composed = match distance {
        Some(d) => composed.with_distance(d),
        None => composed,
    };
    Ok(ProductCode {
        column_code: c1,
        row_code: c2,
        composed,
        distance,
    })
}

impl ProductCode {
    /// Component 1, applied to columns of length `N1`.
    pub fn column_code(&self) -> &PrecodedPolarCode {
        &self.column_code
    }

    /// Component 2, applied to rows of length `N2`.
    pub fn row_code(&self) -> &PrecodedPolarCode {
        &self.row_code
    }

    /// The product viewed as one precoded polar code.
    pub fn composed(&self) -> &PrecodedPolarCode {
        &self.composed
    }

    /// Number of rows, `N1`.
    pub fn rows(&self) -> usize {
        self.column_code.length()
    }

    /// Number of columns, `N2`.
    pub fn cols(&self) -> usize {
        self.row_code.length()
    }

    pub fn length(&self) -> usize {
        self.rows() * self.cols()
    }

    pub fn dimension(&self) -> usize {
        self.column_code.dimension() * self.row_code.dimension()
    }

    pub fn rate(&self) -> f64 {
        self.column_code.spec().rate() * self.row_code.spec().rate()
    }

    pub fn distance(&self) -> Option<DistanceTerms> {
        self.distance
    }

    /// Overrides the distance terms, e.g. for analysis of a hypothetical code.
    pub fn with_distance(mut self, terms: DistanceTerms) -> Self {
        self.distance = Some(terms);
        self
    }

    pub fn label(&self) -> String {
        format!(
            "({},{}) = {} (columns) x {} (rows)",
            self.length(),
            self.dimension(),
            self.column_code.label(),
            self.row_code.label()
        )
    }

    /// Row-by-row message placement, row encoding, then column encoding.
    pub fn encode2d(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                what: "product message length",
                expected: self.dimension(),
                found: v.len(),
            });
        }
        let mut out = vec![0u8; self.length()];
        self.encode_into(&v.to_bits(), &mut out);
        Ok(BitVector::from_bits(&out))
    }

    /// Encodes a `k1 * k2` message into an `N1 * N2` row-major array of 0/1 bytes.
    pub fn encode_into(&self, msg: &[u8], out: &mut [u8]) {
        let (k1, k2) = (self.column_code.dimension(), self.row_code.dimension());
        let (n1, n2) = (self.rows(), self.cols());
        debug_assert_eq!(msg.len(), k1 * k2);
        debug_assert_eq!(out.len(), n1 * n2);
        // Row pass: k1 x N2 intermediate.
        let mut mid = vec![0u8; k1 * n2];
        for r in 0..k1 {
            self.row_code
                .encode_into(&msg[r * k2..(r + 1) * k2], &mut mid[r * n2..(r + 1) * n2]);
        }
        let mut col_msg = vec![0u8; k1];
        let mut col_out = vec![0u8; n1];
        for c in 0..n2 {
            for r in 0..k1 {
                col_msg[r] = mid[r * n2 + c];
            }
            self.column_code.encode_into(&col_msg, &mut col_out);
            for r in 0..n1 {
                out[r * n2 + c] = col_out[r];
            }
        }
    }

    /// Every row in the row code and every column in the column code.
    pub fn is_codeword(&self, c: &BitVector) -> bool {
        c.len() == self.length() && self.is_codeword_bits(&c.to_bits())
    }

    /// Row/column membership on a row-major array of 0/1 bytes.
    pub fn is_codeword_bits(&self, c: &[u8]) -> bool {
        let (n1, n2) = (self.rows(), self.cols());
        if c.len() != n1 * n2 {
            return false;
        }
        let mut line = vec![0u8; n1.max(n2)];
        for r in 0..n1 {
            line[..n2].copy_from_slice(&c[r * n2..(r + 1) * n2]);
            if !self.row_code.is_member_in_place(&mut line[..n2]) {
                return false;
            }
        }
        for col in 0..n2 {
            for r in 0..n1 {
                line[r] = c[r * n2 + col];
            }
            if !self.column_code.is_member_in_place(&mut line[..n1]) {
                return false;
            }
        }
        true
    }

    /// Membership through the composed precoding and the full-length transform.
    pub fn is_codeword_composed(&self, c: &BitVector) -> bool {
        self.composed.is_member(c)
    }

    /// Truncated union bound at `ebn0_db`.
    pub fn tub(&self, ebn0_db: f64) -> Result<f64> {
        tub(self, ebn0_db)
    }
}

/// `(1/2) * A_d * erfc(sqrt(d * R * Eb/N0))` with `Eb/N0` in dB.
pub fn tub_value(terms: DistanceTerms, rate: f64, ebn0_db: f64) -> f64 {
    let ebn0 = 10f64.powf(ebn0_db / 10.0);
    0.5 * terms.multiplicity as f64 * libm::erfc((terms.d as f64 * rate * ebn0).sqrt())
}

pub fn tub(pc: &ProductCode, ebn0_db: f64) -> Result<f64> {
    if !ebn0_db.is_finite() {
        return Err(Error::InvalidConfig(format!("Eb/N0 must be finite, got {ebn0_db}")));
    }
    let terms = pc
        .distance
        .ok_or_else(|| Error::UnknownDistance(pc.label()))?;
    Ok(tub_value(terms, pc.rate(), ebn0_db))
}
