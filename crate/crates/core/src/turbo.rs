//! Iterative (turbo) decoding of two-dimensional product codes.
//!
//! Each half iteration decodes every row (or every column) with SCL, turns
//! the lists into soft outputs `L^app`, and stops when the hard decision is a
//! product codeword. Otherwise `L^e = L^app - L^ch - L^a` and the next half
//! iteration, on the other orientation, uses `L^a = alpha_i * L^e`.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::product::ProductCode;
use crate::scl::{soft_output_into, SclDecoder, SoftOutputConfig, DEFAULT_LLR_CLIP};

/// Alpha schedule `1/8, 1/8, 2/8, 2/8, 3/8, 3/8, 4/8, 4/8, 4/8, ...` with
/// `2 * max_iterations` entries.
pub fn default_alpha(max_iterations: usize) -> Vec<f64> {
    (0..2 * max_iterations)
        .map(|i| ((i / 2 + 1).min(4)) as f64 / 8.0)
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Orientation {
    #[default]
    Rows,
    Columns,
}

impl Orientation {
    pub fn other(self) -> Self {
        match self {
            Orientation::Rows => Orientation::Columns,
            Orientation::Columns => Orientation::Rows,
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Rows => "rows",
            Orientation::Columns => "columns",
        })
    }
}

impl std::str::FromStr for Orientation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rows" => Ok(Orientation::Rows),
            "columns" => Ok(Orientation::Columns),
            other => Err(Error::InvalidConfig(format!(
                "first pass must be rows or columns, got {other:?}"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TurboConfig {
    pub list_size: usize,
    pub max_iterations: usize,
    /// One scaling factor per half iteration, `2 * max_iterations` entries in
    /// `(0, 1]`. Entry `i` scales the a-priori input of half iteration `i + 1`
    /// (0-based entries, 1-based half iterations); the first entry is never
    /// used because decoding starts from a zero a-priori grid.
    pub alpha: Vec<f64>,
    pub first_pass: Orientation,
    pub soft: SoftOutputConfig,
    /// Clip applied to component decoder inputs.
    pub input_clip: Option<f64>,
    /// Clip applied to the scaled extrinsic values that become the next a-priori input.
    pub extrinsic_clip: Option<f64>,
}

impl TurboConfig {
    pub fn new(list_size: usize, max_iterations: usize) -> Self {
        TurboConfig {
            list_size,
            max_iterations,
            alpha: default_alpha(max_iterations),
            first_pass: Orientation::Rows,
            soft: SoftOutputConfig::default(),
            input_clip: Some(DEFAULT_LLR_CLIP),
            extrinsic_clip: Some(DEFAULT_LLR_CLIP),
        }
    }

    /// Disables every clip and saturation, for comparisons against exact references.
    pub fn without_clipping(mut self) -> Self {
        self.input_clip = None;
        self.extrinsic_clip = None;
        self.soft.cap = None;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.list_size == 0 {
            return Err(Error::InvalidConfig("list size must be at least 1".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("maximum iterations must be at least 1".into()));
        }
        if self.alpha.len() != 2 * self.max_iterations {
            return Err(Error::InvalidConfig(format!(
                "alpha needs {} entries, got {}",
                2 * self.max_iterations,
                self.alpha.len()
            )));
        }
        if let Some(a) = self.alpha.iter().find(|&&a| !(a > 0.0 && a <= 1.0)) {
            return Err(Error::InvalidConfig(format!("alpha entry {a} outside (0, 1]")));
        }
        Ok(())
    }
}

/// Role of an LLR grid in the message passing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LlrRole {
    Channel,
    Apriori,
    Posterior,
    Extrinsic,
}

/// `rows x cols` LLR matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct LlrGrid {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
    role: LlrRole,
}

impl LlrGrid {
    pub fn zeros(rows: usize, cols: usize, role: LlrRole) -> Self {
        LlrGrid {
            rows,
            cols,
            values: vec![0.0; rows * cols],
            role,
        }
    }

    pub fn from_values(rows: usize, cols: usize, values: Vec<f64>, role: LlrRole) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                what: "LLR grid size",
                expected: rows * cols,
                found: values.len(),
            });
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(j));
        }
        Ok(LlrGrid {
            rows,
            cols,
            values,
            role,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn role(&self) -> LlrRole {
        self.role
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.values[r * self.cols + c]
    }

    /// Elementwise negation, keeping the role.
    pub fn negated(&self) -> Self {
        LlrGrid {
            values: self.values.iter().map(|v| -v).collect(),
            ..self.clone()
        }
    }
}

/// Bit 0 where the LLR is `>= 0`, bit 1 where it is negative, rows juxtaposed.
pub fn hard_decision(grid: &LlrGrid) -> BitVector {
    BitVector::from_fn(grid.values.len(), |i| grid.values[i] < 0.0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub codeword: BitVector,
    pub valid: bool,
    pub half_iterations_used: usize,
    /// Stopped by the validity check before the half-iteration budget ran out.
    pub converged_early: bool,
}

/// Grids of one half iteration, handed to a trace observer.
pub struct HalfIteration<'a> {
    /// 1-based half-iteration index.
    pub index: usize,
    pub orientation: Orientation,
    pub channel: &'a LlrGrid,
    pub apriori: &'a LlrGrid,
    pub posterior: &'a LlrGrid,
    /// `None` when this half iteration ended decoding with a valid codeword.
    pub extrinsic: Option<&'a LlrGrid>,
    pub valid: bool,
}

/// Reusable turbo decoder; owns its component decoders and grids.
pub struct TurboDecoder<'p> {
    code: &'p ProductCode,
    cfg: TurboConfig,
    row_decoder: SclDecoder<'p>,
    column_decoder: SclDecoder<'p>,
    apriori: LlrGrid,
    posterior: LlrGrid,
    extrinsic: LlrGrid,
    line_in: Vec<f64>,
    line_out: Vec<f64>,
    hard: Vec<u8>,
}

impl<'p> TurboDecoder<'p> {
    pub fn new(code: &'p ProductCode, cfg: TurboConfig) -> Result<Self> {
        cfg.validate()?;
        let (rows, cols) = (code.rows(), code.cols());
        let row_decoder =
            SclDecoder::new(code.row_code(), cfg.list_size)?.with_clip(cfg.input_clip);
        let column_decoder =
            SclDecoder::new(code.column_code(), cfg.list_size)?.with_clip(cfg.input_clip);
        Ok(TurboDecoder {
            code,
            cfg,
            row_decoder,
            column_decoder,
            apriori: LlrGrid::zeros(rows, cols, LlrRole::Apriori),
            posterior: LlrGrid::zeros(rows, cols, LlrRole::Posterior),
            extrinsic: LlrGrid::zeros(rows, cols, LlrRole::Extrinsic),
            line_in: vec![0.0; rows.max(cols)],
            line_out: vec![0.0; rows.max(cols)],
            hard: vec![0; rows * cols],
        })
    }

    pub fn config(&self) -> &TurboConfig {
        &self.cfg
    }

    pub fn decode(&mut self, channel: &LlrGrid) -> Result<DecodeOutcome> {
        self.decode_traced(channel, |_| {})
    }

    /// Decodes and calls `observe` after every half iteration.
    pub fn decode_traced(
        &mut self,
        channel: &LlrGrid,
        mut observe: impl FnMut(&HalfIteration<'_>),
    ) -> Result<DecodeOutcome> {
        let (rows, cols) = (self.code.rows(), self.code.cols());
        if channel.rows != rows || channel.cols != cols {
            return Err(Error::DimensionMismatch {
                what: "channel LLR grid shape (rows * cols)",
                expected: rows * cols,
                found: channel.rows * channel.cols,
            });
        }
        if let Some(j) = channel.values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(j));
        }

        self.apriori.values.fill(0.0);
        let max_half = 2 * self.cfg.max_iterations;
        let mut orientation = self.cfg.first_pass;
        for half in 1..=max_half {
            self.component_pass(channel, orientation)?;
            for (h, &v) in self.hard.iter_mut().zip(&self.posterior.values) {
                *h = u8::from(v < 0.0);
            }
            let valid = self.code.is_codeword_bits(&self.hard);
            if valid || half == max_half {
                if !valid {
                    self.update_extrinsic(channel);
                }
                observe(&HalfIteration {
                    index: half,
                    orientation,
                    channel,
                    apriori: &self.apriori,
                    posterior: &self.posterior,
                    extrinsic: (!valid).then_some(&self.extrinsic),
                    valid,
                });
                return Ok(DecodeOutcome {
                    codeword: BitVector::from_bits(&self.hard),
                    valid,
                    half_iterations_used: half,
                    converged_early: valid && half < max_half,
                });
            }
            self.update_extrinsic(channel);
            observe(&HalfIteration {
                index: half,
                orientation,
                channel,
                apriori: &self.apriori,
                posterior: &self.posterior,
                extrinsic: Some(&self.extrinsic),
                valid,
            });
            // The a-priori input of half iteration `half + 1` is scaled by its own entry.
            let alpha = self.cfg.alpha[half];
            let clip = self.cfg.extrinsic_clip;
            for (a, &e) in self.apriori.values.iter_mut().zip(&self.extrinsic.values) {
                let scaled = alpha * e;
                *a = match clip {
                    Some(c) => scaled.clamp(-c, c),
                    None => scaled,
                };
            }
            orientation = orientation.other();
        }
        unreachable!("loop returns on the last half iteration")
    }

    fn update_extrinsic(&mut self, channel: &LlrGrid) {
        for (((e, &app), &ch), &a) in self
            .extrinsic
            .values
            .iter_mut()
            .zip(&self.posterior.values)
            .zip(&channel.values)
            .zip(&self.apriori.values)
        {
            *e = app - ch - a;
        }
    }

    /// Decodes every line of one orientation with input `L^ch + L^a` and
    /// writes the soft outputs into the posterior grid.
    fn component_pass(&mut self, channel: &LlrGrid, orientation: Orientation) -> Result<()> {
        let (rows, cols) = (self.code.rows(), self.code.cols());
        let (lines, len, decoder) = match orientation {
            Orientation::Rows => (rows, cols, &mut self.row_decoder),
            Orientation::Columns => (cols, rows, &mut self.column_decoder),
        };
        let index = |line: usize, pos: usize| match orientation {
            Orientation::Rows => line * cols + pos,
            Orientation::Columns => pos * cols + line,
        };
        for line in 0..lines {
            for pos in 0..len {
                let i = index(line, pos);
                self.line_in[pos] = channel.values[i] + self.apriori.values[i];
            }
            let list = decoder.decode(&self.line_in[..len])?;
            soft_output_into(&list, &self.cfg.soft, &mut self.line_out[..len]);
            for pos in 0..len {
                self.posterior.values[index(line, pos)] = self.line_out[pos];
            }
        }
        Ok(())
    }
}

pub fn turbo_decode(pc: &ProductCode, channel: &LlrGrid, cfg: &TurboConfig) -> Result<DecodeOutcome> {
    TurboDecoder::new(pc, cfg.clone())?.decode(channel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polar::builtin_codes;
    use crate::product::compose;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn product(a: &str, b: &str) -> ProductCode {
        let cat = builtin_codes();
        compose(cat.resolve(a).unwrap(), cat.resolve(b).unwrap()).unwrap()
    }

    fn noisy_grid(pc: &ProductCode, rng: &mut ChaCha8Rng, sigma: f64) -> (BitVector, LlrGrid) {
        let v = BitVector::from_fn(pc.dimension(), |_| rng.random());
        let c = pc.encode2d(&v).unwrap();
        let values = (0..pc.length())
            .map(|j| {
                let x = if c.get(j) { -1.0 } else { 1.0 };
                let z: f64 = rng.sample(StandardNormal);
                2.0 * (x + sigma * z) / (sigma * sigma)
            })
            .collect();
        (c, LlrGrid::from_values(pc.rows(), pc.cols(), values, LlrRole::Channel).unwrap())
    }

    #[test]
    fn alpha_schedule() {
        let a = default_alpha(20);
        assert_eq!(a.len(), 40);
        assert_eq!(&a[..6], &[0.125, 0.125, 0.25, 0.25, 0.375, 0.375]);
        assert!(a[6..].iter().all(|&x| x == 0.5));
        assert_eq!(default_alpha(1), vec![0.125, 0.125]);
        assert_eq!(*default_alpha(5).last().unwrap(), 0.5);
    }

    #[test]
    fn config_validation() {
        assert!(TurboConfig::new(8, 20).validate().is_ok());
        assert!(TurboConfig::new(0, 20).validate().is_err());
        assert!(TurboConfig::new(8, 0).validate().is_err());
        let mut cfg = TurboConfig::new(8, 2);
        cfg.alpha = vec![0.5; 3];
        assert!(cfg.validate().is_err());
        cfg.alpha = vec![0.5, 0.5, 1.2, 0.1];
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn hard_decision_rules() {
        let g = LlrGrid::from_values(2, 2, vec![1.0, 0.0, 3.0, 2.0], LlrRole::Posterior).unwrap();
        assert!(hard_decision(&g).is_zero());
        let g = LlrGrid::from_values(2, 2, vec![1.0, -0.5, 3.0, -2.0], LlrRole::Posterior).unwrap();
        let h = hard_decision(&g);
        let mut flipped = hard_decision(&g.negated());
        flipped.xor_assign(&h);
        assert_eq!(flipped.weight(), 4);
        assert_eq!(h.to_string(), "0101");
    }

    #[test]
    fn rejects_bad_input() {
        let pc = product("opt16_7", "opt16_7");
        let g = LlrGrid::zeros(8, 32, LlrRole::Channel);
        assert!(matches!(
            turbo_decode(&pc, &g, &TurboConfig::new(8, 2)),
            Err(Error::DimensionMismatch { .. })
        ));
        let mut v = vec![1.0; 256];
        v[7] = f64::INFINITY;
        assert!(LlrGrid::from_values(16, 16, v, LlrRole::Channel).is_err());
    }

    #[test]
    fn noiseless_converges_in_one_half_iteration() {
        let pc = product("opt16_7", "opt16_7");
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let v = BitVector::from_fn(49, |_| rng.random());
            let c = pc.encode2d(&v).unwrap();
            let values = c.iter().map(|b| if b { -40.0 } else { 40.0 }).collect();
            let g = LlrGrid::from_values(16, 16, values, LlrRole::Channel).unwrap();
            let out = turbo_decode(&pc, &g, &TurboConfig::new(8, 20)).unwrap();
            assert!(out.valid && out.converged_early);
            assert_eq!(out.half_iterations_used, 1);
            assert_eq!(out.codeword, c);
        }
    }

    #[test]
    fn message_passing_identity_and_valid_stops() {
        let pc = product("opt16_7", "opt16_7");
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut dec = TurboDecoder::new(&pc, TurboConfig::new(4, 6)).unwrap();
        for _ in 0..30 {
            let (_, ch) = noisy_grid(&pc, &mut rng, 1.05);
            let mut halves = 0;
            let out = dec
                .decode_traced(&ch, |h| {
                    halves += 1;
                    assert_eq!(h.index, halves);
                    let expected = if h.index % 2 == 1 { Orientation::Rows } else { Orientation::Columns };
                    assert_eq!(h.orientation, expected);
                    if let Some(e) = h.extrinsic {
                        for i in 0..256 {
                            let sum = h.channel.values()[i] + h.apriori.values()[i] + e.values()[i];
                            assert!((sum - h.posterior.values()[i]).abs() < 1e-12);
                        }
                    }
                    if h.index == 1 {
                        assert!(h.apriori.values().iter().all(|&a| a == 0.0));
                    }
                })
                .unwrap();
            assert_eq!(halves, out.half_iterations_used);
            assert_eq!(out.valid, pc.is_codeword(&out.codeword));
            if out.converged_early {
                assert!(out.valid);
            }
            assert!(out.half_iterations_used <= 12);
        }
    }

    #[test]
    fn columns_first_is_supported() {
        let pc = product("opt16_7", "opt16_7");
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut cfg = TurboConfig::new(8, 4);
        cfg.first_pass = Orientation::Columns;
        let (c, ch) = noisy_grid(&pc, &mut rng, 0.6);
        let mut first = None;
        let out = TurboDecoder::new(&pc, cfg)
            .unwrap()
            .decode_traced(&ch, |h| {
                first.get_or_insert(h.orientation);
            })
            .unwrap();
        assert_eq!(first, Some(Orientation::Columns));
        assert_eq!(out.codeword, c);
    }

    #[test]
    fn translation_covariance() {
        let pc = product("opt16_7", "opt16_7");
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let cfg = TurboConfig::new(8, 5).without_clipping();
        let mut dec = TurboDecoder::new(&pc, cfg).unwrap();
        for _ in 0..20 {
            let (_, ch) = noisy_grid(&pc, &mut rng, 1.0);
            let shift = pc.encode2d(&BitVector::from_fn(49, |_| rng.random())).unwrap();
            let values: Vec<f64> = ch
                .values()
                .iter()
                .enumerate()
                .map(|(j, &l)| if shift.get(j) { -l } else { l })
                .collect();
            let moved = LlrGrid::from_values(16, 16, values, LlrRole::Channel).unwrap();
            let a = dec.decode(&ch).unwrap();
            let b = dec.decode(&moved).unwrap();
            let mut shifted = a.codeword.clone();
            shifted.xor_assign(&shift);
            assert_eq!(shifted, b.codeword);
            assert_eq!(a.valid, b.valid);
            assert_eq!(a.half_iterations_used, b.half_iterations_used);
        }
    }
}
