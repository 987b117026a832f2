//! Browser bindings. Every exported function returns a JSON string; the
//! `*_json` helpers behind them are plain Rust so they can be tested natively.

use polarprod::channel::{awgn, channel_llr, modulate, trial_rng, ChannelParams};
use polarprod::gf2::BitVector;
use polarprod::oracle::brute_wef;
use polarprod::polar::builtin_codes;
use polarprod::product::{compose, tub_value, ProductCode};
use polarprod::turbo::{hard_decision, TurboConfig, TurboDecoder};
use polarprod::Result;
use rand::Rng;
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct Failure {
    error: String,
}

fn to_json<T: Serialize>(r: Result<T>) -> String {
    match r {
        Ok(v) => serde_json::to_string(&v),
        Err(e) => serde_json::to_string(&Failure { error: e.to_string() }),
    }
    .expect("plain data serializes")
}

fn product(code1: &str, code2: &str) -> Result<ProductCode> {
    let cat = builtin_codes();
    compose(cat.resolve(code1)?, cat.resolve(code2)?)
}

#[derive(Serialize)]
pub struct TubCurve {
    pub label: String,
    pub length: usize,
    pub dimension: usize,
    pub d: usize,
    pub multiplicity: u64,
    pub points: Vec<(f64, f64)>,
}

pub fn tub_curve_json(code1: &str, code2: &str, start: f64, stop: f64, step: f64) -> Result<TubCurve> {
    let pc = product(code1, code2)?;
    let t = pc
        .distance()
        .ok_or_else(|| polarprod::Error::UnknownDistance(pc.label()))?;
    if !(step > 0.0) || stop < start || (stop - start) / step > 1000.0 {
        return Err(polarprod::Error::InvalidConfig("SNR range".into()));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    let points = (0..count)
        .map(|i| {
            let s = start + i as f64 * step;
            (s, tub_value(t, pc.rate(), s))
        })
        .collect();
    Ok(TubCurve {
        label: pc.label(),
        length: pc.length(),
        dimension: pc.dimension(),
        d: t.d,
        multiplicity: t.multiplicity,
        points,
    })
}

#[derive(Serialize)]
pub struct Enumerator {
    pub code: String,
    pub length: usize,
    pub dimension: usize,
    pub polynomial: String,
    pub counts: Vec<(usize, u64)>,
    pub d: usize,
    pub multiplicity: u64,
}

pub fn weight_enumerator_json(name: &str) -> Result<Enumerator> {
    let code = builtin_codes().resolve(name)?;
    let wef = brute_wef(&code)?;
    let min = wef.min_distance().unwrap_or(polarprod::polar::DistanceTerms { d: 0, multiplicity: 0 });
    Ok(Enumerator {
        code: name.to_string(),
        length: code.length(),
        dimension: code.dimension(),
        polynomial: wef.to_string(),
        counts: wef.counts.iter().map(|(&w, &a)| (w, a)).collect(),
        d: min.d,
        multiplicity: min.multiplicity,
    })
}

#[derive(Serialize)]
pub struct HalfStep {
    pub index: usize,
    pub orientation: String,
    /// Grid positions whose hard decision differs from the transmitted bit.
    pub wrong: Vec<usize>,
    pub mean_abs_posterior: f64,
    pub valid: bool,
}

#[derive(Serialize)]
pub struct Trace {
    pub rows: usize,
    pub cols: usize,
    pub ebn0_db: f64,
    pub channel_wrong: Vec<usize>,
    pub steps: Vec<HalfStep>,
    pub decoded_correctly: bool,
    pub valid: bool,
    pub half_iterations: usize,
}

fn wrong_positions(hard: &BitVector, sent: &BitVector) -> Vec<usize> {
    (0..sent.len()).filter(|&j| hard.get(j) != sent.get(j)).collect()
}

pub fn turbo_trace_json(ebn0_db: f64, seed: u64, list_size: usize, max_iters: usize) -> Result<Trace> {
    let pc = product("opt16_7", "opt16_7")?;
    let sigma = ChannelParams::new(ebn0_db, pc.rate())?.sigma;
    let mut rng = trial_rng(seed, 0, 0);
    let msg = BitVector::from_fn(pc.dimension(), |_| rng.random());
    let sent = pc.encode2d(&msg)?;
    let y = awgn(&modulate(&sent), sigma, rng.random())?;
    let ch = channel_llr(&y, pc.rows(), pc.cols(), sigma)?;
    let mut decoder = TurboDecoder::new(&pc, TurboConfig::new(list_size, max_iters))?;
    let mut steps = Vec::new();
    let out = decoder.decode_traced(&ch, |h| {
        let n = h.posterior.values().len() as f64;
        steps.push(HalfStep {
            index: h.index,
            orientation: h.orientation.to_string(),
            wrong: wrong_positions(&hard_decision(h.posterior), &sent),
            mean_abs_posterior: h.posterior.values().iter().map(|v| v.abs()).sum::<f64>() / n,
            valid: h.valid,
        });
    })?;
    Ok(Trace {
        rows: pc.rows(),
        cols: pc.cols(),
        ebn0_db,
        channel_wrong: wrong_positions(&hard_decision(&ch), &sent),
        steps,
        decoded_correctly: out.codeword == sent,
        valid: out.valid,
        half_iterations: out.half_iterations_used,
    })
}

/// Truncated union bound of the product of two catalog codes over an Eb/N0 range.
#[wasm_bindgen]
pub fn tub_curve(code1: &str, code2: &str, start: f64, stop: f64, step: f64) -> String {
    to_json(tub_curve_json(code1, code2, start, stop, step))
}

/// Weight enumerator of a catalog code.
#[wasm_bindgen]
pub fn weight_enumerator(name: &str) -> String {
    to_json(weight_enumerator_json(name))
}

/// One (256,49) codeword sent over AWGN and decoded, with the per-half-iteration error pattern.
#[wasm_bindgen]
pub fn turbo_trace(ebn0_db: f64, seed: u32, list_size: u32, max_iters: u32) -> String {
    to_json(turbo_trace_json(ebn0_db, seed as u64, list_size as usize, max_iters as usize))
}
