//! BPSK over the binary-input AWGN channel and the Monte Carlo CER harness.
//!
//! Noise samples come from `rand_distr::StandardNormal` (ziggurat) driven by
//! ChaCha8. Every trial owns a generator seeded from
//! `(master seed, SNR index, trial index)`, so a run is bit-identical for any
//! number of worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::product::ProductCode;
use crate::turbo::{LlrGrid, LlrRole, TurboConfig, TurboDecoder};

/// Two-sided 95% standard normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// Trials decoded per parallel batch; fixed so results do not depend on threads.
const BATCH: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelParams {
    pub ebn0_db: f64,
    pub rate: f64,
    pub sigma: f64,
}

impl ChannelParams {
    /// `sigma^2 = 1 / (2 R 10^(Eb/N0 / 10))`.
    pub fn new(ebn0_db: f64, rate: f64) -> Result<Self> {
        if !ebn0_db.is_finite() {
            return Err(Error::InvalidConfig(format!("Eb/N0 must be finite, got {ebn0_db}")));
        }
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(Error::InvalidConfig(format!("rate must be in (0, 1], got {rate}")));
        }
        let sigma = (1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0))).sqrt();
        Ok(ChannelParams { ebn0_db, rate, sigma })
    }

    pub fn variance(&self) -> f64 {
        self.sigma * self.sigma
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("noise standard deviation must be positive, got {sigma}")))
    }
}

/// Bit 0 to +1, bit 1 to -1.
pub fn modulate(c: &BitVector) -> Vec<f64> {
    c.iter().map(|b| if b { -1.0 } else { 1.0 }).collect()
}

fn add_noise(rng: &mut impl Rng, x: &mut [f64], sigma: f64) {
    for v in x {
        let z: f64 = rng.sample(StandardNormal);
        *v += sigma * z;
    }
}

/// `x + z` with `z` i.i.d. `N(0, sigma^2)`, deterministic in `seed`.
pub fn awgn(x: &[f64], sigma: f64, seed: u64) -> Result<Vec<f64>> {
    check_sigma(sigma)?;
    let mut y = x.to_vec();
    add_noise(&mut ChaCha8Rng::seed_from_u64(seed), &mut y, sigma);
    Ok(y)
}

/// `L^ch = 2 y / sigma^2` as a `rows x cols` channel grid.
pub fn channel_llr(y: &[f64], rows: usize, cols: usize, sigma: f64) -> Result<LlrGrid> {
    check_sigma(sigma)?;
    let scale = 2.0 / (sigma * sigma);
    LlrGrid::from_values(rows, cols, y.iter().map(|v| scale * v).collect(), LlrRole::Channel)
}

/// Stop a point after `min_errors` block errors or `max_trials` trials, whichever comes first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StopRule {
    pub min_errors: u64,
    pub max_trials: u64,
}

impl StopRule {
    pub fn validate(&self) -> Result<()> {
        if self.min_errors == 0 || self.max_trials == 0 {
            return Err(Error::InvalidConfig(
                "stopping rule needs min_errors >= 1 and max_trials >= 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SimOptions {
    /// Noise standard deviation used instead of the one implied by Eb/N0.
    pub sigma_override: Option<f64>,
    /// Transmit the all-zero codeword instead of random messages.
    pub all_zero: bool,
    /// Worker threads; `0` uses the rayon default.
    pub threads: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimRecord {
    pub ebn0_db: f64,
    pub trials: u64,
    pub errors: u64,
    pub cer: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub avg_half_iterations: f64,
    /// Master seed of the run.
    pub seed: u64,
}

impl SimRecord {
    fn new(ebn0_db: f64, trials: u64, errors: u64, half_iterations: u64, seed: u64) -> Self {
        let (ci_low, ci_high) = wilson_interval(errors, trials);
        SimRecord {
            ebn0_db,
            trials,
            errors,
            cer: errors as f64 / trials as f64,
            ci_low,
            ci_high,
            avg_half_iterations: half_iterations as f64 / trials as f64,
            seed,
        }
    }

    /// Whether `[lo, hi]` intersects the confidence interval.
    pub fn interval_meets(&self, lo: f64, hi: f64) -> bool {
        self.ci_low <= hi && lo <= self.ci_high
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            sci(self.ebn0_db),
            self.trials,
            self.errors,
            sci(self.cer),
            sci(self.ci_low),
            sci(self.ci_high),
            sci(self.avg_half_iterations),
            self.seed
        )
    }
}

pub const CSV_HEADER: &str = "ebn0_db,trials,errors,cer,ci_low,ci_high,avg_half_iters,seed";

/// Scientific notation with 6 significant digits.
pub fn sci(x: f64) -> String {
    format!("{x:.5e}")
}

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(errors: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if errors == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if errors == trials { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

/// Generator for one trial.
pub fn trial_rng(master_seed: u64, snr_index: usize, trial: u64) -> ChaCha8Rng {
    let mut seed = [0u8; 32];
    seed[..8].copy_from_slice(&master_seed.to_le_bytes());
    seed[8..16].copy_from_slice(&(snr_index as u64).to_le_bytes());
    seed[16..24].copy_from_slice(&trial.to_le_bytes());
    ChaCha8Rng::from_seed(seed)
}

#[derive(Clone, Copy, Debug)]
struct TrialResult {
    error: bool,
    half_iterations: usize,
}

struct Worker<'p> {
    pc: &'p ProductCode,
    decoder: TurboDecoder<'p>,
    msg: Vec<u8>,
    code: Vec<u8>,
    y: Vec<f64>,
}

impl<'p> Worker<'p> {
    fn new(pc: &'p ProductCode, cfg: &TurboConfig) -> Result<Self> {
        Ok(Worker {
            pc,
            decoder: TurboDecoder::new(pc, cfg.clone())?,
            msg: vec![0; pc.dimension()],
            code: vec![0; pc.length()],
            y: vec![0.0; pc.length()],
        })
    }

    fn run(&mut self, mut rng: ChaCha8Rng, sigma: f64, all_zero: bool) -> Result<TrialResult> {
        if all_zero {
            self.msg.fill(0);
        } else {
            for b in &mut self.msg {
                *b = rng.random::<bool>() as u8;
            }
        }
        self.pc.encode_into(&self.msg, &mut self.code);
        for (y, &c) in self.y.iter_mut().zip(&self.code) {
            *y = if c == 1 { -1.0 } else { 1.0 };
        }
        add_noise(&mut rng, &mut self.y, sigma);
        let ch = channel_llr(&self.y, self.pc.rows(), self.pc.cols(), sigma)?;
        let out = self.decoder.decode(&ch)?;
        let error = (0..self.code.len()).any(|j| out.codeword.get(j) != (self.code[j] == 1));
        Ok(TrialResult {
            error,
            half_iterations: out.half_iterations_used,
        })
    }
}

#[cfg(feature = "parallel")]
fn run_batch(
    pc: &ProductCode,
    cfg: &TurboConfig,
    pool: &rayon::ThreadPool,
    seeds: (u64, usize),
    range: std::ops::Range<u64>,
    sigma: f64,
    all_zero: bool,
) -> Result<Vec<TrialResult>> {
    use rayon::prelude::*;
    pool.install(|| {
        range
            .into_par_iter()
            .map_init(
                || Worker::new(pc, cfg),
                |worker, t| match worker {
                    Ok(w) => w.run(trial_rng(seeds.0, seeds.1, t), sigma, all_zero),
                    Err(e) => Err(Error::InvalidConfig(e.to_string())),
                },
            )
            .collect()
    })
}

/// Estimates the codeword error rate at each Eb/N0 point.
pub fn simulate_cer(
    pc: &ProductCode,
    cfg: &TurboConfig,
    ebn0_list: &[f64],
    stop: StopRule,
    master_seed: u64,
    opts: &SimOptions,
) -> Result<Vec<SimRecord>> {
    simulate_cer_with_progress(pc, cfg, ebn0_list, stop, master_seed, opts, |_| {})
}

/// Same as [`simulate_cer`], calling `progress` as each point finishes.
pub fn simulate_cer_with_progress(
    pc: &ProductCode,
    cfg: &TurboConfig,
    ebn0_list: &[f64],
    stop: StopRule,
    master_seed: u64,
    opts: &SimOptions,
    mut progress: impl FnMut(&SimRecord),
) -> Result<Vec<SimRecord>> {
    stop.validate()?;
    cfg.validate()?;
    if let Some(s) = opts.sigma_override {
        check_sigma(s)?;
    }
    #[cfg(feature = "parallel")]
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads)
        .build()
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    #[cfg(not(feature = "parallel"))]
    let mut worker = Worker::new(pc, cfg)?;

    let mut records = Vec::with_capacity(ebn0_list.len());
    for (snr_index, &ebn0_db) in ebn0_list.iter().enumerate() {
        let sigma = match opts.sigma_override {
            Some(s) => s,
            None => ChannelParams::new(ebn0_db, pc.rate())?.sigma,
        };
        let (mut trials, mut errors, mut half_iterations) = (0u64, 0u64, 0u64);
        'point: while trials < stop.max_trials {
            let end = (trials + BATCH as u64).min(stop.max_trials);
            #[cfg(feature = "parallel")]
            let batch = run_batch(pc, cfg, &pool, (master_seed, snr_index), trials..end, sigma, opts.all_zero)?;
            #[cfg(not(feature = "parallel"))]
            let batch = (trials..end)
                .map(|t| worker.run(trial_rng(master_seed, snr_index, t), sigma, opts.all_zero))
                .collect::<Result<Vec<_>>>()?;
            for r in batch {
                trials += 1;
                errors += r.error as u64;
                half_iterations += r.half_iterations as u64;
                if errors >= stop.min_errors {
                    break 'point;
                }
            }
        }
        let record = SimRecord::new(ebn0_db, trials, errors, half_iterations, master_seed);
        progress(&record);
        records.push(record);
    }
    Ok(records)
}
