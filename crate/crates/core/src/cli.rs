//! Command-line front end: `simulate`, `tub`, `wef` and `validate`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::channel::{sci, simulate_cer_with_progress, SimOptions, StopRule, CSV_HEADER};
use crate::error::{Error, Result};
use crate::oracle::{brute_wef, wef_of_generator, ENUMERATION_LIMIT};
use crate::polar::{builtin_codes, check_sc_aimed, parse_spec, BitRole, Catalog, DistanceTerms, PrecodedPolarCode, SpecBody};
use crate::product::{compose, tub_value, ProductCode};
use crate::scl::SoftMaxMode;
use crate::turbo::{default_alpha, Orientation, TurboConfig};

pub const EXIT_OTHER: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SPEC: i32 = 3;
pub const EXIT_GUARD: i32 = 4;

/// Process exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidConfig(_) | Error::DimensionMismatch { .. } | Error::NonFinite(_) => EXIT_CONFIG,
        Error::NotPowerOfTwo(_)
        | Error::NotScAimed(_)
        | Error::RankDeficient { .. }
        | Error::InvalidSpec(_)
        | Error::Parse { .. }
        | Error::UnknownDistance(_)
        | Error::ExternalSpecRequired { .. }
        | Error::UnknownCode(_) => EXIT_SPEC,
        Error::GuardViolation { .. } => EXIT_GUARD,
        Error::Io(_) => EXIT_OTHER,
    }
}

#[derive(Debug, Parser)]
#[command(name = "polarprod", version, about = "Precoded polar product codes: simulation, bounds and code checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo codeword error rate of iterative decoding over BPSK/AWGN.
    Simulate(SimulateArgs),
    /// Truncated union bound over an Eb/N0 grid.
    Tub(TubArgs),
    /// Weight enumerator and minimum distance of a component or product code.
    Wef(WefArgs),
    /// Checks a spec file's precoding matrix and prints its structure.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CatalogArgs {
    /// Directory holding `<name>.spec` files for the external catalog slots.
    #[arg(long, env = "POLARPROD_SPEC_DIR")]
    pub spec_dir: Option<PathBuf>,
    /// Allow a spec file whose `name` equals a catalog name.
    #[arg(long)]
    pub allow_shadow: bool,
}

#[derive(Debug, Clone, Args)]
pub struct CodePair {
    /// Column code: catalog name or spec file.
    #[arg(long, default_value = "opt16_7")]
    pub code1: String,
    /// Row code: catalog name or spec file.
    #[arg(long, default_value = "opt16_7")]
    pub code2: String,
    #[command(flatten)]
    pub catalog: CatalogArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub codes: CodePair,
    #[arg(long, default_value_t = 8)]
    pub list_size: usize,
    #[arg(long, default_value_t = 20)]
    pub max_iters: usize,
    /// `default` or comma-separated values (fractions like `1/8` allowed), one per half iteration.
    #[arg(long, default_value = "default")]
    pub alpha: String,
    /// Eb/N0 grid in dB: `start:step:stop`, a comma list, or one value.
    #[arg(long)]
    pub snr: String,
    #[arg(long, default_value_t = 100)]
    pub min_errors: u64,
    #[arg(long, default_value_t = 100_000)]
    pub max_trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output CSV path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (0 = all cores). Does not affect results.
    #[arg(long, env = "POLARPROD_THREADS", default_value_t = 0)]
    pub threads: usize,
    #[arg(long, default_value = "rows")]
    pub first_pass: Orientation,
    #[arg(long, default_value = "literal")]
    pub softmax_mode: SoftMaxMode,
    /// Transmit the all-zero codeword instead of random messages.
    #[arg(long)]
    pub all_zero: bool,
    /// Write the metadata block and header only.
    #[arg(long)]
    pub dry_run: bool,
    /// Suppress per-point progress on standard error.
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Debug, Clone, Args)]
pub struct TubArgs {
    #[command(flatten)]
    pub codes: CodePair,
    #[arg(long)]
    pub snr: String,
    /// Minimum distance of the product code, overriding the computed value.
    #[arg(long, requires = "multiplicity")]
    pub distance: Option<usize>,
    /// Number of minimum-weight codewords, overriding the computed value.
    #[arg(long, requires = "distance")]
    pub multiplicity: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct WefArgs {
    /// Catalog name or spec file.
    pub code: String,
    /// Report the product with this second (row) code.
    #[arg(long)]
    pub product: Option<String>,
    #[command(flatten)]
    pub catalog: CatalogArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    pub path: PathBuf,
}

/// Parses an Eb/N0 grid.
pub fn parse_snr_grid(s: &str) -> Result<Vec<f64>> {
    let bad = |why: &str| Error::InvalidConfig(format!("SNR grid {s:?}: {why}"));
    let num = |t: &str| t.trim().parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| bad("not a number"));
    let points = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected start:step:stop"));
        }
        let (start, step, stop) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if step <= 0.0 || stop < start {
            return Err(bad("step must be positive and stop >= start"));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
            .collect()
    } else {
        s.split(',').map(num).collect::<Result<Vec<_>>>()?
    };
    if points.is_empty() {
        return Err(bad("empty"));
    }
    Ok(points)
}

/// Parses `default` or a comma list of reals / fractions.
pub fn parse_alpha(s: &str, max_iterations: usize) -> Result<Vec<f64>> {
    if s.trim() == "default" {
        return Ok(default_alpha(max_iterations));
    }
    s.split(',')
        .map(|t| {
            let t = t.trim();
            let v = match t.split_once('/') {
                Some((a, b)) => a.trim().parse::<f64>().ok().zip(b.trim().parse::<f64>().ok()).map(|(a, b)| a / b),
                None => t.parse::<f64>().ok(),
            };
            v.ok_or_else(|| Error::InvalidConfig(format!("alpha entry {t:?} is not a number")))
        })
        .collect()
}

fn load_catalog(args: &CatalogArgs) -> Result<Catalog> {
    let mut cat = builtin_codes();
    if let Some(dir) = &args.spec_dir {
        if !dir.is_dir() {
            return Err(Error::InvalidConfig(format!("spec directory {} does not exist", dir.display())));
        }
        cat.load_spec_dir(dir)?;
    }
    Ok(cat)
}

/// Resolves a code argument: an existing spec file, otherwise a catalog name.
pub fn resolve_code(arg: &str, catalog: &Catalog, allow_shadow: bool) -> Result<PrecodedPolarCode> {
    let path = Path::new(arg);
    if path.is_file() {
        let file = parse_spec(&std::fs::read_to_string(path)?)?;
        if let Some(name) = &file.name {
            if catalog.contains(name) && !allow_shadow {
                return Err(Error::InvalidConfig(format!(
                    "spec file {} is named {name:?}, which is a catalog name; pass --allow-shadow to use it",
                    path.display()
                )));
            }
        }
        let mut code = file.to_code()?;
        if file.name.is_none() {
            let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned());
            code = code.with_name(stem.unwrap_or_else(|| arg.to_string()));
        }
        return Ok(code);
    }
    catalog.resolve(arg)
}

fn resolve_pair(codes: &CodePair) -> Result<ProductCode> {
    let cat = load_catalog(&codes.catalog)?;
    let c1 = resolve_code(&codes.code1, &cat, codes.catalog.allow_shadow)?;
    let c2 = resolve_code(&codes.code2, &cat, codes.catalog.allow_shadow)?;
    compose(c1, c2)
}

fn terms(d: Option<DistanceTerms>) -> String {
    d.map_or("unknown".into(), |t| format!("d={}, A_d={}", t.d, t.multiplicity))
}

fn code_metadata(out: &mut String, pc: &ProductCode) {
    let _ = writeln!(out, "# code1 (columns): {} {}", pc.column_code().label(), pc.column_code().spec());
    let _ = writeln!(out, "# code2 (rows): {} {}", pc.row_code().label(), pc.row_code().spec());
    let _ = writeln!(
        out,
        "# product: ({},{}) rate {} grid {}x{} {}",
        pc.length(),
        pc.dimension(),
        pc.rate(),
        pc.rows(),
        pc.cols(),
        terms(pc.distance())
    );
    let _ = writeln!(out, "# conventions: c = u K^(x)n natural order; bit 0 -> +1; LLR >= 0 -> bit 0; indices 1-based");
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => Ok(std::fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Builds the simulation CSV text (metadata, header, one row per SNR point).
pub fn cmd_simulate(args: &SimulateArgs) -> Result<String> {
    let pc = resolve_pair(&args.codes)?;
    let snrs = parse_snr_grid(&args.snr)?;
    let mut cfg = TurboConfig::new(args.list_size, args.max_iters);
    cfg.alpha = parse_alpha(&args.alpha, args.max_iters)?;
    cfg.first_pass = args.first_pass;
    cfg.soft.mode = args.softmax_mode;
    cfg.validate()?;
    let stop = StopRule {
        min_errors: args.min_errors,
        max_trials: args.max_trials,
    };
    stop.validate()?;

    let mut out = String::new();
    out.push_str("# polarprod simulate\n");
    code_metadata(&mut out, &pc);
    let alpha: Vec<String> = cfg.alpha.iter().map(|a| a.to_string()).collect();
    let clip = |c: Option<f64>| c.map_or("none".to_string(), |v| v.to_string());
    let _ = writeln!(out, "# list_size: {}", cfg.list_size);
    let _ = writeln!(out, "# max_iterations: {}", cfg.max_iterations);
    let _ = writeln!(out, "# alpha: {}", alpha.join(","));
    let _ = writeln!(out, "# alpha_use: entry i scales the a-priori input of half iteration i");
    let _ = writeln!(out, "# first_pass: {}", cfg.first_pass);
    let _ = writeln!(out, "# softmax_mode: {} cap {}", cfg.soft.mode, clip(cfg.soft.cap));
    let _ = writeln!(out, "# llr_clip: input {} extrinsic {}", clip(cfg.input_clip), clip(cfg.extrinsic_clip));
    let _ = writeln!(out, "# validity_check: every half iteration");
    let _ = writeln!(out, "# snr: {}", args.snr);
    let _ = writeln!(out, "# stop: min_errors {} max_trials {}", stop.min_errors, stop.max_trials);
    let _ = writeln!(out, "# messages: {}", if args.all_zero { "all-zero" } else { "random" });
    let _ = writeln!(out, "# rng: ChaCha8 per trial from (seed, snr index, trial index); gaussian ziggurat");
    let _ = writeln!(out, "# seed: {}", args.seed);
    out.push_str(CSV_HEADER);
    out.push('\n');
    if args.dry_run {
        return Ok(out);
    }

    let opts = SimOptions {
        sigma_override: None,
        all_zero: args.all_zero,
        threads: args.threads,
    };
    let quiet = args.quiet;
    let records = simulate_cer_with_progress(&pc, &cfg, &snrs, stop, args.seed, &opts, |r| {
        if !quiet {
            eprintln!(
                "{} dB: {} errors / {} trials, CER {}",
                r.ebn0_db,
                r.errors,
                r.trials,
                sci(r.cer)
            );
        }
    })?;
    for r in records {
        out.push_str(&r.to_csv_row());
        out.push('\n');
    }
    Ok(out)
}

/// Builds the TUB CSV text.
pub fn cmd_tub(args: &TubArgs) -> Result<String> {
    let mut pc = resolve_pair(&args.codes)?;
    if let (Some(d), Some(m)) = (args.distance, args.multiplicity) {
        pc = pc.with_distance(DistanceTerms { d, multiplicity: m });
    }
    let snrs = parse_snr_grid(&args.snr)?;
    let t = pc.distance().ok_or_else(|| Error::UnknownDistance(pc.label()))?;
    let mut out = String::new();
    out.push_str("# polarprod tub\n");
    code_metadata(&mut out, &pc);
    out.push_str("# tub: 0.5 * A_d * erfc(sqrt(d * R * Eb/N0))\n");
    out.push_str("ebn0_db,tub\n");
    for s in snrs {
        let _ = writeln!(out, "{},{}", sci(s), sci(tub_value(t, pc.rate(), s)));
    }
    Ok(out)
}

/// Enumerator and minimum-distance report.
pub fn cmd_wef(args: &WefArgs) -> Result<String> {
    let cat = load_catalog(&args.catalog)?;
    let code = resolve_code(&args.code, &cat, args.catalog.allow_shadow)?;
    let mut out = String::new();
    match &args.product {
        None => {
            let wef = brute_wef(&code)?;
            let _ = writeln!(out, "code: {} ({},{})", code.label(), code.length(), code.dimension());
            let _ = writeln!(out, "enumerator: {wef}");
            let _ = writeln!(out, "{}", terms(wef.min_distance()));
        }
        Some(second) => {
            let row = resolve_code(second, &cat, args.catalog.allow_shadow)?;
            let pc = compose(code, row)?;
            let _ = writeln!(out, "product: {} ({},{})", pc.label(), pc.length(), pc.dimension());
            if pc.dimension() <= ENUMERATION_LIMIT {
                let wef = wef_of_generator(pc.composed().generator())?;
                let _ = writeln!(out, "enumerator: {wef}");
                let _ = writeln!(out, "{}", terms(wef.min_distance()));
            } else {
                let _ = writeln!(
                    out,
                    "enumerator: not enumerated (k = {} above the limit of {ENUMERATION_LIMIT}); distance from the components",
                    pc.dimension()
                );
                let t = pc.distance().ok_or_else(|| Error::UnknownDistance(pc.label()))?;
                let _ = writeln!(out, "{}", terms(Some(t)));
            }
        }
    }
    Ok(out)
}

fn pass(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

fn index_set(ix: impl IntoIterator<Item = usize>) -> String {
    let v: Vec<String> = ix.into_iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", v.join(", "))
}

/// Validation report text and whether the file describes a usable code.
pub fn cmd_validate(args: &ValidateArgs) -> Result<(String, bool)> {
    let file = parse_spec(&std::fs::read_to_string(&args.path)?)?;
    let matrix = file.matrix()?;
    let report = check_sc_aimed(&matrix);
    let mut out = String::new();
    let _ = writeln!(out, "file: {}", args.path.display());
    if let Some(name) = &file.name {
        let _ = writeln!(out, "name: {name}");
    }
    let source = match file.body {
        SpecBody::Matrix(_) => "matrix",
        SpecBody::Sets { .. } => "index sets",
    };
    let _ = writeln!(out, "precoding matrix ({source}): {} x {}, rank {}", report.rows, report.cols, report.rank);
    let _ = writeln!(out, "property 1 (leading 1 alone in its column): {}", pass(report.unique_leading_columns));
    let _ = writeln!(out, "property 2 (leading columns increasing): {}", pass(report.increasing_leading_columns));
    let _ = writeln!(out, "full rank: {}", pass(report.full_rank));
    let _ = writeln!(out, "power-of-two length: {}", pass(report.power_of_two_length));
    for v in &report.violations {
        let _ = writeln!(out, "  {v}");
    }
    if !report.passes() {
        out.push_str("result: FAIL\n");
        return Ok((out, false));
    }
    let code = match file.to_code() {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(out, "result: FAIL ({e})");
            return Ok((out, false));
        }
    };
    let spec = code.spec();
    out.push_str("result: pass (SC-aimed)\n");
    let _ = writeln!(out, "code: ({},{})", spec.length(), spec.dimension());
    let _ = writeln!(out, "information: {}", index_set(spec.info_set().iter().copied()));
    let dynamic: Vec<usize> = spec.constraints().keys().copied().collect();
    let fixed = code
        .roles()
        .iter()
        .enumerate()
        .filter(|(_, r)| matches!(r, BitRole::Frozen))
        .map(|(i, _)| i);
    let _ = writeln!(out, "frozen to zero: {}", index_set(fixed));
    let _ = writeln!(out, "dynamic frozen: {}", index_set(dynamic));
    for (t, srcs) in spec.constraints() {
        let s: Vec<String> = srcs.iter().map(|s| format!("u{}", s + 1)).collect();
        let _ = writeln!(out, "  f{} = {}", t + 1, s.join(" + "));
    }
    if let Some(t) = file.distance {
        let _ = writeln!(out, "declared: d={}, A_d={}", t.d, t.multiplicity);
    }
    Ok((out, true))
}

/// Runs a parsed command line and returns the process exit status.
pub fn run(cli: Cli) -> i32 {
    let result = match &cli.command {
        Command::Simulate(a) => cmd_simulate(a).and_then(|t| write_output(a.out.as_deref(), &t)),
        Command::Tub(a) => cmd_tub(a).and_then(|t| write_output(a.out.as_deref(), &t)),
        Command::Wef(a) => cmd_wef(a).map(|t| print!("{t}")),
        Command::Validate(a) => match cmd_validate(a) {
            Ok((t, ok)) => {
                print!("{t}");
                if !ok {
                    return EXIT_SPEC;
                }
                Ok(())
            }
            Err(e) => Err(e),
        },
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
