//! Command-line front end.
//!
//! Settings resolve as flags > `--config` file > `GRASS_SEED` (seed only) >
//! built-in defaults. The config file is flat `key=value` text; a leading `#`
//! is ignored, so the header of any results file written by this tool is
//! itself a valid config that reproduces the run.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 degenerate input,
//! 1 anything else (I/O failures while writing).

use crate::codec::{self, BitWord, CodecConfig, ReceivedBlock};
use crate::error::Error;
use crate::gaussmap::theta1;
use crate::grassmap::theta3;
use crate::linalg::CMatrix;
use crate::simkit::{self, fmt_f64, Codebook, PilotConfig, StopRule};
use crate::{ballmap::theta2, codec::word_to_hypercube};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use std::collections::HashMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;
pub const EXIT_OTHER: i32 = 1;

pub const SEED_ENV: &str = "GRASS_SEED";
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_ALPHA_CACHE: &str = "grasslattice-alpha.cache";

#[derive(Debug, Parser)]
#[command(
    name = "grasslattice",
    version,
    about = "Grass-Lattice noncoherent constellation tools"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Encode one bit word and print the codeword as 2T interleaved reals.
    Encode(EncodeArgs),
    /// Decode a received T x N block from a CSV file.
    Decode(DecodeArgs),
    /// Monte Carlo SER/BER over a list of SNR points.
    Simulate(SimulateArgs),
    /// SER/BER as a function of alpha at one SNR.
    SweepAlpha(SweepArgs),
    /// Minimum chordal distance of the constellation over an alpha grid.
    MinChordal(MinChordalArgs),
    /// Export the T=2 mapping stages and Hopf-projected codewords.
    Hopf(HopfArgs),
    /// Export the whole constellation as a codebook file.
    Codebook(CodebookArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Flat key=value settings file (results headers work too).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CodecFlags {
    #[arg(long = "T")]
    t: Option<usize>,
    #[arg(long = "B")]
    b: Option<u32>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Where the default alpha per (T, B, N) is cached.
    #[arg(long)]
    alpha_cache: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct StopFlags {
    #[arg(long)]
    min_errors: Option<u64>,
    #[arg(long)]
    max_blocks: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Recorded in the output header; defaults to the current Unix time.
    #[arg(long)]
    timestamp: Option<u64>,
}

#[derive(Debug, Args)]
struct EncodeArgs {
    #[command(flatten)]
    codec: CodecFlags,
    #[arg(long)]
    bits: String,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DecodeArgs {
    #[command(flatten)]
    codec: CodecFlags,
    /// CSV with T rows of 2N interleaved reals.
    #[arg(long)]
    block: PathBuf,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scheme {
    Grasslattice,
    Pilot,
    Mlfile,
}

impl Scheme {
    fn name(self) -> &'static str {
        match self {
            Scheme::Grasslattice => "grasslattice",
            Scheme::Pilot => "pilot",
            Scheme::Mlfile => "mlfile",
        }
    }
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    scheme: Option<Scheme>,
    #[command(flatten)]
    codec: CodecFlags,
    #[arg(long = "N")]
    n: Option<usize>,
    /// Comma-separated values or start:step:stop ranges, in dB.
    #[arg(long)]
    snr_list: Option<String>,
    #[command(flatten)]
    stop: StopFlags,
    /// Codebook file for the mlfile scheme.
    #[arg(long)]
    codebook: Option<PathBuf>,
    /// QAM order of the pilot scheme; defaults to the rate-matched 4^B.
    #[arg(long)]
    qam_order: Option<usize>,
    /// Fraction of the block energy on the pilot symbol.
    #[arg(long)]
    power_split: Option<f64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    codec: CodecFlags,
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long)]
    snr: Option<f64>,
    #[arg(long)]
    alpha_grid: Option<String>,
    #[command(flatten)]
    stop: StopFlags,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct MinChordalArgs {
    #[arg(long = "T")]
    t: Option<usize>,
    #[arg(long = "B")]
    b: Option<u32>,
    #[arg(long)]
    alpha_grid: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct HopfArgs {
    #[command(flatten)]
    codec: CodecFlags,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct CodebookArgs {
    #[command(flatten)]
    codec: CodecFlags,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Degenerate(String),
    Other(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Degenerate(_) => EXIT_DEGENERATE,
            CliError::Other(_) => EXIT_OTHER,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Degenerate(m) | CliError::Other(m) => m,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::ZeroBlock | Error::ZeroVector => CliError::Degenerate(e.to_string()),
            Error::Io(_) => CliError::Other(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Settings from a `--config` file.
#[derive(Debug, Default)]
struct ConfigFile(HashMap<String, String>);

impl ConfigFile {
    fn load(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("--config: cannot read {}: {e}", path.display())))?;
        Ok(Self::parse(&text))
    }

    fn parse(text: &str) -> Self {
        let mut map = HashMap::new();
        for line in text.lines() {
            let line = line.trim().trim_start_matches('#').trim();
            if let Some((k, v)) = line.split_once('=') {
                let (k, v) = (k.trim(), v.trim());
                if !k.is_empty() && !k.contains(char::is_whitespace) {
                    map.entry(k.to_string()).or_insert_with(|| v.to_string());
                }
            }
        }
        Self(map)
    }

    /// Flag value if given, else the config value for `key`.
    fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> CliResult<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| usage(format!("--config: invalid value {v:?} for key {key}"))),
        }
    }

    fn require<T: FromStr>(&self, flag: Option<T>, key: &str, flag_name: &str) -> CliResult<T> {
        self.pick(flag, key)?
            .ok_or_else(|| usage(format!("{flag_name} is required")))
    }
}

/// Parses `0,5,10` or `0:5:30` (inclusive) or mixtures of both.
pub fn parse_value_list(text: &str) -> std::result::Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let fields: Vec<&str> = part.split(':').collect();
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| format!("invalid number {s:?}"))
        };
        match fields.as_slice() {
            [v] => out.push(num(v)?),
            [start, step, stop] => {
                let (start, step, stop) = (num(start)?, num(step)?, num(stop)?);
                if !(step > 0.0) || stop < start {
                    return Err(format!("invalid range {part:?}"));
                }
                let count = ((stop - start) / step + 1e-9).floor() as usize;
                // snap to a 1e-12 grid so 0.1:0.1:0.3 lists 0.3, not 0.30000000000000004
                out.extend((0..=count).map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12));
            }
            _ => return Err(format!("invalid list entry {part:?}")),
        }
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(out)
}

fn join_values(v: &[f64]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn resolve_seed(cfg: &ConfigFile, flag: Option<u64>) -> CliResult<u64> {
    if let Some(seed) = cfg.pick(flag, "seed")? {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| usage(format!("{SEED_ENV}: invalid seed {v:?}"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn resolve_timestamp(cfg: &ConfigFile, flag: Option<u64>) -> CliResult<u64> {
    Ok(cfg.pick(flag, "timestamp")?.unwrap_or_else(|| {
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0)
    }))
}

fn resolve_stop(cfg: &ConfigFile, flags: &StopFlags) -> CliResult<StopRule> {
    let defaults = StopRule::default();
    let min = cfg
        .pick(flags.min_errors, "min_errors")?
        .unwrap_or(defaults.min_symbol_errors);
    let max = cfg
        .pick(flags.max_blocks, "max_blocks")?
        .unwrap_or(defaults.max_blocks);
    if max == 0 {
        return Err(usage("--max-blocks must be positive"));
    }
    Ok(StopRule::new(min, max))
}

/// Resolves `(T, B, alpha)`. Without an explicit alpha the cached optimum at
/// 20 dB for `n` receive antennas is used, computing it on a cache miss.
fn resolve_codec(
    cfg: &ConfigFile,
    flags: &CodecFlags,
    n: usize,
) -> CliResult<(CodecConfig, &'static str)> {
    let t: usize = cfg.require(flags.t, "T", "--T")?;
    let b: u32 = cfg.require(flags.b, "B", "--B")?;
    // validate T and B before a potentially long alpha search
    CodecConfig::new(t, b, 0.25).map_err(|e| usage(format!("--T/--B: {e}")))?;
    let (alpha, source) = match cfg.pick(flags.alpha, "alpha")? {
        Some(alpha) => (alpha, "given"),
        None => {
            let cache = cfg
                .pick(flags.alpha_cache.clone(), "alpha_cache")?
                .unwrap_or_else(|| PathBuf::from(DEFAULT_ALPHA_CACHE));
            let stop = StopRule::new(100, 1_000_000);
            (
                simkit::default_alpha(&cache, t, b, n, stop, DEFAULT_SEED)?,
                "cache",
            )
        }
    };
    let codec = CodecConfig::new(t, b, alpha).map_err(|e| usage(format!("--alpha: {e}")))?;
    Ok((codec, source))
}

fn write_output(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Other(format!("--out: cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// `# key=value` manifest lines shared by every results file.
struct Manifest(Vec<String>);

impl Manifest {
    fn new(command: &str) -> Self {
        Self(vec![
            "grasslattice results v1".to_string(),
            format!("tool=grasslattice {}", env!("CARGO_PKG_VERSION")),
            format!("command={command}"),
        ])
    }

    fn push(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        self.0.push(format!("{key}={value}"));
        self
    }

    fn codec(&mut self, c: &CodecConfig) -> &mut Self {
        self.push("T", c.t())
            .push("B", c.b())
            .push("alpha", c.alpha())
    }

    fn stop(&mut self, s: &StopRule) -> &mut Self {
        self.push("min_errors", s.min_symbol_errors)
            .push("max_blocks", s.max_blocks)
    }

    fn render(&self) -> String {
        self.0.iter().map(|l| format!("# {l}\n")).collect()
    }
}

fn cmd_encode(args: EncodeArgs) -> CliResult<()> {
    let cfg = ConfigFile::load(args.config.as_deref())?;
    let (codec, _) = resolve_codec(&cfg, &args.codec, 1)?;
    let bits: BitWord = args
        .bits
        .parse()
        .map_err(|e| usage(format!("--bits: {e}")))?;
    if bits.len() != codec.bits_per_word() {
        return Err(usage(format!(
            "--bits: expected {} bits for T={} B={}, got {}",
            codec.bits_per_word(),
            codec.t(),
            codec.b(),
            bits.len()
        )));
    }
    let x = codec::encode(&bits, &codec)?;
    println!("{}", format_complex_row(x.as_vector().iter()));
    Ok(())
}

fn format_complex_row<'a>(values: impl Iterator<Item = &'a Complex64>) -> String {
    values
        .flat_map(|c| [fmt_f64(c.re), fmt_f64(c.im)])
        .collect::<Vec<_>>()
        .join(",")
}

/// Parses a block file: one row per time slot, `2N` interleaved reals.
pub fn parse_block(text: &str) -> std::result::Result<CMatrix, String> {
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let nums = line
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("line {}: invalid number {v:?}", i + 1))
            })
            .collect::<std::result::Result<Vec<f64>, String>>()?;
        if nums.len() % 2 != 0 || nums.is_empty() {
            return Err(format!(
                "line {}: expected an even number of columns",
                i + 1
            ));
        }
        if nums.iter().any(|v| !v.is_finite()) {
            return Err(format!("line {}: non-finite value", i + 1));
        }
        rows.push(
            nums.chunks_exact(2)
                .map(|p| Complex64::new(p[0], p[1]))
                .collect(),
        );
    }
    let n = rows.first().map(Vec::len).ok_or("no data rows")?;
    if rows.iter().any(|r| r.len() != n) {
        return Err("rows have different lengths".into());
    }
    Ok(CMatrix::from_fn(rows.len(), n, |i, j| rows[i][j]))
}

fn cmd_decode(args: DecodeArgs) -> CliResult<()> {
    let cfg = ConfigFile::load(args.config.as_deref())?;
    let text = std::fs::read_to_string(&args.block).map_err(|e| {
        usage(format!(
            "--block: cannot read {}: {e}",
            args.block.display()
        ))
    })?;
    let y = parse_block(&text).map_err(|e| usage(format!("--block: {e}")))?;
    let (codec, _) = resolve_codec(&cfg, &args.codec, y.ncols())?;
    if y.nrows() != codec.t() {
        return Err(usage(format!(
            "--block: expected {} rows for T={}, got {}",
            codec.t(),
            codec.t(),
            y.nrows()
        )));
    }
    let word = codec::decode(&ReceivedBlock::new(y), &codec)?;
    println!("{word}");
    Ok(())
}

fn cmd_simulate(args: SimulateArgs) -> CliResult<()> {
    let cfg = ConfigFile::load(args.common.config.as_deref())?;
    let scheme = match args.scheme {
        Some(s) => s,
        None => match cfg.0.get("scheme") {
            Some(v) => Scheme::from_str(v, false)
                .map_err(|_| usage(format!("--config: invalid scheme {v:?}")))?,
            None => Scheme::Grasslattice,
        },
    };
    let n: usize = cfg.pick(args.n, "N")?.unwrap_or(1);
    if n == 0 {
        return Err(usage("--N must be positive"));
    }
    let snr_text: String = cfg.require(args.snr_list, "snr_list", "--snr-list")?;
    let snrs = parse_value_list(&snr_text).map_err(|e| usage(format!("--snr-list: {e}")))?;
    let stop = resolve_stop(&cfg, &args.stop)?;
    let seed = resolve_seed(&cfg, args.stop.seed)?;
    let timestamp = resolve_timestamp(&cfg, args.stop.timestamp)?;

    let mut manifest = Manifest::new("simulate");
    manifest.push("scheme", scheme.name());
    let stats = match scheme {
        Scheme::Grasslattice => {
            let (codec, _) = resolve_codec(&cfg, &args.codec, n)?;
            manifest.codec(&codec);
            simkit::run_error_rate(&codec, n, &snrs, stop, seed)
        }
        Scheme::Pilot => {
            let t: usize = cfg.require(args.codec.t, "T", "--T")?;
            let b: Option<u32> = cfg.pick(args.codec.b, "B")?;
            let qam = match cfg.pick(args.qam_order, "qam_order")? {
                Some(q) => q,
                None => {
                    let b = b.ok_or_else(|| {
                        usage("--qam-order or --B is required for the pilot scheme")
                    })?;
                    1usize << (2 * b)
                }
            };
            let split = cfg.pick(args.power_split, "power_split")?.unwrap_or(0.5);
            let pilot = PilotConfig::new(t, n, qam, split).map_err(|e| usage(e.to_string()))?;
            manifest
                .push("T", t)
                .push("qam_order", qam)
                .push("power_split", split);
            simkit::pilot_baseline(&pilot, &snrs, stop, seed)
        }
        Scheme::Mlfile => {
            let path: PathBuf = cfg.require(args.codebook, "codebook", "--codebook")?;
            let cb = simkit::load_codebook(&path).map_err(|e| usage(format!("--codebook: {e}")))?;
            manifest
                .push("codebook", path.display())
                .push("T", cb.t())
                .push("K", cb.len());
            simkit::run_ml_error_rate(&cb, n, &snrs, stop, seed)
        }
    };
    manifest
        .push("N", n)
        .push("snr_list", join_values(&snrs))
        .stop(&stop)
        .push("seed", seed)
        .push("timestamp", timestamp);
    let comments: Vec<String> = manifest.0.clone();
    write_output(
        args.common.out.as_deref(),
        &simkit::results_csv(&comments, &stats),
    )
}

fn cmd_sweep_alpha(args: SweepArgs) -> CliResult<()> {
    let cfg = ConfigFile::load(args.common.config.as_deref())?;
    let t: usize = cfg.require(args.codec.t, "T", "--T")?;
    let b: u32 = cfg.require(args.codec.b, "B", "--B")?;
    let n: usize = cfg.pick(args.n, "N")?.unwrap_or(1);
    if n == 0 {
        return Err(usage("--N must be positive"));
    }
    let snr: f64 = cfg
        .pick(args.snr, "snr_db")?
        .unwrap_or(simkit::ALPHA_SELECTION_SNR_DB);
    let grid = match cfg.pick(args.alpha_grid, "alpha_grid")? {
        Some(text) => parse_value_list(&text).map_err(|e| usage(format!("--alpha-grid: {e}")))?,
        None => simkit::default_alpha_grid(),
    };
    let stop = resolve_stop(&cfg, &args.stop)?;
    let seed = resolve_seed(&cfg, args.stop.seed)?;
    let timestamp = resolve_timestamp(&cfg, args.stop.timestamp)?;
    let template = CodecConfig::new(t, b, 0.25).map_err(|e| usage(format!("--T/--B: {e}")))?;
    let sweep = simkit::sweep_alpha(&template, &grid, snr, n, stop, seed)
        .map_err(|e| usage(format!("--alpha-grid: {e}")))?;

    let mut manifest = Manifest::new("sweep-alpha");
    manifest
        .push("T", t)
        .push("B", b)
        .push("N", n)
        .push("snr_db", snr)
        .push("alpha_grid", join_values(&grid))
        .stop(&stop)
        .push("seed", seed)
        .push("timestamp", timestamp)
        .push("alpha_star", sweep.best_alpha);
    let mut text = manifest.render();
    text.push_str("alpha,blocks,symbol_errors,bit_errors,ser,ber\n");
    for (alpha, s) in &sweep.rows {
        writeln!(
            text,
            "{},{},{},{},{},{}",
            fmt_f64(*alpha),
            s.blocks,
            s.symbol_errors,
            s.bit_errors.unwrap_or(0),
            fmt_f64(s.ser),
            fmt_f64(s.ber.unwrap_or(f64::NAN))
        )
        .unwrap();
    }
    write_output(args.common.out.as_deref(), &text)?;
    if args.common.out.is_some() {
        println!("alpha_star={}", sweep.best_alpha);
    }
    Ok(())
}

fn cmd_min_chordal(args: MinChordalArgs) -> CliResult<()> {
    let cfg = ConfigFile::load(args.common.config.as_deref())?;
    let t: usize = cfg.require(args.t, "T", "--T")?;
    let b: u32 = cfg.require(args.b, "B", "--B")?;
    let grid = match cfg.pick(args.alpha_grid, "alpha_grid")? {
        Some(text) => parse_value_list(&text).map_err(|e| usage(format!("--alpha-grid: {e}")))?,
        None => simkit::default_alpha_grid(),
    };
    let mut rows = Vec::with_capacity(grid.len());
    for &alpha in &grid {
        let codec =
            CodecConfig::new(t, b, alpha).map_err(|e| usage(format!("--alpha-grid: {e}")))?;
        rows.push((alpha, simkit::min_chordal_distance(&codec)?));
    }
    let best = rows
        .iter()
        .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.total_cmp(&a.0)))
        .map(|r| r.0)
        .unwrap();
    let mut manifest = Manifest::new("min-chordal");
    manifest
        .push("T", t)
        .push("B", b)
        .push("alpha_grid", join_values(&grid))
        .push("chordal_distance", "sqrt(1-|x^H y|^2)")
        .push("alpha_star", best);
    let mut text = manifest.render();
    text.push_str("alpha,min_chordal_distance\n");
    for (alpha, d) in rows {
        writeln!(text, "{},{}", fmt_f64(alpha), fmt_f64(d)).unwrap();
    }
    write_output(args.common.out.as_deref(), &text)
}

fn cmd_hopf(args: HopfArgs) -> CliResult<()> {
    let cfg = ConfigFile::load(args.common.config.as_deref())?;
    let t: usize = cfg.require(args.codec.t, "T", "--T")?;
    if t != 2 {
        return Err(usage(format!("--T: the Hopf export needs T=2, got {t}")));
    }
    let (codec, _) = resolve_codec(&cfg, &args.codec, 1)?;
    if codec.bits_per_word() > 20 {
        return Err(usage("--B: constellation too large to export"));
    }
    let mut manifest = Manifest::new("hopf");
    manifest.codec(&codec);
    let mut text = manifest.render();
    text.push_str("stage,idx,c0,c1,c2\n");
    let mut stages: [String; 4] = Default::default();
    for (idx, word) in codec::all_words(&codec).enumerate() {
        let p = word_to_hypercube(&word, &codec)?;
        let z = theta1(&p);
        let w = theta2(&z);
        let x = theta3(&w);
        let s = simkit::hopf_project(&x)?;
        let (zc, wc) = (z.as_vector()[0], w.as_vector()[0]);
        writeln!(
            stages[0],
            "lattice,{idx},{},{},",
            fmt_f64(p.a()[0]),
            fmt_f64(p.b()[0])
        )
        .unwrap();
        writeln!(
            stages[1],
            "gaussian,{idx},{},{},",
            fmt_f64(zc.re),
            fmt_f64(zc.im)
        )
        .unwrap();
        writeln!(
            stages[2],
            "ball,{idx},{},{},",
            fmt_f64(wc.re),
            fmt_f64(wc.im)
        )
        .unwrap();
        writeln!(
            stages[3],
            "sphere,{idx},{},{},{}",
            fmt_f64(s[0]),
            fmt_f64(s[1]),
            fmt_f64(s[2])
        )
        .unwrap();
    }
    stages.iter().for_each(|s| text.push_str(s));
    write_output(args.common.out.as_deref(), &text)
}

fn cmd_codebook(args: CodebookArgs) -> CliResult<()> {
    let cfg = ConfigFile::load(args.common.config.as_deref())?;
    let (codec, _) = resolve_codec(&cfg, &args.codec, 1)?;
    if codec.bits_per_word() > 20 {
        return Err(usage("--B: constellation too large to export"));
    }
    let cb = Codebook::grass_lattice(&codec)?;
    write_output(args.common.out.as_deref(), &cb.to_text())
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = match cli.command {
        Command::Encode(a) => cmd_encode(a),
        Command::Decode(a) => cmd_decode(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::SweepAlpha(a) => cmd_sweep_alpha(a),
        Command::MinChordal(a) => cmd_min_chordal(a),
        Command::Hopf(a) => cmd_hopf(a),
        Command::Codebook(a) => cmd_codebook(a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
    }
}
