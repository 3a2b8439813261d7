//! Channel simulation and error-rate measurement.
//!
//! Every SNR point draws its randomness from streams keyed by the seed and the
//! SNR value itself, so reordering or subsetting an SNR list leaves the
//! per-point results unchanged.

pub mod channel;
pub mod codebook;
pub mod montecarlo;
pub mod pilot;

pub use channel::{complex_normal, noise_scale, snr_linear, transmit_vector, ChannelRealization};
pub use codebook::{codebook_min_distance, load_codebook, ml_detect, parse_codebook, Codebook};
pub use montecarlo::{run_point, BlockOutcome, Counts, StopRule};
pub use pilot::{PilotConfig, Qam};

use crate::codec::{all_words, decode, encode, BitWord, CodecConfig, ReceivedBlock};
use crate::error::{Error, Result};
use crate::grassmap::GrassmannPoint;
use rand::Rng;
use std::fmt::Write as _;
use std::path::Path;

const KEY_GRASS_LATTICE: u64 = 0x6772_6173_736c_6174;
const KEY_PILOT: u64 = 0x7069_6c6f_7462_6173;
const KEY_ML: u64 = 0x6d6c_6669_6c65_0000;

/// Largest constellation accepted by [`min_chordal_distance`].
pub const MAX_EXHAUSTIVE_CARDINALITY: u64 = 1 << 20;

/// Error counts at one SNR point.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorStats {
    pub snr_db: f64,
    pub ebn0_db: f64,
    pub blocks: u64,
    pub symbol_errors: u64,
    /// Absent when the scheme has no bit labels.
    pub bit_errors: Option<u64>,
    pub bits_per_block: Option<usize>,
    pub ser: f64,
    pub ber: Option<f64>,
}

impl ErrorStats {
    pub fn from_counts(
        snr_db: f64,
        rate: f64,
        counts: Counts,
        bits_per_block: Option<usize>,
    ) -> Self {
        let blocks = counts.blocks.max(1) as f64;
        Self {
            snr_db,
            ebn0_db: ebn0_from_snr(snr_db, rate),
            blocks: counts.blocks,
            symbol_errors: counts.symbol_errors,
            bit_errors: bits_per_block.map(|_| counts.bit_errors),
            bits_per_block,
            ser: counts.symbol_errors as f64 / blocks,
            ber: bits_per_block.map(|b| counts.bit_errors as f64 / (blocks * b as f64)),
        }
    }

    /// Binomial standard error of the SER estimate.
    pub fn ser_stderr(&self) -> f64 {
        let n = self.blocks.max(1) as f64;
        (self.ser * (1.0 - self.ser) / n).sqrt()
    }
}

/// `Eb/N0 = SNR - 10 log10(R)`, in dB.
pub fn ebn0_from_snr(snr_db: f64, rate: f64) -> f64 {
    assert!(rate > 0.0, "rate must be positive");
    snr_db - 10.0 * rate.log10()
}

/// `SNR = Eb/N0 + 10 log10(R)`, in dB.
pub fn snr_from_ebn0(ebn0_db: f64, rate: f64) -> f64 {
    assert!(rate > 0.0, "rate must be positive");
    ebn0_db + 10.0 * rate.log10()
}

/// Sends a codeword through a fresh Rayleigh block-fading realization.
pub fn transmit<R: Rng + ?Sized>(
    x: &GrassmannPoint,
    n: usize,
    rho: f64,
    rng: &mut R,
) -> ReceivedBlock {
    transmit_vector(x.as_vector(), n, rho, rng)
}

fn point_key(tag: u64, snr_db: f64) -> u64 {
    tag ^ snr_db.to_bits()
}

fn random_bits<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<bool> {
    (0..len).map(|_| rng.random::<bool>()).collect()
}

/// One Grass-Lattice block: random word, encode, channel, decode.
fn grass_lattice_trial<R: Rng + ?Sized>(
    cfg: &CodecConfig,
    n: usize,
    rho: f64,
    rng: &mut R,
) -> BlockOutcome {
    let sent = BitWord::new(random_bits(cfg.bits_per_word(), rng));
    let x = encode(&sent, cfg).expect("word length matches the configuration");
    let y = transmit(&x, n, rho, rng);
    match decode(&y, cfg) {
        Ok(got) => BlockOutcome {
            symbol_error: got != sent,
            bit_errors: got.hamming_distance(&sent) as u64,
        },
        // only reachable on an all-zero block; count it as a miss
        Err(_) => BlockOutcome {
            symbol_error: true,
            bit_errors: sent.bits().iter().filter(|&&b| b).count() as u64,
        },
    }
}

/// SER/BER of the Grass-Lattice codec over a list of SNR points.
pub fn run_error_rate(
    cfg: &CodecConfig,
    n: usize,
    snr_db_list: &[f64],
    stop: StopRule,
    seed: u64,
) -> Vec<ErrorStats> {
    snr_db_list
        .iter()
        .map(|&snr_db| {
            let rho = snr_linear(snr_db);
            let counts = run_point(seed, point_key(KEY_GRASS_LATTICE, snr_db), stop, |rng| {
                grass_lattice_trial(cfg, n, rho, rng)
            });
            ErrorStats::from_counts(snr_db, cfg.rate(), counts, Some(cfg.bits_per_word()))
        })
        .collect()
}

/// Result of an alpha sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaSweep {
    pub rows: Vec<(f64, ErrorStats)>,
    pub best_alpha: f64,
}

/// SER/BER as a function of alpha at a fixed SNR.
///
/// All alphas see the same random words and channel draws, so differences
/// between grid points are not masked by independent sampling noise. The
/// reported optimum is the lowest SER, ties going to the lowest BER and then
/// to the first grid point.
pub fn sweep_alpha(
    template: &CodecConfig,
    alpha_grid: &[f64],
    snr_db: f64,
    n: usize,
    stop: StopRule,
    seed: u64,
) -> Result<AlphaSweep> {
    if alpha_grid.is_empty() {
        return Err(Error::InvalidConfig("alpha grid is empty".into()));
    }
    let rho = snr_linear(snr_db);
    let key = point_key(KEY_GRASS_LATTICE, snr_db);
    let mut rows = Vec::with_capacity(alpha_grid.len());
    for &alpha in alpha_grid {
        let cfg = template.with_alpha(alpha)?;
        let counts = run_point(seed, key, stop, |rng| {
            grass_lattice_trial(&cfg, n, rho, rng)
        });
        rows.push((
            alpha,
            ErrorStats::from_counts(snr_db, cfg.rate(), counts, Some(cfg.bits_per_word())),
        ));
    }
    let best_alpha = rows
        .iter()
        .min_by(|(_, a), (_, b)| {
            a.ser
                .total_cmp(&b.ser)
                .then(a.ber.unwrap_or(0.0).total_cmp(&b.ber.unwrap_or(0.0)))
        })
        .map(|(alpha, _)| *alpha)
        .unwrap();
    Ok(AlphaSweep { rows, best_alpha })
}

/// The default alpha search grid `{0.02, 0.04, ..., 0.40}`.
pub fn default_alpha_grid() -> Vec<f64> {
    (1..=20).map(|i| (2 * i) as f64 / 100.0).collect()
}

/// SNR at which the default alpha is selected.
pub const ALPHA_SELECTION_SNR_DB: f64 = 20.0;

fn cache_line_key(t: usize, b: u32, n: usize) -> String {
    format!("T={t} B={b} N={n} snr_db={ALPHA_SELECTION_SNR_DB}")
}

/// Looks up the cached optimum alpha for `(T, B, N)`.
pub fn cached_alpha(cache: &Path, t: usize, b: u32, n: usize) -> Result<Option<f64>> {
    let text = match std::fs::read_to_string(cache) {
        Ok(text) => text,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let key = cache_line_key(t, b, n);
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix(&key) {
            if let Some(v) = rest.trim().strip_prefix("alpha=") {
                let alpha = v
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad alpha in cache line {line:?}")))?;
                return Ok(Some(alpha));
            }
        }
    }
    Ok(None)
}

/// Optimum alpha at 20 dB on [`default_alpha_grid`], read from `cache` or
/// computed with [`sweep_alpha`] and appended to it.
pub fn default_alpha(
    cache: &Path,
    t: usize,
    b: u32,
    n: usize,
    stop: StopRule,
    seed: u64,
) -> Result<f64> {
    if let Some(alpha) = cached_alpha(cache, t, b, n)? {
        return Ok(alpha);
    }
    let template = CodecConfig::new(t, b, 0.25)?;
    let sweep = sweep_alpha(
        &template,
        &default_alpha_grid(),
        ALPHA_SELECTION_SNR_DB,
        n,
        stop,
        seed,
    )?;
    let mut text = match std::fs::read_to_string(cache) {
        Ok(text) => text,
        Err(_) => "# grasslattice alpha cache v1\n".to_string(),
    };
    writeln!(
        text,
        "{} alpha={} seed={seed} min_errors={} max_blocks={}",
        cache_line_key(t, b, n),
        sweep.best_alpha,
        stop.min_symbol_errors,
        stop.max_blocks
    )
    .unwrap();
    std::fs::write(cache, text)?;
    Ok(sweep.best_alpha)
}

/// Exact minimum pairwise chordal distance of the whole constellation.
pub fn min_chordal_distance(cfg: &CodecConfig) -> Result<f64> {
    match cfg.cardinality() {
        Some(k) if k <= MAX_EXHAUSTIVE_CARDINALITY => {}
        _ => {
            return Err(Error::InvalidConfig(format!(
                "constellation larger than {MAX_EXHAUSTIVE_CARDINALITY} codewords"
            )))
        }
    }
    let points = all_words(cfg)
        .map(|w| encode(&w, cfg).map(GrassmannPoint::into_vector))
        .collect::<Result<Vec<_>>>()?;
    Ok(codebook_min_distance(&points))
}

/// SER/BER of the coherent pilot scheme.
pub fn pilot_baseline(
    cfg: &PilotConfig,
    snr_db_list: &[f64],
    stop: StopRule,
    seed: u64,
) -> Vec<ErrorStats> {
    snr_db_list
        .iter()
        .map(|&snr_db| {
            let rho = snr_linear(snr_db);
            let noise_var = noise_scale(cfg.t, rho).powi(2);
            let counts = run_point(seed, point_key(KEY_PILOT, snr_db), stop, |rng| {
                let bits = random_bits(cfg.bits_per_block(), rng);
                let x = cfg.block(&bits);
                let y = transmit_vector(&x, cfg.n, rho, rng);
                let got = cfg.detect(&y, noise_var);
                let bit_errors = got.iter().zip(&bits).filter(|(a, b)| a != b).count() as u64;
                BlockOutcome {
                    symbol_error: bit_errors > 0,
                    bit_errors,
                }
            });
            ErrorStats::from_counts(snr_db, cfg.rate(), counts, Some(cfg.bits_per_block()))
        })
        .collect()
}

/// SER (and BER when labeled) of ML detection over an explicit codebook,
/// with uniformly drawn codeword indices.
pub fn run_ml_error_rate(
    cb: &Codebook,
    n: usize,
    snr_db_list: &[f64],
    stop: StopRule,
    seed: u64,
) -> Vec<ErrorStats> {
    let k = cb.len();
    snr_db_list
        .iter()
        .map(|&snr_db| {
            let rho = snr_linear(snr_db);
            let counts = run_point(seed, point_key(KEY_ML, snr_db), stop, |rng| {
                let sent = rng.random_range(0..k);
                let y = transmit(&cb.entries()[sent], n, rho, rng);
                let got = ml_detect(&y, cb);
                let bit_errors = cb
                    .labels()
                    .map(|l| l[sent].hamming_distance(&l[got]) as u64)
                    .unwrap_or(0);
                BlockOutcome {
                    symbol_error: got != sent,
                    bit_errors,
                }
            });
            ErrorStats::from_counts(snr_db, cb.rate(), counts, cb.bits_per_word())
        })
        .collect()
}

/// Hopf map of a unit vector of `C^2` onto the real 2-sphere,
/// `(x1, x2) -> (2 x1 conj(x2), |x2|^2 - |x1|^2)` with the complex component
/// split into its real and imaginary parts.
pub fn hopf_project(x: &GrassmannPoint) -> Result<[f64; 3]> {
    if x.dim() != 2 {
        return Err(Error::InvalidConfig(format!(
            "Hopf map needs T=2, got T={}",
            x.dim()
        )));
    }
    let v = x.as_vector();
    let c = v[0] * v[1].conj() * 2.0;
    Ok([c.re, c.im, v[1].norm_sqr() - v[0].norm_sqr()])
}

/// Formats a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// Results table: comment lines (each prefixed with `# `), the column header
/// and one row per SNR point.
pub fn results_csv(comments: &[String], stats: &[ErrorStats]) -> String {
    let mut out = String::new();
    for c in comments {
        writeln!(out, "# {c}").unwrap();
    }
    out.push_str("snr_db,ebn0_db,blocks,symbol_errors,bit_errors,ser,ber\n");
    for s in stats {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt_f64(s.snr_db),
            fmt_f64(s.ebn0_db),
            s.blocks,
            s.symbol_errors,
            s.bit_errors.map_or("nan".to_string(), |b| b.to_string()),
            fmt_f64(s.ser),
            s.ber.map_or("nan".to_string(), fmt_f64),
        )
        .unwrap();
    }
    out
}
