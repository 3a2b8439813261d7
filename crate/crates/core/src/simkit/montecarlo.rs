//! Deterministic, parallel Monte Carlo error counting.
//!
//! Blocks are simulated in fixed-size batches. Every batch owns a ChaCha
//! stream derived from `(seed, point key, batch index)`, batches are evaluated
//! in parallel waves and folded strictly in index order, so the counts depend
//! only on the seed and the point key, never on thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub const DEFAULT_MIN_SYMBOL_ERRORS: u64 = 100;
pub const DEFAULT_MAX_BLOCKS: u64 = 10_000_000;

const BATCH_BLOCKS: u64 = 256;
const WAVE_BATCHES: u64 = 64;

/// Stop a point once `min_symbol_errors` symbol errors have been seen or
/// `max_blocks` blocks simulated, whichever happens first. The error
/// criterion is checked at batch boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StopRule {
    pub min_symbol_errors: u64,
    pub max_blocks: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            min_symbol_errors: DEFAULT_MIN_SYMBOL_ERRORS,
            max_blocks: DEFAULT_MAX_BLOCKS,
        }
    }
}

impl StopRule {
    pub fn new(min_symbol_errors: u64, max_blocks: u64) -> Self {
        Self {
            min_symbol_errors,
            max_blocks: max_blocks.max(1),
        }
    }

    /// Runs exactly `blocks` blocks.
    pub fn fixed(blocks: u64) -> Self {
        Self::new(u64::MAX, blocks)
    }
}

/// Outcome of one simulated block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BlockOutcome {
    pub symbol_error: bool,
    pub bit_errors: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Counts {
    pub blocks: u64,
    pub symbol_errors: u64,
    pub bit_errors: u64,
}

impl Counts {
    fn add(&mut self, other: &Counts) {
        self.blocks += other.blocks;
        self.symbol_errors += other.symbol_errors;
        self.bit_errors += other.bit_errors;
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// RNG for batch `batch` of the point identified by `key`.
pub fn batch_rng(seed: u64, key: u64, batch: u64) -> ChaCha8Rng {
    let mut state = seed ^ key.rotate_left(32);
    let mut material = [0u8; 32];
    for chunk in material.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(material);
    rng.set_stream(batch);
    rng
}

/// Simulates blocks until the stop rule fires.
pub fn run_point<F>(seed: u64, key: u64, stop: StopRule, trial: F) -> Counts
where
    F: Fn(&mut ChaCha8Rng) -> BlockOutcome + Sync,
{
    let mut total = Counts::default();
    let mut next_batch = 0u64;
    loop {
        let remaining = stop.max_blocks - total.blocks;
        let batches = remaining.div_ceil(BATCH_BLOCKS).min(WAVE_BATCHES);
        let results: Vec<Counts> = (next_batch..next_batch + batches)
            .into_par_iter()
            .map(|batch| {
                let start = (batch - next_batch) * BATCH_BLOCKS;
                let len = BATCH_BLOCKS.min(remaining - start);
                let mut rng = batch_rng(seed, key, batch);
                let mut c = Counts::default();
                for _ in 0..len {
                    let o = trial(&mut rng);
                    c.blocks += 1;
                    c.symbol_errors += o.symbol_error as u64;
                    c.bit_errors += o.bit_errors;
                }
                c
            })
            .collect();
        for c in &results {
            total.add(c);
            if total.symbol_errors >= stop.min_symbol_errors || total.blocks >= stop.max_blocks {
                return total;
            }
        }
        next_batch += batches;
    }
}
