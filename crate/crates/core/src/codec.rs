//! Bit-level encoder and decoder for the Grass-Lattice constellation.
//!
//! A word of `2B(T-1)` bits is cut into `2(T-1)` groups of `B` bits, one per
//! real coordinate of the hypercube, taken in the interleaved order
//! `a_1, b_1, a_2, b_2, ...`. Each group is a binary-reflected Gray label of a
//! point of the lattice `alpha + p (1 - 2 alpha) / (2^B - 1)`.
//!
//! The decoder never touches the constellation: it denoises the block to a
//! single direction, undoes the three mappings and rounds every coordinate to
//! the lattice independently.

use crate::ballmap::{invert_radial_map, theta2, BallPoint};
use crate::error::{Error, Result};
use crate::gaussmap::{theta1, theta1_inv, GaussianVector, HypercubePoint};
use crate::grassmap::{theta3, GrassmannPoint};
use crate::linalg::{dominant_eigenvector, CMatrix, CVector};
use num_complex::Complex64;
use std::fmt;
use std::str::FromStr;

/// `|v_0|` below this takes the degenerate-phase branch in [`decode`].
pub const DEGENERATE_PHASE: f64 = 1e-12;
/// Ball radius used when the received direction sits on the ball boundary.
pub const MAX_BALL_RADIUS: f64 = 1.0 - 1e-9;

/// Largest supported `B`.
pub const MAX_BITS_PER_COMPONENT: u32 = 24;

/// Coherence time `T`, bits per real component `B` and lattice margin `alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodecConfig {
    t: usize,
    b: u32,
    alpha: f64,
}

impl CodecConfig {
    pub fn new(t: usize, b: u32, alpha: f64) -> Result<Self> {
        if t < 2 {
            return Err(Error::InvalidConfig(format!(
                "T must be at least 2, got {t}"
            )));
        }
        if !(1..=MAX_BITS_PER_COMPONENT).contains(&b) {
            return Err(Error::InvalidConfig(format!(
                "B must be in 1..={MAX_BITS_PER_COMPONENT}, got {b}"
            )));
        }
        if !(alpha > 0.0 && alpha < 0.5) {
            return Err(Error::InvalidConfig(format!(
                "alpha must be in (0, 0.5), got {alpha}"
            )));
        }
        Ok(Self { t, b, alpha })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Number of real hypercube coordinates, `2(T-1)`.
    pub fn components(&self) -> usize {
        2 * (self.t - 1)
    }

    /// Bits per codeword, `2B(T-1)`.
    pub fn bits_per_word(&self) -> usize {
        self.b as usize * self.components()
    }

    /// `K = 2^{2B(T-1)}`, or `None` when it does not fit in a `u64`.
    pub fn cardinality(&self) -> Option<u64> {
        1u64.checked_shl(self.bits_per_word() as u32)
    }

    /// Spectral efficiency `R = 2B(T-1)/T` in b/s/Hz.
    pub fn rate(&self) -> f64 {
        self.bits_per_word() as f64 / self.t as f64
    }

    /// Distance between adjacent lattice points, `(1 - 2 alpha)/(2^B - 1)`.
    pub fn spacing(&self) -> f64 {
        (1.0 - 2.0 * self.alpha) / (self.levels() - 1) as f64
    }

    fn levels(&self) -> usize {
        1usize << self.b
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(self.t, self.b, alpha)
    }
}

/// A sequence of bits, most significant first within each group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitWord(Vec<bool>);

impl BitWord {
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    /// The `len` low bits of `index`, most significant first.
    pub fn from_index(index: u64, len: usize) -> Self {
        assert!(len <= 64);
        Self((0..len).rev().map(|i| (index >> i) & 1 == 1).collect())
    }

    pub fn to_index(&self) -> u64 {
        assert!(self.0.len() <= 64);
        self.0.iter().fold(0, |acc, &b| (acc << 1) | b as u64)
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn hamming_distance(&self, other: &Self) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitWord)
    }
}

/// A received `T x N` block.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceivedBlock(CMatrix);

impl ReceivedBlock {
    pub fn new(y: CMatrix) -> Self {
        Self(y)
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn t(&self) -> usize {
        self.0.nrows()
    }

    pub fn n(&self) -> usize {
        self.0.ncols()
    }
}

/// The `2^B` lattice points of `[alpha, 1 - alpha]`.
pub fn lattice_points(cfg: &CodecConfig) -> Vec<f64> {
    let last = cfg.levels() - 1;
    let spacing = cfg.spacing();
    (0..=last)
        .map(|p| {
            if p == last {
                1.0 - cfg.alpha
            } else {
                cfg.alpha + p as f64 * spacing
            }
        })
        .collect()
}

/// Binary-reflected Gray code of `index` on `bits` bits.
pub fn gray_encode(index: usize, bits: u32) -> Result<Vec<bool>> {
    if bits as usize >= usize::BITS as usize || index >> bits != 0 {
        return Err(Error::IndexOutOfRange { index, bits });
    }
    let g = index ^ (index >> 1);
    Ok((0..bits).rev().map(|i| (g >> i) & 1 == 1).collect())
}

/// Index whose Gray code is `code`.
pub fn gray_decode(code: &[bool]) -> usize {
    let mut index = 0usize;
    let mut acc = false;
    for &bit in code {
        acc ^= bit;
        index = (index << 1) | acc as usize;
    }
    index
}

/// Nearest lattice index of `u`, ties rounding up.
pub fn snap_to_lattice(u: f64, cfg: &CodecConfig) -> usize {
    let pos = ((u - cfg.alpha) / cfg.spacing() + 0.5).floor();
    pos.clamp(0.0, (cfg.levels() - 1) as f64) as usize
}

/// Hypercube point addressed by a bit word.
pub fn word_to_hypercube(bits: &BitWord, cfg: &CodecConfig) -> Result<HypercubePoint> {
    if bits.len() != cfg.bits_per_word() {
        return Err(Error::LengthMismatch {
            expected: cfg.bits_per_word(),
            got: bits.len(),
        });
    }
    let lattice = lattice_points(cfg);
    let coords: Vec<f64> = bits
        .bits()
        .chunks_exact(cfg.b as usize)
        .map(|group| lattice[gray_decode(group)])
        .collect();
    HypercubePoint::from_interleaved(&coords)
}

/// Bit word of the lattice point nearest to each coordinate of `p`.
pub fn hypercube_to_word(p: &HypercubePoint, cfg: &CodecConfig) -> BitWord {
    let mut bits = Vec::with_capacity(cfg.bits_per_word());
    for u in p.interleaved() {
        // snapped indices are always in range
        bits.extend(gray_encode(snap_to_lattice(u, cfg), cfg.b).unwrap());
    }
    BitWord(bits)
}

/// Full hypercube -> Grassmannian map.
pub fn hypercube_to_grassmann(p: &HypercubePoint) -> GrassmannPoint {
    theta3(&theta2(&theta1(p)))
}

/// Codeword of a bit word.
pub fn encode(bits: &BitWord, cfg: &CodecConfig) -> Result<GrassmannPoint> {
    Ok(hypercube_to_grassmann(&word_to_hypercube(bits, cfg)?))
}

/// Dominant left singular vector of `Y`, i.e. the unit `r` maximizing
/// `|Y^H r|^2`.
pub fn denoise(y: &ReceivedBlock) -> Result<CVector> {
    let m = y.as_matrix();
    if m.iter().all(|c| *c == Complex64::new(0.0, 0.0)) {
        return Err(Error::ZeroBlock);
    }
    if m.nrows() <= m.ncols() {
        return Ok(dominant_eigenvector(&(m * m.adjoint())));
    }
    let g = dominant_eigenvector(&(m.adjoint() * m));
    let r = m * g;
    let n = r.norm();
    Ok(r / Complex64::new(n, 0.0))
}

/// Ball point whose lift is closest in chordal distance to the line of the
/// unit vector `r = (v_0, v)`.
pub fn direction_to_ball(r: &CVector) -> BallPoint {
    let v0 = r[0];
    let phase = if v0.norm() < DEGENERATE_PHASE {
        Complex64::new(1.0, 0.0)
    } else {
        v0.conj() / Complex64::new(v0.norm(), 0.0)
    };
    let scale = r.norm();
    let mut w: CVector = r.rows(1, r.len() - 1) * (phase / Complex64::new(scale, 0.0));
    let n = w.norm();
    if n > MAX_BALL_RADIUS {
        w *= Complex64::new(MAX_BALL_RADIUS / n, 0.0);
    }
    // radius clamped above
    BallPoint::new(w).unwrap()
}

/// Inverse of the full map for an arbitrary unit direction: back to the
/// (unquantized) hypercube.
pub fn direction_to_hypercube(r: &CVector) -> HypercubePoint {
    let w = direction_to_ball(r);
    let d = w.dim() as u32;
    let v = w.as_vector();
    let n = v.norm();
    let z = if n == 0.0 {
        v.clone()
    } else {
        let s = invert_radial_map(n, d).unwrap();
        v * Complex64::new(s / n, 0.0)
    };
    theta1_inv(&GaussianVector::new(z).unwrap())
}

/// Decodes one received block.
pub fn decode(y: &ReceivedBlock, cfg: &CodecConfig) -> Result<BitWord> {
    if y.t() != cfg.t {
        return Err(Error::DimensionMismatch {
            expected_rows: cfg.t,
            expected_cols: y.n(),
            rows: y.t(),
            cols: y.n(),
        });
    }
    let r = denoise(y)?;
    Ok(hypercube_to_word(&direction_to_hypercube(&r), cfg))
}

/// All `K` bit words in index order. Only for small constellations.
pub fn all_words(cfg: &CodecConfig) -> impl Iterator<Item = BitWord> {
    let len = cfg.bits_per_word();
    let k = cfg
        .cardinality()
        .expect("constellation too large to enumerate");
    (0..k).map(move |i| BitWord::from_index(i, len))
}
