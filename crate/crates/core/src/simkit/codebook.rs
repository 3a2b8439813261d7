//! Explicit codebooks: the text file format and ML detection.
//!
//! File layout:
//!
//! ```text
//! # grasscodebook v1 T=2 K=4
//! re_1,im_1,re_2,im_2[,label]
//! ...
//! ```
//!
//! One codeword per row, `2T` interleaved real/imaginary columns and an
//! optional trailing label of `0`/`1` characters.

use crate::codec::{all_words, encode, BitWord, CodecConfig, ReceivedBlock};
use crate::error::{Error, Result};
use crate::grassmap::GrassmannPoint;
use crate::linalg::{chordal_distance, CVector};
use num_complex::Complex64;
use std::io::Write;
use std::path::Path;

/// Rows whose norm deviates from 1 by more than this are rejected.
pub const NORM_TOLERANCE: f64 = 1e-6;
/// Two entries closer than this in chordal distance are duplicates.
pub const DUPLICATE_DISTANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    entries: Vec<GrassmannPoint>,
    labels: Option<Vec<BitWord>>,
}

impl Codebook {
    pub fn new(entries: Vec<GrassmannPoint>, labels: Option<Vec<BitWord>>) -> Result<Self> {
        let first = entries
            .first()
            .ok_or_else(|| Error::Codebook("codebook is empty".into()))?;
        let t = first.dim();
        if entries.iter().any(|e| e.dim() != t) {
            return Err(Error::Codebook("entries have different lengths".into()));
        }
        if let Some(labels) = &labels {
            if labels.len() != entries.len() {
                return Err(Error::Codebook(
                    "label count differs from entry count".into(),
                ));
            }
            let len = labels[0].len();
            if len == 0 || labels.iter().any(|l| l.len() != len) {
                return Err(Error::Codebook(
                    "labels must be nonempty and of equal length".into(),
                ));
            }
            let mut sorted: Vec<_> = labels.iter().map(|l| l.to_string()).collect();
            sorted.sort();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Codebook("duplicate label".into()));
            }
        }
        for i in 0..entries.len() {
            for j in i + 1..entries.len() {
                if entries[i].chordal_distance(&entries[j]) < DUPLICATE_DISTANCE {
                    return Err(Error::Codebook(format!(
                        "entries {i} and {j} span the same line"
                    )));
                }
            }
        }
        Ok(Self { entries, labels })
    }

    /// The whole Grass-Lattice constellation with its Gray labels.
    pub fn grass_lattice(cfg: &CodecConfig) -> Result<Self> {
        let words: Vec<BitWord> = all_words(cfg).collect();
        let entries = words
            .iter()
            .map(|w| encode(w, cfg))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            entries,
            labels: Some(words),
        })
    }

    pub fn entries(&self) -> &[GrassmannPoint] {
        &self.entries
    }

    pub fn labels(&self) -> Option<&[BitWord]> {
        self.labels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn t(&self) -> usize {
        self.entries[0].dim()
    }

    /// Bits carried per codeword when labels are present.
    pub fn bits_per_word(&self) -> Option<usize> {
        self.labels.as_ref().map(|l| l[0].len())
    }

    /// Spectral efficiency `log2(K)/T`.
    pub fn rate(&self) -> f64 {
        (self.len() as f64).log2() / self.t() as f64
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("# grasscodebook v1 T={} K={}\n", self.t(), self.len());
        for (i, e) in self.entries.iter().enumerate() {
            let mut cols: Vec<String> = e
                .as_vector()
                .iter()
                .flat_map(|c| [format!("{:.16e}", c.re), format!("{:.16e}", c.im)])
                .collect();
            if let Some(labels) = &self.labels {
                cols.push(labels[i].to_string());
            }
            out.push_str(&cols.join(","));
            out.push('\n');
        }
        out
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(self.to_text().as_bytes())?;
        Ok(())
    }
}

fn parse_header(line: &str) -> Result<(usize, usize)> {
    let rest = line
        .trim()
        .strip_prefix('#')
        .map(str::trim)
        .and_then(|l| l.strip_prefix("grasscodebook v1"))
        .ok_or_else(|| Error::Codebook("missing `# grasscodebook v1` header".into()))?;
    let (mut t, mut k) = (None, None);
    for field in rest.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| Error::Codebook(format!("bad header field {field:?}")))?;
        let value: usize = value
            .parse()
            .map_err(|_| Error::Codebook(format!("bad header value {field:?}")))?;
        match key {
            "T" => t = Some(value),
            "K" => k = Some(value),
            _ => return Err(Error::Codebook(format!("unknown header field {key:?}"))),
        }
    }
    match (t, k) {
        (Some(t), Some(k)) if t >= 2 && k >= 1 => Ok((t, k)),
        _ => Err(Error::Codebook("header needs T>=2 and K>=1".into())),
    }
}

/// Parses the codebook text format. Rows are renormalized and phase-rotated
/// to canonical representatives.
pub fn parse_codebook(text: &str) -> Result<Codebook> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Codebook("empty file".into()))?;
    let (t, k) = parse_header(header)?;
    let mut entries = Vec::with_capacity(k);
    let mut labels = Vec::with_capacity(k);
    for (row, line) in lines
        .filter(|l| !l.trim_start().starts_with('#'))
        .enumerate()
    {
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        let label = match cols.len() {
            n if n == 2 * t => None,
            n if n == 2 * t + 1 => Some(
                cols[2 * t]
                    .parse::<BitWord>()
                    .map_err(|e| Error::Codebook(format!("row {row}: {e}")))?,
            ),
            n => {
                return Err(Error::Codebook(format!(
                    "row {row}: expected {} or {} columns, got {n}",
                    2 * t,
                    2 * t + 1
                )))
            }
        };
        let nums = cols[..2 * t]
            .iter()
            .map(|c| {
                c.parse::<f64>()
                    .map_err(|_| Error::Codebook(format!("row {row}: bad number {c:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        let x = CVector::from_iterator(t, nums.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])));
        let norm = x.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Codebook(format!("row {row}: norm {norm} is not 1")));
        }
        entries.push(GrassmannPoint::canonicalize(x)?);
        labels.push(label);
    }
    if entries.len() != k {
        return Err(Error::Codebook(format!(
            "header says K={k}, found {} rows",
            entries.len()
        )));
    }
    let labels = if labels.iter().all(Option::is_some) {
        Some(labels.into_iter().map(Option::unwrap).collect())
    } else if labels.iter().all(Option::is_none) {
        None
    } else {
        return Err(Error::Codebook(
            "labels must be given for all rows or none".into(),
        ));
    };
    Codebook::new(entries, labels)
}

pub fn load_codebook(path: &Path) -> Result<Codebook> {
    parse_codebook(&std::fs::read_to_string(path)?)
}

/// ML detection for equiprobable codewords: `argmax_k |Y^H x_k|^2`, lowest
/// index on ties.
pub fn ml_detect(y: &ReceivedBlock, cb: &Codebook) -> usize {
    let yh = y.as_matrix().adjoint();
    let mut best = 0;
    let mut best_metric = f64::NEG_INFINITY;
    for (k, x) in cb.entries().iter().enumerate() {
        let metric = (&yh * x.as_vector()).norm_squared();
        if metric > best_metric {
            best = k;
            best_metric = metric;
        }
    }
    best
}

/// Smallest chordal distance over all pairs of entries.
pub fn codebook_min_distance(entries: &[CVector]) -> f64 {
    use rayon::prelude::*;
    (0..entries.len())
        .into_par_iter()
        .map(|i| {
            entries[i + 1..]
                .iter()
                .map(|e| chordal_distance(&entries[i], e))
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO: &str = "# grasscodebook v1 T=2 K=2\n1,0,0,0,0\n0,0,1,0,1\n";

    #[test]
    fn parses_labels_and_header() {
        let cb = parse_codebook(TWO).unwrap();
        assert_eq!(cb.len(), 2);
        assert_eq!(cb.t(), 2);
        assert_eq!(cb.bits_per_word(), Some(1));
        assert_eq!(parse_codebook(&cb.to_text()).unwrap(), cb);
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_codebook("").is_err());
        assert!(parse_codebook("1,0,0,0\n").is_err());
        assert!(parse_codebook("# grasscodebook v1 T=2 K=3\n1,0,0,0\n0,0,1,0\n").is_err());
        assert!(parse_codebook("# grasscodebook v1 T=2 K=2\n1,0,0\n0,0,1,0\n").is_err());
        assert!(parse_codebook("# grasscodebook v1 T=2 K=2\n1,0,0,0,0\n0,0,1,0\n").is_err());
        assert!(parse_codebook("# grasscodebook v1 T=2 K=2\n2,0,0,0\n0,0,1,0\n").is_err());
        assert!(parse_codebook("# grasscodebook v1 T=2 K=2\nx,0,0,0\n0,0,1,0\n").is_err());
    }

    #[test]
    fn rejects_duplicate_lines() {
        // same line up to a phase
        let text = "# grasscodebook v1 T=2 K=2\n1,0,0,0\n0,1,0,0\n";
        let err = parse_codebook(text).unwrap_err();
        assert!(err.to_string().contains("same line"), "{err}");
    }

    #[test]
    fn renormalizes_within_tolerance() {
        let text = "# grasscodebook v1 T=2 K=2\n1.0000001,0,0,0\n0,0,0,1\n";
        let cb = parse_codebook(text).unwrap();
        assert!((cb.entries()[0].as_vector().norm() - 1.0).abs() < 1e-15);
        assert!(cb.labels().is_none());
    }

    #[test]
    fn ml_single_entry_and_noiseless() {
        let cb = parse_codebook(TWO).unwrap();
        let y = ReceivedBlock::new(
            cb.entries()[1].as_vector()
                * nalgebra::RowDVector::from_vec(vec![Complex64::new(0.3, -1.2)]),
        );
        assert_eq!(ml_detect(&y, &cb), 1);
        let one = Codebook::new(vec![cb.entries()[0].clone()], None).unwrap();
        assert_eq!(ml_detect(&y, &one), 0);
    }
}
