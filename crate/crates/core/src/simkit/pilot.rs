//! Coherent pilot-based baseline: one pilot symbol followed by `T-1`
//! Gray-labeled square QAM data symbols, MMSE channel estimation from the
//! pilot and MMSE equalization of each data symbol.

use crate::error::{Error, Result};
use crate::linalg::CVector;
use num_complex::Complex64;

/// Square Gray-labeled QAM with unit average energy.
#[derive(Debug, Clone, PartialEq)]
pub struct Qam {
    order: usize,
    bits_per_axis: u32,
    scale: f64,
}

impl Qam {
    /// `order` must be a power of 4 (4, 16, 64, ...).
    pub fn new(order: usize) -> Result<Self> {
        let bits = order.trailing_zeros();
        if order < 4 || !order.is_power_of_two() || !bits.is_multiple_of(2) {
            return Err(Error::InvalidConfig(format!(
                "QAM order must be a power of 4, got {order}"
            )));
        }
        let side = 1usize << (bits / 2);
        // mean energy of the odd-integer grid is 2(L^2 - 1)/3
        let energy = 2.0 * ((side * side) as f64 - 1.0) / 3.0;
        Ok(Self {
            order,
            bits_per_axis: bits / 2,
            scale: energy.sqrt().recip(),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn bits_per_symbol(&self) -> usize {
        2 * self.bits_per_axis as usize
    }

    fn side(&self) -> usize {
        1 << self.bits_per_axis
    }

    fn level(&self, bits: &[bool]) -> f64 {
        let idx = crate::codec::gray_decode(bits);
        (2.0 * idx as f64 - self.side() as f64 + 1.0) * self.scale
    }

    fn axis_bits(&self, v: f64) -> Vec<bool> {
        let side = self.side() as f64;
        let idx = ((v / self.scale + side - 1.0) / 2.0)
            .round()
            .clamp(0.0, side - 1.0) as usize;
        crate::codec::gray_encode(idx, self.bits_per_axis).unwrap()
    }

    /// First half of `bits` labels the in-phase level, second half the
    /// quadrature level.
    pub fn modulate(&self, bits: &[bool]) -> Complex64 {
        assert_eq!(bits.len(), self.bits_per_symbol());
        let m = self.bits_per_axis as usize;
        Complex64::new(self.level(&bits[..m]), self.level(&bits[m..]))
    }

    /// Nearest-point hard decision.
    pub fn demodulate(&self, s: Complex64) -> Vec<bool> {
        let mut bits = self.axis_bits(s.re);
        bits.extend(self.axis_bits(s.im));
        bits
    }

    pub fn points(&self) -> Vec<Complex64> {
        (0..self.order)
            .map(|i| {
                let bits: Vec<bool> = (0..self.bits_per_symbol())
                    .rev()
                    .map(|b| (i >> b) & 1 == 1)
                    .collect();
                self.modulate(&bits)
            })
            .collect()
    }
}

/// Pilot scheme parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct PilotConfig {
    pub t: usize,
    pub n: usize,
    pub qam: Qam,
    /// Fraction of the block energy spent on the pilot.
    pub power_split: f64,
}

impl PilotConfig {
    pub fn new(t: usize, n: usize, qam_order: usize, power_split: f64) -> Result<Self> {
        if t < 2 || n < 1 {
            return Err(Error::InvalidConfig(format!(
                "need T >= 2 and N >= 1, got T={t} N={n}"
            )));
        }
        if !(power_split > 0.0 && power_split < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "power split must be in (0,1), got {power_split}"
            )));
        }
        Ok(Self {
            t,
            n,
            qam: Qam::new(qam_order)?,
            power_split,
        })
    }

    pub fn bits_per_block(&self) -> usize {
        (self.t - 1) * self.qam.bits_per_symbol()
    }

    pub fn rate(&self) -> f64 {
        self.bits_per_block() as f64 / self.t as f64
    }

    fn pilot_amplitude(&self) -> f64 {
        self.power_split.sqrt()
    }

    fn data_amplitude(&self) -> f64 {
        ((1.0 - self.power_split) / (self.t - 1) as f64).sqrt()
    }

    /// Transmitted block `[sqrt(p); a s_1; ...; a s_{T-1}]` with
    /// `a^2 = (1-p)/(T-1)`, so that `E|x|^2 = 1`.
    pub fn block(&self, bits: &[bool]) -> CVector {
        assert_eq!(bits.len(), self.bits_per_block());
        let a = self.data_amplitude();
        let mut x = CVector::zeros(self.t);
        x[0] = Complex64::new(self.pilot_amplitude(), 0.0);
        for (k, chunk) in bits.chunks_exact(self.qam.bits_per_symbol()).enumerate() {
            x[k + 1] = self.qam.modulate(chunk) * a;
        }
        x
    }

    /// Estimates the channel from the pilot row and detects the data bits.
    ///
    /// `noise_var` is the per-entry noise variance `1/(T rho)`.
    pub fn detect(&self, y: &crate::codec::ReceivedBlock, noise_var: f64) -> Vec<bool> {
        let m = y.as_matrix();
        let p = self.power_split;
        let sp = self.pilot_amplitude();
        // LMMSE estimate of h ~ CN(0, I) from y_0 = sqrt(p) h + noise
        let h_hat: CVector = m.row(0).transpose() * Complex64::new(sp / (p + noise_var), 0.0);
        let err_var = noise_var / (p + noise_var);
        let a = self.data_amplitude();
        let gain = a * a * h_hat.norm_squared();
        let denom = gain + a * a * err_var + noise_var;
        let mut bits = Vec::with_capacity(self.bits_per_block());
        for k in 1..self.t {
            let yk: CVector = m.row(k).transpose();
            let s_mmse = h_hat.dotc(&yk) * (a / denom);
            // remove the MMSE shrinkage before the QAM slicer
            let bias = if gain > 0.0 { gain / denom } else { 1.0 };
            bits.extend(self.qam.demodulate(s_mmse / bias));
        }
        bits
    }
}
