//! Rayleigh block-fading SIMO channel.
//!
//! One coherence block carries a unit-norm `x in C^T` and the receiver sees
//! `Y = x h^T + sqrt(1/(T rho)) W` with `h ~ CN(0, I_N)` and `W` having
//! i.i.d. `CN(0, 1)` entries.

use crate::codec::ReceivedBlock;
use crate::linalg::{CMatrix, CVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// One draw of fading and noise for a block.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub h: CVector,
    pub noise: CMatrix,
    pub rho: f64,
}

impl ChannelRealization {
    pub fn draw<R: Rng + ?Sized>(t: usize, n: usize, rho: f64, rng: &mut R) -> Self {
        let h = CVector::from_fn(n, |_, _| complex_normal(rng));
        let noise = CMatrix::from_fn(t, n, |_, _| complex_normal(rng));
        Self { h, noise, rho }
    }

    /// Standard deviation multiplying the unit-variance noise, `sqrt(1/(T rho))`.
    /// Zero for infinite SNR.
    pub fn noise_scale(&self) -> f64 {
        noise_scale(self.noise.nrows(), self.rho)
    }

    pub fn apply(&self, x: &CVector) -> ReceivedBlock {
        let mut y = x * self.h.transpose();
        let s = self.noise_scale();
        if s > 0.0 {
            y += &self.noise * Complex64::new(s, 0.0);
        }
        ReceivedBlock::new(y)
    }
}

pub fn noise_scale(t: usize, rho: f64) -> f64 {
    (1.0 / (t as f64 * rho)).sqrt()
}

/// A `CN(0, 1)` sample.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Linear SNR from decibels. `inf` dB gives a noiseless channel.
pub fn snr_linear(snr_db: f64) -> f64 {
    10f64.powf(snr_db / 10.0)
}

/// Sends `x` through a fresh channel realization.
pub fn transmit_vector<R: Rng + ?Sized>(
    x: &CVector,
    n: usize,
    rho: f64,
    rng: &mut R,
) -> ReceivedBlock {
    ChannelRealization::draw(x.len(), n, rho, rng).apply(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn infinite_snr_is_rank_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = CVector::from_vec(vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]);
        let ch = ChannelRealization::draw(2, 3, f64::INFINITY, &mut rng);
        assert_eq!(ch.noise_scale(), 0.0);
        let y = ch.apply(&x);
        assert_eq!(y.as_matrix(), &(&x * ch.h.transpose()));
    }

    #[test]
    fn complex_normal_has_unit_power() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 200_000;
        let p: f64 = (0..n)
            .map(|_| complex_normal(&mut rng).norm_sqr())
            .sum::<f64>()
            / n as f64;
        assert!((p - 1.0).abs() < 0.01);
    }
}
