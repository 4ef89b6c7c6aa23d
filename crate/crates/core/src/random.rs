//! Seedable, splittable random streams.
//!
//! Every stream is a ChaCha8 generator keyed by `master_seed` with the
//! ChaCha stream (nonce) set to `stream_id`. The keystream is a pure
//! function of the block counter, so `(master_seed, stream_id)` fixes the
//! sequence on every platform and thread layout.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::cd_tests::WeightVector;
use crate::error::{Error, Result};

/// Identifies one independent random sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub master_seed: u64,
    pub stream_id: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        RngStream { master_seed, stream_id }
    }

    /// A child stream for one component of a larger computation.
    ///
    /// The child key mixes the parent key, the parent stream id and `tag`,
    /// so children of different parents never share a key.
    pub fn derive(&self, tag: u64) -> RngStream {
        let key = splitmix64(splitmix64(self.master_seed) ^ splitmix64(self.stream_id ^ 0xA5A5_A5A5));
        RngStream {
            master_seed: key,
            stream_id: tag,
        }
    }

    /// A fresh generator positioned at the start of this stream.
    pub fn generator(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// Standard normal draw.
pub(crate) fn draw_normal<R: Rng>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Chi-squared(2) draw as `-2 ln U` with `U` uniform on (0, 1].
pub(crate) fn draw_chi2_2<R: Rng>(rng: &mut R) -> f64 {
    // gen::<f64>() is in [0, 1); 1 - u is in (0, 1].
    let u = 1.0 - rng.gen::<f64>();
    -2.0 * u.ln()
}

/// Zero-mean chi-squared(2) draw rescaled to variance `target_var`.
pub(crate) fn draw_std_chi2_2<R: Rng>(rng: &mut R, target_var: f64) -> f64 {
    (draw_chi2_2(rng) - 2.0) * target_var.sqrt() / 2.0
}

pub(crate) fn draw_uniform<R: Rng>(rng: &mut R, a: f64, b: f64) -> f64 {
    a + (b - a) * rng.gen::<f64>()
}

/// `n` iid Rademacher weights (+1 or -1 with probability 1/2 each).
pub fn rademacher(stream: &RngStream, n: usize) -> WeightVector {
    let mut rng = stream.generator();
    let w = (0..n).map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 }).collect();
    WeightVector::rademacher_from(w)
}

/// `n` draws of a centred chi-squared(2) variable with variance `target_var`.
pub fn std_chi2_2(stream: &RngStream, n: usize, target_var: f64) -> Result<Vec<f64>> {
    if !(target_var > 0.0 && target_var.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "target variance must be positive, got {target_var}"
        )));
    }
    let mut rng = stream.generator();
    Ok((0..n).map(|_| draw_std_chi2_2(&mut rng, target_var)).collect())
}

/// `n` draws from `U[a, b)`.
pub fn uniform(stream: &RngStream, n: usize, a: f64, b: f64) -> Result<Vec<f64>> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::BadInterval { a, b });
    }
    let mut rng = stream.generator();
    Ok((0..n).map(|_| draw_uniform(&mut rng, a, b)).collect())
}

/// `n` standard normal draws.
pub fn normal(stream: &RngStream, n: usize) -> Vec<f64> {
    let mut rng = stream.generator();
    (0..n).map(|_| draw_normal(&mut rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mean_var(v: &[f64]) -> (f64, f64) {
        let n = v.len() as f64;
        let m = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
        (m, var)
    }

    #[test]
    fn rademacher_support_and_balance() {
        let n = 100_000;
        let w = rademacher(&RngStream::new(7, 3), n).values().to_vec();
        assert!(w.iter().all(|&x| x == 1.0 || x == -1.0));
        let (m, _) = mean_var(&w);
        assert!(m.abs() < 4.0 / (n as f64).sqrt(), "mean {m}");
    }

    #[test]
    fn streams_are_deterministic() {
        let s = RngStream::new(42, 9);
        assert_eq!(rademacher(&s, 50), rademacher(&s, 50));
        assert_eq!(normal(&s, 50), normal(&s, 50));
        assert_eq!(uniform(&s, 10, -1.0, 2.0).unwrap(), uniform(&s, 10, -1.0, 2.0).unwrap());
        assert_ne!(normal(&s, 5), normal(&RngStream::new(42, 10), 5));
    }

    #[test]
    fn std_chi2_moments() {
        let n = 100_000;
        for &v in &[1.0, 1.0 / 6.0] {
            let d = std_chi2_2(&RngStream::new(1, 2), n, v).unwrap();
            let (m, var) = mean_var(&d);
            // chi2(2)/2 - 1 is Exp(1) - 1: variance 1, fourth central moment 9
            let se_mean = (v / n as f64).sqrt();
            let se_var = v * ((9.0 - 1.0) / n as f64).sqrt();
            assert!(m.abs() < 5.0 * se_mean, "mean {m}");
            assert!((var - v).abs() < 5.0 * se_var, "var {var} vs {v}");
            let bound = -v.sqrt();
            assert!(d.iter().all(|&x| x >= bound));
        }
    }

    #[test]
    fn std_chi2_rejects_bad_variance() {
        assert!(std_chi2_2(&RngStream::new(1, 2), 3, 0.0).is_err());
    }

    #[test]
    fn uniform_support_and_bad_interval() {
        let d = uniform(&RngStream::new(5, 5), 10_000, -0.75, 0.75).unwrap();
        assert!(d.iter().all(|&x| (-0.75..0.75).contains(&x)));
        assert_eq!(
            uniform(&RngStream::new(5, 5), 1, 1.0, 1.0),
            Err(Error::BadInterval { a: 1.0, b: 1.0 })
        );
    }

    #[test]
    fn normal_moments() {
        let n = 100_000;
        let d = normal(&RngStream::new(11, 0), n);
        let (m, var) = mean_var(&d);
        assert!(m.abs() < 4.0 / (n as f64).sqrt());
        // Var of the sample variance of N(0,1) is 2/n.
        assert!((var - 1.0).abs() < 5.0 * (2.0 / n as f64).sqrt());
    }

    #[test]
    fn distinct_streams_uncorrelated() {
        let n = 100_000;
        let a = normal(&RngStream::new(3, 0), n);
        let b = normal(&RngStream::new(3, 1), n);
        let c = normal(&RngStream::new(3, 0).derive(1), n);
        for (u, v) in [(&a, &b), (&a, &c), (&b, &c)] {
            let r = u.iter().zip(v.iter()).map(|(x, y)| x * y).sum::<f64>() / n as f64;
            assert!(r.abs() < 0.02, "correlation {r}");
        }
    }
}
