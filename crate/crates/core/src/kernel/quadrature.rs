use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::geometry::{normalization_constant, volume_and_measure_density};
use crate::algebra::{DiskPoint, JacobiCSPoint};
use crate::{Error, Result, Weight};

/// Samples per independently seeded batch.
pub const BATCH_SIZE: u64 = 1 << 14;

/// Monte Carlo estimate of a scalar product.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureReport {
    pub value_re: f64,
    pub value_im: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

impl QuadratureReport {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.value_re, self.value_im)
    }

    /// True when `expected` lies within `sigmas` standard errors.
    pub fn agrees_with(&self, expected: Complex64, sigmas: f64) -> bool {
        (self.value() - expected).norm() <= sigmas * self.stderr
    }

    /// True when the standard error is below `tol`.
    pub fn meets(&self, tol: f64) -> bool {
        self.stderr <= tol
    }
}

#[derive(Debug, Clone, Copy)]
struct Moments {
    n: u64,
    mean: Complex64,
    m2: f64,
}

impl Moments {
    fn empty() -> Self {
        Moments {
            n: 0,
            mean: Complex64::new(0.0, 0.0),
            m2: 0.0,
        }
    }

    fn push(&mut self, v: Complex64) {
        self.n += 1;
        let d = v - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += (d.conj() * (v - self.mean)).re;
    }

    fn merge(self, o: Moments) -> Moments {
        if self.n == 0 {
            return o;
        }
        if o.n == 0 {
            return self;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Moments {
            n,
            mean: self.mean + d * (o.n as f64 / n as f64),
            m2: self.m2 + o.m2 + d.norm_sqr() * (self.n as f64 * o.n as f64 / n as f64),
        }
    }
}

/// Proposal for the importance sampler. `w` has density
/// `(a+1)/pi (1 - |w|^2)^a`; given `w = r e^{i phi}`, `z` is Gaussian along
/// the axes `e^{i phi/2}` and `i e^{i phi/2}` with variances `1 - r` and
/// `1 + r`, twice those of the integrand's Gaussian factor. Returns the point
/// and the proposal density.
///
/// The squared weight then behaves like `(1 - |w|^2)^{4k - 5 - a}`, so the
/// variance is finite for `-1 < a < 4k - 4`; the midpoint `2k - 5/2` is used.
fn sample_proposal<R: Rng>(rng: &mut R, a: f64) -> (JacobiCSPoint, f64) {
    let u: f64 = 1.0 - rng.random::<f64>();
    let p = u.powf(1.0 / (a + 1.0));
    let r = (1.0 - p).max(0.0).sqrt();
    let phi = 2.0 * std::f64::consts::PI * rng.random::<f64>();
    let w = Complex64::from_polar(r, phi);
    let disk = DiskPoint::with_defect(w, p).unwrap_or_else(|_| DiskPoint::origin());
    let xi1: f64 = rng.sample(StandardNormal);
    let xi2: f64 = rng.sample(StandardNormal);
    // 1 - r = p / (1 + r), and (1 - r)(1 + r) = p
    let sd1 = (p / (1.0 + r)).sqrt();
    let sd2 = (1.0 + r).sqrt();
    let z = Complex64::from_polar(1.0, phi / 2.0) * Complex64::new(sd1 * xi1, sd2 * xi2);
    let qw = (a + 1.0) / std::f64::consts::PI * p.powf(a);
    let qz = (-(xi1 * xi1 + xi2 * xi2) / 2.0).exp() / (2.0 * std::f64::consts::PI * p.sqrt());
    (JacobiCSPoint::from_parts(z, disk), qw * qz)
}

/// Monte Carlo value of `(f_a, f_b) = Lambda ∫ conj(f_a) f_b / K(x; conj x) dnu`.
///
/// Importance sampled: nothing about `Lambda` or the measure is built into
/// the proposal. Batches of [`BATCH_SIZE`] samples use their own ChaCha stream derived from
/// `seed`, so the result does not depend on the number of threads.
pub fn inner_product_quadrature<FA, FB>(
    fa: FA,
    fb: FB,
    k: &Weight,
    samples: u64,
    seed: u64,
) -> Result<QuadratureReport>
where
    FA: Fn(&JacobiCSPoint) -> Complex64 + Sync,
    FB: Fn(&JacobiCSPoint) -> Complex64 + Sync,
{
    if samples < 2 {
        return Err(Error::InvalidArgument(
            "at least two samples are needed".into(),
        ));
    }
    let lambda = normalization_constant(k)?;
    let a = 2.0 * k.k() - 2.5;
    let batches = samples.div_ceil(BATCH_SIZE);
    let parts: Vec<Moments> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let count = BATCH_SIZE.min(samples - b * BATCH_SIZE);
            let mut m = Moments::empty();
            for _ in 0..count {
                let (x, q) = sample_proposal(&mut rng, a);
                let d = volume_and_measure_density(&x, k);
                let weight = lambda * d.weight * d.dnu / q;
                m.push(fa(&x).conj() * fb(&x) * weight);
            }
            m
        })
        .collect();
    let total = parts.into_iter().fold(Moments::empty(), Moments::merge);
    let var = total.m2 / (total.n - 1) as f64;
    let stderr = (var / total.n as f64).sqrt();
    Ok(QuadratureReport {
        value_re: total.mean.re,
        value_im: total.mean.im,
        stderr,
        samples: total.n,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_function_has_unit_norm() {
        let k = Weight::strict(1.0).unwrap();
        let one = |_: &JacobiCSPoint| Complex64::new(1.0, 0.0);
        let r = inner_product_quadrature(one, one, &k, 200_000, 7).unwrap();
        assert!(r.agrees_with(Complex64::new(1.0, 0.0), 4.0), "{r:?}");
        assert!(r.stderr < 0.02, "{r:?}");
    }

    #[test]
    fn sampler_moments() {
        let k = Weight::strict(1.5).unwrap();
        let z2 = |x: &JacobiCSPoint| Complex64::new(x.z.norm_sqr(), 0.0);
        let one = |_: &JacobiCSPoint| Complex64::new(1.0, 0.0);
        let r = inner_product_quadrature(one, z2, &k, 200_000, 3).unwrap();
        assert!(r.agrees_with(Complex64::new(1.0, 0.0), 4.0), "{r:?}");
    }

    #[test]
    fn reproducible_under_seed() {
        let k = Weight::strict(1.0).unwrap();
        let f = |x: &JacobiCSPoint| x.z + x.w();
        let a = inner_product_quadrature(f, f, &k, 50_000, 11).unwrap();
        let b = inner_product_quadrature(f, f, &k, 50_000, 11).unwrap();
        assert_eq!(a, b);
        let c = inner_product_quadrature(f, f, &k, 50_000, 12).unwrap();
        assert_ne!(a.value_re, c.value_re);
    }
}
