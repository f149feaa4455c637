//! Seeded random constant Hermitian metrics: positive diagonal rationals
//! followed by a congruence with a unipotent Gaussian-integer matrix.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hermitian::HermitianMetric;
use crate::linalg::Matrix;
use crate::scalar::{Gauss, Rational};

pub struct MetricSampler {
    rng: ChaCha8Rng,
}

impl MetricSampler {
    pub fn new(seed: u64) -> Self {
        MetricSampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// `h = U* D U` with `D` diagonal in `[1/3, 5]` and `U` unit upper triangular.
    pub fn sample(&mut self, n: usize) -> HermitianMetric {
        let mut d = Matrix::zeros(n, n);
        for j in 0..n {
            let num: i64 = self.rng.gen_range(1..=5);
            let den: i64 = self.rng.gen_range(1..=3);
            d[(j, j)] = Gauss::real(Rational::new(num.into(), den.into()));
        }
        let mut u = Matrix::identity(n);
        for i in 0..n {
            for j in i + 1..n {
                if self.rng.gen_bool(0.7) {
                    let re: i64 = self.rng.gen_range(-2..=2);
                    let im: i64 = self.rng.gen_range(-2..=2);
                    u[(i, j)] = Gauss::from_parts(re, 1, im, 1);
                }
            }
        }
        let h = u.adjoint().mul(&d).mul(&u);
        HermitianMetric::constant(h).expect("congruent to a positive diagonal matrix")
    }
}

pub fn sample_metrics(n: usize, count: usize, seed: u64) -> Vec<HermitianMetric> {
    let mut s = MetricSampler::new(seed);
    (0..count).map(|_| s.sample(n)).collect()
}
