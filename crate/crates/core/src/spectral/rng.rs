//! Seeded random band-limited fields with small rational coefficients,
//! so every reported residual is reproducible.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::spectral::torus::{Freq, TorusField};

pub struct FieldSampler {
    rng: ChaCha8Rng,
}

impl FieldSampler {
    pub fn new(seed: u64) -> Self {
        FieldSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn small_rational(&mut self) -> f64 {
        let num = self.rng.gen_range(-16i64..=16);
        let den = self.rng.gen_range(1i64..=8);
        num as f64 / den as f64
    }

    /// A real band-limited field: `terms` random frequencies supported on
    /// the listed axes with entries in `[-kmax, kmax]`, coefficients with
    /// denominator at most 8, conjugate-symmetrized.
    pub fn random_real_field(
        &mut self,
        dim: usize,
        degree: usize,
        kmax: i32,
        axes: &[usize],
        terms: usize,
    ) -> TorusField {
        let mut f = TorusField::zero(dim, degree, kmax);
        let comp_len = f.comp_len();
        for _ in 0..terms {
            let mut k: Freq = vec![0; dim];
            for &ax in axes {
                k[ax] = self.rng.gen_range(-kmax..=kmax);
            }
            let mut comps = vec![Complex64::new(0.0, 0.0); comp_len];
            let picks = self.rng.gen_range(1..=3.min(comp_len));
            for _ in 0..picks {
                let pos = self.rng.gen_range(0..comp_len);
                comps[pos] += Complex64::new(self.small_rational(), self.small_rational());
            }
            f.add_mode(k, comps);
        }
        f.symmetrize_real();
        f
    }
}
