#![allow(dead_code)]

use ealign::spectral::{Grid, SpectralField};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Real field with random coefficients on `0 < max|k_i| <= kmax`.
pub fn random_band_limited(grid: Grid, components: usize, kmax: i64, seed: u64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut comps = vec![vec![Complex64::new(0.0, 0.0); grid.len()]; components];
    for comp in comps.iter_mut() {
        for i in 0..grid.len() {
            let k = grid.multi_index(i);
            let kmax_i = k[0].abs().max(k[1].abs());
            if kmax_i == 0 || kmax_i > kmax {
                continue;
            }
            let j = grid.negated(i);
            if j < i {
                continue;
            }
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            if j == i {
                comp[i] = Complex64::new(z.re, 0.0);
            } else {
                comp[i] = z;
                comp[j] = z.conj();
            }
        }
    }
    SpectralField::new(grid, comps).unwrap()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
