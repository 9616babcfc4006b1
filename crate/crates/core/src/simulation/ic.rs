use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::model::{rho_from_sigma, ModelParams, Representation, State};
use crate::spectral::{is_resolved, Field, Grid, SpectralField};

use super::config::{IcSpec, Preset};

fn normalize(f: Field, amplitude: f64) -> Field {
    let m = f.max_abs();
    if m == 0.0 {
        f
    } else {
        f.scaled(amplitude / m)
    }
}

fn gaussian(grid: Grid, width: f64) -> Field {
    let l = grid.length();
    let c = 0.5 * l;
    let dim = grid.dim();
    Field::scalar_from_fn(grid, |x| {
        // nearest periodic images only; the width is a small fraction of L
        let mut total = 1.0;
        for &xa in x.iter().take(dim) {
            let axis: f64 = [-l, 0.0, l]
                .iter()
                .map(|shift| {
                    let d = xa - c + shift;
                    (-d * d / (2.0 * width * width)).exp()
                })
                .sum();
            total *= axis;
        }
        total
    })
}

fn random_smooth(grid: Grid, rng: &mut ChaCha8Rng) -> Field {
    let decay = -(grid.dim() as f64 / 2.0 + 2.0);
    let coeffs: Vec<Complex64> = (0..grid.len())
        .map(|i| {
            let re: f64 = rng.gen_range(-1.0..1.0);
            let im: f64 = rng.gen_range(-1.0..1.0);
            if i == 0 || !is_resolved(&grid, i) {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(re, im) * grid.xi_norm(i).powf(decay)
            }
        })
        .collect();
    SpectralField::new(grid, vec![coeffs])
        .expect("coefficient count matches grid")
        .to_physical()
}

/// `(σ, u)` of the preset, before conversion to the requested representation.
pub fn initial_sigma_u(grid: Grid, ic: &IcSpec) -> (Field, Field) {
    let a = ic.amplitude;
    let dim = grid.dim();
    match ic.preset {
        Preset::GaussianBump => {
            let g = gaussian(grid, ic.width.unwrap_or(grid.length() / 16.0));
            let g = normalize(g, a);
            let comps = vec![g.component(0).to_vec(); dim];
            let u = Field::new(grid, comps).expect("shape matches grid");
            (g, u)
        }
        Preset::RandomSmooth => {
            let mut rng = ChaCha8Rng::seed_from_u64(ic.seed);
            let sigma = normalize(random_smooth(grid, &mut rng), a);
            let comps = (0..dim)
                .map(|_| {
                    normalize(random_smooth(grid, &mut rng), a)
                        .into_components()
                        .remove(0)
                })
                .collect();
            (sigma, Field::new(grid, comps).expect("shape matches grid"))
        }
        Preset::SingleMode => {
            let k = grid.fundamental() * ic.mode as f64;
            let sigma = Field::scalar_from_fn(grid, |x| a * (k * x[0]).cos());
            let u =
                Field::vector_from_fn(grid, |x, c| if c == 0 { a * (k * x[0]).sin() } else { 0.0 });
            (sigma, u)
        }
    }
}

pub fn initial_state(
    grid: Grid,
    ic: &IcSpec,
    params: &ModelParams,
    repr: Representation,
) -> Result<State> {
    let (sigma, u) = initial_sigma_u(grid, ic);
    let scalar = match repr {
        Representation::SigmaU => sigma,
        Representation::RhoU => rho_from_sigma(&sigma, params)?,
    };
    State::new(repr, scalar, u, 0.0)
}
