use crate::besov::{NormSpec, Part, Summation};
use crate::error::{Error, Result};
use crate::model::{Representation, State};
use crate::spectral::{LpDecomp, SpectralField};

use super::config::DecaySpec;

/// Least-squares line through `(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayFit {
    /// Slope: the power-law exponent or the exponential rate.
    pub exponent: f64,
    pub intercept: f64,
    /// Coefficient of determination.
    pub r2: f64,
    pub samples: usize,
}

/// Minimum number of samples inside a fit window.
pub const MIN_FIT_SAMPLES: usize = 10;

fn fit_line(xs: &[f64], ys: &[f64]) -> DecayFit {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - intercept - slope * x;
            r * r
        })
        .sum();
    DecayFit {
        exponent: slope,
        intercept,
        r2: if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 },
        samples: xs.len(),
    }
}

fn windowed(times: &[f64], values: &[f64], window: (f64, f64)) -> Result<(Vec<f64>, Vec<f64>)> {
    if times.len() != values.len() {
        return Err(Error::Shape("times and values differ in length".into()));
    }
    let (a, b) = window;
    let mut ts = Vec::new();
    let mut vs = Vec::new();
    for (&t, &v) in times.iter().zip(values) {
        if t >= a && t <= b {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Data(format!("nonpositive value {v} at t = {t}")));
            }
            ts.push(t);
            vs.push(v.ln());
        }
    }
    if ts.len() < MIN_FIT_SAMPLES {
        return Err(Error::Data(format!(
            "fit window [{a}, {b}] holds {} samples, need {MIN_FIT_SAMPLES}",
            ts.len()
        )));
    }
    Ok((ts, vs))
}

/// Slope of `log(value)` against `log(1 + t)` over `window`.
pub fn decay_fit(times: &[f64], values: &[f64], window: (f64, f64)) -> Result<DecayFit> {
    let (ts, vs) = windowed(times, values, window)?;
    let xs: Vec<f64> = ts.iter().map(|t| t.ln_1p()).collect();
    Ok(fit_line(&xs, &vs))
}

/// Slope of `log(value)` against `t` over `window` (exponential rate).
pub fn exponential_fit(times: &[f64], values: &[f64], window: (f64, f64)) -> Result<DecayFit> {
    let (ts, vs) = windowed(times, values, window)?;
    Ok(fit_line(&ts, &vs))
}

/// Weighted decay functionals at time `t` for a `sigma_u` state:
///
/// * `Z^ℓ = t^s Σ_{j<=j0} 2^{j(s̄ + sα)} ‖(Δ̇_j σ, Δ̇_j u)‖`
/// * `Z^h = t^s (‖σ^h‖_{Ḃ^{N/2}} + ‖u^h‖_{Ḃ^{N/2+1-α}})`
pub fn z_norms_with(
    state: &State,
    t: f64,
    s: f64,
    s_bar: f64,
    alpha: f64,
    j0: i32,
) -> Result<(f64, f64)> {
    if state.representation() != Representation::SigmaU {
        return Err(Error::Parameter("z norms need a sigma_u state".into()));
    }
    if !(t >= 0.0) {
        return Err(Error::Parameter(format!(
            "time must be nonnegative, got {t}"
        )));
    }
    let sigma = state.scalar().to_spectral();
    let u = state.velocity().to_spectral();
    let pair = SpectralField::stack(&[sigma.clone(), u.clone()])?;
    let lp = LpDecomp::new(*sigma.grid());
    let j0 = j0.clamp(lp.j_min() - 1, lp.j_max() + 1);
    let half = sigma.grid().dim() as f64 / 2.0;
    let tw = if s == 0.0 { 1.0 } else { t.powf(s) };
    let low = NormSpec::Restricted {
        s: s_bar + s * alpha,
        r: Summation::Sum,
        part: Part::Low,
        j0,
    };
    let high = |s| NormSpec::Restricted {
        s,
        r: Summation::Sum,
        part: Part::High,
        j0,
    };
    let zl = low.combine(lp.j_min(), &lp.block_norms(&pair));
    let zh = high(half).combine(lp.j_min(), &lp.block_norms(&sigma))
        + high(half + 1.0 - alpha).combine(lp.j_min(), &lp.block_norms(&u));
    Ok((tw * zl, tw * zh))
}

/// [`z_norms_with`] at `s = (s1 + s0)/α`, `s̄ = -s0`, so that the low part
/// measures `Ḃ^{s1}`.
pub fn z_norms(state: &State, t: f64, spec: &DecaySpec, j0: i32) -> Result<(f64, f64)> {
    let s = (spec.s1() + spec.s0()) / spec.alpha();
    z_norms_with(state, t, s, -spec.s0(), spec.alpha(), j0)
}
