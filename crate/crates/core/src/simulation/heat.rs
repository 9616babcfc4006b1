//! Decay of the linear fractional heat flow `∂t f + μΛ^α f = 0`.
//!
//! The data `f̂0(ξ) = |ξ|^{s0 - 1/2} exp(-|ξ|² w² / 2)` (mean removed) lies in
//! `Ḃ^{-s0}_{2,∞}(ℝ)`, so the flow decays like `t^{-(s1 + s0)/α}` in the
//! low-frequency part of `Ḃ^{s1}_{2,r}` and like `t^{-s0/α}` in `L²`. With
//! `s0 = 1/2` the data is a plain Gaussian. The box must be large compared to
//! `(μ t)^{1/α}` for the whole-space rates to show.

use crate::besov::{NormSpec, NormTrace, Part, Summation};
use crate::error::{Error, Result};
use crate::special::integrate;
use crate::spectral::{heat_semigroup, Grid, LpDecomp, SpectralField};
use num_complex::Complex64;
use std::f64::consts::PI;

/// One heat-decay experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct HeatDecaySpec {
    pub grid: Grid,
    pub alpha: f64,
    pub mu: f64,
    /// Gaussian width `w` of the data envelope.
    pub width: f64,
    pub s0: f64,
    pub s1: f64,
    /// Split index of the low-frequency norm.
    pub j0: i32,
    /// Summation of the low-frequency norm over blocks.
    pub summation: Summation,
    pub times: Vec<f64>,
}

/// Column names of [`heat_decay`], after `t`.
pub const HEAT_COLUMNS: [&str; 2] = ["l2", "low_besov"];

impl HeatDecaySpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 2.0) {
            return Err(Error::Parameter(format!(
                "alpha must lie in (0,2], got {}",
                self.alpha
            )));
        }
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(Error::Parameter(format!(
                "mu must be positive, got {}",
                self.mu
            )));
        }
        if !(self.width > 0.0 && self.width.is_finite()) {
            return Err(Error::Parameter(format!(
                "width must be positive, got {}",
                self.width
            )));
        }
        if self.grid.dim() != 1 {
            return Err(Error::Unsupported(
                "heat-decay data is built on 1D grids".into(),
            ));
        }
        if !(self.s0 > 0.0 && self.s0 <= self.grid.dim() as f64 / 2.0) {
            return Err(Error::Parameter(format!(
                "s0 must lie in (0, 1/2], got {}",
                self.s0
            )));
        }
        if !self.s1.is_finite() {
            return Err(Error::Parameter("s1 must be finite".into()));
        }
        if self.times.windows(2).any(|w| w[1] <= w[0])
            || self.times.first().is_some_and(|t| *t < 0.0)
        {
            return Err(Error::Parameter(
                "sample times must be nonnegative and increasing".into(),
            ));
        }
        self.low_norm().validate(&LpDecomp::new(self.grid))
    }

    pub fn low_norm(&self) -> NormSpec {
        NormSpec::Restricted {
            s: self.s1,
            r: self.summation,
            part: Part::Low,
            j0: self.j0,
        }
    }

    /// Whole-space profile `|f̂0(ξ)|`.
    pub fn profile(&self, xi: f64) -> f64 {
        if xi == 0.0 {
            return 0.0;
        }
        let half = self.grid.dim() as f64 / 2.0;
        xi.powf(self.s0 - half) * (-0.5 * (xi * self.width).powi(2)).exp()
    }

    /// Energy of `f̂0` on `[a, b] ⊂ [0, ∞)`, `∫ |f̂0|² dξ`.
    fn cell_energy(&self, a: f64, b: f64) -> Result<f64> {
        let f = |x: f64| self.profile(x).powi(2);
        if a > 0.0 {
            return integrate(f, a, b, 1e-13 * f(a).max(f(b)) * (b - a));
        }
        // ξ = v^m removes the ξ^{2 s0 - 1} endpoint singularity
        let m = 0.5 / self.s0;
        let g = |v: f64| {
            let x = v.powf(m);
            (-(x * self.width).powi(2)).exp() * m
        };
        integrate(g, 0.0, b.powf(1.0 / m), 1e-13 * m * b.powf(1.0 / m))
    }

    /// Periodic data matching the whole-space data cell by cell: mode `k`
    /// carries the energy of `f̂0` on `|ξ - ξ_k| < Δξ/2`, and the modes
    /// `k = ±1` also take the cell around `ξ = 0`, so that
    /// `‖f‖²_{L²} = (2π)^{-1} ∫ |f̂0|²` up to the truncated tail.
    pub fn initial(&self) -> Result<SpectralField> {
        let g = self.grid;
        let d = g.fundamental();
        let len = g.length();
        let nyq = g.nyquist();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); g.len()];
        for (i, c) in coeffs.iter_mut().enumerate() {
            let k = g.wavenumber(i);
            if k == 0 || k == nyq {
                continue;
            }
            let centre = k.unsigned_abs() as f64 * d;
            let lo = if k.abs() == 1 { 0.0 } else { centre - 0.5 * d };
            let energy = self.cell_energy(lo, centre + 0.5 * d)?;
            *c = Complex64::new((energy / (2.0 * PI * len)).sqrt(), 0.0);
        }
        SpectralField::new(g, vec![coeffs])
    }
}

/// Evolve the data exactly and record its `L²` and low-frequency norms.
pub fn heat_decay(spec: &HeatDecaySpec) -> Result<NormTrace> {
    spec.validate()?;
    let f0 = spec.initial()?;
    let lp = LpDecomp::new(spec.grid);
    let low = spec.low_norm();
    let mut trace = NormTrace::new(HEAT_COLUMNS.map(String::from).to_vec());
    for &t in &spec.times {
        let f = heat_semigroup(&f0, spec.alpha, spec.mu, t)?;
        let l2 = f.l2_norm();
        let besov = low.combine(lp.j_min(), &lp.block_norms(&f));
        trace.push(t, vec![l2, besov])?;
    }
    Ok(trace)
}
