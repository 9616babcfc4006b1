use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::grid::Grid;
use crate::error::{Error, Result};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plans(n: usize) -> (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>) {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        (p.plan_fft_forward(n), p.plan_fft_inverse(n))
    })
}

/// In-place unnormalized transform of one component along every axis.
fn transform(grid: &Grid, data: &mut [Complex64], inverse: bool) {
    let n = grid.n();
    let (fwd, inv) = plans(n);
    let plan = if inverse { inv } else { fwd };
    if grid.dim() == 1 {
        plan.process(data);
        return;
    }
    // axis 1 is contiguous
    plan.process(data);
    let mut column = vec![Complex64::new(0.0, 0.0); n];
    for col in 0..n {
        for (row, c) in column.iter_mut().enumerate() {
            *c = data[row * n + col];
        }
        plan.process(&mut column);
        for (row, c) in column.iter().enumerate() {
            data[row * n + col] = *c;
        }
    }
}

/// Real samples of a scalar (one component) or vector (`dim` components)
/// field on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    grid: Grid,
    comps: Vec<Vec<f64>>,
}

/// Fourier coefficients of a field: the coefficient at `k` is
/// `n^{-dim} Σ_x f(x) e^{-iξ·x}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    comps: Vec<Vec<Complex64>>,
}

impl Field {
    pub fn new(grid: Grid, comps: Vec<Vec<f64>>) -> Result<Self> {
        if comps.is_empty() {
            return Err(Error::Shape("field needs at least one component".into()));
        }
        if let Some(c) = comps.iter().find(|c| c.len() != grid.len()) {
            return Err(Error::Shape(format!(
                "component has {} samples, grid has {}",
                c.len(),
                grid.len()
            )));
        }
        Ok(Field { grid, comps })
    }

    pub fn zeros(grid: Grid, components: usize) -> Self {
        Field {
            grid,
            comps: vec![vec![0.0; grid.len()]; components],
        }
    }

    pub fn constant(grid: Grid, components: usize, value: f64) -> Self {
        Field {
            grid,
            comps: vec![vec![value; grid.len()]; components],
        }
    }

    pub fn scalar_from_fn(grid: Grid, f: impl Fn([f64; 2]) -> f64) -> Self {
        let data = (0..grid.len()).map(|i| f(grid.coords(i))).collect();
        Field {
            grid,
            comps: vec![data],
        }
    }

    pub fn vector_from_fn(grid: Grid, f: impl Fn([f64; 2], usize) -> f64) -> Self {
        let comps = (0..grid.dim())
            .map(|c| (0..grid.len()).map(|i| f(grid.coords(i), c)).collect())
            .collect();
        Field { grid, comps }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn n_components(&self) -> usize {
        self.comps.len()
    }

    pub fn component(&self, c: usize) -> &[f64] {
        &self.comps[c]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [f64] {
        &mut self.comps[c]
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.comps
    }

    pub fn into_components(self) -> Vec<Vec<f64>> {
        self.comps
    }

    /// Scalar field holding component `c`.
    pub fn extract(&self, c: usize) -> Field {
        Field {
            grid: self.grid,
            comps: vec![self.comps[c].clone()],
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field {
            grid: self.grid,
            comps: self
                .comps
                .iter()
                .map(|c| c.iter().map(|&v| f(v)).collect())
                .collect(),
        }
    }

    pub fn scaled(&self, s: f64) -> Field {
        self.map(|v| s * v)
    }

    /// Componentwise combination of two fields with identical shape.
    pub fn zip_with(&self, other: &Field, f: impl Fn(f64, f64) -> f64) -> Result<Field> {
        self.grid.ensure_same(&other.grid)?;
        if self.n_components() != other.n_components() {
            return Err(Error::Shape(format!(
                "component mismatch: {} vs {}",
                self.n_components(),
                other.n_components()
            )));
        }
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect())
            .collect();
        Ok(Field {
            grid: self.grid,
            comps,
        })
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Multiply every component pointwise by a scalar field (no dealiasing).
    pub fn times_scalar(&self, s: &Field) -> Result<Field> {
        self.grid.ensure_same(&s.grid)?;
        if s.n_components() != 1 {
            return Err(Error::Shape("multiplier must be scalar".into()));
        }
        let w = &s.comps[0];
        Ok(Field {
            grid: self.grid,
            comps: self
                .comps
                .iter()
                .map(|c| c.iter().zip(w).map(|(a, b)| a * b).collect())
                .collect(),
        })
    }

    /// `L²` norm over the box, summed over components.
    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.comps.iter().flatten().map(|v| v * v).sum();
        (s * self.grid.cell_volume()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.comps.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min_value(&self) -> f64 {
        self.comps
            .iter()
            .flatten()
            .fold(f64::INFINITY, |m, &v| m.min(v))
    }

    /// Box integral of component `c`.
    pub fn integral(&self, c: usize) -> f64 {
        self.comps[c].iter().sum::<f64>() * self.grid.cell_volume()
    }

    pub fn is_finite(&self) -> bool {
        self.comps.iter().flatten().all(|v| v.is_finite())
    }

    pub fn to_spectral(&self) -> SpectralField {
        let norm = 1.0 / self.grid.len() as f64;
        let comps = self
            .comps
            .iter()
            .map(|c| {
                let mut buf: Vec<Complex64> = c.iter().map(|&v| Complex64::new(v, 0.0)).collect();
                transform(&self.grid, &mut buf, false);
                buf.iter_mut().for_each(|z| *z *= norm);
                buf
            })
            .collect();
        SpectralField {
            grid: self.grid,
            comps,
        }
    }
}

impl SpectralField {
    pub fn new(grid: Grid, comps: Vec<Vec<Complex64>>) -> Result<Self> {
        if comps.is_empty() {
            return Err(Error::Shape("field needs at least one component".into()));
        }
        if comps.iter().any(|c| c.len() != grid.len()) {
            return Err(Error::Shape("component length differs from grid".into()));
        }
        Ok(SpectralField { grid, comps })
    }

    pub fn zeros(grid: Grid, components: usize) -> Self {
        SpectralField {
            grid,
            comps: vec![vec![Complex64::new(0.0, 0.0); grid.len()]; components],
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn n_components(&self) -> usize {
        self.comps.len()
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        &self.comps[c]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [Complex64] {
        &mut self.comps[c]
    }

    pub fn components(&self) -> &[Vec<Complex64>] {
        &self.comps
    }

    pub fn extract(&self, c: usize) -> SpectralField {
        SpectralField {
            grid: self.grid,
            comps: vec![self.comps[c].clone()],
        }
    }

    /// Stack scalar fields into one multi-component field.
    pub fn stack(parts: &[SpectralField]) -> Result<SpectralField> {
        let first = parts
            .first()
            .ok_or_else(|| Error::Shape("nothing to stack".into()))?;
        let mut comps = Vec::new();
        for p in parts {
            first.grid.ensure_same(&p.grid)?;
            comps.extend(p.comps.iter().cloned());
        }
        Ok(SpectralField {
            grid: first.grid,
            comps,
        })
    }

    pub fn to_physical(&self) -> Field {
        let comps = self
            .comps
            .iter()
            .map(|c| {
                let mut buf = c.clone();
                transform(&self.grid, &mut buf, true);
                buf.into_iter().map(|z| z.re).collect()
            })
            .collect();
        Field {
            grid: self.grid,
            comps,
        }
    }

    /// Apply a multiplier that depends only on the mode (same for every
    /// component).
    pub fn apply(&self, symbol: impl Fn(usize) -> Complex64) -> SpectralField {
        let table: Vec<Complex64> = (0..self.grid.len()).map(&symbol).collect();
        SpectralField {
            grid: self.grid,
            comps: self
                .comps
                .iter()
                .map(|c| c.iter().zip(&table).map(|(a, m)| a * m).collect())
                .collect(),
        }
    }

    /// Real multiplier variant of [`SpectralField::apply`].
    pub fn apply_real(&self, symbol: impl Fn(usize) -> f64) -> SpectralField {
        self.apply(|i| Complex64::new(symbol(i), 0.0))
    }

    pub fn scaled(&self, s: f64) -> SpectralField {
        self.apply_real(|_| s)
    }

    pub fn zip_with(
        &self,
        other: &SpectralField,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<SpectralField> {
        self.grid.ensure_same(&other.grid)?;
        if self.n_components() != other.n_components() {
            return Err(Error::Shape(format!(
                "component mismatch: {} vs {}",
                self.n_components(),
                other.n_components()
            )));
        }
        Ok(SpectralField {
            grid: self.grid,
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect())
                .collect(),
        })
    }

    pub fn add(&self, other: &SpectralField) -> Result<SpectralField> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SpectralField) -> Result<SpectralField> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Mean value of component `c` (the `k = 0` coefficient).
    pub fn mean(&self, c: usize) -> f64 {
        self.comps[c][0].re
    }

    /// Copy with the mean mode of every component removed.
    pub fn mean_free(&self) -> SpectralField {
        let mut out = self.clone();
        for c in &mut out.comps {
            c[0] = Complex64::new(0.0, 0.0);
        }
        out
    }

    /// `L²` norm over the box via Plancherel: `(L^dim Σ_k |coef(k)|²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.comps.iter().flatten().map(|z| z.norm_sqr()).sum();
        (s * self.grid.volume()).sqrt()
    }

    /// Real `L²` inner product `(f | g)` over the box.
    pub fn inner(&self, other: &SpectralField) -> Result<f64> {
        self.grid.ensure_same(&other.grid)?;
        if self.n_components() != other.n_components() {
            return Err(Error::Shape("component mismatch in inner product".into()));
        }
        let s: f64 = self
            .comps
            .iter()
            .zip(&other.comps)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x * y.conj()).re))
            .sum();
        Ok(s * self.grid.volume())
    }

    pub fn is_finite(&self) -> bool {
        self.comps
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn single_mode_coefficients() {
        let g = Grid::new(1, 16, 2.0 * PI).unwrap();
        let f = Field::scalar_from_fn(g, |x| (3.0 * x[0]).cos());
        let s = f.to_spectral();
        assert!((s.component(0)[3].re - 0.5).abs() < 1e-14);
        assert!((s.component(0)[13].re - 0.5).abs() < 1e-14);
        assert!(s.component(0)[0].norm() < 1e-14);
    }

    #[test]
    fn round_trip_2d() {
        let g = Grid::new(2, 16, 1.7).unwrap();
        let f = Field::vector_from_fn(g, |x, c| (x[0] * 2.0 + c as f64).sin() * x[1].cos() + 0.3);
        let back = f.to_spectral().to_physical();
        let err = back.sub(&f).unwrap().max_abs();
        assert!(err < 1e-13, "{err}");
    }

    #[test]
    fn plancherel_matches_physical() {
        let g = Grid::new(2, 32, 3.0).unwrap();
        let f = Field::scalar_from_fn(g, |x| (x[0] * x[1]).sin() + x[0]);
        let lhs = f.to_spectral().l2_norm();
        let rhs = f.l2_norm();
        assert!((lhs - rhs).abs() <= 1e-12 * rhs);
    }

    #[test]
    fn shape_errors() {
        let g = Grid::new(1, 8, 1.0).unwrap();
        assert!(Field::new(g, vec![vec![0.0; 7]]).is_err());
        let a = Field::zeros(g, 1);
        let b = Field::zeros(g, 2);
        assert!(a.add(&b).is_err());
    }
}
