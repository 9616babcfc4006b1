use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Periodic box `[0, L)^dim` sampled with `n` points per axis.
///
/// Flat indices are row-major: in 2D the flat index of `(i0, i1)` is
/// `i0 * n + i1`, with axis 0 the `x` direction. The integer wavenumber of
/// FFT index `i` is `i` for `i < n/2` and `i - n` otherwise, so every axis
/// covers `[-n/2, n/2)` and `-n/2` is the unpaired Nyquist index.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    dim: usize,
    n: usize,
    length: f64,
}

impl Grid {
    pub fn new(dim: usize, n: usize, length: f64) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::Parameter(format!("dim must be 1 or 2, got {dim}")));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::Parameter(format!(
                "n must be a power of two >= 8, got {n}"
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::Parameter(format!(
                "box length must be positive and finite, got {length}"
            )));
        }
        Ok(Grid { dim, n, length })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Number of grid points, `n^dim`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    /// Volume of one grid cell, `(L/n)^dim`.
    pub fn cell_volume(&self) -> f64 {
        self.dx().powi(self.dim as i32)
    }

    /// Box volume `L^dim`.
    pub fn volume(&self) -> f64 {
        self.length.powi(self.dim as i32)
    }

    /// Lowest nonzero wavenumber magnitude, `2π/L`.
    pub fn fundamental(&self) -> f64 {
        2.0 * PI / self.length
    }

    pub fn nyquist(&self) -> i64 {
        -(self.n as i64 / 2)
    }

    /// Signed integer wavenumber of an FFT index along one axis.
    pub fn wavenumber(&self, i: usize) -> i64 {
        let n = self.n as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// Per-axis FFT indices of a flat index (the unused axis is 0 in 1D).
    pub fn axis_indices(&self, flat: usize) -> [usize; 2] {
        if self.dim == 1 {
            [flat, 0]
        } else {
            [flat / self.n, flat % self.n]
        }
    }

    /// Integer multi-index `k` of a flat index.
    pub fn multi_index(&self, flat: usize) -> [i64; 2] {
        let [a, b] = self.axis_indices(flat);
        if self.dim == 1 {
            [self.wavenumber(a), 0]
        } else {
            [self.wavenumber(a), self.wavenumber(b)]
        }
    }

    /// Physical wavenumber `ξ = 2π k / L`.
    pub fn freq(&self, k: [i64; 2]) -> [f64; 2] {
        let f = self.fundamental();
        [f * k[0] as f64, f * k[1] as f64]
    }

    pub fn xi(&self, flat: usize) -> [f64; 2] {
        self.freq(self.multi_index(flat))
    }

    pub fn xi_norm(&self, flat: usize) -> f64 {
        let [a, b] = self.xi(flat);
        a.hypot(b)
    }

    /// Wavenumber with Nyquist components zeroed: the symbol used by every
    /// odd multiplier so that real data stays real.
    pub fn odd_xi(&self, flat: usize) -> [f64; 2] {
        let k = self.multi_index(flat);
        let ny = self.nyquist();
        let f = self.fundamental();
        let c = |kk: i64| if kk == ny { 0.0 } else { f * kk as f64 };
        [c(k[0]), c(k[1])]
    }

    /// Flat index of the negated multi-index (`-k` taken modulo `n`).
    pub fn negated(&self, flat: usize) -> usize {
        let n = self.n;
        let [a, b] = self.axis_indices(flat);
        let na = (n - a) % n;
        if self.dim == 1 {
            na
        } else {
            na * n + (n - b) % n
        }
    }

    /// Physical coordinates of a grid point.
    pub fn coords(&self, flat: usize) -> [f64; 2] {
        let [a, b] = self.axis_indices(flat);
        let h = self.dx();
        if self.dim == 1 {
            [a as f64 * h, 0.0]
        } else {
            [a as f64 * h, b as f64 * h]
        }
    }

    /// Same sampling on a box of side `length`.
    pub fn with_length(&self, length: f64) -> Result<Self> {
        Grid::new(self.dim, self.n, length)
    }

    /// Largest integer wavenumber kept by the 2/3 rule.
    pub fn dealias_cutoff(&self) -> f64 {
        self.n as f64 / 3.0
    }

    /// Shape error unless both grids are identical.
    pub fn ensure_same(&self, other: &Grid) -> Result<()> {
        if self != other {
            return Err(Error::Shape(format!(
                "grid mismatch: {self:?} vs {other:?}"
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(Grid::new(1, 6, 1.0).is_err());
        assert!(Grid::new(1, 4, 1.0).is_err());
        assert!(Grid::new(3, 8, 1.0).is_err());
        assert!(Grid::new(2, 16, 0.0).is_err());
        assert!(Grid::new(2, 16, 1.0).is_ok());
    }

    #[test]
    fn freq_is_odd_except_nyquist() {
        let g = Grid::new(2, 16, 3.0).unwrap();
        assert_eq!(g.xi(0), [0.0, 0.0]);
        for flat in 0..g.len() {
            let k = g.multi_index(flat);
            let m = g.multi_index(g.negated(flat));
            for ax in 0..2 {
                if k[ax] == g.nyquist() {
                    assert_eq!(m[ax], g.nyquist());
                } else {
                    assert_eq!(m[ax], -k[ax]);
                }
            }
        }
    }

    #[test]
    fn wavenumber_range() {
        let g = Grid::new(1, 8, 2.0 * PI).unwrap();
        let ks: Vec<i64> = (0..8).map(|i| g.wavenumber(i)).collect();
        assert_eq!(ks, vec![0, 1, 2, 3, -4, -3, -2, -1]);
        assert_eq!(g.xi(3), [3.0, 0.0]);
    }
}
