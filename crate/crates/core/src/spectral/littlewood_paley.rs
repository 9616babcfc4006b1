//! Homogeneous Littlewood-Paley decomposition on a periodic grid.
//!
//! The cutoff is fixed in closed form so that independent implementations
//! agree to rounding:
//!
//! ```text
//! g(x)   = exp(-1/x) for x > 0, 0 otherwise
//! τ(r)   = (r - 3/4) / (4/3 - 3/4)
//! χ(r)   = 1                                  r <= 3/4
//!          g(1-τ) / (g(1-τ) + g(τ))           3/4 < r < 4/3
//!          0                                  r >= 4/3
//! φ(ξ)   = χ(|ξ|/2) - χ(|ξ|)
//! ```
//!
//! `φ` is supported in `3/4 <= |ξ| <= 8/3` and `Δ̇_j` is the multiplier
//! `φ(2^{-j} ξ)`. A grid resolves the dyadic indices
//! `j_min = floor(log2(2π/L)) - 1 ..= j_max = ceil(log2(π n /(3L))) + 1`;
//! blocks outside that range are identically zero.

use super::field::SpectralField;
use super::grid::Grid;

const LOW: f64 = 0.75;
const HIGH: f64 = 4.0 / 3.0;

fn glue(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// Smooth radial cutoff: 1 on `|ξ| <= 3/4`, 0 on `|ξ| >= 4/3`.
pub fn chi(r: f64) -> f64 {
    if r <= LOW {
        1.0
    } else if r >= HIGH {
        0.0
    } else {
        let t = (r - LOW) / (HIGH - LOW);
        let a = glue(1.0 - t);
        a / (a + glue(t))
    }
}

/// Annulus profile `φ(ξ) = χ(ξ/2) - χ(ξ)` as a function of `|ξ|`.
pub fn phi(r: f64) -> f64 {
    chi(0.5 * r) - chi(r)
}

/// Dyadic decomposition bound to one grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LpDecomp {
    grid: Grid,
    j_min: i32,
    j_max: i32,
}

impl LpDecomp {
    pub fn new(grid: Grid) -> Self {
        let l = grid.length();
        let n = grid.n() as f64;
        let j_min = (2.0 * std::f64::consts::PI / l).log2().floor() as i32 - 1;
        let j_max = (std::f64::consts::PI * n / (3.0 * l)).log2().ceil() as i32 + 1;
        LpDecomp { grid, j_min, j_max }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn j_min(&self) -> i32 {
        self.j_min
    }

    pub fn j_max(&self) -> i32 {
        self.j_max
    }

    pub fn range(&self) -> std::ops::RangeInclusive<i32> {
        self.j_min..=self.j_max
    }

    pub fn n_blocks(&self) -> usize {
        (self.j_max - self.j_min + 1) as usize
    }

    /// Weight `φ(2^{-j}ξ)`, zero outside the resolved range.
    pub fn block_weight(&self, j: i32, xi_norm: f64) -> f64 {
        if j < self.j_min || j > self.j_max || xi_norm == 0.0 {
            return 0.0;
        }
        phi(xi_norm * 2f64.powi(-j))
    }

    /// Weight of the low-pass `Ṡ_j = Σ_{k <= j-1} Δ̇_k`.
    pub fn low_pass_weight(&self, j: i32, xi_norm: f64) -> f64 {
        let top = (j - 1).min(self.j_max);
        (self.j_min..=top)
            .map(|k| self.block_weight(k, xi_norm))
            .sum()
    }

    /// Indices `j` whose annulus can contain `|ξ|` (at most two).
    pub fn blocks_containing(&self, xi_norm: f64) -> impl Iterator<Item = (i32, f64)> + '_ {
        let centre = if xi_norm > 0.0 {
            xi_norm.log2().floor() as i32
        } else {
            i32::MIN / 2
        };
        (centre - 2..=centre + 1).filter_map(move |j| {
            let w = self.block_weight(j, xi_norm);
            (w != 0.0).then_some((j, w))
        })
    }

    /// `Δ̇_j f`.
    pub fn block(&self, f: &SpectralField, j: i32) -> SpectralField {
        let g = *f.grid();
        f.apply_real(|i| self.block_weight(j, g.xi_norm(i)))
    }

    /// `Ṡ_j f = Σ_{k <= j-1} Δ̇_k f`.
    pub fn low_pass(&self, f: &SpectralField, j: i32) -> SpectralField {
        let g = *f.grid();
        f.apply_real(|i| self.low_pass_weight(j, g.xi_norm(i)))
    }

    /// `L²` norm of every block, indexed from `j_min`.
    pub fn block_norms(&self, f: &SpectralField) -> Vec<f64> {
        let g = f.grid();
        let mut acc = vec![0.0; self.n_blocks()];
        for i in 1..g.len() {
            let power: f64 = f.components().iter().map(|c| c[i].norm_sqr()).sum();
            if power == 0.0 {
                continue;
            }
            for (j, w) in self.blocks_containing(g.xi_norm(i)) {
                acc[(j - self.j_min) as usize] += w * w * power;
            }
        }
        let vol = g.volume();
        acc.into_iter().map(|s| (s * vol).sqrt()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Field;
    use std::f64::consts::PI;

    #[test]
    fn profile_support_and_values() {
        assert_eq!(phi(0.74), 0.0);
        assert_eq!(phi(2.7), 0.0);
        assert!(phi(1.0) > 0.0 && phi(2.0) > 0.0);
        assert_eq!(chi(0.5), 1.0);
        assert_eq!(chi(1.5), 0.0);
        // symmetric glue: midpoint of the transition is exactly 1/2
        assert!((chi(0.5 * (LOW + HIGH)) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn dyadic_range_for_unit_box() {
        let lp = LpDecomp::new(Grid::new(1, 256, 2.0 * PI).unwrap());
        assert_eq!((lp.j_min(), lp.j_max()), (-1, 7));
    }

    #[test]
    fn blocks_containing_matches_brute_force() {
        let lp = LpDecomp::new(Grid::new(1, 512, 7.0).unwrap());
        for step in 1..400 {
            let r = step as f64 * 0.37;
            let fast: Vec<(i32, f64)> = lp.blocks_containing(r).collect();
            let slow: Vec<(i32, f64)> = lp
                .range()
                .map(|j| (j, lp.block_weight(j, r)))
                .filter(|p| p.1 != 0.0)
                .collect();
            assert_eq!(fast, slow, "r = {r}");
        }
    }

    #[test]
    fn constant_has_no_blocks() {
        let g = Grid::new(2, 16, 2.0 * PI).unwrap();
        let lp = LpDecomp::new(g);
        let f = Field::constant(g, 1, 2.0).to_spectral();
        for j in lp.j_min() - 1..=lp.j_max() + 1 {
            assert_eq!(lp.block(&f, j).l2_norm(), 0.0);
        }
    }
}
