//! Fourier multipliers on periodic fields.
//!
//! Even symbols (`|ξ|^s`, the heat semigroup, the 2/3 filter) act on every
//! mode. Odd symbols (`iξ`, Riesz-type `iξ/|ξ|`) use the wavenumber with its
//! Nyquist components zeroed so that real input stays real.

use num_complex::Complex64;

use super::field::{Field, SpectralField};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Which derivative [`spectral_derivative`] applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Derivative {
    /// Scalar in, `dim` components out.
    Grad,
    /// `dim` components in, scalar out.
    Div,
    /// `∂_axis` applied to every component.
    Partial(usize),
}

/// `Λ^s` for arbitrary real `s`, mean mode annihilated.
pub fn lambda_power(f: &SpectralField, s: f64) -> SpectralField {
    let g = *f.grid();
    f.apply_real(|i| if i == 0 { 0.0 } else { g.xi_norm(i).powf(s) })
}

/// Fractional Laplacian `Λ^α = (-Δ)^{α/2}`, the multiplier `|ξ|^α`.
pub fn fractional_laplacian(f: &SpectralField, alpha: f64) -> Result<SpectralField> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::Parameter(format!(
            "fractional order must lie in (0,2), got {alpha}"
        )));
    }
    Ok(lambda_power(f, alpha))
}

pub fn spectral_derivative(f: &SpectralField, kind: Derivative) -> Result<SpectralField> {
    let g = *f.grid();
    let dim = g.dim();
    let partial = |comp: &[Complex64], axis: usize| -> Vec<Complex64> {
        comp.iter()
            .enumerate()
            .map(|(i, &z)| z * Complex64::new(0.0, g.odd_xi(i)[axis]))
            .collect()
    };
    match kind {
        Derivative::Grad => {
            if f.n_components() != 1 {
                return Err(Error::Shape("gradient needs a scalar field".into()));
            }
            let comps = (0..dim).map(|ax| partial(f.component(0), ax)).collect();
            SpectralField::new(g, comps)
        }
        Derivative::Div => {
            if f.n_components() != dim {
                return Err(Error::Shape(format!(
                    "divergence needs {dim} components, got {}",
                    f.n_components()
                )));
            }
            let mut out = vec![ZERO; g.len()];
            for ax in 0..dim {
                for (o, p) in out.iter_mut().zip(partial(f.component(ax), ax)) {
                    *o += p;
                }
            }
            SpectralField::new(g, vec![out])
        }
        Derivative::Partial(axis) => {
            if axis >= dim {
                return Err(Error::Shape(format!(
                    "axis {axis} out of range for dim {dim}"
                )));
            }
            let comps = f.components().iter().map(|c| partial(c, axis)).collect();
            SpectralField::new(g, comps)
        }
    }
}

fn require_vector(u: &SpectralField) -> Result<()> {
    let dim = u.grid().dim();
    if u.n_components() != dim {
        return Err(Error::Shape(format!(
            "expected a vector field with {dim} components, got {}",
            u.n_components()
        )));
    }
    Ok(())
}

/// Leray projector `ℙ = Id − ∇Δ^{-1}Div` onto divergence-free fields.
pub fn leray_project(u: &SpectralField) -> Result<SpectralField> {
    require_vector(u)?;
    let g = *u.grid();
    let dim = g.dim();
    let mut out = u.clone();
    for i in 0..g.len() {
        let xi = g.odd_xi(i);
        let n2: f64 = xi[..dim].iter().map(|x| x * x).sum();
        if n2 == 0.0 {
            continue;
        }
        let dot: Complex64 = (0..dim).map(|c| u.component(c)[i] * xi[c]).sum();
        for (c, x) in xi[..dim].iter().enumerate() {
            out.component_mut(c)[i] -= dot * (x / n2);
        }
    }
    Ok(out)
}

/// Compressible part `d = Λ^{-1} Div u`; mean mode set to zero.
pub fn lambda_inv_div(u: &SpectralField) -> Result<SpectralField> {
    require_vector(u)?;
    let g = *u.grid();
    let dim = g.dim();
    let data = (0..g.len())
        .map(|i| {
            let xi = g.odd_xi(i);
            let norm = xi[..dim].iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                return ZERO;
            }
            let dot: Complex64 = (0..dim).map(|c| u.component(c)[i] * xi[c]).sum();
            Complex64::new(0.0, 1.0) * dot / norm
        })
        .collect();
    SpectralField::new(g, vec![data])
}

/// Potential part rebuilt from `d`: returns `-∇Λ^{-1} d`, so that
/// `u = -∇Λ^{-1}(Λ^{-1}Div u) + ℙu`.
pub fn gradient_part(d: &SpectralField) -> Result<SpectralField> {
    if d.n_components() != 1 {
        return Err(Error::Shape("expected a scalar field".into()));
    }
    let g = *d.grid();
    let dim = g.dim();
    let comps = (0..dim)
        .map(|c| {
            (0..g.len())
                .map(|i| {
                    let xi = g.odd_xi(i);
                    let norm = xi[..dim].iter().map(|x| x * x).sum::<f64>().sqrt();
                    if norm == 0.0 {
                        ZERO
                    } else {
                        -Complex64::new(0.0, xi[c] / norm) * d.component(0)[i]
                    }
                })
                .collect()
        })
        .collect();
    SpectralField::new(g, comps)
}

/// Fractional heat semigroup `e^{-μ t Λ^α}`.
pub fn heat_semigroup(f: &SpectralField, alpha: f64, mu: f64, t: f64) -> Result<SpectralField> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Parameter(format!(
            "time must be nonnegative, got {t}"
        )));
    }
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::Parameter(format!("mu must be positive, got {mu}")));
    }
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::Parameter(format!(
            "fractional order must lie in (0,2], got {alpha}"
        )));
    }
    Ok(heat_multiplier_unchecked(f, alpha, mu * t))
}

pub(crate) fn heat_multiplier_unchecked(f: &SpectralField, alpha: f64, mu_t: f64) -> SpectralField {
    let g = *f.grid();
    f.apply_real(|i| (-mu_t * g.xi_norm(i).powf(alpha)).exp())
}

/// Whether a mode survives the 2/3 rule.
pub fn is_resolved(grid: &super::Grid, flat: usize) -> bool {
    let cut = grid.dealias_cutoff();
    let k = grid.multi_index(flat);
    (k[0].abs() as f64) <= cut && (k[1].abs() as f64) <= cut
}

/// 2/3-rule filter: zero every coefficient with some `|k_i| > n/3`.
pub fn dealias(f: &SpectralField) -> SpectralField {
    let g = *f.grid();
    f.apply_real(|i| if is_resolved(&g, i) { 1.0 } else { 0.0 })
}

/// Filter a physical field through the 2/3 rule.
pub fn dealias_physical(f: &Field) -> Field {
    dealias(&f.to_spectral()).to_physical()
}

/// Pseudospectral product of two fields with the 2/3 rule applied to the
/// result. One side must be scalar; the other may have any number of
/// components.
pub fn product(a: &SpectralField, b: &SpectralField) -> Result<SpectralField> {
    let pa = a.to_physical();
    let pb = b.to_physical();
    Ok(dealias(&physical_product(&pa, &pb)?.to_spectral()))
}

pub(crate) fn physical_product(a: &Field, b: &Field) -> Result<Field> {
    match (a.n_components(), b.n_components()) {
        (1, _) => b.times_scalar(a),
        (_, 1) => a.times_scalar(b),
        (x, y) => Err(Error::Shape(format!(
            "product needs a scalar factor, got {x} and {y} components"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;
    use std::f64::consts::PI;

    fn grid1(n: usize) -> Grid {
        Grid::new(1, n, 2.0 * PI).unwrap()
    }

    fn grid2(n: usize) -> Grid {
        Grid::new(2, n, 2.0 * PI).unwrap()
    }

    #[test]
    fn fractional_laplacian_eigenfunction() {
        let g = grid1(64);
        let f = Field::scalar_from_fn(g, |x| (2.0 * x[0]).sin()).to_spectral();
        let out = fractional_laplacian(&f, 1.5).unwrap().to_physical();
        let expect = Field::scalar_from_fn(g, |x| 2f64.powf(1.5) * (2.0 * x[0]).sin());
        assert!(out.sub(&expect).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn fractional_laplacian_two_modes() {
        let g = grid1(64);
        let f = Field::scalar_from_fn(g, |x| x[0].cos() + (4.0 * x[0]).cos()).to_spectral();
        let out = fractional_laplacian(&f, 1.2).unwrap().to_physical();
        // 4^1.2 from the scalar power
        let c = 5.278031643091577;
        assert!((4f64.powf(1.2) - c).abs() < 1e-12);
        let expect = Field::scalar_from_fn(g, |x| x[0].cos() + c * (4.0 * x[0]).cos());
        assert!(out.sub(&expect).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn fractional_laplacian_kills_constants_and_checks_order() {
        let g = grid2(16);
        let f = Field::constant(g, 1, 3.5).to_spectral();
        assert!(fractional_laplacian(&f, 1.0).unwrap().l2_norm() < 1e-14);
        assert!(fractional_laplacian(&f, 2.0).is_err());
        assert!(fractional_laplacian(&f, 0.0).is_err());
    }

    #[test]
    fn derivatives() {
        let g = grid1(32);
        let f = Field::scalar_from_fn(g, |x| (3.0 * x[0]).sin()).to_spectral();
        let d = spectral_derivative(&f, Derivative::Grad)
            .unwrap()
            .to_physical();
        let e = Field::scalar_from_fn(g, |x| 3.0 * (3.0 * x[0]).cos());
        assert!(d.sub(&e).unwrap().max_abs() < 1e-12);

        let g2 = grid2(32);
        let u = Field::vector_from_fn(g2, |x, c| x[c].sin()).to_spectral();
        let div = spectral_derivative(&u, Derivative::Div)
            .unwrap()
            .to_physical();
        let e = Field::scalar_from_fn(g2, |x| x[0].cos() + x[1].cos());
        assert!(div.sub(&e).unwrap().max_abs() < 1e-12);
        assert!(spectral_derivative(&f, Derivative::Div).is_ok()); // 1D scalar is a vector
        assert!(spectral_derivative(&u, Derivative::Grad).is_err());
        assert!(spectral_derivative(&u.extract(0), Derivative::Div).is_err());
    }

    #[test]
    fn nyquist_derivative_is_zero() {
        let g = grid1(16);
        let f = Field::scalar_from_fn(g, |x| (8.0 * x[0]).cos()).to_spectral();
        let d = spectral_derivative(&f, Derivative::Grad).unwrap();
        assert!(d.l2_norm() < 1e-14);
        // even multipliers act normally
        let l = lambda_power(&f, 1.0);
        assert!((l.l2_norm() - 8.0 * f.l2_norm()).abs() < 1e-12);
    }

    #[test]
    fn leray_kills_gradients_and_fixes_solenoidal() {
        let g = grid2(32);
        let grad = Field::vector_from_fn(g, |x, _| (x[0] + x[1]).cos()).to_spectral();
        assert!(leray_project(&grad).unwrap().mean_free().l2_norm() < 1e-12);
        let sol = Field::vector_from_fn(g, |x, c| {
            if c == 0 {
                -x[0].sin() * x[1].cos()
            } else {
                x[0].cos() * x[1].sin()
            }
        })
        .to_spectral();
        let p = leray_project(&sol).unwrap();
        assert!(p.sub(&sol).unwrap().l2_norm() < 1e-12);
    }

    #[test]
    fn leray_in_1d_removes_everything_but_the_mean() {
        let g = grid1(16);
        let u = Field::scalar_from_fn(g, |x| 0.5 + x[0].sin() + (7.0 * x[0]).cos()).to_spectral();
        let p = leray_project(&u).unwrap();
        assert!((p.mean(0) - 0.5).abs() < 1e-14);
        assert!(p.mean_free().l2_norm() < 1e-13);
    }

    #[test]
    fn heat_semigroup_single_mode() {
        let g = grid1(32);
        let f = Field::scalar_from_fn(g, |x| x[0].sin()).to_spectral();
        let out = heat_semigroup(&f, 1.5, 1.0, 2.0).unwrap().to_physical();
        let e = Field::scalar_from_fn(g, |x| (-2f64).exp() * x[0].sin());
        assert!(out.sub(&e).unwrap().max_abs() < 1e-14);
        assert_eq!(heat_semigroup(&f, 1.5, 1.0, 0.0).unwrap(), f);
        assert!(heat_semigroup(&f, 1.5, 1.0, -1.0).is_err());
    }

    #[test]
    fn dealias_behaviour() {
        let g = grid1(32);
        let band = Field::scalar_from_fn(g, |x| (10.0 * x[0]).cos() + x[0].sin()).to_spectral();
        assert!(dealias(&band).sub(&band).unwrap().l2_norm() < 1e-13);
        let nyq = Field::scalar_from_fn(g, |x| (16.0 * x[0]).cos()).to_spectral();
        assert!(dealias(&nyq).l2_norm() < 1e-15);
        let twice = dealias(&dealias(&nyq.add(&band).unwrap()));
        assert_eq!(twice, dealias(&nyq.add(&band).unwrap()));
    }
}
