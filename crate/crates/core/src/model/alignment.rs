use crate::error::{Error, Result};
use crate::special::{hurwitz_zeta, zeta};
use crate::spectral::{
    fractional_laplacian, product, spectral_derivative, Derivative, Field, SpectralField,
};

/// `Λ^α(u g) - u Λ^α g` with dealiased products; `g` must be scalar.
pub fn alignment_commutator(
    u: &SpectralField,
    g: &SpectralField,
    alpha: f64,
) -> Result<SpectralField> {
    u.grid().ensure_same(g.grid())?;
    if g.n_components() != 1 {
        return Err(Error::Shape("commutator weight must be scalar".into()));
    }
    let ug = fractional_laplacian(&product(u, g)?, alpha)?;
    let lg = fractional_laplacian(g, alpha)?;
    ug.sub(&product(u, &lg)?)
}

/// Largest grid accepted by [`alignment_direct`].
pub const DIRECT_MAX_N: usize = 512;

/// Quadrature of `ρ(x) ∫ (u(y) - u(x)) ρ(y) |x - y|^{-1-α} dy` on the
/// periodic line, with the kernel summed over all periodic images.
///
/// The singular integral is evaluated with the rectangle rule on the
/// symmetric integrand, plus the leading endpoint correction
/// `ζ(α-1) b h^{2-α}` where `b` is the curvature of the integrand at the
/// singularity (taken from spectral derivatives). The remaining error is
/// `O(h^{4-α})`. With this unit kernel the result equals
/// `-ρ [Λ^α, u] ρ / |c_{α,1}|`.
pub fn alignment_direct(rho: &Field, u: &Field, alpha: f64) -> Result<Field> {
    let grid = *rho.grid();
    grid.ensure_same(u.grid())?;
    if grid.dim() != 1 {
        return Err(Error::Unsupported(
            "direct alignment quadrature is 1D only".into(),
        ));
    }
    if grid.n() > DIRECT_MAX_N {
        return Err(Error::Parameter(format!(
            "direct quadrature limited to n <= {DIRECT_MAX_N}, got {}",
            grid.n()
        )));
    }
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::Parameter(format!(
            "alpha must lie in (0,2), got {alpha}"
        )));
    }
    if rho.n_components() != 1 {
        return Err(Error::Shape("density must be scalar".into()));
    }
    let n = grid.n();
    let h = grid.dx();
    let p = 1.0 + alpha;
    let nf = n as f64;
    // W_r = Σ_{m >= 1, m ≡ r mod n} m^{-p}
    let weights: Vec<f64> = (0..n)
        .map(|r| {
            if r == 0 {
                0.0
            } else {
                nf.powf(-p) * hurwitz_zeta(p, r as f64 / nf)
            }
        })
        .collect();
    let rv = rho.component(0);
    let w = rho.times_scalar(rho)?.to_spectral();
    let dw = spectral_derivative(&w, Derivative::Partial(0))?.to_physical();
    let w = w.to_physical();
    let correction = zeta(alpha - 1.0) * h.powf(2.0 - alpha);
    let scale = h.powf(-alpha);

    let mut out = Vec::with_capacity(u.n_components());
    for c in 0..u.n_components() {
        let uc = u.extract(c).to_spectral();
        let du = spectral_derivative(&uc, Derivative::Partial(0))?;
        let ddu = spectral_derivative(&du, Derivative::Partial(0))?.to_physical();
        let du = du.to_physical();
        let uv = u.component(c);
        let comp: Vec<f64> = (0..n)
            .map(|i| {
                let mut s = 0.0;
                for (r, wr) in weights.iter().enumerate().skip(1) {
                    let ip = (i + r) % n;
                    let im = (i + n - r) % n;
                    s += wr * ((uv[i] - uv[ip]) * rv[ip] + (uv[i] - uv[im]) * rv[im]);
                }
                // ρ b = -(u'' ρ² + u' (ρ²)')
                let rho_b = -(ddu.component(0)[i] * w.component(0)[i]
                    + du.component(0)[i] * dw.component(0)[i]);
                -rv[i] * scale * s + correction * rho_b
            })
            .collect();
        out.push(comp);
    }
    Field::new(grid, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::params::default_mu;
    use crate::spectral::Grid;
    use std::f64::consts::PI;

    fn grid(n: usize) -> Grid {
        Grid::new(1, n, 2.0 * PI).unwrap()
    }

    #[test]
    fn commutator_closed_form() {
        let g = grid(64);
        let u = Field::scalar_from_fn(g, |x| x[0].sin()).to_spectral();
        let w = Field::scalar_from_fn(g, |x| x[0].cos()).to_spectral();
        let a = 1.5;
        let got = alignment_commutator(&u, &w, a).unwrap().to_physical();
        let want = Field::scalar_from_fn(g, |x| (2f64.powf(a) - 1.0) * (2.0 * x[0]).sin() / 2.0);
        assert!(got.sub(&want).unwrap().max_abs() < 1e-13);
    }

    #[test]
    fn commutator_with_constants() {
        let g = grid(32);
        let u = Field::constant(g, 1, 3.0).to_spectral();
        let w = Field::scalar_from_fn(g, |x| (2.0 * x[0]).cos()).to_spectral();
        assert!(alignment_commutator(&u, &w, 1.3).unwrap().l2_norm() < 1e-11);
        let c = Field::constant(g, 1, 2.0).to_spectral();
        let got = alignment_commutator(&w, &c, 1.3).unwrap();
        let want = fractional_laplacian(&w, 1.3).unwrap().scaled(2.0);
        assert!(got.sub(&want).unwrap().l2_norm() < 1e-12);
    }

    #[test]
    fn direct_route_matches_commutator_normalization() {
        let g = grid(256);
        for a in [1.2, 1.5, 1.8] {
            let rho = Field::scalar_from_fn(g, |x| 1.0 + 0.3 * x[0].cos());
            let u = Field::scalar_from_fn(g, |x| x[0].sin() + 0.2 * (2.0 * x[0]).cos());
            let d = alignment_direct(&rho, &u, a).unwrap();
            let comm = alignment_commutator(&u.to_spectral(), &rho.to_spectral(), a)
                .unwrap()
                .to_physical();
            let spectral = comm.times_scalar(&rho).unwrap().scaled(-default_mu(a, 1));
            let err = d.sub(&spectral).unwrap().l2_norm() / spectral.l2_norm();
            assert!(err < 1e-4, "alpha {a}: {err}");
            let total: f64 = d.integral(0);
            assert!(total.abs() < 1e-12 * d.l2_norm(), "alpha {a}: {total}");
        }
    }

    #[test]
    fn direct_rejects_2d() {
        let g = Grid::new(2, 8, 1.0).unwrap();
        let f = Field::constant(g, 1, 1.0);
        assert!(matches!(
            alignment_direct(&f, &Field::zeros(g, 2), 1.5),
            Err(Error::Unsupported(_))
        ));
    }
}
