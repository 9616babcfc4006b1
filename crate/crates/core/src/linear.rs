//! Constant-coefficient analysis of the linearized system about
//! `ρ = 1, u = 0`.
//!
//! Per frequency `|ξ|`, the compressible pair `(σ̂, d̂)` with
//! `d = Λ^{-1} div u` evolves by
//!
//! ```text
//! M(|ξ|) = [ 0        -λ|ξ|    ]
//!          [ λ|ξ|     -μ|ξ|^α  ]
//! ```
//!
//! and the divergence-free part decays at rate `μ|ξ|^α`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::special::integrate;
use crate::spectral::{lambda_power, SpectralField};

/// The three constants the linear analysis depends on.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearParams {
    alpha: f64,
    lambda: f64,
    mu: f64,
}

/// Weight of the cross term in the low-frequency energy.
pub const DELTA: f64 = 1.0 / 300.0;

impl LinearParams {
    pub fn new(alpha: f64, lambda: f64, mu: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha < 2.0) {
            return Err(Error::Parameter(format!(
                "alpha must lie in (1,2), got {alpha}"
            )));
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::Parameter(format!(
                "lambda must be positive, got {lambda}"
            )));
        }
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::Parameter(format!("mu must be positive, got {mu}")));
        }
        Ok(LinearParams { alpha, lambda, mu })
    }

    pub fn from_model(p: &ModelParams) -> Self {
        LinearParams {
            alpha: p.alpha(),
            lambda: p.lambda(),
            mu: p.mu(),
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn delta(&self) -> f64 {
        DELTA
    }

    /// `μ̄ = δμ/8`
    pub fn mu_bar(&self) -> f64 {
        DELTA * self.mu / 8.0
    }

    /// `ν̄ = λ²/(4μ)`
    pub fn nu_bar(&self) -> f64 {
        self.lambda * self.lambda / (4.0 * self.mu)
    }

    /// Real threshold with `2^{j0(α-1)} = 4λ/μ`.
    pub fn j0_real(&self) -> f64 {
        (4.0 * self.lambda / self.mu).log2() / (self.alpha - 1.0)
    }

    pub fn j0(&self) -> i32 {
        self.j0_real().floor() as i32
    }

    /// `μ_h = min(ν̄ 2^{j0(2-α)}, μ 2^{j0 α})` at the real threshold.
    pub fn mu_h(&self) -> f64 {
        let j0 = self.j0_real();
        (self.nu_bar() * 2f64.powf(j0 * (2.0 - self.alpha)))
            .min(self.mu * 2f64.powf(j0 * self.alpha))
    }
}

/// Per-frequency generator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeMatrix {
    /// Acts on `(σ̂, d̂)`.
    pub m: [[f64; 2]; 2],
    /// Decay rate of the divergence-free part (negative).
    pub incompressible_rate: f64,
}

fn check_xi(xi: f64) -> Result<()> {
    if !(xi.is_finite() && xi > 0.0) {
        return Err(Error::Parameter(format!("|xi| must be positive, got {xi}")));
    }
    Ok(())
}

pub fn mode_matrix(xi: f64, lp: &LinearParams) -> Result<ModeMatrix> {
    check_xi(xi)?;
    let a = lp.lambda * xi;
    let b = lp.mu * xi.powf(lp.alpha);
    Ok(ModeMatrix {
        m: [[0.0, -a], [a, -b]],
        incompressible_rate: -b,
    })
}

/// Eigenvalues of `M(|ξ|)`, fast (more negative real part) first.
pub fn eigenvalues(xi: f64, lp: &LinearParams) -> Result<[Complex64; 2]> {
    check_xi(xi)?;
    let a = lp.lambda * xi;
    let b = lp.mu * xi.powf(lp.alpha);
    // z² + b z + a² = 0
    let disc = 0.25 * b * b - a * a;
    if disc >= 0.0 {
        let q = disc.sqrt();
        let fast = -0.5 * b - q;
        // a² / fast avoids cancellation in -b/2 + q
        let slow = if fast != 0.0 { a * a / fast } else { 0.0 };
        Ok([Complex64::new(fast, 0.0), Complex64::new(slow, 0.0)])
    } else {
        let q = (-disc).sqrt();
        Ok([Complex64::new(-0.5 * b, -q), Complex64::new(-0.5 * b, q)])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Low,
    High,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::Low => "low",
            Regime::High => "high",
        }
    }
}

/// Low iff `|ξ|^{α-1} <= 4λ/μ`.
pub fn regime_classify(xi: f64, lp: &LinearParams) -> Result<Regime> {
    check_xi(xi)?;
    Ok(if xi.powf(lp.alpha - 1.0) <= 4.0 * lp.lambda / lp.mu {
        Regime::Low
    } else {
        Regime::High
    })
}

/// Regime of dyadic block `j` relative to the integer split.
pub fn block_regime(j: i32, lp: &LinearParams) -> Regime {
    if j <= lp.j0() {
        Regime::Low
    } else {
        Regime::High
    }
}

/// Guaranteed decay bound for the largest eigenvalue real part:
/// `-(1/8) min(μ|ξ|^α, (λ²/μ)|ξ|^{2-α})`.
pub fn rate_floor(xi: f64, lp: &LinearParams) -> f64 {
    let parabolic = lp.mu * xi.powf(lp.alpha);
    let damped = lp.lambda * lp.lambda / lp.mu * xi.powf(2.0 - lp.alpha);
    -0.125 * parabolic.min(damped)
}

/// One row of the eigenvalue table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumRow {
    pub xi: f64,
    pub re_fast: f64,
    pub re_slow: f64,
    /// Imaginary part magnitude (the roots are conjugate).
    pub im: f64,
    pub regime: Regime,
    pub rate_floor: f64,
}

pub fn spectrum_row(xi: f64, lp: &LinearParams) -> Result<SpectrumRow> {
    let [fast, slow] = eigenvalues(xi, lp)?;
    Ok(SpectrumRow {
        xi,
        re_fast: fast.re,
        re_slow: slow.re,
        im: slow.im.abs(),
        regime: regime_classify(xi, lp)?,
        rate_floor: rate_floor(xi, lp),
    })
}

/// A single Fourier mode of the compressible pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeState {
    pub xi: f64,
    pub sigma: Complex64,
    pub d: Complex64,
}

/// `e^{tM}` in closed form, real 2×2.
pub fn propagator(xi: f64, t: f64, lp: &LinearParams) -> Result<[[f64; 2]; 2]> {
    check_xi(xi)?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Parameter(format!(
            "time must be nonnegative, got {t}"
        )));
    }
    Ok(propagator_unchecked(xi, t, lp))
}

pub(crate) fn propagator_unchecked(xi: f64, t: f64, lp: &LinearParams) -> [[f64; 2]; 2] {
    let a = lp.lambda * xi;
    let b = lp.mu * xi.powf(lp.alpha);
    let h = 0.5 * b;
    let disc4 = b * b - 4.0 * a * a;
    // e^{tM} = c I + s (M + h I), with c, s including the factor e^{-ht}
    let (c, s) = if disc4.abs() < 1e-12 * b * b {
        let e = (-h * t).exp();
        (e, e * t)
    } else if disc4 > 0.0 {
        let q = 0.5 * disc4.sqrt();
        if q * t < 1.0 {
            let e = (-h * t).exp();
            (e * (q * t).cosh(), e * (q * t).sinh() / q)
        } else {
            let ep = ((q - h) * t).exp();
            let em = ((-q - h) * t).exp();
            (0.5 * (ep + em), 0.5 * (ep - em) / q)
        }
    } else {
        let q = 0.5 * (-disc4).sqrt();
        let e = (-h * t).exp();
        (e * (q * t).cos(), e * (q * t).sin() / q)
    };
    [[c + s * h, -s * a], [s * a, c + s * (h - b)]]
}

/// Exact flow of one mode over time `t >= 0`.
pub fn linear_propagate(mode: &ModeState, t: f64, lp: &LinearParams) -> Result<ModeState> {
    let e = propagator(mode.xi, t, lp)?;
    Ok(ModeState {
        xi: mode.xi,
        sigma: mode.sigma * e[0][0] + mode.d * e[0][1],
        d: mode.sigma * e[1][0] + mode.d * e[1][1],
    })
}

/// Exact flow of whole fields `(σ, d)`; the mean modes are left unchanged.
pub fn propagate_fields(
    sigma: &SpectralField,
    d: &SpectralField,
    t: f64,
    lp: &LinearParams,
) -> Result<(SpectralField, SpectralField)> {
    sigma.grid().ensure_same(d.grid())?;
    if sigma.n_components() != 1 || d.n_components() != 1 {
        return Err(Error::Shape("propagate_fields needs scalar fields".into()));
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Parameter(format!(
            "time must be nonnegative, got {t}"
        )));
    }
    let g = *sigma.grid();
    let mut s_out = sigma.clone();
    let mut d_out = d.clone();
    let (s0, d0) = (sigma.component(0), d.component(0));
    let (so, dout) = (s_out.component_mut(0), d_out.component_mut(0));
    for i in 1..g.len() {
        let e = propagator_unchecked(g.xi_norm(i), t, lp);
        so[i] = s0[i] * e[0][0] + d0[i] * e[0][1];
        dout[i] = s0[i] * e[1][0] + d0[i] * e[1][1];
    }
    Ok((s_out, d_out))
}

/// Energy `Y_j` of a pair of blocks supported in annulus `j`.
///
/// Low regime (`j <= j0`):
/// `Y² = ‖σ‖² + ‖d‖² - δ(μ/λ)(d | Λ^{α-1}σ)`.
/// High regime:
/// `Y² = ‖Λ^{α-1}σ‖² + 2(λ/μ)²‖d‖² - 2(λ/μ)(d | Λ^{α-1}σ)`.
pub fn energy_yj(
    sigma_block: &SpectralField,
    d_block: &SpectralField,
    j: i32,
    lp: &LinearParams,
) -> Result<f64> {
    sigma_block.grid().ensure_same(d_block.grid())?;
    let ls = lambda_power(sigma_block, lp.alpha - 1.0);
    let cross = d_block.inner(&ls)?;
    let dd = d_block.l2_norm().powi(2);
    let r = lp.lambda / lp.mu;
    let (y2, scale) = match block_regime(j, lp) {
        Regime::Low => {
            let ss = sigma_block.l2_norm().powi(2);
            (ss + dd - DELTA / r * cross, ss + dd)
        }
        Regime::High => {
            let ll = ls.l2_norm().powi(2);
            (ll + 2.0 * r * r * dd - 2.0 * r * cross, ll + r * r * dd)
        }
    };
    if y2 < -1e-12 * scale {
        return Err(Error::Internal(format!(
            "negative energy {y2} in block {j}"
        )));
    }
    Ok(y2.max(0.0).sqrt())
}

/// `sup_{t ∈ t_grid} 2^{jα} ∫_0^t e^{-c 2^{jα}(t-τ)} t^s τ^{-s} dτ`.
///
/// With `τ = t w^{1/(1-s)}` the integral becomes
/// `t/(1-s) ∫_0^1 exp(-a t (1 - w^{1/(1-s)})) dw`, `a = c 2^{jα}`, which is
/// smooth; panels are graded towards `w = 1` where the integrand
/// concentrates for large `a t`.
pub fn kernel_bound_check(alpha: f64, c: f64, j: i32, s: f64, t_grid: &[f64]) -> Result<f64> {
    if !(0.0..1.0).contains(&s) {
        return Err(Error::Parameter(format!("s must lie in [0,1), got {s}")));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::Parameter(format!("c must be positive, got {c}")));
    }
    let scale = 2f64.powf(j as f64 * alpha);
    let a = c * scale;
    let mut best: f64 = 0.0;
    for &t in t_grid {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::Parameter(format!(
                "sample time must be positive, got {t}"
            )));
        }
        best = best.max(scale * kernel_integral(a, s, t)?);
    }
    Ok(best)
}

/// `∫_0^t e^{-a(t-τ)} t^s τ^{-s} dτ`.
pub fn kernel_integral(a: f64, s: f64, t: f64) -> Result<f64> {
    let p = 1.0 / (1.0 - s);
    // v = 1 - w, with 1 - (1 - v)^p evaluated without cancellation
    let f = |v: f64| (a * t * (p * (-v).ln_1p()).exp_m1()).exp();
    let mut total = 0.0;
    let mut hi: f64 = 1.0;
    for _ in 0..60 {
        let lo = 0.5 * hi;
        total += integrate(f, lo, hi, 1e-16)?;
        hi = lo;
    }
    total += integrate(f, 0.0, hi, 1e-16)?;
    Ok(t * p * total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> LinearParams {
        LinearParams::new(1.5, 1.0, 1.0).unwrap()
    }

    #[test]
    fn quadratic_roots() {
        let [f, s] = eigenvalues(1.0, &unit()).unwrap();
        assert!((f.re + 0.5).abs() < 1e-15 && (s.re + 0.5).abs() < 1e-15);
        assert!((s.im - 3f64.sqrt() / 2.0).abs() < 1e-15);
        let [f, s] = eigenvalues(16.0, &unit()).unwrap();
        // z² + 64 z + 256 = 0
        let q = (32.0f64 * 32.0 - 256.0).sqrt();
        assert!((f.re - (-32.0 - q)).abs() < 1e-12);
        assert!((s.re - (-32.0 + q)).abs() < 1e-12);
        assert!((s.re + 4.2872).abs() < 1e-4);
    }

    #[test]
    fn regimes() {
        let lp = unit();
        assert_eq!(regime_classify(16.0, &lp).unwrap(), Regime::Low);
        assert_eq!(regime_classify(16.0001, &lp).unwrap(), Regime::High);
        assert_eq!(regime_classify(1.0, &lp).unwrap(), Regime::Low);
        assert_eq!(regime_classify(64.0, &lp).unwrap(), Regime::High);
        assert!(regime_classify(0.0, &lp).is_err());
    }

    #[test]
    fn energy_constants() {
        let lp = unit();
        assert_eq!(lp.j0(), 4);
        assert!((lp.mu_bar() - 1.0 / 2400.0).abs() < 1e-18);
        assert_eq!(lp.nu_bar(), 0.25);
        // min(0.25 · 2^2, 2^6)
        assert!((lp.mu_h() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn propagator_matches_rotation() {
        let lp = unit();
        let m = ModeState {
            xi: 1.0,
            sigma: Complex64::new(1.0, 0.0),
            d: Complex64::new(0.0, 0.0),
        };
        let period = 4.0 * std::f64::consts::PI / 3f64.sqrt();
        let out = linear_propagate(&m, period, &lp).unwrap();
        let decay = (-2.0 * std::f64::consts::PI / 3f64.sqrt()).exp();
        assert!((out.sigma.re - decay).abs() < 1e-14);
        assert!(out.d.norm() < 1e-14);
    }

    #[test]
    fn double_root_branch_is_continuous() {
        // disc = 0 at |ξ|^{α-1} = 2λ/μ, i.e. |ξ| = 4 for unit parameters
        let lp = unit();
        let at = propagator(4.0, 0.7, &lp).unwrap();
        for xi in [4.0 * (1.0 + 1e-7), 4.0 * (1.0 - 1e-7)] {
            let near = propagator(xi, 0.7, &lp).unwrap();
            for r in 0..2 {
                for c in 0..2 {
                    assert!((near[r][c] - at[r][c]).abs() < 1e-5);
                }
            }
        }
    }

    #[test]
    fn kernel_zero_order_closed_form() {
        for (a, t) in [(1.0, 0.5), (3.0, 10.0), (1e4, 1e3), (1e-3, 2.0)] {
            let got = kernel_integral(a, 0.0, t).unwrap();
            let want = -(-a * t).exp_m1() / a;
            assert!((got - want).abs() < 1e-12 * want, "{a} {t}: {got} {want}");
        }
        assert!(kernel_bound_check(1.5, 1.0, 0, 1.0, &[1.0]).is_err());
    }
}
