use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

/// Singular-integral normalization `c_{α,N} = 2^α Γ((N+α)/2) / (π^{N/2} Γ(-α/2))`.
///
/// Negative for `α ∈ (0, 2)` because `Γ(-α/2) < 0`.
pub fn kernel_normalization(alpha: f64, dim: usize) -> f64 {
    let n = dim as f64;
    2f64.powf(alpha) * gamma(0.5 * (n + alpha))
        / (std::f64::consts::PI.powf(0.5 * n) * gamma(-0.5 * alpha))
}

/// Default dissipation coefficient `1 / |c_{α,N}|`.
pub fn default_mu(alpha: f64, dim: usize) -> f64 {
    1.0 / kernel_normalization(alpha, dim).abs()
}

/// Physical parameters of the system with pressure `κ ρ^γ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    alpha: f64,
    kappa: f64,
    gamma: f64,
    mu: f64,
}

impl ModelParams {
    /// `mu = None` selects [`default_mu`] for the given dimension.
    pub fn new(dim: usize, alpha: f64, kappa: f64, gamma: f64, mu: Option<f64>) -> Result<Self> {
        if !(alpha > 1.0 && alpha < 2.0) {
            return Err(Error::Parameter(format!(
                "alpha must lie in (1,2), got {alpha}"
            )));
        }
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::Parameter(format!(
                "kappa must be positive, got {kappa}"
            )));
        }
        if !(gamma.is_finite() && gamma >= 1.0) {
            return Err(Error::Parameter(format!("gamma must be >= 1, got {gamma}")));
        }
        let mu = match mu {
            Some(m) => m,
            None => {
                if dim != 1 && dim != 2 {
                    return Err(Error::Parameter(format!("dim must be 1 or 2, got {dim}")));
                }
                default_mu(alpha, dim)
            }
        };
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::Parameter(format!("mu must be positive, got {mu}")));
        }
        Ok(ModelParams {
            alpha,
            kappa,
            gamma,
            mu,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Sound speed at unit density, `λ = √(κγ)`.
    pub fn lambda(&self) -> f64 {
        (self.kappa * self.gamma).sqrt()
    }

    /// Real threshold index with `2^{j0(α-1)} = 4λ/μ`.
    pub fn j0_real(&self) -> f64 {
        (4.0 * self.lambda() / self.mu).log2() / (self.alpha - 1.0)
    }

    /// Integer split between the low and high regimes, `floor(j0_real)`.
    pub fn j0(&self) -> i32 {
        self.j0_real().floor() as i32
    }

    pub(crate) fn with_kappa(&self, kappa: f64) -> Self {
        ModelParams { kappa, ..*self }
    }

    pub fn with_mu(&self, mu: f64) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::Parameter(format!("mu must be positive, got {mu}")));
        }
        Ok(ModelParams { mu, ..*self })
    }
}
