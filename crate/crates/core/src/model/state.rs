use crate::error::{Error, Result};
use crate::spectral::{Field, Grid};

use super::params::ModelParams;

/// Density below which a run is considered to have reached vacuum.
pub const VACUUM_THRESHOLD: f64 = 1e-6;

/// Which scalar variable a [`State`] carries next to the velocity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Representation {
    /// Density `ρ`.
    RhoU,
    /// Enthalpy-like variable `σ` with `σ = 0` at `ρ = 1`.
    SigmaU,
}

impl Representation {
    pub fn name(&self) -> &'static str {
        match self {
            Representation::RhoU => "rho_u",
            Representation::SigmaU => "sigma_u",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "rho_u" => Some(Representation::RhoU),
            "sigma_u" => Some(Representation::SigmaU),
            _ => None,
        }
    }
}

/// Pointwise `σ(ρ)`: `√κ ln ρ` for `γ = 1`, `λ/(γ-1) (ρ^{γ-1} - 1)` otherwise.
pub fn sigma_of_rho(rho: f64, p: &ModelParams) -> f64 {
    let g = p.gamma();
    if g == 1.0 {
        p.kappa().sqrt() * rho.ln()
    } else {
        p.lambda() / (g - 1.0) * ((g - 1.0) * rho.ln()).exp_m1()
    }
}

/// Pointwise `h(σ) = ρ(σ) - 1`.
pub fn h_of_sigma(sigma: f64, p: &ModelParams) -> f64 {
    let g = p.gamma();
    if g == 1.0 {
        (sigma / p.kappa().sqrt()).exp_m1()
    } else {
        (((g - 1.0) * sigma / p.lambda()).ln_1p() / (g - 1.0)).exp_m1()
    }
}

/// `dσ/dρ = λ ρ^{γ-2}`.
pub fn dsigma_drho(rho: f64, p: &ModelParams) -> f64 {
    p.lambda() * rho.powf(p.gamma() - 2.0)
}

/// Lower end of the domain of `h`; `-∞` for `γ = 1`.
pub fn sigma_floor(p: &ModelParams) -> f64 {
    if p.gamma() == 1.0 {
        f64::NEG_INFINITY
    } else {
        -p.lambda() / (p.gamma() - 1.0)
    }
}

pub fn sigma_from_rho(rho: &Field, p: &ModelParams) -> Result<Field> {
    let min = rho.min_value();
    if !(min > 0.0) {
        return Err(Error::Vacuum {
            min,
            threshold: 0.0,
        });
    }
    Ok(rho.map(|r| sigma_of_rho(r, p)))
}

pub fn rho_from_sigma(sigma: &Field, p: &ModelParams) -> Result<Field> {
    let min = sigma.min_value();
    let floor = sigma_floor(p);
    if !(min > floor) {
        // the density at the floor is 0; report it in density units
        return Err(Error::Vacuum {
            min: 1.0 + h_of_sigma(min.max(floor), p),
            threshold: 0.0,
        });
    }
    Ok(sigma.map(|s| 1.0 + h_of_sigma(s, p)))
}

/// Snapshot of the system at time `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct State {
    repr: Representation,
    scalar: Field,
    velocity: Field,
    t: f64,
}

impl State {
    pub fn new(repr: Representation, scalar: Field, velocity: Field, t: f64) -> Result<Self> {
        scalar.grid().ensure_same(velocity.grid())?;
        if scalar.n_components() != 1 {
            return Err(Error::Shape("state scalar must have one component".into()));
        }
        if velocity.n_components() != scalar.grid().dim() {
            return Err(Error::Shape(format!(
                "velocity needs {} components, got {}",
                scalar.grid().dim(),
                velocity.n_components()
            )));
        }
        if !t.is_finite() {
            return Err(Error::Parameter(format!(
                "state time must be finite, got {t}"
            )));
        }
        Ok(State {
            repr,
            scalar,
            velocity,
            t,
        })
    }

    /// The equilibrium `ρ = 1, u = 0` (equivalently `σ = 0`).
    pub fn equilibrium(grid: Grid, repr: Representation) -> Self {
        let level = match repr {
            Representation::RhoU => 1.0,
            Representation::SigmaU => 0.0,
        };
        State {
            repr,
            scalar: Field::constant(grid, 1, level),
            velocity: Field::zeros(grid, grid.dim()),
            t: 0.0,
        }
    }

    pub fn representation(&self) -> Representation {
        self.repr
    }

    pub fn grid(&self) -> &Grid {
        self.scalar.grid()
    }

    pub fn scalar(&self) -> &Field {
        &self.scalar
    }

    pub fn velocity(&self) -> &Field {
        &self.velocity
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn with_time(mut self, t: f64) -> Self {
        self.t = t;
        self
    }

    pub fn rho(&self, p: &ModelParams) -> Result<Field> {
        match self.repr {
            Representation::RhoU => Ok(self.scalar.clone()),
            Representation::SigmaU => rho_from_sigma(&self.scalar, p),
        }
    }

    pub fn sigma(&self, p: &ModelParams) -> Result<Field> {
        match self.repr {
            Representation::RhoU => sigma_from_rho(&self.scalar, p),
            Representation::SigmaU => Ok(self.scalar.clone()),
        }
    }

    pub fn to_representation(&self, repr: Representation, p: &ModelParams) -> Result<State> {
        let scalar = match repr {
            Representation::RhoU => self.rho(p)?,
            Representation::SigmaU => self.sigma(p)?,
        };
        Ok(State {
            repr,
            scalar,
            velocity: self.velocity.clone(),
            t: self.t,
        })
    }

    /// Check the representation invariant and the vacuum guard.
    pub fn validate(&self, p: &ModelParams) -> Result<()> {
        if !(self.scalar.is_finite() && self.velocity.is_finite()) {
            return Err(Error::Data("state contains non-finite values".into()));
        }
        let min = self.rho(p)?.min_value();
        if min < VACUUM_THRESHOLD {
            return Err(Error::Vacuum {
                min,
                threshold: VACUUM_THRESHOLD,
            });
        }
        Ok(())
    }
}
