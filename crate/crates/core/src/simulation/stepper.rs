use crate::error::{Error, Result};
use crate::model::{
    explicit_rhs, rho_from_sigma, Dynamics, ModelParams, Representation, State, Vars,
    VACUUM_THRESHOLD,
};

use super::config::DEFAULT_CFL;

/// Consecutive CFL violations tolerated before a step fails.
pub const MAX_CFL_VIOLATIONS: usize = 5;

/// Integrating-factor (Lawson) RK4 stepper.
///
/// The dissipation `-μΛ^α` acting on the velocity (or momentum) is integrated
/// exactly by the heat semigroup; all other terms are explicit. In the
/// `rho_u` representation the conserved pair `(ρ, ρu)` is evolved, so mass
/// and momentum are conserved to rounding.
#[derive(Clone, Debug)]
pub struct Stepper {
    params: ModelParams,
    repr: Representation,
    dynamics: Dynamics,
    cfl: f64,
    violations: usize,
}

impl Stepper {
    pub fn new(params: ModelParams, repr: Representation) -> Self {
        Stepper {
            params,
            repr,
            dynamics: Dynamics::Full,
            cfl: DEFAULT_CFL,
            violations: 0,
        }
    }

    /// Replace the dynamics (e.g. drop the nonlinear terms for testing).
    pub fn with_dynamics(mut self, dynamics: Dynamics) -> Self {
        self.dynamics = dynamics;
        self
    }

    pub fn with_cfl(mut self, cfl: f64) -> Self {
        self.cfl = cfl;
        self
    }

    pub fn representation(&self) -> Representation {
        self.repr
    }

    pub(crate) fn advance(&mut self, w: &Vars, dt: f64) -> Result<Vars> {
        let p = &self.params;
        let n = |v: &Vars| explicit_rhs(self.repr, v, p, self.dynamics);
        let half = 0.5 * dt;

        let k1 = n(w)?;
        let w_half = w.dissipate(p, half);
        let k2 = n(&w.axpy(half, &k1)?.dissipate(p, half))?;
        let k3 = n(&w_half.axpy(half, &k2)?)?;
        let k4 = n(&w.dissipate(p, dt).axpy(dt, &k3.dissipate(p, half))?)?;

        let mid = k2.axpy(1.0, &k3)?.dissipate(p, half);
        let out = w
            .axpy(dt / 6.0, &k1)?
            .dissipate(p, dt)
            .axpy(dt / 3.0, &mid)?
            .axpy(dt / 6.0, &k4)?;
        self.check_cfl(&out, dt)?;
        check_vacuum(self.repr, &out, &self.params)?;
        Ok(out)
    }

    fn check_cfl(&mut self, v: &Vars, dt: f64) -> Result<()> {
        let grid = v.scalar.grid();
        let vector = v.vector.to_physical();
        let umax = match self.repr {
            Representation::SigmaU => vector.max_abs(),
            Representation::RhoU => {
                let rho = v.scalar.to_physical();
                let mut m: f64 = 0.0;
                for c in vector.components() {
                    for (x, r) in c.iter().zip(rho.component(0)) {
                        m = m.max((x / r).abs());
                    }
                }
                m
            }
        };
        if umax > 0.0 && dt > self.cfl * grid.dx() / umax {
            self.violations += 1;
            log::warn!(
                "dt = {dt} exceeds the CFL limit {} (max |u| = {umax})",
                self.cfl * grid.dx() / umax
            );
            if self.violations >= MAX_CFL_VIOLATIONS {
                return Err(Error::Data(format!(
                    "CFL condition violated on {} consecutive steps",
                    self.violations
                )));
            }
        } else {
            self.violations = 0;
        }
        Ok(())
    }

    /// Advance a state by `dt`.
    pub fn step(&mut self, state: &State, dt: f64) -> Result<State> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::Parameter(format!("dt must be positive, got {dt}")));
        }
        let state = state.to_representation(self.repr, &self.params)?;
        let w = Vars::from_state(&state)?;
        let out = self.advance(&w, dt)?;
        out.to_state(self.repr, state.time() + dt)
    }
}

fn check_vacuum(repr: Representation, v: &Vars, p: &ModelParams) -> Result<()> {
    let scalar = v.scalar.to_physical();
    let min = match repr {
        Representation::RhoU => scalar.min_value(),
        Representation::SigmaU => rho_from_sigma(&scalar, p)?.min_value(),
    };
    if !(min >= VACUUM_THRESHOLD) {
        return Err(Error::Vacuum {
            min,
            threshold: VACUUM_THRESHOLD,
        });
    }
    Ok(())
}

/// One step of the full system in the state's own representation.
pub fn step(state: &State, params: &ModelParams, dt: f64) -> Result<State> {
    Stepper::new(*params, state.representation()).step(state, dt)
}
