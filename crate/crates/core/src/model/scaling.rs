use crate::error::{Error, Result};

use super::params::ModelParams;
use super::rhs::rhs;
use super::state::{Representation, State};

/// Whether the pressure constant follows the scaling `κ ↦ s^{2α-2} κ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PressureScaling {
    Rescaled,
    /// Keep `κ`; breaks the symmetry on purpose.
    Fixed,
}

/// Relative residual of the scaling symmetry
/// `ρ ↦ ρ(s^α t, s x)`, `u ↦ s^{α-1} u(s^α t, s x)`, `κ ↦ s^{2α-2} κ`.
///
/// The rescaled state uses the same samples on a box of side `L / s`, so `s`
/// must be a power of two.
pub fn scaling_check(
    state: &State,
    p: &ModelParams,
    scale: f64,
    pressure: PressureScaling,
) -> Result<f64> {
    let k = scale.log2();
    if !(scale > 0.0 && k.is_finite() && k == k.round()) {
        return Err(Error::Parameter(format!(
            "scale must be a power of two, got {scale}"
        )));
    }
    let a = p.alpha();
    let vel = scale.powf(a - 1.0);
    let grid = state.grid().with_length(state.grid().length() / scale)?;
    let scalar_factor = match state.representation() {
        Representation::RhoU => 1.0,
        Representation::SigmaU => vel,
    };
    let relabel = |f: &crate::spectral::Field, c: f64| {
        crate::spectral::Field::new(grid, f.components().to_vec()).map(|f| f.scaled(c))
    };
    let scaled = State::new(
        state.representation(),
        relabel(state.scalar(), scalar_factor)?,
        relabel(state.velocity(), vel)?,
        state.time(),
    )?;
    let kappa = match pressure {
        PressureScaling::Rescaled => p.kappa() * vel * vel,
        PressureScaling::Fixed => p.kappa(),
    };
    let sp = p.with_kappa(kappa);

    let base = rhs(state, p)?;
    let moved = rhs(&scaled, &sp)?;
    let scalar_rate = match state.representation() {
        Representation::RhoU => scale.powf(a),
        Representation::SigmaU => scale.powf(2.0 * a - 1.0),
    };
    let vel_rate = scale.powf(2.0 * a - 1.0);

    let mut diff = 0.0;
    let mut norm = 0.0;
    let pairs = [
        (&base.scalar, &moved.scalar, scalar_rate),
        (&base.velocity, &moved.velocity, vel_rate),
    ];
    for (b, m, rate) in pairs {
        for (bc, mc) in b.components().iter().zip(m.components()) {
            for (x, y) in bc.iter().zip(mc) {
                let want = rate * x;
                diff += (y - want) * (y - want);
                norm += want * want;
            }
        }
    }
    Ok(if norm > 0.0 {
        (diff / norm).sqrt()
    } else {
        diff.sqrt()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{Field, Grid};
    use std::f64::consts::PI;

    fn state(repr: Representation) -> (State, ModelParams) {
        let g = Grid::new(1, 64, 2.0 * PI).unwrap();
        let p = ModelParams::new(1, 1.5, 1.0, 1.4, None).unwrap();
        let rho = Field::scalar_from_fn(g, |x| 1.0 + 0.1 * x[0].cos());
        let u = Field::vector_from_fn(g, |x, _| 0.1 * x[0].sin());
        let s = State::new(Representation::RhoU, rho, u, 0.0).unwrap();
        (s.to_representation(repr, &p).unwrap(), p)
    }

    #[test]
    fn unit_scale_is_exact() {
        let (s, p) = state(Representation::RhoU);
        assert_eq!(
            scaling_check(&s, &p, 1.0, PressureScaling::Rescaled).unwrap(),
            0.0
        );
    }

    #[test]
    fn dyadic_scale_preserves_equation() {
        for repr in [Representation::RhoU, Representation::SigmaU] {
            let (s, p) = state(repr);
            for scale in [2.0, 0.5, 4.0] {
                let r = scaling_check(&s, &p, scale, PressureScaling::Rescaled).unwrap();
                assert!(r < 1e-8, "{repr:?} {scale}: {r}");
            }
            let r = scaling_check(&s, &p, 2.0, PressureScaling::Fixed).unwrap();
            assert!(r > 0.1, "{repr:?}: {r}");
        }
    }

    #[test]
    fn rejects_non_dyadic() {
        let (s, p) = state(Representation::RhoU);
        assert!(scaling_check(&s, &p, 3.0, PressureScaling::Rescaled).is_err());
        assert!(scaling_check(&s, &p, -2.0, PressureScaling::Rescaled).is_err());
    }
}
