use crate::error::{Error, Result};
use crate::spectral::{
    dealias, fractional_laplacian, heat_multiplier_unchecked, spectral_derivative, Derivative,
    Field, SpectralField,
};

use super::alignment::alignment_commutator;
use super::params::ModelParams;
use super::state::{h_of_sigma, rho_from_sigma, sigma_from_rho, Representation, State};

/// Which terms of the evolution are kept.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dynamics {
    Full,
    /// Linearization about `ρ = 1, u = 0`.
    Linear,
}

/// Time derivative of a [`State`]: of its scalar (`ρ` or `σ`) and of `u`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tendency {
    pub scalar: Field,
    pub velocity: Field,
}

/// Evolved variables in Fourier space: `(ρ, ρu)` for `rho_u`, `(σ, u)` for
/// `sigma_u`. The linear dissipation acts on `vector` only.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Vars {
    pub scalar: SpectralField,
    pub vector: SpectralField,
}

impl Vars {
    pub fn from_state(state: &State) -> Result<Vars> {
        let scalar = state.scalar();
        let vector = match state.representation() {
            Representation::RhoU => state.velocity().times_scalar(scalar)?,
            Representation::SigmaU => state.velocity().clone(),
        };
        Ok(Vars {
            scalar: dealias(&scalar.to_spectral()),
            vector: dealias(&vector.to_spectral()),
        })
    }

    pub fn to_state(&self, repr: Representation, t: f64) -> Result<State> {
        let scalar = self.scalar.to_physical();
        let vector = self.vector.to_physical();
        let velocity = match repr {
            Representation::RhoU => vector.times_scalar(&reciprocal(&scalar)?)?,
            Representation::SigmaU => vector,
        };
        State::new(repr, scalar, velocity, t)
    }

    /// `self + h k`
    pub fn axpy(&self, h: f64, k: &Vars) -> Result<Vars> {
        Ok(Vars {
            scalar: self.scalar.zip_with(&k.scalar, |a, b| a + h * b)?,
            vector: self.vector.zip_with(&k.vector, |a, b| a + h * b)?,
        })
    }

    /// Apply `e^{-μ t Λ^α}` to the vector part.
    pub fn dissipate(&self, p: &ModelParams, t: f64) -> Vars {
        Vars {
            scalar: self.scalar.clone(),
            vector: heat_multiplier_unchecked(&self.vector, p.alpha(), p.mu() * t),
        }
    }
}

fn reciprocal(rho: &Field) -> Result<Field> {
    let min = rho.min_value();
    if !(min > 0.0) {
        return Err(Error::Vacuum {
            min,
            threshold: 0.0,
        });
    }
    Ok(rho.map(|r| 1.0 / r))
}

fn partial(f: &SpectralField, axis: usize) -> Result<SpectralField> {
    spectral_derivative(f, Derivative::Partial(axis))
}

/// `Σ_j a_j ∂_j f` for a vector `a` and any `f`, evaluated pointwise.
fn advect(a: &Field, f: &SpectralField) -> Result<Field> {
    let mut acc = Field::zeros(*a.grid(), f.n_components());
    for j in 0..a.n_components() {
        let d = partial(f, j)?.to_physical();
        acc = acc.add(&d.times_scalar(&a.extract(j))?)?;
    }
    Ok(acc)
}

/// Everything except `-μ Λ^α` on the vector part.
pub(crate) fn explicit_rhs(
    repr: Representation,
    v: &Vars,
    p: &ModelParams,
    dynamics: Dynamics,
) -> Result<Vars> {
    let lambda = p.lambda();
    let grid = *v.scalar.grid();
    match (repr, dynamics) {
        (Representation::RhoU, Dynamics::Linear) => {
            let rho_t = spectral_derivative(&v.vector, Derivative::Div)?.scaled(-1.0);
            let m_t = spectral_derivative(&v.scalar, Derivative::Grad)?.scaled(-lambda * lambda);
            Ok(Vars {
                scalar: rho_t,
                vector: m_t,
            })
        }
        (Representation::SigmaU, Dynamics::Linear) => {
            let s_t = spectral_derivative(&v.vector, Derivative::Div)?.scaled(-lambda);
            let u_t = spectral_derivative(&v.scalar, Derivative::Grad)?.scaled(-lambda);
            Ok(Vars {
                scalar: s_t,
                vector: u_t,
            })
        }
        (Representation::RhoU, Dynamics::Full) => {
            let rho = v.scalar.to_physical();
            let m = v.vector.to_physical();
            let u = m.times_scalar(&reciprocal(&rho)?)?;
            let rho_t = spectral_derivative(&v.vector, Derivative::Div)?.scaled(-1.0);

            let mut m_t = SpectralField::zeros(grid, grid.dim());
            for j in 0..grid.dim() {
                let flux = m.times_scalar(&u.extract(j))?.to_spectral();
                m_t = m_t.sub(&partial(&flux, j)?)?;
            }
            let (kappa, gamma) = (p.kappa(), p.gamma());
            let pressure = rho.map(|r| kappa * r.powf(gamma)).to_spectral();
            m_t = m_t.sub(&spectral_derivative(&pressure, Derivative::Grad)?)?;

            // ρ Λ^α m - m Λ^α ρ, with the linear part Λ^α m removed
            let lm = fractional_laplacian(&v.vector, p.alpha())?.to_physical();
            let lr = fractional_laplacian(&v.scalar, p.alpha())?.to_physical();
            let excess = rho.map(|r| r - 1.0);
            let align = lm.times_scalar(&excess)?.sub(&m.times_scalar(&lr)?)?;
            m_t = m_t.sub(&align.to_spectral().scaled(p.mu()))?;
            Ok(Vars {
                scalar: rho_t,
                vector: dealias(&m_t),
            })
        }
        (Representation::SigmaU, Dynamics::Full) => {
            let sigma = v.scalar.to_physical();
            rho_from_sigma(&sigma, p)?;
            let u = v.vector.to_physical();
            let div_u = spectral_derivative(&v.vector, Derivative::Div)?;
            let div_u_phys = div_u.to_physical();
            let transport = advect(&u, &v.scalar)?;
            let stretch = sigma.times_scalar(&div_u_phys)?.scaled(p.gamma() - 1.0);
            let s_t = transport
                .add(&stretch)?
                .to_spectral()
                .add(&div_u.scaled(lambda))?
                .scaled(-1.0);

            let adv = advect(&u, &v.vector)?.to_spectral();
            let h = dealias(&sigma.map(|s| h_of_sigma(s, p)).to_spectral());
            let comm = alignment_commutator(&v.vector, &h, p.alpha())?;
            let grad = spectral_derivative(&v.scalar, Derivative::Grad)?;
            let u_t = adv
                .add(&grad.scaled(lambda))?
                .add(&comm.scaled(p.mu()))?
                .scaled(-1.0);
            Ok(Vars {
                scalar: dealias(&s_t),
                vector: dealias(&u_t),
            })
        }
    }
}

pub(crate) fn full_rhs(
    repr: Representation,
    v: &Vars,
    p: &ModelParams,
    dynamics: Dynamics,
) -> Result<Vars> {
    let mut k = explicit_rhs(repr, v, p, dynamics)?;
    let damp = fractional_laplacian(&v.vector, p.alpha())?;
    k.vector = k.vector.sub(&damp.scaled(p.mu()))?;
    Ok(k)
}

/// Time derivative of `state` under the full system.
pub fn rhs(state: &State, p: &ModelParams) -> Result<Tendency> {
    rhs_with(state, p, Dynamics::Full)
}

pub fn rhs_with(state: &State, p: &ModelParams, dynamics: Dynamics) -> Result<Tendency> {
    let repr = state.representation();
    if repr == Representation::RhoU {
        sigma_from_rho(state.scalar(), p)?;
    }
    let v = Vars::from_state(state)?;
    let k = full_rhs(repr, &v, p, dynamics)?;
    let scalar_t = k.scalar.to_physical();
    let velocity = match repr {
        Representation::SigmaU => k.vector.to_physical(),
        Representation::RhoU => {
            // ∂t u = (∂t m - u ∂t ρ) / ρ
            let rho = v.scalar.to_physical();
            let u = v.vector.to_physical().times_scalar(&reciprocal(&rho)?)?;
            let num = k.vector.to_physical().sub(&u.times_scalar(&scalar_t)?)?;
            dealias(&num.times_scalar(&reciprocal(&rho)?)?.to_spectral()).to_physical()
        }
    };
    Ok(Tendency {
        scalar: scalar_t,
        velocity,
    })
}

/// Tendencies `(∂t ρ, ∂t(ρu))` of the conserved variables of a `rho_u` state.
pub fn conserved_tendency(state: &State, p: &ModelParams) -> Result<(Field, Field)> {
    let state = state.to_representation(Representation::RhoU, p)?;
    let v = Vars::from_state(&state)?;
    let k = full_rhs(Representation::RhoU, &v, p, Dynamics::Full)?;
    Ok((k.scalar.to_physical(), k.vector.to_physical()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::state::dsigma_drho;
    use crate::spectral::Grid;
    use std::f64::consts::PI;

    fn params(gamma: f64) -> ModelParams {
        ModelParams::new(1, 1.5, 1.3, gamma, None).unwrap()
    }

    fn smooth_state(g: Grid) -> State {
        let rho = Field::scalar_from_fn(g, |x| 1.0 + 0.2 * x[0].cos() + 0.1 * (2.0 * x[0]).sin());
        let u = Field::vector_from_fn(g, |x, _| 0.3 * x[0].sin() - 0.1 * (3.0 * x[0]).cos());
        State::new(Representation::RhoU, rho, u, 0.0).unwrap()
    }

    #[test]
    fn equilibrium_is_fixed() {
        let g = Grid::new(2, 16, 2.0 * PI).unwrap();
        for repr in [Representation::RhoU, Representation::SigmaU] {
            let s = State::equilibrium(g, repr);
            let k = rhs(&s, &params(1.4)).unwrap();
            assert_eq!(k.scalar.max_abs(), 0.0);
            assert_eq!(k.velocity.max_abs(), 0.0);
        }
    }

    #[test]
    fn static_velocity_only_feels_pressure() {
        let g = Grid::new(1, 64, 2.0 * PI).unwrap();
        let p = params(1.0);
        let sigma = Field::scalar_from_fn(g, |x| 0.1 * (2.0 * x[0]).cos());
        let s = State::new(
            Representation::SigmaU,
            sigma.clone(),
            Field::zeros(g, 1),
            0.0,
        )
        .unwrap();
        let k = rhs(&s, &p).unwrap();
        assert!(k.scalar.max_abs() < 1e-16);
        let want = Field::scalar_from_fn(g, |x| 0.2 * p.lambda() * (2.0 * x[0]).sin());
        assert!(k.velocity.sub(&want).unwrap().max_abs() < 1e-13);
    }

    #[test]
    fn representations_agree_through_chain_rule() {
        let g = Grid::new(1, 128, 2.0 * PI).unwrap();
        for gamma in [1.0, 1.4, 2.0] {
            let p = params(gamma);
            let s_rho = smooth_state(g);
            let s_sig = s_rho.to_representation(Representation::SigmaU, &p).unwrap();
            let a = rhs(&s_rho, &p).unwrap();
            let b = rhs(&s_sig, &p).unwrap();
            let rho = s_rho.scalar();
            let chain = a
                .scalar
                .zip_with(rho, |rt, r| dsigma_drho(r, &p) * rt)
                .unwrap();
            let es = chain.sub(&b.scalar).unwrap().l2_norm() / b.scalar.l2_norm();
            let eu = a.velocity.sub(&b.velocity).unwrap().l2_norm() / b.velocity.l2_norm();
            assert!(es < 1e-7 && eu < 1e-7, "gamma {gamma}: {es} {eu}");
        }
    }

    #[test]
    fn conserved_tendencies_integrate_to_zero() {
        let g = Grid::new(2, 32, 2.0 * PI).unwrap();
        let rho = Field::scalar_from_fn(g, |x| 1.0 + 0.2 * x[0].cos() * x[1].sin());
        let u = Field::vector_from_fn(g, |x, c| {
            if c == 0 {
                0.3 + 0.2 * x[1].sin()
            } else {
                0.1 * (x[0] + x[1]).cos()
            }
        });
        let s = State::new(Representation::RhoU, rho, u, 0.0).unwrap();
        let (rt, mt) = conserved_tendency(&s, &params(1.4)).unwrap();
        let scale = mt.l2_norm();
        assert!(rt.integral(0).abs() < 1e-12 * scale);
        assert!(mt.integral(0).abs() < 1e-12 * scale);
        assert!(mt.integral(1).abs() < 1e-12 * scale);
    }
}
