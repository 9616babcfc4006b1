use crate::besov::{CheminLernerAccumulator, NormSpec, NormTrace, Summation, TimeNorm};
use crate::error::{Error, Result};
use crate::model::{ModelParams, State, Vars};
use crate::spectral::{LpDecomp, SpectralField};

use super::config::{NamedNorm, NormTarget, SimConfig};
use super::ic::initial_state;
use super::stepper::Stepper;

/// Running Chemin-Lerner columns appended by [`run`].
pub const RUNNING_COLUMNS: [&str; 4] = ["xt_sigma_inf", "xt_u_inf", "xt_sigma_l1", "xt_u_l1"];

/// How a run ended.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RunStatus {
    Completed,
    /// Density fell below the vacuum threshold; the trace stops before `t`.
    Vacuum {
        t: f64,
        min_rho: f64,
    },
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub trace: NormTrace,
    pub status: RunStatus,
    pub final_state: State,
    /// States at the snapshot cadence, starting with the initial state.
    pub snapshots: Vec<State>,
    pub dt: f64,
    pub steps: usize,
    /// `‖σ0‖_{B̃^{N/2+1-α,N/2}} + ‖u0‖_{Ḃ^{N/2+1-α}}`
    pub x0: f64,
}

impl RunOutput {
    /// Sum of the four running Chemin-Lerner norms at the last trace row.
    pub fn x_final(&self) -> f64 {
        RUNNING_COLUMNS
            .iter()
            .map(|c| {
                self.trace
                    .column(c)
                    .and_then(|v| v.last().copied())
                    .unwrap_or(0.0)
            })
            .sum()
    }

    /// `X(T) / X0`, or `None` for data with `X0 = 0`.
    pub fn amplification(&self) -> Option<f64> {
        (self.x0 > 0.0).then(|| self.x_final() / self.x0)
    }
}

fn hybrid(s_low: f64, s_high: f64, j0: i32) -> NormSpec {
    NormSpec::Hybrid { s_low, s_high, j0 }
}

fn homogeneous(s: f64) -> NormSpec {
    NormSpec::Homogeneous {
        s,
        r: Summation::Sum,
    }
}

/// Built-in composite columns: the critical hybrid norm of `σ`, the
/// critical norm of `u` and the running Chemin-Lerner norms.
pub const COMPOSITE_COLUMNS: [&str; 6] = [
    "sigma_hyb",
    "u_crit",
    "xt_sigma_inf",
    "xt_u_inf",
    "xt_sigma_l1",
    "xt_u_l1",
];

/// Columns of the exported trace file: the basic diagnostics and the
/// configured norms, without [`COMPOSITE_COLUMNS`].
pub fn output_column_names(dim: usize, norms: &[NamedNorm]) -> Vec<String> {
    static_column_names(dim, norms)
        .into_iter()
        .filter(|n| !COMPOSITE_COLUMNS.contains(&n.as_str()))
        .collect()
}

/// Names of the per-state columns, in trace order.
pub fn static_column_names(dim: usize, norms: &[NamedNorm]) -> Vec<String> {
    let mut names = vec!["min_rho".to_string(), "mass".to_string()];
    names.extend((1..=dim).map(|c| format!("mom_{c}")));
    names.extend(["l2_sigma", "l2_u", "sigma_hyb", "u_crit"].map(String::from));
    names.extend(norms.iter().map(|n| n.name.clone()));
    names
}

/// Column names of a run trace (after `t`).
pub fn trace_column_names(dim: usize, norms: &[NamedNorm]) -> Vec<String> {
    let mut names = static_column_names(dim, norms);
    let at = names.len() - norms.len();
    for (i, c) in RUNNING_COLUMNS.iter().enumerate() {
        names.insert(at + i, c.to_string());
    }
    names
}

/// Per-state diagnostics plus the dyadic block norms of `σ` and `u`.
pub struct StateDiagnostics {
    pub values: Vec<f64>,
    pub sigma_blocks: Vec<f64>,
    pub u_blocks: Vec<f64>,
}

/// Evaluate the columns of [`static_column_names`] on a state.
pub fn state_diagnostics(
    state: &State,
    params: &ModelParams,
    j0: i32,
    norms: &[NamedNorm],
) -> Result<StateDiagnostics> {
    let grid = *state.grid();
    let rho = state.rho(params)?;
    let sigma = state.sigma(params)?;
    let u = state.velocity();
    let mut values = vec![rho.min_value(), rho.integral(0)];
    let mom = u.times_scalar(&rho)?;
    values.extend((0..grid.dim()).map(|c| mom.integral(c)));
    values.push(sigma.l2_norm());
    values.push(u.l2_norm());

    let lp = LpDecomp::new(grid);
    let j0 = j0.clamp(lp.j_min() - 1, lp.j_max() + 1);
    let half = grid.dim() as f64 / 2.0;
    let crit = half + 1.0 - params.alpha();
    let s_hat = sigma.to_spectral();
    let u_hat = u.to_spectral();
    let sigma_blocks = lp.block_norms(&s_hat);
    let u_blocks = lp.block_norms(&u_hat);
    values.push(hybrid(crit, half, j0).combine(lp.j_min(), &sigma_blocks));
    values.push(homogeneous(crit).combine(lp.j_min(), &u_blocks));

    let mut pair_blocks = None;
    for n in norms {
        let blocks = match n.target {
            NormTarget::Sigma => &sigma_blocks,
            NormTarget::U => &u_blocks,
            NormTarget::Pair => pair_blocks.get_or_insert_with(|| {
                let pair = SpectralField::stack(&[s_hat.clone(), u_hat.clone()])
                    .expect("sigma and u share the grid");
                lp.block_norms(&pair)
            }),
        };
        values.push(n.spec.combine(lp.j_min(), blocks));
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::Data(format!("diagnostic column {i} is not finite")));
    }
    Ok(StateDiagnostics {
        values,
        sigma_blocks,
        u_blocks,
    })
}

/// Step size and step count: `dt0 = min(cfl Δx / max(|u| + λ), Δx / 2)`
/// unless fixed by the config, then shrunk so that the step count is a
/// multiple of the cadence and lands exactly on `t_end`.
pub fn plan_steps(config: &SimConfig, initial: &State) -> (f64, usize) {
    let dx = config.grid.dx();
    let dt0 = config.dt.unwrap_or_else(|| {
        let speed = initial.velocity().max_abs() + config.params.lambda();
        (config.cfl * dx / speed).min(0.5 * dx)
    });
    let cad = config.cadence;
    let raw = (config.t_end / dt0 * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    let steps = raw.div_ceil(cad) * cad;
    (config.t_end / steps as f64, steps)
}

/// Run the configured simulation from its preset initial condition.
pub fn run(config: &SimConfig) -> Result<RunOutput> {
    config.validate()?;
    let s0 = initial_state(
        config.grid,
        &config.ic,
        &config.params,
        config.representation,
    )?;
    run_from(config, &s0)
}

/// Run the configured simulation from a given initial state.
pub fn run_from(config: &SimConfig, initial: &State) -> Result<RunOutput> {
    config.validate()?;
    config.grid.ensure_same(initial.grid())?;
    let p = config.params;
    let repr = config.representation;
    let initial = initial.to_representation(repr, &p)?.with_time(0.0);
    initial.validate(&p)?;
    let (dt, steps) = plan_steps(config, &initial);
    let j0 = config.split_index();
    let dim = config.grid.dim();
    let half = dim as f64 / 2.0;
    let a = p.alpha();
    let crit = half + 1.0 - a;
    let lp = LpDecomp::new(config.grid);
    let j0c = j0.clamp(lp.j_min() - 1, lp.j_max() + 1);
    let mut accumulators = [
        CheminLernerAccumulator::new(hybrid(crit, half, j0c), TimeNorm::LInf, lp.j_min()),
        CheminLernerAccumulator::new(homogeneous(crit), TimeNorm::LInf, lp.j_min()),
        CheminLernerAccumulator::new(
            hybrid(half + 1.0, half + 2.0 - a, j0c),
            TimeNorm::L1,
            lp.j_min(),
        ),
        CheminLernerAccumulator::new(homogeneous(half + 1.0), TimeNorm::L1, lp.j_min()),
    ];
    let n_static = static_column_names(dim, &config.norms).len() - config.norms.len();

    let mut trace = NormTrace::new(trace_column_names(dim, &config.norms));
    let mut snapshots = Vec::new();
    let mut record = |state: &State, rows: usize| -> Result<f64> {
        let d = state_diagnostics(state, &p, j0, &config.norms)?;
        let t = state.time();
        let mut row = d.values[..n_static].to_vec();
        for (i, acc) in accumulators.iter_mut().enumerate() {
            let blocks = if i % 2 == 0 {
                &d.sigma_blocks
            } else {
                &d.u_blocks
            };
            acc.push(t, blocks)?;
            row.push(acc.value());
        }
        row.extend_from_slice(&d.values[n_static..]);
        trace.push(t, row)?;
        if config
            .snapshot_every
            .is_some_and(|k| rows.is_multiple_of(k))
        {
            snapshots.push(state.clone());
        }
        Ok(d.values[n_static - 2] + d.values[n_static - 1])
    };

    let mut w = Vars::from_state(&initial)?;
    let mut state = w.to_state(repr, 0.0)?;
    let x0 = record(&state, 0)?;
    let mut stepper = Stepper::new(p, repr).with_cfl(config.cfl);
    let mut status = RunStatus::Completed;
    let mut taken = 0;
    for k in 1..=steps {
        let t = k as f64 * dt;
        match stepper.advance(&w, dt) {
            Ok(next) => w = next,
            Err(Error::Vacuum { min, .. }) => {
                log::error!("vacuum at t = {t}: min density {min}");
                status = RunStatus::Vacuum { t, min_rho: min };
                break;
            }
            Err(e) => return Err(e),
        }
        taken = k;
        if k % config.cadence == 0 {
            state = w.to_state(repr, t)?;
            record(&state, k / config.cadence)?;
        }
    }
    if taken % config.cadence != 0 {
        state = w.to_state(repr, taken as f64 * dt)?;
    }
    Ok(RunOutput {
        trace,
        status,
        final_state: state,
        snapshots,
        dt,
        steps: taken,
        x0,
    })
}
