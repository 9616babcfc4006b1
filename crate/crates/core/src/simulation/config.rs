use crate::besov::NormSpec;
use crate::error::{Error, Result};
use crate::model::{ModelParams, Representation};
use crate::spectral::Grid;

/// Initial-condition family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// `σ` and every velocity component equal to a centred Gaussian.
    GaussianBump,
    /// Seeded random coefficients with envelope `|ξ|^{-(N/2+2)}`.
    RandomSmooth,
    /// `σ = A cos(ξ·x)`, `u_1 = A sin(ξ·x)` along the first axis.
    SingleMode,
}

impl Preset {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "gaussian_bump" => Some(Preset::GaussianBump),
            "random_smooth" => Some(Preset::RandomSmooth),
            "single_mode" => Some(Preset::SingleMode),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Preset::GaussianBump => "gaussian_bump",
            Preset::RandomSmooth => "random_smooth",
            Preset::SingleMode => "single_mode",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IcSpec {
    pub preset: Preset,
    /// Sup norm of `σ` and of each velocity component.
    pub amplitude: f64,
    pub seed: u64,
    /// Gaussian standard deviation; defaults to `L/16`.
    pub width: Option<f64>,
    /// Integer wavenumber of the single-mode preset.
    pub mode: u32,
}

impl IcSpec {
    pub fn new(preset: Preset, amplitude: f64) -> Self {
        IcSpec {
            preset,
            amplitude,
            seed: 0,
            width: None,
            mode: 1,
        }
    }
}

/// Field a configured norm is applied to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormTarget {
    Sigma,
    U,
    /// The stacked pair `(σ, u)`, blocks measured in the joint `L²` norm.
    Pair,
}

impl NormTarget {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "sigma" => Some(NormTarget::Sigma),
            "u" => Some(NormTarget::U),
            "pair" => Some(NormTarget::Pair),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NamedNorm {
    pub name: String,
    pub target: NormTarget,
    pub spec: NormSpec,
}

/// Regularity indices of a decay statement `(1+t)^{-(s1+s0)/α}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecaySpec {
    s0: f64,
    s1: f64,
    alpha: f64,
}

impl DecaySpec {
    /// Requires `s0 ∈ (α - N/2 - 1, N/2)` and `s1 ∈ [-s0, N/2 + 1 - α]`.
    pub fn new(s0: f64, s1: f64, alpha: f64, dim: usize) -> Result<Self> {
        let half = dim as f64 / 2.0;
        if !(s0 > alpha - half - 1.0 && s0 < half) {
            return Err(Error::Parameter(format!(
                "s0 must lie in ({}, {half}), got {s0}",
                alpha - half - 1.0
            )));
        }
        if !(s1 >= -s0 && s1 <= half + 1.0 - alpha) {
            return Err(Error::Parameter(format!(
                "s1 must lie in [{}, {}], got {s1}",
                -s0,
                half + 1.0 - alpha
            )));
        }
        Ok(DecaySpec { s0, s1, alpha })
    }

    pub fn s0(&self) -> f64 {
        self.s0
    }

    pub fn s1(&self) -> f64 {
        self.s1
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Predicted exponent `-(s1 + s0)/α`.
    pub fn exponent(&self) -> f64 {
        -(self.s1 + self.s0) / self.alpha
    }
}

/// Everything needed to reproduce one simulation.
#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub grid: Grid,
    pub params: ModelParams,
    pub representation: Representation,
    pub t_end: f64,
    /// Fixed step; when absent it follows from `cfl`.
    pub dt: Option<f64>,
    pub cfl: f64,
    pub ic: IcSpec,
    /// Steps between trace rows.
    pub cadence: usize,
    pub norms: Vec<NamedNorm>,
    /// Trace rows between snapshots; `None` keeps only the final state.
    pub snapshot_every: Option<usize>,
    /// Split index for the built-in hybrid norms; defaults to the model's.
    pub j0: Option<i32>,
    pub decay: Option<DecaySpec>,
    pub fit_window: Option<(f64, f64)>,
}

pub const DEFAULT_CFL: f64 = 0.4;
pub const DEFAULT_CADENCE: usize = 10;

impl SimConfig {
    pub fn new(grid: Grid, params: ModelParams, t_end: f64, ic: IcSpec) -> Self {
        SimConfig {
            grid,
            params,
            representation: Representation::RhoU,
            t_end,
            dt: None,
            cfl: DEFAULT_CFL,
            ic,
            cadence: DEFAULT_CADENCE,
            norms: Vec::new(),
            snapshot_every: None,
            j0: None,
            decay: None,
            fit_window: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return Err(Error::Parameter(format!(
                "t_end must be positive, got {}",
                self.t_end
            )));
        }
        if let Some(dt) = self.dt {
            if !(dt.is_finite() && dt > 0.0) {
                return Err(Error::Parameter(format!("dt must be positive, got {dt}")));
            }
        }
        if !(self.cfl.is_finite() && self.cfl > 0.0) {
            return Err(Error::Parameter(format!(
                "cfl must be positive, got {}",
                self.cfl
            )));
        }
        if !(self.ic.amplitude.is_finite() && self.ic.amplitude >= 0.0) {
            return Err(Error::Parameter(format!(
                "amplitude must be nonnegative, got {}",
                self.ic.amplitude
            )));
        }
        if let Some(w) = self.ic.width {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::Parameter(format!("width must be positive, got {w}")));
            }
        }
        if self.ic.preset == Preset::SingleMode
            && (self.ic.mode == 0 || self.ic.mode as f64 > self.grid.dealias_cutoff())
        {
            return Err(Error::Parameter(format!(
                "mode must lie in [1, n/3], got {}",
                self.ic.mode
            )));
        }
        if self.cadence == 0 {
            return Err(Error::Parameter("cadence must be at least 1".into()));
        }
        if self.snapshot_every == Some(0) {
            return Err(Error::Parameter("snapshot_every must be at least 1".into()));
        }
        for (i, n) in self.norms.iter().enumerate() {
            if n.name.is_empty() || n.name.contains([',', '"', '\n', '\r']) {
                return Err(Error::Parameter(format!("invalid norm name {:?}", n.name)));
            }
            let builtin = super::run::trace_column_names(self.grid.dim(), &[]);
            if n.name == "t" || builtin.contains(&n.name) {
                return Err(Error::Parameter(format!(
                    "norm name {} is reserved",
                    n.name
                )));
            }
            if self.norms[..i].iter().any(|m| m.name == n.name) {
                return Err(Error::Parameter(format!("duplicate norm name {}", n.name)));
            }
        }
        if let Some((a, b)) = self.fit_window {
            if !(a >= 0.0 && b > a) {
                return Err(Error::Parameter(format!("fit window [{a}, {b}] is empty")));
            }
        }
        Ok(())
    }

    /// Split index used by the built-in hybrid norms.
    pub fn split_index(&self) -> i32 {
        self.j0.unwrap_or_else(|| self.params.j0())
    }
}
