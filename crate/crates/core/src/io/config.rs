//! Run configuration in INI form.
//!
//! ```text
//! [grid]    dim, n, L                         (all required)
//! [model]   alpha, kappa, gamma               (required)
//!           mu              default 1/|c_{α,N}|
//!           representation  rho_u | sigma_u, default rho_u
//! [time]    t_end (required), dt (default from cfl), cfl (default 0.4)
//! [ic]      preset (required), amplitude (required), seed (0),
//!           width (L/16, gaussian_bump), mode (1, single_mode)
//! [output]  cadence (10), snapshot_every (none), j0 (model split),
//!           norm.<name> = <sigma|u|pair> <kind> <args>
//! [decay]   s0, s1 (together), t_a, t_b (together)
//! ```
//!
//! Norm kinds: `hom <s> <1|inf>`, `hyb <s_low> <s_high> [j0]`,
//! `low <s> <1|inf> [j0]`, `high <s> <1|inf> [j0]`; a missing `j0` means
//! the run's split index.

use std::collections::BTreeMap;
use std::str::FromStr;

use ini::{Ini, ParseOption};

use crate::besov::{NormSpec, Part, Summation};
use crate::error::{Error, Result};
use crate::model::{ModelParams, Representation};
use crate::simulation::{DecaySpec, IcSpec, NamedNorm, NormTarget, Preset, SimConfig};
use crate::spectral::{Grid, LpDecomp};

struct Table {
    entries: BTreeMap<String, String>,
}

impl Table {
    fn parse(text: &str) -> Result<Table> {
        let opt = ParseOption {
            enabled_quote: false,
            enabled_escape: false,
            ..Default::default()
        };
        let ini = Ini::load_from_str_opt(text, opt)
            .map_err(|e| Error::config(format!("line {}", e.line), e.msg.to_string()))?;
        let mut entries = BTreeMap::new();
        for (section, props) in ini.iter() {
            for (key, value) in props.iter() {
                let Some(section) = section else {
                    return Err(Error::config(key, "key outside of any section"));
                };
                let path = format!("{section}.{key}");
                if entries
                    .insert(path.clone(), value.trim().to_string())
                    .is_some()
                {
                    return Err(Error::config(path, "duplicate key"));
                }
            }
        }
        Ok(Table { entries })
    }

    fn take(&mut self, path: &str) -> Option<String> {
        self.entries.remove(path)
    }

    fn required<T: FromStr>(&mut self, path: &str) -> Result<T> {
        match self.take(path) {
            Some(v) => parse_value(path, &v),
            None => Err(Error::config(path, "missing required key")),
        }
    }

    fn optional<T: FromStr>(&mut self, path: &str) -> Result<Option<T>> {
        self.take(path).map(|v| parse_value(path, &v)).transpose()
    }

    fn take_prefixed(&mut self, prefix: &str) -> Vec<(String, String)> {
        let keys: Vec<String> = self
            .entries
            .keys()
            .filter(|k| k.starts_with(prefix))
            .cloned()
            .collect();
        keys.into_iter()
            .map(|k| {
                let v = self.entries.remove(&k).unwrap_or_default();
                (k, v)
            })
            .collect()
    }
}

fn parse_value<T: FromStr>(path: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| {
        Error::config(
            path,
            format!("cannot parse {v:?} as {}", std::any::type_name::<T>()),
        )
    })
}

/// Re-key a validation error onto its configuration path.
fn at(path: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::Parameter(m) => Error::config(path, m),
        other => other,
    }
}

fn summation(path: &str, s: &str) -> Result<Summation> {
    match s {
        "1" => Ok(Summation::Sum),
        "inf" => Ok(Summation::Sup),
        _ => Err(Error::config(
            path,
            format!("summation index must be 1 or inf, got {s}"),
        )),
    }
}

fn parse_norm(path: &str, value: &str, split: i32) -> Result<(NormTarget, NormSpec)> {
    let words: Vec<&str> = value.split_whitespace().collect();
    let num = |i: usize| -> Result<f64> {
        let w = words
            .get(i)
            .ok_or_else(|| Error::config(path, "missing norm argument"))?;
        let v: f64 = parse_value(path, w)?;
        if !v.is_finite() {
            return Err(Error::config(path, "norm exponents must be finite"));
        }
        Ok(v)
    };
    let split_at = |i: usize| -> Result<i32> {
        match words.get(i) {
            Some(w) => parse_value(path, w),
            None => Ok(split),
        }
    };
    let target = words
        .first()
        .and_then(|w| NormTarget::parse(w))
        .ok_or_else(|| Error::config(path, "norm target must be sigma, u or pair"))?;
    let kind = words.get(1).copied().unwrap_or("");
    let (spec, arity) = match kind {
        "hom" => (
            NormSpec::Homogeneous {
                s: num(2)?,
                r: summation(path, words.get(3).copied().unwrap_or(""))?,
            },
            4,
        ),
        "hyb" => (
            NormSpec::Hybrid {
                s_low: num(2)?,
                s_high: num(3)?,
                j0: split_at(4)?,
            },
            5,
        ),
        "low" | "high" => (
            NormSpec::Restricted {
                s: num(2)?,
                r: summation(path, words.get(3).copied().unwrap_or(""))?,
                part: if kind == "low" { Part::Low } else { Part::High },
                j0: split_at(4)?,
            },
            5,
        ),
        _ => return Err(Error::config(path, format!("unknown norm kind {kind:?}"))),
    };
    if words.len() > arity {
        return Err(Error::config(path, "too many norm arguments"));
    }
    Ok((target, spec))
}

/// Parse and validate a configuration.
pub fn parse_config(text: &str) -> Result<SimConfig> {
    let mut t = Table::parse(text)?;

    let dim: usize = t.required("grid.dim")?;
    let n: usize = t.required("grid.n")?;
    let length: f64 = t.required("grid.L")?;
    if dim != 1 && dim != 2 {
        return Err(Error::config("grid.dim", "dim must be 1 or 2"));
    }
    let grid = Grid::new(dim, n, length).map_err(|e| match e {
        Error::Parameter(m) if m.starts_with("n ") => Error::config("grid.n", m),
        Error::Parameter(m) => Error::config("grid.L", m),
        other => other,
    })?;

    let alpha: f64 = t.required("model.alpha")?;
    if !(alpha > 1.0 && alpha < 2.0) {
        return Err(Error::config("model.alpha", "alpha must lie in (1,2)"));
    }
    let kappa: f64 = t.required("model.kappa")?;
    let gamma: f64 = t.required("model.gamma")?;
    let mu: Option<f64> = t.optional("model.mu")?;
    ModelParams::new(dim, alpha, kappa, 1.0, Some(1.0)).map_err(at("model.kappa"))?;
    ModelParams::new(dim, alpha, 1.0, gamma, Some(1.0)).map_err(at("model.gamma"))?;
    let params = ModelParams::new(dim, alpha, kappa, gamma, mu).map_err(at("model.mu"))?;
    let representation = match t.take("model.representation") {
        None => Representation::RhoU,
        Some(v) => Representation::parse(&v).ok_or_else(|| {
            Error::config(
                "model.representation",
                "representation must be rho_u or sigma_u",
            )
        })?,
    };

    let t_end: f64 = t.required("time.t_end")?;
    let preset_name: String = t.required("ic.preset")?;
    let preset = Preset::parse(&preset_name).ok_or_else(|| {
        Error::config(
            "ic.preset",
            "preset must be gaussian_bump, random_smooth or single_mode",
        )
    })?;
    let amplitude: f64 = t.required("ic.amplitude")?;
    let mut ic = IcSpec::new(preset, amplitude);
    ic.seed = t.optional("ic.seed")?.unwrap_or(0);
    ic.width = t.optional("ic.width")?;
    ic.mode = t.optional("ic.mode")?.unwrap_or(1);

    let mut config = SimConfig::new(grid, params, t_end, ic);
    config.representation = representation;
    config.dt = t.optional("time.dt")?;
    if let Some(cfl) = t.optional("time.cfl")? {
        config.cfl = cfl;
    }
    if let Some(c) = t.optional("output.cadence")? {
        config.cadence = c;
    }
    config.snapshot_every = t.optional("output.snapshot_every")?;
    config.j0 = t.optional("output.j0")?;
    let split = config.split_index();
    for (path, value) in t.take_prefixed("output.norm.") {
        let name = path["output.norm.".len()..].to_string();
        let (target, spec) = parse_norm(&path, &value, split)?;
        spec.validate(&LpDecomp::new(grid)).map_err(at(&path))?;
        config.norms.push(NamedNorm { name, target, spec });
    }

    let s0: Option<f64> = t.optional("decay.s0")?;
    let s1: Option<f64> = t.optional("decay.s1")?;
    config.decay = match (s0, s1) {
        (Some(s0), Some(s1)) => Some(DecaySpec::new(s0, s1, alpha, dim).map_err(|e| match e {
            Error::Parameter(m) if m.starts_with("s1") => Error::config("decay.s1", m),
            Error::Parameter(m) => Error::config("decay.s0", m),
            other => other,
        })?),
        (None, None) => None,
        _ => {
            return Err(Error::config(
                "decay.s0",
                "s0 and s1 must be given together",
            ))
        }
    };
    let ta: Option<f64> = t.optional("decay.t_a")?;
    let tb: Option<f64> = t.optional("decay.t_b")?;
    config.fit_window = match (ta, tb) {
        (Some(a), Some(b)) => Some((a, b)),
        (None, None) => None,
        _ => {
            return Err(Error::config(
                "decay.t_a",
                "t_a and t_b must be given together",
            ))
        }
    };

    if let Some(key) = t.entries.keys().next() {
        return Err(Error::config(key.clone(), "unknown key"));
    }
    config.validate().map_err(|e| match e {
        Error::Parameter(m) => {
            let key = if m.starts_with("t_end") {
                "time.t_end"
            } else if m.starts_with("dt") {
                "time.dt"
            } else if m.starts_with("cfl") {
                "time.cfl"
            } else if m.starts_with("amplitude") {
                "ic.amplitude"
            } else if m.starts_with("width") {
                "ic.width"
            } else if m.starts_with("mode") {
                "ic.mode"
            } else if m.starts_with("cadence") {
                "output.cadence"
            } else if m.starts_with("snapshot") {
                "output.snapshot_every"
            } else if m.starts_with("fit window") {
                "decay.t_a"
            } else {
                "output.norm"
            };
            Error::config(key, m)
        }
        other => other,
    })?;
    Ok(config)
}
