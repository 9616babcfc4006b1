//! Besov-type norms built on the dyadic blocks of [`LpDecomp`], their
//! Chemin-Lerner time versions, and Bony's paraproduct decomposition.
//!
//! Every norm uses `p = 2` and ignores the mean mode.

use crate::error::{Error, Result};
use crate::spectral::{dealias, physical_product, Field, LpDecomp, SpectralField};

/// Summation exponent over dyadic blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Summation {
    /// `ℓ¹`
    Sum,
    /// `ℓ^∞`
    Sup,
}

/// Which side of the split index a restricted norm keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    /// `j <= j0`
    Low,
    /// `j > j0`
    High,
}

/// Norm selector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormSpec {
    /// `‖f‖_{Ḃ^s_{2,r}}`
    Homogeneous { s: f64, r: Summation },
    /// `Σ_{j<=j0} 2^{j s_low}‖Δ̇_j f‖ + Σ_{j>j0} 2^{j s_high}‖Δ̇_j f‖`
    Hybrid { s_low: f64, s_high: f64, j0: i32 },
    /// Low or high part of `‖f‖_{Ḃ^s_{2,r}}` split at `j0`.
    Restricted {
        s: f64,
        r: Summation,
        part: Part,
        j0: i32,
    },
}

impl NormSpec {
    /// Check exponents and that any split index lies in the resolved range.
    pub fn validate(&self, lp: &LpDecomp) -> Result<()> {
        let (exps, j0): (&[f64], Option<i32>) = match self {
            NormSpec::Homogeneous { s, .. } => (std::slice::from_ref(s), None),
            NormSpec::Hybrid { s_low, s_high, j0 } => {
                if !(s_low.is_finite() && s_high.is_finite()) {
                    return Err(Error::Parameter("hybrid exponents must be finite".into()));
                }
                (&[], Some(*j0))
            }
            NormSpec::Restricted { s, j0, .. } => (std::slice::from_ref(s), Some(*j0)),
        };
        if exps.iter().any(|s| !s.is_finite()) {
            return Err(Error::Parameter("regularity index must be finite".into()));
        }
        if let Some(j0) = j0 {
            if j0 < lp.j_min() - 1 || j0 > lp.j_max() + 1 {
                return Err(Error::Parameter(format!(
                    "split index {j0} outside dyadic range [{}, {}]",
                    lp.j_min() - 1,
                    lp.j_max() + 1
                )));
            }
        }
        Ok(())
    }

    /// Weight `2^{js}` of block `j`, or `None` when the block is excluded.
    pub fn weight(&self, j: i32) -> Option<f64> {
        let pow = |s: f64| 2f64.powf(j as f64 * s);
        match *self {
            NormSpec::Homogeneous { s, .. } => Some(pow(s)),
            NormSpec::Hybrid { s_low, s_high, j0 } => {
                Some(if j <= j0 { pow(s_low) } else { pow(s_high) })
            }
            NormSpec::Restricted { s, part, j0, .. } => {
                let keep = match part {
                    Part::Low => j <= j0,
                    Part::High => j > j0,
                };
                keep.then(|| pow(s))
            }
        }
    }

    pub fn summation(&self) -> Summation {
        match *self {
            NormSpec::Homogeneous { r, .. } | NormSpec::Restricted { r, .. } => r,
            NormSpec::Hybrid { .. } => Summation::Sum,
        }
    }

    /// Aggregate per-block values (indexed from `j_min`) into the norm.
    pub fn combine(&self, j_min: i32, blocks: &[f64]) -> f64 {
        let terms = blocks
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| self.weight(j_min + i as i32).map(|w| w * b));
        match self.summation() {
            Summation::Sum => terms.sum(),
            Summation::Sup => terms.fold(0.0, f64::max),
        }
    }
}

/// Besov-type norm of a field; vector fields use the Euclidean `L²` norm
/// of each block.
pub fn besov_norm(f: &SpectralField, spec: &NormSpec) -> Result<f64> {
    if !f.is_finite() {
        return Err(Error::Data("field has non-finite coefficients".into()));
    }
    let lp = LpDecomp::new(*f.grid());
    spec.validate(&lp)?;
    Ok(spec.combine(lp.j_min(), &lp.block_norms(f)))
}

/// Time norm taken inside the dyadic sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TimeNorm {
    /// `L¹_T`, trapezoid rule over the sample times.
    L1,
    /// `L^∞_T`, maximum over the sample times.
    LInf,
}

/// Per-block `L²` norms sampled in time.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockTrace {
    j_min: i32,
    times: Vec<f64>,
    blocks: Vec<Vec<f64>>,
}

impl BlockTrace {
    pub fn new(j_min: i32) -> Self {
        BlockTrace {
            j_min,
            times: Vec::new(),
            blocks: Vec::new(),
        }
    }

    pub fn push(&mut self, t: f64, blocks: Vec<f64>) -> Result<()> {
        if let Some(&last) = self.times.last() {
            if t <= last {
                return Err(Error::Data(format!("time {t} does not follow {last}")));
            }
            if blocks.len() != self.blocks[0].len() {
                return Err(Error::Shape("block count changed between samples".into()));
            }
        }
        if blocks.iter().any(|b| !(b.is_finite() && *b >= 0.0)) {
            return Err(Error::Data(
                "block norms must be finite and nonnegative".into(),
            ));
        }
        self.times.push(t);
        self.blocks.push(blocks);
        Ok(())
    }

    pub fn j_min(&self) -> i32 {
        self.j_min
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Chemin-Lerner norm `‖u‖_{L̃^q_T(X)}` from sampled block norms.
pub fn chemin_lerner(trace: &BlockTrace, q: TimeNorm, spec: &NormSpec) -> Result<f64> {
    if trace.is_empty() || (q == TimeNorm::L1 && trace.len() < 2) {
        return Err(Error::Data(format!(
            "need at least {} samples, have {}",
            if q == TimeNorm::L1 { 2 } else { 1 },
            trace.len()
        )));
    }
    let mut acc = CheminLernerAccumulator::new(*spec, q, trace.j_min);
    for (t, b) in trace.times.iter().zip(&trace.blocks) {
        acc.push(*t, b)?;
    }
    Ok(acc.value())
}

/// Running Chemin-Lerner norm, updated one sample at a time.
#[derive(Clone, Debug)]
pub struct CheminLernerAccumulator {
    spec: NormSpec,
    q: TimeNorm,
    j_min: i32,
    per_block: Vec<f64>,
    last: Option<(f64, Vec<f64>)>,
}

impl CheminLernerAccumulator {
    pub fn new(spec: NormSpec, q: TimeNorm, j_min: i32) -> Self {
        CheminLernerAccumulator {
            spec,
            q,
            j_min,
            per_block: Vec::new(),
            last: None,
        }
    }

    pub fn push(&mut self, t: f64, blocks: &[f64]) -> Result<()> {
        match &self.last {
            None => {
                self.per_block = match self.q {
                    TimeNorm::LInf => blocks.to_vec(),
                    TimeNorm::L1 => vec![0.0; blocks.len()],
                };
            }
            Some((t_prev, prev)) => {
                if t <= *t_prev {
                    return Err(Error::Data(format!("time {t} does not follow {t_prev}")));
                }
                if prev.len() != blocks.len() {
                    return Err(Error::Shape("block count changed between samples".into()));
                }
                let dt = t - t_prev;
                for ((acc, &b), &p) in self.per_block.iter_mut().zip(blocks).zip(prev) {
                    *acc = match self.q {
                        TimeNorm::LInf => acc.max(b),
                        TimeNorm::L1 => *acc + 0.5 * dt * (b + p),
                    };
                }
            }
        }
        self.last = Some((t, blocks.to_vec()));
        Ok(())
    }

    pub fn value(&self) -> f64 {
        self.spec.combine(self.j_min, &self.per_block)
    }
}

/// Result of [`bony_decompose`]: `f g = T_f g + T_g f + R(f, g)` after
/// dealiasing.
#[derive(Clone, Debug)]
pub struct BonyParts {
    pub t_f_g: SpectralField,
    pub t_g_f: SpectralField,
    pub remainder: SpectralField,
}

/// Bony decomposition of the product of the mean-free parts of `f` and `g`.
///
/// One of the fields must be scalar. Interactions involving content outside
/// the resolved dyadic range are attributed to the remainder.
pub fn bony_decompose(f: &SpectralField, g: &SpectralField) -> Result<BonyParts> {
    f.grid().ensure_same(g.grid())?;
    if f.n_components() != 1 && g.n_components() != 1 {
        return Err(Error::Shape(
            "bony decomposition needs a scalar factor".into(),
        ));
    }
    let lp = LpDecomp::new(*f.grid());
    let f = f.mean_free();
    let g = g.mean_free();
    let fb: Vec<Field> = lp.range().map(|j| lp.block(&f, j).to_physical()).collect();
    let gb: Vec<Field> = lp.range().map(|j| lp.block(&g, j).to_physical()).collect();
    let out_comps = f.n_components().max(g.n_components());
    let grid = *f.grid();
    let zero = Field::zeros(grid, out_comps);

    let sum = |fields: &[Field]| -> Result<Field> {
        let mut acc = Field::zeros(grid, fields[0].n_components());
        for x in fields {
            acc = acc.add(x)?;
        }
        Ok(acc)
    };

    let m = fb.len();
    let mut t_fg = zero.clone();
    let mut t_gf = zero.clone();
    let mut rem = zero.clone();
    // Ṡ_{j-1} = Σ_{k <= j-2}
    let mut low_f = Field::zeros(grid, f.n_components());
    let mut low_g = Field::zeros(grid, g.n_components());
    for idx in 0..m {
        if idx >= 2 {
            low_f = low_f.add(&fb[idx - 2])?;
            low_g = low_g.add(&gb[idx - 2])?;
        }
        t_fg = t_fg.add(&physical_product(&low_f, &gb[idx])?)?;
        t_gf = t_gf.add(&physical_product(&fb[idx], &low_g)?)?;
        let lo = idx.saturating_sub(1);
        let hi = (idx + 1).min(m - 1);
        let near = sum(&gb[lo..=hi])?;
        rem = rem.add(&physical_product(&fb[idx], &near)?)?;
    }
    let f_full = f.to_physical();
    let g_full = g.to_physical();
    let f_in = sum(&fb)?;
    let g_in = sum(&gb)?;
    let outside = physical_product(&f_full, &g_full)?.sub(&physical_product(&f_in, &g_in)?)?;
    rem = rem.add(&outside)?;

    Ok(BonyParts {
        t_f_g: dealias(&t_fg.to_spectral()),
        t_g_f: dealias(&t_gf.to_spectral()),
        remainder: dealias(&rem.to_spectral()),
    })
}

/// Named time series of diagnostics sampled at strictly increasing times.
#[derive(Clone, Debug, PartialEq)]
pub struct NormTrace {
    names: Vec<String>,
    times: Vec<f64>,
    rows: Vec<Vec<f64>>,
}

impl NormTrace {
    pub fn new(names: Vec<String>) -> Self {
        NormTrace {
            names,
            times: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, t: f64, row: Vec<f64>) -> Result<()> {
        if row.len() != self.names.len() {
            return Err(Error::Shape(format!(
                "row has {} values for {} columns",
                row.len(),
                self.names.len()
            )));
        }
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::Data(format!("invalid sample time {t}")));
        }
        if let Some(&last) = self.times.last() {
            if t <= last {
                return Err(Error::Data(format!("time {t} does not follow {last}")));
            }
        }
        if let Some(i) = row.iter().position(|v| !v.is_finite()) {
            return Err(Error::Data(format!(
                "non-finite value in column {}",
                self.names[i]
            )));
        }
        self.times.push(t);
        self.rows.push(row);
        Ok(())
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.names.iter().position(|n| n == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// The sub-trace holding `names` in the given order, or `None` if a
    /// name is missing.
    pub fn select<S: AsRef<str>>(&self, names: &[S]) -> Option<NormTrace> {
        let idx: Vec<usize> = names
            .iter()
            .map(|n| self.names.iter().position(|m| m == n.as_ref()))
            .collect::<Option<_>>()?;
        Some(NormTrace {
            names: names.iter().map(|n| n.as_ref().to_string()).collect(),
            times: self.times.clone(),
            rows: self
                .rows
                .iter()
                .map(|r| idx.iter().map(|&i| r[i]).collect())
                .collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;
    use std::f64::consts::PI;

    fn grid() -> Grid {
        Grid::new(1, 64, 2.0 * PI).unwrap()
    }

    #[test]
    fn single_mode_l2_identity() {
        let f = Field::scalar_from_fn(grid(), |x| (2.0 * x[0]).cos()).to_spectral();
        let b = besov_norm(
            &f,
            &NormSpec::Homogeneous {
                s: 0.0,
                r: Summation::Sum,
            },
        )
        .unwrap();
        assert!((b - f.l2_norm()).abs() < 1e-14 * b);
    }

    #[test]
    fn zero_field_has_zero_norms() {
        let f = SpectralField::zeros(grid(), 1);
        let specs = [
            NormSpec::Homogeneous {
                s: 1.0,
                r: Summation::Sup,
            },
            NormSpec::Hybrid {
                s_low: 0.5,
                s_high: 1.5,
                j0: 1,
            },
            NormSpec::Restricted {
                s: -0.5,
                r: Summation::Sum,
                part: Part::High,
                j0: 0,
            },
        ];
        for s in &specs {
            assert_eq!(besov_norm(&f, s).unwrap(), 0.0);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let mut f = Field::scalar_from_fn(grid(), |x| x[0].sin()).to_spectral();
        let far = NormSpec::Hybrid {
            s_low: 0.0,
            s_high: 0.0,
            j0: 40,
        };
        assert!(besov_norm(&f, &far).is_err());
        f.component_mut(0)[3].re = f64::NAN;
        let spec = NormSpec::Homogeneous {
            s: 0.0,
            r: Summation::Sum,
        };
        assert!(matches!(besov_norm(&f, &spec), Err(Error::Data(_))));
    }

    #[test]
    fn sup_norm_takes_the_largest_block() {
        let f = Field::scalar_from_fn(grid(), |x| x[0].cos() + (16.0 * x[0]).cos()).to_spectral();
        let lp = LpDecomp::new(*f.grid());
        let blocks = lp.block_norms(&f);
        let spec = NormSpec::Homogeneous {
            s: 1.0,
            r: Summation::Sup,
        };
        let expect = blocks
            .iter()
            .enumerate()
            .map(|(i, b)| 2f64.powi(lp.j_min() + i as i32) * b)
            .fold(0.0, f64::max);
        assert_eq!(besov_norm(&f, &spec).unwrap(), expect);
    }

    #[test]
    fn chemin_lerner_needs_two_samples_for_l1() {
        let mut tr = BlockTrace::new(0);
        tr.push(0.0, vec![1.0, 2.0]).unwrap();
        let spec = NormSpec::Homogeneous {
            s: 0.0,
            r: Summation::Sum,
        };
        assert!(chemin_lerner(&tr, TimeNorm::L1, &spec).is_err());
        assert_eq!(chemin_lerner(&tr, TimeNorm::LInf, &spec).unwrap(), 3.0);
        tr.push(2.0, vec![3.0, 0.0]).unwrap();
        assert_eq!(chemin_lerner(&tr, TimeNorm::L1, &spec).unwrap(), 4.0 + 2.0);
        assert_eq!(chemin_lerner(&tr, TimeNorm::LInf, &spec).unwrap(), 5.0);
        assert!(tr.push(1.0, vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn bony_constant_factor_is_zero() {
        let g = grid();
        let c = Field::constant(g, 1, 2.0).to_spectral();
        let h = Field::scalar_from_fn(g, |x| (3.0 * x[0]).sin()).to_spectral();
        let parts = bony_decompose(&c, &h).unwrap();
        assert!(parts.t_f_g.l2_norm() < 1e-14);
        assert!(parts.t_g_f.l2_norm() < 1e-14);
        assert!(parts.remainder.l2_norm() < 1e-14);
    }

    #[test]
    fn trace_validates_rows() {
        let mut t = NormTrace::new(vec!["a".into(), "b".into()]);
        assert!(t.push(0.0, vec![1.0]).is_err());
        t.push(0.0, vec![1.0, -2.0]).unwrap();
        assert!(t.push(0.0, vec![1.0, 2.0]).is_err());
        assert!(t.push(1.0, vec![f64::INFINITY, 2.0]).is_err());
        assert_eq!(t.column("b").unwrap(), vec![-2.0]);
    }
}
