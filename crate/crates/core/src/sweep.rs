//! Parameter grids of pair concurrences.
//!
//! Grid points are grouped by the Hamiltonian they need. With an axial field
//! one sector decomposition per dimer strength serves every `(B, kT)` point;
//! otherwise one decomposition per `(δ, θ, B)` serves every temperature. Groups
//! run in parallel and results are written back by grid index, so the output
//! does not depend on scheduling.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::entanglement::{concurrence, ConcurrenceValue, StateDiagnostics};
use crate::error::{Error, Result};
use crate::hamiltonian::{ChainSpec, Pair};
use crate::pipeline::{PreparedChain, Strategy};

/// A chain or thermal parameter that can be swept.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum SweepParam {
    B,
    Kt,
    Delta,
    Theta,
}

impl SweepParam {
    pub const ALL: [SweepParam; 4] = [
        SweepParam::B,
        SweepParam::Kt,
        SweepParam::Delta,
        SweepParam::Theta,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SweepParam::B => "b",
            SweepParam::Kt => "kbt",
            SweepParam::Delta => "delta",
            SweepParam::Theta => "theta",
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "b" => Ok(SweepParam::B),
            "kbt" | "kt" => Ok(SweepParam::Kt),
            "delta" => Ok(SweepParam::Delta),
            "theta" => Ok(SweepParam::Theta),
            _ => Err(format!("unknown sweep parameter `{s}`")),
        }
    }
}

/// One axis of a grid: a parameter and its strictly ascending values.
#[derive(Clone, Debug, PartialEq)]
pub struct GridAxis {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

impl GridAxis {
    pub fn new(param: SweepParam, values: Vec<f64>) -> Self {
        Self { param, values }
    }

    /// `steps` evenly spaced values from `min` to `max` inclusive.
    pub fn linspace(param: SweepParam, min: f64, max: f64, steps: usize) -> Result<Self> {
        let values = match steps {
            0 => {
                return Err(Error::InvalidSweep(format!(
                    "axis {param} needs at least one point"
                )))
            }
            1 => vec![min],
            _ => {
                if !(max > min) {
                    return Err(Error::InvalidSweep(format!(
                        "axis {param}: max ({max}) must exceed min ({min})"
                    )));
                }
                let h = (max - min) / (steps - 1) as f64;
                (0..steps)
                    .map(|i| {
                        if i == steps - 1 {
                            max
                        } else {
                            min + h * i as f64
                        }
                    })
                    .collect()
            }
        };
        Ok(Self { param, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// What to sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRequest {
    /// Values for every parameter that is not on an axis.
    pub template: ChainSpec,
    pub kt: f64,
    /// Zero, one or two axes; the first varies slowest.
    pub axes: Vec<GridAxis>,
    /// Bond indices to track.
    pub pairs: Vec<usize>,
    /// Worker threads, 0 = rayon default.
    pub threads: usize,
    pub strategy: Strategy,
}

impl SweepRequest {
    pub fn new(template: ChainSpec, kt: f64, axes: Vec<GridAxis>, pairs: Vec<usize>) -> Self {
        Self {
            template,
            kt,
            axes,
            pairs,
            threads: 0,
            strategy: Strategy::Auto,
        }
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }
}

/// Parameters of one grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct GridPoint {
    pub spec: ChainSpec,
    pub kt: f64,
}

/// Concurrence for every grid point and tracked pair.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepGrid {
    pub template: ChainSpec,
    pub kt: f64,
    pub axes: Vec<GridAxis>,
    pub pairs: Vec<Pair>,
    values: Vec<ConcurrenceValue>,
    diagnostics: StateDiagnostics,
}

impl SweepGrid {
    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(GridAxis::len).collect()
    }

    pub fn n_points(&self) -> usize {
        self.axes.iter().map(GridAxis::len).product()
    }

    /// Axis indices of flat point `p`, first axis slowest.
    pub fn indices(&self, p: usize) -> Vec<usize> {
        let mut rest = p;
        let mut out = vec![0; self.axes.len()];
        for (k, axis) in self.axes.iter().enumerate().rev() {
            out[k] = rest % axis.len();
            rest /= axis.len();
        }
        out
    }

    pub fn point(&self, p: usize) -> GridPoint {
        grid_point(&self.template, self.kt, &self.axes, &self.indices(p))
    }

    pub fn value(&self, p: usize, pair_slot: usize) -> &ConcurrenceValue {
        &self.values[p * self.pairs.len() + pair_slot]
    }

    pub fn concurrence(&self, p: usize, pair_slot: usize) -> f64 {
        self.value(p, pair_slot).c
    }

    /// Concurrence of one tracked pair over all points, in grid order.
    pub fn series(&self, pair_slot: usize) -> Vec<f64> {
        (0..self.n_points())
            .map(|p| self.concurrence(p, pair_slot))
            .collect()
    }

    /// Slot of bond `index` in the tracked pair list.
    pub fn pair_slot(&self, index: usize) -> Option<usize> {
        self.pairs.iter().position(|p| p.index == index)
    }

    /// Worst trace error and most negative eigenvalue over all reduced states.
    pub fn diagnostics(&self) -> StateDiagnostics {
        self.diagnostics
    }
}

fn grid_point(template: &ChainSpec, kt: f64, axes: &[GridAxis], idx: &[usize]) -> GridPoint {
    let mut spec = template.clone();
    let mut kt = kt;
    for (axis, &i) in axes.iter().zip(idx) {
        let v = axis.values[i];
        match axis.param {
            SweepParam::B => spec.b = v,
            SweepParam::Kt => kt = v,
            SweepParam::Delta => spec.delta = v,
            SweepParam::Theta => spec.theta = v,
        }
    }
    GridPoint { spec, kt }
}

fn validate(req: &SweepRequest) -> Result<Vec<Pair>> {
    if req.axes.len() > 2 {
        return Err(Error::InvalidSweep(format!(
            "at most two varying axes are supported, got {}",
            req.axes.len()
        )));
    }
    if req.axes.len() == 2 && req.axes[0].param == req.axes[1].param {
        return Err(Error::InvalidSweep(format!(
            "axis {} given twice",
            req.axes[0].param
        )));
    }
    for axis in &req.axes {
        if axis.values.is_empty() {
            return Err(Error::InvalidSweep(format!("axis {} is empty", axis.param)));
        }
        if !axis.values.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidSweep(format!(
                "axis {} must be strictly ascending",
                axis.param
            )));
        }
        if axis.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSweep(format!(
                "axis {} has non-finite values",
                axis.param
            )));
        }
        if axis.param == SweepParam::Kt && axis.values[0] < 0.0 {
            return Err(Error::NonPositiveTemperature(axis.values[0]));
        }
    }
    if !(req.kt >= 0.0) {
        return Err(Error::NonPositiveTemperature(req.kt));
    }
    if req.pairs.is_empty() {
        return Err(Error::InvalidSweep("no pairs to track".into()));
    }
    // Extremes of every axis must give a valid chain.
    for &first in &[true, false] {
        let idx: Vec<usize> = req
            .axes
            .iter()
            .map(|a| if first { 0 } else { a.len() - 1 })
            .collect();
        grid_point(&req.template, req.kt, &req.axes, &idx)
            .spec
            .validate()?;
    }
    req.pairs.iter().map(|&i| req.template.pair(i)).collect()
}

/// Hamiltonian identity of a grid point, as bit patterns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct ChainKey {
    delta: u64,
    theta: u64,
    b: Option<u64>,
}

fn key_of(spec: &ChainSpec, strategy: Strategy) -> ChainKey {
    let field_free = matches!(strategy, Strategy::Auto | Strategy::Sectored) && spec.theta == 0.0;
    ChainKey {
        delta: spec.delta.to_bits(),
        theta: spec.theta.to_bits(),
        b: (!field_free).then(|| spec.b.to_bits()),
    }
}

type GroupResult = Vec<(usize, Vec<(ConcurrenceValue, StateDiagnostics)>)>;

/// Evaluates every grid point of `req`.
pub fn run_sweep(req: &SweepRequest) -> Result<SweepGrid> {
    let pairs = validate(req)?;
    let shape: Vec<usize> = req.axes.iter().map(GridAxis::len).collect();
    let n_points: usize = shape.iter().product();

    let mut groups: Vec<(ChainKey, Vec<(usize, GridPoint)>)> = Vec::new();
    let mut slot: HashMap<ChainKey, usize> = HashMap::new();
    for p in 0..n_points {
        let mut rest = p;
        let mut idx = vec![0; shape.len()];
        for k in (0..shape.len()).rev() {
            idx[k] = rest % shape[k];
            rest /= shape[k];
        }
        let point = grid_point(&req.template, req.kt, &req.axes, &idx);
        let key = key_of(&point.spec, req.strategy);
        let g = *slot.entry(key).or_insert_with(|| {
            groups.push((key, Vec::new()));
            groups.len() - 1
        });
        groups[g].1.push((p, point));
    }

    let evaluate = |(_, points): &(ChainKey, Vec<(usize, GridPoint)>)| -> Result<GroupResult> {
        let chain = PreparedChain::with_strategy(&points[0].1.spec, req.strategy)?;
        points
            .iter()
            .map(|(p, point)| {
                let w = chain.weights(point.spec.b, point.kt)?;
                let row = pairs
                    .iter()
                    .map(|pair| {
                        let state = chain.pair_state(&w, pair.index)?;
                        Ok((concurrence(&state)?, state.diagnostics()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok((*p, row))
            })
            .collect()
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(req.threads)
        .build()
        .map_err(|e| Error::InvalidSweep(format!("thread pool: {e}")))?;
    let results: Vec<GroupResult> =
        pool.install(|| groups.par_iter().map(evaluate).collect::<Result<_>>())?;

    let n_pairs = pairs.len();
    let placeholder = ConcurrenceValue {
        c: f64::NAN,
        lambdas: [f64::NAN; 4],
    };
    let mut values = vec![placeholder; n_points * n_pairs];
    let mut diagnostics = StateDiagnostics {
        trace_error: 0.0,
        min_eigenvalue: f64::INFINITY,
    };
    for (p, row) in results.into_iter().flatten() {
        for (k, (c, d)) in row.into_iter().enumerate() {
            values[p * n_pairs + k] = c;
            diagnostics = diagnostics.worst(d);
        }
    }
    Ok(SweepGrid {
        template: req.template.clone(),
        kt: req.kt,
        axes: req.axes.clone(),
        pairs,
        values,
        diagnostics,
    })
}
