//! Staircases, critical fields and entanglement onsets in field sweeps.

use crate::error::{Error, Result};
use crate::hamiltonian::{Boundary, ChainSpec, Model, PairKind};
use crate::pipeline::{PreparedChain, Strategy};
use crate::sweep::{run_sweep, GridAxis, SweepGrid, SweepParam, SweepRequest};

/// Default spread allowed within a plateau.
pub const DEFAULT_PLATEAU_TOL: f64 = 1e-3;
/// Default minimum number of points in a plateau.
pub const DEFAULT_MIN_WIDTH: usize = 3;
/// Concurrence at or below this counts as zero.
pub const ZERO_TOL: f64 = 1e-6;

/// A maximal run of nearly constant values, `start..=end` in grid indices.
#[derive(Clone, Debug, PartialEq)]
pub struct Plateau {
    pub start: usize,
    pub end: usize,
    pub b_start: f64,
    pub b_end: f64,
    pub mean: f64,
    /// Largest `|C - mean|` inside the plateau.
    pub max_deviation: f64,
}

impl Plateau {
    pub fn width(&self) -> usize {
        self.end - self.start + 1
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum StepSign {
    Down,
    Up,
}

/// Transition between two consecutive plateaus.
#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    /// Midpoint of the transition region.
    pub location: f64,
    /// `|mean_after - mean_before|`.
    pub magnitude: f64,
    pub sign: StepSign,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct PlateauReport {
    pub plateaus: Vec<Plateau>,
    pub steps: Vec<Step>,
}

impl PlateauReport {
    pub fn n_plateaus(&self) -> usize {
        self.plateaus.len()
    }
}

fn check_series(b: &[f64], c: &[f64]) -> Result<()> {
    if b.len() != c.len() {
        return Err(Error::DimensionMismatch {
            expected: b.len(),
            actual: c.len(),
        });
    }
    Ok(())
}

/// Greedy segmentation of a field sweep into plateaus and steps.
///
/// Scanning left to right, each plateau is the longest run starting at the
/// current point whose spread (max - min) stays within `plateau_tol`; runs
/// shorter than `min_width` are skipped one point at a time.
pub fn detect_plateaus(
    b: &[f64],
    c: &[f64],
    plateau_tol: f64,
    min_width: usize,
) -> Result<PlateauReport> {
    check_series(b, c)?;
    let min_width = min_width.max(1);
    if c.len() < min_width {
        return Err(Error::SeriesTooShort {
            len: c.len(),
            min_width,
        });
    }
    let mut plateaus = Vec::new();
    let mut i = 0;
    while i < c.len() {
        let (mut lo, mut hi) = (c[i], c[i]);
        let mut j = i;
        while j + 1 < c.len() {
            let (nlo, nhi) = (lo.min(c[j + 1]), hi.max(c[j + 1]));
            if nhi - nlo > plateau_tol {
                break;
            }
            lo = nlo;
            hi = nhi;
            j += 1;
        }
        if j - i + 1 >= min_width {
            let run = &c[i..=j];
            let mean = run.iter().sum::<f64>() / run.len() as f64;
            let max_deviation = run.iter().fold(0.0f64, |m, x| m.max((x - mean).abs()));
            plateaus.push(Plateau {
                start: i,
                end: j,
                b_start: b[i],
                b_end: b[j],
                mean,
                max_deviation,
            });
            i = j + 1;
        } else {
            i += 1;
        }
    }
    let steps = plateaus
        .windows(2)
        .map(|w| {
            let delta = w[1].mean - w[0].mean;
            Step {
                location: transition_midpoint(b, c, &w[0], &w[1]),
                magnitude: delta.abs(),
                sign: if delta < 0.0 {
                    StepSign::Down
                } else {
                    StepSign::Up
                },
            }
        })
        .collect();
    Ok(PlateauReport { plateaus, steps })
}

/// Field where the series crosses halfway between two plateau levels; the
/// centre of the gap between the plateaus if it never does.
fn transition_midpoint(b: &[f64], c: &[f64], before: &Plateau, after: &Plateau) -> f64 {
    let level = 0.5 * (before.mean + after.mean);
    (before.end..after.start)
        .find(|&i| (c[i] - level) * (c[i + 1] - level) <= 0.0)
        .map(|i| crossing(b[i], c[i], b[i + 1], c[i + 1], level))
        .unwrap_or(0.5 * (before.b_end + after.b_start))
}

/// Smallest field beyond which the concurrence stays at or below `zero_tol`,
/// interpolated between the last point above and the first point below.
pub fn critical_field(b: &[f64], c: &[f64], zero_tol: f64) -> Result<f64> {
    check_series(b, c)?;
    match c.last() {
        None => {
            return Err(Error::SeriesTooShort {
                len: 0,
                min_width: 1,
            })
        }
        Some(&last) if last > zero_tol => return Err(Error::NoCriticalField { zero_tol }),
        _ => {}
    }
    match c.iter().rposition(|&x| x > zero_tol) {
        None => Ok(b[0]),
        Some(k) => Ok(crossing(b[k], c[k], b[k + 1], c[k + 1], zero_tol)),
    }
}

/// First field at which a series that starts at zero exceeds `zero_tol`.
///
/// `None` if the series is already entangled at the first point or never rises.
pub fn entanglement_onset(b: &[f64], c: &[f64], zero_tol: f64) -> Option<f64> {
    if b.len() != c.len() || c.is_empty() || c[0] > zero_tol {
        return None;
    }
    let k = c.iter().position(|&x| x > zero_tol)?;
    Some(crossing(b[k - 1], c[k - 1], b[k], c[k], zero_tol))
}

/// Linear interpolation of the point where the segment crosses `level`.
fn crossing(b0: f64, c0: f64, b1: f64, c1: f64, level: f64) -> f64 {
    if c1 == c0 {
        return b1;
    }
    let t = ((c0 - level) / (c0 - c1)).clamp(0.0, 1.0);
    b0 + t * (b1 - b0)
}

/// Midpoints between consecutive grid points where `m` changes by at least `min_jump`.
pub fn magnetization_jumps(b: &[f64], m: &[f64], min_jump: f64) -> Vec<f64> {
    b.windows(2)
        .zip(m.windows(2))
        .filter(|(_, mw)| (mw[1] - mw[0]).abs() >= min_jump)
        .map(|(bw, _)| 0.5 * (bw[0] + bw[1]))
        .collect()
}

/// A step paired with the nearest ground-state magnetization jump.
#[derive(Clone, Debug, PartialEq)]
pub struct AnnotatedStep {
    pub step: Step,
    pub nearest_jump: Option<f64>,
}

impl AnnotatedStep {
    /// Distance to the nearest jump, infinite if there is none.
    pub fn offset(&self) -> f64 {
        self.nearest_jump
            .map_or(f64::INFINITY, |j| (j - self.step.location).abs())
    }
}

pub fn annotate_steps(steps: &[Step], jumps: &[f64]) -> Vec<AnnotatedStep> {
    steps
        .iter()
        .map(|step| AnnotatedStep {
            step: step.clone(),
            nearest_jump: jumps.iter().copied().min_by(|a, b| {
                (a - step.location)
                    .abs()
                    .total_cmp(&(b - step.location).abs())
            }),
        })
        .collect()
}

/// Ground-state `⟨Σσ^z⟩` at each field, and the fields where it jumps.
///
/// Correlates concurrence steps with level crossings; needs an axial field.
pub fn ground_state_magnetization(spec: &ChainSpec, b: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    if spec.theta != 0.0 {
        return Err(Error::InvalidSweep(
            "ground-state magnetization steps need an axial field".into(),
        ));
    }
    let chain = PreparedChain::with_strategy(spec, Strategy::Sectored)?;
    let m = b
        .iter()
        .map(|&x| chain.magnetization(x, 0.0))
        .collect::<Result<Vec<_>>>()?;
    let jumps = magnetization_jumps(b, &m, 0.5);
    Ok((m, jumps))
}

/// Start of a concurrence dip to near zero.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Dip {
    pub index: usize,
    pub field: f64,
    pub value: f64,
}

/// Fraction of `C(0)` below which a local minimum counts as a dip.
pub const DIP_FRACTION: f64 = 0.1;

/// First local minimum below `fraction · C(first)`.
///
/// A monotone decay to zero has its dip at the last point.
pub fn find_dip(b: &[f64], c: &[f64], fraction: f64) -> Option<Dip> {
    let threshold = fraction * c.first()?;
    (0..c.len())
        .find(|&i| c[i] < threshold && (i + 1 == c.len() || c[i + 1] > c[i] + ZERO_TOL))
        .map(|index| Dip {
            index,
            field: b[index],
            value: c[index],
        })
}

/// Strong-pair field sweep of an XX chain at one tilt angle.
#[derive(Clone, Debug, PartialEq)]
pub struct TiltSummary {
    pub theta: f64,
    pub grid: SweepGrid,
    pub dip: Option<Dip>,
    /// Largest concurrence from the dip onwards.
    pub post_dip_max: Option<f64>,
}

/// Runs the strong-pair field sweep of an XX chain for each tilt angle.
pub fn xx_tilt_comparison(
    template: &ChainSpec,
    thetas: &[f64],
    b_values: &[f64],
    kt: f64,
    threads: usize,
) -> Result<Vec<TiltSummary>> {
    if template.model != Model::Xx {
        return Err(Error::InvalidSweep(
            "tilt comparison is defined for the XX model".into(),
        ));
    }
    thetas
        .iter()
        .map(|&theta| {
            let spec = ChainSpec {
                theta,
                ..template.clone()
            };
            let axis = GridAxis::new(SweepParam::B, b_values.to_vec());
            let grid =
                run_sweep(&SweepRequest::new(spec, kt, vec![axis], vec![1]).with_threads(threads))?;
            let c = grid.series(0);
            let dip = find_dip(b_values, &c, DIP_FRACTION);
            let post_dip_max = dip.map(|d| c[d.index..].iter().copied().fold(0.0, f64::max));
            Ok(TiltSummary {
                theta,
                grid,
                dip,
                post_dip_max,
            })
        })
        .collect()
}

/// A run of strictly increasing concurrence.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct BuildUp {
    pub b_start: f64,
    pub b_end: f64,
    pub rise: f64,
}

/// The strictly increasing run with the largest total rise, if that rise
/// exceeds `min_rise`.
pub fn largest_build_up(b: &[f64], c: &[f64], min_rise: f64) -> Option<BuildUp> {
    let mut best: Option<BuildUp> = None;
    let mut start = 0;
    for i in 1..=c.len() {
        if i < c.len() && c[i] > c[i - 1] {
            continue;
        }
        let end = i - 1;
        if end > start {
            let rise = c[end] - c[start];
            if rise > min_rise && best.is_none_or(|x| rise > x.rise) {
                best = Some(BuildUp {
                    b_start: b[start],
                    b_end: b[end],
                    rise,
                });
            }
        }
        start = i;
    }
    best
}

/// Field-sweep features of one bond.
#[derive(Clone, Debug, PartialEq)]
pub struct PairProfile {
    pub bond: usize,
    pub kind: PairKind,
    pub c_at_first: f64,
    pub plateaus: PlateauReport,
    pub critical_field: Option<f64>,
    pub build_up: Option<BuildUp>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OpenChainProfile {
    pub grid: SweepGrid,
    pub pairs: Vec<PairProfile>,
}

impl OpenChainProfile {
    pub fn pair(&self, bond: usize) -> Option<&PairProfile> {
        self.pairs.iter().find(|p| p.bond == bond)
    }
}

/// Sweeps every bond of an open chain over `b_values`.
pub fn open_chain_profile(
    template: &ChainSpec,
    kt: f64,
    b_values: &[f64],
    threads: usize,
) -> Result<OpenChainProfile> {
    if template.boundary != Boundary::Open {
        return Err(Error::InvalidSweep(
            "open-chain profile needs boundary = open".into(),
        ));
    }
    let bonds: Vec<usize> = (1..=template.n_bonds()).collect();
    let axis = GridAxis::new(SweepParam::B, b_values.to_vec());
    let grid = run_sweep(
        &SweepRequest::new(template.clone(), kt, vec![axis], bonds).with_threads(threads),
    )?;
    let pairs = grid
        .pairs
        .iter()
        .enumerate()
        .map(|(slot, pair)| {
            let c = grid.series(slot);
            Ok(PairProfile {
                bond: pair.index,
                kind: pair.kind,
                c_at_first: c[0],
                plateaus: detect_plateaus(b_values, &c, DEFAULT_PLATEAU_TOL, DEFAULT_MIN_WIDTH)?,
                critical_field: critical_field(b_values, &c, ZERO_TOL).ok(),
                build_up: largest_build_up(b_values, &c, DEFAULT_PLATEAU_TOL),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OpenChainProfile { grid, pairs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> Vec<f64> {
        (0..n).map(|i| i as f64 * 0.1).collect()
    }

    #[test]
    fn constant_series_is_one_plateau() {
        let r = detect_plateaus(&grid(10), &[0.7; 10], 1e-3, 3).unwrap();
        assert_eq!(r.n_plateaus(), 1);
        assert!(r.steps.is_empty());
    }

    #[test]
    fn two_level_step() {
        let c = [1.0, 1.0, 1.0, 0.5, 0.5, 0.5];
        let r = detect_plateaus(&grid(6), &c, 1e-3, 2).unwrap();
        assert_eq!(r.n_plateaus(), 2);
        assert_eq!(r.steps.len(), 1);
        assert!((r.steps[0].magnitude - 0.5).abs() < 1e-15);
        assert_eq!(r.steps[0].sign, StepSign::Down);
        assert!((r.steps[0].location - 0.25).abs() < 1e-12);
    }

    #[test]
    fn short_series_is_an_error() {
        assert!(matches!(
            detect_plateaus(&grid(2), &[1.0, 1.0], 1e-3, 3),
            Err(Error::SeriesTooShort {
                len: 2,
                min_width: 3
            })
        ));
    }

    #[test]
    fn critical_field_cases() {
        assert_eq!(critical_field(&grid(5), &[0.0; 5], 1e-6).unwrap(), 0.0);
        // Ramp 0.8 - 0.2 B hits zero at B = 4 between grid points 3.8 and 4.2.
        let b: Vec<f64> = (0..12).map(|i| 0.4 * i as f64 + 0.2).collect();
        let c: Vec<f64> = b.iter().map(|x| (0.8 - 0.2 * x).max(0.0)).collect();
        let bc = critical_field(&b, &c, 1e-6).unwrap();
        assert!((bc - 4.0).abs() < 0.4);
        let rising: Vec<f64> = b.iter().map(|x| x * 0.1).collect();
        assert!(matches!(
            critical_field(&b, &rising, 1e-6),
            Err(Error::NoCriticalField { .. })
        ));
    }

    #[test]
    fn onset_cases() {
        let b = grid(6);
        assert_eq!(
            entanglement_onset(&b, &[0.9, 0.8, 0.0, 0.0, 0.0, 0.0], 1e-6),
            None
        );
        assert_eq!(entanglement_onset(&b, &[0.0; 6], 1e-6), None);
        let on = entanglement_onset(&b, &[0.0, 0.0, 0.0, 0.2, 0.3, 0.0], 1e-6).unwrap();
        assert!(on > 0.2 && on <= 0.3);
    }

    #[test]
    fn dip_and_build_up() {
        let b = grid(8);
        let c = [0.8, 0.6, 0.3, 0.01, 0.2, 0.25, 0.1, 0.05];
        let dip = find_dip(&b, &c, 0.1).unwrap();
        assert_eq!(dip.index, 3);
        let up = largest_build_up(&b, &c, 1e-3).unwrap();
        assert!((up.rise - 0.24).abs() < 1e-12);
        assert!((up.b_start - 0.3).abs() < 1e-12 && (up.b_end - 0.5).abs() < 1e-12);

        let decay = [0.8, 0.5, 0.1, 0.0, 0.0, 0.0, 0.0, 0.0];
        assert_eq!(find_dip(&b, &decay, 0.1).unwrap().index, 7);
        assert_eq!(largest_build_up(&b, &decay, 1e-3), None);
    }

    #[test]
    fn steps_are_annotated_with_nearest_jump() {
        let steps = [Step {
            location: 1.0,
            magnitude: 0.2,
            sign: StepSign::Down,
        }];
        let a = annotate_steps(&steps, &[0.2, 1.05, 3.0]);
        assert_eq!(a[0].nearest_jump, Some(1.05));
        assert!((a[0].offset() - 0.05).abs() < 1e-12);
        assert_eq!(annotate_steps(&steps, &[])[0].offset(), f64::INFINITY);
    }

    #[test]
    fn jumps_are_midpoints() {
        let b = grid(5);
        let m = [0.0, 0.0, -2.0, -2.0, -4.0];
        let j = magnetization_jumps(&b, &m, 0.5);
        assert_eq!(j.len(), 2);
        assert!((j[0] - 0.15).abs() < 1e-12 && (j[1] - 0.35).abs() < 1e-12);
    }
}
