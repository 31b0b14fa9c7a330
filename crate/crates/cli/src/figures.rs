//! Preset sweeps behind `dimerspin figures`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use dimerspin::{Boundary, ChainSpec, Model, SweepParam};

use crate::config::{AxisSpec, Command, RunConfig};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3a,
    Fig3b,
    Fig4a,
    Fig4b,
    Fig5,
    Fig6a,
    Fig6b,
    Fig6c,
    Fig7,
    Fig8,
}

impl Figure {
    pub const ALL: [Figure; 12] = [
        Figure::Fig1,
        Figure::Fig2,
        Figure::Fig3a,
        Figure::Fig3b,
        Figure::Fig4a,
        Figure::Fig4b,
        Figure::Fig5,
        Figure::Fig6a,
        Figure::Fig6b,
        Figure::Fig6c,
        Figure::Fig7,
        Figure::Fig8,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3a => "fig3a",
            Figure::Fig3b => "fig3b",
            Figure::Fig4a => "fig4a",
            Figure::Fig4b => "fig4b",
            Figure::Fig5 => "fig5",
            Figure::Fig6a => "fig6a",
            Figure::Fig6b => "fig6b",
            Figure::Fig6c => "fig6c",
            Figure::Fig7 => "fig7",
            Figure::Fig8 => "fig8",
        }
    }

    /// The sweep that reproduces this figure. Resolution, thread count, format
    /// and chain length come from `base`; everything else is fixed.
    pub fn config(self, base: &RunConfig) -> RunConfig {
        use Figure::*;
        let field = |steps| AxisSpec {
            param: SweepParam::B,
            min: 0.0,
            max: 5.0,
            steps,
        };
        let temperature = |steps| AxisSpec {
            param: SweepParam::Kt,
            min: 0.02,
            max: 3.0,
            steps,
        };
        let spec = |delta, theta, boundary, model| ChainSpec {
            n_sites: base.spec.n_sites,
            j: 1.0,
            delta,
            b: 0.0,
            theta,
            boundary,
            model,
        };
        let (spec, axes, pair) = match self {
            Fig1 | Fig2 => (
                spec(0.2, 0.0, Boundary::Closed, Model::Xxx),
                vec![field(101), temperature(60)],
                if self == Fig1 { 1 } else { 2 },
            ),
            Fig3a | Fig3b | Fig4a | Fig4b => {
                let delta = if matches!(self, Fig3a | Fig4a) {
                    0.2
                } else {
                    0.8
                };
                let pair = if matches!(self, Fig3a | Fig3b) { 1 } else { 2 };
                (
                    spec(delta, 0.0, Boundary::Closed, Model::Xxx),
                    vec![field(400)],
                    pair,
                )
            }
            Fig5 => (
                spec(0.2, 0.0, Boundary::Closed, Model::Xxx),
                vec![
                    field(201),
                    AxisSpec {
                        param: SweepParam::Delta,
                        min: 0.0,
                        max: 1.0,
                        steps: 21,
                    },
                ],
                1,
            ),
            Fig6a | Fig6b | Fig6c => {
                let theta = match self {
                    Fig6a => 0.0,
                    Fig6b => PI / 4.0,
                    _ => PI / 2.0,
                };
                let axes = vec![
                    field(51),
                    AxisSpec {
                        max: 1.0,
                        ..temperature(25)
                    },
                ];
                (spec(0.2, theta, Boundary::Closed, Model::Xx), axes, 1)
            }
            Fig7 | Fig8 => (
                spec(0.2, 0.0, Boundary::Open, Model::Xxx),
                vec![field(400)],
                if self == Fig7 { 1 } else { 5 },
            ),
        };
        let axes = axes
            .into_iter()
            .map(|a| match base.axis(a.param) {
                Some(user) => AxisSpec {
                    steps: user.steps,
                    ..a
                },
                None => a,
            })
            .collect();
        RunConfig {
            command: Command::Sweep,
            spec,
            kbt: 0.1,
            axes,
            pairs: vec![pair],
            emit_plot: true,
            figures: Vec::new(),
            ..base.clone()
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Figure {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Figure::ALL
            .into_iter()
            .find(|f| f.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown figure `{s}` (expected fig1 … fig8 or all)"))
    }
}
