//! Hamiltonian → eigensystem → Gibbs weights → pair state → concurrence.

use std::fmt;
use std::str::FromStr;

use crate::entanglement::{concurrence, reduce_to_pair, ConcurrenceValue, TwoQubitState};
use crate::error::{Error, Result};
use crate::hamiltonian::{build_exchange, build_hamiltonian, magnetization_diagonal, ChainSpec};
use crate::hilbert::build_sector_table;
use crate::spectral::{decompose, decompose_sectored, SpectralDecomposition};
use crate::symmetry::{decompose_symmetric, find_symmetries};
use crate::thermal::{thermal_expectation_diagonal, thermal_weights, GibbsWeights};

/// How a chain is diagonalized.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Sectors for axial fields, lattice symmetries otherwise.
    #[default]
    Auto,
    /// One dense eigensolve of the full matrix.
    Dense,
    /// Σσ^z sectors of the exchange part; requires θ = 0.
    Sectored,
    /// Joint eigenspaces of commuting lattice involutions.
    Symmetric,
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "auto" => Ok(Strategy::Auto),
            "dense" => Ok(Strategy::Dense),
            "sectored" => Ok(Strategy::Sectored),
            "symmetric" => Ok(Strategy::Symmetric),
            _ => Err(format!("unknown strategy `{s}`")),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Auto => "auto",
            Strategy::Dense => "dense",
            Strategy::Sectored => "sectored",
            Strategy::Symmetric => "symmetric",
        })
    }
}

/// A diagonalized chain, ready for any number of `(B, kT, pair)` queries.
///
/// A sectored chain holds the field-free exchange spectrum and serves every
/// field strength. Any other chain is tied to the field of its spec.
#[derive(Clone, Debug)]
pub struct PreparedChain {
    spec: ChainSpec,
    decomp: SpectralDecomposition,
    field_shift: bool,
}

impl PreparedChain {
    pub fn new(spec: &ChainSpec) -> Result<Self> {
        Self::with_strategy(spec, Strategy::Auto)
    }

    pub fn with_strategy(spec: &ChainSpec, strategy: Strategy) -> Result<Self> {
        spec.validate()?;
        let sectored = match strategy {
            Strategy::Auto => spec.theta == 0.0,
            Strategy::Sectored if spec.theta != 0.0 && spec.b != 0.0 => {
                return Err(Error::InvalidSpec(
                    "the sector path needs an axial field (theta = 0)".into(),
                ))
            }
            Strategy::Sectored => true,
            Strategy::Dense | Strategy::Symmetric => false,
        };
        if sectored {
            let h = build_exchange(spec)?;
            let table = build_sector_table(spec.n_sites)?;
            let decomp = decompose_sectored(&h, &table)?;
            // With θ ≠ 0 and B = 0 only the field-free spectrum is valid.
            let field_shift = spec.theta == 0.0;
            return Ok(Self {
                spec: spec.clone(),
                decomp,
                field_shift,
            });
        }
        let h = build_hamiltonian(spec)?;
        let decomp = match strategy {
            Strategy::Dense => decompose(&h)?,
            _ => {
                let group = find_symmetries(spec, &h);
                if group.is_trivial() {
                    decompose(&h)?
                } else {
                    decompose_symmetric(&h, &group)?
                }
            }
        };
        Ok(Self {
            spec: spec.clone(),
            decomp,
            field_shift: false,
        })
    }

    pub fn spec(&self) -> &ChainSpec {
        &self.spec
    }

    pub fn decomposition(&self) -> &SpectralDecomposition {
        &self.decomp
    }

    /// True if this chain answers queries at any axial field strength.
    pub fn serves_any_field(&self) -> bool {
        self.field_shift
    }

    fn sector_field(&self, b: f64) -> Result<Option<f64>> {
        if self.field_shift {
            Ok(Some(b))
        } else if b == self.spec.b {
            Ok(None)
        } else {
            Err(Error::InvalidSpec(format!(
                "chain was diagonalized at B = {}, cannot evaluate B = {b}",
                self.spec.b
            )))
        }
    }

    /// Eigenvalues of the full Hamiltonian at field `b` (ascending).
    pub fn energies(&self, b: f64) -> Result<Vec<f64>> {
        let mut e = crate::thermal::effective_energies(&self.decomp, self.sector_field(b)?)?;
        e.sort_by(f64::total_cmp);
        Ok(e)
    }

    /// Gibbs weights at `(b, kT)`; `kT = 0` selects the ground manifold.
    pub fn weights(&self, b: f64, kt: f64) -> Result<GibbsWeights> {
        thermal_weights(&self.decomp, kt, self.sector_field(b)?)
    }

    pub fn pair_state(&self, weights: &GibbsWeights, bond: usize) -> Result<TwoQubitState> {
        let pair = self.spec.pair(bond)?;
        reduce_to_pair(&self.decomp, weights, &pair, self.spec.n_sites)
    }

    pub fn pair_concurrence(&self, b: f64, kt: f64, bond: usize) -> Result<ConcurrenceValue> {
        let w = self.weights(b, kt)?;
        concurrence(&self.pair_state(&w, bond)?)
    }

    /// `⟨Σσ^z⟩` at `(b, kT)`.
    pub fn magnetization(&self, b: f64, kt: f64) -> Result<f64> {
        let w = self.weights(b, kt)?;
        thermal_expectation_diagonal(&self.decomp, &w, &magnetization_diagonal(self.spec.n_sites))
    }
}

/// Concurrence of bond `bond` in the thermal state of `spec` at temperature `kt`.
pub fn pair_concurrence(spec: &ChainSpec, kt: f64, bond: usize) -> Result<ConcurrenceValue> {
    if kt < 0.0 || kt.is_nan() {
        return Err(Error::NonPositiveTemperature(kt));
    }
    spec.pair(bond)?;
    PreparedChain::new(spec)?.pair_concurrence(spec.b, kt, bond)
}
