//! Dimerized Heisenberg chains in an axial or tilted field.
//!
//! ```text
//! H = B cosθ Σ σ_i^z + B sinθ Σ σ_i^x
//!   + J Σ_i [1 + (-1)^(i+1) δ] (σ_i^x σ_{i+1}^x + σ_i^y σ_{i+1}^y + [XXX] σ_i^z σ_{i+1}^z)
//! ```
//!
//! Pauli normalization throughout (no factor 1/2 on the spins). The bond sum
//! runs over `i = 1..N` with `σ_{N+1} ≡ σ_1` for closed chains and over
//! `i = 1..N-1` for open ones.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hilbert::{check_sites, magnetization, site_mask};
use crate::matrix::Matrix;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Boundary {
    Closed,
    Open,
}

impl Boundary {
    pub fn as_str(self) -> &'static str {
        match self {
            Boundary::Closed => "closed",
            Boundary::Open => "open",
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Boundary {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "closed" | "periodic" => Ok(Boundary::Closed),
            "open" => Ok(Boundary::Open),
            _ => Err(format!("unknown boundary `{s}` (expected closed or open)")),
        }
    }
}

/// Exchange anisotropy: XXX couples all three components, XX drops σ^z σ^z.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    Xxx,
    Xx,
}

impl Model {
    pub fn as_str(self) -> &'static str {
        match self {
            Model::Xxx => "XXX",
            Model::Xx => "XX",
        }
    }

    /// `(J_x, J_y, J_z)` in units of the bond strength.
    pub fn couplings(self) -> (f64, f64, f64) {
        match self {
            Model::Xxx => (1.0, 1.0, 1.0),
            Model::Xx => (1.0, 1.0, 0.0),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "XXX" => Ok(Model::Xxx),
            "XX" => Ok(Model::Xx),
            _ => Err(format!("unknown model `{s}` (expected XXX or XX)")),
        }
    }
}

/// Physical description of one chain.
///
/// `j > 0` is antiferromagnetic. Ferromagnetic `j < 0` is accepted but is
/// outside the regime the analysis routines were validated for.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainSpec {
    pub n_sites: usize,
    pub j: f64,
    pub delta: f64,
    pub b: f64,
    pub theta: f64,
    pub boundary: Boundary,
    pub model: Model,
}

impl Default for ChainSpec {
    fn default() -> Self {
        Self {
            n_sites: 12,
            j: 1.0,
            delta: 0.2,
            b: 0.0,
            theta: 0.0,
            boundary: Boundary::Closed,
            model: Model::Xxx,
        }
    }
}

impl ChainSpec {
    pub fn validate(&self) -> Result<()> {
        check_sites(self.n_sites)?;
        if !self.j.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "J must be finite, got {}",
                self.j
            )));
        }
        if !(0.0..=1.0).contains(&self.delta) {
            return Err(Error::InvalidSpec(format!(
                "dimer strength must lie in [0, 1], got {}",
                self.delta
            )));
        }
        if !(self.b >= 0.0 && self.b.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "field magnitude must be finite and non-negative, got {}",
                self.b
            )));
        }
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&self.theta) {
            return Err(Error::InvalidSpec(format!(
                "tilt angle must lie in [0, pi/2], got {}",
                self.theta
            )));
        }
        match self.boundary {
            Boundary::Closed if !self.n_sites.is_multiple_of(2) => {
                Err(Error::InvalidSpec(format!(
                    "closed dimerized chains need an even number of sites, got {}",
                    self.n_sites
                )))
            }
            Boundary::Closed if self.n_sites < 4 => Err(Error::InvalidSpec(format!(
                "closed chains need at least 4 sites, got {}",
                self.n_sites
            ))),
            Boundary::Open if self.n_sites < 2 => Err(Error::TooFewSites {
                n_sites: self.n_sites,
                min: 2,
            }),
            _ => Ok(()),
        }
    }

    pub fn dim(&self) -> usize {
        1 << self.n_sites
    }

    pub fn n_bonds(&self) -> usize {
        match self.boundary {
            Boundary::Closed => self.n_sites,
            Boundary::Open => self.n_sites - 1,
        }
    }

    /// Resolves bond `index` (1-based) to its pair of sites.
    pub fn pair(&self, index: usize) -> Result<Pair> {
        if index == 0 || index > self.n_bonds() {
            return Err(Error::BondOutOfRange {
                bond: index,
                n_sites: self.n_sites,
                boundary: self.boundary.as_str(),
            });
        }
        let other = index % self.n_sites + 1;
        Ok(Pair {
            index,
            site_a: index.min(other),
            site_b: index.max(other),
            kind: PairKind::of_bond(index),
        })
    }

    pub fn pairs(&self) -> impl Iterator<Item = Pair> + '_ {
        (1..=self.n_bonds()).map(|i| self.pair(i).expect("bond in range"))
    }

    /// The field along z, `B cosθ`; exactly `B` for θ = 0.
    pub fn field_z(&self) -> f64 {
        if self.theta == 0.0 {
            self.b
        } else {
            self.b * self.theta.cos()
        }
    }

    /// The transverse field `B sinθ`; exactly 0 for θ = 0.
    pub fn field_x(&self) -> f64 {
        if self.theta == 0.0 {
            0.0
        } else {
            self.b * self.theta.sin()
        }
    }

    /// True when Σσ^z is conserved.
    pub fn is_axial(&self) -> bool {
        self.theta == 0.0 || self.b == 0.0
    }

    pub fn with_field(&self, b: f64) -> Self {
        Self { b, ..self.clone() }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum PairKind {
    Strong,
    Weak,
}

impl PairKind {
    /// Odd bonds carry `1 + δ`, even bonds `1 - δ`.
    pub fn of_bond(index: usize) -> Self {
        if index % 2 == 1 {
            PairKind::Strong
        } else {
            PairKind::Weak
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PairKind::Strong => "strong",
            PairKind::Weak => "weak",
        }
    }
}

impl fmt::Display for PairKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A nearest-neighbour bond, with its sites in ascending order.
///
/// The wrap-around bond `N` of a closed chain is stored as `(1, N)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pair {
    pub index: usize,
    pub site_a: usize,
    pub site_b: usize,
    pub kind: PairKind,
}

/// `J [1 + (-1)^(i+1) δ]` for bond `bond`.
pub fn bond_strength(spec: &ChainSpec, bond: usize) -> Result<f64> {
    let pair = spec.pair(bond)?;
    Ok(match pair.kind {
        PairKind::Strong => spec.j * (1.0 + spec.delta),
        PairKind::Weak => spec.j * (1.0 - spec.delta),
    })
}

/// Exchange part only (field set to zero).
pub fn build_exchange(spec: &ChainSpec) -> Result<Matrix> {
    build_hamiltonian(&spec.with_field(0.0))
}

/// Full Hamiltonian in the computational basis.
pub fn build_hamiltonian(spec: &ChainSpec) -> Result<Matrix> {
    spec.validate()?;
    let n = spec.n_sites;
    let dim = spec.dim();
    let (_, _, jz) = spec.model.couplings();
    let mut h = Matrix::zeros(dim);

    // Only antiparallel pairs hop: σ^xσ^x + σ^yσ^y = 2(σ^+σ^- + σ^-σ^+).
    for bond in 1..=spec.n_bonds() {
        let strength = bond_strength(spec, bond)?;
        let (mi, mj) = (site_mask(n, bond), site_mask(n, bond % n + 1));
        for s in 0..dim {
            let parallel = ((s & mi) == 0) == ((s & mj) == 0);
            if parallel {
                h[(s, s)] += jz * strength;
            } else {
                h[(s, s)] -= jz * strength;
                h[(s ^ mi ^ mj, s)] += 2.0 * strength;
            }
        }
    }

    let (bz, bx) = (spec.field_z(), spec.field_x());
    if bz != 0.0 {
        for s in 0..dim {
            h[(s, s)] += bz * magnetization(n, s) as f64;
        }
    }
    if bx != 0.0 {
        for site in 1..=n {
            let m = site_mask(n, site);
            for s in 0..dim {
                h[(s ^ m, s)] += bx;
            }
        }
    }
    Ok(h)
}

/// Diagonal of Σσ^z.
pub fn magnetization_diagonal(n_sites: usize) -> Vec<f64> {
    (0..1usize << n_sites)
        .map(|s| magnetization(n_sites, s) as f64)
        .collect()
}
