//! Computational basis of `N` spin-1/2 sites.
//!
//! Basis state `|s_1 s_2 ... s_N⟩` has index `Σ s_k 2^(N-k)`: site 1 is the most
//! significant bit. Bit value 0 is spin up (σ^z = +1), bit value 1 is spin down
//! (σ^z = -1). Restricted to two sites this gives the ordering
//! `|00⟩, |01⟩, |10⟩, |11⟩`.
//!
//! Operators are assembled by bit arithmetic on basis indices; no Kronecker
//! products are formed.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Largest chain handled by the dense code paths.
pub const MAX_SITES: usize = 14;

/// Pauli axis.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "x" | "X" => Ok(Axis::X),
            "y" | "Y" => Ok(Axis::Y),
            "z" | "Z" => Ok(Axis::Z),
            _ => Err(format!("unknown axis `{s}`")),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

/// Index of a computational basis state.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisIndex(pub usize);

impl BasisIndex {
    /// Packs a bit pattern, first entry = site 1.
    pub fn from_bits(bits: &[u8]) -> Self {
        BasisIndex(bits.iter().fold(0, |acc, &b| (acc << 1) | (b & 1) as usize))
    }

    pub fn bits(self, n_sites: usize) -> Vec<u8> {
        (1..=n_sites).map(|site| self.bit(n_sites, site)).collect()
    }

    /// Bit of `site` (1-based).
    #[inline]
    pub fn bit(self, n_sites: usize, site: usize) -> u8 {
        ((self.0 >> site_shift(n_sites, site)) & 1) as u8
    }

    /// Σσ^z eigenvalue: `#up - #down`.
    #[inline]
    pub fn magnetization(self, n_sites: usize) -> i32 {
        n_sites as i32 - 2 * self.0.count_ones() as i32
    }
}

/// Bit position of a 1-based site.
#[inline]
pub fn site_shift(n_sites: usize, site: usize) -> usize {
    n_sites - site
}

#[inline]
pub fn site_mask(n_sites: usize, site: usize) -> usize {
    1 << site_shift(n_sites, site)
}

/// Σσ^z eigenvalue of a raw index.
#[inline]
pub fn magnetization(n_sites: usize, index: usize) -> i32 {
    BasisIndex(index).magnetization(n_sites)
}

pub fn check_sites(n_sites: usize) -> Result<()> {
    if n_sites == 0 {
        return Err(Error::TooFewSites { n_sites, min: 1 });
    }
    if n_sites > MAX_SITES {
        return Err(Error::TooManySites {
            n_sites,
            max: MAX_SITES,
        });
    }
    Ok(())
}

fn check_site(n_sites: usize, site: usize) -> Result<()> {
    if site == 0 || site > n_sites {
        return Err(Error::SiteOutOfRange { site, n_sites });
    }
    Ok(())
}

/// Embeds σ^axis at `site` into the 2^N dimensional space.
///
/// σ^y alone is imaginary and rejected; use [`two_site_coupling`] for σ^y σ^y.
pub fn single_site_pauli(n_sites: usize, site: usize, axis: Axis) -> Result<Matrix> {
    check_sites(n_sites)?;
    check_site(n_sites, site)?;
    let dim = 1usize << n_sites;
    let mask = site_mask(n_sites, site);
    let mut m = Matrix::zeros(dim);
    match axis {
        Axis::Z => {
            for s in 0..dim {
                m[(s, s)] = if s & mask == 0 { 1.0 } else { -1.0 };
            }
        }
        Axis::X => {
            for s in 0..dim {
                m[(s ^ mask, s)] = 1.0;
            }
        }
        Axis::Y => return Err(Error::ImaginaryOperator),
    }
    Ok(m)
}

/// Matrix element structure of σ_i^a σ_j^a on basis state `s`: returns the
/// image state and the (real) amplitude.
#[inline]
pub fn pair_action(s: usize, mask_i: usize, mask_j: usize, axis: Axis) -> (usize, f64) {
    let parallel = ((s & mask_i) == 0) == ((s & mask_j) == 0);
    match axis {
        Axis::Z => (s, if parallel { 1.0 } else { -1.0 }),
        Axis::X => (s ^ mask_i ^ mask_j, 1.0),
        // σ^y|0⟩ = i|1⟩, σ^y|1⟩ = -i|0⟩: parallel pairs pick up i·i = -1.
        Axis::Y => (s ^ mask_i ^ mask_j, if parallel { -1.0 } else { 1.0 }),
    }
}

/// σ_i^axis σ_j^axis embedded in 2^N dimensions. Real for every axis.
pub fn two_site_coupling(n_sites: usize, i: usize, j: usize, axis: Axis) -> Result<Matrix> {
    check_sites(n_sites)?;
    check_site(n_sites, i)?;
    check_site(n_sites, j)?;
    if i == j {
        return Err(Error::SameSite(i));
    }
    let dim = 1usize << n_sites;
    let (mi, mj) = (site_mask(n_sites, i), site_mask(n_sites, j));
    let mut m = Matrix::zeros(dim);
    for s in 0..dim {
        let (t, amp) = pair_action(s, mi, mj, axis);
        m[(t, s)] = amp;
    }
    Ok(m)
}

/// Basis states of one magnetization sector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sector {
    pub magnetization: i32,
    /// Ascending basis indices.
    pub states: Vec<usize>,
}

impl Sector {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// Partition of the basis by Σσ^z eigenvalue, ordered from m = N down to m = -N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorTable {
    n_sites: usize,
    sectors: Vec<Sector>,
}

impl SectorTable {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn sectors(&self) -> &[Sector] {
        &self.sectors
    }

    pub fn sector(&self, magnetization: i32) -> Option<&Sector> {
        self.sectors
            .iter()
            .find(|s| s.magnetization == magnetization)
    }

    /// Total number of basis states (2^N).
    pub fn dim(&self) -> usize {
        1 << self.n_sites
    }
}

pub fn build_sector_table(n_sites: usize) -> Result<SectorTable> {
    check_sites(n_sites)?;
    let mut sectors: Vec<Sector> = (0..=n_sites)
        .map(|downs| Sector {
            magnetization: n_sites as i32 - 2 * downs as i32,
            states: Vec::new(),
        })
        .collect();
    for s in 0..1usize << n_sites {
        sectors[s.count_ones() as usize].states.push(s);
    }
    Ok(SectorTable { n_sites, sectors })
}
