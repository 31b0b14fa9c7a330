//! Fixtures shared by the criterion benchmarks in `benches/`.

use dimerspin::{Boundary, ChainSpec, Model};

/// Closed XXX chain at the default dimerization and zero field.
pub fn closed_chain(n_sites: usize) -> ChainSpec {
    ChainSpec {
        n_sites,
        ..ChainSpec::default()
    }
}

/// Tilted XX chain, which takes the lattice-symmetry path.
pub fn tilted_xx(n_sites: usize, b: f64) -> ChainSpec {
    ChainSpec {
        n_sites,
        b,
        theta: std::f64::consts::FRAC_PI_4,
        model: Model::Xx,
        boundary: Boundary::Closed,
        ..ChainSpec::default()
    }
}
