//! Gibbs weights and thermal expectation values.
//!
//! Temperatures are given as `kT` in the same (Pauli-normalized) energy units
//! as the Hamiltonian. The thermal density matrix is never formed; everything
//! downstream works from eigenvectors and their weights.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::spectral::SpectralDecomposition;

/// Relative tolerance that groups levels into the degenerate ground manifold.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-9;

/// Eigenvectors whose weight falls below this are skipped in reductions.
///
/// Concurrence responds to a diagonal entry ε of ρ like √ε, so the skipped
/// mass must stay far below the square of the concurrence tolerance.
pub const WEIGHT_CUTOFF: f64 = 1e-30;

/// Normalized occupation of each eigenvector.
#[derive(Clone, Debug, PartialEq)]
pub struct GibbsWeights {
    weights: Vec<f64>,
    /// `kT` used; 0 for the ground-state limit.
    pub kt: f64,
    /// Lowest effective energy, subtracted before exponentiation.
    pub e_min: f64,
}

impl GibbsWeights {
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `(n, w_n)` for every weight at or above [`WEIGHT_CUTOFF`].
    pub fn significant(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.weights
            .iter()
            .copied()
            .enumerate()
            .filter(|&(_, w)| w >= WEIGHT_CUTOFF)
    }

    /// Number of states carrying weight above the cutoff.
    pub fn n_significant(&self) -> usize {
        self.significant().count()
    }
}

/// Effective energies `E_n (+ b m_n)`.
///
/// `sector_field = Some(b)` applies an axial field to a decomposition of the
/// field-free exchange Hamiltonian, using the magnetization labels.
pub fn effective_energies(
    decomp: &SpectralDecomposition,
    sector_field: Option<f64>,
) -> Result<Vec<f64>> {
    match sector_field {
        None => Ok(decomp.eigenvalues().to_vec()),
        Some(b) => {
            let labels = decomp.sector_labels().ok_or(Error::MissingSectorLabels)?;
            Ok(decomp
                .eigenvalues()
                .iter()
                .zip(labels)
                .map(|(&e, &m)| e + b * m as f64)
                .collect())
        }
    }
}

fn min_energy(energies: &[f64]) -> f64 {
    energies.iter().copied().fold(f64::INFINITY, f64::min)
}

/// `w_n = exp(-(E_n - E_min)/kT) / Σ_m exp(-(E_m - E_min)/kT)`.
pub fn gibbs_weights(
    decomp: &SpectralDecomposition,
    kt: f64,
    sector_field: Option<f64>,
) -> Result<GibbsWeights> {
    if !(kt > 0.0) {
        return Err(Error::NonPositiveTemperature(kt));
    }
    let energies = effective_energies(decomp, sector_field)?;
    let e_min = min_energy(&energies);
    let mut weights: Vec<f64> = energies
        .iter()
        .map(|&e| (-(e - e_min) / kt).exp())
        .collect();
    let z: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= z);
    Ok(GibbsWeights { weights, kt, e_min })
}

/// Zero-temperature limit: equal weight on the (possibly degenerate) ground manifold.
pub fn ground_state_weights(
    decomp: &SpectralDecomposition,
    sector_field: Option<f64>,
    degeneracy_tol: f64,
) -> Result<GibbsWeights> {
    let energies = effective_energies(decomp, sector_field)?;
    let e_min = min_energy(&energies);
    let window = degeneracy_tol * e_min.abs().max(1.0);
    let ground: Vec<bool> = energies.iter().map(|&e| e - e_min <= window).collect();
    let g = ground.iter().filter(|&&x| x).count() as f64;
    let weights = ground
        .iter()
        .map(|&x| if x { 1.0 / g } else { 0.0 })
        .collect();
    Ok(GibbsWeights {
        weights,
        kt: 0.0,
        e_min,
    })
}

/// Gibbs weights for `kT > 0`, the ground-state limit for `kT = 0`.
pub fn thermal_weights(
    decomp: &SpectralDecomposition,
    kt: f64,
    sector_field: Option<f64>,
) -> Result<GibbsWeights> {
    if kt == 0.0 {
        ground_state_weights(decomp, sector_field, DEFAULT_DEGENERACY_TOL)
    } else {
        gibbs_weights(decomp, kt, sector_field)
    }
}

fn check_weights(decomp: &SpectralDecomposition, weights: &GibbsWeights) -> Result<()> {
    if weights.len() != decomp.len() {
        return Err(Error::DimensionMismatch {
            expected: decomp.len(),
            actual: weights.len(),
        });
    }
    Ok(())
}

/// `Σ_n w_n v_nᵀ O v_n`.
pub fn thermal_expectation(
    decomp: &SpectralDecomposition,
    weights: &GibbsWeights,
    observable: &Matrix,
) -> Result<f64> {
    check_weights(decomp, weights)?;
    if observable.dim() != decomp.dim() {
        return Err(Error::DimensionMismatch {
            expected: decomp.dim(),
            actual: observable.dim(),
        });
    }
    let mut v = vec![0.0; decomp.dim()];
    let mut total = 0.0;
    for (n, w) in weights.significant() {
        v.iter_mut().for_each(|x| *x = 0.0);
        decomp.scatter_eigenvector(n, 1.0, &mut v);
        total += w * observable.quadratic_form(&v);
    }
    Ok(total)
}

/// Same as [`thermal_expectation`] for an observable diagonal in the computational basis.
pub fn thermal_expectation_diagonal(
    decomp: &SpectralDecomposition,
    weights: &GibbsWeights,
    diagonal: &[f64],
) -> Result<f64> {
    check_weights(decomp, weights)?;
    if diagonal.len() != decomp.dim() {
        return Err(Error::DimensionMismatch {
            expected: decomp.dim(),
            actual: diagonal.len(),
        });
    }
    let mut v = vec![0.0; decomp.dim()];
    let mut total = 0.0;
    for (n, w) in weights.significant() {
        v.iter_mut().for_each(|x| *x = 0.0);
        decomp.scatter_eigenvector(n, 1.0, &mut v);
        total += w * v.iter().zip(diagonal).map(|(x, d)| x * x * d).sum::<f64>();
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::decompose;

    #[test]
    fn two_level_closed_form() {
        let d = decompose(&Matrix::from_diagonal(&[0.0, 2.0])).unwrap();
        let w = gibbs_weights(&d, 1.0, None).unwrap();
        let e = (-2.0f64).exp();
        assert!((w.weights()[0] - 1.0 / (1.0 + e)).abs() < 1e-15);
        assert!((w.weights()[1] - e / (1.0 + e)).abs() < 1e-15);
    }

    #[test]
    fn infinite_temperature_is_uniform() {
        let d = decompose(&Matrix::from_diagonal(&[-3.0, 0.5, 1.0, 7.0])).unwrap();
        let w = gibbs_weights(&d, 1e6 * 10.0, None).unwrap();
        assert!(w.weights().iter().all(|&x| (x - 0.25).abs() < 1e-6));
    }

    #[test]
    fn rejects_non_positive_temperature() {
        let d = decompose(&Matrix::from_diagonal(&[0.0, 1.0])).unwrap();
        assert_eq!(
            gibbs_weights(&d, 0.0, None),
            Err(Error::NonPositiveTemperature(0.0))
        );
        assert!(gibbs_weights(&d, -1.0, None).is_err());
        assert!(thermal_weights(&d, -1.0, None).is_err());
        assert_eq!(
            thermal_weights(&d, 0.0, None).unwrap().weights(),
            &[1.0, 0.0]
        );
        assert_eq!(
            gibbs_weights(&d, 1.0, Some(1.0)),
            Err(Error::MissingSectorLabels)
        );
    }

    #[test]
    fn extreme_gaps_do_not_overflow() {
        let d = decompose(&Matrix::from_diagonal(&[-500.0, -499.0, 900.0])).unwrap();
        let w = gibbs_weights(&d, 1e-3, None).unwrap();
        assert!(w.weights().iter().all(|x| x.is_finite()));
        assert_eq!(w.weights()[0], 1.0);
    }

    #[test]
    fn degenerate_ground_manifold() {
        let d = decompose(&Matrix::from_diagonal(&[1.0, -2.0, -2.0 + 1e-12, 0.0])).unwrap();
        let w = ground_state_weights(&d, None, DEFAULT_DEGENERACY_TOL).unwrap();
        assert_eq!(w.weights(), &[0.5, 0.5, 0.0, 0.0]);
    }

    #[test]
    fn expectation_of_identity_and_energy() {
        let h = Matrix::from_row_major(3, vec![1.0, 0.3, 0.0, 0.3, -1.0, 0.2, 0.0, 0.2, 0.5]);
        let d = decompose(&h).unwrap();
        let w = gibbs_weights(&d, 0.7, None).unwrap();
        let one = thermal_expectation(&d, &w, &Matrix::identity(3)).unwrap();
        assert!((one - 1.0).abs() < 1e-14);
        let g = ground_state_weights(&d, None, DEFAULT_DEGENERACY_TOL).unwrap();
        let e0 = thermal_expectation(&d, &g, &h).unwrap();
        assert!((e0 - d.eigenvalues()[0]).abs() < 1e-13);
        assert!(thermal_expectation(&d, &w, &Matrix::identity(2)).is_err());
    }
}
