//! Pair reduced density matrices and Wootters concurrence.
//!
//! All states here are real, so `ρ* = ρ` and the spin-flipped state is
//! `ρ̃ = Y ρ Y` with the real matrix `Y = σ^y ⊗ σ^y`. The square roots of the
//! eigenvalues of `R = ρ ρ̃` are the singular values of the symmetric matrix
//! `√ρ Y √ρ`, i.e. the absolute values of its eigenvalues. Working with that
//! matrix avoids squaring and then square-rooting small eigenvalues.

use crate::error::{Error, Result};
use crate::hamiltonian::Pair;
use crate::hilbert::site_mask;
use crate::spectral::SpectralDecomposition;
use crate::thermal::GibbsWeights;

pub type Mat4 = [[f64; 4]; 4];

/// Trace tolerance for a valid two-qubit state.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues in `[-PSD_TOL, 0)` are roundoff and clamped to zero.
pub const PSD_TOL: f64 = 1e-10;
const SYMMETRY_TOL: f64 = 1e-12;
const WEIGHT_SUM_TOL: f64 = 1e-10;

/// `σ^y ⊗ σ^y` in the basis `|00⟩, |01⟩, |10⟩, |11⟩`.
pub const SIGMA_YY: Mat4 = [
    [0.0, 0.0, 0.0, -1.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
];

/// Real 4×4 density matrix of a spin pair, lower-numbered site first.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct TwoQubitState {
    pub rho: Mat4,
}

impl TwoQubitState {
    /// Wraps a matrix without validation.
    pub fn new(rho: Mat4) -> Self {
        Self { rho }
    }

    /// `|ψ⟩⟨ψ|` for a real amplitude vector.
    pub fn pure(psi: [f64; 4]) -> Self {
        let mut rho = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                rho[i][j] = psi[i] * psi[j];
            }
        }
        Self { rho }
    }

    pub fn maximally_mixed() -> Self {
        let mut rho = [[0.0; 4]; 4];
        for (i, row) in rho.iter_mut().enumerate() {
            row[i] = 0.25;
        }
        Self { rho }
    }

    /// `p ρ_a + (1 - p) ρ_b`.
    pub fn mix(p: f64, a: &Self, b: &Self) -> Self {
        let mut rho = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                rho[i][j] = p * a.rho[i][j] + (1.0 - p) * b.rho[i][j];
            }
        }
        Self { rho }
    }

    pub fn trace(&self) -> f64 {
        (0..4).map(|i| self.rho[i][i]).sum()
    }

    /// Exchanges the two qubits.
    pub fn swapped(&self) -> Self {
        const SWAP: [usize; 4] = [0, 2, 1, 3];
        let mut rho = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                rho[i][j] = self.rho[SWAP[i]][SWAP[j]];
            }
        }
        Self { rho }
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> [f64; 4] {
        jacobi_eigen(self.rho).0
    }

    /// `(|tr ρ - 1|, λ_min(ρ))`.
    pub fn diagnostics(&self) -> StateDiagnostics {
        StateDiagnostics {
            trace_error: (self.trace() - 1.0).abs(),
            min_eigenvalue: self.eigenvalues()[0],
        }
    }

    /// Unit trace, symmetry and positive semidefiniteness up to roundoff.
    pub fn validate(&self) -> Result<()> {
        for i in 0..4 {
            for j in 0..i {
                let dev = (self.rho[i][j] - self.rho[j][i]).abs();
                if !(dev <= SYMMETRY_TOL) {
                    return Err(Error::InvalidState(format!(
                        "asymmetric at ({i}, {j}) by {dev:e}"
                    )));
                }
            }
        }
        let d = self.diagnostics();
        if !(d.trace_error <= TRACE_TOL) {
            return Err(Error::InvalidState(format!(
                "trace deviates from 1 by {:e}",
                d.trace_error
            )));
        }
        if !(d.min_eigenvalue >= -PSD_TOL) {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {:e}",
                d.min_eigenvalue
            )));
        }
        Ok(())
    }
}

/// Numerical hygiene of a reduced state.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct StateDiagnostics {
    pub trace_error: f64,
    pub min_eigenvalue: f64,
}

impl StateDiagnostics {
    pub fn worst(self, other: Self) -> Self {
        Self {
            trace_error: self.trace_error.max(other.trace_error),
            min_eigenvalue: self.min_eigenvalue.min(other.min_eigenvalue),
        }
    }
}

/// Concurrence with the descending `λ_i` it was computed from.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ConcurrenceValue {
    pub c: f64,
    pub lambdas: [f64; 4],
}

/// Traces a thermal state down to the sites of `pair`.
///
/// Accumulates eigenvector by eigenvector; weights below
/// [`crate::thermal::WEIGHT_CUTOFF`] are skipped.
pub fn reduce_to_pair(
    decomp: &SpectralDecomposition,
    weights: &GibbsWeights,
    pair: &Pair,
    n_sites: usize,
) -> Result<TwoQubitState> {
    if decomp.dim() != 1 << n_sites {
        return Err(Error::DimensionMismatch {
            expected: 1 << n_sites,
            actual: decomp.dim(),
        });
    }
    if weights.len() != decomp.len() {
        return Err(Error::DimensionMismatch {
            expected: decomp.len(),
            actual: weights.len(),
        });
    }
    for site in [pair.site_a, pair.site_b] {
        if site == 0 || site > n_sites {
            return Err(Error::SiteOutOfRange { site, n_sites });
        }
    }
    if pair.site_a == pair.site_b {
        return Err(Error::SameSite(pair.site_a));
    }
    let sum = weights.sum();
    if !((sum - 1.0).abs() <= WEIGHT_SUM_TOL) {
        return Err(Error::UnnormalizedWeights(sum));
    }

    let (ma, mb) = (
        site_mask(n_sites, pair.site_a),
        site_mask(n_sites, pair.site_b),
    );
    let offsets = [0, mb, ma, ma | mb];
    let mut v = vec![0.0; decomp.dim()];
    // Upper triangle, row-major: (0,0) (0,1) (0,2) (0,3) (1,1) (1,2) (1,3) (2,2) (2,3) (3,3)
    let mut acc = [0.0f64; 10];
    for (n, w) in weights.significant() {
        v.iter_mut().for_each(|x| *x = 0.0);
        decomp.scatter_eigenvector(n, 1.0, &mut v);
        let mut local = [0.0f64; 10];
        for rest in 0..v.len() {
            if rest & (ma | mb) != 0 {
                continue;
            }
            let x = offsets.map(|o| v[rest | o]);
            if x == [0.0; 4] {
                continue;
            }
            let mut k = 0;
            for i in 0..4 {
                for j in i..4 {
                    local[k] += x[i] * x[j];
                    k += 1;
                }
            }
        }
        for (a, l) in acc.iter_mut().zip(local) {
            *a += w * l;
        }
    }
    let mut rho = [[0.0; 4]; 4];
    let mut k = 0;
    for i in 0..4 {
        for j in i..4 {
            rho[i][j] = acc[k];
            rho[j][i] = acc[k];
            k += 1;
        }
    }
    Ok(TwoQubitState { rho })
}

/// Wootters concurrence `max(0, λ1 - λ2 - λ3 - λ4)`.
pub fn concurrence(state: &TwoQubitState) -> Result<ConcurrenceValue> {
    state.validate()?;
    let (d, u) = jacobi_eigen(state.rho);
    let sqrt_d = d.map(|x| if x < 0.0 { 0.0 } else { x.sqrt() });

    // √ρ = U diag(√d) Uᵀ, columns of `u` are eigenvectors.
    let mut sqrt_rho = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            sqrt_rho[i][j] = (0..4).map(|k| u[i][k] * sqrt_d[k] * u[j][k]).sum();
        }
    }
    let a = symmetrize(mul(&mul(&sqrt_rho, &SIGMA_YY), &sqrt_rho));
    let (eig, _) = jacobi_eigen(a);
    let mut lambdas = eig.map(f64::abs);
    lambdas.sort_by(|x, y| y.total_cmp(x));
    let c = (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0);
    Ok(ConcurrenceValue { c, lambdas })
}

fn mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

fn symmetrize(a: Mat4) -> Mat4 {
    let mut out = a;
    for i in 0..4 {
        for j in 0..i {
            let m = 0.5 * (a[i][j] + a[j][i]);
            out[i][j] = m;
            out[j][i] = m;
        }
    }
    out
}

/// Cyclic Jacobi eigensolver for a symmetric 4×4 matrix. Returns ascending
/// eigenvalues and the eigenvector matrix (eigenvectors in columns).
pub fn jacobi_eigen(mut a: Mat4) -> ([f64; 4], Mat4) {
    let mut v = [[0.0; 4]; 4];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..64 {
        let off: f64 = (0..4)
            .flat_map(|i| (0..4).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let scale: f64 = (0..4).map(|i| a[i][i] * a[i][i]).sum::<f64>() + off;
        if off <= 1e-36 * scale || off == 0.0 {
            break;
        }
        for p in 0..3 {
            for q in p + 1..4 {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..4 {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..4 {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let mut idx = [0usize, 1, 2, 3];
    idx.sort_by(|&x, &y| a[x][x].total_cmp(&a[y][y]));
    let vals = idx.map(|k| a[k][k]);
    let mut vecs = [[0.0; 4]; 4];
    for (col, &k) in idx.iter().enumerate() {
        for row in 0..4 {
            vecs[row][col] = v[row][k];
        }
    }
    (vals, vecs)
}
