//! Real symmetric eigendecompositions, optionally block-diagonal.
//!
//! A decomposition is a set of blocks. Each block owns an orthonormal set of
//! basis vectors (sparse in the computational basis) and the eigenvectors of
//! the Hamiltonian restricted to that span. The dense path uses one block with
//! the computational basis; the sector path uses one block per Σσ^z sector;
//! the symmetry path (see [`crate::symmetry`]) uses symmetrized orbit bases.

use faer::{Mat, Side};

use crate::error::{Error, Result};
use crate::hilbert::{magnetization, SectorTable, MAX_SITES};
use crate::matrix::Matrix;

/// Relative tolerance for the input symmetry check.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Orthonormal basis vectors of one block, stored as compressed rows.
#[derive(Clone, Debug)]
pub(crate) struct BlockBasis {
    offsets: Vec<usize>,
    states: Vec<usize>,
    coeffs: Vec<f64>,
}

impl BlockBasis {
    /// One computational basis state per vector.
    pub(crate) fn from_states(states: &[usize]) -> Self {
        Self {
            offsets: (0..=states.len()).collect(),
            states: states.to_vec(),
            coeffs: vec![1.0; states.len()],
        }
    }

    pub(crate) fn new() -> Self {
        Self {
            offsets: vec![0],
            states: Vec::new(),
            coeffs: Vec::new(),
        }
    }

    pub(crate) fn push(&mut self, entries: impl IntoIterator<Item = (usize, f64)>) {
        for (s, c) in entries {
            self.states.push(s);
            self.coeffs.push(c);
        }
        self.offsets.push(self.states.len());
    }

    pub(crate) fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub(crate) fn vector(&self, a: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.offsets[a]..self.offsets[a + 1];
        self.states[r.clone()]
            .iter()
            .copied()
            .zip(self.coeffs[r].iter().copied())
    }
}

#[derive(Clone, Debug)]
pub(crate) struct SpectralBlock {
    basis: BlockBasis,
    eigenvalues: Vec<f64>,
    /// Row k holds eigenvector k in the block basis.
    vectors: Vec<f64>,
    magnetization: Option<i32>,
}

impl SpectralBlock {
    fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Adds `scale * eigenvector(row)` into a dense buffer.
    #[inline]
    fn scatter_into(&self, row: usize, scale: f64, out: &mut [f64]) {
        let n = self.len();
        let coeffs = &self.vectors[row * n..(row + 1) * n];
        for (a, &y) in coeffs.iter().enumerate() {
            if y == 0.0 {
                continue;
            }
            for (s, c) in self.basis.vector(a) {
                out[s] += scale * y * c;
            }
        }
    }
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a real symmetric matrix.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    dim: usize,
    blocks: Vec<SpectralBlock>,
    order: Vec<(u32, u32)>,
    eigenvalues: Vec<f64>,
    labels: Option<Vec<i32>>,
}

impl SpectralDecomposition {
    pub(crate) fn from_blocks(dim: usize, blocks: Vec<SpectralBlock>) -> Self {
        let mut order: Vec<(u32, u32)> = blocks
            .iter()
            .enumerate()
            .flat_map(|(b, blk)| (0..blk.len()).map(move |r| (b as u32, r as u32)))
            .collect();
        // Stable on ties: block order, then row order.
        order.sort_by(|&(b1, r1), &(b2, r2)| {
            let e1 = blocks[b1 as usize].eigenvalues[r1 as usize];
            let e2 = blocks[b2 as usize].eigenvalues[r2 as usize];
            e1.total_cmp(&e2)
        });
        let eigenvalues = order
            .iter()
            .map(|&(b, r)| blocks[b as usize].eigenvalues[r as usize])
            .collect();
        let labels = blocks.iter().all(|b| b.magnetization.is_some()).then(|| {
            order
                .iter()
                .map(|&(b, _)| blocks[b as usize].magnetization.unwrap())
                .collect()
        });
        Self {
            dim,
            blocks,
            order,
            eigenvalues,
            labels,
        }
    }

    /// Dimension of the full space.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of eigenpairs (equals `dim`).
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Σσ^z eigenvalue of each eigenvector, present for sector decompositions.
    pub fn sector_labels(&self) -> Option<&[i32]> {
        self.labels.as_deref()
    }

    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Largest block dimension that was diagonalized.
    pub fn largest_block(&self) -> usize {
        self.blocks
            .iter()
            .map(SpectralBlock::len)
            .max()
            .unwrap_or(0)
    }

    /// Adds `scale * v_n` into `out` (length `dim`).
    #[inline]
    pub fn scatter_eigenvector(&self, n: usize, scale: f64, out: &mut [f64]) {
        let (b, r) = self.order[n];
        self.blocks[b as usize].scatter_into(r as usize, scale, out);
    }

    /// Eigenvector `n` in the computational basis.
    pub fn eigenvector(&self, n: usize) -> Vec<f64> {
        let mut v = vec![0.0; self.dim];
        self.scatter_eigenvector(n, 1.0, &mut v);
        v
    }

    /// Dense eigenvector matrix, column n = eigenvector n.
    fn eigenvector_matrix(&self) -> Mat<f64> {
        let mut v = Mat::<f64>::zeros(self.dim, self.dim);
        let mut buf = vec![0.0; self.dim];
        for n in 0..self.len() {
            buf.iter_mut().for_each(|x| *x = 0.0);
            self.scatter_eigenvector(n, 1.0, &mut buf);
            for (i, &x) in buf.iter().enumerate() {
                v[(i, n)] = x;
            }
        }
        v
    }

    /// `V Λ Vᵀ` in the computational basis.
    pub fn reconstruct(&self) -> Matrix {
        let v = self.eigenvector_matrix();
        let mut scaled = v.clone();
        for (n, &e) in self.eigenvalues.iter().enumerate() {
            for i in 0..self.dim {
                scaled[(i, n)] *= e;
            }
        }
        let prod = &scaled * v.transpose();
        to_matrix(prod.as_ref())
    }

    /// `max |VᵀV - I|`.
    pub fn orthonormality_error(&self) -> f64 {
        let v = self.eigenvector_matrix();
        let gram = v.transpose() * &v;
        let mut err: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let target = if i == j { 1.0 } else { 0.0 };
                err = err.max((gram[(i, j)] - target).abs());
            }
        }
        err
    }
}

fn to_matrix(m: faer::MatRef<'_, f64>) -> Matrix {
    Matrix::from_fn(m.nrows(), |i, j| m[(i, j)])
}

/// Dense symmetric eigensolve of a small block; returns ascending
/// eigenvalues and row-major eigenvectors (row k = eigenvector k).
pub(crate) fn eigh_rows(
    dim: usize,
    entry: impl Fn(usize, usize) -> f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if dim == 1 {
        return Ok((vec![entry(0, 0)], vec![1.0]));
    }
    let a = Mat::<f64>::from_fn(dim, dim, entry);
    let evd = a
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let mut idx: Vec<usize> = (0..dim).collect();
    idx.sort_by(|&a, &b| s[a].total_cmp(&s[b]));
    let eigenvalues = idx.iter().map(|&k| s[k]).collect();
    let mut vectors = Vec::with_capacity(dim * dim);
    for &k in &idx {
        vectors.extend((0..dim).map(|i| u[(i, k)]));
    }
    Ok((eigenvalues, vectors))
}

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if dim > 1 << MAX_SITES {
        return Err(Error::TooManySites {
            n_sites: dim.ilog2() as usize,
            max: MAX_SITES,
        });
    }
    Ok(())
}

pub(crate) fn block(
    basis: BlockBasis,
    eigen: (Vec<f64>, Vec<f64>),
    magnetization: Option<i32>,
) -> SpectralBlock {
    SpectralBlock {
        basis,
        eigenvalues: eigen.0,
        vectors: eigen.1,
        magnetization,
    }
}

/// Full eigendecomposition of a dense real symmetric matrix.
pub fn decompose(h: &Matrix) -> Result<SpectralDecomposition> {
    check_dim(h.dim())?;
    h.check_symmetric(SYMMETRY_TOL)?;
    let dim = h.dim();
    let states: Vec<usize> = (0..dim).collect();
    let eig = eigh_rows(dim, |i, j| h[(i, j)])?;
    Ok(SpectralDecomposition::from_blocks(
        dim,
        vec![block(BlockBasis::from_states(&states), eig, None)],
    ))
}

/// Diagonalizes a Σσ^z-conserving matrix sector by sector.
///
/// Adding an axial field `B Σσ^z` shifts eigenvalue `E_n` to `E_n + B m_n`
/// without changing any eigenvector, so the result serves a whole field sweep.
pub fn decompose_sectored(h: &Matrix, table: &SectorTable) -> Result<SpectralDecomposition> {
    let dim = table.dim();
    if h.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: h.dim(),
        });
    }
    check_dim(dim)?;
    h.check_symmetric(SYMMETRY_TOL)?;
    check_sector_conservation(h, table.n_sites())?;
    let blocks = table
        .sectors()
        .iter()
        .map(|sector| {
            let st = &sector.states;
            let eig = eigh_rows(st.len(), |a, b| h[(st[a], st[b])])?;
            Ok(block(
                BlockBasis::from_states(st),
                eig,
                Some(sector.magnetization),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectralDecomposition::from_blocks(dim, blocks))
}

/// Verifies `[H, Σσ^z] = 0`, i.e. no element couples different sectors.
pub fn check_sector_conservation(h: &Matrix, n_sites: usize) -> Result<()> {
    let tol = SYMMETRY_TOL * h.max_abs().max(1.0);
    for s in 0..h.dim() {
        let ms = magnetization(n_sites, s);
        for (t, &x) in h.row(s).iter().enumerate() {
            if x != 0.0 && x.abs() > tol && magnetization(n_sites, t) != ms {
                return Err(Error::SectorLeak {
                    row: s,
                    col: t,
                    value: x,
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{build_exchange, build_hamiltonian, Boundary, ChainSpec, Model};
    use crate::hilbert::build_sector_table;

    #[test]
    fn diagonal_input() {
        let d = decompose(&Matrix::from_diagonal(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(d.eigenvalues(), &[1.0, 2.0, 3.0]);
        assert_eq!(
            d.eigenvector(0).iter().map(|x| x.abs()).collect::<Vec<_>>(),
            vec![0.0, 1.0, 0.0]
        );
        assert_eq!(
            d.eigenvector(2).iter().map(|x| x.abs()).collect::<Vec<_>>(),
            vec![1.0, 0.0, 0.0]
        );
        assert!(d.sector_labels().is_none());
    }

    #[test]
    fn two_by_two() {
        let d = decompose(&Matrix::from_row_major(2, vec![2.0, 1.0, 1.0, 2.0])).unwrap();
        assert!((d.eigenvalues()[0] - 1.0).abs() < 1e-14);
        assert!((d.eigenvalues()[1] - 3.0).abs() < 1e-14);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let v0 = d.eigenvector(0);
        assert!((v0[0] * v0[1] + 0.5).abs() < 1e-14 && (v0[0].abs() - r).abs() < 1e-14);
        let v1 = d.eigenvector(1);
        assert!((v1[0] * v1[1] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn rejects_asymmetric_input() {
        let m = Matrix::from_row_major(2, vec![1.0, 0.5, 0.4, 1.0]);
        assert!(matches!(decompose(&m), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn two_site_sectors() {
        let spec = ChainSpec {
            n_sites: 2,
            delta: 0.2,
            boundary: Boundary::Open,
            ..ChainSpec::default()
        };
        let h = build_exchange(&spec).unwrap();
        let d = decompose_sectored(&h, &build_sector_table(2).unwrap()).unwrap();
        let labels = d.sector_labels().unwrap();
        let e = d.eigenvalues();
        assert!((e[0] + 3.6).abs() < 1e-14);
        assert_eq!(labels[0], 0);
        for n in 1..4 {
            assert!((e[n] - 1.2).abs() < 1e-14);
        }
        let mut triplet_labels: Vec<i32> = labels[1..].to_vec();
        triplet_labels.sort();
        assert_eq!(triplet_labels, vec![-2, 0, 2]);
    }

    #[test]
    fn sectored_rejects_tilted_field() {
        let spec = ChainSpec {
            n_sites: 4,
            b: 1.0,
            theta: 0.3,
            ..ChainSpec::default()
        };
        let h = build_hamiltonian(&spec).unwrap();
        assert!(matches!(
            decompose_sectored(&h, &build_sector_table(4).unwrap()),
            Err(Error::SectorLeak { .. })
        ));
        let wrong = build_sector_table(3).unwrap();
        assert!(matches!(
            decompose_sectored(&h, &wrong),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn sectored_matches_dense_xx() {
        let spec = ChainSpec {
            n_sites: 6,
            model: Model::Xx,
            b: 0.0,
            ..ChainSpec::default()
        };
        let h = build_hamiltonian(&spec).unwrap();
        let a = decompose(&h).unwrap();
        let b = decompose_sectored(&h, &build_sector_table(6).unwrap()).unwrap();
        for (x, y) in a.eigenvalues().iter().zip(b.eigenvalues()) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!(b.reconstruct().max_abs_diff(&h) < 1e-12);
        assert!(b.orthonormality_error() < 1e-12);
    }
}
