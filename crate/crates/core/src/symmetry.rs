//! Block reduction by commuting lattice involutions.
//!
//! With a tilted field Σσ^z is no longer conserved, but a dimerized chain
//! still has real involutive symmetries that permute basis states:
//!
//! * translation by `N/2` sites on a closed chain when `N/2` is even,
//! * reflection about the centre of a strong bond (closed chains, or open
//!   chains with even `N`),
//! * the global spin flip `Πσ^x` when the field has no z component.
//!
//! They commute, so their joint ±1 eigenspaces split `H` into real blocks of
//! roughly `2^N / 2^k` states. Candidate symmetries are only used after an
//! explicit commutation check against the assembled matrix.

use crate::error::Result;
use crate::hamiltonian::{Boundary, ChainSpec};
use crate::hilbert::site_shift;
use crate::matrix::Matrix;
use crate::spectral::{
    block, check_dim, eigh_rows, BlockBasis, SpectralDecomposition, SYMMETRY_TOL,
};

/// A permutation of basis states that squares to the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Involution {
    /// `images[k - 1]` is the site that site `k` is moved to.
    Sites(Vec<usize>),
    /// `Πσ^x`.
    SpinFlip,
}

impl Involution {
    #[inline]
    pub fn apply(&self, n_sites: usize, s: usize) -> usize {
        match self {
            Involution::SpinFlip => s ^ ((1 << n_sites) - 1),
            Involution::Sites(images) => {
                let mut t = 0;
                for (k, &img) in images.iter().enumerate() {
                    if (s >> site_shift(n_sites, k + 1)) & 1 == 1 {
                        t |= 1 << site_shift(n_sites, img);
                    }
                }
                t
            }
        }
    }

    /// Translation by `N/2`, when it maps strong bonds onto strong bonds.
    pub fn half_translation(spec: &ChainSpec) -> Option<Self> {
        let n = spec.n_sites;
        (spec.boundary == Boundary::Closed && n.is_multiple_of(4))
            .then(|| Involution::Sites((1..=n).map(|k| (k - 1 + n / 2) % n + 1).collect()))
    }

    /// Reflection fixing the centre of bond 1 (closed) or of the chain (open).
    pub fn bond_reflection(spec: &ChainSpec) -> Option<Self> {
        let n = spec.n_sites;
        match spec.boundary {
            // 0-based p -> 1 - p (mod N): swaps sites 1,2 and 3,N, ...
            Boundary::Closed if n.is_multiple_of(2) => Some(Involution::Sites(
                (0..n).map(|p| (n + 1 - p) % n + 1).collect(),
            )),
            Boundary::Open if n.is_multiple_of(2) => {
                Some(Involution::Sites((1..=n).map(|k| n + 1 - k).collect()))
            }
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Involution::SpinFlip => "spin-flip".to_string(),
            Involution::Sites(images) => format!("sites{images:?}"),
        }
    }
}

/// Every candidate involution for a chain, before checking against `H`.
pub fn candidate_symmetries(spec: &ChainSpec) -> Vec<Involution> {
    let mut out = Vec::new();
    out.extend(Involution::half_translation(spec));
    out.extend(Involution::bond_reflection(spec));
    if spec.field_z() == 0.0 || spec.field_z().abs() < 1e-12 * spec.b.abs() {
        out.push(Involution::SpinFlip);
    }
    out
}

/// `g H g = H` to the symmetry tolerance.
pub fn commutes(h: &Matrix, n_sites: usize, g: &Involution) -> bool {
    let tol = SYMMETRY_TOL * h.max_abs().max(1.0);
    let dim = h.dim();
    let image: Vec<usize> = (0..dim).map(|s| g.apply(n_sites, s)).collect();
    (0..dim).all(|s| {
        let gs = image[s];
        let row = h.row(s);
        let grow = h.row(gs);
        row.iter()
            .enumerate()
            .all(|(t, &x)| (grow[image[t]] - x).abs() <= tol)
    })
}

/// A set of mutually commuting involutions of one chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryGroup {
    n_sites: usize,
    generators: Vec<Involution>,
}

impl SymmetryGroup {
    pub fn trivial(n_sites: usize) -> Self {
        Self {
            n_sites,
            generators: Vec::new(),
        }
    }

    pub fn generators(&self) -> &[Involution] {
        &self.generators
    }

    /// Group order, `2^k`.
    pub fn order(&self) -> usize {
        1 << self.generators.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    /// Adds `g` if it is an involution commuting with every generator so far.
    pub fn try_add(&mut self, g: Involution) -> bool {
        let n = self.n_sites;
        let ok = (0..1usize << n).all(|s| {
            g.apply(n, g.apply(n, s)) == s
                && self
                    .generators
                    .iter()
                    .all(|h| g.apply(n, h.apply(n, s)) == h.apply(n, g.apply(n, s)))
        });
        if ok && !self.generators.contains(&g) {
            self.generators.push(g);
            true
        } else {
            false
        }
    }

    /// Image tables of every group element; element `e` is the product of the
    /// generators whose bit is set in `e`.
    fn element_images(&self) -> Vec<Vec<usize>> {
        let dim = 1usize << self.n_sites;
        let mut elements = vec![(0..dim).collect::<Vec<_>>()];
        for g in &self.generators {
            let extended: Vec<Vec<usize>> = elements
                .iter()
                .map(|img| img.iter().map(|&s| g.apply(self.n_sites, s)).collect())
                .collect();
            elements.extend(extended);
        }
        elements
    }
}

/// The symmetries of `spec` that `h` actually has.
pub fn find_symmetries(spec: &ChainSpec, h: &Matrix) -> SymmetryGroup {
    let mut group = SymmetryGroup::trivial(spec.n_sites);
    for g in candidate_symmetries(spec) {
        if commutes(h, spec.n_sites, &g) {
            group.try_add(g);
        }
    }
    group
}

/// Diagonalizes `h` within each joint eigenspace of the group.
///
/// The caller guarantees that every generator commutes with `h`
/// (see [`find_symmetries`]).
pub fn decompose_symmetric(h: &Matrix, group: &SymmetryGroup) -> Result<SpectralDecomposition> {
    let dim = h.dim();
    check_dim(dim)?;
    h.check_symmetric(SYMMETRY_TOL)?;
    let elements = group.element_images();
    let n_chars = elements.len();

    // Orbits in ascending order of their smallest member.
    let mut seen = vec![false; dim];
    let mut orbits: Vec<(Vec<usize>, usize)> = Vec::new();
    for r in 0..dim {
        if seen[r] {
            continue;
        }
        let mut members: Vec<usize> = elements.iter().map(|img| img[r]).collect();
        members.sort_unstable();
        members.dedup();
        for &s in &members {
            seen[s] = true;
        }
        orbits.push((members, r));
    }

    let mut blocks = Vec::with_capacity(n_chars);
    for ch in 0..n_chars {
        let chi = |e: usize| {
            if (ch & e).count_ones().is_multiple_of(2) {
                1.0
            } else {
                -1.0
            }
        };
        let mut basis = BlockBasis::new();
        for (members, r) in &orbits {
            let stabilizer_ok = elements
                .iter()
                .enumerate()
                .all(|(e, img)| img[*r] != *r || chi(e) > 0.0);
            if !stabilizer_ok {
                continue;
            }
            let norm = 1.0 / (members.len() as f64).sqrt();
            let entries = members.iter().map(|&s| {
                let e = elements
                    .iter()
                    .position(|img| img[*r] == s)
                    .expect("orbit member");
                (s, chi(e) * norm)
            });
            basis.push(entries.collect::<Vec<_>>());
        }
        let n = basis.len();
        if n == 0 {
            continue;
        }
        let mut m = vec![0.0; n * n];
        for a in 0..n {
            for b in 0..=a {
                let mut acc = 0.0;
                for (s, cs) in basis.vector(a) {
                    let row = h.row(s);
                    for (t, ct) in basis.vector(b) {
                        acc += cs * ct * row[t];
                    }
                }
                m[a * n + b] = acc;
                m[b * n + a] = acc;
            }
        }
        let eig = eigh_rows(n, |a, b| m[a * n + b])?;
        blocks.push(block(basis, eig, None));
    }
    Ok(SpectralDecomposition::from_blocks(dim, blocks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{build_hamiltonian, Model};
    use crate::spectral::decompose;

    fn tilted(n: usize, boundary: Boundary, theta: f64) -> ChainSpec {
        ChainSpec {
            n_sites: n,
            b: 0.9,
            theta,
            boundary,
            model: Model::Xx,
            ..ChainSpec::default()
        }
    }

    #[test]
    fn candidates_per_geometry() {
        let s = tilted(8, Boundary::Closed, 0.5);
        assert_eq!(candidate_symmetries(&s).len(), 2);
        let s = tilted(6, Boundary::Closed, std::f64::consts::FRAC_PI_2);
        // N/2 odd: no half translation, but reflection and spin flip.
        assert_eq!(candidate_symmetries(&s).len(), 2);
        let s = tilted(5, Boundary::Open, 0.5);
        assert!(candidate_symmetries(&s).is_empty());
    }

    #[test]
    fn reflection_maps_sites_pairwise() {
        let s = tilted(6, Boundary::Closed, 0.3);
        let Some(Involution::Sites(img)) = Involution::bond_reflection(&s) else {
            panic!()
        };
        assert_eq!(img, vec![2, 1, 6, 5, 4, 3]);
    }

    #[test]
    fn matches_dense_spectrum() {
        for (n, boundary, theta) in [
            (8, Boundary::Closed, 0.7),
            (8, Boundary::Closed, std::f64::consts::FRAC_PI_2),
            (6, Boundary::Open, 0.7),
            (6, Boundary::Closed, std::f64::consts::FRAC_PI_4),
        ] {
            let spec = tilted(n, boundary, theta);
            let h = build_hamiltonian(&spec).unwrap();
            let group = find_symmetries(&spec, &h);
            assert!(!group.is_trivial());
            let sym = decompose_symmetric(&h, &group).unwrap();
            let dense = decompose(&h).unwrap();
            assert_eq!(sym.len(), dense.len());
            for (a, b) in sym.eigenvalues().iter().zip(dense.eigenvalues()) {
                assert!((a - b).abs() < 1e-11, "{a} vs {b}");
            }
            assert!(sym.reconstruct().max_abs_diff(&h) < 1e-11);
            assert!(sym.orthonormality_error() < 1e-12);
        }
    }

    #[test]
    fn rejects_symmetry_the_matrix_lacks() {
        let mut spec = tilted(8, Boundary::Closed, 0.7);
        spec.model = Model::Xxx;
        let h = build_hamiltonian(&spec).unwrap();
        assert!(!commutes(&h, 8, &Involution::SpinFlip));
        let group = find_symmetries(&spec, &h);
        assert_eq!(group.order(), 4);
    }
}
