//! Reference computations that share no code path with the library: closed
//! forms and brute-force dense linear algebra through nalgebra.

use dimerspin::Matrix;
use nalgebra::{DMatrix, SymmetricEigen};

/// Concurrence of an isolated XXX pair with coupling `jp` in an axial field.
///
/// Levels: singlet at −3J′, triplet at J′ − 2B, J′, J′ + 2B.
pub fn two_spin_concurrence(jp: f64, b: f64, kt: f64) -> f64 {
    let beta = 1.0 / kt;
    // Numerator and partition function both divided by e^{3βJ′}.
    let t = (-4.0 * beta * jp).exp();
    let z = 1.0 + t * (1.0 + 2.0 * (2.0 * beta * b).cosh());
    ((1.0 - 3.0 * t) / z).max(0.0)
}

/// Two-site reduced state of the Gibbs state of `h`, from the full density
/// matrix. Site 1 is the most significant bit; `site_a` indexes the rows'
/// high bit.
pub fn brute_force_pair_state(
    h: &Matrix,
    n_sites: usize,
    kt: f64,
    site_a: usize,
    site_b: usize,
) -> [[f64; 4]; 4] {
    let dim = h.dim();
    let eig = SymmetricEigen::new(DMatrix::from_row_slice(dim, dim, h.as_slice()));
    let e_min = eig.eigenvalues.min();
    let w: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|e| (-(e - e_min) / kt).exp())
        .collect();
    let z: f64 = w.iter().sum();
    let mut rho = DMatrix::<f64>::zeros(dim, dim);
    for (k, wk) in w.iter().enumerate() {
        let v = eig.eigenvectors.column(k);
        rho += v * v.transpose() * (wk / z);
    }
    let bit = |s: usize, site: usize| (s >> (n_sites - site)) & 1;
    let mut out = [[0.0; 4]; 4];
    for r in 0..dim {
        for c in 0..dim {
            let rest_equal = (1..=n_sites)
                .filter(|&s| s != site_a && s != site_b)
                .all(|s| bit(r, s) == bit(c, s));
            if rest_equal {
                out[2 * bit(r, site_a) + bit(r, site_b)][2 * bit(c, site_a) + bit(c, site_b)] +=
                    rho[(r, c)];
            }
        }
    }
    out
}
