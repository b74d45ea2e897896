//! Small complex linear-algebra helpers shared by the state modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn im(x: f64) -> Complex64 {
    Complex64::new(0.0, x)
}

/// Largest entry of |M - M^dagger|.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let adj = m.adjoint();
    (m - adj).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// |psi><psi| for an (unnormalized) vector.
pub fn outer(psi: &CVector) -> CMatrix {
    psi * psi.adjoint()
}

/// Real part of tr(rho * op).
pub fn trace_product_re(rho: &CMatrix, op: &CMatrix) -> f64 {
    let n = rho.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += rho[(i, k)] * op[(k, i)];
        }
    }
    acc.re
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut vals: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_hermitian_eigenvalue(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(m)
        .first()
        .copied()
        .unwrap_or(f64::NAN)
}

/// Positive-semidefinite square root of a Hermitian matrix; eigenvalues
/// below zero (numerical noise) are clamped.
pub fn psd_sqrt(m: &CMatrix) -> CMatrix {
    let eig = m.clone().symmetric_eigen();
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|x| re(x.max(0.0).sqrt())));
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// Complex vector with i.i.d. standard-normal real and imaginary parts.
pub fn gaussian_complex_vector(dim: usize, rng: &mut ChaCha20Rng) -> CVector {
    CVector::from_fn(dim, |_, _| Complex64::new(normal(rng), normal(rng)))
}

/// One standard-normal sample via Box-Muller.
pub fn normal(rng: &mut ChaCha20Rng) -> f64 {
    let u1: f64 = rng.random_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.random::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Haar-distributed unitary, QR of a Ginibre matrix with phase fixing.
pub fn haar_unitary(dim: usize, rng: &mut ChaCha20Rng) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| Complex64::new(normal(rng), normal(rng)));
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let phases = DMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            let d = r[(i, i)];
            if d.norm() > 1e-300 {
                d / d.norm()
            } else {
                re(1.0)
            }
        } else {
            re(0.0)
        }
    });
    q * phases
}

/// Fibonacci lattice on the unit sphere: `n` near-uniform directions.
pub fn unit_sphere_grid(n: usize) -> Vec<[f64; 3]> {
    let golden = (1.0 + 5.0_f64.sqrt()) / 2.0;
    (0..n)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = 2.0 * std::f64::consts::PI * (i as f64 / golden).fract();
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

/// Deterministic RNG for internal optimizer starts.
pub fn seeded_rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}
