//! Spin-J operators and the two-/three-axis variance bounds.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{im, re, seeded_rng, unit_sphere_grid, CMatrix, CVector};
use crate::optim::NelderMead;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn unit_vector(self) -> [f64; 3] {
        match self {
            Axis::X => [1.0, 0.0, 0.0],
            Axis::Y => [0.0, 1.0, 0.0],
            Axis::Z => [0.0, 0.0, 1.0],
        }
    }

    pub fn all() -> [Axis; 3] {
        [Axis::X, Axis::Y, Axis::Z]
    }
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Axis::X => write!(f, "X"),
            Axis::Y => write!(f, "Y"),
            Axis::Z => write!(f, "Z"),
        }
    }
}

/// Normalization of a spin component: half-integer spin matrices, or Pauli
/// matrices (2J, only defined for J = 1/2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpinUnits {
    J,
    Pauli,
}

/// A spin component along a unit direction, in the chosen normalization.
/// The spin magnitude is inferred from the party dimension at use sites.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpinObservable {
    pub direction: [f64; 3],
    pub units: SpinUnits,
}

impl SpinObservable {
    pub fn along(direction: [f64; 3], units: SpinUnits) -> Result<Self> {
        let n = norm3(&direction);
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidObservable(format!(
                "direction norm {n} != 1"
            )));
        }
        Ok(SpinObservable { direction, units })
    }

    pub fn axis(axis: Axis, units: SpinUnits) -> Self {
        SpinObservable {
            direction: axis.unit_vector(),
            units,
        }
    }

    /// Matrix representation for a party of the given dimension.
    pub fn matrix(&self, dim: usize) -> Result<CMatrix> {
        let j = spin_from_dim(dim)?;
        let m = spin_matrix(j, self.direction)?;
        match self.units {
            SpinUnits::J => Ok(m),
            SpinUnits::Pauli => {
                if dim != 2 {
                    return Err(Error::InvalidObservable(
                        "Pauli units are only defined for J = 1/2".into(),
                    ));
                }
                Ok(m * re(2.0))
            }
        }
    }
}

fn norm3(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Validates a half-integer spin value, returning 2J as an integer.
pub(crate) fn validate_spin(j: f64) -> Result<u32> {
    let two_j = (2.0 * j).round();
    if j <= 0.0 || (2.0 * j - two_j).abs() > 1e-9 || two_j < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "spin must be a positive half-integer, got {j}"
        )));
    }
    Ok(two_j as u32)
}

pub(crate) fn spin_from_dim(dim: usize) -> Result<f64> {
    if dim < 2 {
        return Err(Error::InvalidObservable(format!(
            "party dimension {dim} has no spin representation"
        )));
    }
    Ok((dim as f64 - 1.0) / 2.0)
}

/// The standard spin-J component matrices (Jx, Jy, Jz), dimension 2J+1.
/// Basis ordering is m = J, J-1, ..., -J.
pub fn spin_component_matrices(j: f64) -> Result<[CMatrix; 3]> {
    let two_j = validate_spin(j)?;
    let dim = (two_j + 1) as usize;
    let mut jp = CMatrix::zeros(dim, dim);
    for i in 1..dim {
        // raising: |m+1><m| with m = j - i
        let m = j - i as f64;
        jp[(i - 1, i)] = re((j * (j + 1.0) - m * (m + 1.0)).sqrt());
    }
    let jm = jp.adjoint();
    let jx = (&jp + &jm) * re(0.5);
    let jy = (&jp - &jm) * im(-0.5);
    let jz = CMatrix::from_fn(dim, dim, |r, c| {
        if r == c {
            re(j - r as f64)
        } else {
            re(0.0)
        }
    });
    Ok([jx, jy, jz])
}

/// n . J for a unit direction n (J-units).
pub fn spin_matrix(j: f64, direction: [f64; 3]) -> Result<CMatrix> {
    let n = norm3(&direction);
    if n < 1e-12 {
        return Err(Error::InvalidObservable("zero direction vector".into()));
    }
    if (n - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidObservable(format!(
            "direction norm {n} != 1"
        )));
    }
    let [jx, jy, jz] = spin_component_matrices(j)?;
    Ok(jx * re(direction[0]) + jy * re(direction[1]) + jz * re(direction[2]))
}

/// Pauli matrix along a coordinate axis.
pub fn pauli_matrix(axis: Axis) -> CMatrix {
    let z = Complex64::new(0.0, 0.0);
    match axis {
        Axis::X => CMatrix::from_row_slice(2, 2, &[z, re(1.0), re(1.0), z]),
        Axis::Y => CMatrix::from_row_slice(2, 2, &[z, im(-1.0), im(1.0), z]),
        Axis::Z => CMatrix::from_row_slice(2, 2, &[re(1.0), z, z, re(-1.0)]),
    }
}

/// Lower bound for the sum of spin variances over `num_axes` orthogonal
/// components, in J-units.
///
/// For three axes the bound is J exactly. For two axes the bound has no
/// closed form in general; it is computed numerically by minimizing
/// (dJx)^2 + (dJy)^2 over pure states of dimension 2J+1, and cached.
pub fn uncertainty_bound(j: f64, num_axes: usize) -> Result<f64> {
    let two_j = validate_spin(j)?;
    match num_axes {
        3 => Ok(j),
        2 => Ok(cached_two_axis_bound(two_j)),
        _ => Err(Error::InvalidArgument(format!(
            "num_axes must be 2 or 3, got {num_axes}"
        ))),
    }
}

fn cached_two_axis_bound(two_j: u32) -> f64 {
    static CACHE: OnceLock<Mutex<HashMap<u32, f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(&v) = cache.lock().unwrap().get(&two_j) {
        return v;
    }
    let v = minimize_two_axis_variance(two_j);
    cache.lock().unwrap().insert(two_j, v);
    v
}

/// Minimum of (dJx)^2 + (dJy)^2 over pure states, by dense sampling for
/// J = 1/2 plus multi-start Nelder-Mead refinement in general.
fn minimize_two_axis_variance(two_j: u32) -> f64 {
    let j = two_j as f64 / 2.0;
    let dim = (two_j + 1) as usize;
    let [jx, jy, _] = spin_component_matrices(j).expect("validated spin");
    let jx2 = &jx * &jx;
    let jy2 = &jy * &jy;

    let objective = |params: &[f64]| -> f64 {
        let psi = CVector::from_fn(dim, |k, _| Complex64::new(params[2 * k], params[2 * k + 1]));
        let n2 = psi.norm_squared();
        if n2 < 1e-12 {
            return f64::INFINITY;
        }
        let psi = psi / re(n2.sqrt());
        let ex = psi.dotc(&(&jx * &psi)).re;
        let ey = psi.dotc(&(&jy * &psi)).re;
        let ex2 = psi.dotc(&(&jx2 * &psi)).re;
        let ey2 = psi.dotc(&(&jy2 * &psi)).re;
        (ex2 - ex * ex) + (ey2 - ey * ey)
    };

    let mut starts: Vec<Vec<f64>> = Vec::new();
    // canonical starts: basis states and balanced superpositions
    for k in 0..dim {
        let mut p = vec![0.0; 2 * dim];
        p[2 * k] = 1.0;
        starts.push(p);
    }
    let mut balanced = vec![0.0; 2 * dim];
    balanced[0] = 1.0;
    balanced[2 * (dim - 1)] = 1.0;
    starts.push(balanced);
    let uniform = vec![1.0; 2 * dim];
    starts.push(uniform);
    // spin-1/2: dense Bloch sampling feeds the refinement
    if dim == 2 {
        for v in unit_sphere_grid(4000) {
            let theta = v[2].acos();
            let phi = v[1].atan2(v[0]);
            starts.push(vec![
                (theta / 2.0).cos(),
                0.0,
                (theta / 2.0).sin() * phi.cos(),
                (theta / 2.0).sin() * phi.sin(),
            ]);
        }
    }
    // seeded random starts
    let mut rng = seeded_rng(0x5EED_0002);
    for _ in 0..24 {
        let p: Vec<f64> = (0..2 * dim)
            .map(|_| crate::linalg::normal(&mut rng))
            .collect();
        starts.push(p);
    }

    let mut best = f64::INFINITY;
    let mut candidates: Vec<(f64, Vec<f64>)> =
        starts.into_iter().map(|s| (objective(&s), s)).collect();
    candidates.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    candidates.truncate(30);
    let nm = NelderMead {
        max_iter: 800,
        f_tol: 1e-14,
    };
    for (_, s) in candidates {
        let (_, v) = nm.minimize(objective, &s, 0.2);
        if v < best {
            best = v;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use crate::linalg::hermitian_eigenvalues;

    #[test]
    fn pauli_spectrum_along_x() {
        let obs = SpinObservable::axis(Axis::X, SpinUnits::Pauli);
        let m = obs.matrix(2).unwrap();
        let eigs = hermitian_eigenvalues(&m);
        assert_relative_eq!(eigs[0], -1.0, epsilon = 1e-12);
        assert_relative_eq!(eigs[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn spin_half_z_is_half_diagonal() {
        let m = spin_matrix(0.5, [0.0, 0.0, 1.0]).unwrap();
        assert_relative_eq!(m[(0, 0)].re, 0.5, epsilon = 1e-15);
        assert_relative_eq!(m[(1, 1)].re, -0.5, epsilon = 1e-15);
    }

    #[test]
    fn spin_one_z_spectrum() {
        let m = spin_matrix(1.0, [0.0, 0.0, 1.0]).unwrap();
        assert_relative_eq!(m[(0, 0)].re, 1.0, epsilon = 1e-15);
        assert_relative_eq!(m[(1, 1)].re, 0.0, epsilon = 1e-15);
        assert_relative_eq!(m[(2, 2)].re, -1.0, epsilon = 1e-15);
    }

    #[test]
    fn spin_matrices_satisfy_commutators() {
        for &j in &[0.5, 1.0, 1.5] {
            let [jx, jy, jz] = spin_component_matrices(j).unwrap();
            let comm = &jx * &jy - &jy * &jx;
            let expect = &jz * im(1.0);
            assert!((comm - expect).norm() < 1e-12, "[Jx,Jy] != iJz for j={j}");
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(spin_matrix(0.3, [0.0, 0.0, 1.0]).is_err());
        assert!(spin_matrix(0.5, [0.0, 0.0, 0.0]).is_err());
        assert!(uncertainty_bound(0.5, 4).is_err());
        assert!(SpinObservable::axis(Axis::X, SpinUnits::Pauli).matrix(3).is_err());
    }

    #[test]
    fn three_axis_bound_is_j() {
        assert_relative_eq!(uncertainty_bound(0.5, 3).unwrap(), 0.5);
        assert_relative_eq!(uncertainty_bound(1.0, 3).unwrap(), 1.0);
    }

    #[test]
    fn two_axis_bound_for_qubit() {
        // Minimum of (dJx)^2 + (dJy)^2 over the Bloch sphere is 1/4, reached
        // on the equator.
        let c = uncertainty_bound(0.5, 2).unwrap();
        assert_relative_eq!(c, 0.25, epsilon = 1e-6);
    }

    #[test]
    fn two_axis_bound_for_spin_one_is_cached_and_below_naive() {
        let c1 = uncertainty_bound(1.0, 2).unwrap();
        let c2 = uncertainty_bound(1.0, 2).unwrap();
        assert_eq!(c1, c2);
        // the |m = +1> state gives exactly 1; superpositions do better
        assert!(c1 < 1.0);
        assert!(c1 > 0.0);
    }
}
