//! Conditional spin-variance inference for finite-dimensional states.
//!
//! The inference variance is the outcome-probability-weighted average of the
//! target's conditional variances, i.e. the residual of the minimum
//! mean-square estimator built from the conditioning measurement.

use num_complex::Complex64;

use crate::discrete::{
    measure_projective, pauli_matrix, spin_matrix, Axis, DensityState, SpinObservable,
};
use crate::error::{Error, Result};
use crate::linalg::{normal, re, seeded_rng, unit_sphere_grid, CMatrix};
use crate::optim::NelderMead;
use crate::party::{ensure_disjoint, ensure_valid_group, Party};

use super::{Conditioning, InferenceMode, InferenceResult, TargetSpec};

/// Bloch grid size for single-qubit measurement optimization.
const QUBIT_GRID: usize = 10_000;

/// A conditioning measurement for specified-mode inference.
#[derive(Clone, Debug)]
pub enum DiscreteConditioning {
    /// Spin component on a single-party steering group.
    Spin(SpinObservable),
    /// Joint Hermitian observable on the group (in listed order).
    Matrix(CMatrix),
}

/// Average conditional variance of `target` (a spin component of the steered
/// party) given a measurement by `group`.
///
/// In specified mode the provided conditioning observable is measured. In
/// optimized mode the measurement is minimized over projective families:
/// a dense Bloch grid plus local refinement for single-qubit groups, and a
/// multi-start generator-eigenbasis search for joint measurements.
pub fn inf_variance_discrete(
    state: &DensityState,
    steered: Party,
    target: &SpinObservable,
    group: &[Party],
    mode: InferenceMode,
    conditioning: Option<&DiscreteConditioning>,
) -> Result<InferenceResult> {
    ensure_valid_group(&[steered], state.n_parties())?;
    ensure_valid_group(group, state.n_parties())?;
    ensure_disjoint(&[&[steered], group])?;
    if group.is_empty() {
        return Err(Error::InvalidArgument("empty steering group".into()));
    }

    let mut keep: Vec<Party> = group.to_vec();
    keep.push(steered);
    let reduced = state.partial_trace(&keep)?;
    let steered_dim = *reduced.party_dims().last().unwrap();
    let target_matrix = target.matrix(steered_dim)?;

    let (variance, conditioning_out) = match mode {
        InferenceMode::Specified => {
            let spec = conditioning.ok_or_else(|| {
                Error::InvalidArgument("specified mode needs a conditioning observable".into())
            })?;
            let (matrix, desc) = match spec {
                DiscreteConditioning::Spin(obs) => {
                    if group.len() != 1 {
                        return Err(Error::InvalidArgument(
                            "spin conditioning needs a single-party group".into(),
                        ));
                    }
                    let dim = reduced.party_dims()[0];
                    (
                        obs.matrix(dim)?,
                        Conditioning::SpinDirection {
                            party: group[0],
                            direction: obs.direction,
                        },
                    )
                }
                DiscreteConditioning::Matrix(m) => (
                    m.clone(),
                    Conditioning::JointObservable {
                        group: group.to_vec(),
                        description: format!("specified {}x{} observable", m.nrows(), m.ncols()),
                    },
                ),
            };
            let v = average_conditional_variance(&reduced, group.len(), &matrix, &target_matrix)?;
            (v, desc)
        }
        InferenceMode::Optimized => {
            optimized_inference(&reduced, group.len(), group, &target_matrix, &[])?
        }
    };

    Ok(InferenceResult {
        variance,
        steered: vec![steered],
        steering_group: group.to_vec(),
        target: TargetSpec::Spin {
            party: steered,
            direction: target.direction,
            units: target.units,
        },
        conditioning: conditioning_out,
        mode,
    })
}

/// Optimized inference variance with caller-supplied extra starting
/// measurements; returns the best variance and the measurement found.
pub fn optimize_spin_inference(
    state: &DensityState,
    steered: Party,
    target: &SpinObservable,
    group: &[Party],
    extra_conditionings: &[CMatrix],
) -> Result<(f64, Conditioning)> {
    ensure_valid_group(&[steered], state.n_parties())?;
    ensure_valid_group(group, state.n_parties())?;
    ensure_disjoint(&[&[steered], group])?;
    let mut keep: Vec<Party> = group.to_vec();
    keep.push(steered);
    let reduced = state.partial_trace(&keep)?;
    let steered_dim = *reduced.party_dims().last().unwrap();
    let target_matrix = target.matrix(steered_dim)?;
    optimized_inference(&reduced, group.len(), group, &target_matrix, extra_conditionings)
}

/// Sum of inference variances over simultaneously measurable pairs
/// (disjoint steering groups), e.g. cross-conditioned axis triples.
pub fn inference_sum_discrete(
    state: &DensityState,
    steered: Party,
    pairs: &[(SpinObservable, Vec<Party>)],
    mode: InferenceMode,
    conditionings: Option<&[DiscreteConditioning]>,
) -> Result<f64> {
    let groups: Vec<&[Party]> = pairs.iter().map(|(_, g)| g.as_slice()).collect();
    let mut all: Vec<&[Party]> = vec![std::slice::from_ref(&steered)];
    all.extend(groups.iter().copied());
    ensure_disjoint(&all)?;

    let mut total = 0.0;
    for (k, (target, group)) in pairs.iter().enumerate() {
        let conditioning = conditionings.map(|c| &c[k]);
        total += inf_variance_discrete(state, steered, target, group, mode, conditioning)?.variance;
    }
    Ok(total)
}

/// Weighted average of per-outcome variances of `target_matrix` (acting on
/// the steered party, the last slot of `reduced`) after measuring
/// `conditioning` on the group slots.
fn average_conditional_variance(
    reduced: &DensityState,
    n_group: usize,
    conditioning: &CMatrix,
    target_matrix: &CMatrix,
) -> Result<f64> {
    let group_slots: Vec<Party> = (0..n_group).map(Party).collect();
    let ensemble = measure_projective(reduced, &group_slots, conditioning)?;
    let t2 = target_matrix * target_matrix;
    let mut acc = 0.0;
    for branch in &ensemble.branches {
        let mean = branch.state.expectation(target_matrix)?;
        let second = branch.state.expectation(&t2)?;
        acc += branch.probability * (second - mean * mean).max(0.0);
    }
    Ok(acc)
}

fn optimized_inference(
    reduced: &DensityState,
    n_group: usize,
    original_group: &[Party],
    target_matrix: &CMatrix,
    extra: &[CMatrix],
) -> Result<(f64, Conditioning)> {
    let group_dims = &reduced.party_dims()[..n_group];
    let steered_dim = reduced.party_dims()[n_group];
    if n_group == 1 && group_dims[0] == 2 && steered_dim == 2 {
        let (variance, direction) = fast_qubit_optimum(reduced, target_matrix, extra)?;
        return Ok((
            variance,
            Conditioning::SpinDirection {
                party: original_group[0],
                direction,
            },
        ));
    }
    let variance = general_optimized(reduced, n_group, target_matrix, extra)?;
    Ok((
        variance,
        Conditioning::JointObservable {
            group: original_group.to_vec(),
            description: "optimized joint projective measurement".into(),
        },
    ))
}

/// Bloch decomposition of a 2x2 Hermitian matrix: trace part, traceless
/// magnitude and unit direction.
fn bloch_decompose(m: &CMatrix) -> (f64, f64, [f64; 3]) {
    let shift = 0.5 * m.trace().re;
    let ax = 0.5 * (m[(0, 1)] + m[(1, 0)]).re;
    let ay = 0.5 * ((m[(1, 0)] - m[(0, 1)]) * Complex64::new(0.0, -1.0)).re;
    let az = 0.5 * (m[(0, 0)] - m[(1, 1)]).re;
    let scale = (ax * ax + ay * ay + az * az).sqrt();
    if scale < 1e-14 {
        (shift, 0.0, [0.0, 0.0, 1.0])
    } else {
        (shift, scale, [ax / scale, ay / scale, az / scale])
    }
}

/// Single-qubit-group, qubit-target optimization from precomputed moments.
///
/// Writing the target as shift + scale * (a.sigma) and the measurement as
/// the spin along n, the average conditional variance is an explicit
/// rational function of n; a dense sphere grid plus Nelder-Mead refinement
/// finds its minimum.
fn fast_qubit_optimum(
    reduced: &DensityState,
    target_matrix: &CMatrix,
    extra: &[CMatrix],
) -> Result<(f64, [f64; 3])> {
    let (_, scale, axis) = bloch_decompose(target_matrix);
    if scale < 1e-14 {
        return Ok((0.0, [0.0, 0.0, 1.0]));
    }
    let t_hat = spin_matrix(0.5, axis)? * re(2.0); // unit Pauli component

    let sig = [
        pauli_matrix(Axis::X),
        pauli_matrix(Axis::Y),
        pauli_matrix(Axis::Z),
    ];
    let id2 = CMatrix::identity(2, 2);
    let mut a = [0.0; 3];
    let mut u = [0.0; 3];
    for k in 0..3 {
        a[k] = reduced.expectation(&sig[k].kronecker(&id2))?;
        u[k] = reduced.expectation(&sig[k].kronecker(&t_hat))?;
    }
    let b_t = reduced.expectation(&id2.kronecker(&t_hat))?;

    let objective = |n: &[f64]| -> f64 {
        let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        if norm < 1e-9 {
            return f64::MAX;
        }
        let c = (n[0] * a[0] + n[1] * a[1] + n[2] * a[2]) / norm;
        let v = (n[0] * u[0] + n[1] * u[1] + n[2] * u[2]) / norm;
        let mut total = 0.0;
        for sign in [1.0, -1.0] {
            let p = 0.5 * (1.0 + sign * c);
            if p < 1e-12 {
                continue;
            }
            let m = ((b_t + sign * v) / (2.0 * p)).clamp(-1.0, 1.0);
            total += p * (1.0 - m * m);
        }
        total
    };

    let mut candidates: Vec<[f64; 3]> = unit_sphere_grid(QUBIT_GRID);
    candidates.extend([
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
    ]);
    for m in extra {
        let (_, s, dir) = bloch_decompose(m);
        if s > 1e-12 {
            candidates.push(dir);
        }
    }

    let mut scored: Vec<(f64, [f64; 3])> = candidates
        .into_iter()
        .map(|n| (objective(&n), n))
        .collect();
    scored.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let mut best = scored[0];
    let nm = NelderMead {
        max_iter: 300,
        f_tol: 1e-14,
    };
    for (_, n) in scored.iter().take(6) {
        let (x, v) = nm.minimize(objective, n, 0.15);
        if v < best.0 {
            let norm = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
            best = (v, [x[0] / norm, x[1] / norm, x[2] / norm]);
        }
    }
    Ok((best.0 * scale * scale, best.1))
}

/// Hermitian basis of a d-dimensional space; coordinates are the diagonal
/// entries, then real and imaginary parts of the upper triangle.
fn hermitian_basis(dim: usize) -> Vec<CMatrix> {
    let mut ops = Vec::with_capacity(dim * dim);
    for k in 0..dim {
        let mut m = CMatrix::zeros(dim, dim);
        m[(k, k)] = re(1.0);
        ops.push(m);
    }
    for k in 0..dim {
        for l in (k + 1)..dim {
            let mut s = CMatrix::zeros(dim, dim);
            s[(k, l)] = re(1.0);
            s[(l, k)] = re(1.0);
            ops.push(s);
            let mut a = CMatrix::zeros(dim, dim);
            a[(k, l)] = Complex64::new(0.0, 1.0);
            a[(l, k)] = Complex64::new(0.0, -1.0);
            ops.push(a);
        }
    }
    ops
}

fn matrix_to_params(m: &CMatrix) -> Vec<f64> {
    let dim = m.nrows();
    let mut params = Vec::with_capacity(dim * dim);
    for k in 0..dim {
        params.push(m[(k, k)].re);
    }
    for k in 0..dim {
        for l in (k + 1)..dim {
            params.push(m[(k, l)].re);
            params.push(m[(k, l)].im);
        }
    }
    params
}

fn params_to_matrix(params: &[f64], dim: usize, basis: &[CMatrix]) -> CMatrix {
    let mut h = CMatrix::zeros(dim, dim);
    for (k, b) in basis.iter().enumerate() {
        if params[k] != 0.0 {
            h += b * re(params[k]);
        }
    }
    h
}

/// Joint-measurement optimization: von Neumann measurement in the eigenbasis
/// of a parametrized Hermitian generator, refined by Nelder-Mead from
/// multiple starts. Starts include per-party axis products and refinements
/// of each party's single-party optimum, so a group never does worse than
/// any of its members.
fn general_optimized(
    reduced: &DensityState,
    n_group: usize,
    target_matrix: &CMatrix,
    extra: &[CMatrix],
) -> Result<f64> {
    let group_dims: Vec<usize> = reduced.party_dims()[..n_group].to_vec();
    let dg: usize = group_dims.iter().product();
    let basis = hermitian_basis(dg);

    let objective = |params: &[f64]| -> f64 {
        let h = params_to_matrix(params, dg, &basis);
        average_conditional_variance(reduced, n_group, &h, target_matrix).unwrap_or(f64::MAX)
    };

    let mut starts: Vec<Vec<f64>> = Vec::new();

    // axis-product generators with separated weight scales per party
    let axis_combos: Vec<Vec<Axis>> = if n_group <= 2 {
        let mut combos = Vec::new();
        let axes = Axis::all();
        if n_group == 1 {
            for a in axes {
                combos.push(vec![a]);
            }
        } else {
            for a in axes {
                for b in axes {
                    combos.push(vec![a, b]);
                }
            }
        }
        combos
    } else {
        Axis::all().iter().map(|&a| vec![a; n_group]).collect()
    };
    for combo in axis_combos {
        if let Some(h) = product_generator(&group_dims, &combo.iter().map(|a| a.unit_vector()).collect::<Vec<_>>()) {
            starts.push(matrix_to_params(&h));
        }
    }

    // refinements of each party's own optimum
    for k in 0..n_group {
        if let Ok(dir) = single_party_direction(reduced, n_group, k, target_matrix) {
            let mut dirs = vec![[0.0, 0.0, 1.0]; n_group];
            dirs[k] = dir;
            if let Some(h) = product_generator(&group_dims, &dirs) {
                starts.push(matrix_to_params(&h));
            }
        }
    }

    for m in extra {
        if m.nrows() == dg {
            starts.push(matrix_to_params(m));
        }
    }

    let mut rng = seeded_rng(0x5EED_0003);
    for _ in 0..6 {
        starts.push((0..dg * dg).map(|_| normal(&mut rng)).collect());
    }

    let mut scored: Vec<(f64, Vec<f64>)> = starts
        .into_iter()
        .map(|s| (objective(&s), s))
        .collect();
    scored.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let mut best = scored[0].0;
    let nm = NelderMead {
        max_iter: 260,
        f_tol: 1e-11,
    };
    for (_, s) in scored.iter().take(4) {
        let (_, v) = nm.minimize(objective, s, 0.15);
        if v < best {
            best = v;
        }
    }
    Ok(best)
}

/// Generator whose eigenbasis is the product of spin eigenbases along the
/// given directions, with weights spread so all eigenvalues stay distinct.
fn product_generator(group_dims: &[usize], directions: &[[f64; 3]]) -> Option<CMatrix> {
    let dg: usize = group_dims.iter().product();
    let mut h = CMatrix::zeros(dg, dg);
    let weight_step = 2.0 * group_dims.iter().map(|&d| d as f64).fold(1.0, f64::max) + 1.0;
    let mut weight = 1.0;
    for (k, dir) in directions.iter().enumerate() {
        let mut full = CMatrix::identity(1, 1);
        for (l, &d) in group_dims.iter().enumerate() {
            let factor = if l == k {
                let j = (d as f64 - 1.0) / 2.0;
                spin_matrix(j, *dir).ok()? * re(weight)
            } else {
                CMatrix::identity(d, d)
            };
            full = full.kronecker(&factor);
        }
        h += full;
        weight *= weight_step;
    }
    Some(h)
}

/// Best single-party Bloch direction for one member of the group (qubits
/// only); used to seed the joint optimizer.
fn single_party_direction(
    reduced: &DensityState,
    n_group: usize,
    member: usize,
    target_matrix: &CMatrix,
) -> Result<[f64; 3]> {
    if reduced.party_dims()[member] != 2 || *reduced.party_dims().last().unwrap() != 2 {
        return Err(Error::InvalidArgument("not a qubit member".into()));
    }
    let pair = reduced.partial_trace(&[Party(member), Party(n_group)])?;
    let (_, dir) = fast_qubit_optimum(&pair, target_matrix, &[])?;
    Ok(dir)
}
