//! Derivative-free local minimization (Nelder-Mead) used by the measurement
//! and angle optimizers. Deterministic: no internal randomness.

/// Nelder-Mead settings. Defaults are tuned for the low-dimensional,
/// smooth objectives that appear in measurement optimization.
#[derive(Clone, Debug)]
pub struct NelderMead {
    pub max_iter: usize,
    pub f_tol: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        NelderMead {
            max_iter: 400,
            f_tol: 1e-12,
        }
    }
}

impl NelderMead {
    /// Minimizes `f` starting from `x0` with an initial simplex of the given
    /// edge length. Returns the best point and its value.
    pub fn minimize<F>(&self, f: F, x0: &[f64], step: f64) -> (Vec<f64>, f64)
    where
        F: Fn(&[f64]) -> f64,
    {
        let n = x0.len();
        assert!(n > 0, "empty parameter vector");
        let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);

        let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
        simplex.push(x0.to_vec());
        for i in 0..n {
            let mut p = x0.to_vec();
            p[i] += step;
            simplex.push(p);
        }
        let mut values: Vec<f64> = simplex.iter().map(|p| f(p)).collect();

        for _ in 0..self.max_iter {
            let mut order: Vec<usize> = (0..=n).collect();
            order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
            let best = order[0];
            let worst = order[n];
            let second_worst = order[n - 1];

            if (values[worst] - values[best]).abs() < self.f_tol {
                break;
            }

            // centroid of all but the worst point
            let mut centroid = vec![0.0; n];
            for &idx in order.iter().take(n) {
                for k in 0..n {
                    centroid[k] += simplex[idx][k] / n as f64;
                }
            }

            let reflected: Vec<f64> = (0..n)
                .map(|k| centroid[k] + alpha * (centroid[k] - simplex[worst][k]))
                .collect();
            let f_r = f(&reflected);

            if f_r < values[best] {
                let expanded: Vec<f64> = (0..n)
                    .map(|k| centroid[k] + gamma * (reflected[k] - centroid[k]))
                    .collect();
                let f_e = f(&expanded);
                if f_e < f_r {
                    simplex[worst] = expanded;
                    values[worst] = f_e;
                } else {
                    simplex[worst] = reflected;
                    values[worst] = f_r;
                }
            } else if f_r < values[second_worst] {
                simplex[worst] = reflected;
                values[worst] = f_r;
            } else {
                let contracted: Vec<f64> = (0..n)
                    .map(|k| centroid[k] + rho * (simplex[worst][k] - centroid[k]))
                    .collect();
                let f_c = f(&contracted);
                if f_c < values[worst] {
                    simplex[worst] = contracted;
                    values[worst] = f_c;
                } else {
                    // shrink toward the best point
                    let best_point = simplex[best].clone();
                    for idx in 0..=n {
                        if idx == best {
                            continue;
                        }
                        for k in 0..n {
                            simplex[idx][k] =
                                best_point[k] + sigma * (simplex[idx][k] - best_point[k]);
                        }
                        values[idx] = f(&simplex[idx]);
                    }
                }
            }
        }

        let mut best_idx = 0;
        for i in 1..=n {
            if values[i] < values[best_idx] {
                best_idx = i;
            }
        }
        (simplex[best_idx].clone(), values[best_idx])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_quadratic() {
        let nm = NelderMead::default();
        let f = |x: &[f64]| (x[0] - 1.5).powi(2) + 3.0 * (x[1] + 0.5).powi(2);
        let (x, v) = nm.minimize(f, &[0.0, 0.0], 0.5);
        assert!(v < 1e-10);
        assert!((x[0] - 1.5).abs() < 1e-5);
        assert!((x[1] + 0.5).abs() < 1e-5);
    }

    #[test]
    fn minimizes_rosenbrock_close_enough() {
        let nm = NelderMead {
            max_iter: 4000,
            f_tol: 1e-14,
        };
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let (_, v) = nm.minimize(f, &[-1.2, 1.0], 0.5);
        assert!(v < 1e-6, "rosenbrock value {v}");
    }
}
