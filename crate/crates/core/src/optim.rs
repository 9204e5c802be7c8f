//! Deterministic Nelder-Mead simplex minimisation.

/// Simplex search with reflection 1, expansion 2, contraction 0.5 and shrink 0.5.
#[derive(Debug, Clone)]
pub struct NelderMead {
    /// Edge length of the initial simplex along each coordinate.
    pub initial_step: Vec<f64>,
    /// Absolute value spread at which the search stops.
    pub abs_tolerance: f64,
    /// Spread relative to `|f_best|` at which the search stops.
    pub rel_tolerance: f64,
    /// Stop once every vertex is within this distance of the best one.
    pub x_tolerance: f64,
    pub max_iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl NelderMead {
    pub fn new(initial_step: Vec<f64>) -> Self {
        NelderMead {
            initial_step,
            abs_tolerance: 1e-9,
            rel_tolerance: 0.0,
            x_tolerance: 0.0,
            max_iterations: 500,
        }
    }

    pub fn with_tolerances(mut self, abs: f64, rel: f64) -> Self {
        self.abs_tolerance = abs;
        self.rel_tolerance = rel;
        self
    }

    pub fn with_x_tolerance(mut self, x_tol: f64) -> Self {
        self.x_tolerance = x_tol;
        self
    }

    pub fn with_max_iterations(mut self, n: usize) -> Self {
        self.max_iterations = n;
        self
    }

    /// Minimises `f` starting from `x0`. NaN values are treated as `+inf`.
    pub fn minimize(&self, mut f: impl FnMut(&[f64]) -> f64, x0: &[f64]) -> Minimum {
        let dim = x0.len();
        assert_eq!(
            dim,
            self.initial_step.len(),
            "step/start dimension mismatch"
        );
        let mut eval = |x: &[f64]| {
            let v = f(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };

        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
        simplex.push((x0.to_vec(), eval(x0)));
        for i in 0..dim {
            let mut x = x0.to_vec();
            x[i] += self.initial_step[i];
            let v = eval(&x);
            simplex.push((x, v));
        }

        let mut iterations = 0;
        let mut converged = false;
        while iterations < self.max_iterations {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let best = simplex[0].1;
            let worst = simplex[dim].1;
            let spread = worst - best;
            if spread.is_finite() && spread <= self.abs_tolerance + self.rel_tolerance * best.abs()
            {
                converged = true;
                break;
            }
            if self.x_tolerance > 0.0 {
                let diameter = simplex[1..]
                    .iter()
                    .map(|(x, _)| dist(x, &simplex[0].0))
                    .fold(0.0, f64::max);
                if diameter <= self.x_tolerance {
                    converged = true;
                    break;
                }
            }
            iterations += 1;

            let centroid: Vec<f64> = (0..dim)
                .map(|j| simplex[..dim].iter().map(|(x, _)| x[j]).sum::<f64>() / dim as f64)
                .collect();
            let along = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&simplex[dim].0)
                    .map(|(c, w)| c + t * (c - w))
                    .collect()
            };

            let xr = along(1.0);
            let fr = eval(&xr);
            if fr < simplex[0].1 {
                let xe = along(2.0);
                let fe = eval(&xe);
                simplex[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < simplex[dim - 1].1 {
                simplex[dim] = (xr, fr);
                continue;
            }
            let (xc, fc) = if fr < worst {
                let xc = along(0.5);
                let fc = eval(&xc);
                (xc, fc)
            } else {
                let xc = along(-0.5);
                let fc = eval(&xc);
                (xc, fc)
            };
            if fc < fr.min(worst) {
                simplex[dim] = (xc, fc);
                continue;
            }
            let x_best = simplex[0].0.clone();
            for vertex in simplex.iter_mut().skip(1) {
                let x: Vec<f64> = x_best
                    .iter()
                    .zip(&vertex.0)
                    .map(|(b, v)| b + 0.5 * (v - b))
                    .collect();
                let v = eval(&x);
                *vertex = (x, v);
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (x, value) = simplex.swap_remove(0);
        Minimum {
            x,
            value,
            iterations,
            converged,
        }
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let nm = NelderMead::new(vec![0.5, 0.5])
            .with_tolerances(1e-20, 0.0)
            .with_max_iterations(5000);
        let m = nm.minimize(
            |x| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2),
            &[-1.2, 1.0],
        );
        assert!(m.converged);
        assert!(
            (m.x[0] - 1.0).abs() < 1e-6 && (m.x[1] - 1.0).abs() < 1e-6,
            "{m:?}"
        );
    }

    #[test]
    fn one_dimensional_quadratic() {
        let m = NelderMead::new(vec![0.1])
            .with_tolerances(1e-14, 0.0)
            .minimize(|x| (x[0] - 0.3).powi(2) + 2.0, &[0.0]);
        assert!((m.x[0] - 0.3).abs() < 1e-6);
        assert!((m.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn nan_is_avoided() {
        let m = NelderMead::new(vec![0.5]).minimize(
            |x| {
                if x[0] < 0.0 {
                    f64::NAN
                } else {
                    (x[0] - 1.0).powi(2)
                }
            },
            &[0.5],
        );
        assert!((m.x[0] - 1.0).abs() < 1e-3);
    }

    #[test]
    fn iteration_cap_reports_non_convergence() {
        let m = NelderMead::new(vec![1.0])
            .with_tolerances(0.0, 0.0)
            .with_max_iterations(3)
            .minimize(|x| x[0].abs(), &[10.0]);
        assert!(!m.converged);
        assert_eq!(m.iterations, 3);
    }
}
