//! Damped Gauss–Newton (Levenberg–Marquardt) for small dense problems.

use nalgebra::{DMatrix, DVector};

pub(crate) const MAX_ITERATIONS: usize = 200;
pub(crate) const STEP_TOLERANCE: f64 = 1e-10;

/// A least-squares problem with an analytic Jacobian.
pub(crate) trait Problem {
    fn residuals(&self, params: &DVector<f64>) -> DVector<f64>;
    /// Rows are observations, columns are parameters.
    fn jacobian(&self, params: &DVector<f64>) -> DMatrix<f64>;
}

#[derive(Debug, Clone)]
pub(crate) struct Outcome {
    pub params: DVector<f64>,
    pub rss: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Residual sum of squares after the start and after every accepted step.
    pub history: Vec<f64>,
}

fn rss_of(r: &DVector<f64>) -> f64 {
    r.norm_squared()
}

pub(crate) fn minimize<P: Problem>(problem: &P, start: DVector<f64>) -> Outcome {
    let mut x = start;
    let mut r = problem.residuals(&x);
    let mut rss = rss_of(&r);
    let mut history = vec![rss];
    let mut lambda = 1e-3;
    let mut converged = false;
    let mut iterations = 0;

    if !rss.is_finite() {
        return Outcome {
            params: x,
            rss,
            converged: false,
            iterations,
            history,
        };
    }

    while iterations < MAX_ITERATIONS {
        iterations += 1;
        if rss == 0.0 {
            converged = true;
            break;
        }
        let j = problem.jacobian(&x);
        let jtj = j.transpose() * &j;
        let grad = j.transpose() * &r;

        // Marquardt scaling; flat directions fall back to unit damping.
        let mut damped = jtj.clone();
        for i in 0..damped.nrows() {
            let d = jtj[(i, i)];
            damped[(i, i)] += lambda * if d > 0.0 { d } else { 1.0 };
        }
        let step = match damped.clone().cholesky() {
            Some(ch) => ch.solve(&(-&grad)),
            None => match damped.lu().solve(&(-&grad)) {
                Some(s) => s,
                None => {
                    lambda *= 10.0;
                    continue;
                }
            },
        };

        if step.norm() <= STEP_TOLERANCE * (x.norm() + STEP_TOLERANCE) {
            converged = true;
            break;
        }

        let trial = &x + &step;
        let r_trial = problem.residuals(&trial);
        let rss_trial = rss_of(&r_trial);
        if rss_trial.is_finite() && rss_trial < rss {
            x = trial;
            r = r_trial;
            rss = rss_trial;
            history.push(rss);
            lambda = (lambda / 3.0).max(1e-15);
        } else {
            lambda *= 4.0;
            if lambda > 1e16 {
                // No descent direction left at this precision.
                converged = grad.norm() <= 1e-8 * (1.0 + rss.sqrt());
                break;
            }
        }
    }

    Outcome {
        params: x,
        rss,
        converged,
        iterations,
        history,
    }
}
