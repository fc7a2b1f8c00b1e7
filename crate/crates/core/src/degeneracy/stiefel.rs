//! Minimizing `max_m g_m(W)` over matrices with orthonormal columns.
//!
//! The max is smoothed by a log-sum-exp with a shrinking temperature; each
//! step is a projected gradient step followed by a QR retraction, so every
//! iterate is exactly feasible. The reported value is the true max.

use nalgebra::DMatrix;

use crate::par;
use crate::rng::{random_stiefel, trial_rng};

/// Values `g_m(W)` and their Euclidean gradients.
pub(crate) type Terms = (Vec<f64>, Vec<DMatrix<f64>>);

#[derive(Debug, Clone)]
pub(crate) struct Run {
    pub value: f64,
    pub w: DMatrix<f64>,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Schedule {
    pub stages: usize,
    pub iters: usize,
    pub tau0: f64,
    pub decay: f64,
}

impl Default for Schedule {
    fn default() -> Self {
        Self { stages: 24, iters: 120, tau0: 0.05, decay: 0.6 }
    }
}

pub(crate) fn retract(w: &DMatrix<f64>) -> DMatrix<f64> {
    let qr = w.clone().qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..w.ncols() {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

fn smooth(values: &[f64], tau: f64) -> (f64, Vec<f64>) {
    let top = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ex: Vec<f64> = values.iter().map(|v| ((v - top) / tau).exp()).collect();
    let s: f64 = ex.iter().sum();
    (top + tau * s.ln(), ex.into_iter().map(|e| e / s).collect())
}

fn max_of(values: &[f64]) -> f64 {
    values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn descend<F>(eval: &F, mut w: DMatrix<f64>, schedule: &Schedule, scale: f64) -> Run
where
    F: Fn(&DMatrix<f64>) -> Terms,
{
    let (vals, _) = eval(&w);
    let mut best = Run { value: max_of(&vals), w: w.clone() };
    let mut tau = schedule.tau0 * scale;
    let mut step = 0.1;
    for _ in 0..schedule.stages {
        for _ in 0..schedule.iters {
            let (vals, grads) = eval(&w);
            let (f, weights) = smooth(&vals, tau);
            let mut g = DMatrix::zeros(w.nrows(), w.ncols());
            for (wt, gr) in weights.iter().zip(&grads) {
                g += gr * *wt;
            }
            let wtg = w.transpose() * &g;
            let sym = (&wtg + wtg.transpose()) * 0.5;
            let xi = &g - &w * sym;
            let norm2 = xi.norm_squared();
            if norm2 < 1e-28 {
                break;
            }
            let mut accepted = false;
            for _ in 0..30 {
                let cand = retract(&(&w - &xi * step));
                let (cv, _) = eval(&cand);
                let (cf, _) = smooth(&cv, tau);
                if cf <= f - 1e-4 * step * norm2 {
                    let m = max_of(&cv);
                    if m < best.value {
                        best = Run { value: m, w: cand.clone() };
                    }
                    w = cand;
                    step *= 1.5;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if !accepted {
                step = step.max(1e-12);
                break;
            }
        }
        tau *= schedule.decay;
    }
    best
}

/// Multi-start minimization of the largest term. Restart `i` starts from
/// a Haar-random point drawn from stream `i` of `seed`; restarts run in
/// parallel and are reported in index order.
pub(crate) fn minimize_max<F>(
    rows: usize,
    cols: usize,
    restarts: usize,
    seed: u64,
    schedule: &Schedule,
    scale: f64,
    eval: F,
) -> Vec<Run>
where
    F: Fn(&DMatrix<f64>) -> Terms + Sync + Send,
{
    par::map_range(restarts, |i| {
        let mut rng = trial_rng(seed, i as u64);
        let w0 = random_stiefel(&mut rng, rows, cols);
        descend(&eval, w0, schedule, scale)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn retraction_is_orthonormal() {
        let mut rng = trial_rng(1, 0);
        let w = random_stiefel(&mut rng, 7, 3) + DMatrix::from_element(7, 3, 0.3);
        let q = retract(&w);
        let err = (q.transpose() * &q - DMatrix::identity(3, 3)).norm();
        assert!(err < 1e-12);
    }

    #[test]
    fn finds_the_minimax_of_a_unit_vector() {
        // minimize max(w_0, -w_0, w_1, -w_1) on the unit circle in R^3:
        // optimum puts w on the third axis, value 0
        let runs = minimize_max(3, 1, 4, 5, &Schedule::default(), 1.0, |w| {
            let mut vals = Vec::new();
            let mut grads = Vec::new();
            for k in 0..2 {
                for s in [1.0, -1.0] {
                    vals.push(s * w[(k, 0)]);
                    let mut g = DMatrix::zeros(3, 1);
                    g[(k, 0)] = s;
                    grads.push(g);
                }
            }
            (vals, grads)
        });
        for r in runs {
            assert!(r.value < 1e-5, "{}", r.value);
        }
    }
}
