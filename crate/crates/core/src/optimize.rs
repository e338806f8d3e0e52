//! Derivative-free local search primitives: multi-start projected ascent on a
//! unit sphere, and compass (pattern) search over flat parameter vectors.

use crate::rng::stream_rng;
use crate::scalar::{from_real_params, real_dim, to_real_params, Scalar};
use crate::spaces::SpaceDescriptor;
use rand::Rng;
use rand_distr::StandardNormal;

/// Configuration for the multi-start sphere ascent.
#[derive(Clone, Debug)]
pub struct AscentConfig {
    /// Total number of starts; canonical basis directions (and their
    /// negatives) are used first, then seeded random starts.
    pub starts: usize,
    pub max_iters: usize,
    pub seed: u64,
    /// Extra deterministic starting points (coordinate vectors on S_X), e.g.
    /// extreme points of a polyhedral ball.
    pub extra_starts: Vec<Vec<Scalar>>,
    /// Stop when the iterate moves less than this.
    pub step_tol: f64,
    /// Stop when the value improves less than this.
    pub improve_tol: f64,
}

impl Default for AscentConfig {
    fn default() -> Self {
        AscentConfig {
            starts: 64,
            max_iters: 200,
            seed: 0,
            extra_starts: Vec::new(),
            step_tol: 1e-10,
            improve_tol: 1e-12,
        }
    }
}

/// Outcome of a multi-start ascent: best point on S_X, its value, and the
/// number of objective evaluations spent.
pub struct AscentOutcome {
    pub x: Vec<Scalar>,
    pub value: f64,
    pub evaluations: usize,
}

fn normalize(space: &SpaceDescriptor, p: &mut [f64]) -> bool {
    let coords = from_real_params(space.field(), p);
    let n = space.norm_unchecked(&coords);
    if n <= 1e-12 {
        return false;
    }
    for v in p.iter_mut() {
        *v /= n;
    }
    true
}

/// Maximize `objective` over S_X by projected (normalized) ascent along a
/// finite-difference gradient with backtracking, from many starts, followed by
/// a coordinate polish around the best point. The returned value is always a
/// certified lower bound: it is the objective evaluated at a feasible point.
pub fn ascend_on_sphere<F>(
    space: &SpaceDescriptor,
    objective: F,
    cfg: &AscentConfig,
) -> AscentOutcome
where
    F: Fn(&[Scalar]) -> f64,
{
    let field = space.field();
    let n = real_dim(field, space.dim());
    let mut evals = 0usize;
    let eval = |p: &[f64], evals: &mut usize| -> f64 {
        *evals += 1;
        objective(&from_real_params(field, p))
    };

    // assemble starts: basis directions, extra deterministic points, random
    let mut starts: Vec<Vec<f64>> = Vec::new();
    for j in 0..n {
        for s in [1.0, -1.0] {
            let mut p = vec![0.0; n];
            p[j] = s;
            if normalize(space, &mut p) {
                starts.push(p);
            }
        }
    }
    for x in &cfg.extra_starts {
        starts.push(to_real_params(field, x));
    }
    let mut stream = 0u64;
    while starts.len() < cfg.starts.max(2 * n) {
        let mut rng = stream_rng(cfg.seed, stream);
        stream += 1;
        let mut p: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        if normalize(space, &mut p) {
            starts.push(p);
        }
    }

    let mut best_p: Vec<f64> = starts[0].clone();
    let mut best_v = f64::NEG_INFINITY;

    for start in starts {
        let mut p = start;
        let mut v = eval(&p, &mut evals);
        for _ in 0..cfg.max_iters {
            // finite-difference gradient in the real parametrization
            let h = 1e-6;
            let mut g = vec![0.0; n];
            for j in 0..n {
                let mut pp = p.clone();
                pp[j] += h;
                let mut pm = p.clone();
                pm[j] -= h;
                g[j] = (eval(&pp, &mut evals) - eval(&pm, &mut evals)) / (2.0 * h);
            }
            let gn = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            if gn < 1e-14 {
                break;
            }
            for gj in &mut g {
                *gj /= gn;
            }
            // backtracking along the normalized ascent direction
            let mut step = 0.5;
            let mut moved = false;
            while step >= cfg.step_tol {
                let mut cand: Vec<f64> = p.iter().zip(&g).map(|(a, b)| a + step * b).collect();
                if normalize(space, &mut cand) {
                    let cv = eval(&cand, &mut evals);
                    if cv > v + cfg.improve_tol {
                        let shift: f64 = cand
                            .iter()
                            .zip(&p)
                            .map(|(a, b)| (a - b) * (a - b))
                            .sum::<f64>()
                            .sqrt();
                        p = cand;
                        v = cv;
                        moved = shift >= cfg.step_tol;
                        break;
                    }
                }
                step *= 0.5;
            }
            if !moved {
                break;
            }
        }
        if v > best_v {
            best_v = v;
            best_p = p;
        }
    }

    // local coordinate polish around the best point
    let mut delta = 1e-2;
    while delta >= 1e-9 {
        let mut improved = true;
        while improved {
            improved = false;
            for j in 0..n {
                for s in [1.0, -1.0] {
                    let mut cand = best_p.clone();
                    cand[j] += s * delta;
                    if normalize(space, &mut cand) {
                        let cv = eval(&cand, &mut evals);
                        if cv > best_v + 1e-15 {
                            best_v = cv;
                            best_p = cand;
                            improved = true;
                        }
                    }
                }
            }
        }
        delta *= 0.1;
    }

    AscentOutcome { x: from_real_params(field, &best_p), value: best_v, evaluations: evals }
}

/// Result of a compass search minimization.
pub struct CompassOutcome {
    pub params: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub budget_exhausted: bool,
}

/// Minimize `objective` by compass (coordinate pattern) search with shrinking
/// step, spending at most `budget` evaluations. `objective` may return None
/// for infeasible points (they are rejected).
pub fn compass_minimize<F>(
    start: Vec<f64>,
    mut budget: usize,
    objective: F,
) -> CompassOutcome
where
    F: Fn(&[f64]) -> Option<f64>,
{
    let n = start.len();
    let mut evals = 0usize;
    let mut p = start;
    let mut v = match objective(&p) {
        Some(v) => {
            evals += 1;
            v
        }
        None => {
            return CompassOutcome { params: p, value: f64::INFINITY, evaluations: 1, budget_exhausted: false }
        }
    };
    budget = budget.saturating_sub(1);
    let mut step = 0.25;
    let mut exhausted = false;
    while step >= 1e-7 {
        let mut improved = false;
        'sweep: for j in 0..n {
            for s in [1.0, -1.0] {
                if budget == 0 {
                    exhausted = true;
                    break 'sweep;
                }
                let mut cand = p.clone();
                cand[j] += s * step;
                budget -= 1;
                evals += 1;
                if let Some(cv) = objective(&cand) {
                    if cv < v - 1e-15 {
                        p = cand;
                        v = cv;
                        improved = true;
                    }
                }
            }
        }
        if exhausted {
            break;
        }
        if !improved {
            step *= 0.5;
        }
    }
    CompassOutcome { params: p, value: v, evaluations: evals, budget_exhausted: exhausted }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;

    #[test]
    fn ascent_finds_sphere_maximum_of_linear_functional() {
        // max of x_0 + 2 x_1 over the euclidean sphere is sqrt(5)
        let s = SpaceDescriptor::l2(2, Field::Real);
        let out = ascend_on_sphere(
            &s,
            |x| x[0].re + 2.0 * x[1].re,
            &AscentConfig { starts: 8, ..Default::default() },
        );
        assert!((out.value - 5f64.sqrt()).abs() < 1e-8, "{}", out.value);
    }

    #[test]
    fn ascent_on_linf_reaches_the_corner() {
         // max of x_0 + x_1 over the linf square is 2, at the corner (1,1)
        let s = SpaceDescriptor::linf(2, Field::Real);
        let out = ascend_on_sphere(
            &s,
            |x| x[0].re + x[1].re,
            &AscentConfig { starts: 8, ..Default::default() },
        );
        assert!((out.value - 2.0).abs() < 1e-7, "{}", out.value);
    }

    #[test]
    fn compass_minimizes_quadratic() {
        let out = compass_minimize(vec![1.0, -2.0], 100_000, |p| {
            Some((p[0] - 0.5).powi(2) + (p[1] + 1.5).powi(2))
        });
        assert!(out.value < 1e-10);
        assert!(!out.budget_exhausted);
    }
}
