//! Small dense optimizers: BFGS with backtracking line search (used by the
//! entropy maximizer) and a deterministic compass search (used by the sphere
//! fit).

use nalgebra::{SMatrix, SVector};

use crate::{real, Real};

#[derive(Debug, Clone)]
pub struct BfgsOutcome<S: Real, const N: usize> {
    pub x: SVector<S, N>,
    pub value: S,
    pub grad_norm: S,
    pub converged: bool,
    pub iterations: usize,
}

/// Maximize a smooth function with analytic gradient from `x0`.
///
/// `scales` seeds the initial inverse Hessian diagonal (squared step scales
/// per coordinate). Deterministic: fixed backtracking schedule, no RNG.
pub fn maximize_bfgs<S: Real, const N: usize>(
    f: &mut impl FnMut(&SVector<S, N>) -> (S, SVector<S, N>),
    x0: SVector<S, N>,
    scales: SVector<S, N>,
    grad_tol: S,
    max_iter: usize,
) -> BfgsOutcome<S, N> {
    let mut h = SMatrix::<S, N, N>::zeros();
    for i in 0..N {
        h[(i, i)] = scales[i] * scales[i];
    }
    let mut x = x0;
    let (mut value, mut grad) = f(&x);

    let c1 = real::<S>(1e-4);
    let mut converged = false;
    let mut iterations = 0;

    for it in 0..max_iter {
        iterations = it + 1;
        let gnorm = grad.norm();
        if gnorm <= grad_tol {
            converged = true;
            break;
        }
        // Ascent direction from the inverse Hessian approximation.
        let mut dir = h * grad;
        if dir.dot(&grad) <= S::zero() {
            h = SMatrix::zeros();
            for i in 0..N {
                h[(i, i)] = scales[i] * scales[i];
            }
            dir = h * grad;
        }

        // Backtracking Armijo line search (on the ascent problem).
        let slope = dir.dot(&grad);
        let mut step = S::one();
        let mut accepted = None;
        for _ in 0..40 {
            let x_new = x + dir * step;
            let (v_new, g_new) = f(&x_new);
            if v_new >= value + c1 * step * slope && v_new.is_finite() {
                accepted = Some((x_new, v_new, g_new));
                break;
            }
            step *= real::<S>(0.5);
        }
        let Some((x_new, v_new, g_new)) = accepted else {
            break; // line search failed; report best-so-far unconverged
        };

        let s = x_new - x;
        // Maximizing f is minimizing -f: the curvature pair is (s, -dg).
        let y = grad - g_new;
        let sy = s.dot(&y);
        if sy > real::<S>(1e-12) * s.norm() * y.norm() {
            let rho = S::one() / sy;
            let id = SMatrix::<S, N, N>::identity();
            let left = id - (s * y.transpose()) * rho;
            let right = id - (y * s.transpose()) * rho;
            h = left * h * right + (s * s.transpose()) * rho;
        }

        x = x_new;
        value = v_new;
        grad = g_new;
    }
    let gnorm = grad.norm();
    if gnorm <= grad_tol {
        converged = true;
    }
    BfgsOutcome {
        x,
        value,
        grad_norm: gnorm,
        converged,
        iterations,
    }
}

/// Deterministic compass (coordinate pattern) search minimizing `f`.
///
/// Probes +-step along each axis in order, accepts the best improvement, and
/// halves the steps when no axis improves; stops when every step falls below
/// `min_step` of its initial size or the evaluation budget runs out.
pub fn compass_minimize<S: Real, const N: usize>(
    f: &mut impl FnMut(&SVector<S, N>) -> S,
    x0: SVector<S, N>,
    step0: SVector<S, N>,
    min_step_rel: S,
    max_evals: usize,
) -> (SVector<S, N>, S) {
    let mut x = x0;
    let mut value = f(&x);
    let mut step = step0;
    let mut evals = 1usize;
    loop {
        let mut improved = false;
        let mut best = (x, value);
        for axis in 0..N {
            for sign in [S::one(), -S::one()] {
                if evals >= max_evals {
                    return (best.0, best.1);
                }
                let mut probe = x;
                probe[axis] += sign * step[axis];
                let v = f(&probe);
                evals += 1;
                if v < best.1 {
                    best = (probe, v);
                    improved = true;
                }
            }
        }
        if improved {
            x = best.0;
            value = best.1;
        } else {
            step *= real::<S>(0.5);
            let done = (0..N).all(|i| step[i] < step0[i] * min_step_rel);
            if done {
                return (x, value);
            }
        }
    }
}
