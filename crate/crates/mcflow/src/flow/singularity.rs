//! Round-point extraction from a flow tail and parabolic rescaling of a
//! trajectory about its singular space-time point.

use serde::Serialize;

use crate::flow::{MeshTrajectory, StepDiagnostics};
use crate::mesh::TriangleMesh;
use crate::{real, Error, Real, Result, Vec3};

/// Extrapolated singular point and time of a flow shrinking to a round point.
#[derive(Debug, Clone, Serialize)]
pub struct RoundPointEstimate<S: Real = f64> {
    pub point: Vec3<S>,
    pub time: S,
    /// Relative residual of the affine fit to r(t)^2.
    pub fit_residual: S,
    /// Per-sample |r^2 - fit| over the tail window.
    pub residual_history: Vec<S>,
    /// Tail-averaged (max - min)/mean radius anisotropy.
    pub tail_spread: S,
}

/// Tail window: last 20% of the observed lifetime, excluding the final 2%.
fn tail_window<S: Real>(t_end: S) -> (S, S) {
    (t_end * real(0.80), t_end * real(0.98))
}

/// Fit the sphere law r(t)^2 = b (t - T) to the trajectory tail and
/// extrapolate the singular point and time.
///
/// Fails with [`Error::NotShrinkingToPoint`] when r^2 is not asymptotically
/// affine (relative residual above 5%) or the tail is not round (radius
/// spread above 20% of the mean).
pub fn detect_round_point<S: Real>(
    diagnostics: &[StepDiagnostics<S>],
) -> Result<RoundPointEstimate<S>> {
    let t_end = diagnostics
        .last()
        .ok_or(Error::InsufficientStates {
            needed: 5,
            found: 0,
        })?
        .t;
    let (t_lo, t_hi) = tail_window(t_end);
    let tail: Vec<&StepDiagnostics<S>> = diagnostics
        .iter()
        .filter(|d| d.t >= t_lo && d.t <= t_hi)
        .collect();
    if tail.len() < 5 {
        return Err(Error::InsufficientStates {
            needed: 5,
            found: tail.len(),
        });
    }

    // Least-squares affine fit r^2 ~ a + b t.
    let n = real::<S>(tail.len() as f64);
    let mut st = S::zero();
    let mut sy = S::zero();
    let mut stt = S::zero();
    let mut sty = S::zero();
    for d in &tail {
        let y = d.fit_radius * d.fit_radius;
        st += d.t;
        sy += y;
        stt += d.t * d.t;
        sty += d.t * y;
    }
    let denom = n * stt - st * st;
    if denom.abs() <= S::zero() {
        return Err(Error::NotShrinkingToPoint { residual: 1.0 });
    }
    let b = (n * sty - st * sy) / denom;
    let a = (sy - b * st) / n;
    if !(b < S::zero()) {
        return Err(Error::NotShrinkingToPoint { residual: 1.0 });
    }

    let mean_y = sy / n;
    let mut ss_res = S::zero();
    let mut history = Vec::with_capacity(tail.len());
    for d in &tail {
        let y = d.fit_radius * d.fit_radius;
        let e = y - (a + b * d.t);
        ss_res += e * e;
        history.push(e.abs());
    }
    let residual = (ss_res / n).sqrt() / mean_y;
    if residual > real(0.05) {
        return Err(Error::NotShrinkingToPoint {
            residual: residual.to_f64().unwrap_or(f64::NAN),
        });
    }

    // Roundness: the tail must be nearly spherical, not merely affine in r^2.
    let spread = tail
        .iter()
        .map(|d| d.radius_spread / d.fit_radius)
        .sum::<S>()
        / n;
    if spread > real(0.2) {
        return Err(Error::NotShrinkingToPoint {
            residual: spread.to_f64().unwrap_or(f64::NAN),
        });
    }

    let time = -a / b;
    if !(time > t_end) {
        return Err(Error::NotShrinkingToPoint {
            residual: residual.to_f64().unwrap_or(f64::NAN),
        });
    }

    // Affine extrapolation of the center to the singular time.
    let mut point = Vec3::zeros();
    for k in 0..3 {
        let mut sy = S::zero();
        let mut sty = S::zero();
        for d in &tail {
            sy += d.fit_center[k];
            sty += d.t * d.fit_center[k];
        }
        let bc = (n * sty - st * sy) / denom;
        let ac = (sy - bc * st) / n;
        point[k] = ac + bc * time;
    }

    Ok(RoundPointEstimate {
        point,
        time,
        fit_residual: residual,
        residual_history: history,
        tail_spread: spread,
    })
}

/// A trajectory rescaled parabolically about its singular point: states
/// S_hat_t = T^{-1/2} (S_{T(1+t)} - x_hat) with t in [-1, 0).
#[derive(Debug, Clone)]
pub struct RescaledTrajectory<S: Real = f64> {
    pub states: Vec<(S, TriangleMesh<S>)>,
    pub singular_point: Vec3<S>,
    pub singular_time: S,
}

impl<S: Real> RescaledTrajectory<S> {
    /// Unit-scale normalization S'_t = (-t)^{-1/2} S_hat_t; on a flow ending
    /// in a round point these approach the sphere of radius 2.
    pub fn unit_scale_state(&self, index: usize) -> Result<(S, TriangleMesh<S>)> {
        let (t, mesh) = self
            .states
            .get(index)
            .ok_or(Error::InsufficientStates {
                needed: index + 1,
                found: self.states.len(),
            })?;
        let factor = S::one() / (-*t).sqrt();
        Ok((*t, mesh.scaled(factor)?))
    }
}

/// Map every stored state tau of the trajectory to the rescaled state at
/// t = tau / T - 1; no time interpolation is performed.
pub fn rescaled_flow<S: Real>(
    trajectory: &MeshTrajectory<S>,
    round_point: &RoundPointEstimate<S>,
) -> Result<RescaledTrajectory<S>> {
    if round_point.fit_residual > real(0.05) {
        return Err(Error::InvalidParameter(format!(
            "round point fit residual {:?} above 5%",
            round_point.fit_residual.to_f64()
        )));
    }
    let t_sing = round_point.time;
    let scale = S::one() / t_sing.sqrt();
    let mut states = Vec::with_capacity(trajectory.states.len());
    for (tau, mesh) in &trajectory.states {
        if *tau >= t_sing {
            continue;
        }
        let t = *tau / t_sing - S::one();
        let shifted = mesh.map_positions(|p| (p - round_point.point) * scale);
        states.push((t, shifted));
    }
    if states.len() < 2 {
        return Err(Error::InsufficientStates {
            needed: 2,
            found: states.len(),
        });
    }
    Ok(RescaledTrajectory {
        states,
        singular_point: round_point.point,
        singular_time: t_sing,
    })
}
