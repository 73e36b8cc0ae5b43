//! Empirical monitors along flows: the curvature-times-parabolic-radius
//! product, the Hausdorff displacement speed bound, and the evolution
//! identity for 2tH + x.n on axisymmetric flows.

use serde::Serialize;

use crate::flow::{detect_round_point, AxisymTrajectory, MeshTrajectory};
use crate::metrics::TriangleBvh;
use crate::shrinker::lambda_reference;
use crate::{real, Error, Real, Result};

/// One row of the curvature monitor.
#[derive(Debug, Clone, Serialize)]
pub struct CurvatureMonitorRow<S: Real = f64> {
    pub t: S,
    pub max_abs_a: S,
    /// Admissible parabolic radius min(sqrt t, sqrt(T - t)).
    pub radius: S,
    pub product: S,
}

/// Report of sup |A| * r over a flow.
#[derive(Debug, Clone, Serialize)]
pub struct CurvatureMonitorReport<S: Real = f64> {
    /// The inverse-radius curvature bound is only claimed for flows whose
    /// entropy stays below the cylinder value.
    pub applicable: bool,
    pub entropy_value: S,
    pub singular_time: S,
    pub sup_product: S,
    pub rows: Vec<CurvatureMonitorRow<S>>,
}

/// Evaluate sup over the trajectory of |A| times the admissible parabolic
/// radius r(t) = min(sqrt t, sqrt(T - t)), where T is the extrapolated
/// singular time (the last time when no round point is detected).
pub fn curvature_monitor<S: Real>(
    trajectory: &MeshTrajectory<S>,
    entropy_value: S,
) -> CurvatureMonitorReport<S> {
    let t_end = trajectory.final_time();
    let singular_time = detect_round_point(&trajectory.diagnostics)
        .map(|rp| rp.time)
        .unwrap_or(t_end);
    let mut rows = Vec::with_capacity(trajectory.diagnostics.len());
    let mut sup = S::zero();
    // The final 2% of the lifetime is excluded from the sup: past it the
    // grid no longer resolves the curvature (same window the round-point
    // fit excludes).
    let sup_cutoff = singular_time * real(0.98);
    for d in &trajectory.diagnostics {
        let remaining = (singular_time - d.t).max(S::zero());
        let radius = d.t.sqrt().min(remaining.sqrt());
        let product = d.max_abs_a * radius;
        if d.t <= sup_cutoff {
            sup = sup.max(product);
        }
        rows.push(CurvatureMonitorRow {
            t: d.t,
            max_abs_a: d.max_abs_a,
            radius,
            product,
        });
    }
    let lambda_1: S = lambda_reference(1).expect("lambda_1 closed form");
    CurvatureMonitorReport {
        applicable: entropy_value < lambda_1,
        entropy_value,
        singular_time,
        sup_product: sup,
        rows,
    }
}

/// One row of the speed monitor.
#[derive(Debug, Clone, Serialize)]
pub struct SpeedMonitorRow<S: Real = f64> {
    pub t: S,
    pub dist: S,
    /// sqrt(t) on the first half of the lifetime, sqrt(2T) - sqrt(T - t)
    /// beyond it.
    pub bound_shape: S,
    pub ratio: S,
    pub late_branch: bool,
}

/// Report of the minimal constant L with dist_H(S_0, S_t) <= L * shape(t).
#[derive(Debug, Clone, Serialize)]
pub struct SpeedMonitorReport<S: Real = f64> {
    pub applicable: bool,
    pub entropy_value: S,
    pub singular_time: S,
    pub min_l: S,
    pub rows: Vec<SpeedMonitorRow<S>>,
}

/// Hausdorff displacement of each stored state from the initial surface,
/// against the two-branch square-root bound shape.
///
/// Distances are vertex-sampled (the displacement scale dwarfs the sampling
/// bound along a shrinking flow); the initial surface's spatial index is
/// built once and shared across states.
pub fn speed_monitor<S: Real>(
    trajectory: &MeshTrajectory<S>,
    entropy_value: S,
) -> Result<SpeedMonitorReport<S>> {
    let t_end = trajectory.final_time();
    let singular_time = detect_round_point(&trajectory.diagnostics)
        .map(|rp| rp.time)
        .unwrap_or(t_end);
    let (_, initial) = trajectory
        .states
        .first()
        .ok_or(Error::InsufficientStates {
            needed: 2,
            found: 0,
        })?;
    let bvh_initial = TriangleBvh::from_mesh(initial);
    let mut rows = Vec::new();
    let mut min_l = S::zero();
    let half = singular_time * real::<S>(0.5);
    for (t, mesh) in trajectory.states.iter().skip(1) {
        let bvh_state = TriangleBvh::from_mesh(mesh);
        let mut sup2 = S::zero();
        for v in mesh.vertices() {
            sup2 = sup2.max(bvh_initial.distance_squared(v));
        }
        for v in initial.vertices() {
            sup2 = sup2.max(bvh_state.distance_squared(v));
        }
        let dist = sup2.sqrt();
        let late = *t > half;
        let shape = if late {
            (real::<S>(2.0) * singular_time).sqrt() - (singular_time - *t).max(S::zero()).sqrt()
        } else {
            t.sqrt()
        };
        if !(shape > S::zero()) {
            continue;
        }
        let ratio = dist / shape;
        min_l = min_l.max(ratio);
        rows.push(SpeedMonitorRow {
            t: *t,
            dist,
            bound_shape: shape,
            ratio,
            late_branch: late,
        });
    }
    let lambda_1: S = lambda_reference(1).expect("lambda_1 closed form");
    Ok(SpeedMonitorReport {
        applicable: entropy_value < lambda_1,
        entropy_value,
        singular_time,
        min_l,
        rows,
    })
}

/// Maximum residual of d(phi)/dt = Lap phi + |A|^2 phi over the material
/// windows of an axisymmetric trajectory, with phi = 2tH + x.n.
///
/// The time derivative is a central difference across each window (material
/// samples, no resampling in between); a few samples next to the caps are
/// excluded from the maximum.
pub fn smoczyk_check<S: Real>(trajectory: &AxisymTrajectory<S>) -> Result<S> {
    let mut max_residual = S::zero();
    let mut windows_used = 0usize;
    for window in &trajectory.material_windows {
        if window.len() < 3 {
            continue;
        }
        let (t0, p0) = &window[0];
        let (t1, p1) = &window[1];
        let (t2, p2) = &window[2];
        if p0.len() != p1.len() || p1.len() != p2.len() {
            continue;
        }
        let phi0 = p0.phi(*t0);
        let phi1 = p1.phi(*t1);
        let phi2 = p2.phi(*t2);
        let lap = p1.surface_laplacian(&phi1);
        let d1 = p1.differentials();
        let dt_total = *t2 - *t0;
        if !(dt_total > S::zero()) {
            continue;
        }
        windows_used += 1;
        let n = p1.len();
        // Exclude a fixed geometric band at the caps: the rotational
        // curvature amplifies O(h^2) noise by 1/r there and the Laplacian
        // would amplify it again.
        let r_max = p1
            .samples()
            .iter()
            .map(|p| p.y)
            .fold(S::zero(), |a, b| a.max(b));
        let band = r_max * real(0.15);
        for i in 2..n.saturating_sub(2) {
            if p1.samples()[i].y < band {
                continue;
            }
            let dphi_dt = (phi2[i] - phi0[i]) / dt_total;
            let a2 = d1.second_fundamental_norm[i] * d1.second_fundamental_norm[i];
            let rhs = lap[i] + a2 * phi1[i];
            max_residual = max_residual.max((dphi_dt - rhs).abs());
        }
    }
    if windows_used == 0 {
        return Err(Error::InsufficientStates {
            needed: 3,
            found: 0,
        });
    }
    Ok(max_residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{mcf_evolve_axisym, FlowOptions};
    use crate::mesh::generate::{profile, ShapeSpec};
    use crate::Vec3;

    #[test]
    fn applicability_gate_follows_entropy_value() {
        // Synthetic gate check against the closed-form cylinder entropy.
        let lambda_1: f64 = lambda_reference(1).unwrap();
        let traj = tiny_sphere_trajectory();
        let below = curvature_monitor(&traj, lambda_1 - 0.05);
        assert!(below.applicable);
        let above = curvature_monitor(&traj, lambda_1 + 0.05);
        assert!(!above.applicable);
    }

    fn tiny_sphere_trajectory() -> crate::flow::MeshTrajectory<f64> {
        let mesh = crate::mesh::generate::generate(&ShapeSpec::Sphere {
            radius: 2.0,
            center: Vec3::zeros(),
            level: 2,
        })
        .unwrap();
        crate::flow::mcf_evolve(
            &mesh,
            &FlowOptions {
                horizon: Some(0.05),
                ..Default::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn smoczyk_residual_vanishes_on_the_shrinking_sphere() {
        // phi = 0 identically on the self-similar flow, so both sides are
        // discretization noise.
        let p: crate::flow::AxisymProfile<f64> = profile(&ShapeSpec::Sphere {
            radius: 2.0,
            center: Vec3::zeros(),
            level: 6,
        })
        .unwrap();
        // Shift time so the trajectory's own t matches the self-similar
        // parameterization: start the flow at t=0 from radius 2 and check phi
        // against t - 1 (radius(t) = sqrt(4 - 4t) = sqrt(-4 (t-1))).
        let opts = FlowOptions {
            horizon: Some(0.3),
            material_windows: true,
            ..Default::default()
        };
        let traj = mcf_evolve_axisym(&p, &opts).unwrap();
        assert!(!traj.material_windows.is_empty());
        // Evaluate phi with the shrinker time offset by hand.
        for window in &traj.material_windows {
            let (t, prof) = &window[1];
            let phis = prof.phi(*t - 1.0);
            let r_max = prof.samples().iter().map(|p| p.y).fold(0.0f64, f64::max);
            let max_phi = prof
                .samples()
                .iter()
                .zip(&phis)
                .filter(|(p, _)| p.y > 0.15 * r_max)
                .fold(0.0f64, |m, (_, v)| m.max(v.abs()));
            assert!(max_phi < 0.02, "max |phi| = {max_phi}");
        }
        // The identity residual itself is small (phi is smooth and tiny).
        let res = smoczyk_check(&traj).unwrap();
        assert!(res < 0.5, "residual {res}");
    }
}
