//! Mean curvature flow drivers: adaptive time stepping, stored-state
//! trajectories with per-step diagnostics, round-point detection, parabolic
//! rescaling, and the curvature/speed/identity monitors.

pub mod axisym;
pub mod mesh_step;
pub mod monitors;
pub mod singularity;

pub use axisym::{mcf_step_axisym, AxisymProfile, AxisymStepOptions, ProfileTopology};
pub use mesh_step::{mcf_step_mesh, remesh_uniform, MeshStepOptions, RemeshPolicy};
pub use monitors::{curvature_monitor, smoczyk_check, speed_monitor};
pub use singularity::{detect_round_point, rescaled_flow, RescaledTrajectory, RoundPointEstimate};

use serde::Serialize;

use crate::mesh::ops::{mixed_vertex_areas, second_fundamental_norm};
use crate::mesh::TriangleMesh;
use crate::{real, Error, Real, Result, Vec3};

/// Why an evolution stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StopReason {
    HorizonReached,
    CurvatureBlowup,
    MeshDegeneracy,
    RoundPointExtracted,
}

/// Per accepted step diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct StepDiagnostics<S: Real = f64> {
    pub t: S,
    pub dt: S,
    pub area: S,
    pub max_abs_a: S,
    pub min_edge: S,
    /// Best-sphere summary of the state: center, area-weighted mean radius,
    /// and (max - min) radius spread.
    pub fit_center: Vec3<S>,
    pub fit_radius: S,
    pub radius_spread: S,
}

/// Time-indexed sequence of flow states with diagnostics.
#[derive(Debug, Clone)]
pub struct FlowTrajectory<St, S: Real = f64> {
    /// Stored states (decimated along area milestones; first and last kept).
    pub states: Vec<(S, St)>,
    /// One row per accepted step.
    pub diagnostics: Vec<StepDiagnostics<S>>,
    pub reason: StopReason,
    pub detail: String,
    pub initial_area: S,
    pub initial_diameter: S,
    /// Windows of consecutive raw states (equal dt, same sampling) for
    /// material-derivative checks.
    pub material_windows: Vec<Vec<(S, St)>>,
}

pub type MeshTrajectory<S = f64> = FlowTrajectory<TriangleMesh<S>, S>;
pub type AxisymTrajectory<S = f64> = FlowTrajectory<AxisymProfile<S>, S>;

impl<St, S: Real> FlowTrajectory<St, S> {
    pub fn final_time(&self) -> S {
        self.diagnostics.last().map(|d| d.t).unwrap_or(S::zero())
    }
}

/// Options shared by the mesh and profile drivers.
#[derive(Debug, Clone)]
pub struct FlowOptions<S: Real = f64> {
    /// Stop once t reaches this value (None: run to a singular stop).
    pub horizon: Option<S>,
    pub max_steps: usize,
    /// dt <= stability_factor * min_edge^2 (mesh driver).
    pub stability_factor: S,
    /// dt <= (curvature_cap / max|A|)^2.
    pub curvature_cap: S,
    /// Stop when area falls below this fraction of the initial area.
    pub area_stop_ratio: S,
    /// Stop when the minimum edge falls below this fraction of the initial
    /// diameter.
    pub min_edge_stop_ratio: S,
    /// Stop when max|A| * min_edge exceeds this (curvature outruns the grid).
    pub blowup_product: S,
    /// Keep a state every time the area drops by this factor.
    pub store_area_ratio: S,
    pub tangential_relaxation: bool,
    pub remesh: Option<RemeshPolicy<S>>,
    /// Record a 3-step material window after every stored state (axisym).
    pub material_windows: bool,
    /// Richardson extrapolation in time (axisym only).
    pub richardson: bool,
    /// Extra accuracy factor shrinking dt below the stability caps.
    pub accuracy_factor: S,
}

impl<S: Real> Default for FlowOptions<S> {
    fn default() -> Self {
        FlowOptions {
            horizon: None,
            max_steps: 2_000_000,
            stability_factor: real(0.5),
            curvature_cap: real(0.05),
            area_stop_ratio: real(1e-4),
            min_edge_stop_ratio: real(1e-4),
            blowup_product: real(2.0),
            store_area_ratio: real(11.0 / 12.0),
            tangential_relaxation: false,
            remesh: None,
            material_windows: false,
            richardson: true,
            accuracy_factor: real(1.0),
        }
    }
}

fn mesh_diagnostics<S: Real>(
    mesh: &TriangleMesh<S>,
    t: S,
    dt: S,
    max_abs_a: Option<S>,
) -> Result<StepDiagnostics<S>> {
    let area = mesh.total_area();
    let max_abs_a = match max_abs_a {
        Some(v) => v,
        None => {
            let a = second_fundamental_norm(mesh)?;
            a.values.iter().fold(S::zero(), |m, v| m.max(v.abs()))
        }
    };
    let min_edge = mesh.min_edge_length();
    // Area-weighted vertex centroid and radius stats.
    let weights = mixed_vertex_areas(mesh);
    let mut c = Vec3::zeros();
    let mut w_total = S::zero();
    for (v, &w) in weights.iter().enumerate() {
        c += mesh.position(v) * w;
        w_total += w;
    }
    c /= w_total;
    let mut mean_r = S::zero();
    let mut min_r = S::max_value().unwrap();
    let mut max_r = S::zero();
    for (v, &w) in weights.iter().enumerate() {
        let r = (mesh.position(v) - c).norm();
        mean_r += r * w;
        min_r = min_r.min(r);
        max_r = max_r.max(r);
    }
    mean_r /= w_total;
    Ok(StepDiagnostics {
        t,
        dt,
        area,
        max_abs_a,
        min_edge,
        fit_center: c,
        fit_radius: mean_r,
        radius_spread: max_r - min_r,
    })
}

fn axisym_diagnostics<S: Real>(
    profile: &AxisymProfile<S>,
    t: S,
    dt: S,
) -> StepDiagnostics<S> {
    let d = profile.differentials();
    let max_abs_a = d
        .second_fundamental_norm
        .iter()
        .fold(S::zero(), |m, v| m.max(v.abs()));
    let (z_bar, mean_r, min_r, max_r) = profile.sphere_fit_stats();
    StepDiagnostics {
        t,
        dt,
        area: profile.area(),
        max_abs_a,
        min_edge: profile.min_spacing(),
        fit_center: Vec3::new(S::zero(), S::zero(), z_bar),
        fit_radius: mean_r,
        radius_spread: max_r - min_r,
    }
}

/// Evolve a mesh by mean curvature flow until a stopping condition fires.
pub fn mcf_evolve<S: Real>(
    initial: &TriangleMesh<S>,
    opts: &FlowOptions<S>,
) -> Result<MeshTrajectory<S>> {
    let initial_area = initial.total_area();
    let initial_diameter = initial.diameter();
    let step_opts = MeshStepOptions {
        stability_factor: opts.stability_factor,
        tangential_relaxation: opts.tangential_relaxation,
        ..Default::default()
    };

    let mut mesh = initial.clone();
    let mut t = S::zero();
    let mut states: Vec<(S, TriangleMesh<S>)> = vec![(t, mesh.clone())];
    let mut diagnostics: Vec<StepDiagnostics<S>> = Vec::new();
    let mut next_store_area = initial_area * opts.store_area_ratio;
    let initial_max_a = {
        let d = mesh_diagnostics(&mesh, t, S::zero(), None)?;
        d.max_abs_a
    };

    let mut reason = StopReason::HorizonReached;
    let mut detail = String::new();
    let mut pending_round_classification = false;
    // The quadric |A| estimate is the most expensive per-step quantity and
    // drifts slowly; refresh it every few steps.
    let mut cached_max_a = initial_max_a;
    let mut max_a_age = 0usize;

    for step in 0..opts.max_steps {
        let refresh = max_a_age == 0;
        let diag = mesh_diagnostics(
            &mesh,
            t,
            S::zero(),
            if refresh { None } else { Some(cached_max_a) },
        )?;
        if refresh {
            cached_max_a = diag.max_abs_a;
            max_a_age = 4;
        }
        max_a_age -= 1;
        if diag.area < opts.area_stop_ratio * initial_area {
            diagnostics.push(diag);
            pending_round_classification = true;
            detail = "area fell below the stop ratio".into();
            break;
        }
        if diag.min_edge < opts.min_edge_stop_ratio * initial_diameter {
            diagnostics.push(diag);
            reason = StopReason::CurvatureBlowup;
            detail = "minimum edge fell below the resolution floor".into();
            break;
        }
        if diag.max_abs_a * diag.min_edge > opts.blowup_product {
            let product = (diag.max_abs_a * diag.min_edge).to_f64().unwrap_or(f64::NAN);
            diagnostics.push(diag);
            reason = StopReason::CurvatureBlowup;
            detail = format!("max|A| * min_edge = {product:.3} exceeded the blowup product");
            break;
        }
        if let Some(h) = opts.horizon {
            if t >= h {
                diagnostics.push(diag);
                reason = StopReason::HorizonReached;
                break;
            }
        }
        if step + 1 == opts.max_steps {
            diagnostics.push(diag);
            reason = StopReason::HorizonReached;
            detail = "step budget exhausted".into();
            break;
        }

        let mut dt = opts.stability_factor * diag.min_edge * diag.min_edge;
        if diag.max_abs_a > S::zero() {
            let curv_dt = (opts.curvature_cap / diag.max_abs_a).powi(2);
            dt = dt.min(curv_dt);
        }
        dt *= opts.accuracy_factor;
        if let Some(h) = opts.horizon {
            dt = dt.min(h - t);
        }

        let stepped = match mesh_step_maybe_richardson(&mesh, dt, &step_opts, opts.richardson) {
            Ok(m) => m,
            Err(Error::QualityCollapse { min_angle_deg }) => {
                if let Some(policy) = &opts.remesh {
                    let remeshed = remesh_uniform(&mesh, policy)?;
                    match mcf_step_mesh(&remeshed, dt, &step_opts) {
                        Ok(m) => m,
                        Err(_) => {
                            let max_a = diag.max_abs_a;
                            diagnostics.push(diag);
                            reason = classify_quality_stop(initial_max_a, max_a);
                            detail =
                                format!("quality collapse at min angle {min_angle_deg:.2} deg");
                            break;
                        }
                    }
                } else {
                    let max_a = diag.max_abs_a;
                    diagnostics.push(diag);
                    reason = classify_quality_stop(initial_max_a, max_a);
                    detail = format!("quality collapse at min angle {min_angle_deg:.2} deg");
                    break;
                }
            }
            Err(e) => return Err(e),
        };

        let new_area = stepped.total_area();
        if new_area > diag.area * (S::one() + real(1e-8)) {
            diagnostics.push(diag);
            reason = StopReason::MeshDegeneracy;
            detail = "surface area increased across a step".into();
            break;
        }

        t += dt;
        mesh = stepped;
        let refresh = max_a_age == 0;
        let mut accepted = mesh_diagnostics(
            &mesh,
            t,
            dt,
            if refresh { None } else { Some(cached_max_a) },
        )?;
        if refresh {
            cached_max_a = accepted.max_abs_a;
            max_a_age = 4;
        } else {
            max_a_age -= 1;
        }
        accepted.dt = dt;
        diagnostics.push(accepted);

        if new_area <= next_store_area {
            states.push((t, mesh.clone()));
            while next_store_area >= new_area {
                next_store_area *= opts.store_area_ratio;
            }
        }
    }

    if states.last().map(|(st, _)| *st != t).unwrap_or(true) {
        states.push((t, mesh.clone()));
    }

    // Any singular stop on a nearly-vanished surface is a candidate round
    // point; the tail fit decides.
    if matches!(reason, StopReason::CurvatureBlowup | StopReason::MeshDegeneracy) {
        if let Some(last) = diagnostics.last() {
            if last.area < real::<S>(5e-2) * initial_area {
                pending_round_classification = true;
            }
        }
    }
    let mut traj = FlowTrajectory {
        states,
        diagnostics,
        reason,
        detail,
        initial_area,
        initial_diameter,
        material_windows: Vec::new(),
    };
    if pending_round_classification {
        match detect_round_point(&traj.diagnostics) {
            Ok(_) => {
                traj.reason = StopReason::RoundPointExtracted;
            }
            Err(e) => {
                traj.reason = StopReason::CurvatureBlowup;
                traj.detail = format!("shrank below the area floor; {e}");
            }
        }
    }
    Ok(traj)
}

/// Mesh step with optional Richardson extrapolation in time: two half steps
/// against one full step lift the frozen-coefficient scheme to second order.
fn mesh_step_maybe_richardson<S: Real>(
    mesh: &TriangleMesh<S>,
    dt: S,
    opts: &MeshStepOptions<S>,
    richardson: bool,
) -> Result<TriangleMesh<S>> {
    if !richardson {
        return mcf_step_mesh(mesh, dt, opts);
    }
    let full = mcf_step_mesh(mesh, dt, opts)?;
    let half = dt * real::<S>(0.5);
    let h1 = mcf_step_mesh(mesh, half, opts)?;
    let h2 = mcf_step_mesh(&h1, half, opts)?;
    let two = real::<S>(2.0);
    let positions: Vec<Vec3<S>> = h2
        .vertices()
        .iter()
        .zip(full.vertices())
        .map(|(a, b)| a * two - b)
        .collect();
    Ok(mesh.with_positions_unchecked(positions))
}

fn classify_quality_stop<S: Real>(initial_max_a: S, max_a: S) -> StopReason {
    // Quality collapse driven by genuine curvature growth is a blowup;
    // otherwise the discretization itself failed.
    if max_a > initial_max_a * real(3.0) {
        StopReason::CurvatureBlowup
    } else {
        StopReason::MeshDegeneracy
    }
}

/// Evolve a generating curve by mean curvature flow.
pub fn mcf_evolve_axisym<S: Real>(
    initial: &AxisymProfile<S>,
    opts: &FlowOptions<S>,
) -> Result<AxisymTrajectory<S>> {
    let initial_area = initial.area();
    let (_, _, min_r0, max_r0) = initial.sphere_fit_stats();
    let _ = min_r0;
    let initial_diameter = real::<S>(2.0) * max_r0;
    let step_opts = AxisymStepOptions {
        pinch_radius: opts.min_edge_stop_ratio * initial_diameter,
        richardson: opts.richardson,
    };

    let mut profile = initial.clone();
    let mut t = S::zero();
    let mut states: Vec<(S, AxisymProfile<S>)> = vec![(t, profile.clone())];
    let mut diagnostics: Vec<StepDiagnostics<S>> = Vec::new();
    let mut material_windows: Vec<Vec<(S, AxisymProfile<S>)>> = Vec::new();
    let mut window: Vec<(S, AxisymProfile<S>)> = Vec::new();
    let mut window_countdown = 0usize;
    let mut window_dt: Option<S> = None;
    let mut next_store_area = initial_area * opts.store_area_ratio;

    let mut reason = StopReason::HorizonReached;
    let mut detail = String::new();
    let mut pending_round_classification = false;
    let target_spacing = initial.max_spacing();

    for step in 0..opts.max_steps {
        let diag = axisym_diagnostics(&profile, t, S::zero());
        if diag.area < opts.area_stop_ratio * initial_area {
            diagnostics.push(diag);
            pending_round_classification = true;
            detail = "area fell below the stop ratio".into();
            break;
        }
        if let Some(h) = opts.horizon {
            if t >= h {
                diagnostics.push(diag);
                reason = StopReason::HorizonReached;
                break;
            }
        }
        if step + 1 == opts.max_steps {
            diagnostics.push(diag);
            reason = StopReason::HorizonReached;
            detail = "step budget exhausted".into();
            break;
        }

        let mut dt = if diag.max_abs_a > S::zero() {
            (opts.curvature_cap / diag.max_abs_a).powi(2)
        } else {
            real(1e-3)
        };
        dt *= opts.accuracy_factor;
        if let Some(fixed) = window_dt {
            // Keep dt frozen inside a material window.
            dt = fixed;
        }
        if let Some(h) = opts.horizon {
            if window_countdown == 0 {
                dt = dt.min(h - t);
            }
        }

        let stepped = match mcf_step_axisym(&profile, dt, &step_opts) {
            Ok(p) => p,
            Err(Error::NeckPinch { min_radius, .. }) => {
                diagnostics.push(diag);
                reason = StopReason::CurvatureBlowup;
                detail = format!("neck pinch: min interior radius {min_radius:.3e}");
                break;
            }
            Err(Error::CapDegeneracy(msg)) => {
                diagnostics.push(diag);
                reason = StopReason::MeshDegeneracy;
                detail = format!("cap degeneracy: {msg}");
                break;
            }
            Err(e) => return Err(e),
        };

        let new_area = stepped.area();
        if new_area > diag.area * (S::one() + real(1e-8)) {
            diagnostics.push(diag);
            reason = StopReason::MeshDegeneracy;
            detail = "surface area increased across a step".into();
            break;
        }

        t += dt;
        profile = stepped;
        let mut accepted = axisym_diagnostics(&profile, t, dt);
        accepted.dt = dt;
        diagnostics.push(accepted);

        if window_countdown > 0 {
            window.push((t, profile.clone()));
            window_countdown -= 1;
            if window_countdown == 0 {
                material_windows.push(std::mem::take(&mut window));
                window_dt = None;
            }
        } else {
            // Resample only when spacing degrades; material windows must see
            // untouched sample sets.
            let spacing_ratio = profile.max_spacing() / profile.min_spacing();
            if spacing_ratio > real(2.0) || profile.max_spacing() > target_spacing * real(1.5) {
                profile = axisym::resample_uniform(&profile)?;
            }
        }

        if new_area <= next_store_area {
            states.push((t, profile.clone()));
            while next_store_area >= new_area {
                next_store_area *= opts.store_area_ratio;
            }
            if opts.material_windows && window_countdown == 0 && window.is_empty() {
                window.push((t, profile.clone()));
                window_countdown = 2;
                window_dt = Some(diagnostics.last().map(|d| d.dt).unwrap_or(dt));
            }
        }
    }

    if states.last().map(|(st, _)| *st != t).unwrap_or(true) {
        states.push((t, profile.clone()));
    }

    if matches!(reason, StopReason::CurvatureBlowup | StopReason::MeshDegeneracy) {
        if let Some(last) = diagnostics.last() {
            if last.area < real::<S>(5e-2) * initial_area {
                pending_round_classification = true;
            }
        }
    }
    let mut traj = FlowTrajectory {
        states,
        diagnostics,
        reason,
        detail,
        initial_area,
        initial_diameter,
        material_windows,
    };
    if pending_round_classification {
        match detect_round_point(&traj.diagnostics) {
            Ok(_) => {
                traj.reason = StopReason::RoundPointExtracted;
                traj.detail = format!("{}; tail fits the shrinking-sphere law", traj.detail);
            }
            Err(e) => {
                traj.reason = StopReason::CurvatureBlowup;
                traj.detail = format!("{}; {e}", traj.detail);
            }
        }
    }
    Ok(traj)
}
