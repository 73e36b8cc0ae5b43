//! Gaussian surface area F[rho S + y] and its entropy: the supremum of F over
//! all translations and dilations of the surface.
//!
//! `gaussian_area` integrates the Gaussian weight over the transformed
//! surface with certified adaptive quadrature; `entropy` climbs F with a
//! multistart quasi-Newton ascent in (center, log scale); and
//! `entropy_grid_oracle` is an independent zoomed grid search used to
//! cross-check the optimizer and to drive the spike experiments.
//!
//! Frames follow the convention F[rho S + y]: the surface is dilated by
//! `scale` and then translated by `center`. Search code parameterizes frames
//! by the Gaussian focus c on the surface (y = -rho c), which decouples the
//! translation from the scale; reported frames are always (y, rho).

pub mod quadrature;

use nalgebra::SVector;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::mesh::ops::{outward_normals, second_fundamental_norm_with};
use crate::mesh::TriangleMesh;
use crate::optim::maximize_bfgs;
use crate::{real, Error, Real, Result, Vec3};

/// A (translation, dilation) pair indexing the Gaussian functional
/// F[scale * S + center].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianFrame<S: Real = f64> {
    pub center: Vec3<S>,
    pub scale: S,
}

impl<S: Real> GaussianFrame<S> {
    pub fn new(center: Vec3<S>, scale: S) -> Result<Self> {
        if !(scale > S::zero()) || !scale.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "frame scale must be positive and finite, got {:?}",
                scale.to_f64()
            )));
        }
        if !(center.x.is_finite() && center.y.is_finite() && center.z.is_finite()) {
            return Err(Error::InvalidParameter("frame center must be finite".into()));
        }
        Ok(GaussianFrame { center, scale })
    }

    /// The frame leaving the surface untouched.
    pub fn identity() -> Self {
        GaussianFrame {
            center: Vec3::zeros(),
            scale: S::one(),
        }
    }

    /// Frame that brings the Gaussian focus (surface-space point `c`) to the
    /// origin at dilation `rho`: y = -rho c.
    pub fn focused(c: Vec3<S>, rho: S) -> Result<Self> {
        GaussianFrame::new(-c * rho, rho)
    }

    /// The surface-space focus c = -y / rho.
    pub fn focus(&self) -> Vec3<S> {
        -self.center / self.scale
    }
}

/// F[rho S + y] with certified absolute quadrature error at most `tol`:
/// the subdivision threshold is halved until two successive evaluations agree
/// within `tol`.
pub fn gaussian_area<S: Real>(
    mesh: &TriangleMesh<S>,
    frame: &GaussianFrame<S>,
    tol: S,
) -> Result<S> {
    gaussian_area_faces(mesh, frame, None, tol)
}

/// As [`gaussian_area`] but restricted to a face subset (diagnostics).
pub fn gaussian_area_faces<S: Real>(
    mesh: &TriangleMesh<S>,
    frame: &GaussianFrame<S>,
    faces: Option<&[usize]>,
    tol: S,
) -> Result<S> {
    let mut threshold = quadrature::default_extent_threshold::<S>();
    let prune = tol * real::<S>(0.05);
    let mut prev: Option<S> = None;
    for _ in 0..7 {
        let raw = quadrature::integrate(mesh, frame, faces, threshold, prune);
        let (value, _, _) = quadrature::assemble(&raw, frame);
        if let Some(p) = prev {
            if (value - p).abs() <= tol {
                return Ok(value);
            }
        }
        prev = Some(value);
        threshold *= real(0.5);
    }
    Err(Error::QuadratureNotConverged {
        estimate: prev.map(|p| p.to_f64().unwrap_or(f64::NAN)).unwrap_or(f64::NAN),
        tol: tol.to_f64().unwrap_or(f64::NAN),
    })
}

/// Analytic frame gradient (dF/dy, dF/drho), certified like the value.
pub fn gaussian_area_gradient<S: Real>(
    mesh: &TriangleMesh<S>,
    frame: &GaussianFrame<S>,
    tol: S,
) -> Result<(Vec3<S>, S)> {
    let mut threshold = quadrature::default_extent_threshold::<S>();
    let prune = tol * real::<S>(0.05);
    let mut prev: Option<(S, Vec3<S>, S)> = None;
    for _ in 0..7 {
        let raw = quadrature::integrate(mesh, frame, None, threshold, prune);
        let out = quadrature::assemble(&raw, frame);
        if let Some((pv, _, _)) = prev {
            if (out.0 - pv).abs() <= tol {
                return Ok((out.1, out.2));
            }
        }
        prev = Some(out);
        threshold *= real(0.5);
    }
    Err(Error::QuadratureNotConverged {
        estimate: f64::NAN,
        tol: tol.to_f64().unwrap_or(f64::NAN),
    })
}

/// Single-pass evaluation used inside search loops (no escalation).
fn value_and_frame_grad<S: Real>(
    mesh: &TriangleMesh<S>,
    frame: &GaussianFrame<S>,
    tol: S,
) -> (S, Vec3<S>, S) {
    let raw = quadrature::integrate(
        mesh,
        frame,
        None,
        quadrature::default_extent_threshold::<S>(),
        tol * real::<S>(0.05),
    );
    quadrature::assemble(&raw, frame)
}

/// Options for the entropy maximizer.
#[derive(Debug, Clone)]
pub struct EntropyOptions<S: Real = f64> {
    /// Quadrature tolerance for reported values.
    pub quad_tol: S,
    /// Gradient-norm convergence threshold (in (c, log rho) coordinates).
    pub grad_tol: S,
    pub max_iterations: usize,
    /// Curvature-cluster seeds to try in addition to the centroid seed.
    pub cluster_starts: usize,
    /// Probe a small coarse frame grid for extra seeds.
    pub coarse_grid_seeds: bool,
    /// Run the grid oracle and report the gap.
    pub with_oracle: bool,
    pub oracle_grid: Option<GridSpec<S>>,
}

impl<S: Real> Default for EntropyOptions<S> {
    fn default() -> Self {
        EntropyOptions {
            quad_tol: real(1e-6),
            grad_tol: real(1e-7),
            max_iterations: 150,
            cluster_starts: 4,
            coarse_grid_seeds: true,
            with_oracle: false,
            oracle_grid: None,
        }
    }
}

/// Entropy estimate: a certified lower bound for the supremum of F.
#[derive(Debug, Clone)]
pub struct EntropyResult<S: Real = f64> {
    pub value: S,
    pub argmax: GaussianFrame<S>,
    pub starts_tried: usize,
    pub converged: bool,
    pub gradient_norm_at_argmax: S,
    /// value minus the grid-oracle lower bound, when the oracle ran.
    pub oracle_gap: Option<S>,
    /// The argmax sat on (or outside) the default search region.
    pub boundary_hit: bool,
}

impl<S: Real + Serialize> Serialize for EntropyResult<S> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        let mut st = serializer.serialize_struct("EntropyResult", 7)?;
        st.serialize_field("value", &self.value)?;
        st.serialize_field("center", &[
            self.argmax.center.x,
            self.argmax.center.y,
            self.argmax.center.z,
        ])?;
        st.serialize_field("scale", &self.argmax.scale)?;
        st.serialize_field("converged", &self.converged)?;
        st.serialize_field("starts_tried", &self.starts_tried)?;
        st.serialize_field("gradient_norm", &self.gradient_norm_at_argmax)?;
        st.serialize_field("oracle_gap", &self.oracle_gap)?;
        st.serialize_field("boundary_hit", &self.boundary_hit)?;
        st.end()
    }
}

/// Order frames for deterministic tie-breaking: higher value, then smaller
/// scale, then lexicographically smaller center.
fn better<S: Real>(a: &(S, GaussianFrame<S>), b: &(S, GaussianFrame<S>)) -> bool {
    if a.0 != b.0 {
        return a.0 > b.0;
    }
    if a.1.scale != b.1.scale {
        return a.1.scale < b.1.scale;
    }
    for k in 0..3 {
        if a.1.center[k] != b.1.center[k] {
            return a.1.center[k] < b.1.center[k];
        }
    }
    false
}

/// Entropy lower bound by multistart quasi-Newton ascent over (c, log rho).
///
/// Seeds: the mesh centroid at the sphere-equivalent scale, high-curvature
/// cluster centers at their feature-matching scale, and the best cells of a
/// coarse frame grid. Line-search failure on every start returns the best
/// probed value flagged `converged = false` rather than an error.
pub fn entropy<S: Real>(mesh: &TriangleMesh<S>, opts: &EntropyOptions<S>) -> Result<EntropyResult<S>> {
    let seeds = build_seeds(mesh, opts)?;
    let starts_tried = seeds.len();
    let diam = mesh.diameter();

    let outcomes: Vec<(S, GaussianFrame<S>, S, bool)> = seeds
        .par_iter()
        .map(|&(c, rho)| run_one_start(mesh, c, rho, diam, opts))
        .collect();

    let mut best: Option<(S, GaussianFrame<S>, S, bool)> = None;
    for o in outcomes {
        let replace = match &best {
            None => true,
            Some(b) => better(&(o.0, o.1), &(b.0, b.1)),
        };
        if replace {
            best = Some(o);
        }
    }
    let (mut value, mut argmax, mut grad_norm, mut converged) =
        best.ok_or_else(|| Error::InvalidParameter("no entropy seeds".into()))?;

    let mut oracle_gap = None;
    let default_grid = GridSpec::default_for(mesh);
    let mut boundary_hit = argmax.scale < default_grid.rho_lo || argmax.scale > default_grid.rho_hi;
    if opts.with_oracle {
        let grid = opts.oracle_grid.clone().unwrap_or_else(|| default_grid.clone());
        let oracle = entropy_grid_oracle(mesh, &grid);
        // Polish from the oracle argmax in case it found a better basin.
        let polished = run_one_start(mesh, oracle.frame.focus(), oracle.frame.scale, diam, opts);
        if better(&(polished.0, polished.1), &(value, argmax)) {
            value = polished.0;
            argmax = polished.1;
            grad_norm = polished.2;
            converged = polished.3;
        }
        if oracle.value > value {
            value = oracle.value;
            argmax = oracle.frame;
        }
        boundary_hit = boundary_hit || oracle.boundary_hit;
        oracle_gap = Some(value - oracle.value);
    }

    // Certify the reported value at the requested quadrature tolerance.
    let certified = gaussian_area(mesh, &argmax, opts.quad_tol)?;
    value = value.max(certified);

    Ok(EntropyResult {
        value,
        argmax,
        starts_tried,
        converged,
        gradient_norm_at_argmax: grad_norm,
        oracle_gap,
        boundary_hit,
    })
}

fn run_one_start<S: Real>(
    mesh: &TriangleMesh<S>,
    c0: Vec3<S>,
    rho0: S,
    diam: S,
    opts: &EntropyOptions<S>,
) -> (S, GaussianFrame<S>, S, bool) {
    let mut best_probe: Option<(S, GaussianFrame<S>)> = None;
    let mut eval = |x: &SVector<S, 4>| -> (S, SVector<S, 4>) {
        let c = Vec3::new(x[0], x[1], x[2]);
        let rho = x[3].exp();
        let frame = GaussianFrame {
            center: -c * rho,
            scale: rho,
        };
        let (v, gy, grho) = value_and_frame_grad(mesh, &frame, opts.quad_tol);
        let probe = (v, frame);
        let replace = match &best_probe {
            None => true,
            Some(b) => better(&probe, b),
        };
        if replace {
            best_probe = Some(probe);
        }
        // Chain rule: dF/dc = -rho dF/dy, dF/du = rho dF/drho + dF/dy . y.
        let gc = -gy * rho;
        let gu = rho * grho + gy.dot(&frame.center);
        (v, SVector::<S, 4>::new(gc[0], gc[1], gc[2], gu))
    };
    let x0 = SVector::<S, 4>::new(c0[0], c0[1], c0[2], rho0.max(real(1e-12)).ln());
    let scales = SVector::<S, 4>::new(
        diam * real(0.25),
        diam * real(0.25),
        diam * real(0.25),
        real(0.4),
    );
    let out = maximize_bfgs(&mut eval, x0, scales, opts.grad_tol, opts.max_iterations);
    let from_run = (
        out.value,
        GaussianFrame {
            center: -Vec3::new(out.x[0], out.x[1], out.x[2]) * out.x[3].exp(),
            scale: out.x[3].exp(),
        },
    );
    let (value, frame) = match best_probe {
        Some(p) if better(&p, &from_run) => p,
        _ => from_run,
    };
    (value, frame, out.grad_norm, out.converged)
}

/// Seed list in (focus c, scale rho) coordinates.
fn build_seeds<S: Real>(
    mesh: &TriangleMesh<S>,
    opts: &EntropyOptions<S>,
) -> Result<Vec<(Vec3<S>, S)>> {
    let mut seeds = Vec::new();
    let centroid = mesh.centroid();
    let mean_r = mesh
        .vertices()
        .iter()
        .map(|v| (v - centroid).norm())
        .sum::<S>()
        / real(mesh.n_vertices() as f64);
    seeds.push((centroid, real::<S>(2.0) / mean_r));

    // High-curvature cluster seeds: the entropy maximum can sit on a small
    // feature far from the centroid, at the scale matching its curvature.
    if opts.cluster_starts > 0 {
        let normals = outward_normals(mesh);
        if let Ok(curv) = second_fundamental_norm_with(mesh, &normals) {
            let mut order: Vec<usize> = (0..mesh.n_vertices()).collect();
            order.sort_unstable_by(|&a, &b| {
                curv.values[b]
                    .partial_cmp(&curv.values[a])
                    .unwrap_or(std::cmp::Ordering::Equal)
                    .then(a.cmp(&b))
            });
            let mut centers: Vec<Vec3<S>> = Vec::new();
            let sqrt2 = real::<S>(std::f64::consts::SQRT_2);
            for &v in &order {
                if centers.len() >= opts.cluster_starts {
                    break;
                }
                let a = curv.values[v];
                if !(a > S::zero()) {
                    continue;
                }
                let p = mesh.position(v);
                let sep = real::<S>(3.0) / a;
                if centers.iter().any(|c| (c - p).norm() < sep) {
                    continue;
                }
                centers.push(p);
                let rho = sqrt2 * a;
                // Feature center guesses: sphere-like and tube-like offsets
                // along the inward normal.
                let n = normals.values[v];
                seeds.push((p - n * (sqrt2 / a), rho));
                seeds.push((p - n * (S::one() / a), rho));
            }
        }
    }

    if opts.coarse_grid_seeds {
        let grid = GridSpec {
            center_res: [3, 3, 3],
            rho_res: 7,
            zoom_stages: 1,
            ..GridSpec::default_for(mesh)
        };
        let coarse = grid_search(mesh, &grid);
        seeds.push((coarse.frame.focus(), coarse.frame.scale));
    }
    Ok(seeds)
}

/// Grid-search specification for the oracle, in focus coordinates.
#[derive(Debug, Clone)]
pub struct GridSpec<S: Real = f64> {
    pub center_lo: Vec3<S>,
    pub center_hi: Vec3<S>,
    pub center_res: [usize; 3],
    pub rho_lo: S,
    pub rho_hi: S,
    pub rho_res: usize,
    pub zoom_stages: usize,
    /// Each zoom stage shrinks the search window by this factor around the
    /// best cell.
    pub zoom_shrink: S,
    pub quad_tol: S,
}

impl<S: Real> GridSpec<S> {
    /// Mesh bounding box inflated 2x for the focus; dilations spanning
    /// [0.05, 20] times the sphere-equivalent scale 4/diameter.
    pub fn default_for(mesh: &TriangleMesh<S>) -> Self {
        let (lo, hi) = mesh.bounding_box();
        let mid = (lo + hi) * real::<S>(0.5);
        let half = (hi - lo) * real::<S>(0.5);
        let diam = mesh.diameter();
        let base = real::<S>(4.0) / diam;
        GridSpec {
            center_lo: mid - half * real::<S>(2.0),
            center_hi: mid + half * real::<S>(2.0),
            center_res: [5, 5, 5],
            rho_lo: base * real(0.05),
            rho_hi: base * real(20.0),
            rho_res: 11,
            zoom_stages: 3,
            zoom_shrink: real(0.25),
            quad_tol: real(1e-6),
        }
    }
}

/// Outcome of the grid search.
#[derive(Debug, Clone)]
pub struct GridOracleResult<S: Real = f64> {
    pub value: S,
    pub frame: GaussianFrame<S>,
    pub boundary_hit: bool,
}

/// Independent deterministic zoomed grid search maximizing F.
pub fn entropy_grid_oracle<S: Real>(mesh: &TriangleMesh<S>, spec: &GridSpec<S>) -> GridOracleResult<S> {
    grid_search(mesh, spec)
}

fn grid_search<S: Real>(mesh: &TriangleMesh<S>, spec: &GridSpec<S>) -> GridOracleResult<S> {
    let mut lo = spec.center_lo;
    let mut hi = spec.center_hi;
    let mut lrho_lo = spec.rho_lo.ln();
    let mut lrho_hi = spec.rho_hi.ln();
    let mut best: Option<(S, GaussianFrame<S>)> = None;

    for _stage in 0..spec.zoom_stages.max(1) {
        let axis = |a: S, b: S, n: usize, i: usize| -> S {
            if n <= 1 {
                (a + b) * real(0.5)
            } else {
                a + (b - a) * real(i as f64 / (n - 1) as f64)
            }
        };
        let n_total = spec.center_res[0] * spec.center_res[1] * spec.center_res[2] * spec.rho_res;
        let stage_best = (0..n_total)
            .into_par_iter()
            .map(|flat| {
                let mut rem = flat;
                let i = rem % spec.center_res[0];
                rem /= spec.center_res[0];
                let j = rem % spec.center_res[1];
                rem /= spec.center_res[1];
                let k = rem % spec.center_res[2];
                rem /= spec.center_res[2];
                let r = rem;
                let c = Vec3::new(
                    axis(lo.x, hi.x, spec.center_res[0], i),
                    axis(lo.y, hi.y, spec.center_res[1], j),
                    axis(lo.z, hi.z, spec.center_res[2], k),
                );
                let rho = axis(lrho_lo, lrho_hi, spec.rho_res, r).exp();
                let frame = GaussianFrame {
                    center: -c * rho,
                    scale: rho,
                };
                let raw = quadrature::integrate(
                    mesh,
                    &frame,
                    None,
                    quadrature::default_extent_threshold::<S>(),
                    spec.quad_tol * real::<S>(0.05),
                );
                let (v, _, _) = quadrature::assemble(&raw, &frame);
                (v, frame)
            })
            .reduce_with(|a, b| if better(&a, &b) { a } else { b });
        if let Some(sb) = stage_best {
            let replace = match &best {
                None => true,
                Some(b) => better(&sb, b),
            };
            if replace {
                best = Some(sb);
            }
        }
        // Zoom around the best focus/scale.
        if let Some((_, frame)) = &best {
            let c = frame.focus();
            let span = (hi - lo) * spec.zoom_shrink * real::<S>(0.5);
            let new_lo = Vec3::new(
                (c.x - span.x).max(spec.center_lo.x),
                (c.y - span.y).max(spec.center_lo.y),
                (c.z - span.z).max(spec.center_lo.z),
            );
            let new_hi = Vec3::new(
                (c.x + span.x).min(spec.center_hi.x),
                (c.y + span.y).min(spec.center_hi.y),
                (c.z + span.z).min(spec.center_hi.z),
            );
            lo = new_lo;
            hi = new_hi;
            let lspan = (lrho_hi - lrho_lo) * spec.zoom_shrink * real::<S>(0.5);
            let lr = frame.scale.ln();
            lrho_lo = (lr - lspan).max(spec.rho_lo.ln());
            lrho_hi = (lr + lspan).min(spec.rho_hi.ln());
        }
    }

    let (value, frame) = best.expect("grid search evaluated at least one frame");
    let c = frame.focus();
    let eps = real::<S>(1e-9);
    let near = |x: S, bound: S, span: S| (x - bound).abs() <= span * eps;
    let span_c = spec.center_hi - spec.center_lo;
    let mut boundary_hit = false;
    for k in 0..3 {
        if span_c[k] > S::zero()
            && (near(c[k], spec.center_lo[k], span_c[k]) || near(c[k], spec.center_hi[k], span_c[k]))
        {
            boundary_hit = true;
        }
    }
    let lspan = spec.rho_hi.ln() - spec.rho_lo.ln();
    if near(frame.scale.ln(), spec.rho_lo.ln(), lspan) || near(frame.scale.ln(), spec.rho_hi.ln(), lspan)
    {
        boundary_hit = true;
    }
    GridOracleResult {
        value,
        frame,
        boundary_hit,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::generate::{generate, ShapeSpec};

    fn unit_sphere(level: u32) -> TriangleMesh<f64> {
        generate(&ShapeSpec::Sphere {
            radius: 1.0,
            center: Vec3::zeros(),
            level,
        })
        .unwrap()
    }

    #[test]
    fn sphere_gaussian_area_closed_forms() {
        let mesh = unit_sphere(5);
        // F(rho) = rho^2 exp(-rho^2/4) for the unit sphere.
        let f1 = gaussian_area(&mesh, &GaussianFrame::identity(), 1e-6).unwrap();
        assert!((f1 - (-0.25f64).exp()).abs() < 1e-3, "F(1) = {f1}");
        let f2 = gaussian_area(
            &mesh,
            &GaussianFrame::new(Vec3::zeros(), 2.0).unwrap(),
            1e-6,
        )
        .unwrap();
        assert!((f2 - 4.0 / std::f64::consts::E).abs() < 1e-3, "F(2) = {f2}");
        let f100 = gaussian_area(
            &mesh,
            &GaussianFrame::new(Vec3::zeros(), 100.0).unwrap(),
            1e-6,
        )
        .unwrap();
        assert!(f100 < 1e-100, "F(100) = {f100}");
    }

    #[test]
    fn gradient_matches_closed_form_and_finite_differences() {
        let mesh = unit_sphere(4);
        let frame = GaussianFrame::identity();
        let (gy, grho) = gaussian_area_gradient(&mesh, &frame, 1e-7).unwrap();
        // d/drho (rho^2 e^{-rho^2/4}) at rho = 1: (2 - 1/2) e^{-1/4}.
        let expect = 1.5 * (-0.25f64).exp();
        assert!((grho - expect).abs() < 2e-3, "dF/drho = {grho} vs {expect}");
        assert!(gy.norm() < 1e-6, "dF/dy = {gy:?}");

        // Finite differences at an asymmetric frame.
        let frame = GaussianFrame::new(Vec3::new(0.3, -0.2, 0.1), 1.7).unwrap();
        let (gy, grho) = gaussian_area_gradient(&mesh, &frame, 1e-8).unwrap();
        let h = 1e-5;
        for k in 0..3 {
            let mut fp = frame;
            fp.center[k] += h;
            let mut fm = frame;
            fm.center[k] -= h;
            let vp = gaussian_area(&mesh, &fp, 1e-9).unwrap();
            let vm = gaussian_area(&mesh, &fm, 1e-9).unwrap();
            let fd = (vp - vm) / (2.0 * h);
            assert!(
                (fd - gy[k]).abs() <= 1e-4 * gy[k].abs().max(1.0),
                "component {k}: fd {fd} vs analytic {}",
                gy[k]
            );
        }
        let vp = gaussian_area(
            &mesh,
            &GaussianFrame::new(frame.center, frame.scale + h).unwrap(),
            1e-9,
        )
        .unwrap();
        let vm = gaussian_area(
            &mesh,
            &GaussianFrame::new(frame.center, frame.scale - h).unwrap(),
            1e-9,
        )
        .unwrap();
        let fd = (vp - vm) / (2.0 * h);
        assert!(
            (fd - grho).abs() <= 1e-4 * grho.abs().max(1.0),
            "fd {fd} vs analytic {grho}"
        );
    }

    #[test]
    fn unit_sphere_entropy_and_argmax() {
        let mesh = unit_sphere(4);
        let result = entropy(&mesh, &EntropyOptions::default()).unwrap();
        let expect = 4.0 / std::f64::consts::E;
        assert!(
            (result.value - expect).abs() < 3e-3,
            "entropy {} vs {expect}",
            result.value
        );
        assert!(result.converged);
        assert!((result.argmax.scale - 2.0).abs() < 2e-2);
        assert!(result.argmax.center.norm() < 1e-2);
        assert!(!result.boundary_hit);
    }

    #[test]
    fn translation_is_absorbed_by_the_supremum() {
        let centered = entropy(&unit_sphere(3), &EntropyOptions::default()).unwrap();
        let moved = generate(&ShapeSpec::Sphere {
            radius: 1.0,
            center: Vec3::new(7.0, 0.0, 0.0),
            level: 3,
        })
        .unwrap();
        let far = entropy(&moved, &EntropyOptions::default()).unwrap();
        assert!(
            (centered.value - far.value).abs() < 1e-6,
            "{} vs {}",
            centered.value,
            far.value
        );
    }

    #[test]
    fn oracle_reaches_the_sphere_maximum() {
        let mesh = unit_sphere(4);
        let oracle = entropy_grid_oracle(&mesh, &GridSpec::default_for(&mesh));
        let expect = 4.0 / std::f64::consts::E;
        assert!(
            (oracle.value - expect).abs() < 5e-3,
            "oracle {} vs {expect}",
            oracle.value
        );
        assert!(!oracle.boundary_hit);
    }

    #[test]
    fn grid_refinement_is_monotone() {
        let mesh = unit_sphere(3);
        let base = GridSpec {
            zoom_stages: 1,
            center_res: [3, 3, 3],
            rho_res: 5,
            ..GridSpec::default_for(&mesh)
        };
        let refined = GridSpec {
            center_res: [5, 5, 5],
            rho_res: 9,
            ..base.clone()
        };
        let v0 = entropy_grid_oracle(&mesh, &base).value;
        let v1 = entropy_grid_oracle(&mesh, &refined).value;
        assert!(v1 >= v0 - 1e-12, "{v1} < {v0}");
    }

    #[test]
    fn capped_cylinder_tube_contribution_reaches_lambda_one() {
        // Tube faces only, identity frame: (4 pi)^-1 2 pi sqrt2 e^{-1/2}
        // Int exp(-z^2/4) dz over the tube = sqrt(2 pi / e) erf(L/4-ish).
        let mesh = generate(&ShapeSpec::CappedCylinder {
            radius: 2.0f64.sqrt(),
            length: 40.0,
            level: 8,
        })
        .unwrap();
        let tube: Vec<usize> = (0..mesh.n_faces())
            .filter(|&f| {
                let tri = mesh.faces()[f];
                let z = (mesh.position(tri[0]).z + mesh.position(tri[1]).z
                    + mesh.position(tri[2]).z)
                    / 3.0;
                z.abs() < 18.0
            })
            .collect();
        let value =
            gaussian_area_faces(&mesh, &GaussianFrame::identity(), Some(&tube), 1e-6).unwrap();
        let lambda_1 = (2.0 * std::f64::consts::PI / std::f64::consts::E).sqrt();
        assert!(
            (value - lambda_1).abs() < 2e-3,
            "tube contribution {value} vs {lambda_1}"
        );
    }
}
