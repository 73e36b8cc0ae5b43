//! Adaptive Gaussian-weighted quadrature over mesh triangles.
//!
//! Each face of the transformed surface rho * S + y is subdivided until its
//! extent falls below a fraction of the Gaussian length scale sqrt(2), then
//! integrated with the degree-2 midpoint rule. Faces whose entire weight
//! bound is negligible are pruned at the cost of a single centroid
//! evaluation, so extreme scales (rho far from the maximizer, or surfaces far
//! from the center) cost almost nothing.

use crate::entropy::GaussianFrame;
use crate::mesh::TriangleMesh;
use crate::metrics::closest_point_on_triangle;
use crate::{real, Real, Vec3};

/// Raw integrals over the ORIGINAL surface measure:
/// - `weight`: Int w dH^2 with w = exp(-|rho x + y|^2 / 4)
/// - `half_moment`: Int (u / 2) w dH^2 with u = rho x + y
/// - `radial_moment`: Int ((u . x) / 2) w dH^2
#[derive(Debug, Clone, Copy)]
pub struct RawIntegrals<S: Real> {
    pub weight: S,
    pub half_moment: Vec3<S>,
    pub radial_moment: S,
}

impl<S: Real> RawIntegrals<S> {
    fn zero() -> Self {
        RawIntegrals {
            weight: S::zero(),
            half_moment: Vec3::zeros(),
            radial_moment: S::zero(),
        }
    }

    fn add_sample(&mut self, x: &Vec3<S>, u: &Vec3<S>, w: S, area: S) {
        let c = w * area;
        self.weight += c;
        self.half_moment += u * (c * real::<S>(0.5));
        self.radial_moment += u.dot(x) * c * real::<S>(0.5);
    }
}

/// Default subdivision threshold: 0.25 times the Gaussian scale sqrt(2).
pub fn default_extent_threshold<S: Real>() -> S {
    real(0.25 * std::f64::consts::SQRT_2)
}

/// Integrate over the given faces (all faces when `faces` is None) at a fixed
/// subdivision threshold. `prune_tol` bounds the total integral neglected by
/// pruning distant faces.
pub fn integrate<S: Real>(
    mesh: &TriangleMesh<S>,
    frame: &GaussianFrame<S>,
    faces: Option<&[usize]>,
    extent_threshold: S,
    prune_tol: S,
) -> RawIntegrals<S> {
    let n_faces = faces.map(|f| f.len()).unwrap_or(mesh.n_faces());
    if n_faces == 0 {
        return RawIntegrals::zero();
    }
    let face_budget = prune_tol / real(n_faces as f64);
    let mut acc = RawIntegrals::zero();
    let mut one_face = |f: usize| {
        let [i, j, k] = mesh.faces()[f];
        face_recurse(
            &mesh.position(i),
            &mesh.position(j),
            &mesh.position(k),
            frame,
            extent_threshold,
            face_budget,
            0,
            &mut acc,
        );
    };
    match faces {
        Some(list) => list.iter().copied().for_each(&mut one_face),
        None => (0..mesh.n_faces()).for_each(&mut one_face),
    }
    acc
}

#[allow(clippy::too_many_arguments)]
fn face_recurse<S: Real>(
    a: &Vec3<S>,
    b: &Vec3<S>,
    c: &Vec3<S>,
    frame: &GaussianFrame<S>,
    threshold: S,
    budget: S,
    depth: u32,
    acc: &mut RawIntegrals<S>,
) {
    let rho = frame.scale;
    let y = frame.center;
    let ua = a * rho + y;
    let ub = b * rho + y;
    let uc = c * rho + y;
    let area = (b - a).cross(&(c - a)).norm() * real::<S>(0.5);
    let quarter = real::<S>(0.25);

    // Weight bound from the distance between the origin and the transformed
    // triangle; prune when even the bound cannot matter.
    let closest = closest_point_on_triangle(&Vec3::zeros(), &ua, &ub, &uc);
    let d2 = closest.norm_squared();
    let w_max = (-d2 * quarter).exp();
    let inv4pi = real::<S>(1.0 / (4.0 * std::f64::consts::PI));
    let transformed_area = area * rho * rho;
    if inv4pi * transformed_area * w_max < budget || depth >= 24 {
        // Single centroid sample (bounded contribution).
        let third = real::<S>(1.0 / 3.0);
        let xc = (a + b + c) * third;
        let uc_mid = (ua + ub + uc) * third;
        let w = (-uc_mid.norm_squared() * quarter).exp();
        acc.add_sample(&xc, &uc_mid, w, area);
        return;
    }

    let extent = (ub - ua)
        .norm()
        .max((uc - ub).norm())
        .max((ua - uc).norm());
    if extent <= threshold {
        // Degree-2 rule: edge midpoints, equal weights.
        let half = real::<S>(0.5);
        let third = real::<S>(1.0 / 3.0);
        let w_area = area * third;
        for (p, q) in [(a, b), (b, c), (c, a)] {
            let xm = (p + q) * half;
            let um = xm * rho + y;
            let w = (-um.norm_squared() * quarter).exp();
            acc.add_sample(&xm, &um, w, w_area);
        }
        return;
    }

    let half = real::<S>(0.5);
    let ab = (a + b) * half;
    let bc = (b + c) * half;
    let ca = (c + a) * half;
    let child_budget = budget * quarter;
    face_recurse(a, &ab, &ca, frame, threshold, child_budget, depth + 1, acc);
    face_recurse(&ab, b, &bc, frame, threshold, child_budget, depth + 1, acc);
    face_recurse(&ca, &bc, c, frame, threshold, child_budget, depth + 1, acc);
    face_recurse(&ab, &bc, &ca, frame, threshold, child_budget, depth + 1, acc);
}

/// F and its frame gradient from raw integrals:
/// F = (4 pi)^-1 rho^2 * weight,
/// dF/dy = -(4 pi)^-1 rho^2 * half_moment,
/// dF/drho = (4 pi)^-1 (2 rho weight - rho^2 radial_moment).
pub fn assemble<S: Real>(raw: &RawIntegrals<S>, frame: &GaussianFrame<S>) -> (S, Vec3<S>, S) {
    let inv4pi = real::<S>(1.0 / (4.0 * std::f64::consts::PI));
    let rho = frame.scale;
    let rho2 = rho * rho;
    let value = inv4pi * rho2 * raw.weight;
    let grad_y = -raw.half_moment * (inv4pi * rho2);
    let grad_rho = inv4pi * (real::<S>(2.0) * rho * raw.weight - rho2 * raw.radial_moment);
    (value, grad_y, grad_rho)
}
