//! Surfaces of revolution: sampled generating curves and their mean curvature
//! flow.
//!
//! A profile stores samples (z, r) of the generating curve in the half-plane
//! r >= 0, ordered along arc length. Caps sit exactly on the axis and the
//! curve meets the axis orthogonally there; cylinders are periodic in z and
//! tori are closed loops. Orientation is normalized on construction so the
//! rotated tangent `n = (-t_r applied, ...)` is the outward surface normal.
//!
//! The integrator advances the squared radius v = r^2, which satisfies the
//! material law v_t = v_ss - 2 along the flow (arc-length derivatives): the
//! rotational 1/r term of the mean curvature becomes the constant -2, so the
//! axis is perfectly regular and a shrinking cylinder obeys
//! r(t) = sqrt(r0^2 - 2t) exactly per step. The axial coordinate follows the
//! conservative surface Laplacian (1/r)(r z_s)_s with coefficients frozen at
//! the previous state. Optional Richardson extrapolation in time lifts the
//! stepping to second order.

use serde::Serialize;

use crate::linalg::{solve_cyclic_tridiagonal, solve_tridiagonal};
use crate::mesh::TriangleMesh;
use crate::{real, Error, Real, Result, Vec2};

/// Endpoint behavior of a generating curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ProfileTopology {
    /// Both endpoints on the axis (r = 0), meeting it orthogonally.
    CappedBoth,
    /// Closed loop in the half-plane (torus-like).
    PeriodicLoop,
    /// Periodic in z with the given period (cylinder-like).
    PeriodicZ { period: f64 },
}

/// Sampled generating curve of a surface of revolution about the z axis.
#[derive(Debug, Clone)]
pub struct AxisymProfile<S: Real = f64> {
    /// (z, r) samples, arc-length ordered.
    samples: Vec<Vec2<S>>,
    topology: ProfileTopology,
}

impl<S: Real> AxisymProfile<S> {
    /// Validate samples and normalize the traversal direction (clockwise in
    /// the (z, r) plane, so capped profiles run from low z to high z).
    pub fn new(mut samples: Vec<Vec2<S>>, topology: ProfileTopology) -> Result<Self> {
        if samples.len() < 4 {
            return Err(Error::InvalidParameter(
                "profile needs at least 4 samples".into(),
            ));
        }
        match topology {
            ProfileTopology::CappedBoth => {
                let n = samples.len();
                if samples[0].y != S::zero() || samples[n - 1].y != S::zero() {
                    return Err(Error::CapDegeneracy(
                        "capped profile endpoints must have r = 0".into(),
                    ));
                }
                if samples[0].x > samples[n - 1].x {
                    samples.reverse();
                }
                for (i, p) in samples.iter().enumerate().take(n - 1).skip(1) {
                    if !(p.y > S::zero()) {
                        return Err(Error::InvalidParameter(format!(
                            "interior sample {i} has non-positive radius"
                        )));
                    }
                }
                // Orthogonal axis meeting: |dr/ds| near 1 on the end segments.
                for (a, b) in [(0usize, 1usize), (n - 1, n - 2)] {
                    let d = samples[b] - samples[a];
                    let slope = d.y.abs() / d.norm();
                    if slope < real(0.5) {
                        return Err(Error::CapDegeneracy(format!(
                            "cap at sample {a} meets the axis at |dr/ds| = {:?}",
                            slope.to_f64()
                        )));
                    }
                }
            }
            ProfileTopology::PeriodicLoop => {
                for (i, p) in samples.iter().enumerate() {
                    if !(p.y > S::zero()) {
                        return Err(Error::InvalidParameter(format!(
                            "loop sample {i} has non-positive radius"
                        )));
                    }
                }
                // Clockwise traversal: negative shoelace area in (z, r).
                let n = samples.len();
                let mut twice_area = S::zero();
                for i in 0..n {
                    let a = samples[i];
                    let b = samples[(i + 1) % n];
                    twice_area += a.x * b.y - b.x * a.y;
                }
                if twice_area > S::zero() {
                    samples.reverse();
                }
            }
            ProfileTopology::PeriodicZ { period } => {
                if !(period > 0.0) {
                    return Err(Error::InvalidParameter("period must be positive".into()));
                }
                for (i, p) in samples.iter().enumerate() {
                    if !(p.y > S::zero()) {
                        return Err(Error::InvalidParameter(format!(
                            "periodic sample {i} has non-positive radius"
                        )));
                    }
                }
                if samples[0].x > samples[samples.len() - 1].x {
                    samples.reverse();
                }
            }
        }
        Ok(AxisymProfile { samples, topology })
    }

    pub fn samples(&self) -> &[Vec2<S>] {
        &self.samples
    }

    pub fn topology(&self) -> ProfileTopology {
        self.topology
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    fn is_periodic(&self) -> bool {
        !matches!(self.topology, ProfileTopology::CappedBoth)
    }

    /// Segment vector from sample i to its successor (wrapping for periodic
    /// profiles, with the z period folded in).
    fn segment(&self, i: usize) -> Vec2<S> {
        let n = self.samples.len();
        if i + 1 < n {
            self.samples[i + 1] - self.samples[i]
        } else {
            let mut d = self.samples[0] - self.samples[n - 1];
            if let ProfileTopology::PeriodicZ { period } = self.topology {
                d.x += real(period);
            }
            d
        }
    }

    /// Arc length of each segment; periodic profiles include the closing one.
    pub fn segment_lengths(&self) -> Vec<S> {
        let n = self.samples.len();
        let count = if self.is_periodic() { n } else { n - 1 };
        (0..count).map(|i| self.segment(i).norm()).collect()
    }

    /// Surface area 2 pi Int r ds (trapezoid in r along the curve).
    pub fn area(&self) -> S {
        let n = self.samples.len();
        let count = if self.is_periodic() { n } else { n - 1 };
        let half = real::<S>(0.5);
        let mut acc = S::zero();
        for i in 0..count {
            let j = (i + 1) % n;
            acc += (self.samples[i].y + self.samples[j].y) * half * self.segment(i).norm();
        }
        acc * S::two_pi()
    }

    pub fn min_interior_radius(&self) -> S {
        let range = match self.topology {
            ProfileTopology::CappedBoth => 1..self.samples.len() - 1,
            _ => 0..self.samples.len(),
        };
        range
            .map(|i| self.samples[i].y)
            .fold(S::max_value().unwrap(), |a, b| a.min(b))
    }

    pub fn min_spacing(&self) -> S {
        self.segment_lengths()
            .into_iter()
            .fold(S::max_value().unwrap(), |a, b| a.min(b))
    }

    pub fn max_spacing(&self) -> S {
        self.segment_lengths()
            .into_iter()
            .fold(S::zero(), |a, b| a.max(b))
    }

    /// Per-sample differential data: unit tangent, outward normal, signed
    /// profile curvature, scalar mean curvature H (positive on spheres and
    /// cylinders) and |A|.
    pub fn differentials(&self) -> ProfileDifferentials<S> {
        let n = self.samples.len();
        let periodic = self.is_periodic();
        let two = real::<S>(2.0);
        let mut tangent = vec![Vec2::zeros(); n];
        let mut normal = vec![Vec2::zeros(); n];
        let mut kappa = vec![S::zero(); n];
        let mut mean = vec![S::zero(); n];
        let mut second = vec![S::zero(); n];

        for i in 0..n {
            let interior = periodic || (i > 0 && i + 1 < n);
            if interior {
                let dm = self.segment((i + n - 1) % n);
                let dp = self.segment(i);
                let hm = dm.norm();
                let hp = dp.norm();
                let t = (dm / hm * hp + dp / hp * hm) / (hm + hp);
                let t = t.normalize();
                tangent[i] = t;
                // Rotate the tangent counterclockwise: outward for clockwise
                // traversal (normalized in `new`).
                let nrm = Vec2::new(-t.y, t.x);
                normal[i] = nrm;
                let gss = (dp / hp - dm / hm) * (two / (hm + hp));
                let k = -gss.dot(&nrm);
                kappa[i] = k;
                let r = self.samples[i].y;
                // The rotational curvature n_r / r amplifies O(h^2) tangent
                // noise to O(h^2 / r) near the axis; both curvatures agree at
                // a cap, so blend toward the profile curvature there.
                let rot_raw = nrm.y / r;
                let blend = real::<S>(4.0) * (hm + hp) * real::<S>(0.5);
                let rot = if r < blend && !periodic {
                    let w = r / blend;
                    w * rot_raw + (S::one() - w) * k
                } else {
                    rot_raw
                };
                mean[i] = k + rot;
                second[i] = (k * k + rot * rot).sqrt();
            } else {
                // Axis cap: locally z(r) = z0 + a r^2; both principal
                // curvatures equal and H = -4a n_z.
                let j = if i == 0 { 1 } else { n - 2 };
                let dz = self.samples[j].x - self.samples[i].x;
                let r1 = self.samples[j].y;
                let a = dz / (r1 * r1);
                let nz = if dz > S::zero() { -S::one() } else { S::one() };
                normal[i] = Vec2::new(nz, S::zero());
                tangent[i] = Vec2::new(S::zero(), S::one());
                let h = -real::<S>(4.0) * a * nz;
                mean[i] = h;
                kappa[i] = h * real(0.5);
                second[i] = h.abs() * real(std::f64::consts::FRAC_1_SQRT_2);
            }
        }
        ProfileDifferentials {
            tangent,
            normal,
            kappa,
            mean,
            second_fundamental_norm: second,
        }
    }

    /// x . n for each sample: z n_z + r n_r of the revolved point.
    pub fn position_dot_normal(&self) -> Vec<S> {
        let d = self.differentials();
        self.samples
            .iter()
            .zip(&d.normal)
            .map(|(p, n)| p.x * n.x + p.y * n.y)
            .collect()
    }

    /// The quantity 2 t H + x . n per sample.
    pub fn phi(&self, t: S) -> Vec<S> {
        let d = self.differentials();
        let two = real::<S>(2.0);
        self.samples
            .iter()
            .zip(d.mean.iter().zip(&d.normal))
            .map(|(p, (&h, n))| two * t * h + p.x * n.x + p.y * n.y)
            .collect()
    }

    /// Conservative surface Laplacian (1/r)(r f_s)_s of a per-sample scalar.
    /// Cap values use the symmetric limit 4 (f_1 - f_0) / r_1^2.
    pub fn surface_laplacian(&self, f: &[S]) -> Vec<S> {
        let n = self.samples.len();
        let mut out = vec![S::zero(); n];
        let periodic = self.is_periodic();
        let two = real::<S>(2.0);
        let r = |i: usize| self.samples[i].y;
        for i in 0..n {
            if !periodic && (i == 0 || i == n - 1) {
                let j = if i == 0 { 1 } else { n - 2 };
                let r1 = r(j);
                out[i] = real::<S>(4.0) * (f[j] - f[i]) / (r1 * r1);
                continue;
            }
            let im = (i + n - 1) % n;
            let ip = (i + 1) % n;
            let hm = self.segment(im).norm();
            let hp = self.segment(i).norm();
            let r_m = (r(i) + r(im)) * real::<S>(0.5);
            let r_p = (r(i) + r(ip)) * real::<S>(0.5);
            let flux = r_p * (f[ip] - f[i]) / hp - r_m * (f[i] - f[im]) / hm;
            out[i] = two * flux / ((hm + hp) * r(i));
        }
        out
    }

    /// Area-weighted axis center, mean distance to it, and the min/max sample
    /// distances (the sphere-fit series used for round-point detection).
    pub fn sphere_fit_stats(&self) -> (S, S, S, S) {
        let n = self.samples.len();
        let count = if self.is_periodic() { n } else { n - 1 };
        let half = real::<S>(0.5);
        let mut w_total = S::zero();
        let mut z_acc = S::zero();
        for i in 0..count {
            let j = (i + 1) % n;
            let w = (self.samples[i].y + self.samples[j].y) * half * self.segment(i).norm();
            w_total += w;
            z_acc += w * (self.samples[i].x + self.samples[j].x) * half;
        }
        let z_bar = z_acc / w_total;
        let dist = |p: Vec2<S>| -> S {
            let dz = p.x - z_bar;
            (dz * dz + p.y * p.y).sqrt()
        };
        let mut mean_r = S::zero();
        let mut min_r = S::max_value().unwrap();
        let mut max_r = S::zero();
        for i in 0..count {
            let j = (i + 1) % n;
            let w = (self.samples[i].y + self.samples[j].y) * half * self.segment(i).norm();
            mean_r += w * (dist(self.samples[i]) + dist(self.samples[j])) * half;
        }
        for p in &self.samples {
            min_r = min_r.min(dist(*p));
            max_r = max_r.max(dist(*p));
        }
        (z_bar, mean_r / w_total, min_r, max_r)
    }

    /// Revolve into a triangle mesh with the given azimuthal segment count.
    pub fn revolve(&self, n_az: usize) -> Result<TriangleMesh<S>> {
        crate::mesh::generate::revolve(self, n_az)
    }
}

/// Differential data per profile sample.
pub struct ProfileDifferentials<S: Real> {
    pub tangent: Vec<Vec2<S>>,
    pub normal: Vec<Vec2<S>>,
    pub kappa: Vec<S>,
    /// Scalar mean curvature (positive for spheres/cylinders).
    pub mean: Vec<S>,
    pub second_fundamental_norm: Vec<S>,
}

/// Options for a single semi-implicit profile step.
#[derive(Debug, Clone)]
pub struct AxisymStepOptions<S: Real = f64> {
    /// Neck-pinch threshold as an absolute radius.
    pub pinch_radius: S,
    /// Richardson extrapolation in time (two half steps vs one full step).
    pub richardson: bool,
}

impl<S: Real> Default for AxisymStepOptions<S> {
    fn default() -> Self {
        AxisymStepOptions {
            pinch_radius: real(1e-8),
            richardson: true,
        }
    }
}

/// One mean curvature flow step of the generating curve.
///
/// Errors with [`Error::NeckPinch`] when an interior radius falls below the
/// pinch threshold and [`Error::CapDegeneracy`] when a cap loses its first
/// ring.
pub fn mcf_step_axisym<S: Real>(
    profile: &AxisymProfile<S>,
    dt: S,
    opts: &AxisymStepOptions<S>,
) -> Result<AxisymProfile<S>> {
    if !(dt > S::zero()) {
        return Err(Error::InvalidParameter("dt must be positive".into()));
    }
    let stepped = if opts.richardson {
        let half = dt * real::<S>(0.5);
        let full = raw_step(profile, dt)?;
        let h1 = raw_profile(profile, raw_step(profile, half)?)?;
        let h2 = raw_step(&h1, half)?;
        let two = real::<S>(2.0);
        h2.iter()
            .zip(&full)
            .map(|(&(z2, v2), &(z1, v1))| (two * z2 - z1, two * v2 - v1))
            .collect()
    } else {
        raw_step(profile, dt)?
    };
    // Pinch detection must run on the raw squared radii, before profile
    // validation rejects a collapsed interior sample. Rings adjacent to a cap
    // are legitimately small (r ~ distance to the pole), so a margin of
    // samples next to each cap is excluded from the scan.
    let interior = match profile.topology() {
        ProfileTopology::CappedBoth => {
            let margin = (stepped.len() / 8).clamp(1, 6);
            margin..stepped.len() - margin
        }
        _ => 0..stepped.len(),
    };
    let min_v = interior
        .map(|i| stepped[i].1)
        .fold(S::max_value().unwrap(), |a, b| a.min(b));
    let min_r = min_v.max(S::zero()).sqrt();
    if min_r < opts.pinch_radius {
        return Err(Error::NeckPinch {
            time: dt.to_f64().unwrap_or(f64::NAN),
            min_radius: min_r.to_f64().unwrap_or(f64::NAN),
        });
    }
    raw_profile(profile, stepped)
}

/// Advance (z, v = r^2) by one frozen-coefficient semi-implicit step; returns
/// the raw per-sample pairs without validation.
fn raw_step<S: Real>(profile: &AxisymProfile<S>, dt: S) -> Result<Vec<(S, S)>> {
    let n = profile.len();
    let pts = profile.samples();
    let periodic = profile.is_periodic();
    let two = real::<S>(2.0);

    let mut zl = vec![S::zero(); n];
    let mut zd = vec![S::zero(); n];
    let mut zu = vec![S::zero(); n];
    let mut z_rhs = vec![S::zero(); n];
    let mut vl = vec![S::zero(); n];
    let mut vd = vec![S::zero(); n];
    let mut vu = vec![S::zero(); n];
    let mut v_rhs = vec![S::zero(); n];

    let r = |i: usize| pts[i].y;

    for i in 0..n {
        if !periodic && (i == 0 || i == n - 1) {
            // Cap rows: dz/dt = 4 (z_nb - z_cap) / r_nb^2, v pinned at 0.
            let j = if i == 0 { 1 } else { n - 2 };
            let r1 = r(j);
            if !(r1 > S::zero()) {
                return Err(Error::CapDegeneracy(format!(
                    "first ring at sample {j} has radius {:?}",
                    r1.to_f64()
                )));
            }
            let c = real::<S>(4.0) * dt / (r1 * r1);
            zd[i] = S::one() + c;
            if i == 0 {
                zu[i] = -c;
            } else {
                zl[i] = -c;
            }
            z_rhs[i] = pts[i].x;
            vd[i] = S::one();
            v_rhs[i] = S::zero();
            continue;
        }
        let im = (i + n - 1) % n;
        let ip = (i + 1) % n;
        let hm = profile.segment(im).norm();
        let hp = profile.segment(i).norm();
        let scale = two / (hm + hp);

        // z: conservative flux form with r weights frozen at the old state.
        let r_m = (r(i) + r(im)) * real::<S>(0.5);
        let r_p = (r(i) + r(ip)) * real::<S>(0.5);
        let a = scale * r_m / (hm * r(i));
        let c = scale * r_p / (hp * r(i));
        zl[i] = -dt * a;
        zu[i] = -dt * c;
        zd[i] = S::one() + dt * (a + c);
        z_rhs[i] = pts[i].x;

        // v = r^2: v_t = v_ss - 2.
        let av = scale / hm;
        let cv = scale / hp;
        vl[i] = -dt * av;
        vu[i] = -dt * cv;
        vd[i] = S::one() + dt * (av + cv);
        v_rhs[i] = r(i) * r(i) - two * dt;
    }

    let (z_new, v_new) = if periodic {
        if let ProfileTopology::PeriodicZ { period } = profile.topology() {
            // The z jump across the seam moves known period terms to the rhs.
            let p: S = real(period);
            z_rhs[n - 1] -= zu[n - 1] * p;
            z_rhs[0] += zl[0] * p;
        }
        (
            solve_cyclic_tridiagonal(&zl, &zd, &zu, &z_rhs)?,
            solve_cyclic_tridiagonal(&vl, &vd, &vu, &v_rhs)?,
        )
    } else {
        (
            solve_tridiagonal(&zl, &zd, &zu, &z_rhs)?,
            solve_tridiagonal(&vl, &vd, &vu, &v_rhs)?,
        )
    };

    Ok(z_new.into_iter().zip(v_new).collect())
}

/// Rebuild a profile from raw (z, v) pairs, flooring v at zero.
fn raw_profile<S: Real>(template: &AxisymProfile<S>, raw: Vec<(S, S)>) -> Result<AxisymProfile<S>> {
    let samples: Vec<Vec2<S>> = raw
        .into_iter()
        .map(|(z, v)| Vec2::new(z, v.max(S::zero()).sqrt()))
        .collect();
    AxisymProfile::new(samples, template.topology())
}

/// Resample a capped or loop profile to near-uniform arc length with local
/// quadratic interpolation; the sample count is preserved. Periodic-in-z
/// profiles stay uniform by symmetry and are returned unchanged.
pub fn resample_uniform<S: Real>(profile: &AxisymProfile<S>) -> Result<AxisymProfile<S>> {
    let pts = profile.samples();
    let n = pts.len();
    match profile.topology() {
        ProfileTopology::PeriodicZ { .. } => Ok(profile.clone()),
        ProfileTopology::CappedBoth => {
            let mut s = vec![S::zero(); n];
            for i in 1..n {
                s[i] = s[i - 1] + (pts[i] - pts[i - 1]).norm();
            }
            let total = s[n - 1];
            let mut out = Vec::with_capacity(n);
            out.push(pts[0]);
            let mut seg = 0usize;
            for k in 1..n - 1 {
                let target = total * real::<S>(k as f64 / (n - 1) as f64);
                while seg + 2 < n && s[seg + 1] < target {
                    seg += 1;
                }
                out.push(quadratic_point(pts, &s, seg, target, n, false));
            }
            out.push(pts[n - 1]);
            for p in out.iter_mut().take(n - 1).skip(1) {
                p.y = p.y.max(S::zero());
            }
            AxisymProfile::new(out, ProfileTopology::CappedBoth)
        }
        ProfileTopology::PeriodicLoop => {
            let mut s = vec![S::zero(); n + 1];
            for i in 1..=n {
                s[i] = s[i - 1] + profile.segment(i - 1).norm();
            }
            let total = s[n];
            let mut out = Vec::with_capacity(n);
            let mut seg = 0usize;
            for k in 0..n {
                let target = total * real::<S>(k as f64 / n as f64);
                while seg + 1 < n && s[seg + 1] < target {
                    seg += 1;
                }
                out.push(quadratic_point(pts, &s, seg, target, n, true));
            }
            AxisymProfile::new(out, ProfileTopology::PeriodicLoop)
        }
    }
}

/// Quadratic Lagrange interpolation through three consecutive samples around
/// segment `seg` at arc-length `target`.
fn quadratic_point<S: Real>(
    pts: &[Vec2<S>],
    s: &[S],
    seg: usize,
    target: S,
    n: usize,
    periodic: bool,
) -> Vec2<S> {
    // Stencil (seg-1, seg, seg+1) or (seg, seg+1, seg+2), whichever centers
    // the target better; clamp at the ends for capped profiles.
    let mid = (s[seg] + s[seg + 1]) * real::<S>(0.5);
    let lo = if target < mid { seg as i64 - 1 } else { seg as i64 };
    let idx = |k: i64| -> (Vec2<S>, S) {
        if periodic {
            let i = k.rem_euclid(n as i64) as usize;
            // Unwrap arc length for stencils across the seam.
            let mut sv = s[i];
            if k < 0 {
                sv = s[n] - (s[n] - s[i]);
                sv -= s[n];
            } else if k >= n as i64 {
                sv = s[i] + s[n];
            }
            (pts[i], sv)
        } else {
            let i = k.clamp(0, n as i64 - 1) as usize;
            (pts[i], s[i])
        }
    };
    let (p0, s0) = idx(lo);
    let (p1, s1) = idx(lo + 1);
    let (p2, s2) = idx(lo + 2);
    if s0 == s1 || s1 == s2 {
        // Clamped stencil at the ends: fall back to linear.
        let h = s[seg + 1] - s[seg];
        if !(h > S::zero()) {
            return pts[seg];
        }
        let u = (target - s[seg]) / h;
        return pts[seg] * (S::one() - u) + pts[(seg + 1).min(n - 1)] * u;
    }
    let l0 = (target - s1) * (target - s2) / ((s0 - s1) * (s0 - s2));
    let l1 = (target - s0) * (target - s2) / ((s1 - s0) * (s1 - s2));
    let l2 = (target - s0) * (target - s1) / ((s2 - s0) * (s2 - s1));
    p0 * l0 + p1 * l1 + p2 * l2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::generate::{profile, ShapeSpec};
    use crate::Vec3;

    fn sphere_profile(radius: f64, level: u32) -> AxisymProfile<f64> {
        profile(&ShapeSpec::Sphere {
            radius,
            center: Vec3::zeros(),
            level,
        })
        .unwrap()
    }

    #[test]
    fn sphere_profile_differentials() {
        let p = sphere_profile(2.0, 6);
        let d = p.differentials();
        for i in 0..p.len() {
            assert!(
                (d.mean[i] - 1.0).abs() < 0.01,
                "H at {i} = {} (r = {})",
                d.mean[i],
                p.samples()[i].y
            );
            assert!((d.second_fundamental_norm[i] - 2.0f64.sqrt() / 2.0).abs() < 0.01);
        }
        for (i, xn) in p.position_dot_normal().iter().enumerate() {
            assert!((xn - 2.0).abs() < 0.02, "x.n at {i} = {xn}");
        }
    }

    #[test]
    fn torus_profile_normals_point_outward() {
        let p: AxisymProfile<f64> = profile(&ShapeSpec::Torus {
            major: 2.0,
            minor: 0.5,
            level: 5,
        })
        .unwrap();
        let d = p.differentials();
        for (i, (pt, n)) in p.samples().iter().zip(&d.normal).enumerate() {
            // Outward from the tube center circle (z=0, r=2).
            let away = Vec2::new(pt.x, pt.y - 2.0).normalize();
            assert!(n.dot(&away) > 0.9, "sample {i}: n = {n:?} away = {away:?}");
        }
        // Mean curvature of the torus tube: (1/r0) + cos(theta)/(R + r0 cos).
        for (pt, h) in p.samples().iter().zip(&d.mean) {
            let cos_t = (pt.y - 2.0) / 0.5;
            let expect = 1.0 / 0.5 + cos_t / (2.0 + 0.5 * cos_t);
            assert!((h - expect).abs() < 0.05, "H {h} vs {expect}");
        }
    }

    #[test]
    fn sphere_area_from_profile() {
        let p = sphere_profile(2.0, 7);
        let expect = 16.0 * std::f64::consts::PI;
        assert!((p.area() - expect).abs() < 1e-3 * expect);
    }

    #[test]
    fn cylinder_step_is_exact() {
        let r0: f64 = 2.0;
        let n = 64;
        let period = 4.0;
        let samples: Vec<Vec2<f64>> = (0..n)
            .map(|i| Vec2::new(period * i as f64 / n as f64, r0))
            .collect();
        let p = AxisymProfile::new(samples, ProfileTopology::PeriodicZ { period }).unwrap();
        let dt = 1e-3;
        let stepped = mcf_step_axisym(&p, dt, &AxisymStepOptions::default()).unwrap();
        let expect = (r0 * r0 - 2.0 * dt).sqrt();
        for q in stepped.samples() {
            assert!((q.y - expect).abs() < 1e-13, "{} vs {expect}", q.y);
        }
    }

    #[test]
    fn sphere_single_step_matches_radius_law() {
        let p = sphere_profile(2.0, 7);
        let dt = 1e-4;
        let stepped = mcf_step_axisym(&p, dt, &AxisymStepOptions::default()).unwrap();
        let expect = (4.0 - 4.0 * dt).sqrt();
        for q in stepped.samples() {
            let rad = (q.x * q.x + q.y * q.y).sqrt();
            assert!(
                (rad - expect).abs() < 5e-7,
                "radius {rad} vs {expect} at r = {}",
                q.y
            );
        }
    }

    #[test]
    fn resample_preserves_sphere() {
        let p = sphere_profile(1.0, 6);
        let q = resample_uniform(&p).unwrap();
        assert_eq!(q.len(), p.len());
        for pt in q.samples().iter().skip(1).take(q.len() - 2) {
            let rad = (pt.x * pt.x + pt.y * pt.y).sqrt();
            assert!((rad - 1.0).abs() < 1e-6, "radius {rad}");
        }
    }

    #[test]
    fn surface_laplacian_of_constant_vanishes() {
        let p = sphere_profile(1.5, 5);
        let f = vec![3.7; p.len()];
        for v in p.surface_laplacian(&f) {
            assert!(v.abs() < 1e-9);
        }
    }
}
