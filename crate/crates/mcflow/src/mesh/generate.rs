//! Parametric shape generators.
//!
//! Refinement level `L` targets edge length ~ diameter * 2^-L. Shapes that are
//! surfaces of revolution are built from a graded generating curve and can
//! also be produced as an [`AxisymProfile`] for the 1D flow integrator.
//!
//! The spiked sphere is a unit sphere with a smooth rotationally symmetric
//! polar bump of height `l` along +z: the profile tapers from lateral
//! half-width ~w at mid-height to a rounded tip, so that on intermediate
//! scales the spike looks like a slowly narrowing tube.

use std::collections::HashMap;
use std::str::FromStr;

use crate::flow::axisym::{AxisymProfile, ProfileTopology};
use crate::mesh::TriangleMesh;
use crate::{real, Error, Real, Result, Vec2, Vec3};

/// Shape description for [`generate`]; also parseable from CLI strings like
/// `"sphere:r=1,level=4"` or `"spiked_sphere:l=5,w=0.05,level=5"`.
#[derive(Debug, Clone, PartialEq)]
pub enum ShapeSpec<S: Real = f64> {
    Sphere {
        radius: S,
        center: Vec3<S>,
        level: u32,
    },
    Ellipsoid {
        a: S,
        b: S,
        c: S,
        level: u32,
    },
    Torus {
        major: S,
        minor: S,
        level: u32,
    },
    CappedCylinder {
        radius: S,
        length: S,
        level: u32,
    },
    Dumbbell {
        neck: S,
        level: u32,
    },
    SpikedSphere {
        length: S,
        width: S,
        level: u32,
    },
}

impl<S: Real> ShapeSpec<S> {
    /// Geometric diameter used by the level -> edge-length contract.
    pub fn diameter(&self) -> S {
        let two = real::<S>(2.0);
        match *self {
            ShapeSpec::Sphere { radius, .. } => two * radius,
            ShapeSpec::Ellipsoid { a, b, c, .. } => two * a.max(b).max(c),
            ShapeSpec::Torus { major, minor, .. } => two * (major + minor),
            ShapeSpec::CappedCylinder { radius, length, .. } => length + two * radius,
            ShapeSpec::Dumbbell { .. } => two * (dumbbell_half_length::<S>() + S::one()),
            ShapeSpec::SpikedSphere { length, .. } => two + length,
        }
    }

    fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: S| -> Result<()> {
            if v > S::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "{name} must be positive and finite, got {:?}",
                    v.to_f64()
                )))
            }
        };
        match *self {
            ShapeSpec::Sphere { radius, .. } => positive("radius", radius),
            ShapeSpec::Ellipsoid { a, b, c, .. } => {
                positive("a", a)?;
                positive("b", b)?;
                positive("c", c)
            }
            ShapeSpec::Torus { major, minor, .. } => {
                positive("major radius", major)?;
                positive("minor radius", minor)?;
                if minor >= major {
                    return Err(Error::InvalidParameter(
                        "torus minor radius must be below the major radius".into(),
                    ));
                }
                Ok(())
            }
            ShapeSpec::CappedCylinder { radius, length, .. } => {
                positive("radius", radius)?;
                positive("length", length)
            }
            ShapeSpec::Dumbbell { neck, .. } => {
                positive("neck radius", neck)?;
                if neck >= S::one() {
                    return Err(Error::InvalidParameter(
                        "dumbbell neck radius must be below the bell radius 1".into(),
                    ));
                }
                Ok(())
            }
            ShapeSpec::SpikedSphere { length, width, .. } => {
                positive("spike length", length)?;
                positive("spike width", width)?;
                if width >= S::one() {
                    return Err(Error::InvalidParameter(
                        "spike width must be below the sphere radius 1".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    pub fn level(&self) -> u32 {
        match *self {
            ShapeSpec::Sphere { level, .. }
            | ShapeSpec::Ellipsoid { level, .. }
            | ShapeSpec::Torus { level, .. }
            | ShapeSpec::CappedCylinder { level, .. }
            | ShapeSpec::Dumbbell { level, .. }
            | ShapeSpec::SpikedSphere { level, .. } => level,
        }
    }

    fn target_edge(&self) -> S {
        self.diameter() / real(f64::powi(2.0, self.level() as i32))
    }
}

impl FromStr for ShapeSpec<f64> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("shape spec '{s}' missing ':'")))?;
        let mut kv: HashMap<&str, &str> = HashMap::new();
        for part in rest.split(',') {
            let (k, v) = part
                .trim()
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad key=value pair '{part}'")))?;
            kv.insert(k.trim(), v.trim());
        }
        let num = |k: &str| -> Result<f64> {
            kv.get(k)
                .ok_or_else(|| Error::Parse(format!("shape '{name}' missing key '{k}'")))?
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("key '{k}': {e}")))
        };
        let num_or = |k: &str, default: f64| -> Result<f64> {
            match kv.get(k) {
                Some(v) => v
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("key '{k}': {e}"))),
                None => Ok(default),
            }
        };
        let level = num("level")? as u32;
        let spec = match name {
            "sphere" => ShapeSpec::Sphere {
                radius: num("r")?,
                center: Vec3::new(num_or("cx", 0.0)?, num_or("cy", 0.0)?, num_or("cz", 0.0)?),
                level,
            },
            "ellipsoid" => ShapeSpec::Ellipsoid {
                a: num("a")?,
                b: num("b")?,
                c: num("c")?,
                level,
            },
            "torus" => ShapeSpec::Torus {
                major: num("R")?,
                minor: num("r")?,
                level,
            },
            "capped_cylinder" => ShapeSpec::CappedCylinder {
                radius: num("r")?,
                length: num("l")?,
                level,
            },
            "dumbbell" => ShapeSpec::Dumbbell {
                neck: num("neck")?,
                level,
            },
            "spiked_sphere" => ShapeSpec::SpikedSphere {
                length: num("l")?,
                width: num("w")?,
                level,
            },
            other => {
                return Err(Error::Parse(format!("unknown shape '{other}'")));
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Build a validated mesh for the shape.
pub fn generate<S: Real>(spec: &ShapeSpec<S>) -> Result<TriangleMesh<S>> {
    spec.validate()?;
    match *spec {
        ShapeSpec::Sphere {
            radius,
            center,
            level,
        } => {
            let (v, f) = icosphere::<S>(level);
            let vertices = v.iter().map(|p| p * radius + center).collect();
            TriangleMesh::build(vertices, f)
        }
        ShapeSpec::Ellipsoid { a, b, c, level } => {
            let (v, f) = icosphere::<S>(level);
            let vertices = v
                .iter()
                .map(|p| Vec3::new(p.x * a, p.y * b, p.z * c))
                .collect();
            TriangleMesh::build(vertices, f)
        }
        ShapeSpec::Torus { major, minor, .. } => torus_mesh(major, minor, spec.target_edge()),
        _ => {
            let profile = profile(spec)?;
            let n_az = azimuth_count(&profile, spec.target_edge());
            revolve(&profile, n_az)
        }
    }
}

/// Generating curve for shapes that are surfaces of revolution about z.
/// The torus yields a closed loop; everything else is capped on the axis.
pub fn profile<S: Real>(spec: &ShapeSpec<S>) -> Result<AxisymProfile<S>> {
    spec.validate()?;
    let target = spec.target_edge();
    match *spec {
        ShapeSpec::Sphere { radius, center, .. } => {
            let dense = dense_curve(4096, |t| {
                let phi = real::<S>(t) * S::pi();
                Vec2::new(center.z - radius * phi.cos(), radius * phi.sin())
            });
            AxisymProfile::new(
                axis_snap(uniform_curve(&dense, target), spec.diameter()),
                ProfileTopology::CappedBoth,
            )
        }
        ShapeSpec::Ellipsoid { a, b, c, .. } => {
            if (b.to_f64().unwrap() - c.to_f64().unwrap()).abs() > 1e-12 {
                return Err(Error::InvalidParameter(
                    "only ellipsoids with b = c are surfaces of revolution".into(),
                ));
            }
            // Symmetry axis along z: semi-axis a axial, b equatorial.
            let dense = dense_curve(8192, |t| {
                let phi = real::<S>(t) * S::pi();
                Vec2::new(-a * phi.cos(), b * phi.sin())
            });
            AxisymProfile::new(
                axis_snap(uniform_curve(&dense, target), spec.diameter()),
                ProfileTopology::CappedBoth,
            )
        }
        ShapeSpec::Torus { major, minor, .. } => {
            let dense = dense_curve(8192, |t| {
                let phi = real::<S>(t) * S::two_pi();
                Vec2::new(minor * phi.sin(), major + minor * phi.cos())
            });
            let mut pts = uniform_curve(&dense, target.min(minor));
            // Closed loop: drop the duplicated endpoint.
            if (pts[0] - pts[pts.len() - 1]).norm() < target * real(1e-6) {
                pts.pop();
            }
            AxisymProfile::new(pts, ProfileTopology::PeriodicLoop)
        }
        ShapeSpec::CappedCylinder { radius, length, .. } => {
            let half = length * real::<S>(0.5);
            let quarter_arc = S::frac_pi_2() * radius;
            let total = quarter_arc * real::<S>(2.0) + length;
            let dense = dense_curve(16384, |t| {
                let s = real::<S>(t) * total;
                if s < quarter_arc {
                    let phi = s / radius; // 0 at south pole
                    Vec2::new(-half - radius * phi.cos(), radius * phi.sin())
                } else if s <= quarter_arc + length {
                    Vec2::new(-half + (s - quarter_arc), radius)
                } else {
                    let phi = (s - quarter_arc - length) / radius;
                    Vec2::new(half + radius * phi.sin(), radius * phi.cos())
                }
            });
            AxisymProfile::new(
                axis_snap(uniform_curve(&dense, target), spec.diameter()),
                ProfileTopology::CappedBoth,
            )
        }
        ShapeSpec::Dumbbell { neck, .. } => {
            let dense = dumbbell_dense(neck);
            AxisymProfile::new(
                axis_snap(uniform_curve(&dense, target), spec.diameter()),
                ProfileTopology::CappedBoth,
            )
        }
        ShapeSpec::SpikedSphere { length, width, .. } => {
            let dense = spiked_sphere_dense(length, width);
            AxisymProfile::new(
                axis_snap(
                    reduce_curve(&dense, target, Some(width * real(0.35))),
                    spec.diameter(),
                ),
                ProfileTopology::CappedBoth,
            )
        }
    }
}

/// Azimuthal segment count from the largest profile radius.
fn azimuth_count<S: Real>(profile: &AxisymProfile<S>, target: S) -> usize {
    let r_max = profile
        .samples()
        .iter()
        .map(|p| p.y)
        .fold(S::zero(), |a, b| a.max(b));
    let n = (S::two_pi() * r_max / target).to_f64().unwrap_or(16.0).ceil() as usize;
    n.max(16)
}

/// Revolve a capped or loop profile about the z axis.
pub fn revolve<S: Real>(profile: &AxisymProfile<S>, n_az: usize) -> Result<TriangleMesh<S>> {
    let pts = profile.samples();
    let n_az = n_az.max(3);
    let mut vertices: Vec<Vec3<S>> = Vec::new();
    let mut faces: Vec<[usize; 3]> = Vec::new();
    let ring_of = |k: usize| -> Vec<usize> { (0..n_az).map(|j| k * n_az + j).collect() };

    let angle = |j: usize| -> (S, S) {
        let phi = S::two_pi() * real::<S>(j as f64) / real(n_az as f64);
        (phi.cos(), phi.sin())
    };

    match profile.topology() {
        ProfileTopology::PeriodicLoop => {
            let m = pts.len();
            for p in pts {
                for j in 0..n_az {
                    let (c, s) = angle(j);
                    vertices.push(Vec3::new(p.y * c, p.y * s, p.x));
                }
            }
            for k in 0..m {
                let ra = ring_of(k);
                let rb = ring_of((k + 1) % m);
                for j in 0..n_az {
                    let jn = (j + 1) % n_az;
                    faces.push([ra[j], rb[j], rb[jn]]);
                    faces.push([ra[j], rb[jn], ra[jn]]);
                }
            }
        }
        _ => {
            let m = pts.len();
            if m < 4 {
                return Err(Error::InvalidParameter("profile too short".into()));
            }
            // South pole, interior rings, north pole.
            let south = Vec3::new(S::zero(), S::zero(), pts[0].x);
            let north = Vec3::new(S::zero(), S::zero(), pts[m - 1].x);
            vertices.push(south);
            for p in &pts[1..m - 1] {
                for j in 0..n_az {
                    let (c, s) = angle(j);
                    vertices.push(Vec3::new(p.y * c, p.y * s, p.x));
                }
            }
            vertices.push(north);
            let ring = |k: usize| -> Vec<usize> { (0..n_az).map(|j| 1 + k * n_az + j).collect() };
            let rings = m - 2;
            let r0 = ring(0);
            for j in 0..n_az {
                faces.push([0, r0[(j + 1) % n_az], r0[j]]);
            }
            for k in 0..rings - 1 {
                let ra = ring(k);
                let rb = ring(k + 1);
                for j in 0..n_az {
                    let jn = (j + 1) % n_az;
                    faces.push([ra[j], rb[jn], rb[j]]);
                    faces.push([ra[j], ra[jn], rb[jn]]);
                }
            }
            let last = ring(rings - 1);
            let north_id = vertices.len() - 1;
            for j in 0..n_az {
                faces.push([north_id, last[j], last[(j + 1) % n_az]]);
            }
        }
    }
    TriangleMesh::build(vertices, faces)
}

fn torus_mesh<S: Real>(major: S, minor: S, target: S) -> Result<TriangleMesh<S>> {
    let n_ring = ((S::two_pi() * (major + minor) / target)
        .to_f64()
        .unwrap_or(16.0)
        .ceil() as usize)
        .max(16);
    let n_tube = ((S::two_pi() * minor / target).to_f64().unwrap_or(16.0).ceil() as usize).max(16);
    let mut vertices = Vec::with_capacity(n_ring * n_tube);
    for i in 0..n_ring {
        let phi = S::two_pi() * real::<S>(i as f64) / real(n_ring as f64);
        for j in 0..n_tube {
            let theta = S::two_pi() * real::<S>(j as f64) / real(n_tube as f64);
            let rad = major + minor * theta.cos();
            vertices.push(Vec3::new(
                rad * phi.cos(),
                rad * phi.sin(),
                minor * theta.sin(),
            ));
        }
    }
    let mut faces = Vec::with_capacity(2 * n_ring * n_tube);
    for i in 0..n_ring {
        let inx = (i + 1) % n_ring;
        for j in 0..n_tube {
            let jn = (j + 1) % n_tube;
            let a = i * n_tube + j;
            let b = inx * n_tube + j;
            let c = inx * n_tube + jn;
            let d = i * n_tube + jn;
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    TriangleMesh::build(vertices, faces)
}

/// Icosphere at the given subdivision level: unit radius, centered at origin.
fn icosphere<S: Real>(level: u32) -> (Vec<Vec3<S>>, Vec<[usize; 3]>) {
    let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
    let base = [
        (-1.0, phi, 0.0),
        (1.0, phi, 0.0),
        (-1.0, -phi, 0.0),
        (1.0, -phi, 0.0),
        (0.0, -1.0, phi),
        (0.0, 1.0, phi),
        (0.0, -1.0, -phi),
        (0.0, 1.0, -phi),
        (phi, 0.0, -1.0),
        (phi, 0.0, 1.0),
        (-phi, 0.0, -1.0),
        (-phi, 0.0, 1.0),
    ];
    let mut vertices: Vec<Vec3<S>> = base
        .iter()
        .map(|&(x, y, z)| Vec3::new(real(x), real(y), real(z)).normalize())
        .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..level {
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
        let mut new_faces = Vec::with_capacity(faces.len() * 4);
        for tri in &faces {
            let mut mid = [0usize; 3];
            for r in 0..3 {
                let a = tri[r];
                let b = tri[(r + 1) % 3];
                let key = (a.min(b), a.max(b));
                mid[r] = *midpoint.entry(key).or_insert_with(|| {
                    let m = (vertices[a] + vertices[b]).normalize();
                    vertices.push(m);
                    vertices.len() - 1
                });
            }
            new_faces.push([tri[0], mid[0], mid[2]]);
            new_faces.push([tri[1], mid[1], mid[0]]);
            new_faces.push([tri[2], mid[2], mid[1]]);
            new_faces.push([mid[0], mid[1], mid[2]]);
        }
        faces = new_faces;
    }
    (vertices, faces)
}

/// Sphere of radius 2 with a degree-2 zonal harmonic bump of amplitude
/// `epsilon` applied radially: r(u) = 2 + epsilon (3 u_z^2 - 1) / 2.
/// The family interpolates from the round sphere toward a prolate shape and
/// drives the roundness-vs-entropy sweeps.
pub fn perturbed_sphere<S: Real>(epsilon: S, level: u32) -> Result<TriangleMesh<S>> {
    if !epsilon.is_finite() || epsilon.abs() >= real(1.0) {
        return Err(Error::InvalidParameter(format!(
            "perturbation amplitude must satisfy |eps| < 1, got {:?}",
            epsilon.to_f64()
        )));
    }
    let (unit, faces) = icosphere::<S>(level);
    let half = real::<S>(0.5);
    let three = real::<S>(3.0);
    let two = real::<S>(2.0);
    let vertices = unit
        .iter()
        .map(|u| {
            let p2 = (three * u.z * u.z - S::one()) * half;
            u * (two + epsilon * p2)
        })
        .collect();
    TriangleMesh::build(vertices, faces)
}

/// Sample a parametric curve densely and uniformly in the parameter.
fn dense_curve<S: Real>(n: usize, f: impl Fn(f64) -> Vec2<S>) -> Vec<Vec2<S>> {
    (0..=n).map(|i| f(i as f64 / n as f64)).collect()
}

/// Resample a dense polyline at uniform arc length. Uniform spacing keeps
/// the flow integrator's nonuniform-stencil truncation error at second
/// order; the spacing respects the curvature cap 0.45 / kappa_max.
fn uniform_curve<S: Real>(dense: &[Vec2<S>], target: S) -> Vec<Vec2<S>> {
    let n = dense.len();
    let mut kappa_max = S::zero();
    for i in 1..n - 1 {
        kappa_max = kappa_max.max(circum_curvature(&dense[i - 1], &dense[i], &dense[i + 1]));
    }
    let mut spacing = target;
    if kappa_max > S::zero() {
        spacing = spacing.min(real::<S>(0.45) / kappa_max);
    }
    let mut s = vec![S::zero(); n];
    for i in 1..n {
        s[i] = s[i - 1] + (dense[i] - dense[i - 1]).norm();
    }
    let total = s[n - 1];
    let count = (total / spacing).to_f64().unwrap_or(8.0).ceil().max(8.0) as usize;
    let mut out = Vec::with_capacity(count + 1);
    out.push(dense[0]);
    let mut seg = 0usize;
    for k in 1..count {
        let target_s = total * real::<S>(k as f64 / count as f64);
        while seg + 2 < n && s[seg + 1] < target_s {
            seg += 1;
        }
        let h = s[seg + 1] - s[seg];
        let u = if h > S::zero() {
            ((target_s - s[seg]) / h).clamp(S::zero(), S::one())
        } else {
            S::zero()
        };
        out.push(dense[seg] * (S::one() - u) + dense[seg + 1] * u);
    }
    out.push(dense[n - 1]);
    out
}

/// Snap endpoint radii that are only rounding away from the axis to exactly
/// zero (sin(pi) is 1.2e-16, not 0).
fn axis_snap<S: Real>(mut pts: Vec<Vec2<S>>, scale: S) -> Vec<Vec2<S>> {
    let tol = scale * real(1e-9);
    let n = pts.len();
    if pts[0].y.abs() < tol {
        pts[0].y = S::zero();
    }
    if pts[n - 1].y.abs() < tol {
        pts[n - 1].y = S::zero();
    }
    pts
}

/// Greedy arc-length reduction of a dense polyline. The local spacing is the
/// minimum of the target edge, a curvature cap 0.5/kappa, and an aspect cap
/// tied to the azimuthal spacing at the local radius (so thin tubes stay well
/// proportioned after revolution). `min_spacing` optionally forces extra
/// resolution (used along spike shafts).
fn reduce_curve<S: Real>(dense: &[Vec2<S>], target: S, min_spacing: Option<S>) -> Vec<Vec2<S>> {
    let n = dense.len();
    let mut curvature = vec![S::zero(); n];
    for i in 1..n - 1 {
        curvature[i] = circum_curvature(&dense[i - 1], &dense[i], &dense[i + 1]);
    }
    let floor = target * real(1.0 / 128.0);
    let az_factor = real::<S>(1.5);
    let mut out = vec![dense[0]];
    let mut acc = S::zero();
    for i in 1..n {
        let seg = (dense[i] - dense[i - 1]).norm();
        acc += seg;
        let r_here = dense[i].y;
        let mut allowed = target;
        if curvature[i] > S::zero() {
            allowed = allowed.min(real::<S>(0.45) / curvature[i]);
        }
        // Radius-based cap: near the axis this grades geometrically away from
        // caps; along thin shafts it keeps triangles squat.
        allowed = allowed.min(real::<S>(1.2) * r_here + az_factor * r_here + floor);
        if let Some(ms) = min_spacing {
            allowed = allowed.max(ms);
        }
        allowed = allowed.clamp(floor, target);
        if acc >= allowed || i == n - 1 {
            out.push(dense[i]);
            acc = S::zero();
        }
    }
    out
}

fn circum_curvature<S: Real>(a: &Vec2<S>, b: &Vec2<S>, c: &Vec2<S>) -> S {
    let ab = b - a;
    let bc = c - b;
    let ac = c - a;
    let cross = (ab.x * bc.y - ab.y * bc.x).abs();
    let denom = ab.norm() * bc.norm() * ac.norm();
    if denom > S::zero() {
        real::<S>(2.0) * cross / denom
    } else {
        S::zero()
    }
}

/// Bell centers for the dumbbell (unit bells at +- this offset).
fn dumbbell_half_length<S: Real>() -> S {
    real(2.2)
}

/// Two unit bells joined by an even quartic neck, C1 at the junctions.
fn dumbbell_dense<S: Real>(neck: S) -> Vec<Vec2<S>> {
    let zc = dumbbell_half_length::<S>();
    // Junction on the bell circle at 45 degrees toward the neck.
    let inv_sqrt2 = real::<S>(std::f64::consts::FRAC_1_SQRT_2);
    let zj = zc - inv_sqrt2;
    let rj = inv_sqrt2;
    // Neck r(z) = neck + c2 z^2 + c4 z^4 matching value and slope at z = zj.
    // slope at junction (z>0 side) equals +1 (the circle's tangent there).
    let dr = rj - neck;
    let zj2 = zj * zj;
    // c2 zj^2 + c4 zj^4 = dr ; 2 c2 zj + 4 c4 zj^3 = 1
    let c4 = (zj - real::<S>(2.0) * dr / zj) / (real::<S>(2.0) * zj2 * zj);
    let c2 = (dr - c4 * zj2 * zj2) / zj2;
    let total_bell = S::pi() - S::frac_pi_4(); // arc from pole to junction: 3pi/4
    let n = 16384usize;
    let mut pts = Vec::with_capacity(2 * n);
    // South bell: angle from the south pole (z = -zc-1) to the junction.
    for i in 0..=n {
        let t = real::<S>(i as f64 / n as f64);
        let phi = t * total_bell; // 0 at pole
        let z = -zc - phi.cos();
        let r = phi.sin();
        if z <= -zj {
            pts.push(Vec2::new(z, r));
        }
    }
    // Neck.
    for i in 0..=n {
        let t = real::<S>(i as f64 / n as f64);
        let z = -zj + t * (zj + zj);
        let z2 = z * z;
        pts.push(Vec2::new(z, neck + c2 * z2 + c4 * z2 * z2));
    }
    // North bell.
    for i in 0..=n {
        let t = real::<S>(i as f64 / n as f64);
        let phi = total_bell * (S::one() - t);
        let z = zc + phi.cos();
        let r = phi.sin();
        if z >= zj {
            pts.push(Vec2::new(z, r));
        }
    }
    dedup_curve(pts)
}

/// Unit sphere with a tapered spike along +z: a straight cone flank of base
/// radius ~`w` thinning to a rounded tip at z = 1 + `l`, joined to the sphere
/// by a circular fillet. The tapered flank keeps the spike locally tube-like
/// at every height, so the tube-matching Gaussian frames see an almost-
/// cylinder whose taper angle shrinks with `w`.
fn spiked_sphere_dense<S: Real>(length: S, width: S) -> Vec<Vec2<S>> {
    let w = width.to_f64().unwrap();
    let l = length.to_f64().unwrap();
    let r_tip = 0.35 * w;
    let fillet_radius = 0.3 + 1.5 * w;

    // Flank line through the sphere-shoulder point A = (sqrt(1 - w^2), w)
    // with slope dr/dz = -tan(alpha); taper chosen so the radius falls from w
    // to ~r_tip over the spike length.
    let alpha = ((w - r_tip) / l).atan();
    let (ca, sa) = (alpha.cos(), alpha.sin());
    let t_dir = (ca, -sa); // up the spike
    let n_dir = (sa, ca); // away from the axis side
    let a_pt = ((1.0 - w * w).sqrt(), w);

    // Fillet circle tangent to the flank (center offset R_f along n) and to
    // the unit sphere (|C| = 1 + R_f): solve |A + s t + R_f n|^2 = (1+R_f)^2.
    let cx0 = a_pt.0 + fillet_radius * n_dir.0;
    let cy0 = a_pt.1 + fillet_radius * n_dir.1;
    // (cx0 + s tx)^2 + (cy0 + s ty)^2 = (1 + R_f)^2, |t| = 1.
    let b_half = cx0 * t_dir.0 + cy0 * t_dir.1;
    let c_term = cx0 * cx0 + cy0 * cy0 - (1.0 + fillet_radius) * (1.0 + fillet_radius);
    let disc = (b_half * b_half - c_term).max(0.0);
    // The root sliding down the flank toward the sphere.
    let s_tan = -b_half + disc.sqrt();
    let center = (cx0 + s_tan * t_dir.0, cy0 + s_tan * t_dir.1);
    let p_line = (a_pt.0 + s_tan * t_dir.0, a_pt.1 + s_tan * t_dir.1);
    let c_norm = (center.0 * center.0 + center.1 * center.1).sqrt();
    let p_sph = (center.0 / c_norm, center.1 / c_norm);

    // Tip cap: circle of radius r_tip centered on the axis, tangent to the
    // flank, apex pinned at z = 1 + l.
    let z_apex = 1.0 + l;
    let z_tip_center = z_apex - r_tip;
    // Flank tangency with the tip circle: the flank points with distance
    // r_tip from (z_tip_center, 0); walk the line to the closest approach.
    let rel = (z_tip_center - a_pt.0, -a_pt.1);
    let s_closest = rel.0 * t_dir.0 + rel.1 * t_dir.1;
    let foot = (a_pt.0 + s_closest * t_dir.0, a_pt.1 + s_closest * t_dir.1);
    let gap = ((z_tip_center - foot.0).powi(2) + foot.1 * foot.1).sqrt();
    let s_tip = s_closest - (gap * gap - r_tip * r_tip).max(0.0).sqrt();
    let p_tip_line = (a_pt.0 + s_tip * t_dir.0, a_pt.1 + s_tip * t_dir.1);
    // Angle of the tangency point on the tip circle.
    let tip_start_angle = (p_tip_line.1 - 0.0).atan2(p_tip_line.0 - z_tip_center);

    let mut pts: Vec<Vec2<S>> = Vec::with_capacity(40000);
    let push = |pts: &mut Vec<Vec2<S>>, z: f64, r: f64| {
        pts.push(Vec2::new(real(z), real(r.max(0.0))));
    };

    // 1. Sphere arc from the south pole (z = -1) to the fillet tangency.
    let phi_sph = p_sph.1.atan2(p_sph.0); // polar angle from +z of tangency
    let n1 = 8000;
    for i in 0..=n1 {
        let phi = std::f64::consts::PI - (std::f64::consts::PI - phi_sph) * i as f64 / n1 as f64;
        push(&mut pts, phi.cos(), phi.sin());
    }
    // 2. Fillet arc from the sphere tangency to the flank tangency (concave:
    // center outside the surface).
    let a0 = (p_sph.0 - center.0).atan2(p_sph.1 - center.1);
    let a1 = (p_line.0 - center.0).atan2(p_line.1 - center.1);
    let n2 = 8000;
    for i in 1..=n2 {
        let a = a0 + (a1 - a0) * i as f64 / n2 as f64;
        push(
            &mut pts,
            center.0 + fillet_radius * a.sin(),
            center.1 + fillet_radius * a.cos(),
        );
    }
    // 3. Straight flank from the fillet to the tip tangency.
    let n3 = 12000;
    for i in 1..=n3 {
        let s = s_tan + (s_tip - s_tan) * i as f64 / n3 as f64;
        push(
            &mut pts,
            a_pt.0 + s * t_dir.0,
            a_pt.1 + s * t_dir.1,
        );
    }
    // 4. Tip cap from the tangency angle down to the apex on the axis.
    let n4 = 4000;
    for i in 1..=n4 {
        let a = tip_start_angle * (1.0 - i as f64 / n4 as f64);
        push(
            &mut pts,
            z_tip_center + r_tip * a.cos(),
            r_tip * a.sin(),
        );
    }
    dedup_curve(pts)
}

fn dedup_curve<S: Real>(pts: Vec<Vec2<S>>) -> Vec<Vec2<S>> {
    let mut out: Vec<Vec2<S>> = Vec::with_capacity(pts.len());
    for p in pts {
        if out
            .last()
            .map(|q| (p - q).norm() > real(1e-14))
            .unwrap_or(true)
        {
            out.push(p);
        }
    }
    out
}
