//! Discrete differential operators: outward unit normals, the mean curvature
//! vector from the cotangent Laplacian with mixed vertex areas, and a
//! second-fundamental-form norm from local quadric fits.
//!
//! Sign conventions: normals point away from the enclosed volume, the scalar
//! mean curvature H = div(n) is positive on spheres, and the mean curvature
//! vector is H_vec = -H n (it points toward the center of a sphere).

use nalgebra::{SMatrix, SVector};

use crate::linalg::Csr;
use crate::mesh::{FieldRole, TriangleMesh, VertexScalars, VertexVectors};
use crate::{real, Error, Real, Result, Vec3};

/// Outward unit vertex normals (area-weighted face normal average).
pub fn outward_normals<S: Real>(mesh: &TriangleMesh<S>) -> VertexVectors<S> {
    let mut normals = vec![Vec3::zeros(); mesh.n_vertices()];
    for tri in mesh.faces() {
        let a = mesh.position(tri[0]);
        let b = mesh.position(tri[1]);
        let c = mesh.position(tri[2]);
        let fa = (b - a).cross(&(c - a)); // area-weighted
        normals[tri[0]] += fa;
        normals[tri[1]] += fa;
        normals[tri[2]] += fa;
    }
    for n in normals.iter_mut() {
        let len = n.norm();
        if len > S::zero() {
            *n /= len;
        }
    }
    VertexVectors::new(mesh, FieldRole::Normal, normals)
}

/// Cotangent of the angle at `a` in triangle (a, b, c).
fn cotangent<S: Real>(a: &Vec3<S>, b: &Vec3<S>, c: &Vec3<S>) -> S {
    let u = b - a;
    let v = c - a;
    let cross = u.cross(&v).norm();
    if cross <= S::zero() {
        return S::zero();
    }
    u.dot(&v) / cross
}

/// Mixed (Voronoi with obtuse fallback) vertex areas.
pub fn mixed_vertex_areas<S: Real>(mesh: &TriangleMesh<S>) -> Vec<S> {
    let half = real::<S>(0.5);
    let quarter = real::<S>(0.25);
    let eighth = real::<S>(0.125);
    let mut areas = vec![S::zero(); mesh.n_vertices()];
    for tri in mesh.faces() {
        let p = [
            mesh.position(tri[0]),
            mesh.position(tri[1]),
            mesh.position(tri[2]),
        ];
        let area = super::triangle_area(&p[0], &p[1], &p[2]);
        // Obtuse test per corner via dot products.
        let mut obtuse_corner: Option<usize> = None;
        for r in 0..3 {
            let u = p[(r + 1) % 3] - p[r];
            let v = p[(r + 2) % 3] - p[r];
            if u.dot(&v) < S::zero() {
                obtuse_corner = Some(r);
                break;
            }
        }
        match obtuse_corner {
            Some(oc) => {
                for r in 0..3 {
                    areas[tri[r]] += if r == oc { area * half } else { area * quarter };
                }
            }
            None => {
                // Voronoi area: 1/8 sum of cot(opposite) * |edge|^2 per corner.
                for r in 0..3 {
                    let a = p[r];
                    let b = p[(r + 1) % 3];
                    let c = p[(r + 2) % 3];
                    let cot_b = cotangent(&b, &c, &a);
                    let cot_c = cotangent(&c, &a, &b);
                    let ab2 = (b - a).norm_squared();
                    let ac2 = (c - a).norm_squared();
                    areas[tri[r]] += (ac2 * cot_b + ab2 * cot_c) * eighth;
                }
            }
        }
    }
    areas
}

/// Symmetric cotangent stiffness matrix K with
/// K_ii = sum_j w_ij, K_ij = -w_ij, w_ij = (cot a_ij + cot b_ij)/2.
///
/// For vertex positions x the discrete Laplace-Beltrami is
/// (Delta x)_i = -(K x)_i / area_i.
pub fn cotan_stiffness<S: Real>(mesh: &TriangleMesh<S>) -> Csr<S> {
    let half = real::<S>(0.5);
    let mut triplets: Vec<(usize, usize, S)> = Vec::with_capacity(mesh.n_faces() * 12);
    for tri in mesh.faces() {
        let p = [
            mesh.position(tri[0]),
            mesh.position(tri[1]),
            mesh.position(tri[2]),
        ];
        for r in 0..3 {
            let i = tri[(r + 1) % 3];
            let j = tri[(r + 2) % 3];
            let w = cotangent(&p[r], &p[(r + 1) % 3], &p[(r + 2) % 3]) * half;
            triplets.push((i, i, w));
            triplets.push((j, j, w));
            triplets.push((i, j, -w));
            triplets.push((j, i, -w));
        }
    }
    Csr::from_triplets(mesh.n_vertices(), &triplets)
}

/// Mean curvature vector H_vec = Delta x = -(K x)/area per vertex.
///
/// On a sphere of radius R with outward normals this is -(2/R) n.
pub fn mean_curvature_vector<S: Real>(mesh: &TriangleMesh<S>) -> Result<VertexVectors<S>> {
    let areas = mixed_vertex_areas(mesh);
    let floor = mesh.diameter() * mesh.diameter() * real(1e-18);
    let stiffness = cotan_stiffness(mesh);
    let n = mesh.n_vertices();
    let mut comp = vec![S::zero(); n];
    let mut out = vec![Vec3::zeros(); n];
    for k in 0..3 {
        let coords: Vec<S> = mesh.vertices().iter().map(|v| v[k]).collect();
        stiffness.mul_vec(&coords, &mut comp);
        for i in 0..n {
            out[i][k] = -comp[i];
        }
    }
    for (i, &a) in areas.iter().enumerate() {
        if !(a > floor) {
            return Err(Error::NumericalDegeneracy { vertex: i });
        }
        out[i] /= a;
    }
    Ok(VertexVectors::new(mesh, FieldRole::MeanCurvature, out))
}

/// Signed scalar mean curvature H = -H_vec . n (positive on spheres).
pub fn mean_curvature_scalar<S: Real>(
    mesh: &TriangleMesh<S>,
    h_vec: &VertexVectors<S>,
    normals: &VertexVectors<S>,
) -> VertexScalars<S> {
    let values = h_vec
        .values
        .iter()
        .zip(&normals.values)
        .map(|(h, n)| -h.dot(n))
        .collect();
    VertexScalars::new(mesh, FieldRole::MeanCurvature, values)
}

/// Collect the two-ring neighborhood of `v` (excluding `v` itself).
fn two_ring<S: Real>(mesh: &TriangleMesh<S>, v: usize) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for &w in mesh.ring(v) {
        out.push(w);
        for &u in mesh.ring(w) {
            if u != v {
                out.push(u);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Norm of the second fundamental form |A| = sqrt(k1^2 + k2^2) per vertex,
/// estimated by a least-squares quadric fit over the two-ring in the tangent
/// frame of the vertex normal.
pub fn second_fundamental_norm<S: Real>(mesh: &TriangleMesh<S>) -> Result<VertexScalars<S>> {
    let normals = outward_normals(mesh);
    second_fundamental_norm_with(mesh, &normals)
}

/// Same as [`second_fundamental_norm`], reusing precomputed normals.
pub fn second_fundamental_norm_with<S: Real>(
    mesh: &TriangleMesh<S>,
    normals: &VertexVectors<S>,
) -> Result<VertexScalars<S>> {
    let mut values = vec![S::zero(); mesh.n_vertices()];
    for v in 0..mesh.n_vertices() {
        values[v] = quadric_fit_norm(mesh, normals, v)?;
    }
    Ok(VertexScalars::new(
        mesh,
        FieldRole::SecondFundamentalNorm,
        values,
    ))
}

fn quadric_fit_norm<S: Real>(
    mesh: &TriangleMesh<S>,
    normals: &VertexVectors<S>,
    v: usize,
) -> Result<S> {
    let neighbors = two_ring(mesh, v);
    if neighbors.len() < 6 {
        return Err(Error::InsufficientNeighborhood {
            vertex: v,
            found: neighbors.len(),
        });
    }
    let p = mesh.position(v);
    let n = normals.values[v];
    // Tangent frame.
    let helper = if n.x.abs() < real(0.9) {
        Vec3::new(S::one(), S::zero(), S::zero())
    } else {
        Vec3::new(S::zero(), S::one(), S::zero())
    };
    let t1 = n.cross(&helper).normalize();
    let t2 = n.cross(&t1);

    // Height h(u1, u2) ~ c0 + c1 u1 + c2 u2 + c3 u1^2 + c4 u1 u2 + c5 u2^2.
    let mut ata = SMatrix::<S, 6, 6>::zeros();
    let mut atb = SVector::<S, 6>::zeros();
    for &q in &neighbors {
        let d = mesh.position(q) - p;
        let u1 = d.dot(&t1);
        let u2 = d.dot(&t2);
        let h = d.dot(&n);
        let row = [S::one(), u1, u2, u1 * u1, u1 * u2, u2 * u2];
        for r in 0..6 {
            for c in 0..6 {
                ata[(r, c)] += row[r] * row[c];
            }
            atb[r] += row[r] * h;
        }
    }
    let coeffs = ata
        .lu()
        .solve(&atb)
        .ok_or(Error::InsufficientNeighborhood {
            vertex: v,
            found: neighbors.len(),
        })?;

    // Shape operator of the graph z = h(u1, u2) at the origin with gradient
    // (g1, g2): W = G^{-1} II, |A|^2 = tr(W^2).
    let g1 = coeffs[1];
    let g2 = coeffs[2];
    let denom = (S::one() + g1 * g1 + g2 * g2).sqrt();
    let two = real::<S>(2.0);
    let ii = SMatrix::<S, 2, 2>::new(
        two * coeffs[3] / denom,
        coeffs[4] / denom,
        coeffs[4] / denom,
        two * coeffs[5] / denom,
    );
    let metric = SMatrix::<S, 2, 2>::new(
        S::one() + g1 * g1,
        g1 * g2,
        g1 * g2,
        S::one() + g2 * g2,
    );
    let w = metric
        .try_inverse()
        .ok_or(Error::NumericalDegeneracy { vertex: v })?
        * ii;
    let tr_w2 = (w * w).trace();
    Ok(tr_w2.max(S::zero()).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::generate::{generate, ShapeSpec};

    fn sphere(radius: f64, level: u32) -> TriangleMesh<f64> {
        generate(&ShapeSpec::Sphere {
            radius,
            center: Vec3::zeros(),
            level,
        })
        .unwrap()
    }

    #[test]
    fn sphere_normals_are_radial() {
        let mesh = sphere(1.0, 4);
        let normals = outward_normals(&mesh);
        for (v, n) in normals.values.iter().enumerate() {
            let radial = mesh.position(v).normalize();
            assert!(
                (n - radial).norm() < 1e-2,
                "vertex {v}: normal {n:?} vs radial {radial:?}"
            );
        }
    }

    #[test]
    fn ellipsoid_axis_normal_is_axial() {
        let mesh: TriangleMesh<f64> = generate(&ShapeSpec::Ellipsoid {
            a: 2.0,
            b: 1.0,
            c: 1.0,
            level: 3,
        })
        .unwrap();
        let normals = outward_normals(&mesh);
        // Find the vertex closest to (2, 0, 0).
        let target = Vec3::new(2.0, 0.0, 0.0);
        let (v, _) = mesh
            .vertices()
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                (*a - target)
                    .norm()
                    .partial_cmp(&(*b - target).norm())
                    .unwrap()
            })
            .unwrap();
        let n = normals.values[v];
        assert!((n - Vec3::new(1.0, 0.0, 0.0)).norm() < 2e-2, "normal {n:?}");
    }

    #[test]
    fn sphere_mean_curvature_magnitude_and_direction() {
        // |H_vec| = 2/R within 1%, pointing inward.
        for &(radius, level) in &[(2.0, 4u32), (1.0, 4u32)] {
            let mesh = sphere(radius, level);
            let h = mean_curvature_vector(&mesh).unwrap();
            let expect = 2.0 / radius;
            for (v, hv) in h.values.iter().enumerate() {
                let mag = hv.norm();
                assert!(
                    (mag - expect).abs() < 0.01 * expect,
                    "vertex {v}: |H| = {mag}, expected {expect}"
                );
                let inward = -mesh.position(v).normalize();
                assert!(hv.normalize().dot(&inward) > 0.99);
            }
        }
    }

    #[test]
    fn flat_region_has_zero_mean_curvature() {
        // Subdivided cube: interior vertices of each face are flat.
        let mesh = cube_mesh(4);
        let h = mean_curvature_vector(&mesh).unwrap();
        let mut checked = 0;
        for v in 0..mesh.n_vertices() {
            let p = mesh.position(v);
            // Strictly interior to the +z face.
            if (p.z - 1.0).abs() < 1e-12 && p.x.abs() < 0.7 && p.y.abs() < 0.7 {
                assert!(h.values[v].norm() < 1e-10, "vertex {v}: {:?}", h.values[v]);
                checked += 1;
            }
        }
        assert!(checked > 4);
    }

    #[test]
    fn second_fundamental_norm_on_spheres() {
        for &(radius, tol) in &[(2.0f64, 0.02), (1.0, 0.02)] {
            let mesh = sphere(radius, 4);
            let a = second_fundamental_norm(&mesh).unwrap();
            let expect = (2.0f64).sqrt() / radius;
            for (v, &val) in a.values.iter().enumerate() {
                assert!(
                    (val - expect).abs() < tol * expect,
                    "vertex {v}: |A| = {val}, expected {expect}"
                );
            }
        }
    }

    #[test]
    fn second_fundamental_norm_on_cylinder_tube() {
        let mesh = generate(&ShapeSpec::CappedCylinder {
            radius: (2.0f64).sqrt(),
            length: 8.0,
            level: 6,
        })
        .unwrap();
        let a = second_fundamental_norm(&mesh).unwrap();
        let expect = 1.0 / (2.0f64).sqrt();
        let mut checked = 0;
        for (v, &val) in a.values.iter().enumerate() {
            if mesh.position(v).z.abs() < 2.0 {
                assert!(
                    (val - expect).abs() < 0.03 * expect,
                    "vertex {v}: |A| = {val}, expected {expect}"
                );
                checked += 1;
            }
        }
        assert!(checked > 20);
    }

    #[test]
    fn total_mean_curvature_is_divergence_free() {
        let mesh = sphere(1.5, 3);
        let h = mean_curvature_vector(&mesh).unwrap();
        let areas = mixed_vertex_areas(&mesh);
        let mut total = Vec3::zeros();
        for (hv, &a) in h.values.iter().zip(&areas) {
            total += hv * a;
        }
        let bound = 1e-6 * mesh.total_area() / mesh.diameter();
        assert!(total.norm() < bound, "total {total:?} bound {bound}");
    }

    #[test]
    fn refinement_improves_mean_curvature_at_order_1p5() {
        let radius = 2.0;
        let expect = 2.0 / radius;
        let mut errors = Vec::new();
        for level in [3, 4, 5] {
            let mesh = sphere(radius, level);
            let h = mean_curvature_vector(&mesh).unwrap();
            let err = h
                .values
                .iter()
                .map(|hv| (hv.norm() - expect).abs())
                .fold(0.0f64, f64::max);
            errors.push(err);
        }
        let order1 = (errors[0] / errors[1]).log2();
        let order2 = (errors[1] / errors[2]).log2();
        assert!(
            order1 >= 1.5 && order2 >= 1.5,
            "observed orders {order1:.2}, {order2:.2} (errors {errors:?})"
        );
    }

    #[test]
    fn rigid_motion_equivariance() {
        let mesh = sphere(1.0, 3);
        let rot = nalgebra::Rotation3::from_euler_angles(0.3, -0.7, 1.1);
        let shift = Vec3::new(0.4, -2.0, 0.9);
        let moved = mesh.map_vertices(|p| rot * p + shift).unwrap();

        let h0 = mean_curvature_vector(&mesh).unwrap();
        let h1 = mean_curvature_vector(&moved).unwrap();
        let a0 = second_fundamental_norm(&mesh).unwrap();
        let a1 = second_fundamental_norm(&moved).unwrap();
        let n0 = outward_normals(&mesh);
        let n1 = outward_normals(&moved);
        for v in 0..mesh.n_vertices() {
            assert!((h0.values[v].norm() - h1.values[v].norm()).abs() < 1e-10);
            assert!((a0.values[v] - a1.values[v]).abs() < 1e-10);
            assert!((rot * n0.values[v] - n1.values[v]).norm() < 1e-10);
        }
    }

    #[test]
    fn scaling_covariance() {
        let mesh = sphere(1.0, 3);
        let scale = 3.7;
        let scaled = mesh.scaled(scale).unwrap();
        let h0 = mean_curvature_vector(&mesh).unwrap();
        let h1 = mean_curvature_vector(&scaled).unwrap();
        let a0 = second_fundamental_norm(&mesh).unwrap();
        let a1 = second_fundamental_norm(&scaled).unwrap();
        for v in 0..mesh.n_vertices() {
            let m0 = h0.values[v].norm();
            let m1 = h1.values[v].norm();
            assert!((m1 * scale - m0).abs() <= 1e-10 * m0.max(1.0));
            assert!((a1.values[v] * scale - a0.values[v]).abs() <= 1e-10 * a0.values[v].max(1.0));
        }
    }

    /// Axis-aligned cube [-1,1]^3 with each face an n x n grid.
    fn cube_mesh(n: usize) -> TriangleMesh<f64> {
        let mut vertices: Vec<Vec3<f64>> = Vec::new();
        let mut faces: Vec<[usize; 3]> = Vec::new();
        let mut index = std::collections::HashMap::new();
        let mut vid = |vertices: &mut Vec<Vec3<f64>>, p: [i64; 3]| -> usize {
            *index.entry(p).or_insert_with(|| {
                let scale = 1.0 / n as f64;
                vertices.push(Vec3::new(
                    p[0] as f64 * scale,
                    p[1] as f64 * scale,
                    p[2] as f64 * scale,
                ));
                vertices.len() - 1
            })
        };
        let n_i = n as i64;
        // Each face: fixed axis at +-n, grid in the other two.
        for axis in 0..3usize {
            for &side in &[-1i64, 1i64] {
                for i in -n_i..n_i {
                    for j in -n_i..n_i {
                        let corner = |di: i64, dj: i64| -> [i64; 3] {
                            let mut p = [0i64; 3];
                            p[axis] = side * n_i;
                            p[(axis + 1) % 3] = i + di;
                            p[(axis + 2) % 3] = j + dj;
                            p
                        };
                        let v00 = vid(&mut vertices, corner(0, 0));
                        let v10 = vid(&mut vertices, corner(1, 0));
                        let v01 = vid(&mut vertices, corner(0, 1));
                        let v11 = vid(&mut vertices, corner(1, 1));
                        if side > 0 {
                            faces.push([v00, v10, v11]);
                            faces.push([v00, v11, v01]);
                        } else {
                            faces.push([v00, v11, v10]);
                            faces.push([v00, v01, v11]);
                        }
                    }
                }
            }
        }
        TriangleMesh::build(vertices, faces).unwrap()
    }
}
