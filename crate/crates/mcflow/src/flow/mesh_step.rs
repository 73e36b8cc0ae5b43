//! Semi-implicit mean curvature flow step for triangle meshes and a minimal
//! uniform-edge remesher.

use std::collections::HashMap;

use crate::linalg::{conjugate_gradient, Csr};
use crate::mesh::ops::{cotan_stiffness, mixed_vertex_areas, outward_normals};
use crate::mesh::TriangleMesh;
use crate::{real, Error, Real, Result, Vec3};

#[derive(Debug, Clone)]
pub struct MeshStepOptions<S: Real = f64> {
    /// Stability cap: dt must satisfy dt <= stability_factor * min_edge^2.
    pub stability_factor: S,
    /// Relative CG residual tolerance.
    pub cg_tol: S,
    pub cg_max_iter: usize,
    /// Tangential smoothing after the step (never moves vertices normally).
    pub tangential_relaxation: bool,
    /// Minimum triangle angle (degrees) below which the step fails.
    pub quality_min_angle_deg: S,
}

impl<S: Real> Default for MeshStepOptions<S> {
    fn default() -> Self {
        MeshStepOptions {
            stability_factor: real(0.5),
            cg_tol: real(1e-10),
            cg_max_iter: 500,
            tangential_relaxation: false,
            quality_min_angle_deg: real(2.0),
        }
    }
}

/// One semi-implicit step: solve (M + dt K) x_new = M x_old per coordinate,
/// with the cotangent stiffness K and mixed vertex areas M frozen at x_old.
pub fn mcf_step_mesh<S: Real>(
    mesh: &TriangleMesh<S>,
    dt: S,
    opts: &MeshStepOptions<S>,
) -> Result<TriangleMesh<S>> {
    if !(dt > S::zero()) {
        return Err(Error::InvalidParameter("dt must be positive".into()));
    }
    let min_edge = mesh.min_edge_length();
    let cap = opts.stability_factor * min_edge * min_edge;
    if dt > cap {
        return Err(Error::InvalidParameter(format!(
            "dt {:?} above stability cap {:?} (= {:?} * min_edge^2)",
            dt.to_f64(),
            cap.to_f64(),
            opts.stability_factor.to_f64()
        )));
    }

    let n = mesh.n_vertices();
    let areas = mixed_vertex_areas(mesh);
    let stiffness = cotan_stiffness(mesh);

    // A = M + dt K.
    let mut data = stiffness.data.clone();
    for i in 0..data.len() {
        data[i] *= dt;
    }
    let mut a = Csr {
        n,
        indptr: stiffness.indptr.clone(),
        indices: stiffness.indices.clone(),
        data,
    };
    for row in 0..n {
        for k in a.indptr[row]..a.indptr[row + 1] {
            if a.indices[k] as usize == row {
                a.data[k] += areas[row];
            }
        }
    }

    let mut new_positions = vec![Vec3::zeros(); n];
    let mut rhs = vec![S::zero(); n];
    let mut sol = vec![S::zero(); n];
    for comp in 0..3 {
        for i in 0..n {
            rhs[i] = areas[i] * mesh.position(i)[comp];
            sol[i] = mesh.position(i)[comp];
        }
        conjugate_gradient(&a, &rhs, &mut sol, opts.cg_tol, opts.cg_max_iter)?;
        for i in 0..n {
            new_positions[i][comp] = sol[i];
        }
    }

    let mut stepped = mesh.with_positions_unchecked(new_positions);
    if opts.tangential_relaxation {
        stepped = tangential_relax(&stepped);
    }

    let min_angle = stepped.min_angle_deg();
    if min_angle < opts.quality_min_angle_deg {
        return Err(Error::QualityCollapse {
            min_angle_deg: min_angle.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(stepped)
}

/// Move each vertex toward its one-ring centroid, projected onto the tangent
/// plane so the normal displacement is exactly zero (up to rounding).
fn tangential_relax<S: Real>(mesh: &TriangleMesh<S>) -> TriangleMesh<S> {
    let normals = outward_normals(mesh);
    let lambda = real::<S>(0.3);
    let mut out = Vec::with_capacity(mesh.n_vertices());
    for v in 0..mesh.n_vertices() {
        let p = mesh.position(v);
        let ring = mesh.ring(v);
        if ring.is_empty() {
            out.push(p);
            continue;
        }
        let mut centroid = Vec3::zeros();
        for &w in ring {
            centroid += mesh.position(w);
        }
        centroid /= real::<S>(ring.len() as f64);
        let delta = (centroid - p) * lambda;
        let n = normals.values[v];
        let tangential = delta - n * delta.dot(&n);
        out.push(p + tangential);
    }
    mesh.with_positions_unchecked(out)
}

/// Remeshing policy: split edges above 4/3 of the target and collapse edges
/// below 4/5 of it, subject to a normal-displacement budget.
#[derive(Debug, Clone)]
pub struct RemeshPolicy<S: Real = f64> {
    pub target_edge: S,
    /// Skip collapses whose estimated normal displacement exceeds this.
    pub displacement_budget: S,
}

/// One split+collapse pass toward uniform edge length. Collapses are applied
/// only when the local link condition holds, no face flips, and the estimated
/// normal displacement (local curvature times edge squared) stays within
/// budget. Returns the rebuilt, revalidated mesh.
pub fn remesh_uniform<S: Real>(
    mesh: &TriangleMesh<S>,
    policy: &RemeshPolicy<S>,
) -> Result<TriangleMesh<S>> {
    let mut vertices: Vec<Vec3<S>> = mesh.vertices().to_vec();
    let mut faces: Vec<[usize; 3]> = mesh.faces().to_vec();

    // Split pass.
    let long_edge = policy.target_edge * real(4.0 / 3.0);
    let mut edge_faces: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (f, tri) in faces.iter().enumerate() {
        for r in 0..3 {
            let a = tri[r];
            let b = tri[(r + 1) % 3];
            edge_faces.entry((a.min(b), a.max(b))).or_default().push(f);
        }
    }
    let mut candidates: Vec<(usize, usize)> = edge_faces
        .keys()
        .copied()
        .filter(|&(a, b)| (vertices[a] - vertices[b]).norm() > long_edge)
        .collect();
    candidates.sort_unstable();
    let mut face_dirty = vec![false; faces.len()];
    for (a, b) in candidates {
        let incident = &edge_faces[&(a, b)];
        if incident.len() != 2 || incident.iter().any(|&f| face_dirty[f]) {
            continue;
        }
        let mid = (vertices[a] + vertices[b]) * real::<S>(0.5);
        let m = vertices.len();
        vertices.push(mid);
        for &f in incident {
            face_dirty[f] = true;
            let tri = faces[f];
            // Replace (.., a, b, ..) with two triangles through m.
            let pos_a = tri.iter().position(|&v| v == a).unwrap();
            let new_tri_a = {
                let mut t = tri;
                t[pos_a] = m;
                t
            };
            let pos_b = tri.iter().position(|&v| v == b).unwrap();
            let new_tri_b = {
                let mut t = tri;
                t[pos_b] = m;
                t
            };
            faces[f] = new_tri_a;
            faces.push(new_tri_b);
            face_dirty.push(true);
        }
    }

    let mesh = TriangleMesh::build(vertices, faces)?;

    // Collapse pass on the rebuilt mesh.
    let short_edge = policy.target_edge * real(4.0 / 5.0);
    let curvature = crate::mesh::ops::second_fundamental_norm(&mesh)
        .map(|f| f.values)
        .unwrap_or_else(|_| vec![S::zero(); mesh.n_vertices()]);
    let mut vertices: Vec<Vec3<S>> = mesh.vertices().to_vec();
    let mut faces: Vec<[usize; 3]> = mesh.faces().to_vec();
    let mut vertex_dirty = vec![false; vertices.len()];
    let mut removed = vec![false; faces.len()];
    let mut remap: Vec<usize> = (0..vertices.len()).collect();

    let mut edges: Vec<(usize, usize)> = mesh
        .edges()
        .iter()
        .map(|e| (e.a, e.b))
        .filter(|&(a, b)| (vertices[a] - vertices[b]).norm() < short_edge)
        .collect();
    edges.sort_unstable();
    for (a, b) in edges {
        if vertex_dirty[a] || vertex_dirty[b] {
            continue;
        }
        // Link condition: common ring neighbors must be exactly the two
        // opposite vertices of the shared faces.
        let ring_a: std::collections::HashSet<usize> = mesh.ring(a).iter().copied().collect();
        let common: Vec<usize> = mesh
            .ring(b)
            .iter()
            .copied()
            .filter(|w| ring_a.contains(w))
            .collect();
        if common.len() != 2 {
            continue;
        }
        // Budget: displacement ~ curvature * edge^2.
        let edge_len = (vertices[a] - vertices[b]).norm();
        let kappa = curvature[a].max(curvature[b]);
        if kappa * edge_len * edge_len > policy.displacement_budget {
            continue;
        }
        let mid = (vertices[a] + vertices[b]) * real::<S>(0.5);
        // Reject if any surviving face would flip its normal.
        let mut ok = true;
        for &f in mesh.faces_of_vertex(a).iter().chain(mesh.faces_of_vertex(b)) {
            let tri = mesh.faces()[f];
            if tri.contains(&a) && tri.contains(&b) {
                continue; // removed below
            }
            let old_n = face_normal(&vertices, &tri);
            let new_tri: Vec<Vec3<S>> = tri
                .iter()
                .map(|&v| if v == a || v == b { mid } else { vertices[v] })
                .collect();
            let new_n = (new_tri[1] - new_tri[0]).cross(&(new_tri[2] - new_tri[0]));
            if old_n.dot(&new_n) <= S::zero() {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        vertices[a] = mid;
        remap[b] = a;
        vertex_dirty[a] = true;
        vertex_dirty[b] = true;
        for &w in mesh.ring(a).iter().chain(mesh.ring(b)) {
            vertex_dirty[w] = true;
        }
        for &f in mesh.faces_of_vertex(b) {
            let tri = mesh.faces()[f];
            if tri.contains(&a) {
                removed[f] = true;
            }
        }
    }
    for (f, tri) in faces.iter_mut().enumerate() {
        if removed[f] {
            continue;
        }
        for v in tri.iter_mut() {
            *v = remap[*v];
        }
    }
    let faces: Vec<[usize; 3]> = faces
        .into_iter()
        .enumerate()
        .filter(|&(f, _)| !removed[f])
        .map(|(_, t)| t)
        .collect();
    // Drop unreferenced vertices and rebuild.
    let mut used = vec![false; vertices.len()];
    for tri in &faces {
        for &v in tri {
            used[v] = true;
        }
    }
    let mut new_index = vec![usize::MAX; vertices.len()];
    let mut compact = Vec::new();
    for (v, &u) in used.iter().enumerate() {
        if u {
            new_index[v] = compact.len();
            compact.push(vertices[v]);
        }
    }
    let faces: Vec<[usize; 3]> = faces
        .into_iter()
        .map(|t| [new_index[t[0]], new_index[t[1]], new_index[t[2]]])
        .collect();
    TriangleMesh::build(compact, faces)
}

fn face_normal<S: Real>(vertices: &[Vec3<S>], tri: &[usize; 3]) -> Vec3<S> {
    (vertices[tri[1]] - vertices[tri[0]]).cross(&(vertices[tri[2]] - vertices[tri[0]]))
}
