//! Closed oriented triangle meshes in R^3 with precomputed adjacency.
//!
//! [`TriangleMesh::build`] validates every structural invariant up front
//! (closed, consistently oriented, non-degenerate, connected, no duplicate
//! vertices) and normalizes the orientation so that vertex normals point away
//! from the enclosed volume. All values are immutable afterwards, so meshes
//! can be shared freely across threads.

pub mod generate;
pub mod io;
pub mod ops;

use std::collections::HashMap;

use crate::{real, Error, Real, Result, Vec3};

/// Role tag for per-vertex data, so downstream code can sanity-check what a
/// field carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldRole {
    Normal,
    MeanCurvature,
    SecondFundamentalNorm,
    ShrinkerResidual,
    Phi,
    Generic,
}

/// One scalar per vertex.
#[derive(Debug, Clone)]
pub struct VertexScalars<S: Real = f64> {
    pub role: FieldRole,
    pub values: Vec<S>,
}

/// One R^3 vector per vertex.
#[derive(Debug, Clone)]
pub struct VertexVectors<S: Real = f64> {
    pub role: FieldRole,
    pub values: Vec<Vec3<S>>,
}

impl<S: Real> VertexScalars<S> {
    pub fn new(mesh: &TriangleMesh<S>, role: FieldRole, values: Vec<S>) -> Self {
        assert_eq!(values.len(), mesh.n_vertices(), "field length mismatch");
        Self { role, values }
    }

    pub fn max_abs(&self) -> S {
        self.values
            .iter()
            .fold(S::zero(), |acc, v| acc.max(v.abs()))
    }
}

impl<S: Real> VertexVectors<S> {
    pub fn new(mesh: &TriangleMesh<S>, role: FieldRole, values: Vec<Vec3<S>>) -> Self {
        assert_eq!(values.len(), mesh.n_vertices(), "field length mismatch");
        Self { role, values }
    }
}

/// An interior edge together with its two incident faces.
#[derive(Debug, Clone, Copy)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub faces: [usize; 2],
}

/// Closed, oriented, connected triangulated surface in R^3.
#[derive(Debug, Clone)]
pub struct TriangleMesh<S: Real = f64> {
    vertices: Vec<Vec3<S>>,
    faces: Vec<[usize; 3]>,
    edges: Vec<Edge>,
    /// One-ring vertex neighbors, sorted ascending.
    rings: Vec<Vec<usize>>,
    /// Incident faces per vertex.
    vertex_faces: Vec<Vec<usize>>,
}

impl<S: Real> TriangleMesh<S> {
    /// Validate raw arrays and build adjacency. The face orientation is
    /// normalized so the enclosed signed volume is positive (outward normals).
    pub fn build(vertices: Vec<Vec3<S>>, mut faces: Vec<[usize; 3]>) -> Result<Self> {
        if vertices.len() < 4 {
            return Err(Error::InvalidParameter(format!(
                "need at least 4 vertices, got {}",
                vertices.len()
            )));
        }
        for (f, tri) in faces.iter().enumerate() {
            for &v in tri {
                if v >= vertices.len() {
                    return Err(Error::InvalidParameter(format!(
                        "face {f} references vertex {v} out of bounds"
                    )));
                }
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(Error::DegenerateTriangle { face: f });
            }
        }

        let diameter = bounding_diameter(&vertices);
        if !(diameter > S::zero()) {
            return Err(Error::InvalidParameter("mesh has zero extent".into()));
        }

        check_duplicate_vertices(&vertices, diameter * real(1e-12))?;

        let area_floor = diameter * diameter * real(1e-16);
        for (f, tri) in faces.iter().enumerate() {
            let area = triangle_area(&vertices[tri[0]], &vertices[tri[1]], &vertices[tri[2]]);
            if !(area > area_floor) {
                return Err(Error::DegenerateTriangle { face: f });
            }
        }

        // Closed + consistently oriented: each undirected edge must occur as
        // exactly two directed half-edges with opposite directions. The
        // undirected adjacency it returns is unaffected by the global flip
        // below.
        let edges = build_edges(&faces)?;

        // Orientation normalization: flip everything if the signed volume is
        // negative, so normals computed from face windings point outward.
        if signed_volume(&vertices, &faces) < S::zero() {
            for tri in faces.iter_mut() {
                tri.swap(1, 2);
            }
        }

        let n = vertices.len();
        let mut rings: Vec<Vec<usize>> = vec![Vec::new(); n];
        for e in &edges {
            rings[e.a].push(e.b);
            rings[e.b].push(e.a);
        }
        for ring in rings.iter_mut() {
            ring.sort_unstable();
            ring.dedup();
        }

        let mut vertex_faces: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (f, tri) in faces.iter().enumerate() {
            for &v in tri {
                vertex_faces[v].push(f);
            }
        }

        // Connectivity over the edge graph.
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut reached = 1usize;
        while let Some(v) = stack.pop() {
            for &w in &rings[v] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        if reached != n {
            let witness = seen.iter().position(|s| !s).unwrap();
            return Err(Error::Disconnected {
                components: 2,
                witness,
            });
        }

        Ok(TriangleMesh {
            vertices,
            faces,
            edges,
            rings,
            vertex_faces,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn vertices(&self) -> &[Vec3<S>] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn position(&self, v: usize) -> Vec3<S> {
        self.vertices[v]
    }

    /// One-ring vertex neighbors (sorted, deduplicated).
    pub fn ring(&self, v: usize) -> &[usize] {
        &self.rings[v]
    }

    pub fn faces_of_vertex(&self, v: usize) -> &[usize] {
        &self.vertex_faces[v]
    }

    pub fn face_area(&self, f: usize) -> S {
        let [i, j, k] = self.faces[f];
        triangle_area(&self.vertices[i], &self.vertices[j], &self.vertices[k])
    }

    pub fn total_area(&self) -> S {
        (0..self.n_faces()).map(|f| self.face_area(f)).sum()
    }

    /// Signed enclosed volume; positive after orientation normalization.
    pub fn enclosed_volume(&self) -> S {
        signed_volume(&self.vertices, &self.faces)
    }

    /// Area-weighted surface centroid.
    pub fn centroid(&self) -> Vec3<S> {
        let mut acc = Vec3::zeros();
        let mut total = S::zero();
        for tri in &self.faces {
            let a = triangle_area(
                &self.vertices[tri[0]],
                &self.vertices[tri[1]],
                &self.vertices[tri[2]],
            );
            let c = (self.vertices[tri[0]] + self.vertices[tri[1]] + self.vertices[tri[2]])
                / real::<S>(3.0);
            acc += c * a;
            total += a;
        }
        acc / total
    }

    pub fn bounding_box(&self) -> (Vec3<S>, Vec3<S>) {
        bounding_box(&self.vertices)
    }

    /// Diagonal of the axis-aligned bounding box.
    pub fn diameter(&self) -> S {
        bounding_diameter(&self.vertices)
    }

    pub fn min_edge_length(&self) -> S {
        self.edges
            .iter()
            .map(|e| (self.vertices[e.a] - self.vertices[e.b]).norm())
            .fold(S::max_value().unwrap(), |acc, l| acc.min(l))
    }

    pub fn mean_edge_length(&self) -> S {
        let total: S = self
            .edges
            .iter()
            .map(|e| (self.vertices[e.a] - self.vertices[e.b]).norm())
            .sum();
        total / real(self.edges.len() as f64)
    }

    /// Minimum interior angle over all triangles, in degrees.
    pub fn min_angle_deg(&self) -> S {
        let mut min_angle = S::max_value().unwrap();
        for tri in &self.faces {
            for r in 0..3 {
                let a = self.vertices[tri[r]];
                let b = self.vertices[tri[(r + 1) % 3]];
                let c = self.vertices[tri[(r + 2) % 3]];
                let u = b - a;
                let v = c - a;
                let cos = u.dot(&v) / (u.norm() * v.norm());
                let angle = cos.clamp(-S::one(), S::one()).acos();
                min_angle = min_angle.min(angle);
            }
        }
        min_angle * real::<S>(180.0) / S::pi()
    }

    /// New mesh with vertices mapped through `f`; connectivity is reused and
    /// revalidated cheaply (orientation may flip under reflections).
    pub fn map_vertices(&self, f: impl Fn(&Vec3<S>) -> Vec3<S>) -> Result<Self> {
        let vertices: Vec<Vec3<S>> = self.vertices.iter().map(f).collect();
        TriangleMesh::build(vertices, self.faces.clone())
    }

    /// Translated copy.
    pub fn translated(&self, delta: &Vec3<S>) -> Self {
        let mut out = self.clone();
        for v in out.vertices.iter_mut() {
            *v += delta;
        }
        out
    }

    /// Uniformly scaled copy about the origin; `s` must be positive.
    pub fn scaled(&self, s: S) -> Result<Self> {
        if !(s > S::zero()) {
            return Err(Error::InvalidParameter("scale must be positive".into()));
        }
        let mut out = self.clone();
        for v in out.vertices.iter_mut() {
            *v *= s;
        }
        Ok(out)
    }

    /// Positions mapped through `f` without revalidation; for orientation-
    /// preserving affine maps, which keep every invariant.
    pub(crate) fn map_positions(&self, f: impl Fn(&Vec3<S>) -> Vec3<S>) -> Self {
        self.with_positions_unchecked(self.vertices.iter().map(f).collect())
    }

    /// Replace vertex positions, keeping connectivity; skips the full
    /// validation pass (used by the flow integrator on trusted updates).
    pub(crate) fn with_positions_unchecked(&self, vertices: Vec<Vec3<S>>) -> Self {
        debug_assert_eq!(vertices.len(), self.vertices.len());
        TriangleMesh {
            vertices,
            faces: self.faces.clone(),
            edges: self.edges.clone(),
            rings: self.rings.clone(),
            vertex_faces: self.vertex_faces.clone(),
        }
    }

    /// Euler characteristic V - E + F.
    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices() as i64 - self.edges.len() as i64 + self.n_faces() as i64
    }
}

pub(crate) fn triangle_area<S: Real>(a: &Vec3<S>, b: &Vec3<S>, c: &Vec3<S>) -> S {
    (b - a).cross(&(c - a)).norm() * real::<S>(0.5)
}

fn signed_volume<S: Real>(vertices: &[Vec3<S>], faces: &[[usize; 3]]) -> S {
    let mut vol = S::zero();
    for tri in faces {
        let a = vertices[tri[0]];
        let b = vertices[tri[1]];
        let c = vertices[tri[2]];
        vol += a.dot(&b.cross(&c));
    }
    vol / real(6.0)
}

fn bounding_box<S: Real>(vertices: &[Vec3<S>]) -> (Vec3<S>, Vec3<S>) {
    let mut lo = vertices[0];
    let mut hi = vertices[0];
    for v in vertices {
        for k in 0..3 {
            lo[k] = lo[k].min(v[k]);
            hi[k] = hi[k].max(v[k]);
        }
    }
    (lo, hi)
}

fn bounding_diameter<S: Real>(vertices: &[Vec3<S>]) -> S {
    let (lo, hi) = bounding_box(vertices);
    (hi - lo).norm()
}

/// Spatial-hash duplicate detection at the given absolute tolerance.
fn check_duplicate_vertices<S: Real>(vertices: &[Vec3<S>], tol: S) -> Result<()> {
    if !(tol > S::zero()) {
        return Ok(());
    }
    let cell = tol * real(2.0);
    let key = |p: &Vec3<S>| -> (i64, i64, i64) {
        (
            (p.x / cell).to_f64().map(|x| x.floor() as i64).unwrap_or(0),
            (p.y / cell).to_f64().map(|x| x.floor() as i64).unwrap_or(0),
            (p.z / cell).to_f64().map(|x| x.floor() as i64).unwrap_or(0),
        )
    };
    let mut grid: HashMap<(i64, i64, i64), Vec<usize>> = HashMap::new();
    for (i, p) in vertices.iter().enumerate() {
        let (kx, ky, kz) = key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(bucket) = grid.get(&(kx + dx, ky + dy, kz + dz)) {
                        for &j in bucket {
                            if (vertices[j] - p).norm() <= tol {
                                return Err(Error::DuplicateVertices { a: j, b: i });
                            }
                        }
                    }
                }
            }
        }
        grid.entry((kx, ky, kz)).or_default().push(i);
    }
    Ok(())
}

fn build_edges(faces: &[[usize; 3]]) -> Result<Vec<Edge>> {
    // Map undirected edge -> (face list, directed counts).
    let mut map: HashMap<(usize, usize), (Vec<usize>, usize, usize)> = HashMap::new();
    for (f, tri) in faces.iter().enumerate() {
        for r in 0..3 {
            let a = tri[r];
            let b = tri[(r + 1) % 3];
            let key = (a.min(b), a.max(b));
            let entry = map.entry(key).or_insert((Vec::new(), 0, 0));
            entry.0.push(f);
            if a < b {
                entry.1 += 1;
            } else {
                entry.2 += 1;
            }
        }
    }
    let mut edges = Vec::with_capacity(map.len());
    for ((a, b), (face_list, fwd, rev)) in map {
        match face_list.len() {
            1 => return Err(Error::OpenBoundary { a, b }),
            2 => {
                if fwd != 1 || rev != 1 {
                    // Two faces traverse the edge in the same direction:
                    // inconsistent orientation.
                    return Err(Error::NonManifoldEdge { a, b, count: 2 });
                }
                edges.push(Edge {
                    a,
                    b,
                    faces: [face_list[0], face_list[1]],
                });
            }
            n => return Err(Error::NonManifoldEdge { a, b, count: n }),
        }
    }
    edges.sort_unstable_by_key(|e| (e.a, e.b));
    Ok(edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn octahedron() -> (Vec<Vec3<f64>>, Vec<[usize; 3]>) {
        let vertices = vec![
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(-1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(0.0, -1.0, 0.0),
            Vec3::new(0.0, 0.0, 1.0),
            Vec3::new(0.0, 0.0, -1.0),
        ];
        let faces = vec![
            [0, 2, 4],
            [2, 1, 4],
            [1, 3, 4],
            [3, 0, 4],
            [2, 0, 5],
            [1, 2, 5],
            [3, 1, 5],
            [0, 3, 5],
        ];
        (vertices, faces)
    }

    fn tetrahedron_at(offset: f64) -> (Vec<Vec3<f64>>, Vec<[usize; 3]>) {
        let vertices = vec![
            Vec3::new(offset, 0.0, 0.0),
            Vec3::new(offset + 1.0, 0.0, 0.0),
            Vec3::new(offset + 0.5, 1.0, 0.0),
            Vec3::new(offset + 0.5, 0.5, 1.0),
        ];
        let faces = vec![[0, 2, 1], [0, 1, 3], [1, 2, 3], [2, 0, 3]];
        (vertices, faces)
    }

    #[test]
    fn octahedron_is_valid() {
        let (v, f) = octahedron();
        let mesh = TriangleMesh::build(v, f).unwrap();
        assert_eq!(mesh.n_vertices(), 6);
        assert_eq!(mesh.n_faces(), 8);
        assert_eq!(mesh.edges().len(), 12);
        assert_eq!(mesh.euler_characteristic(), 2);
        assert!(mesh.enclosed_volume() > 0.0);
    }

    #[test]
    fn removing_a_face_reports_open_boundary() {
        let (v, mut f) = octahedron();
        f.pop();
        match TriangleMesh::build(v, f) {
            Err(Error::OpenBoundary { .. }) => {}
            other => panic!("expected OpenBoundary, got {other:?}"),
        }
    }

    #[test]
    fn two_components_report_disconnected() {
        let (mut v1, mut f1) = tetrahedron_at(0.0);
        let (v2, f2) = tetrahedron_at(10.0);
        let base = v1.len();
        v1.extend(v2);
        f1.extend(f2.iter().map(|t| [t[0] + base, t[1] + base, t[2] + base]));
        match TriangleMesh::build(v1, f1) {
            Err(Error::Disconnected { .. }) => {}
            other => panic!("expected Disconnected, got {other:?}"),
        }
    }

    #[test]
    fn flipped_face_reports_nonmanifold() {
        let (v, mut f) = octahedron();
        f[0].swap(1, 2);
        match TriangleMesh::build(v, f) {
            Err(Error::NonManifoldEdge { .. }) => {}
            other => panic!("expected NonManifoldEdge, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_vertices_detected() {
        let (mut v, f) = octahedron();
        v[1] = v[0] + Vec3::new(1e-15, 0.0, 0.0);
        match TriangleMesh::build(v, f) {
            Err(Error::DuplicateVertices { .. }) => {}
            Err(Error::DegenerateTriangle { .. }) => {}
            other => panic!("expected duplicate/degenerate, got {other:?}"),
        }
    }

    #[test]
    fn inward_orientation_is_normalized() {
        let (v, mut f) = octahedron();
        for tri in f.iter_mut() {
            tri.swap(1, 2);
        }
        let mesh = TriangleMesh::build(v, f).unwrap();
        assert!(mesh.enclosed_volume() > 0.0);
    }
}
