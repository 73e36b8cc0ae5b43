//! Point-to-triangle distance and a flat AABB tree for nearest-surface
//! queries.

use crate::mesh::TriangleMesh;
use crate::{real, Real, Vec3};

/// Closest point on triangle (a, b, c) to p (Ericson's region test).
pub fn closest_point_on_triangle<S: Real>(
    p: &Vec3<S>,
    a: &Vec3<S>,
    b: &Vec3<S>,
    c: &Vec3<S>,
) -> Vec3<S> {
    let ab = b - a;
    let ac = c - a;
    let ap = p - a;
    let d1 = ab.dot(&ap);
    let d2 = ac.dot(&ap);
    if d1 <= S::zero() && d2 <= S::zero() {
        return *a;
    }
    let bp = p - b;
    let d3 = ab.dot(&bp);
    let d4 = ac.dot(&bp);
    if d3 >= S::zero() && d4 <= d3 {
        return *b;
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= S::zero() && d1 >= S::zero() && d3 <= S::zero() {
        let v = d1 / (d1 - d3);
        return a + ab * v;
    }
    let cp = p - c;
    let d5 = ab.dot(&cp);
    let d6 = ac.dot(&cp);
    if d6 >= S::zero() && d5 <= d6 {
        return *c;
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= S::zero() && d2 >= S::zero() && d6 <= S::zero() {
        let w = d2 / (d2 - d6);
        return a + ac * w;
    }
    let va = d3 * d6 - d5 * d4;
    if va <= S::zero() && (d4 - d3) >= S::zero() && (d5 - d6) >= S::zero() {
        let w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return b + (c - b) * w;
    }
    let denom = S::one() / (va + vb + vc);
    let v = vb * denom;
    let w = vc * denom;
    a + ab * v + ac * w
}

#[derive(Debug, Clone)]
struct Node<S> {
    lo: Vec3<S>,
    hi: Vec3<S>,
    /// Leaf: (start, count) into `order`; internal: children at
    /// (index+1, right).
    right: usize,
    start: usize,
    count: usize,
}

/// Flat AABB tree over a triangle soup.
#[derive(Debug, Clone)]
pub struct TriangleBvh<S: Real = f64> {
    triangles: Vec<[Vec3<S>; 3]>,
    order: Vec<usize>,
    nodes: Vec<Node<S>>,
}

const LEAF_SIZE: usize = 8;

impl<S: Real> TriangleBvh<S> {
    pub fn from_mesh(mesh: &TriangleMesh<S>) -> Self {
        let triangles: Vec<[Vec3<S>; 3]> = mesh
            .faces()
            .iter()
            .map(|f| [mesh.position(f[0]), mesh.position(f[1]), mesh.position(f[2])])
            .collect();
        Self::from_triangles(triangles)
    }

    pub fn from_triangles(triangles: Vec<[Vec3<S>; 3]>) -> Self {
        assert!(!triangles.is_empty(), "empty triangle set");
        let mut order: Vec<usize> = (0..triangles.len()).collect();
        let mut nodes = Vec::with_capacity(2 * triangles.len() / LEAF_SIZE + 4);
        let centroids: Vec<Vec3<S>> = triangles
            .iter()
            .map(|t| (t[0] + t[1] + t[2]) / real::<S>(3.0))
            .collect();
        build(&triangles, &centroids, &mut order, 0, triangles.len(), &mut nodes);
        TriangleBvh {
            triangles,
            order,
            nodes,
        }
    }

    /// Distance from `p` to the nearest triangle.
    pub fn distance(&self, p: &Vec3<S>) -> S {
        self.distance_squared(p).sqrt()
    }

    pub fn distance_squared(&self, p: &Vec3<S>) -> S {
        let mut best = S::max_value().unwrap();
        self.query(0, p, &mut best);
        best
    }

    fn query(&self, node: usize, p: &Vec3<S>, best: &mut S) {
        let n = &self.nodes[node];
        if box_distance_squared(&n.lo, &n.hi, p) >= *best {
            return;
        }
        if n.count > 0 {
            for k in n.start..n.start + n.count {
                let t = &self.triangles[self.order[k]];
                let q = closest_point_on_triangle(p, &t[0], &t[1], &t[2]);
                let d2 = (p - q).norm_squared();
                if d2 < *best {
                    *best = d2;
                }
            }
            return;
        }
        // Visit the nearer child first.
        let left = node + 1;
        let right = n.right;
        let dl = box_distance_squared(&self.nodes[left].lo, &self.nodes[left].hi, p);
        let dr = box_distance_squared(&self.nodes[right].lo, &self.nodes[right].hi, p);
        if dl <= dr {
            self.query(left, p, best);
            self.query(right, p, best);
        } else {
            self.query(right, p, best);
            self.query(left, p, best);
        }
    }
}

fn box_distance_squared<S: Real>(lo: &Vec3<S>, hi: &Vec3<S>, p: &Vec3<S>) -> S {
    let mut d2 = S::zero();
    for k in 0..3 {
        let v = if p[k] < lo[k] {
            lo[k] - p[k]
        } else if p[k] > hi[k] {
            p[k] - hi[k]
        } else {
            S::zero()
        };
        d2 += v * v;
    }
    d2
}

fn build<S: Real>(
    triangles: &[[Vec3<S>; 3]],
    centroids: &[Vec3<S>],
    order: &mut [usize],
    start: usize,
    count: usize,
    nodes: &mut Vec<Node<S>>,
) -> usize {
    let my_index = nodes.len();
    let slice = &order[..count];
    let mut lo = Vec3::repeat(S::max_value().unwrap());
    let mut hi = Vec3::repeat(-S::max_value().unwrap());
    for &t in slice {
        for corner in &triangles[t] {
            for k in 0..3 {
                lo[k] = lo[k].min(corner[k]);
                hi[k] = hi[k].max(corner[k]);
            }
        }
    }
    nodes.push(Node {
        lo,
        hi,
        right: 0,
        start,
        count: 0,
    });
    if count <= LEAF_SIZE {
        nodes[my_index].count = count;
        return my_index;
    }
    // Median split along the longest centroid axis.
    let mut axis = 0;
    let mut span = S::zero();
    let mut clo = Vec3::repeat(S::max_value().unwrap());
    let mut chi = Vec3::repeat(-S::max_value().unwrap());
    for &t in order[..count].iter() {
        for k in 0..3 {
            clo[k] = clo[k].min(centroids[t][k]);
            chi[k] = chi[k].max(centroids[t][k]);
        }
    }
    for k in 0..3 {
        if chi[k] - clo[k] > span {
            span = chi[k] - clo[k];
            axis = k;
        }
    }
    let mid = count / 2;
    order[..count].select_nth_unstable_by(mid, |&a, &b| {
        centroids[a][axis]
            .partial_cmp(&centroids[b][axis])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let (left_slice, right_slice) = order.split_at_mut(mid);
    build(triangles, centroids, left_slice, start, mid, nodes);
    let right_index = build(
        triangles,
        centroids,
        right_slice,
        start + mid,
        count - mid,
        nodes,
    );
    nodes[my_index].right = right_index;
    my_index
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::generate::{generate, ShapeSpec};

    #[test]
    fn closest_point_regions() {
        let a = Vec3::new(0.0, 0.0, 0.0);
        let b = Vec3::new(1.0, 0.0, 0.0);
        let c = Vec3::new(0.0, 1.0, 0.0);
        // Interior projection.
        let q = closest_point_on_triangle(&Vec3::new(0.2, 0.2, 1.0), &a, &b, &c);
        assert!((q - Vec3::new(0.2, 0.2, 0.0)).norm() < 1e-15);
        // Vertex region.
        let q = closest_point_on_triangle(&Vec3::new(-1.0, -1.0, 0.0), &a, &b, &c);
        assert!((q - a).norm() < 1e-15);
        // Edge region.
        let q = closest_point_on_triangle(&Vec3::new(0.5, -2.0, 0.0), &a, &b, &c);
        assert!((q - Vec3::new(0.5, 0.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn bvh_distance_matches_brute_force() {
        let mesh = generate(&ShapeSpec::Torus {
            major: 2.0,
            minor: 0.5,
            level: 3,
        })
        .unwrap();
        let bvh = TriangleBvh::from_mesh(&mesh);
        let probes = [
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(3.0, 1.0, 0.2),
            Vec3::new(-1.5, 2.5, -4.0),
            Vec3::new(2.0, 0.0, 0.0),
        ];
        for p in probes {
            let brute = mesh
                .faces()
                .iter()
                .map(|f| {
                    let q = closest_point_on_triangle(
                        &p,
                        &mesh.position(f[0]),
                        &mesh.position(f[1]),
                        &mesh.position(f[2]),
                    );
                    (p - q).norm_squared()
                })
                .fold(f64::MAX, f64::min);
            let fast = bvh.distance_squared(&p);
            assert!((brute - fast).abs() < 1e-12, "{brute} vs {fast}");
        }
    }
}
