//! Self-shrinker diagnostics: the residual of H_vec + x_perp / 2 = 0, the
//! quantity 2tH + x.n, and closed-form entropies of the shrinking sphere and
//! cylinder.

use serde::Serialize;

use crate::mesh::ops::{
    mean_curvature_scalar, mean_curvature_vector, mixed_vertex_areas, outward_normals,
};
use crate::mesh::{FieldRole, TriangleMesh, VertexScalars};
use crate::{real, Error, Real, Result};

/// Per-vertex shrinker residual |H_vec + x_perp / 2| with summary norms.
#[derive(Debug, Clone)]
pub struct ShrinkerReport<S: Real = f64> {
    pub residual: VertexScalars<S>,
    pub max_residual: S,
    /// Area-weighted root-mean-square residual.
    pub l2_residual: S,
}

impl<S: Real + Serialize> Serialize for ShrinkerReport<S> {
    fn serialize<Ser: serde::Serializer>(
        &self,
        serializer: Ser,
    ) -> std::result::Result<Ser::Ok, Ser::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("ShrinkerReport", 3)?;
        st.serialize_field("max", &self.max_residual)?;
        st.serialize_field("l2", &self.l2_residual)?;
        st.serialize_field("per_vertex", &self.residual.values)?;
        st.end()
    }
}

/// Residual of the self-shrinker equation H_vec + x_perp / 2 = 0, measured
/// per vertex as |(H_vec + ((x . n) / 2) n) . n| = |x.n / 2 - H|.
///
/// Both sides of the equation are normal vectors in the continuum; the
/// tangential part of the discrete cotangent mean curvature vector is pure
/// discretization noise (one order lower than its normal component), so the
/// residual is measured in the normal direction. Zero on the sphere of radius
/// 2 and on the cylinder of radius sqrt(2) about the axis.
pub fn shrinker_residual<S: Real>(mesh: &TriangleMesh<S>) -> Result<ShrinkerReport<S>> {
    let normals = outward_normals(mesh);
    let h_vec = mean_curvature_vector(mesh)?;
    let half = real::<S>(0.5);
    let values: Vec<S> = (0..mesh.n_vertices())
        .map(|v| {
            let n = normals.values[v];
            let xn = mesh.position(v).dot(&n);
            (h_vec.values[v].dot(&n) + xn * half).abs()
        })
        .collect();
    let areas = mixed_vertex_areas(mesh);
    let mut max_residual = S::zero();
    let mut sq_acc = S::zero();
    let mut area_acc = S::zero();
    for (v, &r) in values.iter().enumerate() {
        max_residual = max_residual.max(r);
        sq_acc += areas[v] * r * r;
        area_acc += areas[v];
    }
    let l2_residual = (sq_acc / area_acc).sqrt();
    Ok(ShrinkerReport {
        residual: VertexScalars::new(mesh, FieldRole::ShrinkerResidual, values),
        max_residual,
        l2_residual,
    })
}

/// The quantity 2 t H + x . n per vertex (H = div n, positive on spheres).
/// Vanishes identically along self-similarly shrinking flows at their own
/// time parameter.
pub fn phi<S: Real>(mesh: &TriangleMesh<S>, t: S) -> Result<VertexScalars<S>> {
    let normals = outward_normals(mesh);
    let h_vec = mean_curvature_vector(mesh)?;
    let h = mean_curvature_scalar(mesh, &h_vec, &normals);
    let two = real::<S>(2.0);
    let values: Vec<S> = (0..mesh.n_vertices())
        .map(|v| two * t * h.values[v] + mesh.position(v).dot(&normals.values[v]))
        .collect();
    Ok(VertexScalars::new(mesh, FieldRole::Phi, values))
}

/// Closed-form entropy of the k-sphere / shrinking cylinder:
/// lambda_1 = sqrt(2 pi / e), lambda_2 = 4 / e (ambient dimension 3).
pub fn lambda_reference<S: Real>(k: usize) -> Result<S> {
    match k {
        1 => Ok(real((2.0 * std::f64::consts::PI / std::f64::consts::E).sqrt())),
        2 => Ok(real(4.0 / std::f64::consts::E)),
        _ => Err(Error::UnsupportedIndex { k }),
    }
}

/// The (k, lambda_k) table for surfaces in R^3.
pub fn lambda_table<S: Real>() -> Vec<(usize, S)> {
    vec![
        (1, lambda_reference(1).unwrap()),
        (2, lambda_reference(2).unwrap()),
    ]
}

/// The strict ordering 2 > lambda_1 > 3/2 > lambda_2 > sqrt(2).
pub fn lambda_chain_holds<S: Real>() -> bool {
    let l1: S = lambda_reference(1).unwrap();
    let l2: S = lambda_reference(2).unwrap();
    let three_half = real::<S>(1.5);
    let sqrt2 = real::<S>(std::f64::consts::SQRT_2);
    real::<S>(2.0) > l1 && l1 > three_half && three_half > l2 && l2 > sqrt2
}
