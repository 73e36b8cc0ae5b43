//! Gaussian-weighted surface geometry and mean curvature flow on triangle meshes.
//!
//! The crate is organized around a validated closed triangle mesh
//! ([`mesh::TriangleMesh`]) and a sampled generating curve for surfaces of
//! revolution ([`flow::AxisymProfile`]). On top of those carriers it provides:
//!
//! - discrete differential operators: outward normals, mean curvature vector,
//!   second-fundamental-form norm ([`mesh::ops`]);
//! - Gaussian surface area `F[rho*S + y]` and its entropy (the supremum of `F`
//!   over translations and dilations), with an analytic gradient, a multistart
//!   quasi-Newton maximizer and an independent grid-search oracle ([`entropy`]);
//! - self-shrinker residuals `H + x_perp/2`, the quantity `2tH + x.n`, and the
//!   closed-form entropies of the shrinking sphere and cylinder ([`shrinker`]);
//! - mean curvature flow integrators for meshes and axisymmetric profiles,
//!   round-point detection, parabolic rescaling, and empirical curvature/speed
//!   monitors ([`flow`]);
//! - Hausdorff distance, best round-sphere fits, roundness-vs-entropy defect
//!   reports, and the Gaussian monotonicity defect integral ([`metrics`]);
//! - the classical Bonnesen inequality for planar curves ([`bonnesen`]).
//!
//! All geometry is generic over the scalar type via [`Real`]; `f64` is the
//! default type parameter everywhere and the type the test suite pins
//! tolerances for.

pub mod bonnesen;
pub mod entropy;
pub mod error;
pub mod flow;
pub mod linalg;
pub mod mesh;
pub mod metrics;
pub mod optim;
pub mod shrinker;

pub use error::{Error, Result};
pub use mesh::{TriangleMesh, VertexScalars, VertexVectors};

use num_traits::{FromPrimitive, ToPrimitive};

/// Scalar type for all geometric computation: `f32` or `f64`.
pub trait Real:
    nalgebra::RealField + FromPrimitive + ToPrimitive + Copy + Default + std::iter::Sum<Self>
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Pull an `f64` constant into the working scalar type.
#[inline]
pub fn real<S: Real>(x: f64) -> S {
    S::from_f64(x).expect("constant not representable in scalar type")
}

/// 3-vector in the working scalar type.
pub type Vec3<S> = nalgebra::Vector3<S>;
/// 2-vector (axial coordinate, radius) for profile curves.
pub type Vec2<S> = nalgebra::Vector2<S>;

/// Single-precision mesh alias; the default scalar everywhere is `f64`.
pub type TriangleMesh32 = mesh::TriangleMesh<f32>;
