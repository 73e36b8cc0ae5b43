//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building meshes, integrating flows, or
/// evaluating the Gaussian functionals. Simplex-level failures name the
/// offending vertex, edge, or face index.
#[derive(Debug, Error)]
pub enum Error {
    #[error("edge ({a},{b}) is shared by {count} face sides (expected 2 with opposite orientation)")]
    NonManifoldEdge { a: usize, b: usize, count: usize },

    #[error("edge ({a},{b}) has only one incident face; the surface is not closed")]
    OpenBoundary { a: usize, b: usize },

    #[error("triangle {face} is degenerate (zero area or repeated vertex)")]
    DegenerateTriangle { face: usize },

    #[error("mesh has {components} connected components (vertex {witness} unreachable from vertex 0)")]
    Disconnected { components: usize, witness: usize },

    #[error("vertices {a} and {b} coincide within tolerance")]
    DuplicateVertices { a: usize, b: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("mixed vertex area underflow at vertex {vertex}")]
    NumericalDegeneracy { vertex: usize },

    #[error("vertex {vertex} has a two-ring of only {found} distinct neighbors (need at least 6)")]
    InsufficientNeighborhood { vertex: usize, found: usize },

    #[error("quadrature did not converge: estimated error {estimate:e} above tolerance {tol:e}")]
    QuadratureNotConverged { estimate: f64, tol: f64 },

    #[error("linear solve failed: {0}")]
    SolveFailure(String),

    #[error("element quality collapsed: minimum triangle angle {min_angle_deg:.3} deg")]
    QualityCollapse { min_angle_deg: f64 },

    #[error("neck pinch at t = {time:.6}: minimum profile radius {min_radius:e}")]
    NeckPinch { time: f64, min_radius: f64 },

    #[error("axis cap degenerated: {0}")]
    CapDegeneracy(String),

    #[error("trajectory tail is not shrinking to a round point (fit residual {residual:.4})")]
    NotShrinkingToPoint { residual: f64 },

    #[error("need at least {needed} consecutive states, found {found}")]
    InsufficientStates { needed: usize, found: usize },

    #[error("no closed-form entropy for cylinder index k = {k} (supported: 1, 2)")]
    UnsupportedIndex { k: usize },

    #[error("curve is not simple: segments {seg_a} and {seg_b} intersect")]
    NotSimple { seg_a: usize, seg_b: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
