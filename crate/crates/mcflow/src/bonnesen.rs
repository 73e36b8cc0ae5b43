//! Planar-curve companion: length, enclosed area, inradius, circumradius, and
//! the classical Bonnesen inequality
//! pi^2 (R_out - R_in)^2 <= L^2 - 4 pi A.

use serde::Serialize;

use crate::{real, Error, Real, Result, Vec2};

/// Closed polygonal curve in the plane; simple and positively oriented after
/// construction.
#[derive(Debug, Clone)]
pub struct PlanarCurve<S: Real = f64> {
    points: Vec<Vec2<S>>,
}

impl<S: Real> PlanarCurve<S> {
    pub fn new(mut points: Vec<Vec2<S>>) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::InvalidParameter(
                "curve needs at least 3 sample points".into(),
            ));
        }
        // Drop an explicitly repeated closing point.
        if (points[0] - points[points.len() - 1]).norm() == S::zero() {
            points.pop();
        }
        check_simple(&points)?;
        if shoelace_area(&points) < S::zero() {
            points.reverse();
        }
        Ok(PlanarCurve { points })
    }

    pub fn points(&self) -> &[Vec2<S>] {
        &self.points
    }

    /// Regular n-gon inscribed in the circle of the given radius.
    pub fn circle(radius: S, n: usize) -> Result<Self> {
        let pts = (0..n)
            .map(|i| {
                let t = S::two_pi() * real::<S>(i as f64 / n as f64);
                Vec2::new(radius * t.cos(), radius * t.sin())
            })
            .collect();
        PlanarCurve::new(pts)
    }

    /// Sampled ellipse with semi-axes (a, b).
    pub fn ellipse(a: S, b: S, n: usize) -> Result<Self> {
        let pts = (0..n)
            .map(|i| {
                let t = S::two_pi() * real::<S>(i as f64 / n as f64);
                Vec2::new(a * t.cos(), b * t.sin())
            })
            .collect();
        PlanarCurve::new(pts)
    }

    /// Axis-aligned square of the given side, sampled n points per side.
    pub fn square(side: S, per_side: usize) -> Result<Self> {
        let h = side * real::<S>(0.5);
        let mut pts = Vec::with_capacity(4 * per_side);
        let step = side / real::<S>(per_side as f64);
        for i in 0..per_side {
            pts.push(Vec2::new(-h + step * real::<S>(i as f64), -h));
        }
        for i in 0..per_side {
            pts.push(Vec2::new(h, -h + step * real::<S>(i as f64)));
        }
        for i in 0..per_side {
            pts.push(Vec2::new(h - step * real::<S>(i as f64), h));
        }
        for i in 0..per_side {
            pts.push(Vec2::new(-h, h - step * real::<S>(i as f64)));
        }
        PlanarCurve::new(pts)
    }
}

fn shoelace_area<S: Real>(pts: &[Vec2<S>]) -> S {
    let n = pts.len();
    let mut acc = S::zero();
    for i in 0..n {
        let a = pts[i];
        let b = pts[(i + 1) % n];
        acc += a.x * b.y - b.x * a.y;
    }
    acc * real(0.5)
}

/// O(n^2) segment intersection test with bounding-interval rejection.
fn check_simple<S: Real>(pts: &[Vec2<S>]) -> Result<()> {
    let n = pts.len();
    let seg = |i: usize| (pts[i], pts[(i + 1) % n]);
    for i in 0..n {
        let (a, b) = seg(i);
        let (ilo, ihi) = (a.x.min(b.x), a.x.max(b.x));
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue; // adjacent through the wrap
            }
            let (c, d) = seg(j);
            if c.x.max(d.x) < ilo || c.x.min(d.x) > ihi {
                continue;
            }
            if segments_cross(&a, &b, &c, &d) {
                return Err(Error::NotSimple { seg_a: i, seg_b: j });
            }
        }
    }
    Ok(())
}

fn segments_cross<S: Real>(a: &Vec2<S>, b: &Vec2<S>, c: &Vec2<S>, d: &Vec2<S>) -> bool {
    let orient = |p: &Vec2<S>, q: &Vec2<S>, r: &Vec2<S>| -> S {
        (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
    };
    let d1 = orient(a, b, c);
    let d2 = orient(a, b, d);
    let d3 = orient(c, d, a);
    let d4 = orient(c, d, b);
    (d1 * d2 < S::zero()) && (d3 * d4 < S::zero())
}

/// Length, enclosed area, inradius, circumradius.
#[derive(Debug, Clone, Serialize)]
pub struct CurveQuantities<S: Real = f64> {
    pub length: S,
    pub area: S,
    pub inradius: S,
    pub circumradius: S,
}

/// Compute the four classical quantities of a simple closed curve.
///
/// Length is polyline length; area is the shoelace formula; the circumradius
/// is the exact minimum enclosing circle of the samples; the inradius
/// maximizes the distance to the boundary over an interior grid with a local
/// compass polish.
pub fn curve_quantities<S: Real>(curve: &PlanarCurve<S>) -> Result<CurveQuantities<S>> {
    let pts = curve.points();
    let n = pts.len();
    let mut length = S::zero();
    for i in 0..n {
        length += (pts[(i + 1) % n] - pts[i]).norm();
    }
    let area = shoelace_area(pts);
    let (_, circumradius) = min_enclosing_circle(pts);
    let inradius = max_inscribed_radius(curve);
    Ok(CurveQuantities {
        length,
        area,
        inradius,
        circumradius,
    })
}

/// The two sides of the Bonnesen inequality:
/// lhs = pi^2 (R_out - R_in)^2, rhs = L^2 - 4 pi A (the isoperimetric
/// defect), and whether lhs <= rhs within tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct BonnesenCheck<S: Real = f64> {
    pub lhs: S,
    pub rhs: S,
    pub holds: bool,
    pub quantities: CurveQuantities<S>,
}

pub fn bonnesen_check<S: Real>(curve: &PlanarCurve<S>) -> Result<BonnesenCheck<S>> {
    let q = curve_quantities(curve)?;
    let pi = S::pi();
    let gap = q.circumradius - q.inradius;
    let lhs = pi * pi * gap * gap;
    let rhs = q.length * q.length - real::<S>(4.0) * pi * q.area;
    let tol = real::<S>(1e-10) * q.length * q.length;
    Ok(BonnesenCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + tol,
        quantities: q,
    })
}

/// Exact minimum enclosing circle (Welzl, incremental with a deterministic
/// LCG permutation so curve-ordered inputs stay expected linear time).
pub fn min_enclosing_circle<S: Real>(points: &[Vec2<S>]) -> (Vec2<S>, S) {
    let mut pts: Vec<Vec2<S>> = points.to_vec();
    // Deterministic scramble.
    let mut state: u64 = 0x9e3779b97f4a7c15;
    for i in (1..pts.len()).rev() {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let j = (state >> 33) as usize % (i + 1);
        pts.swap(i, j);
    }
    let eps = real::<S>(1e-12);
    let contains = |c: &Vec2<S>, r2: S, p: &Vec2<S>| (p - c).norm_squared() <= r2 * (S::one() + eps) + eps;

    let mut center = pts[0];
    let mut r2 = S::zero();
    for i in 1..pts.len() {
        if contains(&center, r2, &pts[i]) {
            continue;
        }
        // Circle through pts[i].
        center = pts[i];
        r2 = S::zero();
        for j in 0..i {
            if contains(&center, r2, &pts[j]) {
                continue;
            }
            // Circle through pts[i], pts[j].
            center = (pts[i] + pts[j]) * real::<S>(0.5);
            r2 = (pts[i] - center).norm_squared();
            for k in 0..j {
                if contains(&center, r2, &pts[k]) {
                    continue;
                }
                let (c, rr) = circumcircle(&pts[i], &pts[j], &pts[k]);
                center = c;
                r2 = rr;
            }
        }
    }
    (center, r2.max(S::zero()).sqrt())
}

fn circumcircle<S: Real>(a: &Vec2<S>, b: &Vec2<S>, c: &Vec2<S>) -> (Vec2<S>, S) {
    let d = real::<S>(2.0)
        * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
    if d == S::zero() {
        // Collinear: diameter circle of the extreme pair.
        let mut best = (Vec2::zeros(), S::zero());
        for (p, q) in [(a, b), (a, c), (b, c)] {
            let ctr = (p + q) * real::<S>(0.5);
            let r2 = (p - ctr).norm_squared();
            if r2 > best.1 {
                best = (ctr, r2);
            }
        }
        return best;
    }
    let a2 = a.norm_squared();
    let b2 = b.norm_squared();
    let c2 = c.norm_squared();
    let ux = (a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d;
    let uy = (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d;
    let ctr = Vec2::new(ux, uy);
    (ctr, (a - ctr).norm_squared())
}

/// Signed distance to the polyline (positive inside).
fn interior_distance<S: Real>(curve: &PlanarCurve<S>, p: &Vec2<S>) -> S {
    let pts = curve.points();
    let n = pts.len();
    let mut d2 = S::max_value().unwrap();
    for i in 0..n {
        let a = pts[i];
        let b = pts[(i + 1) % n];
        let ab = b - a;
        let t = ((p - a).dot(&ab) / ab.norm_squared()).clamp(S::zero(), S::one());
        let q = a + ab * t;
        d2 = d2.min((p - q).norm_squared());
    }
    let d = d2.sqrt();
    if point_inside(pts, p) {
        d
    } else {
        -d
    }
}

/// Even-odd crossing test.
fn point_inside<S: Real>(pts: &[Vec2<S>], p: &Vec2<S>) -> bool {
    let n = pts.len();
    let mut inside = false;
    for i in 0..n {
        let a = pts[i];
        let b = pts[(i + 1) % n];
        if (a.y > p.y) != (b.y > p.y) {
            let x_cross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x_cross {
                inside = !inside;
            }
        }
    }
    inside
}

/// Largest inscribed circle radius: coarse interior grid, then zoomed grid
/// refinement around the best cells (the max-min objective is non-smooth, so
/// axis-probing descent can stall on its corners; grids cannot).
fn max_inscribed_radius<S: Real>(curve: &PlanarCurve<S>) -> S {
    let pts = curve.points();
    let mut lo = pts[0];
    let mut hi = pts[0];
    for p in pts {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    let res = 64usize;
    let mut cells: Vec<(S, Vec2<S>)> = Vec::new();
    for i in 0..res {
        for j in 0..res {
            let p = Vec2::new(
                lo.x + (hi.x - lo.x) * real::<S>((i as f64 + 0.5) / res as f64),
                lo.y + (hi.y - lo.y) * real::<S>((j as f64 + 0.5) / res as f64),
            );
            let d = interior_distance(curve, &p);
            if d > S::zero() {
                cells.push((d, p));
            }
        }
    }
    cells.sort_unstable_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));
    let cell = Vec2::new(
        (hi.x - lo.x) / real(res as f64),
        (hi.y - lo.y) / real(res as f64),
    );
    let mut best = S::zero();
    for (d0, p0) in cells.into_iter().take(4) {
        best = best.max(zoomed_interior_max(curve, p0, cell)).max(d0);
    }
    best
}

fn zoomed_interior_max<S: Real>(curve: &PlanarCurve<S>, center: Vec2<S>, cell: Vec2<S>) -> S {
    let res = 17usize;
    let mut window = Vec2::new(cell.x * real(2.0), cell.y * real(2.0));
    let mut center = center;
    let mut best = -S::max_value().unwrap();
    for _ in 0..6 {
        let mut stage_best = (best, center);
        for i in 0..res {
            for j in 0..res {
                let p = Vec2::new(
                    center.x + window.x * real::<S>(i as f64 / (res - 1) as f64 - 0.5),
                    center.y + window.y * real::<S>(j as f64 / (res - 1) as f64 - 0.5),
                );
                let d = interior_distance(curve, &p);
                if d > stage_best.0 {
                    stage_best = (d, p);
                }
            }
        }
        best = stage_best.0;
        center = stage_best.1;
        window = Vec2::new(window.x * real(0.25), window.y * real(0.25));
    }
    best
}
