//! Minimal sparse linear algebra for the flow integrators: CSR storage, a
//! Jacobi-preconditioned conjugate gradient for the SPD semi-implicit systems,
//! and (cyclic) tridiagonal solves for profile curves.

use crate::{real, Error, Real, Result};

/// Compressed sparse row matrix built from triplets.
#[derive(Debug, Clone)]
pub struct Csr<S> {
    pub n: usize,
    pub indptr: Vec<usize>,
    pub indices: Vec<u32>,
    pub data: Vec<S>,
}

impl<S: Real> Csr<S> {
    /// Assemble from (row, col, value) triplets; duplicate entries are summed.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, S)]) -> Self {
        let mut counts = vec![0usize; n + 1];
        for &(r, _, _) in triplets {
            counts[r + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let mut cols = vec![0u32; triplets.len()];
        let mut vals = vec![S::zero(); triplets.len()];
        let mut cursor = counts.clone();
        for &(r, c, v) in triplets {
            let k = cursor[r];
            cols[k] = c as u32;
            vals[k] = v;
            cursor[r] += 1;
        }
        // Sort each row by column and merge duplicates.
        let mut indptr = vec![0usize; n + 1];
        let mut out_cols = Vec::with_capacity(triplets.len());
        let mut out_vals = Vec::with_capacity(triplets.len());
        for r in 0..n {
            let lo = counts[r];
            let hi = counts[r + 1];
            let mut row: Vec<(u32, S)> = (lo..hi).map(|k| (cols[k], vals[k])).collect();
            row.sort_unstable_by_key(|&(c, _)| c);
            for (c, v) in row {
                if let Some(last) = out_cols.last() {
                    if *last == c && out_cols.len() > indptr[r] {
                        let k = out_vals.len() - 1;
                        out_vals[k] += v;
                        continue;
                    }
                }
                out_cols.push(c);
                out_vals.push(v);
            }
            indptr[r + 1] = out_cols.len();
        }
        Csr {
            n,
            indptr,
            indices: out_cols,
            data: out_vals,
        }
    }

    /// y = A x
    pub fn mul_vec(&self, x: &[S], y: &mut [S]) {
        for r in 0..self.n {
            let mut acc = S::zero();
            for k in self.indptr[r]..self.indptr[r + 1] {
                acc += self.data[k] * x[self.indices[k] as usize];
            }
            y[r] = acc;
        }
    }

    pub fn diagonal(&self) -> Vec<S> {
        let mut d = vec![S::zero(); self.n];
        for r in 0..self.n {
            for k in self.indptr[r]..self.indptr[r + 1] {
                if self.indices[k] as usize == r {
                    d[r] += self.data[k];
                }
            }
        }
        d
    }
}

/// Jacobi-preconditioned conjugate gradient for SPD systems.
///
/// Returns the solution and the iteration count. The caller provides a warm
/// start in `x`.
pub fn conjugate_gradient<S: Real>(
    a: &Csr<S>,
    b: &[S],
    x: &mut [S],
    rel_tol: S,
    max_iter: usize,
) -> Result<usize> {
    let n = a.n;
    let diag = a.diagonal();
    let inv_diag: Vec<S> = diag
        .iter()
        .map(|&d| {
            if d.abs() > S::zero() {
                S::one() / d
            } else {
                S::one()
            }
        })
        .collect();

    let mut r = vec![S::zero(); n];
    a.mul_vec(x, &mut r);
    for i in 0..n {
        r[i] = b[i] - r[i];
    }
    let b_norm = b.iter().map(|&v| v * v).sum::<S>().sqrt();
    if b_norm == S::zero() {
        x.iter_mut().for_each(|v| *v = S::zero());
        return Ok(0);
    }
    let target = rel_tol * b_norm;

    let mut z: Vec<S> = (0..n).map(|i| inv_diag[i] * r[i]).collect();
    let mut p = z.clone();
    let mut rz = (0..n).map(|i| r[i] * z[i]).sum::<S>();
    let mut ap = vec![S::zero(); n];

    for it in 0..max_iter {
        let r_norm = r.iter().map(|&v| v * v).sum::<S>().sqrt();
        if r_norm <= target {
            return Ok(it);
        }
        a.mul_vec(&p, &mut ap);
        let pap = (0..n).map(|i| p[i] * ap[i]).sum::<S>();
        if !(pap > S::zero()) {
            return Err(Error::SolveFailure(format!(
                "CG curvature p^T A p = {:?} not positive",
                pap.to_f64()
            )));
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        for i in 0..n {
            z[i] = inv_diag[i] * r[i];
        }
        let rz_new = (0..n).map(|i| r[i] * z[i]).sum::<S>();
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    let r_norm = r.iter().map(|&v| v * v).sum::<S>().sqrt();
    if r_norm <= target * real(10.0) {
        return Ok(max_iter);
    }
    Err(Error::SolveFailure(format!(
        "CG stalled: residual {:?} above target {:?} after {} iterations",
        r_norm.to_f64(),
        target.to_f64(),
        max_iter
    )))
}

/// Thomas algorithm for a tridiagonal system with rows
/// `lower[i] * x[i-1] + diag[i] * x[i] + upper[i] * x[i+1] = rhs[i]`.
pub fn solve_tridiagonal<S: Real>(
    lower: &[S],
    diag: &[S],
    upper: &[S],
    rhs: &[S],
) -> Result<Vec<S>> {
    let n = diag.len();
    let mut c = vec![S::zero(); n];
    let mut d = vec![S::zero(); n];
    let mut x = vec![S::zero(); n];
    if diag[0] == S::zero() {
        return Err(Error::SolveFailure("tridiagonal pivot is zero".into()));
    }
    c[0] = upper[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let denom = diag[i] - lower[i] * c[i - 1];
        if denom == S::zero() {
            return Err(Error::SolveFailure("tridiagonal pivot is zero".into()));
        }
        c[i] = upper[i] / denom;
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / denom;
    }
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    Ok(x)
}

/// Cyclic tridiagonal solve (wrap-around corner entries) via Sherman-Morrison.
pub fn solve_cyclic_tridiagonal<S: Real>(
    lower: &[S],
    diag: &[S],
    upper: &[S],
    rhs: &[S],
) -> Result<Vec<S>> {
    let n = diag.len();
    if n < 3 {
        return Err(Error::SolveFailure("cyclic system needs n >= 3".into()));
    }
    // A = T + u v^T with u = (gamma, 0, .., 0, lower[0].. ) standard trick.
    let gamma = -diag[0];
    let mut dmod = diag.to_vec();
    dmod[0] = diag[0] - gamma;
    dmod[n - 1] = diag[n - 1] - upper[n - 1] * lower[0] / gamma;
    let mut l = lower.to_vec();
    let mut u = upper.to_vec();
    l[0] = S::zero();
    u[n - 1] = S::zero();

    let x1 = solve_tridiagonal(&l, &dmod, &u, rhs)?;
    let mut e = vec![S::zero(); n];
    e[0] = gamma;
    e[n - 1] = upper[n - 1];
    let x2 = solve_tridiagonal(&l, &dmod, &u, &e)?;

    let num = x1[0] + lower[0] * x1[n - 1] / gamma;
    let den = S::one() + x2[0] + lower[0] * x2[n - 1] / gamma;
    if den == S::zero() {
        return Err(Error::SolveFailure("cyclic correction singular".into()));
    }
    let factor = num / den;
    Ok((0..n).map(|i| x1[i] - factor * x2[i]).collect())
}
