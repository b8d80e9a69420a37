//! Dense symmetric eigen-solves and constraint deflation.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Eigenpairs of a real symmetric matrix sorted by ascending eigenvalue.
#[derive(Debug, Clone)]
pub struct SortedEigen {
    pub values: Vec<f64>,
    /// Column `i` is the unit eigenvector of `values[i]`.
    pub vectors: DMatrix<f64>,
}

pub fn symmetric_eigen(matrix: DMatrix<f64>) -> Result<SortedEigen> {
    let n = matrix.nrows();
    if n == 0 || matrix.ncols() != n {
        return Err(Error::ConvergenceFailure("matrix must be square and nonempty".into()));
    }
    let eig = matrix
        .try_symmetric_eigen(f64::EPSILON, 0)
        .ok_or_else(|| Error::ConvergenceFailure(format!("{n}x{n} symmetric eigen-solve")))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::ConvergenceFailure("non-finite eigenvalue".into()));
    }
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(SortedEigen { values, vectors })
}

/// Smallest eigenvalues of a symmetric matrix (all of them sorted).
pub fn symmetric_eigenvalues(matrix: DMatrix<f64>) -> Result<Vec<f64>> {
    let n = matrix.nrows();
    let eig = matrix
        .try_symmetric_eigen(f64::EPSILON, 0)
        .ok_or_else(|| Error::ConvergenceFailure(format!("{n}x{n} symmetric eigen-solve")))?;
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::ConvergenceFailure("non-finite eigenvalue".into()));
    }
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Restrict the quadratic form of `matrix` to the orthogonal complement of
/// the span of `constraints`. Constraints are orthonormalised by modified
/// Gram-Schmidt and then mapped onto leading unit vectors by Householder
/// reflections; the returned matrix is the trailing block.
pub fn deflate_constraints(matrix: &DMatrix<f64>, constraints: &[DVector<f64>]) -> Result<DMatrix<f64>> {
    let n = matrix.nrows();
    let k = constraints.len();
    if k == 0 {
        return Ok(matrix.clone());
    }
    if k >= n {
        return Err(Error::ConstraintDegenerate);
    }
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(k);
    for c in constraints {
        let norm0 = c.norm();
        if norm0 == 0.0 || !norm0.is_finite() {
            return Err(Error::ConstraintDegenerate);
        }
        let mut v = c / norm0;
        for _ in 0..2 {
            for b in &basis {
                let proj = b.dot(&v);
                v -= b * proj;
            }
        }
        let norm = v.norm();
        if norm < 1e-8 {
            return Err(Error::ConstraintDegenerate);
        }
        basis.push(v / norm);
    }

    let mut a = matrix.clone();
    let mut q = basis;
    for step in 0..k {
        // Reflect q[step] (restricted to indices >= step) onto e_step.
        let x = q[step].rows(step, n - step).into_owned();
        let alpha = if x[0] > 0.0 { -x.norm() } else { x.norm() };
        let mut v = x.clone();
        v[0] -= alpha;
        let vnorm = v.norm();
        if vnorm > 0.0 {
            v /= vnorm;
            let mut full = DVector::zeros(n);
            full.rows_mut(step, n - step).copy_from(&v);
            apply_reflection(&mut a, &full);
            for qv in q.iter_mut().skip(step + 1) {
                let d = full.dot(qv);
                *qv -= &full * (2.0 * d);
            }
        }
    }
    Ok(a.view((k, k), (n - k, n - k)).into_owned())
}

/// `A <- H A H` with `H = I - 2 v v^T`, `|v| = 1`.
fn apply_reflection(a: &mut DMatrix<f64>, v: &DVector<f64>) {
    let av = &*a * v;
    let vav = v.dot(&av);
    // H A H = A - 2 v (Av)^T - 2 (Av) v^T + 4 (v^T A v) v v^T
    let w = &av - v * vav;
    a.ger(-2.0, v, &w, 1.0);
    a.ger(-2.0, &w, v, 1.0);
}
