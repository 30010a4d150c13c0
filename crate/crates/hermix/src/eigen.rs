//! Dense real-symmetric eigensolver: Householder reduction to tridiagonal
//! form followed by the implicit-shift QL iteration, with accumulated
//! eigenvectors.
//!
//! This is the classic EISPACK tred2/tql2 pair (by way of the public-domain
//! Jama translation). It is the single numeric kernel of the crate: Hermitian
//! matrices are solved through their real-symmetric embedding in
//! [`crate::spectra`]. The iteration order is fixed, so identical inputs
//! produce bit-identical outputs on one platform.

use thiserror::Error;

/// QL sweeps allowed per eigenvalue before giving up.
const MAX_QL_ITERATIONS: usize = 50;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("QL iteration failed to converge after {iterations} sweeps")]
pub struct ConvergenceError {
    pub iterations: usize,
}

/// Eigendecomposition of a real symmetric matrix.
#[derive(Debug, Clone)]
pub struct RealSymmetricEigen {
    n: usize,
    /// Eigenvalues in ascending order.
    values: Vec<f64>,
    /// Orthonormal eigenvectors, flat row-major; column `j` pairs with
    /// `values[j]`.
    vectors: Vec<f64>,
}

impl RealSymmetricEigen {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Eigenvector paired with `values[j]`.
    pub fn vector(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|k| self.vectors[k * self.n + j]).collect()
    }
}

/// Decomposes a symmetric matrix given as a flat row-major slice of length
/// `n * n`. Only the values actually stored are used; the caller is
/// responsible for symmetry.
pub fn decompose_symmetric(a: &[f64], n: usize) -> Result<RealSymmetricEigen, ConvergenceError> {
    assert_eq!(a.len(), n * n, "matrix storage must be n*n");
    if n == 0 {
        return Ok(RealSymmetricEigen {
            n,
            values: Vec::new(),
            vectors: Vec::new(),
        });
    }
    let mut v = a.to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut v, &mut d, &mut e, n);
    tql2(&mut v, &mut d, &mut e, n)?;
    sort_ascending(&mut v, &mut d, n);
    Ok(RealSymmetricEigen {
        n,
        values: d,
        vectors: v,
    })
}

/// Householder reduction of `v` to tridiagonal form, accumulating the
/// orthogonal transformation back into `v`. On return `d` holds the diagonal
/// and `e` the subdiagonal (in `e[1..]`).
fn tred2(v: &mut [f64], d: &mut [f64], e: &mut [f64], n: usize) {
    for j in 0..n {
        d[j] = v[(n - 1) * n + j];
    }

    for i in (1..n).rev() {
        // Scale to avoid under/overflow.
        let mut scale = 0.0;
        let mut h = 0.0;
        for item in d.iter().take(i) {
            scale += item.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1) * n + j];
                v[i * n + j] = 0.0;
                v[j * n + i] = 0.0;
            }
        } else {
            // Generate the Householder vector.
            for item in d.iter_mut().take(i) {
                *item /= scale;
                h += *item * *item;
            }
            let f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for item in e.iter_mut().take(i) {
                *item = 0.0;
            }

            // Apply the similarity transformation to the remaining columns.
            for j in 0..i {
                let f = d[j];
                v[j * n + i] = f;
                let mut g = e[j] + v[j * n + j] * f;
                for k in (j + 1)..i {
                    g += v[k * n + j] * d[k];
                    e[k] += v[k * n + j] * f;
                }
                e[j] = g;
            }
            let mut f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                let f = d[j];
                let g = e[j];
                for k in j..i {
                    v[k * n + j] -= f * e[k] + g * d[k];
                }
                d[j] = v[(i - 1) * n + j];
                v[i * n + j] = 0.0;
            }
        }
        d[i] = h;
    }

    // Accumulate the transformations.
    for i in 0..(n - 1) {
        v[(n - 1) * n + i] = v[i * n + i];
        v[i * n + i] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[k * n + i + 1] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[k * n + i + 1] * v[k * n + j];
                }
                for k in 0..=i {
                    v[k * n + j] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[k * n + i + 1] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[(n - 1) * n + j];
        v[(n - 1) * n + j] = 0.0;
    }
    v[(n - 1) * n + n - 1] = 1.0;
    e[0] = 0.0;
}

/// Implicit-shift QL iteration on the tridiagonal form, accumulating the
/// rotations into `v`. Leaves the eigenvalues in `d`.
fn tql2(v: &mut [f64], d: &mut [f64], e: &mut [f64], n: usize) -> Result<(), ConvergenceError> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0f64;
    let mut tst1 = 0.0f64;
    let eps = 2.0f64.powi(-52);
    for l in 0..n {
        // Find a small subdiagonal element.
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }

        // If m == l, d[l] is an eigenvalue; otherwise iterate.
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_QL_ITERATIONS {
                    return Err(ConvergenceError { iterations: iter });
                }

                // Implicit shift.
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for item in d.iter_mut().take(n).skip(l + 2) {
                    *item -= h;
                }
                f += h;

                // Implicit QL sweep.
                p = d[m];
                let mut c = 1.0f64;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0f64;
                let mut s2 = 0.0f64;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    // Accumulate the rotation.
                    for k in 0..n {
                        let h = v[k * n + i + 1];
                        v[k * n + i + 1] = s * v[k * n + i] + c * h;
                        v[k * n + i] = c * v[k * n + i] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

fn sort_ascending(v: &mut [f64], d: &mut [f64], n: usize) {
    for i in 0..n.saturating_sub(1) {
        let mut k = i;
        let mut p = d[i];
        for j in (i + 1)..n {
            if d[j] < p {
                k = j;
                p = d[j];
            }
        }
        if k != i {
            d.swap(k, i);
            for row in 0..n {
                v.swap(row * n + i, row * n + k);
            }
        }
    }
}
