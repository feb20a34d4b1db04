use ndarray::Array2;

use super::NumericsError;

/// Eigen-decomposition of a real symmetric matrix.
///
/// `values` are sorted descending and `vectors` holds the matching
/// eigenvectors as orthonormal columns. Each column is sign-normalized so its
/// largest-magnitude entry is positive, which keeps outputs reproducible
/// across platforms.
#[derive(Debug, Clone)]
pub struct SymEig {
    pub values: Vec<f64>,
    pub vectors: Array2<f64>,
}

const SYMMETRY_TOL: f64 = 1e-10;
const MAX_QL_ITERATIONS: usize = 60;

/// Top-`k` eigenpairs of a symmetric matrix via full Householder
/// tridiagonalization followed by implicit-shift QL.
///
/// Dense `n <= ~3000` is the intended envelope; the decomposition is always
/// computed in full and the leading pairs selected afterwards.
pub fn sym_eig(m: &Array2<f64>, top_k: usize) -> Result<SymEig, NumericsError> {
    let n = check_square_symmetric(m)?;
    if top_k == 0 || top_k > n {
        return Err(NumericsError::TopKOutOfRange { top_k, n });
    }
    let full = sym_eig_full(m)?;
    let vectors = full.vectors.slice(ndarray::s![.., 0..top_k]).to_owned();
    Ok(SymEig {
        values: full.values[0..top_k].to_vec(),
        vectors,
    })
}

/// Full eigen-decomposition, eigenvalues descending.
pub fn sym_eig_full(m: &Array2<f64>) -> Result<SymEig, NumericsError> {
    let n = check_square_symmetric(m)?;
    let mut v: Vec<f64> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            // Work on the symmetrized matrix so the tolerance-level asymmetry
            // allowed by the contract cannot leak into the result.
            v.push(0.5 * (m[(i, j)] + m[(j, i)]));
        }
    }
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(n, &mut v, &mut d, &mut e);
    tql2(n, &mut d, &mut e, &mut v)?;

    // Ascending from QL; emit descending.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[b].partial_cmp(&d[a]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let mut vectors = Array2::zeros((n, n));
    for (col, &src) in order.iter().enumerate() {
        let mut max_abs = 0.0;
        let mut sign = 1.0;
        for row in 0..n {
            let x = v[row * n + src];
            if x.abs() > max_abs {
                max_abs = x.abs();
                sign = if x >= 0.0 { 1.0 } else { -1.0 };
            }
        }
        for row in 0..n {
            vectors[(row, col)] = sign * v[row * n + src];
        }
    }
    Ok(SymEig { values, vectors })
}

/// Frobenius-nearest positive semidefinite matrix: eigenvalues clipped at 0.
pub fn project_psd(q: &Array2<f64>) -> Result<Array2<f64>, NumericsError> {
    let n = check_square_symmetric(q)?;
    let eig = sym_eig_full(q)?;
    let mut out = Array2::zeros((n, n));
    for k in 0..n {
        let lam = eig.values[k].max(0.0);
        if lam == 0.0 {
            continue;
        }
        for i in 0..n {
            let vik = eig.vectors[(i, k)];
            if vik == 0.0 {
                continue;
            }
            for j in 0..n {
                out[(i, j)] += lam * vik * eig.vectors[(j, k)];
            }
        }
    }
    // Symmetrize away reconstruction roundoff.
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (out[(i, j)] + out[(j, i)]);
            out[(i, j)] = avg;
            out[(j, i)] = avg;
        }
    }
    Ok(out)
}

fn check_square_symmetric(m: &Array2<f64>) -> Result<usize, NumericsError> {
    let (rows, cols) = m.dim();
    if rows != cols {
        return Err(NumericsError::NotSquare { rows, cols });
    }
    if rows == 0 {
        return Err(NumericsError::Empty);
    }
    let scale = m.iter().fold(0.0f64, |a, &x| a.max(x.abs())).max(1.0);
    let tol = SYMMETRY_TOL * scale;
    for i in 0..rows {
        for j in (i + 1)..rows {
            let delta = (m[(i, j)] - m[(j, i)]).abs();
            if delta > tol {
                return Err(NumericsError::NotSymmetric { i, j, delta, tol });
            }
        }
    }
    Ok(rows)
}

// Householder reduction to tridiagonal form; EISPACK tred2 as in the JAMA
// lineage. `v` is n x n row-major and accumulates the transformation.
fn tred2(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64]) {
    for j in 0..n {
        d[j] = v[(n - 1) * n + j];
    }

    for i in (1..n).rev() {
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
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let mut f = d[i - 1];
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

            for j in 0..i {
                f = d[j];
                v[j * n + i] = f;
                g = e[j] + v[j * n + j] * f;
                for k in (j + 1)..i {
                    g += v[k * n + j] * d[k];
                    e[k] += v[k * n + j] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[k * n + j] -= f * e[k] + g * d[k];
                }
                d[j] = v[(i - 1) * n + j];
                v[i * n + j] = 0.0;
            }
        }
        d[i] = h;
    }

    for i in 0..(n - 1) {
        v[(n - 1) * n + i] = v[i * n + i];
        v[i * n + i] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[k * n + (i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[k * n + (i + 1)] * v[k * n + j];
                }
                for k in 0..=i {
                    v[k * n + j] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[k * n + (i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[(n - 1) * n + j];
        v[(n - 1) * n + j] = 0.0;
    }
    v[(n - 1) * n + (n - 1)] = 1.0;
    e[0] = 0.0;
}

// Implicit-shift QL on the tridiagonal (d, e), accumulating rotations into v.
// Eigenvalues come out ascending in d.
fn tql2(n: usize, d: &mut [f64], e: &mut [f64], v: &mut [f64]) -> Result<(), NumericsError> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0f64;
    let mut tst1 = 0.0f64;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m == n {
            m = n - 1;
        }

        if m > l {
            let mut iter = 0usize;
            loop {
                iter += 1;
                if iter > MAX_QL_ITERATIONS {
                    return Err(NumericsError::NoConvergence {
                        iterations: iter,
                        residual: e[l].abs(),
                    });
                }

                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = hypot(p, 1.0);
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

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    for k in 0..n {
                        h = v[k * n + (i + 1)];
                        v[k * n + (i + 1)] = s * v[k * n + i] + c * h;
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

fn hypot(a: f64, b: f64) -> f64 {
    a.hypot(b)
}
