use ndarray::Array2;

use super::NumericsError;

/// Result of maximizing `sum_s C[s, perm[s]]` over permutations.
#[derive(Debug, Clone)]
pub struct Assignment {
    pub perm: Vec<usize>,
    pub score: f64,
}

/// Best label permutation for a nonnegative confusion matrix.
///
/// Exhaustive search for `k <= 8` (at most 8! candidates), Hungarian
/// assignment above that. Both branches maximize the same objective and agree
/// on the overlapping range.
pub fn best_permutation(c: &Array2<f64>) -> Result<Assignment, NumericsError> {
    let (rows, cols) = c.dim();
    if rows != cols {
        return Err(NumericsError::NotSquare { rows, cols });
    }
    if rows == 0 {
        return Err(NumericsError::Empty);
    }
    for ((i, j), &x) in c.indexed_iter() {
        if !x.is_finite() || x < 0.0 {
            return Err(NumericsError::InvalidEntry { i, j, value: x });
        }
    }
    if rows <= 8 {
        Ok(brute_force(c))
    } else {
        Ok(hungarian_max(c))
    }
}

pub(crate) fn brute_force(c: &Array2<f64>) -> Assignment {
    let k = c.nrows();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut best = perm.clone();
    let mut best_score = trace_under(c, &perm);
    // Heap's algorithm over all k! permutations.
    let mut counters = vec![0usize; k];
    let mut i = 0;
    while i < k {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            let score = trace_under(c, &perm);
            if score > best_score {
                best_score = score;
                best = perm.clone();
            }
            counters[i] += 1;
            i = 0;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    Assignment {
        perm: best,
        score: best_score,
    }
}

fn trace_under(c: &Array2<f64>, perm: &[usize]) -> f64 {
    perm.iter().enumerate().map(|(s, &t)| c[(s, t)]).sum()
}

// O(k^3) Hungarian algorithm with row/column potentials, maximizing by
// negating the matrix.
pub(crate) fn hungarian_max(c: &Array2<f64>) -> Assignment {
    let n = c.nrows();
    let inf = f64::INFINITY;
    // 1-based with a dummy 0 row/column.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = -c[(i0 - 1, j - 1)] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut perm = vec![0usize; n];
    for j in 1..=n {
        if p[j] > 0 {
            perm[p[j] - 1] = j - 1;
        }
    }
    let score = trace_under(c, &perm);
    Assignment { perm, score }
}
