//! Dense Gaussian elimination over a [`Scalar`] field.

use super::scalar::{max_abs, Scalar};

/// Reduced row echelon form of `rows` (in place). Returns the pivot columns.
///
/// In float mode the pivot is the entry of largest magnitude in the column
/// and entries with magnitude below `eps` (relative to the matrix scale) are
/// treated as zero.
pub fn rref<T: Scalar>(rows: &mut [Vec<T>], eps: f64) -> Vec<usize> {
    let m = rows.len();
    if m == 0 {
        return Vec::new();
    }
    let n = rows[0].len();
    let scale = rows
        .iter()
        .map(|r| max_abs(r).to_f64())
        .fold(0.0f64, f64::max)
        .max(1.0);
    let thresh = eps * scale;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        let mut best: Option<usize> = None;
        for i in r..m {
            if rows[i][c].is_zero_eps(thresh) {
                continue;
            }
            best = match best {
                None => Some(i),
                Some(b) if !T::EXACT && rows[i][c].abs() > rows[b][c].abs() => Some(i),
                keep => keep,
            };
        }
        let Some(p) = best else {
            for row in rows.iter_mut().skip(r) {
                row[c] = T::zero();
            }
            continue;
        };
        rows.swap(r, p);
        let inv = T::one() / rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..m {
            if i == r || rows[i][c].is_zero_eps(0.0) {
                continue;
            }
            let f = rows[i][c].clone();
            for j in 0..n {
                let v = rows[r][j].clone();
                rows[i][j] = rows[i][j].clone() - f.clone() * v;
            }
            rows[i][c] = T::zero();
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of a family of vectors. An empty family has rank 0.
pub fn rank<T: Scalar>(vectors: &[Vec<T>], eps: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let mut rows = vectors.to_vec();
    rref(&mut rows, eps).len()
}

/// Basis of the null space `{x : M x = 0}` where `M` has rows `rows` and
/// `ncols` columns.
pub fn nullspace<T: Scalar>(rows: &[Vec<T>], ncols: usize, eps: f64) -> Vec<Vec<T>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, eps);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![T::zero(); ncols];
            x[f] = T::one();
            for (r, &p) in pivots.iter().enumerate() {
                x[p] = -m[r][f].clone();
            }
            x
        })
        .collect()
}

/// Transposes a list of column vectors into rows.
pub fn columns_to_rows<T: Scalar>(cols: &[Vec<T>]) -> Vec<Vec<T>> {
    if cols.is_empty() {
        return Vec::new();
    }
    let d = cols[0].len();
    (0..d)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect()
}

/// Coefficients `c` with `Σ c_i cols_i = target` when the columns are
/// linearly independent and the target lies in their span.
pub fn solve_in_span<T: Scalar>(cols: &[Vec<T>], target: &[T], eps: f64) -> Option<Vec<T>> {
    let k = cols.len();
    let mut aug: Vec<Vec<T>> = columns_to_rows(cols);
    if aug.is_empty() {
        return if target.iter().all(|t| t.is_zero_eps(eps)) && k == 0 {
            Some(Vec::new())
        } else {
            None
        };
    }
    for (row, t) in aug.iter_mut().zip(target) {
        row.push(t.clone());
    }
    let pivots = rref(&mut aug, eps);
    if pivots.len() != k || pivots.contains(&k) {
        return None;
    }
    Some((0..k).map(|i| aug[i][k].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_i64(n)
    }

    #[test]
    fn rank_of_identity() {
        let v = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        assert_eq!(rank(&v, 1e-9), 2);
        let e: Vec<Vec<f64>> = Vec::new();
        assert_eq!(rank(&e, 1e-9), 0);
    }

    #[test]
    fn rank_exact_dependent() {
        let v = vec![
            vec![q(1), q(2), q(3)],
            vec![q(2), q(4), q(6)],
            vec![q(0), q(1), q(1)],
        ];
        assert_eq!(rank(&v, 0.0), 2);
    }

    #[test]
    fn nullspace_is_annihilated() {
        let m = vec![vec![1.0, 1.0, -1.0, -1.0], vec![0.0, 1.0, 0.0, -1.0]];
        let ns = nullspace(&m, 4, 1e-12);
        assert_eq!(ns.len(), 2);
        for x in ns {
            for row in &m {
                let s: f64 = row.iter().zip(&x).map(|(a, b)| a * b).sum();
                assert!(s.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn span_solve() {
        let cols = vec![vec![q(1), q(0), q(1)], vec![q(0), q(1), q(1)]];
        let c = solve_in_span(&cols, &[q(2), q(3), q(5)], 0.0).unwrap();
        assert_eq!(c, vec![q(2), q(3)]);
        assert!(solve_in_span(&cols, &[q(2), q(3), q(6)], 0.0).is_none());
    }
}
