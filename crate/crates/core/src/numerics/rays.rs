//! Extreme rays of a pointed polyhedral cone `{x : a_k · x >= 0}` by the
//! double-description method. Intended for ambient dimension at most
//! [`RAY_DIM_LIMIT`].

use std::cmp::Ordering;

use super::linalg::{rank, rref};
use super::scalar::{dot, max_abs, scale_vec, vec_eq, Scalar, Tolerance};
use crate::error::{Error, Result};

pub const RAY_DIM_LIMIT: usize = 4;

pub fn extreme_rays<T: Scalar>(inequalities: &[Vec<T>], tol: &Tolerance) -> Result<Vec<Vec<T>>> {
    let Some(first) = inequalities.first() else {
        return Err(Error::InvalidInput("cone given by no inequalities".into()));
    };
    let d = first.len();
    if d > RAY_DIM_LIMIT {
        return Err(Error::DimensionLimit {
            dim: d,
            limit: RAY_DIM_LIMIT,
        });
    }
    if d == 0 {
        return Err(Error::InvalidInput("zero-dimensional cone".into()));
    }
    for a in inequalities {
        if a.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: a.len(),
            });
        }
    }
    let eps = if T::EXACT { 0.0 } else { tol.eps_rank };
    let rows: Vec<Vec<T>> = inequalities
        .iter()
        .filter(|a| !a.iter().all(|x| x.is_zero_eps(eps)))
        .map(|a| normalize_max(a))
        .collect();

    // Initial simplicial cone from d independent rows.
    let mut basis_idx = Vec::new();
    for (i, a) in rows.iter().enumerate() {
        let mut trial: Vec<Vec<T>> = basis_idx.iter().map(|&j: &usize| rows[j].clone()).collect();
        trial.push(a.clone());
        if rank(&trial, eps) == trial.len() {
            basis_idx.push(i);
            if basis_idx.len() == d {
                break;
            }
        }
    }
    if basis_idx.len() < d {
        return Err(Error::InvalidInput(
            "cone is not pointed (inequalities do not span the space)".into(),
        ));
    }
    let a0: Vec<Vec<T>> = basis_idx.iter().map(|&i| rows[i].clone()).collect();
    let inv = inverse(&a0, eps).expect("independent rows are invertible");
    // Column j of the inverse satisfies a0 r = e_j.
    let mut rays: Vec<Vec<T>> = (0..d)
        .map(|j| normalize_max(&(0..d).map(|i| inv[i][j].clone()).collect::<Vec<_>>()))
        .collect();
    let mut processed: Vec<usize> = basis_idx.clone();

    for (i, a) in rows.iter().enumerate() {
        if basis_idx.contains(&i) {
            continue;
        }
        let vals: Vec<T> = rays.iter().map(|r| dot(a, r)).collect();
        let mut next: Vec<Vec<T>> = Vec::new();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (k, v) in vals.iter().enumerate() {
            match v.sign(eps) {
                Ordering::Greater => {
                    pos.push(k);
                    next.push(rays[k].clone());
                }
                Ordering::Equal => next.push(rays[k].clone()),
                Ordering::Less => neg.push(k),
            }
        }
        for &p in &pos {
            for &n in &neg {
                let common: Vec<Vec<T>> = processed
                    .iter()
                    .filter(|&&j| {
                        dot(&rows[j], &rays[p]).is_zero_eps(eps)
                            && dot(&rows[j], &rays[n]).is_zero_eps(eps)
                    })
                    .map(|&j| rows[j].clone())
                    .collect();
                if d >= 2 && rank(&common, eps) != d - 2 {
                    continue;
                }
                let vp = vals[p].clone();
                let vn = vals[n].clone();
                let combo: Vec<T> = rays[n]
                    .iter()
                    .zip(&rays[p])
                    .map(|(xn, xp)| vp.clone() * xn.clone() - vn.clone() * xp.clone())
                    .collect();
                next.push(normalize_max(&combo));
            }
        }
        rays = next;
        processed.push(i);
    }

    let mut out: Vec<Vec<T>> = Vec::new();
    for r in rays.iter().map(|r| canonical_ray(r, eps)) {
        if !out.iter().any(|o| vec_eq(o, &r, eps.max(1e-12) * 10.0)) {
            out.push(r);
        }
    }
    out.sort_by(|a, b| lex_cmp(a, b));
    Ok(out)
}

/// Lexicographic order on vectors (float comparison, exact for rationals).
pub fn lex_cmp<T: Scalar>(a: &[T], b: &[T]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    a.len().cmp(&b.len())
}

fn normalize_max<T: Scalar>(v: &[T]) -> Vec<T> {
    let m = max_abs(v);
    if m.is_zero_eps(0.0) {
        return v.to_vec();
    }
    scale_vec(&(T::one() / m), v)
}

/// Canonical ray representative: last coordinate scaled to magnitude one
/// when it is nonzero; otherwise unit Euclidean norm (float) or unit
/// max-norm (exact, where square roots are unavailable).
pub fn canonical_ray<T: Scalar>(r: &[T], eps: f64) -> Vec<T> {
    let last = r.last().cloned().unwrap_or_else(T::zero);
    if !last.is_zero_eps(eps) {
        return scale_vec(&(T::one() / last.abs()), r);
    }
    if T::EXACT {
        return normalize_max(r);
    }
    let n2 = dot(r, r);
    match n2.sqrt() {
        Some(n) if !n.is_zero_eps(0.0) => scale_vec(&(T::one() / n), r),
        _ => r.to_vec(),
    }
}

fn inverse<T: Scalar>(m: &[Vec<T>], eps: f64) -> Option<Vec<Vec<T>>> {
    let d = m.len();
    let mut aug: Vec<Vec<T>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..d).map(|j| if i == j { T::one() } else { T::zero() }));
            r
        })
        .collect();
    let piv = rref(&mut aug, eps);
    if piv.len() != d || piv.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[d..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_i64(n)
    }

    #[test]
    fn simplex_cone_has_coordinate_rays() {
        let rows = vec![
            vec![q(1), q(0), q(0)],
            vec![q(0), q(1), q(0)],
            vec![q(0), q(0), q(1)],
        ];
        let rays = extreme_rays(&rows, &Tolerance::default()).unwrap();
        assert_eq!(rays.len(), 3);
        for r in &rays {
            assert_eq!(r.iter().filter(|x| **x != q(0)).count(), 1);
        }
    }

    #[test]
    fn square_cone_exact() {
        // Dual cone of the square with vertices (0,0),(0,1),(1,1),(1,0) at z=1.
        let rows = vec![
            vec![q(0), q(0), q(1)],
            vec![q(0), q(1), q(1)],
            vec![q(1), q(1), q(1)],
            vec![q(1), q(0), q(1)],
        ];
        let rays = extreme_rays(&rows, &Tolerance::default()).unwrap();
        assert_eq!(rays.len(), 4);
        let expected = [
            vec![q(-1), q(0), q(1)],
            vec![q(0), q(-1), q(1)],
            vec![q(0), q(1), q(0)],
            vec![q(1), q(0), q(0)],
        ];
        for e in &expected {
            assert!(rays.contains(e), "missing {e:?} in {rays:?}");
        }
    }

    #[test]
    fn too_many_dimensions() {
        let rows = vec![vec![1.0; 5]];
        assert!(matches!(
            extreme_rays(&rows, &Tolerance::default()),
            Err(Error::DimensionLimit { dim: 5, limit: 4 })
        ));
    }

    #[test]
    fn non_pointed_cone_rejected() {
        let rows = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]];
        assert!(extreme_rays(&rows, &Tolerance::default()).is_err());
    }
}
