//! Convex-hull and conic membership with certificates.

use serde::Serialize;

use super::lp::{LinearProgram, LpOutcome};
use super::scalar::{axpy, dot, vec_eq, zeros, Scalar, Tolerance};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum HullResult<T> {
    /// Convex weights, one per generator.
    Inside { coefficients: Vec<T> },
    /// `functional · point > offset >= functional · g` for every generator `g`.
    Outside { functional: Vec<T>, offset: T },
}

impl<T: Scalar> HullResult<T> {
    pub fn is_inside(&self) -> bool {
        matches!(self, HullResult::Inside { .. })
    }

    /// Re-checks the result against the original query.
    pub fn replays(&self, point: &[T], generators: &[Vec<T>], eps: f64) -> bool {
        match self {
            HullResult::Inside { coefficients } => {
                if coefficients.len() != generators.len()
                    || coefficients.iter().any(|c| c.is_neg(eps))
                {
                    return false;
                }
                let total = coefficients.iter().fold(T::zero(), |a, c| a + c.clone());
                let mut acc = zeros(point.len());
                for (c, g) in coefficients.iter().zip(generators) {
                    axpy(&mut acc, c, g);
                }
                (total - T::one()).is_zero_eps(eps)
                    && vec_eq(&acc, point, eps)
            }
            HullResult::Outside { functional, offset } => {
                dot(functional, point).cmp_eps(offset, eps).is_gt()
                    && generators
                        .iter()
                        .all(|g| !dot(functional, g).cmp_eps(offset, eps).is_gt())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum ConicResult<T> {
    /// Nonnegative coefficients, one per ray, with at most `dim` nonzeros.
    Decomposed { coefficients: Vec<T> },
    /// `functional · r <= 0` for every ray and `functional · v > 0`.
    Separated { functional: Vec<T> },
}

impl<T: Scalar> ConicResult<T> {
    pub fn replays(&self, v: &[T], rays: &[Vec<T>], eps: f64) -> bool {
        match self {
            ConicResult::Decomposed { coefficients } => {
                if coefficients.len() != rays.len() || coefficients.iter().any(|c| c.is_neg(eps)) {
                    return false;
                }
                let mut acc = zeros(v.len());
                for (c, r) in coefficients.iter().zip(rays) {
                    axpy(&mut acc, c, r);
                }
                vec_eq(&acc, v, eps)
            }
            ConicResult::Separated { functional } => {
                dot(functional, v).is_pos(eps) && rays.iter().all(|r| !dot(functional, r).is_pos(eps))
            }
        }
    }
}

fn check_dims<T>(point: &[T], generators: &[Vec<T>]) -> Result<()> {
    for g in generators {
        if g.len() != point.len() {
            return Err(Error::DimensionMismatch {
                expected: point.len(),
                found: g.len(),
            });
        }
    }
    Ok(())
}

/// Decides `point ∈ conv(generators)`.
pub fn in_convex_hull<T: Scalar>(
    point: &[T],
    generators: &[Vec<T>],
    tol: &Tolerance,
) -> Result<HullResult<T>> {
    if generators.is_empty() {
        return Err(Error::InvalidInput("convex hull of no generators".into()));
    }
    check_dims(point, generators)?;
    let d = point.len();
    let k = generators.len();
    let mut lp = LinearProgram::new(k);
    for i in 0..d {
        let row = generators.iter().map(|g| g[i].clone()).collect();
        lp.add_row(row, point[i].clone());
    }
    lp.add_row(vec![T::one(); k], T::one());
    match lp.solve(tol)? {
        LpOutcome::Feasible { solution, .. } => Ok(HullResult::Inside {
            coefficients: solution,
        }),
        LpOutcome::Infeasible { farkas } => {
            // yᵀ[g;1] <= 0 and yᵀ[p;1] > 0, so φ = y[..d] separates with
            // offset -y[d].
            let functional = farkas[..d].to_vec();
            let offset = -farkas[d].clone();
            Ok(HullResult::Outside { functional, offset })
        }
        LpOutcome::Unbounded { .. } => unreachable!("feasibility problem has no objective"),
    }
}

/// Writes `v` as a nonnegative combination of `rays`.
pub fn conic_decompose<T: Scalar>(
    v: &[T],
    rays: &[Vec<T>],
    tol: &Tolerance,
) -> Result<ConicResult<T>> {
    check_dims(v, rays)?;
    let eps = if T::EXACT { 0.0 } else { tol.eps_feas };
    if rays.iter().any(|r| r.iter().all(|x| x.is_zero_eps(eps))) {
        return Err(Error::InvalidInput("conic decomposition over a zero ray".into()));
    }
    let d = v.len();
    let mut lp = LinearProgram::new(rays.len());
    for i in 0..d {
        let row = rays.iter().map(|r| r[i].clone()).collect();
        lp.add_row(row, v[i].clone());
    }
    match lp.solve(tol)? {
        LpOutcome::Feasible { solution, .. } => Ok(ConicResult::Decomposed {
            coefficients: solution,
        }),
        LpOutcome::Infeasible { farkas } => Ok(ConicResult::Separated { functional: farkas }),
        LpOutcome::Unbounded { .. } => unreachable!("feasibility problem has no objective"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    fn square() -> Vec<Vec<BigRational>> {
        vec![
            vec![q(0, 1), q(0, 1)],
            vec![q(1, 1), q(0, 1)],
            vec![q(0, 1), q(1, 1)],
            vec![q(1, 1), q(1, 1)],
        ]
    }

    #[test]
    fn centre_of_square_is_inside() {
        let tol = Tolerance::default();
        let p = vec![q(1, 2), q(1, 2)];
        let r = in_convex_hull(&p, &square(), &tol).unwrap();
        assert!(r.is_inside());
        assert!(r.replays(&p, &square(), 0.0));
    }

    #[test]
    fn far_point_is_separated() {
        let tol = Tolerance::default();
        let p = vec![q(2, 1), q(0, 1)];
        let r = in_convex_hull(&p, &square(), &tol).unwrap();
        assert!(!r.is_inside());
        assert!(r.replays(&p, &square(), 0.0));
    }

    #[test]
    fn conic_failure_has_certificate() {
        let tol = Tolerance::default();
        let rays = vec![vec![1.0, 0.0], vec![1.0, 1.0]];
        let v = vec![-1.0, 0.5];
        let r = conic_decompose(&v, &rays, &tol).unwrap();
        assert!(matches!(r, ConicResult::Separated { .. }));
        assert!(r.replays(&v, &rays, 1e-9));
    }

    #[test]
    fn empty_generators_rejected() {
        let g: Vec<Vec<f64>> = Vec::new();
        assert!(in_convex_hull(&[1.0], &g, &Tolerance::default()).is_err());
    }
}
