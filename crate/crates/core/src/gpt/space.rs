use serde::Serialize;

use super::observable::{Effect, Observable};
use crate::error::{Error, Result};
use crate::numerics::lp::{LinearProgram, LpOutcome};
use crate::numerics::rays::extreme_rays;
use crate::numerics::scalar::{dot, is_zero_vec, scale_vec, vec_eq, Scalar};
use crate::numerics::{in_convex_hull, rank, Tolerance};

/// The structural questions every effect space must answer. Implemented by
/// polytopic [`StateSpace`]s and by the qubit effect space.
pub trait EffectSpace<T: Scalar>: Send + Sync {
    fn name(&self) -> &str;
    fn dim(&self) -> usize;
    fn unit(&self) -> &[T];
    fn is_valid_effect(&self, e: &[T], tol: &Tolerance) -> bool;
    /// Whether the nonzero effect `e` spans an extreme ray of the positive
    /// dual cone.
    fn is_indecomposable(&self, e: &[T], tol: &Tolerance) -> Result<bool>;
    /// Indecomposable effects summing to `e`.
    fn decompose_into_indecomposables(&self, e: &[T], tol: &Tolerance) -> Result<Vec<Effect<T>>>;
    /// Largest `c` such that `e - c u` is still in the positive cone.
    fn unit_content(&self, e: &[T], tol: &Tolerance) -> Result<T>;
    /// Extreme states, when the state space is a polytope.
    fn extreme_states(&self) -> Option<&[Vec<T>]> {
        None
    }
    /// The effects of `a` span the whole effect space.
    fn is_informationally_complete(&self, a: &Observable<T>, tol: &Tolerance) -> bool {
        rank(&a.effects(), tol.eps_rank) == self.dim()
    }
}

/// Polytopic state space given by its extreme states. States carry the
/// normalization in their last coordinate and the unit functional is
/// usually `(0, …, 0, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateSpace<T> {
    name: String,
    ambient_dim: usize,
    extreme_states: Vec<Vec<T>>,
    unit: Vec<T>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceDiagnostic {
    Normalization { state: usize, value: f64 },
    NotSpanning { rank: usize, ambient_dim: usize },
    Duplicate { state: usize, duplicate_of: usize },
    Redundant { state: usize },
    NoStates,
}

impl<T: Scalar> StateSpace<T> {
    pub fn new(name: impl Into<String>, extreme_states: Vec<Vec<T>>, unit: Vec<T>) -> Result<Self> {
        let ambient_dim = unit.len();
        if ambient_dim == 0 {
            return Err(Error::InvalidInput("zero-dimensional state space".into()));
        }
        for s in &extreme_states {
            if s.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: s.len(),
                });
            }
        }
        Ok(StateSpace {
            name: name.into(),
            ambient_dim,
            extreme_states,
            unit,
        })
    }

    /// Unit functional `(0, …, 0, 1)` on states given in that embedding.
    pub fn with_last_unit(name: impl Into<String>, extreme_states: Vec<Vec<T>>) -> Result<Self> {
        let d = extreme_states
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidInput("state space without states".into()))?;
        let mut unit = vec![T::zero(); d];
        unit[d - 1] = T::one();
        Self::new(name, extreme_states, unit)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn states(&self) -> &[Vec<T>] {
        &self.extreme_states
    }

    pub fn evaluate(&self, e: &[T], state: usize) -> T {
        dot(e, &self.extreme_states[state])
    }

    /// Lists every violated invariant; an empty list means the space is valid.
    pub fn validate(&self, tol: &Tolerance) -> Vec<SpaceDiagnostic> {
        let mut out = Vec::new();
        let eps = tol.eps_compare;
        if self.extreme_states.is_empty() {
            out.push(SpaceDiagnostic::NoStates);
            return out;
        }
        for (k, s) in self.extreme_states.iter().enumerate() {
            let v = dot(&self.unit, s);
            if !(v.clone() - T::one()).is_zero_eps(eps) {
                out.push(SpaceDiagnostic::Normalization {
                    state: k,
                    value: v.to_f64(),
                });
            }
        }
        let r = rank(&self.extreme_states, tol.eps_rank);
        if r != self.ambient_dim {
            out.push(SpaceDiagnostic::NotSpanning {
                rank: r,
                ambient_dim: self.ambient_dim,
            });
        }
        for (k, s) in self.extreme_states.iter().enumerate() {
            if let Some(j) = (0..k).find(|&j| vec_eq(&self.extreme_states[j], s, eps)) {
                out.push(SpaceDiagnostic::Duplicate {
                    state: k,
                    duplicate_of: j,
                });
                continue;
            }
            let others: Vec<Vec<T>> = self
                .extreme_states
                .iter()
                .enumerate()
                .filter(|&(j, o)| j != k && !vec_eq(o, s, eps))
                .map(|(_, o)| o.clone())
                .collect();
            if others.is_empty() {
                continue;
            }
            if let Ok(h) = in_convex_hull(s, &others, tol) {
                if h.is_inside() {
                    out.push(SpaceDiagnostic::Redundant { state: k });
                }
            }
        }
        out
    }

    /// Extreme rays of the positive dual cone `{e : e(s) >= 0}`, sorted
    /// lexicographically.
    pub fn dual_cone_rays(&self, tol: &Tolerance) -> Result<Vec<Vec<T>>> {
        extreme_rays(&self.extreme_states, tol)
    }

    fn tight_states(&self, e: &[T], eps: f64) -> Vec<Vec<T>> {
        self.extreme_states
            .iter()
            .filter(|s| dot(e, s).is_zero_eps(eps))
            .cloned()
            .collect()
    }

}

impl<T: Scalar> EffectSpace<T> for StateSpace<T> {
    fn name(&self) -> &str {
        &self.name
    }

    fn dim(&self) -> usize {
        self.ambient_dim
    }

    fn unit(&self) -> &[T] {
        &self.unit
    }

    fn is_valid_effect(&self, e: &[T], tol: &Tolerance) -> bool {
        if e.len() != self.ambient_dim {
            return false;
        }
        let eps = tol.eps_compare;
        self.extreme_states.iter().all(|s| {
            let v = dot(e, s);
            !v.is_neg(eps) && !(v - T::one()).is_pos(eps)
        })
    }

    fn is_indecomposable(&self, e: &[T], tol: &Tolerance) -> Result<bool> {
        if e.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: e.len(),
            });
        }
        let eps = tol.eps_compare;
        if is_zero_vec(e, eps) {
            return Err(Error::ZeroEffect);
        }
        if self.extreme_states.iter().any(|s| dot(e, s).is_neg(eps)) {
            return Ok(false);
        }
        let tight = self.tight_states(e, eps);
        Ok(rank(&tight, tol.eps_rank) == self.ambient_dim - 1)
    }

    /// Greedy lexicographic decomposition: rays are visited in canonical
    /// order and each coefficient is maximized with the earlier ones fixed.
    fn decompose_into_indecomposables(&self, e: &[T], tol: &Tolerance) -> Result<Vec<Effect<T>>> {
        if e.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: e.len(),
            });
        }
        let eps = if T::EXACT { 0.0 } else { tol.eps_feas };
        if is_zero_vec(e, eps) {
            return Ok(Vec::new());
        }
        if self.is_indecomposable(e, tol)? {
            return Ok(vec![e.to_vec()]);
        }
        let rays = self.dual_cone_rays(tol)?;
        let k = rays.len();
        let mut fixed: Vec<T> = Vec::with_capacity(k);
        for i in 0..k {
            let mut lp = LinearProgram::new(k);
            for c in 0..self.ambient_dim {
                lp.add_row(rays.iter().map(|r| r[c].clone()).collect(), e[c].clone());
            }
            for (j, v) in fixed.iter().enumerate() {
                lp.add_sparse_row(&[(j, T::one())], v.clone());
            }
            let mut obj = vec![T::zero(); k];
            obj[i] = T::one();
            lp.maximize(obj);
            match lp.solve(tol)? {
                LpOutcome::Feasible { solution, .. } => {
                    let mut v = solution[i].clone();
                    if v.is_zero_eps(eps) {
                        v = T::zero();
                    }
                    fixed.push(v);
                }
                LpOutcome::Infeasible { .. } => {
                    return Err(Error::InvalidInput(
                        "effect is outside the positive dual cone".into(),
                    ))
                }
                LpOutcome::Unbounded { .. } => {
                    return Err(Error::InvalidInput("unbounded ray coefficient".into()))
                }
            }
        }
        Ok(fixed
            .iter()
            .zip(&rays)
            .filter(|(c, _)| !c.is_zero_eps(eps))
            .map(|(c, r)| scale_vec(c, r))
            .collect())
    }

    fn unit_content(&self, e: &[T], _tol: &Tolerance) -> Result<T> {
        let mut it = self.extreme_states.iter().map(|s| dot(e, s));
        let first = it
            .next()
            .ok_or_else(|| Error::InvalidInput("state space without states".into()))?;
        Ok(it.fold(first, |m, v| if v < m { v } else { m }))
    }

    fn extreme_states(&self) -> Option<&[Vec<T>]> {
        Some(&self.extreme_states)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn square() -> StateSpace<Rational> {
        let s = |x: i64, y: i64| vec![q(x, 1), q(y, 1), q(1, 1)];
        StateSpace::with_last_unit("square", vec![s(0, 0), s(0, 1), s(1, 1), s(1, 0)]).unwrap()
    }

    #[test]
    fn square_is_valid() {
        assert!(square().validate(&Tolerance::default()).is_empty());
    }

    #[test]
    fn duplicate_state_flagged() {
        let mut states = square().states().to_vec();
        states.push(states[0].clone());
        let sp = StateSpace::with_last_unit("dup", states).unwrap();
        let diag = sp.validate(&Tolerance::default());
        assert!(diag.contains(&SpaceDiagnostic::Duplicate {
            state: 4,
            duplicate_of: 0
        }));
    }

    #[test]
    fn unnormalized_state_flagged() {
        let mut states = square().states().to_vec();
        states[2] = vec![q(1, 1), q(1, 1), q(9, 10)];
        let sp = StateSpace::with_last_unit("bad", states).unwrap();
        let diag = sp.validate(&Tolerance::default());
        assert!(diag
            .iter()
            .any(|d| matches!(d, SpaceDiagnostic::Normalization { state: 2, .. })));
    }

    #[test]
    fn interior_state_flagged() {
        let mut states = square().states().to_vec();
        states.push(vec![q(1, 2), q(1, 2), q(1, 1)]);
        let sp = StateSpace::with_last_unit("inner", states).unwrap();
        assert!(sp
            .validate(&Tolerance::default())
            .contains(&SpaceDiagnostic::Redundant { state: 4 }));
    }

    #[test]
    fn unit_and_zero_are_valid_effects() {
        let sp = square();
        let tol = Tolerance::default();
        assert!(sp.is_valid_effect(sp.unit(), &tol));
        assert!(sp.is_valid_effect(&[q(0, 1), q(0, 1), q(0, 1)], &tol));
        assert!(!sp.is_valid_effect(&[q(2, 1), q(0, 1), q(0, 1)], &tol));
    }

    #[test]
    fn indecomposable_predicate() {
        let sp = square();
        let tol = Tolerance::default();
        assert!(sp.is_indecomposable(&[q(1, 1), q(0, 1), q(0, 1)], &tol).unwrap());
        assert!(!sp.is_indecomposable(sp.unit(), &tol).unwrap());
        assert_eq!(
            sp.is_indecomposable(&[q(0, 1), q(0, 1), q(0, 1)], &tol),
            Err(Error::ZeroEffect)
        );
    }

    #[test]
    fn unit_decomposes_into_complementary_pair() {
        let sp = square();
        let tol = Tolerance::default();
        let parts = sp.decompose_into_indecomposables(sp.unit(), &tol).unwrap();
        assert_eq!(parts.len(), 2);
        let total = parts.iter().fold(vec![q(0, 1); 3], |a, p| {
            a.iter().zip(p).map(|(x, y)| x + y).collect()
        });
        assert_eq!(total, sp.unit().to_vec());
        for p in &parts {
            assert!(sp.is_indecomposable(p, &tol).unwrap());
        }
    }
}
