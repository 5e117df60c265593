use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::gpt::{EffectSpace, Observable, StateSpace};
use crate::numerics::rays::lex_cmp;
use crate::numerics::scalar::{add_vec, scale_vec, vec_eq, zeros, Scalar};
use crate::numerics::{rank, solve_in_span, Tolerance};
use crate::simulation::smin::combinations;

/// Simplex with `n` vertices and its distinguishing observable.
#[derive(Clone, Debug, PartialEq)]
pub struct Classical<T> {
    pub space: StateSpace<T>,
    pub distinguishing: Observable<T>,
}

/// States `(e_k, 1)` for `k < n-1` and `(0, …, 0, 1)`; `G_x(s_k) = δ_xk`.
pub fn classical<T: Scalar>(n: usize) -> Result<Classical<T>> {
    if n < 2 {
        return Err(Error::InvalidInput("a classical theory needs at least two states".into()));
    }
    let basis = |k: usize, last: T| {
        let mut v = zeros(n);
        if k < n - 1 {
            v[k] = T::one();
        }
        v[n - 1] = last;
        v
    };
    let states = (0..n).map(|k| basis(k, T::one())).collect();
    let space = StateSpace::with_last_unit(format!("classical-{n}"), states)?;
    let mut effects: Vec<Vec<T>> = (0..n - 1).map(|x| basis(x, T::zero())).collect();
    let mut last = vec![-T::one(); n];
    last[n - 1] = T::one();
    effects.push(last);
    let distinguishing = Observable::from_effects(effects)?;
    Ok(Classical {
        space,
        distinguishing,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SquareBit<T> {
    pub space: StateSpace<T>,
    pub e: Observable<T>,
    pub f: Observable<T>,
}

/// States `(0,0,1), (0,1,1), (1,1,1), (1,0,1)`, so `s₁ + s₃ = s₂ + s₄`.
pub fn square_bit<T: Scalar>() -> SquareBit<T> {
    let v = |a: i64, b: i64, c: i64| vec![T::from_i64(a), T::from_i64(b), T::from_i64(c)];
    let space = StateSpace::with_last_unit("square-bit", vec![v(0, 0, 1), v(0, 1, 1), v(1, 1, 1), v(1, 0, 1)])
        .expect("square bit states share a dimension");
    let unit = v(0, 0, 1);
    let e = Observable::dichotomic(v(1, 0, 0), &unit).expect("two labels");
    let f = Observable::dichotomic(v(0, 1, 0), &unit).expect("two labels");
    SquareBit { space, e, f }
}

/// Inequivalent simulation irreducible observables of a theory.
#[derive(Clone, Debug, PartialEq)]
pub struct IrreducibleCatalog<T> {
    pub theory: String,
    pub members: Vec<Observable<T>>,
    /// Ray indices used by each member.
    pub rays: Vec<Vec<usize>>,
}

impl<T> IrreducibleCatalog<T> {
    pub fn count(&self) -> usize {
        self.members.len()
    }
}

/// Relabelling-invariant key: effect vectors sorted and rounded to a 1e-9
/// grid.
pub fn canonical_key<T: Scalar>(a: &Observable<T>) -> Vec<Vec<i64>> {
    let mut effects = a.effects();
    effects.sort_by(|x, y| lex_cmp(x, y));
    effects
        .iter()
        .map(|e| e.iter().map(|v| (v.to_f64() * 1e9).round() as i64).collect())
        .collect()
}

fn same_up_to_relabelling<T: Scalar>(a: &Observable<T>, b: &Observable<T>, eps: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    a.effects().iter().all(|e| {
        match (0..b.len()).find(|&j| !used[j] && vec_eq(e, b.effect(j), eps)) {
            Some(j) => {
                used[j] = true;
                true
            }
            None => false,
        }
    })
}

/// Observables `{c_j r_j}` with linearly independent rays `r_j`, positive
/// coefficients, and `Σ c_j r_j = u`. Every candidate is checked for
/// validity and indecomposability and deduplicated up to relabelling.
pub fn enumerate_irreducibles<T: Scalar>(
    theory: &str,
    rays: &[Vec<T>],
    names: &[String],
    space: &dyn EffectSpace<T>,
    tol: &Tolerance,
) -> Result<IrreducibleCatalog<T>> {
    let d = space.dim();
    let eps = if T::EXACT { 0.0 } else { tol.eps_feas };
    let mut seen: HashMap<Vec<Vec<i64>>, Vec<usize>> = HashMap::new();
    let mut members: Vec<Observable<T>> = Vec::new();
    let mut used: Vec<Vec<usize>> = Vec::new();
    for size in 1..=d.min(rays.len()) {
        for subset in combinations(rays.len(), size) {
            let cols: Vec<Vec<T>> = subset.iter().map(|&k| rays[k].clone()).collect();
            if rank(&cols, tol.eps_rank) != size {
                continue;
            }
            let Some(c) = solve_in_span(&cols, space.unit(), tol.eps_rank) else {
                continue;
            };
            if c.iter().any(|x| !x.is_pos(eps)) {
                continue;
            }
            let effects: Vec<Vec<T>> = c.iter().zip(&cols).map(|(ci, r)| scale_vec(ci, r)).collect();
            let total = effects.iter().fold(zeros(d), |a, e| add_vec(&a, e));
            if !vec_eq(&total, space.unit(), eps) {
                continue;
            }
            if !effects.iter().all(|e| space.is_valid_effect(e, tol)) {
                continue;
            }
            for e in &effects {
                if !space.is_indecomposable(e, tol)? {
                    return Err(Error::InvalidInput(format!(
                        "ray of {theory} is not indecomposable"
                    )));
                }
            }
            let obs = Observable::new(
                subset
                    .iter()
                    .map(|&k| names[k].clone())
                    .zip(effects)
                    .collect(),
            )?;
            let key = canonical_key(&obs);
            let bucket = seen.entry(key).or_default();
            if bucket
                .iter()
                .any(|&m| same_up_to_relabelling(&members[m], &obs, tol.eps_compare.max(eps)))
            {
                continue;
            }
            bucket.push(members.len());
            members.push(obs);
            used.push(subset);
        }
    }
    Ok(IrreducibleCatalog {
        theory: theory.to_string(),
        members,
        rays: used,
    })
}

/// Catalog of a polytopic theory from its dual-cone rays.
pub fn irreducible_catalog<T: Scalar>(space: &StateSpace<T>, tol: &Tolerance) -> Result<IrreducibleCatalog<T>> {
    let rays = space.dual_cone_rays(tol)?;
    let names: Vec<String> = (1..=rays.len()).map(|k| format!("r{k}")).collect();
    enumerate_irreducibles(space.name(), &rays, &names, space, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::scalar::dot;
    use crate::numerics::Rational;

    #[test]
    fn classical_reading_observable() {
        let c = classical::<Rational>(4).unwrap();
        let tol = Tolerance::default();
        assert!(c.space.validate(&tol).is_empty());
        for (x, g) in c.distinguishing.effects().iter().enumerate() {
            for (k, s) in c.space.states().iter().enumerate() {
                let v = dot(g, s);
                assert_eq!(v, if x == k { Rational::one() } else { Rational::zero() });
            }
        }
    }

    #[test]
    fn classical_needs_two_states() {
        assert!(classical::<f64>(1).is_err());
    }

    #[test]
    fn square_bit_is_valid_and_e_reads_edges() {
        let sq = square_bit::<Rational>();
        let tol = Tolerance::default();
        assert!(sq.space.validate(&tol).is_empty());
        let vals: Vec<Rational> = sq.space.states().iter().map(|s| dot(sq.e.effect(0), s)).collect();
        let (z, o) = (Rational::zero(), Rational::one());
        assert_eq!(vals, vec![z.clone(), z, o.clone(), o]);
    }

    #[test]
    fn small_catalogs() {
        let tol = Tolerance::default();
        let sq = square_bit::<Rational>();
        assert_eq!(irreducible_catalog(&sq.space, &tol).unwrap().count(), 2);
        let trit = classical::<Rational>(3).unwrap();
        assert_eq!(irreducible_catalog(&trit.space, &tol).unwrap().count(), 1);
        let bit = classical::<f64>(2).unwrap();
        assert_eq!(irreducible_catalog(&bit.space, &tol).unwrap().count(), 1);
    }
}
