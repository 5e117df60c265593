use crate::error::{Error, Result};
use crate::gpt::{EffectSpace, Observable};
use crate::numerics::lp::{LinearProgram, LpOutcome};
use crate::numerics::scalar::{dot, scale_vec, sub_vec, vec_eq, Scalar};
use crate::numerics::Tolerance;

/// `A = value · N + (1 - value) · residual` with `N_x = t_x u`.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseContentResult<T> {
    pub value: T,
    pub trivial: Observable<T>,
    /// Absent when `value = 1`.
    pub residual: Option<Observable<T>>,
}

impl<T: Scalar> NoiseContentResult<T> {
    pub fn replay(&self, a: &Observable<T>, space: &dyn EffectSpace<T>, tol: &Tolerance) -> Result<()> {
        let eps = if T::EXACT { 0.0 } else { tol.eps_feas };
        let reject = |m: &str| Err(Error::CertificateRejected(m.into()));
        if self.value.is_neg(eps) || (self.value.clone() - T::one()).is_pos(eps) {
            return reject("noise content outside [0, 1]");
        }
        let u = space.unit();
        for e in self.trivial.effects() {
            let t = dot(&e, u) / dot(u, u);
            if !vec_eq(&e, &scale_vec(&t, u), eps) || t.is_neg(eps) {
                return reject("noise observable is not trivial");
            }
        }
        let rest = T::one() - self.value.clone();
        for y in 0..a.len() {
            let mut v = scale_vec(&self.value, self.trivial.effect(y));
            if let Some(r) = &self.residual {
                if !space.is_valid_effect(r.effect(y), tol) {
                    return reject("residual effect is invalid");
                }
                v = crate::numerics::scalar::add_vec(&v, &scale_vec(&rest, r.effect(y)));
            } else if rest.is_pos(eps) {
                return reject("missing residual");
            }
            if !vec_eq(&v, a.effect(y), eps) {
                return reject("decomposition does not reproduce the observable");
            }
        }
        Ok(())
    }
}

/// Largest weight of a trivial observable in a convex decomposition of `a`.
/// Polytopic spaces solve the linear program over `τ_x = λ t_x`; other
/// spaces sum the unit contents of the effects.
pub fn noise_content<T: Scalar>(
    a: &Observable<T>,
    space: &dyn EffectSpace<T>,
    tol: &Tolerance,
) -> Result<NoiseContentResult<T>> {
    a.check_normalized(space.unit(), tol)?;
    let eps = if T::EXACT { 0.0 } else { tol.eps_feas };
    let taus = match space.extreme_states() {
        Some(states) => noise_lp(a, space.unit(), states, tol)?,
        None => a
            .effects()
            .iter()
            .map(|e| space.unit_content(e, tol))
            .collect::<Result<Vec<T>>>()?,
    };
    let taus: Vec<T> = taus
        .into_iter()
        .map(|t| if t.is_neg(0.0) { T::zero() } else { t })
        .collect();
    let value = taus.iter().fold(T::zero(), |s, t| s + t.clone());
    let u = space.unit();
    let n = a.len();
    let labels: Vec<String> = a.labels().iter().map(|s| s.to_string()).collect();
    let dist: Vec<T> = if value.is_pos(eps) {
        taus.iter().map(|t| t.clone() / value.clone()).collect()
    } else {
        vec![T::one() / T::from_i64(n as i64); n]
    };
    let trivial = Observable::new(
        labels
            .iter()
            .cloned()
            .zip(dist.iter().map(|t| scale_vec(t, u)))
            .collect(),
    )?;
    let rest = T::one() - value.clone();
    let residual = if rest.is_pos(eps) {
        Some(Observable::new(
            labels
                .iter()
                .cloned()
                .zip(
                    a.effects()
                        .iter()
                        .zip(&taus)
                        .map(|(e, t)| scale_vec(&(T::one() / rest.clone()), &sub_vec(e, &scale_vec(t, u)))),
                )
                .collect(),
        )?)
    } else {
        None
    };
    let value = if rest.is_pos(eps) { value } else { T::one() };
    Ok(NoiseContentResult {
        value,
        trivial,
        residual,
    })
}

/// Maximize `Σ τ_x` subject to `A_x(s_k) - τ_x u(s_k) >= 0`.
fn noise_lp<T: Scalar>(a: &Observable<T>, u: &[T], states: &[Vec<T>], tol: &Tolerance) -> Result<Vec<T>> {
    let (nx, ns) = (a.len(), states.len());
    let mut lp = LinearProgram::new(nx + nx * ns);
    for x in 0..nx {
        for (k, s) in states.iter().enumerate() {
            lp.add_sparse_row(
                &[(x, dot(u, s)), (nx + x * ns + k, T::one())],
                dot(a.effect(x), s),
            );
        }
    }
    let mut obj = vec![T::zero(); nx + nx * ns];
    for o in obj.iter_mut().take(nx) {
        *o = T::one();
    }
    lp.maximize(obj);
    match lp.solve(tol)? {
        LpOutcome::Feasible { solution, .. } => Ok(solution[..nx].to_vec()),
        LpOutcome::Infeasible { .. } => Err(Error::InvalidInput(
            "observable has an effect that is negative on some state".into(),
        )),
        LpOutcome::Unbounded { .. } => Err(Error::InvalidInput("unbounded noise content".into())),
    }
}

/// Closed form `Σ_x min_k A_x(s_k)` on a polytope; used as an oracle.
pub fn noise_content_closed_form<T: Scalar>(a: &Observable<T>, states: &[Vec<T>]) -> T {
    a.effects().iter().fold(T::zero(), |acc, e| {
        let m = states
            .iter()
            .map(|s| dot(e, s))
            .reduce(|m, v| if v < m { v } else { m })
            .unwrap_or_else(T::zero);
        acc + m
    })
}
