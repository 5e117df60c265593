//! Joint measurability through a joint observable on the product outcome
//! set.

use crate::error::{Error, Result};
use crate::gpt::{EffectSpace, Observable};
use crate::numerics::lp::{LinearProgram, LpOutcome};
use crate::numerics::scalar::{axpy, vec_eq, zeros, Scalar};
use crate::numerics::Tolerance;
use crate::postprocessing::Postprocessing;

/// Largest product outcome set accepted.
pub const JOINT_OUTCOME_LIMIT: usize = 4096;

#[derive(Clone, Debug, PartialEq)]
pub enum CompatibilityResult<T> {
    /// Joint observable whose marginals are the targets.
    Compatible { joint: Observable<T> },
    Incompatible { farkas: Vec<T> },
}

impl<T: Scalar> CompatibilityResult<T> {
    pub fn is_compatible(&self) -> bool {
        matches!(self, CompatibilityResult::Compatible { .. })
    }
}

/// Product outcome tuples in row-major order.
pub fn product_outcomes<T: Scalar>(targets: &[Observable<T>]) -> Result<Vec<Vec<usize>>> {
    let size = targets
        .iter()
        .try_fold(1usize, |acc, t| acc.checked_mul(t.len()))
        .filter(|&s| s <= JOINT_OUTCOME_LIMIT)
        .ok_or_else(|| Error::BudgetExceeded("product outcome set too large".into()))?;
    let mut out = Vec::with_capacity(size);
    let mut cur = vec![0usize; targets.len()];
    for _ in 0..size {
        out.push(cur.clone());
        for i in (0..targets.len()).rev() {
            cur[i] += 1;
            if cur[i] < targets[i].len() {
                break;
            }
            cur[i] = 0;
        }
    }
    Ok(out)
}

fn joint_labels<T: Scalar>(targets: &[Observable<T>], tuples: &[Vec<usize>]) -> Vec<String> {
    tuples
        .iter()
        .map(|z| {
            z.iter()
                .enumerate()
                .map(|(i, &x)| targets[i].label(x))
                .collect::<Vec<_>>()
                .join("|")
        })
        .collect()
}

/// Channel from the joint outcome set onto target `i`.
pub fn marginal_channel<T: Scalar>(
    targets: &[Observable<T>],
    i: usize,
) -> Result<Postprocessing<T>> {
    let tuples = product_outcomes(targets)?;
    let src = joint_labels(targets, &tuples);
    let tgt: Vec<String> = targets[i].labels().iter().map(|s| s.to_string()).collect();
    let map: Vec<usize> = tuples.iter().map(|z| z[i]).collect();
    Postprocessing::deterministic(&src, &tgt, &map)
}

fn marginal_rows<T: Scalar>(
    lp: &mut LinearProgram<T>,
    targets: &[Observable<T>],
    tuples: &[Vec<usize>],
    coeff: impl Fn(usize, usize) -> Vec<(usize, T)>,
) {
    let d = targets[0].dim();
    for (i, t) in targets.iter().enumerate() {
        for x in 0..t.len() {
            for c in 0..d {
                let mut terms = Vec::new();
                for (z, tup) in tuples.iter().enumerate() {
                    if tup[i] == x {
                        terms.extend(coeff(z, c));
                    }
                }
                lp.add_sparse_row(&terms, t.effect(x)[c].clone());
            }
        }
    }
}

/// Joint effects `G_z` as free vectors with `r · G_z >= 0` for every
/// positivity row `r`. With the extreme states of a polytope this is exact;
/// with finitely many directions of a round cone it is an outer
/// approximation.
pub fn joint_program_inequalities<T: Scalar>(
    targets: &[Observable<T>],
    positivity: &[Vec<T>],
) -> Result<(LinearProgram<T>, Vec<Vec<usize>>)> {
    let tuples = product_outcomes(targets)?;
    let d = targets[0].dim();
    let nz = tuples.len();
    let ns = positivity.len();
    let mut lp = LinearProgram::new(nz * d + nz * ns);
    for v in 0..nz * d {
        lp.set_free(v);
    }
    for z in 0..nz {
        for (k, r) in positivity.iter().enumerate() {
            let mut terms: Vec<_> = (0..d)
                .filter(|&c| !r[c].is_zero_eps(0.0))
                .map(|c| (z * d + c, r[c].clone()))
                .collect();
            terms.push((nz * d + z * ns + k, -T::one()));
            lp.add_sparse_row(&terms, T::zero());
        }
    }
    marginal_rows(&mut lp, targets, &tuples, |z, c| vec![(z * d + c, T::one())]);
    Ok((lp, tuples))
}

/// Joint effects `G_z = Σ_j μ_zj g_j` with `μ >= 0`. With generators of an
/// inscribed cone this is an inner approximation.
pub fn joint_program_generators<T: Scalar>(
    targets: &[Observable<T>],
    generators: &[Vec<T>],
) -> Result<(LinearProgram<T>, Vec<Vec<usize>>)> {
    let tuples = product_outcomes(targets)?;
    let ng = generators.len();
    let mut lp = LinearProgram::new(tuples.len() * ng);
    marginal_rows(&mut lp, targets, &tuples, |z, c| {
        generators
            .iter()
            .enumerate()
            .filter(|(_, g)| !g[c].is_zero_eps(0.0))
            .map(|(j, g)| (z * ng + j, g[c].clone()))
            .collect()
    });
    Ok((lp, tuples))
}

fn check_targets<T: Scalar>(targets: &[Observable<T>], unit: &[T], tol: &Tolerance) -> Result<()> {
    if targets.is_empty() {
        return Err(Error::InvalidInput("no observables given".into()));
    }
    for t in targets {
        if t.dim() != unit.len() {
            return Err(Error::MixedSpaces(format!(
                "observable of dimension {} on a space of dimension {}",
                t.dim(),
                unit.len()
            )));
        }
        t.check_normalized(unit, tol)?;
    }
    Ok(())
}

/// Decides whether the targets have a joint observable. Requires a
/// polytopic state space.
pub fn is_compatible<T: Scalar>(
    targets: &[Observable<T>],
    space: &dyn EffectSpace<T>,
    tol: &Tolerance,
) -> Result<CompatibilityResult<T>> {
    let states = space.extreme_states().ok_or_else(|| {
        Error::InvalidInput(
            "compatibility needs a polytopic state space; use the qubit compatibility bracket".into(),
        )
    })?;
    check_targets(targets, space.unit(), tol)?;
    let (lp, tuples) = joint_program_inequalities(targets, states)?;
    let d = space.dim();
    match lp.solve(tol)? {
        LpOutcome::Feasible { solution, .. } => {
            let labels = joint_labels(targets, &tuples);
            let joint = Observable::new(
                labels
                    .into_iter()
                    .enumerate()
                    .map(|(z, l)| (l, solution[z * d..(z + 1) * d].to_vec()))
                    .collect(),
            )?;
            Ok(CompatibilityResult::Compatible { joint })
        }
        LpOutcome::Infeasible { farkas } => Ok(CompatibilityResult::Incompatible { farkas }),
        LpOutcome::Unbounded { .. } => unreachable!("feasibility problem has no objective"),
    }
}

/// Joint effects from generator weights of [`joint_program_generators`].
pub fn joint_from_generators<T: Scalar>(
    targets: &[Observable<T>],
    generators: &[Vec<T>],
    weights: &[T],
) -> Result<Observable<T>> {
    let tuples = product_outcomes(targets)?;
    let labels = joint_labels(targets, &tuples);
    let ng = generators.len();
    let d = targets[0].dim();
    Observable::new(
        labels
            .into_iter()
            .enumerate()
            .map(|(z, l)| {
                let mut g = zeros(d);
                for (j, gen) in generators.iter().enumerate() {
                    axpy(&mut g, &weights[z * ng + j], gen);
                }
                (l, g)
            })
            .collect(),
    )
}

/// Marginals of `joint` reproduce every target and each joint effect is
/// valid on `space`.
pub fn verify_joint<T: Scalar>(
    targets: &[Observable<T>],
    joint: &Observable<T>,
    space: &dyn EffectSpace<T>,
    tol: &Tolerance,
) -> Result<bool> {
    let eps = if T::EXACT { 0.0 } else { tol.eps_feas };
    for e in joint.effects() {
        if !space.is_valid_effect(&e, tol) {
            return Ok(false);
        }
    }
    for (i, t) in targets.iter().enumerate() {
        let m = marginal_channel(targets, i)?.apply(joint)?;
        if !m.approx_eq(t, eps) {
            return Ok(false);
        }
    }
    Ok(vec_eq(&joint.total(), space.unit(), eps))
}
