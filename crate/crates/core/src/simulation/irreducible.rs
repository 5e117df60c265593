use super::certificate::{is_simulable, SimulationCertificate};
use crate::error::{Error, Result};
use crate::gpt::{EffectSpace, Observable};
use crate::numerics::scalar::{is_zero_vec, scale_vec, Scalar};
use crate::numerics::{nullspace, rank, Tolerance};
use crate::postprocessing::{minimally_sufficient, Postprocessing};

/// Minimally sufficient form consists of linearly independent
/// indecomposable effects.
pub fn is_simulation_irreducible<T: Scalar>(
    a: &Observable<T>,
    space: &dyn EffectSpace<T>,
    tol: &Tolerance,
) -> Result<bool> {
    let m = minimally_sufficient(a, tol)?.observable;
    for e in m.effects() {
        if !space.is_indecomposable(&e, tol)? {
            return Ok(false);
        }
    }
    Ok(rank(&m.effects(), tol.eps_rank) == m.len())
}

#[derive(Clone, Debug, PartialEq)]
pub struct IrreducibleDecomposition<T> {
    pub members: Vec<Observable<T>>,
    /// Simulation of the input from `members`.
    pub certificate: SimulationCertificate<T>,
    /// Number of two-way splits performed.
    pub splits: usize,
}

/// Splits each effect into indecomposables, passes to the minimally
/// sufficient form and splits along linear dependencies until every leaf
/// has linearly independent effects.
pub fn decompose_to_irreducibles<T: Scalar>(
    a: &Observable<T>,
    space: &dyn EffectSpace<T>,
    tol: &Tolerance,
) -> Result<IrreducibleDecomposition<T>> {
    let eps = if T::EXACT { 0.0 } else { tol.eps_feas };
    a.check_normalized(space.unit(), tol)?;

    // Indecomposable refinement R with a deterministic channel R → A.
    let mut refined = Vec::new();
    let mut back_map = Vec::new();
    for (x, o) in a.outcomes().iter().enumerate() {
        let parts = space.decompose_into_indecomposables(&o.effect, tol)?;
        let single = parts.len() == 1;
        for (j, p) in parts.into_iter().enumerate() {
            let label = if single {
                o.label.clone()
            } else {
                format!("{}#{}", o.label, j + 1)
            };
            refined.push((label, p));
            back_map.push(x);
        }
    }
    let refined = Observable::new(refined)?;
    let a_labels: Vec<String> = a.labels().iter().map(|s| s.to_string()).collect();
    let r_labels: Vec<String> = refined.labels().iter().map(|s| s.to_string()).collect();
    let r_to_a = Postprocessing::deterministic(&r_labels, &a_labels, &back_map)?;
    let min = minimally_sufficient(&refined, tol)?;
    let hat_to_a = min.backward.compose(&r_to_a)?;
    let hat = min.observable;

    let mut leaves: Vec<(T, Observable<T>)> = Vec::new();
    let mut splits = 0;
    let mut stack = vec![(T::one(), hat.clone())];
    while let Some((w, obs)) = stack.pop() {
        let effects = obs.effects();
        let cols: Vec<Vec<T>> = (0..obs.dim())
            .map(|k| effects.iter().map(|e| e[k].clone()).collect())
            .collect();
        let null = nullspace(&cols, obs.len(), tol.eps_rank);
        let Some(beta) = null.into_iter().next() else {
            match leaves.iter_mut().find(|(_, o)| o.approx_eq(&obs, eps)) {
                Some((lw, _)) => *lw = lw.clone() + w,
                None => leaves.push((w, obs)),
            }
            continue;
        };
        let kp = beta.iter().cloned().fold(beta[0].clone(), T::max_of);
        let km = beta.iter().cloned().fold(beta[0].clone(), |m, v| if v < m { v } else { m });
        if !kp.is_pos(eps) || !km.is_neg(eps) {
            return Err(Error::InvalidInput(
                "linear dependency without mixed signs; effects are not normalized".into(),
            ));
        }
        let lam = kp.clone() / (kp.clone() - km.clone());
        let part = |kappa: &T| -> Result<Observable<T>> {
            let outcomes: Vec<(String, Vec<T>)> = obs
                .outcomes()
                .iter()
                .zip(&beta)
                .map(|(o, b)| (o.label.clone(), scale_vec(&(T::one() - b.clone() / kappa.clone()), &o.effect)))
                .filter(|(_, e)| !is_zero_vec(e, eps))
                .collect();
            Observable::new(outcomes)
        };
        let c = part(&kp)?;
        let d = part(&km)?;
        splits += 1;
        stack.push((w.clone() * (T::one() - lam.clone()), d));
        stack.push((w * lam, c));
    }

    // Leaf outcomes are a subset of Â's labels, so each leaf embeds into Â.
    let hat_labels: Vec<String> = hat.labels().iter().map(|s| s.to_string()).collect();
    let mut members = Vec::new();
    let mut weights = Vec::new();
    let mut channels = Vec::new();
    for (w, leaf) in leaves {
        let map: Vec<usize> = leaf
            .labels()
            .iter()
            .map(|l| hat.index_of(l).expect("leaf labels come from the representative"))
            .collect();
        let leaf_labels: Vec<String> = leaf.labels().iter().map(|s| s.to_string()).collect();
        let embed = Postprocessing::deterministic(&leaf_labels, &hat_labels, &map)?;
        channels.push(embed.compose(&hat_to_a)?);
        weights.push(w);
        members.push(leaf);
    }
    let certificate = SimulationCertificate::Simulable { weights, channels };
    certificate.replay(a, &members, tol)?;
    Ok(IrreducibleDecomposition {
        members,
        certificate,
        splits,
    })
}

/// Re-derives the verdict with the LP as an independent check.
pub fn verify_decomposition<T: Scalar>(
    a: &Observable<T>,
    d: &IrreducibleDecomposition<T>,
    space: &dyn EffectSpace<T>,
    tol: &Tolerance,
) -> Result<bool> {
    d.certificate.replay(a, &d.members, tol)?;
    for m in &d.members {
        if !is_simulation_irreducible(m, space, tol)? {
            return Ok(false);
        }
    }
    Ok(is_simulable(a, &d.members, tol)?.is_simulable())
}
