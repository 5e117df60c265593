//! Convex-hull tests against `{B⁽ⁱ⁾_x, o, u}` and the explicit simulations
//! they yield.

use serde::Serialize;

use super::certificate::{check_common_space, is_simulable, SimulationCertificate};
use crate::error::{Error, Result};
use crate::gpt::Observable;
use crate::numerics::scalar::{zeros, Scalar};
use crate::numerics::{in_convex_hull, rank, HullResult, Tolerance};
use crate::postprocessing::Postprocessing;

/// Effects of all simulators in order, then `o`, then `u`.
fn generators<T: Scalar>(simulators: &[Observable<T>]) -> Vec<Vec<T>> {
    let mut g: Vec<Vec<T>> = simulators.iter().flat_map(|b| b.effects()).collect();
    let d = simulators[0].dim();
    g.push(zeros(d));
    g.push(simulators[0].total());
    g
}

fn labels_of<T: Scalar>(a: &Observable<T>) -> Vec<String> {
    a.labels().iter().map(|s| s.to_string()).collect()
}

/// Hull membership of every effect of `a` in `conv{B⁽ⁱ⁾_±, o, u}`. For
/// dichotomic simulators an `Outside` entry certifies that `a` is not
/// simulable.
pub fn dichotomic_hull_necessary<T: Scalar>(
    a: &Observable<T>,
    simulators: &[Observable<T>],
    tol: &Tolerance,
) -> Result<Vec<HullResult<T>>> {
    check_common_space(a, simulators, tol)?;
    if let Some(i) = simulators.iter().position(|b| !b.is_dichotomic()) {
        return Err(Error::InvalidInput(format!("simulator {i} is not dichotomic")));
    }
    let gens = generators(simulators);
    a.effects()
        .iter()
        .map(|e| in_convex_hull(e, &gens, tol))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SufficiencyPattern {
    /// Dichotomic target, arbitrary simulators.
    DichotomicTarget,
    /// Dichotomic simulators with `{u, B⁽ⁱ⁾_+}` linearly independent.
    IndependentDichotomic,
    /// One simulator with linearly independent effects.
    SingleIndependent,
    /// No pattern applied; the general linear program decided.
    Deferred,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sufficiency<T> {
    pub pattern: SufficiencyPattern,
    pub certificate: SimulationCertificate<T>,
}

/// Patterns whose structural hypothesis holds, most specific first.
pub fn applicable_patterns<T: Scalar>(
    a: &Observable<T>,
    simulators: &[Observable<T>],
    tol: &Tolerance,
) -> Vec<SufficiencyPattern> {
    let mut out = Vec::new();
    if simulators.len() == 1 && rank(&simulators[0].effects(), tol.eps_rank) == simulators[0].len() {
        out.push(SufficiencyPattern::SingleIndependent);
    }
    if simulators.iter().all(Observable::is_dichotomic) {
        let mut rows = vec![simulators[0].total()];
        rows.extend(simulators.iter().map(|b| b.effect(0).to_vec()));
        if rank(&rows, tol.eps_rank) == rows.len() {
            out.push(SufficiencyPattern::IndependentDichotomic);
        }
    }
    if a.is_dichotomic() {
        out.push(SufficiencyPattern::DichotomicTarget);
    }
    out
}

/// Tries the constructive patterns in order; when none applies or the hull
/// condition fails, falls back to [`is_simulable`].
pub fn dichotomic_hull_sufficient<T: Scalar>(
    a: &Observable<T>,
    simulators: &[Observable<T>],
    tol: &Tolerance,
) -> Result<Sufficiency<T>> {
    check_common_space(a, simulators, tol)?;
    for pattern in applicable_patterns(a, simulators, tol) {
        match construct(a, simulators, pattern, tol) {
            Ok(certificate) => return Ok(Sufficiency { pattern, certificate }),
            Err(Error::HypothesisFailed(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(Sufficiency {
        pattern: SufficiencyPattern::Deferred,
        certificate: is_simulable(a, simulators, tol)?,
    })
}

/// Builds the explicit simulation of one pattern. Fails with
/// [`Error::HypothesisFailed`] if the structural hypothesis or the hull
/// condition does not hold.
pub fn construct<T: Scalar>(
    a: &Observable<T>,
    simulators: &[Observable<T>],
    pattern: SufficiencyPattern,
    tol: &Tolerance,
) -> Result<SimulationCertificate<T>> {
    check_common_space(a, simulators, tol)?;
    if !applicable_patterns(a, simulators, tol).contains(&pattern) {
        return Err(Error::HypothesisFailed(format!("{pattern:?} does not apply")));
    }
    let gens = generators(simulators);
    let hull = |e: &[T]| -> Result<Vec<T>> {
        match in_convex_hull(e, &gens, tol)? {
            HullResult::Inside { coefficients } => Ok(coefficients
                .into_iter()
                .map(|c| if c.is_neg(0.0) { T::zero() } else { c })
                .collect()),
            HullResult::Outside { .. } => Err(Error::HypothesisFailed(
                "effect lies outside the convex hull of the simulator effects, o and u".into(),
            )),
        }
    };
    let cert = match pattern {
        SufficiencyPattern::DichotomicTarget => pattern_a(a, simulators, &hull(a.effect(0))?),
        SufficiencyPattern::IndependentDichotomic => {
            let coeffs = a.effects().iter().map(|e| hull(e)).collect::<Result<Vec<_>>>()?;
            pattern_b(a, simulators, &coeffs, tol)?
        }
        SufficiencyPattern::SingleIndependent => {
            let coeffs = a.effects().iter().map(|e| hull(e)).collect::<Result<Vec<_>>>()?;
            pattern_c(a, &simulators[0], &coeffs)
        }
        SufficiencyPattern::Deferred => return is_simulable(a, simulators, tol),
    };
    cert.replay(a, simulators, tol)?;
    Ok(cert)
}

fn clamp01<T: Scalar>(v: T) -> T {
    if v.is_neg(0.0) {
        T::zero()
    } else if (v.clone() - T::one()).is_pos(0.0) {
        T::one()
    } else {
        v
    }
}

fn normalize_rows<T: Scalar>(rows: Vec<Vec<T>>) -> Vec<Vec<T>> {
    if T::EXACT {
        return rows;
    }
    rows.into_iter()
        .map(|r| {
            let s = r.iter().fold(T::zero(), |a, v| a + v.clone());
            r.into_iter().map(|v| v / s.clone()).collect()
        })
        .collect()
}

/// `η̃_ix = η_ix + λ/m`, `p_i = max_x η̃_ix` (the last weight takes the
/// remainder) and `ν_{(i,x)+} = η̃_ix / p_i`.
fn pattern_a<T: Scalar>(a: &Observable<T>, sims: &[Observable<T>], coeffs: &[T]) -> SimulationCertificate<T> {
    let m = sims.len();
    let n_eff: usize = sims.iter().map(Observable::len).sum();
    let lam_u = coeffs[n_eff + 1].clone();
    let share = lam_u / T::from_i64(m as i64);
    let mut eta: Vec<Vec<T>> = Vec::new();
    let mut k = 0;
    for b in sims {
        eta.push((0..b.len()).map(|x| coeffs[k + x].clone() + share.clone()).collect());
        k += b.len();
    }
    let mut weights: Vec<T> = eta[..m - 1]
        .iter()
        .map(|row| row.iter().cloned().fold(T::zero(), T::max_of))
        .collect();
    let used = weights.iter().fold(T::zero(), |s, w| s + w.clone());
    weights.push(clamp01(T::one() - used));
    let targets = labels_of(a);
    let channels = sims
        .iter()
        .zip(&eta)
        .zip(&weights)
        .map(|((b, row), p)| {
            let matrix = row
                .iter()
                .map(|e| {
                    let plus = if p.is_zero_eps(0.0) {
                        T::zero()
                    } else {
                        clamp01(e.clone() / p.clone())
                    };
                    vec![plus.clone(), T::one() - plus]
                })
                .collect();
            Postprocessing::from_parts(labels_of(b), targets.clone(), matrix)
        })
        .collect();
    SimulationCertificate::Simulable { weights, channels }
}

/// `ω^(i,y)_± = λ^(i,y)_± + λ^(u,y)/m`, `p_i = Σ_y ω^(i,y)_+` and
/// `ν_{(i,±)y} = ω^(i,y)_± / p_i`; rows of a zero-weight simulator are
/// uniform over the target outcomes.
fn pattern_b<T: Scalar>(
    a: &Observable<T>,
    sims: &[Observable<T>],
    coeffs: &[Vec<T>],
    tol: &Tolerance,
) -> Result<SimulationCertificate<T>> {
    let m = sims.len();
    let ny = a.len();
    let inv_m = T::one() / T::from_i64(m as i64);
    let omega = |i: usize, s: usize, y: usize| coeffs[y][2 * i + s].clone() + coeffs[y][2 * m + 1].clone() * inv_m.clone();
    let eps = if T::EXACT { 0.0 } else { tol.eps_feas.max(tol.eps_compare) };
    let mut weights = Vec::with_capacity(m);
    for i in 0..m {
        let plus = (0..ny).fold(T::zero(), |s, y| s + omega(i, 0, y));
        let minus = (0..ny).fold(T::zero(), |s, y| s + omega(i, 1, y));
        if !(plus.clone() - minus.clone()).is_zero_eps(eps) {
            return Err(Error::HypothesisFailed(
                "outcome weights of a dichotomic simulator disagree".into(),
            ));
        }
        weights.push(if T::EXACT {
            plus
        } else {
            (plus + minus) * T::from_ratio(1, 2)
        });
    }
    if !T::EXACT {
        let tot = weights.iter().fold(T::zero(), |s, w| s + w.clone());
        weights = weights.into_iter().map(|w| w / tot.clone()).collect();
    }
    let targets = labels_of(a);
    let channels = sims
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let p = &weights[i];
            if p.is_zero_eps(0.0) {
                return Postprocessing::uniform(&labels_of(b), &targets);
            }
            let rows = (0..2)
                .map(|s| (0..ny).map(|y| omega(i, s, y) / p.clone()).collect())
                .collect();
            Postprocessing::from_parts(labels_of(b), targets.clone(), normalize_rows(rows))
        })
        .collect();
    Ok(SimulationCertificate::Simulable { weights, channels })
}

/// `ν_xy = λ^(y)_x + λ^(y)_u` with weight one.
fn pattern_c<T: Scalar>(a: &Observable<T>, b: &Observable<T>, coeffs: &[Vec<T>]) -> SimulationCertificate<T> {
    let nx = b.len();
    let rows = (0..nx)
        .map(|x| {
            coeffs
                .iter()
                .map(|c| c[x].clone() + c[nx + 1].clone())
                .collect()
        })
        .collect();
    SimulationCertificate::Simulable {
        weights: vec![T::one()],
        channels: vec![Postprocessing::from_parts(labels_of(b), labels_of(a), normalize_rows(rows))],
    }
}
