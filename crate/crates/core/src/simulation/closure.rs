use rayon::prelude::*;
use serde::Serialize;

use super::certificate::is_simulable;
use super::noise::noise_content;
use crate::error::{Error, Result};
use crate::gpt::{EffectSpace, Observable};
use crate::numerics::scalar::{zeros, Scalar};
use crate::numerics::Tolerance;
use crate::postprocessing::Postprocessing;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosureLaw {
    /// Every base member is simulable from the base.
    Extensive,
    /// Mixtures of simulable observables stay simulable.
    Mixing,
    /// Postprocessings of simulable observables stay simulable.
    Postprocessing,
    /// `A ∈ sim(base)` and `C ∈ sim(base ∪ {A})` give `C ∈ sim(base)`.
    Transitivity,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosureViolation {
    pub law: ClosureLaw,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ClosureReport {
    pub checks: usize,
    pub violations: Vec<ClosureViolation>,
}

impl ClosureReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    fn record(&mut self, law: ClosureLaw, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations.push(ClosureViolation {
                law,
                detail: detail(),
            });
        }
    }
}

/// Same effects on the labels `1..=n`, padded with zero effects to `n`.
pub fn pad_to<T: Scalar>(a: &Observable<T>, n: usize) -> Result<Observable<T>> {
    let mut effects = a.effects();
    while effects.len() < n {
        effects.push(zeros(a.dim()));
    }
    Observable::from_effects(effects)
}

/// Coarse-graining `x ↦ x mod 2` on positional labels.
fn parity_channel<T: Scalar>(a: &Observable<T>) -> Result<Postprocessing<T>> {
    let src: Vec<String> = a.labels().iter().map(|s| s.to_string()).collect();
    let map: Vec<usize> = (0..a.len()).map(|x| x % 2).collect();
    Postprocessing::deterministic(&src, &["even".to_string(), "odd".to_string()], &map)
}

/// Half identity, half uniform.
fn smoothing_channel<T: Scalar>(a: &Observable<T>) -> Postprocessing<T> {
    let labels: Vec<String> = a.labels().iter().map(|s| s.to_string()).collect();
    let n = labels.len();
    let half = T::from_ratio(1, 2);
    let flat = half.clone() / T::from_i64(n as i64);
    let matrix = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| if x == y { half.clone() + flat.clone() } else { flat.clone() })
                .collect()
        })
        .collect();
    Postprocessing::from_parts(labels.clone(), labels, matrix)
}

/// Checks the closure laws of `sim(base)` on a finite sample.
pub fn check_closure_laws<T: Scalar>(
    sample: &[Observable<T>],
    base: &[Observable<T>],
    tol: &Tolerance,
) -> Result<ClosureReport> {
    let mut report = ClosureReport::default();
    for (i, b) in base.iter().enumerate() {
        let ok = is_simulable(b, base, tol)?.is_simulable();
        report.record(ClosureLaw::Extensive, ok, || format!("base member {i}"));
    }
    let member = |a: &Observable<T>| -> Result<bool> { Ok(is_simulable(a, base, tol)?.is_simulable()) };
    let inside: Vec<bool> = sample.par_iter().map(member).collect::<Result<_>>()?;

    let per_sample: Vec<ClosureReport> = (0..sample.len())
        .into_par_iter()
        .map(|j| -> Result<ClosureReport> {
            let mut r = ClosureReport::default();
            let a = &sample[j];
            if !inside[j] {
                return Ok(r);
            }
            let next = (j + 1) % sample.len();
            if inside[next] && next != j {
                let n = a.len().max(sample[next].len());
                let mix = pad_to(a, n)?.mix(&T::from_ratio(1, 3), &pad_to(&sample[next], n)?)?;
                let ok = member(&mix)?;
                r.record(ClosureLaw::Mixing, ok, || format!("mixture of samples {j} and {next}"));
            }
            for nu in [parity_channel(a)?, smoothing_channel(a)] {
                let ok = member(&nu.apply(a)?)?;
                r.record(ClosureLaw::Postprocessing, ok, || format!("postprocessing of sample {j}"));
            }
            let mut extended = base.to_vec();
            extended.push(a.clone());
            let b0 = &base[j % base.len()];
            let n = 2.max(b0.len());
            let coarse = parity_channel(a)?.apply(a)?;
            let candidates = [
                pad_to(&coarse, n)?.mix(&T::from_ratio(1, 2), &pad_to(b0, n)?)?,
                sample[next].clone(),
            ];
            for c in candidates {
                if is_simulable(&c, &extended, tol)?.is_simulable() {
                    let ok = member(&c)?;
                    r.record(ClosureLaw::Transitivity, ok, || {
                        format!("observable built from sample {j} escapes sim(base)")
                    });
                }
            }
            Ok(r)
        })
        .collect::<Result<_>>()?;
    for r in per_sample {
        report.checks += r.checks;
        report.violations.extend(r.violations);
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonotonicityReport<T> {
    pub target: T,
    pub simulator_minimum: T,
    pub holds: bool,
}

/// `w(A) >= min_i w(B⁽ⁱ⁾) - eps_compare` for a simulable `A`.
pub fn noise_monotonicity_check<T: Scalar>(
    a: &Observable<T>,
    simulators: &[Observable<T>],
    space: &dyn EffectSpace<T>,
    tol: &Tolerance,
) -> Result<MonotonicityReport<T>> {
    if !is_simulable(a, simulators, tol)?.is_simulable() {
        return Err(Error::NotSimulable);
    }
    let target = noise_content(a, space, tol)?.value;
    let mut min: Option<T> = None;
    for b in simulators {
        let w = noise_content(b, space, tol)?.value;
        min = Some(match min {
            Some(m) if m < w => m,
            _ => w,
        });
    }
    let simulator_minimum = min.expect("simulators are nonempty");
    let eps = if T::EXACT { 0.0 } else { tol.eps_compare };
    let holds = !target.cmp_eps(&simulator_minimum, eps).is_lt();
    Ok(MonotonicityReport {
        target,
        simulator_minimum,
        holds,
    })
}
