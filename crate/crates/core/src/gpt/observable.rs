use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::numerics::scalar::{add_vec, convert_vec, vec_eq, zeros, Scalar};
use crate::numerics::Tolerance;

/// Dual-space coefficient vector; `e(s) = e · s`.
pub type Effect<T> = Vec<T>;

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome<T> {
    pub label: String,
    pub effect: Effect<T>,
}

/// Finite family of labelled effects. Normalization (`Σ effects = u`) is
/// checked against a unit by [`Observable::check_normalized`]; the
/// constructor only enforces distinct labels and a common dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable<T> {
    outcomes: Vec<Outcome<T>>,
}

impl<T: Scalar> Observable<T> {
    pub fn new(outcomes: Vec<(String, Effect<T>)>) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(Error::InvalidInput("observable without outcomes".into()));
        }
        let dim = outcomes[0].1.len();
        let mut seen = HashSet::new();
        for (label, e) in &outcomes {
            if e.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: e.len(),
                });
            }
            if !seen.insert(label.as_str()) {
                return Err(Error::InvalidInput(format!("duplicate outcome label {label:?}")));
            }
        }
        Ok(Observable {
            outcomes: outcomes
                .into_iter()
                .map(|(label, effect)| Outcome { label, effect })
                .collect(),
        })
    }

    /// Outcomes labelled `1..=n`.
    pub fn from_effects(effects: Vec<Effect<T>>) -> Result<Self> {
        Self::new(
            effects
                .into_iter()
                .enumerate()
                .map(|(i, e)| ((i + 1).to_string(), e))
                .collect(),
        )
    }

    /// Two-outcome observable `{+: plus, -: u - plus}`.
    pub fn dichotomic(plus: Effect<T>, unit: &[T]) -> Result<Self> {
        let minus = unit
            .iter()
            .zip(&plus)
            .map(|(u, p)| u.clone() - p.clone())
            .collect();
        Self::new(vec![("+".into(), plus), ("-".into(), minus)])
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.outcomes[0].effect.len()
    }

    pub fn outcomes(&self) -> &[Outcome<T>] {
        &self.outcomes
    }

    pub fn labels(&self) -> Vec<&str> {
        self.outcomes.iter().map(|o| o.label.as_str()).collect()
    }

    pub fn effects(&self) -> Vec<Effect<T>> {
        self.outcomes.iter().map(|o| o.effect.clone()).collect()
    }

    pub fn effect(&self, i: usize) -> &[T] {
        &self.outcomes[i].effect
    }

    pub fn label(&self, i: usize) -> &str {
        &self.outcomes[i].label
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.outcomes.iter().position(|o| o.label == label)
    }

    pub fn total(&self) -> Vec<T> {
        self.outcomes
            .iter()
            .fold(zeros(self.dim()), |acc, o| add_vec(&acc, &o.effect))
    }

    pub fn is_normalized(&self, unit: &[T], tol: &Tolerance) -> bool {
        unit.len() == self.dim() && vec_eq(&self.total(), unit, tol.eps_feas)
    }

    pub fn check_normalized(&self, unit: &[T], tol: &Tolerance) -> Result<()> {
        if unit.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: unit.len(),
                found: self.dim(),
            });
        }
        if !self.is_normalized(unit, tol) {
            return Err(Error::InvalidInput(
                "effects of the observable do not sum to the unit effect".into(),
            ));
        }
        Ok(())
    }

    pub fn is_dichotomic(&self) -> bool {
        self.len() == 2
    }

    /// Same effects under new labels.
    pub fn relabel(&self, labels: &[String]) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::LabelMismatch(format!(
                "{} labels for {} outcomes",
                labels.len(),
                self.len()
            )));
        }
        Self::new(
            labels
                .iter()
                .cloned()
                .zip(self.outcomes.iter().map(|o| o.effect.clone()))
                .collect(),
        )
    }

    /// Convex mixture `w * self + (1 - w) * other` over a shared label set.
    pub fn mix(&self, w: &T, other: &Self) -> Result<Self> {
        if self.labels() != other.labels() {
            return Err(Error::LabelMismatch(
                "mixing requires identical outcome labels".into(),
            ));
        }
        let v = T::one() - w.clone();
        Self::new(
            self.outcomes
                .iter()
                .zip(&other.outcomes)
                .map(|(a, b)| {
                    let e = a
                        .effect
                        .iter()
                        .zip(&b.effect)
                        .map(|(x, y)| w.clone() * x.clone() + v.clone() * y.clone())
                        .collect();
                    (a.label.clone(), e)
                })
                .collect(),
        )
    }

    /// Effectwise equality with matching labels.
    pub fn approx_eq(&self, other: &Self, eps: f64) -> bool {
        self.len() == other.len()
            && self
                .outcomes
                .iter()
                .zip(&other.outcomes)
                .all(|(a, b)| a.label == b.label && vec_eq(&a.effect, &b.effect, eps))
    }

    pub fn convert<S: Scalar>(&self) -> Result<Observable<S>> {
        Observable::new(
            self.outcomes
                .iter()
                .map(|o| Ok((o.label.clone(), convert_vec(&o.effect)?)))
                .collect::<Result<_>>()?,
        )
    }

    /// Trivial observable `{w_x u}`.
    pub fn trivial(unit: &[T], weights: &[T]) -> Result<Self> {
        Self::from_effects(
            weights
                .iter()
                .map(|w| unit.iter().map(|u| w.clone() * u.clone()).collect())
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_labels_rejected() {
        let r = Observable::new(vec![("a".into(), vec![1.0]), ("a".into(), vec![0.0])]);
        assert!(r.is_err());
    }

    #[test]
    fn dichotomic_complements() {
        let a = Observable::dichotomic(vec![0.25, 0.0], &[1.0, 1.0]).unwrap();
        assert_eq!(a.effect(1), &[0.75, 1.0]);
        assert!(a.is_normalized(&[1.0, 1.0], &Tolerance::default()));
    }

    #[test]
    fn mixture_requires_same_labels() {
        let a = Observable::from_effects(vec![vec![1.0], vec![0.0]]).unwrap();
        let b = a.relabel(&["x".into(), "y".into()]).unwrap();
        assert!(a.mix(&0.5, &b).is_err());
        let c = a.mix(&0.25, &a).unwrap();
        assert!(c.approx_eq(&a, 1e-12));
    }
}
