//! Qubit effects in Bloch coordinates.
//!
//! An effect `½[(1+e0)𝟙 + e·σ]` is stored as `(e0, e)`. Linear computations
//! use the coordinates `(1+e0, ex, ey, ez)`, in which `𝟙 = (2,0,0,0)` and
//! the zero effect is the origin.

use super::observable::{Effect, Observable};
use super::space::EffectSpace;
use crate::error::{Error, Result};
use crate::numerics::scalar::{is_zero_vec, Scalar};
use crate::numerics::Tolerance;

#[derive(Clone, Debug, PartialEq)]
pub struct QubitEffect<T> {
    pub e0: T,
    pub e: [T; 3],
}

impl<T: Scalar> QubitEffect<T> {
    pub fn new(e0: T, e: [T; 3]) -> Self {
        QubitEffect { e0, e }
    }

    pub fn identity() -> Self {
        QubitEffect::new(T::one(), [T::zero(), T::zero(), T::zero()])
    }

    pub fn zero() -> Self {
        QubitEffect::new(-T::one(), [T::zero(), T::zero(), T::zero()])
    }

    /// `(e0, ex, ey, ez)`.
    pub fn to_vector(&self) -> Vec<T> {
        let mut v = vec![self.e0.clone()];
        v.extend(self.e.iter().cloned());
        v
    }

    pub fn from_vector(v: &[T]) -> Result<Self> {
        if v.len() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: v.len(),
            });
        }
        Ok(QubitEffect::new(
            v[0].clone(),
            [v[1].clone(), v[2].clone(), v[3].clone()],
        ))
    }

    /// Linear coordinates `(1+e0, ex, ey, ez)`.
    pub fn to_linear(&self) -> Vec<T> {
        let mut v = vec![T::one() + self.e0.clone()];
        v.extend(self.e.iter().cloned());
        v
    }

    pub fn from_linear(v: &[T]) -> Result<Self> {
        if v.len() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: v.len(),
            });
        }
        Ok(QubitEffect::new(
            v[0].clone() - T::one(),
            [v[1].clone(), v[2].clone(), v[3].clone()],
        ))
    }

    /// `|e0| + ‖e‖ <= 1` in the standard Bloch frame.
    pub fn is_valid(&self, tol: &Tolerance) -> bool {
        QubitSpace::standard().is_valid_effect(&self.to_linear(), tol)
    }
}

/// Affine encoding `(e0, ex, ey, ez)` of a qubit effect.
pub fn qubit_to_vector<T: Scalar>(e: &QubitEffect<T>) -> Vec<T> {
    e.to_vector()
}

#[derive(Clone, Debug, PartialEq)]
pub struct QubitObservable<T> {
    outcomes: Vec<(String, QubitEffect<T>)>,
}

impl<T: Scalar> QubitObservable<T> {
    /// Checks `Σ(1+e0) = 2` and `Σ e = 0`; labels must be distinct.
    pub fn new(outcomes: Vec<(String, QubitEffect<T>)>, tol: &Tolerance) -> Result<Self> {
        let obs = Observable::new(
            outcomes
                .iter()
                .map(|(l, e)| (l.clone(), e.to_linear()))
                .collect(),
        )?;
        obs.check_normalized(&QubitSpace::<T>::unit_vector(), tol)?;
        Ok(QubitObservable { outcomes })
    }

    /// Sharp two-outcome observable `½(𝟙 ± n·σ)`.
    pub fn sharp(n: [T; 3]) -> Self {
        Self::dichotomic(T::zero(), n)
    }

    /// `{+: ½[(1+b)𝟙 + n·σ], -: ½[(1-b)𝟙 - n·σ]}`.
    pub fn dichotomic(bias: T, n: [T; 3]) -> Self {
        let neg = [-n[0].clone(), -n[1].clone(), -n[2].clone()];
        QubitObservable {
            outcomes: vec![
                ("+".into(), QubitEffect::new(bias.clone(), n)),
                ("-".into(), QubitEffect::new(-bias, neg)),
            ],
        }
    }

    pub fn outcomes(&self) -> &[(String, QubitEffect<T>)] {
        &self.outcomes
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn to_observable(&self) -> Observable<T> {
        Observable::new(
            self.outcomes
                .iter()
                .map(|(l, e)| (l.clone(), e.to_linear()))
                .collect(),
        )
        .expect("labels were checked on construction")
    }

    pub fn from_observable(a: &Observable<T>, tol: &Tolerance) -> Result<Self> {
        let outcomes = a
            .outcomes()
            .iter()
            .map(|o| Ok((o.label.clone(), QubitEffect::from_linear(&o.effect)?)))
            .collect::<Result<_>>()?;
        Self::new(outcomes, tol)
    }

    pub fn is_valid(&self, tol: &Tolerance) -> bool {
        self.outcomes.iter().all(|(_, e)| e.is_valid(tol))
    }
}

/// Qubit effect space in linear coordinates. `metric` holds the diagonal
/// weights of the Bloch norm, so frames rescaled along the axes stay
/// rational; the standard frame has weights `(1,1,1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitSpace<T> {
    name: String,
    metric: [T; 3],
    unit: Vec<T>,
}

impl<T: Scalar> QubitSpace<T> {
    pub fn standard() -> Self {
        Self::with_metric("qubit", [T::one(), T::one(), T::one()]).expect("unit metric")
    }

    pub fn with_metric(name: impl Into<String>, metric: [T; 3]) -> Result<Self> {
        if metric.iter().any(|w| !w.is_pos(0.0)) {
            return Err(Error::InvalidInput("metric weights must be positive".into()));
        }
        Ok(QubitSpace {
            name: name.into(),
            metric,
            unit: Self::unit_vector(),
        })
    }

    pub fn unit_vector() -> Vec<T> {
        vec![T::from_i64(2), T::zero(), T::zero(), T::zero()]
    }

    pub fn metric(&self) -> &[T; 3] {
        &self.metric
    }

    /// Squared Bloch norm of the vector part.
    pub fn norm2(&self, v: &[T]) -> T {
        v[1..]
            .iter()
            .zip(&self.metric)
            .fold(T::zero(), |acc, (x, w)| acc + w.clone() * x.clone() * x.clone())
    }

    fn check_dim(&self, v: &[T]) -> Result<()> {
        if v.len() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: v.len(),
            });
        }
        Ok(())
    }

    fn norm(&self, v: &[T]) -> Result<T> {
        let n2 = self.norm2(v);
        n2.sqrt()
            .ok_or_else(|| Error::Irrational(format!("square root of {}", n2.to_f64())))
    }
}

impl<T: Scalar> EffectSpace<T> for QubitSpace<T> {
    fn name(&self) -> &str {
        &self.name
    }

    fn dim(&self) -> usize {
        4
    }

    fn unit(&self) -> &[T] {
        &self.unit
    }

    /// Both `E` and `𝟙 - E` positive: `‖e‖ <= min(a, 2 - a)`.
    fn is_valid_effect(&self, v: &[T], tol: &Tolerance) -> bool {
        if v.len() != 4 {
            return false;
        }
        let eps = tol.eps_compare;
        let a = v[0].clone();
        let b = T::from_i64(2) - a.clone();
        if a.is_neg(eps) || b.is_neg(eps) {
            return false;
        }
        let n2 = self.norm2(v);
        !(n2.clone() - a.clone() * a).is_pos(eps) && !(n2 - b.clone() * b).is_pos(eps)
    }

    /// Rank one: positive with `‖e‖ = a`.
    fn is_indecomposable(&self, v: &[T], tol: &Tolerance) -> Result<bool> {
        self.check_dim(v)?;
        let eps = tol.eps_compare;
        if is_zero_vec(v, eps) {
            return Err(Error::ZeroEffect);
        }
        let a = v[0].clone();
        if !a.is_pos(eps) {
            return Ok(false);
        }
        let d = self.norm2(v) - a.clone() * a;
        Ok(d.is_zero_eps(eps))
    }

    /// Spectral decomposition `λ₊P₊ + λ₋P₋`; in exact mode the norm must be
    /// rational.
    fn decompose_into_indecomposables(&self, v: &[T], tol: &Tolerance) -> Result<Vec<Effect<T>>> {
        self.check_dim(v)?;
        let eps = if T::EXACT { 0.0 } else { tol.eps_feas };
        if is_zero_vec(v, eps) {
            return Ok(Vec::new());
        }
        if self.is_indecomposable(v, tol)? {
            return Ok(vec![v.to_vec()]);
        }
        let a = v[0].clone();
        let r = self.norm(v)?;
        let half = T::from_ratio(1, 2);
        let mut out = Vec::new();
        let dir: Vec<T> = if r.is_zero_eps(eps) {
            // Any axis works for a multiple of the identity; pick one whose
            // unit vector is representable.
            let (k, s) = (0..3)
                .find_map(|k| {
                    (T::one() / self.metric[k].clone())
                        .sqrt()
                        .map(|s| (k, s))
                })
                .ok_or_else(|| Error::Irrational("no rational unit axis in metric".into()))?;
            let mut d = vec![T::zero(); 3];
            d[k] = s;
            d
        } else {
            v[1..].iter().map(|x| x.clone() / r.clone()).collect()
        };
        for sign in [T::one(), -T::one()] {
            let lam = half.clone() * (a.clone() + sign.clone() * r.clone());
            if lam.is_zero_eps(eps) {
                continue;
            }
            let mut p = vec![lam.clone()];
            p.extend(dir.iter().map(|d| lam.clone() * sign.clone() * d.clone()));
            out.push(p);
        }
        Ok(out)
    }

    /// `(a - ‖e‖) / 2`, the smallest eigenvalue.
    fn unit_content(&self, v: &[T], _tol: &Tolerance) -> Result<T> {
        self.check_dim(v)?;
        Ok(T::from_ratio(1, 2) * (v[0].clone() - self.norm(v)?))
    }
}
