//! Seeded random observables.
//!
//! An observable is drawn by taking a random convex combination of given
//! decompositions of the unit effect and spreading each of their effects
//! over `2..=5` outcomes with random weights. All weights are small-integer
//! ratios, so exact corpora stay exact.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gpt::{Observable, QubitObservable};
use crate::numerics::scalar::{axpy, zeros, Scalar};

pub const MIN_OUTCOMES: usize = 2;
pub const MAX_OUTCOMES: usize = 5;

/// Weights `w_i = k_i / Σk` with `k_i` in `0..=10`, not all zero.
fn random_distribution<T: Scalar>(rng: &mut ChaCha8Rng, n: usize) -> Vec<T> {
    loop {
        let ks: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=10)).collect();
        let total: i64 = ks.iter().sum();
        if total > 0 {
            return ks.iter().map(|&k| T::from_ratio(k, total)).collect();
        }
    }
}

/// One random observable spread over `outcomes` outcomes.
pub fn random_observable<T: Scalar>(
    decompositions: &[Observable<T>],
    outcomes: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Observable<T>> {
    if decompositions.is_empty() {
        return Err(Error::InvalidInput("no decompositions of the unit effect given".into()));
    }
    let d = decompositions[0].dim();
    let q: Vec<T> = random_distribution(rng, decompositions.len());
    let mut effects = vec![zeros::<T>(d); outcomes];
    for (dec, qd) in decompositions.iter().zip(&q) {
        if qd.is_zero_eps(0.0) {
            continue;
        }
        for x in 0..dec.len() {
            let p: Vec<T> = random_distribution(rng, outcomes);
            for (y, py) in p.iter().enumerate() {
                axpy(&mut effects[y], &(qd.clone() * py.clone()), dec.effect(x));
            }
        }
    }
    Observable::from_effects(effects)
}

/// `count` observables with outcome counts drawn from `2..=5`.
pub fn corpus<T: Scalar>(decompositions: &[Observable<T>], count: usize, seed: u64) -> Result<Vec<Observable<T>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(MIN_OUTCOMES..=MAX_OUTCOMES);
            random_observable(decompositions, n, &mut rng)
        })
        .collect()
}

/// Rational unit vector from the inverse stereographic projection of
/// `(a, b)`.
pub fn rational_direction<T: Scalar>(a: i64, b: i64, den: i64) -> [T; 3] {
    let (a, b) = (T::from_ratio(a, den), T::from_ratio(b, den));
    let r2 = a.clone() * a.clone() + b.clone() * b.clone();
    let two = T::from_i64(2);
    let q = T::one() + r2.clone();
    [
        two.clone() * a / q.clone(),
        two * b / q.clone(),
        (r2 - T::one()) / q,
    ]
}

/// Sharp qubit observable along a random rational direction.
pub fn random_sharp_qubit<T: Scalar>(rng: &mut ChaCha8Rng) -> QubitObservable<T> {
    let den = 8;
    let a = rng.gen_range(-24..=24);
    let b = rng.gen_range(-24..=24);
    QubitObservable::sharp(rational_direction(a, b, den))
}

/// Random qubit observables in linear coordinates, each drawn from three
/// random sharp observables.
pub fn qubit_corpus<T: Scalar>(count: usize, seed: u64) -> Result<Vec<Observable<T>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let sharp: Vec<Observable<T>> = (0..3).map(|_| random_sharp_qubit::<T>(&mut rng).to_observable()).collect();
            let n = rng.gen_range(MIN_OUTCOMES..=MAX_OUTCOMES);
            random_observable(&sharp, n, &mut rng)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::square_bit;
    use crate::gpt::{EffectSpace, QubitSpace};
    use crate::numerics::{Rational, Tolerance};

    #[test]
    fn corpus_is_valid_and_deterministic() {
        let sq = square_bit::<Rational>();
        let c1 = corpus(&[sq.e.clone(), sq.f.clone()], 20, 7).unwrap();
        let c2 = corpus(&[sq.e.clone(), sq.f.clone()], 20, 7).unwrap();
        assert_eq!(c1, c2);
        let tol = Tolerance::default();
        for a in &c1 {
            assert!((2..=5).contains(&a.len()));
            assert!(a.is_normalized(sq.space.unit(), &tol));
            assert!(a.effects().iter().all(|e| sq.space.is_valid_effect(e, &tol)));
        }
    }

    #[test]
    fn rational_directions_are_unit() {
        let n: [Rational; 3] = rational_direction(3, -5, 8);
        let s = n.iter().fold(Rational::zero(), |a, x| a + x.clone() * x.clone());
        assert_eq!(s, Rational::one());
    }

    #[test]
    fn qubit_corpus_is_valid() {
        let space = QubitSpace::<Rational>::standard();
        let tol = Tolerance::default();
        for a in qubit_corpus::<Rational>(20, 3).unwrap() {
            assert!(a.is_normalized(space.unit(), &tol));
            assert!(a.effects().iter().all(|e| space.is_valid_effect(e, &tol)));
        }
    }
}
