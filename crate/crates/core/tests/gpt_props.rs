use gpt_sim::catalog::{classical, polygon, square_bit};
use gpt_sim::corpus::corpus;
use gpt_sim::gpt::{qubit_to_vector, EffectSpace, Observable, QubitEffect, StateSpace};
use gpt_sim::numerics::{Rational, Scalar, Tolerance};
use proptest::prelude::*;

fn sum<T: Scalar>(vs: &[Vec<T>], d: usize) -> Vec<T> {
    let mut acc = vec![T::zero(); d];
    for v in vs {
        for (a, x) in acc.iter_mut().zip(v) {
            *a = a.clone() + x.clone();
        }
    }
    acc
}

fn close<T: Scalar>(a: &[T], b: &[T], eps: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| x.cmp_eps(y, eps).is_eq())
}

/// Unit decompositions to seed the corpus: every catalog member of the space.
fn seeds<T: Scalar>(space: &StateSpace<T>, tol: &Tolerance) -> Vec<Observable<T>> {
    gpt_sim::catalog::irreducible_catalog(space, tol).unwrap().members
}

fn check_rays<T: Scalar>(space: &StateSpace<T>, a: i64, b: i64, tol: &Tolerance) -> Result<(), TestCaseError> {
    let rays = space.dual_cone_rays(tol).unwrap();
    for r in &rays {
        prop_assert!(space.is_indecomposable(r, tol).unwrap());
    }
    let (a, b) = (T::from_i64(a), T::from_i64(b));
    for i in 0..rays.len() {
        for j in i + 1..rays.len() {
            let v: Vec<T> = rays[i]
                .iter()
                .zip(&rays[j])
                .map(|(x, y)| a.clone() * x.clone() + b.clone() * y.clone())
                .collect();
            prop_assert!(!space.is_indecomposable(&v, tol).unwrap(), "rays {} and {}", i, j);
        }
    }
    Ok(())
}

fn check_effects<T: Scalar>(space: &StateSpace<T>, seed: u64, tol: &Tolerance) -> Result<(), TestCaseError> {
    let eps = if T::EXACT { 0.0 } else { tol.eps_feas };
    let d = space.ambient_dim();
    let obs = corpus(&seeds(space, tol), 3, seed).unwrap();
    for a in &obs {
        prop_assert!(a.is_normalized(space.unit(), tol));
        for e in a.effects() {
            prop_assert!(space.is_valid_effect(&e, tol));
            let rest: Vec<T> = space.unit().iter().zip(&e).map(|(u, x)| u.clone() - x.clone()).collect();
            prop_assert!(space.is_valid_effect(&rest, tol));

            let parts = space.decompose_into_indecomposables(&e, tol).unwrap();
            prop_assert!(close(&sum(&parts, d), &e, eps));
            for p in &parts {
                prop_assert!(space.is_indecomposable(p, tol).unwrap());
            }
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rays_are_indecomposable_and_pair_sums_are_not(a in 1i64..=5, b in 1i64..=5, n in 3usize..=8) {
        let tol = Tolerance::default();
        check_rays(&square_bit::<Rational>().space, a, b, &tol)?;
        check_rays(&classical::<Rational>(3).unwrap().space, a, b, &tol)?;
        check_rays(&polygon(n).unwrap().space, a, b, &tol)?;
    }

    #[test]
    fn corpus_effects_are_valid_and_decompose(seed in any::<u64>(), n in 3usize..=7) {
        let tol = Tolerance::default();
        check_effects(&square_bit::<Rational>().space, seed, &tol)?;
        check_effects(&classical::<Rational>(3).unwrap().space, seed, &tol)?;
        check_effects(&polygon(n).unwrap().space, seed, &tol)?;
    }

    #[test]
    fn qubit_vector_round_trip_is_exact(
        e0 in -8i64..=8,
        e in prop::array::uniform3(-8i64..=8),
        den in 1i64..=12,
    ) {
        let tol = Tolerance::default();
        let q = QubitEffect::new(
            Rational::from_ratio(e0, den),
            e.map(|x| Rational::from_ratio(x, den)),
        );
        let v = qubit_to_vector(&q);
        prop_assert_eq!(&v, &q.to_vector());
        let back = QubitEffect::from_vector(&v).unwrap();
        prop_assert_eq!(&back, &q);
        prop_assert_eq!(back.is_valid(&tol), q.is_valid(&tol));
        let lin = QubitEffect::from_linear(&q.to_linear()).unwrap();
        prop_assert_eq!(lin, q);
    }
}
