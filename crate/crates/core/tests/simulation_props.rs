use gpt_sim::catalog::{irreducible_catalog, polygon, polygon_irreducibles, square_bit};
use gpt_sim::corpus::{corpus, qubit_corpus};
use gpt_sim::gpt::{EffectSpace, Observable, QubitSpace, StateSpace};
use gpt_sim::numerics::{Rational, Scalar, Tolerance};
use gpt_sim::postprocessing::{minimally_sufficient, Postprocessing};
use gpt_sim::simulation::{
    decompose_to_irreducibles, dichotomic_hull_necessary, is_simulable, is_simulation_irreducible, noise_content,
    verify_decomposition,
};
use proptest::prelude::*;

type Q = Rational;

fn members<T: Scalar>(space: &StateSpace<T>) -> Vec<Observable<T>> {
    irreducible_catalog(space, &Tolerance::default()).unwrap().members
}

fn square_corpus(count: usize, seed: u64) -> Vec<Observable<Q>> {
    corpus(&members(&square_bit::<Q>().space), count, seed).unwrap()
}

fn labels_of<T: Scalar>(a: &Observable<T>) -> Vec<String> {
    a.labels().iter().map(|s| s.to_string()).collect()
}

/// Two-outcome coarse graining `{A_0, u - A_0}`.
fn first_vs_rest<T: Scalar>(a: &Observable<T>) -> Observable<T> {
    let map: Vec<usize> = (0..a.len()).map(|x| usize::from(x > 0)).collect();
    Postprocessing::deterministic(&labels_of(a), &["+".into(), "-".into()], &map)
        .unwrap()
        .apply(a)
        .unwrap()
}

fn check_decomposition<T: Scalar>(
    a: &Observable<T>,
    space: &dyn EffectSpace<T>,
    tol: &Tolerance,
) -> Result<(), TestCaseError> {
    let d = decompose_to_irreducibles(a, space, tol).unwrap();
    prop_assert!(d.members.len() <= d.splits + 1);
    // Each split drops an outcome of the refined observable, so the split
    // tree has depth below its outcome count.
    let refined: usize = a
        .effects()
        .iter()
        .map(|e| space.decompose_into_indecomposables(e, tol).unwrap().len())
        .sum();
    prop_assert!(d.splits < 1usize << refined.saturating_sub(1).clamp(1, 30));
    for m in &d.members {
        prop_assert!(is_simulation_irreducible(m, space, tol).unwrap());
    }
    prop_assert!(verify_decomposition(a, &d, space, tol).unwrap());
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn certificates_replay_and_larger_bases_keep_verdicts(seed in any::<u64>(), k in 1usize..=3) {
        let tol = Tolerance::default();
        let targets = square_corpus(3, seed);
        let pool = square_corpus(k + 2, seed ^ 0x5eed);
        let (base, extra) = pool.split_at(k);
        let sq = square_bit::<Q>();
        for a in &targets {
            let cert = is_simulable(a, base, &tol).unwrap();
            prop_assert!(cert.replay(a, base, &tol).is_ok());
            let wider: Vec<Observable<Q>> = base.iter().chain(extra).chain([&sq.e]).cloned().collect();
            let wide = is_simulable(a, &wider, &tol).unwrap();
            prop_assert!(wide.replay(a, &wider, &tol).is_ok());
            if cert.is_simulable() {
                prop_assert!(wide.is_simulable());
            }
        }
    }

    #[test]
    fn verdict_is_invariant_under_minimal_forms(seed in any::<u64>(), k in 1usize..=3) {
        let tol = Tolerance::default();
        let pool = square_corpus(k, seed ^ 0xface);
        let mut targets = square_corpus(3, seed);
        // Always include one simulable case.
        targets.push(Postprocessing::uniform(&labels_of(&pool[0]), &["a".into(), "b".into()]).apply(&pool[0]).unwrap());
        for a in &targets {
            let hat = minimally_sufficient(a, &tol).unwrap().observable;
            let x = is_simulable(a, &pool, &tol).unwrap();
            let y = is_simulable(&hat, &pool, &tol).unwrap();
            prop_assert_eq!(x.is_simulable(), y.is_simulable());
        }
    }

    #[test]
    fn decompositions_end_in_irreducible_leaves(seed in any::<u64>(), n in 3usize..=6) {
        let tol = Tolerance::default();
        let sq = square_bit::<Q>();
        for a in square_corpus(2, seed) {
            check_decomposition(&a, &sq.space, &tol)?;
        }
        let p = polygon(n).unwrap();
        for a in corpus(&polygon_irreducibles(n, &tol).unwrap().members, 2, seed).unwrap() {
            check_decomposition(&a, &p.space, &tol)?;
        }
        // Mixed qubit effects have irrational spectra in general, so the
        // qubit branch runs in floats.
        let qubit = QubitSpace::<f64>::standard();
        for a in qubit_corpus::<f64>(2, seed).unwrap() {
            check_decomposition(&a, &qubit, &tol)?;
        }
    }

    #[test]
    fn mixing_in_noise_raises_noise_content(
        seed in any::<u64>(),
        lambda in 0i64..=10,
        raw in prop::collection::vec(0i64..=4, 5),
    ) {
        let tol = Tolerance::default();
        let sq = square_bit::<Q>();
        let lam = Q::from_ratio(lambda, 10);
        for b in square_corpus(3, seed) {
            let mut w: Vec<i64> = raw[..b.len()].to_vec();
            if w.iter().all(|&x| x == 0) {
                w[0] = 1;
            }
            let total: i64 = w.iter().sum();
            let weights: Vec<Q> = w.iter().map(|&x| Q::from_ratio(x, total)).collect();
            let t = Observable::trivial(sq.space.unit(), &weights).unwrap().relabel(&labels_of(&b)).unwrap();
            let a = t.mix(&lam, &b).unwrap();
            let r = noise_content(&a, &sq.space, &tol).unwrap();
            prop_assert!(r.replay(&a, &sq.space, &tol).is_ok());
            prop_assert!(r.value >= lam);
        }
    }

    #[test]
    fn dichotomic_hull_outside_rules_out_simulation(seed in any::<u64>(), k in 1usize..=3) {
        let tol = Tolerance::default();
        let sims: Vec<Observable<Q>> = square_corpus(k, seed ^ 0xd1c0).iter().map(first_vs_rest).collect();
        let qsims: Vec<Observable<Q>> = qubit_corpus::<Q>(k, seed ^ 0xd1c0).unwrap().iter().map(first_vs_rest).collect();
        let cases = square_corpus(3, seed)
            .into_iter()
            .map(|a| (a, &sims))
            .chain(qubit_corpus::<Q>(3, seed).unwrap().into_iter().map(|a| (a, &qsims)));
        for (a, s) in cases {
            let hull = dichotomic_hull_necessary(&a, s, &tol).unwrap();
            if hull.iter().any(|h| !h.is_inside()) {
                prop_assert!(!is_simulable(&a, s, &tol).unwrap().is_simulable());
            }
        }
    }
}

/// Every catalog member is out of reach of all the others. By monotonicity
/// in the base, the full set of other members covers every subset of them.
#[test]
fn irreducibles_are_not_simulable_from_the_rest() {
    let tol = Tolerance::default();
    for n in 3..=8 {
        let cat = polygon_irreducibles(n, &tol).unwrap();
        for (i, a) in cat.members.iter().enumerate() {
            let rest: Vec<Observable<f64>> = cat
                .members
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, m)| m.clone())
                .collect();
            if rest.is_empty() {
                continue;
            }
            let cert = is_simulable(a, &rest, &tol).unwrap();
            assert!(!cert.is_simulable(), "n = {n}, member {i}");
            cert.replay(a, &rest, &tol).unwrap();
        }
    }
}
