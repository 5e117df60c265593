use std::f64::consts::PI;

use gpt_sim::catalog::polygon::{lower_ray, upper_ray};
use gpt_sim::catalog::{classical, irreducible_catalog, polygon, polygon_irreducibles};
use gpt_sim::gpt::{EffectSpace, Observable, StateSpace};
use gpt_sim::numerics::Tolerance;
use gpt_sim::simulation::is_simulation_irreducible;
use proptest::prelude::*;

fn rotate(a: &Observable<f64>, n: usize) -> Vec<Vec<f64>> {
    let (c, s) = ((2.0 * PI / n as f64).cos(), (2.0 * PI / n as f64).sin());
    a.effects()
        .iter()
        .map(|e| vec![c * e[0] - s * e[1], s * e[0] + c * e[1], e[2]])
        .collect()
}

/// Same multiset of effects within `eps`.
fn same_effects(a: &[Vec<f64>], b: &[Vec<f64>], eps: f64) -> bool {
    let mut used = vec![false; b.len()];
    a.len() == b.len()
        && a.iter().all(|e| {
            let hit = (0..b.len()).find(|&j| !used[j] && e.iter().zip(&b[j]).all(|(x, y)| (x - y).abs() <= eps));
            hit.map(|j| used[j] = true).is_some()
        })
}

/// Evaluations `A_x(s_k)` of the single catalog member, rows by outcome.
fn table(space: &StateSpace<f64>, a: &Observable<f64>) -> Vec<Vec<f64>> {
    a.effects()
        .iter()
        .map(|e| space.states().iter().map(|s| e.iter().zip(s).map(|(x, y)| x * y).sum()).collect())
        .collect()
}

fn is_permutation(m: &[Vec<f64>], eps: f64) -> bool {
    let n = m.len();
    let entries_ok = m.iter().flatten().all(|&v| v.abs() <= eps || (v - 1.0).abs() <= eps);
    let rows_ok = m.iter().all(|r| (r.iter().sum::<f64>() - 1.0).abs() <= eps);
    let cols_ok = (0..n).all(|k| (m.iter().map(|r| r[k]).sum::<f64>() - 1.0).abs() <= eps);
    entries_ok && rows_ok && cols_ok
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn catalog_is_closed_under_rotation(n in 3usize..=12) {
        let tol = Tolerance::default();
        let cat = polygon_irreducibles(n, &tol).unwrap();
        let p = polygon(n).unwrap();
        for a in &cat.members {
            prop_assert!(is_simulation_irreducible(a, &p.space, &tol).unwrap());
            let r = rotate(a, n);
            let hit = cat.members.iter().any(|b| same_effects(&r, &b.effects(), 1e-9));
            prop_assert!(hit, "rotation of {:?} left the catalog", a.effects());
        }
    }

    #[test]
    fn polygon_identities_hold(n in 3usize..=40) {
        let p = polygon(n).unwrap();
        let u = p.space.unit();
        let eps = 1e-12;
        let close = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| (x - y).abs() <= eps);
        if n % 2 == 0 {
            for k in 0..n {
                let s: Vec<f64> = p.e[k].iter().zip(&p.e[(k + n / 2) % n]).map(|(a, b)| a + b).collect();
                prop_assert!(close(&s, u));
            }
        } else {
            let sec = 1.0 / (PI / n as f64).cos();
            let (a_z, b_z) = (sec / (1.0 + sec), 1.0 / (1.0 + sec));
            let m = (n - 1) / 2;
            for k in 1..=n {
                let k1 = (k + m - 1) % n + 1;
                let k2 = (k + m) % n + 1;
                let mid: Vec<f64> = upper_ray(n, k1, a_z)
                    .iter()
                    .zip(&upper_ray(n, k2, a_z))
                    .map(|(a, b)| 0.5 * (a + b))
                    .collect();
                prop_assert!(close(&mid, &lower_ray(n, k, b_z)));
                prop_assert!(close(&mid, &p.f[k - 1]));
                let fg: Vec<f64> = p.f[k - 1].iter().zip(&p.g[k - 1]).map(|(a, b)| a + b).collect();
                prop_assert!(close(&fg, u));
            }
        }
        for e in p.e.iter().chain(&p.f).chain(&p.g) {
            prop_assert!(p.space.is_valid_effect(e, &Tolerance::default()));
        }
    }
}

#[test]
fn triangle_and_classical_trit_share_one_class() {
    let tol = Tolerance::default();
    let tri = polygon(3).unwrap();
    let cat = polygon_irreducibles(3, &tol).unwrap();
    assert_eq!(cat.count(), 1);
    assert!(is_permutation(&table(&tri.space, &cat.members[0]), 1e-12));

    let trit = classical::<f64>(3).unwrap();
    let ccat = irreducible_catalog(&trit.space, &tol).unwrap();
    assert_eq!(ccat.count(), 1);
    assert!(is_permutation(&table(&trit.space, &ccat.members[0]), 1e-12));
}
