use std::f64::consts::PI;

use gpt_sim::catalog::polygon;
use gpt_sim::numerics::hull::ConicResult;
use gpt_sim::numerics::rays::canonical_ray;
use gpt_sim::numerics::{conic_decompose, extreme_rays, in_convex_hull, LinearProgram, LpOutcome, Rational, Scalar, Tolerance};
use proptest::prelude::*;

fn q(n: i64) -> Rational {
    Rational::from_i64(n)
}

#[derive(Clone, Debug)]
struct LpSpec {
    vars: usize,
    rows: Vec<(Vec<i64>, i64)>,
    free: Vec<bool>,
    objective: Option<Vec<i64>>,
}

fn lp_spec() -> impl Strategy<Value = LpSpec> {
    (1usize..5, 1usize..4).prop_flat_map(|(vars, m)| {
        (
            prop::collection::vec((prop::collection::vec(-5i64..=5, vars), -5i64..=5), m),
            prop::collection::vec(prop::bool::weighted(0.2), vars),
            prop::option::of(prop::collection::vec(-3i64..=3, vars)),
        )
            .prop_map(move |(rows, free, objective)| LpSpec {
                vars,
                rows,
                free,
                objective,
            })
    })
}

fn build<T: Scalar>(s: &LpSpec) -> LinearProgram<T> {
    let mut lp = LinearProgram::new(s.vars);
    for (row, b) in &s.rows {
        lp.add_row(row.iter().map(|&x| T::from_i64(x)).collect(), T::from_i64(*b));
    }
    for (j, &f) in s.free.iter().enumerate() {
        if f {
            lp.set_free(j);
        }
    }
    if let Some(c) = &s.objective {
        lp.maximize(c.iter().map(|&x| T::from_i64(x)).collect());
    }
    lp
}

fn kind<T>(o: &LpOutcome<T>) -> u8 {
    match o {
        LpOutcome::Feasible { .. } => 0,
        LpOutcome::Infeasible { .. } => 1,
        LpOutcome::Unbounded { .. } => 2,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lp_outcomes_replay(spec in lp_spec()) {
        let tol = Tolerance::default();
        let lp = build::<Rational>(&spec);
        match lp.solve(&tol).unwrap() {
            LpOutcome::Feasible { solution, value } => {
                prop_assert!(lp.satisfies(&solution, 0.0));
                if let (Some(v), Some(c)) = (value, &spec.objective) {
                    let cx = c.iter().zip(&solution).fold(q(0), |s, (&ci, x)| s + q(ci) * x.clone());
                    prop_assert_eq!(v, cx);
                }
            }
            LpOutcome::Infeasible { farkas } => prop_assert!(lp.refutes(&farkas, 0.0)),
            LpOutcome::Unbounded { solution, ray } => {
                prop_assert!(lp.satisfies(&solution, 0.0));
                let c = spec.objective.as_ref().unwrap();
                let gain = c.iter().zip(&ray).fold(q(0), |s, (&ci, r)| s + q(ci) * r.clone());
                prop_assert!(gain > q(0));
                for (row, _) in &spec.rows {
                    let ar = row.iter().zip(&ray).fold(q(0), |s, (&a, r)| s + q(a) * r.clone());
                    prop_assert_eq!(ar, q(0));
                }
                for (j, r) in ray.iter().enumerate() {
                    prop_assert!(spec.free[j] || *r >= q(0));
                }
            }
        }
    }

    #[test]
    fn exact_and_float_lp_verdicts_agree(spec in lp_spec()) {
        let tol = Tolerance::default();
        let exact = build::<Rational>(&spec).solve(&tol).unwrap();
        let float = build::<f64>(&spec).solve(&tol).unwrap();
        prop_assert_eq!(kind(&exact), kind(&float));
        if let (LpOutcome::Feasible { value: Some(a), .. }, LpOutcome::Feasible { value: Some(b), .. }) = (&exact, &float) {
            prop_assert!((a.to_f64() - b).abs() <= 1e-9 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn hull_contains_appended_point(
        gens in prop::collection::vec(prop::collection::vec(-10i64..=10, 3), 1..6),
        point in prop::collection::vec(-10i64..=10, 3),
    ) {
        let tol = Tolerance::default();
        let mut g: Vec<Vec<Rational>> = gens.iter().map(|v| v.iter().map(|&x| q(x)).collect()).collect();
        let p: Vec<Rational> = point.iter().map(|&x| q(x)).collect();
        let before = in_convex_hull(&p, &g, &tol).unwrap();
        prop_assert!(before.replays(&p, &g, 0.0));
        g.push(p.clone());
        let after = in_convex_hull(&p, &g, &tol).unwrap();
        prop_assert!(after.is_inside());
        prop_assert!(after.replays(&p, &g, 0.0));
    }

    #[test]
    fn conic_decomposition_reconstructs(
        rays in prop::collection::vec(
            prop::collection::vec(-6i64..=6, 3).prop_filter("zero ray", |r| r.iter().any(|&x| x != 0)),
            1..6,
        ),
        weights in prop::collection::vec(0i64..=4, 6),
        free_point in prop::collection::vec(-6i64..=6, 3),
    ) {
        let tol = Tolerance::default();
        let r: Vec<Vec<Rational>> = rays.iter().map(|v| v.iter().map(|&x| q(x)).collect()).collect();
        let mut v = vec![q(0); 3];
        for (ray, &w) in r.iter().zip(&weights) {
            for k in 0..3 {
                v[k] = v[k].clone() + q(w) * ray[k].clone();
            }
        }
        let res = conic_decompose(&v, &r, &tol).unwrap();
        let decomposed = matches!(res, ConicResult::Decomposed { .. });
        prop_assert!(decomposed);
        prop_assert!(res.replays(&v, &r, 0.0));

        let f: Vec<Rational> = free_point.iter().map(|&x| q(x)).collect();
        let res = conic_decompose(&f, &r, &tol).unwrap();
        prop_assert!(res.replays(&f, &r, 0.0));

        let mut with_zero = r.clone();
        with_zero.push(vec![q(0); 3]);
        prop_assert!(conic_decompose(&v, &with_zero, &tol).is_err());
    }

    #[test]
    fn polygon_rays_are_rotation_invariant(n in 3usize..=12) {
        let tol = Tolerance::default();
        let p = polygon(n).unwrap();
        let rays = extreme_rays(p.space.states(), &tol).unwrap();
        prop_assert_eq!(rays.len(), n);
        let (c, s) = ((2.0 * PI / n as f64).cos(), (2.0 * PI / n as f64).sin());
        let canon: Vec<Vec<f64>> = rays.iter().map(|r| canonical_ray(r, 1e-9)).collect();
        for r in &rays {
            let rotated = canonical_ray(&[c * r[0] - s * r[1], s * r[0] + c * r[1], r[2]], 1e-9);
            let hit = canon.iter().any(|o| o.iter().zip(&rotated).all(|(a, b)| (a - b).abs() < 1e-9));
            prop_assert!(hit, "rotated ray {:?} not in the ray set", rotated);
        }
    }
}
