use std::f64::consts::FRAC_1_SQRT_2;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gpt::{Observable, QubitEffect, QubitObservable, QubitSpace};
use crate::numerics::lp::LpOutcome;
use crate::numerics::scalar::{add_vec, sub_vec, Scalar};
use crate::numerics::{extreme_rays, Tolerance};
use crate::simulation::compat::joint_program_generators;

/// Sharp `½(𝟙 ± σ_k)` along coordinate axis `k`.
pub fn sharp_axis<T: Scalar>(k: usize) -> QubitObservable<T> {
    noisy_axis(k, T::one())
}

/// `½(𝟙 ± t σ_k)`.
pub fn noisy_axis<T: Scalar>(k: usize, t: T) -> QubitObservable<T> {
    let mut n = [T::zero(), T::zero(), T::zero()];
    n[k] = t;
    QubitObservable::sharp(n)
}

/// `C_t(±) = ½(𝟙 ± t(σx+σy)/√2)`.
pub fn c_t(t: f64) -> QubitObservable<f64> {
    c_component(t * FRAC_1_SQRT_2)
}

/// `½(𝟙 ± s(σx+σy))`; rational `s` gives an exact `C_t` with `t = √2 s`.
pub fn c_component<T: Scalar>(s: T) -> QubitObservable<T> {
    QubitObservable::sharp([s.clone(), s, T::zero()])
}

/// `T(+) = 𝟙`, `T(-) = O`.
pub fn trivial_qubit<T: Scalar>() -> QubitObservable<T> {
    QubitObservable::dichotomic(T::one(), [T::zero(), T::zero(), T::zero()])
}

/// Tetrahedron Bloch vectors `b₁..b₄` in the standard frame.
pub fn tetrahedron_vectors() -> [[f64; 3]; 4] {
    let s2 = 2f64.sqrt();
    let s23 = (2.0f64 / 3.0).sqrt();
    [
        [2.0 * s2 / 3.0, 0.0, -1.0 / 3.0],
        [-s2 / 3.0, s23, -1.0 / 3.0],
        [-s2 / 3.0, -s23, -1.0 / 3.0],
        [0.0, 0.0, 1.0],
    ]
}

/// `B(i) = ¼(𝟙 + b_i·σ)` in the standard frame.
pub fn tetrahedron() -> QubitObservable<f64> {
    let outcomes = tetrahedron_vectors()
        .iter()
        .enumerate()
        .map(|(i, b)| {
            (
                (i + 1).to_string(),
                QubitEffect::new(-0.5, [b[0] / 2.0, b[1] / 2.0, b[2] / 2.0]),
            )
        })
        .collect();
    QubitObservable::new(outcomes, &Tolerance::default()).expect("tetrahedron effects sum to the identity")
}

/// Named qubit observables at noise parameter `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitSuite {
    pub t: f64,
    pub observables: Vec<(String, QubitObservable<f64>)>,
}

impl QubitSuite {
    pub fn get(&self, name: &str) -> Option<&QubitObservable<f64>> {
        self.observables.iter().find(|(n, _)| n == name).map(|(_, o)| o)
    }
}

pub fn qubit_suite(t: f64) -> QubitSuite {
    let mut observables = vec![
        ("X".to_string(), sharp_axis(0)),
        ("Y".to_string(), sharp_axis(1)),
        ("Z".to_string(), sharp_axis(2)),
        ("X_t".to_string(), noisy_axis(0, t)),
        ("Y_t".to_string(), noisy_axis(1, t)),
        ("Z_t".to_string(), noisy_axis(2, t)),
        ("A".to_string(), sharp_axis(0)),
        ("B".to_string(), sharp_axis(1)),
        ("C_t".to_string(), c_t(t)),
    ];
    observables.push(("tetrahedron".to_string(), tetrahedron()));
    observables.push(("T".to_string(), trivial_qubit()));
    QubitSuite { t, observables }
}

/// The tetrahedron example in a rescaled frame where every coordinate is
/// rational. The frame stretches the Bloch axes by `√2/3`, `√(2/3)` and
/// `1/3`, and `space` carries the matching norm weights `(2/9, 2/3, 1/9)`.
/// Linear questions (hulls, simulation LPs) have the same answers in
/// either frame.
#[derive(Clone, Debug, PartialEq)]
pub struct TetrahedronFrame<T> {
    pub space: QubitSpace<T>,
    pub b: Observable<T>,
    /// `A(+) = B(1)+B(2)`, `A(-) = B(3)+B(4)`.
    pub a: Observable<T>,
    /// `C⁽ⁱ⁾ = {B(i), 𝟙 - B(i)}`.
    pub c: Vec<Observable<T>>,
    /// `D⁽¹⁾ = {B(1), B(2), B(3)+B(4)}`, `D⁽²⁾ = {B(3), B(4), B(1)+B(2)}`.
    pub d: Vec<Observable<T>>,
}

pub fn tetrahedron_frame<T: Scalar>() -> TetrahedronFrame<T> {
    let q = |n: i64, d: i64| T::from_ratio(n, d);
    let space = QubitSpace::with_metric("qubit-tetrahedron-frame", [q(2, 9), q(2, 3), q(1, 9)])
        .expect("positive weights");
    let scaled: [[i64; 3]; 4] = [[2, 0, -1], [-1, 1, -1], [-1, -1, -1], [0, 0, 3]];
    let effects: Vec<Vec<T>> = scaled
        .iter()
        .map(|b| {
            let mut v = vec![q(1, 2)];
            v.extend(b.iter().map(|&x| q(x, 2)));
            v
        })
        .collect();
    let b = Observable::from_effects(effects.clone()).expect("distinct labels");
    let unit = QubitSpace::<T>::unit_vector();
    let pair = |i: usize, j: usize| add_vec(&effects[i], &effects[j]);
    let a = Observable::new(vec![("+".into(), pair(0, 1)), ("-".into(), pair(2, 3))]).expect("two labels");
    let c = effects
        .iter()
        .map(|e| Observable::dichotomic(e.clone(), &unit).expect("two labels"))
        .collect();
    let d = vec![
        Observable::from_effects(vec![effects[0].clone(), effects[1].clone(), pair(2, 3)]).expect("labels"),
        Observable::from_effects(vec![effects[2].clone(), effects[3].clone(), pair(0, 1)]).expect("labels"),
    ];
    TetrahedronFrame { space, b, a, c, d }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OctahedronVerdict<T> {
    pub label: String,
    /// `|e0| + ‖e‖₁`.
    pub value: T,
    pub pass: bool,
}

/// Per effect: `|e0| + ‖e‖₁ <= 1`, i.e. the effect lies in
/// `conv{X±, Y±, Z±, O, 𝟙}`.
pub fn octahedron_test<T: Scalar>(e: &QubitObservable<T>, tol: &Tolerance) -> Vec<OctahedronVerdict<T>> {
    let eps = if T::EXACT { 0.0 } else { tol.eps_compare };
    e.outcomes()
        .iter()
        .map(|(label, eff)| {
            let value = eff.e.iter().fold(eff.e0.abs(), |s, x| s + x.abs());
            let pass = !value.cmp_eps(&T::one(), eps).is_gt();
            OctahedronVerdict {
                label: label.clone(),
                value,
                pass,
            }
        })
        .collect()
}

/// Unit vectors spread over the sphere by the golden-angle spiral.
pub fn fibonacci_directions(count: usize) -> Vec<[f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

/// The 26 directions `(a,b,c)/‖·‖` with `a,b,c ∈ {-1,0,1}` not all zero.
pub fn cube_directions() -> Vec<[f64; 3]> {
    let mut out = Vec::with_capacity(26);
    for a in -1i32..=1 {
        for b in -1i32..=1 {
            for c in -1i32..=1 {
                if a == 0 && b == 0 && c == 0 {
                    continue;
                }
                let n = ((a * a + b * b + c * c) as f64).sqrt();
                out.push([a as f64 / n, b as f64 / n, c as f64 / n]);
            }
        }
    }
    out
}

/// Polyhedral cones sandwiching the qubit positive cone `a >= ‖e‖`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyhedralCones {
    pub directions: Vec<[f64; 3]>,
    /// Generators `(1, n)` of the inscribed cone.
    pub inner: Vec<Vec<f64>>,
    /// Extreme rays of `{a - n·e >= 0 for every direction n}`.
    pub outer: Vec<Vec<f64>>,
}

/// `facets` spiral directions together with the 26 cube directions.
pub fn polyhedral_cones(facets: usize, tol: &Tolerance) -> Result<PolyhedralCones> {
    if facets < 8 {
        return Err(Error::InvalidInput(format!("facets must be at least 8, got {facets}")));
    }
    let mut directions = cube_directions();
    directions.extend(fibonacci_directions(facets));
    let inner = directions.iter().map(|n| vec![1.0, n[0], n[1], n[2]]).collect();
    let rows: Vec<Vec<f64>> = directions.iter().map(|n| vec![1.0, -n[0], -n[1], -n[2]]).collect();
    let outer = extreme_rays(&rows, tol)?;
    Ok(PolyhedralCones {
        directions,
        inner,
        outer,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BracketVerdict {
    Compatible,
    Incompatible,
    Undecided,
}

/// Compatibility of the targets after shrinking every Bloch vector and
/// bias by `t`: compatible for `t <= lower`, incompatible for `t > upper`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompatibilityBracket {
    pub lower: f64,
    pub upper: f64,
    /// Decision for the unscaled targets (`t = 1`).
    pub verdict: BracketVerdict,
    pub directions: usize,
    pub outer_rays: usize,
}

impl CompatibilityBracket {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// `½[(1 + t e0)𝟙 + t e·σ]` for every effect of a dichotomic target.
fn shrink(target: &Observable<f64>, t: f64) -> Observable<f64> {
    let outcomes = target
        .outcomes()
        .iter()
        .map(|o| {
            let mut e: Vec<f64> = o.effect.iter().map(|x| t * x).collect();
            e[0] += 1.0 - t;
            (o.label.clone(), e)
        })
        .collect();
    Observable::new(outcomes).expect("labels unchanged")
}

fn feasible(targets: &[Observable<f64>], t: f64, generators: &[Vec<f64>], tol: &Tolerance) -> Result<bool> {
    let shrunk: Vec<Observable<f64>> = targets.iter().map(|a| shrink(a, t)).collect();
    let (lp, _) = joint_program_generators(&shrunk, generators)?;
    Ok(matches!(lp.solve(tol)?, LpOutcome::Feasible { .. }))
}

const BISECTION_STEPS: usize = 40;

/// Bisects for the feasibility threshold of `generators`: returns the last
/// feasible and the first infeasible `t` in `[0, 1]`.
fn bisect(targets: &[Observable<f64>], generators: &[Vec<f64>], tol: &Tolerance) -> Result<(f64, f64)> {
    if feasible(targets, 1.0, generators, tol)? {
        return Ok((1.0, 1.0));
    }
    if !feasible(targets, 0.0, generators, tol)? {
        return Ok((0.0, 0.0));
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if feasible(targets, mid, generators, tol)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// Brackets the compatibility threshold of dichotomic qubit targets along
/// the white-noise path. The inscribed cone gives joint observables that
/// exist (lower end); the circumscribed cone rules them out (upper end).
pub fn qubit_compatibility_bracket(
    targets: &[QubitObservable<f64>],
    facets: usize,
    tol: &Tolerance,
) -> Result<CompatibilityBracket> {
    if targets.is_empty() {
        return Err(Error::InvalidInput("no target observables".into()));
    }
    if let Some(i) = targets.iter().position(|t| t.len() != 2) {
        return Err(Error::InvalidInput(format!("target {i} is not dichotomic")));
    }
    let obs: Vec<Observable<f64>> = targets.iter().map(QubitObservable::to_observable).collect();
    let unit = QubitSpace::<f64>::unit_vector();
    for a in &obs {
        a.check_normalized(&unit, tol)?;
    }
    let cones = polyhedral_cones(facets, tol)?;
    let (lower, upper) = rayon::join(|| bisect(&obs, &cones.inner, tol), || bisect(&obs, &cones.outer, tol));
    let lower = lower?.0;
    // The inner cone sits inside the outer one; any inversion is rounding.
    let upper = upper?.1.max(lower);
    let verdict = if lower >= 1.0 {
        BracketVerdict::Compatible
    } else if upper < 1.0 {
        BracketVerdict::Incompatible
    } else {
        BracketVerdict::Undecided
    };
    Ok(CompatibilityBracket {
        lower,
        upper,
        verdict,
        directions: cones.directions.len(),
        outer_rays: cones.outer.len(),
    })
}

/// `u - e` for a linear-coordinate qubit effect.
pub fn complement<T: Scalar>(e: &[T]) -> Vec<T> {
    sub_vec(&QubitSpace::<T>::unit_vector(), e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gpt::EffectSpace;
    use crate::numerics::Rational;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn tetrahedron_vectors_are_unit_and_balanced() {
        let b = tetrahedron_vectors();
        for v in &b {
            let n: f64 = v.iter().map(|x| x * x).sum();
            assert!((n - 1.0).abs() < 1e-12);
        }
        for k in 0..3 {
            assert!(b.iter().map(|v| v[k]).sum::<f64>().abs() < 1e-12);
        }
        assert!(tetrahedron().is_valid(&tol()));
    }

    #[test]
    fn exact_frame_effects_are_rank_one() {
        let f = tetrahedron_frame::<Rational>();
        for e in f.b.effects() {
            assert!(f.space.is_indecomposable(&e, &tol()).unwrap());
        }
        assert_eq!(f.b.total(), QubitSpace::<Rational>::unit_vector());
    }

    #[test]
    fn c_t_encoding() {
        let c = c_t(0.5);
        let v = c.outcomes()[0].1.to_vector();
        let s = 0.5 * FRAC_1_SQRT_2;
        assert!((v[1] - s).abs() < 1e-15 && (v[2] - s).abs() < 1e-15 && v[3] == 0.0 && v[0] == 0.0);
    }

    #[test]
    fn octahedron_values() {
        let x = sharp_axis::<Rational>(0);
        let v = octahedron_test(&x, &tol());
        assert!(v.iter().all(|r| r.pass && r.value == Rational::from_i64(1)));
        let e = QubitObservable::new(
            vec![
                ("a".into(), QubitEffect::new(0.5, [0.6, 0.0, 0.0])),
                ("b".into(), QubitEffect::new(-0.5, [-0.6, 0.0, 0.0])),
            ],
            &tol(),
        )
        .unwrap();
        let v = octahedron_test(&e, &tol());
        assert!((v[0].value - 1.1).abs() < 1e-12 && !v[0].pass);
    }

    #[test]
    fn sharp_pair_is_incompatible_and_coarse_pair_compatible() {
        let t = tol();
        let xy = qubit_compatibility_bracket(&[sharp_axis(0), sharp_axis(1)], 32, &t).unwrap();
        assert_eq!(xy.verdict, BracketVerdict::Incompatible);
        assert!(xy.lower <= FRAC_1_SQRT_2 + 1e-9 && xy.upper >= FRAC_1_SQRT_2 - 1e-9);
        let same = qubit_compatibility_bracket(&[sharp_axis(0), sharp_axis(0)], 8, &t).unwrap();
        assert_eq!(same.verdict, BracketVerdict::Compatible);
    }

    #[test]
    fn bracket_rejects_three_outcomes() {
        assert!(qubit_compatibility_bracket(&[tetrahedron()], 16, &tol()).is_err());
        assert!(qubit_compatibility_bracket(&[sharp_axis(0)], 4, &tol()).is_err());
    }
}
