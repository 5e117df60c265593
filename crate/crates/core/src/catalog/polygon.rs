use std::f64::consts::PI;

use super::theories::{enumerate_irreducibles, IrreducibleCatalog};
use crate::error::{Error, Result};
use crate::gpt::{EffectSpace, Observable, StateSpace};
use crate::numerics::{extreme_rays, Tolerance};
use crate::numerics::rays::canonical_ray;
use crate::numerics::scalar::vec_eq;
use crate::postprocessing::Postprocessing;
use crate::simulation::{is_simulable, SimulationCertificate};

/// Largest polygon accepted by the enumeration.
pub const POLYGON_N_MAX: usize = 40;

/// Regular polygon state space with its extreme effects.
#[derive(Clone, Debug, PartialEq)]
pub struct PolygonTheory {
    pub n: usize,
    pub space: StateSpace<f64>,
    /// Even `n`: `e_1..e_n`. Odd `n`: empty.
    pub e: Vec<Vec<f64>>,
    /// Odd `n` only.
    pub f: Vec<Vec<f64>>,
    /// Odd `n` only, `g_k = u - f_k`.
    pub g: Vec<Vec<f64>>,
}

fn angle(k: usize, n: usize) -> f64 {
    (2.0 * k as f64 - 1.0) * PI / n as f64
}

fn sec(n: usize) -> f64 {
    1.0 / (PI / n as f64).cos()
}

/// Direction `(-cos, -sin, 1)` of the k-th extremal ray `e_k⁺`, `k` from 1.
pub fn upper_ray(n: usize, k: usize, a_z: f64) -> Vec<f64> {
    let t = angle(k, n);
    vec![-a_z * t.cos(), -a_z * t.sin(), a_z]
}

/// `e_k⁻ = (b cos, b sin, 1 - b)`.
pub fn lower_ray(n: usize, k: usize, b_z: f64) -> Vec<f64> {
    let t = angle(k, n);
    vec![b_z * t.cos(), b_z * t.sin(), 1.0 - b_z]
}

pub fn polygon(n: usize) -> Result<PolygonTheory> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("a polygon needs at least 3 vertices, got {n}")));
    }
    let s = sec(n);
    let states = (1..=n)
        .map(|k| {
            let t = 2.0 * k as f64 * PI / n as f64;
            vec![s * t.cos(), s * t.sin(), 1.0]
        })
        .collect();
    let space = StateSpace::with_last_unit(format!("polygon-{n}"), states)?;
    let (mut e, mut f, mut g) = (Vec::new(), Vec::new(), Vec::new());
    if n.is_multiple_of(2) {
        e = (1..=n)
            .map(|k| {
                let t = angle(k, n);
                vec![0.5 * t.cos(), 0.5 * t.sin(), 0.5]
            })
            .collect();
    } else {
        let c = 1.0 / (1.0 + s);
        for k in 1..=n {
            let t = angle(k, n);
            f.push(vec![c * t.cos(), c * t.sin(), c * s]);
            g.push(vec![-c * t.cos(), -c * t.sin(), c]);
        }
    }
    Ok(PolygonTheory { n, space, e, f, g })
}

impl PolygonTheory {
    /// Indecomposable effects on the extremal rays, one per ray, with
    /// their names: `e_k` for even `n`, `g_k` for odd `n`.
    pub fn ray_effects(&self) -> (Vec<Vec<f64>>, Vec<String>) {
        if self.n.is_multiple_of(2) {
            let names = (1..=self.n).map(|k| format!("e{k}")).collect();
            (self.e.clone(), names)
        } else {
            let names = (1..=self.n).map(|k| format!("g{k}")).collect();
            (self.g.clone(), names)
        }
    }

    /// Dichotomic observables whose effects together with `o, u` generate
    /// the effect space: `{e_i, e_{i+n/2}}` for even `n`, `{f_i, g_i}` for odd.
    pub fn generating_dichotomics(&self) -> Vec<Observable<f64>> {
        let unit = self.space.unit().to_vec();
        if self.n.is_multiple_of(2) {
            (0..self.n / 2)
                .map(|i| Observable::dichotomic(self.e[i].clone(), &unit).expect("two labels"))
                .collect()
        } else {
            self.f
                .iter()
                .map(|f| Observable::dichotomic(f.clone(), &unit).expect("two labels"))
                .collect()
        }
    }

    /// Closed-form rays agree with the numerically enumerated dual-cone rays
    /// as sets of directions.
    pub fn cross_check_rays(&self, tol: &Tolerance) -> Result<bool> {
        let numeric = extreme_rays(self.space.states(), tol)?;
        let (closed, _) = self.ray_effects();
        if numeric.len() != closed.len() {
            return Ok(false);
        }
        let eps = 1e3 * tol.eps_feas;
        let norm: Vec<Vec<f64>> = numeric.iter().map(|r| canonical_ray(r, tol.eps_rank)).collect();
        Ok(closed.iter().all(|c| {
            let c = canonical_ray(c, tol.eps_rank);
            norm.iter().any(|r| vec_eq(r, &c, eps))
        }))
    }
}

/// `m + m(m-1)(m-2)/3` for even `n = 2m`, `(2m+1)m(m+1)/6` for odd
/// `n = 2m+1`.
pub fn polygon_count_formula(n: usize) -> usize {
    let m = n / 2;
    if n.is_multiple_of(2) {
        m + m * (m.saturating_sub(1)) * (m.saturating_sub(2)) / 3
    } else {
        (2 * m + 1) * m * (m + 1) / 6
    }
}

/// Dichotomic part of the even count; zero for odd `n`.
pub fn polygon_dichotomic_count(n: usize) -> usize {
    if n.is_multiple_of(2) {
        n / 2
    } else {
        0
    }
}

/// Counts irreducibles by walking ordered index triples `(i, j, k)` with
/// the appendix rules and dividing by `3!`; even polygons add their `m`
/// dichotomic pairs.
pub fn polygon_count_by_index_rules(n: usize) -> usize {
    let m = n / 2;
    let even = n.is_multiple_of(2);
    let mut ordered = 0usize;
    for _i in 0..n {
        if even {
            // j = i ± l with l in 2..m-1; k then has l - 1 choices.
            for _side in 0..2 {
                for l in 2..m {
                    ordered += l - 1;
                }
            }
        } else {
            // j = i ± l with l in 1..=m; k then has l choices.
            for _side in 0..2 {
                for l in 1..=m {
                    ordered += l;
                }
            }
        }
    }
    assert_eq!(ordered % 6, 0, "ordered triples come in groups of 3!");
    ordered / 6 + if even { m } else { 0 }
}

/// Explicit triple walk behind [`polygon_count_by_index_rules`]: the set of
/// unordered index triples reached from every starting index.
pub fn polygon_triples_by_index_rules(n: usize) -> Vec<[usize; 3]> {
    let m = n / 2;
    let even = n.is_multiple_of(2);
    let md = |x: isize| x.rem_euclid(n as isize) as usize;
    let mut out = std::collections::BTreeSet::new();
    for i in 0..n as isize {
        let m = m as isize;
        let mut push = |j: isize, k: isize| {
            let mut t = [md(i), md(j), md(k)];
            t.sort_unstable();
            out.insert(t);
        };
        if even {
            for l in 2..m {
                for k in (i + m + 1)..=(i + l + m - 1) {
                    push(i + l, k);
                }
                let j = i - l;
                for k in (j + m + 1)..=(i + m - 1) {
                    push(j, k);
                }
            }
        } else {
            for l in 1..=m {
                for k in (i + m + 1)..=(i + l + m) {
                    push(i + l, k);
                }
                let j = i - l;
                for k in (j + m + 1)..=(i + m) {
                    push(j, k);
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Every simulation irreducible observable of the `n`-gon up to
/// equivalence, generated from the extremal rays.
pub fn polygon_irreducibles(n: usize, tol: &Tolerance) -> Result<IrreducibleCatalog<f64>> {
    if n > POLYGON_N_MAX {
        return Err(Error::BudgetExceeded(format!(
            "polygon enumeration is limited to n <= {POLYGON_N_MAX}, got {n}"
        )));
    }
    let theory = polygon(n)?;
    let (rays, names) = theory.ray_effects();
    let catalog = enumerate_irreducibles(theory.space.name(), &rays, &names, &theory.space, tol)?;
    if n.is_multiple_of(2) {
        for (member, idx) in catalog.members.iter().zip(&catalog.rays) {
            if idx.len() != 3 {
                continue;
            }
            // Coefficients relative to e_k; their sum must be 2.
            let sum: f64 = member
                .effects()
                .iter()
                .zip(idx)
                .map(|(eff, &k)| eff[2] / rays[k][2])
                .sum();
            if (sum - 2.0).abs() > 1e3 * tol.eps_feas {
                return Err(Error::InvalidInput(format!(
                    "trichotomic irreducible of the {n}-gon has coefficient sum {sum}, expected 2"
                )));
            }
        }
    }
    Ok(catalog)
}

/// The hexagon example: `A = {⅔e₁, ⅔e₃, ⅔e₅}` mixed with the trivial
/// `⅓u` observable, and three dichotomic simulators.
#[derive(Clone, Debug, PartialEq)]
pub struct HexagonNoise {
    pub lambda: f64,
    pub a: Observable<f64>,
    pub a_prime: Observable<f64>,
    pub simulators: Vec<Observable<f64>>,
    pub certificate: SimulationCertificate<f64>,
}

pub fn hexagon_noise_example(lambda: f64, tol: &Tolerance) -> Result<HexagonNoise> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidInput(format!("lambda must lie in [0, 1], got {lambda}")));
    }
    let hex = polygon(6)?;
    let u = hex.space.unit().to_vec();
    let scale = |c: f64, v: &[f64]| v.iter().map(|x| c * x).collect::<Vec<f64>>();
    let a = Observable::from_effects(vec![
        scale(2.0 / 3.0, &hex.e[0]),
        scale(2.0 / 3.0, &hex.e[2]),
        scale(2.0 / 3.0, &hex.e[4]),
    ])?;
    let trivial = Observable::trivial(&u, &[1.0 / 3.0; 3])?;
    let a_prime = trivial.mix(&lambda, &a)?;
    let simulators = hexagon_simulators(&hex);
    let certificate = is_simulable(&a_prime, &simulators, tol)?;
    Ok(HexagonNoise {
        lambda,
        a,
        a_prime,
        simulators,
        certificate,
    })
}

/// `B⁽ⁱ⁾₊ = e_{2i-1}`, `B⁽ⁱ⁾₋ = e_{2i+2}` for `i = 1, 2, 3`.
fn hexagon_simulators(hex: &PolygonTheory) -> Vec<Observable<f64>> {
    (1..=3)
        .map(|i| {
            let plus = hex.e[(2 * i - 2) % 6].clone();
            let minus = hex.e[(2 * i + 1) % 6].clone();
            Observable::new(vec![("+".into(), plus), ("-".into(), minus)]).expect("two labels")
        })
        .collect()
}

/// The explicit simulation of `A′(¼)`: weights ⅓, `ν_{(i,+)k} = δ_ik`,
/// `ν_{(i,−)k} = ½(1 - δ_ik)`.
pub fn hexagon_explicit_certificate() -> SimulationCertificate<f64> {
    let targets: Vec<String> = (1..=3).map(|k| k.to_string()).collect();
    let src = vec!["+".to_string(), "-".to_string()];
    let channels = (0..3)
        .map(|i| {
            let plus = (0..3).map(|k| if k == i { 1.0 } else { 0.0 }).collect();
            let minus = (0..3).map(|k| if k == i { 0.0 } else { 0.5 }).collect();
            Postprocessing::from_parts(src.clone(), targets.clone(), vec![plus, minus])
        })
        .collect();
    SimulationCertificate::Simulable {
        weights: vec![1.0 / 3.0; 3],
        channels,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::scalar::{add_vec, dot, scale_vec};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn closed_form_counts() {
        let expected = [(3, 1), (4, 2), (5, 5), (6, 5), (7, 14), (8, 12)];
        for (n, c) in expected {
            assert_eq!(polygon_count_formula(n), c, "n = {n}");
        }
    }

    #[test]
    fn index_rules_match_formula() {
        for n in 3..=40 {
            assert_eq!(polygon_count_by_index_rules(n), polygon_count_formula(n), "n = {n}");
            let triples = polygon_triples_by_index_rules(n).len();
            assert_eq!(triples + polygon_dichotomic_count(n), polygon_count_formula(n), "n = {n}");
        }
    }

    #[test]
    fn even_effects_pair_to_unit() {
        for n in [4, 6, 8, 10] {
            let p = polygon(n).unwrap();
            for k in 0..n {
                let s = add_vec(&p.e[k], &p.e[(k + n / 2) % n]);
                assert!(vec_eq(&s, p.space.unit(), 1e-12));
            }
        }
    }

    #[test]
    fn odd_f_is_midpoint_of_upper_rays() {
        for n in [3, 5, 7, 9] {
            let p = polygon(n).unwrap();
            let s = sec(n);
            let m = (n - 1) / 2;
            for k in 1..=n {
                let a_z = s / (1.0 + s);
                let k1 = (k + m - 1) % n + 1;
                // Neighbour on the far side: k+m+1, not k+m-1.
                let k2 = (k + m) % n + 1;
                let mid = scale_vec(&0.5, &add_vec(&upper_ray(n, k1, a_z), &upper_ray(n, k2, a_z)));
                assert!(vec_eq(&mid, &lower_ray(n, k, 1.0 / (1.0 + s)), 1e-12));
                assert!(vec_eq(&mid, &p.f[k - 1], 1e-12));
                let g = add_vec(&p.g[k - 1], &p.f[k - 1]);
                assert!(vec_eq(&g, p.space.unit(), 1e-12));
            }
        }
    }

    #[test]
    fn effects_are_valid_and_tight() {
        for n in 3..=9 {
            let p = polygon(n).unwrap();
            assert!(p.space.validate(&tol()).is_empty());
            let (rays, _) = p.ray_effects();
            for r in rays.iter().chain(&p.f) {
                assert!(p.space.is_valid_effect(r, &tol()));
                let max = p.space.states().iter().map(|s| dot(r, s)).fold(f64::MIN, f64::max);
                assert!((max - 1.0).abs() < 1e-12, "n = {n}");
            }
            assert!(p.cross_check_rays(&tol()).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn hexagon_unit_from_alternate_effects() {
        let p = polygon(6).unwrap();
        let s = add_vec(&add_vec(&p.e[0], &p.e[2]), &p.e[4]);
        assert!(vec_eq(&scale_vec(&(2.0 / 3.0), &s), p.space.unit(), 1e-12));
    }

    #[test]
    fn small_catalog_sizes() {
        for n in 3..=8 {
            let c = polygon_irreducibles(n, &tol()).unwrap();
            assert_eq!(c.count(), polygon_count_formula(n), "n = {n}");
        }
    }

    #[test]
    fn catalog_limits() {
        assert!(matches!(polygon_irreducibles(41, &tol()), Err(Error::BudgetExceeded(_))));
        assert!(matches!(polygon(2), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn hexagon_explicit_certificate_replays() {
        let h = hexagon_noise_example(0.25, &tol()).unwrap();
        hexagon_explicit_certificate()
            .replay(&h.a_prime, &h.simulators, &Tolerance::uniform(1e-12).unwrap())
            .unwrap();
        assert!(h.certificate.is_simulable());
        assert!(!hexagon_noise_example(0.0, &tol()).unwrap().certificate.is_simulable());
    }
}
