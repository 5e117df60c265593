//! The reproduction suite: one check per published result.

use std::f64::consts::FRAC_1_SQRT_2;

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{
    c_component, c_t, classical, hexagon_explicit_certificate, hexagon_noise_example, irreducible_catalog,
    noisy_axis, octahedron_test, polygon, polygon_count_by_index_rules, polygon_count_formula,
    polygon_dichotomic_count, polygon_irreducibles, polygon_triples_by_index_rules, qubit_compatibility_bracket,
    sharp_axis, square_bit, tetrahedron_frame, trivial_qubit, IrreducibleCatalog,
};
use crate::corpus::{corpus, qubit_corpus};
use crate::error::{Error, Result};
use crate::gpt::{EffectSpace, Observable, QubitObservable, QubitSpace, StateSpace};
use crate::numerics::{in_convex_hull, rank, Rational, Scalar, Tolerance};
use crate::postprocessing::{are_equivalent, is_postprocessing_of};
use crate::simulation::{
    check_closure_laws, decompose_to_irreducibles, dichotomic_hull_necessary, is_compatible, is_simulable,
    is_simulation_irreducible, noise_content, noise_monotonicity_check, smin, verify_decomposition,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Criterion {
    pub number: usize,
    pub id: &'static str,
    pub title: &'static str,
}

pub const CRITERIA: [Criterion; 10] = [
    Criterion { number: 1, id: "polygon-counts", title: "polygon irreducible counts match both formulas" },
    Criterion { number: 2, id: "squarebit-universality", title: "square bit observables are simulable from {E,F}" },
    Criterion { number: 3, id: "ct-threshold", title: "C_t threshold at 1/sqrt(2) and octahedron agreement" },
    Criterion { number: 4, id: "tetrahedron", title: "tetrahedron example verdicts" },
    Criterion { number: 5, id: "hexagon-noise", title: "hexagon noise example" },
    Criterion { number: 6, id: "qubit-compatibility", title: "X_t,Y_t,Z_t compatibility threshold and smin" },
    Criterion { number: 7, id: "closure-laws", title: "closure laws of sim(.)" },
    Criterion { number: 8, id: "structural-cross-check", title: "irreducibility predicates and decomposition replay" },
    Criterion { number: 9, id: "noise-content", title: "noise content properties" },
    Criterion { number: 10, id: "exact-float-agreement", title: "exact and float verdicts agree" },
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReproduceConfig {
    pub seed: u64,
    pub facets: usize,
    pub tol: Tolerance,
}

impl Default for ReproduceConfig {
    fn default() -> Self {
        ReproduceConfig {
            seed: 2024,
            facets: 128,
            tol: Tolerance::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionOutcome {
    pub number: usize,
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub fn find_criterion(id: &str) -> Option<Criterion> {
    CRITERIA
        .iter()
        .copied()
        .find(|c| c.id == id || c.number.to_string() == id)
}

/// Runs one criterion; an error inside the check counts as a failure.
pub fn run_criterion(c: Criterion, cfg: &ReproduceConfig) -> CriterionOutcome {
    let result = match c.number {
        1 => polygon_counts(cfg),
        2 => squarebit_universality(cfg),
        3 => ct_threshold(cfg),
        4 => tetrahedron_verdicts(cfg),
        5 => hexagon_noise(cfg),
        6 => qubit_compatibility(cfg),
        7 => closure_laws(cfg),
        8 => structural_cross_check(cfg),
        9 => noise_properties(cfg),
        10 => exact_float_agreement(cfg),
        _ => Err(Error::InvalidInput(format!("no criterion {}", c.number))),
    };
    let (passed, detail) = match result {
        Ok(d) => (d.failures.is_empty(), d.render()),
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionOutcome {
        number: c.number,
        id: c.id,
        title: c.title,
        passed,
        detail,
    }
}

pub fn run_all(cfg: &ReproduceConfig) -> Vec<CriterionOutcome> {
    CRITERIA.iter().map(|&c| run_criterion(c, cfg)).collect()
}

#[derive(Default)]
struct Detail {
    facts: Vec<String>,
    failures: Vec<String>,
}

impl Detail {
    fn fact(&mut self, s: impl Into<String>) {
        self.facts.push(s.into());
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn render(&self) -> String {
        let mut parts = self.facts.clone();
        if !self.failures.is_empty() {
            parts.push(format!("FAILED: {}", self.failures.join("; ")));
        }
        parts.join("; ")
    }
}

fn uniform_trivial<T: Scalar>(unit: &[T], n: usize) -> Result<Observable<T>> {
    Observable::trivial(unit, &vec![T::one() / T::from_i64(n as i64); n])
}

fn polygon_counts(cfg: &ReproduceConfig) -> Result<Detail> {
    let rows: Vec<(usize, IrreducibleCatalog<f64>, bool)> = (3..=16usize)
        .into_par_iter()
        .map(|n| -> Result<_> {
            let cat = polygon_irreducibles(n, &cfg.tol)?;
            let space = polygon(n)?.space;
            let mut all_irreducible = true;
            for m in &cat.members {
                all_irreducible &= is_simulation_irreducible(m, &space, &cfg.tol)?;
            }
            Ok((n, cat, all_irreducible))
        })
        .collect::<Result<_>>()?;
    let mut d = Detail::default();
    let mut counts = Vec::new();
    for (n, cat, irreducible) in &rows {
        let formula = polygon_count_formula(*n);
        let oracle = polygon_count_by_index_rules(*n);
        let walked = polygon_triples_by_index_rules(*n).len() + polygon_dichotomic_count(*n);
        counts.push(format!("{n}:{}", cat.count()));
        d.expect(cat.count() == formula, || format!("n={n}: enumerated {} vs formula {formula}", cat.count()));
        d.expect(oracle == formula && walked == formula, || {
            format!("n={n}: index-rule oracle {oracle}/{walked} vs formula {formula}")
        });
        d.expect(*irreducible, || format!("n={n}: a member failed the irreducibility predicate"));
    }
    let trit = classical::<f64>(3)?;
    let trit_cat = irreducible_catalog(&trit.space, &cfg.tol)?;
    d.expect(trit_cat.count() == 1, || format!("classical(3) catalog has {} members", trit_cat.count()));
    d.fact(format!("counts {}", counts.join(" ")));
    Ok(d)
}

fn squarebit_universality(cfg: &ReproduceConfig) -> Result<Detail> {
    let sq = square_bit::<Rational>();
    let pool = vec![sq.e.clone(), sq.f.clone()];
    let sample = corpus(&pool, 100, cfg.seed)?;
    let verdicts: Vec<bool> = sample
        .par_iter()
        .map(|a| Ok(is_simulable(a, &pool, &cfg.tol)?.is_simulable()))
        .collect::<Result<_>>()?;
    let simulable = verdicts.iter().filter(|&&v| v).count();
    let s = smin(&sample, &pool, 2, &cfg.tol)?;
    let mut d = Detail::default();
    d.fact(format!("{simulable}/100 simulable from {{E,F}}; smin = {:?}", s.value()));
    d.expect(simulable == 100, || format!("{} observables not simulable", 100 - simulable));
    d.expect(s.value() == Some(2), || format!("smin = {:?}, expected 2", s.value()));
    Ok(d)
}

fn ct_threshold(cfg: &ReproduceConfig) -> Result<Detail> {
    let tol = &cfg.tol;
    let sims = vec![sharp_axis::<f64>(0).to_observable(), sharp_axis::<f64>(1).to_observable()];
    let sim_at = |t: f64| -> Result<bool> { Ok(is_simulable(&c_t(t).to_observable(), &sims, tol)?.is_simulable()) };
    let mut d = Detail::default();
    d.expect(sim_at(0.0)? && !sim_at(1.0)?, || "no transition inside [0, 1]".into());
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if sim_at(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t_star = 0.5 * (lo + hi);
    d.fact(format!("transition at t = {t_star:.9}"));
    d.expect((t_star - FRAC_1_SQRT_2).abs() <= 1e-6, || {
        format!("transition {t_star:.9} differs from 1/sqrt(2) by more than 1e-6")
    });

    let xyz: Vec<Observable<f64>> = (0..3).map(|k| sharp_axis::<f64>(k).to_observable()).collect();
    let sample = qubit_corpus::<f64>(400, cfg.seed)?;
    let checked: Vec<Option<(bool, bool)>> = sample
        .par_iter()
        .map(|a| -> Result<Option<(bool, bool)>> {
            let q = QubitObservable::from_observable(a, tol)?;
            let verdicts = octahedron_test(&q, tol);
            let worst = verdicts.iter().map(|v| v.value).fold(f64::MIN, f64::max);
            if (worst - 1.0).abs() < 1e-7 {
                return Ok(None);
            }
            let lp = is_simulable(a, &xyz, tol)?.is_simulable();
            Ok(Some((verdicts.iter().all(|v| v.pass), lp)))
        })
        .collect::<Result<_>>()?;
    let compared: Vec<(bool, bool)> = checked.into_iter().flatten().take(200).collect();
    let disagree = compared.iter().filter(|(o, l)| o != l).count();
    let inside = compared.iter().filter(|(o, _)| *o).count();
    d.fact(format!(
        "octahedron vs LP on {} observables ({inside} inside): {disagree} disagreements",
        compared.len()
    ));
    d.expect(compared.len() == 200, || format!("only {} usable observables", compared.len()));
    d.expect(disagree == 0, || format!("{disagree} disagreements"));
    Ok(d)
}

fn tetrahedron_verdicts(cfg: &ReproduceConfig) -> Result<Detail> {
    let tol = &cfg.tol;
    let f = tetrahedron_frame::<Rational>();
    let mut d = Detail::default();
    let irreducible = is_simulation_irreducible(&f.b, &f.space, tol)?;
    let a_from_b = is_simulable(&f.a, std::slice::from_ref(&f.b), tol)?;
    a_from_b.replay(&f.a, std::slice::from_ref(&f.b), tol)?;
    let mut gens = f.b.effects();
    gens.push(vec![Rational::zero(); 4]);
    gens.push(QubitSpace::<Rational>::unit_vector());
    let hull = in_convex_hull(f.a.effect(0), &gens, tol)?;
    let hull_replays = hull.replays(f.a.effect(0), &gens, 0.0);
    let from_c = is_simulable(&f.b, &f.c, tol)?;
    from_c.replay(&f.b, &f.c, tol)?;
    let from_d = is_simulable(&f.b, &f.d, tol)?;
    from_d.replay(&f.b, &f.d, tol)?;
    d.fact(format!(
        "B irreducible={irreducible}; A from B={}; A(+) in hull={}; B from C={}; B from D={}",
        a_from_b.verdict(),
        hull.is_inside(),
        from_c.verdict(),
        from_d.verdict()
    ));
    d.expect(irreducible, || "B is not irreducible".into());
    d.expect(a_from_b.is_simulable(), || "A not simulable from B".into());
    d.expect(!hull.is_inside() && hull_replays, || "A(+) hull certificate missing".into());
    d.expect(!from_c.is_simulable(), || "B simulable from C".into());
    d.expect(!from_d.is_simulable(), || "B simulable from D".into());
    Ok(d)
}

fn hexagon_noise(cfg: &ReproduceConfig) -> Result<Detail> {
    let mut d = Detail::default();
    let mut facts = Vec::new();
    for (lambda, expect) in [(0.0, false), (0.1, false), (0.25, true), (0.5, true), (0.9, true)] {
        let h = hexagon_noise_example(lambda, &cfg.tol)?;
        h.certificate.replay(&h.a_prime, &h.simulators, &cfg.tol)?;
        let got = h.certificate.is_simulable();
        facts.push(format!("{lambda}:{}", h.certificate.verdict()));
        d.expect(got == expect, || format!("lambda={lambda}: got {}", h.certificate.verdict()));
    }
    let h = hexagon_noise_example(0.25, &cfg.tol)?;
    let tight = Tolerance::uniform(1e-12)?;
    let explicit = hexagon_explicit_certificate().replay(&h.a_prime, &h.simulators, &tight);
    d.fact(facts.join(" "));
    d.fact(format!("explicit certificate at 1/4 replays within 1e-12: {}", explicit.is_ok()));
    d.expect(explicit.is_ok(), || format!("explicit certificate rejected: {explicit:?}"));
    Ok(d)
}

fn qubit_compatibility(cfg: &ReproduceConfig) -> Result<Detail> {
    let targets: Vec<QubitObservable<f64>> = (0..3).map(sharp_axis).collect();
    let b = qubit_compatibility_bracket(&targets, cfg.facets, &cfg.tol)?;
    let threshold = 1.0 / 3f64.sqrt();
    let mut d = Detail::default();
    d.fact(format!(
        "bracket [{:.6}, {:.6}] width {:.2e} at facets={}",
        b.lower,
        b.upper,
        b.width(),
        cfg.facets
    ));
    // Both ends are LP verdicts at eps_feas, so containment is up to eps_compare.
    let eps = cfg.tol.eps_compare;
    d.fact(format!("1/sqrt(3) - lower = {:.2e}, upper - 1/sqrt(3) = {:.2e}", threshold - b.lower, b.upper - threshold));
    d.expect(b.lower - eps <= threshold && threshold <= b.upper + eps, || "bracket misses 1/sqrt(3)".into());
    d.expect(b.width() <= 0.02, || format!("bracket width {} exceeds 0.02", b.width()));
    let pool: Vec<Observable<Rational>> = (0..3).map(|k| sharp_axis::<Rational>(k).to_observable()).collect();
    let s = smin(&pool, &pool, 3, &cfg.tol)?;
    d.fact(format!("smin({{X,Y,Z}}) = {:?}", s.value()));
    d.expect(s.value() == Some(3), || format!("smin = {:?}, expected 3", s.value()));
    Ok(d)
}

fn closure_laws(cfg: &ReproduceConfig) -> Result<Detail> {
    let mut d = Detail::default();
    let sq = square_bit::<Rational>();
    let mut sample = corpus(std::slice::from_ref(&sq.e), 25, cfg.seed)?;
    sample.extend(corpus(&[sq.e.clone(), sq.f.clone()], 25, cfg.seed + 1)?);
    let r = check_closure_laws(&sample, std::slice::from_ref(&sq.e), &cfg.tol)?;
    d.fact(format!("square bit: {} checks, {} violations", r.checks, r.violations.len()));
    d.expect(r.holds(), || format!("square bit violations: {:?}", r.violations));

    let pent = polygon(5)?;
    let gen = pent.generating_dichotomics();
    let base = gen[..2].to_vec();
    let mut sample = corpus(&base, 25, cfg.seed + 2)?;
    sample.extend(corpus(&gen, 25, cfg.seed + 3)?);
    let r = check_closure_laws(&sample, &base, &cfg.tol)?;
    d.fact(format!("pentagon: {} checks, {} violations", r.checks, r.violations.len()));
    d.expect(r.holds(), || format!("pentagon violations: {:?}", r.violations));
    Ok(d)
}

fn decomposition_round_trips<T: Scalar>(
    space: &dyn EffectSpace<T>,
    sources: &[Observable<T>],
    seed: u64,
    tol: &Tolerance,
) -> Result<usize> {
    let sample = corpus(sources, 50, seed)?;
    let ok: Vec<bool> = sample
        .par_iter()
        .map(|a| {
            let dec = decompose_to_irreducibles(a, space, tol)?;
            let irreducible = dec
                .members
                .iter()
                .map(|m| is_simulation_irreducible(m, space, tol))
                .collect::<Result<Vec<bool>>>()?
                .into_iter()
                .all(|x| x);
            Ok(irreducible && verify_decomposition(a, &dec, space, tol)?)
        })
        .collect::<Result<_>>()?;
    Ok(ok.iter().filter(|&&x| x).count())
}

fn structural_cross_check(cfg: &ReproduceConfig) -> Result<Detail> {
    let tol = &cfg.tol;
    let mut d = Detail::default();
    let per_n: Vec<(usize, usize, usize, usize)> = (3..=8usize)
        .into_par_iter()
        .map(|n| -> Result<_> {
            let space = polygon(n)?.space;
            let cat = polygon_irreducibles(n, tol)?;
            let mut structural = 0;
            let mut isolated = 0;
            for (i, m) in cat.members.iter().enumerate() {
                let indecomposable = m
                    .effects()
                    .iter()
                    .map(|e| space.is_indecomposable(e, tol))
                    .collect::<Result<Vec<bool>>>()?
                    .into_iter()
                    .all(|x| x);
                if indecomposable && rank(&m.effects(), tol.eps_rank) == m.len() {
                    structural += 1;
                }
                let others: Vec<Observable<f64>> = cat
                    .members
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, o)| o.clone())
                    .collect();
                if others.is_empty() || !is_simulable(m, &others, tol)?.is_simulable() {
                    isolated += 1;
                }
            }
            let round = decomposition_round_trips(&space, &cat.members, cfg.seed + n as u64, tol)?;
            Ok((n, cat.count(), structural.min(isolated), round))
        })
        .collect::<Result<_>>()?;
    for (n, count, good, round) in &per_n {
        d.expect(good == count, || format!("n={n}: {good}/{count} members pass both predicates"));
        d.expect(*round == 50, || format!("n={n}: {round}/50 decompositions replay"));
    }
    let sq = square_bit::<Rational>();
    let sq_round = decomposition_round_trips(&sq.space, &[sq.e.clone(), sq.f.clone()], cfg.seed, tol)?;
    let trit = classical::<Rational>(3)?;
    let trit_round = decomposition_round_trips(&trit.space, std::slice::from_ref(&trit.distinguishing), cfg.seed, tol)?;
    d.expect(sq_round == 50, || format!("square bit: {sq_round}/50 decompositions replay"));
    d.expect(trit_round == 50, || format!("classical(3): {trit_round}/50 decompositions replay"));
    d.fact(format!(
        "polygons 3..8: {} members checked; round trips square bit {sq_round}/50, classical(3) {trit_round}/50, polygons {}",
        per_n.iter().map(|r| r.1).sum::<usize>(),
        per_n.iter().map(|r| r.3.to_string()).collect::<Vec<_>>().join("/")
    ));
    Ok(d)
}

/// Noise content checks on one theory: trivial value, mixing lower bound
/// and monotonicity along certified simulations.
fn noise_on<T: Scalar>(
    name: &str,
    space: &dyn EffectSpace<T>,
    sample: &[Observable<T>],
    simulators: &[Observable<T>],
    tol: &Tolerance,
    d: &mut Detail,
) -> Result<()> {
    let eps = if T::EXACT { 0.0 } else { 1e-9 };
    let trivial = uniform_trivial(space.unit(), 3)?;
    let w = noise_content(&trivial, space, tol)?.value;
    d.expect(w == T::one(), || format!("{name}: w(trivial) = {}", w.to_f64()));
    let mut worst = f64::INFINITY;
    for lambda in [T::from_ratio(1, 10), T::from_ratio(3, 10), T::from_ratio(7, 10)] {
        for b in sample {
            let t = uniform_trivial(space.unit(), b.len())?.relabel(&b.labels().iter().map(|s| s.to_string()).collect::<Vec<_>>())?;
            let mixed = t.mix(&lambda, b)?;
            let w = noise_content(&mixed, space, tol)?.value;
            worst = worst.min((w.clone() - lambda.clone()).to_f64());
            d.expect(!w.cmp_eps(&lambda, eps).is_lt(), || {
                format!("{name}: w = {} below lambda = {}", w.to_f64(), lambda.to_f64())
            });
        }
    }
    let mut certified = 0;
    for a in sample {
        match noise_monotonicity_check(a, simulators, space, tol) {
            Ok(r) => {
                certified += 1;
                d.expect(r.holds, || format!("{name}: monotonicity fails"));
            }
            Err(Error::NotSimulable) => {}
            Err(e) => return Err(e),
        }
    }
    d.fact(format!("{name}: min w - lambda = {worst:.3e}, {certified} certified simulations"));
    Ok(())
}

fn noise_properties(cfg: &ReproduceConfig) -> Result<Detail> {
    let tol = &cfg.tol;
    let mut d = Detail::default();
    let sq = square_bit::<Rational>();
    let pool = [sq.e.clone(), sq.f.clone()];
    noise_on("square bit", &sq.space, &corpus(&pool, 30, cfg.seed)?, &pool, tol, &mut d)?;
    let pent = polygon(5)?;
    let gen = pent.generating_dichotomics();
    noise_on("pentagon", &pent.space, &corpus(&gen, 30, cfg.seed)?, &gen[..2], tol, &mut d)?;
    let qubit = QubitSpace::<f64>::standard();
    let xyz: Vec<Observable<f64>> = (0..3).map(|k| sharp_axis::<f64>(k).to_observable()).collect();
    noise_on("qubit", &qubit, &qubit_corpus(30, cfg.seed)?, &xyz, tol, &mut d)?;
    let tq = trivial_qubit::<Rational>().to_observable();
    let w = noise_content(&tq, &QubitSpace::<Rational>::standard(), tol)?.value;
    d.expect(w == Rational::one(), || "qubit T has noise content below 1".into());
    Ok(d)
}

/// Decision calls evaluated in both arithmetic modes.
fn decisions<T: Scalar>(
    space: &dyn EffectSpace<T>,
    sample: &[Observable<T>],
    simulators: &[Observable<T>],
    tol: &Tolerance,
) -> Result<Vec<bool>> {
    let mut out = Vec::new();
    let dichotomic = simulators.iter().all(Observable::is_dichotomic);
    for (i, a) in sample.iter().enumerate() {
        out.push(is_simulable(a, simulators, tol)?.is_simulable());
        out.push(is_simulation_irreducible(a, space, tol)?);
        let b = &sample[(i + 1) % sample.len()];
        out.push(is_postprocessing_of(a, b, tol)?.is_related());
        out.push(are_equivalent(a, b, tol)?);
        if dichotomic {
            for h in dichotomic_hull_necessary(a, simulators, tol)? {
                out.push(h.is_inside());
            }
        }
        if space.extreme_states().is_some() {
            out.push(is_compatible(&[a.clone(), b.clone()], space, tol)?.is_compatible());
        }
    }
    Ok(out)
}

fn convert_all(v: &[Observable<Rational>]) -> Result<Vec<Observable<f64>>> {
    v.iter().map(Observable::convert).collect()
}

fn float_space(s: &StateSpace<Rational>) -> Result<StateSpace<f64>> {
    let states = s
        .states()
        .iter()
        .map(|x| crate::numerics::scalar::convert_vec(x))
        .collect::<Result<_>>()?;
    StateSpace::new(s.name(), states, crate::numerics::scalar::convert_vec(s.unit())?)
}

fn agreement(
    name: &str,
    space: (&dyn EffectSpace<Rational>, &dyn EffectSpace<f64>),
    sample: &[Observable<Rational>],
    sims: &[Observable<Rational>],
    tol: &Tolerance,
    d: &mut Detail,
) -> Result<usize> {
    let exact = decisions(space.0, sample, sims, tol)?;
    let float = decisions(space.1, &convert_all(sample)?, &convert_all(sims)?, tol)?;
    let differ = exact.iter().zip(&float).filter(|(a, b)| a != b).count();
    d.expect(exact.len() == float.len() && differ == 0, || {
        format!("{name}: {differ} of {} decisions differ", exact.len())
    });
    Ok(exact.len())
}

fn exact_float_agreement(cfg: &ReproduceConfig) -> Result<Detail> {
    let tol = &cfg.tol;
    let mut d = Detail::default();
    let mut calls = 0;

    let sq = square_bit::<Rational>();
    let sq_f = float_space(&sq.space)?;
    let sample = corpus(&[sq.e.clone(), sq.f.clone()], 30, cfg.seed)?;
    calls += agreement("square bit", (&sq.space, &sq_f), &sample, std::slice::from_ref(&sq.e), tol, &mut d)?;

    let trit = classical::<Rational>(3)?;
    let trit_f = float_space(&trit.space)?;
    let coarse = crate::catalog::classical::<Rational>(3)?.distinguishing;
    let sample = corpus(std::slice::from_ref(&coarse), 30, cfg.seed + 1)?;
    let sims: Vec<Observable<Rational>> = sample[..2].to_vec();
    calls += agreement("classical(3)", (&trit.space, &trit_f), &sample, &sims, tol, &mut d)?;

    let q = QubitSpace::<Rational>::standard();
    let qf = QubitSpace::<f64>::standard();
    let half = Rational::from_ratio(1, 2);
    let named: Vec<Observable<Rational>> = [sharp_axis(0),
        sharp_axis(1),
        sharp_axis(2),
        noisy_axis(0, half.clone()),
        noisy_axis(1, half.clone()),
        noisy_axis(2, Rational::from_ratio(3, 5)),
        c_component(Rational::from_ratio(1, 3)),
        c_component(Rational::from_ratio(3, 5)),
        trivial_qubit()]
    .iter()
    .map(QubitObservable::to_observable)
    .collect();
    let xy = vec![named[0].clone(), named[1].clone()];
    calls += agreement("qubit named", (&q, &qf), &named, &xy, tol, &mut d)?;

    let f = tetrahedron_frame::<Rational>();
    let f_float = QubitSpace::with_metric("tetrahedron-frame", [2.0 / 9.0, 2.0 / 3.0, 1.0 / 9.0])?;
    let mut tet = vec![f.b.clone(), f.a.clone()];
    tet.extend(f.c.iter().cloned());
    tet.extend(f.d.iter().cloned());
    calls += agreement("tetrahedron frame", (&f.space, &f_float), &tet, &f.c, tol, &mut d)?;

    d.fact(format!("{calls} decision calls compared"));
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique_and_numbered() {
        for (i, c) in CRITERIA.iter().enumerate() {
            assert_eq!(c.number, i + 1);
            assert_eq!(find_criterion(c.id), Some(*c));
        }
        assert!(find_criterion("unknown-id").is_none());
    }
}
