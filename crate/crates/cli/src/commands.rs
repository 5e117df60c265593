use std::path::Path;

use gpt_sim::catalog::{
    polygon as polygon_theory, polygon_irreducibles, qubit_compatibility_bracket, qubit_suite, sharp_axis, octahedron_test,
};
use gpt_sim::gpt::{EffectSpace, Observable, QubitEffect, QubitObservable, QubitSpace, StateSpace};
use gpt_sim::io::{
    catalog_to_json, certificate_from_json, certificate_to_json, decomposition_from_json, decomposition_to_json,
    detect_mode, is_qubit_document, noise_from_json, noise_to_json, observable_from_json, observable_to_json,
    observables_from_json, parse_json, qubit_observable_from_json, qubit_observable_to_json,
    state_space_from_json, state_space_to_json, vector_to_json, CountRow, NumberMode, COUNT_CSV_HEADER,
};
use gpt_sim::numerics::{rank, Rational, Scalar, Tolerance};
use gpt_sim::postprocessing::minimally_sufficient;
use gpt_sim::reproduce::{find_criterion, run_all, run_criterion, ReproduceConfig};
use gpt_sim::simulation::{
    decompose_to_irreducibles, is_simulable, is_simulation_irreducible, noise_content, smin, verify_decomposition,
    SimulationCertificate, SminResult,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::report::{CmdResult, Failure, Mode, Report, RunConfig, Table};
use crate::{PolygonCmd, QubitCmd, SimCmd, SpaceCmd};

#[derive(Clone, Copy)]
enum Arith {
    Exact,
    Float,
}

impl Arith {
    fn name(self) -> &'static str {
        match self {
            Arith::Exact => "exact",
            Arith::Float => "float",
        }
    }
}

fn read(path: &Path) -> CmdResult<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Exact unless the mode says otherwise or some document holds a float.
fn resolve(mode: Mode, docs: &[&Value]) -> CmdResult<Arith> {
    let mut float = false;
    for d in docs {
        float |= detect_mode(d)? == NumberMode::Float;
    }
    match mode {
        Mode::Exact if float => Err(Failure::Input(
            "input contains floating-point numbers; use --mode float".into(),
        )),
        Mode::Exact => Ok(Arith::Exact),
        Mode::Float => Ok(Arith::Float),
        Mode::Auto => Ok(if float { Arith::Float } else { Arith::Exact }),
    }
}

fn float_only(mode: Mode, what: &str) -> CmdResult<()> {
    if mode == Mode::Exact {
        return Err(Failure::Input(format!("{what} has irrational coordinates; use --mode float")));
    }
    Ok(())
}

/// `doc.payload.key`, `doc.key` or `doc`, so that reports can be fed back.
fn section<'a>(doc: &'a Value, key: &str) -> &'a Value {
    let inner = doc.get("payload").unwrap_or(doc);
    inner.get(key).unwrap_or(inner)
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn scalar_cell<T: Scalar>(x: &T) -> String {
    cell(&x.to_json())
}

fn load_space<T: Scalar>(space: Option<&Value>, target: &Value) -> CmdResult<Box<dyn EffectSpace<T>>> {
    match space {
        Some(s) => Ok(Box::new(state_space_from_json::<T>(section(s, "space"))?)),
        None if is_qubit_document(target) => Ok(Box::new(QubitSpace::<T>::standard())),
        None => Err(Failure::Input("--space is required for observables outside the qubit".into())),
    }
}

pub fn space(cmd: SpaceCmd, cfg: &RunConfig) -> CmdResult<Report> {
    let (file, rays) = match cmd {
        SpaceCmd::Validate { file } => (file, false),
        SpaceCmd::Rays { file } => (file, true),
    };
    let doc = read(&file)?;
    let doc = section(&doc, "space");
    match resolve(cfg.mode, &[doc])? {
        Arith::Exact => space_generic::<Rational>(doc, rays, &cfg.tol, Arith::Exact),
        Arith::Float => space_generic::<f64>(doc, rays, &cfg.tol, Arith::Float),
    }
}

fn space_generic<T: Scalar>(doc: &Value, rays: bool, tol: &Tolerance, a: Arith) -> CmdResult<Report> {
    let s: StateSpace<T> = state_space_from_json(doc)?;
    if rays {
        let rays = s.dual_cone_rays(tol)?;
        let mut table = Table::new(&["ray", "coeffs"]);
        for (i, r) in rays.iter().enumerate() {
            table.push(vec![i.to_string(), r.iter().map(scalar_cell).collect::<Vec<_>>().join(" ")]);
        }
        let payload = json!({
            "space": s.name(),
            "count": rays.len(),
            "rays": rays.iter().map(|r| vector_to_json(r)).collect::<Vec<_>>(),
        });
        return Ok(Report::new(a.name(), payload).with_table(table));
    }
    let diagnostics = s.validate(tol);
    let valid = diagnostics.is_empty();
    let mut table = Table::new(&["valid", "diagnostic"]);
    for d in &diagnostics {
        table.push(vec!["false".into(), format!("{d:?}")]);
    }
    if valid {
        table.push(vec!["true".into(), String::new()]);
    }
    let payload = json!({
        "valid": valid,
        "name": s.name(),
        "ambient_dim": s.ambient_dim(),
        "states": s.states().len(),
        "diagnostics": serde_json::to_value(&diagnostics).map_err(|e| Failure::Input(e.to_string()))?,
    });
    let mut report = Report::new(a.name(), payload).with_table(table);
    if !valid {
        report.exit = 2;
    }
    Ok(report)
}

pub fn sim(cmd: SimCmd, cfg: &RunConfig) -> CmdResult<Report> {
    match cmd {
        SimCmd::Check {
            target,
            simulators,
            verify,
        } => {
            let t = read(&target)?;
            let s = read(&simulators)?;
            let v = verify.as_deref().map(read).transpose()?;
            let cert = v.as_ref().map(|v| section(v, "certificate"));
            let mut docs = vec![&t, &s];
            docs.extend(cert);
            match resolve(cfg.mode, &docs)? {
                Arith::Exact => sim_check::<Rational>(&t, &s, cert, &cfg.tol, Arith::Exact),
                Arith::Float => sim_check::<f64>(&t, &s, cert, &cfg.tol, Arith::Float),
            }
        }
        SimCmd::Irreducible { target, space } => {
            let t = read(&target)?;
            let sp = space.as_deref().map(read).transpose()?;
            let mut docs = vec![&t];
            docs.extend(sp.as_ref());
            match resolve(cfg.mode, &docs)? {
                Arith::Exact => sim_irreducible::<Rational>(&t, sp.as_ref(), &cfg.tol, Arith::Exact),
                Arith::Float => sim_irreducible::<f64>(&t, sp.as_ref(), &cfg.tol, Arith::Float),
            }
        }
        SimCmd::Decompose { target, space, verify } => {
            let t = read(&target)?;
            let sp = space.as_deref().map(read).transpose()?;
            let v = verify.as_deref().map(read).transpose()?;
            let dec = v.as_ref().map(|v| section(v, "decomposition"));
            let mut docs = vec![&t];
            docs.extend(sp.as_ref());
            docs.extend(dec);
            match resolve(cfg.mode, &docs)? {
                Arith::Exact => sim_decompose::<Rational>(&t, sp.as_ref(), dec, &cfg.tol, Arith::Exact),
                Arith::Float => sim_decompose::<f64>(&t, sp.as_ref(), dec, &cfg.tol, Arith::Float),
            }
        }
        SimCmd::Smin { targets, pool } => {
            let t = read(&targets)?;
            let p = read(&pool)?;
            match resolve(cfg.mode, &[&t, &p])? {
                Arith::Exact => sim_smin::<Rational>(&t, &p, cfg, Arith::Exact),
                Arith::Float => sim_smin::<f64>(&t, &p, cfg, Arith::Float),
            }
        }
        SimCmd::Noise { target, space, verify } => {
            let t = read(&target)?;
            let sp = space.as_deref().map(read).transpose()?;
            let v = verify.as_deref().map(read).transpose()?;
            let res = v.as_ref().map(|v| section(v, "noise"));
            let mut docs = vec![&t];
            docs.extend(sp.as_ref());
            docs.extend(res);
            match resolve(cfg.mode, &docs)? {
                Arith::Exact => sim_noise::<Rational>(&t, sp.as_ref(), res, &cfg.tol, Arith::Exact),
                Arith::Float => sim_noise::<f64>(&t, sp.as_ref(), res, &cfg.tol, Arith::Float),
            }
        }
    }
}

fn sim_check<T: Scalar>(
    target: &Value,
    simulators: &Value,
    verify: Option<&Value>,
    tol: &Tolerance,
    a: Arith,
) -> CmdResult<Report> {
    let target: Observable<T> = observable_from_json(target)?;
    let sims: Vec<Observable<T>> = observables_from_json(simulators)?;
    let cert: SimulationCertificate<T> = match verify {
        Some(v) => certificate_from_json(v)?,
        None => is_simulable(&target, &sims, tol)?,
    };
    cert.replay(&target, &sims, tol)?;
    let mut table = Table::new(&["verdict", "replayed"]);
    table.push(vec![cert.verdict().into(), "true".into()]);
    let payload = json!({
        "verdict": cert.verdict(),
        "replayed": true,
        "certificate": certificate_to_json(&cert),
    });
    Ok(Report::new(a.name(), payload).with_table(table))
}

fn sim_irreducible<T: Scalar>(target: &Value, space: Option<&Value>, tol: &Tolerance, a: Arith) -> CmdResult<Report> {
    let sp = load_space::<T>(space, target)?;
    let obs: Observable<T> = observable_from_json(target)?;
    obs.check_normalized(sp.unit(), tol)?;
    let irreducible = is_simulation_irreducible(&obs, sp.as_ref(), tol)?;
    let minimal = minimally_sufficient(&obs, tol)?.observable;
    let indecomposable = minimal
        .effects()
        .iter()
        .map(|e| sp.is_indecomposable(e, tol))
        .collect::<Result<Vec<_>, _>>()?;
    let r = rank(&minimal.effects(), tol.eps_rank);
    let mut table = Table::new(&["irreducible", "outcomes", "rank", "indecomposable"]);
    table.push(vec![
        irreducible.to_string(),
        minimal.len().to_string(),
        r.to_string(),
        indecomposable.iter().all(|&x| x).to_string(),
    ]);
    let payload = json!({
        "irreducible": irreducible,
        "minimally_sufficient": observable_to_json(&minimal),
        "rank": r,
        "indecomposable": indecomposable,
    });
    Ok(Report::new(a.name(), payload).with_table(table))
}

fn sim_decompose<T: Scalar>(
    target: &Value,
    space: Option<&Value>,
    verify: Option<&Value>,
    tol: &Tolerance,
    a: Arith,
) -> CmdResult<Report> {
    let sp = load_space::<T>(space, target)?;
    let obs: Observable<T> = observable_from_json(target)?;
    let dec = match verify {
        Some(v) => decomposition_from_json(v)?,
        None => decompose_to_irreducibles(&obs, sp.as_ref(), tol)?,
    };
    let verified = verify_decomposition(&obs, &dec, sp.as_ref(), tol)?;
    let weights = match &dec.certificate {
        SimulationCertificate::Simulable { weights, .. } => weights.clone(),
        SimulationCertificate::NotSimulable { .. } => Vec::new(),
    };
    let mut table = Table::new(&["member", "weight", "outcomes", "verified"]);
    for (i, m) in dec.members.iter().enumerate() {
        table.push(vec![
            i.to_string(),
            weights.get(i).map(scalar_cell).unwrap_or_default(),
            m.len().to_string(),
            verified.to_string(),
        ]);
    }
    let mut payload = decomposition_to_json(&dec);
    payload["weights"] = vector_to_json(&weights);
    payload["verified"] = json!(verified);
    Ok(Report::new(a.name(), payload).with_table(table))
}

fn sim_smin<T: Scalar>(targets: &Value, pool: &Value, cfg: &RunConfig, a: Arith) -> CmdResult<Report> {
    let targets: Vec<Observable<T>> = observables_from_json(targets)?;
    let pool: Vec<Observable<T>> = observables_from_json(pool)?;
    let tol = &cfg.tol;
    let res = smin(&targets, &pool, cfg.k_max, tol)?;
    let mut table = Table::new(&["smin", "subset", "k_max"]);
    let payload = match &res {
        SminResult::Found { k, subset } => {
            let chosen: Vec<Observable<T>> = subset.iter().map(|&i| pool[i].clone()).collect();
            let certificates = targets
                .par_iter()
                .map(|t| {
                    let c = is_simulable(t, &chosen, tol)?;
                    c.replay(t, &chosen, tol)?;
                    Ok(certificate_to_json(&c))
                })
                .collect::<Result<Vec<_>, gpt_sim::Error>>()?;
            table.push(vec![
                k.to_string(),
                subset.iter().map(usize::to_string).collect::<Vec<_>>().join(" "),
                cfg.k_max.to_string(),
            ]);
            json!({ "smin": k, "subset": subset, "k_max": cfg.k_max, "certificates": certificates })
        }
        SminResult::AboveKMax { k_max } => {
            table.push(vec![format!(">{k_max}"), String::new(), k_max.to_string()]);
            json!({ "smin": Value::Null, "above_k_max": true, "k_max": k_max })
        }
    };
    Ok(Report::new(a.name(), payload).with_table(table))
}

fn sim_noise<T: Scalar>(
    target: &Value,
    space: Option<&Value>,
    verify: Option<&Value>,
    tol: &Tolerance,
    a: Arith,
) -> CmdResult<Report> {
    let sp = load_space::<T>(space, target)?;
    let obs: Observable<T> = observable_from_json(target)?;
    let res = match verify {
        Some(v) => noise_from_json(v)?,
        None => noise_content(&obs, sp.as_ref(), tol)?,
    };
    res.replay(&obs, sp.as_ref(), tol)?;
    let mut table = Table::new(&["noise_content", "replayed"]);
    table.push(vec![scalar_cell(&res.value), "true".into()]);
    let mut payload = noise_to_json(&res);
    payload["replayed"] = json!(true);
    Ok(Report::new(a.name(), payload).with_table(table))
}

fn coeff_rows(table: &mut Table, tag: &str, index: usize, label: &str, e: &[f64]) {
    let mut row = vec![tag.to_string(), index.to_string(), label.to_string()];
    row.extend(e.iter().map(scalar_cell));
    table.push(row);
}

fn polygon_build(n: usize) -> CmdResult<Report> {
    let p = polygon_theory(n)?;
    let mut table = Table::new(&["kind", "index", "label", "c0", "c1", "c2"]);
    for (k, s) in p.space.states().iter().enumerate() {
        coeff_rows(&mut table, "state", k + 1, "", s);
    }
    let (rays, names) = p.ray_effects();
    for (k, (r, name)) in rays.iter().zip(&names).enumerate() {
        coeff_rows(&mut table, "ray", k + 1, name, r);
    }
    let gens = p.generating_dichotomics();
    let named = |v: &[Vec<f64>]| v.iter().map(|e| vector_to_json(e)).collect::<Vec<_>>();
    let payload = json!({
        "n": n,
        "space": state_space_to_json(&p.space),
        "effects": { "e": named(&p.e), "f": named(&p.f), "g": named(&p.g) },
        "rays": rays.iter().zip(&names).map(|(r, l)| json!({ "label": l, "coeffs": vector_to_json(r) })).collect::<Vec<_>>(),
        "generating_dichotomics": gens.iter().map(observable_to_json).collect::<Vec<_>>(),
    });
    Ok(Report::new("float", payload).with_table(table))
}

pub fn polygon(cmd: PolygonCmd, cfg: &RunConfig) -> CmdResult<Report> {
    float_only(cfg.mode, "a regular polygon")?;
    let tol = &cfg.tol;
    match cmd {
        PolygonCmd::Build { n } => polygon_build(n),
        PolygonCmd::Irreducibles { n } => {
            let cat = polygon_irreducibles(n, tol)?;
            let mut table = Table::new(&["kind", "index", "label", "c0", "c1", "c2"]);
            for (i, m) in cat.members.iter().enumerate() {
                for o in m.outcomes() {
                    coeff_rows(&mut table, "member", i, &o.label, &o.effect);
                }
            }
            Ok(Report::new("float", catalog_to_json(&cat)).with_table(table))
        }
        PolygonCmd::Counts { n_max } => {
            if n_max < 3 {
                return Err(Failure::Input(format!("--n-max must be at least 3, got {n_max}")));
            }
            let rows = (3..=n_max)
                .into_par_iter()
                .map(|n| Ok(CountRow::from_catalog(n, &polygon_irreducibles(n, tol)?)))
                .collect::<Result<Vec<_>, gpt_sim::Error>>()?;
            let mut table = Table::new(&COUNT_CSV_HEADER.split(',').collect::<Vec<_>>());
            for r in &rows {
                table.push(vec![
                    r.n.to_string(),
                    r.dichotomic.to_string(),
                    r.trichotomic.to_string(),
                    r.total.to_string(),
                    r.formula.to_string(),
                    r.matches.to_string(),
                ]);
            }
            let payload = json!({
                "all_match": rows.iter().all(|r| r.matches),
                "rows": serde_json::to_value(&rows).map_err(|e| Failure::Input(e.to_string()))?,
            });
            Ok(Report::new("float", payload).with_table(table))
        }
    }
}

fn axis_targets(spec: &str) -> CmdResult<Vec<QubitObservable<f64>>> {
    spec.chars()
        .map(|c| match c.to_ascii_lowercase() {
            'x' => Ok(sharp_axis(0)),
            'y' => Ok(sharp_axis(1)),
            'z' => Ok(sharp_axis(2)),
            other => Err(Failure::Input(format!("unknown axis {other:?}; use letters from xyz or a file"))),
        })
        .collect()
}

fn qubit_list(doc: &Value, tol: &Tolerance) -> CmdResult<Vec<QubitObservable<f64>>> {
    let items: Vec<&Value> = match doc {
        Value::Array(v) => v.iter().collect(),
        Value::Object(m) if m.contains_key("observables") => m["observables"]
            .as_array()
            .ok_or_else(|| Failure::Input("observables must be an array".into()))?
            .iter()
            .collect(),
        _ => vec![doc],
    };
    items
        .into_iter()
        .map(|v| Ok(qubit_observable_from_json(v, tol)?))
        .collect()
}

fn octahedron<T: Scalar>(doc: &Value, t: Option<f64>, tol: &Tolerance, a: Arith) -> CmdResult<Report> {
    let obs: QubitObservable<T> = qubit_observable_from_json(doc, tol)?;
    let obs = match t {
        None => obs,
        Some(t) => {
            if !(0.0..=1.0).contains(&t) {
                return Err(Failure::Input(format!("--t must lie in [0, 1], got {t}")));
            }
            let t = T::from_f64(t).ok_or_else(|| Failure::Input("unrepresentable --t".into()))?;
            let outcomes = obs
                .outcomes()
                .iter()
                .map(|(l, e)| {
                    let scaled = [t.clone() * e.e[0].clone(), t.clone() * e.e[1].clone(), t.clone() * e.e[2].clone()];
                    (l.clone(), QubitEffect::new(t.clone() * e.e0.clone(), scaled))
                })
                .collect();
            QubitObservable::new(outcomes, tol)?
        }
    };
    let verdicts = octahedron_test(&obs, tol);
    let mut table = Table::new(&["label", "value", "pass"]);
    for v in &verdicts {
        table.push(vec![v.label.clone(), scalar_cell(&v.value), v.pass.to_string()]);
    }
    let payload = json!({
        "t": t,
        "pass": verdicts.iter().all(|v| v.pass),
        "verdicts": verdicts.iter().map(|v| json!({
            "label": v.label,
            "value": v.value.to_json(),
            "pass": v.pass,
        })).collect::<Vec<_>>(),
        "observable": qubit_observable_to_json(&obs),
    });
    Ok(Report::new(a.name(), payload).with_table(table))
}

pub fn qubit(cmd: QubitCmd, cfg: &RunConfig) -> CmdResult<Report> {
    let tol = &cfg.tol;
    match cmd {
        QubitCmd::Octahedron { obs, t } => {
            let doc = read(&obs)?;
            match resolve(cfg.mode, &[&doc])? {
                Arith::Exact => octahedron::<Rational>(&doc, t, tol, Arith::Exact),
                Arith::Float => octahedron::<f64>(&doc, t, tol, Arith::Float),
            }
        }
        QubitCmd::CompatBracket { targets } => {
            float_only(cfg.mode, "the Bloch ball")?;
            let path = Path::new(&targets);
            let list = if path.is_file() {
                qubit_list(&read(path)?, tol)?
            } else {
                axis_targets(&targets)?
            };
            let b = qubit_compatibility_bracket(&list, cfg.facets, tol)?;
            let verdict = serde_json::to_value(b.verdict).map_err(|e| Failure::Input(e.to_string()))?;
            let mut table = Table::new(&["lower", "upper", "width", "verdict", "facets"]);
            table.push(vec![
                scalar_cell(&b.lower),
                scalar_cell(&b.upper),
                scalar_cell(&b.width()),
                cell(&verdict),
                cfg.facets.to_string(),
            ]);
            let payload = json!({
                "targets": list.iter().map(qubit_observable_to_json).collect::<Vec<_>>(),
                "lower": b.lower,
                "upper": b.upper,
                "width": b.width(),
                "verdict": verdict,
                "directions": b.directions,
                "outer_rays": b.outer_rays,
            });
            Ok(Report::new("float", payload).with_table(table))
        }
        QubitCmd::Suite { t } => {
            float_only(cfg.mode, "the named qubit suite")?;
            if !(0.0..=1.0).contains(&t) {
                return Err(Failure::Input(format!("--t must lie in [0, 1], got {t}")));
            }
            let suite = qubit_suite(t);
            let mut table = Table::new(&["name", "label", "e0", "e1", "e2", "e3"]);
            for (name, o) in &suite.observables {
                for (l, e) in o.outcomes() {
                    let mut row = vec![name.clone(), l.clone(), scalar_cell(&e.e0)];
                    row.extend(e.e.iter().map(scalar_cell));
                    table.push(row);
                }
            }
            let payload = json!({
                "t": t,
                "observables": suite.observables.iter().map(|(n, o)| json!({
                    "name": n,
                    "observable": qubit_observable_to_json(o),
                })).collect::<Vec<_>>(),
            });
            Ok(Report::new("float", payload).with_table(table))
        }
    }
}

pub fn reproduce(which: &str, cfg: &RunConfig) -> CmdResult<Report> {
    let rc = ReproduceConfig {
        seed: cfg.seed,
        facets: cfg.facets,
        tol: cfg.tol,
    };
    let outcomes = if which == "all" {
        run_all(&rc)
    } else {
        let c = find_criterion(which).ok_or_else(|| Failure::Input(format!("unknown criterion {which:?}")))?;
        vec![run_criterion(c, &rc)]
    };
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    let mut table = Table::new(&["number", "id", "passed", "detail"]);
    for o in &outcomes {
        table.push(vec![o.number.to_string(), o.id.into(), o.passed.to_string(), o.detail.clone()]);
    }
    let payload = json!({
        "passed": outcomes.len() - failed,
        "failed": failed,
        "criteria": serde_json::to_value(&outcomes).map_err(|e| Failure::Input(e.to_string()))?,
    });
    let mut report = Report::new("mixed", payload).with_table(table);
    if failed > 0 {
        report.exit = 1;
    }
    Ok(report)
}
