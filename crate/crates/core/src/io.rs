//! JSON and CSV encodings.
//!
//! Numbers are JSON floats in float mode and `"p/q"` strings in exact
//! mode. A document may not mix the two; JSON integers are accepted in
//! either mode.

use serde_json::{json, Map, Value};

use crate::catalog::{polygon_count_formula, IrreducibleCatalog};
use crate::error::{Error, Result};
use crate::gpt::{Observable, QubitEffect, QubitObservable, StateSpace};
use crate::numerics::Scalar;
use crate::postprocessing::Postprocessing;
use crate::simulation::{IrreducibleDecomposition, NoiseContentResult, SimulationCertificate};

/// Number encoding found in a document.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NumberMode {
    /// Only JSON integers; loadable in either mode.
    Integer,
    Exact,
    Float,
}

fn scan(v: &Value, exact: &mut bool, float: &mut bool) {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => *float = true,
        Value::String(s) if looks_numeric(s) => *exact = true,
        Value::Array(items) => items.iter().for_each(|i| scan(i, exact, float)),
        Value::Object(map) => {
            for (k, i) in map {
                // Labels are strings but never numbers.
                if k != "label" && k != "source" && k != "target" && k != "labels" {
                    scan(i, exact, float);
                }
            }
        }
        _ => {}
    }
}

fn looks_numeric(s: &str) -> bool {
    let s = s.trim();
    !s.is_empty() && s.chars().all(|c| c.is_ascii_digit() || "+-/ ".contains(c)) && s.chars().any(|c| c.is_ascii_digit())
}

/// Mode of a document; mixed documents are rejected.
pub fn detect_mode(v: &Value) -> Result<NumberMode> {
    let (mut exact, mut float) = (false, false);
    scan(v, &mut exact, &mut float);
    match (exact, float) {
        (true, true) => Err(Error::Parse(
            "document mixes rational strings and floating-point numbers".into(),
        )),
        (true, false) => Ok(NumberMode::Exact),
        (false, true) => Ok(NumberMode::Float),
        (false, false) => Ok(NumberMode::Integer),
    }
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Checks that the document can be read with scalar type `T`.
pub fn check_mode<T: Scalar>(v: &Value) -> Result<()> {
    match (detect_mode(v)?, T::EXACT) {
        (NumberMode::Float, true) => Err(Error::Parse(
            "floating-point document cannot be read in exact mode".into(),
        )),
        _ => Ok(()),
    }
}

pub fn parse_scalar<T: Scalar>(v: &Value) -> Result<T> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                return Ok(T::from_i64(i));
            }
            let f = n
                .as_f64()
                .ok_or_else(|| Error::Parse(format!("number out of range: {n}")))?;
            if !f.is_finite() {
                return Err(Error::Parse(format!("non-finite number: {n}")));
            }
            T::from_f64(f).ok_or_else(|| Error::Parse(format!("unrepresentable number: {n}")))
        }
        Value::String(s) => T::parse_rational(s),
        other => Err(Error::Parse(format!("expected a number, found {other}"))),
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| Error::Parse(format!("missing field {key:?}")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("{what} must be an array")))
}

fn string(v: &Value, what: &str) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(Error::Parse(format!("{what} must be a string"))),
    }
}

pub fn parse_vector<T: Scalar>(v: &Value) -> Result<Vec<T>> {
    array(v, "vector")?.iter().map(parse_scalar).collect()
}

pub fn vector_to_json<T: Scalar>(v: &[T]) -> Value {
    Value::Array(v.iter().map(Scalar::to_json).collect())
}

fn labels(v: &Value, what: &str) -> Result<Vec<String>> {
    array(v, what)?.iter().map(|l| string(l, "label")).collect()
}

pub fn state_space_from_json<T: Scalar>(v: &Value) -> Result<StateSpace<T>> {
    check_mode::<T>(v)?;
    let name = match v.get("name") {
        Some(n) => string(n, "name")?,
        None => "unnamed".to_string(),
    };
    let states: Vec<Vec<T>> = array(field(v, "extreme_states")?, "extreme_states")?
        .iter()
        .map(parse_vector)
        .collect::<Result<_>>()?;
    let unit = match v.get("unit") {
        Some(u) => parse_vector(u)?,
        None => {
            let d = states
                .first()
                .map(Vec::len)
                .ok_or_else(|| Error::Parse("state space without states".into()))?;
            let mut u = vec![T::zero(); d];
            u[d - 1] = T::one();
            u
        }
    };
    if let Some(d) = v.get("ambient_dim") {
        let d = d
            .as_u64()
            .ok_or_else(|| Error::Parse("ambient_dim must be a nonnegative integer".into()))?;
        if d as usize != unit.len() {
            return Err(Error::DimensionMismatch {
                expected: d as usize,
                found: unit.len(),
            });
        }
    }
    StateSpace::new(name, states, unit)
}

pub fn state_space_to_json<T: Scalar>(s: &StateSpace<T>) -> Value {
    use crate::gpt::EffectSpace;
    json!({
        "name": s.name(),
        "ambient_dim": s.ambient_dim(),
        "unit": vector_to_json(s.unit()),
        "extreme_states": s.states().iter().map(|x| vector_to_json(x)).collect::<Vec<_>>(),
    })
}

pub fn effect_from_json<T: Scalar>(v: &Value) -> Result<Vec<T>> {
    check_mode::<T>(v)?;
    parse_vector(field(v, "coeffs")?)
}

pub fn effect_to_json<T: Scalar>(e: &[T]) -> Value {
    json!({ "coeffs": vector_to_json(e) })
}

/// Whether the observable document is in qubit Bloch form.
pub fn is_qubit_document(v: &Value) -> bool {
    v.get("outcomes")
        .and_then(Value::as_array)
        .and_then(|o| o.first())
        .is_some_and(|o| o.get("e0").is_some())
}

/// Reads an observable. Qubit documents are converted to linear
/// coordinates.
pub fn observable_from_json<T: Scalar>(v: &Value) -> Result<Observable<T>> {
    check_mode::<T>(v)?;
    if is_qubit_document(v) {
        return Ok(qubit_outcomes(v)?.to_observable_unchecked());
    }
    let outcomes = array(field(v, "outcomes")?, "outcomes")?
        .iter()
        .map(|o| Ok((string(field(o, "label")?, "label")?, parse_vector(field(o, "coeffs")?)?)))
        .collect::<Result<Vec<_>>>()?;
    Observable::new(outcomes)
}

pub fn observable_to_json<T: Scalar>(a: &Observable<T>) -> Value {
    json!({
        "outcomes": a.outcomes().iter().map(|o| json!({
            "label": o.label,
            "coeffs": vector_to_json(&o.effect),
        })).collect::<Vec<_>>()
    })
}

struct QubitOutcomes<T>(Vec<(String, QubitEffect<T>)>);

impl<T: Scalar> QubitOutcomes<T> {
    fn to_observable_unchecked(&self) -> Observable<T> {
        Observable::new(self.0.iter().map(|(l, e)| (l.clone(), e.to_linear())).collect())
            .expect("labels checked while parsing")
    }
}

fn qubit_outcomes<T: Scalar>(v: &Value) -> Result<QubitOutcomes<T>> {
    let outcomes = array(field(v, "outcomes")?, "outcomes")?
        .iter()
        .map(|o| {
            let e = parse_vector::<T>(field(o, "e")?)?;
            if e.len() != 3 {
                return Err(Error::DimensionMismatch {
                    expected: 3,
                    found: e.len(),
                });
            }
            let [x, y, z]: [T; 3] = e.try_into().expect("length checked");
            Ok((
                string(field(o, "label")?, "label")?,
                QubitEffect::new(parse_scalar(field(o, "e0")?)?, [x, y, z]),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    if outcomes.is_empty() {
        return Err(Error::InvalidInput("observable without outcomes".into()));
    }
    let mut seen = std::collections::HashSet::new();
    for (l, _) in &outcomes {
        if !seen.insert(l.clone()) {
            return Err(Error::InvalidInput(format!("duplicate outcome label {l:?}")));
        }
    }
    Ok(QubitOutcomes(outcomes))
}

pub fn qubit_observable_from_json<T: Scalar>(v: &Value, tol: &crate::numerics::Tolerance) -> Result<QubitObservable<T>> {
    check_mode::<T>(v)?;
    QubitObservable::new(qubit_outcomes(v)?.0, tol)
}

pub fn qubit_observable_to_json<T: Scalar>(a: &QubitObservable<T>) -> Value {
    json!({
        "outcomes": a.outcomes().iter().map(|(l, e)| json!({
            "label": l,
            "e0": e.e0.to_json(),
            "e": vector_to_json(&e.e),
        })).collect::<Vec<_>>()
    })
}

/// A single observable, an array of observables, or
/// `{"observables": [...]}`.
pub fn observables_from_json<T: Scalar>(v: &Value) -> Result<Vec<Observable<T>>> {
    check_mode::<T>(v)?;
    let list = match v {
        Value::Array(items) => items.iter().collect::<Vec<_>>(),
        Value::Object(m) if m.contains_key("observables") => {
            array(&m["observables"], "observables")?.iter().collect()
        }
        Value::Object(m) if m.contains_key("members") => array(&m["members"], "members")?.iter().collect(),
        _ => vec![v],
    };
    list.into_iter().map(observable_from_json).collect()
}

pub fn postprocessing_from_json<T: Scalar>(v: &Value, tol: &crate::numerics::Tolerance) -> Result<Postprocessing<T>> {
    check_mode::<T>(v)?;
    let source = labels(field(v, "source")?, "source")?;
    let target = labels(field(v, "target")?, "target")?;
    let matrix = array(field(v, "matrix")?, "matrix")?
        .iter()
        .map(parse_vector)
        .collect::<Result<_>>()?;
    Postprocessing::new(source, target, matrix, tol)
}

pub fn postprocessing_to_json<T: Scalar>(p: &Postprocessing<T>) -> Value {
    json!({
        "source": p.source(),
        "target": p.target(),
        "matrix": p.matrix().iter().map(|r| vector_to_json(r)).collect::<Vec<_>>(),
    })
}

pub fn certificate_to_json<T: Scalar>(c: &SimulationCertificate<T>) -> Value {
    match c {
        SimulationCertificate::Simulable { weights, channels } => json!({
            "verdict": c.verdict(),
            "weights": vector_to_json(weights),
            "channels": channels.iter().map(postprocessing_to_json).collect::<Vec<_>>(),
        }),
        SimulationCertificate::NotSimulable { farkas } => json!({
            "verdict": c.verdict(),
            "farkas": vector_to_json(farkas),
        }),
    }
}

/// Reads a certificate. Channels are not checked for stochasticity here;
/// [`SimulationCertificate::replay`] does that.
pub fn certificate_from_json<T: Scalar>(v: &Value) -> Result<SimulationCertificate<T>> {
    check_mode::<T>(v)?;
    match field(v, "verdict")?.as_str() {
        Some("simulable") => {
            let weights = parse_vector(field(v, "weights")?)?;
            let channels = array(field(v, "channels")?, "channels")?
                .iter()
                .map(|c| {
                    let source = labels(field(c, "source")?, "source")?;
                    let target = labels(field(c, "target")?, "target")?;
                    let matrix = array(field(c, "matrix")?, "matrix")?
                        .iter()
                        .map(parse_vector)
                        .collect::<Result<_>>()?;
                    Ok(Postprocessing::from_parts(source, target, matrix))
                })
                .collect::<Result<_>>()?;
            Ok(SimulationCertificate::Simulable { weights, channels })
        }
        Some("not_simulable") => Ok(SimulationCertificate::NotSimulable {
            farkas: parse_vector(field(v, "farkas")?)?,
        }),
        _ => Err(Error::Parse("verdict must be \"simulable\" or \"not_simulable\"".into())),
    }
}

pub fn decomposition_to_json<T: Scalar>(d: &IrreducibleDecomposition<T>) -> Value {
    json!({
        "members": d.members.iter().map(observable_to_json).collect::<Vec<_>>(),
        "splits": d.splits,
        "certificate": certificate_to_json(&d.certificate),
    })
}

pub fn decomposition_from_json<T: Scalar>(v: &Value) -> Result<IrreducibleDecomposition<T>> {
    check_mode::<T>(v)?;
    let members = array(field(v, "members")?, "members")?
        .iter()
        .map(observable_from_json)
        .collect::<Result<_>>()?;
    let splits = v.get("splits").and_then(Value::as_u64).unwrap_or(0) as usize;
    Ok(IrreducibleDecomposition {
        members,
        certificate: certificate_from_json(field(v, "certificate")?)?,
        splits,
    })
}

pub fn noise_to_json<T: Scalar>(r: &NoiseContentResult<T>) -> Value {
    json!({
        "value": r.value.to_json(),
        "trivial": observable_to_json(&r.trivial),
        "residual": r.residual.as_ref().map(observable_to_json),
    })
}

pub fn noise_from_json<T: Scalar>(v: &Value) -> Result<NoiseContentResult<T>> {
    check_mode::<T>(v)?;
    let residual = match v.get("residual") {
        None | Some(Value::Null) => None,
        Some(r) => Some(observable_from_json(r)?),
    };
    Ok(NoiseContentResult {
        value: parse_scalar(field(v, "value")?)?,
        trivial: observable_from_json(field(v, "trivial")?)?,
        residual,
    })
}

pub fn catalog_to_json<T: Scalar>(c: &IrreducibleCatalog<T>) -> Value {
    let mut m = Map::new();
    m.insert("theory".into(), json!(c.theory));
    m.insert("count".into(), json!(c.count()));
    m.insert(
        "members".into(),
        Value::Array(c.members.iter().map(observable_to_json).collect()),
    );
    Value::Object(m)
}

/// One line of the polygon count summary.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct CountRow {
    pub n: usize,
    pub dichotomic: usize,
    pub trichotomic: usize,
    pub total: usize,
    pub formula: usize,
    #[serde(rename = "match")]
    pub matches: bool,
}

impl CountRow {
    pub fn from_catalog<T: Scalar>(n: usize, c: &IrreducibleCatalog<T>) -> Self {
        let dichotomic = c.members.iter().filter(|m| m.len() == 2).count();
        let trichotomic = c.members.iter().filter(|m| m.len() == 3).count();
        let formula = polygon_count_formula(n);
        CountRow {
            n,
            dichotomic,
            trichotomic,
            total: c.count(),
            formula,
            matches: c.count() == formula,
        }
    }
}

pub const COUNT_CSV_HEADER: &str = "n,dichotomic,trichotomic,total,formula,match";

pub fn counts_to_csv(rows: &[CountRow]) -> String {
    let mut out = String::from(COUNT_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.n, r.dichotomic, r.trichotomic, r.total, r.formula, r.matches
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::square_bit;
    use crate::numerics::{Rational, Tolerance};

    #[test]
    fn mixed_documents_rejected() {
        let v = parse_json(r#"{"outcomes":[{"label":"a","coeffs":["1/2", 0.5]}]}"#).unwrap();
        assert!(matches!(detect_mode(&v), Err(Error::Parse(_))));
    }

    #[test]
    fn labels_do_not_count_as_numbers() {
        let v = parse_json(r#"{"outcomes":[{"label":"1","coeffs":[0.5]}]}"#).unwrap();
        assert_eq!(detect_mode(&v).unwrap(), NumberMode::Float);
    }

    #[test]
    fn float_file_refused_in_exact_mode() {
        let v = parse_json(r#"{"outcomes":[{"label":"a","coeffs":[0.5]}]}"#).unwrap();
        assert!(observable_from_json::<Rational>(&v).is_err());
        assert!(observable_from_json::<f64>(&v).is_ok());
    }

    #[test]
    fn state_space_round_trip() {
        let sq = square_bit::<Rational>();
        let v = state_space_to_json(&sq.space);
        let back: StateSpace<Rational> = state_space_from_json(&v).unwrap();
        assert_eq!(back, sq.space);
    }

    #[test]
    fn observable_round_trip_exact() {
        let sq = square_bit::<Rational>();
        let v = observable_to_json(&sq.e);
        assert_eq!(detect_mode(&v).unwrap(), NumberMode::Exact);
        let back: Observable<Rational> = observable_from_json(&v).unwrap();
        assert_eq!(back, sq.e);
    }

    #[test]
    fn qubit_document_is_linearized() {
        let v = parse_json(
            r#"{"outcomes":[{"label":"+","e0":"0","e":["1/2","0","0"]},{"label":"-","e0":"0","e":["-1/2","0","0"]}]}"#,
        )
        .unwrap();
        let a: Observable<Rational> = observable_from_json(&v).unwrap();
        assert_eq!(a.effect(0)[0], Rational::from_i64(1));
        let q: QubitObservable<Rational> = qubit_observable_from_json(&v, &Tolerance::default()).unwrap();
        assert_eq!(qubit_observable_to_json(&q), v);
    }

    #[test]
    fn certificate_round_trip() {
        let sq = square_bit::<Rational>();
        let cert = crate::simulation::is_simulable(&sq.e, &[sq.f.clone(), sq.e.clone()], &Tolerance::default()).unwrap();
        let v = certificate_to_json(&cert);
        let back: SimulationCertificate<Rational> = certificate_from_json(&v).unwrap();
        assert_eq!(back, cert);
    }

    #[test]
    fn csv_header_and_rows() {
        let rows = vec![CountRow {
            n: 4,
            dichotomic: 2,
            trichotomic: 0,
            total: 2,
            formula: 2,
            matches: true,
        }];
        assert_eq!(counts_to_csv(&rows), "n,dichotomic,trichotomic,total,formula,match\n4,2,0,2,2,true\n");
    }
}
