//! Classical channels between outcome sets and the postprocessing preorder.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gpt::{EffectSpace, Observable};
use crate::numerics::lp::{LinearProgram, LpOutcome};
use crate::numerics::scalar::{add_vec, axpy, dot, is_zero_vec, zeros, Scalar};
use crate::numerics::{rank, Tolerance};

/// Row-stochastic matrix `ν[x][y]` from `source` labels to `target` labels.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Postprocessing<T> {
    source: Vec<String>,
    target: Vec<String>,
    matrix: Vec<Vec<T>>,
}

impl<T: Scalar> Postprocessing<T> {
    pub fn new(
        source: Vec<String>,
        target: Vec<String>,
        matrix: Vec<Vec<T>>,
        tol: &Tolerance,
    ) -> Result<Self> {
        let p = Postprocessing {
            source,
            target,
            matrix,
        };
        p.check(tol)?;
        Ok(p)
    }

    /// Builds without the stochasticity check; used for channels assembled
    /// from LP solutions that are validated by a later replay.
    pub(crate) fn from_parts(source: Vec<String>, target: Vec<String>, matrix: Vec<Vec<T>>) -> Self {
        Postprocessing {
            source,
            target,
            matrix,
        }
    }

    pub fn check(&self, tol: &Tolerance) -> Result<()> {
        if self.matrix.len() != self.source.len() {
            return Err(Error::DimensionMismatch {
                expected: self.source.len(),
                found: self.matrix.len(),
            });
        }
        let eps = if T::EXACT { 0.0 } else { tol.eps_feas };
        for (x, row) in self.matrix.iter().enumerate() {
            if row.len() != self.target.len() {
                return Err(Error::DimensionMismatch {
                    expected: self.target.len(),
                    found: row.len(),
                });
            }
            if row.iter().any(|v| v.is_neg(eps) || (v.clone() - T::one()).is_pos(eps)) {
                return Err(Error::InvalidInput(format!(
                    "channel row {} has an entry outside [0, 1]",
                    self.source[x]
                )));
            }
            let s = row.iter().fold(T::zero(), |a, v| a + v.clone());
            if !(s - T::one()).is_zero_eps(eps) {
                return Err(Error::InvalidInput(format!(
                    "channel row {} does not sum to one",
                    self.source[x]
                )));
            }
        }
        Ok(())
    }

    pub fn identity(labels: &[String]) -> Self {
        let n = labels.len();
        let matrix = (0..n)
            .map(|x| (0..n).map(|y| if x == y { T::one() } else { T::zero() }).collect())
            .collect();
        Self::from_parts(labels.to_vec(), labels.to_vec(), matrix)
    }

    /// Deterministic channel sending source `x` to target `map[x]`.
    pub fn deterministic(source: &[String], target: &[String], map: &[usize]) -> Result<Self> {
        if map.len() != source.len() {
            return Err(Error::DimensionMismatch {
                expected: source.len(),
                found: map.len(),
            });
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= target.len()) {
            return Err(Error::InvalidInput(format!("target index {bad} out of range")));
        }
        let matrix = map
            .iter()
            .map(|&y| {
                (0..target.len())
                    .map(|k| if k == y { T::one() } else { T::zero() })
                    .collect()
            })
            .collect();
        Ok(Self::from_parts(source.to_vec(), target.to_vec(), matrix))
    }

    /// Every row equal to `dist`.
    pub fn constant(source: &[String], target: &[String], dist: &[T]) -> Self {
        Self::from_parts(
            source.to_vec(),
            target.to_vec(),
            vec![dist.to_vec(); source.len()],
        )
    }

    pub fn uniform(source: &[String], target: &[String]) -> Self {
        let w = T::one() / T::from_i64(target.len() as i64);
        Self::constant(source, target, &vec![w; target.len()])
    }

    pub fn source(&self) -> &[String] {
        &self.source
    }

    pub fn target(&self) -> &[String] {
        &self.target
    }

    pub fn matrix(&self) -> &[Vec<T>] {
        &self.matrix
    }

    pub fn entry(&self, x: usize, y: usize) -> &T {
        &self.matrix[x][y]
    }

    /// `ν ∘ A`: outcome `y` gets `Σ_x ν[x][y] A_x`.
    pub fn apply(&self, a: &Observable<T>) -> Result<Observable<T>> {
        if a.labels() != self.source.iter().map(String::as_str).collect::<Vec<_>>() {
            return Err(Error::LabelMismatch(format!(
                "channel source {:?} vs observable outcomes {:?}",
                self.source,
                a.labels()
            )));
        }
        let d = a.dim();
        let outcomes = self
            .target
            .iter()
            .enumerate()
            .map(|(y, label)| {
                let mut acc = zeros(d);
                for (x, row) in self.matrix.iter().enumerate() {
                    axpy(&mut acc, &row[y], a.effect(x));
                }
                (label.clone(), acc)
            })
            .collect();
        Observable::new(outcomes)
    }

    /// First `self`, then `then`: `(then ∘ self)[x][z] = Σ_y self[x][y] then[y][z]`.
    pub fn compose(&self, then: &Postprocessing<T>) -> Result<Self> {
        if self.target != then.source {
            return Err(Error::LabelMismatch(
                "composition requires matching intermediate labels".into(),
            ));
        }
        let nz = then.target.len();
        let matrix = self
            .matrix
            .iter()
            .map(|row| {
                let mut out = zeros(nz);
                for (y, w) in row.iter().enumerate() {
                    axpy(&mut out, w, &then.matrix[y]);
                }
                out
            })
            .collect();
        Ok(Self::from_parts(
            self.source.clone(),
            then.target.clone(),
            matrix,
        ))
    }

    pub fn convert<S: Scalar>(&self) -> Result<Postprocessing<S>> {
        Ok(Postprocessing {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: self
                .matrix
                .iter()
                .map(|r| crate::numerics::scalar::convert_vec(r))
                .collect::<Result<_>>()?,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RelationCertificate<T> {
    Related(Postprocessing<T>),
    /// Farkas vector of [`relation_program`].
    Unrelated(Vec<T>),
}

impl<T: Scalar> RelationCertificate<T> {
    pub fn is_related(&self) -> bool {
        matches!(self, RelationCertificate::Related(_))
    }

    /// Re-checks the verdict for "`b` is a postprocessing of `a`".
    pub fn replays(&self, b: &Observable<T>, a: &Observable<T>, tol: &Tolerance) -> bool {
        let eps = if T::EXACT { 0.0 } else { tol.eps_feas };
        match self {
            RelationCertificate::Related(nu) => {
                nu.check(tol).is_ok()
                    && nu.target().iter().map(String::as_str).eq(b.labels())
                    && nu.apply(a).map(|c| c.approx_eq(b, eps)).unwrap_or(false)
            }
            RelationCertificate::Unrelated(y) => match relation_program(b, a) {
                Ok(lp) => lp.refutes(y, eps),
                Err(_) => false,
            },
        }
    }
}

/// Variables `ν[x][y]` at index `x * |Y| + y`; stochastic rows, then one
/// row per target outcome and coordinate.
pub fn relation_program<T: Scalar>(b: &Observable<T>, a: &Observable<T>) -> Result<LinearProgram<T>> {
    if a.dim() != b.dim() {
        return Err(Error::MixedSpaces(format!(
            "effect dimensions {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    let (nx, ny, d) = (a.len(), b.len(), a.dim());
    let mut lp = LinearProgram::new(nx * ny);
    for x in 0..nx {
        let terms: Vec<_> = (0..ny).map(|y| (x * ny + y, T::one())).collect();
        lp.add_sparse_row(&terms, T::one());
    }
    for y in 0..ny {
        for k in 0..d {
            let terms: Vec<_> = (0..nx)
                .filter(|&x| !a.effect(x)[k].is_zero_eps(0.0))
                .map(|x| (x * ny + y, a.effect(x)[k].clone()))
                .collect();
            lp.add_sparse_row(&terms, b.effect(y)[k].clone());
        }
    }
    Ok(lp)
}

/// Decides whether `b = ν ∘ a` for some channel `ν`.
pub fn is_postprocessing_of<T: Scalar>(
    b: &Observable<T>,
    a: &Observable<T>,
    tol: &Tolerance,
) -> Result<RelationCertificate<T>> {
    let lp = relation_program(b, a)?;
    let ny = b.len();
    match lp.solve(tol)? {
        LpOutcome::Feasible { solution, .. } => {
            let matrix = solution.chunks(ny).map(<[T]>::to_vec).collect();
            let source = a.labels().iter().map(|s| s.to_string()).collect();
            let target = b.labels().iter().map(|s| s.to_string()).collect();
            Ok(RelationCertificate::Related(Postprocessing::from_parts(
                source, target, matrix,
            )))
        }
        LpOutcome::Infeasible { farkas } => Ok(RelationCertificate::Unrelated(farkas)),
        LpOutcome::Unbounded { .. } => unreachable!("feasibility problem has no objective"),
    }
}

pub fn are_equivalent<T: Scalar>(a: &Observable<T>, b: &Observable<T>, tol: &Tolerance) -> Result<bool> {
    Ok(is_postprocessing_of(b, a, tol)?.is_related() && is_postprocessing_of(a, b, tol)?.is_related())
}

/// Minimally sufficient representative together with the channels that
/// witness equivalence with the original observable.
#[derive(Clone, Debug, PartialEq)]
pub struct MinimalForm<T> {
    pub observable: Observable<T>,
    /// Original → representative (deterministic merge).
    pub forward: Postprocessing<T>,
    /// Representative → original (splits each merged outcome by ratio).
    pub backward: Postprocessing<T>,
}

/// Drops zero effects and merges proportional ones. Outcomes are visited in
/// lexicographic label order and each group keeps its smallest label; the
/// result lists groups in that order.
pub fn minimally_sufficient<T: Scalar>(a: &Observable<T>, tol: &Tolerance) -> Result<MinimalForm<T>> {
    let eps = if T::EXACT { 0.0 } else { tol.eps_feas };
    let mut order: Vec<usize> = (0..a.len()).collect();
    order.sort_by(|&i, &j| a.label(i).cmp(a.label(j)));

    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for &x in &order {
        let e = a.effect(x);
        if is_zero_vec(e, eps) {
            continue;
        }
        let home = groups.iter_mut().find(|(rep, _)| {
            rank(&[a.effect(*rep).to_vec(), e.to_vec()], tol.eps_rank) == 1
        });
        match home {
            Some((_, members)) => members.push(x),
            None => groups.push((x, vec![x])),
        }
    }
    if groups.is_empty() {
        return Err(Error::InvalidInput("observable has only zero effects".into()));
    }

    let sums: Vec<Vec<T>> = groups
        .iter()
        .map(|(_, m)| m.iter().fold(zeros(a.dim()), |acc, &x| add_vec(&acc, a.effect(x))))
        .collect();
    let rep_labels: Vec<String> = groups.iter().map(|(r, _)| a.label(*r).to_string()).collect();
    let observable = Observable::new(rep_labels.iter().cloned().zip(sums.iter().cloned()).collect())?;

    let src: Vec<String> = a.labels().iter().map(|s| s.to_string()).collect();
    let mut map = vec![0usize; a.len()];
    let mut back = vec![vec![T::zero(); a.len()]; groups.len()];
    for (g, (_, members)) in groups.iter().enumerate() {
        let s = &sums[g];
        let ss = dot(s, s);
        let mut ratios: Vec<T> = members
            .iter()
            .map(|&x| dot(a.effect(x), s) / ss.clone())
            .collect();
        if !T::EXACT {
            let tot = ratios.iter().fold(T::zero(), |acc, r| acc + r.clone());
            ratios = ratios.into_iter().map(|r| r / tot.clone()).collect();
        }
        for (&x, r) in members.iter().zip(ratios) {
            map[x] = g;
            back[g][x] = r;
        }
    }
    let forward = Postprocessing::deterministic(&src, &rep_labels, &map)?;
    let backward = Postprocessing::from_parts(rep_labels, src, back);
    Ok(MinimalForm {
        observable,
        forward,
        backward,
    })
}

/// All nonzero effects are indecomposable.
pub fn is_postprocessing_clean<T: Scalar>(
    a: &Observable<T>,
    space: &dyn EffectSpace<T>,
    tol: &Tolerance,
) -> Result<bool> {
    let eps = if T::EXACT { 0.0 } else { tol.eps_feas };
    for e in a.effects() {
        if is_zero_vec(&e, eps) {
            continue;
        }
        if !space.is_indecomposable(&e, tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn labels(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn square_e() -> Observable<Rational> {
        Observable::new(vec![
            ("+".into(), vec![q(1, 1), q(0, 1), q(0, 1)]),
            ("-".into(), vec![q(-1, 1), q(0, 1), q(1, 1)]),
        ])
        .unwrap()
    }

    #[test]
    fn stochasticity_enforced() {
        let tol = Tolerance::default();
        let bad = Postprocessing::new(labels(&["a"]), labels(&["x", "y"]), vec![vec![q(1, 2), q(1, 3)]], &tol);
        assert!(bad.is_err());
        let neg = Postprocessing::new(labels(&["a"]), labels(&["x", "y"]), vec![vec![q(3, 2), q(-1, 2)]], &tol);
        assert!(neg.is_err());
    }

    #[test]
    fn identity_application() {
        let a = square_e();
        let id = Postprocessing::identity(&labels(&["+", "-"]));
        assert_eq!(id.apply(&a).unwrap(), a);
    }

    #[test]
    fn label_mismatch_rejected() {
        let a = square_e();
        let id = Postprocessing::<Rational>::identity(&labels(&["a", "b"]));
        assert!(matches!(id.apply(&a), Err(Error::LabelMismatch(_))));
    }

    #[test]
    fn composition_matches_sequential_application() {
        let a = square_e();
        let tol = Tolerance::default();
        let nu = Postprocessing::new(
            labels(&["+", "-"]),
            labels(&["p", "q", "r"]),
            vec![vec![q(1, 2), q(1, 4), q(1, 4)], vec![q(0, 1), q(1, 3), q(2, 3)]],
            &tol,
        )
        .unwrap();
        let mu = Postprocessing::new(
            labels(&["p", "q", "r"]),
            labels(&["z", "w"]),
            vec![vec![q(1, 1), q(0, 1)], vec![q(1, 5), q(4, 5)], vec![q(0, 1), q(1, 1)]],
            &tol,
        )
        .unwrap();
        let two_step = mu.apply(&nu.apply(&a).unwrap()).unwrap();
        let one_step = nu.compose(&mu).unwrap().apply(&a).unwrap();
        assert_eq!(two_step, one_step);
    }

    #[test]
    fn trivial_is_postprocessing_of_anything() {
        let a = square_e();
        let tol = Tolerance::default();
        let t = Observable::trivial(&[q(0, 1), q(0, 1), q(1, 1)], &[q(1, 3), q(2, 3)]).unwrap();
        let cert = is_postprocessing_of(&t, &a, &tol).unwrap();
        assert!(cert.is_related());
        assert!(cert.replays(&t, &a, &tol));
    }

    #[test]
    fn e_and_f_unrelated_with_certificate() {
        let tol = Tolerance::default();
        let e = square_e();
        let f = Observable::new(vec![
            ("+".into(), vec![q(0, 1), q(1, 1), q(0, 1)]),
            ("-".into(), vec![q(0, 1), q(-1, 1), q(1, 1)]),
        ])
        .unwrap();
        let cert = is_postprocessing_of(&f, &e, &tol).unwrap();
        assert!(!cert.is_related());
        assert!(cert.replays(&f, &e, &tol));
        assert!(!are_equivalent(&e, &f, &tol).unwrap());
    }

    #[test]
    fn merge_of_split_effect() {
        let tol = Tolerance::default();
        let a = Observable::new(vec![
            ("a".into(), vec![q(1, 2), q(0, 1), q(0, 1)]),
            ("b".into(), vec![q(1, 2), q(0, 1), q(0, 1)]),
            ("c".into(), vec![q(-1, 1), q(0, 1), q(1, 1)]),
            ("d".into(), vec![q(0, 1), q(0, 1), q(0, 1)]),
        ])
        .unwrap();
        let m = minimally_sufficient(&a, &tol).unwrap();
        assert_eq!(m.observable.labels(), vec!["a", "c"]);
        assert_eq!(m.observable.effect(0), &[q(1, 1), q(0, 1), q(0, 1)]);
        assert_eq!(m.forward.apply(&a).unwrap(), m.observable);
        assert_eq!(m.backward.apply(&m.observable).unwrap(), a);
        assert!(are_equivalent(&a, &m.observable, &tol).unwrap());
    }

    #[test]
    fn trivial_collapses_to_unit() {
        let tol = Tolerance::default();
        let t = Observable::trivial(&[0.0, 1.0], &[0.5, 0.5]).unwrap();
        let m = minimally_sufficient(&t, &tol).unwrap();
        assert_eq!(m.observable.len(), 1);
        assert_eq!(m.observable.effect(0), &[0.0, 1.0]);
    }
}
