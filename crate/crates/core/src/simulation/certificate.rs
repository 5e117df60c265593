use crate::error::{Error, Result};
use crate::gpt::Observable;
use crate::numerics::lp::{LinearProgram, LpOutcome};
use crate::numerics::scalar::{axpy, vec_eq, zeros, Scalar};
use crate::numerics::Tolerance;
use crate::postprocessing::Postprocessing;

#[derive(Clone, Debug, PartialEq)]
pub enum SimulationCertificate<T> {
    /// `A = Σ_i weights[i] · (channels[i] ∘ B⁽ⁱ⁾)`.
    Simulable {
        weights: Vec<T>,
        channels: Vec<Postprocessing<T>>,
    },
    /// Farkas vector of [`simulation_program`].
    NotSimulable { farkas: Vec<T> },
}

impl<T: Scalar> SimulationCertificate<T> {
    pub fn is_simulable(&self) -> bool {
        matches!(self, SimulationCertificate::Simulable { .. })
    }

    pub fn verdict(&self) -> &'static str {
        if self.is_simulable() {
            "simulable"
        } else {
            "not_simulable"
        }
    }

    /// Re-checks the verdict against the original query.
    pub fn replay(
        &self,
        target: &Observable<T>,
        simulators: &[Observable<T>],
        tol: &Tolerance,
    ) -> Result<()> {
        let eps = if T::EXACT { 0.0 } else { tol.eps_feas };
        match self {
            SimulationCertificate::Simulable { weights, channels } => {
                if weights.len() != simulators.len() || channels.len() != simulators.len() {
                    return Err(Error::CertificateRejected(
                        "one weight and one channel per simulator expected".into(),
                    ));
                }
                if weights.iter().any(|w| w.is_neg(eps)) {
                    return Err(Error::CertificateRejected("negative weight".into()));
                }
                let total = weights.iter().fold(T::zero(), |a, w| a + w.clone());
                if !(total - T::one()).is_zero_eps(eps) {
                    return Err(Error::CertificateRejected("weights do not sum to one".into()));
                }
                let mut acc = vec![zeros(target.dim()); target.len()];
                for ((w, nu), b) in weights.iter().zip(channels).zip(simulators) {
                    nu.check(tol)
                        .map_err(|e| Error::CertificateRejected(e.to_string()))?;
                    if !nu.target().iter().map(String::as_str).eq(target.labels()) {
                        return Err(Error::CertificateRejected(
                            "channel target labels differ from the simulated outcomes".into(),
                        ));
                    }
                    let part = nu
                        .apply(b)
                        .map_err(|e| Error::CertificateRejected(e.to_string()))?;
                    for (y, slot) in acc.iter_mut().enumerate() {
                        axpy(slot, w, part.effect(y));
                    }
                }
                for (y, e) in acc.iter().enumerate() {
                    if !vec_eq(e, target.effect(y), eps) {
                        return Err(Error::CertificateRejected(format!(
                            "outcome {} is not reproduced",
                            target.label(y)
                        )));
                    }
                }
                Ok(())
            }
            SimulationCertificate::NotSimulable { farkas } => {
                let lp = simulation_program(target, simulators, tol)?;
                if lp.refutes(farkas, eps) {
                    Ok(())
                } else {
                    Err(Error::CertificateRejected(
                        "Farkas vector does not refute the simulation program".into(),
                    ))
                }
            }
        }
    }
}

/// Column layout of the simulation program.
pub(crate) struct Layout {
    pub offsets: Vec<usize>,
    pub weight_base: usize,
    pub ny: usize,
    pub num_vars: usize,
}

impl Layout {
    pub fn new<T: Scalar>(target: &Observable<T>, simulators: &[Observable<T>]) -> Self {
        let ny = target.len();
        let mut offsets = Vec::with_capacity(simulators.len());
        let mut n = 0;
        for b in simulators {
            offsets.push(n);
            n += b.len() * ny;
        }
        Layout {
            offsets,
            weight_base: n,
            ny,
            num_vars: n + simulators.len(),
        }
    }

    pub fn m(&self, i: usize, x: usize, y: usize) -> usize {
        self.offsets[i] + x * self.ny + y
    }
}

pub(crate) fn check_common_space<T: Scalar>(
    target: &Observable<T>,
    simulators: &[Observable<T>],
    tol: &Tolerance,
) -> Result<()> {
    if simulators.is_empty() {
        return Err(Error::InvalidInput("no simulators given".into()));
    }
    let eps = if T::EXACT { 0.0 } else { tol.eps_feas };
    let unit = target.total();
    for (i, b) in simulators.iter().enumerate() {
        if b.dim() != target.dim() {
            return Err(Error::MixedSpaces(format!(
                "simulator {i} has dimension {}, target has {}",
                b.dim(),
                target.dim()
            )));
        }
        if !vec_eq(&b.total(), &unit, eps) {
            return Err(Error::MixedSpaces(format!(
                "simulator {i} is normalized to a different unit effect"
            )));
        }
    }
    Ok(())
}

/// Variables `M⁽ⁱ⁾[x][y] >= 0` followed by the weights `c_i >= 0`. Rows:
/// `Σ_y M⁽ⁱ⁾[x][y] - c_i = 0` for every `(i, x)`, then `Σ_i c_i = 1`, then
/// `Σ_{i,x} M⁽ⁱ⁾[x][y] B⁽ⁱ⁾_x = A_y` for every `(y, coordinate)`.
pub fn simulation_program<T: Scalar>(
    target: &Observable<T>,
    simulators: &[Observable<T>],
    tol: &Tolerance,
) -> Result<LinearProgram<T>> {
    check_common_space(target, simulators, tol)?;
    let lay = Layout::new(target, simulators);
    let mut lp = LinearProgram::new(lay.num_vars);
    for (i, b) in simulators.iter().enumerate() {
        for x in 0..b.len() {
            let mut terms: Vec<_> = (0..lay.ny).map(|y| (lay.m(i, x, y), T::one())).collect();
            terms.push((lay.weight_base + i, -T::one()));
            lp.add_sparse_row(&terms, T::zero());
        }
    }
    let terms: Vec<_> = (0..simulators.len())
        .map(|i| (lay.weight_base + i, T::one()))
        .collect();
    lp.add_sparse_row(&terms, T::one());
    for y in 0..lay.ny {
        for k in 0..target.dim() {
            let mut terms = Vec::new();
            for (i, b) in simulators.iter().enumerate() {
                for x in 0..b.len() {
                    let v = &b.effect(x)[k];
                    if !v.is_zero_eps(0.0) {
                        terms.push((lay.m(i, x, y), v.clone()));
                    }
                }
            }
            lp.add_sparse_row(&terms, target.effect(y)[k].clone());
        }
    }
    Ok(lp)
}

/// Decides `A ∈ sim(simulators)` and returns a replayed certificate.
pub fn is_simulable<T: Scalar>(
    target: &Observable<T>,
    simulators: &[Observable<T>],
    tol: &Tolerance,
) -> Result<SimulationCertificate<T>> {
    let lp = simulation_program(target, simulators, tol)?;
    let cert = match lp.solve(tol)? {
        LpOutcome::Feasible { solution, .. } => recover(target, simulators, &solution),
        LpOutcome::Infeasible { farkas } => SimulationCertificate::NotSimulable { farkas },
        LpOutcome::Unbounded { .. } => unreachable!("feasibility problem has no objective"),
    };
    cert.replay(target, simulators, tol)?;
    Ok(cert)
}

fn recover<T: Scalar>(
    target: &Observable<T>,
    simulators: &[Observable<T>],
    sol: &[T],
) -> SimulationCertificate<T> {
    let lay = Layout::new(target, simulators);
    let clamp = |v: &T| if v.is_neg(0.0) { T::zero() } else { v.clone() };
    let mut weights: Vec<T> = (0..simulators.len())
        .map(|i| clamp(&sol[lay.weight_base + i]))
        .collect();
    if !T::EXACT {
        let tot = weights.iter().fold(T::zero(), |a, w| a + w.clone());
        weights = weights.into_iter().map(|w| w / tot.clone()).collect();
    }
    let ylabels: Vec<String> = target.labels().iter().map(|s| s.to_string()).collect();
    let channels = simulators
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let xlabels: Vec<String> = b.labels().iter().map(|s| s.to_string()).collect();
            let c = clamp(&sol[lay.weight_base + i]);
            if c.is_zero_eps(0.0) {
                return Postprocessing::uniform(&xlabels, &ylabels);
            }
            let matrix = (0..b.len())
                .map(|x| {
                    let row: Vec<T> = (0..lay.ny).map(|y| clamp(&sol[lay.m(i, x, y)]) / c.clone()).collect();
                    if T::EXACT {
                        return row;
                    }
                    let s = row.iter().fold(T::zero(), |a, v| a + v.clone());
                    if s.is_zero_eps(0.0) {
                        vec![T::one() / T::from_i64(lay.ny as i64); lay.ny]
                    } else {
                        row.into_iter().map(|v| v / s.clone()).collect()
                    }
                })
                .collect();
            Postprocessing::from_parts(xlabels, ylabels.clone(), matrix)
        })
        .collect();
    SimulationCertificate::Simulable { weights, channels }
}

/// Reduced simulator list and, for each original simulator, its index in
/// the reduced list.
#[derive(Clone, Debug, PartialEq)]
pub struct Deduplicated<T> {
    pub simulators: Vec<Observable<T>>,
    pub index: Vec<usize>,
}

/// Removes repeated simulators (same labels and effects), keeping the
/// first occurrence.
pub fn deduplicate_simulators<T: Scalar>(simulators: &[Observable<T>], tol: &Tolerance) -> Deduplicated<T> {
    let eps = if T::EXACT { 0.0 } else { tol.eps_feas };
    let mut kept: Vec<Observable<T>> = Vec::new();
    let mut index = Vec::with_capacity(simulators.len());
    for b in simulators {
        match kept.iter().position(|k| k.approx_eq(b, eps)) {
            Some(j) => index.push(j),
            None => {
                index.push(kept.len());
                kept.push(b.clone());
            }
        }
    }
    Deduplicated {
        simulators: kept,
        index,
    }
}

impl<T: Scalar> Deduplicated<T> {
    /// Row ranges of each simulator's stochastic constraints.
    fn row_blocks(sizes: &[usize]) -> Vec<std::ops::Range<usize>> {
        let mut out = Vec::new();
        let mut r = 0;
        for &s in sizes {
            out.push(r..r + s);
            r += s;
        }
        out
    }

    /// Certificate over the reduced set → certificate over the original set.
    pub fn lift(&self, cert: &SimulationCertificate<T>, original: &[Observable<T>]) -> SimulationCertificate<T> {
        match cert {
            SimulationCertificate::Simulable { weights, channels } => {
                let mut seen = vec![false; self.simulators.len()];
                let mut w = Vec::new();
                let mut ch = Vec::new();
                for &j in &self.index {
                    if seen[j] {
                        w.push(T::zero());
                    } else {
                        seen[j] = true;
                        w.push(weights[j].clone());
                    }
                    ch.push(channels[j].clone());
                }
                SimulationCertificate::Simulable {
                    weights: w,
                    channels: ch,
                }
            }
            SimulationCertificate::NotSimulable { farkas } => {
                let red_sizes: Vec<usize> = self.simulators.iter().map(Observable::len).collect();
                let red = Self::row_blocks(&red_sizes);
                let tail = red.last().map_or(0, |r| r.end);
                let mut y = Vec::new();
                for &j in &self.index {
                    y.extend_from_slice(&farkas[red[j].clone()]);
                }
                debug_assert_eq!(
                    y.len(),
                    original.iter().map(Observable::len).sum::<usize>()
                );
                y.extend_from_slice(&farkas[tail..]);
                SimulationCertificate::NotSimulable { farkas: y }
            }
        }
    }

    /// Certificate over the original set → certificate over the reduced set.
    pub fn reduce(&self, cert: &SimulationCertificate<T>, original: &[Observable<T>]) -> SimulationCertificate<T> {
        match cert {
            SimulationCertificate::Simulable { weights, channels } => {
                let k = self.simulators.len();
                let mut w = vec![T::zero(); k];
                let mut mats: Vec<Option<Vec<Vec<T>>>> = vec![None; k];
                for (i, &j) in self.index.iter().enumerate() {
                    w[j] = w[j].clone() + weights[i].clone();
                    let scaled: Vec<Vec<T>> = channels[i]
                        .matrix()
                        .iter()
                        .map(|r| r.iter().map(|v| v.clone() * weights[i].clone()).collect())
                        .collect();
                    mats[j] = Some(match mats[j].take() {
                        None => scaled,
                        Some(m) => m
                            .iter()
                            .zip(&scaled)
                            .map(|(a, b)| a.iter().zip(b).map(|(p, q)| p.clone() + q.clone()).collect())
                            .collect(),
                    });
                }
                let ch = (0..k)
                    .map(|j| {
                        let first = self.index.iter().position(|&t| t == j).unwrap();
                        if w[j].is_zero_eps(0.0) {
                            return channels[first].clone();
                        }
                        let m = mats[j]
                            .take()
                            .unwrap()
                            .into_iter()
                            .map(|r| r.into_iter().map(|v| v / w[j].clone()).collect())
                            .collect();
                        Postprocessing::from_parts(
                            channels[first].source().to_vec(),
                            channels[first].target().to_vec(),
                            m,
                        )
                    })
                    .collect();
                SimulationCertificate::Simulable {
                    weights: w,
                    channels: ch,
                }
            }
            SimulationCertificate::NotSimulable { farkas } => {
                let sizes: Vec<usize> = original.iter().map(Observable::len).collect();
                let blocks = Self::row_blocks(&sizes);
                let tail = blocks.last().map_or(0, |r| r.end);
                let mut y = Vec::new();
                for j in 0..self.simulators.len() {
                    let first = self.index.iter().position(|&t| t == j).unwrap();
                    y.extend_from_slice(&farkas[blocks[first].clone()]);
                }
                y.extend_from_slice(&farkas[tail..]);
                SimulationCertificate::NotSimulable { farkas: y }
            }
        }
    }
}

/// Certificate for `A` turned into one for `ν ∘ A`.
pub fn postprocess_certificate<T: Scalar>(
    cert: &SimulationCertificate<T>,
    nu: &Postprocessing<T>,
) -> Result<SimulationCertificate<T>> {
    match cert {
        SimulationCertificate::Simulable { weights, channels } => Ok(SimulationCertificate::Simulable {
            weights: weights.clone(),
            channels: channels
                .iter()
                .map(|c| c.compose(nu))
                .collect::<Result<_>>()?,
        }),
        SimulationCertificate::NotSimulable { .. } => Err(Error::NotSimulable),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn e() -> Observable<Rational> {
        Observable::new(vec![
            ("+".into(), vec![q(1, 1), q(0, 1), q(0, 1)]),
            ("-".into(), vec![q(-1, 1), q(0, 1), q(1, 1)]),
        ])
        .unwrap()
    }

    fn f() -> Observable<Rational> {
        Observable::new(vec![
            ("+".into(), vec![q(0, 1), q(1, 1), q(0, 1)]),
            ("-".into(), vec![q(0, 1), q(-1, 1), q(1, 1)]),
        ])
        .unwrap()
    }

    #[test]
    fn self_simulation() {
        let tol = Tolerance::default();
        let c = is_simulable(&e(), &[e()], &tol).unwrap();
        assert!(c.is_simulable());
    }

    #[test]
    fn f_not_from_e() {
        let tol = Tolerance::default();
        let c = is_simulable(&f(), &[e()], &tol).unwrap();
        assert!(!c.is_simulable());
        c.replay(&f(), &[e()], &tol).unwrap();
    }

    #[test]
    fn mixture_of_e_and_f() {
        let tol = Tolerance::default();
        let a = e().mix(&q(1, 3), &f()).unwrap();
        let c = is_simulable(&a, &[e(), f()], &tol).unwrap();
        assert!(c.is_simulable());
        assert!(!is_simulable(&a, &[e()], &tol).unwrap().is_simulable());
    }

    #[test]
    fn mixed_spaces_rejected() {
        let tol = Tolerance::default();
        let g = Observable::new(vec![("1".into(), vec![q(0, 1), q(1, 1)])]).unwrap();
        assert!(matches!(is_simulable(&e(), &[g], &tol), Err(Error::MixedSpaces(_))));
    }

    #[test]
    fn dedup_lifts_both_ways() {
        let tol = Tolerance::default();
        let orig = vec![e(), e(), f()];
        let d = deduplicate_simulators(&orig, &tol);
        assert_eq!(d.simulators.len(), 2);
        assert_eq!(d.index, vec![0, 0, 1]);
        let a = e().mix(&q(1, 4), &f()).unwrap();
        let red = is_simulable(&a, &d.simulators, &tol).unwrap();
        d.lift(&red, &orig).replay(&a, &orig, &tol).unwrap();
        let full = is_simulable(&a, &orig, &tol).unwrap();
        d.reduce(&full, &orig).replay(&a, &d.simulators, &tol).unwrap();

        let no = is_simulable(&f(), &[e(), e()], &tol).unwrap();
        let d2 = deduplicate_simulators(&[e(), e()], &tol);
        let r = d2.reduce(&no, &[e(), e()]);
        r.replay(&f(), &d2.simulators, &tol).unwrap();
        d2.lift(&r, &[e(), e()]).replay(&f(), &[e(), e()], &tol).unwrap();
    }
}
