//! Dense two-phase simplex. Entering columns follow the steepest reduced
//! cost; after a degenerate pivot Bland's rule takes over until the
//! objective moves again, which rules out cycling.
//!
//! Problems are stated as `A x = b` with a per-variable nonnegativity flag
//! and an optional objective to maximize. Infeasible problems come back
//! with a Farkas vector `y` such that `yᵀA_j ≤ 0` for nonnegative
//! variables, `yᵀA_j = 0` for free variables and `yᵀb > 0`.

use std::cmp::Ordering;

use serde::Serialize;

use super::scalar::{dot, max_abs, Scalar, Tolerance};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram<T> {
    num_vars: usize,
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    nonneg: Vec<bool>,
    objective: Option<Vec<T>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum LpOutcome<T> {
    Feasible { solution: Vec<T>, value: Option<T> },
    Infeasible { farkas: Vec<T> },
    Unbounded { solution: Vec<T>, ray: Vec<T> },
}

impl<T> LpOutcome<T> {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible { .. })
    }
}

impl<T: Scalar> LinearProgram<T> {
    /// Problem with `num_vars` nonnegative variables and no constraints.
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            rows: Vec::new(),
            rhs: Vec::new(),
            nonneg: vec![true; num_vars],
            objective: None,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn rhs(&self) -> &[T] {
        &self.rhs
    }

    pub fn is_nonneg(&self, var: usize) -> bool {
        self.nonneg[var]
    }

    /// Appends `coeffs · x = rhs`. The width is checked in [`solve`].
    ///
    /// [`solve`]: LinearProgram::solve
    pub fn add_row(&mut self, coeffs: Vec<T>, rhs: T) -> usize {
        self.rows.push(coeffs);
        self.rhs.push(rhs);
        self.rows.len() - 1
    }

    /// Appends a row given as `(variable, coefficient)` pairs; repeated
    /// variables accumulate.
    pub fn add_sparse_row(&mut self, terms: &[(usize, T)], rhs: T) -> usize {
        let mut row = vec![T::zero(); self.num_vars];
        for (j, c) in terms {
            row[*j] = row[*j].clone() + c.clone();
        }
        self.add_row(row, rhs)
    }

    pub fn set_free(&mut self, var: usize) {
        self.nonneg[var] = false;
    }

    pub fn maximize(&mut self, objective: Vec<T>) {
        self.objective = Some(objective);
    }

    fn check_shape(&self) -> Result<()> {
        if self.nonneg.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: self.nonneg.len(),
            });
        }
        for row in &self.rows {
            if row.len() != self.num_vars {
                return Err(Error::DimensionMismatch {
                    expected: self.num_vars,
                    found: row.len(),
                });
            }
        }
        if let Some(c) = &self.objective {
            if c.len() != self.num_vars {
                return Err(Error::DimensionMismatch {
                    expected: self.num_vars,
                    found: c.len(),
                });
            }
        }
        Ok(())
    }

    /// True when `x` satisfies every constraint within `eps`.
    pub fn satisfies(&self, x: &[T], eps: f64) -> bool {
        if x.len() != self.num_vars {
            return false;
        }
        let bounds = x
            .iter()
            .zip(&self.nonneg)
            .all(|(v, &nn)| !nn || !v.is_neg(eps));
        bounds
            && self
                .rows
                .iter()
                .zip(&self.rhs)
                .all(|(row, b)| dot(row, x).cmp_eps(b, eps) == Ordering::Equal)
    }

    /// True when `y` is a valid Farkas refutation of feasibility.
    pub fn refutes(&self, y: &[T], eps: f64) -> bool {
        if y.len() != self.rows.len() {
            return false;
        }
        let scale = max_abs(y).to_f64().max(1.0);
        let slack = eps * scale;
        for j in 0..self.num_vars {
            let mut s = T::zero();
            for (i, row) in self.rows.iter().enumerate() {
                s = s + y[i].clone() * row[j].clone();
            }
            let bad = if self.nonneg[j] {
                s.is_pos(slack)
            } else {
                !s.is_zero_eps(slack)
            };
            if bad {
                return false;
            }
        }
        dot(y, &self.rhs).is_pos(eps)
    }

    pub fn solve(&self, tol: &Tolerance) -> Result<LpOutcome<T>> {
        self.check_shape()?;
        Simplex::build(self, tol).run(self)
    }
}

/// Column layout of the standard form: each free variable is split into
/// a positive and a negative part.
struct Layout {
    /// For each original variable: (positive column, negative column).
    cols: Vec<(usize, Option<usize>)>,
    n_struct: usize,
}

struct Simplex<T> {
    tab: Vec<Vec<T>>,
    cost: Vec<T>,
    basis: Vec<usize>,
    row_sign: Vec<bool>,
    layout: Layout,
    n_cols: usize,
    eps: f64,
    iterations: usize,
    limit: Option<usize>,
    degenerate: bool,
}

impl<T: Scalar> Simplex<T> {
    fn build(p: &LinearProgram<T>, tol: &Tolerance) -> Self {
        let mut cols = Vec::with_capacity(p.num_vars);
        let mut next = 0;
        for &nn in &p.nonneg {
            if nn {
                cols.push((next, None));
                next += 1;
            } else {
                cols.push((next, Some(next + 1)));
                next += 2;
            }
        }
        let layout = Layout {
            cols,
            n_struct: next,
        };
        let m = p.rows.len();
        let n_cols = layout.n_struct + m;
        let mut tab = Vec::with_capacity(m);
        let mut row_sign = Vec::with_capacity(m);
        for (i, (row, b)) in p.rows.iter().zip(&p.rhs).enumerate() {
            let flip = b.is_neg(0.0);
            let s = |v: &T| if flip { -v.clone() } else { v.clone() };
            let mut t = vec![T::zero(); n_cols + 1];
            for (j, &(pc, nc)) in layout.cols.iter().enumerate() {
                t[pc] = s(&row[j]);
                if let Some(nc) = nc {
                    t[nc] = -s(&row[j]);
                }
            }
            t[layout.n_struct + i] = T::one();
            t[n_cols] = s(b);
            tab.push(t);
            row_sign.push(flip);
        }
        let limit = if T::EXACT {
            None
        } else {
            Some(10_000 * (p.num_vars + m).max(1))
        };
        Simplex {
            tab,
            cost: vec![T::zero(); n_cols + 1],
            basis: (layout.n_struct..n_cols).collect(),
            row_sign,
            layout,
            n_cols,
            eps: if T::EXACT { 0.0 } else { tol.eps_feas },
            iterations: 0,
            limit,
            degenerate: false,
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = T::one() / self.tab[r][c].clone();
        for x in self.tab[r].iter_mut() {
            if !x.is_zero_eps(0.0) {
                *x = x.clone() * inv.clone();
            }
        }
        self.tab[r][c] = T::one();
        let pivot_row = self.tab[r].clone();
        let nz: Vec<usize> = (0..=self.n_cols)
            .filter(|&j| !pivot_row[j].is_zero_eps(0.0))
            .collect();
        let eliminate = |row: &mut Vec<T>| {
            let f = row[c].clone();
            if f.is_zero_eps(0.0) {
                return;
            }
            for &j in &nz {
                row[j] = row[j].clone() - f.clone() * pivot_row[j].clone();
            }
            row[c] = T::zero();
        };
        for (i, row) in self.tab.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.cost);
        self.basis[r] = c;
    }

    /// Runs simplex iterations on the current cost row over columns
    /// `< allowed`. Returns `Some(column)` when that column is an unbounded
    /// direction.
    fn iterate(&mut self, allowed: usize) -> Result<Option<usize>> {
        loop {
            if let Some(limit) = self.limit {
                if self.iterations >= limit {
                    return Err(Error::IterationLimit {
                        iterations: self.iterations,
                    });
                }
            }
            let candidates = (0..allowed).filter(|&j| self.cost[j].is_neg(self.eps));
            let enter = if self.degenerate {
                candidates.into_iter().next()
            } else {
                candidates.min_by(|&a, &b| self.cost[a].cmp_eps(&self.cost[b], 0.0).then(a.cmp(&b)))
            };
            let Some(enter) = enter else {
                return Ok(None);
            };
            let rhs = self.n_cols;
            let mut leave: Option<(usize, T)> = None;
            for i in 0..self.tab.len() {
                let a = &self.tab[i][enter];
                if !a.is_pos(self.eps) {
                    continue;
                }
                let b = T::max_of(self.tab[i][rhs].clone(), T::zero());
                let ratio = b / a.clone();
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((bi, br)) => match ratio.cmp_eps(&br, self.eps) {
                        Ordering::Less => Some((i, ratio)),
                        Ordering::Equal if self.basis[i] < self.basis[bi] => Some((i, ratio)),
                        _ => Some((bi, br)),
                    },
                };
            }
            let Some((r, step)) = leave else {
                return Ok(Some(enter));
            };
            self.degenerate = step.is_zero_eps(self.eps);
            self.pivot(r, enter);
            self.iterations += 1;
        }
    }

    fn set_cost(&mut self, c: &[T]) {
        let rhs = self.n_cols;
        let mut row = vec![T::zero(); self.n_cols + 1];
        row[..c.len()].clone_from_slice(c);
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = row.get(b).cloned().unwrap_or_else(T::zero);
            if b >= c.len() || cb.is_zero_eps(0.0) {
                continue;
            }
            for j in 0..=rhs {
                row[j] = row[j].clone() - cb.clone() * self.tab[i][j].clone();
            }
        }
        self.cost = row;
    }

    fn structural_solution(&self) -> Vec<T> {
        let rhs = self.n_cols;
        let mut x = vec![T::zero(); self.layout.n_struct];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.layout.n_struct {
                x[b] = self.tab[i][rhs].clone();
            }
        }
        x
    }

    fn to_original(&self, xs: &[T]) -> Vec<T> {
        self.layout
            .cols
            .iter()
            .map(|&(pc, nc)| match nc {
                Some(nc) => xs[pc].clone() - xs[nc].clone(),
                None => xs[pc].clone(),
            })
            .collect()
    }

    fn run(mut self, p: &LinearProgram<T>) -> Result<LpOutcome<T>> {
        let n_struct = self.layout.n_struct;
        let rhs = self.n_cols;
        let m = self.tab.len();

        // Phase I: minimize the sum of artificials.
        let mut phase1 = vec![T::zero(); self.n_cols];
        for c in phase1.iter_mut().skip(n_struct) {
            *c = T::one();
        }
        self.set_cost(&phase1);
        self.iterate(self.n_cols)?;
        let infeas = -self.cost[rhs].clone();
        if infeas.is_pos(self.eps) {
            let farkas = (0..m)
                .map(|i| {
                    let pi = T::one() - self.cost[n_struct + i].clone();
                    if self.row_sign[i] {
                        -pi
                    } else {
                        pi
                    }
                })
                .collect();
            return Ok(LpOutcome::Infeasible { farkas });
        }

        // Drive remaining artificials out of the basis; rows where that is
        // impossible are redundant.
        let mut keep = vec![true; self.tab.len()];
        for i in 0..self.tab.len() {
            if self.basis[i] < n_struct {
                continue;
            }
            match (0..n_struct).find(|&j| !self.tab[i][j].is_zero_eps(self.eps)) {
                Some(j) => self.pivot(i, j),
                None => keep[i] = false,
            }
        }
        if keep.iter().any(|k| !k) {
            let mut idx = 0;
            self.tab.retain(|_| {
                idx += 1;
                keep[idx - 1]
            });
            let mut idx = 0;
            self.basis.retain(|_| {
                idx += 1;
                keep[idx - 1]
            });
        }

        let Some(obj) = &p.objective else {
            let xs = self.structural_solution();
            return Ok(LpOutcome::Feasible {
                solution: self.to_original(&xs),
                value: None,
            });
        };

        // Phase II: minimize -objective over structural columns.
        let mut c2 = vec![T::zero(); n_struct];
        for (j, &(pc, nc)) in self.layout.cols.iter().enumerate() {
            c2[pc] = -obj[j].clone();
            if let Some(nc) = nc {
                c2[nc] = obj[j].clone();
            }
        }
        self.set_cost(&c2);
        match self.iterate(n_struct)? {
            None => {
                let xs = self.structural_solution();
                let x = self.to_original(&xs);
                let value = dot(obj, &x);
                Ok(LpOutcome::Feasible {
                    solution: x,
                    value: Some(value),
                })
            }
            Some(enter) => {
                let xs = self.structural_solution();
                let mut dir = vec![T::zero(); n_struct];
                dir[enter] = T::one();
                for (i, &b) in self.basis.iter().enumerate() {
                    if b < n_struct {
                        dir[b] = -self.tab[i][enter].clone();
                    }
                }
                Ok(LpOutcome::Unbounded {
                    solution: self.to_original(&xs),
                    ray: self.to_original(&dir),
                })
            }
        }
    }
}
