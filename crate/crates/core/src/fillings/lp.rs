//! Dense two-phase simplex method with Bland's rule.

use thiserror::Error;

use crate::scalar::Scalar;

/// Pivot and reduced-cost threshold for floating point problems.
pub const LP_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarBound {
    NonNegative,
    Free,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint<T> {
    pub coeffs: Vec<T>,
    pub relation: Relation,
    pub rhs: T,
}

/// Minimize `objective · x` subject to the constraints and variable bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem<T> {
    pub objective: Vec<T>,
    pub constraints: Vec<Constraint<T>>,
    pub bounds: Vec<VarBound>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution<T> {
    pub x: Vec<T>,
    pub value: T,
    /// Optimal multipliers, one per constraint: `objective - Aᵀ duals` is
    /// nonnegative on nonnegative variables and zero on free ones.
    pub duals: Vec<T>,
    pub pivots: usize,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("the linear program is infeasible")]
    Infeasible,
    #[error("the linear program is unbounded")]
    Unbounded,
    #[error("constraint {row} has {got} coefficients, expected {expected}")]
    Dimension { row: usize, got: usize, expected: usize },
}

impl<T: Scalar> LpProblem<T> {
    pub fn new(objective: Vec<T>, bounds: Vec<VarBound>) -> Self {
        Self { objective, constraints: Vec::new(), bounds }
    }

    pub fn constrain(&mut self, coeffs: Vec<T>, relation: Relation, rhs: T) {
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    pub fn variable_count(&self) -> usize {
        self.objective.len()
    }

    /// Largest violation of any constraint or bound by `x` (zero if feasible).
    pub fn violation(&self, x: &[T]) -> T {
        let mut worst = T::zero();
        let mut bump = |v: T| {
            if v > worst {
                worst = v;
            }
        };
        for c in &self.constraints {
            let lhs = dot(&c.coeffs, x);
            match c.relation {
                Relation::Le => bump(lhs - c.rhs.clone()),
                Relation::Ge => bump(c.rhs.clone() - lhs),
                Relation::Eq => bump((lhs - c.rhs.clone()).abs()),
            }
        }
        for (v, b) in x.iter().zip(&self.bounds) {
            if *b == VarBound::NonNegative {
                bump(-v.clone());
            }
        }
        worst
    }
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (p, q)| acc + p.clone() * q.clone())
}

/// Solves the problem exactly for exact scalars and with threshold
/// [`LP_EPS`] in floating point.
pub fn lp_solve<T: Scalar>(problem: &LpProblem<T>) -> Result<LpSolution<T>, LpError> {
    let nv = problem.variable_count();
    for (row, c) in problem.constraints.iter().enumerate() {
        if c.coeffs.len() != nv {
            return Err(LpError::Dimension { row, got: c.coeffs.len(), expected: nv });
        }
    }
    let eps = if T::EXACT { T::zero() } else { T::from_f64(LP_EPS).expect("finite") };

    // structural columns: each free variable becomes a difference of two
    let mut column_of = Vec::with_capacity(nv);
    let mut ns = 0;
    for b in &problem.bounds {
        column_of.push(ns);
        ns += if *b == VarBound::Free { 2 } else { 1 };
    }
    let expand = |coeffs: &[T]| -> Vec<T> {
        let mut out = vec![T::zero(); ns];
        for (j, c) in coeffs.iter().enumerate() {
            out[column_of[j]] = c.clone();
            if problem.bounds[j] == VarBound::Free {
                out[column_of[j] + 1] = -c.clone();
            }
        }
        out
    };

    let m = problem.constraints.len();
    let n_slack = problem.constraints.iter().filter(|c| c.relation != Relation::Eq).count();
    // columns: structural | slack/surplus | artificial | rhs
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut artificial_rows = Vec::new();
    let mut slack_col = ns;
    // column that starts as the unit vector of each row, and the row's sign
    let mut unit_col = Vec::with_capacity(m);
    let mut flipped = Vec::with_capacity(m);
    for c in &problem.constraints {
        let mut coeffs = expand(&c.coeffs);
        let mut rhs = c.rhs.clone();
        let mut rel = c.relation;
        flipped.push(rhs.is_negative());
        if rhs.is_negative() {
            coeffs.iter_mut().for_each(|v| *v = -v.clone());
            rhs = -rhs;
            rel = match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
        let mut row = coeffs;
        row.resize(ns + n_slack, T::zero());
        match rel {
            Relation::Le => {
                row[slack_col] = T::one();
                basis.push(slack_col);
                unit_col.push(slack_col);
                slack_col += 1;
            }
            Relation::Ge => {
                row[slack_col] = -T::one();
                slack_col += 1;
                basis.push(usize::MAX);
                unit_col.push(usize::MAX);
                artificial_rows.push(rows.len());
            }
            Relation::Eq => {
                basis.push(usize::MAX);
                unit_col.push(usize::MAX);
                artificial_rows.push(rows.len());
            }
        }
        row.push(rhs);
        rows.push(row);
    }
    let na = artificial_rows.len();
    let width = ns + n_slack + na;
    for row in rows.iter_mut() {
        let rhs = row.pop().expect("rhs");
        row.resize(width, T::zero());
        row.push(rhs);
    }
    for (k, &r) in artificial_rows.iter().enumerate() {
        rows[r][ns + n_slack + k] = T::one();
        basis[r] = ns + n_slack + k;
        unit_col[r] = ns + n_slack + k;
    }
    let mut tab = Tableau { rows, basis, width, eps: eps.clone(), pivots: 0 };

    if na > 0 {
        let mut cost = vec![T::zero(); width];
        for c in cost.iter_mut().skip(ns + n_slack) {
            *c = T::one();
        }
        tab.optimize(&cost, width)?;
        let infeasibility = tab.objective_value(&cost);
        let scale = problem
            .constraints
            .iter()
            .fold(T::one(), |m, c| if c.rhs.abs() > m { c.rhs.abs() } else { m });
        if infeasibility > eps.clone() * scale {
            return Err(LpError::Infeasible);
        }
        tab.drive_out_artificials(ns + n_slack);
    }
    let mut cost = expand(&problem.objective);
    cost.resize(width, T::zero());
    tab.optimize(&cost, ns + n_slack)?;

    let mut structural = vec![T::zero(); ns];
    for (r, &b) in tab.basis.iter().enumerate() {
        if b < ns {
            structural[b] = tab.rows[r][width].clone();
        }
    }
    let x: Vec<T> = (0..nv)
        .map(|j| {
            let v = structural[column_of[j]].clone();
            if problem.bounds[j] == VarBound::Free {
                v - structural[column_of[j] + 1].clone()
            } else {
                v
            }
        })
        .collect();
    let value = dot(&problem.objective, &x);
    let duals = (0..m)
        .map(|i| {
            let pi = tab
                .rows
                .iter()
                .zip(&tab.basis)
                .fold(T::zero(), |acc, (row, &b)| acc + cost[b].clone() * row[unit_col[i]].clone());
            if flipped[i] {
                -pi
            } else {
                pi
            }
        })
        .collect();
    Ok(LpSolution { x, value, duals, pivots: tab.pivots })
}

struct Tableau<T> {
    /// Each row holds `width` coefficients followed by the right-hand side.
    rows: Vec<Vec<T>>,
    basis: Vec<usize>,
    width: usize,
    eps: T,
    pivots: usize,
}

impl<T: Scalar> Tableau<T> {
    fn objective_value(&self, cost: &[T]) -> T {
        self.rows
            .iter()
            .zip(&self.basis)
            .fold(T::zero(), |acc, (row, &b)| acc + cost[b].clone() * row[self.width].clone())
    }

    fn reduced_cost(&self, cost: &[T], j: usize) -> T {
        self.rows
            .iter()
            .zip(&self.basis)
            .fold(cost[j].clone(), |acc, (row, &b)| acc - cost[b].clone() * row[j].clone())
    }

    /// Bland's rule over the first `allowed` columns.
    fn optimize(&mut self, cost: &[T], allowed: usize) -> Result<(), LpError> {
        let neg_eps = -self.eps.clone();
        loop {
            let entering = (0..allowed)
                .find(|&j| !self.basis.contains(&j) && self.reduced_cost(cost, j) < neg_eps);
            let Some(j) = entering else {
                return Ok(());
            };
            let mut leave: Option<(usize, T)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if row[j] > self.eps {
                    let ratio = row[self.width].clone() / row[j].clone();
                    let better = match &leave {
                        None => true,
                        Some((lr, best)) => ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr]),
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            let Some((r, _)) = leave else {
                return Err(LpError::Unbounded);
            };
            self.pivot(r, j);
        }
    }

    fn pivot(&mut self, r: usize, j: usize) {
        self.pivots += 1;
        let p = self.rows[r][j].clone();
        for v in self.rows[r].iter_mut() {
            *v = v.clone() / p.clone();
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[j].is_zero() {
                continue;
            }
            let f = row[j].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
        }
        self.basis[r] = j;
    }

    /// Pivots zero-level artificial variables out of the basis and drops
    /// rows that turn out to be redundant.
    fn drive_out_artificials(&mut self, first_artificial: usize) {
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] >= first_artificial {
                let col = (0..first_artificial).find(|&j| self.rows[r][j].abs() > self.eps);
                match col {
                    Some(j) => self.pivot(r, j),
                    None => {
                        self.rows.remove(r);
                        self.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }
}
