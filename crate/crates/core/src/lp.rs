//! Linear-programming kernel for containment, redundancy and feasibility
//! checks.
//!
//! Problems are small and dense (a handful of free variables, tens of rows),
//! so this is a plain two-phase tableau simplex with Bland's rule. Every
//! variable is free: internally each one is split into a difference of two
//! nonnegative columns.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::scalar::abs;
use crate::term::PolyhedralTerm;
use crate::termlist::TermList;
use crate::var::Var;

/// Pivot / feasibility tolerance of the simplex itself. Callers compare
/// optimal values with the coarser [`crate::scalar::LP_EPS`].
const PIVOT_EPS: f64 = 1e-9;

/// A maximization problem over free real variables subject to a list of
/// `<=` rows.
#[derive(Clone, Debug)]
pub struct LpProblem {
    variables: Vec<Var>,
    objective: BTreeMap<Var, f64>,
    constraints: TermList,
}

/// Outcome of a solve.
#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal {
        value: f64,
        witness: BTreeMap<Var, f64>,
    },
    Infeasible,
    Unbounded,
}

/// The problem references a variable it does not declare.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MalformedProblem(pub String);

impl fmt::Display for MalformedProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "malformed LP: {}", self.0)
    }
}

impl LpProblem {
    pub fn new(
        variables: impl IntoIterator<Item = Var>,
        objective: impl IntoIterator<Item = (Var, f64)>,
        constraints: TermList,
    ) -> Self {
        let mut seen = BTreeSet::new();
        let variables = variables
            .into_iter()
            .filter(|v| seen.insert(v.clone()))
            .collect();
        LpProblem {
            variables,
            objective: objective.into_iter().collect(),
            constraints,
        }
    }

    pub fn variables(&self) -> &[Var] {
        &self.variables
    }

    /// Maximizes the objective. Errors when the objective or a constraint
    /// mentions an undeclared variable.
    pub fn solve(&self) -> Result<LpOutcome, MalformedProblem> {
        let declared: BTreeSet<&Var> = self.variables.iter().collect();
        for v in self.objective.keys() {
            if !declared.contains(v) {
                return Err(MalformedProblem(alloc::format!(
                    "objective references undeclared variable {v}"
                )));
            }
        }
        for t in self.constraints.iter() {
            for v in t.vars() {
                if !declared.contains(v) {
                    return Err(MalformedProblem(alloc::format!(
                        "constraint {t} references undeclared variable {v}"
                    )));
                }
            }
        }
        Ok(simplex(&self.variables, &self.objective, &self.constraints))
    }
}

/// Maximizes the linear form given by `objective` subject to `constraints`,
/// declaring exactly the variables that appear. Internal entry point for the
/// polyhedral procedures, which construct objectives from existing terms.
pub fn maximize(objective: &BTreeMap<Var, f64>, constraints: &TermList) -> LpOutcome {
    let mut vars: BTreeSet<Var> = objective.keys().cloned().collect();
    vars.extend(constraints.vars());
    simplex(
        &vars.into_iter().collect::<Vec<_>>(),
        objective,
        constraints,
    )
}

/// Maximizes the left-hand side of `term` subject to `constraints`.
pub fn maximize_term(term: &PolyhedralTerm, constraints: &TermList) -> LpOutcome {
    let objective: BTreeMap<Var, f64> = term.coefficients().map(|(v, c)| (v.clone(), c)).collect();
    maximize(&objective, constraints)
}

/// Whether some real assignment satisfies every term: a solve with zero
/// objective.
pub fn is_feasible(constraints: &TermList) -> bool {
    match maximize(&BTreeMap::new(), constraints) {
        LpOutcome::Infeasible => false,
        LpOutcome::Optimal { .. } | LpOutcome::Unbounded => true,
    }
}

/// Dense two-phase simplex. Column layout: for variable `i`, columns `2i`
/// and `2i+1` hold its positive and negative parts; then one slack per row;
/// then phase-one artificials.
fn simplex(variables: &[Var], objective: &BTreeMap<Var, f64>, constraints: &TermList) -> LpOutcome {
    // Constant rows need no pivoting: a contradiction row decides the whole
    // problem, a tautology row adds nothing. Filtering them also keeps the
    // tableau small.
    let mut rows: Vec<&PolyhedralTerm> = Vec::new();
    for t in constraints.iter() {
        if t.is_contradiction() {
            return LpOutcome::Infeasible;
        }
        if !t.is_tautology() {
            rows.push(t);
        }
    }

    let k = variables.len();
    let m = rows.len();
    let n_struct = 2 * k;
    let index_of: BTreeMap<&Var, usize> =
        variables.iter().enumerate().map(|(i, v)| (v, i)).collect();

    // tableau[r] = coefficients..., rhs; one extra objective row appended later
    let mut tab: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut needs_artificial = Vec::new();
    for (r, t) in rows.iter().enumerate() {
        let mut row = vec![0.0; n_struct + m + 1];
        for (v, c) in t.coefficients() {
            let i = index_of[v];
            row[2 * i] = c;
            row[2 * i + 1] = -c;
        }
        row[n_struct + r] = 1.0; // slack
        row[n_struct + m] = t.constant();
        if t.constant() < 0.0 {
            for x in row.iter_mut() {
                *x = -*x;
            }
            needs_artificial.push(r);
        }
        tab.push(row);
    }

    let rhs_col = n_struct + m;
    let mut basis: Vec<usize> = (0..m).map(|r| n_struct + r).collect();

    // Phase 1: drive artificials out.
    if !needs_artificial.is_empty() {
        let n_art = needs_artificial.len();
        let total = n_struct + m + n_art;
        for row in tab.iter_mut() {
            let rhs = row.remove(rhs_col);
            row.extend(core::iter::repeat_n(0.0, n_art));
            row.push(rhs);
        }
        for (j, &r) in needs_artificial.iter().enumerate() {
            tab[r][n_struct + m + j] = 1.0;
            basis[r] = n_struct + m + j;
        }
        // maximize -(sum of artificials): reduced-cost row starts as +1 on
        // artificials, then basic artificial columns are cleared.
        let mut z = vec![0.0; total + 1];
        for j in 0..n_art {
            z[n_struct + m + j] = 1.0;
        }
        for &r in &needs_artificial {
            let row = tab[r].clone();
            for (zj, rj) in z.iter_mut().zip(row.iter()) {
                *zj -= rj;
            }
        }
        if !pivot_to_optimum(&mut tab, &mut z, &mut basis, total) {
            // phase-1 objective is bounded by construction
            unreachable!("phase 1 cannot be unbounded");
        }
        // The rhs entry of the z-row tracks the current objective value,
        // here -(sum of artificials); feasible iff it reaches ~0.
        let attained = z[total];
        if attained < -1e-7 {
            return LpOutcome::Infeasible;
        }
        // Pivot any artificial still basic (at zero) out of the basis.
        for r in 0..m {
            if basis[r] >= n_struct + m {
                if let Some(j) = (0..n_struct + m).find(|&j| abs(tab[r][j]) > PIVOT_EPS) {
                    pivot(&mut tab, &mut z, &mut basis, r, j, total);
                }
                // otherwise the row is vacuous; it stays with its artificial
                // pinned at zero and never constrains phase 2
            }
        }
        // Drop artificial columns.
        for row in tab.iter_mut() {
            let rhs = row[total];
            row.truncate(n_struct + m);
            row.push(rhs);
        }
    }

    // Phase 2.
    let total = n_struct + m;
    let mut z = vec![0.0; total + 1];
    for (v, &c) in objective {
        if let Some(&i) = index_of.get(v) {
            z[2 * i] = -c;
            z[2 * i + 1] = c;
        }
    }
    for r in 0..m {
        if basis[r] < total {
            let cost = -z[basis[r]];
            if cost != 0.0 {
                let row = tab[r].clone();
                for (zj, rj) in z.iter_mut().zip(row.iter()) {
                    *zj += cost * rj;
                }
                z[basis[r]] = 0.0;
            }
        }
    }
    if !pivot_to_optimum(&mut tab, &mut z, &mut basis, total) {
        return LpOutcome::Unbounded;
    }

    // Read the witness back.
    let mut witness: BTreeMap<Var, f64> = variables.iter().map(|v| (v.clone(), 0.0)).collect();
    for r in 0..m {
        let b = basis[r];
        if b < n_struct {
            let i = b / 2;
            let sign = if b.is_multiple_of(2) { 1.0 } else { -1.0 };
            *witness.get_mut(&variables[i]).unwrap() += sign * tab[r][total];
        }
    }
    let value = objective
        .iter()
        .map(|(v, c)| c * witness.get(v).copied().unwrap_or(0.0))
        .sum();
    LpOutcome::Optimal { value, witness }
}

/// Runs Bland-rule pivots until no reduced cost is negative. Returns `false`
/// when an entering column proves the objective unbounded.
fn pivot_to_optimum(
    tab: &mut [Vec<f64>],
    z: &mut [f64],
    basis: &mut [usize],
    total: usize,
) -> bool {
    loop {
        // Bland: first column with negative reduced cost.
        let Some(enter) = (0..total).find(|&j| z[j] < -PIVOT_EPS) else {
            return true;
        };
        // Ratio test; Bland tie-break on smallest basis index.
        let mut leave: Option<(usize, f64)> = None;
        for (r, row) in tab.iter().enumerate() {
            if row[enter] > PIVOT_EPS {
                let ratio = row[total] / row[enter];
                let better = match leave {
                    None => true,
                    Some((lr, lratio)) => {
                        ratio < lratio - PIVOT_EPS
                            || (abs(ratio - lratio) <= PIVOT_EPS && basis[r] < basis[lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((leave, _)) = leave else {
            return false;
        };
        pivot(tab, z, basis, leave, enter, total);
    }
}

fn pivot(
    tab: &mut [Vec<f64>],
    z: &mut [f64],
    basis: &mut [usize],
    r: usize,
    j: usize,
    total: usize,
) {
    let p = tab[r][j];
    for x in tab[r].iter_mut() {
        *x /= p;
    }
    let prow = tab[r].clone();
    for (i, row) in tab.iter_mut().enumerate() {
        if i != r && abs(row[j]) > 0.0 {
            let f = row[j];
            for (x, pr) in row.iter_mut().zip(prow.iter()) {
                *x -= f * pr;
            }
            row[j] = 0.0;
        }
    }
    let f = z[j];
    if f != 0.0 {
        for (x, pr) in z.iter_mut().zip(prow.iter()).take(total + 1) {
            *x -= f * pr;
        }
        z[j] = 0.0;
    }
    basis[r] = j;
}
