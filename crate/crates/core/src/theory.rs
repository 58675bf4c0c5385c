//! Polyhedral reasoning on term lists: containment checking, redundancy
//! elimination, and variable elimination that strengthens or weakens a list
//! relative to a context.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::lp::{self, LpOutcome};
use crate::scalar::LP_EPS;
use crate::term::PolyhedralTerm;
use crate::termlist::TermList;
use crate::var::Var;

/// No chain of context substitutions removes `var` from `term`.
#[derive(Debug, Clone, PartialEq)]
pub struct EliminationError {
    pub var: Var,
    pub term: PolyhedralTerm,
}

impl fmt::Display for EliminationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "no context bound eliminates {} from {}",
            self.var, self.term
        )
    }
}

/// Fourier-Motzkin intermediate list grew past the safety budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationBudgetExceeded {
    pub terms: usize,
}

impl fmt::Display for EliminationBudgetExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "variable elimination produced {} intermediate terms",
            self.terms
        )
    }
}

/// Worst-case Fourier-Motzkin is exponential; desk-scale inputs stay far
/// below this.
const FM_TERM_BUDGET: usize = 10_000;

impl TermList {
    /// Whether every point satisfying `self` satisfies `other`.
    ///
    /// Each row of `other` is checked by maximizing its left-hand side over
    /// `self`: the row is entailed when `self` is infeasible or the optimum
    /// stays at or below the row constant (within tolerance); an unbounded
    /// objective refutes it.
    pub fn refines(&self, other: &TermList) -> bool {
        other.iter().all(|row| match lp::maximize_term(row, self) {
            LpOutcome::Infeasible => true,
            LpOutcome::Optimal { value, .. } => value <= row.constant() + LP_EPS,
            LpOutcome::Unbounded => false,
        })
    }

    /// Removes terms entailed by the remaining ones together with `context`,
    /// scanning in list order. The result conjoined with `context` denotes
    /// the same polyhedron as `self` conjoined with `context`.
    pub fn reduce(&self, context: &TermList) -> TermList {
        let terms = self.terms();
        let mut alive: Vec<bool> = alloc::vec![true; terms.len()];
        for i in 0..terms.len() {
            let others: TermList = terms
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i && alive[*j])
                .map(|(_, t)| t.clone())
                .chain(context.iter().cloned())
                .collect();
            let redundant = match lp::maximize_term(&terms[i], &others) {
                LpOutcome::Infeasible => true,
                LpOutcome::Optimal { value, .. } => value <= terms[i].constant() + LP_EPS,
                LpOutcome::Unbounded => false,
            };
            if redundant {
                alive[i] = false;
            }
        }
        terms
            .iter()
            .enumerate()
            .filter(|(i, _)| alive[*i])
            .map(|(_, t)| t.clone())
            .collect()
    }

    /// Strengthens `self` into a list over `allowed` variables: the result
    /// conjoined with `context` entails `self`.
    ///
    /// Every disallowed variable of a term is eliminated by substituting a
    /// bound taken from the context: a positive occurrence consumes an upper
    /// bound (a context term where the variable also appears positively), a
    /// negative occurrence a lower bound. Substitutions may introduce new
    /// disallowed variables; chains of substitutions are explored
    /// depth-first in context order, each context term used at most once per
    /// chain. Among the completed chains for a term the weakest usable
    /// outcome wins: a term discharged to a tautology is dropped outright,
    /// otherwise the result that retains the most interface variables
    /// (earliest chain on ties). A term with no completed chain is an
    /// elimination error.
    pub fn refine_with_context(
        &self,
        context: &TermList,
        allowed: &BTreeSet<Var>,
    ) -> Result<TermList, EliminationError> {
        let mut out = Vec::new();
        for term in self.iter() {
            let mut search = ChainSearch {
                context,
                allowed,
                visited: 0,
                results: alloc::vec::Vec::new(),
            };
            let mut used = alloc::vec![false; context.len()];
            search.explore(term, &mut used);
            if search.results.iter().any(Option::is_none) {
                continue; // discharged
            }
            let best = search
                .results
                .into_iter()
                .enumerate()
                .filter_map(|(i, r)| r.map(|t| (i, t)))
                .min_by_key(|(i, t)| (t.is_contradiction(), usize::MAX - t.vars().count(), *i));
            match best {
                Some((_, t)) => out.push(t),
                None => {
                    let var = term
                        .vars()
                        .find(|v| !allowed.contains(*v))
                        .cloned()
                        .expect("unsolvable terms have a disallowed variable");
                    return Err(EliminationError {
                        var,
                        term: term.clone(),
                    });
                }
            }
        }
        Ok(TermList::new(out))
    }

    /// Weakens `self` into a list over `allowed` variables: `self` conjoined
    /// with `context` entails the result.
    ///
    /// Disallowed variables are eliminated from the combined list by
    /// Fourier-Motzkin projection, in lexicographic order. Only consequences
    /// whose derivation involves at least one term of `self` are kept;
    /// untouched context facts are not emitted. Tautologies are dropped and
    /// the result is reduced against the empty context.
    pub fn relax_with_context(
        &self,
        context: &TermList,
        allowed: &BTreeSet<Var>,
    ) -> Result<TermList, EliminationBudgetExceeded> {
        // provenance flag: does the term derive from self?
        let mut pool: Vec<(PolyhedralTerm, bool)> = self
            .iter()
            .map(|t| (t.clone(), true))
            .chain(context.iter().map(|t| (t.clone(), false)))
            .collect();

        let mut disallowed: BTreeSet<Var> = BTreeSet::new();
        for (t, _) in &pool {
            disallowed.extend(t.vars().filter(|v| !allowed.contains(*v)).cloned());
        }

        for v in disallowed {
            let mut kept: Vec<(PolyhedralTerm, bool)> = Vec::new();
            let mut pos: Vec<(PolyhedralTerm, bool)> = Vec::new();
            let mut neg: Vec<(PolyhedralTerm, bool)> = Vec::new();
            for (t, tl) in pool {
                let c = t.coefficient(&v);
                if c > 0.0 {
                    pos.push((t, tl));
                } else if c < 0.0 {
                    neg.push((t, tl));
                } else {
                    kept.push((t, tl));
                }
            }
            for (p, p_tl) in &pos {
                for (n, n_tl) in &neg {
                    // n + (|n_v| / p_v) * p cancels v, keeping the scale of
                    // the term that consumed the bound
                    let factor = -n.coefficient(&v) / p.coefficient(&v);
                    let combined = n.add_scaled_cancelling(factor, p, &v);
                    if !combined.is_tautology() {
                        kept.push((combined, *p_tl || *n_tl));
                    }
                    if kept.len() > FM_TERM_BUDGET {
                        return Err(EliminationBudgetExceeded { terms: kept.len() });
                    }
                }
            }
            pool = kept;
        }

        let result: TermList = pool
            .into_iter()
            .filter(|(t, from_self)| *from_self && !t.is_tautology())
            .map(|(t, _)| t)
            .collect();
        Ok(result.reduce(&TermList::empty()))
    }
}

/// Caps on the per-term substitution-chain exploration; generous for
/// interface-sized contexts, and exploration stays deterministic when they
/// bite because chains are visited in a fixed order.
const CHAIN_VISIT_BUDGET: usize = 4096;
const CHAIN_RESULT_CAP: usize = 128;

/// Depth-first enumeration of substitution chains for one term. Each
/// completed chain yields `Some(term)` over allowed variables only, or
/// `None` when the term discharged to a tautology.
struct ChainSearch<'a> {
    context: &'a TermList,
    allowed: &'a BTreeSet<Var>,
    visited: usize,
    results: Vec<Option<PolyhedralTerm>>,
}

impl ChainSearch<'_> {
    fn explore(&mut self, term: &PolyhedralTerm, used: &mut Vec<bool>) {
        if self.results.len() >= CHAIN_RESULT_CAP || self.visited >= CHAIN_VISIT_BUDGET {
            return;
        }
        self.visited += 1;
        if term.is_tautology() {
            self.results.push(None);
            return;
        }
        let Some(target) = term.vars().find(|v| !self.allowed.contains(*v)).cloned() else {
            self.results.push(Some(term.clone()));
            return;
        };
        let coeff = term.coefficient(&target);
        for i in 0..self.context.len() {
            // a usable bound has the same coefficient sign on the target
            let bound = &self.context.terms()[i];
            if used[i] || bound.coefficient(&target) * coeff <= 0.0 {
                continue;
            }
            let factor = -(coeff / bound.coefficient(&target));
            let substituted = term.add_scaled_cancelling(factor, bound, &target);
            used[i] = true;
            self.explore(&substituted, used);
            used[i] = false;
        }
    }
}
