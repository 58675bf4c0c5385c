//! Linear inequality terms.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::scalar::{abs, format_number, COEFF_EPS};
use crate::var::Var;

/// One linear inequality `sum(c_i * v_i) <= k`.
///
/// Only nonzero coefficients are stored; a term with no coefficients is a
/// tautology when `k >= 0` and a contradiction otherwise.
#[derive(Clone, PartialEq)]
pub struct PolyhedralTerm {
    coefficients: BTreeMap<Var, f64>,
    constant: f64,
}

impl PolyhedralTerm {
    /// Builds a term, dropping coefficients with magnitude at or below
    /// [`COEFF_EPS`] and normalizing signed zeros.
    pub fn new(coefficients: impl IntoIterator<Item = (Var, f64)>, constant: f64) -> Self {
        let mut map = BTreeMap::new();
        for (v, c) in coefficients {
            let entry = map.entry(v).or_insert(0.0);
            *entry += c;
        }
        map.retain(|_, c| abs(*c) > COEFF_EPS);
        let constant = if constant == 0.0 { 0.0 } else { constant };
        PolyhedralTerm {
            coefficients: map,
            constant,
        }
    }

    /// The inequality `v <= k`.
    pub fn upper_bound(v: Var, k: f64) -> Self {
        PolyhedralTerm::new([(v, 1.0)], k)
    }

    /// The inequality `v >= k`, stored as `-v <= -k`.
    pub fn lower_bound(v: Var, k: f64) -> Self {
        PolyhedralTerm::new([(v, -1.0)], -k)
    }

    pub fn coefficient(&self, v: &Var) -> f64 {
        self.coefficients.get(v).copied().unwrap_or(0.0)
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&Var, f64)> {
        self.coefficients.iter().map(|(v, c)| (v, *c))
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    /// Variables with nonzero coefficient, in lexicographic order.
    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.coefficients.keys()
    }

    pub fn var_set(&self) -> BTreeSet<Var> {
        self.coefficients.keys().cloned().collect()
    }

    pub fn is_tautology(&self) -> bool {
        self.coefficients.is_empty() && self.constant >= 0.0
    }

    pub fn is_contradiction(&self) -> bool {
        self.coefficients.is_empty() && self.constant < 0.0
    }

    /// Value of the left-hand side at `point` (missing variables read 0).
    pub fn lhs_at(&self, point: &BTreeMap<Var, f64>) -> f64 {
        self.coefficients
            .iter()
            .map(|(v, c)| c * point.get(v).copied().unwrap_or(0.0))
            .sum()
    }

    /// Whether `point` satisfies the inequality within `tol`.
    pub fn satisfied_by(&self, point: &BTreeMap<Var, f64>, tol: f64) -> bool {
        self.lhs_at(point) <= self.constant + tol
    }

    /// `self + factor * other`, with `cancel` removed from the result
    /// exactly. Used for bound substitution and Fourier-Motzkin combination,
    /// where the coefficient of the eliminated variable vanishes analytically
    /// and must not survive as floating-point residue.
    pub fn add_scaled_cancelling(
        &self,
        factor: f64,
        other: &PolyhedralTerm,
        cancel: &Var,
    ) -> PolyhedralTerm {
        let mut coeffs = self.coefficients.clone();
        coeffs.remove(cancel);
        for (v, c) in &other.coefficients {
            if v == cancel {
                continue;
            }
            *coeffs.entry(v.clone()).or_insert(0.0) += factor * c;
        }
        PolyhedralTerm::new(coeffs, self.constant + factor * other.constant)
    }

    /// Multiplies both sides by a positive scalar.
    pub fn scaled(&self, factor: f64) -> PolyhedralTerm {
        debug_assert!(factor > 0.0);
        PolyhedralTerm::new(
            self.coefficients
                .iter()
                .map(|(v, c)| (v.clone(), c * factor)),
            self.constant * factor,
        )
    }

    /// The reversed inequality of the negated left-hand side (`-lhs <= -k`),
    /// i.e. the other half of an equality.
    pub fn flipped(&self) -> PolyhedralTerm {
        PolyhedralTerm::new(
            self.coefficients.iter().map(|(v, c)| (v.clone(), -c)),
            -self.constant,
        )
    }

    /// Numeric duplicate check: terms are duplicates when they agree after
    /// scaling each by its largest-magnitude coefficient. Stored terms keep
    /// their original scale; only this comparison normalizes.
    pub fn duplicate_of(&self, other: &PolyhedralTerm) -> bool {
        if self.coefficients.len() != other.coefficients.len() {
            return false;
        }
        if self.coefficients.is_empty() {
            // Tautologies and contradictions: compare sign class, then value.
            return (self.constant >= 0.0) == (other.constant >= 0.0)
                && abs(self.constant - other.constant) <= COEFF_EPS;
        }
        let norm = |t: &PolyhedralTerm| {
            t.coefficients
                .values()
                .fold(0.0_f64, |m, c| if abs(*c) > m { abs(*c) } else { m })
        };
        let (na, nb) = (norm(self), norm(other));
        for ((va, ca), (vb, cb)) in self.coefficients.iter().zip(other.coefficients.iter()) {
            if va != vb || abs(ca / na - cb / nb) > COEFF_EPS {
                return false;
            }
        }
        abs(self.constant / na - other.constant / nb) <= COEFF_EPS
    }

    fn render(&self) -> String {
        use alloc::format;
        if self.coefficients.is_empty() {
            return format!("0 <= {}", format_number(self.constant));
        }
        let pieces: Vec<String> = self
            .coefficients
            .iter()
            .map(|(v, c)| {
                if *c == 1.0 {
                    format!("{v}")
                } else {
                    format!("{}*{v}", format_number(*c))
                }
            })
            .collect();
        format!("{} <= {}", pieces.join(" + "), format_number(self.constant))
    }
}

/// Canonical text form: variables in lexicographic order, coefficient `1`
/// elided, every other coefficient (including `-1`) written explicitly,
/// `<=` separator. Parsing the rendered string reproduces the term exactly.
impl fmt::Display for PolyhedralTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for PolyhedralTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
