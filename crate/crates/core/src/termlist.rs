//! Ordered conjunctions of terms (H-representation polyhedra).

use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::parser::{parse_term, ParseError};
use crate::term::PolyhedralTerm;
use crate::var::Var;

/// An ordered list of [`PolyhedralTerm`]s, denoting their conjunction.
///
/// Construction preserves the order in which terms were given and removes
/// numeric duplicates (first occurrence wins), so identical inputs always
/// produce identical lists.
#[derive(Clone, PartialEq, Default)]
pub struct TermList {
    terms: Vec<PolyhedralTerm>,
}

impl TermList {
    pub fn new(terms: impl IntoIterator<Item = PolyhedralTerm>) -> Self {
        let mut out: Vec<PolyhedralTerm> = Vec::new();
        for t in terms {
            if !out.iter().any(|u| u.duplicate_of(&t)) {
                out.push(t);
            }
        }
        TermList { terms: out }
    }

    pub fn empty() -> Self {
        TermList::default()
    }

    /// Parses one term string per entry; `=` entries contribute two terms.
    pub fn parse(lines: &[&str]) -> Result<Self, ParseError> {
        let mut terms = Vec::new();
        for line in lines {
            terms.extend(parse_term(line)?);
        }
        Ok(TermList::new(terms))
    }

    pub fn terms(&self) -> &[PolyhedralTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, PolyhedralTerm> {
        self.terms.iter()
    }

    /// Union of the variables of all terms.
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut set = BTreeSet::new();
        for t in &self.terms {
            set.extend(t.vars().cloned());
        }
        set
    }

    /// Concatenation preserving order, with duplicates removed.
    pub fn concat(&self, other: &TermList) -> TermList {
        TermList::new(self.terms.iter().chain(other.terms.iter()).cloned())
    }

    pub fn satisfied_by(&self, point: &BTreeMap<Var, f64>, tol: f64) -> bool {
        self.terms.iter().all(|t| t.satisfied_by(point, tol))
    }

    /// Canonical string forms of all terms, in order.
    pub fn render(&self) -> Vec<String> {
        use alloc::string::ToString;
        self.terms.iter().map(|t| t.to_string()).collect()
    }
}

impl FromIterator<PolyhedralTerm> for TermList {
    fn from_iter<T: IntoIterator<Item = PolyhedralTerm>>(iter: T) -> Self {
        TermList::new(iter)
    }
}

impl fmt::Display for TermList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for TermList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
