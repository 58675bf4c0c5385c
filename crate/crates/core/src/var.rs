//! Named interface variables.

use alloc::string::String;
use core::fmt;

/// A named variable of a contract interface.
///
/// Names consist of letters, digits, underscores and trailing prime marks,
/// and may not begin with a digit. Equality and ordering are by name;
/// ordering is total and lexicographic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(String);

/// Rejected variable name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvalidVarName(pub String);

impl fmt::Display for InvalidVarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid variable name: {:?}", self.0)
    }
}

/// `true` when `name` is a well-formed variable name.
pub fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars().peekable();
    match chars.peek() {
        Some(c) if c.is_ascii_alphabetic() || *c == '_' => {}
        _ => return false,
    }
    let mut primes_started = false;
    for c in chars {
        if c == '\'' {
            primes_started = true;
        } else if primes_started || !(c.is_ascii_alphanumeric() || c == '_') {
            return false;
        }
    }
    true
}

impl Var {
    pub fn new(name: impl Into<String>) -> Result<Self, InvalidVarName> {
        let name = name.into();
        if is_valid_name(&name) {
            Ok(Var(name))
        } else {
            Err(InvalidVarName(name))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl core::str::FromStr for Var {
    type Err = InvalidVarName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Var::new(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valid_names() {
        for name in ["x", "o'", "o''", "TP_ped", "x1_a", "_t", "dCas9"] {
            assert!(Var::new(name).is_ok(), "{name} should be valid");
        }
    }

    #[test]
    fn invalid_names() {
        for name in ["", "1x", "a-b", "a b", "x'y", "'x", "é"] {
            assert!(Var::new(name).is_err(), "{name} should be invalid");
        }
    }

    #[test]
    fn ordering_is_lexicographic() {
        let a = Var::new("a").unwrap();
        let b = Var::new("ab").unwrap();
        assert!(a < b);
    }
}
