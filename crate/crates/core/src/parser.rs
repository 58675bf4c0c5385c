//! Text grammar for linear inequality terms.
//!
//! ```text
//! term     := expr ("<=" | ">=" | "=") expr
//! expr     := signed ( ("+" | "-") signed )*
//! signed   := [("+" | "-")] atom
//! atom     := number | variable | number "*" variable
//! number   := decimal literal (optional fraction, optional exponent)
//! variable := [A-Za-z_][A-Za-z0-9_]*"'"*
//! ```
//!
//! Whitespace is insignificant. `a <= b` yields one term, `a >= b` the
//! reversed term, and `a = b` the pair of both directions.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::term::PolyhedralTerm;
use crate::var::Var;

/// Parse failure, with the byte offset of the offending token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    /// Input that does not match the grammar.
    Syntax { position: usize, message: String },
    /// A product of two variables; the grammar is linear only.
    Nonlinear { position: usize },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { position, message } => {
                write!(f, "parse error at {position}: {message}")
            }
            ParseError::Nonlinear { position } => {
                write!(f, "nonlinear product of variables at {position}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Le,
    Ge,
    Eq,
}

fn tokenize(s: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\r' | '\n' => i += 1,
            '+' => {
                out.push((i, Token::Plus));
                i += 1;
            }
            '-' => {
                out.push((i, Token::Minus));
                i += 1;
            }
            '*' => {
                out.push((i, Token::Star));
                i += 1;
            }
            '<' | '>' => {
                if i + 1 < bytes.len() && bytes[i + 1] == b'=' {
                    out.push((i, if c == '<' { Token::Le } else { Token::Ge }));
                    i += 2;
                } else {
                    return Err(ParseError::Syntax {
                        position: i,
                        message: "strict inequalities are not supported; use <= or >=".to_string(),
                    });
                }
            }
            '=' => {
                out.push((i, Token::Eq));
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                // optional exponent
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &s[start..i];
                let value: f64 = text.parse().map_err(|_| ParseError::Syntax {
                    position: start,
                    message: alloc::format!("malformed number {text:?}"),
                })?;
                out.push((start, Token::Number(value)));
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                while i < bytes.len() && bytes[i] == b'\'' {
                    i += 1;
                }
                out.push((start, Token::Ident(s[start..i].to_string())));
            }
            _ => {
                return Err(ParseError::Syntax {
                    position: i,
                    message: alloc::format!("unexpected character {c:?}"),
                })
            }
        }
    }
    Ok(out)
}

/// A linear form `coeffs . vars + constant` accumulated during parsing.
#[derive(Default)]
struct LinearForm {
    coeffs: BTreeMap<Var, f64>,
    constant: f64,
}

impl LinearForm {
    fn add_var(&mut self, v: Var, c: f64) {
        *self.coeffs.entry(v).or_insert(0.0) += c;
    }
}

struct Parser<'a> {
    tokens: &'a [(usize, Token)],
    pos: usize,
    len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn position(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(p, _)| *p)
            .unwrap_or(self.len)
    }

    fn bump(&mut self) -> Option<&Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t);
        self.pos += 1;
        t
    }

    fn syntax(&self, message: &str) -> ParseError {
        ParseError::Syntax {
            position: self.position(),
            message: message.to_string(),
        }
    }

    /// signed := [+|-] atom; returns its contribution with `sign` applied.
    fn parse_signed(&mut self, form: &mut LinearForm, outer: f64) -> Result<(), ParseError> {
        let mut sign = outer;
        match self.peek() {
            Some(Token::Plus) => {
                self.bump();
            }
            Some(Token::Minus) => {
                sign = -sign;
                self.bump();
            }
            _ => {}
        }
        let pos = self.position();
        match self.bump().cloned() {
            Some(Token::Number(n)) => {
                if let Some(Token::Star) = self.peek() {
                    self.bump();
                    let vpos = self.position();
                    match self.bump().cloned() {
                        Some(Token::Ident(name)) => {
                            let var = Var::new(name).map_err(|e| ParseError::Syntax {
                                position: vpos,
                                message: e.to_string(),
                            })?;
                            self.reject_second_factor()?;
                            form.add_var(var, sign * n);
                        }
                        _ => return Err(self.syntax("expected variable after '*'")),
                    }
                } else {
                    form.constant += sign * n;
                }
            }
            Some(Token::Ident(name)) => {
                let var = Var::new(name).map_err(|e| ParseError::Syntax {
                    position: pos,
                    message: e.to_string(),
                })?;
                self.reject_second_factor()?;
                form.add_var(var, sign);
            }
            _ => return Err(self.syntax("expected number or variable")),
        }
        Ok(())
    }

    /// A '*' after a variable can only start a variable-by-variable product.
    fn reject_second_factor(&self) -> Result<(), ParseError> {
        if let Some(Token::Star) = self.peek() {
            return Err(ParseError::Nonlinear {
                position: self.position(),
            });
        }
        Ok(())
    }

    fn parse_expr(&mut self, form: &mut LinearForm, sign: f64) -> Result<(), ParseError> {
        self.parse_signed(form, sign)?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    self.parse_signed(form, sign)?;
                }
                Some(Token::Minus) => {
                    self.bump();
                    self.parse_signed(form, -sign)?;
                }
                _ => return Ok(()),
            }
        }
    }
}

/// Parses one relation into its inequality terms: one term for `<=`/`>=`,
/// two for `=`. All variables are moved to the left-hand side, constants to
/// the right, and like terms combined.
pub fn parse_term(s: &str) -> Result<Vec<PolyhedralTerm>, ParseError> {
    let tokens = tokenize(s)?;
    let mut p = Parser {
        tokens: &tokens,
        pos: 0,
        len: s.len(),
    };
    // lhs - rhs accumulated into one form around the relation operator
    let mut form = LinearForm::default();
    p.parse_expr(&mut form, 1.0)?;
    let relation = match p.bump().cloned() {
        Some(t @ (Token::Le | Token::Ge | Token::Eq)) => t,
        _ => {
            p.pos -= 1;
            return Err(p.syntax("expected <=, >= or ="));
        }
    };
    p.parse_expr(&mut form, -1.0)?;
    if p.peek().is_some() {
        return Err(p.syntax("trailing input after relation"));
    }

    // form: lhs - rhs (<=|>=|=) 0, i.e. coeffs.vars <= -constant for Le.
    let le = PolyhedralTerm::new(form.coeffs.clone(), -form.constant);
    Ok(match relation {
        Token::Le => vec![le],
        Token::Ge => vec![le.flipped()],
        Token::Eq => vec![le.clone(), le.flipped()],
        _ => unreachable!(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(name: &str) -> Var {
        Var::new(name).unwrap()
    }

    #[test]
    fn simple_inequality() {
        let t = parse_term("3*x + 2*y <= 5").unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].coefficient(&v("x")), 3.0);
        assert_eq!(t[0].coefficient(&v("y")), 2.0);
        assert_eq!(t[0].constant(), 5.0);
    }

    #[test]
    fn variables_move_left() {
        let t = parse_term("o' <= o + 1").unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].coefficient(&v("o'")), 1.0);
        assert_eq!(t[0].coefficient(&v("o")), -1.0);
        assert_eq!(t[0].constant(), 1.0);
    }

    #[test]
    fn equality_expands_to_pair() {
        let t = parse_term("0.03*Sal - xRFP + 0.02 = 0").unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[0].coefficient(&v("Sal")), 0.03);
        assert_eq!(t[0].coefficient(&v("xRFP")), -1.0);
        assert_eq!(t[0].constant(), -0.02);
        assert_eq!(t[1].coefficient(&v("Sal")), -0.03);
        assert_eq!(t[1].coefficient(&v("xRFP")), 1.0);
        assert_eq!(t[1].constant(), 0.02);
    }

    #[test]
    fn ge_reverses() {
        let t = parse_term("0.6 <= TP_ped").unwrap();
        assert_eq!(t[0].coefficient(&v("TP_ped")), -1.0);
        assert_eq!(t[0].constant(), -0.6);
        let u = parse_term("TP_ped >= 0.6").unwrap();
        assert_eq!(t, u);
    }

    #[test]
    fn like_terms_combine() {
        let t = parse_term("x + x - 0.5*x <= 1 - 2").unwrap();
        assert_eq!(t[0].coefficient(&v("x")), 1.5);
        assert_eq!(t[0].constant(), -1.0);
    }

    #[test]
    fn exponents_and_primes() {
        let t = parse_term("1e-2*x'' <= 2.5e1").unwrap();
        assert_eq!(t[0].coefficient(&v("x''")), 0.01);
        assert_eq!(t[0].constant(), 25.0);
    }

    #[test]
    fn nonlinear_rejected() {
        match parse_term("x * y <= 1") {
            Err(ParseError::Nonlinear { .. }) => {}
            other => panic!("expected nonlinear error, got {other:?}"),
        }
        match parse_term("2*x*y <= 1") {
            Err(ParseError::Nonlinear { .. }) => {}
            other => panic!("expected nonlinear error, got {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_term("x <_ 1") {
            Err(ParseError::Syntax { position, .. }) => assert_eq!(position, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(parse_term("x < 1").is_err());
        assert!(parse_term("<= 1").is_err());
        assert!(parse_term("x <= ").is_err());
        assert!(parse_term("x <= 1 1").is_err());
        assert!(parse_term("").is_err());
    }
}
