//! Operator-word grammar used by the CLI.
//!
//! ```text
//! sum   := ['+'|'-'] term (('+'|'-') term)*
//! term  := [rational ['*']] atom+
//! atom  := name ['{' key '=' rational (',' key '=' rational)* '}'] ['[' int ']']
//! ```
//!
//! Atoms in a word act right to left: `"e[0] f[0]"` applies `f_0` first.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::scalar::{parse_rational, render_rational, Rational};

/// Generators that take no mode index.
const MODELESS: &[&str] = &["xi0", "eta0", "d"];
const MODED: &[&str] = &["e", "f", "hp", "hm", "S", "xi", "eta", "Phi", "Psi", "ecl", "fcl", "hcl"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {msg}")]
    Syntax { offset: usize, msg: String },
    #[error("unknown generator '{name}' at offset {offset}")]
    UnknownGenerator { offset: usize, name: String },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::UnknownGenerator { offset, .. } => *offset,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub name: String,
    pub params: BTreeMap<String, Rational>,
    pub mode: Option<i64>,
}

impl Atom {
    pub fn param(&self, key: &str) -> Option<&Rational> {
        self.params.get(key)
    }
}

/// Atoms in written order; the rightmost acts first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    pub atoms: Vec<Atom>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordSum {
    pub terms: Vec<(Rational, Word)>,
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    fn error(&self, msg: String) -> ParseError {
        ParseError::Syntax { offset: self.pos, msg }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if !f(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.src[start..self.pos]
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let neg = self.eat_raw('-') || {
            self.eat_raw('+');
            false
        };
        let digits = self.take_while(|c| c.is_ascii_digit());
        if digits.is_empty() {
            return Err(self.error("expected integer".into()));
        }
        let n: i64 = digits.parse().map_err(|_| ParseError::Syntax {
            offset: start,
            msg: "integer out of range".into(),
        })?;
        Ok(if neg { -n } else { n })
    }

    fn eat_raw(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let text = self.take_while(|c| c.is_ascii_digit() || c == '/' || c == '-' || c == '+');
        parse_rational(text).ok_or(ParseError::Syntax {
            offset: start,
            msg: format!("expected rational, found '{text}'"),
        })
    }
}

fn atom(cur: &mut Cursor) -> Result<Atom, ParseError> {
    cur.skip_ws();
    let start = cur.pos;
    let name = cur.take_while(|c| c.is_ascii_alphanumeric()).to_string();
    if name.is_empty() {
        return Err(cur.error("expected generator".into()));
    }
    let moded = if MODED.contains(&name.as_str()) {
        true
    } else if MODELESS.contains(&name.as_str()) {
        false
    } else {
        return Err(ParseError::UnknownGenerator { offset: start, name });
    };
    let mut params = BTreeMap::new();
    if cur.eat('{') {
        loop {
            cur.skip_ws();
            let key = cur.take_while(|c| c.is_ascii_alphanumeric()).to_string();
            if key.is_empty() {
                return Err(cur.error("expected parameter name".into()));
            }
            cur.expect('=')?;
            let v = cur.rational()?;
            params.insert(key, v);
            if cur.eat('}') {
                break;
            }
            cur.expect(',')?;
        }
    }
    let mode = if moded {
        cur.expect('[')?;
        let m = cur.integer()?;
        cur.expect(']')?;
        Some(m)
    } else if cur.eat('[') {
        let m = cur.integer()?;
        cur.expect(']')?;
        Some(m)
    } else {
        None
    };
    Ok(Atom { name, params, mode })
}

fn starts_atom(cur: &mut Cursor) -> bool {
    cur.skip_ws();
    cur.peek().is_some_and(|c| c.is_ascii_alphabetic())
}

pub fn parse_expr(text: &str) -> Result<WordSum, ParseError> {
    let mut cur = Cursor { src: text, pos: 0 };
    let mut terms = Vec::new();
    let mut sign = if cur.eat('-') {
        -1
    } else {
        cur.eat('+');
        1
    };
    loop {
        cur.skip_ws();
        let mut coeff = Rational::from_integer(sign.into());
        if cur.peek().is_some_and(|c| c.is_ascii_digit()) {
            coeff *= cur.rational()?;
            cur.eat('*');
        }
        let mut atoms = vec![atom(&mut cur)?];
        while starts_atom(&mut cur) {
            atoms.push(atom(&mut cur)?);
        }
        terms.push((coeff, Word { atoms }));
        cur.skip_ws();
        if cur.eat('+') {
            sign = 1;
        } else if cur.eat('-') {
            sign = -1;
        } else if cur.peek().is_none() {
            break;
        } else {
            return Err(cur.error("expected '+', '-' or end of input".into()));
        }
    }
    Ok(WordSum { terms })
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if !self.params.is_empty() {
            let ps: Vec<String> = self
                .params
                .iter()
                .map(|(k, v)| format!("{k}={}", render_rational(v)))
                .collect();
            write!(f, "{{{}}}", ps.join(","))?;
        }
        if let Some(m) = self.mode {
            write!(f, "[{m}]")?;
        }
        Ok(())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.atoms.iter().map(Atom::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rational};

    #[test]
    fn product_word() {
        let s = parse_expr("e[0] f[0]").unwrap();
        assert_eq!(s.terms.len(), 1);
        let w = &s.terms[0].1;
        assert_eq!(w.atoms[0].name, "e");
        assert_eq!(w.atoms[1].name, "f");
    }

    #[test]
    fn sum_of_atoms() {
        let s = parse_expr("hp[1] - hm[-1]").unwrap();
        assert_eq!(s.terms.len(), 2);
        assert_eq!(s.terms[1].0, int(-1));
        assert_eq!(s.terms[1].1.atoms[0].mode, Some(-1));
    }

    #[test]
    fn truncated_input() {
        assert_eq!(parse_expr("e[").unwrap_err().offset(), 2);
    }

    #[test]
    fn params_and_coefficients() {
        let s = parse_expr("-3/2 S{J=2}[0] eta0 + 2*d").unwrap();
        assert_eq!(s.terms[0].0, rational(-3, 2));
        assert_eq!(s.terms[0].1.atoms[0].param("J"), Some(&int(2)));
        assert_eq!(s.terms[0].1.atoms[1].mode, None);
        assert_eq!(s.terms[1].0, int(2));
        assert_eq!(s.terms[0].1.to_string(), "S{J=2}[0] eta0");
    }

    #[test]
    fn unknown_generator() {
        assert!(matches!(
            parse_expr("e[0] g[1]"),
            Err(ParseError::UnknownGenerator { offset: 5, .. })
        ));
    }
}
