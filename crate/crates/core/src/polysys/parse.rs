//! Line-oriented polynomial-system text format.
//!
//! ```text
//! # comment
//! vars: x1 x2
//! eq: 3/2*x1^2*x2 - x2 + 1 = 0
//! eq: x1 = 1/4
//! ```
//!
//! Each `eq:` line is `lhs = rhs`; the stored equation is `lhs - rhs`.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::One;

use super::{Monomial, PolySystem, Polynomial};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Eq,
}

struct Lexed {
    tok: Tok,
    col: usize,
}

fn lex(line_no: usize, text: &str, col0: usize) -> Result<Vec<Lexed>> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let col = col0 + i;
        let single = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Lexed { tok, col });
            i += 1;
        } else if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let v: BigInt = text[start..i].parse().expect("ascii digits");
            out.push(Lexed { tok: Tok::Int(v), col });
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Lexed {
                tok: Tok::Ident(text[start..i].to_string()),
                col,
            });
        } else {
            return Err(Error::syntax(
                line_no,
                col,
                format!("unexpected character `{}`", c as char),
            ));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Lexed],
    pos: usize,
    line: usize,
    end_col: usize,
    vars: &'a HashMap<String, usize>,
    n: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|l| &l.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |l| l.col)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::syntax(self.line, self.col(), msg)
    }

    fn bump(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.pos).map(|l| &l.tok);
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = Polynomial::zero(self.n);
        let mut sign = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                -Rational::one()
            }
            Some(Tok::Plus) => {
                self.bump();
                Rational::one()
            }
            _ => Rational::one(),
        };
        loop {
            let term = self.term()?;
            acc = &acc + &term.scale(&sign);
            sign = match self.peek() {
                Some(Tok::Plus) => Rational::one(),
                Some(Tok::Minus) => -Rational::one(),
                _ => return Ok(acc),
            };
            self.bump();
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut coeff = Rational::one();
        let mut exps = vec![0u32; self.n];
        let mut need_factor = true;
        if let Some(Tok::Int(_)) = self.peek() {
            coeff = self.coefficient()?;
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                }
                _ => need_factor = false,
            }
        }
        if need_factor {
            self.factor(&mut exps)?;
            while let Some(Tok::Star) = self.peek() {
                self.bump();
                self.factor(&mut exps)?;
            }
        }
        Ok(Polynomial::from_terms(self.n, [(Monomial::new(exps), coeff)]))
    }

    fn coefficient(&mut self) -> Result<Rational> {
        let Some(Tok::Int(p)) = self.bump().cloned() else {
            unreachable!("caller checked for an integer");
        };
        if let Some(Tok::Slash) = self.peek() {
            self.bump();
            match self.bump().cloned() {
                Some(Tok::Int(q)) if q != BigInt::from(0) => Ok(Rational::new(p, q)),
                Some(Tok::Int(_)) => {
                    self.pos -= 1;
                    Err(self.err("zero denominator"))
                }
                _ => {
                    self.pos -= 1;
                    Err(self.err("expected denominator after `/`"))
                }
            }
        } else {
            Ok(Rational::from_integer(p))
        }
    }

    fn factor(&mut self, exps: &mut [u32]) -> Result<()> {
        let col = self.col();
        let name = match self.bump().cloned() {
            Some(Tok::Ident(name)) => name,
            _ => {
                self.pos -= 1;
                return Err(self.err("expected a variable or coefficient"));
            }
        };
        let &idx = self.vars.get(&name).ok_or_else(|| {
            if parse_var_name(&name).is_some() {
                Error::UnknownVariable {
                    line: self.line,
                    col,
                    name: name.clone(),
                }
            } else {
                Error::syntax(self.line, col, format!("`{name}` is not a variable name"))
            }
        })?;
        let mut e = 1u32;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            match self.bump().cloned() {
                Some(Tok::Int(v)) => {
                    e = u32::try_from(v).map_err(|_| Error::syntax(self.line, col, "exponent too large"))?;
                }
                _ => {
                    self.pos -= 1;
                    return Err(self.err("expected exponent after `^`"));
                }
            }
        }
        exps[idx] += e;
        Ok(())
    }
}

fn parse_var_name(s: &str) -> Option<u64> {
    let k: u64 = s.strip_prefix('x')?.parse().ok()?;
    (k > 0 && !s[1..].starts_with('0')).then_some(k)
}

/// Parse a polynomial system from its text form.
pub fn parse_system(text: &str) -> Result<PolySystem> {
    let mut vars: Option<HashMap<String, usize>> = None;
    let mut polys = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let indent = raw.len() - trimmed.len();
        if let Some(rest) = trimmed.strip_prefix("vars:") {
            if vars.is_some() {
                return Err(Error::syntax(line_no, indent + 1, "duplicate `vars:` line"));
            }
            vars = Some(parse_vars(line_no, rest, indent + 6)?);
        } else if let Some(rest) = trimmed.strip_prefix("eq:") {
            let Some(vars) = vars.as_ref() else {
                return Err(Error::syntax(line_no, indent + 1, "`eq:` before `vars:`"));
            };
            let col0 = indent + 4;
            let toks = lex(line_no, rest, col0)?;
            let end_col = col0 + rest.len();
            let mut p = Parser {
                toks: &toks,
                pos: 0,
                line: line_no,
                end_col,
                vars,
                n: vars.len(),
            };
            if p.peek().is_none() || p.peek() == Some(&Tok::Eq) {
                return Err(p.err("missing left side"));
            }
            let lhs = p.expr()?;
            match p.bump() {
                Some(Tok::Eq) => {}
                _ => {
                    p.pos -= 1;
                    return Err(p.err("expected `=`"));
                }
            }
            if p.peek().is_none() {
                return Err(p.err("missing right side"));
            }
            let rhs = p.expr()?;
            if p.peek().is_some() {
                return Err(p.err("trailing tokens"));
            }
            let eq = &lhs - &rhs;
            if eq.is_zero() {
                return Err(Error::ZeroEquation { line: line_no });
            }
            polys.push(eq);
        } else {
            return Err(Error::syntax(
                line_no,
                indent + 1,
                "expected `vars:`, `eq:` or a `#` comment",
            ));
        }
    }
    if vars.is_none() {
        return Err(Error::syntax(last_line.max(1), 1, "missing `vars:` line"));
    }
    if polys.is_empty() {
        return Err(Error::syntax(last_line.max(1), 1, "no `eq:` lines"));
    }
    PolySystem::new(polys)
}

fn parse_vars(line_no: usize, rest: &str, col0: usize) -> Result<HashMap<String, usize>> {
    let mut map = HashMap::new();
    let mut prev = 0u64;
    let mut offset = 0;
    for word in rest.split_whitespace() {
        let start = rest[offset..].find(word).expect("word from split") + offset;
        offset = start + word.len();
        let col = col0 + start;
        let k = parse_var_name(word)
            .ok_or_else(|| Error::syntax(line_no, col, format!("`{word}` is not of the form x<k>")))?;
        if k <= prev {
            return Err(Error::syntax(line_no, col, "variable names must be in ascending order"));
        }
        prev = k;
        let idx = map.len();
        map.insert(word.to_string(), idx);
    }
    if map.is_empty() {
        return Err(Error::syntax(line_no, col0, "no variables declared"));
    }
    Ok(map)
}

/// Render a system in the text format, naming variables `x1..xn`.
pub fn write_system(sys: &PolySystem) -> String {
    let mut out = String::from("vars:");
    for i in 1..=sys.n() {
        write!(out, " x{i}").unwrap();
    }
    out.push('\n');
    for p in sys.polys() {
        writeln!(out, "eq: {p} = 0").unwrap();
    }
    out
}
