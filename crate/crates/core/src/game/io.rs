//! Text serialization of games and exact profiles.
//!
//! ```text
//! players: 2
//! strategies: 2 2
//! payoffs 1:
//!   1 -1 -1 1
//! payoffs 2:
//!   -1 1 1 -1
//! ```
//!
//! Profiles use one `sigma i:` line per player. `#` starts a comment.

use super::{ExactProfile, Game, MixedProfile};
use crate::error::{Error, Result};
use crate::rational::{fmt_rational, parse_number, Rational};

#[derive(Debug, Clone)]
pub(crate) struct Token<'a> {
    pub text: &'a str,
    pub line: usize,
    pub col: usize,
}

/// Whitespace tokens with 1-based positions; `#` comments dropped.
pub(crate) fn tokenize(src: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    for (ln, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut start = None;
        for (pos, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
            if ch.is_whitespace() {
                if let Some(s) = start.take() {
                    out.push(Token {
                        text: &line[s..pos],
                        line: ln + 1,
                        col: line[..s].chars().count() + 1,
                    });
                }
            } else if start.is_none() {
                start = Some(pos);
            }
        }
    }
    out
}

pub(crate) struct Cursor<'a> {
    toks: Vec<Token<'a>>,
    pos: usize,
    end: (usize, usize),
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Self {
        let lines = src.lines().count().max(1);
        Cursor {
            toks: tokenize(src),
            pos: 0,
            end: (lines, 1),
        }
    }

    pub fn peek(&self) -> Option<&Token<'a>> {
        self.toks.get(self.pos)
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn next(&mut self, what: &str) -> Result<Token<'a>> {
        match self.toks.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.clone())
            }
            None => Err(Error::syntax(
                self.end.0,
                self.end.1,
                format!("expected {what}, found end of input"),
            )),
        }
    }

    pub fn expect(&mut self, word: &str) -> Result<Token<'a>> {
        let t = self.next(&format!("`{word}`"))?;
        if t.text != word {
            return Err(Error::syntax(
                t.line,
                t.col,
                format!("expected `{word}`, found `{}`", t.text),
            ));
        }
        Ok(t)
    }

    pub fn usize(&mut self, what: &str) -> Result<usize> {
        let t = self.next(what)?;
        t.text
            .parse()
            .map_err(|_| Error::syntax(t.line, t.col, format!("expected {what}, found `{}`", t.text)))
    }

    /// A 1-based index followed directly by `:`, as in `payoffs 2:`.
    pub fn label_index(&mut self, expected: usize) -> Result<()> {
        let t = self.next("index")?;
        let ok = t
            .text
            .strip_suffix(':')
            .and_then(|s| s.parse::<usize>().ok())
            .is_some_and(|k| k == expected);
        if !ok {
            return Err(Error::syntax(
                t.line,
                t.col,
                format!("expected `{expected}:`, found `{}`", t.text),
            ));
        }
        Ok(())
    }

    pub fn rational(&mut self) -> Result<Rational> {
        let t = self.next("a rational number")?;
        parse_number(t.text)
            .ok_or_else(|| Error::syntax(t.line, t.col, format!("`{}` is not a rational number", t.text)))
    }

    pub fn finish(&self) -> Result<()> {
        match self.peek() {
            Some(t) => Err(Error::syntax(t.line, t.col, format!("unexpected `{}`", t.text))),
            None => Ok(()),
        }
    }
}

/// Wrap `values` into lines of at most `per_line` entries, indented.
pub(crate) fn write_values(out: &mut String, values: &[Rational], per_line: usize) {
    for chunk in values.chunks(per_line.max(1)) {
        out.push(' ');
        for v in chunk {
            out.push(' ');
            out.push_str(&fmt_rational(v));
        }
        out.push('\n');
    }
}

pub fn serialize_game(game: &Game) -> String {
    let mut out = format!("players: {}\nstrategies:", game.players());
    for k in game.strategy_counts() {
        out.push_str(&format!(" {k}"));
    }
    out.push('\n');
    let row = *game.strategy_counts().last().expect("at least one player");
    for i in 0..game.players() {
        out.push_str(&format!("payoffs {}:\n", i + 1));
        write_values(&mut out, game.payoffs(i), row.max(8));
    }
    out
}

pub fn deserialize_game(src: &str) -> Result<Game> {
    let mut cur = Cursor::new(src);
    cur.expect("players:")?;
    let n = cur.usize("player count")?;
    if n == 0 {
        return Err(Error::Unsupported("a game needs at least one player".into()));
    }
    cur.expect("strategies:")?;
    let counts = (0..n)
        .map(|_| cur.usize("strategy count"))
        .collect::<Result<Vec<_>>>()?;
    let size = counts.iter().product();
    let mut payoffs = Vec::with_capacity(n);
    for i in 0..n {
        cur.expect("payoffs")?;
        cur.label_index(i + 1)?;
        let mut values = Vec::with_capacity(size);
        while values.len() < size {
            match cur.peek() {
                Some(t) if t.text == "payoffs" => {
                    return Err(Error::DimensionMismatch {
                        expected: size,
                        got: values.len(),
                    })
                }
                None => {
                    return Err(Error::DimensionMismatch {
                        expected: size,
                        got: values.len(),
                    })
                }
                _ => values.push(cur.rational()?),
            }
        }
        payoffs.push(values);
    }
    cur.finish()?;
    Game::new(counts, payoffs)
}

pub fn write_profile(profile: &ExactProfile) -> String {
    let mut out = String::new();
    for (i, v) in profile.strategies().iter().enumerate() {
        out.push_str(&format!("sigma {}:", i + 1));
        for p in v {
            out.push(' ');
            out.push_str(&fmt_rational(p));
        }
        out.push('\n');
    }
    out
}

/// Parse `sigma i:` lines; entries continue until the next label.
pub fn parse_profile(src: &str) -> Result<ExactProfile> {
    let mut cur = Cursor::new(src);
    let mut strategies = Vec::new();
    while !cur.at_end() {
        cur.expect("sigma")?;
        cur.label_index(strategies.len() + 1)?;
        let mut v = Vec::new();
        while cur.peek().is_some_and(|t| t.text != "sigma") {
            v.push(cur.rational()?);
        }
        strategies.push(v);
    }
    if strategies.is_empty() {
        return Err(Error::syntax(1, 1, "empty profile"));
    }
    MixedProfile::new(strategies)
}
