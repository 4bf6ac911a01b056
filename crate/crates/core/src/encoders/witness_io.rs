//! Witness text format.
//!
//! ```text
//! method: 3p
//! formats: 2 2 3
//! system:
//! vars: x1
//! eq: 1*x1^2 - 1*x1 + 3/16 = 0
//! map:
//! s1.1 = x1
//! chain:
//! 1: s2.1 x1 1 -1 4 -2 1/4 1/2
//! 2: 0 x1 @1 3/16
//! fixed:
//! s3.1 = 1/3
//! simplex: 0
//! ```
//!
//! A chain line is `index: target mult operand addend [s δ lo hi]`, with
//! target `0` for a constraint, `mult` either `x<k>` or `1`, and operands
//! either a rational or `@<step>`. A fixed line is
//! `slot = constant [coeff*slot ...]`. An optional `normalize: n` line
//! records the cube map used to move the system into the box.

use std::collections::BTreeMap;

use super::{
    fmt_operand, fmt_slot, AffineExpr, AffineScaling, ChainStep, EncodingWitness, Method, Operand, StepTarget,
};
use crate::error::{Error, Result};
use crate::game::io::{tokenize, Token};
use crate::polysys::{parse_system, write_system, CoordinateMap, Monomial};
use crate::rational::{fmt_rational, parse_number, Rational};
use crate::synth::Slot;

fn fmt_monomial(m: &Monomial) -> String {
    let parts: Vec<String> = m
        .exponents()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                format!("x{}", i + 1)
            } else {
                format!("x{}^{}", i + 1, e)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

pub fn write_witness(w: &EncodingWitness) -> String {
    let mut out = format!("method: {}\nformats:", w.method);
    for k in &w.formats {
        out.push_str(&format!(" {k}"));
    }
    out.push('\n');
    if let Some(map) = &w.normalization {
        out.push_str(&format!("normalize: {}\n", map.n()));
    }
    out.push_str("system:\n");
    out.push_str(&write_system(&w.system));
    out.push_str("map:\n");
    for (slot, mono) in &w.map {
        out.push_str(&format!("{} = {}\n", fmt_slot(*slot), fmt_monomial(mono)));
    }
    out.push_str("chain:\n");
    for (t, (step, sc)) in w.chain.iter().enumerate() {
        let target = match step.target {
            StepTarget::Define(s) => fmt_slot(s),
            StepTarget::Constrain => "0".into(),
        };
        let mult = step.mult.map_or("1".into(), |v| format!("x{}", v + 1));
        out.push_str(&format!(
            "{}: {} {} {} {}",
            t + 1,
            target,
            mult,
            fmt_operand(&step.operand),
            fmt_operand(&step.addend)
        ));
        if let Some(sc) = sc {
            for v in [&sc.s, &sc.delta, &sc.lo, &sc.hi] {
                out.push(' ');
                out.push_str(&fmt_rational(v));
            }
        }
        out.push('\n');
    }
    out.push_str("fixed:\n");
    for (slot, expr) in &w.fixed {
        out.push_str(&format!("{} = {}", fmt_slot(*slot), fmt_rational(&expr.constant)));
        for (s, c) in &expr.terms {
            out.push_str(&format!(" {}*{}", fmt_rational(c), fmt_slot(*s)));
        }
        out.push('\n');
    }
    out.push_str(&format!("simplex: {}\n", w.simplex));
    out
}

fn err(t: &Token<'_>, msg: impl Into<String>) -> Error {
    Error::syntax(t.line, t.col, msg)
}

fn parse_slot(t: &Token<'_>, formats: &[usize]) -> Result<Slot> {
    parse_slot_text(t, t.text, formats)
}

fn parse_slot_text(t: &Token<'_>, text: &str, formats: &[usize]) -> Result<Slot> {
    let bad = || err(t, format!("expected a slot like s2.1, found `{text}`"));
    let (p, s) = text.strip_prefix('s').and_then(|r| r.split_once('.')).ok_or_else(bad)?;
    let p: usize = p.parse().map_err(|_| bad())?;
    let s: usize = s.parse().map_err(|_| bad())?;
    if p == 0 || p > formats.len() || s == 0 || s >= formats[p - 1] {
        return Err(err(t, format!("slot `{text}` does not exist for formats {formats:?}")));
    }
    Ok((p - 1, s))
}

fn parse_var(t: &Token<'_>, text: &str, n: usize) -> Result<usize> {
    let k: usize = text
        .strip_prefix('x')
        .and_then(|r| r.parse().ok())
        .ok_or_else(|| err(t, format!("expected a variable like x1, found `{text}`")))?;
    if k == 0 || k > n {
        return Err(err(t, format!("variable `{text}` out of range")));
    }
    Ok(k - 1)
}

fn parse_monomial(t: &Token<'_>, n: usize) -> Result<Monomial> {
    let mut e = vec![0u32; n];
    if t.text == "1" {
        return Ok(Monomial::new(e));
    }
    for factor in t.text.split('*') {
        let (v, p) = factor.split_once('^').unwrap_or((factor, "1"));
        let i = parse_var(t, v, n)?;
        let p: u32 = p.parse().map_err(|_| err(t, format!("bad exponent in `{}`", t.text)))?;
        e[i] += p;
    }
    Ok(Monomial::new(e))
}

fn parse_rat(t: &Token<'_>) -> Result<Rational> {
    parse_number(t.text).ok_or_else(|| err(t, format!("`{}` is not a rational number", t.text)))
}

fn parse_operand(t: &Token<'_>, before: usize) -> Result<Operand> {
    match t.text.strip_prefix('@') {
        Some(k) => {
            let k: usize = k.parse().map_err(|_| err(t, "bad step reference"))?;
            if k == 0 || k > before {
                return Err(err(t, format!("step reference @{k} does not point to an earlier step")));
            }
            Ok(Operand::Step(k - 1))
        }
        None => Ok(Operand::Const(parse_rat(t)?)),
    }
}

#[derive(PartialEq)]
enum Section {
    Header,
    System,
    Map,
    Chain,
    Fixed,
}

pub fn parse_witness(src: &str) -> Result<EncodingWitness> {
    let mut lines: BTreeMap<usize, Vec<Token<'_>>> = BTreeMap::new();
    for t in tokenize(src) {
        lines.entry(t.line).or_default().push(t);
    }
    let mut method = None;
    let mut formats: Option<Vec<usize>> = None;
    let mut normalize = None;
    let mut simplex = None;
    let mut system_text = String::new();
    let mut system_line = 0;
    let mut system = None;
    let mut map = Vec::new();
    let mut chain: Vec<(ChainStep, Option<AffineScaling>)> = Vec::new();
    let mut fixed = Vec::new();
    let mut section = Section::Header;

    let need_formats = |formats: &Option<Vec<usize>>, t: &Token<'_>| -> Result<Vec<usize>> {
        formats.clone().ok_or_else(|| err(t, "`formats:` must come first"))
    };

    for toks in lines.values() {
        let head = &toks[0];
        let rest = &toks[1..];
        let single = |what: &str| -> Result<&Token<'_>> {
            match rest {
                [t] => Ok(t),
                _ => Err(err(head, format!("`{}` takes one {what}", head.text))),
            }
        };
        match head.text {
            "method:" => {
                let t = single("method name")?;
                method = Some(t.text.parse::<Method>().map_err(|e| err(t, e.to_string()))?);
                section = Section::Header;
                continue;
            }
            "formats:" => {
                let f = rest
                    .iter()
                    .map(|t| {
                        t.text
                            .parse::<usize>()
                            .ok()
                            .filter(|&k| k > 0)
                            .ok_or_else(|| err(t, "bad strategy count"))
                    })
                    .collect::<Result<Vec<_>>>()?;
                if f.is_empty() {
                    return Err(err(head, "no strategy counts"));
                }
                formats = Some(f);
                section = Section::Header;
                continue;
            }
            "normalize:" => {
                let t = single("dimension")?;
                let n: usize = t.text.parse().map_err(|_| err(t, "bad dimension"))?;
                normalize = Some(CoordinateMap::new(n));
                section = Section::Header;
                continue;
            }
            "simplex:" => {
                let t = single("dimension")?;
                simplex = Some(t.text.parse::<usize>().map_err(|_| err(t, "bad dimension"))?);
                section = Section::Header;
                continue;
            }
            "system:" | "map:" | "chain:" | "fixed:" if rest.is_empty() => {
                if section == Section::System {
                    system = Some(parse_system(&system_text).map_err(|e| shift(e, system_line))?);
                }
                section = match head.text {
                    "system:" => {
                        system_line = head.line;
                        Section::System
                    }
                    "map:" => Section::Map,
                    "chain:" => Section::Chain,
                    _ => Section::Fixed,
                };
                continue;
            }
            _ => {}
        }
        match section {
            Section::Header => return Err(err(head, format!("unexpected `{}`", head.text))),
            Section::System => {
                while system_text.lines().count() + system_line + 1 < head.line {
                    system_text.push('\n');
                }
                let words: Vec<&str> = toks.iter().map(|t| t.text).collect();
                system_text.push_str(&words.join(" "));
                system_text.push('\n');
            }
            Section::Map => {
                let f = need_formats(&formats, head)?;
                let n = system
                    .as_ref()
                    .map(|s: &crate::polysys::PolySystem| s.n())
                    .ok_or_else(|| err(head, "`system:` must precede `map:`"))?;
                match rest {
                    [eq, mono] if eq.text == "=" => map.push((parse_slot(head, &f)?, parse_monomial(mono, n)?)),
                    _ => return Err(err(head, "expected `slot = monomial`")),
                }
            }
            Section::Chain => {
                let f = need_formats(&formats, head)?;
                let n = system
                    .as_ref()
                    .map(|s| s.n())
                    .ok_or_else(|| err(head, "`system:` must precede `chain:`"))?;
                let expect = format!("{}:", chain.len() + 1);
                if head.text != expect {
                    return Err(err(head, format!("expected step label `{expect}`")));
                }
                let (target, mult, op, add, scal) = match rest {
                    [a, b, c, d] => (a, b, c, d, None),
                    [a, b, c, d, s, dl, lo, hi] => (a, b, c, d, Some([s, dl, lo, hi])),
                    _ => return Err(err(head, "a chain step has 4 or 8 fields")),
                };
                let target = if target.text == "0" {
                    StepTarget::Constrain
                } else {
                    StepTarget::Define(parse_slot(target, &f)?)
                };
                let mult = if mult.text == "1" {
                    None
                } else {
                    Some(parse_var(mult, mult.text, n)?)
                };
                let step = ChainStep {
                    target,
                    mult,
                    operand: parse_operand(op, chain.len())?,
                    addend: parse_operand(add, chain.len())?,
                };
                let scaling = match scal {
                    Some([s, dl, lo, hi]) => {
                        let sc = AffineScaling {
                            s: parse_rat(s)?,
                            delta: parse_rat(dl)?,
                            lo: parse_rat(lo)?,
                            hi: parse_rat(hi)?,
                        };
                        if num_traits::Zero::is_zero(&sc.s) {
                            return Err(err(s, "scaling factor must be nonzero"));
                        }
                        Some(sc)
                    }
                    None => None,
                };
                if step.is_define() != scaling.is_some() {
                    return Err(err(head, "define steps carry a scaling, constraints do not"));
                }
                chain.push((step, scaling));
            }
            Section::Fixed => {
                let f = need_formats(&formats, head)?;
                let (eq, konst, terms) = match rest {
                    [eq, c, terms @ ..] => (eq, c, terms),
                    _ => return Err(err(head, "expected `slot = constant ...`")),
                };
                if eq.text != "=" {
                    return Err(err(eq, "expected `=`"));
                }
                let terms = terms
                    .iter()
                    .map(|t| {
                        let (c, s) = t.text.split_once('*').ok_or_else(|| err(t, "expected coeff*slot"))?;
                        let c = parse_number(c).ok_or_else(|| err(t, "bad coefficient"))?;
                        Ok((parse_slot_text(t, s, &f)?, c))
                    })
                    .collect::<Result<Vec<_>>>()?;
                fixed.push((
                    parse_slot(head, &f)?,
                    AffineExpr {
                        constant: parse_rat(konst)?,
                        terms,
                    },
                ));
            }
        }
    }
    if section == Section::System {
        system = Some(parse_system(&system_text).map_err(|e| shift(e, system_line))?);
    }
    let missing = |what: &str| Error::syntax(1, 1, format!("witness has no `{what}` line"));
    let system = system.ok_or_else(|| missing("system:"))?;
    if let Some(map) = &normalize {
        if map.n() != system.n() {
            return Err(Error::DimensionMismatch {
                expected: system.n(),
                got: map.n(),
            });
        }
    }
    Ok(EncodingWitness {
        method: method.ok_or_else(|| missing("method:"))?,
        formats: formats.ok_or_else(|| missing("formats:"))?,
        system,
        normalization: normalize,
        map,
        chain,
        fixed,
        simplex: simplex.ok_or_else(|| missing("simplex:"))?,
    })
}

/// Re-anchor errors from the embedded system block to file lines.
fn shift(e: Error, offset: usize) -> Error {
    match e {
        Error::Syntax { line, col, msg } => Error::Syntax {
            line: line + offset,
            col,
            msg,
        },
        Error::UnknownVariable { line, col, name } => Error::UnknownVariable {
            line: line + offset,
            col,
            name,
        },
        Error::ZeroEquation { line } => Error::ZeroEquation { line: line + offset },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoders::{encode_binary, encode_three_player, encode_univariate};
    use crate::polysys::parse_system;
    use crate::rational::{int, rat};

    #[test]
    fn quadratic_witness_text() {
        let s = parse_system("vars: x1\neq: x1^2 - x1 + 3/16 = 0").unwrap();
        let (_, w) = encode_three_player(&s).unwrap();
        let text = write_witness(&w);
        assert_eq!(
            text,
            "method: 3p\nformats: 2 2 3\nsystem:\nvars: x1\neq: 1*x1^2 - 1*x1 + 3/16 = 0\nmap:\ns1.1 = x1\nchain:\n\
             1: s2.1 x1 1 -1 4 -2 1/4 1/2\n2: 0 x1 @1 3/16\nfixed:\ns3.1 = 1/3\ns3.2 = 1/3\nsimplex: 0\n"
        );
        assert_eq!(parse_witness(&text).unwrap(), w);
    }

    #[test]
    fn all_methods_round_trip() {
        let s = parse_system("vars: x1 x2\neq: x1^2*x2 - x2 + 1/8 = 0\neq: x1 + x2 - 3/4 = 0").unwrap();
        let mut ws = vec![encode_three_player(&s).unwrap().1, encode_binary(&s, false).unwrap().1];
        ws.push(encode_univariate(&[rat(-1, 8), int(1), int(-2), int(1)]).unwrap().1);
        let mut normalized = ws[0].clone();
        normalized.normalization = Some(CoordinateMap::new(2));
        ws.push(normalized);
        for w in ws {
            assert_eq!(parse_witness(&write_witness(&w)).unwrap(), w);
        }
    }

    #[test]
    fn errors_carry_positions() {
        let good = "method: 1d\nformats: 2 2 2\nsystem:\nvars: x1\neq: x1 - 1/2 = 0\nmap:\ns1.1 = x1\nchain:\n1: 0 x1 1 -1/2\nfixed:\nsimplex: 0\n";
        assert!(parse_witness(good).is_ok());
        let bad_slot = good.replace("s1.1 = x1", "s1.2 = x1");
        assert!(matches!(
            parse_witness(&bad_slot),
            Err(Error::Syntax { line: 7, col: 1, .. })
        ));
        let bad_ref = good.replace("1: 0 x1 1 -1/2", "1: 0 x1 @1 -1/2");
        assert!(matches!(
            parse_witness(&bad_ref),
            Err(Error::Syntax { line: 9, col: 9, .. })
        ));
        let bad_eq = good.replace("eq: x1 - 1/2 = 0", "eq: x2 - 1/2 = 0");
        assert!(matches!(
            parse_witness(&bad_eq),
            Err(Error::UnknownVariable { line: 5, .. })
        ));
        assert!(parse_witness(&good.replace("simplex: 0\n", "")).is_err());
    }
}
