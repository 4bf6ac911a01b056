//! Constructions turning a polynomial system into a game whose totally
//! mixed equilibria project onto the system's solutions in the box.
//!
//! * [`encode_three_player`]: three players, Horner chain through Bob/Critter.
//! * [`encode_binary`]: binary players, one per power of each variable.
//! * [`encode_univariate`]: three players for a single univariate polynomial.
//!
//! Each returns the [`Game`] together with an [`EncodingWitness`] that
//! replays a variety point into a full mixed profile.

mod binary;
mod three;
mod univariate;
mod witness_io;

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::game::{Game, MixedProfile};
use crate::polysys::{normalize_to_box, Box, CoordinateMap, Interval, Monomial, PolySystem};
use crate::rational::{fmt_rational, rat, Rational, Scalar};
pub use crate::synth::Slot;

pub use binary::{assign_equations, binary_equations, encode_binary, BinarySystem, EquationAssignment, PlayerRole};
pub use three::{build_chain_3p, encode_three_player};
pub use univariate::encode_univariate;
pub use witness_io::{parse_witness, write_witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ThreePlayer,
    Binary,
    Univariate,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ThreePlayer => "3p",
            Method::Binary => "np",
            Method::Univariate => "1d",
        })
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "3p" => Ok(Method::ThreePlayer),
            "np" => Ok(Method::Binary),
            "1d" => Ok(Method::Univariate),
            other => Err(Error::Unsupported(format!(
                "unknown method `{other}` (expected 3p, np or 1d)"
            ))),
        }
    }
}

/// A chain value: a constant or the raw value of an earlier step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Operand {
    Const(Rational),
    Step(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepTarget {
    /// The raw value, rescaled, becomes this strategy probability.
    Define(Slot),
    /// The raw value must vanish.
    Constrain,
}

/// `raw = x_mult · operand + addend`, with `x_mult = 1` when absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainStep {
    pub target: StepTarget,
    pub mult: Option<usize>,
    pub operand: Operand,
    pub addend: Operand,
}

impl ChainStep {
    pub fn is_define(&self) -> bool {
        matches!(self.target, StepTarget::Define(_))
    }
}

/// `raw = s·b + δ`, chosen so that `b` stays in `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineScaling {
    pub s: Rational,
    pub delta: Rational,
    pub lo: Rational,
    pub hi: Rational,
}

impl AffineScaling {
    /// Map a raw value range `[l, u]` onto `[lo, hi]`.
    pub fn fit(range: &Interval, lo: Rational, hi: Rational) -> Self {
        assert!(Rational::zero() < lo && lo < hi && hi < Rational::one());
        let (l, u) = (range.lo(), range.hi());
        let (s, delta) = if u > l {
            let s = (u - l) / (&hi - &lo);
            let delta = l - &s * &lo;
            (s, delta)
        } else {
            (Rational::one(), l - (&lo + &hi) / Rational::from_integer(2.into()))
        };
        AffineScaling { s, delta, lo, hi }
    }

    pub fn to_prob<T: Scalar>(&self, raw: T) -> T {
        (raw - T::from_rational(&self.delta)) / T::from_rational(&self.s)
    }
}

/// Target interval `[1/(4B), 1/(2B)]` for a budget of `B` scaled variables.
pub fn target_interval(budget: usize) -> (Rational, Rational) {
    let b = budget.max(1) as i64;
    (rat(1, 4 * b), rat(1, 2 * b))
}

/// Interval enclosure of every step's raw value over `bx`.
pub fn raw_ranges(steps: &[ChainStep], bx: &Box) -> Vec<Interval> {
    let mut out: Vec<Interval> = Vec::with_capacity(steps.len());
    for step in steps {
        let value = |op: &Operand, out: &[Interval]| match op {
            Operand::Const(c) => Interval::point(c.clone()),
            Operand::Step(k) => out[*k].clone(),
        };
        let operand = value(&step.operand, &out);
        let scaled = match step.mult {
            Some(v) => &bx.vars()[v] * &operand,
            None => operand,
        };
        let raw = &scaled + &value(&step.addend, &out);
        out.push(raw);
    }
    out
}

/// One scaling per DEFINE step (`None` for constraints).
pub fn select_scalings(steps: &[ChainStep], bx: &Box, budget: usize) -> Vec<Option<AffineScaling>> {
    let (lo, hi) = target_interval(budget);
    raw_ranges(steps, bx)
        .iter()
        .zip(steps)
        .map(|(range, step)| {
            step.is_define()
                .then(|| AffineScaling::fit(range, lo.clone(), hi.clone()))
        })
        .collect()
}

/// `constant + Σ coeff · slot`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineExpr {
    pub constant: Rational,
    pub terms: Vec<(Slot, Rational)>,
}

impl AffineExpr {
    pub fn constant(c: Rational) -> Self {
        AffineExpr {
            constant: c,
            terms: Vec::new(),
        }
    }
}

/// Replay program from a variety point to a full profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodingWitness {
    pub method: Method,
    pub formats: Vec<usize>,
    /// The encoded system, in the coordinates the game sees.
    pub system: PolySystem,
    /// Present when the system was moved into the box first; replay inputs
    /// are then in the original coordinates.
    pub normalization: Option<CoordinateMap>,
    /// Slots equal to a monomial of the point.
    pub map: Vec<(Slot, Monomial)>,
    pub chain: Vec<(ChainStep, Option<AffineScaling>)>,
    /// Evaluated in order after the chain.
    pub fixed: Vec<(Slot, AffineExpr)>,
    /// Dimension of the unconstrained simplex block (filled with its center).
    pub simplex: usize,
}

/// A replayed profile with the system's residuals at the point.
#[derive(Debug, Clone, PartialEq)]
pub struct Replay<T> {
    pub profile: MixedProfile<T>,
    pub constraint_residuals: Vec<T>,
}

impl<T: Scalar> Replay<T> {
    /// Whether the point satisfies the system (within `tol`).
    pub fn on_variety(&self, tol: &T) -> bool {
        self.constraint_residuals.iter().all(|r| r.abs() <= *tol)
    }
}

fn describe<T: Scalar>(point: &[T]) -> String {
    let parts: Vec<String> = point.iter().map(|v| format!("{:?}", v)).collect();
    format!("({})", parts.join(", "))
}

impl EncodingWitness {
    /// Dimension of replay inputs.
    pub fn dim(&self) -> usize {
        self.system.n()
    }

    /// Replay at a point in the encoded system's own coordinates.
    pub fn replay<T: Scalar>(&self, y: &[T]) -> Result<Replay<T>> {
        if y.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: y.len(),
            });
        }
        let mut slots: Vec<Vec<Option<T>>> = self.formats.iter().map(|&k| vec![None; k]).collect();
        let bad = |reason: String| Error::MalformedEquations(reason);

        for ((k, j), mono) in &self.map {
            slots[*k][*j] = Some(mono.eval(y));
        }

        let mut raws: Vec<T> = Vec::with_capacity(self.chain.len());
        for (step, scaling) in &self.chain {
            let value = |op: &Operand, raws: &[T]| match op {
                Operand::Const(c) => T::from_rational(c),
                Operand::Step(k) => raws[*k].clone(),
            };
            let mut raw = value(&step.operand, &raws);
            if let Some(v) = step.mult {
                raw = y[v].clone() * raw;
            }
            raw = raw + value(&step.addend, &raws);
            if let StepTarget::Define((k, j)) = step.target {
                let sc = scaling
                    .as_ref()
                    .ok_or_else(|| bad("define step without scaling".into()))?;
                slots[k][j] = Some(sc.to_prob(raw.clone()));
            }
            raws.push(raw);
        }

        for ((k, j), expr) in &self.fixed {
            let mut v = T::from_rational(&expr.constant);
            for ((a, b), c) in &expr.terms {
                let s = slots[*a][*b]
                    .clone()
                    .ok_or_else(|| bad(format!("fixed entry reads unset slot s{}.{b}", a + 1)))?;
                v = v + T::from_rational(c) * s;
            }
            slots[*k][*j] = Some(v);
        }

        let strategies: Vec<Vec<T>> = slots
            .into_iter()
            .map(|row| {
                let assigned = row.iter().flatten().cloned().fold(T::zero(), |a, b| a + b);
                let free = row.iter().filter(|v| v.is_none()).count();
                let share = if free == 0 {
                    T::zero()
                } else {
                    (T::one() - assigned) / T::from_rational(&Rational::from_integer(free.into()))
                };
                row.into_iter().map(|v| v.unwrap_or_else(|| share.clone())).collect()
            })
            .collect();
        let profile = MixedProfile::new_unchecked(strategies);
        if !profile.is_totally_mixed() {
            return Err(Error::BoxHypothesis {
                point: describe(y),
                reason: "replayed probabilities leave the open interval (0,1)".into(),
            });
        }
        Ok(Replay {
            profile,
            constraint_residuals: self.system.eval(y),
        })
    }

    /// Exact replay at a point in original coordinates.
    pub fn replay_exact(&self, x: &[Rational]) -> Result<Replay<Rational>> {
        match &self.normalization {
            None => self.replay(x),
            Some(map) => {
                if x.len() != map.n() {
                    return Err(Error::DimensionMismatch {
                        expected: map.n(),
                        got: x.len(),
                    });
                }
                let y = map.to_normalized(x).ok_or_else(|| {
                    Error::Unsupported("normalized coordinates are irrational; use a positive tolerance".into())
                })?;
                self.replay(&y)
            }
        }
    }

    /// Floating-point replay at a point in original coordinates.
    pub fn replay_f64(&self, x: &[f64]) -> Result<Replay<f64>> {
        match &self.normalization {
            None => self.replay(x),
            Some(map) => {
                if x.len() != map.n() {
                    return Err(Error::DimensionMismatch {
                        expected: map.n(),
                        got: x.len(),
                    });
                }
                self.replay(&map.to_normalized_f64(x))
            }
        }
    }

    /// Steps in chain order (without scalings).
    pub fn steps(&self) -> Vec<ChainStep> {
        self.chain.iter().map(|(s, _)| s.clone()).collect()
    }
}

/// Encode `sys` with the chosen construction. With `normalize` the system
/// is first moved into the box and the witness replays original
/// coordinates. `reduce_players` only affects [`Method::Binary`].
pub fn encode(
    sys: &PolySystem,
    method: Method,
    normalize: bool,
    reduce_players: bool,
) -> Result<(Game, EncodingWitness)> {
    let (target, map) = if normalize {
        let (norm, map) = normalize_to_box(sys);
        (norm, Some(map))
    } else {
        (sys.clone(), None)
    };
    let (game, mut witness) = match method {
        Method::ThreePlayer => encode_three_player(&target)?,
        Method::Binary => encode_binary(&target, reduce_players)?,
        Method::Univariate => encode_univariate(&target.univariate_coeffs()?)?,
    };
    witness.normalization = map;
    Ok((game, witness))
}

/// Linear form in at most one slot: `[(None, c), (Some(slot), s)]`.
type LinTerms = Vec<(Option<Slot>, Rational)>;

fn operand_terms(op: &Operand, scalings: &[Option<AffineScaling>], slot_of: &dyn Fn(usize) -> Slot) -> LinTerms {
    match op {
        Operand::Const(c) => vec![(None, c.clone())],
        Operand::Step(k) => {
            let sc = scalings[*k].as_ref().expect("operand steps are defines");
            vec![(Some(slot_of(*k)), sc.s.clone()), (None, sc.delta.clone())]
        }
    }
}

/// Multilinear terms of `x·operand + addend - (s·b + δ)` for step `t`,
/// where `slot_of(k)` names the probability standing for step `k`'s raw
/// value and `coord_slot(v)` the probability standing for coordinate `v`.
pub(crate) fn chain_equation_terms(
    steps: &[ChainStep],
    scalings: &[Option<AffineScaling>],
    t: usize,
    coord_slot: &dyn Fn(usize) -> Slot,
    slot_of: &dyn Fn(usize) -> Slot,
) -> Vec<(Vec<Slot>, Rational)> {
    let step = &steps[t];
    let mult = step.mult.map(coord_slot);
    let mut out = Vec::new();
    for (sl, c) in operand_terms(&step.operand, scalings, slot_of) {
        let mono: Vec<Slot> = mult.into_iter().chain(sl).collect();
        out.push((mono, c));
    }
    for (sl, c) in operand_terms(&step.addend, scalings, slot_of) {
        out.push((sl.into_iter().collect(), c));
    }
    if step.is_define() {
        let sc = scalings[t].as_ref().expect("define steps are scaled");
        out.push((vec![slot_of(t)], -sc.s.clone()));
        out.push((vec![], -sc.delta.clone()));
    }
    out
}

pub(crate) fn fmt_slot((k, j): Slot) -> String {
    format!("s{}.{}", k + 1, j)
}

pub(crate) fn fmt_operand(op: &Operand) -> String {
    match op {
        Operand::Const(c) => fmt_rational(c),
        Operand::Step(k) => format!("@{}", k + 1),
    }
}

/// Reject constant equations before building any construction.
pub(crate) fn check_nonconstant(sys: &PolySystem) -> Result<()> {
    for (j, p) in sys.polys().iter().enumerate() {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if p.total_degree() == 0 {
            return Err(Error::ConstantEquation { index: j + 1 });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn normalized_encoding_replays_original_coordinates() {
        let sys = crate::polysys::parse_system("vars: x1\neq: x1 - 2 = 0").unwrap();
        for method in [Method::ThreePlayer, Method::Binary, Method::Univariate] {
            let (game, w) = encode(&sys, method, true, false).unwrap();
            assert!(w.normalization.is_some());
            let r = w.replay_f64(&[2.0]).unwrap();
            assert!(r.on_variety(&1e-12));
            let res = crate::game::indifference_residuals(&game, &r.profile).unwrap();
            assert!(res.max_abs < 1e-9, "{method}: {}", res.max_abs);
            assert!(w.replay_f64(&[1.0]).unwrap().constraint_residuals[0].abs() > 1e-3);
        }
    }

    #[test]
    fn scaling_examples() {
        let (lo, hi) = target_interval(1);
        let sc = AffineScaling::fit(&Interval::new(int(-1), int(0)), lo.clone(), hi.clone());
        assert_eq!((sc.s.clone(), sc.delta.clone()), (int(4), int(-2)));
        assert_eq!(sc.to_prob(rat(-1, 4)), rat(7, 16));
        let c = AffineScaling::fit(&Interval::point(int(0)), lo, hi);
        assert_eq!((c.s.clone(), c.delta.clone()), (int(1), rat(-3, 8)));
        assert_eq!(c.to_prob(int(0)), rat(3, 8));
        assert_eq!(target_interval(4), (rat(1, 16), rat(1, 8)));
    }

    #[test]
    fn method_names() {
        for m in [Method::ThreePlayer, Method::Binary, Method::Univariate] {
            assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
        }
        assert!("4p".parse::<Method>().is_err());
    }
}
