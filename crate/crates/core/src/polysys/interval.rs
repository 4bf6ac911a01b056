//! Closed rational intervals and boxes. Arithmetic is the naive
//! endpoint rule; enclosures are sound but not tight.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn point(v: Rational) -> Self {
        Interval { lo: v.clone(), hi: v }
    }

    pub fn unit() -> Self {
        Interval::new(Rational::zero(), Rational::one())
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn contains(&self, v: &Rational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn scale(&self, c: &Rational) -> Interval {
        let (a, b) = (&self.lo * c, &self.hi * c);
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, rhs: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, rhs: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, rhs: &Interval) -> Interval {
        let products = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = products.iter().min().expect("four products").clone();
        let hi = products.iter().max().expect("four products").clone();
        Interval { lo, hi }
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }
}

/// Per-variable intervals inside `[0,1]`, optionally with a cap on the
/// coordinate sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Box {
    vars: Vec<Interval>,
    sum_cap: Option<Rational>,
}

impl Box {
    pub fn new(vars: Vec<Interval>, sum_cap: Option<Rational>) -> Result<Self> {
        let unit = Interval::unit();
        if let Some(bad) = vars.iter().position(|iv| !iv.is_subset_of(&unit)) {
            return Err(Error::Unsupported(format!("box coordinate {bad} is not inside [0,1]")));
        }
        if let Some(cap) = &sum_cap {
            if *cap > Rational::one() {
                return Err(Error::Unsupported("box sum cap exceeds 1".into()));
            }
        }
        Ok(Box { vars, sum_cap })
    }

    /// `[0,1]^n` without a sum cap.
    pub fn unit(n: usize) -> Self {
        Box {
            vars: vec![Interval::unit(); n],
            sum_cap: None,
        }
    }

    /// `[0,1]^n` with `Σ x_i ≤ 1`: the closure of the encoders' domain.
    pub fn simplex(n: usize) -> Self {
        Box {
            vars: vec![Interval::unit(); n],
            sum_cap: Some(Rational::one()),
        }
    }

    pub fn vars(&self) -> &[Interval] {
        &self.vars
    }

    pub fn sum_cap(&self) -> Option<&Rational> {
        self.sum_cap.as_ref()
    }

    pub fn contains(&self, point: &[Rational]) -> bool {
        point.len() == self.vars.len()
            && point.iter().zip(&self.vars).all(|(x, iv)| iv.contains(x))
            && self
                .sum_cap
                .as_ref()
                .is_none_or(|cap| point.iter().sum::<Rational>() <= *cap)
    }
}
