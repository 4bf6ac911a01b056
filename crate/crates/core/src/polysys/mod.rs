//! Exact-rational multivariate polynomials and polynomial systems.

mod horner;
mod interval;
mod normalize;
mod parse;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_rational, Rational, Scalar};

pub use horner::{horner_decompose, HornerForm};
pub use interval::{Box, Interval};
pub use normalize::{normalize_to_box, CoordinateMap};
pub use parse::{parse_system, write_system};

/// Exponent vector `x_1^{e_1} ... x_n^{e_n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn eval<T: Scalar>(&self, point: &[T]) -> T {
        let mut acc = T::one();
        for (x, &e) in point.iter().zip(&self.0) {
            for _ in 0..e {
                acc = acc * x.clone();
            }
        }
        acc
    }
}

/// Sparse polynomial over `n` variables; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Polynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        let mut p = Polynomial::zero(n);
        p.add_term(Monomial::one(n), c);
        p
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut p = Polynomial::zero(n);
        p.add_term(Monomial::var(n, i), Rational::one());
        p
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Polynomial::zero(n);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Accumulate `c * m`, dropping the entry if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        assert_eq!(m.n(), self.n, "monomial arity");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one(self.n))
    }

    /// Highest power of `x_i` occurring in any term (0 if absent).
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.n);
        }
        Polynomial {
            n: self.n,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::constant(self.n, Rational::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Evaluate at a point of any scalar type. The caller guarantees the
    /// point has `n` coordinates.
    pub fn eval<T: Scalar>(&self, point: &[T]) -> T {
        debug_assert_eq!(point.len(), self.n);
        self.terms
            .iter()
            .fold(T::zero(), |acc, (m, c)| acc + T::from_rational(c) * m.eval(point))
    }

    /// Substitute polynomial `values[i]` (all over a common variable set) for
    /// `x_i`.
    pub fn compose(&self, values: &[Polynomial]) -> Polynomial {
        assert_eq!(values.len(), self.n);
        let target_n = values.first().map_or(0, Polynomial::n);
        let mut out = Polynomial::zero(target_n);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(target_n, c.clone());
            for (v, &e) in values.iter().zip(&m.0) {
                if e > 0 {
                    term = &term * &v.pow(e);
                }
            }
            out = &out + &term;
        }
        out
    }
}

/// Exact evaluation with a dimension check.
pub fn eval_poly(poly: &Polynomial, point: &[Rational]) -> Result<Rational> {
    if point.len() != poly.n {
        return Err(Error::DimensionMismatch {
            expected: poly.n,
            got: point.len(),
        });
    }
    Ok(poly.eval(point))
}

impl<'a> Add for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for Polynomial {
    /// Renders in the input grammar, highest-degree terms first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = *c < Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            write!(f, "{}", fmt_rational(&mag))?;
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{}", i + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

/// `m` polynomial equations `F_j = 0` in `n` unknowns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySystem {
    n: usize,
    polys: Vec<Polynomial>,
}

impl PolySystem {
    pub fn new(polys: Vec<Polynomial>) -> Result<Self> {
        let n = polys
            .first()
            .map(Polynomial::n)
            .ok_or_else(|| Error::Unsupported("system has no equations".into()))?;
        if n == 0 {
            return Err(Error::Unsupported("system has no variables".into()));
        }
        if let Some(p) = polys.iter().find(|p| p.n() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.n(),
            });
        }
        Ok(PolySystem { n, polys })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.polys.len()
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn eval<T: Scalar>(&self, point: &[T]) -> Vec<T> {
        self.polys.iter().map(|p| p.eval(point)).collect()
    }

    /// Coefficients `α_0..α_d` of a univariate single-equation system.
    pub fn univariate_coeffs(&self) -> Result<Vec<Rational>> {
        if self.n != 1 || self.m() != 1 {
            return Err(Error::Unsupported(format!(
                "expected one equation in one unknown, got m={} n={}",
                self.m(),
                self.n
            )));
        }
        let p = &self.polys[0];
        let d = p.degree_in(0) as usize;
        Ok((0..=d).map(|k| p.coeff(&Monomial::new(vec![k as u32]))).collect())
    }

    pub fn from_univariate(coeffs: &[Rational]) -> Result<Self> {
        let p = Polynomial::from_terms(
            1,
            coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (Monomial::new(vec![k as u32]), c.clone())),
        );
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        PolySystem::new(vec![p])
    }
}

/// Per-equation, per-variable maximal degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeProfile {
    /// `per_equation[j][i]` is the highest power of `x_i` in equation `j`.
    pub per_equation: Vec<Vec<u32>>,
    /// Column maxima `d_i`.
    pub per_variable: Vec<u32>,
    pub max: u32,
}

impl DegreeProfile {
    pub fn from_matrix(per_equation: Vec<Vec<u32>>) -> Self {
        let n = per_equation.first().map_or(0, Vec::len);
        let per_variable: Vec<u32> = (0..n)
            .map(|i| per_equation.iter().map(|row| row[i]).max().unwrap_or(0))
            .collect();
        let max = per_variable.iter().copied().max().unwrap_or(0);
        DegreeProfile {
            per_equation,
            per_variable,
            max,
        }
    }

    pub fn n(&self) -> usize {
        self.per_variable.len()
    }

    pub fn m(&self) -> usize {
        self.per_equation.len()
    }

    /// Horner chain length for equation `j`: `Π_i (1 + d_ij) - 1`.
    pub fn chain_len(&self, j: usize) -> usize {
        self.per_equation[j].iter().map(|&d| 1 + d as usize).product::<usize>() - 1
    }
}

pub fn degree_profile(sys: &PolySystem) -> DegreeProfile {
    DegreeProfile::from_matrix(
        sys.polys
            .iter()
            .map(|p| (0..sys.n).map(|i| p.degree_in(i)).collect())
            .collect(),
    )
}

/// Capacity of the three-player encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Capacity3p {
    /// Number of Critter chain equations, `Σ_j (Π_i (1 + d_ij) - 1)`.
    pub d: usize,
    /// Strategy counts `(n + 1, D - m + 1, D + 1)`.
    pub formats: [usize; 3],
}

pub fn capacity_3p(profile: &DegreeProfile) -> Capacity3p {
    let d: usize = (0..profile.m()).map(|j| profile.chain_len(j)).sum();
    let m = profile.m();
    assert!(
        d >= m,
        "every equation must involve at least one variable (D = {d}, m = {m})"
    );
    Capacity3p {
        d,
        formats: [profile.n() + 1, d - m + 1, d + 1],
    }
}

/// Capacity of the binary-player encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CapacityNp {
    /// `D' = Σ_i max_j d_ij`.
    pub d_prime: usize,
    /// `D' + m`.
    pub players: usize,
}

pub fn capacity_np(profile: &DegreeProfile) -> CapacityNp {
    let d_prime = profile.per_variable.iter().map(|&d| d as usize).sum();
    CapacityNp {
        d_prime,
        players: d_prime + profile.m(),
    }
}

/// Strategy counts of the univariate encoding for degree `d`.
pub fn formats_1d(d: usize) -> [usize; 3] {
    let half = d.div_ceil(2);
    [2, half + 1, half + 1]
}
