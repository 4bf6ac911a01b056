//! Real roots in (0,1) by Sturm sequences and bisection, in exact
//! arithmetic.

use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_rational, int, rat, to_f64, Rational};

/// Coefficients, lowest degree first, without trailing zeros.
type Poly = Vec<Rational>;

/// Isolating interval `[lo, hi]` containing exactly one root. `lo == hi`
/// when the root is known exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsolatedRoot {
    pub lo: Rational,
    pub hi: Rational,
}

impl IsolatedRoot {
    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RootList {
    pub roots: Vec<IsolatedRoot>,
}

impl RootList {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn midpoints(&self) -> Vec<Rational> {
        self.roots.iter().map(IsolatedRoot::mid).collect()
    }

    pub fn midpoints_f64(&self) -> Vec<f64> {
        self.roots.iter().map(|r| to_f64(&r.mid())).collect()
    }

    /// One root per line (its midpoint), so the output doubles as a points
    /// file; the interval and a decimal value follow as a comment.
    pub fn to_text(&self) -> String {
        let mut out = format!("# {} root(s) in (0,1)\n", self.len());
        for r in &self.roots {
            let mid = r.mid();
            writeln!(
                out,
                "{}  # [{}, {}] ~ {:.16e}",
                fmt_rational(&mid),
                fmt_rational(&r.lo),
                fmt_rational(&r.hi),
                to_f64(&mid)
            )
            .unwrap();
        }
        out
    }
}

/// Interval widths below this are not refined further.
fn refine_width() -> Rational {
    rat(1, 1 << 62)
}

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn eval(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

fn derivative(p: &[Rational]) -> Poly {
    trim(p.iter().enumerate().skip(1).map(|(k, c)| c * int(k as i64)).collect())
}

/// Scale by a positive constant so the leading coefficient is ±1.
fn normalize(p: Poly) -> Poly {
    match p.last() {
        Some(lead) => {
            let s = lead.abs();
            p.iter().map(|c| c / &s).collect()
        }
        None => p,
    }
}

fn div_rem(a: &[Rational], b: &[Rational]) -> (Poly, Poly) {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = &b[db];
    let mut q = vec![Rational::zero(); a.len().saturating_sub(db).max(1)];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let c = r.last().unwrap() / lead;
        for (i, bc) in b.iter().enumerate() {
            r[k + i] -= &c * bc;
        }
        q[k] = c;
        r = trim(r);
        if r.len() <= db {
            break;
        }
    }
    (trim(q), r)
}

fn gcd(a: &[Rational], b: &[Rational]) -> Poly {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let (_, r) = div_rem(&a, &b);
        a = b;
        b = normalize(r);
    }
    normalize(a)
}

fn sturm_chain(p: &[Rational]) -> Vec<Poly> {
    let mut chain = vec![p.to_vec(), normalize(derivative(p))];
    loop {
        let n = chain.len();
        if chain[n - 1].is_empty() {
            chain.pop();
            break;
        }
        let (_, r) = div_rem(&chain[n - 2], &chain[n - 1]);
        if r.is_empty() {
            break;
        }
        chain.push(normalize(r.iter().map(|c| -c).collect()));
    }
    chain
}

fn variations(chain: &[Poly], x: &Rational) -> usize {
    let signs: Vec<bool> = chain
        .iter()
        .map(|p| eval(p, x))
        .filter(|v| !v.is_zero())
        .map(|v| v.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Distinct real roots of `Σ α_k x^k` in the open interval (0,1), each
/// isolated and refined to width below 2^-62 (or found exactly).
pub fn roots_in_unit_interval(coeffs: &[Rational]) -> Result<RootList> {
    let p = trim(coeffs.to_vec());
    if p.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    if p.len() == 1 {
        return Ok(RootList::default());
    }
    let dp = derivative(&p);
    let g = gcd(&p, &dp);
    let mut q = normalize(div_rem(&p, &g).0);
    // Deflate roots on the boundary so the Sturm counts are clean.
    for x in [Rational::zero(), Rational::one()] {
        if eval(&q, &x).is_zero() {
            q = div_rem(&q, &[-x.clone(), Rational::one()]).0;
        }
    }
    let chain = sturm_chain(&q);
    let count = |a: &Rational, b: &Rational| variations(&chain, a) - variations(&chain, b);

    let mut found = Vec::new();
    let mut stack = vec![(Rational::zero(), Rational::one())];
    while let Some((a, b)) = stack.pop() {
        match count(&a, &b) {
            0 => {}
            1 => found.push(refine(&q, a, b)),
            _ => {
                let m = (&a + &b) / int(2);
                if !eval(&q, &m).is_zero() {
                    stack.push((a, m.clone()));
                    stack.push((m, b));
                    continue;
                }
                // Exact root: cut out a window around it holding no other root.
                let mut eps = (&b - &a) / int(4);
                loop {
                    let (l, r) = (&m - &eps, &m + &eps);
                    if !eval(&q, &l).is_zero() && !eval(&q, &r).is_zero() && count(&l, &r) == 1 {
                        stack.push((a, l));
                        stack.push((r, b));
                        break;
                    }
                    eps /= int(2);
                }
                found.push(IsolatedRoot { lo: m.clone(), hi: m });
            }
        }
    }
    found.sort_by(|x, y| x.lo.cmp(&y.lo));
    Ok(RootList { roots: found })
}

/// Bisect an isolating interval with non-root endpoints.
fn refine(p: &[Rational], mut a: Rational, mut b: Rational) -> IsolatedRoot {
    let width = refine_width();
    let mut sa = eval(p, &a).is_positive();
    while &b - &a > width {
        let m = (&a + &b) / int(2);
        let v = eval(p, &m);
        if v.is_zero() {
            return IsolatedRoot { lo: m.clone(), hi: m };
        }
        if v.is_positive() == sa {
            a = m;
            sa = v.is_positive();
        } else {
            b = m;
        }
    }
    IsolatedRoot { lo: a, hi: b }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn from_roots(roots: &[Rational], extra: &[Poly]) -> Poly {
        let mut p = vec![int(1)];
        let factors = roots
            .iter()
            .map(|r| vec![-r.clone(), int(1)])
            .chain(extra.iter().cloned());
        for f in factors {
            let mut out = vec![Rational::zero(); p.len() + f.len() - 1];
            for (i, a) in p.iter().enumerate() {
                for (j, b) in f.iter().enumerate() {
                    out[i + j] += a * b;
                }
            }
            p = out;
        }
        p
    }

    #[test]
    fn quadratic_example() {
        let r = roots_in_unit_interval(&[rat(3, 16), int(-1), int(1)]).unwrap();
        assert_eq!(r.midpoints(), vec![rat(1, 4), rat(3, 4)]);
        assert!(r.roots.iter().all(IsolatedRoot::is_exact));
        assert_eq!(
            r.to_text().lines().nth(1).unwrap().split_whitespace().next(),
            Some("1/4")
        );
    }

    #[test]
    fn empty_and_boundary_cases() {
        assert!(roots_in_unit_interval(&[int(1), int(0), int(1)]).unwrap().is_empty());
        assert!(roots_in_unit_interval(&[int(0), int(1)]).unwrap().is_empty());
        assert!(roots_in_unit_interval(&[int(-1), int(1)]).unwrap().is_empty());
        assert!(roots_in_unit_interval(&[int(5)]).unwrap().is_empty());
        assert_eq!(
            roots_in_unit_interval(&[int(0), int(0)]).unwrap_err(),
            Error::ZeroPolynomial
        );
    }

    #[test]
    fn multiple_roots_reported_once() {
        let p = from_roots(&[rat(1, 3), rat(1, 3), rat(1, 3), rat(2, 3)], &[]);
        let r = roots_in_unit_interval(&p).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r.midpoints_f64()[0] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn irrational_roots() {
        // x^2 - 1/2: one root 1/√2 in (0,1).
        let r = roots_in_unit_interval(&[rat(-1, 2), int(0), int(1)]).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r.midpoints_f64()[0] - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(!r.roots[0].is_exact());
    }

    #[test]
    fn exact_split_point_root() {
        // 1/2 is hit by the first split; the other roots sit on either side.
        let p = from_roots(&[rat(1, 5), rat(1, 2), rat(4, 5)], &[]);
        let r = roots_in_unit_interval(&p).unwrap();
        assert_eq!(r.len(), 3);
        let mids = r.midpoints_f64();
        for (m, want) in mids.iter().zip([0.2, 0.5, 0.8]) {
            assert!((m - want).abs() < 1e-15);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]

        #[test]
        fn seeded_roots_are_recovered(
            roots in prop::collection::vec((1i64..=98, 99i64..=100), 0..=4),
            outside in prop::collection::vec((-9i64..=9, 1i64..=4), 0..=2),
            lead in -5i64..=5,
        ) {
            let lead = if lead == 0 { 1 } else { lead };
            let roots: Vec<Rational> = roots.iter().map(|&(p, q)| rat(p, q)).collect();
            // Quadratic factors x^2 + c with c > 0 have no real roots.
            let extra: Vec<Poly> = outside.iter().map(|&(p, q)| vec![rat(p.abs() + 1, q), int(0), int(1)]).collect();
            let p: Poly = from_roots(&roots, &extra).iter().map(|c| c * int(lead)).collect();
            let mut want: Vec<f64> = roots.iter().map(to_f64).collect();
            want.sort_by(f64::total_cmp);
            want.dedup();
            let got = roots_in_unit_interval(&p).unwrap();
            prop_assert_eq!(got.len(), want.len());
            for (g, w) in got.midpoints_f64().iter().zip(&want) {
                prop_assert!((g - w).abs() < 1e-12);
            }
        }
    }
}
