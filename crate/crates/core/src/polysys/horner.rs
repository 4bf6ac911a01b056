use num_traits::Zero;

use super::{Box, Interval, Monomial, Polynomial};
use crate::rational::{Rational, Scalar};

/// Recursive coefficient tree of a polynomial.
///
/// A node at depth `k` branches on `x_{order[k]}`; `children[e]` is the
/// coefficient of `x_{order[k]}^e`, itself a polynomial in the remaining
/// variables. Every node at the same depth has the same number of children
/// (one more than that variable's degree in the whole polynomial), so the
/// tree carries exactly the coefficients `F_{i_1 ... i_k}` of the nested form,
/// zeros included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HornerForm {
    Leaf(Rational),
    Node { var: usize, children: Vec<HornerForm> },
}

/// Decompose `poly` into nested Horner form, branching on `order[0]` first.
pub fn horner_decompose(poly: &Polynomial, order: &[usize]) -> HornerForm {
    let n = poly.n();
    assert_eq!(order.len(), n, "order must be a permutation of the variables");
    let mut seen = vec![false; n];
    for &v in order {
        assert!(v < n && !seen[v], "order must be a permutation");
        seen[v] = true;
    }
    let degs: Vec<u32> = order.iter().map(|&v| poly.degree_in(v)).collect();
    let terms: Vec<(&Monomial, &Rational)> = poly.terms().collect();
    build(&terms, order, &degs, 0)
}

fn build(terms: &[(&Monomial, &Rational)], order: &[usize], degs: &[u32], depth: usize) -> HornerForm {
    if depth == order.len() {
        debug_assert!(terms.len() <= 1);
        return HornerForm::Leaf(terms.first().map_or_else(Rational::zero, |t| t.1.clone()));
    }
    let var = order[depth];
    let children = (0..=degs[depth])
        .map(|e| {
            let sub: Vec<_> = terms.iter().filter(|(m, _)| m.exponents()[var] == e).copied().collect();
            build(&sub, order, degs, depth + 1)
        })
        .collect();
    HornerForm::Node { var, children }
}

impl HornerForm {
    /// Multiply the tree back out over `n` variables.
    pub fn expand(&self, n: usize) -> Polynomial {
        match self {
            HornerForm::Leaf(c) => Polynomial::constant(n, c.clone()),
            HornerForm::Node { var, children } => {
                let x = Polynomial::var(n, *var);
                let mut acc = Polynomial::zero(n);
                for child in children.iter().rev() {
                    acc = &(&acc * &x) + &child.expand(n);
                }
                acc
            }
        }
    }

    /// Nested Horner evaluation.
    pub fn eval<T: Scalar>(&self, point: &[T]) -> T {
        match self {
            HornerForm::Leaf(c) => T::from_rational(c),
            HornerForm::Node { var, children } => {
                let x = &point[*var];
                let mut acc = T::zero();
                for child in children.iter().rev() {
                    acc = acc * x.clone() + child.eval(point);
                }
                acc
            }
        }
    }

    /// Naive interval enclosure of the nested form over `bx`.
    pub fn interval_eval(&self, bx: &Box) -> Interval {
        match self {
            HornerForm::Leaf(c) => Interval::point(c.clone()),
            HornerForm::Node { var, children } => {
                let x = &bx.vars()[*var];
                let mut acc = Interval::point(Rational::zero());
                for child in children.iter().rev() {
                    acc = &(&acc * x) + &child.interval_eval(bx);
                }
                acc
            }
        }
    }

    /// The coefficient node `F_{path[0] path[1] ...}`.
    pub fn node(&self, path: &[usize]) -> Option<&HornerForm> {
        match (path.split_first(), self) {
            (None, _) => Some(self),
            (Some((&i, rest)), HornerForm::Node { children, .. }) => children.get(i)?.node(rest),
            (Some(_), HornerForm::Leaf(_)) => None,
        }
    }

    pub fn leaf_value(&self) -> Option<&Rational> {
        match self {
            HornerForm::Leaf(c) => Some(c),
            HornerForm::Node { .. } => None,
        }
    }

    pub fn is_constant_zero(&self) -> bool {
        match self {
            HornerForm::Leaf(c) => c.is_zero(),
            HornerForm::Node { children, .. } => children.iter().all(HornerForm::is_constant_zero),
        }
    }

    /// Number of multiply-add steps a Horner schedule of this tree takes.
    pub fn step_count(&self) -> usize {
        match self {
            HornerForm::Leaf(_) => 0,
            HornerForm::Node { children, .. } => {
                children.len() - 1 + children.iter().map(HornerForm::step_count).sum::<usize>()
            }
        }
    }
}

/// Default order: `x_1` outermost.
pub fn natural_order(n: usize) -> Vec<usize> {
    (0..n).collect()
}

impl From<&Polynomial> for HornerForm {
    fn from(p: &Polynomial) -> Self {
        horner_decompose(p, &natural_order(p.n()))
    }
}
