//! Payoff synthesis: realize a prescribed multilinear indifference system as
//! payoff tensors, and the inverse transform.
//!
//! Player `i`'s equation `j` reads
//! `Σ_J λ_J Π_{k≠i} σ_k^{J_k} = 0` with `J_k ∈ 0..=d_k`, where `σ_k^0`
//! stands for the total probability `Σ_j σ_k(s_kj)` and `σ_k^j = σ_k(s_kj)`.
//! The synthesized payoffs are `u_i(s_i0, ·) = 0` and
//! `u_i(s_ij, t) = Σ_{J ⪯ t} λ_J` where `J ⪯ t` means `J_k ∈ {0, t_k}`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::game::{strides, Game, MixedProfile};
use crate::rational::{Rational, Scalar};

/// One indifference equation owned by player `owner`, with dense
/// coefficients over the other players' strategy indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultilinearEquation {
    owner: usize,
    index: usize,
    formats: Vec<usize>,
    coeffs: Vec<Rational>,
}

/// A variable `σ_player^strategy` with `strategy ≥ 1`.
pub type Slot = (usize, usize);

impl MultilinearEquation {
    /// The all-zero equation (`0 = 0`).
    pub fn zero(owner: usize, index: usize, formats: &[usize]) -> Self {
        let size = other_size(formats, owner);
        MultilinearEquation {
            owner,
            index,
            formats: formats.to_vec(),
            coeffs: vec![Rational::zero(); size],
        }
    }

    /// Dense constructor; `coeffs` is row-major over the other players in
    /// increasing order, last fastest.
    pub fn new(owner: usize, index: usize, formats: &[usize], coeffs: Vec<Rational>) -> Result<Self> {
        check_owner(owner, index, formats)?;
        let size = other_size(formats, owner);
        if coeffs.len() != size {
            return Err(Error::DimensionMismatch {
                expected: size,
                got: coeffs.len(),
            });
        }
        Ok(MultilinearEquation {
            owner,
            index,
            formats: formats.to_vec(),
            coeffs,
        })
    }

    /// Build from sparse monomials. Each monomial is a set of slots, at most
    /// one per player, never the owner's. The empty monomial is the constant
    /// term. Repeated monomials are summed.
    pub fn from_terms<I>(owner: usize, index: usize, formats: &[usize], terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<Slot>, Rational)>,
    {
        check_owner(owner, index, formats)?;
        let mut eq = MultilinearEquation::zero(owner, index, formats);
        let others = eq.others();
        let st = strides(&eq.other_formats());
        for (mono, c) in terms {
            let mut pos = 0;
            let mut used = vec![false; formats.len()];
            for (k, j) in mono {
                if k == owner {
                    return Err(Error::MalformedEquations(format!(
                        "player {} equation mentions its own strategy",
                        owner + 1
                    )));
                }
                if k >= formats.len() || j == 0 || j >= formats[k] {
                    return Err(Error::MalformedEquations(format!("slot s{}.{} out of range", k + 1, j)));
                }
                if std::mem::replace(&mut used[k], true) {
                    return Err(Error::MalformedEquations(format!(
                        "monomial is not multilinear in player {}",
                        k + 1
                    )));
                }
                let axis = others.iter().position(|&o| o == k).expect("k is another player");
                pos += j * st[axis];
            }
            eq.coeffs[pos] += c;
        }
        Ok(eq)
    }

    pub fn owner(&self) -> usize {
        self.owner
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn formats(&self) -> &[usize] {
        &self.formats
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The other players, in increasing order.
    pub fn others(&self) -> Vec<usize> {
        (0..self.formats.len()).filter(|&k| k != self.owner).collect()
    }

    fn other_formats(&self) -> Vec<usize> {
        self.others().iter().map(|&k| self.formats[k]).collect()
    }

    /// Nonzero monomials in canonical order.
    pub fn terms(&self) -> BTreeMap<Vec<Slot>, Rational> {
        let others = self.others();
        let dims = self.other_formats();
        let mut out = BTreeMap::new();
        for (pos, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let idx = unflatten(pos, &dims);
            let mono = others
                .iter()
                .zip(&idx)
                .filter(|(_, &j)| j != 0)
                .map(|(&k, &j)| (k, j))
                .collect();
            out.insert(mono, c.clone());
        }
        out
    }

    /// Players whose strategies occur in some nonzero monomial.
    pub fn participants(&self) -> Vec<usize> {
        let mut seen = vec![false; self.formats.len()];
        for mono in self.terms().keys() {
            for &(k, _) in mono {
                seen[k] = true;
            }
        }
        (0..seen.len()).filter(|&k| seen[k]).collect()
    }

    /// Left-hand side of the equation at a profile, reading `σ_k^0` as the
    /// total probability of player `k`.
    pub fn eval<T: Scalar>(&self, profile: &MixedProfile<T>) -> T {
        let others = self.others();
        let dims = self.other_formats();
        let totals: Vec<T> = others
            .iter()
            .map(|&k| profile.player(k).iter().cloned().fold(T::zero(), |a, b| a + b))
            .collect();
        let mut acc = T::zero();
        for (pos, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let idx = unflatten(pos, &dims);
            let mut term = T::from_rational(c);
            for (a, (&k, &j)) in others.iter().zip(&idx).enumerate() {
                let v = if j == 0 {
                    totals[a].clone()
                } else {
                    profile.player(k)[j].clone()
                };
                term = term * v;
            }
            acc = acc + term;
        }
        acc
    }
}

fn check_owner(owner: usize, index: usize, formats: &[usize]) -> Result<()> {
    if owner >= formats.len() {
        return Err(Error::IndexOutOfRange {
            index: owner,
            limit: formats.len(),
        });
    }
    if index == 0 || index >= formats[owner] {
        return Err(Error::IndexOutOfRange {
            index,
            limit: formats[owner],
        });
    }
    Ok(())
}

fn other_size(formats: &[usize], owner: usize) -> usize {
    formats
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != owner)
        .map(|(_, &f)| f)
        .product()
}

fn unflatten(mut pos: usize, dims: &[usize]) -> Vec<usize> {
    let mut idx = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        idx[k] = pos % dims[k];
        pos /= dims[k];
    }
    idx
}

/// In-place subset-sum (`sign = 1`) or its inverse (`sign = -1`) along
/// every axis: `v[t] += sign · v[t with axis coordinate 0]` for `t_axis ≠ 0`.
fn transform(values: &mut [Rational], dims: &[usize], inverse: bool) {
    let st = strides(dims);
    for (axis, &d) in dims.iter().enumerate() {
        if d < 2 {
            continue;
        }
        for pos in 0..values.len() {
            let t = (pos / st[axis]) % d;
            if t != 0 {
                let base = values[pos - t * st[axis]].clone();
                if inverse {
                    values[pos] -= base;
                } else {
                    values[pos] += base;
                }
            }
        }
    }
}

/// Payoff tensor for player `i` realizing `eqs` (indices `1..d_i`, each once).
pub fn payoffs_from_equations(i: usize, eqs: &[MultilinearEquation], formats: &[usize]) -> Result<Vec<Rational>> {
    if i >= formats.len() {
        return Err(Error::IndexOutOfRange {
            index: i,
            limit: formats.len(),
        });
    }
    let d = formats[i] - 1;
    if eqs.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: eqs.len(),
        });
    }
    let mut by_index: Vec<Option<&MultilinearEquation>> = vec![None; d];
    for eq in eqs {
        if eq.owner != i || eq.formats != formats {
            return Err(Error::MalformedEquations(format!(
                "equation {} is not owned by player {} over these formats",
                eq.index,
                i + 1
            )));
        }
        let slot = &mut by_index[eq.index - 1];
        if slot.replace(eq).is_some() {
            return Err(Error::MalformedEquations(format!("index {} given twice", eq.index)));
        }
    }
    let dims: Vec<usize> = (0..formats.len()).filter(|&k| k != i).map(|k| formats[k]).collect();
    let inner = other_size(formats, i);
    let outer: usize = formats[..i].iter().product();
    let after: usize = formats[i + 1..].iter().product();

    let mut tensor = vec![Rational::zero(); formats.iter().product()];
    for (j, eq) in by_index.into_iter().enumerate() {
        let eq = eq.expect("every index present");
        let mut row = eq.coeffs.clone();
        transform(&mut row, &dims, false);
        // Scatter t_{-i} back into the full tensor with t_i = j + 1.
        for (pos, v) in row.into_iter().enumerate() {
            let (hi, lo) = (pos / after, pos % after);
            debug_assert!(hi < outer && pos < inner);
            tensor[(hi * formats[i] + j + 1) * after + lo] = v;
        }
    }
    Ok(tensor)
}

/// Recover the equations whose synthesis reproduces every residual
/// `u_i(s_ij, ·) - u_i(s_i0, ·)` of `game`.
pub fn equations_from_payoffs(game: &Game, i: usize) -> Vec<MultilinearEquation> {
    let formats = game.strategy_counts();
    let dims: Vec<usize> = (0..formats.len()).filter(|&k| k != i).map(|k| formats[k]).collect();
    let inner = other_size(formats, i);
    let after: usize = formats[i + 1..].iter().product();
    let u = game.payoffs(i);
    (1..formats[i])
        .map(|j| {
            let mut row: Vec<Rational> = (0..inner)
                .map(|pos| {
                    let (hi, lo) = (pos / after, pos % after);
                    let at = |s: usize| &u[(hi * formats[i] + s) * after + lo];
                    at(j) - at(0)
                })
                .collect();
            transform(&mut row, &dims, true);
            MultilinearEquation {
                owner: i,
                index: j,
                formats: formats.to_vec(),
                coeffs: row,
            }
        })
        .collect()
}

/// Synthesize a whole game from one equation list per player.
pub fn game_from_equations(formats: &[usize], eqs: &[Vec<MultilinearEquation>]) -> Result<Game> {
    if eqs.len() != formats.len() {
        return Err(Error::DimensionMismatch {
            expected: formats.len(),
            got: eqs.len(),
        });
    }
    let payoffs = eqs
        .iter()
        .enumerate()
        .map(|(i, e)| payoffs_from_equations(i, e, formats))
        .collect::<Result<Vec<_>>>()?;
    Game::new(formats.to_vec(), payoffs)
}
