//! Normal-form games with exact payoff tensors.
//!
//! Payoff tensors are flat, row-major, with the last player's strategy
//! index varying fastest.

pub(crate) mod io;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{is_in_open_unit, Rational, Scalar};

pub use io::{deserialize_game, parse_profile, serialize_game, write_profile};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Game {
    strategy_counts: Vec<usize>,
    payoffs: Vec<Vec<Rational>>,
}

impl Game {
    pub fn new(strategy_counts: Vec<usize>, payoffs: Vec<Vec<Rational>>) -> Result<Self> {
        if strategy_counts.is_empty() {
            return Err(Error::Unsupported("a game needs at least one player".into()));
        }
        if let Some(i) = strategy_counts.iter().position(|&k| k == 0) {
            return Err(Error::Unsupported(format!("player {} has no strategies", i + 1)));
        }
        if payoffs.len() != strategy_counts.len() {
            return Err(Error::DimensionMismatch {
                expected: strategy_counts.len(),
                got: payoffs.len(),
            });
        }
        let size: usize = strategy_counts.iter().product();
        if let Some(bad) = payoffs.iter().find(|t| t.len() != size) {
            return Err(Error::DimensionMismatch {
                expected: size,
                got: bad.len(),
            });
        }
        Ok(Game {
            strategy_counts,
            payoffs,
        })
    }

    /// A game with every payoff zero.
    pub fn zeros(strategy_counts: Vec<usize>) -> Self {
        let size = strategy_counts.iter().product();
        let payoffs = vec![vec![Rational::zero(); size]; strategy_counts.len()];
        Game {
            strategy_counts,
            payoffs,
        }
    }

    pub fn players(&self) -> usize {
        self.strategy_counts.len()
    }

    pub fn strategy_counts(&self) -> &[usize] {
        &self.strategy_counts
    }

    pub fn size(&self) -> usize {
        self.strategy_counts.iter().product()
    }

    pub fn payoffs(&self, player: usize) -> &[Rational] {
        &self.payoffs[player]
    }

    pub fn set_payoffs(&mut self, player: usize, tensor: Vec<Rational>) -> Result<()> {
        if tensor.len() != self.size() {
            return Err(Error::DimensionMismatch {
                expected: self.size(),
                got: tensor.len(),
            });
        }
        self.payoffs[player] = tensor;
        Ok(())
    }

    /// Row-major strides (last axis has stride 1).
    pub fn strides(&self) -> Vec<usize> {
        strides(&self.strategy_counts)
    }

    pub fn flat_index(&self, pure: &[usize]) -> usize {
        pure.iter().zip(self.strides()).map(|(s, st)| s * st).sum()
    }

    pub fn payoff_at(&self, player: usize, pure: &[usize]) -> &Rational {
        &self.payoffs[player][self.flat_index(pure)]
    }

    fn check_player(&self, i: usize) -> Result<()> {
        if i >= self.players() {
            return Err(Error::IndexOutOfRange {
                index: i,
                limit: self.players(),
            });
        }
        Ok(())
    }

    fn check_profile<T: Scalar>(&self, profile: &MixedProfile<T>) -> Result<()> {
        if profile.players() != self.players() {
            return Err(Error::DimensionMismatch {
                expected: self.players(),
                got: profile.players(),
            });
        }
        for (k, (v, &c)) in profile.strategies.iter().zip(&self.strategy_counts).enumerate() {
            if v.len() != c {
                return Err(Error::InvalidProfile(format!(
                    "player {} has {} probabilities, expected {c}",
                    k + 1,
                    v.len()
                )));
            }
        }
        Ok(())
    }
}

pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut out = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        out[k] = out[k + 1] * dims[k + 1];
    }
    out
}

/// One probability vector per player, in exact (`Rational`) or float mode.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedProfile<T> {
    strategies: Vec<Vec<T>>,
}

pub type ExactProfile = MixedProfile<Rational>;
pub type FloatProfile = MixedProfile<f64>;

/// Float-mode tolerance on each probability vector's sum.
pub const FLOAT_SUM_TOLERANCE: f64 = 1e-12;

/// Default residual tolerance for float-mode verification.
pub const DEFAULT_FLOAT_TOL: f64 = 1e-9;

impl<T: Scalar> MixedProfile<T> {
    /// Validates that every entry lies in `[0,1]` and each vector sums to 1
    /// (exactly, or within [`FLOAT_SUM_TOLERANCE`] in float mode).
    pub fn new(strategies: Vec<Vec<T>>) -> Result<Self> {
        for (k, v) in strategies.iter().enumerate() {
            if v.is_empty() {
                return Err(Error::InvalidProfile(format!("player {} has no strategies", k + 1)));
            }
            if v.iter().any(|p| *p < T::zero() || *p > T::one()) {
                return Err(Error::InvalidProfile(format!(
                    "player {} has a probability outside [0,1]",
                    k + 1
                )));
            }
            let sum = v.iter().cloned().fold(T::zero(), |a, b| a + b);
            let ok = if T::EXACT {
                sum == T::one()
            } else {
                (sum.as_f64() - 1.0).abs() <= FLOAT_SUM_TOLERANCE
            };
            if !ok {
                return Err(Error::InvalidProfile(format!(
                    "player {} probabilities sum to {:?}",
                    k + 1,
                    sum
                )));
            }
        }
        Ok(MixedProfile { strategies })
    }

    /// Build without validation; residual computations remain well defined
    /// for any real weights.
    pub fn new_unchecked(strategies: Vec<Vec<T>>) -> Self {
        MixedProfile { strategies }
    }

    /// Uniform mixing for every player.
    pub fn uniform(counts: &[usize]) -> Self {
        let strategies = counts
            .iter()
            .map(|&c| {
                let p = T::from_rational(&Rational::new(1.into(), (c as i64).into()));
                vec![p; c]
            })
            .collect();
        MixedProfile { strategies }
    }

    pub fn players(&self) -> usize {
        self.strategies.len()
    }

    pub fn player(&self, i: usize) -> &[T] {
        &self.strategies[i]
    }

    pub fn strategies(&self) -> &[Vec<T>] {
        &self.strategies
    }

    pub fn is_totally_mixed(&self) -> bool {
        self.strategies
            .iter()
            .all(|v| v.len() == 1 || v.iter().all(is_in_open_unit))
    }

    pub fn to_f64(&self) -> FloatProfile {
        MixedProfile {
            strategies: self
                .strategies
                .iter()
                .map(|v| v.iter().map(Scalar::as_f64).collect())
                .collect(),
        }
    }
}

/// Contract player `i`'s tensor against every other player's mixed strategy,
/// leaving a vector indexed by player `keep`'s pure strategies.
fn contract_except<T: Scalar>(game: &Game, i: usize, profile: &MixedProfile<T>, keep: usize) -> Vec<T> {
    let dims = &game.strategy_counts;
    let n = dims.len();
    let mut acc = vec![T::zero(); dims[keep]];
    let mut idx = vec![0usize; n];
    for u in &game.payoffs[i] {
        if !u.is_zero() {
            let mut w = T::from_rational(u);
            for (k, &s) in idx.iter().enumerate() {
                if k != keep {
                    w = w * profile.strategies[k][s].clone();
                }
            }
            let slot = &mut acc[idx[keep]];
            *slot = slot.clone() + w;
        }
        for k in (0..n).rev() {
            idx[k] += 1;
            if idx[k] < dims[k] {
                break;
            }
            idx[k] = 0;
        }
    }
    acc
}

/// `u_i(σ) = Σ_s u_i(s) Π_k σ_k(s_k)`.
pub fn expected_payoff<T: Scalar>(game: &Game, i: usize, profile: &MixedProfile<T>) -> Result<T> {
    game.check_player(i)?;
    game.check_profile(profile)?;
    let per_pure = contract_except(game, i, profile, i);
    Ok(per_pure
        .into_iter()
        .zip(&profile.strategies[i])
        .fold(T::zero(), |a, (v, p)| a + v * p.clone()))
}

/// `u_i(s_ij, σ_{-i})`.
pub fn pure_vs_profile_payoff<T: Scalar>(game: &Game, i: usize, j: usize, profile: &MixedProfile<T>) -> Result<T> {
    game.check_player(i)?;
    if j >= game.strategy_counts[i] {
        return Err(Error::IndexOutOfRange {
            index: j,
            limit: game.strategy_counts[i],
        });
    }
    game.check_profile(profile)?;
    Ok(contract_except(game, i, profile, i).swap_remove(j))
}

/// Indifference residuals `u_i(s_ij, σ_{-i}) - u_i(s_i0, σ_{-i})`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport<T> {
    /// `residuals[i][j-1]` for `j = 1..d_i`.
    pub residuals: Vec<Vec<T>>,
    pub max_abs: T,
    /// `interior[i][j]`: whether `σ_i(s_ij)` lies strictly inside (0,1).
    pub interior: Vec<Vec<bool>>,
}

impl<T: Scalar> ResidualReport<T> {
    pub fn count(&self) -> usize {
        self.residuals.iter().map(Vec::len).sum()
    }

    pub fn all_interior(&self) -> bool {
        self.interior.iter().flatten().all(|&b| b)
    }

    pub fn passes(&self, tol: &T) -> bool {
        self.all_interior() && self.max_abs <= *tol
    }
}

pub fn indifference_residuals<T: Scalar>(game: &Game, profile: &MixedProfile<T>) -> Result<ResidualReport<T>> {
    game.check_profile(profile)?;
    let mut residuals = Vec::with_capacity(game.players());
    let mut max_abs = T::zero();
    for i in 0..game.players() {
        let per_pure = contract_except(game, i, profile, i);
        let base = per_pure[0].clone();
        let row: Vec<T> = per_pure[1..].iter().map(|v| v.clone() - base.clone()).collect();
        for r in &row {
            let a = r.abs();
            if a > max_abs {
                max_abs = a;
            }
        }
        residuals.push(row);
    }
    let interior = profile
        .strategies
        .iter()
        .map(|v| v.iter().map(|p| v.len() == 1 || is_in_open_unit(p)).collect())
        .collect();
    Ok(ResidualReport {
        residuals,
        max_abs,
        interior,
    })
}

/// Every probability strictly inside (0,1) and every residual within `tol`.
/// Exact callers pass `tol = 0`.
pub fn is_totally_mixed_equilibrium<T: Scalar>(game: &Game, profile: &MixedProfile<T>, tol: &T) -> bool {
    if !profile.is_totally_mixed() {
        return false;
    }
    match indifference_residuals(game, profile) {
        Ok(report) => report.max_abs <= *tol,
        Err(_) => false,
    }
}

/// Exact identity profile helper: the point mass on `j` for a player with
/// `count` strategies.
pub fn point_mass<T: Scalar>(count: usize, j: usize) -> Vec<T> {
    (0..count).map(|k| if k == j { T::one() } else { T::zero() }).collect()
}
