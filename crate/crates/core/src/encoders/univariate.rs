use num_traits::Zero;

use super::{
    chain_equation_terms, select_scalings, AffineExpr, ChainStep, EncodingWitness, Method, Operand, StepTarget,
};
use crate::error::{Error, Result};
use crate::game::Game;
use crate::polysys::{formats_1d, Box, Monomial, PolySystem};
use crate::rational::{int, rat, Rational};
use crate::synth::{game_from_equations, MultilinearEquation, Slot};

const ALICE: usize = 0;
const BOB: usize = 1;
const CRITTER: usize = 2;
const A: Slot = (ALICE, 1);

/// Compact encoding of `Σ_k α_k a^k` with Alice on two strategies and Bob
/// and Critter on `⌈d/2⌉ + 1` each.
///
/// The Horner values `r_{d-1} = α_{d-1} + a·α_d`, `r_k = α_k + a·r_{k+1}`
/// are carried by `c_k` (`k ≤ e`) and by `b_{k-e+1}` (`k ≥ e`), sharing
/// one scaling at `r_e`. Bob's equations are written in `c`, Critter's in
/// `b`, and Alice ties `c_e = b_1`. For odd `d` Critter's last equation
/// pins `b_e = 1/2 - (b_1 + ... + b_{e-1})/2`.
pub fn encode_univariate(coeffs: &[Rational]) -> Result<(Game, EncodingWitness)> {
    if coeffs.iter().all(Zero::is_zero) {
        return Err(Error::ZeroPolynomial);
    }
    let d = coeffs.len().saturating_sub(1);
    if coeffs[d].is_zero() {
        return Err(Error::LeadingCoefficientZero);
    }
    if d == 0 {
        return Err(Error::ConstantEquation { index: 1 });
    }
    let e = d.div_ceil(2);
    let odd = d % 2 == 1;
    let formats = formats_1d(d).to_vec();

    // Step t computes r_{d-1-t}; the last step is the constraint r_0 = 0.
    let idx = |k: usize| d - 1 - k;
    let raw_of = |t: usize| d - 1 - t;
    let steps: Vec<ChainStep> = (0..d)
        .map(|t| {
            let k = raw_of(t);
            let target = match k {
                0 => StepTarget::Constrain,
                k if k <= e => StepTarget::Define((CRITTER, k)),
                k => StepTarget::Define((BOB, k - e + 1)),
            };
            let operand = if k == d - 1 {
                Operand::Const(coeffs[d].clone())
            } else {
                Operand::Step(idx(k + 1))
            };
            ChainStep {
                target,
                mult: Some(0),
                operand,
                addend: Operand::Const(coeffs[k].clone()),
            }
        })
        .collect();
    let scalings = select_scalings(&steps, &Box::unit(1), e);

    let coord = |_: usize| A;
    let in_c = |t: usize| (CRITTER, raw_of(t));
    let in_b = |t: usize| (BOB, raw_of(t) + 1 - e);
    let b = |j: usize| (BOB, j);
    let c = |k: usize| (CRITTER, k);
    let one = int(1);
    let half = rat(1, 2);

    let mut bob = Vec::with_capacity(e);
    let mut critter = Vec::with_capacity(e);
    let mut fixed: Vec<(Slot, AffineExpr)> = Vec::new();
    if d == 1 {
        // c_1 stands for the constant α_1 with s = 1, δ = α_1 - 1/2.
        let terms = vec![
            (vec![], coeffs[0].clone()),
            (vec![A, c(1)], one.clone()),
            (vec![A], &coeffs[1] - &half),
        ];
        bob.push(MultilinearEquation::from_terms(BOB, 1, &formats, terms)?);
        let pin = vec![(vec![b(1)], one.clone()), (vec![], -half.clone())];
        critter.push(MultilinearEquation::from_terms(CRITTER, 1, &formats, pin)?);
        fixed.push((b(1), AffineExpr::constant(half.clone())));
        fixed.push((
            c(1),
            AffineExpr {
                constant: Rational::zero(),
                terms: vec![(b(1), one.clone())],
            },
        ));
    } else {
        for k in 0..e {
            let terms = chain_equation_terms(&steps, &scalings, idx(k), &coord, &in_c);
            bob.push(MultilinearEquation::from_terms(BOB, k + 1, &formats, terms)?);
        }
        let critter_chain = if odd { e - 1 } else { e };
        for j in 1..=critter_chain {
            let terms = chain_equation_terms(&steps, &scalings, idx(e + j - 1), &coord, &in_b);
            critter.push(MultilinearEquation::from_terms(CRITTER, j, &formats, terms)?);
        }
        fixed.push((
            b(1),
            AffineExpr {
                constant: Rational::zero(),
                terms: vec![(c(e), one.clone())],
            },
        ));
        if odd {
            let mut pin = vec![(vec![b(e)], one.clone()), (vec![], -half.clone())];
            pin.extend((1..e).map(|j| (vec![b(j)], half.clone())));
            critter.push(MultilinearEquation::from_terms(CRITTER, e, &formats, pin)?);
            fixed.push((
                b(e),
                AffineExpr {
                    constant: half.clone(),
                    terms: (1..e).map(|j| (b(j), -half.clone())).collect(),
                },
            ));
        }
    }
    let alice_terms = vec![(vec![c(e)], one.clone()), (vec![b(1)], -one)];
    let alice = vec![MultilinearEquation::from_terms(ALICE, 1, &formats, alice_terms)?];
    let game = game_from_equations(&formats, &[alice, bob, critter])?;

    let witness = EncodingWitness {
        method: Method::Univariate,
        formats,
        system: PolySystem::from_univariate(coeffs)?,
        normalization: None,
        map: vec![(A, Monomial::var(1, 0))],
        chain: steps.into_iter().zip(scalings).collect(),
        fixed,
        simplex: 0,
    };
    Ok((game, witness))
}
