use num_traits::Zero;

use super::{
    chain_equation_terms, check_nonconstant, select_scalings, AffineExpr, ChainStep, EncodingWitness, Method, Operand,
    StepTarget,
};
use crate::error::{Error, Result};
use crate::game::Game;
use crate::polysys::{
    capacity_3p, degree_profile, horner_decompose, Box, DegreeProfile, HornerForm, Monomial, PolySystem,
};
use crate::rational::{rat, Rational};
use crate::synth::{game_from_equations, MultilinearEquation, Slot};

const ALICE: usize = 0;
const BOB: usize = 1;
const CRITTER: usize = 2;

fn collect_levels<'a>(
    node: &'a HornerForm,
    path: &mut Vec<usize>,
    levels: &mut Vec<Vec<(Vec<usize>, &'a HornerForm)>>,
) {
    if let HornerForm::Node { children, .. } = node {
        levels[path.len()].push((path.clone(), node));
        for (e, child) in children.iter().enumerate() {
            path.push(e);
            collect_levels(child, path, levels);
            path.pop();
        }
    }
}

/// Horner schedule of every equation. Within an equation, levels are
/// emitted innermost first (univariate in `a_n`), nodes of a level in
/// descending index order. Non-final steps define Bob's `b_1, b_2, ...`
/// in emission order; the last step of each equation is its constraint.
pub fn build_chain_3p(sys: &PolySystem, profile: &DegreeProfile) -> Result<Vec<ChainStep>> {
    check_nonconstant(sys)?;
    let n = sys.n();
    let order: Vec<usize> = (0..n).collect();
    let mut steps: Vec<ChainStep> = Vec::new();
    let mut next_b = 1;
    for (j, poly) in sys.polys().iter().enumerate() {
        let tree = horner_decompose(poly, &order);
        let mut levels = vec![Vec::new(); n];
        collect_levels(&tree, &mut Vec::new(), &mut levels);
        let first = steps.len();
        let mut values: std::collections::HashMap<Vec<usize>, Operand> = Default::default();
        for level in levels.iter_mut().rev() {
            level.sort_by(|a, b| b.0.cmp(&a.0));
            for (path, node) in level.iter() {
                let HornerForm::Node { var, children } = node else {
                    unreachable!("levels hold inner nodes")
                };
                let child_value = |e: usize| match &children[e] {
                    HornerForm::Leaf(c) => Operand::Const(c.clone()),
                    HornerForm::Node { .. } => {
                        let mut p = path.clone();
                        p.push(e);
                        values[&p].clone()
                    }
                };
                let d = children.len() - 1;
                let mut acc = child_value(d);
                for e in (0..d).rev() {
                    steps.push(ChainStep {
                        target: StepTarget::Constrain,
                        mult: Some(*var),
                        operand: acc,
                        addend: child_value(e),
                    });
                    acc = Operand::Step(steps.len() - 1);
                }
                values.insert(path.clone(), acc);
            }
        }
        match &values[&Vec::new()] {
            Operand::Step(last) => debug_assert_eq!(*last, steps.len() - 1),
            Operand::Const(_) => return Err(Error::ConstantEquation { index: j + 1 }),
        }
        debug_assert_eq!(steps.len() - first, profile.chain_len(j));
        let last = steps.len() - 1;
        for step in &mut steps[first..last] {
            step.target = StepTarget::Define((BOB, next_b));
            next_b += 1;
        }
    }
    Ok(steps)
}

fn fix_terms(slot: Slot, value: &Rational) -> Vec<(Vec<Slot>, Rational)> {
    vec![(vec![slot], Rational::from_integer(1.into())), (vec![], -value.clone())]
}

pub fn encode_three_player(sys: &PolySystem) -> Result<(Game, EncodingWitness)> {
    check_nonconstant(sys)?;
    let (n, m) = (sys.n(), sys.m());
    let profile = degree_profile(sys);
    let cap = capacity_3p(&profile);
    let d = cap.d;
    let formats = cap.formats.to_vec();
    let steps = build_chain_3p(sys, &profile)?;
    let scalings = select_scalings(&steps, &Box::unit(n), d - m);

    let slot_of = |k: usize| match steps[k].target {
        StepTarget::Define(s) => s,
        StepTarget::Constrain => unreachable!("constraints are never operands"),
    };
    let coord_slot = |v: usize| (ALICE, v + 1);

    let critter = (0..d)
        .map(|t| {
            let terms = chain_equation_terms(&steps, &scalings, t, &coord_slot, &slot_of);
            MultilinearEquation::from_terms(CRITTER, t + 1, &formats, terms)
        })
        .collect::<Result<Vec<_>>>()?;

    let c_value = rat(1, (d + 1) as i64);
    let fix_eq = |owner: usize, index: usize, f: usize| {
        if f < d {
            MultilinearEquation::from_terms(owner, index, &formats, fix_terms((CRITTER, f + 1), &c_value))
        } else {
            Ok(MultilinearEquation::zero(owner, index, &formats))
        }
    };
    let alice = (0..n).map(|i| fix_eq(ALICE, i + 1, i)).collect::<Result<Vec<_>>>()?;
    let bob = (0..d - m)
        .map(|k| fix_eq(BOB, k + 1, n + k))
        .collect::<Result<Vec<_>>>()?;
    let game = game_from_equations(&formats, &[alice, bob, critter])?;

    let fixed_count = (n + d - m).min(d);
    let witness = EncodingWitness {
        method: Method::ThreePlayer,
        formats,
        system: sys.clone(),
        normalization: None,
        map: (0..n).map(|i| ((ALICE, i + 1), Monomial::var(n, i))).collect(),
        chain: steps.into_iter().zip(scalings).collect(),
        fixed: (0..fixed_count)
            .map(|f| ((CRITTER, f + 1), AffineExpr::constant(c_value.clone())))
            .collect(),
        simplex: m.saturating_sub(n),
    };
    debug_assert!(witness.fixed.iter().all(|(_, e)| !e.constant.is_zero()));
    Ok((game, witness))
}
