use super::{check_nonconstant, AffineExpr, EncodingWitness, Method};
use crate::error::{Error, Result};
use crate::game::Game;
use crate::polysys::{degree_profile, Monomial, PolySystem, Polynomial};
use crate::rational::{rat, Rational};
use crate::synth::{game_from_equations, MultilinearEquation, Slot};

/// How replay sets a binary player's probability of strategy 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlayerRole {
    /// A monomial of the variety point.
    Coord(Monomial),
    /// A constant.
    Fixed(Rational),
    /// Unconstrained; replay uses 1/2.
    Free,
}

/// Equations of the binary-player construction, before synthesis.
/// Variable `k` of every polynomial is player `k`'s probability of
/// strategy 1, and `equations[k]` is the equation player `k` owns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinarySystem {
    pub equations: Vec<Polynomial>,
    pub roles: Vec<PlayerRole>,
}

impl BinarySystem {
    pub fn players(&self) -> usize {
        self.equations.len()
    }
}

/// `owner_of[e]` is the index (into the owner list) assigned to equation `e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationAssignment {
    pub owner_of: Vec<usize>,
}

/// Perfect matching of equations to owner variables such that no owner's
/// variable occurs in its equation. Augmenting paths, edges explored in
/// index order.
pub fn assign_equations(equations: &[Polynomial], owners: &[usize]) -> Result<EquationAssignment> {
    if equations.len() != owners.len() {
        return Err(Error::DimensionMismatch {
            expected: owners.len(),
            got: equations.len(),
        });
    }
    let admissible = |o: usize, e: usize| equations[e].degree_in(owners[o]) == 0;

    fn augment(
        o: usize,
        seen: &mut [bool],
        match_eq: &mut [Option<usize>],
        admissible: &dyn Fn(usize, usize) -> bool,
    ) -> bool {
        for e in 0..match_eq.len() {
            if seen[e] || !admissible(o, e) {
                continue;
            }
            seen[e] = true;
            if match_eq[e].is_none_or(|other| augment(other, seen, match_eq, admissible)) {
                match_eq[e] = Some(o);
                return true;
            }
        }
        false
    }

    let mut match_eq: Vec<Option<usize>> = vec![None; equations.len()];
    for o in 0..owners.len() {
        let mut seen = vec![false; equations.len()];
        if !augment(o, &mut seen, &mut match_eq, &admissible) {
            return Err(Error::NoPerfectMatching);
        }
    }
    Ok(EquationAssignment {
        owner_of: match_eq.into_iter().map(|o| o.expect("perfect matching")).collect(),
    })
}

/// Rewrite `poly` (in the system's `n` variables) over `players`
/// variables, replacing `x_i^e` by `sub(i, e)`.
fn substitute(poly: &Polynomial, players: usize, sub: &dyn Fn(usize, u32) -> Polynomial) -> Polynomial {
    let mut out = Polynomial::zero(players);
    for (m, c) in poly.terms() {
        let mut term = Polynomial::constant(players, c.clone());
        for (i, &e) in m.exponents().iter().enumerate() {
            if e > 0 {
                term = &term * &sub(i, e);
            }
        }
        out = &out + &term;
    }
    out
}

fn var(players: usize, k: usize) -> Polynomial {
    Polynomial::var(players, k)
}

fn eq_vars(players: usize, a: usize, b: &Polynomial) -> Polynomial {
    &var(players, a) - b
}

fn half() -> Rational {
    rat(1, 2)
}

/// Equation set and player roles of the binary-player construction.
///
/// Players are `p_1..p_n`, then `m - n` extra players when `m > n`, then
/// one chain player per power `x_i^k`. With `reduce_players` and `n > m`
/// the top powers are written `p_i · p_{i(d_i-1)}`, and `m` new players
/// take over the `F_j`.
pub fn binary_equations(sys: &PolySystem, reduce_players: bool) -> Result<BinarySystem> {
    check_nonconstant(sys)?;
    let (n, m) = (sys.n(), sys.m());
    let degs: Vec<u32> = degree_profile(sys).per_variable;
    let active: Vec<usize> = (0..n).filter(|&i| degs[i] > 0).collect();
    let d_prime: u32 = degs.iter().sum();
    let big = m.max(n);
    let fs = sys.polys();

    let mut roles: Vec<PlayerRole> = (0..big)
        .map(|k| {
            if k < n {
                PlayerRole::Coord(Monomial::var(n, k))
            } else {
                PlayerRole::Free
            }
        })
        .collect();

    // Owners of F_1.. in the first block: `lead` first, then the rest in order.
    let first_block =
        |lead: Option<usize>| -> Vec<usize> { lead.into_iter().chain((0..big).filter(|&k| Some(k) != lead)).collect() };

    match (d_prime, active.as_slice()) {
        (1, &[i]) => {
            let players = big + 1;
            let c = big;
            let mut eqs = vec![Polynomial::zero(players); players];
            let sub = |l: usize, e: u32| var(players, l).pow(e);
            eqs[c] = substitute(&fs[0], players, &sub);
            eqs[i] = eq_vars(players, c, &Polynomial::constant(players, half()));
            let rest: Vec<usize> = (0..big).filter(|&k| k != i).collect();
            for (owner, f) in rest.iter().zip(&fs[1..]) {
                eqs[*owner] = substitute(f, players, &sub);
            }
            roles.push(PlayerRole::Fixed(half()));
            Ok(BinarySystem { equations: eqs, roles })
        }
        (2, &[i, l]) => {
            let players = big + 2;
            let (ci, cl) = (big, big + 1);
            let mut eqs = vec![Polynomial::zero(players); players];
            let sub = |v: usize, e: u32| {
                debug_assert_eq!(e, 1);
                var(players, if v == i { ci } else { cl })
            };
            for (owner, f) in first_block(None).into_iter().zip(fs) {
                eqs[owner] = substitute(f, players, &sub);
            }
            eqs[ci] = eq_vars(players, cl, &var(players, l));
            eqs[cl] = eq_vars(players, ci, &var(players, i));
            roles.push(PlayerRole::Coord(Monomial::var(n, i)));
            roles.push(PlayerRole::Coord(Monomial::var(n, l)));
            Ok(BinarySystem { equations: eqs, roles })
        }
        (2, &[i]) => {
            let players = big + 2;
            let (c1, c2) = (big, big + 1);
            let mut eqs = vec![Polynomial::zero(players); players];
            let chain_only = |_: usize, e: u32| match e {
                1 => var(players, c1),
                _ => &var(players, c1) * &var(players, c2),
            };
            let mixed = |_: usize, e: u32| match e {
                1 => var(players, i),
                _ => &var(players, i) * &var(players, c1),
            };
            for (t, (owner, f)) in first_block(Some(i)).into_iter().zip(fs).enumerate() {
                eqs[owner] = if t == 0 {
                    substitute(f, players, &chain_only)
                } else {
                    substitute(f, players, &mixed)
                };
            }
            eqs[c1] = eq_vars(players, c2, &var(players, i));
            eqs[c2] = eq_vars(players, c1, &var(players, i));
            roles.push(PlayerRole::Coord(Monomial::var(n, i)));
            roles.push(PlayerRole::Coord(Monomial::var(n, i)));
            Ok(BinarySystem { equations: eqs, roles })
        }
        _ if reduce_players && n > m => reduced(sys, &degs),
        _ => general(sys, &degs, roles),
    }
}

/// Chain players `p_ik`, `k = 1..=len(i)`, numbered from `start`.
fn chain_index(degs: &[u32], len: impl Fn(u32) -> u32, start: usize) -> (Vec<Vec<usize>>, usize) {
    let mut next = start;
    let idx = degs
        .iter()
        .map(|&d| {
            (0..len(d))
                .map(|_| {
                    next += 1;
                    next - 1
                })
                .collect()
        })
        .collect();
    (idx, next)
}

/// `p_i1 = p_i`, `p_ik = p_i · p_i(k-1)`, as (equation, owner variable) lists.
fn chain_equations(players: usize, chain: &[Vec<usize>]) -> Vec<Polynomial> {
    let mut eqs = Vec::new();
    for (i, row) in chain.iter().enumerate() {
        for (k, &c) in row.iter().enumerate() {
            let rhs = if k == 0 {
                var(players, i)
            } else {
                &var(players, i) * &var(players, row[k - 1])
            };
            eqs.push(eq_vars(players, c, &rhs));
        }
    }
    eqs
}

fn chain_roles(n: usize, chain: &[Vec<usize>]) -> Vec<PlayerRole> {
    chain
        .iter()
        .enumerate()
        .flat_map(|(i, row)| {
            (1..=row.len()).map(move |k| {
                let mut e = vec![0; n];
                e[i] = k as u32;
                PlayerRole::Coord(Monomial::new(e))
            })
        })
        .collect()
}

fn general(sys: &PolySystem, degs: &[u32], mut roles: Vec<PlayerRole>) -> Result<BinarySystem> {
    let (n, m) = (sys.n(), sys.m());
    let big = m.max(n);
    let (chain, players) = chain_index(degs, |d| d, big);
    let mut eqs = vec![Polynomial::zero(players); players];
    let sub = |i: usize, e: u32| var(players, chain[i][e as usize - 1]);
    for (j, f) in sys.polys().iter().enumerate() {
        eqs[j] = substitute(f, players, &sub);
    }
    let chain_eqs = chain_equations(players, &chain);
    let owners: Vec<usize> = (big..players).collect();
    let assignment = assign_equations(&chain_eqs, &owners)?;
    for (e, &o) in assignment.owner_of.iter().enumerate() {
        eqs[owners[o]] = chain_eqs[e].clone();
    }
    roles.extend(chain_roles(n, &chain));
    Ok(BinarySystem { equations: eqs, roles })
}

fn reduced(sys: &PolySystem, degs: &[u32]) -> Result<BinarySystem> {
    let (n, m) = (sys.n(), sys.m());
    let (chain, after_chain) = chain_index(degs, |d| d.saturating_sub(1), n);
    let players = after_chain + m;
    let q = |j: usize| after_chain + j;
    let sub = |i: usize, e: u32| {
        if e < degs[i] {
            var(players, chain[i][e as usize - 1])
        } else if degs[i] == 1 {
            var(players, i)
        } else {
            &var(players, i) * &var(players, chain[i][degs[i] as usize - 2])
        }
    };
    let mut eqs: Vec<Polynomial> = vec![Polynomial::zero(players); players];
    for (j, f) in sys.polys().iter().enumerate() {
        eqs[q(j)] = substitute(f, players, &sub);
        eqs[j] = eq_vars(players, q(j), &Polynomial::constant(players, half()));
    }
    let chain_eqs = chain_equations(players, &chain);
    let owners: Vec<usize> = (n..after_chain).collect();
    match assign_equations(&chain_eqs, &owners) {
        Ok(a) => {
            for (e, &o) in a.owner_of.iter().enumerate() {
                eqs[owners[o]] = chain_eqs[e].clone();
            }
        }
        Err(_) => {
            // Rematch everything: chain equations plus the equations
            // already placed on p_1..p_n, the chain players and the q_j.
            let mut pool: Vec<Polynomial> = Vec::with_capacity(players);
            for k in (0..n).chain(after_chain..players) {
                pool.push(eqs[k].clone());
            }
            pool.extend(chain_eqs);
            let all: Vec<usize> = (0..players).collect();
            let a = assign_equations(&pool, &all)?;
            for (e, &o) in a.owner_of.iter().enumerate() {
                eqs[o] = pool[e].clone();
            }
        }
    }
    let mut roles: Vec<PlayerRole> = (0..n).map(|i| PlayerRole::Coord(Monomial::var(n, i))).collect();
    roles.extend(chain_roles(n, &chain));
    roles.extend((0..m).map(|_| PlayerRole::Fixed(half())));
    Ok(BinarySystem { equations: eqs, roles })
}

fn multilinear_terms(poly: &Polynomial) -> Result<Vec<(Vec<Slot>, Rational)>> {
    poly.terms()
        .map(|(mono, c)| {
            let mut slots = Vec::new();
            for (k, &e) in mono.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => slots.push((k, 1)),
                    _ => return Err(Error::MalformedEquations(format!("player {} appears squared", k + 1))),
                }
            }
            Ok((slots, c.clone()))
        })
        .collect()
}

pub fn encode_binary(sys: &PolySystem, reduce_players: bool) -> Result<(Game, EncodingWitness)> {
    let bs = binary_equations(sys, reduce_players)?;
    let players = bs.players();
    let formats = vec![2; players];
    let eqs = bs
        .equations
        .iter()
        .enumerate()
        .map(|(k, p)| {
            Ok(vec![MultilinearEquation::from_terms(
                k,
                1,
                &formats,
                multilinear_terms(p)?,
            )?])
        })
        .collect::<Result<Vec<_>>>()?;
    let game = game_from_equations(&formats, &eqs)?;

    let mut map = Vec::new();
    let mut fixed = Vec::new();
    let mut free = 0;
    for (k, role) in bs.roles.iter().enumerate() {
        match role {
            PlayerRole::Coord(mono) => map.push(((k, 1), mono.clone())),
            PlayerRole::Fixed(v) => fixed.push(((k, 1), AffineExpr::constant(v.clone()))),
            PlayerRole::Free => free += 1,
        }
    }
    let witness = EncodingWitness {
        method: Method::Binary,
        formats,
        system: sys.clone(),
        normalization: None,
        map,
        chain: Vec::new(),
        fixed,
        simplex: free,
    };
    Ok((game, witness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::indifference_residuals;
    use crate::polysys::parse_system;
    use crate::rational::int;
    use proptest::prelude::*;

    fn sys(src: &str) -> PolySystem {
        parse_system(src).unwrap()
    }

    fn polys(vars: usize, eqs: &[&str]) -> Vec<Polynomial> {
        let names: Vec<String> = (1..=vars).map(|k| format!("x{k}")).collect();
        eqs.iter()
            .map(|e| {
                if *e == "0" {
                    return Polynomial::zero(vars);
                }
                let src = format!("vars: {}\neq: {e} = 0", names.join(" "));
                parse_system(&src).unwrap().polys()[0].clone()
            })
            .collect()
    }

    fn zero_residual(game: &Game, w: &EncodingWitness, x: &[Rational]) -> bool {
        let r = w.replay(x).unwrap();
        r.on_variety(&int(0)) && indifference_residuals(game, &r.profile).unwrap().max_abs == int(0)
    }

    #[test]
    fn quadratic_uses_the_three_player_display() {
        let s = sys("vars: x1\neq: x1^2 - x1 + 3/16 = 0");
        let bs = binary_equations(&s, false).unwrap();
        assert_eq!(bs.equations, polys(3, &["x2*x3 - x2 + 3/16", "x3 - x1", "x2 - x1"]));
        let (game, w) = encode_binary(&s, false).unwrap();
        assert_eq!(game.players(), 3);
        let r = w.replay(&[rat(3, 4)]).unwrap();
        assert_eq!(r.profile.strategies(), &vec![vec![rat(1, 4), rat(3, 4)]; 3][..]);
        assert!(zero_residual(&game, &w, &[rat(1, 4)]));
        assert!(zero_residual(&game, &w, &[rat(3, 4)]));
    }

    #[test]
    fn linear_pins_the_chain_player() {
        let s = sys("vars: x1\neq: x1 - 1/2 = 0");
        let bs = binary_equations(&s, false).unwrap();
        assert_eq!(bs.equations, polys(2, &["x2 - 1/2", "x1 - 1/2"]));
        let (game, w) = encode_binary(&s, false).unwrap();
        assert!(zero_residual(&game, &w, &[rat(1, 2)]));
    }

    #[test]
    fn bilinear_swaps_chain_owners() {
        let s = sys("vars: x1 x2\neq: x1*x2 - 1/8 = 0");
        let bs = binary_equations(&s, false).unwrap();
        assert_eq!(bs.equations, polys(4, &["x3*x4 - 1/8", "0", "x4 - x2", "x3 - x1"]));
        let (game, w) = encode_binary(&s, false).unwrap();
        assert!(zero_residual(&game, &w, &[rat(1, 2), rat(1, 4)]));
    }

    #[test]
    fn cubic_chain_matching_example() {
        // Owners p11, p12, p13 are variables 1, 2, 3; p1 is variable 0.
        let eqs = polys(4, &["x2 - x1", "x3 - x1*x2", "x4 - x1*x3"]);
        let a = assign_equations(&eqs, &[1, 2, 3]).unwrap();
        // eq1 -> p12, eq2 -> p13, eq3 -> p11
        assert_eq!(a.owner_of, vec![1, 2, 0]);
        let reversed: Vec<Polynomial> = eqs.iter().rev().cloned().collect();
        let b = assign_equations(&reversed, &[1, 2, 3]).unwrap();
        for (e, &o) in b.owner_of.iter().enumerate() {
            assert_eq!(reversed[e].degree_in([1, 2, 3][o]), 0);
        }
        let stuck = polys(2, &["x1 + x2", "x1"]);
        assert_eq!(assign_equations(&stuck, &[0, 1]), Err(Error::NoPerfectMatching));
    }

    #[test]
    fn reduction_saves_players() {
        let s = sys("vars: x1 x2\neq: x1^2 + x2^2 - 5/16 = 0");
        let root = [rat(1, 4), rat(1, 2)];
        let (full, wf) = encode_binary(&s, false).unwrap();
        assert_eq!(full.players(), 6);
        assert!(zero_residual(&full, &wf, &root));
        let (small, ws) = encode_binary(&s, true).unwrap();
        assert_eq!(small.players(), 5);
        assert!(zero_residual(&small, &ws, &root));
    }

    #[test]
    fn extra_players_for_overdetermined_systems() {
        let s = sys("vars: x1\neq: x1^3 - 1/8 = 0\neq: x1^2 - 1/4 = 0");
        let (game, w) = encode_binary(&s, false).unwrap();
        assert_eq!(game.players(), 3 + 2);
        assert_eq!(w.simplex, 1);
        assert!(zero_residual(&game, &w, &[rat(1, 2)]));
    }

    fn arb_profile() -> impl Strategy<Value = Vec<Vec<u32>>> {
        (1usize..=4, 1usize..=3).prop_flat_map(|(n, m)| {
            prop::collection::vec(prop::collection::vec(0u32..=4, n), m).prop_filter(
                "D' >= 3 and no constant equation",
                |rows| {
                    let n = rows[0].len();
                    let dp: u32 = (0..n).map(|i| rows.iter().map(|r| r[i]).max().unwrap()).sum();
                    dp >= 3 && rows.iter().all(|r| r.iter().any(|&d| d > 0))
                },
            )
        })
    }

    /// `F_j = Σ_i (x_i^{d_ji} - r_i^{d_ji})` vanishes at `r`.
    fn system_for(rows: &[Vec<u32>], root: &[Rational]) -> PolySystem {
        let n = root.len();
        let polys = rows
            .iter()
            .map(|r| {
                let mut p = Polynomial::zero(n);
                for (i, &d) in r.iter().enumerate() {
                    if d > 0 {
                        let xi = Polynomial::var(n, i).pow(d);
                        let c = Polynomial::constant(n, num_traits::pow(root[i].clone(), d as usize));
                        p = &p + &(&xi - &c);
                    }
                }
                p
            })
            .collect();
        PolySystem::new(polys).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn owners_never_occur_in_their_equations(rows in arb_profile(), reduce in any::<bool>()) {
            let n = rows[0].len();
            let root: Vec<Rational> = (0..n).map(|i| rat(i as i64 + 1, n as i64 + 2)).collect();
            let s = system_for(&rows, &root);
            let bs = binary_equations(&s, reduce).unwrap();
            for (k, e) in bs.equations.iter().enumerate() {
                prop_assert_eq!(e.degree_in(k), 0);
            }
            if bs.players() <= 10 {
                let (game, w) = encode_binary(&s, reduce).unwrap();
                prop_assert!(zero_residual(&game, &w, &root));
            }
        }
    }
}
