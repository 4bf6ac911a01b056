//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use nashenc::encoders::{binary_equations, encode, encode_binary, encode_three_player, encode_univariate, Method};
use nashenc::game::{indifference_residuals, Game, MixedProfile};
use nashenc::polysys::{capacity_3p, capacity_np, degree_profile, formats_1d, parse_system, PolySystem, Polynomial};
use nashenc::rational::{int, rat, to_f64, Rational};
use nashenc::synth::{equations_from_payoffs, game_from_equations, MultilinearEquation};
use nashenc::verify::{
    check_points, cluster_points, grid_completeness, local_degree, power_map, roots_in_unit_interval, square_map_system,
};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check, Duration);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn quad() -> PolySystem {
    parse_system("vars: x1\neq: x1^2 - x1 + 3/16 = 0").unwrap()
}

/// `F_j = Π_i x_i^d + Σ_i (j+1)/(i+3) x_i - 1/(j+5)`: degree exactly `d`
/// in every variable of every equation.
fn uniform_system(n: usize, m: usize, d: u32) -> PolySystem {
    let polys = (0..m)
        .map(|j| {
            let mut p = Polynomial::constant(n, int(1));
            for i in 0..n {
                p = &p * &Polynomial::var(n, i).pow(d);
            }
            for i in 0..n {
                p = &p + &Polynomial::var(n, i).scale(&rat(j as i64 + 1, i as i64 + 3));
            }
            &p - &Polynomial::constant(n, rat(1, j as i64 + 5))
        })
        .collect();
    PolySystem::new(polys).unwrap()
}

fn format_counts() -> Check {
    for (n, m, d) in [(1usize, 1usize, 2u32), (2, 1, 2), (2, 2, 1)] {
        let sys = uniform_system(n, m, d);
        let big_d = m * ((1 + d as usize).pow(n as u32) - 1);
        let want = vec![n + 1, big_d - m + 1, big_d + 1];
        let cap = capacity_3p(&degree_profile(&sys));
        ensure(cap.d == big_d, || format!("({n},{m},{d}): D = {} != {big_d}", cap.d))?;
        let (game, _) = encode_three_player(&sys).map_err(|e| e.to_string())?;
        ensure(game.strategy_counts() == want.as_slice(), || {
            format!("({n},{m},{d}): 3p formats {:?} != {want:?}", game.strategy_counts())
        })?;
        let players = n * d as usize + m;
        ensure(capacity_np(&degree_profile(&sys)).players == players, || {
            format!("({n},{m},{d}): np capacity")
        })?;
        let (game, _) = encode_binary(&sys, true).map_err(|e| e.to_string())?;
        ensure(
            game.players() == players && game.strategy_counts().iter().all(|&k| k == 2),
            || {
                format!(
                    "({n},{m},{d}): np game has formats {:?}, want {players} binary players",
                    game.strategy_counts()
                )
            },
        )?;
        if n == 1 && m == 1 {
            let coeffs = sys.univariate_coeffs().map_err(|e| e.to_string())?;
            let (game, _) = encode_univariate(&coeffs).map_err(|e| e.to_string())?;
            let half = (d as usize).div_ceil(2) + 1;
            ensure(game.strategy_counts() == [2, half, half], || {
                format!("1d formats {:?}", game.strategy_counts())
            })?;
            ensure(formats_1d(d as usize) == [2, half, half], || "formats_1d".into())?;
        }
    }
    Ok(())
}

fn soundness() -> Check {
    let sys = quad();
    let points = vec![vec![rat(1, 4)], vec![rat(3, 4)]];
    for method in [Method::ThreePlayer, Method::Binary, Method::Univariate] {
        let (game, w) = encode(&sys, method, false, false).map_err(|e| e.to_string())?;
        let report = check_points(&game, &w, &points, &int(0)).map_err(|e| e.to_string())?;
        ensure(report.all_pass() && report.passed() == 2, || {
            format!("{method}: {}", report.to_text())
        })?;
        for p in &points {
            let r = w.replay_exact(p).map_err(|e| e.to_string())?;
            let res = indifference_residuals(&game, &r.profile).map_err(|e| e.to_string())?;
            ensure(res.max_abs.is_zero(), || format!("{method}: residual {}", res.max_abs))?;
            let interior = r
                .profile
                .strategies()
                .iter()
                .flatten()
                .all(|v| *v > int(0) && *v < int(1));
            ensure(interior, || {
                format!("{method}: profile at {p:?} not strictly inside (0,1)")
            })?;
        }
    }
    Ok(())
}

fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn completeness() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let grid = 2001;
    let radius = 2.0 / (grid as f64 + 1.0);
    for case in 0..20 {
        let k = rng.gen_range(0..=4usize);
        let mut coeffs = vec![rat(rng.gen_range(1..=6) * if rng.gen_bool(0.5) { 1 } else { -1 }, 1)];
        for _ in 0..k {
            coeffs = mul(&coeffs, &[-rat(rng.gen_range(1..=39), 40), int(1)]);
        }
        // Pad with factors that have no root in (0,1).
        let deg = coeffs.len() - 1;
        if deg + 2 <= 4 && (deg == 0 || rng.gen_bool(0.5)) {
            coeffs = mul(&coeffs, &[rat(rng.gen_range(1..=9), 8), int(0), int(1)]);
        } else if deg < 4 && rng.gen_bool(0.5) {
            coeffs = mul(&coeffs, &[rat(rng.gen_range(1..=9), 8), int(1)]);
        }
        let want = roots_in_unit_interval(&coeffs).map_err(|e| e.to_string())?.len();
        let (game, w) = encode_univariate(&coeffs).map_err(|e| e.to_string())?;
        let hits = grid_completeness(&game, &w, 0, &[0.5], grid, 1e-9).map_err(|e| e.to_string())?;
        let got = cluster_points(&hits, radius).len();
        ensure(got == want, || {
            format!("case {case} {coeffs:?}: {got} clusters, {want} roots")
        })?;
    }
    Ok(())
}

fn random_profile(rng: &mut ChaCha8Rng, formats: &[usize]) -> MixedProfile<Rational> {
    let strategies = formats
        .iter()
        .map(|&k| {
            let w: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=20)).collect();
            let s: i64 = w.iter().sum();
            w.into_iter().map(|x| rat(x, s)).collect()
        })
        .collect();
    MixedProfile::new(strategies).unwrap()
}

fn synthesis_round_trip() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    for case in 0..100 {
        let players = rng.gen_range(1..=3);
        let formats: Vec<usize> = (0..players).map(|_| rng.gen_range(1..=3)).collect();
        let eqs: Vec<Vec<MultilinearEquation>> = (0..players)
            .map(|i| {
                let size: usize = (0..players).filter(|&k| k != i).map(|k| formats[k]).product();
                (1..formats[i])
                    .map(|j| {
                        let coeffs = (0..size)
                            .map(|_| rat(rng.gen_range(-40..=40), rng.gen_range(1..=9)))
                            .collect();
                        MultilinearEquation::new(i, j, &formats, coeffs).unwrap()
                    })
                    .collect()
            })
            .collect();
        let game = game_from_equations(&formats, &eqs).map_err(|e| e.to_string())?;
        let back: Vec<_> = (0..players).map(|i| equations_from_payoffs(&game, i)).collect();
        ensure(back == eqs, || format!("case {case}: equations do not round-trip"))?;
        let again = game_from_equations(&formats, &back).map_err(|e| e.to_string())?;
        ensure(again == game, || format!("case {case}: payoffs do not round-trip"))?;
        for _ in 0..10 {
            let profile = random_profile(&mut rng, &formats);
            let res = indifference_residuals(&game, &profile).map_err(|e| e.to_string())?;
            for (i, per) in eqs.iter().enumerate() {
                for (e, r) in per.iter().zip(&res.residuals[i]) {
                    ensure(e.eval(&profile) == *r, || format!("case {case}: residual mismatch"))?;
                }
            }
        }
    }
    Ok(())
}

fn hall_matching() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let mut done = 0;
    while done < 50 {
        let n = rng.gen_range(1..=4usize);
        let m = rng.gen_range(1..=3usize);
        let degs: Vec<Vec<u32>> = (0..m).map(|_| (0..n).map(|_| rng.gen_range(0..=3)).collect()).collect();
        let d_prime: u32 = (0..n).map(|i| degs.iter().map(|r| r[i]).max().unwrap()).sum();
        if !(3..=12).contains(&d_prime) || degs.iter().any(|r| r.iter().all(|&d| d == 0)) {
            continue;
        }
        let polys = degs
            .iter()
            .map(|row| {
                let mut lead = Polynomial::constant(n, rat(rng.gen_range(1..=5), 1));
                let mut p = Polynomial::constant(n, rat(-1, rng.gen_range(2..=9)));
                for (i, &d) in row.iter().enumerate() {
                    lead = &lead * &Polynomial::var(n, i).pow(d);
                    if d > 0 {
                        p = &p + &Polynomial::var(n, i).pow(d).scale(&rat(rng.gen_range(-3..=3), 2));
                    }
                }
                &p + &lead
            })
            .collect();
        let sys = PolySystem::new(polys).unwrap();
        let reduce = rng.gen_bool(0.5);
        let bs = binary_equations(&sys, reduce).map_err(|e| format!("{degs:?}: {e}"))?;
        ensure(bs.equations.len() == bs.players(), || {
            format!("{degs:?}: assignment is not perfect")
        })?;
        for (k, eq) in bs.equations.iter().enumerate() {
            ensure(eq.n() == bs.players(), || {
                format!("{degs:?}: equation {k} over wrong players")
            })?;
            ensure(eq.degree_in(k) == 0, || {
                format!("{degs:?}: player {} owns an equation in its own variable", k + 1)
            })?;
        }
        done += 1;
    }
    Ok(())
}

fn special_cases() -> Check {
    let expect = |vars: &str, eqs: &[&str]| -> Vec<Polynomial> {
        let text: String = std::iter::once(format!("vars: {vars}\n"))
            .chain(eqs.iter().map(|e| format!("eq: {e} = 0\n")))
            .collect();
        parse_system(&text).unwrap().polys().to_vec()
    };
    let linear = parse_system("vars: x1\neq: x1 - 1/2 = 0").unwrap();
    let bs = binary_equations(&linear, false).map_err(|e| e.to_string())?;
    let want = expect("x1 x2", &["x2 - 1/2", "x1 - 1/2"]);
    ensure(bs.equations == want, || {
        format!(
            "D'=1: {:?}",
            bs.equations.iter().map(|p| p.to_string()).collect::<Vec<_>>()
        )
    })?;

    let bs = binary_equations(&quad(), false).map_err(|e| e.to_string())?;
    let want = expect("x1 x2 x3", &["x2*x3 - x2 + 3/16", "x3 - x1", "x2 - x1"]);
    ensure(bs.equations == want, || {
        format!(
            "D'=2: {:?}",
            bs.equations.iter().map(|p| p.to_string()).collect::<Vec<_>>()
        )
    })
}

fn topological_degree() -> Check {
    let (re, im) = power_map(2);
    let square = parse_system("vars: x1 x2\neq: x1^2 - x2^2 = 0\neq: 2*x1*x2 = 0").unwrap();
    ensure(square.polys() == [re.clone(), im.clone()], || {
        "power_map(2) differs from (x²-y², 2xy)".into()
    })?;
    let d2 = local_degree((&re, &im), [0.0, 0.0], 0.5, 64).map_err(|e| e.to_string())?;
    ensure(d2 == 2, || format!("z² degree {d2}"))?;
    let (re3, im3) = power_map(3);
    let d3 = local_degree((&re3, &im3), [0.0, 0.0], 0.5, 64).map_err(|e| e.to_string())?;
    ensure(d3 == 3, || format!("z³ degree {d3}"))?;

    let c = rat(1, 4);
    let sys = square_map_system(&c);
    let (game, w) = encode(&sys, Method::ThreePlayer, false, false).map_err(|e| e.to_string())?;
    let report = check_points(&game, &w, &[vec![c.clone(), c.clone()]], &int(0)).map_err(|e| e.to_string())?;
    ensure(report.all_pass(), || report.to_text())?;
    let off = check_points(&game, &w, &[vec![c.clone(), rat(1, 3)]], &int(0)).map_err(|e| e.to_string())?;
    ensure(!off.all_pass(), || "an off-variety point passed".into())
}

fn normalization() -> Check {
    let sys = parse_system("vars: x1\neq: x1 - 2 = 0").unwrap();
    let (game, w) = encode(&sys, Method::ThreePlayer, true, false).map_err(|e| e.to_string())?;
    let report = check_points(&game, &w, &[vec![int(2)]], &rat(1, 1_000_000_000)).map_err(|e| e.to_string())?;
    ensure(report.all_pass() && report.points[0].max_residual <= 1e-9, || {
        report.to_text()
    })?;

    // The cleared polynomial has one zero in the open cube, mapping back to
    // x = 2, and one outside it.
    let map = w.normalization.clone().ok_or("no normalization recorded")?;
    let g = w.system.univariate_coeffs().map_err(|e| e.to_string())?;
    let inside = roots_in_unit_interval(&g).map_err(|e| e.to_string())?;
    ensure(inside.len() == 1, || format!("{} zeros in the open cube", inside.len()))?;
    let x = map
        .to_original_f64(&inside.midpoints_f64())
        .ok_or("root maps outside the cube")?;
    ensure((x[0] - 2.0).abs() < 1e-9, || format!("cube zero maps to {}", x[0]))?;
    // Zeros at y < 0: roots of g(-y) in (0,1); none lie beyond y = 1.
    let flipped: Vec<Rational> = g
        .iter()
        .enumerate()
        .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
        .collect();
    let outside = roots_in_unit_interval(&flipped).map_err(|e| e.to_string())?;
    ensure(outside.len() + inside.len() == g.len() - 1, || {
        "zeros unaccounted for".into()
    })?;
    for y in outside.midpoints() {
        let y = -y;
        ensure(!map.in_cube(std::slice::from_ref(&y)), || {
            format!("extraneous zero {} inside the box", to_f64(&y))
        })?;
    }
    Ok(())
}

/// Whether player `i`'s payoff ignores player `k`'s strategy.
fn constant_along(game: &Game, i: usize, k: usize) -> bool {
    let counts = game.strategy_counts();
    let mut pure = vec![0usize; counts.len()];
    loop {
        if pure[k] == 0 {
            let base = game.payoff_at(i, &pure);
            for s in 1..counts[k] {
                let mut other = pure.clone();
                other[k] = s;
                if game.payoff_at(i, &other) != base {
                    return false;
                }
            }
        }
        let mut p = 0;
        loop {
            if p == counts.len() {
                return true;
            }
            pure[p] += 1;
            if pure[p] < counts[p] {
                break;
            }
            pure[p] = 0;
            p += 1;
        }
    }
}

fn sparsity() -> Check {
    let sys = quad();
    let bs = binary_equations(&sys, false).map_err(|e| e.to_string())?;
    let (game, _) = encode_binary(&sys, false).map_err(|e| e.to_string())?;
    ensure(game.players() == bs.players(), || "player count".into())?;
    for (i, eq) in bs.equations.iter().enumerate() {
        for k in (0..game.players()).filter(|&k| k != i) {
            let named = eq.degree_in(k) > 0;
            if !named {
                ensure(constant_along(&game, i, k), || {
                    format!("player {} payoff varies with unnamed player {}", i + 1, k + 1)
                })?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("format counts", format_counts, Duration::from_secs(1)),
        ("exact soundness", soundness, Duration::from_secs(1)),
        ("grid completeness", completeness, Duration::from_secs(30)),
        ("synthesis round trip", synthesis_round_trip, Duration::from_secs(30)),
        ("owner-absent matching", hall_matching, Duration::from_secs(5)),
        ("small-degree equation sets", special_cases, Duration::from_secs(1)),
        ("topological degree", topological_degree, Duration::from_secs(5)),
        ("normalization", normalization, Duration::from_secs(1)),
        ("payoff sparsity", sparsity, Duration::from_secs(1)),
    ];
    let mut failed = 0;
    for (k, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        let verdict = match outcome {
            Ok(()) if took <= *limit => "PASS".to_string(),
            Ok(()) => format!("FAIL (over the {limit:?} budget)"),
            Err(msg) => format!("FAIL ({msg})"),
        };
        if !verdict.starts_with("PASS") {
            failed += 1;
        }
        println!("criterion {} {name}: {verdict} [{:.3}s]", k + 1, took.as_secs_f64());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
