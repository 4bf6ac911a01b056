//! Change of variables `x = u/(1-u^2)`, `u = 2t-1`, `t = δy` moving a
//! variety in `R^n` into the open region `{y > 0, Σ y < 1}`.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::{degree_profile, PolySystem, Polynomial};
use crate::rational::{int, Rational};

/// Invertible map between original coordinates `x` and normalized
/// coordinates `y`, valid on the open cube `0 < y_i < 1/δ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateMap {
    n: usize,
    delta: Rational,
}

impl CoordinateMap {
    pub fn new(n: usize) -> Self {
        CoordinateMap {
            n,
            delta: int(n as i64),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    /// `y -> x`, or `None` outside the open cube (where `u = ±1` or the
    /// point belongs to the other branch of the map).
    pub fn to_original(&self, y: &[Rational]) -> Option<Vec<Rational>> {
        y.iter()
            .map(|yi| {
                let u = int(2) * &self.delta * yi - int(1);
                (u.abs() < Rational::one()).then(|| &u / (int(1) - &u * &u))
            })
            .collect()
    }

    pub fn to_original_f64(&self, y: &[f64]) -> Option<Vec<f64>> {
        let delta = crate::rational::to_f64(&self.delta);
        y.iter()
            .map(|&yi| {
                let u = 2.0 * delta * yi - 1.0;
                (u.abs() < 1.0).then(|| u / (1.0 - u * u))
            })
            .collect()
    }

    /// `x -> y` in floating point. Always defined.
    pub fn to_normalized_f64(&self, x: &[f64]) -> Vec<f64> {
        let delta = crate::rational::to_f64(&self.delta);
        x.iter()
            .map(|&xi| {
                // Root of x u^2 + u - x = 0 inside (-1, 1), written without
                // cancellation.
                let u = 2.0 * xi / (1.0 + (1.0 + 4.0 * xi * xi).sqrt());
                (u + 1.0) / (2.0 * delta)
            })
            .collect()
    }

    /// `x -> y` exactly, when every `1 + 4x_i^2` is a rational square
    /// (always the case for `x = u/(1-u^2)` with rational `u`).
    pub fn to_normalized(&self, x: &[Rational]) -> Option<Vec<Rational>> {
        x.iter()
            .map(|xi| {
                let disc = int(1) + int(4) * xi * xi;
                let root = rational_sqrt(&disc)?;
                let u = int(2) * xi / (int(1) + root);
                Some((u + int(1)) / (int(2) * &self.delta))
            })
            .collect()
    }
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let sq = |v: &BigInt| -> Option<BigInt> {
        let s = v.sqrt();
        (&s * &s == *v).then_some(s)
    };
    Some(Rational::new(sq(r.numer())?, sq(r.denom())?))
}

/// Substitute and clear denominators: equation `j` is multiplied by
/// `Π_i (1-u_i^2)^{d_ij}`.
pub fn normalize_to_box(sys: &PolySystem) -> (PolySystem, CoordinateMap) {
    let n = sys.n();
    let map = CoordinateMap::new(n);
    let profile = degree_profile(sys);
    let two_delta = int(2) * map.delta();
    let us: Vec<Polynomial> = (0..n)
        .map(|i| &Polynomial::var(n, i).scale(&two_delta) - &Polynomial::constant(n, Rational::one()))
        .collect();
    let ws: Vec<Polynomial> = us
        .iter()
        .map(|u| &Polynomial::constant(n, Rational::one()) - &(u * u))
        .collect();

    let polys = sys
        .polys()
        .iter()
        .zip(&profile.per_equation)
        .map(|(p, degs)| {
            let mut out = Polynomial::zero(n);
            for (m, c) in p.terms() {
                let mut term = Polynomial::constant(n, c.clone());
                for (i, &e) in m.exponents().iter().enumerate() {
                    term = &term * &us[i].pow(e);
                    term = &term * &ws[i].pow(degs[i] - e);
                }
                out = &out + &term;
            }
            out
        })
        .collect();
    let normalized = PolySystem::new(polys).expect("same shape as the input system");
    debug_assert!(normalized.polys().iter().all(|p| !p.is_zero()));
    (normalized, map)
}

impl CoordinateMap {
    /// True when `y` lies in the open cube where the map is a bijection.
    pub fn in_cube(&self, y: &[Rational]) -> bool {
        let top = Rational::one() / &self.delta;
        y.iter().all(|v| v.is_positive() && *v < top)
    }

    pub fn in_cube_f64(&self, y: &[f64]) -> bool {
        let top = 1.0 / crate::rational::to_f64(&self.delta);
        y.iter().all(|&v| v > 0.0 && v < top)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polysys::{parse_system, Monomial};
    use crate::rational::rat;
    use proptest::prelude::*;

    #[test]
    fn zero_maps_to_center() {
        let sys = parse_system("vars: x1\neq: x1 = 0").unwrap();
        let (norm, map) = normalize_to_box(&sys);
        assert_eq!(norm.polys()[0].eval(&[rat(1, 2)]), int(0));
        assert_eq!(map.to_normalized(&[int(0)]), Some(vec![rat(1, 2)]));
        assert_eq!(map.to_original(&[rat(1, 2)]), Some(vec![int(0)]));
    }

    #[test]
    fn x_minus_one_root_is_golden() {
        let sys = parse_system("vars: x1\neq: x1 - 1 = 0").unwrap();
        let (norm, map) = normalize_to_box(&sys);
        let u = (-1.0 + 5f64.sqrt()) / 2.0;
        let y = (u + 1.0) / 2.0;
        assert!(norm.polys()[0].eval(&[y]).abs() < 1e-12);
        let mapped = map.to_normalized_f64(&[1.0]);
        assert!((mapped[0] - y).abs() < 1e-15);
    }

    #[test]
    fn extraneous_root_lies_outside_open_box() {
        // 2u^2 + u - 2 = 0: one root per branch of t -> t/(1-t^2).
        let sys = parse_system("vars: x1\neq: x1 - 2 = 0").unwrap();
        let (norm, map) = normalize_to_box(&sys);
        let g = &norm.polys()[0];
        let inside = (-1.0 + 17f64.sqrt()) / 4.0;
        let outside = (-1.0 - 17f64.sqrt()) / 4.0;
        for u in [inside, outside] {
            let y = (u + 1.0) / 2.0;
            assert!(g.eval(&[y]).abs() < 1e-12);
        }
        assert!(map.in_cube_f64(&[(inside + 1.0) / 2.0]));
        assert!(!map.in_cube_f64(&[(outside + 1.0) / 2.0]));
        // The cleared polynomial is nonzero at u = ±1.
        assert_ne!(g.eval(&[int(0)]), int(0));
        assert_ne!(g.eval(&[int(1)]), int(0));
    }

    #[test]
    fn coordinate_map_rejects_boundary() {
        let map = CoordinateMap::new(2);
        assert_eq!(map.to_original(&[int(0), rat(1, 4)]), None);
        assert_eq!(map.to_original(&[rat(1, 2), rat(1, 4)]), None);
        assert!(map.to_original(&[rat(1, 8), rat(1, 4)]).is_some());
    }

    fn arb_u() -> impl Strategy<Value = Rational> {
        (-19i64..=19, 20i64..=23).prop_map(|(p, q)| rat(p, q))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]

        #[test]
        fn seeded_root_survives_normalization(
            us in prop::collection::vec(arb_u(), 1..=3),
            coeffs in prop::collection::vec((-5i64..=5, 1i64..=4), 6),
            exps in prop::collection::vec(0u32..=2, 6),
        ) {
            let n = us.len();
            let xs: Vec<Rational> = us.iter().map(|u| u / (int(1) - u * u)).collect();
            // F_j = Σ_i c_ij (x_i - x*_i) * x_{(i+1) mod n}^{e_ij}
            let polys: Vec<Polynomial> = (0..2).map(|j| {
                let mut p = Polynomial::zero(n);
                for i in 0..n {
                    let (cp, cq) = coeffs[(j * 3 + i) % 6];
                    let lin = &Polynomial::var(n, i) - &Polynomial::constant(n, xs[i].clone());
                    let mut e = vec![0; n];
                    e[(i + 1) % n] = exps[(j * 3 + i) % 6];
                    let mono = Polynomial::from_terms(n, [(Monomial::new(e), rat(cp, cq))]);
                    p = &p + &(&lin * &mono);
                }
                if p.is_zero() { &Polynomial::var(n, 0) - &Polynomial::constant(n, xs[0].clone()) } else { p }
            }).collect();
            let sys = PolySystem::new(polys).unwrap();
            let (norm, map) = normalize_to_box(&sys);
            let y = map.to_normalized(&xs).expect("rational preimage");
            prop_assert!(map.in_cube(&y));
            prop_assert_eq!(map.to_original(&y).unwrap(), xs);
            for g in norm.polys() {
                prop_assert_eq!(g.eval(&y), int(0));
            }
        }
    }
}
