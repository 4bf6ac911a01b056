//! Local topological degree of a planar polynomial map, as a winding
//! number around a circle.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::polysys::{PolySystem, Polynomial};
use crate::rational::Rational;

const MIN_SAMPLES: usize = 64;
const MAX_SAMPLES: usize = 1 << 16;
const ZERO_EPS: f64 = 1e-12;

/// Winding number of `t ↦ F(center + radius·(cos t, sin t))` about the
/// origin. Starts from `samples` points and doubles until every angle
/// increment is below π/2.
pub fn local_degree(f: (&Polynomial, &Polynomial), center: [f64; 2], radius: f64, samples: usize) -> Result<i64> {
    if f.0.n() != 2 || f.1.n() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: f.0.n().max(f.1.n()),
        });
    }
    if radius.is_nan() || radius <= 0.0 {
        return Err(Error::Unsupported("radius must be positive".into()));
    }
    if samples < MIN_SAMPLES {
        return Err(Error::Unsupported(format!("at least {MIN_SAMPLES} samples are needed")));
    }
    let mut n = samples;
    while n <= MAX_SAMPLES {
        let mut values = Vec::with_capacity(n);
        for k in 0..n {
            let t = 2.0 * PI * k as f64 / n as f64;
            let p = [center[0] + radius * t.cos(), center[1] + radius * t.sin()];
            let v = (f.0.eval(&p), f.1.eval(&p));
            if v.0.hypot(v.1) < ZERO_EPS {
                return Err(Error::RadiusHitsZeroSet { angle: t });
            }
            values.push(v);
        }
        let mut total = 0.0;
        let mut worst: f64 = 0.0;
        for k in 0..n {
            let (a, b) = (values[k], values[(k + 1) % n]);
            let step = (a.0 * b.1 - a.1 * b.0).atan2(a.0 * b.0 + a.1 * b.1);
            worst = worst.max(step.abs());
            total += step;
        }
        if worst < PI / 2.0 {
            return Ok((total / (2.0 * PI)).round() as i64);
        }
        n *= 2;
    }
    Err(Error::NonConvergent { samples: MAX_SAMPLES })
}

/// Real and imaginary parts of `z^k` with `z = x1 + i·x2`.
pub fn power_map(k: u32) -> (Polynomial, Polynomial) {
    let x = Polynomial::var(2, 0);
    let y = Polynomial::var(2, 1);
    let mut re = Polynomial::constant(2, Rational::from_integer(1.into()));
    let mut im = Polynomial::zero(2);
    for _ in 0..k {
        let next_re = &(&re * &x) - &(&im * &y);
        let next_im = &(&re * &y) + &(&im * &x);
        re = next_re;
        im = next_im;
    }
    (re, im)
}

/// `z ↦ z²` moved so its zero sits at `(c, c)`:
/// `(x1-c)² - (x2-c)² = 0`, `2(x1-c)(x2-c) = 0`.
pub fn square_map_system(c: &Rational) -> PolySystem {
    let shift: Vec<Polynomial> = (0..2)
        .map(|i| &Polynomial::var(2, i) - &Polynomial::constant(2, c.clone()))
        .collect();
    let (re, im) = power_map(2);
    PolySystem::new(vec![re.compose(&shift), im.compose(&shift)]).expect("two nonzero equations")
}
