//! Scan one replay coordinate on an interior grid and keep the points whose
//! replayed profile is an equilibrium to within `tol`.

use crate::encoders::EncodingWitness;
use crate::error::{Error, Result};
use crate::game::{indifference_residuals, Game};

/// Max indifference residual at `y`, or `None` when the replay leaves the box.
fn residual_at(game: &Game, witness: &EncodingWitness, y: &[f64]) -> Result<Option<f64>> {
    match witness.replay(y) {
        Ok(r) => {
            let res = indifference_residuals(game, &r.profile)?;
            Ok(res.all_interior().then_some(res.max_abs))
        }
        Err(Error::BoxHypothesis { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Golden-section search for the minimum of `f` on `[a, b]`.
fn golden_min(mut a: f64, mut b: f64, f: &mut dyn FnMut(f64) -> f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if b - a <= 4.0 * f64::EPSILON * b.abs().max(1e-300) {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Values of coordinate `axis` (other coordinates taken from `base`) at
/// which the replayed profile passes. The grid is `k/(grid+1)` for
/// `k = 1..=grid`; each local minimum of the residual along the grid is
/// refined by golden-section search, so isolated equilibria between grid
/// points are found. Coordinates are those of [`EncodingWitness::replay`].
pub fn grid_completeness(
    game: &Game,
    witness: &EncodingWitness,
    axis: usize,
    base: &[f64],
    grid: usize,
    tol: f64,
) -> Result<Vec<f64>> {
    if base.len() != witness.dim() || axis >= witness.dim() {
        return Err(Error::DimensionMismatch {
            expected: witness.dim(),
            got: base.len().max(axis + 1),
        });
    }
    let h = 1.0 / (grid as f64 + 1.0);
    let mut point = base.to_vec();
    let mut eval = |t: f64| -> Result<f64> {
        point[axis] = t;
        Ok(residual_at(game, witness, &point)?.unwrap_or(f64::INFINITY))
    };
    let xs: Vec<f64> = (1..=grid).map(|k| k as f64 * h).collect();
    let vals = xs.iter().map(|&t| eval(t)).collect::<Result<Vec<f64>>>()?;

    let mut passing: Vec<f64> = Vec::new();
    for (k, (&t, &v)) in xs.iter().zip(&vals).enumerate() {
        if v <= tol {
            passing.push(t);
        }
        let left = if k == 0 { f64::INFINITY } else { vals[k - 1] };
        let right = vals.get(k + 1).copied().unwrap_or(f64::INFINITY);
        if v.is_finite() && v <= left && v <= right && v > 0.0 {
            let mut err = None;
            let mut f = |s: f64| match eval(s) {
                Ok(r) => r,
                Err(e) => {
                    err = Some(e);
                    f64::INFINITY
                }
            };
            let (s, fs) = golden_min((t - h).max(h * 0.5), (t + h).min(1.0 - h * 0.5), &mut f);
            if let Some(e) = err {
                return Err(e);
            }
            if fs <= tol {
                passing.push(s);
            }
        }
    }
    passing.sort_by(f64::total_cmp);
    passing.dedup();
    Ok(passing)
}

/// Group sorted values whose neighbours are at most `radius` apart.
pub fn cluster_points(points: &[f64], radius: f64) -> Vec<Vec<f64>> {
    let mut sorted = points.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut out: Vec<Vec<f64>> = Vec::new();
    for p in sorted {
        match out.last_mut() {
            Some(c) if p - c.last().unwrap() <= radius => c.push(p),
            _ => out.push(vec![p]),
        }
    }
    out
}
