//! Desk-scale oracles for the encodings: equilibrium checks at witness
//! points, real-root isolation on (0,1), grid scans along one coordinate
//! and winding numbers of planar maps.

mod grid;
mod roots;
mod winding;

use std::fmt::Write as _;

use num_traits::Zero;

pub use grid::{cluster_points, grid_completeness};
pub use roots::{roots_in_unit_interval, IsolatedRoot, RootList};
pub use winding::{local_degree, power_map, square_map_system};

use crate::encoders::EncodingWitness;
use crate::error::{Error, Result};
use crate::game::{indifference_residuals, Game};
use crate::rational::{fmt_rational, to_f64, Rational};

/// Outcome at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCheck {
    pub point: Vec<Rational>,
    /// Exact residual when the check ran in rational arithmetic.
    pub exact_residual: Option<Rational>,
    pub max_residual: f64,
    /// `interior[i][j]` for every probability of the replayed profile;
    /// empty when the replay left the box.
    pub interior: Vec<Vec<bool>>,
    pub pass: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerificationReport {
    pub points: Vec<PointCheck>,
}

impl VerificationReport {
    pub fn passed(&self) -> usize {
        self.points.iter().filter(|p| p.pass).count()
    }

    pub fn failed(&self) -> usize {
        self.points.len() - self.passed()
    }

    /// Vacuously true for an empty report.
    pub fn all_pass(&self) -> bool {
        self.failed() == 0
    }

    /// One line per point, then a summary line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.points {
            let coords: Vec<String> = p.point.iter().map(fmt_rational).collect();
            let residual = match &p.exact_residual {
                Some(r) => fmt_rational(r),
                None => format!("{:.16e}", p.max_residual),
            };
            let verdict = if p.pass { "PASS" } else { "FAIL" };
            write!(out, "point ({}) residual {} {}", coords.join(", "), residual, verdict).unwrap();
            if let Some(note) = &p.note {
                write!(out, " ({note})").unwrap();
            }
            out.push('\n');
        }
        writeln!(out, "passed {}/{}", self.passed(), self.points.len()).unwrap();
        out
    }
}

/// Replay the witness at each point and check the game's indifference
/// residuals. Points are in the coordinates the witness expects (the
/// original ones when it carries a normalization). Runs exactly whenever
/// the replay is rational, otherwise in `f64` (which needs `tol > 0`).
pub fn check_points(
    game: &Game,
    witness: &EncodingWitness,
    points: &[Vec<Rational>],
    tol: &Rational,
) -> Result<VerificationReport> {
    let dim = witness.normalization.as_ref().map_or(witness.dim(), |m| m.n());
    let mut report = VerificationReport::default();
    for point in points {
        if point.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: point.len(),
            });
        }
        let check = match witness.replay_exact(point) {
            Ok(r) => {
                let res = indifference_residuals(game, &r.profile)?;
                let pass = res.max_abs <= *tol && res.all_interior();
                PointCheck {
                    point: point.clone(),
                    max_residual: to_f64(&res.max_abs),
                    exact_residual: Some(res.max_abs),
                    interior: res.interior,
                    pass,
                    note: None,
                }
            }
            Err(Error::Unsupported(_)) if !tol.is_zero() => {
                let x: Vec<f64> = point.iter().map(to_f64).collect();
                float_check(game, witness, point, &x, to_f64(tol))?
            }
            Err(Error::BoxHypothesis { reason, .. }) => outside(point, reason),
            Err(e) => return Err(e),
        };
        report.points.push(check);
    }
    Ok(report)
}

fn outside(point: &[Rational], reason: String) -> PointCheck {
    PointCheck {
        point: point.to_vec(),
        exact_residual: None,
        max_residual: f64::INFINITY,
        interior: Vec::new(),
        pass: false,
        note: Some(reason),
    }
}

fn float_check(game: &Game, witness: &EncodingWitness, point: &[Rational], x: &[f64], tol: f64) -> Result<PointCheck> {
    match witness.replay_f64(x) {
        Ok(r) => {
            let res = indifference_residuals(game, &r.profile)?;
            Ok(PointCheck {
                point: point.to_vec(),
                exact_residual: None,
                max_residual: res.max_abs,
                pass: res.max_abs <= tol && res.all_interior(),
                interior: res.interior,
                note: None,
            })
        }
        Err(Error::BoxHypothesis { reason, .. }) => Ok(outside(point, reason)),
        Err(e) => Err(e),
    }
}

/// Points file: one point per line, coordinates separated by whitespace,
/// `#` starts a comment. Decimals are read exactly.
pub fn parse_points(src: &str) -> Result<Vec<Vec<Rational>>> {
    let mut out = Vec::new();
    for (ln, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut coords = Vec::new();
        for tok in line.split_whitespace() {
            let col = line.find(tok).unwrap_or(0) + 1;
            let v = crate::rational::parse_number(tok)
                .ok_or_else(|| Error::syntax(ln + 1, col, format!("`{tok}` is not a number")))?;
            coords.push(v);
        }
        if !coords.is_empty() {
            out.push(coords);
        }
    }
    Ok(out)
}
