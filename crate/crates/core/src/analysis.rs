//! Torsion as a function on the SU(2) character variety of a 2-bridge knot:
//! grid sweeps over `θ` (with `s = e^{iθ}`) and critical-point search along
//! root branches.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::foxcalc::{alexander_polynomial, FoxError};
use crate::presentation::Presentation;
use crate::reps::{build_rep, riley_polynomial, su2_solutions, RepError, RileyPoly};
use crate::tolerances::Tolerances;
use crate::torsion::{compute_torsion, TorsionError};

/// `|Tr ρ(μ)|` below which a point counts as binary dihedral.
pub const DIHEDRAL_TOL: f64 = 1e-6;
/// Critical points must satisfy `|dT/dθ| ≤ CRITICAL_REL · max(1, |T|)`.
pub const CRITICAL_REL: f64 = 1e-4;

/// `|dT/dθ|` below `NOISE_REL · max(1, |T|)` has no reliable sign.
pub const NOISE_REL: f64 = 1e-6;

const BISECTION_STEPS: usize = 60;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("invalid sweep configuration: {0}")]
    Config(String),
    #[error("presentation has no 2-bridge word; sweeps need Riley's parametrization")]
    NotTwoBridge,
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Torsion(#[from] TorsionError),
    #[error(transparent)]
    Fox(#[from] FoxError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub theta_lo: f64,
    pub theta_hi: f64,
    pub samples: usize,
    pub tol: Tolerances,
    /// Generator dropped from the Fox matrix; the meridian when `None`.
    pub drop: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { theta_lo: 0.1, theta_hi: TAU - 0.1, samples: 201, tol: Tolerances::default(), drop: None }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), AnalysisError> {
        let bad = |m: &str| Err(AnalysisError::Config(m.into()));
        if !(self.theta_lo > 0.0 && self.theta_hi < TAU) {
            return bad("theta range must lie in (0, 2π)");
        }
        if self.theta_lo.partial_cmp(&self.theta_hi) != Some(std::cmp::Ordering::Less) {
            return bad("theta_lo must be below theta_hi");
        }
        if self.samples < 2 {
            return bad("at least 2 samples are needed");
        }
        if !self.tol.is_valid() {
            return bad("tolerances must be positive and finite");
        }
        Ok(())
    }

    pub fn thetas(&self) -> Vec<f64> {
        let n = self.samples - 1;
        (0..=n)
            .map(|i| match i {
                0 => self.theta_lo,
                i if i == n => self.theta_hi,
                i => self.theta_lo + (self.theta_hi - self.theta_lo) * i as f64 / n as f64,
            })
            .collect()
    }
}

/// One CSV row: a `(θ, u)` point of the SU(2) character variety.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub theta: f64,
    pub sigma: f64,
    pub u: f64,
    pub torsion_re: f64,
    pub torsion_im: f64,
    pub tai_simple_zero: bool,
    /// `Tr ρ(μ) = 2cos(θ/2)`.
    pub trace_mu: f64,
}

pub const CSV_HEADER: [&str; 7] = ["theta", "sigma", "u", "torsion_re", "torsion_im", "tai_simple_zero", "trace_mu"];

fn riley_of(p: &Presentation) -> Result<RileyPoly, AnalysisError> {
    let w = p.bridge_word().ok_or(AnalysisError::NotTwoBridge)?;
    Ok(riley_polynomial(w)?)
}

/// `(T, simple_zero)` at `s = e^{iθ}`, `√s = e^{iθ/2}`.
pub fn torsion_at(
    p: &Presentation,
    theta: f64,
    u: f64,
    drop: usize,
    tol: &Tolerances,
) -> Result<(Complex64, bool), AnalysisError> {
    let s = Complex64::from_polar(1.0, theta);
    let rep = build_rep(p, s, Complex64::new(u, 0.0), Complex64::from_polar(1.0, theta / 2.0), tol.relation)?;
    let res = compute_torsion(p, &rep, drop, tol)?;
    Ok((res.value, res.diagnostics.simple_zero))
}

fn sweep_point(p: &Presentation, phi: &RileyPoly, theta: f64, drop: usize, tol: &Tolerances) -> Vec<SweepRow> {
    let Ok(sols) = su2_solutions(phi, theta, tol) else {
        return Vec::new();
    };
    sols.roots
        .iter()
        .map(|root| {
            let (t, simple) =
                torsion_at(p, theta, root.u, drop, tol).unwrap_or((Complex64::new(f64::NAN, f64::NAN), false));
            SweepRow {
                theta,
                sigma: sols.sigma,
                u: root.u,
                torsion_re: t.re,
                torsion_im: t.im,
                tai_simple_zero: simple,
                trace_mu: 2.0 * (theta / 2.0).cos(),
            }
        })
        .collect()
}

/// One row per `(θ sample, SU(2) root)`, sorted by `(θ, u)`. Points where the
/// torsion cannot be formed carry NaN.
pub fn sweep(p: &Presentation, cfg: &SweepConfig) -> Result<Vec<SweepRow>, AnalysisError> {
    cfg.validate()?;
    let phi = riley_of(p)?;
    let drop = cfg.drop.unwrap_or(p.meridian());
    let mut rows: Vec<SweepRow> =
        cfg.thetas().into_par_iter().map(|theta| sweep_point(p, &phi, theta, drop, &cfg.tol)).flatten().collect();
    rows.sort_by(|a, b| a.theta.total_cmp(&b.theta).then(a.u.total_cmp(&b.u)));
    Ok(rows)
}

/// A point `(θ, u)` of the SU(2) character variety.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Su2Point {
    pub theta: f64,
    pub sigma: f64,
    pub u: f64,
    pub multiplicity: usize,
    pub near_multiple: bool,
}

/// Every SU(2) root at each `θ`, in input order, roots ascending.
pub fn su2_points(p: &Presentation, thetas: &[f64], tol: &Tolerances) -> Result<Vec<Su2Point>, AnalysisError> {
    let phi = riley_of(p)?;
    let mut out = Vec::new();
    for &theta in thetas {
        let sols = su2_solutions(&phi, theta, tol)?;
        out.extend(sols.roots.iter().map(|r| Su2Point {
            theta,
            sigma: sols.sigma,
            u: r.u,
            multiplicity: r.multiplicity,
            near_multiple: sols.near_multiple,
        }));
    }
    Ok(out)
}

fn nearest(values: &[f64], target: f64) -> Option<f64> {
    values.iter().copied().min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()))
}

/// Central difference `dT/dθ` at `(θ, u)`, following the root nearest to `u`
/// at `θ ± h`.
pub fn torsion_derivative(
    p: &Presentation,
    phi: &RileyPoly,
    theta: f64,
    u: f64,
    drop: usize,
    tol: &Tolerances,
) -> Result<f64, AnalysisError> {
    let h = tol.derivative_step;
    let side = |th: f64| -> Result<Complex64, AnalysisError> {
        let sols = su2_solutions(phi, th, tol)?;
        let v =
            nearest(&sols.values(), u).ok_or_else(|| AnalysisError::Config(format!("no SU(2) root at θ = {th}")))?;
        Ok(torsion_at(p, th, v, drop, tol)?.0)
    };
    Ok(((side(theta + h)? - side(theta - h)?) / (2.0 * h)).re)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub theta: f64,
    pub u: f64,
    pub torsion: Complex64,
    pub derivative: f64,
    pub is_dihedral: bool,
    pub branch: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchEvent {
    pub theta: f64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalReport {
    pub points: Vec<CriticalPoint>,
    pub branches: usize,
    /// Branch splits and other tracking failures; not fatal.
    pub events: Vec<BranchEvent>,
    pub dihedral_count: usize,
    /// `(|Δ_K(−1)| − 1)/2`.
    pub expected_dihedral_count: Option<usize>,
}

#[derive(Debug, Clone, Copy)]
struct Sample {
    theta: f64,
    u: f64,
    torsion: Complex64,
    derivative: f64,
}

/// Splits grid points into branches by nearest-`u` matching. A step where the
/// root count changes, two branches claim the same root, or roots come
/// within the near-multiple threshold closes every open branch.
fn track_branches(grid: &[(f64, Vec<f64>, bool)], events: &mut Vec<BranchEvent>) -> Vec<Vec<(f64, f64)>> {
    let mut done: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut open: Vec<Vec<(f64, f64)>> = Vec::new();
    for (theta, roots, near) in grid {
        let matched = (!*near && !open.is_empty() && roots.len() == open.len())
            .then(|| {
                let idx: Vec<usize> = open
                    .iter()
                    .map(|b| {
                        let last = b.last().unwrap().1;
                        (0..roots.len())
                            .min_by(|&i, &j| (roots[i] - last).abs().total_cmp(&(roots[j] - last).abs()))
                            .unwrap()
                    })
                    .collect();
                let mut sorted = idx.clone();
                sorted.sort_unstable();
                sorted.dedup();
                (sorted.len() == idx.len()).then_some(idx)
            })
            .flatten();
        match matched {
            Some(idx) => {
                for (b, i) in open.iter_mut().zip(idx) {
                    b.push((*theta, roots[i]));
                }
            }
            None => {
                if !open.is_empty() || *near {
                    let why = if *near {
                        "roots within the near-multiple threshold"
                    } else {
                        "root count or matching changed"
                    };
                    if events.last().is_none_or(|e| e.message != why) {
                        events.push(BranchEvent { theta: *theta, message: why.into() });
                    }
                }
                done.append(&mut open);
                if !*near {
                    open = roots.iter().map(|&u| vec![(*theta, u)]).collect();
                }
            }
        }
    }
    done.append(&mut open);
    done.retain(|b| b.len() >= 2);
    done
}

/// Zeros of `dT/dθ` along every root branch, by sign change and bisection.
pub fn critical_points(p: &Presentation, cfg: &SweepConfig) -> Result<CriticalReport, AnalysisError> {
    cfg.validate()?;
    let phi = riley_of(p)?;
    let drop = cfg.drop.unwrap_or(p.meridian());
    let tol = cfg.tol;
    let h = tol.derivative_step;
    // keep θ ± h inside (0, 2π)
    let thetas: Vec<f64> = cfg.thetas().into_iter().filter(|t| *t > h && *t < TAU - h).collect();
    let grid: Vec<(f64, Vec<f64>, bool)> = thetas
        .iter()
        .filter_map(|&t| su2_solutions(&phi, t, &tol).ok().map(|s| (t, s.values(), s.near_multiple)))
        .collect();
    let mut events = Vec::new();
    let branches = track_branches(&grid, &mut events);

    let eval = |theta: f64, u: f64| -> Option<Sample> {
        let torsion = torsion_at(p, theta, u, drop, &tol).ok()?.0;
        let derivative = torsion_derivative(p, &phi, theta, u, drop, &tol).ok()?;
        Some(Sample { theta, u, torsion, derivative })
    };
    let locate = |theta: f64, u_guess: f64| -> Option<Sample> {
        let sols = su2_solutions(&phi, theta, &tol).ok()?;
        eval(theta, nearest(&sols.values(), u_guess)?)
    };

    let flat = |x: &Sample| x.derivative.abs() <= NOISE_REL * x.torsion.norm().max(1.0);
    let mut points = Vec::new();
    for (bi, branch) in branches.iter().enumerate() {
        let samples: Vec<Sample> = branch.par_iter().filter_map(|&(t, u)| eval(t, u)).collect();
        if !samples.is_empty() && samples.iter().all(flat) {
            events.push(BranchEvent {
                theta: samples[0].theta,
                message: format!("torsion is constant along branch {bi}"),
            });
            continue;
        }
        let signed: Vec<Sample> = samples.iter().copied().filter(|x| !flat(x)).collect();
        for pair in signed.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if a.derivative.signum() == b.derivative.signum() {
                continue;
            }
            let (mut lo, mut hi) = (a, b);
            let mut best = None;
            for _ in 0..BISECTION_STEPS {
                if hi.theta - lo.theta <= 1e-12 {
                    break;
                }
                let mid_t = 0.5 * (lo.theta + hi.theta);
                let w = (mid_t - lo.theta) / (hi.theta - lo.theta);
                let Some(mid) = locate(mid_t, lo.u + w * (hi.u - lo.u)) else {
                    break;
                };
                if flat(&mid) {
                    best = Some(mid);
                    break;
                }
                if mid.derivative.signum() == lo.derivative.signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let best = best.unwrap_or(if lo.derivative.abs() <= hi.derivative.abs() { lo } else { hi });
            if best.derivative.abs() <= CRITICAL_REL * best.torsion.norm().max(1.0) {
                points.push((bi, best));
            } else {
                events.push(BranchEvent {
                    theta: best.theta,
                    message: format!("sign change of dT/dθ without a zero (|dT/dθ| = {:.3e})", best.derivative.abs()),
                });
            }
        }
    }

    // the dihedral slice θ = π, where the central difference is symmetric
    if cfg.theta_lo <= PI && PI <= cfg.theta_hi {
        let sols = su2_solutions(&phi, PI, &tol)?;
        for u in sols.values() {
            let Some(x) = eval(PI, u) else {
                continue;
            };
            if x.derivative.abs() > CRITICAL_REL * x.torsion.norm().max(1.0) {
                continue;
            }
            let bi = branches
                .iter()
                .enumerate()
                .flat_map(|(i, b)| b.iter().map(move |&(t, v)| (i, (t - PI).abs() + (v - u).abs())))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .map_or(0, |(i, _)| i);
            points.retain(|(_, y)| !((y.theta - PI).abs() < 1e-4 && (y.u - u).abs() < 1e-3));
            points.push((bi, x));
        }
    }

    let mut points: Vec<CriticalPoint> = points
        .into_iter()
        .map(|(bi, s)| CriticalPoint {
            theta: s.theta,
            u: s.u,
            torsion: s.torsion,
            derivative: s.derivative,
            is_dihedral: (2.0 * (s.theta / 2.0).cos()).abs() <= DIHEDRAL_TOL,
            branch: bi,
        })
        .collect();
    points.sort_by(|a, b| a.theta.total_cmp(&b.theta).then(a.u.total_cmp(&b.u)));
    let dihedral_count = points.iter().filter(|c| c.is_dihedral).count();
    Ok(CriticalReport {
        points,
        branches: branches.len(),
        events,
        dihedral_count,
        expected_dihedral_count: expected_dihedral_count(p).ok(),
    })
}

/// `(|Δ_K(−1)| − 1)/2` from the classical Alexander polynomial.
pub fn expected_dihedral_count(p: &Presentation) -> Result<usize, AnalysisError> {
    let alex = alexander_polynomial(p)?;
    let det = alex.evaluate(Complex64::new(-1.0, 0.0)).norm().round() as usize;
    Ok(det.saturating_sub(1) / 2)
}

/// SU(2) roots at `θ = π`, i.e. the binary dihedral characters.
pub fn dihedral_roots(p: &Presentation, tol: &Tolerances) -> Result<Vec<f64>, AnalysisError> {
    Ok(su2_solutions(&riley_of(p)?, PI, tol)?.values())
}
