//! Search for a numerator coefficient vector `x` whose real-part
//! numerators against both endpoints are positive on `(0, ∞)`.

use microlp::{ComparisonOp, OptimizationDirection, Problem};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ellipse::{build_ellipses, ellipse_interior_point};
use super::SynthesisConfig;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::polycore::{cauchy_lower_bound, cauchy_root_bound, min_on_interval, positive_on_halfline, Poly, PositivityProof};
use crate::segstab::{segment_hurwitz, SegmentFamily};
use crate::sprcheck::{cl_affine, cl_coefficients};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Endpoint {
    A,
    B,
}

/// Where a candidate `x` came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum PointSource {
    EllipseCenter { endpoint: Endpoint, k: usize },
    /// `theta * from + (1 - theta) * to` for two ellipse centers.
    Segment { from: (Endpoint, usize), to: (Endpoint, usize), theta: f64 },
    /// Mean of all ellipse centers of both endpoints.
    Centroid,
    /// Coefficients of `(theta a' + (1 - theta) b') / n`.
    Derivative { theta: f64 },
    LpFallback { rounds: usize },
    ClosedForm,
}

/// A certified member of both feasible sets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OmegaPoint {
    pub x: Vec<f64>,
    pub source: PointSource,
    /// Minima of `g_a`, `g_b` over `[0, T]` with `T` beyond every positive
    /// root of either; `0` when the minimum is the limit at `t = 0`.
    pub margins: (f64, f64),
    pub proof_a: PositivityProof,
    pub proof_b: PositivityProof,
}

/// Real-part numerator of the monic numerator with coefficients `x`.
fn g_of(den: &Poly, x: &[f64]) -> Result<Poly> {
    Ok(cl_coefficients(den, x)?.poly())
}

fn certify_side(den: &Poly, x: &[f64], tol: &Tolerances) -> Option<(PositivityProof, f64)> {
    let g = g_of(den, x).ok()?;
    if g.is_zero() {
        return None;
    }
    let proof = positive_on_halfline(&g, false, tol).ok()?;
    if !proof.verdict {
        return None;
    }
    let far = 2.0 * cauchy_root_bound(&g).ok()?;
    Some((proof, min_on_interval(&g, 0.0, far).0.max(0.0)))
}

/// Certifies `x` against both endpoints.
pub fn certify_point(fam: &SegmentFamily, x: &[f64], source: PointSource, tol: &Tolerances) -> Option<OmegaPoint> {
    if x.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let (proof_a, ma) = certify_side(fam.a(), x, tol)?;
    let (proof_b, mb) = certify_side(fam.b(), x, tol)?;
    Some(OmegaPoint { x: x.to_vec(), source, margins: (ma, mb), proof_a, proof_b })
}

fn derivative_x(p: &Poly) -> Vec<f64> {
    let n = p.degree();
    p.derivative().coeffs()[1..].iter().map(|c| c / n as f64).collect()
}

fn lerp(p: &[f64], q: &[f64], theta: f64) -> Vec<f64> {
    p.iter().zip(q).map(|(a, b)| theta * a + (1.0 - theta) * b).collect()
}

/// Candidate points in priority order.
pub fn seed_points(fam: &SegmentFamily, tol: &Tolerances) -> Result<Vec<(Vec<f64>, PointSource)>> {
    let mut centers: Vec<((Endpoint, usize), Vec<f64>)> = Vec::new();
    let endpoints: &[(Endpoint, &Poly)] = if fam.is_degenerate() {
        &[(Endpoint::A, fam.a())]
    } else {
        &[(Endpoint::A, fam.a()), (Endpoint::B, fam.b())]
    };
    for &(e, den) in endpoints {
        for spec in build_ellipses(den, tol)? {
            if let Ok(x) = ellipse_interior_point(&spec) {
                centers.push(((e, spec.k), x));
            }
        }
    }
    let mut seeds = Vec::new();
    for ((e, k), x) in &centers {
        seeds.push((x.clone(), PointSource::EllipseCenter { endpoint: *e, k: *k }));
    }
    if !centers.is_empty() {
        let m = centers[0].1.len();
        let mean: Vec<f64> = (0..m)
            .map(|i| centers.iter().map(|(_, x)| x[i]).sum::<f64>() / centers.len() as f64)
            .collect();
        seeds.push((mean, PointSource::Centroid));
    }
    let (da, db) = (derivative_x(fam.a()), derivative_x(fam.b()));
    for theta in [0.5, 1.0, 0.0] {
        seeds.push((lerp(&da, &db, theta), PointSource::Derivative { theta }));
    }
    for theta in [0.5, 0.25, 0.75] {
        for (i, (li, xi)) in centers.iter().enumerate() {
            for (lj, xj) in centers.iter().skip(i + 1) {
                seeds.push((lerp(xi, xj, theta), PointSource::Segment { from: *li, to: *lj, theta }));
            }
        }
    }
    Ok(seeds)
}

/// Outcome of the LP route.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub rounds: usize,
    pub slack: f64,
    pub grid: Vec<f64>,
}

/// `g(t; x) = constant(t) + Σ_m weight_m(t) x_m`.
fn g_affine_at(den: &Poly, t: f64) -> (f64, Vec<f64>) {
    let n = den.degree();
    let mut cst = 0.0;
    let mut lin = vec![0.0; n - 1];
    for l in 1..=n {
        let (c0, w) = cl_affine(den, l);
        let tp = t.powi((n - l) as i32);
        cst += c0 * tp;
        for (acc, wi) in lin.iter_mut().zip(w) {
            *acc += wi * tp;
        }
    }
    (cst, lin)
}

/// `|den(j√t)|^2 / (1 + t)`, the normalisation that keeps `g/w` bounded.
fn weight(den: &Poly, t: f64) -> f64 {
    den.eval_at_jomega(t.sqrt()).norm_sqr() / (1.0 + t)
}

/// Default LP grid: `t = 0` plus a log grid spanning the root moduli of
/// both endpoints, widened by two decades on each side.
pub fn default_lp_grid(fam: &SegmentFamily, points: usize) -> Result<Vec<f64>> {
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for p in [fam.a(), fam.b()] {
        lo = lo.min(cauchy_lower_bound(p).unwrap_or(1e-3));
        hi = hi.max(cauchy_root_bound(p)?);
    }
    let (l0, l1) = ((1e-2 * lo).powi(2).ln(), (1e2 * hi).powi(2).ln());
    let points = points.max(2);
    let mut grid = vec![0.0];
    grid.extend((0..points).map(|i| (l0 + (l1 - l0) * i as f64 / (points - 1) as f64).exp()));
    Ok(grid)
}

fn solve_lp(fam: &SegmentFamily, grid: &[f64], margin: f64, scale: &[f64]) -> Result<(Vec<f64>, f64)> {
    let m = scale.len();
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let z: Vec<_> = (0..m).map(|_| lp.add_var(0.0, (0.0, 1.0))).collect();
    let s = lp.add_var(1.0, (0.0, f64::INFINITY));
    for den in [fam.a(), fam.b()] {
        for &t in grid {
            let (cst, lin) = g_affine_at(den, t);
            let w = weight(den, t);
            let mut expr: Vec<_> = z.iter().zip(&lin).zip(scale).map(|((&v, c), b)| (v, c * b / w)).collect();
            expr.push((s, -1.0));
            lp.add_constraint(expr, ComparisonOp::Ge, margin - cst / w);
        }
        // t → ∞: g / w tends to c_1 = a_1 - x_1.
        let (c0, w1) = cl_affine(den, 1);
        let mut expr: Vec<_> = z.iter().zip(&w1).zip(scale).map(|((&v, c), b)| (v, c * b)).collect();
        expr.push((s, -1.0));
        lp.add_constraint(expr, ComparisonOp::Ge, margin - c0);
    }
    let outcome = lp.solve().map_err(|e| Error::LpInfeasible(e.to_string()))?;
    let sol = outcome
        .solution()
        .ok_or_else(|| Error::LpInfeasible("solver interrupted".into()))?;
    let x = z.iter().zip(scale).map(|(&v, b)| sol.var_value(v) * b).collect();
    Ok((x, sol.var_value(s)))
}

/// LP over a `t` grid with cutting-plane refinement: each rejected `x`
/// adds the minimiser of the offending real-part numerator to the grid.
pub fn lp_grid_feasibility(
    fam: &SegmentFamily,
    grid: &[f64],
    margin: f64,
    rounds: usize,
    tol: &Tolerances,
) -> Result<Option<LpSolution>> {
    if grid.is_empty() {
        return Err(Error::Precondition("empty LP grid".into()));
    }
    if !(margin > 0.0) {
        return Err(Error::Precondition(format!("LP margin must be positive, got {margin}")));
    }
    let n = fam.degree();
    if n < 2 {
        return Err(Error::Precondition("LP search needs degree >= 2".into()));
    }
    let scale: Vec<f64> = (1..n)
        .map(|i| 4.0 * fam.a().coeffs()[i].abs().max(fam.b().coeffs()[i].abs()).max(f64::MIN_POSITIVE))
        .collect();
    let mut grid = grid.to_vec();
    for round in 1..=rounds.max(1) {
        let (x, slack) = solve_lp(fam, &grid, margin, &scale)?;
        let mut accepted = true;
        for den in [fam.a(), fam.b()] {
            let g = g_of(den, &x)?;
            let ok = !g.is_zero() && positive_on_halfline(&g, false, tol).map(|p| p.verdict).unwrap_or(false);
            if !ok {
                accepted = false;
                let far = 2.0 * cauchy_root_bound(&g).unwrap_or(1.0);
                let t = min_on_interval(&g, 0.0, far).1;
                for cut in [t, 0.9 * t, 1.1 * t] {
                    if cut.is_finite() && !grid.contains(&cut) {
                        grid.push(cut);
                    }
                }
            }
        }
        if accepted {
            return Ok(Some(LpSolution { x, rounds: round, slack, grid }));
        }
    }
    Ok(None)
}

/// Finds a certified `x` for a stable segment of degree `n >= 3`.
pub fn find_common_point(fam: &SegmentFamily, config: &SynthesisConfig) -> Result<OmegaPoint> {
    let tol = &config.tol;
    let verdict = segment_hurwitz(fam, tol)?;
    if !verdict.stable {
        return Err(Error::Precondition("segment is not Hurwitz stable".into()));
    }
    search_common_point(fam, config)
}

/// As [`find_common_point`] without re-running the stability gate.
pub(crate) fn search_common_point(fam: &SegmentFamily, config: &SynthesisConfig) -> Result<OmegaPoint> {
    let tol = &config.tol;
    if fam.degree() < 3 {
        return Err(Error::Precondition("the seeded search needs degree >= 3".into()));
    }
    let seeds = seed_points(fam, tol)?;
    let tried = seeds.len();
    if let Some(p) = seeds
        .into_par_iter()
        .find_map_first(|(x, src)| certify_point(fam, &x, src, tol))
    {
        return Ok(p);
    }
    let grid = default_lp_grid(fam, config.lp_grid)?;
    let margin = 1e-9;
    let lp = lp_grid_feasibility(fam, &grid, margin, config.lp_rounds, tol);
    let note = match lp {
        Ok(Some(sol)) => {
            if let Some(p) = certify_point(fam, &sol.x, PointSource::LpFallback { rounds: sol.rounds }, tol) {
                return Ok(p);
            }
            "LP point failed final certification".to_string()
        }
        Ok(None) => format!("LP cutting planes exhausted after {} rounds", config.lp_rounds),
        Err(e) => e.to_string(),
    };
    Err(Error::SearchExhausted { diagnostics: format!("{tried} seeds rejected; {note}") })
}
