//! Brute-force reference implementations.
//!
//! These are deliberately simple: dense grids, companion-matrix eigenvalues
//! and naive complex evaluation. They never call the certificate machinery
//! of the main path (Routh tables, Sturm chains, the real-part numerator),
//! so agreement between the two is meaningful. The one exception is
//! [`brute_force_feasible_x`], whose acceptance test is by definition the
//! certificate it generates candidates for.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::polycore::{positive_on_halfline, Poly};
use crate::segstab::SegmentFamily;
use crate::sprcheck::cl_coefficients;

/// Minimum of a sampled function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub min_value: f64,
    pub argmin: f64,
    pub samples: usize,
    pub range: (f64, f64),
}

/// Naive Horner on complex arguments, independent of [`Poly::eval_complex`].
fn horner(coeffs: &[f64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs {
        acc = acc * z + Complex64::new(c, 0.0);
    }
    acc
}

/// Non-negative half of the symmetric hybrid grid: a quarter of the points
/// linear on `[0, min(1, w)]`, the rest log-spaced up to `w`.
fn half_grid(omega_max: f64, count: usize) -> Vec<f64> {
    let knee = omega_max.min(1.0);
    let lin = (count / 4).max(2).min(count);
    let mut pts: Vec<f64> = (0..lin).map(|i| knee * i as f64 / (lin - 1) as f64).collect();
    let rest = count - lin;
    if rest > 0 && omega_max > knee {
        let (l0, l1) = (knee.ln(), omega_max.ln());
        pts.extend((1..rest).map(|i| (l0 + (l1 - l0) * i as f64 / rest as f64).exp()));
        pts.push(omega_max);
    }
    pts
}

/// The symmetric hybrid frequency grid of `samples` points on
/// `[-omega_max, omega_max]`.
pub fn hybrid_grid(omega_max: f64, samples: usize) -> Vec<f64> {
    let half = half_grid(omega_max, samples.div_ceil(2));
    let mut grid: Vec<f64> = half.iter().rev().filter(|&&w| w > 0.0).map(|w| -w).collect();
    grid.extend(half);
    grid
}

/// Minimum of `Re[num(jω) / den(jω)]` over the hybrid grid.
pub fn grid_min_real_part(num: &Poly, den: &Poly, omega_max: f64, samples: usize) -> Result<GridReport> {
    if samples < 2 {
        return Err(Error::Precondition("grid needs at least two samples".into()));
    }
    if !(omega_max > 0.0 && omega_max.is_finite()) {
        return Err(Error::Precondition(format!("omega_max must be positive, got {omega_max}")));
    }
    if den.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let grid = hybrid_grid(omega_max, samples);
    let values: Vec<(f64, f64)> = grid
        .par_iter()
        .map(|&w| {
            let z = Complex64::new(0.0, w);
            let d = horner(den.coeffs(), z);
            let scale: f64 = den.coeffs().iter().fold(0.0, |acc, c| acc * w.abs() + c.abs());
            if d.norm() <= 1e-14 * scale {
                return Err(Error::AxisPole(w));
            }
            Ok(((horner(num.coeffs(), z) / d).re, w))
        })
        .collect::<Result<_>>()?;
    let (min_value, argmin) = values
        .into_iter()
        .fold((f64::INFINITY, 0.0), |best, v| if v.0 < best.0 { v } else { best });
    Ok(GridReport { min_value, argmin, samples: grid.len(), range: (-omega_max, omega_max) })
}

/// Minimum of a real polynomial over a log+linear grid of `[0, t_max]`.
pub fn grid_min_poly(p: &Poly, t_max: f64, samples: usize) -> GridReport {
    let grid = half_grid(t_max, samples.max(2));
    let (min_value, argmin) = grid
        .iter()
        .map(|&t| (horner(p.coeffs(), Complex64::new(t, 0.0)).re, t))
        .fold((f64::INFINITY, 0.0), |best, v| if v.0 < best.0 { v } else { best });
    GridReport { min_value, argmin, samples: grid.len(), range: (0.0, t_max) }
}

/// All roots from the eigenvalues of the companion matrix.
pub fn companion_roots(p: &Poly) -> Result<Vec<Complex64>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = p.degree();
    if n == 0 {
        return Ok(Vec::new());
    }
    let c = p.coeffs();
    let lead = c[0];
    let m = DMatrix::from_fn(n, n, |i, j| {
        if i == 0 {
            -c[j + 1] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let schur = nalgebra::linalg::Schur::try_new(m, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::NoConvergence(format!("companion eigenvalues, degree {n}")))?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

/// Largest real part among the roots.
pub fn max_real_part(p: &Poly) -> Result<f64> {
    Ok(companion_roots(p)?.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaGridReport {
    pub max_real_part: f64,
    pub at_lambda: f64,
}

/// Sweeps λ over a uniform grid of `[0, 1]`, taking the largest root real
/// part of each member, then polishes the best cell by golden-section
/// search.
pub fn lambda_grid_roots(fam: &SegmentFamily, samples: usize) -> Result<LambdaGridReport> {
    let samples = samples.max(2);
    let lambdas: Vec<f64> = (0..samples).map(|i| i as f64 / (samples - 1) as f64).collect();
    let values: Vec<f64> = lambdas
        .iter()
        .map(|&l| max_real_part(&fam.at(l)))
        .collect::<Result<_>>()?;
    let (mut best_i, mut best) = (0, f64::NEG_INFINITY);
    for (i, &v) in values.iter().enumerate() {
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let mut at = lambdas[best_i];
    let mut lo = lambdas[best_i.saturating_sub(1)];
    let mut hi = lambdas[(best_i + 1).min(samples - 1)];
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..40 {
        if hi - lo < 1e-13 {
            break;
        }
        let x1 = hi - g * (hi - lo);
        let x2 = lo + g * (hi - lo);
        let (f1, f2) = (max_real_part(&fam.at(x1))?, max_real_part(&fam.at(x2))?);
        for (f, x) in [(f1, x1), (f2, x2)] {
            if f > best {
                best = f;
                at = x;
            }
        }
        if f1 > f2 {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    Ok(LambdaGridReport { max_real_part: best, at_lambda: at })
}

/// Exhaustive scan of numerator coefficient vectors `x` over a box; returns
/// the first point (in lexicographic grid order) where both real-part
/// numerators are positive on `(0, ∞)`.
pub fn brute_force_feasible_x(
    fam: &SegmentFamily,
    bounds: &[(f64, f64)],
    resolution: usize,
    tol: &Tolerances,
) -> Result<Option<Vec<f64>>> {
    let n = fam.degree();
    if n > 4 {
        return Err(Error::DegreeCap { degree: n, cap: 4 });
    }
    if bounds.len() != n - 1 {
        return Err(Error::DimensionMismatch { expected: n - 1, got: bounds.len() });
    }
    if resolution < 2 || bounds.iter().any(|&(lo, hi)| !(lo < hi)) {
        return Ok(None);
    }
    let dims = n - 1;
    let total = resolution.pow(dims as u32);
    for idx in 0..total {
        let mut rem = idx;
        let mut x = vec![0.0; dims];
        for d in (0..dims).rev() {
            let k = rem % resolution;
            rem /= resolution;
            let (lo, hi) = bounds[d];
            x[d] = lo + (hi - lo) * k as f64 / (resolution - 1) as f64;
        }
        let ok = [fam.a(), fam.b()].iter().all(|den| {
            cl_coefficients(den, &x)
                .and_then(|g| positive_on_halfline(&g.poly(), false, tol))
                .map(|p| p.verdict)
                .unwrap_or(false)
        });
        if ok {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Schur–Cohn reduction: `p` has all roots in the open unit disc iff
/// `|p_0| < |p_n|` and `(p_n p(z) - p_0 z^n p(1/z)) / z` has the same
/// property.
pub fn schur_cohn_stable(p: &Poly) -> Result<bool> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut c = p.ascending();
    while c.len() > 1 {
        let m = c.len() - 1;
        let (lead, c0) = (c[m], c[0]);
        if c0.abs() >= lead.abs() {
            return Ok(false);
        }
        c = (0..m).map(|i| lead * c[i + 1] - c0 * c[m - 1 - i]).collect();
    }
    Ok(true)
}

/// Minimum of `Re[num(e^{jθ}) / den(e^{jθ})]` over a uniform θ grid.
pub fn unit_circle_min_real_part(num: &Poly, den: &Poly, samples: usize) -> Result<GridReport> {
    let samples = samples.max(2);
    let mut best = (f64::INFINITY, 0.0);
    for k in 0..samples {
        let theta = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * k as f64 / (samples - 1) as f64;
        let z = Complex64::from_polar(1.0, theta);
        let d = horner(den.coeffs(), z);
        if d.norm() <= 1e-14 * den.norm_1() {
            return Err(Error::AxisPole(theta));
        }
        let v = (horner(num.coeffs(), z) / d).re;
        if v < best.0 {
            best = (v, theta);
        }
    }
    Ok(GridReport {
        min_value: best.0,
        argmin: best.1,
        samples,
        range: (-std::f64::consts::PI, std::f64::consts::PI),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[f64]) -> Poly {
        Poly::new(c.to_vec())
    }

    #[test]
    fn grid_min_examples() {
        let a = p(&[1.0, 3.0, 3.0, 1.0]);
        let r = grid_min_real_part(&a, &a, 1e6, 10_001).unwrap();
        assert!((r.min_value - 1.0).abs() < 1e-15);
        let r = grid_min_real_part(&p(&[1.0, 2.0]), &p(&[1.0, 1.0]), 1e3, 2001).unwrap();
        assert!(r.min_value > 1.0 && r.min_value <= 2.0);
        let r = grid_min_real_part(&p(&[1.0, -1.0]), &p(&[1.0, 1.0]), 1e3, 2001).unwrap();
        assert!(r.min_value < 0.0 && r.argmin.abs() < 1e-12);
        assert!(matches!(
            grid_min_real_part(&p(&[1.0]), &p(&[1.0, 0.0, 1.0]), 10.0, 1001),
            Err(Error::AxisPole(_))
        ));
    }

    #[test]
    fn grid_is_symmetric_and_sorted() {
        let g = hybrid_grid(1e6, 101);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(g.first().copied(), Some(-1e6));
        assert_eq!(g.last().copied(), Some(1e6));
        assert!(g.contains(&0.0));
    }

    #[test]
    fn lambda_grid_examples() {
        let a = p(&[1.0, 3.0, 3.0, 1.0]);
        let fam = SegmentFamily::new(a.clone(), a).unwrap();
        let r = lambda_grid_roots(&fam, 11).unwrap();
        assert!((r.max_real_part + 1.0).abs() < 1e-4);
        let fam = SegmentFamily::new(p(&[1.0, 3.0, 3.0, 1.0]), p(&[1.0, 6.0, 12.0, 8.0])).unwrap();
        assert!(lambda_grid_roots(&fam, 101).unwrap().max_real_part < 0.0);
    }

    #[test]
    fn brute_force_examples() {
        let a = p(&[1.0, 3.0, 3.0, 1.0]);
        let fam = SegmentFamily::new(a.clone(), a).unwrap();
        let tol = Tolerances::default();
        assert!(brute_force_feasible_x(&fam, &[(0.0, 3.0), (0.0, 3.0)], 50, &tol).unwrap().is_some());
        assert!(brute_force_feasible_x(&fam, &[(1.0, 1.0), (0.0, 3.0)], 50, &tol).unwrap().is_none());
    }

    #[test]
    fn schur_cohn_examples() {
        assert!(schur_cohn_stable(&p(&[1.0, 0.0])).unwrap());
        assert!(!schur_cohn_stable(&p(&[1.0, -2.0])).unwrap());
        assert!(schur_cohn_stable(&Poly::from_real_roots(&[0.5, 0.9])).unwrap());
        assert!(!schur_cohn_stable(&Poly::from_real_roots(&[0.5, 1.0])).unwrap());
    }
}
