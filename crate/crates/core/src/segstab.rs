//! Hurwitz stability of the whole segment `λb + (1-λ)a`, `λ ∈ [0, 1]`.
//!
//! The primary decision uses boundary-crossing elimination: since every
//! member is monic of degree `n`, roots can only leave the open left
//! half-plane through the imaginary axis. A root `jω` of `a_λ` needs the
//! even and odd parts to vanish together, and both are affine in `λ`.
//! Eliminating `λ` leaves a polynomial in `t = ω²` whose positive roots are
//! the candidate crossings. The Hurwitz-minor route is an independent
//! cross-check.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::polycore::{
    cauchy_root_bound, complex_roots, positive_on_interval, real_roots_in, routh_hurwitz, Poly, PositivityProof,
};

/// Ordered pair of monic polynomials of equal degree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentFamily {
    a: Poly,
    b: Poly,
}

impl SegmentFamily {
    pub fn new(a: Poly, b: Poly) -> Result<Self> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if a.degree() != b.degree() {
            return Err(Error::DegreeMismatch(format!(
                "segment endpoints have degrees {} and {}",
                a.degree(),
                b.degree()
            )));
        }
        if a.degree() == 0 {
            return Err(Error::Precondition("segment endpoints must have degree >= 1".into()));
        }
        for p in [&a, &b] {
            if !p.is_monic() {
                return Err(Error::NotMonic(p.leading()));
            }
        }
        Ok(SegmentFamily { a, b })
    }

    /// Scales both endpoints to monic first.
    pub fn normalized(a: &Poly, b: &Poly) -> Result<Self> {
        SegmentFamily::new(a.monic()?, b.monic()?)
    }

    pub fn a(&self) -> &Poly {
        &self.a
    }

    pub fn b(&self) -> &Poly {
        &self.b
    }

    pub fn degree(&self) -> usize {
        self.a.degree()
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    /// `a_λ = a + λ (b - a)`, coefficientwise `a_i + λ (b_i - a_i)`.
    pub fn at(&self, lambda: f64) -> Poly {
        Poly::new(
            self.a
                .coeffs()
                .iter()
                .zip(self.b.coeffs())
                .map(|(&ai, &bi)| ai + lambda * (bi - ai))
                .collect(),
        )
    }
}

/// A λ where `a_λ` has the root `jω`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub lambda: f64,
    pub omega: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentVerdict {
    pub stable: bool,
    pub witness_lambda: Option<f64>,
    pub witness_root: Option<Complex64>,
    pub crossings: Vec<Crossing>,
    pub method_trace: Vec<String>,
}

impl SegmentVerdict {
    fn unstable(lambda: f64, root: Complex64, crossings: Vec<Crossing>, trace: Vec<String>) -> Self {
        SegmentVerdict {
            stable: false,
            witness_lambda: Some(lambda),
            witness_root: Some(root),
            crossings,
            method_trace: trace,
        }
    }
}

fn rightmost_root(p: &Poly) -> Result<Complex64> {
    let roots = complex_roots(p)?;
    roots
        .into_iter()
        .max_by(|x, y| x.re.partial_cmp(&y.re).unwrap())
        .ok_or_else(|| Error::Internal("no roots".into()))
}

/// `|a_λ(jω)|` relative to `Σ |c_i| |ω|^i`.
fn crossing_residual(fam: &SegmentFamily, lambda: f64, omega: f64) -> f64 {
    let p = fam.at(lambda);
    p.eval_at_jomega(omega).norm() / p.eval_abs(omega).max(f64::MIN_POSITIVE)
}

/// Newton on the real 2x2 system `a(jω) + λ d(jω) = 0`.
fn refine_crossing(fam: &SegmentFamily, lambda: f64, omega: f64) -> (f64, f64) {
    let d = fam.b() - fam.a();
    let (a, da, dd) = (fam.a(), fam.a().derivative(), d.derivative());
    let j = Complex64::new(0.0, 1.0);
    let mut cur = (lambda, omega);
    let mut res = crossing_residual(fam, cur.0, cur.1);
    for _ in 0..4 {
        let (l, w) = cur;
        let f = a.eval_at_jomega(w) + d.eval_at_jomega(w) * l;
        let fl = d.eval_at_jomega(w);
        let fw = j * (da.eval_at_jomega(w) + dd.eval_at_jomega(w) * l);
        let det = fl.re * fw.im - fw.re * fl.im;
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let dl = (f.re * fw.im - fw.re * f.im) / det;
        let dw = (fl.re * f.im - f.re * fl.im) / det;
        let next = (l - dl, w - dw);
        let r = crossing_residual(fam, next.0, next.1);
        if !(r < res) {
            break;
        }
        cur = next;
        res = r;
    }
    cur
}

/// Exact-elimination segment stability test.
pub fn segment_hurwitz(fam: &SegmentFamily, tol: &Tolerances) -> Result<SegmentVerdict> {
    let mut trace = Vec::new();
    for (lambda, p, name) in [(0.0, fam.a(), "a"), (1.0, fam.b(), "b")] {
        let table = routh_hurwitz(p, tol)?;
        if !table.hurwitz {
            trace.push(format!("endpoint {name} fails Routh at row {:?}", table.failure_row));
            let root = rightmost_root(p)?;
            return Ok(SegmentVerdict::unstable(lambda, root, Vec::new(), trace));
        }
    }
    trace.push("endpoints Hurwitz (Routh)".into());

    let d = fam.b() - fam.a();
    if d.is_zero() {
        trace.push("degenerate segment a = b".into());
        return Ok(SegmentVerdict {
            stable: true,
            witness_lambda: None,
            witness_root: None,
            crossings: Vec::new(),
            method_trace: trace,
        });
    }

    // Root at the origin: a_λ(0) is affine in λ.
    let (a0, b0) = (fam.a().constant_term(), fam.b().constant_term());
    if a0 <= 0.0 || b0 <= 0.0 {
        let lambda = if a0 <= 0.0 { 0.0 } else { 1.0 };
        trace.push("constant term vanishes on the segment".into());
        return Ok(SegmentVerdict::unstable(lambda, Complex64::new(0.0, 0.0), Vec::new(), trace));
    }
    trace.push("constant term positive on [0, 1]".into());

    let (ae, ao) = fam.a().even_odd();
    let (de, d_o) = d.even_odd();
    let (ae, ao, de, d_o) = (ae.reflect(), ao.reflect(), de.reflect(), d_o.reflect());
    let elim = &(&ae * &d_o) - &(&ao * &de);
    let mut crossings: Vec<Crossing> = Vec::new();
    if elim.is_zero() {
        trace.push("elimination polynomial vanishes identically".into());
    } else {
        let bound = cauchy_root_bound(&elim)?;
        let mut candidates: Vec<f64> = real_roots_in(&elim, 0.0, bound);
        // near-tangential roots that roundoff lifted off zero
        for c in real_roots_in(&elim.derivative(), 0.0, bound) {
            if elim.eval(c).abs() <= tol.sign * elim.eval_abs(c) {
                candidates.push(c);
            }
        }
        trace.push(format!(
            "elimination polynomial of degree {} has {} candidate(s) in t > 0",
            elim.degree(),
            candidates.iter().filter(|&&t| t > 0.0).count()
        ));
        for t in candidates.into_iter().filter(|&t| t > 0.0) {
            let lambda_of = |num: &Poly, den: &Poly| -> Option<f64> {
                let dv = den.eval(t);
                if dv.abs() <= tol.sign * den.eval_abs(t) {
                    None
                } else {
                    Some(-num.eval(t) / dv)
                }
            };
            let le = lambda_of(&ae, &de);
            let lo = lambda_of(&ao, &d_o);
            let holds = |num: &Poly| num.eval(t).abs() <= tol.sign * num.eval_abs(t);
            let lambda = match (le, lo) {
                (Some(x), Some(y)) if (x - y).abs() <= tol.lambda * (1.0 + x.abs().max(y.abs())) => 0.5 * (x + y),
                (Some(x), None) if holds(&ao) => x,
                (None, Some(y)) if holds(&ae) => y,
                _ => continue,
            };
            if lambda < -tol.lambda || lambda > 1.0 + tol.lambda {
                continue;
            }
            let (l, w) = refine_crossing(fam, lambda.clamp(0.0, 1.0), t.sqrt());
            let residual = crossing_residual(fam, l, w);
            if residual <= tol.res && (-tol.lambda..=1.0 + tol.lambda).contains(&l) {
                crossings.push(Crossing { lambda: l.clamp(0.0, 1.0), omega: w.abs(), residual });
            }
        }
    }
    crossings.sort_by(|x, y| x.lambda.partial_cmp(&y.lambda).unwrap());
    crossings.dedup_by(|x, y| (x.lambda - y.lambda).abs() < 1e-9 && (x.omega - y.omega).abs() < 1e-9);

    if let Some(first) = crossings.first().copied() {
        trace.push(format!("axis crossing at lambda = {} (omega = {})", first.lambda, first.omega));
        return Ok(SegmentVerdict::unstable(
            first.lambda,
            Complex64::new(0.0, first.omega),
            crossings,
            trace,
        ));
    }
    trace.push("no axis crossing for lambda in [0, 1]".into());
    Ok(SegmentVerdict { stable: true, witness_lambda: None, witness_root: None, crossings, method_trace: trace })
}

/// Result of the Hurwitz-minor cross-check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinorVerdict {
    pub stable: bool,
    /// 1-based index of the first minor not positive on `[0, 1]`.
    pub failing_minor: Option<usize>,
    /// `Δ_k(λ)` for `k = 1..=n`, as polynomials in λ.
    pub minors: Vec<Poly>,
    pub proofs: Vec<PositivityProof>,
}

/// Largest degree accepted by [`lambda_routh_positivity`].
pub const MINOR_DEGREE_CAP: usize = 12;

fn hurwitz_matrix(p: &Poly, k: usize) -> DMatrix<f64> {
    let n = p.degree();
    let c = p.coeffs();
    DMatrix::from_fn(k, k, |i, j| {
        // H_{ij} = a_{2j - i} in 1-based indexing
        let idx = 2 * (j as isize + 1) - (i as isize + 1);
        if idx < 0 || idx as usize > n {
            0.0
        } else {
            c[idx as usize]
        }
    })
}

/// Builds each leading principal Hurwitz minor of `a_λ` as a polynomial in
/// λ (exact interpolation at Chebyshev nodes) and certifies positivity on
/// `[0, 1]` with Sturm chains.
pub fn lambda_routh_positivity(fam: &SegmentFamily, tol: &Tolerances) -> Result<MinorVerdict> {
    let n = fam.degree();
    if n > MINOR_DEGREE_CAP {
        return Err(Error::DegreeCap { degree: n, cap: MINOR_DEGREE_CAP });
    }
    let mut minors = Vec::with_capacity(n);
    let mut proofs = Vec::with_capacity(n);
    let mut failing = None;
    for k in 1..=n {
        // Δ_k has degree <= k in λ; interpolate in μ = 2λ - 1 ∈ [-1, 1].
        let nodes: Vec<f64> = (0..=k)
            .map(|i| (std::f64::consts::PI * (2 * i + 1) as f64 / (2 * (k + 1)) as f64).cos())
            .collect();
        let values: Vec<f64> = nodes
            .iter()
            .map(|&mu| hurwitz_matrix(&fam.at(0.5 * (mu + 1.0)), k).determinant())
            .collect();
        let vander = DMatrix::from_fn(k + 1, k + 1, |i, j| nodes[i].powi(j as i32));
        let rhs = nalgebra::DVector::from_vec(values);
        let asc = vander
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::Internal("singular interpolation system".into()))?;
        let mu_poly = Poly::normalized(&asc.iter().rev().copied().collect::<Vec<_>>(), tol.strip)?;
        let lambda_poly = mu_poly.compose_affine(2.0, -1.0);
        let lambda_poly = Poly::normalized(lambda_poly.coeffs(), tol.strip)?;
        let proof = if lambda_poly.is_zero() {
            positive_on_interval(&Poly::constant(-1.0), 0.0, 1.0, tol)?
        } else {
            positive_on_interval(&lambda_poly, 0.0, 1.0, tol)?
        };
        if !proof.verdict && failing.is_none() {
            failing = Some(k);
        }
        minors.push(lambda_poly);
        proofs.push(proof);
    }
    Ok(MinorVerdict { stable: failing.is_none(), failing_minor: failing, minors, proofs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(a: &[f64], b: &[f64]) -> SegmentFamily {
        SegmentFamily::new(Poly::new(a.to_vec()), Poly::new(b.to_vec())).unwrap()
    }

    #[test]
    fn constant_segment() {
        let f = fam(&[1.0, 3.0, 3.0, 1.0], &[1.0, 3.0, 3.0, 1.0]);
        assert!(segment_hurwitz(&f, &Tolerances::default()).unwrap().stable);
        let m = lambda_routh_positivity(&f, &Tolerances::default()).unwrap();
        assert!(m.stable);
        assert!(m.minors.iter().all(|p| p.degree() == 0));
    }

    #[test]
    fn cubic_pair_is_stable_with_known_minor() {
        let f = fam(&[1.0, 3.0, 3.0, 1.0], &[1.0, 6.0, 12.0, 8.0]);
        assert!(segment_hurwitz(&f, &Tolerances::default()).unwrap().stable);
        let m = lambda_routh_positivity(&f, &Tolerances::default()).unwrap();
        assert!(m.stable);
        let d2 = &m.minors[1];
        for (got, want) in d2.coeffs().iter().zip([27.0, 29.0, 8.0]) {
            assert!((got - want).abs() < 1e-10, "{d2}");
        }
    }

    #[test]
    fn unstable_endpoint_is_reported_at_that_end() {
        let f = fam(&[1.0, 3.0, 3.0, 1.0], &[1.0, 1.0, 1.0, 1.0]);
        let v = segment_hurwitz(&f, &Tolerances::default()).unwrap();
        assert!(!v.stable);
        assert_eq!(v.witness_lambda, Some(1.0));
        assert!(v.witness_root.unwrap().re > -1e-9);
    }

    #[test]
    fn family_validation() {
        assert!(matches!(
            SegmentFamily::new(Poly::new(vec![1.0, 1.0]), Poly::new(vec![1.0, 1.0, 1.0])),
            Err(Error::DegreeMismatch(_))
        ));
        assert!(matches!(
            SegmentFamily::new(Poly::new(vec![2.0, 1.0]), Poly::new(vec![1.0, 1.0])),
            Err(Error::NotMonic(_))
        ));
    }

    #[test]
    fn degree_cap() {
        let a = Poly::from_real_roots(&[-1.0; 13]);
        let f = SegmentFamily::new(a.clone(), a).unwrap();
        assert!(matches!(
            lambda_routh_positivity(&f, &Tolerances::default()),
            Err(Error::DegreeCap { degree: 13, cap: 12 })
        ));
    }
}
