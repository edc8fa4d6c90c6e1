//! Discrete-time counterpart via the bilinear map.
//!
//! Convention: `z = (1 + s) / (1 - s)`, equivalently `s = (z - 1) / (z + 1)`.
//! The open unit disc maps onto the open left half-plane and the unit
//! circle onto the imaginary axis, with `z = e^{jθ}` ↔ `s = j tan(θ/2)`.
//! A polynomial in `z` is written with descending coefficients like any
//! [`Poly`].
//!
//! Discrete SPR is taken as: equal degrees, Schur denominator, and
//! `Re[c(e^{jθ}) / a(e^{jθ})] > 0` for every θ. Under the map this is the
//! continuous definition for the transformed pair, and the frequency
//! condition becomes positivity of a polynomial in `t = tan²(θ/2)` on
//! `[0, ∞)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::polycore::{exact_sign_at, routh_hurwitz, Poly};
use crate::segstab::{SegmentFamily, SegmentVerdict};
use crate::sprcheck::{is_spr, SprCertificate};
use crate::synthesis::{synthesize, SynthesisConfig, SynthesisResult};

/// Polynomial in `z`, descending powers.
pub type DiscretePoly = Poly;

/// `(f0 s + f1)^i (g0 s + g1)^j`.
fn factor_powers(f: [f64; 2], i: usize, g: [f64; 2], j: usize) -> Poly {
    let (f, g) = (Poly::new(f.to_vec()), Poly::new(g.to_vec()));
    let mut p = Poly::constant(1.0);
    for _ in 0..i {
        p = &p * &f;
    }
    for _ in 0..j {
        p = &p * &g;
    }
    p
}

/// `(1 - s)^n pz((1 + s)/(1 - s))` without sign normalisation.
fn to_continuous_raw(pz: &Poly) -> Poly {
    let n = pz.degree();
    let asc = pz.ascending();
    let mut out = Poly::zero();
    for (k, &pk) in asc.iter().enumerate() {
        if pk != 0.0 {
            out = &out + &factor_powers([1.0, 1.0], k, [-1.0, 1.0], n - k).scale(pk);
        }
    }
    out
}

fn check_pole(pz: &Poly, tol: &Tolerances) -> Result<()> {
    if pz.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    // Heavy cancellation at z = -1 is settled exactly rather than by the
    // floating-point value.
    let at = pz.eval(-1.0);
    if at.abs() <= tol.sign * pz.eval_abs(-1.0) && exact_sign_at(pz, -1.0) == 0 {
        return Err(Error::TransformPole);
    }
    Ok(())
}

/// `p_s(s) = (1 - s)^n pz((1 + s)/(1 - s))`, scaled to a positive leading
/// coefficient.
pub fn bilinear_to_continuous(pz: &DiscretePoly, tol: &Tolerances) -> Result<Poly> {
    check_pole(pz, tol)?;
    Ok(to_continuous_raw(pz).with_positive_leading())
}

/// `(z + 1)^n ps((z - 1)/(z + 1))` for `n >= deg ps`. Composing with
/// [`bilinear_to_continuous`] multiplies by `2^n`.
pub fn continuous_to_discrete(ps: &Poly, n: usize) -> Result<DiscretePoly> {
    if ps.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if ps.degree() > n {
        return Err(Error::DegreeMismatch(format!("degree {} above target {n}", ps.degree())));
    }
    let asc = ps.ascending();
    let mut out = Poly::zero();
    for (k, &ck) in asc.iter().enumerate() {
        if ck != 0.0 {
            out = &out + &factor_powers([1.0, -1.0], k, [1.0, 1.0], n - k).scale(ck);
        }
    }
    Ok(out)
}

/// All roots strictly inside the unit disc, decided by the Routh table of
/// the bilinear image.
pub fn schur_check(pz: &DiscretePoly, tol: &Tolerances) -> Result<bool> {
    if pz.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if pz.degree() == 0 {
        return Err(Error::Precondition("Schur check needs degree >= 1".into()));
    }
    Ok(routh_hurwitz(&bilinear_to_continuous(pz, tol)?, tol)?.hurwitz)
}

/// `s` to `z` for reporting witness roots.
pub fn s_to_z(s: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    (one + s) / (one - s)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscreteSynthesisResult {
    pub az: DiscretePoly,
    pub bz: DiscretePoly,
    /// Run of the continuous pipeline on the monic bilinear images.
    pub continuous: SynthesisResult,
    pub c_z: DiscretePoly,
    /// SPR certificates of the bilinear images of `c_z / a_z`, `c_z / b_z`.
    pub cert_a: SprCertificate,
    pub cert_b: SprCertificate,
    pub degree_bound_ok: bool,
}

/// Certificate for `Re[cz/dz] > 0` on the unit circle plus Schur `dz`.
pub fn discrete_spr(cz: &DiscretePoly, dz: &DiscretePoly, tol: &Tolerances) -> Result<SprCertificate> {
    check_pole(dz, tol)?;
    check_pole(cz, tol)?;
    if cz.degree() != dz.degree() {
        return Err(Error::DegreeMismatch(format!(
            "discrete SPR needs equal degrees, got {} and {}",
            cz.degree(),
            dz.degree()
        )));
    }
    // Same (1 - s)^n factor on both sides keeps the quotient unchanged;
    // a common sign flip keeps its real part.
    let (mut c, mut d) = (to_continuous_raw(cz), to_continuous_raw(dz));
    if d.leading() < 0.0 {
        c = -&c;
        d = -&d;
    }
    is_spr(&c, &d, tol)
}

/// Discrete robust SPR synthesis by reduction to the continuous pipeline.
pub fn synthesize_discrete(az: &DiscretePoly, bz: &DiscretePoly, config: &SynthesisConfig) -> Result<DiscreteSynthesisResult> {
    let tol = &config.tol;
    if az.is_zero() || bz.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if az.degree() != bz.degree() {
        return Err(Error::DegreeMismatch(format!("endpoint degrees {} and {}", az.degree(), bz.degree())));
    }
    let n = az.degree();
    if n == 0 {
        return Err(Error::Precondition("endpoints must have degree >= 1".into()));
    }
    check_pole(az, tol)?;
    check_pole(bz, tol)?;
    let (ra, rb) = (to_continuous_raw(az), to_continuous_raw(bz));
    let (alpha, beta) = (ra.leading(), rb.leading());
    if (alpha > 0.0) != (beta > 0.0) {
        // Some member vanishes at z = -1, a point of the unit circle.
        let lambda = alpha / (alpha - beta);
        return Err(Error::SegmentUnstable {
            verdict: Box::new(SegmentVerdict {
                stable: false,
                witness_lambda: Some(lambda),
                witness_root: Some(Complex64::new(-1.0, 0.0)),
                crossings: Vec::new(),
                method_trace: vec!["a member of the discrete segment has a root at z = -1".into()],
            }),
        });
    }
    let fam = SegmentFamily::new(ra.monic()?, rb.monic()?)?;
    let continuous = match synthesize(&fam, config) {
        Ok(r) => r,
        Err(Error::SegmentUnstable { mut verdict }) => {
            // μ-member of the monic images is a positive multiple of the
            // λ-member of the discrete segment with λ = μβ / (α(1-μ) + μβ).
            if let Some(mu) = verdict.witness_lambda {
                verdict.witness_lambda = Some(mu * beta / (alpha * (1.0 - mu) + mu * beta));
            }
            verdict.witness_root = verdict.witness_root.map(s_to_z);
            for c in verdict.crossings.iter_mut() {
                c.lambda = c.lambda * beta / (alpha * (1.0 - c.lambda) + c.lambda * beta);
            }
            verdict.method_trace.push("witness mapped back through z = (1 + s)/(1 - s)".into());
            return Err(Error::SegmentUnstable { verdict });
        }
        Err(e) => return Err(e),
    };
    let c_z = continuous_to_discrete(&continuous.c_final, n)?;
    let degree_bound_ok = c_z.degree() <= n;
    if !degree_bound_ok {
        return Err(Error::Internal(format!("discrete numerator has degree {} > {n}", c_z.degree())));
    }
    let cert_a = discrete_spr(&c_z, az, tol)?;
    let cert_b = discrete_spr(&c_z, bz, tol)?;
    if !(cert_a.spr && cert_b.spr) {
        return Err(Error::Internal("discrete certificates failed after continuous success".into()));
    }
    Ok(DiscreteSynthesisResult { az: az.clone(), bz: bz.clone(), continuous, c_z, cert_a, cert_b, degree_bound_ok })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn transform_examples() {
        let z = Poly::new(vec![1.0, 0.0]);
        assert_eq!(bilinear_to_continuous(&z, &tol()).unwrap().coeffs(), &[1.0, 1.0]);
        // z - 2 -> (1 + s) - 2 (1 - s) = 3 s - 1
        let p = bilinear_to_continuous(&Poly::new(vec![1.0, -2.0]), &tol()).unwrap();
        assert_eq!(p.coeffs(), &[3.0, -1.0]);
        assert_eq!(
            bilinear_to_continuous(&Poly::new(vec![1.0, 1.0]), &tol()),
            Err(Error::TransformPole)
        );
    }

    #[test]
    fn large_coefficients_with_small_value_at_minus_one_are_not_poles() {
        // exact value at z = -1 is -32 against coefficients near 1e11
        let pz = Poly::new(vec![1e11 + 16.0, 1e11, -1e11, -1e11 - 16.0]);
        assert_eq!(pz.eval(-1.0), -32.0);
        assert!(bilinear_to_continuous(&pz, &tol()).is_ok());
    }

    #[test]
    fn round_trip_scales_by_power_of_two() {
        let ps = Poly::new(vec![1.0, 6.0, 12.0, 8.0]);
        let back = bilinear_to_continuous(&continuous_to_discrete(&ps, 3).unwrap(), &tol()).unwrap();
        for (x, y) in back.coeffs().iter().zip(ps.coeffs()) {
            assert!((x - 8.0 * y).abs() < 1e-12);
        }
    }

    #[test]
    fn schur_examples() {
        assert!(schur_check(&Poly::new(vec![1.0, 0.0]), &tol()).unwrap());
        assert!(!schur_check(&Poly::new(vec![1.0, -2.0]), &tol()).unwrap());
        assert!(schur_check(&Poly::from_real_roots(&[0.5, 0.9]), &tol()).unwrap());
    }

    #[test]
    fn synthesis_examples() {
        let cfg = SynthesisConfig::default();
        let z3 = Poly::new(vec![1.0, 0.0, 0.0, 0.0]);
        let r = synthesize_discrete(&z3, &z3, &cfg).unwrap();
        assert!(r.cert_a.spr && r.c_z.degree() <= 3);
        let z = Poly::new(vec![1.0, 0.0]);
        let r = synthesize_discrete(&z, &z, &cfg).unwrap();
        assert!(r.cert_a.spr && r.c_z.degree() <= 1);
    }
}
