//! The two small perturbations that turn a feasible `x` into a certified
//! numerator: `ε` repairs strictness at `t = 0`, `δ` lifts the degree to
//! `n` so the quotient becomes biproper.

use serde::{Deserialize, Serialize};

use super::search::OmegaPoint;
use super::SynthesisConfig;
use crate::error::{Error, Result};
use crate::polycore::{
    cauchy_lower_bound, cauchy_root_bound, max_abs_on_interval, min_on_interval, rational_extremum, Poly,
};
use crate::segstab::SegmentFamily;
use crate::sprcheck::{cl_coefficients, is_spr, numerator_from_x, re_positive, real_part_numerator, SprCertificate};

/// Bounds behind the choice of `ε`. Index 1 refers to endpoint `a`,
/// index 2 to endpoint `b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonSelection {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub t4: f64,
    pub m1: f64,
    pub m2: f64,
    pub n1: f64,
    pub n2: f64,
    pub epsilon: f64,
    /// `c̃(t)` with `Re[(1 - s^{n-2}) / a] |a|^2 = t^{n-1} - c̃(t)`.
    pub ctilde_poly: Poly,
    pub dtilde_poly: Poly,
    /// Times `ε` was halved from `min(M1/N1, M2/N2) / 2` before the
    /// certificates passed.
    pub halvings: usize,
}

/// Bounds behind the choice of `δ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaSelection {
    pub omega1: f64,
    pub omega2: f64,
    pub m3: f64,
    pub m4: f64,
    pub n3: f64,
    pub n4: f64,
    pub delta: f64,
    pub h: Poly,
    pub halvings: usize,
}

/// `1 - s^{n-2}`, the direction of the `ε` perturbation.
pub fn epsilon_direction(n: usize) -> Poly {
    &Poly::constant(1.0) - &Poly::monomial(n - 2, 1.0)
}

/// `c(s) = s^{n-1} + (x_1 - ε) s^{n-2} + x_2 s^{n-3} + ... + (x_{n-1} + ε)`.
pub fn perturbed_numerator(x: &[f64], epsilon: f64) -> Poly {
    let n = x.len() + 1;
    &numerator_from_x(x) + &epsilon_direction(n).scale(epsilon)
}

struct SideBounds {
    lo: f64,
    hi: f64,
    m: f64,
    n: f64,
    tilde: Poly,
}

fn epsilon_side(den: &Poly, x: &[f64]) -> Result<SideBounds> {
    let n = den.degree();
    let g = cl_coefficients(den, x)?.poly();
    let q = real_part_numerator(&epsilon_direction(n), den)?;
    let lo = cauchy_lower_bound(&q)
        .ok_or_else(|| Error::Internal("perturbation numerator vanishes at t = 0".into()))?
        / 2.0;
    let hi = 2.0 * cauchy_root_bound(&q)?;
    let m = min_on_interval(&g, lo, hi).0;
    let nn = max_abs_on_interval(&q, lo, hi).0;
    if !(m > 0.0 && nn > 0.0) {
        return Err(Error::Internal(format!("epsilon bounds degenerate: M = {m}, N = {nn}")));
    }
    let tilde = &Poly::monomial(n - 1, 1.0) - &q;
    Ok(SideBounds { lo, hi, m, n: nn, tilde })
}

/// Chooses `ε` for a certified `x` (degree `n >= 3`) and returns the
/// intermediate numerator of degree `n - 1`.
pub fn epsilon_select(
    fam: &SegmentFamily,
    point: &OmegaPoint,
    config: &SynthesisConfig,
) -> Result<(EpsilonSelection, Poly)> {
    let n = fam.degree();
    if n < 3 {
        return Err(Error::Precondition("epsilon selection needs degree >= 3".into()));
    }
    let sa = epsilon_side(fam.a(), &point.x)?;
    let sb = epsilon_side(fam.b(), &point.x)?;
    let mut epsilon = 0.5 * (sa.m / sa.n).min(sb.m / sb.n);
    for halvings in 0..=config.halving_budget {
        let c = perturbed_numerator(&point.x, epsilon);
        if re_positive(&c, fam.a(), &config.tol)?.verdict && re_positive(&c, fam.b(), &config.tol)?.verdict {
            let sel = EpsilonSelection {
                t1: sa.lo,
                t2: sa.hi,
                t3: sb.lo,
                t4: sb.hi,
                m1: sa.m,
                m2: sb.m,
                n1: sa.n,
                n2: sb.n,
                epsilon,
                ctilde_poly: sa.tilde,
                dtilde_poly: sb.tilde,
                halvings,
            };
            return Ok((sel, c));
        }
        epsilon *= 0.5;
    }
    Err(Error::Internal(format!(
        "epsilon halving budget of {} exhausted",
        config.halving_budget
    )))
}

struct LiftBounds {
    omega: f64,
    m: f64,
    n: f64,
}

fn lift_side(c: &Poly, den: &Poly, h: &Poly) -> Result<LiftBounds> {
    let ph = real_part_numerator(h, den)?;
    let pc = real_part_numerator(c, den)?;
    let mag = real_part_numerator(den, den)?;
    // beyond every positive root of P_h the lift only helps
    let t_max = 2.0 * cauchy_root_bound(&ph)?;
    let m = rational_extremum(&pc, &mag, 0.0, t_max, false).0;
    let nn = rational_extremum(&ph, &mag, 0.0, t_max, true).0;
    if !(m > 0.0) {
        return Err(Error::Precondition(format!("Re[c/den] is not positive (infimum {m})")));
    }
    if !(nn > 0.0) {
        return Err(Error::Internal("Re[h/den] vanishes identically on the bracket".into()));
    }
    Ok(LiftBounds { omega: t_max.sqrt(), m, n: nn })
}

/// The default lift polynomial `(s + 1)^n`.
pub fn default_lift(n: usize) -> Poly {
    Poly::from_real_roots(&vec![-1.0; n])
}

/// Adds `δ h` to a degree `n - 1` numerator with positive real part
/// against both endpoints. Returns the selection, the monic `c_final =
/// h + c / δ`, the unscaled `c + δ h`, and both SPR certificates.
pub fn degree_lift(
    c: &Poly,
    fam: &SegmentFamily,
    h: &Poly,
    config: &SynthesisConfig,
) -> Result<(DeltaSelection, Poly, Poly, SprCertificate, SprCertificate)> {
    let n = fam.degree();
    if h.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if h.degree() != n {
        return Err(Error::DegreeMismatch(format!("h has degree {}, expected {n}", h.degree())));
    }
    if !h.is_monic() {
        return Err(Error::NotMonic(h.leading()));
    }
    if c.is_zero() || c.degree() + 1 != n {
        return Err(Error::DegreeMismatch(format!("c must have degree {}", n - 1)));
    }
    for den in [fam.a(), fam.b()] {
        if !re_positive(c, den, &config.tol)?.verdict {
            return Err(Error::Precondition("Re[c/den] is not positive on the axis".into()));
        }
    }
    let la = lift_side(c, fam.a(), h)?;
    let lb = lift_side(c, fam.b(), h)?;
    let mut delta = 0.5 * (la.m / la.n).min(lb.m / lb.n);
    for halvings in 0..=config.halving_budget {
        let raw = c + &h.scale(delta);
        // h + c / δ keeps the leading coefficient exactly 1
        let fin = h + &c.scale(1.0 / delta);
        let cert_a = is_spr(&fin, fam.a(), &config.tol)?;
        let cert_b = is_spr(&fin, fam.b(), &config.tol)?;
        if cert_a.spr && cert_b.spr {
            let sel = DeltaSelection {
                omega1: la.omega,
                omega2: lb.omega,
                m3: la.m,
                m4: lb.m,
                n3: la.n,
                n4: lb.n,
                delta,
                h: h.clone(),
                halvings,
            };
            return Ok((sel, fin, raw, cert_a, cert_b));
        }
        delta *= 0.5;
    }
    Err(Error::Internal(format!("delta halving budget of {} exhausted", config.halving_budget)))
}
