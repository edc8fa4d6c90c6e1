//! Strict positive realness: the real-part numerator algebra and the
//! certificate for `num/den`.

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::polycore::{positive_on_halfline, routh_hurwitz, PositivityProof, Poly, RouthTable};

/// Coefficients `c_1..c_n` of the real-part numerator
/// `g(t) = c_1 t^{n-1} + ... + c_n` of `c(s)/den(s)` at `t = ω²`, where
/// `c(s) = s^{n-1} + x_1 s^{n-2} + ... + x_{n-1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealPartCoeffs {
    pub values: Vec<f64>,
    pub denominator: Poly,
    pub numerator_x: Vec<f64>,
}

impl RealPartCoeffs {
    /// `g(t)` as a polynomial in `t`.
    pub fn poly(&self) -> Poly {
        Poly::new(self.values.clone())
    }
}

/// Coefficient of `x_m` (with `x_0 = 1`) in `c_l`, for `den` of degree `n`.
/// `c_l = Σ_j (-1)^{l+j} a_j x_{2l-j-1}`.
fn cl_weight(den: &Poly, l: usize, m: usize) -> f64 {
    let n = den.degree();
    // j = 2l - 1 - m must lie in 0..=n
    let j = 2 * l as isize - 1 - m as isize;
    if j < 0 || j as usize > n {
        return 0.0;
    }
    let j = j as usize;
    let a_j = den.coeffs()[j];
    if (l + j).is_multiple_of(2) {
        a_j
    } else {
        -a_j
    }
}

/// `c_l` as an affine functional of `x`: `(constant, [coef of x_1 .. x_{n-1}])`.
pub fn cl_affine(den: &Poly, l: usize) -> (f64, Vec<f64>) {
    let n = den.degree();
    let constant = cl_weight(den, l, 0);
    let linear = (1..n).map(|m| cl_weight(den, l, m)).collect();
    (constant, linear)
}

/// `c_1..c_n` for the monic denominator `den` and the coefficient vector
/// `x` (length `n - 1`) of a monic numerator of degree `n - 1`.
pub fn cl_coefficients(den: &Poly, x: &[f64]) -> Result<RealPartCoeffs> {
    if den.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !den.is_monic() {
        return Err(Error::NotMonic(den.leading()));
    }
    let n = den.degree();
    if n == 0 {
        return Err(Error::Precondition("denominator of degree 0".into()));
    }
    if x.len() != n - 1 {
        return Err(Error::DimensionMismatch { expected: n - 1, got: x.len() });
    }
    let values = (1..=n)
        .map(|l| {
            let (c0, lin) = cl_affine(den, l);
            c0 + lin.iter().zip(x).map(|(w, xi)| w * xi).sum::<f64>()
        })
        .collect();
    Ok(RealPartCoeffs { values, denominator: den.clone(), numerator_x: x.to_vec() })
}

/// The monic numerator `s^{n-1} + x_1 s^{n-2} + ... + x_{n-1}`.
pub fn numerator_from_x(x: &[f64]) -> Poly {
    let mut coeffs = Vec::with_capacity(x.len() + 1);
    coeffs.push(1.0);
    coeffs.extend_from_slice(x);
    Poly::new(coeffs)
}

/// `P(t)` with `P(ω²) = Re[num(jω) · conj(den(jω))]`.
pub fn real_part_numerator(num: &Poly, den: &Poly) -> Result<Poly> {
    if den.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !num.is_zero() && num.degree() > den.degree() {
        return Err(Error::DegreeMismatch(format!(
            "numerator degree {} exceeds denominator degree {}",
            num.degree(),
            den.degree()
        )));
    }
    let (ne, no) = num.even_odd();
    let (de, d_o) = den.even_odd();
    // p(jω) = E(-t) + jω O(-t)
    let (ne, no, de, d_o) = (ne.reflect(), no.reflect(), de.reflect(), d_o.reflect());
    let t = Poly::new(vec![1.0, 0.0]);
    Ok(&(&ne * &de) + &(&t * &(&no * &d_o)))
}

/// Which Hurwitz class a numerator falls in, per the degree relation with
/// the denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HurwitzClass {
    /// Hurwitz of the same degree as the denominator.
    SameDegree(usize),
    /// Hurwitz of degree one less than the denominator.
    OneLess(usize),
}

impl HurwitzClass {
    pub fn degree(self) -> usize {
        match self {
            HurwitzClass::SameDegree(d) | HurwitzClass::OneLess(d) => d,
        }
    }
}

/// SPR certificate for `num/den`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SprCertificate {
    pub degree_match: bool,
    pub denominator_hurwitz: RouthTable,
    pub positivity: PositivityProof,
    /// Hurwitz class of the numerator; `None` when the verdict is negative
    /// or the numerator failed the check (see `alarm`).
    pub numerator_class: Option<HurwitzClass>,
    pub alarm: Option<String>,
    pub spr: bool,
}

/// Definition check: equal degrees, Hurwitz denominator, and a real-part
/// numerator strictly positive on `[0, ∞)` (which for equal degrees also
/// fixes a positive limit at infinity).
pub fn is_spr(num: &Poly, den: &Poly, tol: &Tolerances) -> Result<SprCertificate> {
    if num.is_zero() || den.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let degree_match = num.degree() == den.degree();
    let denominator_hurwitz = routh_hurwitz(den, tol)?;
    // Re[num conj(den)] = Re[den conj(num)], so an improper quotient is
    // handled by swapping the operands.
    let p = if num.degree() <= den.degree() {
        real_part_numerator(num, den)?
    } else {
        real_part_numerator(den, num)?
    };
    let positivity = positive_on_halfline(&p, true, tol)?;
    let spr = degree_match && denominator_hurwitz.hurwitz && positivity.verdict;
    let (numerator_class, alarm) = if spr {
        match property1_class(num, den, tol) {
            Ok(c) => (Some(c), None),
            Err(e) => (None, Some(e.to_string())),
        }
    } else {
        (None, None)
    };
    Ok(SprCertificate { degree_match, denominator_hurwitz, positivity, numerator_class, alarm, spr })
}

/// Frequency condition alone: `Re[num(jω)/den(jω)] > 0` for every real ω.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RePositive {
    pub verdict: bool,
    pub proof: PositivityProof,
}

pub fn re_positive(num: &Poly, den: &Poly, tol: &Tolerances) -> Result<RePositive> {
    if num.is_zero() || den.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = den.degree();
    let m = num.degree();
    if m != n && m + 1 != n {
        return Err(Error::DegreeMismatch(format!(
            "numerator degree {m} must be {n} or {}",
            n.saturating_sub(1)
        )));
    }
    if !routh_hurwitz(den, tol)?.hurwitz {
        return Err(Error::NotHurwitz("denominator".into()));
    }
    let p = real_part_numerator(num, den)?;
    let proof = positive_on_halfline(&p, true, tol)?;
    Ok(RePositive { verdict: proof.verdict, proof })
}

fn property1_class(num: &Poly, den: &Poly, tol: &Tolerances) -> Result<HurwitzClass> {
    let n = den.degree();
    let m = num.degree();
    // nonzero constants have no roots at all
    let hurwitz = m == 0 || routh_hurwitz(num, tol)?.hurwitz;
    if !hurwitz {
        return Err(Error::ConsistencyAlarm(format!(
            "numerator {num} is not Hurwitz although Re[num/den] > 0"
        )));
    }
    if m == n {
        Ok(HurwitzClass::SameDegree(m))
    } else if m + 1 == n {
        Ok(HurwitzClass::OneLess(m))
    } else {
        Err(Error::ConsistencyAlarm(format!("numerator degree {m} against denominator degree {n}")))
    }
}

/// The numerator of a quotient with positive real part on the axis and a
/// Hurwitz denominator must itself be Hurwitz, of degree `n` or `n - 1`.
pub fn check_property1(num: &Poly, den: &Poly, tol: &Tolerances) -> Result<HurwitzClass> {
    let rp = re_positive(num, den, tol)?;
    if !rp.verdict {
        return Err(Error::Precondition("Re[num/den] is not positive on the axis".into()));
    }
    property1_class(num, den, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[f64]) -> Poly {
        Poly::new(c.to_vec())
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn cl_matches_cubic_closed_form() {
        let a = p(&[1.0, 3.0, 3.0, 1.0]);
        let (x1, x2) = (0.7, -1.3);
        let c = cl_coefficients(&a, &[x1, x2]).unwrap().values;
        assert_eq!(c, vec![3.0 - x1, 3.0 * x1 - 3.0 * x2 - 1.0, x2]);
        let c = cl_coefficients(&a, &[1.0, 0.5]).unwrap().values;
        assert_eq!(c, vec![2.0, 0.5, 0.5]);
    }

    #[test]
    fn cl_at_zero_x() {
        let a = p(&[1.0, 2.0, 5.0, 4.0, 7.0]);
        let c = cl_coefficients(&a, &[0.0; 3]).unwrap().values;
        // only x_0 = 1 survives: c_l = (-1)^{l + 2l - 1} a_{2l-1}
        assert_eq!(c, vec![2.0, -4.0, 0.0, 0.0]);
    }

    #[test]
    fn cl_dimension_and_monic_checks() {
        let a = p(&[1.0, 3.0, 3.0, 1.0]);
        assert_eq!(
            cl_coefficients(&a, &[1.0]),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        );
        assert!(matches!(cl_coefficients(&a.scale(2.0), &[1.0, 1.0]), Err(Error::NotMonic(_))));
    }

    #[test]
    fn real_part_numerator_examples() {
        let den = p(&[1.0, 1.0]);
        assert_eq!(real_part_numerator(&p(&[1.0]), &den).unwrap().coeffs(), &[1.0]);
        assert_eq!(real_part_numerator(&p(&[1.0, 2.0]), &den).unwrap().coeffs(), &[1.0, 2.0]);
        assert_eq!(real_part_numerator(&p(&[1.0, -1.0]), &den).unwrap().coeffs(), &[1.0, -1.0]);
        assert!(real_part_numerator(&p(&[1.0, 0.0, 0.0]), &den).is_err());
    }

    #[test]
    fn spr_examples() {
        let a = p(&[1.0, 3.0, 3.0, 1.0]);
        let cert = is_spr(&a, &a, &tol()).unwrap();
        assert!(cert.spr);
        assert_eq!(cert.numerator_class, Some(HurwitzClass::SameDegree(3)));
        assert!(is_spr(&p(&[1.0, 2.0]), &p(&[1.0, 1.0]), &tol()).unwrap().spr);
        let c = is_spr(&p(&[1.0, 0.0, 0.0]), &p(&[1.0, 2.0, 1.0]), &tol()).unwrap();
        assert!(!c.spr && c.degree_match && !c.positivity.verdict);
        assert_eq!(c.positivity.witness, Some(0.0));
    }

    #[test]
    fn re_positive_examples() {
        let a = p(&[1.0, 3.0, 3.0, 1.0]);
        assert!(re_positive(&a.derivative(), &a, &tol()).unwrap().verdict);
        assert!(re_positive(&p(&[1.0]), &p(&[1.0, 1.0]), &tol()).unwrap().verdict);
        let r = re_positive(&p(&[1.0, -1.0]), &p(&[1.0, 1.0]), &tol()).unwrap();
        assert!(!r.verdict);
        assert!(r.proof.witness.unwrap() < 1.0);
        assert!(matches!(
            re_positive(&p(&[1.0]), &p(&[1.0, -1.0]), &tol()),
            Err(Error::NotHurwitz(_))
        ));
    }

    #[test]
    fn property1_examples() {
        assert_eq!(
            check_property1(&p(&[1.0, 2.0]), &p(&[1.0, 1.0]), &tol()),
            Ok(HurwitzClass::SameDegree(1))
        );
        assert_eq!(check_property1(&p(&[1.0]), &p(&[1.0, 1.0]), &tol()), Ok(HurwitzClass::OneLess(0)));
        assert_eq!(
            check_property1(&p(&[3.0, 6.0, 3.0]), &p(&[1.0, 3.0, 3.0, 1.0]), &tol()),
            Ok(HurwitzClass::OneLess(2))
        );
        assert!(matches!(
            check_property1(&p(&[1.0, -1.0]), &p(&[1.0, 1.0]), &tol()),
            Err(Error::Precondition(_))
        ));
    }
}
