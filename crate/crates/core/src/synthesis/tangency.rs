//! Hyperplanes `Σ x_i / u_i = 1` tangent to every ellipse of a
//! denominator at once.

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::polycore::Poly;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangencyLine {
    /// Intercepts `u_1..u_{n-1}`.
    pub u: Vec<f64>,
}

impl TangencyLine {
    /// `Σ x_i / u_i`.
    pub fn value(&self, x: &[f64]) -> f64 {
        x.iter().zip(&self.u).map(|(x, u)| x / u).sum()
    }

    /// The normal `(1/u_1, ..., 1/u_{n-1})`.
    pub fn normal(&self) -> Vec<f64> {
        self.u.iter().map(|u| 1.0 / u).collect()
    }
}

fn sign(exp: usize) -> f64 {
    if exp.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Splits the tangency condition, which is affine in `u_1`, into
/// `(coefficient of u_1, constant)`:
/// `Σ_i (-1)^{⌊(i+1)/2⌋} a_i u_1^{(i+1) mod 2} u_2^{⌊n/2⌋-⌊i/2⌋}`.
pub fn tangency_condition(den: &Poly, u2: f64) -> (f64, f64) {
    let n = den.degree();
    let mut lin = 0.0;
    let mut cst = 0.0;
    for (i, &ai) in den.coeffs().iter().enumerate() {
        let term = sign(i.div_ceil(2)) * ai * u2.powi((n / 2 - i / 2) as i32);
        if (i + 1) % 2 == 1 {
            lin += term;
        } else {
            cst += term;
        }
    }
    (lin, cst)
}

/// Solves the tangency condition for `u_1` and fills the remaining
/// intercepts `u_j = (-1)^{⌊(j-1)/2⌋} u_1^{j mod 2} u_2^{⌊j/2⌋}`.
pub fn tangency_line(den: &Poly, u2: f64, tol: &Tolerances) -> Result<TangencyLine> {
    if den.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !den.is_monic() {
        return Err(Error::NotMonic(den.leading()));
    }
    let n = den.degree();
    if n < 3 {
        return Err(Error::Precondition(format!("tangency lines need degree >= 3, got {n}")));
    }
    if !(u2 > 0.0 && u2.is_finite()) {
        return Err(Error::Precondition(format!("u2 must be positive, got {u2}")));
    }
    let (lin, cst) = tangency_condition(den, u2);
    if lin.abs() <= tol.sign * (lin.abs() + cst.abs()) {
        return Err(Error::Precondition(format!("tangency condition does not depend on u1 at u2 = {u2}")));
    }
    let u1 = -cst / lin;
    let a1 = den.coeffs()[1];
    if !(u1 > 0.0) {
        return Err(Error::TangencySide(format!("u1 = {u1} is not positive")));
    }
    if (u1 - a1).abs() <= tol.tan * (1.0 + a1.abs()) {
        return Err(Error::TangencySide(format!("u1 = {u1} coincides with a1")));
    }
    let mut u = vec![u1, u2];
    for j in 3..n {
        u.push(sign((j - 1) / 2) * u1.powi((j % 2) as i32) * u2.powi((j / 2) as i32));
    }
    Ok(TangencyLine { u })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_intercepts() {
        let a = Poly::new(vec![1.0, 3.0, 3.0, 1.0]);
        // u1 u2 - 3 u2 - 3 u1 + 1 = 0
        assert_eq!(tangency_condition(&a, 4.0), (1.0, -11.0));
        let l = tangency_line(&a, 4.0, &Tolerances::default()).unwrap();
        assert_eq!(l.u, vec![11.0, 4.0]);
    }

    #[test]
    fn higher_intercepts() {
        let a = Poly::from_real_roots(&[-1.0; 6]);
        let l = tangency_line(&a, 2.0, &Tolerances::default()).unwrap();
        let (u1, u2) = (l.u[0], l.u[1]);
        assert_eq!(l.u[2], -u1 * u2);
        assert_eq!(l.u[3], -u2 * u2);
        assert_eq!(l.u[4], u1 * u2 * u2);
    }

    #[test]
    fn quartic_condition() {
        let a = Poly::new(vec![1.0, 2.0, 3.0, 4.0, 5.0]);
        let (u1, u2) = (0.7, 1.9);
        let (lin, cst) = tangency_condition(&a, u2);
        let closed = u1 * u2 * u2 - 2.0 * u2 * u2 - 3.0 * u1 * u2 + 4.0 * u2 + 5.0 * u1;
        assert!((lin * u1 + cst - closed).abs() < 1e-12);
    }
}
