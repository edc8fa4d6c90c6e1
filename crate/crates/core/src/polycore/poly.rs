use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense real polynomial, coefficients in descending powers.
///
/// `coeffs[0]` is the leading coefficient. The zero polynomial has no
/// coefficients at all, which keeps it distinguishable from the constant
/// polynomials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "Vec<f64>", from = "Vec<f64>")]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl From<Vec<f64>> for Poly {
    fn from(coeffs: Vec<f64>) -> Self {
        Poly::new(coeffs)
    }
}

impl From<Poly> for Vec<f64> {
    fn from(p: Poly) -> Self {
        p.coeffs
    }
}

impl From<&[f64]> for Poly {
    fn from(coeffs: &[f64]) -> Self {
        Poly::new(coeffs.to_vec())
    }
}

/// Binary and unary arithmetic selectable at run time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    /// `p * k`; the second operand is ignored.
    Scale(f64),
    /// `dp/ds`; the second operand is ignored.
    Derive,
    /// `p(alpha * s + beta)`; the second operand is ignored.
    ComposeAffine { alpha: f64, beta: f64 },
}

/// Dispatches one of the elementary operations, rejecting zero operands
/// where the operation needs a nonzero one.
pub fn poly_arith(p: &Poly, q: &Poly, op: ArithOp) -> Result<Poly> {
    match op {
        ArithOp::Add => Ok(p + q),
        ArithOp::Sub => Ok(p - q),
        ArithOp::Mul => {
            if p.is_zero() || q.is_zero() {
                return Err(Error::ZeroPolynomial);
            }
            Ok(p * q)
        }
        ArithOp::Scale(k) => Ok(p.scale(k)),
        ArithOp::Derive => {
            if p.is_zero() {
                return Err(Error::ZeroPolynomial);
            }
            Ok(p.derivative())
        }
        ArithOp::ComposeAffine { alpha, beta } => {
            if p.is_zero() {
                return Err(Error::ZeroPolynomial);
            }
            Ok(p.compose_affine(alpha, beta))
        }
    }
}

impl Poly {
    /// Builds a polynomial from descending coefficients, dropping exact
    /// leading zeros.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        let lead = coeffs.iter().position(|&c| c != 0.0).unwrap_or(coeffs.len());
        coeffs.drain(..lead);
        Poly { coeffs }
    }

    /// Validates finiteness and strips leading coefficients that are
    /// negligible relative to the largest one.
    pub fn normalized(coeffs: &[f64], strip: f64) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let lead = coeffs
            .iter()
            .position(|&c| c.abs() > strip * scale)
            .unwrap_or(coeffs.len());
        Ok(Poly::new(coeffs[lead..].to_vec()))
    }

    pub fn from_ascending(mut asc: Vec<f64>) -> Self {
        asc.reverse();
        Poly::new(asc)
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Poly::new(vec![c])
    }

    /// `c * s^degree`
    pub fn monomial(degree: usize, c: f64) -> Self {
        let mut coeffs = vec![0.0; degree + 1];
        coeffs[0] = c;
        Poly::new(coeffs)
    }

    /// Monic polynomial with the given real roots.
    pub fn from_real_roots(roots: &[f64]) -> Self {
        roots
            .iter()
            .fold(Poly::constant(1.0), |acc, &r| &acc * &Poly::new(vec![1.0, -r]))
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn ascending(&self) -> Vec<f64> {
        self.coeffs.iter().rev().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.first().copied().unwrap_or(0.0)
    }

    /// Coefficient of `s^power` (zero when out of range).
    pub fn coeff(&self, power: usize) -> f64 {
        if self.is_zero() || power > self.degree() {
            0.0
        } else {
            self.coeffs[self.degree() - power]
        }
    }

    pub fn constant_term(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()))
    }

    pub fn norm_1(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1.0
    }

    pub fn monic(&self) -> Result<Poly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        // Divide rather than multiply by the reciprocal, and pin the
        // leading coefficient: `x * (1/x)` is not always exactly one.
        let lead = self.leading();
        let mut coeffs: Vec<f64> = self.coeffs.iter().map(|c| c / lead).collect();
        coeffs[0] = 1.0;
        Ok(Poly::new(coeffs))
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Sum of `|c_i| |x|^i`, the natural scale for roundoff in `eval(x)`.
    pub fn eval_abs(&self, x: f64) -> f64 {
        let ax = x.abs();
        self.coeffs.iter().fold(0.0, |acc, &c| acc * ax + c.abs())
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Splits `p(s) = E(s^2) + s O(s^2)`.
    pub fn even_odd(&self) -> (Poly, Poly) {
        let asc = self.ascending();
        let even: Vec<f64> = asc.iter().step_by(2).copied().collect();
        let odd: Vec<f64> = asc.iter().skip(1).step_by(2).copied().collect();
        (Poly::from_ascending(even), Poly::from_ascending(odd))
    }

    /// `p(j omega)`, assembled from the even/odd split so that
    /// `p(-j omega)` is the exact conjugate.
    pub fn eval_at_jomega(&self, omega: f64) -> Complex64 {
        let (even, odd) = self.even_odd();
        let w2 = -(omega * omega);
        Complex64::new(even.eval(w2), omega * odd.eval(w2))
    }

    /// `p(-t)`
    pub fn reflect(&self) -> Poly {
        let d = self.degree();
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| if (d - i) % 2 == 1 { -c } else { c })
                .collect(),
        )
    }

    pub fn scale(&self, k: f64) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn derivative(&self) -> Poly {
        let d = self.degree();
        Poly::new(
            self.coeffs[..d]
                .iter()
                .enumerate()
                .map(|(i, &c)| c * (d - i) as f64)
                .collect(),
        )
    }

    /// `p(alpha s + beta)` by Horner in the polynomial ring.
    pub fn compose_affine(&self, alpha: f64, beta: f64) -> Poly {
        let inner = Poly::new(vec![alpha, beta]);
        self.coeffs
            .iter()
            .fold(Poly::zero(), |acc, &c| &(&acc * &inner) + &Poly::constant(c))
    }

    /// `s^n p(1/s)` with `n = degree`.
    pub fn reversed(&self) -> Poly {
        Poly::from_ascending(self.coeffs.clone())
    }

    /// Removes a factor `s^m` and returns `(p / s^m, m)`.
    pub fn strip_zero_roots(&self) -> (Poly, usize) {
        let m = self.coeffs.iter().rev().take_while(|&&c| c == 0.0).count();
        let keep = self.coeffs.len() - m;
        (Poly::new(self.coeffs[..keep].to_vec()), m)
    }

    /// Euclidean division. Fails on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        if divisor.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.degree() < divisor.degree() || self.is_zero() {
            return Ok((Poly::zero(), self.clone()));
        }
        let dd = divisor.degree();
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let qlen = self.degree() - dd + 1;
        let mut quot = vec![0.0; qlen];
        for i in 0..qlen {
            let f = rem[i] / lead;
            quot[i] = f;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= f * d;
            }
            rem[i] = 0.0;
        }
        Ok((Poly::new(quot), Poly::new(rem[qlen..].to_vec())))
    }

    /// Real coefficients of `p` shifted to `c * p(s)`, positive leading term.
    pub fn with_positive_leading(&self) -> Poly {
        if self.leading() < 0.0 {
            -self
        } else {
            self.clone()
        }
    }
}

fn add_aligned(p: &[f64], q: &[f64], sign: f64) -> Vec<f64> {
    let n = p.len().max(q.len());
    let mut out = vec![0.0; n];
    for (i, &c) in p.iter().enumerate() {
        out[n - p.len() + i] += c;
    }
    for (i, &c) in q.iter().enumerate() {
        out[n - q.len() + i] += sign * c;
    }
    out
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        Poly::new(add_aligned(&self.coeffs, &rhs.coeffs, 1.0))
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        Poly::new(add_aligned(&self.coeffs, &rhs.coeffs, -1.0))
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(-1.0)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| format!("{c}")).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}
