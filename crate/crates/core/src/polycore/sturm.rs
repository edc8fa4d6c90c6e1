//! Sturm-sequence positivity certificates.
//!
//! The chain is first built in `f64` with scaled remainders. When a sign
//! that the root count depends on is within the cancellation tolerance of
//! zero, the whole computation is redone in exact rational arithmetic on
//! the (exactly representable) `f64` coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::roots::{cauchy_root_bound, min_on_interval};
use super::Poly;
use crate::config::Tolerances;
use crate::error::{Error, Result};

/// Where positivity is required.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Domain {
    /// `[0, inf)`
    ClosedHalfLine,
    /// `(0, inf)`
    OpenHalfLine,
    /// `[lo, hi]`
    Interval { lo: f64, hi: f64 },
}

/// Machine-checkable proof (or refutation) that a polynomial is positive
/// on a domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositivityProof {
    pub target: Poly,
    pub domain: Domain,
    /// Power of `t` divided out of `target` before the chain was built
    /// (open half-line only); `sturm_chain[0] = target / t^zero_order`.
    pub zero_order: usize,
    pub sturm_chain: Vec<Poly>,
    /// Sign changes of the chain at the lower and upper end of the domain.
    pub sign_counts: [usize; 2],
    pub roots_in_domain: usize,
    pub verdict: bool,
    /// A point of the domain where the target is (numerically) nonpositive.
    pub witness: Option<f64>,
    /// Whether the exact rational pass decided the count.
    pub exact: bool,
}

impl PositivityProof {
    /// Re-derives the root count from the stored chain alone.
    pub fn recheck(&self) -> bool {
        let (lo, hi) = match self.domain {
            Domain::ClosedHalfLine | Domain::OpenHalfLine => (Point::Finite(0.0), Point::PosInf),
            Domain::Interval { lo, hi } => (Point::Finite(lo), Point::Finite(hi)),
        };
        let Some(base) = self.sturm_chain.first() else {
            return false;
        };
        if base.degree() == 0 {
            return self.verdict == (base.leading() > 0.0);
        }
        let low_ok = match lo {
            Point::Finite(x) => base.eval(x) > 0.0 || (self.domain == Domain::OpenHalfLine && base.eval(x) >= 0.0),
            Point::PosInf => true,
        };
        let high_ok = match hi {
            Point::Finite(x) => base.eval(x) > 0.0,
            Point::PosInf => base.leading() > 0.0,
        };
        let count = changes_f64(&self.sturm_chain, lo).0 as isize - changes_f64(&self.sturm_chain, hi).0 as isize;
        self.verdict == (low_ok && high_ok && count == 0)
    }
}

#[derive(Clone, Copy, Debug)]
enum Point {
    Finite(f64),
    PosInf,
}

fn sign(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

fn count_changes(signs: impl IntoIterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut n = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

/// Sign changes at `at`, plus a flag raised when a value that the count
/// depends on sits inside the cancellation band.
fn changes_f64(chain: &[Poly], at: Point) -> (usize, Vec<(f64, f64)>) {
    let vals: Vec<(f64, f64)> = chain
        .iter()
        .map(|p| match at {
            Point::Finite(x) => (p.eval(x), p.eval_abs(x)),
            Point::PosInf => (p.leading(), p.leading().abs()),
        })
        .collect();
    (count_changes(vals.iter().map(|v| sign(v.0))), vals)
}

fn ambiguous(vals: &[(f64, f64)], rel: f64) -> bool {
    let small: Vec<bool> = vals.iter().map(|&(v, s)| v.abs() <= rel * s).collect();
    // A near-zero interior entry is harmless: its neighbours have opposite
    // signs there. The first and last entries and consecutive pairs are not.
    small[0] || *small.last().unwrap() || small.windows(2).any(|w| w[0] && w[1])
}

/// Scaled `f64` Sturm chain. Returns the chain and whether the remainder
/// sequence hit a leading coefficient inside the ambiguity band.
pub fn sturm_chain(p: &Poly, tol: &Tolerances) -> (Vec<Poly>, bool) {
    let mut chain = vec![p.clone()];
    let mut ambiguous = false;
    if p.degree() == 0 {
        return (chain, false);
    }
    chain.push(p.derivative());
    loop {
        let k = chain.len() - 1;
        if chain[k].degree() == 0 {
            break;
        }
        let (q, r) = match chain[k - 1].div_rem(&chain[k]) {
            Ok(qr) => qr,
            Err(_) => break,
        };
        let scale = chain[k - 1].norm_inf() + q.norm_inf() * chain[k].norm_inf();
        let noise = 1e3 * f64::EPSILON * scale;
        let cleaned: Vec<f64> = r.coeffs().iter().map(|&c| if c.abs() <= noise { 0.0 } else { c }).collect();
        // Noise decided the degree of the remainder (or that the chain
        // ends at a common factor): not trustworthy.
        if !r.is_zero() && cleaned[0] == 0.0 {
            ambiguous = true;
        }
        let r = Poly::new(cleaned);
        if r.is_zero() {
            break;
        }
        if r.leading().abs() <= tol.sign * scale {
            ambiguous = true;
        }
        let next = r.scale(-1.0 / r.norm_inf());
        chain.push(next);
    }
    (chain, ambiguous)
}

fn to_rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite coefficient")
}

type RPoly = Vec<BigRational>; // descending

fn rpoly(p: &Poly) -> RPoly {
    p.coeffs().iter().map(|&c| to_rational(c)).collect()
}

fn rtrim(mut p: RPoly) -> RPoly {
    let lead = p.iter().position(|c| !c.is_zero()).unwrap_or(p.len());
    p.drain(..lead);
    p
}

fn rderive(p: &RPoly) -> RPoly {
    let d = p.len().saturating_sub(1);
    rtrim(
        p[..d]
            .iter()
            .enumerate()
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(d - i)))
            .collect(),
    )
}

fn rrem(a: &RPoly, b: &RPoly) -> RPoly {
    let mut rem = a.clone();
    if a.len() < b.len() {
        return rem;
    }
    let qlen = a.len() - b.len() + 1;
    for i in 0..qlen {
        if rem[i].is_zero() {
            continue;
        }
        let f = &rem[i] / &b[0];
        for (j, d) in b.iter().enumerate() {
            let t = &f * d;
            rem[i + j] -= t;
        }
    }
    rtrim(rem[qlen..].to_vec())
}

fn reval(p: &RPoly, x: &BigRational) -> BigRational {
    p.iter().fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn rsign(v: &BigRational) -> i8 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Exact sign of `p(x)` for a floating-point argument.
pub(crate) fn exact_sign_at(p: &Poly, x: f64) -> i8 {
    rsign(&reval(&rpoly(p), &to_rational(x)))
}

/// Exact chain for `p`, remainders scaled by `1/|lead|`.
fn exact_chain(p: &Poly) -> Vec<RPoly> {
    let mut chain = vec![rpoly(p)];
    if p.degree() == 0 {
        return chain;
    }
    chain.push(rderive(&chain[0]));
    loop {
        let k = chain.len() - 1;
        if chain[k].len() <= 1 {
            break;
        }
        let r = rrem(&chain[k - 1], &chain[k]);
        if r.is_empty() {
            break;
        }
        let lead = r[0].abs();
        chain.push(r.iter().map(|c| -(c / &lead)).collect());
    }
    chain
}

fn exact_changes(chain: &[RPoly], at: Point) -> usize {
    match at {
        Point::Finite(x) => {
            let xr = to_rational(x);
            count_changes(chain.iter().map(|p| rsign(&reval(p, &xr))))
        }
        Point::PosInf => count_changes(chain.iter().map(|p| rsign(&p[0]))),
    }
}

fn to_f64_poly(p: &RPoly) -> Poly {
    Poly::new(p.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect())
}

/// Root count of `base` in `(lo, hi]`, escalating to exact arithmetic when
/// the floating chain is ambiguous.
fn count_roots(base: &Poly, lo: Point, hi: Point, tol: &Tolerances) -> (Vec<Poly>, [usize; 2], bool) {
    let (chain, chain_ambiguous) = sturm_chain(base, tol);
    let (vlo, vals_lo) = changes_f64(&chain, lo);
    let (vhi, vals_hi) = changes_f64(&chain, hi);
    let amb = chain_ambiguous || ambiguous(&vals_lo, tol.sign) || ambiguous(&vals_hi, tol.sign);
    if !amb && vlo >= vhi {
        return (chain, [vlo, vhi], false);
    }
    let exact = exact_chain(base);
    let counts = [exact_changes(&exact, lo), exact_changes(&exact, hi)];
    (exact.iter().map(to_f64_poly).collect(), counts, true)
}

fn sign_at_exact(p: &Poly, x: f64) -> i8 {
    rsign(&reval(&rpoly(p), &to_rational(x)))
}

/// Certifies `g(t) > 0` on `[0, inf)` (`strict_at_zero`) or on `(0, inf)`.
pub fn positive_on_halfline(g: &Poly, strict_at_zero: bool, tol: &Tolerances) -> Result<PositivityProof> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let domain = if strict_at_zero { Domain::ClosedHalfLine } else { Domain::OpenHalfLine };
    let (base, zero_order) = if strict_at_zero { (g.clone(), 0) } else { g.strip_zero_roots() };
    let mut proof = PositivityProof {
        target: g.clone(),
        domain,
        zero_order,
        sturm_chain: vec![base.clone()],
        sign_counts: [0, 0],
        roots_in_domain: 0,
        verdict: false,
        witness: None,
        exact: false,
    };
    let far = 2.0 * cauchy_root_bound(&base)?;

    let at_zero = base.constant_term();
    if at_zero <= 0.0 {
        proof.witness = Some(0.0);
        return Ok(proof);
    }
    if base.leading() < 0.0 {
        proof.witness = Some(far);
        return Ok(proof);
    }
    if base.degree() == 0 {
        proof.verdict = true;
        return Ok(proof);
    }
    let (chain, counts, exact) = count_roots(&base, Point::Finite(0.0), Point::PosInf, tol);
    proof.sturm_chain = chain;
    proof.sign_counts = counts;
    proof.exact = exact;
    proof.roots_in_domain = counts[0].saturating_sub(counts[1]);
    proof.verdict = proof.roots_in_domain == 0;
    if !proof.verdict {
        proof.witness = Some(min_on_interval(g, 0.0, far).1);
    }
    Ok(proof)
}

/// Certifies `p > 0` on the closed interval `[lo, hi]`.
pub fn positive_on_interval(p: &Poly, lo: f64, hi: f64, tol: &Tolerances) -> Result<PositivityProof> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !(lo <= hi) {
        return Err(Error::Precondition(format!("empty interval [{lo}, {hi}]")));
    }
    let mut proof = PositivityProof {
        target: p.clone(),
        domain: Domain::Interval { lo, hi },
        zero_order: 0,
        sturm_chain: vec![p.clone()],
        sign_counts: [0, 0],
        roots_in_domain: 0,
        verdict: false,
        witness: None,
        exact: false,
    };
    for x in [lo, hi] {
        let v = p.eval(x);
        let s = if v.abs() <= tol.sign * p.eval_abs(x) { sign_at_exact(p, x) } else { sign(v) };
        if s <= 0 {
            proof.witness = Some(x);
            return Ok(proof);
        }
    }
    if p.degree() == 0 {
        proof.verdict = true;
        return Ok(proof);
    }
    let (chain, counts, exact) = count_roots(p, Point::Finite(lo), Point::Finite(hi), tol);
    proof.sturm_chain = chain;
    proof.sign_counts = counts;
    proof.exact = exact;
    proof.roots_in_domain = counts[0].saturating_sub(counts[1]);
    proof.verdict = proof.roots_in_domain == 0;
    if !proof.verdict {
        proof.witness = Some(min_on_interval(p, lo, hi).1);
    }
    Ok(proof)
}
