use num_complex::Complex64;

use super::Poly;
use crate::error::{Error, Result};

/// `1 + max |c_i / c_lead|`: every root has modulus at most this.
pub fn cauchy_root_bound(p: &Poly) -> Result<f64> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let lead = p.leading();
    let m = p.coeffs()[1..]
        .iter()
        .fold(0.0f64, |m, c| m.max((c / lead).abs()));
    Ok(1.0 + m)
}

/// Lower bound on the modulus of every nonzero root,
/// `|c_0| / (|c_0| + max_{i>0} |c_i|)` with `c_0` the constant term.
/// Returns `None` when the constant term is zero.
pub fn cauchy_lower_bound(p: &Poly) -> Option<f64> {
    let c0 = p.constant_term().abs();
    if c0 == 0.0 {
        return None;
    }
    let n = p.coeffs().len();
    let m = p.coeffs()[..n - 1].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    Some(c0 / (c0 + m))
}

fn bisect(p: &Poly, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = p.eval(lo);
    if flo == 0.0 {
        return lo;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = p.eval(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// All real roots of `p` in `[lo, hi]`, sorted.
///
/// Works by recursion on the derivative: between consecutive critical
/// points `p` is monotone, so every sign change is bracketed and refined
/// by bisection. Critical points where `|p|` is at roundoff level relative
/// to `eval_abs` are reported as (even-multiplicity) roots.
pub fn real_roots_in(p: &Poly, lo: f64, hi: f64) -> Vec<f64> {
    if p.is_zero() || p.degree() == 0 || lo > hi {
        return Vec::new();
    }
    if p.degree() == 1 {
        let r = -p.coeffs()[1] / p.coeffs()[0];
        return if r >= lo && r <= hi { vec![r] } else { Vec::new() };
    }
    let crit = real_roots_in(&p.derivative(), lo, hi);
    let mut knots = Vec::with_capacity(crit.len() + 2);
    knots.push(lo);
    knots.extend(crit.iter().copied().filter(|&c| c > lo && c < hi));
    knots.push(hi);

    let touch = |x: f64| p.eval(x).abs() <= 64.0 * f64::EPSILON * p.eval_abs(x);
    let mut roots: Vec<f64> = Vec::new();
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (p.eval(a), p.eval(b));
        if fa == 0.0 {
            roots.push(a);
        } else if fb != 0.0 && (fa > 0.0) != (fb > 0.0) {
            roots.push(bisect(p, a, b));
        }
    }
    if p.eval(hi) == 0.0 {
        roots.push(hi);
    }
    for &c in &crit {
        if c > lo && c < hi && touch(c) {
            roots.push(c);
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + b.abs()));
    roots
}

/// Minimum of `p` over `[lo, hi]` with its location, from the endpoints and
/// the real roots of `p'`.
pub fn min_on_interval(p: &Poly, lo: f64, hi: f64) -> (f64, f64) {
    let mut best = (p.eval(lo), lo);
    let mut consider = |x: f64| {
        let v = p.eval(x);
        if v < best.0 {
            best = (v, x);
        }
    };
    consider(hi);
    for c in real_roots_in(&p.derivative(), lo, hi) {
        consider(c);
    }
    best
}

/// Maximum of `|p|` over `[lo, hi]` with its location.
pub fn max_abs_on_interval(p: &Poly, lo: f64, hi: f64) -> (f64, f64) {
    let mut best = (p.eval(lo).abs(), lo);
    let mut consider = |x: f64| {
        let v = p.eval(x).abs();
        if v > best.0 {
            best = (v, x);
        }
    };
    consider(hi);
    for c in real_roots_in(&p.derivative(), lo, hi) {
        consider(c);
    }
    best
}

/// Extremum of the rational function `num / den` on `[lo, hi]`, where `den`
/// has no root there. Critical points are the roots of
/// `num' den - num den'`. With `absolute`, the maximum of `|num/den|` is
/// returned; otherwise the minimum of `num/den`.
pub fn rational_extremum(num: &Poly, den: &Poly, lo: f64, hi: f64, absolute: bool) -> (f64, f64) {
    let f = |x: f64| {
        let v = num.eval(x) / den.eval(x);
        if absolute {
            v.abs()
        } else {
            v
        }
    };
    let better = |v: f64, best: f64| if absolute { v > best } else { v < best };
    let mut best = (f(lo), lo);
    let crit = &(&num.derivative() * den) - &(num * &den.derivative());
    let mut candidates = real_roots_in(&crit, lo, hi);
    candidates.push(hi);
    for x in candidates {
        let v = f(x);
        if better(v, best.0) {
            best = (v, x);
        }
    }
    best
}

/// All complex roots by the Aberth–Ehrlich iteration followed by a Newton
/// polish.
pub fn complex_roots(p: &Poly) -> Result<Vec<Complex64>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = p.degree();
    if n == 0 {
        return Ok(Vec::new());
    }
    let monic = p.monic()?;
    let dp = monic.derivative();
    let radius = cauchy_root_bound(&monic)?.min(1e12);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            Complex64::from_polar(0.5 * radius, theta)
        })
        .collect();
    let mut converged = false;
    for _ in 0..1000 {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let pv = monic.eval_complex(z[i]);
            let dv = dp.eval_complex(z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / dv;
            let sum: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        Complex64::new(1.0, 0.0) / d
                    }
                })
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if max_step < 1e-15 {
            converged = true;
            break;
        }
    }
    if !converged {
        // Accept if residuals are at roundoff level anyway.
        let ok = z.iter().all(|&r| {
            let scale: f64 = monic
                .coeffs()
                .iter()
                .fold(0.0, |acc, &c| acc * r.norm() + c.abs());
            monic.eval_complex(r).norm() <= 1e-8 * scale
        });
        if !ok {
            return Err(Error::NoConvergence(format!("Aberth iteration on degree {n}")));
        }
    }
    for r in z.iter_mut() {
        for _ in 0..3 {
            let dv = dp.eval_complex(*r);
            if dv.norm() == 0.0 {
                break;
            }
            let step = monic.eval_complex(*r) / dv;
            if step.is_finite() && step.norm() < 1e-3 * (1.0 + r.norm()) {
                *r -= step;
            }
        }
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cauchy_examples() {
        assert_eq!(cauchy_root_bound(&Poly::new(vec![1.0, 0.0, -4.0])).unwrap(), 5.0);
        assert_eq!(cauchy_root_bound(&Poly::new(vec![1.0, 0.0, 0.0])).unwrap(), 1.0);
        assert_eq!(cauchy_root_bound(&Poly::new(vec![2.0, 0.0, -8.0])).unwrap(), 5.0);
    }

    #[test]
    fn isolates_simple_and_double_roots() {
        let p = Poly::from_real_roots(&[1.0, 2.0, 3.0]);
        let r = real_roots_in(&p, 0.0, 10.0);
        assert_eq!(r.len(), 3);
        for (x, y) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((x - y).abs() < 1e-12);
        }
        let sq = Poly::from_real_roots(&[1.0, 1.0]);
        let r = real_roots_in(&sq, 0.0, 5.0);
        assert_eq!(r.len(), 1);
        assert!((r[0] - 1.0).abs() < 1e-7);
    }

    #[test]
    fn extremum_search() {
        let p = Poly::new(vec![1.0, -2.0, 3.0]); // (t-1)^2 + 2
        let (v, x) = min_on_interval(&p, 0.0, 4.0);
        assert!((v - 2.0).abs() < 1e-14 && (x - 1.0).abs() < 1e-12);
        let (v, _) = max_abs_on_interval(&p, 0.0, 4.0);
        assert_eq!(v, 11.0);
        // (t + 2) / (t + 1) decreases on [0, 9].
        let (v, x) = rational_extremum(&Poly::new(vec![1.0, 2.0]), &Poly::new(vec![1.0, 1.0]), 0.0, 9.0, false);
        assert!((v - 1.1).abs() < 1e-14 && x == 9.0);
    }

    #[test]
    fn complex_roots_of_cubic() {
        let p = Poly::new(vec![1.0, 1.0, 1.0, 1.0]); // (s+1)(s^2+1)
        let mut r = complex_roots(&p).unwrap();
        r.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((r[0] - Complex64::new(0.0, -1.0)).norm() < 1e-12);
        assert!((r[1] - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        assert!((r[2] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }
}
