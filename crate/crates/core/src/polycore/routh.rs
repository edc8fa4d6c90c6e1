use serde::{Deserialize, Serialize};

use super::Poly;
use crate::config::Tolerances;
use crate::error::{Error, Result};

/// Outcome of the Routh array construction, kept as a certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RouthTable {
    pub hurwitz: bool,
    pub rows: Vec<Vec<f64>>,
    /// First row whose pivot vanished (or which vanished entirely).
    pub failure_row: Option<usize>,
    /// Set when the whole failing row was zero, i.e. a marginal
    /// (imaginary-axis symmetric) root pair.
    pub marginal: bool,
}

impl RouthTable {
    pub fn first_column(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r[0]).collect()
    }
}

/// `(p1 * q0 - p0 * q1) / p1` with a cancellation guard: when the
/// difference is lost in roundoff relative to the terms it came from it is
/// reported as an exact zero.
fn routh_entry(p0: f64, p1: f64, q0: f64, q1: f64, sign_tol: f64) -> f64 {
    let lhs = p1 * q0;
    let rhs = p0 * q1;
    let diff = lhs - rhs;
    if diff.abs() <= sign_tol * (lhs.abs() + rhs.abs()) {
        0.0
    } else {
        diff / p1
    }
}

/// Builds the Routh array of `p` and decides strict Hurwitz stability.
///
/// The sign of `p` is normalised first. A zero pivot in an otherwise
/// nonzero row is replaced by a small positive epsilon so the table can be
/// completed; an all-zero row is replaced by the derivative of the
/// auxiliary polynomial. Either event makes the verdict negative.
pub fn routh_hurwitz(p: &Poly, tol: &Tolerances) -> Result<RouthTable> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let p = p.with_positive_leading();
    let n = p.degree();
    let c = p.coeffs();
    let width = n / 2 + 1;
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    let take = |offset: usize| -> Vec<f64> {
        let mut r: Vec<f64> = c.iter().skip(offset).step_by(2).copied().collect();
        r.resize(width, 0.0);
        r
    };
    rows.push(take(0));
    if n == 0 {
        return Ok(RouthTable { hurwitz: true, rows, failure_row: None, marginal: false });
    }
    rows.push(take(1));

    let scale = p.norm_inf();
    let eps = tol.stab * scale;
    let mut failure_row = None;
    let mut marginal = false;

    // Row 1 can already be degenerate, e.g. s^2 + 1.
    let check_row = |rows: &mut Vec<Vec<f64>>, i: usize, failure: &mut Option<usize>, marginal: &mut bool| {
        if rows[i][0] != 0.0 {
            return;
        }
        failure.get_or_insert(i);
        if rows[i].iter().all(|&v| v == 0.0) {
            *marginal = true;
            // Auxiliary polynomial from the previous row, degree n - i + 1,
            // only even (or odd) powers present with step 2.
            let order = n + 1 - i;
            let prev = rows[i - 1].clone();
            for (j, slot) in rows[i].iter_mut().enumerate() {
                let power = order as isize - 2 * j as isize;
                if power > 0 {
                    *slot = prev[j] * power as f64;
                }
            }
            if rows[i][0] == 0.0 {
                rows[i][0] = eps;
            }
        } else {
            rows[i][0] = eps;
        }
    };

    check_row(&mut rows, 1, &mut failure_row, &mut marginal);
    for i in 2..=n {
        let (above2, above1) = (&rows[i - 2], &rows[i - 1]);
        let mut row = vec![0.0; width];
        for j in 0..width - 1 {
            row[j] = routh_entry(above2[0], above1[0], above2[j + 1], above1[j + 1], tol.sign);
        }
        rows.push(row);
        check_row(&mut rows, i, &mut failure_row, &mut marginal);
    }

    let positive = rows.iter().all(|r| r[0] > 0.0);
    if failure_row.is_none() && !positive {
        failure_row = rows.iter().position(|r| r[0] <= 0.0);
    }
    Ok(RouthTable { hurwitz: positive && failure_row.is_none(), rows, failure_row, marginal })
}

pub fn is_hurwitz(p: &Poly, tol: &Tolerances) -> Result<bool> {
    Ok(routh_hurwitz(p, tol)?.hurwitz)
}
