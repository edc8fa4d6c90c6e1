//! The ellipse family in numerator-coefficient space.
//!
//! For a monic Hurwitz `den` of degree `n` and a numerator
//! `s^{n-1} + x_1 s^{n-2} + ... + x_{n-1}`, each real-part coefficient
//! `c_l(x)` is affine in `x`. For `k = 1..=n-2`, fixing `c_l = 0` for the
//! `n - 3` indices outside `{k, k+1, k+2}` leaves a 2-plane, on which the
//! discriminant `c_{k+1}^2 - 4 c_k c_{k+2}` is a quadratic whose negative
//! set is an ellipse interior.

use nalgebra::{DMatrix, DVector, Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::polycore::{routh_hurwitz, Poly};
use crate::sprcheck::cl_affine;

/// `constant + linear · x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineForm {
    pub constant: f64,
    pub linear: Vec<f64>,
}

impl AffineForm {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.constant + self.linear.iter().zip(x).map(|(a, b)| a * b).sum::<f64>()
    }
}

/// Quadratic `constant + linear · x + x^T quadratic x` in full coordinates
/// (`quadratic` is symmetric).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadraticForm {
    pub constant: f64,
    pub linear: Vec<f64>,
    pub quadratic: Vec<Vec<f64>>,
}

impl QuadraticForm {
    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut v = self.constant;
        for (i, xi) in x.iter().enumerate() {
            v += self.linear[i] * xi;
            for (j, xj) in x.iter().enumerate() {
                v += self.quadratic[i][j] * xi * xj;
            }
        }
        v
    }
}

/// One ellipse of the family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EllipseSpec {
    /// 1-based index `k` in `1..=n-2`.
    pub k: usize,
    /// `(l, c_l)` for every `l ∉ {k, k+1, k+2}`; the plane is `c_l = 0`.
    pub plane_constraints: Vec<(usize, AffineForm)>,
    /// `c_k, c_{k+1}, c_{k+2}` in full coordinates.
    pub active: [AffineForm; 3],
    /// `c_{k+1}^2 - 4 c_k c_{k+2}` in full coordinates.
    pub quadratic_form: QuadraticForm,
    pub denominator: Poly,
    /// A point of the plane.
    pub origin: Vec<f64>,
    /// Orthonormal basis of the plane directions (two vectors).
    pub basis: [Vec<f64>; 2],
    /// Restricted quadratic `y^T A y + 2 b^T y + q0` in plane coordinates.
    pub plane_a: [[f64; 2]; 2],
    pub plane_b: [f64; 2],
    pub plane_q0: f64,
}

fn affine(den: &Poly, l: usize) -> AffineForm {
    let (constant, linear) = cl_affine(den, l);
    AffineForm { constant, linear }
}

fn product_form(p: &AffineForm, q: &AffineForm, scale: f64) -> QuadraticForm {
    let m = p.linear.len();
    let mut linear = vec![0.0; m];
    let mut quadratic = vec![vec![0.0; m]; m];
    for i in 0..m {
        linear[i] = scale * (p.constant * q.linear[i] + q.constant * p.linear[i]);
        for j in 0..m {
            quadratic[i][j] = 0.5 * scale * (p.linear[i] * q.linear[j] + p.linear[j] * q.linear[i]);
        }
    }
    QuadraticForm { constant: scale * p.constant * q.constant, linear, quadratic }
}

fn add_forms(p: QuadraticForm, q: QuadraticForm) -> QuadraticForm {
    QuadraticForm {
        constant: p.constant + q.constant,
        linear: p.linear.iter().zip(&q.linear).map(|(a, b)| a + b).collect(),
        quadratic: p
            .quadratic
            .iter()
            .zip(&q.quadratic)
            .map(|(r, s)| r.iter().zip(s).map(|(a, b)| a + b).collect())
            .collect(),
    }
}

/// Affine form restricted to the plane: `(constant, [coef of y1, y2])`.
fn restrict(form: &AffineForm, origin: &[f64], basis: &[Vec<f64>; 2]) -> (f64, Vector2<f64>) {
    let dot = |v: &[f64]| form.linear.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
    (form.eval(origin), Vector2::new(dot(&basis[0]), dot(&basis[1])))
}

impl EllipseSpec {
    pub fn dimension(&self) -> usize {
        self.origin.len()
    }

    pub fn to_full(&self, y: Vector2<f64>) -> Vec<f64> {
        (0..self.dimension())
            .map(|i| self.origin[i] + y[0] * self.basis[0][i] + y[1] * self.basis[1][i])
            .collect()
    }

    fn a(&self) -> Matrix2<f64> {
        Matrix2::new(self.plane_a[0][0], self.plane_a[0][1], self.plane_a[1][0], self.plane_a[1][1])
    }

    fn b(&self) -> Vector2<f64> {
        Vector2::new(self.plane_b[0], self.plane_b[1])
    }

    /// Restricted quadratic at plane coordinates `y`.
    pub fn plane_value(&self, y: Vector2<f64>) -> f64 {
        (y.transpose() * self.a() * y)[0] + 2.0 * self.b().dot(&y) + self.plane_q0
    }

    /// Conic discriminant of the restricted quadratic, `A12^2 - A11 A22`;
    /// negative for an ellipse.
    pub fn conic_discriminant(&self) -> f64 {
        self.plane_a[0][1] * self.plane_a[1][0] - self.plane_a[0][0] * self.plane_a[1][1]
    }

    pub fn is_bounded(&self) -> bool {
        self.conic_discriminant() < 0.0 && self.plane_a[0][0] > 0.0
    }

    /// Stationary point of the restricted quadratic, in plane coordinates.
    pub fn center_plane(&self) -> Result<Vector2<f64>> {
        if !self.is_bounded() {
            return Err(Error::DegenerateConic(format!("ellipse k = {} is not bounded", self.k)));
        }
        let inv = self
            .a()
            .try_inverse()
            .ok_or_else(|| Error::DegenerateConic(format!("ellipse k = {} has a singular form", self.k)))?;
        let yc = -(inv * self.b());
        if !(self.plane_value(yc) < 0.0) {
            return Err(Error::DegenerateConic(format!("ellipse k = {} has an empty interior", self.k)));
        }
        Ok(yc)
    }

    /// `count` boundary points, evenly spaced in the ellipse's own angle.
    pub fn boundary_samples(&self, count: usize) -> Result<Vec<Vec<f64>>> {
        let yc = self.center_plane()?;
        let r2 = -self.plane_value(yc);
        let eig = nalgebra::SymmetricEigen::new(self.a());
        let mut out = Vec::with_capacity(count);
        for i in 0..count {
            let theta = 2.0 * std::f64::consts::PI * i as f64 / count as f64;
            let u = Vector2::new(theta.cos(), theta.sin());
            // A^{-1/2} u scaled to the level set
            let mut v = Vector2::zeros();
            for j in 0..2 {
                let e = eig.eigenvectors.column(j);
                v += e * (e.dot(&u) / eig.eigenvalues[j].sqrt());
            }
            out.push(self.to_full(yc + v * r2.sqrt()));
        }
        Ok(out)
    }

    /// Relative discriminant of the quadratic along the line obtained by
    /// adding `c_k = 0` (`upper = false`) or `c_{k+2} = 0` (`upper = true`)
    /// to the plane. Zero means the line touches the conic.
    pub fn tangency_residual(&self, upper: bool) -> f64 {
        let form = &self.active[if upper { 2 } else { 0 }];
        let (c0, g) = restrict(form, &self.origin, &self.basis);
        if g.norm() == 0.0 {
            return f64::INFINITY;
        }
        let dir = Vector2::new(-g[1], g[0]) / g.norm();
        let y0 = -g * (c0 / g.norm_squared());
        let a = (dir.transpose() * self.a() * dir)[0];
        let b = 2.0 * ((self.a() * y0).dot(&dir) + self.b().dot(&dir));
        let c = self.plane_value(y0);
        let disc = b * b - 4.0 * a * c;
        disc.abs() / (b * b + (4.0 * a * c).abs()).max(f64::MIN_POSITIVE)
    }

    /// Range of a linear functional `w · x` over the closed ellipse.
    pub fn linear_range(&self, w: &[f64]) -> Result<(f64, f64)> {
        let yc = self.center_plane()?;
        let r2 = -self.plane_value(yc);
        let g = Vector2::new(
            w.iter().zip(&self.basis[0]).map(|(a, b)| a * b).sum::<f64>(),
            w.iter().zip(&self.basis[1]).map(|(a, b)| a * b).sum::<f64>(),
        );
        let inv = self.a().try_inverse().ok_or_else(|| Error::DegenerateConic("singular".into()))?;
        let half = (r2 * (g.transpose() * inv * g)[0]).sqrt();
        let mid: f64 = w.iter().zip(self.to_full(yc)).map(|(a, b)| a * b).sum();
        Ok((mid - half, mid + half))
    }
}

/// Builds the `n - 2` ellipses of a monic Hurwitz denominator.
pub fn build_ellipses(den: &Poly, tol: &Tolerances) -> Result<Vec<EllipseSpec>> {
    if den.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !den.is_monic() {
        return Err(Error::NotMonic(den.leading()));
    }
    let n = den.degree();
    if n < 3 {
        return Err(Error::Precondition(format!("the ellipse family needs degree >= 3, got {n}")));
    }
    if !routh_hurwitz(den, tol)?.hurwitz {
        return Err(Error::NotHurwitz(format!("{den}")));
    }
    let m = n - 1;
    let forms: Vec<AffineForm> = (1..=n).map(|l| affine(den, l)).collect();
    let mut out = Vec::with_capacity(n - 2);
    for k in 1..=n - 2 {
        let plane: Vec<(usize, AffineForm)> = (1..=n)
            .filter(|l| !(k..=k + 2).contains(l))
            .map(|l| (l, forms[l - 1].clone()))
            .collect();
        let (origin, basis) = if plane.is_empty() {
            (vec![0.0; m], [vec![1.0, 0.0], vec![0.0, 1.0]])
        } else {
            let rows = plane.len();
            let c = DMatrix::from_fn(rows, m, |i, j| plane[i].1.linear[j]);
            let rhs = DVector::from_fn(rows, |i, _| -plane[i].1.constant);
            // Padding to a square matrix gives the full right singular basis.
            let mut padded = DMatrix::zeros(m, m);
            padded.rows_mut(0, rows).copy_from(&c);
            let svd = padded.clone().svd(true, true);
            let v_t = svd.v_t.as_ref().ok_or_else(|| Error::Internal("SVD without V".into()))?;
            let mut order: Vec<usize> = (0..m).collect();
            order.sort_by(|&i, &j| svd.singular_values[j].partial_cmp(&svd.singular_values[i]).unwrap());
            let smax = svd.singular_values[order[0]];
            if svd.singular_values[order[rows - 1]] <= 1e-12 * smax {
                return Err(Error::DegenerateConic(format!("plane constraints of ellipse k = {k} are dependent")));
            }
            let basis = [
                v_t.row(order[m - 2]).iter().copied().collect::<Vec<_>>(),
                v_t.row(order[m - 1]).iter().copied().collect::<Vec<_>>(),
            ];
            let origin = c
                .clone()
                .svd(true, true)
                .solve(&rhs, 1e-14 * smax)
                .map_err(|e| Error::Internal(e.to_string()))?;
            (origin.iter().copied().collect(), basis)
        };
        let active = [forms[k - 1].clone(), forms[k].clone(), forms[k + 1].clone()];
        let quadratic_form = add_forms(
            product_form(&active[1], &active[1], 1.0),
            product_form(&active[0], &active[2], -4.0),
        );
        let r: Vec<(f64, Vector2<f64>)> = active.iter().map(|f| restrict(f, &origin, &basis)).collect();
        let (ak, gk) = r[0];
        let (am, gm) = r[1];
        let (ap, gp) = r[2];
        let a = gm * gm.transpose() - (gk * gp.transpose() + gp * gk.transpose()) * 2.0;
        let b = gm * am - (gp * ak + gk * ap) * 2.0;
        let q0 = am * am - 4.0 * ak * ap;
        out.push(EllipseSpec {
            k,
            plane_constraints: plane,
            active,
            quadratic_form,
            denominator: den.clone(),
            origin,
            basis,
            plane_a: [[a[(0, 0)], a[(0, 1)]], [a[(1, 0)], a[(1, 1)]]],
            plane_b: [b[0], b[1]],
            plane_q0: q0,
        });
    }
    Ok(out)
}

/// Center of the ellipse (the stationary point of the discriminant on the
/// plane) in full coordinates.
pub fn ellipse_interior_point(spec: &EllipseSpec) -> Result<Vec<f64>> {
    Ok(spec.to_full(spec.center_plane()?))
}
