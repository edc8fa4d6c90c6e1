//! Constructive robust SPR synthesis for a Hurwitz segment.
//!
//! Pipeline: segment stability gate → a numerator coefficient vector `x`
//! whose real-part numerators against both endpoints are positive on
//! `(0, ∞)` → the `ε` perturbation → the `δ` degree lift → SPR
//! certificates against both endpoints.

mod ellipse;
mod perturb;
mod search;
mod tangency;

use serde::{Deserialize, Serialize};

pub use ellipse::{build_ellipses, ellipse_interior_point, AffineForm, EllipseSpec, QuadraticForm};
pub use perturb::{
    default_lift, degree_lift, epsilon_direction, epsilon_select, perturbed_numerator, DeltaSelection,
    EpsilonSelection,
};
pub use search::{
    certify_point, default_lp_grid, find_common_point, lp_grid_feasibility, seed_points, Endpoint, LpSolution,
    OmegaPoint, PointSource,
};
pub use tangency::{tangency_condition, tangency_line, TangencyLine};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::polycore::Poly;
use crate::segstab::{segment_hurwitz, SegmentFamily, SegmentVerdict};
use crate::sprcheck::SprCertificate;

/// Knobs of the synthesis pipeline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthesisConfig {
    pub tol: Tolerances,
    /// Monic degree-`n` lift polynomial; `(s + 1)^n` when absent.
    pub h: Option<Poly>,
    /// Cutting-plane rounds of the LP fallback.
    pub lp_rounds: usize,
    /// Log-grid points of the initial LP grid.
    pub lp_grid: usize,
    /// Maximum halvings of `ε` and `δ` after their closed-form bounds.
    pub halving_budget: usize,
}

impl Default for SynthesisConfig {
    fn default() -> Self {
        SynthesisConfig { tol: Tolerances::default(), h: None, lp_rounds: 20, lp_grid: 64, halving_budget: 40 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthesisResult {
    pub family: SegmentFamily,
    pub segment: SegmentVerdict,
    pub x: OmegaPoint,
    /// Absent for `n <= 2`, where `x` already gives a strictly positive
    /// real part.
    pub eps: Option<EpsilonSelection>,
    pub c_intermediate: Poly,
    pub delta: DeltaSelection,
    /// `(c_intermediate + δ h) / δ`, monic of degree `n`.
    pub c_final: Poly,
    /// `c_intermediate + δ h`.
    pub c_raw: Poly,
    pub cert_a: SprCertificate,
    pub cert_b: SprCertificate,
    pub tolerances: Tolerances,
    pub trace: Vec<String>,
}

/// `x` for degrees one and two: `c = 1` and `c = s + min(a_1, b_1) / 2`.
fn closed_form_x(fam: &SegmentFamily) -> Vec<f64> {
    match fam.degree() {
        1 => Vec::new(),
        _ => vec![0.5 * fam.a().coeffs()[1].min(fam.b().coeffs()[1])],
    }
}

/// Full pipeline with refusal on unstable segments.
pub fn synthesize(fam: &SegmentFamily, config: &SynthesisConfig) -> Result<SynthesisResult> {
    let tol = config.tol;
    let n = fam.degree();
    let mut trace = vec![format!("degree {n}, segment {} -> {}", fam.a(), fam.b())];

    let segment = segment_hurwitz(fam, &tol)?;
    trace.extend(segment.method_trace.iter().map(|s| format!("segment: {s}")));
    if !segment.stable {
        return Err(Error::SegmentUnstable { verdict: Box::new(segment) });
    }

    let (x, eps, c_intermediate) = if n >= 3 {
        let x = search::search_common_point(fam, config)?;
        trace.push(format!("common point {:?} from {:?}", x.x, x.source));
        let (sel, c) = epsilon_select(fam, &x, config)?;
        trace.push(format!("epsilon = {:e} after {} halvings", sel.epsilon, sel.halvings));
        (x, Some(sel), c)
    } else {
        let xs = closed_form_x(fam);
        let x = certify_point(fam, &xs, PointSource::ClosedForm, &tol)
            .ok_or_else(|| Error::Internal(format!("closed-form numerator {xs:?} failed certification")))?;
        trace.push(format!("closed-form numerator for degree {n}"));
        let c = crate::sprcheck::numerator_from_x(&xs);
        (x, None, c)
    };

    let h = match &config.h {
        Some(h) => h.clone(),
        None => default_lift(n),
    };
    let (delta, c_final, c_raw, cert_a, cert_b) = degree_lift(&c_intermediate, fam, &h, config)?;
    trace.push(format!("delta = {:e} after {} halvings", delta.delta, delta.halvings));
    trace.push(format!("c_final = {c_final}"));

    Ok(SynthesisResult {
        family: fam.clone(),
        segment,
        x,
        eps,
        c_intermediate,
        delta,
        c_final,
        c_raw,
        cert_a,
        cert_b,
        tolerances: tol,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(a: &[f64], b: &[f64]) -> SegmentFamily {
        SegmentFamily::new(Poly::new(a.to_vec()), Poly::new(b.to_vec())).unwrap()
    }

    #[test]
    fn cubic_pair() {
        let r = synthesize(&fam(&[1.0, 3.0, 3.0, 1.0], &[1.0, 6.0, 12.0, 8.0]), &SynthesisConfig::default()).unwrap();
        assert!(r.cert_a.spr && r.cert_b.spr);
        assert!(r.c_final.is_monic() && r.c_final.degree() == 3, "{:?}", r.c_final);
    }

    #[test]
    fn degenerate_pair_has_equal_certificates() {
        let r = synthesize(&fam(&[1.0, 3.0, 3.0, 1.0], &[1.0, 3.0, 3.0, 1.0]), &SynthesisConfig::default()).unwrap();
        assert_eq!(r.cert_a, r.cert_b);
    }

    #[test]
    fn low_degrees() {
        for (a, b) in [(vec![1.0, 2.0], vec![1.0, 5.0]), (vec![1.0, 1.0, 3.0], vec![1.0, 4.0, 0.5])] {
            let r = synthesize(&fam(&a, &b), &SynthesisConfig::default()).unwrap();
            assert!(r.cert_a.spr && r.cert_b.spr);
            assert!(r.eps.is_none());
        }
    }

    #[test]
    fn refuses_unstable_fixture() {
        let f = fam(&[1.0, 1.0, 2.75, 1.25, 1.75], &[1.0, 1.0, 1.25, 0.75, 0.25]);
        match synthesize(&f, &SynthesisConfig::default()) {
            Err(Error::SegmentUnstable { verdict }) => {
                let l = verdict.witness_lambda.unwrap();
                assert!((l - 0.5).abs() < 1e-6, "{l}");
            }
            other => panic!("{other:?}"),
        }
    }
}
