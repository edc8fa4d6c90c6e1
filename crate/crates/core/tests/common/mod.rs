//! Random family generators shared by the integration tests. Stability of
//! generated families is decided by the root oracle only.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spr_forge::oracles::{lambda_grid_roots, max_real_part};
use spr_forge::segstab::SegmentFamily;
use spr_forge::Poly;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Monic polynomial from real roots and complex pairs `re ± j im`.
pub fn from_roots(real: &[f64], pairs: &[(f64, f64)]) -> Poly {
    let mut p = Poly::from_real_roots(real);
    for &(re, im) in pairs {
        p = &p * &Poly::new(vec![1.0, -2.0 * re, re * re + im * im]);
    }
    p
}

/// Monic Hurwitz polynomial with roots in a moderate band of the left
/// half-plane (real parts in `[-4, -0.2]`, imaginary parts up to 4).
pub fn random_hurwitz(rng: &mut ChaCha8Rng, n: usize) -> Poly {
    let pairs = rng.gen_range(0..=n / 2);
    let reals = n - 2 * pairs;
    let real: Vec<f64> = (0..reals).map(|_| -rng.gen_range(0.2..4.0)).collect();
    let cpx: Vec<(f64, f64)> = (0..pairs)
        .map(|_| (-rng.gen_range(0.2..3.0), rng.gen_range(0.1..4.0)))
        .collect();
    from_roots(&real, &cpx)
}

/// Random pair whose whole segment keeps every root left of
/// `-margin` according to the λ-grid root oracle.
pub fn random_stable_family(rng: &mut ChaCha8Rng, n: usize, margin: f64) -> SegmentFamily {
    loop {
        let a = random_hurwitz(rng, n);
        let b = random_hurwitz(rng, n);
        let fam = SegmentFamily::new(a, b).unwrap();
        let r = lambda_grid_roots(&fam, 501).unwrap();
        if r.max_real_part < -margin {
            return fam;
        }
    }
}

/// Pair with Hurwitz endpoints whose segment crosses the imaginary axis
/// in the interior: `a_{λ0} = (s^2 + w^2) h(s)` for a random Hurwitz `h`,
/// endpoints `m - λ0 D` and `m + (1 - λ0) D`, rejection-sampled until both
/// endpoints are Hurwitz. Returns the family and `λ0`.
pub fn random_unstable_family(rng: &mut ChaCha8Rng, n: usize) -> (SegmentFamily, f64) {
    assert!(n >= 2);
    loop {
        let w = rng.gen_range(0.3..3.0);
        let h = random_hurwitz(rng, n - 2);
        let m = &Poly::new(vec![1.0, 0.0, w * w]) * &h;
        let scale = m.norm_inf();
        let d: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0) * scale).collect();
        let d = Poly::from_ascending(d.into_iter().rev().collect());
        let lambda0 = rng.gen_range(0.2..0.8);
        for delta in [0.05, 0.1, 0.2, 0.4, 0.8] {
            let a = &m - &d.scale(lambda0 * delta);
            let b = &m + &d.scale((1.0 - lambda0) * delta);
            let (Ok(ra), Ok(rb)) = (max_real_part(&a), max_real_part(&b)) else {
                continue;
            };
            if ra < -1e-3 && rb < -1e-3 {
                return (SegmentFamily::new(a, b).unwrap(), lambda0);
            }
        }
    }
}

/// The frozen degree-4 unstable fixture: `m ± q / 4` around
/// `m = (s^2 + 1)(s^2 + s + 1)` with `q = 3 s^2 + s + 3`.
pub fn unstable_fixture() -> SegmentFamily {
    SegmentFamily::new(
        Poly::new(vec![1.0, 1.0, 2.75, 1.25, 1.75]),
        Poly::new(vec![1.0, 1.0, 1.25, 0.75, 0.25]),
    )
    .unwrap()
}

pub fn cubic_pair() -> SegmentFamily {
    SegmentFamily::new(Poly::new(vec![1.0, 3.0, 3.0, 1.0]), Poly::new(vec![1.0, 6.0, 12.0, 8.0])).unwrap()
}
