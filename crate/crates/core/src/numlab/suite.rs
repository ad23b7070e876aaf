//! Seeded batches of the numeric checks, each summarised as one report line.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Result;

use super::{
    area_line_annulus, check_step1_ball, e_curve, isoperimetric_check, jacobian, map_psi, map_psi_cartesian,
    map_psi_inverse, map_psi_ms, primitive_integral, symplectic_defect, LoopSample, SymplecticPoint,
};

pub const JACOBIAN_STEP: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub check: String,
    pub params: Value,
    pub observed: f64,
    pub bound: f64,
    pub pass: bool,
}

impl Report {
    fn at_most(check: &str, params: Value, observed: f64, bound: f64) -> Report {
        Report { check: check.into(), params, observed, bound, pass: observed <= bound }
    }
}

fn action_angle_point(rng: &mut ChaCha8Rng) -> SymplecticPoint<f64> {
    // unit-scale actions: at h = 1e-6 the rounding error of a difference quotient is about
    // 1e-10 times the size of the image coordinates
    let r1 = rng.gen_range(0.1..1.0);
    let r2 = r1 + rng.gen_range(0.1..1.0);
    SymplecticPoint::action_angle(vec![r1, rng.gen(), r2, rng.gen()]).expect("valid point")
}

/// Largest `|JᵀΩJ - Ω|` over random interior points of the three maps.
pub fn psi_symplectic(seed: u64, points: usize) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..points {
        let p = action_angle_point(&mut rng);
        worst = worst.max(symplectic_defect(&jacobian(map_psi, &p, JACOBIAN_STEP, true)?));

        let m = rng.gen_range(-2i64..=2);
        let s = rng.gen_range(-0.5..0.5);
        let mut q = action_angle_point(&mut rng);
        // move into the domain ρ2 + s > m ρ1 with some margin
        let need = m as f64 * q.coords[0] - s + 0.1;
        if q.coords[2] < need {
            q.coords[2] = need + rng.gen_range(0.0..1.0);
        }
        worst = worst.max(symplectic_defect(&jacobian(|x| map_psi_ms(m, s, x), &q, JACOBIAN_STEP, true)?));

        let (x1, y1, x2, y2): (f64, f64, f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let (n1, n2) = ((x1 * x1 + y1 * y1).sqrt(), (x2 * x2 + y2 * y2).sqrt());
        if n2 > 0.05 && n1 < 0.8 * n2 {
            let c = SymplecticPoint::new(vec![x1, y1, x2, y2])?;
            worst = worst.max(symplectic_defect(&jacobian(map_psi_cartesian, &c, JACOBIAN_STEP, false)?));
        }
    }
    Ok(Report::at_most("psi-symplectic", json!({"seed": seed, "points": points, "h": JACOBIAN_STEP}), worst, 1e-9))
}

/// `Ψ⁻¹ ∘ Ψ = id` and `Ψ(T(1, 3)) ⊂ T(1, 2)`.
pub fn psi_roundtrip(seed: u64, points: usize) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..points {
        let p = action_angle_point(&mut rng);
        let back = map_psi_inverse(&map_psi(&p)?)?;
        for (x, y) in back.coords.iter().zip(&p.coords) {
            let mut d = (x - y).abs();
            d = d.min(1.0 - d);
            worst = worst.max(d);
        }
        let t: SymplecticPoint<f64> = SymplecticPoint::action_angle(vec![1.0, rng.gen(), 3.0, rng.gen()])?;
        let img = map_psi(&t)?;
        worst = worst.max((img.coords[0] - 1.0).abs()).max((img.coords[2] - 2.0).abs());
    }
    Ok(Report::at_most("psi-roundtrip", json!({"seed": seed, "points": points}), worst, 1e-12))
}

/// Excess of the moved tori over `4a + c + 2d` on the grid `{0.5, 1, 2}^3 × {0, 0.1, .., 1}`.
pub fn step1_grid(samples: usize) -> Result<Report> {
    let vals = [0.5, 1.0, 2.0];
    let mut worst = f64::NEG_INFINITY;
    for &a in &vals {
        for &c in &vals {
            for &d in &vals {
                for k in 0..=10 {
                    let t = k as f64 / 10.0;
                    let m = check_step1_ball(a, c, d, t, samples)?;
                    worst = worst.max(m - (4.0 * a + c + 2.0 * d));
                }
            }
        }
    }
    Ok(Report::at_most("step1-ball", json!({"samples": samples, "grid": vals}), worst, 1e-9))
}

/// Relative error of the annulus area against `π(r_+^2 - r_-^2)` at `(1, 2)` and at random radii.
pub fn annulus(seed: u64, pairs: usize) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rel = |lo: f64, hi: f64| -> Result<f64> {
        let exact = PI * (hi * hi - lo * lo);
        Ok((area_line_annulus(lo, hi)? - exact).abs() / exact)
    };
    let mut worst = rel(1.0, 2.0)?.max(rel(0.0, 1.0)?);
    for _ in 0..pairs {
        let lo = rng.gen_range(0.0..3.0);
        let hi = lo + rng.gen_range(0.01..3.0);
        worst = worst.max(rel(lo, hi)?);
    }
    Ok(Report::at_most("annulus-area", json!({"seed": seed, "pairs": pairs}), worst, 1e-6))
}

/// A random trigonometric loop in `C^n` of degree at most `degree`.
pub fn random_loop(rng: &mut impl Rng, n: usize, degree: i32, samples: usize) -> Result<LoopSample<f64>> {
    let coeffs: Vec<Vec<(i32, f64, f64)>> = (0..n)
        .map(|_| (-degree..=degree).map(|k| (k, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
        .collect();
    let eval = |t: f64, deriv: bool| -> Vec<f64> {
        let mut out = Vec::with_capacity(2 * n);
        for cj in &coeffs {
            let (mut x, mut y) = (0.0, 0.0);
            for &(k, re, im) in cj {
                let w = 2.0 * PI * k as f64;
                let (c, s) = ((w * t).cos(), (w * t).sin());
                // (re + i im) e^{iwt}, or its derivative i w (..)
                let (px, py) = (re * c - im * s, re * s + im * c);
                if deriv {
                    x -= w * py;
                    y += w * px;
                } else {
                    x += px;
                    y += py;
                }
            }
            out.push(x);
            out.push(y);
        }
        out
    };
    LoopSample::from_fn(samples, |t| eval(t, false), |t| eval(t, true))
}

/// Smallest relative slack `(ℓ^2 - 2π∫γ*α) / max(1, ℓ^2)` over random loops, reported as its
/// negative so that the bound reads `observed ≤ 1e-6`; round circles must hit equality.
pub fn isoperimetric(seed: u64, trials: usize) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..trials {
        let lp = random_loop(&mut rng, 2, 5, 4096)?;
        let r = isoperimetric_check(&lp)?;
        worst = worst.max(-r.slack / r.lhs.max(1.0));
    }
    let mut circle_gap: f64 = 0.0;
    for r in [0.5, 1.0, 3.0] {
        let lp = LoopSample::from_fn(
            4096,
            |t: f64| vec![r * (2.0 * PI * t).cos(), r * (2.0 * PI * t).sin(), 0.0, 0.0],
            |t: f64| vec![-2.0 * PI * r * (2.0 * PI * t).sin(), 2.0 * PI * r * (2.0 * PI * t).cos(), 0.0, 0.0],
        )?;
        let rep = isoperimetric_check(&lp)?;
        circle_gap = circle_gap.max(rep.slack.abs() / rep.lhs.max(1.0));
    }
    let mut rep = Report::at_most("isoperimetric", json!({"seed": seed, "trials": trials, "samples": 4096, "circle_gap": circle_gap}), worst, 1e-6);
    rep.pass = rep.pass && circle_gap < 1e-6;
    Ok(rep)
}

/// `∫ E_{t,ℓ}*λ = d` for a range of `t` and `ℓ`.
pub fn e_curve_action(d: f64) -> Result<Report> {
    let mut worst: f64 = 0.0;
    for ell in 1..=4 {
        for k in 0..=10 {
            let lp = e_curve(k as f64 / 10.0, ell, d, 1024)?;
            worst = worst.max((primitive_integral(&lp) - d).abs());
        }
    }
    Ok(Report::at_most("e-curve-action", json!({"d": d}), worst, 1e-9))
}

/// All numeric checks with the default sizes.
pub fn all(seed: u64) -> Result<Vec<Report>> {
    Ok(vec![
        psi_symplectic(seed, 1000)?,
        psi_roundtrip(seed, 1000)?,
        step1_grid(2000)?,
        annulus(seed, 20)?,
        isoperimetric(seed, 200)?,
        e_curve_action(2.5)?,
    ])
}
