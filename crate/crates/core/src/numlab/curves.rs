use num_traits::{Float, FloatConst};

use crate::error::{Error, Result};

use super::{lit, show};

pub const MIN_SAMPLES: usize = 64;

/// A closed curve `γ: R/Z → C^n` sampled at `θ_k = k/N`, `k < N`, with its derivative `dγ/dθ`.
/// Points are stored as `(x_1, y_1, .., x_n, y_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopSample<F> {
    points: Vec<Vec<F>>,
    derivs: Vec<Vec<F>>,
}

impl<F: Float> LoopSample<F> {
    pub fn new(points: Vec<Vec<F>>, derivs: Vec<Vec<F>>) -> Result<Self> {
        if points.len() < MIN_SAMPLES {
            return Err(Error::InvalidInput(format!("{} samples, at least {} needed", points.len(), MIN_SAMPLES)));
        }
        if derivs.len() != points.len() {
            return Err(Error::DimensionMismatch { expected: points.len(), found: derivs.len() });
        }
        let dim = points[0].len();
        if dim == 0 || dim % 2 != 0 {
            return Err(Error::InvalidInput("points must have 2n real coordinates".into()));
        }
        for v in points.iter().chain(&derivs) {
            if v.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: v.len() });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput("non-finite sample".into()));
            }
        }
        Ok(LoopSample { points, derivs })
    }

    /// Samples `f` and its derivative `df` at `N` equally spaced parameters, after checking
    /// that `f(0) = f(1)` to 1e-12.
    pub fn from_fn(samples: usize, f: impl Fn(F) -> Vec<F>, df: impl Fn(F) -> Vec<F>) -> Result<Self> {
        let (start, end) = (f(F::zero()), f(F::one()));
        let scale = start.iter().fold(F::one(), |m, x| m.max(x.abs()));
        let gap = start.iter().zip(&end).fold(F::zero(), |m, (x, y)| m.max((*x - *y).abs()));
        if start.len() != end.len() || gap > lit::<F>(1e-12) * scale {
            return Err(Error::InvalidInput(format!("curve is not closed: |γ(1) - γ(0)| = {}", show(gap))));
        }
        let n: F = lit(samples as f64);
        let thetas: Vec<F> = (0..samples).map(|k| lit::<F>(k as f64) / n).collect();
        LoopSample::new(thetas.iter().map(|&t| f(t)).collect(), thetas.iter().map(|&t| df(t)).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<F>] {
        &self.points
    }
}

// periodic trapezoid rule over every `stride`-th sample
fn mean<F: Float>(values: &[F], stride: usize) -> F {
    let mut s = F::zero();
    let mut n = 0usize;
    for v in values.iter().step_by(stride) {
        s = s + *v;
        n += 1;
    }
    s / lit(n as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsoperimetricReport<F> {
    /// `ℓ(γ)^2`
    pub lhs: F,
    /// `2π ∫ γ*α_n`
    pub rhs: F,
    pub slack: F,
    /// Change of `slack` when only every other sample is used.
    pub quadrature_error: F,
}

/// Both sides of `ℓ^2(γ) ≥ 2π ∫ γ*α_n` with `α_n = Σ x_j dy_j - y_j dx_j`.
pub fn isoperimetric_check<F: Float + FloatConst>(lp: &LoopSample<F>) -> Result<IsoperimetricReport<F>> {
    let speed: Vec<F> = lp.derivs.iter().map(|d| d.iter().fold(F::zero(), |s, x| s + *x * *x).sqrt()).collect();
    let alpha: Vec<F> = lp
        .points
        .iter()
        .zip(&lp.derivs)
        .map(|(p, d)| {
            (0..p.len() / 2).fold(F::zero(), |s, j| s + p[2 * j] * d[2 * j + 1] - p[2 * j + 1] * d[2 * j])
        })
        .collect();
    let two_pi = lit::<F>(2.0) * F::PI();
    let at = |stride: usize| {
        let len = mean(&speed, stride);
        (len * len, two_pi * mean(&alpha, stride))
    };
    let (lhs, rhs) = at(1);
    if lhs <= F::zero() {
        return Err(Error::InvalidInput("degenerate loop of zero length".into()));
    }
    let (l2, r2) = at(2);
    let slack = lhs - rhs;
    Ok(IsoperimetricReport { lhs, rhs, slack, quadrature_error: ((l2 - r2) - slack).abs() })
}

/// `∫ γ*λ` for the primitive `λ = Σ x_j dy_j`.
pub fn primitive_integral<F: Float>(lp: &LoopSample<F>) -> F {
    let vals: Vec<F> = lp
        .points
        .iter()
        .zip(&lp.derivs)
        .map(|(p, d)| (0..p.len() / 2).fold(F::zero(), |s, j| s + p[2 * j] * d[2 * j + 1]))
        .collect();
    mean(&vals, 1)
}

/// `E_{t,ℓ}(θ) = (sqrt((1-t)d/π) e^{2πiθ}, sqrt(td/(ℓπ)) e^{2πiℓθ})`.
pub fn e_curve<F: Float + FloatConst>(t: F, ell: u32, d: F, samples: usize) -> Result<LoopSample<F>> {
    if !(t >= F::zero() && t <= F::one()) || ell == 0 || !(d > F::zero()) {
        return Err(Error::InvalidInput("need t in [0, 1], ℓ ≥ 1 and d > 0".into()));
    }
    let pi = F::PI();
    let two_pi = lit::<F>(2.0) * pi;
    let lf: F = lit(ell as f64);
    let r1 = ((F::one() - t) * d / pi).sqrt();
    let r2 = (t * d / (lf * pi)).sqrt();
    let f = |th: F| {
        let (a, b) = (two_pi * th, two_pi * lf * th);
        vec![r1 * a.cos(), r1 * a.sin(), r2 * b.cos(), r2 * b.sin()]
    };
    let df = |th: F| {
        let (a, b) = (two_pi * th, two_pi * lf * th);
        let (w1, w2) = (two_pi * r1, two_pi * lf * r2);
        vec![-w1 * a.sin(), w1 * a.cos(), -w2 * b.sin(), w2 * b.cos()]
    };
    LoopSample::from_fn(samples, f, df)
}

/// Area of `L ∩ {r_- ≤ |z| ≤ r_+}` for a complex line `L` through the origin of `C^2`.
///
/// The line is parametrised in polar form `(r, φ) ↦ r e^{iφ} v` and the Gram determinant of the
/// parametrisation is integrated by composite trapezoid rules, doubling `N` until two
/// successive values agree to 1e-10 relative.
pub fn area_line_annulus<F: Float + FloatConst>(r_minus: F, r_plus: F) -> Result<F> {
    if !(r_minus >= F::zero()) || !(r_plus > r_minus) || !r_plus.is_finite() {
        return Err(Error::InvalidInput(format!(
            "radii must satisfy 0 ≤ r_- < r_+, got {} and {}",
            show(r_minus),
            show(r_plus)
        )));
    }
    let two_pi = lit::<F>(2.0) * F::PI();
    // a unit vector with both components non-zero and complex
    let v = [0.36, 0.48, 0.0, 0.8].map(lit::<F>);
    let element = |r: F, phi: F| -> F {
        let (c, s) = (phi.cos(), phi.sin());
        let mut dr = [F::zero(); 4];
        let mut dphi = [F::zero(); 4];
        for j in 0..2 {
            let (x, y) = (v[2 * j], v[2 * j + 1]);
            // e^{iφ}(x + iy) and its φ-derivative times r
            dr[2 * j] = c * x - s * y;
            dr[2 * j + 1] = s * x + c * y;
            dphi[2 * j] = -r * dr[2 * j + 1];
            dphi[2 * j + 1] = r * dr[2 * j];
        }
        let dot = |a: &[F; 4], b: &[F; 4]| a.iter().zip(b).fold(F::zero(), |s, (x, y)| s + *x * *y);
        let (g11, g12, g22) = (dot(&dr, &dr), dot(&dr, &dphi), dot(&dphi, &dphi));
        (g11 * g22 - g12 * g12).max(F::zero()).sqrt()
    };
    let integrate = |n: usize| -> F {
        let nf: F = lit(n as f64);
        let hr = (r_plus - r_minus) / nf;
        let hphi = two_pi / nf;
        let mut total = F::zero();
        for i in 0..=n {
            let r = r_minus + hr * lit(i as f64);
            let w = if i == 0 || i == n { lit(0.5) } else { F::one() };
            let mut ring = F::zero();
            for k in 0..n {
                ring = ring + element(r, hphi * lit(k as f64));
            }
            total = total + w * ring * hphi;
        }
        total * hr
    };
    let mut n = 8;
    let mut prev = integrate(n);
    while n < 1 << 12 {
        n *= 2;
        let cur = integrate(n);
        if (cur - prev).abs() <= lit::<F>(1e-10) * cur.abs() {
            return Ok(cur);
        }
        prev = cur;
    }
    Ok(prev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn annulus_areas() {
        assert!((area_line_annulus(1.0, 2.0).unwrap() / (3.0 * PI) - 1.0).abs() < 1e-6);
        assert!((area_line_annulus(0.0, 1.0).unwrap() / PI - 1.0).abs() < 1e-6);
        assert!(area_line_annulus(1.0, 1.0).is_err());
    }

    #[test]
    fn round_circle_is_the_equality_case() {
        let r = 1.7;
        let lp = LoopSample::from_fn(
            256,
            |t: f64| vec![r * (2.0 * PI * t).cos(), r * (2.0 * PI * t).sin()],
            |t: f64| vec![-2.0 * PI * r * (2.0 * PI * t).sin(), 2.0 * PI * r * (2.0 * PI * t).cos()],
        )
        .unwrap();
        let rep = isoperimetric_check(&lp).unwrap();
        assert!((rep.lhs - 4.0 * PI * PI * r * r).abs() < 1e-9);
        assert!(rep.slack.abs() < 1e-6);
    }

    #[test]
    fn open_curves_and_short_samples_are_rejected() {
        let open = LoopSample::from_fn(128, |t: f64| vec![t, 0.0], |_| vec![1.0, 0.0]);
        assert!(open.is_err());
        let short = LoopSample::from_fn(16, |t: f64| vec![(2.0 * PI * t).cos(), 0.0], |_| vec![0.0, 0.0]);
        assert!(short.is_err());
    }

    #[test]
    fn e_curve_action_is_constant() {
        for t in [0.0, 0.3, 0.9] {
            let lp = e_curve(t, 3, 2.0, 512).unwrap();
            assert!((primitive_integral(&lp) - 2.0).abs() < 1e-9);
        }
    }
}
