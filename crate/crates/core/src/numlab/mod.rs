//! Floating-point checks of the explicit symplectic maps and the area inequalities.
//!
//! Action-angle coordinates are `(ρ_1, θ_1, ρ_2, θ_2, ..)` with `z = e^{2πiθ} sqrt(ρ/π)`, so
//! `ω = Σ dρ_j ∧ dθ_j` and `T(a)` is the circle `ρ = a`. Angles live in `[0, 1)`.

use num_traits::{Float, FloatConst};

use crate::error::{Error, Result};

mod curves;
pub mod suite;

pub use curves::{area_line_annulus, e_curve, isoperimetric_check, primitive_integral, IsoperimetricReport, LoopSample};

pub(crate) fn lit<F: Float>(x: f64) -> F {
    F::from(x).expect("float literal")
}

pub(crate) fn show<F: Float>(x: F) -> String {
    format!("{}", x.to_f64().unwrap_or(f64::NAN))
}

/// A point of `R^{2n}`, read as `(x_j, y_j)` pairs or as action-angle pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticPoint<F> {
    pub coords: Vec<F>,
}

impl<F: Float> SymplecticPoint<F> {
    pub fn new(coords: Vec<F>) -> Result<Self> {
        if coords.is_empty() || coords.len() % 2 != 0 {
            return Err(Error::InvalidInput(format!("{} coordinates do not form pairs", coords.len())));
        }
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("non-finite coordinate".into()));
        }
        Ok(SymplecticPoint { coords })
    }

    /// Action-angle point; angles are wrapped into `[0, 1)`.
    pub fn action_angle(mut coords: Vec<F>) -> Result<Self> {
        let p = SymplecticPoint::new(coords.clone())?;
        for j in 0..p.coords.len() / 2 {
            if coords[2 * j] < F::zero() {
                return Err(Error::DomainViolation(format!("negative action ρ_{} = {}", j + 1, show(coords[2 * j]))));
            }
            coords[2 * j + 1] = wrap(coords[2 * j + 1]);
        }
        Ok(SymplecticPoint { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

pub fn wrap<F: Float>(theta: F) -> F {
    let w = theta - theta.floor();
    // guards against -tiny rounding up to 1.0
    if w >= F::one() {
        F::zero()
    } else {
        w
    }
}

fn four<F: Float>(p: &SymplecticPoint<F>) -> Result<[F; 4]> {
    match p.coords[..] {
        [a, b, c, d] => Ok([a, b, c, d]),
        _ => Err(Error::DimensionMismatch { expected: 4, found: p.dim() }),
    }
}

/// `(ρ1, θ1, ρ2, θ2) ↦ (ρ1, θ1 + θ2, ρ2 - ρ1, θ2)` on `ρ2 > ρ1`.
pub fn map_psi<F: Float>(p: &SymplecticPoint<F>) -> Result<SymplecticPoint<F>> {
    let [r1, t1, r2, t2] = four(p)?;
    if r2 <= r1 {
        return Err(Error::DomainViolation(format!("ρ2 = {} is not above ρ1 = {}", show(r2), show(r1))));
    }
    SymplecticPoint::action_angle(vec![r1, t1 + t2, r2 - r1, t2])
}

/// Inverse of [`map_psi`], defined on `ρ2 > 0`.
pub fn map_psi_inverse<F: Float>(p: &SymplecticPoint<F>) -> Result<SymplecticPoint<F>> {
    let [r1, t1, r2, t2] = four(p)?;
    if r2 <= F::zero() {
        return Err(Error::DomainViolation(format!("ρ2 = {} must be positive", show(r2))));
    }
    SymplecticPoint::action_angle(vec![r1, t1 - t2, r2 + r1, t2])
}

/// `(ρ1, θ1, ρ2, θ2) ↦ (ρ1, θ1 + mθ2, ρ2 + s - mρ1, θ2)` on `ρ2 + s > mρ1`.
pub fn map_psi_ms<F: Float>(m: i64, s: F, p: &SymplecticPoint<F>) -> Result<SymplecticPoint<F>> {
    let [r1, t1, r2, t2] = four(p)?;
    let mf: F = lit(m as f64);
    if r2 + s <= mf * r1 {
        return Err(Error::DomainViolation(format!("ρ2 + s = {} is not above m ρ1 = {}", show(r2 + s), show(mf * r1))));
    }
    SymplecticPoint::action_angle(vec![r1, t1 + mf * t2, r2 + s - mf * r1, t2])
}

/// The same map on `C^2 = R^4` in `(x1, y1, x2, y2)`:
/// `(z1, z2) ↦ (z1 z2 / |z2|, z2 sqrt(|z2|^2 - |z1|^2) / |z2|)` on `|z1| < |z2|`.
pub fn map_psi_cartesian<F: Float>(p: &SymplecticPoint<F>) -> Result<SymplecticPoint<F>> {
    let [x1, y1, x2, y2] = four(p)?;
    let n1 = x1 * x1 + y1 * y1;
    let n2 = x2 * x2 + y2 * y2;
    if n1 >= n2 {
        return Err(Error::DomainViolation("|z1| must be below |z2|".into()));
    }
    let r2 = n2.sqrt();
    let (u, v) = (x2 / r2, y2 / r2);
    let k = (n2 - n1).sqrt();
    SymplecticPoint::new(vec![x1 * u - y1 * v, x1 * v + y1 * u, u * k, v * k])
}

/// Central-difference Jacobian. Rows of the output index the image coordinates; when
/// `angles` is set, odd image coordinates are circle-valued and their differences are taken
/// modulo 1.
pub fn jacobian<F, M>(map: M, p: &SymplecticPoint<F>, h: F, angles: bool) -> Result<Vec<Vec<F>>>
where
    F: Float,
    M: Fn(&SymplecticPoint<F>) -> Result<SymplecticPoint<F>>,
{
    let n = p.dim();
    let mut jac = vec![vec![F::zero(); n]; n];
    let half = lit::<F>(0.5);
    for col in 0..n {
        let mut plus = p.coords.clone();
        let mut minus = p.coords.clone();
        plus[col] = plus[col] + h;
        minus[col] = minus[col] - h;
        // the step actually represented, not 2h
        let step = plus[col] - minus[col];
        let fp = map(&SymplecticPoint { coords: plus })?;
        let fm = map(&SymplecticPoint { coords: minus })?;
        for row in 0..n {
            let mut diff = fp.coords[row] - fm.coords[row];
            if angles && row % 2 == 1 {
                diff = diff - (diff + half).floor();
            }
            jac[row][col] = diff / step;
        }
    }
    Ok(jac)
}

/// `max |JᵀΩJ - Ω|` with Ω the standard form in pair ordering.
pub fn symplectic_defect<F: Float>(jac: &[Vec<F>]) -> F {
    let n = jac.len();
    let omega = |i: usize, j: usize| -> F {
        if i % 2 == 0 && j == i + 1 {
            F::one()
        } else if i % 2 == 1 && j + 1 == i {
            -F::one()
        } else {
            F::zero()
        }
    };
    let mut worst = F::zero();
    for a in 0..n {
        for b in 0..n {
            let mut s = F::zero();
            for i in 0..n {
                for j in 0..n {
                    let w = omega(i, j);
                    if w != F::zero() {
                        s = s + jac[i][a] * w * jac[j][b];
                    }
                }
            }
            worst = worst.max((s - omega(a, b)).abs());
        }
    }
    worst
}

fn to_complex<F: Float + FloatConst>(rho: F, theta: F) -> (F, F) {
    let r = (rho / F::PI()).sqrt();
    let ang = lit::<F>(2.0) * F::PI() * theta;
    (r * ang.cos(), r * ang.sin())
}

/// Largest `π(|z1|^2 + |z2|^2 + |z3|^2)` over `samples` points of the torus moved at time `t`.
///
/// Points of `T(a, c, a + d)` are rotated in the `(z1, z3)` plane by `Φ_t`, with `Φ_1(z1, z2, z3)
/// = (z3, z2, -z1)`, and pulled back through the inverse of `Ψ × id`.
pub fn check_step1_ball<F: Float + FloatConst>(a: F, c: F, d: F, t: F, samples: usize) -> Result<F> {
    for (name, v) in [("a", a), ("c", c), ("d", d)] {
        if !(v > F::zero()) || !v.is_finite() {
            return Err(Error::InvalidInput(format!("{} = {} must be positive", name, show(v))));
        }
    }
    if !(t >= F::zero() && t <= F::one()) {
        return Err(Error::InvalidInput(format!("t = {} must lie in [0, 1]", show(t))));
    }
    if samples == 0 {
        return Err(Error::InvalidInput("at least one sample is needed".into()));
    }
    let pi = F::PI();
    let (ca, sa) = {
        let ang = pi * t / lit(2.0);
        (ang.cos(), ang.sin())
    };
    // Kronecker sequence on the 3-torus of angles
    let alpha = [0.5545497, 0.308517, 0.1892509].map(lit::<F>);
    let mut worst = F::zero();
    for k in 0..samples {
        let kf: F = lit(k as f64);
        let th = alpha.map(|al| wrap(kf * al));
        let (x1, y1) = to_complex(a, th[0]);
        let (x2, y2) = to_complex(c, th[1]);
        let (x3, y3) = to_complex(a + d, th[2]);
        let (u1, v1) = (ca * x1 + sa * x3, ca * y1 + sa * y3);
        let (u3, v3) = (-sa * x1 + ca * x3, -sa * y1 + ca * y3);
        // inverse of Ψ on (w1, w2) = ((u1, v1), (x2, y2))
        let n2 = x2 * x2 + y2 * y2;
        if n2 <= F::zero() {
            return Err(Error::DomainViolation("the flow left the domain z2 ≠ 0".into()));
        }
        let r = n2.sqrt();
        let (p, q) = (x2 / r, -y2 / r);
        let (z1x, z1y) = (u1 * p - v1 * q, u1 * q + v1 * p);
        let z2n = u1 * u1 + v1 * v1 + n2;
        let total = pi * (z1x * z1x + z1y * z1y + z2n + u3 * u3 + v3 * v3);
        worst = worst.max(total);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn aa(c: [f64; 4]) -> SymplecticPoint<f64> {
        SymplecticPoint::action_angle(c.to_vec()).unwrap()
    }

    #[test]
    fn psi_formula() {
        let q = map_psi(&aa([1.0, 0.25, 3.0, 0.5])).unwrap();
        assert_eq!(q.coords, vec![1.0, 0.75, 2.0, 0.5]);
        assert!(matches!(map_psi(&aa([3.0, 0.0, 1.0, 0.0])), Err(Error::DomainViolation(_))));
        let back = map_psi_inverse(&q).unwrap();
        assert!(back.coords.iter().zip([1.0, 0.25, 3.0, 0.5]).all(|(x, y)| (x - y).abs() < 1e-12));
    }

    #[test]
    fn psi_ms_special_cases() {
        let p = aa([1.0, 0.3, 2.0, 0.9]);
        assert_eq!(map_psi_ms(0, 0.0, &p).unwrap(), p);
        assert_eq!(map_psi_ms(1, 0.0, &p).unwrap(), map_psi(&p).unwrap());
        assert!(map_psi_ms(3, 0.5, &p).is_err());
    }

    #[test]
    fn cartesian_psi_matches_action_angle() {
        let p = aa([0.7, 0.1, 2.0, 0.35]);
        let (x1, y1) = to_complex(0.7, 0.1);
        let (x2, y2) = to_complex(2.0, 0.35);
        let q = map_psi_cartesian(&SymplecticPoint::new(vec![x1, y1, x2, y2]).unwrap()).unwrap();
        let want = map_psi(&p).unwrap();
        let (w1x, w1y) = to_complex(want.coords[0], want.coords[1]);
        let (w2x, w2y) = to_complex(want.coords[2], want.coords[3]);
        for (x, y) in q.coords.iter().zip([w1x, w1y, w2x, w2y]) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn jacobians_are_symplectic() {
        let p = aa([0.7, 0.95, 2.0, 0.35]);
        let j = jacobian(map_psi, &p, 1e-6, true).unwrap();
        assert!(symplectic_defect(&j) < 1e-9);
        let c = SymplecticPoint::new(vec![0.3, -0.2, 0.5, 0.9]).unwrap();
        let j = jacobian(map_psi_cartesian, &c, 1e-6, false).unwrap();
        assert!(symplectic_defect(&j) < 1e-9);
        // a non-symplectic map is caught
        let j = jacobian(|p: &SymplecticPoint<f64>| SymplecticPoint::new(p.coords.iter().map(|x| 2.0 * x).collect()), &c, 1e-6, false).unwrap();
        assert!(symplectic_defect(&j) > 1.0);
    }

    #[test]
    fn step1_ball_endpoints() {
        // t = 0: the torus T(1, 2, 2), so the sum is exactly 5
        let m = check_step1_ball(1.0, 1.0, 1.0, 0.0, 500).unwrap();
        assert!((m - 5.0).abs() < 1e-9);
        // t = 1: T(a + d, a + c + d, a) with |.| = 3a + c + 2d
        let m = check_step1_ball(1.0, 1.0, 1.0, 1.0, 500).unwrap();
        assert!((m - 6.0).abs() < 1e-9);
        assert!(check_step1_ball(0.0, 1.0, 1.0, 0.5, 10).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let q = map_psi(&SymplecticPoint::action_angle(vec![1.0f32, 0.25, 3.0, 0.5]).unwrap()).unwrap();
        assert_eq!(q.coords, vec![1.0f32, 0.75, 2.0, 0.5]);
        assert!(check_step1_ball(1.0f32, 1.0, 1.0, 0.5, 100).unwrap() <= 7.0 + 1e-4);
    }
}
