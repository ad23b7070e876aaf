//! Product-torus invariants, the equivalence relation on area vectors, displacement energy,
//! Clifford lifts and the ball obstruction.

use std::cmp::Ordering;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{argmin, same_basis, sort_reals, sum_reals, SymBasis, SymReal, ZModule};

/// Area vector `a` with an optional chart capacity `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusSpec {
    a: Vec<SymReal>,
    capacity: Option<SymReal>,
}

impl TorusSpec {
    pub fn new(a: Vec<SymReal>, capacity: Option<SymReal>) -> Result<TorusSpec> {
        let first = a.first().ok_or_else(|| Error::InvalidTorus("empty area vector".into()))?;
        let basis = first.basis().clone();
        for (i, x) in a.iter().enumerate() {
            if !same_basis(&basis, x.basis()) {
                return Err(Error::BasisMismatch);
            }
            if !x.is_positive()? {
                return Err(Error::InvalidTorus(format!("component {} is not positive: {}", i + 1, x)));
            }
        }
        if let Some(b) = &capacity {
            let total = sum_reals(&basis, &a)?;
            if total.cmp(b)? == Ordering::Greater {
                return Err(Error::InvalidTorus(format!("|a| = {} exceeds the chart capacity {}", total, b)));
            }
        }
        Ok(TorusSpec { a, capacity })
    }

    pub fn from_ints(basis: &Arc<SymBasis>, a: &[i64]) -> Result<TorusSpec> {
        TorusSpec::new(a.iter().map(|&x| SymReal::from_int(basis, x)).collect(), None)
    }

    pub fn with_capacity(self, b: SymReal) -> Result<TorusSpec> {
        TorusSpec::new(self.a, Some(b))
    }

    pub fn components(&self) -> &[SymReal] {
        &self.a
    }

    pub fn capacity(&self) -> Option<&SymReal> {
        self.capacity.as_ref()
    }

    pub fn basis(&self) -> &Arc<SymBasis> {
        self.a[0].basis()
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantSet {
    pub ua: SymReal,
    pub m: usize,
    pub total: SymReal,
    pub norm: SymReal,
    pub gamma: ZModule,
    pub stripped: Vec<SymReal>,
}

/// Minimum, its multiplicity and the positive differences `a_i - ua` of a positive vector.
pub(crate) fn strip(a: &[SymReal]) -> Result<(SymReal, usize, Vec<SymReal>)> {
    let idx = argmin(a)?.ok_or_else(|| Error::InvalidTorus("empty area vector".into()))?;
    let ua = a[idx].clone();
    let mut m = 0;
    let mut rest = Vec::new();
    for x in a {
        if *x == ua {
            m += 1;
        } else {
            rest.push(x.sub(&ua)?);
        }
    }
    Ok((ua, m, rest))
}

pub fn torus_invariants(t: &TorusSpec) -> Result<InvariantSet> {
    let basis = t.basis();
    let (ua, m, mut stripped) = strip(&t.a)?;
    let total = sum_reals(basis, &t.a)?;
    let norm = total.add(&ua)?;
    let gamma = ZModule::from_generators(basis, &stripped)?;
    sort_reals(&mut stripped)?;
    Ok(InvariantSet { ua, m, total, norm, gamma, stripped })
}

fn check_pair(t: &TorusSpec, u: &TorusSpec) -> Result<()> {
    if !same_basis(t.basis(), u.basis()) {
        return Err(Error::BasisMismatch);
    }
    if t.dim() != u.dim() {
        return Err(Error::DimensionMismatch { expected: t.dim(), found: u.dim() });
    }
    Ok(())
}

/// `ua = ua'`, `m(a) = m(a')` and `Γ(a) = Γ(a')`.
pub fn equiv(t: &TorusSpec, u: &TorusSpec) -> Result<bool> {
    check_pair(t, u)?;
    let (x, y) = (torus_invariants(t)?, torus_invariants(u)?);
    Ok(invariants_agree(&x, &y))
}

fn invariants_agree(x: &InvariantSet, y: &InvariantSet) -> bool {
    x.ua == y.ua && x.m == y.m && x.gamma == y.gamma
}

/// Displacement energy `ua` of a torus sitting in a chart with `‖a‖ <= b`.
pub fn displacement_energy(t: &TorusSpec) -> Result<SymReal> {
    let b = t.capacity.as_ref().ok_or(Error::MissingCapacity)?;
    let inv = torus_invariants(t)?;
    if inv.norm.cmp(b)? == Ordering::Greater {
        return Err(Error::CapacityTooSmall { norm: inv.norm.to_string(), capacity: b.to_string() });
    }
    Ok(inv.ua)
}

/// Energy of the perturbed torus `T(a + s)` in the same chart.
pub fn perturbed_energy(t: &TorusSpec, s: &[SymReal]) -> Result<SymReal> {
    if s.len() != t.dim() {
        return Err(Error::DimensionMismatch { expected: t.dim(), found: s.len() });
    }
    let shifted = t.a.iter().zip(s).map(|(x, y)| x.add(y)).collect::<Result<Vec<_>>>()?;
    displacement_energy(&TorusSpec::new(shifted, t.capacity.clone())?)
}

/// Appends `b - |a|`, giving the vector of the Clifford torus in `CP^n(b)`.
pub fn clifford_lift(t: &TorusSpec, b: &SymReal) -> Result<TorusSpec> {
    let total = sum_reals(t.basis(), &t.a)?;
    if total.cmp(b)? != Ordering::Less {
        return Err(Error::InvalidTorus(format!("|a| = {} must be strictly below b = {}", total, b)));
    }
    let mut a = t.a.clone();
    a.push(b.sub(&total)?);
    TorusSpec::new(a, Some(b.clone()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BallVerdict {
    Obstructed,
    CertifiablyIsotopic,
    Unknown,
}

pub(crate) fn is_permutation(a: &[SymReal], b: &[SymReal]) -> Result<bool> {
    if a.len() != b.len() {
        return Ok(false);
    }
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    sort_reals(&mut x)?;
    sort_reals(&mut y)?;
    Ok(x == y)
}

/// Whether the tori can be moved into each other inside the ball `B(b)`.
pub fn obstruct_ball(t: &TorusSpec, u: &TorusSpec, b: &SymReal) -> Result<BallVerdict> {
    check_pair(t, u)?;
    let (x, y) = (torus_invariants(t)?, torus_invariants(u)?);
    if is_permutation(&t.a, &u.a)? && b.cmp(&x.total)? != Ordering::Less {
        return Ok(BallVerdict::CertifiablyIsotopic);
    }
    let bound = x.norm.max(&y.norm)?;
    let below = b.cmp(bound)? == Ordering::Less;
    if below && x.total != y.total {
        return Ok(BallVerdict::Obstructed);
    }
    if !below && invariants_agree(&x, &y) {
        return Ok(BallVerdict::CertifiablyIsotopic);
    }
    Ok(BallVerdict::Unknown)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Setting {
    LiouvilleTame,
    AsphericalTameWithCapacity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Invariant {
    Ua,
    M,
    Gamma,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Equivalent,
    NotEquivalent,
    Distinct { differing: Vec<Invariant> },
    InvariantsAgree,
}

pub fn classify(t: &TorusSpec, u: &TorusSpec, setting: Setting) -> Result<Verdict> {
    check_pair(t, u)?;
    match setting {
        Setting::LiouvilleTame => {
            Ok(if equiv(t, u)? { Verdict::Equivalent } else { Verdict::NotEquivalent })
        }
        Setting::AsphericalTameWithCapacity => {
            // the energy formula is what carries the invariants here, so it must apply
            displacement_energy(t)?;
            displacement_energy(u)?;
            let (x, y) = (torus_invariants(t)?, torus_invariants(u)?);
            let mut differing = Vec::new();
            if x.ua != y.ua {
                differing.push(Invariant::Ua);
            }
            if x.m != y.m {
                differing.push(Invariant::M);
            }
            if x.gamma != y.gamma {
                differing.push(Invariant::Gamma);
            }
            Ok(if differing.is_empty() { Verdict::InvariantsAgree } else { Verdict::Distinct { differing } })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::Rat;

    fn torus(a: &[i64]) -> TorusSpec {
        TorusSpec::from_ints(&SymBasis::trivial(), a).unwrap()
    }

    fn int(x: i64) -> SymReal {
        SymReal::from_int(&SymBasis::trivial(), x)
    }

    #[test]
    fn invariants_of_small_vectors() {
        let inv = torus_invariants(&torus(&[1, 2, 3])).unwrap();
        assert_eq!((inv.ua.clone(), inv.m, inv.total.clone(), inv.norm.clone()), (int(1), 1, int(6), int(7)));
        assert_eq!(inv.gamma.generators(), vec![int(1)]);
        assert_eq!(inv.stripped, vec![int(1), int(2)]);
        let inv = torus_invariants(&torus(&[2, 2, 2])).unwrap();
        assert_eq!((inv.m, inv.gamma.rank()), (3, 0));
        assert!(inv.stripped.is_empty());
        let inv = torus_invariants(&torus(&[1, 3, 5])).unwrap();
        assert_eq!(inv.gamma.generators(), vec![int(2)]);
    }

    #[test]
    fn equivalence() {
        assert!(!equiv(&torus(&[1, 2, 3]), &torus(&[1, 3, 5])).unwrap());
        assert!(equiv(&torus(&[1, 3, 5]), &torus(&[1, 3, 3])).unwrap());
        assert!(equiv(&torus(&[1, 2, 3]), &torus(&[3, 1, 2])).unwrap());
        assert!(matches!(equiv(&torus(&[1, 2]), &torus(&[1, 2, 3])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn torus_validation() {
        assert!(TorusSpec::from_ints(&SymBasis::trivial(), &[1, 0]).is_err());
        assert!(torus(&[1, 2]).with_capacity(int(2)).is_err());
    }

    #[test]
    fn energy() {
        assert_eq!(displacement_energy(&torus(&[1, 2, 3]).with_capacity(int(8)).unwrap()).unwrap(), int(1));
        assert_eq!(displacement_energy(&torus(&[2, 2, 2]).with_capacity(int(8)).unwrap()).unwrap(), int(2));
        let b = SymReal::constant(&SymBasis::trivial(), Rat::new(13.into(), 2.into()));
        assert!(matches!(
            displacement_energy(&torus(&[1, 2, 3]).with_capacity(b).unwrap()),
            Err(Error::CapacityTooSmall { .. })
        ));
        assert_eq!(displacement_energy(&torus(&[1, 2])), Err(Error::MissingCapacity));
    }

    #[test]
    fn clifford() {
        assert_eq!(clifford_lift(&torus(&[1]), &int(3)).unwrap().components(), &[int(1), int(2)]);
        assert_eq!(clifford_lift(&torus(&[1, 2]), &int(6)).unwrap().components(), &[int(1), int(2), int(3)]);
        assert!(clifford_lift(&torus(&[1, 2]), &int(3)).is_err());
    }

    #[test]
    fn ball_obstruction() {
        let (a, b) = (torus(&[1, 3, 5]), torus(&[1, 3, 3]));
        assert_eq!(obstruct_ball(&a, &b, &int(9)).unwrap(), BallVerdict::Obstructed);
        assert_eq!(obstruct_ball(&a, &b, &int(10)).unwrap(), BallVerdict::CertifiablyIsotopic);
        assert_eq!(obstruct_ball(&torus(&[1, 2]), &torus(&[2, 1]), &int(3)).unwrap(), BallVerdict::CertifiablyIsotopic);
        // equal totals below the bound: left open
        assert_eq!(obstruct_ball(&torus(&[1, 3, 5]), &torus(&[1, 4, 4]), &int(9)).unwrap(), BallVerdict::Unknown);
    }

    #[test]
    fn classification() {
        let (a, b) = (torus(&[1, 3, 5]), torus(&[1, 3, 3]));
        assert_eq!(classify(&a, &b, Setting::LiouvilleTame).unwrap(), Verdict::Equivalent);
        let x = torus(&[1, 2, 3]).with_capacity(int(8)).unwrap();
        let y = torus(&[1, 3, 5]).with_capacity(int(12)).unwrap();
        assert_eq!(
            classify(&x, &y, Setting::AsphericalTameWithCapacity).unwrap(),
            Verdict::Distinct { differing: vec![Invariant::Gamma] }
        );
        let z = torus(&[1, 2]).with_capacity(int(5)).unwrap();
        assert_eq!(classify(&z, &z, Setting::AsphericalTameWithCapacity).unwrap(), Verdict::InvariantsAgree);
        assert_eq!(classify(&a, &b, Setting::AsphericalTameWithCapacity), Err(Error::MissingCapacity));
    }
}
