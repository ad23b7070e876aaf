//! The second homotopy data of an ambient manifold: the homomorphisms σ_a = σ - c₁·a, the
//! groups they generate, and the shift test for tori with `a` small.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactnum::{same_basis, Rat, SymBasis, SymReal, Symbol, ZModule};

/// Images of one generator of π₂ under σ and c₁.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub sigma: SymReal,
    pub c1: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifoldDescriptor {
    pub generators: Vec<Generator>,
    pub s0: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShiftVerdict {
    EquivalentForSmallA,
    NotImplied { reason: String },
}

impl ManifoldDescriptor {
    pub fn new(generators: Vec<Generator>, s0: Option<usize>) -> Result<ManifoldDescriptor> {
        if let Some(i) = s0 {
            if i >= generators.len() {
                return Err(Error::InvalidInput(format!("S0 index {} out of range", i)));
            }
        }
        if let Some(first) = generators.first() {
            if generators.iter().any(|g| !same_basis(first.sigma.basis(), g.sigma.basis())) {
                return Err(Error::BasisMismatch);
            }
        }
        Ok(ManifoldDescriptor { generators, s0 })
    }

    /// Symplectically aspherical: σ and c₁ vanish on π₂.
    pub fn aspherical() -> ManifoldDescriptor {
        ManifoldDescriptor { generators: Vec::new(), s0: None }
    }

    /// `S²(v1) × S²(v2)` with generators the two factors and `S0 = (1, -1)`.
    pub fn sphere_product(v1: &SymReal, v2: &SymReal) -> Result<ManifoldDescriptor> {
        let gens = vec![
            Generator { sigma: v1.clone(), c1: 2 },
            Generator { sigma: v2.clone(), c1: 2 },
            Generator { sigma: v1.sub(v2)?, c1: 0 },
        ];
        ManifoldDescriptor::new(gens, Some(2))
    }

    fn check_basis(&self, basis: &Arc<SymBasis>) -> Result<()> {
        match self.generators.first() {
            Some(g) if !same_basis(g.sigma.basis(), basis) => Err(Error::BasisMismatch),
            _ => Ok(()),
        }
    }
}

pub fn sigma_a(g: &Generator, a: &SymReal) -> Result<SymReal> {
    g.sigma.sub(&a.scale_int(&BigInt::from(g.c1)))
}

fn positive(a: &SymReal) -> Result<()> {
    if !a.is_positive()? {
        return Err(Error::DomainViolation(format!("a = {} must be positive", a)));
    }
    Ok(())
}

fn selected<'a>(m: &'a ManifoldDescriptor, restrict_to_s0: bool) -> Result<Vec<&'a Generator>> {
    if restrict_to_s0 {
        let i = m.s0.ok_or(Error::MissingS0)?;
        Ok(vec![&m.generators[i]])
    } else {
        Ok(m.generators.iter().collect())
    }
}

/// `G_a`, or `G_a(S0)` when `restrict_to_s0`.
pub fn group_ga(m: &ManifoldDescriptor, a: &SymReal, restrict_to_s0: bool) -> Result<ZModule> {
    positive(a)?;
    m.check_basis(a.basis())?;
    let gens = selected(m, restrict_to_s0)?
        .into_iter()
        .map(|g| sigma_a(g, a))
        .collect::<Result<Vec<_>>>()?;
    ZModule::from_generators(a.basis(), &gens)
}

/// σ(π₂) has rank one and c₁ is not a real multiple of σ.
pub fn is_special(m: &ManifoldDescriptor) -> Result<bool> {
    let Some(first) = m.generators.first() else {
        return Ok(false);
    };
    let sigmas: Vec<SymReal> = m.generators.iter().map(|g| g.sigma.clone()).collect();
    if ZModule::from_generators(first.sigma.basis(), &sigmas)?.rank() != 1 {
        return Ok(false);
    }
    // c₁ = λσ for a real λ iff all 2x2 minors σ_i c_j - σ_j c_i vanish
    let gens = &m.generators;
    for (i, g) in gens.iter().enumerate() {
        for h in &gens[i + 1..] {
            let lhs = g.sigma.scale_int(&BigInt::from(h.c1));
            let rhs = h.sigma.scale_int(&BigInt::from(g.c1));
            if lhs != rhs {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

fn fresh_name(basis: &SymBasis) -> String {
    let mut name = "a".to_string();
    let mut n = 0;
    while basis.index_of(&name).is_some() {
        n += 1;
        name = format!("a_{}", n);
    }
    name
}

fn lift(x: &SymReal, basis: &Arc<SymBasis>) -> Result<SymReal> {
    let mut c = x.coeffs().to_vec();
    c.push(Rat::zero());
    SymReal::new(basis.clone(), c)
}

/// Decides whether `T(a,..,a, a+d_1,..)` and `T(a,..,a, a+e_1,..)` are isotopic for all small
/// `a` by testing `d_j - e_j` against `G_a(S0)` (special manifolds) or `G_a`, identically in `a`.
pub fn shift_equiv(m: &ManifoldDescriptor, c: &SymReal, d: &[SymReal], e: &[SymReal]) -> Result<ShiftVerdict> {
    if d.is_empty() || d.len() != e.len() {
        return Err(Error::DimensionMismatch { expected: d.len(), found: e.len() });
    }
    if c.signum()? != Ordering::Greater {
        return Err(Error::InvalidInput(format!("c = {} must be positive", c)));
    }
    let basis = c.basis();
    m.check_basis(basis)?;
    for (name, v) in [("d", d), ("e", e)] {
        for (j, x) in v.iter().enumerate() {
            if !same_basis(basis, x.basis()) {
                return Err(Error::BasisMismatch);
            }
            if x.cmp(c)? == Ordering::Less {
                return Err(Error::InvalidInput(format!("{}_{} = {} is below c = {}", name, j + 1, x, c)));
            }
        }
    }
    let special = is_special(m)?;
    let gens = selected(m, special)?;

    let diffs = d.iter().zip(e).map(|(x, y)| x.sub(y)).collect::<Result<Vec<_>>>()?;
    let (module, diffs) = if gens.iter().all(|g| g.c1 == 0) {
        let sig: Vec<SymReal> = gens.iter().map(|g| g.sigma.clone()).collect();
        (ZModule::from_generators(basis, &sig)?, diffs)
    } else {
        // a as an indeterminate; the enclosure is never consulted by membership tests
        let ext = basis.extended(Symbol::new(fresh_name(basis), Rat::zero(), Rat::new(1.into(), 1000.into())))?;
        let a = SymReal::symbol(&ext, ext.len() - 1);
        let sig = gens
            .iter()
            .map(|g| Ok(lift(&g.sigma, &ext)?.sub(&a.scale_int(&BigInt::from(g.c1)))?))
            .collect::<Result<Vec<_>>>()?;
        let lifted = diffs.iter().map(|x| lift(x, &ext)).collect::<Result<Vec<_>>>()?;
        (ZModule::from_generators(&ext, &sig)?, lifted)
    };
    let group = if special { "G_a(S0)" } else { "G_a" };
    for (j, x) in diffs.iter().enumerate() {
        if !module.contains(x)? {
            let reason = if module.rank() == 0 {
                format!("d_{0} - e_{0} is nonzero and {1} is trivial", j + 1, group)
            } else {
                format!("d_{0} - e_{0} does not lie in {1} for all small a", j + 1, group)
            };
            return Ok(ShiftVerdict::NotImplied { reason });
        }
    }
    Ok(ShiftVerdict::EquivalentForSmallA)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(x: i64) -> SymReal {
        SymReal::from_int(&SymBasis::trivial(), x)
    }

    fn half() -> SymReal {
        SymReal::constant(&SymBasis::trivial(), Rat::new(1.into(), 2.into()))
    }

    #[test]
    fn sigma_a_values() {
        let g = Generator { sigma: int(3), c1: 2 };
        assert_eq!(sigma_a(&g, &half()).unwrap(), int(2));
        let s0 = Generator { sigma: int(-1), c1: 0 };
        assert_eq!(sigma_a(&s0, &half()).unwrap(), int(-1));
    }

    #[test]
    fn groups_of_the_sphere_product() {
        let m = ManifoldDescriptor::sphere_product(&int(3), &int(4)).unwrap();
        let z = ZModule::from_generators(&SymBasis::trivial(), &[int(1)]).unwrap();
        assert_eq!(group_ga(&m, &half(), true).unwrap(), z);
        assert_eq!(group_ga(&m, &half(), false).unwrap(), z);
        let empty = ManifoldDescriptor::aspherical();
        assert_eq!(group_ga(&empty, &half(), false).unwrap().rank(), 0);
        assert_eq!(group_ga(&empty, &half(), true), Err(Error::MissingS0));
    }

    #[test]
    fn specialness() {
        assert!(is_special(&ManifoldDescriptor::sphere_product(&int(3), &int(4)).unwrap()).unwrap());
        assert!(!is_special(&ManifoldDescriptor::sphere_product(&int(1), &int(1)).unwrap()).unwrap());
        let b = SymBasis::with_symbols(vec![Symbol::new("beta", Rat::new(141.into(), 100.into()), Rat::new(142.into(), 100.into()))]).unwrap();
        let one = SymReal::from_int(&b, 1);
        let beta = SymReal::symbol(&b, 1);
        assert!(!is_special(&ManifoldDescriptor::sphere_product(&one, &beta).unwrap()).unwrap());
        // equal irrational factors: c1 = (2 / beta) sigma
        assert!(!is_special(&ManifoldDescriptor::sphere_product(&beta, &beta).unwrap()).unwrap());
        assert!(!is_special(&ManifoldDescriptor::aspherical()).unwrap());
    }

    #[test]
    fn shifts() {
        let m = ManifoldDescriptor::sphere_product(&int(3), &int(4)).unwrap();
        assert_eq!(shift_equiv(&m, &int(1), &[int(1)], &[int(2)]).unwrap(), ShiftVerdict::EquivalentForSmallA);
        let asph = ManifoldDescriptor::aspherical();
        assert!(matches!(shift_equiv(&asph, &int(1), &[int(1)], &[int(2)]).unwrap(), ShiftVerdict::NotImplied { .. }));
        assert_eq!(shift_equiv(&asph, &int(1), &[int(3)], &[int(3)]).unwrap(), ShiftVerdict::EquivalentForSmallA);
        // not special, and 1 is not in <1 - 2a> identically
        let m = ManifoldDescriptor::sphere_product(&int(1), &int(1)).unwrap();
        assert!(matches!(shift_equiv(&m, &int(1), &[int(1)], &[int(2)]).unwrap(), ShiftVerdict::NotImplied { .. }));
        assert!(matches!(shift_equiv(&m, &int(2), &[int(1)], &[int(2)]), Err(Error::InvalidInput(_))));
    }
}
