use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

use super::intmat::{self, IntMatrix};
use super::symreal::{same_basis, SymBasis, SymReal};
use super::Rat;

/// A finitely generated subgroup of the real line, in canonical HNF.
///
/// Rows are coefficient vectors over the basis. The HNF is computed on the integer lattice
/// obtained by clearing denominators and scaled back, so two modules are equal as subgroups
/// exactly when their `rows` are identical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZModule {
    basis: Arc<SymBasis>,
    rows: Vec<Vec<Rat>>,
    pivots: Vec<usize>,
}

fn common_denominator<'a>(coeffs: impl Iterator<Item = &'a Rat>) -> BigInt {
    coeffs.fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
}

impl ZModule {
    /// The trivial subgroup.
    pub fn trivial(basis: &Arc<SymBasis>) -> ZModule {
        ZModule { basis: basis.clone(), rows: Vec::new(), pivots: Vec::new() }
    }

    /// Canonical HNF of the subgroup generated by `gens`; zero generators are ignored.
    pub fn from_generators(basis: &Arc<SymBasis>, gens: &[SymReal]) -> Result<ZModule> {
        for g in gens {
            if !same_basis(basis, g.basis()) {
                return Err(Error::BasisMismatch);
            }
        }
        let cols = basis.len();
        let den = common_denominator(gens.iter().flat_map(|g| g.coeffs().iter()));
        let den_r = Rat::from_integer(den.clone());
        let m: IntMatrix = gens
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| g.coeffs().iter().map(|c| (c * &den_r).to_integer()).collect())
            .collect();
        let (h, pivots) = intmat::hnf(&m, cols);
        let rows = h
            .into_iter()
            .map(|row| row.into_iter().map(|x| Rat::new(x, den.clone())).collect())
            .collect();
        Ok(ZModule { basis: basis.clone(), rows, pivots })
    }

    pub fn basis(&self) -> &Arc<SymBasis> {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Rat>] {
        &self.rows
    }

    /// The HNF rows as reals.
    pub fn generators(&self) -> Vec<SymReal> {
        self.rows
            .iter()
            .map(|r| SymReal::new(self.basis.clone(), r.clone()).expect("row length matches basis"))
            .collect()
    }

    fn check_basis(&self, b: &Arc<SymBasis>) -> Result<()> {
        if same_basis(&self.basis, b) {
            Ok(())
        } else {
            Err(Error::BasisMismatch)
        }
    }

    /// Integer coordinates of `x` in the HNF basis, or `None` when `x` is not a member.
    pub fn coordinates(&self, x: &SymReal) -> Result<Option<Vec<BigInt>>> {
        self.check_basis(x.basis())?;
        let mut rest: Vec<Rat> = x.coeffs().to_vec();
        let mut coords = Vec::with_capacity(self.rows.len());
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            // entries before the pivot must already be cleared
            if rest[..p].iter().any(|c| !c.is_zero()) {
                return Ok(None);
            }
            let q = &rest[p] / &row[p];
            if !q.is_integer() {
                return Ok(None);
            }
            if !q.is_zero() {
                for (r, h) in rest.iter_mut().zip(row) {
                    *r -= &q * h;
                }
            }
            coords.push(q.to_integer());
        }
        if rest.iter().any(|c| !c.is_zero()) {
            return Ok(None);
        }
        Ok(Some(coords))
    }

    pub fn contains(&self, x: &SymReal) -> Result<bool> {
        Ok(self.coordinates(x)?.is_some())
    }

    /// The element with the given coordinates in the HNF basis.
    pub fn element(&self, coords: &[BigInt]) -> SymReal {
        let mut acc = vec![Rat::zero(); self.basis.len()];
        for (c, row) in coords.iter().zip(&self.rows) {
            if c.is_zero() {
                continue;
            }
            let c = Rat::from_integer(c.clone());
            for (a, h) in acc.iter_mut().zip(row) {
                *a += &c * h;
            }
        }
        SymReal::new(self.basis.clone(), acc).expect("row length matches basis")
    }

    pub fn is_submodule_of(&self, other: &ZModule) -> Result<bool> {
        other.check_basis(&self.basis)?;
        for g in self.generators() {
            if !other.contains(&g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn coordinates_of_member(&self, x: &SymReal) -> Result<Vec<BigInt>> {
        self.coordinates(x)?.ok_or(Error::NotMember)
    }

    /// Whether the nonzero member `x` is primitive, i.e. its coordinates have content 1.
    pub fn is_primitive(&self, x: &SymReal) -> Result<bool> {
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        let c = self.coordinates_of_member(x)?;
        Ok(intmat::content(&c).is_one())
    }

    /// `{x in self : n x in sub for some n != 0}`.
    pub fn saturate(&self, sub: &ZModule) -> Result<ZModule> {
        if !sub.is_submodule_of(self)? {
            return Err(Error::NotSubmodule);
        }
        let m = self.rank();
        let coords: IntMatrix =
            sub.generators().iter().map(|g| self.coordinates_of_member(g)).collect::<Result<_>>()?;
        let sat_coords = if coords.is_empty() {
            Vec::new()
        } else {
            let kernel = intmat::right_kernel(&coords, m);
            if kernel.is_empty() {
                intmat::identity(m)
            } else {
                intmat::right_kernel(&kernel, m)
            }
        };
        let gens: Vec<SymReal> = sat_coords.iter().map(|c| self.element(c)).collect();
        ZModule::from_generators(&self.basis, &gens)
    }

    /// A complement `L` of the primitive element `x`: `self = <x> (+) L`.
    pub fn complement(&self, x: &SymReal) -> Result<ZModule> {
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        let c = self.coordinates_of_member(x)?;
        if !intmat::content(&c).is_one() {
            return Err(Error::NotPrimitive);
        }
        // column vector c: T c = e_1, so c is the first column of T^-1
        let col: IntMatrix = c.iter().map(|v| vec![v.clone()]).collect();
        let d = intmat::hnf_with_transform(&col, 1);
        debug_assert!(d.h[0][0].is_one());
        let m = self.rank();
        let gens: Vec<SymReal> = (1..m)
            .map(|j| {
                let coords: Vec<BigInt> = (0..m).map(|i| d.t_inv[i][j].clone()).collect();
                self.element(&coords)
            })
            .collect();
        ZModule::from_generators(&self.basis, &gens)
    }

    /// Writes the member `v` as `n * x + rest` with `rest` in `complement`, where
    /// `self = <x> (+) complement`.
    pub fn split(&self, v: &SymReal, x: &SymReal, complement: &ZModule) -> Result<(BigInt, SymReal)> {
        let m = self.rank();
        let mut change: IntMatrix = Vec::with_capacity(m);
        change.push(self.coordinates_of_member(x)?);
        for g in complement.generators() {
            change.push(self.coordinates_of_member(&g)?);
        }
        if change.len() != m {
            return Err(Error::RankMismatch { expected: m, found: change.len() });
        }
        let inv = intmat::unimodular_inverse(&change)
            .ok_or_else(|| Error::HypothesisViolated("x and the complement do not form a basis".into()))?;
        let cv = self.coordinates_of_member(v)?;
        // coordinates in the new basis: cv * inv
        let mut n = BigInt::zero();
        for (i, c) in cv.iter().enumerate() {
            n += c * &inv[i][0];
        }
        let rest = v.add_multiple(&(-&n), x)?;
        Ok((n, rest))
    }
}
