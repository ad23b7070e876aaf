//! Unimodular matrices, solving `A u = v` over GL(l, Z), and words in elementary generators.
//!
//! Words are stored in application order: `[L1, .., Lr]` stands for the product `Lr * .. * L1`,
//! i.e. `L1` acts on a column vector first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::intmat::{self, IntMatrix};
use super::symreal::SymReal;
use super::zmodule::ZModule;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnimodularMatrix {
    entries: IntMatrix,
    det: i8,
}

impl UnimodularMatrix {
    pub fn new(entries: IntMatrix) -> Result<UnimodularMatrix> {
        let k = entries.len();
        if entries.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidInput("matrix is not square".into()));
        }
        let d = intmat::det(&entries);
        let det = if d.is_one() {
            1
        } else if (-&d).is_one() {
            -1
        } else {
            return Err(Error::NotUnimodular(d.to_string()));
        };
        Ok(UnimodularMatrix { entries, det })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<UnimodularMatrix> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn identity(k: usize) -> UnimodularMatrix {
        UnimodularMatrix { entries: intmat::identity(k), det: 1 }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &IntMatrix {
        &self.entries
    }

    pub fn det(&self) -> i8 {
        self.det
    }

    pub fn mul(&self, other: &UnimodularMatrix) -> UnimodularMatrix {
        UnimodularMatrix { entries: intmat::mul(&self.entries, &other.entries), det: self.det * other.det }
    }

    pub fn inverse(&self) -> UnimodularMatrix {
        let inv = intmat::unimodular_inverse(&self.entries).expect("unimodular matrices are invertible");
        UnimodularMatrix { entries: inv, det: self.det }
    }

    /// `A u` for a column vector of reals.
    pub fn apply(&self, u: &[SymReal]) -> Result<Vec<SymReal>> {
        if u.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: u.len() });
        }
        let Some(first) = u.first() else { return Ok(Vec::new()) };
        self.entries
            .iter()
            .map(|row| {
                let mut acc = SymReal::zero(first.basis());
                for (c, x) in row.iter().zip(u) {
                    if !c.is_zero() {
                        acc = acc.add_multiple(c, x)?;
                    }
                }
                Ok(acc)
            })
            .collect()
    }

    /// `A u` for an integer vector.
    pub fn apply_int(&self, u: &[BigInt]) -> Vec<BigInt> {
        self.entries.iter().map(|row| row.iter().zip(u).map(|(a, b)| a * b).sum()).collect()
    }
}

/// Some `A` in GL(l, Z) with `A u = v`, provided `<u> = <v>`.
pub fn glz_solve(u: &[SymReal], v: &[SymReal]) -> Result<UnimodularMatrix> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch { expected: u.len(), found: v.len() });
    }
    let l = u.len();
    let Some(first) = u.first() else { return Ok(UnimodularMatrix::identity(0)) };
    let basis = first.basis();
    let g = ZModule::from_generators(basis, u)?;
    let h = ZModule::from_generators(basis, v)?;
    if g != h {
        return Err(Error::GroupMismatch);
    }
    let r = g.rank();
    let a = if r == 0 {
        UnimodularMatrix::identity(l)
    } else {
        let coords = |w: &[SymReal]| -> Result<IntMatrix> {
            w.iter().map(|x| g.coordinates(x)?.ok_or(Error::NotMember)).collect()
        };
        // Tu Cu = [I; 0] = Tv Cv, so Cv = Tv^-1 Tu Cu.
        let du = intmat::hnf_with_transform(&coords(u)?, r);
        let dv = intmat::hnf_with_transform(&coords(v)?, r);
        UnimodularMatrix::new(intmat::mul(&dv.t_inv, &du.t))?
    };
    if a.apply(u)? != v {
        return Err(Error::Internal("glz_solve produced a matrix with A u != v".into()));
    }
    Ok(a)
}

/// Letters of a GL(2, Z) word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gl2Letter {
    /// `[[1, 1], [0, 1]]`
    P,
    /// `[[1, -1], [0, 1]]`
    PInv,
    /// `[[0, 1], [1, 0]]`
    I,
    /// `[[-1, 0], [0, 1]]`
    Q1,
}

impl Gl2Letter {
    pub fn matrix(self) -> UnimodularMatrix {
        let m: &[&[i64]] = match self {
            Gl2Letter::P => &[&[1, 1], &[0, 1]],
            Gl2Letter::PInv => &[&[1, -1], &[0, 1]],
            Gl2Letter::I => &[&[0, 1], &[1, 0]],
            Gl2Letter::Q1 => &[&[-1, 0], &[0, 1]],
        };
        UnimodularMatrix::from_i64(m).expect("generators are unimodular")
    }

    pub fn inverse(self) -> Gl2Letter {
        match self {
            Gl2Letter::P => Gl2Letter::PInv,
            Gl2Letter::PInv => Gl2Letter::P,
            l => l,
        }
    }
}

/// Product `Lr * .. * L1` of a word in application order.
pub fn gl2_word_product(word: &[Gl2Letter]) -> UnimodularMatrix {
    word.iter().fold(UnimodularMatrix::identity(2), |acc, l| l.matrix().mul(&acc))
}

// Row operations on a 2x2 matrix, each recorded as the letter multiplied on the left.
struct Gl2Reducer {
    m: [[BigInt; 2]; 2],
    ops: Vec<Gl2Letter>,
}

impl Gl2Reducer {
    fn push(&mut self, l: Gl2Letter) {
        let [r0, r1] = &mut self.m;
        match l {
            Gl2Letter::P => {
                for c in 0..2 {
                    r0[c] = &r0[c] + &r1[c];
                }
            }
            Gl2Letter::PInv => {
                for c in 0..2 {
                    r0[c] = &r0[c] - &r1[c];
                }
            }
            Gl2Letter::I => std::mem::swap(r0, r1),
            Gl2Letter::Q1 => {
                for c in 0..2 {
                    r0[c] = -&r0[c];
                }
            }
        }
        self.ops.push(l);
    }

    // row0 -= q * row1
    fn sub_multiple(&mut self, q: &BigInt) {
        let letter = if q.is_positive() { Gl2Letter::PInv } else { Gl2Letter::P };
        let mut n = q.abs();
        while n.is_positive() {
            self.push(letter);
            n -= 1;
        }
    }
}

/// A word over `{P, P^-1, I, Q1}` whose product is `a`.
pub fn gl2z_word(a: &UnimodularMatrix) -> Result<Vec<Gl2Letter>> {
    if a.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: a.dim() });
    }
    let e = a.entries();
    let mut red = Gl2Reducer {
        m: [[e[0][0].clone(), e[0][1].clone()], [e[1][0].clone(), e[1][1].clone()]],
        ops: Vec::new(),
    };
    // Euclid on the first column
    while !red.m[1][0].is_zero() {
        let q = &red.m[0][0] / &red.m[1][0];
        red.sub_multiple(&q);
        red.push(Gl2Letter::I);
    }
    if red.m[0][0].is_negative() {
        red.push(Gl2Letter::Q1);
    }
    if red.m[1][1].is_negative() {
        // negate the second row
        red.push(Gl2Letter::I);
        red.push(Gl2Letter::Q1);
        red.push(Gl2Letter::I);
    }
    let b = red.m[0][1].clone();
    red.sub_multiple(&b);
    debug_assert!(red.m[0][0].is_one() && red.m[1][1].is_one() && red.m[0][1].is_zero());
    // G_t .. G_1 A = 1, so A = G_1^-1 .. G_t^-1
    let word: Vec<Gl2Letter> = red.ops.iter().rev().map(|l| l.inverse()).collect();
    if &gl2_word_product(&word) != a {
        return Err(Error::Internal("GL(2,Z) word does not reproduce the matrix".into()));
    }
    Ok(word)
}

/// Elementary generators of GL(k, Z), 0-based indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElemLetter {
    /// `x_j -> -x_j`
    Q(usize),
    /// `x_i <-> x_j`
    Swap(usize, usize),
    /// `x_i -> x_i + x_j`
    Add(usize, usize),
}

impl ElemLetter {
    pub fn apply_int(self, x: &mut [BigInt]) {
        match self {
            ElemLetter::Q(j) => x[j] = -&x[j],
            ElemLetter::Swap(i, j) => x.swap(i, j),
            ElemLetter::Add(i, j) => {
                let xj = x[j].clone();
                x[i] += xj;
            }
        }
    }

    pub fn matrix(self, k: usize) -> UnimodularMatrix {
        // columns are images of the unit vectors
        let mut m = intmat::identity(k);
        for (c, unit) in intmat::identity(k).into_iter().enumerate() {
            let mut v = unit;
            self.apply_int(&mut v);
            for (r, x) in v.into_iter().enumerate() {
                m[r][c] = x;
            }
        }
        UnimodularMatrix::new(m).expect("generators are unimodular")
    }
}

pub fn elementary_word_product(word: &[ElemLetter], k: usize) -> UnimodularMatrix {
    word.iter().fold(UnimodularMatrix::identity(k), |acc, l| l.matrix(k).mul(&acc))
}

// Left row operations recorded as words; `Sub` expands to Q_j Add Q_j.
struct ElemReducer {
    m: IntMatrix,
    ops: Vec<Vec<ElemLetter>>,
}

impl ElemReducer {
    fn record(&mut self, letters: Vec<ElemLetter>) {
        for &l in &letters {
            // acting on the left = acting on every column
            let k = self.m.len();
            for c in 0..k {
                let mut col: Vec<BigInt> = self.m.iter().map(|r| r[c].clone()).collect();
                l.apply_int(&mut col);
                for (r, x) in col.into_iter().enumerate() {
                    self.m[r][c] = x;
                }
            }
        }
        self.ops.push(letters);
    }

    // row_i -= q * row_j
    fn sub_multiple(&mut self, i: usize, j: usize, q: &BigInt) {
        let step = if q.is_positive() {
            vec![ElemLetter::Q(j), ElemLetter::Add(i, j), ElemLetter::Q(j)]
        } else {
            vec![ElemLetter::Add(i, j)]
        };
        let mut n = q.abs();
        while n.is_positive() {
            self.record(step.clone());
            n -= 1;
        }
    }
}

fn inverse_word(letters: &[ElemLetter]) -> Vec<ElemLetter> {
    match letters {
        [ElemLetter::Add(i, j)] => vec![ElemLetter::Q(*j), ElemLetter::Add(*i, *j), ElemLetter::Q(*j)],
        [ElemLetter::Q(_), ElemLetter::Add(i, j), ElemLetter::Q(_)] => vec![ElemLetter::Add(*i, *j)],
        // Q and Swap are involutions
        other => other.to_vec(),
    }
}

/// A word over `{Q_j, I_ij, P_ij}` whose product is `a`.
pub fn glz_elementary_word(a: &UnimodularMatrix) -> Result<Vec<ElemLetter>> {
    let k = a.dim();
    let mut red = ElemReducer { m: a.entries().clone(), ops: Vec::new() };
    for c in 0..k {
        loop {
            let rows: Vec<usize> = (c..k).filter(|&r| !red.m[r][c].is_zero()).collect();
            let Some(&best) = rows.iter().min_by_key(|&&r| red.m[r][c].abs()) else {
                return Err(Error::NotUnimodular("0".into()));
            };
            if best != c {
                red.record(vec![ElemLetter::Swap(c, best)]);
            }
            if rows.len() == 1 {
                break;
            }
            for r in c + 1..k {
                if !red.m[r][c].is_zero() {
                    let q = &red.m[r][c] / &red.m[c][c];
                    red.sub_multiple(r, c, &q);
                }
            }
        }
        if !red.m[c][c].abs().is_one() {
            return Err(Error::NotUnimodular(intmat::det(a.entries()).to_string()));
        }
        if red.m[c][c].is_negative() {
            red.record(vec![ElemLetter::Q(c)]);
        }
    }
    // upper triangular with unit diagonal: clear above the diagonal
    for c in (0..k).rev() {
        for r in 0..c {
            let q = red.m[r][c].clone();
            red.sub_multiple(r, c, &q);
        }
    }
    debug_assert_eq!(red.m, intmat::identity(k));
    let word: Vec<ElemLetter> = red.ops.iter().rev().flat_map(|g| inverse_word(g)).collect();
    if &elementary_word_product(&word, k) != a {
        return Err(Error::Internal("elementary word does not reproduce the matrix".into()));
    }
    Ok(word)
}

/// Content of an integer vector (gcd of the entries).
pub fn int_content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}
