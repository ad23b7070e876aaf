use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{sort_reals, SymReal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MoveKind {
    /// `v_i += v_j`
    P,
    /// `v_i -= v_j`
    M,
    /// swap `v_i` and `v_j`
    I,
}

/// One step of an admissible path. Indices are 0-based; they print 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Move {
    pub kind: MoveKind,
    pub i: usize,
    pub j: usize,
}

impl Move {
    pub fn p(i: usize, j: usize) -> Move {
        Move { kind: MoveKind::P, i, j }
    }

    pub fn m(i: usize, j: usize) -> Move {
        Move { kind: MoveKind::M, i, j }
    }

    pub fn swap(i: usize, j: usize) -> Move {
        Move { kind: MoveKind::I, i, j }
    }

    pub fn inverse(self) -> Move {
        let kind = match self.kind {
            MoveKind::P => MoveKind::M,
            MoveKind::M => MoveKind::P,
            MoveKind::I => MoveKind::I,
        };
        Move { kind, ..self }
    }

    pub fn validate(self, k: usize) -> Result<()> {
        if self.i == self.j || self.i >= k || self.j >= k {
            return Err(Error::InvalidMove(format!("{} on a vector of length {}", self, k)));
        }
        Ok(())
    }

    /// Applies the move in place, refusing non-positive results.
    pub fn apply(self, v: &mut [SymReal]) -> Result<()> {
        self.validate(v.len())?;
        let (i, j) = (self.i, self.j);
        match self.kind {
            MoveKind::P => v[i] = v[i].add(&v[j])?,
            MoveKind::M => {
                if v[i].cmp(&v[j])? != Ordering::Greater {
                    return Err(Error::NonPositiveResult { step: self.to_string() });
                }
                v[i] = v[i].sub(&v[j])?;
            }
            MoveKind::I => v.swap(i, j),
        }
        Ok(())
    }

    /// Integer version; `false` when an M-move would leave the positive orthant.
    pub fn apply_int(self, v: &mut [i64]) -> bool {
        let (i, j) = (self.i, self.j);
        match self.kind {
            MoveKind::P => v[i] += v[j],
            MoveKind::M => {
                if v[i] <= v[j] {
                    return false;
                }
                v[i] -= v[j];
            }
            MoveKind::I => v.swap(i, j),
        }
        true
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}_{}{}", self.kind, self.i + 1, self.j + 1)
    }
}

pub fn apply_move(v: &[SymReal], m: Move) -> Result<Vec<SymReal>> {
    let mut w = v.to_vec();
    m.apply(&mut w)?;
    Ok(w)
}

/// An admissible path with all of its intermediate vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MovePath {
    moves: Vec<Move>,
    states: Vec<Vec<SymReal>>,
}

impl MovePath {
    pub fn new(start: Vec<SymReal>, moves: Vec<Move>) -> Result<MovePath> {
        let mut b = PathBuilder::new(start)?;
        for m in moves {
            b.push(m)?;
        }
        Ok(b.finish())
    }

    pub fn empty(start: Vec<SymReal>) -> Result<MovePath> {
        MovePath::new(start, Vec::new())
    }

    pub fn start(&self) -> &[SymReal] {
        &self.states[0]
    }

    pub fn end(&self) -> &[SymReal] {
        self.states.last().expect("a path has at least one state")
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn states(&self) -> &[Vec<SymReal>] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// The same path walked backwards: P and M trade places, I is unchanged.
    pub fn reversed(&self) -> MovePath {
        MovePath {
            moves: self.moves.iter().rev().map(|m| m.inverse()).collect(),
            states: self.states.iter().rev().cloned().collect(),
        }
    }

    pub fn concat(mut self, other: MovePath) -> Result<MovePath> {
        if self.end() != other.start() {
            return Err(Error::Internal("concatenated paths do not meet".into()));
        }
        self.moves.extend(other.moves);
        self.states.extend(other.states.into_iter().skip(1));
        Ok(self)
    }

    /// Appends a constant component to every state.
    pub(crate) fn with_appended(&self, x: &SymReal) -> MovePath {
        MovePath {
            moves: self.moves.clone(),
            states: self
                .states
                .iter()
                .map(|s| {
                    let mut s = s.clone();
                    s.push(x.clone());
                    s
                })
                .collect(),
        }
    }
}

/// Incremental path construction with positivity checks on every step.
pub(crate) struct PathBuilder {
    moves: Vec<Move>,
    states: Vec<Vec<SymReal>>,
}

impl PathBuilder {
    pub fn new(start: Vec<SymReal>) -> Result<PathBuilder> {
        for (i, x) in start.iter().enumerate() {
            if !x.is_positive()? {
                return Err(Error::InvalidInput(format!("component {} of the start vector is not positive", i + 1)));
            }
        }
        Ok(PathBuilder { moves: Vec::new(), states: vec![start] })
    }

    pub fn current(&self) -> &[SymReal] {
        self.states.last().expect("a path has at least one state")
    }

    pub fn push(&mut self, m: Move) -> Result<()> {
        let next = apply_move(self.current(), m)?;
        self.moves.push(m);
        self.states.push(next);
        Ok(())
    }

    pub fn push_n(&mut self, m: Move, n: u64) -> Result<()> {
        for _ in 0..n {
            self.push(m)?;
        }
        Ok(())
    }

    pub fn finish(self) -> MovePath {
        MovePath { moves: self.moves, states: self.states }
    }
}

fn sorted(v: &[SymReal]) -> Result<Vec<SymReal>> {
    let mut s = v.to_vec();
    sort_reals(&mut s)?;
    Ok(s)
}

fn sorted_leq(v: &[SymReal], w: &[SymReal]) -> Result<bool> {
    for (x, y) in v.iter().zip(w) {
        if x.cmp(y)? == Ordering::Greater {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `v <= w` up to a permutation: sorted `v` is componentwise below sorted `w`.
pub fn leq_perm(v: &[SymReal], w: &[SymReal]) -> Result<bool> {
    if v.len() != w.len() {
        return Err(Error::DimensionMismatch { expected: w.len(), found: v.len() });
    }
    sorted_leq(&sorted(v)?, &sorted(w)?)
}

/// Index of the first state that is below neither endpoint.
pub(crate) fn first_high_state(states: &[Vec<SymReal>], d: &[SymReal], e: &[SymReal]) -> Result<Option<usize>> {
    let (sd, se) = (sorted(d)?, sorted(e)?);
    for (idx, s) in states.iter().enumerate() {
        let ss = sorted(s)?;
        if !sorted_leq(&ss, &sd)? && !sorted_leq(&ss, &se)? {
            return Ok(Some(idx));
        }
    }
    Ok(None)
}

/// The path runs from `d` to `e` and every state is `<= d` or `<= e`.
pub fn is_low_admissible(p: &MovePath, d: &[SymReal], e: &[SymReal]) -> Result<bool> {
    if p.start() != d || p.end() != e {
        return Ok(false);
    }
    for s in p.states() {
        for x in s {
            if !x.is_positive()? {
                return Ok(false);
            }
        }
    }
    Ok(first_high_state(p.states(), d, e)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::SymBasis;

    fn v(x: &[i64]) -> Vec<SymReal> {
        let b = SymBasis::trivial();
        x.iter().map(|&y| SymReal::from_int(&b, y)).collect()
    }

    #[test]
    fn moves_apply() {
        assert_eq!(apply_move(&v(&[1, 1]), Move::p(1, 0)).unwrap(), v(&[1, 2]));
        assert_eq!(apply_move(&v(&[2, 3]), Move::m(1, 0)).unwrap(), v(&[2, 1]));
        assert!(matches!(apply_move(&v(&[2, 3]), Move::m(0, 1)), Err(Error::NonPositiveResult { .. })));
        assert!(matches!(apply_move(&v(&[2, 3]), Move::m(0, 0)), Err(Error::InvalidMove(_))));
        assert_eq!(Move::m(1, 0).to_string(), "M_21");
    }

    #[test]
    fn permutation_order() {
        assert!(leq_perm(&v(&[2, 1]), &v(&[1, 3])).unwrap());
        assert!(!leq_perm(&v(&[1, 3]), &v(&[2, 2])).unwrap());
        assert!(leq_perm(&v(&[4, 5]), &v(&[4, 5])).unwrap());
    }

    #[test]
    fn lowness() {
        let p = MovePath::new(v(&[2, 4]), vec![Move::m(1, 0)]).unwrap();
        assert!(is_low_admissible(&p, &v(&[2, 4]), &v(&[2, 2])).unwrap());
        let p = MovePath::new(v(&[1, 1]), vec![Move::p(1, 0)]).unwrap();
        assert!(is_low_admissible(&p, &v(&[1, 1]), &v(&[1, 2])).unwrap());
        let p = MovePath::new(v(&[1, 1]), vec![Move::p(0, 1), Move::m(0, 1)]).unwrap();
        assert!(!is_low_admissible(&p, &v(&[1, 1]), &v(&[1, 1])).unwrap());
    }

    #[test]
    fn reversal() {
        let p = MovePath::new(v(&[2, 3]), vec![Move::m(1, 0), Move::swap(0, 1), Move::p(1, 0)]).unwrap();
        let r = p.reversed();
        assert_eq!(r.start(), p.end());
        assert_eq!(MovePath::new(r.start().to_vec(), r.moves().to_vec()).unwrap(), r);
    }
}
