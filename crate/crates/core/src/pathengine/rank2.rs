use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::exactnum::{gl2z_word, glz_solve, Gl2Letter, SymReal};
use crate::oracle::bounded_low_search;

use super::rank1::same_group;
use super::{is_low_admissible, Ctx, Move, MoveKind, MovePath, PathBuilder};

/// Depth of the exact move-tree search used when the constructed path is not low.
pub(crate) const FALLBACK_DEPTH: usize = 8;

pub fn path_rank2_k2(d: &[SymReal], e: &[SymReal]) -> Result<MovePath> {
    path_rank2_ctx(d, e, &Ctx::default())
}

// Moves realising one letter on |x|, in terms of P_12, M_12, I_12 and their 21 versions.
fn letter_moves(letter: Gl2Letter, x: &mut [SymReal; 2], cur: &[SymReal]) -> Result<Vec<Move>> {
    let x2 = x[1].clone();
    match letter {
        Gl2Letter::I => {
            x.swap(0, 1);
            return Ok(vec![Move::swap(0, 1)]);
        }
        Gl2Letter::Q1 => {
            x[0] = x[0].neg();
            return Ok(Vec::new());
        }
        Gl2Letter::P => x[0] = x[0].add(&x2)?,
        Gl2Letter::PInv => x[0] = x[0].sub(&x2)?,
    }
    let new = x[0].abs()?;
    let (b, c) = (&cur[0], &cur[1]);
    if new == b.add(c)? {
        return Ok(vec![Move::p(0, 1)]);
    }
    Ok(match b.cmp(c)? {
        Ordering::Greater => vec![Move::m(0, 1)],
        // (b, c) -> (b, c - b) -> (c - b, b) -> (c - b, c)
        Ordering::Less => vec![Move::m(1, 0), Move::swap(0, 1), Move::p(1, 0)],
        Ordering::Equal => return Err(Error::Internal("rank-two vector with equal components".into())),
    })
}

// Rewrites into P_12 / M_12 / I moves and cancels adjacent inverse pairs.
fn reduce_special(moves: &[Move]) -> Vec<Move> {
    let mut stack: Vec<Move> = Vec::with_capacity(moves.len() * 3);
    let mut push = |m: Move| {
        if let Some(&top) = stack.last() {
            if top == m.inverse() {
                stack.pop();
                return;
            }
        }
        stack.push(m);
    };
    for &m in moves {
        match (m.kind, m.i) {
            (MoveKind::I, _) => push(Move::swap(0, 1)),
            (_, 0) => push(m),
            (_, _) => {
                push(Move::swap(0, 1));
                push(Move { kind: m.kind, i: 0, j: 1 });
                push(Move::swap(0, 1));
            }
        }
    }
    stack
}

pub(crate) fn path_rank2_ctx(d: &[SymReal], e: &[SymReal], ctx: &Ctx) -> Result<MovePath> {
    if d.len() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: d.len() });
    }
    let g = same_group(d, e)?;
    if g.rank() != 2 {
        return Err(Error::RankMismatch { expected: 2, found: g.rank() });
    }
    let a = glz_solve(d, e)?;
    let word = gl2z_word(&a)?;
    let mut x = [d[0].clone(), d[1].clone()];
    let mut b = PathBuilder::new(d.to_vec())?;
    for letter in word {
        ctx.check()?;
        let cur = b.current().to_vec();
        for m in letter_moves(letter, &mut x, &cur)? {
            b.push(m)?;
        }
        debug_assert_eq!(b.current(), &[x[0].abs()?, x[1].abs()?]);
    }
    let raw = b.finish();
    if raw.end() != e {
        return Err(Error::Internal("rank-two word does not reach the target".into()));
    }
    let path = MovePath::new(d.to_vec(), reduce_special(raw.moves()))?;
    if is_low_admissible(&path, d, e)? {
        return Ok(path);
    }
    match bounded_low_search(d, e, FALLBACK_DEPTH, ctx)? {
        Some(p) => Ok(p),
        None => Err(Error::InternalLownessFailure),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{Rat, SymBasis, Symbol};
    use std::sync::Arc;

    fn beta() -> Arc<SymBasis> {
        SymBasis::with_symbols(vec![Symbol::new("beta", Rat::new(141.into(), 100.into()), Rat::new(142.into(), 100.into()))])
            .unwrap()
    }

    fn r(b: &Arc<SymBasis>, c0: i64, c1: i64) -> SymReal {
        SymReal::new(b.clone(), vec![Rat::from_integer(c0.into()), Rat::from_integer(c1.into())]).unwrap()
    }

    #[test]
    fn single_letter_cases() {
        let b = beta();
        let d = vec![r(&b, 1, 0), r(&b, 0, 1)];
        let p = path_rank2_k2(&d, &[r(&b, 1, 1), r(&b, 0, 1)]).unwrap();
        assert_eq!(p.moves(), &[Move::p(0, 1)]);
        let p = path_rank2_k2(&d, &[r(&b, 0, 1), r(&b, 1, 0)]).unwrap();
        assert_eq!(p.moves(), &[Move::swap(0, 1)]);
    }

    #[test]
    fn longer_word_is_low() {
        let b = beta();
        let d = vec![r(&b, 1, 0), r(&b, 0, 1)];
        let e = vec![r(&b, -1, 1), r(&b, 1, 0)];
        let p = path_rank2_k2(&d, &e).unwrap();
        assert!(is_low_admissible(&p, &d, &e).unwrap());
        let e = vec![r(&b, 3, -2), r(&b, -1, 1)];
        let p = path_rank2_k2(&d, &e).unwrap();
        assert!(is_low_admissible(&p, &d, &e).unwrap());
    }

    #[test]
    fn rank_must_be_two() {
        let t = SymBasis::trivial();
        let d = vec![SymReal::from_int(&t, 2), SymReal::from_int(&t, 3)];
        assert!(matches!(path_rank2_k2(&d, &d), Err(Error::RankMismatch { .. })));
    }
}
