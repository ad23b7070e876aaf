use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exactnum::{glz_elementary_word, glz_solve, reduce_quotient, ElemLetter, SymReal};

use super::rank1::same_group;
use super::{Ctx, Move, MovePath, PathBuilder};

fn count(q: &BigInt) -> Result<u64> {
    q.to_u64().ok_or_else(|| Error::Internal(format!("repetition count {} out of range", q)))
}

/// Subtracts `v_i` from every other component until it lies in `(0, v_i]`.
fn reduce_against(v: &[SymReal], i: usize, ctx: &Ctx) -> Result<MovePath> {
    let mut b = PathBuilder::new(v.to_vec())?;
    for j in 0..v.len() {
        if j == i {
            continue;
        }
        ctx.check()?;
        let q = reduce_quotient(&v[j], &v[i])?;
        b.push_n(Move::m(j, i), count(&q)?)?;
    }
    Ok(b.finish())
}

struct Gadgets<'a> {
    b: PathBuilder,
    pivot: usize,
    c: &'a SymReal,
}

impl Gadgets<'_> {
    // x_p -> c - x_p, passing only through vectors bounded by c
    fn flip(&mut self, p: usize) -> Result<()> {
        if &self.b.current()[p] == self.c {
            return Ok(());
        }
        self.b.push(Move::m(self.pivot, p))?;
        self.b.push(Move::swap(p, self.pivot))?;
        self.b.push(Move::p(self.pivot, p))
    }

    // x_p -> x_p + x_q reduced into (0, c]
    fn add(&mut self, p: usize, q: usize) -> Result<()> {
        let cur = self.b.current();
        if cur[p].add(&cur[q])?.cmp(self.c)? != Ordering::Greater {
            return self.b.push(Move::p(p, q));
        }
        if &cur[q] == self.c {
            return Ok(());
        }
        self.flip(q)?;
        self.b.push(Move::m(p, q))?;
        self.flip(q)
    }
}

/// The three pieces of the shared-pivot construction: descent of `d`, the bounded gadget
/// path, and the reversed descent of `e`.
pub(crate) fn shared_segments(
    d: &[SymReal],
    e: &[SymReal],
    i: usize,
    ctx: &Ctx,
) -> Result<(MovePath, MovePath, MovePath)> {
    let g = same_group(d, e)?;
    let k = d.len();
    if i >= k {
        return Err(Error::InvalidInput(format!("pivot index {} out of range", i + 1)));
    }
    let c = &d[i];
    if &e[i] != c {
        return Err(Error::HypothesisViolated("the pivot components differ".into()));
    }
    for x in d {
        if x.cmp(c)? == Ordering::Less {
            return Err(Error::HypothesisViolated("the pivot is not minimal in the start vector".into()));
        }
    }
    if !g.is_primitive(c)? {
        return Err(Error::HypothesisViolated("the pivot is not primitive".into()));
    }

    if d == e {
        let p = MovePath::empty(d.to_vec())?;
        return Ok((p.clone(), p.clone(), p));
    }

    let down = reduce_against(d, i, ctx)?;
    let up = reduce_against(e, i, ctx)?;
    let others: Vec<usize> = (0..k).filter(|&j| j != i).collect();

    // coordinates along a complement of <c>
    let lambda = g.complement(c)?;
    let project = |v: &[SymReal]| -> Result<Vec<SymReal>> {
        others.iter().map(|&j| Ok(g.split(&v[j], c, &lambda)?.1)).collect()
    };
    let a = glz_solve(&project(down.end())?, &project(up.end())?)?;
    let word = glz_elementary_word(&a)?;

    let mut gad = Gadgets { b: PathBuilder::new(down.end().to_vec())?, pivot: i, c };
    for letter in word {
        ctx.check()?;
        match letter {
            ElemLetter::Swap(p, q) => gad.b.push(Move::swap(others[p], others[q]))?,
            ElemLetter::Q(p) => gad.flip(others[p])?,
            ElemLetter::Add(p, q) => gad.add(others[p], others[q])?,
        }
    }
    let mid = gad.b.finish();
    if mid.end() != up.end() {
        return Err(Error::Internal("gadget path does not reach the reduced target".into()));
    }
    Ok((down, mid, up.reversed()))
}

pub fn path_shared_primitive(d: &[SymReal], e: &[SymReal], i: usize) -> Result<MovePath> {
    shared_ctx(d, e, i, &Ctx::default())
}

pub(crate) fn shared_ctx(d: &[SymReal], e: &[SymReal], i: usize, ctx: &Ctx) -> Result<MovePath> {
    let (down, mid, up) = shared_segments(d, e, i, ctx)?;
    down.concat(mid)?.concat(up)
}
