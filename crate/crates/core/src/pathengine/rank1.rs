use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::exactnum::{SymReal, ZModule};

use super::{Ctx, Move, MovePath, PathBuilder};

pub(crate) fn group_of(v: &[SymReal]) -> Result<ZModule> {
    let first = v.first().ok_or_else(|| Error::InvalidInput("empty vector".into()))?;
    ZModule::from_generators(first.basis(), v)
}

pub(crate) fn same_group(d: &[SymReal], e: &[SymReal]) -> Result<ZModule> {
    if d.len() != e.len() {
        return Err(Error::DimensionMismatch { expected: d.len(), found: e.len() });
    }
    let g = group_of(d)?;
    if g != group_of(e)? {
        return Err(Error::GroupMismatch);
    }
    Ok(g)
}

/// Moves taking integer coordinates to the constant vector: subtract the first minimum from
/// the first maximum until all entries agree.
pub(crate) fn descent_moves(mut q: Vec<BigInt>, ctx: &Ctx) -> Result<Vec<Move>> {
    let mut moves = Vec::new();
    loop {
        let mut hi = 0;
        let mut lo = 0;
        for t in 1..q.len() {
            if q[t] > q[hi] {
                hi = t;
            }
            if q[t] < q[lo] {
                lo = t;
            }
        }
        if q[hi] == q[lo] {
            return Ok(moves);
        }
        if moves.len() % 4096 == 0 {
            ctx.check()?;
        }
        q[hi] = &q[hi] - &q[lo];
        moves.push(Move::m(hi, lo));
    }
}

/// Path from `v` down to `(g, .., g)` where `g > 0` generates the rank-one group `group`.
pub(crate) fn descend_to_generator(v: &[SymReal], group: &ZModule, ctx: &Ctx) -> Result<MovePath> {
    let mut coords = Vec::with_capacity(v.len());
    for x in v {
        coords.push(group.coordinates(x)?.ok_or(Error::NotMember)?.remove(0));
    }
    // a positive generator gives positive coordinates
    if coords[0].is_negative() {
        for c in coords.iter_mut() {
            *c = -&*c;
        }
    }
    let mut b = PathBuilder::new(v.to_vec())?;
    for m in descent_moves(coords, ctx)? {
        b.push(m)?;
    }
    Ok(b.finish())
}

pub fn path_rank1(d: &[SymReal], e: &[SymReal]) -> Result<MovePath> {
    path_rank1_ctx(d, e, &Ctx::default())
}

pub(crate) fn path_rank1_ctx(d: &[SymReal], e: &[SymReal], ctx: &Ctx) -> Result<MovePath> {
    let g = same_group(d, e)?;
    if g.rank() != 1 {
        return Err(Error::RankMismatch { expected: 1, found: g.rank() });
    }
    let down = descend_to_generator(d, &g, ctx)?;
    let up = descend_to_generator(e, &g, ctx)?.reversed();
    down.concat(up)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::SymBasis;
    use crate::pathengine::is_low_admissible;

    fn v(x: &[i64]) -> Vec<SymReal> {
        let b = SymBasis::trivial();
        x.iter().map(|&y| SymReal::from_int(&b, y)).collect()
    }

    #[test]
    fn small_rank_one_paths() {
        let p = path_rank1(&v(&[4, 6]), &v(&[2, 2])).unwrap();
        assert_eq!(p.moves(), &[Move::m(1, 0), Move::m(0, 1)]);
        assert_eq!(p.states()[1], v(&[4, 2]));
        let p = path_rank1(&v(&[2, 3]), &v(&[1, 1])).unwrap();
        assert_eq!(p.moves(), &[Move::m(1, 0), Move::m(0, 1)]);
        assert!(path_rank1(&v(&[3, 3]), &v(&[3, 3])).unwrap().is_empty());
        let p = path_rank1(&v(&[2, 3]), &v(&[5, 3])).unwrap();
        assert!(is_low_admissible(&p, &v(&[2, 3]), &v(&[5, 3])).unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(path_rank1(&v(&[2, 4]), &v(&[3, 3])), Err(Error::GroupMismatch));
    }
}
