use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exactnum::{argmin, reduce_quotient, sort_reals, Rat, SymReal, ZModule};

use super::lowpath::low_path_ctx;
use super::rank1::{descend_to_generator, group_of};
use super::{Ctx, Move, MovePath, PathBuilder};

/// Cap on the basis-shrinking loop of [`small_primitive`].
pub(crate) const ITERATION_LIMIT: usize = 10_000;

const BOX: i64 = 6;

/// Pairs `(i, j)` with `gcd(i, j) = 1`, one per sign class, smallest first.
fn coefficient_box() -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for r in 1..=BOX {
        for i in -r..=r {
            for j in 0..=r {
                if i.abs().max(j) != r || i.gcd(&j) != 1 || (j == 0 && i < 0) {
                    continue;
                }
                out.push((i, j));
            }
        }
    }
    out
}

/// Some `y` in `h` with `0 < y < bound`, primitive in both `h` and `g` (`h` a subgroup of `g`
/// of rank at least two).
///
/// Walks down the subtractive Euclid chain of two basis vectors of `h`; at every stage the
/// small integer combinations of the current pair are tried.
pub(crate) fn small_primitive(h: &ZModule, g: &ZModule, bound: &SymReal, ctx: &Ctx) -> Result<SymReal> {
    if h.rank() < 2 {
        return Err(Error::RankMismatch { expected: 2, found: h.rank() });
    }
    let gens = h.generators();
    let mut p = gens[0].abs()?;
    let mut q = gens[1].abs()?;
    let candidates = coefficient_box();
    for _ in 0..ITERATION_LIMIT {
        ctx.check()?;
        for &(i, j) in &candidates {
            let y = p.scale_int(&BigInt::from(i)).add_multiple(&BigInt::from(j), &q)?;
            // undecidable candidates are skipped, not fatal
            let fits = matches!(y.signum(), Ok(Ordering::Greater)) && matches!(y.cmp(bound), Ok(Ordering::Less));
            if fits && g.is_primitive(&y)? && h.is_primitive(&y)? {
                return Ok(y);
            }
        }
        if p.cmp(&q)? == Ordering::Greater {
            let n = reduce_quotient(&p, &q)?;
            p = p.add_multiple(&(-n), &q)?;
        } else {
            let n = reduce_quotient(&q, &p)?;
            q = q.add_multiple(&(-n), &p)?;
        }
    }
    Err(Error::IterationLimit { limit: ITERATION_LIMIT })
}

/// Low path from `u` to a vector `u+ <= u` whose last component is minimal and primitive in
/// `<u>`.
pub fn make_minimal_primitive(u: &[SymReal]) -> Result<(MovePath, Vec<SymReal>)> {
    let p = minimal_ctx(u, &Ctx::default())?;
    let end = p.end().to_vec();
    Ok((p, end))
}

pub(crate) fn minimal_ctx(u: &[SymReal], ctx: &Ctx) -> Result<MovePath> {
    let k = u.len();
    if k < 2 {
        return Err(Error::InvalidInput("make_minimal_primitive needs at least two components".into()));
    }
    let g = group_of(u)?;
    let last = k - 1;

    // subtract the smallest other component from the last one
    let mut b = PathBuilder::new(u.to_vec())?;
    let j = argmin(&u[..last])?.expect("k >= 2");
    let q = reduce_quotient(&u[last], &u[j])?;
    let n = q.to_u64().ok_or_else(|| Error::Internal("repetition count out of range".into()))?;
    b.push_n(Move::m(last, j), n)?;
    let reduced = b.finish();
    let cur = reduced.end().to_vec();
    let x = &cur[last];
    if g.is_primitive(x)? {
        return Ok(reduced);
    }

    if g.rank() == 1 {
        return reduced.concat(descend_to_generator(&cur, &g, ctx)?);
    }

    // x is divisible, so H = <u_1..u_{k-1}> has full rank and finite index in G
    let head = &cur[..last];
    let h = group_of(head)?;
    if h.rank() != g.rank() {
        return Err(Error::Internal("a divisible last component with a smaller head group".into()));
    }
    let half = x.scale(&Rat::new(1.into(), 2.into()));
    let x1 = small_primitive(&h, &g, &half, ctx)?;

    // basis x1, x2, .., xm of H with x1 < x_j <= 2 x1
    let mut rest = Vec::new();
    for y in h.complement(&x1)?.generators() {
        let n = reduce_quotient(&y, &x1)?;
        rest.push(y.add_multiple(&(-n), &x1)?.add(&x1)?);
    }
    sort_reals(&mut rest)?;
    let m = h.rank();
    let mut target = Vec::with_capacity(last);
    for _ in 0..(last + 1 - m) {
        target.push(rest[0].clone());
    }
    target.extend(rest[1..].iter().cloned());
    target.push(x1);
    debug_assert_eq!(target.len(), last);
    debug_assert_eq!(group_of(&target)?, h);

    let inner = low_path_ctx(head, &target, ctx)?.with_appended(x);
    let mut swap = PathBuilder::new(inner.end().to_vec())?;
    swap.push(Move::swap(last - 1, last))?;
    let out = reduced.concat(inner)?.concat(swap.finish())?;
    debug_assert!(g.is_primitive(&out.end()[last])?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{SymBasis, Symbol};
    use crate::pathengine::is_low_admissible;
    use std::sync::Arc;

    fn v(x: &[i64]) -> Vec<SymReal> {
        let b = SymBasis::trivial();
        x.iter().map(|&y| SymReal::from_int(&b, y)).collect()
    }

    fn check(u: &[SymReal]) -> Vec<SymReal> {
        let (p, end) = make_minimal_primitive(u).unwrap();
        assert!(is_low_admissible(&p, u, &end).unwrap());
        let g = group_of(u).unwrap();
        let last = end.last().unwrap();
        assert!(g.is_primitive(last).unwrap());
        for x in &end {
            assert_ne!(x.cmp(last).unwrap(), Ordering::Less);
        }
        end
    }

    #[test]
    fn integer_vectors() {
        assert_eq!(check(&v(&[2, 3, 4])).last(), Some(&v(&[1])[0]));
        assert_eq!(check(&v(&[2, 4, 6])), v(&[2, 4, 2]));
        assert!(make_minimal_primitive(&v(&[1, 1])).unwrap().0.is_empty());
        // 3 and 5 leave 2, which is not primitive in Z
        check(&v(&[3, 5]));
    }

    #[test]
    fn divisible_last_component_in_rank_two() {
        let b: Arc<SymBasis> = SymBasis::with_symbols(vec![Symbol::new(
            "beta",
            Rat::new(141_421_356.into(), 100_000_000.into()),
            Rat::new(141_421_357.into(), 100_000_000.into()),
        )])
        .unwrap();
        let r = |c0: i64, c1: i64| SymReal::new(b.clone(), vec![Rat::from_integer(c0.into()), Rat::from_integer(c1.into())]).unwrap();
        // 2 = 2 * 1 is divisible in <3, 2 beta, 2> = <1, 2 beta>
        let u = vec![r(3, 0), r(0, 2), r(2, 0)];
        check(&u);
        let u = vec![r(10, 0), r(0, 8), r(6, 2), r(4, 4)];
        check(&u);
    }
}
