use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::exactnum::{reduce_quotient, sort_reals, Rat, SymReal, ZModule};
use crate::oracle::bounded_low_search;

use super::minimal::{minimal_ctx, small_primitive};
use super::rank1::{path_rank1_ctx, same_group};
use super::rank2::{path_rank2_ctx, FALLBACK_DEPTH};
use super::shared::shared_ctx;
use super::{is_low_admissible, CancelToken, Ctx, Move, MovePath, PathBuilder};

/// A verified low admissible path from `d` to `e`; requires `<d> = <e>`.
pub fn low_path(d: &[SymReal], e: &[SymReal]) -> Result<MovePath> {
    low_path_ctx(d, e, &Ctx::default())
}

pub fn low_path_cancellable(d: &[SymReal], e: &[SymReal], cancel: &CancelToken) -> Result<MovePath> {
    low_path_ctx(d, e, &Ctx::new(Some(cancel)))
}

pub(crate) fn low_path_ctx(d: &[SymReal], e: &[SymReal], ctx: &Ctx) -> Result<MovePath> {
    let g = same_group(d, e)?;
    if let Some(p) = permutation_path(d, e)? {
        return Ok(p);
    }
    let path = match (d.len(), g.rank()) {
        (0, _) => return Err(Error::InvalidInput("empty vectors".into())),
        // equal groups of single positive numbers force d = e
        (1, _) => MovePath::empty(d.to_vec())?,
        (_, 1) => path_rank1_ctx(d, e, ctx)?,
        (2, _) => path_rank2_ctx(d, e, ctx)?,
        _ => general(d, e, &g, ctx)?,
    };
    if is_low_admissible(&path, d, e)? {
        return Ok(path);
    }
    match bounded_low_search(d, e, FALLBACK_DEPTH, ctx)? {
        Some(p) => Ok(p),
        None => Err(Error::InternalLownessFailure),
    }
}

// transpositions carrying d to e when e is a rearrangement of d
fn permutation_path(d: &[SymReal], e: &[SymReal]) -> Result<Option<MovePath>> {
    let mut b = PathBuilder::new(d.to_vec())?;
    for p in 0..d.len() {
        if b.current()[p] == e[p] {
            continue;
        }
        match (p + 1..d.len()).find(|&q| b.current()[q] == e[p]) {
            Some(q) => b.push(Move::swap(p, q))?,
            None => return Ok(None),
        }
    }
    Ok(Some(b.finish()))
}

// positive representative of x modulo y in (0, y]
fn reduce_mod(x: &SymReal, y: &SymReal) -> Result<SymReal> {
    let n = reduce_quotient(x, y)?;
    x.add_multiple(&(-n), y)
}

fn dot(x: &SymReal, y: &SymReal) -> Rat {
    x.coeffs().iter().zip(y.coeffs()).map(|(a, b)| a * b).sum()
}

// complement of c in the rank-two delta, reduced into [c/2, c]; a tiny one would force the
// rest of the construction through huge coefficients
fn wide_complement(delta: &ZModule, c: &SymReal) -> Result<SymReal> {
    let f = reduce_mod(&delta.complement(c)?.generators()[0], c)?;
    let g = c.sub(&f)?;
    Ok(if g.is_positive()? && g.cmp(&f)? == Ordering::Greater { g } else { f })
}

const LIFT_SEARCH: i64 = 1 << 20;

// An element of y + <a, b> in (0, mu) with small coefficients. Reducing y modulo mu directly is
// also valid, but for tiny mu its coefficients blow up and the gadget words with them.
fn small_lift(y: &SymReal, a: &SymReal, b: &SymReal, mu: &SymReal) -> Result<SymReal> {
    let (mut a, mut b) = (a.clone(), b.clone());
    // Gauss reduction of the pair in coefficient space
    loop {
        if dot(&b, &b) < dot(&a, &a) {
            std::mem::swap(&mut a, &mut b);
        }
        let (ab, aa) = (dot(&a, &b), dot(&a, &a));
        if (&ab + &ab).abs() <= aa {
            break;
        }
        b = b.add_multiple(&(ab / aa).round().to_integer(), &a.neg())?;
    }
    let (aa, ab, bb) = (dot(&a, &a), dot(&a, &b), dot(&b, &b));
    let (ya, yb) = (dot(y, &a), dot(y, &b));
    let det = &aa * &bb - &ab * &ab;
    let s = ((&ya * &bb - &yb * &ab) / &det).round().to_integer();
    let t = ((&yb * &aa - &ya * &ab) / &det).round().to_integer();
    let y = y.add_multiple(&(-s), &a)?.add_multiple(&(-t), &b)?;

    // smallest |s| with y + s a + t b in (0, mu) for some t, found in floating point and
    // confirmed exactly
    let (fy, fa, fb, fmu) = (y.approx(), a.approx(), b.approx(), mu.approx());
    let (a, b, fa, fb) = if fa.abs() > fb.abs() { (b, a, fb, fa) } else { (a, b, fa, fb) };
    for r in 0..=LIFT_SEARCH {
        for s in [r, -r] {
            let x = fy + s as f64 * fa;
            let t = (-x / fb).floor() + if fb > 0.0 { 1.0 } else { 0.0 };
            let v = x + t * fb;
            if v <= 0.0 || v >= fmu {
                continue;
            }
            let z = y.add_multiple(&BigInt::from(s), &a)?.add_multiple(&BigInt::from(t as i64), &b)?;
            if matches!(z.signum(), Ok(Ordering::Greater)) && matches!(z.cmp(mu), Ok(Ordering::Less)) {
                return Ok(z);
            }
        }
    }
    reduce_mod(&y, mu)
}

// k >= 3 and rank >= 2
fn general(d: &[SymReal], e: &[SymReal], g: &ZModule, ctx: &Ctx) -> Result<MovePath> {
    let k = d.len();
    let last = k - 1;
    let to_d = minimal_ctx(d, ctx)?;
    let to_e = minimal_ctx(e, ctx)?;
    let (dp, ep) = (to_d.end().to_vec(), to_e.end().to_vec());
    let (cd, ce) = (&dp[last], &ep[last]);

    let middle = if cd == ce {
        shared_ctx(&dp, &ep, last, ctx)?
    } else {
        let basis = cd.basis();
        let delta = g.saturate(&ZModule::from_generators(basis, &[cd.clone(), ce.clone()])?)?;
        if delta.rank() != 2 {
            return Err(Error::Internal("distinct primitive elements span a rank-one group".into()));
        }
        let fd = wide_complement(&delta, cd)?;
        let fe = wide_complement(&delta, ce)?;
        let mu = fd.min(&fe)?.clone();

        // G = Delta + Lambda
        let dg = delta.generators();
        let l1 = g.complement(&dg[0])?;
        let (_, d2) = g.split(&dg[1], &dg[0], &l1)?;
        let lambda = l1.complement(&d2)?;
        let mut ys = lambda
            .generators()
            .iter()
            .map(|y| small_lift(y, &dg[0], &dg[1], &mu))
            .collect::<Result<Vec<_>>>()?;
        sort_reals(&mut ys)?;
        if ys.is_empty() {
            ys.push(small_primitive(g, g, &mu, ctx)?);
        }
        if ys.len() + 2 > k {
            return Err(Error::Internal("group rank exceeds the dimension".into()));
        }
        let build = |f: &SymReal, c: &SymReal| -> Vec<SymReal> {
            let mut v = vec![ys[0].clone(); k - 2 - ys.len()];
            v.extend(ys.iter().cloned());
            v.push(f.clone());
            v.push(c.clone());
            v
        };
        let (d2v, e2v) = (build(&fd, cd), build(&fe, ce));
        debug_assert!(ys[0].cmp(&mu)? == Ordering::Less);
        let p0 = shared_ctx(&dp, &d2v, last, ctx)?;
        let p = shared_ctx(&d2v, &e2v, 0, ctx)?;
        let p1 = shared_ctx(&ep, &e2v, last, ctx)?.reversed();
        p0.concat(p)?.concat(p1)?
    };
    to_d.concat(middle)?.concat(to_e.reversed())
}
