//! Re-validation of serialized paths and certificates. Deliberately does not go through
//! `MovePath` or the constructions, only through exact arithmetic.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exactnum::SymReal;

use super::certificate::{CertStep, Direction, IsotopyCertificate, StepKind};
use super::{Move, MoveKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureClass {
    InvalidMove,
    WrongMove,
    NonPositive,
    NotLow,
    BallMismatch,
    ChainBroken,
    WrongEndpoint,
    OverallBallMismatch,
    BoundExceeded,
}

/// Why a path or certificate was rejected. `step` is 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckFailure {
    pub class: FailureClass,
    pub step: Option<usize>,
    pub detail: String,
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.step {
            Some(s) => write!(f, "step {}: {:?}: {}", s, self.class, self.detail),
            None => write!(f, "{:?}: {}", self.class, self.detail),
        }
    }
}

fn failure(class: FailureClass, step: Option<usize>, detail: impl Into<String>) -> CheckFailure {
    CheckFailure { class, step, detail: detail.into() }
}

fn fail(class: FailureClass, step: Option<usize>, detail: impl Into<String>) -> Option<CheckFailure> {
    Some(failure(class, step, detail))
}

fn positive(v: &[SymReal]) -> Result<bool> {
    for x in v {
        if x.signum()? != Ordering::Greater {
            return Ok(false);
        }
    }
    Ok(true)
}

fn sorted(v: &[SymReal]) -> Result<Vec<SymReal>> {
    // insertion sort keeps this independent of the library sort helpers
    let mut out: Vec<SymReal> = Vec::with_capacity(v.len());
    for x in v {
        let mut pos = out.len();
        while pos > 0 && out[pos - 1].cmp(x)? == Ordering::Greater {
            pos -= 1;
        }
        out.insert(pos, x.clone());
    }
    Ok(out)
}

fn dominated(s: &[SymReal], bound: &[SymReal]) -> Result<bool> {
    for (x, y) in s.iter().zip(bound) {
        if x.cmp(y)? == Ordering::Greater {
            return Ok(false);
        }
    }
    Ok(true)
}

// replays the moves, stopping at the first invalid or non-positive step
fn replay(start: &[SymReal], moves: &[Move]) -> Result<std::result::Result<Vec<Vec<SymReal>>, CheckFailure>> {
    use FailureClass::*;
    let k = start.len();
    let mut states = vec![start.to_vec()];
    for (s, m) in moves.iter().enumerate() {
        let step = Some(s + 1);
        if m.i == m.j || m.i >= k || m.j >= k {
            return Ok(Err(failure(InvalidMove, step, format!("{} on {} components", m, k))));
        }
        let mut cur = states[s].clone();
        match m.kind {
            MoveKind::P => cur[m.i] = cur[m.i].add(&cur[m.j])?,
            MoveKind::M => cur[m.i] = cur[m.i].sub(&cur[m.j])?,
            MoveKind::I => cur.swap(m.i, m.j),
        }
        if cur[m.i].signum()? != Ordering::Greater {
            let detail = format!("{} gives component {} = {}", m, m.i + 1, cur[m.i]);
            return Ok(Err(failure(NonPositive, step, detail)));
        }
        states.push(cur);
    }
    Ok(Ok(states))
}

/// Checks that `moves` is an admissible path from `start` to `end` (the replayed end when
/// `None`) and that every state is dominated, up to permutation, by one of the two endpoints.
pub fn check_path(start: &[SymReal], moves: &[Move], end: Option<&[SymReal]>) -> Result<Option<CheckFailure>> {
    use FailureClass::*;
    let k = start.len();
    if k == 0 {
        return Ok(fail(WrongEndpoint, None, "empty start vector"));
    }
    if let Some(e) = end {
        if e.len() != k {
            return Ok(fail(WrongEndpoint, None, format!("end has {} components, start has {}", e.len(), k)));
        }
        if !positive(e)? {
            return Ok(fail(NonPositive, None, "endpoints must be positive"));
        }
    }
    if !positive(start)? {
        return Ok(fail(NonPositive, None, "endpoints must be positive"));
    }
    let states = match replay(start, moves)? {
        Ok(s) => s,
        Err(f) => return Ok(Some(f)),
    };
    let last = states.last().expect("start state");
    let end = end.unwrap_or(last);
    let (sd, se) = (sorted(start)?, sorted(end)?);
    for (s, st) in states.iter().enumerate().skip(1) {
        let st = sorted(st)?;
        if !dominated(&st, &sd)? && !dominated(&st, &se)? {
            return Ok(fail(NotLow, Some(s), format!("state after {} exceeds both endpoints", moves[s - 1])));
        }
    }
    if last.as_slice() != end {
        return Ok(fail(WrongEndpoint, None, "the path does not end at the stated vector"));
    }
    Ok(None)
}

fn sum(v: &[SymReal]) -> Result<SymReal> {
    let mut s = v[0].clone();
    for x in &v[1..] {
        s = s.add(x)?;
    }
    Ok(s)
}

fn minimum(v: &[SymReal]) -> Result<SymReal> {
    let mut m = v[0].clone();
    for x in &v[1..] {
        if x.cmp(&m)? == Ordering::Less {
            m = x.clone();
        }
    }
    Ok(m)
}

fn norm(v: &[SymReal]) -> Result<SymReal> {
    sum(v)?.add(&minimum(v)?)
}

fn larger<'a>(a: &'a SymReal, b: &'a SymReal) -> Result<&'a SymReal> {
    Ok(if a.cmp(b)? == Ordering::Less { b } else { a })
}

// the move itself and its ball; None means valid
fn check_step(st: &CertStep, n: usize, step: usize) -> Result<Option<CheckFailure>> {
    use FailureClass::*;
    let at = Some(step);
    if st.from.len() != n || st.to.len() != n {
        return Ok(fail(WrongMove, at, "vector length changes"));
    }
    if !positive(&st.to)? {
        return Ok(fail(NonPositive, at, "non-positive component"));
    }
    let expected_ball = match &st.kind {
        StepKind::UnitaryPermutation { perm } => {
            let mut seen = vec![false; n];
            if perm.len() != n || perm.iter().any(|&q| q >= n || std::mem::replace(&mut seen[q], true)) {
                return Ok(fail(WrongMove, at, "not a permutation"));
            }
            if perm.iter().enumerate().any(|(p, &q)| st.to[p] != st.from[q]) {
                return Ok(fail(WrongMove, at, "target is not the permuted source"));
            }
            sum(&st.from)?
        }
        &StepKind::Step2Apply { i, j, direction } => {
            if i == j || i >= n || j >= n {
                return Ok(fail(WrongMove, at, format!("indices {}, {} out of range", i + 1, j + 1)));
            }
            let ua = minimum(&st.from)?;
            if st.from[i].cmp(&ua)? != Ordering::Greater || st.from[j].cmp(&ua)? != Ordering::Greater {
                return Ok(fail(WrongMove, at, "a minimal component is moved"));
            }
            let shift = st.from[j].sub(&ua)?;
            let want = match direction {
                Direction::Plus => st.from[i].add(&shift)?,
                Direction::Minus => st.from[i].sub(&shift)?,
            };
            if want.cmp(&ua)? != Ordering::Greater {
                return Ok(fail(NonPositive, at, format!("component {} drops to the minimum or below", i + 1)));
            }
            if st.to[i] != want || (0..n).any(|p| p != i && st.to[p] != st.from[p]) {
                return Ok(fail(WrongMove, at, "target does not match the move"));
            }
            let big = if st.to[i].cmp(&st.from[i])? == Ordering::Greater { &st.to } else { &st.from };
            norm(big)?
        }
    };
    if st.ball != expected_ball {
        return Ok(fail(BallMismatch, at, format!("ball {} should be {}", st.ball, expected_ball)));
    }
    Ok(None)
}

pub fn check_certificate(c: &IsotopyCertificate) -> Result<Option<CheckFailure>> {
    use FailureClass::*;
    let n = c.a.len();
    if n == 0 || c.a_prime.len() != n {
        return Ok(fail(WrongEndpoint, None, "endpoint lengths differ or are zero"));
    }
    if !positive(&c.a)? || !positive(&c.a_prime)? {
        return Ok(fail(NonPositive, None, "endpoints must be positive"));
    }
    let mut cur = &c.a;
    for (s, st) in c.steps.iter().enumerate() {
        if &st.from != cur {
            return Ok(fail(ChainBroken, Some(s + 1), "step does not start where the previous one ended"));
        }
        if let Some(f) = check_step(st, n, s + 1)? {
            return Ok(Some(f));
        }
        cur = &st.to;
    }
    if cur != &c.a_prime {
        return Ok(fail(WrongEndpoint, None, "the chain does not end at a'"));
    }
    let mut overall = sum(&c.a)?;
    if let Some(first) = c.steps.first() {
        overall = first.ball.clone();
        for st in &c.steps[1..] {
            overall = larger(&overall, &st.ball)?.clone();
        }
    }
    if c.overall_ball != overall {
        return Ok(fail(OverallBallMismatch, None, format!("overall ball {} should be {}", c.overall_ball, overall)));
    }
    let bound = larger(&norm(&c.a)?, &norm(&c.a_prime)?)?.clone();
    if overall.cmp(&bound)? == Ordering::Greater {
        return Ok(fail(BoundExceeded, None, format!("{} exceeds max(‖a‖, ‖a'‖) = {}", overall, bound)));
    }
    Ok(None)
}
