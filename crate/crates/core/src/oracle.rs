//! Brute-force ground truth for the path engine.
//!
//! [`bfs_low_path`] searches the whole low state space of an integer instance. For symbolic
//! instances that space is infinite, so [`bounded_search`] only explores the exact move tree
//! up to a fixed depth.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactnum::{SymBasis, SymReal};
use crate::pathengine::{leq_perm, Ctx, Move, MoveKind, MovePath};

pub const DEFAULT_NODE_CAP: usize = 10_000_000;

/// All moves on `k` components in lexicographic `(kind, i, j)` order; swaps only with `i < j`.
pub fn all_moves(k: usize) -> Vec<Move> {
    let mut out = Vec::new();
    for kind in [MoveKind::P, MoveKind::M, MoveKind::I] {
        for i in 0..k {
            for j in 0..k {
                if i == j || (kind == MoveKind::I && i > j) {
                    continue;
                }
                out.push(Move { kind, i, j });
            }
        }
    }
    out
}

fn sorted(v: &[i64]) -> Vec<i64> {
    let mut s = v.to_vec();
    s.sort_unstable();
    s
}

fn below(s: &[i64], bound: &[i64]) -> bool {
    let mut t = [0i64; 8];
    if s.len() <= 8 {
        let t = &mut t[..s.len()];
        t.copy_from_slice(s);
        t.sort_unstable();
        return t.iter().zip(bound).all(|(x, y)| x <= y);
    }
    sorted(s).iter().zip(bound).all(|(x, y)| x <= y)
}

/// Shortest low admissible path between positive integer vectors, or `None` when no low path
/// exists.
pub fn bfs_low_path(d: &[i64], e: &[i64], node_cap: usize) -> Result<Option<Vec<Move>>> {
    if d.len() != e.len() {
        return Err(Error::DimensionMismatch { expected: d.len(), found: e.len() });
    }
    if d.is_empty() || d.iter().chain(e).any(|&x| x <= 0) {
        return Err(Error::InvalidInput("oracle vectors must be non-empty and positive".into()));
    }
    if d == e {
        return Ok(Some(Vec::new()));
    }
    let (sd, se) = (sorted(d), sorted(e));
    let moves = all_moves(d.len());
    // low states never exceed the largest endpoint entry
    let top = *d.iter().chain(e).max().expect("non-empty") as u64;
    match (top as u128).checked_pow(d.len() as u32).filter(|&n| n <= 1 << 24) {
        Some(n) => Ok(dense_bfs(d, e, &sd, &se, &moves, top, n as usize, node_cap)?),
        None => sparse_bfs(d, e, &sd, &se, &moves, node_cap),
    }
}

const UNSEEN: u32 = u32::MAX;
const ROOT: u32 = u32::MAX - 1;

// states encoded as mixed-radix integers, digit x - 1 in base `top`
#[allow(clippy::too_many_arguments)]
fn dense_bfs(
    d: &[i64],
    e: &[i64],
    sd: &[i64],
    se: &[i64],
    moves: &[Move],
    top: u64,
    n: usize,
    node_cap: usize,
) -> Result<Option<Vec<Move>>> {
    let encode = |s: &[i64]| s.iter().rev().fold(0u64, |acc, &x| acc * top + (x as u64 - 1)) as u32;
    let decode = |mut idx: u32, out: &mut [i64]| {
        for x in out.iter_mut() {
            *x = (idx as u64 % top) as i64 + 1;
            idx = (idx as u64 / top) as u32;
        }
    };
    let mut parent = vec![UNSEEN; n];
    let mut via = vec![0u16; n];
    let (start, goal) = (encode(d), encode(e));
    parent[start as usize] = ROOT;
    let mut count = 1;
    let mut queue = VecDeque::from([start]);
    let (mut s, mut t) = (vec![0i64; d.len()], vec![0i64; d.len()]);
    while let Some(cur) = queue.pop_front() {
        decode(cur, &mut s);
        for (mi, &m) in moves.iter().enumerate() {
            t.copy_from_slice(&s);
            if !m.apply_int(&mut t) || !(below(&t, sd) || below(&t, se)) {
                continue;
            }
            let idx = encode(&t);
            if parent[idx as usize] != UNSEEN {
                continue;
            }
            if count >= node_cap {
                return Err(Error::StateSpaceCap { cap: node_cap });
            }
            count += 1;
            parent[idx as usize] = cur;
            via[idx as usize] = mi as u16;
            if idx == goal {
                let mut out = Vec::new();
                let mut at = idx;
                while parent[at as usize] != ROOT {
                    out.push(moves[via[at as usize] as usize]);
                    at = parent[at as usize];
                }
                out.reverse();
                return Ok(Some(out));
            }
            queue.push_back(idx);
        }
    }
    Ok(None)
}

fn sparse_bfs(d: &[i64], e: &[i64], sd: &[i64], se: &[i64], moves: &[Move], node_cap: usize) -> Result<Option<Vec<Move>>> {
    let mut seen: HashMap<Vec<i64>, Option<(Vec<i64>, usize)>> = HashMap::from([(d.to_vec(), None)]);
    let mut queue = VecDeque::from([d.to_vec()]);
    while let Some(s) = queue.pop_front() {
        for (mi, &m) in moves.iter().enumerate() {
            let mut t = s.clone();
            if !m.apply_int(&mut t) || !(below(&t, sd) || below(&t, se)) || seen.contains_key(&t) {
                continue;
            }
            if seen.len() >= node_cap {
                return Err(Error::StateSpaceCap { cap: node_cap });
            }
            seen.insert(t.clone(), Some((s.clone(), mi)));
            if t == e {
                let mut out = Vec::new();
                let mut cur = t;
                while let Some(Some((p, mi))) = seen.get(&cur) {
                    out.push(moves[*mi]);
                    cur = p.clone();
                }
                out.reverse();
                return Ok(Some(out));
            }
            queue.push_back(t);
        }
    }
    Ok(None)
}

/// Wraps an integer move list as a path over the trivial basis.
pub fn int_path(d: &[i64], moves: &[Move]) -> Result<MovePath> {
    let b: Arc<SymBasis> = SymBasis::trivial();
    MovePath::new(d.iter().map(|&x| SymReal::from_int(&b, x)).collect(), moves.to_vec())
}

/// Iterative-deepening search for a low path of at most `max_depth` moves over exact states.
pub fn bounded_search(d: &[SymReal], e: &[SymReal], max_depth: usize) -> Result<Option<MovePath>> {
    bounded_low_search(d, e, max_depth, &Ctx::default())
}

pub(crate) fn bounded_low_search(
    d: &[SymReal],
    e: &[SymReal],
    max_depth: usize,
    cancel: &Ctx,
) -> Result<Option<MovePath>> {
    if d.len() != e.len() {
        return Err(Error::DimensionMismatch { expected: d.len(), found: e.len() });
    }
    let moves = all_moves(d.len());
    for depth in 0..=max_depth {
        let mut stack = vec![d.to_vec()];
        let mut on_path: HashSet<Vec<SymReal>> = HashSet::from([d.to_vec()]);
        let mut chosen = Vec::new();
        if dfs(e, d, &moves, depth, &mut stack, &mut on_path, &mut chosen, cancel)? {
            return Ok(Some(MovePath::new(d.to_vec(), chosen)?));
        }
    }
    Ok(None)
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    e: &[SymReal],
    d: &[SymReal],
    moves: &[Move],
    depth: usize,
    stack: &mut Vec<Vec<SymReal>>,
    on_path: &mut HashSet<Vec<SymReal>>,
    chosen: &mut Vec<Move>,
    cancel: &Ctx,
) -> Result<bool> {
    let cur = stack.last().expect("non-empty").clone();
    if cur == e {
        return Ok(true);
    }
    if depth == 0 {
        return Ok(false);
    }
    cancel.check()?;
    for &m in moves {
        let mut next = cur.clone();
        match m.apply(&mut next) {
            Ok(()) => {}
            Err(Error::NonPositiveResult { .. }) | Err(Error::RefineNeeded { .. }) => continue,
            Err(err) => return Err(err),
        }
        if on_path.contains(&next) {
            continue;
        }
        let low = matches!(leq_perm(&next, d), Ok(true)) || matches!(leq_perm(&next, e), Ok(true));
        if !low {
            continue;
        }
        on_path.insert(next.clone());
        stack.push(next);
        chosen.push(m);
        if dfs(e, d, moves, depth - 1, stack, on_path, chosen, cancel)? {
            return Ok(true);
        }
        chosen.pop();
        let back = stack.pop().expect("pushed above");
        on_path.remove(&back);
    }
    Ok(false)
}
