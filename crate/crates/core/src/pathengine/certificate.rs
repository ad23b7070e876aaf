use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{sum_reals, SymReal};
use crate::invariants::{equiv, strip, TorusSpec};

use super::{low_path, MoveKind, MovePath};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepKind {
    /// `to[p] = from[perm[p]]`
    UnitaryPermutation { perm: Vec<usize> },
    /// `to_i = from_i ± (from_j - ua)`, 0-based indices into the full vector
    Step2Apply { i: usize, j: usize, direction: Direction },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertStep {
    pub kind: StepKind,
    pub from: Vec<SymReal>,
    pub to: Vec<SymReal>,
    pub ball: SymReal,
}

/// A chain of elementary isotopies from `a` to `a_prime`, each confined to a ball.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotopyCertificate {
    pub a: Vec<SymReal>,
    pub a_prime: Vec<SymReal>,
    pub steps: Vec<CertStep>,
    pub overall_ball: SymReal,
}

fn total(v: &[SymReal]) -> Result<SymReal> {
    sum_reals(v[0].basis(), v)
}

/// `|v| + min v`
pub(crate) fn norm(v: &[SymReal]) -> Result<SymReal> {
    let (ua, _, _) = strip(v)?;
    total(v)?.add(&ua)
}

// positions of the minima followed by the rest, both in their original order
fn minima_first(v: &[SymReal], ua: &SymReal) -> Vec<usize> {
    let (mut lo, hi): (Vec<usize>, Vec<usize>) = (0..v.len()).partition(|&p| &v[p] == ua);
    lo.extend(hi);
    lo
}

fn is_identity(perm: &[usize]) -> bool {
    perm.iter().enumerate().all(|(p, &q)| p == q)
}

fn permute(from: &[SymReal], perm: &[usize]) -> Vec<SymReal> {
    perm.iter().map(|&q| from[q].clone()).collect()
}

pub fn certificate(t: &TorusSpec, u: &TorusSpec) -> Result<IsotopyCertificate> {
    if !equiv(t, u)? {
        return Err(Error::NotEquivalent);
    }
    let (a, b) = (t.components(), u.components());
    let (_, _, d) = strip(a)?;
    let (_, _, e) = strip(b)?;
    let path = if d.is_empty() { None } else { Some(low_path(&d, &e)?) };
    build(a, b, path.as_ref())
}

/// Lifts a path between the stripped vectors of `a` and `a_prime` (non-minimal components in
/// their original order) to a certificate.
pub fn certificate_from_path(a: &[SymReal], a_prime: &[SymReal], path: &MovePath) -> Result<IsotopyCertificate> {
    build(a, a_prime, Some(path))
}

fn build(a: &[SymReal], b: &[SymReal], path: Option<&MovePath>) -> Result<IsotopyCertificate> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
    }
    let (ua, m, d) = strip(a)?;
    let (ub, mb, e) = strip(b)?;
    if ua != ub || m != mb {
        return Err(Error::NotEquivalent);
    }
    if let Some(p) = path {
        if p.start() != d.as_slice() || p.end() != e.as_slice() {
            return Err(Error::InvalidInput("path endpoints do not match the stripped vectors".into()));
        }
    }
    let lift = |s: &[SymReal]| -> Result<Vec<SymReal>> {
        let mut v = vec![ua.clone(); m];
        for x in s {
            v.push(ua.add(x)?);
        }
        Ok(v)
    };

    let mut steps = Vec::new();
    let lead = minima_first(a, &ua);
    let mut cur = a.to_vec();
    if !is_identity(&lead) {
        let to = permute(&cur, &lead);
        steps.push(CertStep { kind: StepKind::UnitaryPermutation { perm: lead }, from: cur, ball: total(a)?, to: to.clone() });
        cur = to;
    }

    if let Some(p) = path {
        for (s, mv) in p.moves().iter().enumerate() {
            let to = lift(&p.states()[s + 1])?;
            let (i, j) = (mv.i + m, mv.j + m);
            let (kind, ball) = match mv.kind {
                MoveKind::I => {
                    let mut perm: Vec<usize> = (0..a.len()).collect();
                    perm.swap(i, j);
                    (StepKind::UnitaryPermutation { perm }, total(&cur)?)
                }
                MoveKind::P => (StepKind::Step2Apply { i, j, direction: Direction::Plus }, norm(&to)?),
                MoveKind::M => (StepKind::Step2Apply { i, j, direction: Direction::Minus }, norm(&cur)?),
            };
            steps.push(CertStep { kind, from: cur, to: to.clone(), ball });
            cur = to;
        }
    }

    // back from minima-first order to the order of a'
    let order = minima_first(b, &ua);
    let mut trail = vec![0; b.len()];
    for (q, &p) in order.iter().enumerate() {
        trail[p] = q;
    }
    if !is_identity(&trail) {
        let to = permute(&cur, &trail);
        steps.push(CertStep { kind: StepKind::UnitaryPermutation { perm: trail }, ball: total(&cur)?, from: cur, to: to.clone() });
        cur = to;
    }
    if cur != b {
        return Err(Error::Internal("certificate does not end at a'".into()));
    }

    let mut overall = total(a)?;
    if let Some(first) = steps.first() {
        overall = first.ball.clone();
        for s in &steps[1..] {
            if s.ball.cmp(&overall)? == Ordering::Greater {
                overall = s.ball.clone();
            }
        }
    }
    let bound = norm(a)?.max(&norm(b)?)?.clone();
    if overall.cmp(&bound)? == Ordering::Greater {
        return Err(Error::Internal(format!("certificate ball {} exceeds max(‖a‖, ‖a'‖) = {}", overall, bound)));
    }
    Ok(IsotopyCertificate { a: a.to_vec(), a_prime: b.to_vec(), steps, overall_ball: overall })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::SymBasis;

    fn torus(a: &[i64]) -> TorusSpec {
        TorusSpec::from_ints(&SymBasis::trivial(), a).unwrap()
    }

    fn int(x: i64) -> SymReal {
        SymReal::from_int(&SymBasis::trivial(), x)
    }

    #[test]
    fn single_step2() {
        let c = certificate(&torus(&[1, 3, 5]), &torus(&[1, 3, 3])).unwrap();
        assert_eq!(c.steps.len(), 1);
        assert_eq!(c.steps[0].kind, StepKind::Step2Apply { i: 2, j: 1, direction: Direction::Minus });
        assert_eq!(c.overall_ball, int(10));
    }

    #[test]
    fn permutation_only() {
        let c = certificate(&torus(&[1, 2]), &torus(&[2, 1])).unwrap();
        assert_eq!(c.steps.len(), 1);
        assert!(matches!(c.steps[0].kind, StepKind::UnitaryPermutation { .. }));
        assert_eq!(c.overall_ball, int(3));
    }

    #[test]
    fn identity_and_rejection() {
        let c = certificate(&torus(&[2, 2, 3]), &torus(&[2, 2, 3])).unwrap();
        assert!(c.steps.is_empty());
        assert_eq!(c.overall_ball, int(7));
        assert_eq!(certificate(&torus(&[1, 2]), &torus(&[1, 3])), Err(Error::NotEquivalent));
    }
}
