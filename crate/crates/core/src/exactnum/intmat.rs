//! Dense integer matrices and row-style Hermite normal form.
//!
//! Convention: rows are reduced. Pivot columns strictly increase down the rows, pivots are
//! positive, and entries above a pivot lie in `[0, pivot)`. Zero rows sit at the bottom.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn transpose(m: &IntMatrix, cols: usize) -> IntMatrix {
    (0..cols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = BigInt::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() {
                            acc += &row[k] * &b[k][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &IntMatrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Gcd of all entries (zero for an empty or zero vector).
pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Result of [`hnf_with_transform`]: `t * input = h` and `t * t_inv = 1`.
#[derive(Debug, Clone)]
pub struct HnfDecomp {
    pub h: IntMatrix,
    pub t: IntMatrix,
    pub t_inv: IntMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

struct State {
    m: IntMatrix,
    t: Option<(IntMatrix, IntMatrix)>,
}

impl State {
    fn swap(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.m.swap(a, b);
        if let Some((t, ti)) = &mut self.t {
            t.swap(a, b);
            for row in ti.iter_mut() {
                row.swap(a, b);
            }
        }
    }

    fn negate(&mut self, a: usize) {
        for x in self.m[a].iter_mut() {
            *x = -&*x;
        }
        if let Some((t, ti)) = &mut self.t {
            for x in t[a].iter_mut() {
                *x = -&*x;
            }
            for row in ti.iter_mut() {
                row[a] = -&row[a];
            }
        }
    }

    // row_a -= q * row_b
    fn sub_row(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        let rb = self.m[b].clone();
        for (x, y) in self.m[a].iter_mut().zip(&rb) {
            *x -= q * y;
        }
        if let Some((t, ti)) = &mut self.t {
            let tb = t[b].clone();
            for (x, y) in t[a].iter_mut().zip(&tb) {
                *x -= q * y;
            }
            // inverse column operation: col_b += q * col_a
            for row in ti.iter_mut() {
                let add = q * &row[a];
                row[b] += add;
            }
        }
    }
}

fn reduce(mut st: State, cols: usize) -> (State, Vec<usize>) {
    let rows = st.m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            // smallest nonzero |entry| at or below row r
            let best = (r..rows)
                .filter(|&i| !st.m[i][c].is_zero())
                .min_by(|&i, &j| st.m[i][c].abs().cmp(&st.m[j][c].abs()));
            let Some(best) = best else { break };
            st.swap(r, best);
            let mut done = true;
            for i in r + 1..rows {
                if !st.m[i][c].is_zero() {
                    let q = st.m[i][c].div_floor(&st.m[r][c]);
                    st.sub_row(i, r, &q);
                    if !st.m[i][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if st.m[r][c].is_zero() {
            continue;
        }
        if st.m[r][c].is_negative() {
            st.negate(r);
        }
        for i in 0..r {
            let q = st.m[i][c].div_floor(&st.m[r][c]);
            st.sub_row(i, r, &q);
        }
        pivots.push(c);
        r += 1;
    }
    (st, pivots)
}

/// Canonical HNF rows (zero rows dropped) and their pivot columns.
pub fn hnf(m: &IntMatrix, cols: usize) -> (IntMatrix, Vec<usize>) {
    let (st, pivots) = reduce(State { m: m.clone(), t: None }, cols);
    let mut h = st.m;
    h.truncate(pivots.len());
    (h, pivots)
}

/// HNF together with a unimodular transform and its inverse.
pub fn hnf_with_transform(m: &IntMatrix, cols: usize) -> HnfDecomp {
    let n = m.len();
    let (st, pivots) = reduce(State { m: m.clone(), t: Some((identity(n), identity(n))) }, cols);
    let (t, t_inv) = st.t.expect("transform tracked");
    HnfDecomp { rank: pivots.len(), h: st.m, t, t_inv, pivots }
}

/// Basis (as rows) of the integer vectors `k` with `m * k = 0`.
pub fn right_kernel(m: &IntMatrix, cols: usize) -> IntMatrix {
    let mt = transpose(m, cols);
    let d = hnf_with_transform(&mt, m.len());
    d.t[d.rank..].to_vec()
}

/// Integer inverse of a unimodular matrix.
pub fn unimodular_inverse(m: &IntMatrix) -> Option<IntMatrix> {
    let n = m.len();
    let d = hnf_with_transform(m, n);
    if d.rank != n || d.h != identity(n) {
        return None;
    }
    Some(d.t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn hnf_of_small_lattice() {
        let (h, piv) = hnf(&mat(&[&[1, 0], &[0, 2], &[1, 2]]), 2);
        assert_eq!(h, mat(&[&[1, 0], &[0, 2]]));
        assert_eq!(piv, vec![0, 1]);
        let (h, _) = hnf(&mat(&[&[6], &[10], &[15]]), 1);
        assert_eq!(h, mat(&[&[1]]));
    }

    #[test]
    fn transform_is_consistent() {
        let m = mat(&[&[2, 3, 5], &[4, 1, -7], &[6, 4, -2], &[0, 5, 17]]);
        let d = hnf_with_transform(&m, 3);
        assert_eq!(mul(&d.t, &m), d.h);
        assert_eq!(mul(&d.t, &d.t_inv), identity(4));
        assert!(det(&d.t).abs().is_one());
        // the fourth row combination vanishes
        assert!(d.h[d.rank..].iter().all(|r| r.iter().all(Zero::is_zero)));
    }

    #[test]
    fn bareiss_determinant() {
        assert_eq!(det(&mat(&[&[2, 3], &[1, 1]])), BigInt::from(-1));
        assert_eq!(det(&mat(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]])), BigInt::from(-1));
        assert_eq!(det(&mat(&[&[1, 2], &[2, 4]])), BigInt::zero());
        assert_eq!(det(&mat(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]])), BigInt::from(6));
    }

    #[test]
    fn kernel_and_inverse() {
        let k = right_kernel(&mat(&[&[2, 4, 6]]), 3);
        assert_eq!(k.len(), 2);
        for row in &k {
            let s: BigInt = row[0].clone() * 2 + &row[1] * 4 + &row[2] * 6;
            assert!(s.is_zero());
        }
        let a = mat(&[&[-1, 1], &[2, -1]]);
        let inv = unimodular_inverse(&a).unwrap();
        assert_eq!(mul(&a, &inv), identity(2));
        assert!(unimodular_inverse(&mat(&[&[2, 0], &[0, 1]])).is_none());
    }
}
