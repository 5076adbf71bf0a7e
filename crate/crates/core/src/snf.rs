//! Exact Smith normal form over the integers and the abelian group it
//! describes.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

pub type IntMatrix<I> = Vec<Vec<I>>;

/// `U · M · V = D` with `U`, `V` unimodular and `D` diagonal with
/// `d1 | d2 | ...`.
#[derive(Clone, Debug, PartialEq)]
pub struct SnfResult<I> {
    pub rows: usize,
    pub cols: usize,
    /// Diagonal of `D`, length `min(rows, cols)`, all non-negative.
    pub diagonal: Vec<I>,
    pub u: IntMatrix<I>,
    pub v: IntMatrix<I>,
}

pub type Snf = SnfResult<BigInt>;

fn identity<I: Integer + Clone>(n: usize) -> IntMatrix<I> {
    (0..n).map(|i| (0..n).map(|j| if i == j { I::one() } else { I::zero() }).collect()).collect()
}

pub fn mat_mul<I: Integer + Clone>(a: &IntMatrix<I>, b: &IntMatrix<I>) -> IntMatrix<I> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(I::zero(), |acc, k| acc + row[k].clone() * b[k][j].clone()))
                .collect()
        })
        .collect()
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det_exact<I: Integer + Signed + Clone>(m: &IntMatrix<I>) -> I {
    let n = m.len();
    if n == 0 {
        return I::one();
    }
    let mut a = m.clone();
    let mut sign = I::one();
    let mut prev = I::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return I::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].clone() * a[k][k].clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = num / prev.clone();
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

pub fn smith_normal_form<I: Integer + Signed + Clone>(m: &IntMatrix<I>) -> SnfResult<I> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut d = m.clone();
    let mut u = identity::<I>(rows);
    let mut v = identity::<I>(cols);

    let swap_cols = |x: &mut IntMatrix<I>, a: usize, b: usize| {
        for row in x.iter_mut() {
            row.swap(a, b);
        }
    };
    // row_i -= q * row_t
    let row_sub = |x: &mut IntMatrix<I>, i: usize, t: usize, q: &I| {
        for j in 0..x[i].len() {
            let delta = q.clone() * x[t][j].clone();
            x[i][j] = x[i][j].clone() - delta;
        }
    };
    let col_sub = |x: &mut IntMatrix<I>, j: usize, t: usize, q: &I| {
        for row in x.iter_mut() {
            let delta = q.clone() * row[t].clone();
            row[j] = row[j].clone() - delta;
        }
    };

    for t in 0..rows.min(cols) {
        loop {
            // Smallest non-zero entry of the trailing block becomes the pivot.
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !d[i][j].is_zero() && pivot.is_none_or(|(pi, pj)| d[i][j].abs() < d[pi][pj].abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return finish(rows, cols, d, u, v);
            };
            d.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if !d[i][t].is_zero() {
                    let q = d[i][t].div_floor(&d[t][t]);
                    row_sub(&mut d, i, t, &q);
                    row_sub(&mut u, i, t, &q);
                    clean &= d[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !d[t][j].is_zero() {
                    let q = d[t][j].div_floor(&d[t][t]);
                    col_sub(&mut d, j, t, &q);
                    col_sub(&mut v, j, t, &q);
                    clean &= d[t][j].is_zero();
                }
            }
            if !clean {
                continue;
            }
            // Enforce divisibility of the trailing block by the pivot.
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(d[i][j].clone() % d[t][t].clone()).is_zero()));
            match bad {
                Some(i) => {
                    let minus_one = -I::one();
                    row_sub(&mut d, t, i, &minus_one);
                    row_sub(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    finish(rows, cols, d, u, v)
}

fn finish<I: Integer + Signed + Clone>(
    rows: usize,
    cols: usize,
    d: IntMatrix<I>,
    u: IntMatrix<I>,
    v: IntMatrix<I>,
) -> SnfResult<I> {
    let diagonal = (0..rows.min(cols)).map(|i| d[i][i].abs()).collect();
    SnfResult { rows, cols, diagonal, u, v }
}

impl<I: Integer + Signed + Clone + ToPrimitive + fmt::Display> SnfResult<I> {
    pub fn invariant_factors(&self) -> &[I] {
        &self.diagonal
    }

    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }

    /// Free rank of the cokernel `Z^cols / rowspace`.
    pub fn free_rank(&self) -> usize {
        self.cols - self.rank()
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<I> {
        self.diagonal.iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect()
    }

    pub fn torsion_order(&self) -> I {
        self.torsion().into_iter().fold(I::one(), |a, b| a * b)
    }

    /// Checks `U·M·V = D`, unimodularity, and the divisibility chain exactly.
    pub fn verify(&self, m: &IntMatrix<I>) -> bool {
        let prod = mat_mul(&mat_mul(&self.u, m), &self.v);
        let diag_ok = prod.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, x)| {
                if i == j {
                    x.abs() == self.diagonal[i]
                } else {
                    x.is_zero()
                }
            })
        });
        let unimodular = det_exact(&self.u).abs().is_one() && det_exact(&self.v).abs().is_one();
        let chain = self.diagonal.windows(2).all(|w| {
            if w[0].is_zero() {
                w[1].is_zero()
            } else {
                (w[1].clone() % w[0].clone()).is_zero()
            }
        });
        diag_ok && unimodular && chain
    }

    pub fn group(&self) -> AbelianGroup {
        AbelianGroup {
            free_rank: self.free_rank(),
            torsion: self.torsion().iter().map(|d| d.to_u64().expect("torsion factor fits in u64")).collect(),
        }
    }
}

/// A finitely generated abelian group `Z^r ⊕ Z_{d1} ⊕ ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianGroup {
    pub fn from_cyclic_orders(free_rank: usize, orders: &[u64]) -> Self {
        Self { free_rank, torsion: orders.iter().copied().filter(|&d| d != 1).collect() }
    }

    pub fn torsion_order(&self) -> u64 {
        self.torsion.iter().product()
    }

    /// Prime-power decomposition of the torsion part, sorted.
    pub fn elementary_divisors(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for &d in &self.torsion {
            let mut n = d;
            let mut p = 2;
            while p * p <= n {
                if n % p == 0 {
                    let mut q = 1;
                    while n % p == 0 {
                        n /= p;
                        q *= p;
                    }
                    out.push(q);
                }
                p += 1;
            }
            if n > 1 {
                out.push(n);
            }
        }
        out.sort_unstable();
        out
    }

    /// Isomorphism of finitely generated abelian groups.
    pub fn is_isomorphic(&self, other: &Self) -> bool {
        self.free_rank == other.free_rank && self.elementary_divisors() == other.elementary_divisors()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" ⊕ "))
        }
    }
}

pub fn to_bigint(m: &[Vec<i64>]) -> IntMatrix<BigInt> {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snf(m: &[Vec<i64>]) -> Snf {
        let big = to_bigint(m);
        let r = smith_normal_form(&big);
        assert!(r.verify(&big));
        r
    }

    fn diag(r: &Snf) -> Vec<i64> {
        r.diagonal.iter().map(|d| d.to_i64().unwrap()).collect()
    }

    #[test]
    fn coprime_diagonal() {
        assert_eq!(diag(&snf(&[vec![2, 0], vec![0, 3]])), vec![1, 6]);
    }

    #[test]
    fn zero_matrix() {
        let r = snf(&[vec![0, 0, 0], vec![0, 0, 0]]);
        assert_eq!(diag(&r), vec![0, 0]);
        assert_eq!(r.free_rank(), 3);
        assert_eq!(r.group().to_string(), "Z^3");
    }

    #[test]
    fn cobweb_four_generator_matrix() {
        let m = vec![vec![4, 4, 4, -6], vec![2, -1, -1, 2], vec![-1, 2, -1, 2], vec![-1, -1, 2, 2]];
        let r = snf(&m);
        assert_eq!(diag(&r), vec![1, 1, 6, 36]);
        assert_eq!(r.torsion_order().to_i64(), Some(216));
        assert_eq!(det_exact(&to_bigint(&m)).abs().to_i64(), Some(216));
        let g = r.group();
        assert_eq!(g.to_string(), "Z6 ⊕ Z36");
        assert!(!g.is_isomorphic(&AbelianGroup::from_cyclic_orders(0, &[3, 12, 6])));
        assert!(g.is_isomorphic(&AbelianGroup::from_cyclic_orders(0, &[4, 9, 2, 3])));
    }

    #[test]
    fn elementary_divisors() {
        let g = AbelianGroup::from_cyclic_orders(0, &[3, 12, 6]);
        assert_eq!(g.elementary_divisors(), vec![2, 3, 3, 3, 4]);
        assert!(g.is_isomorphic(&AbelianGroup::from_cyclic_orders(0, &[3, 6, 12])));
        assert_eq!(AbelianGroup::from_cyclic_orders(0, &[]).to_string(), "0");
        assert_eq!(AbelianGroup::from_cyclic_orders(1, &[1, 2]).to_string(), "Z ⊕ Z2");
    }

    #[test]
    fn rectangular_and_generic_i64() {
        let m: IntMatrix<i64> = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let r = smith_normal_form(&m);
        assert!(r.verify(&m));
        assert_eq!(r.diagonal, vec![2, 6, 12]);
        let wide: IntMatrix<i64> = vec![vec![3, -3, 0], vec![6, 6, 2]];
        let r = smith_normal_form(&wide);
        assert!(r.verify(&wide));
        assert_eq!(r.free_rank(), 1);
    }

    #[test]
    fn determinant() {
        let m: IntMatrix<i64> = vec![vec![0, 1], vec![1, 0]];
        assert_eq!(det_exact(&m), -1);
        let s: IntMatrix<i64> = vec![vec![1, 2], vec![2, 4]];
        assert_eq!(det_exact(&s), 0);
    }
}
