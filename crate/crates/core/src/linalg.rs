//! Dense linear algebra over the rationals and determinants of small
//! polynomial matrices.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use crate::num::Rational;
use crate::poly::Polynomial;
use crate::lie::RingId;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        RatMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).fold(Rational::zero(), |x, y| x + y))
            .collect()
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> RatMatrix {
        RatMatrix::from_rows(
            rows.iter().map(|&i| cols.iter().map(|&j| self.get(i, j).clone()).collect()).collect(),
        )
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..=i).all(|j| *self.get(i, j) == -self.get(j, i)))
    }

    /// Fraction-free (Bareiss) elimination. Returns the rank and, for square
    /// matrices, the determinant.
    fn bareiss(&self) -> (usize, Rational) {
        let mut a = self.to_rows();
        let (n, m) = (self.rows, self.cols);
        let mut prev = Rational::one();
        let mut sign = Rational::one();
        let mut rank = 0;
        for col in 0..m {
            if rank == n {
                break;
            }
            let Some(p) = (rank..n).find(|&i| !a[i][col].is_zero()) else { continue };
            if p != rank {
                a.swap(p, rank);
                sign = -sign;
            }
            for i in rank + 1..n {
                for j in col + 1..m {
                    let v = (&a[rank][col] * &a[i][j] - &a[i][col] * &a[rank][j]) / &prev;
                    a[i][j] = v;
                }
                a[i][col] = Rational::zero();
            }
            prev = a[rank][col].clone();
            rank += 1;
        }
        let det = if n == m && rank == n { sign * prev } else { Rational::zero() };
        (rank, det)
    }

    pub fn rank(&self) -> usize {
        self.bareiss().0
    }

    pub fn det(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        if self.rows == 0 {
            return Rational::one();
        }
        self.bareiss().1
    }

    /// Reduced row echelon form and pivot columns.
    /// Inverse of a nonsingular square matrix.
    pub fn inverse(&self) -> Option<RatMatrix> {
        let n = self.rows;
        if self.cols != n {
            return None;
        }
        let aug: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                row
            })
            .collect();
        let (r, pivots) = RatMatrix::from_rows(aug).rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(RatMatrix::from_rows((0..n).map(|i| r.row(i)[n..].to_vec()).collect()))
    }

    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut a = self.to_rows();
        let (n, m) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..m {
            if r == n {
                break;
            }
            let Some(p) = (r..n).find(|&i| !a[i][col].is_zero()) else { continue };
            a.swap(p, r);
            let inv = a[r][col].recip();
            for x in a[r].iter_mut() {
                *x *= &inv;
            }
            for i in 0..n {
                if i != r && !a[i][col].is_zero() {
                    let f = a[i][col].clone();
                    for j in 0..m {
                        let v = &a[r][j] * &f;
                        a[i][j] -= v;
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
        (RatMatrix::from_rows_or_empty(a, m), pivots)
    }

    fn from_rows_or_empty(rows: Vec<Vec<Rational>>, cols: usize) -> Self {
        if rows.is_empty() {
            RatMatrix::zeros(0, cols)
        } else {
            RatMatrix::from_rows(rows)
        }
    }

    /// Basis of the right kernel.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (k, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(k, f);
                }
                v
            })
            .collect()
    }

    /// A solution of `self * x = b` with free variables set to zero.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows);
        let aug = RatMatrix::from_rows_or_empty(
            (0..self.rows)
                .map(|i| {
                    let mut row = self.row(i).to_vec();
                    row.push(b[i].clone());
                    row
                })
                .collect(),
            self.cols + 1,
        );
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (k, &p) in pivots.iter().enumerate() {
            x[p] = r.get(k, self.cols).clone();
        }
        Some(x)
    }

    /// Numbers of positive, negative and zero eigenvalues of a symmetric
    /// matrix, computed by congruence.
    pub fn inertia(&self) -> (usize, usize, usize) {
        assert!(self.is_symmetric(), "inertia of a non-symmetric matrix");
        let n = self.rows;
        let mut a = self.to_rows();
        let (mut pos, mut neg) = (0, 0);
        for k in 0..n {
            if a[k][k].is_zero() {
                if let Some(i) = (k + 1..n).find(|&i| !a[i][i].is_zero()) {
                    a.swap(i, k);
                    for row in a.iter_mut() {
                        row.swap(i, k);
                    }
                } else if let Some((i, j)) =
                    (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero())
                {
                    // row/col i += row/col j makes the diagonal entry 2 a_ij
                    for c in 0..n {
                        let v = a[j][c].clone();
                        a[i][c] += v;
                    }
                    for row in a.iter_mut() {
                        let v = row[j].clone();
                        row[i] += v;
                    }
                    if i != k {
                        a.swap(i, k);
                        for row in a.iter_mut() {
                            row.swap(i, k);
                        }
                    }
                } else {
                    break;
                }
            }
            let d = a[k][k].clone();
            if d.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let f = &a[i][k] / &d;
                for c in k..n {
                    let v = &f * &a[k][c];
                    a[i][c] -= v;
                }
                for row in a.iter_mut().skip(k) {
                    let v = &f * &row[k];
                    row[i] -= v;
                }
            }
        }
        (pos, neg, n - pos - neg)
    }
}

/// Rank of a list of row vectors.
pub fn rank_of_rows(rows: &[Vec<Rational>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    RatMatrix::from_rows(rows.to_vec()).rank()
}

/// Determinant of a square polynomial matrix by Laplace expansion along rows,
/// memoized over the remaining column subsets.
pub fn poly_det(ring: RingId, m: &[Vec<Polynomial>]) -> Polynomial {
    let n = m.len();
    if n == 0 {
        return Polynomial::one(ring);
    }
    assert!(m.iter().all(|r| r.len() == n), "determinant of a non-square matrix");
    assert!(n <= 63, "matrix too large for minor expansion");
    let mut memo: HashMap<u64, Polynomial> = HashMap::new();
    det_rec(ring, m, 0, (1u64 << n) - 1, &mut memo)
}

fn det_rec(ring: RingId, m: &[Vec<Polynomial>], row: usize, cols: u64, memo: &mut HashMap<u64, Polynomial>) -> Polynomial {
    if cols == 0 {
        return Polynomial::one(ring);
    }
    if let Some(v) = memo.get(&cols) {
        return v.clone();
    }
    let mut acc = Polynomial::zero(ring);
    let mut sign_neg = false;
    for j in 0..m.len() {
        if cols & (1 << j) == 0 {
            continue;
        }
        let a = &m[row][j];
        if !a.is_zero() {
            let minor = det_rec(ring, m, row + 1, cols & !(1 << j), memo);
            if !minor.is_zero() {
                let t = a * &minor;
                acc = if sign_neg { &acc - &t } else { &acc + &t };
            }
        }
        sign_neg = !sign_neg;
    }
    memo.insert(cols, acc.clone());
    acc
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Cramer numerators `adj(A) b` for a square polynomial system: entry `c` is
/// `det` of `A` with column `c` replaced by `b`.
pub fn cramer_numerators(ring: RingId, a: &[Vec<Polynomial>], b: &[Polynomial]) -> Vec<Polynomial> {
    let n = a.len();
    (0..n)
        .map(|c| {
            let m: Vec<Vec<Polynomial>> = (0..n)
                .map(|i| (0..n).map(|j| if j == c { b[i].clone() } else { a[i][j].clone() }).collect())
                .collect();
            poly_det(ring, &m)
        })
        .collect()
}

/// Witness-guided kernel of a polynomial matrix.
#[derive(Clone, Debug)]
pub struct PolyKernel {
    /// Rank at the witness.
    pub rank: usize,
    /// Rows and columns of a minor that is nonzero at the witness.
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    /// Determinant of that minor.
    pub minor: Polynomial,
    /// One kernel vector per non-pivot column, with polynomial entries.
    pub vectors: Vec<Vec<Polynomial>>,
}

/// Pivot rows and columns of a rational matrix (a maximal nonsingular minor).
pub fn pivot_minor(m: &RatMatrix) -> (Vec<usize>, Vec<usize>) {
    let (_, cols) = m.rref();
    let (_, rows) = m.transpose().rref();
    (rows, cols)
}

/// Kernel of `m` over the fraction field, assuming the rank at `witness` is
/// the generic rank. Each vector is built by Cramer's rule from a minor that
/// is nonzero at the witness, so its entries are polynomials. Returns an
/// error when a vector fails to annihilate `m` identically (witness not
/// generic).
pub fn poly_kernel(
    ring: RingId,
    m: &[Vec<Polynomial>],
    ncols: usize,
    witness: &crate::poly::Point,
    reduce: &dyn Fn(&Polynomial) -> Polynomial,
) -> crate::error::Result<PolyKernel> {
    let vals: crate::error::Result<Vec<Vec<Rational>>> =
        m.iter().map(|r| r.iter().map(|e| e.evaluate(witness)).collect()).collect();
    let vals = vals?;
    let at = if vals.is_empty() { RatMatrix::zeros(0, ncols) } else { RatMatrix::from_rows(vals) };
    let (rows, cols) = pivot_minor(&at);
    let sub: Vec<Vec<Polynomial>> =
        rows.iter().map(|&i| cols.iter().map(|&j| m[i][j].clone()).collect()).collect();
    let minor = reduce(&poly_det(ring, &sub));
    let mut vectors = Vec::new();
    for f in (0..ncols).filter(|c| !cols.contains(c)) {
        let rhs: Vec<Polynomial> = rows.iter().map(|&i| m[i][f].clone()).collect();
        let nums = cramer_numerators(ring, &sub, &rhs);
        let mut v = vec![Polynomial::zero(ring); ncols];
        v[f] = minor.clone();
        for (k, &c) in cols.iter().enumerate() {
            v[c] = reduce(&-&nums[k]);
        }
        for (i, row) in m.iter().enumerate() {
            let mut acc = Polynomial::zero(ring);
            for (e, x) in row.iter().zip(&v) {
                if !e.is_zero() && !x.is_zero() {
                    acc = &acc + &(e * x);
                }
            }
            if !reduce(&acc).is_zero() {
                return Err(crate::error::Error::NonGenericWitness(format!(
                    "kernel vector for column {f} does not annihilate row {i}"
                )));
            }
        }
        vectors.push(v);
    }
    Ok(PolyKernel { rank: rows.len(), rows, cols, minor, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::GradedAlgebra;
    use crate::num::int;

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    #[test]
    fn rank_and_det() {
        let a = m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]);
        assert_eq!(a.rank(), 3);
        assert_eq!(a.det(), int(-3));
        let b = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 0, 1]]);
        assert_eq!(b.rank(), 2);
        assert_eq!(b.det(), int(0));
        assert_eq!(RatMatrix::zeros(3, 4).rank(), 0);
        assert_eq!(m(&[&[0, 1], &[1, 0]]).det(), int(-1));
    }

    #[test]
    fn nullspace_and_solve() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(a.mul_vec(v).iter().all(Zero::is_zero));
        }
        let x = a.solve(&[int(6), int(12)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![int(6), int(12)]);
        assert!(a.solve(&[int(1), int(1)]).is_none());
    }

    #[test]
    fn inertia_by_congruence() {
        assert_eq!(m(&[&[0, 1], &[1, 0]]).inertia(), (1, 1, 0));
        assert_eq!(m(&[&[2, 0, 0], &[0, 0, 0], &[0, 0, -1]]).inertia(), (1, 1, 1));
        assert_eq!(m(&[&[1, 1], &[1, 1]]).inertia(), (1, 0, 1));
        assert_eq!(m(&[&[0, 0, 1], &[0, 0, 0], &[1, 0, 0]]).inertia(), (1, 1, 1));
    }

    #[test]
    fn polynomial_determinant_matches_rational() {
        let alg = GradedAlgebra::build(2, 2).unwrap();
        let ring = alg.ring();
        let x = Polynomial::var(ring, 0);
        let c = |v: i64| Polynomial::constant(ring, int(v));
        let mat = vec![vec![x.clone(), c(1), c(0)], vec![c(2), x.clone(), c(1)], vec![c(0), c(3), x.clone()]];
        let d = poly_det(ring, &mat);
        // x^3 - 5x
        let expected = &x.pow(3) - &x.scale(&int(5));
        assert_eq!(d, expected);
        let b = vec![c(1), c(0), c(0)];
        let nums = cramer_numerators(ring, &mat, &b);
        assert_eq!(nums[0], &x.pow(2) - &c(3));
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
    }
}
