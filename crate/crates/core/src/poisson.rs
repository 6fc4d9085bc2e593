//! The Poisson bivector `B_p(a, b) = p([a, b])` as a matrix of linear
//! polynomials, its graded blocks, and an explicit point where the
//! `(g_1, g_{s-1})` block has full rank.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{GradedAlgebra, LieElement, RingId};
use crate::linalg::RatMatrix;
use crate::num::Rational;
use crate::parse::format_polynomial;
use crate::poly::{Point, Polynomial};

/// Matrix of polynomials with labelled rows and columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    pub ring: RingId,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub entries: Vec<Vec<Polynomial>>,
}

impl PolyMatrix {
    pub fn new(ring: RingId, row_labels: Vec<String>, col_labels: Vec<String>, entries: Vec<Vec<Polynomial>>) -> Self {
        assert_eq!(entries.len(), row_labels.len());
        assert!(entries.iter().all(|r| r.len() == col_labels.len()));
        PolyMatrix { ring, row_labels, col_labels, entries }
    }

    pub fn nrows(&self) -> usize {
        self.entries.len()
    }

    pub fn ncols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i][j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Polynomial::is_zero)
    }

    pub fn transpose(&self) -> PolyMatrix {
        let entries =
            (0..self.ncols()).map(|j| (0..self.nrows()).map(|i| self.entries[i][j].clone()).collect()).collect();
        PolyMatrix::new(self.ring, self.col_labels.clone(), self.row_labels.clone(), entries)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        PolyMatrix::new(
            self.ring,
            rows.iter().map(|&i| self.row_labels[i].clone()).collect(),
            cols.iter().map(|&j| self.col_labels[j].clone()).collect(),
            rows.iter().map(|&i| cols.iter().map(|&j| self.entries[i][j].clone()).collect()).collect(),
        )
    }

    pub fn evaluate(&self, p: &Point) -> Result<RatMatrix> {
        let rows: Result<Vec<Vec<Rational>>> =
            self.entries.iter().map(|r| r.iter().map(|e| e.evaluate(p)).collect()).collect();
        let rows = rows?;
        Ok(if rows.is_empty() { RatMatrix::zeros(0, self.ncols()) } else { RatMatrix::from_rows(rows) })
    }

    pub fn rank_at(&self, p: &Point) -> Result<usize> {
        Ok(self.evaluate(p)?.rank())
    }

    pub fn dump(&self, alg: &GradedAlgebra) -> MatrixDump {
        MatrixDump {
            rows: self.row_labels.clone(),
            cols: self.col_labels.clone(),
            entries: self.entries.iter().map(|r| r.iter().map(|e| format_polynomial(alg, e)).collect()).collect(),
        }
    }

    pub fn to_text(&self, alg: &GradedAlgebra) -> String {
        let d = self.dump(alg);
        let width = d.entries.iter().flatten().chain(&d.cols).map(String::len).max().unwrap_or(1);
        let lw = d.rows.iter().map(String::len).max().unwrap_or(0);
        let mut s = format!("{:lw$}", "");
        for c in &d.cols {
            s.push_str(&format!("  {c:>width$}"));
        }
        s.push('\n');
        for (label, row) in d.rows.iter().zip(&d.entries) {
            s.push_str(&format!("{label:lw$}"));
            for e in row {
                s.push_str(&format!("  {e:>width$}"));
            }
            s.push('\n');
        }
        s
    }
}

/// Serialized matrix: entries in polynomial text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDump {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub entries: Vec<Vec<String>>,
}

fn bracket_matrix(alg: &GradedAlgebra, rows: &[usize], cols: &[usize]) -> PolyMatrix {
    let ring = alg.ring();
    PolyMatrix::new(
        ring,
        rows.iter().map(|&i| alg.name(i).to_string()).collect(),
        cols.iter().map(|&j| alg.name(j).to_string()).collect(),
        rows.iter()
            .map(|&i| cols.iter().map(|&j| Polynomial::linear(ring, alg.bracket_basis(i, j))).collect())
            .collect(),
    )
}

/// Full bivector over the whole basis.
pub fn bivector(alg: &GradedAlgebra) -> PolyMatrix {
    let all: Vec<usize> = (0..alg.dim()).collect();
    bracket_matrix(alg, &all, &all)
}

/// The `(g_m, g_n)` block.
pub fn block(alg: &GradedAlgebra, m: usize, n: usize) -> Result<PolyMatrix> {
    if m == 0 || n == 0 || m > alg.step() || n > alg.step() {
        return Err(Error::Input(format!("block ({m},{n}) outside degrees 1..={}", alg.step())));
    }
    let rows: Vec<usize> = alg.degree_range(m).collect();
    let cols: Vec<usize> = alg.degree_range(n).collect();
    Ok(bracket_matrix(alg, &rows, &cols))
}

/// Bracket matrix between arbitrary lists of elements: entry `(i, j)` is
/// `<[a_i, b_j], p>` as a polynomial.
pub fn pairing_matrix(alg: &GradedAlgebra, a: &[LieElement], b: &[LieElement]) -> Result<Vec<Vec<Polynomial>>> {
    let ring = alg.ring();
    a.iter()
        .map(|x| b.iter().map(|y| Ok(Polynomial::linear(ring, &alg.bracket(x, y)?))).collect())
        .collect()
}

/// A point where the `(g_1, g_{s-1})` block has rank `r`.
///
/// With `eta_i = (ad x_i)^{s-2} x_{i+1}` the coordinates are chosen so that
/// `p([x_j, eta_i]) = delta_ij`; the assignment is the minimal solution of a
/// small linear system (free coordinates set to zero).
pub fn make_generic_point(alg: &GradedAlgebra) -> Result<Point> {
    let r = alg.rank();
    let s = alg.step();
    if alg.dim_degree(s - 1) < r {
        return Err(Error::Precondition(format!(
            "dim g_{} = {} is smaller than dim g_1 = {}; the (g_1, g_{}) block cannot have full rank",
            s - 1,
            alg.dim_degree(s - 1),
            r,
            s - 1
        )));
    }
    let etas: Vec<LieElement> = (1..=r)
        .map(|i| {
            let mut idx = vec![i; s - 2];
            idx.push(i % r + 1);
            alg.indexed_symbol(&idx)
        })
        .collect::<Result<_>>()?;
    // unknowns: coordinates of g_s
    let top: Vec<usize> = alg.degree_range(s).collect();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (i, eta) in etas.iter().enumerate() {
        for j in 0..r {
            let br = alg.bracket(&LieElement::basis(alg.generator(j + 1)), eta)?;
            rows.push(top.iter().map(|&t| br.coeff(t)).collect::<Vec<_>>());
            rhs.push(if i == j { Rational::one() } else { Rational::zero() });
        }
    }
    let sol = RatMatrix::from_rows(rows)
        .solve(&rhs)
        .ok_or_else(|| Error::Inconsistency("pairing system for the generic point is unsolvable".into()))?;
    let mut p = Point::zero(alg);
    for (k, &t) in top.iter().enumerate() {
        p.set(t, sol[k].clone());
    }
    Ok(p)
}

/// Element of g whose coordinates are polynomials (an element of
/// `g (x) S(g)`), e.g. a kernel vector computed over the polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyElement {
    ring: RingId,
    terms: BTreeMap<usize, Polynomial>,
}

impl PolyElement {
    pub fn zero(ring: RingId) -> Self {
        PolyElement { ring, terms: BTreeMap::new() }
    }

    pub fn from_lie(ring: RingId, e: &LieElement) -> Self {
        let mut out = PolyElement::zero(ring);
        for (i, c) in e.iter() {
            out.add_term(i, &Polynomial::constant(ring, c.clone()));
        }
        out
    }

    /// `sum_k coeffs[k] * basis[k]`.
    pub fn combination(ring: RingId, coeffs: &[Polynomial], basis: &[usize]) -> Self {
        let mut out = PolyElement::zero(ring);
        for (c, &b) in coeffs.iter().zip(basis) {
            out.add_term(b, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: usize) -> Polynomial {
        self.terms.get(&i).cloned().unwrap_or_else(|| Polynomial::zero(self.ring))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Polynomial)> {
        self.terms.iter().map(|(i, c)| (*i, c))
    }

    pub fn add_term(&mut self, i: usize, c: &Polynomial) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(i).or_insert_with(|| Polynomial::zero(c.ring()));
        *e = &*e + c;
        if e.is_zero() {
            self.terms.remove(&i);
        }
    }

    pub fn add(&self, other: &PolyElement) -> PolyElement {
        let mut out = self.clone();
        for (i, c) in &other.terms {
            out.add_term(*i, c);
        }
        out
    }

    pub fn scale(&self, c: &Polynomial) -> PolyElement {
        let mut out = PolyElement::zero(self.ring);
        for (i, x) in &self.terms {
            out.add_term(*i, &(x * c));
        }
        out
    }

    pub fn map(&self, f: impl Fn(&Polynomial) -> Polynomial) -> PolyElement {
        let mut out = PolyElement::zero(self.ring);
        for (i, x) in &self.terms {
            out.add_term(*i, &f(x));
        }
        out
    }

    /// `[e, self]` for a constant element `e`.
    pub fn bracket_left(&self, alg: &GradedAlgebra, e: &LieElement) -> Result<PolyElement> {
        let mut out = PolyElement::zero(self.ring);
        for (k, c) in &self.terms {
            let br = alg.bracket(e, &LieElement::basis(*k))?;
            for (j, x) in br.iter() {
                out.add_term(j, &c.scale(x));
            }
        }
        Ok(out)
    }

    /// `[self, other]` with both sides polynomial.
    pub fn bracket(&self, alg: &GradedAlgebra, other: &PolyElement) -> PolyElement {
        let mut out = PolyElement::zero(self.ring);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let e = alg.bracket_basis(*a, *b);
                if e.is_zero() {
                    continue;
                }
                let prod = ca * cb;
                for (j, x) in e.iter() {
                    out.add_term(j, &prod.scale(x));
                }
            }
        }
        out
    }

    /// The function `<self, p>`: `sum_k c_k x_k`.
    pub fn pair(&self) -> Polynomial {
        let mut out = Polynomial::zero(self.ring);
        for (k, c) in &self.terms {
            out = &out + &(c * &Polynomial::var(self.ring, *k));
        }
        out
    }

    /// Value at a point: a constant Lie element.
    pub fn evaluate(&self, p: &Point) -> Result<LieElement> {
        let mut out = LieElement::zero();
        for (k, c) in &self.terms {
            out.add_term(*k, &c.evaluate(p)?);
        }
        Ok(out)
    }

    pub fn format(&self, alg: &GradedAlgebra) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (n, (k, c)) in self.terms.iter().enumerate() {
            let text = format_polynomial(alg, c);
            let single = c.len() == 1;
            let (neg, body) = match text.strip_prefix('-') {
                Some(rest) if single => (true, rest.to_string()),
                _ => (false, text),
            };
            if n > 0 {
                out.push_str(if neg { " - " } else { " + " });
            } else if neg {
                out.push('-');
            }
            match body.as_str() {
                "1" => {}
                b if single => {
                    out.push_str(b);
                    out.push('*');
                }
                b => {
                    out.push('(');
                    out.push_str(b);
                    out.push_str(")*");
                }
            }
            out.push_str(alg.name(*k));
        }
        out
    }
}

/// Values of the `(g_1, g_{s-1})` block at `p`, as used by rank tests.
pub fn top_block(alg: &GradedAlgebra) -> PolyMatrix {
    block(alg, 1, alg.step() - 1).expect("valid degrees")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::int;
    use crate::parse::parse_polynomial;

    #[test]
    fn cartan_entries() {
        let alg = GradedAlgebra::build(2, 3).unwrap();
        let b = bivector(&alg);
        let ix = |n: &str| alg.index_of(n).unwrap();
        assert_eq!(b.get(ix("x1"), ix("x2")), &parse_polynomial(&alg, "x12").unwrap());
        assert_eq!(b.get(ix("x1"), ix("x12")), &parse_polynomial(&alg, "x112").unwrap());
        for j in 0..alg.dim() {
            assert!(b.get(ix("x112"), j).is_zero());
            assert!(b.get(j, j).is_zero());
        }
    }

    #[test]
    fn jacobi_entry_in_rank_three() {
        let alg = GradedAlgebra::build(3, 3).unwrap();
        let b = bivector(&alg);
        let e = b.get(alg.index_of("x3").unwrap(), alg.index_of("x12").unwrap());
        assert_eq!(e, &parse_polynomial(&alg, "x213 - x123").unwrap());
    }

    #[test]
    fn block_shapes() {
        let alg = GradedAlgebra::build(3, 3).unwrap();
        let b12 = block(&alg, 1, 2).unwrap();
        assert_eq!((b12.nrows(), b12.ncols()), (3, 3));
        assert!(block(&alg, 3, 3).unwrap().is_zero());
        let alg4 = GradedAlgebra::build(4, 3).unwrap();
        let b12 = block(&alg4, 1, 2).unwrap();
        assert_eq!((b12.nrows(), b12.ncols()), (4, 6));
        assert!(block(&alg4, 0, 1).is_err());
    }

    #[test]
    fn cartan_evaluation() {
        let alg = GradedAlgebra::build(2, 3).unwrap();
        let b12 = block(&alg, 1, 2).unwrap();
        let p = Point::from_names(&alg, [("x112", int(1))]).unwrap();
        let m = b12.evaluate(&p).unwrap();
        assert_eq!(m.to_rows(), vec![vec![int(1)], vec![int(0)]]);
        assert_eq!(b12.rank_at(&Point::zero(&alg)).unwrap(), 0);
    }

    #[test]
    fn generic_points() {
        for (r, s) in [(3, 3), (4, 3), (5, 3), (3, 4), (2, 4)] {
            let alg = GradedAlgebra::build(r, s).unwrap();
            let p = make_generic_point(&alg).unwrap();
            assert_eq!(top_block(&alg).rank_at(&p).unwrap(), r, "(r,s)=({r},{s})");
        }
        let cartan = GradedAlgebra::build(2, 3).unwrap();
        assert!(matches!(make_generic_point(&cartan), Err(Error::Precondition(_))));
    }

    #[test]
    fn rank_three_generic_point_values() {
        let alg = GradedAlgebra::build(3, 3).unwrap();
        let p = make_generic_point(&alg).unwrap();
        let nonzero: Vec<&str> =
            (0..alg.dim()).filter(|&i| !p.get(i).is_zero()).map(|i| alg.name(i)).collect();
        assert_eq!(nonzero, vec!["x112", "x223", "x313"]);
    }
}
