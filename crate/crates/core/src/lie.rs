//! Free nilpotent Lie algebras of rank `r` and step `s` with a fixed Hall-type
//! basis and a precomputed bracket table.
//!
//! Basis convention, by degree:
//!
//! * degree 1: generators `x1 .. xr`;
//! * degree 2: `x_ij = [x_i, x_j]` with `i < j`;
//! * degree 3: `x_abc = [x_a, x_bc]` with `b < c` and `a <= c`. For every triple
//!   `i < j < k` the word `x_kij` is not a basis word; it is rewritten through
//!   `x_ijk - x_jik + x_kij = 0`;
//! * degree 4: left-normed words `[x_a, w]` with `w` a degree-3 basis word,
//!   selected greedily in `(a, w)` order among linearly independent candidates.
//!   For rank 2 this yields `x1112, x1212, x2212`.
//!
//! The bracket table is computed once by realising every basis word inside the
//! free associative algebra (brackets become commutators of words) and
//! decomposing commutators back onto the basis of the target degree.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use crate::num::Rational;

/// Schema version of [`BasisDump`].
pub const BASIS_SCHEMA_VERSION: u32 = 1;

/// Möbius function.
fn mobius(mut n: u64) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Dimension of the degree-`m` component of the free Lie algebra of rank `r`
/// (Witt's formula).
pub fn graded_dimension(r: usize, m: usize) -> u64 {
    assert!(m >= 1, "degree must be positive");
    let r = r as i128;
    let mut sum: i128 = 0;
    for d in 1..=m {
        if m.is_multiple_of(d) {
            let mu = mobius(d as u64) as i128;
            if mu != 0 {
                sum += mu * r.pow((m / d) as u32);
            }
        }
    }
    (sum / m as i128) as u64
}

/// Identifies the algebra a polynomial or point lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingId {
    pub rank: usize,
    pub step: usize,
}

impl fmt::Display for RingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(r={}, s={})", self.rank, self.step)
    }
}

/// A bracketed word in the generators. Generator indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HallWord {
    Gen(usize),
    Bracket(Box<HallWord>, Box<HallWord>),
}

impl HallWord {
    pub fn bracket(left: HallWord, right: HallWord) -> Self {
        HallWord::Bracket(Box::new(left), Box::new(right))
    }

    pub fn degree(&self) -> usize {
        match self {
            HallWord::Gen(_) => 1,
            HallWord::Bracket(l, r) => l.degree() + r.degree(),
        }
    }

    /// Index sequence of a right-nested word `[a1, [a2, ... [a_{m-1}, a_m]]]`.
    /// Returns `None` when the word is not of that shape.
    pub fn indices(&self) -> Option<Vec<usize>> {
        match self {
            HallWord::Gen(i) => Some(vec![*i]),
            HallWord::Bracket(l, r) => match **l {
                HallWord::Gen(a) => {
                    let mut rest = r.indices()?;
                    rest.insert(0, a);
                    Some(rest)
                }
                _ => None,
            },
        }
    }

    /// Right-nested word built from an index sequence.
    pub fn from_indices(indices: &[usize]) -> Self {
        match indices {
            [] => panic!("empty index sequence"),
            [i] => HallWord::Gen(*i),
            [a, rest @ ..] => HallWord::bracket(HallWord::Gen(*a), HallWord::from_indices(rest)),
        }
    }

    /// Expansion in the free associative algebra: `[u, v] = uv - vu`.
    fn tensor(&self) -> Tensor {
        match self {
            HallWord::Gen(i) => {
                let mut t = Tensor::new();
                t.insert(vec![*i as u16], 1);
                t
            }
            HallWord::Bracket(l, r) => commutator(&l.tensor(), &r.tensor()),
        }
    }
}

type Tensor = BTreeMap<Vec<u16>, i64>;

fn commutator(u: &Tensor, v: &Tensor) -> Tensor {
    let mut out = Tensor::new();
    for (wu, cu) in u {
        for (wv, cv) in v {
            let mut uv = wu.clone();
            uv.extend_from_slice(wv);
            *out.entry(uv).or_insert(0) += cu * cv;
            let mut vu = wv.clone();
            vu.extend_from_slice(wu);
            *out.entry(vu).or_insert(0) -= cu * cv;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Incremental row echelon form over the rationals, remembering how every row
/// is expressed through the labelled vectors inserted so far.
struct Echelon {
    rows: Vec<EchelonRow>,
}

struct EchelonRow {
    pivot: Vec<u16>,
    vector: BTreeMap<Vec<u16>, Rational>,
    combo: BTreeMap<usize, Rational>,
}

impl Echelon {
    fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    fn reduce(
        &self,
        mut v: BTreeMap<Vec<u16>, Rational>,
    ) -> (BTreeMap<Vec<u16>, Rational>, BTreeMap<usize, Rational>) {
        let mut combo: BTreeMap<usize, Rational> = BTreeMap::new();
        for row in &self.rows {
            let Some(c) = v.get(&row.pivot).cloned() else { continue };
            let factor = c / &row.vector[&row.pivot];
            for (w, x) in &row.vector {
                let e = v.entry(w.clone()).or_insert_with(Rational::zero);
                *e -= &factor * x;
                if e.is_zero() {
                    v.remove(w);
                }
            }
            for (l, x) in &row.combo {
                let e = combo.entry(*l).or_insert_with(Rational::zero);
                *e += &factor * x;
                if e.is_zero() {
                    combo.remove(l);
                }
            }
        }
        (v, combo)
    }

    /// Inserts a labelled vector; returns false (and leaves the echelon
    /// unchanged) when it is dependent on the rows already present.
    fn insert(&mut self, v: &Tensor, label: usize) -> bool {
        let v: BTreeMap<Vec<u16>, Rational> =
            v.iter().map(|(w, c)| (w.clone(), Rational::from_integer((*c).into()))).collect();
        let (residual, combo) = self.reduce(v);
        let Some(pivot) = residual.keys().next_back().cloned() else {
            return false;
        };
        let mut row_combo: BTreeMap<usize, Rational> =
            combo.into_iter().map(|(l, c)| (l, -c)).collect();
        row_combo.insert(label, Rational::one());
        self.rows.push(EchelonRow { pivot, vector: residual, combo: row_combo });
        true
    }

    fn decompose(&self, v: &Tensor) -> Option<BTreeMap<usize, Rational>> {
        let v: BTreeMap<Vec<u16>, Rational> =
            v.iter().map(|(w, c)| (w.clone(), Rational::from_integer((*c).into()))).collect();
        let (residual, combo) = self.reduce(v);
        residual.is_empty().then_some(combo)
    }
}

/// Element of the Lie algebra: sparse map from basis index to coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LieElement {
    terms: BTreeMap<usize, Rational>,
}

impl LieElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(index: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(index, Rational::one());
        LieElement { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut e = LieElement::zero();
        for (i, c) in terms {
            e.add_term(i, &c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, index: usize) -> Rational {
        self.terms.get(&index).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.terms.iter().map(|(i, c)| (*i, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, index: usize, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(index).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&index);
        }
    }

    pub fn add(&self, other: &LieElement) -> LieElement {
        let mut out = self.clone();
        for (i, c) in &other.terms {
            out.add_term(*i, c);
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> LieElement {
        if c.is_zero() {
            return LieElement::zero();
        }
        LieElement { terms: self.terms.iter().map(|(i, x)| (*i, x * c)).collect() }
    }

    pub fn neg(&self) -> LieElement {
        self.scale(&-Rational::one())
    }

    /// Component of the given degree.
    pub fn homogeneous(&self, alg: &GradedAlgebra, degree: usize) -> LieElement {
        LieElement {
            terms: self
                .terms
                .iter()
                .filter(|(i, _)| alg.degree_of(**i) == degree)
                .map(|(i, c)| (*i, c.clone()))
                .collect(),
        }
    }
}

/// One record of the basis dump.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisRecord {
    pub index: usize,
    pub degree: usize,
    pub name: String,
}

/// Versioned, machine-readable basis listing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisDump {
    pub version: u32,
    pub rank: usize,
    pub step: usize,
    pub dimension: usize,
    pub basis: Vec<BasisRecord>,
}

/// Free nilpotent Lie algebra of rank `r` and step `s`. Immutable once built.
#[derive(Clone, Debug)]
pub struct GradedAlgebra {
    rank: usize,
    step: usize,
    words: Vec<HallWord>,
    degrees: Vec<usize>,
    names: Vec<String>,
    offsets: Vec<usize>,
    name_index: HashMap<String, usize>,
    table: Vec<Vec<LieElement>>,
}

impl GradedAlgebra {
    /// Builds the algebra with its basis and complete bracket table.
    pub fn build(rank: usize, step: usize) -> Result<Self> {
        if rank < 2 {
            return Err(Error::InvalidRank(rank));
        }
        if !(2..=4).contains(&step) {
            return Err(Error::UnsupportedStep(step, "2..=4"));
        }
        let mut words: Vec<HallWord> = Vec::new();
        let mut offsets = vec![0];
        let mut echelons: Vec<Echelon> = Vec::new();

        // degree 1
        let mut ech = Echelon::new();
        for i in 1..=rank {
            let w = HallWord::Gen(i);
            ech.insert(&w.tensor(), words.len());
            words.push(w);
        }
        echelons.push(ech);
        offsets.push(words.len());

        // degree 2
        let mut ech = Echelon::new();
        for i in 1..=rank {
            for j in i + 1..=rank {
                let w = HallWord::from_indices(&[i, j]);
                ech.insert(&w.tensor(), words.len());
                words.push(w);
            }
        }
        echelons.push(ech);
        offsets.push(words.len());

        if step >= 3 {
            let mut ech = Echelon::new();
            for a in 1..=rank {
                for b in 1..=rank {
                    for c in b + 1..=rank {
                        if a <= c {
                            let w = HallWord::from_indices(&[a, b, c]);
                            ech.insert(&w.tensor(), words.len());
                            words.push(w);
                        }
                    }
                }
            }
            echelons.push(ech);
            offsets.push(words.len());
        }

        if step >= 4 {
            let deg3: Vec<HallWord> = words[offsets[2]..offsets[3]].to_vec();
            let mut ech = Echelon::new();
            for a in 1..=rank {
                for w3 in &deg3 {
                    let w = HallWord::bracket(HallWord::Gen(a), w3.clone());
                    if ech.insert(&w.tensor(), words.len()) {
                        words.push(w);
                    }
                }
            }
            echelons.push(ech);
            offsets.push(words.len());
        }

        let degrees: Vec<usize> = words.iter().map(HallWord::degree).collect();
        let sep = if rank <= 9 { "" } else { "_" };
        let names: Vec<String> = words
            .iter()
            .map(|w| {
                let idx = w.indices().expect("basis words are right-nested");
                let parts: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
                format!("x{}", parts.join(sep))
            })
            .collect();
        let name_index = names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();

        let n = words.len();
        let tensors: Vec<Tensor> = words.iter().map(HallWord::tensor).collect();
        let mut table = vec![vec![LieElement::zero(); n]; n];
        for a in 0..n {
            for b in a + 1..n {
                let deg = degrees[a] + degrees[b];
                if deg > step {
                    continue;
                }
                let comm = commutator(&tensors[a], &tensors[b]);
                let combo = echelons[deg - 1]
                    .decompose(&comm)
                    .expect("commutator of basis words lies in the span of the next degree");
                let e = LieElement { terms: combo };
                table[b][a] = e.neg();
                table[a][b] = e;
            }
        }

        Ok(GradedAlgebra { rank, step, words, degrees, names, offsets, name_index, table })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn ring(&self) -> RingId {
        RingId { rank: self.rank, step: self.step }
    }

    /// Total dimension.
    pub fn dim(&self) -> usize {
        self.words.len()
    }

    /// Dimension of the degree-`m` component (0 beyond the step).
    pub fn dim_degree(&self, m: usize) -> usize {
        if m == 0 || m > self.step {
            0
        } else {
            self.offsets[m] - self.offsets[m - 1]
        }
    }

    /// Basis indices of degree `m`.
    pub fn degree_range(&self, m: usize) -> std::ops::Range<usize> {
        if m == 0 || m > self.step {
            0..0
        } else {
            self.offsets[m - 1]..self.offsets[m]
        }
    }

    pub fn degree_of(&self, index: usize) -> usize {
        self.degrees[index]
    }

    pub fn word(&self, index: usize) -> &HallWord {
        &self.words[index]
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.name_index.get(name).copied()
    }

    /// Basis index of generator `i` (1-based).
    pub fn generator(&self, i: usize) -> usize {
        i - 1
    }

    /// Admissibility of a word under this algebra's basis convention.
    pub fn is_admissible(&self, word: &HallWord) -> bool {
        let Some(idx) = word.indices() else { return false };
        if idx.iter().any(|&i| i == 0 || i > self.rank) || idx.len() > self.step {
            return false;
        }
        match idx.as_slice() {
            [_] => true,
            [i, j] => i < j,
            [a, b, c] => b < c && a <= c,
            // degree 4 words are the greedy selection made at build time
            _ => self.words.iter().any(|w| w == word),
        }
    }

    /// Normal form of the bracket of two basis words.
    pub fn bracket_basis(&self, a: usize, b: usize) -> &LieElement {
        &self.table[a][b]
    }

    fn check(&self, e: &LieElement) -> Result<()> {
        match e.terms.keys().find(|&&i| i >= self.dim()) {
            Some(&i) => Err(Error::UnknownBasisWord(i)),
            None => Ok(()),
        }
    }

    /// Lie bracket in normal form.
    pub fn bracket(&self, a: &LieElement, b: &LieElement) -> Result<LieElement> {
        self.check(a)?;
        self.check(b)?;
        let mut out = LieElement::zero();
        for (i, ca) in &a.terms {
            for (j, cb) in &b.terms {
                let prod = ca * cb;
                for (k, ck) in &self.table[*i][*j].terms {
                    out.add_term(*k, &(&prod * ck));
                }
            }
        }
        Ok(out)
    }

    /// Normal form of the iterated bracket `[x_i1, [x_i2, ... [x_j, x_k]]]`.
    pub fn indexed_symbol(&self, indices: &[usize]) -> Result<LieElement> {
        if indices.is_empty() {
            return Err(Error::Input("empty index sequence".into()));
        }
        if indices.len() > self.step {
            return Err(Error::WordTooLong { len: indices.len(), step: self.step });
        }
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > self.rank) {
            return Err(Error::IndexOutOfRange { index: bad, rank: self.rank });
        }
        let mut acc = LieElement::basis(self.generator(*indices.last().unwrap()));
        for &i in indices[..indices.len() - 1].iter().rev() {
            acc = self.bracket(&LieElement::basis(self.generator(i)), &acc)?;
        }
        Ok(acc)
    }

    /// Paper-style name of a symbol (`x` followed by subscripts).
    pub fn symbol_name(&self, indices: &[usize]) -> String {
        let sep = if self.rank <= 9 { "" } else { "_" };
        let parts: Vec<String> = indices.iter().map(|i| i.to_string()).collect();
        format!("x{}", parts.join(sep))
    }

    /// Resolves a symbol name: a basis name, or any iterated bracket symbol.
    pub fn resolve_symbol(&self, name: &str) -> Result<LieElement> {
        if let Some(i) = self.index_of(name) {
            return Ok(LieElement::basis(i));
        }
        let body = name.strip_prefix('x').ok_or_else(|| Error::UnknownSymbol(name.into()))?;
        let indices: Option<Vec<usize>> = if self.rank <= 9 && !body.contains('_') {
            body.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect()
        } else {
            body.split('_').map(|p| p.parse().ok()).collect()
        };
        match indices {
            Some(idx) if !idx.is_empty() => self.indexed_symbol(&idx).map_err(|e| match e {
                Error::IndexOutOfRange { .. } | Error::WordTooLong { .. } => {
                    Error::UnknownSymbol(name.into())
                }
                other => other,
            }),
            _ => Err(Error::UnknownSymbol(name.into())),
        }
    }

    pub fn basis_dump(&self) -> BasisDump {
        BasisDump {
            version: BASIS_SCHEMA_VERSION,
            rank: self.rank,
            step: self.step,
            dimension: self.dim(),
            basis: (0..self.dim())
                .map(|i| BasisRecord { index: i, degree: self.degrees[i], name: self.names[i].clone() })
                .collect(),
        }
    }

    pub fn basis_text(&self) -> String {
        let mut s = String::new();
        for i in 0..self.dim() {
            s.push_str(&format!("{:>4}  {}  {}\n", i, self.degrees[i], self.names[i]));
        }
        s
    }

    /// Human-readable form of an element.
    pub fn format_element(&self, e: &LieElement) -> String {
        if e.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (i, c)) in e.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !abs.is_one() {
                out.push_str(&format!("{}*", abs));
            }
            out.push_str(self.name(i));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn el(alg: &GradedAlgebra, terms: &[(&str, i64)]) -> LieElement {
        LieElement::from_terms(terms.iter().map(|(n, c)| (alg.index_of(n).unwrap(), q(*c))))
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(graded_dimension(2, 3), 2);
        assert_eq!(graded_dimension(3, 3), 8);
        assert_eq!(graded_dimension(2, 4), 3);
        assert_eq!(graded_dimension(4, 2), 6);
        assert_eq!(graded_dimension(5, 1), 5);
    }

    #[test]
    fn mobius_values() {
        let expected = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1];
        for (n, mu) in expected.iter().enumerate() {
            assert_eq!(mobius(n as u64 + 1), *mu);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(GradedAlgebra::build(1, 3), Err(Error::InvalidRank(1))));
        assert!(matches!(GradedAlgebra::build(2, 5), Err(Error::UnsupportedStep(5, _))));
        assert!(matches!(GradedAlgebra::build(2, 1), Err(Error::UnsupportedStep(1, _))));
    }

    #[test]
    fn cartan_relations() {
        let alg = GradedAlgebra::build(2, 3).unwrap();
        assert_eq!(alg.dim(), 5);
        assert_eq!(alg.names(), &["x1", "x2", "x12", "x112", "x212"]);
        let x1 = el(&alg, &[("x1", 1)]);
        let x2 = el(&alg, &[("x2", 1)]);
        let x12 = el(&alg, &[("x12", 1)]);
        assert_eq!(alg.bracket(&x1, &x2).unwrap(), x12);
        assert_eq!(alg.bracket(&x1, &x12).unwrap(), el(&alg, &[("x112", 1)]));
        assert_eq!(alg.bracket(&x2, &x12).unwrap(), el(&alg, &[("x212", 1)]));
        assert!(alg.bracket(&x1, &x1).unwrap().is_zero());
    }

    #[test]
    fn rank_two_step_four() {
        let alg = GradedAlgebra::build(2, 4).unwrap();
        assert_eq!(alg.dim(), 8);
        assert_eq!(&alg.names()[5..], &["x1112", "x1212", "x2212"]);
        let x1 = el(&alg, &[("x1", 1)]);
        let x2 = el(&alg, &[("x2", 1)]);
        let x112 = el(&alg, &[("x112", 1)]);
        let x212 = el(&alg, &[("x212", 1)]);
        let x1212 = el(&alg, &[("x1212", 1)]);
        assert_eq!(alg.bracket(&x1, &x212).unwrap(), x1212);
        assert_eq!(alg.bracket(&x2, &x112).unwrap(), x1212);
        assert_eq!(alg.bracket(&x1, &x112).unwrap(), el(&alg, &[("x1112", 1)]));
    }

    #[test]
    fn jacobi_elimination_in_rank_three() {
        let alg = GradedAlgebra::build(3, 3).unwrap();
        assert_eq!(alg.dim(), 14);
        assert!(alg.index_of("x312").is_none());
        let x3 = el(&alg, &[("x3", 1)]);
        let x12 = el(&alg, &[("x12", 1)]);
        let expected = el(&alg, &[("x213", 1), ("x123", -1)]);
        assert_eq!(alg.bracket(&x3, &x12).unwrap(), expected);
        assert_eq!(alg.indexed_symbol(&[3, 1, 2]).unwrap(), expected);
    }

    #[test]
    fn indexed_symbols() {
        let alg = GradedAlgebra::build(2, 3).unwrap();
        assert_eq!(alg.indexed_symbol(&[1, 1, 2]).unwrap(), el(&alg, &[("x112", 1)]));
        assert!(alg.indexed_symbol(&[2, 2]).unwrap().is_zero());
        assert_eq!(alg.indexed_symbol(&[2, 1]).unwrap(), el(&alg, &[("x12", -1)]));
        assert!(matches!(alg.indexed_symbol(&[3, 1]), Err(Error::IndexOutOfRange { index: 3, .. })));
        assert!(matches!(alg.indexed_symbol(&[1, 1, 1, 2]), Err(Error::WordTooLong { len: 4, .. })));
        assert_eq!(alg.resolve_symbol("x12").unwrap(), el(&alg, &[("x12", 1)]));
        assert!(matches!(alg.resolve_symbol("y1"), Err(Error::UnknownSymbol(_))));
    }

    #[test]
    fn unknown_basis_word_rejected() {
        let alg = GradedAlgebra::build(2, 2).unwrap();
        let bad = LieElement::basis(99);
        assert!(matches!(alg.bracket(&bad, &LieElement::basis(0)), Err(Error::UnknownBasisWord(99))));
    }

    #[test]
    fn admissibility() {
        let alg = GradedAlgebra::build(3, 3).unwrap();
        assert!(alg.is_admissible(&HallWord::from_indices(&[1, 2])));
        assert!(!alg.is_admissible(&HallWord::from_indices(&[2, 1])));
        assert!(alg.is_admissible(&HallWord::from_indices(&[3, 1, 3])));
        assert!(!alg.is_admissible(&HallWord::from_indices(&[3, 1, 2])));
        assert!(!alg.is_admissible(&HallWord::from_indices(&[4, 1, 2])));
        for i in 0..alg.dim() {
            assert!(alg.is_admissible(alg.word(i)));
        }
    }

    #[test]
    fn homogeneous_components() {
        let alg = GradedAlgebra::build(2, 3).unwrap();
        let e = el(&alg, &[("x1", 2), ("x12", 3), ("x212", -1)]);
        assert_eq!(e.homogeneous(&alg, 2), el(&alg, &[("x12", 3)]));
        assert!(e.homogeneous(&alg, 4).is_zero());
    }

    #[test]
    fn basis_dump_is_stable() {
        let alg = GradedAlgebra::build(2, 3).unwrap();
        let json = serde_json::to_string(&alg.basis_dump()).unwrap();
        assert_eq!(
            json,
            r#"{"version":1,"rank":2,"step":3,"dimension":5,"basis":[{"index":0,"degree":1,"name":"x1"},{"index":1,"degree":1,"name":"x2"},{"index":2,"degree":2,"name":"x12"},{"index":3,"degree":3,"name":"x112"},{"index":4,"degree":3,"name":"x212"}]}"#
        );
    }
}
