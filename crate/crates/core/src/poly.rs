//! Exact multivariate polynomials over the rationals in the coordinates of a
//! Lie algebra, i.e. elements of the symmetric algebra S(g) viewed as
//! functions on g*.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lie::{GradedAlgebra, LieElement, RingId};
use crate::num::Rational;

/// Sparse exponent vector, sorted by variable index, no zero exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(u32, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: usize) -> Self {
        Monomial(vec![(v as u32, 1)])
    }

    pub fn from_exponents(mut exps: Vec<(u32, u32)>) -> Self {
        exps.retain(|&(_, e)| e > 0);
        exps.sort_unstable();
        let mut out: Vec<(u32, u32)> = Vec::with_capacity(exps.len());
        for (v, e) in exps {
            match out.last_mut() {
                Some((lv, le)) if *lv == v => *le += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: usize) -> u32 {
        match self.0.binary_search_by_key(&(v as u32), |&(x, _)| x) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
    }

    pub fn factors(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == v {
                let d = other.0[j].1;
                j += 1;
                match e.cmp(&d) {
                    Ordering::Less => return None,
                    Ordering::Equal => continue,
                    Ordering::Greater => out.push((v, e - d)),
                }
            } else {
                out.push((v, e));
            }
        }
        (j == other.0.len()).then_some(Monomial(out))
    }

    /// Removes one power of `v`, returning the former exponent.
    fn lower(&self, v: usize) -> Option<(u32, Monomial)> {
        let i = self.0.binary_search_by_key(&(v as u32), |&(x, _)| x).ok()?;
        let mut m = self.0.clone();
        let e = m[i].1;
        if e == 1 {
            m.remove(i);
        } else {
            m[i].1 -= 1;
        }
        Some((e, Monomial(m)))
    }

    fn without(&self, v: usize) -> (u32, Monomial) {
        let e = self.exponent(v);
        (e, Monomial(self.0.iter().copied().filter(|&(x, _)| x as usize != v).collect()))
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order; at equal degree, a larger exponent on a
    /// lower-indexed variable wins.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (a, b) in self.0.iter().zip(&other.0) {
                if a.0 != b.0 {
                    return if a.0 < b.0 { Ordering::Greater } else { Ordering::Less };
                }
                if a.1 != b.1 {
                    return a.1.cmp(&b.1);
                }
            }
            self.0.len().cmp(&other.0.len())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total assignment of rational values to the coordinates of g*.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point {
    ring: RingId,
    coords: Vec<Rational>,
}

impl Point {
    pub fn zero(alg: &GradedAlgebra) -> Self {
        Point { ring: alg.ring(), coords: vec![Rational::zero(); alg.dim()] }
    }

    pub fn from_coords(alg: &GradedAlgebra, coords: Vec<Rational>) -> Result<Self> {
        if coords.len() != alg.dim() {
            return Err(Error::Input(format!(
                "point has {} coordinates, algebra has dimension {}",
                coords.len(),
                alg.dim()
            )));
        }
        Ok(Point { ring: alg.ring(), coords })
    }

    /// Builds a point from named coordinates; unnamed coordinates are zero.
    pub fn from_names<'a>(
        alg: &GradedAlgebra,
        values: impl IntoIterator<Item = (&'a str, Rational)>,
    ) -> Result<Self> {
        let mut p = Point::zero(alg);
        for (name, v) in values {
            let i = alg.index_of(name).ok_or_else(|| Error::UnknownSymbol(name.into()))?;
            p.coords[i] = v;
        }
        Ok(p)
    }

    pub fn ring(&self) -> RingId {
        self.ring
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.coords[i]
    }

    pub fn set(&mut self, i: usize, v: Rational) {
        self.coords[i] = v;
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// Pairing `<e, p>`.
    pub fn pair(&self, e: &LieElement) -> Rational {
        e.iter().map(|(i, c)| c * &self.coords[i]).fold(Rational::zero(), |a, b| a + b)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(crate::num::to_f64).collect()
    }
}

/// Exact polynomial with rational coefficients, tagged with its algebra.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    ring: RingId,
    terms: BTreeMap<Monomial, Rational>,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if self.is_zero() {
            return write!(f, "0");
        }
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (v, e) in &m.0 {
                write!(f, "*v{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl Polynomial {
    pub fn zero(ring: RingId) -> Self {
        Polynomial { ring, terms: BTreeMap::new() }
    }

    pub fn constant(ring: RingId, c: Rational) -> Self {
        let mut p = Polynomial::zero(ring);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn one(ring: RingId) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn var(ring: RingId, v: usize) -> Self {
        Self::term(ring, Monomial::var(v), Rational::one())
    }

    pub fn term(ring: RingId, m: Monomial, c: Rational) -> Self {
        let mut p = Polynomial::zero(ring);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// The linear function `<e, .>` on g*.
    pub fn linear(ring: RingId, e: &LieElement) -> Self {
        Polynomial {
            ring,
            terms: e.iter().map(|(i, c)| (Monomial::var(i), c.clone())).collect(),
        }
    }

    pub fn ring(&self) -> RingId {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<usize> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|&(v, _)| v as usize)).collect()
    }

    /// Leading term in grlex order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    fn check(&self, other: &Polynomial) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring.to_string(), other.ring.to_string()));
        }
        Ok(())
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        Ok(Polynomial {
            ring: self.ring,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.ring);
        }
        Polynomial { ring: self.ring, terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.ring);
        }
        Polynomial {
            ring: self.ring,
            terms: self.terms.iter().map(|(k, x)| (k.mul(m), x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut result = Polynomial::one(self.ring);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Partial derivative with respect to variable `v`.
    pub fn derivative(&self, v: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.ring);
        for (m, c) in &self.terms {
            if let Some((e, lowered)) = m.lower(v) {
                out.add_term(lowered, c * Rational::from_integer(BigInt::from(e)));
            }
        }
        out
    }

    /// Simultaneous substitution of variables by polynomials.
    pub fn substitute(&self, sigma: &BTreeMap<usize, Polynomial>) -> Result<Polynomial> {
        for s in sigma.values() {
            self.check(s)?;
        }
        let mut powers: HashMap<(usize, u32), Polynomial> = HashMap::new();
        let mut out = Polynomial::zero(self.ring);
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut factor = Polynomial::constant(self.ring, c.clone());
            for &(v, e) in &m.0 {
                match sigma.get(&(v as usize)) {
                    Some(s) => {
                        let pw = powers.entry((v as usize, e)).or_insert_with(|| s.pow(e));
                        factor = &factor * pw;
                    }
                    None => kept.push((v, e)),
                }
                if factor.is_zero() {
                    break;
                }
            }
            if factor.is_zero() {
                continue;
            }
            let kept = Monomial(kept);
            for (fm, fc) in factor.terms {
                out.add_term(fm.mul(&kept), fc);
            }
        }
        Ok(out)
    }

    /// Substitutes rational values for some variables.
    pub fn substitute_values(&self, values: &BTreeMap<usize, Rational>) -> Polynomial {
        let mut out = Polynomial::zero(self.ring);
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut kept = Vec::new();
            for &(v, e) in &m.0 {
                match values.get(&(v as usize)) {
                    Some(x) => coeff *= num_traits::pow(x.clone(), e as usize),
                    None => kept.push((v, e)),
                }
            }
            out.add_term(Monomial(kept), coeff);
        }
        out
    }

    pub fn evaluate(&self, p: &Point) -> Result<Rational> {
        if p.ring != self.ring {
            return Err(Error::RingMismatch(self.ring.to_string(), p.ring.to_string()));
        }
        self.evaluate_with(|v| p.coords.get(v).cloned())
    }

    /// Evaluation against a partial assignment.
    pub fn evaluate_map(&self, values: &HashMap<usize, Rational>) -> Result<Rational> {
        self.evaluate_with(|v| values.get(&v).cloned())
    }

    fn evaluate_with(&self, value: impl Fn(usize) -> Option<Rational>) -> Result<Rational> {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in &m.0 {
                let x = value(v as usize).ok_or(Error::MissingCoordinate(v as usize))?;
                t *= num_traits::pow(x, e as usize);
            }
            total += t;
        }
        Ok(total)
    }

    pub fn evaluate_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.0.iter().fold(crate::num::to_f64(c), |acc, &(v, e)| acc * x[v as usize].powi(e as i32))
            })
            .sum()
    }

    /// Gradient at `p`, indexed by basis coordinate.
    pub fn gradient(&self, p: &Point) -> Result<Vec<Rational>> {
        (0..p.coords.len()).map(|v| self.derivative(v).evaluate(p)).collect()
    }

    /// Least common multiple of the coefficient denominators divided by the
    /// gcd of numerators; multiplying by it yields a primitive integer
    /// polynomial.
    fn content_scale(&self) -> Rational {
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        Rational::new(den_lcm, num_gcd)
    }

    /// Primitive integer coefficients with positive leading coefficient.
    pub fn canonical(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut s = self.content_scale();
        if self.leading().unwrap().1.is_negative() {
            s = -s;
        }
        self.scale(&s)
    }

    /// Scale so the leading coefficient is 1.
    pub fn monic(&self) -> Polynomial {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Equality up to a nonzero rational factor.
    pub fn proportional(&self, other: &Polynomial) -> bool {
        self.ring == other.ring && self.canonical() == other.canonical()
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Polynomial) -> Result<Option<Polynomial>> {
        self.check(d)?;
        let (dm, dc) = match d.leading() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Err(Error::Input("division by the zero polynomial".into())),
        };
        if d.is_constant() {
            return Ok(Some(self.scale(&dc.recip())));
        }
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(self.ring);
        while let Some((m, c)) = rem.leading() {
            let Some(qm) = m.div(&dm) else { return Ok(None) };
            let qc = c / &dc;
            for (dm_k, dc_k) in &d.terms {
                rem.add_term(dm_k.mul(&qm), -(dc_k * &qc));
            }
            quot.add_term(qm, qc);
        }
        Ok(Some(quot))
    }

    /// Coefficients as a polynomial in `v`: entry `k` multiplies `v^k`.
    pub fn coefficients_in(&self, v: usize) -> Vec<Polynomial> {
        let mut out = vec![Polynomial::zero(self.ring); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.without(v);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    /// Coefficients with respect to the monomials in the variables `vars`.
    pub fn coefficients_wrt(&self, vars: &BTreeSet<usize>) -> BTreeMap<Monomial, Polynomial> {
        let mut out: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (inside, outside): (Vec<_>, Vec<_>) =
                m.0.iter().partition(|&&(v, _)| vars.contains(&(v as usize)));
            out.entry(Monomial(inside))
                .or_insert_with(|| Polynomial::zero(self.ring))
                .add_term(Monomial(outside), c.clone());
        }
        out
    }

    fn from_coefficients(ring: RingId, v: usize, coeffs: &[Polynomial]) -> Polynomial {
        let mut out = Polynomial::zero(ring);
        for (k, c) in coeffs.iter().enumerate() {
            let xk = Monomial::from_exponents(vec![(v as u32, k as u32)]);
            for (m, x) in &c.terms {
                out.add_term(m.mul(&xk), x.clone());
            }
        }
        out
    }

    /// Greatest common divisor, normalized by [`Polynomial::canonical`].
    pub fn gcd(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        Ok(gcd(self, other).canonical())
    }

    pub fn lcm(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(self.ring));
        }
        let g = self.gcd(other)?;
        let prod = self * other;
        Ok(prod.div_exact(&g)?.expect("gcd divides the product").canonical())
    }

    /// Gcd of the coefficients of `self` viewed as a polynomial in `vars`.
    pub fn content_wrt(&self, vars: &BTreeSet<usize>) -> Polynomial {
        let mut g = Polynomial::zero(self.ring);
        let mut coeffs: Vec<Polynomial> = self.coefficients_wrt(vars).into_values().collect();
        coeffs.sort_by_key(Polynomial::len);
        for c in &coeffs {
            g = gcd(&g, c);
            if g.is_constant() {
                return Polynomial::one(self.ring);
            }
        }
        g.canonical()
    }

    /// Removes the polynomial content with respect to `vars` (the content is
    /// a polynomial in the remaining variables) and canonicalizes.
    pub fn remove_content_wrt(&self, vars: &BTreeSet<usize>) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content_wrt(vars);
        self.div_exact(&c).expect("same ring").expect("content divides").canonical()
    }
}

fn prem(a: &[Polynomial], b: &[Polynomial]) -> Vec<Polynomial> {
    // pseudo-remainder of univariate polynomials with polynomial coefficients
    let mut r: Vec<Polynomial> = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        for (k, bc) in b.iter().enumerate() {
            r[k + shift] = &r[k + shift] - &(&lr * bc);
        }
        while r.last().is_some_and(Polynomial::is_zero) {
            r.pop();
        }
    }
    r
}

fn content_of(coeffs: &[Polynomial]) -> Polynomial {
    let mut sorted: Vec<&Polynomial> = coeffs.iter().filter(|c| !c.is_zero()).collect();
    sorted.sort_by_key(|c| c.len());
    let mut g = Polynomial::zero(coeffs[0].ring);
    for c in sorted {
        g = gcd(&g, c);
        if g.is_constant() {
            return Polynomial::one(g.ring);
        }
    }
    g
}

fn primitive_part(coeffs: &[Polynomial], content: &Polynomial) -> Vec<Polynomial> {
    coeffs
        .iter()
        .map(|c| c.div_exact(content).expect("same ring").expect("content divides coefficients"))
        .collect()
}

/// Univariate gcd over Q, coefficients in ascending degree.
fn univariate_gcd(mut a: Vec<Rational>, mut b: Vec<Rational>) -> Vec<Rational> {
    let trim = |v: &mut Vec<Rational>| {
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
    };
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let lb = b.last().unwrap().clone();
        while a.len() >= b.len() {
            let q = a.last().unwrap() / &lb;
            let shift = a.len() - b.len();
            for (k, c) in b.iter().enumerate() {
                a[k + shift] -= &q * c;
            }
            a.pop();
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

/// Certifies that `gcd(a, b)` has degree 0 in `v` by specializing the other
/// variables at a point where both leading coefficients survive: the
/// specialized gcd is divisible by the specialized true gcd, whose degree in
/// `v` is preserved there. `false` means "not certified".
fn coprime_in(a: &Polynomial, b: &Polynomial, v: usize) -> bool {
    let ca = a.coefficients_in(v);
    let cb = b.coefficients_in(v);
    let others: Vec<usize> = a.variables().union(&b.variables()).copied().filter(|&x| x != v).collect();
    for attempt in 0..3u64 {
        let values: BTreeMap<usize, Rational> = others
            .iter()
            .enumerate()
            .map(|(k, &x)| {
                let h = (k as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(attempt * 0x2545_f491);
                (x, Rational::from_integer(BigInt::from((h >> 40) % 97) - 48))
            })
            .collect();
        let spec = |c: &[Polynomial]| -> Vec<Rational> {
            c.iter().map(|p| p.substitute_values(&values).constant_term()).collect()
        };
        let (sa, sb) = (spec(&ca), spec(&cb));
        if sa.last().is_none_or(Zero::is_zero) || sb.last().is_none_or(Zero::is_zero) {
            continue;
        }
        return univariate_gcd(sa, sb).len() == 1;
    }
    false
}

fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return b.canonical();
    }
    if b.is_zero() {
        return a.canonical();
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(a.ring);
    }
    let (va, vb) = (a.variables(), b.variables());
    // a variable present in only one argument cannot divide the gcd
    if let Some(&v) = va.difference(&vb).next() {
        return gcd(&content_of(&a.coefficients_in(v)), b);
    }
    if let Some(&v) = vb.difference(&va).next() {
        return gcd(a, &content_of(&b.coefficients_in(v)));
    }
    let (big, small) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    if let Ok(Some(_)) = big.div_exact(small) {
        return small.canonical();
    }
    let v = *va.iter().min_by_key(|&&x| (a.degree_in(x) + b.degree_in(x), x)).unwrap();
    if coprime_in(a, b, v) {
        return gcd(&content_of(&a.coefficients_in(v)), &content_of(&b.coefficients_in(v)));
    }
    let ca = a.coefficients_in(v);
    let cb = b.coefficients_in(v);
    let conta = content_of(&ca);
    let contb = content_of(&cb);
    let cont = gcd(&conta, &contb);
    let mut pa = primitive_part(&ca, &conta);
    let mut pb = primitive_part(&cb, &contb);
    if pa.len() < pb.len() {
        std::mem::swap(&mut pa, &mut pb);
    }
    loop {
        if pb.is_empty() {
            break;
        }
        if pb.len() == 1 {
            return cont.canonical();
        }
        let r = prem(&pa, &pb);
        pa = pb;
        pb = if r.is_empty() {
            r
        } else {
            let c = content_of(&r);
            primitive_part(&r, &c)
        };
    }
    let g = Polynomial::from_coefficients(a.ring, v, &pa);
    let c = content_of(&pa);
    let g = g.div_exact(&c).expect("same ring").expect("content divides");
    (&g * &cont).canonical()
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("ring mismatch in polynomial addition")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("ring mismatch in polynomial subtraction")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("ring mismatch in polynomial multiplication")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { ring: self.ring, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// Lie–Poisson bracket `{f, g} = sum_ab (df/dx_a)(dg/dx_b) [e_a, e_b]`.
pub fn poisson_bracket(alg: &GradedAlgebra, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
    f.check(g)?;
    if f.ring != alg.ring() {
        return Err(Error::RingMismatch(f.ring.to_string(), alg.ring().to_string()));
    }
    let ring = f.ring;
    let df: Vec<(usize, Polynomial)> = f.variables().into_iter().map(|v| (v, f.derivative(v))).collect();
    let dg: Vec<(usize, Polynomial)> = g.variables().into_iter().map(|v| (v, g.derivative(v))).collect();
    let mut out = Polynomial::zero(ring);
    for (a, fa) in &df {
        // sum over b first so each bracket entry multiplies once
        let mut inner = Polynomial::zero(ring);
        for (b, gb) in &dg {
            let e = alg.bracket_basis(*a, *b);
            if e.is_zero() {
                continue;
            }
            inner = &inner + &(gb * &Polynomial::linear(ring, e));
        }
        if !inner.is_zero() {
            out = &out + &(fa * &inner);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{frac, int};

    fn setup() -> (GradedAlgebra, RingId) {
        let alg = GradedAlgebra::build(2, 3).unwrap();
        let ring = alg.ring();
        (alg, ring)
    }

    fn x(alg: &GradedAlgebra, name: &str) -> Polynomial {
        Polynomial::var(alg.ring(), alg.index_of(name).unwrap())
    }

    #[test]
    fn monomial_order_is_grlex() {
        let a = Monomial::from_exponents(vec![(0, 2)]);
        let b = Monomial::from_exponents(vec![(0, 1), (1, 1)]);
        let c = Monomial::from_exponents(vec![(1, 2)]);
        let d = Monomial::from_exponents(vec![(0, 1), (1, 1), (2, 1)]);
        assert!(a > b && b > c && d > a);
        assert!(Monomial::var(0) > Monomial::var(3));
        assert!(Monomial::one() < Monomial::var(7));
    }

    #[test]
    fn monomial_division() {
        let a = Monomial::from_exponents(vec![(0, 2), (3, 1)]);
        let b = Monomial::from_exponents(vec![(0, 1)]);
        assert_eq!(a.div(&b).unwrap(), Monomial::from_exponents(vec![(0, 1), (3, 1)]));
        assert!(b.div(&a).is_none());
        assert!(a.div(&Monomial::var(2)).is_none());
    }

    #[test]
    fn ring_operations() {
        let (alg, ring) = setup();
        let (x1, x2) = (x(&alg, "x1"), x(&alg, "x2"));
        assert_eq!(&(&x1 * &x2) + &(&x2 * &x1), (&x1 * &x2).scale(&int(2)));
        let f = &x1 + &x2;
        assert!((&f + &f.scale(&int(-1))).is_zero());
        let h = x(&alg, "x12").pow(2).scale(&frac(1, 2));
        assert_eq!(h.leading().unwrap().1, &frac(1, 2));
        assert_eq!(Polynomial::constant(ring, int(0)), Polynomial::zero(ring));
    }

    #[test]
    fn mixed_rings_rejected() {
        let (alg, _) = setup();
        let other = GradedAlgebra::build(3, 3).unwrap();
        let a = x(&alg, "x1");
        let b = Polynomial::var(other.ring(), 0);
        assert!(matches!(a.try_add(&b), Err(Error::RingMismatch(..))));
        assert!(matches!(a.try_mul(&b), Err(Error::RingMismatch(..))));
    }

    #[test]
    fn poisson_examples() {
        let (alg, _) = setup();
        let (x1, x2, x12) = (x(&alg, "x1"), x(&alg, "x2"), x(&alg, "x12"));
        assert_eq!(poisson_bracket(&alg, &x1, &x2).unwrap(), x12);
        assert!(poisson_bracket(&alg, &x(&alg, "x112"), &x(&alg, "x212")).unwrap().is_zero());
        assert_eq!(poisson_bracket(&alg, &x1, &(&x1 * &x2)).unwrap(), &x1 * &x12);
    }

    #[test]
    fn substitution() {
        let alg = GradedAlgebra::build(3, 3).unwrap();
        let ring = alg.ring();
        let f = &x(&alg, "x123") - &x(&alg, "x213");
        let mut sigma = BTreeMap::new();
        sigma.insert(alg.index_of("x123").unwrap(), x(&alg, "x213"));
        assert!(f.substitute(&sigma).unwrap().is_zero());
        let mut zero = BTreeMap::new();
        zero.insert(alg.index_of("x313").unwrap(), Polynomial::zero(ring));
        assert!((&x(&alg, "x1") * &x(&alg, "x313")).substitute(&zero).unwrap().is_zero());
        assert_eq!(f.substitute(&BTreeMap::new()).unwrap(), f);
    }

    #[test]
    fn evaluation() {
        let (alg, ring) = setup();
        let cartan = &(&x(&alg, "x12").pow(2).scale(&frac(1, 2)) + &(&x(&alg, "x1") * &x(&alg, "x212")))
            - &(&x(&alg, "x2") * &x(&alg, "x112"));
        let p = Point::from_names(&alg, [("x12", int(2))]).unwrap();
        assert_eq!(cartan.evaluate(&p).unwrap(), int(2));
        assert_eq!(Polynomial::constant(ring, int(7)).evaluate(&p).unwrap(), int(7));
        assert!(matches!(
            x(&alg, "x1").evaluate_map(&HashMap::new()),
            Err(Error::MissingCoordinate(0))
        ));
    }

    #[test]
    fn canonical_form() {
        let (alg, _) = setup();
        let f = (&x(&alg, "x1") - &x(&alg, "x2").scale(&frac(1, 3))).scale(&frac(-3, 7));
        assert_eq!(f.canonical(), &x(&alg, "x1").scale(&int(3)) - &x(&alg, "x2"));
    }

    #[test]
    fn exact_division_and_gcd() {
        let alg = GradedAlgebra::build(3, 3).unwrap();
        let a = &x(&alg, "x1") + &x(&alg, "x112");
        let b = &x(&alg, "x2") - &x(&alg, "x12").scale(&int(2));
        let c = &x(&alg, "x3") * &x(&alg, "x113");
        let ab = &a * &b;
        assert_eq!(ab.div_exact(&b).unwrap().unwrap(), a);
        assert!(a.div_exact(&b).unwrap().is_none());
        let g = (&ab * &c).gcd(&(&(&a * &c) * &c)).unwrap();
        assert_eq!(g, (&a * &c).canonical());
        assert_eq!(a.gcd(&b).unwrap(), Polynomial::one(alg.ring()));
        assert_eq!(a.lcm(&ab).unwrap(), ab.canonical());
    }

    #[test]
    fn content_over_central_variables() {
        let alg = GradedAlgebra::build(2, 3).unwrap();
        let g3: BTreeSet<usize> = alg.degree_range(3).collect();
        let non_central: BTreeSet<usize> = (0..alg.dim()).filter(|v| !g3.contains(v)).collect();
        let q = &x(&alg, "x112") + &x(&alg, "x212");
        let f = &(&x(&alg, "x1") * &q) + &(&x(&alg, "x12").pow(2) * &q);
        let expected = &x(&alg, "x12").pow(2) + &x(&alg, "x1");
        assert_eq!(f.remove_content_wrt(&non_central), expected);
    }
}
