//! Special coadjoint orbits of step-3 algebras: strata, stepwise reduction of
//! the `(g_1, g_2)` block, the level functions cutting out non-generic
//! orbits, and classification of the orbit through a rational point.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{GradedAlgebra, LieElement, RingId};
use crate::linalg::{cramer_numerators, pivot_minor, poly_det, poly_kernel, RatMatrix};
use crate::num::{int, Rational};
use crate::poisson::{block, PolyElement};
use crate::poly::{poisson_bracket, Point, Polynomial};

/// Seed of the default witness point.
pub const WITNESS_SEED: u64 = 0x005e_ed0f_0b17;

/// A point with small nonzero random integer coordinates.
pub fn random_point(alg: &GradedAlgebra, seed: u64) -> Point {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords = (0..alg.dim())
        .map(|_| {
            let v: i64 = rng.gen_range(1..=23);
            int(if rng.gen_bool(0.5) { v } else { -v })
        })
        .collect();
    Point::from_coords(alg, coords).expect("dimension matches")
}

/// Declarative description of a stratum, as read from JSON.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StratumSpec {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    #[serde(default)]
    pub set_zero: Vec<String>,
    #[serde(default)]
    pub identify: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_point: Option<BTreeMap<String, serde_json::Value>>,
}

/// A subvariety of g* given by an idempotent substitution of some
/// coordinates, together with a witness point lying on it.
#[derive(Clone, Debug)]
pub struct Stratum {
    pub description: String,
    ring: RingId,
    sigma: BTreeMap<usize, Polynomial>,
    witness: Point,
}

impl Stratum {
    /// The whole of g*, with the default random witness.
    pub fn empty(alg: &GradedAlgebra) -> Self {
        Stratum {
            description: "generic".into(),
            ring: alg.ring(),
            sigma: BTreeMap::new(),
            witness: random_point(alg, WITNESS_SEED),
        }
    }

    pub fn from_spec(alg: &GradedAlgebra, spec: &StratumSpec) -> Result<Self> {
        let ring = alg.ring();
        let lookup = |n: &str| alg.index_of(n).ok_or_else(|| Error::UnknownSymbol(n.to_string()));
        let mut raw: BTreeMap<usize, Polynomial> = BTreeMap::new();
        let mut bind = |v: usize, target: Polynomial, name: &str| -> Result<()> {
            if let Some(old) = raw.get(&v) {
                if *old != target {
                    return Err(Error::InconsistentStratum(format!("`{name}` is bound twice to different values")));
                }
            }
            raw.insert(v, target);
            Ok(())
        };
        for n in &spec.set_zero {
            bind(lookup(n)?, Polynomial::zero(ring), n)?;
        }
        for [a, b] in &spec.identify {
            let (ia, ib) = (lookup(a)?, lookup(b)?);
            if ia == ib {
                continue;
            }
            bind(ia, Polynomial::var(ring, ib), a)?;
        }
        let witness = match &spec.witness_point {
            Some(values) => Some(crate::io::point_from_json(alg, values)?),
            None => None,
        };
        let description = if spec.description.is_empty() { "user stratum".to_string() } else { spec.description.clone() };
        Stratum::from_substitution(alg, description, raw, witness, spec.witness_point.as_ref().map(|w| {
            w.keys().filter_map(|k| alg.index_of(k)).collect()
        }))
    }

    /// Builds a stratum from an arbitrary substitution. Chains are resolved;
    /// cycles are rejected. Constrained coordinates of the witness that were
    /// not given explicitly (`explicit`) are filled in from the substitution;
    /// explicit values must agree with it.
    pub fn from_substitution(
        alg: &GradedAlgebra,
        description: String,
        raw: BTreeMap<usize, Polynomial>,
        witness: Option<Point>,
        explicit: Option<BTreeSet<usize>>,
    ) -> Result<Self> {
        let ring = alg.ring();
        let mut sigma = raw;
        for _ in 0..=sigma.len() {
            let keys: BTreeSet<usize> = sigma.keys().copied().collect();
            if sigma.values().all(|p| p.variables().is_disjoint(&keys)) {
                return Stratum::finish(alg, description, ring, sigma, witness, explicit);
            }
            let snapshot = sigma.clone();
            for p in sigma.values_mut() {
                *p = p.substitute(&snapshot)?;
            }
        }
        Err(Error::InconsistentStratum("cyclic identifications".into()))
    }

    fn finish(
        alg: &GradedAlgebra,
        description: String,
        ring: RingId,
        sigma: BTreeMap<usize, Polynomial>,
        witness: Option<Point>,
        explicit: Option<BTreeSet<usize>>,
    ) -> Result<Self> {
        let mut w = witness.unwrap_or_else(|| random_point(alg, WITNESS_SEED));
        let explicit = explicit.unwrap_or_default();
        for (&v, target) in &sigma {
            let value = target.evaluate(&w)?;
            if explicit.contains(&v) {
                if *w.get(v) != value {
                    return Err(Error::InconsistentStratum(format!(
                        "witness value of `{}` is {} but the stratum requires {}",
                        alg.name(v),
                        w.get(v),
                        value
                    )));
                }
            } else {
                w.set(v, value);
            }
        }
        Ok(Stratum { description, ring, sigma, witness: w })
    }

    /// Stratum through a point for which every listed coordinate keeps its
    /// value at `p`; `p` is the witness.
    pub fn through_point(alg: &GradedAlgebra, description: String, sigma: BTreeMap<usize, Polynomial>, p: &Point) -> Result<Self> {
        let explicit = sigma.keys().copied().collect();
        Stratum::from_substitution(alg, description, sigma, Some(p.clone()), Some(explicit))
    }

    pub fn ring(&self) -> RingId {
        self.ring
    }

    pub fn witness(&self) -> &Point {
        &self.witness
    }

    pub fn substitution(&self) -> &BTreeMap<usize, Polynomial> {
        &self.sigma
    }

    pub fn is_constrained(&self, v: usize) -> bool {
        self.sigma.contains_key(&v)
    }

    /// Normal form of `f` on the stratum.
    pub fn reduce(&self, f: &Polynomial) -> Polynomial {
        if self.sigma.is_empty() || f.variables().iter().all(|v| !self.sigma.contains_key(v)) {
            return f.clone();
        }
        f.substitute(&self.sigma).expect("stratum and polynomial share the algebra")
    }

    pub fn reduce_element(&self, e: &PolyElement) -> PolyElement {
        e.map(|c| self.reduce(c))
    }

    /// `{x_i, f}` reduced on the stratum.
    pub fn bracket_with_generator(&self, alg: &GradedAlgebra, i: usize, f: &Polynomial) -> Result<Polynomial> {
        let xi = Polynomial::var(self.ring, alg.generator(i));
        Ok(self.reduce(&poisson_bracket(alg, &xi, &self.reduce(f))?))
    }

    /// First generator whose bracket with `f` does not vanish on the stratum.
    pub fn first_nonconstant(&self, alg: &GradedAlgebra, f: &Polynomial) -> Result<Option<(usize, Polynomial)>> {
        for i in 1..=alg.rank() {
            let b = self.bracket_with_generator(alg, i, f)?;
            if !b.is_zero() {
                return Ok(Some((i, b)));
            }
        }
        Ok(None)
    }
}

/// Presets: the two rank-3 strata used as worked examples.
pub fn preset_stratum(alg: &GradedAlgebra, name: &str) -> Result<Stratum> {
    if alg.rank() != 3 || alg.step() != 3 {
        return Err(Error::Input(format!("preset `{name}` requires rank 3 and step 3")));
    }
    let text = match name {
        "nondegenerate" => include_str!("../presets/rank3_nondegenerate.json"),
        "degenerate" => include_str!("../presets/rank3_degenerate.json"),
        other => return Err(Error::Input(format!("unknown preset `{other}`"))),
    };
    let spec: StratumSpec = serde_json::from_str(text)?;
    Stratum::from_spec(alg, &spec)
}

/// Gcd-content removal and sign normalization of a polynomial vector: the
/// leading coefficient of the first nonzero entry becomes positive.
pub(crate) fn normalize_vector(v: &mut [Polynomial]) {
    let Some(ring) = v.first().map(Polynomial::ring) else { return };
    let mut g = Polynomial::zero(ring);
    for e in v.iter() {
        g = g.gcd(e).expect("same ring");
    }
    if g.is_zero() {
        return;
    }
    let first = v.iter().find(|e| !e.is_zero()).expect("nonzero vector");
    let lead_first = first.div_exact(&g).expect("same ring").expect("gcd divides");
    let g = if lead_first.leading().unwrap().1.is_negative() { -&g } else { g };
    for e in v.iter_mut() {
        *e = e.div_exact(&g).expect("same ring").expect("gcd divides");
    }
}

/// Result of the fraction-free stepwise reduction of the `(g_1, g_2)` block.
#[derive(Clone, Debug)]
pub struct Reduction {
    /// Block after row operations, rows and columns permuted so pivots come
    /// first.
    pub reduced: Vec<Vec<Polynomial>>,
    /// Row transform: `transform[k]` holds the combination of generators
    /// giving row `k` of `reduced`.
    pub transform: Vec<Vec<Polynomial>>,
    pub rank: usize,
    /// Generator indices (0-based) of the pivot rows.
    pub pivot_rows: Vec<usize>,
    /// Column indices (into the `g_2` basis) of the pivots.
    pub pivot_cols: Vec<usize>,
    /// Column order of `reduced`.
    pub col_order: Vec<usize>,
    /// Basis of the annihilator of the image, as generator combinations.
    pub h1: Vec<PolyElement>,
    /// The block itself, reduced on the stratum (original order).
    pub block: Vec<Vec<Polynomial>>,
}

/// Row-echelon reduction of the `(g_1, g_2)` block over the stratum. Pivots:
/// lowest column with an entry nonzero at the witness; ties go to the entry
/// with fewest monomials, then to the lowest row.
pub fn stepwise_reduce(alg: &GradedAlgebra, stratum: &Stratum) -> Result<Reduction> {
    if alg.step() != 3 {
        return Err(Error::UnsupportedStep(alg.step(), "3"));
    }
    let ring = alg.ring();
    let r = alg.rank();
    let b12 = block(alg, 1, 2)?;
    let n = b12.ncols();
    let block: Vec<Vec<Polynomial>> =
        b12.entries.iter().map(|row| row.iter().map(|e| stratum.reduce(e)).collect()).collect();
    let mut a = block.clone();
    let mut t: Vec<Vec<Polynomial>> = (0..r)
        .map(|i| (0..r).map(|j| if i == j { Polynomial::one(ring) } else { Polynomial::zero(ring) }).collect())
        .collect();
    let mut row_origin: Vec<usize> = (0..r).collect();
    let mut col_order: Vec<usize> = (0..n).collect();
    let w = stratum.witness();
    let mut prev = Polynomial::one(ring);
    let mut rank = 0;
    while rank < r.min(n) {
        let k = rank;
        let mut choice: Option<(usize, usize)> = None;
        'cols: for c in k..n {
            let mut best: Option<(usize, usize)> = None;
            for i in k..r {
                if a[i][c].is_zero() || a[i][c].evaluate(w)?.is_zero() {
                    continue;
                }
                let key = (a[i][c].len(), i);
                if best.is_none_or(|b| key < b) {
                    best = Some(key);
                }
            }
            if let Some((_, i)) = best {
                choice = Some((i, c));
                break 'cols;
            }
        }
        let Some((pi, pc)) = choice else { break };
        a.swap(k, pi);
        t.swap(k, pi);
        row_origin.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pc);
        }
        col_order.swap(k, pc);
        let piv = a[k][k].clone();
        for i in k + 1..r {
            let f = a[i][k].clone();
            let update = |x: &Polynomial, y: &Polynomial| -> Result<Polynomial> {
                let v = stratum.reduce(&(&(&piv * x) - &(&f * y)));
                v.div_exact(&prev)?.ok_or_else(|| Error::Inconsistency("fraction-free step is not exact".into()))
            };
            for j in 0..n {
                a[i][j] = update(&a[i][j], &a[k][j])?;
            }
            for j in 0..r {
                t[i][j] = update(&t[i][j], &t[k][j])?;
            }
        }
        prev = piv;
        rank += 1;
    }
    for (i, row) in a.iter().enumerate().skip(rank) {
        if let Some(e) = row.iter().find(|e| !e.is_zero()) {
            return Err(Error::NonGenericWitness(format!(
                "row {} keeps an entry that vanishes at the witness but not on the stratum ({} monomials)",
                i,
                e.len()
            )));
        }
    }
    let gens: Vec<usize> = (1..=r).map(|i| alg.generator(i)).collect();
    let h1 = t[rank..]
        .iter()
        .map(|row| {
            let mut v = row.clone();
            normalize_vector(&mut v);
            PolyElement::combination(ring, &v, &gens)
        })
        .collect();
    let mut pivot_rows: Vec<usize> = row_origin[..rank].to_vec();
    let mut pivot_cols: Vec<usize> = col_order[..rank].to_vec();
    pivot_rows.sort_unstable();
    pivot_cols.sort_unstable();
    Ok(Reduction { reduced: a, transform: t, rank, pivot_rows, pivot_cols, col_order, h1, block })
}

/// Functions linear in `g_2` that are constant on orbits in the stratum: one
/// `(rank+1)`-minor per non-pivot column, the extra row being the `g_2`
/// coordinates.
pub fn kernel_casimirs_on_stratum(alg: &GradedAlgebra, stratum: &Stratum, red: &Reduction) -> Result<Vec<Polynomial>> {
    let ring = alg.ring();
    let g2: Vec<usize> = alg.degree_range(2).collect();
    let mut out = Vec::new();
    for f in (0..g2.len()).filter(|c| !red.pivot_cols.contains(c)) {
        let mut cols = red.pivot_cols.clone();
        cols.push(f);
        cols.sort_unstable();
        let mut m = vec![cols.iter().map(|&c| Polynomial::var(ring, g2[c])).collect::<Vec<_>>()];
        for &i in &red.pivot_rows {
            m.push(cols.iter().map(|&c| red.block[i][c].clone()).collect());
        }
        let det = stratum.reduce(&poly_det(ring, &m));
        out.push(remove_central_content(alg, &det));
    }
    for f in &out {
        if let Some((i, b)) = stratum.first_nonconstant(alg, f)? {
            return Err(Error::Inconsistency(format!(
                "kernel function is not constant on orbits: bracket with x{i} is {} terms",
                b.len()
            )));
        }
    }
    Ok(out)
}

/// Divides out the content of `f` as a polynomial over `Q[g_s]` and
/// canonicalizes.
pub fn remove_central_content(alg: &GradedAlgebra, f: &Polynomial) -> Polynomial {
    let central: BTreeSet<usize> = alg.degree_range(alg.step()).collect();
    let others: BTreeSet<usize> = (0..alg.dim()).filter(|v| !central.contains(v)).collect();
    f.remove_content_wrt(&others)
}

/// Input of the level-function construction: the rows of the top block that
/// are independent on the stratum and a nonsingular square of it.
pub struct LevelContext<'a> {
    pub alg: &'a GradedAlgebra,
    pub stratum: &'a Stratum,
    /// Generator indices of the independent rows.
    pub rows: Vec<usize>,
    /// Basis indices of the block columns.
    pub col_basis: Vec<usize>,
    /// The block (all generator rows), reduced on the stratum.
    pub block: Vec<Vec<Polynomial>>,
    /// Columns (positions in `col_basis`) of a nonsingular square on `rows`.
    pub pivot_cols: Vec<usize>,
}

/// One function `I_gamma - Q_gamma` with the intermediate objects of its
/// construction, all with cleared denominators.
#[derive(Clone, Debug)]
pub struct LevelFunction {
    pub gamma: PolyElement,
    /// `w_c = [x_{rows[c]}, gamma]`.
    pub w: Vec<PolyElement>,
    /// `D[a][c] = <[x_{rows[a]}, w_c], p>`.
    pub d_matrix: Vec<Vec<Polynomial>>,
    /// `b[a] = <[x_{rows[a]}, gamma], p>`.
    pub b: Vec<Polynomial>,
    /// Rows and columns of the nonsingular square of `D` used for Cramer.
    pub d_rows: Vec<usize>,
    pub d_cols: Vec<usize>,
    pub delta1: Polynomial,
    /// `delta1 * eta_1`.
    pub eta1: PolyElement,
    /// `delta1 * b - D eta_1`; vanishes unless `D` is singular.
    pub b2: Vec<Polynomial>,
    pub delta2: Polynomial,
    /// `delta2 * eta_2`, a preimage of `b2` under the block.
    pub eta2: PolyElement,
    /// Common multiplier of `gamma`.
    pub multiplier: Polynomial,
    /// Canonical form of the function.
    pub function: Polynomial,
}

impl LevelContext<'_> {
    pub fn build(&self, gamma: &PolyElement) -> Result<LevelFunction> {
        let alg = self.alg;
        let ring = alg.ring();
        let st = self.stratum;
        let gen = |i: usize| LieElement::basis(i);
        let w: Vec<PolyElement> = self
            .rows
            .iter()
            .map(|&c| Ok(st.reduce_element(&gamma.bracket_left(alg, &gen(c))?)))
            .collect::<Result<_>>()?;
        let d_matrix: Vec<Vec<Polynomial>> = self
            .rows
            .iter()
            .map(|&a| w.iter().map(|wc| Ok(st.reduce(&wc.bracket_left(alg, &gen(a))?.pair()))).collect())
            .collect::<Result<_>>()?;
        let b: Vec<Polynomial> = w.iter().map(|wa| st.reduce(&wa.pair())).collect();

        let d_at = evaluate_rows(&d_matrix, self.rows.len(), st.witness())?;
        let (d_rows, d_cols) = pivot_minor(&d_at);
        let d_sq: Vec<Vec<Polynomial>> =
            d_rows.iter().map(|&i| d_cols.iter().map(|&j| d_matrix[i][j].clone()).collect()).collect();
        let delta1 = st.reduce(&poly_det(ring, &d_sq));
        let rhs: Vec<Polynomial> = d_rows.iter().map(|&i| b[i].clone()).collect();
        let n: Vec<Polynomial> = cramer_numerators(ring, &d_sq, &rhs).iter().map(|x| st.reduce(x)).collect();
        let mut eta1 = PolyElement::zero(ring);
        for (k, &c) in d_cols.iter().enumerate() {
            eta1 = eta1.add(&w[c].scale(&n[k]));
        }
        let eta1 = st.reduce_element(&eta1);

        let b2: Vec<Polynomial> = (0..self.rows.len())
            .map(|a| {
                let mut v = b[a].scale(&Rational::one()) * delta1.clone();
                for (k, &c) in d_cols.iter().enumerate() {
                    v = &v - &(&d_matrix[a][c] * &n[k]);
                }
                st.reduce(&v)
            })
            .collect();

        let (delta2, eta2, multiplier) = if b2.iter().all(Polynomial::is_zero) {
            (Polynomial::one(ring), PolyElement::zero(ring), delta1.clone())
        } else {
            let sq: Vec<Vec<Polynomial>> = self
                .rows
                .iter()
                .map(|&i| self.pivot_cols.iter().map(|&j| self.block[i][j].clone()).collect())
                .collect();
            let delta2 = st.reduce(&poly_det(ring, &sq));
            if delta2.is_zero() {
                return Err(Error::Inconsistency("pivot square of the block is singular on the stratum".into()));
            }
            let z: Vec<Polynomial> = cramer_numerators(ring, &sq, &b2).iter().map(|x| st.reduce(x)).collect();
            let basis: Vec<usize> = self.pivot_cols.iter().map(|&j| self.col_basis[j]).collect();
            let eta2 = PolyElement::combination(ring, &z, &basis);
            let m = &delta1 * &delta2;
            (delta2, eta2, m)
        };

        // f = M <gamma,p> - 1/2 (M/delta1) <eta1,p> - (M/(delta1 delta2)) <eta2,p>
        let half = Polynomial::constant(ring, Rational::new(1.into(), 2.into()));
        let has_b2 = !eta2.is_zero();
        let i_part = &multiplier * &gamma.pair();
        let q1 = &(&half * &eta1.pair()) * &(if has_b2 { delta2.clone() } else { Polynomial::one(ring) });
        let q2 = eta2.pair();
        let f = st.reduce(&(&(&i_part - &q1) - &q2));
        if f.is_zero() {
            return Err(Error::Inconsistency("level function vanishes identically".into()));
        }
        let function = remove_central_content(alg, &f);
        if let Some((i, br)) = st.first_nonconstant(alg, &function)? {
            return Err(Error::Inconsistency(format!(
                "level function is not constant on orbits: bracket with x{i} has {} terms",
                br.len()
            )));
        }
        Ok(LevelFunction {
            gamma: gamma.clone(),
            w,
            d_matrix,
            b,
            d_rows,
            d_cols,
            delta1,
            eta1,
            b2,
            delta2,
            eta2,
            multiplier,
            function,
        })
    }
}

fn evaluate_rows(m: &[Vec<Polynomial>], nrows: usize, p: &Point) -> Result<RatMatrix> {
    let rows: Vec<Vec<Rational>> =
        m.iter().map(|r| r.iter().map(|e| e.evaluate(p)).collect::<Result<_>>()).collect::<Result<_>>()?;
    Ok(if rows.is_empty() { RatMatrix::zeros(0, nrows) } else { RatMatrix::from_rows(rows) })
}

/// The symmetric form `D(a, c) = <[x_a, [x_c, gamma]], p>` on all of `g_1`.
pub fn d_form(alg: &GradedAlgebra, stratum: &Stratum, gamma: &PolyElement) -> Result<Vec<Vec<Polynomial>>> {
    let r = alg.rank();
    (1..=r)
        .map(|a| {
            (1..=r)
                .map(|c| {
                    let inner = gamma.bracket_left(alg, &LieElement::basis(alg.generator(c)))?;
                    let outer = inner.bracket_left(alg, &LieElement::basis(alg.generator(a)))?;
                    Ok(stratum.reduce(&outer.pair()))
                })
                .collect()
        })
        .collect()
}

/// Full symbolic analysis of a step-3 stratum.
#[derive(Clone, Debug)]
pub struct OrbitAnalysis {
    pub stratum: Stratum,
    pub reduction: Reduction,
    /// `C[a][b] = <[h_a, h_b], p>`.
    pub c_matrix: Vec<Vec<Polynomial>>,
    /// Basis of `k = Ker C`, as generator combinations.
    pub kernel_k: Vec<PolyElement>,
    pub kernel_casimirs: Vec<Polynomial>,
    pub functions: Vec<LevelFunction>,
}

impl OrbitAnalysis {
    pub fn orbit_functions(&self) -> Vec<Polynomial> {
        self.functions.iter().map(|f| f.function.clone()).collect()
    }
}

pub fn analyze(alg: &GradedAlgebra, stratum: &Stratum) -> Result<OrbitAnalysis> {
    let reduction = stepwise_reduce(alg, stratum)?;
    let kernel_casimirs = kernel_casimirs_on_stratum(alg, stratum, &reduction)?;
    let (c_matrix, kernel_k) = kernel_of_c(alg, stratum, &reduction)?;
    let functions = orbit_functions_for(alg, stratum, &reduction, &kernel_k)?;
    Ok(OrbitAnalysis { stratum: stratum.clone(), reduction, c_matrix, kernel_k, kernel_casimirs, functions })
}

fn kernel_of_c(alg: &GradedAlgebra, stratum: &Stratum, red: &Reduction) -> Result<(Vec<Vec<Polynomial>>, Vec<PolyElement>)> {
    let ring = alg.ring();
    let h = &red.h1;
    let c: Vec<Vec<Polynomial>> =
        h.iter().map(|a| h.iter().map(|b| stratum.reduce(&a.bracket(alg, b).pair())).collect()).collect();
    if h.is_empty() {
        return Ok((c, Vec::new()));
    }
    let reduce = |p: &Polynomial| stratum.reduce(p);
    let ker = poly_kernel(ring, &c, h.len(), stratum.witness(), &reduce)?;
    let gammas = ker
        .vectors
        .iter()
        .map(|kappa| {
            let mut g = PolyElement::zero(ring);
            for (k, ha) in kappa.iter().zip(h) {
                g = g.add(&ha.scale(k));
            }
            let g = stratum.reduce_element(&g);
            let gens: Vec<usize> = (1..=alg.rank()).map(|i| alg.generator(i)).collect();
            let mut coeffs: Vec<Polynomial> = gens.iter().map(|&i| g.coeff(i)).collect();
            normalize_vector(&mut coeffs);
            PolyElement::combination(ring, &coeffs, &gens)
        })
        .collect();
    Ok((c, gammas))
}

fn orbit_functions_for(
    alg: &GradedAlgebra,
    stratum: &Stratum,
    red: &Reduction,
    gammas: &[PolyElement],
) -> Result<Vec<LevelFunction>> {
    let ctx = LevelContext {
        alg,
        stratum,
        rows: red.pivot_rows.clone(),
        col_basis: alg.degree_range(2).collect(),
        block: red.block.clone(),
        pivot_cols: red.pivot_cols.clone(),
    };
    gammas.iter().map(|g| ctx.build(g)).collect()
}

/// The functions `I_gamma - Q_gamma`, one per basis vector of `k`.
pub fn orbit_functions(alg: &GradedAlgebra, stratum: &Stratum, red: &Reduction) -> Result<Vec<LevelFunction>> {
    let (_, gammas) = kernel_of_c(alg, stratum, red)?;
    orbit_functions_for(alg, stratum, red, &gammas)
}

/// Subspaces whose linear functions must be constant on orbits in a stratum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstancySubspace {
    /// `h_2 = [h_1, h_1]`.
    H2,
    /// `Ker D` for each `gamma` in `k`.
    KerD,
}

/// Outcome of a constancy check; `witnesses` lists failing elements with a
/// nonzero bracket.
#[derive(Clone, Debug)]
pub struct ConstancyCheck {
    pub holds: bool,
    pub checked: usize,
    pub witnesses: Vec<(PolyElement, usize, Polynomial)>,
}

/// Elements spanning `Ker D` for one level function (as elements of `g_2`).
pub fn ker_d_elements(alg: &GradedAlgebra, stratum: &Stratum, lf: &LevelFunction) -> Result<Vec<PolyElement>> {
    let ring = alg.ring();
    let n = lf.w.len();
    let reduce = |p: &Polynomial| stratum.reduce(p);
    let ker = poly_kernel(ring, &lf.d_matrix, n, stratum.witness(), &reduce)?;
    Ok(ker
        .vectors
        .iter()
        .map(|y| {
            let mut u = PolyElement::zero(ring);
            for (c, wc) in y.iter().zip(&lf.w) {
                u = u.add(&wc.scale(c));
            }
            stratum.reduce_element(&u)
        })
        .filter(|u| !u.is_zero())
        .collect())
}

pub fn verify_constancy(alg: &GradedAlgebra, analysis: &OrbitAnalysis, subspace: ConstancySubspace) -> Result<ConstancyCheck> {
    let st = &analysis.stratum;
    let elements: Vec<PolyElement> = match subspace {
        ConstancySubspace::H2 => {
            let h = &analysis.reduction.h1;
            let mut out = Vec::new();
            for a in 0..h.len() {
                for b in a + 1..h.len() {
                    out.push(st.reduce_element(&h[a].bracket(alg, &h[b])));
                }
            }
            out
        }
        ConstancySubspace::KerD => {
            let mut out = Vec::new();
            for lf in &analysis.functions {
                out.extend(ker_d_elements(alg, st, lf)?);
            }
            out
        }
    };
    let mut witnesses = Vec::new();
    for e in &elements {
        if let Some((i, b)) = st.first_nonconstant(alg, &e.pair())? {
            witnesses.push((e.clone(), i, b));
        }
    }
    Ok(ConstancyCheck { holds: witnesses.is_empty(), checked: elements.len(), witnesses })
}

/// Geometric type of a coadjoint orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitType {
    AffineSubspace,
    #[serde(rename = "r2_x_hyperbolic_paraboloid")]
    R2xHyperbolicParaboloid,
    #[serde(rename = "r2_x_elliptic_paraboloid")]
    R2xEllipticParaboloid,
    ParabolicCylinder,
    ProductOfQuadrics,
    Point,
}

impl fmt::Display for OrbitType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrbitType::AffineSubspace => "affine subspace",
            OrbitType::R2xHyperbolicParaboloid => "R^2 x hyperbolic paraboloid",
            OrbitType::R2xEllipticParaboloid => "R^2 x elliptic paraboloid",
            OrbitType::ParabolicCylinder => "parabolic cylinder",
            OrbitType::ProductOfQuadrics => "product of quadrics",
            OrbitType::Point => "point",
        })
    }
}

/// Inertia of the quadratic part attached to one `gamma`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadricSignature {
    pub rank: usize,
    pub positive: usize,
    pub negative: usize,
}

#[derive(Clone, Debug)]
pub struct OrbitReport {
    pub k1: usize,
    pub k2: usize,
    pub orbit_dim: usize,
    pub rank_b12: usize,
    pub rank_b11: usize,
    pub rank_c: usize,
    pub orbit_type: OrbitType,
    pub quadrics: Vec<QuadricSignature>,
    /// Level-set equations `f - f(p)` of the orbit.
    pub defining_functions: Vec<Polynomial>,
    /// Rank of the differentials of the defining functions at `p`.
    pub defining_rank: usize,
}

fn table_label(rank_b12: usize, quad: &[QuadricSignature], rank_b11: usize) -> OrbitType {
    match rank_b12 {
        3 => OrbitType::AffineSubspace,
        2 => match quad.first().map(|q| q.rank).unwrap_or(0) {
            2 if quad[0].positive == quad[0].negative => OrbitType::R2xHyperbolicParaboloid,
            2 => OrbitType::R2xEllipticParaboloid,
            1 => OrbitType::ParabolicCylinder,
            _ => OrbitType::AffineSubspace,
        },
        1 => OrbitType::AffineSubspace,
        _ if rank_b11 == 0 => OrbitType::Point,
        _ => OrbitType::AffineSubspace,
    }
}

fn general_label(dim: usize, quad: &[QuadricSignature]) -> OrbitType {
    let nontrivial: Vec<&QuadricSignature> = quad.iter().filter(|q| q.rank > 0).collect();
    match nontrivial.as_slice() {
        [] if dim == 0 => OrbitType::Point,
        [] => OrbitType::AffineSubspace,
        [q] if q.rank == 1 => OrbitType::ParabolicCylinder,
        _ => OrbitType::ProductOfQuadrics,
    }
}

/// Rational-point data shared by the classifier and its callers.
struct PointData {
    b12: RatMatrix,
    b11: RatMatrix,
    h: Vec<Vec<Rational>>,
    c: RatMatrix,
    gammas: Vec<Vec<Rational>>,
}

fn point_data(alg: &GradedAlgebra, p: &Point) -> Result<PointData> {
    let r = alg.rank();
    let b12 = block(alg, 1, 2)?.evaluate(p)?;
    let b11 = block(alg, 1, 1)?.evaluate(p)?;
    let h = b12.transpose().nullspace();
    let c = if h.is_empty() {
        RatMatrix::zeros(0, 0)
    } else {
        let hm = RatMatrix::from_rows(h.clone()); // k1 x r
        hm.mul(&b11).mul(&hm.transpose())
    };
    let gammas = if h.is_empty() {
        Vec::new()
    } else {
        c.nullspace()
            .iter()
            .map(|kappa| (0..r).map(|i| kappa.iter().zip(&h).map(|(k, v)| k * &v[i]).sum()).collect())
            .collect()
    };
    Ok(PointData { b12, b11, h, c, gammas })
}

/// Classifies the coadjoint orbit through a rational point of a step-3
/// algebra.
pub fn classify_orbit(alg: &GradedAlgebra, p: &Point) -> Result<OrbitReport> {
    if alg.step() != 3 {
        return Err(Error::UnsupportedStep(alg.step(), "3"));
    }
    if p.ring() != alg.ring() {
        return Err(Error::RingMismatch(p.ring().to_string(), alg.ring().to_string()));
    }
    let r = alg.rank();
    let data = point_data(alg, p)?;
    let rank_b12 = data.b12.rank();
    let rank_b11 = data.b11.rank();
    let k1 = r - rank_b12;
    let rank_c = data.c.rank();
    let k2 = k1 - rank_c;
    let orbit_dim = 2 * r - (k1 + k2);
    let full_rank = crate::poisson::bivector(alg).rank_at(p)?;
    if full_rank != orbit_dim {
        return Err(Error::Inconsistency(format!(
            "orbit dimension {orbit_dim} disagrees with the bivector rank {full_rank}"
        )));
    }
    let quadrics: Vec<QuadricSignature> = data
        .gammas
        .iter()
        .map(|g| {
            let gamma = LieElement::from_terms(g.iter().enumerate().map(|(i, c)| (alg.generator(i + 1), c.clone())));
            let d = RatMatrix::from_rows(
                (1..=r)
                    .map(|a| {
                        (1..=r)
                            .map(|c| {
                                let inner = alg.bracket(&LieElement::basis(alg.generator(c)), &gamma)?;
                                Ok(p.pair(&alg.bracket(&LieElement::basis(alg.generator(a)), &inner)?))
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<_>>()?,
            );
            let (pos, neg, _) = d.inertia();
            Ok(QuadricSignature { rank: pos + neg, positive: pos.max(neg), negative: pos.min(neg) })
        })
        .collect::<Result<_>>()?;
    let orbit_type = if r == 3 {
        table_label(rank_b12, &quadrics, rank_b11)
    } else {
        general_label(orbit_dim, &quadrics)
    };
    let (defining_functions, defining_rank) = defining_functions(alg, p, &data)?;
    Ok(OrbitReport { k1, k2, orbit_dim, rank_b12, rank_b11, rank_c, orbit_type, quadrics, defining_functions, defining_rank })
}

/// Level-set equations of the orbit through `p`: the top-degree coordinates,
/// the `h_2` functions, the kernel functions and the level functions, each
/// shifted by its value at `p`.
fn defining_functions(alg: &GradedAlgebra, p: &Point, data: &PointData) -> Result<(Vec<Polynomial>, usize)> {
    let ring = alg.ring();
    let mut sigma: BTreeMap<usize, Polynomial> = BTreeMap::new();
    let mut levels: Vec<Polynomial> = Vec::new();
    for v in alg.degree_range(3) {
        sigma.insert(v, Polynomial::constant(ring, p.get(v).clone()));
        levels.push(Polynomial::var(ring, v));
    }
    // h2 = [h1, h1]: fix these linear functions too
    let r = alg.rank();
    let g2: Vec<usize> = alg.degree_range(2).collect();
    let mut h2_rows: Vec<Vec<Rational>> = Vec::new();
    for a in 0..data.h.len() {
        for b in a + 1..data.h.len() {
            let ha = LieElement::from_terms((0..r).map(|i| (i, data.h[a][i].clone())));
            let hb = LieElement::from_terms((0..r).map(|i| (i, data.h[b][i].clone())));
            let e = alg.bracket(&ha, &hb)?;
            h2_rows.push(g2.iter().map(|&v| e.coeff(v)).collect());
        }
    }
    if !h2_rows.is_empty() {
        let (rref, pivots) = RatMatrix::from_rows(h2_rows).rref();
        for (k, &pc) in pivots.iter().enumerate() {
            let row = rref.row(k);
            let lin = Polynomial::linear(ring, &LieElement::from_terms(g2.iter().zip(row).map(|(&v, c)| (v, c.clone()))));
            let value = lin.evaluate(p)?;
            // x_pc = value - sum_{j != pc} row_j x_j
            let rest = &lin - &Polynomial::var(ring, g2[pc]);
            sigma.insert(g2[pc], &Polynomial::constant(ring, value) - &rest);
            levels.push(lin);
        }
    }
    let stratum = Stratum::through_point(alg, "orbit through a point".into(), sigma, p)?;
    let analysis = analyze(alg, &stratum)?;
    levels.extend(analysis.kernel_casimirs.iter().cloned());
    levels.extend(analysis.orbit_functions());
    let shifted: Vec<Polynomial> = levels
        .iter()
        .map(|f| Ok(f - &Polynomial::constant(ring, f.evaluate(p)?)))
        .collect::<Result<_>>()?;
    let grads: Vec<Vec<Rational>> = shifted.iter().map(|f| f.gradient(p)).collect::<Result<_>>()?;
    let rank = crate::linalg::rank_of_rows(&grads);
    Ok((shifted, rank))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;

    fn spec(zero: &[&str], ident: &[(&str, &str)]) -> StratumSpec {
        StratumSpec {
            description: String::new(),
            set_zero: zero.iter().map(|s| s.to_string()).collect(),
            identify: ident.iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect(),
            witness_point: None,
        }
    }

    #[test]
    fn stratum_resolution() {
        let alg = GradedAlgebra::build(3, 3).unwrap();
        let st = Stratum::from_spec(&alg, &spec(&["x213"], &[("x123", "x213")])).unwrap();
        let f = parse_polynomial(&alg, "x123 + x1").unwrap();
        assert_eq!(st.reduce(&f), parse_polynomial(&alg, "x1").unwrap());
        let w = st.witness();
        assert!(w.get(alg.index_of("x123").unwrap()).is_zero());
        let conflict = spec(&["x123"], &[("x123", "x213")]);
        assert!(matches!(Stratum::from_spec(&alg, &conflict), Err(Error::InconsistentStratum(_))));
        let cycle = spec(&[], &[("x123", "x213"), ("x213", "x123")]);
        assert!(matches!(Stratum::from_spec(&alg, &cycle), Err(Error::InconsistentStratum(_))));
    }

    #[test]
    fn cartan_reduction() {
        let alg = GradedAlgebra::build(2, 3).unwrap();
        let st = Stratum::empty(&alg);
        let red = stepwise_reduce(&alg, &st).unwrap();
        assert_eq!(red.rank, 1);
        assert_eq!(red.h1.len(), 1);
        let h = red.h1[0].pair();
        assert_eq!(h, parse_polynomial(&alg, "x212*x1 - x112*x2").unwrap());
    }

    #[test]
    fn cartan_quadratic_from_orbit_machinery() {
        let alg = GradedAlgebra::build(2, 3).unwrap();
        let a = analyze(&alg, &Stratum::empty(&alg)).unwrap();
        assert_eq!(a.functions.len(), 1);
        let expected = parse_polynomial(&alg, "1/2*x12^2 + x1*x212 - x2*x112").unwrap();
        assert_eq!(a.functions[0].function, expected.canonical());
    }

    #[test]
    fn generic_rank_three_has_trivial_annihilator() {
        let alg = GradedAlgebra::build(3, 3).unwrap();
        let red = stepwise_reduce(&alg, &Stratum::empty(&alg)).unwrap();
        assert_eq!(red.rank, 3);
        assert!(red.h1.is_empty());
        assert!(kernel_casimirs_on_stratum(&alg, &Stratum::empty(&alg), &red).unwrap().is_empty());
    }

    #[test]
    fn rank_zero_stratum_kernel_functions_are_coordinates() {
        let alg = GradedAlgebra::build(3, 3).unwrap();
        let zero: Vec<String> = alg.degree_range(3).map(|v| alg.name(v).to_string()).collect();
        let s = StratumSpec { set_zero: zero, ..Default::default() };
        let st = Stratum::from_spec(&alg, &s).unwrap();
        let red = stepwise_reduce(&alg, &st).unwrap();
        assert_eq!(red.rank, 0);
        let kc = kernel_casimirs_on_stratum(&alg, &st, &red).unwrap();
        let names: Vec<String> = kc.iter().map(|f| crate::parse::format_polynomial(&alg, f)).collect();
        assert_eq!(names, vec!["x12", "x13", "x23"]);
    }

    #[test]
    fn step_four_rejected() {
        let alg = GradedAlgebra::build(2, 4).unwrap();
        assert!(matches!(stepwise_reduce(&alg, &Stratum::empty(&alg)), Err(Error::UnsupportedStep(4, _))));
        assert!(classify_orbit(&alg, &Point::zero(&alg)).is_err());
    }

    #[test]
    fn inertia_labels_for_general_rank() {
        let q = |rank, positive, negative| QuadricSignature { rank, positive, negative };
        assert_eq!(general_label(0, &[]), OrbitType::Point);
        assert_eq!(general_label(4, &[]), OrbitType::AffineSubspace);
        assert_eq!(general_label(2, &[q(1, 1, 0)]), OrbitType::ParabolicCylinder);
        assert_eq!(general_label(4, &[q(2, 1, 1)]), OrbitType::ProductOfQuadrics);
    }
}
