//! The complete system of Casimir functions for steps 3 and 4.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::GradedAlgebra;
use crate::linalg::{pivot_minor, poly_det, poly_kernel, rank_of_rows, subsets};
use crate::orbit::{analyze, normalize_vector, random_point, LevelContext, Stratum, WITNESS_SEED};
use crate::parse::format_polynomial;
use crate::poisson::{bivector, block, PolyElement};
use crate::poly::{Point, Polynomial};

/// Outcome of a Casimir test. On failure, `witness` is the first generator
/// (1-based) with a nonzero bracket, and that bracket.
#[derive(Clone, Debug, PartialEq)]
pub struct CasimirCheck {
    pub holds: bool,
    pub witness: Option<(usize, Polynomial)>,
}

/// `{x_i, f} = 0` for every generator, exactly.
pub fn is_casimir(alg: &GradedAlgebra, f: &Polynomial) -> Result<CasimirCheck> {
    let st = Stratum::empty(alg);
    Ok(match st.first_nonconstant(alg, f)? {
        None => CasimirCheck { holds: true, witness: None },
        Some(w) => CasimirCheck { holds: false, witness: Some(w) },
    })
}

pub fn linear_casimirs(alg: &GradedAlgebra) -> Vec<Polynomial> {
    alg.degree_range(alg.step()).map(|v| Polynomial::var(alg.ring(), v)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum WindowMode {
    /// Columns `i..=i+r` for consecutive `i`.
    #[default]
    Consecutive,
    /// Every set of `r + 1` columns.
    AllSubsets,
}

fn check_top_block(alg: &GradedAlgebra) -> Result<()> {
    if !(3..=4).contains(&alg.step()) {
        return Err(Error::UnsupportedStep(alg.step(), "3 or 4"));
    }
    let n = alg.dim_degree(alg.step() - 1);
    if n < alg.rank() {
        return Err(Error::Precondition(format!(
            "minor construction needs dim g_{} >= r, but {} < {}",
            alg.step() - 1,
            n,
            alg.rank()
        )));
    }
    Ok(())
}

fn window_minor(alg: &GradedAlgebra, cols: &[usize]) -> Result<Polynomial> {
    let ring = alg.ring();
    let top = block(alg, 1, alg.step() - 1)?;
    let basis: Vec<usize> = alg.degree_range(alg.step() - 1).collect();
    let mut m = vec![cols.iter().map(|&c| Polynomial::var(ring, basis[c])).collect::<Vec<_>>()];
    for row in &top.entries {
        m.push(cols.iter().map(|&c| row[c].clone()).collect());
    }
    Ok(poly_det(ring, &m).canonical())
}

/// `(r+1)`-minors of the top block bordered by a row of coordinates, with the
/// column sets that produced them.
pub fn minor_casimirs_with_columns(alg: &GradedAlgebra, mode: WindowMode) -> Result<Vec<(Vec<usize>, Polynomial)>> {
    check_top_block(alg)?;
    let r = alg.rank();
    let n = alg.dim_degree(alg.step() - 1);
    let windows: Vec<Vec<usize>> = match mode {
        WindowMode::Consecutive => (0..n - r).map(|i| (i..=i + r).collect()).collect(),
        WindowMode::AllSubsets => subsets(n, r + 1),
    };
    windows.into_iter().map(|w| Ok((w.clone(), window_minor(alg, &w)?))).collect()
}

pub fn minor_casimirs(alg: &GradedAlgebra, mode: WindowMode) -> Result<Vec<Polynomial>> {
    Ok(minor_casimirs_with_columns(alg, mode)?.into_iter().map(|(_, f)| f).collect())
}

/// Generic kernel of the `(g_2, g_2)` block, one polynomial vector per basis
/// element, as elements of `g_2`.
fn step4_gammas(alg: &GradedAlgebra, st: &Stratum) -> Result<Vec<PolyElement>> {
    let ring = alg.ring();
    let b22 = block(alg, 2, 2)?;
    let g2: Vec<usize> = alg.degree_range(2).collect();
    let reduce = |p: &Polynomial| p.clone();
    let ker = poly_kernel(ring, &b22.entries, g2.len(), st.witness(), &reduce)?;
    Ok(ker
        .vectors
        .into_iter()
        .map(|mut v| {
            normalize_vector(&mut v);
            PolyElement::combination(ring, &v, &g2)
        })
        .collect())
}

/// Functions quadratic on the joint level sets of the linear and minor
/// Casimirs of a step-4 algebra, one per generic kernel vector of the
/// `(g_2, g_2)` block.
pub fn quadratic_casimirs_step4(alg: &GradedAlgebra) -> Result<Vec<(PolyElement, Polynomial)>> {
    if alg.step() != 4 {
        return Err(Error::UnsupportedStep(alg.step(), "4"));
    }
    let st = Stratum::empty(alg);
    let b13 = block(alg, 1, 3)?;
    let (_, pivot_cols) = pivot_minor(&b13.evaluate(st.witness())?);
    if pivot_cols.len() != alg.rank() {
        return Err(Error::NonGenericWitness("(g_1, g_3) block is not of full rank at the witness".into()));
    }
    let ctx = LevelContext {
        alg,
        stratum: &st,
        rows: (1..=alg.rank()).map(|i| alg.generator(i)).collect(),
        col_basis: alg.degree_range(3).collect(),
        block: b13.entries.clone(),
        pivot_cols,
    };
    step4_gammas(alg, &st)?
        .into_iter()
        .map(|g| {
            let lf = ctx.build(&g)?;
            Ok((g, lf.function))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Linear,
    Minor,
    QuadraticOnLevels,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Linear => "linear",
            Role::Minor => "minor",
            Role::QuadraticOnLevels => "quadratic_on_levels",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CasimirRecord {
    pub role: Role,
    pub provenance: String,
    pub polynomial: Polynomial,
}

/// Exported form of one Casimir function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CasimirExport {
    pub role: Role,
    pub degree: u32,
    pub provenance: String,
    pub polynomial: String,
}

#[derive(Clone, Debug)]
pub struct CasimirSet {
    pub members: Vec<CasimirRecord>,
}

impl CasimirSet {
    fn with_role(&self, role: Role) -> Vec<Polynomial> {
        self.members.iter().filter(|m| m.role == role).map(|m| m.polynomial.clone()).collect()
    }

    pub fn linear(&self) -> Vec<Polynomial> {
        self.with_role(Role::Linear)
    }

    pub fn minor(&self) -> Vec<Polynomial> {
        self.with_role(Role::Minor)
    }

    pub fn quadratic_on_levels(&self) -> Vec<Polynomial> {
        self.with_role(Role::QuadraticOnLevels)
    }

    pub fn polynomials(&self) -> Vec<Polynomial> {
        self.members.iter().map(|m| m.polynomial.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn export(&self, alg: &GradedAlgebra) -> Vec<CasimirExport> {
        self.members
            .iter()
            .map(|m| CasimirExport {
                role: m.role,
                degree: m.polynomial.total_degree().unwrap_or(0),
                provenance: m.provenance.clone(),
                polynomial: format_polynomial(alg, &m.polynomial),
            })
            .collect()
    }

    /// Rank of the differentials of all members at `p`.
    pub fn differential_rank(&self, p: &Point) -> Result<usize> {
        let rows: Vec<_> = self.members.iter().map(|m| m.polynomial.gradient(p)).collect::<Result<_>>()?;
        Ok(rank_of_rows(&rows))
    }
}

/// Linear, minor and quadratic Casimirs together.
pub fn complete_system(alg: &GradedAlgebra) -> Result<CasimirSet> {
    let mut members: Vec<CasimirRecord> = linear_casimirs(alg)
        .into_iter()
        .map(|f| {
            let v = *f.variables().iter().next().expect("a coordinate");
            CasimirRecord { role: Role::Linear, provenance: format!("coordinate {}", alg.name(v)), polynomial: f }
        })
        .collect();
    match (alg.rank(), alg.step()) {
        (_, 2) => return Err(Error::UnsupportedStep(2, "3 or 4")),
        (2, 3) => {
            let a = analyze(alg, &Stratum::empty(alg))?;
            for lf in &a.functions {
                members.push(CasimirRecord {
                    role: Role::QuadraticOnLevels,
                    provenance: format!("annihilator element gamma = {}", lf.gamma.format(alg)),
                    polynomial: lf.function.clone(),
                });
            }
        }
        (_, 3) | (_, 4) => {
            let names: Vec<&str> = alg.degree_range(alg.step() - 1).map(|v| alg.name(v)).collect();
            for (cols, f) in minor_casimirs_with_columns(alg, WindowMode::Consecutive)? {
                let cn: Vec<&str> = cols.iter().map(|&c| names[c]).collect();
                members.push(CasimirRecord {
                    role: Role::Minor,
                    provenance: format!("bordered minor on columns {}", cn.join(",")),
                    polynomial: f,
                });
            }
            if alg.step() == 4 {
                for (g, f) in quadratic_casimirs_step4(alg)? {
                    members.push(CasimirRecord {
                        role: Role::QuadraticOnLevels,
                        provenance: format!("kernel element gamma = {}", g.format(alg)),
                        polynomial: f,
                    });
                }
            }
        }
        (_, s) => return Err(Error::UnsupportedStep(s, "3 or 4")),
    }
    Ok(CasimirSet { members })
}

/// `dim Ker B_p` at a seeded random point, where the bivector attains its
/// generic rank.
pub fn generic_corank(alg: &GradedAlgebra) -> Result<(Point, usize)> {
    let p = random_point(alg, WITNESS_SEED ^ 0xc0ffee);
    let rank = bivector(alg).rank_at(&p)?;
    Ok((p, alg.dim() - rank))
}
