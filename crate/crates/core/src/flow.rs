//! Vertical part of the extremal flow for time-optimal problems with an
//! ellipsoidal control set: `p' = -B_p grad H`, integrated with classical
//! RK4 in binary64.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::GradedAlgebra;
use crate::linalg::RatMatrix;
use crate::num::to_f64;
use crate::orbit::classify_orbit;
use crate::poisson::{bivector, block};
use crate::poly::{Point, Polynomial};

/// Control set `U = {u : u^T M u <= 1}`.
#[derive(Clone, Debug)]
pub struct ControlSpec {
    matrix: RatMatrix,
    inverse: Vec<Vec<f64>>,
}

impl ControlSpec {
    pub fn ellipsoid(matrix: RatMatrix) -> Result<Self> {
        let n = matrix.nrows();
        if n == 0 || matrix.ncols() != n || !matrix.is_symmetric() {
            return Err(Error::NotPositiveDefinite("matrix must be square and symmetric".into()));
        }
        for k in 1..=n {
            let idx: Vec<usize> = (0..k).collect();
            let minor = matrix.submatrix(&idx, &idx).det();
            if minor <= num_traits::Zero::zero() {
                return Err(Error::NotPositiveDefinite(format!("leading minor of order {k} is {minor}")));
            }
        }
        let inv = matrix.inverse().expect("positive definite matrices are invertible");
        let inverse = (0..n).map(|i| (0..n).map(|j| to_f64(inv.get(i, j))).collect()).collect();
        Ok(ControlSpec { matrix, inverse })
    }

    pub fn identity(r: usize) -> Self {
        ControlSpec::ellipsoid(RatMatrix::identity(r)).expect("identity is positive definite")
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    fn inv_times(&self, h: &[f64]) -> Vec<f64> {
        self.inverse.iter().map(|row| row.iter().zip(h).map(|(a, b)| a * b).sum()).collect()
    }
}

/// Support function `H(h) = sqrt(h^T M^-1 h)` of the ellipsoid.
pub fn hamiltonian(spec: &ControlSpec, h: &[f64]) -> f64 {
    let m = spec.inv_times(h);
    h.iter().zip(&m).map(|(a, b)| a * b).sum::<f64>().sqrt()
}

/// Gradient of the support function; undefined at `h = 0`.
pub fn hamiltonian_gradient(spec: &ControlSpec, h: &[f64]) -> Result<Vec<f64>> {
    let big_h = hamiltonian(spec, h);
    if big_h == 0.0 {
        return Err(Error::Precondition("the support function is not differentiable at h = 0; use H2".into()));
    }
    Ok(spec.inv_times(h).into_iter().map(|x| x / big_h).collect())
}

/// Energy form `H2 = 1/2 h^T M^-1 h`, used for integration.
pub fn energy(spec: &ControlSpec, h: &[f64]) -> f64 {
    0.5 * hamiltonian(spec, h).powi(2)
}

/// Polynomial with binary64 coefficients, for repeated evaluation.
#[derive(Clone, Debug)]
pub struct CompiledPolynomial {
    terms: Vec<(f64, Vec<(usize, i32)>)>,
}

impl CompiledPolynomial {
    pub fn new(f: &Polynomial) -> Self {
        let terms = f
            .terms()
            .map(|(m, c)| (to_f64(c), m.factors().iter().map(|&(v, e)| (v as usize, e as i32)).collect()))
            .collect();
        CompiledPolynomial { terms }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(c, m)| m.iter().fold(*c, |acc, &(v, e)| acc * x[v].powi(e))).sum()
    }
}

/// Sparse form of the first `r` columns of the bivector:
/// `rows[a][i] = [(k, c)]` with `B_{a,i}(p) = sum c p_k`.
struct VerticalField {
    r: usize,
    rows: Vec<Vec<Vec<(usize, f64)>>>,
}

impl VerticalField {
    fn compile(alg: &GradedAlgebra) -> Result<Self> {
        let b = bivector(alg);
        let r = alg.rank();
        let rows: Vec<Vec<Vec<(usize, f64)>>> = (0..alg.dim())
            .map(|a| {
                (0..r)
                    .map(|i| {
                        b.get(a, i)
                            .terms()
                            .map(|(m, c)| {
                                let f = m.factors();
                                debug_assert!(f.len() == 1 && f[0].1 == 1, "bivector entries are linear");
                                (f[0].0 as usize, to_f64(c))
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        for a in alg.degree_range(alg.step()) {
            if rows[a].iter().any(|e| !e.is_empty()) {
                return Err(Error::Inconsistency(format!("central coordinate {} has a nonzero velocity", alg.name(a))));
            }
        }
        Ok(VerticalField { r, rows })
    }

    fn rhs(&self, spec: &ControlSpec, p: &[f64], out: &mut [f64]) {
        let g = spec.inv_times(&p[..self.r]);
        for (a, row) in self.rows.iter().enumerate() {
            let mut v = 0.0;
            for (i, entries) in row.iter().enumerate() {
                if entries.is_empty() || g[i] == 0.0 {
                    continue;
                }
                let bai: f64 = entries.iter().map(|&(k, c)| c * p[k]).sum();
                v += bai * g[i];
            }
            out[a] = -v;
        }
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub names: Vec<String>,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub step_size: f64,
    pub method: &'static str,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["t".to_string()];
        header.extend(self.names.iter().cloned());
        w.write_record(&header)?;
        for (t, s) in self.times.iter().zip(&self.states) {
            let mut rec = vec![format!("{t}")];
            rec.extend(s.iter().map(|x| format!("{x:e}")));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// RK4 on `[0, T]` with `round(T / dt)` steps of the energy flow.
pub fn integrate_vertical(alg: &GradedAlgebra, spec: &ControlSpec, p0: &[f64], t_end: f64, dt: f64) -> Result<Trajectory> {
    if !(3..=4).contains(&alg.step()) {
        return Err(Error::UnsupportedStep(alg.step(), "3 or 4"));
    }
    if dt.is_nan() || dt <= 0.0 || t_end.is_nan() || t_end < 0.0 || !dt.is_finite() || !t_end.is_finite() {
        return Err(Error::Input("need dt > 0 and T >= 0".into()));
    }
    if spec.dim() != alg.rank() {
        return Err(Error::Input(format!("control matrix is {}x{} but the rank is {}", spec.dim(), spec.dim(), alg.rank())));
    }
    if p0.len() != alg.dim() {
        return Err(Error::Input(format!("initial state has {} coordinates, expected {}", p0.len(), alg.dim())));
    }
    if p0.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite { last_valid: 0 });
    }
    let field = VerticalField::compile(alg)?;
    let n = alg.dim();
    let steps = (t_end / dt).round() as usize;
    let mut states = Vec::with_capacity(steps + 1);
    let mut times = Vec::with_capacity(steps + 1);
    states.push(p0.to_vec());
    times.push(0.0);
    let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut tmp = vec![0.0; n];
    let mut p = p0.to_vec();
    for step in 1..=steps {
        field.rhs(spec, &p, &mut k1);
        for i in 0..n {
            tmp[i] = p[i] + 0.5 * dt * k1[i];
        }
        field.rhs(spec, &tmp, &mut k2);
        for i in 0..n {
            tmp[i] = p[i] + 0.5 * dt * k2[i];
        }
        field.rhs(spec, &tmp, &mut k3);
        for i in 0..n {
            tmp[i] = p[i] + dt * k3[i];
        }
        field.rhs(spec, &tmp, &mut k4);
        for i in 0..n {
            p[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite { last_valid: step - 1 });
        }
        states.push(p.clone());
        times.push(step as f64 * dt);
    }
    Ok(Trajectory { names: alg.names().to_vec(), times, states, step_size: dt, method: "rk4" })
}

/// Uniform random initial state with coordinates in `[-1, 1]`.
pub fn random_initial_state(alg: &GradedAlgebra, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..alg.dim()).map(|_| rng.gen_range(-1.0..=1.0)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub conservation: f64,
    pub periodicity: f64,
    pub constancy: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { conservation: 1e-8, periodicity: 1e-4, constancy: 1e-10 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Drift {
    pub name: String,
    pub max_drift: f64,
    /// State index where the maximum occurs.
    pub at_index: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConservationReport {
    pub tolerance: f64,
    pub entries: Vec<Drift>,
    pub pass: bool,
}

impl ConservationReport {
    pub fn max_drift(&self) -> f64 {
        self.entries.iter().map(|d| d.max_drift).fold(0.0, f64::max)
    }
}

/// Maximum deviation from the initial value of each function and of `H2`.
pub fn conservation_report(
    functions: &[(String, Polynomial)],
    spec: &ControlSpec,
    traj: &Trajectory,
    tolerance: f64,
) -> ConservationReport {
    let r = spec.dim();
    let mut entries = Vec::new();
    let mut track = |name: String, f: &dyn Fn(&[f64]) -> f64| {
        let f0 = f(&traj.states[0]);
        let (mut worst, mut at) = (0.0f64, 0usize);
        for (k, s) in traj.states.iter().enumerate() {
            let d = (f(s) - f0).abs();
            if d > worst || d.is_nan() {
                worst = if d.is_nan() { f64::INFINITY } else { d };
                at = k;
            }
        }
        entries.push(Drift { name, max_drift: worst, at_index: at, pass: worst < tolerance });
    };
    for (name, f) in functions {
        let c = CompiledPolynomial::new(f);
        track(name.clone(), &|x| c.eval(x));
    }
    track("H2".into(), &|x| energy(spec, &x[..r]));
    let pass = entries.iter().all(|d| d.pass);
    ConservationReport { tolerance, entries, pass }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Behavior {
    Periodic { period: f64 },
    Constant,
    AsymptoticallyConstant,
    Undetermined,
}

/// Long-time behaviour of the first-layer coordinates `h(t)`.
pub fn behavior_classify(traj: &Trajectory, r: usize, tol: &Tolerances) -> Behavior {
    let n = traj.states.len();
    if n < 3 {
        return Behavior::Undetermined;
    }
    let h = |k: usize| &traj.states[k][..r];
    let dist2 = |k: usize| -> f64 { h(k).iter().zip(h(0)).map(|(a, b)| (a - b).powi(2)).sum() };
    let variation = (0..n).map(|k| dist2(k).sqrt()).fold(0.0, f64::max);
    if variation < tol.constancy {
        return Behavior::Constant;
    }
    let dt = traj.step_size;
    let velocity = |k: usize| -> Vec<f64> {
        let (a, b) = if k == 0 { (0, 1) } else if k + 1 >= n { (n - 2, n - 1) } else { (k - 1, k + 1) };
        h(b).iter().zip(h(a)).map(|(x, y)| (x - y) / ((b - a) as f64 * dt)).collect()
    };
    // first return: local minimum of |h - h0|^2 after leaving a neighbourhood
    let leave = (10.0 * tol.periodicity).max(variation * 1e-2);
    let mut left = false;
    let v0 = velocity(0);
    for k in 1..n - 1 {
        let d = dist2(k);
        if !left {
            left = d.sqrt() > leave;
            continue;
        }
        let (dm, dp) = (dist2(k - 1), dist2(k + 1));
        if d <= dm && d <= dp {
            // parabola through the three samples
            let denom = dm - 2.0 * d + dp;
            let s = if denom > 0.0 { 0.5 * (dm - dp) / denom } else { 0.0 };
            let dmin = (d - 0.25 * (dm - dp) * s).max(0.0).sqrt();
            if dmin < tol.periodicity {
                let vk = velocity(k);
                let dv = vk.iter().zip(&v0).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
                let scale = v0.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
                if dv < 1e2 * tol.periodicity * scale {
                    return Behavior::Periodic { period: traj.times[k] + s * dt };
                }
            }
        }
    }
    let speeds: Vec<f64> = (3 * n / 4..n).map(|k| velocity(k).iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
    if speeds.len() >= 2 && speeds.windows(2).all(|w| w[1] <= w[0]) && *speeds.last().unwrap() < tol.periodicity {
        return Behavior::AsymptoticallyConstant;
    }
    Behavior::Undetermined
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TwoDimType {
    Heisenberg,
    Engel,
    Not2d,
}

/// Type of the Lie algebra governing trajectories on a two-dimensional orbit.
pub fn classify_2d_orbit(alg: &GradedAlgebra, p: &Point) -> Result<TwoDimType> {
    if alg.step() != 3 {
        return Err(Error::UnsupportedStep(alg.step(), "3"));
    }
    let report = classify_orbit(alg, p)?;
    if report.orbit_dim != 2 {
        return Ok(TwoDimType::Not2d);
    }
    Ok(if block(alg, 1, 2)?.evaluate(p)?.is_zero() { TwoDimType::Heisenberg } else { TwoDimType::Engel })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::int;

    #[test]
    fn support_function() {
        let id = ControlSpec::identity(3);
        assert_eq!(hamiltonian(&id, &[1.0, 0.0, 0.0]), 1.0);
        assert_eq!(hamiltonian_gradient(&id, &[1.0, 0.0, 0.0]).unwrap(), vec![1.0, 0.0, 0.0]);
        assert_eq!(hamiltonian(&id, &[3.0, 4.0, 0.0]), 5.0);
        assert!(hamiltonian_gradient(&id, &[0.0; 3]).is_err());
        let m = RatMatrix::from_rows(vec![vec![int(4), int(0)], vec![int(0), int(1)]]);
        let spec = ControlSpec::ellipsoid(m).unwrap();
        assert_eq!(hamiltonian(&spec, &[1.0, 0.0]), 0.5);
    }

    #[test]
    fn rejects_indefinite() {
        let m = RatMatrix::from_rows(vec![vec![int(1), int(2)], vec![int(2), int(1)]]);
        assert!(matches!(ControlSpec::ellipsoid(m), Err(Error::NotPositiveDefinite(_))));
        let m = RatMatrix::from_rows(vec![vec![int(1), int(2)], vec![int(0), int(1)]]);
        assert!(ControlSpec::ellipsoid(m).is_err());
    }

    #[test]
    fn zero_brackets_give_constant_trajectory() {
        let alg = GradedAlgebra::build(2, 3).unwrap();
        let mut p0 = vec![0.0; alg.dim()];
        p0[0] = 0.3;
        p0[1] = -0.7;
        let tr = integrate_vertical(&alg, &ControlSpec::identity(2), &p0, 1.0, 1e-2).unwrap();
        assert!(tr.states.iter().all(|s| s == &p0));
        assert_eq!(behavior_classify(&tr, 2, &Tolerances::default()), Behavior::Constant);
    }

    #[test]
    fn non_finite_start_rejected() {
        let alg = GradedAlgebra::build(2, 3).unwrap();
        let mut p0 = vec![0.0; alg.dim()];
        p0[2] = f64::NAN;
        assert!(matches!(
            integrate_vertical(&alg, &ControlSpec::identity(2), &p0, 1.0, 1e-2),
            Err(Error::NonFinite { last_valid: 0 })
        ));
    }

    #[test]
    fn blow_up_reports_last_valid_state() {
        let alg = GradedAlgebra::build(2, 3).unwrap();
        let mut p0 = vec![0.0; alg.dim()];
        p0[0] = 1.0;
        p0[2] = 1e200;
        p0[3] = 1e200;
        let err = integrate_vertical(&alg, &ControlSpec::identity(2), &p0, 10.0, 1e-1).unwrap_err();
        assert!(matches!(err, Error::NonFinite { .. }), "{err:?}");
    }
}
