//! The `carnot` command line. [`run`] parses arguments, writes to the given
//! streams and returns the process exit code: 0 on success, 1 when a
//! verification fails, 2 on usage or input errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::casimir::{complete_system, is_casimir, minor_casimirs_with_columns, WindowMode};
use crate::error::{Error, Result};
use crate::flow::{
    behavior_classify, classify_2d_orbit, conservation_report, integrate_vertical, random_initial_state, Behavior,
    ConservationReport, ControlSpec, Tolerances, TwoDimType,
};
use crate::io::{is_stratum_document, point_from_json, read_polynomials};
use crate::lie::GradedAlgebra;
use crate::linalg::RatMatrix;
use crate::num::parse_rational;
use crate::orbit::{analyze, classify_orbit, preset_stratum, verify_constancy, ConstancySubspace, OrbitType, Stratum, StratumSpec};
use crate::parse::{format_polynomial, parse_lines};
use crate::poisson::{bivector, block};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "carnot", version, about = "Casimir functions and coadjoint orbits of free Carnot algebras")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, env = "CARNOT_FORMAT", default_value = "text")]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct AlgebraArgs {
    /// Number of generators.
    #[arg(short = 'r', long)]
    pub rank: Option<usize>,
    /// Nilpotency step.
    #[arg(short = 's', long)]
    pub step: Option<usize>,
}

impl AlgebraArgs {
    fn build(&self, default: Option<(usize, usize)>) -> Result<GradedAlgebra> {
        match (self.rank, self.step, default) {
            (Some(r), Some(s), _) => GradedAlgebra::build(r, s),
            (None, None, Some((r, s))) => GradedAlgebra::build(r, s),
            _ => Err(Error::Input("both --rank and --step are required".into())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Windows {
    Consecutive,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FlowPreset {
    /// Rank 2, step 3, h = (1, 0), x12 = 1: a circle of period 2 pi.
    CartanCircle,
    /// Only first-layer coordinates nonzero: the trajectory is constant.
    ZeroBrackets,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dimensions of the graded components.
    Dims(AlgebraArgs),
    /// Basis words with their degrees.
    Basis(AlgebraArgs),
    /// The Poisson bivector, or one of its blocks.
    Bivector {
        #[command(flatten)]
        alg: AlgebraArgs,
        /// Block `m,n` (degrees of rows and columns).
        #[arg(long)]
        block: Option<String>,
        /// Evaluate at the point in this JSON file.
        #[arg(long)]
        point: Option<PathBuf>,
    },
    /// The complete system of Casimir functions.
    Casimirs {
        #[command(flatten)]
        alg: AlgebraArgs,
        /// Re-check every function before printing.
        #[arg(long)]
        verify: bool,
        /// Column windows for the minor Casimirs.
        #[arg(long, value_enum, default_value = "consecutive")]
        windows: Windows,
    },
    /// Check whether each polynomial in a file (one per line) is a Casimir.
    Verify {
        #[command(flatten)]
        alg: AlgebraArgs,
        /// Polynomial file, `-` for standard input.
        file: PathBuf,
    },
    /// Classify the orbit through a point, or analyse a stratum.
    Orbit {
        #[command(flatten)]
        alg: AlgebraArgs,
        /// Point or stratum JSON file (detected from its keys).
        file: Option<PathBuf>,
        /// Rank-3 stratum with nondegenerate D.
        #[arg(long = "example-5.1", conflicts_with_all = ["file", "example_degenerate"])]
        example: bool,
        /// Rank-3 stratum with degenerate D.
        #[arg(long = "example-5.1-degenerate", conflicts_with = "file")]
        example_degenerate: bool,
    },
    /// Integrate the vertical extremal flow.
    Flow {
        #[command(flatten)]
        alg: AlgebraArgs,
        /// Initial point (JSON).
        #[arg(long, conflicts_with_all = ["preset", "seed"])]
        point: Option<PathBuf>,
        #[arg(long, value_enum, conflicts_with = "seed")]
        preset: Option<FlowPreset>,
        /// Random initial point with coordinates in [-1, 1].
        #[arg(long)]
        seed: Option<u64>,
        /// Control ellipsoid matrix as JSON rows (default: identity).
        #[arg(long)]
        control: Option<PathBuf>,
        #[arg(short = 'T', long = "time", default_value_t = 10.0)]
        time: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        /// Write the trajectory here as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-8)]
        tol_conservation: f64,
        #[arg(long, default_value_t = 1e-4)]
        tol_periodicity: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol_constancy: f64,
    },
}

/// Result of a command: its exit status once output has been written.
enum Status {
    Ok,
    Failed,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Inconsistency(_) | Error::NonGenericWitness(_) | Error::NonFinite { .. } => 1,
        _ => 2,
    }
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(Status::Ok) => 0,
        Ok(Status::Failed) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn emit<S: Serialize>(out: &mut dyn Write, value: &S) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<Status> {
    let json = cli.format == Format::Json;
    match &cli.command {
        Command::Dims(a) => cmd_dims(&a.build(None)?, json, out),
        Command::Basis(a) => {
            let alg = a.build(None)?;
            if json {
                emit(out, &alg.basis_dump())?;
            } else {
                write!(out, "{}", alg.basis_text())?;
            }
            Ok(Status::Ok)
        }
        Command::Bivector { alg, block: b, point } => cmd_bivector(&alg.build(None)?, b.as_deref(), point.as_deref(), json, out),
        Command::Casimirs { alg, verify, windows } => cmd_casimirs(&alg.build(None)?, *verify, *windows, json, out),
        Command::Verify { alg, file } => cmd_verify(&alg.build(None)?, file, json, out),
        Command::Orbit { alg, file, example, example_degenerate } => {
            if *example || *example_degenerate {
                let a = alg.build(Some((3, 3)))?;
                let st = preset_stratum(&a, if *example { "nondegenerate" } else { "degenerate" })?;
                return cmd_stratum(&a, &st, json, out);
            }
            let Some(path) = file else {
                return Err(Error::Input("give a point or stratum file, or a preset".into()));
            };
            let a = alg.build(None)?;
            let doc: Value = serde_json::from_str(&std::fs::read_to_string(path)?)?;
            if is_stratum_document(&doc) {
                let spec: StratumSpec = serde_json::from_value(doc)?;
                cmd_stratum(&a, &Stratum::from_spec(&a, &spec)?, json, out)
            } else {
                let values: BTreeMap<String, Value> = serde_json::from_value(doc)?;
                cmd_point(&a, &point_from_json(&a, &values)?, json, out)
            }
        }
        Command::Flow {
            alg,
            point,
            preset,
            seed,
            control,
            time,
            dt,
            csv,
            tol_conservation,
            tol_periodicity,
            tol_constancy,
        } => {
            let tol = Tolerances { conservation: *tol_conservation, periodicity: *tol_periodicity, constancy: *tol_constancy };
            let default = matches!(preset, Some(FlowPreset::CartanCircle)).then_some((2, 3));
            let a = alg.build(default)?;
            let p0 = match (point, preset, seed) {
                (Some(path), _, _) => crate::io::read_point(&a, path)?.to_f64(),
                (_, Some(FlowPreset::CartanCircle), _) => {
                    if (a.rank(), a.step()) != (2, 3) {
                        return Err(Error::Input("the cartan-circle preset needs rank 2 and step 3".into()));
                    }
                    vec![1.0, 0.0, 1.0, 0.0, 0.0]
                }
                (_, Some(FlowPreset::ZeroBrackets), _) => {
                    let mut p = vec![0.0; a.dim()];
                    p[0] = 1.0;
                    p
                }
                (_, _, Some(seed)) => random_initial_state(&a, *seed),
                _ => return Err(Error::Input("give --point, --preset or --seed".into())),
            };
            let spec = match control {
                Some(path) => read_control(path)?,
                None => ControlSpec::identity(a.rank()),
            };
            cmd_flow(&a, &spec, &p0, *time, *dt, csv.as_deref(), &tol, json, out)
        }
    }
}

#[derive(Serialize)]
struct DimsJson {
    rank: usize,
    step: usize,
    graded: Vec<u64>,
    total: u64,
}

fn cmd_dims(alg: &GradedAlgebra, json: bool, out: &mut dyn Write) -> Result<Status> {
    let graded: Vec<u64> = (1..=alg.step()).map(|m| alg.dim_degree(m) as u64).collect();
    let total = graded.iter().sum();
    if json {
        emit(out, &DimsJson { rank: alg.rank(), step: alg.step(), graded, total })?;
    } else {
        for (m, d) in graded.iter().enumerate() {
            writeln!(out, "g{}  {d}", m + 1)?;
        }
        writeln!(out, "total  {total}")?;
    }
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct EvaluatedMatrix {
    rows: Vec<String>,
    cols: Vec<String>,
    entries: Vec<Vec<String>>,
    rank: usize,
}

fn cmd_bivector(alg: &GradedAlgebra, which: Option<&str>, point: Option<&Path>, json: bool, out: &mut dyn Write) -> Result<Status> {
    let m = match which {
        None => bivector(alg),
        Some(text) => {
            let parts: Vec<&str> = text.split(',').map(str::trim).collect();
            let parsed: Vec<usize> = parts.iter().filter_map(|p| p.parse().ok()).collect();
            match parsed.as_slice() {
                [a, b] if parts.len() == 2 => block(alg, *a, *b)?,
                _ => return Err(Error::Input(format!("block must look like `1,2`, got `{text}`"))),
            }
        }
    };
    match point {
        None if json => emit(out, &m.dump(alg))?,
        None => write!(out, "{}", m.to_text(alg))?,
        Some(path) => {
            let p = crate::io::read_point(alg, path)?;
            let v = m.evaluate(&p)?;
            let d = m.dump(alg);
            let entries: Vec<Vec<String>> =
                (0..v.nrows()).map(|i| (0..v.ncols()).map(|j| v.get(i, j).to_string()).collect()).collect();
            let em = EvaluatedMatrix { rows: d.rows, cols: d.cols, entries, rank: v.rank() };
            if json {
                emit(out, &em)?;
            } else {
                for (label, row) in em.rows.iter().zip(&em.entries) {
                    writeln!(out, "{label:>8}  {}", row.join("  "))?;
                }
                writeln!(out, "rank {}", em.rank)?;
            }
        }
    }
    Ok(Status::Ok)
}

fn cmd_casimirs(alg: &GradedAlgebra, verify: bool, windows: Windows, json: bool, out: &mut dyn Write) -> Result<Status> {
    let mut set = complete_system(alg)?;
    if windows == Windows::All && alg.dim_degree(alg.step() - 1) >= alg.rank() {
        let names: Vec<&str> = alg.degree_range(alg.step() - 1).map(|v| alg.name(v)).collect();
        set.members.retain(|m| m.role != crate::casimir::Role::Minor);
        for (cols, f) in minor_casimirs_with_columns(alg, WindowMode::AllSubsets)? {
            let cn: Vec<&str> = cols.iter().map(|&c| names[c]).collect();
            set.members.push(crate::casimir::CasimirRecord {
                role: crate::casimir::Role::Minor,
                provenance: format!("bordered minor on columns {}", cn.join(",")),
                polynomial: f,
            });
        }
    }
    let mut failed = 0;
    if verify {
        for m in &set.members {
            if !is_casimir(alg, &m.polynomial)?.holds {
                failed += 1;
            }
        }
    }
    if json {
        emit(out, &set.export(alg))?;
    } else {
        for e in set.export(alg) {
            writeln!(out, "# {} (degree {}): {}", e.role, e.degree, e.provenance)?;
            writeln!(out, "{}", e.polynomial)?;
        }
        if verify {
            writeln!(out, "# verified {}/{}", set.len() - failed, set.len())?;
        }
    }
    Ok(if failed == 0 { Status::Ok } else { Status::Failed })
}

#[derive(Serialize)]
struct Verdict {
    line: usize,
    casimir: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    generator: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bracket: Option<String>,
}

fn cmd_verify(alg: &GradedAlgebra, file: &Path, json: bool, out: &mut dyn Write) -> Result<Status> {
    let text = if file == Path::new("-") {
        std::io::read_to_string(std::io::stdin())?
    } else {
        std::fs::read_to_string(file)?
    };
    // surface the first parse error with its line before checking anything
    if let Some((line, Err(e))) = parse_lines(alg, &text).into_iter().find(|(_, r)| r.is_err()) {
        return Err(Error::Input(format!("line {line}: {e}")));
    }
    let mut verdicts = Vec::new();
    for (line, f) in read_polynomials(alg, &text)? {
        let c = is_casimir(alg, &f)?;
        let (generator, bracket) = match &c.witness {
            Some((i, b)) => (Some(alg.name(alg.generator(*i)).to_string()), Some(format_polynomial(alg, b))),
            None => (None, None),
        };
        verdicts.push(Verdict { line, casimir: c.holds, generator, bracket });
    }
    if json {
        emit(out, &verdicts)?;
    } else {
        for v in &verdicts {
            match (&v.generator, &v.bracket) {
                (Some(g), Some(b)) => writeln!(out, "line {}: false  {{{g}, f}} = {b}", v.line)?,
                _ => writeln!(out, "line {}: true", v.line)?,
            }
        }
    }
    Ok(if verdicts.iter().all(|v| v.casimir) { Status::Ok } else { Status::Failed })
}

#[derive(Serialize)]
struct LevelJson {
    gamma: String,
    d_matrix: Vec<Vec<String>>,
    b: Vec<String>,
    function: String,
}

#[derive(Serialize)]
struct StratumJson {
    description: String,
    rank_b12: usize,
    h1: Vec<String>,
    kernel_casimirs: Vec<String>,
    orbit_functions: Vec<LevelJson>,
    h2_constant: bool,
    ker_d_constant: bool,
}

fn cmd_stratum(alg: &GradedAlgebra, st: &Stratum, json: bool, out: &mut dyn Write) -> Result<Status> {
    let a = analyze(alg, st)?;
    let fmt = |f: &crate::poly::Polynomial| format_polynomial(alg, f);
    let h2 = verify_constancy(alg, &a, ConstancySubspace::H2)?.holds;
    let kd = verify_constancy(alg, &a, ConstancySubspace::KerD)?.holds;
    let report = StratumJson {
        description: st.description.clone(),
        rank_b12: a.reduction.rank,
        h1: a.reduction.h1.iter().map(|h| h.format(alg)).collect(),
        kernel_casimirs: a.kernel_casimirs.iter().map(fmt).collect(),
        orbit_functions: a
            .functions
            .iter()
            .map(|lf| LevelJson {
                gamma: lf.gamma.format(alg),
                d_matrix: lf.d_matrix.iter().map(|r| r.iter().map(fmt).collect()).collect(),
                b: lf.b.iter().map(fmt).collect(),
                function: fmt(&lf.function),
            })
            .collect(),
        h2_constant: h2,
        ker_d_constant: kd,
    };
    if json {
        emit(out, &report)?;
    } else {
        writeln!(out, "stratum: {}", report.description)?;
        writeln!(out, "rank of the (g1, g2) block: {}", report.rank_b12)?;
        writeln!(out, "annihilator h1: {}", if report.h1.is_empty() { "0".into() } else { report.h1.join(", ") })?;
        writeln!(out, "kernel functions:")?;
        for f in &report.kernel_casimirs {
            writeln!(out, "  {f}")?;
        }
        for lf in &report.orbit_functions {
            writeln!(out, "gamma = {}", lf.gamma)?;
            writeln!(out, "  D = [{}]", lf.d_matrix.iter().map(|r| r.join(", ")).collect::<Vec<_>>().join("; "))?;
            writeln!(out, "  b = [{}]", lf.b.join(", "))?;
            writeln!(out, "  f = {}", lf.function)?;
        }
        writeln!(out, "h2 functions constant on orbits: {}", report.h2_constant)?;
        writeln!(out, "Ker D functions constant on orbits: {}", report.ker_d_constant)?;
    }
    Ok(if h2 && kd { Status::Ok } else { Status::Failed })
}

#[derive(Serialize)]
struct PointJson {
    orbit_type: OrbitType,
    label: String,
    orbit_dim: usize,
    k1: usize,
    k2: usize,
    rank_b12: usize,
    rank_b11: usize,
    rank_c: usize,
    quadrics: Vec<crate::orbit::QuadricSignature>,
    defining_functions: Vec<String>,
    defining_rank: usize,
    two_dimensional: Option<TwoDimType>,
}

fn cmd_point(alg: &GradedAlgebra, p: &crate::poly::Point, json: bool, out: &mut dyn Write) -> Result<Status> {
    let rep = classify_orbit(alg, p)?;
    let two = if alg.step() == 3 { Some(classify_2d_orbit(alg, p)?) } else { None };
    let j = PointJson {
        orbit_type: rep.orbit_type,
        label: rep.orbit_type.to_string(),
        orbit_dim: rep.orbit_dim,
        k1: rep.k1,
        k2: rep.k2,
        rank_b12: rep.rank_b12,
        rank_b11: rep.rank_b11,
        rank_c: rep.rank_c,
        quadrics: rep.quadrics.clone(),
        defining_functions: rep.defining_functions.iter().map(|f| format_polynomial(alg, f)).collect(),
        defining_rank: rep.defining_rank,
        two_dimensional: two,
    };
    if json {
        emit(out, &j)?;
    } else {
        writeln!(out, "orbit: {}, dimension {}", j.label, j.orbit_dim)?;
        writeln!(out, "k1 = {}, k2 = {}, rank B12 = {}, rank B11 = {}", j.k1, j.k2, j.rank_b12, j.rank_b11)?;
        for q in &j.quadrics {
            writeln!(out, "quadric: rank {}, signature ({}, {})", q.rank, q.positive, q.negative)?;
        }
        if let Some(t) = two.filter(|t| *t != TwoDimType::Not2d) {
            writeln!(out, "two-dimensional orbit of {} type", if t == TwoDimType::Heisenberg { "Heisenberg" } else { "Engel" })?;
        }
        writeln!(out, "defining functions ({} independent at p):", j.defining_rank)?;
        for f in &j.defining_functions {
            writeln!(out, "  {f} = 0")?;
        }
    }
    Ok(Status::Ok)
}

fn read_control(path: &Path) -> Result<ControlSpec> {
    let rows: Vec<Vec<Value>> = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let parsed: Vec<Vec<crate::Rational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|v| match v {
                    Value::String(s) => parse_rational(s),
                    Value::Number(n) if n.is_i64() => Ok(crate::num::int(n.as_i64().unwrap())),
                    Value::Number(n) => n
                        .as_f64()
                        .and_then(crate::num::from_f64)
                        .ok_or_else(|| Error::Input("control entries must be finite".into())),
                    _ => Err(Error::Input("control entries must be numbers or \"a/b\" strings".into())),
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    if parsed.is_empty() || parsed.iter().any(|r| r.len() != parsed.len()) {
        return Err(Error::Input("control matrix must be square".into()));
    }
    ControlSpec::ellipsoid(RatMatrix::from_rows(parsed))
}

#[derive(Serialize)]
struct FlowJson {
    steps: usize,
    dt: f64,
    time: f64,
    behavior: Behavior,
    conservation: ConservationReport,
}

#[allow(clippy::too_many_arguments)]
fn cmd_flow(
    alg: &GradedAlgebra,
    spec: &ControlSpec,
    p0: &[f64],
    time: f64,
    dt: f64,
    csv: Option<&Path>,
    tol: &Tolerances,
    json: bool,
    out: &mut dyn Write,
) -> Result<Status> {
    let traj = integrate_vertical(alg, spec, p0, time, dt)?;
    if let Some(path) = csv {
        traj.write_csv(std::fs::File::create(path)?)?;
    }
    let functions: Vec<(String, crate::poly::Polynomial)> = complete_system(alg)?
        .members
        .into_iter()
        .map(|m| (format_polynomial(alg, &m.polynomial), m.polynomial))
        .collect();
    let report = conservation_report(&functions, spec, &traj, tol.conservation);
    let behavior = behavior_classify(&traj, alg.rank(), tol);
    let pass = report.pass;
    if json {
        emit(out, &FlowJson { steps: traj.len() - 1, dt, time, behavior, conservation: report })?;
    } else {
        let label = match behavior {
            Behavior::Periodic { period } => format!("periodic, period ≈ {period:.4}"),
            Behavior::Constant => "constant".into(),
            Behavior::AsymptoticallyConstant => "asymptotically constant".into(),
            Behavior::Undetermined => "undetermined".into(),
        };
        writeln!(out, "{label}")?;
        writeln!(
            out,
            "max drift {:.3e} over {} functions (tolerance {:.0e}): {}",
            report.max_drift(),
            report.entries.len(),
            report.tolerance,
            if pass { "ok" } else { "exceeded" }
        )?;
        for d in report.entries.iter().filter(|d| !d.pass) {
            writeln!(out, "  {}: drift {:.3e} at step {}", d.name, d.max_drift, d.at_index)?;
        }
    }
    Ok(if pass { Status::Ok } else { Status::Failed })
}
