//! Orbit types through hand-picked points of the rank-3, step-3 algebra.
use carnot::num::int;
use carnot::orbit::classify_orbit;
use carnot::poly::Point;
use carnot::GradedAlgebra;

fn main() -> carnot::Result<()> {
    let alg = GradedAlgebra::build(3, 3)?;
    let points: &[&[(&str, i64)]] = &[
        &[("x112", 1), ("x223", 1), ("x313", -1)],
        &[("x113", 1), ("x223", -1)],
        &[("x113", 1), ("x223", 1)],
        &[("x113", 1), ("x212", 1)],
        &[("x112", 1), ("x23", 1)],
        &[("x112", 1)],
        &[("x12", 1)],
        &[],
    ];
    for vals in points {
        let p = Point::from_names(&alg, vals.iter().map(|&(n, v)| (n, int(v))))?;
        let rep = classify_orbit(&alg, &p)?;
        let at: Vec<String> = vals.iter().map(|(n, v)| format!("{n}={v}")).collect();
        println!(
            "{:<28} dim {}  rk B12 {}  {}",
            if at.is_empty() { "origin".to_string() } else { at.join(" ") },
            rep.orbit_dim,
            rep.rank_b12,
            rep.orbit_type
        );
    }
    Ok(())
}
