//! The two degree-5 bordered-minor Casimirs of the rank-4, step-3 algebra,
//! and independence of the full system at a random rational point.
use carnot::casimir::{complete_system, minor_casimirs_with_columns, WindowMode};
use carnot::orbit::random_point;
use carnot::GradedAlgebra;

fn main() -> carnot::Result<()> {
    let alg = GradedAlgebra::build(4, 3)?;
    let g2: Vec<usize> = alg.degree_range(2).collect();
    for (cols, f) in minor_casimirs_with_columns(&alg, WindowMode::Consecutive)? {
        let names: Vec<&str> = cols.iter().map(|&c| alg.name(g2[c])).collect();
        println!("columns {}: {} terms, degree {}", names.join(","), f.len(), f.total_degree().unwrap_or(0));
    }

    let set = complete_system(&alg)?;
    let p = random_point(&alg, 1);
    println!("{} functions, differential rank {} at a random point", set.len(), set.differential_rank(&p)?);
    Ok(())
}
