//! Graded dimensions of free nilpotent algebras and the basis of a small one.
use carnot::{graded_dimension, GradedAlgebra};

fn main() -> carnot::Result<()> {
    println!(" r   g1   g2   g3    g4");
    for r in 2..=6 {
        let dims: Vec<String> = (1..=4).map(|m| format!("{:>4}", graded_dimension(r, m))).collect();
        println!("{r:>2} {}", dims.join(" "));
    }

    let alg = GradedAlgebra::build(2, 4)?;
    println!("\nbasis of the rank-2, step-4 algebra:");
    print!("{}", alg.basis_text());
    Ok(())
}
