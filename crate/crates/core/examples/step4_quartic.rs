//! Step 4: the Casimir that is quadratic on the level sets of the central
//! coordinates, for ranks 2 and 3.
use std::time::Instant;

use carnot::casimir::{is_casimir, quadratic_casimirs_step4};
use carnot::parse::format_polynomial;
use carnot::GradedAlgebra;

fn main() -> carnot::Result<()> {
    let alg = GradedAlgebra::build(2, 4)?;
    for (gamma, f) in quadratic_casimirs_step4(&alg)? {
        println!("gamma = {}", gamma.format(&alg));
        println!("f = {}", format_polynomial(&alg, &f));
    }

    // the rank-3 function is large; just report its size
    let alg = GradedAlgebra::build(3, 4)?;
    let t = Instant::now();
    for (_, f) in quadratic_casimirs_step4(&alg)? {
        let ok = is_casimir(&alg, &f)?.holds;
        println!("rank 3: {} terms, degree {}, casimir: {ok} ({:.2?})", f.len(), f.total_degree().unwrap_or(0), t.elapsed());
    }
    Ok(())
}
