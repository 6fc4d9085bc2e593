//! Complete Casimir system of the rank-2, step-3 algebra, checked against
//! the bracket with every generator.
use carnot::casimir::{complete_system, is_casimir};
use carnot::parse::format_polynomial;
use carnot::GradedAlgebra;

fn main() -> carnot::Result<()> {
    let alg = GradedAlgebra::build(2, 3)?;
    let set = complete_system(&alg)?;
    for m in &set.members {
        let ok = is_casimir(&alg, &m.polynomial)?.holds;
        println!("{:<20} {}  [{}]", m.role.to_string(), format_polynomial(&alg, &m.polynomial), if ok { "ok" } else { "FAILED" });
    }
    Ok(())
}
