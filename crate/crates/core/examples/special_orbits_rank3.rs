//! Non-generic orbits of the rank-3, step-3 algebra on the two shipped
//! strata: kernel functions, the D form and the level function.
use carnot::orbit::{analyze, preset_stratum, verify_constancy, ConstancySubspace};
use carnot::parse::format_polynomial;
use carnot::GradedAlgebra;

fn main() -> carnot::Result<()> {
    let alg = GradedAlgebra::build(3, 3)?;
    for name in ["nondegenerate", "degenerate"] {
        let st = preset_stratum(&alg, name)?;
        let a = analyze(&alg, &st)?;
        println!("== {} ==", st.description);
        for f in &a.kernel_casimirs {
            println!("kernel: {}", format_polynomial(&alg, f));
        }
        for lf in &a.functions {
            let d: Vec<String> = lf
                .d_matrix
                .iter()
                .map(|row| row.iter().map(|e| format_polynomial(&alg, e)).collect::<Vec<_>>().join(", "))
                .collect();
            println!("D = [{}]", d.join("; "));
            println!("level: {}", format_polynomial(&alg, &lf.function));
        }
        let h2 = verify_constancy(&alg, &a, ConstancySubspace::H2)?;
        let kd = verify_constancy(&alg, &a, ConstancySubspace::KerD)?;
        println!("constant along h2: {}, along Ker D: {}\n", h2.holds, kd.holds);
    }
    Ok(())
}
