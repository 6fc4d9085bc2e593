//! Vertical extremal flow: the Cartan circle, and Casimir drift from a
//! random start in rank 3.
use carnot::casimir::complete_system;
use carnot::flow::{behavior_classify, conservation_report, integrate_vertical, random_initial_state, ControlSpec, Tolerances};
use carnot::GradedAlgebra;

fn main() -> carnot::Result<()> {
    let cartan = GradedAlgebra::build(2, 3)?;
    let spec = ControlSpec::identity(2);
    let tr = integrate_vertical(&cartan, &spec, &[1.0, 0.0, 1.0, 0.0, 0.0], 10.0, 1e-3)?;
    println!("cartan circle: {:?}", behavior_classify(&tr, 2, &Tolerances::default()));

    let alg = GradedAlgebra::build(3, 3)?;
    let spec = ControlSpec::identity(3);
    let fs: Vec<_> = complete_system(&alg)?
        .members
        .into_iter()
        .map(|m| (m.provenance, m.polynomial))
        .collect();
    for dt in [1e-2, 5e-3, 1e-3] {
        let tr = integrate_vertical(&alg, &spec, &random_initial_state(&alg, 3), 10.0, dt)?;
        let rep = conservation_report(&fs, &spec, &tr, 1e-8);
        println!("dt = {dt:e}: max drift {:.2e}", rep.max_drift());
    }
    Ok(())
}
