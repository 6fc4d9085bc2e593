mod common;

use common::{golden, repaired_c2, var};

use carnot::casimir::{
    complete_system, generic_corank, is_casimir, linear_casimirs, minor_casimirs, quadratic_casimirs_step4, Role,
    WindowMode,
};
use carnot::linalg::rank_of_rows;
use carnot::orbit::random_point;
use carnot::parse::{format_polynomial, parse_polynomial};
use carnot::poly::Polynomial;
use carnot::GradedAlgebra;

#[test]
fn reference_c2_repeats_a_cofactor() {
    let alg = GradedAlgebra::build(4, 3).unwrap();
    let c2 = golden(&alg, "rank4_c2.tex");
    let check = is_casimir(&alg, &c2).unwrap();
    assert!(!check.holds);
    let co13 = c2.coefficients_in(var(&alg, "x13"))[1].clone();
    let co34 = c2.coefficients_in(var(&alg, "x34"))[1].clone();
    assert_eq!(co13, co34);
    let fixed = repaired_c2(&alg, &c2);
    assert!(is_casimir(&alg, &fixed).unwrap().holds);
    // the repair touches only the x34 part
    let diff = &fixed - &c2;
    assert!(diff.terms().all(|(m, _)| m.exponent(var(&alg, "x34")) == 1));
}

#[test]
fn linear_lists() {
    let alg = GradedAlgebra::build(2, 3).unwrap();
    let names: Vec<String> = linear_casimirs(&alg).iter().map(|f| format_polynomial(&alg, f)).collect();
    assert_eq!(names, ["x112", "x212"]);
    let alg = GradedAlgebra::build(2, 4).unwrap();
    let names: Vec<String> = linear_casimirs(&alg).iter().map(|f| format_polynomial(&alg, f)).collect();
    assert_eq!(names, ["x1112", "x1212", "x2212"]);
}

#[test]
fn rank4_minors_match_golden_span() {
    let alg = GradedAlgebra::build(4, 3).unwrap();
    let minors = minor_casimirs(&alg, WindowMode::Consecutive).unwrap();
    assert_eq!(minors.len(), 2);
    for f in &minors {
        assert_eq!(f.total_degree(), Some(5));
        assert!(is_casimir(&alg, f).unwrap().holds);
    }
    let c1 = golden(&alg, "rank4_c1.tex");
    let c2 = golden(&alg, "rank4_c2.tex");
    assert_eq!(c1.total_degree(), Some(5));
    assert!(is_casimir(&alg, &c1).unwrap().holds);
    let c2 = repaired_c2(&alg, &c2);
    assert!(is_casimir(&alg, &c2).unwrap().holds);

    let linear = linear_casimirs(&alg);
    for seed in 0..12 {
        let p = random_point(&alg, 1000 + seed);
        let grads = |fs: &[Polynomial]| -> Vec<Vec<carnot::Rational>> {
            fs.iter().chain(&linear).map(|f| f.gradient(&p).unwrap()).collect()
        };
        let a = grads(&minors);
        let b = grads(&[c1.clone(), c2.clone()]);
        let both: Vec<_> = a.iter().chain(&b).cloned().collect();
        assert_eq!(rank_of_rows(&a), rank_of_rows(&b));
        assert_eq!(rank_of_rows(&a), rank_of_rows(&both));
    }
}

#[test]
fn rank5_minor_degrees() {
    let alg = GradedAlgebra::build(5, 3).unwrap();
    let minors = minor_casimirs(&alg, WindowMode::Consecutive).unwrap();
    assert_eq!(minors.len(), 5);
    let g2: Vec<usize> = alg.degree_range(2).collect();
    for f in &minors {
        assert_eq!(f.total_degree(), Some(6));
        assert!(is_casimir(&alg, f).unwrap().holds);
        for (m, _) in f.terms() {
            let in_g2: u32 = m.factors().iter().filter(|(v, _)| g2.contains(&(*v as usize))).map(|(_, e)| e).sum();
            assert_eq!(in_g2, 1);
        }
    }
}

#[test]
fn all_subset_minors_are_casimirs() {
    let alg = GradedAlgebra::build(4, 3).unwrap();
    let all = minor_casimirs(&alg, WindowMode::AllSubsets).unwrap();
    assert_eq!(all.len(), 6);
    for f in &all {
        assert!(is_casimir(&alg, f).unwrap().holds);
    }
}

#[test]
fn step4_quartic() {
    let alg = GradedAlgebra::build(2, 4).unwrap();
    let q = quadratic_casimirs_step4(&alg).unwrap();
    assert_eq!(q.len(), 1);
    let expected = parse_polynomial(
        &alg,
        "x12*(x1112*x2212 - x1212^2) - 1/2*x2212*x112^2 - 1/2*x1112*x212^2 + x1212*x112*x212",
    )
    .unwrap();
    assert_eq!(q[0].1, expected.canonical());
    assert!(is_casimir(&alg, &q[0].1).unwrap().holds);
}

#[test]
fn step4_rank3_single_quadratic() {
    let alg = GradedAlgebra::build(3, 4).unwrap();
    let q = quadratic_casimirs_step4(&alg).unwrap();
    assert_eq!(q.len(), 1);
    assert!(is_casimir(&alg, &q[0].1).unwrap().holds);
}

#[test]
fn complete_systems_are_complete() {
    for (r, s, lin, minor, quad) in [(2, 3, 2, 0, 1), (3, 3, 8, 0, 0), (4, 3, 20, 2, 0), (2, 4, 3, 0, 1), (3, 4, 18, 5, 1)] {
        let alg = GradedAlgebra::build(r, s).unwrap();
        let set = complete_system(&alg).unwrap();
        assert_eq!(set.linear().len(), lin, "({r},{s})");
        assert_eq!(set.minor().len(), minor, "({r},{s})");
        assert_eq!(set.quadratic_on_levels().len(), quad, "({r},{s})");
        for f in set.polynomials() {
            assert!(is_casimir(&alg, &f).unwrap().holds);
        }
        let (_, corank) = generic_corank(&alg).unwrap();
        assert_eq!(set.len(), corank, "({r},{s})");
        for seed in [5, 6] {
            let q = random_point(&alg, seed);
            assert_eq!(set.differential_rank(&q).unwrap(), set.len(), "({r},{s})");
        }
        let export = set.export(&alg);
        assert_eq!(export.len(), set.len());
        assert!(export.iter().all(|e| e.role != Role::Minor || e.degree == r as u32 + 1));
    }
}
