use carnot::orbit::{
    analyze, classify_orbit, d_form, preset_stratum, stepwise_reduce, verify_constancy, ConstancySubspace, OrbitType,
    Stratum, StratumSpec,
};
use carnot::parse::{format_polynomial, parse_polynomial};
use carnot::poly::{Point, Polynomial};
use carnot::GradedAlgebra;

fn same_up_to_scale(st: &Stratum, got: &Polynomial, expected: &Polynomial) -> bool {
    st.reduce(got).proportional(&st.reduce(expected))
}

#[test]
fn nondegenerate_rank3_stratum() {
    let alg = GradedAlgebra::build(3, 3).unwrap();
    let st = preset_stratum(&alg, "nondegenerate").unwrap();
    let a = analyze(&alg, &st).unwrap();
    assert_eq!(a.reduction.rank, 2);
    assert_eq!(a.reduction.h1.len(), 1);
    assert_eq!(a.reduction.h1[0].format(&alg), "x3");

    assert_eq!(a.kernel_casimirs.len(), 1);
    let kc = parse_polynomial(
        &alg,
        "x12*(x113*x223 - x213*x123) + x13*(x212*x123 - x112*x223) + x23*(x112*x213 - x113*x212)",
    )
    .unwrap();
    assert!(same_up_to_scale(&st, &a.kernel_casimirs[0], &kc), "{}", format_polynomial(&alg, &a.kernel_casimirs[0]));

    assert_eq!(a.functions.len(), 1);
    let lf = &a.functions[0];
    let d: Vec<Vec<String>> = lf.d_matrix.iter().map(|r| r.iter().map(|e| format_polynomial(&alg, e)).collect()).collect();
    assert_eq!(d, vec![vec!["x113", "x213"], vec!["x213", "x223"]]);
    let b: Vec<String> = lf.b.iter().map(|e| format_polynomial(&alg, e)).collect();
    assert_eq!(b, vec!["x13", "x23"]);
    let expected = parse_polynomial(
        &alg,
        "x3*(x113*x223 - x123^2) - 1/2*(x13^2*x223 - x13*x23*(x123 + x213) + x23^2*x113)",
    )
    .unwrap();
    assert!(same_up_to_scale(&st, &lf.function, &expected), "{}", format_polynomial(&alg, &lf.function));
    assert!(verify_constancy(&alg, &a, ConstancySubspace::H2).unwrap().holds);
    assert!(verify_constancy(&alg, &a, ConstancySubspace::KerD).unwrap().holds);
}

#[test]
fn degenerate_rank3_stratum() {
    let alg = GradedAlgebra::build(3, 3).unwrap();
    let st = preset_stratum(&alg, "degenerate").unwrap();
    let a = analyze(&alg, &st).unwrap();
    assert_eq!(a.functions.len(), 1);
    let lf = &a.functions[0];
    assert!(lf.b2.iter().any(|e| !e.is_zero()));
    let expected =
        parse_polynomial(&alg, "x3*x113*x212 - 1/2*x13^2*x212 - x12*x23*x113 + x13*x23*x112").unwrap();
    assert!(same_up_to_scale(&st, &lf.function, &expected), "{}", format_polynomial(&alg, &lf.function));

    let kd = carnot::orbit::ker_d_elements(&alg, &st, lf).unwrap();
    assert_eq!(kd.len(), 1);
    assert_eq!(kd[0].format(&alg), "x113*x23");
    let check = verify_constancy(&alg, &a, ConstancySubspace::KerD).unwrap();
    assert!(check.holds && check.checked == 1);

    // the g2-variables of b2 all lie in Ker D
    let b2_vars: std::collections::BTreeSet<usize> = lf
        .b2
        .iter()
        .flat_map(|e| e.variables())
        .filter(|&v| alg.degree_of(v) == 2)
        .collect();
    let kd_vars: std::collections::BTreeSet<usize> =
        kd.iter().flat_map(|u| u.pair().variables()).filter(|&v| alg.degree_of(v) == 2).collect();
    assert!(b2_vars.is_subset(&kd_vars));
}

#[test]
fn constancy_fails_off_the_stratum() {
    let alg = GradedAlgebra::build(3, 3).unwrap();
    let st = preset_stratum(&alg, "degenerate").unwrap();
    let mut a = analyze(&alg, &st).unwrap();
    a.stratum = preset_stratum(&alg, "nondegenerate").unwrap();
    let check = verify_constancy(&alg, &a, ConstancySubspace::KerD).unwrap();
    assert!(!check.holds);
    assert!(!check.witnesses.is_empty());
}

#[test]
fn d_form_is_symmetric_on_strata() {
    let alg = GradedAlgebra::build(3, 3).unwrap();
    for name in ["nondegenerate", "degenerate"] {
        let st = preset_stratum(&alg, name).unwrap();
        let a = analyze(&alg, &st).unwrap();
        for g in &a.kernel_k {
            let d = d_form(&alg, &st, g).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    assert!(st.reduce(&(&d[i][j] - &d[j][i])).is_zero());
                }
            }
        }
    }
}

#[test]
fn rank4_quadrics_are_separate() {
    let alg = GradedAlgebra::build(4, 3).unwrap();
    let spec = StratumSpec {
        set_zero: ["x313", "x314", "x323", "x324", "x334", "x414", "x424", "x434", "x134", "x234", "x34"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        identify: vec![["x123".into(), "x213".into()], ["x124".into(), "x214".into()]],
        ..Default::default()
    };
    let st = Stratum::from_spec(&alg, &spec).unwrap();
    let red = stepwise_reduce(&alg, &st).unwrap();
    assert_eq!(red.rank, 2);
    let a = analyze(&alg, &st).unwrap();
    assert_eq!(a.functions.len(), 2);
    assert!(verify_constancy(&alg, &a, ConstancySubspace::H2).unwrap().holds);
    let g2: Vec<usize> = alg.degree_range(2).collect();
    let quad_vars: Vec<std::collections::BTreeSet<usize>> = a
        .functions
        .iter()
        .map(|f| f.eta1.pair().variables().into_iter().filter(|v| g2.contains(v)).collect())
        .collect();
    assert!(quad_vars.iter().all(|v| !v.is_empty()));
    assert!(quad_vars[0].is_disjoint(&quad_vars[1]));
}

#[test]
fn cartan_orbits() {
    let alg = GradedAlgebra::build(2, 3).unwrap();
    let p = Point::from_names(&alg, [("x12", carnot::num::int(1))]).unwrap();
    let rep = classify_orbit(&alg, &p).unwrap();
    assert_eq!(rep.orbit_dim, 2);
    assert_eq!(rep.orbit_type, OrbitType::AffineSubspace);
    assert_eq!(rep.defining_rank, alg.dim() - 2);
}

fn point(alg: &GradedAlgebra, vals: &[(&str, i64)]) -> Point {
    Point::from_names(alg, vals.iter().map(|&(n, v)| (n, carnot::num::int(v)))).unwrap()
}

#[test]
fn rank3_table_rows() {
    let alg = GradedAlgebra::build(3, 3).unwrap();
    let cases: &[(&[(&str, i64)], OrbitType, usize)] = &[
        (&[("x112", 1), ("x223", 1), ("x313", -1)], OrbitType::AffineSubspace, 6),
        (&[("x113", 1), ("x223", -1)], OrbitType::R2xHyperbolicParaboloid, 4),
        (&[("x113", 1), ("x223", 1)], OrbitType::R2xEllipticParaboloid, 4),
        (&[("x113", 1), ("x212", 1)], OrbitType::ParabolicCylinder, 4),
        (&[("x112", 1), ("x23", 1)], OrbitType::AffineSubspace, 4),
        (&[("x112", 1)], OrbitType::AffineSubspace, 2),
        (&[("x12", 1)], OrbitType::AffineSubspace, 2),
        (&[], OrbitType::Point, 0),
    ];
    for (vals, ty, dim) in cases {
        let p = point(&alg, vals);
        let rep = classify_orbit(&alg, &p).unwrap();
        assert_eq!((rep.orbit_type, rep.orbit_dim), (*ty, *dim), "{vals:?}");
        assert_eq!(rep.defining_rank, alg.dim() - rep.orbit_dim, "{vals:?}");
        for f in &rep.defining_functions {
            assert!(f.evaluate(&p).unwrap() == carnot::num::int(0));
        }
    }
}

/// B12 and D only see the g3 coordinates; over all of {-1, 0, 1}^8 a rank-2
/// block always comes with a nonzero quadric.
#[test]
fn rank_two_without_quadric_does_not_occur() {
    let alg = GradedAlgebra::build(3, 3).unwrap();
    let g3: Vec<usize> = alg.degree_range(3).collect();
    let b12 = carnot::poisson::block(&alg, 1, 2).unwrap();
    let mut rank_two = 0;
    for code in 0..3usize.pow(g3.len() as u32) {
        let mut p = Point::zero(&alg);
        let mut c = code;
        for &v in &g3 {
            p.set(v, carnot::num::int(c as i64 % 3 - 1));
            c /= 3;
        }
        if b12.rank_at(&p).unwrap() != 2 {
            continue;
        }
        rank_two += 1;
        let rep = classify_orbit(&alg, &p).unwrap();
        assert!(rep.quadrics.iter().any(|q| q.rank > 0), "{:?}", p.coords());
    }
    assert!(rank_two > 1000, "{rank_two}");
}
