//! Helpers shared by the integration tests and the acceptance harness.
#![allow(dead_code)]

use carnot::parse::parse_polynomial;
use carnot::poly::Polynomial;
use carnot::GradedAlgebra;

/// Turns a LaTeX `array` body into plain polynomial syntax.
pub fn latex_to_text(tex: &str) -> String {
    let mut s = tex.to_string();
    for prefix in ["C_1 =", "C_2 ="] {
        s = s.replace(prefix, "");
    }
    let s = s.replace("\\\\", " ").replace('&', " ").replace("\\xi_", "x");
    s.chars()
        .filter(|c| !matches!(c, '{' | '}' | ',' | '.'))
        .collect::<String>()
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn golden(alg: &GradedAlgebra, file: &str) -> Polynomial {
    let path = format!("{}/tests/data/{file}", env!("CARGO_MANIFEST_DIR"));
    let tex = std::fs::read_to_string(path).unwrap();
    parse_polynomial(alg, &latex_to_text(&tex)).unwrap()
}

pub fn var(alg: &GradedAlgebra, name: &str) -> usize {
    alg.index_of(name).unwrap()
}

/// The reference second function repeats the `x13` cofactor after `x34`; the
/// cofactor of `x34` in the bordered minor on columns 13,14,23,24,34 is the
/// 4x4 minor of the block on columns 13,14,23,24.
pub fn repaired_c2(alg: &GradedAlgebra, reference: &Polynomial) -> Polynomial {
    let ring = alg.ring();
    let x34 = var(alg, "x34");
    let co34 = reference.coefficients_in(x34)[1].clone();
    let without = reference - &(&co34 * &Polynomial::var(ring, x34));
    let b12 = carnot::poisson::block(alg, 1, 2).unwrap();
    let g2: Vec<usize> = alg.degree_range(2).collect();
    let cols: Vec<usize> = ["x13", "x14", "x23", "x24"].iter().map(|n| g2.iter().position(|&v| v == var(alg, n)).unwrap()).collect();
    let m: Vec<Vec<Polynomial>> = b12.entries.iter().map(|row| cols.iter().map(|&c| row[c].clone()).collect()).collect();
    let minor = carnot::linalg::poly_det(ring, &m);
    &without + &(&minor * &Polynomial::var(ring, x34))
}
