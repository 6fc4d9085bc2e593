//! Parse polynomials in the usual notation and test them for being Casimirs.
use carnot::casimir::is_casimir;
use carnot::parse::{format_polynomial, parse_polynomial};
use carnot::GradedAlgebra;

fn main() -> carnot::Result<()> {
    let alg = GradedAlgebra::build(2, 3)?;
    for text in ["x112", "x12^2/2 + x1*x212 - x2*x112", "x12^2 + x1*x212", "x221 + x212"] {
        let f = parse_polynomial(&alg, text)?;
        match is_casimir(&alg, &f)?.witness {
            None => println!("{text:<28} casimir"),
            Some((i, b)) => println!("{text:<28} not a casimir: {{x{}, f}} = {}", i + 1, format_polynomial(&alg, &b)),
        }
    }
    Ok(())
}
