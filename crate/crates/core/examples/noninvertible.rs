//! Degrees, a fiber and a zero-height orbit of `(y²(xy+1), x(xy³+1))`.
//!
//! `cargo run --release -p arithdyn --example noninvertible`

use arithdyn::degrees::{analyze_degrees, count_preimages, DegreeConfig};
use arithdyn::expr::parse_map;
use arithdyn::orbit::{check_main_theorem, OrbitConfig, DEFAULT_ZERO_THRESHOLD};
use arithdyn::RationalPoint;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = parse_map("y^2*(x*y+1), x*(x*y^3+1)")?;
    let d = analyze_degrees(&f, &DegreeConfig::default())?;
    println!("deg fⁿ: {:?}", d.confidence.sequence.values);
    println!("λ₁ = {} (root of {}), λ₂ = {}", d.lambda1.decimal(9), d.lambda1.polynomial(), d.lambda2);

    let fiber = count_preimages(&f.clone().into_dominant()?, &RationalPoint::origin())?;
    for (p, m) in &fiber.rational {
        println!("preimage of (0,0): {p:?} with multiplicity {m}");
    }

    let p: RationalPoint = "2,0".parse()?;
    let r = check_main_theorem(&f, &p, &d, DEFAULT_ZERO_THRESHOLD, &OrbitConfig::default())?;
    println!("ĥ(2,0) ≈ {:.2e}, α ≈ {:.4}, α ≤ λ₂: {:?}", r.hhat.value, r.alpha.extrapolated, r.inequality_star_ok);
    Ok(())
}
