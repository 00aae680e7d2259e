//! Approximates a full multivariate polynomial with one shallow network by
//! superposing the single-monomial constructions along shared directions.
//!
//! Every monomial c * z1^e1 ... zd^ed is produced by neurons whose weights
//! live on a segment of directions (1, l, l^2, ...) scaled by gamma; the
//! outputs add up because a shallow network is a plain sum of neurons.
//!
//! Run with: cargo run --example shallow_polynomial

use weightsmith::activation::Activation;
use weightsmith::field::{re, FieldTag, Scalar};
use weightsmith::grid::BoxGrid;
use weightsmith::poly::{MPoly, MultiIndex};
use weightsmith::shallow::build_polynomial;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // p(z) = (2+i) z1^2 z2 - 3 z2^3 + (0.5 - 0.25i)
    let field = FieldTag::Complex;
    let mut p = MPoly::zero(2, field);
    p.add_term(MultiIndex(vec![2, 1]), Scalar::new(2.0, 1.0))?;
    p.add_term(MultiIndex(vec![0, 3]), re(-3.0))?;
    p.add_term(MultiIndex(vec![0, 0]), Scalar::new(0.5, -0.25))?;

    let act = Activation::exp(field);
    println!("target: a degree-3 polynomial in two complex variables");
    println!("{:<12} {:>10} {:>14}", "gamma", "neurons", "sup error");
    for gamma in [1e-2, 5e-3, 2.5e-3] {
        let net = build_polynomial(&act, &p, 1.0, gamma)?;
        let grid = BoxGrid::symmetric_with_samples(field, 2, 1.0, 9)?;
        let mut worst = 0.0f64;
        for z in grid.points() {
            worst = worst.max((net.eval(&z)? - p.eval(&z)?).norm());
        }
        println!("{gamma:<12} {:>10} {worst:>14.6e}", net.width());
    }

    // The same recipe with a trigonometric activation over the reals.
    let field = FieldTag::Real;
    let mut q = MPoly::zero(1, field);
    q.add_term(MultiIndex(vec![4]), re(1.0))?;
    q.add_term(MultiIndex(vec![1]), re(-2.0))?;
    let act = Activation::cosh(field);
    let net = build_polynomial(&act, &q, 1.0, 1e-3)?;
    let x = [re(0.7)];
    println!("\ncosh-activation network for x^4 - 2x at x=0.7:");
    println!("  network: {:+.12}", net.eval(&x)?.re);
    println!("  exact  : {:+.12}", q.eval(&x)?.re);
    Ok(())
}
