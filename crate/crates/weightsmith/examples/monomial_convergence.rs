//! Builds shallow networks that recover single monomials z^m and tabulates
//! how the sup-norm error shrinks as the weight scale gamma shrinks.
//!
//! The builder places m+1 neurons on a shared direction with binomially
//! weighted output coefficients; differencing the activation's power series
//! leaves the degree-m term plus a tail that vanishes linearly in gamma.
//!
//! Run with: cargo run --example monomial_convergence

use weightsmith::activation::Activation;
use weightsmith::analysis::convergence_study;
use weightsmith::field::FieldTag;
use weightsmith::grid::BoxGrid;
use weightsmith::shallow::build_monomial_1d;
use weightsmith::table::ResultTable;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let field = FieldTag::Real;
    let act = Activation::exp(field);
    let grid = BoxGrid::symmetric(field, 1, 1.0)?;
    let gammas = [1e-2, 5e-3, 2.5e-3];

    for degree in 1..=3usize {
        let net = build_monomial_1d(&act, degree, gammas[0], false)?;
        println!(
            "degree {degree}: {} neurons, {} parameters",
            net.width(),
            net.param_count()
        );
        let study = convergence_study("shallow-monomial", &act, degree, &gammas, &grid)?;
        print!("{}", ResultTable::from_convergence(&study)?.to_csv());
        println!(
            "worst successive ratio: {:.4} (linear decay gives ~0.5)\n",
            study.max_ratio().unwrap_or(f64::NAN)
        );
    }

    // The same construction over the complex numbers, evaluated explicitly.
    let act_c = Activation::exp(FieldTag::Complex);
    let net = build_monomial_1d(&act_c, 2, 1e-3, false)?;
    let z = [weightsmith::field::Scalar::new(0.6, 0.3)];
    let got = net.eval(&z)?;
    let alpha2 = act_c.series_coefficient(2)?;
    let want = alpha2 * z[0] * z[0];
    println!("complex check at z = 0.6+0.3i:");
    println!("  network        : {got}");
    println!("  alpha_2 * z^2  : {want}");
    println!("  |difference|   : {:.3e}", (got - want).norm());
    Ok(())
}
