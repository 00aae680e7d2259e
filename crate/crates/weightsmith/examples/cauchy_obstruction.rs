//! Why z^(-k) on an annulus defeats every polynomial approximant.
//!
//! On the circle |z| = rho the moment ∮ z^(k-1) z^(-k) dz equals 2πi for
//! every rho, while ∮ z^(k-1) p(z) dz = 0 for every polynomial p. A sequence
//! of polynomials converging uniformly on the annulus would have to carry
//! its moments along, so the fixed 2π gap rules uniform convergence out.
//! This example measures both sides of the gap with the trapezoid rule,
//! which is spectrally accurate on circles.
//!
//! Run with: cargo run --example cauchy_obstruction

use weightsmith::analysis::{cauchy_obstruction_report, contour_integral, ContourSpec};
use weightsmith::field::{re, FieldTag, Scalar};
use weightsmith::poly::MPoly;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Raw contour integrals first: the target moment hits 2 pi i on the
    // nose, at every admissible k.
    let spec = ContourSpec::unit();
    let two_pi_i = Scalar::new(0.0, std::f64::consts::TAU);
    println!("∮ z^(k-1) z^(-k) dz over the unit circle ({} nodes):", spec.nodes());
    for k in 1..=3usize {
        let integral = contour_integral(|z| z.powi(-(k as i32)), &spec, k)?;
        println!(
            "  k = {k}: {:+.15} {:+.15}i   |value - 2πi| = {:.3e}",
            integral.re,
            integral.im,
            (integral - two_pi_i).norm()
        );
    }

    // The same moment annihilates polynomials: report the full obstruction
    // table on the annulus 1/2 <= |z| <= 2 against low-degree monomials.
    let candidates: Vec<MPoly> = (0..=4u32)
        .map(|m| MPoly::from_terms(1, FieldTag::Complex, [(vec![m], re(1.0))]))
        .collect::<Result<_, _>>()?;
    let report = cauchy_obstruction_report(2, &candidates, 0.5, 2.0)?;
    println!(
        "\nobstruction table at k = {} on the circle |z| = {} ({} nodes):",
        report.k, report.radius, report.nodes
    );
    println!("  {:<10} {:>14}", "integrand", "|moment|");
    println!("  {:<10} {:>14.6e}   <- the target, pinned at 2π", report.target.label, report.target.magnitude);
    for row in &report.candidates {
        println!("  {:<10} {:>14.6e}", row.label, row.magnitude);
    }
    println!(
        "  gap = {:.12} (target magnitude minus the worst polynomial moment)",
        report.gap
    );
    println!(
        "\nno polynomial sequence can close a fixed gap of 2π, so z^(-{}) has no \
         uniform polynomial approximation on the annulus.",
        report.k
    );
    Ok(())
}
