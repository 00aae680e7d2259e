//! Equispaced polynomial interpolation diverging on a smooth function.
//!
//! Interpolating 1/(1 + 25 x^2) on [-1, 1] at equally spaced nodes gets
//! WORSE as nodes are added: the sup-norm error grows without bound even
//! though the interpolant matches the function exactly at every node. The
//! barycentric form keeps the evaluation itself stable, so what the table
//! shows is the genuine divergence of the scheme, not rounding noise.
//!
//! Run with: cargo run --example runge_phenomenon

use weightsmith::analysis::{lagrange_interpolate, runge_table, runge_witness};
use weightsmith::field::{re, Scalar};
use weightsmith::table::ResultTable;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let table = runge_table(&[5, 7, 9, 11, 13, 15])?;
    println!("sup-norm interpolation error for 1/(1 + 25x^2) at equispaced nodes:");
    print!("{}", ResultTable::from_convergence(&table)?.to_csv());
    println!(
        "errors strictly increasing: {} — more nodes, worse fit.",
        table.errors_strictly_increasing()
    );

    // The interpolant is still an interpolant: it reproduces its nodes to
    // machine accuracy even while oscillating wildly between them.
    let n = 13usize;
    let nodes: Vec<(Scalar, Scalar)> = (0..n)
        .map(|i| {
            let x = -1.0 + 2.0 * i as f64 / (n - 1) as f64;
            (re(x), re(runge_witness(x)))
        })
        .collect();
    let interp = lagrange_interpolate(&nodes)?;
    let mut worst_node = 0.0f64;
    for (x, y) in &nodes {
        worst_node = worst_node.max((interp.eval(*x) - *y).norm());
    }
    println!("\n{n}-node interpolant, max error AT the nodes: {worst_node:.3e}");

    let mut worst_between = 0.0f64;
    let mut arg = 0.0;
    for i in 0..=2000 {
        let x = -1.0 + 2.0 * i as f64 / 2000.0;
        let err = (interp.eval(re(x)) - re(runge_witness(x))).norm();
        if err > worst_between {
            worst_between = err;
            arg = x;
        }
    }
    println!("same interpolant, max error BETWEEN nodes: {worst_between:.3} (near x = {arg:+.3})");
    println!("the damage concentrates at the interval ends, the classic signature.");
    Ok(())
}
