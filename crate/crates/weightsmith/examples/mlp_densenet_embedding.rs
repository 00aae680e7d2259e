//! Re-expresses shallow networks in two stacked architectures:
//!
//! - a fully connected network (MLP), where hidden layers must forward both
//!   the input and the partial sums through approximate identity lanes built
//!   from difference quotients of the activation — accurate to a chosen
//!   budget eps, with error falling linearly in eps;
//! - a densely connected network (DenseNet), where every layer sees all
//!   previous states, so forwarding is free and the embedding is exact.
//!
//! Run with: cargo run --example mlp_densenet_embedding

use weightsmith::activation::Activation;
use weightsmith::analysis::canonical_embedding_source;
use weightsmith::deep::{densenet_from_mlp, densenet_from_shallow, mlp_from_shallow};
use weightsmith::field::{re, FieldTag};
use weightsmith::grid::BoxGrid;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let field = FieldTag::Real;
    let act = Activation::exp(field);
    let shallow = canonical_embedding_source(&act, 2)?;
    let grid = BoxGrid::symmetric_with_samples(field, 2, 1.0, 33)?;

    println!("source: shallow, {} neurons, {} params", shallow.width(), shallow.param_count());
    println!("\nMLP with hidden widths (2,2), forwarding through identity lanes:");
    println!("{:<10} {:>14}", "eps", "sup error");
    for eps in [1e-3, 5e-4, 2.5e-4] {
        let mlp = mlp_from_shallow(&shallow, &[2, 2], eps, None)?;
        let mut worst = 0.0f64;
        for z in grid.points() {
            worst = worst.max((mlp.eval(&z)? - shallow.eval(&z)?).norm());
        }
        println!("{eps:<10} {worst:>14.6e}");
    }

    let dense = densenet_from_shallow(&shallow)?;
    let mut worst = 0.0f64;
    for z in grid.points() {
        worst = worst.max((dense.eval(&z)? - shallow.eval(&z)?).norm());
    }
    println!("\nDenseNet from the same source: {} layers, max |gap| {worst:.2e} (exact)", dense.layers().len());

    // DenseNets also absorb MLPs exactly, layer for layer.
    let mlp = mlp_from_shallow(&shallow, &[2, 2], 1e-3, None)?;
    let dense2 = densenet_from_mlp(&mlp)?;
    let z = [re(0.3), re(-0.6)];
    println!(
        "DenseNet from the MLP at one point: {:+.15e} vs {:+.15e}",
        dense2.eval(&z)?.re,
        mlp.eval(&z)?.re
    );
    Ok(())
}
