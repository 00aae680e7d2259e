//! A shallow network with a polynomial activation IS a polynomial — this
//! example expands one symbolically and confirms the two forms agree
//! everywhere, which is the degree-capped counterpart of series expansion.
//!
//! Run with: cargo run --example polynomial_truncation

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weightsmith::activation::Activation;
use weightsmith::field::{FieldTag, Scalar};
use weightsmith::shallow::{Neuron, ShallowNet};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let field = FieldTag::Complex;
    // sigma(t) = t^3 - 0.5 t + 1
    let act = Activation::polynomial(
        vec![
            Scalar::new(1.0, 0.0),
            Scalar::new(-0.5, 0.0),
            Scalar::new(0.0, 0.0),
            Scalar::new(1.0, 0.0),
        ],
        field,
    )?;

    let mut draw = || Scalar::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
    let neurons: Vec<Neuron> = (0..5)
        .map(|_| Neuron { a: draw(), w: vec![draw(), draw()], b: draw() })
        .collect();
    let net = ShallowNet::new(field, 2, act, neurons)?;

    // Expanding up to the activation degree reproduces the network exactly;
    // a lower cutoff is the Taylor-style truncation.
    let full = net.truncate_to_polynomial(3)?;
    let quadratic = net.truncate_to_polynomial(2)?;
    println!("network with cubic activation, 5 neurons, 2 complex variables");
    println!("full expansion has {} terms", full.terms().count());

    let mut worst_full = 0.0f64;
    let mut worst_quad = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..200 {
        let z: Vec<Scalar> = (0..2)
            .map(|_| Scalar::new(rng.gen_range(-0.9..=0.9), rng.gen_range(-0.9..=0.9)))
            .collect();
        let direct = net.eval(&z)?;
        worst_full = worst_full.max((full.eval(&z)? - direct).norm());
        worst_quad = worst_quad.max((quadratic.eval(&z)? - direct).norm());
    }
    println!("max |network - full expansion|      : {worst_full:.3e}  (exact)");
    println!("max |network - quadratic truncation|: {worst_quad:.3e}  (cubic tail visible)");
    Ok(())
}
