//! Networks whose outputs are harmonic functions, checked by finite
//! differences.
//!
//! When the neuron profile sigma(u, v) is itself harmonic in the plane, a
//! shallow net built from orthonormal two-row projections produces a
//! harmonic function of the input — the Laplacian vanishes identically, not
//! approximately. A non-harmonic profile (u^2) through the same construction
//! fails loudly, which is the control.
//!
//! Run with: cargo run --example harmonic_networks

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weightsmith::field::{re, FieldTag};
use weightsmith::harmonic::{random_harmonic_net, HarmonicNet, HarmonicSigma};
use weightsmith::poly::MPoly;

fn laplacian(net: &HarmonicNet, x: &[f64], h: f64) -> Result<f64, weightsmith::error::Error> {
    let center = net.eval(x)?;
    let mut sum = 0.0;
    for i in 0..x.len() {
        let mut plus = x.to_vec();
        plus[i] += h;
        let mut minus = x.to_vec();
        minus[i] -= h;
        sum += net.eval(&plus)? + net.eval(&minus)? - 2.0 * center;
    }
    Ok(sum / (h * h))
}

fn plane_poly(terms: &[(u32, u32, f64)]) -> Result<MPoly, weightsmith::error::Error> {
    MPoly::from_terms(
        2,
        FieldTag::Real,
        terms.iter().map(|&(i, j, c)| (vec![i, j], re(c))),
    )
}

fn worst_laplacian(
    net: &HarmonicNet,
    seed: u64,
    dim: usize,
    h: f64,
) -> Result<f64, weightsmith::error::Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let x: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        worst = worst.max(laplacian(net, &x, h)?.abs());
    }
    Ok(worst)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let h = 1e-3;
    println!("five networks with the harmonic profile e^u cos v:");
    println!("{:<6} {:<5} {:>22}", "seed", "dim", "max |Laplacian| (FD)");
    for seed in 0..5u64 {
        let dim = 3 + (seed as usize % 3);
        let net = random_harmonic_net(seed, dim, HarmonicSigma::exp_cos())?;
        let worst = worst_laplacian(&net, seed + 100, dim, h)?;
        println!("{seed:<6} {dim:<5} {worst:>22.3e}");
    }

    println!("\nother harmonic profiles work the same way:");
    for (name, poly) in [
        ("u^2 - v^2", plane_poly(&[(2, 0, 1.0), (0, 2, -1.0)])?),
        ("u^3 - 3uv^2", plane_poly(&[(3, 0, 1.0), (1, 2, -3.0)])?),
    ] {
        let net = random_harmonic_net(42, 4, HarmonicSigma::poly(poly)?)?;
        let worst = worst_laplacian(&net, 7, 4, h)?;
        println!("  sigma = {name:<12} max |Laplacian| {worst:.3e}");
    }

    println!("\ncontrol: the profile u^2 is NOT harmonic, and the same weights expose it:");
    let bad_poly = plane_poly(&[(2, 0, 1.0)])?;
    let bad = random_harmonic_net(42, 4, HarmonicSigma::poly_unchecked(bad_poly)?)?;
    let worst = worst_laplacian(&bad, 7, 4, h)?;
    println!("  sigma = u^2          max |Laplacian| {worst:.3e}  (orders of magnitude off zero)");
    Ok(())
}
