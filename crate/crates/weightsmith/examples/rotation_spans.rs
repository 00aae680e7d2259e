//! Rotations acting on harmonic polynomials: averages, spans, and
//! fundamental systems of zonal functions.
//!
//! - rotation_average symmetrizes a polynomial about an axis (exactly, via
//!   equispaced rotation nodes — the integrand is trigonometric);
//! - rotating a single nonzero harmonic polynomial in three variables spans
//!   the whole degree-j harmonic space, whose dimension 2j+1 is confirmed by
//!   an independent Laplacian-kernel computation;
//! - zonal functions centered at generic sphere points form a basis, which
//!   the Gegenbauer determinant test certifies.
//!
//! Run with: cargo run --example rotation_spans

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weightsmith::field::{re, FieldTag, Scalar};
use weightsmith::harmonic::{
    fundamental_system_det, hp_basis, hp_kernel_dim, rotation_average, rotation_span_rank,
    GegenbauerParams,
};
use weightsmith::poly::MPoly;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Symmetrizing x1^2 - x2^2 about the first axis mixes x2 and x3 evenly:
    // the exact answer is x1^2 - (x2^2 + x3^2)/2.
    let p = MPoly::from_terms(
        3,
        FieldTag::Real,
        [(vec![2, 0, 0], re(1.0)), (vec![0, 2, 0], re(-1.0))],
    )?;
    let about_e1 = rotation_average(&p, &[1.0, 0.0, 0.0], 16)?;
    let about_e3 = rotation_average(&p, &[0.0, 0.0, 1.0], 16)?;
    println!("p          = {p}");
    println!("avg about e1 = {about_e1}");
    println!("avg about e3 = {about_e3}");
    println!("(zero up to rounding: p averages out about the third axis)");

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let z: Vec<Scalar> = (0..3).map(|_| re(rng.gen_range(-1.0..=1.0))).collect();
    println!(
        "spot check at a random point: avg_e1 = {:+.12}, avg_e3 = {:+.2e}",
        about_e1.eval(&z)?.re,
        about_e3.eval(&z)?.norm()
    );

    // One harmonic polynomial, rotated generically, spans its whole degree
    // space. The space dimension comes from a separate exact-integer kernel
    // computation over the Laplacian.
    println!("\n{:<8} {:>12} {:>12}", "degree", "kernel dim", "span rank");
    for j in 1..=4u32 {
        let dim = hp_kernel_dim(3, j)?;
        let basis = hp_basis(3, j)?;
        let rank = rotation_span_rank(&basis[0], 3, j, 3 * dim, 7)?;
        println!("{j:<8} {dim:>12} {rank:>12}");
    }
    println!("(in three variables the degree-j harmonic space has dimension 2j + 1)");

    // Zonal functions at generic points on the sphere form a basis exactly
    // when the Gegenbauer matrix has positive determinant.
    let n = 2usize;
    let count = hp_kernel_dim(3, n as u32)?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let points: Vec<Vec<f64>> = (0..count)
        .map(|_| {
            let v: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter().map(|x| x / norm).collect()
        })
        .collect();
    let lambda = GegenbauerParams::from_dimension(n, 3)?.lambda;
    let system = fundamental_system_det(&points, n, lambda)?;
    println!(
        "\nfundamental system at degree {n}: {count} random sphere points, \
         det = {:+.6e} (count_ok = {})",
        system.det, system.count_ok
    );
    println!("a positive determinant certifies the zonal translates form a basis.");
    Ok(())
}
