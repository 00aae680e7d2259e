//! The rectifier toolbox: exact piecewise-linear computation and quadratic
//! approximation of smooth functions.
//!
//! - resnet_max_affine: a residual net computing max of affine pieces, one
//!   width-1 block per extra piece (max(g,p) = g + relu(p-g));
//! - resnet_dc: a difference of two such maxima in lockstep, which covers
//!   every piecewise-linear function;
//! - log_depth_max: max of k inputs in ceil(log2 k) activation layers;
//! - shallow_from_c2: interpolates a twice-differentiable f on [lo,hi] with
//!   a kink at every node — error falls like 1/T^2 in the segment count T;
//! - mlp_exact_from_shallow_relu: stacks a rectifier shallow net into an MLP
//!   exactly on a box, forwarding values through shifted-relu lanes.
//!
//! Run with: cargo run --example relu_constructions

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weightsmith::activation::Activation;
use weightsmith::field::re;
use weightsmith::relu::{
    log_depth_max, mlp_exact_from_shallow_relu, resnet_dc, resnet_max_affine, shallow_from_c2,
    AffinePiece, C2Function,
};
use weightsmith::shallow::{Neuron, ShallowNet};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // max(x - 1, -x - 1, 0.5 x + 0.2)
    let pieces = vec![
        AffinePiece { w: vec![1.0], b: -1.0 },
        AffinePiece { w: vec![-1.0], b: -1.0 },
        AffinePiece { w: vec![0.5], b: 0.2 },
    ];
    let max_net = resnet_max_affine(&pieces)?;
    println!(
        "max of {} affine pieces: state {}, {} blocks, params {}",
        pieces.len(),
        max_net.state_dim(),
        max_net.blocks().len(),
        max_net.param_count()
    );
    for x in [-2.0, -0.5, 0.0, 1.5] {
        let want = pieces.iter().map(|p| p.eval(&[x])).fold(f64::NEG_INFINITY, f64::max);
        let got = max_net.eval(&[re(x)])?.re;
        println!("  x={x:>4}: network {got:+.12}  oracle {want:+.12}");
    }

    // |x| - max(x - 0.5, -x - 0.5, 0) as a difference of maxima.
    let up = vec![AffinePiece { w: vec![1.0], b: 0.0 }, AffinePiece { w: vec![-1.0], b: 0.0 }];
    let down = vec![
        AffinePiece { w: vec![1.0], b: -0.5 },
        AffinePiece { w: vec![-1.0], b: -0.5 },
        AffinePiece { w: vec![0.0], b: 0.0 },
    ];
    let dc = resnet_dc(&up, &down)?;
    println!("\ndifference-of-maxima net: state {} (= d+2)", dc.state_dim());
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let x = rng.gen_range(-2.0..=2.0);
        let hi = up.iter().map(|p| p.eval(&[x])).fold(f64::NEG_INFINITY, f64::max);
        let lo = down.iter().map(|p| p.eval(&[x])).fold(f64::NEG_INFINITY, f64::max);
        worst = worst.max((dc.eval(&[re(x)])?.re - (hi - lo)).abs());
    }
    println!("max |gap| over 1000 random points: {worst:.2e}");

    // Tournament maximum of 8 inputs in 3 rounds.
    let tournament = log_depth_max(8)?;
    println!(
        "\nmax of 8 inputs: {} activation layers (ceil(log2 8) = 3) plus a linear readout",
        tournament.hidden_widths().len()
    );
    let x: Vec<f64> = (0..8).map(|_| rng.gen_range(-5.0..=5.0)).collect();
    let z: Vec<_> = x.iter().map(|&v| re(v)).collect();
    println!(
        "  inputs {:?}\n  network max {:+.10}",
        x.iter().map(|v| (v * 100.0).round() / 100.0).collect::<Vec<_>>(),
        tournament.eval(&z)?.re
    );

    // Piecewise-linear interpolation of exp on [0,1].
    let target = C2Function::new(f64::exp, f64::exp, f64::exp, 0.0, 1.0)?;
    println!("\ninterpolating exp on [0,1]:");
    println!("{:<10} {:>12}", "segments", "sup error");
    for t in [25usize, 50, 100] {
        let net = shallow_from_c2(&target, t)?;
        let mut worst = 0.0f64;
        for i in 0..=1000 {
            let x = i as f64 / 1000.0;
            worst = worst.max((net.eval(&[re(x)])?.re - x.exp()).abs());
        }
        println!("{t:<10} {worst:>12.4e}");
    }
    println!("doubling the segments halves the error (first-order kink quadrature).");

    // Exact layered form of a rectifier shallow net on [-1,1]^2.
    let mut draw = || re(rng.gen_range(-1.0..=1.0));
    let neurons: Vec<Neuron> =
        (0..4).map(|_| Neuron { a: draw(), w: vec![draw(), draw()], b: draw() }).collect();
    let shallow = ShallowNet::new(
        weightsmith::field::FieldTag::Real,
        2,
        Activation::relu(),
        neurons,
    )?;
    let mlp = mlp_exact_from_shallow_relu(&shallow, &[-1.0, -1.0], &[1.0, 1.0], &[2, 2])?;
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let z = [re(rng.gen_range(-1.0..=1.0)), re(rng.gen_range(-1.0..=1.0))];
        worst = worst.max((mlp.eval(&z)?.re - shallow.eval(&z)?.re).abs());
    }
    println!("\nrectifier shallow -> MLP on the box: max |gap| {worst:.2e} (exact)");
    Ok(())
}
