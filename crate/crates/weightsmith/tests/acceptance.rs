//! End-to-end acceptance suite: one test per numbered criterion, each
//! printing a single pass line when its assertions hold. Every numeric
//! tolerance is checked against independently computed oracles (direct
//! evaluation, closed-form counts, exact integrals), never against the
//! builders' own output.

use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use weightsmith::activation::Activation;
use weightsmith::analysis::{
    contour_integral, convergence_study, lagrange_interpolate, runge_table, runge_witness,
    ContourSpec,
};
use weightsmith::deep::{
    densenet_from_mlp, densenet_from_shallow, mlp_from_shallow, resnet_from_shallow,
    resnet_poly_square, Mlp,
};
use weightsmith::document::NetworkDocument;
use weightsmith::field::{re, FieldTag, Scalar};
use weightsmith::grid::BoxGrid;
use weightsmith::harmonic::{
    fundamental_system_det, hp_basis, hp_kernel_dim, random_harmonic_net, rotation_about_axis,
    rotation_average, rotation_span_rank, seeded_box_points, verify_network_harmonic,
    GegenbauerParams, HarmonicSigma,
};
use weightsmith::linalg::Mat;
use weightsmith::poly::MPoly;
use weightsmith::relu::{
    log_depth_max, mlp_exact_from_shallow_relu, resnet_dc, resnet_max_affine, shallow_from_c2,
    AffinePiece, C2Function,
};
use weightsmith::shallow::{Neuron, ShallowNet};

// ---------------------------------------------------------------------------
// helpers
// ---------------------------------------------------------------------------

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rand_scalar(r: &mut ChaCha8Rng, field: FieldTag) -> Scalar {
    match field {
        FieldTag::Real => re(r.gen_range(-1.0..=1.0)),
        FieldTag::Complex => Scalar::new(r.gen_range(-1.0..=1.0), r.gen_range(-1.0..=1.0)),
    }
}

fn rand_point(r: &mut ChaCha8Rng, field: FieldTag, dim: usize) -> Vec<Scalar> {
    (0..dim).map(|_| rand_scalar(r, field) * re(0.9)).collect()
}

/// Scale-aware closeness: |a - b| <= tol * max(1, |b|).
fn close(a: Scalar, b: Scalar, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1.0)
}

fn rand_shallow(
    r: &mut ChaCha8Rng,
    field: FieldTag,
    dim: usize,
    n: usize,
    activation: Activation,
) -> ShallowNet {
    let neurons = (0..n)
        .map(|_| Neuron {
            a: rand_scalar(r, field),
            w: (0..dim).map(|_| rand_scalar(r, field)).collect(),
            b: rand_scalar(r, field),
        })
        .collect();
    ShallowNet::new(field, dim, activation, neurons).expect("random shallow net")
}

/// A random partition of n into positive parts.
fn rand_partition(r: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut left = n;
    let mut parts = Vec::new();
    while left > 0 {
        let take = r.gen_range(1..=left.min(3));
        parts.push(take);
        left -= take;
    }
    parts
}

fn both_fields() -> [FieldTag; 2] {
    [FieldTag::Real, FieldTag::Complex]
}

// ---------------------------------------------------------------------------
// criteria
// ---------------------------------------------------------------------------

#[test]
fn criterion_01_monomial_convergence() {
    let grid = BoxGrid::symmetric(FieldTag::Real, 1, 1.0).unwrap();
    let act = Activation::exp(FieldTag::Real);
    let gammas = [1e-2, 5e-3, 2.5e-3];
    for m in 1..=3usize {
        let study = convergence_study("shallow-monomial", &act, m, &gammas, &grid).unwrap();
        let rows = study.rows();
        assert_eq!(rows.len(), 3);
        for row in rows {
            assert!(row.sup_error.is_finite(), "degree {m}: error must be finite");
            if let Some(q) = row.ratio {
                assert!(q <= 0.6, "degree {m}: ratio {q} exceeds 0.6");
            }
        }
        assert!(
            rows[2].sup_error <= 1e-2,
            "degree {m}: error {} at the finest scale exceeds 1e-2",
            rows[2].sup_error
        );
    }
    println!("criterion 01 (monomial builder error halves with the weight scale): PASS");
}

#[test]
fn criterion_02_polynomial_activation_truncation_identity() {
    for field in both_fields() {
        let act = Activation::monomial(3, field);
        let mut r = rng(0x02);
        for net_idx in 0..10 {
            let dim = r.gen_range(1..=3);
            let n = r.gen_range(1..=6);
            let net = rand_shallow(&mut r, field, dim, n, act.clone());
            let poly = net.truncate_to_polynomial(3).unwrap();
            for _ in 0..100 {
                let z = rand_point(&mut r, field, dim);
                let direct = net.eval(&z).unwrap();
                let via_poly = poly.eval(&z).unwrap();
                assert!(
                    close(via_poly, direct, 1e-12),
                    "net {net_idx} over {field:?}: polynomial form differs: {via_poly} vs {direct}"
                );
            }
        }
    }
    println!("criterion 02 (cubic-activation nets equal their degree-3 polynomial form): PASS");
}

#[test]
fn criterion_03_resnet_embedding_exact_with_closed_form_count() {
    let mut r = rng(0x03);
    for case in 0..20 {
        let field = both_fields()[case % 2];
        let dim = r.gen_range(1..=3);
        let n = r.gen_range(1..=8);
        let act = if case % 3 == 0 {
            Activation::sin(field)
        } else {
            Activation::exp(field)
        };
        let s = rand_shallow(&mut r, field, dim, n, act);
        let widths = rand_partition(&mut r, n);
        let deep = resnet_from_shallow(&s, &widths).unwrap();
        assert_eq!(
            deep.param_count(),
            2 * (n + 1) * (dim + 1) + n,
            "case {case}: parameter count must match 2(n+1)(d+1)+n"
        );
        for _ in 0..1000 {
            let z = rand_point(&mut r, field, dim);
            let a = s.eval(&z).unwrap();
            let b = deep.eval(&z).unwrap();
            assert!(close(b, a, 1e-12), "case {case}: {b} vs {a} at {z:?}");
        }
    }
    println!("criterion 03 (residual embedding is exact and its count is 2(n+1)(d+1)+n): PASS");
}

#[test]
fn criterion_04_square_activation_deep_builder_exact() {
    let mut r = rng(0x04);
    for case in 0..20 {
        let field = both_fields()[case % 2];
        let dim = r.gen_range(1..=3);
        let mut p = MPoly::zero(dim, field);
        for _ in 0..r.gen_range(1..=4) {
            // exponents with total degree <= 5
            let mut exps = vec![0u32; dim];
            let mut budget = 5;
            for e in exps.iter_mut() {
                *e = r.gen_range(0..=budget);
                budget -= *e;
            }
            p.add_term(weightsmith::poly::MultiIndex(exps), rand_scalar(&mut r, field))
                .unwrap();
        }
        if p.is_zero() {
            continue;
        }
        let net = resnet_poly_square(&p).unwrap();
        assert_eq!(net.state_dim(), dim + 2, "case {case}: state width must be d+2");
        for block in net.blocks() {
            assert!(block.bias.len() <= 2, "case {case}: a block exceeds width 2");
        }
        for _ in 0..50 {
            let z = rand_point(&mut r, field, dim);
            let want = p.eval(&z).unwrap();
            let got = net.eval(&z).unwrap();
            assert!(close(got, want, 1e-10), "case {case}: {got} vs {want}");
        }
    }
    println!("criterion 04 (square-activation deep builder reproduces polynomials exactly): PASS");
}

#[test]
fn criterion_05_general_activation_deep_builder_second_order() {
    let grid = BoxGrid::symmetric(FieldTag::Real, 1, 1.0).unwrap();
    let act = Activation::exp(FieldTag::Real);
    let study = convergence_study("resnet-poly-general", &act, 2, &[1e-2, 5e-3], &grid).unwrap();
    let ratio = study.max_ratio().expect("two rows give one ratio");
    assert!(ratio <= 0.3, "probe-step halving gave ratio {ratio}, want <= 0.3");
    println!("criterion 05 (general-activation deep builder converges at second order): PASS");
}

#[test]
fn criterion_06_mlp_embedding_ratio_and_identity_exactness() {
    // Error proportional to the lane budget for the canonical 4-neuron source.
    let grid = BoxGrid::symmetric(FieldTag::Real, 2, 1.0).unwrap();
    let act = Activation::exp(FieldTag::Real);
    let study = convergence_study("mlp-embed", &act, 0, &[1e-3, 5e-4], &grid).unwrap();
    let ratio = study.max_ratio().expect("two rows give one ratio");
    assert!(ratio <= 0.6, "lane-budget halving gave ratio {ratio}, want <= 0.6");

    // Identity activation: the embedding must be exact.
    for field in both_fields() {
        let mut r = rng(0x06);
        let s = rand_shallow(&mut r, field, 2, 4, Activation::identity(field));
        let m = mlp_from_shallow(&s, &[2, 2], 1e-3, None).unwrap();
        for _ in 0..200 {
            let z = rand_point(&mut r, field, 2);
            let a = s.eval(&z).unwrap();
            let b = m.eval(&z).unwrap();
            assert!(close(b, a, 1e-12), "{field:?}: identity embed differs: {b} vs {a}");
        }
    }
    println!("criterion 06 (layered embedding halves with the budget; identity is exact): PASS");
}

#[test]
fn criterion_07_densenet_embeddings_exact() {
    let mut r = rng(0x07);
    // From shallow sources.
    for case in 0..10 {
        let field = both_fields()[case % 2];
        let dim = r.gen_range(1..=3);
        let n = r.gen_range(1..=6);
        let s = rand_shallow(&mut r, field, dim, n, Activation::exp(field));
        let dn = densenet_from_shallow(&s).unwrap();
        for _ in 0..100 {
            let z = rand_point(&mut r, field, dim);
            let a = s.eval(&z).unwrap();
            let b = dn.eval(&z).unwrap();
            assert!(close(b, a, 1e-12), "case {case}: {b} vs {a}");
        }
    }
    // From layered sources.
    for case in 0..10 {
        let field = both_fields()[case % 2];
        let dim = r.gen_range(1..=3);
        let mut widths = vec![dim];
        for _ in 0..r.gen_range(1..=2) {
            widths.push(r.gen_range(1..=3));
        }
        widths.push(1);
        let layers = widths
            .windows(2)
            .map(|pair| {
                let rows = (0..pair[1])
                    .map(|_| (0..pair[0]).map(|_| rand_scalar(&mut r, field)).collect())
                    .collect::<Vec<Vec<Scalar>>>();
                let bias = (0..pair[1]).map(|_| rand_scalar(&mut r, field)).collect();
                (Mat::from_rows(rows).unwrap(), bias)
            })
            .collect();
        let m = Mlp::new(field, dim, layers, Activation::sin(field)).unwrap();
        let dn = densenet_from_mlp(&m).unwrap();
        for _ in 0..100 {
            let z = rand_point(&mut r, field, dim);
            let a = m.eval(&z).unwrap();
            let b = dn.eval(&z).unwrap();
            assert!(close(b, a, 1e-12), "layered case {case}: {b} vs {a}");
        }
    }
    println!("criterion 07 (densely connected embeddings are exact for both source kinds): PASS");
}

#[test]
fn criterion_08_rectifier_suite() {
    let mut r = rng(0x08);

    // Max of affine pieces: exact, state width d+1, blocks of width 1.
    for case in 0..5 {
        let dim = r.gen_range(1..=3);
        let pieces: Vec<AffinePiece> = (0..r.gen_range(1..=4))
            .map(|_| AffinePiece {
                w: (0..dim).map(|_| r.gen_range(-1.0..=1.0)).collect(),
                b: r.gen_range(-1.0..=1.0),
            })
            .collect();
        let net = resnet_max_affine(&pieces).unwrap();
        assert_eq!(net.state_dim(), dim + 1, "max-affine state width must be d+1");
        assert!(net.blocks().iter().all(|b| b.bias.len() == 1));
        for _ in 0..1000 {
            let x: Vec<f64> = (0..dim).map(|_| r.gen_range(-2.0..=2.0)).collect();
            let want = pieces.iter().map(|p| p.eval(&x)).fold(f64::NEG_INFINITY, f64::max);
            let z: Vec<Scalar> = x.iter().map(|&v| re(v)).collect();
            let got = net.eval(&z).unwrap().re;
            assert!((got - want).abs() <= 1e-12, "case {case}: {got} vs {want}");
        }
    }

    // Difference of two maxima: exact, state width d+2, blocks of width <= 2.
    for case in 0..5 {
        let dim = r.gen_range(1..=3);
        let gen_pieces = |r: &mut ChaCha8Rng| -> Vec<AffinePiece> {
            (0..r.gen_range(1..=4))
                .map(|_| AffinePiece {
                    w: (0..dim).map(|_| r.gen_range(-1.0..=1.0)).collect(),
                    b: r.gen_range(-1.0..=1.0),
                })
                .collect()
        };
        let up = gen_pieces(&mut r);
        let down = gen_pieces(&mut r);
        let net = resnet_dc(&up, &down).unwrap();
        assert_eq!(net.state_dim(), dim + 2, "difference state width must be d+2");
        assert!(net.blocks().iter().all(|b| b.bias.len() <= 2));
        for _ in 0..1000 {
            let x: Vec<f64> = (0..dim).map(|_| r.gen_range(-2.0..=2.0)).collect();
            let hi = up.iter().map(|p| p.eval(&x)).fold(f64::NEG_INFINITY, f64::max);
            let lo = down.iter().map(|p| p.eval(&x)).fold(f64::NEG_INFINITY, f64::max);
            let z: Vec<Scalar> = x.iter().map(|&v| re(v)).collect();
            let got = net.eval(&z).unwrap().re;
            assert!((got - (hi - lo)).abs() <= 1e-12, "case {case}: {got} vs {}", hi - lo);
        }
    }

    // Logarithmic-depth maximum of k inputs.
    for k in [2usize, 3, 5, 8] {
        let net = log_depth_max(k).unwrap();
        for _ in 0..1000 {
            let x: Vec<f64> = (0..k).map(|_| r.gen_range(-2.0..=2.0)).collect();
            let want = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let z: Vec<Scalar> = x.iter().map(|&v| re(v)).collect();
            let got = net.eval(&z).unwrap().re;
            assert!((got - want).abs() <= 1e-12, "k={k}: {got} vs {want}");
        }
    }

    // Exact layered re-expression of a rectifier shallow net on a box.
    for case in 0..5 {
        let dim = r.gen_range(1..=2);
        let n = r.gen_range(2..=6);
        let s = rand_shallow(&mut r, FieldTag::Real, dim, n, Activation::relu());
        let lo = vec![-1.0; dim];
        let hi = vec![1.0; dim];
        let widths = rand_partition(&mut r, n);
        let m = mlp_exact_from_shallow_relu(&s, &lo, &hi, &widths).unwrap();
        for _ in 0..1000 {
            let z: Vec<Scalar> = (0..dim).map(|_| re(r.gen_range(-1.0..=1.0))).collect();
            let a = s.eval(&z).unwrap().re;
            let b = m.eval(&z).unwrap().re;
            assert!((b - a).abs() <= 1e-12, "case {case}: {b} vs {a}");
        }
    }

    // Piecewise interpolation of x^2 on [0,1]: quadratic error decay.
    let square = C2Function::new(|x| x * x, |x| 2.0 * x, |_| 2.0, 0.0, 1.0).unwrap();
    let mut errors = Vec::new();
    for t in [25usize, 50, 100] {
        let net = shallow_from_c2(&square, t).unwrap();
        let mut worst = 0.0f64;
        for i in 0..=1000 {
            let x = i as f64 / 1000.0;
            let got = net.eval(&[re(x)]).unwrap().re;
            worst = worst.max((got - x * x).abs());
        }
        errors.push(worst);
    }
    for pair in errors.windows(2) {
        let ratio = pair[1] / pair[0];
        assert!(ratio <= 0.6, "segment doubling gave error ratio {ratio}, want <= 0.6");
    }
    println!("criterion 08 (rectifier constructions match their oracles exactly): PASS");
}

#[test]
fn criterion_09_harmonic_networks_fd_laplacian() {
    // Twenty seeded networks with the plane-harmonic profile stay below the
    // bound; the deliberately non-harmonic profile is far above it.
    for seed in 0..20u64 {
        let dim = 3 + (seed as usize % 3);
        let net = random_harmonic_net(seed, dim, HarmonicSigma::exp_cos()).unwrap();
        let points = seeded_box_points(seed.wrapping_add(1000), 100, dim, 1.0);
        let worst = verify_network_harmonic(&net, &points, 1e-3).unwrap();
        assert!(
            worst <= 1e-5,
            "seed {seed}, dim {dim}: |Laplacian| {worst} exceeds 1e-5"
        );
    }
    let u2 = {
        let mut p = MPoly::zero(1, FieldTag::Real);
        p.add_term(weightsmith::poly::MultiIndex(vec![2]), re(1.0)).unwrap();
        HarmonicSigma::poly_unchecked(p).unwrap()
    };
    for seed in 0..5u64 {
        let net = random_harmonic_net(seed, 3, u2.clone()).unwrap();
        let points = seeded_box_points(seed.wrapping_add(1000), 100, 3, 1.0);
        let worst = verify_network_harmonic(&net, &points, 1e-3).unwrap();
        assert!(worst > 1e-1, "seed {seed}: control |Laplacian| {worst} not above 1e-1");
    }
    println!("criterion 09 (harmonic networks pass the discrete Laplacian check): PASS");
}

#[test]
fn criterion_10_rotation_machinery() {
    // Average of x1^2 - x2^2 about the first axis is (2x1^2 - x2^2 - x3^2)/2.
    let p = MPoly::from_terms(
        3,
        FieldTag::Real,
        [(vec![2, 0, 0], re(1.0)), (vec![0, 2, 0], re(-1.0))],
    )
    .unwrap();
    let e1 = [1.0, 0.0, 0.0];
    let e3 = [0.0, 0.0, 1.0];
    let avg1 = rotation_average(&p, &e1, 16).unwrap();
    let expected = MPoly::from_terms(
        3,
        FieldTag::Real,
        [(vec![2, 0, 0], re(1.0)), (vec![0, 2, 0], re(-0.5)), (vec![0, 0, 2], re(-0.5))],
    )
    .unwrap();
    let avg3 = rotation_average(&p, &e3, 16).unwrap();
    let mut r = rng(0x10);
    for _ in 0..50 {
        let z: Vec<Scalar> = (0..3).map(|_| re(r.gen_range(-1.0..=1.0))).collect();
        let got = avg1.eval(&z).unwrap();
        let want = expected.eval(&z).unwrap();
        assert!((got - want).norm() <= 1e-10, "axis-1 average: {got} vs {want}");
        assert!(avg3.eval(&z).unwrap().norm() <= 1e-12, "axis-3 average must vanish");
    }

    // Generic rotations of one harmonic polynomial span the whole degree
    // space: rank 2j+1.
    for j in 1..=4u32 {
        let basis = hp_basis(3, j).unwrap();
        let rank = rotation_span_rank(&basis[0], 3, j, 3 * (2 * j as usize + 1), 7).unwrap();
        assert_eq!(rank, 2 * j as usize + 1, "degree {j}: rotated span rank");
    }

    // Dimension of the harmonic space in three variables, via the
    // independent kernel oracle.
    for j in 0..=6u32 {
        assert_eq!(hp_kernel_dim(3, j).unwrap(), 2 * j as usize + 1, "kernel dim at degree {j}");
    }

    // A seeded generic point family yields an invertible (positive-det)
    // fundamental system.
    let mut r = rng(0x10F);
    let n = 2usize;
    let count = hp_kernel_dim(3, n as u32).unwrap();
    let points: Vec<Vec<f64>> = (0..count)
        .map(|_| {
            let v: Vec<f64> = (0..3).map(|_| r.gen_range(-1.0..=1.0)).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter().map(|x| x / norm).collect()
        })
        .collect();
    let lambda = GegenbauerParams::from_dimension(n, 3).unwrap().lambda;
    let system = fundamental_system_det(&points, n, lambda).unwrap();
    assert!(system.count_ok);
    assert!(system.det > 0.0, "fundamental determinant {} must be positive", system.det);

    // Sanity: rotations used above are genuine rotations (length-preserving).
    let rot = rotation_about_axis(&e1, 0.7).unwrap();
    let x = [0.3, -0.4, 0.5];
    let y: Vec<f64> = rot
        .iter()
        .map(|row| row.iter().zip(&x).map(|(a, b)| a * b).sum())
        .collect();
    let nx: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let ny: f64 = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    assert!((nx - ny).abs() <= 1e-12);

    println!("criterion 10 (rotation averages, spans, dimensions, fundamental system): PASS");
}

#[test]
fn criterion_11_contour_moment_gap() {
    let spec = ContourSpec::unit();
    assert_eq!(spec.nodes(), 256);
    let two_pi_i = Scalar::new(0.0, std::f64::consts::TAU);
    for k in 1..=3u32 {
        let witness = |z: Scalar| z.powi(-(k as i32));
        let got = contour_integral(witness, &spec, k as usize).unwrap();
        assert!(
            (got - two_pi_i).norm() <= 1e-10,
            "k={k}: witness integral {got} not within 1e-10 of 2*pi*i"
        );
        for m in 0..=4u32 {
            let moment =
                contour_integral(|z: Scalar| z.powi(m as i32), &spec, k as usize).unwrap();
            assert!(
                moment.norm() <= 1e-12,
                "k={k}, degree {m}: polynomial moment {moment} not below 1e-12"
            );
        }
    }
    println!("criterion 11 (residue witness vs vanishing polynomial moments): PASS");
}

#[test]
fn criterion_12_equidistant_interpolation_table() {
    let table = runge_table(&[5, 9, 13]).unwrap();
    assert!(
        table.errors_strictly_increasing(),
        "interpolation errors must grow with the node count"
    );

    // The interpolant reproduces its own node data.
    for n in [5usize, 9, 13] {
        let nodes: Vec<(Scalar, Scalar)> = (0..n)
            .map(|i| {
                let x = -1.0 + 2.0 * i as f64 / (n - 1) as f64;
                (re(x), re(runge_witness(x)))
            })
            .collect();
        let interp = lagrange_interpolate(&nodes).unwrap();
        for (x, v) in &nodes {
            let got = interp.eval(*x);
            assert!(
                (got - v).norm() <= 1e-10 * v.norm().max(1.0),
                "N={n}: node value {got} vs {v}"
            );
        }
        // The expanded polynomial form agrees at the nodes too (skip the
        // largest case, whose monomial form is badly conditioned).
        if n <= 9 {
            let poly = interp.to_mpoly().unwrap();
            for (x, v) in &nodes {
                let got = poly.eval(&[*x]).unwrap();
                assert!(
                    (got - v).norm() <= 1e-10 * v.norm().max(1.0),
                    "N={n}: polynomial node value {got} vs {v}"
                );
            }
        }
    }
    println!("criterion 12 (equidistant-node errors grow; interpolant hits its data): PASS");
}

// ---------------------------------------------------------------------------
// criterion 13: serialization round-trips and the binary's exit codes
// ---------------------------------------------------------------------------

fn activation_menu(field: FieldTag, pick: usize) -> Activation {
    match (field, pick % 6) {
        (_, 0) => Activation::exp(field),
        (_, 1) => Activation::sin(field),
        (_, 2) => Activation::cosh(field),
        (_, 3) => Activation::polynomial(vec![re(0.5), re(0.0), re(2.0)], field).unwrap(),
        (FieldTag::Real, 4) => Activation::relu(),
        (FieldTag::Real, 5) => Activation::leaky_relu(0.1).unwrap(),
        (_, _) => Activation::cos(field),
    }
}

fn assert_roundtrip(doc: &NetworkDocument, what: &str) {
    let first = doc.to_json_string().unwrap();
    let parsed = NetworkDocument::parse_str(&first).unwrap();
    let second = parsed.to_json_string().unwrap();
    assert_eq!(first, second, "{what}: serialized form must be byte-stable");
    if doc.dim() <= 8 {
        let z: Vec<Scalar> = vec![re(0.25); doc.dim()];
        let a = doc.eval(&z).unwrap();
        let b = parsed.eval(&z).unwrap();
        assert_eq!(a.re.to_bits(), b.re.to_bits(), "{what}: value must round-trip bit-exactly");
        assert_eq!(a.im.to_bits(), b.im.to_bits(), "{what}: value must round-trip bit-exactly");
    }
}

#[test]
fn criterion_13a_roundtrip_fifty_networks_of_each_kind() {
    let mut r = rng(0x13);
    for case in 0..50usize {
        let field = both_fields()[case % 2];
        let dim = r.gen_range(1..=3);
        let n = r.gen_range(1..=6);
        let act = activation_menu(field, case);
        let s = rand_shallow(&mut r, field, dim, n, act);
        assert_roundtrip(&NetworkDocument::Shallow(s.clone()), "shallow");

        let widths = rand_partition(&mut r, n);
        let deep = resnet_from_shallow(&s, &widths).unwrap();
        assert_roundtrip(&NetworkDocument::Resnet(deep), "resnet");

        let dn = densenet_from_shallow(&s).unwrap();
        assert_roundtrip(&NetworkDocument::Densenet(dn), "densenet");

        // A small random layered net, independent of the shallow one.
        let mut widths = vec![dim, r.gen_range(1..=3), 1];
        if case % 3 == 0 {
            widths.insert(2, r.gen_range(1..=2));
        }
        let layers = widths
            .windows(2)
            .map(|pair| {
                let rows = (0..pair[1])
                    .map(|_| (0..pair[0]).map(|_| rand_scalar(&mut r, field)).collect())
                    .collect::<Vec<Vec<Scalar>>>();
                let bias = (0..pair[1]).map(|_| rand_scalar(&mut r, field)).collect();
                (Mat::from_rows(rows).unwrap(), bias)
            })
            .collect();
        let m = Mlp::new(field, dim, layers, activation_menu(field, case + 1)).unwrap();
        assert_roundtrip(&NetworkDocument::Mlp(m), "mlp");

        let sigma = if case % 2 == 0 {
            HarmonicSigma::exp_cos()
        } else {
            let p = MPoly::from_terms(
                2,
                FieldTag::Real,
                [(vec![2, 0], re(1.0)), (vec![0, 2], re(-1.0))],
            )
            .unwrap();
            HarmonicSigma::poly(p).unwrap()
        };
        let h = random_harmonic_net(case as u64, 3 + case % 3, sigma).unwrap();
        assert_roundtrip(&NetworkDocument::Harmonic(h), "harmonic");
    }
    println!("criterion 13a (fifty networks of each kind round-trip bit-exactly): PASS");
}

struct CliCase<'a> {
    args: Vec<&'a str>,
    want: i32,
    label: &'a str,
}

fn run_cli(dir: &std::path::Path, args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_weightsmith"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn criterion_13b_exit_code_contract() {
    let dir = std::env::temp_dir().join(format!("weightsmith-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();

    // Fixtures used by the cases below.
    std::fs::write(dir.join("pts.csv"), "0.1,0.0\n-0.2,0.3\n").unwrap();
    std::fs::write(dir.join("bad_pts.csv"), "0.1,oops\n").unwrap();
    std::fs::write(dir.join("broken.json"), "{ not json").unwrap();

    // Seed documents.
    let (code, _, _) = run_cli(
        &dir,
        &[
            "build",
            "shallow-monomial",
            "--field",
            "C",
            "--activation",
            "exp",
            "--degree",
            "2",
            "--gamma",
            "1e-3",
            "-o",
            "net.json",
        ],
    );
    assert_eq!(code, 0, "fixture build must succeed");
    let (code, _, _) = run_cli(
        &dir,
        &["build", "harmonic-net", "--sigma", "u2", "--hdim", "3", "--seed", "5", "-o", "bad_h.json"],
    );
    assert_eq!(code, 0, "control build must succeed");

    let cases = vec![
        // build: success / usage / construction precondition
        CliCase {
            args: vec![
                "build", "shallow-monomial", "--activation", "exp", "--degree", "1", "--gamma",
                "1e-2", "-o", "b1.json",
            ],
            want: 0,
            label: "build success",
        },
        CliCase {
            args: vec!["build", "shallow-monomial", "--gamma", "1e-2"],
            want: 2,
            label: "build usage error (missing --degree)",
        },
        CliCase {
            args: vec![
                "build", "shallow-monomial", "--activation", "relu", "--degree", "2", "--gamma",
                "1e-2",
            ],
            want: 3,
            label: "build precondition (rectifier has no power series)",
        },
        // embed: success / verification failure / usage
        CliCase {
            args: vec!["embed", "resnet", "-i", "net.json", "--widths", "2,1", "-o", "e1.json"],
            want: 0,
            label: "embed success",
        },
        CliCase {
            args: vec![
                "embed", "mlp", "-i", "net.json", "--widths", "2,1", "--epsilon", "1e-2",
                "--max-error", "1e-15", "-o", "e2.json",
            ],
            want: 1,
            label: "embed verification failure (self-check bound)",
        },
        CliCase {
            args: vec!["embed", "resnet", "-i", "net.json", "-o", "e3.json"],
            want: 2,
            label: "embed usage error (missing --widths)",
        },
        CliCase {
            args: vec!["embed", "resnet", "-i", "net.json", "--widths", "2,2", "-o", "e4.json"],
            want: 3,
            label: "embed precondition (widths do not sum to the neuron count)",
        },
        // eval: success / parse error / usage
        CliCase {
            args: vec!["eval", "-i", "net.json", "--points", "pts.csv", "-o", "vals.csv"],
            want: 0,
            label: "eval success",
        },
        CliCase {
            args: vec!["eval", "-i", "net.json", "--points", "bad_pts.csv"],
            want: 2,
            label: "eval parse error (bad number)",
        },
        CliCase {
            args: vec!["eval", "--points", "pts.csv"],
            want: 2,
            label: "eval usage error (missing -i)",
        },
        // verify: success / verification failure / usage
        CliCase {
            args: vec!["verify", "runge", "--nodes", "5,9,13", "-o", "v1.csv"],
            want: 0,
            label: "verify success",
        },
        CliCase {
            args: vec![
                "verify", "harmonic", "-i", "bad_h.json", "--points", "50", "--seed", "7", "-o",
                "v2.csv",
            ],
            want: 1,
            label: "verify verification failure (non-harmonic control)",
        },
        CliCase {
            args: vec!["verify", "rotation", "--degree", "2"],
            want: 2,
            label: "verify usage error (missing --seed)",
        },
        // report: success / parse error
        CliCase {
            args: vec!["report", "-i", "net.json"],
            want: 0,
            label: "report success",
        },
        CliCase {
            args: vec!["report", "-i", "broken.json"],
            want: 2,
            label: "report parse error",
        },
        CliCase {
            args: vec!["report"],
            want: 2,
            label: "report usage error (missing -i)",
        },
    ];
    for case in &cases {
        let (code, stdout, stderr) = run_cli(&dir, &case.args);
        assert_eq!(
            code, case.want,
            "{}: exit {code}, want {}\nstdout:\n{stdout}\nstderr:\n{stderr}",
            case.label, case.want
        );
    }

    // The verification-failure path must still write its table.
    let table = std::fs::read_to_string(dir.join("v2.csv")).unwrap();
    assert!(table.starts_with("point_count,step,max_abs_laplacian\r\n"));

    // Determinism: same argv + seed twice gives byte-identical files.
    for name in ["d1.json", "d2.json"] {
        let (code, _, _) = run_cli(
            &dir,
            &["build", "harmonic-net", "--sigma", "expcos", "--hdim", "4", "--seed", "9", "-o", name],
        );
        assert_eq!(code, 0);
    }
    let a = std::fs::read(dir.join("d1.json")).unwrap();
    let b = std::fs::read(dir.join("d2.json")).unwrap();
    assert_eq!(a, b, "seeded builds must be byte-identical");

    let _ = std::fs::remove_dir_all(&dir);
    println!("criterion 13b (exit codes: success, verification failure, usage, precondition): PASS");
}
