//! Rectifier-specific constructions, all over the reals: quadrature-style
//! shallow approximations of twice differentiable functions, exact residual
//! networks for max-affine and difference-of-convex functions, a logarithmic
//! depth tournament for the maximum of many inputs, and an exact deep
//! embedding of shallow rectifier networks that is valid on a box.

use crate::activation::Activation;
use crate::deep::{Mlp, ResBlock, ResNet};
use crate::error::{Error, Result};
use crate::field::{re, FieldTag, Scalar, ZERO};
use crate::linalg::Mat;
use crate::shallow::{Neuron, ShallowNet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// One affine piece `x -> <w, x> + b` of a piecewise-affine function.
#[derive(Debug, Clone, PartialEq)]
pub struct AffinePiece {
    pub w: Vec<f64>,
    pub b: f64,
}

impl AffinePiece {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.w.iter().zip(x).map(|(wi, xi)| wi * xi).sum::<f64>() + self.b
    }
}

/// A twice differentiable function on an interval, described by closures for
/// the function and its first two derivatives.
pub struct C2Function {
    pub f: Box<dyn Fn(f64) -> f64>,
    pub df: Box<dyn Fn(f64) -> f64>,
    pub d2f: Box<dyn Fn(f64) -> f64>,
    pub lo: f64,
    pub hi: f64,
}

impl C2Function {
    pub fn new(
        f: impl Fn(f64) -> f64 + 'static,
        df: impl Fn(f64) -> f64 + 'static,
        d2f: impl Fn(f64) -> f64 + 'static,
        lo: f64,
        hi: f64,
    ) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::precondition(format!("need a finite interval, got [{lo}, {hi}]")));
        }
        Ok(C2Function { f: Box::new(f), df: Box::new(df), d2f: Box::new(d2f), lo, hi })
    }
}

/// Shallow rectifier approximation of a twice differentiable function on its
/// interval, with `nodes + 2` neurons: the kink integral representation
/// `f(x) = f(a) + f'(a)(x - a) + int_a^b f''(t) relu(x - t) dt`
/// discretized by the left-endpoint rule on `nodes` equal subintervals. The
/// error decays like 1/nodes in the supremum norm.
pub fn shallow_from_c2(spec: &C2Function, nodes: usize) -> Result<ShallowNet> {
    if nodes == 0 {
        return Err(Error::precondition("need at least one quadrature node"));
    }
    let a = spec.lo;
    let step = (spec.hi - spec.lo) / nodes as f64;
    let mut neurons = Vec::with_capacity(nodes + 2);
    // relu(0 * x + 1) = 1 carries the constant term
    neurons.push(Neuron { a: re((spec.f)(a)), w: vec![ZERO], b: re(1.0) });
    // relu(x - a) = x - a on the interval carries the linear term
    neurons.push(Neuron { a: re((spec.df)(a)), w: vec![re(1.0)], b: re(-a) });
    for j in 0..nodes {
        let t = a + j as f64 * step;
        neurons.push(Neuron { a: re((spec.d2f)(t) * step), w: vec![re(1.0)], b: re(-t) });
    }
    ShallowNet::new(FieldTag::Real, 1, Activation::relu(), neurons)
}

/// Exact residual network for `max_l (<w_l, x> + b_l)`: the state holds the
/// input and a running maximum seeded with the first piece, and each later
/// piece contributes one width-1 block through `max(g, p) = g + relu(p - g)`.
pub fn resnet_max_affine(pieces: &[AffinePiece]) -> Result<ResNet> {
    let first = pieces
        .first()
        .ok_or_else(|| Error::precondition("need at least one affine piece"))?;
    let d = first.w.len();
    if d == 0 || pieces.iter().any(|p| p.w.len() != d) {
        return Err(Error::precondition("pieces must share a nonzero input dimension"));
    }
    let d0 = d + 1;
    let mut entry = Mat::zeros(d0, d);
    let mut entry_bias = vec![ZERO; d0];
    for (j, &wj) in first.w.iter().enumerate() {
        entry[(0, j)] = re(wj);
    }
    entry_bias[0] = re(first.b);
    for i in 0..d {
        entry[(1 + i, i)] = re(1.0);
    }
    let mut blocks = Vec::with_capacity(pieces.len().saturating_sub(1));
    for piece in &pieces[1..] {
        let mut inner = Mat::zeros(1, d0);
        inner[(0, 0)] = re(-1.0);
        for (j, &wj) in piece.w.iter().enumerate() {
            inner[(0, 1 + j)] = re(wj);
        }
        let mut outer = Mat::zeros(d0, 1);
        outer[(0, 0)] = re(1.0);
        blocks.push(ResBlock { outer, inner, bias: vec![re(piece.b)] });
    }
    let mut exit = vec![ZERO; d0];
    exit[0] = re(1.0);
    ResNet::new(FieldTag::Real, d, entry, entry_bias, blocks, exit, Activation::relu())
}

/// Exact residual network for a difference of two max-affine functions,
/// `max_l p_l(x) - max_l q_l(x)`: two running maxima share the state and are
/// advanced in lockstep by blocks of width at most 2; the exit row subtracts.
pub fn resnet_dc(up: &[AffinePiece], down: &[AffinePiece]) -> Result<ResNet> {
    let (first_up, first_down) = match (up.first(), down.first()) {
        (Some(u), Some(v)) => (u, v),
        _ => return Err(Error::precondition("both piece lists must be nonempty")),
    };
    let d = first_up.w.len();
    if d == 0 || up.iter().chain(down).any(|p| p.w.len() != d) {
        return Err(Error::precondition("pieces must share a nonzero input dimension"));
    }
    let d0 = d + 2;
    let mut entry = Mat::zeros(d0, d);
    let mut entry_bias = vec![ZERO; d0];
    for (j, &wj) in first_up.w.iter().enumerate() {
        entry[(0, j)] = re(wj);
    }
    entry_bias[0] = re(first_up.b);
    for (j, &wj) in first_down.w.iter().enumerate() {
        entry[(1, j)] = re(wj);
    }
    entry_bias[1] = re(first_down.b);
    for i in 0..d {
        entry[(2 + i, i)] = re(1.0);
    }
    let rounds = (up.len() - 1).max(down.len() - 1);
    let mut blocks = Vec::with_capacity(rounds);
    for k in 1..=rounds {
        let mut rows: Vec<(usize, &AffinePiece)> = Vec::with_capacity(2);
        if let Some(p) = up.get(k) {
            rows.push((0, p));
        }
        if let Some(q) = down.get(k) {
            rows.push((1, q));
        }
        let width = rows.len();
        let mut inner = Mat::zeros(width, d0);
        let mut outer = Mat::zeros(d0, width);
        let mut bias = Vec::with_capacity(width);
        for (r, (lane, piece)) in rows.into_iter().enumerate() {
            inner[(r, lane)] = re(-1.0);
            for (j, &wj) in piece.w.iter().enumerate() {
                inner[(r, 2 + j)] = re(wj);
            }
            bias.push(re(piece.b));
            outer[(lane, r)] = re(1.0);
        }
        blocks.push(ResBlock { outer, inner, bias });
    }
    let mut exit = vec![ZERO; d0];
    exit[0] = re(1.0);
    exit[1] = re(-1.0);
    ResNet::new(FieldTag::Real, d, entry, entry_bias, blocks, exit, Activation::relu())
}

/// Splits a function into a difference of two convex parts by adding and
/// subtracting `lambda/2 * |x|^2`: returns closures for `g + lambda/2 |x|^2`
/// and `lambda/2 |x|^2`. Both are convex whenever lambda dominates the most
/// negative curvature of g; see [`sampled_min_curvature`] for a way to probe
/// that numerically.
pub fn dc_decompose<F>(
    g: F,
    lambda: f64,
) -> Result<(impl Fn(&[f64]) -> f64, impl Fn(&[f64]) -> f64)>
where
    F: Fn(&[f64]) -> f64,
{
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::precondition(format!(
            "curvature shift lambda must be positive, got {lambda}"
        )));
    }
    let bowl = move |x: &[f64]| 0.5 * lambda * x.iter().map(|v| v * v).sum::<f64>();
    Ok((move |x: &[f64]| g(x) + bowl(x), bowl))
}

/// Samples second difference quotients of f along random unit directions at
/// random points of the box and returns the smallest one found — a numerical
/// probe (not a proof) for the curvature shift that [`dc_decompose`] needs.
pub fn sampled_min_curvature<F>(
    f: F,
    lo: &[f64],
    hi: &[f64],
    samples: usize,
    h: f64,
    seed: u64,
) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let d = lo.len();
    if d == 0 || hi.len() != d {
        return Err(Error::DimMismatch { expected: d.max(1), found: hi.len() });
    }
    if lo.iter().zip(hi).any(|(a, b)| !(a.is_finite() && b.is_finite() && a < b)) {
        return Err(Error::precondition("box bounds must be finite with lo < hi"));
    }
    if samples == 0 || !(h.is_finite() && h > 0.0) {
        return Err(Error::precondition("need samples >= 1 and a positive probe step"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_curv = f64::INFINITY;
    for _ in 0..samples {
        let x: Vec<f64> =
            lo.iter().zip(hi).map(|(&a, &b)| rng.gen_range(a..b)).collect();
        let mut u: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = u.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < 1e-9 {
            u = vec![0.0; d];
            u[0] = 1.0;
        } else {
            for v in &mut u {
                *v /= norm;
            }
        }
        let shift = |s: f64| -> Vec<f64> {
            x.iter().zip(&u).map(|(xi, ui)| xi + s * ui).collect()
        };
        let curv = (f(&shift(h)) - 2.0 * f(&x) + f(&shift(-h))) / (h * h);
        if !curv.is_finite() {
            return Err(Error::NonFinite("curvature probe"));
        }
        min_curv = min_curv.min(curv);
    }
    Ok(min_curv)
}

/// Rectifier network computing the maximum of its k inputs with ceil(log2 k)
/// activation layers: a pairwise tournament where each round halves the
/// candidate count through `max(a, b) = a + relu(b - a)` and
/// `a = relu(a) - relu(-a)`, with the round's recombination folded into the
/// next round's pre-activation matrix.
pub fn log_depth_max(k: usize) -> Result<Mlp> {
    if k == 0 {
        return Err(Error::precondition("need at least one input"));
    }
    let relu = Activation::relu();
    if k == 1 {
        return Mlp::new(FieldTag::Real, 1, vec![(Mat::identity(1), vec![ZERO])], relu);
    }
    let mut layers: Vec<(Mat, Vec<Scalar>)> = Vec::new();
    let mut combine: Option<Mat> = None;
    let mut count = k;
    while count > 1 {
        let pairs = count / 2;
        let odd = count % 2;
        let width = 3 * pairs + 2 * odd;
        let mut pre = Mat::zeros(width, count);
        let mut comb = Mat::zeros(pairs + odd, width);
        for i in 0..pairs {
            // neurons relu(b - a), relu(a), relu(-a); max = n0 + n1 - n2
            pre[(3 * i, 2 * i)] = re(-1.0);
            pre[(3 * i, 2 * i + 1)] = re(1.0);
            pre[(3 * i + 1, 2 * i)] = re(1.0);
            pre[(3 * i + 2, 2 * i)] = re(-1.0);
            comb[(i, 3 * i)] = re(1.0);
            comb[(i, 3 * i + 1)] = re(1.0);
            comb[(i, 3 * i + 2)] = re(-1.0);
        }
        if odd == 1 {
            // the bye survives as relu(y) - relu(-y)
            pre[(width - 2, count - 1)] = re(1.0);
            pre[(width - 1, count - 1)] = re(-1.0);
            comb[(pairs, width - 2)] = re(1.0);
            comb[(pairs, width - 1)] = re(-1.0);
        }
        let a = match &combine {
            None => pre,
            Some(prev) => pre.matmul(prev)?,
        };
        layers.push((a, vec![ZERO; width]));
        combine = Some(comb);
        count = pairs + odd;
    }
    let final_a = combine.expect("k > 1 produces at least one round");
    layers.push((final_a, vec![ZERO]));
    Mlp::new(FieldTag::Real, k, layers, relu)
}

/// Rebuilds a shallow rectifier network as a deep fully connected rectifier
/// network, exactly — but only on the given box. Positivity makes the relu
/// an identity on every maintenance lane: the inputs ride along shifted by
/// `1 - lo_i >= 1`, and the running output sum rides along split into its
/// positive and negative parts. Hidden layer ell holds `2 + widths[ell] + d`
/// neurons.
pub fn mlp_exact_from_shallow_relu(
    s: &ShallowNet,
    lo: &[f64],
    hi: &[f64],
    widths: &[usize],
) -> Result<Mlp> {
    if !s.activation().is_rectifier() {
        return Err(Error::precondition(
            "this embedding relies on relu(t) = t for t >= 0; use the lane embedding for smooth activations",
        ));
    }
    if !matches!(s.activation().kind(), crate::activation::ActivationKind::Relu) {
        return Err(Error::precondition(
            "leaky rectifiers can emit negative neuron outputs, which breaks the positive-lane bookkeeping",
        ));
    }
    let d = s.dim();
    if lo.len() != d || hi.len() != d {
        return Err(Error::DimMismatch { expected: d, found: lo.len().max(hi.len()) });
    }
    if lo.iter().zip(hi).any(|(a, b)| !(a.is_finite() && b.is_finite() && a < b)) {
        return Err(Error::precondition("box bounds must be finite with lo < hi"));
    }
    if widths.is_empty() || widths.iter().any(|&w| w == 0) {
        return Err(Error::precondition("every hidden layer must hold at least one neuron"));
    }
    let total: usize = widths.iter().sum();
    if total != s.width() {
        return Err(Error::precondition(format!(
            "hidden widths sum to {total} but the network has {} neurons",
            s.width()
        )));
    }
    let relu = Activation::relu();

    if widths.len() == 1 {
        // single hidden layer: the shallow network itself, no box needed
        let mut a0 = Mat::zeros(s.width(), d);
        let mut b0 = Vec::with_capacity(s.width());
        for (r, neuron) in s.neurons().iter().enumerate() {
            for (j, &wj) in neuron.w.iter().enumerate() {
                a0[(r, j)] = wj;
            }
            b0.push(neuron.b);
        }
        let mut a1 = Mat::zeros(1, s.width());
        for (r, neuron) in s.neurons().iter().enumerate() {
            a1[(0, r)] = neuron.a;
        }
        return Mlp::new(FieldTag::Real, d, vec![(a0, b0), (a1, vec![ZERO])], relu);
    }

    // input lanes are shifted to x + beta >= 1 on the box
    let beta: Vec<f64> = lo.iter().map(|&a| 1.0 - a).collect();
    let mut layers: Vec<(Mat, Vec<Scalar>)> = Vec::with_capacity(widths.len() + 1);
    let mut offset = 0;
    for (ell, &m) in widths.iter().enumerate() {
        let seg = &s.neurons()[offset..offset + m];
        let rows = 2 + m + d;
        if ell == 0 {
            let mut a = Mat::zeros(rows, d);
            let mut b = vec![ZERO; rows];
            // lanes 0/1: positive and negative part of the running sum, both 0
            for (r, neuron) in seg.iter().enumerate() {
                for (j, &wj) in neuron.w.iter().enumerate() {
                    a[(2 + r, j)] = wj;
                }
                b[2 + r] = neuron.b;
            }
            for j in 0..d {
                a[(2 + m + j, j)] = re(1.0);
                b[2 + m + j] = re(beta[j]);
            }
            layers.push((a, b));
        } else {
            let m_prev = widths[ell - 1];
            let prev_seg = &s.neurons()[offset - m_prev..offset];
            let cols = 2 + m_prev + d;
            let mut a = Mat::zeros(rows, cols);
            let mut b = vec![ZERO; rows];
            a[(0, 0)] = re(1.0);
            a[(1, 1)] = re(1.0);
            for (i, neuron) in prev_seg.iter().enumerate() {
                // a_i g_i >= 0 goes to the positive lane, the rest negated to
                // the negative lane, so both stay nonnegative
                if neuron.a.re >= 0.0 {
                    a[(0, 2 + i)] = neuron.a;
                } else {
                    a[(1, 2 + i)] = -neuron.a;
                }
            }
            for (r, neuron) in seg.iter().enumerate() {
                let mut shift = 0.0;
                for (j, &wj) in neuron.w.iter().enumerate() {
                    a[(2 + r, 2 + m_prev + j)] = wj;
                    shift += wj.re * beta[j];
                }
                b[2 + r] = neuron.b - re(shift);
            }
            for j in 0..d {
                a[(2 + m + j, 2 + m_prev + j)] = re(1.0);
            }
            layers.push((a, b));
        }
        offset += m;
    }
    let m_last = *widths.last().expect("nonempty widths");
    let last_seg = &s.neurons()[s.width() - m_last..];
    let mut a = Mat::zeros(1, 2 + m_last + d);
    a[(0, 0)] = re(1.0);
    a[(0, 1)] = re(-1.0);
    for (i, neuron) in last_seg.iter().enumerate() {
        a[(0, 2 + i)] = neuron.a;
    }
    layers.push((a, vec![ZERO]));
    Mlp::new(FieldTag::Real, d, layers, relu)
}
