//! Deep architectures: residual networks with narrow blocks, fully connected
//! networks, and densely connected networks, together with the explicit
//! embeddings that transplant a shallow construction into each of them and
//! residual builders that realize polynomials directly.
//!
//! All three containers evaluate with plain (non-conjugating) matrix-vector
//! products; embeddings that start from a shallow network bake the required
//! conjugation into the stored rows, so real and complex networks run through
//! identical code.

use crate::activation::Activation;
use crate::error::{Error, Result};
use crate::field::{dot, re, FieldTag, Scalar, ZERO};
use crate::linalg::Mat;
use crate::poly::{MPoly, MultiIndex};
use crate::shallow::{guard_difference, ShallowNet};

// ---------------------------------------------------------------------------
// Residual networks
// ---------------------------------------------------------------------------

/// One residual update `z <- z + outer * sigma(inner * z + bias)`. The block
/// width (number of neurons) is `bias.len()`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResBlock {
    pub outer: Mat,
    pub inner: Mat,
    pub bias: Vec<Scalar>,
}

impl ResBlock {
    pub fn width(&self) -> usize {
        self.bias.len()
    }
}

/// Residual network with scalar output: the input is embedded into a state
/// vector once, every block adds a correction to the state, and a fixed exit
/// row reads the result off.
#[derive(Debug, Clone)]
pub struct ResNet {
    field: FieldTag,
    dim: usize,
    state_dim: usize,
    entry: Mat,
    entry_bias: Vec<Scalar>,
    blocks: Vec<ResBlock>,
    exit: Vec<Scalar>,
    activation: Activation,
}

impl ResNet {
    pub fn new(
        field: FieldTag,
        dim: usize,
        entry: Mat,
        entry_bias: Vec<Scalar>,
        blocks: Vec<ResBlock>,
        exit: Vec<Scalar>,
        activation: Activation,
    ) -> Result<Self> {
        field.require(activation.field())?;
        let state_dim = entry.rows();
        if dim == 0 || state_dim == 0 {
            return Err(Error::precondition("network needs nonempty input and state"));
        }
        if entry.cols() != dim {
            return Err(Error::DimMismatch { expected: dim, found: entry.cols() });
        }
        if entry_bias.len() != state_dim {
            return Err(Error::DimMismatch { expected: state_dim, found: entry_bias.len() });
        }
        if exit.len() != state_dim {
            return Err(Error::DimMismatch { expected: state_dim, found: exit.len() });
        }
        for b in &blocks {
            let width = b.width();
            if b.inner.rows() != width || b.inner.cols() != state_dim {
                return Err(Error::precondition(format!(
                    "block inner map must be {width} x {state_dim}, got {} x {}",
                    b.inner.rows(),
                    b.inner.cols()
                )));
            }
            if b.outer.rows() != state_dim || b.outer.cols() != width {
                return Err(Error::precondition(format!(
                    "block outer map must be {state_dim} x {width}, got {} x {}",
                    b.outer.rows(),
                    b.outer.cols()
                )));
            }
            for m in [&b.outer, &b.inner] {
                for &v in m.iter() {
                    field.check(v, "block weight")?;
                }
            }
            field.check_all(&b.bias, "block bias")?;
        }
        for &v in entry.iter() {
            field.check(v, "entry weight")?;
        }
        field.check_all(&entry_bias, "entry bias")?;
        field.check_all(&exit, "exit weight")?;
        Ok(ResNet { field, dim, state_dim, entry, entry_bias, blocks, exit, activation })
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn state_dim(&self) -> usize {
        self.state_dim
    }

    pub fn entry(&self) -> (&Mat, &[Scalar]) {
        (&self.entry, &self.entry_bias)
    }

    pub fn blocks(&self) -> &[ResBlock] {
        &self.blocks
    }

    pub fn exit(&self) -> &[Scalar] {
        &self.exit
    }

    pub fn activation(&self) -> &Activation {
        &self.activation
    }

    pub fn depth(&self) -> usize {
        self.blocks.len()
    }

    pub fn max_width(&self) -> usize {
        self.blocks.iter().map(ResBlock::width).max().unwrap_or(0)
    }

    /// Stored scalars that do real work: entry bias, every block's two maps
    /// and bias, and the exit row. The entry matrix only routes input
    /// coordinates into the state, so it is not counted; with state width s
    /// the total is `2s + sum_blocks width * (2s + 1)`.
    pub fn param_count(&self) -> usize {
        let s = self.state_dim;
        2 * s + self.blocks.iter().map(|b| b.width() * (2 * s + 1)).sum::<usize>()
    }

    pub fn eval(&self, x: &[Scalar]) -> Result<Scalar> {
        if x.len() != self.dim {
            return Err(Error::DimMismatch { expected: self.dim, found: x.len() });
        }
        self.field.check_all(x, "evaluation point")?;
        let mut z = self.entry.matvec(x)?;
        for (zi, bi) in z.iter_mut().zip(&self.entry_bias) {
            *zi += bi;
        }
        for block in &self.blocks {
            let mut u = block.inner.matvec(&z)?;
            for (ui, bi) in u.iter_mut().zip(&block.bias) {
                *ui = self.activation.eval(*ui + bi)?;
            }
            let corr = block.outer.matvec(&u)?;
            for (zi, ci) in z.iter_mut().zip(&corr) {
                *zi += ci;
            }
        }
        Ok(dot(&self.exit, &z))
    }
}

/// Rebuilds a shallow network as a residual network, exactly: the state keeps
/// the input in its first `dim` coordinates and accumulates the output in one
/// extra coordinate, with the shallow neurons distributed over the blocks
/// according to `widths` (which must sum to the neuron count, each >= 1).
pub fn resnet_from_shallow(s: &ShallowNet, widths: &[usize]) -> Result<ResNet> {
    let d = s.dim();
    let n = s.width();
    if widths.iter().any(|&w| w == 0) {
        return Err(Error::precondition("every block must hold at least one neuron"));
    }
    let total: usize = widths.iter().sum();
    if total != n {
        return Err(Error::precondition(format!(
            "block widths sum to {total} but the network has {n} neurons"
        )));
    }
    let d0 = d + 1;
    let mut entry = Mat::zeros(d0, d);
    for i in 0..d {
        entry[(i, i)] = re(1.0);
    }
    let mut blocks = Vec::with_capacity(widths.len());
    let mut offset = 0;
    for &width in widths {
        let seg = &s.neurons()[offset..offset + width];
        let mut inner = Mat::zeros(width, d0);
        let mut outer = Mat::zeros(d0, width);
        let mut bias = Vec::with_capacity(width);
        for (r, neuron) in seg.iter().enumerate() {
            for (j, &wj) in neuron.w.iter().enumerate() {
                inner[(r, j)] = wj.conj();
            }
            bias.push(neuron.b);
            outer[(d, r)] = neuron.a;
        }
        blocks.push(ResBlock { outer, inner, bias });
        offset += width;
    }
    let mut exit = vec![ZERO; d0];
    exit[d] = re(1.0);
    ResNet::new(s.field(), d, entry, vec![ZERO; d0], blocks, exit, s.activation().clone())
}

/// How many parameters [`resnet_from_shallow`] produces for a shallow network
/// with n neurons in dimension d, independent of the block partition:
/// `2 (n + 1)(d + 1) + n`.
pub fn resnet_embedding_param_count(n: usize, d: usize) -> usize {
    2 * (n + 1) * (d + 1) + n
}

fn factor_list(e: &MultiIndex) -> Vec<usize> {
    let mut f = Vec::new();
    for (i, &cnt) in e.0.iter().enumerate() {
        for _ in 0..cnt {
            f.push(i);
        }
    }
    f
}

/// Exact residual realization of a polynomial with the square activation
/// `sigma(t) = t^2`. The state is (accumulator, input copy, workspace); each
/// monomial is built up factor by factor in the workspace through the
/// polarization identity `4ab = (a+b)^2 - (a-b)^2` and then flushed into the
/// accumulator, so every block has width at most 2 and the result is exact
/// over both fields.
pub fn resnet_poly_square(p: &MPoly) -> Result<ResNet> {
    let field = p.field();
    let d = p.dim();
    let activation = Activation::monomial(2, field);
    let d0 = d + 2;
    let ws = d + 1; // workspace lane; accumulator is lane 0, inputs 1..=d
    let mut entry = Mat::zeros(d0, d);
    let mut entry_bias = vec![ZERO; d0];
    for i in 0..d {
        entry[(1 + i, i)] = re(1.0);
    }
    let mut blocks = Vec::new();
    for (e, c) in p.terms_graded() {
        match e.degree() {
            0 => entry_bias[0] += c,
            1 => {
                let axis = e.0.iter().position(|&k| k > 0).expect("degree-1 index");
                entry[(0, axis)] += c;
            }
            _ => {
                let f = factor_list(&e);
                let rest = if f[0] == f[1] {
                    // workspace <- z_i^2 with a single neuron
                    let mut inner = Mat::zeros(1, d0);
                    inner[(0, 1 + f[0])] = re(1.0);
                    let mut outer = Mat::zeros(d0, 1);
                    outer[(ws, 0)] = re(1.0);
                    blocks.push(ResBlock { outer, inner, bias: vec![ZERO] });
                    &f[2..]
                } else {
                    // workspace <- z_i via [(z+1)^2 - (z-1)^2] / 4
                    let mut inner = Mat::zeros(2, d0);
                    inner[(0, 1 + f[0])] = re(1.0);
                    inner[(1, 1 + f[0])] = re(1.0);
                    let mut outer = Mat::zeros(d0, 2);
                    outer[(ws, 0)] = re(0.25);
                    outer[(ws, 1)] = re(-0.25);
                    blocks.push(ResBlock { outer, inner, bias: vec![re(1.0), re(-1.0)] });
                    &f[1..]
                };
                for &j in rest {
                    // w += [(w + z_j - 1)^2 - (w - z_j + 1)^2]/4 = w z_j - w
                    let mut inner = Mat::zeros(2, d0);
                    inner[(0, ws)] = re(1.0);
                    inner[(0, 1 + j)] = re(1.0);
                    inner[(1, ws)] = re(1.0);
                    inner[(1, 1 + j)] = re(-1.0);
                    let mut outer = Mat::zeros(d0, 2);
                    outer[(ws, 0)] = re(0.25);
                    outer[(ws, 1)] = re(-0.25);
                    blocks.push(ResBlock { outer, inner, bias: vec![re(-1.0), re(1.0)] });
                }
                // flush: [(w+1)^2 - (w-1)^2]/4 = w feeds the accumulator and
                // cancels the workspace in the same block
                let mut inner = Mat::zeros(2, d0);
                inner[(0, ws)] = re(1.0);
                inner[(1, ws)] = re(1.0);
                let mut outer = Mat::zeros(d0, 2);
                outer[(0, 0)] = c * re(0.25);
                outer[(0, 1)] = c * re(-0.25);
                outer[(ws, 0)] = re(-0.25);
                outer[(ws, 1)] = re(0.25);
                blocks.push(ResBlock { outer, inner, bias: vec![re(1.0), re(-1.0)] });
            }
        }
    }
    let mut exit = vec![ZERO; d0];
    exit[0] = re(1.0);
    ResNet::new(field, d, entry, entry_bias, blocks, exit, activation)
}

/// Picks a real expansion point for an activation by scanning [-2, 2] for the
/// largest central difference quotient of the requested order (1 or 2).
pub(crate) fn probe_point(activation: &Activation, order: usize) -> Result<f64> {
    let delta = 1e-3;
    let mut best_t = 0.0;
    let mut best_v = -1.0;
    for k in 0..=100 {
        let t = -2.0 + 4.0 * k as f64 / 100.0;
        let v = match order {
            1 => (activation.eval(re(t + delta))? - activation.eval(re(t - delta))?).norm()
                / (2.0 * delta),
            _ => (activation.eval(re(t + delta))? - re(2.0) * activation.eval(re(t))?
                + activation.eval(re(t - delta))?)
            .norm()
                / (delta * delta),
        };
        if v > best_v {
            best_v = v;
            best_t = t;
        }
    }
    Ok(best_t)
}

/// An affine form `sum coeffs_i * state_i + konst` used to describe gadget
/// arguments when wiring product blocks.
struct AffineForm {
    coeffs: Vec<(usize, Scalar)>,
    konst: Scalar,
}

impl AffineForm {
    fn lane(idx: usize) -> Self {
        AffineForm { coeffs: vec![(idx, re(1.0))], konst: ZERO }
    }

    fn lane_plus(idx: usize, konst: f64) -> Self {
        AffineForm { coeffs: vec![(idx, re(1.0))], konst: re(konst) }
    }

    fn constant(konst: f64) -> Self {
        AffineForm { coeffs: vec![], konst: re(konst) }
    }
}

/// Width-4 block computing `x * y + O(h^2)` for affine forms x, y in the
/// state, from the second-order quotient
/// `[s(z*+h(x+y)) + s(z*-h(x+y)) - s(z*+h(x-y)) - s(z*-h(x-y))] / (4 h^2 s''(z*))`,
/// and adding `mult * (x * y)` to each target lane in `deposits`.
fn product_block(
    d0: usize,
    x: &AffineForm,
    y: &AffineForm,
    h: f64,
    z_star: f64,
    scale: Scalar,
    deposits: &[(usize, Scalar)],
) -> ResBlock {
    let mut inner = Mat::zeros(4, d0);
    let mut bias = vec![ZERO; 4];
    let mut outer = Mat::zeros(d0, 4);
    for (k, (s, t)) in [(1.0, 1.0), (-1.0, 1.0), (1.0, -1.0), (-1.0, -1.0)].into_iter().enumerate()
    {
        for &(col, c) in &x.coeffs {
            inner[(k, col)] += re(s * h) * c;
        }
        for &(col, c) in &y.coeffs {
            inner[(k, col)] += re(s * t * h) * c;
        }
        bias[k] = re(z_star) + re(s * h) * (x.konst + re(t) * y.konst);
        for &(row, mult) in deposits {
            outer[(row, k)] = mult * re(t) * scale;
        }
    }
    ResBlock { outer, inner, bias }
}

/// Residual realization of a polynomial with an arbitrary twice
/// differentiable activation: products are formed by width-4 blocks probing
/// the activation around an expansion point z* with curvature s''(z*) != 0,
/// so the network converges to the polynomial at rate O(h^2) as the probe
/// step h shrinks. Pass `z_star: None` to pick the point automatically.
pub fn resnet_poly_general(
    p: &MPoly,
    activation: &Activation,
    h: f64,
    z_star: Option<f64>,
) -> Result<ResNet> {
    let field = p.field();
    field.require(activation.field())?;
    if activation.is_rectifier() {
        return Err(Error::NoSeries { activation: activation.name() });
    }
    guard_difference(2, h)?;
    let zs = match z_star {
        Some(t) => {
            if !t.is_finite() {
                return Err(Error::precondition("expansion point must be finite"));
            }
            t
        }
        None => probe_point(activation, 2)?,
    };
    let curvature = activation.eval_deriv2(re(zs))?;
    if curvature.norm() < 1e-12 {
        return Err(Error::precondition(format!(
            "activation '{}' has vanishing curvature at expansion point {zs}; \
             products need sigma''(z*) != 0",
            activation.name()
        )));
    }
    let scale = re(1.0) / (re(4.0 * h * h) * curvature);

    let d = p.dim();
    let d0 = d + 2;
    let ws = d + 1;
    let mut entry = Mat::zeros(d0, d);
    let mut entry_bias = vec![ZERO; d0];
    for i in 0..d {
        entry[(1 + i, i)] = re(1.0);
    }
    let mut blocks = Vec::new();
    for (e, c) in p.terms_graded() {
        match e.degree() {
            0 => entry_bias[0] += c,
            1 => {
                let axis = e.0.iter().position(|&k| k > 0).expect("degree-1 index");
                entry[(0, axis)] += c;
            }
            _ => {
                let f = factor_list(&e);
                // workspace <- z_{f0} * z_{f1}
                blocks.push(product_block(
                    d0,
                    &AffineForm::lane(1 + f[0]),
                    &AffineForm::lane(1 + f[1]),
                    h,
                    zs,
                    scale,
                    &[(ws, re(1.0))],
                ));
                for &j in &f[2..] {
                    // w += w * (z_j - 1) = w z_j - w
                    blocks.push(product_block(
                        d0,
                        &AffineForm::lane(ws),
                        &AffineForm::lane_plus(1 + j, -1.0),
                        h,
                        zs,
                        scale,
                        &[(ws, re(1.0))],
                    ));
                }
                // acc += c * (w * 1), w -= w * 1
                blocks.push(product_block(
                    d0,
                    &AffineForm::lane(ws),
                    &AffineForm::constant(1.0),
                    h,
                    zs,
                    scale,
                    &[(0, c), (ws, re(-1.0))],
                ));
            }
        }
    }
    let mut exit = vec![ZERO; d0];
    exit[0] = re(1.0);
    ResNet::new(field, d, entry, entry_bias, blocks, exit, activation.clone())
}

/// Expands a residual network with polynomial activation into the polynomial
/// it computes, by running the forward pass symbolically.
pub fn resnet_to_mpoly(net: &ResNet) -> Result<MPoly> {
    let deg = net.activation.polynomial_degree().ok_or_else(|| {
        Error::precondition("symbolic expansion requires a polynomial activation")
    })?;
    let d = net.dim;
    let field = net.field;
    let sigma = |q: &MPoly| -> Result<MPoly> {
        // Horner in the polynomial ring
        let mut acc = MPoly::constant(d, field, net.activation.series_coefficient(deg)?)?;
        for k in (0..deg).rev() {
            acc = acc.mul(q)?;
            acc.add_term(MultiIndex::zero(d), net.activation.series_coefficient(k)?)?;
        }
        Ok(acc)
    };
    let mut state: Vec<MPoly> = Vec::with_capacity(net.state_dim);
    for i in 0..net.state_dim {
        let mut zi = MPoly::constant(d, field, net.entry_bias[i])?;
        for j in 0..d {
            let w = net.entry[(i, j)];
            if w.norm() != 0.0 {
                zi = zi.add(&MPoly::coordinate(d, field, j).scale(w)?)?;
            }
        }
        state.push(zi);
    }
    for block in &net.blocks {
        let mut outputs = Vec::with_capacity(block.width());
        for r in 0..block.width() {
            let mut arg = MPoly::constant(d, field, block.bias[r])?;
            for j in 0..net.state_dim {
                let w = block.inner[(r, j)];
                if w.norm() != 0.0 {
                    arg = arg.add(&state[j].scale(w)?)?;
                }
            }
            outputs.push(sigma(&arg)?);
        }
        for i in 0..net.state_dim {
            for (r, out) in outputs.iter().enumerate() {
                let w = block.outer[(i, r)];
                if w.norm() != 0.0 {
                    state[i] = state[i].add(&out.scale(w)?)?;
                }
            }
        }
    }
    let mut result = MPoly::zero(d, field);
    for (i, zi) in state.iter().enumerate() {
        if net.exit[i].norm() != 0.0 {
            result = result.add(&zi.scale(net.exit[i])?)?;
        }
    }
    Ok(result)
}

// ---------------------------------------------------------------------------
// Fully connected networks
// ---------------------------------------------------------------------------

/// Fully connected network: affine layers with the activation applied after
/// every layer except the last, which is a single output row.
#[derive(Debug, Clone)]
pub struct Mlp {
    field: FieldTag,
    dim: usize,
    layers: Vec<(Mat, Vec<Scalar>)>,
    activation: Activation,
}

impl Mlp {
    pub fn new(
        field: FieldTag,
        dim: usize,
        layers: Vec<(Mat, Vec<Scalar>)>,
        activation: Activation,
    ) -> Result<Self> {
        field.require(activation.field())?;
        if dim == 0 {
            return Err(Error::precondition("network needs at least one input coordinate"));
        }
        if layers.is_empty() {
            return Err(Error::precondition("network needs at least one layer"));
        }
        let mut expected_cols = dim;
        for (a, b) in &layers {
            if a.cols() != expected_cols {
                return Err(Error::DimMismatch { expected: expected_cols, found: a.cols() });
            }
            if b.len() != a.rows() {
                return Err(Error::DimMismatch { expected: a.rows(), found: b.len() });
            }
            for &v in a.iter() {
                field.check(v, "layer weight")?;
            }
            field.check_all(b, "layer bias")?;
            expected_cols = a.rows();
        }
        if expected_cols != 1 {
            return Err(Error::precondition(format!(
                "last layer must have a single output row, got {expected_cols}"
            )));
        }
        Ok(Mlp { field, dim, layers, activation })
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn layers(&self) -> &[(Mat, Vec<Scalar>)] {
        &self.layers
    }

    pub fn activation(&self) -> &Activation {
        &self.activation
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn hidden_widths(&self) -> Vec<usize> {
        self.layers[..self.layers.len() - 1].iter().map(|(a, _)| a.rows()).collect()
    }

    pub fn param_count(&self) -> usize {
        self.layers.iter().map(|(a, b)| a.entry_count() + b.len()).sum()
    }

    pub fn eval(&self, x: &[Scalar]) -> Result<Scalar> {
        if x.len() != self.dim {
            return Err(Error::DimMismatch { expected: self.dim, found: x.len() });
        }
        self.field.check_all(x, "evaluation point")?;
        let mut h = x.to_vec();
        let last = self.layers.len() - 1;
        for (idx, (a, b)) in self.layers.iter().enumerate() {
            let mut u = a.matvec(&h)?;
            for (ui, bi) in u.iter_mut().zip(b) {
                *ui += bi;
            }
            if idx < last {
                for ui in u.iter_mut() {
                    *ui = self.activation.eval(*ui)?;
                }
            }
            h = u;
        }
        Ok(h[0])
    }
}

/// Rebuilds a shallow network as a fully connected network whose hidden
/// layers hold `widths` neurons each (summing to the shallow width). A single
/// hidden layer reproduces the shallow network exactly. Deeper stacks carry
/// the input and the running output sum through every layer inside
/// sigma-encoded lanes around an expansion point z* with sigma'(z*) != 0:
/// a lane stores sigma(z* + eps * value) and later layers decode it by an
/// affine map, which costs an O(eps) error per crossing. Identity-like
/// activations decode exactly; pass `z_star: None` to pick the point
/// automatically.
pub fn mlp_from_shallow(
    s: &ShallowNet,
    widths: &[usize],
    eps: f64,
    z_star: Option<f64>,
) -> Result<Mlp> {
    if s.activation().is_rectifier() {
        return Err(Error::NoSeries { activation: s.activation().name() });
    }
    if widths.is_empty() {
        return Err(Error::precondition("need at least one hidden layer"));
    }
    if widths.iter().any(|&w| w == 0) {
        return Err(Error::precondition("every hidden layer must hold at least one neuron"));
    }
    let total: usize = widths.iter().sum();
    if total != s.width() {
        return Err(Error::precondition(format!(
            "hidden widths sum to {total} but the network has {} neurons",
            s.width()
        )));
    }
    let d = s.dim();
    let field = s.field();
    let act = s.activation().clone();

    if widths.len() == 1 {
        // single hidden layer: the shallow network itself
        let mut a0 = Mat::zeros(s.width(), d);
        let mut b0 = Vec::with_capacity(s.width());
        for (r, neuron) in s.neurons().iter().enumerate() {
            for (j, &wj) in neuron.w.iter().enumerate() {
                a0[(r, j)] = wj.conj();
            }
            b0.push(neuron.b);
        }
        let mut a1 = Mat::zeros(1, s.width());
        for (r, neuron) in s.neurons().iter().enumerate() {
            a1[(0, r)] = neuron.a;
        }
        return Mlp::new(field, d, vec![(a0, b0), (a1, vec![ZERO])], act);
    }

    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::precondition(format!("lane scale eps must be positive, got {eps}")));
    }
    let zs = match z_star {
        Some(t) => {
            if !t.is_finite() {
                return Err(Error::precondition("expansion point must be finite"));
            }
            t
        }
        None => probe_point(&act, 1)?,
    };
    let c0 = act.eval(re(zs))?;
    let c1 = act.eval_deriv(re(zs))?;
    if (c1 * re(eps)).norm() < 1e-8 {
        return Err(Error::precondition(format!(
            "lane decoding divides by eps * sigma'(z*) = {:.3e}; increase eps or move z*",
            (c1 * re(eps)).norm()
        )));
    }
    let decode = re(1.0) / c1; // lane -> pre-activation value
    let lane_bias = re(zs) - c0 / c1;

    // Hidden layer ell holds: lane 0 = sigma(z* + eps * S) for the running
    // sum S over all neurons consumed so far, lanes 1..=m = this segment's
    // neuron outputs, last d lanes = sigma(z* + eps * x_j).
    let mut layers: Vec<(Mat, Vec<Scalar>)> = Vec::with_capacity(widths.len() + 1);
    let mut offset = 0;
    for (ell, &m) in widths.iter().enumerate() {
        let seg = &s.neurons()[offset..offset + m];
        let rows = 1 + m + d;
        if ell == 0 {
            let mut a = Mat::zeros(rows, d);
            let mut b = vec![ZERO; rows];
            b[0] = re(zs); // S = 0
            for (r, neuron) in seg.iter().enumerate() {
                for (j, &wj) in neuron.w.iter().enumerate() {
                    a[(1 + r, j)] = wj.conj();
                }
                b[1 + r] = neuron.b;
            }
            for j in 0..d {
                a[(1 + m + j, j)] = re(eps);
                b[1 + m + j] = re(zs);
            }
            layers.push((a, b));
        } else {
            let m_prev = widths[ell - 1];
            let prev_seg = &s.neurons()[offset - m_prev..offset];
            let cols = 1 + m_prev + d;
            let mut a = Mat::zeros(rows, cols);
            let mut b = vec![ZERO; rows];
            // accumulator: z* + eps * (S_prev + sum a_i g_i)
            a[(0, 0)] = decode;
            for (i, neuron) in prev_seg.iter().enumerate() {
                a[(0, 1 + i)] = re(eps) * neuron.a;
            }
            b[0] = lane_bias;
            // this segment's neurons decode x from the carry lanes
            for (r, neuron) in seg.iter().enumerate() {
                let mut wsum = ZERO;
                for (j, &wj) in neuron.w.iter().enumerate() {
                    let wc = wj.conj();
                    a[(1 + r, 1 + m_prev + j)] = wc * decode / re(eps);
                    wsum += wc;
                }
                b[1 + r] = neuron.b - wsum * (c0 / c1) / re(eps);
            }
            // carry lanes re-encode themselves
            for j in 0..d {
                a[(1 + m + j, 1 + m_prev + j)] = decode;
                b[1 + m + j] = lane_bias;
            }
            layers.push((a, b));
        }
        offset += m;
    }
    // output: S_last decoded from the accumulator plus the final segment
    let m_last = *widths.last().expect("nonempty widths");
    let last_seg = &s.neurons()[s.width() - m_last..];
    let mut a = Mat::zeros(1, 1 + m_last + d);
    a[(0, 0)] = decode / re(eps);
    for (i, neuron) in last_seg.iter().enumerate() {
        a[(0, 1 + i)] = neuron.a;
    }
    let b = vec![-(c0 / c1) / re(eps)];
    layers.push((a, b));
    Mlp::new(field, d, layers, act)
}

// ---------------------------------------------------------------------------
// Densely connected networks
// ---------------------------------------------------------------------------

/// Densely connected network: layer ell reads the concatenation of the input
/// and every earlier layer's activated output; the last layer is a single
/// un-activated output row.
#[derive(Debug, Clone)]
pub struct DenseNet {
    field: FieldTag,
    dim: usize,
    layers: Vec<(Mat, Vec<Scalar>)>,
    activation: Activation,
}

impl DenseNet {
    pub fn new(
        field: FieldTag,
        dim: usize,
        layers: Vec<(Mat, Vec<Scalar>)>,
        activation: Activation,
    ) -> Result<Self> {
        field.require(activation.field())?;
        if dim == 0 {
            return Err(Error::precondition("network needs at least one input coordinate"));
        }
        if layers.is_empty() {
            return Err(Error::precondition("network needs at least one layer"));
        }
        let mut feature_width = dim;
        for (idx, (a, b)) in layers.iter().enumerate() {
            if a.cols() != feature_width {
                return Err(Error::DimMismatch { expected: feature_width, found: a.cols() });
            }
            if b.len() != a.rows() {
                return Err(Error::DimMismatch { expected: a.rows(), found: b.len() });
            }
            for &v in a.iter() {
                field.check(v, "layer weight")?;
            }
            field.check_all(b, "layer bias")?;
            if idx + 1 == layers.len() {
                if a.rows() != 1 {
                    return Err(Error::precondition(format!(
                        "last layer must have a single output row, got {}",
                        a.rows()
                    )));
                }
            } else {
                feature_width += a.rows();
            }
        }
        Ok(DenseNet { field, dim, layers, activation })
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn layers(&self) -> &[(Mat, Vec<Scalar>)] {
        &self.layers
    }

    pub fn activation(&self) -> &Activation {
        &self.activation
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn param_count(&self) -> usize {
        self.layers.iter().map(|(a, b)| a.entry_count() + b.len()).sum()
    }

    pub fn eval(&self, x: &[Scalar]) -> Result<Scalar> {
        if x.len() != self.dim {
            return Err(Error::DimMismatch { expected: self.dim, found: x.len() });
        }
        self.field.check_all(x, "evaluation point")?;
        let mut features = x.to_vec();
        let last = self.layers.len() - 1;
        for (idx, (a, b)) in self.layers.iter().enumerate() {
            let mut u = a.matvec(&features)?;
            for (ui, bi) in u.iter_mut().zip(b) {
                *ui += bi;
            }
            if idx == last {
                return Ok(u[0]);
            }
            for ui in u.iter_mut() {
                *ui = self.activation.eval(*ui)?;
            }
            features.extend(u);
        }
        unreachable!("layers are nonempty");
    }
}

/// Rebuilds a shallow network as a two-layer densely connected network,
/// exactly: the first layer computes the neurons, the second reads them off
/// the concatenated features (ignoring the raw input columns).
pub fn densenet_from_shallow(s: &ShallowNet) -> Result<DenseNet> {
    let d = s.dim();
    let n = s.width();
    let mut a0 = Mat::zeros(n, d);
    let mut b0 = Vec::with_capacity(n);
    for (r, neuron) in s.neurons().iter().enumerate() {
        for (j, &wj) in neuron.w.iter().enumerate() {
            a0[(r, j)] = wj.conj();
        }
        b0.push(neuron.b);
    }
    let mut a1 = Mat::zeros(1, d + n);
    for (r, neuron) in s.neurons().iter().enumerate() {
        a1[(0, d + r)] = neuron.a;
    }
    DenseNet::new(s.field(), d, vec![(a0, b0), (a1, vec![ZERO])], s.activation().clone())
}

/// Rebuilds a fully connected network as a densely connected one, exactly:
/// each layer ignores all features except the ones its original layer read,
/// i.e. every matrix is left-padded with zero columns.
pub fn densenet_from_mlp(m: &Mlp) -> Result<DenseNet> {
    let d = m.dim();
    let mut layers = Vec::with_capacity(m.depth());
    let mut feature_width = d;
    for (a, b) in m.layers() {
        let pad = feature_width - a.cols();
        let mut wide = Mat::zeros(a.rows(), feature_width);
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                wide[(i, pad + j)] = a[(i, j)];
            }
        }
        layers.push((wide, b.clone()));
        feature_width += a.rows();
    }
    DenseNet::new(m.field(), d, layers, m.activation().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::scalar;
    use crate::grid::{sup_norm_diff, BoxGrid};
    use crate::shallow::build_monomial_1d;

    fn sample_shallow(field: FieldTag) -> ShallowNet {
        build_monomial_1d(&Activation::exp(field), 2, 1e-2, true).unwrap()
    }

    fn multi_shallow() -> ShallowNet {
        // hand-written 2-input net with 5 neurons, mixed signs
        let act = Activation::sin(FieldTag::Real);
        let neurons = (0..5)
            .map(|k| {
                let t = k as f64;
                crate::shallow::Neuron {
                    a: re(0.3 - 0.1 * t),
                    w: vec![re(0.4 + 0.1 * t), re(-0.2 + 0.05 * t)],
                    b: re(0.1 * t - 0.2),
                }
            })
            .collect();
        ShallowNet::new(FieldTag::Real, 2, act, neurons).unwrap()
    }

    #[test]
    fn resnet_embedding_is_exact() {
        let s = multi_shallow();
        for widths in [vec![1, 1, 1, 1, 1], vec![2, 3], vec![5]] {
            let net = resnet_from_shallow(&s, &widths).unwrap();
            for point in [[0.3, -0.7], [1.0, 0.5], [-0.9, -0.1]] {
                let z = [re(point[0]), re(point[1])];
                let lhs = s.eval(&z).unwrap();
                let rhs = net.eval(&z).unwrap();
                assert!((lhs - rhs).norm() <= 1e-13 * lhs.norm().max(1.0));
            }
        }
    }

    #[test]
    fn resnet_embedding_complex() {
        let s = sample_shallow(FieldTag::Complex);
        let net = resnet_from_shallow(&s, &[1, 1, 1]).unwrap();
        let z = [scalar(0.4, -0.3)];
        let gap = (s.eval(&z).unwrap() - net.eval(&z).unwrap()).norm();
        assert!(gap <= 1e-12);
    }

    #[test]
    fn resnet_embedding_param_count_matches_closed_form() {
        let s = multi_shallow(); // n = 5, d = 2
        let net = resnet_from_shallow(&s, &[1, 1, 1, 1, 1]).unwrap();
        assert_eq!(net.param_count(), 41);
        assert_eq!(net.param_count(), resnet_embedding_param_count(5, 2));
        // the count depends only on the total neuron budget, not the split
        let lumped = resnet_from_shallow(&s, &[5]).unwrap();
        assert_eq!(lumped.param_count(), 41);
    }

    #[test]
    fn resnet_embedding_rejects_bad_widths() {
        let s = multi_shallow();
        assert!(resnet_from_shallow(&s, &[2, 2]).is_err());
        assert!(resnet_from_shallow(&s, &[5, 0]).is_err());
    }

    fn sample_poly(field: FieldTag) -> MPoly {
        MPoly::from_terms(
            2,
            field,
            [
                (vec![0, 0], re(1.0)),
                (vec![1, 0], re(2.0)),
                (vec![1, 1], re(3.0)),
                (vec![0, 3], re(-1.5)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn square_activation_resnet_is_exact() {
        let p = sample_poly(FieldTag::Real);
        let net = resnet_poly_square(&p).unwrap();
        assert!(net.max_width() <= 2);
        let grid = BoxGrid::symmetric_with_samples(FieldTag::Real, 2, 1.0, 21).unwrap();
        let err = sup_norm_diff(|z| net.eval(z), |z| p.eval(z), &grid).unwrap();
        assert!(err <= 1e-12, "sup error {err}");
    }

    #[test]
    fn square_activation_resnet_complex_coefficients() {
        let p = MPoly::from_terms(
            1,
            FieldTag::Complex,
            [(vec![2], scalar(0.0, 1.0)), (vec![1], re(-2.0))],
        )
        .unwrap();
        let net = resnet_poly_square(&p).unwrap();
        let z = [scalar(0.7, 0.2)];
        let gap = (net.eval(&z).unwrap() - p.eval(&z).unwrap()).norm();
        assert!(gap <= 1e-12, "gap {gap}");
    }

    #[test]
    fn square_activation_resnet_round_trips_symbolically() {
        let p = sample_poly(FieldTag::Real);
        let net = resnet_poly_square(&p).unwrap();
        let q = resnet_to_mpoly(&net).unwrap();
        assert_eq!(q.total_degree(), p.total_degree());
        for (e, c) in p.terms() {
            assert!((q.coefficient(e) - c).norm() <= 1e-12, "term {e:?}");
        }
        assert_eq!(q.num_terms(), p.num_terms());
    }

    #[test]
    fn general_resnet_with_square_activation_is_exact() {
        // with sigma = t^2 the probe quotient is an identity, h drops out
        let p = sample_poly(FieldTag::Real);
        let act = Activation::monomial(2, FieldTag::Real);
        let net = resnet_poly_general(&p, &act, 0.05, Some(0.0)).unwrap();
        assert!(net.max_width() <= 4);
        let grid = BoxGrid::symmetric_with_samples(FieldTag::Real, 2, 1.0, 21).unwrap();
        let err = sup_norm_diff(|z| net.eval(z), |z| p.eval(z), &grid).unwrap();
        assert!(err <= 1e-10, "sup error {err}");
    }

    #[test]
    fn general_resnet_converges_quadratically() {
        let p = sample_poly(FieldTag::Real);
        let act = Activation::exp(FieldTag::Real);
        let grid = BoxGrid::symmetric_with_samples(FieldTag::Real, 2, 1.0, 21).unwrap();
        let err_at = |h: f64| {
            let net = resnet_poly_general(&p, &act, h, None).unwrap();
            sup_norm_diff(|z| net.eval(z), |z| p.eval(z), &grid).unwrap()
        };
        let coarse = err_at(2e-2);
        let fine = err_at(1e-2);
        assert!(fine / coarse <= 0.3, "ratio {}", fine / coarse);
    }

    #[test]
    fn general_resnet_rejects_flat_activations() {
        let p = sample_poly(FieldTag::Real);
        let lin = Activation::identity(FieldTag::Real);
        assert!(resnet_poly_general(&p, &lin, 1e-2, None).is_err());
        assert!(resnet_poly_general(&p, &Activation::relu(), 1e-2, None).is_err());
    }

    #[test]
    fn symbolic_expansion_requires_polynomial_activation() {
        let s = sample_shallow(FieldTag::Real);
        let net = resnet_from_shallow(&s, &[3]).unwrap();
        assert!(resnet_to_mpoly(&net).is_err());
    }

    #[test]
    fn mlp_single_hidden_layer_is_exact() {
        let s = multi_shallow();
        let m = mlp_from_shallow(&s, &[5], 1.0, None).unwrap();
        assert_eq!(m.depth(), 2);
        for point in [[0.2, 0.9], [-0.5, -0.5]] {
            let z = [re(point[0]), re(point[1])];
            let gap = (s.eval(&z).unwrap() - m.eval(&z).unwrap()).norm();
            assert!(gap <= 1e-13);
        }
    }

    #[test]
    fn mlp_identity_activation_is_exact_at_any_depth() {
        let act = Activation::identity(FieldTag::Real);
        let neurons = (0..4)
            .map(|k| crate::shallow::Neuron {
                a: re(0.5 - 0.2 * k as f64),
                w: vec![re(0.3 + 0.1 * k as f64)],
                b: re(0.1 * k as f64),
            })
            .collect();
        let s = ShallowNet::new(FieldTag::Real, 1, act, neurons).unwrap();
        let m = mlp_from_shallow(&s, &[2, 1, 1], 0.7, Some(0.3)).unwrap();
        assert_eq!(m.depth(), 4);
        for x in [-1.0, 0.0, 0.6, 2.0] {
            let z = [re(x)];
            let gap = (s.eval(&z).unwrap() - m.eval(&z).unwrap()).norm();
            assert!(gap <= 1e-12, "x={x}: gap {gap}");
        }
    }

    #[test]
    fn mlp_lane_error_shrinks_with_eps() {
        let s = multi_shallow();
        let grid = BoxGrid::symmetric_with_samples(FieldTag::Real, 2, 1.0, 11).unwrap();
        let err_at = |eps: f64| {
            let m = mlp_from_shallow(&s, &[2, 2, 1], eps, None).unwrap();
            sup_norm_diff(|z| m.eval(z), |z| s.eval(z), &grid).unwrap()
        };
        let coarse = err_at(1e-3);
        let fine = err_at(5e-4);
        assert!(coarse < 1e-2, "coarse error {coarse}");
        assert!(fine / coarse <= 0.65, "ratio {}", fine / coarse);
    }

    #[test]
    fn mlp_embedding_rejects_bad_requests() {
        let s = multi_shallow();
        assert!(mlp_from_shallow(&s, &[2, 2], 1e-3, None).is_err());
        assert!(mlp_from_shallow(&s, &[], 1e-3, None).is_err());
        assert!(mlp_from_shallow(&s, &[5, 0], 1e-3, None).is_err());
        assert!(mlp_from_shallow(&s, &[2, 3], 0.0, None).is_err());
        // sin'(0) = 1 but sin'(pi/2) = 0: a flat expansion point is refused
        assert!(mlp_from_shallow(&s, &[2, 3], 1e-3, Some(std::f64::consts::FRAC_PI_2)).is_err());
    }

    #[test]
    fn densenet_from_shallow_is_exact() {
        let s = multi_shallow();
        let dn = densenet_from_shallow(&s).unwrap();
        assert_eq!(dn.depth(), 2);
        for point in [[0.4, -0.2], [-1.0, 1.0]] {
            let z = [re(point[0]), re(point[1])];
            let gap = (s.eval(&z).unwrap() - dn.eval(&z).unwrap()).norm();
            assert!(gap <= 1e-13);
        }
    }

    #[test]
    fn densenet_from_mlp_is_exact() {
        let s = multi_shallow();
        let m = mlp_from_shallow(&s, &[2, 2, 1], 1e-3, None).unwrap();
        let dn = densenet_from_mlp(&m).unwrap();
        for point in [[0.4, -0.2], [-0.8, 0.6]] {
            let z = [re(point[0]), re(point[1])];
            let gap = (m.eval(&z).unwrap() - dn.eval(&z).unwrap()).norm();
            assert!(gap <= 1e-13);
        }
        // dense wiring stores strictly more entries than the stack it copies
        assert!(dn.param_count() > m.param_count());
    }

    #[test]
    fn densenet_param_count_formula() {
        let s = sample_shallow(FieldTag::Real); // n = 3, d = 1
        let dn = densenet_from_shallow(&s).unwrap();
        // layer 0: 3x1 + 3, layer 1: 1x4 + 1
        assert_eq!(dn.param_count(), 3 + 3 + 4 + 1);
    }

    #[test]
    fn containers_reject_shape_mismatches() {
        let act = Activation::exp(FieldTag::Real);
        let bad = Mlp::new(
            FieldTag::Real,
            2,
            vec![(Mat::zeros(3, 2), vec![ZERO; 3]), (Mat::zeros(1, 4), vec![ZERO])],
            act.clone(),
        );
        assert!(bad.is_err());
        let bad_exit = ResNet::new(
            FieldTag::Real,
            1,
            Mat::zeros(2, 1),
            vec![ZERO; 2],
            vec![],
            vec![ZERO; 3],
            act,
        );
        assert!(bad_exit.is_err());
    }
}
