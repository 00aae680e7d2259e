//! Shallow (one hidden layer) networks and the explicit weight constructions
//! that realize monomials and polynomials with them.
//!
//! A shallow network here is `f(z) = sum_k a_k sigma(<w_k, z> + b_k)` with
//! the conjugating pairing from [`crate::field::pair`]; over the reals that
//! is the usual inner product. The builders express difference quotients of
//! `h -> sigma(h z)` as neuron weights: an order-m quotient of that map in h
//! picks out the degree-m term of sigma's power series, which is a multiple
//! of `z^m`. Everything is uniform in the field tag: the same code emits real
//! and complex networks.

use crate::activation::{binomial, factorial, Activation};
use crate::error::{Error, Result};
use crate::field::{pair, re, FieldTag, Scalar, ZERO};
use crate::poly::{MPoly, MultiIndex};

/// Difference quotients amplify rounding error like `step^-order`, so the
/// builders refuse orders and steps beyond this envelope.
pub const MAX_DIFF_ORDER: usize = 6;
pub const MIN_DIFF_STEP: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct Neuron {
    pub a: Scalar,
    pub w: Vec<Scalar>,
    pub b: Scalar,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShallowNet {
    field: FieldTag,
    dim: usize,
    activation: Activation,
    neurons: Vec<Neuron>,
}

impl ShallowNet {
    pub fn new(
        field: FieldTag,
        dim: usize,
        activation: Activation,
        neurons: Vec<Neuron>,
    ) -> Result<Self> {
        field.require(activation.field())?;
        if dim == 0 {
            return Err(Error::precondition("network needs at least one input coordinate"));
        }
        for n in &neurons {
            if n.w.len() != dim {
                return Err(Error::DimMismatch { expected: dim, found: n.w.len() });
            }
            field.check(n.a, "outer weight")?;
            field.check(n.b, "bias")?;
            field.check_all(&n.w, "inner weight")?;
        }
        Ok(ShallowNet { field, dim, activation, neurons })
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn activation(&self) -> &Activation {
        &self.activation
    }

    pub fn neurons(&self) -> &[Neuron] {
        &self.neurons
    }

    pub fn width(&self) -> usize {
        self.neurons.len()
    }

    /// Stored scalar count: each neuron carries a, w (d entries), and b.
    pub fn param_count(&self) -> usize {
        self.neurons.len() * (self.dim + 2)
    }

    pub fn eval(&self, z: &[Scalar]) -> Result<Scalar> {
        if z.len() != self.dim {
            return Err(Error::DimMismatch { expected: self.dim, found: z.len() });
        }
        self.field.check_all(z, "evaluation point")?;
        let mut acc = ZERO;
        for n in &self.neurons {
            acc += n.a * self.activation.eval(pair(&n.w, z) + n.b)?;
        }
        Ok(acc)
    }

    /// Replaces sigma by its Taylor polynomial of degree `cutoff` and expands
    /// the result symbolically: `sum_k a_k sum_{j<=cutoff} alpha_j (<w_k,z> + b_k)^j`.
    /// For a polynomial activation of degree <= cutoff this is an identity.
    pub fn truncate_to_polynomial(&self, cutoff: usize) -> Result<MPoly> {
        let mut out = MPoly::zero(self.dim, self.field);
        for neuron in &self.neurons {
            // the affine argument as a degree-<=1 polynomial in z
            let mut linear = MPoly::zero(self.dim, self.field);
            for (i, &wi) in neuron.w.iter().enumerate() {
                linear.add_term(MultiIndex::unit(self.dim, i), wi.conj())?;
            }
            linear.add_term(MultiIndex::zero(self.dim), neuron.b)?;
            let mut power = MPoly::constant(self.dim, self.field, re(1.0))?;
            for j in 0..=cutoff {
                let alpha = self.activation.series_coefficient(j)?;
                if alpha.norm() != 0.0 {
                    out = out.add(&power.scale(neuron.a * alpha)?)?;
                }
                if j < cutoff {
                    power = power.mul(&linear)?;
                }
            }
        }
        Ok(out)
    }
}

pub(crate) fn guard_difference(order: usize, step: f64) -> Result<()> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::precondition(format!("difference step must be positive, got {step}")));
    }
    if order > MAX_DIFF_ORDER || step < MIN_DIFF_STEP {
        return Err(Error::CancellationGuard {
            order,
            step,
            max_order: MAX_DIFF_ORDER,
            min_step: MIN_DIFF_STEP,
        });
    }
    Ok(())
}

fn require_series(activation: &Activation) -> Result<()> {
    if activation.is_rectifier() {
        return Err(Error::NoSeries { activation: activation.name() });
    }
    Ok(())
}

fn sign(parity: usize) -> f64 {
    if parity % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// One-variable monomial from an order-m difference quotient in the weight:
/// the network `sum_{l=0}^m (-1)^(m-l) C(m,l) sigma(l gamma z) / (gamma^m m!)`
/// with m+1 neurons, which tends to `alpha_m z^m` as gamma -> 0 (alpha_m the
/// m-th series coefficient of sigma). With `pure` set the output is rescaled
/// by 1/alpha_m to approximate `z^m` itself, which requires alpha_m != 0.
pub fn build_monomial_1d(
    activation: &Activation,
    m: usize,
    gamma: f64,
    pure: bool,
) -> Result<ShallowNet> {
    require_series(activation)?;
    guard_difference(m, gamma)?;
    let field = activation.field();
    let scale = if pure {
        let alpha = activation.series_coefficient(m)?;
        if alpha.norm() == 0.0 {
            return Err(Error::ZeroCoefficient { index: m });
        }
        re(1.0) / alpha
    } else {
        re(1.0)
    };
    if m == 0 {
        // a single constant neuron: sigma(0) = alpha_0
        return ShallowNet::new(
            field,
            1,
            activation.clone(),
            vec![Neuron { a: scale, w: vec![ZERO], b: ZERO }],
        );
    }
    let denom = gamma.powi(m as i32) * factorial(m);
    let neurons = (0..=m)
        .map(|l| Neuron {
            a: scale * re(sign(m - l) * binomial(m, l) / denom),
            w: vec![re(l as f64 * gamma)],
            b: ZERO,
        })
        .collect();
    ShallowNet::new(field, 1, activation.clone(), neurons)
}

/// Coefficients of the two-level construction behind
/// [`build_monomial_via_higher`], exposed separately so the multivariate
/// builder can substitute a linear form for the scalar argument. Each entry
/// is (outer weight a, weight factor c, bias), describing the neuron
/// `a * sigma(c * u + bias)` in the scalar variable u.
fn higher_order_plan(
    activation: &Activation,
    m: usize,
    cap: usize,
    beta: f64,
    gamma: f64,
) -> Result<Vec<(Scalar, f64, Scalar)>> {
    require_series(activation)?;
    if cap < m {
        return Err(Error::precondition(format!(
            "target coefficient index {cap} must be at least the monomial degree {m}"
        )));
    }
    guard_difference(cap, gamma)?;
    if cap > m {
        guard_difference(cap - m, beta)?;
    }
    let alpha = activation.series_coefficient(cap)?;
    if alpha.norm() == 0.0 {
        return Err(Error::ZeroCoefficient { index: cap });
    }
    // z^m = m!/(alpha_M M!^2) * (order M-m quotient in z)(order M quotient in h)
    // of sigma(h z), both quotients taken forward with steps beta and gamma.
    // Shifting z by n*beta inside sigma(l gamma z) shifts the argument by
    // l*n*gamma*beta, hence the bias grid below.
    let prefactor = re(factorial(m) / (factorial(cap) * factorial(cap))) / alpha;
    let denom = beta.powi((cap - m) as i32) * gamma.powi(cap as i32);
    let mut plan = Vec::with_capacity((cap + 1) * (cap - m + 1));
    for n in 0..=(cap - m) {
        for l in 0..=cap {
            let coeff = sign(cap - l) * sign(cap - m - n) * binomial(cap, l) * binomial(cap - m, n)
                / denom;
            plan.push((
                prefactor * re(coeff),
                l as f64 * gamma,
                re(l as f64 * n as f64 * gamma * beta),
            ));
        }
    }
    Ok(plan)
}

/// One-variable monomial `z^m` built from a higher series coefficient: when
/// `alpha_m = 0` but `alpha_M != 0` for some `M = cap >= m`, the degree drops
/// from M to m through an extra order-(M-m) difference quotient in z. The
/// network has exactly (M+1)(M-m+1) neurons; for `cap == m` it reduces to
/// [`build_monomial_1d`] rescaled by `1/alpha_m`.
pub fn build_monomial_via_higher(
    activation: &Activation,
    m: usize,
    cap: usize,
    beta: f64,
    gamma: f64,
) -> Result<ShallowNet> {
    let plan = higher_order_plan(activation, m, cap, beta, gamma)?;
    let neurons = plan
        .into_iter()
        .map(|(a, c, bias)| Neuron { a, w: vec![re(c)], b: bias })
        .collect();
    ShallowNet::new(activation.field(), 1, activation.clone(), neurons)
}

/// Multivariate monomial `z^idx` (total degree q >= 1) via coordinate-wise
/// difference quotients: `z^idx` is `1/q!` times the mixed order-idx
/// derivative in h of `(<h, z>)^q` at h = 0, and `(<h, z>)^q` is a
/// one-variable monomial in the scalar `u = <h, z>` supplied by
/// [`build_monomial_via_higher`] at the smallest usable coefficient index.
/// Neuron count: product of (idx_i + 1) times the inner count.
pub fn build_monomial_multi(
    activation: &Activation,
    idx: &[u32],
    beta: f64,
    gamma: f64,
) -> Result<ShallowNet> {
    require_series(activation)?;
    let dim = idx.len();
    if dim == 0 {
        return Err(Error::precondition("monomial index must have at least one coordinate"));
    }
    let q: u32 = idx.iter().sum();
    if q == 0 {
        return Err(Error::precondition(
            "all-zero index: constants are handled by build_monomial_1d with m = 0",
        ));
    }
    for &mi in idx {
        guard_difference(mi as usize, beta)?;
    }
    if let Some(deg) = activation.polynomial_degree() {
        if deg < q as usize {
            return Err(Error::precondition(format!(
                "polynomial activation of degree {deg} cannot produce total degree {q}"
            )));
        }
    }
    let cap = activation.first_nonzero_coefficient(q as usize)?;
    let inner = higher_order_plan(activation, q as usize, cap, beta, gamma)?;

    // mixed forward difference in h over the grid j (0 <= j_i <= idx_i),
    // divided by beta^q and q!
    let outer_scale = 1.0 / (beta.powi(q as i32) * factorial(q as usize));
    let mut neurons = Vec::new();
    let mut j = vec![0u32; dim];
    loop {
        let mut coeff = outer_scale;
        for (i, (&ji, &mi)) in j.iter().zip(idx).enumerate() {
            let _ = i;
            coeff *= sign((mi - ji) as usize) * binomial(mi as usize, ji as usize);
        }
        for &(a, c, bias) in &inner {
            // sigma(c * <beta j, z> + bias): weight vector c * beta * j
            let w: Vec<Scalar> = j.iter().map(|&ji| re(c * beta * ji as f64)).collect();
            neurons.push(Neuron { a: a * re(coeff), w, b: bias });
        }
        // odometer over the index box
        let mut axis = dim;
        loop {
            if axis == 0 {
                return ShallowNet::new(activation.field(), dim, activation.clone(), neurons);
            }
            axis -= 1;
            j[axis] += 1;
            if j[axis] <= idx[axis] {
                break;
            }
            j[axis] = 0;
        }
    }
}

/// Shallow approximation of an arbitrary polynomial: one monomial block per
/// term, with the term coefficients folded into the outer weights. Constant
/// terms use a single sigma(0) neuron when alpha_0 != 0 and the higher-order
/// fallback along the first coordinate otherwise.
pub fn build_polynomial(
    activation: &Activation,
    p: &MPoly,
    beta: f64,
    gamma: f64,
) -> Result<ShallowNet> {
    require_series(activation)?;
    activation.field().require(p.field())?;
    if p.is_zero() {
        return ShallowNet::new(p.field(), p.dim(), activation.clone(), vec![]);
    }
    if let (Some(deg), Some(p_deg)) = (activation.polynomial_degree(), p.total_degree()) {
        if deg < p_deg as usize {
            return Err(Error::precondition(format!(
                "polynomial activation of degree {deg} cannot reach target degree {p_deg}"
            )));
        }
    }
    let dim = p.dim();
    let mut neurons = Vec::new();
    for (e, c) in p.terms_graded() {
        if e.degree() == 0 {
            let alpha0 = activation.series_coefficient(0)?;
            if alpha0.norm() != 0.0 {
                neurons.push(Neuron { a: c / alpha0, w: vec![ZERO; dim], b: ZERO });
            } else {
                // constants from a higher coefficient, probing along axis 0
                let cap = activation.first_nonzero_coefficient(0)?;
                for (a, w1, bias) in higher_order_plan(activation, 0, cap, beta, gamma)? {
                    let mut w = vec![ZERO; dim];
                    w[0] = re(w1);
                    neurons.push(Neuron { a: a * c, w, b: bias });
                }
            }
        } else {
            let block = build_monomial_multi(activation, &e.0, beta, gamma)?;
            for n in block.neurons() {
                neurons.push(Neuron { a: n.a * c, w: n.w.clone(), b: n.b });
            }
        }
    }
    ShallowNet::new(p.field(), dim, activation.clone(), neurons)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::scalar;
    use crate::grid::{sup_norm_diff, BoxGrid};

    fn grid_1d(field: FieldTag) -> BoxGrid {
        BoxGrid::symmetric_with_samples(field, 1, 1.0, 101).unwrap()
    }

    fn monomial_error(net: &ShallowNet, m: u32, scale: Scalar, grid: &BoxGrid) -> f64 {
        sup_norm_diff(
            |z| net.eval(z),
            |z| Ok(scale * z[0].powi(m as i32)),
            grid,
        )
        .unwrap()
    }

    #[test]
    fn eval_uses_conjugating_pairing() {
        let net = ShallowNet::new(
            FieldTag::Complex,
            1,
            Activation::identity(FieldTag::Complex),
            vec![Neuron { a: re(1.0), w: vec![scalar(0.0, 1.0)], b: ZERO }],
        )
        .unwrap();
        // conj(i) * i = 1
        assert_eq!(net.eval(&[scalar(0.0, 1.0)]).unwrap(), re(1.0));
    }

    #[test]
    fn eval_rejects_wrong_dimension_and_tag() {
        let net = build_monomial_1d(&Activation::exp(FieldTag::Real), 1, 1e-3, false).unwrap();
        assert!(net.eval(&[re(0.5), re(0.5)]).is_err());
        assert!(net.eval(&[scalar(0.5, 0.5)]).is_err());
    }

    #[test]
    fn monomial_1d_neuron_count_and_degree_zero() {
        let act = Activation::exp(FieldTag::Real);
        for m in 0..=4 {
            let net = build_monomial_1d(&act, m, 1e-3, false).unwrap();
            assert_eq!(net.width(), m + 1);
        }
        let constant = build_monomial_1d(&act, 0, 1e-3, true).unwrap();
        assert_eq!(constant.eval(&[re(0.7)]).unwrap(), re(1.0));
    }

    #[test]
    fn monomial_1d_converges_for_exp() {
        let act = Activation::exp(FieldTag::Real);
        let grid = grid_1d(FieldTag::Real);
        for m in 1..=3u32 {
            let alpha = act.series_coefficient(m as usize).unwrap();
            let coarse = build_monomial_1d(&act, m as usize, 1e-2, false).unwrap();
            let fine = build_monomial_1d(&act, m as usize, 5e-3, false).unwrap();
            let e_coarse = monomial_error(&coarse, m, alpha, &grid);
            let e_fine = monomial_error(&fine, m, alpha, &grid);
            assert!(e_fine < e_coarse, "m={m}: {e_fine} !< {e_coarse}");
            // first-order quotient: halving gamma roughly halves the error
            assert!(e_fine / e_coarse <= 0.6, "m={m}: ratio {}", e_fine / e_coarse);
        }
    }

    #[test]
    fn monomial_1d_complex_tag_converges_too() {
        let act = Activation::exp(FieldTag::Complex);
        let grid = BoxGrid::symmetric_with_samples(FieldTag::Complex, 1, 1.0, 41).unwrap();
        let net = build_monomial_1d(&act, 2, 1e-3, true).unwrap();
        let err = monomial_error(&net, 2, re(1.0), &grid);
        assert!(err < 5e-3, "sup error {err}");
    }

    #[test]
    fn monomial_1d_guards() {
        let act = Activation::exp(FieldTag::Real);
        assert!(matches!(
            build_monomial_1d(&act, 7, 1e-3, false),
            Err(Error::CancellationGuard { .. })
        ));
        assert!(matches!(
            build_monomial_1d(&act, 2, 1e-5, false),
            Err(Error::CancellationGuard { .. })
        ));
        assert!(build_monomial_1d(&Activation::relu(), 2, 1e-3, false).is_err());
        // sin has alpha_2 = 0, so the pure flag must be refused at m = 2
        assert!(matches!(
            build_monomial_1d(&Activation::sin(FieldTag::Real), 2, 1e-3, true),
            Err(Error::ZeroCoefficient { index: 2 })
        ));
    }

    #[test]
    fn via_higher_neuron_count() {
        let act = Activation::sin(FieldTag::Real);
        // alpha_2 = 0 for sin; use M = 3
        let net = build_monomial_via_higher(&act, 2, 3, 1e-2, 1e-2).unwrap();
        assert_eq!(net.width(), 4 * 2);
    }

    #[test]
    fn via_higher_constant_from_square_activation_is_exact() {
        // second quotient of t^2 yields exactly the constant 1
        let act = Activation::monomial(2, FieldTag::Real);
        let net = build_monomial_via_higher(&act, 0, 2, 1e-3, 1e-3).unwrap();
        assert_eq!(net.width(), 3 * 3);
        for x in [-1.0, -0.3, 0.0, 0.8] {
            assert!((net.eval(&[re(x)]).unwrap() - re(1.0)).norm() < 1e-2);
        }
    }

    #[test]
    fn via_higher_linear_from_square_activation() {
        let act = Activation::monomial(2, FieldTag::Real);
        let grid = grid_1d(FieldTag::Real);
        let net = build_monomial_via_higher(&act, 1, 2, 1e-2, 1e-2).unwrap();
        let err = monomial_error(&net, 1, re(1.0), &grid);
        assert!(err <= 1e-1, "sup error {err}");
        // halving beta halves the error (the beta quotient carries the bias)
        let finer = build_monomial_via_higher(&act, 1, 2, 5e-3, 1e-2).unwrap();
        let err_finer = monomial_error(&finer, 1, re(1.0), &grid);
        assert!(err_finer / err < 0.6, "ratio {}", err_finer / err);
    }

    #[test]
    fn via_higher_reduces_to_rescaled_first_construction() {
        let act = Activation::exp(FieldTag::Real);
        let direct = build_monomial_1d(&act, 2, 1e-3, true).unwrap();
        let via = build_monomial_via_higher(&act, 2, 2, 1e-3, 1e-3).unwrap();
        assert_eq!(via.width(), 3);
        for (a, b) in direct.neurons().iter().zip(via.neurons()) {
            assert!((a.a - b.a).norm() < 1e-9 * a.a.norm());
            assert_eq!(a.w, b.w);
            assert_eq!(a.b, b.b);
        }
    }

    #[test]
    fn multi_neuron_count_is_the_product() {
        let act = Activation::exp(FieldTag::Real);
        let net = build_monomial_multi(&act, &[1, 1], 1e-3, 1e-3).unwrap();
        // inner: q = 2, cap = 2 -> 3 neurons; outer: 2 * 2 indices
        assert_eq!(net.width(), 4 * 3);
    }

    #[test]
    fn multi_single_coordinate() {
        let act = Activation::exp(FieldTag::Real);
        let grid = BoxGrid::symmetric_with_samples(FieldTag::Real, 2, 1.0, 41).unwrap();
        let net = build_monomial_multi(&act, &[1, 0], 1e-3, 1e-3).unwrap();
        let err = sup_norm_diff(|z| net.eval(z), |z| Ok(z[0]), &grid).unwrap();
        assert!(err <= 1e-2, "sup error {err}");
    }

    #[test]
    fn multi_cross_term() {
        let act = Activation::exp(FieldTag::Real);
        let grid = BoxGrid::symmetric_with_samples(FieldTag::Real, 2, 1.0, 41).unwrap();
        let net = build_monomial_multi(&act, &[1, 1], 1e-3, 1e-3).unwrap();
        let err = sup_norm_diff(|z| net.eval(z), |z| Ok(z[0] * z[1]), &grid).unwrap();
        assert!(err <= 5e-2, "sup error {err}");
    }

    #[test]
    fn multi_rejects_degenerate_requests() {
        let act = Activation::exp(FieldTag::Real);
        assert!(build_monomial_multi(&act, &[0, 0], 1e-3, 1e-3).is_err());
        assert!(build_monomial_multi(&act, &[], 1e-3, 1e-3).is_err());
        // degree-1 polynomial activation cannot produce degree 2
        let lin = Activation::identity(FieldTag::Real);
        assert!(build_monomial_multi(&lin, &[1, 1], 1e-2, 1e-2).is_err());
    }

    #[test]
    fn polynomial_builder_hits_complex_target() {
        // 3 z^2 over the complex field
        let p = MPoly::from_terms(1, FieldTag::Complex, [(vec![2], re(3.0))]).unwrap();
        let act = Activation::exp(FieldTag::Complex);
        let net = build_polynomial(&act, &p, 1e-3, 1e-3).unwrap();
        let grid = BoxGrid::symmetric_with_samples(FieldTag::Complex, 1, 1.0, 41).unwrap();
        let err = sup_norm_diff(|z| net.eval(z), |z| p.eval(z), &grid).unwrap();
        assert!(err <= 3e-2, "sup error {err}");
    }

    #[test]
    fn polynomial_builder_constant_path_without_alpha0() {
        // sin(0) = 0, so constants must come from the higher-order fallback
        let p = MPoly::from_terms(1, FieldTag::Real, [(vec![0], re(2.0))]).unwrap();
        let act = Activation::sin(FieldTag::Real);
        let net = build_polynomial(&act, &p, 1e-2, 1e-2).unwrap();
        let err = monomial_error(&net, 0, re(2.0), &grid_1d(FieldTag::Real));
        assert!(err <= 1e-1, "sup error {err}");
    }

    #[test]
    fn truncation_identity_for_polynomial_activation() {
        // sigma = t^3: truncating at 3 reproduces the network exactly
        let act = Activation::monomial(3, FieldTag::Real);
        let net = ShallowNet::new(
            FieldTag::Real,
            2,
            act,
            vec![
                Neuron { a: re(2.0), w: vec![re(0.5), re(-1.0)], b: re(0.3) },
                Neuron { a: re(-1.0), w: vec![re(1.5), re(0.25)], b: re(-0.7) },
            ],
        )
        .unwrap();
        let p = net.truncate_to_polynomial(3).unwrap();
        for point in [[0.3, -0.8], [1.0, 1.0], [-0.2, 0.6]] {
            let z = [re(point[0]), re(point[1])];
            let lhs = net.eval(&z).unwrap();
            let rhs = p.eval(&z).unwrap();
            assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
        }
    }

    #[test]
    fn truncation_of_exp_degree_one() {
        // one neuron, sigma = exp, truncate after the linear term:
        // a * (1 + (<w,z> + b))
        let net = ShallowNet::new(
            FieldTag::Real,
            1,
            Activation::exp(FieldTag::Real),
            vec![Neuron { a: re(2.0), w: vec![re(3.0)], b: re(0.5) }],
        )
        .unwrap();
        let p = net.truncate_to_polynomial(1).unwrap();
        assert_eq!(p.coefficient(&MultiIndex(vec![0])), re(3.0));
        assert_eq!(p.coefficient(&MultiIndex(vec![1])), re(6.0));
    }

    #[test]
    fn truncation_conjugates_complex_weights() {
        let net = ShallowNet::new(
            FieldTag::Complex,
            1,
            Activation::identity(FieldTag::Complex),
            vec![Neuron { a: re(1.0), w: vec![scalar(0.0, 1.0)], b: ZERO }],
        )
        .unwrap();
        let p = net.truncate_to_polynomial(1).unwrap();
        assert_eq!(p.coefficient(&MultiIndex(vec![1])), scalar(0.0, -1.0));
    }

    #[test]
    fn truncation_refuses_rectifiers() {
        let net = ShallowNet::new(
            FieldTag::Real,
            1,
            Activation::relu(),
            vec![Neuron { a: re(1.0), w: vec![re(1.0)], b: ZERO }],
        )
        .unwrap();
        assert!(net.truncate_to_polynomial(2).is_err());
    }

    #[test]
    fn param_count_formula() {
        let act = Activation::exp(FieldTag::Real);
        let net = build_monomial_1d(&act, 3, 1e-3, false).unwrap();
        assert_eq!(net.param_count(), 4 * 3);
    }
}
