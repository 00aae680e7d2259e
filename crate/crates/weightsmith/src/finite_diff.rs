//! Finite-difference machinery shared by the builders and the verification
//! harness.

use crate::activation::binomial;
use crate::field::{re, Scalar};

/// Forward-difference quotient of order `m`: returns the function
///
/// ```text
/// t -> gamma^-m * sum_{l=0}^{m} (-1)^(m-l) C(m,l) f(base + t + l*gamma)
/// ```
///
/// which tends to the m-th derivative of `f` at `base + t` as `gamma -> 0`.
/// With `base = -m*gamma/2` the stencil is centered and the error improves
/// from O(gamma) to O(gamma^2). `m = 0` gives back `f` shifted by `base`.
pub fn iterated_difference<F>(f: F, m: usize, gamma: f64, base: Scalar) -> impl Fn(Scalar) -> Scalar
where
    F: Fn(Scalar) -> Scalar,
{
    let signed: Vec<f64> = (0..=m)
        .map(|l| {
            let sign = if (m - l) % 2 == 0 { 1.0 } else { -1.0 };
            sign * binomial(m, l)
        })
        .collect();
    let scale = gamma.powi(m as i32);
    move |t: Scalar| {
        let mut acc = Scalar::new(0.0, 0.0);
        for (l, &c) in signed.iter().enumerate() {
            acc += re(c) * f(base + t + re(l as f64 * gamma));
        }
        acc / re(scale)
    }
}

/// Five-point (per axis three-point) finite-difference Laplacian
/// `sum_i [f(x + h e_i) - 2 f(x) + f(x - h e_i)] / h^2` at a real point.
pub fn laplacian<F>(f: &F, x: &[f64], h: f64) -> f64
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    let center = f(x);
    let mut acc = 0.0;
    let mut probe = x.to_vec();
    for i in 0..x.len() {
        probe[i] = x[i] + h;
        let plus = f(&probe);
        probe[i] = x[i] - h;
        let minus = f(&probe);
        probe[i] = x[i];
        acc += plus - 2.0 * center + minus;
    }
    acc / (h * h)
}

/// Central first-difference quotient along one axis of a scalar-argument
/// function, used for derivative-order comparisons.
pub fn central_derivative<F>(f: &F, z: Scalar, h: f64) -> Scalar
where
    F: Fn(Scalar) -> Scalar + ?Sized,
{
    (f(z + re(h)) - f(z - re(h))) / re(2.0 * h)
}
