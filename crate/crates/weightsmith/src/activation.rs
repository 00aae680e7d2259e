//! Activation functions.
//!
//! The menu is deliberately restricted to entire functions (plus the two
//! rectifier variants over the reals): every analytic family here has a power
//! series with infinite radius of convergence, which is what the monomial
//! constructions in [`crate::shallow`] lean on. Functions that are only
//! locally analytic (tanh, logistic) are out of scope.

use crate::error::{Error, Result};
use crate::field::{re, FieldTag, Scalar, ZERO};

#[derive(Debug, Clone, PartialEq)]
pub enum ActivationKind {
    Exp,
    Sin,
    Cos,
    Sinh,
    Cosh,
    /// Coefficients low degree first; the leading coefficient is nonzero.
    Polynomial(Vec<Scalar>),
    Relu,
    LeakyRelu(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Activation {
    kind: ActivationKind,
    field: FieldTag,
}

/// Series evaluation stops when a term falls below this relative size.
const SERIES_REL_CUTOFF: f64 = 1e-17;
/// ... or after this many terms, whichever comes first.
const SERIES_MAX_TERMS: usize = 200;

impl Activation {
    pub fn new(kind: ActivationKind, field: FieldTag) -> Result<Self> {
        match &kind {
            ActivationKind::Relu | ActivationKind::LeakyRelu(_) => {
                if field == FieldTag::Complex {
                    return Err(Error::precondition(
                        "rectifier activations are only defined over the reals",
                    ));
                }
                if let ActivationKind::LeakyRelu(s) = kind {
                    if !s.is_finite() {
                        return Err(Error::NonFinite("leaky slope"));
                    }
                }
            }
            ActivationKind::Polynomial(coeffs) => {
                field.check_all(coeffs, "polynomial activation coefficient")?;
                match coeffs.last() {
                    None => {
                        return Err(Error::precondition(
                            "polynomial activation needs at least one coefficient",
                        ))
                    }
                    Some(c) if c.norm() == 0.0 => {
                        return Err(Error::precondition(
                            "polynomial activation must have a nonzero leading coefficient",
                        ))
                    }
                    _ => {}
                }
            }
            _ => {}
        }
        Ok(Activation { kind, field })
    }

    pub fn exp(field: FieldTag) -> Self {
        Activation { kind: ActivationKind::Exp, field }
    }

    pub fn sin(field: FieldTag) -> Self {
        Activation { kind: ActivationKind::Sin, field }
    }

    pub fn cos(field: FieldTag) -> Self {
        Activation { kind: ActivationKind::Cos, field }
    }

    pub fn sinh(field: FieldTag) -> Self {
        Activation { kind: ActivationKind::Sinh, field }
    }

    pub fn cosh(field: FieldTag) -> Self {
        Activation { kind: ActivationKind::Cosh, field }
    }

    pub fn relu() -> Self {
        Activation { kind: ActivationKind::Relu, field: FieldTag::Real }
    }

    pub fn leaky_relu(slope: f64) -> Result<Self> {
        Activation::new(ActivationKind::LeakyRelu(slope), FieldTag::Real)
    }

    pub fn polynomial(coeffs: Vec<Scalar>, field: FieldTag) -> Result<Self> {
        Activation::new(ActivationKind::Polynomial(coeffs), field)
    }

    /// The monomial t^k as an activation.
    pub fn monomial(k: usize, field: FieldTag) -> Self {
        let mut coeffs = vec![ZERO; k + 1];
        coeffs[k] = re(1.0);
        Activation { kind: ActivationKind::Polynomial(coeffs), field }
    }

    /// The identity t as an activation.
    pub fn identity(field: FieldTag) -> Self {
        Activation::monomial(1, field)
    }

    pub fn kind(&self) -> &ActivationKind {
        &self.kind
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn is_rectifier(&self) -> bool {
        matches!(self.kind, ActivationKind::Relu | ActivationKind::LeakyRelu(_))
    }

    /// Degree if this is a polynomial activation.
    pub fn polynomial_degree(&self) -> Option<usize> {
        match &self.kind {
            ActivationKind::Polynomial(c) => Some(c.len() - 1),
            _ => None,
        }
    }

    pub fn eval(&self, z: Scalar) -> Result<Scalar> {
        self.field.check(z, "activation argument")?;
        Ok(match &self.kind {
            ActivationKind::Exp => z.exp(),
            ActivationKind::Sin => z.sin(),
            ActivationKind::Cos => z.cos(),
            ActivationKind::Sinh => z.sinh(),
            ActivationKind::Cosh => z.cosh(),
            ActivationKind::Polynomial(coeffs) => horner(coeffs, z),
            ActivationKind::Relu => re(z.re.max(0.0)),
            ActivationKind::LeakyRelu(s) => {
                if z.re >= 0.0 {
                    re(z.re)
                } else {
                    re(s * z.re)
                }
            }
        })
    }

    /// First derivative, in closed form. Not available for rectifiers.
    pub fn eval_deriv(&self, z: Scalar) -> Result<Scalar> {
        self.field.check(z, "activation argument")?;
        Ok(match &self.kind {
            ActivationKind::Exp => z.exp(),
            ActivationKind::Sin => z.cos(),
            ActivationKind::Cos => -z.sin(),
            ActivationKind::Sinh => z.cosh(),
            ActivationKind::Cosh => z.sinh(),
            ActivationKind::Polynomial(coeffs) => horner(&derive_coeffs(coeffs), z),
            _ => {
                return Err(Error::NoSeries { activation: self.name() });
            }
        })
    }

    /// Second derivative, in closed form. Not available for rectifiers.
    pub fn eval_deriv2(&self, z: Scalar) -> Result<Scalar> {
        self.field.check(z, "activation argument")?;
        Ok(match &self.kind {
            ActivationKind::Exp => z.exp(),
            ActivationKind::Sin => -z.sin(),
            ActivationKind::Cos => -z.cos(),
            ActivationKind::Sinh => z.sinh(),
            ActivationKind::Cosh => z.cosh(),
            ActivationKind::Polynomial(coeffs) => {
                horner(&derive_coeffs(&derive_coeffs(coeffs)), z)
            }
            _ => {
                return Err(Error::NoSeries { activation: self.name() });
            }
        })
    }

    /// k-th Taylor coefficient at the origin. Exact: 1/k! patterns for the
    /// analytic families, stored values for polynomials, an error for the
    /// rectifiers (which admit no series).
    pub fn series_coefficient(&self, k: usize) -> Result<Scalar> {
        let c = match &self.kind {
            ActivationKind::Exp => re(1.0 / factorial(k)),
            ActivationKind::Sin => {
                if k % 2 == 1 {
                    re(neg_pow((k - 1) / 2) / factorial(k))
                } else {
                    ZERO
                }
            }
            ActivationKind::Cos => {
                if k % 2 == 0 {
                    re(neg_pow(k / 2) / factorial(k))
                } else {
                    ZERO
                }
            }
            ActivationKind::Sinh => {
                if k % 2 == 1 {
                    re(1.0 / factorial(k))
                } else {
                    ZERO
                }
            }
            ActivationKind::Cosh => {
                if k % 2 == 0 {
                    re(1.0 / factorial(k))
                } else {
                    ZERO
                }
            }
            ActivationKind::Polynomial(coeffs) => coeffs.get(k).copied().unwrap_or(ZERO),
            ActivationKind::Relu | ActivationKind::LeakyRelu(_) => {
                return Err(Error::NoSeries { activation: self.name() });
            }
        };
        Ok(c)
    }

    /// Smallest index `k >= from` with a nonzero series coefficient. Scans up
    /// to index 64, which is far beyond anything the builders ask for.
    pub fn first_nonzero_coefficient(&self, from: usize) -> Result<usize> {
        const SCAN_LIMIT: usize = 64;
        for k in from..=SCAN_LIMIT {
            if self.series_coefficient(k)?.norm() != 0.0 {
                return Ok(k);
            }
        }
        Err(Error::NoUsableCoefficient { from, limit: SCAN_LIMIT })
    }

    /// Evaluates the power series directly. This is the fallback path and the
    /// oracle the closed forms are tested against; it terminates when a term
    /// drops below `1e-17` of the partial sum or after 200 terms.
    pub fn eval_series(&self, z: Scalar) -> Result<Scalar> {
        if self.is_rectifier() {
            return Err(Error::NoSeries { activation: self.name() });
        }
        self.field.check(z, "activation argument")?;
        // polynomials stop at their degree; the analytic families stop when a
        // nonzero term falls below the relative cutoff (zero coefficients,
        // e.g. every even one for sin, say nothing about the tail)
        let max_k = self.polynomial_degree().map_or(SERIES_MAX_TERMS, |d| d + 1);
        let mut sum = ZERO;
        let mut power = re(1.0); // z^k, built incrementally
        for k in 0..max_k {
            let term = self.series_coefficient(k)? * power;
            sum += term;
            if term.norm() != 0.0
                && term.norm() < SERIES_REL_CUTOFF * sum.norm().max(f64::MIN_POSITIVE)
            {
                break;
            }
            power *= z;
        }
        Ok(sum)
    }

    pub fn name(&self) -> String {
        match &self.kind {
            ActivationKind::Exp => "exp".into(),
            ActivationKind::Sin => "sin".into(),
            ActivationKind::Cos => "cos".into(),
            ActivationKind::Sinh => "sinh".into(),
            ActivationKind::Cosh => "cosh".into(),
            ActivationKind::Polynomial(c) => format!("polynomial of degree {}", c.len() - 1),
            ActivationKind::Relu => "relu".into(),
            ActivationKind::LeakyRelu(s) => format!("leaky-relu({s})"),
        }
    }
}

fn horner(coeffs: &[Scalar], z: Scalar) -> Scalar {
    let mut acc = ZERO;
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

fn derive_coeffs(coeffs: &[Scalar]) -> Vec<Scalar> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * re(k as f64))
        .collect()
}

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

fn neg_pow(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::scalar;

    const TOL: f64 = 1e-15;

    fn close(a: Scalar, b: Scalar, tol: f64) -> bool {
        (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0)
    }

    #[test]
    fn exp_at_zero_is_one() {
        let act = Activation::exp(FieldTag::Real);
        assert_eq!(act.eval(re(0.0)).unwrap(), re(1.0));
    }

    #[test]
    fn sin_of_i_is_i_sinh_one() {
        // series oracle pins the closed-form complex evaluation
        let act = Activation::sin(FieldTag::Complex);
        let z = scalar(0.0, 1.0);
        let expected = scalar(0.0, 1.0_f64.sinh());
        assert!(close(act.eval(z).unwrap(), expected, TOL));
        assert!(close(act.eval_series(z).unwrap(), expected, TOL));
    }

    #[test]
    fn closed_forms_match_series_on_sample_points() {
        let points = [re(0.3), re(-1.2), scalar(0.4, -0.7), scalar(-1.0, 1.0)];
        for act in [
            Activation::exp(FieldTag::Complex),
            Activation::sin(FieldTag::Complex),
            Activation::cos(FieldTag::Complex),
            Activation::sinh(FieldTag::Complex),
            Activation::cosh(FieldTag::Complex),
        ] {
            for &z in &points {
                let a = act.eval(z).unwrap();
                let b = act.eval_series(z).unwrap();
                assert!(close(a, b, 1e-15), "{}: {a} vs {b}", act.name());
            }
        }
    }

    #[test]
    fn relu_rejects_complex_tag_and_arguments() {
        assert!(Activation::new(ActivationKind::Relu, FieldTag::Complex).is_err());
        let act = Activation::relu();
        assert!(act.eval(scalar(1.0, 1.0)).is_err());
        assert_eq!(act.eval(re(-2.0)).unwrap(), re(0.0));
        assert_eq!(act.eval(re(3.0)).unwrap(), re(3.0));
    }

    #[test]
    fn leaky_relu_scales_negative_side() {
        let act = Activation::leaky_relu(0.1).unwrap();
        assert_eq!(act.eval(re(-2.0)).unwrap(), re(-0.2));
        assert_eq!(act.eval(re(2.0)).unwrap(), re(2.0));
    }

    #[test]
    fn relu_has_no_series() {
        assert!(Activation::relu().series_coefficient(0).is_err());
        assert!(Activation::relu().eval_series(re(0.5)).is_err());
    }

    #[test]
    fn polynomial_requires_nonzero_leading_coefficient() {
        assert!(Activation::polynomial(vec![re(1.0), ZERO], FieldTag::Real).is_err());
        assert!(Activation::polynomial(vec![], FieldTag::Real).is_err());
        assert!(Activation::polynomial(vec![ZERO, re(2.0)], FieldTag::Real).is_ok());
    }

    #[test]
    fn polynomial_eval_and_coefficients() {
        // 1 + 2t + 3t^2
        let act =
            Activation::polynomial(vec![re(1.0), re(2.0), re(3.0)], FieldTag::Real).unwrap();
        assert_eq!(act.eval(re(2.0)).unwrap(), re(17.0));
        assert_eq!(act.series_coefficient(1).unwrap(), re(2.0));
        assert_eq!(act.series_coefficient(7).unwrap(), ZERO);
        assert_eq!(act.polynomial_degree(), Some(2));
    }

    #[test]
    fn sin_coefficients_alternate_on_odd_indices() {
        let act = Activation::sin(FieldTag::Real);
        assert_eq!(act.series_coefficient(0).unwrap(), ZERO);
        assert_eq!(act.series_coefficient(1).unwrap(), re(1.0));
        assert_eq!(act.series_coefficient(2).unwrap(), ZERO);
        assert!(close(act.series_coefficient(3).unwrap(), re(-1.0 / 6.0), TOL));
        assert_eq!(act.first_nonzero_coefficient(2).unwrap(), 3);
    }

    #[test]
    fn derivatives_in_closed_form() {
        let act = Activation::cos(FieldTag::Real);
        assert!(close(act.eval_deriv(re(0.7)).unwrap(), re(-(0.7_f64.sin())), TOL));
        assert!(close(act.eval_deriv2(re(0.7)).unwrap(), re(-(0.7_f64.cos())), TOL));
        let poly = Activation::monomial(2, FieldTag::Real);
        assert_eq!(poly.eval_deriv(re(3.0)).unwrap(), re(6.0));
        assert_eq!(poly.eval_deriv2(re(3.0)).unwrap(), re(2.0));
    }

    #[test]
    fn binomial_and_factorial_small_values() {
        assert_eq!(factorial(0), 1.0);
        assert_eq!(factorial(5), 120.0);
        assert_eq!(binomial(6, 2), 15.0);
        assert_eq!(binomial(3, 5), 0.0);
    }
}
