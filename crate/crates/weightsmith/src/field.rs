//! Scalar ground field handling.
//!
//! Every network, polynomial, and evaluation point in this crate carries
//! exactly one [`FieldTag`]. Scalars are stored as complex doubles in both
//! cases; under [`FieldTag::Real`] the imaginary part is pinned to zero and
//! checked wherever values enter a container. One code path then serves both
//! fields, with complex conjugation degenerating to the identity over the
//! reals.

use crate::error::{Error, Result};

pub type Scalar = num_complex::Complex<f64>;

/// Ground field marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldTag {
    Real,
    Complex,
}

impl FieldTag {
    /// Checks that `z` is a legal scalar for this field: finite, and purely
    /// real under the `Real` tag.
    pub fn check(&self, z: Scalar, what: &'static str) -> Result<()> {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::NonFinite(what));
        }
        if *self == FieldTag::Real && z.im != 0.0 {
            return Err(Error::TagMismatch {
                expected: FieldTag::Real,
                found: FieldTag::Complex,
            });
        }
        Ok(())
    }

    pub fn check_all(&self, zs: &[Scalar], what: &'static str) -> Result<()> {
        for &z in zs {
            self.check(z, what)?;
        }
        Ok(())
    }

    pub fn require(&self, other: FieldTag) -> Result<()> {
        if *self == other {
            Ok(())
        } else {
            Err(Error::TagMismatch {
                expected: *self,
                found: other,
            })
        }
    }
}

impl std::fmt::Display for FieldTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldTag::Real => write!(f, "R"),
            FieldTag::Complex => write!(f, "C"),
        }
    }
}

impl std::str::FromStr for FieldTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "R" | "r" | "real" => Ok(FieldTag::Real),
            "C" | "c" | "complex" => Ok(FieldTag::Complex),
            other => Err(Error::Usage(format!("unknown field {other:?}, expected R or C"))),
        }
    }
}

pub fn re(x: f64) -> Scalar {
    Scalar::new(x, 0.0)
}

pub fn scalar(re: f64, im: f64) -> Scalar {
    Scalar::new(re, im)
}

pub const ZERO: Scalar = Scalar::new(0.0, 0.0);
pub const ONE: Scalar = Scalar::new(1.0, 0.0);

/// Pairing used by shallow networks: sum of conj(w_i) * z_i. Over the reals
/// the conjugation is a no-op and this is the ordinary dot product.
pub fn pair(w: &[Scalar], z: &[Scalar]) -> Scalar {
    debug_assert_eq!(w.len(), z.len());
    w.iter().zip(z).map(|(wi, zi)| wi.conj() * zi).sum()
}

/// Plain (non-conjugating) dot product, used by the deep-network containers
/// whose matrices act by ordinary matrix multiplication.
pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Mixed absolute/relative gap, the comparison used throughout the tests:
/// |a-b| divided by max(1, |a|, |b|).
pub fn rel_gap(a: Scalar, b: Scalar) -> f64 {
    let denom = a.norm().max(b.norm()).max(1.0);
    (a - b).norm() / denom
}
