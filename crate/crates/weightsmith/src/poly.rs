//! Sparse multivariate polynomials over the tagged scalar field.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent multi-index, so iteration
//! order (and everything serialized from it) is deterministic. Zero
//! coefficients are never stored.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{re, FieldTag, Scalar, ZERO};

/// Exponent vector of a monomial. Ordering is lexicographic (derived), which
/// is enough for deterministic storage; graded orderings are built on top.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut e = vec![0; dim];
        e[axis] = 1;
        MultiIndex(e)
    }

    pub fn zero(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MPoly {
    dim: usize,
    field: FieldTag,
    terms: BTreeMap<MultiIndex, Scalar>,
}

impl MPoly {
    pub fn zero(dim: usize, field: FieldTag) -> Self {
        MPoly { dim, field, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, field: FieldTag, c: Scalar) -> Result<Self> {
        let mut p = MPoly::zero(dim, field);
        p.add_term(MultiIndex::zero(dim), c)?;
        Ok(p)
    }

    /// The coordinate polynomial z_axis.
    pub fn coordinate(dim: usize, field: FieldTag, axis: usize) -> Self {
        let mut p = MPoly::zero(dim, field);
        p.add_term(MultiIndex::unit(dim, axis), re(1.0)).expect("unit coefficient is legal");
        p
    }

    pub fn from_terms(
        dim: usize,
        field: FieldTag,
        terms: impl IntoIterator<Item = (Vec<u32>, Scalar)>,
    ) -> Result<Self> {
        let mut p = MPoly::zero(dim, field);
        for (exps, c) in terms {
            p.add_term(MultiIndex(exps), c)?;
        }
        Ok(p)
    }

    /// Adds `c * z^exponents`, merging with an existing term and dropping the
    /// entry if the merged coefficient is exactly zero.
    pub fn add_term(&mut self, exponents: MultiIndex, c: Scalar) -> Result<()> {
        if exponents.dim() != self.dim {
            return Err(Error::DimMismatch { expected: self.dim, found: exponents.dim() });
        }
        self.field.check(c, "polynomial coefficient")?;
        if c.norm() == 0.0 && !self.terms.contains_key(&exponents) {
            return Ok(());
        }
        let entry = self.terms.entry(exponents).or_insert(ZERO);
        *entry += c;
        if entry.norm() == 0.0 {
            let key = self
                .terms
                .iter()
                .find(|(_, v)| v.norm() == 0.0)
                .map(|(k, _)| k.clone())
                .expect("zero entry just created");
            self.terms.remove(&key);
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exponents: &MultiIndex) -> Scalar {
        self.terms.get(exponents).copied().unwrap_or(ZERO)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::degree).max()
    }

    pub fn is_homogeneous_of_degree(&self, j: u32) -> bool {
        !self.terms.is_empty() && self.terms.keys().all(|e| e.degree() == j)
    }

    pub fn eval(&self, z: &[Scalar]) -> Result<Scalar> {
        if z.len() != self.dim {
            return Err(Error::DimMismatch { expected: self.dim, found: z.len() });
        }
        self.field.check_all(z, "evaluation point")?;
        let mut acc = ZERO;
        for (e, &c) in &self.terms {
            let mut term = c;
            for (i, &exp) in e.0.iter().enumerate() {
                term *= z[i].powi(exp as i32);
            }
            acc += term;
        }
        Ok(acc)
    }

    pub fn add(&self, other: &MPoly) -> Result<MPoly> {
        self.field.require(other.field)?;
        if self.dim != other.dim {
            return Err(Error::DimMismatch { expected: self.dim, found: other.dim });
        }
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: Scalar) -> Result<MPoly> {
        self.field.check(c, "scale factor")?;
        let mut out = MPoly::zero(self.dim, self.field);
        for (e, &v) in &self.terms {
            out.add_term(e.clone(), v * c)?;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &MPoly) -> Result<MPoly> {
        self.field.require(other.field)?;
        if self.dim != other.dim {
            return Err(Error::DimMismatch { expected: self.dim, found: other.dim });
        }
        let mut out = MPoly::zero(self.dim, self.field);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let exps: Vec<u32> =
                    ea.0.iter().zip(&eb.0).map(|(x, y)| x + y).collect();
                out.add_term(MultiIndex(exps), ca * cb)?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<MPoly> {
        let mut out = MPoly::constant(self.dim, self.field, re(1.0))?;
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Partial derivative with respect to coordinate `axis`.
    pub fn partial_derivative(&self, axis: usize) -> Result<MPoly> {
        if axis >= self.dim {
            return Err(Error::DimMismatch { expected: self.dim, found: axis + 1 });
        }
        let mut out = MPoly::zero(self.dim, self.field);
        for (e, &c) in &self.terms {
            let k = e.0[axis];
            if k == 0 {
                continue;
            }
            let mut exps = e.0.clone();
            exps[axis] -= 1;
            out.add_term(MultiIndex(exps), c * re(k as f64))?;
        }
        Ok(out)
    }

    /// Symbolic Laplacian, the sum of the pure second partials. Real tag only.
    pub fn laplacian(&self) -> Result<MPoly> {
        self.field.require(FieldTag::Real)?;
        let mut out = MPoly::zero(self.dim, self.field);
        for (e, &c) in &self.terms {
            for axis in 0..self.dim {
                let k = e.0[axis];
                if k < 2 {
                    continue;
                }
                let mut exps = e.0.clone();
                exps[axis] -= 2;
                out.add_term(MultiIndex(exps), c * re((k * (k - 1)) as f64))?;
            }
        }
        Ok(out)
    }

    /// Substitutes each variable u_i by the linear form sum_j m\[i\]\[j\] * x_j,
    /// i.e. returns p(M x). `m` has one row per variable of `self`; the row
    /// length sets the dimension of the result.
    pub fn compose_linear(&self, m: &[Vec<f64>]) -> Result<MPoly> {
        if m.len() != self.dim {
            return Err(Error::DimMismatch { expected: self.dim, found: m.len() });
        }
        let new_dim = m.first().map_or(0, Vec::len);
        if m.iter().any(|row| row.len() != new_dim) {
            return Err(Error::precondition("substitution matrix rows have unequal lengths"));
        }
        let forms: Vec<MPoly> = m
            .iter()
            .map(|row| {
                let mut f = MPoly::zero(new_dim, self.field);
                for (j, &v) in row.iter().enumerate() {
                    f.add_term(MultiIndex::unit(new_dim, j), re(v))?;
                }
                Ok(f)
            })
            .collect::<Result<_>>()?;
        let mut out = MPoly::zero(new_dim, self.field);
        for (e, &c) in &self.terms {
            let mut term = MPoly::constant(new_dim, self.field, c)?;
            for (i, &exp) in e.0.iter().enumerate() {
                if exp > 0 {
                    term = term.mul(&forms[i].pow(exp)?)?;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Terms sorted for block construction: ascending total degree, then
    /// descending lexicographic exponent order within a degree.
    pub fn terms_graded(&self) -> Vec<(MultiIndex, Scalar)> {
        let mut v: Vec<(MultiIndex, Scalar)> =
            self.terms.iter().map(|(e, c)| (e.clone(), *c)).collect();
        v.sort_by(|(a, _), (b, _)| {
            a.degree().cmp(&b.degree()).then_with(|| b.cmp(a))
        });
        v
    }
}

impl std::fmt::Display for MPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms_graded() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.im == 0.0 {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "({}+{}i)", c.re, c.im)?;
            }
            for (i, &exp) in e.0.iter().enumerate() {
                if exp == 1 {
                    write!(f, "*z{}", i + 1)?;
                } else if exp > 1 {
                    write!(f, "*z{}^{}", i + 1, exp)?;
                }
            }
        }
        Ok(())
    }
}
