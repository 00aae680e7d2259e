//! Sample grids for sup-norm estimates.
//!
//! A grid is the tensor product of equally spaced samples along every real
//! axis. A complex coordinate contributes two real axes (real and imaginary
//! part), so a complex box in d variables is sampled over 2d axes. All
//! sup norms taken over such grids are lower bounds for the true sup norm on
//! the box; tolerances in the tests are chosen with that in mind.

use crate::error::{Error, Result};
use crate::field::{FieldTag, Scalar};

#[derive(Debug, Clone)]
pub struct BoxGrid {
    field: FieldTag,
    dim: usize,
    /// Inclusive bounds per real axis: `dim` axes for a real grid,
    /// `2 * dim` axes (re, im interleaved per coordinate) for a complex one.
    lo: Vec<f64>,
    hi: Vec<f64>,
    samples_per_axis: usize,
}

impl BoxGrid {
    /// Default sampling density: 201 points per real axis, dropping to 41
    /// once three or more axes would otherwise make the grid explode.
    pub fn default_samples(axes: usize) -> usize {
        if axes >= 3 {
            41
        } else {
            201
        }
    }

    pub fn new_real(lo: Vec<f64>, hi: Vec<f64>, samples_per_axis: usize) -> Result<Self> {
        let dim = lo.len();
        Self::validate(&lo, &hi, dim, samples_per_axis)?;
        Ok(BoxGrid { field: FieldTag::Real, dim, lo, hi, samples_per_axis })
    }

    /// Complex box: per coordinate, bounds for the real part and for the
    /// imaginary part.
    pub fn new_complex(
        re_lo: Vec<f64>,
        re_hi: Vec<f64>,
        im_lo: Vec<f64>,
        im_hi: Vec<f64>,
        samples_per_axis: usize,
    ) -> Result<Self> {
        let dim = re_lo.len();
        if re_hi.len() != dim || im_lo.len() != dim || im_hi.len() != dim {
            return Err(Error::DimMismatch { expected: dim, found: re_hi.len() });
        }
        let mut lo = Vec::with_capacity(2 * dim);
        let mut hi = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            lo.push(re_lo[i]);
            hi.push(re_hi[i]);
            lo.push(im_lo[i]);
            hi.push(im_hi[i]);
        }
        Self::validate(&lo, &hi, dim, samples_per_axis)?;
        Ok(BoxGrid { field: FieldTag::Complex, dim, lo, hi, samples_per_axis })
    }

    /// The box [-r, r]^d (for complex grids, in both the real and imaginary
    /// direction of every coordinate) at the default sampling density.
    pub fn symmetric(field: FieldTag, dim: usize, r: f64) -> Result<Self> {
        let axes = match field {
            FieldTag::Real => dim,
            FieldTag::Complex => 2 * dim,
        };
        Self::symmetric_with_samples(field, dim, r, Self::default_samples(axes))
    }

    pub fn symmetric_with_samples(
        field: FieldTag,
        dim: usize,
        r: f64,
        samples_per_axis: usize,
    ) -> Result<Self> {
        let lo = vec![-r; dim];
        let hi = vec![r; dim];
        match field {
            FieldTag::Real => Self::new_real(lo, hi, samples_per_axis),
            FieldTag::Complex => {
                Self::new_complex(lo.clone(), hi.clone(), lo, hi, samples_per_axis)
            }
        }
    }

    fn validate(lo: &[f64], hi: &[f64], dim: usize, samples: usize) -> Result<()> {
        if dim == 0 {
            return Err(Error::precondition("grid needs at least one coordinate"));
        }
        if lo.len() != hi.len() {
            return Err(Error::DimMismatch { expected: lo.len(), found: hi.len() });
        }
        if samples < 2 {
            return Err(Error::precondition("grid needs at least two samples per axis"));
        }
        for (l, h) in lo.iter().zip(hi) {
            if !l.is_finite() || !h.is_finite() {
                return Err(Error::NonFinite("grid bound"));
            }
            if l >= h {
                return Err(Error::precondition(format!(
                    "grid bounds must satisfy lower < upper, got [{l}, {h}]"
                )));
            }
        }
        Ok(())
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn axes(&self) -> usize {
        self.lo.len()
    }

    pub fn samples_per_axis(&self) -> usize {
        self.samples_per_axis
    }

    pub fn len(&self) -> usize {
        self.samples_per_axis.pow(self.axes() as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Lower bounds per coordinate (real parts for complex grids), used by
    /// constructions that need a containing box rather than sample points.
    pub fn lower_real(&self) -> Vec<f64> {
        match self.field {
            FieldTag::Real => self.lo.clone(),
            FieldTag::Complex => self.lo.iter().step_by(2).copied().collect(),
        }
    }

    pub fn upper_real(&self) -> Vec<f64> {
        match self.field {
            FieldTag::Real => self.hi.clone(),
            FieldTag::Complex => self.hi.iter().step_by(2).copied().collect(),
        }
    }

    pub fn points(&self) -> GridIter<'_> {
        GridIter { grid: self, odometer: vec![0; self.axes()], done: false }
    }

    fn axis_value(&self, axis: usize, idx: usize) -> f64 {
        let t = idx as f64 / (self.samples_per_axis - 1) as f64;
        self.lo[axis] + t * (self.hi[axis] - self.lo[axis])
    }

    fn point_at(&self, odometer: &[usize]) -> Vec<Scalar> {
        match self.field {
            FieldTag::Real => (0..self.dim)
                .map(|i| Scalar::new(self.axis_value(i, odometer[i]), 0.0))
                .collect(),
            FieldTag::Complex => (0..self.dim)
                .map(|i| {
                    Scalar::new(
                        self.axis_value(2 * i, odometer[2 * i]),
                        self.axis_value(2 * i + 1, odometer[2 * i + 1]),
                    )
                })
                .collect(),
        }
    }
}

pub struct GridIter<'a> {
    grid: &'a BoxGrid,
    odometer: Vec<usize>,
    done: bool,
}

impl Iterator for GridIter<'_> {
    type Item = Vec<Scalar>;

    fn next(&mut self) -> Option<Vec<Scalar>> {
        if self.done {
            return None;
        }
        let point = self.grid.point_at(&self.odometer);
        // advance the odometer, last axis fastest
        let mut axis = self.odometer.len();
        loop {
            if axis == 0 {
                self.done = true;
                break;
            }
            axis -= 1;
            self.odometer[axis] += 1;
            if self.odometer[axis] < self.grid.samples_per_axis {
                break;
            }
            self.odometer[axis] = 0;
        }
        Some(point)
    }
}

/// Largest pointwise gap `max |f(x) - g(x)|` over the grid. A grid maximum is
/// a lower bound for the sup over the box.
pub fn sup_norm_diff<F, G>(f: F, g: G, grid: &BoxGrid) -> Result<f64>
where
    F: Fn(&[Scalar]) -> Result<Scalar>,
    G: Fn(&[Scalar]) -> Result<Scalar>,
{
    let mut worst = 0.0_f64;
    for point in grid.points() {
        let a = f(&point)?;
        let b = g(&point)?;
        let gap = (a - b).norm();
        if !gap.is_finite() {
            return Err(Error::NonFinite("sup-norm sample"));
        }
        worst = worst.max(gap);
    }
    Ok(worst)
}
