//! Numerical complex analysis and interpolation checks: circle contour
//! integrals and the obstruction they witness (a function holomorphic on an
//! annulus whose moment against z^(k-1) no polynomial can reproduce),
//! Lagrange interpolation with its equidistant-node failure mode, C^k error
//! measurement by finite differences, and convergence-study tabulation for
//! the weight builders.

use crate::activation::Activation;
use crate::deep::{mlp_from_shallow, resnet_poly_general};
use crate::error::{Error, Result};
use crate::field::{re, FieldTag, Scalar};
use crate::grid::{sup_norm_diff, BoxGrid};
use crate::poly::MPoly;
use crate::shallow::{build_monomial_1d, Neuron, ShallowNet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DEFAULT_CONTOUR_NODES: usize = 256;
const MIN_CONTOUR_NODES: usize = 8;

/// A circle in the complex plane together with a quadrature density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    center: Scalar,
    radius: f64,
    nodes: usize,
}

impl ContourSpec {
    pub fn new(center: Scalar, radius: f64, nodes: usize) -> Result<Self> {
        if !center.is_finite() || !radius.is_finite() {
            return Err(Error::NonFinite("contour parameter"));
        }
        if radius <= 0.0 {
            return Err(Error::precondition(format!("contour radius must be positive, got {radius}")));
        }
        if nodes < MIN_CONTOUR_NODES {
            return Err(Error::precondition(format!(
                "need at least {MIN_CONTOUR_NODES} quadrature nodes, got {nodes}"
            )));
        }
        Ok(ContourSpec { center, radius, nodes })
    }

    /// The unit circle about the origin at the default density.
    pub fn unit() -> Self {
        ContourSpec { center: Scalar::new(0.0, 0.0), radius: 1.0, nodes: DEFAULT_CONTOUR_NODES }
    }

    pub fn center(&self) -> Scalar {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }
}

/// Trapezoid-rule value of the moment integral `∮ z^(k-1) f(z) dz` over the
/// circle. Uniform angles make the rule spectrally accurate for integrands
/// analytic in an annulus around the contour, and exact for integer powers
/// z^m as long as m + k is not a multiple of the node count: in particular
/// `∮ z^(-1) dz = 2 pi i` comes out exactly and every polynomial moment with
/// small degree comes out exactly zero.
pub fn contour_integral<F>(f: F, spec: &ContourSpec, k: usize) -> Result<Scalar>
where
    F: Fn(Scalar) -> Scalar,
{
    if k == 0 {
        return Err(Error::precondition("moment exponent k must be at least 1"));
    }
    let n = spec.nodes;
    let mut acc = Scalar::new(0.0, 0.0);
    for s in 0..n {
        let theta = std::f64::consts::TAU * s as f64 / n as f64;
        let unit = Scalar::from_polar(1.0, theta);
        let z = spec.center + unit * re(spec.radius);
        let sample = z.powi(k as i32 - 1) * f(z);
        if !sample.is_finite() {
            return Err(Error::NonFinite("contour sample"));
        }
        // dz = i * radius * e^(i theta) dtheta
        acc += sample * Scalar::new(0.0, spec.radius) * unit;
    }
    Ok(acc * re(std::f64::consts::TAU / n as f64))
}

/// One measured moment in an obstruction report.
#[derive(Debug, Clone)]
pub struct ObstructionRow {
    pub label: String,
    pub integral: Scalar,
    pub magnitude: f64,
}

/// Moments of z^(-k) and of candidate polynomials against z^(k-1) on a
/// circle inside an annulus. The target row stays near 2 pi while every
/// polynomial row vanishes, so no uniform polynomial limit can reach the
/// target function on the annulus: the integrals of the approximants would
/// have to converge to a nonzero constant that each of them misses entirely.
/// The gap is reported as a raw integral difference rather than converted
/// into a sup-norm bound.
#[derive(Debug, Clone)]
pub struct ObstructionReport {
    pub k: usize,
    pub radius: f64,
    pub nodes: usize,
    pub target: ObstructionRow,
    pub candidates: Vec<ObstructionRow>,
    pub gap: f64,
}

/// Measures the moment gap on the circle of radius (r + R)/2: the target
/// `|∮ z^(k-1) z^(-k) dz| = 2 pi` against the vanishing polynomial moments.
/// Candidate polynomials must be complex and univariate.
pub fn cauchy_obstruction_report(
    k: usize,
    candidates: &[MPoly],
    inner_radius: f64,
    outer_radius: f64,
) -> Result<ObstructionReport> {
    if k == 0 {
        return Err(Error::precondition("moment exponent k must be at least 1"));
    }
    if !(inner_radius.is_finite() && outer_radius.is_finite())
        || inner_radius <= 0.0
        || outer_radius <= inner_radius
    {
        return Err(Error::precondition(format!(
            "need an annulus 0 < r < R, got r={inner_radius}, R={outer_radius}"
        )));
    }
    let radius = (inner_radius + outer_radius) / 2.0;
    let spec = ContourSpec::new(Scalar::new(0.0, 0.0), radius, DEFAULT_CONTOUR_NODES)?;
    let target_integral = contour_integral(|z| z.powi(-(k as i32)), &spec, k)?;
    let target = ObstructionRow {
        label: format!("z^-{k}"),
        integral: target_integral,
        magnitude: target_integral.norm(),
    };
    let mut rows = Vec::with_capacity(candidates.len());
    for p in candidates {
        FieldTag::Complex.require(p.field())?;
        if p.dim() != 1 {
            return Err(Error::DimMismatch { expected: 1, found: p.dim() });
        }
        let integral = contour_integral(
            |z| p.eval(&[z]).expect("univariate complex evaluation"),
            &spec,
            k,
        )?;
        rows.push(ObstructionRow {
            label: format!("{p}"),
            integral,
            magnitude: integral.norm(),
        });
    }
    let worst_candidate = rows.iter().map(|r| r.magnitude).fold(0.0_f64, f64::max);
    Ok(ObstructionReport {
        k,
        radius,
        nodes: spec.nodes(),
        gap: target.magnitude - worst_candidate,
        target,
        candidates: rows,
    })
}

/// Interpolating polynomial through distinct complex nodes, held in the
/// numerically stable barycentric form; expansion into monomial coefficients
/// is available on demand but ill-conditioned for many nodes.
#[derive(Debug, Clone)]
pub struct LagrangeInterpolant {
    nodes: Vec<Scalar>,
    values: Vec<Scalar>,
    weights: Vec<Scalar>,
}

pub fn lagrange_interpolate(points: &[(Scalar, Scalar)]) -> Result<LagrangeInterpolant> {
    if points.is_empty() {
        return Err(Error::precondition("need at least one interpolation point"));
    }
    for (z, y) in points {
        if !z.is_finite() || !y.is_finite() {
            return Err(Error::NonFinite("interpolation point"));
        }
    }
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if (points[i].0 - points[j].0).norm() == 0.0 {
                return Err(Error::precondition(format!(
                    "duplicate interpolation node {} at positions {i} and {j}",
                    points[i].0
                )));
            }
        }
    }
    let nodes: Vec<Scalar> = points.iter().map(|p| p.0).collect();
    let values: Vec<Scalar> = points.iter().map(|p| p.1).collect();
    let weights: Vec<Scalar> = (0..nodes.len())
        .map(|i| {
            let mut denom = Scalar::new(1.0, 0.0);
            for j in 0..nodes.len() {
                if j != i {
                    denom *= nodes[i] - nodes[j];
                }
            }
            re(1.0) / denom
        })
        .collect();
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::NonFinite("barycentric weight"));
    }
    Ok(LagrangeInterpolant { nodes, values, weights })
}

impl LagrangeInterpolant {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[Scalar] {
        &self.nodes
    }

    /// Barycentric evaluation; exact node hits return the stored value.
    pub fn eval(&self, z: Scalar) -> Scalar {
        for (node, value) in self.nodes.iter().zip(&self.values) {
            if (z - node).norm() == 0.0 {
                return *value;
            }
        }
        let mut num = Scalar::new(0.0, 0.0);
        let mut den = Scalar::new(0.0, 0.0);
        for ((node, value), weight) in self.nodes.iter().zip(&self.values).zip(&self.weights) {
            let t = *weight / (z - node);
            num += t * value;
            den += t;
        }
        num / den
    }

    /// Expansion into a univariate complex polynomial. Monomial coefficients
    /// of high-degree interpolants are severely ill-conditioned, so node
    /// counts above 30 trigger a warning on stderr; prefer [`eval`] there.
    ///
    /// [`eval`]: LagrangeInterpolant::eval
    pub fn to_mpoly(&self) -> Result<MPoly> {
        if self.node_count() > 30 {
            eprintln!(
                "warning: expanding an interpolant through {} nodes into monomial \
                 coefficients is ill-conditioned; barycentric evaluation is reliable",
                self.node_count()
            );
        }
        let mut acc = MPoly::zero(1, FieldTag::Complex);
        for i in 0..self.nodes.len() {
            let mut cardinal = MPoly::constant(1, FieldTag::Complex, self.values[i] * self.weights[i])?;
            for (j, node) in self.nodes.iter().enumerate() {
                if j != i {
                    let factor = MPoly::from_terms(
                        1,
                        FieldTag::Complex,
                        [(vec![1], Scalar::new(1.0, 0.0)), (vec![0], -node)],
                    )?;
                    cardinal = cardinal.mul(&factor)?;
                }
            }
            acc = acc.add(&cardinal)?;
        }
        Ok(acc)
    }
}

/// One row of a convergence study: a parameter value, the measured sup
/// error, and the ratio to the previous row's error.
#[derive(Debug, Clone, Copy)]
pub struct ConvergenceRow {
    pub parameter: f64,
    pub sup_error: f64,
    pub ratio: Option<f64>,
}

/// Errors indexed by a strictly decreasing positive parameter (a step size,
/// a node spacing, a lane width), with successive ratios for rate reading.
#[derive(Debug, Clone)]
pub struct ConvergenceTable {
    parameter_name: String,
    rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    pub fn new(parameter_name: impl Into<String>, entries: Vec<(f64, f64)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::precondition("a convergence table needs at least one row"));
        }
        for (param, err) in &entries {
            if !(param.is_finite() && err.is_finite()) {
                return Err(Error::NonFinite("convergence table entry"));
            }
            if *err < 0.0 {
                return Err(Error::precondition("errors must be non-negative"));
            }
        }
        for pair in entries.windows(2) {
            if pair[1].0 >= pair[0].0 {
                return Err(Error::precondition(format!(
                    "parameters must decrease strictly, got {} after {}",
                    pair[1].0, pair[0].0
                )));
            }
        }
        let mut rows = Vec::with_capacity(entries.len());
        let mut prev: Option<f64> = None;
        for (parameter, sup_error) in entries {
            let ratio = match prev {
                Some(p) if p > 0.0 => Some(sup_error / p),
                _ => None,
            };
            rows.push(ConvergenceRow { parameter, sup_error, ratio });
            prev = Some(sup_error);
        }
        Ok(ConvergenceTable { parameter_name: parameter_name.into(), rows })
    }

    pub fn parameter_name(&self) -> &str {
        &self.parameter_name
    }

    pub fn rows(&self) -> &[ConvergenceRow] {
        &self.rows
    }

    /// Largest successive error ratio, if any row has one.
    pub fn max_ratio(&self) -> Option<f64> {
        self.rows.iter().filter_map(|r| r.ratio).fold(None, |m, r| Some(m.map_or(r, |v: f64| v.max(r))))
    }

    pub fn errors_strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|p| p[1].sup_error < p[0].sup_error)
    }

    pub fn errors_strictly_increasing(&self) -> bool {
        self.rows.windows(2).all(|p| p[1].sup_error > p[0].sup_error)
    }
}

/// The classic witness for equidistant-node interpolation failure.
pub fn runge_witness(x: f64) -> f64 {
    1.0 / (1.0 + 25.0 * x * x)
}

/// Max interpolation error of the equidistant-node interpolant of
/// `1/(1+25x^2)` on [-1, 1], sampled on a fixed 1001-point grid, for each
/// node count. The table parameter is the node spacing 2/(N-1), so counts
/// must increase strictly; the errors famously increase right along with
/// them instead of converging.
pub fn runge_table(counts: &[usize]) -> Result<ConvergenceTable> {
    if counts.is_empty() {
        return Err(Error::precondition("need at least one node count"));
    }
    for pair in counts.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::precondition(
                "node counts must increase strictly so spacings decrease",
            ));
        }
    }
    let mut entries = Vec::with_capacity(counts.len());
    for &n in counts {
        if n < 2 {
            return Err(Error::precondition("interpolation needs at least two nodes"));
        }
        let step = 2.0 / (n as f64 - 1.0);
        let points: Vec<(Scalar, Scalar)> = (0..n)
            .map(|i| {
                let x = -1.0 + step * i as f64;
                (re(x), re(runge_witness(x)))
            })
            .collect();
        let interp = lagrange_interpolate(&points)?;
        let mut worst = 0.0_f64;
        for gi in 0..=1000 {
            let x = -1.0 + 2.0 * gi as f64 / 1000.0;
            worst = worst.max((interp.eval(re(x)) - re(runge_witness(x))).norm());
        }
        entries.push((step, worst));
    }
    ConvergenceTable::new("node-spacing", entries)
}

fn shifted(point: &[Scalar], field: FieldTag, axis: usize, delta: f64) -> Vec<Scalar> {
    let mut p = point.to_vec();
    match field {
        FieldTag::Real => p[axis] += re(delta),
        FieldTag::Complex => {
            let c = axis / 2;
            if axis % 2 == 0 {
                p[c] += re(delta);
            } else {
                p[c] += Scalar::new(0.0, delta);
            }
        }
    }
    p
}

/// Max finite-difference gap between f and g over the grid, across all
/// derivative orders up to k (central differences of step h along every real
/// axis, mixed second differences included). Order zero is exactly the grid
/// sup-norm difference. Points one or two steps outside the box are probed,
/// so both functions must tolerate a small margin around the grid.
pub fn ck_error<F, G>(f: F, g: G, k: usize, grid: &BoxGrid, h: f64) -> Result<f64>
where
    F: Fn(&[Scalar]) -> Result<Scalar>,
    G: Fn(&[Scalar]) -> Result<Scalar>,
{
    if k > 2 {
        return Err(Error::precondition(format!("derivative order must be 0, 1, or 2, got {k}")));
    }
    if k == 0 {
        return sup_norm_diff(f, g, grid);
    }
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::precondition(format!("difference step must be positive, got {h}")));
    }
    let field = grid.field();
    let axes = grid.axes();
    let diff = |p: &[Scalar]| -> Result<Scalar> { Ok(f(p)? - g(p)?) };
    let mut worst = 0.0_f64;
    let mut record = |v: Scalar| -> Result<()> {
        if !v.is_finite() {
            return Err(Error::NonFinite("finite-difference sample"));
        }
        worst = worst.max(v.norm());
        Ok(())
    };
    for point in grid.points() {
        record(diff(&point)?)?;
        for a in 0..axes {
            let plus = diff(&shifted(&point, field, a, h))?;
            let minus = diff(&shifted(&point, field, a, -h))?;
            record((plus - minus) * re(0.5 / h))?;
            if k == 2 {
                let center = diff(&point)?;
                record((plus - center * re(2.0) + minus) * re(1.0 / (h * h)))?;
                for b in (a + 1)..axes {
                    let pp = diff(&shifted(&shifted(&point, field, a, h), field, b, h))?;
                    let pm = diff(&shifted(&shifted(&point, field, a, h), field, b, -h))?;
                    let mp = diff(&shifted(&shifted(&point, field, a, -h), field, b, h))?;
                    let mm = diff(&shifted(&shifted(&point, field, a, -h), field, b, -h))?;
                    record((pp - pm - mp + mm) * re(0.25 / (h * h)))?;
                }
            }
        }
    }
    Ok(worst)
}

/// Fixed four-neuron shallow net (seeded generator, modest weights) used as
/// the reference source for embedding demonstrations and the `"mlp-embed"`
/// convergence study.
pub fn canonical_embedding_source(activation: &Activation, dim: usize) -> Result<ShallowNet> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let neurons = (0..4)
        .map(|_| Neuron {
            a: re(rng.gen_range(-0.2..0.2)),
            w: (0..dim).map(|_| re(rng.gen_range(-0.5..0.5))).collect(),
            b: re(rng.gen_range(-0.5..0.5)),
        })
        .collect();
    ShallowNet::new(activation.field(), dim, activation.clone(), neurons)
}

/// Runs one of the named weight builders across a strictly decreasing
/// parameter list and tabulates grid sup errors against the builder's own
/// target:
///
/// * `"shallow-monomial"` — [`build_monomial_1d`] at each difference step
///   gamma, against `alpha_degree * z^degree` (univariate grid required);
/// * `"resnet-poly-general"` — [`resnet_poly_general`] for the monomial
///   `z_1^degree` at each probe step h;
/// * `"mlp-embed"` — [`mlp_from_shallow`] of a fixed seeded four-neuron
///   network onto widths (2, 2) at each lane parameter eps.
pub fn convergence_study(
    builder: &str,
    activation: &Activation,
    degree: usize,
    params: &[f64],
    grid: &BoxGrid,
) -> Result<ConvergenceTable> {
    if params.is_empty() {
        return Err(Error::precondition("need at least one parameter value"));
    }
    if params.iter().any(|p| !(p.is_finite() && *p > 0.0)) {
        return Err(Error::precondition("study parameters must be positive"));
    }
    grid.field().require(activation.field())?;
    let mut entries = Vec::with_capacity(params.len());
    match builder {
        "shallow-monomial" => {
            if grid.dim() != 1 {
                return Err(Error::DimMismatch { expected: 1, found: grid.dim() });
            }
            let alpha = activation.series_coefficient(degree)?;
            for &gamma in params {
                let net = build_monomial_1d(activation, degree, gamma, false)?;
                let err = sup_norm_diff(
                    |z: &[Scalar]| net.eval(z),
                    |z: &[Scalar]| Ok(alpha * z[0].powi(degree as i32)),
                    grid,
                )?;
                entries.push((gamma, err));
            }
            ConvergenceTable::new("gamma", entries)
        }
        "resnet-poly-general" => {
            let mut exps = vec![0u32; grid.dim()];
            exps[0] = degree as u32;
            let target =
                MPoly::from_terms(grid.dim(), activation.field(), [(exps, re(1.0))])?;
            for &h in params {
                let net = resnet_poly_general(&target, activation, h, None)?;
                let err = sup_norm_diff(
                    |z: &[Scalar]| net.eval(z),
                    |z: &[Scalar]| target.eval(z),
                    grid,
                )?;
                entries.push((h, err));
            }
            ConvergenceTable::new("probe-step", entries)
        }
        "mlp-embed" => {
            let source = canonical_embedding_source(activation, grid.dim())?;
            for &eps in params {
                let net = mlp_from_shallow(&source, &[2, 2], eps, None)?;
                let err = sup_norm_diff(
                    |z: &[Scalar]| net.eval(z),
                    |z: &[Scalar]| source.eval(z),
                    grid,
                )?;
                entries.push((eps, err));
            }
            ConvergenceTable::new("lane-eps", entries)
        }
        other => Err(Error::Usage(format!(
            "unknown builder id '{other}'; expected shallow-monomial, \
             resnet-poly-general, or mlp-embed"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::MultiIndex;

    const TAU: f64 = std::f64::consts::TAU;

    fn two_pi_i() -> Scalar {
        Scalar::new(0.0, TAU)
    }

    #[test]
    fn contour_spec_validation() {
        assert!(ContourSpec::new(re(0.0), 1.0, 64).is_ok());
        assert!(ContourSpec::new(re(0.0), 0.0, 64).is_err());
        assert!(ContourSpec::new(re(0.0), -1.0, 64).is_err());
        assert!(ContourSpec::new(re(0.0), 1.0, 7).is_err());
        assert_eq!(ContourSpec::unit().nodes(), 256);
    }

    #[test]
    fn residue_moment_is_two_pi_i() {
        let spec = ContourSpec::unit();
        for k in 1..=3usize {
            let val = contour_integral(|z| z.powi(-(k as i32)), &spec, k).unwrap();
            assert!((val - two_pi_i()).norm() <= 1e-12, "k={k}: {val}");
        }
    }

    #[test]
    fn power_moments_vanish_except_at_minus_one() {
        let spec = ContourSpec::new(re(0.0), 1.0, 64).unwrap();
        for m in -4..=10i32 {
            let val = contour_integral(|z| z.powi(m), &spec, 1).unwrap();
            if m == -1 {
                assert!((val - two_pi_i()).norm() <= 1e-12);
            } else {
                assert!(val.norm() <= 1e-12, "m={m}: {val}");
            }
        }
        // same exactness off the unit radius
        let spec = ContourSpec::new(re(0.0), 0.75, 64).unwrap();
        let val = contour_integral(|z| z.powi(-1), &spec, 1).unwrap();
        assert!((val - two_pi_i()).norm() <= 1e-12);
    }

    #[test]
    fn polynomial_moments_vanish() {
        let spec = ContourSpec::new(re(0.0), 1.0, 64).unwrap();
        let val = contour_integral(|z| z.powi(3), &spec, 2).unwrap();
        assert!(val.norm() <= 1e-12);
        let val = contour_integral(|_| re(1.0), &spec, 1).unwrap();
        assert!(val.norm() <= 1e-12);
    }

    #[test]
    fn contour_rejects_poles_on_the_circle() {
        let spec = ContourSpec::unit();
        // the node at angle zero sits exactly on the pole z = 1
        let err = contour_integral(|z| re(1.0) / (z - re(1.0)), &spec, 1);
        assert!(err.is_err());
        assert!(contour_integral(|z| z, &spec, 0).is_err());
    }

    fn univariate(coeffs: &[(u32, Scalar)]) -> MPoly {
        MPoly::from_terms(1, FieldTag::Complex, coeffs.iter().map(|(e, c)| (vec![*e], *c)))
            .unwrap()
    }

    #[test]
    fn obstruction_report_shows_the_gap() {
        let polys = vec![
            univariate(&[(0, re(1.0))]),
            univariate(&[(1, re(1.0))]),
            univariate(&[(2, re(1.0))]),
        ];
        let report = cauchy_obstruction_report(1, &polys, 0.5, 2.0).unwrap();
        assert_eq!(report.radius, 1.25);
        assert!((report.target.magnitude - TAU).abs() <= 1e-10);
        for row in &report.candidates {
            assert!(row.magnitude <= 1e-12, "{}: {}", row.label, row.magnitude);
        }
        assert!((report.gap - TAU).abs() <= 1e-10);
        // deeper moments show the same structure
        let report = cauchy_obstruction_report(3, &polys, 0.5, 2.0).unwrap();
        assert!((report.target.magnitude - TAU).abs() <= 1e-10);
        assert!(report.candidates.iter().all(|r| r.magnitude <= 1e-12));
    }

    #[test]
    fn obstruction_report_edge_cases() {
        let report = cauchy_obstruction_report(2, &[], 0.5, 2.0).unwrap();
        assert!(report.candidates.is_empty());
        assert!((report.gap - TAU).abs() <= 1e-10);
        assert!(cauchy_obstruction_report(1, &[], 2.0, 0.5).is_err());
        assert!(cauchy_obstruction_report(1, &[], 0.0, 1.0).is_err());
        assert!(cauchy_obstruction_report(0, &[], 0.5, 2.0).is_err());
        // real-tagged or multivariate candidates are rejected
        let real_poly = MPoly::from_terms(1, FieldTag::Real, [(vec![1], re(1.0))]).unwrap();
        assert!(cauchy_obstruction_report(1, &[real_poly], 0.5, 2.0).is_err());
        let bivariate =
            MPoly::from_terms(2, FieldTag::Complex, [(vec![1, 0], re(1.0))]).unwrap();
        assert!(cauchy_obstruction_report(1, &[bivariate], 0.5, 2.0).is_err());
    }

    #[test]
    fn lagrange_reproduces_lines_and_parabolas() {
        let line = lagrange_interpolate(&[(re(0.0), re(1.0)), (re(1.0), re(3.0))]).unwrap();
        let p = line.to_mpoly().unwrap();
        assert!((p.coefficient(&MultiIndex(vec![0])) - re(1.0)).norm() <= 1e-12);
        assert!((p.coefficient(&MultiIndex(vec![1])) - re(2.0)).norm() <= 1e-12);
        let parabola = lagrange_interpolate(&[
            (re(-1.0), re(1.0)),
            (re(0.0), re(0.0)),
            (re(1.0), re(1.0)),
        ])
        .unwrap();
        let p = parabola.to_mpoly().unwrap();
        assert!((p.coefficient(&MultiIndex(vec![2])) - re(1.0)).norm() <= 1e-12);
        assert!(p.coefficient(&MultiIndex(vec![1])).norm() <= 1e-12);
        assert!(p.coefficient(&MultiIndex(vec![0])).norm() <= 1e-12);
    }

    #[test]
    fn lagrange_rejects_duplicates_and_hits_nodes() {
        assert!(lagrange_interpolate(&[(re(1.0), re(0.0)), (re(1.0), re(2.0))]).is_err());
        assert!(lagrange_interpolate(&[]).is_err());
        let interp = lagrange_interpolate(&[
            (re(0.25), re(7.0)),
            (re(0.5), re(-2.0)),
            (Scalar::new(0.0, 1.0), Scalar::new(3.0, 4.0)),
        ])
        .unwrap();
        assert_eq!(interp.eval(re(0.25)), re(7.0));
        assert_eq!(interp.eval(Scalar::new(0.0, 1.0)), Scalar::new(3.0, 4.0));
    }

    #[test]
    fn lagrange_reproduces_a_complex_polynomial_everywhere() {
        // degree 6 with complex coefficients, sampled at 7 distinct nodes
        let target = univariate(&[
            (0, Scalar::new(1.0, -0.5)),
            (2, Scalar::new(0.0, 2.0)),
            (5, Scalar::new(-1.5, 0.0)),
            (6, Scalar::new(0.25, 0.25)),
        ]);
        let nodes: Vec<Scalar> = (0..7)
            .map(|i| Scalar::from_polar(0.9, TAU * i as f64 / 7.0) + re(0.1))
            .collect();
        let points: Vec<(Scalar, Scalar)> =
            nodes.iter().map(|&z| (z, target.eval(&[z]).unwrap())).collect();
        let interp = lagrange_interpolate(&points).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let z = Scalar::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let want = target.eval(&[z]).unwrap();
            let got = interp.eval(z);
            let rel = (want - got).norm() / want.norm().max(1.0);
            assert!(rel <= 1e-10, "z={z}: rel={rel}");
        }
    }

    #[test]
    fn convergence_table_invariants() {
        let t = ConvergenceTable::new("h", vec![(0.1, 1.0), (0.05, 0.4), (0.025, 0.1)]).unwrap();
        assert_eq!(t.rows().len(), 3);
        assert_eq!(t.rows()[0].ratio, None);
        assert!((t.rows()[1].ratio.unwrap() - 0.4).abs() < 1e-15);
        assert!((t.max_ratio().unwrap() - 0.4).abs() < 1e-15);
        assert!(t.errors_strictly_decreasing());
        assert!(!t.errors_strictly_increasing());
        assert!(ConvergenceTable::new("h", vec![]).is_err());
        assert!(ConvergenceTable::new("h", vec![(0.1, 1.0), (0.1, 0.5)]).is_err());
        assert!(ConvergenceTable::new("h", vec![(0.05, 1.0), (0.1, 0.5)]).is_err());
        assert!(ConvergenceTable::new("h", vec![(0.1, -1.0)]).is_err());
        // a zero error leaves the next ratio undefined instead of infinite
        let t = ConvergenceTable::new("h", vec![(0.1, 0.0), (0.05, 0.0)]).unwrap();
        assert_eq!(t.rows()[1].ratio, None);
        assert_eq!(t.max_ratio(), None);
    }

    #[test]
    fn runge_errors_grow_with_node_count() {
        let table = runge_table(&[5, 9, 13]).unwrap();
        assert_eq!(table.parameter_name(), "node-spacing");
        assert!(table.errors_strictly_increasing());
        let errs: Vec<f64> = table.rows().iter().map(|r| r.sup_error).collect();
        // frozen oracle values from exact rational interpolation
        assert!((errs[0] - 0.43835262054180285).abs() <= 1e-9 * errs[0], "N=5: {}", errs[0]);
        assert!((errs[1] - 1.045173911783697).abs() <= 1e-9 * errs[1], "N=9: {}", errs[1]);
        assert!((errs[2] - 3.662996788618306).abs() <= 1e-9 * errs[2], "N=13: {}", errs[2]);
    }

    #[test]
    fn runge_secant_case_and_validation() {
        let table = runge_table(&[2]).unwrap();
        // two nodes give the constant 1/26, missing the peak by 25/26
        assert!((table.rows()[0].sup_error - 25.0 / 26.0).abs() <= 1e-12);
        assert!(runge_table(&[]).is_err());
        assert!(runge_table(&[1]).is_err());
        assert!(runge_table(&[9, 5]).is_err());
        assert!(runge_table(&[5, 5]).is_err());
    }

    #[test]
    fn interpolant_matches_runge_nodes() {
        let n = 11usize;
        let step = 2.0 / (n as f64 - 1.0);
        let points: Vec<(Scalar, Scalar)> = (0..n)
            .map(|i| {
                let x = -1.0 + step * i as f64;
                (re(x), re(runge_witness(x)))
            })
            .collect();
        let interp = lagrange_interpolate(&points).unwrap();
        for (z, y) in &points {
            let rel = (interp.eval(*z) - y).norm() / y.norm().max(1e-30);
            assert!(rel <= 1e-10);
        }
    }

    #[test]
    fn ck_error_order_zero_is_sup_norm() {
        let grid = BoxGrid::symmetric(FieldTag::Real, 1, 1.0).unwrap();
        let f = |z: &[Scalar]| Ok(z[0] * z[0]);
        let g = |z: &[Scalar]| Ok(z[0] * z[0] + re(0.25));
        let via_ck = ck_error(f, g, 0, &grid, 1e-3).unwrap();
        let via_sup = sup_norm_diff(f, g, &grid).unwrap();
        assert_eq!(via_ck, via_sup);
        assert_eq!(ck_error(f, f, 2, &grid, 1e-3).unwrap(), 0.0);
        assert!(ck_error(f, g, 3, &grid, 1e-3).is_err());
    }

    #[test]
    fn ck_error_sees_derivative_gaps_values_hide() {
        // f - g = sin(50x)/50: tiny in value, order one in first derivative
        let grid = BoxGrid::symmetric(FieldTag::Real, 1, 1.0).unwrap();
        let f = |z: &[Scalar]| Ok((z[0] * re(50.0)).sin() * re(0.02));
        let g = |_: &[Scalar]| Ok(re(0.0));
        let level = ck_error(f, g, 0, &grid, 1e-4).unwrap();
        let slope = ck_error(f, g, 1, &grid, 1e-4).unwrap();
        assert!(level <= 0.02 + 1e-12);
        assert!(slope > 0.9, "slope gap {slope}");
    }

    #[test]
    fn ck_error_tracks_monomial_nets() {
        let act = Activation::exp(FieldTag::Real);
        let grid = BoxGrid::symmetric(FieldTag::Real, 1, 1.0).unwrap();
        let target = |z: &[Scalar]| Ok(z[0] * z[0]);
        let mut previous = f64::INFINITY;
        for gamma in [1e-2, 1e-3] {
            let net = build_monomial_1d(&act, 2, gamma, true).unwrap();
            let err = ck_error(|z| net.eval(z), target, 1, &grid, 1e-4).unwrap();
            assert!(err <= 1e-1, "gamma={gamma}: {err}");
            assert!(err < previous);
            previous = err;
        }
    }

    #[test]
    fn study_shallow_monomial_halves_cleanly() {
        let act = Activation::exp(FieldTag::Real);
        let grid = BoxGrid::symmetric(FieldTag::Real, 1, 1.0).unwrap();
        let table =
            convergence_study("shallow-monomial", &act, 2, &[1e-2, 5e-3, 2.5e-3], &grid).unwrap();
        assert_eq!(table.parameter_name(), "gamma");
        assert!(table.max_ratio().unwrap() <= 0.6, "ratio {}", table.max_ratio().unwrap());
    }

    #[test]
    fn study_resnet_poly_general_is_second_order() {
        let act = Activation::exp(FieldTag::Real);
        let grid = BoxGrid::symmetric(FieldTag::Real, 1, 1.0).unwrap();
        let table =
            convergence_study("resnet-poly-general", &act, 2, &[1e-2, 5e-3], &grid).unwrap();
        assert!(table.max_ratio().unwrap() <= 0.3, "ratio {}", table.max_ratio().unwrap());
    }

    #[test]
    fn study_mlp_embed_shrinks_with_eps() {
        let act = Activation::exp(FieldTag::Real);
        let grid = BoxGrid::symmetric(FieldTag::Real, 2, 1.0).unwrap();
        let table =
            convergence_study("mlp-embed", &act, 0, &[1e-3, 5e-4, 2.5e-4], &grid).unwrap();
        assert!(table.max_ratio().unwrap() <= 0.6, "ratio {}", table.max_ratio().unwrap());
    }

    #[test]
    fn study_rejects_unknown_builders_and_bad_params() {
        let act = Activation::exp(FieldTag::Real);
        let grid = BoxGrid::symmetric(FieldTag::Real, 1, 1.0).unwrap();
        let err = convergence_study("mystery", &act, 2, &[1e-2], &grid).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(convergence_study("shallow-monomial", &act, 2, &[], &grid).is_err());
        assert!(convergence_study("shallow-monomial", &act, 2, &[-1.0], &grid).is_err());
        let complex_grid = BoxGrid::symmetric(FieldTag::Complex, 1, 1.0).unwrap();
        assert!(convergence_study("shallow-monomial", &act, 2, &[1e-2], &complex_grid).is_err());
    }
}
