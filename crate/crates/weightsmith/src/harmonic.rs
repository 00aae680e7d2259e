//! Harmonic building blocks: shallow networks whose terms compose a harmonic
//! activation with angle-preserving projections (and are therefore harmonic
//! themselves), plus the spherical machinery used to probe them — Gegenbauer
//! polynomials, zonal harmonics, bases of harmonic homogeneous polynomials,
//! rotation averages, and rotation-span rank checks. Everything here is real.

use crate::activation::binomial;
use crate::error::{Error, Result};
use crate::field::{re, FieldTag, Scalar};
use crate::finite_diff::laplacian;
use crate::linalg::{det, gram_rank, kernel_basis, solve};
use crate::poly::{MPoly, MultiIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

const ORTHO_TOL: f64 = 1e-12;
const UNIT_TOL: f64 = 1e-12;

/// A k x d real matrix with orthonormal rows (P P^T = I), so that composing
/// with it preserves the Laplacian up to the factor |rho|^2.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthProjection {
    rows: Vec<Vec<f64>>,
}

impl OrthProjection {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let k = rows.len();
        let d = rows.first().map_or(0, Vec::len);
        if k == 0 || d == 0 {
            return Err(Error::precondition("projection needs at least one row and column"));
        }
        if k > d {
            return Err(Error::precondition(format!(
                "cannot have {k} orthonormal rows in dimension {d}"
            )));
        }
        for row in &rows {
            if row.len() != d {
                return Err(Error::DimMismatch { expected: d, found: row.len() });
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite("projection entry"));
            }
        }
        for i in 0..k {
            for j in i..k {
                let dot: f64 = rows[i].iter().zip(&rows[j]).map(|(a, b)| a * b).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                if (dot - want).abs() > ORTHO_TOL {
                    return Err(Error::precondition(format!(
                        "rows {i} and {j} are not orthonormal: <r_i, r_j> = {dot:.3e}"
                    )));
                }
            }
        }
        Ok(OrthProjection { rows })
    }

    /// First k rows of the identity: the coordinate projection.
    pub fn axes(k: usize, d: usize) -> Result<Self> {
        if k == 0 || k > d {
            return Err(Error::precondition(format!("need 1 <= k <= d, got k={k}, d={d}")));
        }
        let rows = (0..k)
            .map(|i| {
                let mut row = vec![0.0; d];
                row[i] = 1.0;
                row
            })
            .collect();
        Ok(OrthProjection { rows })
    }

    pub fn out_dim(&self) -> usize {
        self.rows.len()
    }

    pub fn in_dim(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.in_dim() {
            return Err(Error::DimMismatch { expected: self.in_dim(), found: x.len() });
        }
        Ok(self.rows.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect())
    }
}

/// The inner function of a harmonic network term: a function on R^k meant to
/// be annihilated by the Laplacian. Polynomial forms are checked symbolically
/// at construction (with an explicit unchecked escape hatch for negative
/// controls); closures are taken on trust and caught by the finite-difference
/// verifier instead.
#[derive(Clone)]
pub enum HarmonicSigma {
    Poly(MPoly),
    /// (u, v) -> e^u cos v, the classic entire harmonic function on R^2.
    ExpCos,
    Custom {
        name: String,
        arg_dim: usize,
        f: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
    },
}

impl std::fmt::Debug for HarmonicSigma {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "HarmonicSigma({})", self.name())
    }
}

impl HarmonicSigma {
    /// Polynomial inner function; rejected unless its symbolic Laplacian is
    /// identically zero.
    pub fn poly(p: MPoly) -> Result<Self> {
        FieldTag::Real.require(p.field())?;
        let lap = p.laplacian()?;
        if !lap.is_zero() {
            return Err(Error::precondition(format!(
                "polynomial is not harmonic: Laplacian = {lap}"
            )));
        }
        Ok(HarmonicSigma::Poly(p))
    }

    /// Polynomial inner function without the harmonicity check — for negative
    /// controls that the verifier is supposed to flag.
    pub fn poly_unchecked(p: MPoly) -> Result<Self> {
        FieldTag::Real.require(p.field())?;
        Ok(HarmonicSigma::Poly(p))
    }

    pub fn exp_cos() -> Self {
        HarmonicSigma::ExpCos
    }

    pub fn custom(
        name: impl Into<String>,
        arg_dim: usize,
        f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        HarmonicSigma::Custom { name: name.into(), arg_dim, f: Arc::new(f) }
    }

    pub fn arg_dim(&self) -> usize {
        match self {
            HarmonicSigma::Poly(p) => p.dim(),
            HarmonicSigma::ExpCos => 2,
            HarmonicSigma::Custom { arg_dim, .. } => *arg_dim,
        }
    }

    pub fn name(&self) -> String {
        match self {
            HarmonicSigma::Poly(p) => format!("poly[{p}]"),
            HarmonicSigma::ExpCos => "exp-cos".into(),
            HarmonicSigma::Custom { name, .. } => name.clone(),
        }
    }

    /// `Some(laplacian == 0)` when a symbolic form is available.
    pub fn symbolically_harmonic(&self) -> Option<bool> {
        match self {
            HarmonicSigma::Poly(p) => {
                Some(p.laplacian().map(|l| l.is_zero()).unwrap_or(false))
            }
            _ => None,
        }
    }

    pub fn eval(&self, u: &[f64]) -> Result<f64> {
        if u.len() != self.arg_dim() {
            return Err(Error::DimMismatch { expected: self.arg_dim(), found: u.len() });
        }
        match self {
            HarmonicSigma::Poly(p) => {
                let z: Vec<Scalar> = u.iter().map(|&v| re(v)).collect();
                Ok(p.eval(&z)?.re)
            }
            HarmonicSigma::ExpCos => Ok(u[0].exp() * u[1].cos()),
            HarmonicSigma::Custom { f, .. } => Ok(f(u)),
        }
    }
}

/// One term `a * sigma(rho * P x + b)` of a harmonic network.
#[derive(Debug, Clone)]
pub struct HarmonicTerm {
    pub amplitude: f64,
    pub rho: f64,
    pub proj: OrthProjection,
    pub bias: Vec<f64>,
}

/// Shallow network of harmonic terms sharing one inner function: the scaling
/// by rho and the orthonormal projection keep every term harmonic, so the
/// whole sum is too.
#[derive(Debug, Clone)]
pub struct HarmonicNet {
    dim: usize,
    sigma: HarmonicSigma,
    terms: Vec<HarmonicTerm>,
}

impl HarmonicNet {
    pub fn new(dim: usize, sigma: HarmonicSigma, terms: Vec<HarmonicTerm>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::precondition("network needs at least one input coordinate"));
        }
        let k = sigma.arg_dim();
        for t in &terms {
            if t.proj.in_dim() != dim {
                return Err(Error::DimMismatch { expected: dim, found: t.proj.in_dim() });
            }
            if t.proj.out_dim() != k {
                return Err(Error::DimMismatch { expected: k, found: t.proj.out_dim() });
            }
            if t.bias.len() != k {
                return Err(Error::DimMismatch { expected: k, found: t.bias.len() });
            }
            if !(t.amplitude.is_finite() && t.rho.is_finite())
                || t.bias.iter().any(|v| !v.is_finite())
            {
                return Err(Error::NonFinite("harmonic term parameter"));
            }
        }
        Ok(HarmonicNet { dim, sigma, terms })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sigma(&self) -> &HarmonicSigma {
        &self.sigma
    }

    pub fn terms(&self) -> &[HarmonicTerm] {
        &self.terms
    }

    /// Stored parameters: per term one amplitude, one scale, the projection
    /// entries, and the bias entries.
    pub fn param_count(&self) -> usize {
        self.terms
            .iter()
            .map(|t| 2 + t.proj.out_dim() * t.proj.in_dim() + t.bias.len())
            .sum()
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimMismatch { expected: self.dim, found: x.len() });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("evaluation point"));
        }
        let mut acc = 0.0;
        for t in &self.terms {
            let mut u = t.proj.apply(x)?;
            for (ui, bi) in u.iter_mut().zip(&t.bias) {
                *ui = t.rho * *ui + bi;
            }
            acc += t.amplitude * self.sigma.eval(&u)?;
        }
        Ok(acc)
    }

    /// The same network with every term's bias shifted by `h` in coordinate
    /// `coord` — the probe behind [`bias_derivative_fd`].
    pub fn with_bias_shift(&self, coord: usize, h: f64) -> Result<HarmonicNet> {
        let k = self.sigma.arg_dim();
        if coord >= k {
            return Err(Error::DimMismatch { expected: k, found: coord + 1 });
        }
        let mut shifted = self.clone();
        for t in &mut shifted.terms {
            t.bias[coord] += h;
        }
        Ok(shifted)
    }
}

/// Maximum over the sample points of the absolute finite-difference Laplacian
/// of the network — the workhorse harmonicity check. Small output (on the
/// order of h^2 times a fourth-derivative scale) certifies harmonicity at the
/// samples; a large output flags a non-harmonic inner function.
pub fn verify_network_harmonic(net: &HarmonicNet, points: &[Vec<f64>], h: f64) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::precondition("need at least one sample point"));
    }
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::precondition(format!("probe step must be positive, got {h}")));
    }
    let mut worst = 0.0f64;
    for x in points {
        if x.len() != net.dim() {
            return Err(Error::DimMismatch { expected: net.dim(), found: x.len() });
        }
        let f = |y: &[f64]| net.eval(y).expect("validated sample point");
        let lap = laplacian(&f, x, h);
        if !lap.is_finite() {
            return Err(Error::NonFinite("finite-difference Laplacian"));
        }
        worst = worst.max(lap.abs());
    }
    Ok(worst)
}

/// Forward finite-difference derivative of the network in one bias
/// coordinate: a new function that is (approximately) harmonic whenever the
/// network is, since the bias shift commutes with the Laplacian.
pub fn bias_derivative_fd<'a>(
    net: &'a HarmonicNet,
    coord: usize,
    h: f64,
) -> Result<impl Fn(&[f64]) -> Result<f64> + 'a> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::precondition(format!("probe step must be positive, got {h}")));
    }
    let shifted = net.with_bias_shift(coord, h)?;
    Ok(move |x: &[f64]| Ok((shifted.eval(x)? - net.eval(x)?) / h))
}

// ---------------------------------------------------------------------------
// Seeded generators
// ---------------------------------------------------------------------------

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller from two uniforms in (0, 1]
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// k orthonormal rows in dimension d from Gram-Schmidt on Gaussian draws.
pub fn random_orthonormal_rows(rng: &mut ChaCha8Rng, k: usize, d: usize) -> Result<Vec<Vec<f64>>> {
    if k == 0 || k > d {
        return Err(Error::precondition(format!("need 1 <= k <= d, got k={k}, d={d}")));
    }
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(k);
    while rows.len() < k {
        let mut v: Vec<f64> = (0..d).map(|_| gaussian(rng)).collect();
        for prev in &rows {
            let dot: f64 = v.iter().zip(prev).map(|(a, b)| a * b).sum();
            for (vi, pi) in v.iter_mut().zip(prev) {
                *vi -= dot * pi;
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-6 {
            continue; // essentially impossible; redraw
        }
        for vi in &mut v {
            *vi /= norm;
        }
        rows.push(v);
    }
    Ok(rows)
}

/// Random rotation (orthogonal, determinant +1) from seeded Gaussian rows.
pub fn random_rotation(rng: &mut ChaCha8Rng, d: usize) -> Result<Vec<Vec<f64>>> {
    let mut rows = random_orthonormal_rows(rng, d, d)?;
    if det(rows.clone())? < 0.0 {
        for v in &mut rows[d - 1] {
            *v = -*v;
        }
    }
    Ok(rows)
}

/// Seeded harmonic network with moderate scales: 1-3 terms, rho in
/// [0.35, 0.6], amplitudes in [0.5, 1.5], biases in [-0.3, 0.3]. The scales
/// keep the fourth-derivative bound small enough that the h=1e-3
/// finite-difference Laplacian of a genuinely harmonic inner function stays
/// below 1e-5 on the unit box, while a non-harmonic control like u^2 yields
/// at least 2 * 0.5 * 0.35^2 > 0.1.
pub fn random_harmonic_net(seed: u64, dim: usize, sigma: HarmonicSigma) -> Result<HarmonicNet> {
    let k = sigma.arg_dim();
    if k > dim {
        return Err(Error::precondition(format!(
            "inner dimension {k} exceeds ambient dimension {dim}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_terms = rng.gen_range(1..=3);
    let mut terms = Vec::with_capacity(n_terms);
    for _ in 0..n_terms {
        let proj = OrthProjection::new(random_orthonormal_rows(&mut rng, k, dim)?)?;
        terms.push(HarmonicTerm {
            amplitude: rng.gen_range(0.5..1.5),
            rho: rng.gen_range(0.35..0.6),
            proj,
            bias: (0..k).map(|_| rng.gen_range(-0.3..0.3)).collect(),
        });
    }
    HarmonicNet::new(dim, sigma, terms)
}

/// Seeded sample points uniform in the centered box of half-width r.
pub fn seeded_box_points(seed: u64, count: usize, dim: usize, r: f64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (0..dim).map(|_| rng.gen_range(-r..r)).collect()).collect()
}

// ---------------------------------------------------------------------------
// Gegenbauer polynomials and zonal harmonics
// ---------------------------------------------------------------------------

/// Degree and weight of a Gegenbauer family; the weight lambda = (d-2)/2
/// ties the family to zonal harmonics on the sphere in R^d.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GegenbauerParams {
    pub n: usize,
    pub lambda: f64,
}

impl GegenbauerParams {
    pub fn from_dimension(n: usize, d: usize) -> Result<Self> {
        if d < 3 {
            return Err(Error::precondition(format!(
                "zonal machinery needs ambient dimension >= 3, got {d}"
            )));
        }
        Ok(GegenbauerParams { n, lambda: (d as f64 - 2.0) / 2.0 })
    }
}

/// Gegenbauer value by the three-term recurrence
/// `C_0 = 1, C_1 = 2 lambda t, n C_n = 2(n+lambda-1) t C_{n-1} - (n+2lambda-2) C_{n-2}`.
pub fn gegenbauer(n: usize, lambda: f64, t: f64) -> Result<f64> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::precondition(format!("need lambda > 0, got {lambda}")));
    }
    if !t.is_finite() {
        return Err(Error::NonFinite("Gegenbauer argument"));
    }
    if n == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * lambda * t;
    for k in 2..=n {
        let kf = k as f64;
        let next = (2.0 * (kf + lambda - 1.0) * t * cur - (kf + 2.0 * lambda - 2.0) * prev) / kf;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

fn check_unit(y: &[f64]) -> Result<()> {
    let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > UNIT_TOL {
        return Err(Error::precondition(format!("axis must be a unit vector, |y| = {norm:.15}")));
    }
    Ok(())
}

/// Zonal harmonic with axis y, extended from the sphere to all of R^d by
/// homogeneity: `|x|^n C_n^lambda(<x/|x|, y>)`, with the value at x = 0 taken
/// as the homogeneous limit (0 for n >= 1, the constant 1 for n = 0).
pub fn zonal_harmonic(n: usize, d: usize, y: &[f64], x: &[f64]) -> Result<f64> {
    let params = GegenbauerParams::from_dimension(n, d)?;
    if y.len() != d {
        return Err(Error::DimMismatch { expected: d, found: y.len() });
    }
    if x.len() != d {
        return Err(Error::DimMismatch { expected: d, found: x.len() });
    }
    check_unit(y)?;
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let cos_angle = x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>() / norm;
    Ok(norm.powi(n as i32) * gegenbauer(n, params.lambda, cos_angle)?)
}

// ---------------------------------------------------------------------------
// Harmonic homogeneous polynomials
// ---------------------------------------------------------------------------

/// All exponent vectors of total degree j in d variables, lexicographically
/// descending — a stable column order for coefficient matrices.
pub fn monomials_of_degree(d: usize, j: u32) -> Vec<MultiIndex> {
    fn rec(d: usize, j: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if d == 1 {
            prefix.push(j);
            out.push(MultiIndex(prefix.clone()));
            prefix.pop();
            return;
        }
        for first in (0..=j).rev() {
            prefix.push(first);
            rec(d - 1, j - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, j, &mut Vec::new(), &mut out);
    out
}

/// Dimension of the space of harmonic homogeneous polynomials of degree j in
/// d variables (2j + 1 when d = 3).
pub fn hp_dim(d: usize, j: u32) -> usize {
    match j {
        0 => 1,
        1 => d,
        _ => {
            let j = j as usize;
            (binomial(j + d - 1, d - 1) - binomial(j + d - 3, d - 1)).round() as usize
        }
    }
}

/// A positive integer multiple of the harmonic component of a homogeneous
/// polynomial: `sum_k c_k |x|^(2k) Lap^k q` with the rational coefficients
/// `c_0 = 1, c_(k+1) = -c_k / (2(k+1)(2j + d - 4 - 2k))` cleared to integers.
/// The scaling keeps every operation exact when q has integer coefficients,
/// so the result's Laplacian vanishes identically, not just approximately.
pub fn harmonic_projection_scaled(q: &MPoly) -> Result<MPoly> {
    FieldTag::Real.require(q.field())?;
    let d = q.dim();
    let Some(j) = q.total_degree() else {
        return Ok(MPoly::zero(d, FieldTag::Real));
    };
    if !q.is_homogeneous_of_degree(j) {
        return Err(Error::precondition("harmonic projection needs a homogeneous input"));
    }
    let steps = (j / 2) as usize;
    // factor_k = 2(k+1)(2j + d - 4 - 2k); all positive for j >= 2, d >= 1
    let factors: Vec<f64> = (0..steps)
        .map(|k| (2 * (k + 1)) as f64 * (2.0 * j as f64 + d as f64 - 4.0 - 2.0 * k as f64))
        .collect();
    let denom: f64 = factors.iter().product();
    let mut r2 = MPoly::zero(d, FieldTag::Real);
    for i in 0..d {
        let mut e = vec![0u32; d];
        e[i] = 2;
        r2.add_term(MultiIndex(e), re(1.0))?;
    }
    let mut acc = MPoly::zero(d, FieldTag::Real);
    let mut lap_power = q.clone();
    let mut coeff = denom;
    let mut r_power = MPoly::constant(d, FieldTag::Real, re(1.0))?;
    for k in 0..=steps {
        if lap_power.is_zero() {
            break;
        }
        acc = acc.add(&lap_power.mul(&r_power)?.scale(re(coeff))?)?;
        if k < steps {
            coeff = -coeff / factors[k];
            lap_power = lap_power.laplacian()?;
            r_power = r_power.mul(&r2)?;
        }
    }
    // tidy: divide out the integer gcd when every coefficient is an integer
    let coeffs: Vec<f64> = acc.terms().map(|(_, c)| c.re).collect();
    if !coeffs.is_empty()
        && coeffs.iter().all(|v| v.fract() == 0.0 && v.abs() < 9.0e15)
    {
        let mut g: i64 = 0;
        for v in &coeffs {
            let mut a = g.abs();
            let mut b = (*v as i64).abs();
            while b != 0 {
                (a, b) = (b, a % b);
            }
            g = a;
        }
        if g > 1 {
            acc = acc.scale(re(1.0 / g as f64))?;
        }
    }
    Ok(acc)
}

/// Basis of the harmonic homogeneous polynomials of degree j in d variables:
/// harmonic projections of the monomials whose exponent in the last variable
/// is at most one. (A harmonic polynomial is determined by its terms of
/// degree <= 1 in one chosen variable, so these projections are independent
/// and there are exactly as many as the space's dimension.) Coefficients are
/// exact integers, so each element's symbolic Laplacian is identically zero.
pub fn hp_basis(d: usize, j: u32) -> Result<Vec<MPoly>> {
    if d == 0 {
        return Err(Error::precondition("need at least one variable"));
    }
    monomials_of_degree(d, j)
        .into_iter()
        .filter(|e| e.0[d - 1] <= 1)
        .map(|e| {
            let q = MPoly::from_terms(d, FieldTag::Real, [(e.0, re(1.0))])?;
            harmonic_projection_scaled(&q)
        })
        .collect()
}

/// Dimension of the same space measured independently, as the kernel
/// dimension of the Laplacian's coefficient matrix: rows are degree-(j-2)
/// monomials, columns degree-j monomials, and the entry pattern comes from
/// `Lap(z^e) = sum_i e_i (e_i - 1) z^(e - 2 e_i)`.
pub fn hp_kernel_dim(d: usize, j: u32) -> Result<usize> {
    if d == 0 {
        return Err(Error::precondition("need at least one variable"));
    }
    let cols = monomials_of_degree(d, j);
    if j < 2 {
        return Ok(cols.len()); // every polynomial of degree < 2 is harmonic
    }
    let rows = monomials_of_degree(d, j - 2);
    let row_index: std::collections::HashMap<Vec<u32>, usize> =
        rows.iter().enumerate().map(|(i, e)| (e.0.clone(), i)).collect();
    let mut a = vec![vec![0.0; cols.len()]; rows.len()];
    for (c, e) in cols.iter().enumerate() {
        for i in 0..d {
            let ei = e.0[i];
            if ei >= 2 {
                let mut target = e.0.clone();
                target[i] -= 2;
                let r = row_index[&target];
                a[r][c] += (ei * (ei - 1)) as f64;
            }
        }
    }
    Ok(kernel_basis(a, cols.len(), 1e-12).len())
}

/// Splits a polynomial into its homogeneous parts, indexed by degree. The
/// zero polynomial yields an empty list; other entries may still be zero
/// polynomials when a degree is absent.
pub fn homogeneous_decompose(p: &MPoly) -> Vec<MPoly> {
    let Some(max_deg) = p.total_degree() else {
        return Vec::new();
    };
    let mut parts: Vec<MPoly> = (0..=max_deg).map(|_| MPoly::zero(p.dim(), p.field())).collect();
    for (e, &c) in p.terms() {
        parts[e.degree() as usize]
            .add_term(e.clone(), c)
            .expect("term splitting preserves validity");
    }
    parts
}

// ---------------------------------------------------------------------------
// Rotations
// ---------------------------------------------------------------------------

/// Rotation by angle theta about a unit axis y in R^3 (axis-angle formula).
pub fn rotation_about_axis(y: &[f64], theta: f64) -> Result<Vec<Vec<f64>>> {
    if y.len() != 3 {
        return Err(Error::DimMismatch { expected: 3, found: y.len() });
    }
    check_unit(y)?;
    let (s, c) = theta.sin_cos();
    let mut r = vec![vec![0.0; 3]; 3];
    let cross = [[0.0, -y[2], y[1]], [y[2], 0.0, -y[0]], [-y[1], y[0], 0.0]];
    for i in 0..3 {
        for j in 0..3 {
            let eye = if i == j { 1.0 } else { 0.0 };
            r[i][j] = c * eye + s * cross[i][j] + (1.0 - c) * y[i] * y[j];
        }
    }
    Ok(r)
}

/// Average of p over the circle of rotations about the axis y in R^3, by
/// uniform angle quadrature with `k_nodes` nodes — exact once `k_nodes`
/// exceeds twice the degree, because the integrand is a trigonometric
/// polynomial in the angle. For homogeneous harmonic p the result is
/// proportional to the zonal harmonic of the same degree about y.
pub fn rotation_average(p: &MPoly, y: &[f64], k_nodes: usize) -> Result<MPoly> {
    FieldTag::Real.require(p.field())?;
    if p.dim() != 3 {
        return Err(Error::precondition(
            "circle averaging is implemented for three variables, where the \
             stabilizer of an axis is a single circle",
        ));
    }
    let deg = p.total_degree().unwrap_or(0) as usize;
    if k_nodes < 2 * deg + 1 {
        return Err(Error::precondition(format!(
            "{k_nodes} quadrature nodes alias a degree-{deg} integrand; need at least {}",
            2 * deg + 1
        )));
    }
    let mut acc = MPoly::zero(3, FieldTag::Real);
    for s in 0..k_nodes {
        let theta = 2.0 * std::f64::consts::PI * s as f64 / k_nodes as f64;
        let rot = rotation_about_axis(y, theta)?;
        acc = acc.add(&p.compose_linear(&rot)?)?;
    }
    acc.scale(re(1.0 / k_nodes as f64))
}

/// Rank of the span of rotated copies of p inside the harmonic homogeneous
/// polynomials of its degree: p is rotated by `r_count` seeded random
/// rotations, every copy is expressed in hp_basis coordinates, and the rank
/// of the coordinate family is measured. For nonzero harmonic p this hits
/// the full dimension with overwhelming probability.
pub fn rotation_span_rank(
    p: &MPoly,
    d: usize,
    j: u32,
    r_count: usize,
    seed: u64,
) -> Result<usize> {
    FieldTag::Real.require(p.field())?;
    if p.dim() != d {
        return Err(Error::DimMismatch { expected: d, found: p.dim() });
    }
    if p.is_zero() {
        return Err(Error::precondition("the zero polynomial spans nothing"));
    }
    if !p.is_homogeneous_of_degree(j) {
        return Err(Error::precondition(format!("polynomial is not homogeneous of degree {j}")));
    }
    if !p.laplacian()?.is_zero() {
        return Err(Error::precondition("polynomial is not harmonic"));
    }
    let basis = hp_basis(d, j)?;
    let dim_v = basis.len();
    if r_count < dim_v {
        return Err(Error::precondition(format!(
            "{r_count} rotations cannot span a {dim_v}-dimensional space"
        )));
    }
    // columns: basis coefficients over the degree-j monomials
    let monos = monomials_of_degree(d, j);
    let mono_index: std::collections::HashMap<Vec<u32>, usize> =
        monos.iter().enumerate().map(|(i, e)| (e.0.clone(), i)).collect();
    let coeff_vector = |q: &MPoly| -> Vec<f64> {
        let mut v = vec![0.0; monos.len()];
        for (e, &c) in q.terms() {
            v[mono_index[&e.0]] = c.re;
        }
        v
    };
    let b: Vec<Vec<f64>> = basis.iter().map(coeff_vector).collect();
    // Gram matrix of the basis for the normal equations
    let gram: Vec<Vec<f64>> = (0..dim_v)
        .map(|i| {
            (0..dim_v)
                .map(|k| b[i].iter().zip(&b[k]).map(|(x, y)| x * y).sum())
                .collect()
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coords = Vec::with_capacity(r_count);
    for _ in 0..r_count {
        let rot = random_rotation(&mut rng, d)?;
        let q = p.compose_linear(&rot)?;
        let v = coeff_vector(&q);
        let rhs: Vec<f64> =
            (0..dim_v).map(|i| b[i].iter().zip(&v).map(|(x, y)| x * y).sum()).collect();
        let c = solve(gram.clone(), rhs).ok_or_else(|| {
            Error::precondition("harmonic basis Gram matrix is singular (unexpected)")
        })?;
        coords.push(c);
    }
    Ok(gram_rank(&coords, 1e-8))
}

/// Determinant test for a candidate fundamental system on the sphere: the
/// matrix of Gegenbauer values of pairwise inner products. A strictly
/// positive determinant certifies that the zonal harmonics centered at the
/// points form a basis; the point count should match the space dimension,
/// and a mismatch is reported rather than rejected.
#[derive(Debug, Clone, Copy)]
pub struct FundamentalSystem {
    pub det: f64,
    pub expected_count: usize,
    pub count_ok: bool,
}

pub fn fundamental_system_det(
    points: &[Vec<f64>],
    n: usize,
    lambda: f64,
) -> Result<FundamentalSystem> {
    if points.is_empty() {
        return Err(Error::precondition("need at least one point"));
    }
    let d = points[0].len();
    for y in points {
        if y.len() != d {
            return Err(Error::DimMismatch { expected: d, found: y.len() });
        }
        check_unit(y)?;
    }
    let m: Vec<Vec<f64>> = points
        .iter()
        .map(|yi| {
            points
                .iter()
                .map(|yj| {
                    let t: f64 = yi.iter().zip(yj).map(|(a, b)| a * b).sum();
                    gegenbauer(n, lambda, t)
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let determinant = det(m)?;
    let expected = hp_dim(d, n as u32);
    Ok(FundamentalSystem {
        det: determinant,
        expected_count: expected,
        count_ok: points.len() == expected,
    })
}
