//! Finite-difference shape-operator oracles.
//!
//! Flat mode works on hypersurfaces of `Q^n x R` (or of `Q^n`) embedded in a
//! flat space with diagonal signature: the Levi-Civita connection of the
//! quadric is the tangential projection of the flat one, so `h_ab` is simply
//! `-<D_a N, x_b>` with `D` the flat derivative. Chart mode works in
//! coordinates `(t, y)` with an arbitrary metric and finite-difference
//! Christoffel symbols.

use crate::error::{Error, Result};
use crate::families::{FamilyKind, FamilySpec};
use crate::profile::Profile;
use crate::spaceform::{inner, ConformalChart, SpaceFormId};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

pub const DEFAULT_STEP: f64 = 1e-3;
pub const DEFAULT_TOLERANCE: f64 = 1e-4;
const MAX_CONDITION: f64 = 1e10;
/// Samples with `rho` this close to 1 are reported but not judged.
pub const SEAM_MARGIN: f64 = 1e-3;

/// Flat space `R^{m}` with signature `(eps, +, ..., +)` on the first
/// `quadric_dims` coordinates (which satisfy `<x, x> = eps`) and `+` on the
/// remaining ones.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlatAmbient {
    epsilon: i8,
    quadric_dims: usize,
    extra_dims: usize,
}

impl FlatAmbient {
    /// `Q^n x R`.
    pub fn product(space: SpaceFormId) -> Self {
        FlatAmbient {
            epsilon: space.epsilon(),
            quadric_dims: space.ambient_dim(),
            extra_dims: 1,
        }
    }

    /// `Q^n` alone.
    pub fn space_form(space: SpaceFormId) -> Self {
        FlatAmbient {
            epsilon: space.epsilon(),
            quadric_dims: space.ambient_dim(),
            extra_dims: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.quadric_dims + self.extra_dims
    }

    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        let k = self.quadric_dims;
        inner(self.epsilon, &u[..k], &v[..k])
            + u[k..].iter().zip(&v[k..]).map(|(a, b)| a * b).sum::<f64>()
    }

    fn lower(&self, v: &[f64]) -> Vec<f64> {
        let mut w = v.to_vec();
        if self.epsilon < 0 {
            w[0] = -w[0];
        }
        w
    }

    /// Normal of the quadric at `x`.
    fn radial(&self, x: &[f64]) -> Vec<f64> {
        let mut r = x.to_vec();
        r[self.quadric_dims..].iter_mut().for_each(|v| *v = 0.0);
        r
    }
}

/// A hypersurface of a [`FlatAmbient`] given by a local parametrization.
pub trait FlatSurface: Sync {
    fn ambient(&self) -> FlatAmbient;
    fn param_dim(&self) -> usize;
    fn point(&self, u: &[f64]) -> Result<Vec<f64>>;
    /// Normal used to fix the orientation, when one is known.
    fn reference_normal(&self, _u: &[f64]) -> Option<Vec<f64>> {
        None
    }
    /// Parameters of the stencil point `delta` away from `u` along direction
    /// `a`. Surfaces may override this with a better-conditioned local
    /// parametrization; derivatives are then taken with respect to it.
    fn displace(&self, u: &[f64], a: usize, delta: f64) -> Result<Vec<f64>> {
        Ok(shifted(u, a, delta))
    }
}

/// Metric components in a coordinate chart.
pub trait ChartMetric: Sync {
    fn dim(&self) -> usize;
    fn metric(&self, x: &[f64]) -> Result<DMatrix<f64>>;
}

/// A hypersurface given in the coordinates of a [`ChartMetric`].
pub trait ChartSurface: Sync {
    fn param_dim(&self) -> usize;
    fn point(&self, u: &[f64]) -> Result<Vec<f64>>;
    fn reference_normal(&self, _u: &[f64]) -> Option<Vec<f64>> {
        None
    }
    /// As [`FlatSurface::displace`].
    fn displace(&self, u: &[f64], a: usize, delta: f64) -> Result<Vec<f64>> {
        Ok(shifted(u, a, delta))
    }
}

#[derive(Clone, Debug)]
pub struct ShapeOperator {
    /// `g^{-1} h` in the parameter basis.
    pub operator: DMatrix<f64>,
    /// Sorted ascending.
    pub eigenvalues: Vec<f64>,
    pub metric: DMatrix<f64>,
    pub tangents: Vec<Vec<f64>>,
    pub normal: Vec<f64>,
}

fn shifted(u: &[f64], a: usize, delta: f64) -> Vec<f64> {
    let mut v = u.to_vec();
    v[a] += delta;
    v
}

fn tangents<P, D>(point: &P, displace: &D, u: &[f64], h: f64) -> Result<Vec<Vec<f64>>>
where
    P: Fn(&[f64]) -> Result<Vec<f64>>,
    D: Fn(&[f64], usize, f64) -> Result<Vec<f64>>,
{
    (0..u.len())
        .map(|a| {
            let p = point(&displace(u, a, h)?)?;
            let m = point(&displace(u, a, -h)?)?;
            Ok(p.iter().zip(&m).map(|(x, y)| (x - y) / (2.0 * h)).collect())
        })
        .collect()
}

/// Unit vector Euclidean-orthogonal to all `rows`, which must be linearly
/// independent and one fewer than the dimension.
fn euclidean_complement(rows: &[Vec<f64>]) -> Result<Vec<f64>> {
    let m = rows[0].len();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(rows.len());
    for r in rows {
        let mut v = r.clone();
        for _ in 0..2 {
            for b in &basis {
                let d: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let scale = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::Degenerate("tangent vectors are linearly dependent".into()));
        }
        basis.push(v.into_iter().map(|x| x / norm).collect());
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    for i in 0..m {
        let mut v = vec![0.0; m];
        v[i] = 1.0;
        for _ in 0..2 {
            for b in &basis {
                let d: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if best.as_ref().is_none_or(|(n, _)| norm > *n) {
            best = Some((norm, v));
        }
    }
    let (norm, v) = best.expect("nonempty");
    Ok(v.into_iter().map(|x| x / norm).collect())
}

/// Unit normal at `u`: `candidate` (or, without one, the Euclidean
/// complement of the lowered tangents) with its components along the tangents
/// and the quadric normal removed in the ambient metric. Projecting a nearby
/// candidate keeps the result accurate where the model coordinates are large.
fn flat_normal<S: FlatSurface + ?Sized>(
    surface: &S,
    u: &[f64],
    h: f64,
    candidate: Option<&[f64]>,
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let amb = surface.ambient();
    let x = surface.point(u)?;
    let tan = tangents(
        &|v: &[f64]| surface.point(v),
        &|v: &[f64], a, d| surface.displace(v, a, d),
        u,
        h,
    )?;
    let mut span = tan.clone();
    if amb.dim() == tan.len() + 2 {
        span.push(amb.radial(&x));
    }
    if span.len() + 1 != amb.dim() {
        return Err(Error::DimensionMismatch {
            expected: amb.dim() - 1,
            got: span.len(),
        });
    }
    let mut n = match candidate {
        Some(c) => c.to_vec(),
        None => euclidean_complement(&span.iter().map(|t| amb.lower(t)).collect::<Vec<_>>())?,
    };
    let k = span.len();
    let gram = DMatrix::from_fn(k, k, |i, j| amb.inner(&span[i], &span[j]));
    let lu = gram.lu();
    for _ in 0..2 {
        let rhs = DVector::from_fn(k, |i, _| amb.inner(&span[i], &n));
        let coeff = lu
            .solve(&rhs)
            .ok_or_else(|| Error::Degenerate("tangent vectors are linearly dependent".into()))?;
        for (w, c) in span.iter().zip(coeff.iter()) {
            n.iter_mut().zip(w).for_each(|(v, x)| *v -= c * x);
        }
    }
    let nn = amb.inner(&n, &n);
    if !(nn > 0.0) {
        return Err(Error::Degenerate("normal is not spacelike".into()));
    }
    let k = nn.sqrt();
    Ok((n.into_iter().map(|v| v / k).collect(), tan))
}

fn orient(n: &mut [f64], reference: &[f64], dot: impl Fn(&[f64], &[f64]) -> f64) {
    if dot(n, reference) < 0.0 {
        n.iter_mut().for_each(|v| *v = -*v);
    }
}

fn eigen_of(g: &DMatrix<f64>, hmat: &DMatrix<f64>) -> Result<(DMatrix<f64>, Vec<f64>)> {
    let ge = SymmetricEigen::new(g.clone());
    let (lo, hi) = ge
        .eigenvalues
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(l, h), &v| (l.min(v), h.max(v)));
    if !(lo > 0.0) || hi / lo > MAX_CONDITION {
        return Err(Error::Degenerate(format!(
            "first fundamental form is degenerate (eigenvalues {lo:e}..{hi:e})"
        )));
    }
    let chol = g
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Degenerate("first fundamental form not positive".into()))?;
    let l = chol.l();
    let linv = l
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Degenerate("singular Cholesky factor".into()))?;
    let whitened = &linv * hmat * linv.transpose();
    let sym = 0.5 * (&whitened + whitened.transpose());
    let mut eig: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    let operator = chol.solve(hmat);
    Ok((operator, eig))
}

/// Shape operator `A = -d N` of a hypersurface of a flat-embedded product
/// at parameters `u`, by central differences with step `h`.
pub fn shape_operator_flat<S: FlatSurface + ?Sized>(surface: &S, u: &[f64], h: f64) -> Result<ShapeOperator> {
    if u.len() != surface.param_dim() {
        return Err(Error::DimensionMismatch {
            expected: surface.param_dim(),
            got: u.len(),
        });
    }
    let amb = surface.ambient();
    let dot = |a: &[f64], b: &[f64]| amb.inner(a, b);
    let reference = surface.reference_normal(u);
    let (mut normal, tan) = flat_normal(surface, u, h, reference.as_deref())?;
    if let Some(r) = &reference {
        orient(&mut normal, r, dot);
    }
    let n = u.len();
    let mut dn = Vec::with_capacity(n);
    for a in 0..n {
        let (mut np, _) = flat_normal(surface, &surface.displace(u, a, h)?, h, Some(&normal))?;
        let (mut nm, _) = flat_normal(surface, &surface.displace(u, a, -h)?, h, Some(&normal))?;
        orient(&mut np, &normal, dot);
        orient(&mut nm, &normal, dot);
        dn.push(np.iter().zip(&nm).map(|(p, m)| (p - m) / (2.0 * h)).collect::<Vec<f64>>());
    }
    let g = DMatrix::from_fn(n, n, |a, b| amb.inner(&tan[a], &tan[b]));
    let hraw = DMatrix::from_fn(n, n, |a, b| -amb.inner(&dn[a], &tan[b]));
    let hmat = 0.5 * (&hraw + hraw.transpose());
    let (operator, eigenvalues) = eigen_of(&g, &hmat)?;
    Ok(ShapeOperator {
        operator,
        eigenvalues,
        metric: g,
        tangents: tan,
        normal,
    })
}

fn chart_normal<M, S>(metric: &M, surface: &S, u: &[f64], h: f64) -> Result<(Vec<f64>, Vec<Vec<f64>>, DMatrix<f64>)>
where
    M: ChartMetric + ?Sized,
    S: ChartSurface + ?Sized,
{
    let x = surface.point(u)?;
    let tan = tangents(
        &|v: &[f64]| surface.point(v),
        &|v: &[f64], a, d| surface.displace(v, a, d),
        u,
        h,
    )?;
    if tan.len() + 1 != metric.dim() {
        return Err(Error::DimensionMismatch {
            expected: metric.dim() - 1,
            got: tan.len(),
        });
    }
    let g = metric.metric(&x)?;
    let covector = DVector::from_vec(euclidean_complement(&tan)?);
    let ginv = g
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Degenerate("singular metric".into()))?;
    let raised = &ginv * &covector;
    let nn = covector.dot(&raised);
    if !(nn > 0.0) {
        return Err(Error::Degenerate("metric is not positive definite".into()));
    }
    let n = raised.iter().map(|v| v / nn.sqrt()).collect();
    Ok((n, tan, g))
}

/// `Gamma^k_ij` at `x` from central differences of the metric.
fn christoffel<M: ChartMetric + ?Sized>(metric: &M, x: &[f64], g: &DMatrix<f64>, h: f64) -> Result<Vec<DMatrix<f64>>> {
    let m = x.len();
    let mut dg = Vec::with_capacity(m);
    for l in 0..m {
        let p = metric.metric(&shifted(x, l, h))?;
        let q = metric.metric(&shifted(x, l, -h))?;
        dg.push((p - q) / (2.0 * h));
    }
    let ginv = g
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Degenerate("singular metric".into()))?;
    let lowered: Vec<DMatrix<f64>> = (0..m)
        .map(|l| DMatrix::from_fn(m, m, |i, j| 0.5 * (dg[i][(l, j)] + dg[j][(l, i)] - dg[l][(i, j)])))
        .collect();
    Ok((0..m)
        .map(|k| {
            DMatrix::from_fn(m, m, |i, j| (0..m).map(|l| ginv[(k, l)] * lowered[l][(i, j)]).sum())
        })
        .collect())
}

/// Shape operator of a hypersurface given in the coordinates of `metric`.
pub fn shape_operator_chart<M, S>(metric: &M, surface: &S, u: &[f64], h: f64) -> Result<ShapeOperator>
where
    M: ChartMetric + ?Sized,
    S: ChartSurface + ?Sized,
{
    if u.len() != surface.param_dim() {
        return Err(Error::DimensionMismatch {
            expected: surface.param_dim(),
            got: u.len(),
        });
    }
    let (mut normal, tan, g) = chart_normal(metric, surface, u, h)?;
    let gdot = |g: &DMatrix<f64>, a: &[f64], b: &[f64]| {
        let (a, b) = (DVector::from_column_slice(a), DVector::from_column_slice(b));
        a.dot(&(g * b))
    };
    if let Some(r) = surface.reference_normal(u) {
        orient(&mut normal, &r, |a, b| gdot(&g, a, b));
    }
    let x = surface.point(u)?;
    let gamma = christoffel(metric, &x, &g, h)?;
    let n = u.len();
    let m = x.len();
    let mut cov = Vec::with_capacity(n);
    for a in 0..n {
        let (mut np, _, _) = chart_normal(metric, surface, &surface.displace(u, a, h)?, h)?;
        let (mut nm, _, _) = chart_normal(metric, surface, &surface.displace(u, a, -h)?, h)?;
        orient(&mut np, &normal, |p, q| gdot(&g, p, q));
        orient(&mut nm, &normal, |p, q| gdot(&g, p, q));
        let d: Vec<f64> = (0..m)
            .map(|k| {
                let partial = (np[k] - nm[k]) / (2.0 * h);
                let conn: f64 = (0..m)
                    .flat_map(|i| (0..m).map(move |j| (i, j)))
                    .map(|(i, j)| gamma[k][(i, j)] * tan[a][i] * normal[j])
                    .sum();
                partial + conn
            })
            .collect();
        cov.push(d);
    }
    let gm = DMatrix::from_fn(n, n, |a, b| gdot(&g, &tan[a], &tan[b]));
    let hraw = DMatrix::from_fn(n, n, |a, b| -gdot(&g, &cov[a], &tan[b]));
    let hmat = 0.5 * (&hraw + hraw.transpose());
    let (operator, eigenvalues) = eigen_of(&gm, &hmat)?;
    Ok(ShapeOperator {
        operator,
        eigenvalues,
        metric: gm,
        tangents: tan,
        normal,
    })
}

/// `dt^2 + omega(t)^2 g_Q` in the conformal chart `(t, y)` of `Q^n`, where
/// `g_Q = 4 |dy|^2 / (1 + eps |y|^2)^2`.
#[derive(Clone)]
pub struct WarpedChartMetric {
    space: SpaceFormId,
    omega: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl WarpedChartMetric {
    pub fn new(space: SpaceFormId, omega: Arc<dyn Fn(f64) -> f64 + Send + Sync>) -> Self {
        WarpedChartMetric { space, omega }
    }

    /// The product metric `dt^2 + g_Q`.
    pub fn product(space: SpaceFormId) -> Self {
        Self::new(space, Arc::new(|_| 1.0))
    }
}

impl ChartMetric for WarpedChartMetric {
    fn dim(&self) -> usize {
        self.space.dim() + 1
    }

    fn metric(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        let m = self.dim();
        let y = &x[1..];
        let r2: f64 = y.iter().map(|v| v * v).sum();
        let denom = 1.0 + self.space.eps() * r2;
        if denom <= 1e-8 {
            return Err(Error::Degenerate("point at the boundary of the conformal chart".into()));
        }
        let w = (self.omega)(x[0]);
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::Degenerate(format!("warping function not positive at t = {}", x[0])));
        }
        let f = w * w * 4.0 / (denom * denom);
        Ok(DMatrix::from_fn(m, m, |i, j| match (i, j) {
            (0, 0) => 1.0,
            _ if i == j => f,
            _ => 0.0,
        }))
    }
}

/// Graph of a profile over its family, optionally with the height perturbed
/// by `amplitude * sin(sum of chart coordinates)`.
#[derive(Clone, Debug)]
pub struct GraphSurface {
    profile: Profile,
    amplitude: f64,
}

impl GraphSurface {
    pub fn new(profile: Profile) -> Self {
        GraphSurface { profile, amplitude: 0.0 }
    }

    pub fn perturbed(profile: Profile, amplitude: f64) -> Self {
        GraphSurface { profile, amplitude }
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    /// Oracle parameters of the point `(s, chart)`.
    pub fn params_of(&self, s: f64, chart: &[f64]) -> Vec<f64> {
        let mut params = vec![s];
        params.extend_from_slice(chart);
        params
    }

    /// Sample at `(s, chart)` with the analytic umbilical value attached.
    pub fn sample(&self, s: f64, chart: &[f64]) -> Result<SampleSpec> {
        let params = self.params_of(s, chart);
        let rho = self.profile.rho(s)?;
        Ok(SampleSpec {
            params,
            s: Some(s),
            analytic: Some(-rho * self.profile.lambda(s)?),
            near_seam: rho > 1.0 - SEAM_MARGIN,
        })
    }
}

impl FlatSurface for GraphSurface {
    fn ambient(&self) -> FlatAmbient {
        FlatAmbient::product(self.profile.family().space())
    }

    fn param_dim(&self) -> usize {
        self.profile.family().space().dim()
    }

    fn point(&self, u: &[f64]) -> Result<Vec<f64>> {
        let (s, chart) = (u[0], &u[1..]);
        let leaf = self.profile.family().eval_family(s, chart)?;
        let mut x = leaf.point.into_coords();
        let bump = if self.amplitude != 0.0 {
            self.amplitude * chart.iter().sum::<f64>().sin()
        } else {
            0.0
        };
        x.push(self.profile.phi(s)? + bump);
        Ok(x)
    }

    fn reference_normal(&self, u: &[f64]) -> Option<Vec<f64>> {
        crate::graph::eval_graph(&self.profile, u[0], &u[1..]).ok().map(|g| g.normal)
    }

    /// Along `s` the stencil steps in the inclination angle `psi` of the
    /// profile curve (`rho = sin psi`), which is proportional to arc length
    /// and stays regular where the graph turns vertical. Equidistant profiles
    /// are not monotone in `rho`; there, and right next to the ends, the step
    /// is `theta`-scaled `s`, arc length to first order.
    fn displace(&self, u: &[f64], a: usize, delta: f64) -> Result<Vec<f64>> {
        graph_displace(&self.profile, u, a, delta)
    }
}

/// Stencil displacement for graph parameters `(s, chart)`. Along `s` it
/// steps in the inclination angle `psi` of the profile curve
/// (`rho = sin psi`), which is proportional to arc length and stays regular
/// where the graph turns vertical. Equidistant profiles are not monotone in
/// `rho`; there, and right next to the ends, the step is `theta`-scaled `s`,
/// arc length to first order.
pub fn graph_displace(profile: &Profile, u: &[f64], a: usize, delta: f64) -> Result<Vec<f64>> {
    if a != 0 {
        return Ok(shifted(u, a, delta));
    }
    let s0 = u[0];
    let rho = profile.rho(s0)?;
    let psi = rho.asin();
    // the mode is fixed per family so that neighbouring stencils agree
    let margin = 0.02;
    let monotone = profile.family().kind() != FamilyKind::Equidistant;
    let s = if monotone && psi > margin && psi < FRAC_PI_2 - margin {
        profile.s_with_rho((psi + delta).sin(), s0)?
    } else {
        s0 + profile.theta(s0)? * delta
    };
    let mut v = u.to_vec();
    v[0] = s;
    Ok(v)
}

/// Vertical cylinder `f_s(M) x R` over one leaf; parameters `(chart, t)`.
#[derive(Clone, Debug)]
pub struct CylinderSurface {
    family: FamilySpec,
    s: f64,
}

impl CylinderSurface {
    pub fn new(family: FamilySpec, s: f64) -> Self {
        CylinderSurface { family, s }
    }

    pub fn leaf_parameter(&self) -> f64 {
        self.s
    }

    pub fn family(&self) -> &FamilySpec {
        &self.family
    }
}

impl FlatSurface for CylinderSurface {
    fn ambient(&self) -> FlatAmbient {
        FlatAmbient::product(self.family.space())
    }

    fn param_dim(&self) -> usize {
        self.family.space().dim()
    }

    fn point(&self, u: &[f64]) -> Result<Vec<f64>> {
        let k = u.len() - 1;
        let mut x = self.family.eval_family(self.s, &u[..k])?.point.into_coords();
        x.push(u[k]);
        Ok(x)
    }

    fn reference_normal(&self, u: &[f64]) -> Option<Vec<f64>> {
        let k = u.len() - 1;
        let mut n = self.family.eval_family(self.s, &u[..k]).ok()?.normal.into_coords();
        n.push(0.0);
        Some(n)
    }
}

/// A single leaf `f_s(M)` as a hypersurface of `Q^n`.
#[derive(Clone, Debug)]
pub struct LeafSurface {
    family: FamilySpec,
    s: f64,
}

impl LeafSurface {
    pub fn new(family: FamilySpec, s: f64) -> Self {
        LeafSurface { family, s }
    }
}

impl FlatSurface for LeafSurface {
    fn ambient(&self) -> FlatAmbient {
        FlatAmbient::space_form(self.family.space())
    }

    fn param_dim(&self) -> usize {
        self.family.chart_dim()
    }

    fn point(&self, u: &[f64]) -> Result<Vec<f64>> {
        Ok(self.family.eval_family(self.s, u)?.point.into_coords())
    }

    fn reference_normal(&self, u: &[f64]) -> Option<Vec<f64>> {
        Some(self.family.eval_family(self.s, u).ok()?.normal.into_coords())
    }
}

/// Horizontal slice `Q^n x {t}` in the standard conformal chart; normal `d/dt`.
#[derive(Clone, Debug)]
pub struct HorizontalSlice {
    chart: ConformalChart,
    height: f64,
}

impl HorizontalSlice {
    pub fn new(space: SpaceFormId, height: f64) -> Self {
        HorizontalSlice {
            chart: ConformalChart::standard(space),
            height,
        }
    }
}

impl FlatSurface for HorizontalSlice {
    fn ambient(&self) -> FlatAmbient {
        FlatAmbient::product(self.chart.space())
    }

    fn param_dim(&self) -> usize {
        self.chart.space().dim()
    }

    fn point(&self, u: &[f64]) -> Result<Vec<f64>> {
        let mut x = self.chart.from_chart(u);
        x.push(self.height);
        Ok(x)
    }

    fn reference_normal(&self, _u: &[f64]) -> Option<Vec<f64>> {
        let mut n = vec![0.0; self.chart.space().ambient_dim() + 1];
        *n.last_mut().expect("nonempty") = 1.0;
        Some(n)
    }
}

/// The level `{t} x Q^n` in chart coordinates, oriented by `-d/dt`.
#[derive(Clone, Copy, Debug)]
pub struct VerticalLeaf {
    pub dim: usize,
    pub t: f64,
}

impl ChartSurface for VerticalLeaf {
    fn param_dim(&self) -> usize {
        self.dim
    }

    fn point(&self, u: &[f64]) -> Result<Vec<f64>> {
        let mut x = vec![self.t];
        x.extend_from_slice(u);
        Ok(x)
    }

    fn reference_normal(&self, _u: &[f64]) -> Option<Vec<f64>> {
        let mut n = vec![0.0; self.dim + 1];
        n[0] = -1.0;
        Some(n)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleSpec {
    pub params: Vec<f64>,
    pub s: Option<f64>,
    /// Expected umbilical value, when known.
    pub analytic: Option<f64>,
    pub near_seam: bool,
}

impl SampleSpec {
    pub fn plain(params: Vec<f64>) -> Self {
        SampleSpec {
            params,
            s: None,
            analytic: None,
            near_seam: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleResult {
    pub s: Option<f64>,
    pub params: Vec<f64>,
    pub eigenvalues: Vec<f64>,
    pub mean: f64,
    pub spread: f64,
    pub near_seam: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Oracle {
    Flat,
    Chart,
}

#[derive(Clone, Debug)]
pub struct UmbilicReport {
    pub oracle: Oracle,
    pub h: f64,
    pub tol: f64,
    pub samples: Vec<SampleResult>,
    pub max_spread: f64,
    /// Largest `|mean - analytic|` over judged samples with a known value.
    pub analytic_comparison: Option<f64>,
    pub max_abs_eigenvalue: f64,
    pub excluded_near_seam: usize,
    pub passed: bool,
}

#[derive(Serialize)]
struct ReportJson {
    oracle: Oracle,
    h: f64,
    tol: f64,
    n_samples: usize,
    max_spread: f64,
    analytic_comparison: Option<f64>,
    passed: bool,
    excluded_near_seam: usize,
}

impl UmbilicReport {
    pub fn n_samples(&self) -> usize {
        self.samples.len() - self.excluded_near_seam
    }

    pub fn to_json(&self) -> String {
        let r = |v: f64| crate::export::round_sig(v);
        let doc = ReportJson {
            oracle: self.oracle,
            h: r(self.h),
            tol: r(self.tol),
            n_samples: self.n_samples(),
            max_spread: r(self.max_spread),
            analytic_comparison: self.analytic_comparison.map(r),
            passed: self.passed,
            excluded_near_seam: self.excluded_near_seam,
        };
        serde_json::to_string_pretty(&doc).expect("report serializes")
    }
}

fn build_report<E>(oracle: Oracle, grid: &[SampleSpec], h: f64, tol: f64, eval: E) -> Result<UmbilicReport>
where
    E: Fn(&[f64]) -> Result<Vec<f64>> + Sync,
{
    if grid.is_empty() {
        return Err(Error::InvalidParameter("empty sample grid".into()));
    }
    let eigen: Vec<Vec<f64>> = grid
        .par_iter()
        .map(|s| eval(&s.params))
        .collect::<Result<_>>()?;
    let mut samples = Vec::with_capacity(grid.len());
    let mut max_spread = 0.0f64;
    let mut max_abs = 0.0f64;
    let mut comparison: Option<f64> = None;
    let mut excluded = 0;
    for (spec, ev) in grid.iter().zip(eigen) {
        let mean = ev.iter().sum::<f64>() / ev.len() as f64;
        let spread = ev[ev.len() - 1] - ev[0];
        if spec.near_seam {
            excluded += 1;
        } else {
            max_spread = max_spread.max(spread);
            max_abs = ev.iter().fold(max_abs, |m, v| m.max(v.abs()));
            if let Some(k) = spec.analytic {
                let d = (mean - k).abs();
                comparison = Some(comparison.map_or(d, |c| c.max(d)));
            }
        }
        samples.push(SampleResult {
            s: spec.s,
            params: spec.params.clone(),
            eigenvalues: ev,
            mean,
            spread,
            near_seam: spec.near_seam,
        });
    }
    let judged = grid.len() - excluded;
    let passed = judged > 0 && max_spread <= tol && comparison.is_none_or(|c| c <= tol);
    Ok(UmbilicReport {
        oracle,
        h,
        tol,
        samples,
        max_spread,
        analytic_comparison: comparison,
        max_abs_eigenvalue: max_abs,
        excluded_near_seam: excluded,
        passed,
    })
}

/// Flat-oracle umbilicity report over a sample grid, evaluated in parallel.
pub fn umbilicity_report<S: FlatSurface + ?Sized>(surface: &S, grid: &[SampleSpec], h: f64, tol: f64) -> Result<UmbilicReport> {
    build_report(Oracle::Flat, grid, h, tol, |u| {
        Ok(shape_operator_flat(surface, u, h)?.eigenvalues)
    })
}

/// Chart-oracle umbilicity report.
pub fn umbilicity_report_chart<M, S>(metric: &M, surface: &S, grid: &[SampleSpec], h: f64, tol: f64) -> Result<UmbilicReport>
where
    M: ChartMetric + ?Sized,
    S: ChartSurface + ?Sized,
{
    build_report(Oracle::Chart, grid, h, tol, |u| {
        Ok(shape_operator_chart(metric, surface, u, h)?.eigenvalues)
    })
}

/// As [`umbilicity_report_chart`], with the surface rebuilt for every sample
/// by `localize`, e.g. in a coordinate chart centred at that sample.
pub fn umbilicity_report_chart_local<M, S, L>(metric: &M, localize: L, grid: &[SampleSpec], h: f64, tol: f64) -> Result<UmbilicReport>
where
    M: ChartMetric + ?Sized,
    S: ChartSurface,
    L: Fn(&[f64]) -> Result<S> + Sync,
{
    build_report(Oracle::Chart, grid, h, tol, |u| {
        Ok(shape_operator_chart(metric, &localize(u)?, u, h)?.eigenvalues)
    })
}

fn grid_axis(k: usize, count: usize, a: f64, b: f64) -> f64 {
    if count == 1 {
        0.5 * (a + b)
    } else {
        a + (b - a) * k as f64 / (count - 1) as f64
    }
}

/// Chart ranges of oracle grids. Polar angles avoid the poles of the
/// sphere chart; flat charts stay inside 80% of the half-width.
fn chart_ranges(family: &FamilySpec, nc: usize) -> Vec<(f64, f64)> {
    let d = family.chart_dim();
    (0..d)
        .map(|i| {
            if family.kind().is_sphere() {
                if i + 1 == d {
                    (0.0, 2.0 * std::f64::consts::PI * (1.0 - 1.0 / nc.max(1) as f64))
                } else {
                    (0.35, std::f64::consts::PI - 0.35)
                }
            } else {
                let l = 0.8 * family.chart_half_width();
                (-l, l)
            }
        })
        .collect()
}

/// Default `s` window of oracle grids: 5% inside each end. Horosphere
/// graphs stop at `s = 1.5`; beyond that the hyperboloid coordinates grow
/// like `e^s` while the leaf tangents shrink like `e^{-s}`, and rounding
/// dominates the finite differences.
pub fn default_window(profile: &Profile) -> (f64, f64) {
    let (a, b) = profile.s_range();
    let r = b - a;
    if profile.family().kind() == FamilyKind::Horosphere {
        return (0.1, 1.5);
    }
    (a + 0.05 * r, b - 0.05 * r)
}

/// Grid `(chart, t)` on a vertical cylinder: `nc` values per chart
/// coordinate (as in [`graph_grid`]) and `nt` heights in `[-1, 1]`. The
/// analytic value 0 is attached over totally geodesic leaves.
pub fn cylinder_grid(surface: &CylinderSurface, nc: usize, nt: usize) -> Result<Vec<SampleSpec>> {
    let family = surface.family();
    let lambda = family.lambda_of(surface.leaf_parameter())?;
    let ranges = chart_ranges(family, nc);
    let mut grid = Vec::new();
    for j in 0..nt {
        let t = grid_axis(j, nt, -1.0, 1.0);
        for mut k in 0..nc.pow(ranges.len() as u32) {
            let mut params = Vec::with_capacity(ranges.len() + 1);
            for r in &ranges {
                params.push(grid_axis(k % nc, nc, r.0, r.1));
                k /= nc;
            }
            params.push(t);
            grid.push(SampleSpec {
                params,
                s: None,
                analytic: (lambda == 0.0).then_some(0.0),
                near_seam: false,
            });
        }
    }
    Ok(grid)
}

/// Interior `(s, chart)` grid of a graph: `ns` values of `s` in the window
/// (by default [`default_window`]) and `nc` values per chart coordinate.
pub fn graph_grid(surface: &GraphSurface, ns: usize, nc: usize, s_window: Option<(f64, f64)>) -> Result<Vec<SampleSpec>> {
    let profile = surface.profile();
    let family = profile.family();
    let (lo, hi) = s_window.unwrap_or_else(|| default_window(profile));
    let ranges = chart_ranges(family, nc);
    let mut grid = Vec::new();
    let total = nc.pow(ranges.len() as u32);
    for i in 0..ns {
        let s = grid_axis(i, ns, lo, hi);
        for mut k in 0..total {
            let mut chart = Vec::with_capacity(ranges.len());
            for r in &ranges {
                chart.push(grid_axis(k % nc, nc, r.0, r.1));
                k /= nc;
            }
            grid.push(surface.sample(s, &chart)?);
        }
    }
    Ok(grid)
}
